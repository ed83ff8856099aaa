//! Special functions: ζ, log Γ, the Riemann–Siegel functions, Catalan numbers
//! and Mellin transforms of potentials.

pub mod catalan;
pub mod gamma;
pub mod mellin;
pub mod theta;
pub mod zeta;

pub use catalan::catalan;
pub use gamma::log_gamma;
pub use mellin::{mellin, PotentialSpec};
pub use theta::{rs_phase2, rs_theta, rs_z};
pub use zeta::{zeta, zeta_real, zeta_with, ZetaConfig};
