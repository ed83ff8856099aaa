use std::fmt;

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit 2.
    Validation(String),
    /// The computation failed or did not converge: exit 3.
    Numerical(String),
    /// Could not write output: exit 3.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": { "kind": self.kind(), "message": self.message(), "exit_code": self.exit_code() } })
            .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<xpzeta::Error> for CliError {
    fn from(e: xpzeta::Error) -> Self {
        use xpzeta::Error as E;
        match e {
            E::InvalidArgument(_)
            | E::InvalidModel(_)
            | E::InvalidPotential(_)
            | E::Unnormalized(_)
            | E::WindowTooSmall { .. }
            | E::PoleAtOne
            | E::GammaPole(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
