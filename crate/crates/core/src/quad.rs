//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One G7K15 panel: (Kronrod estimate, |Kronrod - Gauss|).
pub fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by recursive
/// bisection. Fails when the recursion depth is exhausted.
pub fn integrate<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    adapt(f, a, b, tol, 0)
}

const MAX_DEPTH: u32 = 40;

fn adapt<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<Complex64> {
    let (value, err) = gk15(f, a, b);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Quadrature { lo: a, hi: b, estimate: f64::INFINITY });
    }
    if err <= tol || (b - a).abs() <= 1e-13 * (1.0 + a.abs()) {
        return Ok(value);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature { lo: a, hi: b, estimate: err });
    }
    let mid = 0.5 * (a + b);
    let left = adapt(f, a, mid, 0.5 * tol, depth + 1)?;
    let right = adapt(f, mid, b, 0.5 * tol, depth + 1)?;
    Ok(left + right)
}

/// Integrates over `[a, b]` split into panels no wider than `panel`, each
/// refined adaptively. Suited to integrands with many oscillations.
pub fn integrate_panels<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    panel: f64,
    tol: f64,
) -> Result<Complex64> {
    let n = ((b - a) / panel).ceil().max(1.0) as usize;
    let width = (b - a) / n as f64;
    let per_panel = tol / n as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let lo = a + k as f64 * width;
        let hi = if k + 1 == n { b } else { lo + width };
        total += integrate(f, lo, hi, per_panel)?;
    }
    Ok(total)
}
