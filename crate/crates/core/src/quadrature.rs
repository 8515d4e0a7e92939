//! Adaptive Gauss–Kronrod quadrature for the attenuation kernel
//! `∫ exp(-κ r) / r dr` shared by all mean-interference expressions.

use crate::error::SimError;

// 15-point Kronrod abscissae on [-1, 1] (positive half) with the embedded
// 7-point Gauss rule, standard QUADPACK values.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One GK15 panel: returns the Kronrod estimate and |kronrod - gauss| as the
/// local error estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let fsum = f(center - x) + f(center + x);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    ((kronrod * half), ((kronrod - gauss) * half).abs())
}

fn refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    if err <= tol || depth >= 48 {
        return value;
    }
    let mid = 0.5 * (a + b);
    refine(f, a, mid, tol * 0.5, depth + 1) + refine(f, mid, b, tol * 0.5, depth + 1)
}

/// `∫_{r_min}^{r_max} exp(-κ r) / r dr`.
///
/// κ = 0 takes the closed form `ln(r_max / r_min)`; otherwise the integral is
/// refined adaptively to ~1e-12 relative accuracy (well below the 1 dB
/// validation bar of the interference models).
pub fn attenuation_integral(r_min: f64, r_max: f64, kappa: f64) -> Result<f64, SimError> {
    if !(r_min > 0.0 && r_max > r_min) {
        return Err(SimError::InvalidBounds { r_min, r_max });
    }
    if !(kappa >= 0.0) {
        return Err(SimError::invalid("kappa", "must be >= 0"));
    }
    if kappa == 0.0 {
        return Ok((r_max / r_min).ln());
    }
    let f = |r: f64| (-kappa * r).exp() / r;
    let (coarse, _) = gk15(&f, r_min, r_max);
    let tol = 1e-12 * coarse.abs().max(f64::MIN_POSITIVE);
    Ok(refine(&f, r_min, r_max, tol, 0))
}
