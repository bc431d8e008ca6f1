use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// ζ(2k) for k ≥ 1.
fn zeta_even(k: usize) -> f64 {
    match k {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        _ => {
            // direct sum with an Euler–Maclaurin tail
            let s = 2.0 * k as f64;
            let m = 16.0_f64;
            let head: f64 = (1..16).map(|n| (n as f64).powf(-s)).sum();
            head + m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s) + s * m.powf(-s - 1.0) / 12.0
        }
    }
}

/// Clausen's integral `Cl₂(θ) = Σ_{n≥1} sin(nθ)/n²` for `θ ∈ [0, 2π]`.
///
/// Uses `Cl₂(2π − θ) = −Cl₂(θ)` to reduce to `[0, π]`, then the expansion
/// `θ − θ ln θ + Σ_k ζ(2k) θ^{2k+1} / (k (2k+1) (2π)^{2k})`, whose ratio of
/// successive terms is at most 1/4 on that range.
pub fn clausen_cl2(theta: f64) -> Result<f64> {
    if !(0.0..=TAU).contains(&theta) {
        return Err(Error::Domain(format!(
            "Clausen argument {theta} outside [0, 2π]"
        )));
    }
    let (t, sign) = if theta > PI {
        (TAU - theta, -1.0)
    } else {
        (theta, 1.0)
    };
    if t == 0.0 || t == PI {
        return Ok(0.0);
    }
    let r2 = (t / TAU).powi(2);
    let mut power = t;
    let mut sum = t - t * t.ln();
    for k in 1..60 {
        power *= r2;
        let term = zeta_even(k) * power / (k as f64 * (2.0 * k as f64 + 1.0));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    Ok(sign * sum)
}
