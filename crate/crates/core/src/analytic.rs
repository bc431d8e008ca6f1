//! Closed-form results for the builtin chain families, used as independent
//! references for the exact and WKB solvers.

use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{clausen_cl2, integrate_fn, Singularity, Tolerance};
use crate::profiles::{FamilyParameters, FamilyTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Spectrum,
    Spacing,
    TurningPoints,
    Density,
    Envelope,
    Filling,
}

/// A scalar closed form `ε ↦ value` for one family and quantity.
#[derive(Clone)]
pub struct ClosedFormResult {
    pub family: FamilyTag,
    pub quantity: Quantity,
    pub evaluator: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>,
}

impl std::fmt::Debug for ClosedFormResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosedFormResult")
            .field("family", &self.family)
            .field("quantity", &self.quantity)
            .finish_non_exhaustive()
    }
}

impl ClosedFormResult {
    pub fn eval(&self, eps: f64) -> Result<f64> {
        (self.evaluator)(eps)
    }
}

/// Closed-form filling fraction `ν(ε_F)` where one is known.
pub fn closed_form_filling(family: &FamilyParameters) -> Option<ClosedFormResult> {
    let evaluator: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync> = match *family {
        FamilyParameters::Rainbow { h } => Arc::new(move |e| rainbow_filling(h, e)),
        FamilyParameters::Krawtchouk { rescaled: true, .. } => {
            Arc::new(|e: f64| Ok(e.clamp(0.0, 1.0)))
        }
        FamilyParameters::Homogeneous { j, b } => {
            Arc::new(move |e: f64| Ok((-((e - b) / (2.0 * j.abs())).clamp(-1.0, 1.0)).acos() / PI))
        }
        _ => return None,
    };
    Some(ClosedFormResult {
        family: family.tag(),
        quantity: Quantity::Filling,
        evaluator,
    })
}

/// Closed-form density of states `D(ε)` on a chain of length `ell` and
/// spacing `a`, where one is known.
pub fn closed_form_dos(family: &FamilyParameters, ell: f64, a: f64) -> Option<ClosedFormResult> {
    let evaluator: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync> = match *family {
        FamilyParameters::Rainbow { h } => Arc::new(move |e| rainbow_dos(h, e, ell, a)),
        FamilyParameters::Krawtchouk { rescaled, .. } => {
            let d = if rescaled { ell / a } else { 1.0 };
            Arc::new(move |_| Ok(d))
        }
        FamilyParameters::Homogeneous { j, b } => Arc::new(move |e: f64| {
            let d = 4.0 * j * j - (e - b).powi(2);
            Ok(if d > 0.0 {
                ell / (PI * a * d.sqrt())
            } else {
                0.0
            })
        }),
        _ => return None,
    };
    Some(ClosedFormResult {
        family: family.tag(),
        quantity: Quantity::Spacing,
        evaluator,
    })
}

/// Homogeneous chain energies `B − 2J cos(πk/(N+1))`, `k = 1..N`, and modes
/// `Φ_{n,k} = (−1)^{n−1} √(2/(N+1)) sin(πnk/(N+1))` stored column-wise.
pub fn homogeneous_spectrum(
    j: f64,
    b: f64,
    n: usize,
) -> Result<(Vec<f64>, nalgebra::DMatrix<f64>)> {
    if n == 0 || j == 0.0 {
        return Err(Error::Domain(format!(
            "homogeneous spectrum needs N >= 1 and J != 0, got N = {n}, J = {j}"
        )));
    }
    let np1 = (n + 1) as f64;
    let energies = (1..=n)
        .map(|k| b - 2.0 * j * (PI * k as f64 / np1).cos())
        .collect();
    let norm = (2.0 / np1).sqrt();
    let modes = nalgebra::DMatrix::from_fn(n, n, |row, col| {
        let (site, k) = ((row + 1) as f64, (col + 1) as f64);
        let sign = if row % 2 == 0 { 1.0 } else { -1.0 };
        sign * norm * (PI * site * k / np1).sin()
    });
    Ok((energies, modes))
}

/// Exact occupations of the homogeneous chain with the `M` lowest modes filled,
/// `M/(N+1) − sin(Mπn/(N+1)) cos((M+1)πn/(N+1)) / ((N+1) sin(πn/(N+1)))`.
pub fn homogeneous_density_exact(n: usize, m: usize) -> Result<Vec<f64>> {
    if m > n {
        return Err(Error::Domain(format!("M = {m} exceeds N = {n}")));
    }
    let np1 = (n + 1) as f64;
    let mf = m as f64;
    Ok((1..=n)
        .map(|site| {
            let s = site as f64;
            mf / np1
                - (mf * PI * s / np1).sin() * ((mf + 1.0) * PI * s / np1).cos()
                    / (np1 * (PI * s / np1).sin())
        })
        .collect())
}

/// Turning points of the Krawtchouk chain as fractions of `ℓ`.
pub fn krawtchouk_turning_points(q: f64, eps: f64) -> Result<(f64, f64)> {
    if !(q > 0.0 && q < 1.0) || !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!(
            "need q in (0, 1) and eps in [0, 1], got q = {q}, eps = {eps}"
        )));
    }
    let c = q + eps * (1.0 - 2.0 * q);
    let r = 2.0 * (q * (1.0 - q) * eps * (1.0 - eps)).sqrt();
    Ok((c - r, c + r))
}

/// Level spacing of the rescaled Krawtchouk chain with `N` sites.
pub fn krawtchouk_spacing(n: usize) -> f64 {
    1.0 / n as f64
}

/// Krawtchouk envelope `√(2/π) ((x − x₁)(x₂ − x))^{−1/4}` inside the well.
pub fn krawtchouk_envelope(q: f64, eps: f64, ell: f64, x: f64) -> Result<f64> {
    let (t1, t2) = krawtchouk_turning_points(q, eps)?;
    let (x1, x2) = (t1 * ell, t2 * ell);
    if x <= x1 || x >= x2 {
        return Ok(0.0);
    }
    Ok((2.0 / PI).sqrt() * ((x - x1) * (x2 - x)).powf(-0.25))
}

fn check_rainbow(h: f64, eps: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Domain(format!("rainbow needs h > 0, got {h}")));
    }
    if !(-1.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!(
            "rainbow energy {eps} outside [-1, 1]"
        )));
    }
    Ok(())
}

/// Rainbow density of states `D(ε)`.
pub fn rainbow_dos(h: f64, eps: f64, ell: f64, a: f64) -> Result<f64> {
    check_rainbow(h, eps)?;
    let t = eps.abs();
    let edge = (-h / 2.0).exp();
    if t >= edge {
        return Ok(ell / (h * a * t) * (1.0 - 2.0 / PI * t.asin()));
    }
    let c = (h / 2.0).exp();
    let pre = 2.0 * ell / (PI * h * a);
    if t < 1e-4 {
        // arcsin series of (arcsin(ct) − arcsin t)/t
        let t2 = t * t;
        return Ok(pre
            * ((c - 1.0)
                + (c.powi(3) - 1.0) * t2 / 6.0
                + 3.0 * (c.powi(5) - 1.0) * t2 * t2 / 40.0));
    }
    Ok(pre / t * ((c * t).asin() - t.asin()))
}

/// `f(t) = (π/2) ln 2 − ln(2t) arcsin t − ½ Cl₂(2 arcsin t)`.
fn rainbow_f(t: f64) -> Result<f64> {
    let s = t.asin();
    Ok(PI / 2.0 * LN_2 - (2.0 * t).ln() * s - 0.5 * clausen_cl2(2.0 * s)?)
}

/// Rainbow filling fraction `ν(ε_F)`, extended to `ε_F > 0` by `ν(−ε) = 1 − ν(ε)`.
pub fn rainbow_filling(h: f64, eps_f: f64) -> Result<f64> {
    check_rainbow(h, eps_f)?;
    if eps_f > 0.0 {
        return Ok(1.0 - rainbow_filling(h, -eps_f)?);
    }
    let t = -eps_f;
    if t == 0.0 {
        return Ok(0.5);
    }
    if t >= (-h / 2.0).exp() {
        let l = (2.0 * t).ln();
        let s = t.asin();
        return Ok(-l / h + (2.0 * l * s + clausen_cl2(2.0 * s)?) / (PI * h));
    }
    Ok(0.5 + 2.0 / (PI * h) * (rainbow_f((h / 2.0).exp() * t)? - rainbow_f(t)?))
}

/// Rainbow turning points `ℓ/2 ± (ℓ/h) ln|ε|`; `None` when the well fills
/// the chain or `ε` lies outside the band.
pub fn rainbow_turning_points(h: f64, eps: f64, ell: f64) -> Result<Option<(f64, f64)>> {
    check_rainbow(h, eps)?;
    let t = eps.abs();
    if t < (-h / 2.0).exp() {
        return Ok(None);
    }
    let w = ell / h * t.ln();
    Ok(Some((ell / 2.0 + w, ell / 2.0 - w)))
}

/// Rainbow envelope; zero outside the well.
pub fn rainbow_envelope(h: f64, eps: f64, ell: f64, x: f64) -> Result<f64> {
    check_rainbow(h, eps)?;
    let t = eps.abs();
    let d = (-h * (1.0 - 2.0 * x / ell).abs()).exp() - t * t;
    if d <= 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let angle = if t >= (-h / 2.0).exp() {
        PI / 2.0 - t.asin()
    } else {
        ((h / 2.0).exp() * t).asin() - t.asin()
    };
    Ok((h * t / ell).sqrt() * d.powf(-0.25) * angle.powf(-0.5))
}

fn check_cosine(j0: f64) -> Result<()> {
    if !(j0 > 0.0 && j0 < 1.0) {
        return Err(Error::Domain(format!(
            "cosine chain needs J0 in (0, 1), got {j0}"
        )));
    }
    Ok(())
}

/// Cosine-chain turning points `x₁ = (ℓ/2π) arccos((|ε| − 2)/(2J₀))`,
/// `x₂ = ℓ − x₁`; `None` unless `2 − 2J₀ < |ε| < 2 + 2J₀`.
pub fn cosine_turning_points(j0: f64, eps: f64, ell: f64) -> Result<Option<(f64, f64)>> {
    check_cosine(j0)?;
    let c = (eps.abs() - 2.0) / (2.0 * j0);
    if !(-1.0..=1.0).contains(&c) || eps.abs() <= 2.0 - 2.0 * j0 {
        return Ok(None);
    }
    let x1 = ell / (2.0 * PI) * c.acos();
    Ok(Some((x1, ell - x1)))
}

/// Cosine-chain WKB density `a·ρ(x, ε_F)`.
pub fn cosine_density(j0: f64, eps_f: f64, x: f64, ell: f64) -> Result<f64> {
    check_cosine(j0)?;
    if eps_f.abs() >= 2.0 + 2.0 * j0 {
        return Ok(if eps_f < 0.0 { 0.0 } else { 1.0 });
    }
    if let Some((x1, x2)) = cosine_turning_points(j0, eps_f, ell)? {
        if x1 <= x && x <= x2 {
            return Ok(if eps_f < 0.0 { 0.0 } else { 1.0 });
        }
    }
    let j = 1.0 + j0 * (2.0 * PI * x / ell).cos();
    Ok((-eps_f / (2.0 * j)).clamp(-1.0, 1.0).acos() / PI)
}

/// Largest filling without depletion, `(1/π²) ∫₀^π arccos((1 − J₀)/(1 + J₀ cos s)) ds`.
pub fn cosine_numax(j0: f64) -> Result<f64> {
    check_cosine(j0)?;
    let f = |s: f64| ((1.0 - j0) / (1.0 + j0 * s.cos())).min(1.0).acos();
    let v = integrate_fn(
        f,
        0.0,
        PI,
        Singularity::None,
        Tolerance::new(1e-13, 1e-13, 2000)?,
    )?;
    Ok(v / (PI * PI))
}

/// Critical Fermi energies `e_i` and fillings `ν_i` of the asymmetric cosine
/// chain with `J₀ = 3/4`, `b = 5`, `r = 2`.
pub const ASYMMETRIC_COSINE_CRITICAL: [(f64, f64); 9] = [
    (-2.3009, 0.0225),
    (-0.1737, 0.2100),
    (0.7998, 0.3700),
    (1.2929, 0.4425),
    (1.5000, 0.4725),
    (2.4384, 0.6225),
    (3.1972, 0.7700),
    (3.5000, 0.8225),
    (4.8055, 0.9350),
];

pub fn asymmetric_cosine_critical_energies() -> &'static [(f64, f64)] {
    &ASYMMETRIC_COSINE_CRITICAL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{density_exact, diagonalize, FilledState};
    use crate::profiles::make_builtin;
    use crate::wkb;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn homogeneous_examples() {
        let (e, _) = homogeneous_spectrum(1.0, 0.0, 3).unwrap();
        let r2 = 2f64.sqrt();
        for (a, b) in e.iter().zip([-r2, 0.0, r2]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(
            homogeneous_spectrum(1.0, 0.7, 1).unwrap().0[0],
            0.7,
            epsilon = 1e-15
        );
        assert!(homogeneous_spectrum(0.0, 0.0, 3).is_err());
    }

    #[test]
    fn homogeneous_matches_eigensolver() {
        let fam = FamilyParameters::Homogeneous { j: 1.0, b: 0.0 };
        let (p, _) = make_builtin(&fam, 50, 1.0).unwrap();
        let s = diagonalize(&p).unwrap();
        let (e, modes) = homogeneous_spectrum(1.0, 0.0, 50).unwrap();
        let worst = e
            .iter()
            .zip(s.energies())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10);
        for k in [0, 17, 49] {
            let v = s.mode(k).unwrap();
            let sign = (v[0] * modes[(0, k)]).signum();
            for i in 0..50 {
                assert_abs_diff_eq!(v[i], sign * modes[(i, k)], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn homogeneous_density_examples() {
        assert!(homogeneous_density_exact(10, 0)
            .unwrap()
            .iter()
            .all(|&v| v.abs() < 1e-15));
        assert!(homogeneous_density_exact(10, 10)
            .unwrap()
            .iter()
            .all(|&v| (v - 1.0).abs() < 1e-12));
        let d = homogeneous_density_exact(400, 200).unwrap();
        assert!((d[199] - 0.5).abs() < 2.0 / 400.0);
        let fam = FamilyParameters::Homogeneous { j: 1.0, b: 0.0 };
        let (p, _) = make_builtin(&fam, 60, 1.0).unwrap();
        let s = diagonalize(&p).unwrap();
        let ex = density_exact(&s, &FilledState::new(&s, 23).unwrap()).unwrap();
        for (a, b) in ex.iter().zip(homogeneous_density_exact(60, 23).unwrap()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn krawtchouk_examples() {
        let q = 0.25;
        let (a, b) = krawtchouk_turning_points(q, 0.0).unwrap();
        assert_abs_diff_eq!(a, q, epsilon = 1e-15);
        assert_abs_diff_eq!(b, q, epsilon = 1e-15);
        let (a, b) = krawtchouk_turning_points(q, 1.0).unwrap();
        assert_abs_diff_eq!(a, 1.0 - q, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0 - q, epsilon = 1e-15);
        assert_eq!(krawtchouk_turning_points(0.5, 0.5).unwrap(), (0.0, 1.0));
        assert_eq!(krawtchouk_spacing(400), 0.0025);

        let fam = FamilyParameters::krawtchouk(q);
        let (_, c) = make_builtin(&fam, 400, 1.0).unwrap();
        let wd = wkb::wells(&c, 0.3, wkb::DEFAULT_SCAN).unwrap();
        let (t1, t2) = krawtchouk_turning_points(q, 0.3).unwrap();
        assert_abs_diff_eq!(wd.wells[0].lower, t1 * 400.0, epsilon = 1e-9);
        assert_abs_diff_eq!(wd.wells[0].upper, t2 * 400.0, epsilon = 1e-9);
        let grid = [100.0, 150.0, 200.0];
        let env = wkb::envelope(&c, 0.3, &wd, wkb::WellSelector::Combined, &grid).unwrap();
        for (x, v) in env {
            assert_abs_diff_eq!(
                v,
                krawtchouk_envelope(q, 0.3, 400.0, x).unwrap(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn rainbow_examples() {
        let h = 1.0;
        assert_eq!(rainbow_dos(h, -1.0, 400.0, 1.0).unwrap(), 0.0);
        let edge = (-0.5f64).exp();
        let up = rainbow_dos(h, -edge, 400.0, 1.0).unwrap();
        // the lower branch approaches the edge like a square root
        let t = edge * (1.0 - 1e-15);
        let down = rainbow_dos(h, -t, 400.0, 1.0).unwrap();
        assert_abs_diff_eq!(up, down, epsilon = 1e-6 * up);
        let series = rainbow_dos(h, 0.5e-4, 400.0, 1.0).unwrap();
        let direct =
            2.0 * 400.0 / (PI * 1.5e-4) * (((h / 2.0).exp() * 1.5e-4f64).asin() - 1.5e-4f64.asin());
        let near = rainbow_dos(h, 1.5e-4, 400.0, 1.0).unwrap();
        assert_abs_diff_eq!(near, direct, epsilon = 1e-9 * direct);
        assert_abs_diff_eq!(series, near, epsilon = 1e-6 * near);

        assert_eq!(rainbow_filling(h, 0.0).unwrap(), 0.5);
        assert_abs_diff_eq!(rainbow_filling(h, -1.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rainbow_filling(h, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        // oracle: independent high-precision evaluation of the closed form
        assert_abs_diff_eq!(
            rainbow_filling(h, -0.69945).unwrap(),
            0.123755257211469,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            rainbow_filling(h, -0.697736967075611).unwrap(),
            0.125,
            epsilon = 1e-12
        );
        let a = rainbow_filling(h, -edge).unwrap();
        let b = rainbow_filling(h, -edge * (1.0 - 1e-14)).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);

        let (x1, x2) = rainbow_turning_points(h, -0.69945, 400.0).unwrap().unwrap();
        assert_abs_diff_eq!(x1, 57.018, epsilon = 5e-3);
        assert_abs_diff_eq!(x2, 342.982, epsilon = 5e-3);
        assert_eq!(
            rainbow_turning_points(h, -1.0, 400.0).unwrap(),
            Some((200.0, 200.0))
        );
        let (x1, x2) = rainbow_turning_points(h, -edge, 400.0).unwrap().unwrap();
        assert_abs_diff_eq!(x1, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x2, 400.0, epsilon = 1e-12);
        assert_eq!(rainbow_turning_points(h, -0.3, 400.0).unwrap(), None);
    }

    #[test]
    fn rainbow_matches_quadrature() {
        let h = 1.0;
        let (_, c) = make_builtin(&FamilyParameters::Rainbow { h }, 400, 1.0).unwrap();
        for i in 0..50 {
            let e = -0.99 + 1.98 * i as f64 / 49.0;
            let nu_q = wkb::filling_fraction(&c, e).unwrap();
            assert_abs_diff_eq!(rainbow_filling(h, e).unwrap(), nu_q, epsilon = 1e-7);
            let d = rainbow_dos(h, e, 400.0, 1.0).unwrap();
            let dq = wkb::density_of_states(&c, e).unwrap();
            assert!(((d - dq) / d).abs() < 1e-7, "{e}: {d} vs {dq}");
        }
        let wd = wkb::wells(&c, -0.8, wkb::DEFAULT_SCAN).unwrap();
        let grid = [100.0, 200.0, 250.0];
        let env = wkb::envelope(&c, -0.8, &wd, wkb::WellSelector::Combined, &grid).unwrap();
        for (x, v) in env {
            assert_abs_diff_eq!(
                v,
                rainbow_envelope(h, -0.8, 400.0, x).unwrap(),
                epsilon = 1e-9
            );
        }
        assert_eq!(rainbow_envelope(h, -0.8, 400.0, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn cosine_examples() {
        let ell = 400.0;
        for x in [0.0, 77.0, 200.0, 399.0] {
            assert_eq!(cosine_density(0.5, 0.0, x, ell).unwrap(), 0.5);
        }
        let (x1, x2) = cosine_turning_points(0.5, -2.0, ell).unwrap().unwrap();
        assert_abs_diff_eq!(x1, 100.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x2, 300.0, epsilon = 1e-12);
        assert_eq!(cosine_density(0.5, -2.0, 150.0, ell).unwrap(), 0.0);
        assert!(cosine_density(0.5, -2.0, 50.0, ell).unwrap() > 0.0);
        assert!(cosine_numax(1e-6).unwrap() < 1e-2);
        let (_, c) = make_builtin(&FamilyParameters::Cosine { j0: 0.5 }, 400, 1.0).unwrap();
        for x in [10.0, 80.0, 150.0, 390.0] {
            for e in [-2.2, -0.5, 0.7, 2.1] {
                assert_abs_diff_eq!(
                    cosine_density(0.5, e, x, ell).unwrap(),
                    wkb::local_density(&c, x, e),
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn numax_matches_filling() {
        let mut prev = 0.0;
        for j0 in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let (_, c) = make_builtin(&FamilyParameters::Cosine { j0 }, 400, 1.0).unwrap();
            let v = cosine_numax(j0).unwrap();
            assert_abs_diff_eq!(
                v,
                wkb::filling_fraction(&c, 2.0 * j0 - 2.0).unwrap(),
                epsilon = 1e-8
            );
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn table_constants() {
        let t = asymmetric_cosine_critical_energies();
        assert_eq!(t.len(), 9);
        assert_eq!(t[0], (-2.3009, 0.0225));
        assert_eq!(t[4], (1.5, 0.4725));
        assert_eq!(t[8], (4.8055, 0.935));
    }

    #[test]
    fn closed_form_handles() {
        let fam = FamilyParameters::Rainbow { h: 2.0 };
        let f = closed_form_filling(&fam).unwrap();
        assert_eq!(f.quantity, Quantity::Filling);
        assert_abs_diff_eq!(f.eval(0.0).unwrap(), 0.5, epsilon = 1e-15);
        let d = closed_form_dos(&FamilyParameters::krawtchouk(0.3), 400.0, 1.0).unwrap();
        assert_eq!(d.eval(0.4).unwrap(), 400.0);
        assert!(closed_form_filling(&FamilyParameters::Cosine { j0: 0.5 }).is_none());
        let hom = closed_form_dos(
            &FamilyParameters::Homogeneous { j: 1.0, b: 0.0 },
            400.0,
            1.0,
        )
        .unwrap();
        let (_, c) =
            make_builtin(&FamilyParameters::Homogeneous { j: 1.0, b: 0.0 }, 400, 1.0).unwrap();
        assert_abs_diff_eq!(
            hom.eval(0.3).unwrap(),
            wkb::density_of_states(&c, 0.3).unwrap(),
            epsilon = 1e-9
        );
    }

    proptest! {
        #[test]
        fn rainbow_symmetry_and_monotone(h in 0.1f64..10.0, e in -1.0f64..0.0, de in 0.0f64..0.2) {
            let a = rainbow_filling(h, e).unwrap();
            prop_assert!((a + rainbow_filling(h, -e).unwrap() - 1.0).abs() < 1e-12);
            let b = rainbow_filling(h, (e + de).min(1.0)).unwrap();
            prop_assert!(b >= a - 1e-12);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&a));
        }
    }
}
