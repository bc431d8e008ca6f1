use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::Tolerance;
use crate::error::{Error, Result};

/// Which endpoints of the integration interval carry an inverse square-root
/// singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Singularity {
    #[default]
    None,
    InverseSqrtLower,
    InverseSqrtUpper,
    InverseSqrtBoth,
}

impl Singularity {
    pub fn from_ends(lower: bool, upper: bool) -> Self {
        match (lower, upper) {
            (false, false) => Self::None,
            (true, false) => Self::InverseSqrtLower,
            (false, true) => Self::InverseSqrtUpper,
            (true, true) => Self::InverseSqrtBoth,
        }
    }
}

/// A one-dimensional integral `∫_lower^upper f(x) dx`.
pub struct Integrand<F> {
    pub f: F,
    pub lower: f64,
    pub upper: f64,
    pub singularity: Singularity,
}

// 15-point Kronrod rule with its embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Change of variables applied to one piece of the integral.
#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// x = anchor + u²
    SqrtFromBelow(f64),
    /// x = anchor − u²
    SqrtFromAbove(f64),
}

impl Map {
    #[inline]
    fn eval<F: Fn(f64) -> f64>(self, f: &F, u: f64) -> f64 {
        match self {
            Map::Identity => f(u),
            Map::SqrtFromBelow(a) => 2.0 * u * f(a + u * u),
            Map::SqrtFromAbove(b) => 2.0 * u * f(b - u * u),
        }
    }
}

struct Segment {
    map: Map,
    a: f64,
    b: f64,
    result: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = map.eval(f, center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = map.eval(f, center - dx);
        let f2 = map.eval(f, center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !res_k.is_finite() {
        return Err(Error::Numerical(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(roundoff);
    }
    Ok(Segment {
        map,
        a,
        b,
        result,
        error,
    })
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, pieces: &[(Map, f64, f64)], tol: Tolerance) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let mut frozen_result = 0.0;
    let mut frozen_error = 0.0;
    for &(map, a, b) in pieces {
        if b > a {
            heap.push(kronrod(f, map, a, b)?);
        }
    }
    let mut bisections = 0;
    loop {
        let total: f64 = frozen_result + heap.iter().map(|s| s.result).sum::<f64>();
        let error: f64 = frozen_error + heap.iter().map(|s| s.error).sum::<f64>();
        let target = tol.abs_tol.max(tol.rel_tol * total.abs());
        if error <= target {
            return Ok(total);
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::Convergence {
                estimate: total,
                error_bound: error,
                iterations: bisections,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = (worst.b - worst.a)
            <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if too_narrow || bisections >= tol.max_iter {
            if bisections >= tol.max_iter {
                return Err(Error::Convergence {
                    estimate: total,
                    error_bound: error,
                    iterations: bisections,
                });
            }
            frozen_result += worst.result;
            frozen_error += worst.error;
            continue;
        }
        bisections += 1;
        heap.push(kronrod(f, worst.map, worst.a, mid)?);
        heap.push(kronrod(f, worst.map, mid, worst.b)?);
    }
}

/// Adaptive Gauss–Kronrod quadrature.
///
/// Endpoints declared singular are regularised with `x = endpoint ± u²`,
/// which turns an `|x − endpoint|^{-1/2}` blow-up into a bounded integrand.
/// When both ends are singular the interval is split at its midpoint.
pub fn integrate<F: Fn(f64) -> f64>(spec: &Integrand<F>, tol: Tolerance) -> Result<f64> {
    tol.validate()?;
    let (a, b) = (spec.lower, spec.upper);
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a > b {
        return Err(Error::InvalidInput(format!(
            "lower limit {a} exceeds upper limit {b}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let pieces = match spec.singularity {
        Singularity::None => vec![(Map::Identity, a, b)],
        Singularity::InverseSqrtLower => vec![(Map::SqrtFromBelow(a), 0.0, (b - a).sqrt())],
        Singularity::InverseSqrtUpper => vec![(Map::SqrtFromAbove(b), 0.0, (b - a).sqrt())],
        Singularity::InverseSqrtBoth => {
            let h = (0.5 * (b - a)).sqrt();
            vec![
                (Map::SqrtFromBelow(a), 0.0, h),
                (Map::SqrtFromAbove(b), 0.0, h),
            ]
        }
    };
    adaptive(&spec.f, &pieces, tol)
}

/// Shorthand for [`integrate`] without building an [`Integrand`].
pub fn integrate_fn<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    upper: f64,
    singularity: Singularity,
    tol: Tolerance,
) -> Result<f64> {
    integrate(
        &Integrand {
            f,
            lower,
            upper,
            singularity,
        },
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_rule_is_exact_for_degree_22() {
        // single panel, no adaptivity
        for deg in 0..=22 {
            let seg = kronrod(&|x: f64| x.powi(deg), Map::Identity, -1.0, 1.0).unwrap();
            let want = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            assert_abs_diff_eq!(seg.result, want, epsilon = 1e-14);
        }
        // the embedded Gauss rule is exact to degree 13, so the estimate vanishes there
        let seg = kronrod(&|x: f64| x.powi(12), Map::Identity, -1.0, 1.0).unwrap();
        assert!(seg.error < 1e-13);
    }

    #[test]
    fn constant() {
        let v = integrate_fn(
            |_| 1.0,
            0.0,
            1.0,
            Singularity::None,
            Tolerance::quadrature(),
        )
        .unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn arcsine_density_both_ends() {
        let v = integrate_fn(
            |x: f64| 1.0 / (1.0 - x * x).sqrt(),
            -1.0,
            1.0,
            Singularity::InverseSqrtBoth,
            Tolerance::quadrature(),
        )
        .unwrap();
        assert_abs_diff_eq!(v, PI, epsilon = 1e-10);
    }

    #[test]
    fn ellipse_chord_integral_is_pi() {
        let (x1, x2) = (0.2, 0.9);
        let v = integrate_fn(
            |x: f64| 1.0 / ((x - x1) * (x2 - x)).sqrt(),
            x1,
            x2,
            Singularity::InverseSqrtBoth,
            Tolerance::quadrature(),
        )
        .unwrap();
        assert_abs_diff_eq!(v, PI, epsilon = 1e-10);
    }

    #[test]
    fn one_sided_singularities() {
        let lower = integrate_fn(
            |x: f64| 1.0 / x.sqrt(),
            0.0,
            4.0,
            Singularity::InverseSqrtLower,
            Tolerance::quadrature(),
        )
        .unwrap();
        assert_abs_diff_eq!(lower, 4.0, epsilon = 1e-10);
        let upper = integrate_fn(
            |x: f64| 1.0 / (1.0 - x).sqrt(),
            0.0,
            1.0,
            Singularity::InverseSqrtUpper,
            Tolerance::quadrature(),
        )
        .unwrap();
        assert_abs_diff_eq!(upper, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn empty_and_reversed_intervals() {
        let tol = Tolerance::quadrature();
        assert_eq!(
            integrate_fn(|x| x, 2.0, 2.0, Singularity::None, tol).unwrap(),
            0.0
        );
        assert!(integrate_fn(|x| x, 2.0, 1.0, Singularity::None, tol).is_err());
    }

    #[test]
    fn reports_non_convergence_with_estimate() {
        let tol = Tolerance::new(0.0, 1e-14, 3).unwrap();
        let err = integrate_fn(
            |x: f64| (50.0 * x).sin().abs(),
            0.0,
            10.0,
            Singularity::None,
            tol,
        )
        .unwrap_err();
        match err {
            Error::Convergence {
                estimate,
                error_bound,
                iterations,
            } => {
                assert!(estimate.is_finite() && error_bound > 0.0);
                assert_eq!(iterations, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn agrees_with_composite_simpson_reference() {
        // high-resolution fixed rule as reference for a smooth integrand
        let f = |x: f64| (x * x).exp() * (3.0 * x).cos();
        let n = 20_000;
        let h = 2.0 / n as f64;
        let mut s = f(-1.0) + f(1.0);
        for i in 1..n {
            let x = -1.0 + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        let reference = s * h / 3.0;
        let v = integrate_fn(f, -1.0, 1.0, Singularity::None, Tolerance::quadrature()).unwrap();
        assert_abs_diff_eq!(v, reference, epsilon = 1e-9);
    }
}
