//! Exact diagonalization: spectra, eigenfunctions, the monic polynomial
//! recurrence, correlation matrices, densities, entanglement entropy and
//! per-well localization of eigenfunctions.

use std::ops::Range;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eigensolve_tridiagonal, TridiagonalSymmetric};
use crate::profiles::LatticeProfile;
use crate::wkb::WellDecomposition;

/// Eigenvalues `ε_k` in increasing order and eigenvectors `Φ_{nk}` as columns.
#[derive(Debug, Clone)]
pub struct SingleParticleSpectrum {
    energies: Vec<f64>,
    modes: DMatrix<f64>,
    profile: LatticeProfile,
}

impl SingleParticleSpectrum {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn modes(&self) -> &DMatrix<f64> {
        &self.modes
    }

    pub fn profile(&self) -> &LatticeProfile {
        &self.profile
    }

    pub fn n(&self) -> usize {
        self.energies.len()
    }

    /// Column `k`, the eigenfunction `φ_n(ε_k)`.
    pub fn mode(&self, k: usize) -> Result<Vec<f64>> {
        if k >= self.n() {
            return Err(Error::OutOfRange {
                index: k,
                max: self.n() - 1,
            });
        }
        Ok(self.modes.column(k).iter().copied().collect())
    }
}

/// Relative size below which a leading component is treated as zero when
/// fixing eigenvector signs.
const SIGN_THRESHOLD: f64 = 1e-10;

/// Diagonalizes the chain Hamiltonian. Each eigenvector is signed so that
/// its first component above `1e-10·max|φ|` is positive.
pub fn diagonalize(p: &LatticeProfile) -> Result<SingleParticleSpectrum> {
    let m = TridiagonalSymmetric::new(p.fields().to_vec(), p.hoppings().to_vec())?;
    let eig = eigensolve_tridiagonal(&m, true)?;
    let mut modes = eig.vectors.expect("vectors requested");
    for mut col in modes.column_iter_mut() {
        let max = col.amax();
        if let Some(&lead) = col.iter().find(|v| v.abs() > SIGN_THRESHOLD * max) {
            if lead < 0.0 {
                col.neg_mut();
            }
        }
    }
    Ok(SingleParticleSpectrum {
        energies: eig.values,
        modes,
        profile: p.clone(),
    })
}

/// Values `P_0(ε)..P_N(ε)` of the monic orthogonal polynomials, stored as
/// `mantissa · exp(log_scale)` so that no entry overflows.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPolynomial {
    pub mantissa: Vec<f64>,
    pub log_scale: Vec<f64>,
}

impl CriticalPolynomial {
    pub fn len(&self) -> usize {
        self.mantissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mantissa.is_empty()
    }

    /// `P_n(ε)` as a plain float (may be infinite for large `n`).
    pub fn value(&self, n: usize) -> f64 {
        self.mantissa[n] * self.log_scale[n].exp()
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.value(n)).collect()
    }

    /// Sign of `P_n(ε)`, exact regardless of magnitude.
    pub fn sign(&self, n: usize) -> f64 {
        if self.mantissa[n] == 0.0 {
            0.0
        } else {
            self.mantissa[n].signum()
        }
    }

    /// `ln |P_n(ε)|`.
    pub fn ln_abs(&self, n: usize) -> f64 {
        self.mantissa[n].abs().ln() + self.log_scale[n]
    }
}

const RESCALE_ABOVE: f64 = 1e150;

/// Runs `P_{n+1} = (ε − B_n) P_n − J_{n−1}² P_{n−1}` from `P_{−1} = 0`, `P_0 = 1`.
pub fn critical_polynomial(p: &LatticeProfile, eps: f64) -> CriticalPolynomial {
    let (b, j) = (p.fields(), p.hoppings());
    let n = p.n();
    let mut mantissa = Vec::with_capacity(n + 1);
    let mut log_scale = Vec::with_capacity(n + 1);
    // (prev, cur) share the running scale `log`
    let (mut prev, mut cur, mut log) = (0.0f64, 1.0f64, 0.0f64);
    mantissa.push(cur);
    log_scale.push(log);
    for i in 0..n {
        let a_prev = if i > 0 { j[i - 1] * j[i - 1] } else { 0.0 };
        let next = (eps - b[i]) * cur - a_prev * prev;
        prev = cur;
        cur = next;
        let big = cur.abs().max(prev.abs());
        if big > RESCALE_ABOVE {
            prev /= big;
            cur /= big;
            log += big.ln();
        }
        mantissa.push(cur);
        log_scale.push(log);
    }
    CriticalPolynomial {
        mantissa,
        log_scale,
    }
}

/// The `M`-filled state occupying the `M` lowest modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilledState {
    pub m: usize,
    pub n: usize,
    /// `ε_{M−1}`; `None` when `M = 0`.
    pub fermi_energy: Option<f64>,
    pub filling: f64,
    /// `ε_{M−1}` vanishes within `1e-12`, so the ground state is degenerate.
    pub zero_mode: bool,
}

impl FilledState {
    pub fn new(s: &SingleParticleSpectrum, m: usize) -> Result<Self> {
        let n = s.n();
        if m > n {
            return Err(Error::OutOfRange { index: m, max: n });
        }
        let fermi_energy = m.checked_sub(1).map(|k| s.energies[k]);
        Ok(Self {
            m,
            n,
            fermi_energy,
            filling: m as f64 / n as f64,
            zero_mode: fermi_energy.is_some_and(|e| e.abs() <= 1e-12),
        })
    }

    /// The state with `M = round(ν·N)` particles.
    pub fn from_filling(s: &SingleParticleSpectrum, nu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&nu) {
            return Err(Error::Domain(format!("filling {nu} outside [0, 1]")));
        }
        Self::new(s, (nu * s.n() as f64).round() as usize)
    }
}

/// `C_nm = ⟨M| c†_n c_m |M⟩ = Σ_{k<M} Φ_{nk} Φ_{mk}`.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub entries: DMatrix<f64>,
    pub state: FilledState,
}

fn check_state(s: &SingleParticleSpectrum, st: &FilledState) -> Result<()> {
    if st.n != s.n() || st.m > s.n() {
        return Err(Error::OutOfRange {
            index: st.m,
            max: s.n(),
        });
    }
    Ok(())
}

pub fn correlation_matrix(
    s: &SingleParticleSpectrum,
    st: &FilledState,
) -> Result<CorrelationMatrix> {
    check_state(s, st)?;
    let phi_m = s.modes.columns(0, st.m);
    let entries = phi_m * phi_m.transpose();
    Ok(CorrelationMatrix {
        entries,
        state: *st,
    })
}

/// Site occupations `⟨c†_n c_n⟩`, the diagonal of the correlation matrix.
pub fn density_exact(s: &SingleParticleSpectrum, st: &FilledState) -> Result<Vec<f64>> {
    check_state(s, st)?;
    Ok(s.modes
        .row_iter()
        .map(|row| {
            row.iter()
                .take(st.m)
                .map(|v| v * v)
                .sum::<f64>()
                .clamp(0.0, 1.0)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyKind {
    VonNeumann,
    /// Rényi entropy of order `α > 0`; `α = 1` is the von Neumann entropy.
    Renyi(f64),
}

const CLAMP_WINDOW: f64 = 1e-12;

fn binary_entropy(lambda: f64, kind: EntropyKind) -> f64 {
    let xlogx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
    match kind {
        EntropyKind::VonNeumann => -xlogx(lambda) - xlogx(1.0 - lambda),
        EntropyKind::Renyi(alpha) => {
            (lambda.powf(alpha) + (1.0 - lambda).powf(alpha)).ln() / (1.0 - alpha)
        }
    }
}

/// Entanglement entropy of a contiguous block from the eigenvalues of the
/// truncated correlation matrix.
pub fn entanglement_entropy(
    c: &CorrelationMatrix,
    block: Range<usize>,
    kind: EntropyKind,
) -> Result<f64> {
    let kind = match kind {
        EntropyKind::Renyi(a) if !(a > 0.0 && a.is_finite()) => {
            return Err(Error::Domain(format!(
                "Rényi order must be positive and finite, got {a}"
            )))
        }
        EntropyKind::Renyi(a) if a == 1.0 => EntropyKind::VonNeumann,
        k => k,
    };
    let n = c.entries.nrows();
    if block.end > n {
        return Err(Error::OutOfRange {
            index: block.end,
            max: n,
        });
    }
    if block.is_empty() {
        return Ok(0.0);
    }
    let len = block.len();
    let sub = c
        .entries
        .view((block.start, block.start), (len, len))
        .clone_owned();
    let eig = SymmetricEigen::new(sub);
    let mut s = 0.0;
    for &l in eig.eigenvalues.iter() {
        if !(-CLAMP_WINDOW..=1.0 + CLAMP_WINDOW).contains(&l) {
            return Err(Error::Numerical(format!(
                "block eigenvalue {l} lies outside [0, 1]"
            )));
        }
        s += binary_entropy(l.clamp(0.0, 1.0), kind);
    }
    Ok(s.max(0.0))
}

/// Which well an eigenfunction lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Localization {
    /// Zero-based index into the decomposition's wells.
    Well(usize),
    Delocalized,
}

/// Assigns mode `k` to the well holding more than half of its weight on the
/// lattice sites `x = n·a` inside that well; exact halves count as delocalized.
pub fn localize_eigenfunction(
    s: &SingleParticleSpectrum,
    k: usize,
    wells: &WellDecomposition,
) -> Result<Localization> {
    let phi = s.mode(k)?;
    let a = s.profile.lattice_spacing();
    let mut weights = vec![0.0; wells.wells.len()];
    for (site, v) in phi.iter().enumerate() {
        let x = site as f64 * a;
        if let Some(i) = wells
            .wells
            .iter()
            .position(|w| w.lower <= x && x <= w.upper)
        {
            weights[i] += v * v;
        }
    }
    Ok(weights
        .iter()
        .position(|&w| w > 0.5 + 1e-10)
        .map_or(Localization::Delocalized, Localization::Well))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{make_builtin, FamilyParameters};
    use crate::wkb::{Boundary, Well};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{PI, SQRT_2};

    fn homogeneous(n: usize) -> LatticeProfile {
        make_builtin(&FamilyParameters::Homogeneous { j: 1.0, b: 0.0 }, n, 1.0)
            .unwrap()
            .0
    }

    /// Cyclic Jacobi eigenvalue iteration for small dense symmetric matrices.
    fn jacobi_eigenvalues(mut a: DMatrix<f64>) -> Vec<f64> {
        let n = a.nrows();
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|(i, j)| i != j)
                .map(|(i, j)| a[(i, j)].powi(2))
                .sum();
            if off < 1e-28 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[(p, q)].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[(k, p)], a[(k, q)]);
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| a[(i, i)]).collect()
    }

    #[test]
    fn small_spectra() {
        let s = diagonalize(&homogeneous(3)).unwrap();
        for (g, w) in s.energies().iter().zip([-SQRT_2, 0.0, SQRT_2]) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-14);
        }
        let p = LatticeProfile::new(vec![], vec![5.0], 1.0).unwrap();
        assert_eq!(diagonalize(&p).unwrap().energies(), &[5.0]);
        let (p, _) = make_builtin(&FamilyParameters::krawtchouk(0.25), 10, 1.0).unwrap();
        let s = diagonalize(&p).unwrap();
        for (k, e) in s.energies().iter().enumerate() {
            assert_abs_diff_eq!(*e, k as f64 / 10.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn krawtchouk_eight_sites_integer_spectrum() {
        let fam = FamilyParameters::Krawtchouk {
            q: 0.25,
            rescaled: false,
        };
        let (p, _) = make_builtin(&fam, 8, 1.0).unwrap();
        let s = diagonalize(&p).unwrap();
        for (k, e) in s.energies().iter().enumerate() {
            assert_abs_diff_eq!(*e, k as f64, epsilon = 1e-10);
        }
    }

    #[test]
    fn sign_convention() {
        let s = diagonalize(&homogeneous(12)).unwrap();
        for col in s.modes().column_iter() {
            assert!(col[0] > 0.0);
        }
    }

    #[test]
    fn polynomial_examples() {
        let p = LatticeProfile::new(vec![], vec![0.0], 1.0).unwrap();
        assert_eq!(critical_polynomial(&p, 0.0).value(1), 0.0);
        let p3 = homogeneous(3);
        assert_abs_diff_eq!(
            critical_polynomial(&p3, SQRT_2).value(3),
            0.0,
            epsilon = 1e-12
        );
        let vals = critical_polynomial(&p3, 0.0).values();
        assert_eq!(vals, vec![1.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn polynomial_survives_overflow() {
        // P_N(ε) for large ε grows like ε^N
        let p = homogeneous(400);
        let poly = critical_polynomial(&p, 100.0);
        assert_eq!(poly.sign(400), 1.0);
        assert!(poly.mantissa.iter().all(|v| v.is_finite()));
        assert!((poly.ln_abs(400) - 400.0 * 100f64.ln()).abs() < 1.0);
    }

    #[test]
    fn eigenvalues_are_polynomial_roots() {
        let (p, _) = make_builtin(&FamilyParameters::Rainbow { h: 1.0 }, 32, 1.0).unwrap();
        let s = diagonalize(&p).unwrap();
        for &e in s.energies() {
            // compare P_N(ε) against its local slope times ε·1e-8
            let h = 1e-6;
            let p0 = critical_polynomial(&p, e);
            let slope = (critical_polynomial(&p, e + h).value(32)
                - critical_polynomial(&p, e - h).value(32))
                / (2.0 * h);
            assert!(p0.value(32).abs() <= 1e-8 * slope.abs().max(1e-300), "{e}");
        }
    }

    #[test]
    fn correlation_examples() {
        let s = diagonalize(&homogeneous(3)).unwrap();
        let c0 = correlation_matrix(&s, &FilledState::new(&s, 0).unwrap()).unwrap();
        assert_eq!(c0.entries.amax(), 0.0);
        let c3 = correlation_matrix(&s, &FilledState::new(&s, 3).unwrap()).unwrap();
        assert!((c3.entries - DMatrix::identity(3, 3)).amax() < 1e-10);
        let st = FilledState::new(&s, 1).unwrap();
        let d = density_exact(&s, &st).unwrap();
        for (g, w) in d.iter().zip([0.25, 0.5, 0.25]) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-14);
        }
        assert!(FilledState::new(&s, 4).is_err());
        assert_eq!(st.fermi_energy, Some(s.energies()[0]));
        assert_eq!(FilledState::new(&s, 0).unwrap().fermi_energy, None);
    }

    #[test]
    fn zero_mode_flag() {
        let s = diagonalize(&homogeneous(3)).unwrap();
        assert!(FilledState::new(&s, 2).unwrap().zero_mode);
        assert!(!FilledState::new(&s, 1).unwrap().zero_mode);
    }

    #[test]
    fn rainbow_depletion_at_one_eighth() {
        let (p, _) = make_builtin(&FamilyParameters::Rainbow { h: 1.0 }, 400, 1.0).unwrap();
        let s = diagonalize(&p).unwrap();
        let d = density_exact(&s, &FilledState::new(&s, 50).unwrap()).unwrap();
        assert!(d[..=50].iter().all(|&v| v < 0.01));
        assert_abs_diff_eq!(d.iter().sum::<f64>(), 50.0, epsilon = 1e-9);
    }

    #[test]
    fn entropy_examples() {
        let (p, _) = make_builtin(&FamilyParameters::Rainbow { h: 1.0 }, 40, 1.0).unwrap();
        let s = diagonalize(&p).unwrap();
        let c = correlation_matrix(&s, &FilledState::new(&s, 20).unwrap()).unwrap();
        assert!(entanglement_entropy(&c, 0..40, EntropyKind::VonNeumann).unwrap() < 1e-9);
        assert_eq!(
            entanglement_entropy(&c, 5..5, EntropyKind::VonNeumann).unwrap(),
            0.0
        );
        let got = entanglement_entropy(&c, 0..20, EntropyKind::VonNeumann).unwrap();
        // independent oracle: Jacobi eigenvalues of the dense block
        let block = c.entries.view((0, 0), (20, 20)).clone_owned();
        let want: f64 = jacobi_eigenvalues(block)
            .into_iter()
            .map(|l| {
                let l = l.clamp(0.0, 1.0);
                let h = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
                h(l) + h(1.0 - l)
            })
            .sum();
        assert!(got > 0.1);
        assert_abs_diff_eq!(got, want, epsilon = 1e-9);
        let r1 = entanglement_entropy(&c, 0..20, EntropyKind::Renyi(1.0)).unwrap();
        assert_eq!(r1, got);
        let r2 = entanglement_entropy(&c, 0..20, EntropyKind::Renyi(2.0)).unwrap();
        assert!(r2 > 0.0 && r2 <= got);
        assert!(entanglement_entropy(&c, 0..20, EntropyKind::Renyi(-1.0)).is_err());
        assert!(entanglement_entropy(&c, 0..41, EntropyKind::VonNeumann).is_err());
        let c0 = correlation_matrix(&s, &FilledState::new(&s, 0).unwrap()).unwrap();
        assert_eq!(
            entanglement_entropy(&c0, 3..17, EntropyKind::Renyi(2.0)).unwrap(),
            0.0
        );
    }

    fn well(lower: f64, upper: f64) -> Well {
        Well {
            lower,
            upper,
            lower_kind: Boundary::ChainEnd,
            upper_kind: Boundary::ChainEnd,
        }
    }

    #[test]
    fn localization_single_and_split() {
        let p = homogeneous(20);
        let s = diagonalize(&p).unwrap();
        let one = WellDecomposition::from_wells(0.0, vec![well(0.0, 20.0)], vec![20.0]);
        for k in 0..20 {
            assert_eq!(
                localize_eigenfunction(&s, k, &one).unwrap(),
                Localization::Well(0)
            );
        }
        // symmetric chain split at its centre: every mode is shared evenly
        let two = WellDecomposition::from_wells(
            0.0,
            vec![well(0.0, 9.5), well(9.5, 20.0)],
            vec![10.0, 10.0],
        );
        for k in 0..20 {
            assert_eq!(
                localize_eigenfunction(&s, k, &two).unwrap(),
                Localization::Delocalized
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn random_chain_invariants(
            hop in proptest::collection::vec(0.2f64..2.0, 1..48),
            field_seed in proptest::collection::vec(-1.0f64..1.0, 49),
            m_frac in 0.0f64..1.0,
        ) {
            let n = hop.len() + 1;
            let fields = field_seed[..n].to_vec();
            let p = LatticeProfile::new(hop.clone(), fields, 1.0).unwrap();
            let s = diagonalize(&p).unwrap();
            let h = TridiagonalSymmetric::new(p.fields().to_vec(), p.hoppings().to_vec()).unwrap().to_dense();
            let phi = s.modes();
            let d = phi.transpose() * &h * phi;
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { s.energies()[i] } else { 0.0 };
                    prop_assert!((d[(i, j)] - want).abs() < 1e-9);
                }
            }
            prop_assert!((phi.transpose() * phi - DMatrix::identity(n, n)).amax() < 1e-10);
            for w in s.energies().windows(2) {
                prop_assert!(w[1] > w[0]);
            }
            for row in phi.row_iter() {
                prop_assert!((row.norm_squared() - 1.0).abs() < 1e-10);
            }
            let m = (m_frac * n as f64) as usize;
            let st = FilledState::new(&s, m).unwrap();
            let c = correlation_matrix(&s, &st).unwrap();
            prop_assert!((&c.entries * &c.entries - &c.entries).amax() < 1e-8);
            prop_assert!((c.entries.trace() - m as f64).abs() < 1e-9);
            let dens = density_exact(&s, &st).unwrap();
            prop_assert!((dens.iter().sum::<f64>() / n as f64 - m as f64 / n as f64).abs() < 1e-10);
            // flipping every hopping leaves energies and densities unchanged
            let sf = diagonalize(&p.with_flipped_hoppings()).unwrap();
            let df = density_exact(&sf, &FilledState::new(&sf, m).unwrap()).unwrap();
            for (a, b) in s.energies().iter().zip(sf.energies()) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            for (a, b) in dens.iter().zip(&df) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn particle_hole_symmetry(hop in proptest::collection::vec(0.2f64..2.0, 1..48)) {
            let n = hop.len() + 1;
            let p = LatticeProfile::new(hop, vec![0.0; n], 1.0).unwrap();
            let s = diagonalize(&p).unwrap();
            let e = s.energies();
            for k in 0..n {
                prop_assert!((e[k] + e[n - 1 - k]).abs() < 1e-9);
                for site in 0..n {
                    let a = s.modes()[(site, k)].abs();
                    let b = s.modes()[(site, n - 1 - k)].abs();
                    prop_assert!((a - b).abs() < 1e-8);
                }
            }
        }

        #[test]
        fn krawtchouk_reflection(q in 0.05f64..0.95, n in 4usize..40) {
            let (p, _) = make_builtin(&FamilyParameters::krawtchouk(q), n, 1.0).unwrap();
            let s = diagonalize(&p).unwrap();
            for m in 0..=n {
                let d = density_exact(&s, &FilledState::new(&s, m).unwrap()).unwrap();
                let dr = density_exact(&s, &FilledState::new(&s, n - m).unwrap()).unwrap();
                for site in 0..n {
                    prop_assert!((d[site] + dr[n - 1 - site] - 1.0).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn homogeneous_modes_match_closed_form() {
        let n = 7;
        let s = diagonalize(&homogeneous(n)).unwrap();
        let np1 = (n + 1) as f64;
        for k in 1..=n {
            for site in 1..=n {
                let want = (2.0 / np1).sqrt() * (PI * (site * k) as f64 / np1).sin();
                let got = s.modes()[(site - 1, k - 1)];
                assert_abs_diff_eq!(got.abs(), want.abs(), epsilon = 1e-12);
            }
        }
    }
}
