//! Discrete-WKB asymptotics: clamped profile, wells, phase, normalizations,
//! density of states, filling fraction, local density, wavefunctions,
//! envelopes, well frequencies and the correlation kernel.
//!
//! Wavefunctions are normalized in the continuum, `∫ φ² dx = 1`; the lattice
//! amplitude at site `n` is `√a · φ(n·a)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bisect_predicate, find_root, integrate_fn, Singularity, Tolerance};
use crate::profiles::ContinuumProfile;

/// Default number of grid points used to locate turning points.
pub const DEFAULT_SCAN: usize = 4096;

/// Wells narrower than this fraction of `ℓ` are tangency artifacts.
const MIN_WELL_FRACTION: f64 = 1e-6;

/// Grid points this close (relative to `ℓ`) to a turning point are skipped
/// when evaluating wavefunctions and envelopes.
const TURNING_POINT_EXCLUSION: f64 = 1e-6;

/// `ξ(x, ε) = (ε − B(x)) / (2 J(x))`.
pub fn xi(c: &ContinuumProfile, x: f64, eps: f64) -> Result<f64> {
    let j = c.j(x);
    if j == 0.0 {
        return Err(Error::SingularProfile { x });
    }
    Ok((eps - c.b(x)) / (2.0 * j))
}

/// `ξ` clamped to `[−1, 1]`; where `J(x) = 0` the sign of `ε − B(x)` decides.
pub fn xi_star(c: &ContinuumProfile, x: f64, eps: f64) -> f64 {
    let j = c.j(x).abs();
    let d = eps - c.b(x);
    if j == 0.0 {
        return if d > 0.0 {
            1.0
        } else if d < 0.0 {
            -1.0
        } else {
            0.0
        };
    }
    (d / (2.0 * j)).clamp(-1.0, 1.0)
}

/// `(ε − B)² − 4J²`: non-positive exactly where `|ξ| ≤ 1`.
fn band_gap(c: &ContinuumProfile, x: f64, eps: f64) -> f64 {
    let d = eps - c.b(x);
    let j = c.j(x);
    d * d - 4.0 * j * j
}

/// Local band `[B − 2|J|, B + 2|J|]` at `x`.
fn local_band(c: &ContinuumProfile, x: f64) -> (f64, f64) {
    let (b, j) = (c.b(x), c.j(x).abs());
    (b - 2.0 * j, b + 2.0 * j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    TurningPoint,
    ChainEnd,
}

/// A maximal interval where `|ξ(x, ε)| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Well {
    pub lower: f64,
    pub upper: f64,
    pub lower_kind: Boundary,
    pub upper_kind: Boundary,
}

impl Well {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// `ε ≤ B − 2J`: density exactly 0.
    Depleted,
    /// `ε ≥ B + 2J`: density exactly 1.
    Saturated,
    /// Inside a well.
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lower: f64,
    pub upper: f64,
    pub kind: RegionKind,
}

/// The wells at one energy with their normalizations `A_i⁻²`, plus the
/// classification of all of `[0, ℓ]` into regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellDecomposition {
    pub energy: f64,
    pub wells: Vec<Well>,
    /// `A_i⁻² = ∫_{I_i} dx / √(4J² − (ε − B)²)`.
    pub per_well_norms: Vec<f64>,
    pub regions: Vec<Region>,
}

impl WellDecomposition {
    /// A decomposition from known wells; regions are left empty.
    pub fn from_wells(energy: f64, wells: Vec<Well>, per_well_norms: Vec<f64>) -> Self {
        Self {
            energy,
            wells,
            per_well_norms,
            regions: Vec::new(),
        }
    }

    pub fn count(&self) -> usize {
        self.wells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wells.is_empty()
    }

    /// `A⁻² = Σ_i A_i⁻²`.
    pub fn total_norm(&self) -> f64 {
        self.per_well_norms.iter().sum()
    }

    pub fn turning_points(&self) -> Vec<f64> {
        let mut tp = Vec::new();
        for w in &self.wells {
            if w.lower_kind == Boundary::TurningPoint {
                tp.push(w.lower);
            }
            if w.upper_kind == Boundary::TurningPoint {
                tp.push(w.upper);
            }
        }
        tp
    }

    fn well_at(&self, x: f64) -> Option<usize> {
        self.wells.iter().position(|w| w.contains(x))
    }
}

/// A piece of `[lo, hi]` on which `|ξ| ≤ 1` holds or fails throughout.
#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    kind: RegionKind,
    lo_tp: bool,
    hi_tp: bool,
}

impl Piece {
    fn allowed(&self) -> bool {
        self.kind == RegionKind::Partial
    }
}

fn classify(c: &ContinuumProfile, x: f64, eps: f64) -> RegionKind {
    if band_gap(c, x, eps) <= 0.0 {
        RegionKind::Partial
    } else if eps < c.b(x) {
        RegionKind::Depleted
    } else {
        RegionKind::Saturated
    }
}

/// Allowed side of the sign change of `g` between `a` (allowed iff
/// `a_allowed`) and `b`.
fn refine_crossing(c: &ContinuumProfile, eps: f64, a: f64, b: f64, a_allowed: bool) -> f64 {
    let g = |x: f64| band_gap(c, x, eps);
    let r = find_root(g, a, b, Tolerance::machine()).unwrap_or(0.5 * (a + b));
    let toward = if a_allowed { a } else { b };
    let mut x = r;
    let mut step = f64::EPSILON * r.abs().max(f64::MIN_POSITIVE);
    for _ in 0..64 {
        if g(x) <= 0.0 {
            return x;
        }
        x = if a_allowed {
            (r - step).max(toward)
        } else {
            (r + step).min(toward)
        };
        step *= 2.0;
    }
    toward
}

/// Splits `[lo, hi]` into allowed and forbidden pieces using `resolution`
/// grid points and machine-precision refinement of every sign change.
fn scan(c: &ContinuumProfile, eps: f64, lo: f64, hi: f64, resolution: usize) -> Vec<Piece> {
    let resolution = resolution.max(2);
    let step = (hi - lo) / (resolution - 1) as f64;
    let grid = |i: usize| {
        if i + 1 == resolution {
            hi
        } else {
            lo + i as f64 * step
        }
    };
    let ell = c.length();
    let scale = |x: f64| {
        let d = eps - c.b(x);
        let j = c.j(x);
        d * d + 4.0 * j * j
    };
    // an end of the chain where g vanishes behaves like a turning point
    let end_tp = |x: f64| {
        (x == 0.0 || x == ell)
            && band_gap(c, x, eps).abs() <= 1e-12 * scale(x).max(f64::MIN_POSITIVE)
    };

    let mut pieces = Vec::new();
    let mut start = lo;
    let mut start_tp = end_tp(lo);
    let mut state = classify(c, lo, eps);
    let mut prev_x = lo;
    for i in 1..resolution {
        let x = grid(i);
        let s = classify(c, x, eps);
        if s != state {
            let allowed_edge = state == RegionKind::Partial || s == RegionKind::Partial;
            let t = if allowed_edge {
                refine_crossing(c, eps, prev_x, x, state == RegionKind::Partial)
            } else {
                // depleted next to saturated: B jumps across ε or J vanishes
                find_root(|y| eps - c.b(y), prev_x, x, Tolerance::machine())
                    .unwrap_or(0.5 * (prev_x + x))
            };
            pieces.push(Piece {
                lo: start,
                hi: t,
                kind: state,
                lo_tp: start_tp,
                hi_tp: allowed_edge,
            });
            start = t;
            start_tp = allowed_edge;
            state = s;
        }
        prev_x = x;
    }
    pieces.push(Piece {
        lo: start,
        hi,
        kind: state,
        lo_tp: start_tp,
        hi_tp: end_tp(hi),
    });
    pieces.retain(|p| p.hi > p.lo);
    pieces
}

/// `∫ f` over `[lo, hi] ⊂ piece`, regularizing the piece's turning-point ends.
fn piece_integral<F: Fn(f64) -> f64>(p: &Piece, lo: f64, hi: f64, f: F) -> Result<f64> {
    let sing = Singularity::from_ends(p.lo_tp && lo == p.lo, p.hi_tp && hi == p.hi);
    integrate_fn(f, lo, hi, sing, Tolerance::quadrature())
}

/// `∫_lo^hi arccos(sign · ξ*(s, ε)) ds` over a piece decomposition.
fn clamped_arccos_integral(
    c: &ContinuumProfile,
    eps: f64,
    pieces: &[Piece],
    lo: f64,
    hi: f64,
    sign: f64,
) -> Result<f64> {
    let mut total = 0.0;
    for p in pieces {
        let (a, b) = (p.lo.max(lo), p.hi.min(hi));
        if b <= a {
            continue;
        }
        total += if p.allowed() {
            piece_integral(p, a, b, |s| (sign * xi_star(c, s, eps)).acos())?
        } else {
            let xs = if p.kind == RegionKind::Depleted {
                -1.0
            } else {
                1.0
            };
            (sign * xs).acos() * (b - a)
        };
    }
    Ok(total)
}

fn well_norm(c: &ContinuumProfile, eps: f64, p: &Piece) -> Result<f64> {
    piece_integral(p, p.lo, p.hi, |x| {
        let d = -band_gap(c, x, eps);
        if d > 0.0 {
            1.0 / d.sqrt()
        } else {
            0.0
        }
    })
}

/// Pieces of the whole chain with tangency-width wells folded into their
/// forbidden neighbours.
fn chain_pieces(c: &ContinuumProfile, eps: f64, resolution: usize) -> Vec<Piece> {
    let ell = c.length();
    let mut pieces = scan(c, eps, 0.0, ell, resolution);
    for p in pieces.iter_mut() {
        if p.allowed() && p.hi - p.lo < MIN_WELL_FRACTION * ell {
            let mid = 0.5 * (p.lo + p.hi);
            p.kind = if eps < c.b(mid) {
                RegionKind::Depleted
            } else {
                RegionKind::Saturated
            };
        }
    }
    pieces
}

/// Wells of `|ξ(x, ε)| ≤ 1` on `[0, ℓ]` with their normalizations.
pub fn wells(c: &ContinuumProfile, eps: f64, scan_resolution: usize) -> Result<WellDecomposition> {
    if !eps.is_finite() {
        return Err(Error::InvalidInput(format!(
            "energy must be finite, got {eps}"
        )));
    }
    let pieces = chain_pieces(c, eps, scan_resolution);
    let mut wells = Vec::new();
    let mut norms = Vec::new();
    let mut regions: Vec<Region> = Vec::new();
    for p in &pieces {
        let kind = if p.allowed() {
            let kind_of = |tp: bool| {
                if tp {
                    Boundary::TurningPoint
                } else {
                    Boundary::ChainEnd
                }
            };
            wells.push(Well {
                lower: p.lo,
                upper: p.hi,
                lower_kind: kind_of(p.lo_tp),
                upper_kind: kind_of(p.hi_tp),
            });
            norms.push(well_norm(c, eps, p)?);
            RegionKind::Partial
        } else {
            p.kind
        };
        match regions.last_mut() {
            Some(r) if r.kind == kind && kind != RegionKind::Partial => r.upper = p.hi,
            _ => regions.push(Region {
                lower: p.lo,
                upper: p.hi,
                kind,
            }),
        }
    }
    Ok(WellDecomposition {
        energy: eps,
        wells,
        per_well_norms: norms,
        regions,
    })
}

/// `φ*(x, ε) = (1/a) ∫_0^x arccos ξ*(s, ε) ds`.
pub fn phase(c: &ContinuumProfile, x: f64, eps: f64) -> Result<f64> {
    check_position(c, x)?;
    let pieces = scan(c, eps, 0.0, c.length(), DEFAULT_SCAN);
    Ok(clamped_arccos_integral(c, eps, &pieces, 0.0, x, 1.0)? / c.lattice_spacing())
}

/// `φ*` at every point of an ascending grid, accumulated piece by piece.
pub fn phase_on_grid(c: &ContinuumProfile, eps: f64, grid: &[f64]) -> Result<Vec<f64>> {
    check_grid(c, grid)?;
    let pieces = scan(c, eps, 0.0, c.length(), DEFAULT_SCAN);
    phase_with_pieces(c, eps, &pieces, grid)
}

fn phase_with_pieces(
    c: &ContinuumProfile,
    eps: f64,
    pieces: &[Piece],
    grid: &[f64],
) -> Result<Vec<f64>> {
    let a = c.lattice_spacing();
    let mut acc = 0.0;
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        acc += clamped_arccos_integral(c, eps, pieces, prev, x, 1.0)?;
        prev = x;
        out.push(acc / a);
    }
    Ok(out)
}

fn check_position(c: &ContinuumProfile, x: f64) -> Result<()> {
    if !(0.0..=c.length()).contains(&x) {
        return Err(Error::Domain(format!(
            "position {x} outside [0, {}]",
            c.length()
        )));
    }
    Ok(())
}

fn check_grid(c: &ContinuumProfile, grid: &[f64]) -> Result<()> {
    for w in grid.windows(2) {
        if w[1] < w[0] {
            return Err(Error::InvalidInput("grid must be ascending".into()));
        }
    }
    grid.iter().try_for_each(|&x| check_position(c, x))
}

/// Lattice positions `x = n·a`, `n = 0..N−1`.
pub fn lattice_grid(c: &ContinuumProfile) -> Vec<f64> {
    let a = c.lattice_spacing();
    (0..c.sites()).map(|n| n as f64 * a).collect()
}

/// `D(ε) = (1/πa) Σ_i A_i⁻²`.
pub fn density_of_states(c: &ContinuumProfile, eps: f64) -> Result<f64> {
    let wd = wells(c, eps, DEFAULT_SCAN)?;
    Ok(wd.total_norm() / (PI * c.lattice_spacing()))
}

/// `Δ(ε) = 1/D(ε)`; infinite outside the spectrum.
pub fn level_spacing(c: &ContinuumProfile, eps: f64) -> Result<f64> {
    let d = density_of_states(c, eps)?;
    Ok(if d > 0.0 { 1.0 / d } else { f64::INFINITY })
}

/// `ν(ε_F) = (1/πℓ) ∫_0^ℓ arccos(−ξ*(x, ε_F)) dx`.
pub fn filling_fraction(c: &ContinuumProfile, eps_f: f64) -> Result<f64> {
    if !eps_f.is_finite() {
        return Err(Error::InvalidInput(format!(
            "Fermi energy must be finite, got {eps_f}"
        )));
    }
    let ell = c.length();
    let pieces = scan(c, eps_f, 0.0, ell, DEFAULT_SCAN);
    let v = clamped_arccos_integral(c, eps_f, &pieces, 0.0, ell, -1.0)? / (PI * ell);
    Ok(v.clamp(0.0, 1.0))
}

/// Smallest Fermi energy whose filling fraction reaches `nu`.
pub fn invert_filling(c: &ContinuumProfile, nu: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::Domain(format!("filling {nu} outside [0, 1]")));
    }
    let (lo, hi) = c.spectral_bounds();
    if nu <= 0.0 {
        return Ok(lo);
    }
    let f = |e: f64| filling_fraction(c, e).map(|v| v - nu);
    // evaluate through a cell so quadrature errors surface after the solve
    let failure = std::cell::RefCell::new(None);
    let g = |e: f64| match f(e) {
        Ok(v) => v,
        Err(err) => {
            failure.borrow_mut().get_or_insert(err);
            f64::NAN
        }
    };
    let tol = Tolerance::new(1e-15, 1e-15, 200)?;
    let root = find_root(g, lo, hi, tol);
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    let root = root?;
    // a plateau of ν means a spectral gap; move to its left edge
    let width = hi - lo;
    let flat = |e: f64| {
        filling_fraction(c, e)
            .map(|v| v >= nu - 1e-13)
            .unwrap_or(false)
    };
    if root > lo && flat(root - 1e-7 * width) {
        return bisect_predicate(flat, lo, root, 1e-14 * width);
    }
    Ok(root)
}

/// A sampled local density with its region classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub fermi_energy: f64,
    /// `(x, a·ρ(x))` pairs.
    pub samples: Vec<(f64, f64)>,
    pub regions: Vec<Region>,
}

impl DensityProfile {
    pub fn densities(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }

    pub fn regions_of(&self, kind: RegionKind) -> Vec<Region> {
        self.regions
            .iter()
            .filter(|r| r.kind == kind)
            .copied()
            .collect()
    }
}

/// `a·ρ(x, ε_F) = (1/π) arccos(−ξ*(x, ε_F))`.
pub fn local_density(c: &ContinuumProfile, x: f64, eps_f: f64) -> f64 {
    (-xi_star(c, x, eps_f)).acos() / PI
}

pub fn density_profile(c: &ContinuumProfile, eps_f: f64, grid: &[f64]) -> Result<DensityProfile> {
    grid.iter().try_for_each(|&x| check_position(c, x))?;
    let wd = wells(c, eps_f, DEFAULT_SCAN)?;
    let samples = grid
        .iter()
        .map(|&x| (x, local_density(c, x, eps_f)))
        .collect();
    Ok(DensityProfile {
        fermi_energy: eps_f,
        samples,
        regions: wd.regions,
    })
}

/// Which WKB wavefunction to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WellSelector {
    /// `φ_i`, normalized on well `i` alone.
    Well(usize),
    /// `Σ_i (A/A_i) φ_i`, normalized over all wells.
    Combined,
}

/// Amplitude prefactor and membership test for a selector.
fn amplitude(wd: &WellDecomposition, sel: WellSelector) -> Result<f64> {
    if wd.is_empty() {
        return Err(Error::Domain(format!("no wells at energy {}", wd.energy)));
    }
    let norm = match sel {
        WellSelector::Combined => wd.total_norm(),
        WellSelector::Well(i) => *wd.per_well_norms.get(i).ok_or(Error::OutOfRange {
            index: i,
            max: wd.count() - 1,
        })?,
    };
    Ok(norm.powf(-0.5))
}

fn selected(wd: &WellDecomposition, sel: WellSelector, x: f64) -> bool {
    match (sel, wd.well_at(x)) {
        (_, None) => false,
        (WellSelector::Combined, Some(_)) => true,
        (WellSelector::Well(i), Some(j)) => i == j,
    }
}

fn near_turning_point(c: &ContinuumProfile, tps: &[f64], x: f64) -> bool {
    tps.iter()
        .any(|&t| (x - t).abs() < TURNING_POINT_EXCLUSION * c.length())
}

/// `1/√(J (1 − ξ²)^{1/2}) = √2 / (4J² − (ε − B)²)^{1/4}`.
fn envelope_factor(c: &ContinuumProfile, x: f64, eps: f64) -> f64 {
    let d = -band_gap(c, x, eps);
    if d > 0.0 {
        2f64.sqrt() / d.powf(0.25)
    } else {
        0.0
    }
}

/// WKB wavefunction samples; grid points near turning points are omitted.
pub fn wkb_wavefunction(
    c: &ContinuumProfile,
    eps: f64,
    wd: &WellDecomposition,
    sel: WellSelector,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    check_grid(c, grid)?;
    let amp = amplitude(wd, sel)?;
    let tps = wd.turning_points();
    let kept: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&x| !near_turning_point(c, &tps, x))
        .collect();
    let phases = phase_on_grid(c, eps, &kept)?;
    Ok(kept
        .iter()
        .zip(phases)
        .map(|(&x, ph)| {
            let v = if selected(wd, sel, x) {
                amp * ph.sin() * envelope_factor(c, x, eps)
            } else {
                0.0
            };
            (x, v)
        })
        .collect())
}

/// Positive envelope `A/√(J (1 − ξ²)^{1/2})` inside the selected wells.
pub fn envelope(
    c: &ContinuumProfile,
    eps: f64,
    wd: &WellDecomposition,
    sel: WellSelector,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    grid.iter().try_for_each(|&x| check_position(c, x))?;
    let amp = amplitude(wd, sel)?;
    let tps = wd.turning_points();
    Ok(grid
        .iter()
        .copied()
        .filter(|&x| !near_turning_point(c, &tps, x))
        .map(|x| {
            let v = if selected(wd, sel, x) {
                amp * envelope_factor(c, x, eps)
            } else {
                0.0
            };
            (x, v)
        })
        .collect())
}

/// `A⁻²_i / Σ_j A⁻²_j`: predicted share of eigenfunctions in each well.
pub fn well_frequencies(wd: &WellDecomposition) -> Result<Vec<f64>> {
    if wd.is_empty() {
        return Err(Error::Domain(format!("no wells at energy {}", wd.energy)));
    }
    let total = wd.total_norm();
    Ok(wd.per_well_norms.iter().map(|v| v / total).collect())
}

/// Energies probed when checking the single-well assumption.
const REGIME_SAMPLES: usize = 64;
const KERNEL_SCAN: usize = 1024;
const KERNEL_MAX_POINTS: usize = 400_000;

/// `C(x, y) = (1/π) ∫_{ε_0}^{ε_F} f(x, ε) f(y, ε) dε` with
/// `f = sin φ* / √(J (1 − ξ²)^{1/2})` inside the well.
///
/// Only the part of the energy range where both `x` and `y` lie in the local
/// band contributes. That range is mapped to `θ ∈ (0, π)` by
/// `ε = m − h cos θ`, which absorbs the band-edge singularities, and summed
/// with the midpoint rule at about 20 points per oscillation period.
pub fn wkb_correlation_kernel(c: &ContinuumProfile, eps_f: f64, x: f64, y: f64) -> Result<f64> {
    check_position(c, x)?;
    check_position(c, y)?;
    let (eps0, _) = c.spectral_bounds();
    if eps_f <= eps0 {
        return Ok(0.0);
    }
    for k in 0..REGIME_SAMPLES {
        let e = eps0 + (k as f64 + 0.5) / REGIME_SAMPLES as f64 * (eps_f - eps0);
        let g = wells(c, e, KERNEL_SCAN)?.count();
        if g > 1 {
            return Err(Error::UnsupportedRegime(format!(
                "{g} wells at energy {e}; the kernel needs a single well below the Fermi energy"
            )));
        }
    }
    let (bx_lo, bx_hi) = local_band(c, x);
    let (by_lo, by_hi) = local_band(c, y);
    let e_lo = bx_lo.max(by_lo).max(eps0);
    let e_hi = bx_hi.min(by_hi).min(eps_f);
    if e_hi <= e_lo {
        return Ok(0.0);
    }
    let (x0, x1) = (x.min(y), x.max(y));
    let phases = |e: f64| -> Result<(f64, f64)> {
        let pieces = scan(c, e, 0.0, c.length(), KERNEL_SCAN);
        let p = phase_with_pieces(c, e, &pieces, &[x0, x1])?;
        Ok(if x <= y { (p[0], p[1]) } else { (p[1], p[0]) })
    };
    let (px_lo, py_lo) = phases(e_lo)?;
    let (px_hi, py_hi) = phases(e_hi)?;
    let swing = (px_lo - px_hi).abs() + (py_lo - py_hi).abs();
    let points = ((40.0 * swing / PI).ceil() as usize + 200).min(KERNEL_MAX_POINTS);
    let mid = 0.5 * (e_lo + e_hi);
    let half = 0.5 * (e_hi - e_lo);
    let dtheta = PI / points as f64;
    let mut sum = 0.0;
    for j in 0..points {
        let theta = (j as f64 + 0.5) * dtheta;
        let e = mid - half * theta.cos();
        let (px, py) = phases(e)?;
        let fx = px.sin() * envelope_factor(c, x, e);
        let fy = py.sin() * envelope_factor(c, y, e);
        sum += fx * fy * half * theta.sin();
    }
    Ok(sum * dtheta / PI)
}
