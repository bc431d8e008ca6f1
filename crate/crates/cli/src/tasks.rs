//! Task implementations: each turns a chain and task parameters into tables.

use std::time::Instant;

use chain_core::analytic::{closed_form_dos, closed_form_filling};
use chain_core::exact::{
    correlation_matrix, density_exact, diagonalize, entanglement_entropy, localize_eigenfunction,
    EntropyKind, FilledState, Localization, SingleParticleSpectrum,
};
use chain_core::profiles::{gerschgorin_bounds, ContinuumProfile};
use chain_core::report::ComparisonReport;
use chain_core::wkb::{self, Boundary, RegionKind, WellDecomposition, WellSelector};

use crate::config::{Chain, EnergyGrid, TaskParams};
use crate::error::{CliError, Context};
use crate::table::Table;

const DEFAULT_CURVE_POINTS: usize = 201;
const DEFAULT_WINDOW: usize = 40;

fn spectrum_of(chain: &Chain) -> Result<SingleParticleSpectrum, CliError> {
    diagonalize(&chain.lattice).context(|| "diagonalizing the chain".into())
}

/// Zero-based index of the energy labelled `ε_{N/2}` when counting from 1.
pub fn centre_index(n: usize) -> usize {
    (n / 2).saturating_sub(1)
}

fn check_filling(nu: f64) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(CliError::Config(format!("filling {nu} outside [0, 1]")));
    }
    Ok(())
}

fn region_code(kind: RegionKind) -> f64 {
    match kind {
        RegionKind::Depleted => -1.0,
        RegionKind::Partial => 0.0,
        RegionKind::Saturated => 1.0,
    }
}

fn describe_regions(wd: &[wkb::Region]) -> String {
    wd.iter()
        .map(|r| format!("{:?} [{}, {}]", r.kind, r.lower, r.upper).to_lowercase())
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn spectrum(chain: &Chain) -> Result<Vec<Table>, CliError> {
    let s = spectrum_of(chain)?;
    let e = s.energies();
    let mut cols = vec!["k", "energy", "spacing_exact"];
    if chain.continuum.is_some() {
        cols.push("spacing_wkb");
    }
    let mut t = Table::new("spectrum", &cols);
    let (glo, ghi) = gerschgorin_bounds(&chain.lattice);
    t.meta("gerschgorin_bounds", format!("[{glo}, {ghi}]"));
    for k in 0..e.len() {
        let next = e.get(k + 1).map_or(f64::NAN, |v| v - e[k]);
        let mut row = vec![k as f64, e[k], next];
        if let Some(c) = &chain.continuum {
            let d = if k + 1 < e.len() {
                let mid = 0.5 * (e[k] + e[k + 1]);
                wkb::level_spacing(c, mid).context(|| format!("level spacing at {mid}"))?
            } else {
                f64::NAN
            };
            row.push(d);
        }
        t.push(row);
    }
    Ok(vec![t])
}

/// WKB Fermi energy for `M` particles: the smallest `ε_F` with `ν(ε_F) = M/N`.
fn wkb_fermi_energy(c: &ContinuumProfile, m: usize, n: usize) -> Result<f64, CliError> {
    let nu = m as f64 / n as f64;
    wkb::invert_filling(c, nu).context(|| format!("inverting the filling fraction {nu}"))
}

/// Exact and WKB densities at filling `nu` with region and Fermi energy metadata.
fn density_table(
    chain: &Chain,
    s: &SingleParticleSpectrum,
    nu: f64,
    name: String,
) -> Result<Table, CliError> {
    check_filling(nu)?;
    let n = s.n();
    let st = FilledState::from_filling(s, nu).context(|| format!("filling {nu}"))?;
    let exact = density_exact(s, &st).context(|| "exact density".into())?;
    let a = chain.lattice.lattice_spacing();
    let mut cols = vec!["n", "x", "exact"];
    if chain.continuum.is_some() {
        cols.push("wkb");
    }
    let mut t = Table::new(name, &cols);
    t.meta("filling", nu).meta("particles", st.m);
    t.meta(
        "fermi_energy_exact",
        st.fermi_energy
            .map_or("none".to_string(), |e| e.to_string()),
    );
    let wkb_density = match &chain.continuum {
        Some(c) => {
            let ef = wkb_fermi_energy(c, st.m, n)?;
            let grid: Vec<f64> = (0..n).map(|i| i as f64 * a).collect();
            let d = wkb::density_profile(c, ef, &grid)
                .context(|| format!("WKB density at ε_F = {ef}"))?;
            t.meta("fermi_energy_wkb", ef)
                .meta("regions", describe_regions(&d.regions));
            Some(d.densities())
        }
        None => None,
    };
    for i in 0..n {
        let mut row = vec![i as f64, i as f64 * a, exact[i]];
        if let Some(w) = &wkb_density {
            row.push(w[i]);
        }
        t.push(row);
    }
    Ok(t)
}

pub fn density(chain: &Chain, p: &TaskParams) -> Result<Vec<Table>, CliError> {
    let s = spectrum_of(chain)?;
    let fillings = p.fillings.clone().unwrap_or_else(|| vec![0.5]);
    let mut out = Vec::new();
    for &nu in &fillings {
        out.push(density_table(chain, &s, nu, format!("density_nu{nu}"))?);
        if let Some(blocks) = &p.blocks {
            out.push(entropy_table(&s, nu, blocks, p.renyi_alpha)?);
        }
    }
    Ok(out)
}

fn entropy_table(
    s: &SingleParticleSpectrum,
    nu: f64,
    blocks: &[[usize; 2]],
    alpha: Option<f64>,
) -> Result<Table, CliError> {
    let st = FilledState::from_filling(s, nu).context(|| format!("filling {nu}"))?;
    let cm = correlation_matrix(s, &st).context(|| "correlation matrix".into())?;
    let kind = alpha.map_or(EntropyKind::VonNeumann, EntropyKind::Renyi);
    let mut t = Table::new(
        format!("entropy_nu{nu}"),
        &["block_start", "block_end", "entropy"],
    );
    t.meta("filling", nu).meta("entropy", format!("{kind:?}"));
    for &[a, b] in blocks {
        if a > b {
            return Err(CliError::Config(format!("block [{a}, {b}) is reversed")));
        }
        let v = entanglement_entropy(&cm, a..b, kind).map_err(|e| match e {
            chain_core::Error::OutOfRange { .. } | chain_core::Error::Domain(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical {
                context: format!("entropy of block [{a}, {b})"),
                source: other,
            },
        })?;
        t.push(vec![a as f64, b as f64, v]);
    }
    Ok(t)
}

fn default_energy_grid(chain: &Chain) -> EnergyGrid {
    let (lo, hi) = match &chain.continuum {
        Some(c) => c.spectral_bounds(),
        None => gerschgorin_bounds(&chain.lattice),
    };
    let pad = 0.02 * (hi - lo);
    EnergyGrid {
        lo: lo - pad,
        hi: hi + pad,
        points: DEFAULT_CURVE_POINTS,
    }
}

pub fn filling_curve(chain: &Chain, p: &TaskParams) -> Result<Vec<Table>, CliError> {
    let s = spectrum_of(chain)?;
    let grid = p.energy_grid.unwrap_or_else(|| default_energy_grid(chain));
    if grid.points == 0 || !(grid.lo <= grid.hi) {
        return Err(CliError::Config(format!("invalid energy grid {grid:?}")));
    }
    let closed = chain
        .continuum
        .as_ref()
        .and_then(|c| c.family().and_then(closed_form_filling));
    let closed_dos = chain.continuum.as_ref().and_then(|c| {
        c.family()
            .and_then(|f| closed_form_dos(f, c.length(), c.lattice_spacing()))
    });
    let mut cols = vec!["energy", "nu_exact"];
    if chain.continuum.is_some() {
        cols.extend(["nu_wkb", "dos_wkb"]);
    }
    if closed.is_some() {
        cols.push("nu_closed_form");
    }
    if closed_dos.is_some() {
        cols.push("dos_closed_form");
    }
    let mut t = Table::new("filling_curve", &cols);
    let n = s.n() as f64;
    for e in grid.values() {
        let count = s.energies().iter().filter(|&&v| v <= e).count();
        let mut row = vec![e, count as f64 / n];
        if let Some(c) = &chain.continuum {
            row.push(wkb::filling_fraction(c, e).context(|| format!("filling fraction at {e}"))?);
            row.push(wkb::density_of_states(c, e).context(|| format!("density of states at {e}"))?);
        }
        // closed forms are only defined inside their band; NaN elsewhere
        if let Some(f) = &closed {
            row.push(f.eval(e).unwrap_or(f64::NAN));
        }
        if let Some(f) = &closed_dos {
            row.push(f.eval(e).unwrap_or(f64::NAN));
        }
        t.push(row);
    }
    Ok(vec![t])
}

fn default_energies(s: &SingleParticleSpectrum) -> Vec<f64> {
    vec![s.energies()[centre_index(s.n())]]
}

fn decompose(c: &ContinuumProfile, e: f64) -> Result<WellDecomposition, CliError> {
    wkb::wells(c, e, wkb::DEFAULT_SCAN).context(|| format!("well decomposition at ε = {e}"))
}

pub fn wells(chain: &Chain, p: &TaskParams) -> Result<Vec<Table>, CliError> {
    let c = chain.continuum("wells")?;
    let s = spectrum_of(chain)?;
    let energies = p.energies.clone().unwrap_or_else(|| default_energies(&s));
    let mut wt = Table::new(
        "wells",
        &[
            "energy",
            "well",
            "lower",
            "upper",
            "lower_turning",
            "upper_turning",
            "norm",
            "frequency",
        ],
    );
    wt.meta("turning", "1 for a turning point, 0 for a chain end");
    let mut rt = Table::new("regions", &["energy", "kind", "lower", "upper"]);
    rt.meta("kind", "-1 depleted, 0 allowed, 1 saturated");
    for e in energies {
        let wd = decompose(c, e)?;
        let freq = if wd.is_empty() {
            vec![]
        } else {
            wkb::well_frequencies(&wd).context(|| format!("well frequencies at {e}"))?
        };
        for (i, w) in wd.wells.iter().enumerate() {
            let tp = |b: Boundary| {
                if b == Boundary::TurningPoint {
                    1.0
                } else {
                    0.0
                }
            };
            wt.push(vec![
                e,
                i as f64,
                w.lower,
                w.upper,
                tp(w.lower_kind),
                tp(w.upper_kind),
                wd.per_well_norms[i],
                freq[i],
            ]);
        }
        for r in &wd.regions {
            rt.push(vec![e, region_code(r.kind), r.lower, r.upper]);
        }
    }
    Ok(vec![wt, rt])
}

/// Exact mode `k` next to its WKB wavefunction and envelope in lattice
/// normalization (`√a · φ`).
pub fn envelope_table(
    chain: &Chain,
    s: &SingleParticleSpectrum,
    k: usize,
) -> Result<Table, CliError> {
    let c = chain.continuum("envelope")?;
    let n = s.n();
    if k >= n {
        return Err(CliError::Config(format!("mode {k} out of range 0..{n}")));
    }
    let e = s.energies()[k];
    let wd = decompose(c, e)?;
    let mode = s.mode(k).context(|| format!("mode {k}"))?;
    let a = c.lattice_spacing();
    let grid = wkb::lattice_grid(c);
    let mut wave = vec![f64::NAN; n];
    let mut env = vec![f64::NAN; n];
    if !wd.is_empty() {
        let wf = wkb::wkb_wavefunction(c, e, &wd, WellSelector::Combined, &grid)
            .context(|| format!("WKB wavefunction at ε = {e}"))?;
        let en = wkb::envelope(c, e, &wd, WellSelector::Combined, &grid)
            .context(|| format!("envelope at ε = {e}"))?;
        for (x, v) in wf {
            wave[(x / a).round() as usize] = v * a.sqrt();
        }
        for (x, v) in en {
            env[(x / a).round() as usize] = v * a.sqrt();
        }
    }
    let overlap: f64 = mode
        .iter()
        .zip(&wave)
        .filter(|(_, w)| w.is_finite())
        .map(|(m, w)| m * w)
        .sum();
    let sign = if overlap < 0.0 { -1.0 } else { 1.0 };
    let mut t = Table::new(
        format!("envelope_k{k}"),
        &["n", "x", "exact", "wkb", "envelope"],
    );
    t.meta("mode", k)
        .meta("energy", e)
        .meta("wells", wd.count());
    for i in 0..n {
        t.push(vec![i as f64, grid[i], mode[i], sign * wave[i], env[i]]);
    }
    Ok(t)
}

pub fn envelope(chain: &Chain, p: &TaskParams) -> Result<Vec<Table>, CliError> {
    let s = spectrum_of(chain)?;
    let modes = p.modes.clone().unwrap_or_else(|| vec![centre_index(s.n())]);
    modes
        .iter()
        .map(|&k| envelope_table(chain, &s, k))
        .collect()
}

/// Predicted well frequencies against localization counts of the `window`
/// exact modes centred on the mode closest to `e`.
pub fn frequencies_table(
    chain: &Chain,
    s: &SingleParticleSpectrum,
    e: f64,
    window: usize,
    name: String,
) -> Result<Table, CliError> {
    let c = chain.continuum("frequencies")?;
    let wd = decompose(c, e)?;
    let predicted = wkb::well_frequencies(&wd).context(|| format!("well frequencies at {e}"))?;
    let n = s.n();
    let centre = s
        .energies()
        .iter()
        .enumerate()
        .min_by(|x, y| (x.1 - e).abs().total_cmp(&(y.1 - e).abs()))
        .map_or(0, |(i, _)| i);
    let lo = centre.saturating_sub(window / 2);
    let hi = (lo + window).min(n);
    let mut counts = vec![0usize; wd.count()];
    let mut delocalized = 0;
    for k in lo..hi {
        match localize_eigenfunction(s, k, &wd).context(|| format!("localizing mode {k}"))? {
            Localization::Well(i) => counts[i] += 1,
            Localization::Delocalized => delocalized += 1,
        }
    }
    let total = (hi - lo) as f64;
    let mut t = Table::new(
        name,
        &[
            "well",
            "lower",
            "upper",
            "predicted_frequency",
            "exact_fraction",
            "exact_count",
        ],
    );
    t.meta("energy", e)
        .meta("modes", format!("[{lo}, {hi})"))
        .meta("delocalized", delocalized);
    for (i, w) in wd.wells.iter().enumerate() {
        t.push(vec![
            i as f64,
            w.lower,
            w.upper,
            predicted[i],
            counts[i] as f64 / total,
            counts[i] as f64,
        ]);
    }
    Ok(t)
}

pub fn frequencies(chain: &Chain, p: &TaskParams) -> Result<Vec<Table>, CliError> {
    let s = spectrum_of(chain)?;
    let energies = p.energies.clone().unwrap_or_else(|| default_energies(&s));
    let window = p.window.unwrap_or(DEFAULT_WINDOW);
    energies
        .iter()
        .enumerate()
        .map(|(i, &e)| frequencies_table(chain, &s, e, window, format!("frequencies_{i}")))
        .collect()
}

pub fn compare(chain: &Chain, p: &TaskParams, deterministic: bool) -> Result<Vec<Table>, CliError> {
    let c = chain.continuum("compare")?;
    let s = spectrum_of(chain)?;
    let n = s.n();
    let a = chain.lattice.lattice_spacing();
    let fillings = p.fillings.clone().unwrap_or_else(|| vec![0.5]);
    let mut summary = Table::new(
        "compare_summary",
        &[
            "filling",
            "particles",
            "sup_error",
            "mean_abs_error",
            "bulk_sup_error",
            "bulk_margin",
        ],
    );
    let mut out = Vec::new();
    for &nu in &fillings {
        check_filling(nu)?;
        let start = Instant::now();
        let st = FilledState::from_filling(&s, nu).context(|| format!("filling {nu}"))?;
        let exact = density_exact(&s, &st).context(|| "exact density".into())?;
        let ef = wkb_fermi_energy(c, st.m, n)?;
        let grid: Vec<f64> = (0..n).map(|i| i as f64 * a).collect();
        let w = wkb::density_profile(c, ef, &grid)
            .context(|| format!("WKB density at ε_F = {ef}"))?
            .densities();
        let report = ComparisonReport::new("density", grid, exact, w, start.elapsed())
            .context(|| "comparison report".into())?;
        let mut t = Table::new(
            format!("compare_nu{nu}"),
            &["n", "x", "exact", "wkb", "abs_error"],
        );
        t.meta("quantity", &report.quantity)
            .meta("filling", nu)
            .meta("fermi_energy_wkb", ef)
            .meta("sup_error", report.sup_error)
            .meta("mean_abs_error", report.mean_abs_error)
            .meta("bulk_sup_error", report.bulk_sup_error)
            .meta(
                "bulk_margin",
                format!("{} sites excluded at each end", report.bulk_margin),
            );
        if !deterministic {
            t.meta("runtime_seconds", report.runtime_seconds);
        }
        for i in 0..n {
            let (x, e, v) = (report.grid[i], report.exact[i], report.wkb[i]);
            t.push(vec![i as f64, x, e, v, (e - v).abs()]);
        }
        summary.push(vec![
            nu,
            st.m as f64,
            report.sup_error,
            report.mean_abs_error,
            report.bulk_sup_error,
            report.bulk_margin as f64,
        ]);
        out.push(t);
    }
    out.push(summary);
    Ok(out)
}
