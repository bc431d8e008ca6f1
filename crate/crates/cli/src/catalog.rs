//! Reproduction targets: each regenerates the data behind one figure or
//! table at N = 400, with exact and WKB series side by side.

use chain_core::analytic::{
    asymmetric_cosine_critical_energies, cosine_numax, krawtchouk_envelope, rainbow_envelope,
};
use chain_core::exact::diagonalize;
use chain_core::profiles::{make_builtin, FamilyParameters};
use chain_core::wkb;

use crate::config::{Chain, EnergyGrid, TaskParams};
use crate::error::{CliError, Context};
use crate::table::Table;
use crate::tasks;

const N: usize = 400;

pub struct Target {
    pub name: &'static str,
    pub description: &'static str,
    run: fn(&TaskParams) -> Result<Vec<Table>, CliError>,
}

impl Target {
    /// Runs the target; density targets take `fillings` from `p` when given.
    pub fn run(&self, p: &TaskParams) -> Result<Vec<Table>, CliError> {
        (self.run)(p)
    }
}

fn chain(f: FamilyParameters) -> Result<Chain, CliError> {
    let (lattice, c) = make_builtin(&f, N, 1.0).context(|| format!("building {f:?}"))?;
    Ok(Chain {
        lattice,
        continuum: Some(c),
    })
}

fn fillings(p: &TaskParams, default: &[f64]) -> TaskParams {
    TaskParams {
        fillings: Some(p.fillings.clone().unwrap_or_else(|| default.to_vec())),
        ..Default::default()
    }
}

fn renamed(mut tables: Vec<Table>, suffix: &str) -> Vec<Table> {
    for t in &mut tables {
        t.name = format!("{}_{suffix}", t.name);
    }
    tables
}

/// Appends a closed-form envelope column evaluated at each row's `x`.
fn with_closed_envelope(
    mut t: Table,
    f: impl Fn(f64) -> chain_core::Result<f64>,
) -> Result<Table, CliError> {
    let xs = t.column("x").unwrap_or_default();
    t.columns.push("envelope_closed_form".into());
    for (row, x) in t.rows.iter_mut().zip(xs) {
        row.push(f(x).context(|| format!("closed-form envelope at x = {x}"))?);
    }
    Ok(t)
}

fn homogeneous_density(p: &TaskParams) -> Result<Vec<Table>, CliError> {
    tasks::density(
        &chain(FamilyParameters::Homogeneous { j: 1.0, b: 0.0 })?,
        &fillings(p, &[0.25, 0.5]),
    )
}

fn krawtchouk_density(p: &TaskParams) -> Result<Vec<Table>, CliError> {
    tasks::density(
        &chain(FamilyParameters::krawtchouk(0.25))?,
        &fillings(p, &[0.125, 0.5, 0.875]),
    )
}

fn krawtchouk_envelopes(_: &TaskParams) -> Result<Vec<Table>, CliError> {
    let q = 0.25;
    let ch = chain(FamilyParameters::krawtchouk(q))?;
    let s = diagonalize(&ch.lattice).context(|| "diagonalizing".into())?;
    let ell = N as f64;
    [N / 8, N / 2, 7 * N / 8]
        .iter()
        .map(|&k| {
            let e = s.energies()[k];
            let t = tasks::envelope_table(&ch, &s, k)?;
            with_closed_envelope(t, |x| krawtchouk_envelope(q, e.clamp(0.0, 1.0), ell, x))
        })
        .collect()
}

fn rainbow_filling(_: &TaskParams) -> Result<Vec<Table>, CliError> {
    let mut out = Vec::new();
    for h in [1.0, 10.0] {
        let p = TaskParams {
            energy_grid: Some(EnergyGrid {
                lo: -1.0,
                hi: 1.0,
                points: 201,
            }),
            ..Default::default()
        };
        out.extend(renamed(
            tasks::filling_curve(&chain(FamilyParameters::Rainbow { h })?, &p)?,
            &format!("h{h}"),
        ));
    }
    Ok(out)
}

fn rainbow_density(p: &TaskParams) -> Result<Vec<Table>, CliError> {
    tasks::density(
        &chain(FamilyParameters::Rainbow { h: 1.0 })?,
        &fillings(p, &[0.125, 0.4]),
    )
}

fn rainbow_envelopes(_: &TaskParams) -> Result<Vec<Table>, CliError> {
    let h = 1.0;
    let ch = chain(FamilyParameters::Rainbow { h })?;
    let s = diagonalize(&ch.lattice).context(|| "diagonalizing".into())?;
    // modes N/8 and 2N/5 counted from 1
    [N / 8 - 1, 2 * N / 5 - 1]
        .iter()
        .map(|&k| {
            let e = s.energies()[k];
            let t = tasks::envelope_table(&ch, &s, k)?;
            with_closed_envelope(t, |x| rainbow_envelope(h, e, N as f64, x))
        })
        .collect()
}

fn cosine_density(p: &TaskParams) -> Result<Vec<Table>, CliError> {
    tasks::density(
        &chain(FamilyParameters::Cosine { j0: 0.5 })?,
        &fillings(p, &[0.4, 0.5, 0.6]),
    )
}

fn cosine_filling(_: &TaskParams) -> Result<Vec<Table>, CliError> {
    let mut out = Vec::new();
    for j0 in [0.1, 0.5, 0.9] {
        let t = tasks::filling_curve(
            &chain(FamilyParameters::Cosine { j0 })?,
            &TaskParams::default(),
        )?;
        out.extend(renamed(t, &format!("j0_{j0}")));
    }
    let mut t = Table::new("numax", &["j0", "numax_closed_form", "nu_wkb", "nu_exact"]);
    t.meta(
        "energy",
        "2*j0 - 2, the lowest energy reaching the chain centre",
    );
    for i in 1..20 {
        let j0 = 0.05 * i as f64;
        let ch = chain(FamilyParameters::Cosine { j0 })?;
        let c = ch.continuum("numax")?;
        let e = 2.0 * j0 - 2.0;
        let s = diagonalize(&ch.lattice).context(|| "diagonalizing".into())?;
        let exact = s.energies().iter().filter(|&&v| v <= e).count() as f64 / N as f64;
        t.push(vec![
            j0,
            cosine_numax(j0).context(|| format!("ν_max at J0 = {j0}"))?,
            wkb::filling_fraction(c, e).context(|| format!("filling at {e}"))?,
            exact,
        ]);
    }
    out.push(t);
    Ok(out)
}

fn asymmetric_density(p: &TaskParams) -> Result<Vec<Table>, CliError> {
    tasks::density(
        &chain(FamilyParameters::asymmetric_cosine_default())?,
        &fillings(p, &[0.25, 0.5, 0.75]),
    )
}

fn asymmetric_table(_: &TaskParams) -> Result<Vec<Table>, CliError> {
    let ch = chain(FamilyParameters::asymmetric_cosine_default())?;
    let c = ch.continuum("table")?;
    let s = diagonalize(&ch.lattice).context(|| "diagonalizing".into())?;
    let mut t = Table::new(
        "critical_energies",
        &["i", "energy", "nu_table", "nu_wkb", "nu_exact"],
    );
    for (i, &(e, nu)) in asymmetric_cosine_critical_energies().iter().enumerate() {
        let exact = s.energies().iter().filter(|&&v| v <= e).count() as f64 / N as f64;
        let w = wkb::filling_fraction(c, e).context(|| format!("filling at {e}"))?;
        t.push(vec![(i + 1) as f64, e, nu, w, exact]);
    }
    Ok(vec![t])
}

fn asymmetric_eigenfunctions(_: &TaskParams) -> Result<Vec<Table>, CliError> {
    let ch = chain(FamilyParameters::asymmetric_cosine_default())?;
    let s = diagonalize(&ch.lattice).context(|| "diagonalizing".into())?;
    let c = tasks::centre_index(N);
    (c - 2..=c + 2)
        .map(|k| tasks::envelope_table(&ch, &s, k))
        .collect()
}

fn asymmetric_frequencies(_: &TaskParams) -> Result<Vec<Table>, CliError> {
    let ch = chain(FamilyParameters::asymmetric_cosine_default())?;
    let s = diagonalize(&ch.lattice).context(|| "diagonalizing".into())?;
    let e = s.energies()[tasks::centre_index(N)];
    Ok(vec![tasks::frequencies_table(
        &ch,
        &s,
        e,
        40,
        "frequencies".into(),
    )?])
}

pub fn reproduce_catalog() -> Vec<Target> {
    vec![
        Target {
            name: "homogeneous-density",
            description: "homogeneous chain density at ν = 1/4 and 1/2",
            run: homogeneous_density,
        },
        Target {
            name: "krawtchouk-density",
            description: "Krawtchouk chain (q = 1/4) density at ν = 1/8, 1/2, 7/8",
            run: krawtchouk_density,
        },
        Target {
            name: "krawtchouk-envelopes",
            description: "Krawtchouk eigenfunctions with WKB and closed-form envelopes",
            run: krawtchouk_envelopes,
        },
        Target {
            name: "rainbow-filling",
            description: "rainbow filling fraction against ε_F for h = 1 and h = 10",
            run: rainbow_filling,
        },
        Target {
            name: "rainbow-density",
            description: "rainbow chain (h = 1) density at ν = 1/8 and 2/5",
            run: rainbow_density,
        },
        Target {
            name: "rainbow-envelopes",
            description: "rainbow eigenfunctions N/8 and 2N/5 with envelopes",
            run: rainbow_envelopes,
        },
        Target {
            name: "cosine-density",
            description: "cosine chain (J0 = 1/2) density at ν = 2/5, 1/2, 3/5",
            run: cosine_density,
        },
        Target {
            name: "cosine-filling",
            description: "cosine chain filling curves and maximum filling without depletion",
            run: cosine_filling,
        },
        Target {
            name: "asymmetric-cosine-density",
            description: "asymmetric cosine chain density at ν = 1/4, 1/2, 3/4",
            run: asymmetric_density,
        },
        Target {
            name: "asymmetric-cosine-table",
            description: "critical Fermi energies and their filling fractions",
            run: asymmetric_table,
        },
        Target {
            name: "asymmetric-cosine-eigenfunctions",
            description: "eigenfunctions around ε_(N/2) with WKB envelopes",
            run: asymmetric_eigenfunctions,
        },
        Target {
            name: "asymmetric-cosine-frequencies",
            description: "predicted well frequencies against exact localization counts",
            run: asymmetric_frequencies,
        },
    ]
}

pub fn find(name: &str) -> Result<Target, CliError> {
    let names: Vec<&str> = reproduce_catalog().iter().map(|t| t.name).collect();
    reproduce_catalog()
        .into_iter()
        .find(|t| t.name == name)
        .ok_or_else(|| {
            CliError::Config(format!(
                "unknown reproduction target `{name}`; known: {}",
                names.join(", ")
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_complete() {
        let c = reproduce_catalog();
        assert!(c.len() >= 9);
        let mut names: Vec<_> = c.iter().map(|t| t.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), c.len());
        assert!(find("nope").is_err());
    }

    #[test]
    fn every_target_has_exact_and_wkb_series() {
        for t in reproduce_catalog() {
            let tables = t
                .run(&TaskParams::default())
                .unwrap_or_else(|e| panic!("{}: {e}", t.name));
            assert!(!tables.is_empty());
            let cols: Vec<String> = tables.iter().flat_map(|t| t.columns.clone()).collect();
            let has = |p: &str| cols.iter().any(|c| c.contains(p));
            assert!(has("exact"), "{}: {cols:?}", t.name);
            assert!(has("wkb") || has("predicted"), "{}: {cols:?}", t.name);
        }
    }
}
