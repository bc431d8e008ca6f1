//! Chain parameter profiles: lattice arrays `(J_n, B_n)` and their continuum
//! counterparts `(J(x), B(x))`.

mod expr;
mod record;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use expr::Expr;
pub use record::{load_custom, ArraySpec, ExpressionSpec, ProfileRecord, ProfileSource};

/// Lattice hoppings `J_0..J_{N-2}` and fields `B_0..B_{N-1}` with spacing `a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeProfile {
    n: usize,
    hoppings: Vec<f64>,
    fields: Vec<f64>,
    lattice_spacing: f64,
    length: f64,
}

impl LatticeProfile {
    pub fn new(hoppings: Vec<f64>, fields: Vec<f64>, lattice_spacing: f64) -> Result<Self> {
        let n = fields.len();
        if n == 0 {
            return Err(Error::InvalidInput(
                "a chain needs at least one site".into(),
            ));
        }
        if hoppings.len() + 1 != n {
            return Err(Error::InvalidInput(format!(
                "{} hoppings given for {n} sites (expected {})",
                hoppings.len(),
                n - 1
            )));
        }
        if !(lattice_spacing.is_finite() && lattice_spacing > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lattice spacing must be positive, got {lattice_spacing}"
            )));
        }
        if let Some((i, v)) = hoppings.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "hopping J_{i} = {v} is not finite"
            )));
        }
        if let Some((i, v)) = fields.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "field B_{i} = {v} is not finite"
            )));
        }
        Ok(Self {
            n,
            hoppings,
            fields,
            lattice_spacing,
            length: n as f64 * lattice_spacing,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hoppings(&self) -> &[f64] {
        &self.hoppings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn lattice_spacing(&self) -> f64 {
        self.lattice_spacing
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Position `x = n·a` of site `n`.
    pub fn position(&self, site: usize) -> f64 {
        site as f64 * self.lattice_spacing
    }

    /// Bonds with `J_n = 0`; the chain decouples there.
    pub fn zero_hoppings(&self) -> Vec<usize> {
        self.hoppings
            .iter()
            .enumerate()
            .filter(|(_, &j)| j == 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// The same chain with every hopping negated.
    pub fn with_flipped_hoppings(&self) -> Self {
        Self {
            hoppings: self.hoppings.iter().map(|j| -j).collect(),
            ..self.clone()
        }
    }
}

/// Parameters of the builtin chain families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyParameters {
    Homogeneous {
        #[serde(alias = "J")]
        j: f64,
        #[serde(alias = "B", default)]
        b: f64,
    },
    Krawtchouk {
        q: f64,
        /// Divide the lattice arrays by `N` so the spectrum is `{k/N}`.
        #[serde(default = "default_true")]
        rescaled: bool,
    },
    Rainbow {
        h: f64,
    },
    Cosine {
        #[serde(alias = "J0")]
        j0: f64,
    },
    AsymmetricCosine {
        #[serde(alias = "J0")]
        j0: f64,
        b: f64,
        r: u32,
    },
}

fn default_true() -> bool {
    true
}

impl FamilyParameters {
    pub fn krawtchouk(q: f64) -> Self {
        Self::Krawtchouk { q, rescaled: true }
    }

    /// The asymmetric cosine chain with `J0 = 3/4`, `b = 5`, `r = 2`.
    pub fn asymmetric_cosine_default() -> Self {
        Self::AsymmetricCosine {
            j0: 0.75,
            b: 5.0,
            r: 2,
        }
    }

    pub fn tag(&self) -> FamilyTag {
        match self {
            Self::Homogeneous { .. } => FamilyTag::Homogeneous,
            Self::Krawtchouk { .. } => FamilyTag::Krawtchouk,
            Self::Rainbow { .. } => FamilyTag::Rainbow,
            Self::Cosine { .. } => FamilyTag::Cosine,
            Self::AsymmetricCosine { .. } => FamilyTag::AsymmetricCosine,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        match *self {
            Self::Homogeneous { j, b } => {
                if !(j.is_finite() && j != 0.0 && b.is_finite()) {
                    return bad(format!(
                        "homogeneous chain needs finite J != 0 and finite B, got J={j}, B={b}"
                    ));
                }
            }
            Self::Krawtchouk { q, .. } => {
                if !(q > 0.0 && q < 1.0) {
                    return bad(format!("Krawtchouk parameter q must lie in (0,1), got {q}"));
                }
            }
            Self::Rainbow { h } => {
                if !(h.is_finite() && h > 0.0) {
                    return bad(format!("rainbow parameter h must be positive, got {h}"));
                }
                if !n.is_multiple_of(2) {
                    return bad(format!(
                        "rainbow chain needs an even number of sites, got {n}"
                    ));
                }
            }
            Self::Cosine { j0 } => {
                if !(j0 > 0.0 && j0 < 1.0) {
                    return bad(format!("cosine parameter J0 must lie in (0,1), got {j0}"));
                }
            }
            Self::AsymmetricCosine { j0, b, r } => {
                if !(j0.is_finite() && j0.abs() < 1.0 && b.is_finite() && r >= 1) {
                    return bad(format!("asymmetric cosine needs |J0|<1, finite b and r>=1, got J0={j0}, b={b}, r={r}"));
                }
            }
        }
        Ok(())
    }
}

/// Family label carried by a continuum profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    Homogeneous,
    Krawtchouk,
    Rainbow,
    Cosine,
    AsymmetricCosine,
    Custom,
}

/// A real function of the position along the chain.
pub type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Continuum hopping and field profiles on `[0, ℓ]`.
#[derive(Clone)]
pub struct ContinuumProfile {
    j: ProfileFn,
    b: ProfileFn,
    length: f64,
    lattice_spacing: f64,
    family: Option<FamilyParameters>,
}

impl fmt::Debug for ContinuumProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuumProfile")
            .field("length", &self.length)
            .field("lattice_spacing", &self.lattice_spacing)
            .field("family", &self.family)
            .finish_non_exhaustive()
    }
}

impl ContinuumProfile {
    /// A user-defined profile on `[0, length]`; `J` must be positive inside
    /// the open interval.
    pub fn custom<J, B>(j: J, b: B, length: f64, lattice_spacing: f64) -> Result<Self>
    where
        J: Fn(f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(Arc::new(j), Arc::new(b), length, lattice_spacing, None)
    }

    fn build(
        j: ProfileFn,
        b: ProfileFn,
        length: f64,
        lattice_spacing: f64,
        family: Option<FamilyParameters>,
    ) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidInput(format!(
                "chain length must be positive, got {length}"
            )));
        }
        if !(lattice_spacing.is_finite() && lattice_spacing > 0.0 && lattice_spacing <= length) {
            return Err(Error::InvalidInput(format!(
                "lattice spacing must lie in (0, {length}], got {lattice_spacing}"
            )));
        }
        let p = Self {
            j,
            b,
            length,
            lattice_spacing,
            family,
        };
        // spot-check continuity and positivity on a coarse grid
        let m = 64;
        for i in 0..=m {
            let x = length * i as f64 / m as f64;
            let (jx, bx) = (p.j(x), p.b(x));
            if !(jx.is_finite() && bx.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "profile is not finite at x = {x}"
                )));
            }
            if i > 0 && i < m && jx <= 0.0 {
                return Err(Error::SingularProfile { x });
            }
        }
        Ok(p)
    }

    pub fn j(&self, x: f64) -> f64 {
        (self.j)(x)
    }

    pub fn b(&self, x: f64) -> f64 {
        (self.b)(x)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// The spacing `a` of the lattice this profile approximates.
    pub fn lattice_spacing(&self) -> f64 {
        self.lattice_spacing
    }

    /// Number of lattice sites `ℓ/a`, rounded.
    pub fn sites(&self) -> usize {
        (self.length / self.lattice_spacing).round() as usize
    }

    /// The same functions viewed on a lattice with `n` sites.
    pub fn with_sites(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "a chain needs at least one site".into(),
            ));
        }
        Ok(Self {
            lattice_spacing: self.length / n as f64,
            ..self.clone()
        })
    }

    pub fn family(&self) -> Option<&FamilyParameters> {
        self.family.as_ref()
    }

    pub fn family_tag(&self) -> FamilyTag {
        self.family
            .as_ref()
            .map_or(FamilyTag::Custom, FamilyParameters::tag)
    }

    /// `(min_x (B − 2J), max_x (B + 2J))`, the continuum spectral bounds.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let lo = self.extremum(|x| self.b(x) - 2.0 * self.j(x).abs(), false);
        let hi = self.extremum(|x| self.b(x) + 2.0 * self.j(x).abs(), true);
        (lo, hi)
    }

    /// Global extremum by a dense scan followed by golden-section refinement
    /// around the best grid point.
    fn extremum<F: Fn(f64) -> f64>(&self, f: F, maximize: bool) -> f64 {
        let sign = if maximize { -1.0 } else { 1.0 };
        let g = |x: f64| sign * f(x);
        let m = 8192;
        let h = self.length / m as f64;
        let (mut best_i, mut best) = (0, g(0.0));
        for i in 1..=m {
            let v = g(i as f64 * h);
            if v < best {
                best = v;
                best_i = i;
            }
        }
        let (mut a, mut b) = (
            (best_i as f64 - 1.0).max(0.0) * h,
            ((best_i + 1) as f64 * h).min(self.length),
        );
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
        let (mut gc, mut gd) = (g(c), g(d));
        for _ in 0..80 {
            if gc < gd {
                b = d;
                d = c;
                gd = gc;
                c = b - r * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + r * (b - a);
                gd = g(d);
            }
        }
        sign * best.min(gc).min(gd)
    }
}

/// Builds the lattice and continuum profiles of a builtin family.
pub fn make_builtin(
    family: &FamilyParameters,
    n: usize,
    lattice_spacing: f64,
) -> Result<(LatticeProfile, ContinuumProfile)> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "builtin chains need N >= 2, got {n}"
        )));
    }
    family.validate(n)?;
    let nf = n as f64;
    let ell = nf * lattice_spacing;
    let (hop, field): (Vec<f64>, Vec<f64>) = match *family {
        FamilyParameters::Homogeneous { j, b } => (vec![j; n - 1], vec![b; n]),
        FamilyParameters::Krawtchouk { q, rescaled } => {
            let s = if rescaled { 1.0 / nf } else { 1.0 };
            let hop = (0..n - 1)
                .map(|i| s * (q * (1.0 - q) * (i as f64 + 1.0) * (nf - i as f64 - 1.0)).sqrt())
                .collect();
            let field = (0..n)
                .map(|i| s * ((nf - 1.0) * q + (1.0 - 2.0 * q) * i as f64))
                .collect();
            (hop, field)
        }
        FamilyParameters::Rainbow { h } => {
            let hop = (0..n - 1)
                .map(|i| 0.5 * (-h * (0.5 - (i as f64 + 1.0) / nf).abs()).exp())
                .collect();
            (hop, vec![0.0; n])
        }
        FamilyParameters::Cosine { j0 } => {
            let hop = (0..n - 1)
                .map(|i| 1.0 + j0 * (std::f64::consts::TAU * i as f64 / nf).cos())
                .collect();
            (hop, vec![0.0; n])
        }
        FamilyParameters::AsymmetricCosine { j0, b, r } => {
            let hop = (0..n - 1)
                .map(|i| 1.0 + j0 * (std::f64::consts::TAU * r as f64 * i as f64 / nf).cos())
                .collect();
            let field = (0..n).map(|i| b * (i as f64 / nf).powi(2)).collect();
            (hop, field)
        }
    };
    let lattice = LatticeProfile::new(hop, field, lattice_spacing)?;
    let continuum = continuum_of(family, n, ell, lattice_spacing)?;
    Ok((lattice, continuum))
}

/// Continuum limit of a builtin family on a chain of length `ell`.
fn continuum_of(family: &FamilyParameters, n: usize, ell: f64, a: f64) -> Result<ContinuumProfile> {
    use std::f64::consts::TAU;
    let (j, b): (ProfileFn, ProfileFn) = match *family {
        FamilyParameters::Homogeneous { j, b } => (Arc::new(move |_| j), Arc::new(move |_| b)),
        FamilyParameters::Krawtchouk { q, rescaled } => {
            let s = if rescaled { 1.0 } else { n as f64 };
            (
                Arc::new(move |x| {
                    let t = (x / ell).clamp(0.0, 1.0);
                    s * (q * (1.0 - q) * t * (1.0 - t)).sqrt()
                }),
                Arc::new(move |x| s * (q + (1.0 - 2.0 * q) * x / ell)),
            )
        }
        FamilyParameters::Rainbow { h } => (
            Arc::new(move |x| 0.5 * (-h * (0.5 - x / ell).abs()).exp()),
            Arc::new(|_| 0.0),
        ),
        FamilyParameters::Cosine { j0 } => (
            Arc::new(move |x| 1.0 + j0 * (TAU * x / ell).cos()),
            Arc::new(|_| 0.0),
        ),
        FamilyParameters::AsymmetricCosine { j0, b, r } => (
            Arc::new(move |x| 1.0 + j0 * (TAU * r as f64 * x / ell).cos()),
            Arc::new(move |x| b * (x / ell).powi(2)),
        ),
    };
    ContinuumProfile::build(j, b, ell, a, Some(family.clone()))
}

/// Samples a continuum profile at `x = n·a`, `a = ℓ/N`.
pub fn discretize(c: &ContinuumProfile, n: usize) -> Result<LatticeProfile> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "discretization needs N >= 2, got {n}"
        )));
    }
    let a = c.length() / n as f64;
    let hop = (0..n - 1).map(|i| c.j(i as f64 * a)).collect();
    let field = (0..n).map(|i| c.b(i as f64 * a)).collect();
    LatticeProfile::new(hop, field, a)
}

/// Gerschgorin enclosure `[min(B_n − J_n − J_{n−1}), max(B_n + J_n + J_{n−1})]`.
pub fn gerschgorin_bounds(p: &LatticeProfile) -> (f64, f64) {
    let j = p.hoppings();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &b) in p.fields().iter().enumerate() {
        let right = j.get(i).map_or(0.0, |v| v.abs());
        let left = if i > 0 { j[i - 1].abs() } else { 0.0 };
        lo = lo.min(b - right - left);
        hi = hi.max(b + right + left);
    }
    (lo, hi)
}
