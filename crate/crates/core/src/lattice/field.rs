//! Scattering fields: the map (j, 2k) → U(2) with chiral-phase structure.
//!
//! The lattice is infinite, so matrices are resolved lazily through three
//! layers: an override map, the chiral defaults forced left of `n_left` and
//! right of `n_right`, and a seeded per-site generator for the interior.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ScatterMatrix, StripSpec};
use crate::rng::SiteRng;
use crate::C64;

const CHIRAL_SNAP_TOL: f64 = 1e-12;

const SALT_Q: u64 = 0;
const SALT_RT: u64 = 1;

/// JSON description of one field. Complex numbers are `[re, im]` pairs and
/// `k2` keys must be even lattice rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n_left: i64,
    pub n_right: i64,
    pub seed: u64,
    #[serde(default)]
    pub deterministic_phases: bool,
    /// Vertical period in scattering cells (2 lattice rows each); 0 = none.
    #[serde(default)]
    pub vertical_period: u32,
    #[serde(default)]
    pub overrides: Vec<OverrideEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideEntry {
    pub j: i64,
    pub k2: i64,
    pub q: [f64; 2],
    pub r: [f64; 2],
    pub t: [f64; 2],
}

impl ModelConfig {
    /// Interior-free sharp interface at column 0.
    pub fn sharp(seed: u64, deterministic_phases: bool) -> Self {
        Self {
            n_left: 0,
            n_right: 0,
            seed,
            deterministic_phases,
            vertical_period: 0,
            overrides: Vec::new(),
        }
    }
}

/// The scattering field 𝕊 : ℤ × 2ℤ → U(2).
///
/// Immutable after construction; lookups are pure functions of (seed, site),
/// so concurrent reads need no synchronization.
#[derive(Debug, Clone)]
pub struct SField {
    n_left: i64,
    n_right: i64,
    seed: u64,
    deterministic_phases: bool,
    period_cells: Option<u32>,
    overrides: HashMap<(i64, i64), ScatterMatrix>,
    /// Single-row replacements consulted before the period reduction; a
    /// nonempty layer breaks vertical periodicity.
    absolute_overrides: HashMap<(i64, i64), ScatterMatrix>,
    rng: SiteRng,
}

impl SField {
    /// Build a field from its JSON description (`field_from_spec`).
    pub fn from_config(cfg: &ModelConfig) -> Result<Self> {
        if cfg.n_left > cfg.n_right {
            return Err(Error::BadBounds {
                n_left: cfg.n_left,
                n_right: cfg.n_right,
            });
        }
        let mut field = Self {
            n_left: cfg.n_left,
            n_right: cfg.n_right,
            seed: cfg.seed,
            deterministic_phases: cfg.deterministic_phases,
            period_cells: match cfg.vertical_period {
                0 => None,
                p => Some(p),
            },
            overrides: HashMap::new(),
            absolute_overrides: HashMap::new(),
            rng: SiteRng::new(cfg.seed),
        };
        for entry in &cfg.overrides {
            if entry.k2.rem_euclid(2) != 0 {
                return Err(Error::OddRowKey { k2: entry.k2 });
            }
            let s = ScatterMatrix::new(
                C64::new(entry.q[0], entry.q[1]),
                C64::new(entry.r[0], entry.r[1]),
                C64::new(entry.t[0], entry.t[1]),
            )?;
            let kcell = entry.k2.div_euclid(2);
            let s = field.admit(entry.j, kcell, s)?;
            field.overrides.insert((entry.j, field.reduce(kcell)), s);
        }
        Ok(field)
    }

    /// Convenience constructor without overrides.
    pub fn seeded(n_left: i64, n_right: i64, seed: u64) -> Result<Self> {
        Self::from_config(&ModelConfig {
            n_left,
            n_right,
            seed,
            deterministic_phases: false,
            vertical_period: 0,
            overrides: Vec::new(),
        })
    }

    pub fn n_left(&self) -> i64 {
        self.n_left
    }

    pub fn n_right(&self) -> i64 {
        self.n_right
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn strip(&self) -> StripSpec {
        StripSpec::new(self.n_left, self.n_right).expect("bounds checked at construction")
    }

    pub fn period_cells(&self) -> Option<u32> {
        self.period_cells
    }

    /// Invariant under vertical translations: every cell row repeats.
    pub fn is_translation_invariant(&self) -> bool {
        self.period_cells == Some(1) && self.absolute_overrides.is_empty()
    }

    fn reduce(&self, kcell: i64) -> i64 {
        match self.period_cells {
            Some(p) => kcell.rem_euclid(p as i64),
            None => kcell,
        }
    }

    /// Chirality gate for explicitly supplied matrices: on forced columns the
    /// wrong entry must vanish (a residual below 1e-12 is snapped to zero).
    fn admit(&self, j: i64, kcell: i64, s: ScatterMatrix) -> Result<ScatterMatrix> {
        if j < self.n_left {
            s.snapped_off_diagonal(CHIRAL_SNAP_TOL)
                .ok_or_else(|| Error::ChiralityViolation {
                    j,
                    k2: 2 * kcell,
                    what: format!("left phase requires r = 0, got |r| = {:.3e}", s.r().norm()),
                })
        } else if j >= self.n_right {
            s.snapped_diagonal(CHIRAL_SNAP_TOL)
                .ok_or_else(|| Error::ChiralityViolation {
                    j,
                    k2: 2 * kcell,
                    what: format!("right phase requires t = 0, got |t| = {:.3e}", s.t().norm()),
                })
        } else {
            Ok(s)
        }
    }

    /// The scattering matrix at site (j, 2·kcell). Total: resolves through
    /// overrides, chiral defaults, or the seeded generator.
    pub fn scatter_at(&self, j: i64, kcell: i64) -> ScatterMatrix {
        if let Some(s) = self.absolute_overrides.get(&(j, kcell)) {
            return *s;
        }
        let kc = self.reduce(kcell);
        if let Some(s) = self.overrides.get(&(j, kc)) {
            return *s;
        }
        let row = 2 * kc;
        if j < self.n_left {
            // left phase: off-diagonal, free phases pinned to t = 1
            let q = if self.deterministic_phases {
                C64::new(1.0, 0.0)
            } else {
                self.rng.unit_phase(j, row, SALT_Q)
            };
            ScatterMatrix::new(q, C64::new(0.0, 0.0), C64::new(1.0, 0.0))
                .expect("chiral default is on-manifold")
        } else if j >= self.n_right {
            // right phase: diagonal, r = 1
            let q = if self.deterministic_phases {
                C64::new(1.0, 0.0)
            } else {
                self.rng.unit_phase(j, row, SALT_Q)
            };
            ScatterMatrix::new(q, C64::new(1.0, 0.0), C64::new(0.0, 0.0))
                .expect("chiral default is on-manifold")
        } else {
            let q = self.rng.unit_phase(j, row, SALT_Q);
            let (r, t) = self.rng.unit_pair(j, row, SALT_RT);
            ScatterMatrix::new(q, r, t).expect("generator draw is on-manifold")
        }
    }

    /// A copy of the field with one matrix replaced (chirality-checked).
    pub fn with_override(&self, j: i64, kcell: i64, s: ScatterMatrix) -> Result<Self> {
        let s = self.admit(j, kcell, s)?;
        let mut out = self.clone();
        out.overrides.insert((j, self.reduce(kcell)), s);
        Ok(out)
    }

    /// A copy with several replacements.
    pub fn with_overrides<I>(&self, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((i64, i64), ScatterMatrix)>,
    {
        let mut out = self.clone();
        for ((j, kcell), s) in entries {
            let s = self.admit(j, kcell, s)?;
            out.overrides.insert((j, self.reduce(kcell)), s);
        }
        Ok(out)
    }

    /// A copy with replacements at literal rows, bypassing the period
    /// reduction: on a periodic field only the named row changes. The result
    /// is no longer translation invariant.
    pub fn with_overrides_at_rows<I>(&self, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((i64, i64), ScatterMatrix)>,
    {
        let mut out = self.clone();
        for ((j, kcell), s) in entries {
            let s = self.admit(j, kcell, s)?;
            out.absolute_overrides.insert((j, kcell), s);
        }
        Ok(out)
    }
}

/// On-manifold interpolation between two scattering matrices: the q factor
/// moves along the shorter circle arc, (r, t) along the normalized chord on
/// the 3-sphere. Errors on antipodal (r, t) pairs.
pub fn interpolate_scatter(a: &ScatterMatrix, b: &ScatterMatrix, s: f64) -> Result<ScatterMatrix> {
    let delta = (b.q() / a.q()).arg();
    let q = a.q() * C64::from_polar(1.0, s * delta);
    let r = (1.0 - s) * a.r() + s * b.r();
    let t = (1.0 - s) * a.t() + s * b.t();
    let norm = (r.norm_sqr() + t.norm_sqr()).sqrt();
    if norm < 1e-6 {
        return Err(Error::DegeneratePath(format!(
            "(r, t) chord collapses at fraction {s}"
        )));
    }
    ScatterMatrix::new(q, r / norm, t / norm)
}
