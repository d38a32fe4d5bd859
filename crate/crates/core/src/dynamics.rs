//! Long-time evolution and transport diagnostics.
//!
//! Evolution runs on open windows only: wrap-around would corrupt transport
//! statistics silently, so boundary contact is a hard error instead. One
//! step costs O(support), not O(window), so tall narrow windows for long
//! runs are cheap; the BTreeMap keeps the accumulation order, and hence the
//! output bytes, deterministic.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::SField;
use crate::operator::{Closure, StateVector, Window};
use crate::C64;

/// Sparse state: amplitudes keyed by (j, k).
type SparseState = BTreeMap<(i64, i64), C64>;

fn to_sparse(psi: &StateVector) -> SparseState {
    psi.support().map(|(s, a)| ((s.j, s.k), a)).collect()
}

fn step_sparse(field: &SField, window: Window, cur: &SparseState) -> Result<SparseState> {
    let mut next = SparseState::new();
    for (&(x, y), &amp) in cur {
        for ((tj, tk), coeff) in crate::operator::forward_terms(field, x, y) {
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            if !window.contains(tj, tk) {
                return Err(Error::TruncationLeakage { j: tj, k: tk });
            }
            *next.entry((tj, tk)).or_insert(C64::new(0.0, 0.0)) += amp * coeff;
        }
    }
    Ok(next)
}

/// One evolution step's diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct TransportRecord {
    pub t: u64,
    /// Mean vertical position ⟨k⟩.
    pub mean_k: f64,
    /// Vertical variance.
    pub var_k: f64,
    /// Weight in the upper half space k ≥ 1.
    pub upper_weight: f64,
    pub jmin: i64,
    pub jmax: i64,
    pub kmin: i64,
    pub kmax: i64,
    /// Total norm (constant along the run).
    #[serde(skip)]
    pub norm: f64,
}

/// Per-step transport trace of one trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct TransportTrace {
    pub records: Vec<TransportRecord>,
}

fn record(t: u64, state: &SparseState) -> TransportRecord {
    let norm_sqr: f64 = state.values().map(|a| a.norm_sqr()).sum();
    let mut mean_k = 0.0;
    let mut mean_k2 = 0.0;
    let mut upper = 0.0;
    let mut bbox: Option<(i64, i64, i64, i64)> = None;
    for (&(j, k), amp) in state {
        let w = amp.norm_sqr();
        if w == 0.0 {
            continue;
        }
        let w = w / norm_sqr;
        mean_k += w * k as f64;
        mean_k2 += w * (k as f64) * (k as f64);
        if k >= 1 {
            upper += w;
        }
        bbox = Some(match bbox {
            None => (j, j, k, k),
            Some((j0, j1, k0, k1)) => (j0.min(j), j1.max(j), k0.min(k), k1.max(k)),
        });
    }
    let (jmin, jmax, kmin, kmax) = bbox.unwrap_or((0, 0, 0, 0));
    TransportRecord {
        t,
        mean_k,
        var_k: (mean_k2 - mean_k * mean_k).max(0.0),
        upper_weight: upper.clamp(0.0, 1.0),
        jmin,
        jmax,
        kmin,
        kmax,
        norm: norm_sqr.sqrt(),
    }
}

/// Iterate the model `steps` times, recording diagnostics each step
/// (including t = 0). Support growth is at most one site per step, so a
/// window too small for the run fails loudly.
pub fn evolve(
    field: &SField,
    psi0: &StateVector,
    steps: u64,
) -> Result<(TransportTrace, StateVector)> {
    if psi0.closure() != Closure::Open {
        return Err(Error::IncompatibleClosure(
            "transport runs on open windows only".into(),
        ));
    }
    let window = psi0.window();
    let mut records = Vec::with_capacity(steps as usize + 1);
    let mut state = to_sparse(psi0);
    records.push(record(0, &state));
    for t in 1..=steps {
        state = step_sparse(field, window, &state)?;
        records.push(record(t, &state));
    }
    let mut psi = StateVector::zero(window, Closure::Open)?;
    for (&(j, k), &amp) in &state {
        psi.set(j, k, amp)?;
    }
    Ok((TransportTrace { records }, psi))
}

/// Autocorrelations a_n = ⟨ψ0, Uⁿ ψ0⟩ for n = 0..steps, plus the magnitudes
/// of their discrete Fourier transform.
pub fn autocorrelation_spectrum(
    field: &SField,
    psi0: &StateVector,
    steps: u64,
) -> Result<(Vec<C64>, Vec<f64>)> {
    if psi0.closure() != Closure::Open {
        return Err(Error::IncompatibleClosure(
            "autocorrelation runs on open windows only".into(),
        ));
    }
    let window = psi0.window();
    let reference = to_sparse(psi0);
    let overlap = |state: &SparseState| -> C64 {
        reference
            .iter()
            .map(|(key, a)| a.conj() * state.get(key).copied().unwrap_or(C64::new(0.0, 0.0)))
            .sum()
    };
    let mut series = Vec::with_capacity(steps as usize + 1);
    let mut state = reference.clone();
    series.push(overlap(&state));
    for _ in 1..=steps {
        state = step_sparse(field, window, &state)?;
        series.push(overlap(&state));
    }
    let n = series.len();
    let mut dft = Vec::with_capacity(n);
    for m in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        for (idx, a) in series.iter().enumerate() {
            let angle = -std::f64::consts::TAU * (m * idx) as f64 / n as f64;
            acc += a * C64::from_polar(1.0, angle);
        }
        dft.push(acc.norm());
    }
    Ok((series, dft))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{LatticeSite, ModelConfig};
    use crate::operator::{plaquette_block, Chirality, Window};

    fn sharp(seed: u64) -> SField {
        SField::from_config(&ModelConfig::sharp(seed, false)).unwrap()
    }

    #[test]
    fn sharp_interface_descends_exactly() {
        let field = sharp(3);
        let window = Window::new(0, 0, -44, 2).unwrap();
        let psi0 = StateVector::basis_state(window, Closure::Open, LatticeSite::new(0, 0)).unwrap();
        let (trace, _) = evolve(&field, &psi0, 40).unwrap();
        for rec in &trace.records {
            assert!(
                (rec.mean_k + rec.t as f64).abs() < 1e-12,
                "⟨k⟩ at t = {} is {}",
                rec.t,
                rec.mean_k
            );
            assert!(rec.var_k < 1e-12);
            assert!((rec.norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn plaquette_state_returns_with_the_accumulated_phase() {
        let field = SField::from_config(&ModelConfig {
            n_left: -1_000_000,
            n_right: -1_000_000,
            seed: 8,
            deterministic_phases: false,
            vertical_period: 0,
            overrides: Vec::new(),
        })
        .unwrap();
        let block = plaquette_block(&field, 1, 0, Chirality::Right).unwrap();
        let window = Window::new(-1, 3, -3, 2).unwrap();
        let psi0 = StateVector::basis_state(window, Closure::Open, LatticeSite::new(2, 0)).unwrap();
        let (_, psi4) = evolve(&field, &psi0, 4).unwrap();
        let got = psi4.get(2, 0);
        assert!((got - block.phase_product).norm() < 1e-12);
        assert!((psi4.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_steps_single_record() {
        let field = sharp(1);
        let window = Window::new(0, 0, -2, 2).unwrap();
        let psi0 = StateVector::basis_state(window, Closure::Open, LatticeSite::new(0, 0)).unwrap();
        let (trace, psi) = evolve(&field, &psi0, 0).unwrap();
        assert_eq!(trace.records.len(), 1);
        assert!((psi.get(0, 0) - C64::new(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn window_too_small_fails_loudly() {
        let field = sharp(2);
        let window = Window::new(0, 0, -5, 2).unwrap();
        let psi0 = StateVector::basis_state(window, Closure::Open, LatticeSite::new(0, 0)).unwrap();
        assert!(matches!(
            evolve(&field, &psi0, 10),
            Err(Error::TruncationLeakage { .. })
        ));
    }

    #[test]
    fn bulk_state_stays_on_its_plaquette() {
        let field = SField::from_config(&ModelConfig {
            n_left: -1_000_000,
            n_right: -1_000_000,
            seed: 5,
            deterministic_phases: false,
            vertical_period: 0,
            overrides: Vec::new(),
        })
        .unwrap();
        let window = Window::new(-2, 4, -4, 3).unwrap();
        let psi0 = StateVector::basis_state(window, Closure::Open, LatticeSite::new(2, 0)).unwrap();
        let (trace, _) = evolve(&field, &psi0, 16).unwrap();
        for rec in &trace.records {
            assert!(rec.jmin >= 1 && rec.jmax <= 2 && rec.kmin >= -1 && rec.kmax <= 0);
        }
    }

    #[test]
    fn wandering_orbit_has_zero_autocorrelation() {
        let field = sharp(7);
        let window = Window::new(0, 0, -42, 44).unwrap();
        let psi0 = StateVector::basis_state(window, Closure::Open, LatticeSite::new(0, 1)).unwrap();
        let (series, dft) = autocorrelation_spectrum(&field, &psi0, 40).unwrap();
        assert!((series[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
        for a in &series[1..] {
            assert!(a.norm() < 1e-14);
        }
        // flat spectrum
        for magnitude in &dft {
            assert!((magnitude - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvector_autocorrelation_has_unit_modulus() {
        let field = SField::from_config(&ModelConfig {
            n_left: -1_000_000,
            n_right: -1_000_000,
            seed: 4,
            deterministic_phases: false,
            vertical_period: 0,
            overrides: Vec::new(),
        })
        .unwrap();
        let block = plaquette_block(&field, 1, 0, Chirality::Right).unwrap();
        let window = Window::new(-1, 3, -3, 2).unwrap();
        let mut psi0 = StateVector::zero(window, Closure::Open).unwrap();
        let vec = block.eigenvector(1);
        for (site, amp) in block.basis.iter().zip(vec.iter()) {
            psi0.set(site.j, site.k, *amp).unwrap();
        }
        let (series, _) = autocorrelation_spectrum(&field, &psi0, 12).unwrap();
        for a in &series {
            assert!((a.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_state_autocorrelation_is_one_half() {
        // eigenvector on a bulk plaquette right of the strip + wandering seed
        let field = sharp(6);
        let window = Window::new(-1, 4, -26, 26).unwrap();
        let block = plaquette_block(&field, 1, 0, Chirality::Right).unwrap();
        let mut psi0 = StateVector::zero(window, Closure::Open).unwrap();
        let vec = block.eigenvector(0);
        for (site, amp) in block.basis.iter().zip(vec.iter()) {
            psi0.set(site.j, site.k, *amp).unwrap();
        }
        // plaquette eigenvector has unit norm; add the wandering ket and rescale
        psi0.set(0, 1, C64::new(1.0, 0.0)).unwrap();
        psi0.scale(C64::new(1.0 / 2.0_f64.sqrt(), 0.0));
        assert!((psi0.norm() - 1.0).abs() < 1e-12);
        let (series, _) = autocorrelation_spectrum(&field, &psi0, 24).unwrap();
        for a in &series[1..] {
            assert!((a.norm() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_is_conserved_over_a_thousand_steps() {
        let field = SField::seeded(-2, 2, 15).unwrap();
        let strip = field.strip();
        let window = Window::new(strip.lo(), strip.hi(), -1004, 1004).unwrap();
        let mut psi0 = StateVector::zero(window, Closure::Open).unwrap();
        psi0.set(0, 0, C64::new(0.8, 0.0)).unwrap();
        psi0.set(0, 1, C64::new(0.0, 0.6)).unwrap();
        let (trace, _) = evolve(&field, &psi0, 1000).unwrap();
        for rec in &trace.records {
            assert!(
                (rec.norm - 1.0).abs() < 1e-10,
                "norm drift at t = {}",
                rec.t
            );
        }
    }

    #[test]
    fn sharp_interface_is_ballistic() {
        let field = sharp(11);
        let window = Window::new(0, 0, -204, 3).unwrap();
        let psi0 = StateVector::basis_state(window, Closure::Open, LatticeSite::new(0, 0)).unwrap();
        let (trace, _) = evolve(&field, &psi0, 200).unwrap();
        let last = trace.records.last().unwrap();
        // weight outside |k| ≤ 10 exceeds 0.9 by t = 200
        assert!(last.kmax < -10);
        assert!(last.upper_weight < 1e-14);
    }
}
