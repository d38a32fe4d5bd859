//! Windowed state vectors over the lattice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSite;
use crate::C64;

/// Rectangular site range: columns `j0..=j1`, rows `k0..=k1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub j0: i64,
    pub j1: i64,
    pub k0: i64,
    pub k1: i64,
}

impl Window {
    pub fn new(j0: i64, j1: i64, k0: i64, k1: i64) -> Result<Self> {
        if j0 > j1 || k0 > k1 {
            return Err(Error::BadWindow(format!(
                "degenerate bounds [{j0},{j1}]x[{k0},{k1}]"
            )));
        }
        Ok(Self { j0, j1, k0, k1 })
    }

    pub fn cols(&self) -> usize {
        (self.j1 - self.j0 + 1) as usize
    }

    pub fn rows(&self) -> usize {
        (self.k1 - self.k0 + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.cols() * self.rows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, j: i64, k: i64) -> bool {
        j >= self.j0 && j <= self.j1 && k >= self.k0 && k <= self.k1
    }

    /// Row-major flat index (k outer, j inner).
    pub fn index_of(&self, j: i64, k: i64) -> Option<usize> {
        if !self.contains(j, k) {
            return None;
        }
        Some((k - self.k0) as usize * self.cols() + (j - self.j0) as usize)
    }

    /// Sites in flat-index order.
    pub fn sites(&self) -> impl Iterator<Item = LatticeSite> + '_ {
        (self.k0..=self.k1)
            .flat_map(move |k| (self.j0..=self.j1).map(move |j| LatticeSite::new(j, k)))
    }
}

/// How the finite window closes the infinite lattice.
///
/// `Open` rejects any amplitude transfer across the boundary; `TorusVertical`
/// wraps rows (the strip is already invariant horizontally).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    Open,
    TorusVertical,
}

/// Complex amplitudes over a window, row-major (k outer, j inner).
#[derive(Debug, Clone)]
pub struct StateVector {
    window: Window,
    closure: Closure,
    amps: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    window: [i64; 4],
    amps: Vec<[f64; 2]>,
}

impl StateVector {
    pub fn zero(window: Window, closure: Closure) -> Result<Self> {
        if closure == Closure::TorusVertical && !window.rows().is_multiple_of(2) {
            return Err(Error::IncompatibleClosure(format!(
                "torus height {} must be even",
                window.rows()
            )));
        }
        Ok(Self {
            window,
            closure,
            amps: vec![C64::new(0.0, 0.0); window.len()],
        })
    }

    pub fn basis_state(window: Window, closure: Closure, site: LatticeSite) -> Result<Self> {
        let mut psi = Self::zero(window, closure)?;
        let idx = window
            .index_of(site.j, site.k)
            .ok_or_else(|| Error::BadWindow(format!("site {site} outside window")))?;
        psi.amps[idx] = C64::new(1.0, 0.0);
        Ok(psi)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn get(&self, j: i64, k: i64) -> C64 {
        match self.window.index_of(j, k) {
            Some(i) => self.amps[i],
            None => C64::new(0.0, 0.0),
        }
    }

    pub fn set(&mut self, j: i64, k: i64, value: C64) -> Result<()> {
        let idx = self
            .window
            .index_of(j, k)
            .ok_or_else(|| Error::BadWindow(format!("site |{j},{k}⟩ outside window")))?;
        self.amps[idx] = value;
        Ok(())
    }

    pub(crate) fn add_at_index(&mut self, idx: usize, value: C64) {
        self.amps[idx] += value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self, other⟩, conjugate-linear in `self`. Windows must match.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.window != other.window {
            return Err(Error::WindowMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Rescale to unit norm (marks the state as a wave packet).
    pub fn normalize_packet(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::BadWindow("cannot normalize the zero state".into()));
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: C64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: C64) -> Result<()> {
        if self.window != other.window {
            return Err(Error::WindowMismatch);
        }
        for (a, b) in self.amps.iter_mut().zip(other.amps.iter()) {
            *a += factor * b;
        }
        Ok(())
    }

    /// Bounding box (jmin, jmax, kmin, kmax) of nonzero amplitudes.
    pub fn support_box(&self) -> Option<(i64, i64, i64, i64)> {
        let mut b: Option<(i64, i64, i64, i64)> = None;
        for (idx, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let cols = self.window.cols() as i64;
            let k = self.window.k0 + (idx as i64) / cols;
            let j = self.window.j0 + (idx as i64) % cols;
            b = Some(match b {
                None => (j, j, k, k),
                Some((j0, j1, k0, k1)) => (j0.min(j), j1.max(j), k0.min(k), k1.max(k)),
            });
        }
        b
    }

    /// Nonzero entries as (site, amplitude).
    pub fn support(&self) -> impl Iterator<Item = (LatticeSite, C64)> + '_ {
        let cols = self.window.cols() as i64;
        let (j0, k0) = (self.window.j0, self.window.k0);
        self.amps.iter().enumerate().filter_map(move |(idx, a)| {
            if a.norm_sqr() == 0.0 {
                None
            } else {
                let k = k0 + (idx as i64) / cols;
                let j = j0 + (idx as i64) % cols;
                Some((LatticeSite::new(j, k), *a))
            }
        })
    }

    /// Deterministic pseudo-random unit state (for invariant sweeps).
    pub fn seeded_random(window: Window, closure: Closure, seed: u64) -> Result<Self> {
        let mut psi = Self::zero(window, closure)?;
        let mut stream = crate::rng::SplitMix64::new(seed ^ 0x5eed_57a7e);
        for a in &mut psi.amps {
            let (re, im) = stream.next_gaussian_pair();
            *a = C64::new(re, im);
        }
        psi.normalize_packet()?;
        Ok(psi)
    }

    /// JSON per the wire schema:
    /// `{ "window": [j0, j1, k0, k1], "amps": [[re, im], ...] }`.
    pub fn to_json(&self) -> String {
        let doc = StateJson {
            window: [
                self.window.j0,
                self.window.j1,
                self.window.k0,
                self.window.k1,
            ],
            amps: self.amps.iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_string(&doc).expect("state serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateJson =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let window = Window::new(doc.window[0], doc.window[1], doc.window[2], doc.window[3])?;
        if doc.amps.len() != window.len() {
            return Err(Error::Config(format!(
                "amps length {} does not match window size {}",
                doc.amps.len(),
                window.len()
            )));
        }
        Ok(Self {
            window,
            closure: Closure::Open,
            amps: doc.amps.iter().map(|p| C64::new(p[0], p[1])).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_row_major() {
        let w = Window::new(-1, 1, 0, 2).unwrap();
        assert_eq!(w.index_of(-1, 0), Some(0));
        assert_eq!(w.index_of(0, 0), Some(1));
        assert_eq!(w.index_of(-1, 1), Some(3));
        assert_eq!(w.index_of(1, 2), Some(8));
        assert_eq!(w.index_of(2, 0), None);
    }

    #[test]
    fn torus_needs_even_height() {
        let w = Window::new(0, 0, 0, 2).unwrap();
        assert!(StateVector::zero(w, Closure::TorusVertical).is_err());
        let w = Window::new(0, 0, 0, 3).unwrap();
        assert!(StateVector::zero(w, Closure::TorusVertical).is_ok());
    }

    #[test]
    fn json_roundtrip() {
        let w = Window::new(0, 1, -1, 0).unwrap();
        let mut psi = StateVector::zero(w, Closure::Open).unwrap();
        psi.set(0, -1, C64::new(0.5, -0.25)).unwrap();
        psi.set(1, 0, C64::new(0.0, 1.0)).unwrap();
        let text = psi.to_json();
        let back = StateVector::from_json(&text).unwrap();
        assert_eq!(back.window(), w);
        assert_eq!(back.get(0, -1), C64::new(0.5, -0.25));
        assert_eq!(back.get(1, 0), C64::new(0.0, 1.0));
        assert!(text.starts_with(r#"{"window":[0,1,-1,0],"amps":"#));
    }

    #[test]
    fn support_box_tracks_nonzeros() {
        let w = Window::new(-2, 2, -2, 2).unwrap();
        let mut psi = StateVector::zero(w, Closure::Open).unwrap();
        assert_eq!(psi.support_box(), None);
        psi.set(-1, 0, C64::new(1.0, 0.0)).unwrap();
        psi.set(2, -2, C64::new(0.1, 0.0)).unwrap();
        assert_eq!(psi.support_box(), Some((-1, 2, -2, 0)));
    }
}
