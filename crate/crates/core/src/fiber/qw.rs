//! One-dimensional quantum-walk form of a vertically invariant model.
//!
//! The partial Fourier transform ℱ|j,2k⟩ = e^{iky}⊗|j,+⟩,
//! ℱ|j,2k+1⟩ = e^{iky}⊗|j−1,−⟩ turns the model into the fibered walk
//! U_QW(y) = 𝒮 C(y): a coin C_j(y) at every column followed by the
//! spin-dependent shift 𝒮|j,±⟩ = |j±1,±⟩. The coins are
//!
//! ```text
//!   C_{2j}(y)   = q_{2j}   [[-t_{2j},          conj(r_{2j}) e^{iy}],
//!                           [r_{2j} e^{-iy},   conj(t_{2j})      ]]
//!   C_{2j+1}(y) = q_{2j+1} [[r_{2j+1},         conj(t_{2j+1})],
//!                           [-t_{2j+1},        conj(r_{2j+1})]]
//! ```

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::lattice::SField;
use crate::operator::StateVector;
use crate::C64;

/// Spinor sequence over columns `j0..=j0+len-1`; component 0 is |+⟩.
#[derive(Debug, Clone)]
pub struct QwState {
    pub j0: i64,
    pub amps: Vec<[C64; 2]>,
}

impl QwState {
    pub fn zero(j0: i64, len: usize) -> Self {
        Self {
            j0,
            amps: vec![[C64::new(0.0, 0.0); 2]; len],
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps
            .iter()
            .map(|a| a[0].norm_sqr() + a[1].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn diff_norm(&self, other: &Self) -> Result<f64> {
        if self.j0 != other.j0 || self.amps.len() != other.amps.len() {
            return Err(Error::WindowMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

/// The walk fiber at one quasimomentum: coins over a column range.
#[derive(Debug, Clone)]
pub struct QWFiber {
    pub y: f64,
    pub j0: i64,
    pub coins: Vec<Matrix2<C64>>,
}

impl QWFiber {
    /// 𝒮 C(y) applied to a spinor sequence over the same columns; shifting
    /// nonzero amplitude past either end is an error.
    pub fn apply(&self, state: &QwState) -> Result<QwState> {
        if state.j0 != self.j0 || state.amps.len() != self.coins.len() {
            return Err(Error::WindowMismatch);
        }
        let n = state.amps.len();
        let mut coined = vec![[C64::new(0.0, 0.0); 2]; n];
        for (i, (coin, amp)) in self.coins.iter().zip(state.amps.iter()).enumerate() {
            coined[i][0] = coin[(0, 0)] * amp[0] + coin[(0, 1)] * amp[1];
            coined[i][1] = coin[(1, 0)] * amp[0] + coin[(1, 1)] * amp[1];
        }
        let mut out = QwState::zero(self.j0, n);
        for (i, spinor) in coined.iter().enumerate() {
            // |+⟩ moves right, |-⟩ moves left
            if spinor[0].norm_sqr() > 0.0 {
                if i + 1 >= n {
                    return Err(Error::TruncationLeakage {
                        j: self.j0 + n as i64,
                        k: 0,
                    });
                }
                out.amps[i + 1][0] += spinor[0];
            }
            if spinor[1].norm_sqr() > 0.0 {
                if i == 0 {
                    return Err(Error::TruncationLeakage {
                        j: self.j0 - 1,
                        k: 0,
                    });
                }
                out.amps[i - 1][1] += spinor[1];
            }
        }
        Ok(out)
    }
}

/// Coin family of a vertically invariant field.
#[derive(Debug, Clone)]
pub struct QwCoins {
    field: SField,
}

/// Build the coin family (`qw_coins`).
pub fn qw_coins(field: &SField) -> Result<QwCoins> {
    if !field.is_translation_invariant() {
        return Err(Error::NotTranslationInvariant);
    }
    Ok(QwCoins {
        field: field.clone(),
    })
}

impl QwCoins {
    /// The printed coin at column j and quasimomentum y.
    pub fn coin(&self, j: i64, y: f64) -> Matrix2<C64> {
        let s = self.field.scatter_at(j, 0);
        let q = s.q();
        if j.rem_euclid(2) == 0 {
            let up = C64::from_polar(1.0, y);
            let down = C64::from_polar(1.0, -y);
            Matrix2::new(
                q * -s.t(),
                q * s.r().conj() * up,
                q * s.r() * down,
                q * s.t().conj(),
            )
        } else {
            Matrix2::new(q * s.r(), q * s.t().conj(), q * -s.t(), q * s.r().conj())
        }
    }

    /// The assembled fiber over a column range.
    pub fn fiber(&self, y: f64, j0: i64, j1: i64) -> QWFiber {
        QWFiber {
            y,
            j0,
            coins: (j0..=j1).map(|j| self.coin(j, y)).collect(),
        }
    }
}

/// The transform ℱ of a windowed state at quasimomentum y, over columns
/// `j0..=j1`:
/// `(ℱψ)(j,+) = Σ_k ψ(j,2k) e^{iky}`, `(ℱψ)(j,−) = Σ_k ψ(j+1,2k+1) e^{iky}`.
pub fn qw_transform(psi: &StateVector, y: f64, j0: i64, j1: i64) -> QwState {
    let mut out = QwState::zero(j0, (j1 - j0 + 1) as usize);
    for (site, amp) in psi.support() {
        let k2 = site.k.div_euclid(2);
        let phase = C64::from_polar(1.0, y * k2 as f64) * amp;
        if site.k.rem_euclid(2) == 0 {
            let idx = site.j - j0;
            if idx >= 0 && (idx as usize) < out.amps.len() {
                out.amps[idx as usize][0] += phase;
            }
        } else {
            // row 2k+1 feeds the |-⟩ component one column to the left
            let idx = site.j - 1 - j0;
            if idx >= 0 && (idx as usize) < out.amps.len() {
                out.amps[idx as usize][1] += phase;
            }
        }
    }
    out
}
