//! Counter-based random draws keyed by (seed, site, salt).
//!
//! Field materialization must be independent of window size and lookup order,
//! so every draw is a pure function of the master seed and the scattering
//! site, not of any generator state shared between sites. Each (seed, j, row,
//! salt) tuple is mixed into an independent SplitMix64 stream.

use crate::C64;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A tiny deterministic stream: SplitMix64 seeded by a mixed key.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Standard gaussian pair via Box–Muller.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        // avoid log(0)
        let u1 = loop {
            let u = self.next_f64();
            if u > 1e-300 {
                break u;
            }
        };
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        (radius * angle.cos(), radius * angle.sin())
    }
}

/// Site-keyed draws for a whole field.
#[derive(Debug, Clone, Copy)]
pub struct SiteRng {
    seed: u64,
}

impl SiteRng {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    /// Independent stream for one scattering site and purpose (`salt`).
    pub fn stream(&self, j: i64, row: i64, salt: u64) -> SplitMix64 {
        let mut key = mix64(self.seed ^ GOLDEN);
        key = mix64(key ^ (j as u64).wrapping_mul(0xd6e8_feb8_6659_fd93));
        key = mix64(key ^ (row as u64).wrapping_mul(0xca5a_8263_9512_1157));
        key = mix64(key ^ salt.wrapping_mul(0x2545_f491_4f6c_dd1d));
        SplitMix64::new(key)
    }

    /// Uniform phase on the unit circle.
    pub fn unit_phase(&self, j: i64, row: i64, salt: u64) -> C64 {
        let mut s = self.stream(j, row, salt);
        let theta = std::f64::consts::TAU * s.next_f64();
        C64::from_polar(1.0, theta)
    }

    /// Uniform point on the 3-sphere {(r, t) : |r|^2 + |t|^2 = 1}.
    pub fn unit_pair(&self, j: i64, row: i64, salt: u64) -> (C64, C64) {
        let mut s = self.stream(j, row, salt);
        loop {
            let (a, b) = s.next_gaussian_pair();
            let (c, d) = s.next_gaussian_pair();
            let norm = (a * a + b * b + c * c + d * d).sqrt();
            if norm > 1e-6 {
                return (C64::new(a / norm, b / norm), C64::new(c / norm, d / norm));
            }
        }
    }
}
