use serde::{Deserialize, Serialize};

/// One basis ket |j, k⟩ of the lattice: j horizontal, k vertical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeSite {
    pub j: i64,
    pub k: i64,
}

impl LatticeSite {
    pub fn new(j: i64, k: i64) -> Self {
        Self { j, k }
    }
}

impl std::fmt::Display for LatticeSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{},{}⟩", self.j, self.k)
    }
}
