//! Scattering-matrix parametrization, scattering fields with chiral-phase
//! structure, strip geometry, and metrics on fields.

mod field;
mod metric;
mod scatter;
mod site;
mod strip;

pub use field::{interpolate_scatter, ModelConfig, OverrideEntry, SField};
pub use metric::{field_distance, ScatterWindow};
pub use scatter::{build_scatter, ScatterMatrix, NORMALIZE_TOL, UNITARITY_TOL};
pub use site::LatticeSite;
pub use strip::StripSpec;
