//! Matrix-free application of the network unitary and its adjoint, parity
//! symmetry, plaquette blocks, dense truncations, and boundary verification.

mod apply;
mod boundary;
mod dense;
mod plaquette;
mod state;

pub(crate) use apply::forward_terms;
pub use apply::{apply_u, apply_u_adjoint, parity_apply};
pub use boundary::{boundary_phase_check, BoundaryKind, BoundaryPhase};
pub use dense::{dense_on_window, strip_dense, DenseUnitary};
pub use plaquette::{plaquette_block, Chirality, PlaquetteBlock};
pub use state::{Closure, StateVector, Window};
