//! The flux observable `U*QU − Q` across a horizontal cut, its closed-form
//! blocks and spectrum, relative indices of projections, the Kitaev cut sum,
//! eigenvector flux, and the wandering-orbit shift witness.

mod eigenflux;
mod kitaev;
mod observable;
mod projections;
mod shift;

pub use eigenflux::{dense_flux_matrix, eigenvector_flux};
pub use kitaev::kitaev_trace;
pub use observable::{
    flux_blocks, flux_dense_matrix_free, flux_spectrum, FluxBlock, FluxOperator, FluxReport,
};
pub use projections::{relative_index, relative_index_report, HalfSpaceProjection, IndexReport};
pub use shift::{shift_witness, ShiftWitness};
