//! Vertical-translation-invariant reduction: convolution kernels, Bloch
//! symbols, determinant windings, quantum-walk and five-diagonal fiber
//! forms, gauge normalization, and band-structure/coverage certification.

mod bands;
mod kernel;
mod mqw;
mod qw;
mod winding;

pub use bands::{band_structure, BandStructure, CoverageReport};
pub use kernel::{fiber_kernel, verify_reconstruction, BlockKernel, FiberKernel};
pub use mqw::{gauge_normalize, mqw_matrix, mqw_strip_range, GaugeRecord, MQWMatrix};
pub use qw::{qw_coins, qw_transform, QWFiber, QwState};
pub use winding::{winding_exact, winding_phase};
