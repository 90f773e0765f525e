//! 1-D scalar diffraction: sampled complex fields, masks, free-space
//! propagation, and the thin lens.

mod grid;
mod lens;
mod marked;
mod mask;
mod propagate;

pub use grid::{intensity, total_power, FieldGrid, GridSpec};
pub use lens::{apply_thin_lens, LensSpec};
pub use marked::{marked_intensity, MarkedFieldPair};
pub use mask::{apply_mask, make_double_slit, make_wire_grid, TransmissionMask};
pub(crate) use mask::make_offset_slit;
pub use propagate::{max_safe_distance, propagate};
