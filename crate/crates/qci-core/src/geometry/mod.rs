//! Moment-map geometry: spectral regions, fiber-rank tests, degeneracy
//! scans, image membership, and Liouville volumes.

mod rank;
mod region;
pub(crate) mod volume;

pub use rank::{
    fiber_rank, scan_regions, CellReport, LiouvilleSymbols, RankScanReport, ScanAxis, ScanGrid,
};
pub use region::SpectralRegion;
pub use volume::{liouville_volume, monte_carlo_volume, moment_image_contains, WorkingCone};
