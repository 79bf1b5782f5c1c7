//! End-to-end numerical campaigns.

pub mod ap;
pub mod excitatory;
pub mod hermite;
pub mod learning;
pub mod orders;
pub mod presets;
pub mod verdict;
