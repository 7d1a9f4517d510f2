pub mod analysis;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod models;
pub mod oracle;
pub mod presets;
