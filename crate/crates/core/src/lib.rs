pub mod atinfinity;
pub mod census;
#[cfg(feature = "cli")]
pub mod cli;
pub mod genericity;
pub mod ideals;
pub mod jets;
pub mod localint;
pub mod polyring;
pub mod sampling;
