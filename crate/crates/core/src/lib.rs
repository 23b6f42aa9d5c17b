pub mod error;
pub mod kernelsum;
pub mod numberfield;
pub mod oracle;
pub mod report;
pub mod specialfn;
pub mod verify;

pub use error::{Error, Result};
