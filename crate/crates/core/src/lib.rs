pub mod analytic;
pub mod cli;
pub mod compare;
pub mod error;
pub mod mc;
pub mod oracle;
pub mod quad;
pub mod report;
pub mod spin;

pub use error::{Error, Result};
pub use spin::{SpinRep, Spinor, UnitVector};
