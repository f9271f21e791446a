pub mod benchmarks;
pub mod de;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod optimizer;
pub mod projection;
pub mod sampling;
pub mod space;
pub mod surrogate;

pub use error::{Error, Result};
