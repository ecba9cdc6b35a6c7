pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod forces;
pub mod geometry;
pub mod linalg;
pub mod scenario;

pub use error::{Error, Result};
