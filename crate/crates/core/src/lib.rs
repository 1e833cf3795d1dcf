pub mod ainf;
pub mod contraction;
pub mod error;
pub mod graded;
pub mod json;
pub mod linalg;
pub mod multicomplex;
pub mod rational;
pub mod prelie_series;
pub mod trees;

pub use error::{Error, Result};
pub use rational::Q;
