pub mod arith;
pub mod complex;
pub mod error;
pub mod ideal;
pub mod implicit;
pub mod linalg;
pub mod pipeline;
pub mod polytope;
pub mod repmat;
pub mod toric;

pub use error::{Error, Result};
