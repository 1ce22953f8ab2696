// `!(x > 0.0)` is used throughout to reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coords;
pub mod error;
pub mod holonomy;
pub mod hyp2;
pub mod lengths;
pub mod surface;
pub mod sweep;

pub use error::{GeomError, Result};
