//! Extended precision building blocks: double-double numbers (real and
//! complex) and compensated accumulators.

mod dd;
mod sum;

pub use dd::{CDd, Dd};
pub use sum::{ComplexSum, Neumaier};

#[allow(unused_imports)]
pub(crate) use num_traits::Float;
