//! Reduction theory toolkit: volumes and canonical filtrations of lattices
//! over ℤ and F_q[t], localized volumes, diagonal bases, local building
//! combinatorics and the cover systems built from instability numbers.

pub mod building;
pub mod covers;
pub mod exactmath;
pub mod filtration;
pub mod json;
pub mod latff;
pub mod latz;
pub mod sarith;

mod error;

pub use error::Error;
