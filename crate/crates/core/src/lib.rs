//! Exact certification of lattice sphere coverings.

pub mod cli;
pub mod error;
pub mod e8;
pub mod exact;
pub mod leech;
pub mod maxdet;
pub mod qform;
pub mod rigidity;

pub use error::{Error, Rejection, Result};
