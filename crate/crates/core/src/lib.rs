//! Determinantal representations of the permanent, the determinant and
//! quadrics as explicit matrix pencils, with exact tools to verify them.

pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod exactmath;
pub mod oracles;
pub mod pencil;
pub mod symmetry;

pub use error::{Error, Result};
pub use pencil::{Construction, PencilMatrix};
