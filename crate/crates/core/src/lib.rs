//! Exact computations with KLR algebras, tensor product algebras, their
//! cocenters and current-algebra Weyl modules.

pub mod bubbles;
pub mod cartan;
pub mod current;
pub mod engine;
pub mod error;
pub mod klr;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod stendhal;
pub mod symfunc;
pub mod trace;

pub use cartan::{CartanDatum, Node, SignedIndex, Weight};
pub use error::{Error, Result};
pub use rational::Q;
