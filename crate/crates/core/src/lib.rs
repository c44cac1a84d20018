//! Exact 27-dimensional unitary generators for the Tits group ²F₄(2)′ inside
//! the compact real form of E6, together with the machinery that certifies
//! their properties: cyclotomic and mod-41 arithmetic, exact linear algebra,
//! a group-word language, the invariant cubic form, orbit enumeration with a
//! stabilizer-chain order computation, and a replay of the mod-41 basis search.

pub mod basis;
pub mod cli;
pub mod cubic;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod generators;
pub mod gf41;
pub mod linalg;
pub mod matfile;
pub mod orbits;
pub mod stabchain;
pub mod wordlang;

pub use cyclo::CycNum;
pub use error::{Error, Result};
pub use field::Field;
pub use generators::{GeneratorSet, Label};
pub use gf41::Gf41;
pub use linalg::{CycMatrix, GfMatrix, Matrix};
