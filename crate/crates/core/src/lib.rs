//! Numerical verification engine for quantized universal enveloping algebras
//! U_q(g), their type I representations, the quantum function algebras they
//! pair with, and the operator algebras of quantum flag manifolds.
//!
//! Everything here works at desk scale: ranks up to 4, modules of dimension
//! a few dozen, Fock space truncations of a few dozen levels. Weights and
//! root pairings are exact (integer coordinates, rational pairings); only
//! powers of the deformation parameter q are floating point.

pub mod error;
pub mod flag;
pub mod linalg;
pub mod modules;
pub mod pol;
pub mod report;
pub mod rmatrix;
pub mod roots;
pub mod session;
pub mod soibelman;
pub mod uqalg;

pub use error::Error;
pub use roots::{LieType, RootDatum, Weight, WeylElt};

pub type Result<T> = std::result::Result<T, Error>;
