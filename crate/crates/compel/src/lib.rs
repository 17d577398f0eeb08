//! Exact decision procedures on finite presentations of Lie-theoretic data:
//!
//! - classify Lie algebras (given by rational structure constants) according to
//!   whether dense finitely generated subgroups of the corresponding group
//!   generically have non-finitely-generated derived subgroups;
//! - decide almost-ellipticity (density of compact elements) of semidirect
//!   products `V ⋊ K` for `K` a finite extension of a torus acting linearly;
//! - test finite generation of the derived-subgroup module `Σ_n ℤ(v − zⁿv)`
//!   for unit-modulus algebraic `z`, both by the closed-form integrality
//!   criterion and by an independent Hermite-normal-form chain oracle;
//! - cross-check the exact verdicts with a numeric simulator for `V ⋊ K`.
//!
//! All symbolic computation is exact (arbitrary-precision rationals); the
//! simulator lives in [`sim`] and is the only module using floating point.

// Index loops mirror the matrix formulas throughout; iterator rewrites of
// c[i][j][k] sums do not make them clearer.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod compact;
pub mod files;
pub mod lattice;
pub mod laurent;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod sim;

pub use compact::CompactGroupSpec;
pub use lattice::{ChainReport, GenSet, LatticeForm};
pub use lie::{LieAlgebra, SubspaceBasis};
pub use scalar::{AlgebraicScalar, GaussianRational, IntPolynomial, Rat};
