//! Exact computational linear algebra over valued fields.
//!
//! The crate provides, over two computable valued-field backends (`Q(t)` and
//! truncated Puiseux series):
//!
//! * separated-basis reduction and tensor valuations in valued vector spaces;
//! * lattices in `K^n` as canonical triangular codes, with membership,
//!   equality, duals and the `Γ^n`-valued invariant of the diagonal part;
//! * definable `O`-submodules in classified form, duality and semi-lattice
//!   valuations;
//! * a symbolic engine for definable types on `Γ^n` built from generic points
//!   of lexicographically ordered `Q`-vector spaces;
//! * Gauss (polydisc) types, their degree-`d` semi-lattice images, tropical
//!   evaluation, and integrals of lattice germs along `Γ`-types;
//! * congruence subgroups of the unipotent group, coset codes, and the germ
//!   equivalence decision procedure for `Γ`-parameterized lattice families;
//! * an effective membership test for the image of the space of stably
//!   dominated types inside semi-lattices.
//!
//! All arithmetic is exact; nothing here uses floating point.

pub mod appendix;
pub mod coding;
pub mod error;
pub mod field;
pub mod fmatrix;
pub mod gammatype;
pub mod lattice;
pub mod mpoly;
pub mod omodule;
pub mod poly;
pub mod rational;
pub mod ratlin;
pub mod sample;
pub mod stcomp;
pub mod valspace;

pub use error::{Error, Result};
pub use field::{Backend, FieldElem, Prec, Puiseux, RatFunc};
pub use rational::{GammaVal, Rat};
