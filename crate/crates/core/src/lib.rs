//! Exact numerics for Bridgeland stability conditions on coherent systems
//! over a smooth projective curve of genus `g ≥ 1`.
//!
//! Classes live in the rank-3 lattice of triples `(r, d, n)` (rank and degree
//! of the sheaf, dimension of the section space). The central charge
//! `Z_{b,w} = −n + w·r + i(d − b·r)` parameterizes a two-dimensional family of
//! stability conditions, and [`walls`] computes where a fixed class can
//! change stability inside a search window.

pub mod bnfunction;
pub mod charge;
pub mod classify;
pub mod error;
pub mod numgro;
pub mod piecewise;
pub mod rational;
pub mod walls;

pub use bnfunction::{make_model, BNModel, Membership, ModelKind};
pub use charge::{ChargeData, ComplexRational, Flag, GLElement, PlanePoint};
pub use classify::{classify_regions, ClassificationResult};
pub use error::{Error, Result};
pub use numgro::{Genus, NumClass};
pub use piecewise::PLFunction;
pub use rational::{Rational, Slope};
pub use walls::{enumerate_walls, RationalLine, Wall, Window};
