//! Finite balleans (coarse structures).
//!
//! The crate checks the ballean axioms on explicit finite ball structures,
//! computes cellularizations, converts between cellular balleans and
//! ultrametric spaces, and factors homogeneous cellular balleans into direct
//! products of pointed sets with an explicit, exhaustively checkable
//! asymorphism. Group balleans over subgroup chains are the main source of
//! such structures.

// distance and incidence matrices read better indexed
#![allow(clippy::needless_range_loop)]

pub mod ballcore;
pub mod cellular;
pub mod decompose;
pub mod error;
pub mod groupball;
pub mod io;
pub mod metrics;
pub mod product;

pub use ballcore::{Asymorphism, AxiomReport, BallStructure, PointSet};
pub use decompose::{BranchingProfile, Decomposition, HomogeneityReport};
pub use error::{BalleanError, ErrorKind, Result};
pub use groupball::{FiniteGroup, SubgroupChain};
pub use metrics::FiniteMetricSpace;
pub use product::{PointedFamily, ProductPoint};
