//! Direct products of pointed families and their canonical cellular ballean.
//!
//! Points of the product are coordinate tuples enumerated in mixed radix with
//! factor 0 varying fastest. The ball of radius `λ` around a tuple consists of
//! all tuples agreeing with it at every coordinate above `λ`, so the radius-`λ`
//! ball is a copy of the product of factors `0..=λ` and the top radius covers
//! the whole product.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ballcore::{index_names, BallStructure, PointSet};
use crate::error::{BalleanError, Result};

/// Default bound on the size of a materialized product.
pub const DEFAULT_MAX_SUPPORT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub size: usize,
    pub basepoint: usize,
}

/// `{(Z_λ, e_λ) : λ < γ}` with each `Z_λ = 0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyDoc")]
pub struct PointedFamily {
    factors: Vec<Factor>,
}

#[derive(Deserialize)]
struct FamilyDoc {
    factors: Vec<Factor>,
}

impl TryFrom<FamilyDoc> for PointedFamily {
    type Error = BalleanError;

    fn try_from(doc: FamilyDoc) -> Result<Self> {
        Self::new(doc.factors)
    }
}

impl PointedFamily {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(BalleanError::InvalidFamily("no factors".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.size == 0 {
                return Err(BalleanError::InvalidFamily(format!("factor {i} is empty")));
            }
            if f.basepoint >= f.size {
                return Err(BalleanError::InvalidFamily(format!(
                    "basepoint {} of factor {i} is outside 0..{}",
                    f.basepoint, f.size
                )));
            }
        }
        Ok(Self { factors })
    }

    /// Factors of the given sizes, every basepoint at 0.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        Self::new(sizes.iter().map(|&size| Factor { size, basepoint: 0 }).collect())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.size).collect()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of tuples, or `None` on overflow.
    pub fn total_size(&self) -> Option<usize> {
        self.factors.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.size))
    }

    /// `∏_{k < level} |Z_k|`. Callers bound the total size first.
    fn stride(&self, level: usize) -> usize {
        self.factors[..level].iter().map(|f| f.size).product()
    }

    pub fn basepoint_tuple(&self) -> ProductPoint {
        ProductPoint {
            coords: self.factors.iter().map(|f| f.basepoint).collect(),
        }
    }

    /// Position of a tuple in the support order.
    pub fn encode(&self, point: &ProductPoint) -> Result<usize> {
        if point.coords.len() != self.len() {
            return Err(BalleanError::InvalidFamily(format!(
                "tuple has {} coordinates for {} factors",
                point.coords.len(),
                self.len()
            )));
        }
        let mut index = 0;
        for (c, f) in point.coords.iter().zip(&self.factors).rev() {
            if *c >= f.size {
                return Err(BalleanError::InvalidFamily(format!("coordinate {c} outside 0..{}", f.size)));
            }
            index = index * f.size + c;
        }
        Ok(index)
    }

    pub fn decode(&self, mut index: usize) -> ProductPoint {
        let coords = self
            .factors
            .iter()
            .map(|f| {
                let c = index % f.size;
                index /= f.size;
                c
            })
            .collect();
        ProductPoint { coords }
    }

    fn bounded_size(&self, max_support: usize) -> Result<usize> {
        match self.total_size() {
            Some(size) if size <= max_support => Ok(size),
            size => Err(BalleanError::TooLarge {
                size: size.unwrap_or(usize::MAX),
                limit: max_support,
            }),
        }
    }
}

/// A coordinate tuple `f` with `f(λ) ∈ Z_λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductPoint {
    pub coords: Vec<usize>,
}

impl fmt::Display for ProductPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// The ballean `B(Z)` on the full product, radii `0..γ`.
///
/// Points are named by their tuples, e.g. `(1,0,2)`.
pub fn build_product_ballean(pf: &PointedFamily, max_support: usize) -> Result<BallStructure> {
    let n = pf.bounded_size(max_support)?;
    let support = (0..n).map(|i| pf.decode(i).to_string()).collect();
    let mut balls = Vec::with_capacity(n * pf.len());
    for radius in 0..pf.len() {
        // agreement above `radius` = same quotient by the stride of factors 0..=radius
        let block = pf.stride(radius + 1);
        for x in 0..n {
            let start = x / block * block;
            let mut ball = PointSet::with_capacity(n);
            ball.insert_range(start..start + block);
            balls.push(ball);
        }
    }
    Ok(BallStructure::from_sets(support, index_names(pf.len()), balls))
}

/// Fibers of the projection onto coordinates `level..γ`, for `level` in `0..=γ`.
///
/// Level 0 gives singletons and level `γ` a single block; the radius-`λ`
/// partition of [`build_product_ballean`] is the one at level `λ + 1`.
pub fn product_partition(pf: &PointedFamily, level: usize, max_support: usize) -> Result<Vec<Vec<usize>>> {
    if level > pf.len() {
        return Err(BalleanError::IndexOutOfRange {
            what: "level",
            index: level,
            len: pf.len() + 1,
        });
    }
    let n = pf.bounded_size(max_support)?;
    let block = pf.stride(level);
    Ok((0..n / block).map(|q| (q * block..(q + 1) * block).collect()).collect())
}
