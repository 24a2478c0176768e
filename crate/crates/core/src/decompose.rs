//! Factoring homogeneous cellular balleans into direct products.
//!
//! A ballean with radii `0..m` qualifies when
//!
//! - (i) every ball is its own path-connectivity class (cellularity),
//! - (ii) balls grow strictly from one radius to the next,
//! - (iii) balls at limit radii are unions of the smaller ones, which holds
//!   vacuously for a finite radius list,
//! - (iv) all radius-0 balls have one size `mu`,
//! - (v) every radius-`α+1` ball splits into the same number `κ_α` of
//!   radius-`α` balls.
//!
//! Such a ballean is asymorphic to the product ballean of factors sized
//! `[mu, κ_0, …, κ_{m-2}]`. The map is built top-down: the top ball is split
//! into radius-`(m-2)` blocks, the block containing the basepoint gets
//! coordinate 0, and each block is handled recursively around its
//! representative. Radius-0 balls are enumerated representative first.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ballcore::{Asymorphism, BallStructure, PointSet};
use crate::cellular::{cellularity_violation, PathClosure};
use crate::error::{BalleanError, Result};
use crate::metrics::linear_radius_order;
use crate::product::{build_product_ballean, PointedFamily, ProductPoint};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingProfile {
    /// Size of every radius-0 ball.
    pub mu: usize,
    /// `kappas[α]`: number of radius-`α` balls in each radius-`α+1` ball.
    pub kappas: Vec<usize>,
}

impl BranchingProfile {
    /// Factor sizes of the product realizing this profile.
    pub fn sizes(&self) -> Vec<usize> {
        std::iter::once(self.mu).chain(self.kappas.iter().copied()).collect()
    }

    pub fn support_size(&self) -> usize {
        self.sizes().iter().product()
    }
}

impl fmt::Display for BranchingProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(mu={}, kappas={:?})", self.mu, self.kappas)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum HomogeneityViolation {
    /// (i): `y` is path connected to `x` at `radius` but outside `B(x, radius)`.
    Cellularity { x: usize, radius: usize, y: usize },
    /// (ii): `B(x, radius)` is not a proper subset of `B(x, radius + 1)`.
    Nesting { x: usize, radius: usize },
    /// (iv): `|B(x, 0)|` differs from the size of the first radius-0 ball.
    RootSize { x: usize, size: usize, expected: usize },
    /// (v): `B(x, radius + 1)` splits into `count` radius balls instead of `expected`.
    Split {
        x: usize,
        radius: usize,
        count: usize,
        expected: usize,
    },
}

impl HomogeneityViolation {
    pub fn condition(&self) -> &'static str {
        match self {
            Self::Cellularity { .. } => "(i)",
            Self::Nesting { .. } => "(ii)",
            Self::RootSize { .. } => "(iv)",
            Self::Split { .. } => "(v)",
        }
    }
}

impl fmt::Display for HomogeneityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cond = self.condition();
        match *self {
            Self::Cellularity { x, radius, y } => write!(
                f,
                "condition {cond}: {y} is path connected to {x} at radius {radius} but outside its ball"
            ),
            Self::Nesting { x, radius } => write!(
                f,
                "condition {cond}: ball around {x} does not grow strictly from radius {radius} to {}",
                radius + 1
            ),
            Self::RootSize { x, size, expected } => write!(
                f,
                "condition {cond}: radius-0 ball around {x} has {size} points, expected {expected}"
            ),
            Self::Split {
                x,
                radius,
                count,
                expected,
            } => write!(
                f,
                "condition {cond}: radius-{} ball around {x} splits into {count} radius-{radius} balls, expected {expected}",
                radius + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomogeneityReport {
    pub ok: bool,
    pub profile: Option<BranchingProfile>,
    pub violation: Option<HomogeneityViolation>,
}

impl HomogeneityReport {
    fn fail(violation: HomogeneityViolation) -> Self {
        Self {
            ok: false,
            profile: None,
            violation: Some(violation),
        }
    }

    pub fn describe(&self) -> String {
        match (&self.violation, &self.profile) {
            (Some(v), _) => v.to_string(),
            (None, Some(p)) => format!("homogeneous with profile {p}"),
            (None, None) => "no result".into(),
        }
    }
}

/// Checks conditions (i)–(v) in order, reporting the first violation in
/// lexicographic witness order.
///
/// The input must be a ballean with linearly ordered radii whose top ball is
/// the whole support; anything else is a contract error.
pub fn check_homogeneity(bs: &BallStructure) -> Result<HomogeneityReport> {
    bs.require_ballean()?;
    let order = linear_radius_order(bs)?;
    let top = *order.last().expect("at least one radius");
    if let Some(x) = (0..bs.len()).find(|&x| bs.ball(x, top).count_ones(..) != bs.len()) {
        return Err(BalleanError::TopNotWhole { x });
    }
    Ok(homogeneity(bs, &PathClosure::new(bs)))
}

fn homogeneity(bs: &BallStructure, closure: &PathClosure) -> HomogeneityReport {
    let n = bs.len();
    let m = bs.radius_count();

    if let Some((radius, x, y)) = cellularity_violation(bs) {
        return HomogeneityReport::fail(HomogeneityViolation::Cellularity { x, radius, y });
    }

    for radius in 0..m - 1 {
        let flat = (0..n).find(|&x| {
            let (small, big) = (bs.ball(x, radius), bs.ball(x, radius + 1));
            !small.is_subset(big) || small.count_ones(..) == big.count_ones(..)
        });
        if let Some(x) = flat {
            return HomogeneityReport::fail(HomogeneityViolation::Nesting { x, radius });
        }
    }

    let mu = bs.ball(0, 0).count_ones(..);
    if let Some(x) = (0..n).find(|&x| bs.ball(x, 0).count_ones(..) != mu) {
        return HomogeneityReport::fail(HomogeneityViolation::RootSize {
            x,
            size: bs.ball(x, 0).count_ones(..),
            expected: mu,
        });
    }

    let mut kappas = Vec::with_capacity(m - 1);
    for radius in 0..m - 1 {
        let mut expected = None;
        for block in closure.classes(radius + 1) {
            let count = sub_blocks(closure, block, radius).len();
            let x = block.ones().next().expect("classes are non-empty");
            match expected {
                None => expected = Some(count),
                Some(e) if e != count => {
                    return HomogeneityReport::fail(HomogeneityViolation::Split {
                        x,
                        radius,
                        count,
                        expected: e,
                    });
                }
                Some(_) => {}
            }
        }
        kappas.push(expected.expect("at least one block"));
    }

    HomogeneityReport {
        ok: true,
        profile: Some(BranchingProfile { mu, kappas }),
        violation: None,
    }
}

/// Radius-`radius` classes inside `block`, each sorted, by smallest member.
fn sub_blocks(closure: &PathClosure, block: &PointSet, radius: usize) -> Vec<Vec<usize>> {
    let mut ids: Vec<usize> = block.ones().map(|y| closure.class_of(y, radius)).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.iter()
        .map(|&c| closure.classes(radius)[c].ones().collect())
        .collect()
}

/// One block of a partition with its chosen representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransversalEntry {
    pub block: Vec<usize>,
    pub representative: usize,
}

/// Orders blocks for the transversal: the block holding `x0` first, with `x0`
/// as its representative, then the rest by smallest member, each represented
/// by its smallest member.
pub fn canonical_block_order(blocks: &[Vec<usize>], x0: usize) -> Result<Vec<TransversalEntry>> {
    let home = blocks
        .iter()
        .position(|b| b.contains(&x0))
        .ok_or(BalleanError::NotCovered { x: x0 })?;
    let smallest = |b: &Vec<usize>| b.iter().copied().min().unwrap_or(usize::MAX);
    let mut rest: Vec<&Vec<usize>> = blocks
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != home)
        .map(|(_, b)| b)
        .collect();
    rest.sort_by_key(|b| smallest(b));
    let mut order = vec![TransversalEntry {
        block: blocks[home].clone(),
        representative: x0,
    }];
    order.extend(rest.into_iter().map(|b| TransversalEntry {
        block: b.clone(),
        representative: smallest(b),
    }));
    Ok(order)
}

/// A product factorization together with the asymorphism onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub profile: BranchingProfile,
    pub family: PointedFamily,
    /// Coordinates of every source point.
    pub coordinates: Vec<ProductPoint>,
    /// Source point `x` goes to the product point at `forward[x]`; bounds are the identity.
    pub asymorphism: Asymorphism,
}

impl Decomposition {
    /// The product ballean the asymorphism lands in.
    pub fn target(&self) -> BallStructure {
        build_product_ballean(&self.family, usize::MAX).expect("same size as the source")
    }
}

/// Builds the product factorization of a homogeneous ballean around `x0`,
/// which is sent to the all-basepoints tuple.
pub fn decompose(bs: &BallStructure, x0: usize) -> Result<Decomposition> {
    bs.check_point(x0)?;
    let report = check_homogeneity(bs)?;
    let Some(profile) = report.profile.clone().filter(|_| report.ok) else {
        return Err(BalleanError::NotHomogeneous(Box::new(report)));
    };
    let m = bs.radius_count();
    let closure = PathClosure::new(bs);
    let mut coords = vec![vec![0usize; m]; bs.len()];

    let mut stack = vec![(x0, m - 1)];
    while let Some((center, radius)) = stack.pop() {
        let ball = closure.closed_ball(center, radius);
        if radius == 0 {
            let members = std::iter::once(center).chain(ball.ones().filter(|&y| y != center));
            for (i, y) in members.enumerate() {
                coords[y][0] = i;
            }
            continue;
        }
        let order = canonical_block_order(&sub_blocks(&closure, ball, radius - 1), center)?;
        for (i, entry) in order.iter().enumerate() {
            for &y in &entry.block {
                coords[y][radius] = i;
            }
            stack.push((entry.representative, radius - 1));
        }
    }

    let family = PointedFamily::from_sizes(&profile.sizes())?;
    let coordinates: Vec<ProductPoint> = coords.into_iter().map(|coords| ProductPoint { coords }).collect();
    let forward = coordinates
        .iter()
        .map(|p| family.encode(p))
        .collect::<Result<Vec<_>>>()?;
    let radii: Vec<usize> = (0..m).collect();
    Ok(Decomposition {
        profile,
        family,
        coordinates,
        asymorphism: Asymorphism {
            forward,
            forward_bound: radii.clone(),
            backward_bound: radii,
        },
    })
}
