//! Path connectivity, the cellularization `B^□`, and the partition view of
//! cellular balleans.

use std::collections::VecDeque;

use crate::ballcore::{BallStructure, PointSet};
use crate::error::{BalleanError, Result};

/// The `α`-path connectivity classes of a structure, for every radius.
///
/// Two points are connected at radius `α` when a finite chain joins them with
/// each step inside an `α`-ball in one direction or the other.
#[derive(Debug, Clone)]
pub struct PathClosure {
    n: usize,
    /// `labels[α][x]`: class of `x` at radius `α`, numbered by smallest member.
    labels: Vec<Vec<usize>>,
    /// `classes[α][c]`: members of class `c`.
    classes: Vec<Vec<PointSet>>,
}

impl PathClosure {
    pub fn new(bs: &BallStructure) -> Self {
        let n = bs.len();
        let (labels, classes) = (0..bs.radius_count()).map(|a| components(bs, a)).unzip();
        Self { n, labels, classes }
    }

    /// `B^□(x, α)`.
    pub fn closed_ball(&self, x: usize, radius: usize) -> &PointSet {
        &self.classes[radius][self.labels[radius][x]]
    }

    /// Classes at one radius, ordered by smallest member.
    pub fn classes(&self, radius: usize) -> &[PointSet] {
        &self.classes[radius]
    }

    pub fn class_of(&self, x: usize, radius: usize) -> usize {
        self.labels[radius][x]
    }

    fn into_balls(self) -> Vec<PointSet> {
        let mut balls = Vec::with_capacity(self.n * self.labels.len());
        for (labels, classes) in self.labels.iter().zip(&self.classes) {
            balls.extend(labels.iter().map(|&c| classes[c].clone()));
        }
        balls
    }
}

/// Connected components of the symmetrized step relation at one radius.
fn components(bs: &BallStructure, radius: usize) -> (Vec<usize>, Vec<PointSet>) {
    let n = bs.len();
    let balls = bs.balls_at(radius);
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, ball) in balls.iter().enumerate() {
        for v in ball.ones() {
            if v != u {
                reverse[v].push(u);
            }
        }
    }

    let mut labels = vec![usize::MAX; n];
    let mut classes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut class = PointSet::with_capacity(n);
        labels[start] = id;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            class.insert(u);
            for v in balls[u].ones().chain(reverse[u].iter().copied()) {
                if labels[v] == usize::MAX {
                    labels[v] = id;
                    queue.push_back(v);
                }
            }
        }
        classes.push(class);
    }
    (labels, classes)
}

/// `B^□(x, α)`: everything reachable from `x` by `α`-steps.
pub fn path_ball(bs: &BallStructure, x: usize, radius: usize) -> Result<PointSet> {
    bs.check_point(x)?;
    bs.check_radius(radius)?;
    let (labels, mut classes) = components(bs, radius);
    Ok(classes.swap_remove(labels[x]))
}

/// Replaces every ball by its path-connectivity class. The input must be a ballean.
pub fn cellularization(bs: &BallStructure) -> Result<BallStructure> {
    bs.require_ballean()?;
    Ok(bs.with_balls(PathClosure::new(bs).into_balls()))
}

/// First `(α, x, y)` with `y` path connected to `x` at radius `α` but outside `B(x, α)`.
pub fn cellularity_violation(bs: &BallStructure) -> Option<(usize, usize, usize)> {
    (0..bs.radius_count()).find_map(|a| violation_at(bs, a).map(|(x, y)| (a, x, y)))
}

fn violation_at(bs: &BallStructure, radius: usize) -> Option<(usize, usize)> {
    let (labels, classes) = components(bs, radius);
    // every ball lies inside its class, so a mismatch is a point of the class outside the ball
    (0..bs.len()).find_map(|x| {
        classes[labels[x]]
            .difference(bs.ball(x, radius))
            .next()
            .map(|y| (x, y))
    })
}

pub fn is_cellular(bs: &BallStructure) -> bool {
    cellularity_violation(bs).is_none()
}

pub fn is_cellular_at(bs: &BallStructure, radius: usize) -> bool {
    violation_at(bs, radius).is_none()
}

/// The blocks of a radius at which the structure is cellular, each sorted,
/// listed by smallest member.
pub fn partition_at(bs: &BallStructure, radius: usize) -> Result<Vec<Vec<usize>>> {
    bs.check_radius(radius)?;
    if let Some((x, y)) = violation_at(bs, radius) {
        return Err(BalleanError::NotCellular { radius, x, y });
    }
    let (_, classes) = components(bs, radius);
    Ok(classes.iter().map(|c| c.ones().collect()).collect())
}
