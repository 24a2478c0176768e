//! Finite metric spaces with exact rational distances, their metric
//! balleans, and the ultrametric realization of cellular balleans.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ballcore::{index_names, Asymorphism, BallStructure};
use crate::cellular::cellularity_violation;
use crate::error::{BalleanError, Result};

pub type Distance = BigRational;

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn format_rational(r: &Distance) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Distance> {
    let bad = || BalleanError::Format(format!("not a rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

fn int(v: i64) -> Distance {
    BigRational::from_integer(v.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    points: Vec<String>,
    dist: Vec<Vec<Distance>>,
}

impl FiniteMetricSpace {
    /// Checks the metric axioms exhaustively; a failure names the offending pair or triple.
    pub fn new(points: Vec<String>, dist: Vec<Vec<Distance>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(BalleanError::EmptySupport);
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(name) = points.iter().find(|p| !seen.insert(p.as_str())) {
            return Err(BalleanError::DuplicateName {
                what: "point",
                name: name.clone(),
            });
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(BalleanError::InvalidMetric(format!("distance matrix is not {n}x{n}")));
        }
        let name = |i: usize| points[i].as_str();
        for x in 0..n {
            if !dist[x][x].is_zero() {
                return Err(BalleanError::InvalidMetric(format!("d({0},{0}) is not zero", name(x))));
            }
            for y in 0..n {
                if dist[x][y] != dist[y][x] {
                    return Err(BalleanError::InvalidMetric(format!(
                        "d({},{}) differs from d({},{})",
                        name(x),
                        name(y),
                        name(y),
                        name(x)
                    )));
                }
                if x != y && !dist[x][y].is_positive() {
                    return Err(BalleanError::InvalidMetric(format!(
                        "d({},{}) is not positive",
                        name(x),
                        name(y)
                    )));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if dist[x][y] > &dist[x][z] + &dist[z][y] {
                        return Err(BalleanError::InvalidMetric(format!(
                            "triangle inequality fails for ({}, {}, {})",
                            name(x),
                            name(y),
                            name(z)
                        )));
                    }
                }
            }
        }
        Ok(Self { points, dist })
    }

    /// Points named `0..n`, distances from a function on index pairs with `x < y`.
    pub fn indexed(n: usize, mut d: impl FnMut(usize, usize) -> Distance) -> Result<Self> {
        let mut dist = vec![vec![Distance::zero(); n]; n];
        for x in 0..n {
            for y in x + 1..n {
                let v = d(x, y);
                dist[x][y] = v.clone();
                dist[y][x] = v;
            }
        }
        Self::new(index_names(n), dist)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn dist(&self, x: usize, y: usize) -> &Distance {
        &self.dist[x][y]
    }

    pub fn rows(&self) -> &[Vec<Distance>] {
        &self.dist
    }

    /// Sorted distinct distance values, including zero.
    pub fn distance_values(&self) -> Vec<Distance> {
        let mut values: Vec<Distance> = self.dist.iter().flatten().cloned().collect();
        values.sort();
        values.dedup();
        values
    }

    /// First triple `(x, y, z)` with `d(x,y) > max(d(x,z), d(z,y))`.
    pub fn strong_triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.dist[x][y] > self.dist[x][z].clone().max(self.dist[z][y].clone()) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_ultrametric(&self) -> bool {
        self.strong_triangle_violation().is_none()
    }

    /// `B_d(x, r) = { y : d(x,y) ≤ r }` over the realized distances `r`.
    pub fn metric_ballean(&self) -> BallStructure {
        let values = self.distance_values();
        let radii = values.iter().map(format_rational).collect();
        BallStructure::from_fn(self.points.clone(), radii, |x, a| {
            let r = &values[a];
            self.dist[x].iter().enumerate().filter(move |(_, d)| *d <= r).map(|(y, _)| y)
        })
        .expect("metric ballean is well formed")
    }
}

/// An ultrametric realizing a cellular ballean with linearly ordered radii.
#[derive(Debug, Clone)]
pub struct Ultrametrization {
    pub space: FiniteMetricSpace,
    /// Distance value standing for each radius of the source structure.
    pub radius_values: Vec<Distance>,
    /// Identity on points, from the source onto `space.metric_ballean()`.
    pub asymorphism: Asymorphism,
}

/// Radius indices sorted along a linear preorder (stable on ties).
pub(crate) fn linear_radius_order(bs: &BallStructure) -> Result<Vec<usize>> {
    if let Some((a, b)) = bs.incomparable_radii() {
        return Err(BalleanError::RadiiNotLinear { a, b });
    }
    let mut order: Vec<usize> = (0..bs.radius_count()).collect();
    order.sort_by(|&a, &b| match (bs.leq(a, b), bs.leq(b, a)) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        _ => Ordering::Greater,
    });
    Ok(order)
}

/// Sets `d(x, y) = 1 + k` for the first level `k` (in radius order) whose
/// ball around `x` contains `y`.
///
/// The structure must be a connected cellular ballean with linearly ordered
/// radii. The returned asymorphism is the identity on points; its bounds send
/// each radius to the metric radius of the same value and back.
pub fn ultrametrize(bs: &BallStructure) -> Result<Ultrametrization> {
    bs.require_ballean()?;
    let order = linear_radius_order(bs)?;
    if let Some((radius, x, y)) = cellularity_violation(bs) {
        return Err(BalleanError::NotCellular { radius, x, y });
    }
    if let Some((x, y)) = bs.disconnected_pair() {
        return Err(BalleanError::Disconnected { x, y });
    }

    let level = |x: usize, y: usize| -> i64 {
        let k = order
            .iter()
            .position(|&a| bs.contains(x, a, y))
            .expect("connected with a top radius");
        k as i64 + 1
    };
    let space = FiniteMetricSpace::new(
        bs.support().to_vec(),
        (0..bs.len())
            .map(|x| (0..bs.len()).map(|y| if x == y { Distance::zero() } else { int(level(x, y)) }).collect())
            .collect(),
    )?;

    let mut radius_values = vec![Distance::zero(); bs.radius_count()];
    for (k, &a) in order.iter().enumerate() {
        radius_values[a] = int(k as i64 + 1);
    }
    let metric_values = space.distance_values();
    let forward_bound = radius_values
        .iter()
        .map(|v| metric_values.iter().rposition(|d| d <= v).expect("zero is realized"))
        .collect();
    let backward_bound = metric_values
        .iter()
        .map(|v| {
            // a zero radius gives singletons, contained in every ball
            let k = v.to_integer().try_into().unwrap_or(1usize).max(1);
            order[k - 1]
        })
        .collect();
    Ok(Ultrametrization {
        space,
        radius_values,
        asymorphism: Asymorphism {
            forward: (0..bs.len()).collect(),
            forward_bound,
            backward_bound,
        },
    })
}

fn random_step(rng: &mut ChaCha8Rng) -> Distance {
    BigRational::new(rng.gen_range(1..=5i64).into(), rng.gen_range(1..=4i64).into())
}

/// A seeded ultrametric on `n` points from `depth` levels of random nested
/// partitioning. Level `k` separates points with an increasing rational value.
pub fn random_ultrametric(seed: u64, n: usize, depth: usize) -> FiniteMetricSpace {
    let n = n.max(1);
    let depth = depth.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(depth);
    let mut acc = Distance::zero();
    for _ in 0..depth {
        acc += random_step(&mut rng);
        values.push(acc.clone());
    }

    let mut dist = vec![vec![Distance::zero(); n]; n];
    let mut stack = vec![((0..n).collect::<Vec<_>>(), depth)];
    while let Some((group, level)) = stack.pop() {
        if group.len() < 2 {
            continue;
        }
        let parts = if level == 1 { group.len() } else { rng.gen_range(1..=group.len().min(3)) };
        let mut children = vec![Vec::new(); parts];
        for (i, &p) in group.iter().enumerate() {
            // the first `parts` points seed distinct children
            let c = if i < parts { i } else { rng.gen_range(0..parts) };
            children[c].push(p);
        }
        for (i, a) in children.iter().enumerate() {
            for b in &children[i + 1..] {
                for &x in a {
                    for &y in b {
                        dist[x][y] = values[level - 1].clone();
                        dist[y][x] = values[level - 1].clone();
                    }
                }
            }
        }
        if level > 1 {
            stack.extend(children.into_iter().map(|c| (c, level - 1)));
        }
    }
    FiniteMetricSpace::new(index_names(n), dist).expect("nested partitions give an ultrametric")
}

/// A seeded shortest-path metric over a complete graph with random rational weights.
pub fn random_metric(seed: u64, n: usize) -> FiniteMetricSpace {
    let n = n.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dist = vec![vec![Distance::zero(); n]; n];
    for x in 0..n {
        for y in x + 1..n {
            let w = BigRational::new(rng.gen_range(1..=9i64).into(), rng.gen_range(1..=3i64).into());
            dist[x][y] = w.clone();
            dist[y][x] = w;
        }
    }
    for z in 0..n {
        for x in 0..n {
            for y in 0..n {
                let via = &dist[x][z] + &dist[z][y];
                if via < dist[x][y] {
                    dist[x][y] = via;
                }
            }
        }
    }
    FiniteMetricSpace::new(index_names(n), dist).expect("shortest paths form a metric")
}
