//! Finite ball structures and the ballean axioms.
//!
//! A [`BallStructure`] stores every ball `B(x, α)` extensionally as a bitset
//! over the support. Points and radii are addressed by their position in the
//! `support` and `radii` name lists.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{BalleanError, Result};

/// A subset of the support, by point index.
pub type PointSet = FixedBitSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallStructure {
    support: Vec<String>,
    radii: Vec<String>,
    /// Radius-major: `balls[α * n + x]`.
    balls: Vec<PointSet>,
}

fn check_names(what: &'static str, names: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(names.len());
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(BalleanError::DuplicateName {
                what,
                name: name.clone(),
            });
        }
    }
    Ok(())
}

pub(crate) fn check_index(what: &'static str, index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(BalleanError::IndexOutOfRange { what, index, len })
    }
}

pub(crate) fn index_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Collects a set of point indices, failing on any index outside `0..n`.
pub fn point_set(n: usize, members: impl IntoIterator<Item = usize>) -> Result<PointSet> {
    let mut set = PointSet::with_capacity(n);
    for y in members {
        check_index("point", y, n)?;
        set.insert(y);
    }
    Ok(set)
}

impl BallStructure {
    /// Builds a structure from a ball function `(x, α) -> members`.
    ///
    /// Names must be unique and the support non-empty. The containment
    /// postulate `x ∈ B(x, α)` is not enforced here; [`BallStructure::validate`]
    /// reports it so that malformed inputs can still be diagnosed.
    pub fn from_fn<F, I>(support: Vec<String>, radii: Vec<String>, mut ball: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> I,
        I: IntoIterator<Item = usize>,
    {
        if support.is_empty() {
            return Err(BalleanError::EmptySupport);
        }
        if radii.is_empty() {
            return Err(BalleanError::NoRadii);
        }
        check_names("point", &support)?;
        check_names("radius", &radii)?;
        let n = support.len();
        let mut balls = Vec::with_capacity(n * radii.len());
        for a in 0..radii.len() {
            for x in 0..n {
                balls.push(point_set(n, ball(x, a))?);
            }
        }
        Ok(Self {
            support,
            radii,
            balls,
        })
    }

    /// Same as [`BallStructure::from_fn`] with points and radii named by their index.
    pub fn indexed<F, I>(points: usize, radii: usize, ball: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> I,
        I: IntoIterator<Item = usize>,
    {
        Self::from_fn(index_names(points), index_names(radii), ball)
    }

    /// Builds a structure from nested member lists indexed `[x][α]`.
    pub fn new(support: Vec<String>, radii: Vec<String>, balls: &[Vec<Vec<usize>>]) -> Result<Self> {
        if balls.len() != support.len() {
            return Err(BalleanError::Format(format!(
                "ball table has {} rows for {} points",
                balls.len(),
                support.len()
            )));
        }
        for row in balls {
            if row.len() != radii.len() {
                return Err(BalleanError::Format(format!(
                    "ball row has {} entries for {} radii",
                    row.len(),
                    radii.len()
                )));
            }
        }
        Self::from_fn(support, radii, |x, a| balls[x][a].iter().copied())
    }

    pub(crate) fn from_sets(support: Vec<String>, radii: Vec<String>, balls: Vec<PointSet>) -> Self {
        debug_assert_eq!(balls.len(), support.len() * radii.len());
        Self {
            support,
            radii,
            balls,
        }
    }

    /// Same names, different ball map (radius-major).
    pub(crate) fn with_balls(&self, balls: Vec<PointSet>) -> Self {
        Self::from_sets(self.support.clone(), self.radii.clone(), balls)
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    /// Always false: construction rejects an empty support.
    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn radius_count(&self) -> usize {
        self.radii.len()
    }

    pub fn support(&self) -> &[String] {
        &self.support
    }

    pub fn radii(&self) -> &[String] {
        &self.radii
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.support.iter().position(|p| p == name)
    }

    pub fn radius_index(&self, name: &str) -> Option<usize> {
        self.radii.iter().position(|r| r == name)
    }

    /// `B(x, α)`. Panics on an out-of-range index, like slice indexing.
    pub fn ball(&self, x: usize, radius: usize) -> &PointSet {
        assert!(x < self.len() && radius < self.radius_count(), "ball index out of range");
        &self.balls[radius * self.len() + x]
    }

    pub fn contains(&self, x: usize, radius: usize, y: usize) -> bool {
        self.ball(x, radius).contains(y)
    }

    /// All balls of one radius, indexed by center.
    pub fn balls_at(&self, radius: usize) -> &[PointSet] {
        let n = self.len();
        &self.balls[radius * n..(radius + 1) * n]
    }

    pub(crate) fn check_point(&self, x: usize) -> Result<()> {
        check_index("point", x, self.len())
    }

    pub(crate) fn check_radius(&self, radius: usize) -> Result<()> {
        check_index("radius", radius, self.radius_count())
    }

    /// `B*(x, α) = { y : x ∈ B(y, α) }`.
    pub fn dual_ball(&self, x: usize, radius: usize) -> Result<PointSet> {
        self.check_point(x)?;
        self.check_radius(radius)?;
        Ok(self.dual_ball_unchecked(x, radius))
    }

    fn dual_ball_unchecked(&self, x: usize, radius: usize) -> PointSet {
        let mut dual = PointSet::with_capacity(self.len());
        for (y, ball) in self.balls_at(radius).iter().enumerate() {
            if ball.contains(x) {
                dual.insert(y);
            }
        }
        dual
    }

    /// All dual balls at one radius, indexed by center.
    fn dual_balls_at(&self, radius: usize) -> Vec<PointSet> {
        let n = self.len();
        let mut duals = vec![PointSet::with_capacity(n); n];
        for (y, ball) in self.balls_at(radius).iter().enumerate() {
            for x in ball.ones() {
                duals[x].insert(y);
            }
        }
        duals
    }

    /// `B(A, α)`, the union of the balls around members of `set`.
    pub fn set_ball(&self, set: &PointSet, radius: usize) -> Result<PointSet> {
        self.check_radius(radius)?;
        self.check_set(set)?;
        Ok(union_over(self.balls_at(radius), set, self.len()))
    }

    /// `B*(A, α)`, the union of the dual balls around members of `set`.
    pub fn dual_set_ball(&self, set: &PointSet, radius: usize) -> Result<PointSet> {
        self.check_radius(radius)?;
        self.check_set(set)?;
        Ok(union_over(&self.dual_balls_at(radius), set, self.len()))
    }

    fn check_set(&self, set: &PointSet) -> Result<()> {
        match set.ones().find(|&y| y >= self.len()) {
            Some(y) => check_index("point", y, self.len()),
            None => Ok(()),
        }
    }

    /// `α ≤ β` iff `B(x, α) ⊆ B(x, β)` for every `x`.
    pub fn radii_leq(&self, a: usize, b: usize) -> Result<bool> {
        self.check_radius(a)?;
        self.check_radius(b)?;
        Ok(self.leq(a, b))
    }

    pub(crate) fn leq(&self, a: usize, b: usize) -> bool {
        self.balls_at(a)
            .iter()
            .zip(self.balls_at(b))
            .all(|(small, big)| small.is_subset(big))
    }

    /// First pair of radii that are incomparable under [`BallStructure::radii_leq`].
    pub fn incomparable_radii(&self) -> Option<(usize, usize)> {
        let m = self.radius_count();
        (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .find(|&(a, b)| !self.leq(a, b) && !self.leq(b, a))
    }

    /// A minimum-size cofinal family of radii.
    ///
    /// Dominated radii are dropped first; the survivors split into classes of
    /// mutually equivalent maximal radii and one representative (the smallest
    /// index) of each class is kept. No smaller family can dominate two
    /// inequivalent maximal radii with one member.
    pub fn cofinality(&self) -> Cofinality {
        let m = self.radius_count();
        let maximal: Vec<usize> = (0..m)
            .filter(|&a| (0..m).all(|b| !self.leq(a, b) || self.leq(b, a)))
            .collect();
        let mut radii: Vec<usize> = Vec::new();
        for &a in &maximal {
            if !radii.iter().any(|&r| self.leq(a, r) && self.leq(r, a)) {
                radii.push(a);
            }
        }
        Cofinality {
            count: radii.len(),
            radii,
        }
    }

    /// A pair `(x, y)` such that no ball around `x` contains `y`.
    pub fn disconnected_pair(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n).find_map(|x| {
            let mut reach = PointSet::with_capacity(n);
            for a in 0..self.radius_count() {
                reach.union_with(self.ball(x, a));
            }
            (0..n).find(|&y| !reach.contains(y)).map(|y| (x, y))
        })
    }

    pub fn is_connected(&self) -> bool {
        self.disconnected_pair().is_none()
    }

    /// Drops every radius whose ball map repeats an earlier radius.
    pub fn dedup_radii(&self) -> Self {
        let mut keep: Vec<usize> = Vec::new();
        for a in 0..self.radius_count() {
            if !keep.iter().any(|&k| self.balls_at(k) == self.balls_at(a)) {
                keep.push(a);
            }
        }
        let balls = keep
            .iter()
            .flat_map(|&a| self.balls_at(a).iter().cloned())
            .collect();
        let radii = keep.iter().map(|&a| self.radii[a].clone()).collect();
        Self::from_sets(self.support.clone(), radii, balls)
    }

    /// Exhaustive check of containment, symmetry and composition.
    ///
    /// Witness radii are uniform in `x`, and the smallest admissible index is
    /// reported. A missing witness lists, for every candidate radius, the
    /// lexicographically smallest `(x, y)` refuting it.
    pub fn validate(&self) -> AxiomReport {
        let n = self.len();
        let m = self.radius_count();

        let containment_violation = (0..n)
            .flat_map(|x| (0..m).map(move |a| (x, a)))
            .find(|&(x, a)| !self.contains(x, a, x))
            .map(|(x, radius)| BallMiss { x, radius });

        let duals: Vec<Vec<PointSet>> = (0..m).map(|a| self.dual_balls_at(a)).collect();
        let ball_into_dual = (0..m)
            .map(|a| search_witness(m, |c| first_escape(self.balls_at(a), &duals[c])))
            .collect::<Vec<_>>();
        let dual_into_ball = (0..m)
            .map(|b| search_witness(m, |c| first_escape(&duals[b], self.balls_at(c))))
            .collect::<Vec<_>>();

        let mut composition = Vec::with_capacity(m);
        for a in 0..m {
            let mut row = Vec::with_capacity(m);
            for b in 0..m {
                let composed: Vec<PointSet> = self
                    .balls_at(a)
                    .iter()
                    .map(|ball| union_over(self.balls_at(b), ball, n))
                    .collect();
                row.push(search_witness(m, |c| first_escape(&composed, self.balls_at(c))));
            }
            composition.push(row);
        }

        let found = |w: &Witness| matches!(w, Witness::Found { .. });
        AxiomReport {
            containment_ok: containment_violation.is_none(),
            containment_violation,
            symmetry_ok: ball_into_dual.iter().chain(&dual_into_ball).all(found),
            ball_into_dual,
            dual_into_ball,
            composition_ok: composition.iter().flatten().all(found),
            composition,
        }
    }

    /// Fails with [`BalleanError::NotABallean`] unless every axiom holds.
    pub fn require_ballean(&self) -> Result<AxiomReport> {
        let report = self.validate();
        if report.is_ballean() {
            Ok(report)
        } else {
            Err(BalleanError::NotABallean(Box::new(report)))
        }
    }
}

fn union_over(balls: &[PointSet], centers: &PointSet, n: usize) -> PointSet {
    let mut out = PointSet::with_capacity(n);
    for c in centers.ones() {
        out.union_with(&balls[c]);
    }
    out
}

/// Smallest `(x, y)` with `y ∈ inner[x]` but `y ∉ outer[x]`.
fn first_escape(inner: &[PointSet], outer: &[PointSet]) -> Option<(usize, usize)> {
    inner.iter().zip(outer).enumerate().find_map(|(x, (i, o))| {
        i.difference(o).next().map(|y| (x, y))
    })
}

fn search_witness(m: usize, mut refute: impl FnMut(usize) -> Option<(usize, usize)>) -> Witness {
    let mut refutations = Vec::with_capacity(m);
    for candidate in 0..m {
        match refute(candidate) {
            None => return Witness::Found { radius: candidate },
            Some((x, y)) => refutations.push(Refutation { candidate, x, y }),
        }
    }
    Witness::Missing { refutations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BallMiss {
    pub x: usize,
    pub radius: usize,
}

/// One candidate radius together with a pair `(x, y)` showing it is too small.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub candidate: usize,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Witness {
    Found { radius: usize },
    Missing { refutations: Vec<Refutation> },
}

impl Witness {
    pub fn radius(&self) -> Option<usize> {
        match self {
            Witness::Found { radius } => Some(*radius),
            Witness::Missing { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub containment_ok: bool,
    pub containment_violation: Option<BallMiss>,
    pub symmetry_ok: bool,
    /// Per `α`: some `α′` with `B(x, α) ⊆ B*(x, α′)` for all `x`.
    pub ball_into_dual: Vec<Witness>,
    /// Per `β`: some `β′` with `B*(x, β) ⊆ B(x, β′)` for all `x`.
    pub dual_into_ball: Vec<Witness>,
    pub composition_ok: bool,
    /// Per `(α, β)`: some `γ` with `B(B(x, α), β) ⊆ B(x, γ)` for all `x`.
    pub composition: Vec<Vec<Witness>>,
}

impl AxiomReport {
    pub fn is_ballean(&self) -> bool {
        self.containment_ok && self.symmetry_ok && self.composition_ok
    }

    /// First symmetry failure as `(x, α, y)`, taken from the refutation of the
    /// largest candidate for the first radius lacking a witness.
    pub fn symmetry_counterexample(&self) -> Option<(usize, usize, usize)> {
        let pick = |list: &[Witness]| {
            list.iter().enumerate().find_map(|(a, w)| match w {
                Witness::Missing { refutations } => refutations.last().map(|r| (r.x, a, r.y)),
                Witness::Found { .. } => None,
            })
        };
        pick(&self.ball_into_dual).or_else(|| pick(&self.dual_into_ball))
    }

    /// First composition failure as `(α, β, refutation of the largest candidate)`.
    pub fn composition_counterexample(&self) -> Option<(usize, usize, Refutation)> {
        self.composition.iter().enumerate().find_map(|(a, row)| {
            row.iter().enumerate().find_map(|(b, w)| match w {
                Witness::Missing { refutations } => refutations.last().map(|r| (a, b, *r)),
                Witness::Found { .. } => None,
            })
        })
    }

    pub fn summary(&self) -> String {
        let mut failed = Vec::new();
        if let Some(miss) = self.containment_violation {
            failed.push(format!(
                "containment fails: {} not in its ball of radius {}",
                miss.x, miss.radius
            ));
        }
        if let Some((x, a, y)) = self.symmetry_counterexample() {
            failed.push(format!("symmetry fails at radius {a} (x={x}, y={y})"));
        }
        if let Some((a, b, r)) = self.composition_counterexample() {
            failed.push(format!(
                "composition fails for radii ({a}, {b}): {} escapes every ball around {}",
                r.y, r.x
            ));
        }
        if failed.is_empty() {
            "all axioms hold".to_owned()
        } else {
            failed.join("; ")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cofinality {
    pub count: usize,
    pub radii: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// `y` lies in the ball of radius `radius` around `x` but its image escapes
/// the bounding ball around the image of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MapViolation {
    pub direction: Direction,
    pub x: usize,
    pub radius: usize,
    pub y: usize,
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} map sends {} from the radius-{} ball around {} outside the bounding ball",
            self.direction, self.y, self.radius, self.x
        )
    }
}

/// A bijection between supports with radius bounds in both directions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Asymorphism {
    pub forward: Vec<usize>,
    pub forward_bound: Vec<usize>,
    pub backward_bound: Vec<usize>,
}

impl Asymorphism {
    pub fn identity(bs: &BallStructure) -> Self {
        let radii: Vec<usize> = (0..bs.radius_count()).collect();
        Self {
            forward: (0..bs.len()).collect(),
            forward_bound: radii.clone(),
            backward_bound: radii,
        }
    }

    /// The inverse permutation of `forward`; fails unless `forward` is a bijection of `0..len`.
    pub fn inverse_map(&self) -> Result<Vec<usize>> {
        invert(&self.forward)
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            forward: self.inverse_map()?,
            forward_bound: self.backward_bound.clone(),
            backward_bound: self.forward_bound.clone(),
        })
    }

    /// `next ∘ self`, with composed bounds.
    pub fn then(&self, next: &Asymorphism) -> Result<Self> {
        let get = |map: &[usize], i: usize, what: &'static str| -> Result<usize> {
            map.get(i)
                .copied()
                .ok_or(BalleanError::IndexOutOfRange { what, index: i, len: map.len() })
        };
        Ok(Self {
            forward: self
                .forward
                .iter()
                .map(|&x| get(&next.forward, x, "point"))
                .collect::<Result<_>>()?,
            forward_bound: self
                .forward_bound
                .iter()
                .map(|&a| get(&next.forward_bound, a, "radius"))
                .collect::<Result<_>>()?,
            backward_bound: next
                .backward_bound
                .iter()
                .map(|&a| get(&self.backward_bound, a, "radius"))
                .collect::<Result<_>>()?,
        })
    }

    fn check_shape(&self, src: &BallStructure, dst: &BallStructure) -> Result<Vec<usize>> {
        if self.forward.len() != src.len() || src.len() != dst.len() {
            return Err(BalleanError::NotBijective(format!(
                "map has {} entries between supports of sizes {} and {}",
                self.forward.len(),
                src.len(),
                dst.len()
            )));
        }
        let backward = self.inverse_map()?;
        for (bound, from, to) in [
            (&self.forward_bound, src, dst),
            (&self.backward_bound, dst, src),
        ] {
            if bound.len() != from.radius_count() {
                return Err(BalleanError::BoundLength {
                    got: bound.len(),
                    expected: from.radius_count(),
                });
            }
            for &r in bound {
                to.check_radius(r)?;
            }
        }
        Ok(backward)
    }

    /// Checks `f(B(x, α)) ⊆ B(f(x), forward_bound[α])` and the mirrored
    /// inclusion for `f⁻¹`, exhaustively. Returns the first violation.
    pub fn verify(&self, src: &BallStructure, dst: &BallStructure) -> Result<Option<MapViolation>> {
        let backward = self.check_shape(src, dst)?;
        let directions = [
            (Direction::Forward, src, dst, &self.forward, &self.forward_bound),
            (Direction::Backward, dst, src, &backward, &self.backward_bound),
        ];
        for (direction, from, to, map, bound) in directions {
            for x in 0..from.len() {
                for radius in 0..from.radius_count() {
                    let target = to.ball(map[x], bound[radius]);
                    if let Some(y) = from.ball(x, radius).ones().find(|&y| !target.contains(map[y])) {
                        return Ok(Some(MapViolation {
                            direction,
                            x,
                            radius,
                            y,
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// First `(x, α)` where `f(B(x, α)) ≠ B(f(x), forward_bound[α])`.
    pub fn ball_image_mismatch(&self, src: &BallStructure, dst: &BallStructure) -> Result<Option<(usize, usize)>> {
        self.check_shape(src, dst)?;
        for x in 0..src.len() {
            for radius in 0..src.radius_count() {
                let ball = src.ball(x, radius);
                let target = dst.ball(self.forward[x], self.forward_bound[radius]);
                let same = ball.count_ones(..) == target.count_ones(..)
                    && ball.ones().all(|y| target.contains(self.forward[y]));
                if !same {
                    return Ok(Some((x, radius)));
                }
            }
        }
        Ok(None)
    }
}

pub(crate) fn invert(map: &[usize]) -> Result<Vec<usize>> {
    let mut inverse = vec![usize::MAX; map.len()];
    for (x, &fx) in map.iter().enumerate() {
        if fx >= map.len() {
            return Err(BalleanError::NotBijective(format!("{x} maps to {fx}, outside the target")));
        }
        if inverse[fx] != usize::MAX {
            return Err(BalleanError::NotBijective(format!(
                "{} and {x} both map to {fx}",
                inverse[fx]
            )));
        }
        inverse[fx] = x;
    }
    Ok(inverse)
}
