//! Finite groups given by Cayley tables, subgroup chains, and the group
//! ballean whose balls are the left cosets `gG_n`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ballcore::{Asymorphism, BallStructure, PointSet};
use crate::decompose::{decompose, BranchingProfile};
use crate::error::{BalleanError, Result};

/// A group on `0..n` with identity 0, given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupViolation {
    /// `row[a] == row[b]` in row `row`.
    RepeatedInRow { row: usize, a: usize, b: usize },
    /// `table[a][col] == table[b][col]`.
    RepeatedInColumn { col: usize, a: usize, b: usize },
    /// Element 0 is not a two-sided identity for `element`.
    Identity { element: usize },
    /// `(a·b)·c ≠ a·(b·c)`.
    Associativity { a: usize, b: usize, c: usize },
    NoInverse { element: usize },
}

impl GroupViolation {
    pub fn describe(&self) -> String {
        match *self {
            Self::RepeatedInRow { row, a, b } => {
                format!("row {row} repeats an entry in columns {a} and {b}")
            }
            Self::RepeatedInColumn { col, a, b } => {
                format!("column {col} repeats an entry in rows {a} and {b}")
            }
            Self::Identity { element } => format!("0 is not an identity for {element}"),
            Self::Associativity { a, b, c } => format!("({a}*{b})*{c} != {a}*({b}*{c})"),
            Self::NoInverse { element } => format!("{element} has no inverse"),
        }
    }
}

impl FiniteGroup {
    /// Accepts any square table with entries in range; the group laws are
    /// checked by [`FiniteGroup::validate`].
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(BalleanError::InvalidGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(BalleanError::InvalidGroup(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(BalleanError::InvalidGroup(format!("row {i} has entry {v} outside 0..{n}")));
            }
        }
        Ok(Self { table })
    }

    /// Same as [`FiniteGroup::from_table`] followed by [`FiniteGroup::validate`].
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let group = Self::from_table(table)?;
        match group.validate() {
            None => Ok(group),
            Some(v) => Err(BalleanError::InvalidGroup(v.describe())),
        }
    }

    pub fn cyclic(n: usize) -> Self {
        Self {
            table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        }
    }

    /// `self × other`, with `(a, b)` at index `a + |self|·b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let (p, q) = (self.order(), other.order());
        let table = (0..p * q)
            .map(|x| {
                (0..p * q)
                    .map(|y| self.mul(x % p, y % p) + p * other.mul(x / p, y / p))
                    .collect()
            })
            .collect();
        Self { table }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.order()).find(|&b| self.mul(a, b) == 0 && self.mul(b, a) == 0)
    }

    /// The first failing group law: Latin square, identity, associativity, inverses.
    pub fn validate(&self) -> Option<GroupViolation> {
        let n = self.order();
        for row in 0..n {
            if let Some((a, b)) = first_repeat((0..n).map(|j| self.table[row][j])) {
                return Some(GroupViolation::RepeatedInRow { row, a, b });
            }
        }
        for col in 0..n {
            if let Some((a, b)) = first_repeat((0..n).map(|i| self.table[i][col])) {
                return Some(GroupViolation::RepeatedInColumn { col, a, b });
            }
        }
        if let Some(element) = (0..n).find(|&g| self.mul(0, g) != g || self.mul(g, 0) != g) {
            return Some(GroupViolation::Identity { element });
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some(GroupViolation::Associativity { a, b, c });
                    }
                }
            }
        }
        (0..n)
            .find(|&g| self.inverse(g).is_none())
            .map(|element| GroupViolation::NoInverse { element })
    }

    /// Renames element `g` to `perm[g]`. `perm` must fix 0.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.order();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a]][perm[b]] = perm[self.mul(a, b)];
            }
        }
        Self { table }
    }
}

fn first_repeat(values: impl Iterator<Item = usize>) -> Option<(usize, usize)> {
    let mut first_at = std::collections::HashMap::new();
    for (j, v) in values.enumerate() {
        if let Some(&i) = first_at.get(&v) {
            return Some((i, j));
        }
        first_at.insert(v, j);
    }
    None
}

/// `G_0 ⊊ G_1 ⊊ … ⊊ G_{m-1} = G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupChain {
    group: FiniteGroup,
    chain: Vec<Vec<usize>>,
}

impl SubgroupChain {
    pub fn new(group: FiniteGroup, chain: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(v) = group.validate() {
            return Err(BalleanError::InvalidGroup(v.describe()));
        }
        let n = group.order();
        if chain.is_empty() {
            return Err(BalleanError::InvalidChain("no subgroups".into()));
        }
        let mut sets: Vec<PointSet> = Vec::with_capacity(chain.len());
        let mut sorted = Vec::with_capacity(chain.len());
        for (k, members) in chain.into_iter().enumerate() {
            let bad = |msg: String| BalleanError::InvalidChain(format!("level {k}: {msg}"));
            let mut set = PointSet::with_capacity(n);
            for &g in &members {
                if g >= n {
                    return Err(bad(format!("element {g} outside 0..{n}")));
                }
                set.insert(g);
            }
            if !set.contains(0) {
                return Err(bad("missing the identity".into()));
            }
            for a in set.ones() {
                if let Some(b) = set.ones().find(|&b| !set.contains(group.mul(a, b))) {
                    return Err(bad(format!("{a}*{b} leaves the subgroup")));
                }
                if !group.inverse(a).is_some_and(|i| set.contains(i)) {
                    return Err(bad(format!("inverse of {a} missing")));
                }
            }
            if let Some(prev) = sets.last() {
                if !prev.is_subset(&set) || prev.count_ones(..) == set.count_ones(..) {
                    return Err(bad("does not strictly contain the previous level".into()));
                }
            }
            sorted.push(set.ones().collect());
            sets.push(set);
        }
        if sets.last().map(|s| s.count_ones(..)) != Some(n) {
            return Err(BalleanError::InvalidChain("last level is not the whole group".into()));
        }
        Ok(Self { group, chain: sorted })
    }

    /// `Z_{s_0} × … × Z_{s_{m-1}}` with `G_k` the product of the first `k+1` factors.
    pub fn direct_sum(sizes: &[usize]) -> Result<Self> {
        let mut group = FiniteGroup::cyclic(1);
        let mut chain = Vec::with_capacity(sizes.len());
        for &s in sizes {
            if s == 0 {
                return Err(BalleanError::InvalidChain("empty cyclic factor".into()));
            }
            group = if chain.is_empty() { FiniteGroup::cyclic(s) } else { group.direct_product(&FiniteGroup::cyclic(s)) };
            chain.push(group.order());
        }
        // the first k+1 factors occupy the indices below their product
        let chain = chain.into_iter().map(|order| (0..order).collect()).collect();
        Self::new(group, chain)
    }

    /// `Z_N` for `N = mu·∏κ`, with `G_k` the subgroup of order `mu·κ_0⋯κ_{k-1}`.
    pub fn cyclic(profile: &BranchingProfile) -> Result<Self> {
        let n = profile.support_size();
        let mut order = profile.mu;
        let mut chain = vec![order];
        for &k in &profile.kappas {
            order *= k;
            chain.push(order);
        }
        let chain = chain
            .into_iter()
            .map(|d| (0..n).step_by((n / d).max(1)).collect())
            .collect();
        Self::new(FiniteGroup::cyclic(n), chain)
    }

    /// Renames elements by `perm` (which must fix the identity).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.first() != Some(&0) {
            return Err(BalleanError::InvalidGroup("relabeling must fix the identity".into()));
        }
        crate::ballcore::invert(perm)?;
        let chain = self
            .chain
            .iter()
            .map(|level| level.iter().map(|&g| perm[g]).collect())
            .collect();
        Self::new(self.group.relabel(perm), chain)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.chain
    }

    /// `mu = |G_0|`, `κ_k = |G_{k+1} : G_k|`.
    pub fn profile(&self) -> BranchingProfile {
        BranchingProfile {
            mu: self.chain[0].len(),
            kappas: self.chain.windows(2).map(|w| w[1].len() / w[0].len()).collect(),
        }
    }

    /// The ballean on the group with `B(g, n) = gG_n`.
    pub fn ballean(&self) -> BallStructure {
        let n = self.group.order();
        BallStructure::indexed(n, self.chain.len(), |g, k| {
            self.chain[k].iter().map(move |&h| self.group.mul(g, h))
        })
        .expect("cosets are in range")
    }
}

pub fn group_ballean(sc: &SubgroupChain) -> BallStructure {
    sc.ballean()
}

pub fn chain_profile(sc: &SubgroupChain) -> BranchingProfile {
    sc.profile()
}

/// Routes `G → product → H` through the decompositions of both group
/// balleans around their identities.
pub fn asymorphism_between(g: &SubgroupChain, h: &SubgroupChain) -> Result<Asymorphism> {
    let (pg, ph) = (g.profile(), h.profile());
    if pg != ph {
        return Err(BalleanError::ProfileMismatch { left: pg, right: ph });
    }
    let into_product = decompose(&g.ballean(), 0)?.asymorphism;
    let from_product = decompose(&h.ballean(), 0)?.asymorphism.inverse()?;
    into_product.then(&from_product)
}

fn random_relabel(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut rest: Vec<usize> = (1..n).collect();
    rest.shuffle(rng);
    std::iter::once(0).chain(rest).collect()
}

/// A seeded `m`-level chain in a direct sum of small cyclic groups, with
/// elements shuffled (identity kept at 0).
///
/// Level sizes grow by factors of 2 or 3; `G_0` has order 1 to 3. About half
/// the seeds realize the profile inside a single cyclic group instead.
pub fn truncated_locally_finite(seed: u64, m: usize) -> SubgroupChain {
    truncated_locally_finite_within(seed, m, usize::MAX).expect("unbounded")
}

/// [`truncated_locally_finite`], refusing before construction when the group
/// order would exceed `max_order`.
pub fn truncated_locally_finite_within(seed: u64, m: usize, max_order: usize) -> Result<SubgroupChain> {
    let m = m.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sizes = vec![rng.gen_range(1..=3usize)];
    let mut order = sizes[0];
    for _ in 1..m {
        let s = rng.gen_range(2..=3usize);
        order = order.saturating_mul(s);
        if order > max_order {
            return Err(BalleanError::TooLarge { size: order, limit: max_order });
        }
        sizes.push(s);
    }
    let chain = if rng.gen_bool(0.5) {
        SubgroupChain::direct_sum(&sizes)
    } else {
        SubgroupChain::cyclic(&BranchingProfile {
            mu: sizes[0],
            kappas: sizes[1..].to_vec(),
        })
    }?;
    let perm = random_relabel(&mut rng, chain.group().order());
    chain.relabel(&perm)
}

/// Two chains sharing `profile`: one cyclic, one a direct sum, each shuffled by `seed`.
pub fn matched_chain_pair(seed: u64, profile: &BranchingProfile) -> Result<(SubgroupChain, SubgroupChain)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cyclic = SubgroupChain::cyclic(profile)?;
    let sum = SubgroupChain::direct_sum(&profile.sizes())?;
    let n = cyclic.group().order();
    let a = cyclic.relabel(&random_relabel(&mut rng, n))?;
    let b = sum.relabel(&random_relabel(&mut rng, n))?;
    Ok((a, b))
}
