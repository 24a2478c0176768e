//! Desk-scale acceptance run: one PASS/FAIL line per criterion.
//!
//! Every check compares library output against a brute-force oracle written
//! here over plain boolean matrices, never against the library itself.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ballean::cellular::{cellularization, is_cellular};
use ballean::decompose::{check_homogeneity, decompose};
use ballean::groupball::{asymorphism_between, matched_chain_pair, FiniteGroup, SubgroupChain};
use ballean::metrics::{random_metric, random_ultrametric, ultrametrize};
use ballean::product::{build_product_ballean, Factor, PointedFamily};
use ballean::{Asymorphism, BallStructure, BranchingProfile, FiniteMetricSpace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

/// `balls[x][a][y]` is `y ∈ B(x, a)`.
type Table = Vec<Vec<Vec<bool>>>;

fn table(bs: &BallStructure) -> Table {
    (0..bs.len())
        .map(|x| (0..bs.radius_count()).map(|a| (0..bs.len()).map(|y| bs.contains(x, a, y)).collect()).collect())
        .collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- brute-force axiom oracle ----

struct Axioms {
    containment: bool,
    ball_into_dual: Vec<Option<usize>>,
    dual_into_ball: Vec<Option<usize>>,
    composition: Vec<Vec<Option<usize>>>,
}

impl Axioms {
    fn symmetry(&self) -> bool {
        self.ball_into_dual.iter().chain(&self.dual_into_ball).all(Option::is_some)
    }

    fn composition_ok(&self) -> bool {
        self.composition.iter().flatten().all(Option::is_some)
    }
}

fn oracle_axioms(t: &Table) -> Axioms {
    let n = t.len();
    let m = t[0].len();
    let inside = |x: usize, a: usize, y: usize| t[x][a][y];
    let dual = |x: usize, a: usize, y: usize| t[y][a][x];
    // smallest c such that for all x, y: p(x, y) implies y ∈ q_c(x, y)
    let smallest = |p: &dyn Fn(usize, usize) -> bool, q: &dyn Fn(usize, usize, usize) -> bool| {
        (0..m).find(|&c| (0..n).all(|x| (0..n).all(|y| !p(x, y) || q(x, c, y))))
    };
    Axioms {
        containment: (0..n).all(|x| (0..m).all(|a| inside(x, a, x))),
        ball_into_dual: (0..m).map(|a| smallest(&|x, y| inside(x, a, y), &dual)).collect(),
        dual_into_ball: (0..m).map(|a| smallest(&|x, y| dual(x, a, y), &inside)).collect(),
        composition: (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| smallest(&|x, y| (0..n).any(|z| inside(x, a, z) && inside(z, b, y)), &inside))
                    .collect()
            })
            .collect(),
    }
}

// ---- brute-force path components ----

fn components(t: &Table, a: usize) -> Vec<usize> {
    let n = t.len();
    let mut label: Vec<usize> = (0..n).collect();
    // relax to the minimum label over the symmetric step relation until stable
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if (t[x][a][y] || t[y][a][x]) && label[y] < label[x] {
                    label[x] = label[y];
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

fn ball_partition(t: &Table, a: usize) -> BTreeSet<Vec<usize>> {
    t.iter()
        .map(|row| row[a].iter().enumerate().filter(|(_, &b)| b).map(|(y, _)| y).collect())
        .collect()
}

/// Both directions of the asymorphism bounds, checked ball by ball.
fn oracle_asymorphism(f: &Asymorphism, src: &Table, dst: &Table) -> Result<(), String> {
    let n = src.len();
    ensure(f.forward.len() == n && dst.len() == n, || "support sizes differ".into())?;
    let mut inv = vec![usize::MAX; n];
    for (x, &y) in f.forward.iter().enumerate() {
        ensure(y < n && inv[y] == usize::MAX, || format!("not a bijection at {x}"))?;
        inv[y] = x;
    }
    for x in 0..n {
        for (a, &b) in f.forward_bound.iter().enumerate() {
            for y in (0..n).filter(|&y| src[x][a][y]) {
                ensure(dst[f.forward[x]][b][f.forward[y]], || format!("forward escape x={x} radius={a} y={y}"))?;
            }
        }
        for (a, &b) in f.backward_bound.iter().enumerate() {
            for y in (0..n).filter(|&y| dst[x][a][y]) {
                ensure(src[inv[x]][b][inv[y]], || format!("backward escape x={x} radius={a} y={y}"))?;
            }
        }
    }
    Ok(())
}

fn oracle_is_ultrametric(ms: &FiniteMetricSpace) -> bool {
    let n = ms.len();
    (0..n).all(|x| {
        (0..n).all(|y| (0..n).all(|z| *ms.dist(x, z) <= *ms.dist(x, y).max(ms.dist(y, z))))
    })
}

// ---- criteria ----

fn axiom_soundness() -> Outcome {
    for seed in 0..200u64 {
        let n = 1 + (seed as usize % 20);
        let bs = random_metric(seed, n).metric_ballean();
        let r = bs.validate();
        ensure(r.containment_ok && r.symmetry_ok && r.composition_ok, || format!("metric seed {seed} rejected"))?;
    }
    let mut broken = 0;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.gen_range(2..=8);
        let base = random_metric(seed, n).metric_ballean();
        let mut t = table(&base);
        let (x, a, y) = (rng.gen_range(0..n), rng.gen_range(0..base.radius_count()), rng.gen_range(0..n));
        t[x][a][y] = !t[x][a][y];
        let bs = BallStructure::indexed(n, base.radius_count(), |p, r| {
            t[p][r].iter().enumerate().filter(|(_, &b)| b).map(|(q, _)| q).collect::<Vec<_>>()
        })
        .map_err(|e| e.to_string())?;
        let got = bs.validate();
        let want = oracle_axioms(&t);
        let witnesses = |w: &[ballean::ballcore::Witness]| w.iter().map(|w| w.radius()).collect::<Vec<_>>();
        let agree = got.containment_ok == want.containment
            && got.symmetry_ok == want.symmetry()
            && got.composition_ok == want.composition_ok()
            && witnesses(&got.ball_into_dual) == want.ball_into_dual
            && witnesses(&got.dual_into_ball) == want.dual_into_ball
            && got.composition.iter().map(|row| witnesses(row)).collect::<Vec<_>>() == want.composition;
        ensure(agree, || format!("perturbed seed {seed}: validate disagrees with the oracle"))?;
        if !(want.containment && want.symmetry() && want.composition_ok()) {
            broken += 1;
        }
    }
    Ok(format!("200 metric balleans valid; 50 perturbations agree ({broken} broken)"))
}

/// A ballean on `n` points: random reflexive relations plus one radius
/// covering everything, placed at a random index.
fn random_ballean(rng: &mut ChaCha8Rng) -> BallStructure {
    let n = rng.gen_range(1..=15);
    let m = rng.gen_range(1..=4);
    let top = rng.gen_range(0..m);
    let density = rng.gen_range(0.05..0.5);
    let rows: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|x| {
            (0..m)
                .map(|a| (0..n).filter(|&y| a == top || y == x || rng.gen_bool(density)).collect())
                .collect()
        })
        .collect();
    BallStructure::indexed(n, m, |x, a| rows[x][a].clone()).expect("well formed")
}

fn cellularization_laws() -> Outcome {
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bs = random_ballean(&mut rng);
        let cell = cellularization(&bs).map_err(|e| format!("seed {seed}: {e}"))?;
        let again = cellularization(&cell).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(again == cell, || format!("seed {seed}: not idempotent"))?;
        let (t, c) = (table(&bs), table(&cell));
        for a in 0..bs.radius_count() {
            let label = components(&t, a);
            for x in 0..bs.len() {
                for y in 0..bs.len() {
                    ensure(!t[x][a][y] || c[x][a][y], || format!("seed {seed}: not extensive"))?;
                    ensure(c[x][a][y] == (label[x] == label[y]), || format!("seed {seed}: ball is not a component"))?;
                }
            }
            // the cells are pairwise disjoint and cover the support
            let cells = ball_partition(&c, a);
            let covered: usize = cells.iter().map(Vec::len).sum();
            ensure(covered == bs.len(), || format!("seed {seed}: radius {a} cells overlap"))?;
        }
    }
    Ok("200 structures: idempotent, extensive, partition".into())
}

fn ultrametric_cellularity() -> Outcome {
    for seed in 0..100u64 {
        let n = 1 + (seed as usize % 25);
        let ms = random_ultrametric(seed, n, 1 + seed as usize % 4);
        ensure(oracle_is_ultrametric(&ms), || format!("seed {seed}: generator broke the strong triangle"))?;
        ensure(is_cellular(&ms.metric_ballean()), || format!("ultrametric seed {seed} not cellular"))?;
    }
    let mut seed = 0u64;
    for case in 0..100 {
        let ms = loop {
            seed += 1;
            let ms = random_metric(seed, 3 + (seed as usize % 10));
            if !oracle_is_ultrametric(&ms) {
                break ms;
            }
        };
        ensure(!ms.is_ultrametric(), || format!("case {case}: violation missed by is_ultrametric"))?;
        ensure(ultrametrize(&ms.metric_ballean()).is_err(), || format!("case {case}: ultrametrize accepted"))?;
    }
    Ok("100 ultrametrics cellular; 100 violating metrics flagged".into())
}

fn random_profile(rng: &mut ChaCha8Rng, max_support: usize, max_kappa: usize) -> BranchingProfile {
    loop {
        let p = BranchingProfile {
            mu: rng.gen_range(1..=3),
            kappas: (0..rng.gen_range(0..=4)).map(|_| rng.gen_range(2..=max_kappa)).collect(),
        };
        if p.support_size() <= max_support {
            return p;
        }
    }
}

/// The product ballean of `profile` with points shuffled; radius indices keep
/// their nesting order, which the decomposition contract requires.
fn scrambled_hierarchy(rng: &mut ChaCha8Rng, profile: &BranchingProfile) -> BallStructure {
    let product = build_product_ballean(&PointedFamily::from_sizes(&profile.sizes()).unwrap(), usize::MAX).unwrap();
    let n = product.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    BallStructure::from_fn(
        (0..n).map(|x| format!("q{x}")).collect(),
        (0..product.radius_count()).map(|r| format!("level{r}")).collect(),
        |x, a| product.ball(inv[x], a).ones().map(|y| perm[y]).collect::<Vec<_>>(),
    )
    .unwrap()
}

fn decomposition_soundness() -> Outcome {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let profile = random_profile(&mut rng, 324, 4);
        let bs = scrambled_hierarchy(&mut rng, &profile);
        let x0 = rng.gen_range(0..bs.len());
        let d = decompose(&bs, x0).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(d.profile == profile, || format!("seed {seed}: profile {} expected {profile}", d.profile))?;
        let target = d.target();
        let f = &d.asymorphism;
        ensure(f.forward[x0] == 0, || format!("seed {seed}: basepoint not sent to the base tuple"))?;
        let (src, dst) = (table(&bs), table(&target));
        for x in 0..bs.len() {
            for a in 0..bs.radius_count() {
                let image: BTreeSet<usize> = (0..bs.len()).filter(|&y| src[x][a][y]).map(|y| f.forward[y]).collect();
                let ball: BTreeSet<usize> =
                    (0..bs.len()).filter(|&y| dst[f.forward[x]][f.forward_bound[a]][y]).collect();
                ensure(image == ball, || format!("seed {seed}: f(B({x},{a})) differs"))?;
            }
        }
        oracle_asymorphism(f, &src, &dst).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok("100 hierarchies, exact ball images".into())
}

fn product_fixed_point() -> Outcome {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let profile = random_profile(&mut rng, 256, 6);
        let factors: Vec<Factor> = profile
            .sizes()
            .into_iter()
            .map(|size| Factor { size, basepoint: rng.gen_range(0..size) })
            .collect();
        let pf = PointedFamily::new(factors).unwrap();
        let bs = build_product_ballean(&pf, 256).map_err(|e| format!("seed {seed}: {e}"))?;
        let report = check_homogeneity(&bs).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(report.ok && report.profile.as_ref().map(|p| p.sizes()) == Some(pf.sizes()), || {
            format!("seed {seed}: sizes not recovered")
        })?;
        let x0 = pf.encode(&pf.basepoint_tuple()).unwrap();
        let d = decompose(&bs, x0).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(d.family.sizes() == pf.sizes(), || format!("seed {seed}: round trip changed sizes"))?;
    }
    Ok("50 families recovered".into())
}

fn check_pair(g: &SubgroupChain, h: &SubgroupChain, label: &str) -> Result<(), String> {
    let f = asymorphism_between(g, h).map_err(|e| format!("{label}: {e}"))?;
    let (src, dst) = (g.ballean(), h.ballean());
    oracle_asymorphism(&f, &table(&src), &table(&dst)).map_err(|e| format!("{label}: {e}"))?;
    ensure(matches!(f.verify(&src, &dst), Ok(None)), || format!("{label}: verify rejects"))
}

fn group_asymorphisms() -> Outcome {
    let z8 = SubgroupChain::new(FiniteGroup::cyclic(8), vec![vec![0, 4], vec![0, 2, 4, 6], (0..8).collect()])
        .map_err(|e| e.to_string())?;
    let cube = SubgroupChain::direct_sum(&[2, 2, 2]).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = cube.levels().iter().map(Vec::len).collect();
    ensure(sizes == [2, 4, 8], || format!("Z2^3 chain sizes {sizes:?}"))?;
    let expected = BranchingProfile { mu: 2, kappas: vec![2, 2] };
    ensure(z8.profile() == expected && cube.profile() == expected, || "profiles differ from (2,[2,2])".into())?;
    ensure(z8.ballean().len() == 8 && z8.ballean().radius_count() == 3, || "Z8 ballean shape".into())?;
    check_pair(&z8, &cube, "Z8 -> Z2^3")?;
    check_pair(&cube, &z8, "Z2^3 -> Z8")?;
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let profile = random_profile(&mut rng, 64, 4);
        let (g, h) = matched_chain_pair(seed, &profile).map_err(|e| e.to_string())?;
        ensure(g.group().order() <= 64, || format!("seed {seed}: order too large"))?;
        check_pair(&g, &h, &format!("pair {seed}"))?;
    }
    Ok("Z8 ~ Z2^3 and 30 matched pairs verified".into())
}

/// A coarsening chain of partitions ending in one block, one radius per
/// level (levels may repeat), radii shuffled.
fn random_cellular(rng: &mut ChaCha8Rng) -> BallStructure {
    let n = rng.gen_range(1..=20);
    let levels = rng.gen_range(1..=5);
    let mut label: Vec<usize> = (0..n).collect();
    let mut chain = Vec::with_capacity(levels);
    for k in 0..levels {
        if k == levels - 1 {
            label = vec![0; n];
        } else {
            let merge = rng.gen_range(1..=3);
            let roots: BTreeSet<usize> = label.iter().copied().collect();
            let roots: Vec<usize> = roots.into_iter().collect();
            let target: Vec<usize> = roots.iter().map(|_| roots[rng.gen_range(0..roots.len().min(merge))]).collect();
            for l in label.iter_mut() {
                *l = target[roots.iter().position(|r| r == l).unwrap()];
            }
        }
        chain.push(label.clone());
    }
    let mut order: Vec<usize> = (0..levels).collect();
    order.shuffle(rng);
    BallStructure::indexed(n, levels, |x, a| {
        let level = &chain[order[a]];
        (0..n).filter(|&y| level[y] == level[x]).collect::<Vec<_>>()
    })
    .unwrap()
}

/// Distinct ball partitions, finest first.
fn partition_chain(t: &Table) -> Vec<BTreeSet<Vec<usize>>> {
    let mut chain: Vec<BTreeSet<Vec<usize>>> = (0..t[0].len()).map(|a| ball_partition(t, a)).collect();
    chain.sort_by_key(|p| std::cmp::Reverse(p.len()));
    chain.dedup();
    chain
}

fn ultrametrize_round_trip() -> Outcome {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bs = random_cellular(&mut rng);
        let u = ultrametrize(&bs).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(oracle_is_ultrametric(&u.space), || format!("seed {seed}: not an ultrametric"))?;
        let (src, dst) = (table(&bs), table(&u.space.metric_ballean()));
        // the zero radius adds singletons, which the source may lack
        let mut want = partition_chain(&src);
        let singletons: BTreeSet<Vec<usize>> = (0..bs.len()).map(|x| vec![x]).collect();
        if want.first() != Some(&singletons) {
            want.insert(0, singletons);
        }
        ensure(partition_chain(&dst) == want, || format!("seed {seed}: partition chains differ"))?;
        for a in 0..bs.radius_count() {
            ensure(ball_partition(&src, a) == ball_partition(&dst, u.asymorphism.forward_bound[a]), || {
                format!("seed {seed}: radius {a} lands on another level")
            })?;
        }
    }
    Ok("100 chains preserved".into())
}

fn cli_golden() -> Outcome {
    for (name, args, code) in common::CASES {
        common::check_case(name, args, *code)?;
    }
    Ok(format!("{} golden cases", common::CASES.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 axiom soundness", axiom_soundness, 10),
        ("2 cellularization laws", cellularization_laws, 10),
        ("3 ultrametrics are cellular", ultrametric_cellularity, 10),
        ("4 decomposition soundness", decomposition_soundness, 30),
        ("5 product fixed point", product_fixed_point, 10),
        ("6 group asymorphisms", group_asymorphisms, 20),
        ("7 ultrametrize round trip", ultrametrize_round_trip, 10),
        ("8 CLI golden files", cli_golden, 60),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > Duration::from_secs(limit) {
            outcome = Err(format!("took {elapsed:.2?}, limit {limit}s"));
        }
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail}; {elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why}; {elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
