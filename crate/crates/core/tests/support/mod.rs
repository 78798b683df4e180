//! Property suites shared by the property tests and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use echain::covering::{basepoint_component, build_covering_ball, extract_covering_relation, phi_image_check, ScaleModel};
use echain::group::{abelianize, DEFAULT_BUDGET};
use echain::homotopy::EdgeEncoding;
use echain::rips::{rips_graph, spanning_tree, spanning_tree_by};
use echain::space::{
    chain_components, is_uniformly_open, saturate, Entourage, FiniteSpace, IdSet, MetricSource, OpenInterval,
    Point, PointId, Scale,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};

pub const CASES: u32 = 1000;

/// Runs `check` over `CASES` generated values; `Err` carries the minimal failure.
pub fn run<S: Strategy>(strategy: S, check: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<u32, String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    match runner.run(&strategy, check) {
        Ok(()) => Ok(CASES),
        Err(TestError::Fail(why, value)) => Err(format!("{why} for {value:?}")),
        Err(TestError::Abort(why)) => Err(format!("aborted: {why}")),
    }
}

/// Points with coordinates in quarters, and a threshold in quarters.
#[derive(Clone, Debug)]
pub struct MetricCase {
    pub quarters: Vec<Vec<i64>>,
    pub scale_quarters: i64,
}

fn metric_case() -> impl Strategy<Value = MetricCase> {
    (1usize..=2, 1usize..=8)
        .prop_flat_map(|(dim, n)| {
            (
                prop::collection::vec(prop::collection::vec(-8i64..=8, dim), n),
                1i64..=10,
            )
        })
        .prop_map(|(quarters, scale_quarters)| MetricCase {
            quarters,
            scale_quarters,
        })
}

fn quarter_text(q: i64) -> String {
    let sign = if q < 0 { "-" } else { "" };
    let q = q.abs();
    format!("{sign}{}.{:02}", q / 4, (q % 4) * 25)
}

fn metric_space(case: &MetricCase) -> FiniteSpace {
    let points = case
        .quarters
        .iter()
        .enumerate()
        .map(|(id, c)| {
            let text: Vec<String> = c.iter().map(|&q| quarter_text(q)).collect();
            let refs: Vec<&str> = text.iter().map(String::as_str).collect();
            Point::parse(id, &refs).unwrap()
        })
        .collect();
    FiniteSpace::build(points, MetricSource::Euclidean, 0).unwrap()
}

/// Reflexivity and symmetry of threshold and interval relations, with
/// membership checked by integer arithmetic on the quarter grid.
pub fn entourage_axioms() -> Result<u32, String> {
    run(metric_case(), |case| {
        let space = metric_space(&case);
        let scale = Scale::parse(&quarter_text(case.scale_quarters)).unwrap();
        let rel = Entourage::from_scale(&space, &scale).unwrap();
        let n = space.len();
        for x in 0..n {
            prop_assert!(rel.contains(x, x));
            for y in 0..n {
                prop_assert_eq!(rel.contains(x, y), rel.contains(y, x));
                let sq: i64 = case.quarters[x].iter().zip(&case.quarters[y]).map(|(a, b)| (a - b) * (a - b)).sum();
                prop_assert_eq!(rel.contains(x, y), sq < case.scale_quarters * case.scale_quarters);
            }
        }
        if space.dimension() == Some(1) {
            let lo = quarter_text(case.scale_quarters);
            let hi = quarter_text(case.scale_quarters + 3);
            let iv = [OpenInterval::parse(&lo, &hi).unwrap()];
            let diff = Entourage::from_diff_intervals(&space, &iv).unwrap();
            for x in 0..n {
                prop_assert!(diff.contains(x, x));
                for y in 0..n {
                    prop_assert_eq!(diff.contains(x, y), diff.contains(y, x));
                    let d = (case.quarters[x][0] - case.quarters[y][0]).abs();
                    let inside = d > case.scale_quarters && d < case.scale_quarters + 3;
                    prop_assert_eq!(diff.contains(x, y), x == y || inside);
                }
            }
        }
        Ok(())
    })
}

/// A relational space with a random relation and a random subset.
#[derive(Clone, Debug)]
pub struct SetCase {
    pub n: usize,
    pub pairs: Vec<(PointId, PointId)>,
    pub finer: Vec<bool>,
    pub set: Vec<bool>,
    pub other: Vec<bool>,
}

fn set_case() -> impl Strategy<Value = SetCase> {
    (1usize..=10)
        .prop_flat_map(|n| {
            let all: Vec<(PointId, PointId)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let m = all.len();
            (
                Just(n),
                prop::sample::subsequence(all, 0..=m),
                prop::collection::vec(any::<bool>(), m),
                prop::collection::vec(prop::bool::weighted(0.3), n),
                prop::collection::vec(prop::bool::weighted(0.3), n),
            )
        })
        .prop_map(|(n, pairs, finer, set, other)| SetCase {
            n,
            pairs,
            finer,
            set,
            other,
        })
}

fn relational(n: usize, base: PointId) -> FiniteSpace {
    FiniteSpace::build((0..n).map(Point::bare).collect(), MetricSource::Relational, base).unwrap()
}

fn ids(mask: &[bool]) -> IdSet {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

fn relations(case: &SetCase) -> (FiniteSpace, Entourage, Entourage) {
    let space = relational(case.n, 0);
    let w = Entourage::from_pairs(&space, case.pairs.iter().copied(), "w").unwrap();
    let finer = case.pairs.iter().zip(&case.finer).filter(|(_, &k)| k).map(|(p, _)| *p);
    let v = Entourage::from_pairs(&space, finer, "v").unwrap();
    (space, w, v)
}

/// Complements of uniformly open sets are uniformly open, and saturations are.
pub fn open_complements() -> Result<u32, String> {
    run(set_case(), |case| {
        let (space, w, _) = relations(&case);
        let s = ids(&case.set);
        let all: IdSet = (0..space.len()).collect();
        let complement: IdSet = all.difference(&s).copied().collect();
        prop_assert_eq!(is_uniformly_open(&s, &w), is_uniformly_open(&complement, &w));
        if !s.is_empty() {
            let sat = saturate(&s, &w).unwrap();
            prop_assert!(is_uniformly_open(&sat, &w));
            let rest: IdSet = all.difference(&sat).copied().collect();
            prop_assert!(is_uniformly_open(&rest, &w));
        }
        Ok(())
    })
}

/// Saturation is extensive, idempotent and monotone in both arguments.
pub fn saturation_laws() -> Result<u32, String> {
    run(set_case(), |case| {
        let (_, w, v) = relations(&case);
        let s = ids(&case.set);
        if s.is_empty() {
            return Ok(());
        }
        let t: IdSet = s.union(&ids(&case.other)).copied().collect();
        let sat = saturate(&s, &w).unwrap();
        prop_assert!(s.is_subset(&sat));
        prop_assert_eq!(&saturate(&sat, &w).unwrap(), &sat);
        prop_assert!(sat.is_subset(&saturate(&t, &w).unwrap()));
        prop_assert!(saturate(&s, &v).unwrap().is_subset(&sat));
        prop_assert_eq!(is_uniformly_open(&s, &w), sat == s);
        Ok(())
    })
}

/// A random relation `E` on at most six points, a sub-relation `F` and a basepoint.
#[derive(Clone, Debug)]
pub struct NestedCase {
    pub n: usize,
    pub pairs: Vec<(PointId, PointId)>,
    pub keep: Vec<bool>,
    pub base: PointId,
    pub order: Vec<usize>,
}

fn nested_case() -> impl Strategy<Value = NestedCase> {
    (1usize..=6)
        .prop_flat_map(|n| {
            let all: Vec<(PointId, PointId)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let m = all.len();
            (
                Just(n),
                Just(all),
                prop::collection::vec(prop::bool::weighted(0.5), m),
                prop::collection::vec(prop::bool::weighted(0.7), m),
                0..n,
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, all, present, keep, base, order)| NestedCase {
            n,
            pairs: all.into_iter().zip(present).filter(|(_, b)| *b).map(|(p, _)| p).collect(),
            keep,
            base,
            order,
        })
}

pub struct Nested {
    pub space: FiniteSpace,
    pub e: Entourage,
    pub f: Entourage,
}

fn nested(case: &NestedCase) -> Nested {
    let space = relational(case.n, case.base);
    let e = Entourage::from_pairs(&space, case.pairs.iter().copied(), "e").unwrap();
    let kept = case.pairs.iter().zip(&case.keep).filter(|(_, &k)| k).map(|(p, _)| *p);
    let f = Entourage::from_pairs(&space, kept, "f").unwrap();
    Nested { space, e, f }
}

/// Radius reaching every point of the basepoint's `F`-component, plus one,
/// and at least the chain length replayed below.
fn radius_for(n: &Nested) -> usize {
    let g = rips_graph(&n.space, &n.f).unwrap();
    (g.eccentricity(n.space.basepoint()) + 1).max(LIFT_LEN)
}

const LIFT_LEN: usize = 3;

struct Extracted {
    ball: echain::covering::CoveringBall,
    a: BTreeSet<usize>,
    relation: Entourage,
}

fn extract(n: &Nested) -> Result<Extracted, TestCaseError> {
    let model = Arc::new(ScaleModel::build(&n.space, &n.e, DEFAULT_BUDGET).unwrap());
    let ball = build_covering_ball(model, radius_for(n)).unwrap();
    let a = basepoint_component(&ball, &n.f).unwrap();
    let ex = extract_covering_relation(&ball, &a, &n.e, &n.f).map_err(|e| TestCaseError::fail(e.to_string()))?;
    Ok(Extracted {
        ball,
        a,
        relation: ex.relation,
    })
}

/// Extracted relations are reflexive, symmetric and contained in `E`.
pub fn extraction_refines() -> Result<u32, String> {
    run(nested_case(), |case| {
        let n = nested(&case);
        let ex = extract(&n)?;
        prop_assert!(ex.relation.is_refinement_of(&n.e));
        for x in 0..n.space.len() {
            prop_assert!(ex.relation.contains(x, x));
            for &y in ex.relation.neighbors(x) {
                prop_assert!(ex.relation.contains(y, x));
                prop_assert!(n.e.contains(x, y));
            }
        }
        Ok(())
    })
}

/// Every chain of the extracted relation from the basepoint has its class in
/// `A`. The ball only holds a truncation of `A`, so membership is decided by
/// the image check of `F`-chains, which sees the whole covering.
pub fn chains_lift_into_component() -> Result<u32, String> {
    run(nested_case(), |case| {
        let n = nested(&case);
        let ex = extract(&n)?;
        let image = phi_image_check(&ex.ball, &n.f).unwrap();
        for &v in &ex.a {
            prop_assert!(image.vertices[v].verdict.is_proven(), "vertex {} of A is not an F-class", v);
        }
        let mut frontier = vec![vec![n.space.basepoint()]];
        for _ in 0..=LIFT_LEN {
            let mut next = Vec::new();
            for chain in &frontier {
                match ex.ball.vertex_of_chain(chain).unwrap() {
                    Some(v) => {
                        let verdict = &image.vertices[v].verdict;
                        prop_assert!(!verdict.is_refuted(), "chain {:?} lifts outside A", chain);
                    }
                    None => prop_assert!(ex.ball.unknown_merges() > 0, "chain {:?} missing from the ball", chain),
                }
                let last = *chain.last().unwrap();
                for y in std::iter::once(last).chain(ex.relation.neighbors(last).iter().copied()) {
                    let mut c = chain.clone();
                    c.push(y);
                    next.push(c);
                }
            }
            frontier = next;
        }
        Ok(())
    })
}

/// Endpoints of `A` are exactly the basepoint's `F`-chain component, and
/// that component lies inside the basepoint's `E`-chain component.
pub fn endpoints_cover_component() -> Result<u32, String> {
    run(nested_case(), |case| {
        let n = nested(&case);
        let ex = extract(&n)?;
        let ends: IdSet = ex.a.iter().map(|&v| ex.ball.vertex(v).endpoint).collect();
        let base = n.space.basepoint();
        let f_block: IdSet = chain_components(&n.space, &n.f).unwrap().block_containing(base).iter().copied().collect();
        let e_block: IdSet = chain_components(&n.space, &n.e).unwrap().block_containing(base).iter().copied().collect();
        prop_assert_eq!(&ends, &f_block);
        prop_assert!(ends.is_subset(&e_block));
        if n.f == n.e {
            prop_assert_eq!(&ends, &e_block);
        }
        Ok(())
    })
}

/// Abelian invariants do not depend on the order used to build the spanning tree.
pub fn invariants_ignore_tree_order() -> Result<u32, String> {
    run(nested_case(), |case| {
        let n = nested(&case);
        let graph = rips_graph(&n.space, &n.e).unwrap();
        let base = n.space.basepoint();
        let plain = EdgeEncoding::new(&graph, &spanning_tree(&graph, base).unwrap()).presentation(&graph);
        let order = case.order.clone();
        let tree = spanning_tree_by(&graph, base, |x| order[x]).unwrap();
        let shuffled = EdgeEncoding::new(&graph, &tree).presentation(&graph);
        prop_assert_eq!(abelianize(&plain), abelianize(&shuffled));
        Ok(())
    })
}

pub const SUITES: [(&str, fn() -> Result<u32, String>); 7] = [
    ("entourage reflexivity and symmetry", entourage_axioms),
    ("uniformly open complements", open_complements),
    ("saturation laws", saturation_laws),
    ("extracted relation refines E", extraction_refines),
    ("extracted chains lift into A", chains_lift_into_component),
    ("endpoints of A cover the component", endpoints_cover_component),
    ("invariants independent of tree order", invariants_ignore_tree_order),
];
