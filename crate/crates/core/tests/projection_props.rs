mod common;

use common::*;
use depcore::dependence::DEFAULT_TOL;
use depcore::projection::{ipf, kl_divergence, pythagoras_check, IpfOptions};
use depcore::{frechet_feasible, same_dependence, MarginPair, ProbTable, SupportPattern, Verdict};
use ndarray::{array, Array2};
use proptest::prelude::*;
use rand::Rng;

fn assert_fit(start: &ProbTable, target: &MarginPair) {
    let rep = ipf(start, target, IpfOptions::default()).unwrap();
    assert!(rep.converged, "{start:?}");
    assert!(!rep.support_shrunk);
    assert!(rep.result.margins().l1_distance(target) <= 1e-12);
    assert!(same_dependence(start, &rep.result, DEFAULT_TOL).unwrap());
    assert!(rep.factorization_residual(start) <= 1e-9);
}

#[test]
fn ipf_preserves_dependence_on_random_feasible_pairs() {
    let mut g = rng(31);
    for _ in 0..200 {
        let (r, c) = (g.random_range(2..=6), g.random_range(2..=6));
        let density = g.random_range(0.5..1.0);
        let s = random_pattern(&mut g, r, c, density);
        let start = random_table_on(&mut g, &s);
        // Margins of another table on the same support are reachable.
        let target = random_table_on(&mut g, &s).margins();
        assert_eq!(frechet_feasible(&s, &target).unwrap().verdict, Verdict::Feasible);
        assert_fit(&start, &target);
    }
}

#[test]
fn ipf_converges_geometrically_on_full_support() {
    let mut g = rng(32);
    for _ in 0..50 {
        let start = random_full_table(&mut g, 4, 5);
        let target = random_full_table(&mut g, 4, 5).margins();
        let rep = ipf(&start, &target, IpfOptions::default()).unwrap();
        let ratio = rep.contraction.expect("at least two sweeps");
        assert!(ratio < 1.0, "contraction {ratio}");
        assert!(rep.iterations < 1000);
    }
}

#[test]
fn matching_margins_need_no_sweeps() {
    let mut g = rng(33);
    let t = random_full_table(&mut g, 3, 3);
    let rep = ipf(&t, &t.margins(), IpfOptions::default()).unwrap();
    assert!(rep.iterations <= 1);
    assert!(rep.converged);
}

#[test]
fn infeasible_targets_are_detected_both_ways() {
    let diag = ProbTable::new(array![[0.5, 0.0], [0.0, 0.5]]).unwrap();
    let m = MarginPair::new(vec![0.3, 0.7], vec![0.6, 0.4]).unwrap();
    assert_eq!(frechet_feasible(diag.support(), &m).unwrap().verdict, Verdict::Infeasible);
    let rep = ipf(&diag, &m, IpfOptions { tol: 1e-12, max_iter: 200 }).unwrap();
    assert!(!rep.converged);

    // Tight class: the off-diagonal cell is forced to zero.
    let tri = ProbTable::new(array![[0.4, 0.2], [0.0, 0.4]]).unwrap();
    let m = MarginPair::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
    assert_eq!(
        frechet_feasible(tri.support(), &m).unwrap().verdict,
        Verdict::FeasibleOnSmallerSupport
    );
    let rep = ipf(&tri, &m, IpfOptions { tol: 1e-12, max_iter: 100_000 }).unwrap();
    assert!(rep.result.get(0, 1) < 1e-4);
    // The mass leaks out of the lost cell only sublinearly.
    assert!(rep.contraction.unwrap() > 0.99, "{:?}", rep.contraction);
}

#[test]
fn pythagoras_identity_on_shared_supports() {
    let mut g = rng(34);
    for _ in 0..100 {
        let s = random_pattern(&mut g, 3, 3, 0.85);
        let source = random_table_on(&mut g, &s);
        let other = random_table_on(&mut g, &s);
        let terms = pythagoras_check(&source, &other, IpfOptions::default()).unwrap();
        assert!(terms.defect() <= 1e-8, "{terms:?}");
    }
}

fn table() -> impl Strategy<Value = ProbTable> {
    (2usize..=4, 2usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(0.01f64..10.0, r * c)
            .prop_map(move |w| ProbTable::from_weights(Array2::from_shape_vec((r, c), w).unwrap()).unwrap())
    })
}

proptest! {
    #[test]
    fn kl_is_nonnegative_and_vanishes_only_on_equality(pair in table().prop_flat_map(|t| {
        let (r, c) = t.dim();
        (Just(t), prop::collection::vec(0.01f64..10.0, r * c))
    })) {
        let (p, w) = pair;
        let q = ProbTable::from_weights(Array2::from_shape_vec(p.dim(), w).unwrap()).unwrap();
        let d = kl_divergence(&p, &q).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        if max_abs_diff(p.probs(), q.probs()) > 1e-6 {
            prop_assert!(d > 0.0);
        }
    }

    #[test]
    fn projection_is_closest_in_its_class(t in table(), seed in 0u64..1000) {
        // Any other member of the class, here a rescaling of a random table
        // fitted to the same margins, is at least as far from the source.
        let mut g = rng(seed);
        let target = {
            let (r, c) = t.dim();
            random_full_table(&mut g, r, c).margins()
        };
        let proj = ipf(&t, &target, IpfOptions::default()).unwrap().result;
        let other = ipf(&random_full_table(&mut g, t.nrows(), t.ncols()), &target, IpfOptions::default()).unwrap().result;
        prop_assert!(kl_divergence(&proj, &t).unwrap() <= kl_divergence(&other, &t).unwrap() + 1e-10);
    }
}

#[test]
fn support_pattern_of_result_matches_start() {
    let s = SupportPattern::parse("xx./.xx/x.x").unwrap();
    let mut g = rng(35);
    let start = random_table_on(&mut g, &s);
    let target = random_table_on(&mut g, &s).margins();
    let rep = ipf(&start, &target, IpfOptions::default()).unwrap();
    assert_eq!(rep.result.support(), &s);
}
