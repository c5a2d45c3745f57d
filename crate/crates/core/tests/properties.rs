use std::sync::Arc;

use proptest::prelude::*;
use quiver_signal::decomposition::{barcode_interval, generic_decompose, DEFAULT_MAX_ROUNDS};
use quiver_signal::io;
use quiver_signal::linalg::{max_abs, Matrix, RankTolerance};
use quiver_signal::morphisms::{end_dim, hom_dim, is_isomorphic, DEFAULT_TRIALS};
use quiver_signal::path_algebra::FilterElement;
use quiver_signal::quiver::{example_quiver, Arrow, Quiver};
use quiver_signal::representation::Representation;
use quiver_signal::sample::{random_barcode, random_basis_change, random_filter, random_representation, random_signal, rng};
use rand::Rng;

const TOL: RankTolerance = RankTolerance::Default;

fn example_rep(seed: u64) -> Representation {
    let mut g = rng(seed);
    let dims: Vec<usize> = (0..5).map(|_| g.random_range(0..=3)).collect();
    random_representation(&example_quiver(), &dims, &mut g)
}

fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    let scale = 1.0 + max_abs(a).max(max_abs(b));
    max_abs(&(a - b)) <= tol * scale
}

fn planted_chain(seed: u64) -> (Representation, Representation) {
    let mut g = rng(seed);
    let n = g.random_range(1..=5);
    let mut bars = random_barcode(n, 3, &mut g);
    if bars.is_empty() {
        bars.insert((1, n), 1);
    }
    let base = Representation::interval_sum(n, &bars).unwrap();
    let moved = base.change_basis(&random_basis_change(&base, &mut g)).unwrap();
    (base, moved)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn filters_act_linearly_on_signals(seed: u64, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let rep = example_rep(seed);
        let mut g = rng(seed ^ 1);
        let c = random_filter(rep.quiver(), 3, 5, &mut g);
        let (x, y) = (random_signal(&rep, &mut g), random_signal(&rep, &mut g));
        let lhs = rep.apply_filter(&c, &x.combine(alpha, &y, beta).unwrap()).unwrap();
        let rhs = rep.apply_filter(&c, &x).unwrap().combine(alpha, &rep.apply_filter(&c, &y).unwrap(), beta).unwrap();
        let err = (lhs.flatten() - rhs.flatten()).amax();
        prop_assert!(err <= 1e-10 * (1.0 + lhs.flatten().amax()));
    }

    #[test]
    fn rho_is_an_algebra_homomorphism(seed: u64) {
        let rep = example_rep(seed);
        let q = rep.quiver();
        let mut g = rng(seed ^ 2);
        let a = random_filter(q, 2, 4, &mut g);
        let b = random_filter(q, 2, 4, &mut g);
        let ba = FilterElement::multiply(&b, &a).unwrap();
        let (ra, rb) = (rep.filter_matrix(&a).unwrap(), rep.filter_matrix(&b).unwrap());
        prop_assert!(close(&rep.filter_matrix(&ba).unwrap(), &(&rb * &ra), 1e-10));
        let sum = FilterElement::add(&b, &a, 2.0, -3.0).unwrap();
        prop_assert!(close(&rep.filter_matrix(&sum).unwrap(), &(&rb * 2.0 - &ra * 3.0), 1e-12));
        let unit = rep.filter_matrix(&FilterElement::unit(q)).unwrap();
        prop_assert_eq!(unit, Matrix::identity(rep.total_dim(), rep.total_dim()));
    }

    #[test]
    fn shift_operators_occupy_one_block(seed: u64, pick in 0usize..26) {
        let rep = example_rep(seed);
        let q = rep.quiver();
        let p = &q.enumerate_paths(2)[pick];
        let s = rep.shift_operator(p).unwrap();
        let support = s.support();
        prop_assert_eq!(support, (p.head(), p.tail()));
        prop_assert!(s.nonzero_blocks().iter().all(|&b| b == support));
        prop_assert!(close(&s.block(support.0, support.1), &rep.eval_path(p).unwrap(), 0.0));
    }

    #[test]
    fn barcode_is_basis_invariant(seed: u64) {
        let (base, moved) = planted_chain(seed);
        prop_assert_eq!(barcode_interval(&base, TOL).unwrap(), barcode_interval(&moved, TOL).unwrap());
    }

    #[test]
    fn hom_dimension_is_basis_invariant(seed: u64) {
        let (a, moved_a) = planted_chain(seed);
        let mut g = rng(seed ^ 3);
        let other = Representation::interval_sum(
            a.quiver().node_count(),
            &random_barcode(a.quiver().node_count(), 2, &mut g),
        )
        .unwrap();
        let moved_other = other.change_basis(&random_basis_change(&other, &mut g)).unwrap();
        prop_assert_eq!(end_dim(&a, TOL), end_dim(&moved_a, TOL));
        prop_assert_eq!(hom_dim(&a, &other, TOL).unwrap(), hom_dim(&moved_a, &moved_other, TOL).unwrap());
        prop_assert_eq!(hom_dim(&other, &a, TOL).unwrap(), hom_dim(&moved_other, &moved_a, TOL).unwrap());
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric(seed: u64) {
        let (base, moved) = planted_chain(seed);
        prop_assert!(is_isomorphic(&base, &base, DEFAULT_TRIALS, seed, TOL).unwrap().isomorphic);
        let forward = is_isomorphic(&base, &moved, DEFAULT_TRIALS, seed, TOL).unwrap();
        let backward = is_isomorphic(&moved, &base, DEFAULT_TRIALS, seed, TOL).unwrap();
        prop_assert!(forward.isomorphic && backward.isomorphic);
        let w = forward.witness.unwrap();
        prop_assert!(w.commutes());
        prop_assert!(w.inverse().unwrap().commutes());
    }

    #[test]
    fn generic_summands_reassemble(seed: u64) {
        let (_, moved) = planted_chain(seed);
        let list = generic_decompose(&moved, seed, DEFAULT_MAX_ROUNDS, TOL);
        let basis = list.assembled_basis(&moved);
        let sum = list.direct_sum(&moved).unwrap();
        // moving the direct sum through the assembled basis gives back the input
        let rebuilt = sum.change_basis(&basis).unwrap();
        for (x, y) in rebuilt.maps().iter().zip(moved.maps()) {
            prop_assert!(close(x, y, 1e-8));
        }
        for s in &list.summands {
            prop_assert!(s.unsplit || end_dim(&s.rep, TOL) == 1);
        }
    }

    #[test]
    fn canonical_json_round_trips(seed: u64) {
        let rep = example_rep(seed);
        let q = Arc::new(example_quiver());
        let mut g = rng(seed ^ 4);
        let x = random_signal(&rep, &mut g);
        let c = random_filter(&q, 3, 5, &mut g);

        let text = io::to_canonical(&io::representation_to_file(&rep)).unwrap();
        let back = io::representation_from_file(q.clone(), &io::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &rep);
        prop_assert_eq!(io::to_canonical(&io::representation_to_file(&back)).unwrap(), text);

        let text = io::to_canonical(&io::signal_to_file(&rep, &x)).unwrap();
        let xb = io::signal_from_file(&rep, &io::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(xb, x);

        let text = io::to_canonical(&io::filter_to_file(&q, &c)).unwrap();
        let cb = io::filter_from_file(&q, &io::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(cb, c);
    }
}

#[test]
fn interval_hom_rule_on_a3() {
    let mut intervals = Vec::new();
    for a in 1..=3 {
        for b in a..=3 {
            intervals.push((a, b));
        }
    }
    for &(a, b) in &intervals {
        for &(c, d) in &intervals {
            let src = Representation::interval(3, a, b).unwrap();
            let dst = Representation::interval(3, c, d).unwrap();
            let want = usize::from(c <= a && a <= d && d <= b);
            assert_eq!(hom_dim(&src, &dst, TOL).unwrap(), want, "Hom(I[{a},{b}], I[{c},{d}])");
        }
    }
}

#[test]
fn barcode_needs_an_equioriented_chain() {
    let rep = example_rep(1);
    assert!(barcode_interval(&rep, TOL).is_err());
    // 1 → 2 ← 3 is a chain, but not an equioriented one
    let zigzag = Quiver::new(["1", "2", "3"], vec![Arrow::new("a", "1", "2"), Arrow::new("b", "3", "2")]).unwrap();
    let zero = Representation::zero_maps(zigzag, vec![1, 1, 1]).unwrap();
    assert!(barcode_interval(&zero, TOL).is_err());
    // a reversed arrow is still a chain once the nodes are read in path order
    let reversed = Quiver::new(["1", "2"], vec![Arrow::new("b", "2", "1")]).unwrap();
    let rep = Representation::new(reversed, vec![1, 2], vec![Matrix::from_row_slice(1, 2, &[1.0, 0.0])]).unwrap();
    let bc = barcode_interval(&rep, TOL).unwrap();
    assert_eq!(bc.multiplicities.into_iter().collect::<Vec<_>>(), vec![((1, 1), 1), ((1, 2), 1)]);
}
