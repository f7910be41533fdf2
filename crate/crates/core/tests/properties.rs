use num_traits::Zero;
use popcorn_core::analysis::{fit_spectrum, lower_bound_strip, verify_duffin_schaeffer, verify_local_ds, WindowSample};
use popcorn_core::covering::{grid_count_points, grid_count_strip, separated_count};
use popcorn_core::fraction::big;
use popcorn_core::intervals::{build_e_n, chung_erdos_bound, measure, IntervalUnion};
use popcorn_core::numtheory::{coprime_residues, strip_index_l, totient_sieve};
use popcorn_core::popcorn::{enumerate_graph_points, PopcornPoint};
use popcorn_core::ReducedFraction;
use proptest::prelude::*;

fn frac(n: u64, d: u64) -> ReducedFraction {
    ReducedFraction::new(n, d).unwrap()
}

#[test]
fn residue_counts_match_totients() {
    let phi = totient_sieve(2000).unwrap();
    for l in 2..=2000 {
        assert_eq!(coprime_residues(l).unwrap().len() as u64, phi.get(l).unwrap());
    }
}

#[test]
fn separated_sets_never_exceed_grid_cells_at_double_scale() {
    // A 2r-separated set puts at most one point in each r-cell.
    for q_max in [10u64, 25, 40] {
        let pts: Vec<_> = enumerate_graph_points(q_max).collect();
        for den in [5u64, 17, 50, 120] {
            let r = frac(1, den);
            let n = grid_count_points(&pts, r).unwrap();
            assert!(separated_count(&pts, frac(2, den)).unwrap() <= n);
        }
    }
}

#[test]
fn grid_count_can_exceed_half_scale_packing() {
    // Two points 1/40 apart straddling the edge x = 1/2 of a 1/10-grid:
    // two cells, but no pair is more than 1/20 apart.
    let pts = [
        PopcornPoint::at_level(39, 80).unwrap(),
        PopcornPoint::at_level(41, 80).unwrap(),
    ];
    let r = frac(1, 10);
    assert_eq!(grid_count_points(&pts, r).unwrap(), 2);
    assert_eq!(separated_count(&pts, frac(1, 20)).unwrap(), 1);
    // The factor lost is at most 4: a disc of diameter r meets at most
    // four r-cells.
    assert!(grid_count_points(&pts, r).unwrap() <= 4 * separated_count(&pts, frac(1, 20)).unwrap());
}

#[test]
fn spectrum_fit_ignores_sample_order() {
    let theta = frac(1, 2);
    let mk = |n: u64, count: u64| WindowSample {
        n,
        side: frac(1, n * (n + 1)),
        mesh: frac(1, (n * (n + 1)).pow(2)),
        count,
        q_max: (n * (n + 1)).pow(2),
    };
    let samples = vec![mk(3, 72), mk(4, 172), mk(5, 341), mk(6, 592), mk(7, 964)];
    let a = fit_spectrum(theta, &samples).unwrap();
    let mut shuffled = samples.clone();
    shuffled.reverse();
    shuffled.swap(0, 2);
    let b = fit_spectrum(theta, &shuffled).unwrap();
    assert_eq!(a.fitted_s.to_bits(), b.fitted_s.to_bits());
    assert_eq!(a.samples, b.samples);
}

#[cfg(feature = "parallel")]
#[test]
fn counts_do_not_depend_on_worker_count() {
    use popcorn_core::covering::grid_count_full_set;

    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    for den in [1000u64, 4096] {
        let d = frac(1, den);
        let a = one.install(|| grid_count_full_set(d).unwrap());
        let b = four.install(|| grid_count_full_set(d).unwrap());
        assert_eq!(a, b);
    }
    let a = one.install(|| verify_duffin_schaeffer(60, frac(1, 300)).unwrap());
    let b = four.install(|| verify_duffin_schaeffer(60, frac(1, 300)).unwrap());
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strip_indices_are_monotone(den in 2u64..1_000_000, num in 1u64..50, k in 1u64..500) {
        prop_assume!(num < den);
        let d = frac(num, den);
        if let (Ok(a), Ok(b)) = (strip_index_l(k, d), strip_index_l(k + 1, d)) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn duffin_schaeffer_holds_on_coarse_meshes(n_max in 3u64..40, den in 50u64..5000) {
        prop_assert!(verify_duffin_schaeffer(n_max, frac(1, den)).unwrap().holds());
    }

    #[test]
    fn local_estimate_holds_on_coarse_meshes(l_max in 3u64..30, n in 1u64..30, den in 100u64..20000) {
        prop_assert!(verify_local_ds(l_max, n, frac(1, den)).unwrap().holds());
    }

    #[test]
    fn chung_erdos_is_below_union_measure(levels in prop::collection::btree_set(2u64..60, 1..8), den in 20u64..2000) {
        let d = frac(1, den);
        let events: Vec<IntervalUnion> = levels.iter().map(|&q| build_e_n(q, d).unwrap()).collect();
        let union = events.iter().fold(IntervalUnion::empty(), |acc, e| acc.union(e));
        prop_assert!(chung_erdos_bound(&events).unwrap() <= measure(&union));
    }

    #[test]
    fn strip_lower_bound_is_below_count(den in 16u64..600, k in 1u64..40) {
        let d = frac(1, den);
        prop_assume!(k < den / 2);
        let lb = lower_bound_strip(k, d).unwrap();
        let count = grid_count_strip(k, d).unwrap().count;
        prop_assert!(lb.bound <= big(count as i64, 1));
        prop_assert_eq!(lb.empty, lb.bound.is_zero());
    }
}
