//! End-to-end checks of the headline numbers. Runs as a plain binary so that
//! every check prints its own PASS/FAIL line; exits nonzero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use popcorn_core::analysis::{
    estimate_spectrum, fit_box_dimension, ols, pow2_meshes, spectrum_mesh, spectrum_window, theoretical_spectrum,
    verify_chung_erdos_chain, verify_duffin_schaeffer, verify_local_ds, verify_strip_lemma, ScalingSample,
    SPECTRUM_COST_GUARD,
};
use popcorn_core::covering::{
    brute_force_count, grid_count_full_set, grid_count_points, grid_count_reciprocals, grid_count_window,
    separated_count, Region,
};
use popcorn_core::fraction::big;
use popcorn_core::intervals::build_e_n;
use popcorn_core::numtheory::{square_estimate_ratio, totient_sieve};
use popcorn_core::popcorn::enumerate_graph_points;
use popcorn_core::ReducedFraction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);
type Check = (&'static str, fn() -> Outcome);

fn frac(n: u64, d: u64) -> ReducedFraction {
    ReducedFraction::new(n, d).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn box_dimension() -> Outcome {
    let start = Instant::now();
    let samples: Vec<ScalingSample> = pow2_meshes(8, 16)
        .unwrap()
        .into_iter()
        .map(|mesh| ScalingSample {
            mesh,
            count: grid_count_full_set(mesh).unwrap().count,
        })
        .collect();
    let fit = fit_box_dimension(&samples).unwrap();
    let s = fit.slope();
    let elapsed = start.elapsed();
    let pass = (1.25..=1.41).contains(&s) && elapsed <= Duration::from_secs(300);
    let pairs: Vec<String> = fit.fit.pair_slopes.iter().map(|p| format!("{p:.3}")).collect();
    (
        pass,
        format!(
            "full-set slope over 2^-8..2^-16 = {s:.4} ± {:.4} (want [1.25, 1.41]); pair slopes [{}]; N(2^-16) = {}; {}",
            fit.fit.stderr,
            pairs.join(", "),
            samples.last().unwrap().count,
            secs(elapsed)
        ),
    )
}

fn reciprocal_oracle() -> Outcome {
    let samples: Vec<ScalingSample> = pow2_meshes(8, 16)
        .unwrap()
        .into_iter()
        .map(|mesh| ScalingSample {
            mesh,
            count: grid_count_reciprocals(mesh).unwrap().count,
        })
        .collect();
    let s = fit_box_dimension(&samples).unwrap().slope();
    (
        (0.45..=0.55).contains(&s),
        format!("{{(1/n, 0)}} slope = {s:.4} (want [0.45, 0.55])"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for den in [4u64, 8, 16, 32, 1024] {
        let d = frac(1, den);
        let fast = grid_count_full_set(d).unwrap().count;
        let brute = brute_force_count(d, den, Region::FullSquare).unwrap().count;
        pass &= fast == brute;
        details.push(format!("1/{den}: {fast}/{brute}"));
    }
    let quarter = grid_count_full_set(frac(1, 4)).unwrap().count;
    let pinned = grid_count_full_set(frac(1, 1024)).unwrap().count;
    pass &= quarter == 8 && pinned == 11_888;
    (
        pass,
        format!(
            "fast/oracle {}; N(1/4) = {quarter}, N(2^-10) = {pinned} (pinned 11888)",
            details.join(", ")
        ),
    )
}

fn duffin_schaeffer() -> Outcome {
    let start = Instant::now();
    let r = verify_duffin_schaeffer(300, frac(1, 10_000_000)).unwrap();
    let elapsed = start.elapsed();
    (
        r.holds() && elapsed <= Duration::from_secs(60),
        format!(
            "n <= 300, delta = 1e-7: worst ratio {} at {:?} over {} pairs; {}",
            r.worst,
            r.argmax,
            r.pairs,
            secs(elapsed)
        ),
    )
}

fn local_duffin_schaeffer() -> Outcome {
    let r = verify_local_ds(200, 100, frac(1, 100_000_000)).unwrap();
    (
        r.holds(),
        format!(
            "l <= 200, n = 100, delta = 1e-8: worst ratio {:.6} at {:?} over {} pairs",
            r.worst.to_f64().unwrap(),
            r.argmax,
            r.pairs
        ),
    )
}

fn strip_lemma() -> Outcome {
    let r = verify_strip_lemma(frac(1, 1_000_000), 500).unwrap();
    let detail = match &r.first_violation {
        None => format!("all {} strips within bounds", r.checked),
        Some(w) => format!(
            "{} of {} strips violate; first at k = {}: L(k) - L(k+1) = {} outside [{}, {}]",
            r.violations, r.checked, w.k, w.difference, w.lower, w.upper
        ),
    };
    (r.passed, format!("delta = 1e-6, k <= 500: {detail}"))
}

fn chung_erdos_chain() -> Outcome {
    let mut pass = true;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut details = Vec::new();
    for k in [10u32, 12, 14] {
        let delta = frac(1, 1 << k);
        let c = verify_chung_erdos_chain(delta).unwrap();
        pass &= c.holds();
        let agg = c.aggregate.to_f64().unwrap();
        details.push(format!(
            "2^-{k}: k in [{}, {}], {} violations, sum = {agg:.1}",
            c.k_lo,
            c.k_hi,
            c.violations.len()
        ));
        xs.push(-delta.to_f64().ln());
        ys.push(agg.ln());
    }
    let slope = ols(&xs, &ys).unwrap().slope;
    pass &= slope >= 1.25;
    (
        pass,
        format!("{}; aggregate slope {slope:.4} (want >= 1.25)", details.join("; ")),
    )
}

fn spectrum_trend() -> Outcome {
    let grid: [(ReducedFraction, u64, u64, f64); 5] = [
        (frac(3, 10), 3, 12, 0.25),
        (frac(2, 5), 3, 12, 0.25),
        (frac(1, 2), 3, 12, 0.25),
        (frac(7, 10), 5, 30, 0.3),
        (frac(4, 5), 5, 30, 0.3),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    let mut drops = Vec::new();
    for (theta, lo, hi, tol) in grid {
        let sp = estimate_spectrum(theta, lo, hi, SPECTRUM_COST_GUARD).unwrap();
        let want = theoretical_spectrum(theta).unwrap().to_f64();
        let ok = (sp.fitted_s - want).abs() <= tol;
        if sp.fitted_s < prev {
            drops.push(format!("theta={theta}"));
        }
        pass &= ok && sp.fitted_s >= prev;
        prev = sp.fitted_s;
        details.push(format!(
            "theta={theta}: s={:.3} vs {want:.3}{}",
            sp.fitted_s,
            if ok { "" } else { " (out of band)" }
        ));
    }
    // Window counts for n <= 4 against the reference enumeration.
    let (mut pinned, mut degenerate) = (0, 0);
    for (theta, ..) in grid {
        for n in 1..=4 {
            let region = spectrum_window(n).unwrap();
            let mesh = spectrum_mesh(theta, n).unwrap();
            // coarse theta at n = 1 rounds the mesh up to the window itself
            let Ok(fast) = grid_count_window(region, mesh) else {
                degenerate += 1;
                continue;
            };
            let brute = brute_force_count(mesh, fast.q_max, region).unwrap();
            pass &= fast.count == brute.count;
            pinned += 1;
        }
    }
    let trend = if drops.is_empty() {
        "nondecreasing".to_string()
    } else {
        format!("NOT nondecreasing (drops at {})", drops.join(", "))
    };
    (
        pass,
        format!(
            "{}; fitted s {trend}; {pinned} windows with n <= 4 checked against the oracle ({degenerate} skipped with r >= R)",
            details.join(", ")
        ),
    )
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut notes = Vec::new();

    // floor/ceil square estimate
    let (third, one) = (big(1, 3), big(1, 1));
    let mut square_ok = true;
    for _ in 0..10_000 {
        let den = rng.gen_range(1..1000i64);
        let b = BigRational::new((den + rng.gen_range(1..100_000)).into(), den.into());
        let gap = BigRational::new((3 * den + rng.gen_range(0..100_000)).into(), den.into());
        let a = &b + gap;
        let r = square_estimate_ratio(&a, &b).unwrap();
        square_ok &= r >= third && r <= one;
    }
    notes.push(format!("square estimate {}", if square_ok { "ok" } else { "FAILED" }));

    // doubling chain on random subsets of popcorn points
    let (mut lower_bad, mut upper_bad, mut upper4_bad) = (0, 0, 0);
    for _ in 0..100 {
        let q_max = rng.gen_range(8..60);
        let keep: f64 = rng.gen_range(0.05..1.0);
        let mut pts: Vec<_> = enumerate_graph_points(q_max).filter(|_| rng.gen_bool(keep)).collect();
        if pts.is_empty() {
            pts = enumerate_graph_points(2).collect();
        }
        let r = frac(1, rng.gen_range(4..200));
        let n = grid_count_points(&pts, r).unwrap();
        let m2 = separated_count(&pts, frac(2 * r.num(), r.den())).unwrap();
        let mh = separated_count(&pts, frac(r.num(), 2 * r.den())).unwrap();
        lower_bad += (m2 > n) as u32;
        upper_bad += (n > mh) as u32;
        upper4_bad += (n > 4 * mh) as u32;
    }
    let doubling_ok = lower_bad == 0 && upper_bad == 0;
    notes.push(format!(
        "doubling chain: M_2r <= N_r failed {lower_bad}/100, N_r <= M_r/2 failed {upper_bad}/100 (N_r <= 4 M_r/2 failed {upper4_bad}/100)"
    ));

    // E_n measure in the disjoint regime
    let delta = frac(1, 10_000_000);
    let phi = totient_sieve(10_000).unwrap();
    let measure_ok = (2..=1000u64)
        .all(|n| build_e_n(n, delta).unwrap().measure() == delta.to_big() * big(2 * phi.get(n).unwrap() as i64, 1));
    notes.push(format!("E_n measure {}", if measure_ok { "ok" } else { "FAILED" }));

    // divisor sum of phi
    let divisor_ok =
        (1..=10_000u64).all(|n| (1..=n).filter(|d| n % d == 0).map(|d| phi.get(d).unwrap()).sum::<u64>() == n);
    notes.push(format!("divisor sum {}", if divisor_ok { "ok" } else { "FAILED" }));

    (square_ok && doubling_ok && measure_ok && divisor_ok, notes.join("; "))
}

fn main() {
    let checks: [Check; 9] = [
        ("box dimension of the full set", box_dimension),
        ("box dimension of {(1/n, 0)}", reciprocal_oracle),
        ("fast counts equal the oracle", oracle_equivalence),
        ("Duffin-Schaeffer overlap estimate", duffin_schaeffer),
        ("local Duffin-Schaeffer estimate", local_duffin_schaeffer),
        ("strip counting lemma", strip_lemma),
        ("Chung-Erdos lower-bound chain", chung_erdos_chain),
        ("Assouad spectrum trend", spectrum_trend),
        ("property suites", property_suites),
    ];
    // keep panic messages out of the report lines
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| (false, format!("panicked: {:?}", e.downcast_ref::<String>())));
        failed += !pass as u32;
        println!(
            "criterion {} {} | {name} | {detail} [{}]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            secs(start.elapsed())
        );
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() as u32 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
