//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails (including its runtime budget).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bdlab_core::baez_duarte::{
    build_gram, compact_open_check, distance, distance_sweep, moebius_residual_with,
};
use bdlab_core::dirichlet::{dirichlet_energy_bergman_crosscheck, golden_pair_check};
use bdlab_core::hardy::{
    apply_operator, hk_coeffs, hk_coeffs_from_tables, hkc_partial_norms, verify_identity, Identity,
};
use bdlab_core::pdcp::{dilate, inclusion_check, map_u, range_exclusion_witness, wintner_fs};
use bdlab_core::{CoeffSeq, Family, NtTables, Operator, RidgePolicy, Space, Target};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn coefficient_formula() -> Outcome {
    let n = 10_000;
    let tables = NtTables::sieve(n).unwrap();
    let mut worst = 0.0f64;
    for k in 2..=50u64 {
        let a = hk_coeffs(k, n + 1).unwrap();
        let b = hk_coeffs_from_tables(&tables, k, n + 1).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            worst = worst.max((x - y).abs());
        }
    }
    outcome(worst <= 1e-12, format!("max |recurrence - harmonic formula| = {worst:.2e} (tol 1e-12)"))
}

fn isometries() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (mut t_rel, mut psi_rel) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let deg = rng.gen_range(0..=64);
        let g = CoeffSeq::new(random_coeffs(&mut rng, deg + 1), Space::H2).unwrap();
        let tg = apply_operator(Operator::TMap, &g).unwrap().seq;
        t_rel = t_rel.max((tg.norm() - g.norm()).abs() / g.norm());
        let len = rng.gen_range(1..=4096);
        let x = CoeffSeq::new(random_coeffs(&mut rng, len), Space::L2Omega).unwrap();
        let px = apply_operator(Operator::Psi, &x).unwrap().seq;
        psi_rel = psi_rel.max((px.norm() - x.norm()).abs() / x.norm());
    }
    let mut phi_ok = true;
    let mut phi_worst = 0.0f64;
    for k in 2..=12 {
        let r = verify_identity(Identity::PhiMapsRkToHk { k }, 1 << 16, 0).unwrap();
        phi_ok &= r.sup_discrepancy <= r.certificate;
        phi_worst = phi_worst.max(r.sup_discrepancy / r.certificate);
    }
    outcome(
        t_rel <= 1e-12 && psi_rel <= 1e-12 && phi_ok,
        format!(
            "T rel {t_rel:.1e}, Psi rel {psi_rel:.1e} (tol 1e-12); Phi r_k vs h_k at {:.2e} of certificate",
            phi_worst
        ),
    )
}

fn semigroups() -> Outcome {
    let grid = [2u64, 3, 4, 6];
    let n = 1 << 14;
    let mut ids = Vec::new();
    for &m in &grid {
        for &k in &grid {
            ids.push(Identity::SemigroupW { m, n: k });
            ids.push(Identity::SemigroupT { m, n: k });
            ids.push(Identity::WnOnHk { n: m, k });
        }
        ids.push(Identity::Quasiconjugacy { n: m });
    }
    let mut worst = 0.0f64;
    let mut fails = 0;
    for (i, id) in ids.iter().enumerate() {
        let r = verify_identity(*id, n, i as u64).unwrap();
        worst = worst.max(r.sup_discrepancy);
        fails += usize::from(!r.pass);
    }
    outcome(
        fails == 0,
        format!("{} identities, {fails} failing, max sup discrepancy {worst:.1e} (tol 1e-10)", ids.len()),
    )
}

fn moebius_convergence() -> Outcome {
    let n_trunc = 1 << 20;
    let tables = NtTables::sieve(n_trunc).unwrap();
    let reports: Vec<_> = [10, 100, 1000, 10_000]
        .iter()
        .map(|&n| moebius_residual_with(&tables, n, n_trunc).unwrap())
        .collect();
    let decreasing = reports.windows(2).all(|w| w[1].residual_norm < w[0].residual_norm);
    let bounded = reports.iter().all(|r| r.bound_holds);
    let norms: Vec<String> = reports.iter().map(|r| format!("{:.4}", r.residual_norm)).collect();
    outcome(
        decreasing && bounded,
        format!("residual_norm at n = 10..10^4: [{}], bound holds: {bounded}", norms.join(", ")),
    )
}

fn certificate_dominance() -> Outcome {
    let n_trunc = 1 << 20;
    let tables = NtTables::sieve(n_trunc).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [10usize, 100] {
        let g = build_gram(Family::ImsHk, n, n_trunc, Target::OneMinusZ).unwrap();
        let d = distance(&g, RidgePolicy::default()).unwrap();
        let r = moebius_residual_with(&tables, n, n_trunc).unwrap();
        ok &= d.distance <= r.residual_norm + 1e-9;
        parts.push(format!("n={n}: {:.4} <= {:.4}", d.distance, r.residual_norm));
    }
    outcome(ok, parts.join("; "))
}

fn compact_open() -> Outcome {
    let points =
        [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)];
    let n_trunc = 1 << 20;
    let a = compact_open_check(&points, 100, n_trunc).unwrap();
    let b = compact_open_check(&points, 1000, n_trunc).unwrap();
    let decreasing = a.iter().zip(&b).all(|(x, y)| y.error < x.error);
    let bounded = a.iter().chain(&b).all(|r| r.within_bound);
    let errs: Vec<String> =
        a.iter().zip(&b).map(|(x, y)| format!("{:.3e}->{:.3e}", x.error, y.error)).collect();
    outcome(decreasing && bounded, format!("|F_n(z) - 1| n=100->1000: {}", errs.join(", ")))
}

fn dirichlet_crosscheck() -> Outcome {
    let mut worst = 0.0f64;
    for k in 2..=10 {
        let c = dirichlet_energy_bergman_crosscheck(k, 1 << 16).unwrap();
        worst = worst.max(c.relative_difference);
    }
    let g = golden_pair_check(10_000).unwrap();
    outcome(
        worst <= 1e-6 && g.pass,
        format!(
            "energy vs Bergman norm max rel {worst:.1e} (tol 1e-6); golden pair max dev {:.1e} (tol 1e-12)",
            g.max_deviation
        ),
    )
}

fn dichotomy() -> Outcome {
    let ns = [1usize << 14, 1 << 15, 1 << 16];
    let threshold = 0.5 * 2f64.ln() * ((ns[2] as f64).sqrt() - (ns[0] as f64).sqrt()) * 0.9;
    let mut ok = true;
    let mut max_step = 0.0f64;
    let mut min_growth = f64::INFINITY;
    for k in [2u64, 3, 5, 10] {
        let same = hkc_partial_norms(k, k as f64, &ns).unwrap();
        let steps = [(same[1] - same[0]).abs(), (same[2] - same[1]).abs()];
        max_step = max_step.max(steps[0]).max(steps[1]);
        let off = hkc_partial_norms(k, 2.0 * k as f64, &ns).unwrap();
        min_growth = min_growth.min(off[2] - off[0]);
    }
    ok &= max_step < 1e-2 && min_growth > threshold;
    outcome(
        ok,
        format!(
            "c = k max step {max_step:.1e} (< 1e-2); c = 2k min growth {min_growth:.2} (> {threshold:.2})"
        ),
    )
}

fn rh_proxy_monotone() -> Outcome {
    let ks: Vec<usize> = (1..=8).map(|e| 1usize << e).collect();
    let r = distance_sweep(Family::Hk, &ks, 1 << 16, Target::One, RidgePolicy::default()).unwrap();
    let monotone = r.windows(2).all(|w| w[1].distance <= w[0].distance + 1e-9);
    let positive = r.iter().all(|x| x.distance > 0.0);
    let reported = r.iter().all(|x| x.regularization > 0.0 && x.condition_estimate.is_finite());
    let last = r.last().unwrap();
    outcome(
        monotone && positive && reported,
        format!(
            "d(2) = {:.5} .. d(256) = {:.5}, ridge {:.1e}, condition {:.1e}",
            r[0].distance, last.distance, last.regularization, last.condition_estimate
        ),
    )
}

fn pdcp_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut unitary = true;
    let mut intertwine = true;
    for _ in 0..100 {
        let len = rng.gen_range(2..=512);
        let mut c = random_coeffs(&mut rng, len);
        c[0] = 0.0;
        let f = CoeffSeq::new(c, Space::H2).unwrap();
        let u = map_u(&f).unwrap();
        unitary &= (u.norm() - f.norm()).abs() <= 1e-15 * f.norm().max(1.0);
        let n = rng.gen_range(1..=8u64);
        let lhs = map_u(&apply_operator(Operator::Tn(n), &f).unwrap().seq).unwrap();
        let rhs = dilate(n as usize, &u).unwrap();
        intertwine &= lhs.coeffs() == rhs.coeffs();
    }
    let inclusion = inclusion_check(32, 1 << 12).unwrap();
    let basel = (wintner_fs(1.0, 1_000_000).unwrap().norm().powi(2)
        - std::f64::consts::PI.powi(2) / 6.0)
        .abs();
    let witness = range_exclusion_witness(1 << 20, 0).unwrap();
    outcome(
        unitary && intertwine && inclusion <= 1e-12 && basel <= 1e-6 && witness.pass,
        format!(
            "unitary {unitary}, intertwining {intertwine}, V h_k deviation {inclusion:.1e}, \
             Basel gap {basel:.6e} (tol 1e-6), Abel witnesses {}",
            witness.pass
        ),
    )
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("coefficient formula equivalence", 5, coefficient_formula),
        ("isometry suite", 10, isometries),
        ("semigroup and identity suite", 5, semigroups),
        ("Moebius convergence", 120, moebius_convergence),
        ("certificate dominance", 60, certificate_dominance),
        ("compact-open check", 60, compact_open),
        ("Dirichlet cross-check", 30, dirichlet_crosscheck),
        ("h_kc dichotomy", 10, dichotomy),
        ("RH proxy monotonicity", 120, rh_proxy_monotone),
        ("PDCP suite", 60, pdcp_suite),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*budget);
        let pass = out.pass && in_time;
        failures += usize::from(!pass);
        println!(
            "{} [{:>2}] {name}: {} ({:.2} s, budget {budget} s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            took.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
