//! Distances from `1` to `span{h_2, ..., h_K}`, the Möbius combination of
//! `(I - S) h_k` converging to `1 - z`, and pointwise checks on the disk.

use std::io::Write;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compensated::{self, inverse_square_tail_bound, NeumaierSum};
use crate::gram::{GramSolution, GramSystem, RidgePolicy, Solver};
use crate::hardy::{hk_coeffs, log_ratio_tail_bound, named_function, NamedFunction};
use crate::numtheory::NtTables;
use crate::{Error, Result};

pub const MAX_FAMILY_SIZE: usize = 10_000;
/// Rough memory ceiling for Gram assembly, in bytes.
pub const MEMORY_LIMIT: usize = 3 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `h_2, ..., h_K`
    Hk,
    /// `(I - S) h_2, ..., (I - S) h_K`
    ImsHk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    One,
    OneMinusZ,
}

impl Target {
    fn coeffs(self) -> [f64; 2] {
        match self {
            Target::One => [1.0, 0.0],
            Target::OneMinusZ => [1.0, -1.0],
        }
    }
}

/// Gram system for one family and target, functions `k = 2..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct BdGram {
    pub family: Family,
    pub target: Target,
    pub k_max: usize,
    pub system: GramSystem,
}

pub fn build_gram(family: Family, k_max: usize, n_trunc: usize, target: Target) -> Result<BdGram> {
    if !(2..=MAX_FAMILY_SIZE).contains(&k_max) {
        return Err(Error::invalid(format!("K must be in 2..={MAX_FAMILY_SIZE}, got {k_max}")));
    }
    if n_trunc < 2 * k_max {
        return Err(Error::invalid(format!("N = {n_trunc} must be at least 2K = {}", 2 * k_max)));
    }
    let m = k_max - 1;
    let mut bytes = m * m * 8;
    if family == Family::Hk {
        bytes += m * n_trunc * 8;
    }
    if bytes > MEMORY_LIMIT {
        return Err(Error::invalid(format!(
            "Gram assembly needs about {} MiB, above the {} MiB limit",
            bytes >> 20,
            MEMORY_LIMIT >> 20
        )));
    }
    let system = match family {
        Family::Hk => hk_system(k_max, n_trunc, target)?,
        Family::ImsHk => ims_system(k_max, n_trunc, target),
    };
    Ok(BdGram { family, target, k_max, system })
}

fn hk_system(k_max: usize, n: usize, target: Target) -> Result<GramSystem> {
    let seqs: Vec<_> =
        (2..=k_max as u64).into_par_iter().map(|k| hk_coeffs(k, n)).collect::<Result<_>>()?;
    let tails = seqs.iter().map(|s| s.tail_norm_bound()).collect();
    let vectors: Vec<Vec<f64>> = seqs.into_iter().map(|s| s.into_coeffs()).collect();
    let mut t = vec![0.0; n];
    t[..2].copy_from_slice(&target.coeffs());
    GramSystem::from_vectors(&vectors, &t, tails, |_| 1.0)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Entries of `(I - S) h_k` summed in closed form over `m < N`:
/// `<g_i, g_j> = log i log j + P(x) - P(x/i)/i - P(x/j)/j + ij P(x/L)/L^2`
/// with `x = N - 1`, `L = lcm(i, j)` and `P(y) = sum_{q <= y} 1/q^2`.
fn ims_system(k_max: usize, n: usize, target: Target) -> GramSystem {
    let x = n - 1;
    let mut prefix = Vec::with_capacity(x + 1);
    let mut acc = NeumaierSum::new();
    prefix.push(0.0);
    for q in 1..=x {
        let qf = q as f64;
        acc.add(1.0 / (qf * qf));
        prefix.push(acc.value());
    }
    let p = |d: u64| -> f64 {
        let y = x as u64 / d;
        prefix[y as usize]
    };
    let m = k_max - 1;
    let logs: Vec<f64> = (2..=k_max).map(|k| (k as f64).ln()).collect();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|a| {
            let i = a as u64 + 2;
            (0..=a)
                .map(|b| {
                    let j = b as u64 + 2;
                    let l = i / gcd(i, j) * j;
                    let lf = l as f64;
                    let mut s = NeumaierSum::new();
                    s.add(logs[a] * logs[b]);
                    s.add(prefix[x]);
                    s.add(-p(i) / i as f64);
                    s.add(-p(j) / j as f64);
                    s.add((i * j) as f64 * p(l) / (lf * lf));
                    s.value()
                })
                .collect()
        })
        .collect();
    let gram = DMatrix::from_fn(m, m, |a, b| if b <= a { rows[a][b] } else { rows[b][a] });
    // coefficients 0 and 1 of (I - S) h_k are -log k and 1
    let [t0, t1] = target.coeffs();
    let target_ip = DVector::from_iterator(m, logs.iter().map(|l| -l * t0 + t1));
    let tail_bounds = (2..=k_max as u64).map(|k| log_ratio_tail_bound(k, n)).collect();
    GramSystem { gram, target_ip, target_norm2: t0 * t0 + t1 * t1, tail_bounds, n_trunc: n }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    /// `sum |x_k|`
    pub l1_coefficients: f64,
    pub max_abs_coefficient: f64,
    /// `||(G + eps I) x - b||_inf`
    pub solve_residual: f64,
    /// Whether a negative `distance^2` was clamped to zero.
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    #[serde(rename = "K")]
    pub k_max: usize,
    #[serde(rename = "N")]
    pub n_trunc: usize,
    pub family: Family,
    pub target: Target,
    pub distance: f64,
    pub distance_squared: f64,
    pub residual_summary: ResidualSummary,
    pub solver: Solver,
    pub regularization: f64,
    pub condition_estimate: f64,
    pub min_eigenvalue: f64,
    /// Untruncated distance lies in `[distance, distance + truncation_bound]`.
    pub truncation_bound: f64,
    pub wall_time_s: f64,
}

fn report(g: &BdGram, sol: GramSolution, started: Instant) -> DistanceReport {
    let x = &sol.coefficients;
    DistanceReport {
        k_max: g.k_max,
        n_trunc: g.system.n_trunc,
        family: g.family,
        target: g.target,
        distance: sol.distance,
        distance_squared: sol.distance_squared,
        residual_summary: ResidualSummary {
            l1_coefficients: compensated::sum(x.iter().map(|v| v.abs())),
            max_abs_coefficient: x.iter().fold(0.0, |m, v| m.max(v.abs())),
            solve_residual: sol.solve_residual,
            clamped: sol.clamped,
        },
        solver: sol.solver,
        regularization: sol.regularization,
        condition_estimate: sol.condition_estimate,
        min_eigenvalue: sol.min_eigenvalue,
        truncation_bound: sol.truncation_bound,
        wall_time_s: started.elapsed().as_secs_f64(),
    }
}

pub fn distance(g: &BdGram, policy: RidgePolicy) -> Result<DistanceReport> {
    let started = Instant::now();
    let sol = g.system.solve(policy)?;
    Ok(report(g, sol, started))
}

/// Distance from the target to the empty span, `||target||`.
pub fn empty_distance(target: Target, n_trunc: usize) -> Result<f64> {
    let sys = GramSystem {
        gram: DMatrix::zeros(0, 0),
        target_ip: DVector::zeros(0),
        target_norm2: target.coeffs().iter().map(|c| c * c).sum(),
        tail_bounds: Vec::new(),
        n_trunc,
    };
    Ok(sys.solve(RidgePolicy::default())?.distance)
}

/// Distances for several `K` at one `N`. The Gram matrix is assembled once
/// at the largest `K`; smaller systems are its leading blocks.
pub fn distance_sweep(
    family: Family,
    ks: &[usize],
    n_trunc: usize,
    target: Target,
    policy: RidgePolicy,
) -> Result<Vec<DistanceReport>> {
    let Some(&k_top) = ks.iter().max() else {
        return Ok(Vec::new());
    };
    let started = Instant::now();
    let full = build_gram(family, k_top, n_trunc, target)?;
    let build_time = started.elapsed().as_secs_f64();
    ks.iter()
        .map(|&k| {
            if k < 2 {
                return Err(Error::invalid("K must be >= 2"));
            }
            let t0 = Instant::now();
            let g = BdGram { family, target, k_max: k, system: full.system.leading(k - 1)? };
            let mut r = report(&g, g.system.solve(policy)?, t0);
            r.wall_time_s += build_time;
            Ok(r)
        })
        .collect()
}

pub fn write_distance_csv<W: Write>(reports: &[DistanceReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["K", "N", "distance", "ridge", "condition", "truncation_bound"])?;
    for r in reports {
        out.write_record([
            r.k_max.to_string(),
            r.n_trunc.to_string(),
            format!("{:e}", r.distance),
            format!("{:e}", r.regularization),
            format!("{:e}", r.condition_estimate),
            format!("{:e}", r.truncation_bound),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `||sum_{k=2}^n (mu(k)/k)(I - S) h_k - (1 - z)||` and the pieces of its
/// a priori bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoebiusResidualReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub n_trunc: usize,
    /// Norm over coefficients `0..N`.
    pub residual_norm: f64,
    /// Upper bound for `sum_{j > n} d(j)^2 / j^2`.
    pub phi_bound: f64,
    /// `sum_{k <= n} mu(k)/k`
    #[serde(rename = "M1")]
    pub m1: f64,
    /// `sum_{k <= n} mu(k) log k / k`
    #[serde(rename = "M2")]
    pub m2: f64,
    /// `||log(1 - z)||` over coefficients `0..N`.
    pub log_norm: f64,
    /// `sqrt(phi_bound) + |M1| ||L|| + |1 + M2|`
    pub bound: f64,
    /// Bound on the norm of the residual's coefficients `j >= N`.
    pub truncation_slack: f64,
    pub bound_holds: bool,
}

/// Coefficients `0..N` of `sum_{k=2}^n (mu(k)/k)(I - S) h_k`.
///
/// Coefficient 0 is `-M2(n)`; coefficient `j >= 1` is `(M1(n) - D_n(j))/j`
/// with `D_n(j) = sum_{d | j, d <= n} mu(d)`.
pub fn moebius_combination(tables: &NtTables, n: usize, n_trunc: usize) -> Result<Vec<f64>> {
    if n == 0 || n_trunc < 2 {
        return Err(Error::invalid("need n >= 1 and N >= 2"));
    }
    let m1 = tables.mertens_over_k(n);
    let m2 = tables.mertens_logk_over_k(n);
    let d = tables.divisor_restricted_mobius_sums(n, n_trunc)?;
    let mut c: Vec<f64> =
        d.iter().enumerate().map(|(j, &dj)| (m1 - dj as f64) / j.max(1) as f64).collect();
    c[0] = -m2;
    Ok(c)
}

pub fn moebius_residual(n: usize, n_trunc: usize) -> Result<MoebiusResidualReport> {
    let tables = NtTables::sieve(n.max(n_trunc))?;
    moebius_residual_with(&tables, n, n_trunc)
}

/// As [`moebius_residual`], with tables sieved to at least `max(n, N)`.
pub fn moebius_residual_with(
    tables: &NtTables,
    n: usize,
    n_trunc: usize,
) -> Result<MoebiusResidualReport> {
    if tables.limit() < n.max(n_trunc) {
        return Err(Error::invalid("tables must reach max(n, N)"));
    }
    let mut r = moebius_combination(tables, n, n_trunc)?;
    r[0] -= 1.0;
    r[1] += 1.0;
    let residual_norm = compensated::sum(r.iter().map(|v| v * v)).sqrt();
    let m1 = tables.mertens_over_k(n);
    let m2 = tables.mertens_logk_over_k(n);
    let phi_bound = tables.sigma_square_tail(n)?.total();
    let log_norm = named_function(NamedFunction::Log1mz, n_trunc)?.norm();
    let bound = phi_bound.sqrt() + m1.abs() * log_norm + (1.0 + m2).abs();
    // past N: |r_j| <= |M1|/j + d(j)/j
    let beyond = tables.sigma_square_tail(tables.limit())?.remainder_bound;
    let dn = if n_trunc <= tables.limit() { tables.divisor_count(n_trunc) as f64 } else { 0.0 };
    let nf = n_trunc as f64;
    let inside = compensated::sum(
        (n_trunc + 1..=tables.limit()).map(|j| (tables.divisor_count(j) as f64 / j as f64).powi(2)),
    );
    let truncation_slack = m1.abs() * inverse_square_tail_bound(n_trunc).sqrt()
        + (dn * dn / (nf * nf) + inside + beyond).sqrt();
    Ok(MoebiusResidualReport {
        n,
        n_trunc,
        residual_norm,
        phi_bound,
        m1,
        m2,
        log_norm,
        bound,
        truncation_slack,
        bound_holds: residual_norm <= bound + truncation_slack,
    })
}

pub fn write_moebius_csv<W: Write>(reports: &[MoebiusResidualReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "N", "residual_norm", "phi_bound", "M1", "M2"])?;
    for r in reports {
        out.write_record([
            r.n.to_string(),
            r.n_trunc.to_string(),
            format!("{:e}", r.residual_norm),
            format!("{:e}", r.phi_bound),
            format!("{:e}", r.m1),
            format!("{:e}", r.m2),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseReport {
    pub z: Complex64,
    pub n: usize,
    pub value: Complex64,
    /// `|value - 1|`
    pub error: f64,
    /// `(residual_norm + slack) / (|1 - z| sqrt(1 - |z|^2))`
    pub bound: f64,
    pub within_bound: bool,
}

/// `h_k(z) = (log(1 - z^k) - log(1 - z) - log k) / (1 - z)`; both
/// logarithms are principal and analytic on the disk.
pub fn hk_value(k: u64, z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    ((one - z.powu(k as u32)).ln() - (one - z).ln() - (k as f64).ln()) / (one - z)
}

/// `|sum_{k <= n} (mu(k)/k) h_k(z) - 1|` at each point, with the bound from
/// the Möbius residual at truncation `N`.
pub fn compact_open_check(
    points: &[Complex64],
    n: usize,
    n_trunc: usize,
) -> Result<Vec<PointwiseReport>> {
    if let Some(z) = points.iter().find(|z| !(z.norm() < 1.0)) {
        return Err(Error::invalid(format!("point {z} is not in the open unit disk")));
    }
    let tables = NtTables::sieve(n.max(n_trunc))?;
    let res = moebius_residual_with(&tables, n, n_trunc)?;
    let full_norm = res.residual_norm + res.truncation_slack;
    Ok(points
        .iter()
        .map(|&z| {
            let mut re = NeumaierSum::new();
            let mut im = NeumaierSum::new();
            for k in 2..=n {
                let mu = tables.mobius(k);
                if mu != 0 {
                    let v = hk_value(k as u64, z) * (mu as f64 / k as f64);
                    re.add(v.re);
                    im.add(v.im);
                }
            }
            let value = Complex64::new(re.value(), im.value());
            let error = (value - 1.0).norm();
            let bound = full_norm / ((1.0 - z).norm() * (1.0 - z.norm_sqr()).sqrt());
            PointwiseReport { z, n, value, error, bound, within_bound: error <= bound }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CyclicityFamily {
    /// `{W_n 1}` reaches every monomial.
    WnOnOne,
    /// `f` orthogonal to every `1 - z^n` has constant coefficients.
    TnOnOneMinusZ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicityReport {
    pub family: CyclicityFamily,
    pub n_max: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// Sup distance of the computed object from the expected one.
    pub deviation: f64,
    pub pass: bool,
}

pub fn cyclicity_witness(family: CyclicityFamily, n_max: usize) -> Result<CyclicityReport> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be >= 1"));
    }
    match family {
        CyclicityFamily::WnOnOne => {
            // rows W_n 1, n = 1..=n_max, over degrees 0..n_max
            let one = named_function(NamedFunction::One, n_max)?;
            let rows: Vec<Vec<f64>> = (1..=n_max as u64)
                .map(|n| {
                    crate::hardy::apply_operator(crate::hardy::Operator::W(n), &one)
                        .map(|o| o.seq.into_coeffs())
                })
                .collect::<Result<_>>()?;
            // z^m = W_{m+1} 1 - W_m 1
            let mut deviation = 0.0f64;
            for m in 0..n_max {
                for (j, &v) in rows[m].iter().enumerate() {
                    let prev = if m == 0 { 0.0 } else { rows[m - 1][j] };
                    let want = if j == m { 1.0 } else { 0.0 };
                    deviation = deviation.max((v - prev - want).abs());
                }
            }
            let mat = DMatrix::from_fn(n_max, n_max, |i, j| rows[i][j]);
            let rank = mat.rank(1e-9);
            Ok(CyclicityReport {
                family,
                n_max,
                rank,
                kernel_dim: n_max - rank,
                deviation,
                pass: deviation == 0.0 && rank == n_max,
            })
        }
        CyclicityFamily::TnOnOneMinusZ => {
            // <f, 1 - z^n> = f_0 - f_n over coefficients 0..=n_max
            let cols = n_max + 1;
            let mat = DMatrix::from_fn(n_max, cols, |i, j| {
                if j == 0 {
                    1.0
                } else if j == i + 1 {
                    -1.0
                } else {
                    0.0
                }
            });
            let rank = mat.rank(1e-9);
            let kernel_dim = cols - rank;
            let null = kernel_vector(&mat);
            let scale = null[0];
            let deviation = null.iter().map(|v| (v / scale - 1.0).abs()).fold(0.0, f64::max);
            Ok(CyclicityReport {
                family,
                n_max,
                rank,
                kernel_dim,
                deviation,
                pass: kernel_dim == 1 && deviation < 1e-9 && (&mat * &null).amax() < 1e-9,
            })
        }
    }
}

/// Kernel of a full-row-rank `m x (m + 1)` matrix via the normal equations
/// of `A^T A + e e^T` with `e` the last unit vector.
fn kernel_vector(a: &DMatrix<f64>) -> DVector<f64> {
    let cols = a.ncols();
    let mut ext = DMatrix::zeros(a.nrows() + 1, cols);
    ext.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
    ext[(a.nrows(), 0)] = 1.0;
    let mut rhs = DVector::zeros(a.nrows() + 1);
    rhs[a.nrows()] = 1.0;
    ext.lu().solve(&rhs).unwrap_or_else(|| DVector::zeros(cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_one_dimensional_projection() {
        let n = 1 << 12;
        let g = build_gram(Family::Hk, 2, n, Target::One).unwrap();
        assert!((g.system.target_ip[0] + 2f64.ln()).abs() < 1e-15);
        let h2 = hk_coeffs(2, n).unwrap().norm_squared();
        assert!((g.system.gram[(0, 0)] - h2).abs() < 1e-13);
        let d = distance(&g, RidgePolicy::default()).unwrap();
        let want = (1.0 - 2f64.ln().powi(2) / h2).sqrt();
        assert!((d.distance - want).abs() < 1e-10);
    }

    #[test]
    fn ims_closed_form_gram_matches_vectors() {
        let n = 500;
        let g = build_gram(Family::ImsHk, 9, n, Target::OneMinusZ).unwrap();
        let vs: Vec<Vec<f64>> = (2..=9u64)
            .map(|k| crate::hardy::ims_hk_coeffs(k, n).unwrap().into_coeffs())
            .collect();
        let mut t = vec![0.0; n];
        t[0] = 1.0;
        t[1] = -1.0;
        let direct = GramSystem::from_vectors(&vs, &t, vec![0.0; 8], |_| 1.0).unwrap();
        assert!((&g.system.gram - &direct.gram).amax() < 1e-13);
        assert!((&g.system.target_ip - &direct.target_ip).amax() < 1e-15);
        for k in 2..=9 {
            let want = -(k as f64).ln() - 1.0;
            assert!((g.system.target_ip[k - 2] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn input_validation() {
        assert!(build_gram(Family::Hk, 1, 100, Target::One).is_err());
        assert!(build_gram(Family::Hk, 10, 19, Target::One).is_err());
        assert!(build_gram(Family::Hk, 10_001, 1 << 15, Target::One).is_err());
        assert!(build_gram(Family::Hk, 10_000, 1 << 16, Target::One).is_err());
        assert_eq!(empty_distance(Target::One, 16).unwrap(), 1.0);
    }

    #[test]
    fn sweep_is_monotone() {
        let r = distance_sweep(Family::Hk, &[2, 4, 8, 16, 32], 1 << 12, Target::One, Default::default())
            .unwrap();
        for w in r.windows(2) {
            assert!(w[1].distance <= w[0].distance + 1e-9);
        }
        assert!(r.iter().all(|x| x.distance > 0.0));
    }

    #[test]
    fn combination_matches_brute_force() {
        let t = NtTables::sieve(100).unwrap();
        let n = 10;
        let c = moebius_combination(&t, n, 51).unwrap();
        for j in 0..=50 {
            let mut acc = 0.0;
            for k in 2..=n as u64 {
                let mu = t.mobius(k as usize) as f64;
                let g = crate::hardy::ims_hk_coeffs(k, 51).unwrap();
                acc += mu / k as f64 * g.coeffs()[j];
            }
            assert!((c[j] - acc).abs() < 1e-14, "j={j}");
        }
    }

    #[test]
    fn residual_small_cases() {
        let r = moebius_residual(1, 1024).unwrap();
        assert!((r.residual_norm - 2f64.sqrt()).abs() < 1e-15);
        let a = moebius_residual(10, 1 << 14).unwrap();
        let b = moebius_residual(100, 1 << 14).unwrap();
        assert!(b.residual_norm < a.residual_norm);
        assert!(a.bound_holds && b.bound_holds);
    }

    #[test]
    fn pointwise_at_origin() {
        let r = compact_open_check(&[Complex64::new(0.0, 0.0)], 1, 64).unwrap();
        assert!((r[0].error - 1.0).abs() < 1e-15);
        let t = NtTables::sieve(1000).unwrap();
        let r = compact_open_check(&[Complex64::new(0.0, 0.0)], 1000, 4096).unwrap();
        assert!((r[0].value.re + t.mertens_logk_over_k(1000)).abs() < 1e-12);
        assert!(compact_open_check(&[Complex64::new(1.0, 0.0)], 10, 64).is_err());
    }

    #[test]
    fn hk_value_matches_series() {
        let z = Complex64::new(0.3, -0.4);
        let h = hk_coeffs(5, 400).unwrap();
        let s = h.evaluate(z).unwrap();
        assert!((s.value - hk_value(5, z)).norm() < 1e-12);
    }

    #[test]
    fn cyclicity() {
        let w = cyclicity_witness(CyclicityFamily::WnOnOne, 12).unwrap();
        assert!(w.pass && w.rank == 12);
        let t = cyclicity_witness(CyclicityFamily::TnOnOneMinusZ, 16).unwrap();
        assert_eq!(t.kernel_dim, 1);
        assert!(t.pass, "{t:?}");
    }

    #[test]
    fn csv_headers() {
        let mut buf = Vec::new();
        write_distance_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), "K,N,distance,ridge,condition,truncation_bound");
        let mut buf = Vec::new();
        write_moebius_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), "n,N,residual_norm,phi_bound,M1,M2");
    }
}
