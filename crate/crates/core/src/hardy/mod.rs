//! The functions `h_k` and friends, plus the operators acting on them.
//!
//! `h_k(z) = log((1 + z + ... + z^{k-1})/k) / (1 - z)` has Maclaurin
//! coefficients `c_n(k) = H(n) - H(floor(n/k)) - log k`. Every constructor
//! that truncates an infinite series attaches a bound on the norm of the
//! discarded tail (see [`CoeffSeq::tail_norm_bound`]).

mod operators;
mod verify;

pub use operators::{apply_operator, Operator, OperatorOutput};
pub use verify::{
    default_identities, verify_all, verify_identity, Identity, IdentityReport, IDENTITY_TOLERANCE,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compensated::{inverse_square_tail_bound, NeumaierSum};
use crate::numtheory::NtTables;
use crate::series::{CoeffSeq, Space};
use crate::{Error, Result};

/// `C` in `|c_n(k)| <= C k / n` (`n >= 1`).
///
/// An oracle scan over `n <= 10^6`, `k <= 100` gives a maximum of 0.5665,
/// attained at `n = k - 1`; as `k` grows that maximum tends to Euler's
/// constant from below.
pub const HK_TAIL_CONSTANT: f64 = 0.6;

fn check_k(k: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid(format!("h_k needs k >= 2, got {k}")));
    }
    Ok(())
}

/// `||sum_{n >= len} c_n(k) z^n||` bound from `|c_n(k)| <= C k / n`.
pub(crate) fn hk_tail_bound(k: u64, len: usize) -> f64 {
    HK_TAIL_CONSTANT * k as f64 * inverse_square_tail_bound(len).sqrt()
}

/// `h_k` truncated to `n` coefficients, by the running recurrence
/// `c_j = c_{j-1} + 1/j - k [k|j] / j`, `c_0 = -log k`.
pub fn hk_coeffs(k: u64, n: usize) -> Result<CoeffSeq> {
    check_k(k)?;
    if n == 0 {
        return Err(Error::invalid("N must be >= 1"));
    }
    let kf = k as f64;
    let mut acc = NeumaierSum::new();
    acc.add(-kf.ln());
    let mut c = Vec::with_capacity(n);
    c.push(acc.value());
    for j in 1..n {
        acc.add(1.0 / j as f64);
        if j as u64 % k == 0 {
            acc.add(-kf / j as f64);
        }
        c.push(acc.value());
    }
    Ok(CoeffSeq::from_parts(c, Space::H2, 0.0, hk_tail_bound(k, n)))
}

/// `h_k` from sieved harmonic numbers: `H(n) - H(floor(n/k)) - log k`.
pub fn hk_coeffs_from_tables(tables: &NtTables, k: u64, n: usize) -> Result<CoeffSeq> {
    check_k(k)?;
    if n == 0 || n - 1 > tables.limit() {
        return Err(Error::invalid("N must be in 1..=limit+1"));
    }
    let lk = (k as f64).ln();
    let c = (0..n)
        .map(|j| tables.harmonic(j) - tables.harmonic(j / k as usize) - lk)
        .collect();
    Ok(CoeffSeq::from_parts(c, Space::H2, 0.0, hk_tail_bound(k, n)))
}

/// `max n |c_n(k)| / k` over `1 <= n <= n_max`, `2 <= k <= k_max`.
pub fn calibrate_hk_tail_constant(n_max: usize, k_max: u64) -> f64 {
    (2..=k_max)
        .into_par_iter()
        .map(|k| {
            let c = hk_coeffs(k, n_max + 1).expect("k >= 2");
            c.coeffs()
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, v)| n as f64 * v.abs() / k as f64)
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Truncated `H^2` norms of `h_{k,c} = h_k + log(k/c)/(1 - z)` at each
/// requested length. Bounded in `N` only when `c = k`; otherwise they grow
/// like `|log(k/c)| sqrt(N)`.
pub fn hkc_partial_norms(k: u64, c: f64, lengths: &[usize]) -> Result<Vec<f64>> {
    check_k(k)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid("c must be positive"));
    }
    let Some(&max_n) = lengths.iter().max() else {
        return Ok(Vec::new());
    };
    if lengths.contains(&0) {
        return Err(Error::invalid("lengths must be >= 1"));
    }
    let shift = (k as f64 / c).ln();
    let h = hk_coeffs(k, max_n)?;
    let mut prefix = Vec::with_capacity(max_n + 1);
    let mut acc = NeumaierSum::new();
    prefix.push(0.0);
    for &v in h.coeffs() {
        let x = v + shift;
        acc.add(x * x);
        prefix.push(acc.value());
    }
    Ok(lengths.iter().map(|&n| prefix[n].sqrt()).collect())
}

/// `(I - S) h_k = log(1 - z^k) - log(1 - z) - log k` in closed form:
/// coefficient 0 is `-log k`, coefficient `j >= 1` is `(1 - k [k|j]) / j`.
pub fn ims_hk_coeffs(k: u64, n: usize) -> Result<CoeffSeq> {
    check_k(k)?;
    if n == 0 {
        return Err(Error::invalid("N must be >= 1"));
    }
    let kf = k as f64;
    let mut c = Vec::with_capacity(n);
    c.push(-kf.ln());
    for j in 1..n {
        let jf = j as f64;
        c.push(if j as u64 % k == 0 { (1.0 - kf) / jf } else { 1.0 / jf });
    }
    Ok(CoeffSeq::from_parts(c, Space::H2, 0.0, log_ratio_tail_bound(k, n)))
}

/// Tail bound shared by `(I - S) h_k` and `s_k`: coefficients are `1/j`,
/// except `-(k-1)/j` on multiples of `k`.
pub(crate) fn log_ratio_tail_bound(k: u64, n: usize) -> f64 {
    let kf = k as f64;
    let start = n.max(1);
    let multiples_from = start.div_ceil(k as usize).max(1);
    let extra = (kf * kf - 2.0 * kf) / (kf * kf);
    (inverse_square_tail_bound(start) + extra * inverse_square_tail_bound(multiples_from)).sqrt()
}

/// `r_k(n) = k {n/k} = n mod k` as an element of `l^2_omega`.
pub fn rk_sequence(k: u64, n: usize) -> Result<CoeffSeq> {
    if k < 1 || n == 0 {
        return Err(Error::invalid("r_k needs k >= 1 and N >= 1"));
    }
    let c = (1..=n as u64).map(|m| (m % k) as f64).collect();
    // sum_{m > N} (k-1)^2 / (m(m+1)) = (k-1)^2 / (N+1)
    let bound = (k - 1) as f64 / ((n + 1) as f64).sqrt();
    Ok(CoeffSeq::from_parts(c, Space::L2Omega, 0.0, bound))
}

/// The all-ones sequence in `l^2_omega`, exact through its constant tail.
pub fn ones_sequence() -> CoeffSeq {
    CoeffSeq::from_parts(vec![1.0], Space::L2Omega, 1.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedFunction {
    /// `L(z) = log(1 - z)`
    Log1mz,
    /// `R(z) = 1/(1 - z)` in the Bergman space.
    RGeom,
    /// `R_k = Psi r_k` in the Bergman space.
    Rk(u64),
    /// `s_k(z) = log(1 + z + ... + z^{k-1})`
    Sk(u64),
    One,
    OneMinusZ,
}

pub fn named_function(name: NamedFunction, n: usize) -> Result<CoeffSeq> {
    if n == 0 {
        return Err(Error::invalid("N must be >= 1"));
    }
    match name {
        NamedFunction::Log1mz => {
            let c = (0..n).map(|j| if j == 0 { 0.0 } else { -1.0 / j as f64 }).collect();
            let bound = inverse_square_tail_bound(n).sqrt();
            Ok(CoeffSeq::from_parts(c, Space::H2, 0.0, bound))
        }
        NamedFunction::RGeom => Ok(CoeffSeq::from_parts(vec![1.0; n], Space::BergmanA, 1.0, 0.0)),
        NamedFunction::Rk(k) => {
            let r = rk_sequence(k, n)?;
            Ok(apply_operator(Operator::Psi, &r)?.seq)
        }
        NamedFunction::Sk(k) => {
            if k == 1 {
                return CoeffSeq::zeros(n, Space::H2);
            }
            // s_k = log k + (1 - z) h_k
            let h = hk_coeffs(k, n)?;
            let c = h.coeffs();
            let mut s = Vec::with_capacity(n);
            s.push((k as f64).ln() + c[0]);
            s.extend(c.windows(2).map(|w| w[1] - w[0]));
            let bound = 2.0 * h.tail_norm_bound() + c[n - 1].abs();
            Ok(CoeffSeq::from_parts(s, Space::H2, 0.0, bound))
        }
        NamedFunction::One => {
            let mut c = vec![0.0; n];
            c[0] = 1.0;
            CoeffSeq::new(c, Space::H2)
        }
        NamedFunction::OneMinusZ => {
            let mut c = vec![0.0; n.max(2)];
            c[0] = 1.0;
            c[1] = -1.0;
            CoeffSeq::new(c, Space::H2)
        }
    }
}
