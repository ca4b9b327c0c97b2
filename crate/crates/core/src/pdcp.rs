//! The sine-basis model of `L^2(0, 1)` and the embedding of `H^2_0` into it
//! via `U: z^k -> sqrt(2) sin(pi k x)`.

use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compensated::{self, NeumaierSum};
use crate::dirichlet::abel_mean;
use crate::gram::{GramSystem, RidgePolicy, Solver};
use crate::hardy::{ims_hk_coeffs, named_function, NamedFunction};
use crate::series::{CoeffSeq, Space};
use crate::{Error, Result};

/// `sum_k c_k sqrt(2) sin(pi k x)`, with `coeffs[k - 1] = c_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineSeq {
    coeffs: Vec<f64>,
    tail_norm_bound: f64,
}

impl SineSeq {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        Self::with_tail_bound(coeffs, 0.0)
    }

    pub fn with_tail_bound(coeffs: Vec<f64>, tail_norm_bound: f64) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("sine coefficients must be finite"));
        }
        if !(tail_norm_bound >= 0.0) {
            return Err(Error::invalid("tail bound must be non-negative"));
        }
        Ok(Self { coeffs, tail_norm_bound })
    }

    /// `e_k`, truncated to `len` coefficients.
    pub fn basis(k: usize, len: usize) -> Result<Self> {
        if k == 0 || k > len {
            return Err(Error::invalid("basis index must be in 1..=len"));
        }
        let mut c = vec![0.0; len];
        c[k - 1] = 1.0;
        Self::new(c)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `e_k`, zero past the stored range.
    pub fn coeff(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.coeffs.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn tail_norm_bound(&self) -> f64 {
        self.tail_norm_bound
    }

    pub fn norm(&self) -> f64 {
        compensated::sum(self.coeffs.iter().map(|c| c * c)).sqrt()
    }

    /// Value at `x` by the Clenshaw recurrence for sine series.
    pub fn eval(&self, x: f64) -> f64 {
        let theta = PI * x;
        let two_cos = 2.0 * theta.cos();
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            let b0 = c + two_cos * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        SQRT_2 * b1 * theta.sin()
    }
}

/// `U f` for `f` with zero constant term.
pub fn map_u(f: &CoeffSeq) -> Result<SineSeq> {
    if f.space() != Space::H2 {
        return Err(Error::SpaceMismatch { left: Space::H2, right: f.space() });
    }
    if f.coeffs()[0] != 0.0 {
        return Err(Error::invalid("U is defined on functions vanishing at 0"));
    }
    SineSeq::with_tail_bound(f.coeffs()[1..].to_vec(), f.tail_norm_bound())
}

/// `V f = U P (I - S) f`, keeping the `z^N` term of `(I - S) f` so the
/// image of the stored polynomial is exact.
pub fn map_v(f: &CoeffSeq) -> Result<SineSeq> {
    if f.space() != Space::H2 {
        return Err(Error::SpaceMismatch { left: Space::H2, right: f.space() });
    }
    let a = f.coeffs();
    let n = a.len();
    let c = (1..=n).map(|j| if j < n { a[j] - a[j - 1] } else { -a[n - 1] }).collect();
    SineSeq::with_tail_bound(c, 2.0 * f.tail_norm_bound())
}

/// `phi(x) -> phi(n x)` on coefficients: `c_m -> c_{m/n}` when `n | m`.
/// Keeps the input length.
pub fn dilate(n: usize, s: &SineSeq) -> Result<SineSeq> {
    if n == 0 {
        return Err(Error::invalid("dilation factor must be >= 1"));
    }
    let len = s.len();
    let c = (1..=len).map(|m| if m % n == 0 { s.coeff(m / n) } else { 0.0 }).collect();
    // coefficients k with k n > len fall off the end
    let lost = compensated::sum((len / n + 1..=len).map(|k| s.coeff(k).powi(2))).sqrt();
    SineSeq::with_tail_bound(c, lost + s.tail_norm_bound())
}

/// Wintner's `f_s`, coefficients `k^{-s}` for `k <= N_s`.
pub fn wintner_fs(s: f64, n_s: usize) -> Result<SineSeq> {
    if !(s > 0.5) {
        return Err(Error::invalid(format!("f_s is in L^2 only for s > 1/2, got {s}")));
    }
    if n_s == 0 {
        return Err(Error::invalid("N_s must be >= 1"));
    }
    let c = (1..=n_s).map(|k| (k as f64).powf(-s)).collect();
    // sum_{k > N} k^{-2s} <= N^{1-2s} / (2s - 1)
    let tail = ((n_s as f64).powf(1.0 - 2.0 * s) / (2.0 * s - 1.0)).sqrt();
    SineSeq::with_tail_bound(c, tail)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanDistanceReport {
    pub n_max: usize,
    pub len: usize,
    pub distance: f64,
    pub solver: Solver,
    pub regularization: f64,
    pub condition_estimate: f64,
    pub truncation_bound: f64,
}

/// Distance from `target` to `span{dilate(n, generator) : n <= n_max}`,
/// computed on the first `max(len)` sine coefficients.
pub fn span_distance_l2(
    target: &SineSeq,
    generator: &SineSeq,
    n_max: usize,
    policy: RidgePolicy,
) -> Result<SpanDistanceReport> {
    if generator.coeffs.iter().all(|&c| c == 0.0) {
        return Err(Error::invalid("generator must be nonzero"));
    }
    if n_max == 0 {
        return Err(Error::invalid("n_max must be >= 1"));
    }
    let len = target.len().max(generator.len());
    let padded = |s: &SineSeq| -> SineSeq {
        let mut c = s.coeffs.clone();
        c.resize(len, 0.0);
        SineSeq { coeffs: c, tail_norm_bound: s.tail_norm_bound }
    };
    let g = padded(generator);
    let t = padded(target);
    let dil: Vec<SineSeq> = (1..=n_max).map(|n| dilate(n, &g)).collect::<Result<_>>()?;
    let tails = dil.iter().map(|d| d.tail_norm_bound).collect();
    let vectors: Vec<Vec<f64>> = dil.into_iter().map(|d| d.coeffs).collect();
    let sys = GramSystem::from_vectors(&vectors, &t.coeffs, tails, |_| 1.0)?;
    let sol = sys.solve(policy)?;
    Ok(SpanDistanceReport {
        n_max,
        len,
        distance: sol.distance,
        solver: sol.solver,
        regularization: sol.regularization,
        condition_estimate: sol.condition_estimate,
        truncation_bound: sol.truncation_bound + target.tail_norm_bound,
    })
}

/// Largest deviation of `V h_k` from `T_k L - T_1 L` (sine coefficients
/// `1/m - k [k|m] / m`) over `2 <= k <= k_max`, at truncation `N`.
pub fn inclusion_check(k_max: u64, n_trunc: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    let l = map_u(&named_function(NamedFunction::Log1mz, n_trunc + 1)?)?;
    for k in 2..=k_max {
        let v = map_v(&crate::hardy::hk_coeffs(k, n_trunc)?)?;
        let tk = dilate(k as usize, &l)?;
        for m in 1..n_trunc {
            let mf = m as f64;
            let closed = if m as u64 % k == 0 { (1.0 - k as f64) / mf } else { 1.0 / mf };
            let via_l = tk.coeff(m) - l.coeff(m);
            worst = worst.max((v.coeff(m) - closed).abs()).max((via_l - closed).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeExclusionReport {
    #[serde(rename = "N")]
    pub n_trunc: usize,
    /// `r_j = 1 - 2^{-j}`
    pub radii: Vec<f64>,
    /// `L(r_j) = log(1 - r_j)`
    pub log_abel: Vec<f64>,
    /// `L(r_{j+1}) - L(r_j)`; tends to `-log 2`.
    pub log_steps: Vec<f64>,
    /// `(I - S) h_2` at `r_j`; tends to 0.
    pub ims_h2_abel: Vec<f64>,
    /// `(I - S) p` at `r_j` for a random polynomial `p`; tends to 0.
    pub ims_poly_abel: Vec<f64>,
    pub log_diverges: bool,
    pub ims_vanish: bool,
    pub pass: bool,
}

pub const RANGE_RADII: std::ops::RangeInclusive<u32> = 4..=14;

/// Abel means at `r = 1 - 2^{-j}`: `L = log(1 - z)` has no boundary value at
/// 1 while every `(I - S) f` does, and it is 0.
pub fn range_exclusion_witness(n_trunc: usize, seed: u64) -> Result<RangeExclusionReport> {
    // r^N must be negligible at the largest radius
    let need = 40usize << RANGE_RADII.end();
    if n_trunc < need {
        return Err(Error::invalid(format!("N must be >= {need}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let l = named_function(NamedFunction::Log1mz, n_trunc)?;
    let ims = ims_hk_coeffs(2, n_trunc)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let p = CoeffSeq::new(p, Space::H2)?;
    let ims_p = map_v(&p).and_then(|v| {
        let mut c = vec![p.coeffs()[0]];
        c.extend_from_slice(v.coeffs());
        CoeffSeq::new(c, Space::H2)
    })?;
    let radii: Vec<f64> = RANGE_RADII.map(|j| 1.0 - 0.5f64.powi(j as i32)).collect();
    let at = |f: &CoeffSeq| -> Result<Vec<f64>> {
        radii.iter().map(|&r| abel_mean(f, one, r).map(|v| v.re)).collect()
    };
    let log_abel = at(&l)?;
    let ims_h2_abel = at(&ims)?;
    let ims_poly_abel = at(&ims_p)?;
    let log_steps: Vec<f64> = log_abel.windows(2).map(|w| w[1] - w[0]).collect();
    let ln2 = 2f64.ln();
    let log_diverges = log_steps.iter().all(|d| (d + ln2).abs() < 1e-6);
    let mass = compensated::sum(p.coeffs().iter().map(|c| c.abs()));
    let ims_vanish = radii.iter().zip(&ims_h2_abel).zip(&ims_poly_abel).all(|((r, a), b)| {
        let gap = 1.0 - r;
        a.abs() <= gap && b.abs() <= gap * mass
    });
    Ok(RangeExclusionReport {
        n_trunc,
        radii,
        log_abel,
        log_steps,
        ims_h2_abel,
        ims_poly_abel,
        log_diverges,
        ims_vanish,
        pass: log_diverges && ims_vanish,
    })
}

/// `(x, s(x))` at the midpoints of `grid` equal cells of `(0, 2)`.
pub fn sample_odd_periodic(s: &SineSeq, grid: usize) -> Result<Vec<(f64, f64)>> {
    if grid < 2 {
        return Err(Error::invalid("grid must be >= 2"));
    }
    let h = 2.0 / grid as f64;
    Ok((0..grid)
        .map(|i| {
            let x = (i as f64 + 0.5) * h;
            (x, s.eval(x))
        })
        .collect())
}

pub fn write_samples_csv<W: Write>(samples: &[(f64, f64)], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "value"])?;
    for (x, v) in samples {
        out.write_record([format!("{x:e}"), format!("{v:e}")])?;
    }
    out.flush()?;
    Ok(())
}

/// Midpoint rule for `int_0^1 s(x)^2 dx` on `grid` cells.
pub fn sampled_norm_squared(s: &SineSeq, grid: usize) -> Result<f64> {
    let samples = sample_odd_periodic(s, 2 * grid)?;
    let mut acc = NeumaierSum::new();
    for (x, v) in samples {
        if x < 1.0 {
            acc.add(v * v);
        }
    }
    Ok(acc.value() / grid as f64)
}
