//! Local Dirichlet spaces at a boundary point: `f = a + (z - zeta) g` with
//! energy `||g||^2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::compensated::{self, NeumaierSum};
use crate::gram::{GramSystem, RidgePolicy};
use crate::hardy::{hk_coeffs, named_function, NamedFunction};
use crate::series::{CoeffSeq, Space};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletDecomposition {
    pub zeta: Complex64,
    /// Boundary value `f*(zeta)`.
    pub a: Complex64,
    /// Real parts of the coefficients of `g`.
    pub g: Vec<f64>,
    /// Imaginary parts; all zero when `zeta` and `f` are real.
    pub g_imag: Vec<f64>,
    /// `||g||^2`, plus the estimated tail for truncated input.
    pub energy: f64,
    /// Estimate of `sum_{n >= N} |g_n|^2` included in `energy`.
    pub energy_tail_estimate: f64,
    /// Reconstruction error: `|f_0 - a + zeta g_0|` for polynomials,
    /// `|g_{N-1}|` (the unmatched `z^N` term) for truncated series.
    pub residual: f64,
    /// Spread of the partial-sum means used for `a` (zero for polynomials).
    pub boundary_error_estimate: f64,
    pub exact: bool,
    #[serde(rename = "N")]
    pub n_trunc: usize,
}

/// The serialized form `{zeta, a, energy, residual, N}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub zeta: Complex64,
    pub a: Complex64,
    pub energy: f64,
    pub residual: f64,
    #[serde(rename = "N")]
    pub n_trunc: usize,
}

impl DirichletDecomposition {
    pub fn summary(&self) -> DecompositionSummary {
        DecompositionSummary {
            zeta: self.zeta,
            a: self.a,
            energy: self.energy,
            residual: self.residual,
            n_trunc: self.n_trunc,
        }
    }

    pub fn g_seq(&self) -> Result<CoeffSeq> {
        CoeffSeq::new(self.g.clone(), Space::H2)
    }
}

fn complex_norm2(re: &[f64], im: &[f64]) -> f64 {
    compensated::sum(re.iter().zip(im).map(|(x, y)| x * x + y * y))
}

/// Decomposes `f` at `zeta`.
///
/// Polynomials (no tail bound) take `a = f(zeta)` and synthetic division.
/// For a truncated series, `a` is the mean of the partial sums
/// `sum_{m <= n} f_m zeta^m` over `N/2 <= n < N`, and `g_n = a - S_n`
/// rotated by `conj(zeta)^{n+1}`; the energy adds `sum_{N/2 <= n < N} |g_n|^2`
/// as the tail beyond `N`, which is exact to leading order when
/// `|g_n| ~ 1/n`.
pub fn decompose(f: &CoeffSeq, zeta: Complex64) -> Result<DirichletDecomposition> {
    if f.space() != Space::H2 {
        return Err(Error::SpaceMismatch { left: Space::H2, right: f.space() });
    }
    if (zeta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("zeta = {zeta} is not on the unit circle")));
    }
    let c = f.coeffs();
    let n = c.len();
    if f.is_exact() {
        // a = f(zeta) by Horner; g_{n-1} = f_n + zeta g_n from the top
        let mut a = Complex64::new(0.0, 0.0);
        for &v in c.iter().rev() {
            a = a * zeta + v;
        }
        let len = (n - 1).max(1);
        let mut g = vec![Complex64::new(0.0, 0.0); len];
        if n >= 2 {
            g[n - 2] = Complex64::new(c[n - 1], 0.0);
            for m in (1..n - 1).rev() {
                g[m - 1] = zeta * g[m] + c[m];
            }
        }
        let residual = (c[0] - a + zeta * g[0]).norm();
        let (re, im): (Vec<f64>, Vec<f64>) = g.iter().map(|v| (v.re, v.im)).unzip();
        let energy = complex_norm2(&re, &im);
        return Ok(DirichletDecomposition {
            zeta,
            a,
            g: re,
            g_imag: im,
            energy,
            energy_tail_estimate: 0.0,
            residual,
            boundary_error_estimate: 0.0,
            exact: true,
            n_trunc: n,
        });
    }
    if n < 8 {
        return Err(Error::invalid("truncated series need N >= 8"));
    }
    // partial sums S_n = sum_{m <= n} f_m zeta^m
    let mut sre = NeumaierSum::new();
    let mut sim = NeumaierSum::new();
    let mut pw = Complex64::new(1.0, 0.0);
    let mut partial = Vec::with_capacity(n);
    for &v in c {
        let t = pw * v;
        sre.add(t.re);
        sim.add(t.im);
        partial.push(Complex64::new(sre.value(), sim.value()));
        pw *= zeta;
    }
    let mean = |s: &[Complex64]| {
        let re = compensated::sum(s.iter().map(|v| v.re));
        let im = compensated::sum(s.iter().map(|v| v.im));
        Complex64::new(re, im) / s.len() as f64
    };
    let half = n / 2;
    let a = mean(&partial[half..]);
    let q = half + (n - half) / 2;
    let boundary_error_estimate = (mean(&partial[half..q]) - mean(&partial[q..])).norm();
    // g_n = conj(zeta)^{n+1} (a - S_n)
    let zc = zeta.conj();
    let mut rot = zc;
    let mut re = Vec::with_capacity(n);
    let mut im = Vec::with_capacity(n);
    for s in &partial {
        let v = rot * (a - s);
        re.push(v.re);
        im.push(v.im);
        rot *= zc;
    }
    let body = complex_norm2(&re, &im);
    let tail = complex_norm2(&re[half..], &im[half..]);
    let residual = Complex64::new(re[n - 1], im[n - 1]).norm();
    Ok(DirichletDecomposition {
        zeta,
        a,
        g: re,
        g_imag: im,
        energy: body + tail,
        energy_tail_estimate: tail,
        residual,
        boundary_error_estimate,
        exact: false,
        n_trunc: n,
    })
}

/// Abel mean `f(r zeta)` of the truncated series.
pub fn abel_mean(f: &CoeffSeq, zeta: Complex64, r: f64) -> Result<Complex64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::invalid("radius must be in [0, 1)"));
    }
    Ok(f.evaluate(zeta * r)?.value)
}

/// Digamma by upward recurrence to `x >= 10` and the asymptotic series.
pub fn digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    let series = 1.0 / 12.0
        - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 / 132.0)));
    acc + x.ln() - 0.5 / x - x2 * series
}

/// `sum_{n > N} r_k(n)^2 / (n(n+1))` in closed form: on each residue class
/// `n = qk + j` the sum telescopes into a digamma difference.
fn rk_bergman_tail(k: u64, n: usize) -> f64 {
    let kf = k as f64;
    compensated::sum((1..k).map(|j| {
        let q0 = ((n as u64).saturating_sub(j) / k + 1) as f64;
        let jf = j as f64;
        jf * jf * (digamma(q0 + (jf + 1.0) / kf) - digamma(q0 + jf / kf)) / kf
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyCrossCheck {
    pub k: u64,
    #[serde(rename = "N")]
    pub n_trunc: usize,
    /// `D_{delta_1}(s_k)` from the decomposition.
    pub dirichlet_energy: f64,
    /// `||R_k||^2` in the Bergman space, truncated sum plus closed-form tail.
    pub bergman_norm2: f64,
    pub relative_difference: f64,
}

pub fn dirichlet_energy_bergman_crosscheck(k: u64, n_trunc: usize) -> Result<EnergyCrossCheck> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    let one = Complex64::new(1.0, 0.0);
    let (dirichlet_energy, bergman_norm2) = if k == 1 {
        (0.0, 0.0)
    } else {
        let s = named_function(NamedFunction::Sk(k), n_trunc)?;
        let d = decompose(&s, one)?;
        let rk = named_function(NamedFunction::Rk(k), n_trunc)?;
        (d.energy, rk.norm_squared() + rk_bergman_tail(k, n_trunc))
    };
    let scale = dirichlet_energy.abs().max(bergman_norm2.abs());
    let relative_difference =
        if scale == 0.0 { 0.0 } else { (dirichlet_energy - bergman_norm2).abs() / scale };
    Ok(EnergyCrossCheck { k, n_trunc, dirichlet_energy, bergman_norm2, relative_difference })
}

pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// `(a(z), b(z)) = (gamma (1 - z), gamma) / ((gamma + 1) - z)`.
pub fn golden_pair(z: Complex64) -> (Complex64, Complex64) {
    let g = GOLDEN_RATIO;
    let den = Complex64::new(g + 1.0, 0.0) - z;
    ((1.0 - z) * g / den, Complex64::new(g, 0.0) / den)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenPairReport {
    pub grid: usize,
    /// `max | |a|^2 + |b|^2 - 1 |` over the circle samples.
    pub max_deviation: f64,
    pub a_at_zero: f64,
    pub pass: bool,
}

pub const GOLDEN_TOLERANCE: f64 = 1e-12;

pub fn golden_pair_check(grid: usize) -> Result<GoldenPairReport> {
    if grid < 8 {
        return Err(Error::invalid("grid must be >= 8"));
    }
    let max_deviation = (0..grid)
        .map(|j| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / grid as f64);
            let (a, b) = golden_pair(z);
            (a.norm_sqr() + b.norm_sqr() - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let a_at_zero = golden_pair(Complex64::new(0.0, 0.0)).0.re;
    Ok(GoldenPairReport {
        grid,
        max_deviation,
        a_at_zero,
        pass: max_deviation <= GOLDEN_TOLERANCE && a_at_zero > 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    /// `<f, h_k>` for `k = 2..=K`.
    pub inner_products: Vec<f64>,
    pub projection_norm: f64,
    pub f_norm: f64,
    pub regularization: f64,
}

/// Inner products of `f` with `h_2..h_K` and the norm of its projection onto
/// their span, at `f`'s truncation length.
pub fn orthogonality_probe(f: &CoeffSeq, k_max: usize) -> Result<ProbeReport> {
    if f.space() != Space::H2 {
        return Err(Error::SpaceMismatch { left: Space::H2, right: f.space() });
    }
    if k_max < 2 {
        return Err(Error::invalid("K must be >= 2"));
    }
    let n = f.len();
    let hs: Vec<CoeffSeq> = (2..=k_max as u64).map(|k| hk_coeffs(k, n)).collect::<Result<_>>()?;
    let tails = hs.iter().map(|h| h.tail_norm_bound()).collect();
    let vectors: Vec<Vec<f64>> = hs.into_iter().map(|h| h.into_coeffs()).collect();
    let sys = GramSystem::from_vectors(&vectors, f.coeffs(), tails, |_| 1.0)?;
    let sol = sys.solve(RidgePolicy::default())?;
    let f_norm = sys.target_norm2.sqrt();
    Ok(ProbeReport {
        inner_products: sys.target_ip.as_slice().to_vec(),
        projection_norm: (sys.target_norm2 - sol.distance_squared).max(0.0).sqrt(),
        f_norm,
        regularization: sol.regularization,
    })
}
