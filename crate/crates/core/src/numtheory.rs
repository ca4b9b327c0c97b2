//! Sieved arithmetic functions and their partial sums.
//!
//! `divisor_count` is the number of divisors (often written `d(n)`), not the
//! sum of divisors.
//!
//! # Cache file layout
//!
//! All integers little-endian:
//!
//! ```text
//! offset  size        field
//! 0       4           magic  b"BDNT"
//! 4       4           format version (u32, currently 1)
//! 8       8           limit M (u64)
//! 16      (M+1)       mobius[0..=M]            i8
//! ..      4(M+1)      divisor_count[0..=M]     u32
//! ..      8(M+1)      harmonic[0..=M]          f64
//! ..      8(M+1)      mertens_over_k[0..=M]    f64
//! ..      8(M+1)      mertens_logk_over_k[0..=M] f64
//! ```

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::compensated::{self, NeumaierSum};
use crate::{Error, Result, EULER_GAMMA};

pub const MAX_LIMIT: usize = 100_000_000;

const MAGIC: &[u8; 4] = b"BDNT";
const FORMAT_VERSION: u32 = 1;
const SEGMENT: usize = 1 << 16;

/// Environment variable naming the directory for cached tables.
pub const CACHE_DIR_ENV: &str = "BDLAB_CACHE_DIR";

/// Arithmetic tables for `0..=limit`; entry 0 is a placeholder
/// (`mu(0) = d(0) = 0`, `H(0) = 0`, empty Mertens sums).
#[derive(Debug, Clone, PartialEq)]
pub struct NtTables {
    limit: usize,
    mobius: Vec<i8>,
    divisor_count: Vec<u32>,
    harmonic: Vec<f64>,
    mertens_over_k: Vec<f64>,
    mertens_logk_over_k: Vec<f64>,
}

fn check_limit(limit: usize) -> Result<()> {
    if !(1..=MAX_LIMIT).contains(&limit) {
        return Err(Error::invalid(format!("sieve limit {limit} outside 1..={MAX_LIMIT}")));
    }
    Ok(())
}

impl NtTables {
    /// Linear sieve for mu and d, then cumulative sums.
    pub fn sieve(limit: usize) -> Result<Self> {
        check_limit(limit)?;
        let m = limit;
        let mut mobius = vec![0i8; m + 1];
        let mut divisor_count = vec![0u32; m + 1];
        // exponent of the least prime factor
        let mut lp_exp = vec![0u8; m + 1];
        let mut is_composite = vec![false; m + 1];
        let mut primes: Vec<usize> = Vec::new();
        mobius[1] = 1;
        divisor_count[1] = 1;
        for i in 2..=m {
            if !is_composite[i] {
                primes.push(i);
                mobius[i] = -1;
                divisor_count[i] = 2;
                lp_exp[i] = 1;
            }
            for &p in &primes {
                let ip = i * p;
                if ip > m {
                    break;
                }
                is_composite[ip] = true;
                if i % p == 0 {
                    let e = lp_exp[i] as u32;
                    mobius[ip] = 0;
                    lp_exp[ip] = lp_exp[i] + 1;
                    divisor_count[ip] = divisor_count[i] / (e + 1) * (e + 2);
                    break;
                }
                mobius[ip] = -mobius[i];
                lp_exp[ip] = 1;
                divisor_count[ip] = divisor_count[i] * 2;
            }
        }
        Ok(Self::from_arrays(limit, mobius, divisor_count))
    }

    /// Segmented sieve over `threads` workers; tables are bit-identical to
    /// [`NtTables::sieve`] because the floating-point prefix sums are still
    /// taken sequentially.
    pub fn sieve_parallel(limit: usize, threads: usize) -> Result<Self> {
        check_limit(limit)?;
        let base = small_primes(isqrt(limit));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
        let starts: Vec<usize> = (0..=limit).step_by(SEGMENT).collect();
        let segments: Vec<(Vec<i8>, Vec<u32>)> = pool.install(|| {
            starts
                .par_iter()
                .map(|&lo| sieve_segment(lo, (lo + SEGMENT).min(limit + 1), &base))
                .collect()
        });
        let mut mobius = Vec::with_capacity(limit + 1);
        let mut divisor_count = Vec::with_capacity(limit + 1);
        for (mu, d) in segments {
            mobius.extend(mu);
            divisor_count.extend(d);
        }
        Ok(Self::from_arrays(limit, mobius, divisor_count))
    }

    fn from_arrays(limit: usize, mobius: Vec<i8>, divisor_count: Vec<u32>) -> Self {
        let mut harmonic = vec![0.0; limit + 1];
        let mut m1 = vec![0.0; limit + 1];
        let mut m2 = vec![0.0; limit + 1];
        let (mut h, mut s1, mut s2) = (NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new());
        for n in 1..=limit {
            let inv = 1.0 / n as f64;
            h.add(inv);
            harmonic[n] = h.value();
            let mu = mobius[n];
            if mu != 0 {
                let t = mu as f64 * inv;
                s1.add(t);
                s2.add(t * (n as f64).ln());
            }
            m1[n] = s1.value();
            m2[n] = s2.value();
        }
        Self { limit, mobius, divisor_count, harmonic, mertens_over_k: m1, mertens_logk_over_k: m2 }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn mobius(&self, n: usize) -> i8 {
        self.mobius[n]
    }

    pub fn divisor_count(&self, n: usize) -> u32 {
        self.divisor_count[n]
    }

    /// `H(n) = sum_{j <= n} 1/j`, `H(0) = 0`.
    pub fn harmonic(&self, n: usize) -> f64 {
        self.harmonic[n]
    }

    /// `M1(n) = sum_{k <= n} mu(k)/k`.
    pub fn mertens_over_k(&self, n: usize) -> f64 {
        self.mertens_over_k[n]
    }

    /// `M2(n) = sum_{k <= n} mu(k) log k / k`.
    pub fn mertens_logk_over_k(&self, n: usize) -> f64 {
        self.mertens_logk_over_k[n]
    }

    pub fn mobius_slice(&self) -> &[i8] {
        &self.mobius
    }

    pub fn divisor_count_slice(&self) -> &[u32] {
        &self.divisor_count
    }

    /// `D_n(j) = sum_{d | j, d <= n} mu(d)` for `1 <= j < len`; entry 0 is 0.
    ///
    /// Costs `O(len log n)` by walking the multiples of each squarefree `d`.
    pub fn divisor_restricted_mobius_sums(&self, n: usize, len: usize) -> Result<Vec<i32>> {
        if n > self.limit {
            return Err(Error::invalid(format!("cutoff {n} exceeds table limit {}", self.limit)));
        }
        let mut out = vec![0i32; len];
        for d in 1..=n.min(len.saturating_sub(1)) {
            let mu = self.mobius[d] as i32;
            if mu == 0 {
                continue;
            }
            for j in (d..len).step_by(d) {
                out[j] += mu;
            }
        }
        Ok(out)
    }

    /// Upper bound for `sum_{j > n} d(j)^2 / j^2`.
    ///
    /// The part `n < j <= limit` is summed exactly. Beyond the table the
    /// remainder is bounded through `d(j)^2 <= d_4(j)` and
    /// `sum_{j <= x} d_4(j) <= x (1 + log x)^3`; partial summation then gives
    /// `2 P(1 + log J)/J - S(J)/J^2` with `P(y) = y^3 + 3y^2 + 6y + 6` and
    /// `S(J) = sum_{j <= J} d(j)^2`.
    pub fn sigma_square_tail(&self, n: usize) -> Result<SigmaSquareTail> {
        if n > self.limit {
            return Err(Error::invalid(format!("cutoff {n} exceeds table limit {}", self.limit)));
        }
        let sq = |j: usize| {
            let d = self.divisor_count[j] as f64;
            d * d
        };
        let partial = compensated::sum((n + 1..=self.limit).map(|j| sq(j) / (j as f64 * j as f64)));
        let s_j = compensated::sum((1..=self.limit).map(sq));
        let j = self.limit as f64;
        let y = 1.0 + j.ln();
        let poly = y * y * y + 3.0 * y * y + 6.0 * y + 6.0;
        let remainder_bound = (2.0 * poly / j - s_j / (j * j)).max(0.0);
        Ok(SigmaSquareTail { n, cutoff: self.limit, partial, remainder_bound })
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.limit as u64).to_le_bytes())?;
        let mu: Vec<u8> = self.mobius.iter().map(|&m| m as u8).collect();
        w.write_all(&mu)?;
        for &d in &self.divisor_count {
            w.write_all(&d.to_le_bytes())?;
        }
        for arr in [&self.harmonic, &self.mertens_over_k, &self.mertens_logk_over_k] {
            for &v in arr.iter() {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(fs::File::open(path)?);
        let mut head = [0u8; 16];
        r.read_exact(&mut head)?;
        if &head[0..4] != MAGIC {
            return Err(Error::Format("not a table cache file".into()));
        }
        let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported cache version {version}")));
        }
        let limit = u64::from_le_bytes(head[8..16].try_into().unwrap()) as usize;
        check_limit(limit)?;
        let len = limit + 1;
        let mut mu = vec![0u8; len];
        r.read_exact(&mut mu)?;
        let mobius: Vec<i8> = mu.into_iter().map(|b| b as i8).collect();
        let mut raw = vec![0u8; 4 * len];
        r.read_exact(&mut raw)?;
        let divisor_count = raw.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
        let mut read_f64s = || -> Result<Vec<f64>> {
            let mut raw = vec![0u8; 8 * len];
            r.read_exact(&mut raw)?;
            Ok(raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
        };
        let harmonic = read_f64s()?;
        let mertens_over_k = read_f64s()?;
        let mertens_logk_over_k = read_f64s()?;
        Ok(Self { limit, mobius, divisor_count, harmonic, mertens_over_k, mertens_logk_over_k })
    }

    /// Read `nt-<limit>.bin` from `dir` if present, otherwise sieve and try
    /// to write it there. Any table with a larger limit is not reused.
    pub fn load_or_build(limit: usize, dir: Option<&Path>) -> Result<Self> {
        let Some(dir) = dir else {
            return Self::sieve(limit);
        };
        let path = cache_path(dir, limit);
        if path.exists() {
            if let Ok(t) = Self::read_cache(&path) {
                if t.limit == limit {
                    return Ok(t);
                }
            }
        }
        let t = Self::sieve(limit)?;
        fs::create_dir_all(dir)?;
        t.write_cache(&path)?;
        Ok(t)
    }

    /// Plain-text dump, one row per `n` in `1..=limit`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["n", "mobius", "divisor_count", "harmonic", "mertens_over_k", "mertens_logk_over_k"])?;
        for n in 1..=self.limit {
            wtr.write_record([
                n.to_string(),
                self.mobius[n].to_string(),
                self.divisor_count[n].to_string(),
                self.harmonic[n].to_string(),
                self.mertens_over_k[n].to_string(),
                self.mertens_logk_over_k[n].to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn cache_path(dir: &Path, limit: usize) -> PathBuf {
    dir.join(format!("nt-{limit}.bin"))
}

/// Split of the `d(j)^2/j^2` tail into the sieved part and the explicit
/// remainder bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaSquareTail {
    pub n: usize,
    pub cutoff: usize,
    pub partial: f64,
    pub remainder_bound: f64,
}

impl SigmaSquareTail {
    pub fn total(&self) -> f64 {
        self.partial + self.remainder_bound
    }
}

/// Partial sums `(M1(M), M2(M))` at the table limit.
///
/// By the prime number theorem these tend to `0` and `-1`; convergence is
/// slow and no rate is implied.
pub fn mertens_limits_check(tables: &NtTables) -> (f64, f64) {
    (tables.mertens_over_k(tables.limit), tables.mertens_logk_over_k(tables.limit))
}

/// `[k | n]`, with every `k` dividing 0.
pub fn divides_indicator(k: u64, n: u64) -> Result<u8> {
    if k == 0 {
        return Err(Error::invalid("divisor k must be >= 1"));
    }
    Ok(u8::from(n % k == 0))
}

/// `H(n) - log n - gamma`; positive and below `1/n`.
pub fn harmonic_asymptotic_residual(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let h = compensated::sum((1..=n).rev().map(|j| 1.0 / j as f64));
    Ok(h - (n as f64).ln() - EULER_GAMMA)
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn small_primes(limit: usize) -> Vec<usize> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i);
            for m in (i * i..=limit).step_by(i) {
                composite[m] = true;
            }
        }
    }
    out
}

fn sieve_segment(lo: usize, hi: usize, primes: &[usize]) -> (Vec<i8>, Vec<u32>) {
    let len = hi - lo;
    let mut rem: Vec<usize> = (lo..hi).collect();
    let mut mu = vec![1i8; len];
    let mut d = vec![1u32; len];
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let first = lo.div_ceil(p).max(1) * p;
        for x in (first..hi).step_by(p) {
            let i = x - lo;
            let mut e = 0u32;
            while rem[i] % p == 0 {
                rem[i] /= p;
                e += 1;
            }
            mu[i] = if e >= 2 { 0 } else { -mu[i] };
            d[i] *= e + 1;
        }
    }
    for i in 0..len {
        let x = lo + i;
        if x == 0 {
            mu[i] = 0;
            d[i] = 0;
        } else if rem[i] > 1 {
            // one prime factor above sqrt(x) remains
            mu[i] = -mu[i];
            d[i] *= 2;
        }
    }
    (mu, d)
}
