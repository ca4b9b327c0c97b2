//! Truncated analytic functions and the three weighted inner products.
//!
//! A [`CoeffSeq`] stores Maclaurin coefficients `a_0..a_{N-1}`, an optional
//! eventual-constant tail (`a_n = t` for every `n >= N`) and a bound on the
//! norm of whatever the truncation left out. The [`Space`] tag fixes the
//! coefficient weights:
//!
//! | space      | weight at position `p` |
//! |------------|------------------------|
//! | `H2`       | `1`                    |
//! | `BergmanA` | `1/((p+1)(p+2))`       |
//! | `L2Omega`  | `1/(n(n+1))`, `n = p+1`|
//!
//! `L2Omega` stores the sequence entry `x(n)` at position `n-1`, so its
//! weights coincide position by position with the Bergman weights.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::compensated::{self, NeumaierSum};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    H2,
    BergmanA,
    L2Omega,
}

impl Space {
    /// Weight of the coefficient stored at position `pos`.
    #[inline]
    pub fn weight(self, pos: usize) -> f64 {
        match self {
            Space::H2 => 1.0,
            Space::BergmanA | Space::L2Omega => {
                let p = pos as f64;
                1.0 / ((p + 1.0) * (p + 2.0))
            }
        }
    }

    /// `sum_{p >= n} weight(p)`; infinite for `H2`.
    ///
    /// Both weighted spaces telescope to `1/(n+1)`. For `L2Omega` this is
    /// `sum_{m >= n+1} 1/(m(m+1))` because position `n` holds `x(n+1)`.
    pub fn tail_weight_sum(self, n: usize) -> f64 {
        match self {
            Space::H2 => f64::INFINITY,
            Space::BergmanA | Space::L2Omega => 1.0 / (n as f64 + 1.0),
        }
    }

    /// Natural index of position `pos` (sequences in `L2Omega` start at 1).
    pub fn index_of(self, pos: usize) -> usize {
        match self {
            Space::L2Omega => pos + 1,
            _ => pos,
        }
    }

    /// `sup ||f||^{-1} |f(z)|` over the space: the norm of point evaluation.
    pub fn evaluation_kernel_norm(self, r: f64) -> f64 {
        let x = r * r;
        match self {
            Space::H2 => (1.0 - x).powf(-0.5),
            // sum (n+1)(n+2) x^n = 2/(1-x)^3
            Space::BergmanA | Space::L2Omega => 2f64.sqrt() * (1.0 - x).powf(-1.5),
        }
    }
}

/// Truncated coefficient vector with an optional constant tail.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    coeffs: Vec<f64>,
    space: Space,
    tail_constant: f64,
    tail_norm_bound: f64,
}

/// Result of [`CoeffSeq::evaluate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    /// Bound on `|f(z) - value|` coming from the series' tail-norm bound.
    pub error_bound: f64,
}

impl CoeffSeq {
    pub fn new(coeffs: Vec<f64>, space: Space) -> Result<Self> {
        Self::with_tail(coeffs, space, 0.0)
    }

    pub fn with_tail(coeffs: Vec<f64>, space: Space, tail_constant: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("coefficient sequence must have N >= 1"));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::invalid(format!("coefficient {i} is not finite")));
        }
        if !tail_constant.is_finite() {
            return Err(Error::invalid("tail constant is not finite"));
        }
        if space == Space::H2 && tail_constant != 0.0 {
            return Err(Error::invalid("H2 sequences cannot carry a nonzero constant tail"));
        }
        Ok(Self { coeffs, space, tail_constant, tail_norm_bound: 0.0 })
    }

    pub fn zeros(n: usize, space: Space) -> Result<Self> {
        Self::new(vec![0.0; n], space)
    }

    /// Monomial `z^k` with `n` stored coefficients (`n > k`).
    pub fn monomial(k: usize, n: usize, space: Space) -> Result<Self> {
        if k >= n {
            return Err(Error::invalid("monomial degree must be below the length"));
        }
        let mut c = vec![0.0; n];
        c[k] = 1.0;
        Self::new(c, space)
    }

    /// Attach a bound on the space-norm of the truncated-away part.
    pub fn with_tail_bound(mut self, bound: f64) -> Result<Self> {
        if !(bound.is_finite() && bound >= 0.0) {
            return Err(Error::invalid("tail-norm bound must be finite and non-negative"));
        }
        self.tail_norm_bound = bound;
        Ok(self)
    }

    pub(crate) fn from_parts(coeffs: Vec<f64>, space: Space, tail: f64, bound: f64) -> Self {
        debug_assert!(!coeffs.is_empty());
        debug_assert!(space != Space::H2 || tail == 0.0);
        Self { coeffs, space, tail_constant: tail, tail_norm_bound: bound }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn tail_constant(&self) -> f64 {
        self.tail_constant
    }

    pub fn tail_norm_bound(&self) -> f64 {
        self.tail_norm_bound
    }

    /// True when the sequence represents its function exactly.
    pub fn is_exact(&self) -> bool {
        self.tail_norm_bound == 0.0
    }

    /// Coefficient at position `i`, reading into the constant tail.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(self.tail_constant)
    }

    /// Same function with `m >= N` stored coefficients.
    pub fn padded(&self, m: usize) -> Self {
        let mut out = self.clone();
        if m > out.coeffs.len() {
            out.coeffs.resize(m, self.tail_constant);
        }
        out
    }

    /// Relabel the space without touching coefficients.
    pub(crate) fn relabeled(&self, space: Space) -> Self {
        Self { space, ..self.clone() }
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch { left: self.space, right: other.space });
        }
        Ok(())
    }

    /// Weighted inner product, exact closed-form tail contribution included.
    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        self.check_space(other)?;
        let n = self.len().max(other.len());
        let space = self.space;
        let mut acc = NeumaierSum::new();
        for p in 0..n {
            acc.add(space.weight(p) * self.coeff(p) * other.coeff(p));
        }
        let tt = self.tail_constant * other.tail_constant;
        if tt != 0.0 {
            acc.add(tt * space.tail_weight_sum(n));
        }
        Ok(acc.value())
    }

    pub fn norm_squared(&self) -> f64 {
        // same space on both sides, cannot fail
        self.inner_product(self).expect("self inner product").max(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Evaluate at `|z| < 1` by Horner plus the geometric tail `t z^N/(1-z)`.
    pub fn evaluate(&self, z: Complex64) -> Result<Evaluation> {
        let r = z.norm();
        if !(r < 1.0) {
            return Err(Error::invalid(format!("evaluation point |z| = {r} is not inside the disk")));
        }
        let mut value = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            value = value * z + c;
        }
        if self.tail_constant != 0.0 {
            let n = self.coeffs.len() as i32;
            value += self.tail_constant * z.powi(n) / (1.0 - z);
        }
        let error_bound = if self.tail_norm_bound > 0.0 {
            self.tail_norm_bound * self.space.evaluation_kernel_norm(r)
        } else {
            0.0
        };
        Ok(Evaluation { value, error_bound })
    }

    /// `alpha * x + y`, padding the shorter operand with its tail.
    pub fn axpy(alpha: f64, x: &Self, y: &Self) -> Result<Self> {
        x.check_space(y)?;
        let n = x.len().max(y.len());
        let coeffs = (0..n).map(|p| alpha * x.coeff(p) + y.coeff(p)).collect();
        let tail = alpha * x.tail_constant + y.tail_constant;
        let bound = alpha.abs() * x.tail_norm_bound + y.tail_norm_bound;
        Ok(Self::from_parts(coeffs, x.space, tail, bound))
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self::from_parts(
            self.coeffs.iter().map(|c| alpha * c).collect(),
            self.space,
            alpha * self.tail_constant,
            alpha.abs() * self.tail_norm_bound,
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::axpy(1.0, other, self)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::axpy(-1.0, other, self)
    }

    /// Multiply by `z^by`: prepend `by` zeros, keeping every stored value.
    ///
    /// Only `H2` keeps its norm under this map; the bound is carried over
    /// unchanged, which is conservative for the decreasing weights too.
    pub fn shifted(&self, by: usize) -> Self {
        let mut coeffs = vec![0.0; by];
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_parts(coeffs, self.space, self.tail_constant, self.tail_norm_bound)
    }

    /// Weighted norm of the stored coefficients from position `from` on.
    pub fn partial_norm_from(&self, from: usize) -> f64 {
        let s = compensated::sum(
            self.coeffs
                .iter()
                .enumerate()
                .skip(from)
                .map(|(p, c)| self.space.weight(p) * c * c),
        );
        s.max(0.0).sqrt()
    }

    /// CSV export: header `index,value`, one coefficient per line.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["index", "value"])?;
        for (p, c) in self.coeffs.iter().enumerate() {
            wtr.write_record([self.space.index_of(p).to_string(), c.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// CSV import; indices must be consecutive from the space's first index.
    pub fn read_csv<R: Read>(r: R, space: Space) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "index" || &headers[1] != "value" {
            return Err(Error::Format("expected header `index,value`".into()));
        }
        let mut coeffs = Vec::new();
        for (p, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let idx: usize = rec[0]
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad index on row {}", p + 1)))?;
            if idx != space.index_of(p) {
                return Err(Error::Format(format!("index {idx} out of sequence at row {}", p + 1)));
            }
            let v: f64 = rec[1]
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad value on row {}", p + 1)))?;
            coeffs.push(v);
        }
        Self::new(coeffs, space)
    }

    pub fn to_json(&self) -> CoeffSeqJson {
        CoeffSeqJson {
            space: self.space,
            n: self.len(),
            coeffs: self.coeffs.clone(),
            tail: self.tail_constant,
            tail_bound: self.tail_norm_bound,
        }
    }

    pub fn from_json(j: CoeffSeqJson) -> Result<Self> {
        if j.n != j.coeffs.len() {
            return Err(Error::Format(format!("n = {} but {} coefficients", j.n, j.coeffs.len())));
        }
        Self::with_tail(j.coeffs, j.space, j.tail)?.with_tail_bound(j.tail_bound)
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer(w, &self.to_json())?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self> {
        Self::from_json(serde_json::from_reader(r)?)
    }
}

/// JSON layout `{"space":..., "n":..., "coeffs":[...], "tail":...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffSeqJson {
    pub space: Space,
    pub n: usize,
    pub coeffs: Vec<f64>,
    #[serde(default)]
    pub tail: f64,
    #[serde(default)]
    pub tail_bound: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(c: &[f64], space: Space) -> CoeffSeq {
        CoeffSeq::new(c.to_vec(), space).unwrap()
    }

    #[test]
    fn unit_constant_in_each_space() {
        let one_h2 = seq(&[1.0], Space::H2);
        assert_eq!(one_h2.inner_product(&one_h2).unwrap(), 1.0);
        let one_a = seq(&[1.0], Space::BergmanA);
        assert_eq!(one_a.inner_product(&one_a).unwrap(), 0.5);
    }

    #[test]
    fn all_ones_sequence_has_unit_omega_norm() {
        // sum_{n>=1} 1/(n(n+1)) = 1 by telescoping
        for n in [1usize, 2, 7, 100, 4096] {
            let ones = CoeffSeq::with_tail(vec![1.0; n], Space::L2Omega, 1.0).unwrap();
            let ip = ones.inner_product(&ones).unwrap();
            assert!((ip - 1.0).abs() < 1e-15, "N={n}: {ip}");
        }
    }

    #[test]
    fn norms() {
        assert_eq!(seq(&[3.0, 4.0], Space::H2).norm(), 5.0);
        let t = CoeffSeq::with_tail(vec![1.0], Space::BergmanA, 1.0).unwrap();
        assert!((t.norm() - 1.0).abs() < 1e-15);
        assert_eq!(seq(&[0.0; 5], Space::BergmanA).norm(), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(CoeffSeq::new(vec![], Space::H2).is_err());
        assert!(CoeffSeq::new(vec![f64::NAN], Space::H2).is_err());
        assert!(CoeffSeq::with_tail(vec![1.0], Space::H2, 1.0).is_err());
        let a = seq(&[1.0], Space::H2);
        let b = seq(&[1.0], Space::BergmanA);
        assert!(matches!(a.inner_product(&b), Err(Error::SpaceMismatch { .. })));
        assert!(CoeffSeq::axpy(1.0, &a, &b).is_err());
    }

    #[test]
    fn evaluation() {
        let f = seq(&[1.0, 1.0, 1.0], Space::H2);
        assert_eq!(f.evaluate(Complex64::new(0.0, 0.0)).unwrap().value, Complex64::new(1.0, 0.0));
        let geom = CoeffSeq::with_tail(vec![1.0; 3], Space::BergmanA, 1.0).unwrap();
        let v = geom.evaluate(Complex64::new(0.5, 0.0)).unwrap().value;
        assert!((v.re - 2.0).abs() < 1e-15 && v.im == 0.0);
        assert!(f.evaluate(Complex64::new(1.0, 0.0)).is_err());
        assert!(f.evaluate(Complex64::new(0.6, 0.8)).is_err());
    }

    #[test]
    fn log_one_minus_z_at_one_half() {
        let n = 1 << 16;
        let mut c = vec![0.0; n];
        for (j, v) in c.iter_mut().enumerate().skip(1) {
            *v = -1.0 / j as f64;
        }
        let l = seq(&c, Space::H2);
        let v = l.evaluate(Complex64::new(0.5, 0.0)).unwrap().value;
        assert!((v.re + 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn evaluation_error_bound_scales_with_tail_bound() {
        let f = seq(&[1.0], Space::H2).with_tail_bound(0.1).unwrap();
        let e = f.evaluate(Complex64::new(0.6, 0.0)).unwrap();
        assert!((e.error_bound - 0.1 / 0.8).abs() < 1e-15);
    }

    #[test]
    fn linear_primitives() {
        let e0 = seq(&[1.0, 0.0], Space::H2);
        let e1 = seq(&[0.0, 1.0], Space::H2);
        assert_eq!(CoeffSeq::axpy(2.0, &e0, &e1).unwrap().coeffs(), &[2.0, 1.0]);
        assert!(e1.scale(0.0).coeffs().iter().all(|&c| c == 0.0));
        let p = CoeffSeq::with_tail(vec![1.0], Space::BergmanA, 1.0).unwrap();
        let m = CoeffSeq::with_tail(vec![0.0, 2.0], Space::BergmanA, -1.0).unwrap();
        let s = CoeffSeq::axpy(1.0, &p, &m).unwrap();
        assert_eq!(s.tail_constant(), 0.0);
        assert_eq!(s.coeffs(), &[1.0, 3.0]);
        let sh = e0.shifted(2);
        assert_eq!(sh.coeffs(), &[0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn mixed_lengths_pad_with_tail() {
        let a = CoeffSeq::with_tail(vec![1.0], Space::BergmanA, 1.0).unwrap();
        let b = a.padded(50);
        assert_eq!(b.len(), 50);
        let ab = a.inner_product(&b).unwrap();
        assert!((ab - a.norm_squared()).abs() < 1e-15);
    }

    #[test]
    fn tail_closed_form_matches_brute_force() {
        for (space, n) in [(Space::BergmanA, 10usize), (Space::L2Omega, 37)] {
            let closed = space.tail_weight_sum(n);
            let terms = 1_000_000usize;
            // explicit 10^6 tail terms plus the closed form for the rest
            let brute = compensated::sum((n..n + terms).map(|p| space.weight(p)))
                + space.tail_weight_sum(n + terms);
            assert!(((brute - closed) / closed).abs() < 1e-10);
        }
    }

    #[test]
    fn monomials_are_orthogonal() {
        for space in [Space::H2, Space::BergmanA, Space::L2Omega] {
            for i in 0..6 {
                for j in 0..6 {
                    let a = CoeffSeq::monomial(i, 8, space).unwrap();
                    let b = CoeffSeq::monomial(j, 8, space).unwrap();
                    let ip = a.inner_product(&b).unwrap();
                    if i != j {
                        assert_eq!(ip, 0.0);
                    } else {
                        assert!(ip > 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn csv_and_json_round_trip() {
        let f = CoeffSeq::with_tail(vec![0.5, -1.25, 3.0], Space::L2Omega, 2.0)
            .unwrap()
            .with_tail_bound(1e-3)
            .unwrap();
        let mut buf = Vec::new();
        f.write_json(&mut buf).unwrap();
        let s = String::from_utf8(buf.clone()).unwrap();
        assert!(s.contains("\"space\":\"L2Omega\"") && s.contains("\"n\":3"));
        assert_eq!(CoeffSeq::read_json(&buf[..]).unwrap(), f);

        let mut csv_buf = Vec::new();
        f.write_csv(&mut csv_buf).unwrap();
        let text = String::from_utf8(csv_buf.clone()).unwrap();
        assert!(text.starts_with("index,value\n1,0.5\n"));
        let back = CoeffSeq::read_csv(&csv_buf[..], Space::L2Omega).unwrap();
        assert_eq!(back.coeffs(), f.coeffs());
        assert!(CoeffSeq::read_csv(&b"index,value\n3,1.0\n"[..], Space::H2).is_err());
    }

    fn space_strategy() -> impl Strategy<Value = Space> {
        prop_oneof![Just(Space::H2), Just(Space::BergmanA), Just(Space::L2Omega)]
    }

    fn pair_strategy() -> impl Strategy<Value = (CoeffSeq, CoeffSeq)> {
        (space_strategy(), 1usize..40, -2.0f64..2.0, -2.0f64..2.0).prop_flat_map(
            |(space, n, t1, t2)| {
                let (t1, t2) = if space == Space::H2 { (0.0, 0.0) } else { (t1, t2) };
                (
                    prop::collection::vec(-10.0f64..10.0, n),
                    prop::collection::vec(-10.0f64..10.0, 1..50),
                )
                    .prop_map(move |(a, b)| {
                        (
                            CoeffSeq::with_tail(a, space, t1).unwrap(),
                            CoeffSeq::with_tail(b, space, t2).unwrap(),
                        )
                    })
            },
        )
    }

    proptest! {
        #[test]
        fn cauchy_schwarz((f, g) in pair_strategy()) {
            let ip = f.inner_product(&g).unwrap();
            prop_assert!(ip.abs() <= f.norm() * g.norm() * (1.0 + 1e-12) + 1e-300);
        }

        #[test]
        fn parallelogram_law((f, g) in pair_strategy()) {
            let s = f.add(&g).unwrap().norm_squared();
            let d = f.sub(&g).unwrap().norm_squared();
            let rhs = 2.0 * (f.norm_squared() + g.norm_squared());
            prop_assert!((s + d - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }
    }
}
