use serde::{Deserialize, Serialize};

use crate::compensated::{self, NeumaierSum};
use crate::series::{CoeffSeq, Space};
use crate::{Error, Result};

/// Operators on coefficient sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operator {
    /// `S f = z f`
    Shift,
    /// `(I - S) f = (1 - z) f`
    IMinusShift,
    /// `W_n f(z) = (1 + z + ... + z^{n-1}) f(z^n)`
    W(u64),
    /// `T_n f(z) = f(z^n)`
    Tn(u64),
    /// `T g = ((1 - z) g)' / (1 - z)`, `H^2 -> A`
    TMap,
    /// Inverse of `T` restricted to `H^2`, `A -> H^2`
    TInv,
    /// Index shift `l^2_omega -> A`
    Psi,
    /// `T^{-1} Psi`, `l^2_omega -> H^2`
    Phi,
}

impl Operator {
    fn domain(self) -> Space {
        match self {
            Operator::TInv => Space::BergmanA,
            Operator::Psi | Operator::Phi => Space::L2Omega,
            _ => Space::H2,
        }
    }
}

/// Operator output with the prefix length on which it is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorOutput {
    pub seq: CoeffSeq,
    pub reliable_len: usize,
}

/// Window length used by the `T_inv` drift diagnostic, 1% of the input.
const DRIFT_WINDOW_FRACTION: usize = 100;
const DRIFT_TOLERANCE: f64 = 1e-3;

pub fn apply_operator(op: Operator, f: &CoeffSeq) -> Result<OperatorOutput> {
    if f.space() != op.domain() {
        return Err(Error::SpaceMismatch { left: op.domain(), right: f.space() });
    }
    let a = f.coeffs();
    let n = a.len();
    let last = a[n - 1].abs();
    let bound = f.tail_norm_bound();
    let exact = |seq: CoeffSeq| OperatorOutput { reliable_len: seq.len(), seq };
    match op {
        Operator::Shift => {
            let mut b = Vec::with_capacity(n);
            b.push(0.0);
            b.extend_from_slice(&a[..n - 1]);
            Ok(exact(CoeffSeq::from_parts(b, Space::H2, 0.0, bound + last)))
        }
        Operator::IMinusShift => {
            let mut b = Vec::with_capacity(n);
            b.push(a[0]);
            b.extend(a.windows(2).map(|w| w[1] - w[0]));
            // ||I - S|| = 2, plus the dropped -a_{N-1} z^N
            Ok(exact(CoeffSeq::from_parts(b, Space::H2, 0.0, 2.0 * bound + last)))
        }
        Operator::W(m) | Operator::Tn(m) => {
            if m == 0 {
                return Err(Error::invalid("operator index must be >= 1"));
            }
            let m = m as usize;
            let replicate = matches!(op, Operator::W(_));
            let b: Vec<f64> = (0..n)
                .map(|i| if replicate || i % m == 0 { a[i / m] } else { 0.0 })
                .collect();
            // input coefficients whose images fall at or beyond index N
            let dropped = compensated::sum((n.div_ceil(m).saturating_sub(1)..n).map(|j| {
                let copies = if replicate {
                    let lo = (j * m).max(n);
                    (j * m + m).saturating_sub(lo)
                } else {
                    usize::from(j * m >= n)
                };
                copies as f64 * a[j] * a[j]
            }));
            let gain = if replicate { (m as f64).sqrt() } else { 1.0 };
            let out_bound = dropped.sqrt() + gain * bound;
            Ok(exact(CoeffSeq::from_parts(b, Space::H2, 0.0, out_bound)))
        }
        Operator::TMap => {
            // b_j = sum_{i <= j} (i+1)(a_{i+1} - a_i), a_N = 0; constant from N-1 on
            let mut acc = NeumaierSum::new();
            let b: Vec<f64> = (0..n)
                .map(|i| {
                    let next = if i + 1 < n { a[i + 1] } else { 0.0 };
                    acc.add((i + 1) as f64 * (next - a[i]));
                    acc.value()
                })
                .collect();
            let tail = b[n - 1];
            Ok(exact(CoeffSeq::from_parts(b, Space::BergmanA, tail, bound)))
        }
        Operator::TInv => t_inverse(f),
        Operator::Psi => Ok(exact(f.relabeled(Space::BergmanA))),
        Operator::Phi => {
            let psi = f.relabeled(Space::BergmanA);
            t_inverse(&psi)
        }
    }
}

/// Unique `H^2` preimage under `T` of the sequence as stored (finite part
/// plus constant tail).
///
/// With `b_{-1} = 0`, `a_{j+1} = a_j + (b_j - b_{j-1})/(j+1)` leaves `a_0`
/// free. Past index `N` the increments vanish, so `a_j` is eventually
/// constant; `a_0` is the value that makes that constant zero. The output
/// has `N + 1` coefficients. `T` is an isometry, so the input's tail bound
/// carries over unchanged.
fn t_inverse(f: &CoeffSeq) -> Result<OperatorOutput> {
    let b = f.coeffs();
    let n = b.len();
    let mut u = Vec::with_capacity(n + 2);
    let mut acc = NeumaierSum::new();
    u.push(0.0);
    let mut prev = 0.0;
    for j in 0..=n {
        let bj = if j < n { b[j] } else { f.tail_constant() };
        acc.add((bj - prev) / (j + 1) as f64);
        u.push(acc.value());
        prev = bj;
    }
    let offset = u[n + 1];
    if !f.is_exact() {
        check_drift(&u[..n])?;
    }
    let a: Vec<f64> = u[..=n].iter().map(|x| x - offset).collect();
    Ok(OperatorOutput {
        seq: CoeffSeq::from_parts(a, Space::H2, 0.0, f.tail_norm_bound()),
        reliable_len: n,
    })
}

/// Truncated data whose unnormalized preimage keeps drifting at the end is
/// not the image of an `H^2` function at this resolution.
fn check_drift(u: &[f64]) -> Result<()> {
    let w = u.len() / DRIFT_WINDOW_FRACTION;
    if w < 2 {
        return Ok(());
    }
    let mean = |s: &[f64]| compensated::sum(s.iter().copied()) / s.len() as f64;
    let n = u.len();
    let drift = (mean(&u[n - w..]) - mean(&u[n - 2 * w..n - w])).abs();
    let scale = (compensated::sum(u.iter().map(|x| x * x)) / n as f64).sqrt().max(1.0);
    if drift > DRIFT_TOLERANCE * scale {
        return Err(Error::SelectionUnstable { drift });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::{hk_coeffs, named_function, rk_sequence, NamedFunction};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h2(c: &[f64]) -> CoeffSeq {
        CoeffSeq::new(c.to_vec(), Space::H2).unwrap()
    }

    #[test]
    fn w2_on_one() {
        let one = h2(&[1.0, 0.0, 0.0, 0.0]);
        let out = apply_operator(Operator::W(2), &one).unwrap().seq;
        assert_eq!(out.coeffs(), &[1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn t_of_minus_one_is_r() {
        let out = apply_operator(Operator::TMap, &h2(&[-1.0])).unwrap().seq;
        let r = named_function(NamedFunction::RGeom, 1).unwrap();
        assert_eq!(out, r);
        // and back
        let back = apply_operator(Operator::TInv, &r).unwrap().seq;
        assert_eq!(back.coeffs(), &[-1.0, 0.0]);
    }

    #[test]
    fn phi_of_ones_is_minus_one() {
        let out = apply_operator(Operator::Phi, &crate::hardy::ones_sequence()).unwrap().seq;
        assert_eq!(out.coeffs(), &[-1.0, 0.0]);
    }

    #[test]
    fn shift_and_t_n() {
        let f = h2(&[1.0, 2.0, 3.0]);
        let s = apply_operator(Operator::Shift, &f).unwrap().seq;
        assert_eq!(s.coeffs(), &[0.0, 1.0, 2.0]);
        assert_eq!(s.tail_norm_bound(), 3.0);
        let t = apply_operator(Operator::Tn(2), &h2(&[1.0, 2.0, 3.0, 4.0, 5.0])).unwrap().seq;
        assert_eq!(t.coeffs(), &[1.0, 0.0, 2.0, 0.0, 3.0]);
        // 4 and 5 land at indices 6 and 8
        assert!((t.tail_norm_bound() - 41f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn w_dropped_mass_is_exact() {
        let f = h2(&[1.0, 2.0, 3.0]);
        let w = apply_operator(Operator::W(2), &f).unwrap().seq;
        assert_eq!(w.coeffs(), &[1.0, 1.0, 2.0]);
        // missing: one copy of 2, two copies of 3
        assert!((w.tail_norm_bound() - (4.0f64 + 18.0).sqrt()).abs() < 1e-15);
        let full = w.norm_squared() + w.tail_norm_bound().powi(2);
        assert!((full - 2.0 * f.norm_squared()).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let a = CoeffSeq::new(vec![1.0], Space::BergmanA).unwrap();
        assert!(apply_operator(Operator::Shift, &a).is_err());
        assert!(apply_operator(Operator::Psi, &a).is_err());
        assert!(apply_operator(Operator::W(0), &h2(&[1.0])).is_err());
    }

    #[test]
    fn w1_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c: Vec<f64> = (0..257).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = h2(&c);
        assert_eq!(apply_operator(Operator::W(1), &f).unwrap().seq, f);
    }

    #[test]
    fn phi_rk_matches_hk() {
        let n = 1 << 12;
        for k in 2..=6u64 {
            let phi = apply_operator(Operator::Phi, &rk_sequence(k, n).unwrap()).unwrap().seq;
            let h = hk_coeffs(k, n + 1).unwrap();
            let cert = phi.tail_norm_bound();
            for j in 0..n / 2 {
                assert!((phi.coeffs()[j] - h.coeffs()[j]).abs() <= cert);
            }
        }
    }

    #[test]
    fn t_inverse_flags_drifting_data() {
        // preimage coefficients grow like log j: not an H^2 function
        let n = 20_000;
        let b: Vec<f64> = (0..n).map(|j| (j as f64 + 1.0).ln() * (j as f64 + 1.0)).collect();
        let f = CoeffSeq::new(b, Space::BergmanA).unwrap().with_tail_bound(1.0).unwrap();
        assert!(matches!(
            apply_operator(Operator::TInv, &f),
            Err(Error::SelectionUnstable { .. })
        ));
    }

    proptest! {
        #[test]
        fn t_map_is_an_isometry(c in prop::collection::vec(-1.0f64..1.0, 1..65)) {
            let g = h2(&c);
            let tg = apply_operator(Operator::TMap, &g).unwrap().seq;
            let (a, b) = (tg.norm(), g.norm());
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
            let back = apply_operator(Operator::TInv, &tg).unwrap().seq;
            for (i, &x) in c.iter().enumerate() {
                prop_assert!((back.coeffs()[i] - x).abs() < 1e-10);
            }
            prop_assert!(back.coeffs()[c.len()].abs() < 1e-10);
        }

        #[test]
        fn w_n_norm_bound(c in prop::collection::vec(-1.0f64..1.0, 1..200), m in 1u64..8) {
            let f = h2(&c);
            let w = apply_operator(Operator::W(m), &f).unwrap().seq;
            prop_assert!(w.norm() <= (m as f64).sqrt() * f.norm() * (1.0 + 1e-12));
        }

        #[test]
        fn i_minus_s_is_injective(c in prop::collection::vec(-1.0f64..1.0, 1..100)) {
            let f = h2(&c);
            prop_assume!(f.norm() > 0.0);
            let g = apply_operator(Operator::IMinusShift, &f).unwrap().seq;
            // nonzero polynomial times (1 - z) is nonzero; index N term counted
            prop_assert!(g.norm() > 0.0 || c[c.len() - 1] != 0.0);
        }
    }
}
