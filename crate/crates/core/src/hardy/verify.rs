use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{apply_operator, hk_coeffs, rk_sequence, Operator};
use crate::compensated::NeumaierSum;
use crate::series::{CoeffSeq, Space};
use crate::{Error, Result};

/// Pass threshold for discrepancies on the reliable index range.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "identity")]
pub enum Identity {
    /// `W_m W_n = W_{mn}`
    SemigroupW { m: u64, n: u64 },
    /// `T_m T_n = T_{mn}`
    SemigroupT { m: u64, n: u64 },
    /// `T_n (I - S) = (I - S) W_n`
    Quasiconjugacy { n: u64 },
    /// `W_n h_k = h_{nk} - h_n`
    WnOnHk { n: u64, k: u64 },
    /// `Phi r_k = h_k`
    PhiMapsRkToHk { k: u64 },
    /// `||T g|| = ||g||` and `T^{-1} T g = g`
    TIsometry,
    /// `||Psi x|| = ||x||`
    PsiIsometry,
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::SemigroupW { .. } => "SemigroupW",
            Identity::SemigroupT { .. } => "SemigroupT",
            Identity::Quasiconjugacy { .. } => "Quasiconjugacy",
            Identity::WnOnHk { .. } => "WnOnHk",
            Identity::PhiMapsRkToHk { .. } => "PhiMapsRkToHk",
            Identity::TIsometry => "TIsometry",
            Identity::PsiIsometry => "PsiIsometry",
        }
    }

    fn params(&self) -> serde_json::Value {
        match *self {
            Identity::SemigroupW { m, n } | Identity::SemigroupT { m, n } => json!({"m": m, "n": n}),
            Identity::Quasiconjugacy { n } => json!({"n": n}),
            Identity::WnOnHk { n, k } => json!({"n": n, "k": k}),
            Identity::PhiMapsRkToHk { k } => json!({"k": k}),
            Identity::TIsometry | Identity::PsiIsometry => json!({}),
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            Identity::SemigroupW { m, n } | Identity::SemigroupT { m, n } => m >= 1 && n >= 1,
            Identity::Quasiconjugacy { n } => n >= 1,
            Identity::WnOnHk { n, k } => n >= 2 && k >= 2,
            Identity::PhiMapsRkToHk { k } => k >= 2,
            Identity::TIsometry | Identity::PsiIsometry => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("invalid parameters for {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: serde_json::Value,
    pub n_trunc: usize,
    pub seed: u64,
    pub sup_discrepancy: f64,
    pub weighted_discrepancy: f64,
    /// Half-open index range `[0, end)` on which truncation cannot
    /// contaminate either side.
    pub reliable_range: [usize; 2],
    /// Truncation allowance added to the tolerance (zero for exact laws).
    pub certificate: f64,
    pub pass: bool,
}

fn random_h2(n: usize, seed: u64) -> CoeffSeq {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    CoeffSeq::from_parts(c, Space::H2, 0.0, 0.0)
}

/// Sup and weighted (`H^2`) discrepancy over indices `< end`.
fn discrepancy(a: &[f64], b: &[f64], end: usize) -> (f64, f64) {
    let mut sup = 0.0f64;
    let mut acc = NeumaierSum::new();
    for (x, y) in a[..end].iter().zip(&b[..end]) {
        let d = x - y;
        sup = sup.max(d.abs());
        acc.add(d * d);
    }
    (sup, acc.value().sqrt())
}

/// Checks one identity at truncation `n_trunc`. Failures show up as
/// `pass == false`; only invalid parameters are errors.
pub fn verify_identity(id: Identity, n_trunc: usize, seed: u64) -> Result<IdentityReport> {
    id.check()?;
    if n_trunc < 2 {
        return Err(Error::invalid("N must be >= 2"));
    }
    let n = n_trunc;
    let apply = |op, f: &CoeffSeq| apply_operator(op, f).map(|o| o.seq);
    let mut certificate = 0.0;
    let (sup, weighted, end) = match id {
        Identity::SemigroupW { m, n: k } | Identity::SemigroupT { m, n: k } => {
            let (op_m, op_k, op_mk): (Operator, Operator, Operator) = match id {
                Identity::SemigroupW { .. } => (Operator::W(m), Operator::W(k), Operator::W(m * k)),
                _ => (Operator::Tn(m), Operator::Tn(k), Operator::Tn(m * k)),
            };
            let f = random_h2(n, seed);
            let lhs = apply(op_m, &apply(op_k, &f)?)?;
            let rhs = apply(op_mk, &f)?;
            let end = (n / (m * k) as usize).max(1);
            let (s, w) = discrepancy(lhs.coeffs(), rhs.coeffs(), end);
            (s, w, end)
        }
        Identity::Quasiconjugacy { n: k } => {
            let f = random_h2(n, seed);
            let lhs = apply(Operator::Tn(k), &apply(Operator::IMinusShift, &f)?)?;
            let rhs = apply(Operator::IMinusShift, &apply(Operator::W(k), &f)?)?;
            let end = (n / k as usize).max(1);
            let (s, w) = discrepancy(lhs.coeffs(), rhs.coeffs(), end);
            (s, w, end)
        }
        Identity::WnOnHk { n: m, k } => {
            let lhs = apply(Operator::W(m), &hk_coeffs(k, n)?)?;
            let rhs = hk_coeffs(m * k, n)?.sub(&hk_coeffs(m, n)?)?;
            let (s, w) = discrepancy(lhs.coeffs(), rhs.coeffs(), n);
            (s, w, n)
        }
        Identity::PhiMapsRkToHk { k } => {
            let phi = apply(Operator::Phi, &rk_sequence(k, n)?)?;
            let h = hk_coeffs(k, n)?;
            certificate = phi.tail_norm_bound() + h.tail_norm_bound();
            let end = n / 2;
            let (s, w) = discrepancy(phi.coeffs(), h.coeffs(), end);
            (s, w, end)
        }
        Identity::TIsometry => {
            let g = random_h2(n, seed);
            let tg = apply(Operator::TMap, &g)?;
            let back = apply(Operator::TInv, &tg)?;
            let (s, _) = discrepancy(back.coeffs(), g.coeffs(), n);
            let gn = g.norm();
            let w = (tg.norm() - gn).abs() / gn.max(f64::MIN_POSITIVE);
            (s.max(back.coeffs()[n].abs()), w, n)
        }
        Identity::PsiIsometry => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = CoeffSeq::new(c, Space::L2Omega)?;
            let y = apply(Operator::Psi, &x)?;
            let (s, _) = discrepancy(x.coeffs(), y.coeffs(), n);
            let w = (y.norm() - x.norm()).abs();
            (s, w, n)
        }
    };
    let limit = IDENTITY_TOLERANCE + certificate;
    Ok(IdentityReport {
        identity: id.name().to_string(),
        params: id.params(),
        n_trunc: n,
        seed,
        sup_discrepancy: sup,
        weighted_discrepancy: weighted,
        reliable_range: [0, end],
        certificate,
        pass: sup <= limit && weighted <= limit,
    })
}

/// The default grid: every law over `{2, 3, 4, 6}`, `Phi r_k` for
/// `k <= 12`, and both isometries.
pub fn default_identities() -> Vec<Identity> {
    let grid = [2u64, 3, 4, 6];
    let mut ids = Vec::new();
    for &m in &grid {
        for &n in &grid {
            ids.push(Identity::SemigroupW { m, n });
            ids.push(Identity::SemigroupT { m, n });
            ids.push(Identity::WnOnHk { n: m, k: n });
        }
        ids.push(Identity::Quasiconjugacy { n: m });
    }
    ids.extend((2..=12).map(|k| Identity::PhiMapsRkToHk { k }));
    ids.push(Identity::TIsometry);
    ids.push(Identity::PsiIsometry);
    ids
}

/// Runs [`default_identities`] in parallel; output order matches the grid.
/// Cell `i` uses seed `seed + i`.
pub fn verify_all(n_trunc: usize, seed: u64) -> Result<Vec<IdentityReport>> {
    default_identities()
        .into_par_iter()
        .enumerate()
        .map(|(i, id)| verify_identity(id, n_trunc, seed.wrapping_add(i as u64)))
        .collect()
}
