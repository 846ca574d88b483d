//! Spherical Whittaker functions on torus elements.
//!
//! For an unramified representation with Satake parameters `alpha` and a
//! cocharacter `mu`, the normalized spherical Whittaker function at
//! `diag(w^mu)` is zero unless `mu` is dominant, and otherwise
//!
//! ```text
//! delta_B^{1/2}(w^mu) * s_{mu - mu_n}(alpha) * (alpha_1 ... alpha_n)^{mu_n}
//! ```
//!
//! with `delta_B^{1/2}(w^mu) = prod_i q^{-mu_i (n + 1 - 2i) / 2}`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{ExactAlgError, HalfInt, LaurentPoly, SymbolicMatrix, RESIDUE_VAR};
use crate::localrep::{self, LocalFieldData, LocalRepError, UnramifiedRep};
use crate::symfunc::{Partition, SchurEngine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WhittakerError {
    #[error("rank mismatch: representation of rank {rank}, cocharacter of length {len}")]
    RankMismatch { rank: usize, len: usize },
    #[error(transparent)]
    Local(#[from] LocalRepError),
    #[error(transparent)]
    Alg(#[from] ExactAlgError),
}

/// `diag(w^{m_1}, ..., w^{m_n})`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusCocharacter(pub Vec<i64>);

impl TorusCocharacter {
    pub fn new(exps: Vec<i64>) -> Self {
        TorusCocharacter(exps)
    }

    pub fn zero(n: usize) -> Self {
        TorusCocharacter(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Adds `c` to every coordinate (multiplication by a central element).
    pub fn shifted(&self, c: i64) -> Self {
        TorusCocharacter(self.0.iter().map(|m| m + c).collect())
    }

    /// `(mu, 0)`: the embedding of GL(n) into GL(n+1) in the upper-left block.
    pub fn padded(&self) -> Self {
        let mut v = self.0.clone();
        v.push(0);
        TorusCocharacter(v)
    }

    pub fn reversed_negated(&self) -> Self {
        TorusCocharacter(self.0.iter().rev().map(|m| -m).collect())
    }

    /// Every dominant cocharacter of length `n` with non-negative entries and
    /// total at most `max_total`, by increasing total.
    pub fn dominant_nonnegative(n: usize, max_total: u32) -> Vec<TorusCocharacter> {
        Partition::up_to(max_total, n)
            .into_iter()
            .map(|p| TorusCocharacter(p.padded(n).into_iter().map(i64::from).collect()))
            .collect()
    }
}

impl fmt::Display for TorusCocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Exponent of `q` in `delta_B^{1/2}(w^mu)` for the Borel of GL(len mu).
pub fn modular_half_exponent(mu: &TorusCocharacter) -> HalfInt {
    let n = mu.len() as i64;
    let halves: i64 = mu.0.iter().enumerate().map(|(i, m)| -m * (n - 1 - 2 * i as i64)).sum();
    HalfInt::from_halves(halves)
}

fn q_power(e: HalfInt) -> LaurentPoly {
    LaurentPoly::var_pow(RESIDUE_VAR, e).expect("q is a valid name")
}

/// Casselman-Shalika evaluator for one representation; caches the complete
/// homogeneous polynomials across calls.
#[derive(Clone, Debug)]
pub struct SphericalWhittaker {
    rank: usize,
    central: LaurentPoly,
    schur: SchurEngine,
}

impl SphericalWhittaker {
    pub fn new(rep: &UnramifiedRep) -> Self {
        SphericalWhittaker { rank: rep.rank(), central: rep.central_value(), schur: rep.schur_engine() }
    }

    pub fn value(&mut self, mu: &TorusCocharacter) -> Result<LaurentPoly, WhittakerError> {
        if mu.len() != self.rank {
            return Err(WhittakerError::RankMismatch { rank: self.rank, len: mu.len() });
        }
        if !mu.is_dominant() {
            return Ok(LaurentPoly::zero());
        }
        let last = *mu.0.last().expect("rank >= 1");
        let parts: Vec<u32> = mu.0.iter().map(|m| (m - last) as u32).collect();
        let lambda = Partition::new(parts).expect("dominant");
        let s = self.schur.schur(&lambda);
        if s.is_zero() {
            return Ok(s);
        }
        let central = self.central.pow_i64(last).map_err(|_| LocalRepError::ZeroSatakeParameter)?;
        Ok(&(&s * &central) * &q_power(modular_half_exponent(mu)))
    }
}

pub fn spherical_value(rep: &UnramifiedRep, mu: &TorusCocharacter) -> Result<LaurentPoly, WhittakerError> {
    SphericalWhittaker::new(rep).value(mu)
}

fn check_twist(rep: &UnramifiedRep, mu: &TorusCocharacter, field: &LocalFieldData) -> Result<(), WhittakerError> {
    if rep.rank() < 2 || mu.len() + 1 != rep.rank() {
        return Err(WhittakerError::RankMismatch { rank: rep.rank(), len: mu.len() + 1 });
    }
    if field.conductor != 0 {
        return Err(LocalRepError::UnsupportedConductor(field.conductor).into());
    }
    Ok(())
}

/// `W^{(m)}(diag(w^mu, 1)) = sum_beta W(diag(w^mu, 1) u(-beta))`, the sum over
/// `beta in (m^{-m}/o)^{n-1}` placed in the last column.
///
/// Moving `u(-beta)` to the left through the torus element leaves only its
/// superdiagonal coordinate `-w^{mu_{n-1}} beta_{n-1}` visible to the
/// character, so the other `n - 2` coordinates each contribute `p^m` and the
/// last one contributes a one-coordinate character sum.
pub fn twisted_value(
    rep: &UnramifiedRep,
    mu: &TorusCocharacter,
    level: u32,
    field: &LocalFieldData,
) -> Result<LaurentPoly, WhittakerError> {
    check_twist(rep, mu, field)?;
    let n = rep.rank() as i64;
    let base = spherical_value(rep, &mu.padded())?;
    if level == 0 {
        return Ok(base);
    }
    let last = *mu.0.last().expect("n >= 2");
    let free = field.power((n - 2) * level as i64);
    let constrained = localrep::character_sum(field, level, &[last])?;
    Ok(&(&free * &constrained) * &base)
}

/// The twisted value with the constant as printed in the reduction,
/// `p^{(n-2) m}` times the support condition.
pub fn twisted_value_paper_literal(
    rep: &UnramifiedRep,
    mu: &TorusCocharacter,
    level: u32,
    field: &LocalFieldData,
) -> Result<LaurentPoly, WhittakerError> {
    check_twist(rep, mu, field)?;
    let base = spherical_value(rep, &mu.padded())?;
    let last = *mu.0.last().expect("n >= 2");
    let c = localrep::character_sum_paper_literal(field, rep.rank(), level, &[last])?;
    Ok(&c * &base)
}

const UNIFORMIZER: &str = "varpi";

/// `w_0 (g^t)^{-1} w_0` for `g = diag(w^mu)`, computed as a matrix product
/// over the Laurent ring in the uniformizer, then read back as a cocharacter.
pub fn contragredient_argument(mu: &TorusCocharacter) -> Result<TorusCocharacter, WhittakerError> {
    let n = mu.len();
    let g = SymbolicMatrix::diagonal(
        mu.0.iter()
            .map(|&m| LaurentPoly::var_pow(UNIFORMIZER, HalfInt::from_int(m)))
            .collect::<Result<_, _>>()?,
    );
    let w0 = SymbolicMatrix::permutation(&(0..n).rev().collect::<Vec<_>>());
    let conj = SymbolicMatrix::product([&w0, &g.transpose().diagonal_inverse()?, &w0])?;
    let diag = conj.as_diagonal().ok_or(ExactAlgError::NotAUnit(conj.to_string()))?;
    let exps = diag
        .iter()
        .map(|d| {
            let (m, c) = d.single_term().ok_or_else(|| ExactAlgError::NotAUnit(d.to_string()))?;
            debug_assert!(num_traits::One::is_one(c));
            m.exponent(UNIFORMIZER).as_integer().ok_or_else(|| ExactAlgError::NotAUnit(d.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TorusCocharacter(exps))
}

/// `W~(g) = W(w_0 (g^t)^{-1})` at `g = diag(w^mu)`, through the matrix
/// definition. Agrees with the spherical value of the contragredient.
pub fn contragredient_value(rep: &UnramifiedRep, mu: &TorusCocharacter) -> Result<LaurentPoly, WhittakerError> {
    if mu.len() != rep.rank() {
        return Err(WhittakerError::RankMismatch { rank: rep.rank(), len: mu.len() });
    }
    spherical_value(rep, &contragredient_argument(mu)?)
}
