//! Local representation data at a non-archimedean place: residue field,
//! unramified representations through their Satake parameters, Hecke
//! eigenvalues, contragredients, congruence-subgroup indices and additive
//! character sums.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{rational, ExactAlgError, HalfInt, LaurentPoly, Rational, RESIDUE_VAR};
use crate::symfunc::SchurEngine;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalRepError {
    #[error("residue cardinality must be at least 2, got {0}")]
    BadResidueCardinality(u64),
    #[error("Satake parameter {0:?} is not a single term")]
    BadSatakeParameter(String),
    #[error("a Satake parameter is zero")]
    ZeroSatakeParameter,
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("product of Satake parameters is {0}, not 1")]
    CentralCharacterNotTrivial(String),
    #[error("additive character conductor {0} is not supported (need 0)")]
    UnsupportedConductor(u32),
    #[error("enumeration of {0} matrices exceeds the bound 2^24")]
    EnumerationTooLarge(String),
    #[error("brute-force enumeration needs a prime residue cardinality, got {0}")]
    UnsupportedModulus(u64),
    #[error("this operation needs a numeric residue cardinality")]
    NeedsNumericResidue,
    #[error("rank must be at least {min}, got {got}")]
    RankTooSmall { min: usize, got: usize },
    #[error(transparent)]
    Alg(#[from] ExactAlgError),
}

/// Residue cardinality: a concrete prime power or the symbol `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Residue {
    Symbolic,
    Numeric(u64),
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residue::Symbolic => write!(f, "{RESIDUE_VAR}"),
            Residue::Numeric(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFieldData {
    pub residue: Residue,
    /// Conductor exponent of the additive character.
    pub conductor: u32,
}

impl Default for LocalFieldData {
    fn default() -> Self {
        Self::symbolic()
    }
}

impl LocalFieldData {
    pub fn symbolic() -> Self {
        LocalFieldData { residue: Residue::Symbolic, conductor: 0 }
    }

    pub fn numeric(p: u64) -> Result<Self, LocalRepError> {
        if p < 2 {
            return Err(LocalRepError::BadResidueCardinality(p));
        }
        Ok(LocalFieldData { residue: Residue::Numeric(p), conductor: 0 })
    }

    pub fn with_conductor(self, conductor: u32) -> Self {
        LocalFieldData { conductor, ..self }
    }

    /// `p^k` as a constant, or `q^k` when symbolic.
    pub fn power(&self, k: i64) -> LaurentPoly {
        match self.residue {
            Residue::Symbolic => LaurentPoly::var_pow(RESIDUE_VAR, HalfInt::from_int(k)).expect("q is a valid name"),
            Residue::Numeric(p) => LaurentPoly::constant(rational::pow(&rational::int(p as i64), k).expect("p >= 2")),
        }
    }

    fn require_standard_character(&self) -> Result<(), LocalRepError> {
        if self.conductor != 0 {
            return Err(LocalRepError::UnsupportedConductor(self.conductor));
        }
        Ok(())
    }
}

fn check_param(p: &LaurentPoly) -> Result<(), LocalRepError> {
    if p.is_zero() || p.is_unit() {
        Ok(())
    } else {
        Err(LocalRepError::BadSatakeParameter(p.to_string()))
    }
}

/// An unramified representation of GL(n), recorded by its Satake parameters.
///
/// Each parameter is a single Laurent term: a symbol such as `a1`, its
/// inverse, or an exact rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RepJson", into = "RepJson")]
pub struct UnramifiedRep {
    satake: Vec<LaurentPoly>,
    trivial_central: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct RepJson {
    rank: usize,
    satake: Vec<String>,
    #[serde(default)]
    trivial_central: bool,
}

impl TryFrom<RepJson> for UnramifiedRep {
    type Error = String;
    fn try_from(j: RepJson) -> Result<Self, String> {
        if j.rank != j.satake.len() {
            return Err(format!("rank {} but {} Satake parameters", j.rank, j.satake.len()));
        }
        let params = j
            .satake
            .iter()
            .map(|s| s.parse::<LaurentPoly>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        UnramifiedRep::new(params, j.trivial_central).map_err(|e| e.to_string())
    }
}

impl From<UnramifiedRep> for RepJson {
    fn from(r: UnramifiedRep) -> Self {
        RepJson {
            rank: r.rank(),
            satake: r.satake.iter().map(|p| p.to_string()).collect(),
            trivial_central: r.trivial_central,
        }
    }
}

impl UnramifiedRep {
    /// Validates the parameters. With `trivial_central` and all-numeric
    /// parameters the product must be 1; symbolic parameters only record the
    /// flag (see [`UnramifiedRep::impose_trivial_central`]).
    pub fn new(satake: Vec<LaurentPoly>, trivial_central: bool) -> Result<Self, LocalRepError> {
        if satake.is_empty() {
            return Err(LocalRepError::ZeroRank);
        }
        satake.iter().try_for_each(check_param)?;
        let rep = UnramifiedRep { satake, trivial_central };
        if trivial_central && rep.is_numeric() {
            let prod = rep.central_value();
            if !prod.is_one() {
                return Err(LocalRepError::CentralCharacterNotTrivial(prod.to_string()));
            }
        }
        Ok(rep)
    }

    /// Parameters `prefix1, ..., prefix{n}`.
    pub fn symbolic(prefix: &str, rank: usize) -> Result<Self, LocalRepError> {
        let params = (1..=rank)
            .map(|i| LaurentPoly::var(&format!("{prefix}{i}")))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(params, false)
    }

    pub fn numeric(values: Vec<Rational>, trivial_central: bool) -> Result<Self, LocalRepError> {
        Self::new(values.into_iter().map(LaurentPoly::constant).collect(), trivial_central)
    }

    pub fn rank(&self) -> usize {
        self.satake.len()
    }

    pub fn satake(&self) -> &[LaurentPoly] {
        &self.satake
    }

    pub fn trivial_central(&self) -> bool {
        self.trivial_central
    }

    pub fn with_trivial_central(mut self, flag: bool) -> Result<Self, LocalRepError> {
        self.trivial_central = flag;
        Self::new(self.satake, flag)
    }

    pub fn is_numeric(&self) -> bool {
        self.satake.iter().all(|p| p.constant_value().is_some())
    }

    /// `prod_i alpha_i`, the central character at a uniformizer.
    pub fn central_value(&self) -> LaurentPoly {
        self.satake.iter().cloned().product()
    }

    pub fn schur_engine(&self) -> SchurEngine {
        SchurEngine::new(self.satake.clone())
    }

    /// The substitution realizing trivial central character on symbolic
    /// data: the last parameter, when it is a bare symbol or its inverse, is
    /// solved for from `prod alpha_i = 1`.
    pub fn central_substitution(&self) -> Option<(String, LaurentPoly)> {
        let (last, rest) = self.satake.split_last()?;
        let (m, c) = last.single_term()?;
        let mut factors = m.iter();
        let (var, e) = factors.next()?;
        if factors.next().is_some() || !c.is_one() {
            return None;
        }
        let others: LaurentPoly = rest.iter().cloned().product();
        if others.mentions(var) {
            return None;
        }
        // var^e * others = 1
        let value = match e.as_integer()? {
            1 => others.inverse_unit().ok()?,
            -1 => others,
            _ => return None,
        };
        Some((var.to_string(), value))
    }

    /// Applies [`UnramifiedRep::central_substitution`] to `p` when the
    /// representation is flagged as having trivial central character.
    pub fn impose_trivial_central(&self, p: &LaurentPoly) -> Result<LaurentPoly, LocalRepError> {
        if !self.trivial_central {
            return Ok(p.clone());
        }
        match self.central_substitution() {
            Some((var, value)) => Ok(p.substitute(&var, &value)?),
            None => Ok(p.clone()),
        }
    }

    /// Names of every symbol occurring in the parameters.
    pub fn symbols(&self) -> std::collections::BTreeSet<String> {
        self.satake.iter().flat_map(|p| p.variables()).map(|v| v.to_string()).collect()
    }
}

impl fmt::Display for UnramifiedRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.satake.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", ps.join(", "))
    }
}

/// Normalization of Hecke eigenvalues.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HeckeNormalization {
    /// `lambda(w^k) = h_k(alpha)`, the Whittaker-normalized eigenvalue.
    #[default]
    Analytic,
    /// The integral normalization, `q^{k(n-1)/2} h_k(alpha)`.
    Classical,
}

pub fn hecke_eigenvalue(rep: &UnramifiedRep, k: u32) -> LaurentPoly {
    rep.schur_engine().h(k as i64)
}

pub fn hecke_eigenvalue_with(rep: &UnramifiedRep, k: u32, norm: HeckeNormalization) -> LaurentPoly {
    let lambda = hecke_eigenvalue(rep, k);
    match norm {
        HeckeNormalization::Analytic => lambda,
        HeckeNormalization::Classical => {
            let e = HalfInt::from_halves(k as i64 * (rep.rank() as i64 - 1));
            &lambda * &LaurentPoly::var_pow(RESIDUE_VAR, e).expect("q is a valid name")
        }
    }
}

/// Inverts and reverses the Satake parameters.
pub fn contragredient(rep: &UnramifiedRep) -> Result<UnramifiedRep, LocalRepError> {
    let inv = rep
        .satake
        .iter()
        .rev()
        .map(|p| p.inverse_unit().map_err(|_| LocalRepError::ZeroSatakeParameter))
        .collect::<Result<Vec<_>, _>>()?;
    UnramifiedRep::new(inv, rep.trivial_central)
}

/// `[K : K_0(w^m)]` in GL(n) over a residue field of size `p`:
/// 1 for `m = 0`, otherwise `p^{(n-1)(m-1)} (p^n - 1)/(p - 1)`.
pub fn congruence_index(n: usize, p: u64, m: u32) -> BigUint {
    if m == 0 {
        return BigUint::one();
    }
    let p = BigUint::from(p);
    let projective_points: BigUint = (0..n as u32).map(|i| p.pow(i)).sum();
    p.pow((n as u32 - 1) * (m - 1)) * projective_points
}

/// The same index as a polynomial in the residue cardinality.
pub fn congruence_index_poly(n: usize, field: &LocalFieldData, m: u32) -> LaurentPoly {
    if m == 0 {
        return LaurentPoly::one();
    }
    let points: LaurentPoly = (0..n as i64).map(|i| field.power(i)).sum();
    &field.power((n as i64 - 1) * (m as i64 - 1)) * &points
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn det_mod(m: &[i64], n: usize, modulus: i64) -> i64 {
    match n {
        1 => m[0].rem_euclid(modulus),
        2 => (m[0] * m[3] - m[1] * m[2]).rem_euclid(modulus),
        _ => {
            let mut acc = 0i64;
            for c in 0..n {
                let minor: Vec<i64> = (1..n)
                    .flat_map(|r| (0..n).filter(move |&cc| cc != c).map(move |cc| (r, cc)))
                    .map(|(r, cc)| m[r * n + cc])
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                acc = (acc + sign * m[c] * det_mod(&minor, n - 1, modulus)).rem_euclid(modulus);
            }
            acc
        }
    }
}

const ENUMERATION_BOUND: u64 = 1 << 24;

/// Counts GL(n, Z/p^m) and its subgroup whose bottom row is `(0, ..., 0, *)`
/// modulo `p^m`, and returns the quotient of the two orders. When the full
/// matrix enumeration exceeds 2^24 cells the count falls back to
/// [`congruence_index_by_rows`].
pub fn congruence_index_bruteforce(n: usize, p: u64, m: u32) -> Result<BigUint, LocalRepError> {
    if n == 0 {
        return Err(LocalRepError::ZeroRank);
    }
    if !is_prime(p) {
        return Err(LocalRepError::UnsupportedModulus(p));
    }
    let modulus = p.checked_pow(m).ok_or_else(|| LocalRepError::EnumerationTooLarge(format!("{p}^{m}")))?;
    if m == 0 {
        return Ok(BigUint::one());
    }
    let cells = (n * n) as u32;
    let Some(total) = modulus.checked_pow(cells).filter(|&t| t <= ENUMERATION_BOUND) else {
        return congruence_index_by_rows(n, p, m);
    };
    let (group, sub) = (0..total)
        .into_par_iter()
        .map(|mut code| {
            let mut entries = vec![0i64; n * n];
            for e in entries.iter_mut() {
                *e = (code % modulus) as i64;
                code /= modulus;
            }
            let invertible = det_mod(&entries, n, modulus as i64) % p as i64 != 0;
            let in_sub = invertible && entries[(n - 1) * n..n * n - 1].iter().all(|&x| x == 0);
            (invertible as u64, in_sub as u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    debug_assert!(group % sub == 0);
    Ok(BigUint::from(group / sub))
}

/// Orbit count: `K_0(w^m)` is the stabilizer of the line through the last
/// basis row vector, so the index is the number of primitive row vectors
/// modulo `p^m` divided by the number of units.
pub fn congruence_index_by_rows(n: usize, p: u64, m: u32) -> Result<BigUint, LocalRepError> {
    if n == 0 {
        return Err(LocalRepError::ZeroRank);
    }
    if !is_prime(p) {
        return Err(LocalRepError::UnsupportedModulus(p));
    }
    if m == 0 {
        return Ok(BigUint::one());
    }
    let too_large = || LocalRepError::EnumerationTooLarge(format!("({p}^{m})^{n}"));
    let modulus = p.checked_pow(m).ok_or_else(too_large)?;
    let total = modulus
        .checked_pow(n as u32)
        .filter(|&t| t <= ENUMERATION_BOUND)
        .ok_or_else(too_large)?;
    let primitive = (0..total)
        .into_par_iter()
        .filter(|&code| {
            let mut c = code;
            (0..n).any(|_| {
                let x = c % modulus;
                c /= modulus;
                x % p != 0
            })
        })
        .count() as u64;
    let units = (1..modulus).filter(|u| u % p != 0).count() as u64;
    debug_assert!(primitive.is_multiple_of(units));
    Ok(BigUint::from(primitive / units))
}

/// `sum_{beta in (m^{-level}/o)^r} psi(sum beta_i h_i)` for elements `h_i`
/// of the given valuations, with `psi` of conductor 0.
///
/// By orthogonality each coordinate contributes `p^level` when
/// `v(h_i) >= level` and 0 otherwise.
pub fn character_sum(field: &LocalFieldData, level: u32, valuations: &[i64]) -> Result<LaurentPoly, LocalRepError> {
    field.require_standard_character()?;
    if valuations.iter().all(|&v| v >= level as i64) {
        Ok(field.power(valuations.len() as i64 * level as i64))
    } else {
        Ok(LaurentPoly::zero())
    }
}

/// The constant printed in the reduction of the twisted Whittaker vector:
/// `p^{(n-2) m}` times the same support condition. Kept for side-by-side
/// reporting against [`character_sum`].
pub fn character_sum_paper_literal(
    field: &LocalFieldData,
    n: usize,
    level: u32,
    valuations: &[i64],
) -> Result<LaurentPoly, LocalRepError> {
    field.require_standard_character()?;
    if n < 2 {
        return Err(LocalRepError::RankTooSmall { min: 2, got: n });
    }
    if valuations.iter().all(|&v| v >= level as i64) {
        Ok(field.power((n as i64 - 2) * level as i64))
    } else {
        Ok(LaurentPoly::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{frac, int};

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn hecke_examples() {
        let rep = UnramifiedRep::symbolic("a", 2).unwrap().with_trivial_central(true).unwrap();
        assert_eq!(hecke_eigenvalue(&rep, 0), p("1"));
        assert_eq!(hecke_eigenvalue(&rep, 1), p("a1 + a2"));
        assert_eq!(hecke_eigenvalue(&rep, 2), p("a1^2 + a1*a2 + a2^2"));
        let rel = &hecke_eigenvalue(&rep, 1).pow(2) - &hecke_eigenvalue(&rep, 2);
        assert_eq!(rel, p("a1*a2"));
        assert_eq!(rep.impose_trivial_central(&rel).unwrap(), p("1"));
    }

    #[test]
    fn classical_normalization_carries_q_power() {
        let rep = UnramifiedRep::symbolic("a", 3).unwrap();
        assert_eq!(
            hecke_eigenvalue_with(&rep, 1, HeckeNormalization::Classical),
            p("q*a1 + q*a2 + q*a3")
        );
    }

    #[test]
    fn contragredient_examples() {
        let num = UnramifiedRep::numeric(vec![int(2), frac(1, 2)], true).unwrap();
        let c = contragredient(&num).unwrap();
        assert_eq!(c.satake(), &[p("2"), p("1/2")]);
        let sym = UnramifiedRep::symbolic("a", 2).unwrap();
        let c = contragredient(&sym).unwrap();
        assert_eq!(c.satake(), &[p("a2^(-1)"), p("a1^(-1)")]);
        assert_eq!(contragredient(&c).unwrap(), sym);
        let num3 = UnramifiedRep::numeric(vec![int(3), frac(1, 2), frac(2, 3)], true).unwrap();
        assert!(contragredient(&num3).unwrap().central_value().is_one());
        let zero = UnramifiedRep::numeric(vec![int(0), int(1)], false).unwrap();
        assert_eq!(contragredient(&zero), Err(LocalRepError::ZeroSatakeParameter));
    }

    #[test]
    fn trivial_central_is_enforced_on_numbers() {
        assert!(UnramifiedRep::numeric(vec![int(2), int(3)], true).is_err());
        assert!(UnramifiedRep::new(vec![p("a + b")], false).is_err());
    }

    #[test]
    fn json_interface() {
        let r: UnramifiedRep = serde_json::from_str(r#"{"rank":2,"satake":["2","1/2"],"trivialCentral":true}"#).unwrap();
        assert_eq!(r.satake(), &[p("2"), p("1/2")]);
        let s: UnramifiedRep = serde_json::from_str(r#"{"rank":2,"satake":["a1","a2"],"trivialCentral":false}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&contragredient(&s).unwrap()).unwrap(),
            r#"{"rank":2,"satake":["a2^(-1)","a1^(-1)"],"trivialCentral":false}"#
        );
        assert!(serde_json::from_str::<UnramifiedRep>(r#"{"rank":3,"satake":["a1"]}"#).is_err());
    }

    #[test]
    fn central_substitution_hook() {
        let rep = UnramifiedRep::symbolic("a", 3).unwrap();
        let (v, val) = rep.central_substitution().unwrap();
        assert_eq!(v, "a3");
        assert_eq!(val, p("a1^(-1)*a2^(-1)"));
        let dual = contragredient(&rep).unwrap();
        let (v, val) = dual.central_substitution().unwrap();
        assert_eq!((v.as_str(), val), ("a1", p("a3^(-1)*a2^(-1)")));
    }

    #[test]
    fn index_examples() {
        assert_eq!(congruence_index(2, 2, 1), BigUint::from(3u32));
        assert_eq!(congruence_index(3, 2, 1), BigUint::from(7u32));
        assert_eq!(congruence_index(2, 2, 2), BigUint::from(6u32));
        assert_eq!(congruence_index(4, 5, 0), BigUint::from(1u32));
        assert_eq!(congruence_index_poly(2, &LocalFieldData::symbolic(), 2), p("q^2 + q"));
        assert_eq!(congruence_index_poly(3, &LocalFieldData::numeric(3).unwrap(), 1), p("13"));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(congruence_index_bruteforce(2, 2, 1).unwrap(), BigUint::from(3u32));
        assert_eq!(congruence_index_bruteforce(2, 3, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(congruence_index_bruteforce(3, 3, 1).unwrap(), BigUint::from(13u32));
        assert_eq!(congruence_index_bruteforce(2, 2, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(congruence_index_bruteforce(3, 3, 2).unwrap(), BigUint::from(117u32));
        for (n, p, m) in [(1, 2, 1), (2, 2, 1), (2, 3, 2), (3, 2, 1), (3, 2, 2), (3, 3, 1)] {
            assert_eq!(congruence_index_by_rows(n, p, m).unwrap(), congruence_index_bruteforce(n, p, m).unwrap());
        }
        assert!(matches!(congruence_index_by_rows(2, 2, 13), Err(LocalRepError::EnumerationTooLarge(_))));
        assert!(matches!(congruence_index_bruteforce(2, 4, 1), Err(LocalRepError::UnsupportedModulus(4))));
    }

    #[test]
    fn character_sum_examples() {
        let f2 = LocalFieldData::numeric(2).unwrap();
        let f3 = LocalFieldData::numeric(3).unwrap();
        assert_eq!(character_sum(&f2, 1, &[0]).unwrap(), p("0"));
        assert_eq!(character_sum(&f2, 1, &[1]).unwrap(), p("2"));
        assert_eq!(character_sum(&f3, 1, &[1, 2]).unwrap(), p("9"));
        assert_eq!(character_sum(&LocalFieldData::symbolic(), 2, &[2, 5]).unwrap(), p("q^4"));
        assert_eq!(
            character_sum(&f2.with_conductor(1), 1, &[1]),
            Err(LocalRepError::UnsupportedConductor(1))
        );
        assert_eq!(character_sum_paper_literal(&f3, 3, 1, &[1, 2]).unwrap(), p("3"));
    }
}
