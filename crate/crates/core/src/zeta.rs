//! Local Rankin-Selberg L-factors and zeta integrals at unramified places,
//! and the local weights `H_v`.
//!
//! A local zeta integral against spherical data reduces, after the Iwasawa
//! decomposition, to a sum over dominant cocharacters `mu` of GL(n) with
//! `mu_n >= 0`:
//!
//! ```text
//! sum_mu W_A(diag(w^mu, 1)) W_B(diag(w^mu)) q^{-|mu|(s - 1/2)} delta_{B_n}(w^mu)^{-1}
//! ```
//!
//! which we evaluate as a truncated series in `X = q^{-s}`, one shard per
//! total degree `|mu|`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::text::as_text;
use crate::exactalg::{
    series_expand, ExactAlgError, HalfInt, LaurentPoly, RationalFunction, TruncatedSeries, RESIDUE_VAR,
};
use crate::localrep::{self, LocalFieldData, LocalRepError, UnramifiedRep};
use crate::report::{Check, SuiteReport};
use crate::whittaker::{self, modular_half_exponent, SphericalWhittaker, TorusCocharacter, WhittakerError};

pub const DEFAULT_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("symbol collision: {0}")]
    SymbolCollision(String),
    #[error("computation paths disagree at degree {degree}: {left} vs {right}")]
    PathMismatch { degree: usize, left: String, right: String },
    #[error(transparent)]
    Whittaker(#[from] WhittakerError),
    #[error(transparent)]
    Local(#[from] LocalRepError),
    #[error(transparent)]
    Alg(#[from] ExactAlgError),
}

/// Rejects inputs whose L-factor would silently identify distinct symbols:
/// the series variable inside a parameter, or one symbolic parameter shared
/// by both representations. Inverse pairs such as `a1` and `a1^(-1)` are fine.
fn check_disjoint(a: &UnramifiedRep, b: &UnramifiedRep, var: &str) -> Result<(), ZetaError> {
    if a.symbols().contains(var) || b.symbols().contains(var) || var == RESIDUE_VAR {
        return Err(ZetaError::SymbolCollision(format!("series variable {var} occurs in the parameters")));
    }
    for x in a.satake().iter().filter(|x| x.constant_value().is_none()) {
        if b.satake().contains(x) {
            return Err(ZetaError::SymbolCollision(format!("parameter {x} occurs in both representations")));
        }
    }
    Ok(())
}

/// `prod_{i,j} (1 - alpha_i beta_j X)`.
pub fn l_denominator(a: &UnramifiedRep, b: &UnramifiedRep, var: &str) -> Result<LaurentPoly, ZetaError> {
    let x = LaurentPoly::var(var)?;
    let one = LaurentPoly::one();
    Ok(a.satake()
        .iter()
        .flat_map(|al| b.satake().iter().map(move |be| (al, be)))
        .map(|(al, be)| &one - &(&(al * be) * &x))
        .product())
}

/// `L(s, A x B) = 1 / prod_{i,j} (1 - alpha_i beta_j X)`.
pub fn local_l_factor(a: &UnramifiedRep, b: &UnramifiedRep, var: &str) -> Result<RationalFunction, ZetaError> {
    check_disjoint(a, b, var)?;
    Ok(RationalFunction::new(LaurentPoly::one(), l_denominator(a, b, var)?)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZetaResult {
    pub series: TruncatedSeries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<RationalFunction>,
    #[serde(rename = "latticePoints")]
    pub lattice_points_visited: u64,
}

impl ZetaResult {
    /// First degree where the series and the closed form disagree, if any.
    pub fn closed_form_mismatch(&self) -> Result<Option<usize>, ExactAlgError> {
        match &self.closed_form {
            None => Ok(None),
            Some(f) => {
                let expanded = series_expand(f, self.series.var(), self.series.order())?;
                self.series.first_difference(&expanded)
            }
        }
    }
}

fn check_pair_ranks(a: &UnramifiedRep, b: &UnramifiedRep) -> Result<(), ZetaError> {
    if a.rank() != b.rank() + 1 {
        return Err(ZetaError::RankMismatch(format!("need ranks (n+1, n), got ({}, {})", a.rank(), b.rank())));
    }
    Ok(())
}

/// Dominant cocharacters of length `len` with non-negative entries and total `k`.
fn shard(len: usize, k: u32) -> Vec<TorusCocharacter> {
    crate::symfunc::Partition::of_weight(k, len)
        .into_iter()
        .map(|p| TorusCocharacter::new(p.padded(len).into_iter().map(i64::from).collect()))
        .collect()
}

/// `q^{|mu|/2} delta_{B_n}(w^mu)^{-1}`, after asserting that the modular
/// factors of the two Whittaker values combine to `q^{-|mu|/2}`.
fn measure_factor(mu: &TorusCocharacter) -> LaurentPoly {
    let big = modular_half_exponent(&mu.padded());
    let small = modular_half_exponent(mu);
    assert_eq!(big - small, HalfInt::from_halves(-mu.total()), "modular collapse at {mu}");
    let e = HalfInt::from_halves(mu.total()) - small * 2;
    LaurentPoly::var_pow(RESIDUE_VAR, e).expect("q is a valid name")
}

/// `sum_{|mu| <= order, keep(mu)} a_value(mu) W_B(mu) X^{|mu|} q^{|mu|/2} delta^{-1}`.
fn lattice_sum<F>(
    b: &UnramifiedRep,
    var: &str,
    order: usize,
    keep: impl Fn(&TorusCocharacter) -> bool + Sync,
    a_value: F,
) -> Result<(TruncatedSeries, u64), ZetaError>
where
    F: Fn(&TorusCocharacter) -> Result<LaurentPoly, ZetaError> + Sync,
{
    let shards: Vec<(LaurentPoly, u64)> = (0..=order as u32)
        .into_par_iter()
        .map(|k| {
            let mut wb = SphericalWhittaker::new(b);
            let mut acc = LaurentPoly::zero();
            let mut visited = 0u64;
            for mu in shard(b.rank(), k).into_iter().filter(|mu| keep(mu)) {
                visited += 1;
                let va = a_value(&mu)?;
                if va.is_zero() {
                    continue;
                }
                let vb = wb.value(&mu)?;
                acc += &(&(&va * &vb) * &measure_factor(&mu));
            }
            Ok((acc, visited))
        })
        .collect::<Result<_, ZetaError>>()?;
    let visited = shards.iter().map(|s| s.1).sum();
    let series = TruncatedSeries::new(var, shards.into_iter().map(|s| s.0).collect())?;
    Ok((series, visited))
}

/// `Psi(s, W_A, W'_B)` for unramified `A` of rank `n+1` and `B` of rank `n`,
/// as a series in `var` to the given order, together with the L-factor.
pub fn local_zeta_unramified(
    a: &UnramifiedRep,
    b: &UnramifiedRep,
    var: &str,
    order: usize,
) -> Result<ZetaResult, ZetaError> {
    check_pair_ranks(a, b)?;
    let closed = local_l_factor(a, b, var)?;
    let (series, visited) =
        lattice_sum(b, var, order, |_| true, |mu| Ok(whittaker::spherical_value(a, &mu.padded())?))?;
    Ok(ZetaResult { series, closed_form: Some(closed), lattice_points_visited: visited })
}

/// Runs the unramified identity for fully symbolic GL(n+1) x GL(n) data.
pub fn verify_unramified_identity(n: usize, order: usize) -> SuiteReport {
    let id = format!("unramified/n={n:02}/N={order:02}");
    let start = Instant::now();
    let desc = |pts: u64| format!("lattice sum for GL({}) x GL({n}) equals the L-factor to order {order}; {pts} lattice points", n + 1);
    let check = (|| -> Result<Check, ZetaError> {
        let a = UnramifiedRep::symbolic("a", n + 1)?;
        let b = UnramifiedRep::symbolic("b", n)?;
        let z = local_zeta_unramified(&a, &b, "X", order)?;
        let witness = z.closed_form_mismatch()?.map(|k| {
            let expanded = series_expand(z.closed_form.as_ref().unwrap(), "X", order).unwrap();
            format!("degree {k}: lattice {} vs L-factor {}", z.series.coeffs()[k], expanded.coeffs()[k])
        });
        Ok(Check::from_witness(id.clone(), desc(z.lattice_points_visited), witness))
    })()
    .unwrap_or_else(|e| Check::error(id.clone(), desc(0), e.to_string()));
    SuiteReport::from_checks("unramified", vec![check.timed(start)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceKind {
    Unramified,
    DividingL,
    DividingQ,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightValue {
    Series(TruncatedSeries),
    Exact(#[serde(with = "as_text")] LaurentPoly),
    Rational(RationalFunction),
    /// No formula is available for this configuration.
    Undetermined,
}

impl WeightValue {
    pub fn is_one(&self) -> bool {
        match self {
            WeightValue::Series(s) => s.is_one(),
            WeightValue::Exact(p) => p.is_one(),
            WeightValue::Rational(f) => *f == RationalFunction::from_poly(LaurentPoly::one()),
            WeightValue::Undetermined => false,
        }
    }
}

/// A constant as printed next to the one this crate computes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PaperComparison {
    #[serde(with = "as_text")]
    pub paper_constant: LaurentPoly,
    pub computed_constant: RationalFunction,
    /// `computed_constant / paper_constant`.
    pub ratio: RationalFunction,
}

impl PaperComparison {
    pub fn new(paper: LaurentPoly, computed: RationalFunction) -> Result<Self, ExactAlgError> {
        let ratio = computed.div(&RationalFunction::from_poly(paper.clone()))?;
        Ok(PaperComparison { paper_constant: paper, computed_constant: computed, ratio })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Vanishes,
    SingleTerm,
    Undetermined,
}

/// One basis label `(a1, a2, j)` at a place dividing the level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexTriple {
    pub a1: u32,
    pub a2: u32,
    pub j: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightResult {
    pub value: WeightValue,
    pub place_kind: PlaceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_comparison: Option<PaperComparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_set: Option<Vec<IndexTriple>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

/// `Psi(s, W_A, W'_B) / L(s, A x B)` as a series, by cross-multiplying with
/// the L-denominator.
fn normalized_zeta(a: &UnramifiedRep, b: &UnramifiedRep, var: &str, order: usize) -> Result<TruncatedSeries, ZetaError> {
    let z = local_zeta_unramified(a, b, var, order)?;
    Ok(z.series.mul_poly(&l_denominator(a, b, var)?)?)
}

/// `H_v` at a place where everything is unramified: the product of the two
/// normalized zeta integrals `Psi(s, W_Pi, conj W_pi)/L(s, Pi x pi~)` and
/// `Psi(w, W_pi, W_pi1)/L(w, pi x pi1)`, truncated at `order` in `X` and `Y`.
/// The complex conjugate of a unitary spherical `W_pi` is the spherical
/// vector of the contragredient.
pub fn weight_unramified(
    big: &UnramifiedRep,
    pi: &UnramifiedRep,
    pi1: &UnramifiedRep,
    order: usize,
) -> Result<WeightResult, ZetaError> {
    check_pair_ranks(big, pi).and(check_pair_ranks(pi, pi1)).map_err(|_| {
        ZetaError::RankMismatch(format!(
            "need ranks (n+1, n, n-1), got ({}, {}, {})",
            big.rank(),
            pi.rank(),
            pi1.rank()
        ))
    })?;
    let first = normalized_zeta(big, &localrep::contragredient(pi)?, "X", order)?;
    let second = normalized_zeta(pi, pi1, "Y", order)?;
    Ok(WeightResult {
        value: WeightValue::Exact(&first.to_poly() * &second.to_poly()),
        place_kind: PlaceKind::Unramified,
        paper_comparison: None,
        index_set: None,
        verdict: None,
    })
}

/// The three evaluations of `H_v` at a place dividing the auxiliary level.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightAtLPaths {
    /// `p^{-(n-1)m} Psi(w, W^{(m)}, W') * L^{-1}`, summed over the twisted support.
    pub direct: TruncatedSeries,
    /// `1 - L^{-1} * (sum over the complement of the twisted support)`.
    pub tail: TruncatedSeries,
    /// Grouped by `nu = mu_{n-1}` with the printed constants: no prefactor,
    /// `p^{(n-2)m}` in the twisted vector. Equals `direct / comparison.ratio`.
    pub paper: TruncatedSeries,
    pub comparison: PaperComparison,
    pub lattice_points: u64,
}

pub fn weight_at_l_paths(
    pi: &UnramifiedRep,
    pi1: &UnramifiedRep,
    level: u32,
    var: &str,
    order: usize,
    field: &LocalFieldData,
) -> Result<WeightAtLPaths, ZetaError> {
    check_pair_ranks(pi, pi1)?;
    check_disjoint(pi, pi1, var)?;
    let n = pi.rank() as i64;
    let m = level as i64;
    let denominator = l_denominator(pi, pi1, var)?;
    let prefactor = field.power(-(n - 1) * m);
    let in_support = |mu: &TorusCocharacter| mu.exps().last().is_some_and(|&v| v >= m);

    let (psi, visited) = lattice_sum(pi1, var, order, in_support, |mu| {
        Ok(&prefactor * &whittaker::twisted_value(pi, mu, level, field)?)
    })?;
    let direct = psi.mul_poly(&denominator)?;

    let (partial, _) =
        lattice_sum(pi1, var, order, |mu| !in_support(mu), |mu| Ok(whittaker::spherical_value(pi, &mu.padded())?))?;
    let tail = TruncatedSeries::one(var, order)?.sub(&partial.mul_poly(&denominator)?)?;

    // nu-blocks of the printed decomposition; each block is a sum over the
    // first n-2 coordinates with mu_{n-1} = nu fixed
    let mut paper_psi = TruncatedSeries::zero(var, order)?;
    for nu in m..=order as i64 {
        let (block, _) = lattice_sum(
            pi1,
            var,
            order,
            |mu| mu.exps().last() == Some(&nu),
            |mu| Ok(whittaker::twisted_value_paper_literal(pi, mu, level, field)?),
        )?;
        paper_psi = paper_psi.add(&block)?;
    }
    let paper = paper_psi.mul_poly(&denominator)?;

    let computed = &prefactor * &field.power((n - 1) * m);
    let comparison = PaperComparison::new(field.power((n - 2) * m), computed.into())?;
    Ok(WeightAtLPaths { direct, tail, paper, comparison, lattice_points: visited })
}

fn series_mismatch(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<Option<ZetaError>, ExactAlgError> {
    Ok(a.first_difference(b)?.map(|k| ZetaError::PathMismatch {
        degree: k,
        left: a.coeffs()[k].to_string(),
        right: b.coeffs()[k].to_string(),
    }))
}

/// `H_v` at a place dividing the auxiliary level `l`, with `pi` unramified of
/// rank `n`, `pi1` of rank `n-1`, and the twisted vector of level `m`.
/// Returns the direct evaluation after checking it against the tail identity.
pub fn weight_at_l(
    pi: &UnramifiedRep,
    pi1: &UnramifiedRep,
    level: u32,
    var: &str,
    order: usize,
    field: &LocalFieldData,
) -> Result<WeightResult, ZetaError> {
    let paths = weight_at_l_paths(pi, pi1, level, var, order, field)?;
    if let Some(e) = series_mismatch(&paths.direct, &paths.tail)? {
        return Err(e);
    }
    Ok(WeightResult {
        value: WeightValue::Series(paths.direct),
        place_kind: PlaceKind::DividingL,
        paper_comparison: Some(paths.comparison),
        index_set: None,
        verdict: None,
    })
}

/// Lowest degree above `bound` carrying a nonzero coefficient.
pub fn degree_excess(series: &TruncatedSeries, bound: usize) -> Option<usize> {
    series.coeffs().iter().enumerate().skip(bound + 1).find(|(_, c)| !c.is_zero()).map(|(k, _)| k)
}

/// Labels `(a1, a2, j)` with `a1 + a2 = m` and `0 <= j <= a2 - n0`.
pub fn level_index_set(n0: u32, level: u32) -> Vec<IndexTriple> {
    (0..=level)
        .flat_map(|a1| {
            let a2 = level - a1;
            (0..=a2.saturating_sub(n0)).filter(move |_| a2 >= n0).map(move |j| IndexTriple { a1, a2, j })
        })
        .collect()
}

/// Structural bookkeeping for `H_v` at a place dividing the level `q`, for
/// `pi_v` of conductor exponent `n0` and level exponent `m`.
///
/// When `n0 = m` only the newvector line survives, and its weight is the
/// reciprocal volume `1/[K : K_0(w^m)]`; the printed value `p^{-(n-1)m}` is
/// reported next to it. When `n0 < m` the weight involves ramified Whittaker
/// values and is returned as undetermined.
pub fn weight_at_q_structural(n0: u32, level: u32, n: usize, field: &LocalFieldData) -> Result<WeightResult, ZetaError> {
    if n == 0 {
        return Err(LocalRepError::ZeroRank.into());
    }
    let index_set = level_index_set(n0, level);
    let (value, verdict, comparison) = if n0 > level {
        (WeightValue::Exact(LaurentPoly::zero()), Verdict::Vanishes, None)
    } else if n0 == level {
        let index = localrep::congruence_index_poly(n, field, level);
        let exact = RationalFunction::new(LaurentPoly::one(), index)?;
        let paper = field.power(-(n as i64 - 1) * level as i64);
        let cmp = PaperComparison::new(paper, exact.clone())?;
        (WeightValue::Rational(exact), Verdict::SingleTerm, Some(cmp))
    } else {
        (WeightValue::Undetermined, Verdict::Undetermined, None)
    };
    Ok(WeightResult {
        value,
        place_kind: PlaceKind::DividingQ,
        paper_comparison: comparison,
        index_set: Some(index_set),
        verdict: Some(verdict),
    })
}
