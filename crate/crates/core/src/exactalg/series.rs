use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::text::vec_as_text;
use super::{ExactAlgError, HalfInt, LaurentPoly, Monomial, RationalFunction, Var};

/// A power series `c_0 + c_1 X + ... + c_N X^N + O(X^{N+1})` in one
/// distinguished variable `X`, with Laurent-polynomial coefficients that do
/// not mention `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    var: Var,
    order: usize,
    #[serde(with = "vec_as_text")]
    coeffs: Vec<LaurentPoly>,
}

impl TruncatedSeries {
    pub fn new(var: &str, coeffs: Vec<LaurentPoly>) -> Result<Self, ExactAlgError> {
        if coeffs.iter().any(|c| c.mentions(var)) {
            return Err(ExactAlgError::SeriesVariableInCoefficient(var.to_string()));
        }
        if coeffs.is_empty() {
            return Err(ExactAlgError::NotExpandable {
                var: var.to_string(),
                reason: "a series needs at least one coefficient".into(),
            });
        }
        Monomial::var(var, HalfInt::ONE)?;
        Ok(TruncatedSeries { var: Arc::from(var), order: coeffs.len() - 1, coeffs })
    }

    fn raw(var: Var, coeffs: Vec<LaurentPoly>) -> Self {
        TruncatedSeries { var, order: coeffs.len() - 1, coeffs }
    }

    pub fn zero(var: &str, order: usize) -> Result<Self, ExactAlgError> {
        Self::new(var, vec![LaurentPoly::zero(); order + 1])
    }

    pub fn one(var: &str, order: usize) -> Result<Self, ExactAlgError> {
        let mut c = vec![LaurentPoly::zero(); order + 1];
        c[0] = LaurentPoly::one();
        Self::new(var, c)
    }

    /// Reads a polynomial in `var` as a series, dropping powers above
    /// `order`. Negative or fractional powers of `var` are rejected.
    pub fn from_poly(p: &LaurentPoly, var: &str, order: usize) -> Result<Self, ExactAlgError> {
        let mut coeffs = vec![LaurentPoly::zero(); order + 1];
        for (e, c) in p.split_by(var) {
            match e.as_integer() {
                Some(k) if k >= 0 => {
                    if (k as usize) <= order {
                        coeffs[k as usize] = c;
                    }
                }
                _ => {
                    return Err(ExactAlgError::BadSeriesExponent {
                        var: var.to_string(),
                        exp: e.to_string(),
                    })
                }
            }
        }
        Self::new(var, coeffs)
    }

    /// Reassembles `sum c_k X^k` as a polynomial.
    pub fn to_poly(&self) -> LaurentPoly {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.mul_monomial(&Monomial::var(&self.var, HalfInt::from_int(k as i64)).unwrap()))
            .sum()
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> Option<&LaurentPoly> {
        self.coeffs.get(k)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order) + 1;
        Self::raw(self.var.clone(), self.coeffs[..n].to_vec())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(LaurentPoly::is_zero)
    }

    fn check_var(&self, other: &Self) -> Result<(), ExactAlgError> {
        if self.var != other.var {
            return Err(ExactAlgError::VariableMismatch {
                left: self.var.to_string(),
                right: other.var.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactAlgError> {
        self.check_var(other)?;
        let n = self.order.min(other.order);
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        Ok(Self::raw(self.var.clone(), coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactAlgError> {
        self.check_var(other)?;
        let n = self.order.min(other.order);
        let coeffs = (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        Ok(Self::raw(self.var.clone(), coeffs))
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self, ExactAlgError> {
        self.check_var(other)?;
        let n = self.order.min(other.order);
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k)
                    .filter(|&i| !self.coeffs[i].is_zero() && !other.coeffs[k - i].is_zero())
                    .map(|i| &self.coeffs[i] * &other.coeffs[k - i])
                    .sum()
            })
            .collect();
        Ok(Self::raw(self.var.clone(), coeffs))
    }

    /// Multiplies by a polynomial that may itself mention the series variable.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Result<Self, ExactAlgError> {
        self.mul(&Self::from_poly(p, &self.var, self.order)?)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Result<Self, ExactAlgError> {
        if c.mentions(&self.var) {
            return Err(ExactAlgError::SeriesVariableInCoefficient(self.var.to_string()));
        }
        Ok(Self::raw(self.var.clone(), self.coeffs.iter().map(|x| x * c).collect()))
    }

    /// Multiplicative inverse; the constant coefficient must be a unit.
    pub fn inverse(&self) -> Result<Self, ExactAlgError> {
        let inv0 = self.coeffs[0].inverse_unit().map_err(|_| ExactAlgError::NotExpandable {
            var: self.var.to_string(),
            reason: format!("constant coefficient {} is not invertible", self.coeffs[0]),
        })?;
        let mut g: Vec<LaurentPoly> = Vec::with_capacity(self.order + 1);
        g.push(inv0.clone());
        for k in 1..=self.order {
            let acc: LaurentPoly = (1..=k)
                .filter(|&i| !self.coeffs[i].is_zero() && !g[k - i].is_zero())
                .map(|i| &self.coeffs[i] * &g[k - i])
                .sum();
            g.push(-&(&acc * &inv0));
        }
        Ok(Self::raw(self.var.clone(), g))
    }

    /// Index of the first coefficient where the two series differ, up to the
    /// smaller order.
    pub fn first_difference(&self, other: &Self) -> Result<Option<usize>, ExactAlgError> {
        self.check_var(other)?;
        let n = self.order.min(other.order);
        Ok((0..=n).find(|&k| self.coeffs[k] != other.coeffs[k]))
    }
}

/// Coefficientwise equality up to the smaller of the two orders.
pub fn series_equal(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<bool, ExactAlgError> {
    Ok(a.first_difference(b)?.is_none())
}

/// Expands `f` as a power series in `var` to the given order.
///
/// A common pure power `var^j` of the denominator is first cleared against
/// the numerator; the remaining constant coefficient of the denominator must
/// be a unit of the Laurent ring.
pub fn series_expand(f: &RationalFunction, var: &str, order: usize) -> Result<TruncatedSeries, ExactAlgError> {
    let not_expandable = |reason: String| ExactAlgError::NotExpandable { var: var.to_string(), reason };
    let lowest = |p: &LaurentPoly| -> Result<Option<i64>, ExactAlgError> {
        let parts: BTreeMap<HalfInt, LaurentPoly> = p.split_by(var);
        match parts.keys().next() {
            None => Ok(None),
            Some(e) => e
                .as_integer()
                .map(Some)
                .ok_or_else(|| not_expandable(format!("fractional power {var}^({e})"))),
        }
    };
    let j = lowest(f.den())?.expect("denominator is nonzero");
    if let Some(jn) = lowest(f.num())? {
        if jn < j {
            return Err(not_expandable(format!("pole of order {} at {var} = 0", j - jn)));
        }
    }
    let shift = Monomial::var(var, HalfInt::from_int(-j))?;
    let num = f.num().mul_monomial(&shift);
    let den = f.den().mul_monomial(&shift);
    let den_series = TruncatedSeries::from_poly(&den, var, order)?;
    if !den_series.coeffs[0].is_unit() {
        return Err(not_expandable(format!(
            "constant coefficient {} of the denominator is not a unit",
            den_series.coeffs[0]
        )));
    }
    TruncatedSeries::from_poly(&num, var, order)?.mul(&den_series.inverse()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn series(var: &str, cs: &[&str]) -> TruncatedSeries {
        TruncatedSeries::new(var, cs.iter().map(|c| p(c)).collect()).unwrap()
    }

    #[test]
    fn geometric_series() {
        let f = RationalFunction::new(p("1"), p("1 - a*X")).unwrap();
        let s = series_expand(&f, "X", 3).unwrap();
        assert_eq!(s, series("X", &["1", "a", "a^2", "a^3"]));
    }

    #[test]
    fn complete_homogeneous_generating_function() {
        let f = RationalFunction::new(p("1"), p("1 - a1*X") * p("1 - a2*X")).unwrap();
        let s = series_expand(&f, "X", 2).unwrap();
        assert_eq!(s, series("X", &["1", "a1 + a2", "a1^2 + a1*a2 + a2^2"]));
    }

    #[test]
    fn long_division() {
        // (1 - X^2)/(1 - X) = 1 + X exactly
        let f = RationalFunction::new(p("1 - X^2"), p("1 - X")).unwrap();
        let s = series_expand(&f, "X", 4).unwrap();
        assert_eq!(s, series("X", &["1", "1", "0", "0", "0"]));
    }

    #[test]
    fn monomial_factor_is_cleared() {
        let f = RationalFunction::new(p("X^2"), p("X - X^2")).unwrap();
        assert_eq!(series_expand(&f, "X", 2).unwrap(), series("X", &["0", "1", "1"]));
        let pole = RationalFunction::new(p("1"), p("X")).unwrap();
        assert!(matches!(series_expand(&pole, "X", 2), Err(ExactAlgError::NotExpandable { .. })));
        let nonunit = RationalFunction::new(p("1"), p("1 + a + X")).unwrap();
        assert!(matches!(series_expand(&nonunit, "X", 2), Err(ExactAlgError::NotExpandable { .. })));
    }

    #[test]
    fn equality_up_to_min_order() {
        let f = RationalFunction::new(p("1"), p("1 - X")).unwrap();
        let e = series_expand(&f, "X", 6).unwrap();
        assert!(series_equal(&e, &series("X", &["1", "1", "1"])).unwrap());
        assert!(!series_equal(&series("X", &["1", "a"]), &series("X", &["1", "b"])).unwrap());
        assert!(series_equal(&series("X", &["1"]), &series("Y", &["1"])).is_err());
    }

    #[test]
    fn constructor_rejects_series_variable_in_coefficients() {
        assert!(TruncatedSeries::new("X", vec![p("X")]).is_err());
        assert!(TruncatedSeries::from_poly(&p("X^(-1)"), "X", 2).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let s = series("X", &["2*a", "1", "b", "0", "a*b"]);
        assert!(s.mul(&s.inverse().unwrap()).unwrap().is_one());
    }
}
