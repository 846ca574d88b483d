use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::rational::{self, Rational};
use super::{ExactAlgError, HalfInt, Monomial, Var};

/// Multivariate Laurent polynomial with rational coefficients.
///
/// Stored as a map from monomial to a nonzero coefficient, so structural
/// equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rational::int(n))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn var(name: &str) -> Result<Self, ExactAlgError> {
        Self::var_pow(name, HalfInt::ONE)
    }

    pub fn var_pow(name: &str, e: HalfInt) -> Result<Self, ExactAlgError> {
        Ok(Self::monomial(Monomial::var(name, e)?))
    }

    /// Sums the given terms, merging equal monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in it {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_accumulator(acc)
    }

    fn from_accumulator(acc: HashMap<Monomial, Rational>) -> Self {
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a polynomial with no variables.
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// The coefficient of the empty monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Units of the Laurent ring are exactly the nonzero single terms.
    pub fn is_unit(&self) -> bool {
        self.single_term().is_some()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars().cloned()).collect()
    }

    pub fn mentions(&self, var: &str) -> bool {
        self.terms.keys().any(|m| !m.exponent(var).is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn inverse_unit(&self) -> Result<Self, ExactAlgError> {
        match self.single_term() {
            Some((m, c)) => Ok(Self::term(c.recip(), m.inv())),
            None if self.is_zero() => Err(ExactAlgError::DivisionByZero),
            None => Err(ExactAlgError::NotAUnit(self.to_string())),
        }
    }

    /// Integer power; negative exponents need a unit.
    pub fn pow_i64(&self, k: i64) -> Result<Self, ExactAlgError> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            Ok(self.inverse_unit()?.pow(k.unsigned_abs() as u32))
        }
    }

    /// Groups terms by the exponent of `var`; the values no longer mention it.
    pub fn split_by(&self, var: &str) -> BTreeMap<HalfInt, LaurentPoly> {
        let mut out: BTreeMap<HalfInt, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.split(var);
            out.entry(e).or_default().terms.insert(rest, c.clone());
        }
        out
    }

    /// Replaces `var` by `value`. Negative powers of `var` require `value` to
    /// be a unit; half-integer powers are rejected.
    pub fn substitute(&self, var: &str, value: &LaurentPoly) -> Result<Self, ExactAlgError> {
        let mut out = Self::zero();
        for (e, coeff) in self.split_by(var) {
            let k = e.as_integer().ok_or_else(|| ExactAlgError::BadSeriesExponent {
                var: var.to_string(),
                exp: e.to_string(),
            })?;
            out += &(&coeff * &value.pow_i64(k)?);
        }
        Ok(out)
    }

    /// Renames every variable through `f`.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Result<Self, ExactAlgError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.rename(&f)?, c.clone()));
        }
        Ok(Self::from_terms(terms))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| lex_cmp(a.0, b.0))
    }

    /// Exact division of ordinary polynomials (non-negative integer
    /// exponents), by lexicographic long division.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<Self, ExactAlgError> {
        if divisor.is_zero() {
            return Err(ExactAlgError::DivisionByZero);
        }
        if !self.is_polynomial() || !divisor.is_polynomial() {
            return Err(ExactAlgError::InexactDivision);
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading() {
            if !m.divisible_by(&lm) {
                return Err(ExactAlgError::InexactDivision);
            }
            let t = Self::term(c / &lc, m.mul(&lm.inv()));
            rem -= &(&t * divisor);
            quot += &t;
        }
        Ok(quot)
    }
}

/// Pure lexicographic order on exponent vectors, variables ranked by name.
fn lex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let mut ia = a.iter().peekable();
    let mut ib = b.iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => return Ordering::Equal,
            (Some(&(_, e)), None) => return e.cmp(&HalfInt::ZERO),
            (None, Some(&(_, e))) => return HalfInt::ZERO.cmp(&e),
            (Some(&(va, ea)), Some(&(vb, eb))) => {
                let ord = match va.cmp(vb) {
                    Ordering::Less => ea.cmp(&HalfInt::ZERO),
                    Ordering::Greater => HalfInt::ZERO.cmp(&eb),
                    Ordering::Equal => ea.cmp(&eb),
                };
                if ord != Ordering::Equal {
                    return ord;
                }
                match va.cmp(vb) {
                    Ordering::Less => {
                        ia.next();
                    }
                    Ordering::Greater => {
                        ib.next();
                    }
                    Ordering::Equal => {
                        ia.next();
                        ib.next();
                    }
                }
            }
        }
    }
}

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for LaurentPoly {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (m, c) in &rhs.terms {
            match self.terms.get_mut(m) {
                Some(a) => {
                    *a += c;
                    if a.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), c.clone());
                }
            }
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self += &-rhs;
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        LaurentPoly::from_accumulator(acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl<'a> Sum<&'a LaurentPoly> for LaurentPoly {
    fn sum<I: Iterator<Item = &'a LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |mut acc, p| {
            acc += p;
            acc
        })
    }
}

impl std::iter::Product for LaurentPoly {
    fn product<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::one(), |acc, p| &acc * &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(p("1 + X") * p("1 - X"), p("1 - X^2"));
    }

    #[test]
    fn additive_inverse_is_zero() {
        let a = p("3/2*q^(-1/2)*a1^2 + a2^(-1) - 7");
        assert!((&a + &-&a).is_zero());
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn binomial_square() {
        let s = p("a1 + a2");
        assert_eq!(&s * &s, p("a1^2 + 2*a1*a2 + a2^2"));
        assert_eq!(s.pow(2), p("a1^2 + 2*a1*a2 + a2^2"));
    }

    #[test]
    fn laurent_units_invert() {
        let u = p("-2*a^3*q^(1/2)");
        assert!((&u * &u.inverse_unit().unwrap()).is_one());
        assert!(p("1 + a").inverse_unit().is_err());
        assert_eq!(u.pow_i64(-2).unwrap(), p("1/4*a^(-6)*q^(-1)"));
    }

    #[test]
    fn substitution() {
        let f = p("a^2*b + a^(-1)");
        assert_eq!(f.substitute("a", &p("2*c")).unwrap(), p("4*c^2*b + 1/2*c^(-1)"));
        assert!(f.substitute("a", &p("1 + c")).is_err());
    }

    #[test]
    fn exact_division() {
        let num = p("a^3 - b^3");
        assert_eq!(num.div_exact(&p("a - b")).unwrap(), p("a^2 + a*b + b^2"));
        assert_eq!(p("a^2 + 1").div_exact(&p("a - 1")), Err(ExactAlgError::InexactDivision));
        let prod = p("x^2*y - x*y^2 + 3*z") * p("x - y + z^2");
        assert_eq!(prod.div_exact(&p("x - y + z^2")).unwrap(), p("x^2*y - x*y^2 + 3*z"));
    }

    #[test]
    fn split_and_constant_value() {
        let f = p("X^2*a + X^2 + 3*X + b");
        let parts = f.split_by("X");
        assert_eq!(parts[&HalfInt::from_int(2)], p("a + 1"));
        assert_eq!(parts[&HalfInt::from_int(0)], p("b"));
        assert_eq!(p("5").constant_value(), Some(rational::int(5)));
        assert_eq!(p("a").constant_value(), None);
    }
}
