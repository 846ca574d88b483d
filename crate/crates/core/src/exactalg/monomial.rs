use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use super::ExactAlgError;

/// The residue-field cardinality. The only variable allowed to carry a
/// half-integer exponent (it absorbs the square roots of modular characters).
pub const RESIDUE_VAR: &str = "q";

pub type Var = Arc<str>;

/// An element of (1/2)Z, stored as twice its value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_int(k: i64) -> Self {
        HalfInt(2 * k)
    }

    pub const fn from_halves(h: i64) -> Self {
        HalfInt(h)
    }

    pub const fn halves(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, k: i64) -> HalfInt {
        HalfInt(self.0 * k)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(k) => write!(f, "{k}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

impl FromStr for HalfInt {
    type Err = ExactAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ExactAlgError::Parse {
            input: s.to_string(),
            reason: "exponent must be an integer or k/2".into(),
        };
        let t = s.trim();
        match t.split_once('/') {
            Some((k, "2")) => k.trim().parse::<i64>().map(HalfInt).map_err(|_| err()),
            Some(_) => Err(err()),
            None => t.parse::<i64>().map(HalfInt::from_int).map_err(|_| err()),
        }
    }
}

pub(crate) fn check_var_name(name: &str) -> Result<(), ExactAlgError> {
    let mut chars = name.chars();
    let ok = match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ExactAlgError::InvalidVariableName(name.to_string()))
    }
}

/// A product of variable powers, kept sorted by variable name with no zero
/// exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, HalfInt)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str, exp: HalfInt) -> Result<Self, ExactAlgError> {
        Self::from_pairs([(name, exp)])
    }

    /// Builds a monomial from `(name, exponent)` pairs; repeated names are
    /// multiplied together.
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self, ExactAlgError>
    where
        I: IntoIterator<Item = (&'a str, HalfInt)>,
    {
        let mut out = Monomial::one();
        for (name, e) in pairs {
            check_var_name(name)?;
            if !e.is_integer() && name != RESIDUE_VAR {
                return Err(ExactAlgError::HalfExponentNotAllowed(name.to_string()));
            }
            out = out.mul(&Monomial(if e.is_zero() { vec![] } else { vec![(Arc::from(name), e)] }));
        }
        Ok(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, HalfInt)> + '_ {
        self.0.iter().map(|(v, e)| (&**v, *e))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> + '_ {
        self.0.iter().map(|(v, _)| v)
    }

    pub fn exponent(&self, var: &str) -> HalfInt {
        self.0
            .binary_search_by(|(v, _)| (**v).cmp(var))
            .map(|i| self.0[i].1)
            .unwrap_or(HalfInt::ZERO)
    }

    /// Splits off the power of `var`: returns the remaining monomial and the
    /// removed exponent.
    pub fn split(&self, var: &str) -> (Monomial, HalfInt) {
        match self.0.binary_search_by(|(v, _)| (**v).cmp(var)) {
            Ok(i) => {
                let mut rest = self.0.clone();
                let (_, e) = rest.remove(i);
                (Monomial(rest), e)
            }
            Err(_) => (self.clone(), HalfInt::ZERO),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if !e.is_zero() {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), -*e)).collect())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), *e * k)).collect())
    }

    /// Total degree, counted in halves.
    pub fn degree_halves(&self) -> i64 {
        self.0.iter().map(|(_, e)| e.halves()).sum()
    }

    /// True when every exponent is a non-negative integer.
    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|(_, e)| e.is_integer() && e.halves() >= 0)
    }

    /// Polynomial divisibility: every exponent of `other` is at most ours.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        other.0.iter().all(|(v, e)| self.exponent(v) >= *e)
    }

    /// Renames variables through `f`, merging any that collide.
    pub fn rename(&self, f: &impl Fn(&str) -> String) -> Result<Monomial, ExactAlgError> {
        let renamed: Vec<(String, HalfInt)> = self.0.iter().map(|(v, e)| (f(v), *e)).collect();
        Monomial::from_pairs(renamed.iter().map(|(v, e)| (v.as_str(), *e)))
    }
}

impl fmt::Display for Monomial {
    /// Factors joined by `*`; the residue variable comes first, the rest in
    /// name order. The empty monomial prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let residue = self.0.iter().filter(|(v, _)| &**v == RESIDUE_VAR);
        let others = self.0.iter().filter(|(v, _)| &**v != RESIDUE_VAR);
        for (i, (v, e)) in residue.chain(others).enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            match e.as_integer() {
                Some(1) => write!(f, "{v}")?,
                Some(k) if k > 0 => write!(f, "{v}^{k}")?,
                _ => write!(f, "{v}^({e})")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(&str, i64)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().map(|(v, h)| (*v, HalfInt::from_halves(*h)))).unwrap()
    }

    #[test]
    fn multiplication_cancels_exponents() {
        let a = m(&[("a", 2), ("q", 1)]);
        let b = m(&[("a", -2), ("b", 4)]);
        assert_eq!(a.mul(&b), m(&[("b", 4), ("q", 1)]));
        assert!(a.mul(&a.inv()).is_one());
    }

    #[test]
    fn half_exponents_only_on_residue_variable() {
        assert!(Monomial::var("q", HalfInt::from_halves(-1)).is_ok());
        assert_eq!(
            Monomial::var("a1", HalfInt::from_halves(1)),
            Err(ExactAlgError::HalfExponentNotAllowed("a1".into()))
        );
        assert!(Monomial::var("", HalfInt::ONE).is_err());
        assert!(Monomial::var("1a", HalfInt::ONE).is_err());
    }

    #[test]
    fn display_puts_residue_first() {
        assert_eq!(m(&[("a1", 4), ("q", -1)]).to_string(), "q^(-1/2)*a1^2");
        assert_eq!(m(&[("b", -2), ("a", 2)]).to_string(), "a*b^(-1)");
        assert_eq!(Monomial::one().to_string(), "1");
    }

    #[test]
    fn half_int_parse_and_print() {
        for s in ["3", "-1/2", "5/2", "0"] {
            assert_eq!(s.parse::<HalfInt>().unwrap().to_string(), s);
        }
        assert!("1/3".parse::<HalfInt>().is_err());
    }
}
