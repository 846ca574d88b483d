use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::text::as_text;
use super::{ExactAlgError, LaurentPoly};

/// A quotient of Laurent polynomials.
///
/// No gcd reduction is performed. The canonical form only fixes the scalar:
/// the lexicographically least monomial of the denominator has coefficient 1.
/// Equality is decided by cross-multiplication.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalFunction {
    #[serde(with = "as_text")]
    num: LaurentPoly,
    #[serde(with = "as_text")]
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ExactAlgError> {
        let lead = match den.terms().next() {
            Some((_, c)) => c.recip(),
            None => return Err(ExactAlgError::DivisionByZero),
        };
        Ok(RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction { num: p, den: LaurentPoly::one() }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self, ExactAlgError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(&self.num + &other.num, self.den.clone()).expect("nonzero den");
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::new(num, &self.den * &other.den).expect("product of nonzero dens")
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactAlgError> {
        Ok(self * &other.recip()?)
    }

    /// The polynomial this equals, when the denominator is a unit.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        if self.den.is_one() {
            return Some(self.num.clone());
        }
        self.den.inverse_unit().ok().map(|inv| &self.num * &inv)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("product of nonzero dens")
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::from_poly(LaurentPoly::one())
    }
}
