//! Evaluation of Laurent polynomials at concrete points.
//!
//! Rational mode is exact. Half-integer exponents in rational mode need a
//! non-negative binding whose square root is rational. Float mode works in
//! `Complex64` with principal square roots.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::rational::{self, Rational};
use super::{ExactAlgError, LaurentPoly};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(Complex64),
}

impl Value {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Exact(r) => Complex64::new(rational::to_f64(r), 0.0),
            Value::Float(z) => *z,
        }
    }
}

/// Exact when every binding is exact; otherwise evaluates in floats.
pub fn evaluate(p: &LaurentPoly, bindings: &BTreeMap<String, Value>) -> Result<Value, ExactAlgError> {
    let exact: Option<BTreeMap<String, Rational>> = bindings
        .iter()
        .map(|(k, v)| match v {
            Value::Exact(r) => Some((k.clone(), r.clone())),
            Value::Float(_) => None,
        })
        .collect();
    match exact {
        Some(b) => evaluate_rational(p, &b).map(Value::Exact),
        None => {
            let b = bindings.iter().map(|(k, v)| (k.clone(), v.to_complex())).collect();
            evaluate_complex(p, &b).map(Value::Float)
        }
    }
}

pub fn evaluate_rational(p: &LaurentPoly, bindings: &BTreeMap<String, Rational>) -> Result<Rational, ExactAlgError> {
    let mut total = Rational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (v, e) in m.iter() {
            let x = bindings.get(v).ok_or_else(|| ExactAlgError::UnboundVariable(v.to_string()))?;
            let base = if e.is_integer() {
                x.clone()
            } else {
                if x < &Rational::zero() {
                    return Err(ExactAlgError::NegativeUnderHalfExponent(v.to_string()));
                }
                rational::sqrt_exact(x).ok_or_else(|| ExactAlgError::IrrationalSquareRoot(v.to_string()))?
            };
            let k = if e.is_integer() { e.halves() / 2 } else { e.halves() };
            t *= rational::pow(&base, k)?;
        }
        total += t;
    }
    Ok(total)
}

pub fn evaluate_complex(p: &LaurentPoly, bindings: &BTreeMap<String, Complex64>) -> Result<Complex64, ExactAlgError> {
    let mut total = Complex64::zero();
    for (m, c) in p.terms() {
        let mut t = Complex64::new(rational::to_f64(c), 0.0);
        for (v, e) in m.iter() {
            let x = *bindings.get(v).ok_or_else(|| ExactAlgError::UnboundVariable(v.to_string()))?;
            if x.is_zero() && e.halves() < 0 {
                return Err(ExactAlgError::DivisionByZero);
            }
            let (base, k) = if e.is_integer() { (x, e.halves() / 2) } else { (x.sqrt(), e.halves()) };
            let k32 = i32::try_from(k).map_err(|_| ExactAlgError::DivisionByZero)?;
            t *= if k32 >= 0 { base.powi(k32) } else { Complex64::one() / base.powi(-k32) };
        }
        total += t;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{frac, int};

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn bind(pairs: &[(&str, Rational)]) -> BTreeMap<String, Rational> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn exact_examples() {
        assert_eq!(evaluate_rational(&p("a1 + a2"), &bind(&[("a1", int(2)), ("a2", int(3))])), Ok(int(5)));
        assert_eq!(evaluate_rational(&p("q^(-1/2)"), &bind(&[("q", int(4))])), Ok(frac(1, 2)));
        assert_eq!(evaluate_rational(&p("q^(3/2)"), &bind(&[("q", frac(9, 4))])), Ok(frac(27, 8)));
    }

    #[test]
    fn error_cases() {
        assert_eq!(
            evaluate_rational(&p("a^(-1)"), &bind(&[("a", int(0))])),
            Err(ExactAlgError::DivisionByZero)
        );
        assert_eq!(
            evaluate_rational(&p("a + b"), &bind(&[("a", int(0))])),
            Err(ExactAlgError::UnboundVariable("b".into()))
        );
        assert_eq!(
            evaluate_rational(&p("q^(1/2)"), &bind(&[("q", int(-4))])),
            Err(ExactAlgError::NegativeUnderHalfExponent("q".into()))
        );
        assert_eq!(
            evaluate_rational(&p("q^(1/2)"), &bind(&[("q", int(2))])),
            Err(ExactAlgError::IrrationalSquareRoot("q".into()))
        );
    }

    #[test]
    fn mixed_bindings_use_floats() {
        let mut b = BTreeMap::new();
        b.insert("q".to_string(), Value::Exact(int(2)));
        b.insert("a".to_string(), Value::Float(Complex64::new(0.0, 1.0)));
        let v = evaluate(&p("q^(1/2)*a^2"), &b).unwrap().to_complex();
        assert!((v - Complex64::new(-std::f64::consts::SQRT_2, 0.0)).norm() < 1e-12);
    }
}
