//! Canonical text and JSON forms of [`LaurentPoly`].
//!
//! Text: terms in descending monomial order joined by ` + ` / ` - `, each a
//! coefficient (omitted when it is 1) followed by `*`-joined factors, e.g.
//! `3/2*q^(-1/2)*a1^2 + 1`. Negative or fractional exponents are
//! parenthesized. The zero polynomial prints as `0`.
//!
//! JSON: `[{"coeff": "p/q", "exps": {"var": "e"}}, ...]` in the same order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::check_var_name;
use super::rational::{self, Rational};
use super::{ExactAlgError, HalfInt, LaurentPoly, Monomial};

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{}", rational::format(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", rational::format(&abs))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> ExactAlgError {
        ExactAlgError::Parse {
            input: self.src.to_string(),
            reason: format!("{} at byte {}", reason.into(), self.pos),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.pos < self.bytes.len() && f(self.bytes[self.pos]) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<Rational, ExactAlgError> {
        self.skip_ws();
        let n = self.take_while(|b| b.is_ascii_digit());
        if n.is_empty() {
            return Err(self.err("expected a number"));
        }
        let mut text = n.to_string();
        if self.eat(b'/') {
            self.skip_ws();
            let d = self.take_while(|b| b.is_ascii_digit());
            text = format!("{n}/{d}");
        }
        rational::parse(&text).map_err(|_| self.err("bad rational"))
    }

    fn exponent(&mut self) -> Result<HalfInt, ExactAlgError> {
        let parens = self.eat(b'(');
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        self.take_while(|b| b.is_ascii_digit());
        if parens && self.eat(b'/') {
            self.skip_ws();
            self.take_while(|b| b.is_ascii_digit());
        }
        let text: String = self.src[start..self.pos].chars().filter(|c| !c.is_whitespace()).collect();
        let e = text.trim_start_matches('+').parse::<HalfInt>().map_err(|_| self.err("bad exponent"))?;
        if parens && !self.eat(b')') {
            return Err(self.err("expected ')'"));
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Monomial, ExactAlgError> {
        self.skip_ws();
        let name = self.take_while(|b| b.is_ascii_alphanumeric() || b == b'_');
        check_var_name(name).map_err(|_| self.err(format!("bad variable name {name:?}")))?;
        let e = if self.eat(b'^') { self.exponent()? } else { HalfInt::ONE };
        Monomial::var(name, e)
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ExactAlgError> {
        let mut coeff = Rational::one();
        let mut mono = Monomial::one();
        let mut first = true;
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => coeff *= self.number()?,
                Some(_) => mono = mono.mul(&self.factor()?),
                None if first => return Err(self.err("expected a term")),
                None => return Err(self.err("dangling '*'")),
            }
            first = false;
            if !self.eat(b'*') {
                return Ok((mono, coeff));
            }
        }
    }

    fn poly(&mut self) -> Result<LaurentPoly, ExactAlgError> {
        let mut terms = Vec::new();
        let mut sign = if self.eat(b'-') {
            -Rational::one()
        } else {
            self.eat(b'+');
            Rational::one()
        };
        loop {
            let (m, c) = self.term()?;
            terms.push((m, c * &sign));
            if self.eat(b'+') {
                sign = Rational::one();
            } else if self.eat(b'-') {
                sign = -Rational::one();
            } else if self.peek().is_none() {
                return Ok(LaurentPoly::from_terms(terms));
            } else {
                return Err(self.err("unexpected character"));
            }
        }
    }
}

impl FromStr for LaurentPoly {
    type Err = ExactAlgError;

    /// Accepts the canonical text form and anything looser in factor order,
    /// whitespace or repeated monomials.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, bytes: s.as_bytes(), pos: 0 };
        p.poly()
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    coeff: String,
    exps: BTreeMap<String, String>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<JsonTerm> = self
            .terms()
            .rev()
            .map(|(m, c)| JsonTerm {
                coeff: rational::format(c),
                exps: m.iter().map(|(v, e)| (v.to_string(), e.to_string())).collect(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<JsonTerm>::deserialize(d)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let c = rational::parse(&t.coeff).map_err(D::Error::custom)?;
            let mut exps = Vec::new();
            for (v, e) in &t.exps {
                exps.push((v.as_str(), e.parse::<HalfInt>().map_err(D::Error::custom)?));
            }
            out.push((Monomial::from_pairs(exps).map_err(D::Error::custom)?, c));
        }
        Ok(LaurentPoly::from_terms(out))
    }
}

/// Serde adapter writing a polynomial as its canonical text.
pub mod as_text {
    use super::*;

    pub fn serialize<S: Serializer>(p: &LaurentPoly, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<LaurentPoly, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// Serde adapter for a list of polynomials in text form.
pub mod vec_as_text {
    use super::*;

    pub fn serialize<S: Serializer>(ps: &[LaurentPoly], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(ps.iter().map(|p| p.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<LaurentPoly>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_example() {
        let p: LaurentPoly = "1 + a1^2*3/2*q^(-1/2)".parse().unwrap();
        assert_eq!(p.to_string(), "3/2*q^(-1/2)*a1^2 + 1");
    }

    #[test]
    fn signs_and_zero() {
        let p: LaurentPoly = "-x + 2 - 3*y^(-1)".parse().unwrap();
        assert_eq!(p.to_string().parse::<LaurentPoly>().unwrap(), p);
        assert_eq!("x - x".parse::<LaurentPoly>().unwrap().to_string(), "0");
        assert_eq!("0".parse::<LaurentPoly>().unwrap(), LaurentPoly::zero());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "a +", "a^(1/3)", "a**b", "2a", "a^(1/2)", "(a)"] {
            assert!(bad.parse::<LaurentPoly>().is_err(), "{bad}");
        }
    }

    #[test]
    fn json_form() {
        let p: LaurentPoly = "3/2*q^(-1/2)*a1^2 + 1".parse().unwrap();
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"[{"coeff":"3/2","exps":{"a1":"2","q":"-1/2"}},{"coeff":"1","exps":{}}]"#);
        assert_eq!(serde_json::from_str::<LaurentPoly>(&js).unwrap(), p);
    }
}
