//! The reciprocity parameter map `(s, w) -> (s', w')` and the finite matrix
//! identities used when the Weyl element `w_12` exchanges the two local
//! test vectors.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::exactalg::text::as_text;
use crate::exactalg::{rational, ExactAlgError, LaurentPoly};
use crate::report::{Check, SuiteReport};

pub use crate::exactalg::SymbolicMatrix;

/// A pair `(s, w)` of exact affine expressions for GL(n+1) x GL(n) x GL(n-1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPair {
    #[serde(with = "as_text")]
    pub s: LaurentPoly,
    #[serde(with = "as_text")]
    pub w: LaurentPoly,
    pub n: usize,
}

impl ParamPair {
    pub fn new(s: LaurentPoly, w: LaurentPoly, n: usize) -> Self {
        assert!(n >= 2, "rank must be at least 2");
        ParamPair { s, w, n }
    }

    /// `(s, w)` as free symbols.
    pub fn symbolic(n: usize) -> Self {
        Self::new(LaurentPoly::var("s").unwrap(), LaurentPoly::var("w").unwrap(), n)
    }

    pub fn rational(s: rational::Rational, w: rational::Rational, n: usize) -> Self {
        Self::new(LaurentPoly::constant(s), LaurentPoly::constant(w), n)
    }
}

/// `s' = (1 + (n-1) w - s)/n`, `w' = ((n+1) s + w - 1)/n`.
pub fn dual_params(p: &ParamPair) -> ParamPair {
    let n = p.n as i64;
    let inv_n = rational::frac(1, n);
    let one = LaurentPoly::one();
    let s = (&(&one + &p.w.scale(&rational::int(n - 1))) - &p.s).scale(&inv_n);
    let w = (&(&p.s.scale(&rational::int(n + 1)) + &p.w) - &one).scale(&inv_n);
    ParamPair { s, w, n: p.n }
}

fn half() -> LaurentPoly {
    LaurentPoly::constant(rational::frac(1, 2))
}

fn mismatch(label: &str, lhs: &LaurentPoly, rhs: &LaurentPoly) -> Option<String> {
    (lhs != rhs).then(|| format!("{label}: {lhs} != {rhs}"))
}

/// Involution, the central fixed point, and (for n = 2) the rank-two form
/// of the map, for the given map.
fn involution_check(n: usize, map: &dyn Fn(&ParamPair) -> ParamPair) -> Check {
    let p = ParamPair::symbolic(n);
    let back = map(&map(&p));
    let centre = map(&ParamPair::new(half(), half(), n));
    let mut witness = mismatch("dual(dual(s))", &back.s, &p.s)
        .or_else(|| mismatch("dual(dual(w))", &back.w, &p.w))
        .or_else(|| mismatch("s' at (1/2, 1/2)", &centre.s, &half()))
        .or_else(|| mismatch("w' at (1/2, 1/2)", &centre.w, &half()));
    if n == 2 && witness.is_none() {
        let d = map(&p);
        let s2 = (&(&LaurentPoly::one() + &p.w) - &p.s).scale(&rational::frac(1, 2));
        let w2 = (&(&p.s.scale(&rational::int(3)) + &p.w) - &LaurentPoly::one()).scale(&rational::frac(1, 2));
        witness = mismatch("s' = (1 + w - s)/2", &d.s, &s2).or_else(|| mismatch("w' = (3s + w - 1)/2", &d.w, &w2));
    }
    Check::from_witness(
        format!("involution/n={n:02}"),
        format!("the parameter map is an involution fixing (1/2, 1/2) for n = {n}"),
        witness,
    )
}

fn exponent_checks(n: usize, map: &dyn Fn(&ParamPair) -> ParamPair) -> Vec<Check> {
    let p = ParamPair::symbolic(n);
    let d = map(&p);
    let nn = rational::int(n as i64);
    let one = LaurentPoly::one();
    let sum = &(&p.s + &p.w) - &one;
    let lhs = (&d.s - &half()).scale(&nn);
    let rhs = &(&half() - &p.s).scale(&nn) + &sum.scale(&rational::int(n as i64 - 1));
    let sum_dual = &(&d.s + &d.w) - &one;
    vec![
        Check::from_witness(
            format!("exponents/n={n:02}/scaled-s"),
            "n(s' - 1/2) = n(1/2 - s) + (n - 1)(s + w - 1)",
            mismatch("n(s' - 1/2)", &lhs, &rhs),
        ),
        Check::from_witness(
            format!("exponents/n={n:02}/sum"),
            "s' + w' - 1 = s + w - 1",
            mismatch("s' + w' - 1", &sum_dual, &sum),
        ),
    ]
}

/// All parameter identities for the given map at rank `n`.
pub fn verify_involution_and_exponents_with(n: usize, map: &dyn Fn(&ParamPair) -> ParamPair) -> SuiteReport {
    let start = Instant::now();
    let mut checks = vec![involution_check(n, map)];
    checks.extend(exponent_checks(n, map));
    SuiteReport::from_checks("params", checks.into_iter().map(|c| c.timed(start)).collect())
}

pub fn verify_involution_and_exponents(n: usize) -> SuiteReport {
    verify_involution_and_exponents_with(n, &dual_params)
}

fn beta(i: usize) -> LaurentPoly {
    LaurentPoly::var(&format!("beta{i}")).expect("valid name")
}

/// `w_12 = diag(I_{n-1}, [[0, 1], [1, 0]])` in GL(n+1).
pub fn w12(n: usize) -> SymbolicMatrix {
    let mut perm: Vec<usize> = (0..=n).collect();
    perm.swap(n - 1, n);
    SymbolicMatrix::permutation(&perm)
}

/// Identity in GL(n+1) with `beta_1..beta_{n-1}` down column `n`.
pub fn unipotent_l(n: usize) -> SymbolicMatrix {
    let mut m = SymbolicMatrix::identity(n + 1);
    for i in 0..n - 1 {
        m.set(i, n - 1, beta(i + 1));
    }
    m
}

/// Identity in GL(n+1) with `beta_1..beta_{n-1}` down column `n+1` and a zero
/// in position `(n, n+1)`.
pub fn unipotent_q(n: usize) -> SymbolicMatrix {
    let mut m = SymbolicMatrix::identity(n + 1);
    for i in 0..n - 1 {
        m.set(i, n, beta(i + 1));
    }
    m
}

fn matrix_witness(lhs: &SymbolicMatrix, rhs: &SymbolicMatrix) -> Option<String> {
    lhs.first_mismatch(rhs).map(|(i, j)| {
        if lhs.size() != rhs.size() {
            format!("sizes {} vs {}", lhs.size(), rhs.size())
        } else {
            format!("entry ({}, {}): {} vs {}", i + 1, j + 1, lhs.get(i, j), rhs.get(i, j))
        }
    })
}

fn matrix_check(id: String, desc: String, f: impl FnOnce() -> Result<Option<String>, ExactAlgError>) -> Check {
    let start = Instant::now();
    match f() {
        Ok(w) => Check::from_witness(id, desc, w),
        Err(e) => Check::error(id, desc, e.to_string()),
    }
    .timed(start)
}

/// `w_12 U_l(beta) w_12 = U_q(beta)` and `w_12^2 = I`, fully symbolic.
pub fn weyl_conjugation_identity(n: usize) -> SuiteReport {
    let w = w12(n);
    let conj = matrix_check(
        format!("weyl/n={n:02}/conjugation"),
        format!("w12 U_l(beta) w12 = U_q(beta) in GL({})", n + 1),
        || Ok(matrix_witness(&SymbolicMatrix::product([&w, &unipotent_l(n), &w])?, &unipotent_q(n))),
    );
    let square = matrix_check(
        format!("weyl/n={n:02}/square"),
        format!("w12 w12 = I in GL({})", n + 1),
        || Ok(matrix_witness(&w.mul(&w)?, &SymbolicMatrix::identity(n + 1))),
    );
    SuiteReport::from_checks("weyl", vec![conj, square])
}

fn symbolic_block(size: usize) -> SymbolicMatrix {
    SymbolicMatrix::from_fn(size, |i, j| LaurentPoly::var(&format!("h{}_{}", i + 1, j + 1)).expect("valid name"))
}

fn with_tail(h: &SymbolicMatrix, a: LaurentPoly, b: LaurentPoly) -> SymbolicMatrix {
    SymbolicMatrix::block_diag(h, &SymbolicMatrix::diagonal(vec![a, b]))
}

/// The chain `diag(uH, u, 1) = C diag(H, 1, u^{-1}) = C w_12 diag(H, u^{-1}, 1) w_12`
/// with `C = u I_{n+1}` and a symbolic `(n-1) x (n-1)` block `H`, plus its
/// specialization at `u = 1`.
pub fn cusp_invariance_factorization(n: usize) -> SuiteReport {
    let u = LaurentPoly::var("u").expect("valid name");
    let u_inv = u.inverse_unit().expect("u is a unit");
    let one = LaurentPoly::one();
    let h = symbolic_block(n - 1);
    let central = SymbolicMatrix::diagonal(vec![u.clone(); n + 1]);
    let w = w12(n);
    let lhs = with_tail(&h.map(|x| x * &u), u.clone(), one.clone());
    let split = with_tail(&h, one.clone(), u_inv.clone());
    let swapped = with_tail(&h, u_inv, one.clone());

    let first = matrix_check(
        format!("cusp/n={n:02}/central-split"),
        "diag(uH, u, 1) = C diag(H, 1, 1/u)".into(),
        || Ok(matrix_witness(&lhs, &central.mul(&split)?)),
    );
    let second = matrix_check(
        format!("cusp/n={n:02}/weyl-swap"),
        "C diag(H, 1, 1/u) = C w12 diag(H, 1/u, 1) w12".into(),
        || {
            let rhs = SymbolicMatrix::product([&central, &w, &swapped, &w])?;
            Ok(matrix_witness(&central.mul(&split)?, &rhs))
        },
    );
    let third = matrix_check(format!("cusp/n={n:02}/u=1"), "both ends equal diag(H, 1, 1) at u = 1".into(), || {
        let at_one = |m: &SymbolicMatrix| -> Result<SymbolicMatrix, ExactAlgError> {
            let mut out = SymbolicMatrix::zero(m.size());
            for i in 0..m.size() {
                for j in 0..m.size() {
                    out.set(i, j, m.get(i, j).substitute("u", &one)?);
                }
            }
            Ok(out)
        };
        let target = with_tail(&h, one.clone(), one.clone());
        let rhs = SymbolicMatrix::product([&central, &w, &swapped, &w])?;
        Ok(matrix_witness(&at_one(&lhs)?, &target).or(matrix_witness(&at_one(&rhs)?, &target)))
    });
    SuiteReport::from_checks("cusp", vec![first, second, third])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{frac, int};

    #[test]
    fn examples() {
        let d = dual_params(&ParamPair::rational(frac(1, 2), frac(1, 2), 2));
        assert_eq!((d.s.constant_value(), d.w.constant_value()), (Some(frac(1, 2)), Some(frac(1, 2))));
        let d = dual_params(&ParamPair::rational(int(1), int(1), 3));
        assert_eq!((d.s.constant_value(), d.w.constant_value()), (Some(frac(2, 3)), Some(frac(4, 3))));
        let d = dual_params(&ParamPair::symbolic(2));
        assert_eq!(d.s, "1/2 - 1/2*s + 1/2*w".parse().unwrap());
    }

    #[test]
    fn parameter_suites() {
        for n in 2..=10 {
            let r = verify_involution_and_exponents(n);
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.checks.len(), 3);
        }
    }

    #[test]
    fn perturbed_map_is_caught() {
        let eps = LaurentPoly::constant(frac(1, 100));
        let bad = |p: &ParamPair| {
            let d = dual_params(p);
            ParamPair { s: &d.s + &eps, ..d }
        };
        let r = verify_involution_and_exponents_with(2, &bad);
        assert!(!r.passed());
        assert!(r.failures().all(|c| c.witness.as_ref().is_some_and(|w| !w.is_empty())));
    }

    #[test]
    fn matrix_identities() {
        for n in 2..=6 {
            assert!(weyl_conjugation_identity(n).passed(), "n={n}");
        }
        for n in 2..=4 {
            let r = cusp_invariance_factorization(n);
            assert!(r.passed(), "{r:?}");
        }
        assert_eq!(unipotent_q(2).get(0, 2), &beta(1));
        assert!(unipotent_q(2).get(1, 2).is_zero());
    }

    #[test]
    fn wrong_conjugation_is_caught() {
        let n = 3;
        let w = w12(n);
        let got = SymbolicMatrix::product([&w, &unipotent_l(n), &w]).unwrap();
        assert!(matrix_witness(&got, &unipotent_l(n)).is_some());
    }

    #[test]
    fn associativity_spot_check() {
        let a = symbolic_block(3);
        let b = w12(2);
        let c = unipotent_l(2);
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}
