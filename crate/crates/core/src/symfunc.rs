//! Partitions, complete homogeneous and Schur polynomials, and the Cauchy
//! identity.
//!
//! Schur polynomials are computed by the Jacobi-Trudi determinant in the
//! complete homogeneous polynomials, which needs no division. The bialternant
//! quotient is kept as an independent oracle.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_traits::One;

use crate::exactalg::{
    series_expand, ExactAlgError, LaurentPoly, Rational, RationalFunction, SymbolicMatrix, TruncatedSeries,
};
use crate::report::{Check, SuiteReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymFuncError {
    #[error("parts must be weakly decreasing: {0:?}")]
    NotDecreasing(Vec<u32>),
    #[error("partition of length {length} needs at least {length} variables, got {vars}")]
    LengthExceedsVariables { length: usize, vars: usize },
    #[error("bialternant oracle needs pairwise distinct variables")]
    RepeatedVariables,
    #[error("bialternant division was inexact")]
    InexactDivision,
    #[error(transparent)]
    Alg(#[from] ExactAlgError),
}

/// A weakly decreasing tuple of positive integers (trailing zeros dropped).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, SymFuncError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(SymFuncError::NotDecreasing(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    /// Part `i` (0-based), zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to `n` entries.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        (0..n.max(self.length())).map(|i| self.part(i)).collect()
    }

    /// All partitions of `weight` with at most `max_len` parts, in
    /// lexicographically descending order.
    pub fn of_weight(weight: u32, max_len: usize) -> Vec<Partition> {
        fn rec(rem: u32, max_part: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            if slots == 0 {
                return;
            }
            for p in (1..=rem.min(max_part)).rev() {
                cur.push(p);
                rec(rem - p, p, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(weight, weight, max_len, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions with weight at most `max_weight`, by increasing weight.
    pub fn up_to(max_weight: u32, max_len: usize) -> Vec<Partition> {
        (0..=max_weight).flat_map(|w| Self::of_weight(w, max_len)).collect()
    }

    /// Partitions obtained by adding one box.
    pub fn add_box(&self) -> Vec<Partition> {
        (0..=self.length())
            .filter(|&i| i == 0 || self.part(i - 1) > self.part(i))
            .map(|i| {
                let mut p = self.padded(self.length() + 1);
                p[i] += 1;
                Partition::new(p).expect("adding a box at a corner keeps the order")
            })
            .collect()
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = SymFuncError;
    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn var_list(names: &[&str]) -> Result<Vec<LaurentPoly>, ExactAlgError> {
    names.iter().map(|v| LaurentPoly::var(v)).collect()
}

/// `h_0, ..., h_max` evaluated at `values`, by the recursion
/// `h_k(x, rest) = h_k(rest) + x * h_{k-1}(x, rest)`.
pub fn complete_homogeneous_upto(max: usize, values: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let mut h = vec![LaurentPoly::zero(); max + 1];
    h[0] = LaurentPoly::one();
    for x in values {
        for k in 1..=max {
            let next = &h[k] + &(x * &h[k - 1]);
            h[k] = next;
        }
    }
    h
}

/// `h_k` in the named variables.
pub fn complete_homogeneous(k: usize, vars: &[&str]) -> Result<LaurentPoly, SymFuncError> {
    Ok(complete_homogeneous_upto(k, &var_list(vars)?).pop().unwrap())
}

/// Schur polynomials in a fixed list of values, sharing one table of `h_k`.
#[derive(Clone, Debug)]
pub struct SchurEngine {
    values: Vec<LaurentPoly>,
    h: Vec<LaurentPoly>,
}

impl SchurEngine {
    pub fn new(values: Vec<LaurentPoly>) -> Self {
        SchurEngine { values, h: vec![LaurentPoly::one()] }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    fn ensure(&mut self, degree: usize) {
        if self.h.len() <= degree {
            self.h = complete_homogeneous_upto(degree, &self.values);
        }
    }

    pub fn h(&mut self, k: i64) -> LaurentPoly {
        if k < 0 {
            return LaurentPoly::zero();
        }
        self.ensure(k as usize);
        self.h[k as usize].clone()
    }

    /// Jacobi-Trudi: `det(h_{lambda_i - i + j})`. Zero when the partition is
    /// longer than the number of variables.
    pub fn schur(&mut self, lambda: &Partition) -> LaurentPoly {
        let l = lambda.length();
        if l > self.values.len() {
            return LaurentPoly::zero();
        }
        if l == 0 {
            return LaurentPoly::one();
        }
        self.ensure(lambda.part(0) as usize + l);
        let m = SymbolicMatrix::from_fn(l, |i, j| {
            let k = lambda.part(i) as i64 - i as i64 + j as i64;
            if k < 0 {
                LaurentPoly::zero()
            } else {
                self.h[k as usize].clone()
            }
        });
        m.determinant()
    }
}

/// Schur polynomial of `lambda` in the named variables.
pub fn schur(lambda: &Partition, vars: &[&str]) -> Result<LaurentPoly, SymFuncError> {
    schur_in(lambda, var_list(vars)?)
}

/// Schur polynomial of `lambda` evaluated at arbitrary Laurent values.
pub fn schur_in(lambda: &Partition, values: Vec<LaurentPoly>) -> Result<LaurentPoly, SymFuncError> {
    Ok(SchurEngine::new(values).schur(lambda))
}

/// Like [`schur`], but a partition longer than the variable list is an error
/// instead of zero.
pub fn schur_strict(lambda: &Partition, vars: &[&str]) -> Result<LaurentPoly, SymFuncError> {
    if lambda.length() > vars.len() {
        return Err(SymFuncError::LengthExceedsVariables { length: lambda.length(), vars: vars.len() });
    }
    schur(lambda, vars)
}

/// `det(x_i^{lambda_j + n - j}) / prod_{i<j} (x_i - x_j)`, dividing one
/// linear factor at a time. Independent of the Jacobi-Trudi path.
pub fn schur_bialternant_oracle(lambda: &Partition, vars: &[&str]) -> Result<LaurentPoly, SymFuncError> {
    let n = vars.len();
    if lambda.length() > n {
        return Err(SymFuncError::LengthExceedsVariables { length: lambda.length(), vars: n });
    }
    let mut sorted = vars.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != n {
        return Err(SymFuncError::RepeatedVariables);
    }
    let x = var_list(vars)?;
    let alt = SymbolicMatrix::from_fn(n, |i, j| x[i].pow(lambda.part(j) + (n - 1 - j) as u32));
    let mut q = alt.determinant();
    for i in 0..n {
        for j in i + 1..n {
            q = q.div_exact(&(&x[i] - &x[j])).map_err(|e| match e {
                ExactAlgError::InexactDivision => SymFuncError::InexactDivision,
                other => other.into(),
            })?;
        }
    }
    Ok(q)
}

/// `1 / prod_{i,j} (1 - x_i y_j X)` as a rational function.
pub fn cauchy_kernel(x: &[LaurentPoly], y: &[LaurentPoly], series_var: &str) -> Result<RationalFunction, ExactAlgError> {
    let t = LaurentPoly::var(series_var)?;
    let den: LaurentPoly = x
        .iter()
        .flat_map(|a| y.iter().map(move |b| (a, b)))
        .map(|(a, b)| &LaurentPoly::one() - &(&(a * b) * &t))
        .product();
    RationalFunction::new(LaurentPoly::one(), den)
}

/// `sum_{|lambda| <= N} s_lambda(x) s_lambda(y) X^{|lambda|}` as a series.
pub fn cauchy_sum(x: &[LaurentPoly], y: &[LaurentPoly], series_var: &str, order: usize) -> Result<TruncatedSeries, ExactAlgError> {
    let mut ex = SchurEngine::new(x.to_vec());
    let mut ey = SchurEngine::new(y.to_vec());
    let max_len = x.len().min(y.len());
    let coeffs = (0..=order)
        .map(|w| {
            Partition::of_weight(w as u32, max_len)
                .iter()
                .map(|l| &ex.schur(l) * &ey.schur(l))
                .sum()
        })
        .collect();
    TruncatedSeries::new(series_var, coeffs)
}

/// Checks the Cauchy identity for `n` x-variables and `m` y-variables
/// through degree `order`.
pub fn cauchy_check(n: usize, m: usize, order: usize) -> SuiteReport {
    let id = format!("cauchy/n={n}/m={m}/N={order}");
    let desc = format!("sum s_l(a)s_l(b)X^|l| = prod (1 - a_i b_j X)^-1 for {n}x{m} variables to X^{order}");
    let start = Instant::now();
    let outcome = (|| -> Result<Option<String>, ExactAlgError> {
        let a: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
        let b: Vec<String> = (1..=m).map(|j| format!("b{j}")).collect();
        let a = a.iter().map(|v| LaurentPoly::var(v)).collect::<Result<Vec<_>, _>>()?;
        let b = b.iter().map(|v| LaurentPoly::var(v)).collect::<Result<Vec<_>, _>>()?;
        let lhs = cauchy_sum(&a, &b, "X", order)?;
        let rhs = series_expand(&cauchy_kernel(&a, &b, "X")?, "X", order)?;
        Ok(lhs.first_difference(&rhs)?.map(|k| {
            format!("X^{k}: sum gives {}, product gives {}", lhs.coeffs()[k], rhs.coeffs()[k])
        }))
    })();
    let check = match outcome {
        Ok(None) => Check::pass(id, desc),
        Ok(Some(w)) => Check::fail(id, desc, w),
        Err(e) => Check::fail(id, desc, e.to_string()),
    };
    SuiteReport::from_checks("cauchy", vec![check.timed(start)])
}

/// Weyl dimension formula `prod_{i<j} (l_i - l_j + j - i)/(j - i)`, the
/// value of `s_lambda` at `n` ones.
pub fn weyl_dimension(lambda: &Partition, n: usize) -> Rational {
    let l = lambda.padded(n);
    let mut d = Rational::one();
    for i in 0..n {
        for j in i + 1..n {
            let num = l[i] as i64 - l[j] as i64 + (j - i) as i64;
            d *= Rational::new(num.into(), ((j - i) as i64).into());
        }
    }
    d
}

/// Partitions `mu` of length at most `n` with `mu / lambda` a horizontal
/// strip of `k` boxes: `mu_1 >= lambda_1 >= mu_2 >= lambda_2 >= ...`.
pub fn horizontal_strips(lambda: &Partition, k: u32, n: usize) -> Vec<Partition> {
    let l = lambda.padded(n);
    Partition::of_weight(lambda.weight() + k, n)
        .into_iter()
        .filter(|mu| {
            let m = mu.padded(n);
            (0..n).all(|i| m[i] >= l[i] && (i + 1 == n || l[i] >= m[i + 1]))
        })
        .collect()
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn first_failure(
    parts: &[Partition],
    mut test: impl FnMut(&Partition) -> Result<Option<String>, SymFuncError>,
) -> Result<Option<String>, SymFuncError> {
    for l in parts {
        if let Some(w) = test(l)? {
            return Ok(Some(format!("lambda = {l}: {w}")));
        }
    }
    Ok(None)
}

fn schur_check(id: String, desc: String, f: impl FnOnce() -> Result<Option<String>, SymFuncError>) -> Check {
    let start = Instant::now();
    match f() {
        Ok(w) => Check::from_witness(id, desc, w),
        Err(e) => Check::error(id, desc, e.to_string()),
    }
    .timed(start)
}

/// Jacobi-Trudi against the bialternant quotient, the dimension formula at
/// all ones, and the Pieri rule for `h_1` and `h_2`, in `n` variables. One
/// check per `(kind, weight)`.
pub fn schur_checks(n: usize, max_weight: u32, pieri_weight: u32) -> Vec<Check> {
    let mut checks = Vec::new();
    let owned = names(n);
    let vars: Vec<&str> = owned.iter().map(String::as_str).collect();
    let ones: std::collections::BTreeMap<String, Rational> =
        owned.iter().map(|v| (v.clone(), Rational::one())).collect();
    for w in 0..=max_weight {
        let parts = Partition::of_weight(w, n);
        checks.push(schur_check(
            format!("schur/oracle/n={n}/w={w}"),
            format!("Jacobi-Trudi equals the bialternant quotient for |lambda| = {w} in {n} variables"),
            || {
                first_failure(&parts, |l| {
                    let jt = schur(l, &vars)?;
                    let bi = schur_bialternant_oracle(l, &vars)?;
                    Ok((jt != bi).then(|| format!("{jt} vs {bi}")))
                })
            },
        ));
        checks.push(schur_check(
            format!("schur/dimension/n={n}/w={w}"),
            format!("s_lambda(1, ..., 1) is the Weyl dimension for |lambda| = {w} in {n} variables"),
            || {
                first_failure(&parts, |l| {
                    let v = crate::exactalg::evaluate_rational(&schur(l, &vars)?, &ones)?;
                    let d = weyl_dimension(l, n);
                    Ok((v != d).then(|| format!("{v} vs {d}")))
                })
            },
        ));
        if w > pieri_weight {
            continue;
        }
        for k in 1..=2u32 {
            checks.push(schur_check(
                format!("schur/pieri/n={n}/w={w}/k={k}"),
                format!("s_lambda h_{k} is the sum over horizontal {k}-strips for |lambda| = {w} in {n} variables"),
                || {
                    let hk = complete_homogeneous(k as usize, &vars)?;
                    first_failure(&parts, |l| {
                        let lhs = &schur(l, &vars)? * &hk;
                        let mut rhs = LaurentPoly::zero();
                        for mu in horizontal_strips(l, k, n) {
                            rhs += &schur(&mu, &vars)?;
                        }
                        Ok((lhs != rhs).then(|| format!("{lhs} vs {rhs}")))
                    })
                },
            ));
        }
    }
    checks
}

pub fn verify_schur(max_weight: u32, max_vars: usize, pieri_weight: u32) -> SuiteReport {
    let checks = (1..=max_vars).flat_map(|n| schur_checks(n, max_weight, pieri_weight)).collect();
    SuiteReport::from_checks("schur", checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_invariants() {
        assert_eq!(part(&[3, 1, 0, 0]).parts(), &[3, 1]);
        assert_eq!(part(&[3, 1, 1]).weight(), 5);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(serde_json::to_string(&part(&[3, 1, 1])).unwrap(), "[3,1,1]");
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }

    #[test]
    fn enumeration_order() {
        let ps: Vec<Vec<u32>> = Partition::of_weight(4, 4).into_iter().map(Vec::from).collect();
        assert_eq!(ps, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(Partition::of_weight(4, 2).len(), 3);
        assert_eq!(Partition::of_weight(0, 0), vec![Partition::empty()]);
    }

    #[test]
    fn adding_boxes() {
        let got: Vec<Vec<u32>> = part(&[2, 1]).add_box().into_iter().map(Vec::from).collect();
        assert_eq!(got, vec![vec![3, 1], vec![2, 2], vec![2, 1, 1]]);
    }

    #[test]
    fn complete_homogeneous_examples() {
        assert_eq!(complete_homogeneous(1, &["a1", "a2"]).unwrap(), p("a1 + a2"));
        assert_eq!(complete_homogeneous(2, &["a1", "a2"]).unwrap(), p("a1^2 + a1*a2 + a2^2"));
        assert_eq!(complete_homogeneous(3, &["a"]).unwrap(), p("a^3"));
        assert_eq!(complete_homogeneous(0, &["a", "b"]).unwrap(), p("1"));
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur(&part(&[1]), &["a1", "a2"]).unwrap(), p("a1 + a2"));
        assert_eq!(schur(&part(&[2, 1]), &["a1", "a2"]).unwrap(), p("a1^2*a2 + a1*a2^2"));
        assert_eq!(schur(&part(&[1, 1, 1]), &["a1", "a2"]).unwrap(), p("0"));
        assert!(schur_strict(&part(&[1, 1, 1]), &["a1", "a2"]).is_err());
        assert_eq!(schur(&Partition::empty(), &["a1"]).unwrap(), p("1"));
    }

    #[test]
    fn bialternant_examples() {
        assert_eq!(schur_bialternant_oracle(&part(&[1]), &["a1", "a2"]).unwrap(), p("a1 + a2"));
        assert_eq!(schur_bialternant_oracle(&part(&[2]), &["a1", "a2"]).unwrap(), p("a1^2 + a1*a2 + a2^2"));
        assert_eq!(
            schur_bialternant_oracle(&part(&[2, 1]), &["a1", "a2"]).unwrap(),
            p("a1^2*a2 + a1*a2^2")
        );
        assert_eq!(schur_bialternant_oracle(&part(&[1]), &["a", "a"]), Err(SymFuncError::RepeatedVariables));
    }

    #[test]
    fn single_row_schur_is_complete_homogeneous() {
        let vars = ["a1", "a2", "a3"];
        for n in 1..=3 {
            for k in 0..=4u32 {
                let lam = part(&[k]);
                let h = complete_homogeneous(k as usize, &vars[..n]).unwrap();
                assert_eq!(schur_bialternant_oracle(&lam, &vars[..n]).unwrap(), h, "k={k} n={n}");
                assert_eq!(schur(&lam, &vars[..n]).unwrap(), h);
            }
        }
    }

    #[test]
    fn cauchy_small_cases() {
        assert!(cauchy_check(1, 1, 3).passed());
        assert!(cauchy_check(2, 1, 4).passed());
        assert!(cauchy_check(3, 2, 6).passed());
    }

    #[test]
    fn schur_suite_and_dimensions() {
        assert_eq!(weyl_dimension(&part(&[1]), 3), Rational::from_integer(3.into()));
        assert_eq!(weyl_dimension(&part(&[2, 1]), 3), Rational::from_integer(8.into()));
        assert_eq!(horizontal_strips(&part(&[1]), 1, 2), vec![part(&[2]), part(&[1, 1])]);
        let r = verify_schur(6, 4, 4);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}