use std::fmt;

use super::{ExactAlgError, LaurentPoly};

/// A square matrix over the Laurent ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMatrix {
    size: usize,
    entries: Vec<LaurentPoly>,
}

impl SymbolicMatrix {
    pub fn zero(size: usize) -> Self {
        SymbolicMatrix { size, entries: vec![LaurentPoly::zero(); size * size] }
    }

    pub fn identity(size: usize) -> Self {
        Self::diagonal((0..size).map(|_| LaurentPoly::one()).collect())
    }

    pub fn diagonal(diag: Vec<LaurentPoly>) -> Self {
        let mut m = Self::zero(diag.len());
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> LaurentPoly) -> Self {
        let entries = (0..size * size).map(|k| f(k / size, k % size)).collect();
        SymbolicMatrix { size, entries }
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self, ExactAlgError> {
        let size = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != size) {
            return Err(ExactAlgError::DimensionMismatch(size, r.len()));
        }
        Ok(SymbolicMatrix { size, entries: rows.into_iter().flatten().collect() })
    }

    /// The permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zero(perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, LaurentPoly::one());
        }
        m
    }

    /// Block-diagonal matrix `diag(a, b)`.
    pub fn block_diag(a: &SymbolicMatrix, b: &SymbolicMatrix) -> Self {
        let n = a.size + b.size;
        Self::from_fn(n, |i, j| match (i < a.size, j < a.size) {
            (true, true) => a.get(i, j).clone(),
            (false, false) => b.get(i - a.size, j - a.size).clone(),
            _ => LaurentPoly::zero(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.size + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        SymbolicMatrix { size: self.size, entries: self.entries.iter().map(f).collect() }
    }

    pub fn mul(&self, rhs: &SymbolicMatrix) -> Result<Self, ExactAlgError> {
        if self.size != rhs.size {
            return Err(ExactAlgError::DimensionMismatch(self.size, rhs.size));
        }
        let n = self.size;
        Ok(Self::from_fn(n, |i, j| {
            (0..n)
                .filter(|&k| !self.get(i, k).is_zero() && !rhs.get(k, j).is_zero())
                .map(|k| self.get(i, k) * rhs.get(k, j))
                .sum()
        }))
    }

    /// Product of a chain of matrices, left to right.
    pub fn product<'a>(ms: impl IntoIterator<Item = &'a SymbolicMatrix>) -> Result<Self, ExactAlgError> {
        let mut it = ms.into_iter();
        let first = it.next().cloned().unwrap_or_else(|| Self::identity(0));
        it.try_fold(first, |acc, m| acc.mul(m))
    }

    /// The diagonal entries, if every off-diagonal entry vanishes.
    pub fn as_diagonal(&self) -> Option<Vec<LaurentPoly>> {
        for i in 0..self.size {
            for j in 0..self.size {
                if i != j && !self.get(i, j).is_zero() {
                    return None;
                }
            }
        }
        Some((0..self.size).map(|i| self.get(i, i).clone()).collect())
    }

    /// Inverse of a diagonal matrix with unit entries.
    pub fn diagonal_inverse(&self) -> Result<Self, ExactAlgError> {
        let d = self.as_diagonal().ok_or(ExactAlgError::NotAUnit("non-diagonal matrix".into()))?;
        Ok(Self::diagonal(d.iter().map(LaurentPoly::inverse_unit).collect::<Result<_, _>>()?))
    }

    /// First `(row, col)` where the two matrices differ.
    pub fn first_mismatch(&self, other: &SymbolicMatrix) -> Option<(usize, usize)> {
        if self.size != other.size {
            return Some((0, 0));
        }
        (0..self.size * self.size)
            .find(|&k| self.entries[k] != other.entries[k])
            .map(|k| (k / self.size, k % self.size))
    }

    /// Division-free determinant: expansion over column subsets, row by row.
    pub fn determinant(&self) -> LaurentPoly {
        let n = self.size;
        if n == 0 {
            return LaurentPoly::one();
        }
        let mut dp: Vec<LaurentPoly> = vec![LaurentPoly::zero(); 1 << n];
        dp[0] = LaurentPoly::one();
        for mask in 0usize..(1 << n) {
            if dp[mask].is_zero() {
                continue;
            }
            let row = mask.count_ones() as usize;
            if row == n {
                continue;
            }
            for col in 0..n {
                if mask & (1 << col) != 0 || self.get(row, col).is_zero() {
                    continue;
                }
                // columns already used to the right of `col` each add an inversion
                let inversions = (mask >> (col + 1)).count_ones();
                let t = &dp[mask] * self.get(row, col);
                let next = mask | (1 << col);
                if inversions % 2 == 0 {
                    dp[next] += &t;
                } else {
                    dp[next] -= &t;
                }
            }
        }
        dp.pop().unwrap()
    }
}

impl fmt::Display for SymbolicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.size {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.size {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn m(rows: &[&[&str]]) -> SymbolicMatrix {
        SymbolicMatrix::from_rows(rows.iter().map(|r| r.iter().map(|s| p(s)).collect()).collect()).unwrap()
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[&["a", "b"], &["c", "d"]]).determinant(), p("a*d - b*c"));
        let v = m(&[&["1", "x", "x^2"], &["1", "y", "y^2"], &["1", "z", "z^2"]]);
        assert_eq!(v.determinant(), p("y - x") * p("z - x") * p("z - y"));
        assert_eq!(SymbolicMatrix::identity(5).determinant(), p("1"));
        assert_eq!(SymbolicMatrix::permutation(&[1, 0, 2]).determinant(), p("-1"));
    }

    #[test]
    fn products_and_identity() {
        let a = m(&[&["a", "b"], &["0", "u^(-1)"]]);
        let id = SymbolicMatrix::identity(2);
        assert_eq!(a.mul(&id).unwrap(), a);
        assert_eq!(id.mul(&a).unwrap(), a);
        let inv = SymbolicMatrix::diagonal(vec![p("u"), p("2*v")]).diagonal_inverse().unwrap();
        assert_eq!(inv, SymbolicMatrix::diagonal(vec![p("u^(-1)"), p("1/2*v^(-1)")]));
    }
}
