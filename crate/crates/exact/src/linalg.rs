//! Dense matrices over `Scalar` with fraction-free elimination.
//!
//! Elimination follows the fraction-free Gauss-Jordan scheme: every update is
//! `(p * a_ij - a_ic * a_kj) / d` with `d` the previous pivot, and the division
//! is exact. At the end every pivot entry equals the same value `D`, so the
//! matrix is `D` times its reduced row echelon form.

use crate::gauss::GaussRat;
use crate::scalar::Scalar;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("inverse needs division by the non-unit {0}")]
    NonUnitPivot(String),
    #[error("inexact division during elimination")]
    Inexact,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj_transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        self.map(|x| x * s)
    }

    pub fn commutator(&self, o: &Matrix) -> Matrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows);
        Matrix::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vcat(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Result of fraction-free Gauss-Jordan: `reduced = denom * rref`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub denom: Scalar,
    pub swaps: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns below `limit` that carry no pivot.
    pub fn free_columns(&self, limit: usize) -> Vec<usize> {
        (0..limit).filter(|c| !self.pivots.contains(c)).collect()
    }
}

fn pick_pivot(m: &Matrix, from: usize, col: usize) -> Option<usize> {
    (from..m.rows)
        .filter(|&r| !m.get(r, col).is_zero())
        .min_by_key(|&r| (m.get(r, col).num_terms(), !m.get(r, col).is_constant()))
}

/// Fraction-free Gauss-Jordan; pivots are only taken in columns `< pivot_limit`.
pub fn gauss_jordan(m: &Matrix, pivot_limit: usize) -> Result<Echelon, LinalgError> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut d = Scalar::one();
    let mut swaps = 0;
    let mut k = 0;
    for c in 0..pivot_limit.min(a.cols) {
        if k == a.rows {
            break;
        }
        let Some(r) = pick_pivot(&a, k, c) else { continue };
        if r != k {
            for j in 0..a.cols {
                a.data.swap(r * a.cols + j, k * a.cols + j);
            }
            swaps += 1;
        }
        let p = a.get(k, c).clone();
        let pivot_row: Vec<Scalar> = a.row(k).to_vec();
        for i in 0..a.rows {
            if i == k {
                continue;
            }
            let aic = a.get(i, c).clone();
            for j in 0..a.cols {
                let aij = a.get(i, j);
                let akj = &pivot_row[j];
                if aij.is_zero() && (aic.is_zero() || akj.is_zero()) {
                    continue;
                }
                let mut num = &p * aij;
                if !aic.is_zero() && !akj.is_zero() {
                    num -= &aic * akj;
                }
                let v = if d.is_one() { num } else { num.div_exact(&d).ok_or(LinalgError::Inexact)? };
                a.set(i, j, v);
            }
        }
        d = p;
        pivots.push(c);
        k += 1;
    }
    Ok(Echelon { reduced: a, pivots, denom: d, swaps })
}

pub fn rank(m: &Matrix) -> Result<usize, LinalgError> {
    Ok(gauss_jordan(m, m.cols)?.rank())
}

/// Basis of the right kernel with polynomial entries.
pub fn nullspace(m: &Matrix) -> Result<Vec<Vec<Scalar>>, LinalgError> {
    let e = gauss_jordan(m, m.cols)?;
    Ok(kernel_from(&e, m.cols))
}

fn kernel_from(e: &Echelon, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for f in e.free_columns(ncols) {
        let mut v = vec![Scalar::zero(); ncols];
        v[f] = e.denom.clone();
        for (k, &c) in e.pivots.iter().enumerate() {
            v[c] = -e.reduced.get(k, f);
        }
        out.push(normalize_vector(v));
    }
    out
}

/// Divides a vector by a unit common factor when one is visible.
fn normalize_vector(v: Vec<Scalar>) -> Vec<Scalar> {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else { return v };
    if v.iter().filter(|x| !x.is_zero()).all(|x| x.div_exact(first).map(|q| q.is_constant()).unwrap_or(false)) {
        if let Some(inv) = first.try_inverse() {
            return v.iter().map(|x| x * &inv).collect();
        }
    }
    v
}

/// Solutions of `A x = b`: `x = numer / denom + span(kernel)`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub numer: Vec<Scalar>,
    pub denom: Scalar,
    pub kernel: Vec<Vec<Scalar>>,
}

impl Solution {
    /// The particular solution when the denominator is a unit.
    pub fn particular(&self) -> Option<Vec<Scalar>> {
        let inv = self.denom.try_inverse()?;
        Some(self.numer.iter().map(|x| x * &inv).collect())
    }
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Solved(Solution),
    /// `y` with `y A = 0` and `y b != 0`.
    Inconsistent { functional: Vec<Scalar>, value: Scalar },
}

pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<SolveOutcome, LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::Shape(format!("rhs length {} vs {} rows", b.len(), a.rows)));
    }
    let bcol = Matrix::from_fn(a.rows, 1, |i, _| b[i].clone());
    let aug = a.hcat(&bcol);
    let e = gauss_jordan(&aug, a.cols)?;
    let rk = e.rank();
    if (rk..a.rows).any(|k| !e.reduced.get(k, a.cols).is_zero()) {
        let full = aug.hcat(&Matrix::identity(a.rows));
        let e2 = gauss_jordan(&full, a.cols)?;
        let k = (e2.rank()..a.rows)
            .find(|&k| !e2.reduced.get(k, a.cols).is_zero())
            .expect("inconsistency persists with tracking columns");
        let functional = (0..a.rows).map(|j| e2.reduced.get(k, a.cols + 1 + j).clone()).collect();
        return Ok(SolveOutcome::Inconsistent { functional, value: e2.reduced.get(k, a.cols).clone() });
    }
    let mut numer = vec![Scalar::zero(); a.cols];
    for (k, &c) in e.pivots.iter().enumerate() {
        numer[c] = e.reduced.get(k, a.cols).clone();
    }
    let (numer, denom) = if let Some(inv) = e.denom.try_inverse() {
        (numer.iter().map(|x| x * &inv).collect(), Scalar::one())
    } else if rk == 0 {
        (numer, Scalar::one())
    } else {
        (numer, e.denom.clone())
    };
    Ok(SolveOutcome::Solved(Solution { numer, denom, kernel: kernel_from(&e, a.cols) }))
}

pub fn determinant(m: &Matrix) -> Result<Scalar, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::Shape("determinant of a non-square matrix".into()));
    }
    if m.rows == 0 {
        return Ok(Scalar::one());
    }
    let e = gauss_jordan(m, m.cols)?;
    if e.rank() < m.rows {
        return Ok(Scalar::zero());
    }
    Ok(if e.swaps % 2 == 1 { -&e.denom } else { e.denom })
}

/// Exact inverse; the determinant must divide the adjugate entries.
pub fn inverse(m: &Matrix) -> Result<Matrix, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::Shape("inverse of a non-square matrix".into()));
    }
    let n = m.rows;
    let e = gauss_jordan(&m.hcat(&Matrix::identity(n)), n)?;
    if e.rank() < n {
        return Err(LinalgError::Singular);
    }
    let mut out = Matrix::zeros(n, n);
    let inv = e.denom.try_inverse();
    for i in 0..n {
        for j in 0..n {
            let x = e.reduced.get(i, n + j);
            let v = match &inv {
                Some(u) => x * u,
                None => x
                    .div_exact(&e.denom)
                    .ok_or_else(|| LinalgError::NonUnitPivot(e.denom.to_string()))?,
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Sylvester inertia `(positive, negative, zero)` of a constant Hermitian matrix.
pub fn inertia(m: &Matrix) -> Option<(usize, usize, usize)> {
    let n = m.rows;
    let mut a: Vec<Vec<GaussRat>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).as_constant()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        let diag = (k..n).find(|&i| !a[i][i].is_zero());
        let idx = match diag {
            Some(i) => i,
            None => {
                let Some((i, j)) = (k..n)
                    .flat_map(|i| (k..n).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero())
                else {
                    break;
                };
                // replace basis vector i by v_i + c v_j so the new diagonal is 2 Re(c a_ji)
                let c = if !a[j][i].re.is_zero() { GaussRat::one() } else { GaussRat::i() };
                for t in 0..n {
                    let add = &c * &a[j][t];
                    a[i][t] = &a[i][t] + &add;
                }
                let cc = c.conj();
                for t in 0..n {
                    let add = &a[t][j] * &cc;
                    a[t][i] = &a[t][i] + &add;
                }
                i
            }
        };
        a.swap(k, idx);
        for row in a.iter_mut() {
            row.swap(k, idx);
        }
        let p = a[k][k].clone();
        debug_assert!(p.is_real());
        if p.re > num_rational::BigRational::from_integer(0.into()) {
            pos += 1;
        } else {
            neg += 1;
        }
        let pinv = p.inv()?;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &pinv;
            for j in k..n {
                let sub = &f * &a[k][j];
                a[i][j] = &a[i][j] - &sub;
            }
        }
        for j in k + 1..n {
            a[k][j] = GaussRat::zero();
        }
        for i in k + 1..n {
            a[i][k] = GaussRat::zero();
        }
        k += 1;
    }
    Some((pos, neg, n - pos - neg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
    }

    #[test]
    fn rank_and_kernel() {
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m).unwrap(), 2);
        let k = nullspace(&m).unwrap();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn determinant_with_swaps() {
        let m = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&m).unwrap(), Scalar::from_int(-1));
        let m = int_matrix(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(determinant(&m).unwrap(), Scalar::from_int(18));
    }

    #[test]
    fn symbolic_inverse_with_monomial_pivots() {
        let a = Scalar::sym("a");
        let m = Matrix::from_rows(vec![
            vec![a.clone(), Scalar::zero()],
            vec![Scalar::i(), &a * &a],
        ]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
    }

    #[test]
    fn symbolic_solve_with_denominator() {
        let a = Scalar::sym("a");
        let m = Matrix::from_rows(vec![vec![&a + &Scalar::one(), Scalar::one()], vec![Scalar::one(), Scalar::one()]]);
        let b = vec![Scalar::one(), Scalar::zero()];
        let SolveOutcome::Solved(s) = solve(&m, &b).unwrap() else { panic!() };
        let lhs = m.mul_vec(&s.numer);
        let rhs: Vec<Scalar> = b.iter().map(|x| x * &s.denom).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inconsistent_system_gives_functional() {
        let m = int_matrix(&[&[1, 1], &[2, 2]]);
        let b = vec![Scalar::one(), Scalar::one()];
        let SolveOutcome::Inconsistent { functional, value } = solve(&m, &b).unwrap() else { panic!() };
        let ya: Vec<Scalar> = (0..2).map(|j| (0..2).map(|i| &functional[i] * m.get(i, j)).sum()).collect();
        assert!(ya.iter().all(|x| x.is_zero()));
        let yb: Scalar = (0..2).map(|i| &functional[i] * &b[i]).sum();
        assert_eq!(yb, value);
        assert!(!value.is_zero());
    }

    #[test]
    fn inertia_of_indefinite_forms() {
        let m = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(inertia(&m), Some((1, 1, 0)));
        let m = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::i()],
            vec![-Scalar::i(), Scalar::zero()],
        ]);
        assert_eq!(inertia(&m), Some((1, 1, 0)));
        let m = int_matrix(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 0]]);
        assert_eq!(inertia(&m), Some((2, 0, 1)));
    }
}
