//! Exact integer linear algebra: dense matrices over `BigInt`, fraction-free
//! elimination, characteristic polynomials and quadratic-form evaluation.
//!
//! Nothing in here touches floating point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("x^tr M x is odd; M is not the Gram matrix of an integral form")]
    OddValue,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of small integers. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.as_ref().len()).unwrap_or(0);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.data[i * c + j] = BigInt::from(*v);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }

    pub fn mul_vec_i64(&self, x: &[i64]) -> Vec<BigInt> {
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.mul_vec(&xb)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.data.clone();
        let (m, n) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i * n + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..n {
                    a.swap(p * n + j, r * n + j);
                }
            }
            let piv = a[r * n + c].clone();
            for i in (r + 1)..m {
                let f = a[i * n + c].clone();
                for j in (c + 1)..n {
                    let v = (&piv * &a[i * n + j] - &f * &a[r * n + j]) / &prev;
                    a[i * n + j] = v;
                }
                a[i * n + c] = BigInt::zero();
            }
            prev = piv;
            r += 1;
        }
        r
    }

    pub fn rank_corank(&self) -> (usize, usize) {
        let r = self.rank();
        (r, self.cols - r)
    }

    /// Determinant by Bareiss elimination.
    pub fn det(&self) -> Result<BigInt, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.data.clone();
        let mut prev = BigInt::one();
        let mut sign = 1i32;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                for j in 0..n {
                    a.swap(p * n + j, k * n + j);
                }
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = (&a[k * n + k] * &a[i * n + j] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
            }
            prev = a[k * n + k].clone();
        }
        let d = a[n * n - 1].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// det(zI - M) via Faddeev–LeVerrier; every division is exact.
    pub fn char_poly(&self) -> Result<IntPolynomial, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut mk = IntMatrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.try_mul(&mk)?;
            for i in 0..n {
                next.data[i * n + i] += &coeffs[n - k + 1];
            }
            mk = next;
            let tr = self.try_mul(&mk)?.trace();
            let c = -tr / BigInt::from(k);
            coeffs[n - k] = c;
        }
        Ok(IntPolynomial::new(coeffs))
    }

    /// Matrix as a JSON array of rows; see [`int_to_json`].
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| {
                    Value::Array(
                        (0..self.cols)
                            .map(|j| int_to_json(self.get(i, j)))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Option<IntMatrix> {
        let rows = v.as_array()?;
        let mut out: Vec<Vec<BigInt>> = Vec::new();
        for r in rows {
            let mut row = Vec::new();
            for e in r.as_array()? {
                let b = match e {
                    Value::String(s) => s.parse::<BigInt>().ok()?,
                    Value::Number(n) => BigInt::from(n.as_i64()?),
                    _ => return None,
                };
                row.push(b);
            }
            out.push(row);
        }
        let c = out.first().map(|r| r.len()).unwrap_or(0);
        if out.iter().any(|r| r.len() != c) {
            return None;
        }
        let mut m = IntMatrix::zeros(out.len(), c);
        for (i, r) in out.into_iter().enumerate() {
            for (j, e) in r.into_iter().enumerate() {
                m.set(i, j, e);
            }
        }
        Some(m)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let w = cells.iter().map(|s| s.len()).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>w$}", cells[i * self.cols + j], w = w)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

fn zip_dims(a: &IntMatrix, b: &IntMatrix) {
    assert!(a.rows == b.rows && a.cols == b.cols, "dimension mismatch");
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        zip_dims(self, rhs);
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        zip_dims(self, rhs);
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_mul(rhs).expect("dimension mismatch")
    }
}

/// Evaluates q(x) = 1/2 x^tr G x for a symmetric Gram matrix G.
/// A JSON number when the value fits in i64, otherwise its decimal string.
pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn qform_eval(gram: &IntMatrix, x: &[BigInt]) -> Result<BigInt, LinalgError> {
    if !gram.is_square() || gram.rows() != x.len() {
        return Err(LinalgError::Dimension(format!(
            "{}x{} Gram, vector of length {}",
            gram.rows(),
            gram.cols(),
            x.len()
        )));
    }
    let gx = gram.mul_vec(x);
    let v: BigInt = x.iter().zip(&gx).map(|(a, b)| a * b).sum();
    let two = BigInt::from(2);
    if !(&v % &two).is_zero() {
        return Err(LinalgError::OddValue);
    }
    Ok(v / two)
}

pub fn qform_eval_i64(gram: &IntMatrix, x: &[i64]) -> Result<BigInt, LinalgError> {
    let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    qform_eval(gram, &xb)
}

/// All nonzero integer vectors x with 1/2 x^tr G x <= `max_value`, for a
/// positive definite Gram matrix G. The search box comes from
/// x_i^2 <= 2 * max_value * (G^{-1})_{ii}, with (G^{-1})_{ii} = det(G_ii)/det(G).
/// Returns `None` when G is not positive definite.
pub fn short_vectors(gram: &IntMatrix, max_value: i64) -> Option<Vec<(Vec<i64>, i64)>> {
    let n = gram.rows();
    // Sylvester: every leading principal minor is positive
    for k in 1..=n {
        if !leading_minor(gram, k).det().ok()?.is_positive() {
            return None;
        }
    }
    let det = gram.det().ok()?;
    let g = gram.to_i64_rows()?;
    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        let minor = principal_minor_without(gram, i).det().ok()?;
        // largest k with k^2 * det <= 2 * max_value * minor
        let rhs = BigInt::from(2 * max_value) * &minor;
        let mut k: i64 = 0;
        while BigInt::from((k + 1) * (k + 1)) * &det <= rhs {
            k += 1;
        }
        bounds.push(k);
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fn rec(
        i: usize,
        x: &mut Vec<i64>,
        bounds: &[i64],
        g: &[Vec<i64>],
        max_value: i64,
        out: &mut Vec<(Vec<i64>, i64)>,
    ) {
        if i == x.len() {
            if x.iter().all(|&v| v == 0) {
                return;
            }
            let mut s: i64 = 0;
            for a in 0..x.len() {
                for b in 0..x.len() {
                    s += x[a] * g[a][b] * x[b];
                }
            }
            if s / 2 <= max_value {
                out.push((x.clone(), s / 2));
            }
            return;
        }
        for v in -bounds[i]..=bounds[i] {
            x[i] = v;
            rec(i + 1, x, bounds, g, max_value, out);
        }
        x[i] = 0;
    }
    rec(0, &mut x, &bounds, &g, max_value, &mut out);
    Some(out)
}

fn leading_minor(m: &IntMatrix, k: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            out.set(i, j, m.get(i, j).clone());
        }
    }
    out
}

fn principal_minor_without(m: &IntMatrix, k: usize) -> IntMatrix {
    let n = m.rows();
    let idx: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let mut out = IntMatrix::zeros(n - 1, n - 1);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out.set(a, b, m.get(i, j).clone());
        }
    }
    out
}

/// Integer polynomial, coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// z^n + c
    pub fn monomial_plus(n: usize, c: i64) -> Self {
        let mut v = vec![0i64; n + 1];
        v[n] = 1;
        v[0] += c;
        Self::from_i64(&v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * z + c)
    }

    /// Exact division by a monic polynomial; `None` when the remainder is nonzero.
    pub fn div_exact(&self, d: &IntPolynomial) -> Option<IntPolynomial> {
        let dd = d.degree()?;
        if !d.coeffs[dd].is_one() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = rem[k + dd].clone();
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            q[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPolynomial::new(q))
    }

    /// Self-reciprocal: z^d p(1/z) = p(z). Anti-palindromic polynomials such as z² − 1 do not count.
    pub fn is_palindromic(&self) -> bool {
        let rev: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        rev == self.coeffs
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(int_to_json).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !a.is_one() || k == 0;
            if show_coeff {
                write!(f, "{}", a)?;
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{}", k)?,
            }
        }
        Ok(())
    }
}
