//! Dense matrices over exact scalars.

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use crate::field::{rational_to_i64, Field, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Integer matrix (Cartan matrices, integral Coxeter matrices).
pub type IntMatrix = Matrix<i64>;

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix rows");
        Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }
}

impl<T: Clone + Zero + Add<Output = T> + Mul<Output = T>> Matrix<T> {
    pub fn mul_mat(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        Matrix::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self.get(r, k).clone() * other.get(k, c).clone()
            })
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add_mat(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Matrix<T> {
        self.map(|x| s.clone() * x.clone())
    }
}

impl<T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>> Matrix<T> {
    pub fn pow(&self, mut e: u64) -> Matrix<T> {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mat(&base);
            }
            base = base.mul_mat(&base);
            e >>= 1;
        }
        acc
    }
}

impl IntMatrix {
    pub fn to_field<T: Field>(&self) -> Matrix<T> {
        self.map(|&x| T::from_i64(x))
    }

    /// Matrix-vector product with overflow detection.
    pub fn checked_mul_vec(&self, v: &[i64]) -> Option<Vec<i64>> {
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).try_fold(0i64, |acc, (a, b)| {
                    acc.checked_add(a.checked_mul(*b)?)
                })
            })
            .collect()
    }
}

impl Matrix<Rational> {
    /// Integer matrix when every entry is integral.
    pub fn to_int(&self) -> Option<IntMatrix> {
        let data = self.data.iter().map(rational_to_i64).collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl<T: Field> Matrix<T> {
    /// Exact rank. Bareiss over ℚ, Gaussian elimination otherwise.
    pub fn rank(&self) -> usize {
        T::rank_of(self.to_rows())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&k| !m.get(k, c).is_zero()) else {
                continue;
            };
            if p != r {
                for k in 0..m.cols {
                    m.data.swap(p * m.cols + k, r * m.cols + k);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for k in 0..m.cols {
                let v = m.get(r, k).clone() * inv.clone();
                m.set(r, k, v);
            }
            for other in 0..m.rows {
                if other == r || m.get(other, c).is_zero() {
                    continue;
                }
                let f = m.get(other, c).clone();
                for k in 0..m.cols {
                    let v = m.get(other, k).clone() - f.clone() * m.get(r, k).clone();
                    m.set(other, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                T::one()
            } else {
                T::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |r, c| red.get(r, n + c).clone()))
    }

    /// Basis of the right kernel {x : Mx = 0}.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![T::zero(); self.cols];
                x[f] = T::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -red.get(r, f).clone();
                }
                x
            })
            .collect()
    }

    /// Basis of ker(M − λI).
    pub fn eigenspace(&self, lambda: &T) -> Vec<Vec<T>> {
        assert!(self.is_square());
        let shifted = Matrix::from_fn(self.rows, self.cols, |r, c| {
            if r == c {
                self.get(r, c).clone() - lambda.clone()
            } else {
                self.get(r, c).clone()
            }
        });
        shifted.kernel()
    }

    /// One solution of Mx = b, if any.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = red.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Characteristic polynomial det(tI − M), coefficients from t^0 up, via
    /// Faddeev–LeVerrier. Needs n! to be invertible; returns `None` otherwise.
    pub fn char_poly(&self) -> Option<Vec<T>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut aux = Matrix::<T>::zeros(n, n);
        for k in 1..=n {
            // aux ← M·aux + c_{n−k+1}·I
            let mut next = self.mul_mat(&aux);
            for d in 0..n {
                let v = next.get(d, d).clone() + coeffs[n - k + 1].clone();
                next.set(d, d, v);
            }
            aux = next;
            let am = self.mul_mat(&aux);
            let trace = (0..n).fold(T::zero(), |acc, d| acc + am.get(d, d).clone());
            let k_scalar = T::from_i64(k as i64);
            let probe = trace.clone() + k_scalar.clone();
            // k must be invertible in the field of the entries
            if (probe - trace.clone()).is_zero() {
                return None;
            }
            coeffs[n - k] = -(trace / k_scalar);
        }
        Some(coeffs)
    }
}

/// Evaluate a coefficient vector (constant term first) at a point.
pub fn eval_poly<T: Field>(coeffs: &[T], x: &T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Render a coefficient vector as a polynomial in `var`.
pub fn format_poly<T: Field>(coeffs: &[T], var: &str) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let cs = c.to_string();
        let term = if mono.is_empty() {
            cs
        } else if c.is_one() {
            mono
        } else if (-c.clone()).is_one() {
            format!("-{mono}")
        } else if cs.contains(' ') {
            format!("({cs})*{mono}")
        } else {
            format!("{cs}*{mono}")
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[r * self.cols + c])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
