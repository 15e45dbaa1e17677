//! Exact scalar fields.
//!
//! Everything downstream is generic over [`Field`]. Three implementations are
//! provided: [`Rational`] (ℚ), [`Fp`](crate::fp::Fp) (prime fields) and
//! [`Cyclotomic`](crate::cyclotomic::Cyclotomic) (ℚ(ζ_n)).
//!
//! Prime-field and cyclotomic elements carry their field as runtime data. The
//! constants produced by `Zero::zero`, `One::one` and [`Field::from_i64`] are
//! "unbound" integers that adopt the field of whatever bound element they are
//! combined with. Combining two elements of different bound fields panics;
//! the checked entry points (weights, parsers) report
//! [`Error::FieldMismatch`](crate::Error::FieldMismatch) before that can happen.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// ℚ with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// An exact field.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Image of an integer.
    fn from_i64(n: i64) -> Self;

    /// Characteristic of the field this element lives in (0 for unbound constants).
    fn characteristic(&self) -> u64;

    /// Human-readable field name, `None` for unbound constants.
    fn field_name(&self) -> Option<String>;

    /// Rescale a sparse row by a nonzero scalar so that equal spans give equal
    /// rows where possible. The default makes the leading entry 1; ℚ overrides
    /// this with a primitive integer row so elimination stays fraction-free.
    fn normalize_row(row: &mut [(usize, Self)]) {
        if let Some(inv) = row.first().and_then(|(_, c)| c.inv()) {
            for (_, c) in row.iter_mut() {
                *c = c.clone() * inv.clone();
            }
        }
    }

    /// Rank of a dense matrix given by rows.
    fn rank_of(rows: Vec<Vec<Self>>) -> usize {
        gaussian_rank(rows)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// True when both values live in the same field (unbound constants match anything).
pub fn same_field<T: Field>(a: &T, b: &T) -> bool {
    match (a.field_name(), b.field_name()) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

/// Plain Gaussian elimination; valid over any field.
pub fn gaussian_rank<T: Field>(mut rows: Vec<Vec<T>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone() * inv.clone();
            for c in col..ncols {
                let d = f.clone() * rows[rank][c].clone();
                rows[r][c] = rows[r][c].clone() - d;
            }
        }
        rank += 1;
    }
    rank
}

/// Fraction-free (Bareiss) rank of an integer matrix.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            let factor = rows[r][col].clone();
            for c in col..ncols {
                // exact by Sylvester's identity
                let num = &pivot * &rows[r][c] - &factor * &rows[rank][c];
                rows[r][c] = num / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn field_name(&self) -> Option<String> {
        Some("Q".to_string())
    }

    fn normalize_row(row: &mut [(usize, Self)]) {
        if row.is_empty() {
            return;
        }
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = row
            .iter()
            .map(|(_, c)| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if ints[0].is_negative() {
            g = -g;
        }
        for ((_, c), x) in row.iter_mut().zip(ints) {
            *c = Rational::from_integer(x / &g);
        }
    }

    fn rank_of(rows: Vec<Vec<Self>>) -> usize {
        let cleared = rows
            .into_iter()
            .map(|row| {
                let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                row.into_iter()
                    .map(|c| c.numer() * (&lcm / c.denom()))
                    .collect()
            })
            .collect();
        bareiss_rank(cleared)
    }
}

/// Integer value of a rational, if it is one.
pub fn rational_to_i64(q: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Parse `p/q`, `-p/q` or an integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rational_normalize_row_is_primitive() {
        let mut row = vec![(0, q(-1, 2)), (3, q(3, 4)), (5, q(1, 1))];
        Rational::normalize_row(&mut row);
        let vals: Vec<_> = row.iter().map(|(_, c)| c.clone()).collect();
        assert_eq!(vals, vec![q(2, 1), q(-3, 1), q(-4, 1)]);
    }

    #[test]
    fn bareiss_and_gaussian_agree_on_small_matrix() {
        let m = vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1)],
            vec![q(1, 2), q(0, 1), q(1, 3)],
        ];
        assert_eq!(Rational::rank_of(m.clone()), 2);
        assert_eq!(gaussian_rank(m), 2);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = vec![vec![Rational::zero(); 4]; 3];
        assert_eq!(Rational::rank_of(m), 0);
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational(" 7 "), Some(q(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
