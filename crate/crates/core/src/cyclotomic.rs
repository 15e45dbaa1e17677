//! Cyclotomic fields ℚ(ζ_n) = ℚ[x]/Φ_n(x), dense representation.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::field::{parse_rational, Field, Rational};

/// The n-th cyclotomic polynomial, integer coefficients from x^0 upwards.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = divide_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Exact quotient of integer polynomials by a monic divisor.
fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// ℚ(ζ_n) as a shared field handle.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    conductor: u64,
    modulus: Vec<Rational>,
}

impl CyclotomicField {
    pub fn new(n: u64) -> Arc<Self> {
        let modulus = cyclotomic_polynomial(n)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        Arc::new(CyclotomicField {
            conductor: n,
            modulus,
        })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Degree of Φ_n, i.e. the dimension of the field over ℚ.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zeta(self: &Arc<Self>) -> Cyclotomic {
        Cyclotomic::from_coeffs(self, vec![Rational::zero(), Rational::one()])
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> Cyclotomic {
        Cyclotomic::from_coeffs(self, vec![q])
    }

    /// Parse a polynomial expression in `z`, such as `z^2 - 1/2*z + 3`.
    pub fn parse(self: &Arc<Self>, text: &str) -> Option<Cyclotomic> {
        let mut coeffs: Vec<Rational> = Vec::new();
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return None;
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = cleaned.as_bytes();
        for (k, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && k > 0 && bytes[k - 1] != b'^' {
                terms.push(&cleaned[start..k]);
                start = k;
            }
        }
        terms.push(&cleaned[start..]);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-Rational::one(), rest),
                None => (Rational::one(), term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef, exp) = match body.find('z') {
                None => (parse_rational(body)?, 0usize),
                Some(pos) => {
                    let head = body[..pos].trim_end_matches('*');
                    let coef = if head.is_empty() {
                        Rational::one()
                    } else {
                        parse_rational(head)?
                    };
                    let tail = &body[pos + 1..];
                    let exp = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')?.parse().ok()?
                    };
                    (coef, exp)
                }
            };
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, Rational::zero());
            }
            coeffs[exp] = coeffs[exp].clone() + sign * coef;
        }
        Some(Cyclotomic::from_coeffs(self, coeffs))
    }
}

/// Element of ℚ(ζ_n). Without a field handle it is a rational constant.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    field: Option<Arc<CyclotomicField>>,
    coeffs: Vec<Rational>,
}

fn trim(v: &mut Vec<Rational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder modulo a monic polynomial.
fn poly_rem_monic(mut a: Vec<Rational>, m: &[Rational]) -> Vec<Rational> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let c = a.pop().expect("nonempty");
        if c.is_zero() {
            continue;
        }
        let base = a.len() - dm;
        for j in 0..dm {
            a[base + j] -= &c * &m[j];
        }
    }
    trim(&mut a);
    a
}

/// Quotient and remainder for a general nonzero divisor.
fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = rem.last().expect("nonempty").clone() / lead.clone();
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        quot[k] = c;
        rem.pop();
        trim(&mut rem);
        if rem.len() <= db {
            break;
        }
    }
    (quot, rem)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|k| {
            a.get(k).cloned().unwrap_or_else(Rational::zero)
                - b.get(k).cloned().unwrap_or_else(Rational::zero)
        })
        .collect();
    trim(&mut out);
    out
}

impl Cyclotomic {
    fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<Rational>) -> Self {
        let reduced = poly_rem_monic(coeffs, &field.modulus);
        Cyclotomic {
            field: Some(field.clone()),
            coeffs: reduced,
        }
    }

    fn constant(q: Rational) -> Self {
        let mut coeffs = vec![q];
        trim(&mut coeffs);
        Cyclotomic {
            field: None,
            coeffs,
        }
    }

    pub fn field(&self) -> Option<&Arc<CyclotomicField>> {
        self.field.as_ref()
    }

    /// Coefficients with respect to 1, ζ, ζ², …, padded to the field degree.
    pub fn coefficients(&self) -> Vec<Rational> {
        let mut v = self.coeffs.clone();
        if let Some(f) = &self.field {
            v.resize(f.degree(), Rational::zero());
        }
        v
    }

    /// The value as a rational, when it lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn unify(&self, other: &Self) -> Option<Arc<CyclotomicField>> {
        match (&self.field, &other.field) {
            (None, None) => None,
            (Some(f), None) | (None, Some(f)) => Some(f.clone()),
            (Some(f), Some(g)) => {
                assert!(
                    Arc::ptr_eq(f, g) || f == g,
                    "mixing Q(zeta_{}) and Q(zeta_{})",
                    f.conductor,
                    g.conductor
                );
                Some(f.clone())
            }
        }
    }

    fn wrap(field: Option<Arc<CyclotomicField>>, coeffs: Vec<Rational>) -> Self {
        match field {
            Some(f) => Cyclotomic::from_coeffs(&f, coeffs),
            None => {
                let mut coeffs = coeffs;
                trim(&mut coeffs);
                Cyclotomic {
                    field: None,
                    coeffs,
                }
            }
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.unify(other);
        self.coeffs == other.coeffs
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        let field = self.unify(&rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
                    + rhs.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
            })
            .collect();
        Cyclotomic::wrap(field, coeffs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self + (-rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        let field = self.unify(&rhs);
        Cyclotomic::wrap(field, poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Div for Cyclotomic {
    type Output = Cyclotomic;
    fn div(self, rhs: Cyclotomic) -> Cyclotomic {
        let field = self.unify(&rhs);
        let rhs = Cyclotomic::wrap(field, rhs.coeffs);
        self * rhs.inv().expect("division by zero in cyclotomic field")
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::constant(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::constant(Rational::one())
    }
}

impl Field for Cyclotomic {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let Some(field) = &self.field else {
            return Some(Cyclotomic::constant(self.coeffs[0].recip()));
        };
        // extended Euclid on (Φ_n, a); Φ_n is irreducible so gcd is a unit
        let (mut r0, mut r1) = (field.modulus.clone(), self.coeffs.clone());
        let (mut t0, mut t1): (Vec<Rational>, Vec<Rational>) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t2);
        }
        debug_assert_eq!(r0.len(), 1, "gcd with cyclotomic modulus is not a unit");
        let scale = r0[0].recip();
        let coeffs = t0.into_iter().map(|c| c * &scale).collect();
        Some(Cyclotomic::from_coeffs(field, coeffs))
    }

    fn from_i64(n: i64) -> Self {
        Cyclotomic::constant(Rational::from_integer(BigInt::from(n)))
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn field_name(&self) -> Option<String> {
        self.field
            .as_ref()
            .map(|f| format!("Q(zeta_{})", f.conductor))
    }
}
