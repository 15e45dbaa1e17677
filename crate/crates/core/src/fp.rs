//! Prime fields F_p with a runtime modulus.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::field::Field;

/// Element of F_p. `modulus == 0` marks an unbound integer constant.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    value: i128,
    modulus: u64,
}

impl Fp {
    /// Residue of `n` modulo `p`. `p` must be prime; see [`is_prime`].
    pub fn new(n: i64, p: u64) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        Fp {
            value: (n as i128).rem_euclid(p as i128),
            modulus: p,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        (self.modulus != 0).then_some(self.modulus)
    }

    /// Canonical residue in `[0, p)`; unbound constants return their integer value.
    pub fn residue(&self) -> i128 {
        self.value
    }

    fn unify(self, other: Fp) -> (Fp, Fp, u64) {
        match (self.modulus, other.modulus) {
            (0, 0) => (self, other, 0),
            (0, p) => (self.bind(p), other, p),
            (p, 0) => (self, other.bind(p), p),
            (p, q) => {
                assert_eq!(p, q, "mixing F_{p} and F_{q}");
                (self, other, p)
            }
        }
    }

    fn bind(self, p: u64) -> Fp {
        Fp {
            value: self.value.rem_euclid(p as i128),
            modulus: p,
        }
    }

    fn reduce(value: i128, p: u64) -> Fp {
        if p == 0 {
            Fp { value, modulus: 0 }
        } else {
            Fp {
                value: value.rem_euclid(p as i128),
                modulus: p,
            }
        }
    }
}

/// Deterministic trial division; moduli here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.unify(*other);
        a.value == b.value
    }
}

impl Eq for Fp {}

impl std::hash::Hash for Fp {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let (a, b, p) = self.unify(rhs);
        Fp::reduce(a.value + b.value, p)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let (a, b, p) = self.unify(rhs);
        Fp::reduce(a.value - b.value, p)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let (a, b, p) = self.unify(rhs);
        let v = a.value.checked_mul(b.value).expect("unbound F_p constant overflow");
        Fp::reduce(v, p)
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        let (a, b, p) = self.unify(rhs);
        if p == 0 {
            assert!(
                b.value != 0 && a.value % b.value == 0,
                "inexact division of unbound F_p constants"
            );
            return Fp::reduce(a.value / b.value, 0);
        }
        a * b.inv().expect("division by zero in F_p")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::reduce(-self.value, self.modulus)
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp { value: 0, modulus: 0 }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp { value: 1, modulus: 0 }
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        if self.modulus == 0 {
            return match self.value {
                1 | -1 => Some(*self),
                _ => panic!("inverse of unbound F_p constant {}", self.value),
            };
        }
        // extended Euclid
        let p = self.modulus as i128;
        let (mut r0, mut r1) = (p, self.value);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus is not prime");
        Some(Fp::reduce(t0, self.modulus))
    }

    fn from_i64(n: i64) -> Self {
        Fp {
            value: n as i128,
            modulus: 0,
        }
    }

    fn characteristic(&self) -> u64 {
        self.modulus
    }

    fn field_name(&self) -> Option<String> {
        self.modulus().map(|p| format!("Fp({p})"))
    }
}
