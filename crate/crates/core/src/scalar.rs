//! Field selection and weight parsing.
//!
//! A weight is written as comma-separated entries. Each entry is an integer,
//! a fraction `p/q`, or (over ℚ(ζ_n)) a polynomial in `z`. A weight file may
//! start with a header line `field: Q | Fp(p) | Q(zeta_n)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::field::{parse_rational, Field, Rational};
use crate::fp::{is_prime, Fp};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
    Cyclotomic(u64),
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("unknown field `{s}` (expected Q, Fp(p) or Q(zeta_n))"));
        if t == "Q" || t == "QQ" {
            return Ok(FieldSpec::Rational);
        }
        let inner = |prefix: &str| {
            t.strip_prefix(prefix)
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|r| r.parse::<u64>().ok())
        };
        if let Some(p) = inner("Fp(").or_else(|| inner("GF(")) {
            if !is_prime(p) {
                return Err(Error::Parse(format!("{p} is not prime")));
            }
            // keeps products of two residues inside i128 comfortably
            if p > u32::MAX as u64 {
                return Err(Error::Parse(format!("prime {p} is too large")));
            }
            return Ok(FieldSpec::Prime(p));
        }
        if let Some(n) = inner("Q(zeta_").or_else(|| inner("Q(z_")) {
            if n == 0 {
                return Err(bad());
            }
            return Ok(FieldSpec::Cyclotomic(n));
        }
        Err(bad())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp({p})"),
            FieldSpec::Cyclotomic(n) => write!(f, "Q(zeta_{n})"),
        }
    }
}

/// A scalar in one of the supported fields.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyScalar {
    Rational(Rational),
    Prime(Fp),
    Cyclotomic(Cyclotomic),
}

/// A weight in one of the supported fields.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyWeight {
    Rational(Vec<Rational>),
    Prime(Vec<Fp>),
    Cyclotomic(Vec<Cyclotomic>),
}

impl AnyWeight {
    pub fn len(&self) -> usize {
        match self {
            AnyWeight::Rational(v) => v.len(),
            AnyWeight::Prime(v) => v.len(),
            AnyWeight::Cyclotomic(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> Vec<String> {
        match self {
            AnyWeight::Rational(v) => v.iter().map(ToString::to_string).collect(),
            AnyWeight::Prime(v) => v.iter().map(ToString::to_string).collect(),
            AnyWeight::Cyclotomic(v) => v.iter().map(ToString::to_string).collect(),
        }
    }
}

/// Context for turning text into field elements.
#[derive(Clone, Debug)]
pub enum Parser {
    Rational,
    Prime(u64),
    Cyclotomic(Arc<CyclotomicField>),
}

impl Parser {
    pub fn new(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rational => Parser::Rational,
            FieldSpec::Prime(p) => Parser::Prime(p),
            FieldSpec::Cyclotomic(n) => Parser::Cyclotomic(CyclotomicField::new(n)),
        }
    }

    pub fn scalar(&self, text: &str) -> Result<AnyScalar> {
        let text = text.trim();
        let bad = || Error::Parse(format!("cannot read `{text}` as a scalar"));
        match self {
            Parser::Rational => parse_rational(text).map(AnyScalar::Rational).ok_or_else(bad),
            Parser::Prime(p) => {
                let q = parse_rational(text).ok_or_else(bad)?;
                rational_mod_p(&q, *p).map(AnyScalar::Prime)
            }
            Parser::Cyclotomic(f) => f.parse(text).map(AnyScalar::Cyclotomic).ok_or_else(bad),
        }
    }

    pub fn weight(&self, text: &str) -> Result<AnyWeight> {
        let entries: Vec<&str> = text.split(',').map(str::trim).collect();
        if entries.iter().any(|e| e.is_empty()) {
            return Err(Error::Parse(format!("empty entry in weight `{text}`")));
        }
        let scalars = entries
            .iter()
            .map(|e| self.scalar(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(match self {
            Parser::Rational => AnyWeight::Rational(
                scalars.into_iter().map(|s| match s {
                    AnyScalar::Rational(x) => x,
                    _ => unreachable!(),
                }).collect(),
            ),
            Parser::Prime(_) => AnyWeight::Prime(
                scalars.into_iter().map(|s| match s {
                    AnyScalar::Prime(x) => x,
                    _ => unreachable!(),
                }).collect(),
            ),
            Parser::Cyclotomic(_) => AnyWeight::Cyclotomic(
                scalars.into_iter().map(|s| match s {
                    AnyScalar::Cyclotomic(x) => x,
                    _ => unreachable!(),
                }).collect(),
            ),
        })
    }
}

/// Image of a rational in F_p; fails when p divides the denominator.
pub fn rational_mod_p(q: &Rational, p: u64) -> Result<Fp> {
    let modp = |n: &BigInt| {
        let r = n % BigInt::from(p);
        r.to_i64().expect("residue fits")
    };
    let den = Fp::new(modp(q.denom()), p);
    if den.is_zero() {
        return Err(Error::FieldMismatch(format!("{q} has no image in Fp({p})")));
    }
    Ok(Fp::new(modp(q.numer()), p) / den)
}

/// Parse a weight given on the command line or in a file. A leading
/// `field:` line (or `field: …;` prefix) overrides `default`.
pub fn parse_weight(text: &str, default: FieldSpec) -> Result<AnyWeight> {
    let mut spec = default;
    let mut body = String::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if let Some(rest) = line.strip_prefix("field:") {
            spec = rest.trim().parse()?;
        } else if !line.is_empty() {
            if !body.is_empty() && !body.ends_with(',') {
                body.push(',');
            }
            body.push_str(line);
        }
    }
    let body = body.trim();
    let body = body.strip_prefix("v=").unwrap_or(body);
    let body = body.trim_start_matches('(').trim_end_matches(')');
    Parser::new(spec).weight(body)
}

/// Convert a rational weight into another field.
pub fn convert_weight(v: &[Rational], spec: FieldSpec) -> Result<AnyWeight> {
    Ok(match Parser::new(spec) {
        Parser::Rational => AnyWeight::Rational(v.to_vec()),
        Parser::Prime(p) => AnyWeight::Prime(
            v.iter().map(|q| rational_mod_p(q, p)).collect::<Result<_>>()?,
        ),
        Parser::Cyclotomic(f) => {
            AnyWeight::Cyclotomic(v.iter().map(|q| f.from_rational(q.clone())).collect())
        }
    })
}

/// Integer weight over ℚ.
pub fn int_weight(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&n| Rational::from_i64(n)).collect()
}
