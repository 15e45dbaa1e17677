//! Predicates on vertex weights and eigenweight constructions.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::coxeter::{cartan_inverse, common_field, coxeter_psi, weighted_chi_unchecked};
use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::field::{Field, Rational};
use crate::knit::{IndecMultiset, Knitter, ZQVertex};
use crate::matrix::Matrix;
use crate::quiver::{classify, tits_matrix, Quiver, QuiverClass};
use crate::{DimVec, Error, Result};

fn check_weight<T: Field>(q: &Quiver, v: &[T]) -> Result<()> {
    if v.len() != q.num_vertices() {
        return Err(Error::LengthMismatch {
            expected: q.num_vertices(),
            got: v.len(),
        });
    }
    common_field(v)?;
    Ok(())
}

pub fn is_sincere<T: Field>(v: &[T]) -> bool {
    v.iter().all(|x| !x.is_zero())
}

/// Outcome of a regularity scan.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport<T> {
    pub sincere: bool,
    /// `Some` only when the check was exhaustive (Dynkin quivers).
    pub regular: Option<bool>,
    pub semiregular: Option<bool>,
    /// Depth bound of a semi-regularity certificate for infinite type.
    pub depth_checked: Option<usize>,
    /// Positions scanned.
    pub checked: usize,
    /// Dimension vectors where `χᵛ` vanished, each with that (zero) value.
    pub witnesses: Vec<(DimVec, T)>,
}

impl<T: Field> RegularityReport<T> {
    pub fn verdict(&self) -> &'static str {
        match (self.regular, self.semiregular) {
            (Some(true), _) => "Regular",
            (Some(false), _) => "NotRegular",
            (None, Some(true)) => "SemiRegular",
            (None, _) => "NotSemiRegular",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict(),
            "sincere": self.sincere,
            "regular": self.regular,
            "semiregular": self.semiregular,
            "depth_checked": self.depth_checked,
            "checked": self.checked,
            "witnesses": self.witnesses.iter()
                .map(|(d, x)| json!({"dimvec": d, "value": x.to_string()}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Dimension vectors whose weighted Euler characteristic must not vanish:
/// the positive roots, in knitting order.
pub fn regularity_forms(q: &Quiver) -> Result<Vec<DimVec>> {
    Ok(Knitter::new(q)
        .enumerate_indecomposables()?
        .into_iter()
        .map(|(_, d)| d)
        .collect())
}

fn scan<T: Field>(v: &[T], dims: &[DimVec]) -> Vec<(DimVec, T)> {
    dims.iter()
        .filter_map(|d| {
            let x = weighted_chi_unchecked(v, d);
            x.is_zero().then(|| (d.clone(), x))
        })
        .collect()
}

/// Exhaustive check over all indecomposables of a Dynkin quiver.
pub fn is_regular<T: Field>(q: &Quiver, v: &[T]) -> Result<RegularityReport<T>> {
    check_weight(q, v)?;
    let dims = regularity_forms(q)?;
    let witnesses = scan(v, &dims);
    let ok = witnesses.is_empty();
    Ok(RegularityReport {
        sincere: is_sincere(v),
        regular: Some(ok),
        semiregular: Some(ok),
        depth_checked: None,
        checked: dims.len(),
        witnesses,
    })
}

/// Dimension vectors of `τ^{-m}P_i` and `τ^m I_i` for `0 ≤ m ≤ depth`.
pub fn preprojective_preinjective_dims(k: &Knitter, depth: usize) -> Result<Vec<DimVec>> {
    let n = k.quiver().num_vertices();
    let mut out = Vec::with_capacity(2 * n * (depth + 1));
    for m in 0..=depth as i64 {
        for i in 0..n {
            out.push(k.dimvec(ZQVertex::new(i, m))?);
            // (i, −1) carries −χ(I_i)
            let d = k.dimvec(ZQVertex::new(i, -1 - m))?;
            out.push(d.into_iter().map(|e| -e).collect());
        }
    }
    Ok(out)
}

/// Depth-limited scan of preprojective and preinjective positions. Dynkin
/// quivers get the exhaustive check instead.
pub fn is_semiregular<T: Field>(q: &Quiver, v: &[T], depth: usize) -> Result<RegularityReport<T>> {
    check_weight(q, v)?;
    let k = Knitter::new(q);
    if k.class().is_dynkin() {
        return is_regular(q, v);
    }
    let dims = preprojective_preinjective_dims(&k, depth)?;
    let witnesses = scan(v, &dims);
    Ok(RegularityReport {
        sincere: is_sincere(v),
        regular: None,
        semiregular: Some(witnesses.is_empty()),
        depth_checked: Some(depth),
        checked: dims.len(),
        witnesses,
    })
}

/// `χᵛ ≠ 0` on every indecomposable occurring in `L_0 … L_{n−1}` of the ladder of `m`.
pub fn property_i<T: Field>(k: &Knitter, v: &[T], m: &IndecMultiset, n: usize) -> Result<bool> {
    check_weight(k.quiver(), v)?;
    if n == 0 {
        return Ok(true);
    }
    let ladder = k.ladder(m, n - 1)?;
    for l in &ladder {
        for (x, _) in l.iter() {
            if weighted_chi_unchecked(v, &k.dimvec(x)?).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Vertices of the ℤQ component checked by [`property_ii`]: one full period
/// for Dynkin quivers, powers `−depth..=depth` otherwise.
pub fn component_window(k: &Knitter, depth: usize) -> Vec<ZQVertex> {
    let n = k.quiver().num_vertices();
    let powers: Vec<i64> = match k.class().coxeter_number() {
        Some(h) => (0..h as i64).collect(),
        None => (-(depth as i64)..=depth as i64).collect(),
    };
    powers
        .into_iter()
        .flat_map(|m| (0..n).map(move |i| ZQVertex::new(i, m)))
        .collect()
}

/// `χᵛ(τ⁻¹N) = λ·χᵛ(N)` with `χᵛ(N) ≠ 0` for all `N` in the component of
/// `m`. Since Q is connected, ℤQ is a single component and `m` only has to
/// lie in it.
pub fn property_ii<T: Field>(
    k: &Knitter,
    v: &[T],
    m: &IndecMultiset,
    lambda: &T,
    depth: usize,
) -> Result<bool> {
    check_weight(k.quiver(), v)?;
    if (lambda.clone() + T::one()).is_zero() {
        return Err(Error::InvalidLambda("λ = −1 is excluded".into()));
    }
    if m.iter().any(|(x, _)| x.vertex >= k.quiver().num_vertices()) {
        return Err(Error::UnknownVertex("multiset vertex out of range".into()));
    }
    for x in component_window(k, depth) {
        let here = weighted_chi_unchecked(v, &k.dimvec(x)?);
        if here.is_zero() {
            return Ok(false);
        }
        let next = weighted_chi_unchecked(v, &k.dimvec(x.translate(1))?);
        if next != lambda.clone() * here {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Partial geometric sums `V_m(λ) = 1 + λ + … + λ^{m−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeomSeries<T> {
    pub lambda: T,
    /// `values[m − 1] = V_m(λ)`.
    pub values: Vec<T>,
}

impl<T: Field> GeomSeries<T> {
    pub fn new(lambda: &T, n: usize) -> Self {
        let mut values = Vec::with_capacity(n);
        let mut acc = T::zero();
        let mut power = T::one();
        for _ in 0..n {
            acc = acc + power.clone();
            values.push(acc.clone());
            power = power * lambda.clone();
        }
        GeomSeries {
            lambda: lambda.clone(),
            values,
        }
    }

    /// Smallest `m` with `V_m(λ) = 0`.
    pub fn first_zero(&self) -> Option<usize> {
        self.values.iter().position(Zero::is_zero).map(|k| k + 1)
    }
}

/// All `V_m(λ)` for `1 ≤ m ≤ n`, and whether none vanishes.
pub fn check_vm<T: Field>(lambda: &T, n: usize) -> (GeomSeries<T>, bool) {
    let s = GeomSeries::new(lambda, n);
    let ok = s.first_zero().is_none();
    (s, ok)
}

/// An eigenweight over ℚ(ζ_h) together with its eigenvalue under Ψ.
#[derive(Clone, Debug)]
pub struct Eigenweight {
    pub field: Arc<CyclotomicField>,
    pub weight: Vec<Cyclotomic>,
    pub eigenvalue: Cyclotomic,
}

fn psi_in(q: &Quiver, field: &Arc<CyclotomicField>) -> Matrix<Cyclotomic> {
    coxeter_psi(q).map(|&x| field.from_rational(Rational::from_i64(x)))
}

fn is_eigen(psi: &Matrix<Cyclotomic>, v: &[Cyclotomic], lambda: &Cyclotomic) -> bool {
    psi.mul_vec(v)
        .into_iter()
        .zip(v)
        .all(|(a, b)| a == lambda.clone() * b.clone())
}

/// `v = Σ_{n=0}^{h−2} ξ_n Ψⁿ C⁻¹χ(P_{i0})` with `ξ_n = 1 + ζ + … + ζⁿ`,
/// `ζ = ζ_h`. Satisfies `Ψv = ζ⁻¹v`; the eigen-equation is checked.
pub fn dynkin_eigenweight(q: &Quiver, i0: usize) -> Result<Eigenweight> {
    let h = classify(q).coxeter_number().ok_or(Error::NotDynkin)?;
    if h < 3 {
        return Err(Error::DegenerateRank(format!("Coxeter number {h} < 3")));
    }
    let n = q.num_vertices();
    if i0 >= n {
        return Err(Error::UnknownVertex(i0.to_string()));
    }
    let field = CyclotomicField::new(h);
    let zeta = field.zeta();
    let psi = psi_in(q, &field);
    // C⁻¹χ(P_{i0}) is the unit vector at i0
    let mut w: Vec<Cyclotomic> = (0..n)
        .map(|k| field.from_rational(Rational::from_i64(i64::from(k == i0))))
        .collect();
    let mut xi = field.from_rational(Rational::one());
    let mut zeta_pow = field.from_rational(Rational::one());
    let mut v = vec![field.from_rational(Rational::zero()); n];
    for _ in 0..=h - 2 {
        for (acc, x) in v.iter_mut().zip(&w) {
            *acc = acc.clone() + xi.clone() * x.clone();
        }
        w = psi.mul_vec(&w);
        zeta_pow = zeta_pow * zeta.clone();
        xi = xi + zeta_pow.clone();
    }
    if v.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateRank("eigenweight vanished".into()));
    }
    let eigenvalue = zeta.inv().expect("ζ is a unit");
    if !is_eigen(&psi, &v, &eigenvalue) {
        return Err(Error::DegenerateRank("eigen-equation failed".into()));
    }
    Ok(Eigenweight {
        field,
        weight: v,
        eigenvalue,
    })
}

/// True for 1 → 2 → … → N in declaration order.
pub fn is_directed_a(q: &Quiver) -> bool {
    let n = q.num_vertices();
    q.arrows().len() + 1 == n
        && (0..n - 1).all(|k| q.arrows().iter().any(|a| a.tail == k && a.head == k + 1))
}

/// `v = (λ^{N−1}, …, λ, 1)` with `λ = ζ_{N+1}` on the directed A_N. With
/// paths counted from tail to head this is a Ψ-eigenvector for `λ⁻¹`.
pub fn a_n_shortcut_weight(q: &Quiver) -> Result<(Eigenweight, Cyclotomic)> {
    if !is_directed_a(q) {
        return Err(Error::WrongQuiverShape("expected directed A_N".into()));
    }
    let n = q.num_vertices();
    if n < 2 {
        return Err(Error::DegenerateRank("A_1 has no primitive root of order 2 eigenvector".into()));
    }
    let field = CyclotomicField::new(n as u64 + 1);
    let lambda = field.zeta();
    let weight: Vec<Cyclotomic> = (0..n).map(|k| lambda.pow((n - 1 - k) as u64)).collect();
    let eigenvalue = lambda.inv().expect("unit");
    if !is_eigen(&psi_in(q, &field), &weight, &eigenvalue) {
        return Err(Error::DegenerateRank("eigen-equation failed".into()));
    }
    Ok((
        Eigenweight {
            field,
            weight,
            eigenvalue,
        },
        lambda,
    ))
}

/// Primitive positive generator of the radical of the Tits form.
pub fn radical_vector(q: &Quiver) -> Result<DimVec> {
    if !matches!(classify(q), QuiverClass::ExtendedDynkin { .. }) {
        return Err(Error::NotExtendedDynkin);
    }
    let kernel = tits_matrix(q).kernel();
    let [basis] = kernel.as_slice() else {
        return Err(Error::DegenerateRank("radical is not one-dimensional".into()));
    };
    let lcm = basis
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<num_bigint::BigInt> = basis.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    let sign = if ints.iter().any(Signed::is_negative) { -1 } else { 1 };
    ints.iter()
        .map(|x| {
            use num_traits::ToPrimitive;
            (x / &g * num_bigint::BigInt::from(sign)).to_i64().ok_or_else(|| Error::Overflow("radical vector".into()))
        })
        .collect()
}

/// `v = C⁻¹δ` for the radical generator `δ`; a Ψ-eigenvector for 1.
pub fn extended_dynkin_semiregular_weight(q: &Quiver, delta: &[i64]) -> Result<Vec<Rational>> {
    let expected = radical_vector(q)?;
    if delta.len() != expected.len() {
        return Err(Error::LengthMismatch {
            expected: expected.len(),
            got: delta.len(),
        });
    }
    let in_radical = tits_matrix(q)
        .mul_vec(&crate::scalar::int_weight(delta))
        .iter()
        .all(Zero::is_zero);
    if !in_radical || delta.iter().all(|&d| d == 0) {
        return Err(Error::DegenerateRank("δ is not a nonzero radical vector".into()));
    }
    let v = cartan_inverse(q)
        .checked_mul_vec(delta)
        .ok_or_else(|| Error::Overflow("C⁻¹δ".into()))?;
    Ok(crate::scalar::int_weight(&v))
}
