//! Cartan and Coxeter matrices, the Euler–Ringel form and weighted Euler
//! characteristics.
//!
//! Conventions: `C[i][j]` counts paths from `i` to `j`, so the projective
//! `P_i` has dimension vector column `i` of `C` and the injective `I_i` has
//! row `i`. `Φ = −CᵗC⁻¹` sends `χ(M)` to `χ(νM)`; `Ψ = Φ⁻ᵗ = −C⁻¹Cᵗ`.

use crate::field::{same_field, Field, Rational};
use crate::matrix::{IntMatrix, Matrix};
use crate::quiver::Quiver;
use crate::{DimVec, Error, Result};

/// Path-count matrix; unitriangular under any topological order.
pub fn cartan_matrix(q: &Quiver) -> IntMatrix {
    let n = q.num_vertices();
    let order = q.topological_order().expect("quiver is acyclic");
    let mut c = IntMatrix::zeros(n, n);
    for i in 0..n {
        c.set(i, i, 1);
    }
    // paths i -> j built in topological order of j
    for &j in &order {
        for a in q.arrows().iter().filter(|a| a.head == j) {
            for i in 0..n {
                let add = *c.get(i, a.tail);
                let v = c.get(i, j).checked_add(add).expect("path count overflow");
                c.set(i, j, v);
            }
        }
    }
    c
}

fn cartan_q(q: &Quiver) -> (Matrix<Rational>, Matrix<Rational>) {
    let c: Matrix<Rational> = cartan_matrix(q).to_field();
    let ci = c.inverse().expect("Cartan matrix is unimodular");
    (c, ci)
}

/// Inverse of the Cartan matrix (integral).
pub fn cartan_inverse(q: &Quiver) -> IntMatrix {
    cartan_q(q).1.to_int().expect("Cartan inverse is integral")
}

/// `Φ = −CᵗC⁻¹`.
pub fn coxeter_phi(q: &Quiver) -> IntMatrix {
    let (c, ci) = cartan_q(q);
    let minus = Rational::from_i64(-1);
    c.transpose().mul_mat(&ci).scale(&minus).to_int().expect("Φ is integral")
}

/// `Ψ = Φ⁻ᵗ = −C⁻¹Cᵗ`.
pub fn coxeter_psi(q: &Quiver) -> IntMatrix {
    let (c, ci) = cartan_q(q);
    let minus = Rational::from_i64(-1);
    ci.mul_mat(&c.transpose()).scale(&minus).to_int().expect("Ψ is integral")
}

/// `Φ⁻¹ = −C C⁻ᵗ`, the action of the inverse translate on dimension vectors.
pub fn coxeter_phi_inverse(q: &Quiver) -> IntMatrix {
    let (c, ci) = cartan_q(q);
    let minus = Rational::from_i64(-1);
    c.mul_mat(&ci.transpose()).scale(&minus).to_int().expect("Φ⁻¹ is integral")
}

/// Dimension vector of the projective at `i`.
pub fn projective_dimvec(q: &Quiver, i: usize) -> DimVec {
    cartan_matrix(q).column(i)
}

/// Dimension vector of the injective at `i`.
pub fn injective_dimvec(q: &Quiver, i: usize) -> DimVec {
    cartan_matrix(q).row(i).to_vec()
}

/// `⟨u, w⟩ = wᵗ C⁻¹ u`.
pub fn euler_ringel(q: &Quiver, u: &[i64], w: &[i64]) -> Result<i64> {
    let n = q.num_vertices();
    for v in [u, w] {
        if v.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: v.len() });
        }
    }
    let ciu = cartan_inverse(q)
        .checked_mul_vec(u)
        .ok_or_else(|| Error::Overflow("Euler form".into()))?;
    w.iter()
        .zip(&ciu)
        .try_fold(0i64, |acc, (a, b)| acc.checked_add(a.checked_mul(*b)?))
        .ok_or_else(|| Error::Overflow("Euler form".into()))
}

/// Check that every entry of a weight lives in one field; returns that field's name.
pub fn common_field<T: Field>(v: &[T]) -> Result<Option<String>> {
    let mut name: Option<String> = None;
    for x in v {
        if let Some(f) = x.field_name() {
            match &name {
                Some(g) if *g != f => {
                    return Err(Error::FieldMismatch(format!("{g} vs {f}")));
                }
                _ => name = Some(f),
            }
        }
    }
    Ok(name)
}

/// `χᵛ(d) = vᵗ d`.
pub fn weighted_chi<T: Field>(v: &[T], d: &[i64]) -> Result<T> {
    if v.len() != d.len() {
        return Err(Error::LengthMismatch { expected: v.len(), got: d.len() });
    }
    common_field(v)?;
    Ok(weighted_chi_unchecked(v, d))
}

pub(crate) fn weighted_chi_unchecked<T: Field>(v: &[T], d: &[i64]) -> T {
    v.iter()
        .zip(d)
        .filter(|(_, &k)| k != 0)
        .fold(T::zero(), |acc, (x, &k)| acc + x.clone() * T::from_i64(k))
}

/// Ensure two field elements are compatible.
pub fn check_same_field<T: Field>(a: &T, b: &T) -> Result<()> {
    if same_field(a, b) {
        Ok(())
    } else {
        Err(Error::FieldMismatch(format!(
            "{} vs {}",
            a.field_name().unwrap_or_default(),
            b.field_name().unwrap_or_default()
        )))
    }
}
