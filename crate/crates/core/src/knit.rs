//! Combinatorics of the translation quiver ℤQ.
//!
//! The vertex `(i, m)` stands for the `m`-fold inverse translate of the
//! projective `P_i`. For every arrow `i → j` of Q there are arrows
//! `(i, m) → (j, m)` and `(j, m) → (i, m + 1)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::coxeter::{cartan_matrix, coxeter_phi, coxeter_phi_inverse};
use crate::field::Field;
use crate::matrix::IntMatrix;
use crate::quiver::{classify, Quiver, QuiverClass};
use crate::{DimVec, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ZQVertex {
    pub vertex: usize,
    pub power: i64,
}

impl ZQVertex {
    pub fn new(vertex: usize, power: i64) -> Self {
        ZQVertex { vertex, power }
    }

    pub fn translate(self, k: i64) -> Self {
        ZQVertex {
            vertex: self.vertex,
            power: self.power + k,
        }
    }
}

/// `(i, m) ↦ (i, m + k)`.
pub fn translate(x: ZQVertex, k: i64) -> ZQVertex {
    x.translate(k)
}

/// Finite multiset of ℤQ vertices; every stored multiplicity is positive.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndecMultiset {
    counts: BTreeMap<ZQVertex, u64>,
}

impl IndecMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: ZQVertex) -> Self {
        let mut m = Self::new();
        m.insert(x, 1);
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ZQVertex, u64)>) -> Self {
        let mut m = Self::new();
        for (x, k) in pairs {
            m.insert(x, k);
        }
        m
    }

    pub fn insert(&mut self, x: ZQVertex, k: u64) {
        if k > 0 {
            *self.counts.entry(x).or_insert(0) += k;
        }
    }

    pub fn extend(&mut self, other: &IndecMultiset) {
        for (&x, &k) in &other.counts {
            self.insert(x, k);
        }
    }

    /// `self − other`, or `None` if `other` is not contained in `self`.
    pub fn checked_sub(&self, other: &IndecMultiset) -> Option<IndecMultiset> {
        let mut out = self.clone();
        for (x, &k) in &other.counts {
            let have = out.counts.get_mut(x)?;
            if *have < k {
                return None;
            }
            *have -= k;
            if *have == 0 {
                out.counts.remove(x);
            }
        }
        Some(out)
    }

    pub fn translate(&self, k: i64) -> IndecMultiset {
        IndecMultiset {
            counts: self.counts.iter().map(|(x, &c)| (x.translate(k), c)).collect(),
        }
    }

    pub fn multiplicity(&self, x: ZQVertex) -> u64 {
        self.counts.get(&x).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ZQVertex, u64)> + '_ {
        self.counts.iter().map(|(&x, &k)| (x, k))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of distinct vertices.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// A quiver together with its Coxeter data, ready for knitting.
#[derive(Clone, Debug)]
pub struct Knitter {
    quiver: Quiver,
    class: QuiverClass,
    cartan: IntMatrix,
    phi: IntMatrix,
    phi_inv: IntMatrix,
}

impl Knitter {
    pub fn new(q: &Quiver) -> Self {
        Knitter {
            quiver: q.clone(),
            class: classify(q),
            cartan: cartan_matrix(q),
            phi: coxeter_phi(q),
            phi_inv: coxeter_phi_inverse(q),
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn class(&self) -> QuiverClass {
        self.class
    }

    fn coxeter_number(&self) -> Result<u64> {
        self.class.coxeter_number().ok_or(Error::NotDynkin)
    }

    /// `Φ^{-m} χ(P_i)`; entries may be negative outside the module window.
    pub fn dimvec(&self, x: ZQVertex) -> Result<DimVec> {
        let mut d = self.cartan.column(x.vertex);
        let step = if x.power >= 0 { &self.phi_inv } else { &self.phi };
        for _ in 0..x.power.unsigned_abs() {
            d = step
                .checked_mul_vec(&d)
                .ok_or_else(|| Error::Overflow(format!("dimension vector at power {}", x.power)))?;
        }
        Ok(d)
    }

    /// Middle term of the mesh starting at `x`.
    pub fn successors(&self, x: ZQVertex) -> IndecMultiset {
        let mut out = IndecMultiset::new();
        for a in self.quiver.arrows() {
            if a.tail == x.vertex {
                out.insert(ZQVertex::new(a.head, x.power), 1);
            }
            if a.head == x.vertex {
                out.insert(ZQVertex::new(a.tail, x.power + 1), 1);
            }
        }
        out
    }

    /// Middle term of the mesh ending at `x`.
    pub fn predecessors(&self, x: ZQVertex) -> IndecMultiset {
        let mut out = IndecMultiset::new();
        for a in self.quiver.arrows() {
            if a.head == x.vertex {
                out.insert(ZQVertex::new(a.tail, x.power), 1);
            }
            if a.tail == x.vertex {
                out.insert(ZQVertex::new(a.head, x.power - 1), 1);
            }
        }
        out
    }

    pub fn successors_of(&self, m: &IndecMultiset) -> IndecMultiset {
        let mut out = IndecMultiset::new();
        for (x, k) in m.iter() {
            for (y, l) in self.successors(x).iter() {
                out.insert(y, k * l);
            }
        }
        out
    }

    /// Sum of dimension vectors with multiplicity.
    pub fn multiset_dimvec(&self, m: &IndecMultiset) -> Result<DimVec> {
        let mut acc = vec![0i64; self.quiver.num_vertices()];
        for (x, k) in m.iter() {
            for (a, d) in acc.iter_mut().zip(self.dimvec(x)?) {
                *a += k as i64 * d;
            }
        }
        Ok(acc)
    }

    /// All module positions `(i, m)`, `m ≥ 0`, ordered by `(m, i)`.
    pub fn enumerate_indecomposables(&self) -> Result<Vec<(ZQVertex, DimVec)>> {
        self.coxeter_number()?;
        let mut out = Vec::new();
        for i in 0..self.quiver.num_vertices() {
            let mut m = 0;
            loop {
                let x = ZQVertex::new(i, m);
                let d = self.dimvec(x)?;
                if d.iter().any(|&e| e < 0) || d.iter().all(|&e| e == 0) {
                    break;
                }
                out.push((x, d));
                m += 1;
            }
        }
        out.sort_by_key(|(x, _)| (x.power, x.vertex));
        Ok(out)
    }

    /// `L_0 = M`, `L_1 = succ(M)`, `L_n = succ(L_{n−1}) − τ⁻¹L_{n−2}`.
    pub fn ladder(&self, start: &IndecMultiset, n_max: usize) -> Result<Vec<IndecMultiset>> {
        let mut out = vec![start.clone()];
        for n in 1..=n_max {
            let next = self.successors_of(&out[n - 1]);
            let next = if n >= 2 {
                next.checked_sub(&out[n - 2].translate(1))
                    .ok_or(Error::LadderBroken { step: n })?
            } else {
                next
            };
            out.push(next);
        }
        Ok(out)
    }

    /// Per-degree pieces of `Λe_i` from the ladder of `P_i`. Without `n_max`
    /// the Dynkin range `0..=h−2` is used.
    pub fn qha_decomposition(&self, i: usize, n_max: Option<usize>) -> Result<QhaDecomposition> {
        let n_max = match n_max {
            Some(n) => n,
            None => (self.coxeter_number()? as usize).saturating_sub(2),
        };
        let per_degree = self.ladder(&IndecMultiset::singleton(ZQVertex::new(i, 0)), n_max)?;
        let mut aggregate = IndecMultiset::new();
        let mut degree_dims = Vec::with_capacity(per_degree.len());
        for l in &per_degree {
            aggregate.extend(l);
            degree_dims.push(self.multiset_dimvec(l)?);
        }
        let aggregate_dims = self.multiset_dimvec(&aggregate)?;
        Ok(QhaDecomposition {
            vertex: i,
            per_degree,
            degree_dims,
            total: aggregate_dims.iter().sum(),
            aggregate_dims,
            aggregate,
        })
    }

    /// For Dynkin Q: the aggregate of `Λe_i` contains each indecomposable `N`
    /// exactly `(χN)_i` times.
    pub fn verify_aggregate(&self, i: usize) -> Result<bool> {
        let indecs = self.enumerate_indecomposables()?;
        let dec = self.qha_decomposition(i, None)?;
        let expected = IndecMultiset::from_pairs(
            indecs.iter().map(|(x, d)| (*x, d[i].max(0) as u64)),
        );
        Ok(expected == dec.aggregate)
    }

    /// `P_i`, `I_i`, `S_i` names matching the dimension vector at `x`.
    pub fn module_names(&self, x: ZQVertex) -> Result<Vec<String>> {
        let d = self.dimvec(x)?;
        let q = &self.quiver;
        let mut names = Vec::new();
        if x.power == 0 {
            names.push(format!("P_{}", q.label(x.vertex)));
        }
        for j in 0..q.num_vertices() {
            if self.cartan.row(j) == d.as_slice() {
                names.push(format!("I_{}", q.label(j)));
            }
        }
        for j in 0..q.num_vertices() {
            if d.iter().enumerate().all(|(k, &e)| e == i64::from(k == j)) {
                names.push(format!("S_{}", q.label(j)));
            }
        }
        Ok(names)
    }

    /// Module positions for Dynkin Q, otherwise powers `0..depth`.
    pub fn default_window(&self, depth: usize) -> Result<Vec<ZQVertex>> {
        if self.class.is_dynkin() {
            Ok(self.enumerate_indecomposables()?.into_iter().map(|(x, _)| x).collect())
        } else {
            Ok(preprojective_window(&self.quiver, depth))
        }
    }

    /// DOT digraph on `window`; nodes carry dimension vectors and module names.
    pub fn export_dot(&self, window: &[ZQVertex]) -> Result<String> {
        let q = &self.quiver;
        let mut out = String::from("digraph ZQ {\n  rankdir=LR;\n  node [shape=box];\n");
        let mut sorted = window.to_vec();
        sorted.sort_by_key(|x| (x.power, x.vertex));
        sorted.dedup();
        let node = |x: &ZQVertex| format!("\"{},{}\"", q.label(x.vertex), x.power);
        for x in &sorted {
            let d = self.dimvec(*x)?;
            let dims = d.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            let names = self.module_names(*x)?;
            let label = if names.is_empty() {
                format!("({dims})")
            } else {
                format!("{} ({dims})", names.join("="))
            };
            writeln!(out, "  {} [label=\"{}\"];", node(x), label).unwrap();
        }
        for x in &sorted {
            for (y, k) in self.successors(*x).iter() {
                if sorted.binary_search_by_key(&(y.power, y.vertex), |z| (z.power, z.vertex)).is_ok() {
                    for _ in 0..k {
                        writeln!(out, "  {} -> {};", node(x), node(&y)).unwrap();
                    }
                }
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}

/// All `(i, m)` with `0 ≤ m < depth`.
pub fn preprojective_window(q: &Quiver, depth: usize) -> Vec<ZQVertex> {
    let mut out = Vec::new();
    for m in 0..depth as i64 {
        for i in 0..q.num_vertices() {
            out.push(ZQVertex::new(i, m));
        }
    }
    out
}

/// Per-degree description of `Λe_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QhaDecomposition {
    pub vertex: usize,
    pub per_degree: Vec<IndecMultiset>,
    /// Dimension vector of each degree piece.
    pub degree_dims: Vec<DimVec>,
    pub aggregate: IndecMultiset,
    pub aggregate_dims: DimVec,
    pub total: i64,
}

pub fn dimvec(q: &Quiver, x: ZQVertex) -> Result<DimVec> {
    Knitter::new(q).dimvec(x)
}

pub fn successors(q: &Quiver, x: ZQVertex) -> IndecMultiset {
    Knitter::new(q).successors(x)
}

pub fn enumerate_indecomposables(q: &Quiver) -> Result<Vec<(ZQVertex, DimVec)>> {
    Knitter::new(q).enumerate_indecomposables()
}

pub fn ladder(q: &Quiver, start: &IndecMultiset, n_max: usize) -> Result<Vec<IndecMultiset>> {
    Knitter::new(q).ladder(start, n_max)
}

/// `χᵛ` summed over a multiset.
pub fn multiset_weighted_chi<T: Field>(k: &Knitter, v: &[T], m: &IndecMultiset) -> Result<T> {
    let d = k.multiset_dimvec(m)?;
    crate::coxeter::weighted_chi(v, &d)
}

/// True when `q` is Â_N (N ≥ 2) on vertices `0 … N` with arrows `k → k+1` and `0 → N`.
pub fn is_hat_a(q: &Quiver) -> bool {
    let n = q.num_vertices();
    if n < 3 || q.arrows().len() != n {
        return false;
    }
    let big_n = n - 1;
    if q.vertices().iter().enumerate().any(|(k, v)| *v != k.to_string()) {
        return false;
    }
    let mut ends: Vec<(usize, usize)> = q.arrows().iter().map(|a| (a.tail, a.head)).collect();
    ends.sort_unstable();
    let mut want: Vec<(usize, usize)> = (0..big_n).map(|k| (k, k + 1)).collect();
    want.push((0, big_n));
    want.sort_unstable();
    ends == want
}

/// `M_(a,b) = τ^{−q−b} P_r` where `a − 2b = q(N+1) + r`, `0 ≤ r ≤ N`.
pub fn hat_an_module(big_n: usize, a: i64, b: i64) -> ZQVertex {
    let period = big_n as i64 + 1;
    let s = a - 2 * b;
    let (q, r) = (s.div_euclid(period), s.rem_euclid(period));
    ZQVertex::new(r as usize, q + b)
}

/// Closed-form prediction `Λ_n e_i ≅ ⊕_{b=0}^{n} M_(i+n, b)` on Â_N.
pub fn hat_an_predict(q: &Quiver, i: usize, n: usize) -> Result<IndecMultiset> {
    if !is_hat_a(q) {
        return Err(Error::WrongQuiverShape(
            "expected Â_N on vertices 0..N with arrows k -> k+1 and 0 -> N".into(),
        ));
    }
    let big_n = q.num_vertices() - 1;
    if i > big_n {
        return Err(Error::UnknownVertex(i.to_string()));
    }
    let mut out = IndecMultiset::new();
    for b in 0..=n as i64 {
        out.insert(hat_an_module(big_n, (i + n) as i64, b), 1);
    }
    Ok(out)
}

fn label_value(label: &str) -> Value {
    match label.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(label),
    }
}

/// `[{"vertex":[i,m],"mult":k}, …]` with vertex labels from `q`.
pub fn multiset_to_json(q: &Quiver, m: &IndecMultiset) -> Value {
    Value::Array(
        m.iter()
            .map(|(x, k)| json!({"vertex": [label_value(q.label(x.vertex)), x.power], "mult": k}))
            .collect(),
    )
}

/// Compact text form such as `{(2,1), (1,1)^3}`.
pub fn format_multiset(q: &Quiver, m: &IndecMultiset) -> String {
    let parts: Vec<String> = m
        .iter()
        .map(|(x, k)| {
            let base = format!("({},{})", q.label(x.vertex), x.power);
            if k == 1 {
                base
            } else {
                format!("{base}^{k}")
            }
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}
