//! The path algebra of the double quiver and the two relation families.
//!
//! Paths compose left to right: `a.b` is `a` followed by `b`, so it needs
//! `head(a) = tail(b)`. A path is bigraded by its length and by the number of
//! reverse arrows it uses. Graded dimensions of a quotient are computed cell by
//! cell as `#paths − rank(ideal component)`, where the ideal component at
//! length ℓ is spanned by the generators of length ℓ together with
//! `arrow · I_{ℓ−1}` and `I_{ℓ−1} · arrow`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::coxeter::{cartan_matrix, common_field};
use crate::field::Field;
use crate::knit::{IndecMultiset, Knitter, ZQVertex};
use crate::quiver::{classify, DoubleQuiver, Quiver};
use crate::weights::is_regular;
use crate::{Error, Result};

/// A path in the double quiver; trivial paths have no arrows.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    /// Double-quiver arrow indices in traversal order.
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(i: usize) -> Self {
        Path {
            source: i,
            target: i,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(dq: &DoubleQuiver, k: usize) -> Self {
        let a = dq.arrow(k);
        Path {
            source: a.tail,
            target: a.head,
            arrows: vec![k],
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Number of reverse arrows.
    pub fn star(&self, dq: &DoubleQuiver) -> usize {
        self.arrows.iter().filter(|&&k| dq.arrow(k).reverse).count()
    }

    /// `self` followed by `other`, if they compose.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        (self.target == other.source).then(|| {
            let mut arrows = self.arrows.clone();
            arrows.extend_from_slice(&other.arrows);
            Path {
                source: self.source,
                target: other.target,
                arrows,
            }
        })
    }

    pub fn display(&self, dq: &DoubleQuiver) -> String {
        if self.arrows.is_empty() {
            format!("e({})", dq.base().label(self.source))
        } else {
            self.arrows
                .iter()
                .map(|&k| dq.arrow(k).name.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// `(source, target, length, star)`.
pub type CellKey = (usize, usize, usize, usize);

/// Finite linear combination of paths.
#[derive(Clone, Debug, PartialEq)]
pub struct PathVector<T> {
    terms: BTreeMap<Path, T>,
}

impl<T: Field> Default for PathVector<T> {
    fn default() -> Self {
        PathVector {
            terms: BTreeMap::new(),
        }
    }
}

impl<T: Field> PathVector<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_path(p: Path) -> Self {
        let mut v = Self::zero();
        v.add_term(p, T::one());
        v
    }

    pub fn add_term(&mut self, p: Path, c: T) {
        let sum = match self.terms.remove(&p) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(p, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &T)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &Path) -> T {
        self.terms.get(p).cloned().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (p, x) in &self.terms {
            out.add_term(p.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, x) in &other.terms {
            out.add_term(p.clone(), x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    /// Product in the path algebra: concatenation, zero when paths do not compose.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (p, x) in &self.terms {
            for (r, y) in &other.terms {
                if let Some(pr) = p.concat(r) {
                    out.add_term(pr, x.clone() * y.clone());
                }
            }
        }
        out
    }

    /// The common bidegree cell, `None` for the zero vector.
    pub fn cell(&self, dq: &DoubleQuiver) -> Result<Option<CellKey>> {
        let mut key = None;
        for p in self.terms.keys() {
            let k = (p.source, p.target, p.len(), p.star(dq));
            match key {
                None => key = Some(k),
                Some(prev) if prev != k => {
                    return Err(Error::NonHomogeneous(format!(
                        "terms in cells {prev:?} and {k:?}"
                    )))
                }
                _ => {}
            }
        }
        Ok(key)
    }

    pub fn display(&self, dq: &DoubleQuiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (p, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, text),
            };
            let coef = if mag == "1" {
                String::new()
            } else if mag.contains(['+', '-', ' ']) {
                format!("({mag})*")
            } else {
                format!("{mag}*")
            };
            let sep = match (k, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(&format!("{sep}{coef}{}", p.display(dq)));
        }
        out
    }
}

fn arrow_vec<T: Field>(dq: &DoubleQuiver, k: usize) -> PathVector<T> {
    PathVector::from_path(Path::arrow(dq, k))
}

fn check_weight<T: Field>(q: &Quiver, v: &[T]) -> Result<()> {
    if v.len() != q.num_vertices() {
        return Err(Error::LengthMismatch {
            expected: q.num_vertices(),
            got: v.len(),
        });
    }
    common_field(v)?;
    if let Some(k) = v.iter().position(Zero::is_zero) {
        return Err(Error::NonSincereWeight(k));
    }
    Ok(())
}

/// `ρ_i = Σ_{t(α)=i} αα* − Σ_{h(α)=i} α*α`, scaled by `v_i⁻¹` when a weight is given.
pub fn mesh_relation<T: Field>(dq: &DoubleQuiver, i: usize, v: Option<&[T]>) -> Result<PathVector<T>> {
    let q = dq.base();
    if i >= q.num_vertices() {
        return Err(Error::UnknownVertex(i.to_string()));
    }
    let m = q.arrows().len();
    let mut rho = PathVector::zero();
    for (k, a) in q.arrows().iter().enumerate() {
        let (x, x_star) = (arrow_vec::<T>(dq, k), arrow_vec::<T>(dq, k + m));
        if a.tail == i {
            rho = rho.add(&x.mul(&x_star));
        }
        if a.head == i {
            rho = rho.sub(&x_star.mul(&x));
        }
    }
    match v {
        None => Ok(rho),
        Some(v) => {
            check_weight(q, v)?;
            Ok(rho.scale(&v[i].inv().expect("sincere")))
        }
    }
}

/// `η_a = v_{h(a)}⁻¹ a·ρ_{h(a)} − v_{t(a)}⁻¹ ρ_{t(a)}·a`, i.e. `[a, Σ v_i⁻¹ρ_i]`.
pub fn qh_relation<T: Field>(dq: &DoubleQuiver, v: &[T], a: usize) -> Result<PathVector<T>> {
    check_weight(dq.base(), v)?;
    let arr = dq.arrow(a);
    let x = arrow_vec::<T>(dq, a);
    let left = x.mul(&mesh_relation(dq, arr.head, Some(v))?);
    let right = mesh_relation(dq, arr.tail, Some(v))?.mul(&x);
    Ok(left.sub(&right))
}

/// `v_{t(a)} v_{h(a)} η_a`, free of inverted weights.
pub fn qh_relation_cleared<T: Field>(dq: &DoubleQuiver, v: &[T], a: usize) -> Result<PathVector<T>> {
    check_weight(dq.base(), v)?;
    let arr = dq.arrow(a);
    let x = arrow_vec::<T>(dq, a);
    let left = x.mul(&mesh_relation::<T>(dq, arr.head, None)?).scale(&v[arr.tail]);
    let right = mesh_relation::<T>(dq, arr.tail, None)?.mul(&x).scale(&v[arr.head]);
    Ok(left.sub(&right))
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelationFamily<T> {
    Preprojective,
    QuiverHeisenberg(Vec<T>),
}

impl<T: Field> RelationFamily<T> {
    pub fn name(&self) -> &'static str {
        match self {
            RelationFamily::Preprojective => "preprojective",
            RelationFamily::QuiverHeisenberg(_) => "quiver-heisenberg",
        }
    }

    pub fn weight(&self) -> Option<&[T]> {
        match self {
            RelationFamily::Preprojective => None,
            RelationFamily::QuiverHeisenberg(v) => Some(v),
        }
    }

    /// Nonzero generators: `ρ_i` for each vertex, or the cleared `η_a` for each double arrow.
    pub fn generators(&self, dq: &DoubleQuiver) -> Result<Vec<PathVector<T>>> {
        let gens = match self {
            RelationFamily::Preprojective => (0..dq.base().num_vertices())
                .map(|i| mesh_relation::<T>(dq, i, None))
                .collect::<Result<Vec<_>>>()?,
            RelationFamily::QuiverHeisenberg(v) => (0..dq.arrows().len())
                .map(|a| qh_relation_cleared(dq, v, a))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(gens.into_iter().filter(|g| !g.is_zero()).collect())
    }
}

/// Bounds for the graded computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub max_len: usize,
    pub max_star: usize,
    /// Largest number of paths allowed in one cell.
    pub cell_cap: usize,
}

impl EngineConfig {
    pub const DEFAULT_CAP: usize = 200_000;

    pub fn new(max_len: usize, max_star: usize) -> Self {
        EngineConfig {
            max_len,
            max_star,
            cell_cap: Self::DEFAULT_CAP,
        }
    }

    /// `ℓ ≤ 2h − 4` and `s ≤ h − 1` for Dynkin Q; one more length band with `extra_band`.
    pub fn dynkin_default(q: &Quiver, extra_band: bool) -> Result<Self> {
        let h = classify(q).coxeter_number().ok_or(Error::NotDynkin)? as usize;
        let max_len = (2 * h).saturating_sub(4) + usize::from(extra_band);
        Ok(Self::new(max_len, h - 1))
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cell_cap = cap;
        self
    }
}

/// Graded dimensions `dim` of each cell `(source, target, length, star)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDimTable {
    pub max_len: usize,
    pub max_star: usize,
    entries: BTreeMap<CellKey, u64>,
}

impl GradedDimTable {
    pub fn get(&self, source: usize, target: usize, len: usize, star: usize) -> u64 {
        self.entries.get(&(source, target, len, star)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (CellKey, u64)> + '_ {
        self.entries.iter().map(|(&k, &d)| (k, d))
    }

    /// `dim e_j Λ_s e_i` for every source `j`, summed over lengths.
    pub fn slice(&self, target: usize, star: usize, num_vertices: usize) -> Vec<u64> {
        let mut out = vec![0u64; num_vertices];
        for (&(j, i, _, s), &d) in &self.entries {
            if i == target && s == star {
                out[j] += d;
            }
        }
        out
    }

    /// Per-source dimensions of `Λe_i`.
    pub fn column(&self, target: usize, num_vertices: usize) -> Vec<u64> {
        let mut out = vec![0u64; num_vertices];
        for (&(j, i, _, _), &d) in &self.entries {
            if i == target {
                out[j] += d;
            }
        }
        out
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Total dimension in one path length.
    pub fn length_band(&self, len: usize) -> u64 {
        self.entries.iter().filter(|(k, _)| k.2 == len).map(|(_, d)| d).sum()
    }

    /// Total dimension in one star degree.
    pub fn star_band(&self, star: usize) -> u64 {
        self.entries.iter().filter(|(k, _)| k.3 == star).map(|(_, d)| d).sum()
    }

    /// Table restricted to nonzero dimensions, as the comparison key for
    /// weight-independence and field-change checks.
    pub fn nonzero(&self) -> BTreeMap<CellKey, u64> {
        self.entries.iter().filter(|(_, &d)| d > 0).map(|(&k, &d)| (k, d)).collect()
    }

    /// CSV with columns `i,j,l,s,dim` (source, target, length, star).
    pub fn to_csv(&self, q: &Quiver) -> String {
        let mut out = String::from("i,j,l,s,dim\n");
        for (&(i, j, l, s), &d) in &self.entries {
            out.push_str(&format!("{},{},{l},{s},{d}\n", q.label(i), q.label(j)));
        }
        out
    }

    pub fn to_json(&self, q: &Quiver) -> Value {
        json!({
            "max_len": self.max_len,
            "max_star": self.max_star,
            "total": self.total(),
            "cells": self.entries.iter().map(|(&(i, j, l, s), &d)| json!({
                "i": q.label(i), "j": q.label(j), "l": l, "s": s, "dim": d
            })).collect::<Vec<_>>(),
        })
    }
}

type SparseRow<T> = Vec<(usize, T)>;

/// Paths of one cell and a semi-echelon basis of the ideal inside it.
struct Cell<T> {
    paths: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, usize>,
    rows: Vec<SparseRow<T>>,
    pivots: HashMap<usize, usize>,
}

impl<T: Field> Cell<T> {
    fn new(mut paths: Vec<Vec<u16>>) -> Self {
        paths.sort_unstable();
        let index = paths.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
        Cell {
            paths,
            index,
            rows: Vec::new(),
            pivots: HashMap::new(),
        }
    }

    fn reduce(&self, mut row: SparseRow<T>) -> SparseRow<T> {
        while let Some((lead, _)) = row.first() {
            let Some(&k) = self.pivots.get(lead) else { break };
            row = eliminate(&row, &self.rows[k]);
        }
        row
    }

    fn insert(&mut self, row: SparseRow<T>) {
        let row = self.reduce(row);
        if let Some(&(lead, _)) = row.first() {
            self.pivots.insert(lead, self.rows.len());
            self.rows.push(row);
        }
    }

    fn dim(&self) -> u64 {
        (self.paths.len() - self.rows.len()) as u64
    }
}

/// `p·row − r·pivot` with `p`, `r` the leading coefficients; the result is normalised.
fn eliminate<T: Field>(row: &[(usize, T)], pivot: &[(usize, T)]) -> SparseRow<T> {
    let p = pivot[0].1.clone();
    let r = row[0].1.clone();
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut x, mut y) = (1, 1);
    while x < row.len() || y < pivot.len() {
        let take = match (row.get(x), pivot.get(y)) {
            (Some(a), Some(b)) => a.0.cmp(&b.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        let (col, val) = match take {
            std::cmp::Ordering::Less => {
                x += 1;
                (row[x - 1].0, p.clone() * row[x - 1].1.clone())
            }
            std::cmp::Ordering::Greater => {
                y += 1;
                (pivot[y - 1].0, -(r.clone() * pivot[y - 1].1.clone()))
            }
            std::cmp::Ordering::Equal => {
                x += 1;
                y += 1;
                (
                    row[x - 1].0,
                    p.clone() * row[x - 1].1.clone() - r.clone() * pivot[y - 1].1.clone(),
                )
            }
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    T::normalize_row(&mut out);
    out
}

/// Cells of one length, keyed by `(source, target, star)`.
type Level<T> = BTreeMap<(usize, usize, usize), Cell<T>>;

/// Computes graded dimensions of `kQ̄ / (generators)`.
pub struct Engine<T> {
    dq: DoubleQuiver,
    /// Generators grouped by cell, as `(path, coefficient)` lists.
    gens: HashMap<CellKey, Vec<Vec<(Vec<u16>, T)>>>,
    config: EngineConfig,
}

impl<T: Field> Engine<T> {
    pub fn new(q: &Quiver, family: &RelationFamily<T>, config: EngineConfig) -> Result<Self> {
        let dq = DoubleQuiver::new(q);
        if dq.arrows().len() > u16::MAX as usize {
            return Err(Error::ResourceBound("too many arrows".into()));
        }
        let mut gens: HashMap<CellKey, Vec<_>> = HashMap::new();
        for g in family.generators(&dq)? {
            let key = g.cell(&dq)?.expect("generators are nonzero");
            gens.entry(key).or_default().push(to_raw(&g));
        }
        Ok(Engine { dq, gens, config })
    }

    /// Multiply every generator by `unit`, a one of the target field. Needed
    /// when the generators carry only unbound integer constants (the
    /// unweighted family over a runtime field such as F_p).
    pub fn bind(mut self, unit: &T) -> Self {
        for rows in self.gens.values_mut() {
            for row in rows.iter_mut() {
                for (_, c) in row.iter_mut() {
                    *c = c.clone() * unit.clone();
                }
            }
        }
        self
    }

    pub fn double(&self) -> &DoubleQuiver {
        &self.dq
    }

    fn level_zero(&self) -> Level<T> {
        (0..self.dq.base().num_vertices())
            .map(|i| ((i, i, 0), Cell::new(vec![Vec::new()])))
            .collect()
    }

    fn next_level(&self, prev: &Level<T>, len: usize) -> Result<Level<T>> {
        let dq = &self.dq;
        let mut paths: BTreeMap<(usize, usize, usize), Vec<Vec<u16>>> = BTreeMap::new();
        for (&(i, k, s), cell) in prev {
            for (a, arr) in dq.arrows().iter().enumerate().filter(|(_, arr)| arr.tail == k) {
                let s2 = s + usize::from(arr.reverse);
                if s2 > self.config.max_star {
                    continue;
                }
                let bucket = paths.entry((i, arr.head, s2)).or_default();
                for p in &cell.paths {
                    let mut np = p.clone();
                    np.push(a as u16);
                    bucket.push(np);
                }
            }
        }
        if let Some((key, ps)) = paths.iter().find(|(_, ps)| ps.len() > self.config.cell_cap) {
            return Err(Error::ResourceBound(format!(
                "cell (source {}, target {}, length {len}, star {}) has {} paths, cap is {}",
                key.0,
                key.1,
                key.2,
                ps.len(),
                self.config.cell_cap
            )));
        }
        let built: Vec<((usize, usize, usize), Cell<T>)> = paths
            .into_par_iter()
            .map(|(key, ps)| {
                let mut cell = Cell::new(ps);
                self.fill(&mut cell, key, len, prev);
                (key, cell)
            })
            .collect();
        Ok(built.into_iter().collect())
    }

    fn fill(&self, cell: &mut Cell<T>, (i, j, s): (usize, usize, usize), len: usize, prev: &Level<T>) {
        let dq = &self.dq;
        let mut candidates: Vec<SparseRow<T>> = Vec::new();
        for (a, arr) in dq.arrows().iter().enumerate() {
            let r = usize::from(arr.reverse);
            if s < r {
                continue;
            }
            // right multiplication by a
            if arr.head == j {
                if let Some(src) = prev.get(&(i, arr.tail, s - r)) {
                    for row in &src.rows {
                        candidates.push(map_row(row, cell, |p| {
                            let mut np = p.to_vec();
                            np.push(a as u16);
                            np
                        }, src));
                    }
                }
            }
            // left multiplication by a
            if arr.tail == i {
                if let Some(src) = prev.get(&(arr.head, j, s - r)) {
                    for row in &src.rows {
                        candidates.push(map_row(row, cell, |p| {
                            let mut np = Vec::with_capacity(p.len() + 1);
                            np.push(a as u16);
                            np.extend_from_slice(p);
                            np
                        }, src));
                    }
                }
            }
        }
        if let Some(gs) = self.gens.get(&(i, j, len, s)) {
            for g in gs {
                let mut row: SparseRow<T> = g
                    .iter()
                    .map(|(p, c)| (cell.index[p], c.clone()))
                    .collect();
                row.sort_unstable_by_key(|e| e.0);
                T::normalize_row(&mut row);
                candidates.push(row);
            }
        }
        for row in candidates {
            cell.insert(row);
        }
    }

    /// Run to the configured bounds and return the table.
    pub fn graded_dims(&self) -> Result<GradedDimTable> {
        Ok(self.run(None)?.0)
    }

    /// Run up to the length of `key`; also return the reduced form of `elem`
    /// against the ideal component in that cell.
    fn run(&self, probe: Option<(CellKey, &PathVector<T>)>) -> Result<(GradedDimTable, Option<bool>)> {
        let max_len = probe.map_or(self.config.max_len, |(k, _)| k.2);
        let mut entries = BTreeMap::new();
        let mut level = self.level_zero();
        let mut verdict = None;
        for len in 0..=max_len {
            if len > 0 {
                level = self.next_level(&level, len)?;
            }
            for (&(i, j, s), cell) in &level {
                entries.insert((i, j, len, s), cell.dim());
            }
            if let Some(((i, j, l, s), elem)) = probe {
                if l == len {
                    verdict = Some(match level.get(&(i, j, s)) {
                        None => true,
                        Some(cell) => {
                            let mut row: SparseRow<T> = to_raw(elem)
                                .into_iter()
                                .map(|(p, c)| (cell.index[&p], c))
                                .collect();
                            row.sort_unstable_by_key(|e| e.0);
                            cell.reduce(row).is_empty()
                        }
                    });
                }
            }
        }
        Ok((
            GradedDimTable {
                max_len,
                max_star: self.config.max_star,
                entries,
            },
            verdict,
        ))
    }

    /// Ideal membership of a homogeneous element.
    pub fn is_zero(&self, elem: &PathVector<T>) -> Result<bool> {
        let Some(key) = elem.cell(&self.dq)? else {
            return Ok(true);
        };
        let engine = Engine {
            dq: self.dq.clone(),
            gens: self.gens.clone(),
            config: EngineConfig {
                max_len: key.2,
                max_star: key.3,
                cell_cap: self.config.cell_cap,
            },
        };
        Ok(engine.run(Some((key, elem)))?.1.expect("probe cell reached"))
    }
}

fn to_raw<T: Field>(v: &PathVector<T>) -> Vec<(Vec<u16>, T)> {
    v.terms()
        .map(|(p, c)| (p.arrows.iter().map(|&k| k as u16).collect(), c.clone()))
        .collect()
}

fn map_row<T: Field>(
    row: &[(usize, T)],
    target: &Cell<T>,
    f: impl Fn(&[u16]) -> Vec<u16>,
    source: &Cell<T>,
) -> SparseRow<T> {
    let mut out: SparseRow<T> = row
        .iter()
        .map(|(col, c)| (target.index[&f(&source.paths[*col])], c.clone()))
        .collect();
    out.sort_unstable_by_key(|e| e.0);
    out
}

pub fn graded_dim<T: Field>(
    q: &Quiver,
    family: &RelationFamily<T>,
    config: EngineConfig,
) -> Result<GradedDimTable> {
    Engine::new(q, family, config)?.graded_dims()
}

pub fn element_is_zero<T: Field>(
    q: &Quiver,
    family: &RelationFamily<T>,
    elem: &PathVector<T>,
) -> Result<bool> {
    Engine::new(q, family, EngineConfig::new(0, 0))?.is_zero(elem)
}

/// One comparison between the engine and the knitting prediction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub check: &'static str,
    pub vertex: usize,
    pub star: usize,
    pub source: usize,
    pub engine: u64,
    pub expected: u64,
}

impl Comparison {
    pub fn ok(&self) -> bool {
        self.engine == self.expected
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub regular: bool,
    pub comparisons: Vec<Comparison>,
    pub engine_total: u64,
    /// `r h² (h + 1) / 12`.
    pub formula_total: u64,
    /// Dimension of the extra length band `2h − 3`, when scanned.
    pub extra_band: Option<u64>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.comparisons.iter().all(Comparison::ok)
            && self.engine_total == self.formula_total
            && self.extra_band.unwrap_or(0) == 0
    }

    pub fn first_mismatch(&self) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| !c.ok())
    }

    pub fn to_json(&self, q: &Quiver) -> Value {
        json!({
            "ok": self.ok(),
            "regular": self.regular,
            "engine_total": self.engine_total,
            "formula_total": self.formula_total,
            "extra_band": self.extra_band,
            "mismatches": self.comparisons.iter().filter(|c| !c.ok()).map(|c| json!({
                "check": c.check, "i": q.label(c.vertex), "s": c.star,
                "j": q.label(c.source), "engine": c.engine, "expected": c.expected,
            })).collect::<Vec<_>>(),
            "comparisons": self.comparisons.len(),
        })
    }
}

fn knit_slices(k: &Knitter, i: usize, h: usize) -> Result<Vec<Vec<i64>>> {
    let ladder = k.ladder(&IndecMultiset::singleton(ZQVertex::new(i, 0)), h - 1)?;
    ladder.iter().map(|l| k.multiset_dimvec(l)).collect()
}

/// Compare the quiver Heisenberg table with the ladder of each `P_i` in `vertices`.
pub fn verify_against_knitting<T: Field>(
    q: &Quiver,
    v: &[T],
    vertices: &[usize],
    extra_band: bool,
    cell_cap: usize,
) -> Result<VerifyReport> {
    let class = classify(q);
    let h = class.coxeter_number().ok_or(Error::NotDynkin)? as usize;
    let r = q.num_vertices();
    let regular = is_regular(q, v)?.regular == Some(true);
    let config = EngineConfig::dynkin_default(q, extra_band)?.with_cap(cell_cap);
    let table = graded_dim(q, &RelationFamily::QuiverHeisenberg(v.to_vec()), config)?;
    let knitter = Knitter::new(q);
    let cartan = cartan_matrix(q);
    let mut comparisons = Vec::new();
    for &i in vertices {
        if i >= r {
            return Err(Error::UnknownVertex(i.to_string()));
        }
        let slices = if h >= 2 { knit_slices(&knitter, i, h)? } else { vec![] };
        for (n, expected) in slices.iter().enumerate() {
            let engine = table.slice(i, n, r);
            for j in 0..r {
                comparisons.push(Comparison {
                    check: if n + 1 == h { "vanishing" } else { "ladder" },
                    vertex: i,
                    star: n,
                    source: j,
                    engine: engine[j],
                    expected: expected[j].max(0) as u64,
                });
            }
        }
        let top = table.slice(i, h - 2, r);
        for j in 0..r {
            comparisons.push(Comparison {
                check: "duality",
                vertex: i,
                star: h - 2,
                source: j,
                engine: top[j],
                expected: *cartan.get(i, j) as u64,
            });
        }
    }
    let (r64, h64) = (r as u64, h as u64);
    Ok(VerifyReport {
        regular,
        comparisons,
        engine_total: table.total(),
        formula_total: r64 * h64 * h64 * (h64 + 1) / 12,
        extra_band: extra_band.then(|| table.length_band(2 * h - 3)),
    })
}

/// Preprojective slices `e_j Π_s e_i` against `χ(τ^{-s}P_i)` on the module
/// window, and zero past it.
pub fn verify_preprojective<T: Field>(q: &Quiver, cell_cap: usize) -> Result<Vec<Comparison>> {
    let h = classify(q).coxeter_number().ok_or(Error::NotDynkin)? as usize;
    let r = q.num_vertices();
    let config = EngineConfig::new((2 * h).saturating_sub(4), h - 1).with_cap(cell_cap);
    let table = graded_dim::<T>(q, &RelationFamily::Preprojective, config)?;
    let k = Knitter::new(q);
    let mut out = Vec::new();
    for i in 0..r {
        let mut in_window = true;
        for s in 0..h {
            let d = k.dimvec(ZQVertex::new(i, s as i64))?;
            in_window &= d.iter().all(|&e| e >= 0) && d.iter().any(|&e| e > 0);
            let engine = table.slice(i, s, r);
            for j in 0..r {
                out.push(Comparison {
                    check: "preprojective",
                    vertex: i,
                    star: s,
                    source: j,
                    engine: engine[j],
                    expected: if in_window { d[j] as u64 } else { 0 },
                });
            }
        }
    }
    Ok(out)
}

/// Parse an element such as `2*a.b' - rho(2)` or `wrho2(2)`.
///
/// Terms are joined by `+`/`-`; factors inside a term are joined by `.` or
/// `*` and may be arrow names (`a`, `a'`), scalars, parenthesised
/// subexpressions, or the macros `e(i)`, `rho(i)`, `wrho(i)`, `wrho2(i)`.
pub fn parse_element<T: Field>(
    dq: &DoubleQuiver,
    text: &str,
    weight: Option<&[T]>,
    scalar: &dyn Fn(&str) -> Option<T>,
) -> Result<PathVector<T>> {
    let cleaned: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '−' { '-' } else { c })
        .collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    let mut total = PathVector::zero();
    for (neg, term) in split_top(&cleaned, &['+', '-'], true)? {
        let mut v = parse_term(dq, term, weight, scalar)?;
        if neg {
            v = v.scale(&-T::one());
        }
        total = total.add(&v);
    }
    Ok(total)
}

/// Split at top-level separators. With `signed`, returns whether each piece was
/// preceded by `-`.
fn split_top<'a>(s: &'a str, seps: &[char], signed: bool) -> Result<Vec<(bool, &'a str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut neg = false;
    for (k, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced `)` in `{s}`")));
                }
            }
            _ if depth == 0 && seps.contains(&c) => {
                let piece = &s[start..k];
                if !(signed && piece.is_empty() && k == 0) {
                    if piece.is_empty() {
                        return Err(Error::Parse(format!("empty term in `{s}`")));
                    }
                    out.push((neg, piece));
                }
                neg = c == '-';
                start = k + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced `(` in `{s}`")));
    }
    let last = &s[start..];
    if last.is_empty() {
        return Err(Error::Parse(format!("dangling operator in `{s}`")));
    }
    out.push((neg, last));
    Ok(out)
}

fn parse_term<T: Field>(
    dq: &DoubleQuiver,
    term: &str,
    weight: Option<&[T]>,
    scalar: &dyn Fn(&str) -> Option<T>,
) -> Result<PathVector<T>> {
    let mut coef = T::one();
    let mut acc: Option<PathVector<T>> = None;
    for (_, f) in split_top(term, &['.', '*'], false)? {
        let factor = parse_factor(dq, f, weight, scalar)?;
        match factor {
            Factor::Scalar(c) => coef = coef * c,
            Factor::Vector(v) => {
                acc = Some(match acc {
                    None => v,
                    Some(a) => a.mul(&v),
                })
            }
        }
    }
    acc.map(|v| v.scale(&coef))
        .ok_or_else(|| Error::Parse(format!("term `{term}` has no path")))
}

enum Factor<T> {
    Scalar(T),
    Vector(PathVector<T>),
}

fn parse_factor<T: Field>(
    dq: &DoubleQuiver,
    f: &str,
    weight: Option<&[T]>,
    scalar: &dyn Fn(&str) -> Option<T>,
) -> Result<Factor<T>> {
    let q = dq.base();
    if let Some(k) = dq.arrow_index(f) {
        return Ok(Factor::Vector(PathVector::from_path(Path::arrow(dq, k))));
    }
    if let Some(open) = f.find('(') {
        if f.ends_with(')') && open > 0 {
            let name = &f[..open];
            let arg = &f[open + 1..f.len() - 1];
            let i = q.vertex_index(arg)?;
            let need_weight = || {
                weight.ok_or_else(|| Error::Parse(format!("`{name}` needs a weight")))
            };
            return Ok(Factor::Vector(match name {
                "e" => PathVector::from_path(Path::trivial(i)),
                "rho" => mesh_relation::<T>(dq, i, None)?,
                "wrho" => mesh_relation(dq, i, Some(need_weight()?))?,
                "wrho2" => {
                    let w = mesh_relation(dq, i, Some(need_weight()?))?;
                    w.mul(&w)
                }
                _ => return Err(Error::Parse(format!("unknown macro `{name}`"))),
            }));
        }
    }
    if let Some(inner) = f.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        if let Some(c) = scalar(inner) {
            return Ok(Factor::Scalar(c));
        }
        return parse_element(dq, inner, weight, scalar).map(Factor::Vector);
    }
    if let Some(c) = scalar(f) {
        return Ok(Factor::Scalar(c));
    }
    Err(Error::Parse(format!("unknown arrow or factor `{f}`")))
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} i={} s={} j={}: engine {} expected {}",
            self.check, self.vertex, self.star, self.source, self.engine, self.expected
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::field::{parse_rational, Rational};
    use crate::scalar::int_weight;

    fn qparse(dq: &DoubleQuiver, s: &str, v: Option<&[Rational]>) -> PathVector<Rational> {
        parse_element(dq, s, v, &parse_rational).unwrap()
    }

    #[test]
    fn mesh_relations_match_hand_expansions() {
        let dq = DoubleQuiver::new(&catalog::linear_a(3));
        let rho2 = mesh_relation::<Rational>(&dq, 1, None).unwrap();
        assert_eq!(rho2, qparse(&dq, "-a1'.a1 + a2.a2'", None));
        assert_eq!(rho2.cell(&dq).unwrap(), Some((1, 1, 2, 1)));
        let a1 = DoubleQuiver::new(&catalog::linear_a(1));
        assert!(mesh_relation::<Rational>(&a1, 0, None).unwrap().is_zero());
        let kr = DoubleQuiver::new(&catalog::kronecker());
        assert_eq!(
            mesh_relation::<Rational>(&kr, 0, None).unwrap(),
            qparse(&kr, "a.a' + b.b'", None)
        );
    }

    #[test]
    fn qh_relations_match_hand_expansions() {
        let dq = DoubleQuiver::new(&catalog::linear_a(3));
        let v = int_weight(&[2, 3, 5]);
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        // η_α = −(v₂⁻¹+v₁⁻¹) α α* α + v₂⁻¹ α β β*
        let mut expect = PathVector::zero();
        expect.add_term(qparse(&dq, "a1.a1'.a1", None).terms().next().unwrap().0.clone(), -(q(1, 3) + q(1, 2)));
        expect.add_term(qparse(&dq, "a1.a2.a2'", None).terms().next().unwrap().0.clone(), q(1, 3));
        let eta = qh_relation(&dq, &v, 0).unwrap();
        assert_eq!(eta, expect);
        assert_eq!(eta.cell(&dq).unwrap(), Some((0, 1, 3, 1)));
        // η_β* = (v₂⁻¹+v₃⁻¹) β* β β* − v₂⁻¹ β* α* α
        let eta = qh_relation(&dq, &v, 3).unwrap();
        let expect = qparse(&dq, "8/15*a2'.a2.a2' - 1/3*a2'.a1'.a1", None);
        assert_eq!(eta, expect);
        assert_eq!(eta.cell(&dq).unwrap(), Some((2, 1, 3, 2)));
        // cleared form is a scalar multiple
        let cleared = qh_relation_cleared(&dq, &v, 3).unwrap();
        assert_eq!(cleared, eta.scale(&Rational::from_i64(15)));

        let kr = DoubleQuiver::new(&catalog::kronecker());
        let v = int_weight(&[2, 7]);
        let eta = qh_relation(&kr, &v, 0).unwrap();
        let expect = qparse(&kr, "-(1/7*a.b'.b + 9/14*a.a'.a + 1/2*b.b'.a)", None);
        assert_eq!(eta, expect);
    }

    #[test]
    fn non_sincere_is_rejected() {
        let dq = DoubleQuiver::new(&catalog::linear_a(2));
        assert!(matches!(
            qh_relation(&dq, &int_weight(&[1, 0]), 0),
            Err(Error::NonSincereWeight(1))
        ));
    }

    #[test]
    fn element_grammar() {
        let dq = DoubleQuiver::new(&catalog::linear_a(3));
        let v = int_weight(&[1, 1, 1]);
        let w = qparse(&dq, "wrho2(2)", Some(&v));
        let r = mesh_relation(&dq, 1, Some(&v)).unwrap();
        assert_eq!(w, r.mul(&r));
        assert_eq!(qparse(&dq, "e(1).a1", None), qparse(&dq, "a1", None));
        assert!(qparse(&dq, "a1.a1", None).is_zero());
        assert_eq!(qparse(&dq, "2*a1 - a1", None), qparse(&dq, "a1", None));
        assert!(parse_element::<Rational>(&dq, "a1 + x", None, &parse_rational).is_err());
        assert!(parse_element::<Rational>(&dq, "wrho(1)", None, &parse_rational).is_err());
        assert!(parse_element::<Rational>(&dq, "3", None, &parse_rational).is_err());
        let shown = qparse(&dq, "-a1'.a1 + 2*a2.a2'", None).display(&dq);
        assert_eq!(qparse(&dq, &shown, None), qparse(&dq, "-a1'.a1 + 2*a2.a2'", None));
    }

    #[test]
    fn inhomogeneous_elements_are_rejected() {
        let q = catalog::linear_a(3);
        let dq = DoubleQuiver::new(&q);
        let e = qparse(&dq, "a1 + a2", None);
        assert!(matches!(
            element_is_zero(&q, &RelationFamily::Preprojective, &e),
            Err(Error::NonHomogeneous(_))
        ));
    }

    /// Brute-force oracle: dense rank of the full spanning set of p·g·q.
    fn brute_dims(q: &Quiver, family: &RelationFamily<Rational>, max_len: usize) -> BTreeMap<CellKey, u64> {
        let dq = DoubleQuiver::new(q);
        let gens = family.generators(&dq).unwrap();
        let n = q.num_vertices();
        let mut paths_by_len: Vec<Vec<Path>> = vec![(0..n).map(Path::trivial).collect()];
        for l in 1..=max_len {
            let mut next = Vec::new();
            for p in &paths_by_len[l - 1] {
                for k in 0..dq.arrows().len() {
                    if let Some(np) = p.concat(&Path::arrow(&dq, k)) {
                        next.push(np);
                    }
                }
            }
            paths_by_len.push(next);
        }
        let mut out = BTreeMap::new();
        for l in 0..=max_len {
            let mut cells: BTreeMap<CellKey, Vec<Path>> = BTreeMap::new();
            for p in &paths_by_len[l] {
                cells.entry((p.source, p.target, l, p.star(&dq))).or_default().push(p.clone());
            }
            for (key, ps) in cells {
                let mut rows = Vec::new();
                for g in &gens {
                    let Some((gs, gt, gl, _)) = g.cell(&dq).unwrap() else { continue };
                    if gl > l {
                        continue;
                    }
                    for left_len in 0..=l - gl {
                        for left in paths_by_len[left_len].iter().filter(|p| p.source == key.0 && p.target == gs) {
                            for right in paths_by_len[l - gl - left_len].iter().filter(|p| p.source == gt && p.target == key.1) {
                                let e = PathVector::from_path(left.clone()).mul(g).mul(&PathVector::from_path(right.clone()));
                                if e.cell(&dq).unwrap().map_or(false, |c| c == key) {
                                    rows.push(ps.iter().map(|p| e.coefficient(p)).collect::<Vec<_>>());
                                }
                            }
                        }
                    }
                }
                let rank = if rows.is_empty() { 0 } else { Rational::rank_of(rows) };
                out.insert(key, (ps.len() - rank) as u64);
            }
        }
        out
    }

    #[test]
    fn engine_matches_brute_force() {
        let cases = [
            (catalog::linear_a(3), RelationFamily::Preprojective, 4),
            (catalog::linear_a(3), RelationFamily::QuiverHeisenberg(int_weight(&[1, 1, 1])), 5),
            (catalog::linear_a(3), RelationFamily::QuiverHeisenberg(int_weight(&[3, -1, -1])), 5),
            (catalog::kronecker(), RelationFamily::QuiverHeisenberg(int_weight(&[1, 2])), 4),
            (catalog::dynkin_d(4), RelationFamily::QuiverHeisenberg(int_weight(&[1, 1, 1, 1])), 4),
        ];
        for (q, fam, l) in cases {
            let table = graded_dim(&q, &fam, EngineConfig::new(l, l)).unwrap();
            let mut brute = brute_dims(&q, &fam, l);
            brute.retain(|_, d| *d > 0);
            assert_eq!(table.nonzero(), brute, "{}", fam.name());
        }
    }

    #[test]
    fn a3_totals() {
        let q = catalog::linear_a(3);
        let pi = graded_dim::<Rational>(&q, &RelationFamily::Preprojective, EngineConfig::new(4, 3)).unwrap();
        assert_eq!(pi.total(), 10);
        let fam = RelationFamily::QuiverHeisenberg(int_weight(&[1, 1, 1]));
        let t = graded_dim(&q, &fam, EngineConfig::dynkin_default(&q, true).unwrap()).unwrap();
        assert_eq!(t.total(), 20);
        assert_eq!(t.length_band(5), 0);
        assert_eq!(t.column(0, 3), vec![3, 2, 1]);
        assert_eq!(t.column(1, 3), vec![2, 4, 2]);
        assert_eq!(t.column(2, 3), vec![1, 2, 3]);
        assert_eq!(t.slice(1, 2, 3), vec![0, 1, 1]);
    }

    #[test]
    fn cap_is_enforced() {
        let q = catalog::linear_a(3);
        let r = graded_dim::<Rational>(
            &q,
            &RelationFamily::Preprojective,
            EngineConfig::new(6, 6).with_cap(2),
        );
        assert!(matches!(r, Err(Error::ResourceBound(_))));
    }

    #[test]
    fn generators_are_zero() {
        let q = catalog::linear_a(3);
        let dq = DoubleQuiver::new(&q);
        let v = int_weight(&[2, -1, 5]);
        let fam = RelationFamily::QuiverHeisenberg(v.clone());
        for a in 0..dq.arrows().len() {
            let eta = qh_relation(&dq, &v, a).unwrap();
            assert!(element_is_zero(&q, &fam, &eta).unwrap());
        }
        assert!(!element_is_zero(&q, &fam, &qparse(&dq, "a1.a2", None)).unwrap());
    }

    #[test]
    fn squared_casimir_depends_on_weight() {
        let q = catalog::linear_a(3);
        let dq = DoubleQuiver::new(&q);
        for (w, zero) in [([3, -1, -1], true), ([1, 1, 1], false)] {
            let v = int_weight(&w);
            let e = qparse(&dq, "wrho2(2)", Some(&v));
            let fam = RelationFamily::QuiverHeisenberg(v);
            assert_eq!(element_is_zero(&q, &fam, &e).unwrap(), zero, "{w:?}");
        }
    }

    #[test]
    fn knitting_agreement_small_dynkin() {
        for q in [catalog::linear_a(2), catalog::linear_a(3), catalog::linear_a(4), catalog::dynkin_d(4)] {
            let r = q.num_vertices();
            let v = int_weight(&vec![1; r]);
            let all: Vec<usize> = (0..r).collect();
            let rep = verify_against_knitting(&q, &v, &all, true, EngineConfig::DEFAULT_CAP).unwrap();
            assert!(rep.ok(), "{:?} {:?}", rep.first_mismatch(), (rep.engine_total, rep.formula_total));
        }
    }

    #[test]
    fn preprojective_slices() {
        for q in [catalog::linear_a(3), catalog::dynkin_d(4)] {
            let cmp = verify_preprojective::<Rational>(&q, EngineConfig::DEFAULT_CAP).unwrap();
            assert!(cmp.iter().all(Comparison::ok), "{:?}", cmp.iter().find(|c| !c.ok()));
        }
    }

    #[test]
    fn csv_and_json_exports() {
        let q = catalog::linear_a(2);
        let t = graded_dim::<Rational>(&q, &RelationFamily::Preprojective, EngineConfig::new(1, 1)).unwrap();
        let csv = t.to_csv(&q);
        assert!(csv.starts_with("i,j,l,s,dim\n1,1,0,0,1\n"));
        assert_eq!(t.to_json(&q)["total"], 4);
    }
}
