//! Finite acyclic quivers, their doubles, and Dynkin classification.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::field::{Field, Rational};
use crate::matrix::Matrix;
use crate::{Error, Result};

/// Suffix marking reverse arrows of the double quiver.
pub const REVERSE_MARK: char = '\'';

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub tail: usize,
    pub head: usize,
}

/// A validated quiver. Vertices and arrows keep their declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Build and validate from vertex labels and `(name, tail, head)` label triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (v.as_str(), k))
            .collect();
        if index.len() != vertices.len() {
            return Err(Error::Syntax {
                line: 1,
                msg: "duplicate vertex label".into(),
            });
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (name, tail, head) in arrows {
            let name = name.as_ref();
            if name.is_empty() || name.contains(REVERSE_MARK) {
                return Err(Error::ReservedArrowName(name.to_string()));
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::DuplicateArrowName(name.to_string()));
            }
            let lookup = |v: &S| {
                index
                    .get(v.as_ref())
                    .copied()
                    .ok_or_else(|| Error::UnknownVertex(v.as_ref().to_string()))
            };
            out.push(Arrow {
                name: name.to_string(),
                tail: lookup(tail)?,
                head: lookup(head)?,
            });
        }
        let q = Quiver {
            vertices,
            arrows: out,
        };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::Syntax {
                line: 1,
                msg: "no vertices".into(),
            });
        }
        if self.topological_order().is_none() {
            return Err(Error::DirectedCycle);
        }
        // connectivity of the underlying graph
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for a in &self.arrows {
                for (x, y) in [(a.tail, a.head), (a.head, a.tail)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Parse the line-oriented quiver format:
    ///
    /// ```text
    /// vertices: 1 2 3
    /// arrow a: 1 -> 2
    /// arrow b: 2 -> 3
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices: Option<Vec<String>> = None;
        let mut arrows: Vec<(String, String, String)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: &str| Error::Syntax {
                line: line_no,
                msg: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix("vertices:") {
                if vertices.is_some() {
                    return Err(syntax("repeated vertices line"));
                }
                vertices = Some(rest.split_whitespace().map(String::from).collect());
            } else if let Some(rest) = line.strip_prefix("arrow ") {
                if vertices.is_none() {
                    return Err(syntax("arrow before vertices line"));
                }
                let (name, ends) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax("expected `arrow NAME: TAIL -> HEAD`"))?;
                let (tail, head) = ends
                    .split_once("->")
                    .ok_or_else(|| syntax("expected `TAIL -> HEAD`"))?;
                let (name, tail, head) = (name.trim(), tail.trim(), head.trim());
                if name.is_empty() || tail.is_empty() || head.is_empty() {
                    return Err(syntax("empty arrow field"));
                }
                if tail == head {
                    return Err(Error::DirectedCycle);
                }
                arrows.push((name.into(), tail.into(), head.into()));
            } else {
                return Err(syntax("unrecognised line"));
            }
        }
        let vertices = vertices.ok_or(Error::Syntax {
            line: 1,
            msg: "missing vertices line".into(),
        })?;
        Quiver::new(&vertices, &arrows)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: QuiverJson = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let vertices: Vec<String> = raw.vertices.into_iter().map(|l| l.0).collect();
        let arrows: Vec<(String, String, String)> = raw
            .arrows
            .into_iter()
            .map(|a| (a.name, a.tail.0, a.head.0))
            .collect();
        if arrows.iter().any(|(_, t, h)| t == h) {
            return Err(Error::DirectedCycle);
        }
        Quiver::new(&vertices, &arrows)
    }

    pub fn to_json(&self) -> String {
        let raw = QuiverJson {
            vertices: self.vertices.iter().map(|v| Label(v.clone())).collect(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    name: a.name.clone(),
                    tail: Label(self.vertices[a.tail].clone()),
                    head: Label(self.vertices[a.head].clone()),
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("quiver serialises")
    }

    /// Text form accepted by [`Quiver::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("vertices: {}\n", self.vertices.join(" "));
        for a in &self.arrows {
            out.push_str(&format!(
                "arrow {}: {} -> {}\n",
                a.name, self.vertices[a.tail], self.vertices[a.head]
            ));
        }
        out
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Vertices in an order where every arrow goes forward; `None` if cyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.head] += 1;
        }
        let mut ready: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_front() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.tail == v) {
                indeg[a.head] -= 1;
                if indeg[a.head] == 0 {
                    ready.push_back(a.head);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Symmetric edge-multiplicity matrix of the underlying graph.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut adj = vec![vec![0i64; n]; n];
        for a in &self.arrows {
            adj[a.tail][a.head] += 1;
            adj[a.head][a.tail] += 1;
        }
        adj
    }

    /// Same underlying graph with the listed arrows reversed.
    pub fn reorient(&self, flip: &[bool]) -> Result<Quiver> {
        let arrows: Vec<(String, String, String)> = self
            .arrows
            .iter()
            .zip(flip.iter().chain(std::iter::repeat(&false)))
            .map(|(a, &f)| {
                let (t, h) = if f { (a.head, a.tail) } else { (a.tail, a.head) };
                (a.name.clone(), self.vertices[t].clone(), self.vertices[h].clone())
            })
            .collect();
        Quiver::new(&self.vertices, &arrows)
    }
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: Vec<Label>,
    arrows: Vec<ArrowJson>,
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    name: String,
    tail: Label,
    head: Label,
}

/// Vertex label; JSON input may use numbers or strings.
#[derive(Serialize)]
#[serde(transparent)]
struct Label(String);

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => Ok(Label(s)),
            serde_json::Value::Number(n) => Ok(Label(n.to_string())),
            other => Err(serde::de::Error::custom(format!(
                "vertex label must be a string or number, got {other}"
            ))),
        }
    }
}

/// An arrow of the double quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleArrow {
    pub name: String,
    pub tail: usize,
    pub head: usize,
    /// Index of the underlying arrow of Q.
    pub base: usize,
    pub reverse: bool,
}

/// The double Q̄: the arrows of Q followed by their reverses `a'`.
#[derive(Clone, Debug)]
pub struct DoubleQuiver {
    base: Quiver,
    arrows: Vec<DoubleArrow>,
}

impl DoubleQuiver {
    pub fn new(q: &Quiver) -> Self {
        let m = q.arrows.len();
        let mut arrows = Vec::with_capacity(2 * m);
        for (k, a) in q.arrows.iter().enumerate() {
            arrows.push(DoubleArrow {
                name: a.name.clone(),
                tail: a.tail,
                head: a.head,
                base: k,
                reverse: false,
            });
        }
        for (k, a) in q.arrows.iter().enumerate() {
            arrows.push(DoubleArrow {
                name: format!("{}{}", a.name, REVERSE_MARK),
                tail: a.head,
                head: a.tail,
                base: k,
                reverse: true,
            });
        }
        DoubleQuiver {
            base: q.clone(),
            arrows,
        }
    }

    pub fn base(&self) -> &Quiver {
        &self.base
    }

    pub fn arrows(&self) -> &[DoubleArrow] {
        &self.arrows
    }

    pub fn arrow(&self, k: usize) -> &DoubleArrow {
        &self.arrows[k]
    }

    /// Index of α* given the index of α in Q (and vice versa).
    pub fn partner(&self, k: usize) -> usize {
        let m = self.base.arrows.len();
        if k < m {
            k + m
        } else {
            k - m
        }
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Drop the reverse arrows.
    pub fn forget(&self) -> Quiver {
        let arrows: Vec<(String, String, String)> = self
            .arrows
            .iter()
            .filter(|a| !a.reverse)
            .map(|a| {
                (
                    a.name.clone(),
                    self.base.vertices[a.tail].clone(),
                    self.base.vertices[a.head].clone(),
                )
            })
            .collect();
        Quiver::new(&self.base.vertices, &arrows).expect("base quiver was valid")
    }
}

pub fn double(q: &Quiver) -> DoubleQuiver {
    DoubleQuiver::new(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DynkinType {
    A,
    D,
    E,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DynkinType::A => "A",
            DynkinType::D => "D",
            DynkinType::E => "E",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuiverClass {
    Dynkin {
        kind: DynkinType,
        rank: usize,
        coxeter_number: u64,
    },
    /// `rank` is the index n of Ã_n, D̃_n, Ẽ_n (one less than the vertex count).
    ExtendedDynkin { kind: DynkinType, rank: usize },
    Wild,
}

impl QuiverClass {
    pub fn coxeter_number(&self) -> Option<u64> {
        match self {
            QuiverClass::Dynkin { coxeter_number, .. } => Some(*coxeter_number),
            _ => None,
        }
    }

    pub fn is_dynkin(&self) -> bool {
        matches!(self, QuiverClass::Dynkin { .. })
    }
}

impl fmt::Display for QuiverClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuiverClass::Dynkin {
                kind,
                rank,
                coxeter_number,
            } => write!(f, "Dynkin {kind}{rank}, h={coxeter_number}"),
            QuiverClass::ExtendedDynkin { kind, rank } => {
                let tilde = match kind {
                    DynkinType::A => "Ã",
                    DynkinType::D => "D̃",
                    DynkinType::E => "Ẽ",
                };
                write!(f, "Extended Dynkin {tilde}{rank}")
            }
            QuiverClass::Wild => write!(f, "Wild"),
        }
    }
}

/// Coxeter number of a Dynkin type.
pub fn coxeter_number(kind: DynkinType, rank: usize) -> u64 {
    let n = rank as u64;
    match (kind, rank) {
        (DynkinType::A, _) => n + 1,
        (DynkinType::D, _) => 2 * n - 2,
        (DynkinType::E, 6) => 12,
        (DynkinType::E, 7) => 18,
        (DynkinType::E, 8) => 30,
        (DynkinType::E, _) => panic!("no Dynkin diagram E{rank}"),
    }
}

/// The symmetrised Tits form matrix 2I − adjacency.
pub fn tits_matrix(q: &Quiver) -> Matrix<Rational> {
    let adj = q.adjacency();
    let n = q.num_vertices();
    Matrix::from_fn(n, n, |r, c| {
        let diag = if r == c { 2 } else { 0 };
        Rational::from_i64(diag - adj[r][c])
    })
}

/// Positive definiteness by LDLᵗ without pivoting: all pivots must be positive.
fn positive_definite(m: &Matrix<Rational>, keep: &[usize]) -> bool {
    let n = keep.len();
    let mut a = Matrix::from_fn(n, n, |r, c| m.get(keep[r], keep[c]).clone());
    for k in 0..n {
        let d = a.get(k, k).clone();
        if !d.is_positive() {
            return false;
        }
        for r in k + 1..n {
            let l = a.get(r, k).clone() / d.clone();
            if l.is_zero() {
                continue;
            }
            for c in k + 1..n {
                let v = a.get(r, c).clone() - l.clone() * a.get(k, c).clone();
                a.set(r, c, v);
            }
        }
    }
    true
}

/// Arm lengths (vertex counts) hanging off a branch vertex in a tree.
fn arms(adj: &[Vec<i64>], center: usize) -> Vec<usize> {
    let mut lengths = Vec::new();
    for start in (0..adj.len()).filter(|&v| adj[center][v] > 0) {
        let (mut prev, mut cur, mut len) = (center, start, 1);
        loop {
            let next: Vec<usize> = (0..adj.len())
                .filter(|&v| adj[cur][v] > 0 && v != prev)
                .collect();
            if next.len() != 1 {
                break;
            }
            prev = cur;
            cur = next[0];
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    lengths
}

pub fn classify(q: &Quiver) -> QuiverClass {
    let n = q.num_vertices();
    let b = tits_matrix(q);
    let all: Vec<usize> = (0..n).collect();
    let adj = q.adjacency();
    let degree: Vec<usize> = adj.iter().map(|r| r.iter().sum::<i64>() as usize).collect();
    let edges: usize = degree.iter().sum::<usize>() / 2;
    let branch: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();

    if positive_definite(&b, &all) {
        let kind = match branch.as_slice() {
            [] => DynkinType::A,
            [c] => match arms(&adj, *c).as_slice() {
                [1, 1, _] => DynkinType::D,
                _ => DynkinType::E,
            },
            _ => unreachable!("positive definite Tits form on a non-Dynkin tree"),
        };
        return QuiverClass::Dynkin {
            kind,
            rank: n,
            coxeter_number: coxeter_number(kind, n),
        };
    }

    let singular = b.rank() == n - 1;
    let semidefinite = singular
        && (0..n).any(|drop| {
            let keep: Vec<usize> = (0..n).filter(|&v| v != drop).collect();
            positive_definite(&b, &keep)
        });
    if !semidefinite {
        return QuiverClass::Wild;
    }
    let kind = if edges == n {
        // a cycle, including the doubled edge of the Kronecker quiver
        DynkinType::A
    } else {
        match branch.as_slice() {
            [c] if degree[*c] == 4 => DynkinType::D,
            [_, _] => DynkinType::D,
            _ => DynkinType::E,
        }
    };
    QuiverClass::ExtendedDynkin { kind, rank: n - 1 }
}

/// Sorted multiset of vertex degrees; used by shape checks in tests.
pub fn degree_profile(q: &Quiver) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for row in q.adjacency() {
        *out.entry(row.iter().sum::<i64>() as usize).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn parses_a3() {
        let q = Quiver::parse("vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n").unwrap();
        assert_eq!(q.num_vertices(), 3);
        assert_eq!(q.arrows().len(), 2);
        assert_eq!(q.arrows()[1].name, "b");
    }

    #[test]
    fn parses_single_vertex_and_comments() {
        let q = Quiver::parse("# A1\n\nvertices: 1   # lonely\n").unwrap();
        assert_eq!(q.num_vertices(), 1);
        assert!(q.arrows().is_empty());
    }

    #[test]
    fn parses_kronecker() {
        let q = Quiver::parse("vertices: 1 2\narrow a: 1 -> 2\narrow b: 1 -> 2").unwrap();
        assert_eq!(q.adjacency()[0][1], 2);
    }

    #[test]
    fn parse_errors() {
        let dup = Quiver::parse("vertices: 1 2\narrow a: 1 -> 2\narrow a: 1 -> 2");
        assert!(matches!(dup, Err(Error::DuplicateArrowName(n)) if n == "a"));
        let unknown = Quiver::parse("vertices: 1 2\narrow a: 1 -> 3");
        assert!(matches!(unknown, Err(Error::UnknownVertex(v)) if v == "3"));
        let cyc = Quiver::parse("vertices: 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1");
        assert!(matches!(cyc, Err(Error::DirectedCycle)));
        let lp = Quiver::parse("vertices: 1\narrow a: 1 -> 1");
        assert!(matches!(lp, Err(Error::DirectedCycle)));
        let disc = Quiver::parse("vertices: 1 2 3\narrow a: 1 -> 2");
        assert!(matches!(disc, Err(Error::Disconnected)));
        let rev = Quiver::parse("vertices: 1 2\narrow a': 1 -> 2");
        assert!(matches!(rev, Err(Error::ReservedArrowName(_))));
        assert!(matches!(Quiver::parse("arrow a: 1 -> 2"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn json_mirror_round_trips() {
        let q = catalog::kronecker();
        let back = Quiver::from_json(&q.to_json()).unwrap();
        assert_eq!(back, q);
        let numeric = Quiver::from_json(
            r#"{"vertices":[1,2],"arrows":[{"name":"a","tail":1,"head":2}]}"#,
        )
        .unwrap();
        assert_eq!(numeric.label(1), "2");
        assert_eq!(Quiver::parse(&q.to_text()).unwrap(), q);
    }

    #[test]
    fn doubles() {
        let d = double(&catalog::linear_a(3));
        let names: Vec<_> = d.arrows().iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["a1", "a2", "a1'", "a2'"]);
        assert_eq!(d.arrow(2).tail, 1);
        assert_eq!(d.arrow(2).head, 0);
        assert_eq!(double(&catalog::linear_a(1)).arrows().len(), 0);
        assert_eq!(double(&catalog::kronecker()).arrows().len(), 4);
        assert_eq!(d.forget(), catalog::linear_a(3));
    }

    #[test]
    fn classifies_census() {
        assert_eq!(
            classify(&catalog::linear_a(3)),
            QuiverClass::Dynkin { kind: DynkinType::A, rank: 3, coxeter_number: 4 }
        );
        assert_eq!(
            classify(&catalog::kronecker()),
            QuiverClass::ExtendedDynkin { kind: DynkinType::A, rank: 1 }
        );
        assert_eq!(
            classify(&catalog::dynkin_e(8)),
            QuiverClass::Dynkin { kind: DynkinType::E, rank: 8, coxeter_number: 30 }
        );
        assert_eq!(classify(&catalog::dynkin_d(5)).coxeter_number(), Some(8));
        assert_eq!(classify(&catalog::dynkin_e(6)).coxeter_number(), Some(12));
        assert_eq!(classify(&catalog::dynkin_e(7)).coxeter_number(), Some(18));
        assert_eq!(
            classify(&catalog::hat_a(3)),
            QuiverClass::ExtendedDynkin { kind: DynkinType::A, rank: 3 }
        );
        assert_eq!(classify(&catalog::generalized_kronecker(3)), QuiverClass::Wild);
    }

    #[test]
    fn classifies_extended_trees() {
        let star = Quiver::new(
            &["c", "1", "2", "3", "4"],
            &[("a", "1", "c"), ("b", "2", "c"), ("d", "3", "c"), ("e", "4", "c")],
        )
        .unwrap();
        assert_eq!(
            classify(&star),
            QuiverClass::ExtendedDynkin { kind: DynkinType::D, rank: 4 }
        );
        // arms (2,2,2): Ẽ6
        let e6t = Quiver::new(
            &["c", "1", "2", "3", "4", "5", "6"],
            &[
                ("a", "1", "c"), ("b", "2", "1"), ("d", "3", "c"),
                ("e", "4", "3"), ("f", "5", "c"), ("g", "6", "5"),
            ],
        )
        .unwrap();
        assert_eq!(
            classify(&e6t),
            QuiverClass::ExtendedDynkin { kind: DynkinType::E, rank: 6 }
        );
        // star with five leaves is wild
        let star5 = Quiver::new(
            &["c", "1", "2", "3", "4", "5"],
            &[("a", "1", "c"), ("b", "2", "c"), ("d", "3", "c"), ("e", "4", "c"), ("f", "5", "c")],
        )
        .unwrap();
        assert_eq!(classify(&star5), QuiverClass::Wild);
    }

    #[test]
    fn dynkin_rank_times_h_is_even() {
        for q in catalog::dynkin_census() {
            let c = classify(&q);
            let QuiverClass::Dynkin { rank, coxeter_number, .. } = c else {
                panic!("census quiver not Dynkin")
            };
            assert_eq!((rank as u64 * coxeter_number) % 2, 0);
        }
    }

    #[test]
    fn classification_is_orientation_independent() {
        let mut shapes = vec![
            catalog::linear_a(2),
            catalog::linear_a(3),
            catalog::linear_a(4),
            catalog::linear_a(5),
            catalog::dynkin_d(4),
            catalog::dynkin_d(5),
            catalog::kronecker(),
            catalog::hat_a(3),
        ];
        shapes.push(
            Quiver::new(
                &["c", "1", "2", "3", "4"],
                &[("a", "1", "c"), ("b", "2", "c"), ("d", "3", "c"), ("e", "4", "c")],
            )
            .unwrap(),
        );
        for q in shapes {
            let expected = classify(&q);
            let m = q.arrows().len();
            for mask in 0u32..(1 << m) {
                let flip: Vec<bool> = (0..m).map(|k| mask >> k & 1 == 1).collect();
                // cyclic orientations of Ã_n are rejected at construction
                if let Ok(r) = q.reorient(&flip) {
                    assert_eq!(classify(&r), expected, "orientation {mask:b}");
                }
            }
        }
    }
}
