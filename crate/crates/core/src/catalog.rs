//! Built-in quivers with fixed labelings.

use crate::quiver::Quiver;
use crate::{Error, Result};

fn build(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Quiver {
    Quiver::new(&vertices, &arrows).expect("catalog quiver is valid")
}

fn labels(range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|k| k.to_string()).collect()
}

/// Linearly oriented A_n: 1 → 2 → … → n, arrows `a1 … a(n-1)`.
pub fn linear_a(n: usize) -> Quiver {
    assert!(n >= 1);
    let arrows = (1..n)
        .map(|k| (format!("a{k}"), k.to_string(), (k + 1).to_string()))
        .collect();
    build(labels(1..=n), arrows)
}

/// D_n: path 1 → … → n−1 with an extra arrow n−2 → n.
pub fn dynkin_d(n: usize) -> Quiver {
    assert!(n >= 4);
    let mut arrows: Vec<_> = (1..n - 1)
        .map(|k| (format!("a{k}"), k.to_string(), (k + 1).to_string()))
        .collect();
    arrows.push((format!("a{}", n - 1), (n - 2).to_string(), n.to_string()));
    build(labels(1..=n), arrows)
}

/// E_n (n = 6, 7, 8): path 1 → … → n−1 with an extra arrow 3 → n.
pub fn dynkin_e(n: usize) -> Quiver {
    assert!((6..=8).contains(&n));
    let mut arrows: Vec<_> = (1..n - 1)
        .map(|k| (format!("a{k}"), k.to_string(), (k + 1).to_string()))
        .collect();
    arrows.push((format!("a{}", n - 1), "3".into(), n.to_string()));
    build(labels(1..=n), arrows)
}

/// 1 ⇉ 2 with arrows `a`, `b`.
pub fn kronecker() -> Quiver {
    generalized_kronecker(2)
}

/// 1 → 2 with `k` parallel arrows `a1 … ak` (`a`, `b` when k = 2).
pub fn generalized_kronecker(k: usize) -> Quiver {
    let arrows = (1..=k)
        .map(|m| {
            let name = if k == 2 {
                ["a", "b"][m - 1].to_string()
            } else {
                format!("a{m}")
            };
            (name, "1".to_string(), "2".to_string())
        })
        .collect();
    build(labels(1..=2), arrows)
}

/// Â_N (N ≥ 2) on vertices 0 … N: arrows k → k+1 (named `ak`) and `c`: 0 → N.
pub fn hat_a(n: usize) -> Quiver {
    assert!(n >= 2);
    let mut arrows: Vec<_> = (0..n)
        .map(|k| (format!("a{k}"), k.to_string(), (k + 1).to_string()))
        .collect();
    arrows.push(("c".into(), "0".into(), n.to_string()));
    build(labels(0..=n), arrows)
}

/// Look up a built-in by name: `A3`, `D5`, `E8`, `kronecker`, `K3`, `hatA2`.
pub fn builtin(name: &str) -> Result<Quiver> {
    let bad = || Error::Parse(format!("unknown built-in quiver `{name}`"));
    let lower = name.to_ascii_lowercase();
    if lower == "kronecker" {
        return Ok(kronecker());
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    if let Some(rest) = lower.strip_prefix("hata") {
        let n = num(rest)?;
        return if n >= 2 { Ok(hat_a(n)) } else { Err(bad()) };
    }
    let (head, rest) = lower.split_at(1.min(lower.len()));
    let n = num(rest)?;
    match head {
        "a" if n >= 1 => Ok(linear_a(n)),
        "d" if n >= 4 => Ok(dynkin_d(n)),
        "e" if (6..=8).contains(&n) => Ok(dynkin_e(n)),
        "k" if n >= 1 => Ok(generalized_kronecker(n)),
        _ => Err(bad()),
    }
}

/// A₁–A₈, D₄–D₈, E₆–E₈ with one orientation each.
pub fn dynkin_census() -> Vec<Quiver> {
    let mut out: Vec<Quiver> = (1..=8).map(linear_a).collect();
    out.extend((4..=8).map(dynkin_d));
    out.extend((6..=8).map(dynkin_e));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("A3").unwrap(), linear_a(3));
        assert_eq!(builtin("e8").unwrap(), dynkin_e(8));
        assert_eq!(builtin("Kronecker").unwrap(), kronecker());
        assert_eq!(builtin("hatA3").unwrap(), hat_a(3));
        assert!(builtin("E9").is_err());
        assert!(builtin("D3").is_err());
        assert!(builtin("").is_err());
    }

    #[test]
    fn census_has_sixteen_quivers() {
        assert_eq!(dynkin_census().len(), 16);
    }
}
