//! Built-in lattices used by the command line tool and across the test
//! suites: chains, powersets, horizontal sums, and the ten-element
//! orthomodular showcase that drives the `paper-example` subcommand.

use crate::lattice::{ElemId, FiniteOrtholattice};

/// The two-element chain {0, 1}.
pub fn two_chain() -> FiniteOrtholattice {
    FiniteOrtholattice::from_covers(
        vec!["0".into(), "1".into()],
        &[(0, 1)],
        Some(vec![1, 0]),
    )
    .unwrap()
}

/// The Boolean lattice of subsets of {1, …, n}, complement as perp.
pub fn powerset(n: usize) -> FiniteOrtholattice {
    assert!(n <= 16, "powerset sample limited to 16 atoms");
    let size = 1usize << n;
    let label = |mask: usize| -> String {
        if mask == 0 {
            "∅".to_string()
        } else {
            let items: Vec<String> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (i + 1).to_string())
                .collect();
            format!("{{{}}}", items.join(","))
        }
    };
    let labels: Vec<String> = (0..size).map(label).collect();
    let mut leq = Vec::new();
    for a in 0..size {
        for b in 0..size {
            if a & !b == 0 {
                leq.push((a as ElemId, b as ElemId));
            }
        }
    }
    let perp: Vec<ElemId> = (0..size).map(|a| (!a & (size - 1)) as ElemId).collect();
    FiniteOrtholattice::from_leq(labels, &leq, Some(perp)).unwrap()
}

/// Horizontal sum: glue bounded ortholattices at a shared 0 and 1.
/// Part labels must be pairwise distinct away from their bounds.
pub fn horizontal_sum(parts: &[FiniteOrtholattice]) -> FiniteOrtholattice {
    let mut labels: Vec<String> = vec!["0".into()];
    let mut map: Vec<Vec<ElemId>> = Vec::new(); // per part: part id -> new id
    for part in parts {
        let mut m = vec![0; part.n()];
        for x in 0..part.n() as ElemId {
            if x == part.bottom() {
                m[x as usize] = 0;
            } else if x == part.top() {
                m[x as usize] = ElemId::MAX; // patched below
            } else {
                m[x as usize] = labels.len() as ElemId;
                labels.push(part.label(x).to_string());
            }
        }
        map.push(m);
    }
    let top_id = labels.len() as ElemId;
    labels.push("1".into());
    for m in &mut map {
        for v in m.iter_mut() {
            if *v == ElemId::MAX {
                *v = top_id;
            }
        }
    }
    let mut leq = Vec::new();
    for (pi, part) in parts.iter().enumerate() {
        for x in 0..part.n() as ElemId {
            for y in 0..part.n() as ElemId {
                if part.leq(x, y) {
                    leq.push((map[pi][x as usize], map[pi][y as usize]));
                }
            }
        }
    }
    let mut perp: Vec<ElemId> = vec![0; labels.len()];
    perp[0] = top_id;
    perp[top_id as usize] = 0;
    for (pi, part) in parts.iter().enumerate() {
        for x in 0..part.n() as ElemId {
            let px = part.perp(x).expect("horizontal_sum needs orthocomplemented parts");
            perp[map[pi][x as usize] as usize] = map[pi][px as usize];
        }
    }
    FiniteOrtholattice::from_leq(labels, &leq, Some(perp)).unwrap()
}

/// MO_k: the horizontal sum of k four-element Boolean algebras
/// (k incompatible complementary pairs between shared bounds).
pub fn mo(k: usize) -> FiniteOrtholattice {
    let mut labels: Vec<String> = vec!["0".into()];
    for i in 1..=k {
        labels.push(format!("x{i}"));
        labels.push(format!("x{i}⊥"));
    }
    labels.push("1".into());
    let top = (labels.len() - 1) as ElemId;
    let mut covers = Vec::new();
    let mut perp = vec![top; labels.len()];
    perp[top as usize] = 0;
    for i in 0..k {
        let a = (1 + 2 * i) as ElemId;
        let b = a + 1;
        covers.push((0, a));
        covers.push((0, b));
        covers.push((a, top));
        covers.push((b, top));
        perp[a as usize] = b;
        perp[b as usize] = a;
    }
    FiniteOrtholattice::from_covers(labels, &covers, Some(perp)).unwrap()
}

/// The ten-element orthomodular worked example: the horizontal sum of the
/// eight-element Boolean algebra on atoms a, b, c and the four-element
/// Boolean algebra on d, with the order
/// a ≤ b⊥, a ≤ c⊥, b ≤ a⊥, b ≤ c⊥, c ≤ a⊥, c ≤ b⊥.
pub fn worked_example() -> FiniteOrtholattice {
    let labels: Vec<String> = ["0", "a", "b", "c", "d", "d⊥", "a⊥", "b⊥", "c⊥", "1"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let id = |s: &str| labels.iter().position(|l| l == s).unwrap() as ElemId;
    let mut covers = Vec::new();
    for atom in ["a", "b", "c", "d", "d⊥"] {
        covers.push((id("0"), id(atom)));
    }
    for (lo, hi) in [
        ("a", "b⊥"),
        ("a", "c⊥"),
        ("b", "a⊥"),
        ("b", "c⊥"),
        ("c", "a⊥"),
        ("c", "b⊥"),
    ] {
        covers.push((id(lo), id(hi)));
    }
    for co in ["a⊥", "b⊥", "c⊥", "d", "d⊥"] {
        covers.push((id(co), id("1")));
    }
    let mut perp = vec![0 as ElemId; labels.len()];
    for (x, y) in [("0", "1"), ("a", "a⊥"), ("b", "b⊥"), ("c", "c⊥"), ("d", "d⊥")] {
        perp[id(x) as usize] = id(y);
        perp[id(y) as usize] = id(x);
    }
    FiniteOrtholattice::from_covers(labels, &covers, Some(perp)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mo2_is_orthomodular_not_distributive() {
        let l = mo(2);
        assert_eq!(l.n(), 6);
        let r = l.classify();
        assert!(r.is_orthomodular && !r.is_distributive);
    }

    #[test]
    fn worked_example_equals_horizontal_sum_shape() {
        let x = worked_example();
        assert_eq!(x.n(), 10);
        assert_eq!(x.covers().len(), 16);
    }

    #[test]
    fn powerset_sizes() {
        assert_eq!(powerset(0).n(), 1);
        assert_eq!(powerset(3).n(), 8);
    }
}
