//! Gelfand-spectrum opens of a context and the external spectrum of a
//! context poset.
//!
//! For a hermitian element a of a context C, the basic open D(a) is the set
//! of atoms where the positive part of a acts: atoms e with coefficient
//! λ_e > ε (the convention D(a) = D(a⁺)). The external spectrum consists of
//! atom selections, one per context, compatible with refinement: every fine
//! atom under a selected coarse atom is selected.

use crate::cmatrix::{CMat, Tol};
use crate::context::{Context, ContextPoset};
use crate::error::MatrixError;
use bohr_core::Bits;

/// A basic open of the spectrum of one context: a set of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralOpen {
    pub context: usize,
    pub atom_set: Bits,
}

/// Real coefficients of a hermitian context element.
fn real_coefficients(c: &Context, a: &CMat, tol: &Tol) -> Result<Vec<f64>, MatrixError> {
    let coefs = c.coefficients(a, tol)?;
    for z in &coefs {
        if z.im.abs() > 1e-7 {
            return Err(MatrixError::NotHermitian(z.im.abs()));
        }
    }
    Ok(coefs.iter().map(|z| z.re).collect())
}

/// D(a) = { e | λ_e > ε }: the open where the positive part of a is nonzero.
pub fn spectral_open(
    c: &Context,
    context_index: usize,
    a: &CMat,
    tol: &Tol,
) -> Result<SpectralOpen, MatrixError> {
    let coefs = real_coefficients(c, a, tol)?;
    let atom_set = Bits::from_ids(
        c.k(),
        coefs.iter().enumerate().filter(|(_, &l)| l > tol.proj).map(|(i, _)| i),
    );
    Ok(SpectralOpen { context: context_index, atom_set })
}

/// One named relation outcome.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: &'static str,
    pub pass: bool,
}

/// The generating relations of the spectrum lattice, evaluated on a pair of
/// hermitian elements of one context, plus the pseudocomplement law
/// ¬D(a) = D([a⁺ = 0]) and the rational-cut regularity law.
pub fn spectrum_relations(
    c: &Context,
    a: &CMat,
    b: &CMat,
    tol: &Tol,
) -> Result<Vec<RelationCheck>, MatrixError> {
    let la = real_coefficients(c, a, tol)?;
    let lb = real_coefficients(c, b, tol)?;
    let k = c.k();
    let open = |ls: &[f64]| -> Bits {
        Bits::from_ids(k, ls.iter().enumerate().filter(|(_, &l)| l > tol.proj).map(|(i, _)| i))
    };
    let da = open(&la);
    let dna = open(&la.iter().map(|l| -l).collect::<Vec<_>>());
    let db = open(&lb);
    let dnb = open(&lb.iter().map(|l| -l).collect::<Vec<_>>());
    let mut checks = Vec::new();

    let ones = open(&vec![1.0; k]);
    checks.push(RelationCheck { name: "D(1) = ⊤", pass: ones == Bits::full(k) });

    checks.push(RelationCheck {
        name: "D(a) ∧ D(−a) = ⊥",
        pass: !da.intersects(&dna),
    });

    let dnb2 = open(&lb.iter().map(|l| -l * l).collect::<Vec<_>>());
    checks.push(RelationCheck { name: "D(−b²) = ⊥", pass: dnb2.is_empty() });

    let dsum = open(&la.iter().zip(&lb).map(|(x, y)| x + y).collect::<Vec<_>>());
    checks.push(RelationCheck {
        name: "D(a+b) ≤ D(a) ∨ D(b)",
        pass: dsum.is_subset(&da.union(&db)),
    });

    let dprod = open(&la.iter().zip(&lb).map(|(x, y)| x * y).collect::<Vec<_>>());
    let rhs = da.intersection(&db).union(&dna.intersection(&dnb));
    checks.push(RelationCheck { name: "D(ab) = D(a)∧D(b) ∨ D(−a)∧D(−b)", pass: dprod == rhs });

    // continuity: D(a) = ⋁_{s>0} D(a − s), with the join over cuts taken
    // from the finite spectrum of a
    let mut cuts: Vec<f64> = la.iter().filter(|&&l| l > tol.proj).map(|l| l / 2.0).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut union = Bits::empty(k);
    for s in &cuts {
        union.union_with(&open(&la.iter().map(|l| l - s).collect::<Vec<_>>()));
    }
    checks.push(RelationCheck { name: "D(a) = ⋁_{s>0} D(a−s)", pass: union == da });

    // pseudocomplement: the complement atom set is D([a⁺ = 0])
    let zero_plus = open(
        &la.iter()
            .map(|&l| if l <= tol.proj { 1.0 } else { 0.0 })
            .collect::<Vec<_>>(),
    );
    checks.push(RelationCheck { name: "¬D(a) = D([a=0])", pass: zero_plus == da.complement() });

    // regularity: D(a) = ⋁_{r ∈ ℚ⁺} D([a − r > 0]), stabilizing below the
    // least positive coefficient
    let mut union = Bits::empty(k);
    for r in &cuts {
        let ind: Vec<f64> = la.iter().map(|&l| if l - r > tol.proj { 1.0 } else { 0.0 }).collect();
        union.union_with(&open(&ind));
    }
    checks.push(RelationCheck { name: "D(a) = ⋁_r D([a−r>0])", pass: union == da });

    Ok(checks)
}

/// The external spectrum of a context poset: refinement-compatible atom
/// selections, deterministically ordered.
#[derive(Clone, Debug)]
pub struct SpectrumFrame {
    pub atom_counts: Vec<usize>,
    /// leq[i] contains j when context i is coarser than context j
    pub order: Vec<Bits>,
    pub members: Vec<Vec<Bits>>,
}

impl SpectrumFrame {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member_leq(&self, x: &[Bits], y: &[Bits]) -> bool {
        x.iter().zip(y).all(|(a, b)| a.is_subset(b))
    }

    pub fn member_join(&self, x: &[Bits], y: &[Bits]) -> Vec<Bits> {
        x.iter().zip(y).map(|(a, b)| a.union(b)).collect()
    }

    pub fn member_meet(&self, x: &[Bits], y: &[Bits]) -> Vec<Bits> {
        x.iter().zip(y).map(|(a, b)| a.intersection(b)).collect()
    }

    pub fn bottom_member(&self) -> Vec<Bits> {
        self.atom_counts.iter().map(|&k| Bits::empty(k)).collect()
    }

    pub fn top_member(&self) -> Vec<Bits> {
        self.atom_counts.iter().map(|&k| Bits::full(k)).collect()
    }

    /// View members as subsets of the disjoint union of all context atoms,
    /// so the generic frame machinery (points, law checks) applies.
    pub fn to_downset_frame(&self) -> bohr_core::DownsetFrame {
        let total: usize = self.atom_counts.iter().sum();
        let mut base_labels = Vec::with_capacity(total);
        for (ci, &k) in self.atom_counts.iter().enumerate() {
            for a in 0..k {
                base_labels.push(format!("C{ci}.e{a}"));
            }
        }
        let members = self
            .members
            .iter()
            .map(|m| {
                let mut bits = Bits::empty(total);
                let mut offset = 0;
                for (ci, sel) in m.iter().enumerate() {
                    for a in sel.iter_ones() {
                        bits.insert(offset + a);
                    }
                    offset += self.atom_counts[ci];
                }
                bits
            })
            .collect();
        bohr_core::DownsetFrame::new(base_labels, members)
    }
}

pub fn external_spectrum(
    poset: &ContextPoset,
    budget: u64,
    tol: &Tol,
) -> Result<SpectrumFrame, MatrixError> {
    let n = poset.len();
    let atom_counts: Vec<usize> = (0..n).map(|i| poset.context(i).k()).collect();
    // process contexts coarse-to-fine; the constructor's sort guarantees
    // coarser contexts have smaller indices only within equal atom counts,
    // so build an explicit linear extension
    let mut order_ids: Vec<usize> = (0..n).collect();
    order_ids.sort_by_key(|&i| (0..n).filter(|&j| poset.leq(j, i)).count());
    // fibers[c][d] for c ≤ d: per atom of c, the atoms of d under it
    let mut fibers: Vec<Vec<Option<Vec<Bits>>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && poset.leq(i, j) {
                fibers[i][j] = Some(poset.refinement_fibers(i, j, tol));
            }
        }
    }
    let mut members: Vec<Vec<Bits>> = Vec::new();
    let mut cur: Vec<Bits> = atom_counts.iter().map(|&k| Bits::empty(k)).collect();
    fn rec(
        poset: &ContextPoset,
        order_ids: &[usize],
        fibers: &[Vec<Option<Vec<Bits>>>],
        atom_counts: &[usize],
        pos: usize,
        cur: &mut Vec<Bits>,
        members: &mut Vec<Vec<Bits>>,
        budget: u64,
    ) -> Result<(), MatrixError> {
        if pos == order_ids.len() {
            if members.len() as u64 >= budget {
                return Err(MatrixError::BudgetExceeded { budget });
            }
            members.push(cur.clone());
            return Ok(());
        }
        let d = order_ids[pos];
        let k = atom_counts[d];
        // atoms of d forced by coarser selections
        let mut required = Bits::empty(k);
        for &c in &order_ids[..pos] {
            if let Some(f) = &fibers[c][d] {
                for e in cur[c].iter_ones() {
                    required.union_with(&f[e]);
                }
            }
        }
        let free: Vec<usize> = (0..k).filter(|&a| !required.contains(a)).collect();
        for mask in 0u64..1 << free.len() {
            let mut sel = required.clone();
            for (b, &a) in free.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    sel.insert(a);
                }
            }
            cur[d] = sel;
            rec(poset, order_ids, fibers, atom_counts, pos + 1, cur, members, budget)?;
        }
        cur[d] = Bits::empty(k);
        Ok(())
    }
    rec(poset, &order_ids, &fibers, &atom_counts, 0, &mut cur, &mut members, budget)?;
    members.sort();
    let order = (0..n)
        .map(|i| Bits::from_ids(n, (0..n).filter(|&j| poset.leq(i, j))))
        .collect();
    Ok(SpectrumFrame { atom_counts, order, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::context::context_generate;
    use crate::proj::diag_projection;

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn basic_opens() {
        let t = tol();
        let c = context_generate(3, &[diag_projection(3, &[0], &t), diag_projection(3, &[1], &t)], &t).unwrap();
        let one = crate::cmatrix::ident(3);
        let o = spectral_open(&c, 0, &one, &t).unwrap();
        assert_eq!(o.atom_set, Bits::full(3));
        let a = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-2.0, 0.0),
        ]));
        let o = spectral_open(&c, 0, &a, &t).unwrap();
        assert_eq!(o.atom_set.count(), 1);
    }

    #[test]
    fn product_open_is_intersection_for_positives() {
        let t = tol();
        let c = context_generate(3, &[diag_projection(3, &[0], &t), diag_projection(3, &[1], &t)], &t).unwrap();
        let diag = |v: [f64; 3]| {
            CMat::from_diagonal(&nalgebra::DVector::from_vec(
                v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            ))
        };
        let a = diag([2.0, 0.0, 1.0]);
        let b = diag([1.0, 3.0, 0.0]);
        let da = spectral_open(&c, 0, &a, &t).unwrap().atom_set;
        let db = spectral_open(&c, 0, &b, &t).unwrap().atom_set;
        let dab = spectral_open(&c, 0, &(&a * &b), &t).unwrap().atom_set;
        assert_eq!(dab, da.intersection(&db));
        for chk in spectrum_relations(&c, &a, &b, &t).unwrap() {
            assert!(chk.pass, "{}", chk.name);
        }
    }

    #[test]
    fn single_context_spectrum_is_powerset() {
        let t = tol();
        for n in 1..=4usize {
            let gens: Vec<_> = (0..n.saturating_sub(1)).map(|i| diag_projection(n, &[i], &t)).collect();
            let c = context_generate(n, &gens, &t).unwrap();
            assert_eq!(c.k(), n);
            let poset = ContextPoset::new(n, vec![c], false, false, &t).unwrap();
            assert_eq!(poset.len(), 1);
            let frame = external_spectrum(&poset, 1 << 20, &t).unwrap();
            assert_eq!(frame.len(), 1 << n);
        }
    }

    #[test]
    fn two_level_chain_members() {
        let t = tol();
        let c = context_generate(2, &[diag_projection(2, &[0], &t)], &t).unwrap();
        let poset = ContextPoset::new(2, vec![c], false, true, &t).unwrap();
        assert_eq!(poset.len(), 2);
        let frame = external_spectrum(&poset, 1000, &t).unwrap();
        // selections: bottom ∅ with any of 4 subsets, bottom {1} forcing all
        assert_eq!(frame.len(), 5);
        for m in &frame.members {
            // refinement compatibility: selected coarse atom forces all fine atoms
            if m[poset.bottom()].count() == 1 {
                let fine = (0..poset.len()).find(|&i| i != poset.bottom()).unwrap();
                assert_eq!(m[fine].count(), 2);
            }
        }
    }
}
