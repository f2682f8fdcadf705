//! Bridge from a context poset to the abstract Heyting layer: every context
//! contributes the Boolean block of its atom sums, deduplicated across
//! contexts, so the section formulas are implemented once and shared by the
//! lattice and matrix sides.

use num_complex::Complex64;

use bohr_core::{bohrify, BlockPoset, BohrAlgebra, ElemId, MonotoneSection};

use crate::cmatrix::{approx_eq, ident, max_abs, CMat, Tol};
use crate::context::ContextPoset;
use crate::error::MatrixError;
use crate::proj::MatProjection;
use crate::spectrum::SpectrumFrame;
use bohr_core::Bits;

/// A context poset realized as a block poset over the table of all atom-sum
/// projections, with the section algebra on top.
pub struct ContextBohr {
    pub poset: ContextPoset,
    pub alg: BohrAlgebra,
    pub tol: Tol,
    /// element id → concrete projection
    pub projections: Vec<CMat>,
    pub block_of_context: Vec<usize>,
    pub context_of_block: Vec<usize>,
    /// blocks with no matching context (the synthetic {0,1} bottom)
    synthetic_block: Vec<bool>,
    /// per context: atom-subset mask → element id
    elem_by_mask: Vec<Vec<ElemId>>,
    /// per context: element id → atom-subset mask (sparse)
    mask_by_elem: Vec<std::collections::HashMap<ElemId, u32>>,
}

impl ContextBohr {
    pub fn new(poset: ContextPoset, budget: u64, tol: Tol) -> Result<ContextBohr, MatrixError> {
        tol.validate()?;
        let dim = poset.dim();
        let mut projections: Vec<CMat> = vec![crate::cmatrix::zeros(dim), ident(dim)];
        let mut elem_by_mask: Vec<Vec<ElemId>> = Vec::new();
        let mut mask_by_elem: Vec<std::collections::HashMap<ElemId, u32>> = Vec::new();
        for ci in 0..poset.len() {
            let c = poset.context(ci);
            let k = c.k();
            if k > 16 {
                return Err(MatrixError::BudgetExceeded { budget: 1 << 16 });
            }
            let mut by_mask = Vec::with_capacity(1 << k);
            let mut by_elem = std::collections::HashMap::new();
            for mask in 0u32..1 << k {
                let m = c.projection_of_mask(&Bits::from_ids(
                    k,
                    (0..k).filter(|&i| mask >> i & 1 == 1),
                ));
                let id = match projections.iter().position(|p| approx_eq(p, &m, tol.proj * 10.0)) {
                    Some(id) => id as ElemId,
                    None => {
                        projections.push(m);
                        (projections.len() - 1) as ElemId
                    }
                };
                by_mask.push(id);
                by_elem.insert(id, mask);
            }
            elem_by_mask.push(by_mask);
            mask_by_elem.push(by_elem);
        }
        let labels: Vec<String> = (0..projections.len())
            .map(|i| match i {
                0 => "0".to_string(),
                1 => "1".to_string(),
                i => format!("p{}", i - 2),
            })
            .collect();
        let perp: Vec<ElemId> = projections
            .iter()
            .map(|p| {
                let q = ident(dim) - p;
                projections
                    .iter()
                    .position(|r| approx_eq(r, &q, tol.proj * 10.0))
                    .expect("complement of an atom sum is an atom sum") as ElemId
            })
            .collect();
        let parts: Vec<(Vec<ElemId>, Vec<(ElemId, ElemId)>)> = (0..poset.len())
            .map(|ci| {
                let k = poset.context(ci).k();
                let carrier: Vec<ElemId> = elem_by_mask[ci].clone();
                let mut pairs = Vec::new();
                for s in 0u32..1 << k {
                    for t in 0u32..1 << k {
                        if s & !t == 0 {
                            pairs.push((elem_by_mask[ci][s as usize], elem_by_mask[ci][t as usize]));
                        }
                    }
                }
                (carrier, pairs)
            })
            .collect();
        let block_poset = BlockPoset::from_parts(labels, perp, 0, 1, &parts).map_err(|e| {
            MatrixError::PreconditionViolated(format!("context blocks are incoherent: {e}"))
        })?;
        // match blocks back to contexts by carrier sets
        let mut block_of_context = vec![usize::MAX; poset.len()];
        let mut context_of_block = vec![usize::MAX; block_poset.n_blocks()];
        for ci in 0..poset.len() {
            let carrier = Bits::from_ids(
                projections.len(),
                elem_by_mask[ci].iter().map(|&e| e as usize),
            );
            let bi = (0..block_poset.n_blocks())
                .find(|&b| block_poset.block(b).carrier == carrier)
                .expect("every context carrier is a block");
            block_of_context[ci] = bi;
            context_of_block[bi] = ci;
        }
        // a synthetic {0,1} block may have been added when no trivial
        // context is present; map it to the coarsest context
        let mut synthetic_block = vec![false; block_poset.n_blocks()];
        for (bi, slot) in context_of_block.iter_mut().enumerate() {
            if *slot == usize::MAX {
                synthetic_block[bi] = true;
                *slot = poset.bottom();
            }
        }
        let alg = bohrify(&block_poset, budget);
        Ok(ContextBohr {
            poset,
            alg,
            tol,
            projections,
            block_of_context,
            context_of_block,
            synthetic_block,
            elem_by_mask,
            mask_by_elem,
        })
    }

    pub fn dim(&self) -> usize {
        self.poset.dim()
    }

    /// The projection a section assigns to a context.
    pub fn section_projection(&self, s: &MonotoneSection, context: usize) -> &CMat {
        &self.projections[s.value(self.block_of_context[context]) as usize]
    }

    /// Crude daseinisation: the section C ↦ p when p ∈ P(C), else 0.
    pub fn daseinise(&self, p: &MatProjection) -> Result<MonotoneSection, MatrixError> {
        if p.dim() != self.dim() {
            return Err(MatrixError::DimMismatch(p.dim(), self.dim()));
        }
        let mut values = vec![0 as ElemId; self.alg.poset().n_blocks()];
        for (bi, value) in values.iter_mut().enumerate() {
            if self.synthetic_block[bi] {
                // the {0,1} block holds p only when p is 0 or 1
                *value = if approx_eq(p.matrix(), &ident(self.dim()), self.tol.proj * 10.0) {
                    1
                } else {
                    0
                };
                continue;
            }
            let ci = self.context_of_block[bi];
            *value = match self.poset.context(ci).projection_mask(p, &self.tol) {
                Some(mask) => {
                    let mut m = 0u32;
                    for i in mask.iter_ones() {
                        m |= 1 << i;
                    }
                    self.elem_by_mask[ci][m as usize]
                }
                None => 0,
            };
        }
        self.alg
            .section(values)
            .map_err(|e| MatrixError::PreconditionViolated(format!("daseinised section invalid: {e}")))
    }

    /// Image of a monotone projection family in the external spectrum: per
    /// context, the set of atoms under the assigned projection.
    pub fn basis_member(&self, s: &MonotoneSection) -> Vec<Bits> {
        (0..self.poset.len())
            .map(|ci| {
                let e = s.value(self.block_of_context[ci]);
                let mask = self.mask_by_elem[ci][&e];
                Bits::from_ids(
                    self.poset.context(ci).k(),
                    (0..self.poset.context(ci).k()).filter(|&i| mask >> i & 1 == 1),
                )
            })
            .collect()
    }

    /// Density of the basis: every spectrum member is the pointwise join of
    /// the basis images below it.
    pub fn density_check(&self, frame: &SpectrumFrame) -> Result<bool, MatrixError> {
        let sections = self.alg.require_enumeration().map_err(|_| MatrixError::BudgetExceeded {
            budget: 0,
        })?;
        for member in &frame.members {
            let mut join = frame.bottom_member();
            for s in sections {
                let img = self.basis_member(s);
                if frame.member_leq(&img, member) {
                    join = frame.member_join(&join, &img);
                }
            }
            if &join != member {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Helper for tests and the CLI: is the external spectrum of a one-context
/// poset order-isomorphic to the powerset of its atoms?
pub fn powerset_isomorphic(frame: &SpectrumFrame, n_atoms: usize) -> bool {
    if frame.atom_counts.len() != 1 || frame.atom_counts[0] != n_atoms {
        return false;
    }
    if frame.len() != 1 << n_atoms {
        return false;
    }
    // members are exactly the subsets, ordered by inclusion
    let mut seen = std::collections::HashSet::new();
    for m in &frame.members {
        if !seen.insert(m[0].clone()) {
            return false;
        }
    }
    true
}

pub fn max_entry_distance(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn scalar(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
