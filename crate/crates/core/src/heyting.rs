//! The Heyting algebra of monotone sections over a block poset.
//!
//! A section assigns to every block an element of that block, monotonely in
//! the block order. Meet and join are pointwise; implication is not: its
//! value at a block i is the largest element of B_i lying below
//! g(j)⊥ ∨ h(j) for every block j ⊇ B_i. Because carriers are nested along
//! the block order, every comparison happens inside a single block, so the
//! nonlocal formula never needs an ambient lattice.

use crate::blocks::BlockPoset;
use crate::error::HeytingError;
use crate::lattice::{ElemId, FiniteOrtholattice};

/// A monotone choice of one element per block, dense by block id.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MonotoneSection {
    tag: u64,
    values: Vec<ElemId>,
}

impl MonotoneSection {
    pub fn value(&self, block: usize) -> ElemId {
        self.values[block]
    }

    pub fn values(&self) -> &[ElemId] {
        &self.values
    }
}

/// A handle on the section algebra: the base poset plus, when it fits in
/// the budget, the complete enumeration.
#[derive(Clone, Debug)]
pub struct BohrAlgebra {
    poset: BlockPoset,
    enumeration: Option<Vec<MonotoneSection>>,
    count: Option<u64>,
    budget: u64,
}

/// Build the algebra; sections are enumerated iff their number is at most
/// `budget` (counted first, with pruning, before materializing).
pub fn bohrify(poset: &BlockPoset, budget: u64) -> BohrAlgebra {
    let poset = poset.clone();
    let count = count_sections(&poset, budget);
    let enumeration = count.map(|_| {
        let mut out = Vec::new();
        let mut values = vec![0 as ElemId; poset.n_blocks()];
        enumerate_rec(&poset, 0, &mut values, &mut |v| {
            out.push(MonotoneSection { tag: poset.tag, values: v.to_vec() })
        });
        out.sort();
        out
    });
    BohrAlgebra { poset, enumeration, count, budget }
}

fn candidates(poset: &BlockPoset, k: usize, values: &[ElemId]) -> Vec<ElemId> {
    let bk = poset.block(k);
    bk.carrier
        .iter_ones()
        .map(|v| v as ElemId)
        .filter(|&v| {
            (0..k).all(|j| {
                !poset.block_leq(j, k) || bk.mask(values[j]) & !bk.mask(v) == 0
            })
        })
        .collect()
}

fn count_sections(poset: &BlockPoset, budget: u64) -> Option<u64> {
    fn rec(poset: &BlockPoset, k: usize, values: &mut Vec<ElemId>, budget: u64, acc: &mut u64) -> bool {
        if k == poset.n_blocks() {
            *acc += 1;
            return *acc <= budget;
        }
        for v in candidates(poset, k, values) {
            values[k] = v;
            if !rec(poset, k + 1, values, budget, acc) {
                return false;
            }
        }
        true
    }
    let mut acc = 0u64;
    let mut values = vec![0 as ElemId; poset.n_blocks()];
    rec(poset, 0, &mut values, budget, &mut acc).then_some(acc)
}

fn enumerate_rec(
    poset: &BlockPoset,
    k: usize,
    values: &mut Vec<ElemId>,
    emit: &mut impl FnMut(&[ElemId]),
) {
    if k == poset.n_blocks() {
        emit(values);
        return;
    }
    for v in candidates(poset, k, values) {
        values[k] = v;
        enumerate_rec(poset, k + 1, values, emit);
    }
}

impl BohrAlgebra {
    pub fn poset(&self) -> &BlockPoset {
        &self.poset
    }

    /// Exact number of sections when it fit in the budget.
    pub fn section_count(&self) -> Option<u64> {
        self.count
    }

    pub fn enumeration(&self) -> Option<&[MonotoneSection]> {
        self.enumeration.as_deref()
    }

    pub fn require_enumeration(&self) -> Result<&[MonotoneSection], HeytingError> {
        self.enumeration.as_deref().ok_or(HeytingError::BudgetExceeded {
            budget: self.budget,
            needed: self.budget.saturating_add(1),
        })
    }

    pub fn bottom(&self) -> MonotoneSection {
        MonotoneSection {
            tag: self.poset.tag,
            values: vec![self.poset.bottom_elem(); self.poset.n_blocks()],
        }
    }

    pub fn top(&self) -> MonotoneSection {
        MonotoneSection {
            tag: self.poset.tag,
            values: vec![self.poset.top_elem(); self.poset.n_blocks()],
        }
    }

    /// Build a section from per-block values, validating membership and
    /// monotonicity.
    pub fn section(&self, values: Vec<ElemId>) -> Result<MonotoneSection, HeytingError> {
        let s = MonotoneSection { tag: self.poset.tag, values };
        self.validate(&s)?;
        Ok(s)
    }

    /// Check a section belongs to this base and is a valid monotone choice.
    pub fn validate(&self, s: &MonotoneSection) -> Result<(), HeytingError> {
        if s.tag != self.poset.tag || s.values.len() != self.poset.n_blocks() {
            return Err(HeytingError::MixedBase);
        }
        for (i, &v) in s.values.iter().enumerate() {
            if !self.poset.block(i).contains(v) {
                return Err(HeytingError::NotInBlock(
                    self.poset.label(v).to_string(),
                    format!("B{i}"),
                ));
            }
        }
        for i in 0..self.poset.n_blocks() {
            for j in self.poset.blocks_above(i).iter_ones() {
                let bj = self.poset.block(j);
                if bj.mask(s.values[i]) & !bj.mask(s.values[j]) != 0 {
                    return Err(HeytingError::NotInBlock(
                        "section is not monotone".into(),
                        format!("B{i} ⊆ B{j}"),
                    ));
                }
            }
        }
        Ok(())
    }

    fn pair(&self, f: &MonotoneSection, g: &MonotoneSection) -> Result<(), HeytingError> {
        if f.tag != self.poset.tag || g.tag != self.poset.tag {
            return Err(HeytingError::MixedBase);
        }
        Ok(())
    }

    pub fn sec_meet(
        &self,
        f: &MonotoneSection,
        g: &MonotoneSection,
    ) -> Result<MonotoneSection, HeytingError> {
        self.pair(f, g)?;
        let values = (0..self.poset.n_blocks())
            .map(|i| {
                let b = self.poset.block(i);
                b.elem(b.mask(f.values[i]) & b.mask(g.values[i]))
            })
            .collect();
        Ok(MonotoneSection { tag: f.tag, values })
    }

    pub fn sec_join(
        &self,
        f: &MonotoneSection,
        g: &MonotoneSection,
    ) -> Result<MonotoneSection, HeytingError> {
        self.pair(f, g)?;
        let values = (0..self.poset.n_blocks())
            .map(|i| {
                let b = self.poset.block(i);
                b.elem(b.mask(f.values[i]) | b.mask(g.values[i]))
            })
            .collect();
        Ok(MonotoneSection { tag: f.tag, values })
    }

    /// Pointwise order.
    pub fn sec_leq(&self, f: &MonotoneSection, g: &MonotoneSection) -> Result<bool, HeytingError> {
        self.pair(f, g)?;
        Ok((0..self.poset.n_blocks()).all(|i| {
            let b = self.poset.block(i);
            b.mask(f.values[i]) & !b.mask(g.values[i]) == 0
        }))
    }

    /// Greatest element of block `i` lying below every listed (block, value)
    /// pair, computed as the join of the qualifying atoms of B_i. Every
    /// listed block must contain B_i.
    fn blockwise_meet(&self, i: usize, family: &[(usize, ElemId)]) -> ElemId {
        let bi = self.poset.block(i);
        let mut mask = 0u32;
        for (ai, &atom) in bi.atoms.iter().enumerate() {
            let ok = family.iter().all(|&(j, v)| {
                let bj = self.poset.block(j);
                bj.mask(atom) & !bj.mask(v) == 0
            });
            if ok {
                mask |= 1 << ai;
            }
        }
        bi.elem(mask)
    }

    /// Heyting implication, by the nonlocal blockwise formula.
    pub fn implies(
        &self,
        g: &MonotoneSection,
        h: &MonotoneSection,
    ) -> Result<MonotoneSection, HeytingError> {
        self.pair(g, h)?;
        let values = (0..self.poset.n_blocks())
            .map(|i| {
                let family: Vec<(usize, ElemId)> = self
                    .poset
                    .blocks_above(i)
                    .iter_ones()
                    .map(|j| {
                        let bj = self.poset.block(j);
                        (j, bj.elem((bj.full_mask() & !bj.mask(g.values[j])) | bj.mask(h.values[j])))
                    })
                    .collect();
                self.blockwise_meet(i, &family)
            })
            .collect();
        let out = MonotoneSection { tag: g.tag, values };
        debug_assert!(self.validate(&out).is_ok());
        Ok(out)
    }

    /// Negation by the displayed formula (¬f)(i) = ⋀^{B_i}_{j ⊇ i} f(j)⊥.
    pub fn negate(&self, f: &MonotoneSection) -> Result<MonotoneSection, HeytingError> {
        self.pair(f, f)?;
        let values = (0..self.poset.n_blocks())
            .map(|i| {
                let family: Vec<(usize, ElemId)> = self
                    .poset
                    .blocks_above(i)
                    .iter_ones()
                    .map(|j| {
                        let bj = self.poset.block(j);
                        (j, bj.complement_in(f.values[j]))
                    })
                    .collect();
                self.blockwise_meet(i, &family)
            })
            .collect();
        Ok(MonotoneSection { tag: f.tag, values })
    }

    /// Implication by its defining join ⋁{u | u ∧ g ≤ h} over the full
    /// enumeration; the independent route used to cross-check `implies`.
    pub fn implies_brute(
        &self,
        g: &MonotoneSection,
        h: &MonotoneSection,
    ) -> Result<MonotoneSection, HeytingError> {
        self.pair(g, h)?;
        let all = self.require_enumeration()?;
        let mut acc = self.bottom();
        for u in all {
            if self.sec_leq(&self.sec_meet(u, g)?, h)? {
                acc = self.sec_join(&acc, u)?;
            }
        }
        Ok(acc)
    }

    /// The canonical injection: D(x)(i) = x when x ∈ B_i, else ⊥.
    pub fn embed_d(&self, x: ElemId) -> MonotoneSection {
        let values = (0..self.poset.n_blocks())
            .map(|i| {
                if self.poset.block(i).contains(x) {
                    x
                } else {
                    self.poset.bottom_elem()
                }
            })
            .collect();
        let s = MonotoneSection { tag: self.poset.tag, values };
        debug_assert!(self.validate(&s).is_ok());
        s
    }

    /// When the poset is a bottom block under an antichain, the sections are
    /// exactly (∏ upper blocks) + {⊤}; verify and return the decomposition.
    pub fn flat_product_witness(&self) -> Option<FlatProductWitness> {
        let p = &self.poset;
        let bb = p.bottom_block()?;
        if p.block(bb).carrier.count() != 2 {
            return None;
        }
        let uppers: Vec<usize> = (0..p.n_blocks()).filter(|&i| i != bb).collect();
        for &i in &uppers {
            for &j in &uppers {
                if i != j && p.block_leq(i, j) {
                    return None;
                }
            }
        }
        let all = self.enumeration()?;
        let sizes: Vec<u64> = uppers.iter().map(|&i| p.block(i).carrier.count() as u64).collect();
        let expected: u64 = sizes.iter().product::<u64>() + 1;
        if all.len() as u64 != expected {
            return None;
        }
        let top = self.top();
        let mut tuples = std::collections::HashSet::new();
        for s in all {
            if *s == top {
                continue;
            }
            if s.values[bb] != p.bottom_elem() {
                return None;
            }
            let tuple: Vec<ElemId> = uppers.iter().map(|&i| s.values[i]).collect();
            if !tuples.insert(tuple) {
                return None;
            }
        }
        // order agreement: the section order is the product order, with the
        // extra top strictly above everything
        for f in all {
            for g in all {
                let lhs = self.sec_leq(f, g).unwrap();
                let rhs = if *g == top {
                    true
                } else if *f == top {
                    *g == top
                } else {
                    uppers.iter().all(|&i| {
                        let b = p.block(i);
                        b.mask(f.values[i]) & !b.mask(g.values[i]) == 0
                    })
                };
                if lhs != rhs {
                    return None;
                }
            }
        }
        Some(FlatProductWitness {
            upper_blocks: uppers,
            block_sizes: sizes,
            section_count: expected,
        })
    }
}

/// Witness that the section algebra decomposes as a product of the upper
/// blocks plus a lone top.
#[derive(Clone, Debug)]
pub struct FlatProductWitness {
    pub upper_blocks: Vec<usize>,
    pub block_sizes: Vec<u64>,
    pub section_count: u64,
}

/// One row of a Sasaki comparison: the two candidate implications at a block.
#[derive(Clone, Debug)]
pub struct SasakiRow {
    pub block: usize,
    /// which of the three membership cases (x∉B, x∈B∧y∉B, x,y∈B) applies
    pub case: u8,
    pub hook_side: ElemId,
    pub heyting_side: ElemId,
    pub case_formula_hook: ElemId,
    pub case_formula_heyting: ElemId,
    pub agree: bool,
}

#[derive(Clone, Debug)]
pub struct SasakiReport {
    pub hook: ElemId,
    pub d_hook: MonotoneSection,
    pub heyting: MonotoneSection,
    pub rows: Vec<SasakiRow>,
    /// blocks where the two sections agree
    pub agreement: Vec<usize>,
    /// the displayed three-case formulas reproduce both computed sections
    pub case_formulas_match: bool,
}

/// Compare D(x ⇒_S y) with D(x) ⇒ D(y) blockwise over `alg`, whose element
/// table must be that of `host`.
pub fn sasaki_report(
    host: &FiniteOrtholattice,
    alg: &BohrAlgebra,
    x: ElemId,
    y: ElemId,
) -> Result<SasakiReport, HeytingError> {
    let hook = host
        .sasaki_hook(x, y)
        .expect("sasaki comparison needs an orthocomplemented host");
    let d_hook = alg.embed_d(hook);
    let heyting = alg.implies(&alg.embed_d(x), &alg.embed_d(y))?;
    let p = alg.poset();
    let mut rows = Vec::new();
    let mut all_match = true;
    for i in 0..p.n_blocks() {
        let bi = p.block(i);
        let case = if !bi.contains(x) {
            0
        } else if !bi.contains(y) {
            1
        } else {
            2
        };
        let case_formula_hook = match case {
            0 => p.bottom_elem(),
            1 => bi.complement_in(x),
            _ => bi.join_in(bi.complement_in(x), bi.meet_in(x, y)),
        };
        // ⋀^{B_i} over j ⊇ i of (1 | x⊥ | x⊥ ∨ y), per x,y-membership in B_j
        let family: Vec<(usize, ElemId)> = p
            .blocks_above(i)
            .iter_ones()
            .map(|j| {
                let bj = p.block(j);
                let v = if !bj.contains(x) {
                    p.top_elem()
                } else if !bj.contains(y) {
                    bj.complement_in(x)
                } else {
                    bj.join_in(bj.complement_in(x), y)
                };
                (j, v)
            })
            .collect();
        let case_formula_heyting = alg.blockwise_meet(i, &family);
        let hook_side = d_hook.value(i);
        let heyting_side = heyting.value(i);
        if case_formula_hook != hook_side || case_formula_heyting != heyting_side {
            all_match = false;
        }
        rows.push(SasakiRow {
            block: i,
            case,
            hook_side,
            heyting_side,
            case_formula_hook,
            case_formula_heyting,
            agree: hook_side == heyting_side,
        });
    }
    let agreement = rows.iter().filter(|r| r.agree).map(|r| r.block).collect();
    Ok(SasakiReport {
        hook,
        d_hook,
        heyting,
        rows,
        agreement,
        case_formulas_match: all_match,
    })
}
