//! Boolean block decompositions of orthomodular lattices.
//!
//! A block is a subset containing ⊥ and ⊤, closed under meet, join and the
//! orthocomplement, whose induced structure is distributive (hence Boolean).
//! `enumerate_blocks` finds them by closing generator sets; a `BlockPoset`
//! is the inclusion-ordered family, which is also the form consumed by the
//! Heyting layer and by `amalgamate`.
//!
//! Three block families are supported. `All` is the literal definition.
//! `SingleGenerated` is the presentation that indexes one block per lattice
//! element ({0, x, x⊥, 1}); this is the classical partial-Boolean view in
//! which each block is one yes/no question, and it is the family used by the
//! built-in worked example. The two can genuinely differ: an eight-element
//! Boolean subalgebra is closed and distributive but is generated by a pair,
//! not by any single element.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::bitset::Bits;
use crate::error::BlockError;
use crate::lattice::{ElemId, FiniteOrtholattice};

static POSET_TAG: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockMode {
    All,
    Maximal,
    SingleGenerated,
}

/// One Boolean block: its carrier, its atoms, and mask tables giving the
/// block's own Boolean algebra on atom subsets.
#[derive(Clone, Debug)]
pub struct BooleanBlock {
    pub carrier: Bits,
    pub atoms: Vec<ElemId>,
    mask_of: HashMap<ElemId, u32>,
    elem_of: HashMap<u32, ElemId>,
}

impl BooleanBlock {
    /// Derive the Boolean structure of `carrier` using the order oracle
    /// `leq`. Fails when the carrier is not an atomistic Boolean algebra.
    fn derive(
        carrier: &Bits,
        bottom: ElemId,
        leq: &dyn Fn(ElemId, ElemId) -> bool,
    ) -> Result<BooleanBlock, String> {
        let elems: Vec<ElemId> = carrier.iter_ones().map(|e| e as ElemId).collect();
        let mut atoms: Vec<ElemId> = Vec::new();
        for &e in &elems {
            if e == bottom {
                continue;
            }
            let minimal = elems
                .iter()
                .all(|&f| f == bottom || f == e || !(leq(f, e) && !leq(e, f)));
            if minimal {
                atoms.push(e);
            }
        }
        atoms.sort_unstable();
        let k = atoms.len();
        if k > 30 {
            return Err(format!("block with {k} atoms is too large"));
        }
        if elems.len() != 1usize << k {
            return Err(format!(
                "carrier size {} is not 2^{k}; not an atomistic Boolean algebra",
                elems.len()
            ));
        }
        let mut mask_of = HashMap::new();
        let mut elem_of = HashMap::new();
        for &e in &elems {
            let mut m = 0u32;
            for (ai, &a) in atoms.iter().enumerate() {
                if leq(a, e) {
                    m |= 1 << ai;
                }
            }
            if elem_of.insert(m, e).is_some() {
                return Err("two carrier elements dominate the same atom set".into());
            }
            mask_of.insert(e, m);
        }
        Ok(BooleanBlock {
            carrier: carrier.clone(),
            atoms,
            mask_of,
            elem_of,
        })
    }

    pub fn k(&self) -> usize {
        self.atoms.len()
    }

    pub fn contains(&self, e: ElemId) -> bool {
        self.carrier.contains(e as usize)
    }

    pub fn mask(&self, e: ElemId) -> u32 {
        self.mask_of[&e]
    }

    pub fn elem(&self, mask: u32) -> ElemId {
        self.elem_of[&mask]
    }

    pub fn full_mask(&self) -> u32 {
        if self.k() == 32 {
            u32::MAX
        } else {
            (1u32 << self.k()) - 1
        }
    }

    pub fn meet_in(&self, x: ElemId, y: ElemId) -> ElemId {
        self.elem(self.mask(x) & self.mask(y))
    }

    pub fn join_in(&self, x: ElemId, y: ElemId) -> ElemId {
        self.elem(self.mask(x) | self.mask(y))
    }

    pub fn complement_in(&self, x: ElemId) -> ElemId {
        self.elem(self.full_mask() & !self.mask(x))
    }

    pub fn leq_in(&self, x: ElemId, y: ElemId) -> bool {
        self.mask(x) & !self.mask(y) == 0
    }
}

/// Inclusion-ordered family of Boolean blocks over a shared element table.
///
/// The element order stored here is the transitive closure of the block
/// orders: exactly the relation the amalgamated lattice carries. Every
/// Heyting-layer computation only ever compares elements inside a single
/// block, so a coarse presentation (e.g. single-generated blocks) is fine.
#[derive(Clone, Debug)]
pub struct BlockPoset {
    pub(crate) tag: u64,
    labels: Vec<String>,
    perp: Vec<ElemId>,
    bottom: ElemId,
    top: ElemId,
    above: Vec<Bits>,
    blocks: Vec<BooleanBlock>,
    block_above: Vec<Bits>,
    bottom_block: Option<usize>,
}

impl BlockPoset {
    /// Assemble from a host lattice and a family of carriers (each must be
    /// ∧,∨,⊥-closed and Boolean). Blocks are sorted by (size, carrier mask);
    /// the {⊥,⊤} block is added when missing.
    pub fn from_host(
        host: &FiniteOrtholattice,
        carriers: Vec<Bits>,
    ) -> Result<BlockPoset, BlockError> {
        Self::from_host_with(host, carriers, true)
    }

    /// As `from_host`, with control over adjoining the {⊥,⊤} bottom block.
    pub fn from_host_with(
        host: &FiniteOrtholattice,
        mut carriers: Vec<Bits>,
        add_bottom: bool,
    ) -> Result<BlockPoset, BlockError> {
        let n = host.n();
        let bottom_carrier = Bits::from_ids(n, [host.bottom() as usize, host.top() as usize]);
        if add_bottom && !carriers.iter().any(|c| *c == bottom_carrier) {
            carriers.push(bottom_carrier.clone());
        }
        carriers.sort_by_key(|c| (c.count(), c.clone()));
        carriers.dedup();
        let leq = |x: ElemId, y: ElemId| host.leq(x, y);
        let mut blocks = Vec::new();
        for c in &carriers {
            let b = BooleanBlock::derive(c, host.bottom(), &leq).map_err(|detail| {
                BlockError::AmalgamationConflict {
                    x: String::new(),
                    y: String::new(),
                    detail,
                }
            })?;
            blocks.push(b);
        }
        let perp = (0..n as ElemId)
            .map(|x| host.perp(x).expect("block poset host must be orthocomplemented"))
            .collect();
        Self::finish(
            host.labels().to_vec(),
            perp,
            host.bottom(),
            host.top(),
            blocks,
        )
    }

    /// Assemble from free-standing blocks: an element table plus, per block,
    /// a carrier and the block's own order generators. The global order is
    /// the transitive closure of the block orders.
    pub fn from_parts(
        labels: Vec<String>,
        perp: Vec<ElemId>,
        bottom: ElemId,
        top: ElemId,
        parts: &[(Vec<ElemId>, Vec<(ElemId, ElemId)>)],
    ) -> Result<BlockPoset, BlockError> {
        let n = labels.len();
        let mut carriers: Vec<(Bits, Vec<Bits>)> = Vec::new();
        for (carrier_ids, pairs) in parts {
            let carrier = Bits::from_ids(n, carrier_ids.iter().map(|&e| e as usize));
            // local reflexive-transitive closure of the block order
            let mut up: Vec<Bits> = (0..n).map(|i| Bits::singleton(n, i)).collect();
            for &(x, y) in pairs {
                up[x as usize].insert(y as usize);
            }
            for k in 0..n {
                for i in 0..n {
                    if up[i].contains(k) {
                        let row = up[k].clone();
                        up[i].union_with(&row);
                    }
                }
            }
            carriers.push((carrier, up));
        }
        let mut blocks = Vec::new();
        for (carrier, up) in &carriers {
            let leq = |x: ElemId, y: ElemId| up[x as usize].contains(y as usize);
            let b = BooleanBlock::derive(carrier, bottom, &leq).map_err(|detail| {
                BlockError::AmalgamationConflict {
                    x: String::new(),
                    y: String::new(),
                    detail,
                }
            })?;
            blocks.push(b);
        }
        let bottom_carrier = Bits::from_ids(n, [bottom as usize, top as usize]);
        if !blocks.iter().any(|b| b.carrier == bottom_carrier) {
            let leq = |x: ElemId, y: ElemId| x == y || (x == bottom && y == top);
            blocks.push(BooleanBlock::derive(&bottom_carrier, bottom, &leq).unwrap());
        }
        blocks.sort_by_key(|b| (b.carrier.count(), b.carrier.clone()));
        Self::finish(labels, perp, bottom, top, blocks)
    }

    fn finish(
        labels: Vec<String>,
        perp: Vec<ElemId>,
        bottom: ElemId,
        top: ElemId,
        blocks: Vec<BooleanBlock>,
    ) -> Result<BlockPoset, BlockError> {
        let n = labels.len();
        // Global order: transitive closure of the union of block orders.
        let mut above: Vec<Bits> = (0..n).map(|i| Bits::singleton(n, i)).collect();
        for b in &blocks {
            let ids: Vec<ElemId> = b.carrier.iter_ones().map(|e| e as ElemId).collect();
            for &x in &ids {
                for &y in &ids {
                    if b.leq_in(x, y) {
                        above[x as usize].insert(y as usize);
                    }
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                if above[i].contains(k) {
                    let row = above[k].clone();
                    above[i].union_with(&row);
                }
            }
        }
        for x in 0..n {
            for y in (x + 1)..n {
                if above[x].contains(y) && above[y].contains(x) {
                    return Err(BlockError::AmalgamationConflict {
                        x: labels[x].clone(),
                        y: labels[y].clone(),
                        detail: "block orders close into a cycle".into(),
                    });
                }
            }
        }
        let mut block_above: Vec<Bits> = (0..blocks.len())
            .map(|_| Bits::empty(blocks.len()))
            .collect();
        for i in 0..blocks.len() {
            for j in 0..blocks.len() {
                if blocks[i].carrier.is_subset(&blocks[j].carrier) {
                    block_above[i].insert(j);
                }
            }
        }
        let bottom_carrier = Bits::from_ids(n, [bottom as usize, top as usize]);
        let bottom_block = blocks.iter().position(|b| b.carrier == bottom_carrier);
        Ok(BlockPoset {
            tag: POSET_TAG.fetch_add(1, Ordering::Relaxed),
            labels,
            perp,
            bottom,
            top,
            above,
            blocks,
            block_above,
            bottom_block,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: ElemId) -> &str {
        &self.labels[e as usize]
    }

    pub fn id_of(&self, label: &str) -> Option<ElemId> {
        self.labels.iter().position(|l| l == label).map(|i| i as ElemId)
    }

    pub fn bottom_elem(&self) -> ElemId {
        self.bottom
    }

    pub fn top_elem(&self) -> ElemId {
        self.top
    }

    pub fn perp_elem(&self, e: ElemId) -> ElemId {
        self.perp[e as usize]
    }

    /// Element order: transitive closure of the block orders.
    pub fn elem_leq(&self, x: ElemId, y: ElemId) -> bool {
        self.above[x as usize].contains(y as usize)
    }

    pub fn blocks(&self) -> &[BooleanBlock] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize) -> &BooleanBlock {
        &self.blocks[i]
    }

    /// Index of the {⊥,⊤} block, when the family contains it.
    pub fn bottom_block(&self) -> Option<usize> {
        self.bottom_block
    }

    /// Blocks j with B_i ⊆ B_j (including i itself).
    pub fn blocks_above(&self, i: usize) -> &Bits {
        &self.block_above[i]
    }

    pub fn block_leq(&self, i: usize, j: usize) -> bool {
        self.block_above[i].contains(j)
    }

    pub fn carrier_labels(&self, i: usize) -> Vec<String> {
        self.blocks[i]
            .carrier
            .iter_ones()
            .map(|e| self.labels[e].clone())
            .collect()
    }
}

/// Enumerate the Boolean blocks of an orthomodular lattice.
pub fn enumerate_blocks(
    host: &FiniteOrtholattice,
    mode: BlockMode,
    budget: u64,
) -> Result<BlockPoset, BlockError> {
    let report = host.classify();
    if !report.is_orthomodular {
        return Err(BlockError::NotOrthomodular);
    }
    let n = host.n();
    let seed = Bits::from_ids(n, [host.bottom() as usize, host.top() as usize]);
    let carriers: Vec<Bits> = match mode {
        BlockMode::SingleGenerated => {
            let mut set: Vec<Bits> = Vec::new();
            for x in 0..n as ElemId {
                let mut s = seed.clone();
                s.insert(x as usize);
                let c = close_under_ops(host, s);
                if !set.contains(&c) {
                    set.push(c);
                }
            }
            set
        }
        BlockMode::All | BlockMode::Maximal => {
            let mut found: Vec<Bits> = Vec::new();
            let mut seen: HashSet<Bits> = HashSet::new();
            let mut queue: Vec<Bits> = Vec::new();
            let base = close_under_ops(host, seed.clone());
            seen.insert(base.clone());
            found.push(base.clone());
            queue.push(base);
            let mut work = 0u64;
            while let Some(k) = queue.pop() {
                for x in 0..n {
                    if k.contains(x) {
                        continue;
                    }
                    work += 1;
                    if work > budget {
                        return Err(BlockError::BudgetExceeded { budget });
                    }
                    let mut gen = k.clone();
                    gen.insert(x);
                    let c = close_under_ops(host, gen);
                    if seen.insert(c.clone()) && distributive_within(host, &c) {
                        found.push(c.clone());
                        queue.push(c);
                    }
                }
            }
            if mode == BlockMode::Maximal {
                let maximal: Vec<Bits> = found
                    .iter()
                    .filter(|c| {
                        !found
                            .iter()
                            .any(|d| *c != d && c.is_subset(d))
                    })
                    .cloned()
                    .collect();
                let mut out = maximal;
                let bottom_carrier =
                    Bits::from_ids(n, [host.bottom() as usize, host.top() as usize]);
                if !out.contains(&bottom_carrier) {
                    out.push(bottom_carrier);
                }
                out
            } else {
                found
            }
        }
    };
    BlockPoset::from_host(host, carriers)
}

/// Close a subset under meet, join and perp (the host must have a perp).
fn close_under_ops(host: &FiniteOrtholattice, mut s: Bits) -> Bits {
    loop {
        let ids: Vec<ElemId> = s.iter_ones().map(|e| e as ElemId).collect();
        let before = s.count();
        for &x in &ids {
            s.insert(host.perp(x).unwrap() as usize);
            for &y in &ids {
                s.insert(host.meet(x, y) as usize);
                s.insert(host.join(x, y) as usize);
            }
        }
        if s.count() == before {
            return s;
        }
    }
}

/// Distributivity of the induced operations, checked inside the subset only.
fn distributive_within(host: &FiniteOrtholattice, s: &Bits) -> bool {
    let ids: Vec<ElemId> = s.iter_ones().map(|e| e as ElemId).collect();
    for &x in &ids {
        for &y in &ids {
            for &z in &ids {
                if host.meet(x, host.join(y, z))
                    != host.join(host.meet(x, y), host.meet(x, z))
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Result of checking the partial-Boolean-algebra coherence conditions.
#[derive(Clone, Debug)]
pub struct PartialBooleanReport {
    pub bullets: Vec<BulletCheck>,
}

#[derive(Clone, Debug)]
pub struct BulletCheck {
    pub name: &'static str,
    pub pass: bool,
    pub witness: Option<String>,
}

impl PartialBooleanReport {
    pub fn all_pass(&self) -> bool {
        self.bullets.iter().all(|b| b.pass)
    }
}

/// Check the six coherence bullets for a block family: shared least element,
/// order agreement on overlaps, composability of the order, agreement of
/// complement and join on overlaps, and the common-block condition for
/// orthogonal pairs with a shared upper bound.
pub fn verify_partial_boolean(p: &BlockPoset) -> PartialBooleanReport {
    let mut bullets = Vec::new();
    let blocks = p.blocks();
    let lbl = |e: ElemId| p.label(e).to_string();

    // 1. every block contains the same least element 0 (and top).
    let mut w = None;
    for (i, b) in blocks.iter().enumerate() {
        if !b.contains(p.bottom_elem()) || !b.contains(p.top_elem()) {
            w = Some(format!("block {i} misses a bound"));
            break;
        }
    }
    bullets.push(BulletCheck { name: "shared least element", pass: w.is_none(), witness: w });

    // 2. order agreement on overlaps.
    let mut w = None;
    'b2: for i in 0..blocks.len() {
        for j in (i + 1)..blocks.len() {
            let common = blocks[i].carrier.intersection(&blocks[j].carrier);
            let ids: Vec<ElemId> = common.iter_ones().map(|e| e as ElemId).collect();
            for &x in &ids {
                for &y in &ids {
                    if blocks[i].leq_in(x, y) != blocks[j].leq_in(x, y) {
                        w = Some(format!(
                            "blocks {i},{j} disagree on `{}` ≤ `{}`",
                            lbl(x),
                            lbl(y)
                        ));
                        break 'b2;
                    }
                }
            }
        }
    }
    bullets.push(BulletCheck { name: "order agreement on overlaps", pass: w.is_none(), witness: w });

    // 3. composability: x ≤_i y and y ≤_j z imply x ≤_k z for some k.
    let mut w = None;
    'b3: for bi in blocks {
        for x in bi.carrier.iter_ones().map(|e| e as ElemId) {
            for y in bi.carrier.iter_ones().map(|e| e as ElemId) {
                if !bi.leq_in(x, y) {
                    continue;
                }
                for bj in blocks {
                    if !bj.contains(y) {
                        continue;
                    }
                    for z in bj.carrier.iter_ones().map(|e| e as ElemId) {
                        if !bj.leq_in(y, z) {
                            continue;
                        }
                        let ok = blocks
                            .iter()
                            .any(|bk| bk.contains(x) && bk.contains(z) && bk.leq_in(x, z));
                        if !ok {
                            w = Some(format!(
                                "`{}` ≤ `{}` ≤ `{}` has no composing block",
                                lbl(x),
                                lbl(y),
                                lbl(z)
                            ));
                            break 'b3;
                        }
                    }
                }
            }
        }
    }
    bullets.push(BulletCheck { name: "composability of order", pass: w.is_none(), witness: w });

    // 4. complement agreement on overlaps (also against the global perp).
    let mut w = None;
    'b4: for (i, b) in blocks.iter().enumerate() {
        for x in b.carrier.iter_ones().map(|e| e as ElemId) {
            if b.complement_in(x) != p.perp_elem(x) {
                w = Some(format!(
                    "block {i}: complement of `{}` differs from the shared perp",
                    lbl(x)
                ));
                break 'b4;
            }
        }
    }
    bullets.push(BulletCheck { name: "negation agreement on overlaps", pass: w.is_none(), witness: w });

    // 5. join agreement on overlaps.
    let mut w = None;
    'b5: for i in 0..blocks.len() {
        for j in (i + 1)..blocks.len() {
            let common = blocks[i].carrier.intersection(&blocks[j].carrier);
            let ids: Vec<ElemId> = common.iter_ones().map(|e| e as ElemId).collect();
            for &x in &ids {
                for &y in &ids {
                    if blocks[i].join_in(x, y) != blocks[j].join_in(x, y) {
                        w = Some(format!(
                            "blocks {i},{j} disagree on `{}` ∨ `{}`",
                            lbl(x),
                            lbl(y)
                        ));
                        break 'b5;
                    }
                }
            }
        }
    }
    bullets.push(BulletCheck { name: "join agreement on overlaps", pass: w.is_none(), witness: w });

    // 6. if y ⊥ x in some block and both have an upper bound z in (possibly
    //    different) blocks, then x, y, z lie in one common block.
    let mut w = None;
    'b6: for bi in blocks {
        for x in bi.carrier.iter_ones().map(|e| e as ElemId) {
            for y in bi.carrier.iter_ones().map(|e| e as ElemId) {
                if !bi.leq_in(y, bi.complement_in(x)) {
                    continue;
                }
                for z in 0..p.n_elements() as ElemId {
                    let x_below = blocks.iter().any(|b| b.contains(x) && b.contains(z) && b.leq_in(x, z));
                    let y_below = blocks.iter().any(|b| b.contains(y) && b.contains(z) && b.leq_in(y, z));
                    if x_below && y_below {
                        let ok = blocks
                            .iter()
                            .any(|b| b.contains(x) && b.contains(y) && b.contains(z));
                        if !ok {
                            w = Some(format!(
                                "orthogonal `{}`, `{}` under `{}` share no block",
                                lbl(x),
                                lbl(y),
                                lbl(z)
                            ));
                            break 'b6;
                        }
                    }
                }
            }
        }
    }
    bullets.push(BulletCheck { name: "orthogonal triples share a block", pass: w.is_none(), witness: w });

    PartialBooleanReport { bullets }
}

/// Rebuild the union lattice from a block poset: order is the transitive
/// closure of the block orders, operations are inherited blockwise, the
/// result must classify as orthomodular.
pub fn amalgamate(p: &BlockPoset) -> Result<FiniteOrtholattice, BlockError> {
    // Cross-block operation agreement (blocks sharing a pair must agree).
    let blocks = p.blocks();
    for i in 0..blocks.len() {
        for j in (i + 1)..blocks.len() {
            let common = blocks[i].carrier.intersection(&blocks[j].carrier);
            let ids: Vec<ElemId> = common.iter_ones().map(|e| e as ElemId).collect();
            for &x in &ids {
                for &y in &ids {
                    if blocks[i].meet_in(x, y) != blocks[j].meet_in(x, y)
                        || blocks[i].join_in(x, y) != blocks[j].join_in(x, y)
                    {
                        return Err(BlockError::AmalgamationConflict {
                            x: p.label(x).to_string(),
                            y: p.label(y).to_string(),
                            detail: format!("blocks {i} and {j} disagree on the pair"),
                        });
                    }
                }
            }
        }
    }
    let n = p.n_elements();
    let mut pairs = Vec::new();
    for x in 0..n as ElemId {
        for y in 0..n as ElemId {
            if p.elem_leq(x, y) {
                pairs.push((x, y));
            }
        }
    }
    let perp: Vec<ElemId> = (0..n as ElemId).map(|x| p.perp_elem(x)).collect();
    let lat = FiniteOrtholattice::from_leq(p.labels().to_vec(), &pairs, Some(perp))?;
    // Blockwise operations must survive in the glued order.
    for (bi, b) in blocks.iter().enumerate() {
        let ids: Vec<ElemId> = b.carrier.iter_ones().map(|e| e as ElemId).collect();
        for &x in &ids {
            for &y in &ids {
                if lat.meet(x, y) != b.meet_in(x, y) || lat.join(x, y) != b.join_in(x, y) {
                    return Err(BlockError::AmalgamationConflict {
                        x: lat.label(x).to_string(),
                        y: lat.label(y).to_string(),
                        detail: format!("block {bi} operation not preserved by the glued order"),
                    });
                }
            }
        }
    }
    if !lat.classify().is_orthomodular {
        return Err(BlockError::AmalgamationConflict {
            x: String::new(),
            y: String::new(),
            detail: "amalgamated structure is not orthomodular".into(),
        });
    }
    Ok(lat)
}

/// Search for an order- and perp-preserving bijection between two lattices.
pub fn find_isomorphism(
    a: &FiniteOrtholattice,
    b: &FiniteOrtholattice,
) -> Option<Vec<ElemId>> {
    if a.n() != b.n() || a.has_perp() != b.has_perp() {
        return None;
    }
    let n = a.n();
    // invariant signature: (|down|, |up|) must match
    let sig = |l: &FiniteOrtholattice, x: ElemId| (l.down_set(x).count(), l.up_set(x).count());
    let mut candidates: Vec<Vec<ElemId>> = Vec::new();
    for x in 0..n as ElemId {
        let sx = sig(a, x);
        let c: Vec<ElemId> = (0..n as ElemId).filter(|&y| sig(b, y) == sx).collect();
        if c.is_empty() {
            return None;
        }
        candidates.push(c);
    }
    let mut map = vec![ElemId::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        a: &FiniteOrtholattice,
        b: &FiniteOrtholattice,
        candidates: &[Vec<ElemId>],
        map: &mut Vec<ElemId>,
        used: &mut Vec<bool>,
        x: usize,
    ) -> bool {
        let n = a.n();
        if x == n {
            return true;
        }
        'cand: for &y in &candidates[x] {
            if used[y as usize] {
                continue;
            }
            for z in 0..x {
                let zm = map[z];
                if a.leq(z as ElemId, x as ElemId) != b.leq(zm, y)
                    || a.leq(x as ElemId, z as ElemId) != b.leq(y, zm)
                {
                    continue 'cand;
                }
                if let (Some(pa), Some(pb)) = (a.perp(z as ElemId), b.perp(zm)) {
                    if pa == x as ElemId && pb != y {
                        continue 'cand;
                    }
                }
            }
            map[x] = y;
            used[y as usize] = true;
            if rec(a, b, candidates, map, used, x + 1) {
                return true;
            }
            used[y as usize] = false;
            map[x] = ElemId::MAX;
        }
        false
    }
    if !rec(a, b, &candidates, &mut map, &mut used, 0) {
        return None;
    }
    // full structural verification of the found map
    for x in 0..n as ElemId {
        for y in 0..n as ElemId {
            if b.meet(map[x as usize], map[y as usize]) != map[a.meet(x, y) as usize] {
                return None;
            }
            if b.join(map[x as usize], map[y as usize]) != map[a.join(x, y) as usize] {
                return None;
            }
        }
        if let Some(px) = a.perp(x) {
            if b.perp(map[x as usize]) != Some(map[px as usize]) {
                return None;
            }
        }
    }
    Some(map)
}
