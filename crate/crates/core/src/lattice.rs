//! Finite bounded lattices with optional orthocomplement.
//!
//! Elements carry dense integer ids; the order is a bit matrix and the meet
//! and join tables are materialized at construction time, so every law check
//! in this crate is an exhaustive scan over ids. Inputs are rejected (rather
//! than repaired) when the order is not a lattice or the orthocomplement
//! violates involution, antitonicity or the complement laws.

use crate::bitset::Bits;
use crate::error::{BoundKind, LatticeError};

pub type ElemId = u16;

#[derive(Clone)]
pub struct FiniteOrtholattice {
    labels: Vec<String>,
    /// `above[x]` = { y | x ≤ y }, including x itself.
    above: Vec<Bits>,
    /// `below[x]` = { y | y ≤ x }, including x itself.
    below: Vec<Bits>,
    meet: Vec<ElemId>,
    join: Vec<ElemId>,
    perp: Option<Vec<ElemId>>,
    bottom: ElemId,
    top: ElemId,
}

/// Outcome of `classify`: structural flags plus one concrete counterexample
/// per failed law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub is_lattice: bool,
    pub is_orthocomplemented: bool,
    pub is_orthomodular: bool,
    pub is_distributive: bool,
    pub is_boolean: bool,
    /// x ≤ y with x ∨ (x⊥ ∧ y) ≠ y.
    pub orthomodular_witness: Option<(ElemId, ElemId)>,
    /// (x, y, z) with x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z).
    pub distributive_witness: Option<(ElemId, ElemId, ElemId)>,
    pub notes: Vec<String>,
}

impl FiniteOrtholattice {
    /// Build from an explicit `leq` relation (its reflexive-transitive
    /// closure is taken). Pairs are `(x, y)` meaning x ≤ y.
    pub fn from_leq(
        labels: Vec<String>,
        leq: &[(ElemId, ElemId)],
        perp: Option<Vec<ElemId>>,
    ) -> Result<Self, LatticeError> {
        Self::build(labels, leq, perp)
    }

    /// Build from a cover (Hasse) relation; identical closure semantics.
    pub fn from_covers(
        labels: Vec<String>,
        covers: &[(ElemId, ElemId)],
        perp: Option<Vec<ElemId>>,
    ) -> Result<Self, LatticeError> {
        Self::build(labels, covers, perp)
    }

    fn build(
        labels: Vec<String>,
        pairs: &[(ElemId, ElemId)],
        perp: Option<Vec<ElemId>>,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Document("empty element list".into()));
        }
        {
            let mut seen = std::collections::HashSet::new();
            for l in &labels {
                if !seen.insert(l.clone()) {
                    return Err(LatticeError::Document(format!("duplicate label `{l}`")));
                }
            }
        }
        let mut above: Vec<Bits> = (0..n).map(|i| Bits::singleton(n, i)).collect();
        for &(x, y) in pairs {
            if (x as usize) >= n || (y as usize) >= n {
                return Err(LatticeError::Document("element id out of range".into()));
            }
            above[x as usize].insert(y as usize);
        }
        // Reflexive-transitive closure, Warshall over bitset rows.
        for k in 0..n {
            for i in 0..n {
                if above[i].contains(k) {
                    let row_k = above[k].clone();
                    above[i].union_with(&row_k);
                }
            }
        }
        // Antisymmetry.
        for x in 0..n {
            for y in (x + 1)..n {
                if above[x].contains(y) && above[y].contains(x) {
                    return Err(LatticeError::NotAPoset(labels[x].clone(), labels[y].clone()));
                }
            }
        }
        let mut below: Vec<Bits> = (0..n).map(|_| Bits::empty(n)).collect();
        for x in 0..n {
            for y in above[x].iter_ones() {
                below[y].insert(x);
            }
        }
        // Meet and join tables. The glb of {x, y} is the m in the lower-bound
        // set that dominates every other lower bound; uniqueness is automatic.
        let mut meet = vec![0 as ElemId; n * n];
        let mut join = vec![0 as ElemId; n * n];
        for x in 0..n {
            for y in x..n {
                let lows = below[x].intersection(&below[y]);
                let m = lows
                    .iter_ones()
                    .find(|&m| lows.is_subset(&below[m]))
                    .ok_or_else(|| LatticeError::NotALattice {
                        x: labels[x].clone(),
                        y: labels[y].clone(),
                        kind: BoundKind::Glb,
                    })?;
                let highs = above[x].intersection(&above[y]);
                let j = highs
                    .iter_ones()
                    .find(|&j| highs.is_subset(&above[j]))
                    .ok_or_else(|| LatticeError::NotALattice {
                        x: labels[x].clone(),
                        y: labels[y].clone(),
                        kind: BoundKind::Lub,
                    })?;
                meet[x * n + y] = m as ElemId;
                meet[y * n + x] = m as ElemId;
                join[x * n + y] = j as ElemId;
                join[y * n + x] = j as ElemId;
            }
        }
        let bottom = (0..n)
            .find(|&x| above[x].count() == n)
            .expect("finite lattice has a bottom") as ElemId;
        let top = (0..n)
            .find(|&x| below[x].count() == n)
            .expect("finite lattice has a top") as ElemId;

        let lat = FiniteOrtholattice {
            labels,
            above,
            below,
            meet,
            join,
            perp: None,
            bottom,
            top,
        };
        let lat = match perp {
            None => lat,
            Some(p) => lat.with_perp(p)?,
        };
        Ok(lat)
    }

    fn with_perp(mut self, perp: Vec<ElemId>) -> Result<Self, LatticeError> {
        let n = self.n();
        if perp.len() != n {
            return Err(LatticeError::BadPerp("perp map must cover every element".into()));
        }
        for x in 0..n {
            let px = perp[x] as usize;
            if px >= n {
                return Err(LatticeError::BadPerp("perp image out of range".into()));
            }
            if perp[px] as usize != x {
                return Err(LatticeError::BadPerp(format!(
                    "not involutive at `{}`",
                    self.labels[x]
                )));
            }
            if self.meet[x * n + px] != self.bottom {
                return Err(LatticeError::BadPerp(format!(
                    "`{}` ∧ `{}` is not bottom",
                    self.labels[x], self.labels[px]
                )));
            }
            if self.join[x * n + px] != self.top {
                return Err(LatticeError::BadPerp(format!(
                    "`{}` ∨ `{}` is not top",
                    self.labels[x], self.labels[px]
                )));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if self.above[x].contains(y)
                    && !self.above[perp[y] as usize].contains(perp[x] as usize)
                {
                    return Err(LatticeError::BadPerp(format!(
                        "not antitone on `{}` ≤ `{}`",
                        self.labels[x], self.labels[y]
                    )));
                }
            }
        }
        self.perp = Some(perp);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: ElemId) -> &str {
        &self.labels[x as usize]
    }

    pub fn id_of(&self, label: &str) -> Option<ElemId> {
        self.labels.iter().position(|l| l == label).map(|i| i as ElemId)
    }

    pub fn leq(&self, x: ElemId, y: ElemId) -> bool {
        self.above[x as usize].contains(y as usize)
    }

    pub fn meet(&self, x: ElemId, y: ElemId) -> ElemId {
        self.meet[x as usize * self.n() + y as usize]
    }

    pub fn join(&self, x: ElemId, y: ElemId) -> ElemId {
        self.join[x as usize * self.n() + y as usize]
    }

    pub fn perp(&self, x: ElemId) -> Option<ElemId> {
        self.perp.as_ref().map(|p| p[x as usize])
    }

    pub fn has_perp(&self) -> bool {
        self.perp.is_some()
    }

    pub fn bottom(&self) -> ElemId {
        self.bottom
    }

    pub fn top(&self) -> ElemId {
        self.top
    }

    /// { y | y ≤ x } as a bit set.
    pub fn down_set(&self, x: ElemId) -> &Bits {
        &self.below[x as usize]
    }

    pub fn up_set(&self, x: ElemId) -> &Bits {
        &self.above[x as usize]
    }

    /// Sasaki hook x ⇒_S y = x⊥ ∨ (x ∧ y). Requires an orthocomplement.
    pub fn sasaki_hook(&self, x: ElemId, y: ElemId) -> Option<ElemId> {
        let px = self.perp(x)?;
        Some(self.join(px, self.meet(x, y)))
    }

    /// The cover relation, pairs (lower, upper), sorted.
    pub fn covers(&self) -> Vec<(ElemId, ElemId)> {
        let n = self.n();
        let mut out = Vec::new();
        for x in 0..n {
            for y in self.above[x].iter_ones() {
                if y == x {
                    continue;
                }
                // y covers x when nothing sits strictly between.
                let strict_between = self.above[x]
                    .intersection(&self.below[y])
                    .iter_ones()
                    .any(|z| z != x && z != y);
                if !strict_between {
                    out.push((x as ElemId, y as ElemId));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_downset(&self, s: &Bits) -> bool {
        s.iter_ones().all(|x| self.below[x].is_subset(s))
    }

    /// Exhaustive structural classification with witnesses.
    pub fn classify(&self) -> StructureReport {
        let n = self.n();
        let mut distributive_witness = None;
        'outer: for x in 0..n as ElemId {
            for y in 0..n as ElemId {
                for z in 0..n as ElemId {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(self.meet(x, y), self.meet(x, z));
                    if lhs != rhs {
                        distributive_witness = Some((x, y, z));
                        break 'outer;
                    }
                }
            }
        }
        let mut orthomodular_witness = None;
        let mut notes = Vec::new();
        let is_orthocomplemented = self.perp.is_some();
        if let Some(p) = &self.perp {
            'om: for x in 0..n as ElemId {
                for y in 0..n as ElemId {
                    if self.leq(x, y) {
                        let r = self.join(x, self.meet(p[x as usize], y));
                        if r != y {
                            orthomodular_witness = Some((x, y));
                            break 'om;
                        }
                    }
                }
            }
        } else {
            notes.push("no orthocomplement supplied".into());
        }
        let is_distributive = distributive_witness.is_none();
        let is_orthomodular = is_orthocomplemented && orthomodular_witness.is_none();
        StructureReport {
            is_lattice: true,
            is_orthocomplemented,
            is_orthomodular,
            is_distributive,
            is_boolean: is_distributive && is_orthocomplemented,
            orthomodular_witness,
            distributive_witness,
            notes,
        }
    }

    /// Enumerate every downset as a bit mask, deterministically ordered.
    /// Fails loudly once `budget` masks have been produced.
    pub fn downsets(&self, budget: u64) -> Result<Vec<Bits>, LatticeError> {
        let n = self.n();
        // Linear extension: by down-set size, then id.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (self.below[x].count(), x));
        let mut out: Vec<Bits> = Vec::new();
        let mut cur = Bits::empty(n);
        self.downset_rec(&order, 0, &mut cur, &mut out, budget)?;
        out.sort();
        Ok(out)
    }

    fn downset_rec(
        &self,
        order: &[usize],
        k: usize,
        cur: &mut Bits,
        out: &mut Vec<Bits>,
        budget: u64,
    ) -> Result<(), LatticeError> {
        if k == order.len() {
            if out.len() as u64 >= budget {
                return Err(LatticeError::BudgetExceeded { budget });
            }
            out.push(cur.clone());
            return Ok(());
        }
        let e = order[k];
        self.downset_rec(order, k + 1, cur, out, budget)?;
        let mut strict_below = self.below[e].clone();
        strict_below.remove(e);
        if strict_below.is_subset(cur) {
            cur.insert(e);
            self.downset_rec(order, k + 1, cur, out, budget)?;
            cur.remove(e);
        }
        Ok(())
    }

    /// Emit the cover relation as a DOT digraph, edges pointing upward.
    pub fn hasse_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
        for l in &self.labels {
            s.push_str(&format!("  \"{}\";\n", l));
        }
        for (x, y) in self.covers() {
            s.push_str(&format!("  \"{}\" -> \"{}\";\n", self.label(x), self.label(y)));
        }
        s.push_str("}\n");
        s
    }
}

impl std::fmt::Debug for FiniteOrtholattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteOrtholattice({} elements)", self.n())
    }
}
