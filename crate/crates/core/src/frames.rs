//! Ideal completions, Bruns–Lakser distributive ideals, frame checks and
//! frame points, all over explicit member lists of downsets.
//!
//! A member list is ordered by inclusion. Meets and joins are computed
//! *within* the list (greatest member below, least member above); for a
//! finite member list, pairwise bounds plus global bounds give completeness,
//! and binary distributivity gives the full frame law by folding.

use std::collections::BTreeSet;

use crate::bitset::Bits;
use crate::blocks::find_isomorphism;
use crate::error::FrameError;
use crate::heyting::BohrAlgebra;
use crate::lattice::{ElemId, FiniteOrtholattice};
use crate::samples;

/// A family of downsets of a base lattice, ordered by inclusion.
#[derive(Clone, Debug)]
pub struct DownsetFrame {
    pub base_labels: Vec<String>,
    pub members: Vec<Bits>,
}

impl DownsetFrame {
    /// Sorts and deduplicates the member list.
    pub fn new(base_labels: Vec<String>, mut members: Vec<Bits>) -> Self {
        members.sort();
        members.dedup();
        DownsetFrame { base_labels, members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member_labels(&self, idx: usize) -> Vec<String> {
        self.members[idx]
            .iter_ones()
            .map(|e| self.base_labels[e].clone())
            .collect()
    }

    /// Greatest member contained in `s`, if the family has one.
    fn glb_of_set(&self, s: &Bits) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, m) in self.members.iter().enumerate() {
            if m.is_subset(s) {
                best = match best {
                    None => Some(i),
                    // keep a running maximum; a true greatest lower bound,
                    // if one exists, eventually absorbs it
                    Some(b) => {
                        if self.members[b].is_subset(m) {
                            Some(i)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
        }
        let b = best?;
        for m in &self.members {
            if m.is_subset(s) && !m.is_subset(&self.members[b]) {
                return None;
            }
        }
        Some(b)
    }

    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        self.glb_of_set(&self.members[i].intersection(&self.members[j]))
    }

    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        let u = self.members[i].union(&self.members[j]);
        let mut best: Option<usize> = None;
        for (k, m) in self.members.iter().enumerate() {
            if u.is_subset(m) {
                best = match best {
                    None => Some(k),
                    Some(b) => {
                        if m.is_subset(&self.members[b]) {
                            Some(k)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
        }
        let b = best?;
        for m in &self.members {
            if u.is_subset(m) && !self.members[b].is_subset(m) {
                return None;
            }
        }
        Some(b)
    }

    pub fn bottom(&self) -> Option<usize> {
        let m = self.members.iter().enumerate().min_by_key(|(_, m)| m.count())?;
        self.members.iter().all(|x| m.1.is_subset(x)).then_some(m.0)
    }

    pub fn top(&self) -> Option<usize> {
        let m = self.members.iter().enumerate().max_by_key(|(_, m)| m.count())?;
        self.members.iter().all(|x| x.is_subset(m.1)).then_some(m.0)
    }
}

/// The frame of ideals: nonempty downsets closed under binary join. For a
/// finite lattice every ideal is principal, so the frame is order-isomorphic
/// to the lattice; the isomorphism (element ↦ member index) is returned.
pub fn ideal_completion(
    lat: &FiniteOrtholattice,
    budget: u64,
) -> Result<(DownsetFrame, Vec<(ElemId, usize)>), FrameError> {
    let downsets = lat
        .downsets(budget)
        .map_err(|_| FrameError::BudgetExceeded { budget })?;
    let members: Vec<Bits> = downsets
        .into_iter()
        .filter(|s| {
            !s.is_empty()
                && s.iter_ones().all(|x| {
                    s.iter_ones()
                        .all(|y| s.contains(lat.join(x as ElemId, y as ElemId) as usize))
                })
        })
        .collect();
    let frame = DownsetFrame::new(lat.labels().to_vec(), members);
    let iso: Vec<(ElemId, usize)> = (0..lat.n() as ElemId)
        .map(|x| {
            let ds = lat.down_set(x);
            let idx = frame
                .members
                .iter()
                .position(|m| m == ds)
                .expect("principal ideal is an ideal");
            (x, idx)
        })
        .collect();
    Ok((frame, iso))
}

/// A downset together with the outcome of the distributivity test.
#[derive(Clone, Debug)]
pub struct DistributivityFailure {
    pub member: Bits,
    /// the l with (⋁M) ∧ l ≠ ⋁ (m ∧ l)
    pub witness: ElemId,
    pub lhs: ElemId,
    pub rhs: ElemId,
}

/// Bruns–Lakser data: the ideals distributive under the verbatim definition,
/// the printed union family when the input is the ten-element worked
/// example, and the two-sided discrepancy report.
#[derive(Clone, Debug)]
pub struct BrunsLakser {
    pub definitional: DownsetFrame,
    pub printed_family: Option<DownsetFrame>,
    pub only_definitional: Vec<Bits>,
    pub only_family: Vec<DistributivityFailure>,
    pub notes: Vec<String>,
}

/// Decide `(⋁M) ∧ l = ⋁ (m ∧ l)` for all l; returns the first failure.
fn distributive_ideal_failure(
    lat: &FiniteOrtholattice,
    m: &Bits,
) -> Option<(ElemId, ElemId, ElemId)> {
    let ids: Vec<ElemId> = m.iter_ones().map(|e| e as ElemId).collect();
    let sup = ids
        .iter()
        .fold(lat.bottom(), |acc, &x| lat.join(acc, x));
    for l in 0..lat.n() as ElemId {
        let lhs = lat.meet(sup, l);
        let rhs = ids
            .iter()
            .fold(lat.bottom(), |acc, &x| lat.join(acc, lat.meet(x, l)));
        if lhs != rhs {
            return Some((l, lhs, rhs));
        }
    }
    None
}

pub fn bruns_lakser(lat: &FiniteOrtholattice, budget: u64) -> Result<BrunsLakser, FrameError> {
    let downsets = lat
        .downsets(budget)
        .map_err(|_| FrameError::BudgetExceeded { budget })?;
    let mut definitional = Vec::new();
    for m in &downsets {
        if m.is_empty() {
            continue;
        }
        if distributive_ideal_failure(lat, m).is_none() {
            definitional.push(m.clone());
        }
    }
    let definitional = DownsetFrame::new(lat.labels().to_vec(), definitional);

    let mut notes = vec![
        "definitional set: nonempty downsets M with (⋁M) ∧ l = ⋁ m∧l for all l".to_string(),
    ];
    let canonical = samples::worked_example();
    let printed_family = find_isomorphism(&canonical, lat).map(|map| {
        let n = lat.n();
        let of = |s: &str| map[canonical.id_of(s).unwrap() as usize];
        let lower: Vec<ElemId> = ["a", "b", "c", "d", "d⊥"].iter().map(|s| of(s)).collect();
        let upper: Vec<ElemId> = ["a⊥", "b⊥", "c⊥"].iter().map(|s| of(s)).collect();
        let mut fam: BTreeSet<Bits> = BTreeSet::new();
        for am in 0u32..1 << lower.len() {
            for bm in 0u32..1 << upper.len() {
                let mut u = Bits::empty(n);
                for (i, &x) in lower.iter().enumerate() {
                    if am >> i & 1 == 1 {
                        u.union_with(lat.down_set(x));
                    }
                }
                for (i, &y) in upper.iter().enumerate() {
                    if bm >> i & 1 == 1 {
                        u.union_with(lat.down_set(y));
                    }
                }
                if !u.is_empty() {
                    fam.insert(u);
                }
            }
        }
        // the printed family drops ∅ and adds the whole lattice
        fam.insert(Bits::full(n));
        notes.push(
            "printed family: unions of principal downsets over {a,b,c,d,d⊥} and {a⊥,b⊥,c⊥}, − ∅ + X"
                .to_string(),
        );
        DownsetFrame::new(lat.labels().to_vec(), fam.into_iter().collect())
    });

    let mut only_definitional = Vec::new();
    let mut only_family = Vec::new();
    if let Some(fam) = &printed_family {
        for m in &definitional.members {
            if !fam.members.contains(m) {
                only_definitional.push(m.clone());
            }
        }
        for m in &fam.members {
            if !definitional.members.contains(m) {
                let (witness, lhs, rhs) =
                    distributive_ideal_failure(lat, m).expect("member outside the definitional set must fail the equation");
                only_family.push(DistributivityFailure {
                    member: m.clone(),
                    witness,
                    lhs,
                    rhs,
                });
            }
        }
    } else {
        notes.push("input is not the worked example; no printed family to compare".to_string());
    }
    Ok(BrunsLakser {
        definitional,
        printed_family,
        only_definitional,
        only_family,
        notes,
    })
}

/// A point of the frame: a 0/1 assignment preserving finite meets and all
/// joins. For a finite member list these are exactly the assignments
/// u ↦ [u ⊄ z] for meet-prime members z below the top.
#[derive(Clone, Debug)]
pub struct FramePoint {
    /// index of the prime member z with φ(u) = 0 iff u ⊆ z
    pub prime_member: usize,
    /// bit i set iff φ(member i) = 1
    pub assignment: Bits,
}

pub fn frame_points(frame: &DownsetFrame) -> Vec<FramePoint> {
    let n = frame.members.len();
    let top = match frame.top() {
        Some(t) => t,
        None => return Vec::new(),
    };
    let mut points = Vec::new();
    for z in 0..n {
        if z == top {
            continue;
        }
        let mut prime = true;
        'pairs: for u in 0..n {
            for v in 0..n {
                let m = match frame.meet(u, v) {
                    Some(m) => m,
                    None => return Vec::new(),
                };
                let below = |i: usize| frame.members[i].is_subset(&frame.members[z]);
                if below(m) && !below(u) && !below(v) {
                    prime = false;
                    break 'pairs;
                }
            }
        }
        if prime {
            let assignment = Bits::from_ids(
                n,
                (0..n).filter(|&u| !frame.members[u].is_subset(&frame.members[z])),
            );
            points.push(FramePoint { prime_member: z, assignment });
        }
    }
    points
}

#[derive(Clone, Debug)]
pub struct FrameCheck {
    pub bounded: bool,
    pub has_all_meets: bool,
    pub has_all_joins: bool,
    pub distributive: bool,
    pub witness: Option<String>,
}

impl FrameCheck {
    pub fn ok(&self) -> bool {
        self.bounded && self.has_all_meets && self.has_all_joins && self.distributive
    }
}

/// Verify bounded-lattice structure plus the frame law. Binary joins and
/// meets suffice: finitely many members make every join a fold, and binary
/// distributivity extends to those folds inductively.
pub fn check_frame(frame: &DownsetFrame) -> FrameCheck {
    let n = frame.members.len();
    let bounded = frame.bottom().is_some() && frame.top().is_some();
    let mut witness = None;
    let mut has_all_meets = true;
    let mut has_all_joins = true;
    let mut meets = vec![usize::MAX; n * n];
    let mut joins = vec![usize::MAX; n * n];
    'outer: for i in 0..n {
        for j in 0..n {
            match frame.meet(i, j) {
                Some(m) => meets[i * n + j] = m,
                None => {
                    has_all_meets = false;
                    witness = Some(format!("members {i} and {j} have no meet"));
                    break 'outer;
                }
            }
            match frame.join(i, j) {
                Some(m) => joins[i * n + j] = m,
                None => {
                    has_all_joins = false;
                    witness = Some(format!("members {i} and {j} have no join"));
                    break 'outer;
                }
            }
        }
    }
    let mut distributive = has_all_meets && has_all_joins && bounded;
    if distributive {
        'tri: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = meets[x * n + joins[y * n + z]];
                    let rhs = joins[meets[x * n + y] * n + meets[x * n + z]];
                    if lhs != rhs {
                        distributive = false;
                        witness = Some(format!(
                            "meet does not distribute over join at members ({x}, {y}, {z})"
                        ));
                        break 'tri;
                    }
                }
            }
        }
    }
    FrameCheck { bounded, has_all_meets, has_all_joins, distributive, witness }
}

/// Birkhoff form of an enumerated section algebra: each section becomes the
/// downset of join-irreducible sections below it, so members are closed under
/// both intersection and union.
pub fn downset_frame_of_sections(alg: &BohrAlgebra) -> Option<DownsetFrame> {
    let all = alg.enumeration()?;
    let n = all.len();
    let leq: Vec<Bits> = {
        let mut rows = vec![Bits::empty(n); n];
        for i in 0..n {
            for j in 0..n {
                if alg.sec_leq(&all[i], &all[j]).unwrap() {
                    rows[i].insert(j);
                }
            }
        }
        rows
    };
    let below = |i: usize| -> Vec<usize> {
        (0..n).filter(|&j| leq[j].contains(i)).collect()
    };
    // join-irreducible ⇔ exactly one lower cover
    let mut ji: Vec<usize> = Vec::new();
    for i in 0..n {
        let strictly_below: Vec<usize> = below(i).into_iter().filter(|&j| j != i).collect();
        let covers: Vec<usize> = strictly_below
            .iter()
            .copied()
            .filter(|&j| {
                !strictly_below
                    .iter()
                    .any(|&k| k != j && leq[j].contains(k))
            })
            .collect();
        if covers.len() == 1 {
            ji.push(i);
        }
    }
    let base_labels: Vec<String> = ji
        .iter()
        .map(|&i| {
            all[i]
                .values()
                .iter()
                .enumerate()
                .map(|(b, &v)| format!("B{b}:{}", alg.poset().label(v)))
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect();
    let members: Vec<Bits> = (0..n)
        .map(|i| {
            Bits::from_ids(
                ji.len(),
                ji.iter().enumerate().filter(|(_, &j)| leq[j].contains(i)).map(|(k, _)| k),
            )
        })
        .collect();
    Some(DownsetFrame::new(base_labels, members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{enumerate_blocks, BlockMode};
    use crate::heyting::bohrify;

    #[test]
    fn ideal_completion_is_principal() {
        for (lat, expect) in [
            (samples::powerset(3), 8),
            (samples::two_chain(), 2),
            (samples::worked_example(), 10),
        ] {
            let (frame, iso) = ideal_completion(&lat, 1_000_000).unwrap();
            assert_eq!(frame.len(), expect);
            assert_eq!(iso.len(), lat.n());
            // order isomorphism: x ≤ y iff ↓x ⊆ ↓y
            for &(x, ix) in &iso {
                for &(y, iy) in &iso {
                    assert_eq!(
                        lat.leq(x, y),
                        frame.members[ix].is_subset(&frame.members[iy])
                    );
                }
            }
        }
    }

    #[test]
    fn bruns_lakser_chain_all_downsets() {
        // in a chain every nonempty downset is distributive
        let chain = samples::two_chain();
        let bl = bruns_lakser(&chain, 10_000).unwrap();
        assert_eq!(bl.definitional.len(), chain.n());
        assert!(bl.printed_family.is_none());
    }

    #[test]
    fn bruns_lakser_boolean_square() {
        let square = samples::powerset(2);
        let bl = bruns_lakser(&square, 10_000).unwrap();
        // {0, a, a⊥} has join 1 and satisfies the equation against every l
        let a = square.id_of("{1}").unwrap() as usize;
        let ap = square.id_of("{2}").unwrap() as usize;
        let z = square.id_of("∅").unwrap() as usize;
        let m = Bits::from_ids(4, [z, a, ap]);
        assert!(distributive_ideal_failure(&square, &m).is_none());
        assert!(bl.definitional.members.contains(&m));
    }

    #[test]
    fn bruns_lakser_worked_example_counts() {
        let x = samples::worked_example();
        let bl = bruns_lakser(&x, 1_000_000).unwrap();
        let fam = bl.printed_family.as_ref().expect("worked example recognized");
        assert_eq!(fam.len(), 72);
        assert_eq!(bl.definitional.len(), 21);
        // {0,a,d} is printed but fails the verbatim definition at l = b⊥
        let id = |s: &str| x.id_of(s).unwrap() as usize;
        let oad = Bits::from_ids(10, [id("0"), id("a"), id("d")]);
        assert!(fam.members.contains(&oad));
        let fail = bl.only_family.iter().find(|f| f.member == oad).unwrap();
        // the reported witness really violates the equation
        assert_ne!(fail.lhs, fail.rhs);
        // and so does l = b⊥: (a∨d) ∧ b⊥ = b⊥ while the pointwise join is a
        let bp = x.id_of("b⊥").unwrap();
        let sup = [id("0"), id("a"), id("d")]
            .iter()
            .fold(x.bottom(), |acc, &m| x.join(acc, m as ElemId));
        assert_eq!(x.meet(sup, bp), bp);
        let rhs = [id("0"), id("a"), id("d")]
            .iter()
            .fold(x.bottom(), |acc, &m| x.join(acc, x.meet(m as ElemId, bp)));
        assert_eq!(rhs, x.id_of("a").unwrap());
        // {0} is definitional but not printed
        let z = Bits::from_ids(10, [id("0")]);
        assert!(bl.only_definitional.contains(&z));
        // every printed member is a genuine downset
        for m in &fam.members {
            assert!(x.is_downset(m));
        }
    }

    #[test]
    fn frame_points_of_boolean_ideals() {
        for n in 1..=4 {
            let lat = samples::powerset(n);
            let (frame, _) = ideal_completion(&lat, 1_000_000).unwrap();
            let pts = frame_points(&frame);
            assert_eq!(pts.len(), n, "Pow({n}) must have {n} points");
            // each point picks out one atom: φ(↓x) = 1 iff atom ≤ x
            for p in &pts {
                let z = &frame.members[p.prime_member];
                // z is the downset of a coatom
                assert_eq!(z.count(), (1 << n) / 2);
            }
        }
    }

    #[test]
    fn degenerate_frame_has_no_points() {
        let one = DownsetFrame::new(vec!["*".into()], vec![Bits::full(1)]);
        assert_eq!(frame_points(&one).len(), 0);
    }

    #[test]
    fn check_frame_passes_on_ideals_and_fails_on_corruption() {
        let lat = samples::powerset(2);
        let (frame, _) = ideal_completion(&lat, 10_000).unwrap();
        assert!(check_frame(&frame).ok());

        // removing a join (the top member) breaks the lattice structure
        let top = frame.top().unwrap();
        let corrupted = DownsetFrame::new(
            frame.base_labels.clone(),
            frame
                .members
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != top)
                .map(|(_, m)| m.clone())
                .collect(),
        );
        let chk = check_frame(&corrupted);
        assert!(!chk.ok());
        assert!(chk.witness.is_some());
    }

    #[test]
    fn section_algebra_in_birkhoff_form_is_a_frame() {
        let x = samples::worked_example();
        let p = enumerate_blocks(&x, BlockMode::SingleGenerated, 10_000).unwrap();
        let alg = bohrify(&p, 1_000);
        let frame = downset_frame_of_sections(&alg).unwrap();
        assert_eq!(frame.len(), 257);
        let chk = check_frame(&frame);
        assert!(chk.ok(), "{:?}", chk.witness);
    }
}
