//! Contexts: unital commutative *-subalgebras of M_n(ℂ), represented by
//! their atoms (minimal projections). The projection lattice of a context
//! is the powerset of its atoms, which keeps all Boolean structure exact.
//!
//! The refinement order C ≤ D holds when every atom of C is a sum of atoms
//! of D; the trivial context (single atom 1) is below everything.

use num_complex::Complex64;

use crate::cmatrix::{approx_eq, ident, max_abs, sort_key, trace_re, zeros, CMat, Tol};
use crate::error::MatrixError;
use crate::cmatrix::right_support;
use crate::proj::MatProjection;
use bohr_core::Bits;

pub use crate::cmatrix::Tol as Tolerances;

/// A commutative context given by its complete family of orthogonal atoms.
#[derive(Clone, Debug)]
pub struct Context {
    dim: usize,
    atoms: Vec<CMat>,
}

impl Context {
    pub fn new(dim: usize, mut atoms: Vec<CMat>, tol: &Tol) -> Result<Self, MatrixError> {
        for a in &atoms {
            MatProjection::new(a.clone(), tol)?;
            if a.nrows() != dim {
                return Err(MatrixError::DimMismatch(a.nrows(), dim));
            }
        }
        for i in 0..atoms.len() {
            for j in (i + 1)..atoms.len() {
                let cross = max_abs(&(&atoms[i] * &atoms[j]));
                if cross > tol.proj {
                    return Err(MatrixError::NotOrthogonal(format!(
                        "atoms {i}, {j}: ‖e_i e_j‖ = {cross:.3e}"
                    )));
                }
            }
        }
        let sum = atoms.iter().fold(zeros(dim), |acc, a| acc + a);
        if !approx_eq(&sum, &ident(dim), tol.proj) {
            return Err(MatrixError::ToleranceViolated(format!(
                "atoms do not sum to 1 (defect {:.3e})",
                max_abs(&(sum - ident(dim)))
            )));
        }
        atoms.sort_by_key(sort_key);
        Ok(Context { dim, atoms })
    }

    /// The trivial context ℂ·1.
    pub fn trivial(dim: usize, tol: &Tol) -> Self {
        Context::new(dim, vec![ident(dim)], tol).expect("identity atom")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[CMat] {
        &self.atoms
    }

    pub fn k(&self) -> usize {
        self.atoms.len()
    }

    /// Coefficients of a matrix against the atoms: x = Σ λ_e e when x lies
    /// in the context; verified by reconstruction.
    pub fn coefficients(&self, x: &CMat, tol: &Tol) -> Result<Vec<Complex64>, MatrixError> {
        if x.nrows() != self.dim {
            return Err(MatrixError::DimMismatch(x.nrows(), self.dim));
        }
        let coefs: Vec<Complex64> = self
            .atoms
            .iter()
            .map(|e| (x * e).trace() / Complex64::new(trace_re(e), 0.0))
            .collect();
        let mut recon = zeros(self.dim);
        for (c, e) in coefs.iter().zip(&self.atoms) {
            recon += e * *c;
        }
        if !approx_eq(&recon, x, (tol.proj * 1e2).max(1e-8)) {
            return Err(MatrixError::NotInContext(format!(
                "reconstruction defect {:.3e}",
                max_abs(&(recon - x))
            )));
        }
        Ok(coefs)
    }

    /// Membership of a projection in P(C): all coefficients 0/1.
    pub fn projection_mask(&self, p: &MatProjection, tol: &Tol) -> Option<Bits> {
        let coefs = self.coefficients(p.matrix(), tol).ok()?;
        let mut mask = Bits::empty(self.k());
        for (i, c) in coefs.iter().enumerate() {
            if c.im.abs() > 1e-7 {
                return None;
            }
            if (c.re - 1.0).abs() <= 1e-7 {
                mask.insert(i);
            } else if c.re.abs() > 1e-7 {
                return None;
            }
        }
        Some(mask)
    }

    /// Sum of the atoms selected by `mask`.
    pub fn projection_of_mask(&self, mask: &Bits) -> CMat {
        let mut p = zeros(self.dim);
        for i in mask.iter_ones() {
            p += &self.atoms[i];
        }
        p
    }

    /// Two contexts are equal when their atom sets match up to permutation.
    pub fn same_as(&self, other: &Context, tol: &Tol) -> bool {
        if self.dim != other.dim || self.k() != other.k() {
            return false;
        }
        let mut used = vec![false; other.k()];
        'outer: for a in &self.atoms {
            for (j, b) in other.atoms.iter().enumerate() {
                if !used[j] && approx_eq(a, b, tol.proj * 10.0) {
                    used[j] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// C ≤ D: every atom of C is a sum of atoms of D.
    pub fn refined_by(&self, finer: &Context, tol: &Tol) -> bool {
        if self.dim != finer.dim {
            return false;
        }
        for e in &self.atoms {
            let mut sum = zeros(self.dim);
            for f in &finer.atoms {
                if max_abs(&(f * e - f)) <= tol.proj * 10.0 {
                    sum += f;
                }
            }
            if !approx_eq(&sum, e, tol.proj * 10.0) {
                return false;
            }
        }
        true
    }
}

/// Generate the context of a family of commuting projections: atoms are the
/// nonzero minimal products Π q_i with q_i ∈ {p_i, 1 − p_i}.
pub fn context_generate(
    dim: usize,
    projs: &[MatProjection],
    tol: &Tol,
) -> Result<Context, MatrixError> {
    for p in projs {
        if p.dim() != dim {
            return Err(MatrixError::DimMismatch(p.dim(), dim));
        }
    }
    for i in 0..projs.len() {
        for j in (i + 1)..projs.len() {
            let comm = max_abs(
                &(projs[i].matrix() * projs[j].matrix() - projs[j].matrix() * projs[i].matrix()),
            );
            if comm > tol.proj {
                return Err(MatrixError::NotCommuting { i, j, norm: comm });
            }
        }
    }
    if projs.len() > 20 {
        return Err(MatrixError::ToleranceViolated(
            "more than 20 generators".into(),
        ));
    }
    let mut atoms = Vec::new();
    for pattern in 0u32..1 << projs.len() {
        let mut prod = ident(dim);
        for (i, p) in projs.iter().enumerate() {
            let factor = if pattern >> i & 1 == 1 {
                p.matrix().clone()
            } else {
                ident(dim) - p.matrix()
            };
            prod *= factor;
        }
        if trace_re(&prod) > 0.5 {
            atoms.push(prod);
        }
    }
    Context::new(dim, atoms, tol)
}

/// Inclusion-ordered family of contexts.
#[derive(Clone, Debug)]
pub struct ContextPoset {
    dim: usize,
    contexts: Vec<Context>,
    leq: Vec<Bits>,
    bottom: usize,
}

impl ContextPoset {
    /// Deduplicate, optionally adjoin the trivial context and close under
    /// pairwise intersection, then order by refinement.
    pub fn new(
        dim: usize,
        contexts: Vec<Context>,
        close_under_meet: bool,
        add_trivial: bool,
        tol: &Tol,
    ) -> Result<ContextPoset, MatrixError> {
        let mut all: Vec<Context> = Vec::new();
        let push = |c: Context, all: &mut Vec<Context>| {
            if c.dim() != dim {
                return Err(MatrixError::DimMismatch(c.dim(), dim));
            }
            if !all.iter().any(|d| d.same_as(&c, tol)) {
                all.push(c);
            }
            Ok(())
        };
        for c in contexts {
            push(c, &mut all)?;
        }
        if add_trivial {
            push(Context::trivial(dim, tol), &mut all)?;
        }
        if close_under_meet {
            loop {
                let mut added = false;
                let snapshot = all.clone();
                for i in 0..snapshot.len() {
                    for j in (i + 1)..snapshot.len() {
                        let m = context_intersection(&snapshot[i], &snapshot[j], tol)?;
                        if !all.iter().any(|d| d.same_as(&m, tol)) {
                            all.push(m);
                            added = true;
                        }
                    }
                }
                if !added {
                    break;
                }
            }
        }
        // deterministic order: coarser (fewer atoms) first, then by key
        all.sort_by_key(|c| (c.k(), c.atoms().iter().flat_map(sort_key).collect::<Vec<_>>()));
        let n = all.len();
        let mut leq = vec![Bits::empty(n); n];
        for i in 0..n {
            for j in 0..n {
                if all[i].refined_by(&all[j], tol) {
                    leq[i].insert(j);
                }
            }
        }
        let bottom = (0..n)
            .find(|&i| leq[i].count() == n)
            .ok_or_else(|| MatrixError::PreconditionViolated(
                "context family has no common coarsening; add the trivial context".into(),
            ))?;
        Ok(ContextPoset { dim, contexts: all, leq, bottom })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn context(&self, i: usize) -> &Context {
        &self.contexts[i]
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i].contains(j)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// For C ≤ D: the D-atoms lying under atom `e` of C.
    pub fn refinement_fibers(&self, coarse: usize, fine: usize, tol: &Tol) -> Vec<Bits> {
        let c = &self.contexts[coarse];
        let d = &self.contexts[fine];
        c.atoms()
            .iter()
            .map(|e| {
                Bits::from_ids(
                    d.k(),
                    d.atoms()
                        .iter()
                        .enumerate()
                        .filter(|(_, f)| max_abs(&(*f * e - *f)) <= tol.proj * 10.0)
                        .map(|(i, _)| i),
                )
            })
            .collect()
    }
}

/// The meet C ∧ D = C ∩ D: atoms are the coarsest common coarsening of the
/// two atom partitions, found from the connected components of the overlap
/// graph (merging components when a lone component's two sums disagree).
pub fn context_intersection(c: &Context, d: &Context, tol: &Tol) -> Result<Context, MatrixError> {
    if c.dim() != d.dim() {
        return Err(MatrixError::DimMismatch(c.dim(), d.dim()));
    }
    let nc = c.k();
    let nd = d.k();
    // union-find over nc + nd nodes
    let mut parent: Vec<usize> = (0..nc + nd).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..nc {
        for j in 0..nd {
            if max_abs(&(&c.atoms()[i] * &d.atoms()[j])) > tol.proj * 10.0 {
                let a = find(&mut parent, i);
                let b = find(&mut parent, nc + j);
                parent[a] = b;
            }
        }
    }
    let mut comp_sum_c: std::collections::HashMap<usize, CMat> = std::collections::HashMap::new();
    let mut comp_sum_d: std::collections::HashMap<usize, CMat> = std::collections::HashMap::new();
    for i in 0..nc {
        let r = find(&mut parent, i);
        *comp_sum_c.entry(r).or_insert_with(|| zeros(c.dim())) += &c.atoms()[i];
    }
    for j in 0..nd {
        let r = find(&mut parent, nc + j);
        *comp_sum_d.entry(r).or_insert_with(|| zeros(c.dim())) += &d.atoms()[j];
    }
    let mut roots: Vec<usize> = comp_sum_c.keys().copied().collect();
    roots.sort_unstable();
    let mut good: Vec<CMat> = Vec::new();
    let mut bad: Vec<usize> = Vec::new();
    for r in roots {
        let sc = &comp_sum_c[&r];
        let sd = comp_sum_d
            .get(&r)
            .ok_or_else(|| MatrixError::ToleranceViolated("dangling overlap component".into()))?;
        if approx_eq(sc, sd, tol.proj * 100.0) {
            good.push(sc.clone());
        } else {
            bad.push(r);
        }
    }
    // merge disagreeing components into minimal agreeing unions
    while !bad.is_empty() {
        let k = bad.len();
        let mut merged: Option<(u32, CMat)> = None;
        'search: for size in 2..=k {
            for mask in 1u32..1 << k {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let mut sc = zeros(c.dim());
                let mut sd = zeros(c.dim());
                for (b, &r) in bad.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        sc += &comp_sum_c[&r];
                        sd += &comp_sum_d[&r];
                    }
                }
                if approx_eq(&sc, &sd, tol.proj * 100.0) {
                    merged = Some((mask, sc));
                    break 'search;
                }
            }
        }
        let (mask, sum) = merged.ok_or_else(|| {
            MatrixError::ToleranceViolated("no common coarsening of the two contexts".into())
        })?;
        good.push(sum);
        bad = bad
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> *b & 1 == 0)
            .map(|(_, &r)| r)
            .collect();
    }
    Context::new(c.dim(), good, tol)
}

/// `rickart_projections` with the optional context precondition: when a
/// context is given, x must lie in it.
pub fn rickart_in_context(
    x: &CMat,
    context: Option<&Context>,
    tol: &Tol,
) -> Result<crate::proj::RickartSupports, MatrixError> {
    if let Some(c) = context {
        c.coefficients(x, tol)?;
    }
    crate::proj::rickart_projections(x, tol)
}

/// Support of x computed inside D (sum of D-atoms with nonzero coefficient)
/// and the verification that it lies back in C and matches the global RP.
#[derive(Clone, Debug)]
pub struct RelativeSupportReport {
    /// D-atom indices carrying x
    pub expansion_fine: Vec<usize>,
    /// C-atom indices expressing the same projection
    pub expansion_coarse: Vec<usize>,
    pub lies_in_coarse: bool,
    pub matches_global_rp: bool,
}

pub fn relative_rickart_check(
    x: &CMat,
    coarse: &Context,
    fine: &Context,
    tol: &Tol,
) -> Result<RelativeSupportReport, MatrixError> {
    if !coarse.refined_by(fine, tol) {
        return Err(MatrixError::PreconditionViolated("need C ≤ D".into()));
    }
    let _ = coarse
        .coefficients(x, tol)
        .map_err(|_| MatrixError::PreconditionViolated("x must lie in C".into()))?;
    let fine_coefs = fine.coefficients(x, tol)?;
    let expansion_fine: Vec<usize> = fine_coefs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > tol.proj * 100.0)
        .map(|(i, _)| i)
        .collect();
    let rp_in_fine = fine.projection_of_mask(&Bits::from_ids(fine.k(), expansion_fine.iter().copied()));
    let rp = MatProjection::new(rp_in_fine.clone(), tol)?;
    let coarse_mask = coarse.projection_mask(&rp, tol);
    let lies_in_coarse = coarse_mask.is_some();
    let expansion_coarse = coarse_mask.map(|m| m.ids()).unwrap_or_default();
    let global = right_support(x, tol.proj);
    let matches_global_rp = approx_eq(&rp_in_fine, &global, 1e-7);
    Ok(RelativeSupportReport {
        expansion_fine,
        expansion_coarse,
        lies_in_coarse,
        matches_global_rp,
    })
}
