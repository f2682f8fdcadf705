//! States and truth: density matrices, the Kripke valuation of a section
//! (the upper set of contexts where the local proposition holds with
//! probability one), trace measures on projections with their per-block
//! valuation laws, and the state–proposition pairing on spectrum members.

use num_complex::Complex64;

use bohr_core::{Bits, MonotoneSection};

use crate::bridge::ContextBohr;
use crate::cmatrix::{eigh, hermiticity_defect, CMat, Tol};
use crate::error::MatrixError;
use crate::proj::MatProjection;
use crate::spectrum::SpectrumFrame;

/// A trace-one positive matrix.
#[derive(Clone, Debug)]
pub struct DensityState {
    rho: CMat,
}

impl DensityState {
    pub fn new(rho: CMat, tol: &Tol) -> Result<Self, MatrixError> {
        if rho.nrows() != rho.ncols() {
            return Err(MatrixError::DimMismatch(rho.nrows(), rho.ncols()));
        }
        let herm = hermiticity_defect(&rho);
        if herm > tol.proj {
            return Err(MatrixError::InvalidState(format!("‖ρ − ρ*‖ = {herm:.3e}")));
        }
        let (values, _) = eigh(&rho)?;
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -tol.proj {
            return Err(MatrixError::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > tol.proj || tr.im.abs() > tol.proj {
            return Err(MatrixError::InvalidState(format!("trace = {tr}")));
        }
        Ok(DensityState { rho })
    }

    /// Pure state from a unit vector.
    pub fn pure(psi: &nalgebra::DVector<Complex64>, tol: &Tol) -> Result<Self, MatrixError> {
        let norm = psi.norm();
        if norm <= tol.proj {
            return Err(MatrixError::InvalidState("zero vector".into()));
        }
        let v = psi / Complex64::new(norm, 0.0);
        DensityState::new(&v * v.adjoint(), tol)
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.rho
    }

    /// μ(p) = tr(ρ p).
    pub fn measure(&self, p: &CMat) -> f64 {
        (&self.rho * p).trace().re
    }
}

/// The classical truth value W_ψ(p): ψ(p) = 1.
pub fn classical_truth(state: &DensityState, p: &MatProjection, tol: &Tol) -> Result<bool, MatrixError> {
    if state.dim() != p.dim() {
        return Err(MatrixError::DimMismatch(state.dim(), p.dim()));
    }
    Ok(state.measure(p.matrix()) >= 1.0 - tol.val)
}

/// An upper set of contexts together with the verification that it really
/// is upward closed in the refinement order.
#[derive(Clone, Debug)]
pub struct UpperSet {
    pub contexts: Bits,
    pub upward_closed: bool,
}

/// V_ψ(S) = { C | ψ(S(C)) = 1 }, checked upward closed.
pub fn kripke_valuation(
    cb: &ContextBohr,
    state: &DensityState,
    s: &MonotoneSection,
) -> Result<UpperSet, MatrixError> {
    if state.dim() != cb.dim() {
        return Err(MatrixError::DimMismatch(state.dim(), cb.dim()));
    }
    cb.alg
        .validate(s)
        .map_err(|_| MatrixError::MixedBase)?;
    let n = cb.poset.len();
    let contexts = Bits::from_ids(
        n,
        (0..n).filter(|&ci| state.measure(cb.section_projection(s, ci)) >= 1.0 - cb.tol.val),
    );
    let upward_closed = upward_closed(&cb.poset, &contexts);
    Ok(UpperSet { contexts, upward_closed })
}

fn upward_closed(poset: &crate::context::ContextPoset, set: &Bits) -> bool {
    for c in set.iter_ones() {
        for d in 0..poset.len() {
            if poset.leq(c, d) && !set.contains(d) {
                return false;
            }
        }
    }
    true
}

/// The pairing: for a spectrum member U, the contexts where the projection
/// ⋁U(C) (the sum of the selected atoms) is true with probability one.
pub fn pairing(
    cb: &ContextBohr,
    state: &DensityState,
    member: &[Bits],
) -> Result<UpperSet, MatrixError> {
    if state.dim() != cb.dim() {
        return Err(MatrixError::DimMismatch(state.dim(), cb.dim()));
    }
    let n = cb.poset.len();
    if member.len() != n {
        return Err(MatrixError::MixedBase);
    }
    let contexts = Bits::from_ids(
        n,
        (0..n).filter(|&ci| {
            let p = cb.poset.context(ci).projection_of_mask(&member[ci]);
            state.measure(&p) >= 1.0 - cb.tol.val
        }),
    );
    let upward_closed = upward_closed(&cb.poset, &contexts);
    Ok(UpperSet { contexts, upward_closed })
}

/// Per-context verification of the probability-measure laws for μ = tr(ρ·).
#[derive(Clone, Debug)]
pub struct BlockMeasureCheck {
    pub context: usize,
    pub zero_defect: f64,
    pub one_defect: f64,
    pub monotone: bool,
    pub modular_defect: f64,
    pub additive_defect: f64,
}

/// The measure-to-valuation bridge: per-block measure laws, the valuation
/// ν(U)(C) = μ(⋁U(C)) with its sup formula over the local Boolean ideal,
/// and the directed-join law on the enumerated members.
#[derive(Clone, Debug)]
pub struct MeasureBridge {
    pub block_checks: Vec<BlockMeasureCheck>,
    /// ν(U)(C) per member, per context
    pub valuations: Vec<Vec<f64>>,
    /// sup over subsets of U(C) of μ equals μ(⋁U(C))
    pub sup_formula_defect: f64,
    /// ν is monotone along member inclusion (the finite directed-join law)
    pub join_law: bool,
}

impl MeasureBridge {
    pub fn all_within(&self, tol: f64) -> bool {
        self.block_checks.iter().all(|c| {
            c.zero_defect <= tol
                && c.one_defect <= tol
                && c.monotone
                && c.modular_defect <= tol
                && c.additive_defect <= tol
        }) && self.sup_formula_defect <= tol
            && self.join_law
    }
}

pub fn measure_valuation_bridge(
    cb: &ContextBohr,
    state: &DensityState,
    frame: &SpectrumFrame,
) -> Result<MeasureBridge, MatrixError> {
    if state.dim() != cb.dim() {
        return Err(MatrixError::DimMismatch(state.dim(), cb.dim()));
    }
    let tol = &cb.tol;
    let mut block_checks = Vec::new();
    for ci in 0..cb.poset.len() {
        let c = cb.poset.context(ci);
        let k = c.k();
        let mu = |mask: u32| -> f64 {
            let bits = Bits::from_ids(k, (0..k).filter(|&i| mask >> i & 1 == 1));
            state.measure(&c.projection_of_mask(&bits))
        };
        let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        let zero_defect = mu(0).abs();
        let one_defect = (mu(full) - 1.0).abs();
        let mut monotone = true;
        let mut modular_defect: f64 = 0.0;
        let mut additive_defect: f64 = 0.0;
        for x in 0..=full {
            for y in 0..=full {
                let mxy = mu(x) + mu(y) - mu(x & y) - mu(x | y);
                modular_defect = modular_defect.max(mxy.abs());
                if x & !y == 0 && mu(x) > mu(y) + tol.val {
                    monotone = false;
                }
                if x & y == 0 {
                    additive_defect = additive_defect.max((mu(x | y) - mu(x) - mu(y)).abs());
                }
            }
        }
        block_checks.push(BlockMeasureCheck {
            context: ci,
            zero_defect,
            one_defect,
            monotone,
            modular_defect,
            additive_defect,
        });
    }

    let mut valuations = Vec::with_capacity(frame.len());
    let mut sup_formula_defect: f64 = 0.0;
    for member in &frame.members {
        let mut per_context = Vec::with_capacity(cb.poset.len());
        for (ci, sel) in member.iter().enumerate() {
            let c = cb.poset.context(ci);
            let nu = state.measure(&c.projection_of_mask(sel));
            // ν(U) = sup{ μ(u) | u in the ideal generated by U(C) }
            let ids = sel.ids();
            let mut sup = 0.0f64;
            for mask in 0u32..1 << ids.len() {
                let sub = Bits::from_ids(
                    c.k(),
                    ids.iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> *b & 1 == 1)
                        .map(|(_, &a)| a),
                );
                sup = sup.max(state.measure(&c.projection_of_mask(&sub)));
            }
            sup_formula_defect = sup_formula_defect.max((nu - sup).abs());
            per_context.push(nu);
        }
        valuations.push(per_context);
    }

    // directed joins in a finite family reduce to monotonicity of ν
    let mut join_law = true;
    'outer: for (i, u) in frame.members.iter().enumerate() {
        for (j, v) in frame.members.iter().enumerate() {
            if frame.member_leq(u, v) {
                for ci in 0..cb.poset.len() {
                    if valuations[i][ci] > valuations[j][ci] + tol.val {
                        join_law = false;
                        break 'outer;
                    }
                }
            }
        }
    }

    Ok(MeasureBridge { block_checks, valuations, sup_formula_defect, join_law })
}
