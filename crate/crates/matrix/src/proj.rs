//! Projections in M_n(ℂ) and their lattice calculus: the algebraic order
//! pq = qp = p, meet by exact range intersection (cross-checkable against
//! the strong-limit iterate (pq)^m), join by De Morgan, and the Rickart
//! layer: right/left supports and the positive-part support [a>0].

use num_complex::Complex64;

use crate::cmatrix::{
    self, grouped_spectral, ident, joint_kernel_projector, left_support, max_abs, right_support,
    zeros, CMat, Tol,
};
use crate::error::MatrixError;

/// A hermitian idempotent, validated on construction.
#[derive(Clone, Debug)]
pub struct MatProjection {
    m: CMat,
}

impl MatProjection {
    pub fn new(m: CMat, tol: &Tol) -> Result<Self, MatrixError> {
        if m.nrows() != m.ncols() {
            return Err(MatrixError::DimMismatch(m.nrows(), m.ncols()));
        }
        let herm = cmatrix::hermiticity_defect(&m);
        if herm > tol.proj {
            return Err(MatrixError::NotAProjection(format!(
                "‖M − M*‖ = {herm:.3e}"
            )));
        }
        let idem = max_abs(&(&m * &m - &m));
        if idem > tol.proj {
            return Err(MatrixError::NotAProjection(format!(
                "‖M² − M‖ = {idem:.3e}"
            )));
        }
        Ok(MatProjection { m })
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn rank(&self) -> usize {
        self.m.trace().re.round() as usize
    }
}

fn check_dims(p: &MatProjection, q: &MatProjection) -> Result<(), MatrixError> {
    if p.dim() != q.dim() {
        return Err(MatrixError::DimMismatch(p.dim(), q.dim()));
    }
    Ok(())
}

/// p ≤ q iff pq = qp = p.
pub fn proj_order(p: &MatProjection, q: &MatProjection, tol: &Tol) -> Result<bool, MatrixError> {
    check_dims(p, q)?;
    let pq = &p.m * &q.m;
    let qp = &q.m * &p.m;
    Ok(max_abs(&(&pq - &p.m)) <= tol.proj && max_abs(&(&qp - &p.m)) <= tol.proj)
}

pub fn proj_perp(p: &MatProjection) -> MatProjection {
    MatProjection { m: ident(p.dim()) - &p.m }
}

/// Meet by exact column-space intersection: the projector onto
/// ker(1−p) ∩ ker(1−q), computed from a rank-revealing factorization.
pub fn proj_meet(p: &MatProjection, q: &MatProjection, tol: &Tol) -> Result<MatProjection, MatrixError> {
    check_dims(p, q)?;
    let n = p.dim();
    let a = ident(n) - &p.m;
    let b = ident(n) - &q.m;
    let m = joint_kernel_projector(&a, &b, tol.proj);
    MatProjection::new(m, tol)
}

/// Join by De Morgan: (p⊥ ∧ q⊥)⊥.
pub fn proj_join(p: &MatProjection, q: &MatProjection, tol: &Tol) -> Result<MatProjection, MatrixError> {
    let m = proj_meet(&proj_perp(p), &proj_perp(q), tol)?;
    Ok(proj_perp(&m))
}

/// The strong-limit iterate: (pq)^m walked by repeated squaring (so the
/// power doubles per step) with early Cauchy exit. Linear stepping stalls
/// below the 1e-6 scale whenever the pair has a small principal angle;
/// squaring reaches the limit for every pair within the step cap.
pub fn proj_meet_iterate(p: &MatProjection, q: &MatProjection, tol: &Tol) -> Result<CMat, MatrixError> {
    check_dims(p, q)?;
    let mut cur = &p.m * &q.m;
    for _ in 1..tol.iter_cap {
        let next = &cur * &cur;
        if max_abs(&(&next - &cur)) <= tol.iter_cauchy {
            return Ok(next);
        }
        cur = next;
    }
    Ok(cur)
}

/// Outcome of the Rickart support computations for one matrix.
#[derive(Clone, Debug)]
pub struct RickartSupports {
    pub rp: MatProjection,
    pub lp: MatProjection,
    /// spectral support [a>0] when the input is hermitian
    pub positive_support: Option<MatProjection>,
}

/// RP[x], LP[x] from a singular value decomposition; for hermitian input
/// also the positive-part support.
pub fn rickart_projections(x: &CMat, tol: &Tol) -> Result<RickartSupports, MatrixError> {
    let rp = MatProjection::new(right_support(x, tol.proj), tol)?;
    let lp = MatProjection::new(left_support(x, tol.proj), tol)?;
    let positive_support = if cmatrix::is_hermitian(x, tol.proj) {
        Some(support_positive(x, tol)?)
    } else {
        None
    };
    Ok(RickartSupports { rp, lp, positive_support })
}

/// [a>0]: the spectral projection onto the strictly positive part of a
/// hermitian matrix. Eigenvalues are grouped before thresholding.
pub fn support_positive(a: &CMat, tol: &Tol) -> Result<MatProjection, MatrixError> {
    let clusters = grouped_spectral(a, tol.proj)?;
    let mut p = zeros(a.nrows());
    for (lambda, proj) in &clusters {
        if *lambda > tol.proj {
            p += proj;
        }
    }
    MatProjection::new(p, tol)
}

/// [a=0]: the spectral projection onto the kernel.
pub fn support_zero(a: &CMat, tol: &Tol) -> Result<MatProjection, MatrixError> {
    let clusters = grouped_spectral(a, tol.proj)?;
    let mut p = zeros(a.nrows());
    for (lambda, proj) in &clusters {
        if lambda.abs() <= tol.proj {
            p += proj;
        }
    }
    MatProjection::new(p, tol)
}

/// The positive part a⁺ = Σ max(λ, 0) over the spectral decomposition.
pub fn positive_part(a: &CMat, tol: &Tol) -> Result<CMat, MatrixError> {
    let clusters = grouped_spectral(a, tol.proj)?;
    let mut out = zeros(a.nrows());
    for (lambda, proj) in &clusters {
        if *lambda > 0.0 {
            out += proj * Complex64::new(*lambda, 0.0);
        }
    }
    Ok(out)
}

/// The three equivalent support characterizations, checked on one matrix:
/// [a>0]·a = a⁺, [a>0] ∧ [−a>0] = 0, and [a>0] = 1 − [a⁺ = 0].
#[derive(Clone, Debug)]
pub struct SupportEquivalence {
    pub clause3_action: f64,
    pub clause3_disjoint: f64,
    pub clause2_agreement: f64,
}

impl SupportEquivalence {
    pub fn within(&self, tol: f64) -> bool {
        self.clause3_action <= tol && self.clause3_disjoint <= tol && self.clause2_agreement <= tol
    }
}

pub fn support_equivalence(a: &CMat, tol: &Tol) -> Result<SupportEquivalence, MatrixError> {
    let pos = support_positive(a, tol)?;
    let aplus = positive_part(a, tol)?;
    let clause3_action = max_abs(&(pos.matrix() * a - &aplus));
    let neg = support_positive(&(-a), tol)?;
    let disj = proj_meet(&pos, &neg, tol)?;
    let clause3_disjoint = max_abs(disj.matrix());
    let ker_plus = support_zero(&aplus, tol)?;
    let clause2 = ident(a.nrows()) - ker_plus.matrix();
    let clause2_agreement = max_abs(&(&clause2 - pos.matrix()));
    Ok(SupportEquivalence { clause3_action, clause3_disjoint, clause2_agreement })
}

/// Supremum of pairwise-orthogonal projections as the support of the
/// weighted sum Σ 2^{-i} p_i.
pub fn ortho_sup(ps: &[MatProjection], dim: usize, tol: &Tol) -> Result<MatProjection, MatrixError> {
    for p in ps {
        if p.dim() != dim {
            return Err(MatrixError::DimMismatch(p.dim(), dim));
        }
    }
    for i in 0..ps.len() {
        for j in (i + 1)..ps.len() {
            let cross = max_abs(&(ps[i].matrix() * ps[j].matrix()));
            if cross > tol.proj {
                return Err(MatrixError::NotOrthogonal(format!(
                    "‖p{i} p{j}‖ = {cross:.3e}"
                )));
            }
        }
    }
    let mut a = zeros(dim);
    for (i, p) in ps.iter().enumerate() {
        a += p.matrix() * Complex64::new(0.5f64.powi(i as i32 + 1), 0.0);
    }
    support_positive(&a, tol)
}

/// Fold of binary joins, the independent route for `ortho_sup`.
pub fn iterated_join(ps: &[MatProjection], dim: usize, tol: &Tol) -> Result<MatProjection, MatrixError> {
    let mut acc = MatProjection::new(zeros(dim), tol)?;
    for p in ps {
        acc = proj_join(&acc, p, tol)?;
    }
    Ok(acc)
}

/// The two-projection identities through the supports:
/// p ∨ q = q + RP[p(1−q)] and p ∧ q = p − LP[p(1−q)].
pub fn meet_join_via_supports(
    p: &MatProjection,
    q: &MatProjection,
    tol: &Tol,
) -> Result<(CMat, CMat), MatrixError> {
    check_dims(p, q)?;
    let x = p.matrix() * (ident(p.dim()) - q.matrix());
    let rp = right_support(&x, tol.proj);
    let lp = left_support(&x, tol.proj);
    let join = q.matrix() + rp;
    let meet = p.matrix() - lp;
    Ok((meet, join))
}

/// Convenience: do two projections commute within tolerance?
pub fn commutes(p: &MatProjection, q: &MatProjection, tol: &Tol) -> bool {
    max_abs(&(p.matrix() * q.matrix() - q.matrix() * p.matrix())) <= tol.proj
}

pub fn diag_projection(dim: usize, ones: &[usize], tol: &Tol) -> MatProjection {
    let mut m = zeros(dim);
    for &i in ones {
        m[(i, i)] = Complex64::new(1.0, 0.0);
    }
    MatProjection::new(m, tol).expect("diagonal 0/1 matrix is a projection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::approx_eq;

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn commuting_meet_is_product() {
        let t = tol();
        let p = diag_projection(3, &[0, 1], &t);
        let q = diag_projection(3, &[1, 2], &t);
        let m = proj_meet(&p, &q, &t).unwrap();
        assert!(approx_eq(m.matrix(), &(p.matrix() * q.matrix()), 1e-9));
        let j = proj_join(&p, &q, &t).unwrap();
        let expect = p.matrix() + q.matrix() - p.matrix() * q.matrix();
        assert!(approx_eq(j.matrix(), &expect, 1e-9));
    }

    #[test]
    fn idempotent_and_complement_laws() {
        let t = tol();
        let p = diag_projection(2, &[0], &t);
        assert!(approx_eq(proj_meet(&p, &p, &t).unwrap().matrix(), p.matrix(), 1e-9));
        let top = proj_join(&p, &proj_perp(&p), &t).unwrap();
        assert!(approx_eq(top.matrix(), &ident(2), 1e-9));
    }

    #[test]
    fn skew_lines_in_m2() {
        let t = tol();
        let p = diag_projection(2, &[0], &t);
        let half = Complex64::new(0.5, 0.0);
        let q = MatProjection::new(CMat::from_fn(2, 2, |_, _| half), &t).unwrap();
        let m = proj_meet(&p, &q, &t).unwrap();
        assert!(max_abs(m.matrix()) <= 1e-9);
        let j = proj_join(&p, &q, &t).unwrap();
        assert!(approx_eq(j.matrix(), &ident(2), 1e-9));
        // the iterate tends to 0
        let it = proj_meet_iterate(&p, &q, &t).unwrap();
        assert!(max_abs(&it) <= 1e-6);
    }

    #[test]
    fn support_of_diagonal() {
        let t = tol();
        let a = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-3.0, 0.0),
        ]));
        let s = support_positive(&a, &t).unwrap();
        assert!(approx_eq(s.matrix(), diag_projection(3, &[0], &t).matrix(), 1e-9));
        let action = s.matrix() * &a;
        let aplus = positive_part(&a, &t).unwrap();
        assert!(approx_eq(&action, &aplus, 1e-9));
        let z = support_zero(&zeros(3), &t).unwrap();
        assert!(approx_eq(z.matrix(), &ident(3), 1e-9));
        assert!(max_abs(support_positive(&zeros(3), &t).unwrap().matrix()) <= 1e-12);
    }

    #[test]
    fn rp_of_diagonal() {
        let t = tol();
        let x = diag_projection(2, &[0], &t);
        let s = rickart_projections(x.matrix(), &t).unwrap();
        assert!(approx_eq(s.rp.matrix(), x.matrix(), 1e-9));
        assert!(approx_eq(s.lp.matrix(), x.matrix(), 1e-9));
        // xa = 0 iff a = (1 − RP)a, sampled over a small matrix basis
        let n = 2;
        let rp = s.rp.matrix();
        for i in 0..n {
            for j in 0..n {
                let mut e = zeros(n);
                e[(i, j)] = Complex64::new(1.0, 0.0);
                let annihilated = max_abs(&(x.matrix() * &e)) <= 1e-12;
                let fixed = approx_eq(&((ident(n) - rp) * &e), &e, 1e-9);
                assert_eq!(annihilated, fixed);
            }
        }
    }

    #[test]
    fn ortho_sup_basics() {
        let t = tol();
        let p1 = diag_projection(3, &[0], &t);
        let p2 = diag_projection(3, &[1], &t);
        let s = ortho_sup(&[p1.clone(), p2.clone()], 3, &t).unwrap();
        assert!(approx_eq(s.matrix(), diag_projection(3, &[0, 1], &t).matrix(), 1e-8));
        let empty = ortho_sup(&[], 3, &t).unwrap();
        assert!(max_abs(empty.matrix()) <= 1e-12);
        let single = ortho_sup(&[p1.clone()], 3, &t).unwrap();
        assert!(approx_eq(single.matrix(), p1.matrix(), 1e-9));
        // non-orthogonal input is rejected
        assert!(matches!(
            ortho_sup(&[p1.clone(), p1.clone()], 3, &t),
            Err(MatrixError::NotOrthogonal(_))
        ));
    }

    #[test]
    fn support_formulas_reproduce_meet_join() {
        let t = tol();
        let p = diag_projection(2, &[0], &t);
        let half = Complex64::new(0.5, 0.0);
        let q = MatProjection::new(CMat::from_fn(2, 2, |_, _| half), &t).unwrap();
        let (meet, join) = meet_join_via_supports(&p, &q, &t).unwrap();
        assert!(approx_eq(&meet, proj_meet(&p, &q, &t).unwrap().matrix(), 1e-8));
        assert!(approx_eq(&join, proj_join(&p, &q, &t).unwrap().matrix(), 1e-8));
    }
}
