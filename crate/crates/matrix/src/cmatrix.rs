//! Dense complex-matrix helpers: entry-wise norms, hermitian spectral
//! decompositions with eigenvalue grouping, and range/kernel projectors.
//! All structural decisions are made against explicit thresholds;
//! degenerate eigenvalues are grouped before thresholding so a numerically
//! repeated eigenvalue never splits a spectral projection.
//!
//! The hermitian eigensolver is a classical Jacobi iteration written here:
//! the library decompositions for complex matrices proved unreliable on
//! rank-deficient input (unitary factors with a wrong reconstruction), and
//! at dimension ≤ 8 Jacobi is exact to machine precision and instant.
//! Range and kernel projectors go through the hermitian Gram matrices
//! x*x and xx*, so this one solver carries the whole numerical layer.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::MatrixError;

pub type CMat = DMatrix<Complex64>;

/// Numerical policy: `proj` for structural checks, `val` for valuation
/// truth, plus the strong-limit iteration controls.
#[derive(Clone, Copy, Debug)]
pub struct Tol {
    pub proj: f64,
    pub val: f64,
    pub iter_cap: usize,
    pub iter_cauchy: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol { proj: 1e-9, val: 1e-9, iter_cap: 200, iter_cauchy: 1e-10 }
    }
}

impl Tol {
    pub fn validate(&self) -> Result<(), MatrixError> {
        for (name, v) in [("proj", self.proj), ("val", self.val)] {
            if !(v > 0.0 && v < 1e-2) {
                return Err(MatrixError::ToleranceViolated(format!(
                    "tolerance `{name}` = {v} must lie in (0, 1e-2)"
                )));
            }
        }
        if self.iter_cap == 0 {
            return Err(MatrixError::ToleranceViolated("iterate cap must be ≥ 1".into()));
        }
        Ok(())
    }
}

pub fn ident(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

/// Max-entry norm: max over entries of the complex modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn approx_eq(a: &CMat, b: &CMat, tol: f64) -> bool {
    a.nrows() == b.nrows() && a.ncols() == b.ncols() && max_abs(&(a - b)) <= tol
}

pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    hermiticity_defect(m) <= tol
}

pub fn trace_re(m: &CMat) -> f64 {
    m.trace().re
}

/// Eigendecomposition of a hermitian matrix by classical Jacobi iteration.
/// Returns eigenvalues (ascending) with orthonormal eigenvector columns.
pub fn eigh(m: &CMat) -> Result<(Vec<f64>, CMat), MatrixError> {
    let defect = hermiticity_defect(m);
    let scale = max_abs(m).max(1.0);
    if defect > 1e-9 * scale {
        return Err(MatrixError::NotHermitian(defect));
    }
    let n = m.nrows();
    let mut a = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v = ident(n);
    let stop = 1e-15 * scale;
    for _rotation in 0..(60 * n * n).max(200) {
        // largest off-diagonal modulus
        let mut best = (0usize, 0usize, 0.0f64);
        for p in 0..n {
            for q in (p + 1)..n {
                let r = a[(p, q)].norm();
                if r > best.2 {
                    best = (p, q, r);
                }
            }
        }
        let (p, q, r) = best;
        if r <= stop {
            break;
        }
        // unitary 2×2 rotation zeroing a[(p,q)]: factor out the phase, then
        // a real Jacobi rotation
        let alpha = a[(p, q)];
        let phase = alpha / Complex64::new(r, 0.0);
        let app = a[(p, p)].re;
        let aqq = a[(q, q)].re;
        // zeroing condition: r(1 − t²) + (aqq − app)·t = 0, stable root
        let tau = (aqq - app) / (2.0 * r);
        let t = if tau >= 0.0 {
            -1.0 / (tau + (1.0 + tau * tau).sqrt())
        } else {
            1.0 / (-tau + (1.0 + tau * tau).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        let mut u = ident(n);
        u[(p, p)] = Complex64::new(c, 0.0);
        u[(p, q)] = -phase * Complex64::new(s, 0.0);
        u[(q, p)] = phase.conj() * Complex64::new(s, 0.0);
        u[(q, q)] = Complex64::new(c, 0.0);
        a = u.adjoint() * a * &u;
        v *= &u;
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let values: Vec<f64> = pairs.iter().map(|&(l, _)| l).collect();
    let mut vecs = zeros(n);
    for (col, &(_, i)) in pairs.iter().enumerate() {
        vecs.set_column(col, &v.column(i));
    }
    // the decomposition is part of the contract: verify the reconstruction
    let mut recon = zeros(n);
    for (i, &l) in values.iter().enumerate() {
        let col = vecs.column(i);
        recon += &col * col.adjoint() * Complex64::new(l, 0.0);
    }
    let err = max_abs(&(recon - m));
    if err > 1e-10 * scale {
        return Err(MatrixError::ToleranceViolated(format!(
            "eigendecomposition failed to converge (defect {err:.3e})"
        )));
    }
    Ok((values, vecs))
}

/// Hermitian spectral decomposition with eigenvalues grouped into clusters
/// whose internal gaps are below `gap`. Returns (cluster value, projector)
/// pairs sorted by cluster value.
pub fn grouped_spectral(m: &CMat, gap: f64) -> Result<Vec<(f64, CMat)>, MatrixError> {
    let (values, vecs) = eigh(m)?;
    let n = m.nrows();
    let mut out: Vec<(f64, CMat)> = Vec::new();
    let mut k = 0;
    while k < n {
        let mut j = k;
        while j + 1 < n && values[j + 1] - values[j] <= gap {
            j += 1;
        }
        let mut proj = zeros(n);
        let mut sum = 0.0;
        for i in k..=j {
            let v = vecs.column(i);
            proj += &v * v.adjoint();
            sum += values[i];
        }
        out.push((sum / (j - k + 1) as f64, proj));
        k = j + 1;
    }
    Ok(out)
}

/// Eigenvalue floor on a Gram matrix corresponding to a singular-value
/// threshold `t`: squared, but never below the noise floor of the
/// eigensolver.
fn gram_floor(t: f64) -> f64 {
    (t * t).max(1e-12)
}

/// Right support RP[x]: the projector onto (ker x)⊥ = range(x*), via the
/// Gram matrix x*x.
pub fn right_support(x: &CMat, tol: f64) -> CMat {
    let gram = x.adjoint() * x;
    let (values, vecs) = eigh(&gram).expect("gram matrix is hermitian");
    let floor = gram_floor(tol);
    let mut p = zeros(x.ncols());
    for (i, &l) in values.iter().enumerate() {
        if l > floor {
            let v = vecs.column(i);
            p += &v * v.adjoint();
        }
    }
    p
}

/// Left support LP[x]: the projector onto range(x), via xx*.
pub fn left_support(x: &CMat, tol: f64) -> CMat {
    let gram = x * x.adjoint();
    let (values, vecs) = eigh(&gram).expect("gram matrix is hermitian");
    let floor = gram_floor(tol);
    let mut p = zeros(x.nrows());
    for (i, &l) in values.iter().enumerate() {
        if l > floor {
            let v = vecs.column(i);
            p += &v * v.adjoint();
        }
    }
    p
}

/// Projector onto { v | a v = 0 and b v = 0 }, via the hermitian sum of the
/// two Gram matrices.
pub fn joint_kernel_projector(a: &CMat, b: &CMat, tol: f64) -> CMat {
    let h = a.adjoint() * a + b.adjoint() * b;
    let (values, vecs) = eigh(&h).expect("gram sum is hermitian");
    let floor = gram_floor(tol);
    let n = a.ncols();
    let mut p = zeros(n);
    for (i, &l) in values.iter().enumerate() {
        if l <= floor {
            let v = vecs.column(i);
            p += &v * v.adjoint();
        }
    }
    p
}

/// Deterministic ordering key: entries rounded to a 1e-6 grid, row-major.
pub fn sort_key(m: &CMat) -> Vec<(i64, i64)> {
    m.iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}
