//! Complex linear-algebra helpers shared by the algorithm crates.
//!
//! Thin layer over `nalgebra`: Hermitian eigendecompositions with a
//! deterministic ordering, the generalized eigenproblem for a Hermitian
//! pencil, and in-order Gram-Schmidt. All algorithm-facing code goes
//! through these helpers so tie-breaking and phase conventions are fixed
//! in exactly one place.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::CoreError;

pub type CMat = DMatrix<Complex64>;
pub type CVec = nalgebra::DVector<Complex64>;

/// Eigenvalue gap below which two eigenvalues are treated as tied and
/// ordered by their (phase-canonicalized) eigenvector entries instead.
const EIGEN_TIE_GAP: f64 = 1e-12;

/// Hermitian eigendecomposition with eigenvalues in ascending order.
///
/// Eigenvector phases are canonicalized (largest-magnitude entry made real
/// positive) and near-equal eigenvalues are ordered lexicographically by
/// eigenvector entries, so the output is a deterministic function of the
/// input bits.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: CMat,
}

/// Force exact Hermitian symmetry: `(A + A†)/2`.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).map(|z| z * Complex64::new(0.5, 0.0))
}

/// Max entrywise deviation from Hermitian symmetry.
pub fn hermitian_defect(a: &CMat) -> f64 {
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Rotate `v` in place so its largest-magnitude entry is real positive.
pub fn canonicalize_phase(v: &mut CVec) {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag + EIGEN_TIE_GAP {
            best_mag = m;
            best = i;
        }
    }
    if best_mag > 0.0 {
        let phase = v[best] / Complex64::new(best_mag, 0.0);
        let rot = phase.conj();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
}

fn lex_cmp(a: &CVec, b: &CVec) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for (x, y) in a.iter().zip(b.iter()) {
        match x.re.partial_cmp(&y.re).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            ord => return ord,
        }
        match x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// Eigendecomposition of a Hermitian matrix, ascending eigenvalue order.
pub fn hermitian_eigen(a: &CMat) -> Result<HermitianEigen, CoreError> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(CoreError::DimensionMismatch(format!(
            "eigen input must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let sym = hermitian_part(a);
    let eig = sym.symmetric_eigen();
    let mut cols: Vec<CVec> = (0..n).map(|i| {
        let mut c = eig.eigenvectors.column(i).into_owned();
        canonicalize_phase(&mut c);
        c
    }).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (li, lj) = (eig.eigenvalues[i], eig.eigenvalues[j]);
        if (li - lj).abs() < EIGEN_TIE_GAP {
            lex_cmp(&cols[i], &cols[j])
        } else {
            li.partial_cmp(&lj).unwrap()
        }
    });
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::numerical("eigen solver produced non-finite eigenvalues"));
    }
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &std::mem::replace(&mut cols[src], CVec::zeros(0)));
    }
    Ok(HermitianEigen { values, vectors })
}

/// Generalized eigendecomposition of the Hermitian pencil `(A, B)` with
/// `B` positive definite, eigenvalues ascending.
///
/// Solved through the Cholesky factor of `B`: with `B = L L†`, the pencil
/// reduces to the ordinary Hermitian problem on `L⁻¹ A L⁻†`, and the
/// generalized eigenvectors are `L⁻† y`. Columns are normalized to unit
/// Euclidean length.
pub fn generalized_hermitian_eigen(a: &CMat, b: &CMat) -> Result<HermitianEigen, CoreError> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(CoreError::DimensionMismatch(
            "pencil matrices must be square with equal size".into(),
        ));
    }
    let chol = hermitian_part(b)
        .cholesky()
        .ok_or_else(|| CoreError::numerical("pencil matrix B is not positive definite"))?;
    let l = chol.l();
    // L⁻¹ A L⁻†, built by two triangular solves.
    let linv_a = l.clone().solve_lower_triangular(a).ok_or_else(|| {
        CoreError::numerical("singular Cholesky factor in generalized eigen")
    })?;
    let reduced = l
        .clone()
        .solve_lower_triangular(&linv_a.adjoint())
        .ok_or_else(|| CoreError::numerical("singular Cholesky factor in generalized eigen"))?
        .adjoint();
    let inner = hermitian_eigen(&reduced)?;
    // Back-substitute: x = L⁻† y, then renormalize.
    let mut vectors = CMat::zeros(n, n);
    for i in 0..n {
        let y = inner.vectors.column(i).into_owned();
        let mut x = l
            .adjoint()
            .solve_upper_triangular(&y)
            .ok_or_else(|| CoreError::numerical("back substitution failed in generalized eigen"))?;
        let norm = x.norm();
        if norm > 0.0 {
            x /= Complex64::new(norm, 0.0);
        }
        canonicalize_phase(&mut x);
        vectors.set_column(i, &x);
    }
    Ok(HermitianEigen {
        values: inner.values,
        vectors,
    })
}

/// In-order Gram-Schmidt orthonormalization of the columns of `m`.
///
/// Columns are processed left to right, so earlier streams keep their
/// direction and later ones are projected out against them. A column that
/// collapses below `1e-12` after projection is replaced by the next
/// canonical basis vector orthogonal to the span.
pub fn gram_schmidt_columns(m: &mut CMat) {
    let (rows, cols) = m.shape();
    for j in 0..cols {
        for i in 0..j {
            let qi = m.column(i).into_owned();
            let proj: Complex64 = qi.dotc(&m.column(j));
            let update = qi * proj;
            let mut col = m.column_mut(j);
            col -= update;
        }
        let norm = m.column(j).norm();
        if norm > 1e-12 {
            let mut col = m.column_mut(j);
            col /= Complex64::new(norm, 0.0);
        } else {
            // Degenerate column: fall back to the first basis vector with a
            // nonzero residual against the existing span.
            let mut replaced = false;
            for basis in 0..rows {
                let mut e = CVec::zeros(rows);
                e[basis] = Complex64::new(1.0, 0.0);
                for i in 0..j {
                    let qi = m.column(i).into_owned();
                    let proj: Complex64 = qi.dotc(&e);
                    e -= qi * proj;
                }
                let n = e.norm();
                if n > 1e-6 {
                    e /= Complex64::new(n, 0.0);
                    m.set_column(j, &e);
                    replaced = true;
                    break;
                }
            }
            if !replaced {
                // Span already fills the space; leave a zero column.
                m.column_mut(j).fill(Complex64::new(0.0, 0.0));
            }
        }
    }
}

/// Normalize every column of `m` to unit Euclidean norm, returning the
/// original norms. Zero columns are left untouched and report norm 0.
pub fn normalize_columns(m: &mut CMat) -> Vec<f64> {
    let mut norms = Vec::with_capacity(m.ncols());
    for j in 0..m.ncols() {
        let norm = m.column(j).norm();
        if norm > 0.0 {
            let mut col = m.column_mut(j);
            col /= Complex64::new(norm, 0.0);
        }
        norms.push(norm);
    }
    norms
}

/// Real part of the quadratic form `v† M v` (exact for Hermitian `M`).
pub fn quadratic_form(m: &CMat, v: &CVec) -> f64 {
    let mv = m * v;
    v.dotc(&mv).re
}

/// `x x†` rank-one outer product.
pub fn outer(x: &CVec) -> CMat {
    x * x.adjoint()
}

/// Identity matrix shorthand.
pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}
