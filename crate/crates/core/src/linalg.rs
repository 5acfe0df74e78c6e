//! Dense complex linear algebra at desk scale.
//!
//! Everything operates on small (dim ≤ ~100) row-major matrices of
//! `Complex64`. Routines are chosen for accuracy over speed: Hermitian
//! eigendecomposition uses cyclic Jacobi rotations and unitary completion
//! uses repeated Gram-Schmidt passes. All values are immutable after
//! construction and every operation is a pure function.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default validation tolerance used across the crate.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 64;

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "({:+.4}{:+.4}i) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Build from row-major data, rejecting NaN/Inf entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Invalid("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dim(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_parts(rows, cols, vec![C64::new(0.0, 0.0); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_parts(rows, cols, data)
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Invalid("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dim("ragged rows in matrix literal".into()));
        }
        Self::new(rows.len(), cols, rows.iter().flatten().copied().collect())
    }

    pub fn from_columns(cols: &[Vec<C64>]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::Invalid("matrix needs at least one column".into()));
        }
        let rows = cols[0].len();
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::Dim("ragged columns in matrix literal".into()));
        }
        Ok(Self::from_fn(rows, cols.len(), |i, j| cols[j][i]))
    }

    /// Diagonal matrix from real entries.
    pub fn diag_real(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, C64::new(x, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        assert_eq!(col.len(), self.rows, "column length mismatch");
        for (i, &z) in col.iter().enumerate() {
            self.set(i, j, z);
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self::from_parts(
            self.rows,
            self.cols,
            self.data.iter().map(|z| z.conj()).collect(),
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scaled(&self, z: C64) -> Self {
        Self::from_parts(
            self.rows,
            self.cols,
            self.data.iter().map(|w| w * z).collect(),
        )
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// (m + m†)/2; removes roundoff asymmetry from a nominally Hermitian matrix.
    pub fn hermitized(&self) -> Self {
        assert!(self.is_square(), "hermitized needs a square matrix");
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Largest entry of |a - b|; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "add: shape mismatch"
        );
        ComplexMatrix::from_parts(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl std::ops::Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "sub: shape mismatch"
        );
        ComplexMatrix::from_parts(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl std::ops::Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "mul: inner dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Ordered subsystem dimensions annotating a tensor-product space.
///
/// The leftmost factor is the most significant index: a basis vector of the
/// composite space with per-factor indices (i₀, i₁, …) sits at flat index
/// i₀·d₁·d₂·… + i₁·d₂·… + ….
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorShape {
    dims: Vec<usize>,
}

impl FactorShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Invalid(
                "factor shape needs at least one factor".into(),
            ));
        }
        if dims.contains(&0) {
            return Err(Error::Invalid("factor dimensions must be positive".into()));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }
}

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

pub fn basis_vec(dim: usize, index: usize) -> Vec<C64> {
    assert!(index < dim, "basis index out of range");
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[index] = C64::new(1.0, 0.0);
    v
}

pub fn vec_inner(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len(), "inner product length mismatch");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_kron(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Outer product |u⟩⟨v|.
pub fn outer(u: &[C64], v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
}

/// Subtract from `v` its components along each (orthonormal) column in `cols`.
pub(crate) fn project_out(cols: &[Vec<C64>], v: &mut [C64]) {
    for c in cols {
        let ov = vec_inner(c, v);
        for (vi, ci) in v.iter_mut().zip(c) {
            *vi -= ov * ci;
        }
    }
}

/// Best orthonormal complement direction to `cols` among the standard basis,
/// after two Gram-Schmidt passes. Panics if `cols` already spans the space.
pub(crate) fn complement_direction(cols: &[Vec<C64>], dim: usize) -> Vec<C64> {
    let mut best: Option<(f64, Vec<C64>)> = None;
    for i in 0..dim {
        let mut w = basis_vec(dim, i);
        project_out(cols, &mut w);
        project_out(cols, &mut w);
        let nrm = vec_norm(&w);
        if best.as_ref().is_none_or(|(b, _)| nrm > *b) {
            best = Some((nrm, w));
        }
    }
    let (nrm, mut w) = best.expect("dimension must be positive");
    assert!(nrm > 1e-8, "no orthonormal complement direction left");
    let inv = C64::new(1.0 / nrm, 0.0);
    for z in w.iter_mut() {
        *z *= inv;
    }
    w
}

// ---------------------------------------------------------------------------
// Tensor-product operations
// ---------------------------------------------------------------------------

/// Kronecker product a ⊗ b.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for ia in 0..ra {
        for ja in 0..ca {
            let z = a.get(ia, ja);
            if z.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..rb {
                for jb in 0..cb {
                    out.set(ia * rb + ib, ja * cb + jb, z * b.get(ib, jb));
                }
            }
        }
    }
    out
}

fn factor_strides(dims: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let mut stride = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    stride
}

/// Flat offsets contributed by each joint index of the listed factors.
fn factor_offsets(factors: &[usize], dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let total: usize = factors.iter().map(|&f| dims[f]).product();
    let mut out = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut off = 0usize;
        for &f in factors.iter().rev() {
            off += (rem % dims[f]) * strides[f];
            rem /= dims[f];
        }
        out.push(off);
    }
    out
}

/// Partial trace over the factors NOT listed in `keep`; kept factors retain
/// their original relative order. Tr(result) = Tr(m).
pub fn partial_trace(
    m: &ComplexMatrix,
    shape: &FactorShape,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let n = shape.total_dim();
    if !m.is_square() || m.rows() != n {
        return Err(Error::Dim(format!(
            "matrix is {}x{} but factor shape {:?} implies dimension {}",
            m.rows(),
            m.cols(),
            shape.dims(),
            n
        )));
    }
    let nf = shape.num_factors();
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::Invalid(
            "partial trace must keep at least one factor".into(),
        ));
    }
    if *keep.last().unwrap() >= nf {
        return Err(Error::Invalid(format!(
            "factor index {} out of range for {} factors",
            keep.last().unwrap(),
            nf
        )));
    }
    let traced: Vec<usize> = (0..nf).filter(|f| !keep.contains(f)).collect();
    let dims = shape.dims();
    let strides = factor_strides(dims);
    let koff = factor_offsets(&keep, dims, &strides);
    let toff = factor_offsets(&traced, dims, &strides);
    let dk = koff.len();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut s = C64::new(0.0, 0.0);
            for t in &toff {
                s += m.get(koff[a] + t, koff[b] + t);
            }
            out.set(a, b, s);
        }
    }
    Ok(out)
}

/// Reorder tensor factors: new factor k is old factor `perm[k]`.
pub fn permute_factors(
    m: &ComplexMatrix,
    shape: &FactorShape,
    perm: &[usize],
) -> Result<ComplexMatrix> {
    let n = shape.total_dim();
    if !m.is_square() || m.rows() != n {
        return Err(Error::Dim("matrix does not match factor shape".into()));
    }
    let nf = shape.num_factors();
    let mut seen = vec![false; nf];
    if perm.len() != nf
        || perm
            .iter()
            .any(|&p| p >= nf || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::Invalid("not a permutation of factor indices".into()));
    }
    let dims = shape.dims();
    let strides = factor_strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    // Map each new flat index back to the old flat index.
    let mut index_map = vec![0usize; n];
    for (new_flat, slot) in index_map.iter_mut().enumerate() {
        let mut rem = new_flat;
        let mut off = 0usize;
        for k in (0..nf).rev() {
            off += (rem % new_dims[k]) * strides[perm[k]];
            rem /= new_dims[k];
        }
        *slot = off;
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        m.get(index_map[i], index_map[j])
    }))
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic Jacobi)
// ---------------------------------------------------------------------------

/// Eigendecomposition of a Hermitian matrix: h = V diag(λ) V† with eigenvalues
/// sorted in descending order and V unitary to numerical precision.
///
/// `tol` gates the Hermiticity check (max |h - h†| entry).
pub fn eigh(h: &ComplexMatrix, tol: f64) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = h.rows();
    if !h.is_square() {
        return Err(Error::Dim(format!(
            "eigh needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let mut max_asym = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let d = (h.get(i, j) - h.get(j, i).conj()).norm();
            if d > max_asym {
                max_asym = d;
            }
        }
    }
    if max_asym > tol {
        return Err(Error::NotHermitian { max_asym });
    }

    let mut a = h.hermitized();
    let mut v = ComplexMatrix::identity(n);
    if n > 1 {
        let stop = 1e-14 * a.frobenius().max(1.0);
        for _ in 0..MAX_JACOBI_SWEEPS {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.get(p, q).norm_sqr();
                }
            }
            if off.sqrt() <= stop {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&x, &y| diag[y].partial_cmp(&diag[x]).unwrap().then(x.cmp(&y)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    // Phase convention: rotate each eigenvector so its largest-magnitude
    // entry is real positive. The accumulated Jacobi phase is a gauge and
    // would otherwise jitter between nearly identical inputs.
    for j in 0..n {
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for i in 0..n {
            let mag = eigenvectors.get(i, j).norm();
            if mag > best_mag + 1e-14 {
                best_mag = mag;
                best = i;
            }
        }
        if best_mag > 0.0 {
            let z = eigenvectors.get(best, j);
            let phase = (z / best_mag).conj();
            for i in 0..n {
                let w = eigenvectors.get(i, j) * phase;
                eigenvectors.set(i, j, w);
            }
        }
    }
    Ok((eigenvalues, eigenvectors))
}

/// One Jacobi rotation zeroing a(p,q): a ← J†aJ, v ← vJ with
/// J = diag-phase × real Givens rotation in the (p,q) plane.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.rows();
    let apq = a.get(p, q);
    let r = apq.norm();
    if r <= f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e_neg = phase.conj();
    let cs = C64::new(c, 0.0);
    // Column update: a ← a·J.
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * cs - akq * e_neg * s);
        a.set(k, q, akp * s + akq * e_neg * c);
    }
    // Row update: a ← J†·a.
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * cs - aqk * phase * s);
        a.set(q, k, apk * s + aqk * phase * c);
    }
    // Accumulate eigenvectors: v ← v·J.
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * cs - vkq * e_neg * s);
        v.set(k, q, vkp * s + vkq * e_neg * c);
    }
}

// ---------------------------------------------------------------------------
// Unitary completion
// ---------------------------------------------------------------------------

/// Extend a matrix with orthonormal columns to a square unitary whose first
/// `cols` columns equal `v` exactly. Remaining columns come from greedy
/// Gram-Schmidt over the standard basis.
pub fn complete_to_unitary(v: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let m = v.rows();
    let k = v.cols();
    if k > m {
        return Err(Error::Dim(format!(
            "cannot complete a {}x{} matrix: more columns than rows",
            m, k
        )));
    }
    let gram = &v.adjoint() * v;
    let mut max_dev = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let target = if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            let d = (gram.get(i, j) - target).norm();
            if d > max_dev {
                max_dev = d;
            }
        }
    }
    if max_dev > tol {
        return Err(Error::NotIsometric { max_dev });
    }
    let mut cols: Vec<Vec<C64>> = (0..k).map(|j| v.column(j)).collect();
    while cols.len() < m {
        cols.push(complement_direction(&cols, m));
    }
    ComplexMatrix::from_columns(&cols)
}
