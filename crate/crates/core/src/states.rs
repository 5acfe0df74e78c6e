//! Density matrices, pure states, purification, seeded sampling, and state
//! distances.
//!
//! Purifications place the reference factor FIRST: `purify` maps ρ on H to
//! |u_ρ⟩ ∈ H_ref ⊗ H with dim(H_ref) = dim(H). The environment-side
//! constructions in [`crate::channels`] use the opposite order internally and
//! bridge it with an explicit factor swap where needed.

use num_complex::Complex64 as C64;
use rand::Rng as _;
use rand::SeedableRng as _;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    self, basis_vec, eigh, outer, vec_kron, vec_norm, ComplexMatrix, FactorShape, DEFAULT_TOL,
};

/// Eigenvalues at or below this are treated as exact zeros when building
/// purifications (avoids square roots of roundoff negatives).
pub const PURIFY_EIG_FLOOR: f64 = 1e-12;

/// Hermitian, positive-semidefinite, unit-trace operator with an attached
/// subsystem-dimension list.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    shape: FactorShape,
    tol: f64,
}

impl DensityMatrix {
    /// Validation gate: Hermiticity, positivity and unit trace within `tol`.
    pub fn new(mat: ComplexMatrix, shape: FactorShape, tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Dim(format!(
                "density matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        if mat.rows() != shape.total_dim() {
            return Err(Error::Dim(format!(
                "matrix dimension {} does not match factor shape {:?}",
                mat.rows(),
                shape.dims()
            )));
        }
        let mut max_asym = 0.0f64;
        for i in 0..mat.rows() {
            for j in 0..mat.cols() {
                let d = (mat.get(i, j) - mat.get(j, i).conj()).norm();
                if d > max_asym {
                    max_asym = d;
                }
            }
        }
        if max_asym > tol {
            return Err(Error::NotHermitian { max_asym });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let (vals, _) = eigh(&mat, tol)?;
        let min_eig = vals.last().copied().unwrap_or(0.0);
        if min_eig < -tol {
            return Err(Error::NotPsd { min_eig });
        }
        Ok(Self { mat, shape, tol })
    }

    pub fn with_default_tol(mat: ComplexMatrix, shape: FactorShape) -> Result<Self> {
        Self::new(mat, shape, DEFAULT_TOL)
    }

    /// Constructor for operator outputs that are valid by construction
    /// (partial traces, Kraus applications, unitary conjugations of valid
    /// states). Skips the eigendecomposition-based validation.
    pub(crate) fn unchecked(mat: ComplexMatrix, shape: FactorShape, tol: f64) -> Self {
        debug_assert_eq!(mat.rows(), shape.total_dim());
        Self { mat, shape, tol }
    }

    /// Re-run the full validation gate.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.mat.clone(), self.shape.clone(), self.tol).map(|_| ())
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn shape(&self) -> &FactorShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Reduced state on the kept factors (partial trace over the rest).
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let reduced = linalg::partial_trace(&self.mat, &self.shape, keep)?;
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let dims: Vec<usize> = keep.iter().map(|&f| self.shape.dims()[f]).collect();
        Ok(DensityMatrix::unchecked(
            reduced.hermitized(),
            FactorShape::new(dims)?,
            self.tol,
        ))
    }

    /// Same operator with the factors regrouped under a new shape.
    pub fn reshaped(&self, shape: FactorShape) -> Result<DensityMatrix> {
        if shape.total_dim() != self.dim() {
            return Err(Error::Dim(format!(
                "shape {:?} does not match dimension {}",
                shape.dims(),
                self.dim()
            )));
        }
        Ok(DensityMatrix::unchecked(self.mat.clone(), shape, self.tol))
    }
}

/// Unit vector with an attached subsystem-dimension list.
#[derive(Debug, Clone)]
pub struct PureState {
    vec: Vec<C64>,
    shape: FactorShape,
}

impl PureState {
    pub fn new(vec: Vec<C64>, shape: FactorShape) -> Result<Self> {
        if vec.len() != shape.total_dim() {
            return Err(Error::Dim(format!(
                "vector length {} does not match factor shape {:?}",
                vec.len(),
                shape.dims()
            )));
        }
        if vec.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("state vector entries must be finite".into()));
        }
        let nrm = vec_norm(&vec);
        if (nrm - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!(
                "state vector norm is {nrm:.15}, expected 1"
            )));
        }
        Ok(Self { vec, shape })
    }

    /// Computational basis state |index⟩.
    pub fn basis(shape: FactorShape, index: usize) -> Result<Self> {
        let dim = shape.total_dim();
        if index >= dim {
            return Err(Error::Invalid(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        Ok(Self {
            vec: basis_vec(dim, index),
            shape,
        })
    }

    pub fn vec(&self) -> &[C64] {
        &self.vec
    }

    pub fn shape(&self) -> &FactorShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    /// |ψ⟩⟨ψ| as a density matrix.
    pub fn to_density(&self, tol: f64) -> DensityMatrix {
        DensityMatrix::unchecked(outer(&self.vec, &self.vec), self.shape.clone(), tol)
    }
}

/// Deterministic, seedable random stream (counter-based ChaCha core).
#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha12Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Standard complex Gaussian: (x + iy)/√2 with x, y ~ N(0,1).
    pub fn complex_normal(&mut self) -> C64 {
        let re: f64 = self.inner.sample(StandardNormal);
        let im: f64 = self.inner.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Purification |u_ρ⟩ = Σ_j √λ_j |j⟩ ⊗ |λ_j⟩ ∈ H_ref ⊗ H, reference factor
/// first; tracing out factor 0 reproduces ρ. Eigenvalues at or below
/// [`PURIFY_EIG_FLOOR`] are dropped.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let d = rho.dim();
    let (vals, vecs) = eigh(rho.mat(), rho.tol()).expect("validated density matrix is Hermitian");
    let mut u = vec![C64::new(0.0, 0.0); d * d];
    for (j, &lambda) in vals.iter().enumerate() {
        if lambda <= PURIFY_EIG_FLOOR {
            continue;
        }
        let w = lambda.sqrt();
        for r in 0..d {
            u[j * d + r] = vecs.get(r, j) * w;
        }
    }
    let nrm = vec_norm(&u);
    let inv = C64::new(1.0 / nrm, 0.0);
    for z in u.iter_mut() {
        *z *= inv;
    }
    let shape = FactorShape::new(vec![d, d]).expect("positive dims");
    PureState::new(u, shape).expect("normalized purification")
}

/// Haar-distributed random unitary: complex Gaussian matrix orthonormalized
/// column by column (Gram-Schmidt QR has a positive-real R diagonal, so no
/// extra phase fix is required).
pub fn haar_unitary(dim: usize, rng: &mut SeededRng) -> ComplexMatrix {
    assert!(dim >= 1, "haar_unitary needs dim >= 1");
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut w: Vec<C64> = (0..dim).map(|_| rng.complex_normal()).collect();
        linalg::project_out(&cols, &mut w);
        linalg::project_out(&cols, &mut w);
        let nrm = vec_norm(&w);
        if nrm < 1e-8 {
            continue; // measure-zero degenerate draw
        }
        let inv = C64::new(1.0 / nrm, 0.0);
        for z in w.iter_mut() {
            *z *= inv;
        }
        cols.push(w);
    }
    ComplexMatrix::from_columns(&cols).expect("non-empty column set")
}

/// Random pure state: normalized complex Gaussian vector.
pub fn random_pure(shape: FactorShape, rng: &mut SeededRng) -> PureState {
    let dim = shape.total_dim();
    loop {
        let mut v: Vec<C64> = (0..dim).map(|_| rng.complex_normal()).collect();
        let nrm = vec_norm(&v);
        if nrm < 1e-8 {
            continue;
        }
        let inv = C64::new(1.0 / nrm, 0.0);
        for z in v.iter_mut() {
            *z *= inv;
        }
        return PureState::new(v, shape).expect("normalized vector");
    }
}

/// Random mixed state of the requested rank: normalized Wishart GG†/Tr with
/// G a dim×rank complex Gaussian matrix.
pub fn random_density(dim: usize, rank: usize, rng: &mut SeededRng) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::Invalid(format!(
            "rank {rank} out of range 1..={dim}"
        )));
    }
    let g = ComplexMatrix::from_fn(dim, rank, |_, _| rng.complex_normal());
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    let rho = w.scaled(C64::new(1.0 / tr, 0.0)).hermitized();
    DensityMatrix::new(rho, FactorShape::new(vec![dim])?, DEFAULT_TOL)
}

/// Trace distance ½‖a − b‖₁ = ½ Σ |eigenvalues of a − b|.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Dim(format!(
            "trace distance between dim {} and dim {}",
            a.dim(),
            b.dim()
        )));
    }
    let diff = (a.mat() - b.mat()).hermitized();
    let (vals, _) = eigh(&diff, 1.0).expect("hermitized difference");
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

/// Convenience: |u⟩⊗|v⟩ as a pure state on the concatenated factors.
pub fn tensor_pure(a: &PureState, b: &PureState) -> PureState {
    let vec = vec_kron(a.vec(), b.vec());
    let dims: Vec<usize> = a
        .shape()
        .dims()
        .iter()
        .chain(b.shape().dims())
        .copied()
        .collect();
    PureState::new(vec, FactorShape::new(dims).expect("positive dims"))
        .expect("product of unit vectors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::partial_trace;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn qubit_shape() -> FactorShape {
        FactorShape::new(vec![2]).unwrap()
    }

    #[test]
    fn make_density_accepts_maximally_mixed() {
        let rho = DensityMatrix::new(
            ComplexMatrix::diag_real(&[0.5, 0.5]),
            qubit_shape(),
            DEFAULT_TOL,
        );
        assert!(rho.is_ok());
    }

    #[test]
    fn make_density_accepts_diagonal_mixture() {
        assert!(DensityMatrix::new(
            ComplexMatrix::diag_real(&[0.7, 0.3]),
            qubit_shape(),
            DEFAULT_TOL
        )
        .is_ok());
    }

    #[test]
    fn make_density_rejects_bad_trace() {
        match DensityMatrix::new(
            ComplexMatrix::diag_real(&[0.7, 0.4]),
            qubit_shape(),
            DEFAULT_TOL,
        ) {
            Err(Error::TraceNotOne { trace }) => assert!((trace - 1.1).abs() < 1e-12),
            other => panic!("expected TraceNotOne, got {other:?}"),
        }
    }

    #[test]
    fn make_density_rejects_negative_eigenvalue() {
        let m = ComplexMatrix::diag_real(&[1.2, -0.2]);
        assert!(matches!(
            DensityMatrix::new(m, qubit_shape(), DEFAULT_TOL),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn make_density_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.1, 0.0)],
            vec![c(0.3, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            DensityMatrix::new(m, qubit_shape(), DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn purify_pure_input() {
        let rho = DensityMatrix::new(
            ComplexMatrix::diag_real(&[1.0, 0.0]),
            qubit_shape(),
            DEFAULT_TOL,
        )
        .unwrap();
        let u = purify(&rho);
        let reduced = partial_trace(u.to_density(DEFAULT_TOL).mat(), u.shape(), &[1]).unwrap();
        assert!(reduced.max_abs_diff(rho.mat()) < 1e-12);
    }

    #[test]
    fn purify_maximally_mixed_is_maximally_entangled() {
        let rho = DensityMatrix::new(
            ComplexMatrix::diag_real(&[0.5, 0.5]),
            qubit_shape(),
            DEFAULT_TOL,
        )
        .unwrap();
        let u = purify(&rho);
        let reduced = partial_trace(u.to_density(DEFAULT_TOL).mat(), u.shape(), &[1]).unwrap();
        assert!(reduced.max_abs_diff(rho.mat()) < 1e-12);
        // Both marginals maximally mixed.
        let ref_marginal = partial_trace(u.to_density(DEFAULT_TOL).mat(), u.shape(), &[0]).unwrap();
        assert!(ref_marginal.max_abs_diff(&ComplexMatrix::diag_real(&[0.5, 0.5])) < 1e-12);
    }

    #[test]
    fn purify_schmidt_coefficients() {
        let rho = DensityMatrix::new(
            ComplexMatrix::diag_real(&[0.9, 0.1]),
            qubit_shape(),
            DEFAULT_TOL,
        )
        .unwrap();
        let u = purify(&rho);
        let mut weights: Vec<f64> = (0..2)
            .map(|j| (0..2).map(|r| u.vec()[j * 2 + r].norm_sqr()).sum::<f64>())
            .collect();
        weights.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((weights[0] - 0.9).abs() < 1e-12);
        assert!((weights[1] - 0.1).abs() < 1e-12);
        let reduced = partial_trace(u.to_density(DEFAULT_TOL).mat(), u.shape(), &[1]).unwrap();
        assert!(reduced.max_abs_diff(rho.mat()) < 1e-12);
    }

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        let mut rng = SeededRng::new(42);
        let u = haar_unitary(4, &mut rng);
        let g = &u.adjoint() * &u;
        assert!(g.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
        let mut rng2 = SeededRng::new(42);
        let u2 = haar_unitary(4, &mut rng2);
        assert_eq!(u.max_abs_diff(&u2), 0.0);
    }

    #[test]
    fn haar_unitary_dim_one_is_a_phase() {
        let mut rng = SeededRng::new(7);
        let u = haar_unitary(1, &mut rng);
        assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_density_rank_one_is_pure() {
        let mut rng = SeededRng::new(3);
        let rho = random_density(2, 1, &mut rng).unwrap();
        let (vals, _) = eigh(rho.mat(), DEFAULT_TOL).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn random_density_full_rank_has_positive_spectrum() {
        let mut rng = SeededRng::new(5);
        let rho = random_density(4, 4, &mut rng).unwrap();
        let (vals, _) = eigh(rho.mat(), DEFAULT_TOL).unwrap();
        assert!(vals.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn random_density_is_deterministic() {
        let a = random_density(3, 2, &mut SeededRng::new(11)).unwrap();
        let b = random_density(3, 2, &mut SeededRng::new(11)).unwrap();
        assert_eq!(a.mat().max_abs_diff(b.mat()), 0.0);
    }

    #[test]
    fn random_density_rejects_bad_rank() {
        assert!(random_density(2, 0, &mut SeededRng::new(0)).is_err());
        assert!(random_density(2, 3, &mut SeededRng::new(0)).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let mixed = DensityMatrix::new(
            ComplexMatrix::diag_real(&[0.5, 0.5]),
            qubit_shape(),
            DEFAULT_TOL,
        )
        .unwrap();
        let zero = DensityMatrix::new(
            ComplexMatrix::diag_real(&[1.0, 0.0]),
            qubit_shape(),
            DEFAULT_TOL,
        )
        .unwrap();
        let one = DensityMatrix::new(
            ComplexMatrix::diag_real(&[0.0, 1.0]),
            qubit_shape(),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(trace_distance(&mixed, &mixed).unwrap() < 1e-14);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        assert!((trace_distance(&mixed, &zero).unwrap() - 0.5).abs() < 1e-12);
    }
}
