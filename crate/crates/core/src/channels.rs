//! Quantum channels as Kraus families: Choi matrix, canonical Kraus form,
//! Stinespring dilation, complementary (environment-side) output, composition
//! and application to states.
//!
//! Conventions fixed here:
//! * the environment initial state |ε⟩ is the first computational basis
//!   vector of H_C;
//! * dilations are built from the canonical Kraus form, so the environment
//!   dimension is minimal (the Choi rank);
//! * the B⊗C composite orders the system factor first.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{complete_to_unitary, eigh, kron, ComplexMatrix, FactorShape, DEFAULT_TOL};
use crate::states::{haar_unitary, DensityMatrix, PureState, SeededRng};

/// Choi eigenvalues at or below this are dropped when rebuilding the
/// canonical Kraus family.
const CHOI_EIG_FLOOR: f64 = 1e-12;

/// Trace-preserving completely positive map given by Kraus operators
/// Φ(ρ) = Σ_k M_k ρ M_k† with Σ_k M_k†M_k = 1.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
    tol: f64,
}

impl KrausChannel {
    /// Validation gate: equal operator shapes and completeness Σ M†M = 1
    /// within `tol`.
    pub fn new(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Invalid(
                "channel needs at least one Kraus operator".into(),
            ));
        }
        let d_out = kraus[0].rows();
        let d_in = kraus[0].cols();
        if kraus.iter().any(|m| m.rows() != d_out || m.cols() != d_in) {
            return Err(Error::Dim("Kraus operators must share one shape".into()));
        }
        let mut sum = ComplexMatrix::zeros(d_in, d_in);
        for m in &kraus {
            sum = &sum + &(&m.adjoint() * m);
        }
        let mut max_dev = 0.0f64;
        for i in 0..d_in {
            for j in 0..d_in {
                let target = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                let d = (sum.get(i, j) - target).norm();
                if d > max_dev {
                    max_dev = d;
                }
            }
        }
        if max_dev > tol {
            return Err(Error::NotTracePreserving { max_dev });
        }
        Ok(Self {
            kraus,
            d_in,
            d_out,
            tol,
        })
    }

    pub fn with_default_tol(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(kraus, DEFAULT_TOL)
    }

    /// The identity channel on a `dim`-dimensional system.
    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(dim)],
            d_in: dim,
            d_out: dim,
            tol: DEFAULT_TOL,
        }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_endomorphic(&self) -> bool {
        self.d_in == self.d_out
    }

    /// Φ(ρ) = Σ_k M_k ρ M_k†.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.d_in {
            return Err(Error::Dim(format!(
                "channel input dimension {} but state has dimension {}",
                self.d_in,
                rho.dim()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for m in &self.kraus {
            out = &out + &(&(m * rho.mat()) * &m.adjoint());
        }
        Ok(DensityMatrix::unchecked(
            out.hermitized(),
            FactorShape::new(vec![self.d_out])?,
            rho.tol().max(self.tol),
        ))
    }

    /// (1 ⊗ Φ) or (Φ ⊗ 1) on a bipartite state, acting on `acting_factor`.
    pub fn apply_extended(
        &self,
        rho_ab: &DensityMatrix,
        acting_factor: usize,
    ) -> Result<DensityMatrix> {
        let dims = rho_ab.shape().dims();
        if dims.len() != 2 {
            return Err(Error::Dim(format!(
                "expected a bipartite state, got {} factors",
                dims.len()
            )));
        }
        if acting_factor > 1 {
            return Err(Error::Invalid(format!(
                "acting factor must be 0 or 1, got {acting_factor}"
            )));
        }
        if dims[acting_factor] != self.d_in {
            return Err(Error::Dim(format!(
                "channel input dimension {} but factor {} has dimension {}",
                self.d_in, acting_factor, dims[acting_factor]
            )));
        }
        let bystander = ComplexMatrix::identity(dims[1 - acting_factor]);
        let mut out_dims = dims.to_vec();
        out_dims[acting_factor] = self.d_out;
        let total = out_dims.iter().product::<usize>();
        let mut out = ComplexMatrix::zeros(total, total);
        for m in &self.kraus {
            let ext = if acting_factor == 0 {
                kron(m, &bystander)
            } else {
                kron(&bystander, m)
            };
            out = &out + &(&(&ext * rho_ab.mat()) * &ext.adjoint());
        }
        Ok(DensityMatrix::unchecked(
            out.hermitized(),
            FactorShape::new(out_dims)?,
            rho_ab.tol().max(self.tol),
        ))
    }

    /// Choi operator (1 ⊗ Φ) applied to the unnormalized maximally entangled
    /// operator Σ_{ij} |i⟩⟨j| ⊗ Φ(|i⟩⟨j|); input factor first.
    pub fn choi(&self) -> ComplexMatrix {
        let (din, dout) = (self.d_in, self.d_out);
        let n = din * dout;
        let mut c = ComplexMatrix::zeros(n, n);
        for m in &self.kraus {
            for i in 0..din {
                for j in 0..din {
                    for r in 0..dout {
                        let a = m.get(r, i);
                        if a.norm_sqr() == 0.0 {
                            continue;
                        }
                        for s in 0..dout {
                            let row = i * dout + r;
                            let col = j * dout + s;
                            let v = c.get(row, col) + a * m.get(s, j).conj();
                            c.set(row, col, v);
                        }
                    }
                }
            }
        }
        c
    }

    /// Canonical Kraus form: one operator per Choi eigenvalue above the
    /// floor, pairwise orthogonal under the Hilbert-Schmidt inner product.
    /// Represents the same map.
    pub fn canonical(&self) -> KrausChannel {
        let c = self.choi();
        let (vals, vecs) = eigh(&c, 1e-8).expect("Choi matrix is Hermitian by construction");
        let (din, dout) = (self.d_in, self.d_out);
        let mut ops = Vec::new();
        for (k, &lambda) in vals.iter().enumerate() {
            if lambda <= CHOI_EIG_FLOOR {
                continue;
            }
            let w = lambda.sqrt();
            ops.push(ComplexMatrix::from_fn(dout, din, |r, i| {
                vecs.get(i * dout + r, k) * w
            }));
        }
        KrausChannel::new(ops, self.tol.max(1e-9)).expect("canonical family preserves the trace")
    }

    /// Environment-side output Φ̂(ρ) with entries Tr(M_i ρ M_j†) over the
    /// canonical Kraus family.
    pub fn complementary(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.d_in {
            return Err(Error::Dim(format!(
                "channel input dimension {} but state has dimension {}",
                self.d_in,
                rho.dim()
            )));
        }
        let can = self.canonical();
        let k = can.kraus.len();
        let products: Vec<ComplexMatrix> = can.kraus.iter().map(|m| m * rho.mat()).collect();
        let mut out = ComplexMatrix::zeros(k, k);
        for (i, product) in products.iter().enumerate() {
            for (j, m_j) in can.kraus.iter().enumerate() {
                // Tr(M_i ρ M_j†) = Σ_{a,b} (M_i ρ)[a,b] · conj(M_j[a,b])
                let mut s = C64::new(0.0, 0.0);
                for a in 0..self.d_out {
                    for b in 0..self.d_in {
                        s += product.get(a, b) * m_j.get(a, b).conj();
                    }
                }
                out.set(i, j, s);
            }
        }
        Ok(DensityMatrix::unchecked(
            out.hermitized(),
            FactorShape::new(vec![k])?,
            rho.tol().max(self.tol),
        ))
    }

    /// Stinespring dilation built from the canonical Kraus family
    /// {M_0, …, M_{K-1}}: a unitary U on H_B ⊗ H_C with dim(H_C) = K such
    /// that U(|x⟩ ⊗ |ε⟩) = Σ_k M_k|x⟩ ⊗ |k⟩, where |ε⟩ = |0⟩_C.
    pub fn stinespring(&self) -> Result<StinespringDilation> {
        if !self.is_endomorphic() {
            return Err(Error::Invalid(format!(
                "dilation requires an endomorphic channel, got {} -> {}",
                self.d_in, self.d_out
            )));
        }
        let can = self.canonical();
        let d = self.d_in;
        let k = can.kraus.len();
        let viso = ComplexMatrix::from_fn(d * k, d, |row, x| {
            let b = row / k;
            let c = row % k;
            can.kraus[c].get(b, x)
        });
        let w = complete_to_unitary(&viso, 1e-8)?;
        // Scatter: the isometry columns must sit at the |x⟩⊗|0⟩ positions.
        let mut u = ComplexMatrix::zeros(d * k, d * k);
        let mut next = d;
        for pos in 0..d * k {
            if pos % k == 0 {
                u.set_column(pos, &w.column(pos / k));
            } else {
                u.set_column(pos, &w.column(next));
                next += 1;
            }
        }
        let env_state = PureState::basis(FactorShape::new(vec![k])?, 0)?;
        Ok(StinespringDilation {
            u,
            sys_dim: d,
            env_dim: k,
            env_state,
        })
    }
}

/// Unitary realization of a channel on system ⊗ environment:
/// Φ(ρ) = Tr_C[U(ρ ⊗ |ε⟩⟨ε|)U†].
#[derive(Debug, Clone)]
pub struct StinespringDilation {
    u: ComplexMatrix,
    sys_dim: usize,
    env_dim: usize,
    env_state: PureState,
}

impl StinespringDilation {
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn env_state(&self) -> &PureState {
        &self.env_state
    }

    /// U(ρ ⊗ |ε⟩⟨ε|)U† on H_B ⊗ H_C.
    pub fn joint_output(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.sys_dim {
            return Err(Error::Dim(format!(
                "dilation system dimension {} but state has dimension {}",
                self.sys_dim,
                rho.dim()
            )));
        }
        let eps = self.env_state.to_density(rho.tol());
        let joint = kron(rho.mat(), eps.mat());
        let out = &(&self.u * &joint) * &self.u.adjoint();
        Ok(DensityMatrix::unchecked(
            out.hermitized(),
            FactorShape::new(vec![self.sys_dim, self.env_dim])?,
            rho.tol(),
        ))
    }

    /// Tr_C[U(ρ ⊗ |ε⟩⟨ε|)U†]; must agree with the Kraus application.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.joint_output(rho)?.reduce(&[0])
    }
}

/// Composition Ψ∘Φ with Kraus family {N_j M_k}.
pub fn compose(second: &KrausChannel, first: &KrausChannel) -> Result<KrausChannel> {
    if first.d_out() != second.d_in() {
        return Err(Error::Dim(format!(
            "cannot compose: first output {} but second input {}",
            first.d_out(),
            second.d_in()
        )));
    }
    let mut ops = Vec::with_capacity(first.kraus().len() * second.kraus().len());
    for n in second.kraus() {
        for m in first.kraus() {
            ops.push(n * m);
        }
    }
    KrausChannel::new(ops, first.tol().max(second.tol()))
}

/// Random channel on a `dim`-dimensional system with `kraus_count` operators:
/// slices of a Haar-random isometry H → H ⊗ C^kraus_count.
pub fn random_channel(dim: usize, kraus_count: usize, rng: &mut SeededRng) -> KrausChannel {
    assert!(
        dim >= 1 && kraus_count >= 1,
        "random_channel needs positive dims"
    );
    let u = haar_unitary(dim * kraus_count, rng);
    let ops: Vec<ComplexMatrix> = (0..kraus_count)
        .map(|c| ComplexMatrix::from_fn(dim, dim, |b, x| u.get(b * kraus_count + c, x)))
        .collect();
    KrausChannel::new(ops, DEFAULT_TOL).expect("isometry slices are trace preserving")
}
