//! Von Neumann entropy (in bits), coherent information by two independent
//! routes, and entropy-inequality gaps.
//!
//! The coherent information of a state ρ through a channel Φ is
//! I_c(ρ,Φ) = S(Φ(ρ)) − S((1⊗Φ)|u_ρ⟩⟨u_ρ|) for any purification |u_ρ⟩ of ρ,
//! and satisfies I_c(ρ,Φ) ≤ S(ρ). The same number is S(Φ(ρ)) − S(Φ̂(ρ)) with
//! Φ̂ the environment-side (complementary) output; both routes are provided
//! and cross-validate each other.

use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::eigh;
use crate::states::{purify, DensityMatrix};

/// Eigenvalues at or below this contribute nothing to entropies (0·log 0 = 0).
pub const ENTROPY_EIG_FLOOR: f64 = 1e-12;

/// Which route computes the exchange-entropy term of the coherent information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoherentMethod {
    /// S((1⊗Φ)|u_ρ⟩⟨u_ρ|) over a purification of ρ.
    Purification,
    /// S(Φ̂(ρ)) over the canonical environment-side output.
    Complementary,
}

/// All entropies entering one coherent-information evaluation, in bits.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub s_rho: f64,
    pub s_output: f64,
    pub s_joint_or_exchange: f64,
    pub coherent_info: f64,
    pub gap_to_bound: f64,
    pub method: CoherentMethod,
}

/// S(ρ) = −Σ λ log₂ λ in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    let (vals, _) =
        eigh(rho.mat(), rho.tol().max(1e-9)).expect("validated density matrix is Hermitian");
    let s: f64 = vals
        .iter()
        .filter(|&&v| v > ENTROPY_EIG_FLOOR)
        .map(|&v| -v * v.log2())
        .sum();
    s + 0.0 // never report a negative zero
}

/// Coherent information I_c(ρ,Φ) with the full entropy breakdown.
pub fn coherent_info(
    rho: &DensityMatrix,
    phi: &KrausChannel,
    method: CoherentMethod,
) -> Result<EntropyReport> {
    if !phi.is_endomorphic() {
        return Err(Error::Invalid(format!(
            "coherent information requires an endomorphic channel, got {} -> {}",
            phi.d_in(),
            phi.d_out()
        )));
    }
    if rho.dim() != phi.d_in() {
        return Err(Error::Dim(format!(
            "channel input dimension {} but state has dimension {}",
            phi.d_in(),
            rho.dim()
        )));
    }
    let s_rho = vn_entropy(rho);
    let s_output = vn_entropy(&phi.apply(rho)?);
    let s_joint_or_exchange = match method {
        CoherentMethod::Purification => {
            let u = purify(rho).to_density(rho.tol());
            vn_entropy(&phi.apply_extended(&u, 1)?)
        }
        CoherentMethod::Complementary => vn_entropy(&phi.complementary(rho)?),
    };
    let coherent_info = s_output - s_joint_or_exchange;
    let gap_to_bound = s_rho - coherent_info;
    Ok(EntropyReport {
        s_rho,
        s_output,
        s_joint_or_exchange,
        coherent_info,
        gap_to_bound,
        method,
    })
}

/// Araki-Lieb gap S(ρ_BC) − |S(ρ_B) − S(ρ_C)| of a bipartite state; zero
/// exactly when the inequality saturates.
pub fn check_araki_lieb(rho_bc: &DensityMatrix) -> Result<f64> {
    if rho_bc.shape().num_factors() != 2 {
        return Err(Error::Dim(format!(
            "Araki-Lieb gap needs a bipartite state, got {} factors",
            rho_bc.shape().num_factors()
        )));
    }
    let s_bc = vn_entropy(rho_bc);
    let s_b = vn_entropy(&rho_bc.reduce(&[0])?);
    let s_c = vn_entropy(&rho_bc.reduce(&[1])?);
    Ok(s_bc - (s_b - s_c).abs())
}

/// Strong-subadditivity gap S(ρ_AB) + S(ρ_BC) − S(ρ_ABC) − S(ρ_B) of a
/// tripartite state; zero exactly in the saturating case.
pub fn check_ssa(rho_abc: &DensityMatrix) -> Result<f64> {
    if rho_abc.shape().num_factors() != 3 {
        return Err(Error::Dim(format!(
            "SSA gap needs a tripartite state, got {} factors",
            rho_abc.shape().num_factors()
        )));
    }
    let s_ab = vn_entropy(&rho_abc.reduce(&[0, 1])?);
    let s_bc = vn_entropy(&rho_abc.reduce(&[1, 2])?);
    let s_b = vn_entropy(&rho_abc.reduce(&[1])?);
    let s_abc = vn_entropy(rho_abc);
    Ok(s_ab + s_bc - s_abc - s_b)
}
