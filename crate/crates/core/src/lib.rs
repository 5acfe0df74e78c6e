//! Numerics for the coherent information of quantum channels.
//!
//! The crate computes I_c(ρ,Φ) = S(Φ(ρ)) − S((1⊗Φ)|u_ρ⟩⟨u_ρ|) by two
//! independent routes, checks when it saturates its upper bound S(ρ),
//! constructively extracts the tensor-factorization certificate behind a
//! saturated instance, and assembles the explicit recovery channel Ψ with
//! (1⊗Ψ∘Φ)(|u_ρ⟩⟨u_ρ|) = |u_ρ⟩⟨u_ρ|.
//!
//! Layout:
//! * [`linalg`] — dense complex kernel: Kronecker products, partial traces,
//!   Jacobi Hermitian eigendecomposition, unitary completion;
//! * [`states`] — density matrices, pure states, purification, seeded
//!   sampling, trace distance;
//! * [`channels`] — Kraus families, Choi matrix, canonical form, Stinespring
//!   dilation, complementary output, composition;
//! * [`entropy`] — von Neumann entropy (bits), coherent information,
//!   Araki-Lieb and strong-subadditivity gaps;
//! * [`saturation`] — saturation detection, factorization certificates,
//!   recovery construction and verification;
//! * [`json`] — file formats shared with the CLI.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so concurrent read-only use is safe; random generators are
//! single-owner.

#![forbid(unsafe_code)]

pub mod channels;
pub mod entropy;
pub mod error;
pub mod json;
pub mod linalg;
pub mod saturation;
pub mod states;

pub use channels::{compose, random_channel, KrausChannel, StinespringDilation};
pub use entropy::{
    check_araki_lieb, check_ssa, coherent_info, vn_entropy, CoherentMethod, EntropyReport,
};
pub use error::{Error, Result};
pub use linalg::{
    complete_to_unitary, eigh, kron, partial_trace, permute_factors, ComplexMatrix, FactorShape,
    DEFAULT_TOL,
};
pub use saturation::{
    build_recovery, check_coherent_saturation, check_coherent_saturation_with,
    detect_product_pure_structure, detect_product_pure_structure_with, random_saturating_instance,
    verify_recovery, verify_ssa_decomposition, RecoveryChannel, SaturationCertificate,
    SaturationReport, SsaBlock, SsaDecomposition, DEFAULT_RECONSTRUCT_TOL, DEFAULT_SATURATION_TOL,
};
pub use states::{
    haar_unitary, purify, random_density, random_pure, trace_distance, DensityMatrix, PureState,
    SeededRng,
};
