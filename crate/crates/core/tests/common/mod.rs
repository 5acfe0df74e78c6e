#![allow(dead_code)]

use num_complex::Complex64 as C64;
use qci_core::*;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Completely depolarizing qubit channel with Kraus {I/2, X/2, Y/2, Z/2}.
pub fn depolarizing_qubit() -> KrausChannel {
    let h = 0.5;
    let i = ComplexMatrix::identity(2).scaled(c(h, 0.0));
    let x = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(0.0, 0.0)]])
        .unwrap();
    let y =
        ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -h)], vec![c(0.0, h), c(0.0, 0.0)]])
            .unwrap();
    let z = ComplexMatrix::diag_real(&[h, -h]);
    KrausChannel::new(vec![i, x, y, z], DEFAULT_TOL).unwrap()
}

pub fn maximally_mixed_qubit() -> DensityMatrix {
    DensityMatrix::new(
        ComplexMatrix::diag_real(&[0.5, 0.5]),
        FactorShape::new(vec![2]).unwrap(),
        DEFAULT_TOL,
    )
    .unwrap()
}

/// Deterministic random (state, channel) pair: d ∈ {2,3,4}, K ∈ {1..4}.
pub fn random_instance(seed: u64) -> (DensityMatrix, KrausChannel) {
    let d = 2 + (seed as usize % 3);
    let k = 1 + (seed as usize % 4);
    let mut rng = SeededRng::new(seed);
    let phi = random_channel(d, k, &mut rng);
    let rho = random_density(d, d, &mut rng).unwrap();
    (rho, phi)
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(dim: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| rng.complex_normal());
    (&g + &g.adjoint()).scaled(c(0.5, 0.0))
}
