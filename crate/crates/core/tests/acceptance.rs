//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the observed worst-case numbers (run with `--nocapture` to see them).
//!
//! Everything is property-based at desk scale (dims ≤ 9); tolerances are
//! pinned in the assertions.

mod common;

use std::time::Instant;

use common::*;
use num_complex::Complex64 as C64;
use qci_core::*;

#[test]
fn criterion_1_coherent_info_never_exceeds_entropy_bound() {
    let start = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..500u64 {
        let (rho, phi) = random_instance(seed);
        let report = coherent_info(&rho, &phi, CoherentMethod::Purification).unwrap();
        let excess = report.coherent_info - report.s_rho;
        worst = worst.max(excess);
        assert!(
            excess <= 1e-8,
            "seed {seed}: I_c = {} exceeds S(rho) = {}",
            report.coherent_info,
            report.s_rho
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "bound suite took {elapsed:?}");
    println!(
        "PASS criterion 1: 500 instances, max I_c - S(rho) = {worst:.3e} <= 1e-8 in {:.2}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_2_both_routes_compute_the_same_number() {
    let mut worst = 0.0f64;
    for seed in 0..500u64 {
        let (rho, phi) = random_instance(seed);
        let pur = coherent_info(&rho, &phi, CoherentMethod::Purification).unwrap();
        let com = coherent_info(&rho, &phi, CoherentMethod::Complementary).unwrap();
        let diff = (pur.coherent_info - com.coherent_info).abs();
        worst = worst.max(diff);
        assert!(diff <= 1e-9, "seed {seed}: routes differ by {diff:.3e}");
    }
    println!("PASS criterion 2: 500 instances, max route disagreement = {worst:.3e} <= 1e-9");
}

#[test]
fn criterion_3_exchange_entropy_ignores_purification_choice() {
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let (rho, phi) = random_instance(seed);
        let d = rho.dim();
        let baseline = vn_entropy(
            &phi.apply_extended(&purify(&rho).to_density(DEFAULT_TOL), 1)
                .unwrap(),
        );

        // Variant purification: permuted eigenpair order and re-phased
        // reference vectors.
        let (vals, vecs) = eigh(rho.mat(), DEFAULT_TOL).unwrap();
        let shift = 1 + (seed as usize % (d - 1).max(1));
        let mut u = vec![C64::new(0.0, 0.0); d * d];
        for j in 0..d {
            let src = (j + shift) % d;
            if vals[src] <= 1e-12 {
                continue;
            }
            let theta = 2.4 * (seed as f64 + 1.0) + 0.7 * j as f64;
            let phase = C64::new(theta.cos(), theta.sin()) * vals[src].sqrt();
            for r in 0..d {
                u[j * d + r] = vecs.get(r, src) * phase;
            }
        }
        let nrm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in u.iter_mut() {
            *z /= nrm;
        }
        let variant = PureState::new(u, FactorShape::new(vec![d, d]).unwrap()).unwrap();
        let variant_entropy = vn_entropy(
            &phi.apply_extended(&variant.to_density(DEFAULT_TOL), 1)
                .unwrap(),
        );

        let diff = (baseline - variant_entropy).abs();
        worst = worst.max(diff);
        assert!(
            diff <= 1e-9,
            "seed {seed}: purification change moved the entropy by {diff:.3e}"
        );
    }
    println!("PASS criterion 3: 100 instances, max purification sensitivity = {worst:.3e} <= 1e-9");
}

#[test]
fn criterion_4_tripartite_entropy_bookkeeping() {
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let (rho, phi) = random_instance(seed);
        let d = rho.dim();
        let dilation = phi.stinespring().unwrap();
        let k = dilation.env_dim();

        let u_pure = purify(&rho).to_density(DEFAULT_TOL);
        let eps = dilation.env_state().to_density(DEFAULT_TOL);
        let joint = kron(u_pure.mat(), eps.mat());
        let ext = kron(&ComplexMatrix::identity(d), dilation.unitary());
        let omega_mat = (&(&ext * &joint) * &ext.adjoint()).hermitized();
        let omega =
            DensityMatrix::new(omega_mat, FactorShape::new(vec![d, d, k]).unwrap(), 1e-8).unwrap();

        let checks = [
            (vn_entropy(&omega), 0.0, "S(Omega_ABC)"),
            (
                vn_entropy(&omega.reduce(&[1]).unwrap()),
                vn_entropy(&phi.apply(&rho).unwrap()),
                "S(Omega_B)",
            ),
            (
                vn_entropy(&omega.reduce(&[1, 2]).unwrap()),
                vn_entropy(&rho),
                "S(Omega_BC)",
            ),
            (
                vn_entropy(&omega.reduce(&[0, 1]).unwrap()),
                vn_entropy(&phi.apply_extended(&u_pure, 1).unwrap()),
                "S(Omega_AB)",
            ),
        ];
        for (got, want, name) in checks {
            let diff = (got - want).abs();
            worst = worst.max(diff);
            assert!(diff <= 1e-9, "seed {seed}: {name} off by {diff:.3e}");
        }
    }
    println!(
        "PASS criterion 4: 100 instances, max entropy-identity violation = {worst:.3e} <= 1e-9"
    );
}

#[test]
fn criterion_5_saturating_instances_certify_and_recover() {
    let pairs: Vec<(usize, usize)> = (1..=3usize)
        .flat_map(|l| (1..=3usize).map(move |r| (l, r)))
        .filter(|&(l, r)| (l, r) != (1, 1))
        .collect();
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_residual = 0.0f64;
    let mut worst_product = 0.0f64;
    let mut worst_recovery = 0.0f64;
    for seed in 0..100u64 {
        let (d_l, d_r) = pairs[seed as usize % pairs.len()];
        let mut rng = SeededRng::new(seed);
        let (rho, phi) = random_saturating_instance(d_l, d_r, &mut rng).unwrap();
        let report = check_coherent_saturation(&rho, &phi, 1e-7).unwrap();
        worst_gap = worst_gap.max(report.gap);
        assert!(
            report.gap <= 1e-8,
            "seed {seed} ({d_l},{d_r}): gap {:.3e}",
            report.gap
        );
        let cert = report
            .certificate
            .expect("saturating instance must certify");
        worst_residual = worst_residual.max(cert.residual);
        assert!(
            cert.residual <= 1e-7,
            "seed {seed}: residual {:.3e}",
            cert.residual
        );
        let product = report.product_output_distance.unwrap();
        worst_product = worst_product.max(product);
        assert!(
            product <= 1e-7,
            "seed {seed}: product-output distance {product:.3e}"
        );

        let dilation = phi.stinespring().unwrap();
        let recovery = build_recovery(&dilation, &cert).unwrap();
        let distance = verify_recovery(&rho, &phi, &recovery).unwrap();
        worst_recovery = worst_recovery.max(distance);
        assert!(
            distance <= 1e-7,
            "seed {seed}: recovery distance {distance:.3e}"
        );
    }
    println!(
        "PASS criterion 5: 100 instances, max gap = {worst_gap:.3e}, max residual = {worst_residual:.3e}, \
         max product distance = {worst_product:.3e}, max recovery distance = {worst_recovery:.3e}"
    );
}

#[test]
fn criterion_6_detector_is_sound_on_non_saturating_instances() {
    let mut checked = 0usize;
    let mut seed = 0u64;
    while checked < 100 {
        let (rho, phi) = random_instance(seed);
        seed += 1;
        assert!(seed < 2000, "could not find 100 non-saturating instances");
        let report = check_coherent_saturation(&rho, &phi, 1e-7).unwrap();
        if report.gap <= 0.01 {
            continue;
        }
        assert!(
            report.certificate.is_none(),
            "seed {}: certificate produced despite gap {:.3}",
            seed - 1,
            report.gap
        );
        checked += 1;
    }

    let report =
        check_coherent_saturation(&maximally_mixed_qubit(), &depolarizing_qubit(), 1e-7).unwrap();
    assert!(
        (report.gap - 2.0).abs() <= 1e-6,
        "depolarizing gap = {:.8}, expected 2.000000",
        report.gap
    );
    assert!(report.certificate.is_none());
    println!(
        "PASS criterion 6: 100 non-saturating instances rejected; depolarizing gap = {:.6}",
        report.gap
    );
}

#[test]
fn criterion_7_araki_lieb_structure_detection() {
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_residual = 0.0f64;
    for seed in 0..50u64 {
        let d_l = 1 + (seed as usize % 3);
        let d_r = 1 + ((seed as usize / 3) % 3);
        let d_c = 1 + ((seed as usize / 9) % 3);
        let mut rng = SeededRng::new(10_000 + seed);
        let rho_l = random_density(d_l, d_l, &mut rng).unwrap();
        let psi = random_pure(FactorShape::new(vec![d_r, d_c]).unwrap(), &mut rng);
        let v = haar_unitary(d_l * d_r, &mut rng);
        let embed = kron(&v, &ComplexMatrix::identity(d_c));
        let bc = kron(rho_l.mat(), psi.to_density(DEFAULT_TOL).mat());
        let moved = (&(&embed * &bc) * &embed.adjoint()).hermitized();
        let rho_bc =
            DensityMatrix::new(moved, FactorShape::new(vec![d_l * d_r, d_c]).unwrap(), 1e-9)
                .unwrap();

        let gap = check_araki_lieb(&rho_bc).unwrap();
        worst_gap = worst_gap.max(gap.abs());
        assert!(gap.abs() <= 1e-9, "seed {seed}: Araki-Lieb gap {gap:.3e}");

        let cert = detect_product_pure_structure(&rho_bc, 1e-7).unwrap();
        let residual = trace_distance(&cert.reconstruct(), &rho_bc).unwrap();
        worst_residual = worst_residual.max(residual);
        assert!(
            residual <= 1e-8,
            "seed {seed}: reconstruction residual {residual:.3e}"
        );
    }
    println!(
        "PASS criterion 7: 50 conjugated product-pure instances, max |gap| = {worst_gap:.3e}, \
         max residual = {worst_residual:.3e}"
    );
}

#[test]
fn criterion_8_ssa_decomposition_verifier() {
    // A = 2, B = 4 split as (1×2) ⊕ (2×1), C = 2, weights (0.3, 0.7).
    let mut rng = SeededRng::new(271_828);
    let rho_al_1 = random_density(2, 2, &mut rng)
        .unwrap()
        .reshaped(FactorShape::new(vec![2, 1]).unwrap())
        .unwrap();
    let rho_rc_1 = random_density(4, 4, &mut rng)
        .unwrap()
        .reshaped(FactorShape::new(vec![2, 2]).unwrap())
        .unwrap();
    let rho_al_2 = random_density(4, 4, &mut rng)
        .unwrap()
        .reshaped(FactorShape::new(vec![2, 2]).unwrap())
        .unwrap();
    let rho_rc_2 = random_density(2, 2, &mut rng)
        .unwrap()
        .reshaped(FactorShape::new(vec![1, 2]).unwrap())
        .unwrap();
    let embed_1 =
        ComplexMatrix::from_fn(4, 2, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let embed_2 = ComplexMatrix::from_fn(
        4,
        2,
        |i, j| if i == j + 2 { c(1.0, 0.0) } else { c(0.0, 0.0) },
    );
    let blocks = vec![
        SsaBlock {
            weight: 0.3,
            embedding: embed_1,
            rho_al: rho_al_1,
            rho_rc: rho_rc_1,
        },
        SsaBlock {
            weight: 0.7,
            embedding: embed_2,
            rho_al: rho_al_2,
            rho_rc: rho_rc_2,
        },
    ];
    let decomp = SsaDecomposition { blocks };

    // Reference state assembled independently.
    let mut target = ComplexMatrix::zeros(16, 16);
    for block in &decomp.blocks {
        let inner = kron(block.rho_al.mat(), block.rho_rc.mat());
        let embed = kron(
            &kron(&ComplexMatrix::identity(2), &block.embedding),
            &ComplexMatrix::identity(2),
        );
        let term = &(&embed * &inner) * &embed.adjoint();
        target = &target + &term.scaled(c(block.weight, 0.0));
    }
    let rho_abc = DensityMatrix::new(
        target.hermitized(),
        FactorShape::new(vec![2, 4, 2]).unwrap(),
        DEFAULT_TOL,
    )
    .unwrap();

    let residual = verify_ssa_decomposition(&rho_abc, &decomp).unwrap();
    assert!(residual <= 1e-10, "fixture residual {residual:.3e}");
    let ssa_gap = check_ssa(&rho_abc).unwrap();
    assert!(ssa_gap.abs() <= 1e-8, "fixture SSA gap {ssa_gap:.3e}");

    // Perturbing any single block weight by 0.1 must be rejected.
    for j in 0..decomp.blocks.len() {
        let mut bad = decomp.clone();
        bad.blocks[j].weight += 0.1;
        assert!(
            matches!(
                verify_ssa_decomposition(&rho_abc, &bad),
                Err(Error::BadWeights { .. })
            ),
            "perturbed block {j} was not rejected"
        );
    }
    println!(
        "PASS criterion 8: two-block fixture residual = {residual:.3e}, SSA gap = {ssa_gap:.3e}, \
         weight perturbations rejected"
    );
}
