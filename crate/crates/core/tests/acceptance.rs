//! Acceptance checks. Runs as a plain binary (`harness = false`) so every
//! criterion prints exactly one PASS/FAIL line, whatever the outcome.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oaa_core::experiments::{random_input, random_symmetric, run_ensemble, summarize, EnsembleRecord, Summary};
use oaa_core::*;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: u32, pass: bool, what: &str, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("[{id:>2}] {} {what}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_9700 ^ seed)
}

fn unit_vector(n: usize, r: &mut ChaCha8Rng) -> Vec<f64> {
    random_input(n, r).unwrap()
}

fn to_na(m: &Mat) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// `(H⊗I) V (K⊗I)` or `V (H⊗I)` assembled with nalgebra.
fn nalgebra_operator(c: &Circuit) -> DMatrix<f64> {
    let (m, n) = (c.m_dim(), c.n_dim());
    let mut h = DMatrix::from_element(1, 1, 1.0);
    while h.nrows() < m {
        let two = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0]) / 2f64.sqrt();
        h = h.kronecker(&two);
    }
    let h_layer = h.kronecker(&DMatrix::identity(n, n));
    let mut v = DMatrix::zeros(m * n, m * n);
    for (b, block) in c.blocks().iter().enumerate() {
        v.view_mut((b * n, b * n), (n, n)).copy_from(&to_na(&block.to_matrix()));
    }
    match c.form() {
        CircuitForm::Lcu => {
            let k = to_na(&c.k_reflector().unwrap()).kronecker(&DMatrix::identity(n, n));
            h_layer * v * k
        }
        CircuitForm::RowEncoding => v * h_layer,
    }
}

fn ensemble(variant: Variant, kind: ExperimentKind) -> (Vec<EnsembleRecord<f64>>, Summary) {
    ensemble_with(variant, kind, FinalRule::Peak)
}

fn ensemble_with(variant: Variant, kind: ExperimentKind, final_rule: FinalRule) -> (Vec<EnsembleRecord<f64>>, Summary) {
    let cfg = ExperimentConfig {
        variant,
        experiment: kind,
        final_rule,
        ..Default::default()
    };
    let recs = run_ensemble::<f64>(&cfg).expect("ensemble run");
    let s = summarize(&recs);
    (recs, s)
}

fn max_drift(recs: &[EnsembleRecord<f64>]) -> f64 {
    recs.iter().map(|r| r.norm_drift).fold(0.0, f64::max)
}

fn main() {
    let mut rep = Report { failures: 0 };
    let mut drift = 0.0f64;

    // 1 + 3: pooled ensemble over 4 x 100 runs, both variants.
    let (lit_recs, lit) = ensemble(Variant::Literal, ExperimentKind::Ensemble);
    let (adj_recs, adj) = ensemble(Variant::Adjoint, ExperimentKind::Ensemble);
    drift = drift.max(max_drift(&lit_recs)).max(max_drift(&adj_recs));
    let in_window = |s: &Summary| (0.90..=0.99).contains(&s.mean_fidelity) && (0.70..=0.82).contains(&s.mean_probability);
    let selected = if in_window(&adj) { Some(Variant::Adjoint) } else if in_window(&lit) { Some(Variant::Literal) } else { None };
    rep.line(
        1,
        selected.is_some(),
        "ensemble means in [0.90,0.99] x [0.70,0.82]",
        format!(
            "literal F={:.4} P={:.4}; adjoint F={:.4} P={:.4}; n={}",
            lit.mean_fidelity, lit.mean_probability, adj.mean_fidelity, adj.mean_probability, adj.count
        ),
    );
    let variant = selected.unwrap_or(Variant::Adjoint);
    let chosen = if variant == Variant::Adjoint { &adj } else { &lit };

    // 2: one matrix per dimension, fresh inputs.
    let (fix_recs, fix) = ensemble(variant, ExperimentKind::FixedMatrix);
    drift = drift.max(max_drift(&fix_recs));
    rep.line(
        2,
        (fix.mean_fidelity - 0.9426).abs() <= 0.05 && (fix.mean_probability - 0.7601).abs() <= 0.06,
        "fixed-matrix means within 0.05 / 0.06 of 0.9426 / 0.7601",
        format!("{variant} F={:.4} P={:.4}", fix.mean_fidelity, fix.mean_probability),
    );

    rep.line(
        3,
        chosen.above_ef >= 0.95,
        "final fidelity >= ef in at least 95% of runs",
        format!("{variant} {:.1}% (literal {:.1}%)", 100.0 * chosen.above_ef, 100.0 * lit.above_ef),
    );

    // Not a criterion: the same runs read at exactly k iterations instead of
    // at the probability peak within the first k.
    let (_, last_ens) = ensemble_with(variant, ExperimentKind::Ensemble, FinalRule::Last);
    let (_, last_fix) = ensemble_with(variant, ExperimentKind::FixedMatrix, FinalRule::Last);
    println!(
        "[ i] INFO {variant} read at iteration k: ensemble F={:.4} P={:.4}; fixed F={:.4} P={:.4}; above ef {:.1}%",
        last_ens.mean_fidelity,
        last_ens.mean_probability,
        last_fix.mean_fidelity,
        last_fix.mean_probability,
        100.0 * last_ens.above_ef
    );

    // 4
    let ks: Vec<usize> = [16, 32, 64, 128].iter().map(|&m| iteration_count(m)).collect();
    rep.line(4, ks == [3, 4, 6, 8], "iteration counts for M = 16, 32, 64, 128", format!("{ks:?}"));

    // 5: orthogonal embeddings follow the Grover closed form.
    let mut worst_p = 0.0f64;
    let mut worst_f = 0.0f64;
    for case in 0..20u64 {
        let m = if case % 2 == 0 { 16 } else { 64 };
        let mut r = rng(500 + case);
        let u = householder_from_vector(&unit_vector(m, &mut r)).unwrap();
        let x = unit_vector(m, &mut r);
        let c = build_row_encoding(&u).unwrap();
        let target = u.mat_vec(&x).unwrap();
        let k = iteration_count(m) + 2;
        let trace = oblivious_aa(&c, &c.prepare_input(&x).unwrap(), k, Variant::Adjoint, &target, FidelityMode::Embedded)
            .unwrap();
        let theta = (1.0 / (m as f64).sqrt()).asin();
        for rec in &trace.records {
            let expected = ((2 * rec.iteration + 1) as f64 * theta).sin().powi(2);
            worst_p = worst_p.max((rec.probability - expected).abs());
            worst_f = worst_f.max((rec.fidelity - 1.0).abs());
        }
        drift = drift.max(trace.norm_drift);
    }
    rep.line(
        5,
        worst_p <= 1e-9 && worst_f <= 1e-9,
        "orthogonal embeddings match sin^2((2i+1)θ), fidelity 1",
        format!("max |ΔP|={worst_p:.2e}, max |1-F|={worst_f:.2e}"),
    );

    // 6: structured application against the dense operator.
    let mut worst_apply = 0.0f64;
    let mut worst_orth = 0.0f64;
    let mut circuits = Vec::new();
    for (i, order) in [2usize, 4, 8, 16].into_iter().enumerate() {
        let mut r = rng(600 + i as u64);
        let a: Mat = random_symmetric(order / 2, &mut r);
        circuits.push(build_row_encoding(&Embedding::estimated(&a).unwrap().u).unwrap());
        let terms = r.random_range(1..=order);
        let unitaries: Vec<Mat> =
            (0..terms).map(|_| householder_from_vector(&unit_vector(order, &mut r)).unwrap()).collect();
        circuits.push(build_lcu_encoding(&unitaries, &unit_vector(terms, &mut r)).unwrap());
    }
    for c in &circuits {
        let dense = dense_matrix_of(c).unwrap();
        worst_apply = worst_apply.max((to_na(&dense) - nalgebra_operator(c)).amax());
        let dim = c.m_dim() * c.n_dim();
        for j in 0..dim {
            let out = apply_circuit(c, &StateVector::basis(c.m_dim(), c.n_dim(), j).unwrap()).unwrap();
            drift = drift.max((out.norm() - 1.0).abs());
            for (row, v) in out.amplitudes().iter().enumerate() {
                worst_apply = worst_apply.max((v - dense[(row, j)]).abs());
            }
        }
        worst_orth = worst_orth.max(dense.orthogonality_residual());
    }
    rep.line(
        6,
        worst_apply <= 1e-12 && worst_orth <= 1e-10,
        "structured vs dense for both forms, orders <= 16",
        format!("{} circuits, max |Δ|={worst_apply:.2e}, orthogonality {worst_orth:.2e}", circuits.len()),
    );

    // 7: top-left block of the LCU operator.
    let mut worst_block = 0.0f64;
    for case in 0..10u64 {
        let mut r = rng(700 + case);
        let m = if case < 5 { 2 } else { 4 };
        let n = 2 + (case as usize % 3);
        let unitaries: Vec<Mat> = (0..m).map(|_| householder_from_vector(&unit_vector(n, &mut r)).unwrap()).collect();
        let k = unit_vector(m, &mut r);
        let dense = dense_matrix_of(&build_lcu_encoding(&unitaries, &k).unwrap()).unwrap();
        let mut expected = Mat::zeros(n, n);
        for (u, &ki) in unitaries.iter().zip(&k) {
            expected = expected.add(&u.scale(ki / (m as f64).sqrt())).unwrap();
        }
        worst_block = worst_block.max(dense.block(0, 0, n, n).sub(&expected).unwrap().max_abs());
    }
    rep.line(7, worst_block <= 1e-12, "LCU top-left block equals Σ k_i U_i / √M", format!("max |Δ|={worst_block:.2e}"));

    // 8: polar closeness against the eigenvalue formula.
    let mut worst_c2 = 0.0f64;
    let mut worst_fro = 0.0f64;
    let mut min_gap = f64::INFINITY;
    for case in 0..100u64 {
        let mut r = rng(800 + case);
        let d = 2 + (case as usize % 15);
        let a: Mat = random_symmetric(d, &mut r);
        let u = Embedding::estimated(&a).unwrap().u;
        let rep8 = closeness(&u).unwrap();
        let lam = to_na(&u).symmetric_eigen().eigenvalues;
        let off = lam.iter().map(|l| (l.abs() - 1.0).abs()).fold(0.0, f64::max);
        let top = lam.iter().map(|l| l.abs()).fold(0.0, f64::max);
        worst_c2 = worst_c2.max((rep8.c2 - (off / top).powi(2)).abs());
        worst_fro = worst_fro.max((u.frobenius_norm().powi(2) - u.rows() as f64).abs());
        min_gap = min_gap.min(2.0 * u.rows() as f64 - rep8.phi);
    }
    rep.line(
        8,
        worst_c2 <= 1e-10 && worst_fro <= 1e-10 && min_gap >= -1e-8,
        "closeness: polar c2 vs eigenvalues, |U|_F^2 = order, 2n - Φ >= 0",
        format!("max |Δc2|={worst_c2:.2e}, max |Δ|U|_F^2|={worst_fro:.2e}, min 2n-Φ={min_gap:.3e}"),
    );

    // 9: matrix functions.
    let mut exp_ok = 0;
    for case in 0..20u64 {
        let mut r = rng(900 + case);
        let d = 2 + (case as usize % 6);
        let raw: Mat = random_symmetric(d, &mut r);
        let norm = to_na(&raw).symmetric_eigen().eigenvalues.amax();
        let a = raw.scale(r.random_range(0.1..=1.0) / norm);
        let exact = to_na(&a).exp();
        let err = |k: usize| {
            let p = to_na(&exp_product_factors(&a, k).unwrap().classical_product());
            (p - &exact).norm() / exact.norm()
        };
        if err(64) < err(8) {
            exp_ok += 1;
        }
    }
    let half = Mat::identity(3).scale(0.5);
    let cos_zero = cos_product_factors(&half, 4).unwrap().classical_product();
    let cos_exact = cos_zero.as_slice().iter().all(|&v| v == 0.0);
    let mut r = rng(990);
    let w0 = householder_from_vector(&unit_vector(8, &mut r)).unwrap();
    let w1 = householder_from_vector(&unit_vector(8, &mut r)).unwrap();
    let x = unit_vector(8, &mut r);
    let plan = ProductPlan::custom(vec![w0.clone(), w1.clone()]).unwrap();
    let chained = chained_product_circuit(&plan, &x, variant, FinalRule::Peak).unwrap();
    let f = chained.fidelity_against(&w1.mat_vec(&w0.mat_vec(&x).unwrap()).unwrap()).unwrap();
    rep.line(
        9,
        exp_ok == 20 && cos_exact && f >= 1.0 - 1e-8,
        "exp error shrinks k=8 -> 64, cos(π I/2) = 0 exactly, chained orthogonal product",
        format!("exp {exp_ok}/20, cos zero {cos_exact}, chained |1-F|={:.2e}", (1.0 - f).abs()),
    );

    // 10
    rep.line(
        10,
        drift <= 1e-12,
        "state norm conserved by every application above",
        format!("max |‖ψ‖-1|={drift:.2e}"),
    );

    println!("{} of 10 criteria passed", 10 - rep.failures);
    if rep.failures > 0 {
        std::process::exit(1);
    }
}
