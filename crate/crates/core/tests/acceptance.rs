//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::time::Instant;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use symmetria::adjacency::AdjacencyIndex;
use symmetria::correction::{optimize, project_tangent, retract, CorrectionProblem, OptimizerOptions};
use symmetria::evaluation::correspondence_rate;
use symmetria::functional_map::parity_oracle;
use symmetria::pairing::{brute_force_assignment, solve_assignment, AffinityMatrix};
use symmetria::spectral::{eigen_gap_flags, eigendecompose, LaplaceOperator};
use symmetria::synthetic::{self, MirroredMesh};
use symmetria::{detect, detect_from_basis, RunConfig, TriangleMesh};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rate_of(mesh: &TriangleMesh, sigma: &[usize], truth: &[(usize, usize)]) -> f64 {
    let adj = AdjacencyIndex::build(mesh).unwrap();
    correspondence_rate(mesh, &adj, sigma, truth).unwrap().corr_rate
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn ground_truth_recovery(blob: &MirroredMesh) -> Outcome {
    let start = Instant::now();
    let det = detect(&blob.mesh, &RunConfig::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let rate = rate_of(&blob.mesh, det.sigma(), &blob.ground_truth());
    outcome(
        rate >= 0.95 && secs < 10.0,
        format!("n={} rate={rate:.4} time={secs:.2}s", blob.mesh.n_vertices()),
    )
}

fn parity_oracle_agreement(blob: &MirroredMesh) -> Outcome {
    let det = detect(&blob.mesh, &RunConfig::default()).unwrap();
    let oracle = parity_oracle(&det.basis, &det.mass, &blob.involution);
    let (mut checked, mut wrong) = (0, 0);
    for (col, &o) in oracle.iter().enumerate() {
        if det.gap_flags[col] || o.abs() <= 0.5 {
            continue;
        }
        checked += 1;
        if det.map.signs[col] != o.signum() as i8 {
            wrong += 1;
        }
    }
    outcome(
        checked > 0 && wrong == 0,
        format!("{checked} eigenfunctions with |oracle|>0.5, {wrong} disagreements"),
    )
}

fn invariance(blob: &MirroredMesh) -> Outcome {
    let config = RunConfig::default();
    let mesh = &blob.mesh;
    let adj = AdjacencyIndex::build(mesh).unwrap();
    let op = LaplaceOperator::assemble(mesh).unwrap();
    let basis = eigendecompose(&op, config.k).unwrap();
    let base = detect_from_basis(mesh, &adj, &op.mass, basis.clone(), &config).unwrap();
    let sigma = base.sigma().to_vec();
    let same = |other: &[usize]| other.iter().zip(&sigma).filter(|(a, b)| a == b).count();
    let n = sigma.len();
    let mut worst = n;
    let mut variants = 0;

    for col in 0..basis.k() {
        let d = detect_from_basis(mesh, &adj, &op.mass, basis.flipped(col), &config).unwrap();
        worst = worst.min(same(d.sigma()));
        variants += 1;
    }
    let mut rng = common::rng(3);
    let mut perms: Vec<Vec<usize>> = vec![(0..basis.k()).rev().collect()];
    for _ in 0..4 {
        let mut p: Vec<usize> = (0..basis.k()).collect();
        p.shuffle(&mut rng);
        perms.push(p);
    }
    for p in &perms {
        let d = detect_from_basis(mesh, &adj, &op.mass, basis.permuted(p), &config).unwrap();
        worst = worst.min(same(d.sigma()));
        variants += 1;
    }
    for s in [0.1, 10.0] {
        let d = detect(&mesh.scaled(s).unwrap(), &config).unwrap();
        worst = worst.min(same(d.sigma()));
        variants += 1;
    }
    outcome(
        worst == n,
        format!("{variants} variants (flips, permutations, scales 0.1/10): min identical {worst}/{n}"),
    )
}

fn random_affinity(rng: &mut impl Rng, d: usize) -> AffinityMatrix {
    let q = rng.gen_range(0.5..5.0);
    let mut w = DMatrix::from_element(d, d, q);
    for a in 0..d {
        for b in a + 1..d {
            let v = rng.gen_range(0.0..1.0) + if rng.gen_bool(0.4) { q } else { 0.0 };
            w[(a, b)] = v;
            w[(b, a)] = v;
        }
    }
    AffinityMatrix::from_matrix(w, q).unwrap()
}

fn assignment_exactness() -> Outcome {
    let mut rng = common::rng(4);
    let mut mismatches = 0;
    let instances = 240;
    for _ in 0..instances {
        let d = rng.gen_range(2..=10);
        let c = rng.gen_range(1..=d / 2);
        let aff = random_affinity(&mut rng, d);
        let exact = solve_assignment(&aff, c).unwrap().total_cost;
        let brute = brute_force_assignment(&aff, c).unwrap().total_cost;
        if (exact - brute).abs() > 1e-9 * brute.abs().max(1.0) {
            mismatches += 1;
        }
    }
    let mut slowest: f64 = 0.0;
    for _ in 0..10 {
        let aff = random_affinity(&mut rng, 25);
        let start = Instant::now();
        solve_assignment(&aff, 8).unwrap();
        slowest = slowest.max(start.elapsed().as_secs_f64());
    }
    outcome(
        mismatches == 0 && slowest < 1.0,
        format!("{instances} instances, {mismatches} mismatches; d=25 c=8 slowest {slowest:.4}s"),
    )
}

fn random_problem(rng: &mut impl Rng, k: usize) -> CorrectionProblem {
    let mut eigenvalues: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..5.0)).collect();
    eigenvalues.sort_by(f64::total_cmp);
    let signs = (0..k).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let cols = 2 * rng.gen_range(1..=4);
    let fbar = common::random_matrix(rng, k, cols);
    let gbar = common::random_matrix(rng, k, cols);
    CorrectionProblem::new(eigenvalues, signs, fbar, gbar, rng.gen_range(0.1..2.0)).unwrap()
}

fn relative(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn gradient_fidelity() -> Outcome {
    let mut rng = common::rng(5);
    let (mut worst_e, mut worst_r, mut worst_tan, mut worst_cost) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut count = 0;
    for &k in &[3usize, 5, 8] {
        for _ in 0..20 {
            let p = random_problem(&mut rng, k);
            let r = common::random_rotation(&mut rng, k);
            let f = |m: &DMatrix<f64>| {
                common::reference_cost(&p.eigenvalues, &p.signs, &p.fbar, &p.gbar, p.mu, m)
            };
            worst_cost = worst_cost.max((p.cost(&r) - f(&r)).abs() / f(&r).abs().max(1.0));

            let h = 1e-5;
            let fd = DMatrix::from_fn(k, k, |i, j| {
                let mut e = DMatrix::zeros(k, k);
                e[(i, j)] = h;
                (f(&(&r + &e)) - f(&(&r - &e))) / (2.0 * h)
            });
            worst_e = worst_e.max(relative(&p.euclidean_gradient(&r), &fd));

            // directional derivatives along the retraction over a tangent basis
            let grad = p.riemannian_gradient(&r);
            let (mut analytic, mut numeric) = (Vec::new(), Vec::new());
            for a in 0..k {
                for b in a + 1..k {
                    let mut omega = DMatrix::zeros(k, k);
                    omega[(a, b)] = 1.0;
                    omega[(b, a)] = -1.0;
                    let xi = &r * omega;
                    analytic.push(grad.dot(&xi));
                    numeric.push(
                        (f(&retract(&r, &(&xi * h))) - f(&retract(&r, &(&xi * -h)))) / (2.0 * h),
                    );
                }
            }
            let m = analytic.len();
            worst_r = worst_r.max(relative(
                &DMatrix::from_vec(m, 1, analytic),
                &DMatrix::from_vec(m, 1, numeric),
            ));
            let rtg = r.transpose() * &grad;
            worst_tan = worst_tan.max((&rtg + rtg.transpose()).norm());
            worst_tan = worst_tan.max((project_tangent(&r, &grad) - &grad).norm());
            count += 1;
        }
    }
    outcome(
        worst_e < 1e-5 && worst_r < 1e-5 && worst_tan < 1e-10 && worst_cost < 1e-12,
        format!(
            "{count} instances k'∈{{3,5,8}}: euclidean {worst_e:.1e}, riemannian {worst_r:.1e}, tangency {worst_tan:.1e}"
        ),
    )
}

fn optimizer_contract() -> Outcome {
    let mut rng = common::rng(6);
    let mut increases = 0;
    let mut problems = 0;
    for &k in &[3usize, 5, 8] {
        for _ in 0..15 {
            let p = random_problem(&mut rng, k);
            let r0 = common::random_rotation(&mut rng, k);
            let res = optimize(&p, &r0, &OptimizerOptions::default()).unwrap();
            let mut prev = res.initial_cost;
            for t in res.trace.iter().filter(|t| t.accepted) {
                if t.cost > prev {
                    increases += 1;
                }
                prev = t.cost;
            }
            if res.final_cost > res.initial_cost {
                increases += 1;
            }
            problems += 1;
        }
    }
    let mut worst_dist: f64 = 0.0;
    for &k in &[3usize, 5, 8] {
        let mut p = random_problem(&mut rng, k);
        p.fbar = p.gbar.clone();
        for (i, &s) in p.signs.iter().enumerate() {
            p.fbar.row_mut(i).scale_mut(s);
        }
        let id = DMatrix::identity(k, k);
        let res = optimize(&p, &id, &OptimizerOptions::default()).unwrap();
        worst_dist = worst_dist.max((res.rotation - id).norm());
    }
    outcome(
        increases == 0 && worst_dist < 1e-6,
        format!("{problems} problems, {increases} cost increases; consistent ‖R−I‖={worst_dist:.1e}"),
    )
}

fn spectral_numerics(blob: &MirroredMesh) -> Outcome {
    let meshes: Vec<(&str, TriangleMesh)> = vec![
        ("blob", blob.mesh.clone()),
        ("dumbbell", synthetic::mirrored_dumbbell(16).mesh),
        ("icosphere", synthetic::icosphere(3)),
        ("grid", synthetic::grid(30, 20, 0.1)),
    ];
    let (mut res, mut orth, mut kernel) = (0.0f64, 0.0f64, 0.0f64);
    for (_, mesh) in &meshes {
        let op = LaplaceOperator::assemble(mesh).unwrap();
        let basis = eigendecompose(&op, 13).unwrap();
        res = res.max(basis.residuals(&op).into_iter().fold(0.0, f64::max));
        orth = orth.max(basis.orthonormality_error(&op.mass));
        let order = basis.order();
        kernel = kernel.max(basis.eigenvalues[order[0]].abs() / basis.eigenvalues[order[1]]);
    }
    let sphere = synthetic::icosphere(3);
    let op = LaplaceOperator::assemble(&sphere).unwrap();
    let basis = eigendecompose(&op, 13).unwrap();
    let order = basis.order();
    let triple: Vec<f64> = order[1..4].iter().map(|&c| basis.eigenvalues[c]).collect();
    let mean = triple.iter().sum::<f64>() / 3.0;
    let spread = (triple[2] - triple[0]) / mean;
    let flags = eigen_gap_flags(&basis.eigenvalues, RunConfig::default().tau_gap);
    let flagged = order[1..4].iter().all(|&c| flags[c]);
    outcome(
        res <= 1e-6 && orth <= 1e-6 && kernel <= 1e-8 && spread < 0.1 && flagged,
        format!(
            "{} meshes: residual {res:.1e}, orthonormality {orth:.1e}, λ₁/λ₂ {kernel:.1e}; l=1 spread {spread:.1e} flagged={flagged}",
            meshes.len()
        ),
    )
}

fn post_eigensolve_time(blob: &MirroredMesh, runs: usize) -> f64 {
    let config = RunConfig::default();
    let adj = AdjacencyIndex::build(&blob.mesh).unwrap();
    let op = LaplaceOperator::assemble(&blob.mesh).unwrap();
    let basis = eigendecompose(&op, config.k).unwrap();
    median(
        (0..runs)
            .map(|_| {
                detect_from_basis(&blob.mesh, &adj, &op.mass, basis.clone(), &config)
                    .unwrap()
                    .post_eigensolve_seconds()
            })
            .collect(),
    )
}

fn performance() -> Outcome {
    let large = synthetic::mirrored_blob(50);
    let det = detect(&large.mesh, &RunConfig::default()).unwrap();
    let eig = det.seconds("eigensolve").unwrap();
    let post = det.post_eigensolve_seconds();
    let small = synthetic::mirrored_blob(34);
    let doubled = synthetic::mirrored_blob(48);
    let t_small = post_eigensolve_time(&small, 7);
    let t_doubled = post_eigensolve_time(&doubled, 7);
    let ratio = t_doubled / t_small;
    outcome(
        post <= 60.0 && ratio <= 2.6,
        format!(
            "n={}: post-eigensolve {post:.3}s (eigensolve {eig:.2}s); n {}→{}: {t_small:.4}s→{t_doubled:.4}s ratio {ratio:.2}",
            large.mesh.n_vertices(),
            small.mesh.n_vertices(),
            doubled.mesh.n_vertices()
        ),
    )
}

fn hole_rates(blob: &MirroredMesh, fraction: f64) -> Vec<f64> {
    (0..8)
        .map(|i| {
            let theta = i as f64 * std::f64::consts::FRAC_PI_4;
            let (mesh, truth) = common::cut_hole(blob, common::flank_direction(theta), fraction);
            match detect(&mesh, &RunConfig::default()) {
                Ok(det) => rate_of(&mesh, det.sigma(), &truth),
                Err(_) => 0.0,
            }
        })
        .collect()
}

fn fmt_rates(rates: &[f64]) -> String {
    rates.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(" ")
}

fn hole_robustness(blob: &MirroredMesh) -> Outcome {
    let small = hole_rates(blob, 0.03);
    let large = hole_rates(blob, 0.10);
    let passing = |rates: &[f64]| rates.iter().filter(|&&r| r >= 0.85).count();
    outcome(
        passing(&small) == small.len(),
        format!(
            "3% hole, 8 placements: [{}]; 10% hole (informational, {}/8 ≥ 0.85): [{}]",
            fmt_rates(&small),
            passing(&large),
            fmt_rates(&large)
        ),
    )
}

fn main() {
    let blob = synthetic::mirrored_blob(30);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("synthetic ground-truth recovery", Box::new(|| ground_truth_recovery(&blob))),
        ("functional-map parity oracle", Box::new(|| parity_oracle_agreement(&blob))),
        ("invariance suite", Box::new(|| invariance(&synthetic::mirrored_blob(24)))),
        ("assignment exactness", Box::new(assignment_exactness)),
        ("gradient fidelity", Box::new(gradient_fidelity)),
        ("optimizer contract", Box::new(optimizer_contract)),
        ("spectral numerics", Box::new(|| spectral_numerics(&blob))),
        ("performance envelope", Box::new(performance)),
        ("hole robustness", Box::new(|| hole_robustness(&blob))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] {}. {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
