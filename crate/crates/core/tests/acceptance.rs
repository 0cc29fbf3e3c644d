//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::path::PathBuf;
use std::time::Instant;

use pcyclic::certificates::{
    classify_mapping, holds_condition, mu_min, sample_distances, step_chain, CertificateSample, MuPolicy, PairSampler,
    ParamRule, ParamSequences, Verdict,
};
use pcyclic::harness::{csv_string, load_config, run_experiment};
use pcyclic::mappings::{make_two_cyclic, orbit, Mapping, Matrix};
use pcyclic::metric::{set_distance, ConvexSet, NormKind, NormedSpace, Point};
use pcyclic::orbit::{best_proximity_run, run_to_fixed_point, OrbitVerdict};
use pcyclic::CounterRng;

type Outcome = Result<String, String>;

fn p(v: &[f64]) -> Point {
    Point::new(v.to_vec()).unwrap()
}

/// A random linear map together with its matrix, kept for the oracles.
struct Linear {
    mapping: Mapping,
    matrix: Vec<Vec<f64>>,
}

fn random_point(rng: &mut CounterRng, dim: usize, spread: f64) -> Point {
    p(&(0..dim).map(|_| spread * rng.normal()).collect::<Vec<_>>())
}

fn random_linear(rng: &mut CounterRng, dim: usize, rotation: bool) -> Linear {
    if rotation {
        let angle = rng.uniform(0.0, std::f64::consts::TAU);
        let scale = rng.uniform(0.3, 1.3);
        let mut m = vec![vec![0.0; dim]; dim];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = scale;
        }
        m[0][0] = scale * angle.cos();
        m[0][1] = -scale * angle.sin();
        m[1][0] = scale * angle.sin();
        m[1][1] = scale * angle.cos();
        Linear { mapping: Mapping::ScaledRotation { angle, scale }, matrix: m }
    } else {
        let s = rng.uniform(0.2, 1.5) / (dim as f64).sqrt();
        let m: Vec<Vec<f64>> = (0..dim).map(|_| (0..dim).map(|_| s * rng.uniform(-1.0, 1.0)).collect()).collect();
        let c = random_point(rng, dim, 1.0);
        let q = Matrix::from_row_major(dim, m.concat()).unwrap();
        Linear { mapping: Mapping::affine(q, c).unwrap(), matrix: m }
    }
}

fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Smallest ρ on the grid −1, −1 + 1e−4, …, 1 with ‖d − w‖² ≤ ‖d‖² + ‖w‖² + 2ρ‖d‖‖w‖.
/// Both sides are expanded by components first, so the test reads
/// −2⟨d, w⟩ ≤ 2ρ‖d‖‖w‖ and stays exact when ‖w‖ ≪ ‖d‖.
fn grid_mu(d: &[f64], w: &[f64]) -> f64 {
    let (a, b) = (norm2(d), norm2(w));
    if a * b == 0.0 {
        return 0.0;
    }
    let cross: f64 = d.iter().zip(w).map(|(p, q)| -2.0 * p * q).sum();
    (0..=20_000).map(|i| -1.0 + i as f64 * 1e-4).find(|rho| cross <= 2.0 * rho * a * b + 1e-12 * a * b).unwrap_or(1.0)
}

const DIMS: [usize; 3] = [1, 2, 5];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = CounterRng::new(101);
    let mut worst = 0.0f64;
    let (mut taken, mut rejected, mut i) = (0usize, 0usize, 0usize);
    while taken < 1000 {
        let dim = DIMS[i % 3];
        let lin = random_linear(&mut rng, dim, dim >= 2 && i % 2 == 0);
        i += 1;
        let n = 1 + (rng.next_u64() % 8) as usize;
        let x = random_point(&mut rng, dim, 2.0);
        let y = random_point(&mut rng, dim, 2.0);

        // Tⁿx − Tⁿy = Qⁿ(x − y) for both families.
        let diff: Vec<f64> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
        let mut w = diff.clone();
        for _ in 0..n {
            w = matvec(&lin.matrix, &w);
        }
        // Skip draws where Tⁿx − Tⁿy is below the rounding level of the
        // iterates themselves: no floating-point orbit can resolve μ there.
        let u = orbit(&lin.mapping, &x, n).map_err(|e| e.to_string())?.pop().unwrap();
        let v = orbit(&lin.mapping, &y, n).map_err(|e| e.to_string())?.pop().unwrap();
        if norm2(&w) < 1e-10 * (norm2(&u) + norm2(&v)) {
            rejected += 1;
            continue;
        }
        let space = NormedSpace::euclidean(dim);
        let mu = mu_min(&space, &lin.mapping, &x, &y, n).map_err(|e| e.to_string())?;
        worst = worst.max((mu - grid_mu(&diff, &w)).abs());
        taken += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!(
        "{taken} samples ({rejected} unresolvable draws skipped), max |mu_min - grid| = {worst:.2e}, {secs:.2} s"
    );
    if worst <= 1e-3 && secs < 10.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn norms() -> [(NormKind, &'static str); 3] {
    [(NormKind::Euclidean, "euclidean"), (NormKind::PNorm(3.0), "p=3"), (NormKind::Max, "max")]
}

fn criterion_2() -> Outcome {
    let mut rng = CounterRng::new(202);
    let mut details = Vec::new();
    for (kind, name) in norms() {
        let mut worst = 0.0f64;
        for i in 0..10_000 {
            let dim = DIMS[i % 3];
            let space = NormedSpace::new(dim, kind).unwrap();
            let lin = random_linear(&mut rng, dim, dim >= 2 && i % 2 == 1);
            let n = 1 + (rng.next_u64() % 8) as usize;
            let x = random_point(&mut rng, dim, 3.0);
            let y = random_point(&mut rng, dim, 3.0);
            let u = orbit(&lin.mapping, &x, n).unwrap().pop().unwrap();
            let v = orbit(&lin.mapping, &y, n).unwrap().pop().unwrap();
            let (a, b, dd) = sample_distances(&space, &x, &y, &u, &v).unwrap();
            let scale = (a + b) * (a + b);
            let lo = ((a - b) * (a - b) - dd * dd) / scale;
            let hi = (dd * dd - scale) / scale;
            worst = worst.max(lo).max(hi);
        }
        if worst > 1e-12 {
            return Err(format!("{name}: worst relative violation {worst:.2e}"));
        }
        details.push(format!("{name} {worst:.1e}"));
    }
    Ok(format!("3 x 10^4 samples, worst relative excess: {}", details.join(", ")))
}

fn random_params(rng: &mut CounterRng, i: usize) -> ParamSequences {
    let alpha = rng.uniform(0.0, 2.0);
    let beta = rng.uniform(0.0, 1.0 / 3.0);
    let mu = if i.is_multiple_of(2) { MuPolicy::FromData } else { MuPolicy::Constant(rng.uniform(-1.0, 1.0)) };
    ParamSequences { gamma: ParamRule::Constant(rng.uniform(0.0, 1.0)), ..ParamSequences::constant(alpha, beta, mu) }
}

fn criterion_3() -> Outcome {
    let mut rng = CounterRng::new(303);
    let mut held = 0usize;
    for i in 0..10_000 {
        let dim = DIMS[i % 3];
        let (kind, _) = norms()[i % 3];
        let space = NormedSpace::new(dim, kind).unwrap();
        let lin = random_linear(&mut rng, dim, dim >= 2 && i % 4 < 2);
        let params = random_params(&mut rng, i);
        let n = 1 + (rng.next_u64() % 8) as usize;
        let x = random_point(&mut rng, dim, 2.0);
        let y = random_point(&mut rng, dim, 2.0);
        let s = CertificateSample::compute(&space, &lin.mapping, &params, &x, &y, n).map_err(|e| e.to_string())?;
        if holds_condition(&params, &space, &lin.mapping, &x, &y, n, s.xi, 0.0).map_err(|e| e.to_string())? {
            held += 1;
        }
    }
    let detail = format!("{held}/10000 samples hold with xi = xi_slack");
    if held == 10_000 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_4() -> Outcome {
    let mut rng = CounterRng::new(404);
    let mut worst_step = f64::NEG_INFINITY;
    let mut cases = [0usize; 4];
    for i in 0..10_000 {
        let dim = DIMS[i % 3];
        let space = NormedSpace::euclidean(dim);
        let lin = random_linear(&mut rng, dim, dim >= 2 && i % 2 == 0);
        let params = random_params(&mut rng, i);
        let n = 1 + (rng.next_u64() % 8) as usize;
        let x = random_point(&mut rng, dim, 2.0);
        let y = random_point(&mut rng, dim, 2.0);
        let s = CertificateSample::compute(&space, &lin.mapping, &params, &x, &y, n).map_err(|e| e.to_string())?;
        let rhs = s.k * s.a * s.a + s.xi_normalized;
        let excess = (s.b * s.b - rhs) / rhs.max(f64::MIN_POSITIVE);
        worst_step = worst_step.max(excess);
        cases[s.case_tag.to_string().as_bytes()[0] as usize - b'a' as usize] += 1;
    }
    if worst_step > 1e-9 {
        return Err(format!("one-step bound exceeded by relative {worst_step:.2e}"));
    }

    let mut worst_chain = f64::NEG_INFINITY;
    for i in 0..100 {
        let dim = DIMS[i % 3];
        let space = NormedSpace::euclidean(dim);
        let lin = random_linear(&mut rng, dim, dim >= 2 && i % 2 == 0);
        let params = random_params(&mut rng, i);
        let x = random_point(&mut rng, dim, 2.0);
        let y = random_point(&mut rng, dim, 2.0);
        let chain = step_chain(&space, &lin.mapping, &params, &x, &y, 50).map_err(|e| e.to_string())?;
        // Closed form: (Π kⱼ) d₀² + Σⱼ (Π_{i>j} kᵢ) ξ′ⱼ.
        let d0 = chain.distances_sq[0];
        for n in 1..=50 {
            let steps = &chain.steps[..n];
            let prod: f64 = steps.iter().map(|s| s.k).product();
            let tail: f64 =
                (0..n).map(|j| steps[j + 1..].iter().map(|s| s.k).product::<f64>() * steps[j].xi_normalized).sum();
            let bound = prod * d0 + tail;
            let excess = (chain.distances_sq[n] - bound) / bound.max(f64::MIN_POSITIVE);
            worst_chain = worst_chain.max(excess);
        }
    }
    let detail = format!(
        "one-step worst relative excess {worst_step:.2e} (cases a/b/c/d = {cases:?}), 100 chains of 50, worst {worst_chain:.2e}"
    );
    if worst_chain <= 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_5() -> Outcome {
    let e1 = NormedSpace::euclidean(1);
    let t = Mapping::scaled_shift(0.5, p(&[1.0]));
    let xs = orbit(&t, &p(&[0.0]), 35).unwrap();
    let first = xs.iter().position(|x| (x[0] - 2.0).abs() <= 1e-8).ok_or("1-D orbit never within 1e-8 of 2")?;
    let run = run_to_fixed_point(&e1, &t, &p(&[0.0]), 1e-9, 35).map_err(|e| e.to_string())?;
    let OrbitVerdict::FixedPoint(z) = &run.verdict else { return Err("1-D run did not converge".into()) };
    if (z[0] - 2.0).abs() > 1e-8 {
        return Err(format!("1-D limit {}", z[0]));
    }

    let (s, c) = (30f64).to_radians().sin_cos();
    let q = [[0.6 * c, -0.6 * s], [0.6 * s, 0.6 * c]];
    let cvec = [1.0, 0.0];
    // Cramer's rule on (I − Q) z = c.
    let m = [[1.0 - q[0][0], -q[0][1]], [-q[1][0], 1.0 - q[1][1]]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let oracle = [(cvec[0] * m[1][1] - m[0][1] * cvec[1]) / det, (m[0][0] * cvec[1] - cvec[0] * m[1][0]) / det];
    let t2 = Mapping::affine(Matrix::from_row_major(2, q.concat()).unwrap(), p(&cvec)).unwrap();
    let e2 = NormedSpace::euclidean(2);
    let run2 = run_to_fixed_point(&e2, &t2, &p(&[0.0, 0.0]), 1e-11, 10_000).map_err(|e| e.to_string())?;
    let OrbitVerdict::FixedPoint(z2) = &run2.verdict else { return Err("2-D run did not converge".into()) };
    let err2 = ((z2[0] - oracle[0]).powi(2) + (z2[1] - oracle[1]).powi(2)).sqrt();
    let detail = format!(
        "1-D within 1e-8 at n = {first}, run stops at n = {}; 2-D error {err2:.2e} after {} iterations",
        run.iterations_used, run2.iterations_used
    );
    if first <= 35 && err2 <= 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn parity_holds(pair: &pcyclic::CyclicPair, points: &[Point]) -> bool {
    points.iter().enumerate().all(|(k, x)| {
        let set = if k % 2 == 0 { &pair.a } else { &pair.b };
        set.contains(x, 1e-10)
    })
}

fn criterion_6() -> Outcome {
    let e1 = NormedSpace::euclidean(1);
    let pair = make_two_cyclic(
        ConvexSet::interval(1.0, 2.0).unwrap(),
        ConvexSet::interval(-2.0, -1.0).unwrap(),
        Mapping::scaled_shift(-0.5, p(&[-0.5])),
        Mapping::scaled_shift(-0.5, p(&[0.5])),
        None,
    )
    .unwrap();
    let rep = best_proximity_run(&e1, &pair, &p(&[2.0]), 1e-12, 10_000).map_err(|e| e.to_string())?;
    let interval_ok = (rep.z1[0] - 1.0).abs() <= 1e-8
        && (rep.z2[0] + 1.0).abs() <= 1e-8
        && (rep.pair_distance - 2.0).abs() <= 1e-8
        && rep.gap.abs() <= 1e-8
        && parity_holds(&pair, &rep.trace.points);

    let e2 = NormedSpace::euclidean(2);
    let balls = make_two_cyclic(
        ConvexSet::ball(p(&[0.0, 0.0]), 1.0).unwrap(),
        ConvexSet::ball(p(&[4.0, 0.0]), 1.0).unwrap(),
        Mapping::affine(Matrix::scaled_identity(2, 0.5), p(&[2.5, 0.0])).unwrap(),
        Mapping::affine(Matrix::scaled_identity(2, 0.5), p(&[-0.5, 0.0])).unwrap(),
        None,
    )
    .unwrap();
    let mut worst_ball = 0.0f64;
    let mut ball_parity = true;
    let mut rng = CounterRng::new(606);
    for _ in 0..20 {
        let x0 = balls.a.sample(&mut rng).unwrap();
        let r = best_proximity_run(&e2, &balls, &x0, 1e-10, 10_000).map_err(|e| e.to_string())?;
        worst_ball = worst_ball.max((r.pair_distance - r.set_distance).abs());
        ball_parity &= parity_holds(&balls, &r.trace.points);
    }
    // dist(A, B) for two balls: |c₁ − c₂| − r₁ − r₂.
    let d = set_distance(&e2, &balls.a, &balls.b).map_err(|e| e.to_string())?;
    let detail = format!(
        "interval z1 = {:.12}, z2 = {:.12}, gap = {:.1e}; two balls worst |pair - D| = {worst_ball:.1e}, D = {d:.12}",
        rep.z1[0], rep.z2[0], rep.gap
    );
    if interval_ok && worst_ball <= 1e-6 && (d - 2.0).abs() <= 1e-8 && ball_parity {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_7() -> Outcome {
    let (s, c) = (30f64).to_radians().sin_cos();
    let rot = Matrix::from_row_major(2, vec![0.6 * c, -0.6 * s, 0.6 * s, 0.6 * c]).unwrap();
    let d0 = make_two_cyclic(
        ConvexSet::interval(0.0, 2.0).unwrap(),
        ConvexSet::interval(1.0, 3.0).unwrap(),
        Mapping::scaled_shift(0.5, p(&[0.75])),
        Mapping::scaled_shift(0.5, p(&[0.75])),
        None,
    )
    .unwrap();
    let fixtures: Vec<(&str, Mapping, usize, Option<ConvexSet>)> = vec![
        ("0.5z+1", Mapping::scaled_shift(0.5, p(&[1.0])), 1, None),
        ("0.6rot30", Mapping::affine(rot, p(&[1.0, 0.0])).unwrap(), 2, None),
        (
            "0.4I+c in 5-D",
            Mapping::affine(Matrix::scaled_identity(5, 0.4), p(&[1.0, -2.0, 0.5, 0.0, 3.0])).unwrap(),
            5,
            None,
        ),
        ("cyclic D=0", Mapping::Cyclic(Box::new(d0.clone())), 1, Some(d0.a.clone())),
    ];
    let mut details = Vec::new();
    for (k, (name, t, dim, region)) in fixtures.into_iter().enumerate() {
        let space = NormedSpace::euclidean(dim);
        let mut rng = CounterRng::new(700 + k as u64);
        let mut limits = Vec::new();
        for _ in 0..100 {
            let x0 = match &region {
                Some(set) => set.sample(&mut rng).unwrap(),
                None => p(&(0..dim).map(|_| rng.uniform(-100.0, 100.0)).collect::<Vec<_>>()),
            };
            let run = run_to_fixed_point(&space, &t, &x0, 1e-12, 100_000).map_err(|e| e.to_string())?;
            match run.verdict {
                OrbitVerdict::FixedPoint(z) => limits.push(z),
                _ => return Err(format!("{name}: a start failed to converge")),
            }
        }
        let mut spread = 0.0f64;
        for i in 0..limits.len() {
            for j in i + 1..limits.len() {
                spread = spread.max(space.distance(&limits[i], &limits[j]).unwrap());
            }
        }
        if spread > 1e-6 {
            return Err(format!("{name}: limits spread {spread:.2e}"));
        }
        details.push(format!("{name} {spread:.1e}"));
    }
    Ok(format!("100 starts each, max pairwise spread: {}", details.join(", ")))
}

fn criterion_8() -> Outcome {
    let sampler = |dim: usize, seed: u64| {
        let region = ConvexSet::boxed(p(&vec![-2.0; dim]), p(&vec![2.0; dim])).unwrap();
        PairSampler::Regions { x_region: region.clone(), y_region: region, count: 32, seed }
    };
    let e3 = NormedSpace::euclidean(3);
    let half = Mapping::affine(Matrix::scaled_identity(3, 0.5), p(&[0.0, 0.0, 0.0])).unwrap();
    let admissible = ParamSequences::constant(0.25, 0.2, MuPolicy::FromData);
    let c_half = classify_mapping(&e3, &half, &admissible, &sampler(3, 81), 32).map_err(|e| e.to_string())?;

    let e2 = NormedSpace::euclidean(2);
    let rot = Mapping::ScaledRotation { angle: 1.0, scale: 1.0 };
    let iso = ParamSequences::constant(1.0, 0.0, MuPolicy::Constant(0.0));
    let c_rot = classify_mapping(&e2, &rot, &iso, &sampler(2, 82), 32).map_err(|e| e.to_string())?;

    let e1 = NormedSpace::euclidean(1);
    let double = Mapping::scaled_shift(2.0, p(&[0.0]));
    let mut double_verdicts = Vec::new();
    for mu in [MuPolicy::FromData, MuPolicy::Constant(0.0)] {
        let params = ParamSequences::constant(1.0, 0.0, mu);
        let c = classify_mapping(&e1, &double, &params, &sampler(1, 83), 32).map_err(|e| e.to_string())?;
        double_verdicts.push(c.verdict);
    }

    let detail = format!(
        "0.5I -> {}, rotation -> {} (limsup {:.1e}), 2z -> {:?}",
        c_half.verdict,
        c_rot.verdict,
        c_rot.limsup_estimate,
        double_verdicts.iter().map(|v| v.as_str()).collect::<Vec<_>>()
    );
    let ok = c_half.verdict == Verdict::BetaStrictContractiveIS
        && c_rot.verdict == Verdict::AsymptoticallyNonexpansive
        && c_rot.limsup_estimate.abs() <= 1e-9
        && double_verdicts.iter().all(|v| *v == Verdict::Unclassified);
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn config_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn criterion_9() -> Outcome {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(config_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    let mut rows = 0usize;
    for path in &paths {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let cfg = load_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let first = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let second = run_experiment(&load_config(&text).unwrap()).map_err(|e| e.to_string())?;
        for (s1, s2) in first.sections.iter().zip(&second.sections) {
            if csv_string(&s1.rows).as_bytes() != csv_string(&s2.rows).as_bytes() {
                return Err(format!("{}: section {} differs between runs", path.display(), s1.label));
            }
            rows += s1.rows.len();
        }
        if first.summary_toml() != second.summary_toml() {
            return Err(format!("{}: summaries differ", path.display()));
        }
    }
    if paths.is_empty() {
        return Err("no acceptance configs found".into());
    }
    Ok(format!("{} configs rerun, {rows} rows byte-identical", paths.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("mu_min matches grid feasibility scan", criterion_1),
        ("sandwich inequality", criterion_2),
        ("slack tautology", criterion_3),
        ("case bounds and chained product bound", criterion_4),
        ("fixed-point convergence", criterion_5),
        ("best proximity pairs", criterion_6),
        ("uniqueness of limits", criterion_7),
        ("classification sanity", criterion_8),
        ("rerun determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
