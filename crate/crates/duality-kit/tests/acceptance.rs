//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible under `--nocapture`) and asserting the stated
//! tolerances and runtime budgets.

use std::time::Instant;

use duality_kit::algebra::{
    build_tensor_duality, check_duality_discrete, check_measure_duality, check_monotone,
    nondegeneracy_check, sep_symmetry_check, siegmund_dual, solve_dual, spectrum_compare,
    SolveStatus, TensorKind,
};
use duality_kit::cone;
use duality_kit::error::Error;
use duality_kit::linalg::{DualityMatrix, GeneratorMatrix, Mat, StochasticMatrix};
use duality_kit::pathsim::{
    hypergeometric_duality_value, is_q_dual_mechanism, mc_exchangeable_duality,
    rw_siegmund_pathwise, sample_graphical_representation, verify_strong_pathwise,
    BasicMechanism, ExchangeableConfig, QParameter, RateTable, SpinConfiguration,
};
use duality_kit::rng::Stream;
use duality_kit::scaling::{
    mc_moment_duality, rescaling_experiment, MomentDualityConfig, RateSchedule, RescalingConfig,
};

fn conclude(id: u32, description: &str, passed: bool, elapsed_s: f64, budget_s: f64) {
    let within_budget = elapsed_s < budget_s;
    let verdict = if passed && within_budget { "PASS" } else { "FAIL" };
    println!(
        "criterion {id:2}: {verdict} ({elapsed_s:.3}s / budget {budget_s}s) - {description}"
    );
    assert!(passed, "criterion {id} failed: {description}");
    assert!(
        within_budget,
        "criterion {id} exceeded its runtime budget: {elapsed_s:.3}s >= {budget_s}s"
    );
}

#[test]
fn criterion_01_mechanism_table_and_dual_pairs() {
    let start = Instant::now();
    let q0 = QParameter::ZERO;
    let qm1 = QParameter::NEG_ONE;
    let fr = BasicMechanism::resampling();
    let fc = BasicMechanism::walk_coalescence();
    let fa = BasicMechanism::walk_annihilation();
    let fd = BasicMechanism::death();
    let fba = BasicMechanism::branching_annihilation();

    let mut ok = is_q_dual_mechanism(&fr, &fc, q0).dual;
    ok &= is_q_dual_mechanism(&fr, &fa, qm1).dual;
    ok &= is_q_dual_mechanism(&fd, &fd, qm1).dual;
    ok &= is_q_dual_mechanism(&fba, &fba, qm1).dual;
    let bad = is_q_dual_mechanism(&fr, &fd, q0);
    ok &= !bad.dual && bad.witness.is_some();
    // The table rows themselves, bit-exact.
    ok &= fr.apply((1, 0)) == (1, 1);
    ok &= fa.apply((1, 1)) == (0, 0);
    ok &= fba.apply((1, 1)) == (1, 0);
    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        1,
        "mechanism table and q-dual pairs reproduced with a non-dual witness",
        ok,
        elapsed,
        1e-3,
    );
}

#[test]
fn criterion_02_wide_h_extremals_and_kernel_exact() {
    let h =
        DualityMatrix::from_rows(&[vec![2.0, 0.0, 1.0, 0.0], vec![0.0, 2.0, 1.0, 2.0]]).unwrap();
    let start = Instant::now();
    let (structure, pi) = cone::decomposition_kernel(&h).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let mut ok = structure.extremal_indices == vec![0, 1];
    let want = [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.0, 1.0]];
    for y in 0..4 {
        for e in 0..2 {
            ok &= pi.mat()[(y, e)] == want[y][e]; // exact, dyadic data
        }
    }
    conclude(
        2,
        "extremal indices {0,1} and kernel ((1,0),(0,1),(1/2,1/2),(0,1)) exact",
        ok,
        elapsed,
        10e-3,
    );
}

#[test]
fn criterion_03_continuous_dual_generator_construction() {
    let h =
        DualityMatrix::from_rows(&[vec![2.0, 0.0, 1.0, 0.0], vec![0.0, 2.0, 1.0, 2.0]]).unwrap();
    let l = GeneratorMatrix::from_rows(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
    let start = Instant::now();
    let dual = cone::continuous_dual_generator(&l, &h).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    // (a) Q-matrix validity of Lhat.
    let lh = dual.l_hat.mat();
    let mut ok = true;
    for i in 0..4 {
        let row_sum: f64 = lh.row(i).iter().sum();
        ok &= row_sum.abs() <= 1e-10;
        for j in 0..4 {
            if i != j {
                ok &= lh[(i, j)] >= -1e-12;
            }
        }
    }
    // (b) generator duality residual and sampled semi-group residuals.
    ok &= dual.report.generator_duality_residual <= 1e-9;
    ok &= dual
        .report
        .semigroup_residuals
        .iter()
        .all(|&(t, r)| (t == 0.1 || t == 1.0) && r <= 1e-8);
    conclude(
        3,
        "dual generator is a valid Q-matrix with generator and semi-group residuals in tolerance",
        ok,
        elapsed,
        100e-3,
    );
}

#[test]
fn criterion_04_absorbed_walk_diagonal_self_duality() {
    let p = StochasticMatrix::from_rows(&[
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.5, 0.0, 0.5, 0.0],
        vec![0.0, 0.5, 0.0, 0.5],
        vec![0.0, 0.0, 0.0, 1.0],
    ])
    .unwrap();
    let start = Instant::now();
    let h = DualityMatrix::diagonal(&[0.0, 1.0, 1.0, 0.0]);
    let residual = check_duality_discrete(&p, &p, &h).unwrap();
    // Killed walk on the interior with the uniform measure.
    let killed = Mat::from_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
    let measure_residual = check_measure_duality(&killed, &killed, &[1.0, 1.0]).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        4,
        "diagonal self-duality of the absorbed walk and killed-walk measure duality are exact",
        residual == 0.0 && measure_residual == 0.0,
        elapsed,
        1e-3,
    );
}

/// Random doubly stochastic matrix as a convex mix of permutations.
fn random_doubly_stochastic(s: &mut Stream, n: usize) -> StochasticMatrix {
    let k = 4;
    let mut weights: Vec<f64> = (0..k).map(|_| s.uniform_open()).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut m = vec![vec![0.0; n]; n];
    for &w in &weights {
        // Random permutation by partial shuffle.
        let mut perm: Vec<usize> = (0..n).collect();
        for i in 0..n {
            let j = i + s.below((n - i) as u64) as usize;
            perm.swap(i, j);
        }
        for (i, &pi) in perm.iter().enumerate() {
            m[i][pi] += w;
        }
    }
    StochasticMatrix::from_rows(&m).unwrap()
}

/// Random reversible chain from symmetric positive weights, with its
/// stationary vector.
fn random_reversible(s: &mut Stream, n: usize) -> (StochasticMatrix, Vec<f64>) {
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = 0.1 + s.uniform();
            w[i][j] = v;
            w[j][i] = v;
        }
    }
    let sums: Vec<f64> = w.iter().map(|row| row.iter().sum()).collect();
    let total: f64 = sums.iter().sum();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| w[i][j] / sums[i]).collect())
        .collect();
    let pi: Vec<f64> = sums.iter().map(|x| x / total).collect();
    (StochasticMatrix::from_rows(&rows).unwrap(), pi)
}

#[test]
fn criterion_05_spectra_of_solved_duals_match() {
    let start = Instant::now();
    let mut s = Stream::from_seed(501);
    let mut ok = true;
    for instance in 0..20 {
        let (p, h) = if instance % 2 == 0 {
            (random_doubly_stochastic(&mut s, 4), DualityMatrix::identity(4))
        } else {
            let (p, pi) = random_reversible(&mut s, 4);
            let diag: Vec<f64> = pi.iter().map(|x| 1.0 / x).collect();
            (p, DualityMatrix::diagonal(&diag))
        };
        ok &= nondegeneracy_check(&h).invertible;
        let solved = solve_dual(&p, &h).unwrap();
        ok &= solved.status == SolveStatus::ExistsStochastic;
        let q = solved.dual.unwrap();
        let rep = spectrum_compare(p.mat(), q.mat()).unwrap();
        ok &= rep.pass && rep.max_matched_distance <= 1e-8;
    }
    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        5,
        "20 random 4-state instances with stochastic duals have matching eigenvalue multisets",
        ok,
        elapsed,
        1.0,
    );
}

#[test]
fn criterion_06_sep_symmetry_and_self_duality() {
    let start = Instant::now();
    let mut ok = true;
    for m in 2..=6 {
        let rep = sep_symmetry_check(m).unwrap();
        ok &= rep.commutator_residual <= 1e-12;
        ok &= rep.duality_residual <= 1e-12;
    }
    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        6,
        "exclusion-process commutation and subset self-duality residuals vanish for M = 2..6",
        ok,
        elapsed,
        5.0,
    );
}

#[test]
fn criterion_07_exact_pathwise_duality_all_pairs() {
    let start = Instant::now();
    let rates = RateTable::Uniform {
        rate: 1.0,
        n_labels: 1,
    };
    let g = sample_graphical_representation(4, &rates, 1.0, 7001);
    let mut ok = !g.events.is_empty();
    for (q, f, gm) in [
        (
            QParameter::ZERO,
            BasicMechanism::resampling(),
            BasicMechanism::walk_coalescence(),
        ),
        (
            QParameter::NEG_ONE,
            BasicMechanism::resampling(),
            BasicMechanism::walk_annihilation(),
        ),
    ] {
        for xi in 0..16usize {
            for yi in 0..16usize {
                let rep = verify_strong_pathwise(
                    &SpinConfiguration::from_index(4, xi),
                    &SpinConfiguration::from_index(4, yi),
                    q,
                    &g,
                    std::slice::from_ref(&f),
                    std::slice::from_ref(&gm),
                )
                .unwrap();
                ok &= rep.holds;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        7,
        "voter/coalescing and voter/annihilating H-values exact at every cut for all 256 pairs",
        ok,
        elapsed,
        10.0,
    );
}

#[test]
fn criterion_08_absorbed_reflected_walk_indicators() {
    let start = Instant::now();
    let mut s = Stream::from_seed(801);
    let mut ok = true;
    for run in 0..1000u64 {
        let x = s.below(21);
        let y = s.below(21);
        let rep = rw_siegmund_pathwise(x, y, 100, 9000 + run);
        ok &= rep.holds;
    }
    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        8,
        "1000 seeded absorbed/reflected walk runs keep the indicator chain exactly",
        ok,
        elapsed,
        5.0,
    );
}

#[test]
fn criterion_09_exchangeable_count_duality_statistical() {
    let start = Instant::now();
    let cfg = ExchangeableConfig {
        n_sites: 20,
        a: 5,
        b: 3,
        q: QParameter::ZERO,
        rate: 1.0,
        horizon: 1.0,
        s_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        replicas: 100_000,
        seed: 901,
        forward: BasicMechanism::resampling(),
        backward: BasicMechanism::walk_coalescence(),
    };
    let rep = mc_exchangeable_duality(&cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    for e in &rep.estimates {
        println!("    {}: {:.6} +- {:.6}", e.name, e.value, e.std_error);
    }
    conclude(
        9,
        "count-level duality estimates agree across the s-grid within 3 pooled SE",
        rep.passed,
        elapsed,
        120.0,
    );
}

#[test]
fn criterion_10_moment_duality_and_truncated_generators() {
    let start = Instant::now();
    let rep = mc_moment_duality(&MomentDualityConfig {
        x0: 0.5,
        n0: 3,
        t: 0.5,
        replicas: 100_000,
        dt: 1e-4,
        seed: 1001,
    })
    .unwrap();
    println!(
        "    diffusion side {:.6} +- {:.6}, block side {:.6} +- {:.6}",
        rep.estimates[0].value,
        rep.estimates[0].std_error,
        rep.estimates[1].value,
        rep.estimates[1].std_error
    );
    let mut ok = rep.passed;

    // Generator-level check on grid truncations: the residual of
    // L^X H = H (L^Y)^T equals the finite-difference truncation error,
    // verified against explicit brute-force products and the analytic
    // series for the central-difference remainder.
    let m = 21usize; // diffusion grid points on [0, 1]
    let n_max = 6usize;
    let hstep = 1.0 / (m - 1) as f64;
    let grid: Vec<f64> = (0..m).map(|i| i as f64 * hstep).collect();
    let mut lx = vec![vec![0.0; m]; m];
    for (i, &x) in grid.iter().enumerate().take(m - 1).skip(1) {
        let c = 0.5 * x * (1.0 - x) / (hstep * hstep);
        lx[i][i - 1] += c;
        lx[i][i] -= 2.0 * c;
        lx[i][i + 1] += c;
    }
    let mut ly = vec![vec![0.0; n_max + 1]; n_max + 1];
    for n in 2..=n_max {
        let rate = (n * (n - 1)) as f64 / 2.0;
        ly[n][n - 1] += rate;
        ly[n][n] -= rate;
    }
    let hmat: Vec<Vec<f64>> = grid
        .iter()
        .map(|&x| (0..=n_max).map(|n| x.powi(n as i32)).collect())
        .collect();

    let lx_m = GeneratorMatrix::from_rows(&lx).unwrap();
    let ly_m = GeneratorMatrix::from_rows(&ly).unwrap();
    let h_m = DualityMatrix::from_rows(&hmat).unwrap();
    let impl_residual = lx_m
        .mat()
        .matmul(h_m.mat())
        .max_abs_diff(&h_m.mat().matmul(&ly_m.mat().transpose()));

    // Brute-force product oracle with plain scalar loops.
    let mut oracle_residual = 0.0f64;
    for i in 0..m {
        for n in 0..=n_max {
            let mut lhs = 0.0;
            for k in 0..m {
                lhs += lx[i][k] * hmat[k][n];
            }
            let mut rhs = 0.0;
            for np in 0..=n_max {
                rhs += hmat[i][np] * ly[n][np];
            }
            oracle_residual = oracle_residual.max((lhs - rhs).abs());
        }
    }
    ok &= (impl_residual - oracle_residual).abs() <= 1e-12;

    // Documented truncation error: the exact central-difference remainder
    // (1/2) x (1-x) * (2/h^2) * sum_{j >= 2} C(n, 2j) h^{2j} x^{n-2j}.
    let binom = |n: usize, k: usize| -> f64 {
        if k > n {
            return 0.0;
        }
        let mut v = 1.0;
        for i in 0..k {
            v = v * (n - i) as f64 / (i + 1) as f64;
        }
        v
    };
    let mut analytic = 0.0f64;
    for (i, &x) in grid.iter().enumerate().take(m - 1).skip(1) {
        let _ = i;
        for n in 0..=n_max {
            let mut series = 0.0;
            let mut j = 2;
            while 2 * j <= n {
                series += binom(n, 2 * j) * hstep.powi(2 * j as i32) * x.powi((n - 2 * j) as i32);
                j += 1;
            }
            let err = 0.5 * x * (1.0 - x) * 2.0 / (hstep * hstep) * series;
            analytic = analytic.max(err.abs());
        }
    }
    println!(
        "    truncation residual {impl_residual:.3e} (oracle {oracle_residual:.3e}, analytic {analytic:.3e})"
    );
    ok &= (impl_residual - analytic).abs() <= 1e-12;

    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        10,
        "moment duality within 3 SE and truncated-generator residual equals the truncation error",
        ok,
        elapsed,
        300.0,
    );
}

#[test]
fn criterion_11_rescaling_convergence_table() {
    let start = Instant::now();
    let cfg = RescalingConfig {
        n_list: vec![50, 100, 200, 400],
        q: QParameter::NEG_ONE,
        r_schedule: RateSchedule::ProportionalToN { coefficient: 1.0 },
        b_schedule: RateSchedule::Constant { value: 0.5 },
        initial_fraction: 0.3,
        n0: 2,
        t: 0.5,
        replicas: 30_000,
        sde_replicas: 50_000,
        sde_dt: 1e-4,
        seed: 1101,
    };
    let rep = rescaling_experiment(&cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    for row in &rep.rows {
        println!(
            "    N = {:4}: lhs {:.5} rhs {:.5} exact gap {:.5} (3SE {:.5}) gap-to-limit {:.5}",
            row.n,
            row.lhs,
            row.rhs,
            row.exact_gap,
            3.0 * row.exact_se,
            row.gap_to_limit
        );
    }
    println!(
        "    limits: dual side {:.5}, diffusion side {:.5}, fitted C {:.4}",
        rep.limit_lhs.value, rep.limit_rhs.value, rep.fitted_c
    );
    conclude(
        11,
        "finite-N duality gaps within 3 SE; limit gap non-increasing with C/N envelope at the end",
        rep.passed,
        elapsed,
        600.0,
    );
}

#[test]
fn criterion_12_siegmund_round_trip_random_suite() {
    let start = Instant::now();
    let mut s = Stream::from_seed(1201);
    let mut ok = true;
    for run in 0..200 {
        let n = 2 + (run % 4) as usize; // sizes 2..5
        // Random monotone chain: nondecreasing tail functions built by
        // cumulative maxima of random tails.
        let mut g = vec![vec![0.0; n + 1]; n];
        for x in 0..n {
            let mut tails: Vec<f64> = (1..n).map(|_| s.uniform()).collect();
            tails.sort_by(|a, b| b.total_cmp(a));
            g[x][0] = 1.0;
            for z in 1..n {
                let candidate = tails[z - 1];
                g[x][z] = if x == 0 {
                    candidate
                } else {
                    g[x - 1][z].max(candidate)
                };
            }
            g[x][n] = 0.0;
        }
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|x| (0..n).map(|z| (g[x][z] - g[x][z + 1]).max(0.0)).collect())
            .collect();
        let p = StochasticMatrix::from_rows(&rows).unwrap();
        ok &= check_monotone(&p).unwrap().monotone;
        let dual = siegmund_dual(&p).unwrap();
        // Defining identity, enumerated over all pairs.
        let q = dual.restricted();
        for x in 0..n {
            for y in 0..n {
                let lhs: f64 = (y..n).map(|xp| p.mat()[(x, xp)]).sum();
                let rhs: f64 = (0..=x).map(|xp| q[(y, xp)]).sum();
                ok &= (lhs - rhs).abs() <= 1e-12;
            }
        }
        ok &= dual.duality_residual <= 1e-12;
    }
    // Non-monotone inputs are rejected with a witness.
    let flip = StochasticMatrix::from_rows(&[vec![0.1, 0.9], vec![0.9, 0.1]]).unwrap();
    match siegmund_dual(&flip) {
        Err(Error::NotMonotone { x: 0, y: 1, z: 1 }) => {}
        other => {
            println!("    unexpected rejection outcome: {other:?}");
            ok = false;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        12,
        "200 random monotone chains satisfy the dual identity exactly; non-monotone rejected",
        ok,
        elapsed,
        1.0,
    );
}

#[test]
fn tensor_duality_entries_exhaustive() {
    // Companion regression used by several criteria: tensor entries equal
    // their combinatorial definitions, exhaustively up to 6 sites.
    for n in 1..=6usize {
        let hc = build_tensor_duality(TensorKind::Coalescing, n).unwrap();
        let ha = build_tensor_duality(TensorKind::Annihilating, n).unwrap();
        for x in 0..(1usize << n) {
            for y in 0..(1usize << n) {
                let overlap = (x & y).count_ones();
                assert_eq!(hc.mat()[(x, y)], if overlap == 0 { 1.0 } else { 0.0 });
                assert_eq!(ha.mat()[(x, y)], if overlap % 2 == 0 { 1.0 } else { -1.0 });
            }
        }
    }
    // Hypergeometric values used by criterion 9's kernel: product formula.
    assert_eq!(
        hypergeometric_duality_value(4, 2, 2, QParameter::ZERO),
        1.0 / 6.0
    );
}
