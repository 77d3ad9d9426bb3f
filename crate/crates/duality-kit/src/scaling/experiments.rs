//! Monte Carlo verification of rescaled dualities: the classical moment
//! duality between the neutral diffusion and the block-counting chain, the
//! finite-population count duality and its convergence to the diffusion /
//! branching-annihilating limit pair, and the monotonicity of the
//! coalescing limit pair.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::parallel::map_reduce;
use crate::pathsim::exchangeable::hypergeometric_duality_value;
use crate::pathsim::qvalue::QParameter;
use crate::report::{combined_se, Accumulator, Estimate, SimulationReport};
use crate::rng::mix;
use crate::scaling::gillespie::{
    simulate_annihilating_count_chain, simulate_ba_dual, simulate_count_chain,
    simulate_kingman_block, BranchingAnnihilatingSpec, CountChainSpec,
};
use crate::scaling::sde::{simulate_wf_sde, SdeSpec};

fn merge_pair(mut a: (Accumulator, Accumulator), b: (Accumulator, Accumulator)) -> (Accumulator, Accumulator) {
    a.0.merge(&b.0);
    a.1.merge(&b.1);
    a
}

/// Configuration of the classical moment-duality check
/// `E[X_t^{n0}] = E[x0^{N_t}]` for the neutral diffusion and the
/// block-counting chain.
#[derive(Debug, Clone, Copy)]
pub struct MomentDualityConfig {
    pub x0: f64,
    pub n0: u64,
    pub t: f64,
    pub replicas: u64,
    pub dt: f64,
    pub seed: u64,
}

pub fn mc_moment_duality(cfg: &MomentDualityConfig) -> Result<SimulationReport> {
    if !(0.0..=1.0).contains(&cfg.x0) || cfg.n0 == 0 {
        return Err(Error::Validation(
            "need x0 in [0, 1] and n0 >= 1 for the moment duality".into(),
        ));
    }
    let (diff_acc, block_acc) = map_reduce(
        cfg.replicas,
        || (Accumulator::default(), Accumulator::default()),
        |r, (diff, block)| {
            let spec = SdeSpec::classical(cfg.x0, cfg.dt, cfg.t);
            let x = simulate_wf_sde(&spec, mix(cfg.seed, &[1, r])).expect("valid spec");
            diff.push(x.terminal.powi(cfg.n0 as i32));
            let n_t = simulate_kingman_block(cfg.n0, 1.0, cfg.t, mix(cfg.seed, &[2, r]));
            block.push(cfg.x0.powi(n_t as i32));
        },
        merge_pair,
    );
    let gap = (diff_acc.mean() - block_acc.mean()).abs();
    let se = combined_se(diff_acc.std_error(), block_acc.std_error());
    Ok(SimulationReport {
        estimates: vec![
            Estimate {
                name: format!("E[X_t^{}]", cfg.n0),
                value: diff_acc.mean(),
                std_error: diff_acc.std_error(),
            },
            Estimate {
                name: format!("E[{}^N_t]", cfg.x0),
                value: block_acc.mean(),
                std_error: block_acc.std_error(),
            },
        ],
        replicas: cfg.replicas,
        seed: cfg.seed,
        passed: gap <= 3.0 * se,
        criterion: "|E[X_t^n0] - E[x0^N_t]| <= 3 * combined standard error".into(),
        elapsed_seconds: 0.0,
    })
}

/// Rate schedules for the population-size sweep; the scaling hypotheses are
/// `r_N / N -> alpha >= 0` and `b_N -> beta >= 0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum RateSchedule {
    /// `rate(N) = coefficient * N`.
    ProportionalToN { coefficient: f64 },
    /// `rate(N) = value`.
    Constant { value: f64 },
}

impl RateSchedule {
    pub fn rate(&self, n: u64) -> f64 {
        match self {
            RateSchedule::ProportionalToN { coefficient } => coefficient * n as f64,
            RateSchedule::Constant { value } => *value,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RescalingConfig {
    pub n_list: Vec<u64>,
    pub q: QParameter,
    pub r_schedule: RateSchedule,
    pub b_schedule: RateSchedule,
    /// `k0 = round(initial_fraction * N)`.
    pub initial_fraction: f64,
    /// Dual initial count, fixed in N (so `n_N / N -> 0`).
    pub n0: u64,
    pub t: f64,
    pub replicas: u64,
    pub sde_replicas: u64,
    pub sde_dt: f64,
    pub seed: u64,
}

/// One row of the convergence table (the CSV columns, in order).
#[derive(Debug, Clone, Serialize)]
pub struct RescalingRow {
    pub n: u64,
    /// Dual-side estimate of `E[(1 + (q-1) k0/N)^{Y_t}]`.
    pub lhs: f64,
    /// Forward-side estimate of `E[(1 + (q-1) X_t/N)^{n0}]`.
    pub rhs: f64,
    /// `|lhs - rhs|` of the displayed (binomial-form) sides.
    pub gap: f64,
    /// Combined standard error of `gap`.
    pub se: f64,
    pub limit_lhs: f64,
    pub limit_rhs: f64,
    /// Exact finite-N duality gap, measured with the hypergeometric kernel
    /// (the identity that holds at finite N).
    pub exact_gap: f64,
    pub exact_se: f64,
    /// Distance of the forward display side to the diffusion limit.
    pub gap_to_limit: f64,
    pub gap_to_limit_se: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RescalingReport {
    pub rows: Vec<RescalingRow>,
    pub limit_lhs: Estimate,
    pub limit_rhs: Estimate,
    /// Least-squares envelope coefficient for `gap_to_limit ~ C/N`.
    pub fitted_c: f64,
    pub exact_gaps_within_3se: bool,
    pub gaps_nonincreasing: bool,
    pub final_gap_within_envelope: bool,
    pub passed: bool,
    pub replicas: u64,
    pub seed: u64,
}

/// Sweep the population sizes, estimating both sides of the finite-N count
/// duality and the limiting moment-duality pair.
///
/// The exact finite-N identity uses the hypergeometric kernel; the displayed
/// sides use its binomial limit form `(1 + (q-1) k/N)^n`, whose distance to
/// the diffusion / branching-annihilating limit pair must shrink like `C/N`.
pub fn rescaling_experiment(cfg: &RescalingConfig) -> Result<RescalingReport> {
    if let RateSchedule::ProportionalToN { coefficient } = cfg.b_schedule {
        if coefficient != 0.0 {
            return Err(Error::HypothesisViolated(
                "b_N -> beta >= 0: the branching schedule must stay bounded in N".into(),
            ));
        }
    }
    if !(0.0..=1.0).contains(&cfg.initial_fraction) {
        return Err(Error::HypothesisViolated(
            "k0/N must be a fraction in [0, 1]".into(),
        ));
    }
    if cfg.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Validation("N list must be strictly increasing".into()));
    }
    // Limits of the schedules.
    let alpha = match cfg.r_schedule {
        RateSchedule::ProportionalToN { coefficient } => coefficient,
        RateSchedule::Constant { .. } => 0.0,
    };
    let beta = match cfg.b_schedule {
        RateSchedule::Constant { value } => value,
        RateSchedule::ProportionalToN { .. } => 0.0,
    };
    let qv = cfg.q.to_f64();
    let x0 = cfg.initial_fraction;

    // Limit pair: diffusion side E[(1 + (q-1) X_t)^{n0}] and
    // branching-annihilating side E[(1 + (q-1) x0)^{n_t}].
    let (sde_acc, ba_acc) = map_reduce(
        cfg.sde_replicas,
        || (Accumulator::default(), Accumulator::default()),
        |r, (sde, ba)| {
            let spec = SdeSpec {
                alpha,
                beta,
                x0,
                dt: cfg.sde_dt,
                horizon: cfg.t,
            };
            let x = simulate_wf_sde(&spec, mix(cfg.seed, &[10, r])).expect("valid spec");
            sde.push((1.0 + (qv - 1.0) * x.terminal).powi(cfg.n0 as i32));
            let ba_spec = BranchingAnnihilatingSpec {
                beta,
                alpha,
                initial: cfg.n0,
                horizon: cfg.t,
                cap: 1_000_000,
            };
            let n_t = simulate_ba_dual(&ba_spec, mix(cfg.seed, &[11, r])).expect("under cap");
            let base = 1.0 + (qv - 1.0) * x0;
            ba.push(if n_t == 0 { 1.0 } else { base.powi(n_t as i32) });
        },
        merge_pair,
    );
    let limit_rhs = sde_acc.mean(); // diffusion (forward) side
    let limit_lhs = ba_acc.mean(); // dual side

    let mut rows = Vec::with_capacity(cfg.n_list.len());
    for (ni, &n) in cfg.n_list.iter().enumerate() {
        let k0 = (cfg.initial_fraction * n as f64).round() as u64;
        let r_n = cfg.r_schedule.rate(n);
        let b_n = cfg.b_schedule.rate(n);
        let base = 1.0 + (qv - 1.0) * k0 as f64 / n as f64;

        // Forward side: terminal count of the mixed count chain.
        let (rhs_disp, rhs_exact) = map_reduce(
            cfg.replicas,
            || (Accumulator::default(), Accumulator::default()),
            |r, (disp, exact)| {
                let spec = CountChainSpec {
                    n,
                    r_rate: r_n,
                    b_rate: b_n,
                    horizon: cfg.t,
                    initial: k0,
                };
                let k_t =
                    simulate_count_chain(&spec, mix(cfg.seed, &[20, ni as u64, r])).expect("valid");
                let b_disp = 1.0 + (qv - 1.0) * k_t as f64 / n as f64;
                disp.push(b_disp.powi(cfg.n0 as i32));
                exact.push(hypergeometric_duality_value(
                    n as usize,
                    k_t as usize,
                    cfg.n0 as usize,
                    cfg.q,
                ));
            },
            merge_pair,
        );
        // Dual side: terminal count of the annihilating dual count chain.
        let (lhs_disp, lhs_exact) = map_reduce(
            cfg.replicas,
            || (Accumulator::default(), Accumulator::default()),
            |r, (disp, exact)| {
                let spec = CountChainSpec {
                    n,
                    r_rate: r_n,
                    b_rate: b_n,
                    horizon: cfg.t,
                    initial: cfg.n0,
                };
                let y_t = simulate_annihilating_count_chain(&spec, mix(cfg.seed, &[21, ni as u64, r]))
                    .expect("valid");
                disp.push(if y_t == 0 { 1.0 } else { base.powi(y_t as i32) });
                exact.push(hypergeometric_duality_value(
                    n as usize,
                    k0 as usize,
                    y_t as usize,
                    cfg.q,
                ));
            },
            merge_pair,
        );

        let gap = (lhs_disp.mean() - rhs_disp.mean()).abs();
        let se = combined_se(lhs_disp.std_error(), rhs_disp.std_error());
        let exact_gap = (lhs_exact.mean() - rhs_exact.mean()).abs();
        let exact_se = combined_se(lhs_exact.std_error(), rhs_exact.std_error());
        let gap_to_limit = (rhs_disp.mean() - limit_rhs).abs();
        let gap_to_limit_se = combined_se(rhs_disp.std_error(), sde_acc.std_error());
        rows.push(RescalingRow {
            n,
            lhs: lhs_disp.mean(),
            rhs: rhs_disp.mean(),
            gap,
            se,
            limit_lhs,
            limit_rhs,
            exact_gap,
            exact_se,
            gap_to_limit,
            gap_to_limit_se,
        });
    }

    // Acceptance pieces: the exact finite-N duality must hold statistically
    // at each N; the distance to the limit must not grow (within MC slack)
    // and the last gap must sit under 3 SE plus a fitted C/N envelope.
    let exact_gaps_within_3se = rows.iter().all(|r| r.exact_gap <= 3.0 * r.exact_se);
    let gaps_nonincreasing = rows.windows(2).all(|w| {
        w[1].gap_to_limit <= w[0].gap_to_limit + 3.0 * (w[0].gap_to_limit_se + w[1].gap_to_limit_se)
    });
    let fitted_c = {
        let num: f64 = rows.iter().map(|r| r.gap_to_limit / r.n as f64).sum();
        let den: f64 = rows.iter().map(|r| 1.0 / (r.n as f64 * r.n as f64)).sum();
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    };
    let last = rows.last().expect("nonempty N list");
    let final_gap_within_envelope =
        last.gap_to_limit <= 3.0 * last.gap_to_limit_se + fitted_c / last.n as f64;
    let passed = exact_gaps_within_3se && gaps_nonincreasing && final_gap_within_envelope;

    Ok(RescalingReport {
        rows,
        limit_lhs: Estimate {
            name: "E[(1+(q-1)x0)^n_t] (dual limit)".into(),
            value: limit_lhs,
            std_error: ba_acc.std_error(),
        },
        limit_rhs: Estimate {
            name: "E[(1+(q-1)X_t)^n0] (diffusion limit)".into(),
            value: limit_rhs,
            std_error: sde_acc.std_error(),
        },
        fitted_c,
        exact_gaps_within_3se,
        gaps_nonincreasing,
        final_gap_within_envelope,
        passed,
        replicas: cfg.replicas,
        seed: cfg.seed,
    })
}

/// Convergence-table CSV with the columns
/// `N, lhs, rhs, gap, se, limit_lhs, limit_rhs`.
pub fn rescaling_csv(report: &RescalingReport) -> String {
    let mut out = String::from("N,lhs,rhs,gap,se,limit_lhs,limit_rhs\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
            r.n, r.lhs, r.rhs, r.gap, r.se, r.limit_lhs, r.limit_rhs
        ));
    }
    out
}

#[derive(Debug, Clone)]
pub struct MonotoneLimitConfig {
    pub alpha: f64,
    pub t: f64,
    pub x0_low: f64,
    pub x0_high: f64,
    pub z_grid: Vec<f64>,
    pub n0_low: u64,
    pub n0_high: u64,
    pub replicas: u64,
    pub dt: f64,
    pub seed: u64,
}

/// Empirical stochastic-monotonicity check of the coalescing (q = 0) limit
/// pair: larger diffusion starts dominate in the tail ordering, and larger
/// block counts dominate, each within 3 combined standard errors.
pub fn monotone_limit_check(cfg: &MonotoneLimitConfig, q: QParameter) -> Result<SimulationReport> {
    if !q.is_zero() {
        return Err(Error::Validation(
            "the monotone-limit check applies to the coalescing case q = 0".into(),
        ));
    }
    let tails = |x0: f64, salt: u64| -> Vec<Accumulator> {
        map_reduce(
            cfg.replicas,
            || vec![Accumulator::default(); cfg.z_grid.len()],
            |r, accs: &mut Vec<Accumulator>| {
                let spec = SdeSpec {
                    alpha: cfg.alpha,
                    beta: 0.0,
                    x0,
                    dt: cfg.dt,
                    horizon: cfg.t,
                };
                let v = simulate_wf_sde(&spec, mix(cfg.seed, &[salt, r]))
                    .expect("valid spec")
                    .terminal;
                for (zi, &z) in cfg.z_grid.iter().enumerate() {
                    accs[zi].push(if v >= z { 1.0 } else { 0.0 });
                }
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    x.merge(y);
                }
                a
            },
        )
    };
    let low = tails(cfg.x0_low, 30);
    let high = tails(cfg.x0_high, 31);

    let mut passed = true;
    let mut estimates = Vec::new();
    for (zi, &z) in cfg.z_grid.iter().enumerate() {
        let (lo, hi) = (&low[zi], &high[zi]);
        if lo.mean() > hi.mean() + 3.0 * combined_se(lo.std_error(), hi.std_error()) {
            passed = false;
        }
        estimates.push(Estimate {
            name: format!("P(X_t >= {z}) from x0 = {}", cfg.x0_low),
            value: lo.mean(),
            std_error: lo.std_error(),
        });
        estimates.push(Estimate {
            name: format!("P(X_t >= {z}) from x0 = {}", cfg.x0_high),
            value: hi.mean(),
            std_error: hi.std_error(),
        });
    }

    // Block-count side: coupling by subset makes the ordering exact in law.
    let block_tail = |n0: u64, salt: u64| -> Vec<Accumulator> {
        map_reduce(
            cfg.replicas,
            || vec![Accumulator::default(); cfg.n0_high as usize],
            |r, accs: &mut Vec<Accumulator>| {
                let n_t = simulate_kingman_block(n0, 2.0 * cfg.alpha, cfg.t, mix(cfg.seed, &[salt, r]));
                for (zi, acc) in accs.iter_mut().enumerate() {
                    acc.push(if n_t >= (zi + 1) as u64 { 1.0 } else { 0.0 });
                }
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    x.merge(y);
                }
                a
            },
        )
    };
    let b_low = block_tail(cfg.n0_low, 40);
    let b_high = block_tail(cfg.n0_high, 41);
    for zi in 0..cfg.n0_high as usize {
        let (lo, hi) = (&b_low[zi], &b_high[zi]);
        if lo.mean() > hi.mean() + 3.0 * combined_se(lo.std_error(), hi.std_error()) {
            passed = false;
        }
    }

    Ok(SimulationReport {
        estimates,
        replicas: cfg.replicas,
        seed: cfg.seed,
        passed,
        criterion: "tail probabilities ordered within 3 combined standard errors on the z-grid"
            .into(),
        elapsed_seconds: 0.0,
    })
}
