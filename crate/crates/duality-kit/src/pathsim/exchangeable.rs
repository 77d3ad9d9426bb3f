//! Count-level duality of exchangeable spin systems.
//!
//! When the arrow rates are uniform over pairs, the set-valued processes stay
//! exchangeable and their occupation counts are Markov; the duality then
//! descends to the counts with the hypergeometric kernel
//! `Htilde_{N,q}(a, b) = E[q^Z]`, `Z ~ Hyp(N, a, b)`. At `q = 0` this is the
//! probability of drawing an empty overlap, `Hyp(N, a, b)(0)`.

use crate::error::{Error, Result};
use crate::pathsim::graphical::{
    apply_backward, sample_graphical_representation, RateTable, SpinConfiguration,
};
use crate::pathsim::mechanism::{is_q_dual_mechanism, BasicMechanism};
use crate::pathsim::qvalue::QParameter;
use crate::report::{combined_se, Accumulator, Estimate, SimulationReport};
use crate::rng::{mix, tag, Stream};

fn checked_binomial(n: u64, k: u64) -> Option<i128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as i128)?;
        acc /= (i + 1) as i128;
    }
    Some(acc)
}

/// Exact rational evaluation of `E[q^Z]`, `Z ~ Hyp(n, a, b)`, as an i128
/// fraction. `None` when the intermediate products overflow.
fn hyp_expectation_exact(n: u64, a: u64, b: u64, q: QParameter) -> Option<f64> {
    let p = q.numer() as i128;
    let r = q.denom() as i128;
    // E[q^Z] = sum_k C(a,k) C(n-a, b-k) p^k r^(b-k) / (C(n,b) r^b).
    let mut numer: i128 = 0;
    let k_lo = a.saturating_add(b).saturating_sub(n).min(b);
    for k in 0..=a.min(b) {
        if k < k_lo {
            continue;
        }
        let ways = checked_binomial(a, k)?.checked_mul(checked_binomial(n - a, b - k)?)?;
        let mut qpow: i128 = 1;
        for _ in 0..k {
            qpow = qpow.checked_mul(p)?;
        }
        for _ in 0..(b - k) {
            qpow = qpow.checked_mul(r)?;
        }
        numer = numer.checked_add(ways.checked_mul(qpow)?)?;
    }
    let mut denom = checked_binomial(n, b)?;
    for _ in 0..b {
        denom = denom.checked_mul(r)?;
    }
    Some(numer as f64 / denom as f64)
}

/// Log-factorial table evaluation for large parameters: sums the signed
/// series `sum_k sign(q^k) exp(ln pmf(k) + k ln|q|)`.
fn hyp_expectation_logspace(n: u64, a: u64, b: u64, q: QParameter) -> f64 {
    let ln_fact: Vec<f64> = {
        let mut v = vec![0.0f64; (n + 1) as usize];
        for i in 1..=n as usize {
            v[i] = v[i - 1] + (i as f64).ln();
        }
        v
    };
    let lf = |x: u64| ln_fact[x as usize];
    let ln_choose = |nn: u64, kk: u64| lf(nn) - lf(kk) - lf(nn - kk);
    let qv = q.to_f64();
    let k_lo = a.saturating_add(b).saturating_sub(n);
    let mut total = 0.0;
    for k in k_lo..=a.min(b) {
        let ln_pmf = ln_choose(a, k) + ln_choose(n - a, b - k) - ln_choose(n, b);
        let term = if qv == 0.0 {
            if k == 0 {
                ln_pmf.exp()
            } else {
                0.0
            }
        } else {
            let sign = if qv < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            sign * (ln_pmf + k as f64 * qv.abs().ln()).exp()
        };
        total += term;
    }
    total
}

/// `Htilde_{N,q}(a, b) = E[q^Z]` for `Z ~ Hyp(N, a, b)`: the probability
/// generating function of the overlap of a uniformly random `b`-set with a
/// fixed `a`-set out of `N` items. Exact rational arithmetic up to `N = 30`
/// (or until i128 overflows), log-gamma beyond.
pub fn hypergeometric_duality_value(n: usize, a: usize, b: usize, q: QParameter) -> f64 {
    assert!(a <= n && b <= n, "need 0 <= a, b <= N");
    if n <= 30 {
        if let Some(v) = hyp_expectation_exact(n as u64, a as u64, b as u64, q) {
            return v;
        }
    }
    hyp_expectation_logspace(n as u64, a as u64, b as u64, q)
}

/// Configuration of the exchangeable count-duality experiment.
#[derive(Debug, Clone)]
pub struct ExchangeableConfig {
    pub n_sites: usize,
    /// Initial occupied counts of the forward and dual processes.
    pub a: usize,
    pub b: usize,
    pub q: QParameter,
    /// Uniform symmetric rate per ordered pair (exchangeability hypothesis).
    pub rate: f64,
    pub horizon: f64,
    /// Interior evaluation times `s` in `[0, horizon]`.
    pub s_grid: Vec<f64>,
    pub replicas: u64,
    pub seed: u64,
    pub forward: BasicMechanism,
    pub backward: BasicMechanism,
}

/// Monte Carlo check that `E[Htilde(|A_s|, |B_{t-s}|)]` is constant on the
/// `s`-grid: per replica, uniformly random initial sets of the prescribed
/// sizes, one arrow realization read forward to `s` and backward from `t`
/// down to `s`. Passes iff all pairwise differences of the grid estimates
/// stay within 3 pooled standard errors.
pub fn mc_exchangeable_duality(cfg: &ExchangeableConfig) -> Result<SimulationReport> {
    let rep = is_q_dual_mechanism(&cfg.forward, &cfg.backward, cfg.q);
    if let Some((x, y)) = rep.witness {
        return Err(Error::MechanismNotDual {
            q: cfg.q.to_string(),
            x,
            y,
        });
    }
    let mut grid = cfg.s_grid.clone();
    grid.sort_by(f64::total_cmp);
    if grid.iter().any(|&s| s < 0.0 || s > cfg.horizon) {
        return Err(Error::Validation(
            "s-grid points must lie in [0, horizon]".into(),
        ));
    }
    let rates = RateTable::Uniform {
        rate: cfg.rate,
        n_labels: 1,
    };

    let n_grid = grid.len();
    let accs: Vec<Accumulator> = crate::parallel::map_reduce(
        cfg.replicas,
        || vec![Accumulator::default(); n_grid],
        |r, accs: &mut Vec<Accumulator>| {
            let mut init_a = Stream::for_role(cfg.seed, tag::INITIAL_SET, &[r, 0]);
            let mut init_b = Stream::for_role(cfg.seed, tag::INITIAL_SET, &[r, 1]);
            let a0 = SpinConfiguration::from_set(
                cfg.n_sites,
                &init_a.subset(cfg.n_sites, cfg.a),
            );
            let b0 = SpinConfiguration::from_set(
                cfg.n_sites,
                &init_b.subset(cfg.n_sites, cfg.b),
            );
            let g = sample_graphical_representation(
                cfg.n_sites,
                &rates,
                cfg.horizon,
                mix(cfg.seed, &[tag::REPLICA, r]),
            );

            // Forward counts |A_s| on the ascending grid.
            let mut fw_counts = vec![0u32; n_grid];
            {
                let mut x = a0;
                let mut ev = 0usize;
                for (gi, &s) in grid.iter().enumerate() {
                    while ev < g.events.len() && g.events[ev].time <= s {
                        let e = &g.events[ev];
                        let (p1, p2) = cfg.forward.apply((x.bit(e.from), x.bit(e.to)));
                        x.set_bit(e.from, p1);
                        x.set_bit(e.to, p2);
                        ev += 1;
                    }
                    fw_counts[gi] = x.count();
                }
            }
            // Backward counts |B_{t-s}|: consume events with time > s,
            // walking the grid from the largest s downward.
            let mut bw_counts = vec![0u32; n_grid];
            {
                let mut y = b0;
                let mut ev = g.events.len();
                for gi in (0..n_grid).rev() {
                    let s = grid[gi];
                    while ev > 0 && g.events[ev - 1].time > s {
                        apply_backward(&mut y, &g.events[ev - 1], &cfg.backward);
                        ev -= 1;
                    }
                    bw_counts[gi] = y.count();
                }
            }
            for gi in 0..n_grid {
                let v = hypergeometric_duality_value(
                    cfg.n_sites,
                    fw_counts[gi] as usize,
                    bw_counts[gi] as usize,
                    cfg.q,
                );
                accs[gi].push(v);
            }
        },
        |mut left: Vec<Accumulator>, right: Vec<Accumulator>| {
            for (l, r) in left.iter_mut().zip(&right) {
                l.merge(r);
            }
            left
        },
    );

    let mut passed = true;
    for i in 0..n_grid {
        for j in i + 1..n_grid {
            let diff = (accs[i].mean() - accs[j].mean()).abs();
            let se = combined_se(accs[i].std_error(), accs[j].std_error());
            if diff > 3.0 * se {
                passed = false;
            }
        }
    }
    let estimates = grid
        .iter()
        .zip(&accs)
        .map(|(s, acc)| Estimate {
            name: format!("E[Htilde(|A_s|, |B_(t-s)|)] at s={s}"),
            value: acc.mean(),
            std_error: acc.std_error(),
        })
        .collect();
    Ok(SimulationReport {
        estimates,
        replicas: cfg.replicas,
        seed: cfg.seed,
        passed,
        criterion: "all pairwise grid differences <= 3 * pooled standard error".into(),
        elapsed_seconds: 0.0,
    })
}
