//! Exact Gillespie simulation of the jump chains used in the rescaling
//! experiments: the population count chain of the mixed resampling /
//! branching-annihilation spin system, its annihilating dual count chain,
//! the limiting branching-annihilating chain on the naturals, and the
//! block-counting pure-death chain.

use crate::error::{Error, Result};
use crate::rng::{tag, Stream};

/// Count chain on `{0, .., N}`:
/// `k -> k+1` at rate `(r + b)/N * k(N-k)`,
/// `k -> k-1` at rate `r/N * k(N-k) + b/N * k(k-1)`.
#[derive(Debug, Clone, Copy)]
pub struct CountChainSpec {
    pub n: u64,
    pub r_rate: f64,
    pub b_rate: f64,
    pub horizon: f64,
    pub initial: u64,
}

impl CountChainSpec {
    fn validate(&self) -> Result<()> {
        if self.r_rate < 0.0 || self.b_rate < 0.0 {
            return Err(Error::Validation("rates must be nonnegative".into()));
        }
        if self.initial > self.n {
            return Err(Error::Validation(format!(
                "initial count {} exceeds population {}",
                self.initial, self.n
            )));
        }
        Ok(())
    }
}

/// Terminal count of the forward count chain.
pub fn simulate_count_chain(spec: &CountChainSpec, seed: u64) -> Result<u64> {
    simulate_count_chain_inner(spec, seed, None)
}

/// As `simulate_count_chain`, also recording the jump times and values.
pub fn simulate_count_chain_path(spec: &CountChainSpec, seed: u64) -> Result<(u64, Vec<(f64, u64)>)> {
    let mut path = Vec::new();
    let terminal = simulate_count_chain_inner(spec, seed, Some(&mut path))?;
    Ok((terminal, path))
}

fn simulate_count_chain_inner(
    spec: &CountChainSpec,
    seed: u64,
    mut path: Option<&mut Vec<(f64, u64)>>,
) -> Result<u64> {
    spec.validate()?;
    let mut s = Stream::for_role(seed, tag::JUMP_CHAIN, &[0]);
    let n = spec.n as f64;
    let mut k = spec.initial;
    let mut t = 0.0;
    if let Some(p) = path.as_deref_mut() {
        p.push((0.0, k));
    }
    loop {
        let kf = k as f64;
        let up = (spec.r_rate + spec.b_rate) / n * kf * (n - kf);
        let down = spec.r_rate / n * kf * (n - kf) + spec.b_rate / n * kf * (kf - 1.0);
        let total = up + down;
        if total <= 0.0 {
            break;
        }
        t += s.exponential(total);
        if t > spec.horizon {
            break;
        }
        if s.uniform() * total < up {
            k += 1;
        } else {
            k -= 1;
        }
        debug_assert!(k <= spec.n);
        if let Some(p) = path.as_deref_mut() {
            p.push((t, k));
        }
    }
    Ok(k)
}

/// Terminal count of the annihilating dual count chain on `{0, .., N}`:
/// `k -> k+1` at `b/N * k(N-k)`, `k -> k-1` at `b/N * k(k-1)`,
/// `k -> k-2` at `r/N * k(k-1)`.
pub fn simulate_annihilating_count_chain(spec: &CountChainSpec, seed: u64) -> Result<u64> {
    spec.validate()?;
    let mut s = Stream::for_role(seed, tag::JUMP_CHAIN, &[1]);
    let n = spec.n as f64;
    let mut k = spec.initial;
    let mut t = 0.0;
    loop {
        let kf = k as f64;
        let up = spec.b_rate / n * kf * (n - kf);
        let down1 = spec.b_rate / n * kf * (kf - 1.0);
        let down2 = spec.r_rate / n * kf * (kf - 1.0);
        let total = up + down1 + down2;
        if total <= 0.0 {
            break;
        }
        t += s.exponential(total);
        if t > spec.horizon {
            break;
        }
        let u = s.uniform() * total;
        if u < up {
            k += 1;
        } else if u < up + down1 {
            k -= 1;
        } else {
            k -= 2;
        }
        debug_assert!(k <= spec.n);
    }
    Ok(k)
}

/// Limiting branching-annihilating chain on the naturals:
/// `k -> k+1` at rate `beta * k`, `k -> k-2` at rate `alpha * k(k-1)`.
#[derive(Debug, Clone, Copy)]
pub struct BranchingAnnihilatingSpec {
    pub beta: f64,
    pub alpha: f64,
    pub initial: u64,
    pub horizon: f64,
    /// Hard guard against branching explosion.
    pub cap: u64,
}

impl Default for BranchingAnnihilatingSpec {
    fn default() -> Self {
        BranchingAnnihilatingSpec {
            beta: 0.0,
            alpha: 1.0,
            initial: 2,
            horizon: 1.0,
            cap: 1_000_000,
        }
    }
}

pub fn simulate_ba_dual(spec: &BranchingAnnihilatingSpec, seed: u64) -> Result<u64> {
    if spec.cap < spec.initial {
        return Err(Error::Validation(
            "population cap below the initial count".into(),
        ));
    }
    let mut s = Stream::for_role(seed, tag::JUMP_CHAIN, &[2]);
    let mut k = spec.initial;
    let mut t = 0.0;
    loop {
        let kf = k as f64;
        let branch = spec.beta * kf;
        let annihilate = spec.alpha * kf * (kf - 1.0);
        let total = branch + annihilate;
        if total <= 0.0 {
            break;
        }
        t += s.exponential(total);
        if t > spec.horizon {
            break;
        }
        if s.uniform() * total < branch {
            k += 1;
            if k > spec.cap {
                return Err(Error::PopulationCap {
                    cap: spec.cap,
                    count: k,
                });
            }
        } else {
            k -= 2;
        }
    }
    Ok(k)
}

/// Block-counting pure-death chain: `n -> n-1` at rate
/// `rate_factor * n(n-1)/2`. Returns the terminal block count.
pub fn simulate_kingman_block(n0: u64, rate_factor: f64, horizon: f64, seed: u64) -> u64 {
    let mut s = Stream::for_role(seed, tag::JUMP_CHAIN, &[3]);
    let mut n = n0;
    let mut t = 0.0;
    while n > 1 {
        let rate = rate_factor * (n * (n - 1)) as f64 / 2.0;
        t += s.exponential(rate);
        if t > horizon {
            break;
        }
        n -= 1;
    }
    n
}
