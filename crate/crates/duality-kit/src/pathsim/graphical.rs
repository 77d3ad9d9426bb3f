//! Graphical representation of a spin system: a time-ordered list of Poisson
//! arrows over a finite site set and horizon `[0, T]`, from which the forward
//! process reads mechanisms along increasing time and the backward (dual)
//! process reads the same arrows reversed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pathsim::mechanism::BasicMechanism;
use crate::rng::{mix, tag, Stream};

/// One Poisson arrow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArrowEvent {
    pub time: f64,
    pub from: usize,
    pub to: usize,
    pub label: usize,
}

/// Spin configuration on `{0,1}^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfiguration {
    bits: Vec<u8>,
}

impl SpinConfiguration {
    pub fn new(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1));
        SpinConfiguration { bits }
    }

    pub fn zeros(n: usize) -> Self {
        SpinConfiguration { bits: vec![0; n] }
    }

    pub fn from_set(n: usize, occupied: &[usize]) -> Self {
        let mut bits = vec![0u8; n];
        for &i in occupied {
            bits[i] = 1;
        }
        SpinConfiguration { bits }
    }

    /// Index interpretation: site 0 is the most significant bit.
    pub fn from_index(n: usize, index: usize) -> Self {
        let bits = (0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect();
        SpinConfiguration { bits }
    }

    pub fn to_index(&self) -> usize {
        self.bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set_bit(&mut self, i: usize, v: u8) {
        self.bits[i] = v;
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Number of occupied sites.
    pub fn count(&self) -> u32 {
        self.bits.iter().map(|&b| b as u32).sum()
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &SpinConfiguration) -> SpinConfiguration {
        assert_eq!(self.len(), other.len());
        SpinConfiguration {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a & b)
                .collect(),
        }
    }

    /// `|x ^ y|`, the size of the overlap.
    pub fn overlap(&self, other: &SpinConfiguration) -> u32 {
        assert_eq!(self.len(), other.len());
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| (a & b) as u32)
            .sum()
    }
}

/// Per-ordered-pair, per-label rates.
#[derive(Debug, Clone)]
pub enum RateTable {
    /// The same rate for every ordered pair `(i, j)`, `i != j`, and every
    /// label in `0..n_labels` (complete graph).
    Uniform { rate: f64, n_labels: usize },
    /// `rates[k][i][j]` for label `k` and the ordered pair `(i, j)`.
    Table(Vec<Vec<Vec<f64>>>),
}

impl RateTable {
    pub fn n_labels(&self) -> usize {
        match self {
            RateTable::Uniform { n_labels, .. } => *n_labels,
            RateTable::Table(t) => t.len(),
        }
    }

    pub fn rate(&self, label: usize, i: usize, j: usize) -> f64 {
        match self {
            RateTable::Uniform { rate, .. } => {
                if i == j {
                    0.0
                } else {
                    *rate
                }
            }
            RateTable::Table(t) => t[label][i][j],
        }
    }

    /// Symmetry `rate(k, i, j) = rate(k, j, i)`, the standing hypothesis of
    /// pathwise duality.
    pub fn check_symmetric(&self, n_sites: usize) -> Result<()> {
        for k in 0..self.n_labels() {
            for i in 0..n_sites {
                for j in i + 1..n_sites {
                    if (self.rate(k, i, j) - self.rate(k, j, i)).abs() > 0.0 {
                        return Err(Error::AsymmetricRates { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }
}

/// A realized set of Poisson arrows on `[0, T]`.
///
/// `events` always holds the forward-clock arrows sorted by time; a reversed
/// representation only flips `reversed`, so reversing twice restores the
/// original exactly. The oriented view applies `t -> T - t` and swaps the
/// arrow endpoints lazily.
#[derive(Debug, Clone)]
pub struct GraphicalRepresentation {
    pub n_sites: usize,
    pub horizon: f64,
    pub rates: RateTable,
    pub events: Vec<ArrowEvent>,
    pub master_seed: u64,
    pub reversed: bool,
}

/// Sample the arrow realization: per ordered pair and label an independent
/// Poisson stream with seed `mix(master, ARROW, i, j, k)`, merged and sorted
/// by `(time, from, to, label)` so that float-equal times have a fixed order.
pub fn sample_graphical_representation(
    n_sites: usize,
    rates: &RateTable,
    horizon: f64,
    master_seed: u64,
) -> GraphicalRepresentation {
    assert!(horizon >= 0.0);
    let mut events = Vec::new();
    if horizon > 0.0 {
        for k in 0..rates.n_labels() {
            for i in 0..n_sites {
                for j in 0..n_sites {
                    if i == j {
                        continue;
                    }
                    let rate = rates.rate(k, i, j);
                    if rate <= 0.0 {
                        continue;
                    }
                    let mut s = Stream::from_seed(mix(
                        master_seed,
                        &[tag::ARROW, i as u64, j as u64, k as u64],
                    ));
                    let mut t = 0.0;
                    loop {
                        t += s.exponential(rate);
                        if t > horizon {
                            break;
                        }
                        events.push(ArrowEvent {
                            time: t,
                            from: i,
                            to: j,
                            label: k,
                        });
                    }
                }
            }
        }
    }
    events.sort_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then(a.from.cmp(&b.from))
            .then(a.to.cmp(&b.to))
            .then(a.label.cmp(&b.label))
    });
    GraphicalRepresentation {
        n_sites,
        horizon,
        rates: rates.clone(),
        events,
        master_seed,
        reversed: false,
    }
}

impl GraphicalRepresentation {
    /// Time- and direction-reversed representation: `t -> T - t` and arrows
    /// flipped. An exact involution: only the orientation flag toggles.
    pub fn reversed(&self) -> GraphicalRepresentation {
        let mut out = self.clone();
        out.reversed = !out.reversed;
        out
    }

    /// The arrows as seen in the current orientation, in increasing oriented
    /// time.
    pub fn oriented_events(&self) -> Vec<ArrowEvent> {
        if !self.reversed {
            self.events.clone()
        } else {
            self.events
                .iter()
                .rev()
                .map(|e| ArrowEvent {
                    time: self.horizon - e.time,
                    from: e.to,
                    to: e.from,
                    label: e.label,
                })
                .collect()
        }
    }
}

/// One applied arrow in a trajectory log: the changed pair after the
/// mechanism fired.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajectoryStep {
    pub time: f64,
    pub i: usize,
    pub j: usize,
    pub label: usize,
    pub bit_i: u8,
    pub bit_j: u8,
}

/// Piecewise-constant trajectory stored as deltas.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub initial: SpinConfiguration,
    pub steps: Vec<TrajectoryStep>,
    pub terminal: SpinConfiguration,
}

/// Run the forward process: arrows in time order, arrow `(i -> j, k)`
/// replacing `(x_i, x_j)` by `f^k(x_i, x_j)`.
pub fn evolve_forward(
    x0: &SpinConfiguration,
    g: &GraphicalRepresentation,
    mechanisms: &[BasicMechanism],
) -> Trajectory {
    assert_eq!(x0.len(), g.n_sites);
    let mut x = x0.clone();
    let events = g.oriented_events();
    let mut steps = Vec::with_capacity(events.len());
    for e in &events {
        let m = &mechanisms[e.label];
        let (a, b) = m.apply((x.bit(e.from), x.bit(e.to)));
        x.set_bit(e.from, a);
        x.set_bit(e.to, b);
        steps.push(TrajectoryStep {
            time: e.time,
            i: e.from,
            j: e.to,
            label: e.label,
            bit_i: a,
            bit_j: b,
        });
    }
    Trajectory {
        initial: x0.clone(),
        steps,
        terminal: x,
    }
}

/// Apply one arrow backward: the arrow is reversed, so the dual mechanism
/// `g^k` acts on the pair read against the arrow, `(y_j, y_i) <- g^k(y_j, y_i)`.
#[inline]
pub fn apply_backward(y: &mut SpinConfiguration, e: &ArrowEvent, g_mech: &BasicMechanism) {
    let (a, b) = g_mech.apply((y.bit(e.to), y.bit(e.from)));
    y.set_bit(e.to, a);
    y.set_bit(e.from, b);
}

/// Run the dual process: started at the final time, running time backwards,
/// arrows reversed, mechanisms `g^k`.
pub fn evolve_backward(
    y0: &SpinConfiguration,
    g: &GraphicalRepresentation,
    dual_mechanisms: &[BasicMechanism],
) -> Trajectory {
    assert_eq!(y0.len(), g.n_sites);
    let mut y = y0.clone();
    let events = g.oriented_events();
    let mut steps = Vec::with_capacity(events.len());
    for e in events.iter().rev() {
        apply_backward(&mut y, e, &dual_mechanisms[e.label]);
        steps.push(TrajectoryStep {
            time: g.horizon - e.time,
            i: e.to,
            j: e.from,
            label: e.label,
            bit_i: y.bit(e.to),
            bit_j: y.bit(e.from),
        });
    }
    Trajectory {
        initial: y0.clone(),
        steps,
        terminal: y,
    }
}
