//! Monte Carlo reports and deterministic JSON emission.
//!
//! Reports are serialized with a fixed key order (struct order / BTreeMap)
//! and floats printed with 17 significant digits, so the same run produces
//! byte-identical files. Wall-clock time is kept out of the serialized form
//! for the same reason; it is available on the struct for logging.

use serde::Serialize;

use crate::error::{Error, Result};

/// One named Monte Carlo estimate with its standard error
/// (sample standard deviation / sqrt(replicas)).
#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    pub std_error: f64,
}

/// Outcome of a seeded Monte Carlo verification run.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub estimates: Vec<Estimate>,
    pub replicas: u64,
    pub seed: u64,
    pub passed: bool,
    /// The pass criterion, verbatim.
    pub criterion: String,
    #[serde(skip)]
    pub elapsed_seconds: f64,
}

/// Streaming mean / standard-error accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    n: u64,
    sum: f64,
    sumsq: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sumsq += x * x;
    }

    pub fn merge(&mut self, other: &Accumulator) {
        self.n += other.n;
        self.sum += other.sum;
        self.sumsq += other.sumsq;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let var = ((self.sumsq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// Combined standard error of a difference of independent estimates.
pub fn combined_se(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

struct SignificantDigitFormatter;

impl serde_json::ser::Formatter for SignificantDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        // 17 significant digits round-trip any f64 exactly.
        write!(writer, "{:.16e}", value)
    }
}

/// Serialize to JSON with 17-significant-digit floats and stable key order.
pub fn to_deterministic_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigitFormatter);
    value.serialize(&mut ser).map_err(|e| Error::Io {
        path: "<json>".into(),
        message: e.to_string(),
    })?;
    String::from_utf8(out).map_err(|e| Error::Io {
        path: "<json>".into(),
        message: e.to_string(),
    })
}
