//! Command-line entry point: subcommand dispatch, configuration parsing and
//! report emission.
//!
//! Exit contract: 0 when the requested check passes, 1 when it fails (a
//! residual above tolerance, a refused precondition with its witness), 2 on
//! usage or parse errors. A report is always written on exits 0 and 1, with
//! stable key order and 17-significant-digit floats, echoing the seed and the
//! tolerances actually used.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::{
    self, check_duality_discrete, check_duality_generators, check_monotone, sep_symmetry_check,
    siegmund_dual, solve_dual, spectrum_compare_with_tol, SolveStatus,
};
use crate::cone;
use crate::error::{Error, Result};
use crate::io;
use crate::linalg::{DualityMatrix, GeneratorMatrix, StochasticMatrix};
use crate::pathsim::{
    is_q_dual_mechanism, sample_graphical_representation, standard_mechanisms,
    verify_strong_pathwise, BasicMechanism, QParameter, RateTable, SpinConfiguration,
};
use crate::report::to_deterministic_json;
use crate::rng::{mix, tag};
use crate::scaling::{
    mc_moment_duality, rescaling_csv, rescaling_experiment, MomentDualityConfig, RateSchedule,
    RescalingConfig,
};
use crate::tol::Tolerances;

pub const TOOL_NAME: &str = "duality-kit";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const USAGE: &str = "\
usage: duality-kit <command> [flags]

commands:
  check-duality     --p P --h H (--q Q | --self) [--generators]
  solve-dual        --p P --h H
  siegmund          --p P
  cone-dual         --h H (--l L | --p P)
  spectrum          --p A --q B
  measure-duality   --p P --q Q --mu MU [--trap \"i,j,..\"]
  sep-check         --m M
  simulate-ips      --config FILE [--dump FILE]
  verify-pathwise   --config FILE
  mechanisms        --list | (--f NAME --g NAME --q p/r)
  moment-duality    --config FILE
  rescale-experiment --config FILE

global flags: --seed U64  --replicas N  --tol-duality X  --tol-row X
              --out FILE  --format json|csv
environment:  DUALITY_KIT_THREADS caps worker threads
";

/// Parsed invocation: subcommand plus raw flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub flags: BTreeMap<String, String>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub replicas: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

const KNOWN_FLAGS: &[&str] = &[
    "p", "q", "h", "l", "mu", "m", "config", "dump", "list", "self", "generators", "f", "g",
    "trap", "seed", "replicas", "tol-duality", "tol-row", "out", "format",
];

impl RunConfig {
    fn parse(mut args: Vec<String>) -> Result<RunConfig> {
        if args.is_empty() {
            return Err(Error::Usage("missing subcommand".into()));
        }
        let command = args.remove(0);
        let mut flags = BTreeMap::new();
        let mut i = 0;
        while i < args.len() {
            let arg = &args[i];
            let Some(name) = arg.strip_prefix("--") else {
                return Err(Error::Usage(format!("unexpected positional '{arg}'")));
            };
            if !KNOWN_FLAGS.contains(&name) {
                return Err(Error::Usage(format!("unknown flag '--{name}'")));
            }
            // Boolean flags take no value.
            if matches!(name, "list" | "self" | "generators") {
                flags.insert(name.to_string(), "true".to_string());
                i += 1;
                continue;
            }
            let value = args
                .get(i + 1)
                .ok_or_else(|| Error::Usage(format!("flag '--{name}' needs a value")))?;
            flags.insert(name.to_string(), value.clone());
            i += 2;
        }
        let mut tolerances = Tolerances::default();
        if let Some(v) = flags.get("tol-duality") {
            tolerances.duality = v
                .parse()
                .map_err(|_| Error::Usage(format!("bad --tol-duality '{v}'")))?;
        }
        if let Some(v) = flags.get("tol-row") {
            tolerances.row = v
                .parse()
                .map_err(|_| Error::Usage(format!("bad --tol-row '{v}'")))?;
        }
        let seed = match flags.get("seed") {
            Some(v) => Some(
                v.parse()
                    .map_err(|_| Error::Usage(format!("bad --seed '{v}'")))?,
            ),
            None => None,
        };
        let replicas = match flags.get("replicas") {
            Some(v) => Some(
                v.parse()
                    .map_err(|_| Error::Usage(format!("bad --replicas '{v}'")))?,
            ),
            None => None,
        };
        let out = flags.get("out").map(PathBuf::from);
        let format = match flags.get("format").map(String::as_str) {
            None | Some("json") => OutputFormat::Json,
            Some("csv") => OutputFormat::Csv,
            Some(other) => return Err(Error::Usage(format!("bad --format '{other}'"))),
        };
        Ok(RunConfig {
            command,
            flags,
            tolerances,
            seed,
            replicas,
            out,
            format,
        })
    }

    fn path(&self, name: &str) -> Result<PathBuf> {
        self.flags
            .get(name)
            .map(PathBuf::from)
            .ok_or_else(|| Error::Usage(format!("missing required flag '--{name}'")))
    }
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: String,
    config: BTreeMap<String, String>,
    tolerances: Tolerances,
    seed: Option<u64>,
    passed: bool,
    result: T,
}

/// Classify errors into the exit-code contract: true for usage/parse (2),
/// false for failed checks (1).
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Usage(_)
            | Error::Parse { .. }
            | Error::Io { .. }
            | Error::InvalidRational(_)
            | Error::Dimension { .. }
            | Error::NonFinite { .. }
            | Error::Validation(_)
            | Error::TooManySites(_, _)
            | Error::NegativeTime(_)
    )
}

/// Entry point used by the binary: returns the process exit code.
pub fn dispatch(args: impl Iterator<Item = String>) -> i32 {
    let argv: Vec<String> = args.collect();
    if argv.iter().any(|a| a == "--help" || a == "-h") || argv.is_empty() {
        eprint!("{USAGE}");
        return if argv.is_empty() { 2 } else { 0 };
    }
    init_thread_pool();
    let cfg = match RunConfig::parse(argv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{TOOL_NAME}: {e}");
            eprint!("{USAGE}");
            return 2;
        }
    };
    match run(&cfg) {
        Ok(code) => code,
        Err(e) if is_usage_error(&e) => {
            eprintln!("{TOOL_NAME}: {e}");
            2
        }
        Err(e) => {
            // A failed precondition is a failed check: report it and exit 1.
            let report = FailedCheck {
                status: "failed",
                error: e.to_string(),
            };
            match emit(&cfg, false, &report, None) {
                Ok(()) => 1,
                Err(io_err) => {
                    eprintln!("{TOOL_NAME}: {io_err}");
                    2
                }
            }
        }
    }
}

#[derive(Serialize)]
struct FailedCheck {
    status: &'static str,
    error: String,
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("DUALITY_KIT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

/// Emit the report (JSON envelope or flattened CSV) to `--out` or stdout.
fn emit<T: Serialize>(cfg: &RunConfig, passed: bool, result: &T, csv: Option<String>) -> Result<()> {
    // Echo the check configuration, not the emission flags: the same check
    // must produce byte-identical reports wherever they are written.
    let mut config = cfg.flags.clone();
    config.remove("out");
    config.remove("format");
    let envelope = Envelope {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        command: cfg.command.clone(),
        config,
        tolerances: cfg.tolerances,
        seed: cfg.seed,
        passed,
        result,
    };
    let text = match cfg.format {
        OutputFormat::Json => {
            let mut s = to_deterministic_json(&envelope)?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => match csv {
            Some(table) => table,
            None => {
                let value: serde_json::Value =
                    serde_json::from_str(&to_deterministic_json(&envelope)?).expect("own json");
                let mut rows = String::from("key,value\n");
                flatten_json("", &value, &mut rows);
                rows
            }
        },
    };
    match &cfg.out {
        Some(path) => io::write_text(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn flatten_json(prefix: &str, v: &serde_json::Value, out: &mut String) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_json(&key, val, out);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                flatten_json(&format!("{prefix}[{i}]"), val, out);
            }
        }
        other => {
            out.push_str(prefix);
            out.push(',');
            out.push_str(&other.to_string().replace(',', ";"));
            out.push('\n');
        }
    }
}

fn run(cfg: &RunConfig) -> Result<i32> {
    match cfg.command.as_str() {
        "check-duality" => cmd_check_duality(cfg),
        "solve-dual" => cmd_solve_dual(cfg),
        "siegmund" => cmd_siegmund(cfg),
        "cone-dual" => cmd_cone_dual(cfg),
        "spectrum" => cmd_spectrum(cfg),
        "measure-duality" => cmd_measure_duality(cfg),
        "sep-check" => cmd_sep_check(cfg),
        "simulate-ips" => cmd_simulate_ips(cfg),
        "verify-pathwise" => cmd_verify_pathwise(cfg),
        "mechanisms" => cmd_mechanisms(cfg),
        "moment-duality" => cmd_moment_duality(cfg),
        "rescale-experiment" => cmd_rescale_experiment(cfg),
        other => Err(Error::Usage(format!("unknown subcommand '{other}'"))),
    }
}

fn exit_code(passed: bool) -> i32 {
    if passed {
        0
    } else {
        1
    }
}

#[derive(Serialize)]
struct DualityCheckResult {
    residual: f64,
    generator_residual: Option<f64>,
    semigroup_residuals: Option<Vec<(f64, f64)>>,
}

fn cmd_check_duality(cfg: &RunConfig) -> Result<i32> {
    let h = DualityMatrix::new(io::read_matrix(&cfg.path("h")?)?)?;
    let p_raw = io::read_matrix(&cfg.path("p")?)?;
    let q_raw = if cfg.flags.contains_key("self") {
        p_raw.clone()
    } else {
        io::read_matrix(&cfg.path("q")?)?
    };
    if cfg.flags.contains_key("generators") {
        let lx = GeneratorMatrix::new(p_raw)?;
        let ly = GeneratorMatrix::new(q_raw)?;
        let rep = check_duality_generators(&lx, &ly, &h)?;
        let passed = rep.generator_residual <= cfg.tolerances.duality
            && rep.semigroup_residuals.iter().all(|&(_, r)| r <= 1e-8);
        let result = DualityCheckResult {
            residual: rep.generator_residual,
            generator_residual: Some(rep.generator_residual),
            semigroup_residuals: Some(rep.semigroup_residuals),
        };
        emit(cfg, passed, &result, None)?;
        Ok(exit_code(passed))
    } else {
        let p = StochasticMatrix::new(p_raw)?;
        let q = StochasticMatrix::new(q_raw)?;
        let residual = check_duality_discrete(&p, &q, &h)?;
        let passed = residual <= cfg.tolerances.duality;
        let result = DualityCheckResult {
            residual,
            generator_residual: None,
            semigroup_residuals: None,
        };
        emit(cfg, passed, &result, None)?;
        Ok(exit_code(passed))
    }
}

#[derive(Serialize)]
struct SolveDualResult {
    status: SolveStatus,
    unique: bool,
    dual: Option<Vec<Vec<f64>>>,
    signed_dual: Option<Vec<Vec<f64>>>,
    column_residuals: Vec<f64>,
    duality_residual: Option<f64>,
}

fn cmd_solve_dual(cfg: &RunConfig) -> Result<i32> {
    let p = StochasticMatrix::new(io::read_matrix(&cfg.path("p")?)?)?;
    let h = DualityMatrix::new(io::read_matrix(&cfg.path("h")?)?)?;
    let solved = solve_dual(&p, &h)?;
    let duality_residual = match &solved.dual {
        Some(q) => Some(check_duality_discrete(&p, q, &h)?),
        None => None,
    };
    let passed = solved.status == SolveStatus::ExistsStochastic
        && duality_residual.is_some_and(|r| r <= cfg.tolerances.duality);
    let result = SolveDualResult {
        status: solved.status,
        unique: solved.unique,
        dual: solved.dual.as_ref().map(|d| d.mat().to_rows()),
        signed_dual: solved.signed_dual.as_ref().map(|d| d.to_rows()),
        column_residuals: solved.column_residuals,
        duality_residual,
    };
    emit(cfg, passed, &result, None)?;
    Ok(exit_code(passed))
}

#[derive(Serialize)]
struct SiegmundResult {
    monotone: bool,
    witness: Option<(usize, usize, usize)>,
    dual: Option<Vec<Vec<f64>>>,
    defect: Option<Vec<f64>>,
    partial_sum_residual: Option<f64>,
    duality_residual: Option<f64>,
}

fn cmd_siegmund(cfg: &RunConfig) -> Result<i32> {
    let p = StochasticMatrix::new(io::read_matrix(&cfg.path("p")?)?)?;
    let mono = check_monotone(&p)?;
    if !mono.monotone {
        let result = SiegmundResult {
            monotone: false,
            witness: mono.witness,
            dual: None,
            defect: None,
            partial_sum_residual: None,
            duality_residual: None,
        };
        emit(cfg, false, &result, None)?;
        return Ok(1);
    }
    let dual = siegmund_dual(&p)?;
    let passed = dual.duality_residual <= 1e-12 && dual.partial_sum_residual <= 1e-12;
    let result = SiegmundResult {
        monotone: true,
        witness: None,
        dual: Some(dual.extended.mat().to_rows()),
        defect: Some(dual.defect.clone()),
        partial_sum_residual: Some(dual.partial_sum_residual),
        duality_residual: Some(dual.duality_residual),
    };
    emit(cfg, passed, &result, None)?;
    Ok(exit_code(passed))
}

#[derive(Serialize)]
struct ConeDualResult {
    extremal_indices: Vec<usize>,
    simplex: bool,
    pi: Vec<Vec<f64>>,
    r_generator: Option<Vec<Vec<f64>>>,
    r_matrix: Option<Vec<Vec<f64>>>,
    q_hat: Option<Vec<Vec<f64>>>,
    l_hat: Option<Vec<Vec<f64>>>,
    lambda: Option<u64>,
    residuals: BTreeMap<String, f64>,
}

fn cmd_cone_dual(cfg: &RunConfig) -> Result<i32> {
    let h = DualityMatrix::new(io::read_matrix(&cfg.path("h")?)?)?;
    let mut residuals = BTreeMap::new();
    if cfg.flags.contains_key("l") {
        let l = GeneratorMatrix::new(io::read_matrix(&cfg.path("l")?)?)?;
        let dual = cone::continuous_dual_generator(&l, &h)?;
        residuals.insert(
            "generator_duality".into(),
            dual.report.generator_duality_residual,
        );
        for (t, r) in &dual.report.semigroup_residuals {
            residuals.insert(format!("semigroup_t_{t}"), *r);
        }
        residuals.insert("projection".into(), dual.report.projection_residual);
        residuals.insert("h_invariance".into(), dual.report.h_invariance_residual);
        let passed = cone::continuous_dual_holds(&dual.report);
        let result = ConeDualResult {
            extremal_indices: dual.structure.extremal_indices.clone(),
            simplex: dual.structure.simplex,
            pi: dual.pi.mat().to_rows(),
            r_generator: Some(dual.cone_generator.mat().to_rows()),
            r_matrix: None,
            q_hat: Some(dual.pi_hat.mat().to_rows()),
            l_hat: Some(dual.l_hat.mat().to_rows()),
            lambda: Some(dual.report.lambda),
            residuals,
        };
        emit(cfg, passed, &result, None)?;
        Ok(exit_code(passed))
    } else {
        let p = StochasticMatrix::new(io::read_matrix(&cfg.path("p")?)?)?;
        let (structure, pi, r) = cone::cone_dual(&p, &h)?;
        let q = cone::jump_dual(&r, &structure, &pi)?;
        let intertwining = cone::intertwining_residual(&q, &r, &pi);
        residuals.insert("intertwining".into(), intertwining);
        let duality = check_duality_discrete(&p, &q, &h)?;
        residuals.insert("duality".into(), duality);
        let passed = intertwining <= 1e-10 && duality <= cfg.tolerances.duality;
        let result = ConeDualResult {
            extremal_indices: structure.extremal_indices.clone(),
            simplex: structure.simplex,
            pi: pi.mat().to_rows(),
            r_generator: None,
            r_matrix: Some(r.mat().to_rows()),
            q_hat: Some(q.mat().to_rows()),
            l_hat: None,
            lambda: None,
            residuals,
        };
        emit(cfg, passed, &result, None)?;
        Ok(exit_code(passed))
    }
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<i32> {
    let a = io::read_matrix(&cfg.path("p")?)?;
    let b = io::read_matrix(&cfg.path("q")?)?;
    let rep = spectrum_compare_with_tol(&a, &b, cfg.tolerances.spectral)?;
    let passed = rep.pass;
    emit(cfg, passed, &rep, None)?;
    Ok(exit_code(passed))
}

#[derive(Serialize)]
struct MeasureDualityResult {
    residual: f64,
    trap_set: Option<Vec<usize>>,
    trap_ok: Option<bool>,
}

fn cmd_measure_duality(cfg: &RunConfig) -> Result<i32> {
    let p = io::read_matrix(&cfg.path("p")?)?;
    let q = io::read_matrix(&cfg.path("q")?)?;
    let mu = io::read_vector(&cfg.path("mu")?)?;
    let residual = algebra::check_measure_duality(&p, &q, &mu)?;
    let (trap_set, trap_ok) = match cfg.flags.get("trap") {
        Some(spec) => {
            let set: Vec<usize> = spec
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Usage(format!("bad trap index '{s}'")))
                })
                .collect::<Result<_>>()?;
            let ok = algebra::check_trap(&p, &set);
            (Some(set), Some(ok))
        }
        None => (None, None),
    };
    let passed = residual <= cfg.tolerances.duality && trap_ok.unwrap_or(true);
    let result = MeasureDualityResult {
        residual,
        trap_set,
        trap_ok,
    };
    emit(cfg, passed, &result, None)?;
    Ok(exit_code(passed))
}

fn cmd_sep_check(cfg: &RunConfig) -> Result<i32> {
    let m: usize = cfg
        .flags
        .get("m")
        .ok_or_else(|| Error::Usage("missing required flag '--m'".into()))?
        .parse()
        .map_err(|_| Error::Usage("bad --m".into()))?;
    let rep = sep_symmetry_check(m)?;
    let passed = rep.commutator_residual <= 1e-12 && rep.duality_residual <= 1e-12;
    emit(cfg, passed, &rep, None)?;
    Ok(exit_code(passed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MechanismSpec {
    label: String,
    forward: String,
    backward: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatesSpec {
    Scalar(f64),
    TableFile(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IpsConfig {
    #[serde(alias = "N")]
    n: usize,
    #[serde(alias = "T")]
    t: f64,
    rates: RatesSpec,
    mechanisms: Vec<MechanismSpec>,
    q: String,
    seed: u64,
    replicas: u64,
    #[serde(default)]
    initial: Option<Vec<u8>>,
    #[serde(default)]
    initial_dual: Option<Vec<u8>>,
}

fn parse_spin(bits: &[u8], n: usize, field: &str) -> Result<SpinConfiguration> {
    if bits.len() != n {
        return Err(Error::Usage(format!(
            "'{field}' has {} entries, expected {n}",
            bits.len()
        )));
    }
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::Usage(format!("'{field}' entries must be 0 or 1")));
    }
    Ok(SpinConfiguration::new(bits.to_vec()))
}

fn load_ips_config(cfg: &RunConfig) -> Result<(IpsConfig, RateTable, Vec<(BasicMechanism, BasicMechanism)>, QParameter)> {
    let path = cfg.path("config")?;
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let parsed: IpsConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let q = QParameter::parse(&parsed.q)?;
    let mut pairs = Vec::new();
    for spec in &parsed.mechanisms {
        let f = BasicMechanism::by_name(&spec.forward).ok_or_else(|| {
            Error::Usage(format!(
                "unknown forward mechanism '{}' for label '{}'",
                spec.forward, spec.label
            ))
        })?;
        let g = BasicMechanism::by_name(&spec.backward).ok_or_else(|| {
            Error::Usage(format!(
                "unknown backward mechanism '{}' for label '{}'",
                spec.backward, spec.label
            ))
        })?;
        pairs.push((f, g));
    }
    if pairs.is_empty() {
        return Err(Error::Usage("at least one mechanism is required".into()));
    }
    let rates = match &parsed.rates {
        RatesSpec::Scalar(rate) => RateTable::Uniform {
            rate: *rate,
            n_labels: pairs.len(),
        },
        RatesSpec::TableFile(file) => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Io {
                path: file.clone(),
                message: e.to_string(),
            })?;
            let table: Vec<Vec<Vec<f64>>> =
                serde_json::from_str(&text).map_err(|e| Error::Parse {
                    path: file.clone(),
                    line: e.line(),
                    message: e.to_string(),
                })?;
            if table.len() != pairs.len() {
                return Err(Error::Dimension {
                    context: "rate table",
                    expected: format!("{} labels", pairs.len()),
                    got: format!("{}", table.len()),
                });
            }
            for (k, per_label) in table.iter().enumerate() {
                if per_label.len() != parsed.n
                    || per_label.iter().any(|row| row.len() != parsed.n)
                {
                    return Err(Error::Dimension {
                        context: "rate table",
                        expected: format!("{0}x{0} rates for label {k}", parsed.n),
                        got: "ragged or mis-sized table".into(),
                    });
                }
            }
            RateTable::Table(table)
        }
    };
    Ok((parsed, rates, pairs, q))
}

#[derive(Serialize)]
struct IpsResult {
    replicas: u64,
    mean_terminal_count: f64,
    std_error: f64,
    mean_event_count: f64,
    trajectory_dump: Option<String>,
}

fn cmd_simulate_ips(cfg: &RunConfig) -> Result<i32> {
    let (parsed, rates, pairs, _q) = load_ips_config(cfg)?;
    let seed = cfg.seed.unwrap_or(parsed.seed);
    let replicas = cfg.replicas.unwrap_or(parsed.replicas);
    let forward: Vec<BasicMechanism> = pairs.iter().map(|(f, _)| f.clone()).collect();
    let x0 = match &parsed.initial {
        Some(bits) => parse_spin(bits, parsed.n, "initial")?,
        None => SpinConfiguration::from_set(parsed.n, &(0..parsed.n / 2).collect::<Vec<_>>()),
    };
    let mut acc = crate::report::Accumulator::default();
    let mut events_acc = crate::report::Accumulator::default();
    let mut dump: Option<String> = None;
    for r in 0..replicas {
        let g = sample_graphical_representation(
            parsed.n,
            &rates,
            parsed.t,
            mix(seed, &[tag::REPLICA, r]),
        );
        let traj = crate::pathsim::evolve_forward(&x0, &g, &forward);
        acc.push(traj.terminal.count() as f64);
        events_acc.push(g.events.len() as f64);
        if r == 0 {
            if let Some(dump_path) = cfg.flags.get("dump") {
                let mut text = String::from("time,i,j,label,bit_i,bit_j\n");
                for s in &traj.steps {
                    text.push_str(&format!(
                        "{:.17e},{},{},{},{},{}\n",
                        s.time, s.i, s.j, s.label, s.bit_i, s.bit_j
                    ));
                }
                io::write_text(Path::new(dump_path), &text)?;
                dump = Some(dump_path.clone());
            }
        }
    }
    let result = IpsResult {
        replicas,
        mean_terminal_count: acc.mean(),
        std_error: acc.std_error(),
        mean_event_count: events_acc.mean(),
        trajectory_dump: dump,
    };
    emit(cfg, true, &result, None)?;
    Ok(0)
}

#[derive(Serialize)]
struct PathwiseResult {
    replicas: u64,
    pairs_checked: u64,
    all_hold: bool,
    first_failure: Option<String>,
}

fn cmd_verify_pathwise(cfg: &RunConfig) -> Result<i32> {
    let (parsed, rates, pairs, q) = load_ips_config(cfg)?;
    let seed = cfg.seed.unwrap_or(parsed.seed);
    let replicas = cfg.replicas.unwrap_or(parsed.replicas);
    let forward: Vec<BasicMechanism> = pairs.iter().map(|(f, _)| f.clone()).collect();
    let backward: Vec<BasicMechanism> = pairs.iter().map(|(_, g)| g.clone()).collect();

    let mut pairs_checked = 0u64;
    let mut all_hold = true;
    let mut first_failure = None;
    for r in 0..replicas {
        let g = sample_graphical_representation(
            parsed.n,
            &rates,
            parsed.t,
            mix(seed, &[tag::REPLICA, r]),
        );
        let initial_pairs: Vec<(SpinConfiguration, SpinConfiguration)> =
            match (&parsed.initial, &parsed.initial_dual) {
                (Some(x), Some(y)) => vec![(
                    parse_spin(x, parsed.n, "initial")?,
                    parse_spin(y, parsed.n, "initial_dual")?,
                )],
                _ if parsed.n <= 4 => {
                    let size = 1usize << parsed.n;
                    (0..size * size)
                        .map(|i| {
                            (
                                SpinConfiguration::from_index(parsed.n, i / size),
                                SpinConfiguration::from_index(parsed.n, i % size),
                            )
                        })
                        .collect()
                }
                _ => {
                    let mut s = crate::rng::Stream::for_role(seed, tag::INITIAL_SET, &[r]);
                    (0..64)
                        .map(|_| {
                            let a = s.below(1u64 << parsed.n) as usize;
                            let b = s.below(1u64 << parsed.n) as usize;
                            (
                                SpinConfiguration::from_index(parsed.n, a),
                                SpinConfiguration::from_index(parsed.n, b),
                            )
                        })
                        .collect()
                }
            };
        for (x0, y0) in initial_pairs {
            let rep = verify_strong_pathwise(&x0, &y0, q, &g, &forward, &backward)?;
            pairs_checked += 1;
            if !rep.holds {
                all_hold = false;
                if first_failure.is_none() {
                    first_failure = Some(format!(
                        "replica {r}, x0 index {}, y0 index {}, cut {:?}",
                        x0.to_index(),
                        y0.to_index(),
                        rep.first_violation
                    ));
                }
            }
        }
    }
    let result = PathwiseResult {
        replicas,
        pairs_checked,
        all_hold,
        first_failure,
    };
    emit(cfg, all_hold, &result, None)?;
    Ok(exit_code(all_hold))
}

#[derive(Serialize)]
struct MechanismRow {
    name: String,
    description: &'static str,
    f00: (u8, u8),
    f01: (u8, u8),
    f10: (u8, u8),
    f11: (u8, u8),
}

fn cmd_mechanisms(cfg: &RunConfig) -> Result<i32> {
    if cfg.flags.contains_key("list") {
        let rows: Vec<MechanismRow> = standard_mechanisms()
            .into_iter()
            .map(|(m, description)| MechanismRow {
                f00: m.apply((0, 0)),
                f01: m.apply((0, 1)),
                f10: m.apply((1, 0)),
                f11: m.apply((1, 1)),
                name: m.name,
                description,
            })
            .collect();
        // Human-readable table on stdout in addition to the report.
        for r in &rows {
            println!(
                "{:4} (0,0)->({},{}) (0,1)->({},{}) (1,0)->({},{}) (1,1)->({},{})  {}",
                r.name,
                r.f00.0,
                r.f00.1,
                r.f01.0,
                r.f01.1,
                r.f10.0,
                r.f10.1,
                r.f11.0,
                r.f11.1,
                r.description
            );
        }
        emit(cfg, true, &rows, None)?;
        return Ok(0);
    }
    let f_name = cfg
        .flags
        .get("f")
        .ok_or_else(|| Error::Usage("mechanisms needs --list or --f/--g/--q".into()))?;
    let g_name = cfg
        .flags
        .get("g")
        .ok_or_else(|| Error::Usage("missing --g".into()))?;
    let q = QParameter::parse(
        cfg.flags
            .get("q")
            .ok_or_else(|| Error::Usage("missing --q".into()))?,
    )?;
    let f = BasicMechanism::by_name(f_name)
        .ok_or_else(|| Error::Usage(format!("unknown mechanism '{f_name}'")))?;
    let g = BasicMechanism::by_name(g_name)
        .ok_or_else(|| Error::Usage(format!("unknown mechanism '{g_name}'")))?;
    let rep = is_q_dual_mechanism(&f, &g, q);
    let passed = rep.dual;
    emit(cfg, passed, &rep, None)?;
    Ok(exit_code(passed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentConfig {
    x0: f64,
    n0: u64,
    t: f64,
    replicas: u64,
    dt: f64,
    seed: u64,
}

fn cmd_moment_duality(cfg: &RunConfig) -> Result<i32> {
    let path = cfg.path("config")?;
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let parsed: MomentConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let rep = mc_moment_duality(&MomentDualityConfig {
        x0: parsed.x0,
        n0: parsed.n0,
        t: parsed.t,
        replicas: cfg.replicas.unwrap_or(parsed.replicas),
        dt: parsed.dt,
        seed: cfg.seed.unwrap_or(parsed.seed),
    })?;
    let passed = rep.passed;
    emit(cfg, passed, &rep, None)?;
    Ok(exit_code(passed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
enum ScheduleSpec {
    ProportionalToN { coefficient: f64 },
    Constant { value: f64 },
}

impl From<&ScheduleSpec> for RateSchedule {
    fn from(s: &ScheduleSpec) -> RateSchedule {
        match s {
            ScheduleSpec::ProportionalToN { coefficient } => RateSchedule::ProportionalToN {
                coefficient: *coefficient,
            },
            ScheduleSpec::Constant { value } => RateSchedule::Constant { value: *value },
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RescaleConfig {
    n_list: Vec<u64>,
    q: String,
    r_schedule: ScheduleSpec,
    b_schedule: ScheduleSpec,
    initial_fraction: f64,
    n0: u64,
    t: f64,
    replicas: u64,
    sde_replicas: u64,
    sde_dt: f64,
    seed: u64,
}

fn cmd_rescale_experiment(cfg: &RunConfig) -> Result<i32> {
    let path = cfg.path("config")?;
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let parsed: RescaleConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let report = rescaling_experiment(&RescalingConfig {
        n_list: parsed.n_list.clone(),
        q: QParameter::parse(&parsed.q)?,
        r_schedule: (&parsed.r_schedule).into(),
        b_schedule: (&parsed.b_schedule).into(),
        initial_fraction: parsed.initial_fraction,
        n0: parsed.n0,
        t: parsed.t,
        replicas: cfg.replicas.unwrap_or(parsed.replicas),
        sde_replicas: parsed.sde_replicas,
        sde_dt: parsed.sde_dt,
        seed: cfg.seed.unwrap_or(parsed.seed),
    })?;
    let passed = report.passed;
    let csv = rescaling_csv(&report);
    emit(cfg, passed, &report, Some(csv))?;
    Ok(exit_code(passed))
}
