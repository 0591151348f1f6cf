use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use swarmlab::diagnostics::{
    discretize_positions, empirical_transition_matrix, second_eigenvalue, state_count,
};
use swarmlab::trace::{fmt_real, read_snapshots, CsvTraceWriter};
use swarmlab::tuning::{grid_parametric_study, iqr, median, self_tune, TuningReport};
use swarmlab::{run_optimization, run_with_sink, Error, Result, RunConfig};

use crate::config::{CompareSpec, RunSpec, TuneSpec, DEFAULT_POPULATION};

/// Largest chain `analyze` will build.
pub const MAX_STATES: usize = 4096;

/// Settings that come from outside the config file.
#[derive(Debug, Clone, Default)]
pub struct Context {
    /// Default output directory (`SWARMLAB_OUT`).
    pub out_dir: Option<PathBuf>,
}

impl Context {
    pub fn from_env() -> Self {
        Self {
            out_dir: std::env::var_os("SWARMLAB_OUT").map(PathBuf::from),
        }
    }

    fn default_path(&self, file_name: String) -> PathBuf {
        match &self.out_dir {
            Some(dir) => dir.join(file_name),
            None => PathBuf::from(file_name),
        }
    }
}

pub fn read_config(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub algorithm: String,
    pub function: String,
    pub best_fitness: f64,
    pub evaluations: u64,
    pub wall_time_s: f64,
    pub trace_path: PathBuf,
}

impl std::fmt::Display for RunSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "algorithm={} function={} best_fitness={:.5e} evaluations={} wall_time_s={:.5e} trace={}",
            self.algorithm,
            self.function,
            self.best_fitness,
            self.evaluations,
            self.wall_time_s,
            self.trace_path.display()
        )
    }
}

/// Path precedence: explicit flag, config `output`, then
/// `<out dir or cwd>/<algorithm>_<function>_s<seed>.csv`.
pub fn resolve_trace_path(spec: &RunSpec, out: Option<&Path>, ctx: &Context) -> PathBuf {
    out.map(Path::to_path_buf)
        .or_else(|| spec.output.clone())
        .unwrap_or_else(|| {
            ctx.default_path(format!(
                "{}_{}_s{}.csv",
                spec.algorithm, spec.function, spec.seed
            ))
        })
}

pub fn run_command(
    spec: &RunSpec,
    seed: Option<u64>,
    out: Option<&Path>,
    ctx: &Context,
) -> Result<RunSummary> {
    let mut spec = spec.clone();
    if let Some(s) = seed {
        spec.seed = s;
    }
    let config = spec.run_config()?;
    let function = spec.benchmark()?;
    let path = resolve_trace_path(&spec, out, ctx);

    let start = Instant::now();
    let mut writer = CsvTraceWriter::new(create(&path)?)?;
    let trace = run_with_sink(&config, &function, &mut writer)?;
    writer.finish()?;
    trace.write_snapshots(&path, &config.space)?;
    Ok(RunSummary {
        algorithm: spec.algorithm.to_string(),
        function: spec.function.clone(),
        best_fitness: trace.best_fitness(),
        evaluations: trace.evaluations(),
        wall_time_s: start.elapsed().as_secs_f64(),
        trace_path: path,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub label: String,
    pub median_best: f64,
    pub iqr_best: f64,
    /// Median over seeds of the first iteration reaching the threshold;
    /// `None` when at least half the seeds never reach it.
    pub median_iterations: Option<f64>,
    pub reached: usize,
    pub seeds: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareTable {
    pub threshold: f64,
    pub rows: Vec<CompareRow>,
}

pub const COMPARE_HEADER: &str =
    "run,median_best,iqr_best,median_iterations_to_threshold,reached,seeds";

impl CompareTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{COMPARE_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.label,
                fmt_real(r.median_best),
                fmt_real(r.iqr_best),
                r.median_iterations.map_or("NA".to_string(), fmt_real),
                r.reached,
                r.seeds
            )?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn render(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.label.len())
            .max()
            .unwrap_or(4)
            .max(4);
        let mut s = format!(
            "{:<width$}  {:>12}  {:>12}  {:>12}  {:>7}\n",
            "run", "median_best", "iqr", "median_iters", "reached"
        );
        for r in &self.rows {
            let iters = r
                .median_iterations
                .map_or("NA".to_string(), |m| format!("{m:.1}"));
            s.push_str(&format!(
                "{:<width$}  {:>12.5e}  {:>12.5e}  {:>12}  {:>3}/{:<3}\n",
                r.label, r.median_best, r.iqr_best, iters, r.reached, r.seeds
            ));
        }
        s
    }
}

pub fn compare_command(spec: &CompareSpec, seeds: &[u64]) -> Result<CompareTable> {
    if spec.runs.is_empty() {
        return Err(Error::Config("compare needs at least one run".into()));
    }
    if seeds.is_empty() {
        return Err(Error::Config("--seeds must list at least one seed".into()));
    }
    let configs: Vec<(RunConfig, swarmlab::benchmarks::BenchmarkFunction)> = spec
        .runs
        .iter()
        .map(|r| Ok((r.run_config()?, r.benchmark()?)))
        .collect::<Result<_>>()?;
    let cells: Vec<(usize, u64)> = (0..configs.len())
        .flat_map(|i| seeds.iter().map(move |s| (i, *s)))
        .collect();
    let results: Vec<Result<(f64, Option<usize>)>> = cells
        .par_iter()
        .map(|(i, seed)| {
            let (cfg, f) = &configs[*i];
            run_optimization(&cfg.clone().with_seed(*seed), f)
                .map(|t| (t.best_fitness(), t.iterations_to(spec.threshold)))
                .map_err(|e| tag_cell(e, &spec.runs[*i], *seed))
        })
        .collect();

    let mut rows = Vec::with_capacity(configs.len());
    let mut it = results.into_iter();
    for run in &spec.runs {
        let cell: Vec<(f64, Option<usize>)> = (&mut it).take(seeds.len()).collect::<Result<_>>()?;
        let best: Vec<f64> = cell.iter().map(|c| c.0).collect();
        let iters: Vec<f64> = cell
            .iter()
            .map(|c| c.1.map_or(f64::INFINITY, |t| t as f64))
            .collect();
        let m = median(&iters);
        rows.push(CompareRow {
            label: run.label(),
            median_best: median(&best),
            iqr_best: iqr(&best),
            median_iterations: m.is_finite().then_some(m),
            reached: cell.iter().filter(|c| c.1.is_some()).count(),
            seeds: seeds.len(),
        });
    }
    rows.sort_by(|a, b| a.median_best.total_cmp(&b.median_best));
    Ok(CompareTable {
        threshold: spec.threshold,
        rows,
    })
}

fn tag_cell(e: Error, run: &RunSpec, seed: u64) -> Error {
    let prefix = format!("run {} seed {seed}: ", run.label());
    match e {
        Error::InvalidArgument(m) => Error::InvalidArgument(prefix + &m),
        Error::InvalidSpace(m) => Error::InvalidSpace(prefix + &m),
        Error::Numeric {
            message,
            position,
            iteration,
        } => Error::Numeric {
            message: prefix + &message,
            position,
            iteration,
        },
        Error::Config(m) => Error::Config(prefix + &m),
        Error::Contract(m) => Error::Contract(prefix + &m),
        Error::Io(m) => Error::Io(prefix + &m),
    }
}

#[derive(Debug, Clone)]
pub struct TuneOutcome {
    pub report: TuningReport,
    pub report_path: PathBuf,
    pub self_tuned: Option<swarmlab::tuning::SelfTuneResult>,
}

pub fn tune_command(spec: &TuneSpec, ctx: &Context) -> Result<TuneOutcome> {
    let base = spec.base.run_config()?;
    let f = spec.base.benchmark()?;
    let path = spec.base.output.clone().unwrap_or_else(|| {
        ctx.default_path(format!(
            "{}_{}_tuning.csv",
            spec.base.algorithm, spec.base.function
        ))
    });
    let file = create(&path)?;
    let report =
        grid_parametric_study(&base, &spec.ranges, spec.points_per_range, &f, &spec.seeds)?;
    report.write_csv(BufWriter::new(file))?;

    let self_tuned = match &spec.self_tune {
        None => None,
        Some(st) => {
            let kind = st.algorithm.parse()?;
            let meta = RunConfig::new(kind, base.space.clone())
                .with_budget(
                    st.population.unwrap_or(DEFAULT_POPULATION),
                    st.iterations.unwrap_or(20),
                )
                .with_seed(st.seed.unwrap_or(0));
            Some(self_tune(&meta, &base, &spec.ranges, &f, &spec.seeds)?)
        }
    };
    Ok(TuneOutcome {
        report,
        report_path: path,
        self_tuned,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeReport {
    pub n_states: usize,
    pub transitions: u64,
    pub lambda2: f64,
    pub chain_path: PathBuf,
}

/// Default chain path: `<trace stem>_chain.csv` next to the trace.
pub fn chain_path(trace: &Path) -> PathBuf {
    let stem = trace
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trace".into());
    trace.with_file_name(format!("{stem}_chain.csv"))
}

pub fn analyze_command(trace: &Path, bins: usize, out: Option<&Path>) -> Result<AnalyzeReport> {
    if bins == 0 {
        return Err(Error::Config("--bins must be at least 1".into()));
    }
    let (space, snapshots) = read_snapshots(trace)?;
    if snapshots.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "{} holds {} snapshot(s); at least 2 are needed (set snapshot_every > 0)",
            trace.display(),
            snapshots.len()
        )));
    }
    let n_states = state_count(&space, bins)
        .ok()
        .filter(|n| *n <= MAX_STATES)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "{bins} bins in {} dimensions exceeds {MAX_STATES} states",
                space.dim()
            ))
        })?;
    let trajectories = discretize_positions(&snapshots, &space, bins)?;
    let chain = empirical_transition_matrix(&trajectories, n_states)?;
    let lambda2 = second_eigenvalue(&chain)?;

    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| chain_path(trace));
    let mut w = BufWriter::new(create(&path)?);
    for row in chain.rows() {
        let vals: Vec<String> = row.iter().map(|v| fmt_real(*v)).collect();
        writeln!(w, "{}", vals.join(","))?;
    }
    w.flush()?;
    let transitions = (0..n_states)
        .flat_map(|i| (0..n_states).map(move |j| (i, j)))
        .map(|(i, j)| chain.count(i, j))
        .sum();
    Ok(AnalyzeReport {
        n_states,
        transitions,
        lambda2,
        chain_path: path,
    })
}

/// The one-line diagnostic printed for every failed command.
pub fn diagnostic(e: &Error) -> String {
    let msg = e
        .to_string()
        .replace('\\', "\\\\")
        .replace('"', "\\\"")
        .replace('\n', " ");
    format!("error kind={} message=\"{msg}\"", e.kind())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => 2,
        Error::Io(_) => 3,
        _ => 1,
    }
}
