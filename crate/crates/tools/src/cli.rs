//! Command implementations behind the `llg` binary.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use llg_core::blocking::{blocking_time, BlockingTime};
use llg_core::config::{Configuration, Pattern, RandomPattern};
use llg_core::cycles::{decompose, first_mismatch};
use llg_core::dynamics::{run, InitialCondition, SystemKind};
use llg_core::golden::{all_right_lengths, REFERENCE_LENGTHS};
use llg_core::hexclass::build_transition_graph;
use llg_core::lattice::{Direction, HexId, Site};
use llg_core::localtraj::{find_triperfect, LocalKind, Region};
use llg_core::stats::{
    classify_growth, diverges, fit_power_law_with, fraction_of_cycles, msd, tamsd,
    CycleLengthHistogram, FitMethod, DEFAULT_DELTA,
};
use serde_json::json;

use crate::formats::{self, FormatError, PatternFile};
use crate::svg;

/// Failure classes, mapped to process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Contract(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Contract(_) | CliError::Io(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<llg_core::Error> for CliError {
    fn from(e: llg_core::Error) -> Self {
        match e {
            llg_core::Error::Budget { .. } => CliError::Budget(e.to_string()),
            llg_core::Error::Internal(_) => CliError::Verification(e.to_string()),
            _ => CliError::Contract(e.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Core(c) => c.into(),
            other => CliError::Contract(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "llg",
    version,
    about = "Honeycomb Lorentz lattice gas with flipping scatterers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one particle and write trajectory, cycle and statistics files.
    Simulate(SimulateArgs),
    /// Replay the all-right run and compare its first 180 cycle lengths with
    /// the reference table.
    VerifyTable(VerifyArgs),
    /// Classify hexagon words and print the transition graph.
    Classify(OutArgs),
    /// Compute the blocking time of a periodic pattern.
    Blocking(BlockingArgs),
    /// Enumerate local trajectories on a disc of hexagons and search for a
    /// triperfect partition.
    Partition(PartitionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    Rotator,
    Mirror,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PatternArg {
    AllRight,
    AllLeft,
    A,
    B,
    File,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct PatternArgs {
    #[arg(long, value_enum, default_value = "all-right")]
    pub pattern: PatternArg,
    /// JSON pattern description, used with `--pattern file`.
    #[arg(long)]
    pub pattern_file: Option<PathBuf>,
    /// Seed for `--pattern random`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probability of a right scatterer for `--pattern random`.
    #[arg(long, default_value_t = 0.5)]
    pub p_right: f64,
}

impl PatternArgs {
    pub fn configuration(&self) -> Result<Configuration, CliError> {
        let pattern = match self.pattern {
            PatternArg::AllRight => Pattern::AllRight,
            PatternArg::AllLeft => Pattern::AllLeft,
            PatternArg::A => Pattern::pattern_a(),
            PatternArg::B => Pattern::pattern_b(),
            PatternArg::Random => Pattern::Random(RandomPattern::new(self.seed, self.p_right)?),
            PatternArg::File => {
                let path = self.pattern_file.as_ref().ok_or_else(|| {
                    CliError::Contract("--pattern file needs --pattern-file".into())
                })?;
                let text = fs::read_to_string(path)?;
                return Ok(PatternFile::parse(&text)?.configuration()?);
            }
        };
        Ok(Configuration::new(pattern))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Directory for output files; created if missing.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "rotator")]
    pub system: SystemArg,
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub p: i32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub q: i32,
    #[arg(long, default_value_t = 0)]
    pub k: u8,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Also render the trajectory and one cycle as SVG.
    #[arg(long)]
    pub svg: bool,
    /// Cycle to render, counting from 1; defaults to the last complete one.
    #[arg(long)]
    pub cycle: Option<usize>,
    /// Lower end of the power-law fit range.
    #[arg(long, default_value_t = 1000)]
    pub fit_min: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct BlockingArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Longest first return probed per initial condition.
    #[arg(long, default_value_t = 10_000)]
    pub bound: usize,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Center hexagon as `p,q`.
    #[arg(long, default_value = "1,-1", allow_hyphen_values = true)]
    pub center: String,
    /// Adjacency radius of the disc: 0, 1, 2 give 1, 7, 19 hexagons.
    #[arg(long, default_value_t = 0)]
    pub radius: usize,
    /// Evolve the configuration by this many rotator steps from
    /// the origin before partitioning.
    #[arg(long, default_value_t = 0)]
    pub steps: usize,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub svg: bool,
}

pub fn run_cli(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(a) => simulate(&a, out),
        Command::VerifyTable(a) => verify_table(&REFERENCE_LENGTHS, a.budget, out),
        Command::Classify(a) => classify(&a, out),
        Command::Blocking(a) => blocking(&a, out),
        Command::Partition(a) => partition(&a, out),
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_json(dir: &Path, name: &str, v: &serde_json::Value) -> Result<(), CliError> {
    let mut f = create(dir, name)?;
    serde_json::to_writer_pretty(&mut f, v).map_err(std::io::Error::from)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

pub fn simulate(a: &SimulateArgs, out: &mut impl Write) -> Result<(), CliError> {
    let mut c = a.pattern.configuration()?;
    let ic = InitialCondition::new(Site::new(a.p, a.q)?, Direction::new(a.k)?)?;
    let kind = match a.system {
        SystemArg::Rotator => SystemKind::Rotator,
        SystemArg::Mirror => SystemKind::Mirror,
    };
    let traj = run(kind, ic, &mut c, a.steps)?;
    let d = decompose(&traj);
    fs::create_dir_all(&a.out_dir)?;
    let dir = a.out_dir.as_path();

    let mut f = create(dir, "trajectory.csv")?;
    formats::write_trajectory_csv(&mut f, &traj)?;
    f.flush()?;
    let mut f = create(dir, "cycles.csv")?;
    formats::write_cycle_report(&mut f, &traj, &d)?;
    f.flush()?;

    let m = msd(&traj);
    let ta = tamsd(&m);
    let mut f = create(dir, "msd.csv")?;
    formats::write_series_csv(&mut f, &m)?;
    f.flush()?;
    let mut f = create(dir, "tamsd.csv")?;
    formats::write_series_csv(&mut f, &ta)?;
    f.flush()?;
    let hist = CycleLengthHistogram::from_decomposition(&d, a.steps);
    let mut f = create(dir, "cycle_lengths.csv")?;
    formats::write_histogram_csv(&mut f, &hist)?;
    f.flush()?;

    let mut summary = json!({
        "steps": a.steps,
        "system": format!("{:?}", kind).to_lowercase(),
        "pattern": PatternFile::describe(c.background(), None),
        "initial": {"p": a.p, "q": a.q, "k": a.k},
        "returns": d.cycles.len(),
        "fraction_l6": fraction_of_cycles(&hist).ok().and_then(|f| f.get(&6).copied()),
    });
    if a.steps >= 2 * a.fit_min.max(1) {
        let range = (a.fit_min.max(1), a.steps);
        let mut fits = serde_json::Map::new();
        for (name, method) in [
            ("log_log", FitMethod::default()),
            ("linear", FitMethod::Linear),
        ] {
            if let Ok(fit) = fit_power_law_with(&ta, range, method) {
                let mut v = formats::fit_json(&fit);
                v["growth"] = json!(classify_growth(&fit, diverges(&ta), DEFAULT_DELTA).label());
                fits.insert(name.into(), v);
            }
        }
        summary["tamsd_fit"] = serde_json::Value::Object(fits);
    }
    write_json(dir, "summary.json", &summary)?;

    if a.svg {
        fs::write(dir.join("trajectory.svg"), svg::path_svg(&traj.positions))?;
        let pick = match a.cycle {
            Some(i) if i >= 1 => d.cycles.get(i - 1),
            Some(_) => None,
            None => d.cycles.last(),
        };
        if let Some(cy) = pick {
            fs::write(dir.join("cycle.svg"), svg::path_svg(cy.sites(&traj)))?;
        } else if a.cycle.is_some() {
            return Err(CliError::Contract("requested cycle does not exist".into()));
        }
    }
    writeln!(
        out,
        "{} steps, {} returns, files in {}",
        a.steps,
        d.cycles.len(),
        dir.display()
    )?;
    Ok(())
}

/// Compare the replayed cycle lengths with `golden`, reporting the first
/// mismatch by its 1-based index.
pub fn verify_table(golden: &[u32], budget: usize, out: &mut impl Write) -> Result<(), CliError> {
    let lengths = all_right_lengths(golden.len(), budget)?;
    let head: Vec<String> = lengths.iter().take(5).map(usize::to_string).collect();
    writeln!(out, "L(1..5) = {}", head.join(","))?;
    match first_mismatch(&lengths, golden) {
        None => {
            writeln!(out, "all {} cycle lengths match", golden.len())?;
            Ok(())
        }
        Some(i) => {
            writeln!(
                out,
                "first mismatch at L({}): table {}, simulated {}",
                i + 1,
                golden[i],
                lengths[i]
            )?;
            Err(CliError::Verification(format!(
                "cycle length L({}) differs",
                i + 1
            )))
        }
    }
}

pub fn classify(a: &OutArgs, out: &mut impl Write) -> Result<(), CliError> {
    let g = build_transition_graph()?;
    let v = formats::graph_json(&g);
    serde_json::to_writer_pretty(&mut *out, &v).map_err(std::io::Error::from)?;
    writeln!(out)?;
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
        write_json(dir, "graph.json", &v)?;
    }
    if g.component_sizes() != [7, 6] {
        return Err(CliError::Verification(format!(
            "component sizes {:?}, expected [7, 6]",
            g.component_sizes()
        )));
    }
    Ok(())
}

pub fn blocking(a: &BlockingArgs, out: &mut impl Write) -> Result<(), CliError> {
    let c = a.pattern.configuration()?;
    let r = blocking_time(&c, a.bound)?;
    let v = formats::blocking_json(&r);
    serde_json::to_writer_pretty(&mut *out, &v).map_err(std::io::Error::from)?;
    writeln!(out)?;
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
        write_json(dir, "blocking.json", &v)?;
    }
    if let BlockingTime::NotBlockingWithin(b) = r.blocking_time {
        writeln!(out, "not blocking within {b} steps")?;
    }
    Ok(())
}

fn parse_center(s: &str) -> Result<HexId, CliError> {
    let bad = || CliError::Contract(format!("--center expects p,q, got {s:?}"));
    let (p, q) = s.split_once(',').ok_or_else(bad)?;
    let p = p.trim().parse().map_err(|_| bad())?;
    let q = q.trim().parse().map_err(|_| bad())?;
    Ok(HexId::new(p, q)?)
}

pub fn partition(a: &PartitionArgs, out: &mut impl Write) -> Result<(), CliError> {
    let mut c = a.pattern.configuration()?;
    if a.steps > 0 {
        run(
            SystemKind::Rotator,
            InitialCondition::default(),
            &mut c,
            a.steps,
        )?;
    }
    let region = Region::disc(parse_center(&a.center)?, a.radius);
    let (found, part) = find_triperfect(&region, &c)?;
    let v = formats::partition_json(&region, &found, part.as_ref());
    serde_json::to_writer_pretty(&mut *out, &v).map_err(std::io::Error::from)?;
    writeln!(out)?;
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
        write_json(dir, "partition.json", &v)?;
        if a.svg {
            let trajs: Vec<_> = found
                .trajectories
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    (
                        t.sites().collect::<Vec<_>>(),
                        t.kind == LocalKind::LocalCycle,
                        part.as_ref().map(|p| p.parts[i]),
                    )
                })
                .collect();
            fs::write(
                dir.join("partition.svg"),
                svg::partition_svg(&trajs, region.sites()),
            )?;
        }
    }
    if part.is_none() {
        writeln!(out, "no triperfect partition")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> (Result<(), CliError>, String) {
        let cli = Cli::try_parse_from(std::iter::once("llg").chain(args.iter().copied())).unwrap();
        let mut out = Vec::new();
        let r = run_cli(cli, &mut out);
        (r, String::from_utf8(out).unwrap())
    }

    fn simulate_in(dir: &Path, extra: &[&str]) -> Result<(), CliError> {
        let d = dir.to_str().unwrap();
        let mut args = vec!["simulate", "--out-dir", d];
        args.extend_from_slice(extra);
        exec(&args).0
    }

    #[test]
    fn zero_steps_write_a_single_row() {
        let dir = tempfile::tempdir().unwrap();
        simulate_in(dir.path(), &["--steps", "0"]).unwrap();
        let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
        assert_eq!(csv, "t,p,q,k\n0,0,0,0\n");
        let cycles = fs::read_to_string(dir.path().join("cycles.csv")).unwrap();
        assert_eq!(cycles.lines().count(), 1);
    }

    #[test]
    fn pattern_b_never_returns() {
        let dir = tempfile::tempdir().unwrap();
        simulate_in(dir.path(), &["--pattern", "b", "--steps", "5000"]).unwrap();
        let cycles = fs::read_to_string(dir.path().join("cycles.csv")).unwrap();
        assert_eq!(cycles.lines().count(), 1);
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
                .unwrap();
        assert_eq!(summary["returns"], 0);
    }

    #[test]
    fn all_right_summary_has_both_fits() {
        let dir = tempfile::tempdir().unwrap();
        simulate_in(dir.path(), &["--steps", "20000", "--svg"]).unwrap();
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
                .unwrap();
        assert!(summary["tamsd_fit"]["log_log"]["alpha"].is_number());
        assert!(summary["tamsd_fit"]["linear"]["alpha"].is_number());
        assert!(dir.path().join("trajectory.svg").exists());
        assert!(dir.path().join("cycle.svg").exists());
    }

    #[test]
    fn runs_are_byte_identical() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let args = ["--pattern", "random", "--seed", "42", "--steps", "3000"];
        simulate_in(a.path(), &args).unwrap();
        simulate_in(b.path(), &args).unwrap();
        for f in [
            "trajectory.csv",
            "cycles.csv",
            "msd.csv",
            "tamsd.csv",
            "cycle_lengths.csv",
            "summary.json",
        ] {
            assert_eq!(
                fs::read(a.path().join(f)).unwrap(),
                fs::read(b.path().join(f)).unwrap(),
                "{f}"
            );
        }
    }

    #[test]
    fn invalid_initial_state_is_a_contract_error() {
        let dir = tempfile::tempdir().unwrap();
        let e = simulate_in(dir.path(), &["--p", "1", "--q", "1"]).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        let e = simulate_in(dir.path(), &["--k", "1"]).unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn golden_replay_reports_the_perturbed_index() {
        let mut golden = llg_core::golden::all_right_lengths(20, 1_000_000)
            .unwrap()
            .into_iter()
            .map(|l| l as u32)
            .collect::<Vec<_>>();
        let mut out = Vec::new();
        verify_table(&golden, 1_000_000, &mut out).unwrap();
        golden[11] += 4;
        let mut out = Vec::new();
        let e = verify_table(&golden, 1_000_000, &mut out).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(String::from_utf8(out)
            .unwrap()
            .contains("first mismatch at L(12)"));
    }

    #[test]
    fn golden_replay_out_of_budget_exits_three() {
        let mut out = Vec::new();
        let e = verify_table(&REFERENCE_LENGTHS, 100, &mut out).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn classify_prints_two_components() {
        let (r, out) = exec(&["classify"]);
        r.unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let sizes: Vec<usize> = v["components"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_array().unwrap().len())
            .collect();
        assert_eq!(sizes, [7, 6]);
    }

    #[test]
    fn blocking_of_all_right_is_six() {
        let (r, out) = exec(&["blocking", "--pattern", "all-right"]);
        r.unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["tau_b"], 6);
        let e = exec(&["blocking", "--pattern", "random"]).0.unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn partition_of_all_right_disc() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let (r, out) = exec(&["partition", "--radius", "1", "--out-dir", d, "--svg"]);
        r.unwrap();
        assert!(!out.contains("no triperfect partition"));
        assert!(dir.path().join("partition.svg").exists());
        assert!(exec(&["partition", "--center", "0,0"]).0.is_err());
    }
}
