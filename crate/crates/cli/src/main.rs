use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aidepth_core::bits::BitString;
use aidepth_core::enumerator::{enumerate_with, read_cache, write_cache, ComplexityTable, Horizon, Limits};
use aidepth_core::measures::{self, dump_csv, run_suite, Suite, SuiteOptions, Weight};
use aidepth_core::seqlab::{self, check_grid, linear_grid, Estimator, PrefixProfile, SequenceGen};
use aidepth_core::timebound::{Significance, TimeBound};
use aidepth_core::upm;
use aidepth_core::{Error, Exec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "aidepth", version, about = "Exact small-horizon algorithmic information quantities")]
struct Cli {
    /// Write results here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Run every sweep on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reference machine utilities.
    #[command(subcommand)]
    Machine(MachineCmd),
    /// Build or inspect enumeration caches.
    #[command(subcommand)]
    Enum(EnumCmd),
    /// Time-bounded complexity K^T(x).
    K(TimedQuery),
    /// Time-bounded a-priori probability Q^T(x).
    Q(TimedQuery),
    /// Computational depth K^T(x) - K(x).
    Depth(TimedQuery),
    /// Logical depth at significance b.
    Ldepth(LdepthArgs),
    /// Randomness deficiency of x against a measure or weight.
    Deficiency(DeficiencyArgs),
    /// Mutual information K(x) + K(y) - K(x, y).
    Mi(MiArgs),
    /// Run a verification suite over the whole horizon.
    Verify(VerifyArgs),
    /// Sequence-level estimates from finite prefixes.
    #[command(subcommand)]
    Seq(SeqCmd),
}

#[derive(Subcommand)]
enum MachineCmd {
    /// Run one program and print its outcome as JSON.
    Run {
        #[arg(long)]
        program: BitString,
        #[arg(long, default_value_t = 1000)]
        max_steps: u64,
    },
}

#[derive(Subcommand)]
enum EnumCmd {
    Build {
        #[arg(long)]
        k_max: u8,
        #[arg(long)]
        t_max: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        /// Refuse horizons with more programs than this.
        #[arg(long, default_value_t = Limits::default().max_programs)]
        max_programs: u128,
    },
    Info {
        #[command(flatten)]
        cache: CacheArg,
        /// Dump a per-output CSV table instead of the summary.
        #[arg(long)]
        csv: bool,
        /// Budgets for the K_T and depth_T columns.
        #[arg(long, value_delimiter = ',')]
        steps: Vec<u64>,
        /// Significances for the ldepth_b columns.
        #[arg(long = "b", value_delimiter = ',')]
        significances: Vec<u32>,
    },
}

#[derive(Args)]
struct CacheArg {
    /// Enumeration cache built by `enum build`.
    #[arg(long, env = "AIDEPTH_CACHE")]
    cache: PathBuf,
}

#[derive(Args)]
struct TimedQuery {
    #[command(flatten)]
    cache: CacheArg,
    #[arg(long)]
    x: BitString,
    /// Absolute step budget; overrides --t-family.
    #[arg(long)]
    steps: Option<u64>,
    /// Time bound evaluated at |x|: lin:C, poly:C, exp:C or const:C.
    #[arg(long)]
    t_family: Option<TimeBound>,
}

impl TimedQuery {
    fn budget(&self, table: &ComplexityTable) -> u64 {
        match (self.steps, &self.t_family) {
            (Some(t), _) => t,
            (None, Some(f)) => f.eval(self.x.len()),
            (None, None) => table.t_max(),
        }
    }
}

#[derive(Args)]
struct LdepthArgs {
    #[command(flatten)]
    cache: CacheArg,
    #[arg(long)]
    x: BitString,
    #[arg(long)]
    b: u32,
}

#[derive(Args)]
struct DeficiencyArgs {
    #[command(flatten)]
    cache: CacheArg,
    #[arg(long)]
    x: BitString,
    /// uniform, bernoulli:N/D, qmodel or mt:T.
    #[arg(long, default_value = "uniform")]
    measure: Weight,
}

#[derive(Args)]
struct MiArgs {
    #[command(flatten)]
    cache: CacheArg,
    #[arg(long)]
    x: BitString,
    #[arg(long)]
    y: BitString,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Kraft,
    Prefixfree,
    Coding,
    Lemma4,
    Thm3i,
    Thm3ii,
    Dimlemmas,
}

#[derive(Args)]
struct VerifyArgs {
    suite: SuiteName,
    #[command(flatten)]
    cache: CacheArg,
    /// Also write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = SuiteOptions::default().spread_cap)]
    spread_cap: f64,
    #[arg(long, default_value_t = SuiteOptions::default().sigma_cap)]
    sigma_cap: u32,
    #[arg(long, default_value_t = SuiteOptions::default().b_max)]
    b_max: u32,
}

#[derive(Args)]
struct EstimatorArgs {
    /// oracle, compress[:PASSES] or exact[@STEPS].
    #[arg(long, default_value = "oracle")]
    estimator: String,
    /// Cache for the exact estimator.
    #[arg(long, env = "AIDEPTH_CACHE")]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Explicit ascending prefix lengths.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<usize>,
    #[arg(long, default_value_t = 4096)]
    n_max: usize,
    #[arg(long, default_value_t = 16)]
    points: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<Vec<usize>, Error> {
        let grid = if self.grid.is_empty() { linear_grid(self.n_max, self.points) } else { self.grid.clone() };
        check_grid(&grid)?;
        Ok(grid)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileKind {
    Dim,
    DimT,
    Depth,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum SeqCmd {
    /// Per-prefix complexity density (or dimensional depth) profile.
    Profile {
        #[arg(long)]
        gen: SequenceGen,
        #[command(flatten)]
        est: EstimatorArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value = "dim")]
        kind: ProfileKind,
        /// Budget for dim-t and depth (steps for exact, passes for compress).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Normalized, Levin and dimensional mutual information of two sequences.
    Mi {
        #[arg(long)]
        a: SequenceGen,
        #[arg(long)]
        b: SequenceGen,
        #[command(flatten)]
        est: EstimatorArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = seqlab::DEFAULT_M_FACTOR)]
        m_factor: usize,
    },
    /// Super-deepness conditions on in-horizon prefixes (demonstrative).
    Diag {
        #[arg(long)]
        gen: SequenceGen,
        #[command(flatten)]
        cache: CacheArg,
        #[arg(long, value_delimiter = ',', default_value = "const:0,const:1,log:1")]
        s_family: Vec<Significance>,
        #[arg(long, value_delimiter = ',', default_value = "lin:1,lin:4,poly:2")]
        t_family: Vec<TimeBound>,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<usize>,
    },
}

/// Failure of a command, carrying its exit code.
enum Failure {
    Usage(String),
    Refused(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidBitString(_) | Error::InvalidHorizon(_) | Error::InvalidArgument(_) | Error::ZeroLength => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Refused(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Refused(e.to_string())
    }
}

type CmdResult = Result<Outcome, Failure>;

/// What a successful command produced. A failed verification still prints
/// its report but exits with the refusal code.
struct Outcome {
    text: String,
    passed: bool,
}

fn ok(text: impl Into<String>) -> CmdResult {
    Ok(Outcome { text: text.into(), passed: true })
}

fn load(path: &Path) -> Result<ComplexityTable, Failure> {
    let file = File::open(path).map_err(|e| Failure::Refused(format!("{}: {e}", path.display())))?;
    Ok(read_cache(BufReader::new(file))?)
}

/// Rounds to six decimals so JSON floats match the text format.
fn f6(v: f64) -> Value {
    if v.is_finite() {
        json!((v * 1e6).round() / 1e6)
    } else {
        Value::Null
    }
}

fn f6_all(vs: &[f64]) -> Value {
    Value::Array(vs.iter().map(|v| f6(*v)).collect())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn estimator<'a>(args: &EstimatorArgs, table: &'a Option<ComplexityTable>) -> Result<Estimator<'a>, Failure> {
    let spec = args.estimator.as_str();
    let bad = || Failure::Usage(format!("unknown estimator {spec:?}"));
    if spec == "oracle" {
        return Ok(Estimator::Oracle);
    }
    if let Some(rest) = spec.strip_prefix("compress") {
        let passes = match rest.strip_prefix(':') {
            Some(p) => p.parse().map_err(|_| bad())?,
            None if rest.is_empty() => seqlab::COMPRESS_FULL_PASSES,
            None => return Err(bad()),
        };
        if passes == 0 {
            return Err(Failure::Usage("compress needs at least one pass".into()));
        }
        return Ok(Estimator::Compress { passes });
    }
    if let Some(rest) = spec.strip_prefix("exact") {
        let steps = match rest.strip_prefix('@') {
            Some(t) => Some(t.parse().map_err(|_| bad())?),
            None if rest.is_empty() => None,
            None => return Err(bad()),
        };
        let table = table.as_ref().ok_or_else(|| Failure::Usage("the exact estimator needs --cache".into()))?;
        return Ok(Estimator::Exact { table, steps });
    }
    Err(bad())
}

fn load_for(args: &EstimatorArgs) -> Result<Option<ComplexityTable>, Failure> {
    match (&args.cache, args.estimator.starts_with("exact")) {
        (Some(path), true) => Ok(Some(load(path)?)),
        _ => Ok(None),
    }
}

fn profile_json(gen: &SequenceGen, est: &Estimator, params: Value, p: &PrefixProfile) -> Value {
    json!({
        "generator": gen.id(),
        "estimator": est.name(),
        "params": params,
        "n_grid": p.n_grid,
        "values": f6_all(&p.values),
        "tail_inf": f6(p.tail_inf),
        "tail_sup": f6(p.tail_sup),
    })
}

fn machine(cmd: MachineCmd) -> CmdResult {
    match cmd {
        MachineCmd::Run { program, max_steps } => {
            if max_steps == 0 {
                return Err(Failure::Usage("--max-steps must be positive".into()));
            }
            ok(serde_json::to_string(&upm::run_bits(&program, max_steps)).expect("outcome serializes"))
        }
    }
}

fn enum_cmd(cmd: EnumCmd, exec: Exec) -> CmdResult {
    match cmd {
        EnumCmd::Build { k_max, t_max, out, shards, max_programs } => {
            let horizon = Horizon::new(k_max, t_max)?;
            let table = enumerate_with(horizon, shards, exec, Limits { max_programs })?;
            let mut w = BufWriter::new(File::create(&out)?);
            write_cache(&table, &mut w)?;
            w.flush()?;
            ok(pretty(&json!({
                "cache": out.display().to_string(),
                "k_max": k_max,
                "t_max": t_max,
                "halted": table.records().len(),
                "outputs": table.output_count(),
                "kraft_sum": table.kraft_sum().to_string(),
            })))
        }
        EnumCmd::Info { cache, csv, steps, significances } => {
            let table = load(&cache.cache)?;
            if csv {
                if let Some(t) = steps.iter().find(|&&t| t == 0 || t > table.t_max()) {
                    return Err(Failure::Usage(format!("budget {t} outside 1..={}", table.t_max())));
                }
                return ok(dump_csv(&table, &steps, &significances));
            }
            let non_halt: Vec<Value> = table
                .non_halt()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    json!({"k": i + 1, "out_of_gas": c.out_of_gas, "diverged_static": c.diverged_static, "malformed": c.malformed})
                })
                .collect();
            let spread = table.coding_spread();
            ok(pretty(&json!({
                "k_max": table.horizon().k_max,
                "t_max": table.t_max(),
                "machine_hash": format!("{:016x}", table.machine_hash()),
                "halted": table.records().len(),
                "outputs": table.output_count(),
                "kraft_sum": table.kraft_sum().to_string(),
                "coding_spread": spread.as_ref().map(|s| f6(s.max)),
                "coding_spread_argmax": spread.as_ref().map(|s| s.argmax.to_string()),
                "non_halt": non_halt,
            })))
        }
    }
}

fn verify(args: VerifyArgs, exec: Exec) -> CmdResult {
    let table = load(&args.cache.cache)?;
    let opts = SuiteOptions { spread_cap: args.spread_cap, sigma_cap: args.sigma_cap, b_max: args.b_max };
    let suite = match args.suite {
        SuiteName::Kraft => Some(Suite::Kraft),
        SuiteName::Prefixfree => Some(Suite::PrefixFree),
        SuiteName::Coding => Some(Suite::Coding),
        SuiteName::Lemma4 => Some(Suite::Lemma4),
        SuiteName::Thm3i => Some(Suite::Thm3i),
        SuiteName::Thm3ii => Some(Suite::Thm3ii),
        SuiteName::Dimlemmas => None,
    };
    let report = match suite {
        Some(s) => run_suite(&table, s, opts, exec)?,
        None => seqlab::dim_lemmas_suite(&table, exec)?,
    };
    let text = report.to_json();
    if let Some(path) = &args.report {
        std::fs::write(path, format!("{text}\n"))?;
    }
    Ok(Outcome { text, passed: report.passed() })
}

fn seq(cmd: SeqCmd, exec: Exec) -> CmdResult {
    match cmd {
        SeqCmd::Profile { gen, est, grid, kind, budget, format } => {
            let table = load_for(&est)?;
            let e = estimator(&est, &table)?;
            let grid = grid.grid()?;
            let needs_budget = !matches!(kind, ProfileKind::Dim);
            let budget = match (needs_budget, budget) {
                (true, None) => return Err(Failure::Usage("--budget is required for dim-t and depth".into())),
                (_, b) => b,
            };
            let mut params = json!({"kind": match kind { ProfileKind::Dim => "dim", ProfileKind::DimT => "dim-t", ProfileKind::Depth => "depth" }});
            let profile = match kind {
                ProfileKind::Dim => seqlab::dim_profile(&gen, &e, &grid, exec)?,
                ProfileKind::DimT => seqlab::dim_t_profile(&gen, &e, budget.unwrap(), &grid, exec)?,
                ProfileKind::Depth => {
                    let d = seqlab::dim_depth_profile(&gen, &e, budget.unwrap(), &grid, exec)?;
                    params["dim_t"] = f6(d.dim_t);
                    params["dim"] = f6(d.dim);
                    params["bound_holds"] = json!(d.bound_holds);
                    d.profile
                }
            };
            params["budget"] = json!(budget);
            params["window"] = json!(profile.window);
            match format {
                Format::Csv => ok(profile.to_csv().trim_end().to_string()),
                Format::Json => ok(pretty(&profile_json(&gen, &e, params, &profile))),
            }
        }
        SeqCmd::Mi { a, b, est, grid, m_factor } => {
            let table = load_for(&est)?;
            let e = estimator(&est, &table)?;
            let grid = grid.grid()?;
            let im = |x: &SequenceGen, y: &SequenceGen| -> Result<Value, Failure> {
                let r = seqlab::im_star(x, y, &e, &grid, m_factor, exec)?;
                Ok(
                    json!({"lower": f6(r.lower), "upper": f6(r.upper), "values": f6_all(&r.profile.values), "skipped": r.skipped}),
                )
            };
            let levin = seqlab::levin_mi_profile(&a, &b, &e, &grid, exec)?;
            let idim = seqlab::dim_mutual_info(&a, &b, &e, &grid, exec)?;
            ok(pretty(&json!({
                "a": a.id(),
                "b": b.id(),
                "estimator": e.name(),
                "n_grid": grid,
                "params": {"m_factor": m_factor, "pairing": "bit interleaving", "first": idim.first, "window": levin.window},
                "im_star_ab": im(&a, &b)?,
                "im_star_ba": im(&b, &a)?,
                "levin": {"values": f6_all(&levin.values), "sup": f6(levin.sup)},
                "i_dim": f6(idim.value),
            })))
        }
        SeqCmd::Diag { gen, cache, s_family, t_family, grid } => {
            let table = load(&cache.cache)?;
            check_grid(&grid)?;
            let report = seqlab::super_deep_diag(&gen, &table, &s_family, &t_family, &grid)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            Ok(Outcome { text, passed: report.passed() })
        }
    }
}

fn query(command: Command, exec: Exec) -> CmdResult {
    match command {
        Command::Machine(cmd) => machine(cmd),
        Command::Enum(cmd) => enum_cmd(cmd, exec),
        Command::K(q) => {
            let table = load(&q.cache.cache)?;
            ok(table.k_t(&q.x, q.budget(&table))?.to_string())
        }
        Command::Q(q) => {
            let table = load(&q.cache.cache)?;
            ok(table.q_t(&q.x, q.budget(&table))?.to_string())
        }
        Command::Depth(q) => {
            let table = load(&q.cache.cache)?;
            ok(measures::depth_t(&table, &q.x, q.budget(&table))?.to_string())
        }
        Command::Ldepth(a) => {
            let table = load(&a.cache.cache)?;
            ok(measures::ldepth(&table, &a.x, a.b)?.to_string())
        }
        Command::Deficiency(a) => {
            let table = load(&a.cache.cache)?;
            ok(measures::deficiency(&table, &a.x, &a.measure)?.to_string())
        }
        Command::Mi(a) => {
            let table = load(&a.cache.cache)?;
            ok(measures::mutual_info(&table, &a.x, &a.y)?.to_string())
        }
        Command::Verify(a) => verify(a, exec),
        Command::Seq(cmd) => seq(cmd, exec),
    }
}

fn emit(target: Option<&Path>, text: &str) -> io::Result<()> {
    match target {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}")?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match query(cli.command, exec) {
        Ok(outcome) => {
            match emit(cli.output.as_deref(), &outcome.text) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
                _ => {}
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(2)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
