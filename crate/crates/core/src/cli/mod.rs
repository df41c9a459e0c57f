//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage or parse errors, 3 for numeric or
//! domain errors raised by the library.

pub mod figures;
pub mod svg;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::blocks::{flatten, simulate_graph, Architecture, BlockGraph};
use crate::ct::{hpf, lpf};
use crate::discretize::{backward_euler, dt_hpf, dt_lpf_with_pole, matched_pz, negative_pole_filter, tustin};
use crate::dt::{self, DifferenceEquation, Sequence};
use crate::error::Error;
use crate::rational::{RationalTf, Root};

use figures::{csv_table, ct_frequency_rows, FigureId, FigureParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "firstorder", version, about = "First-order CT/DT filter toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Frequency response as CSV (freq_hz, magnitude_db, phase_rad).
    Response(ResponseArgs),
    /// Regenerate a figure as CSV tables plus an SVG rendering.
    Figure(FigureArgs),
    /// Discretize a continuous-time system and report coefficients.
    Discretize(DiscretizeArgs),
    /// Simulate or flatten a block-diagram netlist.
    Graph(GraphArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CtSystem {
    Lpf,
    Hpf,
    Integrator,
    Differentiator,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DtSystem {
    Differentiator,
    MovingSum,
    Accumulator,
    Oscillator,
    Lpf,
    Hpf,
    NegativePole,
}

#[derive(Args, Debug)]
struct ResponseArgs {
    /// Continuous-time system.
    #[arg(long, conflicts_with_all = ["dt", "b", "netlist"])]
    ct: Option<CtSystem>,
    /// Discrete-time system.
    #[arg(long, conflicts_with_all = ["num", "b", "netlist"])]
    dt: Option<DtSystem>,
    /// Custom CT numerator, ascending powers of s, comma separated.
    #[arg(long, requires = "den", allow_hyphen_values = true)]
    num: Option<String>,
    #[arg(long, requires = "num", allow_hyphen_values = true)]
    den: Option<String>,
    /// Custom DT feedforward coefficients in powers of z^-1.
    #[arg(long, requires = "a", conflicts_with = "num", allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, requires = "b", allow_hyphen_values = true)]
    a: Option<String>,
    /// DT system given as a block-diagram netlist file.
    #[arg(long)]
    netlist: Option<PathBuf>,
    /// Time constant in seconds for CT filters.
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Pole or zero coefficient for DT systems.
    #[arg(long)]
    zp: Option<f64>,
    /// Sample rate in Hz for DT systems.
    #[arg(long, default_value_t = 1.0)]
    fs: f64,
    /// Frequency grid in Hz: `start:stop:count`, a comma list, or one value.
    #[arg(long = "f")]
    grid: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// f1, f3, f4, f5, f6, f7, f8 or f9.
    id: String,
    #[arg(long)]
    zp: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    fs: f64,
    /// Transient length in samples.
    #[arg(long, default_value_t = 16)]
    n: usize,
    /// Points on the discrete frequency grid.
    #[arg(long, default_value_t = 512)]
    points: usize,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CtPrototype {
    Lpf,
    Hpf,
    Integrator,
    Tf,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Method {
    Euler,
    Matched,
    Tustin,
}

#[derive(Args, Debug)]
struct DiscretizeArgs {
    system: CtPrototype,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    num: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    den: Option<String>,
    /// Sample period in seconds.
    #[arg(long, allow_hyphen_values = true)]
    ts: f64,
    #[arg(long, value_enum, default_value_t = Method::Euler)]
    method: Method,
    /// Also write the coefficient and root table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ArchName {
    FirDifferentiator,
    MovingSum,
    Accumulator,
    Oscillator,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Stimulus {
    Impulse,
    Step,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Netlist file.
    #[arg(required_unless_present = "canonical")]
    netlist: Option<PathBuf>,
    /// Use one of the elementary architectures instead of a file.
    #[arg(long, conflicts_with = "netlist")]
    canonical: Option<ArchName>,
    #[arg(long, default_value_t = 1.0)]
    zp: f64,
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Stimulus::Impulse)]
    input: Stimulus,
    /// Print the flattened recurrence instead of simulating.
    #[arg(long)]
    flatten: bool,
    /// Print the graph as a netlist.
    #[arg(long)]
    emit: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Netlist { .. } => Failure::Usage(e.to_string()),
            e => Failure::Numeric(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

fn parse_list(name: &str, s: &str) -> CliResult<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| usage(format!("--{name}: cannot parse {s:?} as a number list")))?;
    if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
        return Err(usage(format!("--{name}: need finite numbers")));
    }
    Ok(v)
}

/// Parses `start:stop:count`, a comma-separated list, or a single value.
fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(usage("empty frequency grid"));
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let num = |t: &str| t.trim().parse::<f64>().map_err(|_| usage(format!("bad grid bound {t:?}")));
            let (a, b) = (num(start)?, num(stop)?);
            let n: usize = count.trim().parse().map_err(|_| usage(format!("bad grid count {count:?}")))?;
            if n == 0 {
                return Err(usage("empty frequency grid"));
            }
            if !(a.is_finite() && b.is_finite()) {
                return Err(usage("grid bounds must be finite"));
            }
            if n == 1 {
                return Ok(vec![a]);
            }
            Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())
        }
        [_] => parse_list("f", s),
        _ => Err(usage(format!("cannot parse grid {s:?}"))),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn read_netlist(path: &Path) -> CliResult<BlockGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(BlockGraph::from_netlist(&text)?)
}

fn dt_system(sys: DtSystem, zp: Option<f64>) -> CliResult<DifferenceEquation> {
    let canonical = |arch| -> CliResult<DifferenceEquation> { Ok(flatten(&BlockGraph::canonical(arch)?)?) };
    let unit = zp.unwrap_or(1.0);
    let pole = zp.unwrap_or(0.6);
    Ok(match sys {
        DtSystem::Differentiator => canonical(Architecture::FirDifferentiator(unit))?,
        DtSystem::MovingSum => canonical(Architecture::MovingSum(unit))?,
        DtSystem::Accumulator => canonical(Architecture::Accumulator(unit))?,
        DtSystem::Oscillator => canonical(Architecture::Oscillator(unit))?,
        DtSystem::Lpf => dt_lpf_with_pole(pole)?,
        DtSystem::Hpf => dt_hpf(pole)?,
        DtSystem::NegativePole => negative_pole_filter(pole)?,
    })
}

fn ct_system(sys: CtSystem, tau: f64) -> CliResult<RationalTf> {
    let tau = positive("tau", tau)?;
    Ok(match sys {
        CtSystem::Lpf => lpf(tau)?,
        CtSystem::Hpf => hpf(tau)?,
        CtSystem::Integrator => RationalTf::continuous([1.0], [0.0, 1.0])?,
        CtSystem::Differentiator => RationalTf::continuous([0.0, 1.0], [1.0])?,
    })
}

fn cmd_response(a: ResponseArgs, out: &mut dyn Write) -> CliResult<()> {
    let header = ["freq_hz", "magnitude_db", "phase_rad"];
    let grid = a.grid.as_deref().map(parse_grid).transpose()?;
    let ct = match (&a.ct, &a.num, &a.den) {
        (Some(sys), _, _) => Some(ct_system(*sys, a.tau)?),
        (None, Some(n), Some(d)) => Some(RationalTf::continuous(parse_list("num", n)?, parse_list("den", d)?)?),
        _ => None,
    };
    let rows = if let Some(tf) = ct {
        let grid = grid.unwrap_or_else(|| figures::log_grid(-3, 3));
        ct_frequency_rows(&tf, &grid)?
    } else {
        let fs = positive("fs", a.fs)?;
        let de = match (&a.dt, &a.b, &a.a, &a.netlist) {
            (Some(sys), _, _, _) => dt_system(*sys, a.zp)?,
            (None, Some(b), Some(av), _) => DifferenceEquation::new(parse_list("b", b)?, parse_list("a", av)?)?,
            (None, None, None, Some(p)) => flatten(&read_netlist(p)?)?,
            _ => return Err(usage("choose a system with --ct, --dt, --num/--den, --b/--a or --netlist")),
        };
        match grid {
            Some(g) => {
                let r = dt::freq_response(&de, fs, &g)?;
                g.iter()
                    .zip(&r.values)
                    .map(|(&f, v)| vec![f, (20.0 * v.norm().log10()).max(figures::DB_FLOOR), v.arg()])
                    .collect()
            }
            None => figures::dt_frequency_rows(&de, fs, 512)?,
        }
    };
    emit(out, a.out.as_deref(), &csv_table(&header, &rows))
}

fn cmd_figure(a: FigureArgs, out: &mut dyn Write) -> CliResult<()> {
    let id: FigureId = a.id.parse().map_err(Failure::Usage)?;
    positive("fs", a.fs)?;
    if a.points < 2 || a.n == 0 {
        return Err(usage("--n must be positive and --points at least 2"));
    }
    let params = FigureParams {
        zp: a.zp,
        fs: a.fs,
        n: a.n,
        points: a.points,
    };
    let artifacts = figures::generate(id, &params)?;
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Failure::Io(format!("{}: {e}", a.out_dir.display())))?;
    for art in &artifacts {
        let path = a.out_dir.join(&art.name);
        emit(out, Some(&path), &art.contents)?;
        writeln!(out, "{}", path.display()).map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(())
}

fn root_lines(text: &mut String, label: &str, roots: &[Root]) {
    let _ = writeln!(text, "{label}:");
    if roots.is_empty() {
        let _ = writeln!(text, "  (none)");
    }
    for r in roots {
        let _ = writeln!(
            text,
            "  {:.6} {:+.6}i  |z| = {:.6}  multiplicity {}",
            r.value.re,
            r.value.im,
            r.value.norm(),
            r.multiplicity
        );
    }
}

fn cmd_discretize(a: DiscretizeArgs, out: &mut dyn Write) -> CliResult<()> {
    let ts = positive("ts", a.ts)?;
    let tf = match a.system {
        CtPrototype::Lpf => lpf(positive("tau", a.tau)?)?,
        CtPrototype::Hpf => hpf(positive("tau", a.tau)?)?,
        CtPrototype::Integrator => RationalTf::continuous([1.0], [0.0, 1.0])?,
        CtPrototype::Tf => {
            let (n, d) = match (&a.num, &a.den) {
                (Some(n), Some(d)) => (parse_list("num", n)?, parse_list("den", d)?),
                _ => return Err(usage("tf needs --num and --den")),
            };
            RationalTf::continuous(n, d)?
        }
    };
    let dt_tf = match a.method {
        Method::Euler => backward_euler(&tf, ts)?,
        Method::Tustin => tustin(&tf, ts)?,
        Method::Matched => matched_pz(&tf.to_pzg()?, ts, None)?.to_tf()?,
    };
    let de = DifferenceEquation::from_tf(&dt_tf)?;
    let pzg = de.to_tf().to_pzg()?;
    let mut text = String::new();
    let _ = writeln!(text, "method: {:?}", a.method);
    let _ = writeln!(text, "Ts: {ts}");
    let _ = writeln!(text, "b: {:?}", de.b());
    let _ = writeln!(text, "a: {:?}", de.a());
    root_lines(&mut text, "zeros", &pzg.zeros);
    root_lines(&mut text, "poles", &pzg.poles);
    let _ = writeln!(text, "gain: {}", pzg.gain);
    emit(out, None, &text)?;
    if let Some(path) = a.csv {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut record = |fields: [String; 4]| w.write_record(&fields).map_err(|e| Failure::Io(e.to_string()));
        record(["kind".into(), "index".into(), "re".into(), "im".into()])?;
        for (i, v) in de.b().iter().enumerate() {
            record(["b".into(), i.to_string(), v.to_string(), "0".into()])?;
        }
        for (i, v) in de.a().iter().enumerate() {
            record(["a".into(), i.to_string(), v.to_string(), "0".into()])?;
        }
        for (kind, roots) in [("zero", &pzg.zeros), ("pole", &pzg.poles)] {
            let mut i = 0;
            for r in roots {
                for _ in 0..r.multiplicity {
                    record([kind.into(), i.to_string(), r.value.re.to_string(), r.value.im.to_string()])?;
                    i += 1;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
        std::fs::write(&path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_graph(a: GraphArgs, out: &mut dyn Write) -> CliResult<()> {
    let g = match (&a.netlist, a.canonical) {
        (Some(p), _) => read_netlist(p)?,
        (None, Some(arch)) => BlockGraph::canonical(match arch {
            ArchName::FirDifferentiator => Architecture::FirDifferentiator(a.zp),
            ArchName::MovingSum => Architecture::MovingSum(a.zp),
            ArchName::Accumulator => Architecture::Accumulator(a.zp),
            ArchName::Oscillator => Architecture::Oscillator(a.zp),
        })?,
        (None, None) => return Err(usage("give a netlist file or --canonical")),
    };
    g.validate()?;
    if a.emit {
        return emit(out, None, &g.to_netlist());
    }
    if a.flatten {
        let de = flatten(&g)?;
        return emit(out, None, &format!("b: {:?}\na: {:?}\n", de.b(), de.a()));
    }
    if a.n == 0 {
        return Err(usage("--n must be positive"));
    }
    let x = match a.input {
        Stimulus::Impulse => Sequence::impulse(a.n, 1.0)?,
        Stimulus::Step => Sequence::step(a.n, 1.0)?,
    };
    let y = simulate_graph(&g, &x, a.n)?;
    let rows: Vec<Vec<f64>> = y.samples().iter().enumerate().map(|(k, v)| vec![k as f64, *v]).collect();
    emit(out, None, &csv_table(&["n", "y"], &rows))
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Response(a) => cmd_response(a, out),
        Command::Figure(a) => cmd_figure(a, out),
        Command::Discretize(a) => cmd_discretize(a, out),
        Command::Graph(a) => cmd_graph(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_NUMERIC
        }
        Err(Failure::Io(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_NUMERIC
        }
    }
}
