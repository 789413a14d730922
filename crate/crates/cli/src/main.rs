use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ising_edge::{couplings_from_physical, BoundaryField, CouplingParams};
use ising_edge_cli::checks;
use ising_edge_cli::output::Table;
use ising_edge_cli::tables;

const EXIT_USAGE: u8 = 1;
const EXIT_WARNING: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ising-edge",
    version,
    about = "Energy density of the 2D Ising model near a boundary field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Deviation, bulk value and total at one depth M.
    Eval {
        #[command(flatten)]
        couplings: CouplingArgs,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 1e-12)]
        abs_tol: f64,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Deviation against M with the matching large-M closed form.
    ScanM {
        #[command(flatten)]
        couplings: CouplingArgs,
        #[arg(long, default_value_t = 1)]
        m_start: u32,
        #[arg(long, default_value_t = 50)]
        m_stop: u32,
        #[arg(long, default_value_t = 1)]
        m_step: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Scan in t = T/T_c at a fixed ratio E2/E1.
    ScanT {
        #[arg(long, default_value_t = 1.0)]
        e1: f64,
        /// E2/E1.
        #[arg(long, default_value_t = 1.0)]
        ratio: f64,
        #[arg(long, default_value_t = 0.0)]
        hb: f64,
        #[arg(long)]
        hb_infinite: bool,
        #[arg(long, default_value_t = 0.5)]
        start: f64,
        #[arg(long, default_value_t = 1.5)]
        stop: f64,
        #[arg(long, default_value_t = 11)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        m: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Bessel scaling forms against m (or m_bar with --above).
    Scaling {
        #[arg(long)]
        z1c: Option<f64>,
        /// Depth M used to convert m into a distance from criticality.
        #[arg(long, default_value_t = 100.0)]
        m_rows: f64,
        #[arg(long)]
        above: bool,
        #[arg(long, default_value_t = 0.1)]
        start: f64,
        #[arg(long, default_value_t = 5.0)]
        stop: f64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The critical crossover function F over a range of zeta_c^2.
    Crossover {
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 5.0)]
        stop: f64,
        #[arg(long, default_value_t = 51)]
        count: usize,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// F on [0, 5] with 501 points and the located zero.
    Figure1 {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the validation suite.
    Validate,
    /// Transfer-matrix oracle against quadrature for several widths.
    OracleCompare {
        #[command(flatten)]
        couplings: CouplingArgs,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 40)]
        n_rows: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
        n_cols: Vec<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct CouplingArgs {
    #[arg(long)]
    z1: Option<f64>,
    #[arg(long)]
    z2: Option<f64>,
    #[arg(long)]
    z: Option<f64>,
    /// Infinite boundary field (z = 1).
    #[arg(long)]
    hb_infinite: bool,
    #[arg(long)]
    e1: Option<f64>,
    #[arg(long)]
    e2: Option<f64>,
    #[arg(long)]
    hb: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
}

impl CouplingArgs {
    fn resolve(&self) -> Result<CouplingParams, String> {
        if self.hb_infinite && (self.z.is_some() || self.hb.is_some()) {
            return Err("--hb-infinite conflicts with --z and --hb".into());
        }
        match (self.z1, self.z2, self.e1, self.e2, self.temperature) {
            (Some(z1), Some(z2), None, None, None) => {
                if self.hb.is_some() {
                    return Err("--hb needs --e1 --e2 --temperature; use --z with --z1 --z2".into());
                }
                let z = if self.hb_infinite {
                    1.0
                } else {
                    self.z.unwrap_or(0.0)
                };
                CouplingParams::new(z1, z2, z).map_err(|e| e.to_string())
            }
            (None, None, Some(e1), Some(e2), Some(t)) => {
                if self.z.is_some() {
                    return Err("--z needs --z1 --z2; use --hb with --e1 --e2 --temperature".into());
                }
                let hb = if self.hb_infinite {
                    BoundaryField::Infinite
                } else {
                    BoundaryField::Finite(self.hb.unwrap_or(0.0))
                };
                couplings_from_physical(e1, e2, hb, t).map_err(|e| e.to_string())
            }
            _ => Err("give either --z1 --z2 [--z] or --e1 --e2 --temperature [--hb]".into()),
        }
    }

    fn meta(&self, p: &CouplingParams) -> Value {
        json!({"z1": p.z1(), "z2": p.z2(), "z": p.z()})
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 2 when any row carries an accuracy warning.
    #[arg(long)]
    strict: bool,
}

fn emit(table: &Table, command: &str, mut meta: Value, out: &OutputArgs) -> Result<u8, String> {
    let sink: Box<dyn Write> = match &out.out {
        Some(path) => Box::new(File::create(path).map_err(|e| format!("{}: {e}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    let res = match out.format {
        Format::Csv => table.write_csv(&mut w),
        Format::Json => {
            meta["command"] = json!(command);
            meta["version"] = json!(env!("CARGO_PKG_VERSION"));
            serde_json::to_writer(&mut w, &table.to_json(meta))
                .map_err(io::Error::from)
                .and_then(|()| writeln!(w))
        }
    };
    res.and_then(|()| w.flush()).map_err(|e| e.to_string())?;
    if table.any_warning() {
        eprintln!("warning: some rows missed the requested accuracy");
        if out.strict {
            return Ok(EXIT_WARNING);
        }
    }
    Ok(0)
}

fn run(cmd: Command) -> Result<u8, String> {
    let e = |err: ising_edge::Error| err.to_string();
    match cmd {
        Command::Eval {
            couplings,
            m,
            abs_tol,
            rel_tol,
            out,
        } => {
            let p = couplings.resolve()?;
            let t = tables::eval(p, m, abs_tol, rel_tol).map_err(e)?;
            let mut meta = couplings.meta(&p);
            meta["m"] = json!(m);
            meta["abs_tol"] = json!(abs_tol);
            meta["rel_tol"] = json!(rel_tol);
            emit(&t, "eval", meta, &out)
        }
        Command::ScanM {
            couplings,
            m_start,
            m_stop,
            m_step,
            out,
        } => {
            let p = couplings.resolve()?;
            if m_start == 0 || m_stop < m_start || m_step == 0 {
                return Err("need 1 <= --m-start <= --m-stop and --m-step >= 1".into());
            }
            let ms: Vec<u32> = (m_start..=m_stop).step_by(m_step as usize).collect();
            let t = tables::scan_m(p, &ms).map_err(e)?;
            let mut meta = couplings.meta(&p);
            meta["m_start"] = json!(m_start);
            meta["m_stop"] = json!(m_stop);
            meta["m_step"] = json!(m_step);
            emit(&t, "scan-m", meta, &out)
        }
        Command::ScanT {
            e1,
            ratio,
            hb,
            hb_infinite,
            start,
            stop,
            count,
            m,
            out,
        } => {
            let field = if hb_infinite {
                BoundaryField::Infinite
            } else {
                BoundaryField::Finite(hb)
            };
            let ts = tables::linspace(start, stop, count).map_err(e)?;
            let (t, tc) = tables::scan_t(e1, ratio, field, &ts, m).map_err(e)?;
            let meta = json!({"e1": e1, "ratio": ratio, "hb": if hb_infinite { json!("infinite") } else { json!(hb) },
                "m": m, "critical_temperature": tc});
            emit(&t, "scan-t", meta, &out)
        }
        Command::Scaling {
            z1c,
            m_rows,
            above,
            start,
            stop,
            count,
            out,
        } => {
            let z1c = z1c.unwrap_or_else(tables::isotropic_z1c);
            let ms = tables::linspace(start, stop, count).map_err(e)?;
            let t = tables::scaling(z1c, m_rows, above, &ms).map_err(e)?;
            let meta = json!({"z1c": z1c, "m_rows": m_rows, "side": if above { "above" } else { "below" }});
            emit(&t, "scaling", meta, &out)
        }
        Command::Crossover {
            start,
            stop,
            count,
            m,
            out,
        } => {
            let zs = tables::linspace(start, stop, count).map_err(e)?;
            let t = tables::crossover(&zs, m).map_err(e)?;
            emit(&t, "crossover", json!({"m": m}), &out)
        }
        Command::Figure1 { out } => {
            let (t, zero) = tables::figure1().map_err(e)?;
            emit(&t, "figure1", json!({"zero": zero}), &out)
        }
        Command::Validate => {
            let results = checks::run_all();
            let passed = results.iter().filter(|r| r.passed).count();
            for r in &results {
                println!("{r}");
            }
            println!("{passed}/{} checks passed", results.len());
            Ok(if passed == results.len() {
                0
            } else {
                EXIT_VALIDATION
            })
        }
        Command::OracleCompare {
            couplings,
            m,
            n_rows,
            n_cols,
            out,
        } => {
            let p = couplings.resolve()?;
            let t = tables::oracle_compare(p, m, n_rows, &n_cols).map_err(e)?;
            let mut meta = couplings.meta(&p);
            meta["m"] = json!(m);
            meta["n_rows"] = json!(n_rows);
            emit(&t, "oracle-compare", meta, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
