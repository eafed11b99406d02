use clap::{Args, Parser, Subcommand, ValueEnum};
use quasimap::algebra::parse_q;
use quasimap::geometry::{Geometry, Regulator};
use quasimap::graph_sum::{HodgeTable, TableProvider};
use quasimap::report::{series_table, table_csv, table_json, table_text, verify, Suite, VerifyConfig};
use quasimap::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;
const MISSING: u8 = 3;
const IO: u8 = 4;

#[derive(Parser)]
#[command(name = "quasimap", version, about = "Exact quasimap generating series and their verification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the base series of a geometry.
    Series(Common),
    /// Run a verification suite.
    Verify {
        suite: SuiteArg,
        #[command(flatten)]
        common: Common,
        /// Hodge integral table; `builtin` selects the embedded one.
        #[arg(long)]
        hodge_table: Option<String>,
        /// JSON cache of local genus-zero correlators.
        #[arg(long)]
        provider: Option<PathBuf>,
    },
    /// Write the base series as JSON and CSV into a directory.
    Export {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// local-p1p1, twisted-p3 or hypersurface.
    #[arg(long)]
    geometry: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = 6)]
    z_depth: usize,
    /// Comma-separated distinct nonzero rationals, e.g. "1,2,1/3".
    #[arg(long)]
    regulator: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Pf,
    Birkhoff,
    Asymptotics,
    Genus1,
    Anomaly,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::NonGenericRegulator(_) => USAGE,
            Error::MissingHodge(_) => MISSING,
            _ => FAIL,
        };
        Failure(code, e.to_string())
    }
}

impl Common {
    fn geometry(&self) -> Result<Geometry, Failure> {
        let name = self.geometry.clone().unwrap_or_else(|| if self.m.is_some() || self.n.is_some() { "hypersurface" } else { "local-p1p1" }.to_string());
        Ok(Geometry::from_name(&name, self.m, self.n)?)
    }

    fn regulator(&self) -> Result<Option<Regulator>, Failure> {
        let Some(text) = &self.regulator else { return Ok(None) };
        let c =
            text.split(',').map(|s| parse_q(s).ok_or_else(|| Failure(USAGE, format!("bad rational {s:?} in --regulator")))).collect::<Result<Vec<_>, _>>()?;
        Ok(Some(Regulator::new(c, 4)?))
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure(IO, format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Series(c) => {
            c.regulator()?;
            let t = series_table(&c.geometry()?, c.order.unwrap_or(8))?;
            let text = match c.format.unwrap_or(Format::Text) {
                Format::Json => table_json(&t),
                Format::Csv => table_csv(&t),
                Format::Text => table_text(&t),
            };
            emit(&c.out, &text)?;
            Ok(PASS)
        }
        Cmd::Export { common: c } => {
            let geom = c.geometry()?;
            let t = series_table(&geom, c.order.unwrap_or(8))?;
            let dir = c.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let stem = geom.name();
            write(&dir.join(format!("{stem}.json")), &table_json(&t))?;
            write(&dir.join(format!("{stem}.csv")), &table_csv(&t))?;
            Ok(PASS)
        }
        Cmd::Verify { suite, common: c, hodge_table, provider } => {
            let suite = match suite {
                SuiteArg::Pf => Suite::Pf,
                SuiteArg::Birkhoff => Suite::Birkhoff,
                SuiteArg::Asymptotics => Suite::Asymptotics,
                SuiteArg::Genus1 => Suite::Genus1,
                SuiteArg::Anomaly => Suite::Anomaly,
            };
            let default_order = if suite == Suite::Anomaly { 3 } else { 8 };
            let order = c.order.unwrap_or(default_order);
            if order == 0 {
                return Err(Failure(USAGE, "verification needs --order >= 1".into()));
            }
            let mut cfg = VerifyConfig::new(c.geometry()?, order);
            cfg.z_depth = c.z_depth;
            cfg.regulator = c.regulator()?;
            cfg.hodge = match hodge_table.as_deref() {
                None => None,
                Some("builtin") => Some(HodgeTable::builtin()),
                Some(p) => Some(HodgeTable::load(Path::new(p)).map_err(|e| Failure(MISSING, format!("{p}: {e}")))?),
            };
            if let Some(p) = provider {
                let text = std::fs::read_to_string(&p).map_err(|e| Failure(MISSING, format!("{}: {e}", p.display())))?;
                cfg.provider = Some(TableProvider::from_json(&text)?);
            }
            let start = Instant::now();
            let report = verify(suite, &cfg)?;
            eprintln!("{} finished in {:.2?}", suite.name(), start.elapsed());
            let text = match c.format.unwrap_or(Format::Text) {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
                Format::Csv => return Err(Failure(USAGE, "verify reports are json or text".into())),
            };
            emit(&c.out, &text)?;
            Ok(if report.passed() { PASS } else { FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
