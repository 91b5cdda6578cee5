//! Command-line front end.
//!
//! [`dispatch`] parses arguments and writes to caller-supplied streams so the
//! whole interface can be exercised in-process.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use num_complex::Complex64;
use num_rational::BigRational;
use thiserror::Error;

use crate::array::{CodedArray, ParseError};
use crate::audit::{star_audit, AuditError};
use crate::compare::{compare_subpacketization, sweep_csv, CompareError};
use crate::construct::{
    audit_lift, latin_mapda, latin_square, lift_regular_pda, mn_mapda, mn_pda, ConstructionError,
    LiftAuditError, LiftTrace,
};
use crate::miso::{simulate, ChannelKind, Mode, SimError};
use crate::scheme::{parse_demands, place, plan_delivery, verify_plan, PlanError};
use crate::validate::{required_antennas, validate_mapda, validate_pda, ValidationError};

#[derive(Debug, Parser)]
#[command(
    name = "mapda",
    version,
    about = "Multiple-antenna placement delivery arrays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an array and print it in PDA text format.
    #[command(subcommand)]
    Construct(Construction),
    /// Check a PDA file, or an MAPDA file when `--antennas` is given.
    Validate {
        file: PathBuf,
        #[arg(long)]
        antennas: Option<usize>,
    },
    /// Print the per-block delivery plan of an MAPDA.
    Plan(PlanArgs),
    /// Run zero-forcing delivery and check every decode.
    Simulate {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value = "cauchy")]
        channel: ChannelKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "exact")]
        mode: Mode,
    },
    /// Run the star-counting audit, and the lift audit when trace files exist.
    Audit {
        file: PathBuf,
        #[arg(long)]
        antennas: usize,
        /// Prefix of `.q0 .p1 .u .u0 .p2 .p` files written by `construct --trace`.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Compare subpacketization across schemes at sum-DoF t + L.
    Compare {
        #[arg(long)]
        users: usize,
        #[arg(long)]
        antennas: usize,
        #[arg(long, required_unless_present = "sweep_t")]
        t: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Emit CSV over every t in 1..=K.
        #[arg(long)]
        sweep_t: bool,
    },
}

#[derive(Debug, Args)]
struct PlanArgs {
    file: PathBuf,
    /// Comma-separated 1-based file indices, one per user.
    #[arg(long)]
    demands: String,
    #[arg(long)]
    files: usize,
    /// Defaults to the smallest L the array supports.
    #[arg(long)]
    antennas: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Construction {
    /// Maddah-Ali–Niesen PDA.
    MnPda {
        #[arg(long)]
        users: usize,
        #[arg(long)]
        t: usize,
    },
    /// Cyclic Latin square.
    Latin {
        #[arg(long)]
        order: usize,
    },
    /// Latin square with integers above L replaced by stars.
    LatinMapda {
        #[arg(long)]
        users: usize,
        #[arg(long)]
        antennas: usize,
    },
    /// Lift a regular PDA read from a file.
    Lift {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        antennas: usize,
        #[command(flatten)]
        trace: TraceArg,
    },
    /// Lift of the Maddah-Ali–Niesen PDA.
    MnMapda {
        #[arg(long)]
        users: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        antennas: usize,
        #[command(flatten)]
        trace: TraceArg,
    },
}

#[derive(Debug, Args)]
struct TraceArg {
    /// Write every lift stage to PREFIX.<stage>.
    #[arg(long, value_name = "PREFIX")]
    trace: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error(transparent)]
    Audit(#[from] AuditError),
    #[error("lift audit failed: {0}")]
    LiftAudit(#[from] LiftAuditError),
    #[error(transparent)]
    Compare(#[from] CompareError),
    #[error("invalid demands: {0}")]
    Demands(String),
    #[error("output: {0}")]
    Output(std::io::Error),
}

fn read_array(path: &Path) -> Result<CodedArray, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    CodedArray::from_text(&text).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

fn stage_path(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

fn write_trace(trace: &LiftTrace, prefix: &Path) -> Result<(), CliError> {
    for (suffix, array) in trace.stages() {
        let path = stage_path(prefix, suffix);
        fs::write(&path, array.to_text()).map_err(|source| CliError::Io { path, source })?;
    }
    Ok(())
}

fn read_trace(prefix: &Path, antennas: usize) -> Result<Option<LiftTrace>, CliError> {
    let load = |suffix: &str| -> Result<Option<CodedArray>, CliError> {
        let path = stage_path(prefix, suffix);
        if path.exists() {
            read_array(&path).map(Some)
        } else {
            Ok(None)
        }
    };
    let (Some(q0), Some(p)) = (load("q0")?, load("p")?) else {
        return Ok(None);
    };
    let trace = LiftTrace::from_stages(
        q0,
        load("p1")?,
        load("u")?,
        load("u0")?,
        load("p2")?,
        p,
        antennas,
    )?;
    Ok(Some(trace))
}

fn run(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = String::new();
    match command {
        Command::Construct(construction) => {
            let (array, trace) = match construction {
                Construction::MnPda { users, t } => (mn_pda(users, t)?, None),
                Construction::Latin { order } => (latin_square(order)?, None),
                Construction::LatinMapda { users, antennas } => {
                    (latin_mapda(users, antennas)?, None)
                }
                Construction::Lift {
                    input,
                    m,
                    antennas,
                    trace,
                } => {
                    let lifted = lift_regular_pda(&read_array(&input)?, m, antennas)?;
                    (lifted.p.clone(), trace.trace.map(|prefix| (lifted, prefix)))
                }
                Construction::MnMapda {
                    users,
                    t,
                    m,
                    antennas,
                    trace,
                } => {
                    let lifted = mn_mapda(users, t, m, antennas)?;
                    (lifted.p.clone(), trace.trace.map(|prefix| (lifted, prefix)))
                }
            };
            if let Some((lifted, prefix)) = trace {
                write_trace(&lifted, &prefix)?;
            }
            text = array.to_text();
        }
        Command::Validate { file, antennas } => {
            let array = read_array(&file)?;
            text = match antennas {
                Some(l) => validate_mapda(&array, l)?.to_string(),
                None => validate_pda(&array)?.to_string(),
            };
            text.push('\n');
        }
        Command::Plan(args) => {
            let (array, antennas, demands) = load_plan_inputs(&args)?;
            validate_mapda(&array, antennas)?;
            let plan = plan_delivery(&array, &demands, args.files)?;
            verify_plan(&plan, &place(&array, args.files), antennas)?;
            text = plan.to_string();
        }
        Command::Simulate {
            plan,
            channel,
            seed,
            mode,
        } => {
            let (array, antennas, demands) = load_plan_inputs(&plan)?;
            text = match mode {
                Mode::Exact => {
                    simulate::<BigRational>(&array, antennas, &demands, plan.files, channel, seed)?
                        .to_string()
                }
                Mode::Float => {
                    simulate::<Complex64>(&array, antennas, &demands, plan.files, channel, seed)?
                        .to_string()
                }
            };
        }
        Command::Audit {
            file,
            antennas,
            trace,
        } => {
            let array = read_array(&file)?;
            let audit = star_audit(&array, antennas)?;
            text.push_str(&format!("array {}\n", audit.params));
            text.push_str(&format!("n {}\n", audit.n));
            text.push_str(&format!(
                "M {} <= M' {}\n",
                audit.stars_used, audit.star_bound
            ));
            text.push_str(&format!(
                "S {} >= {}\n",
                audit.params.s, audit.s_lower_bound
            ));
            text.push_str(&format!(
                "sum-dof {} <= {}{}\n",
                audit.achieved_dof,
                audit.dof_bound,
                if audit.meets_bound() {
                    " (equality)"
                } else {
                    ""
                }
            ));
            if let Some(prefix) = trace {
                match read_trace(&prefix, antennas)? {
                    Some(lifted) => {
                        let report = audit_lift(&lifted)?;
                        text.push_str(&format!(
                            "lift pass: {} integers in {} columns each, {} P1 rows, {} P2 rows\n",
                            report.integers,
                            report.columns_per_integer,
                            report.p1_rows_checked,
                            report.p2_rows_checked
                        ));
                    }
                    None => text.push_str("lift skipped: no trace files\n"),
                }
            }
        }
        Command::Compare {
            users,
            antennas,
            t,
            m,
            sweep_t,
        } => {
            if sweep_t {
                text = sweep_csv(users, antennas, m)?;
            } else {
                let t = t.expect("clap enforces --t without --sweep-t");
                for row in compare_subpacketization(users, antennas, t, m)? {
                    text.push_str(&format!("{row}\n"));
                }
            }
        }
    }
    out.write_all(text.as_bytes()).map_err(CliError::Output)
}

fn load_plan_inputs(args: &PlanArgs) -> Result<(CodedArray, usize, Vec<usize>), CliError> {
    let array = read_array(&args.file)?;
    let antennas = args.antennas.unwrap_or_else(|| required_antennas(&array));
    let demands = parse_demands(&args.demands).map_err(CliError::Demands)?;
    Ok((array, antennas, demands))
}

/// Help text of the deepest subcommand named in `argv`.
fn usage_for(argv: &[std::ffi::OsString]) -> String {
    let mut command = Cli::command();
    for token in argv.iter().skip(1) {
        let Some(name) = token.to_str() else { break };
        match command.find_subcommand(name) {
            Some(sub) => command = sub.clone(),
            None => break,
        }
    }
    command.render_help().to_string()
}

/// Runs the command line `argv` (including the program name) and returns the
/// exit status.
pub fn dispatch<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString>,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
                let _ = write!(err, "\n{}", usage_for(&argv));
            }
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
