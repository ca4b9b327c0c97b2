//! `bdlab`: runs the shipped experiments and writes CSV or JSON tables.
//!
//! Exit codes: 0 success, 2 usage, 3 numerical failure, 4 I/O.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use bdlab_core::baez_duarte::{
    compact_open_check, distance_sweep, moebius_residual_with, CyclicityFamily,
};
use bdlab_core::dirichlet::{decompose, dirichlet_energy_bergman_crosscheck, golden_pair_check};
use bdlab_core::hardy::{hk_coeffs, named_function, verify_all, verify_identity, Identity};
use bdlab_core::pdcp::{range_exclusion_witness, sample_odd_periodic, span_distance_l2, wintner_fs};
use bdlab_core::{Error, Family, NamedFunction, NtTables, RidgePolicy, SineSeq, Target};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use output::{Format, Table};

#[derive(Debug, Parser)]
#[command(name = "bdlab", version, about = "Hardy-space experiments around the Baez-Duarte criterion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Truncation length.
    #[arg(long = "N", default_value_t = 1 << 16)]
    n_trunc: usize,
    /// Output file; standard output when absent. A `<out>.meta.json`
    /// sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficients of h_k.
    Hk {
        #[arg(long)]
        k: u64,
        /// Number of coefficients (defaults to N).
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Operator identity checks.
    Verify {
        /// Run the default grid.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum)]
        identity: Option<IdentityName>,
        #[arg(long, default_value_t = 2)]
        m: u64,
        #[arg(long, default_value_t = 2)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        k: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Least-squares distance from the target to span{f_2..f_K}.
    Distance {
        /// Comma-separated K values.
        #[arg(long = "K", value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, value_enum, default_value_t = FamilyArg::Hk)]
        family: FamilyArg,
        #[arg(long, value_enum, default_value_t = TargetArg::One)]
        target: TargetArg,
        #[command(flatten)]
        common: Common,
    },
    /// Residual of the Moebius combination of (I - S) h_k against 1 - z.
    Moebius {
        /// Comma-separated series cutoffs.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Dirichlet energy of s_k at 1 against the Bergman norm of R_k, or
    /// the golden-ratio pair check.
    Dirichlet {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6,7,8,9,10")]
        k: Vec<u64>,
        /// Run the golden-ratio pair check on this many circle points instead.
        #[arg(long)]
        golden: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Dilation experiments in the sine basis.
    Pdcp {
        #[arg(long, value_enum, default_value_t = PdcpMode::Sample)]
        mode: PdcpMode,
        /// Wintner exponent s > 1/2.
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// Sample grid on (0, 2).
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        /// Comma-separated numbers of dilates for `span`.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
        n_max: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// |sum_{k<=n} (mu(k)/k) h_k(z) - 1| at points of the disk.
    Pointwise {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Comma-separated points `re` or `re+imi`, e.g. `0,0.5,0+0.5i`.
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,0+0.5i")]
        points: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Cyclicity witnesses for {W_n 1} and {1 - z^n}.
    Cyclicity {
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IdentityName {
    SemigroupW,
    SemigroupT,
    Quasiconjugacy,
    WnOnHk,
    PhiMapsRkToHk,
    TIsometry,
    PsiIsometry,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Hk,
    Ims,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    One,
    OneMinusZ,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PdcpMode {
    /// Sample f_s on (0, 2).
    Sample,
    /// Distance from e_1 to the span of dilates of f_s.
    Span,
    /// Abel-mean witnesses at 1.
    Witness,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::SpaceMismatch { .. } => Failure::Usage(e.to_string()),
            Error::SolverFailure { .. } | Error::SelectionUnstable { .. } => {
                Failure::Numerical(e.to_string())
            }
            Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::Format(_) => {
                Failure::Io(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn parse_point(s: &str) -> Result<Complex64, Failure> {
    s.trim().parse::<Complex64>().map_err(|_| Failure::Usage(format!("cannot parse point {s:?}")))
}

fn check_common(c: &Common) -> Result<(), Failure> {
    if c.n_trunc < 16 {
        return Err(Failure::Usage(format!("--N must be >= 16, got {}", c.n_trunc)));
    }
    if c.threads == 0 {
        return Err(Failure::Usage("--threads must be >= 1".into()));
    }
    Ok(())
}

fn nonempty<T>(v: &[T], flag: &str) -> Result<(), Failure> {
    if v.is_empty() {
        return Err(Failure::Usage(format!("{flag} needs at least one value")));
    }
    Ok(())
}

fn run(cmd: Command) -> Result<(), Failure> {
    let (name, common) = match &cmd {
        Command::Hk { common, .. } => ("hk", common),
        Command::Verify { common, .. } => ("verify", common),
        Command::Distance { common, .. } => ("distance", common),
        Command::Moebius { common, .. } => ("moebius", common),
        Command::Dirichlet { common, .. } => ("dirichlet", common),
        Command::Pdcp { common, .. } => ("pdcp", common),
        Command::Pointwise { common, .. } => ("pointwise", common),
        Command::Cyclicity { common, .. } => ("cyclicity", common),
    };
    check_common(common)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads)
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let n_trunc = common.n_trunc;
    let mut tolerances = serde_json::Map::new();
    let mut verdict_ok = true;
    let table = pool.install(|| -> Result<Table, Failure> {
        Ok(match &cmd {
            Command::Hk { k, n, .. } => {
                let h = hk_coeffs(*k, n.unwrap_or(n_trunc))?;
                tolerances.insert("tail_norm_bound".into(), json!(h.tail_norm_bound()));
                Table::from_seq(&h)
            }
            Command::Verify { all, identity, m, n, k, common } => {
                let reports = if *all {
                    verify_all(n_trunc, common.seed)?
                } else {
                    let id = match identity {
                        Some(IdentityName::SemigroupW) => Identity::SemigroupW { m: *m, n: *n },
                        Some(IdentityName::SemigroupT) => Identity::SemigroupT { m: *m, n: *n },
                        Some(IdentityName::Quasiconjugacy) => Identity::Quasiconjugacy { n: *n },
                        Some(IdentityName::WnOnHk) => Identity::WnOnHk { n: *n, k: *k },
                        Some(IdentityName::PhiMapsRkToHk) => Identity::PhiMapsRkToHk { k: *k },
                        Some(IdentityName::TIsometry) => Identity::TIsometry,
                        Some(IdentityName::PsiIsometry) => Identity::PsiIsometry,
                        None => {
                            return Err(Failure::Usage("pass --all or --identity".into()));
                        }
                    };
                    vec![verify_identity(id, n_trunc, common.seed)?]
                };
                tolerances.insert("identity".into(), json!(bdlab_core::hardy::IDENTITY_TOLERANCE));
                verdict_ok = reports.iter().all(|r| r.pass);
                Table::identities(&reports)
            }
            Command::Distance { k, family, target, .. } => {
                nonempty(k, "--K")?;
                let family = match family {
                    FamilyArg::Hk => Family::Hk,
                    FamilyArg::Ims => Family::ImsHk,
                };
                let target = match target {
                    TargetArg::One => Target::One,
                    TargetArg::OneMinusZ => Target::OneMinusZ,
                };
                let policy = RidgePolicy::default();
                tolerances.insert("ridge_initial_scale".into(), json!(policy.initial_scale));
                tolerances.insert("ridge_max_scale".into(), json!(policy.max_scale));
                Table::distances(&distance_sweep(family, k, n_trunc, target, policy)?)
            }
            Command::Moebius { n, .. } => {
                nonempty(n, "--n")?;
                let top = n.iter().copied().max().unwrap_or(1).max(n_trunc);
                let tables = NtTables::load_or_build(top, output::cache_dir().as_deref())?;
                let reports: Vec<_> = n
                    .iter()
                    .map(|&n| moebius_residual_with(&tables, n, n_trunc))
                    .collect::<Result<_, _>>()?;
                Table::moebius(&reports)
            }
            Command::Dirichlet { k, golden, .. } => {
                if let Some(grid) = golden {
                    let r = golden_pair_check(*grid)?;
                    tolerances.insert("golden".into(), json!(bdlab_core::dirichlet::GOLDEN_TOLERANCE));
                    verdict_ok = r.pass;
                    Table::golden(&r)
                } else {
                    nonempty(k, "--k")?;
                    let one = Complex64::new(1.0, 0.0);
                    let mut rows = Vec::new();
                    for &kk in k {
                        let s = named_function(NamedFunction::Sk(kk), n_trunc)?;
                        let d = decompose(&s, one)?;
                        let c = dirichlet_energy_bergman_crosscheck(kk, n_trunc)?;
                        rows.push((kk, d.summary(), c));
                    }
                    Table::dirichlet(&rows)
                }
            }
            Command::Pdcp { mode, s, grid, n_max, common } => {
                let f = wintner_fs(*s, n_trunc)?;
                match mode {
                    PdcpMode::Sample => Table::samples(&sample_odd_periodic(&f, *grid)?),
                    PdcpMode::Span => {
                        nonempty(n_max, "--n-max")?;
                        let e1 = SineSeq::basis(1, n_trunc)?;
                        let reports: Vec<_> = n_max
                            .iter()
                            .map(|&m| span_distance_l2(&e1, &f, m, RidgePolicy::default()))
                            .collect::<Result<_, _>>()?;
                        Table::spans(&reports)
                    }
                    PdcpMode::Witness => {
                        let r = range_exclusion_witness(n_trunc, common.seed)?;
                        verdict_ok = r.pass;
                        Table::witness(&r)
                    }
                }
            }
            Command::Pointwise { n, points, .. } => {
                nonempty(n, "--n")?;
                nonempty(points, "--points")?;
                let pts: Vec<Complex64> = points.iter().map(|p| parse_point(p)).collect::<Result<_, _>>()?;
                let mut reports = Vec::new();
                for &nn in n {
                    reports.extend(compact_open_check(&pts, nn, n_trunc)?);
                }
                Table::pointwise(&reports)
            }
            Command::Cyclicity { n_max, .. } => {
                let reports = [CyclicityFamily::WnOnOne, CyclicityFamily::TnOnOneMinusZ]
                    .into_iter()
                    .map(|f| bdlab_core::baez_duarte::cyclicity_witness(f, *n_max))
                    .collect::<Result<Vec<_>, _>>()?;
                verdict_ok = reports.iter().all(|r| r.pass);
                Table::cyclicity(&reports)
            }
        })
    })?;
    output::emit(&table, name, common, tolerances)?;
    if verdict_ok {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("{name}: at least one check failed")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("i/o error: {m}");
            ExitCode::from(4)
        }
    }
}
