mod parse;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hlat_core::detline::trials::{self, TrialConfig};
use hlat_core::enumerate::{CosetEngine, EnumBudget, DEFAULT_MAX_NODES};
use hlat_core::hbounds::{self, EtaCertificate, HBoundInput, HBoundResult};
use hlat_core::invariants::{self, Limits, DEFAULT_M_MAX, DEFAULT_RANK_GUARD};
use hlat_core::lattice::LatticeVector;
use hlat_core::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hlat", version, about = "Exact lattice invariants, h-bounds and determinant-line sign checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Node budget per enumeration.
    #[arg(long, global = true, env = "HLAT_MAX_NODES", default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: u64,

    /// Largest degree m scanned for eta polynomials.
    #[arg(long, global = true, default_value_t = DEFAULT_M_MAX)]
    m_max: u32,

    /// Largest rank for which the 2^rank class sweep is attempted.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_GUARD)]
    rank_guard: usize,

    /// Worker threads (default: all cores). Does not affect results.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct VectorArgs {
    /// Basis coordinates, comma separated.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "w_ambient", required_unless_present = "w_ambient")]
    w: Option<String>,
    /// Ambient coordinates (Gamma family and diagonal lattices); halves as 1/2 or 0.5.
    #[arg(long, allow_hyphen_values = true)]
    w_ambient: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, determinant, parity and unimodularity.
    Info { lattice: String },
    /// Minimum norm of the coset w + 2L and its minimizers.
    CosetMin {
        lattice: String,
        #[command(flatten)]
        w: VectorArgs,
        /// Print every minimizer.
        #[arg(long)]
        list: bool,
    },
    /// Whether w is extremal, with a shorter vector of its coset if not.
    Extremal {
        lattice: String,
        #[command(flatten)]
        w: VectorArgs,
    },
    /// eta(L, w, a, m), or its coefficient table in a with --polynomial.
    Eta {
        lattice: String,
        #[command(flatten)]
        w: VectorArgs,
        /// The functional a, comma separated; required for m > 0 unless --polynomial.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long)]
        polynomial: bool,
    },
    /// e(L) with its certificate.
    EInvariant { lattice: String },
    /// Bounds on h.
    HBound {
        #[command(subcommand)]
        which: HBoundCommand,
    },
    /// Randomized checks of the determinant-line sign identities.
    DetlineCheck {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum HBoundCommand {
    /// Certified h(Sigma(2, 2k-1, 4k-3)).
    Brieskorn {
        #[arg(long)]
        k: u64,
    },
    /// Lower bound from an eta certificate (w, m[, a]).
    Certificate {
        lattice: String,
        #[command(flatten)]
        w: VectorArgs,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Genus of the surface.
        #[arg(long, default_value_t = 0)]
        g: u64,
        #[arg(long, default_value_t = 1)]
        bplus: u64,
    },
    /// Window (0, ceil(g/2)) for the change of h under surgery on a slice surface.
    Surgery {
        #[arg(long)]
        genus: u64,
    },
}

/// A command's output: a JSON result and its text rendering.
struct Report {
    command: &'static str,
    result: Value,
    text: String,
    exit: u8,
}

impl Report {
    fn ok(command: &'static str, result: Value, text: String) -> Self {
        Report { command, result, text, exit: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::CertificateFailed(_) | Error::NotExtremal { .. } | Error::EtaVanishes => 4,
        Error::NotExact(_) => 5,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotSquare { .. } => "not_square",
        Error::NotSymmetric(..) => "not_symmetric",
        Error::NotDefinite(_) => "not_definite",
        Error::BadRank(_) => "bad_rank",
        Error::SignMismatch => "sign_mismatch",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NotInLattice(_) => "not_in_lattice",
        Error::NoAmbientBasis => "no_ambient_basis",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::RankTooLarge { .. } => "rank_too_large",
        Error::ParityMismatch { .. } => "parity_mismatch",
        Error::DegreeTooLarge { .. } => "degree_too_large",
        Error::NotExtremal { .. } => "not_extremal",
        Error::EtaVanishes => "eta_vanishes",
        Error::NotUnimodular(_) => "not_unimodular",
        Error::KTooSmall(_) => "k_too_small",
        Error::CertificateFailed(_) => "certificate_failed",
        Error::NotExact(_) => "not_exact",
        Error::InvalidInput(_) => "invalid_input",
        Error::Parse(_) => "parse_error",
    }
}

fn coords(v: &LatticeVector) -> String {
    let parts: Vec<String> = v.0.iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

fn opt(v: &Option<num_bigint::BigInt>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

fn bound_text(r: &HBoundResult) -> String {
    match &r.value {
        Some(v) => format!("{v}\nlower: {}\nupper: {}", opt(&r.lower), opt(&r.upper)),
        None if r.upper.is_none() => format!("{}\nh >= {}", opt(&r.lower), opt(&r.lower)),
        None => format!("({}, {})\nlower: {}\nupper: {}", opt(&r.lower), opt(&r.upper), opt(&r.lower), opt(&r.upper)),
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn run(cli: &Cli, limits: &Limits) -> hlat_core::Result<Report> {
    let budget = &limits.budget;
    Ok(match &cli.command {
        Command::Info { lattice } => {
            let l = parse::lattice_spec(lattice)?;
            let result = json!({
                "name": l.name(),
                "rank": l.rank(),
                "det": l.det().to_string(),
                "sign": l.sign(),
                "even": l.is_even(),
                "unimodular": l.is_unimodular(),
                "ambient": l.ambient().is_some(),
            });
            let text = format!(
                "name: {}\nrank: {}\ndet: {}\nsign: {:?}\neven: {}\nunimodular: {}",
                l.name().unwrap_or("-"),
                l.rank(),
                l.det(),
                l.sign(),
                l.is_even(),
                l.is_unimodular()
            );
            Report::ok("info", result, text)
        }
        Command::CosetMin { lattice, w, list } => {
            let l = parse::lattice_spec(lattice)?;
            let w = parse::lattice_vector(&l, w.w.as_deref(), w.w_ambient.as_deref())?;
            let r = CosetEngine::new(&l)?.coset_min(&w, budget)?;
            let mut result = json!({
                "w": w,
                "min_norm": r.min_norm.to_string(),
                "minimizer_count": r.minimizers.len(),
                "nodes_visited": r.nodes_visited,
            });
            let mut text = format!("min_norm: {}\nminimizers: {}", r.min_norm, r.minimizers.len());
            if *list {
                result["minimizers"] = to_json(&r.minimizers);
                for z in &r.minimizers {
                    text.push_str(&format!("\n{}", coords(z)));
                }
            }
            Report::ok("coset-min", result, text)
        }
        Command::Extremal { lattice, w } => {
            let l = parse::lattice_spec(lattice)?;
            let w = parse::lattice_vector(&l, w.w.as_deref(), w.w_ambient.as_deref())?;
            let norm = l.norm(&w)?;
            let r = CosetEngine::new(&l)?.coset_min(&w, budget)?;
            let extremal = r.min_norm == norm;
            let shorter = (!extremal).then(|| r.minimizers[0].clone());
            let mut text = format!("extremal: {extremal}\nnorm: {norm}\ncoset_min: {}", r.min_norm);
            if let Some(z) = &shorter {
                text.push_str(&format!("\nshorter: {} (norm {})", coords(z), r.min_norm));
            }
            let result = json!({
                "w": w,
                "norm": norm.to_string(),
                "extremal": extremal,
                "coset_min": r.min_norm.to_string(),
                "shorter": shorter,
            });
            Report::ok("extremal", result, text)
        }
        Command::Eta { lattice, w, a, m, polynomial } => {
            let l = parse::lattice_spec(lattice)?;
            let w = parse::lattice_vector(&l, w.w.as_deref(), w.w_ambient.as_deref())?;
            if *polynomial {
                let p = invariants::eta_polynomial(&l, &w, *m, limits)?;
                let mut text = format!("terms: {}", p.coeffs().len());
                for (exps, c) in p.coeffs() {
                    let e: Vec<String> = exps.iter().map(u32::to_string).collect();
                    text.push_str(&format!("\n[{}] {c}", e.join(", ")));
                }
                Report::ok("eta", json!({ "w": w, "m": m, "polynomial": p }), text)
            } else {
                if *m > 0 && a.is_none() {
                    return Err(Error::InvalidInput("--a is required when m > 0 (or use --polynomial)".into()));
                }
                let a = parse::dual_vector(&l, a.as_deref())?;
                let value = invariants::eta(&l, &w, &a, *m, budget)?;
                Report::ok("eta", json!({ "w": w, "a": a, "m": m, "eta": value.to_string() }), value.to_string())
            }
        }
        Command::EInvariant { lattice } => {
            let l = parse::lattice_spec(lattice)?;
            let cert = invariants::e_invariant(&l, limits)?;
            cert.verify(&l, limits)?;
            let text = format!(
                "{}\nwitness class: {}\nwitness w: {}\n|w^2|: {}\nm: {}\nclasses: {}\nnodes: {}",
                cert.value,
                coords(&cert.witness_class),
                coords(&cert.witness_w),
                cert.witness_norm,
                cert.witness_m,
                cert.per_class_table.len(),
                cert.nodes_visited
            );
            Report::ok("e-invariant", to_json(&cert), text)
        }
        Command::HBound { which } => match which {
            HBoundCommand::Brieskorn { k } => {
                let r = hbounds::brieskorn_h(*k, limits)?;
                Report::ok("h-bound brieskorn", to_json(&r), bound_text(&r))
            }
            HBoundCommand::Certificate { lattice, w, m, a, g, bplus } => {
                let l = parse::lattice_spec(lattice)?;
                let w = parse::lattice_vector(&l, w.w.as_deref(), w.w_ambient.as_deref())?;
                let a = a.as_deref().map(|csv| parse::dual_vector(&l, Some(csv))).transpose()?;
                let input = HBoundInput {
                    genus: *g,
                    b_plus: *bplus,
                    lattice: l,
                    certificate: Some(EtaCertificate { w, m: *m, a }),
                };
                let r = hbounds::h_lower_from_certificate(&input, limits)?;
                Report::ok("h-bound certificate", to_json(&r), bound_text(&r))
            }
            HBoundCommand::Surgery { genus } => {
                let r = hbounds::surgery_upper(*genus);
                Report::ok("h-bound surgery", to_json(&r), bound_text(&r))
            }
        },
        Command::DetlineCheck { trials: n, max_dim, seed } => {
            let config = TrialConfig { trials: *n, max_dim: *max_dim, seed: *seed };
            let s = trials::run(&config)?;
            let text = format!(
                "{}\nsquare-sign: {} passed, {} failed ({} with sign -1)\ngamma-sign: {} passed, {} failed, per (eps1, eps2): {:?}\nexact3 independence: {} passed, {} failed",
                if s.all_passed() { "PASS" } else { "FAIL" },
                s.square_sign.passed,
                s.square_sign.failed,
                s.square_sign_odd,
                s.gamma_sign.passed,
                s.gamma_sign.failed,
                s.gamma_sign_by_parity,
                s.exact3_independence.passed,
                s.exact3_independence.failed
            );
            let exit = if s.all_passed() { 0 } else { 5 };
            Report { command: "detline-check", result: json!({ "trials": config, "summary": s }), text, exit }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not configure threads: {e}");
        }
    }
    let limits = Limits { budget: EnumBudget::new(cli.max_nodes), m_max: cli.m_max, rank_guard: cli.rank_guard };
    let config = json!({ "max_nodes": cli.max_nodes, "m_max": cli.m_max, "rank_guard": cli.rank_guard });
    let version = env!("CARGO_PKG_VERSION");
    match run(&cli, &limits) {
        Ok(report) => {
            match cli.format {
                Format::Json => {
                    let out = json!({
                        "command": report.command,
                        "version": version,
                        "config": config,
                        "result": report.result,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
                }
                Format::Text => println!("{}", report.text),
            }
            ExitCode::from(report.exit)
        }
        Err(e) => {
            let code = exit_code(&e);
            match cli.format {
                Format::Json => {
                    let out = json!({
                        "version": version,
                        "config": config,
                        "error": { "kind": error_kind(&e), "message": e.to_string(), "exit_code": code },
                    });
                    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
                }
                Format::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}
