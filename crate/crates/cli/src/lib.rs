//! Command-line front end. [`run_cli`] does all the work and returns the
//! exit code with the rendered output, so tests can drive it in-process.

use std::ffi::OsString;
use std::path::PathBuf;

use abelian_sb::classify::{self, SbRoute, StabilityClass};
use abelian_sb::finite_oracle::{self, FiniteAbelianGroup, IntMatrix, OracleError};
use abelian_sb::invariants;
use abelian_sb::padic::{CertificateParams, PAdicError};
use abelian_sb::witness_padic::{self, WitnessError};
use abelian_sb::witness_socle::{self, SocleBounds, SocleError};
use abelian_sb::{Cardinal, GroupSpec, Prime, SummandFamily};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

mod render;

pub const SCHEMA: &str = "sb-abelian/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Budget(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::PAdic(PAdicError::BudgetExceeded { .. }) | WitnessError::CertificateFailed { .. } => {
                CliError::Budget(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<SocleError> for CliError {
    fn from(e: SocleError) -> Self {
        match e {
            // Zero attempts means the window cannot meet the threshold at all.
            SocleError::SearchFailed { attempts: 0, .. } => CliError::Precondition(e.to_string()),
            SocleError::BudgetExceeded { .. } | SocleError::SearchFailed { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::OrderTooLarge { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Auto,
    Padic,
    Socle,
}

/// Search and output settings shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct CliConfig {
    /// p-adic working precision N
    #[arg(long, global = true, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
    pub precision: u32,
    /// Per-variable degree bound d for relation searches
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub degree: u32,
    /// Coefficient bound B for relation searches
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub height: u32,
    /// Number of primes W in the socle window
    #[arg(long, global = true, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: u64,
    /// Primes at which every bounded polynomial must be nonzero
    #[arg(long, global = true, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub threshold: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest group order the brute-force oracles will build
    #[arg(long, global = true, default_value_t = finite_oracle::DEFAULT_ORDER_BOUND,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub order_bound: u64,
    /// Samples per witness probe
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Largest m in the tower check
    #[arg(long, global = true, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub tower: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write the JSON report to this file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(name = "abelian-sb", version, about = "Classify theories of abelian groups and build bi-embeddable witness pairs")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stability class, SB property and the equivalent conditions
    Classify { spec: String },
    /// Szmielew, Ulm and divisible invariants
    Invariants { spec: String },
    /// Elementary equivalence
    Eq { a: String, b: String },
    /// Isomorphism of normal forms
    Iso { a: String, b: String },
    /// Build a bi-embeddable non-isomorphic pair with its certificates
    Witness {
        spec: String,
        #[arg(long, value_enum, default_value_t = Route::Auto)]
        route: Route,
    },
    /// Brute-force checks on finite groups
    #[command(subcommand)]
    Oracle(OracleCheck),
}

#[derive(Subcommand, Debug)]
enum OracleCheck {
    /// Smith normal form of an integer matrix such as "[[2,4],[6,8]]"
    Snf { matrix: String },
    /// Isomorphism of two finite specs by invariant factors
    Iso { a: String, b: String },
    /// Symbolic against brute-force Ulm invariants of a finite spec
    Ulm { spec: String },
    /// Purity of the subgroup generated by GENS in the group with FACTORS,
    /// e.g. `pure 4 2` or `pure 2,4 "1,0;0,2"`
    Pure { factors: String, gens: String },
}

pub fn run_cli<I, T>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let json = format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes"));
            if let Some(path) = &cli.config.out {
                if let Err(source) = std::fs::write(path, &json) {
                    return failure(CliError::Io {
                        path: path.clone(),
                        source,
                    });
                }
            }
            let stdout = match cli.config.format {
                Format::Json => json,
                Format::Text => render::text(&report),
            };
            CliOutcome {
                code: 0,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> CliOutcome {
    CliOutcome {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

fn parse_spec(text: &str) -> Result<GroupSpec, CliError> {
    GroupSpec::parse(text).map_err(|e| CliError::Parse(format!("cannot parse {text:?}: {e}")))
}

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA.into());
    m.insert("command".into(), command.into());
    m
}

fn to_value<T: serde::Serialize + ?Sized>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn execute(cli: &Cli) -> Result<Value, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Classify { spec } => classify_report(&parse_spec(spec)?),
        Command::Invariants { spec } => invariants_report(&parse_spec(spec)?),
        Command::Eq { a, b } => {
            let (sa, sb) = (parse_spec(a)?, parse_spec(b)?);
            let mut m = header("eq");
            m.insert("a".into(), sa.to_string().into());
            m.insert("b".into(), sb.to_string().into());
            m.insert("equivalent".into(), invariants::elem_equivalent(&sa, &sb).into());
            Ok(Value::Object(m))
        }
        Command::Iso { a, b } => {
            let (sa, sb) = (parse_spec(a)?, parse_spec(b)?);
            let mut m = header("iso");
            m.insert("a".into(), sa.to_string().into());
            m.insert("b".into(), sb.to_string().into());
            m.insert("isomorphic".into(), invariants::iso_standard(&sa, &sb).into());
            Ok(Value::Object(m))
        }
        Command::Witness { spec, route } => witness_report(&parse_spec(spec)?, *route, cfg),
        Command::Oracle(check) => oracle_report(check, cfg),
    }
}

fn classify_report(spec: &GroupSpec) -> Result<Value, CliError> {
    let c = classify::classify(spec);
    let mut m = header("classify");
    m.insert("input".into(), spec.to_string().into());
    if let Value::Object(fields) = to_value(&c) {
        m.extend(fields);
    }
    m.insert("has_sb".into(), c.sb.into());
    m.insert("agreement".into(), c.conditions_agree.into());
    Ok(Value::Object(m))
}

fn cardinal(c: Cardinal) -> Value {
    c.to_string().into()
}

fn invariants_report(spec: &GroupSpec) -> Result<Value, CliError> {
    let sz = invariants::sz_invariants(spec);
    let ulm = invariants::ulm_table(spec);
    let div = invariants::divisible_invariants(spec);
    let mut m = header("invariants");
    m.insert("input".into(), spec.to_string().into());
    m.insert(
        "szmielew".into(),
        json!({
            "alpha": sz.alpha.to_string(),
            "beta": sz.beta.to_string(),
            "gamma": sz.gamma.to_string(),
            "bounded": sz.bounded,
            "exponent": sz.exponent.map(|e| e.to_string()),
            "nontrivial": sz.nontrivial,
        }),
    );
    m.insert(
        "ulm".into(),
        json!({
            "entries": ulm.entries.iter().map(|e| json!({
                "p": e.p.get(),
                "i": e.i,
                "value": cardinal(e.value),
            })).collect::<Vec<_>>(),
            "families": ulm.families.iter()
                .map(|e| GroupSpec::normalize([e.clone()]).to_string())
                .collect::<Vec<_>>(),
        }),
    );
    m.insert(
        "divisible".into(),
        json!({
            "prufer": div.prufer_count.iter()
                .map(|(p, c)| (p.to_string(), cardinal(*c)))
                .collect::<Map<_, _>>(),
            "rational_rank": cardinal(div.rational_rank),
        }),
    );
    Ok(Value::Object(m))
}

fn witness_report(spec: &GroupSpec, route: Route, cfg: &CliConfig) -> Result<Value, CliError> {
    let verdict = classify::has_sb(spec);
    match classify::stability_class(spec) {
        StabilityClass::OmegaStable => {
            return Err(CliError::Precondition(format!(
                "{spec} is omega-stable and has the SB property, so no bi-embeddable \
                 non-isomorphic pair exists"
            )))
        }
        StabilityClass::NotSuperstable => {
            return Err(CliError::Precondition(format!(
                "{spec} is not superstable; failure of SB follows from the general \
                 non-superstable case and no explicit pair is built ({})",
                verdict.reason
            )))
        }
        StabilityClass::SuperstableNotOmegaStable => {}
    }
    let chosen = match (route, verdict.route) {
        (Route::Padic, _) | (Route::Auto, SbRoute::PAdicWitness) => SbRoute::PAdicWitness,
        (Route::Socle, _) | (Route::Auto, SbRoute::SocleWitness) => SbRoute::SocleWitness,
        (Route::Auto, other) => {
            return Err(CliError::Precondition(format!("no witness route for {spec} (route {other:?})")))
        }
    };
    let samples = usize::try_from(cfg.samples).unwrap_or(usize::MAX);
    let mut m = header("witness");
    m.insert("input".into(), spec.to_string().into());
    m.insert("route".into(), to_value(&chosen));
    m.insert("seed".into(), cfg.seed.into());
    if chosen == SbRoute::PAdicWitness {
        let params = CertificateParams::new(cfg.degree, cfg.height, cfg.precision);
        let w = witness_padic::assemble_mixed(spec, cfg.seed, params)?;
        let mut probes = Vec::new();
        for c in &w.padic_sum.components {
            probes.push(witness_padic::probe_padic_witness(&c.descriptor, samples, cfg.seed, cfg.tower)?);
        }
        let all_hold = probes.iter().all(|r| r.all_hold());
        m.insert("witness".into(), to_value(&w));
        m.insert("probes".into(), to_value(&probes));
        m.insert("all_hold".into(), all_hold.into());
    } else {
        let bounds = SocleBounds {
            degree: cfg.degree,
            height: cfg.height,
            threshold: usize::try_from(cfg.threshold).unwrap_or(usize::MAX),
        };
        let window = usize::try_from(cfg.window).unwrap_or(usize::MAX);
        let t = witness_socle::reduce_unbounded(spec, cfg.seed, bounds, window)?;
        let probes = witness_socle::probe_socle_witness(&t.witness, samples, cfg.seed, cfg.tower)?;
        m.insert("all_hold".into(), probes.all_hold().into());
        m.insert("transcript".into(), to_value(&t));
        m.insert("probes".into(), to_value(&probes));
    }
    Ok(Value::Object(m))
}

fn realize(spec: &GroupSpec, cfg: &CliConfig) -> Result<FiniteAbelianGroup, CliError> {
    if !spec.is_finite() {
        return Err(CliError::Precondition(format!("{spec} is not a finite group")));
    }
    Ok(FiniteAbelianGroup::realize(spec, cfg.order_bound)?)
}

fn parse_list(text: &str, what: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Parse(format!("bad {what} {:?} in {text:?}", s.trim())))
        })
        .collect()
}

fn matrix_rows(m: &IntMatrix) -> Value {
    (0..m.rows)
        .map(|i| {
            (0..m.cols)
                .map(|j| Value::from(m.entries[i * m.cols + j].to_string()))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into()
}

fn oracle_report(check: &OracleCheck, cfg: &CliConfig) -> Result<Value, CliError> {
    match check {
        OracleCheck::Snf { matrix } => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(matrix)
                .map_err(|e| CliError::Parse(format!("cannot parse matrix {matrix:?}: {e}")))?;
            let a = IntMatrix::from_rows(&rows)
                .ok_or_else(|| CliError::Parse(format!("matrix {matrix:?} is empty or ragged")))?;
            let s = finite_oracle::smith_normal_form(&a)?;
            let mut m = header("oracle snf");
            m.insert(
                "invariant_factors".into(),
                s.invariant_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>().into(),
            );
            m.insert("free_rank".into(), s.free_rank.into());
            m.insert("u".into(), matrix_rows(&s.u));
            m.insert("v".into(), matrix_rows(&s.v));
            m.insert("d".into(), matrix_rows(&s.d));
            m.insert("verified".into(), (s.u.mul(&a).mul(&s.v) == s.d).into());
            Ok(Value::Object(m))
        }
        OracleCheck::Iso { a, b } => {
            let (sa, sb) = (parse_spec(a)?, parse_spec(b)?);
            let (ga, gb) = (realize(&sa, cfg)?, realize(&sb, cfg)?);
            let brute = finite_oracle::iso_finite_bruteforce(&ga, &gb);
            let symbolic = invariants::elem_equivalent(&sa, &sb);
            let mut m = header("oracle iso");
            m.insert("a".into(), sa.to_string().into());
            m.insert("b".into(), sb.to_string().into());
            m.insert("isomorphic".into(), brute.into());
            m.insert("equivalent".into(), symbolic.into());
            m.insert("agree".into(), (brute == symbolic).into());
            Ok(Value::Object(m))
        }
        OracleCheck::Ulm { spec } => {
            let s = parse_spec(spec)?;
            realize(&s, cfg)?;
            let mut rows = Vec::new();
            let mut agree = true;
            let primes: std::collections::BTreeSet<(Prime, u32)> = s
                .entries()
                .iter()
                .filter_map(|e| match e.family {
                    SummandFamily::Cyclic { p, k } => Some((p, k)),
                    _ => None,
                })
                .collect();
            let mut seen = std::collections::BTreeMap::new();
            for (p, k) in primes {
                let top = seen.entry(p).or_insert(0);
                *top = (*top).max(k);
            }
            for (p, top) in seen {
                let part = s.filter(|f| matches!(f, SummandFamily::Cyclic { p: q, .. } if *q == p));
                let g = realize(&part, cfg)?;
                for i in 0..=top {
                    let brute = finite_oracle::ulm_bruteforce(&g, p, i)?;
                    let symbolic = invariants::ulm_symbolic(&s, p, i);
                    let ok = symbolic == Cardinal::Finite(brute);
                    agree &= ok;
                    rows.push(json!({
                        "p": p.get(),
                        "i": i,
                        "symbolic": cardinal(symbolic),
                        "bruteforce": brute,
                        "agree": ok,
                    }));
                }
            }
            let mut m = header("oracle ulm");
            m.insert("input".into(), s.to_string().into());
            m.insert("rows".into(), rows.into());
            m.insert("agree".into(), agree.into());
            Ok(Value::Object(m))
        }
        OracleCheck::Pure { factors, gens } => {
            let factors = parse_list(factors, "factor")?;
            let g = FiniteAbelianGroup::with_bound(factors.clone(), cfg.order_bound)?;
            let mut elems = Vec::new();
            for part in gens.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let coords = parse_list(part, "coordinate")?;
                if coords.len() != factors.len() {
                    return Err(CliError::Parse(format!(
                        "generator {part:?} has {} coordinates, the group has {}",
                        coords.len(),
                        factors.len()
                    )));
                }
                elems.push(g.encode(&coords)?);
            }
            let h = g.closure(&elems);
            let mut m = header("oracle pure");
            m.insert("factors".into(), factors.into());
            m.insert("generators".into(), gens.as_str().into());
            m.insert("subgroup_order".into(), h.len().into());
            m.insert("subgroup".into(), h.to_spec(&g).to_string().into());
            m.insert("pure".into(), finite_oracle::is_pure_subgroup_bruteforce(&g, &elems).into());
            Ok(Value::Object(m))
        }
    }
}
