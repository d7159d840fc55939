use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use haar_core::classify::{
    classify_group, every_haar_is_cayley, reproduce_tables_range, ClassifyOptions, Verdict,
};
use haar_core::construct::{construct_hgr, verify_certificate, ConstructOptions, HgrCertificate};
use haar_core::group::catalog::{find_entry, load_group_file, lookup};
use haar_core::{
    aut, aut0, build_haar, count_ideals, haar_to_poset, lattice_bound_check,
    poset_representation_report, ConnectionSet, Error, FiniteGroup, PermGroupDescriptor,
    SearchConfig,
};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_NO: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Largest order `cayley-check` runs without `--large`.
const CAYLEY_DEFAULT_MAX: usize = 12;

#[derive(Parser)]
#[command(
    name = "haar",
    version,
    about = "Haar graphical representations of finite groups"
)]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Search-tree node budget per automorphism search.
    #[arg(long, global = true, env = "HAAR_BUDGET")]
    budget: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GroupSource {
    /// Catalog name or presentation name such as `D16` or `Q8xC2`.
    group: Option<String>,
    /// JSON group file.
    #[arg(long)]
    group_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Group facts.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Haar graphs from an explicit connection set.
    #[command(subcommand)]
    Haar(HaarCmd),
    /// Build a certificate with the construction driver.
    Construct {
        #[command(flatten)]
        source: GroupSource,
    },
    /// Exhaustive classification of one group, or of a range of catalog orders.
    Classify {
        group: Option<String>,
        /// Inclusive range `a..b`.
        #[arg(long, conflicts_with = "group")]
        orders: Option<String>,
        #[arg(long)]
        group_file: Option<PathBuf>,
        /// Also decide whether every Haar graph is a Cayley graph.
        #[arg(long)]
        cayley: bool,
    },
    /// Compare every catalog group up to the given order with the exception tables.
    Tables {
        #[arg(long)]
        max_order: usize,
    },
    /// Decide whether every Haar graph over a nonabelian group is a Cayley graph.
    CayleyCheck {
        #[command(flatten)]
        source: GroupSource,
        /// Allow orders above 12; these may end undecided.
        #[arg(long)]
        large: bool,
    },
    /// Poset of a certificate's Haar graph and its automorphisms.
    Poset { certificate: PathBuf },
    /// Ideal count and lattice bound for a certificate's connection set.
    Ideals { certificate: PathBuf },
    /// Recompute automorphism orders of a certificate.
    Verify {
        certificate: PathBuf,
        /// Group file when the certificate names a group outside the catalog.
        #[arg(long)]
        group_file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    Show {
        #[command(flatten)]
        source: GroupSource,
    },
}

#[derive(Args)]
struct HaarArgs {
    #[command(flatten)]
    source: GroupSource,
    /// Comma-separated element indices or labels.
    #[arg(long)]
    set: String,
}

#[derive(Subcommand)]
enum HaarCmd {
    /// Print the graph as JSON or DOT.
    Build(HaarArgs),
    /// Automorphism orders and generators.
    Aut(HaarArgs),
}

#[derive(Serialize)]
struct AutReport {
    group: String,
    connection_set: Vec<usize>,
    connected: bool,
    is_hgr: bool,
    #[serde(with = "haar_core::bignum")]
    aut_order: BigUint,
    #[serde(with = "haar_core::bignum")]
    aut0_order: BigUint,
    /// Generators as image lists on the `2n` vertices.
    aut_generators: Vec<Vec<u32>>,
    aut0_generators: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct IdealsReport {
    group: String,
    #[serde(with = "haar_core::bignum")]
    ideal_count: BigUint,
    /// Ideal count and bound for the poset of the complement set.
    complement_lattice: Value,
}

/// What a command produced and how it should exit.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }

    fn json(v: &impl Serialize) -> Self {
        Output::ok(pretty(v))
    }
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Yes => 0,
        Verdict::No => EXIT_NO,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn load_group(source: &GroupSource) -> Result<FiniteGroup, Error> {
    match (&source.group, &source.group_file) {
        (Some(name), None) => lookup(name),
        (None, Some(path)) => load_group_file(path),
        _ => unreachable!("clap enforces exactly one source"),
    }
}

fn parse_set(g: &FiniteGroup, text: &str) -> Result<ConnectionSet, Error> {
    let elems = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .ok()
                .or_else(|| g.elements().find(|&a| g.label(a) == t))
                .ok_or_else(|| Error::Refused(format!("`{t}` is neither an index nor a label")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ConnectionSet::new(g, elems)
}

fn read_certificate(path: &Path) -> Result<HgrCertificate, Error> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn certificate_group(cert: &HgrCertificate, file: Option<&Path>) -> Result<FiniteGroup, Error> {
    let g = match file {
        Some(path) => load_group_file(path)?,
        None => lookup(&cert.group)?,
    };
    if g.order() != cert.order {
        return Err(Error::MismatchedGroup {
            expected: cert.order,
            found: g.order(),
        });
    }
    Ok(g)
}

fn parse_range(text: &str) -> Option<(usize, usize)> {
    let (a, b) = text.split_once("..")?;
    let (a, b) = (
        a.trim().parse().ok()?,
        b.trim().trim_start_matches('=').parse().ok()?,
    );
    (a <= b).then_some((a, b))
}

fn group_show(g: &FiniteGroup) -> Value {
    let st = g.structure();
    let tables: Vec<u8> = find_entry(g.name())
        .map(|e| {
            use haar_core::group::catalog::Table;
            [Table::NoHgr, Table::NoRigid, Table::ThreeOrbitPoset]
                .into_iter()
                .filter(|&t| e.in_table(t))
                .map(|t| t as u8)
                .collect()
        })
        .unwrap_or_default();
    json!({
        "name": g.name(),
        "order": g.order(),
        "abelian": st.is_abelian,
        "cyclic": g.is_cyclic(),
        "center_order": st.center.order(),
        "derived_order": st.derived.order(),
        "exception_tables": tables,
        "elements": g.elements().map(|a| json!({
            "index": a,
            "label": g.label(a),
            "order": g.element_order(a),
            "inverse": g.inv(a),
        })).collect::<Vec<_>>(),
    })
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let search = cli
        .budget
        .map(SearchConfig::with_budget)
        .unwrap_or_default();
    let format = cli.format;
    match &cli.command {
        Command::Group(GroupCmd::Show { source }) => {
            Ok(Output::json(&group_show(&load_group(source)?)))
        }
        Command::Haar(HaarCmd::Build(args)) => {
            let g = load_group(&args.source)?;
            let h = build_haar(&g, &parse_set(&g, &args.set)?)?;
            Ok(match format {
                Some(Format::Dot) => Output::ok(h.to_dot()),
                _ => Output::json(&h.to_json()),
            })
        }
        Command::Haar(HaarCmd::Aut(args)) => {
            let g = load_group(&args.source)?;
            let s = parse_set(&g, &args.set)?;
            let h = build_haar(&g, &s)?;
            let (a, a0) = (aut(&h, &search)?, aut0(&h, &search)?);
            let gens = |p: &PermGroupDescriptor| -> Vec<Vec<u32>> {
                p.generators().iter().map(|x| x.images().to_vec()).collect()
            };
            Ok(Output::json(&AutReport {
                group: g.name().to_string(),
                connection_set: s.elements(),
                connected: h.is_connected(),
                is_hgr: a.order() == &BigUint::from(g.order()),
                aut_order: a.order().clone(),
                aut0_order: a0.order().clone(),
                aut_generators: gens(&a),
                aut0_generators: gens(&a0),
            }))
        }
        Command::Construct { source } => {
            let g = load_group(source)?;
            let opts = ConstructOptions {
                search,
                seed: cli.seed,
                ..ConstructOptions::default()
            };
            Ok(Output::json(&construct_hgr(&g, &opts)?))
        }
        Command::Classify {
            group,
            orders,
            group_file,
            cayley,
        } => {
            let opts = ClassifyOptions {
                search,
                cayley: *cayley,
                ..ClassifyOptions::default()
            };
            if let Some(text) = orders {
                let (lo, hi) = parse_range(text)
                    .ok_or_else(|| Error::Refused(format!("`{text}` is not a range a..b")))?;
                return tables(lo, hi, &opts, format);
            }
            let source = GroupSource {
                group: group.clone(),
                group_file: group_file.clone(),
            };
            if source.group.is_some() == source.group_file.is_some() {
                return Err(Error::Refused(
                    "give exactly one of a group, --group-file or --orders".into(),
                ));
            }
            let g = load_group(&source)?;
            let opts = ClassifyOptions {
                max_order: opts.max_order.max(g.order()),
                ..opts
            };
            let r = classify_group(&g, &opts)?;
            let code = if r.undecided.is_empty() {
                verdict_code(r.admits_hgr)
            } else {
                EXIT_UNKNOWN
            };
            Ok(Output {
                text: pretty(&r),
                code,
            })
        }
        Command::Tables { max_order } => {
            let opts = ClassifyOptions {
                search,
                ..ClassifyOptions::default()
            };
            tables(3, *max_order, &opts, format)
        }
        Command::CayleyCheck { source, large } => {
            let g = load_group(source)?;
            if g.order() > CAYLEY_DEFAULT_MAX && !large {
                return Err(Error::Refused(format!(
                    "order {} is above {CAYLEY_DEFAULT_MAX}; pass --large to run it anyway",
                    g.order()
                )));
            }
            let r = every_haar_is_cayley(&g, &search)?;
            let summary = match r.verdict {
                Verdict::Yes => "all Haar graphs Cayley",
                Verdict::No => "some Haar graph is not Cayley",
                Verdict::Unknown => "undecided within the search budget",
            };
            let mut v = serde_json::to_value(&r).expect("serialisable");
            v["summary"] = summary.into();
            v["decided_fraction"] = r.decided_fraction().into();
            Ok(Output {
                text: pretty(&v),
                code: verdict_code(r.verdict),
            })
        }
        Command::Poset { certificate } => {
            let cert = read_certificate(certificate)?;
            let g = certificate_group(&cert, None)?;
            let p = haar_to_poset(&build_haar(&g, &cert.connection(&g)?)?);
            if format == Some(Format::Dot) {
                return Ok(Output::ok(p.to_dot()));
            }
            let report = match poset_representation_report(&p, &search) {
                Ok(r) => serde_json::to_value(r).expect("serialisable"),
                Err(Error::Refused(why)) => json!({ "refused": why }),
                Err(e) => return Err(e),
            };
            Ok(Output::json(
                &json!({ "group": g.name(), "poset": p.to_json(), "report": report }),
            ))
        }
        Command::Ideals { certificate } => {
            let cert = read_certificate(certificate)?;
            let g = certificate_group(&cert, None)?;
            let s = cert.connection(&g)?;
            let p = haar_to_poset(&build_haar(&g, &s)?);
            let bound = match lattice_bound_check(&g, &s) {
                Ok(b) => serde_json::to_value(b).expect("serialisable"),
                Err(Error::CapExceeded(why)) => json!({ "skipped": why }),
                Err(e) => return Err(e),
            };
            Ok(Output::json(&IdealsReport {
                group: g.name().to_string(),
                ideal_count: count_ideals(&p)?,
                complement_lattice: bound,
            }))
        }
        Command::Verify {
            certificate,
            group_file,
        } => {
            let cert = read_certificate(certificate)?;
            let g = certificate_group(&cert, group_file.as_deref())?;
            let check = verify_certificate(&g, &cert, &search)?;
            let code = if check.valid { 0 } else { EXIT_NO };
            Ok(Output {
                text: pretty(&check),
                code,
            })
        }
    }
}

fn tables(
    lo: usize,
    hi: usize,
    opts: &ClassifyOptions,
    format: Option<Format>,
) -> Result<Output, Error> {
    let report = reproduce_tables_range(lo, hi, opts)?;
    let code = if report
        .rows
        .iter()
        .any(|r| r.admits_hgr == Verdict::Unknown || r.admits_rigid == Verdict::Unknown)
    {
        EXIT_UNKNOWN
    } else if report.all_pass() {
        0
    } else {
        EXIT_NO
    };
    let text = match format {
        Some(Format::Json) => pretty(&report),
        _ => report.to_csv(),
    };
    Ok(Output { text, code })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(k) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() {
                EXIT_UNKNOWN
            } else {
                EXIT_USAGE
            })
        }
    }
}
