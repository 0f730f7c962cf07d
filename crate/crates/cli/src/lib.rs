//! `lensfill` command-line driver.
//!
//! Exit status: 0 on success, 1 on a domain error (the library error name is
//! printed on stderr), 2 on a usage error.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use lensfill_core::classify::{classify, ClassificationReport, FillingCase};
use lensfill_core::filling::{filling_invariants, FillingInvariants};
use lensfill_core::json::rational_string;
use lensfill_core::legendrian::{
    cf_expand, cf_value, d3, d3_of_chain, enumerate_structures, ChainSurgery, ContinuedFraction,
    D3Input,
};
use lensfill_core::openbook::{
    canonical_hopf_factorization, lantern_substitute, lantern_unsubstitute, multiplicity_profile,
    Curve, Factorization, FactorizationDocument, MultiplicityProfile, PlanarPage,
};
use lensfill_core::search::{enumerate_configs, ConfigQuery, ConfigResult, Symmetry};
use lensfill_core::IntMatrix;

#[derive(Debug, Parser)]
#[command(name = "lensfill", version, about = "Contact and Stein filling invariants of lens spaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Negative continued fraction of p/q.
    Cf { p: i64, q: i64 },
    /// Value p/q of a continued fraction a1,...,an.
    Cfval { terms: String },
    /// Tight structures presented by the chain a1,...,an.
    Structures { terms: String },
    /// d3 invariant of a surgery chain or of explicit handle data.
    D3 {
        /// Framing parameters a1,...,an.
        #[arg(long, requires = "stabs", conflicts_with_all = ["matrix", "rot", "chi", "sigma"])]
        chain: Option<String>,
        /// Stabilizations splus:sminus per component.
        #[arg(long)]
        stabs: Option<String>,
        /// Intersection matrix, rows separated by ';' (e.g. "-3,1;1,-4").
        #[arg(long, allow_hyphen_values = true, requires_all = ["rot", "chi", "sigma"])]
        matrix: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rot: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<i64>,
    },
    /// Canonical factorization document of the Hopf-link monodromy.
    Monodromy { a1: i64, a2: i64 },
    /// Multiplicity profile of a factorization file ('-' for stdin).
    Profile { file: PathBuf },
    /// Lantern substitution on a factorization file.
    Lantern {
        file: PathBuf,
        /// Inner classes S1;S2;S3, labels comma-separated.
        #[arg(long, conflicts_with = "pairs", required_unless_present = "pairs")]
        inner: Option<String>,
        /// Inverse direction: the pairwise unions S1∪S2;S1∪S3;S2∪S3.
        #[arg(long)]
        pairs: Option<String>,
    },
    /// Invariants of the filling carried by a factorization file.
    Filling { file: PathBuf },
    /// Homology configurations realizing the canonical profile of (a1, a2).
    Configs {
        a1: i64,
        a2: i64,
        /// List every labeled configuration instead of one per symmetry class.
        #[arg(long)]
        raw: bool,
    },
    /// Filling classification of a two-component chain.
    Classify {
        #[arg(long)]
        chain: String,
        #[arg(long)]
        stabs: String,
    },
}

/// Domain failure: a library error name plus message.
#[derive(Debug)]
pub struct Failure {
    pub name: &'static str,
    pub message: String,
}

macro_rules! impl_from_domain {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure { name: e.name(), message: e.to_string() }
            }
        }
    )*};
}

impl_from_domain!(
    lensfill_core::legendrian::LegendrianError,
    lensfill_core::openbook::OpenBookError,
    lensfill_core::search::SearchError,
    lensfill_core::classify::ClassifyError,
    lensfill_core::numeric::NumericError
);

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        name: "InvalidInput",
        message: message.into(),
    }
}

/// Parses `argv` and runs the command, writing to the given streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let stream: &mut dyn Write = if code == 0 { out } else { err };
            let _ = stream.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}: {}", f.name, f.message);
            1
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn execute(cli: &Cli) -> Result<String, Failure> {
    let fmt = cli.format;
    match &cli.command {
        Command::Cf { p, q } => {
            let cf = cf_expand(*p, *q)?;
            Ok(match fmt {
                Format::Human => format!("{cf}\n"),
                Format::Json => json(&CfDoc { p: *p, q: *q, cf: cf.terms().to_vec() }),
            })
        }
        Command::Cfval { terms } => {
            let cf = ContinuedFraction::new(parse_list(terms)?)?;
            let (p, q) = cf_value(&cf);
            Ok(match fmt {
                Format::Human => format!("({p},{q})\n"),
                Format::Json => json(&CfDoc { p, q, cf: cf.terms().to_vec() }),
            })
        }
        Command::Structures { terms } => {
            let cf = ContinuedFraction::new(parse_list(terms)?)?;
            Ok(render_structures(&cf, fmt))
        }
        Command::D3 { chain, stabs, matrix, rot, chi, sigma } => {
            let value = match (chain, matrix) {
                (Some(chain), None) => {
                    let stabs = stabs.as_deref().ok_or_else(|| invalid("--stabs is required"))?;
                    d3_of_chain(&parse_chain(chain, stabs)?)
                }
                (None, Some(matrix)) => {
                    let input = D3Input {
                        q: parse_matrix(matrix)?,
                        rot: parse_list(rot.as_deref().unwrap_or(""))?
                            .into_iter()
                            .map(BigInt::from)
                            .collect(),
                        chi: chi.ok_or_else(|| invalid("--chi is required"))?,
                        sigma: sigma.ok_or_else(|| invalid("--sigma is required"))?,
                    };
                    d3(&input)?
                }
                _ => return Err(invalid("give either --chain/--stabs or --matrix/--rot/--chi/--sigma")),
            };
            let s = rational_string(&value);
            Ok(match fmt {
                Format::Human => format!("{s}\n"),
                Format::Json => json(&D3Doc { d3: s }),
            })
        }
        Command::Monodromy { a1, a2 } => Ok(canonical_hopf_factorization(*a1, *a2)?.to_json()),
        Command::Profile { file } => {
            let f = read_factorization(file)?;
            let p = multiplicity_profile(&f);
            Ok(match fmt {
                Format::Human => render_profile(&p),
                Format::Json => json(&p.to_document()),
            })
        }
        Command::Lantern { file, inner, pairs } => {
            let f = read_factorization(file)?;
            let g = match (inner, pairs) {
                (Some(inner), _) => lantern_substitute(&f, parse_triple(f.page(), inner)?)?,
                (None, Some(pairs)) => lantern_unsubstitute(&f, parse_triple(f.page(), pairs)?)?,
                (None, None) => return Err(invalid("--inner or --pairs is required")),
            };
            Ok(g.to_json())
        }
        Command::Filling { file } => {
            let f = read_factorization(file)?;
            let inv = filling_invariants(&f);
            Ok(match fmt {
                Format::Human => render_filling(&inv),
                Format::Json => json(&inv.to_report()),
            })
        }
        Command::Configs { a1, a2, raw } => {
            let f = canonical_hopf_factorization(*a1, *a2)?;
            let symmetry = if *raw { Symmetry::Raw } else { Symmetry::UpToProfileSymmetry };
            let r = enumerate_configs(&ConfigQuery::for_factorization(&f, symmetry))?;
            Ok(match fmt {
                Format::Human => render_configs(&r),
                Format::Json => json(&ConfigsDoc {
                    count_raw: r.count_raw,
                    count_up_to_symmetry: r.count_up_to_symmetry,
                    configurations: r.configurations.iter().map(Factorization::to_document).collect(),
                }),
            })
        }
        Command::Classify { chain, stabs } => {
            let report = classify(&parse_chain(chain, stabs)?)?;
            Ok(match fmt {
                Format::Human => render_report(&report),
                Format::Json => json(&report.to_document()),
            })
        }
    }
}

#[derive(Serialize)]
struct CfDoc {
    p: i64,
    q: i64,
    cf: Vec<i64>,
}

#[derive(Serialize)]
struct D3Doc {
    d3: String,
}

#[derive(Serialize)]
struct ConfigsDoc {
    count_raw: usize,
    count_up_to_symmetry: usize,
    configurations: Vec<FactorizationDocument>,
}

#[derive(Serialize)]
struct StructuresDoc {
    cf: Vec<i64>,
    lens: [i64; 2],
    structures: Vec<StructureDoc>,
    contactomorphism_classes: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct StructureDoc {
    stabs: Vec<[u32; 2]>,
    rot: Vec<i64>,
    structure: lensfill_core::legendrian::ContactClass,
    d3: String,
}

pub fn parse_list(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| invalid(format!("not an integer: {t:?}"))))
        .collect()
}

pub fn parse_stabs(s: &str) -> Result<Vec<(u32, u32)>, Failure> {
    s.split(',')
        .map(|pair| {
            let (a, b) = pair
                .trim()
                .split_once(':')
                .ok_or_else(|| invalid(format!("expected splus:sminus, got {pair:?}")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| invalid(format!("not a stabilization count: {t:?}")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

pub fn parse_chain(chain: &str, stabs: &str) -> Result<ChainSurgery, Failure> {
    Ok(ChainSurgery::from_parts(&parse_list(chain)?, &parse_stabs(stabs)?)?)
}

pub fn parse_matrix(s: &str) -> Result<IntMatrix, Failure> {
    let rows = s
        .split(';')
        .map(|r| parse_list(r).map(|v| v.into_iter().map(BigInt::from).collect()))
        .collect::<Result<Vec<Vec<BigInt>>, _>>()?;
    Ok(IntMatrix::from_rows(rows)?)
}

fn parse_triple(page: &PlanarPage, s: &str) -> Result<[Curve; 3], Failure> {
    let curves = s
        .split(';')
        .map(|part| {
            let labels: Vec<&str> = part.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
            page.curve(&labels)
        })
        .collect::<Result<Vec<_>, _>>()?;
    curves
        .try_into()
        .map_err(|v: Vec<Curve>| invalid(format!("expected three classes, got {}", v.len())))
}

fn read_factorization(path: &Path) -> Result<Factorization, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure {
        name: "Io",
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(Factorization::from_json(&text)?)
}

fn render_structures(cf: &ContinuedFraction, fmt: Format) -> String {
    let e = enumerate_structures(cf);
    let (p, q) = cf_value(cf);
    let d3s: Vec<String> = e
        .entries
        .iter()
        .map(|s| {
            let chain = ChainSurgery::from_parts(cf.terms(), &s.stabs).expect("enumerated chain");
            rational_string(&d3_of_chain(&chain))
        })
        .collect();
    if fmt == Format::Json {
        return json(&StructuresDoc {
            cf: cf.terms().to_vec(),
            lens: [p, q],
            structures: e
                .entries
                .iter()
                .zip(&d3s)
                .map(|(s, d)| StructureDoc {
                    stabs: s.stabs.iter().map(|&(a, b)| [a, b]).collect(),
                    rot: s.rot.clone(),
                    structure: s.class,
                    d3: d.clone(),
                })
                .collect(),
            contactomorphism_classes: e.contactomorphism_classes,
        });
    }
    let mut s = String::new();
    let _ = writeln!(s, "L({p},{q}) = {cf}");
    let _ = writeln!(s, "{} isotopy classes, {} up to contactomorphism", e.entries.len(), e.contactomorphism_classes.len());
    let _ = writeln!(s, "{:<4} {:<16} {:<12} {:<22} d3", "#", "stabs", "rot", "structure");
    for (i, (entry, d)) in e.entries.iter().zip(&d3s).enumerate() {
        let stabs: Vec<String> = entry.stabs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        let rot: Vec<String> = entry.rot.iter().map(i64::to_string).collect();
        let _ = writeln!(s, "{:<4} {:<16} {:<12} {:<22} {d}", i, stabs.join(","), rot.join(","), entry.class.to_string());
    }
    for (k, orbit) in e.contactomorphism_classes.iter().enumerate() {
        let members: Vec<String> = orbit.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "class {k}: {}", members.join(","));
    }
    s
}

fn render_profile(p: &MultiplicityProfile) -> String {
    let mut s = String::new();
    for (i, h) in p.holes().iter().enumerate() {
        let _ = writeln!(s, "m({h}) = {}", p.single(i));
    }
    for i in 0..p.holes().len() {
        for j in i + 1..p.holes().len() {
            let _ = writeln!(s, "m({},{}) = {}", p.holes()[i], p.holes()[j], p.joint(i, j));
        }
    }
    s
}

fn render_filling(inv: &FillingInvariants) -> String {
    let h1 = if inv.h1_is_trivial() {
        "0".to_string()
    } else {
        inv.h1_factors
            .iter()
            .map(|d| if d == &BigInt::from(0) { "Z".to_string() } else { format!("Z/{d}") })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let mut s = String::new();
    let _ = writeln!(s, "b2       {}", inv.b2);
    let _ = writeln!(s, "chi      {}", inv.chi);
    let _ = writeln!(s, "sigma    {}", inv.sigma);
    let _ = writeln!(s, "H1       {h1}");
    let _ = writeln!(s, "Q        {}", inv.q);
    let _ = writeln!(s, "|det Q|  {}", inv.det_abs);
    let _ = writeln!(s, "parity   {}", if inv.is_even() { "even" } else { "odd" });
    s
}

fn render_configs(r: &ConfigResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "raw {}", r.count_raw);
    let _ = writeln!(s, "up-to-symmetry {}", r.count_up_to_symmetry);
    for (i, f) in r.configurations.iter().enumerate() {
        let _ = writeln!(s, "[{i}] {} curves: {f}", f.curve_count());
    }
    s
}

fn render_report(r: &ClassificationReport) -> String {
    let stabs: Vec<String> = r.stabs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
    let rot: Vec<String> = r.rot.iter().map(i64::to_string).collect();
    let mut s = String::new();
    let _ = writeln!(s, "lens       L({},{})", r.lens.0, r.lens.1);
    let _ = writeln!(s, "cf         {}", r.cf);
    let _ = writeln!(s, "stabs      {}", stabs.join(","));
    let _ = writeln!(s, "rot        {}", rot.join(","));
    let _ = writeln!(s, "structure  {}", r.structure);
    let _ = writeln!(s, "case       {}", r.case);
    let _ = writeln!(s, "d3         {}", rational_string(&r.d3));
    if r.case == FillingCase::UniversallyTightOutOfScope {
        let _ = writeln!(s, "fillings   out of scope");
    } else {
        for c in &r.filling_classes {
            let _ = writeln!(s, "filling    b2={} {}", c.b2, c.status);
        }
    }
    s
}
