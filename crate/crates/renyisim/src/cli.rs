//! Argument grammar and dispatch for the `renyisim` binary.
//!
//! Orders and other sweepable quantities are taken as raw tokens so that `sweep` can
//! replace one of them with a grid. Inputs are always in nats; `--units bits` rescales
//! entropy-valued outputs only.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use renyisim_core::asymptotics::{self, Direction, RateQuery};
use renyisim_core::codes::{self, Truncation};
use renyisim_core::measures::{max_renyi, sum_renyi};
use renyisim_core::spectrum::{self, Side};
use renyisim_core::{guessing, renyi_divergence, renyi_entropy, set_guard_limit, Order, Pmf, SimCode};

use crate::io::{read_code, read_pmf, write_json};
use crate::oracle::{self, OracleReport};
use crate::sweep::{self, Format, Row};
use crate::CliError;

type Res<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "renyisim", version, about = "Rényi-divergence simulation rates, codes and oracles")]
pub struct Cli {
    /// Units for entropy-valued outputs.
    #[arg(long, global = true, value_enum, default_value_t = Units::Nats)]
    pub units: Units,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Nats,
    Bits,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rényi entropy of a pmf.
    Entropy(EntropyArgs),
    /// Rényi divergence between two pmfs.
    Divergence(DivergenceArgs),
    /// Limit of the normalized divergence at rate R = n/k.
    Asym(AsymArgs),
    /// Conversion rate.
    Rate(RateArgs),
    /// Resolvability, or the normalized divergence at a given uniform-source rate.
    Resolvability(ResolvabilityArgs),
    /// Intrinsic randomness, or the normalized divergence at a given extraction rate.
    Intrinsic(IntrinsicArgs),
    /// Information-spectrum exponent or its inverse.
    Spectrum(SpectrumArgs),
    /// Dominance of scaled spectrum exponents against the entropy-ratio thresholds.
    CompareExponents(CompareArgs),
    /// Build a simulation code and write it as JSON.
    Construct(ConstructArgs),
    /// Divergence of a stored code.
    Evaluate(EvaluateArgs),
    /// Guessing exponent, or bounds for a given key distribution.
    Guessing(GuessingArgs),
    /// Compare the library against the brute-force references on one instance.
    Oracle(OracleArgs),
    /// Evaluate a command over a grid of one argument.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub p: PathBuf,
    /// Order: decimal, `0`, `1`, `inf` or `-inf`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DivDir {
    Pq,
    Qp,
    Max,
    Sum,
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, value_enum, default_value_t = DivDir::Pq)]
    pub dir: DivDir,
}

#[derive(Debug, Args)]
pub struct AsymArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
    /// R = n/k.
    #[arg(long)]
    pub rate: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value = "pq")]
    pub dir: Direction,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value = "pq")]
    pub dir: Direction,
}

#[derive(Debug, Args)]
pub struct ResolvabilityArgs {
    #[arg(long)]
    pub q: PathBuf,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value = "pq")]
    pub dir: Direction,
    /// Uniform-source rate in nats; prints the normalized divergence instead.
    #[arg(long)]
    pub rate: Option<String>,
}

#[derive(Debug, Args)]
pub struct IntrinsicArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value = "pq")]
    pub dir: Direction,
    /// Extraction rate in nats; prints the normalized divergence instead.
    #[arg(long)]
    pub rate: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Lower,
    Upper,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Lower => Side::Lower,
            SideArg::Upper => Side::Upper,
        }
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long, value_enum, default_value_t = SideArg::Lower)]
    pub side: SideArg,
    /// Normalized self-information level.
    #[arg(long, conflicts_with = "omega", required_unless_present = "omega")]
    pub j: Option<String>,
    /// Exponent level for the inverse.
    #[arg(long)]
    pub omega: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
    #[arg(long)]
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    InverseTransform,
    Greedy,
    TypeSpreading,
    Partition,
    Combined,
    MTypeQuantizer,
    NumberGreedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TruncationArg {
    Full,
    Typical,
    ThreeRegion,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Source pmf (all kinds except the quantizer).
    #[arg(long)]
    pub p: Option<PathBuf>,
    /// Target pmf (all kinds except number-greedy).
    #[arg(long)]
    pub q: Option<PathBuf>,
    /// Source length.
    #[arg(long)]
    pub k: Option<u32>,
    /// Target length.
    #[arg(long)]
    pub n: u32,
    /// R = n/k, used when `--k` is absent (k = ceil(n/R)); for the quantizer and
    /// number-greedy kinds, the log-size rate giving M = ceil(e^{nR}).
    #[arg(long)]
    pub rate: Option<f64>,
    /// Number of uniform atoms (quantizer and number-greedy).
    #[arg(long)]
    pub m: Option<u128>,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value = "inf")]
    pub alpha: String,
    #[arg(long, value_enum, default_value_t = TruncationArg::Full)]
    pub truncation: TruncationArg,
    /// Divergence direction the quantizer and number-greedy codes target.
    #[arg(long, default_value = "pq")]
    pub variant: Direction,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value = "pq")]
    pub dir: Direction,
}

#[derive(Debug, Args)]
pub struct GuessingArgs {
    #[arg(long)]
    pub p: PathBuf,
    /// Key pmf; prints lower and upper bounds instead of the uniform-key exponent.
    #[arg(long)]
    pub key: Option<PathBuf>,
    #[arg(long)]
    pub rho: String,
    /// Key rate in nats (uniform key).
    #[arg(long, required_unless_present = "key")]
    pub rate: Option<String>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
    #[arg(long, default_value = "inf")]
    pub alpha: String,
    #[arg(long, default_value = "pq")]
    pub dir: Direction,
    /// Rate for the asymptotic-divergence comparison.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Source length for the exhaustive code comparison.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Target length for the exhaustive code comparison.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(subcommand)]
    pub target: SweepTarget,
}

#[derive(Debug, Args)]
pub struct Sink {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum SweepTarget {
    Entropy {
        #[command(flatten)]
        args: EntropyArgs,
        #[command(flatten)]
        sink: Sink,
    },
    Divergence {
        #[command(flatten)]
        args: DivergenceArgs,
        #[command(flatten)]
        sink: Sink,
    },
    Asym {
        #[command(flatten)]
        args: AsymArgs,
        #[command(flatten)]
        sink: Sink,
    },
    Rate {
        #[command(flatten)]
        args: RateArgs,
        #[command(flatten)]
        sink: Sink,
    },
    Resolvability {
        #[command(flatten)]
        args: ResolvabilityArgs,
        #[command(flatten)]
        sink: Sink,
    },
    Intrinsic {
        #[command(flatten)]
        args: IntrinsicArgs,
        #[command(flatten)]
        sink: Sink,
    },
    Spectrum {
        #[command(flatten)]
        args: SpectrumArgs,
        #[command(flatten)]
        sink: Sink,
    },
    Guessing {
        #[command(flatten)]
        args: GuessingArgs,
        #[command(flatten)]
        sink: Sink,
    },
}

/// A pointwise computation: named raw parameters and an evaluator over them.
struct Job {
    outputs: Vec<&'static str>,
    /// Whether the outputs carry entropy units.
    nats: bool,
    params: Vec<(&'static str, String)>,
    eval: Box<dyn Fn(&Params) -> Res<Vec<f64>> + Send + Sync>,
}

#[derive(Clone)]
struct Params(Vec<(&'static str, String)>);

impl Params {
    fn raw(&self, name: &str) -> &str {
        self.0.iter().find(|(n, _)| *n == name).map(|(_, v)| v.as_str()).expect("declared parameter")
    }
    fn order(&self, name: &str) -> Res<Order> {
        parse_order(self.raw(name))
    }
    fn real(&self, name: &str) -> Res<f64> {
        parse_real(self.raw(name), name)
    }
}

fn parse_order(tok: &str) -> Res<Order> {
    tok.parse::<Order>().map_err(|_| CliError::Usage(format!("unknown order token '{tok}'")))
}

fn parse_real(tok: &str, name: &str) -> Res<f64> {
    let v = match tok.trim() {
        "inf" | "+inf" => f64::INFINITY,
        t => t.parse::<f64>().map_err(|_| CliError::Usage(format!("bad value '{tok}' for --{name}")))?,
    };
    Ok(v)
}

fn job(outputs: Vec<&'static str>, nats: bool, params: Vec<(&'static str, String)>, eval: impl Fn(&Params) -> Res<Vec<f64>> + Send + Sync + 'static) -> Job {
    Job { outputs, nats, params, eval: Box::new(eval) }
}

fn entropy_job(a: EntropyArgs) -> Res<Job> {
    let p = read_pmf(&a.p)?;
    Ok(job(vec!["entropy"], true, vec![("alpha", a.alpha)], move |x| Ok(vec![renyi_entropy(&p, x.order("alpha")?)])))
}

fn divergence_job(a: DivergenceArgs) -> Res<Job> {
    let (p, q, dir) = (read_pmf(&a.p)?, read_pmf(&a.q)?, a.dir);
    Ok(job(vec!["divergence"], true, vec![("alpha", a.alpha)], move |x| {
        let o = x.order("alpha")?;
        let v = match dir {
            DivDir::Pq => renyi_divergence(&p, &q, o)?,
            DivDir::Qp => renyi_divergence(&q, &p, o)?,
            DivDir::Max => max_renyi(&p, &q, o)?,
            DivDir::Sum => sum_renyi(&p, &q, o)?,
        };
        Ok(vec![v.value()])
    }))
}

fn asym_job(a: AsymArgs) -> Res<Job> {
    let (p, q, dir) = (read_pmf(&a.p)?, read_pmf(&a.q)?, a.dir);
    Ok(job(vec!["divergence"], true, vec![("alpha", a.alpha), ("rate", a.rate)], move |x| {
        let query = RateQuery::new(p.clone(), q.clone(), x.real("rate")?, x.order("alpha")?)?;
        Ok(vec![asymptotics::asymptotic_divergence(&query, dir)?.value()])
    }))
}

fn rate_job(a: RateArgs) -> Res<Job> {
    let (p, q, dir) = (read_pmf(&a.p)?, read_pmf(&a.q)?, a.dir);
    Ok(job(vec!["rate"], false, vec![("alpha", a.alpha)], move |x| {
        Ok(vec![asymptotics::conversion_rate(&p, &q, x.order("alpha")?, dir)?.value()])
    }))
}

fn resolvability_job(a: ResolvabilityArgs) -> Res<Job> {
    let (q, dir) = (read_pmf(&a.q)?, a.dir);
    Ok(match a.rate {
        None => job(vec!["resolvability"], true, vec![("alpha", a.alpha)], move |x| {
            Ok(vec![asymptotics::resolvability(&q, x.order("alpha")?, dir)?])
        }),
        Some(r) => job(vec!["divergence"], true, vec![("alpha", a.alpha), ("rate", r)], move |x| {
            Ok(vec![asymptotics::resolvability_asymptotics(&q, x.real("rate")?, x.order("alpha")?, dir)?.value()])
        }),
    })
}

fn intrinsic_job(a: IntrinsicArgs) -> Res<Job> {
    let (p, dir) = (read_pmf(&a.p)?, a.dir);
    Ok(match a.rate {
        None => job(vec!["intrinsic"], true, vec![("alpha", a.alpha)], move |x| {
            Ok(vec![asymptotics::intrinsic_randomness(&p, x.order("alpha")?, dir)?.value()])
        }),
        Some(r) => job(vec!["divergence"], true, vec![("alpha", a.alpha), ("rate", r)], move |x| {
            Ok(vec![asymptotics::intrinsic_asymptotics(&p, x.real("rate")?, x.order("alpha")?, dir)?.value()])
        }),
    })
}

fn spectrum_job(a: SpectrumArgs) -> Res<Job> {
    let p = read_pmf(&a.p)?;
    let side = a.side;
    Ok(match (a.j, a.omega) {
        (Some(j), _) => job(vec!["exponent"], true, vec![("j", j)], move |x| {
            let pt = spectrum::spectrum_point(&p, x.real("j")?, side.into());
            if pt.at_endpoint {
                eprintln!("note: j = {} is the spectrum endpoint; the value is the closure limit", pt.j);
            }
            Ok(vec![pt.exponent.value()])
        }),
        (None, Some(w)) => job(vec!["inverse"], true, vec![("omega", w)], move |x| {
            let w = x.real("omega")?;
            Ok(vec![match side {
                SideArg::Lower => spectrum::exponent_inverse_lower(&p, w),
                SideArg::Upper => spectrum::exponent_inverse_upper(&p, w),
            }])
        }),
        (None, None) => return Err(CliError::Usage("one of --j or --omega is required".into())),
    })
}

fn guessing_job(a: GuessingArgs) -> Res<Job> {
    let p = read_pmf(&a.p)?;
    Ok(match a.key {
        Some(key) => {
            let key = read_pmf(&key)?;
            job(vec!["lower", "upper"], true, vec![("rho", a.rho)], move |x| {
                let query = guessing::GuessQuery::new(p.clone(), key.clone(), x.real("rho")?, 0.0)?;
                let (lo, hi) = guessing::guessing_bounds(&query)?;
                Ok(vec![lo, hi])
            })
        }
        None => {
            let rate = a.rate.expect("required by the parser");
            job(vec!["exponent"], true, vec![("rho", a.rho), ("rate", rate)], move |x| {
                Ok(vec![guessing::guessing_exponent(&p, x.real("rho")?, x.real("rate")?)?])
            })
        }
    })
}

fn scale(v: f64, units: Units, nats: bool) -> f64 {
    if units == Units::Bits && nats {
        v / std::f64::consts::LN_2
    } else {
        v
    }
}

fn fmt6(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.6}")
    }
}

fn single(j: Job, units: Units, out: &mut dyn Write) -> Res<()> {
    if let Some((name, _)) = j.params.iter().find(|(_, v)| sweep::is_grid(v)) {
        return Err(CliError::Usage(format!("--{name} takes a single value outside `sweep`")));
    }
    let vals = (j.eval)(&Params(j.params.clone()))?;
    if vals.len() == 1 {
        writeln!(out, "{}", fmt6(scale(vals[0], units, j.nats))).map_err(stdout_err)?;
    } else {
        for (name, v) in j.outputs.iter().zip(vals) {
            writeln!(out, "{name} {}", fmt6(scale(v, units, j.nats))).map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn run_sweep(j: Job, units: Units, sink: Sink) -> Res<()> {
    let swept: Vec<usize> = j.params.iter().enumerate().filter(|(_, (_, v))| sweep::is_grid(v)).map(|(i, _)| i).collect();
    let idx = match swept.as_slice() {
        [i] => *i,
        [] => return Err(CliError::Usage("sweep needs one argument given as a grid such as 0:0.1:2,inf".into())),
        _ => return Err(CliError::Usage("sweep accepts exactly one grid argument".into())),
    };
    let name = j.params[idx].0;
    let points = sweep::expand(&j.params[idx].1)?;
    let rows: Vec<Row> = points
        .par_iter()
        .map(|tok| {
            let mut params = j.params.clone();
            params[idx].1 = tok.clone();
            let r = (j.eval)(&Params(params))
                .map(|v| v.into_iter().map(|x| scale(x, units, j.nats)).collect())
                .map_err(|e| e.to_string());
            (tok.clone(), r)
        })
        .collect();
    for (tok, r) in &rows {
        if let Err(e) = r {
            eprintln!("warning: {name}={tok}: {e}");
        }
    }
    sweep::write_table(name, &j.outputs, &rows, sink.format, sink.out.as_deref())
}

fn stdout_err(source: std::io::Error) -> CliError {
    CliError::Write { path: "<stdout>".into(), source }
}

fn rate_k(k: Option<u32>, rate: Option<f64>, n: u32) -> Res<u32> {
    match (k, rate) {
        (Some(k), _) => Ok(k),
        (None, Some(r)) if r > 0.0 && r.is_finite() => {
            let k = (n as f64 / r).ceil();
            if k > u32::MAX as f64 {
                Err(CliError::Usage("rate too small".into()))
            } else {
                Ok(k.max(1.0) as u32)
            }
        }
        _ => Err(CliError::Usage("give --k or a positive --rate".into())),
    }
}

fn uniform_size(m: Option<u128>, rate: Option<f64>, n: u32) -> Res<u128> {
    match (m, rate) {
        (Some(m), _) => Ok(m),
        (None, Some(r)) if r >= 0.0 => {
            let m = (n as f64 * r).exp().ceil();
            if m > 2f64.powi(52) {
                Err(CliError::Usage("uniform alphabet too large".into()))
            } else {
                Ok(m as u128)
            }
        }
        _ => Err(CliError::Usage("give --m or a nonnegative --rate".into())),
    }
}

fn need(path: &Option<PathBuf>, flag: &str) -> Res<Pmf> {
    match path {
        Some(p) => read_pmf(p),
        None => Err(CliError::Usage(format!("--{flag} is required for this kind"))),
    }
}

fn construct(a: &ConstructArgs) -> Res<SimCode> {
    let alpha = parse_order(&a.alpha)?;
    let pair = || -> Res<(Pmf, Pmf, u32)> { Ok((need(&a.p, "p")?, need(&a.q, "q")?, rate_k(a.k, a.rate, a.n)?)) };
    Ok(match a.kind {
        KindArg::InverseTransform => {
            let (p, q, k) = pair()?;
            let t = match a.truncation {
                TruncationArg::Full => Truncation::Full,
                TruncationArg::Typical => Truncation::Typical { delta: a.delta },
                TruncationArg::ThreeRegion => Truncation::ThreeRegion { delta: a.delta },
            };
            codes::inverse_transform_code(&p, &q, k, a.n, t)?
        }
        KindArg::Greedy => {
            let (p, q, k) = pair()?;
            codes::greedy_code(&p, &q, k, a.n)?
        }
        KindArg::TypeSpreading => {
            let (p, q, k) = pair()?;
            codes::type_spreading_code(&p, &q, k, a.n, alpha)?
        }
        KindArg::Partition => {
            let (p, q, k) = pair()?;
            codes::partition_code(&p, &q, k, a.n, a.delta)?
        }
        KindArg::Combined => {
            let (p, q, k) = pair()?;
            codes::combined_code(&p, &q, k, a.n, alpha, a.delta)?
        }
        KindArg::MTypeQuantizer => {
            let q = need(&a.q, "q")?;
            codes::resolvability_quantizer(&q, a.n, uniform_size(a.m, a.rate, a.n)?, a.delta, a.variant)?
        }
        KindArg::NumberGreedy => {
            let p = need(&a.p, "p")?;
            codes::intrinsic_code(&p, a.n, uniform_size(a.m, a.rate, a.n)?, a.delta, a.variant)?
        }
    })
}

fn oracle_reports(a: &OracleArgs) -> Res<Vec<OracleReport>> {
    let (p, q) = (read_pmf(&a.p)?, read_pmf(&a.q)?);
    let alpha = parse_order(&a.alpha)?;
    let mut out = Vec::new();
    let lib = asymptotics::conversion_rate(&p, &q, alpha, a.dir)?.value();
    let grid = oracle::grid::conversion_rate(p.probs(), q.probs(), alpha, a.dir);
    out.push(OracleReport::new(format!("conversion_rate[{}]", a.dir), grid, lib, 2e-3));
    if let Some(r) = a.rate {
        let query = RateQuery::new(p.clone(), q.clone(), r, alpha)?;
        let lib = asymptotics::asymptotic_divergence(&query, a.dir)?.value();
        let grid = oracle::grid::asymptotic_divergence(p.probs(), q.probs(), r, alpha, a.dir);
        out.push(OracleReport::new(format!("asymptotic_divergence[{}]", a.dir), grid, lib, 2e-3));
    }
    let src = Pmf::from_probs(&oracle::product_atoms(&p, a.k)?)?;
    let tgt = Pmf::from_probs(&oracle::product_atoms(&q, a.n)?)?;
    let (_, best) = oracle::brute_force_optimal_map(&src, &tgt, alpha, a.dir)?;
    let candidates: Vec<(&str, Res<SimCode>)> = vec![
        ("inverse-transform", codes::inverse_transform_code(&p, &q, a.k, a.n, Truncation::Full).map_err(Into::into)),
        ("greedy", codes::greedy_code(&p, &q, a.k, a.n).map_err(Into::into)),
        ("type-spreading", codes::type_spreading_code(&p, &q, a.k, a.n, alpha).map_err(Into::into)),
    ];
    for (name, code) in candidates {
        let v = renyisim_core::evaluate_code(&code?, alpha, a.dir)?.value();
        out.push(OracleReport::lower_bound(format!("brute_force_map<={name}"), best.value(), v, 1e-9));
    }
    Ok(out)
}

fn write_code_summary(code: &SimCode, out: &mut dyn Write) -> Res<()> {
    writeln!(out, "{} code: {} assignments, {} target blocks", kind_name(code), code.assignments.len(), code.induced.blocks.len())
        .map_err(stdout_err)
}

fn kind_name(code: &SimCode) -> String {
    serde_json::to_value(code.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn warn(code: &SimCode) {
    for w in &code.warnings {
        eprintln!("warning: {w}");
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Res<()> {
    let units = cli.units;
    match cli.command {
        Command::Entropy(a) => single(entropy_job(a)?, units, out),
        Command::Divergence(a) => single(divergence_job(a)?, units, out),
        Command::Asym(a) => single(asym_job(a)?, units, out),
        Command::Rate(a) => single(rate_job(a)?, units, out),
        Command::Resolvability(a) => single(resolvability_job(a)?, units, out),
        Command::Intrinsic(a) => single(intrinsic_job(a)?, units, out),
        Command::Spectrum(a) => single(spectrum_job(a)?, units, out),
        Command::Guessing(a) => single(guessing_job(a)?, units, out),
        Command::CompareExponents(a) => {
            let r = spectrum::compare_exponents(&read_pmf(&a.p)?, &read_pmf(&a.q)?, a.rate)?;
            let v = serde_json::json!({
                "rate": r.rate,
                "dominates": r.dominates,
                "predicted": r.predicted(),
                "thresholds": r.thresholds,
            });
            writeln!(out, "{v}").map_err(stdout_err)
        }
        Command::Construct(a) => {
            let code = construct(&a)?;
            warn(&code);
            match &a.out {
                Some(path) => {
                    write_json(path, &code)?;
                    write_code_summary(&code, out)
                }
                None => writeln!(out, "{}", serde_json::to_string_pretty(&code).expect("serializable")).map_err(stdout_err),
            }
        }
        Command::Evaluate(a) => {
            let code = read_code(&a.code)?;
            warn(&code);
            let v = renyisim_core::evaluate_code(&code, parse_order(&a.alpha)?, a.dir)?.value();
            writeln!(out, "{}", fmt6(scale(v, units, true))).map_err(stdout_err)
        }
        Command::Oracle(a) => {
            for r in oracle_reports(&a)? {
                writeln!(out, "{}", r.json_line()).map_err(stdout_err)?;
            }
            Ok(())
        }
        Command::Sweep(s) => {
            let (j, sink) = match s.target {
                SweepTarget::Entropy { args, sink } => (entropy_job(args)?, sink),
                SweepTarget::Divergence { args, sink } => (divergence_job(args)?, sink),
                SweepTarget::Asym { args, sink } => (asym_job(args)?, sink),
                SweepTarget::Rate { args, sink } => (rate_job(args)?, sink),
                SweepTarget::Resolvability { args, sink } => (resolvability_job(args)?, sink),
                SweepTarget::Intrinsic { args, sink } => (intrinsic_job(args)?, sink),
                SweepTarget::Spectrum { args, sink } => (spectrum_job(args)?, sink),
                SweepTarget::Guessing { args, sink } => (guessing_job(args)?, sink),
            };
            run_sweep(j, units, sink)
        }
    }
}

fn apply_guard_env() -> Res<()> {
    if let Ok(v) = std::env::var("RENYI_GUARD_ATOMS") {
        let limit = v
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("RENYI_GUARD_ATOMS must be a positive integer, got '{v}'")))?;
        set_guard_limit(limit);
    }
    Ok(())
}

/// Runs the binary on `args` (including the program name), writing results to `out`
/// and diagnostics to stderr. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match apply_guard_env().and_then(|_| dispatch(cli, out)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
