use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use brk_core::brkset::{
    build_brk_set, build_trainor_set, poly_to_records, records_to_poly, SetFile, Strategy,
    SurfaceFamilySpec,
};
use brk_core::field::FieldSpec;
use brk_core::multipoly::{Monomial, MultiPoly};
use brk_core::theorem::{
    lemma_suite, mm_bound, mm_claim_bound, pm_bound, rational_str, verify_theorem_mm,
    verify_theorem_pm,
};
use brk_core::vanish::{find_vanishing, find_vanishing_mult};

#[derive(Parser)]
#[command(name = "brk", about = "Construct and verify dilated-surface point sets over prime fields", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a point set and write it as a JSON set file
    Construct(ConstructArgs),
    /// Print the exact lower-bound values for given parameters
    Bounds(BoundsArgs),
    /// Check a set file against a theorem, or run the lemma suite
    Verify(VerifyArgs),
    /// Search for a vanishing polynomial on an explicit point list
    Interpolate(InterpolateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Brk,
    Trainor,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Canonical,
    Random,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum, default_value = "brk")]
    variant: Variant,
    #[arg(long)]
    q: u64,
    /// ambient dimension (brk; inferred for trainor)
    #[arg(long)]
    n: Option<usize>,
    /// surface dimension (brk only)
    #[arg(long)]
    d: Option<usize>,
    /// common degree of the homogeneous tops (brk only)
    #[arg(long)]
    ell: Option<u32>,
    /// degree-ell homogeneous polynomials in t1..td, one per dilated coordinate
    #[arg(long = "h", value_name = "POLY")]
    h: Vec<String>,
    /// defining polynomial in l1..l_{n-1} (trainor only)
    #[arg(long)]
    g: Option<String>,
    #[arg(long, value_enum, default_value = "canonical")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// output set file; stdout when omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: u32,
    /// multiplicity parameter(s), each a positive multiple of q
    #[arg(long = "k")]
    k: Vec<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// theorem to check: pm or mm
    #[arg(value_parser = ["pm", "mm"])]
    mode: Option<String>,
    /// run the randomized lemma suite instead of a theorem check
    #[arg(long, conflicts_with = "mode")]
    lemmas: bool,
    #[arg(long)]
    set: Option<PathBuf>,
    /// multiplicity parameter for mm (positive multiple of q)
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

#[derive(Args)]
struct InterpolateArgs {
    #[arg(long)]
    q: u64,
    /// JSON file: either an array of points or a set file with a "points" field
    #[arg(long)]
    points: PathBuf,
    /// maximum total degree of the candidate polynomial
    #[arg(long)]
    degree: u32,
    /// required vanishing multiplicity (plain vanishing when omitted)
    #[arg(long)]
    mult: Option<u32>,
    /// output witness file; stdout when omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Parses `c*v1^e1*...` terms joined by `+`, variables prefix1..prefixN.
/// Returns the polynomial and the highest variable index seen.
fn parse_poly(lit: &str, prefix: char, arity: Option<usize>, spec: FieldSpec) -> Result<MultiPoly> {
    let mut terms: Vec<(Vec<(usize, u32)>, u64)> = Vec::new();
    let mut max_var = 0usize;
    for term in lit.split('+') {
        let term = term.trim();
        if term.is_empty() {
            bail!("empty term in polynomial literal {lit:?}");
        }
        let mut coeff: u64 = 1;
        let mut vars: Vec<(usize, u32)> = Vec::new();
        for factor in term.split('*') {
            let factor = factor.trim();
            if let Some(rest) = factor.strip_prefix(prefix) {
                let (idx_str, exp) = match rest.split_once('^') {
                    Some((i, e)) => (i, e.parse::<u32>().context("bad exponent")?),
                    None => (rest, 1),
                };
                let idx: usize = idx_str
                    .parse()
                    .with_context(|| format!("bad variable {factor:?}"))?;
                if idx == 0 {
                    bail!("variable indices start at 1, got {factor:?}");
                }
                max_var = max_var.max(idx);
                vars.push((idx - 1, exp));
            } else {
                let c: u64 = factor
                    .parse()
                    .with_context(|| format!("bad factor {factor:?} in {lit:?}"))?;
                coeff = coeff.wrapping_mul(c) % spec.q() as u64;
            }
        }
        terms.push((vars, coeff));
    }
    let arity = match arity {
        Some(a) => {
            if max_var > a {
                bail!("variable {prefix}{max_var} exceeds arity {a}");
            }
            a
        }
        None => max_var.max(1),
    };
    let mut acc: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for (vars, coeff) in terms {
        let mut exps = vec![0u32; arity];
        for (i, e) in vars {
            exps[i] += e;
        }
        *acc.entry(exps).or_insert(0) += coeff;
    }
    let terms: Vec<(Monomial, u32)> = acc
        .into_iter()
        .map(|(exps, c)| {
            Ok((
                Monomial::new(exps).map_err(|e| anyhow!(e))?,
                (c % spec.q() as u64) as u32,
            ))
        })
        .collect::<Result<_>>()?;
    MultiPoly::from_terms(arity, spec, terms).map_err(|e| anyhow!(e))
}

fn write_output(path: Option<&PathBuf>, body: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{body}"),
    }
    Ok(())
}

fn to_json(value: &impl serde::Serialize) -> Result<String> {
    Ok(format!("{}\n", serde_json::to_string_pretty(value)?))
}

fn cmd_construct(args: &ConstructArgs) -> Result<bool> {
    let spec = FieldSpec::new(args.q)?;
    let strategy = match args.strategy {
        StrategyArg::Canonical => Strategy::Canonical,
        StrategyArg::Random => Strategy::Random,
    };
    let (file, count) = match args.variant {
        Variant::Brk => {
            let n = args.n.ok_or_else(|| anyhow!("--n is required for the brk variant"))?;
            let d = args.d.ok_or_else(|| anyhow!("--d is required for the brk variant"))?;
            let ell = args.ell.ok_or_else(|| anyhow!("--ell is required for the brk variant"))?;
            if args.h.len() != n - d {
                bail!("expected {} --h polynomials, got {}", n - d, args.h.len());
            }
            let h = args
                .h
                .iter()
                .map(|lit| parse_poly(lit, 't', Some(d), spec))
                .collect::<Result<Vec<_>>>()?;
            let family = SurfaceFamilySpec::new(spec, n, d, ell, h)?;
            let set = build_brk_set(&family, strategy, args.seed)?;
            let count = set.points.len();
            (SetFile::from_brk(&set), count)
        }
        Variant::Trainor => {
            let lit = args
                .g
                .as_ref()
                .ok_or_else(|| anyhow!("--g is required for the trainor variant"))?;
            let arity = args.n.map(|n| n - 1);
            let g = parse_poly(lit, 'l', arity, spec)?;
            let set = build_trainor_set(spec, &g, strategy, args.seed)?;
            let count = set.points.len();
            (SetFile::from_trainor(&set), count)
        }
    };
    write_output(args.output.as_ref(), &to_json(&file)?)?;
    println!("points: {count}");
    Ok(true)
}

fn cmd_bounds(args: &BoundsArgs) -> Result<bool> {
    let spec = FieldSpec::new(args.q)?;
    let q = spec.q();
    match pm_bound(q, args.n, args.ell) {
        Ok(v) => println!("pm = {v}"),
        Err(_) => println!("pm omitted (requires ell >= 2)"),
    }
    println!("mm = {}", rational_str(&mm_bound(q, args.n, args.ell)));
    for &k in &args.k {
        let (d, m, ratio) = mm_claim_bound(q, args.n, args.ell, k)?;
        println!("mm_claim(k={k}) = {} (D={d}, M={m})", rational_str(&ratio));
    }
    Ok(true)
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    if args.lemmas {
        let report = lemma_suite(args.seed, args.trials)?;
        print!("{}", to_json(&report)?);
        return Ok(report.all_pass());
    }
    let mode = args
        .mode
        .as_deref()
        .ok_or_else(|| anyhow!("pass a mode (pm or mm) or --lemmas"))?;
    let path = args
        .set
        .as_ref()
        .ok_or_else(|| anyhow!("--set is required for theorem checks"))?;
    let body = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let file: SetFile = serde_json::from_str(&body).context("parsing set file")?;
    if file.header.variant != "brk" {
        bail!("theorem checks require a brk-variant set file");
    }
    let set = file.to_brk()?;
    let report = match mode {
        "pm" => verify_theorem_pm(&set)?,
        "mm" => {
            let k = args
                .k
                .ok_or_else(|| anyhow!("--k is required for mm (a positive multiple of q)"))?;
            verify_theorem_mm(&set, k)?
        }
        _ => unreachable!(),
    };
    print!("{}", to_json(&report)?);
    Ok(report.all_pass())
}

fn cmd_interpolate(args: &InterpolateArgs) -> Result<bool> {
    let spec = FieldSpec::new(args.q)?;
    let body = std::fs::read_to_string(&args.points)
        .with_context(|| format!("reading {}", args.points.display()))?;
    let value: serde_json::Value = serde_json::from_str(&body).context("parsing points file")?;
    let points_value = match &value {
        serde_json::Value::Array(_) => &value,
        serde_json::Value::Object(map) => map
            .get("points")
            .ok_or_else(|| anyhow!("object input must carry a \"points\" field"))?,
        _ => bail!("points file must be a JSON array or a set file"),
    };
    let points: Vec<Vec<u32>> = serde_json::from_value(points_value.clone())?;
    let arity = points
        .first()
        .map(|p| p.len())
        .ok_or_else(|| anyhow!("points list is empty; arity cannot be inferred"))?;
    if points.iter().any(|p| p.len() != arity) {
        bail!("points have inconsistent arity");
    }
    let witness = match args.mult {
        None => find_vanishing(&points, args.degree, arity, spec)?,
        Some(m) => find_vanishing_mult(&points, args.degree, m, arity, spec)?,
    };
    let out = serde_json::json!({
        "q": spec.q(),
        "degree": args.degree,
        "mult": args.mult,
        "found": witness.is_some(),
        "witness": witness.as_ref().map(poly_to_records),
    });
    write_output(args.output.as_ref(), &to_json(&out)?)?;
    // keep the deserializer honest when a witness exists
    if let Some(w) = &witness {
        let records = poly_to_records(w);
        debug_assert_eq!(&records_to_poly(&records, arity, spec)?, w);
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Interpolate(a) => cmd_interpolate(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
