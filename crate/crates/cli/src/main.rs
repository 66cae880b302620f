//! `hpomega`: compute, audit and sweep from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 violations found.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use hpomega::exact::{integer_code, ExactRational};
use hpomega::measures::{
    dominance_check, make_length_measure, random_length_measure, sample_real_prefix, LengthMeasure, LengthMeasureSpec,
};
use hpomega::minilang::{bounded_k, halting_census, program_gap, EnumerationReport};
use hpomega::prefixfree::{check_prefix_free, interval_measure_equals_omega, omega, PrefixFreeness, StringSet};
use hpomega::proplogic::corpus::random_corpus;
use hpomega::proplogic::fo::FiniteStructure;
use hpomega::proplogic::{SentenceEnumeration, Theory, Valuation};
use hpomega::weights::{audit, build_weighing, AlphaSpec, WeightError, WeightParams, WeightValue};

use output::{Format, Report};

#[derive(Parser, Serialize)]
#[command(name = "hpomega", version, about = "Exact theory weights, HP/EP audits and halting-probability measures")]
struct Cli {
    /// Output format (default: csv for census and dominance, json otherwise).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Add approximate decimals next to exact values in text output.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Ω_S of a set file, with prefix-freeness, Kraft and interval checks.
    Omega { set_file: PathBuf },
    /// Weight of one theory file.
    Weigh {
        theory_file: PathBuf,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// HP and EP audits of a weight over a corpus.
    Audit(AuditArgs),
    /// The first sentences of the fixed enumeration ψ1, ψ2, ….
    Enumerate {
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..=100_000))]
        count: u64,
    },
    /// Halting census of all MiniLang programs up to a length.
    Census(CensusArgs),
    /// Compares Σ𝒩(ℓ)π_ℓ with Σ𝒩(ℓ)2^-ℓ over many length measures.
    Dominance(DominanceArgs),
    /// Monte-Carlo estimate of Ω_S from random binary expansions.
    Montecarlo {
        set_file: PathBuf,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Fuel-bounded Kolmogorov queries and the K number.
    Klab {
        /// Target output, comma separated (empty for no output).
        #[arg(long, default_value = "")]
        target: String,
        #[command(flatten)]
        census: CensusArgs,
    },
}

#[derive(Args, Serialize)]
struct WeightArgs {
    /// One of wv wm wtaut wincons wlower wupper w3 w4 w5 count v vab u (or axiom-count).
    #[arg(long)]
    weight: String,
    /// Series terms for enclosure-valued weights.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    precision: u64,
    /// Valuation for wv (and wm), e.g. `p0=1,p2=1`.
    #[arg(long)]
    valuation: Option<String>,
    /// Reference theory 𝕍, inline, e.g. `p0; p1 -> p2`.
    #[arg(long)]
    reference: Option<String>,
    /// Structure file for wm.
    #[arg(long)]
    structure: Option<PathBuf>,
    /// Structure files for count (repeat the flag).
    #[arg(long = "structures")]
    structures: Vec<PathBuf>,
    #[arg(long, default_value = "2")]
    a: String,
    #[arg(long, default_value = "4")]
    b: String,
    /// Geometric ratio: α_n = c^-n.
    #[arg(long, default_value = "7")]
    c: String,
    /// Explicit α prefix, comma separated; replaces the geometric sequence.
    #[arg(long)]
    alpha_prefix: Option<String>,
    /// Σ_{n>m} α_n for an explicit prefix of length m.
    #[arg(long, default_value = "0")]
    alpha_tail: String,
    /// Weight for u when no earlier theory constrains it.
    #[arg(long, default_value = "0")]
    seed_weight: String,
}

#[derive(Args, Serialize)]
struct AuditArgs {
    /// Directory of `.thy` theory files, read in file-name order.
    #[arg(long, conflicts_with = "random")]
    corpus_dir: Option<PathBuf>,
    /// Use a random corpus of this many theories instead.
    #[arg(long)]
    random: Option<usize>,
    /// Seed for --random.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Audit the corpus in reverse order (matters for u).
    #[arg(long)]
    reverse: bool,
    /// Maximum number of violations listed per principle.
    #[arg(long, default_value_t = 20)]
    list_limit: usize,
    #[command(flatten)]
    weight: WeightArgs,
}

#[derive(Args, Serialize)]
struct CensusArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=10))]
    max_chars: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
}

#[derive(Args, Serialize)]
struct DominanceArgs {
    /// Number of random length measures.
    #[arg(long, default_value_t = 100)]
    measures: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extra measure spec files (JSON).
    #[arg(long = "measure-file")]
    measure_files: Vec<PathBuf>,
    /// Leave out the point-mass family.
    #[arg(long)]
    no_point_mass: bool,
    #[command(flatten)]
    census: CensusArgs,
}

enum Failure {
    Usage(String),
    Input(String),
}

struct Outcome {
    report: Report,
    violations: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn rational(flag: &str, text: &str) -> Result<ExactRational, Failure> {
    text.trim().parse().map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
}

fn read_set(path: &Path) -> Result<StringSet, Failure> {
    let set = StringSet::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if set.is_empty() {
        return Err(Failure::Input(format!("{}: the set file contains no strings", path.display())));
    }
    Ok(set)
}

fn read_theory(path: &Path) -> Result<Theory, Failure> {
    Theory::parse(&read(path)?).map_err(|(line, e)| Failure::Input(format!("{}:{line}: {e}", path.display())))
}

fn read_structure(path: &Path) -> Result<FiniteStructure, Failure> {
    FiniteStructure::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn weight_failure(e: WeightError) -> Failure {
    match e {
        WeightError::UnknownWeight(_) | WeightError::InvalidAlpha(_) | WeightError::ZeroPrecision => {
            Failure::Usage(e.to_string())
        }
        _ => Failure::Input(e.to_string()),
    }
}

fn weight_params(args: &WeightArgs) -> Result<WeightParams, Failure> {
    let mut p = WeightParams::default();
    if let Some(v) = &args.valuation {
        p.valuation = Valuation::parse(v).map_err(|e| Failure::Usage(format!("--valuation: {e}")))?;
        p.structure = WeightParams::structure_for(&p.valuation);
    }
    if let Some(r) = &args.reference {
        p.reference = Theory::parse_inline(r).map_err(|e| Failure::Usage(format!("--reference: {e}")))?;
    }
    if let Some(path) = &args.structure {
        p.structure = read_structure(path)?;
    }
    if !args.structures.is_empty() {
        p.structures = args.structures.iter().map(|s| read_structure(s)).collect::<Result<_, _>>()?;
    }
    if args.weight == "vab" {
        let (a, b) = (rational("a", &args.a)?, rational("b", &args.b)?);
        p.alpha = match &args.alpha_prefix {
            Some(list) => {
                let prefix = list.split(',').map(|s| rational("alpha-prefix", s)).collect::<Result<Vec<_>, _>>()?;
                AlphaSpec::explicit(a, b, prefix, rational("alpha-tail", &args.alpha_tail)?)
            }
            None => AlphaSpec::geometric(a, b, rational("c", &args.c)?),
        }
        .map_err(weight_failure)?;
    }
    p.seed_weight = rational("seed-weight", &args.seed_weight)?;
    Ok(p)
}

fn cmd_omega(set_file: &Path, r: &mut Report) -> Result<bool, Failure> {
    let set = read_set(set_file)?;
    let value = omega(set.iter());
    let witness = match check_prefix_free(&set) {
        PrefixFreeness::PrefixFree => None,
        PrefixFreeness::Witness { prefix, extension } => Some((prefix, extension)),
    };
    let interval = interval_measure_equals_omega(&set).ok();
    r.json = json!({
        "size": set.len(),
        "omega": value,
        "prefix_free": witness.is_none(),
        "witness": witness.as_ref().map(|(p, e)| json!({"prefix": p, "extension": e})),
        "kraft_holds": value <= ExactRational::one(),
        "interval_check": interval,
    });
    r.line(format!("strings: {}", set.len()));
    r.line(format!("omega: {}", r.q(&value)));
    match &witness {
        None => r.line("prefix-free: yes".into()),
        Some((p, e)) => r.line(format!("prefix-free: no, witness ({p}, {e})")),
    }
    r.line(format!("kraft (omega <= 1): {}", if value <= ExactRational::one() { "holds" } else { "fails" }));
    if let Some(iv) = interval {
        let verdict = if iv.equal { "equal" } else { "DIFFERENT" };
        r.line(format!("interval measure: {} ({verdict})", r.q(&iv.lhs)));
    }
    Ok(false)
}

fn describe(v: &WeightValue, r: &Report) -> String {
    match v {
        WeightValue::Exact(q) => r.q(q),
        WeightValue::Enclosure(e) => format!("[{}, {}] ({} terms)", r.q(&e.lower), r.q(&e.upper), e.terms_used),
    }
}

fn cmd_weigh(theory_file: &Path, args: &WeightArgs, r: &mut Report) -> Result<bool, Failure> {
    let params = weight_params(args)?;
    let w = build_weighing(&args.weight, &params).map_err(weight_failure)?;
    let t = read_theory(theory_file)?;
    let value = w.weigh(&t, args.precision as usize).map_err(weight_failure)?;
    r.json = json!({"weight": args.weight, "theory": t, "value": value});
    r.line(format!("{}({t}) = {}", args.weight, describe(&value, r)));
    Ok(false)
}

fn load_corpus(dir: &Path) -> Result<Vec<Theory>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Input(format!("cannot read {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "thy"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::Input(format!("{}: no .thy files", dir.display())));
    }
    paths.iter().map(|p| read_theory(p)).collect()
}

fn cmd_audit(args: &AuditArgs, r: &mut Report) -> Result<bool, Failure> {
    let params = weight_params(&args.weight)?;
    let w = build_weighing(&args.weight.weight, &params).map_err(weight_failure)?;
    let mut corpus = match (&args.corpus_dir, args.random) {
        (Some(dir), _) => load_corpus(dir)?,
        (None, Some(n)) => random_corpus(args.seed, n),
        (None, None) => return Err(Failure::Usage("audit needs --corpus-dir or --random".into())),
    };
    if args.reverse {
        corpus.reverse();
    }
    let started = Instant::now();
    let report = audit(w.as_ref(), &corpus, args.weight.precision as usize, args.list_limit).map_err(weight_failure)?;
    eprintln!("audit of {} over {} theories took {:.2?}", report.weight, corpus.len(), started.elapsed());
    r.line(format!(
        "{}: HP {} ({} violations over {} entailed pairs), EP {} ({} violations over {} non-equivalent pairs)",
        report.weight,
        if report.hp_violation_count == 0 { "pass" } else { "FAIL" },
        report.hp_violation_count,
        report.entailed_pairs,
        if report.ep_violation_count == 0 { "pass" } else { "FAIL" },
        report.ep_violation_count,
        report.nonequivalent_pairs,
    ));
    for v in report.hp_violations.iter().chain(&report.ep_violations) {
        r.line(format!(
            "{:?} #{} {} weighs {} / #{} {} weighs {}",
            v.principle,
            v.first,
            v.first_theory,
            describe(&v.first_weight, r),
            v.second,
            v.second_theory,
            describe(&v.second_weight, r)
        ));
    }
    let failed = !report.passed();
    r.json = serde_json::to_value(&report).expect("serializable");
    Ok(failed)
}

fn cmd_enumerate(count: u64, r: &mut Report) -> Result<bool, Failure> {
    let sentences = SentenceEnumeration::global().prefix(count as usize);
    let mut csv = String::from("index,sentence\n");
    let mut rows = Vec::new();
    for (i, f) in sentences.iter().enumerate() {
        let s = f.canonical();
        r.line(format!("{:>6}  {s}", i + 1));
        csv.push_str(&format!("{},{s}\n", i + 1));
        rows.push(json!({"index": i + 1, "sentence": s}));
    }
    r.json = json!({ "sentences": rows });
    r.csv = Some(csv);
    Ok(false)
}

fn cmd_census(args: &CensusArgs, r: &mut Report) -> Result<bool, Failure> {
    let census = halting_census(args.max_chars as usize, args.fuel).map_err(|e| Failure::Usage(e.to_string()))?;
    let gap = program_gap(args.max_chars as usize).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut csv = String::from("bit_length,total,halted,fuel\n");
    for row in &census.rows {
        csv.push_str(&format!("{},{},{},{}\n", row.bit_length, row.total, row.halted, args.fuel));
        r.line(format!("N({}) = {} of {} programs", row.bit_length, row.halted, row.total));
    }
    csv.push_str(&format!("# omega_p_partial={}\n", census.omega_p_partial));
    csv.push_str(&format!("# omega_h_partial={}\n", census.omega_h_partial));
    r.line(format!("omega_P partial: {}", r.q(&census.omega_p_partial)));
    r.line(format!("omega_H partial (fuel-bounded lower bound): {}", r.q(&census.omega_h_partial)));
    r.line(format!("omega_P partial + 2^-8 = {} (<= 1: {})", r.q(&gap.with_witness), gap.at_most_one));
    r.json = json!({ "census": census, "gap": gap, "k_number_exponents": k_exponents(&census) });
    r.csv = Some(csv);
    Ok(false)
}

fn cmd_dominance(args: &DominanceArgs, r: &mut Report) -> Result<bool, Failure> {
    let census =
        halting_census(args.census.max_chars as usize, args.census.fuel).map_err(|e| Failure::Usage(e.to_string()))?;
    let support = census.rows.iter().map(|row| row.bit_length).max().unwrap_or(1);
    let mut measures: Vec<(String, LengthMeasure)> = Vec::new();
    if !args.no_point_mass {
        for m in 1..=support {
            let spec = LengthMeasureSpec::PointMass { m, support };
            measures.push((format!("point-mass-{m}"), make_length_measure(&spec).expect("m within support")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for i in 0..args.measures {
        measures.push((format!("random-{i}"), random_length_measure(&mut rng, support, i)));
    }
    for path in &args.measure_files {
        let spec: LengthMeasureSpec =
            serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let m = make_length_measure(&spec).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        measures.push((format!("file:{}", path.display()), m));
    }
    let mut csv = String::from("measure_id,halting_prob,omega_partial,strict,hypothesis_met\n");
    let mut rows = Vec::new();
    let mut broken = 0;
    for (id, m) in &measures {
        let d = dominance_check(&census, m).map_err(|e| Failure::Input(format!("{id}: {e}")))?;
        if d.hypothesis_met && !d.strict {
            broken += 1;
        }
        csv.push_str(&format!("{id},{},{},{},{}\n", d.halting_prob, d.omega_partial, d.strict, d.hypothesis_met));
        r.line(format!("{id}: {} < {} : {}", r.q(&d.halting_prob), r.q(&d.omega_partial), d.strict));
        rows.push(json!({"measure_id": id, "report": d}));
    }
    r.line(format!("{} measures, {broken} non-strict rows where the hypothesis holds", measures.len()));
    r.json = json!({ "support": support, "rows": rows, "non_strict_with_hypothesis": broken });
    r.csv = Some(csv);
    Ok(broken > 0)
}

fn cmd_montecarlo(set_file: &Path, trials: u64, seed: u64, r: &mut Report) -> Result<bool, Failure> {
    let set = read_set(set_file)?;
    let mc = sample_real_prefix(&set, trials, seed).map_err(|e| Failure::Input(e.to_string()))?;
    r.line(format!(
        "{} hits in {} trials: estimate {} vs omega {}",
        mc.hits,
        mc.trials,
        r.q(&mc.estimate),
        r.q(&mc.target)
    ));
    r.json = serde_json::to_value(&mc).expect("serializable");
    Ok(false)
}

/// The K number is Σ 2^-c over the integer codes c of halted programs;
/// the codes are listed instead of the (astronomically long) exact sum.
fn k_exponents(census: &EnumerationReport) -> Vec<String> {
    let mut codes: Vec<_> = census.halted_codes.iter().map(integer_code).collect();
    codes.sort();
    codes.iter().map(ToString::to_string).collect()
}

fn cmd_klab(target: &str, args: &CensusArgs, r: &mut Report) -> Result<bool, Failure> {
    let target: Vec<u64> = target
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Failure::Usage(format!("--target: bad number {s:?}"))))
        .collect::<Result<_, _>>()?;
    let census = halting_census(args.max_chars as usize, args.fuel).map_err(|e| Failure::Usage(e.to_string()))?;
    let k_bits = bounded_k(&target, args.max_chars as usize, args.fuel);
    let exponents = k_exponents(&census);
    match k_bits {
        Some(bits) => r.line(format!("shortest program printing {target:?}: {bits} bits")),
        None => r.line(format!("no program up to {} characters prints {target:?} within fuel", args.max_chars)),
    }
    r.line(format!("K number = sum of 2^-c over {} exponents c: {}", exponents.len(), exponents.join(" ")));
    r.json = json!({ "target": target, "bounded_k_bits": k_bits, "k_number_exponents": exponents });
    Ok(false)
}

fn dispatch(cli: &Cli, r: &mut Report) -> Result<bool, Failure> {
    match &cli.command {
        Command::Omega { set_file } => cmd_omega(set_file, r),
        Command::Weigh { theory_file, weight } => cmd_weigh(theory_file, weight, r),
        Command::Audit(args) => cmd_audit(args, r),
        Command::Enumerate { count } => cmd_enumerate(*count, r),
        Command::Census(args) => cmd_census(args, r),
        Command::Dominance(args) => cmd_dominance(args, r),
        Command::Montecarlo { set_file, trials, seed } => cmd_montecarlo(set_file, *trials, *seed, r),
        Command::Klab { target, census } => cmd_klab(target, census, r),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let (name, default_format) = match cli.command {
        Command::Omega { .. } => ("omega", Format::Json),
        Command::Weigh { .. } => ("weigh", Format::Json),
        Command::Audit(_) => ("audit", Format::Json),
        Command::Enumerate { .. } => ("enumerate", Format::Json),
        Command::Census(_) => ("census", Format::Csv),
        Command::Dominance(_) => ("dominance", Format::Csv),
        Command::Montecarlo { .. } => ("montecarlo", Format::Json),
        Command::Klab { .. } => ("klab", Format::Json),
    };
    let format = cli.format.unwrap_or(default_format);
    let flags = serde_json::to_value(cli).expect("serializable");
    let mut report = Report::new(name, format, flags, cli.decimal);
    let violations = dispatch(cli, &mut report)?;
    if format == Format::Csv && report.csv.is_none() {
        return Err(Failure::Usage(format!("{name} has no csv output; use --format json or text")));
    }
    Ok(Outcome { report, violations })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.report.render());
            ExitCode::from(if outcome.violations { 3 } else { 0 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
