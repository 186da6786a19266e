//! `mhk` — command-line front end for the hypergraph / matroid / design
//! toolkit in `mhk-core`.
//!
//! Every subcommand reads the documented text formats (hypergraph, definite
//! CNF, 0/1 matrix), prints a report, and exits with
//!
//! * `0` — success (and, for predicates, the property holds),
//! * `1` — the queried property is false,
//! * `2` — usage, parse, or I/O error,
//! * `3` — the computation exceeded its state budget.
//!
//! Text reports consist of `# key: value` lines followed, when the command
//! produces one, by an artifact (a set family or a formula) in its native
//! file format. Since the parsers treat `#` lines as comments, a text
//! report *is* a valid input file and can be fed straight back into
//! another subcommand. With `--format json-lines` the same fields are
//! emitted as a single JSON object per report, artifact included.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use mhk_core::set_family::all_masks_canonical;
use mhk_core::{
    characterization_report, check_circuit_axioms, covering_doubling_representation,
    covering_number_bruteforce, fort_hedlund, hypergraph_horn_violation, is_matroid_horn,
    min_circuit_clauses, min_circuit_subsystem, min_generator, rank2_group_representation,
    schonheim_bound, steiner_triple_bose, uniform_clause_representation,
    uniform_interval_generator, uniform_star_representation, verify_design, BinaryMatrix, BoolFn,
    Budget, DefiniteClause, DefiniteCnf, DesignKind, DesignSpec, Error, GroundSet, Matroid,
    MatroidHornReason, Method, RepresentationCost, SetFamily, VSet, Witness,
};

// ---------------------------------------------------------------------------
// Argument grammar
// ---------------------------------------------------------------------------

/// Hypergraph dualization, Horn inference, matroid recognition, minimum
/// circuit representations, and covering designs on ground sets of up to 64
/// vertices.
#[derive(Parser)]
#[command(name = "mhk", version, propagate_version = true)]
struct Cli {
    /// State budget for power-set sweeps, as log2 of the allowed count.
    #[arg(long, global = true, value_name = "LOG2")]
    budget: Option<u32>,

    /// Cap the worker thread count (the `MHK_THREADS` environment variable
    /// has the same effect; the flag wins).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<u32>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// `# key: value` lines plus the artifact in its file format.
    Text,
    /// One JSON object per report, fields mirroring the text output.
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal transversals of a hypergraph.
    Dualize {
        /// Hypergraph file.
        hypergraph: PathBuf,
    },

    /// Forward-chaining closure of a vertex set under a definite formula.
    Closure {
        /// Definite CNF file.
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
        /// Starting vertices, comma- or space-separated (empty for ∅).
        #[arg(long, value_name = "LIST")]
        set: String,
    },

    /// Check the circuit axioms on a hypergraph.
    CheckMatroid {
        /// Hypergraph file (the candidate circuit family).
        hypergraph: PathBuf,
    },

    /// Evaluate the eleven matroid criteria independently on a candidate
    /// circuit family.
    Characterize {
        /// Hypergraph file (a nontrivial antichain).
        hypergraph: PathBuf,
    },

    /// Is the formula equivalent to the circular formula of matroid
    /// circuits?
    IsMatroidHorn {
        /// Definite CNF file.
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
    },

    /// Is the formula equivalent to the circular formula of some
    /// hypergraph?
    IsHypergraphHorn {
        /// Definite CNF file.
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
    },

    /// Prime implicates of the implicate dual (the function whose true sets
    /// are the complements of the input's implicate sets).
    ImplicateDual {
        /// Definite CNF file.
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
    },

    /// Fewest circuits generating the family by elimination products.
    MinGenerator(MinArgs),

    /// Fewest circuits whose circular formula keeps all membership
    /// implications.
    MinCircuits(MinArgs),

    /// Fewest individual circular clauses keeping all membership
    /// implications.
    MinClauses(MinArgs),

    /// Closed-form representations of uniform-matroid circuit families.
    ConstructUniform {
        /// Ground-set size.
        #[arg(long)]
        n: usize,
        /// Matroid rank (circuits have size r+1).
        #[arg(long)]
        r: usize,
        /// Which construction to emit.
        #[arg(long, value_enum)]
        kind: UniformKind,
        /// Covering design file, required by the doubling construction.
        #[arg(long, value_name = "FILE", required_if_eq("kind", "doubling"))]
        cover: Option<PathBuf>,
        /// Centre vertex of the star construction.
        #[arg(long, alias = "center", default_value_t = 0, value_name = "V")]
        centre: usize,
    },

    /// Covering / Turán / Steiner / implication design utilities.
    Design {
        #[command(subcommand)]
        command: DesignCommand,
    },
}

/// Shared arguments of the three minimum-representation searches.
#[derive(Args)]
struct MinArgs {
    /// Circuit family file (hypergraph format).
    #[arg(value_name = "HYPERGRAPH", required_unless_present = "binary")]
    hypergraph: Option<PathBuf>,

    /// Search strategy.
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    method: MethodArg,

    /// 0/1 matrix file whose column matroid supplies the circuits (needed
    /// by the chordless method).
    #[arg(long, value_name = "FILE")]
    binary: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Certificate-first exhaustive search; always exact.
    Exact,
    /// Chordless circuits of a simple binary matroid.
    Chordless,
    /// Closed form for uniform matroids.
    Uniform,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Exact => Method::Exact,
            MethodArg::Chordless => Method::Chordless,
            MethodArg::Uniform => Method::Uniform,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum UniformKind {
    /// Sliding windows of r+1 consecutive vertices (a minimum generator).
    Interval,
    /// All (r+1)-subsets through a centre vertex.
    Star,
    /// One clause per r-subset, heads by interval shift.
    Clauses,
    /// Grouped triple layout for rank 2 and 46 ≤ n ≤ 64.
    #[value(name = "rank2")]
    Rank2,
    /// A covering design plus its interval shifts.
    Doubling,
}

#[derive(Subcommand)]
enum DesignCommand {
    /// Check a block family against a design property.
    Verify {
        /// Design file (hypergraph format).
        file: PathBuf,
        /// Which property to check.
        #[arg(long, value_enum)]
        kind: DesignKindArg,
        /// Size of the subsets the property quantifies over.
        #[arg(long, value_name = "R")]
        target: usize,
        /// Block size (default: the size of the first block).
        #[arg(long, value_name = "Q")]
        block: Option<usize>,
    },

    /// Exact covering number c(n, q, r) with a witness.
    CoveringNumber {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
    },

    /// Closed-form triple covering number c(n, 3, 2).
    FortHedlund {
        #[arg(long)]
        n: usize,
    },

    /// Schönheim lower bound for c(n, q, r).
    Schonheim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
    },

    /// Steiner triple system on n ≡ 3 (mod 6) points.
    SteinerBose {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignKindArg {
    Covering,
    Turan,
    Steiner,
    Implication,
}

impl From<DesignKindArg> for DesignKind {
    fn from(k: DesignKindArg) -> DesignKind {
        match k {
            DesignKindArg::Covering => DesignKind::Covering,
            DesignKindArg::Turan => DesignKind::Turan,
            DesignKindArg::Steiner => DesignKind::Steiner,
            DesignKindArg::Implication => DesignKind::Implication,
        }
    }
}

// ---------------------------------------------------------------------------
// Reports and failures
// ---------------------------------------------------------------------------

/// The artifact a command may emit after its field lines.
enum Artifact {
    /// A set family in hypergraph format, optionally preceded by a header
    /// comment (design files).
    Family { header: Option<String>, family: SetFamily },
    /// A definite formula in CNF format.
    Cnf(DefiniteCnf),
}

/// An ordered field list plus an optional artifact. `ok` distinguishes
/// "property holds" (exit 0) from "property false" (exit 1).
struct Report {
    fields: Vec<(&'static str, Value)>,
    artifact: Option<Artifact>,
    ok: bool,
}

impl Report {
    fn new(command: &'static str) -> Report {
        Report {
            fields: vec![("command", Value::from(command))],
            artifact: None,
            ok: true,
        }
    }

    fn field(mut self, key: &'static str, value: impl Into<Value>) -> Report {
        self.fields.push((key, value.into()));
        self
    }

    fn family(mut self, family: SetFamily) -> Report {
        self.artifact = Some(Artifact::Family { header: None, family });
        self
    }

    fn design(mut self, header: String, family: SetFamily) -> Report {
        self.artifact = Some(Artifact::Family { header: Some(header), family });
        self
    }

    fn cnf(mut self, cnf: DefiniteCnf) -> Report {
        self.artifact = Some(Artifact::Cnf(cnf));
        self
    }

    fn verdict(mut self, ok: bool) -> Report {
        self.ok = ok;
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::JsonLines => self.render_json(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.fields {
            out.push_str(&format!("# {key}: {}\n", text_value(value)));
        }
        match &self.artifact {
            Some(Artifact::Family { header, family }) => {
                if let Some(h) = header {
                    out.push_str(h);
                    out.push('\n');
                }
                out.push_str(&family.to_string());
            }
            Some(Artifact::Cnf(cnf)) => out.push_str(&cnf.to_string()),
            None => {}
        }
        out
    }

    fn render_json(&self) -> String {
        let mut parts: Vec<String> = self
            .fields
            .iter()
            .map(|(key, value)| format!("{}:{}", json_string(key), value))
            .collect();
        match &self.artifact {
            Some(Artifact::Family { family, .. }) => {
                parts.push(format!("{}:{}", json_string("sets"), family_value(family)));
            }
            Some(Artifact::Cnf(cnf)) => {
                parts.push(format!("{}:{}", json_string("clauses"), cnf_value(cnf)));
            }
            None => {}
        }
        format!("{{{}}}\n", parts.join(","))
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// Text rendering of a field value: strings bare, vertex arrays in set
/// notation, `null` as "unknown".
fn text_value(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(|v| v.to_string()).collect();
            format!("{{{}}}", inner.join(","))
        }
        Value::Null => "unknown".into(),
        other => other.to_string(),
    }
}

fn set_value(v: &VSet) -> Value {
    Value::from(v.iter().map(|i| Value::from(i as u64)).collect::<Vec<_>>())
}

fn family_value(f: &SetFamily) -> Value {
    Value::from(f.iter().map(|s| set_value(&s)).collect::<Vec<_>>())
}

fn cnf_value(c: &DefiniteCnf) -> Value {
    let clauses: Vec<Value> = c
        .clauses()
        .map(|cl| {
            let ground = c.ground();
            let body = ground.vset(cl.body_mask()).expect("clause bodies fit the ground set");
            let mut obj = serde_json::Map::new();
            obj.insert("body".into(), set_value(&body));
            obj.insert("head".into(), Value::from(cl.head() as u64));
            Value::Object(obj)
        })
        .collect();
    Value::from(clauses)
}

/// A diagnostic destined for stderr, with its exit code (2 or 3).
struct Failure {
    message: String,
    code: u8,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { message: message.into(), code: 2 }
}

fn code_of(e: &Error) -> u8 {
    if matches!(e, Error::BudgetExceeded { .. }) {
        3
    } else {
        2
    }
}

/// Attaches the offending input path to a library error.
fn at(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure { message: format!("{}: {e}", path.display()), code: code_of(&e) }
}

/// A library error with no single input file to blame.
fn bare(e: Error) -> Failure {
    Failure { message: e.to_string(), code: code_of(&e) }
}

fn read_parsed<T>(path: &Path) -> Result<T, Failure>
where
    T: std::str::FromStr<Err = Error>,
{
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    text.parse().map_err(at(path))
}

/// Parses `--set`: decimal vertex indices separated by commas or spaces.
fn parse_set(ground: GroundSet, text: &str) -> Result<VSet, Failure> {
    let mut vs = Vec::new();
    for tok in text.split([',', ' ']).filter(|t| !t.is_empty()) {
        let v: usize = tok
            .parse()
            .map_err(|_| usage(format!("--set: bad vertex index `{tok}`")))?;
        vs.push(v);
    }
    ground.vset_from_iter(vs).map_err(|e| usage(format!("--set: {e}")))
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let rendered = report.render(cli.format);
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, rendered) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{rendered}");
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    if let Some(threads) = resolve_threads(cli.threads)? {
        mhk_core::par::configure_threads(threads);
    }
    let budget = match cli.budget {
        Some(log2) => Budget::from_log2(log2).map_err(|e| usage(e.to_string()))?,
        None => Budget::default(),
    };
    dispatch(&cli.command, &budget)
}

/// `--threads` beats `MHK_THREADS`; both must be positive integers.
fn resolve_threads(flag: Option<u32>) -> Result<Option<usize>, Failure> {
    if let Some(t) = flag {
        if t == 0 {
            return Err(usage("--threads must be a positive integer"));
        }
        return Ok(Some(t as usize));
    }
    match std::env::var("MHK_THREADS") {
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(Some(t)),
            _ => Err(usage(format!(
                "MHK_THREADS must be a positive integer, got `{text}`"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(usage("MHK_THREADS is not valid unicode"))
        }
    }
}

fn dispatch(command: &Command, budget: &Budget) -> Result<Report, Failure> {
    match command {
        Command::Dualize { hypergraph } => dualize(hypergraph, budget),
        Command::Closure { cnf, set } => closure(cnf, set),
        Command::CheckMatroid { hypergraph } => check_matroid(hypergraph),
        Command::Characterize { hypergraph } => characterize(hypergraph, budget),
        Command::IsMatroidHorn { cnf } => matroid_horn(cnf, budget),
        Command::IsHypergraphHorn { cnf } => hypergraph_horn(cnf, budget),
        Command::ImplicateDual { cnf } => implicate_dual(cnf, budget),
        Command::MinGenerator(args) => minimize("min-generator", args, budget),
        Command::MinCircuits(args) => minimize("min-circuits", args, budget),
        Command::MinClauses(args) => minimize("min-clauses", args, budget),
        Command::ConstructUniform { n, r, kind, cover, centre } => {
            construct_uniform(*n, *r, *kind, cover.as_deref(), *centre, budget)
        }
        Command::Design { command } => design(command, budget),
    }
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn dualize(path: &Path, budget: &Budget) -> Result<Report, Failure> {
    let family: SetFamily = read_parsed(path)?;
    let dual = family.minimal_transversals(budget).map_err(at(path))?;
    Ok(Report::new("dualize")
        .field("n", family.ground().n() as u64)
        .field("edges", family.len() as u64)
        .field("transversals", dual.len() as u64)
        .family(dual))
}

fn closure(cnf_path: &Path, set: &str) -> Result<Report, Failure> {
    let phi: DefiniteCnf = read_parsed(cnf_path)?;
    let start = parse_set(phi.ground(), set)?;
    let (closed, steps) = phi.forward_chain(&start);
    Ok(Report::new("closure")
        .field("n", phi.ground().n() as u64)
        .field("clauses", phi.len() as u64)
        .field("start", set_value(&start))
        .field("closure", set_value(&closed))
        .field("steps", steps as u64))
}

fn check_matroid(path: &Path) -> Result<Report, Failure> {
    let family: SetFamily = read_parsed(path)?;
    let violation = check_circuit_axioms(&family);
    let mut report = Report::new("check-matroid")
        .field("n", family.ground().n() as u64)
        .field("circuits", family.len() as u64)
        .field("matroid", violation.is_none());
    if let Some(v) = &violation {
        report = report.field("violation", v.to_string());
    }
    Ok(report.verdict(violation.is_none()))
}

fn characterize(path: &Path, budget: &Budget) -> Result<Report, Failure> {
    let family: SetFamily = read_parsed(path)?;
    let rep = characterization_report(&family, budget).map_err(at(path))?;
    let mut report = Report::new("characterize")
        .field("n", family.ground().n() as u64)
        .field("circuits", family.len() as u64);
    for (label, criterion) in rep.entries() {
        let value = if criterion.holds {
            "holds".to_string()
        } else {
            match &criterion.witness {
                Some(w) => format!("fails ({w})"),
                None => "fails".to_string(),
            }
        };
        report = report.field(label, value);
    }
    let all = rep.all_hold();
    Ok(report
        .field("consistent", rep.consistent())
        .field("matroid", all)
        .verdict(all))
}

fn matroid_horn(cnf_path: &Path, budget: &Budget) -> Result<Report, Failure> {
    let phi: DefiniteCnf = read_parsed(cnf_path)?;
    let rep = is_matroid_horn(&phi, budget).map_err(at(cnf_path))?;
    let reason = match &rep.reason {
        MatroidHornReason::RecognizedCircular => {
            "the prime implicates form the circular formula of a circuit family".to_string()
        }
        MatroidHornReason::ConstantTrue => {
            "the formula has no implicates (constant true)".to_string()
        }
        MatroidHornReason::RotationIncomplete { set, missing_head } => {
            format!("the prime-implicate group on {set} is missing head {missing_head}")
        }
        MatroidHornReason::CircuitAxiomFails(v) => {
            format!("the recovered family fails a circuit axiom: {v}")
        }
    };
    let mut report = Report::new("is-matroid-horn")
        .field("n", phi.ground().n() as u64)
        .field("clauses", phi.len() as u64)
        .field("matroid_horn", rep.matroid_horn)
        .field("reason", reason);
    if let Some(circuits) = rep.circuits {
        report = report.field("circuits", circuits.len() as u64).family(circuits);
    }
    Ok(report.verdict(rep.matroid_horn))
}

fn hypergraph_horn(cnf_path: &Path, budget: &Budget) -> Result<Report, Failure> {
    let phi: DefiniteCnf = read_parsed(cnf_path)?;
    let violation = hypergraph_horn_violation(&phi, budget).map_err(at(cnf_path))?;
    let mut report = Report::new("is-hypergraph-horn")
        .field("n", phi.ground().n() as u64)
        .field("clauses", phi.len() as u64)
        .field("hypergraph_horn", violation.is_none());
    if let Some(x) = &violation {
        report = report.field("witness", set_value(x));
    }
    Ok(report.verdict(violation.is_none()))
}

fn implicate_dual(cnf_path: &Path, budget: &Budget) -> Result<Report, Failure> {
    let phi: DefiniteCnf = read_parsed(cnf_path)?;
    let f = BoolFn::from_cnf(&phi, budget).map_err(at(cnf_path))?;
    let dual = f.implicate_dual(budget).map_err(bare)?;
    let primes = prime_implicates_of(&dual, budget).map_err(bare)?;
    let definite = dual.is_definite_horn(budget).map_err(bare)?;
    Ok(Report::new("implicate-dual")
        .field("n", phi.ground().n() as u64)
        .field("clauses", phi.len() as u64)
        .field("true_count", dual.count_true())
        .field("definite_horn", definite)
        .field("prime_implicates", primes.len() as u64)
        .cnf(primes))
}

/// Body-minimal implicates of a function whose true sets are
/// intersection-closed and contain the full ground set (as implicate duals
/// always are); their conjunction represents the function exactly.
fn prime_implicates_of(f: &BoolFn, budget: &Budget) -> Result<DefiniteCnf, Error> {
    let cap = f.superset_intersection_table(budget)?;
    let ground = f.ground();
    let n = ground.n();
    let mut clauses = Vec::new();
    for body in all_masks_canonical(n) {
        let heads = cap[body as usize] & !body;
        if heads == 0 {
            continue;
        }
        for v in 0..n {
            if heads >> v & 1 == 0 {
                continue;
            }
            let mut minimal = true;
            let mut rest = body;
            while rest != 0 {
                let u = rest & rest.wrapping_neg();
                rest ^= u;
                if cap[(body & !u) as usize] >> v & 1 == 1 {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                clauses.push(DefiniteClause::new(ground, ground.vset(body)?, v)?);
            }
        }
    }
    Ok(DefiniteCnf::new(ground, clauses))
}

fn minimize(name: &'static str, args: &MinArgs, budget: &Budget) -> Result<Report, Failure> {
    let (matroid, primary) = load_matroid(args, budget)?;
    let method: Method = args.method.into();
    let searcher: fn(&Matroid, Method, &Budget) -> mhk_core::Result<RepresentationCost> =
        match name {
            "min-generator" => min_generator,
            "min-circuits" => min_circuit_subsystem,
            _ => min_circuit_clauses,
        };
    let cost = searcher(&matroid, method, budget).map_err(at(&primary))?;
    let report = Report::new(name)
        .field("n", matroid.ground().n() as u64)
        .field("circuits", matroid.circuits().len() as u64)
        .field("objective", cost.objective.to_string())
        .field("method", method.to_string())
        .field("value", cost.value as u64)
        .field("exact", cost.exact)
        .field(
            "unique",
            match cost.unique {
                Some(b) => Value::from(b),
                None => Value::Null,
            },
        )
        .field("witness_size", cost.witness.len() as u64);
    Ok(match cost.witness {
        Witness::Circuits(family) => report.family(family),
        Witness::Clauses(cnf) => report.cnf(cnf),
    })
}

/// Builds the matroid from the positional circuit family, the `--binary`
/// matrix, or both (in which case they must agree).
fn load_matroid(args: &MinArgs, budget: &Budget) -> Result<(Matroid, PathBuf), Failure> {
    match (&args.hypergraph, &args.binary) {
        (Some(h), None) => {
            let family: SetFamily = read_parsed(h)?;
            let m = Matroid::from_circuits(family, budget).map_err(at(h))?;
            Ok((m, h.clone()))
        }
        (None, Some(b)) => {
            let matrix: BinaryMatrix = read_parsed(b)?;
            let m = Matroid::from_binary(&matrix, budget).map_err(at(b))?;
            Ok((m, b.clone()))
        }
        (Some(h), Some(b)) => {
            let family: SetFamily = read_parsed(h)?;
            let matrix: BinaryMatrix = read_parsed(b)?;
            let m = Matroid::from_binary(&matrix, budget).map_err(at(b))?;
            if m.circuits() != &family {
                return Err(usage(format!(
                    "{}: circuit family does not match the circuits of the binary matrix {}",
                    h.display(),
                    b.display()
                )));
            }
            Ok((m, h.clone()))
        }
        (None, None) => unreachable!("clap requires a hypergraph or --binary"),
    }
}

fn construct_uniform(
    n: usize,
    r: usize,
    kind: UniformKind,
    cover: Option<&Path>,
    centre: usize,
    budget: &Budget,
) -> Result<Report, Failure> {
    let report = Report::new("construct-uniform")
        .field("n", n as u64)
        .field("r", r as u64);
    match kind {
        UniformKind::Interval => {
            let family = uniform_interval_generator(n, r).map_err(bare)?;
            Ok(report
                .field("kind", "interval")
                .field("blocks", family.len() as u64)
                .family(family))
        }
        UniformKind::Star => {
            let family = uniform_star_representation(n, r, centre, budget).map_err(bare)?;
            Ok(report
                .field("kind", "star")
                .field("centre", centre as u64)
                .field("blocks", family.len() as u64)
                .family(family))
        }
        UniformKind::Clauses => {
            let cnf = uniform_clause_representation(n, r, budget).map_err(bare)?;
            Ok(report
                .field("kind", "clauses")
                .field("clauses", cnf.len() as u64)
                .cnf(cnf))
        }
        UniformKind::Rank2 => {
            if r != 2 {
                return Err(usage(format!(
                    "the rank2 construction is defined for --r 2, got r={r}"
                )));
            }
            let layout = rank2_group_representation(n, budget).map_err(bare)?;
            Ok(report
                .field("kind", "rank2")
                .field("groups", layout.groups as u64)
                .field("residual", layout.residual as u64)
                .field("blocks", layout.family.len() as u64)
                .family(layout.family))
        }
        UniformKind::Doubling => {
            let cover_path = cover.expect("clap requires --cover for the doubling construction");
            let cover_family: SetFamily = read_parsed(cover_path)?;
            let family = covering_doubling_representation(n, r, &cover_family, budget)
                .map_err(at(cover_path))?;
            Ok(report
                .field("kind", "doubling")
                .field("cover_blocks", cover_family.len() as u64)
                .field("blocks", family.len() as u64)
                .family(family))
        }
    }
}

fn design(command: &DesignCommand, budget: &Budget) -> Result<Report, Failure> {
    match command {
        DesignCommand::Verify { file, kind, target, block } => {
            let family: SetFamily = read_parsed(file)?;
            let block = match block {
                Some(q) => *q,
                None => match family.masks().first() {
                    Some(m) => m.count_ones() as usize,
                    None => {
                        return Err(usage(format!(
                            "{}: cannot infer the block size of an empty family; pass --block",
                            file.display()
                        )))
                    }
                },
            };
            let spec = DesignSpec::new((*kind).into(), family.ground().n(), block, *target)
                .map_err(|e| usage(e.to_string()))?;
            let rep = verify_design(&spec, &family, budget).map_err(at(file))?;
            let mut report = Report::new("design verify")
                .field("kind", spec.kind.to_string())
                .field("n", spec.n as u64)
                .field("q", spec.block as u64)
                .field("r", spec.target as u64)
                .field("blocks", rep.family_size as u64)
                .field("valid", rep.valid);
            if let Some(defect) = &rep.defect {
                report = report.field("defect", defect.to_string());
            }
            Ok(report.verdict(rep.valid))
        }
        DesignCommand::CoveringNumber { n, q, r } => {
            let (value, witness) = covering_number_bruteforce(*n, *q, *r, budget).map_err(bare)?;
            let bound = schonheim_bound(*n, *q, *r).map_err(bare)?;
            let spec = DesignSpec::new(DesignKind::Covering, *n, *q, *r).map_err(bare)?;
            Ok(Report::new("design covering-number")
                .field("n", *n as u64)
                .field("q", *q as u64)
                .field("r", *r as u64)
                .field("covering_number", value as u64)
                .field("schonheim_bound", bound)
                .field("blocks", witness.len() as u64)
                .design(spec.header(), witness))
        }
        DesignCommand::FortHedlund { n } => {
            let value = fort_hedlund(*n).map_err(bare)?;
            Ok(Report::new("design fort-hedlund")
                .field("n", *n as u64)
                .field("q", 3_u64)
                .field("r", 2_u64)
                .field("covering_number", value))
        }
        DesignCommand::Schonheim { n, q, r } => {
            let value = schonheim_bound(*n, *q, *r).map_err(bare)?;
            Ok(Report::new("design schonheim")
                .field("n", *n as u64)
                .field("q", *q as u64)
                .field("r", *r as u64)
                .field("schonheim_bound", value))
        }
        DesignCommand::SteinerBose { n } => {
            let family = steiner_triple_bose(*n).map_err(bare)?;
            let spec = DesignSpec::new(DesignKind::Steiner, *n, 3, 2).map_err(bare)?;
            Ok(Report::new("design steiner-bose")
                .field("n", *n as u64)
                .field("blocks", family.len() as u64)
                .design(spec.header(), family))
        }
    }
}
