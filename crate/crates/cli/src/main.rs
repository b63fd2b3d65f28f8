//! Deterministic tables and verifiers for character orbits, cuspidal
//! tokens, and simple inertial triples.
//!
//! Identical invocations produce byte-identical output: tables are
//! sorted by canonical representative, verification grids by (q, n),
//! and timing fields are emitted only behind `--timings`.
//!
//! Exit codes: 0 success / all pass, 1 verification failure, 2 usage or
//! parameter error, 3 refused resource bound, 4 inconclusive (a timeout
//! hit before any failure was found).

use clap::{Args, Parser, Subcommand, ValueEnum};
use level_zero::arith;
use level_zero::green::cuspidal_tokens_mod_ell;
use level_zero::verify;
use level_zero::{
    beta_twist_level_zero, Budget, CoeffChar, CuspidalToken, EndoClass, Error, FieldSpec,
    OrbitFilter, Result, SimpleInertialTriple, SweepBound, VerificationReport,
};
use serde_json::{json, Value};
use std::time::Duration;

#[derive(Parser)]
#[command(name = "level-zero")]
#[command(about = "Exact combinatorics of character orbits, cuspidal tokens, and inertial triples")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for tables and reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cap on exhaustive sweep sizes; overrides LEVEL_ZERO_SWEEP_BOUND
    #[arg(long, global = true)]
    sweep_bound: Option<u64>,

    /// Emit elapsed-time fields in verification reports
    #[arg(long, global = true, default_value_t = false)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// One compact JSON object per line
    Json,
    /// Tab-separated table with a header row
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    Regular,
    NonRegular,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the Galois orbits of character exponents mod q^n - 1
    Orbits {
        /// Base field cardinality (a prime power)
        #[arg(long)]
        q: u64,
        /// Extension degree
        #[arg(long)]
        n: u64,
        /// Restrict to regular or non-regular orbits
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
    },

    /// Evaluate the elliptic trace of a cuspidal token at a primitive
    /// element, as an exact cyclotomic integer
    Trace {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        /// Exponent of a regular character; its orbit names the token
        #[arg(long)]
        k: u64,
        /// Power of the chosen generator; must be primitive
        #[arg(long)]
        m: u64,
    },

    /// Reduce a cuspidal token mod ell and report the outcome alongside
    /// the field-level census of mod-ell cuspidal tokens
    Reduce(ReduceArgs),

    /// Supercuspidal support of a cuspidal token reduced mod ell
    Support(ReduceArgs),

    /// Operate on serialized simple inertial triples
    #[command(subcommand)]
    Triple(TripleCmd),

    /// Beta-extension twist bookkeeping
    #[command(subcommand)]
    Beta(BetaCmd),

    /// Run a brute-force verifier on one grid point or a (q, n) sweep
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u64,
    /// Exponent of a regular character; its orbit names the token
    #[arg(long)]
    k: u64,
    /// Coefficient characteristic to reduce to; a prime other than p
    #[arg(long)]
    ell: u64,
}

#[derive(Subcommand)]
enum TripleCmd {
    /// Rewrite a triple in its normal form at lift 0
    Canonicalize {
        /// Serialized triple record
        #[arg(long)]
        record: String,
    },
    /// Decide whether two presentations name the same inertial class
    Equal {
        /// Serialized triple record; pass exactly twice
        #[arg(long = "record")]
        records: Vec<String>,
    },
    /// List all equivalent presentations, one per unramified lift
    Fiber {
        #[arg(long)]
        record: String,
    },
    /// Transport a triple across the correspondence (a side flip)
    Rec {
        #[arg(long)]
        record: String,
        /// Transport from the Galois side back to the GL side
        #[arg(long, default_value_t = false)]
        inverse: bool,
    },
    /// Reduce a triple's coefficient characteristic to ell
    Reduce {
        #[arg(long)]
        record: String,
        #[arg(long)]
        ell: u64,
    },
}

#[derive(Args)]
struct DescriptorArgs {
    /// Residue characteristic
    #[arg(long)]
    p: u64,
    /// Base residue cardinality, a power of p
    #[arg(long)]
    q: u64,
    /// Endo-class degree
    #[arg(long)]
    delta: u64,
    /// Ramification index
    #[arg(long)]
    e: u64,
    /// Residue degree
    #[arg(long)]
    f: u64,
    /// Wild exponent
    #[arg(long)]
    r: u64,
}

#[derive(Subcommand)]
enum BetaCmd {
    /// Label of the Galois sign character for an endo-class
    EpsilonGal(DescriptorArgs),
    /// Twist label of the canonical beta-extension
    CanonicalLabel {
        #[command(flatten)]
        descriptor: DescriptorArgs,
        /// The symplectic sign character is the nontrivial quadratic one
        #[arg(long, default_value_t = false)]
        eps1: bool,
    },
    /// Move a level zero orbit under a beta-extension twist
    Twist {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        /// Canonical exponent of the orbit to move
        #[arg(long)]
        k: u64,
        /// Base character label of the twist
        #[arg(long)]
        s: u64,
    },
}

#[derive(Args)]
struct GridArgs {
    /// Base field cardinality for a single grid point
    #[arg(long)]
    q: Option<u64>,
    /// Extension degree for a single grid point
    #[arg(long)]
    n: Option<u64>,
    /// Sweep all prime powers up to this cardinality instead
    #[arg(long)]
    q_max: Option<u64>,
    /// Sweep extension degrees up to this bound instead
    #[arg(long)]
    n_max: Option<u64>,
    /// Skip sweep points whose modulus q^n - 1 exceeds this
    #[arg(long)]
    m_max: Option<u64>,
    /// Per-point wall-clock cap; overruns report as inconclusive
    #[arg(long)]
    timeout_ms: Option<u64>,
}

impl GridArgs {
    /// The (q, n) points this invocation covers, ascending.
    fn points(&self, default_m_max: u64, min_n: u64) -> Result<Vec<(u64, u64)>> {
        match (self.q, self.n, self.q_max, self.n_max) {
            (Some(q), Some(n), None, None) => Ok(vec![(q, n)]),
            (None, None, q_max, n_max) => {
                let q_max = q_max.unwrap_or(9);
                let n_max = n_max.unwrap_or(4);
                let m_max = self.m_max.unwrap_or(default_m_max);
                let mut points = Vec::new();
                for q in arith::prime_powers_up_to(q_max) {
                    for n in min_n..=n_max {
                        match FieldSpec::new(q, n) {
                            Ok(field) if field.m <= m_max => points.push((q, n)),
                            _ => {}
                        }
                    }
                }
                Ok(points)
            }
            _ => Err(Error::Parameter(
                "give both --q and --n, or sweep via --q-max/--n-max only".into(),
            )),
        }
    }

    fn budget(&self) -> Budget {
        match self.timeout_ms {
            Some(ms) => Budget::with_timeout(Duration::from_millis(ms)),
            None => Budget::unlimited(),
        }
    }
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// No nontrivial base character fixes every cuspidal token
    FixingCharacter {
        #[command(flatten)]
        grid: GridArgs,
        /// Coefficient characteristic: 0, or a prime ell; default both 0
        /// and every ell dividing the modulus
        #[arg(long = "char")]
        coeff: Option<u64>,
    },
    /// q^n - 1 exceeds (q^d - 1)^2 for proper divisors d, with the
    /// general divisor-pair landscape reported alongside
    DivisorInequality {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Regular orbits are separated by exact traces at primitive elements
    TraceSeparation {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Every non-regular orbit is the ell-regular part of a regular one
    /// over a degree-a extension, independently rechecked
    RegularCover {
        #[command(flatten)]
        grid: GridArgs,
        /// Degree multiplier of the covering extension
        #[arg(long, default_value_t = 7)]
        a: u64,
    },
    /// Taking ell-regular parts commutes with Frobenius, twists, and
    /// norm inflation
    ReductionCommutation {
        #[command(flatten)]
        grid: GridArgs,
        /// Check a single ell; default every ell dividing the modulus
        #[arg(long)]
        ell: Option<u64>,
    },
    /// Base twists move some regular orbit, preserve orbit sizes, and
    /// preserve ell-regular-part classes
    XiRigidity {
        #[command(flatten)]
        grid: GridArgs,
        /// Primes to check; default every ell dividing the modulus
        #[arg(long = "ell")]
        ells: Vec<u64>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn sweep_bound(cli: &Cli) -> Result<SweepBound> {
    if let Some(value) = cli.sweep_bound {
        return Ok(SweepBound(value));
    }
    match std::env::var("LEVEL_ZERO_SWEEP_BOUND") {
        Ok(text) => text
            .parse()
            .map(SweepBound)
            .map_err(|_| Error::Parameter(format!("bad LEVEL_ZERO_SWEEP_BOUND: {text:?}"))),
        Err(_) => Ok(SweepBound::default()),
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let bound = sweep_bound(cli)?;
    match &cli.command {
        Command::Orbits { q, n, filter } => cmd_orbits(cli, bound, *q, *n, *filter),
        Command::Trace { q, n, k, m } => cmd_trace(cli, bound, *q, *n, *k, *m),
        Command::Reduce(args) => cmd_reduce(cli, bound, args),
        Command::Support(args) => cmd_support(cli, args),
        Command::Triple(cmd) => cmd_triple(cli, cmd),
        Command::Beta(cmd) => cmd_beta(cli, cmd),
        Command::Verify(cmd) => cmd_verify(cli, bound, cmd),
    }
}

/// Prints rows in the selected format; TSV cells hold bare strings and
/// compact JSON for everything else.
fn emit(format: Format, columns: &[&str], rows: &[Value]) {
    match format {
        Format::Json => {
            for row in rows {
                println!("{row}");
            }
        }
        Format::Tsv => {
            println!("{}", columns.join("\t"));
            for row in rows {
                let cells: Vec<String> = columns
                    .iter()
                    .map(|&c| match &row[c] {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                println!("{}", cells.join("\t"));
            }
        }
    }
}

fn cmd_orbits(cli: &Cli, bound: SweepBound, q: u64, n: u64, filter: FilterArg) -> Result<i32> {
    let field = FieldSpec::new(q, n)?;
    let filter = match filter {
        FilterArg::All => OrbitFilter::All,
        FilterArg::Regular => OrbitFilter::Regular,
        FilterArg::NonRegular => OrbitFilter::NonRegular,
    };
    let rows: Vec<Value> = field
        .enumerate_orbits(filter, bound)?
        .iter()
        .map(|orbit| {
            let (d, j) = field.regular_descent(orbit.canonical());
            json!({
                "canonical": orbit.canonical(),
                "members": orbit.members(),
                "size": orbit.size(),
                "regular": orbit.is_regular(),
                "descent_d": d,
                "descent_j": j,
            })
        })
        .collect();
    emit(
        cli.format,
        &["canonical", "members", "size", "regular", "descent_d", "descent_j"],
        &rows,
    );
    Ok(0)
}

fn cmd_trace(cli: &Cli, bound: SweepBound, q: u64, n: u64, k: u64, m: u64) -> Result<i32> {
    let field = FieldSpec::new(q, n)?;
    let token = CuspidalToken::green_rep(field.orbit_of(k))?;
    let value = token.green_trace(m, bound)?;
    let (re, im) = value.approx();
    let row = json!({
        "q": q,
        "n": n,
        "orbit": token.orbit().canonical(),
        "m": m,
        "modulus": value.modulus(),
        "coeffs": value.coeffs(),
        "approx_re": format!("{re:.12e}"),
        "approx_im": format!("{im:.12e}"),
    });
    emit(
        cli.format,
        &["q", "n", "orbit", "m", "modulus", "coeffs", "approx_re", "approx_im"],
        &[row],
    );
    Ok(0)
}

fn support_entries(token: &CuspidalToken, ell: u64) -> Result<(Vec<Value>, String)> {
    let support = token.cuspidal_support_mod_ell(ell)?;
    let entries = support
        .entries()
        .iter()
        .map(|entry| {
            json!({
                "degree": entry.degree,
                "orbit": entry.orbit.members(),
                "multiplicity": entry.multiplicity,
            })
        })
        .collect();
    Ok((entries, support.to_string()))
}

fn cmd_reduce(cli: &Cli, bound: SweepBound, args: &ReduceArgs) -> Result<i32> {
    let field = FieldSpec::new(args.q, args.n)?;
    let token = CuspidalToken::green_rep(field.orbit_of(args.k))?;
    let reduced = token.reduce_mod_ell(args.ell)?;
    let (entries, display) = support_entries(&token, args.ell)?;
    let census = cuspidal_tokens_mod_ell(field, args.ell, bound)?;
    let supercuspidal_tokens = census.iter().filter(|t| t.is_supercuspidal()).count();
    let row = json!({
        "q": args.q,
        "n": args.n,
        "k": args.k,
        "ell": args.ell,
        "orbit": reduced.orbit().members(),
        "canonical": reduced.orbit().canonical(),
        "supercuspidal": reduced.is_supercuspidal(),
        "support": entries,
        "support_display": display,
        "field_cuspidal_tokens": census.len(),
        "field_supercuspidal_tokens": supercuspidal_tokens,
    });
    emit(
        cli.format,
        &[
            "q",
            "n",
            "k",
            "ell",
            "orbit",
            "canonical",
            "supercuspidal",
            "support_display",
            "field_cuspidal_tokens",
            "field_supercuspidal_tokens",
        ],
        &[row],
    );
    Ok(0)
}

fn cmd_support(cli: &Cli, args: &ReduceArgs) -> Result<i32> {
    let field = FieldSpec::new(args.q, args.n)?;
    let token = CuspidalToken::green_rep(field.orbit_of(args.k))?;
    let (entries, display) = support_entries(&token, args.ell)?;
    let row = json!({
        "q": args.q,
        "n": args.n,
        "k": args.k,
        "ell": args.ell,
        "entries": entries,
        "display": display,
        "total_degree": args.n,
    });
    emit(
        cli.format,
        &["q", "n", "k", "ell", "display", "total_degree"],
        &[row],
    );
    Ok(0)
}

fn parse_triple(text: &str) -> Result<SimpleInertialTriple> {
    SimpleInertialTriple::from_json(text)
}

fn emit_triples(cli: &Cli, triples: &[SimpleInertialTriple]) {
    match cli.format {
        Format::Json => {
            for t in triples {
                println!("{}", t.to_json());
            }
        }
        Format::Tsv => {
            let columns = [
                "n", "p", "q", "delta", "e", "f", "r", "lift", "orbit_canonical", "side", "char",
            ];
            let rows: Vec<Value> = triples
                .iter()
                .map(|t| serde_json::to_value(t.to_record()).expect("record serializes"))
                .collect();
            emit(Format::Tsv, &columns, &rows);
        }
    }
}

fn cmd_triple(cli: &Cli, cmd: &TripleCmd) -> Result<i32> {
    match cmd {
        TripleCmd::Canonicalize { record } => {
            let triple = parse_triple(record)?;
            emit_triples(cli, &[triple.canonical_triple()]);
            Ok(0)
        }
        TripleCmd::Equal { records } => {
            if records.len() != 2 {
                return Err(Error::Parameter(
                    "equal requires exactly two --record arguments".into(),
                ));
            }
            let a = parse_triple(&records[0])?;
            let b = parse_triple(&records[1])?;
            let equal = a.triples_equal(&b)?;
            emit(cli.format, &["equal"], &[json!({ "equal": equal })]);
            Ok(0)
        }
        TripleCmd::Fiber { record } => {
            let triple = parse_triple(record)?;
            emit_triples(cli, &triple.equivalent_presentations());
            Ok(0)
        }
        TripleCmd::Rec { record, inverse } => {
            let triple = parse_triple(record)?;
            let out = if *inverse {
                triple.rec_triple_inverse()?
            } else {
                triple.rec_triple()?
            };
            emit_triples(cli, &[out]);
            Ok(0)
        }
        TripleCmd::Reduce { record, ell } => {
            let triple = parse_triple(record)?;
            emit_triples(cli, &[triple.reduce_mod_ell(*ell)?]);
            Ok(0)
        }
    }
}

fn descriptor(args: &DescriptorArgs) -> Result<EndoClass> {
    EndoClass::new(args.p, args.q, args.delta, args.e, args.f, args.r)
}

fn cmd_beta(cli: &Cli, cmd: &BetaCmd) -> Result<i32> {
    match cmd {
        BetaCmd::EpsilonGal(args) => {
            let endo = descriptor(args)?;
            let row = json!({
                "label": endo.epsilon_gal()?,
                "order": endo.residue_order()? - 1,
            });
            emit(cli.format, &["label", "order"], &[row]);
            Ok(0)
        }
        BetaCmd::CanonicalLabel { descriptor: args, eps1 } => {
            let endo = descriptor(args)?;
            let label = endo.canonical_beta_label(*eps1)?;
            let row = json!({
                "twist": label.twist,
                "eps1": label.eps1_flag,
                "order": endo.residue_order()? - 1,
            });
            emit(cli.format, &["twist", "eps1", "order"], &[row]);
            Ok(0)
        }
        BetaCmd::Twist { q, n, k, s } => {
            let field = FieldSpec::new(*q, *n)?;
            let twisted = beta_twist_level_zero(&field.orbit_of(*k), *s)?;
            let row = json!({
                "canonical": twisted.canonical(),
                "members": twisted.members(),
            });
            emit(cli.format, &["canonical", "members"], &[row]);
            Ok(0)
        }
    }
}

/// Primes dividing the modulus other than the characteristic, ascending.
fn modulus_primes(field: FieldSpec) -> Vec<u64> {
    arith::factorize(field.m)
        .into_iter()
        .map(|(l, _)| l)
        .filter(|&l| l != field.p)
        .collect()
}

fn cmd_verify(cli: &Cli, bound: SweepBound, cmd: &VerifyCmd) -> Result<i32> {
    let mut reports: Vec<VerificationReport> = Vec::new();
    match cmd {
        VerifyCmd::FixingCharacter { grid, coeff } => {
            for (q, n) in grid.points(bound.0, 1)? {
                let field = FieldSpec::new(q, n)?;
                let chars: Vec<CoeffChar> = match coeff {
                    Some(label) => vec![CoeffChar::from_label(*label)?],
                    None => std::iter::once(CoeffChar::Zero)
                        .chain(modulus_primes(field).into_iter().map(CoeffChar::Ell))
                        .collect(),
                };
                for c in chars {
                    let budget = grid.budget();
                    reports.push(verify::verify_fixing_character(field, c, bound, &budget)?);
                }
            }
        }
        VerifyCmd::DivisorInequality { grid } => {
            for (q, n) in grid.points(bound.0, 2)? {
                reports.push(verify::verify_divisor_inequality(q, n)?);
            }
        }
        VerifyCmd::TraceSeparation { grid } => {
            for (q, n) in grid.points(bound.0, 1)? {
                let field = FieldSpec::new(q, n)?;
                let budget = grid.budget();
                reports.push(verify::verify_trace_separation(field, bound, &budget)?);
            }
        }
        VerifyCmd::RegularCover { grid, a } => {
            // The covering field has degree a*n, so the default sweep
            // stays within contexts whose own modulus is small.
            for (q, n) in grid.points(256, 1)? {
                let context = FieldSpec::new(q, n)?;
                let budget = grid.budget();
                reports.push(verify::verify_regular_cover(context, *a, bound, &budget)?);
            }
        }
        VerifyCmd::ReductionCommutation { grid, ell } => {
            for (q, n) in grid.points(bound.0, 1)? {
                let field = FieldSpec::new(q, n)?;
                let ells = match ell {
                    Some(l) => vec![*l],
                    None => modulus_primes(field),
                };
                for l in ells {
                    let budget = grid.budget();
                    reports.push(verify::verify_reduction_commutation(field, l, bound, &budget)?);
                }
            }
        }
        VerifyCmd::XiRigidity { grid, ells } => {
            for (q, n) in grid.points(bound.0, 1)? {
                let field = FieldSpec::new(q, n)?;
                let ell_set = if ells.is_empty() {
                    modulus_primes(field)
                } else {
                    ells.clone()
                };
                let budget = grid.budget();
                reports.push(verify::verify_xi_rigidity(field, &ell_set, bound, &budget)?);
            }
        }
    }

    let mut exit = 0;
    for report in &reports {
        exit = match (exit, report.exit_code()) {
            (1, _) | (_, 1) => 1,
            (4, _) | (_, 4) => 4,
            (other, 0) => other,
            (_, code) => code,
        };
    }
    match cli.format {
        Format::Json => {
            for report in reports {
                let report = if cli.timings { report } else { report.without_timing() };
                println!("{}", report.to_json());
            }
        }
        Format::Tsv => {
            println!("{}", VerificationReport::tsv_header());
            for report in reports {
                let report = if cli.timings { report } else { report.without_timing() };
                println!("{}", report.tsv_row());
            }
        }
    }
    Ok(exit)
}
