use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use liecontract::catalog::{verify_catalog, Catalog};
use liecontract::contraction::{
    equation_orbits, generate_identities, generate_system, parse_bindings, Context, Continuity,
    ContractionMatrix, Equivalence,
};
use liecontract::cyclo::Cyclo;
use liecontract::identify::{decompose, fingerprint_with, split_central, FingerprintOptions};
use liecontract::liecore::LieAlgebra;
use liecontract::linalg::Matrix;
use liecontract::symmetry::{enumerate_group, permutations};

#[derive(Parser, Debug)]
#[command(name = "liecontract", version, about = "Graded contractions of the Pauli-graded Lie algebra sl(3,C)")]
struct Cli {
    /// Order of the grading group Z_n x Z_n.
    #[arg(long, global = true, default_value_t = 3)]
    n: u32,
    /// Write the output to a file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Print full records instead of summaries.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the contraction system grouped by orbit.
    GenSystem,
    /// Print the higher-order identities grouped by orbit.
    GenIdentities,
    /// Check that a matrix solves the contraction system.
    Verify(Input),
    /// Decide whether two solutions are equivalent.
    Equiv(Input),
    /// Classify a solution as a continuous or discrete contraction.
    Classify(Input),
    /// Print the brackets of the contracted algebra.
    Contract(Input),
    /// Split, decompose and fingerprint a contracted algebra or a bracket table.
    Identify {
        #[command(flatten)]
        input: Input,
        /// Bracket table `[e1,e2] = e3` instead of a solution.
        #[arg(long, conflicts_with_all = ["solution", "file"], requires = "dim")]
        brackets: Option<PathBuf>,
        /// Dimension of the bracket table.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify every catalog entry, family and relation and print a summary.
    CatalogVerify(RunArgs),
    /// Verify the catalog and print the full report.
    Report(RunArgs),
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Catalog id such as eps_15_7 or fam_2_1; repeat for `equiv`.
    #[arg(long)]
    solution: Vec<String>,
    /// Solution file: an 8x8 matrix, optionally preceded by `params=a,b`.
    #[arg(long)]
    file: Vec<PathBuf>,
    /// Parameter binding such as a=2/3; unbound parameters default to 2, 3, 5, ...
    #[arg(short = 'p', value_name = "NAME=VALUE")]
    bind: Vec<String>,
    /// Accept zero parameter values (the result must still be a solution).
    #[arg(long)]
    allow_zero: bool,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
    /// Include per-entry wall-clock times (the report is then not reproducible).
    #[arg(long)]
    timing: bool,
}

/// Exit status with a message for stderr.
struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

/// Output text and whether every check passed.
type Outcome = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                // A closed pipe (for example `| head`) is not an error.
                let _ = std::io::stdout().lock().write_all(text.as_bytes());
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if !matches!(cli.command, Command::GenSystem) && cli.n != 3 {
        return Err(usage(format!("only --n 3 is supported by this subcommand (got {})", cli.n)));
    }
    match &cli.command {
        Command::GenSystem => gen_system(cli.n),
        Command::GenIdentities => Ok((gen_identities(), true)),
        Command::Verify(input) => verify(input),
        Command::Equiv(input) => equiv(input),
        Command::Classify(input) => classify(input),
        Command::Contract(input) => {
            let (_, m, header) = single(input)?;
            let alg = LieAlgebra::pauli(3).and_then(|l| l.apply_contraction(&m)).map_err(|e| usage(e.to_string()))?;
            Ok((format!("{header}{}", alg.dump()), true))
        }
        Command::Identify { input, brackets, dim, seed } => identify(input, brackets.as_ref(), *dim, *seed),
        Command::CatalogVerify(args) => catalog_run(args, false, cli.verbose > 0),
        Command::Report(args) => catalog_run(args, true, false),
    }
}

fn gen_system(n: u32) -> Outcome {
    let system = generate_system(n).map_err(|e| usage(e.to_string()))?;
    let perms = permutations(&enumerate_group(n, true));
    let orbits = equation_orbits(&system, &perms);
    let mut s = String::new();
    let _ = writeln!(s, "# n={n}: {} equations in {} orbits under SL(2,Z{n})", system.len(), orbits.len());
    for (k, orbit) in orbits.iter().enumerate() {
        let _ = writeln!(s, "orbit {} ({} equations)", k + 1, orbit.len());
        for &i in orbit {
            let _ = writeln!(s, "  {}: {}", system[i].triple_label(), system[i]);
        }
    }
    Ok((s, true))
}

fn gen_identities() -> String {
    let ids = generate_identities();
    let mut s = String::new();
    let orbits = ids.iter().map(|r| r.orbit).max().map_or(0, |m| m + 1);
    let _ = writeln!(s, "# {} identities in {orbits} orbits", ids.len());
    for k in 0..orbits {
        let members: Vec<_> = ids.iter().filter(|r| r.orbit == k).collect();
        let _ = writeln!(s, "orbit {} ({} identities, order {})", k + 1, members.len(), members[0].order);
        for r in members {
            let _ = writeln!(s, "  {r}");
        }
    }
    s
}

/// Loads the catalog, honouring LIECONTRACT_DATA.
fn catalog() -> Result<Catalog, Failure> {
    Catalog::from_env().map_err(|e| usage(e.to_string()))
}

/// Symbolic matrices named by the input, with display names.
fn targets(input: &Input) -> Result<Vec<(String, ContractionMatrix)>, Failure> {
    let mut out = Vec::new();
    if !input.solution.is_empty() {
        let cat = catalog()?;
        for id in &input.solution {
            let e = cat.entry(id).ok_or_else(|| usage(format!("unknown catalog id {id:?}")))?;
            out.push((id.clone(), e.matrix.clone()));
        }
    }
    for path in &input.file {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        out.push((path.display().to_string(), parse_solution_file(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?));
    }
    Ok(out)
}

fn parse_solution_file(text: &str) -> Result<ContractionMatrix, String> {
    let mut params: Option<Vec<char>> = None;
    let mut body = String::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(p) = line.strip_prefix("params=") {
            params = Some(p.split(',').filter_map(|s| s.trim().chars().next()).collect());
        } else if !line.contains('=') {
            body.push_str(line);
            body.push('\n');
        }
    }
    let m = ContractionMatrix::parse(&body).map_err(|e| e.to_string())?;
    match params {
        Some(p) => m.with_params(&p).map_err(|e| e.to_string()),
        None => Ok(m),
    }
}

fn bindings(input: &Input, m: &ContractionMatrix) -> Result<HashMap<char, Cyclo>, Failure> {
    let mut b = m.default_bindings();
    for text in &input.bind {
        let given = parse_bindings(text).map_err(usage)?;
        for (k, v) in given {
            if v.is_zero() && !input.allow_zero {
                return Err(usage(format!("parameter {k} bound to zero; pass --allow-zero to evaluate a boundary point")));
            }
            b.insert(k, v);
        }
    }
    Ok(b)
}

fn render_bindings(b: &HashMap<char, Cyclo>) -> String {
    let mut v: Vec<_> = b.iter().collect();
    v.sort_by_key(|(k, _)| **k);
    v.iter().map(|(k, x)| format!("{k}={x}")).collect::<Vec<_>>().join(",")
}

/// Instantiated matrices with a header naming each input and its bindings.
fn instantiate(input: &Input) -> Result<Vec<(String, Matrix, String)>, Failure> {
    targets(input)?
        .into_iter()
        .map(|(name, sym)| {
            let b = bindings(input, &sym)?;
            let m = if input.allow_zero { sym.instantiate_boundary(&b) } else { sym.instantiate(&b) };
            let m = m.map_err(|e| Failure { code: 1, msg: format!("{name}: {e}") })?;
            let mut header = format!("# {name}\n");
            if !sym.params().is_empty() {
                header.push_str(&format!("# bindings: {}\n", render_bindings(&b)));
            }
            Ok((name, m, header))
        })
        .collect()
}

fn single(input: &Input) -> Result<(String, Matrix, String), Failure> {
    let mut v = instantiate(input)?;
    if v.len() != 1 {
        return Err(usage(format!("expected one --solution or --file, found {}", v.len())));
    }
    Ok(v.pop().expect("one input"))
}

fn verify(input: &Input) -> Outcome {
    let (_, m, header) = single(input)?;
    let ctx = Context::new();
    Ok(match ctx.check(&m) {
        Ok(()) => (format!("{header}solution\n"), true),
        Err(e) => (format!("{header}not a solution: {e}\n"), false),
    })
}

fn equiv(input: &Input) -> Outcome {
    let v = instantiate(input)?;
    if v.len() != 2 {
        return Err(usage(format!("equiv takes two inputs, found {}", v.len())));
    }
    let ctx = Context::new();
    let mut s = format!("{}{}", v[0].2, v[1].2);
    match ctx.equivalent(&v[0].1, &v[1].1).map_err(|e| Failure { code: 1, msg: e.to_string() })? {
        Equivalence::Equivalent { element: g, scalings } => {
            let _ = writeln!(s, "equivalent");
            let _ = writeln!(s, "element: ({},{};{},{})", g.a, g.b, g.c, g.d);
            if let Some(a) = scalings {
                let a: Vec<String> = a.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "scalings: {}", a.join(" "));
            }
        }
        Equivalence::NotEquivalent => {
            let _ = writeln!(s, "not equivalent");
        }
    }
    Ok((s, true))
}

fn classify(input: &Input) -> Outcome {
    let (_, m, header) = single(input)?;
    let ctx = Context::new();
    let verdict = ctx.classify(&m).map_err(|e| Failure { code: 1, msg: e.to_string() })?;
    let mut s = header;
    let ok = match &verdict {
        Continuity::Continuous { weights } => {
            let w: Vec<String> = weights.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "continuous");
            let _ = writeln!(s, "weights: {}", w.join(" "));
            true
        }
        Continuity::Discrete { identity } => {
            let _ = writeln!(s, "discrete");
            let _ = writeln!(s, "violated identity: {identity}");
            true
        }
        Continuity::Unknown { reason } => {
            let _ = writeln!(s, "unknown");
            let _ = writeln!(s, "reason: {reason}");
            false
        }
    };
    Ok((s, ok))
}

fn identify(input: &Input, brackets: Option<&PathBuf>, dim: Option<usize>, seed: u64) -> Outcome {
    let (alg, mut s) = match brackets {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let dim = dim.expect("clap requires --dim");
            let alg = LieAlgebra::parse_brackets(3, dim, &text, &HashMap::new())
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            if !alg.is_lie() {
                return Err(Failure { code: 1, msg: format!("{}: brackets violate the Jacobi identity", path.display()) });
            }
            (alg, format!("# {}\n", path.display()))
        }
        None => {
            let (_, m, header) = single(input)?;
            let alg = LieAlgebra::pauli(3).and_then(|l| l.apply_contraction(&m)).map_err(|e| usage(e.to_string()))?;
            (alg, header)
        }
    };
    let opts = FingerprintOptions { seed, ..FingerprintOptions::default() };
    let split = split_central(&alg);
    let dec = decompose(&split.core);
    let _ = writeln!(s, "dim: {}", alg.dim());
    let _ = writeln!(s, "central summand: {}", split.abelian_dim);
    for (k, part) in dec.parts.iter().enumerate() {
        let _ = writeln!(s, "part {}: {}", k + 1, fingerprint_with(part, &opts));
    }
    if dec.undetermined {
        let _ = writeln!(s, "decomposition: undetermined");
    }
    Ok((s, !dec.undetermined))
}

fn catalog_run(args: &RunArgs, full: bool, verbose: bool) -> Outcome {
    if let Some(j) = args.jobs {
        if j == 0 {
            return Err(usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(|e| usage(e.to_string()))?;
    }
    let cat = catalog()?;
    let ctx = Context::new();
    let opts = FingerprintOptions { seed: args.seed, ..FingerprintOptions::default() };
    let report = verify_catalog(&cat, &ctx, args.seed, &opts);
    let text = if full || verbose {
        report.render(args.timing)
    } else {
        let mut s = String::new();
        for e in report.entries.iter().filter(|e| !e.passed()) {
            s.push_str(&e.render(args.timing));
        }
        s.push_str(&report.summary());
        s
    };
    Ok((text, report.passed()))
}
