//! `qlrc`: build dual-containing LRCs from JSON specs, verify them, print
//! distance bounds and run repair demos.
//!
//! Exit codes: 0 ok, 2 bad input, 3 construction failure, 4 verification
//! failure, 5 resource cap exceeded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qlrc_core::agl::search_mb_subgroups;
use qlrc_core::bounds::{
    bound_report, bound_report_from_params, css_params, distance_bruteforce, sweep_csv, sweep_kappa,
    weight_bound_audit, BoundsError, DEFAULT_BRUTE_FORCE_CAP,
};
use qlrc_core::field::FieldDescriptor;
use qlrc_core::instance::InstanceError;
use qlrc_core::{CodeInstance, Field, InstanceDump, InstanceSpec, Rng};

const EXIT_INPUT: u8 = 2;
const EXIT_CONSTRUCTION: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;
const EXIT_RESOURCE: u8 = 5;
const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "qlrc", version, about = "Dual-containing locally recoverable codes and their CSS parameters")]
struct Cli {
    /// Seed for every randomized check (overrides the spec's seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest number of codewords brute force may enumerate.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Write the main output here instead of stdout (construct: the instance dump).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an instance from a spec and write its dump.
    Construct { spec: PathBuf },
    /// Re-run every check on an instance dump.
    Verify {
        instance: PathBuf,
        /// Random repair trials (also codewords for the weight audit).
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Distance bounds for an instance, a parameter set, or a κ sweep.
    Bounds(BoundsArgs),
    /// Erase symbols of random codewords and repair them locally.
    Repair {
        instance: PathBuf,
        /// Position to erase, or `all` for a per-position table; random if omitted.
        #[arg(long)]
        erase: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// List AGL subgroups {ax + b} of GF(p^m) and the codes they give.
    Search {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
    },
}

#[derive(Args)]
struct BoundsArgs {
    /// Instance dump or spec.
    instance: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    /// Emit the CSV table over all valid κ.
    #[arg(long)]
    sweep_kappa: bool,
    /// Compute the exact distance by enumeration.
    #[arg(long)]
    brute_force: bool,
    /// CSV with columns `kappa,gg_bound`, copied into the sweep table.
    #[arg(long)]
    gg_csv: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Failure {
        Failure::new(EXIT_INPUT, message)
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Failure {
        let code = if e.is_input_error() { EXIT_INPUT } else { EXIT_CONSTRUCTION };
        Failure::new(code, e.to_string())
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Failure {
        let code = match e {
            BoundsError::TooLarge { .. } => EXIT_RESOURCE,
            BoundsError::EmptySweep { .. } | BoundsError::Construct(_) | BoundsError::EllTooSmall => EXIT_INPUT,
            BoundsError::NotAglProvenance => EXIT_INPUT,
            _ => EXIT_VERIFICATION,
        };
        Failure::new(code, e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Accepts either an instance dump or a spec.
fn load_instance(path: &Path) -> Result<(CodeInstance, Option<u64>, Option<u64>), Failure> {
    let text = read(path)?;
    if let Ok(dump) = InstanceDump::from_json(&text) {
        return Ok((dump.to_instance()?, None, None));
    }
    let spec = InstanceSpec::from_json(&text)?;
    Ok((spec.build()?, spec.seed, spec.cap))
}

fn field_name(f: &Field) -> String {
    f.q().to_string()
}

fn summary(inst: &CodeInstance) -> String {
    let q = field_name(inst.field());
    let params = css_params(inst);
    let mut line = format!(
        "[{},{}]_{q} locality {}, dual-containing: OK, qLRC [[{},{}]]_{q}",
        inst.n(),
        inst.k(),
        inst.r(),
        params.n,
        params.kappa
    );
    if let Some(base) = inst.eval_set().base_field() {
        write!(line, " (extended field: GF({q}) over GF({}))", base.q()).expect("write to String");
    }
    line
}

fn construct(cli: &Cli, spec_path: &Path) -> CliResult {
    let spec = InstanceSpec::from_json(&read(spec_path)?)?;
    let inst = spec.build()?;
    let dump = InstanceDump::from_instance(&inst);
    let out = cli.output.clone().unwrap_or_else(|| spec_path.with_extension("instance.json"));
    fs::write(&out, dump.to_json() + "\n")
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", out.display())))?;
    println!("{}", summary(&inst));
    println!("instance written to {}", out.display());
    Ok(())
}

fn verify(cli: &Cli, path: &Path, trials: usize) -> CliResult {
    let dump = InstanceDump::from_json(&read(path)?)?;
    let mut rng = Rng::new(cli.seed.unwrap_or(DEFAULT_SEED));
    let mut checks = dump.verify(&mut rng, trials, trials.max(1))?;
    if dump.subgroup.is_some() {
        if let Ok(inst) = dump.to_instance() {
            let (passed, detail) = match weight_bound_audit(&inst, trials, &mut rng) {
                Ok(rep) => (
                    rep.passed(),
                    if rep.passed() {
                        format!(
                            "{} codewords: min weight {}, |Theta| counts {:?}, spectra checked {}",
                            rep.trials, rep.min_weight, rep.theta_orders, rep.spectral_checks
                        )
                    } else {
                        rep.failures.join("; ")
                    },
                ),
                Err(e) => (false, e.to_string()),
            };
            checks.push(qlrc_core::instance::Check { name: "weight bound audit", passed, detail });
        }
    }
    let mut text = String::new();
    for c in &checks {
        writeln!(text, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail).expect("write to String");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(text, "{}/{} checks passed", checks.len() - failed, checks.len()).expect("write to String");
    emit(cli.output.as_deref(), &text)?;
    if failed > 0 {
        return Err(Failure::new(EXIT_VERIFICATION, format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn read_gg(path: &Path) -> Result<BTreeMap<usize, String>, Failure> {
    let text = read(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().unwrap_or("");
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let (Some(ki), Some(gi)) = (cols.iter().position(|&c| c == "kappa"), cols.iter().position(|&c| c == "gg_bound"))
    else {
        return Err(Failure::input("GG CSV needs a header with columns kappa and gg_bound"));
    };
    let mut out = BTreeMap::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Failure::input(format!("GG CSV line {}: {line:?}", lineno + 2));
        let kappa: usize = fields.get(ki).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let value = fields.get(gi).ok_or_else(bad)?;
        value.parse::<f64>().map_err(|_| bad())?;
        out.insert(kappa, value.to_string());
    }
    Ok(out)
}

fn bounds(cli: &Cli, args: &BoundsArgs) -> CliResult {
    if let Some(path) = &args.instance {
        let (inst, _, spec_cap) = load_instance(path)?;
        let delta_exact = if args.brute_force {
            let cap = cli.cap.or(spec_cap).unwrap_or(DEFAULT_BRUTE_FORCE_CAP);
            Some(distance_bruteforce(&inst, cap)?)
        } else {
            None
        };
        let report = bound_report(&inst, delta_exact)?;
        emit(cli.output.as_deref(), &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"))?;
        if let Some(d) = delta_exact {
            if d < report.degree_bound.max(report.agl_bound_int) {
                return Err(Failure::new(
                    EXIT_VERIFICATION,
                    format!("exact distance {d} is below a lower bound; the bounds are unsound here"),
                ));
            }
        }
        return Ok(());
    }
    let (Some(n), Some(r), Some(q)) = (args.n, args.r, args.q) else {
        return Err(Failure::input("give an instance file, or --n, --r and --q"));
    };
    if args.sweep_kappa {
        let rows = sweep_kappa(n, r, q)?;
        let gg = args.gg_csv.as_deref().map(read_gg).transpose()?;
        return emit(cli.output.as_deref(), &sweep_csv(&rows, gg.as_ref()));
    }
    let Some(k) = args.k else {
        return Err(Failure::input("give --k for a single parameter set, or --sweep-kappa"));
    };
    if args.brute_force {
        return Err(Failure::input("--brute-force needs an instance file"));
    }
    if n as u64 > q {
        return Err(Failure::input(format!("n = {n} exceeds q = {q}")));
    }
    let report = bound_report_from_params(n, k, r, q, None)?;
    emit(cli.output.as_deref(), &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"))
}

fn repair(cli: &Cli, path: &Path, erase: Option<&str>, trials: usize) -> CliResult {
    let (inst, spec_seed, _) = load_instance(path)?;
    let n = inst.n();
    let mut rng = Rng::new(cli.seed.or(spec_seed).unwrap_or(DEFAULT_SEED));
    let positions: Vec<usize> = match erase {
        Some("all") => (0..n).collect(),
        Some(text) => {
            let z: usize =
                text.parse().map_err(|_| Failure::input(format!("--erase expects an index or `all`, got {text:?}")))?;
            if z >= n {
                return Err(Failure::input(format!("erase index {z} is out of range for n = {n}")));
            }
            vec![z]
        }
        None => Vec::new(),
    };
    let run = |z: usize, rng: &mut Rng| -> Result<(bool, usize), Failure> {
        let word = inst.encode_values(&inst.random_message(rng)).expect("message length is k");
        let mut received: Vec<Option<u32>> = word.iter().copied().map(Some).collect();
        received[z] = None;
        let (value, reads) =
            inst.repair_values(&received, z).map_err(|e| Failure::new(EXIT_VERIFICATION, e.to_string()))?;
        Ok((value == word[z], reads.len()))
    };
    let mut text = String::new();
    let mut exact_total = 0;
    let mut total = 0;
    let mut reads_seen = std::collections::BTreeSet::new();
    if erase == Some("all") {
        writeln!(text, "position,block,trials,exact,reads").expect("write to String");
        for &z in &positions {
            let mut exact = 0;
            let mut reads = 0;
            for _ in 0..trials {
                let (ok, r) = run(z, &mut rng)?;
                exact += usize::from(ok);
                reads = r;
                reads_seen.insert(r);
            }
            writeln!(text, "{z},{},{trials},{exact},{reads}", inst.eval_set().block_of(z)).expect("write to String");
            exact_total += exact;
            total += trials;
        }
    } else {
        for _ in 0..trials {
            let z = positions.first().copied().unwrap_or_else(|| rng.index(n));
            let (ok, r) = run(z, &mut rng)?;
            exact_total += usize::from(ok);
            total += 1;
            reads_seen.insert(r);
        }
    }
    let reads = reads_seen.iter().map(usize::to_string).collect::<Vec<_>>().join("/");
    writeln!(text, "{exact_total}/{total} repairs exact, {reads} reads each").expect("write to String");
    emit(cli.output.as_deref(), &text)?;
    if exact_total != total || reads_seen.iter().any(|&r| r != inst.r()) {
        return Err(Failure::new(EXIT_VERIFICATION, "some repairs were wrong or read the wrong number of symbols"));
    }
    Ok(())
}

fn search(cli: &Cli, p: u64, m: u32) -> CliResult {
    let field =
        Field::from_descriptor(&FieldDescriptor { p, m, modulus: None }).map_err(|e| Failure::input(e.to_string()))?;
    let mut text = String::from("subfield_degree,m_order,b_dimension,group_order,locality,regular_orbits,max_length\n");
    for e in search_mb_subgroups(&field) {
        writeln!(
            text,
            "{},{},{},{},{},{},{}",
            e.subfield_degree,
            e.m_order,
            e.b_dimension,
            e.group_order,
            e.locality(),
            e.regular_orbits,
            e.max_length()
        )
        .expect("write to String");
    }
    emit(cli.output.as_deref(), &text)
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Construct { spec } => construct(cli, spec),
        Command::Verify { instance, trials } => verify(cli, instance, *trials),
        Command::Bounds(args) => bounds(cli, args),
        Command::Repair { instance, erase, trials } => repair(cli, instance, erase.as_deref(), *trials),
        Command::Search { p, m } => search(cli, *p, *m),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
