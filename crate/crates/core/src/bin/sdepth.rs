use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sdepth::error::{Error, Result};
use sdepth::field::Field;
use sdepth::hilbert::{hdepth_with_partition, truncated_series, validate_decomposition};
use sdepth::io::{self, Certificate};
use sdepth::polytope::{self, LinearSystem};
use sdepth::stanley::{
    build_matrices, check_family, extract_witness, sdepth_with_progress, CheckMode, CheckOptions,
    SdepthOptions, Verdict, WitnessOptions,
};
use sdepth::{GradedModule, HilbertDecomposition, MultiDegree};

/// Hilbert depth and Stanley depth of multigraded modules, in exact arithmetic.
///
/// Exit status: 0 on success, 1 when a decomposition is not induced by a Stanley
/// decomposition (check, certify, import-solution) or a certificate is rejected
/// (verify-cert), 2 on errors.
#[derive(Parser)]
#[command(name = "sdepth", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Coefficient field, overriding the module file: Q, F2, F5, ...
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    /// Bound g of the degree box, overriding the module file, e.g. 1,1
    #[arg(long, global = true, value_parser = parse_degree)]
    g: Option<MultiDegree>,
    /// How to decide whether a decomposition is induced
    #[arg(long, global = true, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Worker threads
    #[arg(long, global = true, env = "SDEPTH_THREADS", default_value_t = 1)]
    threads: usize,
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Symbolic,
    Unified,
    Transversal,
    Randomized,
}

impl From<Mode> for CheckMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Auto => CheckMode::Auto,
            Mode::Symbolic => CheckMode::Symbolic,
            Mode::Unified => CheckMode::Unified,
            Mode::Transversal => CheckMode::Transversal,
            Mode::Randomized => CheckMode::Randomized,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Ring, bound g and whether the module is g-determined
    Info { module: PathBuf },
    /// The Hilbert series truncated to [0, g]
    Hseries { module: PathBuf },
    /// Hilbert depth and a Hilbert partition attaining it
    Hdepth { module: PathBuf },
    /// Stanley depth, writing a certificate for the decomposition found
    Sdepth {
        module: PathBuf,
        /// Certificate path [default: <module stem>.cert.json next to the module]
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Is a decomposition induced by a Stanley decomposition?
    Check {
        module: PathBuf,
        decomposition: PathBuf,
    },
    /// Find a witness for a decomposition and write a certificate
    Certify {
        module: PathBuf,
        decomposition: PathBuf,
        /// Certificate path [default: <decomposition stem>.cert.json]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate from scratch
    VerifyCert {
        module: PathBuf,
        certificate: PathBuf,
    },
    /// Write the lattice-point formulation as .sip text or an LP file
    ExportPolytope {
        module: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
        /// Output path; the format follows the extension (.lp or .sip) [default: stdout, .sip]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Only the Hilbert equalities
        #[arg(long)]
        hilbert_only: bool,
    },
    /// Read a solver solution (name<TAB>value lines) back as a decomposition
    ImportSolution {
        module: PathBuf,
        solution: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
        /// Where to write the decomposition [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SystemArgs {
    /// Keep only summands K[Z](-b) with |Z| >= s
    #[arg(long, default_value_t = 0)]
    depth: usize,
    /// Largest shift set J in the inequalities: an integer or inf
    #[arg(long, default_value = "inf", value_parser = parse_subset)]
    max_subset: Subset,
}

#[derive(Clone, Copy)]
struct Subset(Option<usize>);

fn parse_field(s: &str) -> std::result::Result<Field, String> {
    Field::from_name(s).map_err(|e| e.to_string())
}

fn parse_degree(s: &str) -> std::result::Result<MultiDegree, String> {
    let inner = s
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']']);
    inner
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u32>()
                .map_err(|_| format!("{s:?} is not a degree like 1,1"))
        })
        .collect::<std::result::Result<Vec<u32>, String>>()
        .map(MultiDegree::new)
}

fn parse_subset(s: &str) -> std::result::Result<Subset, String> {
    if s == "inf" {
        return Ok(Subset(None));
    }
    s.parse()
        .map(|k| Subset(Some(k)))
        .map_err(|_| format!("{s:?} is neither an integer nor inf"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads.max(1))
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path, g: &Global) -> Result<GradedModule> {
    io::load_module(path, g.field, g.g.clone())
}

fn check_options(g: &Global) -> CheckOptions {
    CheckOptions {
        seed: g.seed,
        ..CheckOptions::default()
    }
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{ext}"))
}

fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    match &cli.command {
        Command::Info { module } => {
            let gm = load(module, g)?;
            let p = gm.presentation();
            println!("ring: n = {}, field = {}", gm.n(), gm.field());
            println!(
                "generators: {}, relations: {}",
                p.generators().len(),
                p.relations().len()
            );
            println!("g: {}", gm.g());
            println!(
                "total dimension on [0,g]: {}",
                truncated_series(&gm).total()
            );
            match gm.verify_g_determined() {
                None => println!("g-determined: yes"),
                Some(v) => println!("g-determined: no ({v})"),
            }
        }
        Command::Hseries { module } => {
            let gm = load(module, g)?;
            println!("{}", truncated_series(&gm));
        }
        Command::Hdepth { module } => {
            let gm = load(module, g)?;
            let (depth, partition) = hdepth_with_partition(&gm);
            println!("hdepth = {depth}");
            println!("partition: {partition}");
        }
        Command::Sdepth { module, cert } => {
            let gm = load(module, g)?;
            let opts = SdepthOptions {
                mode: Some(g.mode.into()),
                check: check_options(g),
                witness: WitnessOptions {
                    seed: g.seed,
                    ..WitnessOptions::default()
                },
            };
            let res = sdepth_with_progress(&gm, &opts, |p| {
                eprintln!(
                    "searching depth {} ({} decompositions checked)",
                    p.depth, p.checked
                );
            })?;
            let path = cert
                .clone()
                .unwrap_or_else(|| with_extension(module, "cert.json"));
            io::write_file(
                &path,
                &Certificate::new(&gm, &res.decomposition, &res.witness).to_json(),
            )?;
            println!("sdepth = {}", res.depth);
            println!("decomposition: {}", res.decomposition);
            println!("certificate: {}", path.display());
        }
        Command::Check {
            module,
            decomposition,
        } => {
            let gm = load(module, g)?;
            let d = io::load_decomposition(decomposition, &gm)?;
            let fam = build_matrices(&gm, &d)?;
            let report = check_family(&fam, g.mode.into(), &check_options(g))?;
            println!("verdict: {}", report.verdict);
            println!("mode: {}", report.mode);
            if let Some(a) = &report.failing_degree {
                println!("failing degree: {a}");
            }
            if let Some(z) = report.reduced_product_zero {
                println!("reduced product zero: {z}");
            }
            if !report.note.is_empty() {
                println!("note: {}", report.note);
            }
            return Ok(if report.verdict == Verdict::Induced {
                0
            } else {
                1
            });
        }
        Command::Certify {
            module,
            decomposition,
            out,
        } => {
            let gm = load(module, g)?;
            let d = io::load_decomposition(decomposition, &gm)?;
            let fam = build_matrices(&gm, &d)?;
            let report = check_family(&fam, g.mode.into(), &check_options(g))?;
            if report.verdict == Verdict::NotInduced {
                println!("verdict: not_induced");
                if let Some(a) = &report.failing_degree {
                    println!("failing degree: {a}");
                }
                return Ok(1);
            }
            let y = match report.witness {
                Some(y) => y,
                None => extract_witness(
                    &fam,
                    &WitnessOptions {
                        seed: g.seed,
                        ..WitnessOptions::default()
                    },
                )?,
            };
            let path = out
                .clone()
                .unwrap_or_else(|| with_extension(decomposition, "cert.json"));
            io::write_file(&path, &Certificate::new(&gm, &d, &y).to_json())?;
            println!("verdict: induced");
            println!("certificate: {}", path.display());
        }
        Command::VerifyCert {
            module,
            certificate,
        } => {
            let gm = load(module, g)?;
            let file = certificate.display().to_string();
            let cert = Certificate::parse(&io::read_file(certificate)?, &file)?;
            let (d, y) = cert.decode(&gm, &file)?;
            return Ok(match verify(&gm, &d, &y)? {
                Ok(()) => {
                    println!("certificate valid: depth {}", d.depth());
                    0
                }
                Err(why) => {
                    println!("certificate rejected: {why}");
                    1
                }
            });
        }
        Command::ExportPolytope {
            module,
            system,
            out,
            hilbert_only,
        } => {
            let gm = load(module, g)?;
            let sys = if *hilbert_only {
                polytope::build_hilbert_system(&gm, system.depth)
            } else {
                polytope::build_stanley_inequalities(&gm, system.max_subset.0, system.depth)?
            };
            let lp = out
                .as_ref()
                .is_some_and(|p| p.extension().is_some_and(|e| e == "lp"));
            let text = if lp {
                polytope::to_lp(&sys)
            } else {
                polytope::to_sip(&sys)
            };
            match out {
                Some(p) => {
                    io::write_file(p, &text)?;
                    eprintln!(
                        "{} variables, {} equalities, {} inequalities written to {}",
                        sys.variables.len(),
                        sys.equalities.len(),
                        sys.inequalities.len(),
                        p.display()
                    );
                }
                None => print!("{text}"),
            }
        }
        Command::ImportSolution {
            module,
            solution,
            system,
            out,
        } => {
            let gm = load(module, g)?;
            let sys: LinearSystem =
                polytope::build_stanley_inequalities(&gm, system.max_subset.0, system.depth)?;
            let u = polytope::parse_solution(
                &sys,
                &io::read_file(solution)?,
                &solution.display().to_string(),
            )?;
            let d = sys.u_to_decomposition(&u);
            validate_decomposition(&d, &gm).map_err(Error::from)?;
            if let Err(v) = sys.check(&u) {
                eprintln!("warning: {v}");
            }
            let text = io::decomposition_json(&d);
            match out {
                Some(p) => io::write_file(p, &text)?,
                None => print!("{text}"),
            }
            let report = check_family(&build_matrices(&gm, &d)?, g.mode.into(), &check_options(g))?;
            eprintln!(
                "depth {}, {} summands, verdict: {}",
                d.depth(),
                d.len(),
                report.verdict
            );
            return Ok(if report.verdict == Verdict::Induced {
                0
            } else {
                1
            });
        }
    }
    Ok(0)
}

/// `Err` carries a human-readable reason the certificate fails.
fn verify(
    gm: &GradedModule,
    d: &HilbertDecomposition,
    y: &sdepth::stanley::Assignment,
) -> Result<std::result::Result<(), String>> {
    if let Err(defect) = validate_decomposition(d, gm) {
        return Ok(Err(defect.to_string()));
    }
    let fam = build_matrices(gm, d)?;
    let missing: Vec<String> = fam
        .variables()
        .into_iter()
        .filter(|v| !y.contains_key(v))
        .map(|v| v.to_string())
        .collect();
    if !missing.is_empty() {
        return Ok(Err(format!("witness lacks {}", missing.join(", "))));
    }
    Ok(match fam.verify(y)? {
        None => Ok(()),
        Some(a) => Err(format!("A_{a} is singular")),
    })
}
