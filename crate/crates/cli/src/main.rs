//! Batch front end: load presentations, maps and cocycles from fixtures or
//! files, run analyses and verifications, emit machine- and human-readable
//! reports.
//!
//! Exit codes: 0 = pass, 1 = fail (a counterexample was found), 2 = usage or
//! parse error, 3 = unknown verdict.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use shiftlab_core::cover::build_cover;
use shiftlab_core::flow::{
    compare_flow_invariants, invariant_report, suspend, verify_flow_certificate, FlowComparison,
    RoofFunction,
};
use shiftlab_core::io;
use shiftlab_core::iso::{graph_isomorphic, multigraph_isomorphic};
use shiftlab_core::past::classify;
use shiftlab_core::presentation::{fixtures, from_matrix, Presentation};
use shiftlab_core::relations::{
    compile_map, verify_coe, verify_conjugacy, verify_eventual_conjugacy, verify_positive_coe,
    verify_preservation, CompiledMap, PreservationMode, PreservationScope, Verdict,
    VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "shiftlab",
    version,
    about = "shift-space analysis and relation verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct ShiftArg {
    /// Named fixture (even, odd, golden, full2, even3, odd3, E, F, Eprime, Fprime)
    #[arg(long)]
    fixture: Option<String>,
    /// Presentation file (JSON labeled graph)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Matrix file defining a vertex or edge shift
    #[arg(long)]
    matrix: Option<PathBuf>,
}

impl ShiftArg {
    fn load(&self) -> Result<Presentation> {
        match (&self.fixture, &self.input, &self.matrix) {
            (Some(name), None, None) => Ok(fixtures::by_name(name)?),
            (None, Some(path), None) => load_presentation(path),
            (None, None, Some(path)) => {
                let file: io::MatrixFile = read_json(path)?;
                let (m, kind) = io::matrix_from_file(&file)?;
                Ok(from_matrix(&m, kind)?)
            }
            _ => bail!("exactly one of --fixture, --input, --matrix is required"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classification flags and past-structure summary of one shift
    Analyze {
        #[command(flatten)]
        shift: ShiftArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the cover; optionally compare against a reference graph
    Cover {
        #[command(flatten)]
        shift: ShiftArg,
        /// Reference graph; exits nonzero when not isomorphic
        #[arg(long)]
        expect: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a relation between two shifts
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Flow-equivalence invariant reports, optionally compared
    Invariants {
        /// Fixture names (repeatable)
        #[arg(long = "fixture")]
        fixtures: Vec<String>,
        /// Presentation files (repeatable)
        #[arg(long = "input")]
        inputs: Vec<PathBuf>,
        /// Matrix files (repeatable)
        #[arg(long = "matrix")]
        matrices: Vec<PathBuf>,
        /// Compare the first two shifts
        #[arg(long)]
        compare: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the suspension of a shift by a roof function
    Suspend {
        #[command(flatten)]
        shift: ShiftArg,
        /// Roof as a cylinder-function file
        #[arg(long)]
        roof: Option<PathBuf>,
        /// Constant roof value
        #[arg(long)]
        roof_const: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PairArg {
    /// Two fixture names: domain and codomain
    #[arg(long = "fixture-pair", num_args = 2)]
    fixture_pair: Vec<String>,
    /// Two presentation files: domain and codomain
    #[arg(long = "input-pair", num_args = 2)]
    input_pair: Vec<PathBuf>,
}

impl PairArg {
    fn load(&self) -> Result<(Presentation, Presentation)> {
        if self.fixture_pair.len() == 2 && self.input_pair.is_empty() {
            Ok((
                fixtures::by_name(&self.fixture_pair[0])?,
                fixtures::by_name(&self.fixture_pair[1])?,
            ))
        } else if self.input_pair.len() == 2 && self.fixture_pair.is_empty() {
            Ok((
                load_presentation(&self.input_pair[0])?,
                load_presentation(&self.input_pair[1])?,
            ))
        } else {
            bail!("provide either --fixture-pair A B or --input-pair F1 F2")
        }
    }
}

#[derive(Subcommand)]
enum VerifyKind {
    /// One-sided conjugacy of the supplied map pair
    Conjugacy {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        maps: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Eventual conjugacy at one lag or a lag range (e.g. --ell 3 or --ell 0..8)
    Eventual {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        maps: PathBuf,
        #[arg(long, default_value = "0")]
        ell: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Continuous orbit equivalence with the supplied cocycle pairs
    Coe {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        maps: PathBuf,
        #[arg(long)]
        cocycles: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Least-period / stabilizer preservation of a verified orbit equivalence
    Preservation {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        maps: PathBuf,
        #[arg(long)]
        cocycles: PathBuf,
        #[arg(long, value_enum, default_value = "least-period")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "periodic")]
        scope: ScopeArg,
        /// Exhaustiveness bound; omit for twice the product of state counts
        #[arg(long)]
        period_bound: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Positivity of both cocycle differences
    Positivity {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        cocycles: PathBuf,
        #[arg(long, default_value = "6")]
        depth_bound: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Flow-equivalence certificate via conjugate suspensions
    FlowCert {
        #[command(flatten)]
        pair: PairArg,
        /// Roof for the first shift: constant value or cylinder file
        #[arg(long)]
        roof_x: String,
        /// Roof for the second shift
        #[arg(long)]
        roof_y: String,
        /// Maps between the two suspensions
        #[arg(long)]
        maps: PathBuf,
        /// Treat the map as a block code with this lag instead of a conjugacy pair
        #[arg(long)]
        lag: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Stabilizer,
    LeastPeriod,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Periodic,
    EventuallyPeriodic,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_presentation(path: &Path) -> Result<Presentation> {
    let file: io::PresentationFile = read_json(path)?;
    Ok(io::presentation_from_file(&file)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn load_maps(
    path: &Path,
    dom: &Presentation,
    cod: &Presentation,
) -> Result<(CompiledMap, CompiledMap)> {
    let file: io::MapsFile = read_json(path)?;
    if file.format != io::FORMAT {
        bail!("unsupported map file format {:?}", file.format);
    }
    let h = compile_map(&io::map_spec_from_file(&file.h), dom, cod)?;
    let h_inv = compile_map(&io::map_spec_from_file(&file.h_inv), cod, dom)?;
    Ok((h, h_inv))
}

fn report_exit(rep: &VerificationReport) -> ExitCode {
    match rep.verdict {
        Verdict::Pass => ExitCode::from(0),
        Verdict::Fail => ExitCode::from(1),
        Verdict::Unknown => ExitCode::from(3),
    }
}

fn print_report(
    dom_alphabet: &shiftlab_core::presentation::Alphabet,
    rep: &VerificationReport,
    format: Format,
) -> Result<()> {
    let file = io::report_to_file(dom_alphabet, rep);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&file)?),
        Format::Text => {
            println!("verdict: {}", file.verdict);
            for eq in &file.checked_equations {
                println!("checked: {eq}");
            }
            if let Some(ce) = &file.counterexample {
                println!(
                    "counterexample ({}): word={:?} point={}({})^inf",
                    ce.equation, ce.word, ce.point.transient, ce.point.cycle
                );
            }
            for n in &file.notes {
                println!("note: {n}");
            }
        }
    }
    Ok(())
}

fn parse_roof(spec: &str, p: &Presentation) -> Result<RoofFunction> {
    if let Ok(c) = spec.parse::<i64>() {
        return Ok(RoofFunction::constant(p, c)?);
    }
    let file: io::CylFile = read_json(Path::new(spec))?;
    Ok(RoofFunction::new(p, io::cyl_from_file(p, &file)?)?)
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { shift, format, out } => {
            let p = shift.load()?;
            let flags = classify(&p)?;
            let cov = build_cover(&p)?;
            let file = io::flags_to_file(&p.alphabet, &flags);
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&file)?,
                Format::Text => format!(
                    "principal: {}\neffective: {}\ncondition_I: {}\ndense_aperiodic: {}\npast classes: {}",
                    flags.principal,
                    flags.effective,
                    flags.condition_i,
                    flags.dense_aperiodic,
                    cov.vertex_count()
                ),
            };
            emit(&out, &text)?;
            Ok(ExitCode::from(0))
        }
        Command::Cover {
            shift,
            expect,
            format,
            out,
        } => {
            let p = shift.load()?;
            let cov = build_cover(&p)?;
            let mut file = io::presentation_to_file(&cov.graph);
            let annotations: BTreeMap<String, String> = cov
                .vertex_sets
                .iter()
                .enumerate()
                .map(|(q, set)| {
                    let inner: Vec<&str> = set.iter().map(|&v| p.vertices[v].as_str()).collect();
                    let state = shiftlab_core::past::PastState {
                        vertex_set: set.clone(),
                        language_class: q,
                    };
                    let preds: Vec<String> = shiftlab_core::past::predecessor_words(&p, &state, 2)
                        .iter()
                        .map(|w| p.render_word(w))
                        .collect();
                    (
                        cov.graph.vertices[q].clone(),
                        format!(
                            "past state {{{}}}; depth-2 predecessors {{{}}}",
                            inner.join(","),
                            preds.join(",")
                        ),
                    )
                })
                .collect();
            file.annotations = Some(annotations);
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&file)?,
                Format::Text => format!(
                    "cover: {} vertices, {} edges",
                    cov.vertex_count(),
                    cov.graph.edges.len()
                ),
            };
            emit(&out, &text)?;
            if let Some(path) = expect {
                let reference = load_presentation(&path)?;
                // label-preserving first; through the edge shift when the
                // reference carries distinct edge names; structural last
                let ok = graph_isomorphic(&cov.graph, &reference).is_some()
                    || graph_isomorphic(&cov.as_edge_presentation(), &reference).is_some()
                    || multigraph_isomorphic(&cov.graph, &reference).is_some();
                if !ok {
                    eprintln!("cover does not match {}", path.display());
                    return Ok(ExitCode::from(1));
                }
                println!("cover matches {}", path.display());
            }
            Ok(ExitCode::from(0))
        }
        Command::Verify { kind } => run_verify(kind),
        Command::Invariants {
            fixtures: fixture_names,
            inputs,
            matrices,
            compare,
            format,
            out,
        } => {
            let mut shifts: Vec<(String, Presentation)> = Vec::new();
            for name in &fixture_names {
                shifts.push((name.clone(), fixtures::by_name(name)?));
            }
            for path in &inputs {
                shifts.push((path.display().to_string(), load_presentation(path)?));
            }
            for path in &matrices {
                let file: io::MatrixFile = read_json(path)?;
                let (m, kind) = io::matrix_from_file(&file)?;
                shifts.push((path.display().to_string(), from_matrix(&m, kind)?));
            }
            if shifts.is_empty() {
                bail!("no shifts given");
            }
            let mut texts = Vec::new();
            for (name, p) in &shifts {
                let rep = invariant_report(p)?;
                let file = io::invariants_to_file(&p.alphabet, &rep);
                match format {
                    Format::Json => texts.push(serde_json::to_string_pretty(&file)?),
                    Format::Text => texts.push(format!(
                        "{name}: BF factors {:?}, det(I-A) = {}",
                        file.bf_invariant_factors, file.det_i_minus_a
                    )),
                }
            }
            emit(&out, &texts.join("\n"))?;
            if compare {
                if shifts.len() < 2 {
                    bail!("--compare needs two shifts");
                }
                match compare_flow_invariants(&shifts[0].1, &shifts[1].1)? {
                    FlowComparison::Distinguishable { reason } => {
                        println!("distinguishable: {reason}");
                    }
                    FlowComparison::Inconclusive => {
                        println!("inconclusive: invariants agree (no flow equivalence is implied)");
                    }
                }
            }
            Ok(ExitCode::from(0))
        }
        Command::Suspend {
            shift,
            roof,
            roof_const,
            out,
        } => {
            let p = shift.load()?;
            let roof_fn = match (roof, roof_const) {
                (Some(path), None) => {
                    let file: io::CylFile = read_json(&path)?;
                    RoofFunction::new(&p, io::cyl_from_file(&p, &file)?)?
                }
                (None, Some(c)) => RoofFunction::constant(&p, c)?,
                _ => bail!("exactly one of --roof, --roof-const is required"),
            };
            let s = suspend(&p, &roof_fn)?;
            let text = serde_json::to_string_pretty(&io::presentation_to_file(&s.presentation))?;
            emit(&out, &text)?;
            Ok(ExitCode::from(0))
        }
    }
}

fn run_verify(kind: VerifyKind) -> Result<ExitCode> {
    match kind {
        VerifyKind::Conjugacy { pair, maps, format } => {
            let (x, y) = pair.load()?;
            let (h, h_inv) = load_maps(&maps, &x, &y)?;
            let rep = verify_conjugacy(&h, &h_inv)?;
            print_report(&x.alphabet, &rep, format)?;
            Ok(report_exit(&rep))
        }
        VerifyKind::Eventual {
            pair,
            maps,
            ell,
            format,
        } => {
            let (x, y) = pair.load()?;
            let (h, h_inv) = load_maps(&maps, &x, &y)?;
            let range: Vec<usize> = if let Some((a, b)) = ell.split_once("..") {
                (a.parse()?..=b.parse()?).collect()
            } else {
                vec![ell.parse()?]
            };
            let mut worst = Verdict::Pass;
            for l in range {
                let rep = verify_eventual_conjugacy(&h, &h_inv, l)?;
                println!("ell = {l}: {}", io::verdict_str(rep.verdict));
                print_report(&x.alphabet, &rep, format)?;
                if rep.verdict != Verdict::Pass {
                    worst = rep.verdict;
                }
            }
            Ok(match worst {
                Verdict::Pass => ExitCode::from(0),
                Verdict::Fail => ExitCode::from(1),
                Verdict::Unknown => ExitCode::from(3),
            })
        }
        VerifyKind::Coe {
            pair,
            maps,
            cocycles,
            format,
        } => {
            let (x, y) = pair.load()?;
            let (h, h_inv) = load_maps(&maps, &x, &y)?;
            let file: io::CocyclesFile = read_json(&cocycles)?;
            let (cx, cy) = io::cocycles_from_file(&x, &y, &file)?;
            let rep = verify_coe(&h, &h_inv, &cx, &cy)?;
            print_report(&x.alphabet, &rep, format)?;
            Ok(report_exit(&rep))
        }
        VerifyKind::Preservation {
            pair,
            maps,
            cocycles,
            mode,
            scope,
            period_bound,
            format,
        } => {
            let (x, y) = pair.load()?;
            let (h, h_inv) = load_maps(&maps, &x, &y)?;
            let file: io::CocyclesFile = read_json(&cocycles)?;
            let (cx, cy) = io::cocycles_from_file(&x, &y, &file)?;
            let coe = verify_coe(&h, &h_inv, &cx, &cy)?;
            if coe.verdict != Verdict::Pass {
                eprintln!(
                    "the orbit-equivalence equations do not hold; preservation is not applicable"
                );
                print_report(&x.alphabet, &coe, format)?;
                return Ok(ExitCode::from(1));
            }
            let bound =
                period_bound.unwrap_or_else(|| shiftlab_core::relations::default_period_bound(&h));
            let rep = verify_preservation(
                &h,
                &h_inv,
                &cx,
                &cy,
                match mode {
                    ModeArg::Stabilizer => PreservationMode::Stabilizer,
                    ModeArg::LeastPeriod => PreservationMode::LeastPeriod,
                },
                match scope {
                    ScopeArg::Periodic => PreservationScope::Periodic,
                    ScopeArg::EventuallyPeriodic => PreservationScope::EventuallyPeriodic,
                },
                bound,
            )?;
            print_report(&x.alphabet, &rep, format)?;
            Ok(report_exit(&rep))
        }
        VerifyKind::Positivity {
            pair,
            cocycles,
            depth_bound,
            format,
        } => {
            let (x, y) = pair.load()?;
            let file: io::CocyclesFile = read_json(&cocycles)?;
            let (cx, cy) = io::cocycles_from_file(&x, &y, &file)?;
            let rep = verify_positive_coe(&x, &y, &cx, &cy, depth_bound)?;
            print_report(&x.alphabet, &rep, format)?;
            Ok(report_exit(&rep))
        }
        VerifyKind::FlowCert {
            pair,
            roof_x,
            roof_y,
            maps,
            lag,
            format,
        } => {
            let (x, y) = pair.load()?;
            let rx = parse_roof(&roof_x, &x)?;
            let ry = parse_roof(&roof_y, &y)?;
            let sx = suspend(&x, &rx)?;
            let sy = suspend(&y, &ry)?;
            let file: io::MapsFile = read_json(&maps)?;
            let h = compile_map(
                &io::map_spec_from_file(&file.h),
                &sx.presentation,
                &sy.presentation,
            )?;
            let rep = match lag {
                Some(l) => verify_flow_certificate(&sx, &sy, &h, None, l)?,
                None => {
                    let h_inv = compile_map(
                        &io::map_spec_from_file(&file.h_inv),
                        &sy.presentation,
                        &sx.presentation,
                    )?;
                    verify_flow_certificate(&sx, &sy, &h, Some(&h_inv), 0)?
                }
            };
            print_report(&sx.presentation.alphabet, &rep, format)?;
            Ok(report_exit(&rep))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
