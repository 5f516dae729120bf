//! Command-line front end.
//!
//! [`run`] parses arguments and returns the captured output and exit code
//! instead of touching the process, so the binary is a three-line wrapper
//! and tests can drive every subcommand in-process.
//!
//! Exit codes: 0 on success, 1 when a verdict is negative (an inequality
//! fails or a check finds a violation), 2 on usage, input or parse errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::budget::{self, BudgetVerdict, Rational, SingularityBudget};
use crate::divisors;
use crate::dynkin::{self, DynkinType};
use crate::error::Error;
use crate::fixtures;
use crate::forest::ProximityForest;
use crate::lattice::{DefinitenessCertificate, Divisor, ExceptionalLattice};
use crate::propcheck::{self, CoordinateCap, SuiteReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult {
            exit_code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn verdict(holds: bool, stdout: String) -> Self {
        CommandResult {
            exit_code: if holds { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: impl std::fmt::Display) -> Self {
        CommandResult {
            exit_code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "blowup", version, about = "Exceptional lattices of iterated point blow-ups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ForestArg {
    /// A `.prox` file, or one of the built-in names chain1, chain3, sat3, pair4.
    forest: String,
}

#[derive(Debug, Args)]
struct CapArg {
    /// Per-coordinate bound for checks over all divisors in a box
    /// (default: derived from the forest, limited to a million divisors).
    #[arg(long)]
    cap: Option<i64>,
}

impl CapArg {
    fn resolve(&self) -> CoordinateCap {
        self.cap
            .map_or_else(CoordinateCap::default, |cap| CoordinateCap::Fixed { cap })
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a forest against the proximity rules.
    Validate(ForestArg),
    /// Gram matrix, basis change, canonical degrees and definiteness certificate.
    Lattice(ForestArg),
    /// Effective classes with given K.D and D^2.
    Enumerate {
        #[command(flatten)]
        forest: ForestArg,
        #[arg(long, allow_negative_numbers = true)]
        kdeg: i64,
        #[arg(long, allow_negative_numbers = true)]
        selfint: i64,
    },
    /// Numerical data and A-D-E type of a divisor.
    Classify {
        #[command(flatten)]
        forest: ForestArg,
        /// Comma-separated coefficients on e_1..e_s.
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
    },
    /// Graphviz dual graph of a reduced divisor (default: all components).
    Dot {
        #[command(flatten)]
        forest: ForestArg,
        #[arg(long, allow_hyphen_values = true)]
        divisor: Option<String>,
    },
    /// Artin's fundamental cycle of a type such as D4, or of a divisor in a forest.
    FundamentalCycle {
        /// A type (A<n>, D<n>, E6, E7, E8) or a forest.
        target: String,
        #[arg(long, allow_hyphen_values = true)]
        divisor: Option<String>,
    },
    /// The index j with D.E_j = 1 and the component of E_j meeting D.
    Theta {
        #[command(flatten)]
        forest: ForestArg,
        /// An A-type configuration (default: every contracted one).
        #[arg(long, allow_hyphen_values = true)]
        divisor: Option<String>,
    },
    /// Maximal families of disjoint A-type configurations and their budgets.
    BudgetFamilies(ForestArg),
    /// Run every structural check on one forest.
    CheckProps {
        #[command(flatten)]
        forest: ForestArg,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Run the checks on every forest with 1..=N points.
    Exhaust {
        #[arg(long)]
        points: usize,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Run the checks on seeded random forests.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        min_points: usize,
        #[arg(long)]
        max_points: usize,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Compare sum of nu over singularities with the Miyaoka-type bounds.
    Miyaoka {
        #[arg(long, allow_negative_numbers = true)]
        chi: i64,
        #[arg(long, allow_negative_numbers = true)]
        k2: i64,
        #[arg(long, allow_negative_numbers = true)]
        blowups: i64,
        /// Singularity types, repeatable: `--sing A1 --sing D4` or `--sing A1 D4`.
        #[arg(long, num_args = 1..)]
        sing: Vec<String>,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandResult {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                CommandResult::ok(rendered)
            };
        }
    };
    match execute(cli.command, cli.format) {
        Ok(result) => result,
        Err(e) => CommandResult::usage(e),
    }
}

fn load_forest(name: &str) -> Result<ProximityForest, Error> {
    let path = Path::new(name);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfiguration(format!("cannot read {name}: {e}")))?;
        return ProximityForest::parse(&text);
    }
    fixtures::by_name(name).ok_or_else(|| {
        Error::InvalidConfiguration(format!(
            "no such file `{name}` and no built-in forest of that name ({})",
            fixtures::NAMES.join(", ")
        ))
    })
}

fn load_lattice(arg: &ForestArg) -> Result<ExceptionalLattice, Error> {
    ExceptionalLattice::new(&load_forest(&arg.forest)?)
}

fn parse_divisor(l: &ExceptionalLattice, text: &str) -> Result<Divisor, Error> {
    let d: Divisor = text.parse()?;
    l.check_len(&d)?;
    Ok(d)
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("output serializes");
            s.push('\n');
            s
        }
        Format::Text => text(),
    }
}

fn matrix_text(out: &mut String, title: &str, m: &[Vec<i64>]) {
    let _ = writeln!(out, "{title}:");
    for row in m {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

#[derive(Serialize)]
struct ValidateOut {
    valid: bool,
    points: usize,
    forest: String,
}

/// What `lattice --format json` prints.
#[derive(Debug, Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct LatticeOut {
    pub s: usize,
    pub gram_e: Vec<Vec<i64>>,
    /// Row `i` is `E_i` in e-coordinates.
    pub basis_change: Vec<Vec<i64>>,
    /// Row `i` is `e_i` in E-coordinates.
    pub inverse_basis_change: Vec<Vec<i64>>,
    pub k_degrees: Vec<i64>,
    pub certificate: DefinitenessCertificate,
}

#[derive(Serialize)]
struct ClassOut {
    divisor: Divisor,
    e_coordinates: Vec<i64>,
    canonical_degree: i64,
    self_intersection: i64,
    arithmetic_genus: Option<i64>,
    ade_type: Option<DynkinType>,
}

fn class_out(l: &ExceptionalLattice, d: &Divisor) -> ClassOut {
    ClassOut {
        divisor: d.clone(),
        e_coordinates: l.to_E_basis(d).expect("length checked"),
        canonical_degree: l.canonical_degree(d).expect("length checked"),
        self_intersection: l.self_intersection(d).expect("length checked"),
        arithmetic_genus: divisors::arithmetic_genus(l, d).ok(),
        ade_type: dynkin::classify_ADE(l, d),
    }
}

fn type_text(t: Option<DynkinType>) -> String {
    t.map_or_else(|| "-".to_string(), |t| t.to_string())
}

#[derive(Serialize)]
struct EnumerateOut {
    kdeg: i64,
    selfint: i64,
    classes: Vec<ClassOut>,
}

#[derive(Serialize)]
struct CycleOut {
    ade_type: Option<DynkinType>,
    /// 1-based components the multiplicities refer to.
    components: Vec<usize>,
    multiplicities: Vec<i64>,
    self_intersection: i64,
}

#[derive(Serialize)]
struct ThetaOut {
    divisor: Divisor,
    ade_type: DynkinType,
    j: usize,
    theta: usize,
}

#[derive(Serialize)]
struct FamiliesOut {
    s: usize,
    families: Vec<dynkin::BudgetFamily>,
    max_budget: usize,
    within_bound: bool,
}

#[derive(Serialize)]
struct MiyaokaOut {
    chi: i64,
    k2: i64,
    blowups: i64,
    sings: Vec<DynkinType>,
    #[serde(flatten)]
    verdict: BudgetVerdict,
}

fn execute(command: Command, format: Format) -> Result<CommandResult, Error> {
    Ok(match command {
        Command::Validate(arg) => {
            let f = load_forest(&arg.forest)?;
            let out = ValidateOut {
                valid: true,
                points: f.len(),
                forest: f.to_string(),
            };
            CommandResult::ok(render(format, &out, || {
                format!("valid: {} points\n", f.len())
            }))
        }

        Command::Lattice(arg) => {
            let l = load_lattice(&arg)?;
            let out = LatticeOut {
                s: l.rank(),
                gram_e: l.gram().clone(),
                basis_change: l.basis_change().clone(),
                inverse_basis_change: l.inverse_basis_change().clone(),
                k_degrees: l.k_degrees().to_vec(),
                certificate: l.certificate().clone(),
            };
            CommandResult::ok(render(format, &out, || {
                let mut t = format!("s = {}\n", out.s);
                matrix_text(&mut t, "gram_e", &out.gram_e);
                let _ = writeln!(t, "total transforms:");
                for (i, row) in out.basis_change.iter().enumerate() {
                    let _ = writeln!(t, "  E{} = ({})", i + 1, Divisor::new(row.clone()));
                }
                let _ = writeln!(t, "k_degrees: {:?}", out.k_degrees);
                let _ = writeln!(
                    t,
                    "leading minors: {:?} (negative definite: {})",
                    out.certificate.leading_minors, out.certificate.negative_definite
                );
                t
            }))
        }

        Command::Enumerate {
            forest,
            kdeg,
            selfint,
        } => {
            let l = load_lattice(&forest)?;
            let found = divisors::enumerate_contracted(&l, kdeg, selfint)?;
            let out = EnumerateOut {
                kdeg,
                selfint,
                classes: found.iter().map(|d| class_out(&l, d)).collect(),
            };
            CommandResult::ok(render(format, &out, || {
                let mut t = format!("{} classes with K.D = {kdeg}, D^2 = {selfint}\n", found.len());
                for c in &out.classes {
                    let _ = writeln!(t, "  ({})  {}", c.divisor, type_text(c.ade_type));
                }
                t
            }))
        }

        Command::Classify { forest, divisor } => {
            let l = load_lattice(&forest)?;
            let d = parse_divisor(&l, &divisor)?;
            let out = class_out(&l, &d);
            CommandResult::ok(render(format, &out, || {
                let genus = out
                    .arithmetic_genus
                    .map_or_else(|| "-".to_string(), |g| g.to_string());
                format!(
                    "divisor ({})\nE-coordinates {:?}\nK.D = {}\nD^2 = {}\np_a = {genus}\ntype {}\n",
                    out.divisor,
                    out.e_coordinates,
                    out.canonical_degree,
                    out.self_intersection,
                    type_text(out.ade_type)
                )
            }))
        }

        Command::Dot { forest, divisor } => {
            let l = load_lattice(&forest)?;
            let d = match divisor {
                Some(text) => parse_divisor(&l, &text)?,
                None => Divisor::reduced_on(l.rank(), 1..=l.rank()),
            };
            let graph = dynkin::dual_graph(&l, &d)?;
            CommandResult::ok(render(format, &graph, || graph.to_dot()))
        }

        Command::FundamentalCycle { target, divisor } => {
            let (ade_type, components, gram) = match target.parse::<DynkinType>() {
                Ok(t) if divisor.is_none() => {
                    (Some(t), (1..=t.rank()).collect(), dynkin::abstract_lattice(t))
                }
                _ => {
                    let l = load_lattice(&ForestArg { forest: target })?;
                    let text = divisor.ok_or_else(|| {
                        Error::InvalidConfiguration("a forest needs --divisor".into())
                    })?;
                    let d = parse_divisor(&l, &text)?;
                    if !d.is_reduced() {
                        return Err(Error::NotReduced);
                    }
                    let support = d.support();
                    let gram = dynkin::restricted_gram(&l, &support);
                    (dynkin::classify_ADE(&l, &d), support, gram)
                }
            };
            let z = dynkin::fundamental_cycle(&gram)?;
            let out = CycleOut {
                ade_type,
                components,
                multiplicities: z.multiplicities,
                self_intersection: z.self_intersection,
            };
            CommandResult::ok(render(format, &out, || {
                let m: Vec<String> = out.multiplicities.iter().map(|x| x.to_string()).collect();
                format!(
                    "type {}\ncomponents {:?}\nmultiplicities {}\nZ^2 = {}\n",
                    type_text(out.ade_type),
                    out.components,
                    m.join(","),
                    out.self_intersection
                )
            }))
        }

        Command::Theta { forest, divisor } => {
            let l = load_lattice(&forest)?;
            let configs = match divisor {
                Some(text) => {
                    let d = parse_divisor(&l, &text)?;
                    let t = dynkin::classify_ADE(&l, &d).ok_or_else(|| {
                        Error::InvalidConfiguration(format!("({d}) has no A-D-E type"))
                    })?;
                    vec![(d, t)]
                }
                None => dynkin::contracted_a_configurations(&l),
            };
            let mut out = Vec::new();
            for (d, t) in configs {
                let th = dynkin::theta(&l, &d)?;
                out.push(ThetaOut {
                    divisor: d,
                    ade_type: t,
                    j: th.j,
                    theta: th.theta,
                });
            }
            CommandResult::ok(render(format, &out, || {
                let mut t = String::new();
                for o in &out {
                    let _ = writeln!(
                        t,
                        "({})  {}  j = {}  theta = e{}",
                        o.divisor, o.ade_type, o.j, o.theta
                    );
                }
                t
            }))
        }

        Command::BudgetFamilies(arg) => {
            let l = load_lattice(&arg)?;
            let families = dynkin::disjoint_a_families(&l);
            let max_budget = families.iter().map(|f| f.budget).max().unwrap_or(0);
            let out = FamiliesOut {
                s: l.rank(),
                within_bound: max_budget <= l.rank(),
                max_budget,
                families,
            };
            CommandResult::verdict(
                out.within_bound,
                render(format, &out, || {
                    let mut t = format!("s = {}\n", out.s);
                    for f in &out.families {
                        let members: Vec<String> = f
                            .members
                            .iter()
                            .zip(&f.types)
                            .map(|(d, ty)| format!("{ty} ({d})"))
                            .collect();
                        let _ = writeln!(t, "  budget {}: {}", f.budget, members.join(" + "));
                    }
                    let _ = writeln!(t, "max budget {} <= {}: {}", out.max_budget, out.s, out.within_bound);
                    t
                }),
            )
        }

        Command::CheckProps { forest, cap } => {
            let f = load_forest(&forest.forest)?;
            let report = propcheck::run_suite(&f, cap.resolve());
            report_result(format, &report)
        }

        Command::Exhaust { points, cap } => {
            let report = propcheck::run_exhaustive(1, points, cap.resolve())?;
            report_result(format, &report)
        }

        Command::Fuzz {
            min_points,
            max_points,
            count,
            seed,
            cap,
        } => {
            let report = propcheck::run_random(min_points, max_points, count, seed, cap.resolve())?;
            report_result(format, &report)
        }

        Command::Miyaoka {
            chi,
            k2,
            blowups,
            sing,
        } => {
            let s = u32::try_from(blowups).map_err(|_| Error::NegativeBlowups(blowups))?;
            let sings = sing
                .iter()
                .map(|t| t.parse::<DynkinType>())
                .collect::<Result<Vec<_>, _>>()?;
            let verdict = budget::check_budget(&SingularityBudget {
                chi,
                k2,
                s,
                sings: sings.clone(),
            });
            let out = MiyaokaOut {
                chi,
                k2,
                blowups,
                sings,
                verdict,
            };
            let v = &out.verdict;
            CommandResult::verdict(
                v.holds,
                render(format, &out, || miyaoka_text(v)),
            )
        }
    })
}

fn miyaoka_text(v: &BudgetVerdict) -> String {
    let line = |name: &str, r: Rational| format!("{name:<22}{r}\n");
    let mut t = String::new();
    t += &line("sum nu", v.sum_nu);
    t += &line("bound (s/3)", v.bound);
    t += &line("bound (Miyaoka)", v.bound_miyaoka);
    t += &line("bound (s/12)", v.bound_megyesi_langer);
    t += &line("slack", v.slack);
    let _ = writeln!(t, "{:<22}{}", "verdict", if v.holds { "holds" } else { "violated" });
    if v.equality_implies_nef {
        t += "equality with the Miyaoka bound: K_X is nef\n";
    }
    t
}

fn report_result(format: Format, report: &SuiteReport) -> CommandResult {
    let text = match format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        Format::Text => report_text(report),
    };
    CommandResult::verdict(report.passed(), text)
}

fn report_text(r: &SuiteReport) -> String {
    let g = &r.generator;
    let mut t = format!(
        "{} run, {} forests, points {}..={}",
        g.mode, g.forests, g.min_points, g.max_points
    );
    if let Some(seed) = g.seed {
        let _ = write!(t, ", seed {seed}");
    }
    let _ = writeln!(t, ", coordinate cap {}", r.max_cap_used);
    for c in &r.checks {
        let status = if c.violations.is_empty() { "ok  " } else { "FAIL" };
        let _ = write!(t, "  {status} {:<36}{:>10} checked", c.id, c.instances_checked);
        if !c.violations.is_empty() {
            let _ = write!(t, ", {} violations", c.violations.len());
        }
        if c.equality_count > 0 {
            let _ = write!(t, ", {} equality cases", c.equality_count);
        }
        t.push('\n');
        if let Some(v) = c.violations.first() {
            let ws: Vec<String> = v.witnesses.iter().map(|d| format!("({d})")).collect();
            let _ = writeln!(t, "       first: {} [{}]", v.detail, ws.join(" "));
            for line in v.forest.lines() {
                let _ = writeln!(t, "         {line}");
            }
        }
    }
    let _ = writeln!(t, "{} violations", r.total_violations());
    t
}
