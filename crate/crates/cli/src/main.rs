//! `tltl`: batch front end for the tltl library.
//!
//! Exit codes: 0 success or true, 1 false or counterexample found, 2 usage
//! or input error, 3 evaluation budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tltl::arith::{self, parse_arith, print_arith, Arith, PrintOptions};
use tltl::eval::probe::{
    equiv_check, probe_downward_closed, probe_flat, probe_union_closed, ProbeBudget, ProbeOutcome,
};
use tltl::eval::{EvalConfig, EvalError, DEFAULT_BUDGET};
use tltl::forge::{self, Mc2SatMode};
use tltl::gen::{self, LassoShape};
use tltl::kripke::{validate_file, Kripke, KripkeFile};
use tltl::stutter;
use tltl::team::TeamFile;
use tltl::{check_classical, print, Alphabet, Formula, Team};

#[derive(Parser)]
#[command(name = "tltl", version, about = "LTL with team semantics and Boolean negation")]
struct Cli {
    /// Evaluation budget in visited states.
    #[arg(long, global = true, env = "TLTL_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Output format for line-oriented results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    JsonLines,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a formula and print it back.
    Parse {
        /// Formula text, or a file containing it.
        formula: String,
        /// Print the core-syntax expansion instead.
        #[arg(long)]
        desugar: bool,
        /// Also print propositions, temporal depth and fragment facts.
        #[arg(long)]
        info: bool,
    },
    /// Evaluate a formula on a team.
    Check {
        #[arg(long)]
        team: PathBuf,
        /// Formula text, or a file containing it.
        #[arg(long)]
        formula: String,
        /// Print evaluator statistics as key=value lines.
        #[arg(long)]
        stats: bool,
        /// Refuse teams whose horizon exceeds this many positions.
        #[arg(long)]
        max_horizon: Option<usize>,
    },
    /// Evaluate a classical formula on every trace of a team.
    Classical {
        #[arg(long)]
        team: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Stutter-free canonical forms and stutter equivalence.
    #[command(subcommand)]
    Stutter(StutterCmd),
    /// Inspect Kripke structures.
    #[command(subcommand)]
    Kripke(KripkeCmd),
    /// Arithmetic sentences: normal forms and emitted translations.
    #[command(subcommand)]
    Arith(ArithCmd),
    /// Reductions between arithmetic, model checking and satisfiability.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Run the property suites and randomized probes.
    #[command(subcommand)]
    Props(PropsCmd),
}

#[derive(Subcommand)]
enum StutterCmd {
    /// Print the canonical stutter-free team.
    Canon {
        #[arg(long)]
        team: PathBuf,
    },
    /// Decide stutter-equivalence of two teams.
    Equiv {
        #[arg(long, num_args = 1, required = true)]
        team: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum KripkeCmd {
    /// Report every problem in a structure file.
    Validate { file: PathBuf },
    /// Test whether each trace of a team is generated by the structure.
    Member {
        #[arg(long)]
        kripke: PathBuf,
        #[arg(long)]
        team: PathBuf,
    },
    /// List generated lassos up to the given prefix and loop lengths.
    Enumerate {
        #[arg(long)]
        kripke: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_prefix: usize,
        #[arg(long, default_value_t = 2)]
        max_loop: usize,
    },
    /// Print the marked structure and its characteristic formula.
    Chi {
        #[arg(long)]
        kripke: PathBuf,
        /// Write the marked structure here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the trace set as all-ultimately-periodic or uncountable.
    Countability {
        #[arg(long)]
        kripke: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Rho3Wrapper {
    None,
    Sat,
    Finsat,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rho2Wrapper {
    None,
    Sat,
    SatUlp,
    SatUlc,
    FinsatUlp,
    McUlp,
}

#[derive(clap::Args)]
struct ArithOut {
    /// Print numerals in decimal.
    #[arg(long)]
    decimal: bool,
    /// Indent long lists.
    #[arg(long)]
    pretty: bool,
}

impl ArithOut {
    fn opts(&self) -> PrintOptions {
        PrintOptions {
            decimal: self.decimal,
            pretty: self.pretty,
        }
    }
}

#[derive(Subcommand)]
enum ArithCmd {
    /// Move all quantifiers to the front.
    Prenex {
        /// Sentence text, or a file containing it.
        arith: String,
        #[command(flatten)]
        out: ArithOut,
    },
    /// Rewrite into the normal form accepted by the reduction.
    Normalize {
        arith: String,
        #[command(flatten)]
        out: ArithOut,
    },
    /// Check that a sentence is in normal form.
    ShapeCheck { arith: String },
    /// Translate a formula into third-order arithmetic.
    EmitRho3 {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Rho3Wrapper::None)]
        wrapper: Rho3Wrapper,
        /// Structure for the model-checking wrapper.
        #[arg(long)]
        kripke: Option<PathBuf>,
        #[command(flatten)]
        out: ArithOut,
    },
    /// Translate a formula into second-order arithmetic.
    EmitRho2 {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Rho2Wrapper::None)]
        wrapper: Rho2Wrapper,
        #[arg(long)]
        kripke: Option<PathBuf>,
        #[command(flatten)]
        out: ArithOut,
    },
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Build the structure and team formula for a sentence.
    Arith2mc {
        #[arg(long)]
        arith: String,
        /// Write the structure here; otherwise it is printed before the formula.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a model-checking instance into one formula.
    Mc2sat {
        #[arg(long)]
        kripke: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value = "withX")]
        mode: Mc2SatMode,
    },
    /// Evaluate the translation of a sentence on a bounded universe.
    BoundedCheck {
        #[arg(long)]
        arith: String,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeKind {
    Downward,
    Union,
    Flat,
    Equiv,
}

#[derive(Subcommand)]
enum PropsCmd {
    /// List the property suites.
    List,
    /// Run one suite, or all of them.
    Run {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Append elapsed times (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Search random teams for a closure or equivalence counterexample.
    Probe {
        #[arg(long, value_enum)]
        kind: ProbeKind,
        #[arg(long)]
        formula: String,
        /// Second formula for `equiv`.
        #[arg(long)]
        other: Option<String>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        max_traces: usize,
        #[arg(long, default_value_t = 3)]
        max_prefix: usize,
        #[arg(long, default_value_t = 3)]
        max_loop: usize,
    },
}

/// Outcome of a successful command run.
enum Verdict {
    Ok,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            let budget = err
                .chain()
                .any(|c| matches!(c.downcast_ref::<EvalError>(), Some(EvalError::BudgetExceeded(_))));
            ExitCode::from(if budget { 3 } else { 2 })
        }
    }
}

fn verdict(b: bool) -> Verdict {
    if b {
        Verdict::Ok
    } else {
        Verdict::No
    }
}

/// The argument itself, or the contents of the file it names.
fn text_or_file(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).with_context(|| format!("reading {arg}"))
    } else {
        Ok(arg.to_string())
    }
}

fn read_formula(arg: &str) -> Result<Formula> {
    let src = text_or_file(arg)?;
    tltl::parse(&src).map_err(|e| anyhow!("formula: {e}"))
}

fn read_arith(arg: &str) -> Result<Arith> {
    let src = text_or_file(arg)?;
    parse_arith(&src).map_err(|e| anyhow!("arithmetic: {e}"))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_kripke_file(path: &Path) -> Result<KripkeFile> {
    serde_json::from_str(&read_file(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_team(path: &Path) -> Result<Team> {
    let f: TeamFile =
        serde_json::from_str(&read_file(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Team::from_file(&f).with_context(|| format!("team {}", path.display()))
}

fn read_kripke(path: &Path) -> Result<Kripke> {
    let f = read_kripke_file(path)?;
    Kripke::from_file(&f).with_context(|| format!("structure {}", path.display()))
}

fn eval_config(cli: &Cli) -> EvalConfig {
    EvalConfig {
        budget: cli.budget,
        ..EvalConfig::default()
    }
}

fn run(cli: &Cli) -> Result<Verdict> {
    match &cli.cmd {
        Cmd::Parse { formula, desugar, info } => {
            let f = read_formula(formula)?;
            let shown = if *desugar { f.desugar() } else { f.clone() };
            println!("{}", print(&shown));
            if *info {
                let props: Vec<_> = f.props().into_iter().collect();
                println!("props={}", props.join(","));
                println!("temporal_depth={}", f.temporal_depth());
                println!("pure_ltl={}", f.is_pure_ltl());
                println!("tilde_free={}", f.is_tilde_free());
                println!("x_free={}", f.is_x_free());
                println!("downward_closed={}", f.is_downward_closed());
            }
            Ok(Verdict::Ok)
        }
        Cmd::Check {
            team,
            formula,
            stats,
            max_horizon,
        } => {
            let t = read_team(team)?;
            let f = read_formula(formula)?;
            if let Some(cap) = max_horizon {
                let h = t.horizon()?.total();
                if h > *cap {
                    bail!("team horizon {h} exceeds --max-horizon {cap}");
                }
            }
            let (b, st) = tltl::check_with(&t, &f, eval_config(cli))?;
            match cli.format {
                Format::Plain => {
                    println!("{b}");
                    if *stats {
                        println!("states={}", st.states);
                        println!("memo_hits={}", st.memo_hits);
                        println!("splits={}", st.splits);
                        println!("nodes={}", st.nodes);
                    }
                }
                Format::JsonLines => {
                    let mut v = json!({ "result": b });
                    if *stats {
                        v["states"] = json!(st.states);
                        v["memo_hits"] = json!(st.memo_hits);
                        v["splits"] = json!(st.splits);
                        v["nodes"] = json!(st.nodes);
                    }
                    println!("{v}");
                }
            }
            Ok(verdict(b))
        }
        Cmd::Classical { team, formula } => {
            let t = read_team(team)?;
            let f = read_formula(formula)?;
            let mut all = true;
            for tr in t.traces() {
                let b = check_classical(t.alphabet(), tr, &f)?;
                all &= b;
                emit(cli.format, &tr.display(t.alphabet()), b);
            }
            Ok(verdict(all))
        }
        Cmd::Stutter(s) => stutter_cmd(cli, s),
        Cmd::Kripke(k) => kripke_cmd(cli, k),
        Cmd::Arith(a) => arith_cmd(a),
        Cmd::Reduce(r) => reduce_cmd(cli, r),
        Cmd::Props(p) => props_cmd(cli, p),
    }
}

fn emit(format: Format, item: &str, b: bool) {
    match format {
        Format::Plain => println!("{item}\t{b}"),
        Format::JsonLines => println!("{}", json!({ "item": item, "result": b })),
    }
}

fn print_team(t: &Team) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(&t.to_file())?);
    Ok(())
}

fn stutter_cmd(_cli: &Cli, s: &StutterCmd) -> Result<Verdict> {
    match s {
        StutterCmd::Canon { team } => {
            let t = read_team(team)?;
            print_team(&stutter::canonical_stutter_free(&t)?)?;
            Ok(Verdict::Ok)
        }
        StutterCmd::Equiv { team } => {
            let [a, b] = team.as_slice() else {
                bail!("stutter equiv needs exactly two --team arguments");
            };
            let (a, b) = (read_team(a)?, read_team(b)?);
            let eq = stutter::stutter_equivalent(&a, &b)?;
            println!("{eq}");
            Ok(verdict(eq))
        }
    }
}

fn kripke_cmd(cli: &Cli, k: &KripkeCmd) -> Result<Verdict> {
    match k {
        KripkeCmd::Validate { file } => {
            let f = read_kripke_file(file)?;
            let problems = validate_file(&f);
            for p in &problems {
                println!("{p}");
            }
            if problems.is_empty() {
                println!("ok");
                Ok(Verdict::Ok)
            } else {
                Ok(Verdict::No)
            }
        }
        KripkeCmd::Member { kripke, team } => {
            let k = read_kripke(kripke)?;
            let t = read_team(team)?;
            if t.alphabet() != k.alphabet() {
                bail!("team and structure use different alphabets");
            }
            let mut all = true;
            for tr in t.traces() {
                let b = k.trace_member(tr);
                all &= b;
                emit(cli.format, &tr.display(t.alphabet()), b);
            }
            Ok(verdict(all))
        }
        KripkeCmd::Enumerate {
            kripke,
            max_prefix,
            max_loop,
        } => {
            let k = read_kripke(kripke)?;
            for tr in k.enumerate_ulp_traces(*max_prefix, *max_loop)? {
                match cli.format {
                    Format::Plain => println!("{}", tr.display(k.alphabet())),
                    Format::JsonLines => println!("{}", serde_json::to_string(&tr.to_literal(k.alphabet()))?),
                }
            }
            Ok(Verdict::Ok)
        }
        KripkeCmd::Chi { kripke, out } => {
            let k = read_kripke(kripke)?;
            let (k2, chi) = k.chi_formula()?;
            let text = serde_json::to_string_pretty(&k2.to_file())?;
            match out {
                Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
                None => println!("{text}"),
            }
            println!("{}", print(&chi));
            Ok(Verdict::Ok)
        }
        KripkeCmd::Countability { kripke } => {
            let k = read_kripke(kripke)?;
            println!("{:?}", k.countability_class());
            Ok(Verdict::Ok)
        }
    }
}

fn arith_cmd(a: &ArithCmd) -> Result<Verdict> {
    let show = |f: &Arith, o: &ArithOut| println!("{}", print_arith(f, o.opts()));
    match a {
        ArithCmd::Prenex { arith: src, out } => show(&arith::prenex(&read_arith(src)?), out),
        ArithCmd::Normalize { arith: src, out } => show(&arith::normalize_arity(&read_arith(src)?)?, out),
        ArithCmd::ShapeCheck { arith: src } => {
            return match arith::shape_check(&read_arith(src)?) {
                Ok(()) => {
                    println!("ok");
                    Ok(Verdict::Ok)
                }
                Err(e) => {
                    println!("{e}");
                    Ok(Verdict::No)
                }
            };
        }
        ArithCmd::EmitRho3 {
            formula,
            wrapper,
            kripke,
            out,
        } => {
            let phi = read_formula(formula)?;
            let f = match wrapper {
                Rho3Wrapper::None => arith::emit_rho3(&phi)?,
                Rho3Wrapper::Sat => arith::emit_rho3_sat(&phi)?,
                Rho3Wrapper::Finsat => arith::emit_rho3_finsat(&phi)?,
                Rho3Wrapper::Mc => arith::emit_rho3_mc(&phi, &need_kripke(kripke)?)?,
            };
            show(&f, out);
        }
        ArithCmd::EmitRho2 {
            formula,
            wrapper,
            kripke,
            out,
        } => {
            let phi = read_formula(formula)?;
            let f = match wrapper {
                Rho2Wrapper::None => arith::emit_rho2(&phi)?,
                Rho2Wrapper::Sat => arith::emit_rho2_sat(&phi)?,
                Rho2Wrapper::SatUlp => arith::emit_rho2_sat_ulp(&phi)?,
                Rho2Wrapper::SatUlc => arith::emit_rho2_sat_ulc(&phi)?,
                Rho2Wrapper::FinsatUlp => arith::emit_rho2_finsat_ulp(&phi)?,
                Rho2Wrapper::McUlp => arith::emit_rho2_mc_ulp(&phi, &need_kripke(kripke)?)?,
            };
            show(&f, out);
        }
    }
    Ok(Verdict::Ok)
}

fn need_kripke(p: &Option<PathBuf>) -> Result<Kripke> {
    match p {
        Some(p) => read_kripke(p),
        None => bail!("this wrapper needs --kripke"),
    }
}

fn reduce_cmd(cli: &Cli, r: &ReduceCmd) -> Result<Verdict> {
    match r {
        ReduceCmd::Arith2mc { arith: src, out } => {
            let (k, rho, _) = forge::arith_to_mc(&read_arith(src)?)?;
            let text = serde_json::to_string_pretty(&k.to_file())?;
            match out {
                Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
                None => println!("{text}"),
            }
            println!("{}", print(&rho));
            Ok(Verdict::Ok)
        }
        ReduceCmd::Mc2sat { kripke, formula, mode } => {
            let k = read_kripke(kripke)?;
            let phi = read_formula(formula)?;
            println!("{}", print(&forge::mc2sat(&phi, &k, *mode)?));
            Ok(Verdict::Ok)
        }
        ReduceCmd::BoundedCheck { arith: src, bound } => {
            let f = read_arith(src)?;
            let (_, team) = forge::build_bounded_universe(&f, *bound)?;
            let rho = forge::translate_rho(&f)?;
            let (b, _) = tltl::check_with(&team, &rho, eval_config(cli))?;
            println!("{b}");
            Ok(verdict(b))
        }
    }
}

fn props_cmd(cli: &Cli, p: &PropsCmd) -> Result<Verdict> {
    match p {
        PropsCmd::List => {
            for s in tltl::props::suites() {
                println!("{:<13} {}", s.name, s.title);
            }
            Ok(Verdict::Ok)
        }
        PropsCmd::Run { suite, seed, timings } => {
            let names: Vec<&str> = if suite == "all" {
                tltl::props::suites().iter().map(|s| s.name).collect()
            } else {
                vec![suite.as_str()]
            };
            let mut all = true;
            for name in names {
                let rep = tltl::props::run(name, *seed).ok_or_else(|| anyhow!("unknown suite `{name}`"))?;
                all &= rep.pass;
                match cli.format {
                    Format::Plain => {
                        let mut line = format!("{} {} {}", if rep.pass { "PASS" } else { "FAIL" }, rep.name, rep.detail);
                        if *timings {
                            line.push_str(&format!(" ({:.2}s)", rep.elapsed.as_secs_f64()));
                        }
                        println!("{line}");
                    }
                    Format::JsonLines => {
                        let mut v = json!({ "suite": rep.name, "pass": rep.pass, "detail": rep.detail });
                        if *timings {
                            v["seconds"] = json!(rep.elapsed.as_secs_f64());
                        }
                        println!("{v}");
                    }
                }
            }
            Ok(verdict(all))
        }
        PropsCmd::Probe {
            kind,
            formula,
            other,
            seed,
            samples,
            max_traces,
            max_prefix,
            max_loop,
        } => {
            let f = read_formula(formula)?;
            let mut names: Vec<String> = f.props().into_iter().collect();
            let g = match (kind, other) {
                (ProbeKind::Equiv, Some(o)) => Some(read_formula(o)?),
                (ProbeKind::Equiv, None) => bail!("--kind equiv needs --other"),
                _ => None,
            };
            if let Some(g) = &g {
                names.extend(g.props());
            }
            names.sort();
            names.dedup();
            let alphabet = Alphabet::new(names)?;
            let shape = LassoShape {
                max_prefix: *max_prefix,
                max_loop: *max_loop,
            };
            let sampler = gen::team_sampler(*seed, alphabet, *max_traces, shape, *samples);
            let budget = ProbeBudget {
                max_samples: *samples,
                eval: eval_config(cli),
            };
            let report = |found: Option<String>, o_samples: Option<usize>| -> Verdict {
                match (found, o_samples) {
                    (Some(w), _) => {
                        println!("counterexample");
                        println!("{w}");
                        Verdict::No
                    }
                    (None, Some(n)) => {
                        println!("none found in {n} samples");
                        Verdict::Ok
                    }
                    (None, None) => unreachable!(),
                }
            };
            fn split<C>(o: ProbeOutcome<C>, show: impl Fn(&C) -> String) -> Result<(Option<String>, Option<usize>)> {
                match o {
                    ProbeOutcome::Counterexample(c) => Ok((Some(show(&c)), None)),
                    ProbeOutcome::NoneFound { samples } => Ok((None, Some(samples))),
                    ProbeOutcome::BudgetExhausted { samples } => {
                        Err(EvalError::BudgetExceeded(samples as u64)).context("probe ran out of budget")
                    }
                }
            }
            let (w, n) = match kind {
                ProbeKind::Downward => split(probe_downward_closed(&f, sampler, budget)?, |c| {
                    format!("team {}\nsubteam {}", c.team.display(), c.subteam.display())
                })?,
                ProbeKind::Union => split(probe_union_closed(&f, sampler, budget)?, |c| {
                    format!("left {}\nright {}", c.left.display(), c.right.display())
                })?,
                ProbeKind::Flat => split(probe_flat(&f, sampler, budget)?, |t| format!("team {}", t.display()))?,
                ProbeKind::Equiv => {
                    let g = g.expect("checked above");
                    split(equiv_check(&f, &g, sampler, budget)?, |t| format!("team {}", t.display()))?
                }
            };
            Ok(report(w, n))
        }
    }
}
