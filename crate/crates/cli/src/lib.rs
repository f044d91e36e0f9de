//! Command dispatch for the `pvt` binary.
//!
//! [`run`] parses arguments, executes one command and returns the exit code with
//! everything that would be written to stdout and stderr, so the binary stays a
//! thin wrapper and tests can drive the CLI in-process.

pub mod report;

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use pvt_core::expr::{parse_operator, parse_ratfn};
use pvt_core::field::RatFn;
use pvt_core::kovacic::{kovacic, verify_riccati_minpoly, KovacicConfig, KovacicOutcome};
use pvt_core::ore::{op_gcrd, op_lclm, op_mul, op_normal_form2, op_right_divide, DiffOp};
use pvt_core::solve::{hyperexp_right_factors, polynomial_solutions, rational_solutions, SolveConfig};
use pvt_core::structure::{
    is_darboux, simdifalg_present_with, simplicity_check, tower_resolve, ResolveConfig, ResolveMode, SimplicityOutcome,
};
use pvt_core::tower::{minimal_annihilator, AnnihilatorConfig, AnnihilatorResult, Tower, TowerElem};
use pvt_core::{Error, ErrorKind};
use serde_json::{json, Value};

use report::{digest, Caps, Check, Report, Verification};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "pvt", version, about = "Exact differential algebra over Q(x)")]
pub struct Cli {
    /// Print the canonical JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest operator order searched by annihilator and resolution commands.
    #[arg(long, global = true, env = "PVT_MAX_ORDER", default_value_t = 8)]
    pub max_order: usize,
    /// Degree bound for relation and membership searches.
    #[arg(long, global = true, env = "PVT_DEGREE_CAP", default_value_t = 12)]
    pub degree_cap: usize,
    /// Wall-clock budget for the expensive search stages, in milliseconds.
    #[arg(long, global = true)]
    pub budget_ms: Option<u64>,
    /// Worker threads for the parallel stages.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operator arithmetic.
    #[command(subcommand)]
    Op(OpCommand),
    /// Closed-form solutions of linear operators.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Differential field towers.
    #[command(subcommand)]
    Tower(TowerCommand),
}

#[derive(Debug, Subcommand)]
pub enum OpCommand {
    /// Product A·B.
    Mul { a: String, b: String },
    /// Right division A = Q·B + R.
    Divr { a: String, b: String },
    /// Greatest common right divisor.
    Gcrd { a: String, b: String },
    /// Least common left multiple.
    Lclm { a: String, b: String },
    /// Applies L to a rational function, or to a tower element with --tower.
    Apply {
        l: String,
        f: String,
        #[arg(long)]
        tower: Option<PathBuf>,
    },
    /// Reduced form z'' = r z of a second-order operator.
    Normal2 { l: String },
}

#[derive(Debug, Subcommand)]
pub enum SolveCommand {
    /// Polynomial solutions.
    Poly { l: String },
    /// Rational solutions.
    Rational { l: String },
    /// First-order right factors over Q(x).
    Hyperexp { l: String },
    /// Liouvillian solutions of a second-order operator.
    Kovacic { l: String },
}

#[derive(Debug, Args)]
pub struct ElemArgs {
    /// Tower description (JSON).
    pub tower: PathBuf,
    /// Element of the top field.
    #[arg(long)]
    pub elem: String,
}

#[derive(Debug, Subcommand)]
pub enum TowerCommand {
    /// Validates a tower and prints it in canonical form.
    Build { tower: PathBuf },
    /// Derivative of an element.
    Derive(ElemArgs),
    /// Minimal annihilating operator of an element.
    Ann(ElemArgs),
    /// Resolution of the field generated by the given elements into first-order steps.
    Resolve {
        tower: PathBuf,
        /// Generator of the intermediate field; repeat for several.
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long, default_value = "generic")]
        mode: String,
    },
    /// Finitely generated differential algebra with fraction field F<y>.
    Simdifalg(ElemArgs),
    /// Simplicity of the Riccati ring of a second-order operator.
    SimpleCheck { l: String },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Parse => EXIT_PARSE,
        ErrorKind::Inconclusive => EXIT_INCONCLUSIVE,
        ErrorKind::InvalidInput => EXIT_INVALID,
        ErrorKind::Budget => EXIT_BUDGET,
    }
}

fn error_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ', '{']).next().unwrap_or("Error").to_string()
}

struct Settings {
    max_order: usize,
    degree_cap: usize,
    budget: Option<Duration>,
}

impl Settings {
    fn kovacic(&self) -> KovacicConfig {
        let mut cfg = KovacicConfig::default();
        if let Some(b) = self.budget {
            cfg.budget = Some(b);
        }
        cfg
    }

    fn caps(&self) -> Caps {
        Caps {
            max_order: self.max_order,
            degree_cap: self.degree_cap,
            budget_ms: self.budget.map(|d| d.as_millis() as u64),
        }
    }
}

/// A command's payload before it is wrapped into a report.
struct Done {
    inputs: Value,
    result: Value,
    checks: Vec<Check>,
    /// Nonzero when the command completed but its answer is inconclusive.
    code: i32,
}

impl Done {
    fn ok(inputs: Value, result: Value, checks: Vec<Check>) -> Self {
        Done {
            inputs,
            result,
            checks,
            code: EXIT_OK,
        }
    }
}

fn check(name: &str, pass: bool) -> Check {
    Check(name.to_string(), pass)
}

fn read_tower(path: &Path) -> pvt_core::Result<Arc<Tower>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Ok(Tower::from_json(&text)?.into_shared())
}

fn op_pair(a: &str, b: &str) -> pvt_core::Result<(DiffOp, DiffOp, Value)> {
    let (x, y) = (parse_operator(a)?, parse_operator(b)?);
    let inputs = json!({"a": x.to_canonical_string(), "b": y.to_canonical_string()});
    Ok((x, y, inputs))
}

fn run_op(cmd: &OpCommand) -> pvt_core::Result<Done> {
    match cmd {
        OpCommand::Mul { a, b } => {
            let (x, y, inputs) = op_pair(a, b)?;
            let p = op_mul(&x, &y);
            let orders = p.order() == x.order().zip(y.order()).map(|(i, j)| i + j);
            Ok(Done::ok(
                inputs,
                json!({"product": p.to_canonical_string()}),
                vec![check("order_additive", orders || p.is_zero())],
            ))
        }
        OpCommand::Divr { a, b } => {
            let (x, y, inputs) = op_pair(a, b)?;
            let (q, r) = op_right_divide(&x, &y)?;
            let back = &(&q * &y) + &r;
            let small = r.is_zero() || r.order() < y.order();
            Ok(Done::ok(
                inputs,
                json!({"quotient": q.to_canonical_string(), "remainder": r.to_canonical_string()}),
                vec![check("a_equals_qb_plus_r", back == x), check("remainder_order_below_b", small)],
            ))
        }
        OpCommand::Gcrd { a, b } => {
            let (x, y, inputs) = op_pair(a, b)?;
            let g = op_gcrd(&x, &y)?;
            let divides = g.is_zero() || (x.right_divisible_by(&g) && y.right_divisible_by(&g));
            Ok(Done::ok(
                inputs,
                json!({"gcrd": g.to_canonical_string()}),
                vec![check("divides_both", divides)],
            ))
        }
        OpCommand::Lclm { a, b } => {
            let (x, y, inputs) = op_pair(a, b)?;
            let m = op_lclm(&x, &y)?;
            let multiple = m.right_divisible_by(&x) && m.right_divisible_by(&y);
            Ok(Done::ok(
                inputs,
                json!({"lclm": m.to_canonical_string()}),
                vec![check("multiple_of_both", multiple)],
            ))
        }
        OpCommand::Apply { l, f, tower } => {
            let op = parse_operator(l)?;
            match tower {
                None => {
                    let g = parse_ratfn(f)?;
                    let v = op.apply(&g);
                    Ok(Done::ok(
                        json!({"operator": op.to_canonical_string(), "function": g.to_string()}),
                        json!({"value": v.to_string(), "is_zero": v.is_zero()}),
                        Vec::new(),
                    ))
                }
                Some(path) => {
                    let t = read_tower(path)?;
                    let y = TowerElem::parse(&t, f)?;
                    let v = op.apply(&y);
                    Ok(Done::ok(
                        json!({
                            "operator": op.to_canonical_string(),
                            "element": y.to_string(),
                            "tower": tower_json(&t),
                        }),
                        json!({"value": v.to_string(), "is_zero": v.is_zero()}),
                        Vec::new(),
                    ))
                }
            }
        }
        OpCommand::Normal2 { l } => {
            let op = parse_operator(l)?;
            let (r, gauge) = op_normal_form2(&op)?;
            Ok(Done::ok(
                json!({"operator": op.to_canonical_string()}),
                json!({"r": r.to_string(), "gauge": gauge.to_string()}),
                Vec::new(),
            ))
        }
    }
}

fn run_solve(cmd: &SolveCommand, s: &Settings) -> pvt_core::Result<Done> {
    let solve = SolveConfig::default();
    match cmd {
        SolveCommand::Poly { l } => {
            let op = parse_operator(l)?;
            let sols = polynomial_solutions(&op);
            let ok = sols.iter().all(|p| op.apply(&RatFn::from_poly(p.clone())).is_zero());
            Ok(Done::ok(
                json!({"operator": op.to_canonical_string()}),
                json!({"solutions": sols.iter().map(ToString::to_string).collect::<Vec<_>>()}),
                vec![check("annihilated", ok)],
            ))
        }
        SolveCommand::Rational { l } => {
            let op = parse_operator(l)?;
            let sols = rational_solutions(&op, &solve)?;
            let ok = sols.iter().all(|f| op.apply(f).is_zero());
            Ok(Done::ok(
                json!({"operator": op.to_canonical_string()}),
                json!({"solutions": sols.iter().map(ToString::to_string).collect::<Vec<_>>()}),
                vec![check("annihilated", ok)],
            ))
        }
        SolveCommand::Hyperexp { l } => {
            let op = parse_operator(l)?;
            let factors = hyperexp_right_factors(&op, &solve)?;
            let ok = factors.iter().all(|f| op.right_divisible_by(&f.operator()));
            Ok(Done::ok(
                json!({"operator": op.to_canonical_string()}),
                json!({
                    "factors": factors.iter().map(|f| f.operator().to_canonical_string()).collect::<Vec<_>>(),
                    "logarithmic_derivatives": factors.iter().map(|f| f.u.to_string()).collect::<Vec<_>>(),
                }),
                vec![check("right_divides", ok)],
            ))
        }
        SolveCommand::Kovacic { l } => {
            let op = parse_operator(l)?;
            let v = kovacic(&op, &s.kovacic())?;
            let (name, extra) = match &v.outcome {
                KovacicOutcome::Case1 { omega } => ("Case1", json!({"omega": omega.to_string()})),
                KovacicOutcome::Case2 { minpoly } => ("Case2", json!({"minpoly": minpoly.fmt_var("T")})),
                KovacicOutcome::Case3 { n, minpoly } => ("Case3", json!({"n": n, "minpoly": minpoly.fmt_var("T")})),
                KovacicOutcome::NonLiouvillian => ("NonLiouvillian", json!({})),
            };
            let mut checks = Vec::new();
            if let Some(m) = v.outcome.minpoly() {
                checks.push(check("riccati_minpoly", verify_riccati_minpoly(&m, &v.r)));
            }
            let mut result = json!({
                "outcome": name,
                "liouvillian": v.outcome.is_liouvillian(),
                "r": v.r.to_string(),
                "gauge": v.gauge.to_string(),
                "witness": v.witness,
                "complete": v.complete,
            });
            if let (Value::Object(m), Value::Object(e)) = (&mut result, extra) {
                m.extend(e);
            }
            Ok(Done::ok(json!({"operator": op.to_canonical_string()}), result, checks))
        }
    }
}

fn tower_json(t: &Tower) -> Value {
    serde_json::to_value(t.to_spec()).expect("tower specs serialize")
}

fn run_tower(cmd: &TowerCommand, s: &Settings) -> pvt_core::Result<Done> {
    match cmd {
        TowerCommand::Build { tower } => {
            let t = read_tower(tower)?;
            let derivs: Vec<Value> = t
                .generator_derivatives()
                .into_iter()
                .map(|(n, d)| json!({"name": n, "derivative": d}))
                .collect();
            let reparsed = Tower::build(&t.to_spec()).map(|u| &u == t.as_ref()).unwrap_or(false);
            Ok(Done::ok(
                json!({"tower": tower.display().to_string()}),
                json!({"tower": tower_json(&t), "derivatives": derivs}),
                vec![check("canonical_round_trip", reparsed)],
            ))
        }
        TowerCommand::Derive(args) => {
            let t = read_tower(&args.tower)?;
            let y = TowerElem::parse(&t, &args.elem)?;
            let d = y.derive();
            Ok(Done::ok(
                json!({"tower": tower_json(&t), "element": y.to_string()}),
                json!({"derivative": d.to_string()}),
                Vec::new(),
            ))
        }
        TowerCommand::Ann(args) => {
            let t = read_tower(&args.tower)?;
            let y = TowerElem::parse(&t, &args.elem)?;
            let cfg = AnnihilatorConfig {
                max_order: s.max_order,
                ..Default::default()
            };
            let inputs = json!({"tower": tower_json(&t), "element": y.to_string()});
            match minimal_annihilator(&y, &cfg)? {
                AnnihilatorResult::Found { op, order } => {
                    let killed = op.apply(&y).is_zero();
                    Ok(Done::ok(
                        inputs,
                        json!({"status": "Found", "order": order, "operator": op.to_canonical_string()}),
                        vec![check("annihilates", killed)],
                    ))
                }
                AnnihilatorResult::NotFoundWithinCap(cap) => Ok(Done {
                    inputs,
                    result: json!({"status": "NotFoundWithinCap", "cap": cap}),
                    checks: Vec::new(),
                    code: EXIT_INCONCLUSIVE,
                }),
            }
        }
        TowerCommand::Resolve { tower, gens, mode } => {
            let t = read_tower(tower)?;
            let mode: ResolveMode = mode.parse()?;
            let elems = gens
                .iter()
                .map(|g| TowerElem::parse(&t, g))
                .collect::<pvt_core::Result<Vec<_>>>()?;
            let cfg = ResolveConfig {
                max_order: s.max_order,
                degree_cap: s.degree_cap,
                ..Default::default()
            };
            let res = tower_resolve(&elems, mode, &cfg)?;
            let names = res.step_names();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let mut checks = Vec::new();
            let steps: Vec<Value> = res
                .steps
                .iter()
                .enumerate()
                .map(|(i, st)| {
                    let (t_s, a_s, b_s) = (st.t.to_string(), st.a.to_string(), st.b_expr.fmt_with(&refs[..i]));
                    let pass = st.verify();
                    checks.push(check(&format!("step{}_derivative", i + 1), pass));
                    json!({
                        "name": names[i],
                        "t": t_s,
                        "a": a_s,
                        "b": b_s,
                        "mode_note": st.mode_note.to_string(),
                        "annihilator": st.annihilator.to_canonical_string(),
                        "hash": digest(&format!("{t_s}|{a_s}|{b_s}")),
                    })
                })
                .collect();
            let recovery: Vec<Value> = gens
                .iter()
                .zip(&elems)
                .zip(&res.recovery)
                .map(|((g, e), r)| {
                    let back = r.eval(&res.steps.iter().map(|s| s.t.clone()).collect::<Vec<_>>(), e);
                    checks.push(check(&format!("recover {g}"), back.map(|b| &b == e).unwrap_or(false)));
                    json!({"generator": e.to_string(), "expression": r.fmt_with(&refs)})
                })
                .collect();
            let mode_ok = match mode {
                ResolveMode::Unipotent => res.steps.iter().all(|s| s.a.is_zero()),
                ResolveMode::Torus => res.steps.iter().all(|s| s.b.is_zero()),
                ResolveMode::Generic => true,
            };
            checks.push(check("mode_postcondition", mode_ok));
            Ok(Done::ok(
                json!({
                    "tower": tower_json(&t),
                    "generators": elems.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "mode": format!("{mode:?}").to_lowercase(),
                }),
                json!({"steps": steps, "recovery": recovery}),
                checks,
            ))
        }
        TowerCommand::Simdifalg(args) => {
            let t = read_tower(&args.tower)?;
            let y = TowerElem::parse(&t, &args.elem)?;
            let p = simdifalg_present_with(&y, s.degree_cap, 2000)?;
            let closure: Vec<Value> = p
                .closure_strings()
                .into_iter()
                .map(|(n, d)| json!({"generator": n, "derivative": d}))
                .collect();
            let gens: Vec<Value> = p
                .names
                .iter()
                .zip(&p.generators)
                .map(|(n, g)| json!({"name": n, "value": g.to_string()}))
                .collect();
            let verified = p.verify()?;
            Ok(Done::ok(
                json!({"tower": tower_json(&t), "element": y.to_string()}),
                json!({
                    "n1": p.n1,
                    "algebraic": p.algebraic,
                    "relation": p.relation_string(),
                    "r": p.r_string(),
                    "generators": gens,
                    "closure": closure,
                }),
                vec![check("closure", verified)],
            ))
        }
        TowerCommand::SimpleCheck { l } => {
            let op = parse_operator(l)?;
            let v = simplicity_check(&op, &s.kovacic())?;
            let mut checks = Vec::new();
            let result = match &v.outcome {
                SimplicityOutcome::Simple => json!({"outcome": "Simple", "riccati": format!("w' = {}", v.riccati.fmt_var("w"))}),
                SimplicityOutcome::Darboux(d) => {
                    checks.push(check("witness_divides_derivative", is_darboux(d, &v.riccati)));
                    json!({
                        "outcome": "Darboux",
                        "witness": d.fmt_var("w"),
                        "degree": d.degree(),
                        "riccati": format!("w' = {}", v.riccati.fmt_var("w")),
                    })
                }
            };
            Ok(Done::ok(json!({"operator": op.to_canonical_string()}), result, checks))
        }
    }
}

fn command_name(c: &Command) -> String {
    let (group, sub) = match c {
        Command::Op(o) => (
            "op",
            match o {
                OpCommand::Mul { .. } => "mul",
                OpCommand::Divr { .. } => "divr",
                OpCommand::Gcrd { .. } => "gcrd",
                OpCommand::Lclm { .. } => "lclm",
                OpCommand::Apply { .. } => "apply",
                OpCommand::Normal2 { .. } => "normal2",
            },
        ),
        Command::Solve(o) => (
            "solve",
            match o {
                SolveCommand::Poly { .. } => "poly",
                SolveCommand::Rational { .. } => "rational",
                SolveCommand::Hyperexp { .. } => "hyperexp",
                SolveCommand::Kovacic { .. } => "kovacic",
            },
        ),
        Command::Tower(o) => (
            "tower",
            match o {
                TowerCommand::Build { .. } => "build",
                TowerCommand::Derive(_) => "derive",
                TowerCommand::Ann(_) => "ann",
                TowerCommand::Resolve { .. } => "resolve",
                TowerCommand::Simdifalg(_) => "simdifalg",
                TowerCommand::SimpleCheck { .. } => "simple-check",
            },
        ),
    };
    format!("{group} {sub}")
}

/// Runs one already-parsed command.
pub fn execute(cli: &Cli) -> Outcome {
    let settings = Settings {
        max_order: cli.max_order,
        degree_cap: cli.degree_cap,
        budget: cli.budget_ms.map(Duration::from_millis),
    };
    let name = command_name(&cli.command);
    let work = || match &cli.command {
        Command::Op(c) => run_op(c),
        Command::Solve(c) => run_solve(c, &settings),
        Command::Tower(c) => run_tower(c, &settings),
    };
    let done = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Err(Error::InvalidInput(format!("thread pool: {e}"))),
        },
        None => work(),
    };
    match done {
        Ok(d) => {
            let report = Report {
                command: name,
                inputs: d.inputs,
                result: d.result,
                verification: Verification { checks: d.checks },
                caps: settings.caps(),
                timing_ms: None,
            };
            let code = if d.code == EXIT_OK && !report.all_checks_pass() {
                EXIT_INVALID
            } else {
                d.code
            };
            let stdout = if cli.json { report.to_json() + "\n" } else { report.to_text() };
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let stdout = if cli.json {
                let v = json!({"command": name, "error": {"kind": error_name(&e), "message": e.to_string()}});
                serde_json::to_string_pretty(&v).expect("serializes") + "\n"
            } else {
                String::new()
            };
            Outcome {
                code: exit_code_for(&e),
                stdout,
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}
