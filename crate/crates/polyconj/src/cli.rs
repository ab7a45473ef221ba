//! Command-line front end: problem files in, deterministic reports out.
//!
//! Every input file shares one grammar. The first significant line is a
//! field header `field p=<prime> k=<deg> [modulus=<poly in a>]`; the rest
//! are `name = value` bindings, where A and B are matrices `[[p,q],[r,s]]`
//! and D, b, c, d are polynomials in the usual grammar. `#` starts a
//! comment. Unknown names are rejected. Each subcommand reads the names it
//! needs:
//!
//! * `decide` (A, B): conjugacy certificate, witness included;
//! * `centralizer` (A): generator of the centralizer or the finiteness
//!   reason;
//! * `pell` (D): fundamental solution of u^2 - D*v^2 = 1;
//! * `units` (c, optional b): unit group of the order with s^2 = b*s - c;
//! * `solve-norm` (c, d, optional b): solutions of u^2 + b*uv + c*v^2 = d;
//! * `bound` (A, B): degree cap for a minimal conjugator;
//! * `selftest`: built-in verification battery, oracle cross-checks
//!   included.
//!
//! Exit codes: 0 affirmative (conjugate, solution found), 1 negative (not
//! conjugate, no nontrivial solution), 2 usage or parse error, 3 internal
//! invariant violation or exhausted budget. Reports go to stdout and are
//! byte-identical across runs for fixed inputs; diagnostics go to stderr.
//! With several input files the reports are printed in argument order, each
//! preceded by a `file:` line, regardless of `--jobs`.

use crate::conjugacy::{
    case_label, centralizer_generator, decide, degree_bound, diagonal_criterion, verify_witness,
    Matrix2, RefutationReason, Verdict,
};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::laurent::LaurentSeries;
use crate::normsolver::{self, SolutionSet};
use crate::oracle::{brute_decide, brute_norm_solutions, brute_units};
use crate::poly::Poly;
use crate::quadring::QuadContext;
use crate::units::{fundamental_unit, pell_fundamental, unit_group_description, UnitGroupDescription};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Default cap on enumeration work per operation.
const DEFAULT_BUDGET: u64 = 2_000_000;
/// Step cap for continued fraction expansions.
const STEPS: usize = 1 << 16;

#[derive(Parser)]
#[command(
    name = "polyconj",
    version,
    about = "Conjugacy of 2x2 matrices over F_q[x]: certificates, norm forms, Pell, units, centralizers"
)]
struct Cli {
    /// Cap on enumeration work (states scanned) per operation.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Process input files with up to N worker threads.
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    jobs: usize,

    /// Series-precision depth for the self-test residual checks. The
    /// solvers derive exact per-step precision on their own; this knob only
    /// deepens the series certifications in `selftest`.
    #[arg(long, global = true, default_value_t = 32, value_name = "N")]
    precision: i64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether A and B are conjugate in GL(2, F_q[x]).
    Decide {
        /// Append the bare witness as a final `U = ...` line.
        #[arg(long)]
        emit_witness: bool,
        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Compute a centralizer generator for a semisimple, nonscalar A.
    Centralizer {
        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Solve the Pell equation u^2 - D*v^2 = 1.
    Pell {
        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Describe the unit group of the order with s^2 = b*s - c.
    Units {
        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Solve the norm equation u^2 + b*uv + c*v^2 = d.
    SolveNorm {
        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Report the degree cap a minimal conjugator of A and B obeys.
    Bound {
        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Run the built-in verification battery.
    Selftest,
}

pub fn run() -> ExitCode {
    match std::panic::catch_unwind(real_main) {
        Ok(code) => ExitCode::from(code),
        Err(_) => ExitCode::from(3),
    }
}

fn real_main() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let budget = cli.budget;
    match cli.command {
        Command::Decide { emit_witness, files } => {
            run_on_files(&files, cli.jobs, FileOp::Decide { emit_witness }, budget)
        }
        Command::Centralizer { files } => run_on_files(&files, cli.jobs, FileOp::Centralizer, budget),
        Command::Pell { files } => run_on_files(&files, cli.jobs, FileOp::Pell, budget),
        Command::Units { files } => run_on_files(&files, cli.jobs, FileOp::Units, budget),
        Command::SolveNorm { files } => run_on_files(&files, cli.jobs, FileOp::SolveNorm, budget),
        Command::Bound { files } => run_on_files(&files, cli.jobs, FileOp::Bound, budget),
        Command::Selftest => run_selftest(budget, cli.precision),
    }
}

#[derive(Clone, Copy)]
enum FileOp {
    Decide { emit_witness: bool },
    Centralizer,
    Pell,
    Units,
    SolveNorm,
    Bound,
}

/// A parsed problem file: the field plus named matrices and polynomials.
struct Problem {
    matrices: BTreeMap<String, Matrix2>,
    polys: BTreeMap<String, Poly>,
}

fn parse_problem(text: &str) -> Result<Problem> {
    let mut field: Option<Field> = None;
    let mut matrices = BTreeMap::new();
    let mut polys = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let Some(f) = field.as_ref() else {
            field = Some(
                Field::parse_header(line.trim()).map_err(|e| rebase(e, line_no, 1))?,
            );
            continue;
        };
        let Some((name_part, value)) = line.split_once('=') else {
            return Err(Error::parse(line_no, 1, "expected `name = value`"));
        };
        let name = name_part.trim();
        let col = name_part.len() + 2;
        match name {
            "A" | "B" => {
                if matrices.contains_key(name) {
                    return Err(Error::parse(line_no, 1, format!("duplicate name '{name}'")));
                }
                let m = Matrix2::parse(f, value).map_err(|e| rebase(e, line_no, col))?;
                matrices.insert(name.to_string(), m);
            }
            "D" | "b" | "c" | "d" => {
                if polys.contains_key(name) {
                    return Err(Error::parse(line_no, 1, format!("duplicate name '{name}'")));
                }
                let p = Poly::parse(f, value).map_err(|e| rebase(e, line_no, col))?;
                polys.insert(name.to_string(), p);
            }
            _ => {
                return Err(Error::parse(
                    line_no,
                    1,
                    format!("unknown name '{name}' (expected A, B, D, b, c, or d)"),
                ));
            }
        }
    }
    if field.is_none() {
        return Err(Error::parse(1, 1, "missing `field p=.. k=..` header"));
    }
    Ok(Problem { matrices, polys })
}

fn rebase(e: Error, line: usize, col: usize) -> Error {
    match e {
        Error::InvalidInput(msg) => Error::parse(line, col, msg),
        Error::Parse { col: inner, msg, .. } => Error::parse(line, col + inner.saturating_sub(1), msg),
        other => other,
    }
}

impl Problem {
    fn matrix(&self, name: &str) -> Result<&Matrix2> {
        self.matrices
            .get(name)
            .ok_or_else(|| Error::invalid(format!("problem file needs `{name} = [[..,..],[..,..]]`")))
    }

    fn poly(&self, name: &str) -> Result<&Poly> {
        self.polys
            .get(name)
            .ok_or_else(|| Error::invalid(format!("problem file needs `{name} = <polynomial>`")))
    }

    #[cfg(test)]
    fn any_field(&self) -> Option<Field> {
        self.matrices
            .values()
            .map(|m| m.field().clone())
            .next()
            .or_else(|| self.polys.values().map(|p| p.field().clone()).next())
    }
}

fn run_on_files(files: &[PathBuf], jobs: usize, op: FileOp, budget: u64) -> u8 {
    let n = files.len();
    let multi = n > 1;
    let workers = jobs.max(1).min(n.max(1));
    let results: Vec<(String, String, u8)> = if workers <= 1 {
        files.iter().map(|p| process_file(p, op, budget, multi)).collect()
    } else {
        let slots: Vec<Mutex<Option<(String, String, u8)>>> =
            (0..n).map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= n {
                        break;
                    }
                    let r = process_file(&files[i], op, budget, multi);
                    *slots[i].lock().unwrap() = Some(r);
                });
            }
        });
        slots
            .into_iter()
            .map(|m| m.into_inner().unwrap().expect("worker filled every slot"))
            .collect()
    };
    let mut worst = 0u8;
    for (out, err, code) in results {
        print!("{out}");
        eprint!("{err}");
        worst = worst.max(code);
    }
    worst
}

fn process_file(path: &Path, op: FileOp, budget: u64, multi: bool) -> (String, String, u8) {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return (String::new(), format!("{}: {e}\n", path.display()), 2),
    };
    let problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => return (String::new(), format!("{}: {e}\n", path.display()), 2),
    };
    match apply(op, &problem, budget) {
        Ok((body, code)) => {
            let mut out = String::new();
            if multi {
                out.push_str(&format!("file: {}\n", path.display()));
            }
            out.push_str(&body);
            (out, String::new(), code)
        }
        Err(e) => (
            String::new(),
            format!("{}: {e}\n", path.display()),
            error_code(&e),
        ),
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::InternalInvariantViolation(_) | Error::BudgetExceeded(_) => 3,
        _ => 2,
    }
}

fn apply(op: FileOp, problem: &Problem, budget: u64) -> Result<(String, u8)> {
    match op {
        FileOp::Decide { emit_witness } => op_decide(problem, budget, emit_witness),
        FileOp::Centralizer => op_centralizer(problem),
        FileOp::Pell => op_pell(problem),
        FileOp::Units => op_units(problem),
        FileOp::SolveNorm => op_solve_norm(problem, budget),
        FileOp::Bound => op_bound(problem),
    }
}

fn op_decide(problem: &Problem, budget: u64, emit_witness: bool) -> Result<(String, u8)> {
    let a = problem.matrix("A")?;
    let b = problem.matrix("B")?;
    let cert = decide(a, b, budget)?;
    let mut out = cert.to_text();
    if emit_witness {
        if let Some(w) = &cert.witness {
            out.push_str(&format!("U = {w}\n"));
        }
    }
    let code = match cert.verdict {
        Verdict::Conjugate => 0,
        Verdict::NotConjugate => 1,
    };
    Ok((out, code))
}

fn op_centralizer(problem: &Problem) -> Result<(String, u8)> {
    let a = problem.matrix("A")?;
    let report = centralizer_generator(a, STEPS)?;
    let code = if report.generator.is_some() { 0 } else { 1 };
    Ok((report.to_text(), code))
}

fn op_pell(problem: &Problem) -> Result<(String, u8)> {
    let d = problem.poly("D")?;
    match pell_fundamental(d, STEPS) {
        Ok((u, v)) => {
            let lhs = &(&u * &u) - &(&(d * &v) * &v);
            if !lhs.is_one() {
                return Err(Error::internal("Pell solution failed the exact check"));
            }
            Ok((format!("u = {u}\nv = {v}\ncheck: u^2 - D*v^2 = 1\n"), 0))
        }
        Err(Error::Unsupported(msg)) => Ok((format!("no nontrivial solution: {msg}\n"), 1)),
        Err(e) => Err(e),
    }
}

fn op_units(problem: &Problem) -> Result<(String, u8)> {
    let c = problem.poly("c")?;
    let zero = Poly::zero(c.field());
    let b = problem.polys.get("b").unwrap_or(&zero);
    let ctx = QuadContext::from_monic(b, c)?;
    let out = match unit_group_description(&ctx, STEPS)? {
        UnitGroupDescription::ConstantsOnly => ("unit-group: constants-only\n".to_string(), 1),
        UnitGroupDescription::SplitConstants => ("unit-group: split-constants\n".to_string(), 1),
        UnitGroupDescription::UnipotentFamily { root } => (
            format!("unit-group: unipotent-family\nroot = {root}\n"),
            0,
        ),
        UnitGroupDescription::FundamentalUnit { u, v, norm } => (
            format!(
                "unit-group: fundamental-unit\nu = {u}\nv = {v}\nnorm = {}\n",
                ctx.field().format_element(norm)
            ),
            0,
        ),
    };
    Ok(out)
}

fn op_solve_norm(problem: &Problem, budget: u64) -> Result<(String, u8)> {
    let c = problem.poly("c")?;
    let d = problem.poly("d")?;
    let zero = Poly::zero(c.field());
    let b = problem.polys.get("b").unwrap_or(&zero);
    let ctx = QuadContext::from_monic(b, c)?;
    let label = case_label(ctx.case());
    let mut out = format!("case: {label}\n");
    let code = match normsolver::solve(&ctx, d, STEPS, budget)? {
        SolutionSet::Finite(mut sols) => {
            sols.sort_by_cached_key(crate::units::pair_key);
            out.push_str(&format!("solutions: {}\n", sols.len()));
            for (u, v) in &sols {
                out.push_str(&format!("solution: u = {u}, v = {v}\n"));
            }
            u8::from(sols.is_empty())
        }
        SolutionSet::Families { mut finite, families } => {
            finite.sort_by_cached_key(crate::units::pair_key);
            out.push_str(&format!("solutions: {}\n", finite.len()));
            for (u, v) in &finite {
                out.push_str(&format!("solution: u = {u}, v = {v}\n"));
            }
            for fam in &families {
                out.push_str(&format!(
                    "family: u = ({}) + w*({}), v = w\n",
                    fam.u_base, fam.u_slope
                ));
            }
            0
        }
        SolutionSet::Real(fam) => {
            let (eu, ev) = fam.unit();
            out.push_str(&format!("unit: u = {eu}, v = {ev}\n"));
            let mut bases = fam.base_solutions();
            bases.sort_by_cached_key(crate::units::pair_key);
            out.push_str(&format!("orbit-bases: {}\n", bases.len()));
            for (u, v) in &bases {
                out.push_str(&format!("base: u = {u}, v = {v}\n"));
            }
            out.push_str("note: the solutions are exactly base * unit^l over all bases and integers l\n");
            u8::from(bases.is_empty())
        }
    };
    Ok((out, code))
}

fn op_bound(problem: &Problem) -> Result<(String, u8)> {
    let a = problem.matrix("A")?;
    let b = problem.matrix("B")?;
    Ok((degree_bound(a, b)?.to_text(), 0))
}

// ---------------------------------------------------------------------------
// Self-test battery.

enum Outcome {
    Pass,
    Skip(String),
}

type Check = std::result::Result<Outcome, String>;

fn ok() -> Check {
    Ok(Outcome::Pass)
}

fn skip(msg: impl Into<String>) -> Check {
    Ok(Outcome::Skip(msg.into()))
}

fn ensure(cond: bool, msg: &str) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn err_str<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn run_selftest(budget: u64, precision: i64) -> u8 {
    let checks: [(&str, Box<dyn Fn() -> Check>); 11] = [
        ("decide-worked-pair", Box::new(move || st_decide_worked(budget))),
        ("decide-refutations", Box::new(move || st_refutations(budget))),
        ("diagonal-sweep-vs-oracle", Box::new(move || st_diagonal_sweep(budget))),
        ("planted-conjugators", Box::new(move || st_planted(budget))),
        ("pell-f3", Box::new(|| st_pell())),
        ("unit-group-char2", Box::new(move || st_units_char2(budget))),
        ("norm-solver-vs-oracle", Box::new(move || st_norm_oracle(budget))),
        ("centralizer-examples", Box::new(|| st_centralizer())),
        ("series-residuals", Box::new(move || st_series(precision))),
        ("degree-bounds-frozen", Box::new(|| st_bounds())),
        ("certificate-determinism", Box::new(move || st_determinism(budget))),
    ];
    let mut passed = 0usize;
    let mut failed = 0usize;
    let mut skipped = 0usize;
    for (name, check) in &checks {
        match check() {
            Ok(Outcome::Pass) => {
                passed += 1;
                println!("ok: {name}");
            }
            Ok(Outcome::Skip(msg)) => {
                skipped += 1;
                println!("skip: {name}: {msg}");
            }
            Err(msg) => {
                failed += 1;
                println!("FAIL: {name}: {msg}");
            }
        }
    }
    println!("selftest: {passed} passed, {failed} failed, {skipped} skipped");
    if failed == 0 {
        0
    } else {
        3
    }
}

fn f2() -> std::result::Result<Field, String> {
    err_str(Field::new(2, 1))
}

fn f3() -> std::result::Result<Field, String> {
    err_str(Field::new(3, 1))
}

fn mx(f: &Field, s: &str) -> std::result::Result<Matrix2, String> {
    err_str(Matrix2::parse(f, s))
}

fn pl(f: &Field, s: &str) -> std::result::Result<Poly, String> {
    err_str(Poly::parse(f, s))
}

fn st_decide_worked(budget: u64) -> Check {
    let f = f2()?;
    let a = mx(&f, "[[0,1],[x,0]]")?;
    let b = mx(&f, "[[x,x+1],[x,x]]")?;
    let cert = err_str(decide(&a, &b, budget))?;
    ensure(cert.verdict == Verdict::Conjugate, "worked pair must be conjugate")?;
    let w = cert.witness.ok_or("missing witness")?;
    ensure(w == mx(&f, "[[1,1],[0,1]]")?, "unexpected witness")?;
    ensure(verify_witness(&a, &b, &w), "witness failed re-verification")?;
    ok()
}

fn st_refutations(budget: u64) -> Check {
    let f = f2()?;
    let a = mx(&f, "[[1,0],[0,0]]")?;
    let b = mx(&f, "[[0,0],[0,0]]")?;
    let cert = err_str(decide(&a, &b, budget))?;
    ensure(
        cert.reason == Some(RefutationReason::TraceMismatch),
        "trace mismatch not detected",
    )?;
    let a = mx(&f, "[[1,1],[0,1]]")?;
    let b = mx(&f, "[[1,x],[0,1]]")?;
    let cert = err_str(decide(&a, &b, budget))?;
    ensure(cert.verdict == Verdict::NotConjugate, "unipotent pair wrongly conjugate")?;
    if budget >= 1 << 13 {
        let found = err_str(brute_decide(a.entries(), b.entries(), 2, budget))?;
        ensure(found.is_none(), "oracle disagrees with the refutation")?;
    }
    ok()
}

fn st_diagonal_sweep(budget: u64) -> Check {
    if budget < 1 << 16 {
        return skip("needs budget >= 65536 for the oracle scan");
    }
    let f = f2()?;
    let b = mx(&f, "[[0,0],[0,x]]")?;
    let mut polys = Vec::new();
    for n in 0..4i64 {
        polys.push(Poly::from_ints(&f, &[n & 1, n >> 1]));
    }
    let mut matched = 0usize;
    for i0 in 0..4 {
        for i1 in 0..4 {
            for i2 in 0..4 {
                for i3 in 0..4 {
                    let a = Matrix2::new([
                        polys[i0].clone(),
                        polys[i1].clone(),
                        polys[i2].clone(),
                        polys[i3].clone(),
                    ]);
                    if a.trace() != b.trace() || a.det() != b.det() {
                        continue;
                    }
                    matched += 1;
                    let claim = err_str(diagonal_criterion(&a, &b))?;
                    let found = err_str(brute_decide(a.entries(), b.entries(), 2, budget))?
                        .is_some();
                    ensure(claim == found, "criterion disagrees with brute force")?;
                }
            }
        }
    }
    ensure(matched > 4, "sweep found too few matched pairs")?;
    ok()
}

fn st_planted(budget: u64) -> Check {
    let f = f2()?;
    let pairs2 = [("[[1,1],[x,x+1]]", "[[0,1],[1,x]]"), ("[[1,1],[x,0]]", "[[0,1],[x,1]]")];
    for (sa, sb) in pairs2 {
        let a = mx(&f, sa)?;
        let b = mx(&f, sb)?;
        let cert = err_str(decide(&a, &b, budget))?;
        ensure(cert.verdict == Verdict::Conjugate, "planted pair not recognized")?;
        let w = cert.witness.ok_or("missing witness")?;
        ensure(verify_witness(&a, &b, &w), "witness failed re-verification")?;
    }
    let f = f3()?;
    let pairs3 = [("[[1,2],[2*x+2,x+2]]", "[[0,2],[1,x]]"), ("[[0,1],[2,x]]", "[[0,2],[1,x]]")];
    for (sa, sb) in pairs3 {
        let a = mx(&f, sa)?;
        let b = mx(&f, sb)?;
        let cert = err_str(decide(&a, &b, budget))?;
        ensure(cert.verdict == Verdict::Conjugate, "planted pair not recognized")?;
        let w = cert.witness.ok_or("missing witness")?;
        ensure(verify_witness(&a, &b, &w), "witness failed re-verification")?;
    }
    ok()
}

fn st_pell() -> Check {
    let f = f3()?;
    let d = pl(&f, "x^2+1")?;
    let (u, v) = err_str(pell_fundamental(&d, STEPS))?;
    ensure(u == pl(&f, "x^2+2")?, "unexpected Pell u")?;
    ensure(v == Poly::x(&f), "unexpected Pell v")?;
    let lhs = &(&u * &u) - &(&(&d * &v) * &v);
    ensure(lhs.is_one(), "Pell identity failed")?;
    ok()
}

fn st_units_char2(budget: u64) -> Check {
    let f = f2()?;
    let b = Poly::x(&f);
    let c = Poly::one(&f);
    let ctx = err_str(QuadContext::from_monic(&b, &c))?;
    let (u, v) = err_str(fundamental_unit(&ctx, STEPS))?;
    ensure(
        (u.clone(), v.clone()) == (Poly::zero(&f), Poly::one(&f)),
        "unexpected fundamental unit",
    )?;
    let n = &(&(&u * &u) + &(&(&b * &u) * &v)) + &(&(&c * &v) * &v);
    ensure(n.is_one(), "fundamental unit norm is not 1")?;
    if budget >= 1 << 13 {
        let all = err_str(brute_units(&b, &c, 2, budget))?;
        ensure(all.contains(&(u, v)), "brute scan misses the fundamental unit")?;
        let min_nonconst = all
            .iter()
            .filter(|(_, pv)| !pv.is_zero())
            .map(|(pu, pv)| {
                let du = pu.deg().finite().unwrap_or(-1);
                let dv = pv.deg().finite().unwrap_or(-1) + 1;
                du.max(dv)
            })
            .min();
        ensure(min_nonconst == Some(1), "minimal nonconstant unit degree is not 1")?;
    }
    ok()
}

fn st_norm_oracle(budget: u64) -> Check {
    if budget < 1 << 13 {
        return skip("needs budget >= 8192 for the oracle scan");
    }
    // Inseparable instance: a unique solution.
    let f = f2()?;
    let b = Poly::zero(&f);
    let c = pl(&f, "x^2+x")?;
    let d = pl(&f, "x^2")?;
    let ctx = err_str(QuadContext::from_monic(&b, &c))?;
    let got = match err_str(normsolver::solve(&ctx, &d, STEPS, budget))? {
        SolutionSet::Finite(sols) => sols,
        _ => return Err("inseparable instance should have a finite solution set".into()),
    };
    let want = err_str(brute_norm_solutions(&b, &c, &d, 2, budget))?;
    let mut got_sorted = got;
    got_sorted.sort_by_cached_key(crate::units::pair_key);
    let mut want_sorted = want;
    want_sorted.sort_by_cached_key(crate::units::pair_key);
    ensure(got_sorted == want_sorted, "inseparable solutions differ from brute force")?;
    // Real instance: orbit members inside the window must match exactly.
    let f = f3()?;
    let b = Poly::zero(&f);
    let c = pl(&f, "2*x^2+2")?;
    let d = Poly::one(&f);
    let ctx = err_str(QuadContext::from_monic(&b, &c))?;
    let fam = match err_str(normsolver::solve(&ctx, &d, STEPS, budget))? {
        SolutionSet::Real(fam) => fam,
        _ => return Err("Pell instance should be a real case".into()),
    };
    let window = 2i64;
    let mut got = Vec::new();
    for i in 0..fam.len() {
        for l in -3..=3i64 {
            let (u, v) = fam.member(i, l);
            let du = u.deg().finite().unwrap_or(i64::MIN);
            let dv = v.deg().finite().unwrap_or(i64::MIN);
            if du <= window && dv <= window {
                got.push((u, v));
            }
        }
    }
    got.sort_by_cached_key(crate::units::pair_key);
    got.dedup();
    let mut want = err_str(brute_norm_solutions(&b, &c, &d, window, budget))?;
    want.sort_by_cached_key(crate::units::pair_key);
    ensure(got == want, "real-case window differs from brute force")?;
    ok()
}

fn st_centralizer() -> Check {
    let f = f2()?;
    let a = mx(&f, "[[0,1],[1,x]]")?;
    let report = err_str(centralizer_generator(&a, STEPS))?;
    let gen = report.generator.ok_or("missing generator")?;
    ensure(&gen * &a == &a * &gen, "generator does not commute")?;
    ensure(gen.det().is_unit(), "generator determinant is not a unit")?;
    ensure(gen.deg() <= 4, "generator degree exceeds the cap")?;
    let a = mx(&f, "[[0,1],[x,0]]")?;
    let report = err_str(centralizer_generator(&a, STEPS))?;
    ensure(report.generator.is_none(), "imaginary-type centralizer not finite")?;
    ok()
}

fn st_series(precision: i64) -> Check {
    let floor = -precision.max(4);
    // Characteristic 2: the large root of z^2 + x*z + 1 via an
    // Artin-Schreier substitution z = x*w, w^2 + w = x^-2.
    let f = f2()?;
    let rhs = LaurentSeries::monomial(&f, f.one(), -2);
    let w = err_str(rhs.artin_schreier_root_to(floor - 2))?;
    let z = w.shift(1);
    let x = LaurentSeries::from_poly(&Poly::x(&f));
    let one = LaurentSeries::from_poly(&Poly::one(&f));
    let residual = &(&(&z * &z) + &(&x * &z)) + &one;
    let zero = LaurentSeries::zero(&f);
    ensure(
        err_str(residual.agrees_to(&zero, floor))?,
        "char-2 quadratic residual does not vanish",
    )?;
    // Odd characteristic: sqrt(x^2+1) squares back through precision.
    let f = f3()?;
    let dd = LaurentSeries::from_poly(&pl(&f, "x^2+1")?);
    let root = err_str(dd.sqrt_to(floor - 2))?;
    ensure(
        err_str((&root * &root).agrees_to(&dd, floor))?,
        "odd-characteristic square root residual does not vanish",
    )?;
    ok()
}

fn st_bounds() -> Check {
    use num_bigint::BigUint;
    let f = f2()?;
    let report = err_str(degree_bound(
        &mx(&f, "[[1,1],[x,0]]")?,
        &mx(&f, "[[0,1],[x,1]]")?,
    ))?;
    ensure(report.bound == BigUint::from(2u32), "imaginary bound is not 2")?;
    let report = err_str(degree_bound(
        &mx(&f, "[[1,1],[x,x+1]]")?,
        &mx(&f, "[[0,1],[1,x]]")?,
    ))?;
    ensure(report.bound == BigUint::from(66u32), "char-2 real bound is not 66")?;
    let f = f3()?;
    let report = err_str(degree_bound(
        &mx(&f, "[[1,2],[2*x+2,x+2]]")?,
        &mx(&f, "[[0,2],[1,x]]")?,
    ))?;
    ensure(report.bound == BigUint::from(8748u32), "odd real bound is not 8748")?;
    ok()
}

fn st_determinism(budget: u64) -> Check {
    let f = f2()?;
    let a = mx(&f, "[[1,1],[x,x+1]]")?;
    let b = mx(&f, "[[0,1],[1,x]]")?;
    let first = err_str(decide(&a, &b, budget))?.to_text();
    let second = err_str(decide(&a, &b, budget))?.to_text();
    ensure(first == second, "certificate text is not reproducible")?;
    ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_files_parse() {
        let text = "# a comment\nfield p=2 k=1\nA = [[0,1],[x,0]]\nB = [[x,x+1],[x,x]]\nd = x^2 # trailing\n";
        let problem = parse_problem(text).unwrap();
        assert!(problem.matrix("A").is_ok());
        assert!(problem.matrix("B").is_ok());
        assert!(problem.poly("d").is_ok());
        assert!(problem.poly("c").is_err());
        assert_eq!(problem.any_field().unwrap().q(), 2);
    }

    #[test]
    fn problem_file_errors_carry_positions() {
        let missing = parse_problem("\n\n");
        assert!(matches!(missing, Err(Error::Parse { line: 1, col: 1, .. })));
        let unknown = parse_problem("field p=2 k=1\nZ = 1\n");
        assert!(matches!(unknown, Err(Error::Parse { line: 2, .. })));
        let dup = parse_problem("field p=2 k=1\nA = [[1,0],[0,1]]\nA = [[1,0],[0,1]]\n");
        assert!(matches!(dup, Err(Error::Parse { line: 3, .. })));
        let bad_value = parse_problem("field p=2 k=1\nA = [[1,0],[0,)]]\n");
        match bad_value {
            Err(Error::Parse { line: 2, col, .. }) => assert!(col > 1),
            Err(other) => panic!("expected a positioned parse error, got {other:?}"),
            Ok(_) => panic!("expected a positioned parse error, got a parse"),
        }
        let no_eq = parse_problem("field p=2 k=1\njust words\n");
        assert!(matches!(no_eq, Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn decide_report_and_exit_codes() {
        let text = "field p=2 k=1\nA = [[0,1],[x,0]]\nB = [[x,x+1],[x,x]]\n";
        let problem = parse_problem(text).unwrap();
        let (out, code) = op_decide(&problem, 1 << 22, true).unwrap();
        assert_eq!(code, 0);
        assert!(out.starts_with("verdict: conjugate\n"));
        assert!(out.contains("witness: [[1,1],[0,1]]\n"));
        assert!(out.ends_with("U = [[1,1],[0,1]]\n"));

        let text = "field p=2 k=1\nA = [[1,0],[0,0]]\nB = [[0,0],[0,0]]\n";
        let problem = parse_problem(text).unwrap();
        let (out, code) = op_decide(&problem, 1 << 22, false).unwrap();
        assert_eq!(code, 1);
        assert!(out.contains("reason: trace-mismatch\n"));
    }

    #[test]
    fn pell_report() {
        let text = "field p=3 k=1\nD = x^2+1\n";
        let problem = parse_problem(text).unwrap();
        let (out, code) = op_pell(&problem).unwrap();
        assert_eq!(code, 0);
        assert_eq!(out, "u = x^2+2\nv = x\ncheck: u^2 - D*v^2 = 1\n");

        let text = "field p=3 k=1\nD = x^2\n";
        let problem = parse_problem(text).unwrap();
        let (out, code) = op_pell(&problem).unwrap();
        assert_eq!(code, 1);
        assert!(out.starts_with("no nontrivial solution:"));
    }

    #[test]
    fn units_and_solve_norm_reports() {
        let text = "field p=2 k=1\nb = x\nc = 1\n";
        let problem = parse_problem(text).unwrap();
        let (out, code) = op_units(&problem).unwrap();
        assert_eq!(code, 0);
        assert_eq!(out, "unit-group: fundamental-unit\nu = 0\nv = 1\nnorm = 1\n");

        let text = "field p=2 k=1\nc = x\n";
        let problem = parse_problem(text).unwrap();
        let (out, code) = op_units(&problem).unwrap();
        assert_eq!(code, 1);
        assert_eq!(out, "unit-group: constants-only\n");

        let text = "field p=2 k=1\nc = x^2+x\nd = x^2\n";
        let problem = parse_problem(text).unwrap();
        let (out, code) = op_solve_norm(&problem, 1 << 22).unwrap();
        assert_eq!(code, 0);
        assert_eq!(out, "case: inseparable\nsolutions: 1\nsolution: u = x, v = 0\n");
    }

    #[test]
    fn selftest_battery_passes() {
        assert_eq!(run_selftest(1 << 22, 16), 0);
    }
}
