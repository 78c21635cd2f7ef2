//! Command-line front end: parse DSL inputs, run the checkers and the
//! codescent/Fubini/co-Yoneda computations, and emit JSON/DOT/text reports.
//!
//! Exit codes (frozen by golden tests):
//! 0 — success, all checks passed;
//! 1 — a semantic check failed;
//! 2 — parse or input error;
//! 3 — the completion budget was exhausted.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bicoend::codescent::{bicoend as compute_bicoend, check_cocone, pi0_oracle};
use bicoend::derived::coyoneda_object;
use bicoend::dsl::{elaborate, parse_document, Elaborated, PfElab};
use bicoend::error::Error;
use bicoend::fincat::{check_category, verify_adjoint_equivalence, FinCat};
use bicoend::fubini::{fubini_equivalence, interchange};
use bicoend::pseudo::check_pseudofunctor;
use bicoend::report::{Report, REPORT_SCHEMA};
use bicoend::twocat::check_two_category;

#[derive(Parser)]
#[command(name = "bicoend", version, about = "finite bicodescent engine")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a document and run every applicable axiom checker.
    Check(Common),
    /// Compute the codescent object of the first pseudofunctor over [B^op, B].
    Codescent(Common),
    /// Verify the joint/iterated equivalence for the first pseudofunctor over
    /// [A^op, B^op, A, B].
    Fubini(Fubini),
    /// Compute the co-Yoneda object of the first pseudofunctor over A^op and
    /// compare π0 with the input pointwise.
    Coyoneda(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct Common {
    /// Input file in the presentations DSL.
    input: PathBuf,
    /// Completion step budget.
    #[arg(long, env = "BICOEND_BUDGET", default_value_t = 1_000_000)]
    budget: u64,
    /// Seed recorded in reports (reserved for randomized subcommands).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct Fubini {
    #[command(flatten)]
    common: Common,
    /// Also verify the interchange equivalence between both nesting orders.
    #[arg(long)]
    interchange: bool,
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARSE_ERROR: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExhausted(_) => EXIT_BUDGET,
        Error::SyntaxError { .. }
        | Error::BoundaryError(_)
        | Error::MalformedTables(_)
        | Error::BoundaryMismatch(_) => EXIT_PARSE_ERROR,
        _ => EXIT_CHECK_FAILED,
    }
}

fn load(common: &Common) -> Result<Elaborated, u8> {
    let text = std::fs::read_to_string(&common.input).map_err(|e| {
        eprintln!("bicoend: cannot read {}: {e}", common.input.display());
        EXIT_PARSE_ERROR
    })?;
    let doc = parse_document(&text).map_err(|e| {
        eprintln!("bicoend: {e}");
        EXIT_PARSE_ERROR
    })?;
    elaborate(&doc, common.budget).map_err(|e| {
        eprintln!("bicoend: {e}");
        exit_code_for(&e)
    })
}

/// Render a checker report as one JSON value.
fn report_json(r: &Report) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn print_report_text(r: &Report) {
    let verdict = if r.is_pass() { "pass" } else { "FAIL" };
    println!("{}: {verdict}", r.subject);
    for f in r.failures() {
        println!(
            "  {} at {}: {}",
            f.axiom,
            f.instance,
            f.counterexample.as_deref().unwrap_or("")
        );
    }
}

/// Stable DOT rendering of a finite category: objects as nodes, non-identity
/// morphisms as edges, both in table order.
fn dot_of(name: &str, c: &FinCat) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph \"{name}\" {{\n"));
    for o in &c.objects {
        out.push_str(&format!("  \"{o}\";\n"));
    }
    for (m, (s, t)) in &c.mor {
        if c.id_of(s) == m {
            continue;
        }
        out.push_str(&format!("  \"{s}\" -> \"{t}\" [label=\"{m}\"];\n"));
    }
    out.push_str("}\n");
    out
}

/// Find the first pseudofunctor whose shape satisfies a predicate.
fn pick_pf<'a>(
    el: &'a Elaborated,
    what: &str,
    pred: impl Fn(&PfElab) -> bool,
) -> Result<&'a PfElab, u8> {
    el.pfs.iter().find(|p| pred(p)).ok_or_else(|| {
        eprintln!("bicoend: no pseudofunctor over {what} in the input");
        EXIT_PARSE_ERROR
    })
}

fn cmd_check(common: &Common) -> Result<u8, u8> {
    let el = load(common)?;
    let mut reports = Vec::new();
    for (name, r) in &el.cats {
        let mut rep = check_category(&r.cat).map_err(|e| {
            eprintln!("bicoend: category {name}: {e}");
            EXIT_CHECK_FAILED
        })?;
        rep.subject = format!("category {name}");
        reports.push(rep);
    }
    for (name, t) in &el.twocats {
        let mut rep = check_two_category(t).map_err(|e| {
            eprintln!("bicoend: twocat {name}: {e}");
            EXIT_CHECK_FAILED
        })?;
        rep.subject = format!("twocat {name}");
        reports.push(rep);
    }
    for pf in &el.pfs {
        let mut rep = check_pseudofunctor(&pf.p);
        rep.subject = format!("pseudofunctor {}", pf.name);
        reports.push(rep);
    }
    let all_pass = reports.iter().all(|r| r.is_pass());
    match common.format {
        Format::Json => {
            let v = json!({
                "schema": REPORT_SCHEMA,
                "command": "check",
                "seed": common.seed,
                "budget": common.budget,
                "pass": all_pass,
                "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
        }
        Format::Text => {
            for r in &reports {
                print_report_text(r);
            }
        }
        Format::Dot => {
            for (name, r) in &el.cats {
                print!("{}", dot_of(name, &r.cat));
            }
        }
    }
    Ok(if all_pass { 0 } else { EXIT_CHECK_FAILED })
}

/// Run `check` semantics quietly; exit 1 if the input pseudofunctor fails.
fn require_valid(pf: &PfElab) -> Result<(), u8> {
    let rep = check_pseudofunctor(&pf.p);
    if !rep.is_pass() {
        let f = rep.first_failure().expect("failing report has an entry");
        eprintln!(
            "bicoend: pseudofunctor {} fails {} at {}",
            pf.name, f.axiom, f.instance
        );
        return Err(EXIT_CHECK_FAILED);
    }
    Ok(())
}

fn square_pf(p: &PfElab) -> bool {
    p.shape.arity() == 2 && p.shape.factors[0].1 && !p.shape.factors[1].1
}

fn joint_pf(p: &PfElab) -> bool {
    p.shape.arity() == 4
        && p.shape.factors[0].1
        && p.shape.factors[1].1
        && !p.shape.factors[2].1
        && !p.shape.factors[3].1
}

fn cmd_codescent(common: &Common) -> Result<u8, u8> {
    let el = load(common)?;
    let pf = pick_pf(&el, "[B^op, B]", square_pf)?;
    require_valid(pf)?;
    let c = compute_bicoend(&pf.p, &pf.shape, common.budget).map_err(|e| {
        eprintln!("bicoend: {e}");
        exit_code_for(&e)
    })?;
    let bc = check_cocone(&c.data, &c.sol);
    let pi0 = c.sol.apex.pi0().len();
    let oracle = pi0_oracle(&c.data).len();
    let ok = bc.is_pass() && pi0 == oracle;
    match common.format {
        Format::Json => {
            let v = json!({
                "schema": REPORT_SCHEMA,
                "command": "codescent",
                "seed": common.seed,
                "budget": common.budget,
                "pseudofunctor": pf.name,
                "apex_objects": c.sol.apex.objects.len(),
                "apex_morphisms": c.sol.apex.mor.len(),
                "pi0": pi0,
                "pi0_oracle": oracle,
                "cocone": report_json(&bc),
                "pass": ok,
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
        }
        Format::Text => {
            println!("codescent of {}", pf.name);
            println!("  apex: {} objects, {} morphisms", c.sol.apex.objects.len(), c.sol.apex.mor.len());
            println!("  pi0: {pi0} (oracle {oracle})");
            print_report_text(&bc);
        }
        Format::Dot => {
            print!("{}", dot_of(&format!("codescent_{}", pf.name), &c.sol.apex));
        }
    }
    Ok(if ok { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_fubini(args: &Fubini) -> Result<u8, u8> {
    let common = &args.common;
    let el = load(common)?;
    let pf = pick_pf(&el, "[A^op, B^op, A, B]", joint_pf)?;
    require_valid(pf)?;
    let b = fubini_equivalence(&pf.p, &pf.shape, common.budget).map_err(|e| {
        eprintln!("bicoend: {e}");
        exit_code_for(&e)
    })?;
    let witness = verify_adjoint_equivalence(&b.witness);
    let joint_pi0 = b.core.joint.sol.apex.pi0().len();
    let outer_pi0 = b.core.outer.sol.apex.pi0().len();
    let mut ok = witness.is_pass() && joint_pi0 == outer_pi0;
    let mut inter_json = json!(null);
    let mut inter_text = String::new();
    if args.interchange {
        let i = interchange(&pf.p, &pf.shape, common.budget).map_err(|e| {
            eprintln!("bicoend: {e}");
            exit_code_for(&e)
        })?;
        let iw = verify_adjoint_equivalence(&i.witness);
        let ab_pi0 = i.ab.core.outer.sol.apex.pi0().len();
        let ba_pi0 = i.ba.core.outer.sol.apex.pi0().len();
        ok = ok && iw.is_pass() && ab_pi0 == ba_pi0;
        inter_json = json!({
            "pi0_ab": ab_pi0,
            "pi0_ba": ba_pi0,
            "witness": report_json(&iw),
        });
        inter_text = format!("  interchange: pi0 {ab_pi0} vs {ba_pi0}, witness {}",
            if iw.is_pass() { "pass" } else { "FAIL" });
    }
    match common.format {
        Format::Json => {
            let v = json!({
                "schema": REPORT_SCHEMA,
                "command": "fubini",
                "seed": common.seed,
                "budget": common.budget,
                "pseudofunctor": pf.name,
                "joint_objects": b.core.joint.sol.apex.objects.len(),
                "outer_objects": b.core.outer.sol.apex.objects.len(),
                "pi0_joint": joint_pi0,
                "pi0_iterated": outer_pi0,
                "witness": report_json(&witness),
                "interchange": inter_json,
                "pass": ok,
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
        }
        Format::Text => {
            println!("fubini for {}", pf.name);
            println!("  joint: {} objects, pi0 {joint_pi0}", b.core.joint.sol.apex.objects.len());
            println!("  iterated: {} objects, pi0 {outer_pi0}", b.core.outer.sol.apex.objects.len());
            print_report_text(&witness);
            if !inter_text.is_empty() {
                println!("{inter_text}");
            }
        }
        Format::Dot => {
            print!("{}", dot_of(&format!("fubini_joint_{}", pf.name), &b.core.joint.sol.apex));
        }
    }
    Ok(if ok { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_coyoneda(common: &Common) -> Result<u8, u8> {
    let el = load(common)?;
    let pf = pick_pf(&el, "A^op", |p| p.shape.arity() == 1 && p.shape.factors[0].1)?;
    require_valid(pf)?;
    let a2 = pf.shape.factors[0].0.clone();
    let cy = coyoneda_object(&pf.p, &a2, common.budget).map_err(|e| {
        eprintln!("bicoend: {e}");
        exit_code_for(&e)
    })?;
    // Pointwise π0 comparison: co-Yoneda says I(F)(b) ≃ F(b).
    let mut per = Vec::new();
    let mut ok = true;
    for b in &a2.objects {
        let got = cy.param.fun.at_ob(b).pi0().len();
        let want = pf.p.at_ob(b).pi0().len();
        ok = ok && got == want;
        per.push((b.clone(), got, want));
    }
    match common.format {
        Format::Json => {
            let v = json!({
                "schema": REPORT_SCHEMA,
                "command": "coyoneda",
                "seed": common.seed,
                "budget": common.budget,
                "pseudofunctor": pf.name,
                "per_object": per.iter().map(|(b, got, want)| json!({
                    "object": b, "pi0_coyoneda": got, "pi0_input": want,
                })).collect::<Vec<_>>(),
                "pass": ok,
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
        }
        Format::Text => {
            println!("coyoneda of {}", pf.name);
            for (b, got, want) in &per {
                println!("  at {b}: pi0 {got} (input {want})");
            }
            println!("match: {}", if ok { "pass" } else { "FAIL" });
        }
        Format::Dot => {
            for b in &a2.objects {
                print!("{}", dot_of(&format!("coyoneda_{}_{b}", pf.name), cy.param.fun.at_ob(b)));
            }
        }
    }
    Ok(if ok { 0 } else { EXIT_CHECK_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Check(c) => cmd_check(c),
        Cmd::Codescent(c) => cmd_codescent(c),
        Cmd::Fubini(f) => cmd_fubini(f),
        Cmd::Coyoneda(c) => cmd_coyoneda(c),
    };
    match outcome {
        Ok(code) | Err(code) => ExitCode::from(code),
    }
}
