//! `dlok0` — definable sets over the rational order: atomic decompositions,
//! definable-bijection invariants, and the Grothendieck ring presentation.
//!
//! Exit codes: `0` success / checked identity holds, `1` checked property is
//! false (for example `equiv` answering "not equivalent"), `2` usage or
//! parse error.

mod expr;

use clap::{Args, Parser, Subcommand};
use dlo_k0::atoms::{split, Atom};
use dlo_k0::characteristic::{chi, Characteristic, ParamSet};
use dlo_k0::formula::{CTerm, Formula, Node, PositiveDnf, Rel, Term};
use dlo_k0::genring::{
    parse_genpoly, relation_multiplier, verify_convolution, verify_factorial,
    verify_iprime_congruence, zeta, zeta_inv,
};
use dlo_k0::grothendieck as k0;
use dlo_k0::oracle::{atom_product_split, delannoy, random_definable_set};
use dlo_k0::qe::eliminate_quantifiers;
use dlo_k0::rat::{factorial, format_rat, parse_rat, rat_int, BigInt};
use expr::eval_k0_expr;
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dlok0",
    version,
    about = "Definable-set invariants and the Grothendieck ring of a dense linear order"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and show its syntax tree and variable order.
    Parse(FormulaArgs),
    /// Eliminate quantifiers, printing an equivalent positive DNF.
    Qe(FormulaArgs),
    /// Decompose a definable set into its atoms over a parameter set.
    Split(SetArgs),
    /// Compute the global characteristic of a definable set.
    Chi(SetArgs),
    /// Decide whether two definable sets admit a definable bijection.
    Equiv(EquivArgs),
    /// Arithmetic on K0 elements given by expressions.
    K0(K0Args),
    /// Map a generator polynomial into K0.
    Zeta(ZetaArgs),
    /// Normal-form generator polynomial of a K0 element.
    ZetaInv(ExprArgs),
    /// Run the identity verifiers.
    Verify(VerifyArgs),
    /// Deterministic random definable set (a union of atoms).
    RandomSet(RandomSetArgs),
}

#[derive(Args)]
struct FormulaArgs {
    /// Formula text, e.g. "E y. (x < y & y < 1)".
    #[arg(short, long)]
    formula: String,
    /// Comma-separated free-variable order, e.g. "x,y".
    #[arg(long)]
    vars: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SetArgs {
    /// Formula text (quantifiers allowed; they are eliminated first).
    #[arg(short, long)]
    formula: String,
    /// Comma-separated free-variable order.
    #[arg(long)]
    vars: Option<String>,
    /// Comma-separated parameter values, e.g. "1,0"; the formula's own
    /// parameters are always included.
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long)]
    f1: String,
    #[arg(long)]
    f2: String,
    #[arg(long)]
    vars1: Option<String>,
    #[arg(long)]
    vars2: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct K0Args {
    #[command(subcommand)]
    op: K0Op,
}

#[derive(Subcommand)]
enum K0Op {
    /// Sum of two elements.
    Add(BinaryExprArgs),
    /// Product of two elements.
    Mul(BinaryExprArgs),
    /// Additive inverse.
    Neg(ExprArgs),
    /// Normal-form generator polynomial (inverse of zeta).
    Normalform(ExprArgs),
    /// Search for a refinement exhibiting the element as a class of an
    /// actual definable set (all coefficients non-negative).
    Effective(EffectiveArgs),
}

#[derive(Args)]
struct EffectiveArgs {
    #[arg(long)]
    expr: String,
    #[arg(long)]
    params: Option<String>,
    /// Maximum number of fresh parameters to insert.
    #[arg(long, default_value_t = 3)]
    budget: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BinaryExprArgs {
    #[arg(long)]
    e1: String,
    #[arg(long)]
    e2: String,
    /// Extra parameters to evaluate over.
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExprArgs {
    /// K0 expression: chi(<formula>), X(a;n), integers, +, -, *.
    #[arg(long)]
    expr: String,
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ZetaArgs {
    /// Generator polynomial, e.g. "3*X(0;2)*X(-inf;1) - X(1/2;1)".
    #[arg(long)]
    poly: String,
    /// Extra parameters to evaluate over (the polynomial's own parameters
    /// are always included).
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    what: VerifyWhat,
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// Convolution identity for splitting a bounded chain at an interior point.
    Convolution {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Factorial identity for bounded chains.
    Factorial {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Falling-factorial congruence for the relation rel(k, l).
    Iprime {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
    /// Pigeonhole: a proper subset is never in definable bijection with the
    /// whole set. Give --f1/--f2, or --trials for seeded random pairs.
    Php {
        #[arg(long)]
        f1: Option<String>,
        #[arg(long)]
        f2: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Injection-nonexistence certificates in both directions (failure of
    /// comparability).
    Cc1 {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
    },
    /// Cancellation law on seeded random triples.
    Cancellativity {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Product coefficients against the interleaving oracle and Delannoy totals.
    Delannoy {
        #[arg(long, default_value_t = 4)]
        max: usize,
    },
}

#[derive(Args)]
struct RandomSetArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Parse(args) => cmd_parse(args),
        Command::Qe(args) => cmd_qe(args),
        Command::Split(args) => cmd_split(args),
        Command::Chi(args) => cmd_chi(args),
        Command::Equiv(args) => cmd_equiv(args),
        Command::K0(args) => cmd_k0(args),
        Command::Zeta(args) => cmd_zeta(args),
        Command::ZetaInv(args) => cmd_zeta_inv(args),
        Command::Verify(args) => cmd_verify(args),
        Command::RandomSet(args) => cmd_random_set(args),
    }
}

// ---------------------------------------------------------------------------
// Shared parsing helpers

fn parse_vars(vars: &Option<String>) -> Option<Vec<String>> {
    vars.as_ref().map(|v| {
        v.split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    })
}

fn parse_params(params: &Option<String>) -> Result<ParamSet, String> {
    let mut values = Vec::new();
    if let Some(text) = params {
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            values.push(parse_rat(part)?);
        }
    }
    Ok(ParamSet::new(values))
}

fn load_formula(text: &str, vars: &Option<String>) -> Result<Formula, String> {
    let order = parse_vars(vars);
    Formula::parse(text, order.as_deref()).map_err(|e| e.to_string())
}

/// Parses a formula and reduces it to a quantifier-free positive DNF.
fn load_set(text: &str, vars: &Option<String>) -> Result<PositiveDnf, String> {
    Ok(eliminate_quantifiers(&load_formula(text, vars)?))
}

fn set_params(d: &PositiveDnf, extra: &Option<String>) -> Result<ParamSet, String> {
    Ok(ParamSet::new(
        d.params()
            .into_iter()
            .chain(parse_params(extra)?.values().iter().cloned()),
    ))
}

fn emit(json_mode: bool, value: Value, text: String) -> ExitCode {
    if json_mode {
        println!("{value}");
    } else {
        println!("{text}");
    }
    ExitCode::SUCCESS
}

// ---------------------------------------------------------------------------
// JSON renderings

fn term_json(t: &Term) -> Value {
    match t {
        Term::Var(v) => json!({ "var": v }),
        Term::Const(c) => json!({ "const": format_rat(c) }),
    }
}

fn node_json(node: &Node) -> Value {
    match node {
        Node::True => json!({ "op": "true" }),
        Node::False => json!({ "op": "false" }),
        Node::Atom(l, rel, r) => json!({
            "op": "atom",
            "lhs": term_json(l),
            "rel": match rel { Rel::Lt => "<", Rel::Eq => "=" },
            "rhs": term_json(r),
        }),
        Node::Not(x) => json!({ "op": "not", "arg": node_json(x) }),
        Node::And(a, b) => json!({ "op": "and", "args": [node_json(a), node_json(b)] }),
        Node::Or(a, b) => json!({ "op": "or", "args": [node_json(a), node_json(b)] }),
        Node::Implies(a, b) => json!({ "op": "implies", "args": [node_json(a), node_json(b)] }),
        Node::Exists(v, body) => json!({ "op": "exists", "var": v, "body": node_json(body) }),
        Node::Forall(v, body) => json!({ "op": "forall", "var": v, "body": node_json(body) }),
    }
}

fn cterm_string(t: &CTerm, vars: &[String]) -> String {
    match t {
        CTerm::Var(i) => vars[*i].clone(),
        CTerm::Const(c) => format_rat(c),
    }
}

fn dnf_json(d: &PositiveDnf) -> Value {
    let clauses: Vec<Value> = d
        .clauses()
        .map(|clause| {
            let parts: Vec<String> = clause
                .constraints()
                .map(|c| {
                    let rel = match c.rel {
                        Rel::Lt => "<",
                        Rel::Eq => "=",
                    };
                    format!(
                        "{} {rel} {}",
                        cterm_string(&c.lhs, d.vars()),
                        cterm_string(&c.rhs, d.vars())
                    )
                })
                .collect();
            json!(parts)
        })
        .collect();
    json!({ "vars": d.vars(), "dnf": d.to_string(), "clauses": clauses })
}

fn atom_json(a: &Atom, names: &[String]) -> Value {
    let blocks: Vec<Value> = a
        .blocks()
        .iter()
        .map(|b| {
            let vars: Vec<&String> = b.vars.iter().map(|v| &names[*v]).collect();
            json!({
                "vars": vars,
                "pin": b.pin.as_ref().map(format_rat),
            })
        })
        .collect();
    json!({
        "chain": a.chain_string(names),
        "blocks": blocks,
        "color": a.color().counts(),
        "height": a.height(),
    })
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_parse(args: FormulaArgs) -> Result<ExitCode, String> {
    let f = load_formula(&args.formula, &args.vars)?;
    let value = json!({
        "text": f.to_string(),
        "vars": f.vars(),
        "tree": node_json(f.node()),
    });
    let text = format!("{f}\nvars: {}", f.vars().join(", "));
    Ok(emit(args.json, value, text))
}

fn cmd_qe(args: FormulaArgs) -> Result<ExitCode, String> {
    let d = load_set(&args.formula, &args.vars)?;
    Ok(emit(args.json, dnf_json(&d), d.to_string()))
}

fn cmd_split(args: SetArgs) -> Result<ExitCode, String> {
    let d = load_set(&args.formula, &args.vars)?;
    let params = set_params(&d, &args.params)?;
    let atoms = split(&d, params.values());
    let names = d.vars().to_vec();
    let value = json!({
        "params": params.values().iter().map(format_rat).collect::<Vec<_>>(),
        "count": atoms.len(),
        "atoms": atoms.iter().map(|a| atom_json(a, &names)).collect::<Vec<_>>(),
    });
    let mut lines = vec![format!("{} atoms over {params}", atoms.len())];
    for a in &atoms {
        lines.push(a.chain_string(&names));
    }
    Ok(emit(args.json, value, lines.join("\n")))
}

fn cmd_chi(args: SetArgs) -> Result<ExitCode, String> {
    let d = load_set(&args.formula, &args.vars)?;
    let params = set_params(&d, &args.params)?;
    let c = chi(&d, &params);
    Ok(emit(args.json, c.to_json(), c.to_string()))
}

fn cmd_equiv(args: EquivArgs) -> Result<ExitCode, String> {
    let d1 = load_set(&args.f1, &args.vars1)?;
    let d2 = load_set(&args.f2, &args.vars2)?;
    let (equal, witness) = dlo_k0::characteristic::equivalent(&d1, &d2);
    let c1 = chi(&d1, &witness);
    let c2 = chi(&d2, &witness);
    let value = json!({
        "equivalent": equal,
        "witness_params": witness.values().iter().map(format_rat).collect::<Vec<_>>(),
        "chi1": c1.to_json(),
        "chi2": c2.to_json(),
    });
    let verdict = if equal {
        "equivalent"
    } else {
        "not equivalent"
    };
    let text = format!("{verdict}\nwitness params: {witness}\nchi1: {c1}\nchi2: {c2}");
    if args.json {
        println!("{value}");
    } else {
        println!("{text}");
    }
    Ok(if equal {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_k0(args: K0Args) -> Result<ExitCode, String> {
    match args.op {
        K0Op::Add(a) => k0_binary(a, k0::add),
        K0Op::Mul(a) => k0_binary(a, k0::mul),
        K0Op::Neg(a) => {
            let extra = parse_params(&a.params)?;
            let (value, _) = eval_k0_expr(&a.expr, &extra)?;
            let result = value.neg();
            Ok(emit(a.json, result.to_json(), result.to_string()))
        }
        K0Op::Normalform(a) => {
            let extra = parse_params(&a.params)?;
            let (value, _) = eval_k0_expr(&a.expr, &extra)?;
            let poly = zeta_inv(&value);
            Ok(emit(
                a.json,
                json!({ "poly": poly.to_string() }),
                poly.to_string(),
            ))
        }
        K0Op::Effective(a) => {
            let extra = parse_params(&a.params)?;
            let (value, _) = eval_k0_expr(&a.expr, &extra)?;
            match k0::is_effective(&value, a.budget) {
                k0::Effectiveness::Yes(witness) => {
                    let names: Vec<String> = witness.values().iter().map(format_rat).collect();
                    if a.json {
                        println!("{}", json!({ "effective": true, "witness_params": names }));
                    } else {
                        println!("effective over {witness}");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                k0::Effectiveness::NoWithinBudget => {
                    if a.json {
                        println!("{}", json!({ "effective": false, "budget": a.budget }));
                    } else {
                        println!("no witness within budget {}", a.budget);
                    }
                    Ok(ExitCode::FAILURE)
                }
            }
        }
    }
}

fn k0_binary(
    args: BinaryExprArgs,
    op: fn(&Characteristic, &Characteristic) -> Characteristic,
) -> Result<ExitCode, String> {
    let extra = parse_params(&args.params)?;
    let (v1, p1) = eval_k0_expr(&args.e1, &extra)?;
    let (v2, _) = eval_k0_expr(&args.e2, &p1)?;
    let result = op(&v1, &v2);
    Ok(emit(args.json, result.to_json(), result.to_string()))
}

fn cmd_zeta(args: ZetaArgs) -> Result<ExitCode, String> {
    let poly = parse_genpoly(&args.poly).map_err(|e| e.to_string())?;
    let params = ParamSet::new(
        poly.rational_params()
            .values()
            .iter()
            .cloned()
            .chain(parse_params(&args.params)?.values().iter().cloned()),
    );
    let image = zeta(&poly, &params).map_err(|e| e.to_string())?;
    Ok(emit(args.json, image.to_json(), image.to_string()))
}

fn cmd_zeta_inv(args: ExprArgs) -> Result<ExitCode, String> {
    let extra = parse_params(&args.params)?;
    let (value, _) = eval_k0_expr(&args.expr, &extra)?;
    let poly = zeta_inv(&value);
    Ok(emit(
        args.json,
        json!({ "poly": poly.to_string() }),
        poly.to_string(),
    ))
}

fn cmd_random_set(args: RandomSetArgs) -> Result<ExitCode, String> {
    if !(0.0..=1.0).contains(&args.density) {
        return Err("density must lie in [0, 1]".into());
    }
    let params = parse_params(&args.params)?;
    let d = random_definable_set(args.seed, args.n, &params, args.density);
    Ok(emit(args.json, dnf_json(&d), d.to_string()))
}

// ---------------------------------------------------------------------------
// Verifiers

fn verdict(holds: bool, text: String) -> ExitCode {
    let status = if holds { "holds" } else { "FAILS" };
    println!("{text}: {status}");
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    match args.what {
        VerifyWhat::Convolution { n, a, c, b } => {
            let (a, c, b) = (parse_rat(&a)?, parse_rat(&c)?, parse_rat(&b)?);
            let holds = verify_convolution(n, &a, &c, &b).map_err(|e| e.to_string())?;
            let text = format!(
                "f({b1},{a1};{n}) = sum_(i=0..{n}) f({b1},{c1};i)*f({c1},{a1};{n}-i) \
                 + sum_(i=0..{m}) f({b1},{c1};i)*f({c1},{a1};{m}-i)  at (a,c,b) = ({a1},{c1},{b1})",
                a1 = format_rat(&a),
                c1 = format_rat(&c),
                b1 = format_rat(&b),
                m = n.saturating_sub(1),
            );
            Ok(verdict(holds, text))
        }
        VerifyWhat::Factorial { n, a, b } => {
            let (a, b) = (parse_rat(&a)?, parse_rat(&b)?);
            let holds = verify_factorial(n, &a, &b).map_err(|e| e.to_string())?;
            let text = format!(
                "{n}! * f({b1},{a1};{n}) = prod_(i=0..{}) (f({b1},{a1};1) - i)",
                n.saturating_sub(1),
                a1 = format_rat(&a),
                b1 = format_rat(&b),
            );
            Ok(verdict(holds, text))
        }
        VerifyWhat::Iprime { k, l } => {
            let holds = verify_iprime_congruence(k, l).map_err(|e| e.to_string())?;
            let multiplier = relation_multiplier(k, l).map_err(|e| e.to_string())?;
            let text = format!(
                "X_{k} * prod_(i=0..{}) (X_1 - i) - {l}! * sum_(i=0..{l}) C({k}+i,i)*C({k},{l}-i)*X_({k}+i) \
                 vanishes under X_j -> (1/j!)*prod(X_1 - i); certified multiplier {multiplier} = {l}!",
                l - 1
            );
            assert_eq!(multiplier, factorial(l));
            Ok(verdict(holds, text))
        }
        VerifyWhat::Php {
            f1,
            f2,
            seed,
            trials,
        } => cmd_verify_php(f1, f2, seed, trials),
        VerifyWhat::Cc1 { f1, f2 } => {
            let d1 = load_set(&f1, &None)?;
            let d2 = load_set(&f2, &None)?;
            let fwd = k0::no_injection_certificate(&d1, &d2);
            let bwd = k0::no_injection_certificate(&d2, &d1);
            match &fwd {
                Some(cert) => println!("no injection {f1} -> {f2}: witness {cert}"),
                None => println!("no certificate for {f1} -> {f2} (inconclusive)"),
            }
            match &bwd {
                Some(cert) => println!("no injection {f2} -> {f1}: witness {cert}"),
                None => println!("no certificate for {f2} -> {f1} (inconclusive)"),
            }
            Ok(verdict(
                fwd.is_some() && bwd.is_some(),
                "comparability fails in both directions".to_string(),
            ))
        }
        VerifyWhat::Cancellativity { seed, trials } => {
            let params = ParamSet::new([rat_int(1), rat_int(0)]);
            for t in 0..trials {
                let s = seed.wrapping_add(t as u64).wrapping_mul(3);
                let a = chi(&random_definable_set(s, 1 + t % 2, &params, 0.5), &params);
                let c = chi(
                    &random_definable_set(s + 1, 1 + (t + 1) % 2, &params, 0.5),
                    &params,
                );
                let b = match t % 3 {
                    0 => a.refine(&params.with(rat_int(5))).unwrap(),
                    1 => k0::add(&a, &Characteristic::one(params.clone())),
                    _ => chi(&random_definable_set(s + 2, 1, &params, 0.5), &params),
                };
                let sums_equal = k0::eq(&k0::add(&a, &c), &k0::add(&b, &c));
                if sums_equal != k0::eq(&a, &b) {
                    return Ok(verdict(false, format!("cancellation on trial {t}")));
                }
            }
            Ok(verdict(
                true,
                format!("a + c = b + c  =>  a = b on {trials} seeded triples"),
            ))
        }
        VerifyWhat::Delannoy { max } => {
            let zero = dlo_k0::atoms::ChainParam::Value(rat_int(0));
            for n in 1..=max {
                for m in 1..=n {
                    let am = dlo_k0::atoms::chain_atom(std::slice::from_ref(&zero), &[m]).unwrap();
                    let an = dlo_k0::atoms::chain_atom(std::slice::from_ref(&zero), &[n]).unwrap();
                    let oracle = atom_product_split(&am, &an);
                    let direct = k0::mul(&chain_class(m), &chain_class(n));
                    if !k0::eq(&direct, &oracle) {
                        return Ok(verdict(false, format!("product rule at m={m}, n={n}")));
                    }
                    let total: BigInt = direct.coeffs().values().cloned().sum();
                    if total != delannoy(m, n) {
                        return Ok(verdict(false, format!("Delannoy total at m={m}, n={n}")));
                    }
                    println!("[R_{m}][R_{n}] -> {} interleavings (D({m},{n}))", total);
                }
            }
            Ok(verdict(
                true,
                format!("products match the interleaving oracle for m <= n <= {max}"),
            ))
        }
    }
}

fn chain_class(n: usize) -> Characteristic {
    let params = ParamSet::new([rat_int(0)]);
    Characteristic::new(
        params,
        [(dlo_k0::atoms::GapVector(vec![n, 0]), BigInt::from(1))]
            .into_iter()
            .collect(),
    )
}

fn cmd_verify_php(
    f1: Option<String>,
    f2: Option<String>,
    seed: u64,
    trials: Option<usize>,
) -> Result<ExitCode, String> {
    match (f1, f2, trials) {
        (Some(f1), Some(f2), None) => {
            let d1 = load_set(&f1, &None)?;
            let d2 = load_set(&f2, &None)?;
            let differs = k0::php_check(&d1, &d2).map_err(|e| e.to_string())?;
            Ok(verdict(
                differs,
                format!("[{f1}] != [{f2}] for the proper subset"),
            ))
        }
        (None, None, Some(trials)) => {
            let params = ParamSet::new([rat_int(1), rat_int(0)]);
            let mut done = 0usize;
            let mut s = seed;
            while done < trials {
                s = s.wrapping_add(1);
                let n = 1 + (s as usize) % 2;
                let d2 = random_definable_set(s, n, &params, 0.5);
                let atoms = split(&d2, params.values());
                if atoms.is_empty() {
                    continue;
                }
                let drop = (s as usize) % atoms.len();
                let d1 = PositiveDnf::from_clauses(
                    d2.vars().to_vec(),
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != drop)
                        .map(|(_, a)| a.to_clause()),
                );
                match k0::php_check(&d1, &d2) {
                    Ok(true) => done += 1,
                    Ok(false) => {
                        return Ok(verdict(false, format!("pigeonhole at seed {s}")));
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
            Ok(verdict(
                true,
                format!("pigeonhole on {trials} seeded proper-subset pairs"),
            ))
        }
        _ => Err("give either --f1 and --f2, or --trials (with optional --seed)".into()),
    }
}
