//! `laurentcf`: JSON front end for the continued-fraction library.
//!
//! Every command prints one JSON document on stdout and a one-line summary on
//! stderr. Exit codes: 0 success, 1 domain error, 2 usage error.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use laurentcf::algebra::{parse_elem, parse_field, parse_poly, parse_quad, AnyField, QuadValue};
use laurentcf::contfrac::{cf_value, expand_rational, fold, Expansion, FoldVariant};
use laurentcf::laurent::LaurentStream;
use laurentcf::mcmullen::{divide_shift, eisenstein_lambda, mercat_family, mercat_lift, sqrt_multiplier_pipeline};
use laurentcf::reduction::{k_monotonicity_check, normality_by_reduction, rho_map, NormalityVerdict, QAlpha};
use laurentcf::surd::{canonical_root, detect_periodicity, pell_solve, pellianity_decide, BadPrime, Surd, Verdict};
use laurentcf::zaremba::{
    construct_partner_infinite, default_supply, folded_partner, friesen_prefix_solve, orthogonal_multiplicity,
    splits_construct, splits_search, SplitsOutcome, CENSUS_CAP,
};
use laurentcf::{Error, Field, Poly, PrimeField, Rationals};
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "laurentcf", version, about = "Continued fractions of Laurent series over function fields")]
struct Cli {
    /// `Q`, `F<p>` or `Q[x]/(<poly in x>)`.
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Maximum number of partial quotients computed.
    #[arg(long, global = true, default_value_t = 200)]
    budget: usize,
    /// Number of series coefficients checked for reducibility.
    #[arg(long, global = true, default_value_t = 50)]
    depth: usize,
    /// Compact JSON (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Census witnesses kept.
    #[arg(long, global = true, default_value_t = 16)]
    witness_cap: usize,
    /// Census worker threads; 0 picks the machine default.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Expand a rational function or quadratic surd.
    Expand {
        #[arg(long)]
        alpha: String,
        /// Laurent coefficients shown in the series string.
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Square root of a polynomial as a Laurent series.
    Sqrt {
        #[arg(long = "D")]
        d: String,
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Value p/q of a finite continued fraction.
    Value {
        /// Comma-separated quotients, optionally in brackets.
        #[arg(long)]
        word: String,
    },
    /// Minimal solution of the polynomial Pell equation.
    Pell {
        #[arg(long = "D")]
        d: String,
    },
    /// Decide Pellianity over Q by reduction modulo primes.
    Pellian {
        #[arg(long = "D")]
        d: String,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Preperiod, quasi-period and period of a quadratic surd.
    Period {
        #[arg(long)]
        alpha: String,
    },
    /// Normal partners g/f.
    Zaremba {
        #[command(subcommand)]
        cmd: ZarembaCmd,
    },
    /// Periodic lifts and families with bounded quotients.
    Mercat {
        #[command(subcommand)]
        cmd: MercatCmd,
    },
    /// Linear multipliers of square roots.
    Mm {
        #[command(subcommand)]
        cmd: MmCmd,
    },
    /// Reduce an element of Q((1/T)) modulo p and match convergents.
    Reduce {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        p: u64,
    },
    /// Fold a word around a junction quotient.
    Fold {
        #[arg(long)]
        a0: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        a: String,
        /// `e1,e2,c` for the signed variant.
        #[arg(long)]
        signed: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum ZarembaCmd {
    /// Exhaustive count of normal partners over a prime field.
    Census {
        #[arg(long)]
        f: String,
    },
    /// Construct one normal partner.
    Find(FindArgs),
}

#[derive(Args, Debug)]
struct FindArgs {
    #[arg(long)]
    f: String,
    #[arg(long, value_enum)]
    method: Method,
    /// Folded: use `f^power`.
    #[arg(long, default_value_t = 1)]
    power: u32,
    /// Friesen: the required leading quotients.
    #[arg(long)]
    prefix: Option<String>,
    /// Splits: the order of the roots; the field's element order if omitted.
    #[arg(long)]
    roots: Option<String>,
    /// Splits: try every distinct root order, up to `--budget` of them.
    #[arg(long)]
    search: bool,
    /// Infinite: multiplier supply; `0, 1, -1, ...` if omitted.
    #[arg(long)]
    supply: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Infinite,
    Folded,
    Friesen,
    Splits,
}

#[derive(Subcommand, Debug)]
enum MercatCmd {
    /// Lift a partner Z of a Pell solution (X, Y).
    Lift {
        #[arg(long = "D")]
        d: String,
        #[arg(long = "Z")]
        z: String,
        /// Defaults to the minimal Pell solution.
        #[arg(long = "X", requires = "y")]
        x: Option<String>,
        #[arg(long = "Y", requires = "x")]
        y: Option<String>,
    },
    /// Family built around a quasi-palindromic period.
    Family {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MmCmd {
    /// Multiply sqrt D by linear factors until K drops to 1.
    Pipeline {
        #[arg(long = "D")]
        d: String,
        /// `auto` or a comma-separated supply.
        #[arg(long, default_value = "auto")]
        lambdas: String,
    },
    /// Root of an Eisenstein polynomial as multiplier.
    Eisenstein {
        #[arg(long = "D")]
        d: String,
        #[arg(long)]
        pi: u64,
        #[arg(long)]
        r: usize,
        /// Quotients of sqrt D checked against lambda.
        #[arg(long, default_value_t = 50)]
        window: usize,
        /// Quotients of the product expanded over the extension.
        #[arg(long, default_value_t = 15)]
        product_budget: usize,
    },
    /// Expand (alpha + a)/(T - lambda).
    Shift {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        lambda: String,
    },
}

/// Usage errors exit with 2, everything the library rejects with 1.
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Usage(format!("parse error: {m}")),
            e => Failure::Domain(e),
        }
    }
}

type Out = std::result::Result<(Value, Value, String), Failure>;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match run(&cli) {
        Ok((inputs, outputs, summary)) => {
            let doc = json!({
                "command": argv[1..],
                "field": cli.field,
                "field_irreducibility": field_note(&cli.field),
                "inputs": inputs,
                "budgets": {
                    "budget": cli.budget,
                    "depth": cli.depth,
                    "witness_cap": cli.witness_cap,
                },
                "outputs": outputs,
            });
            let text = if cli.pretty { serde_json::to_string_pretty(&doc) } else { serde_json::to_string(&doc) };
            println!("{}", text.expect("JSON values serialize"));
            eprintln!("{summary} [{:.3}s]", start.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

macro_rules! on_field {
    ($any:expr, $fun:ident ( $($arg:expr),* )) => {
        match &$any {
            AnyField::Q(f) => $fun(f, $($arg),*),
            AnyField::Fp(f) => $fun(f, $($arg),*),
            AnyField::Ext(f) => $fun(f, $($arg),*),
        }
    };
}

fn run(cli: &Cli) -> Out {
    let field = parse_field(&cli.field).map_err(|e| Failure::Usage(format!("--field: {e}")))?;
    let b = cli.budget;
    match &cli.cmd {
        Cmd::Expand { alpha, terms } => on_field!(field, cmd_expand(alpha, b, *terms)),
        Cmd::Sqrt { d, terms } => on_field!(field, cmd_sqrt(d, *terms)),
        Cmd::Value { word } => on_field!(field, cmd_value(word)),
        Cmd::Pell { d } => on_field!(field, cmd_pell(d, b)),
        Cmd::Pellian { d, primes } => cmd_pellian(q_only(&field, "pellian")?, d, primes, b),
        Cmd::Period { alpha } => on_field!(field, cmd_period(alpha, b)),
        Cmd::Zaremba { cmd: ZarembaCmd::Census { f } } => {
            let fp = fp_only(&field, "zaremba census")?;
            cmd_census(&fp, f, cli.witness_cap, cli.workers)
        }
        Cmd::Zaremba { cmd: ZarembaCmd::Find(args) } => match args.method {
            Method::Friesen => cmd_friesen(&fp_only(&field, "the friesen method")?, args),
            _ => on_field!(field, cmd_find(args, b)),
        },
        Cmd::Mercat { cmd: MercatCmd::Lift { d, z, x, y } } => {
            on_field!(field, cmd_lift(d, z, x.as_deref(), y.as_deref(), b))
        }
        Cmd::Mercat { cmd: MercatCmd::Family { word, n } } => on_field!(field, cmd_family(word, *n)),
        Cmd::Mm { cmd: MmCmd::Pipeline { d, lambdas } } => on_field!(field, cmd_pipeline(d, lambdas, b)),
        Cmd::Mm { cmd: MmCmd::Eisenstein { d, pi, r, window, product_budget } } => {
            cmd_eisenstein(q_only(&field, "mm eisenstein")?, d, *pi, *r, *window, *product_budget)
        }
        Cmd::Mm { cmd: MmCmd::Shift { alpha, a, lambda } } => on_field!(field, cmd_shift(alpha, a, lambda, b)),
        Cmd::Reduce { alpha, p } => cmd_reduce(q_only(&field, "reduce")?, alpha, *p, b, cli.depth),
        Cmd::Fold { a0, word, a, signed } => on_field!(field, cmd_fold(a0, word, a, signed.as_deref())),
    }
}

/// `trusted` when an extension's minimal polynomial was not proven irreducible.
fn field_note(spec: &str) -> Value {
    match parse_field(spec) {
        Ok(AnyField::Ext(n)) => Value::from(format!("{:?}", n.irreducibility())),
        _ => Value::Null,
    }
}

fn q_only<'a>(f: &'a AnyField, what: &str) -> std::result::Result<&'a Rationals, Failure> {
    match f {
        AnyField::Q(q) => Ok(q),
        _ => Err(Failure::Domain(Error::Unsupported(format!("{what} works over Q only")))),
    }
}

fn fp_only(f: &AnyField, what: &str) -> std::result::Result<PrimeField, Failure> {
    match f {
        AnyField::Fp(p) => Ok(*p),
        _ => Err(Failure::Domain(Error::Unsupported(format!("{what} needs a prime field F<p>")))),
    }
}

fn split_list(s: &str) -> Vec<&str> {
    let s = s.trim();
    let s = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(s);
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn poly_list<F: Field>(s: &str, f: &F) -> laurentcf::Result<Vec<Poly<F>>> {
    split_list(s).into_iter().map(|x| parse_poly(x, f)).collect()
}

fn elem_list<F: Field>(s: &str, f: &F) -> laurentcf::Result<Vec<F::Elem>> {
    split_list(s).into_iter().map(|x| parse_elem(x, f)).collect()
}

fn polys_json<F: Field>(v: &[Poly<F>]) -> Value {
    Value::from(v.iter().map(|p| p.to_string()).collect::<Vec<_>>())
}

fn elems_json<F: Field>(f: &F, v: &[F::Elem]) -> Value {
    Value::from(v.iter().map(|e| f.fmt_elem(e)).collect::<Vec<_>>())
}

fn expansion_json<F: Field>(e: &Expansion<F>) -> Value {
    let kp = e.k_profile();
    let continuants: Vec<Value> =
        (0..e.len()).map(|n| json!({"p": e.p[n].to_string(), "q": e.q[n].to_string()})).collect();
    json!({
        "partial_quotients": polys_json(&e.quotients),
        "degrees": e.degrees(),
        "continuants": continuants,
        "terminated": e.terminated,
        "budget_exhausted": e.budget_exhausted,
        "K_observed": kp.k,
        "ovK_observed": kp.ovk,
        "ovK_window": kp.window,
    })
}

fn quotient_summary<F: Field>(e: &Expansion<F>, k: usize) -> String {
    let shown: Vec<String> = e.quotients.iter().take(k).map(|a| a.to_string()).collect();
    let more = if e.len() > k { ", .." } else { "" };
    format!("[{}{more}]", shown.join(", "))
}

fn surd_of<F: Field>(v: &QuadValue<F>) -> laurentcf::Result<Surd<F>> {
    let d = v.d.as_ref().expect("caller checked for a radical");
    Surd::from_quadratic(&v.a, &v.b, &v.c, d, &canonical_root(d)?)
}

fn surd_json<F: Field>(s: &Surd<F>) -> Value {
    json!({"r": s.r.to_string(), "s": s.s.to_string(), "D": s.d.to_string(), "root": s.field().fmt_elem(&s.root)})
}

fn cmd_expand<F: Field>(f: &F, alpha: &str, budget: usize, terms: usize) -> Out {
    let v = parse_quad(alpha, f)?;
    let (e, series, kind) = if v.is_rational() {
        let e = expand_rational(&v.a, &v.c, budget)?;
        (e, LaurentStream::from_rational(&v.a, &v.c)?.fmt_terms(terms), "rational")
    } else {
        let s = surd_of(&v)?;
        (s.expand(budget)?.expansion, s.stream().fmt_terms(terms), "surd")
    };
    let summary = format!("{kind} {alpha}: {} quotients {}", e.len(), quotient_summary(&e, 6));
    Ok((json!({"alpha": alpha, "terms": terms}), json!({"kind": kind, "series": series, "expansion": expansion_json(&e)}), summary))
}

fn cmd_sqrt<F: Field>(f: &F, d: &str, terms: usize) -> Out {
    let dp = parse_poly(d, f)?;
    let out = LaurentStream::sqrt(&dp)?;
    let series = out.stream.fmt_terms(terms);
    let summary = format!("sqrt({d}) = {series}");
    Ok((
        json!({"D": d, "terms": terms}),
        json!({"series": series, "exact": out.exact.map(|p| p.to_string())}),
        summary,
    ))
}

fn cmd_value<F: Field>(f: &F, word: &str) -> Out {
    let w = poly_list(word, f)?;
    let (p, q) = cf_value(f, &w)?;
    let summary = format!("value = ({p})/({q})");
    Ok((json!({"word": polys_json(&w)}), json!({"p": p.to_string(), "q": q.to_string()}), summary))
}

fn cmd_pell<F: Field>(f: &F, d: &str, budget: usize) -> Out {
    let dp = parse_poly(d, f)?;
    let sol = pell_solve(&dp, budget)?;
    let (out, summary) = match sol {
        Some(s) => (
            json!({
                "found": true,
                "x": s.x.to_string(),
                "y": s.y.to_string(),
                "unit_value": f.fmt_elem(&s.unit_value),
                "raw_unit": f.fmt_elem(&s.raw_unit),
                "index": s.index,
            }),
            format!("Pell solution for {d}: ({}, {})", s.x, s.y),
        ),
        None => (json!({"found": false}), format!("no Pell solution for {d} within {budget} quotients")),
    };
    Ok((json!({"D": d}), out, summary))
}

fn bad_prime_name(b: &BadPrime) -> &'static str {
    match b {
        BadPrime::Two => "two",
        BadPrime::NotPrime => "not_prime",
        BadPrime::DenominatorDivisible => "denominator_divisible",
        BadPrime::DegreeDrops => "degree_drops",
        BadPrime::NotSquarefree => "not_squarefree",
        BadPrime::LeadNotSquare => "lead_not_square",
    }
}

fn cmd_pellian(f: &Rationals, d: &str, primes: &[u64], budget: usize) -> Out {
    let dp = parse_poly(d, f)?;
    let r = pellianity_decide(&dp, primes, budget)?;
    let (verdict, solution, reason) = match &r.verdict {
        Verdict::NonPellian => ("NonPellian", Value::Null, Value::Null),
        Verdict::Pellian(s) => ("Pellian", json!({"x": s.x.to_string(), "y": s.y.to_string()}), Value::Null),
        Verdict::Inconclusive(why) => ("Inconclusive", Value::Null, Value::from(why.as_str())),
    };
    let orders: Vec<Value> = r.orders.iter().map(|o| json!({"p": o.p, "torsion_order": o.torsion_order})).collect();
    let skipped: Vec<Value> = r.skipped.iter().map(|(p, b)| json!({"p": p, "reason": bad_prime_name(b)})).collect();
    let bounded = r.bounded_check.as_ref().map(|b| {
        json!({"torsion_bound": b.torsion_bound, "steps": b.steps, "max_quotient_degree": b.max_quotient_degree})
    });
    let shown: Vec<String> = r.orders.iter().map(|o| format!("{}:{}", o.p, o.torsion_order)).collect();
    let summary = format!("{d}: {verdict} (orders {})", shown.join(", "));
    Ok((
        json!({"D": d, "primes": primes}),
        json!({
            "verdict": verdict,
            "solution": solution,
            "reason": reason,
            "orders": orders,
            "skipped": skipped,
            "candidates": r.candidates,
            "bounded_check": bounded,
        }),
        summary,
    ))
}

fn cmd_period<F: Field>(f: &F, alpha: &str, budget: usize) -> Out {
    let v = parse_quad(alpha, f)?;
    if v.is_rational() {
        return Err(Failure::Domain(Error::Precondition(format!("{alpha} is rational"))));
    }
    let s = surd_of(&v)?;
    let (se, info) = detect_periodicity(&s, budget)?;
    let status = format!("{:?}", info.status);
    let summary = format!("{alpha}: {status}, preperiod {}, period {}", info.preperiod, opt(info.period));
    Ok((
        json!({"alpha": alpha}),
        json!({
            "surd": surd_json(&s),
            "status": status,
            "preperiod": info.preperiod,
            "quasi_period": info.quasi_period,
            "multiplier": info.multiplier.as_ref().map(|c| f.fmt_elem(c)),
            "period": info.period,
            "period_verified": info.period_verified,
            "steps": info.steps,
            "expansion": expansion_json(&se.expansion),
        }),
        summary,
    ))
}

fn cmd_census(fp: &PrimeField, f: &str, witness_cap: usize, workers: usize) -> Out {
    let fpoly = parse_poly(f, fp)?;
    let r = orthogonal_multiplicity(&fpoly, witness_cap, workers, CENSUS_CAP)?;
    let summary = format!("m({f}) = {} over {}", r.multiplicity, fp.spec());
    Ok((
        json!({"f": f}),
        json!({
            "field": fp.spec(),
            "f": r.f.to_string(),
            "multiplicity": r.multiplicity,
            "witnesses": polys_json(&r.witnesses),
            "witness_cap": r.witness_cap,
            "method": r.method,
        }),
        summary,
    ))
}

fn partner_json<F: Field>(g: &Poly<F>, f: &Poly<F>, e: &Expansion<F>) -> Value {
    json!({"g": g.to_string(), "f": f.to_string(), "normal": e.is_normal(), "expansion": expansion_json(e)})
}

fn cmd_find<F: Field>(f: &F, args: &FindArgs, budget: usize) -> Out {
    let fpoly = parse_poly(&args.f, f)?;
    let inputs = json!({"f": args.f, "method": format!("{:?}", args.method).to_lowercase()});
    match args.method {
        Method::Infinite => {
            let supply = match &args.supply {
                Some(s) => elem_list(s, f)?,
                None => default_supply(f, budget),
            };
            let c = construct_partner_infinite(&fpoly, &supply)?;
            let allowed: Vec<Value> = c.allowed.iter().map(|a| elems_json(f, a)).collect();
            let mut out = partner_json(&c.g, &fpoly, &c.expansion);
            let m = out.as_object_mut().expect("object");
            m.insert("lambdas".into(), elems_json(f, &c.lambdas));
            m.insert("k_trace".into(), Value::from(c.k_trace.clone()));
            m.insert("allowed".into(), Value::from(allowed));
            let summary = format!("g = {} for f = {}", c.g, args.f);
            Ok((inputs, out, summary))
        }
        Method::Folded => {
            let (g, e) = folded_partner(&fpoly, args.power)?;
            let big = fpoly.pow(args.power);
            let summary = format!("g = {g} for f = ({})^{}", args.f, args.power);
            Ok((inputs, partner_json(&g, &big, &e), summary))
        }
        Method::Splits => {
            let roots = match &args.roots {
                Some(s) => elem_list(s, f)?,
                None => field_roots(&fpoly)?,
            };
            let (order, outcome) = if args.search {
                splits_search(&fpoly, &roots, budget)?.ok_or_else(|| {
                    Error::SupplyExhausted(format!("no root order within {budget} tries gives a normal partner"))
                })?
            } else {
                (roots.clone(), splits_construct(&fpoly, &roots)?)
            };
            match outcome {
                SplitsOutcome::Found { g, b, expansion } => {
                    let mut out = partner_json(&g, &fpoly, &expansion);
                    let m = out.as_object_mut().expect("object");
                    m.insert("order".into(), elems_json(f, &order));
                    m.insert("b".into(), elems_json(f, &b));
                    let summary = format!("g = {g} for f = {}", args.f);
                    Ok((inputs, out, summary))
                }
                SplitsOutcome::Blocked { step, forbidden } => Err(Failure::Domain(Error::SupplyExhausted(format!(
                    "every b forbidden at step {step}: {}",
                    forbidden.iter().map(|x| f.fmt_elem(x)).collect::<Vec<_>>().join(", ")
                )))),
            }
        }
        Method::Friesen => unreachable!("dispatched to cmd_friesen"),
    }
}

/// Roots of `f` in a finite field with multiplicity, in element order.
fn field_roots<F: Field>(f: &Poly<F>) -> laurentcf::Result<Vec<F::Elem>> {
    let fld = f.field();
    if fld.size().is_none() {
        return Err(Error::Precondition("give --roots over an infinite field".into()));
    }
    let mut rest = f.clone();
    let mut roots = Vec::new();
    for x in fld.elements() {
        while let Some(q) = rest.div_exact(&Poly::linear(fld, &x)) {
            rest = q;
            roots.push(x.clone());
        }
    }
    if rest.deg() != Some(0) {
        return Err(Error::Precondition(format!("{f} does not split over {}", fld.spec())));
    }
    Ok(roots)
}

fn cmd_friesen(fp: &PrimeField, args: &FindArgs) -> Out {
    let fpoly = parse_poly(&args.f, fp)?;
    let prefix = poly_list(args.prefix.as_deref().unwrap_or(""), fp)?;
    let gs = friesen_prefix_solve(&fpoly, &prefix)?;
    let summary = format!("{} partners of {} with prefix {}", gs.len(), args.f, quotient_summary_list(&prefix));
    Ok((
        json!({"f": args.f, "method": "friesen", "prefix": polys_json(&prefix)}),
        json!({"solutions": polys_json(&gs)}),
        summary,
    ))
}

/// `-` for an unknown value.
fn opt<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn quotient_summary_list<F: Field>(w: &[Poly<F>]) -> String {
    format!("[{}]", w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", "))
}

fn cmd_lift<F: Field>(f: &F, d: &str, z: &str, x: Option<&str>, y: Option<&str>, budget: usize) -> Out {
    let dp = parse_poly(d, f)?;
    let zp = parse_poly(z, f)?;
    let (xp, yp) = match (x, y) {
        (Some(x), Some(y)) => (parse_poly(x, f)?, parse_poly(y, f)?),
        _ => {
            let s = pell_solve(&dp, budget)?
                .ok_or_else(|| Error::Precondition(format!("no Pell solution for {d} within {budget} quotients")))?;
            (s.x, s.y)
        }
    };
    let l = mercat_lift(&dp, &xp, &yp, &zp, budget)?;
    let summary = format!("lift of {z}: period {}", quotient_summary_list(&l.word));
    Ok((
        json!({"D": d, "Z": z, "X": xp.to_string(), "Y": yp.to_string()}),
        json!({
            "X": l.x.to_string(),
            "Y": l.y.to_string(),
            "t": f.fmt_elem(&l.t),
            "k": f.fmt_elem(&l.k),
            "surd": surd_json(&l.surd),
            "word": polys_json(&l.word),
            "eigenvector_ok": l.eigenvector_ok,
            "K_z_over_x": l.k_z_over_x,
            "K_bound_ok": l.k_bound_ok,
            "z_expansion": polys_json(&l.z_expansion.quotients),
            "expansion": expansion_json(&l.expansion),
        }),
        summary,
    ))
}

fn cmd_family<F: Field>(f: &F, word: &str, n: usize) -> Out {
    let w = poly_list(word, f)?;
    let fam = mercat_family(&w, n)?;
    let members: Vec<Value> = fam
        .members
        .iter()
        .map(|m| {
            json!({
                "n": m.n,
                "word": polys_json(&m.word),
                "value": surd_json(&m.value),
                "trace_ok": m.trace_ok,
                "discr_ok": m.discr_ok,
            })
        })
        .collect();
    let m = &fam.h;
    let summary = format!("{:?} family of {} members on {}", fam.branch, fam.members.len(), quotient_summary_list(&w));
    Ok((
        json!({"word": polys_json(&w), "n": n}),
        json!({
            "branch": format!("{:?}", fam.branch),
            "doubled": fam.doubled,
            "period": polys_json(&fam.period),
            "B": polys_json(&fam.b_word),
            "C": polys_json(&fam.c_word),
            "H": [[m.a.to_string(), m.b.to_string()], [m.c.to_string(), m.d.to_string()]],
            "members": members,
        }),
        summary,
    ))
}

fn cmd_pipeline<F: Field>(f: &F, d: &str, lambdas: &str, budget: usize) -> Out {
    let dp = parse_poly(d, f)?;
    let supply = if lambdas.trim() == "auto" { default_supply(f, 64) } else { elem_list(lambdas, f)? };
    let p = sqrt_multiplier_pipeline(&dp, &supply, budget)?;
    let steps: Vec<Value> = p
        .steps
        .iter()
        .map(|s| json!({"lambda": f.fmt_elem(&s.lambda), "K_before": s.k_before, "K_after": s.k_after}))
        .collect();
    let summary = format!(
        "{d}: lambdas [{}], K_observed {} over {} quotients",
        p.lambdas.iter().map(|x| f.fmt_elem(x)).collect::<Vec<_>>().join(", "),
        opt(p.k_profile.k),
        p.observed_depth
    );
    Ok((
        json!({"D": d, "lambdas": lambdas}),
        json!({
            "lambdas": elems_json(f, &p.lambdas),
            "steps": steps,
            "K_observed": p.k_profile.k,
            "ovK_observed": p.k_profile.ovk,
            "observed_depth": p.observed_depth,
            "label": "observed",
            "expansion": expansion_json(&p.expansion),
        }),
        summary,
    ))
}

fn cmd_eisenstein(f: &Rationals, d: &str, pi: u64, r: usize, window: usize, product_budget: usize) -> Out {
    let dp = parse_poly(d, f)?;
    let c = eisenstein_lambda(&dp, pi, r, window, product_budget)?;
    let summary = format!(
        "lambda root of {}: q_n(lambda) {} on {} quotients, K_observed {}",
        c.field.spec(),
        if c.first_zero.is_none() { "nonzero" } else { "vanishes" },
        c.window,
        opt(c.k_profile.k)
    );
    Ok((
        json!({"D": d, "pi": pi, "r": r, "window": window, "product_budget": product_budget}),
        json!({
            "extension": c.field.spec(),
            "lambda": c.field.fmt_elem(&c.lambda),
            "window": c.window,
            "first_zero": c.first_zero,
            "K_observed": c.k_profile.k,
            "label": "observed",
            "expansion": expansion_json(&c.expansion),
        }),
        summary,
    ))
}

fn cmd_shift<F: Field>(f: &F, alpha: &str, a: &str, lambda: &str, budget: usize) -> Out {
    let v = parse_quad(alpha, f)?;
    let stream = if v.is_rational() { LaurentStream::from_rational(&v.a, &v.c)? } else { surd_of(&v)?.stream() };
    let (ae, le) = (parse_elem(a, f)?, parse_elem(lambda, f)?);
    let s = divide_shift(&stream, &ae, &le, budget)?;
    let summary = format!("K {} -> {}, avoidance {}", s.k_before, s.k_after, if s.avoidance_held { "held" } else { "failed" });
    Ok((
        json!({"alpha": alpha, "a": a, "lambda": lambda}),
        json!({
            "avoidance_held": s.avoidance_held,
            "first_violation": s.first_violation,
            "K_before": s.k_before,
            "K_after": s.k_after,
            "expansion": expansion_json(&s.expansion),
        }),
        summary,
    ))
}

fn cmd_reduce(f: &Rationals, alpha: &str, p: u64, budget: usize, depth: usize) -> Out {
    let v = parse_quad(alpha, f)?;
    let qa = if v.is_rational() { QAlpha::Rational(v.a.clone(), v.c.clone()) } else { QAlpha::Surd(surd_of(&v)?) };
    let r = rho_map(&qa, p, budget, depth)?;
    let mono = k_monotonicity_check(&qa, p, budget, depth)?;
    let normalized: Vec<Value> = r
        .normalized
        .iter()
        .map(|c| json!({"i": c.i, "x": c.x.to_string(), "y": c.y.to_string()}))
        .collect();
    let mut out = Map::new();
    out.insert("prime".into(), json!(r.prime));
    out.insert("reducible".into(), json!(r.reducible));
    out.insert("checked_depth".into(), json!(r.checked_depth));
    out.insert("expansion".into(), expansion_json(&r.expansion));
    out.insert("reduced_expansion".into(), expansion_json(&r.reduced_expansion));
    out.insert("normalized".into(), Value::from(normalized));
    out.insert("rho".into(), json!(r.rho));
    out.insert(
        "properties".into(),
        json!({
            "rho_starts_at_zero": r.rho_starts_at_zero,
            "nondecreasing": r.nondecreasing,
            "step_le_one": r.step_le_one,
            "surjective": r.surjective,
            "increments_exact": r.increments_exact,
            "valuation_pairing": r.valuation_pairing,
            "ord_positive": r.ord_positive,
            "all": r.all_properties(),
        }),
    );
    out.insert(
        "monotonicity".into(),
        json!({
            "blocks": mono.blocks.iter().map(|&(m, pr, ac)| json!({"m": m, "predicted": pr, "actual": ac})).collect::<Vec<_>>(),
            "formula_holds": mono.formula_holds,
            "K": mono.k,
            "K_reduced": mono.k_reduced,
            "K_grows": mono.k_grows,
        }),
    );
    if let QAlpha::Surd(s) = &qa {
        let verdict = match normality_by_reduction(s, p, budget, depth)? {
            NormalityVerdict::ProvenNormal(c) => json!({
                "verdict": "ProvenNormal",
                "preperiod": c.preperiod,
                "period": c.period,
                "quotients": polys_json(&c.quotients),
                "replay_ok": c.replay()?,
            }),
            NormalityVerdict::ObservedOnly { window, reduced_k } => {
                json!({"verdict": "ObservedOnly", "window": window, "reduced_K": reduced_k})
            }
            NormalityVerdict::NotNormal { index, degree } => {
                json!({"verdict": "NotNormal", "index": index, "degree": degree})
            }
        };
        out.insert("normality".into(), verdict);
    }
    let summary = format!(
        "{alpha} mod {p}: rho {:?}, properties {}",
        &r.rho[..r.rho.len().min(12)],
        if r.all_properties() { "hold" } else { "FAIL" }
    );
    Ok((json!({"alpha": alpha, "p": p}), Value::Object(out), summary))
}

fn cmd_fold<F: Field>(f: &F, a0: &str, word: &str, a: &str, signed: Option<&str>) -> Out {
    let (a0p, w, ap) = (parse_poly(a0, f)?, poly_list(word, f)?, parse_poly(a, f)?);
    let variant = match signed {
        None => FoldVariant::Plain,
        Some(s) => match elem_list(s, f)?.as_slice() {
            [e1, e2, c] => FoldVariant::Signed { e1: e1.clone(), e2: e2.clone(), c: c.clone() },
            _ => return Err(Failure::Usage("--signed takes e1,e2,c".into())),
        },
    };
    let r = fold(f, &a0p, &w, &ap, &variant)?;
    let summary = format!("fold: {} quotients, value ({})/({})", r.word.len(), r.num, r.den);
    Ok((
        json!({"a0": a0, "word": polys_json(&w), "a": a, "signed": signed}),
        json!({"word": polys_json(&r.word), "p": r.num.to_string(), "q": r.den.to_string()}),
        summary,
    ))
}
