use std::fmt::Display;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use ordlab::corpus;
use ordlab::covering::{self, CoveringError};
use ordlab::model::{self, Direction, ModelError, Structure};
use ordlab::patterns::{self, CertError, EmbedError, SearchOptions};
use ordlab::reach::{self, ReachAnswer, ReachError, Step};
use ordlab::suite::{self, Scale};
use ordlab::Ordinal;

#[derive(Parser)]
#[command(name = "ordlab", version, about = "Ordinal notations, Sigma_1 stability and finite patterns")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Corpus seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Backtracking node budget for embedding search.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Include rule traces (also enabled by ORD_LAB_TRACE=1).
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the normal form.
    Norm { x: String },
    /// Compare two ordinals: LT, EQ or GT.
    Cmp { x: String, y: String },
    /// Ordinal sum `x + y`.
    Add { x: String, y: String },
    /// The `s` with `x + s = y`, or -1 when `x > y`.
    Sub { x: String, y: String },
    /// `w^x`.
    Pow { x: String },
    /// Decide `a <=_1 b`.
    Leq1 { a: String, b: String },
    /// Largest `b <= a*w` with `a <=_1 b`.
    Mreach { a: String },
    /// Trace set `T(0, a, t)`.
    Tset { a: String, t: String },
    /// Covering map `g(0, a, c)` at `x`.
    Gmap { a: String, c: String, x: String },
    /// The class of `b` with `b <=_1 g(0,alpha,b)(t) + 1`.
    Class {
        alpha: String,
        #[arg(long)]
        t: Option<String>,
        /// Membership test.
        #[arg(long)]
        member: Option<String>,
        /// Least member above the argument.
        #[arg(long)]
        next: Option<String>,
        /// First members of the class.
        #[arg(long)]
        list: Option<usize>,
    },
    /// Embed the finite set `z` into `alpha`.
    Embed {
        alpha: String,
        #[arg(required = true)]
        z: Vec<String>,
    },
    /// Certificate that `alpha` is not Sigma_1 in `beta`.
    Refute { alpha: String, beta: String },
    /// Decide whether structure A is Sigma_1 in structure B.
    Sigma1 {
        #[arg(long = "file", num_args = 1, required = true)]
        files: Vec<String>,
        /// Literal bound for the formula check; defaults to |B| * max arity * 4.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Run the property suites at reduced scale.
    Selftest {
        /// Use acceptance sizes.
        #[arg(long)]
        full: bool,
    },
    /// Print a seeded corpus.
    Corpus {
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Additive principals only.
        #[arg(long)]
        principals: bool,
    },
}

enum Failure {
    Usage(String),
    Scope(String),
    Failed(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Failed(_) => 1,
            Failure::Scope(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Scope(m) | Failure::Failed(m) => m,
        }
    }
}

impl From<ReachError> for Failure {
    fn from(e: ReachError) -> Self {
        match e {
            ReachError::Scope(_) => Failure::Scope(e.to_string()),
            ReachError::Covering(ref c) => match Failure::from(c.clone()) {
                Failure::Scope(_) => Failure::Scope(e.to_string()),
                _ => Failure::Usage(e.to_string()),
            },
            ReachError::TraceOverflow => Failure::Failed(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CoveringError> for Failure {
    fn from(e: CoveringError) -> Self {
        match e {
            CoveringError::NotPrincipal(_) => Failure::Usage(e.to_string()),
            _ => Failure::Scope(e.to_string()),
        }
    }
}

impl From<CertError> for Failure {
    fn from(e: CertError) -> Self {
        match e {
            CertError::Reach(r) => r.into(),
            CertError::Malformed(m) => Failure::Failed(m),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Res = Result<Output, Failure>;

/// Text and JSON renderings of a result.
struct Output {
    text: String,
    json: Value,
}

fn out(text: impl Display, json: Value) -> Res {
    Ok(Output {
        text: text.to_string(),
        json,
    })
}

fn ord(s: &str) -> Result<Ordinal, Failure> {
    s.parse()
        .map_err(|e| Failure::Usage(format!("cannot parse {s:?}: {e}")))
}

fn ords(xs: &[Ordinal]) -> Value {
    json!(xs.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn list(xs: &[Ordinal]) -> String {
    let v: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn leq1(a: &Ordinal, b: &Ordinal) -> Result<ReachAnswer, Failure> {
    if a == b {
        return Ok(ReachAnswer {
            verdict: true,
            trace: vec![Step::Reflexive],
        });
    }
    if a.is_additive_principal() && *b > *a && *b <= a.mul_omega() {
        return Ok(reach::le1_interval(a, b)?);
    }
    Ok(ReachAnswer {
        verdict: reach::lt1(a, b)?,
        trace: Vec::new(),
    })
}

fn run(cli: &Cli, trace: bool) -> Res {
    let seed = cli.seed.unwrap_or(corpus::DEFAULT_SEED);
    let mut search = SearchOptions::default();
    if let Some(b) = cli.budget {
        search.nodes = b;
        search.pool = search.pool.min(b.max(1));
    }
    match &cli.cmd {
        Cmd::Norm { x } => {
            let x = ord(x)?;
            out(&x, json!({ "value": x }))
        }
        Cmd::Cmp { x, y } => {
            let c = match ord(x)?.cmp(&ord(y)?) {
                std::cmp::Ordering::Less => "LT",
                std::cmp::Ordering::Equal => "EQ",
                std::cmp::Ordering::Greater => "GT",
            };
            out(c, json!({ "order": c }))
        }
        Cmd::Add { x, y } => {
            let s = ord(x)?
                .checked_add(&ord(y)?)
                .ok_or_else(|| Failure::Usage("coefficient overflow".into()))?;
            out(&s, json!({ "value": s }))
        }
        Cmd::Sub { x, y } => match ord(x)?.left_sub(&ord(y)?) {
            Some(s) => out(&s, json!({ "value": s })),
            None => out(-1, json!({ "value": -1 })),
        },
        Cmd::Pow { x } => {
            let p = Ordinal::omega_pow(&ord(x)?);
            out(&p, json!({ "value": p }))
        }
        Cmd::Leq1 { a, b } => {
            let ans = leq1(&ord(a)?, &ord(b)?)?;
            let mut text = ans.verdict.to_string();
            let mut j = json!({ "verdict": ans.verdict });
            if trace {
                for step in &ans.trace {
                    text.push_str(&format!("\n  {}", serde_json::to_string(step).unwrap()));
                }
                j["trace"] = json!(ans.trace);
            }
            out(text, j)
        }
        Cmd::Mreach { a } => {
            let (m, at_cap) = reach::m_local(&ord(a)?)?;
            out(
                format!("{m} (at_cap={at_cap})"),
                json!({ "m": m, "at_cap": at_cap }),
            )
        }
        Cmd::Tset { a, t } => {
            let ts = covering::t_set(&ord(a)?, &ord(t)?)?;
            out(list(&ts), json!({ "set": ords(&ts) }))
        }
        Cmd::Gmap { a, c, x } => {
            let y = covering::g0_apply(&ord(a)?, &ord(c)?, &ord(x)?)?;
            out(&y, json!({ "value": y }))
        }
        Cmd::Class {
            alpha,
            t,
            member,
            next,
            list: count,
        } => {
            let alpha = ord(alpha)?;
            let t = match t {
                Some(t) => ord(t)?,
                None => alpha.clone(),
            };
            let d = reach::descriptor_for(&alpha, &t)?;
            let mut text = d.to_string();
            let mut j = json!({ "class": d.to_string(), "descriptor": d });
            if let Some(x) = member {
                let x = ord(x)?;
                let v = x <= alpha && d.member(&x);
                text.push_str(&format!("\nmember {x}: {v}"));
                j["member"] = json!(v);
            }
            if let Some(x) = next {
                let y = d.next_above(&ord(x)?);
                text.push_str(&format!("\nnext {y}"));
                j["next"] = json!(y);
            }
            if let Some(k) = count {
                let mut xs = Vec::new();
                let mut x = d.lower_bound.clone();
                while xs.len() < *k {
                    x = d.next_above(&x);
                    xs.push(x.clone());
                }
                text.push_str(&format!("\nlist {}", list(&xs)));
                j["list"] = ords(&xs);
            }
            out(text, j)
        }
        Cmd::Embed { alpha, z } => {
            let alpha = ord(alpha)?;
            let z = z.iter().map(|x| ord(x)).collect::<Result<Vec<_>, _>>()?;
            let config = patterns::build_config(&z)?;
            match patterns::find_embedding(&config, &alpha, search) {
                Ok(emb) => {
                    let pairs: Vec<String> = emb
                        .domain
                        .iter()
                        .zip(&emb.images)
                        .map(|(x, y)| format!("{x} -> {y}"))
                        .collect();
                    let j = serde_json::to_value(&emb).unwrap();
                    out(format!("{}\n{}", method_name(&j), pairs.join("\n")), j)
                }
                Err(EmbedError::NotFound) => {
                    let mut text = "inconclusive: no embedding found within budget".to_string();
                    let mut j = json!({ "found": false, "inconclusive": true });
                    let top = config.elements.last().map(Ordinal::succ);
                    if let Some(beta) = top.filter(|b| *b > alpha) {
                        if let Ok(Some(cert)) = patterns::refute(&alpha, &beta) {
                            if patterns::verify_certificate(&cert, &alpha, &beta) == Ok(true) {
                                text.push_str(&format!(
                                    "\ncertificate for {beta}: {}",
                                    serde_json::to_string(&cert).unwrap()
                                ));
                                j["certificate"] = json!(cert);
                            }
                        }
                    }
                    out(text, j)
                }
                Err(EmbedError::Reach(e)) => Err(e.into()),
            }
        }
        Cmd::Refute { alpha, beta } => {
            let (a, b) = (ord(alpha)?, ord(beta)?);
            if a >= b {
                return Err(Failure::Usage(format!("need {a} < {b}")));
            }
            match patterns::refute(&a, &b)? {
                Some(cert) => {
                    let ok = patterns::verify_certificate(&cert, &a, &b)?;
                    let j = json!({ "certificate": cert, "verified": ok });
                    out(
                        format!(
                            "{}\nverified: {ok}",
                            serde_json::to_string(&cert).unwrap()
                        ),
                        j,
                    )
                }
                None => out(
                    format!("none ({a} <_1 {b})"),
                    json!({ "certificate": null }),
                ),
            }
        }
        Cmd::Sigma1 { files, bound } => {
            if files.len() != 2 {
                return Err(Failure::Usage("sigma1 needs exactly two --file arguments".into()));
            }
            let read = |p: &String| -> Result<Structure, Failure> {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Failure::Usage(format!("{p}: {e}")))?;
                Ok(Structure::from_json(&text)?)
            };
            let (a, b) = (read(&files[0])?, read(&files[1])?);
            let bound =
                bound.unwrap_or(b.carrier.len() * b.signature.max_arity().max(1) * 4);
            let iso = model::sigma1_check_iso(&a, &b)?;
            let cx = model::sigma1_counterexample(&a, &b, bound)?;
            let mut text = format!("iso: {iso}\nformulas (bound {bound}): {}", cx.is_none());
            let mut j = json!({ "iso": iso, "formulas": cx.is_none(), "bound": bound });
            if let Some(c) = cx {
                let side = match c.direction {
                    Direction::TrueInBOnly => "B",
                    Direction::TrueInAOnly => "A",
                };
                text.push_str(&format!("\ncounterexample (true only in {side}): {}", c.formula));
                j["counterexample"] = json!({ "formula": c.formula.to_string(), "true_in": side });
            }
            out(text, j)
        }
        Cmd::Selftest { full } => {
            let mut scale = if *full { Scale::full() } else { Scale::reduced() };
            scale.search = search;
            let reports = suite::run_all(seed, &scale);
            let mut text = Vec::new();
            for r in &reports {
                let tag = if r.passed() { "pass" } else { "FAIL" };
                text.push(format!(
                    "{tag} {:<18} {} checks, {} failed, {} inconclusive, {} ms",
                    r.name, r.checked, r.failed, r.inconclusive, r.millis
                ));
                for f in &r.failures {
                    text.push(format!("     {f}"));
                }
            }
            let j = json!({ "seed": seed, "suites": reports });
            if reports.iter().all(|r| r.passed()) {
                out(text.join("\n"), j)
            } else {
                Err(Failure::Failed(text.join("\n")))
            }
        }
        Cmd::Corpus { count, principals } => {
            let xs = if *principals {
                corpus::principals(seed, *count)
            } else {
                corpus::ordinals(seed, *count)
            };
            let text: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
            out(text.join("\n"), json!({ "seed": seed, "ordinals": ords(&xs) }))
        }
    }
}

fn method_name(j: &Value) -> String {
    match j["method"].as_str() {
        Some("covering") => format!("covering delta={}", j["delta"].as_str().unwrap_or("?")),
        Some(m) => m.to_string(),
        None => String::new(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let trace = cli.trace || std::env::var("ORD_LAB_TRACE").is_ok_and(|v| v == "1");
    match run(&cli, trace) {
        Ok(o) => {
            if cli.json {
                println!("{}", o.json);
            } else {
                println!("{}", o.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({ "error": f.message(), "exit": f.code() }));
            } else {
                eprintln!("error: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
