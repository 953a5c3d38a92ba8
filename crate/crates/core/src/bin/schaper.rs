use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schaper::budget::Budget;
use schaper::classify::{combined_bounds, BoundReport};
use schaper::colouring::{build_graph, check_signed_sum};
use schaper::gram::gram_matrix;
use schaper::io::{load_table, ResultCache};
use schaper::polytabloid::polytabloid_inner_product;
use schaper::sum_formula::{evaluate, symbolic_rhs};
use schaper::sweep::{check_conjecture, verify_characterisation};
use schaper::tableau::Tableau;
use schaper::valuation::valuation;
use schaper::{james_bounds, Error, Oracle, OracleResult, Partition, Prime};

const EXIT_INPUT: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_MISSING: u8 = 4;

#[derive(Parser)]
#[command(name = "schaper", version, about = "Schaper numbers of partitions")]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Config {
    /// The prime p.
    #[arg(short, long, global = true, default_value_t = 2, value_parser = parse_prime)]
    prime: u32,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Largest Gram matrix dimension.
    #[arg(long, global = true, default_value_t = Budget::default().max_basis, value_parser = clap::value_parser!(u64).range(1..))]
    budget_basis: u64,
    /// Largest polytabloid expansion.
    #[arg(long, global = true, default_value_t = Budget::default().max_terms, value_parser = clap::value_parser!(u64).range(1..))]
    budget_terms: u64,
    /// Largest total work for one Gram matrix.
    #[arg(long, global = true, default_value_t = Budget::default().max_ops, value_parser = clap::value_parser!(u64).range(1..))]
    budget_ops: u64,
    /// Ignore all budgets.
    #[arg(long, global = true)]
    force: bool,
    /// Oracle result cache (JSON lines).
    #[arg(long, global = true, env = "SCHAPER_CACHE")]
    cache: Option<PathBuf>,
    /// Decomposition number table (JSON).
    #[arg(long, global = true)]
    table: Option<PathBuf>,
    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

fn parse_prime(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|e| format!("{e}"))?;
    Prime::new(p).map(Prime::get).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Classify,
    Oracle,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conjugate, multiplicities, singularities, James' bounds and p-regularisation.
    Info { partition: String },
    /// Schaper number from the classifiers, the Gram oracle, or both.
    Schaper {
        partition: String,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Right-hand side of the sum formula; with --mu and --table, its value and a bound.
    Sumformula {
        partition: String,
        #[arg(long)]
        mu: Option<String>,
    },
    /// Compare the characterisations with the oracle for all partitions up to --max-n.
    Verify {
        #[arg(long)]
        max_n: u32,
        /// One level; by default every level known at this prime.
        #[arg(long)]
        level: Option<u32>,
    },
    /// Tabulate the odd-p level-3 conditions against the oracle.
    Conjecture {
        #[arg(long)]
        max_n: u32,
    },
    /// Polytabloid inner product of two tableaux, e.g. "1,2;3,4".
    Inner { s: String, t: String },
    /// Colouring graph of two row-equivalent tableaux and its signed colouring count.
    Colourings { s: String, t: String },
    /// Gram matrix of the standard basis.
    Gram { partition: String },
}

struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit(_) => EXIT_RESOURCE,
            Error::MissingEntry(_) => EXIT_MISSING,
            _ => EXIT_INPUT,
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

type Out = Result<u8, Fail>;

struct Ctx {
    p: Prime,
    json: bool,
    budget: Budget,
    cache: Option<PathBuf>,
    table: Option<PathBuf>,
}

impl Ctx {
    fn oracle(&self) -> Result<Oracle, Error> {
        Ok(match &self.cache {
            Some(path) => Oracle::with_cache(self.budget, Arc::new(ResultCache::open(path)?)),
            None => Oracle::new(self.budget),
        })
    }

    fn emit(&self, value: Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        } else {
            print!("{}", text());
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let c = &cli.cfg;
    let budget = if c.force {
        Budget::unlimited()
    } else {
        Budget {
            max_basis: c.budget_basis,
            max_terms: c.budget_terms,
            max_ops: c.budget_ops,
            ..Budget::default()
        }
    };
    if c.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(c.threads)
            .build_global();
    }
    let ctx = Ctx {
        p: Prime::new(c.prime).expect("validated by clap"),
        json: c.json,
        budget,
        cache: c.cache.clone(),
        table: c.table.clone(),
    };
    let res = match &cli.cmd {
        Cmd::Info { partition } => info(&ctx, partition),
        Cmd::Schaper { partition, method } => schaper_cmd(&ctx, partition, *method),
        Cmd::Sumformula { partition, mu } => sumformula(&ctx, partition, mu.as_deref()),
        Cmd::Verify { max_n, level } => verify(&ctx, *max_n, *level),
        Cmd::Conjecture { max_n } => conjecture(&ctx, *max_n),
        Cmd::Inner { s, t } => inner(&ctx, s, t),
        Cmd::Colourings { s, t } => colourings(&ctx, s, t),
        Cmd::Gram { partition } => gram(&ctx, partition),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn oracle_json(r: &OracleResult) -> Value {
    json!({
        "partition": r.shape,
        "p": r.prime,
        "schaper": r.schaper_number,
        "witness": [r.witness.0.to_string(), r.witness.1.to_string()],
        "entry": r.entry_value.to_string(),
    })
}

fn info(ctx: &Ctx, text: &str) -> Out {
    let l = Partition::parse(text)?;
    let p = ctx.p;
    let (lo, hi) = james_bounds(&l, p);
    let windows: Vec<Value> = l
        .singularity_windows(p)
        .iter()
        .map(|w| json!({"start": w.start, "length": w.length}))
        .collect();
    let mults: Vec<[u64; 2]> = l
        .multiplicities()
        .iter()
        .rev()
        .map(|(&k, &m)| [k as u64, m as u64])
        .collect();
    let reg = l.regularise(p);
    let value = json!({
        "partition": l,
        "p": p,
        "size": l.size(),
        "conjugate": l.conjugate(),
        "multiplicities": mults,
        "singularity_windows": windows,
        "disjoint_singularities": l.count_disjoint_singularities(p),
        "james_bounds": [lo, hi],
        "p_regular": l.is_p_regular(p),
        "regularisation": reg,
    });
    ctx.emit(value, || {
        let ws: Vec<String> = l
            .singularity_windows(p)
            .iter()
            .map(|w| {
                format!(
                    "rows {}..{} of length {}",
                    w.start,
                    w.start + p.get() as usize - 1,
                    w.length
                )
            })
            .collect();
        let ms: Vec<String> = mults.iter().map(|[k, m]| format!("{k}^{m}")).collect();
        format!(
            "partition       {} ⊢ {}\nconjugate       {}\nmultiplicities  {}\nsingularities   {}\n\
             james bounds    {lo}..{hi}\n{p}-regularisation {}{}\n",
            l.compact(),
            l.size(),
            l.conjugate().compact(),
            if ms.is_empty() {
                "none".into()
            } else {
                ms.join(" ")
            },
            if ws.is_empty() {
                "none".into()
            } else {
                ws.join(", ")
            },
            reg.compact(),
            if l.is_p_regular(p) {
                " (already regular)"
            } else {
                ""
            },
        )
    });
    Ok(0)
}

fn bounds_text(b: &BoundReport) -> String {
    let mut s = match b.exact() {
        Some(v) => format!("classify  {v}\n"),
        None => format!(
            "classify  {}..{}\n",
            b.lower,
            b.upper.map_or_else(|| "∞".to_string(), |u| u.to_string())
        ),
    };
    for c in &b.certificates {
        let at = c
            .block
            .as_ref()
            .map(|x| format!(" on {}", x.compact()))
            .unwrap_or_default();
        let tag = if c.proved { "" } else { " (unproved)" };
        s += &format!(
            "  {} {:?}{at} -> {}{tag}\n",
            c.rule, c.witness, c.contribution
        );
    }
    if let Some(c) = b.conjectural_lower {
        s += &format!("  conjecturally >= {c}\n");
    }
    s
}

fn schaper_cmd(ctx: &Ctx, text: &str, method: Method) -> Out {
    let l = Partition::parse(text)?;
    let bounds = (method != Method::Oracle).then(|| combined_bounds(&l, ctx.p));
    let oracle = if method == Method::Classify {
        None
    } else {
        Some(ctx.oracle()?.schaper(&l, ctx.p)?)
    };
    let disagree = match (&bounds, &oracle) {
        (Some(b), Some(r)) => {
            let v = r.schaper_number;
            v < b.lower || b.upper.is_some_and(|u| v > u)
        }
        _ => false,
    };
    let mut value = json!({"partition": l, "p": ctx.p});
    if let Some(b) = &bounds {
        value["classify"] = serde_json::to_value(b).expect("json");
    }
    if let Some(r) = &oracle {
        value["oracle"] = oracle_json(r);
    }
    if method == Method::Both {
        value["agree"] = json!(!disagree);
    }
    ctx.emit(value, || {
        let mut s = format!("{} at p = {}\n", l.compact(), ctx.p);
        if let Some(b) = &bounds {
            s += &bounds_text(b);
        }
        if let Some(r) = &oracle {
            s += &format!(
                "oracle    {}\n  witness ⟨e_{{{}}}, e_{{{}}}⟩ = {}\n",
                r.schaper_number, r.witness.0, r.witness.1, r.entry_value
            );
        }
        if let (Some(b), Some(r)) = (&bounds, &oracle) {
            s += if disagree { "DISAGREE\n" } else { "" };
            if !disagree && b.exact() == Some(r.schaper_number) {
                s += &format!("{} = {}\n", b.lower, r.schaper_number);
            }
        }
        s
    });
    Ok(if disagree { EXIT_DISAGREE } else { 0 })
}

fn sumformula(ctx: &Ctx, text: &str, mu: Option<&str>) -> Out {
    let l = Partition::parse(text)?;
    let Some(mu) = mu else {
        let r = symbolic_rhs(&l, ctx.p);
        ctx.emit(serde_json::to_value(&r).expect("json"), || format!("{r}\n"));
        return Ok(0);
    };
    let mu = Partition::parse(mu)?;
    let Some(path) = &ctx.table else {
        return Err(Fail {
            code: EXIT_INPUT,
            msg: "--mu needs --table".into(),
        });
    };
    let table = load_table(path)?;
    let mut r = evaluate(&l, &mu, ctx.p, &table)?;
    let lower = combined_bounds(&l, ctx.p).lower;
    if lower > 0 {
        r.bound = r.value.map(|v| v.div_euclid(lower as i64));
    }
    ctx.emit(serde_json::to_value(&r).expect("json"), || {
        let mut s = format!("{r}\n");
        match r.bound {
            Some(b) => {
                s += &format!(
                    "[S^{}:D^{}] <= {b} (ν_{} >= {lower})\n",
                    l.compact(),
                    mu.compact(),
                    ctx.p
                )
            }
            None => s += "no bound: no positive lower bound on the Schaper number\n",
        }
        s
    });
    Ok(0)
}

fn verify(ctx: &Ctx, n_max: u32, level: Option<u32>) -> Out {
    let levels = match (level, ctx.p.get()) {
        (Some(k), _) => vec![k],
        (None, 2) => vec![2, 3, 4],
        (None, _) => vec![2, 3],
    };
    let oracle = ctx.oracle()?;
    let mut reports = Vec::new();
    for k in levels {
        reports.push(verify_characterisation(n_max, ctx.p, k, &oracle)?);
    }
    let bad = reports.iter().any(|r| !r.ok());
    ctx.emit(serde_json::to_value(&reports).expect("json"), || {
        let mut s = format!(
            "p = {}, n <= {n_max}\nlevel  checked  agree  disagree  skipped\n",
            ctx.p
        );
        for r in &reports {
            s += &format!(
                "{:>5}  {:>7}  {:>5}  {:>8}  {:>7}\n",
                r.level,
                r.checked,
                r.agreements,
                r.disagreements.len(),
                r.skipped.len()
            );
        }
        for r in &reports {
            for d in &r.disagreements {
                s += &format!(
                    "level {}: {} predicate {} oracle {} witness {} / {}\n",
                    r.level,
                    d.shape.compact(),
                    d.predicate,
                    d.schaper,
                    d.witness.0,
                    d.witness.1
                );
            }
        }
        s
    });
    Ok(if bad { EXIT_DISAGREE } else { 0 })
}

fn conjecture(ctx: &Ctx, n_max: u32) -> Out {
    let r = check_conjecture(n_max, ctx.p, &ctx.oracle()?)?;
    let counter: Vec<_> = r.counterexamples().collect();
    let contra: Vec<_> = r.contradictions().collect();
    let holds = r.rows.iter().filter(|row| row.condition.is_some()).count();
    let value = json!({
        "p": r.prime,
        "n_max": n_max,
        "checked": r.rows.len(),
        "condition_holds": holds,
        "counterexamples": counter,
        "contradictions": contra,
        "skipped": r.skipped,
    });
    ctx.emit(value, || {
        let mut s = format!(
            "p = {}, n <= {n_max}: {} checked, condition holds for {holds}, {} skipped\n",
            ctx.p,
            r.rows.len(),
            r.skipped.len()
        );
        s += &format!("counterexamples (condition, ν < 3): {}\n", counter.len());
        for row in &counter {
            s += &format!("  {} ν = {}\n", row.shape.compact(), row.schaper);
        }
        s += &format!("contradictions (no condition, ν >= 3): {}\n", contra.len());
        for row in &contra {
            s += &format!("  {} ν = {}\n", row.shape.compact(), row.schaper);
        }
        s
    });
    Ok(if contra.is_empty() { 0 } else { EXIT_DISAGREE })
}

fn inner(ctx: &Ctx, s: &str, t: &str) -> Out {
    let (s, t) = (Tableau::parse(s)?, Tableau::parse(t)?);
    let ip = polytabloid_inner_product(&s, &t, &ctx.budget)?;
    let v = valuation(&ip, ctx.p);
    let value = json!({"s": s.to_string(), "t": t.to_string(), "inner_product": ip.to_string(),
        "p": ctx.p, "valuation": v.finite()});
    ctx.emit(value, || format!("{ip}\nν_{} = {v}\n", ctx.p));
    Ok(0)
}

fn colourings(ctx: &Ctx, s: &str, t: &str) -> Out {
    let (s, t) = (Tableau::parse(s)?, Tableau::parse(t)?);
    let g = build_graph(&s, &t)?;
    let count = g.count_admissible(&ctx.budget)?;
    let check = check_signed_sum(&s, &t, &ctx.budget)?;
    let edges: Vec<[usize; 2]> = g.edges().iter().map(|&(i, j)| [i, j]).collect();
    let value = json!({
        "edges": edges,
        "max_multiplicity": g.max_multiplicity(),
        "admissible": count,
        "signed_sum": check.signed_sum.to_string(),
        "sign": check.sign,
        "inner_product": check.inner_product.to_string(),
        "holds": check.holds(),
    });
    ctx.emit(value, || {
        format!(
            "{}admissible colourings {count}\nsigned sum {}\nsign {} × inner product {}\n{}\n",
            g.dump(),
            check.signed_sum,
            check.sign,
            check.inner_product,
            if check.holds() {
                "consistent"
            } else {
                "INCONSISTENT"
            }
        )
    });
    Ok(if check.holds() { 0 } else { EXIT_DISAGREE })
}

fn gram(ctx: &Ctx, text: &str) -> Out {
    let l = Partition::parse(text)?;
    let g = gram_matrix(&l, &ctx.budget)?;
    let r = g.schaper(ctx.p);
    let rows: Vec<Vec<String>> = g
        .rows()
        .iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect())
        .collect();
    let basis: Vec<String> = g.basis.iter().map(|t| t.to_string()).collect();
    let value = json!({"partition": l, "basis": basis, "matrix": rows, "oracle": oracle_json(&r)});
    ctx.emit(value, || {
        let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut s = String::new();
        for (t, row) in basis.iter().zip(&rows) {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
            s += &format!("{}  {t}\n", cells.join(" "));
        }
        s += &format!("ν_{} = {}\n", ctx.p, r.schaper_number);
        s
    });
    Ok(0)
}
