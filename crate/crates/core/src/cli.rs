//! Command-line verbs. `main` only forwards `std::env::args` to [`run`].
//!
//! Exit codes: 0 success, 1 usage or input error, 2 budget exceeded,
//! 3 a property check failed. Reports go to standard output, messages to
//! standard error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{parse_algebra, FiniteAlgebra};
use crate::approx::{prim_at_with, walsh_nonlinearity, PrimBudget, PrimMethod, DEFAULT_FUNCTION_BUDGET};
use crate::builtins::{builtin_algebra, BuiltinSpec};
use crate::checks::{run_suite, Suite, SuiteReport};
use crate::clone::post::post_classes;
use crate::clone::primality::is_primal;
use crate::clone::{function_count, generate_clone, DEFAULT_CLONE_BUDGET};
use crate::discrepancy::discrepancies;
use crate::error::{Error, Result};
use crate::hom::{check_homomorphism, lemma_elementary_check, AlgebraMap, LemmaInput, LemmaKind};
use crate::lattice::meet_zero_table;
use crate::oracles::groupoid2_family;
use crate::rational::ExactRational;
use crate::spectrum::{equation_probability, pspec_at, spectrum_prefix};
use crate::symmetry::{automorphism_group, orbit_bound_at, orbit_partition};
use crate::table::FunctionTable;
use crate::term::{compile_term, parse_equation, parse_term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pspec", version, about = "Equational probabilities, spectra, clones and primality of finite algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Clone budget in tables.
    #[arg(long, global = true, default_value_t = DEFAULT_CLONE_BUDGET)]
    pub budget: usize,

    /// Budget on the number of functions swept by `prim`.
    #[arg(long, global = true, default_value_t = DEFAULT_FUNCTION_BUDGET)]
    pub function_budget: usize,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct AlgebraArg {
    /// `.alg` file or `builtin:<key>[:<param>]`.
    #[arg(long)]
    pub algebra: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability that an equation holds.
    Prob {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// S-expression such as `(= (meet x0 x1) (zero))`.
        #[arg(long)]
        equation: String,
        /// Number of variables (defaults to those used).
        #[arg(long)]
        vars: Option<usize>,
    },
    /// Spectrum slice at one arity, or the union up to it with `--prefix`.
    Spectrum {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        prefix: bool,
    },
    /// Clone statistics at one arity.
    Clone {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        arity: usize,
        /// Also list every table.
        #[arg(long)]
        list: bool,
    },
    /// Automorphism group, fixed points and orbits of `A^k`.
    Aut {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 1)]
        arity: usize,
    },
    /// Subset-sum orbit bound on the spectrum slice.
    OrbitBound {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        arity: usize,
    },
    /// `Prim_k` with covering radius and hardest function.
    Prim {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        arity: usize,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Nonlinearity of a Boolean function given as a table or a term.
    Nonlinearity {
        /// Entries such as `0001` (length `2^k`).
        #[arg(long, conflicts_with_all = ["term", "algebra"])]
        table: Option<String>,
        #[arg(long, requires = "algebra")]
        term: Option<String>,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// The five-class test for a two-element algebra.
    PostClass {
        #[command(flatten)]
        algebra: AlgebraArg,
    },
    /// Every order-two groupoid: spectra up to `--max-arity`, primality, Prim_1, Prim_2.
    ScanOrder2 {
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
    /// Named property suite.
    Check {
        #[arg(long, value_parser = parse_suite_arg)]
        suite: SuiteArg,
    },
    /// Lattices of a given size and their `Pr(x ∧ y ≈ 0)`.
    LatticeSearch {
        #[arg(long, default_value_t = 6)]
        size: usize,
        /// Keep only lattices with this probability, e.g. `13/36`.
        #[arg(long)]
        target: Option<String>,
    },
    /// Classify a map and optionally check a transfer inequality.
    Hom {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Target algebra (same forms as `--algebra`).
        #[arg(long)]
        target: String,
        /// Map file: `map <src> <dst>` then one image per source element.
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        equation: Option<String>,
        #[arg(long, value_enum, requires = "equation")]
        kind: Option<KindArg>,
    },
    /// Logged disagreements with published values, recomputed.
    Discrepancies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exhaustive,
    Walsh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Mono,
    Epi,
    Kappa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteArg {
    One(Suite),
    All,
}

fn parse_suite_arg(s: &str) -> std::result::Result<SuiteArg, String> {
    if s == "all" {
        return Ok(SuiteArg::All);
    }
    s.parse::<Suite>().map(SuiteArg::One).map_err(|e| e.to_string())
}

/// Loads `builtin:<key>` or an `.alg` file.
pub fn load_algebra(source: &str) -> Result<FiniteAlgebra> {
    if source.starts_with("builtin:") {
        builtin_algebra(&BuiltinSpec::parse(source)?)
    } else {
        let text = std::fs::read_to_string(source).map_err(|e| Error::Io(format!("{source}: {e}")))?;
        parse_algebra(&text)
    }
}

/// A rendered report.
struct Report {
    text: String,
    json: Value,
    csv: String,
    failed: bool,
}

impl Report {
    fn new(text: String, json: Value, csv: String) -> Self {
        Report {
            text,
            json,
            csv,
            failed: false,
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("json values serialize") + "\n",
            Format::Csv => self.csv.clone(),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn joined(values: &[ExactRational]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Key-value CSV with a header row.
fn kv_csv(rows: &[(&str, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{},{}\n", k, csv_field(v)));
    }
    out
}

/// Key-value text, one `key: value` per line.
fn kv_text(rows: &[(&str, String)]) -> String {
    rows.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

/// Parses the arguments and runs the verb. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let result = match cli.global.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::Domain(format!("cannot start {n} threads: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.global.format).as_bytes());
            if report.failed {
                EXIT_CHECK_FAILED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Budget { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Prob { algebra, equation, vars } => prob(&load_algebra(&algebra.algebra)?, equation, *vars),
        Command::Spectrum { algebra, arity, prefix } => spectrum(&load_algebra(&algebra.algebra)?, *arity, *prefix, g),
        Command::Clone { algebra, arity, list } => clone_stats(&load_algebra(&algebra.algebra)?, *arity, *list, g),
        Command::Aut { algebra, arity } => aut(&load_algebra(&algebra.algebra)?, *arity),
        Command::OrbitBound { algebra, arity } => orbit_bound(&load_algebra(&algebra.algebra)?, *arity),
        Command::Prim { algebra, arity, method } => prim(&load_algebra(&algebra.algebra)?, *arity, *method, g),
        Command::Nonlinearity {
            table,
            term,
            algebra,
            arity,
        } => nonlinearity(table.as_deref(), term.as_deref(), algebra.as_deref(), *arity),
        Command::PostClass { algebra } => post_class(&load_algebra(&algebra.algebra)?, g),
        Command::ScanOrder2 { max_arity } => scan_order2(*max_arity, g),
        Command::Check { suite } => check(*suite, g),
        Command::LatticeSearch { size, target } => lattice_search(*size, target.as_deref()),
        Command::Hom {
            algebra,
            target,
            map,
            equation,
            kind,
        } => hom(&load_algebra(&algebra.algebra)?, &load_algebra(target)?, map, equation.as_deref(), *kind),
        Command::Discrepancies => discrepancy_report(),
    }
}

fn prob(a: &FiniteAlgebra, equation: &str, vars: Option<usize>) -> Result<Report> {
    let e = parse_equation(equation, &a.signature(), vars)?;
    let p = equation_probability(a, &e)?;
    Ok(Report::new(
        format!("{p}\n"),
        json!({"algebra": a.name(), "equation": e.to_string(), "vars": e.vars(), "probability": p}),
        format!("algebra,equation,vars,probability\n{},{},{},{p}\n", a.name(), csv_field(&e.to_string()), e.vars()),
    ))
}

fn spectrum(a: &FiniteAlgebra, k: usize, prefix: bool, g: &GlobalOpts) -> Result<Report> {
    let r = if prefix {
        spectrum_prefix(a, k, g.budget)?
    } else {
        if k == 0 {
            return Err(Error::Domain("arity must be at least 1".into()));
        }
        pspec_at(a, k, g.budget)?
    };
    let mut text = format!("{}\n", joined(&r.values));
    if !r.complete {
        text.push_str("incomplete: clone budget reached, values are a subset\n");
    }
    let mut csv = String::from("value\n");
    for v in &r.values {
        csv.push_str(&format!("{v}\n"));
    }
    Ok(Report::new(text, to_json(&r), csv))
}

fn clone_stats(a: &FiniteAlgebra, k: usize, list: bool, g: &GlobalOpts) -> Result<Report> {
    let c = generate_clone(a, k, g.budget)?;
    let total = function_count(a.size(), k).map_or("overflow".to_string(), |t| t.to_string());
    let rows = vec![
        ("algebra", a.name().to_string()),
        ("arity", k.to_string()),
        ("size", c.len().to_string()),
        ("complete", c.is_complete().to_string()),
        ("rounds", c.rounds().to_string()),
        ("functions", total.clone()),
    ];
    let tables: Vec<String> = c.tables().iter().map(|t| t.to_string()).collect();
    let mut text = kv_text(&rows);
    let mut csv = kv_csv(&rows);
    if list {
        for t in &tables {
            text.push_str(&format!("{t}\n"));
            csv.push_str(&format!("table,{t}\n"));
        }
    }
    let mut json = json!({
        "algebra": a.name(), "arity": k, "size": c.len(), "complete": c.is_complete(),
        "rounds": c.rounds(), "budget": c.budget(), "functions": total,
    });
    if list {
        json["tables"] = json!(tables);
    }
    Ok(Report::new(text, json, csv))
}

fn aut(a: &FiniteAlgebra, k: usize) -> Result<Report> {
    let group = automorphism_group(a)?;
    let partition = orbit_partition(&group, k)?;
    let elements: Vec<String> = group
        .elements()
        .iter()
        .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    let sizes = partition.sorted_sizes();
    let rows = vec![
        ("order", group.order().to_string()),
        ("elements", elements.join(" | ")),
        (
            "fixed",
            group.fixed_points().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
        ),
        ("arity", k.to_string()),
        ("orbits", sizes.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")),
    ];
    Ok(Report::new(
        kv_text(&rows),
        json!({
            "algebra": a.name(), "order": group.order(), "elements": group.elements(),
            "fixedPoints": group.fixed_points(), "arity": k, "orbitSizes": sizes,
        }),
        kv_csv(&rows),
    ))
}

fn orbit_bound(a: &FiniteAlgebra, k: usize) -> Result<Report> {
    let values = orbit_bound_at(a, k)?;
    let mut csv = String::from("value\n");
    for v in &values {
        csv.push_str(&format!("{v}\n"));
    }
    Ok(Report::new(
        format!("{}\n", joined(&values)),
        json!({"algebra": a.name(), "arity": k, "values": values}),
        csv,
    ))
}

fn prim(a: &FiniteAlgebra, k: usize, method: Option<MethodArg>, g: &GlobalOpts) -> Result<Report> {
    let budget = PrimBudget {
        clone_tables: g.budget,
        functions: g.function_budget,
    };
    let method = method.map(|m| match m {
        MethodArg::Exhaustive => PrimMethod::Exhaustive,
        MethodArg::Walsh => PrimMethod::WalshHadamard,
    });
    let r = prim_at_with(a, k, budget, method)?;
    let rows = vec![
        ("method", format!("{:?}", r.method)),
        ("covering-radius", r.covering_radius.to_string()),
        ("hardest", r.hardest_function.to_string()),
        ("complete", r.complete.to_string()),
    ];
    let mut text = format!("{}\n{}", r.prim, kv_text(&rows));
    if let Some(note) = &r.note {
        text.push_str(&format!("note: {note}\n"));
    }
    let mut csv_rows = vec![("prim", r.prim.to_string())];
    csv_rows.extend(rows);
    Ok(Report::new(text, to_json(&r), kv_csv(&csv_rows)))
}

fn parse_bits(s: &str) -> Result<FunctionTable> {
    let entries: Vec<u8> = s
        .chars()
        .filter(|c| !matches!(c, ' ' | ',' | '_'))
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Domain(format!("table entries must be 0 or 1, found {c:?}"))),
        })
        .collect::<Result<_>>()?;
    let len = entries.len();
    if !len.is_power_of_two() {
        return Err(Error::Shape(format!("table length {len} is not a power of two")));
    }
    FunctionTable::new(2, len.trailing_zeros() as usize, entries)
}

fn nonlinearity(table: Option<&str>, term: Option<&str>, algebra: Option<&str>, arity: Option<usize>) -> Result<Report> {
    let f = match (table, term, algebra) {
        (Some(t), _, _) => parse_bits(t)?,
        (None, Some(t), Some(a)) => {
            let a = load_algebra(a)?;
            let term = parse_term(t, &a.signature())?;
            let k = arity.unwrap_or_else(|| term.max_var().map_or(1, |m| m + 1));
            compile_term(&a, &term, k)?
        }
        _ => return Err(Error::Domain("give --table, or --term with --algebra".into())),
    };
    let nl = walsh_nonlinearity(&f)?;
    Ok(Report::new(
        format!("{nl}\n"),
        json!({"table": f.to_string(), "arity": f.arity(), "nonlinearity": nl}),
        format!("table,arity,nonlinearity\n{f},{},{nl}\n", f.arity()),
    ))
}

fn post_class(a: &FiniteAlgebra, g: &GlobalOpts) -> Result<Report> {
    let classes = post_classes(a)?;
    let verdict = is_primal(a, g.budget)?;
    let rows = vec![
        ("classes", classes.to_string()),
        ("primal", format!("{:?}", verdict.status)),
    ];
    Ok(Report::new(
        kv_text(&rows),
        json!({"algebra": a.name(), "classes": classes.to_string(), "verdict": verdict}),
        kv_csv(&rows),
    ))
}

/// One row of the order-two scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub index: usize,
    pub table: String,
    /// Slices at arities `1..=max_arity`.
    pub spectra: Vec<Vec<ExactRational>>,
    pub family: &'static str,
    /// `unknown` for families whose spectrum has no closed form.
    pub status: &'static str,
    pub primal: String,
    #[serde(rename = "postClasses")]
    pub post_classes: String,
    pub prim1: ExactRational,
    pub prim2: ExactRational,
}

/// Scans the 16 groupoids on `{0, 1}`.
pub fn scan_order2_rows(max_arity: usize, budget: usize) -> Result<Vec<ScanRow>> {
    if max_arity == 0 {
        return Err(Error::Domain("max arity must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for index in 0..16 {
        let a = builtin_algebra(&BuiltinSpec::parse(&format!("groupoid2:{index}"))?)?;
        let spectra = (1..=max_arity)
            .map(|k| pspec_at(&a, k, budget).map(|r| r.values))
            .collect::<Result<Vec<_>>>()?;
        let family = groupoid2_family(index)?;
        let verdict = is_primal(&a, budget)?;
        let prim = |k| prim_at_with(&a, k, PrimBudget::default(), None).map(|r| r.prim);
        rows.push(ScanRow {
            index,
            table: a.ops()[0].table.to_string(),
            spectra,
            family,
            status: if family == "implication" { "unknown" } else { "asserted" },
            primal: format!("{:?}", verdict.status),
            post_classes: post_classes(&a)?.to_string(),
            prim1: prim(1)?,
            prim2: prim(2)?,
        });
    }
    Ok(rows)
}

fn scan_order2(max_arity: usize, g: &GlobalOpts) -> Result<Report> {
    let rows = scan_order2_rows(max_arity, g.budget)?;
    let mut header = vec!["index".to_string(), "table".to_string()];
    header.extend((1..=max_arity).map(|k| format!("spectrum_k{k}")));
    header.extend(["family", "status", "primal", "post_classes", "prim1", "prim2"].map(String::from));
    let mut csv = header.join(",") + "\n";
    let mut text = String::new();
    for r in &rows {
        let mut cells = vec![r.index.to_string(), r.table.clone()];
        cells.extend(r.spectra.iter().map(|s| joined(s)));
        cells.extend([
            r.family.to_string(),
            r.status.to_string(),
            r.primal.clone(),
            r.post_classes.clone(),
            r.prim1.to_string(),
            r.prim2.to_string(),
        ]);
        csv.push_str(&cells.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
        csv.push('\n');
        let top = r.spectra.last().expect("max_arity >= 1");
        text.push_str(&format!(
            "{:>2} {} {:<11} {:<8} {:<9} {:<12} Prim1={} Prim2={} k={}: {}\n",
            r.index,
            r.table,
            r.family,
            r.status,
            r.primal,
            r.post_classes,
            r.prim1,
            r.prim2,
            max_arity,
            joined(top)
        ));
    }
    Ok(Report::new(text, to_json(&rows), csv))
}

fn suite_lines(r: &SuiteReport) -> (String, String) {
    let mut text = String::new();
    let mut csv = String::new();
    for c in &r.cases {
        let verdict = if c.passed { "pass" } else { "FAIL" };
        text.push_str(&format!("{verdict} {} {} :: {}\n", r.suite.name(), c.case, c.detail));
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.suite.name(),
            csv_field(&c.case),
            c.passed,
            csv_field(&c.detail)
        ));
    }
    let failed = r.failures().count();
    text.push_str(&format!(
        "{} {}: {} cases, {} failed\n",
        if failed == 0 { "PASS" } else { "FAIL" },
        r.suite.name(),
        r.cases.len(),
        failed
    ));
    (text, csv)
}

fn check(suite: SuiteArg, g: &GlobalOpts) -> Result<Report> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::One(s) => vec![s],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut text = String::new();
    let mut csv = String::from("suite,case,passed,detail\n");
    let mut reports = Vec::new();
    for s in suites {
        let r = run_suite(s, g.seed)?;
        let (t, c) = suite_lines(&r);
        text.push_str(&t);
        csv.push_str(&c);
        reports.push(r);
    }
    let failed = reports.iter().any(|r| !r.passed());
    let mut report = Report::new(text, to_json(&reports), csv);
    report.failed = failed;
    Ok(report)
}

fn lattice_search(size: usize, target: Option<&str>) -> Result<Report> {
    let target: Option<ExactRational> = target.map(str::parse).transpose()?;
    let hits: Vec<_> = meet_zero_table(size)?
        .into_iter()
        .filter(|h| target.as_ref().is_none_or(|t| &h.meet_zero == t))
        .collect();
    let mut text = String::new();
    let mut csv = String::from("index,meet_zero,distributive,hasse\n");
    for h in &hits {
        text.push_str(&format!(
            "{:>3} {} {} [{}]\n",
            h.index,
            h.meet_zero,
            if h.distributive { "distributive" } else { "non-distributive" },
            h.hasse
        ));
        csv.push_str(&format!("{},{},{},{}\n", h.index, h.meet_zero, h.distributive, csv_field(&h.hasse)));
    }
    text.push_str(&format!("{} lattices\n", hits.len()));
    Ok(Report::new(
        text,
        json!({"size": size, "target": target, "lattices": hits}),
        csv,
    ))
}

fn hom(
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
    map: &PathBuf,
    equation: Option<&str>,
    kind: Option<KindArg>,
) -> Result<Report> {
    let text = std::fs::read_to_string(map).map_err(|e| Error::Io(format!("{}: {e}", map.display())))?;
    let m = AlgebraMap::from_text(&text, source.clone(), target.clone())?;
    let class = check_homomorphism(&m)?;
    let mut rows = vec![
        ("is-hom", class.is_hom.to_string()),
        ("injective", class.injective.to_string()),
        ("surjective", class.surjective.to_string()),
        ("kappa", class.kappa.map_or("-".into(), |k| k.to_string())),
    ];
    let mut json = json!({"classification": class});
    let mut failed = false;
    if let (Some(eq), Some(kind)) = (equation, kind) {
        let e = parse_equation(eq, &source.signature(), None)?;
        let kind = match kind {
            KindArg::Mono => LemmaKind::Mono,
            KindArg::Epi => LemmaKind::Epi,
            KindArg::Kappa => LemmaKind::Kappa,
        };
        let r = lemma_elementary_check(kind, &e, LemmaInput::Map(&m))?;
        rows.push(("holds", r.holds.to_string()));
        rows.push(("lhs", r.lhs.to_string()));
        if let Some(mid) = &r.middle {
            rows.push(("middle", mid.to_string()));
        }
        rows.push(("rhs", r.rhs.to_string()));
        failed = !r.holds;
        json["check"] = to_json(&r);
    }
    let mut report = Report::new(kv_text(&rows), json, kv_csv(&rows));
    report.failed = failed;
    Ok(report)
}

fn discrepancy_report() -> Result<Report> {
    let entries = discrepancies()?;
    let mut text = String::new();
    let mut csv = String::from("id,subject,computed,published_value,detail\n");
    for d in &entries {
        text.push_str(&format!(
            "{}\n  subject: {}\n  computed: {}\n  published value: {}\n  detail: {}\n",
            d.id, d.subject, d.computed, d.published_value, d.detail
        ));
        csv.push_str(
            &[d.id, &d.subject, &d.computed, d.published_value, &d.detail]
                .map(csv_field)
                .join(","),
        );
        csv.push('\n');
    }
    Ok(Report::new(text, to_json(&entries), csv))
}
