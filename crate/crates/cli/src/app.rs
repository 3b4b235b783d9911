//! Command-line commands.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use jetlie_core::catalog::Catalog;
use jetlie_core::{
    conditional_invariance, functional_rank, jacobi_failures, manifold_invariance, orbit_rank, rank_balance,
    solve_linear, strict_invariance, verify_table, CommutatorTable, CoreError, JetSpace, PairStatus, PdeSystem,
    PointTransformation, VectorField, DEFAULT_SEED,
};
use jetlie_kernel::{Expr, Symbol};
use thiserror::Error;

use crate::dsl::{parse, DslError, SourceUnit};
use crate::report::{CheckRecord, Expect, Observation, Report};
use crate::suite;

#[derive(Debug, Parser)]
#[command(name = "jetlie", version, about = "Exact checks of Lie symmetries, prolongations and differential invariants")]
pub struct Cli {
    /// Seed for every random evaluation point.
    #[arg(long, global = true, env = "JETLIE_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Also write the line-delimited JSON report here.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Input file in the declaration language; its names are usable wherever a reference is expected.
    #[arg(long, global = true, value_name = "FILE")]
    pub file: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare every bracket of an algebra with its commutator table.
    Table(TableArgs),
    /// Print the prolongation of a field.
    Prolong {
        /// `algebra:field` or a field name from the input file.
        #[arg(long)]
        field: String,
        /// Jet order to prolong to.
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
    /// Print the Lie bracket of two fields.
    Bracket {
        /// `algebra:field`.
        a: String,
        b: String,
    },
    /// Strict, manifold or conditional invariance.
    Invariance(InvarianceArgs),
    /// Orbit and functional ranks.
    Rank(RankArgs),
    /// Identities of a finite transformation.
    Transform(TransformArgs),
    /// Run the full built-in suite.
    VerifyPaper {
        /// Restrict to a group (theorem1 .. theorem7, tables, jacobi, systems, ...) or an id prefix.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Catalog algebra key.
    #[arg(long, conflicts_with_all = ["table", "cga_general"])]
    pub algebra: Option<String>,
    /// Table name from the input file (checked against the fields of the same names) or from the catalog.
    #[arg(long)]
    pub table: Option<String>,
    /// Dimension N of the symbolic conformal Galilei realization.
    #[arg(long, value_name = "N", requires = "levels")]
    pub cga_general: Option<usize>,
    /// Levels -L..=L, at most 3.
    #[arg(long, value_name = "L")]
    pub levels: Option<i64>,
}

#[derive(Debug, Args)]
pub struct InvarianceArgs {
    /// Field reference `algebra:field` or a field name from the input file.
    #[arg(long = "field")]
    pub fields: Vec<String>,
    /// Use every generator of a catalog algebra.
    #[arg(long)]
    pub algebra: Option<String>,
    /// Target expression: catalog invariant key, expression name from the input file, or a formula.
    #[arg(long = "expr")]
    pub exprs: Vec<String>,
    /// Catalog or input-file system, checked on its solution manifold.
    #[arg(long)]
    pub system: Option<String>,
    /// Extra condition `e = 0` added to the system.
    #[arg(long = "condition", requires = "system")]
    pub conditions: Vec<String>,
    /// Leading derivatives to solve the conditions and then the equations for, in that order.
    #[arg(long = "solve-for", value_delimiter = ',')]
    pub solve_for: Vec<String>,
    /// Parameters to split the residual in, reported as equation counts.
    #[arg(long, value_delimiter = ',')]
    pub split: Vec<String>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long = "field")]
    pub fields: Vec<String>,
    /// Expressions whose functional rank is computed.
    #[arg(long = "expr")]
    pub exprs: Vec<String>,
    /// Space for the expressions when no field is given.
    #[arg(long)]
    pub space: Option<String>,
    /// Jet order of the orbit.
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    /// Fail unless the orbit rank (or the functional rank when only expressions are given) equals this.
    #[arg(long)]
    pub expect: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Catalog key or input-file transformation name.
    #[arg(long)]
    pub transformation: String,
    /// `LHS = RHS`: the pullback of LHS equals RHS.
    #[arg(long = "identity")]
    pub identities: Vec<String>,
    /// `algebra:field` or `algebra:field:sign`, compared with the infinitesimal generator.
    #[arg(long)]
    pub generator: Option<String>,
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}:{source}")]
    Dsl { path: String, source: DslError },
    #[error("in `{what}`: {source}")]
    Inline { what: String, source: DslError },
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, AppError>;

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

/// Catalog plus an optional input file.
struct Context {
    cat: &'static Catalog,
    text: String,
    unit: SourceUnit,
}

/// Where a field came from: `(algebra key, field)` or a file field.
struct Resolved {
    field: VectorField,
    label: String,
}

impl Context {
    fn load(file: Option<&PathBuf>) -> Result<Self> {
        let cat = Catalog::get()?;
        let (text, unit) = match file {
            None => (String::new(), SourceUnit::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| AppError::Io(p.display().to_string(), e))?;
                let unit = parse(&text).map_err(|source| AppError::Dsl {
                    path: p.display().to_string(),
                    source,
                })?;
                (text, unit)
            }
        };
        Ok(Context { cat, text, unit })
    }

    fn space(&self, name: &str) -> Result<std::sync::Arc<JetSpace>> {
        if let Some(s) = self.unit.space(name) {
            return Ok(s.clone());
        }
        Ok(self.cat.space(name)?.clone())
    }

    /// Reads `src` on `space`. Input-file spaces go through the declaration language with
    /// every earlier declaration in scope; catalog spaces see the catalog invariants.
    fn read(&self, space: &JetSpace, src: &str) -> Result<Expr> {
        if self.unit.space(space.name()).is_some() {
            let text = format!("{}\nexpr cliexpr on {} = {};\n", self.text, space.name(), src);
            let unit = parse(&text).map_err(|source| AppError::Inline {
                what: src.to_string(),
                source,
            })?;
            let (_, e) = unit.expr("cliexpr").ok_or_else(|| usage("expression lost"))?;
            return Ok(e.clone());
        }
        Ok(self.cat.read(space.name(), src)?)
    }

    /// A named expression (catalog invariant or file expression) or a formula on `space`.
    fn target(&self, space: &JetSpace, src: &str) -> Result<(String, Expr)> {
        if let Ok(inv) = self.cat.invariant(src) {
            if inv.space.name() == space.name() {
                return Ok((src.to_string(), inv.expr.clone()));
            }
        }
        if let Some((sp, e)) = self.unit.expr(src) {
            if sp == space.name() {
                return Ok((src.to_string(), e.clone()));
            }
        }
        Ok((src.to_string(), self.read(space, src)?))
    }

    /// `algebra:field` from the catalog, or a field from the input file. When `on` names a
    /// different space, the catalog copy of the algebra carried to that space is used.
    fn field(&self, r: &str, on: Option<&JetSpace>) -> Result<Resolved> {
        let Some((a, f)) = r.split_once(':') else {
            let field = self.unit.field(r).cloned().ok_or_else(|| usage(format!("no field `{}` in the input file", r)))?;
            return Ok(Resolved { field, label: r.to_string() });
        };
        let alg = self.cat.algebra(a)?;
        let field = alg.field(f)?.clone();
        if let Some(sp) = on {
            if field.space().name() != sp.name() {
                let carried = format!("{}_{}", sp.name(), a);
                let moved = self.cat.algebra(&carried).map_err(|_| {
                    AppError::Core(CoreError::SpaceMismatch(r.to_string(), sp.name().to_string()))
                })?;
                return Ok(Resolved {
                    field: moved.field(f)?.clone(),
                    label: format!("{}:{}", carried, f),
                });
            }
        }
        Ok(Resolved { field, label: r.to_string() })
    }

    fn fields(&self, refs: &[String], algebra: Option<&str>, on: Option<&JetSpace>) -> Result<Vec<Resolved>> {
        let mut out = Vec::new();
        if let Some(a) = algebra {
            let alg = match on {
                Some(sp) if self.cat.algebra(a)?.space.name() != sp.name() => {
                    self.cat.algebra(&format!("{}_{}", sp.name(), a))?
                }
                _ => self.cat.algebra(a)?,
            };
            for f in &alg.fields {
                out.push(Resolved {
                    field: f.clone(),
                    label: format!("{}:{}", alg.key, f.name()),
                });
            }
        }
        for r in refs {
            out.push(self.field(r, on)?);
        }
        if out.is_empty() {
            return Err(usage("no fields given (use --field or --algebra)"));
        }
        Ok(out)
    }

    fn system(&self, name: &str) -> Result<PdeSystem> {
        if let Some(s) = self.unit.system(name) {
            return Ok(s.clone());
        }
        Ok(self.cat.system(name)?.system.clone())
    }

    fn transformation(&self, name: &str) -> Result<(PointTransformation, Option<&'static jetlie_core::catalog::TransformationEntry>)> {
        if let Some(t) = self.unit.transform(name) {
            return Ok((t.clone(), None));
        }
        let e = self.cat.transformation(name)?;
        Ok((e.transform.clone(), Some(e)))
    }

    fn symbol(&self, space: &JetSpace, name: &str) -> Result<Symbol> {
        space
            .coordinate(name)
            .or_else(|| crate::dsl::resolve(space, name))
            .ok_or_else(|| usage(format!("`{}` is not a coordinate of {}", name, space.name())))
    }
}

fn record(id: &str, group: &str, description: &str, obs: Observation) -> CheckRecord {
    CheckRecord::new(id, group, description, Expect::Pass, obs)
}

fn table_record(id: &str, fields: &[VectorField], table: &CommutatorTable, seed: u64) -> Result<CheckRecord> {
    let rep = verify_table(fields, table, seed)?;
    let bad: Vec<_> = rep.failures().collect();
    let obs = if bad.is_empty() {
        Observation::holds(format!("{} brackets match, {} out of range", rep.checked(), rep.pairs.len() - rep.checked()))
    } else {
        let mut o = Observation::fails(format!(
            "differ: {}",
            bad.iter().map(|p| format!("[{}, {}]", p.a, p.b)).collect::<Vec<_>>().join(", ")
        ));
        if let PairStatus::Fail { residual } = &bad[0].status {
            o.residual = Some(residual.to_string());
        }
        o
    };
    Ok(record(id, "table", "brackets against the table", obs))
}

fn jacobi_record(id: &str, fields: Option<&[VectorField]>, table: &CommutatorTable) -> Result<CheckRecord> {
    let mut bad = table.abstract_jacobi_failures();
    if let Some(f) = fields {
        bad.extend(jacobi_failures(f)?);
    }
    let obs = Observation::check(
        bad.is_empty(),
        if bad.is_empty() {
            "no failing triples".to_string()
        } else {
            bad.iter().map(|(a, b, c)| format!("({}, {}, {})", a, b, c)).collect::<Vec<_>>().join(", ")
        },
    );
    Ok(record(id, "jacobi", "Jacobi identity", obs))
}

fn cmd_table(ctx: &Context, a: &TableArgs, report: &mut Report) -> Result<()> {
    let seed = report.header.seed;
    if let Some(key) = &a.algebra {
        let alg = ctx.cat.algebra(key)?;
        report.checks.push(table_record(&format!("table_{}", key), &alg.fields, &alg.table, seed)?);
        report.checks.push(jacobi_record(&format!("jacobi_{}", key), Some(&alg.fields), &alg.table)?);
    } else if let Some(n) = a.cga_general {
        let l = a.levels.ok_or_else(|| usage("--cga-general needs --levels"))?;
        let alg = ctx.cat.cga_general(n, l)?;
        report.checks.push(table_record(&format!("table_{}", alg.key), &alg.fields, &alg.table, seed)?);
        report.checks.push(jacobi_record(&format!("jacobi_{}", alg.key), None, &alg.table)?);
    } else if let Some(name) = &a.table {
        if let Some(t) = ctx.unit.table(name) {
            let fields = t
                .names()
                .iter()
                .map(|n| ctx.unit.field(n).cloned().ok_or_else(|| usage(format!("table `{}` names `{}`, which is not a field of the input file", name, n))))
                .collect::<Result<Vec<_>>>()?;
            report.checks.push(table_record(&format!("table_{}", name), &fields, t, seed)?);
            report.checks.push(jacobi_record(&format!("jacobi_{}", name), Some(&fields), t)?);
        } else {
            let t = ctx.cat.table(name)?;
            report.checks.push(jacobi_record(&format!("jacobi_{}", name), None, t)?);
        }
    } else {
        return Err(usage("table needs --algebra, --table or --cga-general"));
    }
    Ok(())
}

fn cmd_invariance(ctx: &Context, a: &InvarianceArgs, report: &mut Report) -> Result<()> {
    let seed = report.header.seed;
    let system = a.system.as_deref().map(|s| ctx.system(s)).transpose()?;
    let on = system.as_ref().map(|s| s.space().clone());
    let fields = ctx.fields(&a.fields, a.algebra.as_deref(), on.as_deref())?;
    let space = fields[0].field.space().clone();
    for f in &fields {
        if f.field.space().name() != space.name() {
            return Err(CoreError::SpaceMismatch(fields[0].label.clone(), f.label.clone()).into());
        }
    }
    let split: Vec<Symbol> = a
        .split
        .iter()
        .map(|s| Symbol::lookup(s).ok_or_else(|| usage(format!("--split: unknown parameter `{}`", s))))
        .collect::<Result<_>>()?;
    match &system {
        Some(sys) => {
            if !a.exprs.is_empty() {
                return Err(usage("--expr and --system are exclusive"));
            }
            let conds = a.conditions.iter().map(|c| ctx.read(&space, c)).collect::<Result<Vec<_>>>()?;
            let solved = if conds.is_empty() && a.solve_for.is_empty() {
                None
            } else {
                let mut eqs = conds.clone();
                eqs.extend(sys.equations().iter().cloned());
                if a.solve_for.len() != eqs.len() {
                    return Err(usage(format!(
                        "--solve-for needs one derivative per condition and equation ({} given, {} needed)",
                        a.solve_for.len(),
                        eqs.len()
                    )));
                }
                let targets = a.solve_for.iter().map(|s| ctx.symbol(&space, s)).collect::<Result<Vec<_>>>()?;
                Some(solve_linear(&eqs, &targets, sys.assumptions())?)
            };
            for f in &fields {
                let outs = if solved.is_none() {
                    manifold_invariance(&f.field, sys, &split, seed)?
                } else {
                    conditional_invariance(&f.field, sys, &conds, solved.clone(), &split, seed)?
                };
                for o in outs {
                    let mut obs = Observation::from_outcomes(std::slice::from_ref(&o));
                    if let Some(n) = o.split_equations {
                        obs.detail = format!("{}; {} coefficient equations", obs.detail, n);
                    }
                    report.checks.push(record(&format!("{}|{}", f.label, o.target), "invariance", "invariance on the solution manifold", obs));
                }
            }
        }
        None => {
            if a.exprs.is_empty() {
                return Err(usage("invariance needs --expr or --system"));
            }
            let targets = a.exprs.iter().map(|e| ctx.target(&space, e)).collect::<Result<Vec<_>>>()?;
            for f in &fields {
                for o in strict_invariance(&f.field, &targets, seed)? {
                    let obs = Observation::from_outcomes(std::slice::from_ref(&o));
                    report.checks.push(record(&format!("{}|{}", f.label, o.target), "invariance", "strict invariance", obs));
                }
            }
        }
    }
    Ok(())
}

fn cmd_rank(ctx: &Context, a: &RankArgs, report: &mut Report) -> Result<()> {
    let seed = report.header.seed;
    let fields = if a.algebra.is_some() || !a.fields.is_empty() {
        ctx.fields(&a.fields, a.algebra.as_deref(), None)?
    } else {
        Vec::new()
    };
    let space = match (fields.first(), &a.space) {
        (Some(f), _) => f.field.space().clone(),
        (None, Some(s)) => ctx.space(s)?,
        (None, None) => return Err(usage("rank needs --algebra, --field or --space")),
    };
    let exprs = a.exprs.iter().map(|e| ctx.target(&space, e).map(|(_, x)| x)).collect::<Result<Vec<_>>>()?;
    let fs: Vec<VectorField> = fields.iter().map(|f| f.field.clone()).collect();
    let (detail, got) = match (fs.is_empty(), exprs.is_empty()) {
        (false, false) => {
            let (o, f) = rank_balance(&fs, &exprs, a.order, seed)?;
            (
                format!("orbit rank {}, functional rank {}, {} coordinates", o.rank, f.rank, o.columns),
                o.rank,
            )
        }
        (false, true) => {
            let o = orbit_rank(&fs, a.order, seed)?;
            (format!("orbit rank {} on {} coordinates", o.rank, o.columns), o.rank)
        }
        (true, false) => {
            let f = functional_rank(&exprs, &space, a.order, seed)?;
            (format!("functional rank {} on {} coordinates", f.rank, f.columns), f.rank)
        }
        (true, true) => return Err(usage("rank needs fields or expressions")),
    };
    let obs = match a.expect {
        Some(n) => Observation::check(got == n, format!("{} (expected {})", detail, n)),
        None => Observation::holds(detail),
    };
    report.checks.push(record("rank", "rank", "ranks at two seeds", obs));
    Ok(())
}

fn cmd_transform(ctx: &Context, a: &TransformArgs, report: &mut Report) -> Result<()> {
    let seed = report.header.seed;
    let (tr, entry) = ctx.transformation(&a.transformation)?;
    let name = tr.name().to_string();
    report.checks.push(record(
        &format!("{}|identity_at_zero", name),
        "transform",
        "identity at parameter 0",
        Observation::holds("checked on construction"),
    ));
    if let Some(e) = entry {
        if !e.expected.is_empty() {
            let bad = tr.derivative_map_mismatches(&e.expected)?;
            let obs = Observation::check(
                bad.is_empty(),
                if bad.is_empty() {
                    format!("{} derivative maps agree", e.expected.len())
                } else {
                    format!("differ: {}", bad.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "))
                },
            );
            report.checks.push(record(&format!("{}|derivative_maps", name), "transform", "stated derivative maps", obs));
        }
    }
    let generator = match (&a.generator, entry.and_then(|e| e.generator.clone())) {
        (Some(g), _) => {
            let mut parts = g.splitn(3, ':');
            let (al, f) = (parts.next().unwrap_or(""), parts.next().ok_or_else(|| usage("--generator is algebra:field[:sign]"))?);
            let sign: i64 = match parts.next() {
                Some(s) => s.parse().map_err(|_| usage(format!("bad sign `{}`", s)))?,
                None => 1,
            };
            Some((al.to_string(), f.to_string(), sign))
        }
        (None, g) => g,
    };
    if let Some((al, f, s)) = generator {
        let want = ctx.field(&format!("{}:{}", al, f), None)?.field.scale(&Expr::int(s));
        let got = tr.infinitesimal()?;
        let obs = Observation::check(got.same_action(&want), format!("-d/dp at 0 is {}; {} times {}:{} is {}", got.operator(), s, al, f, want.operator()));
        report.checks.push(record(&format!("{}|generator", name), "transform", "infinitesimal generator", obs));
    }
    for (k, id) in a.identities.iter().enumerate() {
        let (l, r) = id.split_once('=').ok_or_else(|| usage(format!("identity `{}` has no `=`", id)))?;
        let lhs = ctx.target(tr.space(), l.trim())?.1;
        let rhs = ctx.read(tr.space(), r.trim())?;
        let v = tr.verify_identity(&lhs, &rhs, seed, id)?;
        report.checks.push(record(
            &format!("{}|identity_{}", name, k + 1),
            "transform",
            "pullback identity",
            Observation::from_verdict(&v, format!("({})' = {}", l.trim(), r.trim())),
        ));
    }
    Ok(())
}

fn prolong_text(ctx: &Context, field: &str, order: u32) -> Result<String> {
    let f = ctx.field(field, None)?.field;
    let pf = f.prolong(order)?;
    let mut out = format!("pr^({}) {} = {}\n", order, f.name(), f.operator());
    for s in f.space().coordinates_to(order) {
        let c = pf.coeff(s);
        if !c.is_zero() {
            out.push_str(&format!("  {}: {}\n", s, c));
        }
    }
    Ok(out)
}

fn bracket_text(ctx: &Context, a: &str, b: &str) -> Result<String> {
    let x = ctx.field(a, None)?.field;
    let y = ctx.field(b, None)?.field;
    let br = x.bracket(&y)?;
    Ok(format!("[{}, {}] = {}\n", a, b, if br.is_zero() { "0".to_string() } else { br.operator() }))
}

fn command_label(c: &Command) -> String {
    match c {
        Command::Table(_) => "table".into(),
        Command::Prolong { .. } => "prolong".into(),
        Command::Bracket { .. } => "bracket".into(),
        Command::Invariance(_) => "invariance".into(),
        Command::Rank(_) => "rank".into(),
        Command::Transform(_) => "transform".into(),
        Command::VerifyPaper { only: None } => "verify-paper".into(),
        Command::VerifyPaper { only: Some(o) } => format!("verify-paper --only {}", o),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Report> {
    let ctx = Context::load(cli.file.as_ref())?;
    let label = command_label(&cli.command);
    let mut report = Report::new(&label, cli.seed);
    match &cli.command {
        Command::Table(a) => cmd_table(&ctx, a, &mut report)?,
        Command::Invariance(a) => cmd_invariance(&ctx, a, &mut report)?,
        Command::Rank(a) => cmd_rank(&ctx, a, &mut report)?,
        Command::Transform(a) => cmd_transform(&ctx, a, &mut report)?,
        Command::VerifyPaper { only } => report = suite::run(ctx.cat, cli.seed, only.as_deref(), &label)?,
        Command::Prolong { field, order } => {
            let text = prolong_text(&ctx, field, *order)?;
            let _ = out.write_all(text.as_bytes());
            report.checks.push(record("prolong", "prolong", "prolongation", Observation::holds(text.trim_end().replace('\n', "; "))));
            return Ok(report);
        }
        Command::Bracket { a, b } => {
            let text = bracket_text(&ctx, a, b)?;
            let _ = out.write_all(text.as_bytes());
            report.checks.push(record("bracket", "bracket", "Lie bracket", Observation::holds(text.trim_end())));
            return Ok(report);
        }
    }
    let _ = report.write_human(out);
    Ok(report)
}

/// Parses `args`, runs the command and returns the exit status: 0 when every check has
/// its expected outcome, 1 when some check does not, 2 on any error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let report = match execute(&cli, out) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            return 2;
        }
    };
    if let Some(p) = &cli.report {
        if let Err(e) = std::fs::write(p, report.to_jsonl()) {
            let _ = writeln!(err, "error: cannot write {}: {}", p.display(), e);
            return 2;
        }
    }
    report.exit_code()
}
