use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use baxterise::baxterizer::{build_lie_tp_graph, classify_lie, classify_pairs, solve_graph, ClassifyRow};
use baxterise::catalog::{catalog_list, conventional_reference, LieTwistData};
use baxterise::category::CategoryData;
use baxterise::poly::Poly;
use baxterise::verifier::{self, DEFAULT_SEED};
use baxterise::{solve_central, AmplitudeSolution, Built, Error, Family, FamilySpec, SolveVerdict, VerificationReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "baxterise", version, about = "Spectral-parameter weights from braided category data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Built-in families.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Solve for the amplitudes A_χ(μ) of one (ρ, φ) pair.
    Baxterize(BaxterizeArgs),
    /// Verdict for every (ρ, φ) pair of a category.
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// su2, minimal, ty, so, sp or g2.
    #[arg(long)]
    family: String,
    #[arg(long)]
    level: Option<i64>,
    /// n of so(n).
    #[arg(long)]
    n: Option<i64>,
    /// m of sp(2m).
    #[arg(long)]
    m: Option<i64>,
    /// M of the Z_M Tambara-Yamagami category.
    #[arg(long = "M")]
    big_m: Option<i64>,
}

#[derive(Args, Debug)]
struct BaxterizeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    phi: Option<String>,
    /// Evaluate the amplitudes here (repeatable); complex values as "a+bi".
    #[arg(long, allow_hyphen_values = true)]
    mu: Vec<String>,
    /// Normalise evaluations against this channel instead of the reference.
    #[arg(long)]
    relative_to: Option<String>,
    /// Print amplitudes multiplied by their common denominator.
    #[arg(long)]
    cleared: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the category data as JSON.
    #[arg(long)]
    export_category: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Ybe,
    Current,
    Braid,
    Projectors,
    Transfer,
    Loop,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    phi: Option<String>,
    /// Number of strands (periodic sites for `transfer`).
    #[arg(long = "L")]
    len: Option<usize>,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Override every tolerance in the report.
    #[arg(long)]
    tol: Option<f64>,
    /// Torus size for `loop`.
    #[arg(long, default_value_t = 2)]
    lx: usize,
    #[arg(long, default_value_t = 2)]
    ly: usize,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

enum Fail {
    Usage(String),
    Verdict(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Usage(e.to_string())
    }
}

type Out = Result<String, Fail>;

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec, Fail> {
        let family = Family::parse(&self.family)?;
        let need =
            |v: Option<i64>, flag: &str| v.ok_or_else(|| Fail::Usage(format!("{} needs --{flag}", family.key())));
        let spec = match family {
            Family::Su2K => FamilySpec::su2(need(self.level, "level")?),
            Family::MinimalA => FamilySpec::minimal(need(self.level, "level")?),
            Family::TambaraYamagami => FamilySpec::ty(need(self.big_m, "M")?),
            Family::SoN => FamilySpec::so(need(self.n, "n")?, need(self.level, "level")?),
            Family::Sp2M => FamilySpec::sp(need(self.m, "m")?, need(self.level, "level")?),
            Family::G2 => FamilySpec::g2(need(self.level, "level")?),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn default_rho(spec: &FamilySpec) -> &'static str {
    match spec.family {
        Family::Su2K | Family::MinimalA => "1/2",
        Family::TambaraYamagami => "X",
        _ => "V",
    }
}

fn default_phi(spec: &FamilySpec) -> &'static str {
    match spec.family {
        Family::Su2K | Family::MinimalA | Family::TambaraYamagami => "1",
        _ => "A",
    }
}

fn parse_mu(s: &str) -> Result<Complex64, Fail> {
    s.trim().parse::<Complex64>().map_err(|_| Fail::Usage(format!("cannot parse mu = {s:?}")))
}

fn fmt_c(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn poly_string(p: &Poly) -> String {
    let terms: Vec<String> =
        p.0.iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(i, c)| match i {
                0 => format!("({})", fmt_c(*c)),
                1 => format!("({}) mu", fmt_c(*c)),
                _ => format!("({}) mu^{i}", fmt_c(*c)),
            })
            .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn c_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serialises")
}

fn run(cli: Cli) -> Out {
    match cli.command {
        Command::Catalog { action: CatalogAction::List { format } } => catalog(format),
        Command::Baxterize(args) => baxterize(args),
        Command::Classify { family, format } => classify(&family, format),
        Command::Verify(args) => verify(args),
    }
}

fn catalog(format: Format) -> Out {
    let rows = catalog_list();
    if format == Format::Json {
        return Ok(pretty(&serde_json::to_value(&rows).expect("catalog serialises")));
    }
    let mut out = String::new();
    for r in rows {
        writeln!(
            out,
            "{:<8} {:<22} {:<38} baxterisable={} representable={}",
            r.family, r.name, r.params, r.baxterisable, r.representable
        )
        .unwrap();
    }
    Ok(out)
}

enum Loaded {
    Full(Arc<CategoryData>),
    Lie(LieTwistData),
}

fn load(spec: &FamilySpec) -> Result<Loaded, Fail> {
    Ok(match spec.build()? {
        Built::Full(c) => Loaded::Full(Arc::new(c)),
        Built::TwistOnly(d) => Loaded::Lie(d),
    })
}

fn solve(loaded: &Loaded, rho: &str, phi: &str) -> Result<AmplitudeSolution, Fail> {
    match loaded {
        Loaded::Full(cat) => Ok(solve_central(cat, cat.label(rho)?, cat.label(phi)?)?),
        Loaded::Lie(data) => {
            if rho != data.rho {
                return Err(Fail::Usage(format!("{} only carries rho = {}", data.name, data.rho)));
            }
            Ok(solve_graph(&build_lie_tp_graph(data, phi)?, baxterise::SpanningTree::BreadthFirst))
        }
    }
}

fn baxterize(args: BaxterizeArgs) -> Out {
    let spec = args.family.spec()?;
    let loaded = load(&spec)?;
    if let Some(path) = &args.export_category {
        let text = match &loaded {
            Loaded::Full(cat) => cat.to_json(),
            Loaded::Lie(data) => serde_json::to_string_pretty(data).expect("twist data serialises"),
        };
        std::fs::write(path, text + "\n").map_err(|e| Fail::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let rho = args.rho.as_deref().unwrap_or(default_rho(&spec));
    let phi = args.phi.as_deref().unwrap_or(default_phi(&spec));
    let sol = solve(&loaded, rho, phi)?;
    let mus = args.mu.iter().map(|s| parse_mu(s)).collect::<Result<Vec<_>, _>>()?;
    let relative = args
        .relative_to
        .clone()
        .or_else(|| conventional_reference(&spec, rho, phi).map(str::to_string))
        .unwrap_or_else(|| sol.reference.clone());
    sol.channel_index(&relative)?;

    let mut evals = Vec::new();
    for &mu in &mus {
        let mut row = serde_json::Map::new();
        for ch in &sol.channels {
            row.insert(ch.label.clone(), c_json(sol.ratio_at(&ch.label, &relative, mu)?));
        }
        evals.push((mu, row));
    }
    let cleared = args.cleared.then(|| sol.cleared());

    if args.format == Format::Json {
        let mut v = serde_json::to_value(&sol).expect("solution serialises");
        let obj = v.as_object_mut().expect("solution is an object");
        obj.insert("relative_to".into(), json!(relative));
        if let Some(r) = conventional_reference(&spec, rho, phi) {
            obj.insert("conventional_reference".into(), json!(r));
        }
        if let Some(c) = &cleared {
            let m: serde_json::Map<String, Value> = sol
                .channels
                .iter()
                .zip(c)
                .map(|(ch, p)| (ch.label.clone(), serde_json::to_value(p).unwrap()))
                .collect();
            obj.insert("cleared".into(), Value::Object(m));
        }
        let ev: Vec<Value> = evals
            .iter()
            .map(|(mu, row)| json!({"mu": c_json(*mu), "amplitudes": Value::Object(row.clone())}))
            .collect();
        obj.insert("evaluations".into(), Value::Array(ev));
        return finish_solution(&sol, pretty(&v));
    }

    let mut out = String::new();
    writeln!(
        out,
        "{}  rho={}  phi={}  verdict={}  reference={}",
        sol.family,
        sol.rho,
        sol.phi,
        sol.verdict.tag(),
        sol.reference
    )
    .unwrap();
    if let Some(r) = conventional_reference(&spec, rho, phi) {
        writeln!(out, "conventional normalisation: relative to channel {r}").unwrap();
    }
    for e in &sol.edges {
        writeln!(out, "edge {} - {}", e[0], e[1]).unwrap();
    }
    for c in &sol.cycles {
        writeln!(
            out,
            "cycle {} closing {}-{} residual={} consistent={}",
            c.vertices.join("-"),
            c.closing_edge[0],
            c.closing_edge[1],
            c.residual,
            c.consistent
        )
        .unwrap();
    }
    for (i, ch) in sol.channels.iter().enumerate() {
        match &cleared {
            Some(c) => writeln!(out, "A_{} = {}", ch.label, poly_string(&c[i])).unwrap(),
            None => writeln!(out, "A_{} = [{}] / [{}]", ch.label, poly_string(&ch.num), poly_string(&ch.den)).unwrap(),
        }
    }
    for p in &sol.poles {
        writeln!(out, "pole mu = {}", fmt_c(*p)).unwrap();
    }
    for (mu, row) in &evals {
        for (label, val) in row {
            let z = Complex64::new(val[0].as_f64().unwrap(), val[1].as_f64().unwrap());
            writeln!(out, "mu={}  A_{label}/A_{relative} = {}", fmt_c(*mu), fmt_c(z)).unwrap();
        }
    }
    finish_solution(&sol, out)
}

fn finish_solution(sol: &AmplitudeSolution, text: String) -> Out {
    if sol.verdict == SolveVerdict::Inconsistent {
        Err(Fail::Verdict(text))
    } else {
        Ok(text)
    }
}

fn classify(args: &FamilyArgs, format: Format) -> Out {
    let spec = args.spec()?;
    let rows: Vec<ClassifyRow> = match load(&spec)? {
        Loaded::Full(cat) => classify_pairs(&cat)?,
        Loaded::Lie(data) => classify_lie(&data)?,
    };
    if format == Format::Json {
        return Ok(pretty(&json!({"family": spec.to_string(), "rows": rows})));
    }
    let mut out = String::new();
    writeln!(out, "{spec}").unwrap();
    for r in rows {
        write!(out, "({}, {}): {}  channels={} edges={} {}", r.rho, r.phi, r.verdict, r.channels, r.edges, r.shape)
            .unwrap();
        if let Some(c) = &r.failed_cycle {
            write!(out, "  failed cycle {}", c.join("-")).unwrap();
        }
        if let Some(res) = r.residual {
            write!(out, "  residual={res}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

fn loop_q(spec: &FamilySpec) -> Result<Complex64, Fail> {
    let q = Complex64::from_polar(1.0, std::f64::consts::PI / (spec.k + 2) as f64);
    match spec.family {
        Family::Su2K => Ok(q),
        Family::MinimalA => Ok(q.inv()),
        _ => Err(Fail::Usage("loop suite needs --family su2 or minimal".into())),
    }
}

fn verify(args: VerifyArgs) -> Out {
    let spec = args.family.spec()?;
    let mut report = VerificationReport::new();
    if args.suite == Suite::Loop {
        let q = loop_q(&spec)?;
        report.extend(verifier::loop_functional_check(q, args.samples, args.seed));
        let mu = match &args.mu {
            Some(s) => parse_mu(s)?,
            None => baxterise::sampling::MuSampler::new(args.seed).next_mu_avoiding(&[q * q]),
        };
        let (d, a1, c) = verifier::loop_weights(q, mu);
        let z1 = verifier::loop_partition_weights(d, a1, c, args.lx, args.ly)?;
        let z2 = verifier::loop_partition_transfer(d, a1, c, args.lx, args.ly)?;
        let res = (z1 - z2).norm() / z1.norm().max(z2.norm());
        report.push(
            baxterise::Check::new("loop_torus_routes", "completely-packed-loops", res, 1e-10)
                .param("q", q)
                .param("mu", mu)
                .param("Lx", args.lx)
                .param("Ly", args.ly)
                .detail(format!("Z = {}", fmt_c(z1))),
        );
    } else {
        let cat = match load(&spec)? {
            Loaded::Full(cat) => cat,
            Loaded::Lie(d) => {
                return Err(Fail::Usage(format!("{} carries no F-symbols; only baxterize and classify apply", d.name)))
            }
        };
        let rho_name = args.rho.as_deref().unwrap_or(default_rho(&spec));
        let phi_name = args.phi.as_deref().unwrap_or(default_phi(&spec));
        let rho = cat.label(rho_name)?;
        let sol = || -> Result<AmplitudeSolution, Fail> { Ok(solve_central(&cat, rho, cat.label(phi_name)?)?) };
        let len = args.len;
        match args.suite {
            Suite::Ybe => {
                report.extend(verifier::verify_ybe(&cat, rho, &sol()?, len.unwrap_or(3), args.samples, args.seed)?)
            }
            Suite::Current => {
                let phi = cat.label(phi_name)?;
                report.extend(verifier::verify_current_vertex(&cat, rho, phi, &sol()?, args.samples, args.seed)?)
            }
            Suite::Transfer => report.extend(verifier::verify_commuting_transfer(
                &cat,
                rho,
                &sol()?,
                len.unwrap_or(4),
                args.samples,
                args.seed,
            )?),
            Suite::Braid => {
                report.extend(verifier::verify_braid_limits(&cat, rho, &sol()?)?);
                report.extend(verifier::verify_braid_relations(&cat, rho, len.unwrap_or(4))?);
            }
            Suite::Projectors => report.extend(verifier::verify_projector_algebra(&cat, rho, len.unwrap_or(4))?),
            Suite::Loop => unreachable!(),
        }
    }
    if let Some(tol) = args.tol {
        report = retolerance(report, tol);
    }
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Table => {
            let mut out = String::new();
            for c in &report.checks {
                let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(
                    out,
                    "[{}] {} {} residual={:e} tol={:e} samples={}",
                    if c.passed() { "PASS" } else { "FAIL" },
                    c.check,
                    c.family,
                    c.max_residual,
                    c.tolerance,
                    c.samples
                )
                .unwrap();
                if let Some(seed) = c.seed {
                    write!(out, " seed={seed}").unwrap();
                }
                write!(out, " {}", params.join(" ")).unwrap();
                if let Some(d) = &c.detail {
                    write!(out, "  ({d})").unwrap();
                }
                out.push('\n');
            }
            out
        }
    };
    if report.all_pass() {
        Ok(text)
    } else {
        Err(Fail::Verdict(text))
    }
}

fn retolerance(report: VerificationReport, tol: f64) -> VerificationReport {
    let mut out = VerificationReport::new();
    for c in report.checks {
        let mut n = baxterise::Check::new(&c.check, &c.family, c.max_residual, tol).samples(c.samples);
        n.params = c.params;
        n.seed = c.seed;
        n.detail = c.detail;
        out.push(n);
    }
    out
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(Fail::Verdict(text)) => {
            emit(&text);
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: baxterise <catalog list | baxterize | classify | verify <suite>> --family <f> [params]; see --help");
            ExitCode::from(2)
        }
    }
}
