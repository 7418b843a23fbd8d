//! Command-line front end.
//!
//! Exit codes: 0 ok or satisfied, 1 a checked property failed, 2 unknown or
//! budget-truncated, 64 usage, 65 bad input, 70 internal, 74 I/O or cache.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::conjugacy::{conj_min, ClassCensus, ConjClass, Metric};
use crate::coxeter::Word;
use crate::davis::{cache_paths, cached_ball, Ball, Budget, CACHE_VERSION};
use crate::error::{Error, Result};
use crate::growth::{
    default_window, fit_exponent, nonprimitive_fraction, stable_window_start, GrowthLab, Subject, MAX_STABILIZER,
};
use crate::pieces::{decay_of, j_cubical, max_cone_piece, sample_pairs, AxisData, PairPiece, PieceConfig, HULL_THICKNESS};
use crate::presentation::{cprime_verdict, Presentation, Status, VerdictConfig};
use crate::qi::{
    claims_check, fenchel_defect, golden_defect, length_table, measured_lengths, sharpness, tiling_certificate,
    verify_two_sided, TwoSidedConfig,
};
use crate::quotient::{
    enumerate_classes, from_census, growth_constants, rows_to_csv, sample_runs, summarize, DensityParams,
};
use crate::render::render_svg;
use crate::tiling::lengths;
use crate::CODE_VERSION;

/// Cache directory used when neither `--cache-dir` nor the environment names one.
pub const DEFAULT_CACHE_DIR: &str = ".pentalab-cache";

#[derive(Parser, Debug)]
#[command(name = "pentalab", version, about = "Right-angled pentagon group: geometry, pieces and random quotients")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; outputs do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Directory for cached balls.
    #[arg(long, global = true, env = "PENTALAB_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Jsonl,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricArg {
    Cube,
    Hyp,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Cube => Metric::Cube,
            MetricArg::Hyp => Metric::Hyp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubjectArg {
    Group,
    Conjugacy,
    PrimitiveConjugacy,
    WallStabilizer,
}

impl From<SubjectArg> for Subject {
    fn from(s: SubjectArg) -> Subject {
        match s {
            SubjectArg::Group => Subject::Group,
            SubjectArg::Conjugacy => Subject::Conjugacy,
            SubjectArg::PrimitiveConjugacy => Subject::PrimitiveConjugacy,
            SubjectArg::WallStabilizer => Subject::WallStabilizer,
        }
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Pentagon lengths, closed form and measured.
    Lengths,
    /// Tiling certificate, two-sided comparison, sharpness and crossing-type claims.
    QiVerify(QiArgs),
    /// Growth tables and exponent fits.
    Growth(GrowthArgs),
    /// Largest cone pieces between sampled class pairs.
    Pieces(PiecesArgs),
    /// Random quotients and small-cancellation verdicts.
    Quotient(QuotientArgs),
    /// SVG of a ball of pentagons in the Poincaré disk.
    Render(RenderArgs),
    /// Build or inspect cached balls.
    Cache(CacheArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct QiArgs {
    #[arg(long, default_value_t = 6)]
    pub ball_radius: u32,
    /// Crossing samples per type for the claims check.
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
    /// Cube length bound of the sharpness census.
    #[arg(long, default_value_t = 12.0)]
    pub ell: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct GrowthArgs {
    #[arg(long, value_enum, default_value_t = MetricArg::Cube)]
    pub metric: MetricArg,
    /// Largest length; defaults to 12.
    #[arg(long, default_value_t = 12.0)]
    pub ell: f64,
    /// Only this subject; all four when absent.
    #[arg(long, value_enum)]
    pub subject: Option<SubjectArg>,
    /// The stabilizer grows linearly and is tabulated this far.
    #[arg(long, default_value_t = MAX_STABILIZER)]
    pub stabilizer_ell: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct PiecesArgs {
    /// Hyperbolic length bound of the census the pairs are drawn from.
    #[arg(long, default_value_t = 8.0)]
    pub ell: f64,
    /// Number of sampled pairs.
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
    /// Looseness; defaults to `2δ`.
    #[arg(long)]
    pub j: Option<f64>,
    /// A single pair of classes, as `g,h`.
    #[arg(long)]
    pub pair: Option<String>,
    /// Emit the survival curve as CSV.
    #[arg(long)]
    pub histogram: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct QuotientArgs {
    /// Length bounds, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub ell: Vec<f64>,
    /// Densities, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.015")]
    pub c: Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::Cube)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
    /// Judge this presentation instead of sampling, as comma-separated words.
    #[arg(long)]
    pub relators: Option<String>,
    /// Ordered relator pairs beyond this leave a verdict unknown.
    #[arg(long, default_value_t = 4096)]
    pub max_pairs: usize,
    /// Translate radius of the cubical corroboration; 0 skips it.
    #[arg(long, default_value_t = 2)]
    pub cubical_window: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct RenderArgs {
    #[arg(long, alias = "radius", default_value_t = 3)]
    pub ball_radius: u32,
    /// Draw the axis of this class with its crossing types.
    #[arg(long)]
    pub geodesic: Option<String>,
    #[arg(long, default_value_t = 800)]
    pub size: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct CacheArgs {
    #[arg(value_enum)]
    pub action: CacheAction,
    #[arg(long, default_value_t = 6)]
    pub ball_radius: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheAction {
    Build,
    Inspect,
}

/// Provenance embedded in every output.
#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub seed: u64,
    pub config: Value,
    pub code_version: &'static str,
    pub cache_version: u32,
}

struct Output {
    body: String,
    code: i32,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type Outcome = std::result::Result<Output, Failure>;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } | Error::Scope(_) => 2,
        Error::Input(_) | Error::Domain(_) | Error::Degenerate(_) | Error::Excluded(_) => 65,
        Error::Io(_) | Error::Cache(_) => 74,
        Error::Invariant(_) | Error::Json(_) => 70,
    }
}

/// Parse `argv`, run the command, and write its output. Returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match cli.workers {
        Some(0) => Err(Failure::Usage("--workers must be positive".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure::Run(Error::Invariant(e.to_string()))),
        },
        None => dispatch(&cli),
    };
    match outcome {
        Ok(out) => {
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &out.body),
                None => stdout.write_all(out.body.as_bytes()),
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    74
                }
            }
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "usage error: {m}");
            64
        }
        Err(Failure::Run(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn meta(cli: &Cli) -> Meta {
    let mut config = serde_json::to_value(&cli.command).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut config {
        m.insert("format".into(), serde_json::to_value(cli.format).unwrap_or(Value::Null));
    }
    Meta { seed: cli.seed, config, code_version: CODE_VERSION, cache_version: CACHE_VERSION }
}

fn format_of(cli: &Cli, default: Format, allowed: &[Format]) -> std::result::Result<Format, Failure> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Usage(format!("format {f:?} is not available for this command")))
    }
}

fn cache_dir(cli: &Cli) -> PathBuf {
    cli.cache_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

fn ball(cli: &Cli, radius: u32) -> Result<Ball> {
    match &cli.cache_dir {
        Some(dir) => Ok(cached_ball(dir, radius, &Budget::default())?.0),
        None => Ball::new(radius, &Budget::default()),
    }
}

fn to_json(meta: &Meta, result: impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "result": result }))?;
    s.push('\n');
    Ok(s)
}

fn to_jsonl<T: Serialize>(meta: &Meta, records: &[T]) -> Result<String> {
    let mut s = serde_json::to_string(&json!({ "meta": meta }))?;
    s.push('\n');
    for r in records {
        s.push_str(&serde_json::to_string(r)?);
        s.push('\n');
    }
    Ok(s)
}

fn csv_header(meta: &Meta) -> Result<String> {
    Ok(format!(
        "# seed={} code_version={} cache_version={} config={}\n",
        meta.seed,
        meta.code_version,
        meta.cache_version,
        serde_json::to_string(&meta.config)?
    ))
}

fn parse_class(s: &str) -> Result<ConjClass> {
    let w: Word = s.trim().parse()?;
    conj_min(&w)
}

fn dispatch(cli: &Cli) -> Outcome {
    let m = meta(cli);
    match &cli.command {
        Command::Lengths => lengths_cmd(cli, &m),
        Command::QiVerify(a) => qi_cmd(cli, &m, a),
        Command::Growth(a) => growth_cmd(cli, &m, a),
        Command::Pieces(a) => pieces_cmd(cli, &m, a),
        Command::Quotient(a) => quotient_cmd(cli, &m, a),
        Command::Render(a) => render_cmd(cli, &m, a),
        Command::Cache(a) => cache_cmd(cli, &m, a),
    }
}

fn lengths_cmd(cli: &Cli, m: &Meta) -> Outcome {
    let f = format_of(cli, Format::Json, &[Format::Json, Format::Csv])?;
    let table = length_table();
    let measured = measured_lengths();
    let (fd, gd) = (fenchel_defect(), golden_defect());
    let pairs = [
        ("a", table.a, measured.a),
        ("b", table.b, measured.b),
        ("c", table.c, measured.c),
        ("d", table.d, measured.d),
        ("e", table.e, measured.e),
        ("f", table.f, measured.f),
        ("2g", table.two_g, measured.two_g),
        ("lambda", table.lambda, measured.lambda),
    ];
    let agree = pairs.iter().all(|(_, x, y)| (x - y).abs() < 1e-9) && fd < 1e-9 && gd < 1e-12;
    let body = match f {
        Format::Csv => {
            let mut s = csv_header(m)?;
            s.push_str("name,closed_form,measured\n");
            for (n, x, y) in pairs {
                s.push_str(&format!("{n},{x},{y}\n"));
            }
            s
        }
        _ => to_json(
            m,
            json!({
                "table": table,
                "measured": measured,
                "fenchel_defect": fd,
                "golden_defect": gd,
                "agree": agree,
            }),
        )?,
    };
    Ok(Output { body, code: if agree { 0 } else { 1 } })
}

fn qi_cmd(cli: &Cli, m: &Meta, a: &QiArgs) -> Outcome {
    format_of(cli, Format::Json, &[Format::Json])?;
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be positive".into()));
    }
    let b = ball(cli, a.ball_radius)?;
    let cert = tiling_certificate(&b);
    let two = verify_two_sided(&b, &TwoSidedConfig::default());
    let census = ClassCensus::build(Metric::Cube, a.ell)?;
    let sharp = sharpness(&census)?;
    let claims = claims_check(a.trials, cli.seed)?;
    let l = lengths();
    let sharp_ok = sharp.inf_ratio >= l.c - 1e-9 && sharp.sup_ratio <= l.d + 1e-9;
    let ok = cert.holds(1e-9) && two.violations() == 0 && sharp_ok && claims.holds(1e-6);
    let body = to_json(
        m,
        json!({
            "tiling": cert,
            "two_sided": two,
            "sharpness": sharp,
            "sharpness_within_bounds": sharp_ok,
            "claims": claims,
            "holds": ok,
        }),
    )?;
    Ok(Output { body, code: if ok { 0 } else { 1 } })
}

fn growth_cmd(cli: &Cli, m: &Meta, a: &GrowthArgs) -> Outcome {
    let f = format_of(cli, Format::Json, &[Format::Json, Format::Csv])?;
    let metric: Metric = a.metric.into();
    let subjects: Vec<Subject> = match a.subject {
        Some(s) => vec![s.into()],
        None => vec![Subject::Group, Subject::Conjugacy, Subject::PrimitiveConjugacy, Subject::WallStabilizer],
    };
    let mut lab = GrowthLab::new();
    let mut tables = Vec::new();
    for s in subjects {
        let n = if s == Subject::WallStabilizer { a.stabilizer_ell } else { a.ell };
        tables.push(lab.growth(s, metric, n)?);
    }
    let body = match f {
        Format::Csv => {
            let mut s = csv_header(m)?;
            for (i, t) in tables.iter().enumerate() {
                let csv = t.to_csv();
                s.push_str(if i == 0 { &csv } else { csv.split_once('\n').map_or("", |x| x.1) });
            }
            s
        }
        _ => {
            let fits: Vec<Value> = tables
                .iter()
                .map(|t| {
                    let fit = fit_exponent(t, default_window(t)).ok();
                    json!({
                        "subject": t.subject,
                        "metric": t.metric,
                        "fit": fit,
                        "stable_window_start": stable_window_start(t),
                    })
                })
                .collect();
            let nonprimitive = if a.subject.is_none() || a.subject == Some(SubjectArg::Conjugacy) {
                let census = lab.census(metric, a.ell)?;
                let top = a.ell;
                let half = match metric {
                    Metric::Cube => (top / 2.0).floor(),
                    Metric::Hyp => top / 2.0,
                };
                Some(json!({
                    "half": [half, nonprimitive_fraction(census, half)?],
                    "top": [top, nonprimitive_fraction(census, top)?],
                }))
            } else {
                None
            };
            to_json(m, json!({ "tables": tables, "fits": fits, "nonprimitive_fraction": nonprimitive }))?
        }
    };
    Ok(Output { body, code: 0 })
}

/// `m` with the piece looseness and the empirical hull thickness added to its config.
fn with_piece_constants(m: &Meta, cfg: &PieceConfig) -> Meta {
    let mut m = m.clone();
    if let Value::Object(c) = &mut m.config {
        c.insert(
            "piece_constants".into(),
            json!({
                "j": cfg.j,
                "kappa": cfg.kappa,
                "hull_thickness": HULL_THICKNESS,
                "j_cubical": j_cubical(),
            }),
        );
    }
    m
}

fn pieces_cmd(cli: &Cli, m: &Meta, a: &PiecesArgs) -> Outcome {
    let default = if a.histogram { Format::Csv } else { Format::Jsonl };
    let f = format_of(cli, default, &[Format::Json, Format::Jsonl, Format::Csv])?;
    let mut cfg = PieceConfig::default();
    if let Some(j) = a.j {
        if !(j > 0.0) {
            return Err(Failure::Usage("--j must be positive".into()));
        }
        cfg.j = j;
    }
    let m = &with_piece_constants(m, &cfg);
    let reach = cfg.j + lengths().circumradius + 1e-9;
    let records: Vec<PairPiece> = match &a.pair {
        Some(p) => {
            let (x, y) = p.split_once(',').ok_or_else(|| Failure::Usage("--pair takes g,h".into()))?;
            let (g, h) = (parse_class(x)?, parse_class(y)?);
            let r = max_cone_piece(&AxisData::new(&g, reach)?, &AxisData::new(&h, reach)?, &cfg)?;
            vec![PairPiece { pair: (0, 1), classes: (g.rep, h.rep), report: r }]
        }
        None => {
            if a.trials == 0 {
                return Err(Failure::Usage("--trials must be positive".into()));
            }
            let census = ClassCensus::build(Metric::Hyp, a.ell)?;
            sample_pairs(&census, a.trials as usize, cli.seed, &cfg)?
        }
    };
    let body = match f {
        Format::Jsonl => to_jsonl(m, &records)?,
        Format::Json => {
            let d = decay_of(records.iter().map(PairPiece::diameter).collect())?;
            to_json(m, json!({ "pieces": records, "decay": d }))?
        }
        _ => {
            let d = decay_of(records.iter().map(PairPiece::diameter).collect())?;
            let mut s = csv_header(m)?;
            s.push_str("diameter,survival\n");
            for (x, p) in d.survival {
                s.push_str(&format!("{x},{p}\n"));
            }
            s
        }
    };
    Ok(Output { body, code: 0 })
}

fn verdict_config(a: &QuotientArgs) -> VerdictConfig {
    VerdictConfig {
        pieces: PieceConfig::default(),
        max_pairs: a.max_pairs,
        cubical_window: if a.cubical_window == 0 { None } else { Some(a.cubical_window) },
    }
}

fn quotient_cmd(cli: &Cli, m: &Meta, a: &QuotientArgs) -> Outcome {
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(Failure::Usage("--alpha must lie in (0, 1)".into()));
    }
    let cfg = verdict_config(a);
    let m = &with_piece_constants(m, &cfg.pieces);
    if let Some(rel) = &a.relators {
        format_of(cli, Format::Json, &[Format::Json])?;
        let classes: Vec<ConjClass> = rel.split(',').map(parse_class).collect::<Result<_>>()?;
        let v = cprime_verdict(&Presentation::new(classes, a.alpha)?, &cfg)?;
        let code = match v.status {
            Status::Satisfied => 0,
            Status::Violated => 1,
            Status::Unknown => 2,
        };
        return Ok(Output { body: to_json(m, &v)?, code });
    }
    if a.ell.is_empty() || a.c.is_empty() {
        return Err(Failure::Usage("--ell and --c need at least one value".into()));
    }
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be positive".into()));
    }
    let metric: Metric = a.metric.into();
    let top = a.ell.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let census = enumerate_classes(top, metric)?;
    let census = ClassCensus { metric, bound: top, classes: census.classes, elliptic: census.elliptic_excluded };
    let single = a.ell.len() == 1 && a.c.len() == 1;
    let f = format_of(cli, if single { Format::Jsonl } else { Format::Csv }, &[Format::Json, Format::Jsonl, Format::Csv])?;
    let (b_hat, a_hat) = growth_constants(metric)?;
    let mut runs = Vec::new();
    let mut rows = Vec::new();
    for (ci, &c) in a.c.iter().enumerate() {
        for (li, &ell) in a.ell.iter().enumerate() {
            let index = from_census(&census, ell);
            let params = DensityParams::new(ell, c, metric, b_hat, a_hat)?;
            let cell = (ci * a.ell.len() + li) as u64;
            let r = sample_runs(&index, &params, a.alpha, a.trials, cli.seed, cell, &cfg)?;
            rows.push(summarize(ell, c, params.k, a.alpha, &r));
            runs.extend(r);
        }
    }
    let unknown = rows.iter().any(|r| r.unknown > 0);
    let body = match f {
        Format::Jsonl => to_jsonl(m, &runs)?,
        Format::Json => to_json(m, json!({ "rows": rows, "runs": runs }))?,
        _ => {
            let mut s = csv_header(m)?;
            s.push_str(&rows_to_csv(&rows));
            s
        }
    };
    Ok(Output { body, code: if unknown { 2 } else { 0 } })
}

fn render_cmd(cli: &Cli, m: &Meta, a: &RenderArgs) -> Outcome {
    format_of(cli, Format::Svg, &[Format::Svg])?;
    if a.size == 0 {
        return Err(Failure::Usage("--size must be positive".into()));
    }
    let b = ball(cli, a.ball_radius)?;
    let g = match &a.geodesic {
        Some(w) => Some(crate::pieces::AxisLine::of(&parse_class(w)?.rep)?.geodesic),
        None => None,
    };
    let mut text = serde_json::to_string(m).map_err(Error::from)?;
    text.push_str(" projection: (x, y, z) -> (x, y) / (1 + z)");
    Ok(Output { body: render_svg(&b, g.as_ref(), &text, a.size), code: 0 })
}

fn cache_cmd(cli: &Cli, m: &Meta, a: &CacheArgs) -> Outcome {
    format_of(cli, Format::Json, &[Format::Json])?;
    let dir = cache_dir(cli);
    let (bin, csv) = cache_paths(&dir, a.ball_radius);
    let describe = |b: &Ball, hit: bool, path: &Path| {
        json!({
            "path": path.display().to_string(),
            "summary": csv.display().to_string(),
            "radius": b.radius,
            "chambers": b.len(),
            "walls": b.wall_count(),
            "was_cached": hit,
        })
    };
    match a.action {
        CacheAction::Build => {
            let (b, hit) = cached_ball(&dir, a.ball_radius, &Budget::default())?;
            Ok(Output { body: to_json(m, describe(&b, hit, &bin))?, code: 0 })
        }
        CacheAction::Inspect => {
            if !bin.exists() {
                let body = to_json(m, json!({ "path": bin.display().to_string(), "present": false }))?;
                return Ok(Output { body, code: 2 });
            }
            let b = Ball::from_bytes(&std::fs::read(&bin).map_err(Error::from)?)?;
            Ok(Output { body: to_json(m, describe(&b, true, &bin))?, code: 0 })
        }
    }
}
