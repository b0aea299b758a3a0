//! Command-line front end: argument model, command execution and rendering.
//!
//! Exit codes: 0 success, 1 internal or configuration error, 2 hypothesis
//! violation, 3 certificate negative (resample `f`).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{PolyFile, Prime, DEFAULT_PRIME};
use crate::error::{Error, Result};
use crate::milnor::{
    hodge_numbers, milnor_hilbert_series, milnor_hilbert_series_coeff, pushforward_pg,
    CoverDatum, HodgeSource, MilnorData,
};
use crate::picard::{picard_rank_one_witness, require_m_at_least_three};
use crate::seshadri::{seshadri_interval, Claim, SeshadriReport};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "CYCLIC_PLANES_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;

pub const HYPOTHESIS_UNMET: &str = "hypothesis m≥3 unmet";

#[derive(Debug, Parser)]
#[command(name = "cyclic-planes", version, about = "Invariants and certificates for simple cyclic covers of the plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hodge numbers from graded pieces of the Milnor algebra.
    Hodge(CommonArgs),
    /// Picard-rank-one certificates for a sampled branch curve.
    PicardCheck(PicardArgs),
    /// Certified Seshadri interval with its derivation trace.
    Seshadri(CommonArgs),
    /// Seshadri intervals over a (d, m) grid.
    Table(CommonArgs),
    /// Coefficients of the Milnor Hilbert series.
    Hilbert(HilbertArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Cover degree: `N` or an inclusive range `A..B`.
    #[arg(long)]
    pub d: DimRange,
    /// Weight of w: `N` or an inclusive range `A..B`.
    #[arg(long)]
    pub m: DimRange,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Branch polynomial: `fermat`, `random`, or a path to a polynomial file.
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PicardArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Repeat the certificates with a second prime.
    #[arg(long)]
    pub check_prime: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct HilbertArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Last degree to print (default: the largest Hodge-relevant degree).
    #[arg(long)]
    pub order: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// Inclusive, nonempty integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRange {
    pub lo: u32,
    pub hi: u32,
}

impl DimRange {
    pub fn single(&self) -> Option<u32> {
        (self.lo == self.hi).then_some(self.lo)
    }

    pub fn values(&self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

impl FromStr for DimRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("malformed range {s:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(DimRange { lo, hi })
    }
}

/// Everything that determines an output artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub d: DimRange,
    pub m: DimRange,
    pub seed: u64,
    pub prime: u64,
    pub format: Format,
    pub f: Option<String>,
    pub order: Option<u64>,
    pub check_prime: Option<u64>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> RunConfig {
        let (name, common, order, check_prime) = match &cli.command {
            Command::Hodge(c) => ("hodge", c, None, None),
            Command::PicardCheck(p) => ("picard-check", &p.common, None, p.check_prime),
            Command::Seshadri(c) => ("seshadri", c, None, None),
            Command::Table(c) => ("table", c, None, None),
            Command::Hilbert(h) => ("hilbert", &h.common, h.order, None),
        };
        RunConfig {
            command: name.to_string(),
            d: common.d,
            m: common.m,
            seed: common.seed,
            prime: common.prime,
            format: common.format,
            f: common.f.clone(),
            order,
            check_prime,
            output: common.output.clone(),
        }
    }

    fn config_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

/// Rendered text plus process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Hypothesis(_) => EXIT_HYPOTHESIS,
        _ => EXIT_ERROR,
    }
}

/// Thread pool sized by [`THREADS_ENV`], defaulting to available parallelism.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Invalid(format!("{THREADS_ENV} must be a positive integer")))?,
        Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let prime = Prime::new(cfg.prime)?;
    match cfg.command.as_str() {
        "hodge" => cmd_hodge(cfg, prime),
        "picard-check" => cmd_picard_check(cfg, prime),
        "seshadri" => cmd_seshadri(cfg),
        "table" => cmd_table(cfg),
        "hilbert" => cmd_hilbert(cfg),
        other => Err(Error::Invalid(format!("unknown command {other}"))),
    }
}

fn single_cover(cfg: &RunConfig) -> Result<CoverDatum> {
    match (cfg.d.single(), cfg.m.single()) {
        (Some(d), Some(m)) => CoverDatum::new(d, m),
        _ => Err(Error::Invalid(format!(
            "{} takes single values for --d and --m",
            cfg.command
        ))),
    }
}

/// Resolve `--f` into a polynomial; `None` means the general-`f` closed form.
fn resolve_f(cfg: &RunConfig, cover: CoverDatum) -> Result<Option<(MilnorData, String)>> {
    match cfg.f.as_deref() {
        None => Ok(None),
        Some("fermat") => Ok(Some((MilnorData::fermat(cover), "fermat".into()))),
        Some("random") => Ok(Some((MilnorData::random(cover, cfg.seed), "random".into()))),
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let file: PolyFile = serde_json::from_str(&text)?;
            let (ws, f) = file.to_poly()?;
            if ws != cover.weights() {
                return Err(Error::Invalid(format!(
                    "polynomial file uses m = {}, expected {}",
                    ws.m(),
                    cover.m()
                )));
            }
            Ok(Some((MilnorData::new(cover, f)?, path.to_string())))
        }
    }
}

fn render_json(mut v: Value, cfg: &RunConfig) -> String {
    if let Value::Object(map) = &mut v {
        map.insert("config".into(), cfg.config_json());
    }
    let mut s = serde_json::to_string_pretty(&v).expect("json renders");
    s.push('\n');
    s
}

/// Flat rows shared by the CSV and Markdown renderings.
struct Grid {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Grid {
    fn render(&self, cfg: &RunConfig) -> String {
        let config = serde_json::to_string(&cfg.config_json()).expect("json renders");
        let mut out = String::new();
        match cfg.format {
            Format::Csv => {
                let _ = writeln!(out, "# config: {config}");
                let _ = writeln!(out, "{}", self.headers.join(","));
                for r in &self.rows {
                    let _ = writeln!(out, "{}", r.join(","));
                }
            }
            Format::Md | Format::Json => {
                let _ = writeln!(out, "<!-- config: {config} -->\n");
                let _ = writeln!(out, "| {} |", self.headers.join(" | "));
                let _ = writeln!(out, "|{}", "---|".repeat(self.headers.len()));
                for r in &self.rows {
                    let _ = writeln!(out, "| {} |", r.join(" | "));
                }
            }
        }
        out
    }
}

fn cmd_hodge(cfg: &RunConfig, prime: Prime) -> Result<Outcome> {
    let cover = single_cover(cfg)?;
    let f = resolve_f(cfg, cover)?;
    let (source, label) = match f {
        Some((md, label)) => (HodgeSource::Polynomial(md), label),
        None => (HodgeSource::Series(cover), "series".to_string()),
    };
    let hn = hodge_numbers(&source, prime)?;
    let t = hn.triple;
    let series = [cover.h20_degree(), cover.h11_degree(), cover.theta_degree()]
        .map(|k| milnor_hilbert_series_coeff(k, cover));
    let pg = pushforward_pg(cover);
    let consistent = [t.h20, t.h11_prim, t.h1_theta0] == series && t.h20 == pg;
    let exit_code = if consistent { EXIT_OK } else { EXIT_NEGATIVE };

    let text = match cfg.format {
        Format::Json => render_json(
            json!({
                "d": cover.d(),
                "m": cover.m(),
                "h20": t.h20,
                "h11_prim": t.h11_prim,
                "h11_full": t.h11_full(),
                "h1_theta0": t.h1_theta0,
                "source": label,
                "seed": cfg.seed,
                "prime": cfg.prime,
                "oracles": {
                    "series": {"h20": series[0], "h11_prim": series[1], "h1_theta0": series[2]},
                    "pushforward_pg": pg,
                },
                "consistent": consistent,
                "negative_degree": hn.negative_degree,
            }),
            cfg,
        ),
        _ => Grid {
            headers: vec![
                "d", "m", "h20", "h11_prim", "h11_full", "h1_theta0", "source", "series_h20",
                "series_h11_prim", "series_h1_theta0", "pushforward_pg", "consistent",
            ],
            rows: vec![vec![
                cover.d().to_string(),
                cover.m().to_string(),
                t.h20.to_string(),
                t.h11_prim.to_string(),
                t.h11_full().to_string(),
                t.h1_theta0.to_string(),
                label,
                series[0].to_string(),
                series[1].to_string(),
                series[2].to_string(),
                pg.to_string(),
                consistent.to_string(),
            ]],
        }
        .render(cfg),
    };
    Ok(Outcome { text, exit_code })
}

fn cmd_picard_check(cfg: &RunConfig, prime: Prime) -> Result<Outcome> {
    let cover = single_cover(cfg)?;
    require_m_at_least_three(cover)?;
    let f = match cfg.f.as_deref() {
        None | Some("random") => None,
        Some(_) => resolve_f(cfg, cover)?,
    };
    let report = picard_rank_one_witness(cover, cfg.seed, prime, f.clone())?;
    let cross = match cfg.check_prime {
        Some(q) => Some(picard_rank_one_witness(cover, cfg.seed, Prime::new(q)?, f)?),
        None => None,
    };
    let positive = report.positive && cross.as_ref().is_none_or(|c| c.positive);
    let exit_code = if positive { EXIT_OK } else { EXIT_NEGATIVE };

    let text = match cfg.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            if let (Some(c), Value::Object(map)) = (&cross, &mut v) {
                map.insert(
                    "cross_check".into(),
                    json!({
                        "prime": c.prime,
                        "t_level": c.t_level,
                        "r_level": c.r_level,
                        "positive": c.positive,
                    }),
                );
            }
            render_json(v, cfg)
        }
        _ => {
            let mut rows = vec![picard_row(&report)];
            if let Some(c) = &cross {
                rows.push(picard_row(c));
            }
            Grid {
                headers: vec![
                    "d", "m", "seed", "prime", "smoothness", "summand", "t_source", "t_target",
                    "t_rank", "t_verdict", "r_source", "r_target", "r_rank", "r_verdict",
                    "positive",
                ],
                rows,
            }
            .render(cfg)
        }
    };
    Ok(Outcome { text, exit_code })
}

fn picard_row(r: &crate::picard::PicardReport) -> Vec<String> {
    let verdict = |v| serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from));
    vec![
        r.d.to_string(),
        r.m.to_string(),
        r.seed.map_or_else(|| "-".to_string(), |s| s.to_string()),
        r.prime.to_string(),
        verdict(r.smoothness).unwrap_or_default(),
        r.summand.to_string(),
        r.t_level.source_dim.to_string(),
        r.t_level.target_dim.to_string(),
        r.t_level.achieved_rank.to_string(),
        verdict_str(r.t_level.verdict),
        r.r_level.source_dim.to_string(),
        r.r_level.target_dim.to_string(),
        r.r_level.achieved_rank.to_string(),
        verdict_str(r.r_level.verdict),
        r.positive.to_string(),
    ]
}

fn verdict_str(v: crate::picard::Verdict) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

const SESHADRI_HEADERS: [&str; 12] = [
    "d", "m", "status", "lower_a", "lower_b", "upper_a", "upper_b", "rad", "clamped",
    "eliminated_k", "lower_float", "upper_float",
];

fn seshadri_row(d: u32, m: u32, cell: &std::result::Result<SeshadriReport, String>) -> Vec<String> {
    match cell {
        Ok(r) => {
            let eliminated = r
                .trace
                .iter()
                .find_map(|t| match &t.claim {
                    Claim::Conclusion { eliminated, .. } => Some(
                        eliminated
                            .iter()
                            .map(|k| k.to_string())
                            .collect::<Vec<_>>()
                            .join(";"),
                    ),
                    _ => None,
                })
                .unwrap_or_default();
            vec![
                d.to_string(),
                m.to_string(),
                "ok".into(),
                r.lower.a().to_string(),
                r.lower.b().to_string(),
                r.upper.a().to_string(),
                r.upper.b().to_string(),
                r.lower.radicand().to_string(),
                r.clamped.to_string(),
                eliminated,
                format!("{}", r.lower_float),
                format!("{}", r.upper_float),
            ]
        }
        Err(status) => {
            let mut row = vec![d.to_string(), m.to_string(), status.clone()];
            row.extend(std::iter::repeat_n(String::new(), SESHADRI_HEADERS.len() - 3));
            row
        }
    }
}

fn cmd_seshadri(cfg: &RunConfig) -> Result<Outcome> {
    let cover = single_cover(cfg)?;
    let report = seshadri_interval(cover)?;
    let text = match cfg.format {
        Format::Json => render_json(serde_json::to_value(&report)?, cfg),
        _ => Grid {
            headers: SESHADRI_HEADERS.to_vec(),
            rows: vec![seshadri_row(cover.d(), cover.m(), &Ok(report))],
        }
        .render(cfg),
    };
    Ok(Outcome {
        text,
        exit_code: EXIT_OK,
    })
}

fn cmd_table(cfg: &RunConfig) -> Result<Outcome> {
    let cells: Vec<(u32, u32)> = cfg
        .d
        .values()
        .flat_map(|d| cfg.m.values().map(move |m| (d, m)))
        .collect();
    let pool = thread_pool()?;
    let reports: Vec<std::result::Result<SeshadriReport, String>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(d, m)| {
                let cover = CoverDatum::new(d, m).map_err(|e| e.to_string())?;
                if m < 3 {
                    return Err(HYPOTHESIS_UNMET.to_string());
                }
                seshadri_interval(cover).map_err(|e| e.to_string())
            })
            .collect()
    });
    let text = match cfg.format {
        Format::Json => {
            let rows: Vec<Value> = cells
                .iter()
                .zip(&reports)
                .map(|(&(d, m), r)| match r {
                    Ok(r) => json!({
                        "d": d, "m": m, "status": "ok",
                        "lower": r.lower, "upper": r.upper, "clamped": r.clamped,
                        "eliminated_k": seshadri_row(d, m, &Ok(r.clone()))[9],
                        "lower_float": r.lower_float, "upper_float": r.upper_float,
                    }),
                    Err(status) => json!({"d": d, "m": m, "status": status}),
                })
                .collect();
            render_json(json!({ "rows": rows }), cfg)
        }
        _ => Grid {
            headers: SESHADRI_HEADERS.to_vec(),
            rows: cells
                .iter()
                .zip(&reports)
                .map(|(&(d, m), r)| seshadri_row(d, m, r))
                .collect(),
        }
        .render(cfg),
    };
    Ok(Outcome {
        text,
        exit_code: EXIT_OK,
    })
}

fn cmd_hilbert(cfg: &RunConfig) -> Result<Outcome> {
    let cover = single_cover(cfg)?;
    let marks = [
        ("h20", cover.h20_degree()),
        ("h11_prim", cover.h11_degree()),
        ("h1_theta0", cover.theta_degree()),
    ];
    let order = match cfg.order {
        Some(0) => return Err(Error::Invalid("--order must be positive".into())),
        Some(o) => o as usize,
        None => marks.iter().map(|(_, k)| *k).max().unwrap_or(0).max(0) as usize,
    };
    let coeffs = milnor_hilbert_series(cover, order);
    let mark_of = |k: usize| -> String {
        marks
            .iter()
            .filter(|(_, deg)| *deg == k as i64)
            .map(|(name, _)| *name)
            .collect::<Vec<_>>()
            .join(";")
    };
    let text = match cfg.format {
        Format::Json => render_json(
            json!({
                "d": cover.d(),
                "m": cover.m(),
                "order": order,
                "coefficients": coeffs,
                "marked": {
                    "h20": marks[0].1,
                    "h11_prim": marks[1].1,
                    "h1_theta0": marks[2].1,
                },
            }),
            cfg,
        ),
        _ => Grid {
            headers: vec!["k", "coefficient", "mark"],
            rows: coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| vec![k.to_string(), c.to_string(), mark_of(k)])
                .collect(),
        }
        .render(cfg),
    };
    Ok(Outcome {
        text,
        exit_code: EXIT_OK,
    })
}

/// Parse arguments, run, and write the artifact. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let cfg = RunConfig::from_cli(&cli);
    match execute(&cfg) {
        Ok(outcome) => {
            let written = match &cfg.output {
                Some(path) => std::fs::write(path, &outcome.text),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return EXIT_ERROR;
            }
            if outcome.exit_code == EXIT_NEGATIVE {
                eprintln!("certificate negative for this sample; try another --seed");
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        let mut full = vec!["cyclic-planes"];
        full.extend_from_slice(args);
        RunConfig::from_cli(&Cli::try_parse_from(full).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!("3".parse::<DimRange>().unwrap(), DimRange { lo: 3, hi: 3 });
        assert_eq!("2..4".parse::<DimRange>().unwrap(), DimRange { lo: 2, hi: 4 });
        assert_eq!("2..=4".parse::<DimRange>().unwrap(), DimRange { lo: 2, hi: 4 });
        assert!("4..2".parse::<DimRange>().is_err());
        assert!("a..2".parse::<DimRange>().is_err());
    }

    #[test]
    fn hodge_fermat_k3() {
        let out = execute(&cfg(&["hodge", "--d", "2", "--m", "3", "--f", "fermat"])).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!((v["h20"].as_u64(), v["h11_prim"].as_u64(), v["h1_theta0"].as_u64()), (Some(1), Some(19), Some(19)));
        assert_eq!(v["consistent"], Value::Bool(true));
        assert_eq!(v["config"]["seed"], json!(1));
    }

    #[test]
    fn hodge_permits_m_two() {
        let out = execute(&cfg(&["hodge", "--d", "2", "--m", "2"])).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["h20"], json!(0));
        assert_eq!(v["negative_degree"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn picard_refuses_m_two() {
        let err = execute(&cfg(&["picard-check", "--d", "2", "--m", "2"])).unwrap_err();
        assert_eq!(exit_code_for(&err), EXIT_HYPOTHESIS);
    }

    #[test]
    fn table_marks_bad_cells() {
        let out = execute(&cfg(&["table", "--d", "2", "--m", "2..3", "--format", "csv"])).unwrap();
        let lines: Vec<&str> = out.text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[2].contains(HYPOTHESIS_UNMET));
        assert!(lines[3].starts_with("2,3,ok,-2/3,1,0,1,2,false,1;2,"));
    }

    #[test]
    fn hilbert_prefix() {
        let out = execute(&cfg(&["hilbert", "--d", "2", "--m", "4", "--order", "9"])).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["coefficients"].as_array().unwrap().last(), Some(&json!(37)));
        assert!(execute(&cfg(&["hilbert", "--d", "2", "--m", "4", "--order", "0"])).is_err());
    }

    #[test]
    fn single_value_commands_reject_ranges() {
        assert!(execute(&cfg(&["seshadri", "--d", "2..3", "--m", "3"])).is_err());
    }

    #[test]
    fn bad_prime_is_rejected() {
        let err = execute(&cfg(&["hodge", "--d", "2", "--m", "3", "--prime", "91"])).unwrap_err();
        assert_eq!(exit_code_for(&err), EXIT_ERROR);
    }
}
