use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use vilenkin::hardy::{counterexample, CounterexampleKind, CounterexampleParams};
use vilenkin::kernels::{lebesgue_bounds_with, lebesgue_constant, min_resolution, summation_kernel, VariationForm};
use vilenkin::report::{format_g17, records_to_json, CSV_HEADER};
use vilenkin::spectral::{transform_forward, transform_inverse, transform_naive};
use vilenkin::verify::{divergence_probe, run_suites, strong_sum, tmean_block_probe, Suite, SuiteConfig, TermNorm};
use vilenkin::{Error, GridFunction, GroupSpec, MeanKind, WeightSequence};

#[derive(Parser, Debug)]
#[command(name = "vilenkin", version, about = "Fourier analysis on bounded Vilenkin groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Radices, powers and digit statistics.
    Group(GroupArgs),
    /// Samples a summation kernel on the finest grid.
    Kernel(KernelArgs),
    /// Lebesgue constants next to their digit-variation bounds.
    Lebesgue(LebesgueArgs),
    /// Applies a summability mean to a grid function.
    Mean(MeanArgs),
    /// Fourier coefficients of a grid function, or its synthesis.
    Transform(TransformArgs),
    /// Runs verification suites; exits non-zero if any check fails.
    Verify(VerifyArgs),
    /// Builds a counterexample martingale and probes its means.
    Counterexample(CounterexampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Radix pattern, repeated cyclically up to `--levels`.
    #[arg(long, default_value = "2", value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long, default_value_t = 12)]
    levels: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Tolerance for the checks a subcommand performs.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for random test functions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn group(&self) -> Result<GroupSpec> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParams("tolerance must be positive".into()).into());
        }
        Ok(GroupSpec::new(&self.m, self.levels)?)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[command(flatten)]
    common: Common,
    /// Digit statistics of these naturals instead of the level table.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[command(flatten)]
    common: Common,
    /// dirichlet, fejer, cesaro:A, u:A, v:A, riesz-log, norlund-log, norlund:Q or t:Q,
    /// with Q one of ones, harmonic, log, power:A.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: usize,
    /// Grid resolution; the smallest admissible one when absent.
    #[arg(long)]
    res: Option<usize>,
}

#[derive(Args, Debug)]
struct LebesgueArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 64)]
    max_n: usize,
    #[arg(long, value_parser = parse_variation, default_value = "literal")]
    variation: VariationForm,
}

#[derive(Args, Debug)]
struct MeanArgs {
    #[command(flatten)]
    common: Common,
    /// Same syntax as `kernel --kind`.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: usize,
    /// Grid function JSON; a seeded random function when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Resolution of the random function.
    #[arg(long, default_value_t = 6)]
    res: usize,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    res: usize,
    /// Reads the input values as coefficients and synthesizes the function.
    #[arg(long)]
    inverse: bool,
    /// Direct character sums instead of the staged transform.
    #[arg(long)]
    naive: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Suite names; all suites when absent.
    #[arg(long, value_parser = parse_suite)]
    suite: Vec<Suite>,
    #[arg(long, default_value_t = 64)]
    max_n: usize,
    /// Random functions per sampled claim.
    #[arg(long, default_value_t = 20)]
    samples: usize,
}

#[derive(Args, Debug)]
struct CounterexampleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = parse_counterexample_kind)]
    kind: CounterexampleKind,
    /// Block indices, strictly increasing.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    alpha: Vec<usize>,
    /// Rank of the finest level.
    #[arg(long, default_value_t = 8)]
    res: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Where to write the martingale JSON.
    #[arg(long)]
    martingale: Option<PathBuf>,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variation(s: &str) -> std::result::Result<VariationForm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_counterexample_kind(s: &str) -> std::result::Result<CounterexampleKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_weights(spec: &str, len: usize) -> Result<WeightSequence> {
    Ok(match spec.split_once(':') {
        Some(("power", a)) => WeightSequence::power(a.parse().context("power exponent")?, len)?,
        None if spec == "ones" => WeightSequence::ones(len),
        None if spec == "harmonic" => WeightSequence::harmonic(len),
        None if spec == "log" => WeightSequence::log(len),
        _ => bail!(Error::InvalidParams(format!("unknown weight sequence `{spec}`"))),
    })
}

fn parse_mean(spec: &str, n: usize) -> Result<MeanKind> {
    let len = n + 2;
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let alpha = || -> Result<f64> {
        arg.ok_or_else(|| anyhow!(Error::InvalidParams(format!("`{head}` needs a parameter"))))?
            .parse()
            .context("mean parameter")
    };
    let weights = || parse_weights(arg.unwrap_or("ones"), len);
    Ok(match head {
        "dirichlet" | "partial" => MeanKind::Partial,
        "fejer" => MeanKind::Fejer,
        "cesaro" => MeanKind::Cesaro { alpha: alpha()? },
        "u" => MeanKind::U { alpha: alpha()? },
        "v" => MeanKind::V { alpha: alpha()? },
        "riesz-log" => MeanKind::RieszLog,
        "norlund-log" => MeanKind::NorlundLog,
        "norlund" => MeanKind::Norlund(weights()?),
        "t" => MeanKind::T(weights()?),
        _ => bail!(Error::InvalidParams(format!("unknown kind `{spec}`"))),
    })
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn json_text<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn grid_rows(values: &[vilenkin::Complex64]) -> Vec<Vec<String>> {
    values
        .iter()
        .enumerate()
        .map(|(x, v)| vec![x.to_string(), format_g17(v.re), format_g17(v.im)])
        .collect()
}

fn load_grid(path: &PathBuf) -> Result<GridFunction> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(GridFunction::from_json(&text)?)
}

fn cmd_group(a: &GroupArgs) -> Result<()> {
    let c = &a.common;
    let g = c.group()?;
    if a.n.is_empty() {
        #[derive(Serialize)]
        struct Level {
            k: usize,
            m_k: usize,
            big_m_k: usize,
        }
        let rows: Vec<Level> = (0..=g.levels())
            .map(|k| Level {
                k,
                m_k: if k < g.levels() { g.radix(k) } else { 0 },
                big_m_k: g.power(k),
            })
            .collect();
        let text = match c.format {
            Format::Json => json_text(&rows)?,
            Format::Csv => csv_text(
                &["k", "m_k", "M_k"],
                rows.iter().map(|r| vec![r.k.to_string(), r.m_k.to_string(), r.big_m_k.to_string()]),
            )?,
        };
        return c.emit(&text);
    }
    #[derive(Serialize)]
    struct Stats {
        n: usize,
        digits: Vec<usize>,
        hi: usize,
        lo: usize,
        rho: usize,
        v: usize,
        vstar: usize,
    }
    let rows = a
        .n
        .iter()
        .map(|&n| {
            let d = g.digits_of(n)?;
            Ok(Stats {
                n,
                digits: d.digits.clone(),
                hi: d.hi,
                lo: d.lo,
                rho: d.rho,
                v: d.variation_v(),
                vstar: d.variation_vstar(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match c.format {
        Format::Json => json_text(&rows)?,
        Format::Csv => csv_text(
            &["n", "digits", "hi", "lo", "rho", "v", "vstar"],
            rows.iter().map(|r| {
                let digits: Vec<String> = r.digits.iter().map(|d| d.to_string()).collect();
                vec![
                    r.n.to_string(),
                    digits.join(" "),
                    r.hi.to_string(),
                    r.lo.to_string(),
                    r.rho.to_string(),
                    r.v.to_string(),
                    r.vstar.to_string(),
                ]
            }),
        )?,
    };
    c.emit(&text)
}

fn cmd_kernel(a: &KernelArgs) -> Result<()> {
    let c = &a.common;
    let g = c.group()?;
    let kind = parse_mean(&a.kind, a.n)?;
    let res = match a.res {
        Some(r) => r,
        None => min_resolution(&g, a.n.max(1))?,
    };
    let k = summation_kernel(&kind, a.n, &g, res)?;
    let text = match c.format {
        Format::Json => k.to_json() + "\n",
        Format::Csv => csv_text(&["x", "re", "im"], grid_rows(&k.values))?,
    };
    c.emit(&text)
}

fn cmd_lebesgue(a: &LebesgueArgs) -> Result<()> {
    let c = &a.common;
    let g = c.group()?;
    if a.max_n == 0 {
        bail!(Error::InvalidParams("max-n must be at least 1".into()));
    }
    #[derive(Serialize)]
    struct Row {
        n: usize,
        #[serde(rename = "L_n")]
        l: f64,
        v: usize,
        vstar: usize,
        lower: f64,
        upper: f64,
        pass: bool,
    }
    let rows = (1..=a.max_n)
        .map(|n| {
            let l = lebesgue_constant(&g, n)?;
            let b = lebesgue_bounds_with(&g, &g.digits_of(n)?, a.variation);
            Ok(Row {
                n,
                l,
                v: b.v,
                vstar: b.vstar,
                lower: b.lower,
                upper: b.upper,
                pass: l >= b.lower - c.tol && l <= b.upper + c.tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match c.format {
        Format::Json => json_text(&rows)?,
        Format::Csv => csv_text(
            &["n", "L_n", "v", "vstar", "lower", "upper", "pass"],
            rows.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    format_g17(r.l),
                    r.v.to_string(),
                    r.vstar.to_string(),
                    format_g17(r.lower),
                    format_g17(r.upper),
                    if r.pass { "pass" } else { "fail" }.to_string(),
                ]
            }),
        )?,
    };
    c.emit(&text)
}

fn input_function(c: &Common, g: &GroupSpec, input: &Option<PathBuf>, res: usize) -> Result<GridFunction> {
    match input {
        Some(path) => load_grid(path),
        None => Ok(GridFunction::random(g, res, c.seed)?),
    }
}

fn cmd_mean(a: &MeanArgs) -> Result<()> {
    let c = &a.common;
    let g = c.group()?;
    let f = input_function(c, &g, &a.input, a.res)?;
    let out = parse_mean(&a.kind, a.n)?.apply(&f, a.n)?;
    let text = match c.format {
        Format::Json => out.to_json() + "\n",
        Format::Csv => csv_text(&["x", "re", "im"], grid_rows(&out.values))?,
    };
    c.emit(&text)
}

fn cmd_transform(a: &TransformArgs) -> Result<()> {
    let c = &a.common;
    let g = c.group()?;
    let f = input_function(c, &g, &a.input, a.res)?;
    let values = if a.inverse {
        let spec = transform_forward(&f);
        let spec = vilenkin::Spectrum {
            coeffs: f.values.clone(),
            ..spec
        };
        transform_inverse(&spec).values
    } else {
        let s = if a.naive { transform_naive(&f) } else { transform_forward(&f) };
        let back = transform_inverse(&s);
        let err = back.max_diff(&f)?;
        if err > c.tol {
            bail!("round trip error {err:e} exceeds tolerance {:e}", c.tol);
        }
        s.coeffs
    };
    let text = match c.format {
        Format::Json => {
            let out = GridFunction::new(&f.group, f.resolution, values)?;
            out.to_json() + "\n"
        }
        Format::Csv => csv_text(&[if a.inverse { "x" } else { "k" }, "re", "im"], grid_rows(&values))?,
    };
    c.emit(&text)
}

/// `Ok(true)` when every check passed.
fn cmd_verify(a: &VerifyArgs) -> Result<bool> {
    let c = &a.common;
    let g = c.group()?;
    let suites = if a.suite.is_empty() { Suite::ALL.to_vec() } else { a.suite.clone() };
    let mut cfg = SuiteConfig::new(g, a.max_n);
    cfg.tol = c.tol;
    cfg.seed = c.seed;
    cfg.samples = a.samples;
    let records = run_suites(&suites, &cfg)?;
    let text = match c.format {
        Format::Json => records_to_json(&records) + "\n",
        Format::Csv => csv_text(&CSV_HEADER, records.iter().map(|r| r.csv_row()))?,
    };
    c.emit(&text)?;
    let failed = records.iter().filter(|r| r.failed()).count();
    if failed > 0 {
        eprintln!("{failed} of {} records failed", records.len());
    }
    Ok(failed == 0)
}

fn cmd_counterexample(a: &CounterexampleArgs) -> Result<()> {
    let c = &a.common;
    let g = c.group()?;
    let params = CounterexampleParams {
        kind: a.kind,
        alpha: a.alpha.clone(),
        resolution: a.res,
        p: a.p,
    };
    let ce = counterexample(&g, &params)?;
    if let Some(path) = &a.martingale {
        fs::write(path, ce.martingale.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    #[derive(Serialize)]
    struct Row {
        index: usize,
        measured: f64,
        bound: Option<f64>,
    }
    let f = ce.martingale.finest();
    let phi = |n: usize| vilenkin::hardy::default_phi(n);
    let rows: Vec<Row> = match a.kind {
        CounterexampleKind::StrongPartialSums | CounterexampleKind::StrongFejer => {
            let (kind, p) = if a.kind == CounterexampleKind::StrongPartialSums {
                (MeanKind::Partial, 1.0)
            } else {
                (MeanKind::Fejer, 0.5)
            };
            let checkpoints: Vec<usize> = a.alpha.iter().map(|&k| (2 * g.power(k)).min(f.len())).collect();
            let top = *checkpoints.last().expect("alpha is non-empty");
            let sums = strong_sum(f, &kind, p, TermNorm::Lp, &|_| 1.0, top)?;
            checkpoints
                .iter()
                .map(|&n| Row {
                    index: n,
                    measured: sums[n - 1].cumulative / (n as f64 * phi(n)),
                    bound: None,
                })
                .collect()
        }
        CounterexampleKind::HpBlocks => tmean_block_probe(&g, &a.alpha, a.res, a.p)?
            .into_iter()
            .map(|r| Row {
                index: r.index,
                measured: r.measured,
                bound: r.lower_bound,
            })
            .collect(),
        CounterexampleKind::FejerSubsequence => divergence_probe(&ce.martingale, &MeanKind::Fejer, a.p, &a.alpha, &|_| 1.0)?
            .into_iter()
            .map(|r| Row {
                index: r.index,
                measured: r.measured,
                bound: None,
            })
            .collect(),
    };
    if ce.spectrum_defect > c.tol {
        bail!("spectrum defect {:e} exceeds tolerance {:e}", ce.spectrum_defect, c.tol);
    }
    let text = match c.format {
        Format::Json => json_text(&rows)?,
        Format::Csv => csv_text(
            &["index", "measured", "bound"],
            rows.iter().map(|r| {
                vec![
                    r.index.to_string(),
                    format_g17(r.measured),
                    r.bound.map(format_g17).unwrap_or_default(),
                ]
            }),
        )?,
    };
    c.emit(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Group(a) => cmd_group(a).map(|_| true),
        Command::Kernel(a) => cmd_kernel(a).map(|_| true),
        Command::Lebesgue(a) => cmd_lebesgue(a).map(|_| true),
        Command::Mean(a) => cmd_mean(a).map(|_| true),
        Command::Transform(a) => cmd_transform(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Counterexample(a) => cmd_counterexample(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = matches!(e.downcast_ref::<Error>(), Some(Error::InvalidParams(_)));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
