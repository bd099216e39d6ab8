//! Command-line front end. `main.rs` only forwards to [`run`].

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::channel::{check_less_noisy, enhance, is_physically_degraded, ChannelSpec, Dmbc, Verdict};
use crate::error::{Error, Result};
use crate::fm::{derive_thm1_constraints, Thm1Values};
use crate::region::{
    eval_bsbc_example, eval_enh, eval_nofb, example1_aux, find_dominating_enh, gain_curve, half_grid, includes,
    search_corollary1, search_thm1, search_thm2, theorem3_construct, InputPmf, RateRegion, SearchConfig,
};
use crate::sim::{estimate_error, rates_from_aux, write_series_csv, SchemeParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bcfb", version, about = "Rate regions of broadcast channels with rate-limited feedback")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Compute region frontiers and write one CSV per region.
    Region(RegionArgs),
    /// No-feedback and closed-form feedback frontiers for a family of BS-BCs.
    Figure2(Figure2Args),
    /// Degradedness, less-noisy ordering and the strict-improvement construction.
    Check(CheckArgs),
    /// Monte Carlo error rates of the block-Markov scheme over a sweep of n.
    Simulate(SimulateArgs),
    /// Print the scheme constraints before and after eliminating the bin rate.
    FmDemo(FmDemoArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// `bsbc:p1,p2`, `bebc:d1,d2`, or a path to a JSON channel file.
    #[arg(long)]
    pub channel: String,
    #[arg(long, default_value_t = 0.85)]
    pub rfb: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma list of nofb, enh, thm1, cor1, thm2, bsbc-example.
    #[arg(long, default_value = "nofb,thm1")]
    pub regions: String,
    /// Simplex grid resolution.
    #[arg(long, default_value_t = 10)]
    pub grid: usize,
    /// Random structures per search.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Steps per parameter in the closed-form (alpha, beta) grid.
    #[arg(long, default_value_t = 100)]
    pub ab_steps: usize,
    /// Tolerance of the pairwise inclusion report.
    #[arg(long, default_value_t = 2e-3)]
    pub tol: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Figure2Args {
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.25,0.3")]
    pub p1: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub p2: f64,
    #[arg(long, default_value_t = 0.85)]
    pub rfb: f64,
    #[arg(long, default_value_t = 10)]
    pub grid: usize,
    #[arg(long, default_value_t = 100)]
    pub ab_steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub channel: String,
    #[arg(long, default_value_t = 0.01)]
    pub rfb: f64,
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Superposition parameter of the base point in the construction demo.
    #[arg(long, default_value_t = 0.15)]
    pub alpha: f64,
    /// Optional JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.8)]
    pub margin: f64,
    #[arg(long, value_delimiter = ',', default_value = "200,400,800")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Message-carrying blocks per transmission.
    #[arg(long, default_value_t = 2)]
    pub blocks: usize,
    /// Typicality tolerance.
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    /// Superposition parameter: `X = U xor Bern(alpha)`.
    #[arg(long, default_value_t = 0.15)]
    pub alpha: f64,
    /// Compression noise: `Yt = U xor Y1 xor Bern(beta)`; omit for a constant `Yt`.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FmDemoArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.15)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.3)]
    pub beta: f64,
}

/// Parses arguments, runs the command and maps errors to exit codes.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    configure_threads();
    match dispatch(cli.cmd) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) | Error::MemoryCap(_) | Error::Precondition(_) => EXIT_INFEASIBLE,
        _ => EXIT_CONFIG,
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("BCFB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // fails only if a pool already exists, which then stays in use
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Region(a) => cmd_region(&a),
        Cmd::Figure2(a) => cmd_figure2(&a),
        Cmd::Check(a) => cmd_check(&a),
        Cmd::Simulate(a) => cmd_simulate(&a),
        Cmd::FmDemo(a) => cmd_fm_demo(&a),
    }
}

/// Reads a channel from the shorthand or from a JSON file.
pub fn load_channel(arg: &str) -> Result<(ChannelSpec, Dmbc)> {
    let spec = if Path::new(arg).is_file() {
        ChannelSpec::from_json(&fs::read_to_string(arg)?)?
    } else {
        ChannelSpec::parse_shorthand(arg)?
    };
    let ch = spec.build()?;
    Ok((spec, ch))
}

fn check_rfb(rfb: f64) -> Result<()> {
    if !(rfb >= 0.0) || !rfb.is_finite() {
        return Err(Error::Config(format!("feedback rate {rfb} must be finite and nonnegative")));
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_region(path: &Path, region: &RateRegion) -> Result<()> {
    let mut buf = Vec::new();
    region.write_csv(&mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

const REGION_KINDS: [&str; 6] = ["nofb", "enh", "thm1", "cor1", "thm2", "bsbc-example"];

pub fn cmd_region(a: &RegionArgs) -> Result<()> {
    check_rfb(a.common.rfb)?;
    let (spec, ch) = load_channel(&a.common.channel)?;
    let kinds: Vec<&str> = a.regions.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if kinds.is_empty() {
        return Err(Error::Config("no regions requested".into()));
    }
    if let Some(bad) = kinds.iter().find(|k| !REGION_KINDS.contains(k)) {
        return Err(Error::Config(format!("unknown region `{bad}`")));
    }
    let cfg = SearchConfig { resolution: a.grid, samples: a.samples, seed: a.common.seed, ..Default::default() };
    cfg.validate()?;
    fs::create_dir_all(&a.out)?;
    let rfb = a.common.rfb;
    let mut computed: Vec<(String, RateRegion)> = Vec::new();
    for kind in &kinds {
        let region = match *kind {
            "nofb" => eval_nofb(&ch, &cfg)?,
            "enh" => eval_enh(&ch, &cfg)?,
            "thm1" => search_thm1(&ch, rfb, &cfg)?,
            "cor1" => search_corollary1(&ch, rfb, &cfg)?,
            "thm2" => search_thm2(&ch, rfb, &cfg)?,
            _ => {
                let ChannelSpec::Bsbc { p1, p2 } = spec else {
                    return Err(Error::Config("bsbc-example needs a bsbc channel".into()));
                };
                let g = half_grid(a.ab_steps);
                eval_bsbc_example(p1, p2, rfb, &g, &g)?
            }
        };
        write_region(&a.out.join(format!("{kind}.csv")), &region)?;
        println!("{kind}: {} points, {} frontier vertices", region.len(), region.envelope()?.len());
        computed.push((kind.to_string(), region));
    }
    let mut inclusions = Vec::new();
    for (na, ra) in &computed {
        for (nb, rb) in &computed {
            if na != nb {
                inclusions.push(json!({ "outer": na, "inner": nb, "includes": includes(ra, rb, a.tol)? }));
            }
        }
    }
    let counts: serde_json::Map<String, serde_json::Value> =
        computed.iter().map(|(k, r)| (k.clone(), json!(r.len()))).collect();
    let meta = json!({
        "command": "region",
        "channel": spec,
        "rfb": rfb,
        "grid": cfg,
        "alpha_beta_steps": a.ab_steps,
        "seed": a.common.seed,
        "point_counts": counts,
        "tolerance": a.tol,
        "inclusions": inclusions,
    });
    write_json(&a.out.join("region_meta.json"), &meta)
}

pub fn cmd_figure2(a: &Figure2Args) -> Result<()> {
    check_rfb(a.rfb)?;
    if a.p1.is_empty() {
        return Err(Error::Config("no p1 values".into()));
    }
    for &p1 in &a.p1 {
        if !(0.0 < a.p2 && a.p2 < p1 && p1 < 0.5) {
            return Err(Error::Config(format!("need 0 < p2 < p1 < 1/2, got p1 = {p1}, p2 = {}", a.p2)));
        }
    }
    fs::create_dir_all(&a.out)?;
    let cfg = SearchConfig { resolution: a.grid, seed: a.seed, ..Default::default() };
    let mut curves = Vec::new();
    for &p1 in &a.p1 {
        let c = gain_curve(p1, a.p2, a.rfb, a.ab_steps, &cfg)?;
        write_region(&a.out.join(format!("fig2_nofb_p1_{p1}.csv")), &c.nofb)?;
        write_region(&a.out.join(format!("fig2_fb_p1_{p1}.csv")), &c.fb)?;
        println!("p1 = {p1}: largest feedback gain {:.5} bits at R1 = {:.4}", c.gain, c.gain_at);
        curves.push(json!({
            "p1": p1,
            "gain": c.gain,
            "gain_at_r1": c.gain_at,
            "nofb_max_r1": c.nofb.max_r1(),
            "nofb_max_r2": c.nofb.max_r2(),
        }));
    }
    let meta = json!({
        "command": "figure2",
        "p2": a.p2,
        "rfb": a.rfb,
        "grid": cfg,
        "alpha_beta_steps": a.ab_steps,
        "curves": curves,
    });
    write_json(&a.out.join("figure2_meta.json"), &meta)
}

pub fn cmd_check(a: &CheckArgs) -> Result<()> {
    check_rfb(a.rfb)?;
    let (spec, ch) = load_channel(&a.channel)?;
    let degraded = is_physically_degraded(&ch);
    let enh_degraded = is_physically_degraded(&enhance(&ch));
    let ln = check_less_noisy(&ch, a.grid, a.samples, a.seed)?;
    println!("physically degraded (X - Y2 - Y1): {degraded}");
    println!("enhanced channel physically degraded: {enh_degraded}");
    println!("less-noisy (Y2 over Y1): {:?}, strict: {}", ln.verdict, ln.strict);
    if let (Verdict::Violated, Some(w)) = (ln.verdict, &ln.witness) {
        println!(
            "  witness: I(U;Y1) = {:.6} > I(U;Y2) = {:.6} with P_UX = {:?}",
            w.i_u_y1, w.i_u_y2, w.p_ux
        );
    }
    let mut demo = serde_json::Value::Null;
    if ln.verdict == Verdict::Holds && ln.strict && ch.x_size() == 2 && a.rfb > 0.0 {
        demo = match improvement_demo(&ch, a.alpha, a.rfb) {
            Ok(r) => {
                println!(
                    "strict improvement at rfb = {}: base ({:.6}, {:.6}) -> ({:.6}, {:.6}), gamma = {:.6}, feasible = {}",
                    a.rfb, r.base.r1, r.base.r2, r.improved.r1, r.improved.r2, r.gamma, r.feasible
                );
                serde_json::to_value(r)?
            }
            Err(e) => {
                println!("strict improvement demo not applicable: {e}");
                json!({ "error": e.to_string() })
            }
        };
    }
    if let Some(path) = &a.out {
        let report = json!({
            "command": "check",
            "channel": spec,
            "physically_degraded": degraded,
            "enhanced_physically_degraded": enh_degraded,
            "less_noisy": ln,
            "improvement": demo,
            "seed": a.seed,
        });
        write_json(path, &report)?;
    }
    Ok(())
}

fn improvement_demo(ch: &Dmbc, alpha: f64, rfb: f64) -> Result<crate::region::Theorem3Result> {
    let base = InputPmf::superposition(alpha)?;
    let family: Vec<InputPmf> =
        (0..=1000).map(|k| InputPmf::superposition(0.5 * k as f64 / 1000.0)).collect::<Result<_>>()?;
    let enh = find_dominating_enh(ch, &base, &family)?;
    theorem3_construct(ch, &base, &enh, rfb)
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    check_rfb(a.common.rfb)?;
    let (spec, ch) = load_channel(&a.common.channel)?;
    if a.n.is_empty() || a.trials == 0 {
        return Err(Error::Config("need at least one block length and one trial".into()));
    }
    let aux = match a.beta {
        Some(b) => example1_aux(&ch, a.alpha, b)?,
        None => InputPmf::superposition(a.alpha)?.to_aux(&ch)?,
    };
    let rates = rates_from_aux(&ch, &aux, a.common.rfb, a.margin)?;
    println!(
        "rates: R1 = {:.5}, R2 = {:.5}, bin rate = {:.5}, compression rate = {:.5}",
        rates.r1, rates.r2, rates.r_tilde, rates.r_hat
    );
    let params: Vec<SchemeParams> = a
        .n
        .iter()
        .map(|&n| SchemeParams::new(rates, n, a.blocks, a.epsilon, a.common.seed, a.common.rfb))
        .collect::<Result<_>>()?;
    // refuse before any work if one block length does not fit
    for p in &params {
        p.check_memory()?;
    }
    fs::create_dir_all(&a.out)?;
    let mut series = Vec::new();
    for p in &params {
        let e = estimate_error(&ch, &aux, p, a.trials)?;
        println!(
            "n = {}: p_err = {:.4} ({} / {}), 95% upper {:.4}",
            e.n, e.p_err, e.errors, e.trials, e.ci_high
        );
        series.push(e);
    }
    let mut csv = Vec::new();
    write_series_csv(&series, &mut csv)?;
    fs::write(a.out.join("simulate.csv"), csv)?;
    let report = json!({
        "command": "simulate",
        "channel": spec,
        "rfb": a.common.rfb,
        "margin": a.margin,
        "alpha": a.alpha,
        "beta": a.beta,
        "blocks": a.blocks,
        "epsilon": a.epsilon,
        "seed": a.common.seed,
        "rates": rates,
        "series": series,
    });
    write_json(&a.out.join("simulate.json"), &report)
}

pub fn cmd_fm_demo(a: &FmDemoArgs) -> Result<()> {
    check_rfb(a.common.rfb)?;
    let (_, ch) = load_channel(&a.common.channel)?;
    let m = example1_aux(&ch, a.alpha, a.beta)?.measures(&ch)?;
    let v = Thm1Values {
        i_u_y1: m.i_u_y1,
        i_u_y2: m.i_u_y2,
        i_x_yty2_given_u: m.i_x_yty2_given_u,
        i_yt_y1_given_uy2: m.i_yt_y1_given_uy2,
    };
    let d = derive_thm1_constraints(&v, a.common.rfb)?;
    println!("scheme constraints:\n{}", d.full);
    println!("after eliminating Rt:\n{}", d.projected);
    println!("without redundant rows:\n{}", d.reduced);
    println!("feasible: {}", d.feasible);
    Ok(())
}
