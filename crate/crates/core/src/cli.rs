//! Command-line front end. Every subcommand renders its result to a string in
//! the requested format; with a cache directory the rendered payload is stored
//! under the hash of the command's canonical parameters.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::analysis::{
    classify_point, component_dimension, connect_in, d_curve, eta_minus, increasing_family, parse_grid,
    theta_generate, Classification, ConnectVerdict, DimMethod, EtaMinus, Family, GapSchedule, Resolution, Sublevel,
    ThetaDemo, Tier,
};
use crate::cache::{Cache, CACHE_DIR_ENV};
use crate::cf::{Symbol, Word};
use crate::config::{OutputFormat, RunConfig};
use crate::dimension::{
    automaton_pressure_dim, boxdim_estimate, dim_finite_type, sumset_boxdim, Alphabet, CoverTarget, Diagnostics,
    DimensionEstimate, DEFAULT_COUNT_BUDGET,
};
use crate::interval::{parse_rational, rat_to_decimal, RatInterval};
use crate::quadratic::Quadratic;
use crate::sft::{full_shift_over, PruneMode, SubshiftAutomaton, DEFAULT_STATE_BUDGET};
use crate::spectrum::{markov_triples, write_triples_csv};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "lagrange-spectra", version, about = "Lagrange and Markov spectra over bounded continued fractions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

fn rational_arg(s: &str) -> std::result::Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Alphabet bound: partial quotients range over 1..=N.
    #[arg(long = "N", global = true, default_value_t = 2)]
    pub n: Symbol,
    /// Half-width of the symbolic window; states have 2·window+1 symbols.
    #[arg(long, global = true, default_value_t = 3)]
    pub window: usize,
    /// Deepest covering scale for box counting.
    #[arg(long = "rmax", global = true, default_value_t = 25)]
    pub r_max: u32,
    /// Tolerance of the pressure bisection.
    #[arg(long, global = true, default_value = "1e-9", value_parser = rational_arg)]
    pub tol: BigRational,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long = "cache-dir", global = true, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub output: OutputFormat,
    /// Maximum number of automaton states.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_BUDGET)]
    pub budget: u128,
    /// Write the result here instead of standard output.
    #[arg(long = "out", short = 'o', global = true)]
    pub out: Option<PathBuf>,
}

impl GlobalArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            n: self.n,
            window: self.window,
            r_max: self.r_max,
            tol: self.tol.clone(),
            threads: self.threads,
            cache_dir: self.cache_dir.clone(),
            output: self.output,
            budget: self.budget,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Pressure,
    #[value(name = "boxcount")]
    BoxCount,
    Both,
}

impl MethodChoice {
    fn methods(self) -> Vec<DimMethod> {
        match self {
            MethodChoice::Pressure => vec![DimMethod::Pressure],
            MethodChoice::BoxCount => vec![DimMethod::BoxCount],
            MethodChoice::Both => vec![DimMethod::Pressure, DimMethod::BoxCount],
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of a Gauss–Cantor set, or of a pruned sublevel automaton with --t.
    Dim {
        #[arg(long)]
        alphabet: Option<Alphabet>,
        #[arg(long, value_enum, default_value = "pressure")]
        method: MethodChoice,
        #[arg(long, value_parser = rational_arg)]
        t: Option<BigRational>,
        #[arg(long, default_value = "outer")]
        mode: PruneMode,
        #[arg(long = "count-budget", default_value_t = DEFAULT_COUNT_BUDGET)]
        count_budget: u64,
    },
    /// Sublevel automaton and its decomposition.
    Prune {
        #[arg(long, value_parser = rational_arg)]
        t: BigRational,
        #[arg(long, default_value = "outer")]
        mode: PruneMode,
    },
    /// Two-sided bracket of D(t) over a grid `a:b:step`.
    Dcurve {
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value = "pressure")]
        method: DimMethod,
    },
    /// Bracket for the smallest t with D(t) = eta.
    EtaMinus {
        #[arg(long)]
        eta: f64,
        #[arg(long = "tol-t", default_value = "1/64", value_parser = rational_arg)]
        tol_t: BigRational,
        #[arg(long, value_enum, default_value = "pressure")]
        method: DimMethod,
    },
    /// Whether subhorseshoes at t connect before t + eps.
    Connect {
        #[arg(long, value_parser = rational_arg)]
        t: BigRational,
        #[arg(long, default_value = "0", value_parser = rational_arg)]
        eps: BigRational,
        /// Period of a cycle in the first component, e.g. `1` or `1,2`.
        #[arg(long)]
        comp1: Option<String>,
        #[arg(long)]
        comp2: Option<String>,
    },
    /// Increasing family of subhorseshoes below the eta⁻ bracket.
    Family {
        #[arg(long)]
        eta: f64,
        #[arg(long, value_parser = rational_arg)]
        eps: BigRational,
        #[arg(long, default_value_t = 2)]
        stages: usize,
    },
    /// Concatenated word through an increasing family and its Lagrange estimate.
    ThetaDemo {
        #[arg(long)]
        eta: f64,
        #[arg(long, value_parser = rational_arg)]
        eps: BigRational,
        #[arg(long, default_value_t = 2)]
        stages: usize,
        /// Number of spike blocks in the emitted word.
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long = "gap-base", default_value_t = 1)]
        gap_base: usize,
        #[arg(long = "gap-ratio", default_value_t = 2)]
        gap_ratio: usize,
    },
    /// Markov triples in increasing order of z with their spectrum values.
    MarkovTriples {
        #[arg(long, default_value_t = 9)]
        count: usize,
    },
    /// Box dimension of the sumset K(B1) + K(B2).
    Sumset {
        #[arg(long, default_value = "1,2")]
        alphabet: Alphabet,
        #[arg(long)]
        alphabet2: Option<Alphabet>,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long = "count-budget", default_value_t = DEFAULT_COUNT_BUDGET)]
        count_budget: u64,
    },
    /// J-like / F-like / Jtilde-like screen of a point t.
    Classify {
        #[arg(long, value_parser = rational_arg)]
        t: BigRational,
        #[arg(long, value_delimiter = ',', default_value = "1/4,1/8,1/16", value_parser = rational_arg)]
        eps: Vec<BigRational>,
        #[arg(long, value_enum, default_value = "pressure")]
        method: DimMethod,
    },
}

/// Parses `argv`, runs the subcommand and returns the process exit status:
/// 0 on success, 1 on usage errors, 2 when a state or count budget is exceeded.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource() {
                2
            } else {
                1
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let cfg = cli.global.config();
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let (op, params) = cache_params(&cfg, &cli.command);
    let compute = || pool.install(|| render(&cfg, &cli.command));
    let payload = match &cfg.cache_dir {
        Some(dir) => Cache::new(dir).get_or_compute(op, &params, compute)?.0,
        None => compute()?,
    };
    match &cli.global.out {
        Some(path) => std::fs::write(path, payload.as_bytes())?,
        None => std::io::stdout().lock().write_all(payload.as_bytes())?,
    }
    Ok(())
}

fn rat(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Decimal with 17 significant digits.
pub fn real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn word_str(symbols: &[Symbol]) -> String {
    symbols.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

fn words_json(words: &[Word]) -> Value {
    words.iter().map(|w| word_str(w.symbols())).collect()
}

fn interval_json(r: &RatInterval) -> Value {
    json!({
        "lo": rat(&r.lo),
        "hi": rat(&r.hi),
        "lo_decimal": rat_to_decimal(&r.lo, 17),
        "hi_decimal": rat_to_decimal(&r.hi, 17),
    })
}

fn estimate_json(e: &DimensionEstimate) -> Value {
    let diagnostics = match &e.diagnostics {
        Diagnostics::None => json!({"kind": "none"}),
        Diagnostics::Counts { counts, slopes } => json!({
            "kind": "counts",
            "counts": counts,
            "slopes": slopes.iter().map(|&s| real(s)).collect::<Vec<_>>(),
        }),
        Diagnostics::Bisection { lower, upper } => {
            let trace = |steps: &[crate::dimension::BisectionStep]| -> Vec<Value> {
                steps
                    .iter()
                    .map(|s| json!([real(s.s), real(s.radius_lo), real(s.radius_hi)]))
                    .collect()
            };
            json!({"kind": "bisection", "lower": trace(lower), "upper": trace(upper)})
        }
    };
    json!({
        "lo": real(e.lo),
        "hi": real(e.hi),
        "method": e.method.to_string(),
        "diagnostics": diagnostics,
    })
}

fn method_name(m: DimMethod) -> &'static str {
    match m {
        DimMethod::Pressure => "pressure",
        DimMethod::BoxCount => "boxcount",
    }
}

fn mode_name(m: PruneMode) -> &'static str {
    match m {
        PruneMode::Outer => "outer",
        PruneMode::Inner => "inner",
    }
}

fn cache_params(cfg: &RunConfig, cmd: &Command) -> (&'static str, Value) {
    let mut base = json!({
        "N": cfg.n,
        "window": cfg.window,
        "r_max": cfg.r_max,
        "tol": rat(&cfg.tol),
        "budget": cfg.budget.to_string(),
        "output": match cfg.output { OutputFormat::Json => "json", OutputFormat::Csv => "csv" },
    });
    let (op, extra) = match cmd {
        Command::Dim { alphabet, method, t, mode, count_budget } => (
            "dim",
            json!({
                "alphabet": alphabet.as_ref().map(|a| a.to_string()),
                "method": format!("{method:?}"),
                "t": t.as_ref().map(rat),
                "mode": mode_name(*mode),
                "count_budget": count_budget,
            }),
        ),
        Command::Prune { t, mode } => ("prune", json!({"t": rat(t), "mode": mode_name(*mode)})),
        Command::Dcurve { grid, method } => ("dcurve", json!({"grid": grid, "method": method_name(*method)})),
        Command::EtaMinus { eta, tol_t, method } => (
            "eta-minus",
            json!({"eta": real(*eta), "tol_t": rat(tol_t), "method": method_name(*method)}),
        ),
        Command::Connect { t, eps, comp1, comp2 } => (
            "connect",
            json!({"t": rat(t), "eps": rat(eps), "comp1": comp1, "comp2": comp2}),
        ),
        Command::Family { eta, eps, stages } => (
            "family",
            json!({"eta": real(*eta), "eps": rat(eps), "stages": stages}),
        ),
        Command::ThetaDemo { eta, eps, stages, repeats, gap_base, gap_ratio } => (
            "theta-demo",
            json!({
                "eta": real(*eta), "eps": rat(eps), "stages": stages,
                "repeats": repeats, "gap_base": gap_base, "gap_ratio": gap_ratio,
            }),
        ),
        Command::MarkovTriples { count } => ("markov-triples", json!({"count": count})),
        Command::Sumset { alphabet, alphabet2, depth, count_budget } => (
            "sumset",
            json!({
                "alphabet": alphabet.to_string(),
                "alphabet2": alphabet2.as_ref().unwrap_or(alphabet).to_string(),
                "depth": depth,
                "count_budget": count_budget,
            }),
        ),
        Command::Classify { t, eps, method } => (
            "classify",
            json!({"t": rat(t), "eps": eps.iter().map(rat).collect::<Vec<_>>(), "method": method_name(*method)}),
        ),
    };
    base.as_object_mut()
        .expect("object")
        .insert("args".into(), extra);
    (op, base)
}

fn to_json_string(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn to_csv<R: AsRef<[u8]>>(header: &[&str], rows: impl IntoIterator<Item = Vec<R>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Computes and renders one subcommand.
pub fn render(cfg: &RunConfig, cmd: &Command) -> Result<String> {
    match cmd {
        Command::Dim { alphabet, method, t, mode, count_budget } => match t {
            None => {
                let alphabet = match alphabet {
                    Some(a) => a.clone(),
                    None => Alphabet::full(cfg.n)?,
                };
                render_dim_alphabet(cfg, &alphabet, *method, *count_budget)
            }
            Some(t) => render_dim_sublevel(cfg, t, *mode, *method, *count_budget),
        },
        Command::Prune { t, mode } => render_prune(cfg, t, *mode),
        Command::Dcurve { grid, method } => {
            let grid = parse_grid(grid)?;
            let points = d_curve(&grid, &cfg.resolution(*method))?;
            match cfg.output {
                OutputFormat::Csv => to_csv(
                    &["t", "dLo", "dHi", "window", "r_max"],
                    points.iter().map(|p| {
                        vec![rat(&p.t), real(p.d_lo), real(p.d_hi), p.window.to_string(), p.r_max.to_string()]
                    }),
                ),
                OutputFormat::Json => to_json_string(&Value::Array(
                    points
                        .iter()
                        .map(|p| {
                            let (l_lo, l_hi) = p.l_bracket();
                            json!({
                                "t": rat(&p.t), "dLo": real(p.d_lo), "dHi": real(p.d_hi),
                                "L_lo": real(l_lo), "L_hi": real(l_hi),
                                "window": p.window, "r_max": p.r_max,
                            })
                        })
                        .collect(),
                )),
            }
        }
        Command::EtaMinus { eta, tol_t, method } => {
            let e = eta_minus(*eta, tol_t, &cfg.resolution(*method))?;
            match cfg.output {
                OutputFormat::Json => to_json_string(&eta_json(&e)),
                OutputFormat::Csv => to_csv(
                    &[
                        "eta", "left", "right", "dHi_left", "dHi_right", "certified_right", "indeterminate",
                        "degenerate", "step",
                    ],
                    [vec![
                        real(e.eta),
                        rat(&e.left),
                        rat(&e.right),
                        real(e.d_hi_left),
                        real(e.d_hi_right),
                        e.certified_right.as_ref().map(rat).unwrap_or_default(),
                        e.indeterminate.to_string(),
                        e.degenerate.to_string(),
                        rat(&e.step),
                    ]],
                ),
            }
        }
        Command::Connect { t, eps, comp1, comp2 } => render_connect(cfg, t, eps, comp1.as_deref(), comp2.as_deref()),
        Command::Family { eta, eps, stages } => {
            let family = increasing_family(*eta, eps, *stages, &cfg.resolution(DimMethod::Pressure))?;
            render_family(cfg, &family)
        }
        Command::ThetaDemo { eta, eps, stages, repeats, gap_base, gap_ratio } => {
            let res = cfg.resolution(DimMethod::Pressure);
            let family = increasing_family(*eta, eps, *stages, &res)?;
            let first = family
                .stages
                .first()
                .ok_or_else(|| Error::InvalidArgument("the family search found no stage".into()))?;
            let base = vec![first.component[0].clone()];
            let gaps = GapSchedule::new(*gap_base, *gap_ratio)?;
            let theta = theta_generate(&res, &base, &family.stages, *repeats, &gaps)?;
            let doubled = theta_generate(&res, &base, &family.stages, *repeats, &gaps.doubled())?;
            render_theta(cfg, &theta, &doubled)
        }
        Command::MarkovTriples { count } => {
            let triples = markov_triples(*count);
            match cfg.output {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    write_triples_csv(&triples, &mut buf)?;
                    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
                }
                OutputFormat::Json => {
                    let rows = triples
                        .iter()
                        .map(|t| {
                            let v = Quadratic::sqrt_over(BigInt::from(t.radicand()), BigInt::from(t.z.clone()))?;
                            Ok(json!({
                                "x": t.x.to_string(), "y": t.y.to_string(), "z": t.z.to_string(),
                                "value": format!("sqrt({})/{}", t.radicand(), t.z),
                                "decimal_60": v.to_decimal(60),
                            }))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    to_json_string(&Value::Array(rows))
                }
            }
        }
        Command::Sumset { alphabet, alphabet2, depth, count_budget } => {
            let b2 = alphabet2.as_ref().unwrap_or(alphabet);
            let e = sumset_boxdim(alphabet, b2, *depth, *count_budget)?;
            match cfg.output {
                OutputFormat::Json => to_json_string(&json!({
                    "B1": alphabet.to_string(), "B2": b2.to_string(), "depth": depth,
                    "estimate": estimate_json(&e),
                })),
                OutputFormat::Csv => to_csv(
                    &["B1", "B2", "depth", "lo", "hi"],
                    [vec![alphabet.to_string(), b2.to_string(), depth.to_string(), real(e.lo), real(e.hi)]],
                ),
            }
        }
        Command::Classify { t, eps, method } => {
            let c = classify_point(t, eps, &cfg.resolution(*method))?;
            render_classification(cfg, &c)
        }
    }
}

fn render_dim_alphabet(cfg: &RunConfig, alphabet: &Alphabet, method: MethodChoice, count_budget: u64) -> Result<String> {
    let estimates = method
        .methods()
        .into_iter()
        .map(|m| match m {
            DimMethod::Pressure => {
                let a = full_shift_over(alphabet.symbols(), cfg.window, cfg.budget)?;
                automaton_pressure_dim(&a, crate::interval::rat_to_f64(&cfg.tol))
            }
            DimMethod::BoxCount => boxdim_estimate(CoverTarget::Alphabet(alphabet), cfg.r_max, count_budget),
        })
        .collect::<Result<Vec<_>>>()?;
    match cfg.output {
        OutputFormat::Json => to_json_string(&json!({
            "alphabet": alphabet.to_string(),
            "window": cfg.window,
            "r_max": cfg.r_max,
            "estimates": estimates.iter().map(estimate_json).collect::<Vec<_>>(),
        })),
        OutputFormat::Csv => to_csv(
            &["alphabet", "method", "lo", "hi", "window", "r_max"],
            estimates.iter().map(|e| {
                vec![
                    alphabet.to_string(),
                    e.method.to_string(),
                    real(e.lo),
                    real(e.hi),
                    cfg.window.to_string(),
                    cfg.r_max.to_string(),
                ]
            }),
        ),
    }
}

fn stable_dimension(a: &SubshiftAutomaton, comp: &[usize], res: &Resolution) -> Result<DimensionEstimate> {
    let reversed = a.restrict(comp).transpose();
    let all: Vec<usize> = (0..reversed.len()).collect();
    component_dimension(&reversed, &all, res)
}

fn render_dim_sublevel(
    cfg: &RunConfig,
    t: &BigRational,
    mode: PruneMode,
    method: MethodChoice,
    count_budget: u64,
) -> Result<String> {
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for m in method.methods() {
        let mut res = cfg.resolution(m);
        res.count_budget = count_budget;
        let s = Sublevel::compute(t, mode, &res)?;
        let stable = s
            .decomposition
            .subhorseshoes
            .iter()
            .map(|c| stable_dimension(&s.automaton, c, &res))
            .collect::<Result<Vec<_>>>()?;
        let planar = dim_finite_type(&s.decomposition, &s.dims, &stable)?;
        let comps: Vec<Value> = s
            .decomposition
            .subhorseshoes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                rows.push(vec![
                    method_name(m).to_string(),
                    format!("component:{i}"),
                    c.len().to_string(),
                    real(s.dims[i].lo),
                    real(s.dims[i].hi),
                    real(stable[i].lo),
                    real(stable[i].hi),
                ]);
                json!({"size": c.len(), "unstable": estimate_json(&s.dims[i]), "stable": estimate_json(&stable[i])})
            })
            .collect();
        rows.push(vec![
            method_name(m).to_string(),
            "planar".into(),
            s.automaton.len().to_string(),
            real(planar.lo),
            real(planar.hi),
            String::new(),
            String::new(),
        ]);
        results.push(json!({
            "method": method_name(m),
            "components": comps,
            "transient_pairs": s.decomposition.transient_pairs,
            "planar": estimate_json(&planar),
        }));
    }
    match cfg.output {
        OutputFormat::Json => to_json_string(&json!({
            "t": rat(t), "mode": mode_name(mode), "N": cfg.n, "window": cfg.window, "r_max": cfg.r_max,
            "results": results,
        })),
        OutputFormat::Csv => to_csv(&["method", "item", "size", "lo", "hi", "stable_lo", "stable_hi"], rows),
    }
}

fn render_prune(cfg: &RunConfig, t: &BigRational, mode: PruneMode) -> Result<String> {
    let a = cfg.resolution(DimMethod::Pressure).automaton(t, mode)?;
    let d = crate::sft::scc_decompose(&a);
    match cfg.output {
        OutputFormat::Json => to_json_string(&json!({
            "t": rat(t),
            "mode": mode_name(mode),
            "automaton": serde_json::to_value(a.to_json())?,
            "decomposition": serde_json::to_value(&d)?,
        })),
        OutputFormat::Csv => {
            let transient: BTreeSet<usize> = d.transient_states.iter().copied().collect();
            to_csv(
                &["state", "word", "f_lo", "f_hi", "role"],
                (0..a.len()).map(|i| {
                    let role = match d.component_of[i] {
                        Some(k) => format!("subhorseshoe:{k}"),
                        None if transient.contains(&i) => "transient".into(),
                        None => "orphan".into(),
                    };
                    vec![
                        i.to_string(),
                        word_str(a.state(i).symbols()),
                        rat(&a.f_range(i).lo),
                        rat(&a.f_range(i).hi),
                        role,
                    ]
                }),
            )
        }
    }
}

fn eta_json(e: &EtaMinus) -> Value {
    json!({
        "eta": real(e.eta),
        "left": rat(&e.left),
        "right": rat(&e.right),
        "dHi_left": real(e.d_hi_left),
        "dHi_right": real(e.d_hi_right),
        "certified_right": e.certified_right.as_ref().map(rat),
        "indeterminate": e.indeterminate,
        "degenerate": e.degenerate,
        "step": rat(&e.step),
    })
}

fn verdict_json(v: &ConnectVerdict) -> Value {
    json!({
        "connected": v.connected,
        "forward": v.forward.as_deref().map(words_json),
        "backward": v.backward.as_deref().map(words_json),
        "enclosing": v.enclosing.as_deref().map(words_json),
    })
}

/// State word of the periodic orbit with the given period, at the window length.
fn periodic_state(period: &str, window: usize) -> Result<Vec<Symbol>> {
    let symbols = period
        .split(',')
        .map(|s| s.trim().parse::<Symbol>().map_err(|_| Error::InvalidWord(period.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let word = Word::new(symbols)?;
    Ok((0..2 * window + 1).map(|i| word.symbols()[i % word.len()]).collect())
}

fn render_connect(
    cfg: &RunConfig,
    t: &BigRational,
    eps: &BigRational,
    comp1: Option<&str>,
    comp2: Option<&str>,
) -> Result<String> {
    let res = cfg.resolution(DimMethod::Pressure);
    let at_t = res.automaton(t, PruneMode::Outer)?;
    let d = crate::sft::scc_decompose(&at_t);
    let components: Vec<Vec<Word>> = d
        .subhorseshoes
        .iter()
        .map(|c| crate::analysis::words_of(&at_t, c))
        .collect();
    let locate = |period: &str| -> Result<usize> {
        let state = periodic_state(period, cfg.window)?;
        let idx = at_t
            .index_of(&state)
            .ok_or_else(|| Error::UnknownState(word_str(&state)))?;
        d.component_of[idx]
            .ok_or_else(|| Error::InvalidArgument(format!("state {} lies on no subhorseshoe", word_str(&state))))
    };
    let pairs: Vec<(usize, usize)> = match (comp1, comp2) {
        (Some(a), Some(b)) => vec![(locate(a)?, locate(b)?)],
        (None, None) => (0..components.len())
            .flat_map(|i| (i..components.len()).map(move |j| (i, j)))
            .collect(),
        _ => return Err(Error::InvalidArgument("give both --comp1 and --comp2 or neither".into())),
    };
    let later = res.automaton(&(t + eps), PruneMode::Outer)?;
    let verdicts = pairs
        .iter()
        .map(|&(i, j)| connect_in(&later, &components[i], &components[j]))
        .collect::<Result<Vec<_>>>()?;
    match cfg.output {
        OutputFormat::Json => to_json_string(&json!({
            "t": rat(t),
            "eps": rat(eps),
            "components": components.iter().map(|c| words_json(c)).collect::<Vec<_>>(),
            "pairs": pairs.iter().zip(&verdicts).map(|(&(i, j), v)| {
                let mut o = verdict_json(v);
                o["i"] = json!(i);
                o["j"] = json!(j);
                o
            }).collect::<Vec<_>>(),
        })),
        OutputFormat::Csv => to_csv(
            &["i", "j", "size_i", "size_j", "connected", "forward_len", "backward_len", "enclosing_size"],
            pairs.iter().zip(&verdicts).map(|(&(i, j), v)| {
                let len = |p: &Option<Vec<Word>>| p.as_ref().map(|p| p.len().to_string()).unwrap_or_default();
                vec![
                    i.to_string(),
                    j.to_string(),
                    components[i].len().to_string(),
                    components[j].len().to_string(),
                    v.connected.to_string(),
                    len(&v.forward),
                    len(&v.backward),
                    len(&v.enclosing),
                ]
            }),
        ),
    }
}

fn render_family(cfg: &RunConfig, f: &Family) -> Result<String> {
    match cfg.output {
        OutputFormat::Json => to_json_string(&json!({
            "eta_minus": eta_json(&f.eta_minus),
            "diagnostic": f.diagnostic,
            "stages": f.stages.iter().map(|s| json!({
                "t_n": rat(&s.t_n),
                "level": rat(&s.level),
                "component": words_json(&s.component),
                "dim": estimate_json(&s.dim),
                "maxF": interval_json(&s.max_f),
                "link": s.link.as_ref().map(verdict_json),
            })).collect::<Vec<_>>(),
        })),
        OutputFormat::Csv => to_csv(
            &["stage", "t_n", "level", "size", "dim_lo", "dim_hi", "maxF_lo", "maxF_hi", "connects_next"],
            f.stages.iter().enumerate().map(|(i, s)| {
                vec![
                    i.to_string(),
                    rat(&s.t_n),
                    rat(&s.level),
                    s.component.len().to_string(),
                    real(s.dim.lo),
                    real(s.dim.hi),
                    rat(&s.max_f.lo),
                    rat(&s.max_f.hi),
                    s.link.as_ref().map(|l| l.connected.to_string()).unwrap_or_default(),
                ]
            }),
        ),
    }
}

fn render_theta(cfg: &RunConfig, theta: &ThetaDemo, doubled: &ThetaDemo) -> Result<String> {
    let one = |d: &ThetaDemo| {
        json!({
            "word": word_str(&d.word),
            "length": d.word.len(),
            "lagrange": interval_json(&d.lagrange),
            "window_error": rat(&d.window_error),
            "final_max_f": interval_json(&d.final_max_f),
            "within_final": d.within_final,
        })
    };
    match cfg.output {
        OutputFormat::Json => to_json_string(&json!({
            "schedule": one(theta),
            "doubled": one(doubled),
            "stable": theta.stable_against(doubled),
        })),
        OutputFormat::Csv => to_csv(
            &["schedule", "length", "lagrange_lo", "lagrange_hi", "window_error", "within_final", "stable"],
            [("base", theta), ("doubled", doubled)].into_iter().map(|(name, d)| {
                vec![
                    name.to_string(),
                    d.word.len().to_string(),
                    rat(&d.lagrange.lo),
                    rat(&d.lagrange.hi),
                    rat(&d.window_error),
                    d.within_final.to_string(),
                    theta.stable_against(doubled).to_string(),
                ]
            }),
        ),
    }
}

fn render_classification(cfg: &RunConfig, c: &Classification) -> Result<String> {
    let count = |tiers: &[Tier], t: Tier| tiers.iter().filter(|x| **x == t).count();
    match cfg.output {
        OutputFormat::Json => to_json_string(&json!({
            "t": rat(&c.t),
            "label": c.label.to_string(),
            "dLo": real(c.d.d_lo),
            "dHi": real(c.d.d_hi),
            "window": c.d.window,
            "per_eps": c.per_eps.iter().map(|v| json!({
                "eps": rat(&v.eps),
                "outcome": serde_json::to_value(v.outcome).expect("enum"),
                "tiers": serde_json::to_value(&v.tiers).expect("enum list"),
            })).collect::<Vec<_>>(),
            "left_gap": c.left_gap.as_ref().map(|(a, b)| json!([rat(a), rat(b)])),
        })),
        OutputFormat::Csv => to_csv(
            &["t", "label", "eps", "outcome", "high", "low", "ambiguous"],
            c.per_eps.iter().map(|v| {
                vec![
                    rat(&c.t),
                    c.label.to_string(),
                    rat(&v.eps),
                    serde_json::to_value(v.outcome).expect("enum").as_str().unwrap_or_default().to_string(),
                    count(&v.tiers, Tier::High).to_string(),
                    count(&v.tiers, Tier::Low).to_string(),
                    count(&v.tiers, Tier::Ambiguous).to_string(),
                ]
            }),
        ),
    }
}
