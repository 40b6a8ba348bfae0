//! Experiment driver behind the `fejer-well` binary.
//!
//! Every command works in natural units `a = μ = ℏ = 1` and returns a
//! [`TimeSeries`] plus the list of internal checks that failed.

pub mod config;
pub mod emit;
pub mod error;

use rayon::prelude::*;

use fejer_well::{
    classical_period, classical_reduced_uncertainty, default_grid_points, default_scan_grid, exp_p,
    exp_p2, exp_x, exp_x2, fejer_momentum, fejer_position, fixed_hbar_sequence, gibbs_overshoot,
    limit_sequence, optimal_half_width, reduced_uncertainty, scan, uncertainty_product, Coordinate,
    HalfWidthRule, LimitMode, ObservableKind, Orbit, PacketSpec, QuadratureOracle, SearchRange,
    Well,
};

pub use config::{Args, Command, HalfWidth, RunConfig, TimeSpec};
pub use emit::{emit, to_bytes, Cell, Format, TimeSeries};
pub use error::{CliError, CliResult};

/// Relative slack on the `ℏ/2` floor.
pub const HEISENBERG_SLACK: f64 = 1e-9;

/// Harmonic indices used by `gibbs` when `--m` is absent.
pub const GIBBS_LADDER: [u32; 8] = [1, 2, 5, 10, 20, 50, 100, 200];

/// Grid size for the Fejér no-overshoot check.
pub const FEJER_CHECK_POINTS: usize = 10_000;

/// `(n, N)` pairs covered by `oracle-check`.
pub const ORACLE_CASES: [(u32, u32); 3] = [(10, 3), (50, 7), (200, 14)];

/// Oracle tolerances for `x`, `x²`, `p`, `p²`, relative to `a`, `a²`,
/// `p_n`, `p_n²`.
pub const ORACLE_TOLERANCES: [f64; 4] = [1e-8, 1e-8, 1e-6, 1e-12];

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub series: TimeSeries,
    /// Internal checks that did not pass; non-empty means exit status 2.
    pub failures: Vec<String>,
}

impl Outcome {
    fn clean(series: TimeSeries) -> Self {
        Outcome {
            series,
            failures: Vec::new(),
        }
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    match cfg.command {
        Command::Fig1 => fig1(cfg),
        Command::Trajectories => trajectories(cfg),
        Command::Uncertainty => uncertainty(cfg),
        Command::Gibbs => gibbs(cfg),
        Command::Limit => limit(cfg),
        Command::OracleCheck => oracle_check(),
    }
}

/// Runs `cfg`, writes the artifact, and turns failed checks into
/// [`CliError::Tolerance`].
pub fn execute(cfg: &RunConfig) -> CliResult<usize> {
    let outcome = run(cfg)?;
    let written = emit(&outcome.series, cfg.format, cfg.out.as_deref())?;
    if outcome.failures.is_empty() {
        Ok(written)
    } else {
        Err(CliError::Tolerance(outcome.failures.join("; ")))
    }
}

/// Packet half-width for `n` under the configured rule.
pub fn resolve_half_width(cfg: &RunConfig, well: &Well, n: u32) -> CliResult<u32> {
    Ok(match cfg.half_width {
        HalfWidth::Fixed(k) => k,
        HalfWidth::Sqrt => (n as f64).sqrt().floor() as u32,
        HalfWidth::Auto => {
            optimal_half_width(well, n, SearchRange::default_for(n), cfg.instant)?.n_opt
        }
    })
}

fn time_grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| t_max * i as f64 / (steps - 1) as f64)
        .collect()
}

fn heisenberg_failure(product: f64, hbar: f64, what: impl std::fmt::Display) -> Option<String> {
    (product < hbar / 2.0 * (1.0 - HEISENBERG_SLACK))
        .then(|| format!("uncertainty product {product} below hbar/2 at {what}"))
}

fn fig1(cfg: &RunConfig) -> CliResult<Outcome> {
    let well = Well::natural();
    let ns = cfg.ns.clone().unwrap_or_else(default_scan_grid);
    let rows = scan(&well, &ns, cfg.instant)?;
    let mut series = TimeSeries::new(["n", "N_opt", "sqrt_n", "product_min", "t_eval"]);
    let mut failures = Vec::new();
    for r in &rows {
        failures.extend(heisenberg_failure(
            r.product_min,
            well.hbar(),
            format_args!("n = {}", r.n),
        ));
        series.push(vec![
            r.n.into(),
            r.n_opt.into(),
            r.sqrt_n.into(),
            r.product_min.into(),
            r.t_eval.into(),
        ]);
    }
    Ok(Outcome { series, failures })
}

struct Setup {
    well: Well,
    spec: PacketSpec,
    orbit: Orbit,
    times: Vec<f64>,
}

fn setup(cfg: &RunConfig) -> CliResult<Setup> {
    let well = Well::natural();
    let spec = PacketSpec::new(cfg.n, resolve_half_width(cfg, &well, cfg.n)?)?;
    let orbit = Orbit::matched(&well, cfg.n)?;
    let period = classical_period(&well, cfg.n)?;
    let times = time_grid(cfg.t_max.resolve(period), cfg.steps);
    Ok(Setup {
        well,
        spec,
        orbit,
        times,
    })
}

fn trajectories(cfg: &RunConfig) -> CliResult<Outcome> {
    let Setup {
        well,
        spec,
        orbit,
        times,
    } = setup(cfg)?;
    let order = spec.half_width();
    let unit = if cfg.normalize_momentum {
        orbit.momentum()
    } else {
        1.0
    };
    let rows: Vec<Vec<Cell>> = times
        .par_iter()
        .map(|&t| {
            vec![
                t.into(),
                exp_x(&well, &spec, t).into(),
                fejer_position(&orbit, order, t).into(),
                (exp_p(&well, &spec, t) / unit).into(),
                (fejer_momentum(&orbit, order, t) / unit).into(),
            ]
        })
        .collect();
    let mut series = TimeSeries::new(["t", "x_quantum", "x_fejer", "p_quantum", "p_fejer"]);
    series.rows = rows;
    Ok(Outcome::clean(series))
}

fn uncertainty(cfg: &RunConfig) -> CliResult<Outcome> {
    let Setup {
        well,
        spec,
        orbit,
        times,
    } = setup(cfg)?;
    let order = spec.half_width();
    let rows: Vec<(Vec<Cell>, Option<String>)> = times
        .par_iter()
        .map(|&t| -> CliResult<_> {
            let row = vec![
                t.into(),
                reduced_uncertainty(&well, &spec, t, Coordinate::Position)?.into(),
                classical_reduced_uncertainty(&orbit, Coordinate::Position, order, t)?.into(),
                reduced_uncertainty(&well, &spec, t, Coordinate::Momentum)?.into(),
                classical_reduced_uncertainty(&orbit, Coordinate::Momentum, order, t)?.into(),
            ];
            let product = uncertainty_product(&well, &spec, t)?;
            Ok((
                row,
                heisenberg_failure(product, well.hbar(), format_args!("t = {t}")),
            ))
        })
        .collect::<CliResult<_>>()?;
    let mut series = TimeSeries::new([
        "t",
        "delta_x",
        "delta_x_classical",
        "delta_p",
        "delta_p_classical",
    ]);
    let mut failures = Vec::new();
    for (row, fail) in rows {
        series.push(row);
        failures.extend(fail);
    }
    Ok(Outcome { series, failures })
}

/// `max_t |F⟨p⟩| / p_c` over one period.
pub fn fejer_momentum_peak(orbit: &Orbit, order: u32, points: usize) -> f64 {
    let period = orbit.period();
    (0..points)
        .into_par_iter()
        .map(|i| fejer_momentum(orbit, order, period * i as f64 / points as f64).abs())
        .reduce(|| 0.0, f64::max)
        / orbit.momentum()
}

fn gibbs(cfg: &RunConfig) -> CliResult<Outcome> {
    let orbit = Orbit::matched(&Well::natural(), cfg.n)?;
    let ms: Vec<u32> = cfg.m.map_or_else(|| GIBBS_LADDER.to_vec(), |m| vec![m]);
    let mut series = TimeSeries::new(["m", "overshoot_ratio", "fejer_max_ratio"]);
    let mut failures = Vec::new();
    for m in ms {
        let overshoot = gibbs_overshoot(&orbit, m)?;
        let fejer = fejer_momentum_peak(&orbit, m, FEJER_CHECK_POINTS);
        if fejer > 1.0 + 1e-9 {
            failures.push(format!(
                "Fejér momentum overshoots p_c by {} at N = {m}",
                fejer - 1.0
            ));
        }
        series.push(vec![m.into(), overshoot.into(), fejer.into()]);
    }
    Ok(Outcome { series, failures })
}

fn limit(cfg: &RunConfig) -> CliResult<Outcome> {
    let ns = cfg.ns.clone().unwrap_or_else(|| vec![100, 200, 400, 800]);
    let rule = match cfg.half_width {
        HalfWidth::Fixed(k) => HalfWidthRule::Fixed(k),
        HalfWidth::Sqrt => HalfWidthRule::SqrtN,
        HalfWidth::Auto => HalfWidthRule::Fixed(5),
    };
    let well = Well::natural();
    let t_points = fejer_well::limit::DEFAULT_T_POINTS;
    let rows = match cfg.limit_mode {
        LimitMode::ScaledHbar => {
            let p_c = Orbit::matched(&well, cfg.n)?.momentum();
            limit_sequence(well.width(), well.mass(), p_c, &ns, rule, t_points)?
        }
        LimitMode::FixedHbar => fixed_hbar_sequence(&well, &ns, rule, t_points)?,
    };
    let mut series = TimeSeries::new([
        "n",
        "hbar_eff",
        "N",
        "sup_err_x",
        "sup_err_p",
        "sup_err_x2",
        "window",
        "refinement_delta",
    ]);
    for r in rows {
        series.push(vec![
            r.n.into(),
            r.hbar_eff.into(),
            r.half_width.into(),
            r.sup_err_x.into(),
            r.sup_err_p.into(),
            r.sup_err_x2.into(),
            r.window.into(),
            r.refinement_delta.into(),
        ]);
    }
    Ok(Outcome::clean(series))
}

/// Largest deviations between closed forms and the quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleDeviation {
    pub n: u32,
    pub half_width: u32,
    /// `x`, `x²`, `p`, `p²`, each relative to its natural scale.
    pub max_dev: [f64; 4],
    /// Relative spread of the oracle `⟨p²⟩` over the period.
    pub p2_variation: f64,
    pub well_resolved: bool,
}

pub fn oracle_deviation(n: u32, half_width: u32, t_points: usize) -> CliResult<OracleDeviation> {
    let well = Well::natural();
    let spec = PacketSpec::new(n, half_width)?;
    let oracle = QuadratureOracle::new(well, spec, default_grid_points(&spec))?;
    let period = classical_period(&well, n)?;
    let p_n = Orbit::matched(&well, n)?.momentum();
    let scale = [well.width(), well.width().powi(2), p_n, p_n * p_n];
    let per_t: Vec<([f64; 4], f64)> = time_grid(period, t_points)
        .into_par_iter()
        .map(|t| {
            let o = oracle.expectations(t);
            let c = [
                exp_x(&well, &spec, t),
                exp_x2(&well, &spec, t),
                exp_p(&well, &spec, t),
                exp_p2(&well, &spec),
            ];
            let dev = std::array::from_fn(|i| (o[i] - c[i]).abs() / scale[i]);
            (dev, o[3])
        })
        .collect();
    let mut max_dev = [0.0f64; 4];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (dev, p2) in &per_t {
        for i in 0..4 {
            max_dev[i] = max_dev[i].max(dev[i]);
        }
        lo = lo.min(*p2);
        hi = hi.max(*p2);
    }
    Ok(OracleDeviation {
        n,
        half_width,
        max_dev,
        p2_variation: (hi - lo) / hi,
        well_resolved: oracle.well_resolved(),
    })
}

fn oracle_check() -> CliResult<Outcome> {
    let mut series = TimeSeries::new([
        "n",
        "N",
        "max_dev_x",
        "max_dev_x2",
        "max_dev_p",
        "max_dev_p2",
        "p2_variation",
        "well_resolved",
    ]);
    let mut failures = Vec::new();
    for (n, big_n) in ORACLE_CASES {
        let d = oracle_deviation(n, big_n, 32)?;
        for (i, kind) in ObservableKind::ALL.iter().enumerate() {
            if !(d.max_dev[i] < ORACLE_TOLERANCES[i]) {
                failures.push(format!(
                    "{kind:?} oracle deviation {} at n = {n}",
                    d.max_dev[i]
                ));
            }
        }
        if !(d.p2_variation < 1e-10) {
            failures.push(format!(
                "oracle <p^2> varies by {} at n = {n}",
                d.p2_variation
            ));
        }
        series.push(vec![
            n.into(),
            big_n.into(),
            d.max_dev[0].into(),
            d.max_dev[1].into(),
            d.max_dev[2].into(),
            d.max_dev[3].into(),
            d.p2_variation.into(),
            u32::from(d.well_resolved).into(),
        ]);
    }
    Ok(Outcome { series, failures })
}
