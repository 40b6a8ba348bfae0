//! Search for the packet half-width that minimises `Δx·Δp`.

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::expectations::{exp_p, uncertainty_product};
use crate::model::{classical_period, PacketSpec, WellConfig};
use crate::roots::illinois;
use crate::scalar::Scalar;

/// Instant at which the product is compared across half-widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalInstant {
    /// `t = 0`, where every level is in phase.
    Start,
    /// The `k`-th turning point: the zero of `⟨p⟩` nearest `kT/2`.
    Turning(u32),
}

impl Default for EvalInstant {
    fn default() -> Self {
        EvalInstant::Turning(1)
    }
}

/// Inclusive range of half-widths to try.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchRange {
    pub min: u32,
    pub max: u32,
}

impl SearchRange {
    /// `1..=min(n − 1, ⌈4√n⌉)`.
    pub fn default_for(n: u32) -> Self {
        let cap = (4.0 * (n as f64).sqrt()).ceil() as u32;
        SearchRange {
            min: 1,
            max: cap.min(n.saturating_sub(1)).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow<S> {
    pub n: u32,
    pub n_opt: u32,
    pub product_min: S,
    pub t_eval: S,
    pub sqrt_n: S,
}

/// `N_opt ≈ prefactor·n^exponent` by least squares in log–log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// RMS residual of `ln N_opt`.
    pub residual: f64,
}

/// Evaluation time for `spec` under `instant`.
pub fn evaluation_time<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    instant: EvalInstant,
) -> Result<S> {
    match instant {
        EvalInstant::Start => Ok(S::zero()),
        EvalInstant::Turning(k) => turning_instant(cfg, spec, k),
    }
}

/// Zero of `⟨p⟩` nearest `kT/2`, searched within `±T/4`. Falls back to the
/// minimum of `|⟨p⟩|` on that window when no sign change is found.
pub fn turning_instant<S: Scalar>(cfg: &WellConfig<S>, spec: &PacketSpec, k: u32) -> Result<S> {
    if k == 0 {
        return domain("turning index starts at 1");
    }
    let period = classical_period(cfg, spec.n())?;
    let centre = period * S::from_int(k as u64) / S::two();
    let reach = period / S::lit(4.0);
    let pieces = 40u64;
    let step = S::two() * reach / S::from_int(pieces);
    let p = |t: S| exp_p(cfg, spec, t);
    let grid: Vec<(S, S)> = (0..=pieces)
        .map(|i| {
            let t = centre - reach + step * S::from_int(i);
            (t, p(t))
        })
        .collect();

    let mut best: Option<(S, S)> = None;
    for w in grid.windows(2) {
        let ((t0, p0), (t1, p1)) = (w[0], w[1]);
        let root = if p0 == S::zero() {
            Some(t0)
        } else if p0 * p1 < S::zero() {
            illinois(p, t0, t1, period * S::lit(1e-13))
        } else {
            None
        };
        if let Some(r) = root {
            let dist = (r - centre).abs();
            if best.is_none_or(|(_, d)| dist < d) {
                best = Some((r, dist));
            }
        }
    }
    if let Some((r, _)) = best {
        return Ok(r);
    }
    let (t, _) =
        grid.into_iter()
            .map(|(t, v)| (t, v.abs()))
            .fold((centre, S::infinity()), |acc, cur| {
                if cur.1 < acc.1 {
                    cur
                } else {
                    acc
                }
            });
    Ok(t)
}

/// Half-width in `range` with the smallest product at the chosen instant.
/// Ties go to the smaller half-width. Returns the winning row.
pub fn optimal_half_width<S: Scalar>(
    cfg: &WellConfig<S>,
    n: u32,
    range: SearchRange,
    instant: EvalInstant,
) -> Result<ScanRow<S>> {
    if n < 4 {
        return domain(format!("optimiser needs n >= 4, got {n}"));
    }
    if range.min < 1 || range.min > range.max || range.max >= n {
        return domain(format!(
            "half-width range {}..={} invalid for n = {n}",
            range.min, range.max
        ));
    }
    let mut best: Option<(u32, S, S)> = None;
    for big_n in range.min..=range.max {
        let spec = PacketSpec::new(n, big_n)?;
        let t = evaluation_time(cfg, &spec, instant)?;
        let prod = uncertainty_product(cfg, &spec, t)?;
        if best.is_none_or(|(_, b, _)| prod < b) {
            best = Some((big_n, prod, t));
        }
    }
    let (n_opt, product_min, t_eval) = best.expect("non-empty range");
    Ok(ScanRow {
        n,
        n_opt,
        product_min,
        t_eval,
        sqrt_n: S::from_int(n as u64).sqrt(),
    })
}

/// [`optimal_half_width`] for each `n` in parallel with the default range.
/// Rows come back in input order.
pub fn scan<S: Scalar>(
    cfg: &WellConfig<S>,
    ns: &[u32],
    instant: EvalInstant,
) -> Result<Vec<ScanRow<S>>> {
    ns.par_iter()
        .map(|&n| optimal_half_width(cfg, n, SearchRange::default_for(n), instant))
        .collect()
}

/// Power-law fit of `N_opt` against `n`. `None` with fewer than three rows.
pub fn fit_power_law<S: Scalar>(rows: &[ScanRow<S>]) -> Option<ScanFit> {
    if rows.len() < 3 {
        return None;
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.n as f64).ln(), (r.n_opt as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - exponent * p.0).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    Some(ScanFit {
        exponent,
        prefactor: intercept.exp(),
        residual,
    })
}

/// Twelve geometrically spaced `n` from 10 to 500.
pub fn default_scan_grid() -> Vec<u32> {
    vec![10, 14, 20, 29, 41, 59, 84, 121, 172, 246, 350, 500]
}
