//! Convergence of the packet averages onto the Fejér means.
//!
//! In the scaled mode `ℏ` is set to `p_c·a/(nπ)` for every `n`, which pins
//! `p_n = p_c` and `ω_n = ω`; only the level-spacing detuning of order
//! `N/n` separates the two sides. The fixed-`ℏ` mode keeps `ℏ` and the
//! physical time window fixed instead, so the number of elapsed periods
//! grows with `n` and the detuning phase never shrinks.

use rayon::prelude::*;

use crate::classical::{fejer_momentum, fejer_position, fejer_position_sq, ClassicalOrbit};
use crate::error::{domain, Result};
use crate::expectations::{exp_x2, position_and_momentum};
use crate::model::{PacketSpec, WellConfig};
use crate::scalar::Scalar;

/// Smallest time grid accepted by the sequences.
pub const MIN_T_POINTS: usize = 256;

/// Default time grid.
pub const DEFAULT_T_POINTS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfWidthRule {
    Fixed(u32),
    /// `N = ⌊√n⌋`.
    SqrtN,
}

impl HalfWidthRule {
    pub fn resolve(self, n: u32) -> u32 {
        match self {
            HalfWidthRule::Fixed(k) => k,
            HalfWidthRule::SqrtN => (n as f64).sqrt().floor() as u32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitMode {
    ScaledHbar,
    FixedHbar,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow<S> {
    pub n: u32,
    pub hbar_eff: S,
    pub half_width: u32,
    pub sup_err_x: S,
    pub sup_err_p: S,
    pub sup_err_x2: S,
    /// Time span of the grid.
    pub window: S,
    /// Last row only: change in `sup_err_x` when the grid is doubled.
    pub refinement_delta: Option<S>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct SupErrors<S> {
    x: S,
    p: S,
    x2: S,
}

fn sup_errors<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    orbit: &ClassicalOrbit<S>,
    window: S,
    points: usize,
) -> SupErrors<S> {
    let order = spec.half_width();
    let last = S::from_int((points - 1) as u64);
    let mut out = SupErrors {
        x: S::zero(),
        p: S::zero(),
        x2: S::zero(),
    };
    for i in 0..points {
        let t = window * S::from_int(i as u64) / last;
        let (x, p) = position_and_momentum(cfg, spec, t);
        let x2 = exp_x2(cfg, spec, t);
        out.x = out.x.max((x - fejer_position(orbit, order, t)).abs());
        out.p = out.p.max((p - fejer_momentum(orbit, order, t)).abs());
        out.x2 = out.x2.max((x2 - fejer_position_sq(orbit, order, t)).abs());
    }
    out
}

fn check_sequence(ns: &[u32], rule: HalfWidthRule, t_points: usize) -> Result<()> {
    if ns.is_empty() {
        return domain("n sequence is empty");
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return domain("n sequence must be strictly ascending");
    }
    if t_points < MIN_T_POINTS {
        return domain(format!(
            "need at least {MIN_T_POINTS} time points, got {t_points}"
        ));
    }
    for &n in ns {
        PacketSpec::new(n, rule.resolve(n))?;
    }
    Ok(())
}

fn build_rows<S: Scalar>(
    ns: &[u32],
    rule: HalfWidthRule,
    setup: impl Fn(u32) -> Result<(WellConfig<S>, ClassicalOrbit<S>, S, usize)> + Sync,
) -> Result<Vec<LimitRow<S>>> {
    let last = ns.len() - 1;
    ns.par_iter()
        .enumerate()
        .map(|(idx, &n)| {
            let spec = PacketSpec::new(n, rule.resolve(n))?;
            let (cfg, orbit, window, points) = setup(n)?;
            let errs = sup_errors(&cfg, &spec, &orbit, window, points);
            let refinement_delta = (idx == last).then(|| {
                let fine = sup_errors(&cfg, &spec, &orbit, window, 2 * points - 1);
                (fine.x - errs.x).abs()
            });
            Ok(LimitRow {
                n,
                hbar_eff: cfg.hbar(),
                half_width: spec.half_width(),
                sup_err_x: errs.x,
                sup_err_p: errs.p,
                sup_err_x2: errs.x2,
                window,
                refinement_delta,
            })
        })
        .collect()
}

/// Sup errors over one classical period with `ℏ_eff = p_c·a/(nπ)`.
pub fn limit_sequence<S: Scalar>(
    width: S,
    mass: S,
    p_c: S,
    ns: &[u32],
    rule: HalfWidthRule,
    t_points: usize,
) -> Result<Vec<LimitRow<S>>> {
    check_sequence(ns, rule, t_points)?;
    let orbit = ClassicalOrbit::new(width, p_c, mass)?;
    let period = orbit.period();
    build_rows(ns, rule, |n| {
        let hbar = p_c * width / (S::from_int(n as u64) * S::PI());
        Ok((WellConfig::new(width, mass, hbar)?, orbit, period, t_points))
    })
}

/// Sup errors at fixed `ℏ` over the fixed time window of one period of the
/// first `n`. Each orbit is matched to its own `p_n`; the grid is refined in
/// proportion to `n` so every period keeps the same sampling.
pub fn fixed_hbar_sequence<S: Scalar>(
    cfg: &WellConfig<S>,
    ns: &[u32],
    rule: HalfWidthRule,
    t_points: usize,
) -> Result<Vec<LimitRow<S>>> {
    check_sequence(ns, rule, t_points)?;
    let n0 = ns[0];
    let window = ClassicalOrbit::matched(cfg, n0)?.period();
    build_rows(ns, rule, |n| {
        let points = ((t_points as u64 - 1) * n as u64).div_ceil(n0 as u64) as usize + 1;
        Ok((*cfg, ClassicalOrbit::matched(cfg, n)?, window, points))
    })
}

/// Bohr frequencies of all packet pairs with level difference `harmonic`,
/// next to the classical harmonic they approximate.
#[derive(Debug, Clone, PartialEq)]
pub struct DetuningReport<S> {
    pub harmonic: u32,
    /// `h(1 + s/(2n))·ω_n` for `s = 2N − h, 2N − h − 2, …, −(2N − h)`.
    pub quantum: Vec<S>,
    /// `h·ω` with `ω = ω_n`.
    pub classical: S,
}

impl<S: Scalar> DetuningReport<S> {
    /// `quantum[i] / classical`.
    pub fn ratios(&self) -> Vec<S> {
        self.quantum.iter().map(|&q| q / self.classical).collect()
    }

    /// Largest accumulated phase slip `|ω_q − ω_c|·t` in radians.
    pub fn max_phase_error(&self, t: S) -> S {
        self.quantum
            .iter()
            .map(|&q| (q - self.classical).abs() * t)
            .fold(S::zero(), S::max)
    }
}

/// Detuning of harmonic `h` (`1 ≤ h ≤ 2N`) inside the packet.
pub fn detuning_report<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    harmonic: u32,
) -> Result<DetuningReport<S>> {
    let two_n = 2 * spec.half_width();
    if harmonic == 0 || harmonic > two_n {
        return domain(format!("harmonic must lie in 1..={two_n}, got {harmonic}"));
    }
    let omega_n = ClassicalOrbit::matched(cfg, spec.n())?.angular_frequency();
    let h = S::from_int(harmonic as u64);
    let span = (two_n - harmonic) as i64;
    let denom = S::from_int(2 * spec.n() as u64);
    let quantum = (0..=span)
        .map(|k| {
            let s = span - 2 * k;
            h * (S::one() + S::lit(s as f64) / denom) * omega_n
        })
        .collect();
    Ok(DetuningReport {
        harmonic,
        quantum,
        classical: h * omega_n,
    })
}
