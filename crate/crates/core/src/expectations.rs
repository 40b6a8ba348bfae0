//! Expectation values of `x`, `x²`, `p`, `p²` on the equally weighted packet.
//!
//! Every interference term of the packet pairs two levels `j > k` with
//! difference `d = j − k` and sum `j + k = 2n + s`; its Bohr frequency is
//! `d(1 + s/(2n))·ω_n`. The closed forms below enumerate those pairs in the
//! `(l, r)` layout whose classical limit is the Fejér mean.
//!
//! Time enters only through `τ = ℏπt/(4μa²)` (reduced mod 1): a term with
//! `j² − k² = q` has phase `2π·q·τ`, so long-time evaluations keep their
//! accuracy.

use crate::classical::{reduced_spread, Coordinate};
use crate::error::{domain, Error, Result};
use crate::model::{PacketSpec, WellConfig};
use crate::scalar::{turn_cos_sin, Scalar};
use crate::sum::CompensatedSum;

pub use crate::oracle::{
    default_grid_points, oracle_expectation, OracleMethod, OracleValue, QuadratureOracle,
};

/// The four observables with closed-form packet averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObservableKind {
    Position,
    PositionSq,
    Momentum,
    MomentumSq,
}

impl ObservableKind {
    pub const ALL: [ObservableKind; 4] = [
        ObservableKind::Position,
        ObservableKind::PositionSq,
        ObservableKind::Momentum,
        ObservableKind::MomentumSq,
    ];
}

/// All packet moments at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationSample<S> {
    pub t: S,
    pub x_mean: S,
    pub x2_mean: S,
    pub p_mean: S,
    pub p2_mean: S,
    /// `Δx`
    pub dx: S,
    /// `Δp`
    pub dp: S,
    /// `Δx·Δp`
    pub product: S,
}

/// How classical Fourier amplitudes are attached to Bohr frequencies in the
/// quasi-quantum averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuasiPairing {
    /// Each packet pair `(j, k)` keeps its own frequency `(E_j − E_k)/ℏ`,
    /// enumerated exactly like the closed form for `⟨x⟩`.
    #[default]
    PacketPairs,
    /// All pairs with difference `r` share the frequency `(E_{n+r} − E_n)/ℏ`
    /// of the central level.
    SingleReference,
}

/// Position-family enumeration: calls `visit(d, s)` for every pair with odd
/// difference `d = 2r+1` and level sum `2n + s`, in the order
/// `l = 0..N, r = 0..=l`, branch `s = 2N − 4l + 2r − 1` then `s − 2`.
fn for_each_position_pair(spec: &PacketSpec, mut visit: impl FnMut(u64, i64)) {
    let big_n = spec.half_width() as i64;
    for l in 0..big_n {
        for r in 0..=l {
            let d = (2 * r + 1) as u64;
            let s = 2 * big_n - 4 * l + 2 * r - 1;
            visit(d, s);
            visit(d, s - 2);
        }
    }
}

/// `(⟨x⟩, ⟨p⟩)` from the closed form for `⟨x⟩` and its exact time derivative.
pub(crate) fn position_and_momentum<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    t: S,
) -> (S, S) {
    let a = cfg.width();
    let n2 = 2 * spec.n() as i64;
    let tau = cfg.phase_cycles(t);
    // Ω = q·κ with q = d(2n + s), κ = ℏπ²/(2μa²)
    let kappa = cfg.hbar() * S::PI() * S::PI() / (S::two() * cfg.mass() * a * a);
    let mut xs = CompensatedSum::new();
    let mut ps = CompensatedSum::new();
    for_each_position_pair(spec, |d, s| {
        let sum = (n2 + s) as u64;
        let amp = S::one() / S::from_int(sum * sum) - S::one() / S::from_int(d * d);
        let q = d * sum;
        let (cos, sin) = turn_cos_sin(q, tau);
        xs.add(amp * cos);
        ps.add(-amp * S::from_int(q) * sin);
    });
    let scale = S::lit(4.0) * a / (S::PI() * S::PI() * S::from_int(spec.len() as u64));
    (
        a / S::two() + scale * xs.value(),
        cfg.mass() * scale * kappa * ps.value(),
    )
}

/// `⟨x⟩(t)` in closed form.
pub fn exp_x<S: Scalar>(cfg: &WellConfig<S>, spec: &PacketSpec, t: S) -> S {
    position_and_momentum(cfg, spec, t).0
}

/// `⟨p⟩(t) = μ d⟨x⟩/dt`, differentiated term by term.
pub fn exp_p<S: Scalar>(cfg: &WellConfig<S>, spec: &PacketSpec, t: S) -> S {
    position_and_momentum(cfg, spec, t).1
}

/// `⟨x²⟩(t)` in closed form.
pub fn exp_x2<S: Scalar>(cfg: &WellConfig<S>, spec: &PacketSpec, t: S) -> S {
    let a = cfg.width();
    let n = spec.n() as i64;
    let big_n = spec.half_width() as i64;
    let len = S::from_int(spec.len() as u64);
    let pi2 = S::PI() * S::PI();

    let diag: CompensatedSum<S> = spec
        .levels()
        .map(|m| S::one() / S::from_int(m as u64 * m as u64))
        .collect();

    let tau = cfg.phase_cycles(t);
    let mut off = CompensatedSum::new();
    for l in 1..=2 * big_n {
        for r in 1..=l {
            let sum = (2 * n - 2 * big_n + 2 * l - r) as u64;
            let r = r as u64;
            let amp = S::one() / S::from_int(r * r) - S::one() / S::from_int(sum * sum);
            let term = amp * turn_cos_sin(r * sum, tau).0;
            off.add(if r % 2 == 1 { -term } else { term });
        }
    }
    a * a / S::lit(3.0) - a * a / (S::two() * pi2 * len) * diag.value()
        + S::lit(4.0) * a * a / (pi2 * len) * off.value()
}

/// `⟨p²⟩ = p_n²(1 + (N + N²)/(3n²))`, constant in time.
pub fn exp_p2<S: Scalar>(cfg: &WellConfig<S>, spec: &PacketSpec) -> S {
    let p_n = cfg.momentum_unchecked(spec.n() as u64);
    let n = S::from_int(spec.n() as u64);
    let big_n = S::from_int(spec.half_width() as u64);
    p_n * p_n * (S::one() + (big_n + big_n * big_n) / (S::lit(3.0) * n * n))
}

/// The level-by-level form `(πℏ/a)²/(2N+1) Σ_m (n+m)²` of `⟨p²⟩`.
pub fn exp_p2_level_sum<S: Scalar>(cfg: &WellConfig<S>, spec: &PacketSpec) -> S {
    let unit = S::PI() * cfg.hbar() / cfg.width();
    let sum: CompensatedSum<S> = spec
        .levels()
        .map(|m| S::from_int(m as u64 * m as u64))
        .collect();
    unit * unit * sum.value() / S::from_int(spec.len() as u64)
}

fn variance_floor<S: Scalar>(name: &str, mean: S, mean_sq: S) -> Result<S> {
    let var = mean_sq - mean * mean;
    let guard = S::lit(1e-12) * mean_sq.abs();
    if var < -guard {
        return Err(Error::Consistency(format!(
            "negative {name} variance {var} (⟨f²⟩ = {mean_sq}, ⟨f⟩ = {mean})"
        )));
    }
    Ok(var.max(S::zero()))
}

/// All four moments plus spreads at time `t`.
pub fn sample<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    t: S,
) -> Result<ExpectationSample<S>> {
    let (x_mean, p_mean) = position_and_momentum(cfg, spec, t);
    let x2_mean = exp_x2(cfg, spec, t);
    let p2_mean = exp_p2(cfg, spec);
    let dx = variance_floor("position", x_mean, x2_mean)?.sqrt();
    let dp = variance_floor("momentum", p_mean, p2_mean)?.sqrt();
    Ok(ExpectationSample {
        t,
        x_mean,
        x2_mean,
        p_mean,
        p2_mean,
        dx,
        dp,
        product: dx * dp,
    })
}

/// `Δx·Δp` at time `t`.
pub fn uncertainty_product<S: Scalar>(cfg: &WellConfig<S>, spec: &PacketSpec, t: S) -> Result<S> {
    Ok(sample(cfg, spec, t)?.product)
}

/// `δf = √(1 − ⟨f⟩²/⟨f²⟩)`, clamped into `[0, 1]`.
pub fn reduced_uncertainty<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    t: S,
    kind: Coordinate,
) -> Result<S> {
    match kind {
        Coordinate::Position => reduced_spread(exp_x(cfg, spec, t), exp_x2(cfg, spec, t)),
        Coordinate::Momentum => reduced_spread(exp_p(cfg, spec, t), exp_p2(cfg, spec)),
    }
}

/// Quasi-quantum average with the default [`QuasiPairing::PacketPairs`].
pub fn quasi_exp<S: Scalar>(cfg: &WellConfig<S>, spec: &PacketSpec, t: S, kind: Coordinate) -> S {
    quasi_exp_with(cfg, spec, t, kind, QuasiPairing::PacketPairs)
}

/// Packet average in which each matrix element is replaced by the classical
/// Fourier amplitude of the same harmonic (`−2a/(π²d²)` for `x`,
/// `−2ip_n/(πd)` for `p`, odd `d`), while the Bohr phases stay quantum.
pub fn quasi_exp_with<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    t: S,
    kind: Coordinate,
    pairing: QuasiPairing,
) -> S {
    let a = cfg.width();
    let n = spec.n() as u64;
    let tau = cfg.phase_cycles(t);
    let mut acc = CompensatedSum::new();
    let mut term = |d: u64, q: u64, weight: u64| {
        let (cos, sin) = turn_cos_sin(q, tau);
        let w = S::from_int(weight);
        match kind {
            Coordinate::Position => acc.add(w * cos / S::from_int(d * d)),
            Coordinate::Momentum => acc.add(w * sin / S::from_int(d)),
        }
    };
    match pairing {
        QuasiPairing::PacketPairs => {
            let n2 = 2 * n as i64;
            for_each_position_pair(spec, |d, s| term(d, d * (n2 + s) as u64, 1));
        }
        QuasiPairing::SingleReference => {
            let len = spec.len() as u64;
            for d in (1..len).step_by(2) {
                term(d, d * (2 * n + d), len - d);
            }
        }
    }
    let len = S::from_int(spec.len() as u64);
    match kind {
        Coordinate::Position => {
            a / S::two() - S::lit(4.0) * a / (S::PI() * S::PI() * len) * acc.value()
        }
        Coordinate::Momentum => {
            let p_n = cfg.momentum_unchecked(n);
            S::lit(4.0) * p_n / (S::PI() * len) * acc.value()
        }
    }
}

/// Validated front door for the closed forms.
pub fn expectation<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    t: S,
    kind: ObservableKind,
) -> Result<S> {
    if !t.is_finite() {
        return domain(format!("time must be finite, got {t}"));
    }
    Ok(match kind {
        ObservableKind::Position => exp_x(cfg, spec, t),
        ObservableKind::PositionSq => exp_x2(cfg, spec, t),
        ObservableKind::Momentum => exp_p(cfg, spec, t),
        ObservableKind::MomentumSq => exp_p2(cfg, spec),
    })
}
