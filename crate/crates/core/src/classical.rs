//! The classical bouncing orbit, its Fourier partial sums and Fejér means.
//!
//! The particle starts at the left wall at `t = 0` moving right with speed
//! `p_c/μ`, so position is a triangle ("sawtooth") wave on `[0, a]` and
//! momentum a square wave of amplitude `p_c`. Fourier expansions:
//!
//! ```text
//! x(t) = a/2 − (4a/π²) Σ_{odd d} cos(dωt)/d²
//! p(t) = (4p_c/π) Σ_{odd d} sin(dωt)/d
//! x²(t) = a²/3 + (4a²/π²) Σ_{r≥1} (−1)^r cos(rωt)/r²
//! ```
//!
//! The Fejér means below carry the packet's normalisation `1/(2N+1)` and the
//! double-sum layout `Σ_l Σ_{r≤l}`; the inner sums are accumulated once as
//! running partial sums, so each evaluation costs `O(N)`.

use crate::error::{domain, Error, Result};
use crate::model::WellConfig;
use crate::scalar::{frac, turn_cos, turn_sin, Scalar};
use crate::sum::CompensatedSum;

/// Position or momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coordinate {
    Position,
    Momentum,
}

/// Classical periodic motion between the walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalOrbit<S> {
    width: S,
    momentum: S,
    mass: S,
}

impl<S: Scalar> ClassicalOrbit<S> {
    pub fn new(width: S, momentum: S, mass: S) -> Result<Self> {
        for (name, v) in [("width", width), ("momentum", momentum), ("mass", mass)] {
            if !(v > S::zero() && v.is_finite()) {
                return domain(format!("orbit {name} must be finite and positive, got {v}"));
            }
        }
        Ok(Self {
            width,
            momentum,
            mass,
        })
    }

    /// Orbit whose momentum equals `p_n` of level `n`.
    pub fn matched(cfg: &WellConfig<S>, n: u32) -> Result<Self> {
        if n == 0 {
            return domain("quantum number must be at least 1");
        }
        Self::new(cfg.width(), cfg.momentum_unchecked(n as u64), cfg.mass())
    }

    pub fn width(&self) -> S {
        self.width
    }

    /// `p_c`.
    pub fn momentum(&self) -> S {
        self.momentum
    }

    pub fn mass(&self) -> S {
        self.mass
    }

    /// `T = 2aμ/p_c`.
    pub fn period(&self) -> S {
        S::two() * self.width * self.mass / self.momentum
    }

    /// `ω = 2π/T`.
    pub fn angular_frequency(&self) -> S {
        S::TAU() / self.period()
    }

    /// `t/T` reduced to `[0, 1)`.
    fn cycles(&self, t: S) -> S {
        frac(t / self.period())
    }
}

/// Triangle-wave position: `aωt/π` on the outbound half, `2a − aωt/π` back.
pub fn sawtooth_position<S: Scalar>(orbit: &ClassicalOrbit<S>, t: S) -> S {
    let c = orbit.cycles(t);
    let a = orbit.width;
    if c <= S::half() {
        S::two() * a * c
    } else {
        S::two() * a * (S::one() - c)
    }
}

/// Square-wave momentum, zero exactly at the turning points.
pub fn square_momentum<S: Scalar>(orbit: &ClassicalOrbit<S>, t: S) -> S {
    let c = orbit.cycles(t);
    if c == S::zero() || c == S::half() {
        S::zero()
    } else if c < S::half() {
        orbit.momentum
    } else {
        -orbit.momentum
    }
}

/// Partial sum of the position series through harmonic `2m+1`.
pub fn fourier_partial_position<S: Scalar>(orbit: &ClassicalOrbit<S>, m: u32, t: S) -> S {
    let c = orbit.cycles(t);
    let series: CompensatedSum<S> = (0..=m as u64)
        .map(|r| {
            let d = 2 * r + 1;
            turn_cos(d, c) / S::from_int(d * d)
        })
        .collect();
    let a = orbit.width;
    a / S::two() - S::lit(4.0) * a / (S::PI() * S::PI()) * series.value()
}

/// Partial sum of the momentum series through harmonic `2m+1`.
pub fn fourier_partial_momentum<S: Scalar>(orbit: &ClassicalOrbit<S>, m: u32, t: S) -> S {
    let c = orbit.cycles(t);
    let series: CompensatedSum<S> = (0..=m as u64)
        .map(|r| {
            let d = 2 * r + 1;
            turn_sin(d, c) / S::from_int(d)
        })
        .collect();
    S::lit(4.0) * orbit.momentum / S::PI() * series.value()
}

/// Peak of the truncated momentum series next to the jump at `t = 0`,
/// in units of `p_c`.
///
/// The first lobe of the partial sum peaks inside `0 < ωt ≤ π/(2m+1)`; that
/// window is sampled on 1000 points and the best sample is polished with a
/// golden-section search.
pub fn gibbs_overshoot<S: Scalar>(orbit: &ClassicalOrbit<S>, m: u32) -> Result<S> {
    if m == 0 {
        return domain("Gibbs overshoot needs at least two harmonics (m ≥ 1)");
    }
    let omega = orbit.angular_frequency();
    let lobe = S::PI() / (S::from_int(2 * m as u64 + 1) * omega);
    let f = |t: S| fourier_partial_momentum(orbit, m, t);
    let samples = 1000u64;
    let step = lobe / S::from_int(samples);
    let (mut best_t, mut best) = (step, f(step));
    for i in 2..=samples {
        let t = step * S::from_int(i);
        let v = f(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let lo = (best_t - step).max(S::zero());
    let hi = best_t + step;
    let (_, peak) = crate::roots::golden_max(f, lo, hi, 80);
    Ok(peak.max(best) / orbit.momentum)
}

/// Fejér mean of the position series:
/// `a/2 − (8a/π²)/(2N+1) Σ_{l=0}^{N−1} Σ_{r=0}^{l} cos((2r+1)ωt)/(2r+1)²`.
pub fn fejer_position<S: Scalar>(orbit: &ClassicalOrbit<S>, order: u32, t: S) -> S {
    let a = orbit.width;
    let c = orbit.cycles(t);
    let mut inner = CompensatedSum::new();
    let mut outer = CompensatedSum::new();
    for l in 0..order as u64 {
        let d = 2 * l + 1;
        inner.add(turn_cos(d, c) / S::from_int(d * d));
        outer.add(inner.value());
    }
    let scale = S::lit(8.0) * a / (S::PI() * S::PI() * S::from_int(2 * order as u64 + 1));
    a / S::two() - scale * outer.value()
}

/// Fejér mean of `x²`:
/// `a²/3 + (4a²/π²)/(2N+1) Σ_{l=1}^{2N} Σ_{r=1}^{l} (−1)^r cos(rωt)/r²`.
pub fn fejer_position_sq<S: Scalar>(orbit: &ClassicalOrbit<S>, order: u32, t: S) -> S {
    let a = orbit.width;
    let c = orbit.cycles(t);
    let mut inner = CompensatedSum::new();
    let mut outer = CompensatedSum::new();
    for r in 1..=2 * order as u64 {
        let term = turn_cos(r, c) / S::from_int(r * r);
        inner.add(if r % 2 == 1 { -term } else { term });
        outer.add(inner.value());
    }
    let scale = S::lit(4.0) * a * a / (S::PI() * S::PI() * S::from_int(2 * order as u64 + 1));
    a * a / S::lit(3.0) + scale * outer.value()
}

/// `μ d/dt` of [`fejer_position`]:
/// `(8p_c/π)/(2N+1) Σ_{l=0}^{N−1} Σ_{r=0}^{l} sin((2r+1)ωt)/(2r+1)`.
pub fn fejer_momentum<S: Scalar>(orbit: &ClassicalOrbit<S>, order: u32, t: S) -> S {
    let c = orbit.cycles(t);
    let mut inner = CompensatedSum::new();
    let mut outer = CompensatedSum::new();
    for l in 0..order as u64 {
        let d = 2 * l + 1;
        inner.add(turn_sin(d, c) / S::from_int(d));
        outer.add(inner.value());
    }
    let scale = S::lit(8.0) * orbit.momentum / (S::PI() * S::from_int(2 * order as u64 + 1));
    scale * outer.value()
}

/// The square wave squared is the constant `p_c²`.
pub fn fejer_momentum_sq<S: Scalar>(orbit: &ClassicalOrbit<S>) -> S {
    orbit.momentum * orbit.momentum
}

/// `δ′f = √(1 − F⟨f⟩²/F⟨f²⟩)`, clamped into `[0, 1]`.
pub fn classical_reduced_uncertainty<S: Scalar>(
    orbit: &ClassicalOrbit<S>,
    kind: Coordinate,
    order: u32,
    t: S,
) -> Result<S> {
    let (mean, mean_sq) = match kind {
        Coordinate::Position => (
            fejer_position(orbit, order, t),
            fejer_position_sq(orbit, order, t),
        ),
        Coordinate::Momentum => (fejer_momentum(orbit, order, t), fejer_momentum_sq(orbit)),
    };
    reduced_spread(mean, mean_sq)
}

pub(crate) fn reduced_spread<S: Scalar>(mean: S, mean_sq: S) -> Result<S> {
    if !(mean_sq > S::zero()) {
        return Err(Error::Domain(format!(
            "second moment must be positive for a reduced uncertainty, got {mean_sq}"
        )));
    }
    let v = S::one() - mean * mean / mean_sq;
    Ok(v.max(S::zero()).min(S::one()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn unit() -> ClassicalOrbit<f64> {
        ClassicalOrbit::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn orbit_validation() {
        assert!(ClassicalOrbit::new(1.0, 0.0, 1.0).is_err());
        let o = ClassicalOrbit::matched(&WellConfig::<f64>::natural(), 500).unwrap();
        assert_abs_diff_eq!(o.momentum(), 500.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(
            o.period() * o.angular_frequency(),
            2.0 * PI,
            epsilon = 1e-15
        );
    }

    #[test]
    fn sawtooth_landmarks() {
        let o = ClassicalOrbit::new(2.0, 3.0, 0.5).unwrap();
        let tp = o.period();
        assert_eq!(sawtooth_position(&o, 0.0), 0.0);
        assert_abs_diff_eq!(sawtooth_position(&o, tp / 4.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sawtooth_position(&o, tp / 2.0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sawtooth_position(&o, 1.75 * tp), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sawtooth_position(&o, -0.25 * tp), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn square_landmarks() {
        let o = unit();
        let tp = o.period();
        assert_eq!(square_momentum(&o, tp / 4.0), 1.0);
        assert_eq!(square_momentum(&o, 3.0 * tp / 4.0), -1.0);
        assert_eq!(square_momentum(&o, tp / 2.0), 0.0);
        assert_eq!(square_momentum(&o, 0.0), 0.0);
    }

    #[test]
    fn partial_position_values() {
        let o = unit();
        let tp = o.period();
        assert_abs_diff_eq!(
            fourier_partial_position(&o, 0, 0.0),
            0.5 - 4.0 / (PI * PI),
            epsilon = 1e-15
        );
        for m in [0, 3, 40] {
            assert_abs_diff_eq!(
                fourier_partial_position(&o, m, tp / 4.0),
                0.5,
                epsilon = 1e-14
            );
        }
        assert!(fourier_partial_position(&o, 200, 0.0).abs() < 1e-3);
    }

    #[test]
    fn partial_momentum_values() {
        let o = unit();
        let tp = o.period();
        assert_eq!(fourier_partial_momentum(&o, 17, 0.0), 0.0);
        assert_abs_diff_eq!(
            fourier_partial_momentum(&o, 0, tp / 4.0),
            4.0 / PI,
            epsilon = 1e-15
        );
        assert!((fourier_partial_momentum(&o, 200, tp / 4.0) - 1.0).abs() < 5e-3);
    }

    #[test]
    fn fejer_position_values() {
        let o = unit();
        let tp = o.period();
        assert_abs_diff_eq!(
            fejer_position(&o, 1, 0.0),
            0.5 - 8.0 / (3.0 * PI * PI),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(fejer_position(&o, 1, 0.0), 0.229_810, epsilon = 1e-6);
        assert_eq!(fejer_position(&o, 0, 0.3), 0.5);
        for n in [1, 7, 23, 200] {
            assert_abs_diff_eq!(fejer_position(&o, n, tp / 4.0), 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn fejer_position_sq_values() {
        let o = unit();
        let tp = o.period();
        // N = 1 enumerated by hand: l = 1 → −1; l = 2 → −1 + 1/4.
        assert_abs_diff_eq!(
            fejer_position_sq(&o, 1, 0.0),
            1.0 / 3.0 + 4.0 / (3.0 * PI * PI) * (-1.75),
            epsilon = 1e-15
        );
        assert_eq!(fejer_position_sq(&o, 0, 0.1), 1.0 / 3.0);
        let v = fejer_position_sq(&o, 200, tp / 4.0);
        assert!((v - 0.25).abs() / 0.25 < 0.01, "{v}");
        // period average by a 4096-point rectangle rule (exact for the
        // trigonometric polynomial)
        let m = 4096;
        let avg: f64 = (0..m)
            .map(|i| fejer_position_sq(&o, 23, tp * i as f64 / m as f64))
            .sum::<f64>()
            / m as f64;
        assert_abs_diff_eq!(avg, 1.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn fejer_momentum_values() {
        let o = ClassicalOrbit::matched(&WellConfig::<f64>::natural(), 500).unwrap();
        let tp = o.period();
        let pc = o.momentum();
        assert_eq!(fejer_momentum(&o, 23, 0.0), 0.0);
        assert_eq!(fejer_momentum(&o, 0, 0.3), 0.0);
        let mid = fejer_momentum(&o, 23, tp / 4.0);
        assert!(mid >= 0.9 * pc && mid <= pc, "{}", mid / pc);
        assert_abs_diff_eq!(fejer_momentum_sq(&o), 250_000.0 * PI * PI, epsilon = 1e-6);
    }

    #[test]
    fn fejer_momentum_is_derivative_of_position() {
        let o = ClassicalOrbit::new(1.3, 2.0, 0.7).unwrap();
        let tp = o.period();
        for n in [1, 5, 23] {
            for k in 0..16 {
                let t = tp * (k as f64 + 0.31) / 16.0;
                let fd = |h: f64| {
                    (fejer_position(&o, n, t + h) - fejer_position(&o, n, t - h)) * o.mass()
                        / (2.0 * h)
                };
                let exact = fejer_momentum(&o, n, t);
                let e1 = (fd(tp * 1e-3) - exact).abs();
                let e2 = (fd(tp * 5e-4) - exact).abs();
                // second order: halving h quarters the error
                assert!(e2 < 0.3 * e1 + 1e-9, "n={n} t={t} {e1} {e2}");
                assert!((fd(tp * 1e-6) - exact).abs() < 1e-6 * o.momentum());
            }
        }
    }

    #[test]
    fn reduced_uncertainty_landmarks() {
        let o = ClassicalOrbit::matched(&WellConfig::<f64>::natural(), 500).unwrap();
        let tp = o.period();
        assert_eq!(
            classical_reduced_uncertainty(&o, Coordinate::Momentum, 23, 0.0).unwrap(),
            1.0
        );
        let dx = classical_reduced_uncertainty(&o, Coordinate::Position, 23, tp / 4.0).unwrap();
        assert!(dx > 0.0 && dx < 1.0);
        assert!(reduced_spread(0.0, 0.0).is_err());
    }

    #[test]
    fn gibbs_overshoot_rejects_zero_order() {
        assert!(gibbs_overshoot(&unit(), 0).is_err());
    }
}
