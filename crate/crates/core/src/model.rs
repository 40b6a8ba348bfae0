//! Infinite square well: configuration, spectrum and the equally weighted
//! wave packet (EWWP).
//!
//! The well occupies `0 ≤ x ≤ a`. Stationary states are
//! `ψ_m(x) = √(2/a) sin(mπx/a)` with energies `E_m = p_m²/(2μ)`,
//! `p_m = mπℏ/a`. The packet superposes the `2N+1` consecutive levels
//! `n-N ..= n+N`, each with amplitude `1/√(2N+1)` and phase `exp(-iE_m t/ℏ)`.

use num_complex::Complex;

use crate::error::{domain, Result};
use crate::scalar::{frac, turn_cos_sin, Scalar};
use crate::sum::CompensatedSum;

/// Physical parameters of the well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellConfig<S> {
    width: S,
    mass: S,
    hbar: S,
}

impl<S: Scalar> WellConfig<S> {
    pub fn new(width: S, mass: S, hbar: S) -> Result<Self> {
        for (name, v) in [("width", width), ("mass", mass), ("hbar", hbar)] {
            if !(v > S::zero() && v.is_finite()) {
                return domain(format!("{name} must be finite and positive, got {v}"));
            }
        }
        Ok(Self { width, mass, hbar })
    }

    /// `a = μ = ℏ = 1`.
    pub fn natural() -> Self {
        Self {
            width: S::one(),
            mass: S::one(),
            hbar: S::one(),
        }
    }

    pub fn width(&self) -> S {
        self.width
    }

    pub fn mass(&self) -> S {
        self.mass
    }

    pub fn hbar(&self) -> S {
        self.hbar
    }

    /// Copy with a different Planck constant.
    pub fn with_hbar(&self, hbar: S) -> Result<Self> {
        Self::new(self.width, self.mass, hbar)
    }

    /// `|p_m| = mπℏ/a`; level index is not validated.
    pub(crate) fn momentum_unchecked(&self, m: u64) -> S {
        S::from_int(m) * S::PI() * self.hbar / self.width
    }

    /// Reduced time `ℏπt/(4μa²)` in cycles: the phase of level `m` is
    /// `2π·m²·τ` and a Bohr frequency `ω_jk` advances `2π(j²−k²)τ`.
    pub(crate) fn phase_cycles(&self, t: S) -> S {
        frac(self.hbar * S::PI() * t / (S::lit(4.0) * self.mass * self.width * self.width))
    }
}

impl<S: Scalar> Default for WellConfig<S> {
    fn default() -> Self {
        Self::natural()
    }
}

/// The packet descriptor: central level `n` and half-width `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PacketSpec {
    n: u32,
    half_width: u32,
}

impl PacketSpec {
    /// Requires `n ≥ 1` and `N < n`, so every level `n-N ..= n+N` exists.
    pub fn new(n: u32, half_width: u32) -> Result<Self> {
        if n == 0 {
            return domain("central quantum number n must be at least 1");
        }
        if half_width >= n {
            return domain(format!(
                "half-width N = {half_width} must be smaller than n = {n}"
            ));
        }
        Ok(Self { n, half_width })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `N`.
    pub fn half_width(&self) -> u32 {
        self.half_width
    }

    /// Number of superposed levels, `2N+1`.
    pub fn len(&self) -> u32 {
        2 * self.half_width + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Superposed levels in increasing order.
    pub fn levels(&self) -> std::ops::RangeInclusive<u32> {
        (self.n - self.half_width)..=(self.n + self.half_width)
    }
}

/// Classical-correspondence quantities attached to level `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData<S> {
    /// `p_n = nπℏ/a`.
    pub p_n: S,
    /// Classical momentum magnitude matched to the level, `p_c = p_n`.
    pub p_c: S,
    /// `E_n`.
    pub energy: S,
    /// `T = 2aμ/p_c`.
    pub period: S,
    /// `ω = 2π/T`.
    pub omega: S,
    /// `ω_n = πp_n/(μa) = nℏπ²/(μa²)`.
    pub omega_n: S,
}

impl<S: Scalar> SpectralData<S> {
    pub fn new(cfg: &WellConfig<S>, n: u32) -> Result<Self> {
        check_level(n)?;
        let p_n = cfg.momentum_unchecked(n as u64);
        let period = classical_period(cfg, n)?;
        Ok(Self {
            p_n,
            p_c: p_n,
            energy: energy(cfg, n)?,
            period,
            omega: S::TAU() / period,
            omega_n: packet_angular_frequency(cfg, n)?,
        })
    }
}

fn check_level(m: u32) -> Result<()> {
    if m == 0 {
        return domain("quantum number must be at least 1");
    }
    Ok(())
}

/// `E_m = (mπℏ/a)²/(2μ)`.
pub fn energy<S: Scalar>(cfg: &WellConfig<S>, m: u32) -> Result<S> {
    check_level(m)?;
    let p = cfg.momentum_unchecked(m as u64);
    Ok(p * p / (S::two() * cfg.mass))
}

/// Classical period at momentum `p_n`: `T = 2a²μ/(nπℏ)`.
pub fn classical_period<S: Scalar>(cfg: &WellConfig<S>, n: u32) -> Result<S> {
    check_level(n)?;
    Ok(S::two() * cfg.width * cfg.mass / cfg.momentum_unchecked(n as u64))
}

/// `ω_n = nℏπ²/(μa²)`.
pub fn packet_angular_frequency<S: Scalar>(cfg: &WellConfig<S>, n: u32) -> Result<S> {
    check_level(n)?;
    Ok(S::PI() * cfg.momentum_unchecked(n as u64) / (cfg.mass * cfg.width))
}

/// Bohr angular frequency `(E_j − E_k)/ℏ`.
pub fn bohr_frequency<S: Scalar>(cfg: &WellConfig<S>, j: u32, k: u32) -> Result<S> {
    Ok((energy(cfg, j)? - energy(cfg, k)?) / cfg.hbar)
}

fn check_position<S: Scalar>(cfg: &WellConfig<S>, x: S) -> Result<()> {
    if !(x >= S::zero() && x <= cfg.width) {
        return domain(format!("position {x} outside the well [0, {}]", cfg.width));
    }
    Ok(())
}

/// `ψ_m(x) = √(2/a) sin(mπx/a)`.
pub fn stationary_wavefunction<S: Scalar>(cfg: &WellConfig<S>, m: u32, x: S) -> Result<S> {
    check_level(m)?;
    check_position(cfg, x)?;
    Ok(stationary_unchecked(cfg, m, x))
}

pub(crate) fn stationary_unchecked<S: Scalar>(cfg: &WellConfig<S>, m: u32, x: S) -> S {
    // sin(mπx/a) with the argument reduced to half-turns so that the walls
    // give exact zeros.
    let half_turns = S::from_int(m as u64) * x / cfg.width;
    let mut r = half_turns - S::two() * (half_turns / S::two()).floor();
    let mut sign = S::one();
    if r >= S::one() {
        r = r - S::one();
        sign = -sign;
    }
    let r = r.min(S::one() - r);
    sign * (S::two() / cfg.width).sqrt() * (S::PI() * r).sin()
}

/// Packet amplitude `ψ(x, t)` as `(re, im)`.
pub fn ewwp_wavefunction<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    x: S,
    t: S,
) -> Result<Complex<S>> {
    check_position(cfg, x)?;
    let cycles = cfg.phase_cycles(t);
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for m in spec.levels() {
        let amp = stationary_unchecked(cfg, m, x);
        let (cos, sin) = turn_cos_sin((m as u64) * (m as u64), cycles);
        // exp(-iE t/ℏ)
        re.add(amp * cos);
        im.add(-amp * sin);
    }
    let norm = S::from_int(spec.len() as u64).sqrt();
    Ok(Complex::new(re.value() / norm, im.value() / norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    type W = WellConfig<f64>;

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(W::new(0.0, 1.0, 1.0).is_err());
        assert!(W::new(1.0, -1.0, 1.0).is_err());
        assert!(W::new(1.0, 1.0, f64::NAN).is_err());
        assert_eq!(W::default(), W::new(1.0, 1.0, 1.0).unwrap());
    }

    #[test]
    fn packet_constraint() {
        assert!(PacketSpec::new(0, 0).is_err());
        assert!(PacketSpec::new(5, 5).is_err());
        let s = PacketSpec::new(5, 4).unwrap();
        assert_eq!(
            s.levels().collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5, 6, 7, 8, 9]
        );
        assert_eq!(s.len(), 9);
    }

    #[test]
    fn energies() {
        let w = W::natural();
        assert_relative_eq!(energy(&w, 1).unwrap(), PI * PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(
            energy(&w, 500).unwrap(),
            (500.0 * PI).powi(2) / 2.0,
            max_relative = 1e-15
        );
        assert!(energy(&w, 0).is_err());
    }

    #[test]
    fn periods() {
        let w = W::natural();
        assert_relative_eq!(
            classical_period(&w, 100).unwrap(),
            2.0 / (100.0 * PI),
            max_relative = 1e-15
        );
        let w2 = W::new(2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            classical_period(&w2, 10).unwrap(),
            8.0 / (10.0 * PI),
            max_relative = 1e-15
        );
        assert!(classical_period(&w, 0).is_err());
    }

    #[test]
    fn spectral_identities() {
        let w = W::new(1.7, 0.3, 2.1).unwrap();
        let sd = SpectralData::new(&w, 37).unwrap();
        assert_relative_eq!(sd.period * sd.omega, 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sd.omega_n * sd.period, 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(
            sd.energy,
            sd.p_n * sd.p_n / (2.0 * 0.3),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            sd.omega_n,
            37.0 * 2.1 * PI * PI / (0.3 * 1.7 * 1.7),
            max_relative = 1e-14
        );
    }

    #[test]
    fn stationary_values() {
        let w = W::natural();
        assert_relative_eq!(
            stationary_wavefunction(&w, 1, 0.5).unwrap(),
            2f64.sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            stationary_wavefunction(&w, 3, 1.0 / 6.0).unwrap(),
            2f64.sqrt(),
            max_relative = 1e-14
        );
        for m in [1, 7, 500] {
            assert_eq!(stationary_wavefunction(&w, m, 0.0).unwrap(), 0.0);
            assert_eq!(stationary_wavefunction(&w, m, 1.0).unwrap(), 0.0);
        }
        assert!(stationary_wavefunction(&w, 1, 1.01).is_err());
        assert!(stationary_wavefunction(&w, 1, -0.01).is_err());
    }

    #[test]
    fn packet_wall_and_reality() {
        let w = W::natural();
        let spec = PacketSpec::new(50, 7).unwrap();
        assert_eq!(ewwp_wavefunction(&w, &spec, 0.0, 0.37).unwrap().norm(), 0.0);
        for x in [0.1, 0.33, 0.9] {
            assert_eq!(ewwp_wavefunction(&w, &spec, x, 0.0).unwrap().im, 0.0);
        }
    }

    #[test]
    fn single_state_modulus_is_static() {
        let w = W::natural();
        let spec = PacketSpec::new(5, 0).unwrap();
        let x = 0.23;
        let psi5 = stationary_wavefunction(&w, 5, x).unwrap();
        for t in [0.0, 0.01, 0.7, 13.0] {
            let v = ewwp_wavefunction(&w, &spec, x, t).unwrap();
            assert_relative_eq!(v.norm(), psi5.abs(), max_relative = 1e-13);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let w = WellConfig::<f32>::natural();
        let e = energy(&w, 3).unwrap();
        assert!((e - 9.0 * std::f32::consts::PI.powi(2) / 2.0).abs() < 1e-5);
    }
}
