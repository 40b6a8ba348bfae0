//! First-principles packet averages, independent of the closed forms.
//!
//! Two routes:
//!
//! * [`QuadratureOracle`] samples `ψ(x, t)` on a uniform grid and integrates
//!   `ψ*·Ô·ψ` with the trapezoid rule. Momentum uses fourth-order central
//!   differences; the ghost points beyond each wall come from the odd
//!   reflection `ψ(−x) = −ψ(x)`, `ψ(a + x) = −ψ(a − x)` that every sine
//!   series obeys.
//! * [`OracleMethod::MatrixElements`] sums `c_j* c_k f_jk` over all ordered
//!   level pairs with the analytic integrals `f_jk = ∫ψ_j f ψ_k dx`.

use num_complex::Complex;

use crate::error::{domain, Result};
use crate::expectations::ObservableKind;
use crate::model::{stationary_unchecked, PacketSpec, WellConfig};
use crate::scalar::{turn_cos_sin, Scalar};
use crate::sum::CompensatedSum;

/// Smallest grid the quadrature route accepts.
pub const MIN_GRID_POINTS: usize = 512;

/// Samples per wavelength of the highest level below which a quadrature
/// result is flagged as under-resolved.
const RESOLVED_SAMPLES_PER_WAVELENGTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Quadrature { grid_points: usize },
    MatrixElements,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue<S> {
    pub value: S,
    /// False when the grid resolves the top level with fewer than 64
    /// samples per wavelength.
    pub well_resolved: bool,
}

/// 4096 points, or more when the highest level `n + N` needs them for
/// 128 samples per wavelength.
pub fn default_grid_points(spec: &PacketSpec) -> usize {
    let top = (spec.n() + spec.half_width()) as usize;
    4096usize.max(64 * top + 1)
}

/// Packet average of `kind` at time `t` by the chosen first-principles route.
pub fn oracle_expectation<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    t: S,
    kind: ObservableKind,
    method: OracleMethod,
) -> Result<OracleValue<S>> {
    match method {
        OracleMethod::Quadrature { grid_points } => {
            let oracle = QuadratureOracle::new(*cfg, *spec, grid_points)?;
            Ok(OracleValue {
                value: oracle.expectation(t, kind),
                well_resolved: oracle.well_resolved(),
            })
        }
        OracleMethod::MatrixElements => Ok(OracleValue {
            value: matrix_element_expectation(cfg, spec, t, kind),
            well_resolved: true,
        }),
    }
}

/// Quadrature route with the stationary states tabulated once, so repeated
/// evaluation at many instants only pays for the phase sums.
#[derive(Debug, Clone)]
pub struct QuadratureOracle<S> {
    cfg: WellConfig<S>,
    spec: PacketSpec,
    /// Grid nodes `x_i = a·i/M`, `i = 0..=M`.
    nodes: Vec<S>,
    /// `table[m][i] = ψ_{n−N+m}(x_i)`.
    table: Vec<Vec<S>>,
}

impl<S: Scalar> QuadratureOracle<S> {
    pub fn new(cfg: WellConfig<S>, spec: PacketSpec, grid_points: usize) -> Result<Self> {
        if grid_points < MIN_GRID_POINTS {
            return domain(format!(
                "quadrature grid needs at least {MIN_GRID_POINTS} points, got {grid_points}"
            ));
        }
        let intervals = grid_points - 1;
        let m = S::from_int(intervals as u64);
        let nodes: Vec<S> = (0..=intervals)
            .map(|i| cfg.width() * (S::from_int(i as u64) / m))
            .collect();
        let table = spec
            .levels()
            .map(|level| {
                nodes
                    .iter()
                    .map(|&x| stationary_unchecked(&cfg, level, x))
                    .collect()
            })
            .collect();
        Ok(Self {
            cfg,
            spec,
            nodes,
            table,
        })
    }

    pub fn with_default_grid(cfg: WellConfig<S>, spec: PacketSpec) -> Result<Self> {
        Self::new(cfg, spec, default_grid_points(&spec))
    }

    pub fn grid_points(&self) -> usize {
        self.nodes.len()
    }

    pub fn well_resolved(&self) -> bool {
        let top = (self.spec.n() + self.spec.half_width()) as usize;
        // wavelength of level m is 2a/m, so samples per wavelength = 2M/m
        2 * (self.nodes.len() - 1) >= RESOLVED_SAMPLES_PER_WAVELENGTH * top
    }

    fn step(&self) -> S {
        self.cfg.width() / S::from_int((self.nodes.len() - 1) as u64)
    }

    /// `ψ(x_i, t)` on the grid.
    pub fn wavefunction(&self, t: S) -> Vec<Complex<S>> {
        let tau = self.cfg.phase_cycles(t);
        let norm = S::one() / S::from_int(self.spec.len() as u64).sqrt();
        let coeffs: Vec<Complex<S>> = self
            .spec
            .levels()
            .map(|m| {
                let (cos, sin) = turn_cos_sin(m as u64 * m as u64, tau);
                Complex::new(cos * norm, -sin * norm)
            })
            .collect();
        let mut psi = vec![Complex::new(S::zero(), S::zero()); self.nodes.len()];
        for (c, row) in coeffs.iter().zip(&self.table) {
            for (p, &v) in psi.iter_mut().zip(row) {
                *p = *p + c * v;
            }
        }
        psi
    }

    fn trapezoid(&self, values: impl Iterator<Item = S>) -> S {
        let last = self.nodes.len() - 1;
        let mut acc = CompensatedSum::new();
        for (i, v) in values.enumerate() {
            if i == 0 || i == last {
                acc.add(v / S::two());
            } else {
                acc.add(v);
            }
        }
        acc.value() * self.step()
    }

    /// `∫|ψ|² dx`.
    pub fn norm(&self, t: S) -> S {
        let psi = self.wavefunction(t);
        self.trapezoid(psi.iter().map(|p| p.norm_sqr()))
    }

    pub fn expectation(&self, t: S, kind: ObservableKind) -> S {
        let psi = self.wavefunction(t);
        self.expectation_of(&psi, kind)
    }

    /// All four averages from one wavefunction evaluation, in
    /// [`ObservableKind::ALL`] order.
    pub fn expectations(&self, t: S) -> [S; 4] {
        let psi = self.wavefunction(t);
        ObservableKind::ALL.map(|k| self.expectation_of(&psi, k))
    }

    fn expectation_of(&self, psi: &[Complex<S>], kind: ObservableKind) -> S {
        let hbar = self.cfg.hbar();
        match kind {
            ObservableKind::Position => {
                self.trapezoid(psi.iter().zip(&self.nodes).map(|(p, &x)| x * p.norm_sqr()))
            }
            ObservableKind::PositionSq => self.trapezoid(
                psi.iter()
                    .zip(&self.nodes)
                    .map(|(p, &x)| x * x * p.norm_sqr()),
            ),
            ObservableKind::Momentum => {
                let d1 = first_derivative(psi, self.step());
                // Re(ψ* (−iℏ) ψ') = ℏ Im(ψ* ψ')
                hbar * self.trapezoid(psi.iter().zip(&d1).map(|(p, d)| (p.conj() * d).im))
            }
            ObservableKind::MomentumSq => self.spectral_momentum_sq(psi),
        }
    }

    /// `Σ_m |⟨ψ_m|ψ⟩|² p_m²` with the overlaps taken by quadrature over
    /// levels `1..=2(n+N)` (capped by the grid).
    fn spectral_momentum_sq(&self, psi: &[Complex<S>]) -> S {
        let top = (2 * (self.spec.n() + self.spec.half_width())).min((self.nodes.len() - 2) as u32);
        let mut acc = CompensatedSum::new();
        // ψ_m(x_i) = √(2/a)·sin(π·(m·i mod 2M)/M)
        let intervals = self.nodes.len() - 1;
        let amp = (S::two() / self.cfg.width()).sqrt();
        let turn: Vec<S> = (0..2 * intervals)
            .map(|k| amp * (S::PI() * S::from_int(k as u64) / S::from_int(intervals as u64)).sin())
            .collect();
        for m in 1..=top {
            let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
            for (i, p) in psi.iter().enumerate().take(intervals).skip(1) {
                let v = turn[(m as usize * i) % (2 * intervals)];
                re.add(p.re * v);
                im.add(p.im * v);
            }
            let h = self.step();
            let overlap = Complex::new(re.value() * h, im.value() * h);
            let pm = self.cfg.momentum_unchecked(m as u64);
            acc.add(overlap.norm_sqr() * pm * pm);
        }
        acc.value()
    }

    /// `⟨p²⟩ = −ℏ²∫ψ*ψ''` with the fourth-order second difference. Constant
    /// in time on this grid, but biased by `O(h⁴)` relative to the spectral
    /// value.
    pub fn momentum_sq_finite_difference(&self, t: S) -> S {
        let psi = self.wavefunction(t);
        let hbar = self.cfg.hbar();
        let d2 = second_derivative(&psi, self.step());
        -hbar * hbar * self.trapezoid(psi.iter().zip(&d2).map(|(p, d)| (p.conj() * d).re))
    }
}

/// Grid value with odd reflection through either wall.
fn reflected<S: Scalar>(psi: &[Complex<S>], i: isize) -> Complex<S> {
    let last = (psi.len() - 1) as isize;
    if i < 0 {
        -psi[(-i) as usize]
    } else if i > last {
        -psi[(2 * last - i) as usize]
    } else {
        psi[i as usize]
    }
}

fn first_derivative<S: Scalar>(psi: &[Complex<S>], h: S) -> Vec<Complex<S>> {
    let eight = S::lit(8.0);
    let denom = S::lit(12.0) * h;
    (0..psi.len() as isize)
        .map(|i| {
            let f = |o: isize| reflected(psi, i + o);
            (f(-2) - f(2) + (f(1) - f(-1)) * eight) / denom
        })
        .collect()
}

fn second_derivative<S: Scalar>(psi: &[Complex<S>], h: S) -> Vec<Complex<S>> {
    let sixteen = S::lit(16.0);
    let thirty = S::lit(30.0);
    let denom = S::lit(12.0) * h * h;
    (0..psi.len() as isize)
        .map(|i| {
            let f = |o: isize| reflected(psi, i + o);
            (-(f(2) + f(-2)) + (f(1) + f(-1)) * sixteen - f(0) * thirty) / denom
        })
        .collect()
}

/// Analytic `⟨ψ_j| f |ψ_k⟩` for the real-symmetric position operators, and
/// the coefficient `c` in `p_jk = −i·c`.
fn matrix_element<S: Scalar>(cfg: &WellConfig<S>, j: u32, k: u32, kind: ObservableKind) -> S {
    let a = cfg.width();
    let pi2 = S::PI() * S::PI();
    let (jf, kf) = (S::from_int(j as u64), S::from_int(k as u64));
    let odd_sum = (j + k) % 2 == 1;
    match kind {
        ObservableKind::Position => {
            if j == k {
                a / S::two()
            } else if odd_sum {
                let diff = jf - kf;
                let sum = jf + kf;
                (a / pi2) * (-S::two() / (diff * diff) + S::two() / (sum * sum))
            } else {
                S::zero()
            }
        }
        ObservableKind::PositionSq => {
            if j == k {
                a * a / S::lit(3.0) - a * a / (S::two() * pi2 * jf * jf)
            } else {
                let diff = jf - kf;
                let sum = jf + kf;
                let sign = if odd_sum { -S::one() } else { S::one() };
                S::two() * a * a / pi2 * sign * (S::one() / (diff * diff) - S::one() / (sum * sum))
            }
        }
        ObservableKind::Momentum => {
            if j != k && odd_sum {
                S::lit(4.0) * cfg.hbar() * jf * kf / (a * (jf * jf - kf * kf))
            } else {
                S::zero()
            }
        }
        ObservableKind::MomentumSq => {
            if j == k {
                let p = cfg.momentum_unchecked(j as u64);
                p * p
            } else {
                S::zero()
            }
        }
    }
}

fn matrix_element_expectation<S: Scalar>(
    cfg: &WellConfig<S>,
    spec: &PacketSpec,
    t: S,
    kind: ObservableKind,
) -> S {
    let tau = cfg.phase_cycles(t);
    let mut acc = CompensatedSum::new();
    for j in spec.levels() {
        for k in spec.levels() {
            let f = matrix_element(cfg, j, k, kind);
            if f == S::zero() {
                continue;
            }
            // c_j* c_k ∝ exp(+i(E_j − E_k)t/ℏ)
            let (q, sign) = if j >= k {
                (j as u64 * j as u64 - k as u64 * k as u64, S::one())
            } else {
                (k as u64 * k as u64 - j as u64 * j as u64, -S::one())
            };
            let (cos, sin) = turn_cos_sin(q, tau);
            let sin = sin * sign;
            acc.add(match kind {
                // Re[e^{iθ}·(−i c)] = c·sin θ
                ObservableKind::Momentum => f * sin,
                _ => f * cos,
            });
        }
    }
    acc.value() / S::from_int(spec.len() as u64)
}
