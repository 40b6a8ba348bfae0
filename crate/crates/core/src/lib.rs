//! Equally weighted wave packets in the infinite square well and their
//! classical counterparts.
//!
//! The packet superposes the levels `n−N ..= n+N` with equal weight. Its
//! averages of `x`, `x²`, `p`, `p²` are available in closed form
//! ([`expectations`]) and from first principles ([`oracle`]); the classical
//! bouncing particle is described by its sawtooth/square-wave Fourier
//! series and the Fejér means of those series ([`classical`]).
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix `f64`.

pub mod classical;
pub mod error;
pub mod expectations;
pub mod limit;
pub mod model;
pub mod optimizer;
pub mod oracle;
pub mod roots;
pub mod scalar;
pub mod sum;

pub use classical::{
    classical_reduced_uncertainty, fejer_momentum, fejer_momentum_sq, fejer_position,
    fejer_position_sq, fourier_partial_momentum, fourier_partial_position, gibbs_overshoot,
    sawtooth_position, square_momentum, ClassicalOrbit, Coordinate,
};
pub use error::{Error, Result};
pub use expectations::{
    exp_p, exp_p2, exp_p2_level_sum, exp_x, exp_x2, expectation, quasi_exp, quasi_exp_with,
    reduced_uncertainty, sample, uncertainty_product, ExpectationSample, ObservableKind,
    QuasiPairing,
};
pub use limit::{
    detuning_report, fixed_hbar_sequence, limit_sequence, DetuningReport, HalfWidthRule, LimitMode,
    LimitRow,
};
pub use model::{
    bohr_frequency, classical_period, energy, ewwp_wavefunction, packet_angular_frequency,
    stationary_wavefunction, PacketSpec, SpectralData, WellConfig,
};
pub use optimizer::{
    default_scan_grid, evaluation_time, fit_power_law, optimal_half_width, scan, turning_instant,
    EvalInstant, ScanFit, ScanRow, SearchRange,
};
pub use oracle::{
    default_grid_points, oracle_expectation, OracleMethod, OracleValue, QuadratureOracle,
};
pub use scalar::Scalar;
pub use sum::{compensated_sum, CompensatedSum};

pub type Well = WellConfig<f64>;
pub type Orbit = ClassicalOrbit<f64>;
pub type Spectral = SpectralData<f64>;
pub type Sample = ExpectationSample<f64>;
pub type Row = ScanRow<f64>;
pub type Limit = LimitRow<f64>;
pub type Detuning = DetuningReport<f64>;
pub type Oracle = QuadratureOracle<f64>;
