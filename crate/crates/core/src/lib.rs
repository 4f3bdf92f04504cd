//! Verification engine for Heisenberg groups over local fields: irreducible
//! unitary representations, Fourier-Wigner transforms, and numerical/exact
//! checks of asymptotic Schur orthogonality over Folner box sequences.

pub mod error;
pub mod experiments;
pub mod field;
pub mod heisenberg;
pub mod reps;
pub mod schwartz;

pub use error::{Error, Result};
pub use experiments::{Caps, ExperimentReport, RadiusRecord, RadiusSchedule, Verdict};
pub use field::{
    ball_measure, char_ball_integral, frac_part, padic_abs, padic_valuation, pow_rational,
    radius_exponent, CycloNumber, FieldDesc, LocalScalar, RealValue, UnitPhase,
};
pub use schwartz::{chi, padic_indicator, ComplexValue, PadicBallChar, RealGrid, TestFunction};
