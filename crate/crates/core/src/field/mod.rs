//! Scalar arithmetic for the two supported local fields: the reals and the
//! p-adic numbers. p-adic scalars are exact rationals (dense in Q_p), so
//! every valuation, absolute value, character value and ball measure on that
//! path is computed exactly.

mod cyclo;

pub use cyclo::CycloNumber;

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Which local field we are working over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldDesc {
    Real,
    Padic { p: u64 },
}

impl FieldDesc {
    pub fn padic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        Ok(FieldDesc::Padic { p })
    }

    pub fn is_padic(&self) -> bool {
        matches!(self, FieldDesc::Padic { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FieldDesc::Real => "real",
            FieldDesc::Padic { .. } => "p-adic",
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A scalar of the active field.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalScalar {
    Real(f64),
    Padic { p: u64, value: BigRational },
}

impl LocalScalar {
    pub fn real(x: f64) -> Self {
        LocalScalar::Real(x)
    }

    pub fn padic(p: u64, value: BigRational) -> Self {
        LocalScalar::Padic { p, value }
    }

    pub fn field(&self) -> FieldDesc {
        match self {
            LocalScalar::Real(_) => FieldDesc::Real,
            LocalScalar::Padic { p, .. } => FieldDesc::Padic { p: *p },
        }
    }

    /// p-adic valuation; `None` encodes +infinity (the zero scalar).
    pub fn valuation(&self) -> Result<Option<i64>> {
        match self {
            LocalScalar::Real(_) => Err(Error::UnsupportedOperation("valuation", "real")),
            LocalScalar::Padic { p, value } => Ok(padic_valuation(*p, value)),
        }
    }

    /// The normalized absolute value: usual |x| on R, p^{-v(x)} on Q_p.
    pub fn abs(&self) -> RealValue {
        match self {
            LocalScalar::Real(x) => RealValue::Approx(x.abs()),
            LocalScalar::Padic { p, value } => RealValue::Exact(padic_abs(*p, value)),
        }
    }

    pub fn zero(field: FieldDesc) -> Self {
        match field {
            FieldDesc::Real => LocalScalar::Real(0.0),
            FieldDesc::Padic { p } => LocalScalar::Padic {
                p,
                value: BigRational::zero(),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LocalScalar::Real(x) => *x == 0.0,
            LocalScalar::Padic { value, .. } => value.is_zero(),
        }
    }

    pub fn add(&self, other: &LocalScalar) -> Result<LocalScalar> {
        match (self, other) {
            (LocalScalar::Real(x), LocalScalar::Real(y)) => Ok(LocalScalar::Real(x + y)),
            (LocalScalar::Padic { p, value: x }, LocalScalar::Padic { p: q, value: y })
                if p == q =>
            {
                Ok(LocalScalar::Padic {
                    p: *p,
                    value: x + y,
                })
            }
            _ => Err(Error::FieldMismatch("scalar addition across fields".into())),
        }
    }

    pub fn neg(&self) -> LocalScalar {
        match self {
            LocalScalar::Real(x) => LocalScalar::Real(-x),
            LocalScalar::Padic { p, value } => LocalScalar::Padic {
                p: *p,
                value: -value,
            },
        }
    }

    pub fn sub(&self, other: &LocalScalar) -> Result<LocalScalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LocalScalar) -> Result<LocalScalar> {
        match (self, other) {
            (LocalScalar::Real(x), LocalScalar::Real(y)) => Ok(LocalScalar::Real(x * y)),
            (LocalScalar::Padic { p, value: x }, LocalScalar::Padic { p: q, value: y })
                if p == q =>
            {
                Ok(LocalScalar::Padic {
                    p: *p,
                    value: x * y,
                })
            }
            _ => Err(Error::FieldMismatch(
                "scalar multiplication across fields".into(),
            )),
        }
    }

    /// Whether |x| <= r in the field's normalized absolute value.
    pub fn in_ball(&self, r: &RealValue) -> Result<bool> {
        match (self, r) {
            (LocalScalar::Real(x), rv) => Ok(x.abs() <= rv.to_f64()),
            (LocalScalar::Padic { p, value }, RealValue::Exact(r)) => {
                Ok(padic_abs(*p, value) <= *r)
            }
            (LocalScalar::Padic { .. }, RealValue::Approx(_)) => Err(Error::InvalidRadius(
                "p-adic radii must be exact".into(),
            )),
        }
    }

    /// The fixed additive character: e^{2 pi i x} on R, e^{2 pi i {x}_p} on Q_p.
    pub fn char(&self) -> UnitPhase {
        match self {
            LocalScalar::Real(x) => UnitPhase::Approx(x.rem_euclid(1.0)),
            LocalScalar::Padic { p, value } => UnitPhase::Exact {
                p: *p,
                theta: frac_part(*p, value),
            },
        }
    }
}

/// A nonnegative quantity that is exact on the p-adic path and floating on
/// the real path.
#[derive(Debug, Clone, PartialEq)]
pub enum RealValue {
    Exact(BigRational),
    Approx(f64),
}

impl RealValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            RealValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            RealValue::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            RealValue::Exact(q) => Some(q),
            RealValue::Approx(_) => None,
        }
    }
}

/// An exact unit-modulus complex number e^{2 pi i theta}.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitPhase {
    /// theta rational in [0,1) with denominator a power of p.
    Exact { p: u64, theta: BigRational },
    /// theta in turns, real path.
    Approx(f64),
}

impl UnitPhase {
    pub fn one_padic(p: u64) -> Self {
        UnitPhase::Exact {
            p,
            theta: BigRational::zero(),
        }
    }

    pub fn theta_f64(&self) -> f64 {
        match self {
            UnitPhase::Exact { theta, .. } => theta.to_f64().unwrap_or(f64::NAN),
            UnitPhase::Approx(t) => *t,
        }
    }

    pub fn mul(&self, other: &UnitPhase) -> Result<UnitPhase> {
        match (self, other) {
            (UnitPhase::Exact { p, theta }, UnitPhase::Exact { p: q, theta: eta }) if p == q => {
                let mut t = theta + eta;
                if t >= BigRational::one() {
                    t -= BigRational::one();
                }
                Ok(UnitPhase::Exact { p: *p, theta: t })
            }
            (UnitPhase::Approx(a), UnitPhase::Approx(b)) => {
                Ok(UnitPhase::Approx((a + b).rem_euclid(1.0)))
            }
            _ => Err(Error::FieldMismatch("phase product across fields".into())),
        }
    }

    pub fn conj(&self) -> UnitPhase {
        match self {
            UnitPhase::Exact { p, theta } => {
                let t = if theta.is_zero() {
                    BigRational::zero()
                } else {
                    BigRational::one() - theta
                };
                UnitPhase::Exact { p: *p, theta: t }
            }
            UnitPhase::Approx(t) => UnitPhase::Approx((-t).rem_euclid(1.0)),
        }
    }

    pub fn to_c64(&self) -> num::complex::Complex64 {
        let t = self.theta_f64();
        num::complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
    }

    /// Exact phases become cyclotomic numbers; the p-adic fractional part
    /// guarantees a p-power denominator.
    pub fn to_cyclo(&self) -> Result<CycloNumber> {
        match self {
            UnitPhase::Exact { p, theta } => CycloNumber::root_of_unity(*p, theta),
            UnitPhase::Approx(_) => Err(Error::UnsupportedOperation("to_cyclo", "real")),
        }
    }
}

/// v_p of a nonzero integer.
fn int_valuation(p: u64, n: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.abs();
    loop {
        let (q, r) = num::Integer::div_rem(&m, &pb);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return v;
        }
    }
}

/// p-adic valuation of a rational; `None` is +infinity.
pub fn padic_valuation(p: u64, x: &BigRational) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_valuation(p, x.numer()) - int_valuation(p, x.denom()))
}

/// p^e as an exact rational, e may be negative.
pub fn pow_rational(p: u64, e: i64) -> BigRational {
    let base = BigInt::from(p);
    if e >= 0 {
        BigRational::from_integer(base.pow(e as u32))
    } else {
        BigRational::new(BigInt::one(), base.pow((-e) as u32))
    }
}

/// |x|_p = p^{-v(x)}, exactly.
pub fn padic_abs(p: u64, x: &BigRational) -> BigRational {
    match padic_valuation(p, x) {
        None => BigRational::zero(),
        Some(v) => pow_rational(p, -v),
    }
}

/// The p-adic fractional part {x}_p: the unique rational m/p^e in [0,1)
/// with x - m/p^e in Z_p.
pub fn frac_part(p: u64, x: &BigRational) -> BigRational {
    let e = int_valuation_opt(p, x.denom());
    if e == 0 {
        return BigRational::zero();
    }
    let pe = BigInt::from(p).pow(e as u32);
    // x = num / (p^e d'), gcd(d', p) = 1; solve m = num * inv(d') mod p^e.
    let dprime = x.denom() / &pe;
    let inv = mod_inverse(&dprime, &pe);
    let m = num::Integer::mod_floor(&(x.numer() * inv), &pe);
    BigRational::new(m, pe)
}

fn int_valuation_opt(p: u64, n: &BigInt) -> i64 {
    if n.is_zero() {
        0
    } else {
        int_valuation(p, n)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = num::Integer::extended_gcd(&num::Integer::mod_floor(a, m), m);
    debug_assert!(e.gcd.is_one());
    num::Integer::mod_floor(&e.x, m)
}

/// Haar measure of the ball B(r) in K^l under the self-dual normalization:
/// (2r)^l on R, p^{kl} on Q_p for r = p^k (with mu(Z_p) = 1).
pub fn ball_measure(field: FieldDesc, l: u32, r: &RealValue) -> Result<RealValue> {
    match (field, r) {
        (FieldDesc::Real, rv) => {
            let r = rv.to_f64();
            if r <= 0.0 {
                return Err(Error::InvalidRadius(format!("nonpositive radius {r}")));
            }
            Ok(RealValue::Approx((2.0 * r).powi(l as i32)))
        }
        (FieldDesc::Padic { p }, RealValue::Exact(r)) => {
            let k = radius_exponent(p, r)?;
            Ok(RealValue::Exact(pow_rational(p, k * l as i64)))
        }
        (FieldDesc::Padic { .. }, RealValue::Approx(_)) => Err(Error::InvalidRadius(
            "p-adic radii must be exact powers of p".into(),
        )),
    }
}

/// Checks that r = p^k and returns k.
pub fn radius_exponent(p: u64, r: &BigRational) -> Result<i64> {
    if r.is_zero() || r.is_negative() {
        return Err(Error::InvalidRadius(format!("nonpositive radius {r}")));
    }
    match padic_valuation(p, r) {
        Some(v) if pow_rational(p, v) == *r => Ok(v),
        _ => Err(Error::InvalidRadius(format!(
            "{r} is not an integer power of {p}"
        ))),
    }
}

/// The closed-form integral of the character over a ball:
/// int_{B(p^k)} chi(y x) dx = p^k if |y| <= p^{-k}, else 0.
pub fn char_ball_integral(p: u64, y: &BigRational, k: i64) -> BigRational {
    let vanishes = match padic_valuation(p, y) {
        None => false,
        Some(v) => v < k,
    };
    if vanishes {
        BigRational::zero()
    } else {
        pow_rational(p, k)
    }
}
