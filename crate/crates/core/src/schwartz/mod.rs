//! Test-function spaces on K^l for both fields, behind one tagged union.

pub mod grid;
pub mod padic;

pub use grid::{Axis, RealGrid};
pub use padic::{chi, BallTerm, PadicBallChar};

use crate::error::{Error, Result};
use crate::field::{CycloNumber, FieldDesc, LocalScalar};
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::Zero;
use serde::{Deserialize, Serialize};

/// A complex number that is exact (cyclotomic) on the p-adic path and a
/// float on the real path.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexValue {
    Exact(CycloNumber),
    Approx(Complex64),
}

impl ComplexValue {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            ComplexValue::Exact(z) => z.to_c64(),
            ComplexValue::Approx(z) => *z,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ComplexValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&CycloNumber> {
        match self {
            ComplexValue::Exact(z) => Some(z),
            ComplexValue::Approx(_) => None,
        }
    }

    pub fn sub(&self, other: &ComplexValue) -> Result<ComplexValue> {
        match (self, other) {
            (ComplexValue::Exact(a), ComplexValue::Exact(b)) => Ok(ComplexValue::Exact(a.sub(b)?)),
            (ComplexValue::Approx(a), ComplexValue::Approx(b)) => Ok(ComplexValue::Approx(a - b)),
            _ => Err(Error::FieldMismatch(
                "mixing exact and approximate complex values".into(),
            )),
        }
    }

    /// |self - other|, collapsing to f64.
    pub fn abs_error(&self, other: &ComplexValue) -> Result<f64> {
        Ok(self.sub(other)?.to_c64().norm())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ComplexValue::Exact(z) => z.is_zero(),
            ComplexValue::Approx(z) => z.norm() == 0.0,
        }
    }
}

/// An element of the Schwartz-Bruhat space on K^l.
#[derive(Debug, Clone)]
pub enum TestFunction {
    Padic(PadicBallChar),
    Real(RealGrid),
}

fn padic_coords(v: &[LocalScalar], p: u64) -> Result<Vec<BigRational>> {
    v.iter()
        .map(|s| match s {
            LocalScalar::Padic { p: q, value } if *q == p => Ok(value.clone()),
            _ => Err(Error::FieldMismatch(
                "expected p-adic coordinates of matching p".into(),
            )),
        })
        .collect()
}

fn real_coords(v: &[LocalScalar]) -> Result<Vec<f64>> {
    v.iter()
        .map(|s| match s {
            LocalScalar::Real(x) => Ok(*x),
            _ => Err(Error::FieldMismatch("expected real coordinates".into())),
        })
        .collect()
}

impl TestFunction {
    pub fn field(&self) -> FieldDesc {
        match self {
            TestFunction::Padic(f) => FieldDesc::Padic { p: f.p() },
            TestFunction::Real(_) => FieldDesc::Real,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TestFunction::Padic(f) => f.dim(),
            TestFunction::Real(f) => f.dim(),
        }
    }

    pub fn as_padic(&self) -> Result<&PadicBallChar> {
        match self {
            TestFunction::Padic(f) => Ok(f),
            TestFunction::Real(_) => Err(Error::FieldMismatch(
                "expected a p-adic test function".into(),
            )),
        }
    }

    pub fn as_real(&self) -> Result<&RealGrid> {
        match self {
            TestFunction::Real(f) => Ok(f),
            TestFunction::Padic(_) => Err(Error::FieldMismatch(
                "expected a real test function".into(),
            )),
        }
    }

    pub fn inner(&self, other: &TestFunction) -> Result<ComplexValue> {
        match (self, other) {
            (TestFunction::Padic(f), TestFunction::Padic(g)) => {
                Ok(ComplexValue::Exact(f.inner(g)?))
            }
            (TestFunction::Real(f), TestFunction::Real(g)) => {
                Ok(ComplexValue::Approx(f.inner(g)?))
            }
            _ => Err(Error::FieldMismatch("inner across fields".into())),
        }
    }

    pub fn norm_sq(&self) -> Result<ComplexValue> {
        self.inner(self)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TestFunction::Padic(f) => f.is_zero(),
            TestFunction::Real(f) => f.is_zero(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Result<TestFunction> {
        match self {
            TestFunction::Real(f) => Ok(TestFunction::Real(f.scale(c))),
            TestFunction::Padic(_) => Err(Error::UnsupportedOperation("float scale", "p-adic")),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Result<TestFunction> {
        match self {
            TestFunction::Padic(f) => Ok(TestFunction::Padic(f.scale_rational(q))),
            TestFunction::Real(f) => Ok(TestFunction::Real(f.scale(Complex64::new(
                num::traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN),
                0.0,
            )))),
        }
    }

    pub fn add(&self, other: &TestFunction) -> Result<TestFunction> {
        match (self, other) {
            (TestFunction::Padic(f), TestFunction::Padic(g)) => {
                Ok(TestFunction::Padic(f.add(g)?))
            }
            _ => Err(Error::UnsupportedOperation("add", "real")),
        }
    }

    pub fn conj(&self) -> TestFunction {
        match self {
            TestFunction::Padic(f) => TestFunction::Padic(f.conj()),
            TestFunction::Real(f) => TestFunction::Real(f.conj()),
        }
    }

    /// x |-> f(x - a)
    pub fn translate(&self, a: &[LocalScalar]) -> Result<TestFunction> {
        match self {
            TestFunction::Padic(f) => {
                let v = padic_coords(a, f.p())?;
                Ok(TestFunction::Padic(f.translate(&v)?))
            }
            TestFunction::Real(f) => {
                let v = real_coords(a)?;
                Ok(TestFunction::Real(f.translate(&v)?))
            }
        }
    }

    /// x |-> chi(xi . x) f(x)
    pub fn modulate(&self, xi: &[LocalScalar]) -> Result<TestFunction> {
        match self {
            TestFunction::Padic(f) => {
                let v = padic_coords(xi, f.p())?;
                Ok(TestFunction::Padic(f.modulate(&v)?))
            }
            TestFunction::Real(f) => {
                let v = real_coords(xi)?;
                Ok(TestFunction::Real(f.modulate(&v)?))
            }
        }
    }

    /// hat f(y) = int chi(-y.x) f(x) dx
    pub fn fourier(&self) -> Result<TestFunction> {
        match self {
            TestFunction::Padic(f) => Ok(TestFunction::Padic(f.fourier()?)),
            TestFunction::Real(f) => Ok(TestFunction::Real(f.fourier()?)),
        }
    }

    pub fn tensor(&self, other: &TestFunction) -> Result<TestFunction> {
        match (self, other) {
            (TestFunction::Padic(f), TestFunction::Padic(g)) => {
                Ok(TestFunction::Padic(f.tensor(g)?))
            }
            (TestFunction::Real(f), TestFunction::Real(g)) => {
                Ok(TestFunction::Real(f.tensor(g)?))
            }
            _ => Err(Error::FieldMismatch("tensor across fields".into())),
        }
    }

    /// phi(x, y) -> phi(y, x)
    pub fn flip(&self) -> Result<TestFunction> {
        match self {
            TestFunction::Padic(f) => Ok(TestFunction::Padic(f.flip()?)),
            TestFunction::Real(f) => Ok(TestFunction::Real(f.flip()?)),
        }
    }

    /// V(phi)(a,b) = int chi(-x.b) phi(x-a, x) dx: shear, then a partial
    /// Fourier transform in the second block.
    pub fn fourier_wigner(&self) -> Result<TestFunction> {
        let sheared = match self {
            TestFunction::Padic(f) => TestFunction::Padic(f.wigner_shear()?),
            TestFunction::Real(f) => TestFunction::Real(f.wigner_shear()?),
        };
        let l = self.dim() / 2;
        let coords: Vec<usize> = (l..2 * l).collect();
        match sheared {
            TestFunction::Padic(f) => Ok(TestFunction::Padic(f.partial_fourier(&coords)?)),
            TestFunction::Real(f) => {
                let mut out = f;
                for &c in &coords {
                    out = out.partial_fourier(c)?;
                }
                Ok(TestFunction::Real(out))
            }
        }
    }

    /// V'(phi)(a,b) = int chi(-x.b) phi(a-x, x) dx = V(phi(-., .)).
    pub fn fourier_wigner_prime(&self) -> Result<TestFunction> {
        let negated = match self {
            TestFunction::Padic(f) => TestFunction::Padic(f.negate_first_block()?),
            TestFunction::Real(f) => TestFunction::Real(f.negate_first_block()?),
        };
        negated.fourier_wigner()
    }
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

fn rat_to_string(q: &BigRational) -> String {
    q.to_string()
}

fn rat_from_string(s: &str) -> Result<BigRational> {
    s.parse()
        .map_err(|_| Error::InvalidParameter(format!("`{s}` is not a rational number")))
}

/// JSON coefficient: a rational string, or a cyclotomic power-basis object.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffDto {
    Rational(String),
    Cyclo { level: u32, coeffs: Vec<String> },
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    #[serde(default)]
    coeff: Option<CoeffDto>,
    center: Vec<String>,
    scale: ScaleDto,
    #[serde(default)]
    freq: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScaleDto {
    Uniform(i64),
    PerCoord(Vec<i64>),
}

#[derive(Serialize, Deserialize)]
struct AxisDto {
    h: f64,
    min: i64,
    len: usize,
    offset: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum TestFunctionDto {
    /// Indicator of center + p^scale Z_p^l, optionally modulated.
    PadicBall {
        p: u64,
        center: Vec<String>,
        scale: i64,
        #[serde(default)]
        freq: Option<Vec<String>>,
    },
    /// General term sum.
    PadicTerms { p: u64, dim: usize, terms: Vec<TermDto> },
    /// Indicator of the real box [lo, hi) sampled at spacing h.
    RealBox { lo: Vec<f64>, hi: Vec<f64>, h: f64 },
    /// General grid samples (row-major, split into re/im).
    RealGrid {
        axes: Vec<AxisDto>,
        samples_re: Vec<f64>,
        samples_im: Vec<f64>,
    },
}

impl TestFunction {
    pub fn to_json(&self) -> serde_json::Value {
        let dto = match self {
            TestFunction::Padic(f) => TestFunctionDto::PadicTerms {
                p: f.p(),
                dim: f.dim(),
                terms: f
                    .terms()
                    .iter()
                    .map(|t| TermDto {
                        coeff: Some(match t.coeff.try_rational() {
                            Some(q) => CoeffDto::Rational(rat_to_string(&q)),
                            None => CoeffDto::Cyclo {
                                level: t.coeff.level_exponent(),
                                coeffs: t.coeff.coeffs().iter().map(rat_to_string).collect(),
                            },
                        }),
                        center: t.center.iter().map(rat_to_string).collect(),
                        scale: ScaleDto::PerCoord(t.scale.clone()),
                        freq: Some(t.freq.iter().map(rat_to_string).collect()),
                    })
                    .collect(),
            },
            TestFunction::Real(f) => TestFunctionDto::RealGrid {
                axes: f
                    .axes()
                    .iter()
                    .map(|a| AxisDto {
                        h: a.h,
                        min: a.min,
                        len: a.len,
                        offset: a.offset,
                    })
                    .collect(),
                samples_re: f.samples().iter().map(|z| z.re).collect(),
                samples_im: f.samples().iter().map(|z| z.im).collect(),
            },
        };
        serde_json::to_value(dto).expect("DTO is always serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<TestFunction> {
        let dto: TestFunctionDto = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidParameter(format!("test function JSON: {e}")))?;
        match dto {
            TestFunctionDto::PadicBall {
                p,
                center,
                scale,
                freq,
            } => {
                let center = center
                    .iter()
                    .map(|s| rat_from_string(s))
                    .collect::<Result<Vec<_>>>()?;
                let dim = center.len();
                let mut f = PadicBallChar::indicator(p, center, scale);
                if let Some(freq) = freq {
                    let xi = freq
                        .iter()
                        .map(|s| rat_from_string(s))
                        .collect::<Result<Vec<_>>>()?;
                    if xi.len() != dim {
                        return Err(Error::DimensionMismatch {
                            expected: dim,
                            got: xi.len(),
                        });
                    }
                    f = f.modulate(&xi)?;
                }
                Ok(TestFunction::Padic(f))
            }
            TestFunctionDto::PadicTerms { p, dim, terms } => {
                let mut out = Vec::with_capacity(terms.len());
                for t in terms {
                    let center = t
                        .center
                        .iter()
                        .map(|s| rat_from_string(s))
                        .collect::<Result<Vec<_>>>()?;
                    let scale = match t.scale {
                        ScaleDto::Uniform(k) => vec![k; dim],
                        ScaleDto::PerCoord(v) => v,
                    };
                    let freq = match t.freq {
                        Some(v) => v
                            .iter()
                            .map(|s| rat_from_string(s))
                            .collect::<Result<Vec<_>>>()?,
                        None => vec![BigRational::zero(); dim],
                    };
                    let coeff = match t.coeff {
                        None => CycloNumber::one(p),
                        Some(CoeffDto::Rational(s)) => {
                            CycloNumber::from_rational(p, rat_from_string(&s)?)
                        }
                        Some(CoeffDto::Cyclo { level, coeffs }) => {
                            let coeffs = coeffs
                                .iter()
                                .map(|s| rat_from_string(s))
                                .collect::<Result<Vec<_>>>()?;
                            CycloNumber::from_coeffs(p, level, coeffs)?
                        }
                    };
                    out.push(BallTerm {
                        coeff,
                        center,
                        scale,
                        freq,
                    });
                }
                Ok(TestFunction::Padic(PadicBallChar::new(p, dim, out)?))
            }
            TestFunctionDto::RealBox { lo, hi, h } => {
                Ok(TestFunction::Real(RealGrid::indicator_box(&lo, &hi, h)?))
            }
            TestFunctionDto::RealGrid {
                axes,
                samples_re,
                samples_im,
            } => {
                if samples_re.len() != samples_im.len() {
                    return Err(Error::InvalidParameter(
                        "samples_re and samples_im lengths differ".into(),
                    ));
                }
                let axes = axes
                    .into_iter()
                    .map(|a| Axis {
                        h: a.h,
                        min: a.min,
                        len: a.len,
                        offset: a.offset,
                    })
                    .collect();
                let samples = samples_re
                    .iter()
                    .zip(&samples_im)
                    .map(|(&re, &im)| Complex64::new(re, im))
                    .collect();
                Ok(TestFunction::Real(RealGrid::new(axes, samples)?))
            }
        }
    }
}

/// Convenience: 1_{Z_p^l}-style indicator with integer centers.
pub fn padic_indicator(p: u64, center: &[i64], scale: i64) -> TestFunction {
    let center = center
        .iter()
        .map(|&c| BigRational::from_integer(c.into()))
        .collect();
    TestFunction::Padic(PadicBallChar::indicator(p, center, scale))
}
