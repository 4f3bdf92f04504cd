//! Experiment drivers and verdicts for the limit statements: asymptotic
//! Schur orthogonality over Folner boxes, the one-dimensional character
//! case, c-temperedness, and braiding-operator convergence.

pub mod oracle;
pub mod padic;
pub mod real;

use crate::error::{Error, Result};
use crate::field::{
    char_ball_integral, padic_valuation, pow_rational, radius_exponent, CycloNumber, FieldDesc,
    LocalScalar, RealValue,
};
use crate::reps::InfDimRep;
use crate::schwartz::{ComplexValue, TestFunction};
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{ToPrimitive, Zero};
use serde::Serialize;

/// Work limit for quadratures and oracle enumerations, in abstract units
/// (roughly one unit per innermost term).
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub max_units: u64,
}

impl Default for Caps {
    fn default() -> Self {
        // roughly a couple of minutes of desk-scale compute
        Caps {
            max_units: 2_000_000_000,
        }
    }
}

impl Caps {
    pub fn from_cap_mb(mb: u64) -> Self {
        // interpret the cap as "bytes touched", ~16 bytes per unit
        Caps {
            max_units: mb.saturating_mul(1024 * 1024 / 16),
        }
    }

    pub fn check(&self, units: u64, what: &str) -> Result<()> {
        if units > self.max_units {
            return Err(Error::ResourceCap(format!(
                "{what} needs ~{units} work units, cap is {}",
                self.max_units
            )));
        }
        Ok(())
    }
}

/// Increasing radii; p-adic radii must be powers of p.
#[derive(Debug, Clone)]
pub struct RadiusSchedule {
    field: FieldDesc,
    radii: Vec<RealValue>,
}

impl RadiusSchedule {
    pub fn real(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidRadius("empty radius schedule".into()));
        }
        for w in radii.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidRadius(
                    "radius schedule must be strictly increasing".into(),
                ));
            }
        }
        if radii[0] <= 0.0 {
            return Err(Error::InvalidRadius("nonpositive radius".into()));
        }
        Ok(RadiusSchedule {
            field: FieldDesc::Real,
            radii: radii.into_iter().map(RealValue::Approx).collect(),
        })
    }

    /// Radii p^m for the given strictly increasing exponents.
    pub fn padic(p: u64, exponents: Vec<i64>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidRadius("empty radius schedule".into()));
        }
        for w in exponents.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidRadius(
                    "radius schedule must be strictly increasing".into(),
                ));
            }
        }
        Ok(RadiusSchedule {
            field: FieldDesc::Padic { p },
            radii: exponents
                .into_iter()
                .map(|m| RealValue::Exact(pow_rational(p, m)))
                .collect(),
        })
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn radii(&self) -> &[RealValue] {
        &self.radii
    }

    /// p-adic exponents m with r = p^m.
    pub fn exponents(&self) -> Result<Vec<i64>> {
        let p = match self.field {
            FieldDesc::Padic { p } => p,
            FieldDesc::Real => {
                return Err(Error::UnsupportedOperation("exponents", "real"));
            }
        };
        self.radii
            .iter()
            .map(|r| match r {
                RealValue::Exact(q) => radius_exponent(p, q),
                RealValue::Approx(_) => Err(Error::InvalidRadius("inexact p-adic radius".into())),
            })
            .collect()
    }

    pub fn real_radii(&self) -> Result<Vec<f64>> {
        match self.field {
            FieldDesc::Real => Ok(self.radii.iter().map(|r| r.to_f64()).collect()),
            FieldDesc::Padic { .. } => Err(Error::UnsupportedOperation("real_radii", "p-adic")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone)]
pub struct RadiusRecord {
    pub r: f64,
    pub value: ComplexValue,
    pub target: ComplexValue,
    pub abs_error: f64,
    /// the 1/mu(...) prefactor already applied to `value`
    pub normalizer: f64,
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub id: String,
    pub kind: String,
    pub records: Vec<RadiusRecord>,
    pub verdict: Verdict,
    /// p-adic: smallest radius with guaranteed exact attainment
    pub threshold_r: Option<f64>,
    pub tolerance: f64,
    pub provenance: String,
    pub notes: Vec<String>,
}

/// PASS rules: p-adic needs exact equality at (and beyond) the threshold
/// radius; real needs the final error under tolerance and errors
/// nonincreasing over the last three radii.
fn decide_verdict(
    records: &[RadiusRecord],
    threshold_r: Option<f64>,
    tolerance: f64,
    padic: bool,
    notes: &mut Vec<String>,
) -> Verdict {
    if records.is_empty() {
        notes.push("no radii evaluated".into());
        return Verdict::Fail;
    }
    if padic {
        let thr = threshold_r.unwrap_or(records[0].r);
        let beyond: Vec<&RadiusRecord> = records.iter().filter(|rec| rec.r >= thr).collect();
        if beyond.is_empty() {
            notes.push(format!(
                "schedule never reaches the exactness threshold r >= {thr}"
            ));
            return Verdict::Fail;
        }
        for rec in beyond {
            if rec.abs_error != 0.0 {
                notes.push(format!(
                    "r = {}: value differs from target beyond the threshold",
                    rec.r
                ));
                return Verdict::Fail;
            }
        }
        Verdict::Pass
    } else {
        let last = records.last().unwrap();
        if last.abs_error >= tolerance {
            notes.push(format!(
                "final error {} is not below tolerance {tolerance}",
                last.abs_error
            ));
            return Verdict::Fail;
        }
        let tail = &records[records.len().saturating_sub(3)..];
        for w in tail.windows(2) {
            if w[1].abs_error > w[0].abs_error + 1e-12 {
                notes.push(format!(
                    "error grew from {} to {} over the final radii",
                    w[0].abs_error, w[1].abs_error
                ));
                return Verdict::Fail;
            }
        }
        Verdict::Pass
    }
}

fn exact_value(z: CycloNumber) -> ComplexValue {
    ComplexValue::Exact(z)
}

fn record(r: f64, value: ComplexValue, target: &ComplexValue, normalizer: f64) -> RadiusRecord {
    let abs_error = value
        .sub(target)
        .map(|d| d.to_c64().norm())
        .unwrap_or(f64::NAN);
    let exact = value.is_exact();
    RadiusRecord {
        r,
        value,
        target: target.clone(),
        abs_error,
        normalizer,
        exact,
    }
}

fn padic_mod_t_inv_pow(p: u64, t: &BigRational, n: usize) -> BigRational {
    // mod(t)^{-n} = p^{n v(t)}
    let v = padic_valuation(p, t).expect("t != 0");
    pow_rational(p, v * n as i64)
}

fn require_padic_t(rep: &InfDimRep) -> Result<(u64, BigRational)> {
    match rep.t() {
        LocalScalar::Padic { p, value } => Ok((*p, value.clone())),
        LocalScalar::Real(_) => Err(Error::FieldMismatch("expected a p-adic t".into())),
    }
}

/// schur_diag: (1/mu(B(r^2))) int_F <pi_t(g)f1,f2> conj(<pi_t(g)f3,f4>) dg.
/// The chi(tc) phases cancel, so this is the (a,b)-integral of
/// M12 conj(M34); the limit is mod(t)^{-n} <f1,f3> conj(<f2,f4>).
#[allow(clippy::too_many_arguments)]
pub fn schur_diag(
    id: &str,
    t: &LocalScalar,
    f1: &TestFunction,
    f2: &TestFunction,
    f3: &TestFunction,
    f4: &TestFunction,
    schedule: &RadiusSchedule,
    tolerance: f64,
    caps: &Caps,
) -> Result<ExperimentReport> {
    let rep = InfDimRep::new(t.clone())?;
    let n = f1.dim();
    let mut notes = Vec::new();
    if f1.is_zero() || f2.is_zero() || f3.is_zero() || f4.is_zero() {
        notes.push("a test function is zero: the limit is trivially 0".into());
    }
    let provenance =
        "lim (1/mu(B(r^2))) int_F <pi_t(g)f1,f2> conj(<pi_t(g)f3,f4>) = mod(t)^-n <f1,f3> conj(<f2,f4>)"
            .to_string();
    match schedule.field() {
        FieldDesc::Padic { p } => {
            let (_, tv) = require_padic_t(&rep)?;
            let s = padic::schur_pair_surface(&rep, &rep, f1, f2, f3, f4)?;
            let target = {
                let a = f1.inner(f3)?.as_exact().unwrap().clone();
                let b = f2.inner(f4)?.as_exact().unwrap().conj();
                exact_value(
                    a.mul(&b)?
                        .scale(&padic_mod_t_inv_pow(p, &tv, n)),
                )
            };
            let thr_m = s.support_exponent().unwrap_or(i64::MIN);
            let threshold_r = Some(pow_rational(p, thr_m.max(schedule.exponents()?[0])).to_f64().unwrap_or(0.0));
            let mut records = Vec::new();
            for m in schedule.exponents()? {
                caps.check((s.term_count() as u64).pow(2), "p-adic surface integral")?;
                let v = padic::box_integral(&s, m)?;
                let norm = pow_rational(p, -2 * m).to_f64().unwrap_or(f64::NAN);
                records.push(record(
                    pow_rational(p, m).to_f64().unwrap(),
                    exact_value(v),
                    &target,
                    norm,
                ));
            }
            let mut notes = notes;
            let verdict = decide_verdict(&records, threshold_r, tolerance, true, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "schur_diag".into(),
                records,
                verdict,
                threshold_r,
                tolerance,
                provenance,
                notes,
            })
        }
        FieldDesc::Real => {
            let tv = match t {
                LocalScalar::Real(x) => *x,
                _ => return Err(Error::FieldMismatch("expected real t".into())),
            };
            let (g1, g2, g3, g4) = (f1.as_real()?, f2.as_real()?, f3.as_real()?, f4.as_real()?);
            let target = {
                let a = f1.inner(f3)?.to_c64();
                let b = f2.inner(f4)?.to_c64().conj();
                ComplexValue::Approx(a * b * rep.mod_t_inv_pow(n))
            };
            let mut records = Vec::new();
            for r in schedule.real_radii()? {
                let units = (g2.samples().len() as u64) * (g4.samples().len() as u64) * 512;
                caps.check(units, "real Schur quadrature")?;
                let v = real::schur_pair(tv, tv, g1, g2, g3, g4, r)?;
                let norm = 1.0 / (2.0 * r * r);
                records.push(record(r, ComplexValue::Approx(v), &target, norm));
            }
            let mut notes = notes;
            let verdict = decide_verdict(&records, None, tolerance, false, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "schur_diag".into(),
                records,
                verdict,
                threshold_r: None,
                tolerance,
                provenance,
                notes,
            })
        }
    }
}

/// schur_cross_tt: same pairing with t1 != t2; the c-ball character
/// integral multiplies the (a,b) part and drives the value to 0.
#[allow(clippy::too_many_arguments)]
pub fn schur_cross_tt(
    id: &str,
    t1: &LocalScalar,
    t2: &LocalScalar,
    f1: &TestFunction,
    f2: &TestFunction,
    f3: &TestFunction,
    f4: &TestFunction,
    schedule: &RadiusSchedule,
    tolerance: f64,
    caps: &Caps,
) -> Result<ExperimentReport> {
    if t1 == t2 {
        return Err(Error::WrongExperiment(
            "schur_cross_tt requires t1 != t2 (use schur_diag)".into(),
        ));
    }
    let rep1 = InfDimRep::new(t1.clone())?;
    let rep2 = InfDimRep::new(t2.clone())?;
    let provenance =
        "lim (1/mu(B(r^2))) int_F <pi_t1(g)f1,f2> conj(<pi_t2(g)f3,f4>) = 0 for t1 != t2"
            .to_string();
    match schedule.field() {
        FieldDesc::Padic { p } => {
            let (_, tv1) = require_padic_t(&rep1)?;
            let (_, tv2) = require_padic_t(&rep2)?;
            let dt = &tv1 - &tv2;
            let v_dt = padic_valuation(p, &dt).expect("t1 != t2");
            let s = padic::schur_pair_surface(&rep1, &rep2, f1, f2, f3, f4)?;
            let target = exact_value(CycloNumber::zero(p));
            // (1/p^{2m}) int_{B(p^{2m})} chi((t1-t2)c) dc = [v(t1-t2) >= 2m]
            let thr_m = v_dt / 2 + 1;
            let threshold_r = Some(pow_rational(p, thr_m.max(schedule.exponents()?[0])).to_f64().unwrap());
            let mut records = Vec::new();
            for m in schedule.exponents()? {
                caps.check((s.term_count() as u64).pow(2), "p-adic surface integral")?;
                let cfac = char_ball_integral(p, &dt, 2 * m) * pow_rational(p, -2 * m);
                let v = padic::box_integral(&s, m)?
                    .scale(&cfac);
                let norm = pow_rational(p, -2 * m).to_f64().unwrap_or(f64::NAN);
                records.push(record(
                    pow_rational(p, m).to_f64().unwrap(),
                    exact_value(v),
                    &target,
                    norm,
                ));
            }
            let mut notes = Vec::new();
            let verdict = decide_verdict(&records, threshold_r, tolerance, true, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "schur_cross_tt".into(),
                records,
                verdict,
                threshold_r,
                tolerance,
                provenance,
                notes,
            })
        }
        FieldDesc::Real => {
            let (tv1, tv2) = match (t1, t2) {
                (LocalScalar::Real(x), LocalScalar::Real(y)) => (*x, *y),
                _ => return Err(Error::FieldMismatch("expected real t".into())),
            };
            let (g1, g2, g3, g4) = (f1.as_real()?, f2.as_real()?, f3.as_real()?, f4.as_real()?);
            let target = ComplexValue::Approx(Complex64::new(0.0, 0.0));
            let mut records = Vec::new();
            for r in schedule.real_radii()? {
                let units = (g2.samples().len() as u64) * (g4.samples().len() as u64) * 512;
                caps.check(units, "real Schur quadrature")?;
                let cfac = real::sinc(2.0 * (tv1 - tv2) * r * r);
                let v = real::schur_pair(tv1, tv2, g1, g2, g3, g4, r)? * cfac;
                records.push(record(r, ComplexValue::Approx(v), &target, 1.0 / (2.0 * r * r)));
            }
            let mut notes = Vec::new();
            let verdict = decide_verdict(&records, None, tolerance, false, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "schur_cross_tt".into(),
                records,
                verdict,
                threshold_r: None,
                tolerance,
                provenance,
                notes,
            })
        }
    }
}

/// schur_cross_pi_rho: the pi-vs-rho orthogonality, normalizer
/// 1/(mu_{K^n}(B(r)) mu_K(B(r^2))).
#[allow(clippy::too_many_arguments)]
pub fn schur_cross_pi_rho(
    id: &str,
    t: &LocalScalar,
    z: &[LocalScalar],
    x: &[LocalScalar],
    f1: &TestFunction,
    f2: &TestFunction,
    schedule: &RadiusSchedule,
    tolerance: f64,
    caps: &Caps,
) -> Result<ExperimentReport> {
    let rep = InfDimRep::new(t.clone())?;
    let n = f1.dim();
    let provenance =
        "lim (1/(mu(B(r))^n mu(B(r^2)))) int_F <pi_t(g)f1,f2> conj(rho_{z,x}(g)) dg = 0"
            .to_string();
    match schedule.field() {
        FieldDesc::Padic { p } => {
            let (_, tv) = require_padic_t(&rep)?;
            let v_t = padic_valuation(p, &tv).expect("t != 0");
            let s = rep.coeff_surface(f1, f2)?;
            let zr: Vec<BigRational> = z
                .iter()
                .chain(x)
                .map(|s| match s {
                    LocalScalar::Padic { value, .. } => Ok(-value.clone()),
                    _ => Err(Error::FieldMismatch("expected p-adic parameters".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            let modulated = s.as_padic()?.modulate(&zr)?;
            let target = exact_value(CycloNumber::zero(p));
            let thr_m = v_t / 2 + 1;
            let threshold_r = Some(pow_rational(p, thr_m.max(schedule.exponents()?[0])).to_f64().unwrap());
            let mut records = Vec::new();
            for m in schedule.exponents()? {
                caps.check((modulated.term_count() as u64).pow(2), "p-adic surface integral")?;
                // c factor: (1/p^{2m}) int_{B(p^{2m})} chi(tc) dc
                let cfac = char_ball_integral(p, &tv, 2 * m) * pow_rational(p, -2 * m);
                let ab = padic::box_integral(&modulated, m)?;
                let v = ab.scale(&(cfac * pow_rational(p, -m * n as i64)));
                let norm = pow_rational(p, -m * n as i64 - 2 * m).to_f64().unwrap_or(f64::NAN);
                records.push(record(
                    pow_rational(p, m).to_f64().unwrap(),
                    exact_value(v),
                    &target,
                    norm,
                ));
            }
            let mut notes = Vec::new();
            let verdict = decide_verdict(&records, threshold_r, tolerance, true, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "schur_cross_pi_rho".into(),
                records,
                verdict,
                threshold_r,
                tolerance,
                provenance,
                notes,
            })
        }
        FieldDesc::Real => {
            let tv = match t {
                LocalScalar::Real(xv) => *xv,
                _ => return Err(Error::FieldMismatch("expected real t".into())),
            };
            let zv: Vec<f64> = z
                .iter()
                .map(|s| match s {
                    LocalScalar::Real(v) => Ok(*v),
                    _ => Err(Error::FieldMismatch("expected real parameters".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            let xv: Vec<f64> = x
                .iter()
                .map(|s| match s {
                    LocalScalar::Real(v) => Ok(*v),
                    _ => Err(Error::FieldMismatch("expected real parameters".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            let (g1, g2) = (f1.as_real()?, f2.as_real()?);
            let target = ComplexValue::Approx(Complex64::new(0.0, 0.0));
            let mut records = Vec::new();
            for r in schedule.real_radii()? {
                caps.check(g2.samples().len() as u64 * 4096, "real pi-rho quadrature")?;
                let cfac = real::sinc(2.0 * tv * r * r);
                let ab = real::pi_rho_pair(tv, &zv, &xv, g1, g2, r)?;
                let v = ab * cfac / (2.0 * r).powi(n as i32);
                let norm = 1.0 / ((2.0 * r).powi(n as i32) * 2.0 * r * r);
                records.push(record(r, ComplexValue::Approx(v), &target, norm));
            }
            let mut notes = Vec::new();
            let verdict = decide_verdict(&records, None, tolerance, false, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "schur_cross_pi_rho".into(),
                records,
                verdict,
                threshold_r: None,
                tolerance,
                provenance,
                notes,
            })
        }
    }
}

/// schur_onedim: (1/mu(F)) int_F rho1(g) conj(rho2(g)) dg, a product of
/// one-dimensional character-ball integrals per coordinate.
#[allow(clippy::too_many_arguments)]
pub fn schur_onedim(
    id: &str,
    z1: &[LocalScalar],
    x1: &[LocalScalar],
    z2: &[LocalScalar],
    x2: &[LocalScalar],
    schedule: &RadiusSchedule,
    tolerance: f64,
) -> Result<ExperimentReport> {
    let equal = z1 == z2 && x1 == x2;
    let provenance = if equal {
        "(1/mu(F)) int_F |rho(g)|^2 dg = 1 at every radius (dim V = 1)".to_string()
    } else {
        "lim (1/mu(F)) int_F rho1(g) conj(rho2(g)) dg = 0 for distinct parameters".to_string()
    };
    let deltas: Vec<LocalScalar> = z1
        .iter()
        .zip(z2)
        .chain(x1.iter().zip(x2))
        .map(|(a, b)| a.sub(b))
        .collect::<Result<Vec<_>>>()?;
    match schedule.field() {
        FieldDesc::Padic { p } => {
            let target = if equal {
                exact_value(CycloNumber::one(p))
            } else {
                exact_value(CycloNumber::zero(p))
            };
            // value is 0 once m exceeds v(delta_j) for some nonzero delta
            let thr_m = deltas
                .iter()
                .filter_map(|d| match d {
                    LocalScalar::Padic { value, .. } => padic_valuation(p, value).map(|v| v + 1),
                    _ => None,
                })
                .min()
                .unwrap_or(i64::MIN);
            let threshold_r = Some(pow_rational(p, thr_m.max(schedule.exponents()?[0])).to_f64().unwrap());
            let mut records = Vec::new();
            for m in schedule.exponents()? {
                let mut v = CycloNumber::one(p);
                for d in &deltas {
                    let dv = match d {
                        LocalScalar::Padic { value, .. } => value,
                        _ => return Err(Error::FieldMismatch("expected p-adic parameters".into())),
                    };
                    // (1/p^m) int_{B(p^m)} chi(delta a) da = [v(delta) >= m]
                    let fac = char_ball_integral(p, dv, m) * pow_rational(p, -m);
                    v = v.scale(&fac);
                }
                let norm = pow_rational(p, -(deltas.len() as i64) * m - 2 * m)
                    .to_f64()
                    .unwrap_or(f64::NAN);
                records.push(record(
                    pow_rational(p, m).to_f64().unwrap(),
                    exact_value(v),
                    &target,
                    norm,
                ));
            }
            let mut notes = Vec::new();
            let verdict = decide_verdict(&records, threshold_r, tolerance, true, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "schur_onedim".into(),
                records,
                verdict,
                threshold_r,
                tolerance,
                provenance,
                notes,
            })
        }
        FieldDesc::Real => {
            let target = ComplexValue::Approx(Complex64::new(if equal { 1.0 } else { 0.0 }, 0.0));
            let mut records = Vec::new();
            for r in schedule.real_radii()? {
                let mut v = 1.0;
                for d in &deltas {
                    let dv = match d {
                        LocalScalar::Real(x) => *x,
                        _ => return Err(Error::FieldMismatch("expected real parameters".into())),
                    };
                    // (1/2r) int_{-r}^{r} e^{2 pi i delta a} da
                    v *= real::sinc(2.0 * dv * r);
                }
                let n = deltas.len() / 2;
                let norm = 1.0 / ((2.0 * r).powi(2 * n as i32) * 2.0 * r * r);
                records.push(record(
                    r,
                    ComplexValue::Approx(Complex64::new(v, 0.0)),
                    &target,
                    norm,
                ));
            }
            let mut notes = Vec::new();
            let verdict = decide_verdict(&records, None, tolerance, false, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "schur_onedim".into(),
                records,
                verdict,
                threshold_r: None,
                tolerance,
                provenance,
                notes,
            })
        }
    }
}

/// braiding_pairing: (1/mu(B(r^2))) int_F <(pi_t(g^-1) (x) pi_t(g)) phi1, phi2> dg
/// converging to mod(t)^{-n} <F phi1, phi2> with F the coordinate flip.
#[allow(clippy::too_many_arguments)]
pub fn braiding_pairing(
    id: &str,
    t: &LocalScalar,
    phi1: &TestFunction,
    phi2: &TestFunction,
    schedule: &RadiusSchedule,
    tolerance: f64,
    caps: &Caps,
) -> Result<ExperimentReport> {
    let rep = InfDimRep::new(t.clone())?;
    if phi1.dim() % 2 != 0 || phi1.dim() != phi2.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi1.dim(),
            got: phi2.dim(),
        });
    }
    let n = phi1.dim() / 2;
    let provenance =
        "lim (1/mu(B(r^2))) int_F <(pi_t(g^-1) (x) pi_t(g)) phi1, phi2> dg = mod(t)^-n <F phi1, phi2>"
            .to_string();
    match schedule.field() {
        FieldDesc::Padic { p } => {
            let (_, tv) = require_padic_t(&rep)?;
            let h = padic::braiding_surface(&rep, phi1.as_padic()?, phi2.as_padic()?)?;
            let target = {
                let fpair = phi1.flip()?.inner(phi2)?.as_exact().unwrap().clone();
                exact_value(fpair.scale(&padic_mod_t_inv_pow(p, &tv, n)))
            };
            let thr_m = h.support_exponent().unwrap_or(i64::MIN);
            let threshold_r = Some(pow_rational(p, thr_m.max(schedule.exponents()?[0])).to_f64().unwrap());
            let mut records = Vec::new();
            for m in schedule.exponents()? {
                caps.check((h.term_count() as u64).pow(2), "p-adic braiding integral")?;
                let v = padic::box_integral(&h, m)?;
                let norm = pow_rational(p, -2 * m).to_f64().unwrap_or(f64::NAN);
                records.push(record(
                    pow_rational(p, m).to_f64().unwrap(),
                    exact_value(v),
                    &target,
                    norm,
                ));
            }
            let mut notes = Vec::new();
            let verdict = decide_verdict(&records, threshold_r, tolerance, true, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "braiding_pairing".into(),
                records,
                verdict,
                threshold_r,
                tolerance,
                provenance,
                notes,
            })
        }
        FieldDesc::Real => {
            let tv = match t {
                LocalScalar::Real(x) => *x,
                _ => return Err(Error::FieldMismatch("expected real t".into())),
            };
            let (g1, g2) = (phi1.as_real()?, phi2.as_real()?);
            let target = ComplexValue::Approx(
                phi1.flip()?.inner(phi2)?.to_c64() * rep.mod_t_inv_pow(n),
            );
            let mut records = Vec::new();
            for r in schedule.real_radii()? {
                caps.check(
                    g2.samples().len() as u64 * 4096,
                    "real braiding quadrature",
                )?;
                let v = real::braiding_pair(tv, g1, g2, r)?;
                records.push(record(r, ComplexValue::Approx(v), &target, 1.0 / (2.0 * r * r)));
            }
            let mut notes = Vec::new();
            let verdict = decide_verdict(&records, None, tolerance, false, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "braiding_pairing".into(),
                records,
                verdict,
                threshold_r: None,
                tolerance,
                provenance,
                notes,
            })
        }
    }
}

/// ctemp_condition_ii: the conjugation-robustness gap. p-adic: exactly 0 for
/// r >= k by the ultrametric collapse (the reported value below the
/// threshold is a valid upper bound, not the supremum). Real: the sandwich
/// gap (1/mu(B(r^2)))[mu_c(outer) I(R_out) - mu_c(inner) I(R_in)] with
/// I(R) the square integral of the matrix coefficient over B(R)^{2n}.
#[allow(clippy::too_many_arguments)]
pub fn ctemp_condition_ii(
    id: &str,
    t: &LocalScalar,
    f1: &TestFunction,
    f2: &TestFunction,
    k: &RealValue,
    schedule: &RadiusSchedule,
    tolerance: f64,
    caps: &Caps,
) -> Result<ExperimentReport> {
    let rep = InfDimRep::new(t.clone())?;
    let n = f1.dim();
    let provenance =
        "sup over conjugators in B(k)^{2n+1} of the normalized pairing difference tends to 0"
            .to_string();
    match schedule.field() {
        FieldDesc::Padic { p } => {
            let kq = match k {
                RealValue::Exact(q) => q.clone(),
                RealValue::Approx(_) => {
                    return Err(Error::InvalidRadius("p-adic k must be exact".into()))
                }
            };
            let kappa = if kq.is_zero() { i64::MIN } else { radius_exponent(p, &kq)? };
            let target = exact_value(CycloNumber::zero(p));
            let threshold_r = Some(if kappa == i64::MIN {
                pow_rational(p, schedule.exponents()?[0]).to_f64().unwrap()
            } else {
                pow_rational(p, kappa.max(schedule.exponents()?[0])).to_f64().unwrap()
            });
            let s = padic::schur_pair_surface(&rep, &rep, f1, f2, f1, f2)?;
            let mut records = Vec::new();
            let mut notes = Vec::new();
            for m in schedule.exponents()? {
                let v = if kappa == i64::MIN || m >= kappa {
                    // ultrametric collapse: the symmetric difference is empty
                    CycloNumber::zero(p)
                } else {
                    // upper bound: outer box B(k)^{2n} x B(k^2), inner empty
                    caps.check((s.term_count() as u64).pow(2), "p-adic ctemp bound")?;
                    notes.push(format!(
                        "r = p^{m} < k: reporting the outer-box upper bound, not the supremum"
                    ));
                    padic::box_integral(&s, kappa)?
                        .scale(&pow_rational(p, 2 * (kappa - m)))
                };
                let norm = pow_rational(p, -2 * m).to_f64().unwrap_or(f64::NAN);
                records.push(record(
                    pow_rational(p, m).to_f64().unwrap(),
                    exact_value(v),
                    &target,
                    norm,
                ));
            }
            let verdict = decide_verdict(&records, threshold_r, tolerance, true, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "ctemp_condition_ii".into(),
                records,
                verdict,
                threshold_r,
                tolerance,
                provenance,
                notes,
            })
        }
        FieldDesc::Real => {
            let kf = k.to_f64();
            let tv = match t {
                LocalScalar::Real(x) => *x,
                _ => return Err(Error::FieldMismatch("expected real t".into())),
            };
            let (g1, g2) = (f1.as_real()?, f2.as_real()?);
            let target = ComplexValue::Approx(Complex64::new(0.0, 0.0));
            let mut records = Vec::new();
            let mut notes = Vec::new();
            for r in schedule.real_radii()? {
                if kf == 0.0 {
                    records.push(record(
                        r,
                        ComplexValue::Approx(Complex64::new(0.0, 0.0)),
                        &target,
                        1.0 / (2.0 * r * r),
                    ));
                    continue;
                }
                caps.check(g2.samples().len() as u64 * 8192, "real ctemp quadrature")?;
                let sw = crate::heisenberg::sandwich_boxes(r, kf, n)?;
                let outer = sw.outer;
                let i_out = real::schur_pair(tv, tv, g1, g2, g1, g2, outer.r_ab)?.re;
                let gap = match sw.inner {
                    Some(inner) => {
                        let i_in = real::schur_pair(tv, tv, g1, g2, g1, g2, inner.r_ab)?.re;
                        (2.0 * outer.r_c * i_out - 2.0 * inner.r_c * i_in) / (2.0 * r * r)
                    }
                    None => {
                        notes.push(format!("r = {r}: degenerate inner box, gap is the outer integral"));
                        2.0 * outer.r_c * i_out / (2.0 * r * r)
                    }
                };
                records.push(record(
                    r,
                    ComplexValue::Approx(Complex64::new(gap, 0.0)),
                    &target,
                    1.0 / (2.0 * r * r),
                ));
            }
            let verdict = decide_verdict(&records, None, tolerance, false, &mut notes);
            Ok(ExperimentReport {
                id: id.into(),
                kind: "ctemp_condition_ii".into(),
                records,
                verdict,
                threshold_r: None,
                tolerance,
                provenance,
                notes,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RecordDto {
    r: f64,
    value_re: f64,
    value_im: f64,
    target_re: f64,
    target_im: f64,
    abs_error: f64,
    normalizer: f64,
    exact_flag: bool,
}

#[derive(Serialize)]
struct ReportDto<'a> {
    id: &'a str,
    kind: &'a str,
    verdict: Verdict,
    threshold_r: Option<f64>,
    tolerance: f64,
    provenance: &'a str,
    notes: &'a [String],
    records: Vec<RecordDto>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> serde_json::Value {
        let dto = ReportDto {
            id: &self.id,
            kind: &self.kind,
            verdict: self.verdict,
            threshold_r: self.threshold_r,
            tolerance: self.tolerance,
            provenance: &self.provenance,
            notes: &self.notes,
            records: self
                .records
                .iter()
                .map(|rec| {
                    let v = rec.value.to_c64();
                    let t = rec.target.to_c64();
                    RecordDto {
                        r: rec.r,
                        value_re: v.re,
                        value_im: v.im,
                        target_re: t.re,
                        target_im: t.im,
                        abs_error: rec.abs_error,
                        normalizer: rec.normalizer,
                        exact_flag: rec.exact,
                    }
                })
                .collect(),
        };
        serde_json::to_value(dto).expect("report DTO is serializable")
    }

    pub const CSV_HEADER: &'static str =
        "experiment_id,r,value_re,value_im,target_re,target_im,abs_error,normalizer,exact_flag";

    pub fn csv_rows(&self) -> Vec<String> {
        self.records
            .iter()
            .map(|rec| {
                let v = rec.value.to_c64();
                let t = rec.target.to_c64();
                format!(
                    "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
                    self.id, rec.r, v.re, v.im, t.re, t.im, rec.abs_error, rec.normalizer, rec.exact
                )
            })
            .collect()
    }
}
