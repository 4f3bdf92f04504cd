//! Suite configuration: JSON parsing plus strict validation. The accepted
//! shape is documented by the JSON Schema in `schema/config.schema.json`
//! (embedded below); validation here is hand-rolled but enforces the same
//! constraints, with clearer error messages.

use anyhow::{anyhow, bail, Context};
use hschur_core::{FieldDesc, LocalScalar, RadiusSchedule, RealValue, TestFunction};
use num::bigint::BigInt;
use num::rational::BigRational;
use serde::Deserialize;
use serde_json::Value;
use std::str::FromStr;

/// The published schema for suite configs.
pub const CONFIG_SCHEMA: &str = include_str!("../schema/config.schema.json");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfigDto {
    pub suite: String,
    pub field: FieldDto,
    pub radii: Vec<Value>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub experiments: Vec<ExperimentDto>,
}

fn default_tolerance() -> f64 {
    0.05
}

#[derive(Debug, Deserialize, Clone, Copy)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldDto {
    Real,
    Padic { p: u64 },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentDto {
    SchurDiag {
        id: String,
        t: Value,
        f1: Value,
        f2: Value,
        f3: Value,
        f4: Value,
    },
    SchurCrossTt {
        id: String,
        t1: Value,
        t2: Value,
        f1: Value,
        f2: Value,
        f3: Value,
        f4: Value,
    },
    SchurCrossPiRho {
        id: String,
        t: Value,
        z: Vec<Value>,
        x: Vec<Value>,
        f1: Value,
        f2: Value,
    },
    SchurOnedim {
        id: String,
        z1: Vec<Value>,
        x1: Vec<Value>,
        z2: Vec<Value>,
        x2: Vec<Value>,
    },
    BraidingPairing {
        id: String,
        t: Value,
        phi1: Value,
        phi2: Value,
    },
    CtempConditionIi {
        id: String,
        t: Value,
        f1: Value,
        f2: Value,
        k: Value,
    },
}

/// A fully validated suite, ready to run.
pub struct Suite {
    pub name: String,
    pub field: FieldDesc,
    pub schedule: RadiusSchedule,
    pub tolerance: f64,
    pub experiments: Vec<Experiment>,
}

pub enum Experiment {
    SchurDiag {
        id: String,
        t: LocalScalar,
        f: [TestFunction; 4],
    },
    SchurCrossTt {
        id: String,
        t1: LocalScalar,
        t2: LocalScalar,
        f: [TestFunction; 4],
    },
    SchurCrossPiRho {
        id: String,
        t: LocalScalar,
        z: Vec<LocalScalar>,
        x: Vec<LocalScalar>,
        f1: TestFunction,
        f2: TestFunction,
    },
    SchurOnedim {
        id: String,
        z1: Vec<LocalScalar>,
        x1: Vec<LocalScalar>,
        z2: Vec<LocalScalar>,
        x2: Vec<LocalScalar>,
    },
    BraidingPairing {
        id: String,
        t: LocalScalar,
        phi1: TestFunction,
        phi2: TestFunction,
    },
    CtempConditionIi {
        id: String,
        t: LocalScalar,
        f1: TestFunction,
        f2: TestFunction,
        k: RealValue,
    },
}

impl Experiment {
    pub fn id(&self) -> &str {
        match self {
            Experiment::SchurDiag { id, .. }
            | Experiment::SchurCrossTt { id, .. }
            | Experiment::SchurCrossPiRho { id, .. }
            | Experiment::SchurOnedim { id, .. }
            | Experiment::BraidingPairing { id, .. }
            | Experiment::CtempConditionIi { id, .. } => id,
        }
    }
}

fn parse_rational(v: &Value) -> anyhow::Result<BigRational> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| anyhow!("p-adic scalar {n} must be an integer or \"a/b\" string"))?;
            Ok(BigRational::from_integer(BigInt::from(i)))
        }
        Value::String(s) => {
            let s = s.trim();
            if let Some((num, den)) = s.split_once('/') {
                let n = BigInt::from_str(num.trim()).context("rational numerator")?;
                let d = BigInt::from_str(den.trim()).context("rational denominator")?;
                if d == BigInt::from(0) {
                    bail!("rational with zero denominator: {s}");
                }
                Ok(BigRational::new(n, d))
            } else {
                Ok(BigRational::from_integer(
                    BigInt::from_str(s).context("rational literal")?,
                ))
            }
        }
        other => bail!("expected a rational number, got {other}"),
    }
}

fn parse_scalar(field: FieldDesc, v: &Value) -> anyhow::Result<LocalScalar> {
    match field {
        FieldDesc::Real => {
            let x = v
                .as_f64()
                .ok_or_else(|| anyhow!("expected a real number, got {v}"))?;
            Ok(LocalScalar::Real(x))
        }
        FieldDesc::Padic { p } => Ok(LocalScalar::padic(p, parse_rational(v)?)),
    }
}

fn parse_scalars(field: FieldDesc, vs: &[Value], what: &str) -> anyhow::Result<Vec<LocalScalar>> {
    vs.iter()
        .map(|v| parse_scalar(field, v).with_context(|| format!("in {what}")))
        .collect()
}

fn parse_function(field: FieldDesc, v: &Value, what: &str) -> anyhow::Result<TestFunction> {
    let f = TestFunction::from_json(v).map_err(|e| anyhow!("{what}: {e}"))?;
    if f.field() != field {
        bail!("{what}: function field does not match the suite field");
    }
    Ok(f)
}

pub fn validate(dto: SuiteConfigDto) -> anyhow::Result<Suite> {
    let field = match dto.field {
        FieldDto::Real => FieldDesc::Real,
        FieldDto::Padic { p } => {
            FieldDesc::padic(p).map_err(|e| anyhow!("invalid field: {e}"))?
        }
    };
    if dto.experiments.is_empty() {
        bail!("the experiments list is empty");
    }
    if !(dto.tolerance > 0.0) {
        bail!("tolerance must be positive");
    }
    let schedule = match field {
        FieldDesc::Real => {
            let radii: Vec<f64> = dto
                .radii
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| anyhow!("real radius {v} must be a number")))
                .collect::<anyhow::Result<_>>()?;
            RadiusSchedule::real(radii).map_err(|e| anyhow!("radii: {e}"))?
        }
        FieldDesc::Padic { p } => {
            let exps: Vec<i64> = dto
                .radii
                .iter()
                .map(|v| {
                    v.as_i64()
                        .ok_or_else(|| anyhow!("p-adic radius exponent {v} must be an integer"))
                })
                .collect::<anyhow::Result<_>>()?;
            RadiusSchedule::padic(p, exps).map_err(|e| anyhow!("radii: {e}"))?
        }
    };
    let mut ids = std::collections::HashSet::new();
    let mut experiments = Vec::with_capacity(dto.experiments.len());
    for e in &dto.experiments {
        let exp = validate_experiment(field, e)?;
        if !ids.insert(exp.id().to_string()) {
            bail!("duplicate experiment id {}", exp.id());
        }
        experiments.push(exp);
    }
    Ok(Suite {
        name: dto.suite,
        field,
        schedule,
        tolerance: dto.tolerance,
        experiments,
    })
}

fn nonzero(t: &LocalScalar, what: &str) -> anyhow::Result<()> {
    if t.is_zero() {
        bail!("{what} must be nonzero");
    }
    Ok(())
}

fn validate_experiment(field: FieldDesc, e: &ExperimentDto) -> anyhow::Result<Experiment> {
    Ok(match e {
        ExperimentDto::SchurDiag { id, t, f1, f2, f3, f4 } => {
            let t = parse_scalar(field, t).with_context(|| format!("{id}: t"))?;
            nonzero(&t, "t")?;
            let f = [
                parse_function(field, f1, "f1")?,
                parse_function(field, f2, "f2")?,
                parse_function(field, f3, "f3")?,
                parse_function(field, f4, "f4")?,
            ];
            let n = f[0].dim();
            if f.iter().any(|g| g.dim() != n) {
                bail!("{id}: test functions have mixed dimensions");
            }
            Experiment::SchurDiag { id: id.clone(), t, f }
        }
        ExperimentDto::SchurCrossTt { id, t1, t2, f1, f2, f3, f4 } => {
            let t1 = parse_scalar(field, t1).with_context(|| format!("{id}: t1"))?;
            let t2 = parse_scalar(field, t2).with_context(|| format!("{id}: t2"))?;
            nonzero(&t1, "t1")?;
            nonzero(&t2, "t2")?;
            if t1 == t2 {
                bail!("{id}: schur_cross_tt requires t1 != t2 (use schur_diag)");
            }
            let f = [
                parse_function(field, f1, "f1")?,
                parse_function(field, f2, "f2")?,
                parse_function(field, f3, "f3")?,
                parse_function(field, f4, "f4")?,
            ];
            Experiment::SchurCrossTt { id: id.clone(), t1, t2, f }
        }
        ExperimentDto::SchurCrossPiRho { id, t, z, x, f1, f2 } => {
            let t = parse_scalar(field, t).with_context(|| format!("{id}: t"))?;
            nonzero(&t, "t")?;
            let f1 = parse_function(field, f1, "f1")?;
            let f2 = parse_function(field, f2, "f2")?;
            if z.len() != f1.dim() || x.len() != f1.dim() {
                bail!("{id}: z and x must each have length n = {}", f1.dim());
            }
            Experiment::SchurCrossPiRho {
                id: id.clone(),
                t,
                z: parse_scalars(field, z, "z")?,
                x: parse_scalars(field, x, "x")?,
                f1,
                f2,
            }
        }
        ExperimentDto::SchurOnedim { id, z1, x1, z2, x2 } => {
            if z1.len() != x1.len() || z2.len() != x2.len() || z1.len() != z2.len() {
                bail!("{id}: z1, x1, z2, x2 must all have the same length");
            }
            if z1.is_empty() {
                bail!("{id}: character parameters are empty");
            }
            Experiment::SchurOnedim {
                id: id.clone(),
                z1: parse_scalars(field, z1, "z1")?,
                x1: parse_scalars(field, x1, "x1")?,
                z2: parse_scalars(field, z2, "z2")?,
                x2: parse_scalars(field, x2, "x2")?,
            }
        }
        ExperimentDto::BraidingPairing { id, t, phi1, phi2 } => {
            let t = parse_scalar(field, t).with_context(|| format!("{id}: t"))?;
            nonzero(&t, "t")?;
            let phi1 = parse_function(field, phi1, "phi1")?;
            let phi2 = parse_function(field, phi2, "phi2")?;
            if phi1.dim() % 2 != 0 || phi1.dim() != phi2.dim() {
                bail!("{id}: phi1 and phi2 must live on K^{{2n}}");
            }
            Experiment::BraidingPairing { id: id.clone(), t, phi1, phi2 }
        }
        ExperimentDto::CtempConditionIi { id, t, f1, f2, k } => {
            let t = parse_scalar(field, t).with_context(|| format!("{id}: t"))?;
            nonzero(&t, "t")?;
            let f1 = parse_function(field, f1, "f1")?;
            let f2 = parse_function(field, f2, "f2")?;
            let k = match field {
                FieldDesc::Real => {
                    let x = k
                        .as_f64()
                        .ok_or_else(|| anyhow!("{id}: k must be a number"))?;
                    if x < 0.0 {
                        bail!("{id}: k must be nonnegative");
                    }
                    RealValue::Approx(x)
                }
                FieldDesc::Padic { .. } => RealValue::Exact(parse_rational(k)?),
            };
            Experiment::CtempConditionIi { id: id.clone(), t, f1, f2, k }
        }
    })
}

pub fn load(path: &std::path::Path) -> anyhow::Result<Suite> {
    debug_assert!(
        serde_json::from_str::<Value>(CONFIG_SCHEMA).is_ok(),
        "embedded schema must be valid JSON"
    );
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let dto: SuiteConfigDto =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    validate(dto)
}
