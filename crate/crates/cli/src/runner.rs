//! Suite execution and report writing.

use crate::config::{Experiment, Suite};
use crate::plot;
use anyhow::Context;
use hschur_core::experiments::{
    braiding_pairing, ctemp_condition_ii, schur_cross_pi_rho, schur_cross_tt, schur_diag,
    schur_onedim,
};
use hschur_core::{Caps, Error, ExperimentReport, Verdict};
use rayon::prelude::*;
use std::io::Write;
use std::path::Path;

pub fn run_experiment(
    suite: &Suite,
    exp: &Experiment,
    caps: &Caps,
) -> Result<ExperimentReport, Error> {
    let schedule = &suite.schedule;
    let tol = suite.tolerance;
    match exp {
        Experiment::SchurDiag { id, t, f } => {
            schur_diag(id, t, &f[0], &f[1], &f[2], &f[3], schedule, tol, caps)
        }
        Experiment::SchurCrossTt { id, t1, t2, f } => {
            schur_cross_tt(id, t1, t2, &f[0], &f[1], &f[2], &f[3], schedule, tol, caps)
        }
        Experiment::SchurCrossPiRho { id, t, z, x, f1, f2 } => {
            schur_cross_pi_rho(id, t, z, x, f1, f2, schedule, tol, caps)
        }
        Experiment::SchurOnedim { id, z1, x1, z2, x2 } => {
            schur_onedim(id, z1, x1, z2, x2, schedule, tol)
        }
        Experiment::BraidingPairing { id, t, phi1, phi2 } => {
            braiding_pairing(id, t, phi1, phi2, schedule, tol, caps)
        }
        Experiment::CtempConditionIi { id, t, f1, f2, k } => {
            ctemp_condition_ii(id, t, f1, f2, k, schedule, tol, caps)
        }
    }
}

pub fn run_suite(suite: &Suite, caps: &Caps) -> Result<Vec<ExperimentReport>, Error> {
    suite
        .experiments
        .par_iter()
        .map(|exp| run_experiment(suite, exp, caps))
        .collect()
}

/// Writes bytes to `dir/name` atomically (write to a temp file in the same
/// directory, then rename).
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = std::fs::File::create(&tmp)
            .with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    let dest = dir.join(name);
    std::fs::rename(&tmp, &dest)
        .with_context(|| format!("renaming into place: {}", dest.display()))?;
    Ok(())
}

pub fn suite_csv(reports: &[ExperimentReport]) -> String {
    let mut out = String::from(ExperimentReport::CSV_HEADER);
    out.push('\n');
    for report in reports {
        for row in report.csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
    }
    out
}

pub fn suite_json(suite: &Suite, reports: &[ExperimentReport], seed: u64) -> serde_json::Value {
    let overall = if reports.iter().all(|r| r.verdict == Verdict::Pass) {
        "PASS"
    } else {
        "FAIL"
    };
    serde_json::json!({
        "suite": suite.name,
        "seed": seed,
        "overall": overall,
        "experiments": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    })
}

pub fn write_outputs(
    out_dir: &Path,
    suite: &Suite,
    reports: &[ExperimentReport],
    seed: u64,
) -> anyhow::Result<()> {
    let json = serde_json::to_string_pretty(&suite_json(suite, reports, seed))?;
    write_atomic(out_dir, "report.json", json.as_bytes())?;
    write_atomic(out_dir, "report.csv", suite_csv(reports).as_bytes())?;
    for report in reports {
        let svg = plot::render(report);
        write_atomic(out_dir, &format!("{}.svg", report.id), svg.as_bytes())?;
    }
    Ok(())
}
