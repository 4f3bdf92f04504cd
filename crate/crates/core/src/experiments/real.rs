//! Real-path integration kernels. The b-integral over B(r)^n is done in
//! closed form (sinc), so the only discretization error is the midpoint rule
//! on the function grids and the a-lattice.

use crate::error::{Error, Result};
use crate::schwartz::{grid::for_each_index, RealGrid};
use num::complex::Complex64;

/// sin(pi z) / (pi z), the unnormalized box-character integral kernel.
pub fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-12 {
        1.0
    } else {
        (std::f64::consts::PI * z).sin() / (std::f64::consts::PI * z)
    }
}

/// Nonzero grid nodes flattened: (absolute index, coordinates, value).
fn nodes(f: &RealGrid) -> Vec<(Vec<i64>, Vec<f64>, Complex64)> {
    let mut out = Vec::new();
    f.for_each_node(|abs, x, v| {
        if v.norm() != 0.0 {
            out.push((abs.to_vec(), x.to_vec(), v));
        }
    });
    out
}

/// Lattice translation steps s (per axis) for which f1(x - s h) can overlap
/// f2(x), intersected with |s h| <= r. Returns (start, len) per axis.
fn overlap_steps(f1: &RealGrid, f2: &RealGrid, r: f64) -> Vec<(i64, usize)> {
    f1.axes()
        .iter()
        .zip(f2.axes())
        .map(|(a1, a2)| {
            let lo_sup = a2.min - (a1.min + a1.len as i64 - 1);
            let hi_sup = (a2.min + a2.len as i64 - 1) - a1.min;
            let lo_r = (-r / a1.h).floor() as i64;
            let hi_r = (r / a1.h).ceil() as i64;
            let lo = lo_sup.max(lo_r);
            let hi = hi_sup.min(hi_r);
            if hi < lo {
                (0, 0)
            } else {
                (lo, (hi - lo + 1) as usize)
            }
        })
        .collect()
}

fn steps_shape(steps: &[(i64, usize)]) -> Vec<usize> {
    steps.iter().map(|&(_, l)| l).collect()
}

/// int int over B(r)^{2n} of M_{t1;f1,f2}(a,b) conj(M_{t2;f3,f4}(a,b)),
/// with the b-block integrated in closed form.
#[allow(clippy::too_many_arguments)]
pub fn schur_pair(
    t1: f64,
    t2: f64,
    f1: &RealGrid,
    f2: &RealGrid,
    f3: &RealGrid,
    f4: &RealGrid,
    r: f64,
) -> Result<Complex64> {
    let n = f1.dim();
    if [f2, f3, f4].iter().any(|f| f.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f2.dim(),
        });
    }
    let n12 = nodes(f2);
    let n34 = nodes(f4);
    // a must lie inside B(r) and let both pairs overlap
    let s12 = overlap_steps(f1, f2, r);
    let s34 = overlap_steps(f3, f4, r);
    let steps: Vec<(i64, usize)> = s12
        .iter()
        .zip(&s34)
        .map(|(&(l1, c1), &(l2, c2))| {
            let lo = l1.max(l2);
            let hi = (l1 + c1 as i64 - 1).min(l2 + c2 as i64 - 1);
            if hi < lo {
                (0, 0)
            } else {
                (lo, (hi - lo + 1) as usize)
            }
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    let cell = f1.cell_measure();
    for_each_index(&steps_shape(&steps), |sidx| {
        let s: Vec<i64> = sidx
            .iter()
            .zip(&steps)
            .map(|(&i, &(lo, _))| lo + i as i64)
            .collect();
        // precompute shifted f1 values on f2 nodes
        let mut inner12 = Vec::with_capacity(n12.len());
        for (abs, x, v2) in &n12 {
            let shifted: Vec<i64> = abs.iter().zip(&s).map(|(&i, &d)| i - d).collect();
            let v1 = f1.value_abs(&shifted);
            if v1.norm() != 0.0 {
                inner12.push((x.clone(), v1 * v2.conj()));
            }
        }
        if inner12.is_empty() {
            return;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (xp, x4v) in n34.iter().map(|(abs, xp, v4)| {
            let shifted: Vec<i64> = abs.iter().zip(&s).map(|(&i, &d)| i - d).collect();
            (xp, f3.value_abs(&shifted).conj() * v4)
        }) {
            if x4v.norm() == 0.0 {
                continue;
            }
            for (x, x2v) in &inner12 {
                let mut w = 1.0;
                for j in 0..n {
                    w *= 2.0 * r * sinc(2.0 * (t2 * xp[j] - t1 * x[j]) * r);
                }
                sum += x2v * x4v * w;
            }
        }
        acc += sum * cell; // a-measure h^n
    });
    Ok(acc * cell * cell) // x- and x'-measures
}

/// The pi-vs-rho cross pairing over B(r)^{2n}:
/// int int M_t(a,b) e^{-2 pi i (z.a + xc.b)} da db, b in closed form.
pub fn pi_rho_pair(
    t: f64,
    z: &[f64],
    xc: &[f64],
    f1: &RealGrid,
    f2: &RealGrid,
    r: f64,
) -> Result<Complex64> {
    let n = f1.dim();
    let n2 = nodes(f2);
    let steps = overlap_steps(f1, f2, r);
    let h = f1.axes()[0].h;
    let cell = f1.cell_measure();
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_index(&steps_shape(&steps), |sidx| {
        let s: Vec<i64> = sidx
            .iter()
            .zip(&steps)
            .map(|(&i, &(lo, _))| lo + i as i64)
            .collect();
        let za: f64 = s.iter().zip(z).map(|(&d, zj)| d as f64 * h * zj).sum();
        let a_phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * za);
        let mut sum = Complex64::new(0.0, 0.0);
        for (abs, x, v2) in &n2 {
            let shifted: Vec<i64> = abs.iter().zip(&s).map(|(&i, &d)| i - d).collect();
            let v1 = f1.value_abs(&shifted);
            if v1.norm() == 0.0 {
                continue;
            }
            let mut w = 1.0;
            for j in 0..n {
                w *= 2.0 * r * sinc(2.0 * (t * x[j] + xc[j]) * r);
            }
            sum += v1 * v2.conj() * w;
        }
        acc += a_phase * sum * cell;
    });
    Ok(acc * cell)
}

/// int int over B(r)^{2n} of <(pi_t(g^{-1}) (x) pi_t(g)) phi1, phi2> for
/// g = (a, b, *): b-block in closed form via
/// G(a,b) = sum_{x,y} e^{2 pi i t (a + x - y).b} phi1(x+a, y-a) conj phi2(x,y).
pub fn braiding_pair(t: f64, phi1: &RealGrid, phi2: &RealGrid, r: f64) -> Result<Complex64> {
    if phi1.dim() % 2 != 0 || phi1.dim() != phi2.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi1.dim(),
            got: phi2.dim(),
        });
    }
    let n = phi1.dim() / 2;
    let h = phi1.axes()[0].h;
    let n2 = nodes(phi2);
    // x + a inside phi1's first block while x in phi2's first block, and
    // y - a inside phi1's second block while y in phi2's second block
    let steps: Vec<(i64, usize)> = (0..n)
        .map(|j| {
            let a1x = &phi1.axes()[j];
            let a2x = &phi2.axes()[j];
            let lo_x = a1x.min - (a2x.min + a2x.len as i64 - 1);
            let hi_x = (a1x.min + a1x.len as i64 - 1) - a2x.min;
            let a1y = &phi1.axes()[n + j];
            let a2y = &phi2.axes()[n + j];
            let lo_y = a2y.min - (a1y.min + a1y.len as i64 - 1);
            let hi_y = (a2y.min + a2y.len as i64 - 1) - a1y.min;
            let lo_r = (-r / h).floor() as i64;
            let hi_r = (r / h).ceil() as i64;
            let lo = lo_x.max(lo_y).max(lo_r);
            let hi = hi_x.min(hi_y).min(hi_r);
            if hi < lo {
                (0, 0)
            } else {
                (lo, (hi - lo + 1) as usize)
            }
        })
        .collect();
    let cell_a: f64 = phi1.axes()[..n].iter().map(|a| a.h).product();
    let cell_phi = phi1.cell_measure();
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_index(&steps_shape(&steps), |sidx| {
        let s: Vec<i64> = sidx
            .iter()
            .zip(&steps)
            .map(|(&i, &(lo, _))| lo + i as i64)
            .collect();
        let mut sum = Complex64::new(0.0, 0.0);
        for (abs, xy, v2) in &n2 {
            let mut shifted = abs.clone();
            for j in 0..n {
                shifted[j] += s[j];
                shifted[n + j] -= s[j];
            }
            let v1 = phi1.value_abs(&shifted);
            if v1.norm() == 0.0 {
                continue;
            }
            let mut w = 1.0;
            for j in 0..n {
                let arg = s[j] as f64 * h + xy[j] - xy[n + j];
                w *= 2.0 * r * sinc(2.0 * t * arg * r);
            }
            sum += v1 * v2.conj() * w;
        }
        acc += sum * cell_a;
    });
    Ok(acc * cell_phi)
}
