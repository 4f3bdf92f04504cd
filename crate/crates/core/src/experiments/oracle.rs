//! Independent brute-force evaluation of the Folner integrals. The p-adic
//! oracle enumerates cosets at a constancy scale and evaluates the integrand
//! through the group action alone (pi_apply / braiding_apply / inner); the
//! real oracle uses dense midpoint quadrature for the b- and c-blocks. No
//! closed-form transform identities are used on this path.

use super::Caps;
use crate::error::{Error, Result};
use crate::field::{padic_valuation, pow_rational, CycloNumber, LocalScalar};
use crate::heisenberg::GroupElement;
use crate::reps::{InfDimRep, OneDimRep};
use crate::schwartz::{grid::for_each_index, PadicBallChar, TestFunction};
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::Zero;

/// Coset representatives of p^kappa Z_p inside B(p^m) = p^{-m} Z_p:
/// sum_{i=-m}^{kappa-1} d_i p^i with digits d_i in 0..p.
pub fn coset_reps(p: u64, m: i64, kappa: i64) -> Vec<BigRational> {
    let kappa = kappa.max(-m);
    let digits = (m + kappa) as u32;
    let mut reps = vec![BigRational::zero()];
    for i in 0..digits {
        let place = pow_rational(p, i as i64 - m);
        let mut next = Vec::with_capacity(reps.len() * p as usize);
        for r in &reps {
            for d in 0..p {
                next.push(r + &place * BigRational::from_integer(d.into()));
            }
        }
        reps = next;
    }
    reps
}

/// Smallest kappa such that every term of f is constant on cosets of
/// p^kappa Z_p^l (both the indicator and the character factor).
pub fn constancy_scale(f: &PadicBallChar) -> i64 {
    let mut kappa = i64::MIN;
    for t in f.terms() {
        for (j, &s) in t.scale.iter().enumerate() {
            kappa = kappa.max(s);
            if let Some(v) = padic_valuation(f.p(), &t.freq[j]) {
                kappa = kappa.max(-v);
            }
        }
    }
    kappa
}

fn max_support_exponent(fs: &[&PadicBallChar]) -> i64 {
    fs.iter()
        .filter_map(|f| f.support_exponent())
        .max()
        .unwrap_or(i64::MIN)
}

fn padic_value(t: &LocalScalar) -> Result<(u64, BigRational)> {
    match t {
        LocalScalar::Padic { p, value } => Ok((*p, value.clone())),
        LocalScalar::Real(_) => Err(Error::FieldMismatch("expected a p-adic scalar".into())),
    }
}

fn checked_count(p: u64, exponent: i64, caps: &Caps, what: &str) -> Result<u64> {
    if exponent < 0 {
        return Ok(1);
    }
    let mut count: u64 = 1;
    for _ in 0..exponent {
        count = count
            .checked_mul(p)
            .ok_or_else(|| Error::ResourceCap(format!("{what}: enumeration count overflows")))?;
        caps.check(count, what)?;
    }
    Ok(count)
}

/// Enumerates the cosets of B(p^m)^dims at scale kappa and folds the
/// integrand over representatives, returning the sum times the coset measure.
fn enumerate_box<F>(
    p: u64,
    dims: usize,
    m: i64,
    kappa: i64,
    caps: &Caps,
    what: &str,
    mut integrand: F,
) -> Result<CycloNumber>
where
    F: FnMut(&[BigRational]) -> Result<CycloNumber>,
{
    let kappa = kappa.max(-m);
    checked_count(p, (m + kappa) * dims as i64, caps, what)?;
    let reps = coset_reps(p, m, kappa);
    let shape = vec![reps.len(); dims];
    let mut acc = CycloNumber::zero(p);
    let mut err = None;
    for_each_index(&shape, |idx| {
        if err.is_some() {
            return;
        }
        let point: Vec<BigRational> = idx.iter().map(|&i| reps[i].clone()).collect();
        match integrand(&point) {
            Ok(v) => match acc.add(&v) {
                Ok(s) => acc = s,
                Err(e) => err = Some(e),
            },
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(acc.scale(&pow_rational(p, -kappa * dims as i64)))
}

fn padic_scalars(p: u64, xs: &[BigRational]) -> Vec<LocalScalar> {
    xs.iter()
        .map(|x| LocalScalar::Padic {
            p,
            value: x.clone(),
        })
        .collect()
}

/// Brute-force (1/mu(B(r^2))) int_F <pi_t1(g)f1,f2> conj(<pi_t2(g)f3,f4>) dg
/// at r = p^m, via coset enumeration of the full box B(p^m)^{2n} x B(p^{2m}).
#[allow(clippy::too_many_arguments)]
pub fn schur_oracle_padic(
    rep1: &InfDimRep,
    rep2: &InfDimRep,
    f1: &TestFunction,
    f2: &TestFunction,
    f3: &TestFunction,
    f4: &TestFunction,
    m: i64,
    caps: &Caps,
) -> Result<CycloNumber> {
    let (p, t1) = padic_value(rep1.t())?;
    let (_, t2) = padic_value(rep2.t())?;
    let n = f1.dim();
    let (q1, q2, q3, q4) = (f1.as_padic()?, f2.as_padic()?, f3.as_padic()?, f4.as_padic()?);
    let v1 = padic_valuation(p, &t1).expect("t1 != 0");
    let v2 = padic_valuation(p, &t2).expect("t2 != 0");
    let x_exp = max_support_exponent(&[q2, q4]);
    let mut kappa = [q1, q2, q3, q4]
        .iter()
        .map(|f| constancy_scale(f))
        .max()
        .unwrap();
    if x_exp > i64::MIN {
        kappa = kappa.max(x_exp - v1).max(x_exp - v2);
    }
    // the product's c-dependence is chi((t1 - t2) c)
    let dt = &t1 - &t2;
    let kappa_c = match padic_valuation(p, &dt) {
        Some(v) => -v,
        None => -2 * m,
    };
    let c_reps = coset_reps(p, 2 * m, kappa_c);
    let c_measure = pow_rational(p, -kappa_c.max(-2 * m));
    let mut acc = CycloNumber::zero(p);
    for c in &c_reps {
        let cs = LocalScalar::Padic {
            p,
            value: c.clone(),
        };
        let inner = enumerate_box(p, 2 * n, m, kappa, caps, "p-adic Schur oracle", |ab| {
            let g = GroupElement::new(
                padic_scalars(p, &ab[..n]),
                padic_scalars(p, &ab[n..]),
                cs.clone(),
            )?;
            let m12 = rep1.matrix_coeff(f1, f2, &g)?;
            let m34 = rep2.matrix_coeff(f3, f4, &g)?;
            m12.as_exact()
                .unwrap()
                .mul(&m34.as_exact().unwrap().conj())
        })?;
        acc = acc.add(&inner)?;
    }
    // times the c-coset measure, over mu(B(r^2)) = p^{2m}
    Ok(acc.scale(&(c_measure * pow_rational(p, -2 * m))))
}

/// Brute-force pi-vs-rho pairing, normalized by mu(B(r))^n mu(B(r^2)).
#[allow(clippy::too_many_arguments)]
pub fn pi_rho_oracle_padic(
    rep: &InfDimRep,
    rho: &OneDimRep,
    f1: &TestFunction,
    f2: &TestFunction,
    m: i64,
    caps: &Caps,
) -> Result<CycloNumber> {
    let (p, t) = padic_value(rep.t())?;
    let n = f1.dim();
    let (q1, q2) = (f1.as_padic()?, f2.as_padic()?);
    let v_t = padic_valuation(p, &t).expect("t != 0");
    let mut kappa = constancy_scale(q1).max(constancy_scale(q2));
    let x_exp = max_support_exponent(&[q2]);
    if x_exp > i64::MIN {
        kappa = kappa.max(x_exp - v_t);
    }
    for s in rho.z.iter().chain(&rho.x) {
        if let LocalScalar::Padic { value, .. } = s {
            if let Some(v) = padic_valuation(p, value) {
                kappa = kappa.max(-v);
            }
        }
    }
    let c_reps = coset_reps(p, 2 * m, -v_t);
    let c_measure = pow_rational(p, -(-v_t).max(-2 * m));
    let mut acc = CycloNumber::zero(p);
    for c in &c_reps {
        let cs = LocalScalar::Padic {
            p,
            value: c.clone(),
        };
        // chi(tc) from pi; rho is c-free
        let inner = enumerate_box(p, 2 * n, m, kappa, caps, "p-adic pi-rho oracle", |ab| {
            let g = GroupElement::new(
                padic_scalars(p, &ab[..n]),
                padic_scalars(p, &ab[n..]),
                cs.clone(),
            )?;
            let mc = rep.matrix_coeff(f1, f2, &g)?;
            let rv = rho.eval(&g)?.to_cyclo()?;
            mc.as_exact().unwrap().mul(&rv.conj())
        })?;
        acc = acc.add(&inner)?;
    }
    Ok(acc.scale(&(c_measure * pow_rational(p, -2 * m - m * n as i64))))
}

/// Brute-force (1/mu(F)) int_F rho1(g) conj(rho2(g)) dg at r = p^m.
pub fn onedim_oracle_padic(
    p: u64,
    rho1: &OneDimRep,
    rho2: &OneDimRep,
    m: i64,
    caps: &Caps,
) -> Result<CycloNumber> {
    let n = rho1.z.len();
    let mut kappa = i64::MIN;
    for s in rho1.z.iter().chain(&rho1.x).chain(&rho2.z).chain(&rho2.x) {
        if let LocalScalar::Padic { value, .. } = s {
            if let Some(v) = padic_valuation(p, value) {
                kappa = kappa.max(-v);
            }
        }
    }
    let zero_c = LocalScalar::Padic {
        p,
        value: BigRational::zero(),
    };
    // both characters are c-free, so the c-ball contributes its measure
    let ab = enumerate_box(p, 2 * n, m, kappa, caps, "p-adic onedim oracle", |ab| {
        let g = GroupElement::new(
            padic_scalars(p, &ab[..n]),
            padic_scalars(p, &ab[n..]),
            zero_c.clone(),
        )?;
        let v1 = rho1.eval(&g)?.to_cyclo()?;
        let v2 = rho2.eval(&g)?.to_cyclo()?;
        v1.mul(&v2.conj())
    })?;
    Ok(ab.scale(&pow_rational(p, -2 * m * n as i64)))
}

/// Brute-force (1/mu(B(r^2))) int_F <(pi_t(g^-1) (x) pi_t(g)) phi1, phi2> dg.
pub fn braiding_oracle_padic(
    rep: &InfDimRep,
    phi1: &TestFunction,
    phi2: &TestFunction,
    m: i64,
    caps: &Caps,
) -> Result<CycloNumber> {
    let (p, t) = padic_value(rep.t())?;
    let n = phi1.dim() / 2;
    let (q1, q2) = (phi1.as_padic()?, phi2.as_padic()?);
    let v_t = padic_valuation(p, &t).expect("t != 0");
    let x_exp = max_support_exponent(&[q1, q2]).max(m);
    let kappa = constancy_scale(q1)
        .max(constancy_scale(q2))
        .max(x_exp - v_t);
    let zero_c = LocalScalar::Padic {
        p,
        value: BigRational::zero(),
    };
    // the pairing is c-free: the c-ball measure cancels the normalizer
    enumerate_box(p, 2 * n, m, kappa, caps, "p-adic braiding oracle", |ab| {
        let g = GroupElement::new(
            padic_scalars(p, &ab[..n]),
            padic_scalars(p, &ab[n..]),
            zero_c.clone(),
        )?;
        let moved = rep.braiding_apply(&g, phi1)?;
        Ok(moved.inner(phi2)?.as_exact().unwrap().clone())
    })
}

// ---------------------------------------------------------------------------
// Real oracles: lattice a-steps, dense midpoint b- (and c-) quadrature
// ---------------------------------------------------------------------------

/// (1/2R) int_{-R}^{R} e^{2 pi i theta c} dc by midpoint quadrature.
pub fn char_box_quadrature(theta: f64, radius: f64, steps: usize) -> Complex64 {
    let delta = 2.0 * radius / steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..steps {
        let c = -radius + (i as f64 + 0.5) * delta;
        acc += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * theta * c);
    }
    acc * delta / (2.0 * radius)
}

/// Midpoint nodes for one b-coordinate over [-r, r].
fn b_nodes(r: f64, steps: usize) -> Vec<f64> {
    let delta = 2.0 * r / steps as f64;
    (0..steps)
        .map(|i| -r + (i as f64 + 0.5) * delta)
        .collect()
}

fn lattice_a_steps(h: f64, r: f64) -> Vec<i64> {
    let k = (r / h).floor() as i64;
    (-k..=k).collect()
}

/// Brute-force real Schur pairing over B(r)^{2n} (the c-phases cancel for
/// t1 = t2; for t1 != t2 multiply by the c-box quadrature separately).
#[allow(clippy::too_many_arguments)]
pub fn schur_oracle_real(
    rep1: &InfDimRep,
    rep2: &InfDimRep,
    f1: &TestFunction,
    f2: &TestFunction,
    f3: &TestFunction,
    f4: &TestFunction,
    r: f64,
    b_steps: usize,
    caps: &Caps,
) -> Result<Complex64> {
    let n = f1.dim();
    let h = f1.as_real()?.axes()[0].h;
    let a_steps = lattice_a_steps(h, r);
    let work = (a_steps.len() as u64).pow(n as u32)
        * (b_steps as u64).pow(n as u32)
        * f2.as_real()?.samples().len() as u64;
    caps.check(work, "real Schur oracle")?;
    let bs = b_nodes(r, b_steps);
    let delta_b = 2.0 * r / b_steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let a_shape = vec![a_steps.len(); n];
    let b_shape = vec![bs.len(); n];
    let mut err = None;
    for_each_index(&a_shape, |ai| {
        if err.is_some() {
            return;
        }
        let a: Vec<LocalScalar> = ai
            .iter()
            .map(|&i| LocalScalar::Real(a_steps[i] as f64 * h))
            .collect();
        for_each_index(&b_shape, |bi| {
            if err.is_some() {
                return;
            }
            let b: Vec<LocalScalar> = bi.iter().map(|&i| LocalScalar::Real(bs[i])).collect();
            let g = match GroupElement::new(a.clone(), b.clone(), LocalScalar::Real(0.0)) {
                Ok(g) => g,
                Err(e) => {
                    err = Some(e);
                    return;
                }
            };
            let val = rep1
                .matrix_coeff(f1, f2, &g)
                .and_then(|m12| rep2.matrix_coeff(f3, f4, &g).map(|m34| (m12, m34)));
            match val {
                Ok((m12, m34)) => {
                    acc += m12.to_c64() * m34.to_c64().conj();
                }
                Err(e) => err = Some(e),
            }
        });
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(acc * h.powi(n as i32) * delta_b.powi(n as i32))
}

/// Brute-force real pi-vs-rho (a,b) pairing over B(r)^{2n}:
/// int int M_t(a,b) conj(chi(z.a + xc.b)) da db by lattice/midpoint sums.
#[allow(clippy::too_many_arguments)]
pub fn pi_rho_oracle_real(
    rep: &InfDimRep,
    z: &[f64],
    xc: &[f64],
    f1: &TestFunction,
    f2: &TestFunction,
    r: f64,
    b_steps: usize,
    caps: &Caps,
) -> Result<Complex64> {
    let n = f1.dim();
    let h = f1.as_real()?.axes()[0].h;
    let a_steps = lattice_a_steps(h, r);
    let work = (a_steps.len() as u64).pow(n as u32)
        * (b_steps as u64).pow(n as u32)
        * f2.as_real()?.samples().len() as u64;
    caps.check(work, "real pi-rho oracle")?;
    let bs = b_nodes(r, b_steps);
    let delta_b = 2.0 * r / b_steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let a_shape = vec![a_steps.len(); n];
    let b_shape = vec![bs.len(); n];
    let mut err = None;
    for_each_index(&a_shape, |ai| {
        if err.is_some() {
            return;
        }
        let av: Vec<f64> = ai.iter().map(|&i| a_steps[i] as f64 * h).collect();
        let a: Vec<LocalScalar> = av.iter().map(|&x| LocalScalar::Real(x)).collect();
        for_each_index(&b_shape, |bi| {
            if err.is_some() {
                return;
            }
            let bv: Vec<f64> = bi.iter().map(|&i| bs[i]).collect();
            let b: Vec<LocalScalar> = bv.iter().map(|&x| LocalScalar::Real(x)).collect();
            let res = GroupElement::new(a.clone(), b.clone(), LocalScalar::Real(0.0))
                .and_then(|g| rep.matrix_coeff(f1, f2, &g));
            match res {
                Ok(mc) => {
                    let arg: f64 = z.iter().zip(&av).map(|(u, v)| u * v).sum::<f64>()
                        + xc.iter().zip(&bv).map(|(u, v)| u * v).sum::<f64>();
                    let phase =
                        Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * arg);
                    acc += mc.to_c64() * phase;
                }
                Err(e) => err = Some(e),
            }
        });
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(acc * h.powi(n as i32) * delta_b.powi(n as i32))
}

/// Brute-force real braiding pairing over B(r)^{2n}.
pub fn braiding_oracle_real(
    rep: &InfDimRep,
    phi1: &TestFunction,
    phi2: &TestFunction,
    r: f64,
    b_steps: usize,
    caps: &Caps,
) -> Result<Complex64> {
    let n = phi1.dim() / 2;
    let h = phi1.as_real()?.axes()[0].h;
    let a_steps = lattice_a_steps(h, r);
    let work = (a_steps.len() as u64).pow(n as u32)
        * (b_steps as u64).pow(n as u32)
        * phi2.as_real()?.samples().len() as u64;
    caps.check(work, "real braiding oracle")?;
    let bs = b_nodes(r, b_steps);
    let delta_b = 2.0 * r / b_steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let a_shape = vec![a_steps.len(); n];
    let b_shape = vec![bs.len(); n];
    let mut err = None;
    for_each_index(&a_shape, |ai| {
        if err.is_some() {
            return;
        }
        let a: Vec<LocalScalar> = ai
            .iter()
            .map(|&i| LocalScalar::Real(a_steps[i] as f64 * h))
            .collect();
        for_each_index(&b_shape, |bi| {
            if err.is_some() {
                return;
            }
            let b: Vec<LocalScalar> = bi.iter().map(|&i| LocalScalar::Real(bs[i])).collect();
            let res = GroupElement::new(a.clone(), b.clone(), LocalScalar::Real(0.0))
                .and_then(|g| rep.braiding_apply(&g, phi1))
                .and_then(|moved| moved.inner(phi2));
            match res {
                Ok(v) => acc += v.to_c64(),
                Err(e) => err = Some(e),
            }
        });
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(acc * h.powi(n as i32) * delta_b.powi(n as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::padic;
    use crate::schwartz::padic_indicator;
    use num::bigint::BigInt;
    use num::traits::One;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn coset_reps_cover_the_ball() {
        let reps = coset_reps(2, 1, 1);
        assert_eq!(reps.len(), 4);
        // distinct mod 2 Z_2
        for (i, a) in reps.iter().enumerate() {
            for b in reps.iter().skip(i + 1) {
                let d = a - b;
                assert!(padic_valuation(2, &d).unwrap() < 1);
            }
        }
    }

    #[test]
    fn schur_oracle_matches_fast_path() {
        let rep = InfDimRep::new(LocalScalar::padic(2, q(1, 1))).unwrap();
        let f = padic_indicator(2, &[0], 0);
        let g = padic_indicator(2, &[1], 1); // 1_{1 + 2 Z_2}
        let caps = Caps::default();
        let s = padic::schur_pair_surface(&rep, &rep, &f, &g, &f, &g).unwrap();
        for m in 0..2 {
            let fast = padic::box_integral(&s, m).unwrap();
            let slow = schur_oracle_padic(&rep, &rep, &f, &g, &f, &g, m, &caps).unwrap();
            assert_eq!(fast, slow, "mismatch at m={m}");
        }
    }

    #[test]
    fn braiding_oracle_matches_fast_path() {
        let rep = InfDimRep::new(LocalScalar::padic(2, q(1, 2))).unwrap();
        let f = padic_indicator(2, &[0], 0);
        let phi = f.tensor(&f).unwrap();
        let caps = Caps::default();
        let h = padic::braiding_surface(&rep, phi.as_padic().unwrap(), phi.as_padic().unwrap())
            .unwrap();
        for m in 0..2 {
            let fast = padic::box_integral(&h, m).unwrap();
            let slow = braiding_oracle_padic(&rep, &phi, &phi, m, &caps).unwrap();
            assert_eq!(fast, slow, "mismatch at m={m}");
        }
    }

    #[test]
    fn onedim_oracle_equal_characters() {
        let rho = OneDimRep::new(
            vec![LocalScalar::padic(2, q(1, 2))],
            vec![LocalScalar::padic(2, q(3, 1))],
        )
        .unwrap();
        let caps = Caps::default();
        for m in 0..3 {
            let v = onedim_oracle_padic(2, &rho, &rho, m, &caps).unwrap();
            assert!(v.try_rational().unwrap().is_one());
        }
    }

    #[test]
    fn real_schur_oracle_near_fast_path() {
        let rep = InfDimRep::new(LocalScalar::Real(1.0)).unwrap();
        let f = TestFunction::Real(
            crate::schwartz::RealGrid::indicator_box(&[0.0], &[1.0], 1.0 / 8.0).unwrap(),
        );
        let caps = Caps::default();
        let r = 2.0;
        let slow = schur_oracle_real(&rep, &rep, &f, &f, &f, &f, r, 96, &caps).unwrap();
        let fast = crate::experiments::real::schur_pair(
            1.0,
            1.0,
            f.as_real().unwrap(),
            f.as_real().unwrap(),
            f.as_real().unwrap(),
            f.as_real().unwrap(),
            r,
        )
        .unwrap();
        assert!(
            (slow - fast).norm() < 0.02,
            "fast {fast} vs oracle {slow}"
        );
    }

    #[test]
    fn cap_triggers() {
        let rep = InfDimRep::new(LocalScalar::padic(2, q(1, 1))).unwrap();
        let f = padic_indicator(2, &[0], 0);
        let caps = Caps { max_units: 4 };
        let err = schur_oracle_padic(&rep, &rep, &f, &f, &f, &f, 3, &caps).unwrap_err();
        assert!(matches!(err, Error::ResourceCap(_)));
    }
}
