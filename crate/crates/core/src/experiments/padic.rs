//! Exact p-adic integration kernels behind the experiment drivers. Every
//! per-radius value on this path is a closed-form cyclotomic number, so the
//! limit statements become decidable equalities at finite radius.

use crate::error::Result;
use crate::field::CycloNumber;
use crate::reps::InfDimRep;
use crate::schwartz::{BallTerm, PadicBallChar, TestFunction};

/// The (a,b) integrand of a Schur pairing:
/// S(a,b) = M_{t1;f1,f2}(a,b) * conj(M_{t2;f3,f4}(a,b)), materialized.
pub fn schur_pair_surface(
    rep1: &InfDimRep,
    rep2: &InfDimRep,
    f1: &TestFunction,
    f2: &TestFunction,
    f3: &TestFunction,
    f4: &TestFunction,
) -> Result<PadicBallChar> {
    let s12 = rep1.coeff_surface(f1, f2)?;
    let s34 = rep2.coeff_surface(f3, f4)?;
    s12.as_padic()?.pointwise_mul(&s34.as_padic()?.conj())
}

/// int over B(p^m)^l of a materialized surface.
pub fn box_integral(s: &PadicBallChar, m: i64) -> Result<CycloNumber> {
    s.restrict_ball(m)?.integral()
}

/// Splits one term of a function on K^{2l} into the elementary tensor
/// u (x) v with the coefficient carried by u.
fn elementary_split(p: u64, l: usize, t: &BallTerm) -> Result<(PadicBallChar, PadicBallChar)> {
    let u = PadicBallChar::new(
        p,
        l,
        vec![BallTerm {
            coeff: t.coeff.clone(),
            center: t.center[..l].to_vec(),
            scale: t.scale[..l].to_vec(),
            freq: t.freq[..l].to_vec(),
        }],
    )?;
    let v = PadicBallChar::new(
        p,
        l,
        vec![BallTerm {
            coeff: CycloNumber::one(p),
            center: t.center[l..].to_vec(),
            scale: t.scale[l..].to_vec(),
            freq: t.freq[l..].to_vec(),
        }],
    )?;
    Ok((u, v))
}

/// The (a,b) integrand of the braiding pairing, materialized:
/// G(a,b) = <(pi_t(g^{-1}) (x) pi_t(g)) phi1, phi2> with g = (a,b,*), which
/// is c-free. Expanding both functions into elementary tensors
/// phi1 = sum_s u_s (x) v_s, phi2 = sum_r u'_r (x) v'_r gives
/// G = sum_{s,r} conj(M_{u'_r,u_s}) * M_{v_s,v'_r}.
pub fn braiding_surface(
    rep: &InfDimRep,
    phi1: &PadicBallChar,
    phi2: &PadicBallChar,
) -> Result<PadicBallChar> {
    let p = phi1.p();
    let l = phi1.dim() / 2;
    let mut acc = PadicBallChar::zero(p, 2 * l);
    for s in phi1.terms() {
        let (u_s, v_s) = elementary_split(p, l, s)?;
        for r in phi2.terms() {
            let (u_r, v_r) = elementary_split(p, l, r)?;
            let m_uu = rep
                .coeff_surface(&TestFunction::Padic(u_r.clone()), &TestFunction::Padic(u_s.clone()))?;
            let m_vv = rep
                .coeff_surface(&TestFunction::Padic(v_s.clone()), &TestFunction::Padic(v_r.clone()))?;
            let prod = m_uu.as_padic()?.conj().pointwise_mul(m_vv.as_padic()?)?;
            acc = acc.add(&prod)?;
        }
    }
    Ok(acc)
}
