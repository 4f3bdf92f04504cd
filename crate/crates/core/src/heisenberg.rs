//! The Heisenberg group H_n(K) = K^n x K^n x K with
//! (a1,b1,c1)(a2,b2,c2) = (a1+a2, b1+b2, c1+c2+a1.b2), together with the
//! Folner boxes F = B(r) x B(r) x B(r^2) and the symmetric-difference
//! geometry that makes them work under conjugation by a fixed compact set.

use crate::error::{Error, Result};
use crate::field::{ball_measure, pow_rational, radius_exponent, FieldDesc, LocalScalar, RealValue};
use num::rational::BigRational;
use num::traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub a: Vec<LocalScalar>,
    pub b: Vec<LocalScalar>,
    pub c: LocalScalar,
}

impl GroupElement {
    pub fn new(a: Vec<LocalScalar>, b: Vec<LocalScalar>, c: LocalScalar) -> Result<Self> {
        let field = c.field();
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        if a.iter().chain(&b).any(|s| s.field() != field) {
            return Err(Error::FieldMismatch(
                "group element coordinates span different fields".into(),
            ));
        }
        Ok(GroupElement { a, b, c })
    }

    pub fn identity(field: FieldDesc, n: usize) -> Self {
        GroupElement {
            a: vec![LocalScalar::zero(field); n],
            b: vec![LocalScalar::zero(field); n],
            c: LocalScalar::zero(field),
        }
    }

    pub fn field(&self) -> FieldDesc {
        self.c.field()
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    fn dot(u: &[LocalScalar], v: &[LocalScalar]) -> Result<LocalScalar> {
        let mut acc = LocalScalar::zero(u.first().map_or(FieldDesc::Real, |s| s.field()));
        for (x, y) in u.iter().zip(v) {
            acc = acc.add(&x.mul(y)?)?;
        }
        Ok(acc)
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        let a = self
            .a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| x.add(y))
            .collect::<Result<Vec<_>>>()?;
        let b = self
            .b
            .iter()
            .zip(&other.b)
            .map(|(x, y)| x.add(y))
            .collect::<Result<Vec<_>>>()?;
        let cross = if self.n() == 0 {
            LocalScalar::zero(self.field())
        } else {
            Self::dot(&self.a, &other.b)?
        };
        let c = self.c.add(&other.c)?.add(&cross)?;
        GroupElement::new(a, b, c)
    }

    /// (a,b,c)^{-1} = (-a, -b, -c + a.b)
    pub fn inv(&self) -> Result<GroupElement> {
        let a: Vec<_> = self.a.iter().map(|x| x.neg()).collect();
        let b: Vec<_> = self.b.iter().map(|x| x.neg()).collect();
        let ab = if self.n() == 0 {
            LocalScalar::zero(self.field())
        } else {
            Self::dot(&self.a, &self.b)?
        };
        let c = self.c.neg().add(&ab)?;
        GroupElement::new(a, b, c)
    }
}

/// The Folner box F = B(r) x B(r) x B(r^2) inside H_n(K).
#[derive(Debug, Clone)]
pub struct FolnerBox {
    pub field: FieldDesc,
    pub n: usize,
    pub r: RealValue,
}

impl FolnerBox {
    pub fn new(field: FieldDesc, n: usize, r: RealValue) -> Result<Self> {
        match (&field, &r) {
            (FieldDesc::Padic { p }, RealValue::Exact(q)) => {
                radius_exponent(*p, q)?;
            }
            (FieldDesc::Padic { .. }, RealValue::Approx(_)) => {
                return Err(Error::InvalidRadius("p-adic radii must be exact".into()));
            }
            (FieldDesc::Real, rv) => {
                if rv.to_f64() <= 0.0 {
                    return Err(Error::InvalidRadius("nonpositive radius".into()));
                }
            }
        }
        Ok(FolnerBox { field, n, r })
    }

    pub fn r_squared(&self) -> RealValue {
        match &self.r {
            RealValue::Exact(q) => RealValue::Exact(q * q),
            RealValue::Approx(x) => RealValue::Approx(x * x),
        }
    }

    pub fn measure(&self) -> Result<RealValue> {
        let ab = ball_measure(self.field, self.n as u32, &self.r)?;
        let c = ball_measure(self.field, 1, &self.r_squared())?;
        Ok(match (ab, c) {
            (RealValue::Exact(x), RealValue::Exact(y)) => RealValue::Exact(&x * &x * y),
            (x, y) => RealValue::Approx(x.to_f64() * x.to_f64() * y.to_f64()),
        })
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        if g.field() != self.field || g.n() != self.n {
            return Err(Error::FieldMismatch("element outside the box's group".into()));
        }
        let r2 = self.r_squared();
        for x in g.a.iter().chain(&g.b) {
            if !x.in_ball(&self.r)? {
                return Ok(false);
            }
        }
        g.c.in_ball(&r2)
    }
}

/// Whether g2^{-1} F g1 = F for ALL g1, g2 with every coordinate of norm
/// <= k, over Q_p with r = p^m, k = p^j. Exact in both directions: the
/// ultrametric inequality gives equality when r >= k, and when r < k the
/// element g2 = (x1, 0, 0) with |x1| = k moves the corner of the c-ball out.
pub fn ultrametric_symdiff_empty(p: u64, r: &BigRational, k: &BigRational) -> Result<bool> {
    radius_exponent(p, r)?;
    radius_exponent(p, k)?;
    Ok(r >= k)
}

/// One rectangular box B(r_ab)^{2n} x B(r_c) in H_n(R).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealBoxTriple {
    pub r_ab: f64,
    pub r_c: f64,
    pub n: usize,
}

impl RealBoxTriple {
    pub fn measure(&self) -> f64 {
        (2.0 * self.r_ab).powi(2 * self.n as i32) * 2.0 * self.r_c
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        for x in g.a.iter().chain(&g.b) {
            if !x.in_ball(&RealValue::Approx(self.r_ab))? {
                return Ok(false);
            }
        }
        g.c.in_ball(&RealValue::Approx(self.r_c))
    }
}

pub struct SandwichBoxes {
    /// None when the inner box is degenerate (r too small relative to k).
    pub inner: Option<RealBoxTriple>,
    pub outer: RealBoxTriple,
}

/// Boxes squeezing g2^{-1} F g1 for all g1, g2 in B(k)^{2n+1}:
/// inner subset of F cap g2^{-1} F g1 and F cup g2^{-1} F g1 subset of outer.
pub fn sandwich_boxes(r: f64, k: f64, n: usize) -> Result<SandwichBoxes> {
    if r <= 0.0 || k < 0.0 {
        return Err(Error::InvalidRadius(format!("r = {r}, k = {k}")));
    }
    let nf = n as f64;
    let c_slack = 2.0 * k * (nf * r + 1.0) + nf * k * k;
    let outer = RealBoxTriple {
        r_ab: r + 2.0 * k,
        r_c: r * r + c_slack,
        n,
    };
    let inner_ab = r - 2.0 * k;
    let inner_c = r * r - c_slack;
    let inner = if inner_ab > 0.0 && inner_c > 0.0 {
        Some(RealBoxTriple {
            r_ab: inner_ab,
            r_c: inner_c,
            n,
        })
    } else {
        None
    };
    Ok(SandwichBoxes { inner, outer })
}

/// (measure(outer) - measure(inner)) / measure(F): an upper bound for
/// sup mu(g2^{-1} F g1 symdiff F) / mu(F) over g1, g2 in B(k)^{2n+1}.
/// Falls back to measure(outer)/measure(F) when the inner box is degenerate.
pub fn symdiff_ratio_bound(r: f64, k: f64, n: usize) -> Result<f64> {
    if k == 0.0 {
        return Ok(0.0);
    }
    let s = sandwich_boxes(r, k, n)?;
    let f = RealBoxTriple { r_ab: r, r_c: r * r, n }.measure();
    match s.inner {
        Some(inner) => Ok((s.outer.measure() - inner.measure()) / f),
        None => Ok(s.outer.measure() / f),
    }
}

pub struct MonteCarloEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Monte Carlo estimate of mu(g2^{-1} F g1 symdiff F) / mu(F) by uniform
/// sampling of the outer sandwich box; deterministic given the seed.
pub fn symdiff_ratio_montecarlo(
    r: f64,
    k: f64,
    n: usize,
    g1: &GroupElement,
    g2: &GroupElement,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if g1.field() != FieldDesc::Real || g2.field() != FieldDesc::Real {
        return Err(Error::UnsupportedOperation("symdiff Monte Carlo", "p-adic"));
    }
    let f_box = RealBoxTriple { r_ab: r, r_c: r * r, n };
    let outer = sandwich_boxes(r, k, n)?.outer;
    let g1_inv = g1.inv()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let a: Vec<LocalScalar> = (0..n)
            .map(|_| LocalScalar::Real(rng.random_range(-outer.r_ab..outer.r_ab)))
            .collect();
        let b: Vec<LocalScalar> = (0..n)
            .map(|_| LocalScalar::Real(rng.random_range(-outer.r_ab..outer.r_ab)))
            .collect();
        let c = LocalScalar::Real(rng.random_range(-outer.r_c..outer.r_c));
        let x = GroupElement::new(a, b, c)?;
        let in_f = f_box.contains(&x)?;
        // x in g2^{-1} F g1  iff  g2 x g1^{-1} in F
        let moved = g2.mul(&x)?.mul(&g1_inv)?;
        let in_conj = f_box.contains(&moved)?;
        if in_f != in_conj {
            hits += 1;
        }
    }
    let p_hat = hits as f64 / samples as f64;
    let rescale = outer.measure() / f_box.measure();
    let stderr = (p_hat * (1.0 - p_hat) / samples as f64).sqrt() * rescale;
    Ok(MonteCarloEstimate {
        value: p_hat * rescale,
        stderr,
        samples,
    })
}

/// Uniform-ish sample from the p-adic ball B(p^e), exact rational output:
/// random digits over exponents -e .. prec.
pub fn sample_padic_ball(p: u64, e: i64, prec: i64, rng: &mut impl Rng) -> BigRational {
    let mut x = BigRational::zero();
    let mut j = -e;
    while j <= prec {
        let digit = rng.random_range(0..p) as i64;
        if digit != 0 {
            x += BigRational::from_integer(digit.into()) * pow_rational(p, j);
        }
        j += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pel(p: u64, av: &[BigRational], bv: &[BigRational], cv: BigRational) -> GroupElement {
        GroupElement::new(
            av.iter()
                .map(|x| LocalScalar::padic(p, x.clone()))
                .collect(),
            bv.iter()
                .map(|x| LocalScalar::padic(p, x.clone()))
                .collect(),
            LocalScalar::padic(p, cv),
        )
        .unwrap()
    }

    #[test]
    fn multiplication_rule_examples() {
        // (1,0,0)(0,1,0) = (1,1,1)
        let g = pel(2, &[q(1, 1)], &[q(0, 1)], q(0, 1));
        let h = pel(2, &[q(0, 1)], &[q(1, 1)], q(0, 1));
        assert_eq!(g.mul(&h).unwrap(), pel(2, &[q(1, 1)], &[q(1, 1)], q(1, 1)));
        // (1/2,0,0)(0,1/2,0) = (1/2,1/2,1/4)
        let g = pel(2, &[q(1, 2)], &[q(0, 1)], q(0, 1));
        let h = pel(2, &[q(0, 1)], &[q(1, 2)], q(0, 1));
        assert_eq!(
            g.mul(&h).unwrap(),
            pel(2, &[q(1, 2)], &[q(1, 2)], q(1, 4))
        );
        // identity laws
        let e = GroupElement::identity(FieldDesc::Padic { p: 2 }, 1);
        assert_eq!(g.mul(&e).unwrap(), g);
        assert_eq!(e.mul(&g).unwrap(), g);
    }

    #[test]
    fn inverse_examples() {
        let e = GroupElement::identity(FieldDesc::Padic { p: 3 }, 1);
        assert_eq!(e.inv().unwrap(), e);
        // inv((1,2,3)) = (-1,-2,-1)
        let g = pel(3, &[q(1, 1)], &[q(2, 1)], q(3, 1));
        let gi = g.inv().unwrap();
        assert_eq!(gi, pel(3, &[q(-1, 1)], &[q(-2, 1)], q(-1, 1)));
        assert_eq!(g.mul(&gi).unwrap(), e);
        assert_eq!(gi.mul(&g).unwrap(), e);
        assert_eq!(gi.inv().unwrap(), g);
    }

    #[test]
    fn associativity_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut r = || sample_padic_ball(2, 2, 3, &mut rng) - q(1, 1);
            let g = pel(2, &[r()], &[r()], r());
            let h = pel(2, &[r()], &[r()], r());
            let k = pel(2, &[r()], &[r()], r());
            assert_eq!(
                g.mul(&h).unwrap().mul(&k).unwrap(),
                g.mul(&h.mul(&k).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn folner_measures() {
        let f = FolnerBox::new(FieldDesc::Real, 1, RealValue::Approx(1.0)).unwrap();
        assert!((f.measure().unwrap().to_f64() - 8.0).abs() < 1e-12);
        let f = FolnerBox::new(FieldDesc::Padic { p: 2 }, 1, RealValue::Exact(q(1, 1))).unwrap();
        assert_eq!(f.measure().unwrap(), RealValue::Exact(q(1, 1)));
        let f = FolnerBox::new(FieldDesc::Padic { p: 2 }, 1, RealValue::Exact(q(2, 1))).unwrap();
        assert_eq!(f.measure().unwrap(), RealValue::Exact(q(16, 1)));
        assert!(FolnerBox::new(FieldDesc::Padic { p: 2 }, 1, RealValue::Exact(q(3, 1))).is_err());
    }

    #[test]
    fn ultrametric_criterion() {
        assert!(ultrametric_symdiff_empty(2, &q(2, 1), &q(2, 1)).unwrap());
        assert!(!ultrametric_symdiff_empty(2, &q(1, 1), &q(2, 1)).unwrap());
        for m in 0..5 {
            let r = pow_rational(2, m);
            assert!(ultrametric_symdiff_empty(2, &r, &q(1, 1)).unwrap());
        }
        assert!(ultrametric_symdiff_empty(2, &q(3, 1), &q(1, 1)).is_err());
    }

    #[test]
    fn ultrametric_true_branch_has_no_witness() {
        // r >= k: no sampled point lands in the symmetric difference
        let p = 2u64;
        let (rm, km) = (1i64, 1i64); // r = k = 2
        let r = pow_rational(p, rm);
        let k = pow_rational(p, km);
        assert!(ultrametric_symdiff_empty(p, &r, &k).unwrap());
        let f = FolnerBox::new(FieldDesc::Padic { p }, 1, RealValue::Exact(r)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bound = rm.max(km) + 1; // sample up to norm max(r,k)*p
        for _ in 0..2000 {
            let mut s = |e: i64| sample_padic_ball(p, e, 3, &mut rng);
            let g1 = pel(p, &[s(km)], &[s(km)], s(km));
            let g2 = pel(p, &[s(km)], &[s(km)], s(km));
            let x = pel(p, &[s(bound)], &[s(bound)], s(2 * bound));
            let in_f = f.contains(&x).unwrap();
            let moved = g2.mul(&x).unwrap().mul(&g1.inv().unwrap()).unwrap();
            assert_eq!(in_f, f.contains(&moved).unwrap());
        }
    }

    #[test]
    fn ultrametric_false_branch_witness() {
        // r < k: g2 = (x1, 0, 0) with |x1| = k pushes a corner point out
        let p = 2u64;
        let r = pow_rational(p, 0); // r = 1
        let k = pow_rational(p, 1); // k = 2
        assert!(!ultrametric_symdiff_empty(p, &r, &k).unwrap());
        let f = FolnerBox::new(FieldDesc::Padic { p }, 1, RealValue::Exact(r)).unwrap();
        let g2 = pel(p, &[q(1, 2)], &[q(0, 1)], q(0, 1)); // |1/2|_2 = 2 = k
        let g1 = GroupElement::identity(FieldDesc::Padic { p }, 1);
        // x = (0, b, 0) with |b| = r = 1: in F, but g2 x g1^{-1} has
        // c-coordinate x1 * b of norm k*r = 2 > r^2 = 1
        let x = pel(p, &[q(0, 1)], &[q(1, 1)], q(0, 1));
        assert!(f.contains(&x).unwrap());
        let moved = g2.mul(&x).unwrap().mul(&g1.inv().unwrap()).unwrap();
        assert!(!f.contains(&moved).unwrap());
    }

    #[test]
    fn sandwich_examples() {
        let s = sandwich_boxes(100.0, 1.0, 1).unwrap();
        assert_eq!(s.outer.r_ab, 102.0);
        assert_eq!(s.outer.r_c, 10203.0);
        let inner = s.inner.unwrap();
        assert_eq!(inner.r_ab, 98.0);
        assert_eq!(inner.r_c, 9797.0);
        // degenerate: r=2, k=1 has 2*1*(2+1)+1 = 7 > 4
        assert!(sandwich_boxes(2.0, 1.0, 1).unwrap().inner.is_none());
        // k = 0 collapses to F itself
        let s = sandwich_boxes(5.0, 0.0, 1).unwrap();
        assert_eq!(s.outer.r_ab, 5.0);
        assert_eq!(s.inner.unwrap().r_c, 25.0);
    }

    #[test]
    fn sandwich_correctness_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (r, k, n) = (10.0, 1.0, 1usize);
        let s = sandwich_boxes(r, k, n).unwrap();
        let inner = s.inner.unwrap();
        let f_box = RealBoxTriple { r_ab: r, r_c: r * r, n };
        for _ in 0..500 {
            let mut sc = |bound: f64| LocalScalar::Real(rng.random_range(-bound..bound));
            let g1 = GroupElement::new(vec![sc(k)], vec![sc(k)], sc(k)).unwrap();
            let g2 = GroupElement::new(vec![sc(k)], vec![sc(k)], sc(k)).unwrap();
            // every point of the inner box, moved as g2^{-1} x g1, lands in F
            let x = GroupElement::new(
                vec![sc(inner.r_ab)],
                vec![sc(inner.r_ab)],
                sc(inner.r_c),
            )
            .unwrap();
            let moved = g2.inv().unwrap().mul(&x).unwrap().mul(&g1).unwrap();
            assert!(f_box.contains(&moved).unwrap());
            // every point of F, moved as g2 x g1^{-1}, lands in the outer box
            let y = GroupElement::new(vec![sc(r)], vec![sc(r)], sc(r * r)).unwrap();
            let moved = g2.mul(&y).unwrap().mul(&g1.inv().unwrap()).unwrap();
            assert!(s.outer.contains(&moved).unwrap());
        }
    }

    #[test]
    fn ratio_bound_values() {
        let b = symdiff_ratio_bound(100.0, 1.0, 1).unwrap();
        assert!((b - 0.1206).abs() < 1e-4, "bound {b}");
        assert!(symdiff_ratio_bound(1000.0, 1.0, 1).unwrap() < 0.013);
        assert_eq!(symdiff_ratio_bound(10.0, 0.0, 1).unwrap(), 0.0);
    }

    #[test]
    fn ratio_bound_monotone_beyond_degeneracy() {
        let mut prev = f64::INFINITY;
        for r in [10.0, 20.0, 40.0, 80.0, 160.0, 320.0] {
            let b = symdiff_ratio_bound(r, 1.0, 1).unwrap();
            assert!(b < prev, "bound not decreasing at r = {r}");
            prev = b;
        }
    }

    #[test]
    fn montecarlo_matches_bound() {
        let n = 1usize;
        let e = GroupElement::identity(FieldDesc::Real, n);
        // k = 0, identity conjugators: exactly zero
        let est = symdiff_ratio_montecarlo(10.0, 0.0, n, &e, &e, 2000, 1).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.stderr, 0.0);
        // randomized panel: estimate never exceeds bound + 3 stderr
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..5 {
            let (r, k) = (50.0 + 25.0 * trial as f64, 1.0);
            let mut sc = || LocalScalar::Real(rng.random_range(-k..k));
            let g1 = GroupElement::new(vec![sc()], vec![sc()], sc()).unwrap();
            let g2 = GroupElement::new(vec![sc()], vec![sc()], sc()).unwrap();
            let est = symdiff_ratio_montecarlo(r, k, 1, &g1, &g2, 4000, 42 + trial).unwrap();
            let bound = symdiff_ratio_bound(r, k, 1).unwrap();
            assert!(
                est.value <= bound + 3.0 * est.stderr,
                "r={r}: {} > {bound} + 3*{}",
                est.value,
                est.stderr
            );
        }
        // worst-case corner conjugator at r=100, k=1: strictly positive,
        // below the closed-form bound
        let corner = GroupElement::new(
            vec![LocalScalar::Real(1.0)],
            vec![LocalScalar::Real(1.0)],
            LocalScalar::Real(1.0),
        )
        .unwrap();
        let est =
            symdiff_ratio_montecarlo(100.0, 1.0, 1, &corner, &corner.inv().unwrap(), 20000, 9)
                .unwrap();
        assert!(est.value > 0.0);
        assert!(est.value <= 0.1207 + 3.0 * est.stderr);
    }
}
