//! Exact complex arithmetic in the cyclotomic fields Q(zeta_{p^k}).
//!
//! Values are kept in canonical form: coefficients over the power basis
//! {zeta^j : j < phi(p^k)} with the level demoted to the smallest field
//! containing the value. Character sums over p-adic balls then cancel to an
//! exact, decidable zero.

use crate::error::{Error, Result};
use crate::field::pow_rational;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct CycloNumber {
    p: u64,
    /// level exponent: the value lives in Q(zeta_{p^k})
    k: u32,
    /// power-basis coefficients, length phi(p^k)
    coeffs: Vec<BigRational>,
}

fn phi(p: u64, k: u32) -> usize {
    if k == 0 {
        1
    } else {
        ((p - 1) * p.pow(k - 1)) as usize
    }
}

impl CycloNumber {
    pub fn zero(p: u64) -> Self {
        CycloNumber {
            p,
            k: 0,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one(p: u64) -> Self {
        CycloNumber::from_rational(p, BigRational::one())
    }

    pub fn from_rational(p: u64, q: BigRational) -> Self {
        CycloNumber {
            p,
            k: 0,
            coeffs: vec![q],
        }
    }

    /// e^{2 pi i theta} for theta = m / p^e in [0,1).
    pub fn root_of_unity(p: u64, theta: &BigRational) -> Result<Self> {
        if theta.is_zero() {
            return Ok(CycloNumber::one(p));
        }
        let mut e = 0u32;
        let mut d = theta.denom().clone();
        let pb = num::bigint::BigInt::from(p);
        while !d.is_one() {
            let (q, r) = num::Integer::div_rem(&d, &pb);
            if !r.is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "phase {theta} does not have a {p}-power denominator"
                )));
            }
            d = q;
            e += 1;
        }
        let level = num::bigint::BigInt::from(p).pow(e);
        let idx = num::Integer::mod_floor(theta.numer(), &level);
        let idx: usize = num::traits::ToPrimitive::to_usize(&idx).unwrap();
        let mut dense = vec![BigRational::zero(); p.pow(e) as usize];
        dense[idx] = BigRational::one();
        Ok(CycloNumber::from_dense(p, e, dense))
    }

    pub fn level_exponent(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Rebuilds a value from power-basis coefficients at level k (length must
    /// be phi(p^k)); re-canonicalized.
    pub fn from_coeffs(p: u64, k: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != phi(p, k) {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients at level {k}, got {}",
                phi(p, k),
                coeffs.len()
            )));
        }
        let mut out = CycloNumber { p, k, coeffs };
        out.demote();
        Ok(out)
    }

    /// Builds a canonical value from a dense exponent vector of length p^k.
    fn from_dense(p: u64, k: u32, mut dense: Vec<BigRational>) -> Self {
        let n = dense.len();
        debug_assert_eq!(n as u64, p.pow(k));
        let ph = phi(p, k);
        if k > 0 {
            let step = p.pow(k - 1) as usize;
            // zeta^{e' + (p-1)p^{k-1}} = -sum_{i<p-1} zeta^{e' + i p^{k-1}}
            for e in ph..n {
                if dense[e].is_zero() {
                    continue;
                }
                let c = std::mem::replace(&mut dense[e], BigRational::zero());
                let base = e - (p as usize - 1) * step;
                for i in 0..(p as usize - 1) {
                    let t = base + i * step;
                    dense[t] = &dense[t] - &c;
                }
            }
        }
        dense.truncate(ph);
        let mut out = CycloNumber {
            p,
            k,
            coeffs: dense,
        };
        out.demote();
        out
    }

    /// Lowers the level as far as the support of the coefficients allows.
    fn demote(&mut self) {
        while self.k > 0 {
            let step = self.p as usize;
            let reducible = self
                .coeffs
                .iter()
                .enumerate()
                .all(|(j, c)| c.is_zero() || j % step == 0);
            if !reducible {
                return;
            }
            let ph = phi(self.p, self.k - 1);
            let mut next = vec![BigRational::zero(); ph];
            for (j, c) in self.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    next[j / step] = c.clone();
                }
            }
            self.coeffs = next;
            self.k -= 1;
        }
    }

    fn promoted_dense(&self, k: u32) -> Vec<BigRational> {
        let n = self.p.pow(k) as usize;
        let scale = self.p.pow(k - self.k) as usize;
        let mut dense = vec![BigRational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[j * scale] = c.clone();
            }
        }
        dense
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_p(other)?;
        let k = self.k.max(other.k);
        let mut a = self.promoted_dense(k);
        let b = other.promoted_dense(k);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        Ok(CycloNumber::from_dense(self.p, k, a))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloNumber {
            p: self.p,
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_p(other)?;
        let k = self.k.max(other.k);
        let n = self.p.pow(k) as usize;
        let a = self.promoted_dense(k);
        let b = other.promoted_dense(k);
        let mut prod = vec![BigRational::zero(); n];
        for (i, ci) in a.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in b.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let t = (i + j) % n;
                prod[t] = &prod[t] + &(ci * cj);
            }
        }
        Ok(CycloNumber::from_dense(self.p, k, prod))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycloNumber {
            p: self.p,
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Complex conjugation: zeta^j -> zeta^{-j}.
    pub fn conj(&self) -> Self {
        if self.k == 0 {
            return self.clone();
        }
        let n = self.p.pow(self.k) as usize;
        let mut dense = vec![BigRational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[(n - j) % n] = c.clone();
            }
        }
        CycloNumber::from_dense(self.p, self.k, dense)
    }

    /// The rational value, if the number is rational.
    pub fn try_rational(&self) -> Option<BigRational> {
        if self.k == 0 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        let n = self.p.pow(self.k) as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * (j as f64) / n;
            acc += Complex64::from_polar(1.0, angle)
                * num::traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
        }
        acc
    }

    /// |z|^2 = z * conj(z).
    pub fn abs_sq(&self) -> Self {
        self.mul(&self.conj()).expect("same p")
    }

    /// Multiply by p^e.
    pub fn scale_pow(&self, e: i64) -> Self {
        self.scale(&pow_rational(self.p, e))
    }

    fn check_p(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::FieldMismatch(format!(
                "cyclotomic numbers over p={} and p={}",
                self.p, other.p
            )));
        }
        Ok(())
    }
}
