//! Compactly supported locally constant functions on Q_p^l, represented as
//! finite sums of terms coeff * chi(freq . x) * 1_{center + p^scale Z_p^l}.
//! The class is closed under translation, modulation, Fourier transform,
//! pointwise products and the Fourier-Wigner shear, all in closed form with
//! exact cyclotomic coefficients.

use crate::error::{Error, Result};
use crate::field::{frac_part, padic_valuation, pow_rational, CycloNumber};
use num::rational::BigRational;
use num::traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct BallTerm {
    pub coeff: CycloNumber,
    pub center: Vec<BigRational>,
    /// per-coordinate scale: support factor center_j + p^{scale_j} Z_p
    pub scale: Vec<i64>,
    pub freq: Vec<BigRational>,
}

#[derive(Debug, Clone)]
pub struct PadicBallChar {
    p: u64,
    dim: usize,
    terms: Vec<BallTerm>,
}

/// chi(x) = e^{2 pi i {x}_p} as an exact cyclotomic number.
pub fn chi(p: u64, x: &BigRational) -> CycloNumber {
    CycloNumber::root_of_unity(p, &frac_part(p, x)).expect("p-power denominator")
}

fn chi_dot(p: u64, v: &[BigRational], x: &[BigRational]) -> CycloNumber {
    let dot: BigRational = v.iter().zip(x).map(|(a, b)| a * b).sum();
    chi(p, &dot)
}

/// Intersection of two cosets c1 + p^{k1} Z_p and c2 + p^{k2} Z_p:
/// `None` if disjoint, otherwise the (center, scale) of the finer coset.
fn intersect_cosets(
    p: u64,
    c1: &BigRational,
    k1: i64,
    c2: &BigRational,
    k2: i64,
) -> Option<(BigRational, i64)> {
    let coarse = k1.min(k2);
    let diff = c1 - c2;
    let compatible = match padic_valuation(p, &diff) {
        None => true,
        Some(v) => v >= coarse,
    };
    if !compatible {
        return None;
    }
    if k1 >= k2 {
        Some((c1.clone(), k1))
    } else {
        Some((c2.clone(), k2))
    }
}

/// int_{c + p^k Z_p} chi(w x) dx, in closed form.
fn coset_char_integral(p: u64, w: &BigRational, c: &BigRational, k: i64) -> CycloNumber {
    let vanishes = match padic_valuation(p, w) {
        None => false,
        Some(v) => v < -k,
    };
    if vanishes {
        CycloNumber::zero(p)
    } else {
        chi(p, &(w * c)).scale_pow(-k)
    }
}

impl PadicBallChar {
    pub fn new(p: u64, dim: usize, terms: Vec<BallTerm>) -> Result<Self> {
        for t in &terms {
            if t.center.len() != dim || t.scale.len() != dim || t.freq.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: t.center.len(),
                });
            }
        }
        let mut f = PadicBallChar { p, dim, terms };
        f.merge();
        Ok(f)
    }

    pub fn zero(p: u64, dim: usize) -> Self {
        PadicBallChar {
            p,
            dim,
            terms: vec![],
        }
    }

    /// The indicator of center + p^scale Z_p^l.
    pub fn indicator(p: u64, center: Vec<BigRational>, scale: i64) -> Self {
        let dim = center.len();
        PadicBallChar {
            p,
            dim,
            terms: vec![BallTerm {
                coeff: CycloNumber::one(p),
                center,
                scale: vec![scale; dim],
                freq: vec![BigRational::zero(); dim],
            }],
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[BallTerm] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.canonical_form().terms.is_empty()
    }

    pub fn scale_coeff(&self, c: &CycloNumber) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| BallTerm {
                coeff: t.coeff.mul(c).expect("same p"),
                ..t.clone()
            })
            .collect();
        PadicBallChar {
            p: self.p,
            dim: self.dim,
            terms,
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        self.scale_coeff(&CycloNumber::from_rational(self.p, q.clone()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PadicBallChar::new(self.p, self.dim, terms)
    }

    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| BallTerm {
                coeff: t.coeff.conj(),
                center: t.center.clone(),
                scale: t.scale.clone(),
                freq: t.freq.iter().map(|f| -f).collect(),
            })
            .collect();
        PadicBallChar {
            p: self.p,
            dim: self.dim,
            terms,
        }
    }

    /// x |-> f(x - a); the character factor picks up chi(-freq . a)
    pub fn translate(&self, a: &[BigRational]) -> Result<Self> {
        self.check_dim(a.len())?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(BallTerm {
                    coeff: t.coeff.mul(&chi_dot(self.p, &t.freq, a).conj())?,
                    center: t.center.iter().zip(a).map(|(c, s)| c + s).collect(),
                    scale: t.scale.clone(),
                    freq: t.freq.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PadicBallChar {
            p: self.p,
            dim: self.dim,
            terms,
        })
    }

    /// x |-> chi(xi . x) f(x)
    pub fn modulate(&self, xi: &[BigRational]) -> Result<Self> {
        self.check_dim(xi.len())?;
        let terms = self
            .terms
            .iter()
            .map(|t| BallTerm {
                coeff: t.coeff.clone(),
                center: t.center.clone(),
                scale: t.scale.clone(),
                freq: t.freq.iter().zip(xi).map(|(f, s)| f + s).collect(),
            })
            .collect();
        PadicBallChar::new(self.p, self.dim, terms)
    }

    /// Pointwise evaluation, exact.
    pub fn eval(&self, x: &[BigRational]) -> Result<CycloNumber> {
        self.check_dim(x.len())?;
        let mut acc = CycloNumber::zero(self.p);
        'terms: for t in &self.terms {
            for j in 0..self.dim {
                let d = &x[j] - &t.center[j];
                let inside = match padic_valuation(self.p, &d) {
                    None => true,
                    Some(v) => v >= t.scale[j],
                };
                if !inside {
                    continue 'terms;
                }
            }
            let v = t.coeff.mul(&chi_dot(self.p, &t.freq, x))?;
            acc = acc.add(&v)?;
        }
        Ok(acc)
    }

    /// <f, g> = int f conj(g), exact.
    pub fn inner(&self, other: &Self) -> Result<CycloNumber> {
        self.check_compatible(other)?;
        let mut acc = CycloNumber::zero(self.p);
        for s in &self.terms {
            for t in &other.terms {
                let mut contrib = s.coeff.mul(&t.coeff.conj())?;
                for j in 0..self.dim {
                    if contrib.is_zero() {
                        break;
                    }
                    let isect = intersect_cosets(
                        self.p,
                        &s.center[j],
                        s.scale[j],
                        &t.center[j],
                        t.scale[j],
                    );
                    match isect {
                        None => {
                            contrib = CycloNumber::zero(self.p);
                        }
                        Some((c, k)) => {
                            let w = &s.freq[j] - &t.freq[j];
                            contrib = contrib.mul(&coset_char_integral(self.p, &w, &c, k))?;
                        }
                    }
                }
                acc = acc.add(&contrib)?;
            }
        }
        Ok(acc)
    }

    /// Full-space integral; every term has compact support.
    pub fn integral(&self) -> Result<CycloNumber> {
        let mut acc = CycloNumber::zero(self.p);
        for t in &self.terms {
            let mut contrib = t.coeff.clone();
            for j in 0..self.dim {
                if contrib.is_zero() {
                    break;
                }
                contrib = contrib.mul(&coset_char_integral(
                    self.p,
                    &t.freq[j],
                    &t.center[j],
                    t.scale[j],
                ))?;
            }
            acc = acc.add(&contrib)?;
        }
        Ok(acc)
    }

    /// Pointwise product f * g (no conjugation).
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut terms = Vec::new();
        for s in &self.terms {
            'pair: for t in &other.terms {
                let mut center = Vec::with_capacity(self.dim);
                let mut scale = Vec::with_capacity(self.dim);
                for j in 0..self.dim {
                    match intersect_cosets(
                        self.p,
                        &s.center[j],
                        s.scale[j],
                        &t.center[j],
                        t.scale[j],
                    ) {
                        None => continue 'pair,
                        Some((c, k)) => {
                            center.push(c);
                            scale.push(k);
                        }
                    }
                }
                terms.push(BallTerm {
                    coeff: s.coeff.mul(&t.coeff)?,
                    center,
                    scale,
                    freq: s.freq.iter().zip(&t.freq).map(|(a, b)| a + b).collect(),
                });
            }
        }
        PadicBallChar::new(self.p, self.dim, terms)
    }

    /// (f tensor g)(x, y) = f(x) g(y)
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::FieldMismatch("tensor across different p".into()));
        }
        let dim = self.dim + other.dim;
        let mut terms = Vec::new();
        for s in &self.terms {
            for t in &other.terms {
                terms.push(BallTerm {
                    coeff: s.coeff.mul(&t.coeff)?,
                    center: [s.center.clone(), t.center.clone()].concat(),
                    scale: [s.scale.clone(), t.scale.clone()].concat(),
                    freq: [s.freq.clone(), t.freq.clone()].concat(),
                });
            }
        }
        PadicBallChar::new(self.p, dim, terms)
    }

    /// phi(x, y) -> phi(y, x) on K^{2l}.
    pub fn flip(&self) -> Result<Self> {
        if self.dim % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: self.dim + 1,
                got: self.dim,
            });
        }
        let l = self.dim / 2;
        let swap = |v: &[BigRational]| [v[l..].to_vec(), v[..l].to_vec()].concat();
        let terms = self
            .terms
            .iter()
            .map(|t| BallTerm {
                coeff: t.coeff.clone(),
                center: swap(&t.center),
                scale: [t.scale[l..].to_vec(), t.scale[..l].to_vec()].concat(),
                freq: swap(&t.freq),
            })
            .collect();
        PadicBallChar::new(self.p, self.dim, terms)
    }

    /// Fourier transform on the given coordinates:
    /// hat f(y) = int chi(-y . x) f(x) dx, in closed form per term.
    pub fn partial_fourier(&self, coords: &[usize]) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut out = t.clone();
            for &j in coords {
                let (c0, k, nu) = (t.center[j].clone(), t.scale[j], t.freq[j].clone());
                out.coeff = out
                    .coeff
                    .mul(&chi(self.p, &(&nu * &c0)))?
                    .scale_pow(-k);
                out.center[j] = nu;
                out.freq[j] = -c0;
                out.scale[j] = -k;
            }
            terms.push(out);
        }
        PadicBallChar::new(self.p, self.dim, terms)
    }

    pub fn fourier(&self) -> Result<Self> {
        let coords: Vec<usize> = (0..self.dim).collect();
        self.partial_fourier(&coords)
    }

    /// psi(a, x) = phi(x - a, x) on K^{2l}; the measure-preserving shear that
    /// factorizes the Fourier-Wigner transform.
    pub fn wigner_shear(&self) -> Result<Self> {
        if self.dim % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: self.dim + 1,
                got: self.dim,
            });
        }
        let l = self.dim / 2;
        let mut terms = Vec::new();
        for t in &self.terms {
            // refine the x-block coset of pair j to scale >= the u-block scale
            let target: Vec<i64> = (0..self.dim)
                .map(|j| {
                    if j >= l {
                        t.scale[j].max(t.scale[j - l])
                    } else {
                        t.scale[j]
                    }
                })
                .collect();
            for r in refine_term(self.p, t, &target) {
                let mut center = Vec::with_capacity(self.dim);
                let mut scale = Vec::with_capacity(self.dim);
                let mut freq = Vec::with_capacity(self.dim);
                for j in 0..l {
                    center.push(&r.center[l + j] - &r.center[j]);
                    scale.push(r.scale[j]);
                    freq.push(-&r.freq[j]);
                }
                for j in 0..l {
                    center.push(r.center[l + j].clone());
                    scale.push(r.scale[l + j]);
                    freq.push(&r.freq[j] + &r.freq[l + j]);
                }
                terms.push(BallTerm {
                    coeff: r.coeff,
                    center,
                    scale,
                    freq,
                });
            }
        }
        PadicBallChar::new(self.p, self.dim, terms)
    }

    /// phi(u, v) -> phi(-u, v): negates the first block.
    pub fn negate_first_block(&self) -> Result<Self> {
        if self.dim % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: self.dim + 1,
                got: self.dim,
            });
        }
        let l = self.dim / 2;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut out = t.clone();
                for j in 0..l {
                    out.center[j] = -&t.center[j];
                    out.freq[j] = -&t.freq[j];
                }
                out
            })
            .collect();
        PadicBallChar::new(self.p, self.dim, terms)
    }

    /// Substitutes y_j = t * x_j in coordinate j: h(y) viewed as a function
    /// of x, for nonzero rational t.
    pub fn dilate_coord(&self, j: usize, t: &BigRational) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::InvalidParameter("dilation by zero".into()));
        }
        let v = padic_valuation(self.p, t).unwrap();
        let terms = self
            .terms
            .iter()
            .map(|term| {
                let mut out = term.clone();
                out.center[j] = &term.center[j] / t;
                out.freq[j] = &term.freq[j] * t;
                out.scale[j] = term.scale[j] - v;
                out
            })
            .collect();
        PadicBallChar::new(self.p, self.dim, terms)
    }

    /// Intersects the support with B(p^m)^l.
    pub fn restrict_ball(&self, m: i64) -> Result<Self> {
        let zero = BigRational::zero();
        let mut terms = Vec::new();
        'terms: for t in &self.terms {
            let mut out = t.clone();
            for j in 0..self.dim {
                match intersect_cosets(self.p, &t.center[j], t.scale[j], &zero, -m) {
                    None => continue 'terms,
                    Some((c, k)) => {
                        out.center[j] = c;
                        out.scale[j] = k;
                    }
                }
            }
            terms.push(out);
        }
        PadicBallChar::new(self.p, self.dim, terms)
    }

    /// Smallest exponent m with support contained in B(p^m)^l; `None` for the
    /// empty function.
    pub fn support_exponent(&self) -> Option<i64> {
        let mut best: Option<i64> = None;
        for t in &self.terms {
            for j in 0..self.dim {
                let mut m = -t.scale[j];
                if let Some(v) = padic_valuation(self.p, &t.center[j]) {
                    m = m.max(-v);
                }
                best = Some(best.map_or(m, |b: i64| b.max(m)));
            }
        }
        best
    }

    /// Canonical form: all terms refined to a common per-coordinate scale,
    /// frequencies and centers reduced modulo the coset, equal keys merged,
    /// zero terms dropped, deterministic order.
    pub fn canonical_form(&self) -> Self {
        if self.terms.is_empty() {
            return self.clone();
        }
        let mut target = vec![i64::MIN; self.dim];
        for t in &self.terms {
            for j in 0..self.dim {
                target[j] = target[j].max(t.scale[j]);
            }
        }
        let mut refined = Vec::new();
        for t in &self.terms {
            refined.extend(refine_term(self.p, t, &target));
        }
        let mut f = PadicBallChar {
            p: self.p,
            dim: self.dim,
            terms: refined,
        };
        f.merge();
        f
    }

    /// Reduces each term to a canonical (center, freq) representative and
    /// merges identical keys. Does not refine scales.
    fn merge(&mut self) {
        let p = self.p;
        let mut map: BTreeMap<(Vec<BigRational>, Vec<i64>, Vec<BigRational>), CycloNumber> =
            BTreeMap::new();
        for t in &self.terms {
            let mut coeff = t.coeff.clone();
            let mut center = Vec::with_capacity(self.dim);
            let mut freq = Vec::with_capacity(self.dim);
            for j in 0..self.dim {
                let k = t.scale[j];
                // frequency representative modulo p^{-k} Z_p
                let nu = &t.freq[j];
                let w = frac_part(p, &(nu * pow_rational(p, k)));
                let nu_canon = w * pow_rational(p, -k);
                let dnu = nu - &nu_canon;
                if !dnu.is_zero() {
                    coeff = coeff
                        .mul(&chi(p, &(&dnu * &t.center[j])))
                        .expect("same p");
                }
                // center representative modulo p^k Z_p
                let c = &t.center[j];
                let c_canon = frac_part(p, &(c * pow_rational(p, -k))) * pow_rational(p, k);
                center.push(c_canon);
                freq.push(nu_canon);
            }
            let key = (center, t.scale.clone(), freq);
            match map.get_mut(&key) {
                Some(acc) => {
                    *acc = acc.add(&coeff).expect("same p");
                }
                None => {
                    map.insert(key, coeff);
                }
            }
        }
        self.terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((center, scale, freq), coeff)| BallTerm {
                coeff,
                center,
                scale,
                freq,
            })
            .collect();
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::FieldMismatch(format!(
                "p = {} vs p = {}",
                self.p, other.p
            )));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }
}

/// Splits a term into sub-cosets at the requested (finer or equal) scales.
fn refine_term(p: u64, t: &BallTerm, target: &[i64]) -> Vec<BallTerm> {
    let mut out = vec![t.clone()];
    for j in 0..target.len() {
        let from = t.scale[j];
        let to = target[j];
        if to <= from {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (p as usize).pow((to - from) as u32));
        for term in &out {
            // digits base p over exponents from..to
            let count = (p as i64).pow((to - from) as u32);
            for idx in 0..count {
                let mut offset = BigRational::zero();
                let mut rem = idx;
                for d in 0..(to - from) {
                    let digit = rem % p as i64;
                    rem /= p as i64;
                    if digit != 0 {
                        offset += BigRational::from_integer(digit.into())
                            * pow_rational(p, from + d);
                    }
                }
                let mut sub = term.clone();
                sub.center[j] = &term.center[j] + offset;
                sub.scale[j] = to;
                next.push(sub);
            }
        }
        out = next;
    }
    out
}
