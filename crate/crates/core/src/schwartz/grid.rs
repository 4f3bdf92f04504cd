//! Grid-sampled test functions on R^l with midpoint-rule semantics: each
//! lattice node carries measure h^l. Transforms map onto dual lattices and
//! are unitary at the discrete level, so the only error source in verified
//! identities is the Riemann sum itself.

use crate::error::{Error, Result};
use num::complex::Complex64;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub h: f64,
    pub min: i64,
    pub len: usize,
    /// node coordinate = (min + idx + offset) * h; offset is 0 or 1/2
    pub offset: f64,
}

impl Axis {
    pub fn node(&self, idx: usize) -> f64 {
        (self.min + idx as i64) as f64 * self.h + self.offset * self.h
    }

    fn compatible(&self, other: &Axis) -> bool {
        (self.h - other.h).abs() < EPS * self.h && (self.offset - other.offset).abs() < EPS
    }
}

#[derive(Debug, Clone)]
pub struct RealGrid {
    axes: Vec<Axis>,
    /// row-major over axes
    samples: Vec<Complex64>,
}

fn shape_len(axes: &[Axis]) -> usize {
    axes.iter().map(|a| a.len).product()
}

/// Iterates all multi-indices of the given shape.
pub fn for_each_index(shape: &[usize], mut f: impl FnMut(&[usize])) {
    if shape.iter().any(|&s| s == 0) {
        return;
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        f(&idx);
        let mut d = shape.len();
        loop {
            if d == 0 {
                return;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < shape[d] {
                break;
            }
            idx[d] = 0;
        }
    }
}

impl RealGrid {
    pub fn new(axes: Vec<Axis>, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != shape_len(&axes) {
            return Err(Error::GridMismatch(format!(
                "sample count {} does not match shape {:?}",
                samples.len(),
                axes.iter().map(|a| a.len).collect::<Vec<_>>()
            )));
        }
        for a in &axes {
            if a.h <= 0.0 {
                return Err(Error::GridMismatch("nonpositive spacing".into()));
            }
        }
        Ok(RealGrid { axes, samples })
    }

    /// Indicator of the box [lo, hi)^l sampled at spacing h; the box edges
    /// must lie on the lattice.
    pub fn indicator_box(lo: &[f64], hi: &[f64], h: f64) -> Result<Self> {
        let mut axes = Vec::with_capacity(lo.len());
        for (&a, &b) in lo.iter().zip(hi) {
            let min = (a / h).round();
            let max = (b / h).round();
            if (min * h - a).abs() > EPS || (max * h - b).abs() > EPS || max <= min {
                return Err(Error::GridMismatch(format!(
                    "box edge [{a}, {b}] not on the lattice of spacing {h}"
                )));
            }
            axes.push(Axis {
                h,
                min: min as i64,
                len: (max - min) as usize,
                offset: 0.5,
            });
        }
        let n = shape_len(&axes);
        RealGrid::new(axes, vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn cell_measure(&self) -> f64 {
        self.axes.iter().map(|a| a.h).product()
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|s| s.norm() == 0.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        RealGrid {
            axes: self.axes.clone(),
            samples: self.samples.iter().map(|s| s * c).collect(),
        }
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.axes.len()];
        for d in (0..self.axes.len().saturating_sub(1)).rev() {
            strides[d] = strides[d + 1] * self.axes[d + 1].len;
        }
        strides
    }

    /// Sample at an absolute lattice multi-index; zero outside the extent.
    pub fn value_abs(&self, abs: &[i64]) -> Complex64 {
        debug_assert_eq!(abs.len(), self.dim());
        let strides = self.strides();
        let mut flat = 0usize;
        for (d, (&i, a)) in abs.iter().zip(&self.axes).enumerate() {
            if i < a.min || i >= a.min + a.len as i64 {
                return Complex64::new(0.0, 0.0);
            }
            flat += (i - a.min) as usize * strides[d];
        }
        self.samples[flat]
    }

    /// Visits every node: absolute lattice index, coordinates, sample value.
    pub fn for_each_node(&self, mut f: impl FnMut(&[i64], &[f64], Complex64)) {
        let shape: Vec<usize> = self.axes.iter().map(|a| a.len).collect();
        let strides = self.strides();
        for_each_index(&shape, |idx| {
            let mut abs = Vec::with_capacity(idx.len());
            let mut x = Vec::with_capacity(idx.len());
            let mut flat = 0usize;
            for d in 0..idx.len() {
                abs.push(self.axes[d].min + idx[d] as i64);
                x.push(self.axes[d].node(idx[d]));
                flat += idx[d] * strides[d];
            }
            f(&abs, &x, self.samples[flat]);
        });
    }

    /// <f, g> = sum f conj(g) h^l over the lattice intersection.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        for (a, b) in self.axes.iter().zip(&other.axes) {
            if !a.compatible(b) {
                return Err(Error::GridMismatch(format!(
                    "axes differ: {a:?} vs {b:?}"
                )));
            }
        }
        // index window of the overlap, in self-relative indices
        let mut lo = Vec::new();
        let mut len = Vec::new();
        for (a, b) in self.axes.iter().zip(&other.axes) {
            let start = a.min.max(b.min);
            let end = (a.min + a.len as i64).min(b.min + b.len as i64);
            if end <= start {
                return Ok(Complex64::new(0.0, 0.0));
            }
            lo.push(start);
            len.push((end - start) as usize);
        }
        let sstr = self.strides();
        let ostr = other.strides();
        let mut acc = Complex64::new(0.0, 0.0);
        for_each_index(&len, |idx| {
            let mut si = 0usize;
            let mut oi = 0usize;
            for d in 0..idx.len() {
                let abs = lo[d] + idx[d] as i64;
                si += (abs - self.axes[d].min) as usize * sstr[d];
                oi += (abs - other.axes[d].min) as usize * ostr[d];
            }
            acc += self.samples[si] * other.samples[oi].conj();
        });
        Ok(acc * self.cell_measure())
    }

    pub fn norm_sq(&self) -> f64 {
        let m = self.cell_measure();
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * m
    }

    /// x |-> f(x - a); a must be a lattice multiple of h per coordinate.
    pub fn translate(&self, a: &[f64]) -> Result<Self> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.len(),
            });
        }
        let mut axes = self.axes.clone();
        for (ax, &s) in axes.iter_mut().zip(a) {
            let steps = s / ax.h;
            if (steps - steps.round()).abs() > EPS {
                return Err(Error::GridMismatch(format!(
                    "translation {s} is not a lattice multiple of {}",
                    ax.h
                )));
            }
            ax.min += steps.round() as i64;
        }
        Ok(RealGrid {
            axes,
            samples: self.samples.clone(),
        })
    }

    /// x |-> e^{2 pi i xi . x} f(x)
    pub fn modulate(&self, xi: &[f64]) -> Result<Self> {
        if xi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: xi.len(),
            });
        }
        let mut samples = self.samples.clone();
        let shape: Vec<usize> = self.axes.iter().map(|a| a.len).collect();
        let strides = self.strides();
        for_each_index(&shape, |idx| {
            let mut phase = 0.0;
            let mut flat = 0usize;
            for d in 0..idx.len() {
                phase += xi[d] * self.axes[d].node(idx[d]);
                flat += idx[d] * strides[d];
            }
            samples[flat] *= Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase);
        });
        Ok(RealGrid {
            axes: self.axes.clone(),
            samples,
        })
    }

    /// Discrete Fourier transform on one axis onto its dual lattice:
    /// hat f(y) = sum_x e^{-2 pi i y x} f(x) h. The dual axis has spacing
    /// 1/(N h) and N nodes centered at zero; the transform matrix is unitary,
    /// so the discrete norm is preserved exactly.
    pub fn partial_fourier(&self, axis: usize) -> Result<Self> {
        let ax = &self.axes[axis];
        let n = ax.len;
        let hd = 1.0 / (n as f64 * ax.h);
        let dual = Axis {
            h: hd,
            min: -((n / 2) as i64),
            len: n,
            offset: 0.5,
        };
        let mut axes = self.axes.clone();
        axes[axis] = dual.clone();
        let mut samples = vec![Complex64::new(0.0, 0.0); self.samples.len()];
        let strides = self.strides();
        let stride = strides[axis];
        // iterate over all lines along `axis`
        let outer_shape: Vec<usize> = self
            .axes
            .iter()
            .enumerate()
            .map(|(d, a)| if d == axis { 1 } else { a.len })
            .collect();
        for_each_index(&outer_shape, |idx| {
            let mut base = 0usize;
            for d in 0..idx.len() {
                base += idx[d] * strides[d];
            }
            for m in 0..n {
                let y = dual.node(m);
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    let x = ax.node(j);
                    acc += self.samples[base + j * stride]
                        * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * y * x);
                }
                samples[base + m * stride] = acc * ax.h;
            }
        });
        RealGrid::new(axes, samples)
    }

    pub fn fourier(&self) -> Result<Self> {
        let mut out = self.clone();
        for d in 0..self.dim() {
            out = out.partial_fourier(d)?;
        }
        Ok(out)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let axes = [self.axes.clone(), other.axes.clone()].concat();
        let mut samples = Vec::with_capacity(self.samples.len() * other.samples.len());
        for a in &self.samples {
            for b in &other.samples {
                samples.push(a * b);
            }
        }
        RealGrid::new(axes, samples)
    }

    /// phi(x, y) -> phi(y, x)
    pub fn flip(&self) -> Result<Self> {
        if self.dim() % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: self.dim() + 1,
                got: self.dim(),
            });
        }
        let l = self.dim() / 2;
        let axes = [self.axes[l..].to_vec(), self.axes[..l].to_vec()].concat();
        let out_shape: Vec<usize> = axes.iter().map(|a| a.len).collect();
        let in_strides = self.strides();
        let mut samples = vec![Complex64::new(0.0, 0.0); self.samples.len()];
        let mut flat = 0usize;
        for_each_index(&out_shape, |idx| {
            let mut src = 0usize;
            for d in 0..l {
                src += idx[d] * in_strides[l + d];
                src += idx[l + d] * in_strides[d];
            }
            samples[flat] = self.samples[src];
            flat += 1;
        });
        RealGrid::new(axes, samples)
    }

    pub fn conj(&self) -> Self {
        RealGrid {
            axes: self.axes.clone(),
            samples: self.samples.iter().map(|s| s.conj()).collect(),
        }
    }

    /// psi(a, x) = phi(x - a, x) on R^{2l}; preserves the discrete norm since
    /// (a, x) -> (x - a, x) permutes lattice cells.
    pub fn wigner_shear(&self) -> Result<Self> {
        if self.dim() % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: self.dim() + 1,
                got: self.dim(),
            });
        }
        let l = self.dim() / 2;
        let mut axes = Vec::with_capacity(self.dim());
        for j in 0..l {
            let u = &self.axes[j];
            let x = &self.axes[l + j];
            if !u.compatible(x) {
                return Err(Error::GridMismatch(
                    "paired axes must share spacing and offset for the shear".into(),
                ));
            }
            // a = x - u: offsets cancel, integer lattice
            axes.push(Axis {
                h: u.h,
                min: x.min - (u.min + u.len as i64 - 1),
                len: x.len + u.len - 1,
                offset: 0.0,
            });
        }
        for j in 0..l {
            axes.push(self.axes[l + j].clone());
        }
        let out_shape: Vec<usize> = axes.iter().map(|a| a.len).collect();
        let in_strides = self.strides();
        let mut samples = vec![Complex64::new(0.0, 0.0); shape_len(&axes)];
        let mut flat = 0usize;
        for_each_index(&out_shape, |idx| {
            // u = x - a per pair
            let mut src = Some(0usize);
            for j in 0..l {
                let a_abs = axes[j].min + idx[j] as i64;
                let x_abs = self.axes[l + j].min + idx[l + j] as i64;
                let u_abs = x_abs - a_abs;
                let u = &self.axes[j];
                if u_abs < u.min || u_abs >= u.min + u.len as i64 {
                    src = None;
                    break;
                }
                if let Some(s) = src.as_mut() {
                    *s += (u_abs - u.min) as usize * in_strides[j];
                    *s += idx[l + j] * in_strides[l + j];
                }
            }
            if let Some(s) = src {
                samples[flat] = self.samples[s];
            }
            flat += 1;
        });
        RealGrid::new(axes, samples)
    }

    /// phi(u, v) -> phi(-u, v)
    pub fn negate_first_block(&self) -> Result<Self> {
        if self.dim() % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: self.dim() + 1,
                got: self.dim(),
            });
        }
        let l = self.dim() / 2;
        let mut axes = self.axes.clone();
        for j in 0..l {
            let a = &self.axes[j];
            // -(min + idx + offset) = -(min + len - 1 + offset) + (len - 1 - idx)
            axes[j] = Axis {
                h: a.h,
                min: -(a.min + a.len as i64 - 1) - if a.offset > 0.25 { 1 } else { 0 },
                len: a.len,
                offset: a.offset,
            };
        }
        let out_shape: Vec<usize> = axes.iter().map(|a| a.len).collect();
        let strides = self.strides();
        let mut samples = vec![Complex64::new(0.0, 0.0); self.samples.len()];
        let mut flat = 0usize;
        for_each_index(&out_shape, |idx| {
            let mut src = 0usize;
            for d in 0..out_shape.len() {
                if d < l {
                    src += (out_shape[d] - 1 - idx[d]) * strides[d];
                } else {
                    src += idx[d] * strides[d];
                }
            }
            samples[flat] = self.samples[src];
            flat += 1;
        });
        RealGrid::new(axes, samples)
    }
}
