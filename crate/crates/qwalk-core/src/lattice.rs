//! Periodic lattices carrying multi-component complex amplitudes.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{shape, Error, Result};
use crate::fmath::pairwise_sum;

/// Walker state on a periodic 1D or 2D lattice.
///
/// Storage is site-major with the internal index innermost. Sites are
/// linearised with axis 0 fastest: `site = p0 + e0 * p1`. The internal index
/// is `spin * N + color`, so the first `N` components form the upper spin
/// block and the last `N` the lower one.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    extents: Vec<usize>,
    internal: usize,
    amps: Vec<Complex64>,
}

impl SpinorField {
    /// All-zero field. `internal` must be even and positive.
    pub fn zeros(extents: &[usize], internal: usize) -> Result<Self> {
        if extents.is_empty() || extents.len() > 2 {
            return Err(shape("lattice must have 1 or 2 axes"));
        }
        if extents.contains(&0) {
            return Err(shape("extents must be positive"));
        }
        if internal == 0 || !internal.is_multiple_of(2) {
            return Err(shape("internal dimension must be 2N with N >= 1"));
        }
        let sites: usize = extents.iter().product();
        Ok(Self { extents: extents.to_vec(), internal, amps: vec![Complex64::new(0.0, 0.0); sites * internal] })
    }

    /// Wraps an existing amplitude buffer.
    pub fn from_amplitudes(extents: &[usize], internal: usize, amps: Vec<Complex64>) -> Result<Self> {
        let mut f = Self::zeros(extents, internal)?;
        if amps.len() != f.amps.len() {
            return Err(shape("amplitude buffer length does not match lattice"));
        }
        f.amps = amps;
        Ok(f)
    }

    /// Zero field with the same shape as `self`.
    pub fn zeros_like(&self) -> Self {
        Self { extents: self.extents.clone(), internal: self.internal, amps: vec![Complex64::new(0.0, 0.0); self.amps.len()] }
    }

    /// Number of spatial axes.
    #[inline]
    pub fn dims(&self) -> usize {
        self.extents.len()
    }

    /// Extents along every axis.
    #[inline]
    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    /// Extent along `axis`.
    #[inline]
    pub fn extent(&self, axis: usize) -> usize {
        self.extents[axis]
    }

    /// Number of internal components per site (`2N`).
    #[inline]
    pub fn internal(&self) -> usize {
        self.internal
    }

    /// Gauge dimension `N`.
    #[inline]
    pub fn colors(&self) -> usize {
        self.internal / 2
    }

    /// Number of sites.
    #[inline]
    pub fn sites(&self) -> usize {
        self.amps.len() / self.internal
    }

    /// Flat amplitude buffer.
    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Mutable flat amplitude buffer.
    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Consumes the field and returns its buffer.
    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// Amplitudes of one site.
    #[inline]
    pub fn site(&self, s: usize) -> &[Complex64] {
        &self.amps[s * self.internal..(s + 1) * self.internal]
    }

    /// Mutable amplitudes of one site.
    #[inline]
    pub fn site_mut(&mut self, s: usize) -> &mut [Complex64] {
        let n = self.internal;
        &mut self.amps[s * n..(s + 1) * n]
    }

    /// Linear index of the site with coordinates `p` (one per axis).
    #[inline]
    pub fn site_index(&self, p: &[usize]) -> usize {
        match self.extents.len() {
            1 => p[0],
            _ => p[0] + self.extents[0] * p[1],
        }
    }

    /// Coordinates of a linear site index.
    #[inline]
    pub fn coords(&self, s: usize) -> [usize; 2] {
        match self.extents.len() {
            1 => [s, 0],
            _ => [s % self.extents[0], s / self.extents[0]],
        }
    }

    /// Site reached from `s` by moving `delta` sites along `axis`, with wrap.
    #[inline]
    pub fn neighbor(&self, s: usize, axis: usize, delta: isize) -> usize {
        neighbor(&self.extents, s, axis, delta)
    }

    /// Total probability, summed in a fixed pairwise order.
    pub fn norm_sqr(&self) -> f64 {
        let d: Vec<f64> = self.amps.iter().map(|z| z.norm_sqr()).collect();
        pairwise_sum(&d)
    }

    /// Scales the field to unit total probability.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Invalid("cannot normalize a zero or non-finite field".into()));
        }
        let s = 1.0 / crate::fmath::sqrt(n);
        for z in &mut self.amps {
            *z *= s;
        }
        Ok(())
    }

    /// Probability per site (`J^0`).
    pub fn density(&self) -> Vec<f64> {
        self.amps.chunks(self.internal).map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect()
    }

    /// Upper-spin and lower-spin probability per site.
    pub fn spin_densities(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.colors();
        let mut up = Vec::with_capacity(self.sites());
        let mut dn = Vec::with_capacity(self.sites());
        for c in self.amps.chunks(self.internal) {
            up.push(c[..n].iter().map(|z| z.norm_sqr()).sum());
            dn.push(c[n..].iter().map(|z| z.norm_sqr()).sum());
        }
        (up, dn)
    }

    /// Largest amplitude-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &SpinorField) -> f64 {
        self.amps.iter().zip(&other.amps).fold(0.0f64, |a, (x, y)| a.max((x - y).norm()))
    }

    /// Euclidean distance to `other`.
    pub fn l2_diff(&self, other: &SpinorField) -> f64 {
        let d: Vec<f64> = self.amps.iter().zip(&other.amps).map(|(x, y)| (x - y).norm_sqr()).collect();
        crate::fmath::sqrt(pairwise_sum(&d))
    }

    /// Multiplies every amplitude of every site by a site-dependent phase.
    pub fn multiply_phase(&mut self, phase: impl Fn(usize) -> f64) {
        let n = self.internal;
        for (s, chunk) in self.amps.chunks_mut(n).enumerate() {
            let (sn, cs) = libm::sincos(phase(s));
            let e = Complex64::new(cs, sn);
            for z in chunk {
                *z *= e;
            }
        }
    }

    pub(crate) fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.dims() {
            Err(Error::Axis { axis, dims: self.dims() })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_same_shape(&self, other: &SpinorField) -> Result<()> {
        if self.extents != other.extents || self.internal != other.internal {
            Err(shape("fields have different shapes"))
        } else {
            Ok(())
        }
    }
}

/// Site reached from `s` by moving `delta` sites along `axis` on a periodic
/// lattice with the given extents.
#[inline]
pub fn neighbor(extents: &[usize], s: usize, axis: usize, delta: isize) -> usize {
    let e0 = extents[0];
    if axis == 0 {
        let p0 = s % e0;
        let q = (p0 as isize + delta).rem_euclid(e0 as isize) as usize;
        s - p0 + q
    } else {
        let e1 = extents[1];
        let p1 = s / e0;
        let q = (p1 as isize + delta).rem_euclid(e1 as isize) as usize;
        s + (q * e0) - p1 * e0
    }
}

/// Applies the spin-dependent shift along `axis`: the upper block at site `p`
/// takes the old value at `p + 1`, the lower block the old value at `p - 1`.
/// The result is a permutation of the input, so probability is conserved
/// exactly.
pub fn shift(field: &SpinorField, axis: usize) -> Result<SpinorField> {
    shift_by(field, axis, 1)
}

/// Inverse of [`shift`]: the upper block moves towards higher indices.
pub fn shift_inverse(field: &SpinorField, axis: usize) -> Result<SpinorField> {
    shift_by(field, axis, -1)
}

fn shift_by(field: &SpinorField, axis: usize, dir: isize) -> Result<SpinorField> {
    field.check_axis(axis)?;
    let n = field.colors();
    let mut out = field.zeros_like();
    for s in 0..field.sites() {
        let from_up = field.neighbor(s, axis, dir);
        let from_dn = field.neighbor(s, axis, -dir);
        let (src_up, src_dn) = (field.site(from_up), field.site(from_dn));
        let dst = out.site_mut(s);
        dst[..n].copy_from_slice(&src_up[..n]);
        dst[n..].copy_from_slice(&src_dn[n..]);
    }
    Ok(out)
}
