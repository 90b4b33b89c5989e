//! Initial states and observables: Gaussian packets, band projection,
//! centre of mass on periodic lattices, spread and participation ratio.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::coin::cis;
use crate::error::{invalid, shape, Result};
use crate::fft::{bin_wavenumber, fft, ifft};
use crate::fmath::{self, pairwise_sum};
use crate::lattice::SpinorField;
use crate::linalg::Mat2;

/// Gaussian packet on a 1D lattice with density standard deviation `width`
/// sites, centre `center`, carrier wavenumber `k0` and spinor `spin`.
/// Distances use the periodic minimum image. Normalised.
pub fn gaussian_1d(extent: usize, center: f64, width: f64, k0: f64, spin: [Complex64; 2]) -> Result<SpinorField> {
    gaussian(&[extent], [center, 0.0], width, [k0, 0.0], spin)
}

/// Gaussian packet on a 2D lattice, see [`gaussian_1d`].
pub fn gaussian_2d(extents: [usize; 2], center: [f64; 2], width: f64, k0: [f64; 2], spin: [Complex64; 2]) -> Result<SpinorField> {
    gaussian(&extents, center, width, k0, spin)
}

fn gaussian(extents: &[usize], center: [f64; 2], width: f64, k0: [f64; 2], spin: [Complex64; 2]) -> Result<SpinorField> {
    if !(width > 0.0) {
        return Err(invalid("packet width must be positive"));
    }
    let mut f = SpinorField::zeros(extents, 2)?;
    for s in 0..f.sites() {
        let c = f.coords(s);
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for a in 0..extents.len() {
            let d = min_image(c[a] as f64 - center[a], extents[a]);
            r2 += d * d;
            phase += k0[a] * c[a] as f64;
        }
        let amp = cis(phase) * fmath::exp(-r2 / (4.0 * width * width));
        let site = f.site_mut(s);
        site[0] = spin[0] * amp;
        site[1] = spin[1] * amp;
    }
    f.normalize()?;
    Ok(f)
}

/// Wraps a displacement into `[-L/2, L/2)`.
pub fn min_image(d: f64, extent: usize) -> f64 {
    let l = extent as f64;
    fmath::wrap(d, -0.5 * l, l)
}

/// Projects a two-component field onto one band of a translation-invariant
/// walk whose one-step Fourier symbol is `symbol(k)` (`k` has one entry per
/// axis). `positive` keeps the eigenvector with quasi-energy in `(0, pi)`,
/// where the eigenvalue is `e^{-i E}`. The result is renormalised.
pub fn project_band(field: &SpinorField, symbol: impl Fn(&[f64]) -> Mat2, positive: bool) -> Result<SpinorField> {
    if field.internal() != 2 {
        return Err(shape("band projection needs a two-component field"));
    }
    let ext = field.extents().to_vec();
    let mut comps = split(field);
    for c in comps.iter_mut() {
        transform_nd(c, &ext, false);
    }
    let mut k = [0.0; 2];
    for s in 0..field.sites() {
        let co = field.coords(s);
        for a in 0..ext.len() {
            k[a] = bin_wavenumber(co[a], ext[a]);
        }
        let (lam, vecs) = symbol(&k[..ext.len()]).eigen();
        let e0 = -lam[0].arg();
        let pick = if (e0 > 0.0) == positive { 0 } else { 1 };
        let v = vecs[pick];
        let amp = v[0].conj() * comps[0][s] + v[1].conj() * comps[1][s];
        comps[0][s] = v[0] * amp;
        comps[1][s] = v[1] * amp;
    }
    for c in comps.iter_mut() {
        transform_nd(c, &ext, true);
    }
    let mut out = join(field, &comps);
    out.normalize()?;
    Ok(out)
}

fn split(field: &SpinorField) -> [Vec<Complex64>; 2] {
    let a = field.amplitudes();
    [a.iter().step_by(2).copied().collect(), a.iter().skip(1).step_by(2).copied().collect()]
}

fn join(like: &SpinorField, comps: &[Vec<Complex64>; 2]) -> SpinorField {
    let mut out = like.zeros_like();
    for (s, chunk) in out.amplitudes_mut().chunks_mut(2).enumerate() {
        chunk[0] = comps[0][s];
        chunk[1] = comps[1][s];
    }
    out
}

/// Multi-dimensional transform of one scalar component, axis 0 fastest.
pub fn transform_nd(data: &mut [Complex64], extents: &[usize], inverse: bool) {
    let run = |buf: &mut [Complex64]| if inverse { ifft(buf) } else { fft(buf) };
    let e0 = extents[0];
    for row in data.chunks_mut(e0) {
        run(row);
    }
    if extents.len() == 2 {
        let e1 = extents[1];
        let mut col = alloc::vec![Complex64::new(0.0, 0.0); e1];
        for x in 0..e0 {
            for y in 0..e1 {
                col[y] = data[x + e0 * y];
            }
            run(&mut col);
            for y in 0..e1 {
                data[x + e0 * y] = col[y];
            }
        }
    }
}

/// Probability-weighted mean position along `axis`, unwrapped around
/// `reference` (minimum image), so packets crossing the boundary are tracked
/// continuously when `reference` follows them.
pub fn mean_position(field: &SpinorField, axis: usize, reference: f64) -> f64 {
    let dens = field.density();
    let l = field.extent(axis);
    let total = pairwise_sum(&dens);
    let w: Vec<f64> = dens
        .iter()
        .enumerate()
        .map(|(s, p)| p * min_image(field.coords(s)[axis] as f64 - reference, l))
        .collect();
    reference + pairwise_sum(&w) / total
}

/// Variance of the position along `axis` about [`mean_position`].
pub fn position_variance(field: &SpinorField, axis: usize, reference: f64) -> f64 {
    let m = mean_position(field, axis, reference);
    let dens = field.density();
    let l = field.extent(axis);
    let total = pairwise_sum(&dens);
    let w: Vec<f64> = dens
        .iter()
        .enumerate()
        .map(|(s, p)| {
            let d = min_image(field.coords(s)[axis] as f64 - m, l);
            p * d * d
        })
        .collect();
    pairwise_sum(&w) / total
}

/// Participation ratio `1 / sum_s P_s^2` of the normalised site density:
/// 1 for a state on a single site, the number of sites for a uniform one.
pub fn participation_ratio(field: &SpinorField) -> f64 {
    let dens = field.density();
    let total = pairwise_sum(&dens);
    let sq: Vec<f64> = dens.iter().map(|p| (p / total) * (p / total)).collect();
    1.0 / pairwise_sum(&sq)
}

/// Least-squares slope of `y` against its index.
pub fn fit_slope(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let mx = (n - 1.0) / 2.0;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        let dx = i as f64 - mx;
        sxy += dx * (v - my);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// Mean spacing of upward crossings of the series through its own mean,
/// with linear interpolation. `None` with fewer than two crossings.
pub fn oscillation_period(y: &[f64]) -> Option<f64> {
    let m = y.iter().sum::<f64>() / y.len() as f64;
    let mut crossings = Vec::new();
    for i in 1..y.len() {
        let (a, b) = (y[i - 1] - m, y[i] - m);
        if a < 0.0 && b >= 0.0 {
            crossings.push(i as f64 - 1.0 + a / (a - b));
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    Some((crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64)
}
