//! Discrete Fourier transforms for the spectral oracle and for building
//! band-projected initial states.
//!
//! Radix-2 Cooley-Tukey for power-of-two lengths, a direct sum otherwise.
//! Convention: `X_n = sum_p x_p e^{-2 pi i n p / L}`; the inverse carries the
//! `1/L` factor.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::coin::cis;
use crate::fmath::TAU;

/// In-place forward transform.
pub fn fft(data: &mut [Complex64]) {
    transform(data, -1.0);
}

/// In-place inverse transform, normalised by `1/L`.
pub fn ifft(data: &mut [Complex64]) {
    transform(data, 1.0);
    let s = 1.0 / data.len() as f64;
    for z in data.iter_mut() {
        *z *= s;
    }
}

/// Wavenumber of bin `n` on a lattice of `len` sites, in `[-pi, pi)`.
pub fn bin_wavenumber(n: usize, len: usize) -> f64 {
    let m = if n < len.div_ceil(2) { n as f64 } else { n as f64 - len as f64 };
    let k = TAU * m / len as f64;
    if k >= core::f64::consts::PI {
        k - TAU
    } else {
        k
    }
}

fn transform(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data, sign);
    } else {
        let out: Vec<Complex64> = (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (p, &x) in data.iter().enumerate() {
                    let ph = sign * TAU * ((k * p) % n) as f64 / n as f64;
                    acc += x * cis(ph);
                }
                acc
            })
            .collect();
        data.copy_from_slice(&out);
    }
}

fn radix2(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let twiddles: Vec<Complex64> = (0..half).map(|t| cis(sign * TAU * t as f64 / len as f64)).collect();
        for start in (0..n).step_by(len) {
            for t in 0..half {
                let a = data[start + t];
                let b = data[start + t + half] * twiddles[t];
                data[start + t] = a + b;
                data[start + t + half] = a - b;
            }
        }
        len <<= 1;
    }
}
