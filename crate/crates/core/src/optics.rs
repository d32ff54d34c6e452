//! Scalar diffraction: angular-spectrum propagation, far-field transform and
//! diffraction-order extraction behind a grating.

use num_complex::Complex64;
use rustfft::FftDirection;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::fft;
use crate::fieldgrid::{ComplexField, GridSpec};
use crate::hologram::HologramSpec;

/// Exact unitary free-space propagation over `distance`.
///
/// Forward spectral transform, multiplication by
/// `exp(i 2 pi distance sqrt(1/lambda^2 - nu^2))`, inverse transform.
/// Evanescent components (none exist on a Nyquist-adequate grid) are zeroed
/// rather than amplified. `distance = 0` is the identity; negative distances
/// propagate backwards.
pub fn propagate(field: &ComplexField, distance: f64, wavelength: f64) -> Result<ComplexField> {
    if !wavelength.is_finite() || wavelength <= 0.0 {
        return Err(Error::NonPositive {
            name: "wavelength",
            value: wavelength,
        });
    }
    let grid = field.grid();
    let n = grid.n();
    let nyquist = 0.5 / grid.pitch();
    let max_freq = std::f64::consts::SQRT_2 * nyquist;
    if max_freq >= 1.0 / wavelength {
        return Err(Error::NyquistViolation {
            detail: format!(
                "grid carries frequencies up to {max_freq:.3} cycles per unit, at or past 1/lambda = {:.3}",
                1.0 / wavelength
            ),
        });
    }

    let mut buf = field.samples().to_vec();
    fft::fft2(&mut buf, n, FftDirection::Forward);
    let inv_l2 = 1.0 / (wavelength * wavelength);
    for ky in 0..n {
        let vy = fft::freq(ky, n, grid.extent());
        for kx in 0..n {
            let vx = fft::freq(kx, n, grid.extent());
            let v2 = vx * vx + vy * vy;
            let idx = ky * n + kx;
            if v2 >= inv_l2 {
                buf[idx] = Complex64::ZERO;
            } else {
                let kz = (inv_l2 - v2).sqrt();
                buf[idx] *= Complex64::from_polar(1.0, TAU * distance * kz);
            }
        }
    }
    fft::fft2(&mut buf, n, FftDirection::Inverse);
    let scale = 1.0 / (n * n) as f64;
    for v in &mut buf {
        *v *= scale;
    }
    ComplexField::from_samples(grid, buf)
}

/// Centered spectral transform with energy-preserving scaling.
///
/// The output grid carries spatial-frequency coordinates: sample `k` sits at
/// `(k - n/2 + 1/2) / extent` cycles per unit length, and the output
/// `GridSpec` has extent `n / extent`.
pub fn far_field(field: &ComplexField) -> ComplexField {
    let grid = field.grid();
    let n = grid.n();
    let c = (n as f64 - 1.0) / 2.0;

    let ramp: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, TAU * c * j as f64 / n as f64))
        .collect();

    let mut buf = field.samples().to_vec();
    for (iy, row) in buf.chunks_exact_mut(n).enumerate() {
        for (ix, v) in row.iter_mut().enumerate() {
            *v *= ramp[ix] * ramp[iy];
        }
    }
    fft::fft2(&mut buf, n, FftDirection::Forward);
    let pitch2 = grid.pitch() * grid.pitch();
    let constant = Complex64::from_polar(pitch2, -2.0 * TAU * c * c / n as f64);
    for (ky, row) in buf.chunks_exact_mut(n).enumerate() {
        for (kx, v) in row.iter_mut().enumerate() {
            *v *= ramp[kx] * ramp[ky] * constant;
        }
    }

    let freq_grid = GridSpec::new(n, n as f64 / grid.extent()).expect("valid frequency grid");
    ComplexField::from_samples(freq_grid, buf).expect("transform preserves sample count")
}

/// Complex envelope of the `order`-th diffraction order after a grating.
///
/// Demodulates the order's carrier and low-pass filters at half the carrier
/// spacing (a circular cutoff, which preserves winding content exactly).
/// The result lives on the original grid.
pub fn extract_order(
    field_after_mask: &ComplexField,
    spec: &HologramSpec,
    order: i32,
) -> Result<ComplexField> {
    spec.validate()?;
    let grid = field_after_mask.grid();
    let n = grid.n();
    let nyquist = 0.5 / grid.pitch();
    let carrier = spec.line_density;
    let reach = order.unsigned_abs() as f64 * carrier + carrier / 2.0;
    if reach > nyquist {
        return Err(Error::NyquistViolation {
            detail: format!(
                "order {order} needs frequencies up to {reach:.3} cycles per unit, Nyquist is {nyquist:.3}"
            ),
        });
    }

    // shift the order's carrier to zero frequency
    let mut buf = Vec::with_capacity(n * n);
    for iy in 0..n {
        for ix in 0..n {
            let x = grid.coord(ix);
            let demod = Complex64::from_polar(1.0, -TAU * order as f64 * carrier * x);
            buf.push(field_after_mask.get(ix, iy) * demod);
        }
    }

    fft::fft2(&mut buf, n, FftDirection::Forward);
    let cutoff2 = (carrier / 2.0) * (carrier / 2.0);
    for ky in 0..n {
        let vy = fft::freq(ky, n, grid.extent());
        for kx in 0..n {
            let vx = fft::freq(kx, n, grid.extent());
            if vx * vx + vy * vy >= cutoff2 {
                buf[ky * n + kx] = Complex64::ZERO;
            }
        }
    }
    fft::fft2(&mut buf, n, FftDirection::Inverse);
    let scale = 1.0 / (n * n) as f64;
    for v in &mut buf {
        *v *= scale;
    }
    ComplexField::from_samples(grid, buf)
}
