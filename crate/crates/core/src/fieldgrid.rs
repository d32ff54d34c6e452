//! Complex scalar fields sampled on uniform square grids.
//!
//! Grids are centered on the optical axis with a half-pixel offset, so no
//! sample falls exactly on the axis and a phase vortex never lands on a
//! sample point. Fields are immutable after construction; every operation
//! here is a pure function.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Smallest supported grid side.
pub const MIN_GRID_SAMPLES: usize = 16;

/// Relative amplitude below which the phase of a sample is treated as
/// undefined (numerically dead region).
pub const DEFAULT_AMPLITUDE_FLOOR: f64 = 1e-8;

/// Uniform square sampling of the transverse plane.
///
/// Sample `i` along either axis sits at `(i - n/2 + 1/2) * pitch`, which
/// centers the grid on the optical axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    extent: f64,
}

impl GridSpec {
    pub fn new(n: usize, extent: f64) -> Result<Self> {
        if n < MIN_GRID_SAMPLES {
            return Err(Error::GridTooSmall {
                n,
                min: MIN_GRID_SAMPLES,
            });
        }
        if !extent.is_finite() || extent <= 0.0 {
            return Err(Error::NonPositive {
                name: "grid extent",
                value: extent,
            });
        }
        Ok(Self { n, extent })
    }

    /// Samples per side.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Physical side length.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Sample spacing.
    pub fn pitch(&self) -> f64 {
        self.extent / self.n as f64
    }

    pub fn half_extent(&self) -> f64 {
        self.extent / 2.0
    }

    /// Physical coordinate of sample index `i` along either axis.
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - self.n as f64 / 2.0 + 0.5) * self.pitch()
    }
}

/// Complex scalar amplitude sampled on a [`GridSpec`].
///
/// Samples are stored row-major with `x` fastest: index `iy * n + ix`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    samples: Vec<Complex64>,
}

impl ComplexField {
    /// Evaluate `f(x, y)` at every sample point.
    ///
    /// Panics if the closure produces a non-finite value; analytic sources
    /// must stay finite on the grid.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let n = grid.n();
        let mut samples = Vec::with_capacity(n * n);
        for iy in 0..n {
            let y = grid.coord(iy);
            for ix in 0..n {
                let v = f(grid.coord(ix), y);
                assert!(
                    v.re.is_finite() && v.im.is_finite(),
                    "field source produced a non-finite sample"
                );
                samples.push(v);
            }
        }
        Self { grid, samples }
    }

    pub fn from_samples(grid: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        let expected = grid.n() * grid.n();
        if samples.len() != expected {
            return Err(Error::SampleCountMismatch {
                got: samples.len(),
                expected,
            });
        }
        if samples.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFiniteSamples);
        }
        Ok(Self { grid, samples })
    }

    pub fn zero(grid: GridSpec) -> Self {
        Self {
            grid,
            samples: vec![Complex64::ZERO; grid.n() * grid.n()],
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn get(&self, ix: usize, iy: usize) -> Complex64 {
        self.samples[iy * self.grid.n() + ix]
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Discrete L2 norm squared, `sum |f|^2 * pitch^2`.
    pub fn norm_sqr(&self) -> f64 {
        let p2 = self.grid.pitch() * self.grid.pitch();
        self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * p2
    }

    pub fn map(&self, f: impl FnMut(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().copied().map(f).collect(),
        }
    }

    pub fn conjugated(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        self.map(|c| c * k)
    }

    pub fn added(&self, other: &Self) -> Result<Self> {
        check_same_grid(self, other)?;
        Ok(Self {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Pointwise product, e.g. applying a transmittance mask.
    pub fn multiplied(&self, other: &Self) -> Result<Self> {
        check_same_grid(self, other)?;
        Ok(Self {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Bilinear interpolation at a physical point; `None` outside the grid.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> Option<Complex64> {
        let n = self.grid.n();
        let pitch = self.grid.pitch();
        let fx = x / pitch + n as f64 / 2.0 - 0.5;
        let fy = y / pitch + n as f64 / 2.0 - 0.5;
        if !(0.0..=(n - 1) as f64).contains(&fx) || !(0.0..=(n - 1) as f64).contains(&fy) {
            return None;
        }
        let ix = (fx.floor() as usize).min(n - 2);
        let iy = (fy.floor() as usize).min(n - 2);
        let tx = fx - ix as f64;
        let ty = fy - iy as f64;
        let f00 = self.get(ix, iy);
        let f10 = self.get(ix + 1, iy);
        let f01 = self.get(ix, iy + 1);
        let f11 = self.get(ix + 1, iy + 1);
        Some(
            f00 * ((1.0 - tx) * (1.0 - ty))
                + f10 * (tx * (1.0 - ty))
                + f01 * ((1.0 - tx) * ty)
                + f11 * (tx * ty),
        )
    }
}

fn check_same_grid(a: &ComplexField, b: &ComplexField) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch {
            a_n: a.grid.n(),
            a_extent: a.grid.extent(),
            b_n: b.grid.n(),
            b_extent: b.grid.extent(),
        });
    }
    Ok(())
}

/// Discrete inner product `sum conj(f) * g * pitch^2`.
///
/// Conjugate-symmetric and sesquilinear; the second argument is the linear
/// slot. Summation is sequential, so results are bitwise reproducible.
pub fn inner_product(f: &ComplexField, g: &ComplexField) -> Result<Complex64> {
    check_same_grid(f, g)?;
    let p2 = f.grid.pitch() * f.grid.pitch();
    let mut acc = Complex64::ZERO;
    for (a, b) in f.samples.iter().zip(&g.samples) {
        acc += a.conj() * b;
    }
    Ok(acc * p2)
}

pub(crate) fn wrap_phase(d: f64) -> f64 {
    (d + PI).rem_euclid(TAU) - PI
}

/// Accumulated phase around a circle, in units of 2*pi.
///
/// The loop is discretized densely relative to the grid pitch and the field
/// is interpolated bilinearly. Fails if the loop leaves the grid or if the
/// amplitude anywhere on it drops below `DEFAULT_AMPLITUDE_FLOOR` times the
/// field maximum (the phase would be undefined there).
pub fn winding_number(f: &ComplexField, center: (f64, f64), radius: f64) -> Result<i32> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::NonPositive {
            name: "loop radius",
            value: radius,
        });
    }
    let floor = DEFAULT_AMPLITUDE_FLOOR * f.max_abs();
    let pitch = f.grid.pitch();
    let steps = ((TAU * radius / pitch * 4.0).ceil() as usize).max(256);
    let mut total = 0.0;
    let mut prev = None;
    for k in 0..=steps {
        let phi = TAU * k as f64 / steps as f64;
        let x = center.0 + radius * phi.cos();
        let y = center.1 + radius * phi.sin();
        let v = f
            .sample_bilinear(x, y)
            .ok_or(Error::LoopOutsideGrid {
                cx: center.0,
                cy: center.1,
                radius,
            })?;
        if v.norm() < floor {
            return Err(Error::AmplitudeBelowFloor);
        }
        let theta = v.arg();
        if let Some(p) = prev {
            total += wrap_phase(theta - p);
        }
        prev = Some(theta);
    }
    Ok((total / TAU).round() as i32)
}

/// A detected phase singularity: plaquette center and integer charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub position: (f64, f64),
    pub charge: i32,
}

/// Scan all 2x2 plaquettes and report those whose phase circulation is a
/// nonzero multiple of 2*pi.
///
/// Plaquettes containing a corner with amplitude below `amplitude_floor`
/// times the field maximum are skipped, which suppresses spurious vortices
/// in numerically dead regions. An empty list is a valid result.
pub fn find_singularities(f: &ComplexField, amplitude_floor: f64) -> Vec<Singularity> {
    let floor = amplitude_floor.max(0.0) * f.max_abs();
    let n = f.grid.n();
    let pitch = f.grid.pitch();
    let mut found = Vec::new();
    for iy in 0..n - 1 {
        for ix in 0..n - 1 {
            let c00 = f.get(ix, iy);
            let c10 = f.get(ix + 1, iy);
            let c11 = f.get(ix + 1, iy + 1);
            let c01 = f.get(ix, iy + 1);
            let min_amp = c00
                .norm()
                .min(c10.norm())
                .min(c11.norm())
                .min(c01.norm());
            if min_amp < floor {
                continue;
            }
            let circulation = wrap_phase(c10.arg() - c00.arg())
                + wrap_phase(c11.arg() - c10.arg())
                + wrap_phase(c01.arg() - c11.arg())
                + wrap_phase(c00.arg() - c01.arg());
            let charge = (circulation / TAU).round() as i32;
            if charge != 0 {
                found.push(Singularity {
                    position: (f.grid.coord(ix) + pitch / 2.0, f.grid.coord(iy) + pitch / 2.0),
                    charge,
                });
            }
        }
    }
    found
}
