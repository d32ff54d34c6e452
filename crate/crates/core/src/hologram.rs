//! Blazed fork phase gratings.
//!
//! A fork hologram is a phase grating whose lines carry `delta_m` edge
//! dislocations; its n-th diffraction order adds `n * delta_m` units of
//! winding number to the diffracted beam. The mask here is the canonical
//! sawtooth-blazed carrier plus spiral: at a blaze depth of 2*pi the phase
//! profile is exactly `delta_m * phi' + 2 pi x / period` and all power goes
//! into the first order.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::fieldgrid::{ComplexField, GridSpec};

/// Fork phase-grating description.
///
/// `dislocation_offset` displaces only the spiral term, which models sliding
/// the hologram laterally across the beam; the carrier stays put. Shifting
/// the dislocation fully out of the beam is represented by `delta_m = 0`
/// (the border of the plate acts as a plain grating).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HologramSpec {
    /// Number of edge dislocations; the sign picks the handedness.
    pub delta_m: i32,
    /// Grating lines per unit length (1/mm).
    pub line_density: f64,
    /// Lateral displacement of the dislocation from the beam center.
    pub dislocation_offset: (f64, f64),
    /// Phase modulation depth in radians; 2*pi blazes perfectly.
    pub blaze_depth: f64,
    /// Scalar power fraction diffracted into the first order.
    pub first_order_efficiency: f64,
    /// Side length of the square plate.
    pub aperture: f64,
}

impl Default for HologramSpec {
    fn default() -> Self {
        Self {
            delta_m: 0,
            line_density: 20.0,
            dislocation_offset: (0.0, 0.0),
            blaze_depth: TAU,
            first_order_efficiency: 0.18,
            aperture: 5.0,
        }
    }
}

impl HologramSpec {
    /// Centered fork with `delta_m` dislocations and default plate data.
    pub fn fork(delta_m: i32) -> Self {
        Self {
            delta_m,
            ..Self::default()
        }
    }

    pub fn with_offset(mut self, offset: (f64, f64)) -> Self {
        self.dislocation_offset = offset;
        self
    }

    pub fn with_blaze_depth(mut self, blaze_depth: f64) -> Self {
        self.blaze_depth = blaze_depth;
        self
    }

    pub fn with_efficiency(mut self, first_order_efficiency: f64) -> Self {
        self.first_order_efficiency = first_order_efficiency;
        self
    }

    pub fn with_line_density(mut self, line_density: f64) -> Self {
        self.line_density = line_density;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.line_density.is_finite() || self.line_density <= 0.0 {
            return Err(Error::NonPositive {
                name: "line density",
                value: self.line_density,
            });
        }
        if !(self.blaze_depth > 0.0 && self.blaze_depth <= TAU + 1e-12) {
            return Err(Error::OutOfRange {
                name: "blaze depth",
                value: self.blaze_depth,
                range: "(0, 2*pi]",
            });
        }
        if !(0.0..=1.0).contains(&self.first_order_efficiency) {
            return Err(Error::OutOfRange {
                name: "first-order efficiency",
                value: self.first_order_efficiency,
                range: "[0, 1]",
            });
        }
        if !self.aperture.is_finite() || self.aperture <= 0.0 {
            return Err(Error::NonPositive {
                name: "aperture",
                value: self.aperture,
            });
        }
        Ok(())
    }

    /// The same plate rotated by 180 degrees: `delta_m` is negated and the
    /// dislocation offset mirrors through the beam center. Analyzing `l`
    /// becomes analyzing `-l`; the operation is an involution.
    pub fn rotated_180(&self) -> Self {
        Self {
            delta_m: -self.delta_m,
            dislocation_offset: (-self.dislocation_offset.0, -self.dislocation_offset.1),
            ..*self
        }
    }

    /// Full phase-only transmittance on a grid.
    ///
    /// `exp(i * blaze * saw(delta_m * phi' + 2 pi x / period))` with
    /// `saw(t) = mod(t, 2 pi) / 2 pi`, where `phi'` is the azimuth about the
    /// displaced dislocation. Outside the aperture the mask is zero; inside
    /// it is unimodular at any blaze depth.
    pub fn transmittance(&self, grid: GridSpec) -> Result<ComplexField> {
        self.validate()?;
        let (dx, dy) = self.dislocation_offset;
        let carrier = TAU * self.line_density;
        let half_aperture = self.aperture / 2.0;
        Ok(ComplexField::from_fn(grid, |x, y| {
            if x.abs() > half_aperture || y.abs() > half_aperture {
                return Complex64::ZERO;
            }
            let phi = (y - dy).atan2(x - dx);
            let arg = self.delta_m as f64 * phi + carrier * x;
            let saw = arg.rem_euclid(TAU) / TAU;
            Complex64::from_polar(1.0, self.blaze_depth * saw)
        }))
    }

    /// Idealized first-order action with the carrier removed: multiply by
    /// `exp(i * delta_m * phi')` and by the square root of the first-order
    /// efficiency. Matches `extract_order(transmittance * f, 1)` up to the
    /// carrier tilt.
    pub fn apply_first_order(&self, field: &ComplexField) -> Result<ComplexField> {
        self.validate()?;
        let (dx, dy) = self.dislocation_offset;
        let amp = self.first_order_efficiency.sqrt();
        let grid = field.grid();
        let n = grid.n();
        let mut samples = Vec::with_capacity(n * n);
        for iy in 0..n {
            let y = grid.coord(iy);
            for ix in 0..n {
                let x = grid.coord(ix);
                let phi = (y - dy).atan2(x - dx);
                let factor = Complex64::from_polar(amp, self.delta_m as f64 * phi);
                samples.push(field.get(ix, iy) * factor);
            }
        }
        ComplexField::from_samples(grid, samples)
    }
}
