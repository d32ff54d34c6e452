//! Hologram plus mono-mode fiber as a projective mode measurement.
//!
//! A filter is described by the detection amplitudes it presents to each
//! winding number: `a_l = <fiber Gaussian | first-order hologram action on
//! LG_l>`. With no hologram the filter is the bare fiber, which only accepts
//! the fundamental Gaussian. The projector is computed in the hologram plane
//! (thin-element model); the relay onto the fiber is mode-preserving for the
//! selected order.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fieldgrid::{inner_product, ComplexField, GridSpec};
use crate::hologram::HologramSpec;
use crate::lgmodes::{lg_field, BeamParams, ModeIndex};

/// Quadrature slack allowed when checking that projection weights do not
/// exceed unit response.
pub const PROJECTOR_NORM_SLACK: f64 = 1e-6;

/// Mode filter: optional fork hologram plus a displaced mono-mode fiber.
///
/// An absent hologram models the dislocation shifted fully out of the beam,
/// where the plate acts as a plain grating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub hologram: Option<HologramSpec>,
    /// Mode-field radius of the fiber coupler's Gaussian.
    pub fiber_waist: f64,
    /// Lateral scan position of the coupler.
    pub fiber_offset: (f64, f64),
}

impl FilterConfig {
    pub fn bare_fiber(fiber_waist: f64) -> Self {
        Self {
            hologram: None,
            fiber_waist,
            fiber_offset: (0.0, 0.0),
        }
    }

    pub fn with_hologram(hologram: HologramSpec, fiber_waist: f64) -> Self {
        Self {
            hologram: Some(hologram),
            fiber_waist,
            fiber_offset: (0.0, 0.0),
        }
    }

    pub fn at_offset(mut self, offset: (f64, f64)) -> Self {
        self.fiber_offset = offset;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.fiber_waist.is_finite() || self.fiber_waist <= 0.0 {
            return Err(Error::NonPositive {
                name: "fiber waist",
                value: self.fiber_waist,
            });
        }
        if let Some(h) = &self.hologram {
            h.validate()?;
        }
        Ok(())
    }
}

/// Detection amplitudes of a mode filter over `l in [-l_max, l_max]`.
///
/// The weights `sum |a_l|^2` never exceed 1: a filter is a lossy projector,
/// reaching unit weight only for an ideal lossless pure-mode filter.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionVector {
    l_max: u32,
    amplitudes: Vec<Complex64>,
}

impl ProjectionVector {
    pub fn from_amplitudes(l_max: u32, amplitudes: Vec<Complex64>) -> Result<Self> {
        let expected = 2 * l_max as usize + 1;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                name: "projection amplitudes",
                expected,
                got: amplitudes.len(),
            });
        }
        let total: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if total > 1.0 + PROJECTOR_NORM_SLACK {
            return Err(Error::ProjectorOverUnity { total });
        }
        Ok(Self { l_max, amplitudes })
    }

    /// Ideal lossless filter for a single winding number.
    pub fn pure(l: i32, l_max: u32) -> Result<Self> {
        if l.unsigned_abs() > l_max {
            return Err(Error::OutOfRange {
                name: "pure filter charge",
                value: l as f64,
                range: "[-l_max, l_max]",
            });
        }
        let mut amplitudes = vec![Complex64::ZERO; 2 * l_max as usize + 1];
        amplitudes[(l + l_max as i32) as usize] = Complex64::ONE;
        Ok(Self { l_max, amplitudes })
    }

    /// Equal-weight lossless superposition of a set of charges.
    pub fn balanced(charges: &[i32], l_max: u32) -> Result<Self> {
        let mut amplitudes = vec![Complex64::ZERO; 2 * l_max as usize + 1];
        let w = 1.0 / (charges.len() as f64).sqrt();
        for l in charges {
            if l.unsigned_abs() > l_max {
                return Err(Error::OutOfRange {
                    name: "superposition charge",
                    value: *l as f64,
                    range: "[-l_max, l_max]",
                });
            }
            amplitudes[(l + l_max as i32) as usize] = Complex64::new(w, 0.0);
        }
        Self::from_amplitudes(l_max, amplitudes)
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    /// Detection amplitude for charge `l`; zero outside the truncation.
    pub fn amplitude(&self, l: i32) -> Complex64 {
        let idx = l + self.l_max as i32;
        if idx < 0 || idx >= self.amplitudes.len() as i32 {
            Complex64::ZERO
        } else {
            self.amplitudes[idx as usize]
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Total detection weight `sum |a_l|^2`.
    pub fn total_weight(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Displaced fiber Gaussian, evaluated separably for speed.
fn fiber_field(grid: GridSpec, waist: f64, offset: (f64, f64)) -> ComplexField {
    let n = grid.n();
    let norm = (2.0 / std::f64::consts::PI).sqrt() / waist;
    let profile = |c: f64, off: f64| {
        let d = c - off;
        (-d * d / (waist * waist)).exp()
    };
    let col: Vec<f64> = (0..n).map(|i| profile(grid.coord(i), offset.0)).collect();
    let row: Vec<f64> = (0..n).map(|i| profile(grid.coord(i), offset.1)).collect();
    let mut samples = Vec::with_capacity(n * n);
    for wy in &row {
        for wx in &col {
            samples.push(Complex64::new(norm * wx * wy, 0.0));
        }
    }
    ComplexField::from_samples(grid, samples).expect("finite separable Gaussian")
}

fn filtered_modes(
    filter: &FilterConfig,
    beam: &BeamParams,
    grid: GridSpec,
    l_max: u32,
) -> Result<Vec<ComplexField>> {
    let mut modes = Vec::with_capacity(2 * l_max as usize + 1);
    for l in -(l_max as i32)..=l_max as i32 {
        let mode = lg_field(ModeIndex::new(l, 0), beam, grid);
        let filtered = match &filter.hologram {
            Some(spec) => spec.apply_first_order(&mode)?,
            None => mode,
        };
        modes.push(filtered);
    }
    Ok(modes)
}

fn project(
    filtered: &[ComplexField],
    grid: GridSpec,
    fiber_waist: f64,
    offset: (f64, f64),
    l_max: u32,
) -> Result<ProjectionVector> {
    let fiber = fiber_field(grid, fiber_waist, offset);
    let mut amplitudes = Vec::with_capacity(filtered.len());
    for field in filtered {
        amplitudes.push(inner_product(&fiber, field)?);
    }
    ProjectionVector::from_amplitudes(l_max, amplitudes)
}

/// Detection amplitudes of a filter over the truncated OAM basis.
///
/// `a_l = <displaced fiber Gaussian, first-order(LG_l)>`; with no hologram
/// the amplitudes reduce to the bare-fiber overlaps.
pub fn effective_projector(
    filter: &FilterConfig,
    beam: &BeamParams,
    grid: GridSpec,
    l_max: u32,
) -> Result<ProjectionVector> {
    filter.validate()?;
    let filtered = filtered_modes(filter, beam, grid, l_max)?;
    project(&filtered, grid, filter.fiber_waist, filter.fiber_offset, l_max)
}

/// [`effective_projector`] evaluated at a list of fiber offsets.
///
/// Offsets must stay inside the grid. Points are evaluated in parallel and
/// returned in input order; each value is computed independently, so the
/// output is bitwise reproducible.
pub fn scan_projectors(
    filter: &FilterConfig,
    offsets: &[(f64, f64)],
    beam: &BeamParams,
    grid: GridSpec,
    l_max: u32,
) -> Result<Vec<ProjectionVector>> {
    filter.validate()?;
    let half = grid.half_extent();
    for (ox, oy) in offsets {
        let reach = ox.abs().max(oy.abs());
        if reach > half {
            return Err(Error::RasterOutsideGrid {
                reach,
                usable: half,
            });
        }
    }
    let filtered = filtered_modes(filter, beam, grid, l_max)?;
    offsets
        .par_iter()
        .map(|offset| project(&filtered, grid, filter.fiber_waist, *offset, l_max))
        .collect()
}
