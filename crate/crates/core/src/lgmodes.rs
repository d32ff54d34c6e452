//! Laguerre-Gaussian modes and OAM decompositions.
//!
//! Modes are evaluated at the beam waist with zero Gouy and curvature phase;
//! global phases cancel in every probability computed downstream. Positive
//! winding number means phase increasing counterclockwise, `exp(+i l phi)`.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::fft::Upsampled;
use crate::fieldgrid::{inner_product, ComplexField, GridSpec};

/// Laguerre-Gaussian mode label: winding number `l` and radial index `p`.
///
/// `l` may be negative (handedness of the helical phase), `p >= 0` counts
/// radial nodes. Analyses here default to `p = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeIndex {
    pub l: i32,
    pub p: u32,
}

impl ModeIndex {
    pub fn new(l: i32, p: u32) -> Self {
        Self { l, p }
    }

    /// The fundamental Gaussian, viewed as the LG mode with `l = 0, p = 0`.
    pub const fn gaussian() -> Self {
        Self { l: 0, p: 0 }
    }
}

/// Beam geometry at the evaluation plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    waist: f64,
    wavelength: f64,
}

impl BeamParams {
    pub fn new(waist: f64, wavelength: f64) -> Result<Self> {
        if !waist.is_finite() || waist <= 0.0 {
            return Err(Error::NonPositive {
                name: "beam waist",
                value: waist,
            });
        }
        if !wavelength.is_finite() || wavelength <= 0.0 {
            return Err(Error::NonPositive {
                name: "wavelength",
                value: wavelength,
            });
        }
        Ok(Self { waist, wavelength })
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Rayleigh range `pi w^2 / lambda`.
    pub fn rayleigh_range(&self) -> f64 {
        PI * self.waist * self.waist / self.wavelength
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k as u64).map(|i| i as f64).product()
}

/// Associated Laguerre polynomial `L_p^alpha(x)` by the three-term recurrence.
fn laguerre(p: u32, alpha: u32, x: f64) -> f64 {
    let a = alpha as f64;
    let mut prev = 1.0;
    if p == 0 {
        return prev;
    }
    let mut curr = 1.0 + a - x;
    for k in 1..p {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * curr - (kf + a) * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// Continuum LG amplitude at a point of the waist plane.
///
/// Unit-normalized on the continuum: `integral |u|^2 dA = 1`.
pub fn lg_amplitude(mode: ModeIndex, beam: &BeamParams, x: f64, y: f64) -> Complex64 {
    let w = beam.waist();
    let al = mode.l.unsigned_abs();
    let r2 = x * x + y * y;
    let t = 2.0 * r2 / (w * w);
    let norm = (2.0 * factorial(mode.p) / (PI * factorial(mode.p + al))).sqrt() / w;
    let radial = norm * t.sqrt().powi(al as i32) * laguerre(mode.p, al, t) * (-r2 / (w * w)).exp();
    let phi = y.atan2(x);
    Complex64::from_polar(radial, mode.l as f64 * phi)
}

/// Sample an LG mode on a grid.
///
/// The grid inner product of the result with itself is 1 to within the
/// quadrature accuracy of the grid (1e-6 on the default layout).
pub fn lg_field(mode: ModeIndex, beam: &BeamParams, grid: GridSpec) -> ComplexField {
    ComplexField::from_fn(grid, |x, y| lg_amplitude(mode, beam, x, y))
}

/// Power carried by each winding number `l in [-l_max, l_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OamSpectrum {
    l_max: u32,
    weights: Vec<f64>,
}

impl OamSpectrum {
    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    /// Weight of charge `l`; zero outside the computed range.
    pub fn weight(&self, l: i32) -> f64 {
        let idx = l + self.l_max as i32;
        if idx < 0 || idx >= self.weights.len() as i32 {
            0.0
        } else {
            self.weights[idx as usize]
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Charge with the largest weight.
    pub fn dominant(&self) -> (i32, f64) {
        let mut best = (0, f64::MIN);
        for (i, w) in self.weights.iter().enumerate() {
            if *w > best.1 {
                best = (i as i32 - self.l_max as i32, *w);
            }
        }
        best
    }
}

const AZIMUTHAL_UPSAMPLE: usize = 4;

/// Azimuthal Fourier power spectrum of a field, by per-annulus analysis.
///
/// `weight(l) = 2 pi * integral r |c_l(r)|^2 dr` with
/// `c_l(r) = (1/2 pi) * integral exp(-i l phi) f(r, phi) dphi`. Rings cover
/// the inscribed circle; the radial quadrature is composite Simpson over
/// `n/2` annuli and the ring values come from band-limited upsampling of the
/// field. Weights sum to at most the total field power, and reach it when
/// the charge support lies within `[-l_max, l_max]`.
pub fn oam_spectrum(field: &ComplexField, l_max: u32) -> OamSpectrum {
    let grid = field.grid();
    let n = grid.n();
    let r_max = grid.half_extent();
    let mut intervals = n / 2;
    if intervals % 2 == 1 {
        intervals += 1;
    }
    let dr = r_max / intervals as f64;
    let m_az = 256usize.max((4 * (l_max as usize + 1)).next_power_of_two());

    let up = Upsampled::new(field, AZIMUTHAL_UPSAMPLE);
    let l_count = 2 * l_max as usize + 1;
    let mut acc = vec![0.0; l_count];
    let mut ring = vec![Complex64::ZERO; l_count];

    // the q = 0 node of the Simpson rule has integrand r |c|^2 = 0
    for q in 1..=intervals {
        let r = q as f64 * dr;
        let simpson_w = if q == intervals {
            1.0
        } else if q % 2 == 1 {
            4.0
        } else {
            2.0
        };
        ring.iter_mut().for_each(|c| *c = Complex64::ZERO);
        for k in 0..m_az {
            let phi = TAU * k as f64 / m_az as f64;
            let v = up.sample(r * phi.cos(), r * phi.sin());
            // e^{-i l phi} for l = -l_max ..= l_max by repeated multiplication
            let step = Complex64::from_polar(1.0, -phi);
            let mut pos = Complex64::ONE;
            ring[l_max as usize] += v;
            let mut neg = Complex64::ONE;
            for dl in 1..=l_max as usize {
                pos *= step;
                neg *= step.conj();
                ring[l_max as usize + dl] += v * pos;
                ring[l_max as usize - dl] += v * neg;
            }
        }
        for (a, c) in acc.iter_mut().zip(&ring) {
            let cl = c / m_az as f64;
            *a += simpson_w * r * cl.norm_sqr();
        }
    }
    let scale = dr / 3.0 * TAU;
    OamSpectrum {
        l_max,
        weights: acc.into_iter().map(|a| a * scale).collect(),
    }
}

/// LG expansion coefficients `c(l, p) = <LG_lp, f>` over a truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LgDecomposition {
    l_max: u32,
    p_max: u32,
    coefficients: Vec<Complex64>,
}

impl LgDecomposition {
    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn p_max(&self) -> u32 {
        self.p_max
    }

    pub fn coefficient(&self, l: i32, p: u32) -> Complex64 {
        let idx = l + self.l_max as i32;
        if idx < 0 || idx > 2 * self.l_max as i32 || p > self.p_max {
            Complex64::ZERO
        } else {
            self.coefficients[idx as usize * (self.p_max as usize + 1) + p as usize]
        }
    }

    /// Captured power `sum |c|^2`; bounded by the field power (Parseval).
    pub fn power(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Project a field onto LG modes with `|l| <= l_max`, `p <= p_max`.
pub fn lg_decompose(
    field: &ComplexField,
    beam: &BeamParams,
    l_max: u32,
    p_max: u32,
) -> Result<LgDecomposition> {
    let grid = field.grid();
    let mut coefficients = Vec::with_capacity((2 * l_max as usize + 1) * (p_max as usize + 1));
    for l in -(l_max as i32)..=l_max as i32 {
        for p in 0..=p_max {
            let basis = lg_field(ModeIndex::new(l, p), beam, grid);
            coefficients.push(inner_product(&basis, field)?);
        }
    }
    Ok(LgDecomposition {
        l_max,
        p_max,
        coefficients,
    })
}
