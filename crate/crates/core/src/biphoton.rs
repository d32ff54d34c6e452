//! Two-photon OAM states, classical mixtures, coincidence probabilities,
//! visibility, counting statistics and the collection-efficiency budget.
//!
//! Down-conversion conserves orbital angular momentum, so a pump with
//! winding number `pump_l` only populates pairs `|l>|pump_l - l>`. The
//! coherent state keeps complex amplitudes over those pairs; the mixture
//! keeps bare probabilities. The contrast between the two shows up only in
//! superposition bases.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::modefilter::ProjectionVector;

/// Truncated coherent two-photon state with built-in OAM conservation.
///
/// `amplitude(l)` is the probability amplitude of the pair
/// `|l>_1 |pump_l - l>_2`; amplitudes are normalized so their squared
/// magnitudes sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState {
    pump_l: i32,
    l_max: u32,
    amplitudes: Vec<Complex64>,
}

impl TwoPhotonState {
    /// Build a normalized state from `2 l_max + 1` pair amplitudes indexed by
    /// the signed winding number of photon 1.
    pub fn new(pump_l: i32, l_max: u32, amplitudes: &[Complex64]) -> Result<Self> {
        let expected = 2 * l_max as usize + 1;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                name: "pair amplitudes",
                expected,
                got: amplitudes.len(),
            });
        }
        let total: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::AllZeroAmplitudes);
        }
        let scale = 1.0 / total.sqrt();
        Ok(Self {
            pump_l,
            l_max,
            amplitudes: amplitudes.iter().map(|c| c * scale).collect(),
        })
    }

    /// Equal-magnitude, zero-phase amplitudes over the whole truncation.
    pub fn uniform(pump_l: i32, l_max: u32) -> Self {
        let amps = vec![Complex64::ONE; 2 * l_max as usize + 1];
        Self::new(pump_l, l_max, &amps).expect("uniform amplitudes are nonzero")
    }

    /// The two-term superposition `(|0>|0> + e^{i phase} |2>|-2>)/sqrt(2)`
    /// used by the superposition scans.
    pub fn two_term(relative_phase: f64) -> Self {
        let mut amps = vec![Complex64::ZERO; 5];
        amps[2] = Complex64::ONE;
        amps[4] = Complex64::from_polar(1.0, relative_phase);
        Self::new(0, 2, &amps).expect("two nonzero terms")
    }

    pub fn pump_l(&self) -> i32 {
        self.pump_l
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    /// Winding number of photon 2 paired with `l` on photon 1.
    pub fn partner(&self, l: i32) -> i32 {
        self.pump_l - l
    }

    /// Amplitude of the pair `|l>|pump_l - l>`; zero outside the truncation.
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
}

/// Classically correlated counterpart: the same conserving pairs with bare
/// probabilities instead of amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureState {
    pump_l: i32,
    l_max: u32,
    probabilities: Vec<f64>,
}

impl MixtureState {
    pub fn new(pump_l: i32, l_max: u32, probabilities: &[f64]) -> Result<Self> {
        let expected = 2 * l_max as usize + 1;
        if probabilities.len() != expected {
            return Err(Error::LengthMismatch {
                name: "pair probabilities",
                expected,
                got: probabilities.len(),
            });
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::OutOfRange {
                name: "pair probability",
                value: f64::NAN,
                range: "[0, 1]",
            });
        }
        let total: f64 = probabilities.iter().sum();
        if total <= 0.0 {
            return Err(Error::AllZeroAmplitudes);
        }
        Ok(Self {
            pump_l,
            l_max,
            probabilities: probabilities.iter().map(|p| p / total).collect(),
        })
    }

    /// The mixture obtained by dropping all coherences of a two-photon state.
    pub fn from_state(state: &TwoPhotonState) -> Self {
        Self {
            pump_l: state.pump_l,
            l_max: state.l_max,
            probabilities: state.amplitudes.iter().map(|c| c.norm_sqr()).collect(),
        }
    }

    pub fn pump_l(&self) -> i32 {
        self.pump_l
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn probability(&self, l: i32) -> f64 {
        let idx = l + self.l_max as i32;
        if idx < 0 || idx >= self.probabilities.len() as i32 {
            0.0
        } else {
            self.probabilities[idx as usize]
        }
    }
}

fn check_truncations(state_l_max: u32, a: &ProjectionVector, b: &ProjectionVector) -> Result<()> {
    for filter in [a, b] {
        if filter.l_max() < state_l_max {
            return Err(Error::TruncationMismatch {
                projector: filter.l_max(),
                state: state_l_max,
            });
        }
    }
    Ok(())
}

/// Coincidence probability for a coherent state: the amplitudes of all
/// conserving pairs add before squaring,
/// `| sum_l C_l a_l b_{pump_l - l} |^2`.
pub fn coincidence_probability(
    state: &TwoPhotonState,
    a: &ProjectionVector,
    b: &ProjectionVector,
) -> Result<f64> {
    check_truncations(state.l_max, a, b)?;
    let mut amp = Complex64::ZERO;
    for l in -(state.l_max as i32)..=state.l_max as i32 {
        amp += state.amplitude(l) * a.amplitude(l) * b.amplitude(state.partner(l));
    }
    Ok(amp.norm_sqr())
}

/// Coincidence probability for a classical mixture: probabilities add,
/// `sum_l p_l |a_l|^2 |b_{pump_l - l}|^2`.
pub fn mixture_coincidence_probability(
    mixture: &MixtureState,
    a: &ProjectionVector,
    b: &ProjectionVector,
) -> Result<f64> {
    check_truncations(mixture.l_max, a, b)?;
    let mut prob = 0.0;
    for l in -(mixture.l_max as i32)..=mixture.l_max as i32 {
        prob += mixture.probability(l)
            * a.amplitude(l).norm_sqr()
            * b.amplitude(mixture.pump_l - l).norm_sqr();
    }
    Ok(prob)
}

/// Contrast `(i_out - i_in) / (i_out + i_in)` between the coincidence rates
/// with the hologram dislocation out of and in the beam path.
pub fn visibility(i_out: f64, i_in: f64) -> Result<f64> {
    for (name, v) in [("i_out", i_out), ("i_in", i_in)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::OutOfRange {
                name,
                value: v,
                range: "[0, inf)",
            });
        }
    }
    if i_out == 0.0 && i_in == 0.0 {
        return Err(Error::ZeroContrast);
    }
    Ok((i_out - i_in) / (i_out + i_in))
}

/// Multiplicative loss budget: named power-transmission factors in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossBudget {
    factors: Vec<(String, f64)>,
}

impl LossBudget {
    pub fn new(factors: Vec<(String, f64)>) -> Result<Self> {
        for (name, value) in &factors {
            if !value.is_finite() || !(0.0..=1.0).contains(value) {
                return Err(Error::OutOfRange {
                    name: if name.is_empty() { "loss factor" } else { "loss factor value" },
                    value: *value,
                    range: "[0, 1]",
                });
            }
        }
        Ok(Self { factors })
    }

    pub fn empty() -> Self {
        Self { factors: Vec::new() }
    }

    /// The standard desk budget: hologram first-order diffraction, Fresnel
    /// surface transmission, fiber coupling, interference-filter center
    /// transmission and detector quantum efficiency.
    pub fn standard() -> Self {
        Self {
            factors: vec![
                ("hologram_first_order".into(), 0.18),
                ("surface_transmission".into(), 0.95),
                ("fiber_coupling".into(), 0.70),
                ("filter_transmission".into(), 0.75),
                ("detector_efficiency".into(), 0.30),
            ],
        }
    }

    pub fn factors(&self) -> &[(String, f64)] {
        &self.factors
    }

    /// Product of all factors; the empty budget multiplies out to 1.
    pub fn collection_efficiency(&self) -> f64 {
        self.factors.iter().map(|(_, v)| v).product()
    }
}

impl Default for LossBudget {
    fn default() -> Self {
        Self::standard()
    }
}

/// One Poisson draw of detected counts with mean `prob * mean_pairs`,
/// reproducible per seed. The RNG is owned by the call; there is no hidden
/// global randomness.
pub fn poisson_counts(prob: f64, mean_pairs: f64, seed: u64) -> Result<u64> {
    if !prob.is_finite() || !(0.0..=1.0).contains(&prob) {
        return Err(Error::OutOfRange {
            name: "probability",
            value: prob,
            range: "[0, 1]",
        });
    }
    if !mean_pairs.is_finite() || mean_pairs < 0.0 {
        return Err(Error::OutOfRange {
            name: "mean pairs",
            value: mean_pairs,
            range: "[0, inf)",
        });
    }
    let lambda = prob * mean_pairs;
    if lambda == 0.0 {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw: f64 = Poisson::new(lambda)
        .expect("positive finite mean")
        .sample(&mut rng);
    Ok(draw as u64)
}
