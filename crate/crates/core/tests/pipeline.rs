//! Cross-module consistency properties: wave-optics analyzers against
//! basis-level computations, conditional fields against projector-pair
//! coincidences, and truncation stability of reported results.

use num_complex::Complex64;
use oamsim_core::biphoton::{
    coincidence_probability, mixture_coincidence_probability, MixtureState, TwoPhotonState,
};
use oamsim_core::fieldgrid::{inner_product, winding_number, ComplexField, GridSpec};
use oamsim_core::lgmodes::{lg_amplitude, BeamParams, ModeIndex};
use oamsim_core::modefilter::effective_projector;
use oamsim_core::scenarios::{
    conditional_field, conservation_matrix, superposition_scan, CorrelationModel, FilterBank,
    RasterSpec, ScanSetup, ScenarioConfig,
};

const WAIST: f64 = 0.5;
const LAMBDA: f64 = 7.02e-4;

fn scenario() -> ScenarioConfig {
    let beam = BeamParams::new(WAIST, LAMBDA).unwrap();
    let grid = GridSpec::new(256, 8.0 * WAIST).unwrap();
    ScenarioConfig::standard(beam, grid)
}

fn fiber_probe(grid: GridSpec, offset: (f64, f64)) -> ComplexField {
    let beam = BeamParams::new(WAIST, LAMBDA).unwrap();
    ComplexField::from_fn(grid, |x, y| {
        lg_amplitude(ModeIndex::gaussian(), &beam, x - offset.0, y - offset.1)
    })
}

#[test]
fn wave_optics_matrix_matches_the_idealized_one() {
    let cfg = scenario();
    let l1 = [0, 1, 2];
    let l2 = [-2, -1, 0, 1, 2];
    for pump in [-1i32, 0, 1] {
        let state = TwoPhotonState::uniform(pump, 2);
        let ideal = conservation_matrix(&state, &l1, &l2, FilterBank::Ideal).unwrap();
        let wave = conservation_matrix(&state, &l1, &l2, FilterBank::WaveOptics(&cfg)).unwrap();
        assert_eq!(ideal.unnormalizable_rows, wave.unnormalizable_rows);
        for i in 0..l1.len() {
            for j in 0..l2.len() {
                assert!(
                    (ideal.entry(i, j) - wave.entry(i, j)).abs() < 1e-6,
                    "pump {pump} ({i},{j}): ideal {} wave {}",
                    ideal.entry(i, j),
                    wave.entry(i, j)
                );
            }
        }
    }
}

#[test]
fn off_rule_entries_vanish_in_both_pipelines() {
    let cfg = scenario();
    let state = TwoPhotonState::uniform(0, 2);
    for bank in [FilterBank::Ideal, FilterBank::WaveOptics(&cfg)] {
        let m = conservation_matrix(&state, &[0, 1, 2], &[-2, -1, 0, 1, 2], bank).unwrap();
        for (i, &l1) in m.l1_values.iter().enumerate() {
            for (j, &l2) in m.l2_values.iter().enumerate() {
                if l1 + l2 != 0 {
                    assert!(m.entry(i, j) < 1e-10, "({l1},{l2}): {}", m.entry(i, j));
                }
            }
        }
    }
}

#[test]
fn scan_map_equals_the_conditional_field_overlap() {
    // projector-pair coincidences against |<G_s, psi_2>|^2 from the
    // conditional-field construction, on a sparse probe raster
    let cfg = scenario();
    let mut setup = ScanSetup::standard(cfg, 0.0);
    setup.raster = RasterSpec::centered(1.5 * WAIST, 7);
    let shift = 0.4 * WAIST;
    let map = superposition_scan(CorrelationModel::Entangled, shift, &setup).unwrap();

    let filter = cfg.shifted_analyzer(setup.arm1_delta_m, shift);
    let arm1 = effective_projector(&filter, &cfg.beam, cfg.grid, cfg.truncation).unwrap();
    let psi2 = conditional_field(&setup.state, &arm1, &cfg.beam, cfg.grid).unwrap();

    for (offset, value) in map.offsets.iter().zip(&map.values) {
        let probe = fiber_probe(cfg.grid, *offset);
        let overlap = inner_product(&probe, &psi2).unwrap().norm_sqr();
        assert!(
            (overlap - value).abs() <= 1e-10 * map.max().max(1e-30),
            "at {offset:?}: overlap {overlap:.3e} vs map {value:.3e}"
        );
    }
}

#[test]
fn conditional_field_zero_count_matches_its_winding() {
    let cfg = scenario();
    let setup = ScanSetup::standard(cfg, 0.0);
    let filter = cfg.shifted_analyzer(-2, 0.45 * WAIST);
    let arm1 = effective_projector(&filter, &cfg.beam, cfg.grid, cfg.truncation).unwrap();
    let psi2 = conditional_field(&setup.state, &arm1, &cfg.beam, cfg.grid).unwrap();
    let total: i32 = oamsim_core::fieldgrid::find_singularities(&psi2, 1e-8)
        .iter()
        .map(|s| s.charge)
        .sum();
    let loop_charge = winding_number(&psi2, (0.0, 0.0), 2.5 * WAIST).unwrap();
    assert_eq!(total, loop_charge);
    assert_eq!(total, -2);
}

#[test]
fn eigenbasis_scans_cannot_tell_entangled_from_mixed() {
    // centered dislocation: arm 1 projects onto a single charge and both
    // models produce the same map
    let cfg = scenario();
    let mut setup = ScanSetup::standard(cfg, 0.0);
    setup.raster = RasterSpec::centered(1.5 * WAIST, 9);
    let ent = superposition_scan(CorrelationModel::Entangled, 0.0, &setup).unwrap();
    let mix = superposition_scan(CorrelationModel::Mixture, 0.0, &setup).unwrap();
    let scale = ent.max();
    for (a, b) in ent.values.iter().zip(&mix.values) {
        assert!((a - b).abs() <= 1e-12 * scale);
    }

    // far-displaced dislocation: arm 1 approaches the plain grating and the
    // two models converge; a mid-range shift separates them
    let far = 1.9 * WAIST;
    let ent_far = superposition_scan(CorrelationModel::Entangled, far, &setup).unwrap();
    let mix_far = superposition_scan(CorrelationModel::Mixture, far, &setup).unwrap();
    let far_gap = ent_far
        .values
        .iter()
        .zip(&mix_far.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / ent_far.max();

    let mid = 0.4 * WAIST;
    let ent_mid = superposition_scan(CorrelationModel::Entangled, mid, &setup).unwrap();
    let mix_mid = superposition_scan(CorrelationModel::Mixture, mid, &setup).unwrap();
    let mid_gap = ent_mid
        .values
        .iter()
        .zip(&mix_mid.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / ent_mid.max();

    assert!(mid_gap > 0.3, "mid-shift gap {mid_gap}");
    assert!(far_gap < 0.05, "far-shift gap {far_gap}");
    assert!(far_gap < mid_gap);
}

#[test]
fn reported_results_are_stable_under_truncation_growth() {
    let beam = BeamParams::new(WAIST, LAMBDA).unwrap();
    let grid = GridSpec::new(256, 8.0 * WAIST).unwrap();
    let mut small = ScenarioConfig::standard(beam, grid);
    small.truncation = 4;
    let mut large = small;
    large.truncation = 6;

    let state = TwoPhotonState::uniform(0, 2);
    let m_small =
        conservation_matrix(&state, &[0, 1, 2], &[-2, -1, 0, 1, 2], FilterBank::WaveOptics(&small))
            .unwrap();
    let m_large =
        conservation_matrix(&state, &[0, 1, 2], &[-2, -1, 0, 1, 2], FilterBank::WaveOptics(&large))
            .unwrap();
    for i in 0..3 {
        for j in 0..5 {
            assert!((m_small.entry(i, j) - m_large.entry(i, j)).abs() < 1e-6);
        }
    }

    let mut setup_small = ScanSetup::standard(small, 0.0);
    setup_small.raster = RasterSpec::centered(1.5 * WAIST, 5);
    let mut setup_large = setup_small.clone();
    setup_large.scenario = large;
    let shift = 0.4 * WAIST;
    let map_small = superposition_scan(CorrelationModel::Entangled, shift, &setup_small).unwrap();
    let map_large = superposition_scan(CorrelationModel::Entangled, shift, &setup_large).unwrap();
    for (a, b) in map_small.values.iter().zip(&map_large.values) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn coincidences_are_symmetric_under_arm_exchange_with_swapped_charges() {
    // the two-term state pairs (0,0) and (2,-2); swapping arms while
    // negating analyzed charges leaves every probability unchanged
    let state = TwoPhotonState::two_term(0.0);
    let a = oamsim_core::modefilter::ProjectionVector::balanced(&[0, 2], 2).unwrap();
    let b = oamsim_core::modefilter::ProjectionVector::balanced(&[0, -2], 2).unwrap();
    let direct = coincidence_probability(&state, &a, &b).unwrap();

    let swapped_state = TwoPhotonState::new(
        0,
        2,
        &[
            state.amplitude(-2).conj() * Complex64::ONE,
            state.amplitude(-1),
            state.amplitude(0),
            state.amplitude(1),
            state.amplitude(2).conj(),
        ],
    )
    .unwrap();
    let swapped = coincidence_probability(&swapped_state, &b_swapped(&b), &a_swapped(&a)).unwrap();
    assert!((direct - swapped).abs() < 1e-12);

    let mixture = MixtureState::from_state(&state);
    let m = mixture_coincidence_probability(&mixture, &a, &b).unwrap();
    assert!((2.0 * m - direct).abs() < 1e-12);
}

fn a_swapped(p: &oamsim_core::modefilter::ProjectionVector) -> oamsim_core::modefilter::ProjectionVector {
    reverse_charges(p)
}

fn b_swapped(p: &oamsim_core::modefilter::ProjectionVector) -> oamsim_core::modefilter::ProjectionVector {
    reverse_charges(p)
}

fn reverse_charges(
    p: &oamsim_core::modefilter::ProjectionVector,
) -> oamsim_core::modefilter::ProjectionVector {
    let l_max = p.l_max();
    let amps: Vec<Complex64> = (-(l_max as i32)..=l_max as i32)
        .map(|l| p.amplitude(-l))
        .collect();
    oamsim_core::modefilter::ProjectionVector::from_amplitudes(l_max, amps).unwrap()
}
