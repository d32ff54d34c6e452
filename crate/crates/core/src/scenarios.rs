//! End-to-end presets: conservation matrices over analyzer pairs,
//! superposition scans of a displaced-dislocation filter against a scanned
//! fiber, the locus of the displaced singularity, and the dislocation
//! in/out visibility contrast.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::biphoton::{
    coincidence_probability, mixture_coincidence_probability, MixtureState, TwoPhotonState,
};
use crate::error::{Error, Result};
use crate::fieldgrid::{find_singularities, ComplexField, GridSpec, DEFAULT_AMPLITUDE_FLOOR};
use crate::hologram::HologramSpec;
use crate::lgmodes::{lg_field, BeamParams, ModeIndex};
use crate::modefilter::{effective_projector, scan_projectors, FilterConfig, ProjectionVector};

/// Shift schedule for stepping a dislocation out of the beam, in waists.
///
/// The coincidence-map zero sits at twice the conditional-field singularity
/// radius; by 0.6 waists of shift it reaches ~1.5 beam waists, the edge of
/// what the default raster can still resolve. Larger shifts push the zero
/// off the scanned region entirely.
pub const DEFAULT_SHIFT_SCHEDULE: [f64; 5] = [0.0, 0.3, 0.4, 0.5, 0.6];

/// A row whose raw coincidences sum below this fraction of the largest
/// matrix entry cannot be normalized and is reported as unnormalizable.
const ROW_ZERO_REL: f64 = 1e-12;

/// Shared optical layout for scenario runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub beam: BeamParams,
    pub grid: GridSpec,
    /// Fiber mode-field radius; defaults to the beam waist (matched).
    pub fiber_waist: f64,
    /// Plate data shared by every analyzer; `delta_m` is set per use.
    pub hologram_template: HologramSpec,
    /// OAM truncation used for every projector.
    pub truncation: u32,
}

impl ScenarioConfig {
    pub fn standard(beam: BeamParams, grid: GridSpec) -> Self {
        Self {
            beam,
            grid,
            fiber_waist: beam.waist(),
            hologram_template: HologramSpec::default(),
            truncation: 4,
        }
    }

    /// Mode filter analyzing winding number `l`.
    ///
    /// For `l = 0` the dislocation is shifted out of the beam and the plate
    /// acts as a plain grating (no hologram in the model); otherwise a
    /// centered fork with `delta_m = -l` brings charge `l` to the fiber.
    pub fn analyzer(&self, l: i32) -> FilterConfig {
        if l == 0 {
            FilterConfig::bare_fiber(self.fiber_waist)
        } else {
            let spec = HologramSpec {
                delta_m: -l,
                dislocation_offset: (0.0, 0.0),
                ..self.hologram_template
            };
            FilterConfig::with_hologram(spec, self.fiber_waist)
        }
    }

    /// Filter with `delta_m` dislocations displaced by `shift` along x.
    pub fn shifted_analyzer(&self, delta_m: i32, shift: f64) -> FilterConfig {
        let spec = HologramSpec {
            delta_m,
            dislocation_offset: (shift, 0.0),
            ..self.hologram_template
        };
        FilterConfig::with_hologram(spec, self.fiber_waist)
    }

    pub fn projector_for(&self, l: i32) -> Result<ProjectionVector> {
        effective_projector(&self.analyzer(l), &self.beam, self.grid, self.truncation)
    }
}

/// Which analyzer model backs a conservation matrix.
#[derive(Debug, Clone, Copy)]
pub enum FilterBank<'a> {
    /// Lossless single-charge projectors; the basis-level computation.
    Ideal,
    /// Full wave-optics projectors from hologram plus fiber.
    WaveOptics(&'a ScenarioConfig),
}

/// Row-normalized coincidence matrix over analyzer pairs.
///
/// Rows whose raw coincidences vanish (no conserving pair within the
/// analyzed range) cannot be normalized; they are left as zeros and their
/// indices reported in `unnormalizable_rows`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationMatrix {
    pub l1_values: Vec<i32>,
    pub l2_values: Vec<i32>,
    pub rows: Vec<Vec<f64>>,
    pub unnormalizable_rows: Vec<usize>,
}

impl ConservationMatrix {
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }
}

/// Coincidence matrix for analyzer charges `l1_list` x `l2_list`, each row
/// normalized to unit sum.
pub fn conservation_matrix(
    state: &TwoPhotonState,
    l1_list: &[i32],
    l2_list: &[i32],
    filters: FilterBank<'_>,
) -> Result<ConservationMatrix> {
    let projector = |l: i32| -> Result<ProjectionVector> {
        match filters {
            FilterBank::Ideal => {
                let span = state.l_max().max(l.unsigned_abs());
                ProjectionVector::pure(l, span)
            }
            FilterBank::WaveOptics(cfg) => cfg.projector_for(l),
        }
    };
    let arm1: Vec<ProjectionVector> = l1_list
        .iter()
        .map(|l| projector(*l))
        .collect::<Result<_>>()?;
    let arm2: Vec<ProjectionVector> = l2_list
        .iter()
        .map(|l| projector(*l))
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(arm1.len());
    let mut max_entry = 0.0f64;
    for a in &arm1 {
        let mut row = Vec::with_capacity(arm2.len());
        for b in &arm2 {
            let p = coincidence_probability(state, a, b)?;
            max_entry = max_entry.max(p);
            row.push(p);
        }
        rows.push(row);
    }

    let mut unnormalizable = Vec::new();
    for (i, row) in rows.iter_mut().enumerate() {
        let sum: f64 = row.iter().sum();
        if sum <= ROW_ZERO_REL * max_entry {
            row.iter_mut().for_each(|v| *v = 0.0);
            unnormalizable.push(i);
        } else {
            row.iter_mut().for_each(|v| *v /= sum);
        }
    }
    Ok(ConservationMatrix {
        l1_values: l1_list.to_vec(),
        l2_values: l2_list.to_vec(),
        rows,
        unnormalizable_rows: unnormalizable,
    })
}

/// Coherent superposition versus classical mixture of the same pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationModel {
    Entangled,
    Mixture,
}

/// Square raster of fiber offsets, row-major with x fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterSpec {
    pub center: (f64, f64),
    pub half_extent: f64,
    pub points_per_side: usize,
}

impl RasterSpec {
    pub fn centered(half_extent: f64, points_per_side: usize) -> Self {
        Self {
            center: (0.0, 0.0),
            half_extent,
            points_per_side,
        }
    }

    pub fn around(center: (f64, f64), half_extent: f64, points_per_side: usize) -> Self {
        Self {
            center,
            half_extent,
            points_per_side,
        }
    }

    pub fn offsets(&self) -> Vec<(f64, f64)> {
        let n = self.points_per_side;
        if n == 1 {
            return vec![self.center];
        }
        let step = 2.0 * self.half_extent / (n - 1) as f64;
        let mut out = Vec::with_capacity(n * n);
        for iy in 0..n {
            let y = self.center.1 - self.half_extent + iy as f64 * step;
            for ix in 0..n {
                out.push((self.center.0 - self.half_extent + ix as f64 * step, y));
            }
        }
        out
    }
}

/// Configuration of a superposition scan: a two-term source, a displaced
/// fork in arm 1 and a scanned bare fiber in arm 2.
#[derive(Debug, Clone)]
pub struct ScanSetup {
    pub scenario: ScenarioConfig,
    pub state: TwoPhotonState,
    /// Dislocation count of the arm-1 fork (-2 detects the l in {0, 2} pair).
    pub arm1_delta_m: i32,
    pub raster: RasterSpec,
}

impl ScanSetup {
    /// Default scan: `(|0>|0> + e^{i phase}|2>|-2>)/sqrt(2)` source, a
    /// two-dislocation fork in arm 1, 41 x 41 raster over +/- 2 waists.
    pub fn standard(scenario: ScenarioConfig, relative_phase: f64) -> Self {
        let waist = scenario.beam.waist();
        Self {
            scenario,
            state: TwoPhotonState::two_term(relative_phase),
            arm1_delta_m: -2,
            raster: RasterSpec::centered(2.0 * waist, 41),
        }
    }

    /// Shift schedule scaled to the beam waist.
    pub fn default_shifts(&self) -> Vec<f64> {
        DEFAULT_SHIFT_SCHEDULE
            .iter()
            .map(|s| s * self.scenario.beam.waist())
            .collect()
    }

    fn arm1_projector(&self, shift: f64) -> Result<ProjectionVector> {
        let filter = self
            .scenario
            .shifted_analyzer(self.arm1_delta_m, shift);
        effective_projector(
            &filter,
            &self.scenario.beam,
            self.scenario.grid,
            self.scenario.truncation,
        )
    }
}

/// Coincidence map over a raster of arm-2 fiber offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanMap {
    pub raster: RasterSpec,
    pub offsets: Vec<(f64, f64)>,
    pub values: Vec<f64>,
}

impl ScanMap {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Index, offset and value of the smallest map entry.
    pub fn min_entry(&self) -> (usize, (f64, f64), f64) {
        let mut best = (0, f64::INFINITY);
        for (i, v) in self.values.iter().enumerate() {
            if *v < best.1 {
                best = (i, *v);
            }
        }
        (best.0, self.offsets[best.0], best.1)
    }
}

/// Scan the arm-2 fiber over the raster while arm 1 projects onto the
/// displaced-dislocation superposition.
///
/// Entangled maps contain a true zero (the displaced singularity survives in
/// coincidences); mixture maps of the same pairs do not.
pub fn superposition_scan(
    model: CorrelationModel,
    hologram_shift: f64,
    setup: &ScanSetup,
) -> Result<ScanMap> {
    let grid = setup.scenario.grid;
    let reach = setup.raster.center.0.abs().max(setup.raster.center.1.abs())
        + setup.raster.half_extent;
    if reach > grid.half_extent() {
        return Err(Error::RasterOutsideGrid {
            reach,
            usable: grid.half_extent(),
        });
    }

    let arm1 = setup.arm1_projector(hologram_shift)?;
    let offsets = setup.raster.offsets();
    let arm2 = scan_projectors(
        &FilterConfig::bare_fiber(setup.scenario.fiber_waist),
        &offsets,
        &setup.scenario.beam,
        grid,
        setup.scenario.truncation,
    )?;

    let values: Vec<f64> = match model {
        CorrelationModel::Entangled => arm2
            .par_iter()
            .map(|b| coincidence_probability(&setup.state, &arm1, b))
            .collect::<Result<_>>()?,
        CorrelationModel::Mixture => {
            let mixture = MixtureState::from_state(&setup.state);
            arm2.par_iter()
                .map(|b| mixture_coincidence_probability(&mixture, &arm1, b))
                .collect::<Result<_>>()?
        }
    };
    Ok(ScanMap {
        raster: setup.raster,
        offsets,
        values,
    })
}

/// Effective arm-2 field after projecting arm 1:
/// `sum_l C_l a_l LG_{pump - l}`.
pub fn conditional_field(
    state: &TwoPhotonState,
    arm1: &ProjectionVector,
    beam: &BeamParams,
    grid: GridSpec,
) -> Result<ComplexField> {
    if arm1.l_max() < state.l_max() {
        return Err(Error::TruncationMismatch {
            projector: arm1.l_max(),
            state: state.l_max(),
        });
    }
    let mut total = ComplexField::zero(grid);
    for l in -(state.l_max() as i32)..=state.l_max() as i32 {
        let weight = state.amplitude(l) * arm1.amplitude(l);
        if weight == Complex64::ZERO {
            continue;
        }
        let partner = lg_field(ModeIndex::new(state.partner(l), 0), beam, grid);
        total = total.added(&partner.scaled(weight))?;
    }
    Ok(total)
}

/// Where the conditional field's singularity sits for one dislocation shift.
#[derive(Debug, Clone, PartialEq)]
pub struct LocusRow {
    pub shift: f64,
    /// `|a_0 / a_2|`-type ratio of the Gaussian to the vortex component.
    pub amplitude_ratio: f64,
    pub point: LocusPoint,
}

/// Classified zero set of the conditional field.
#[derive(Debug, Clone, PartialEq)]
pub enum LocusPoint {
    /// Single on-axis zero (pure vortex limit, ratio 0).
    Central { charge: i32 },
    /// Antipodal pair of unit-charge zeros.
    Pair {
        radius: f64,
        /// Angle of the member in the upper half-plane.
        angle: f64,
        positions: [(f64, f64); 2],
    },
    /// No zero found (pure-Gaussian limit); the row is flagged, not faked.
    NotFound,
}

/// Track the displaced singularity of the conditional field across a list
/// of dislocation shifts.
pub fn singularity_locus(shifts: &[f64], setup: &ScanSetup) -> Result<Vec<LocusRow>> {
    let grid = setup.scenario.grid;
    let beam = setup.scenario.beam;
    let pitch = grid.pitch();
    let vortex_l1 = -setup.arm1_delta_m;
    let mut rows = Vec::with_capacity(shifts.len());
    for &shift in shifts {
        let arm1 = setup.arm1_projector(shift)?;
        let field = conditional_field(&setup.state, &arm1, &beam, grid)?;
        let gauss_w = (setup.state.amplitude(0) * arm1.amplitude(0)).norm();
        let vortex_w = (setup.state.amplitude(vortex_l1) * arm1.amplitude(vortex_l1)).norm();
        let amplitude_ratio = if vortex_w > 0.0 { gauss_w / vortex_w } else { f64::INFINITY };

        let singularities = find_singularities(&field, DEFAULT_AMPLITUDE_FLOOR);
        let point = classify_zeros(&singularities, pitch);
        rows.push(LocusRow {
            shift,
            amplitude_ratio,
            point,
        });
    }
    Ok(rows)
}

fn classify_zeros(
    singularities: &[crate::fieldgrid::Singularity],
    pitch: f64,
) -> LocusPoint {
    // a multiply-charged axial zero may land on a plaquette corner and be
    // reported as adjacent unit charges; treat everything within two pixels
    // of the axis as one central zero
    let total_charge: i32 = singularities.iter().map(|s| s.charge).sum();
    let max_radius = singularities
        .iter()
        .map(|s| (s.position.0.powi(2) + s.position.1.powi(2)).sqrt())
        .fold(0.0, f64::max);
    if !singularities.is_empty() && max_radius <= 2.0 * pitch && total_charge.abs() >= 2 {
        return LocusPoint::Central {
            charge: total_charge,
        };
    }
    match singularities {
        [a, b] => {
            let ra = (a.position.0.powi(2) + a.position.1.powi(2)).sqrt();
            let rb = (b.position.0.powi(2) + b.position.1.powi(2)).sqrt();
            let upper = if a.position.1 >= 0.0 { a } else { b };
            let angle = upper.position.1.atan2(upper.position.0);
            LocusPoint::Pair {
                radius: 0.5 * (ra + rb),
                angle,
                positions: [a.position, b.position],
            }
        }
        _ => LocusPoint::NotFound,
    }
}

/// Coincidence rates with the arm-1 dislocation out of and in the beam.
///
/// Out: both arms analyze the allowed `(0, pump)` pair. In: arm 1 analyzes
/// `l = 1`, which no conserving pair can satisfy together with arm 2 still
/// on the pump partner, so the ideal rate vanishes and the visibility is 1.
pub fn visibility_rates(
    state: &TwoPhotonState,
    scenario: &ScenarioConfig,
) -> Result<(f64, f64)> {
    let arm2 = effective_projector(
        &scenario.analyzer(state.pump_l()),
        &scenario.beam,
        scenario.grid,
        scenario.truncation,
    )?;
    let out_filter = effective_projector(
        &scenario.analyzer(0),
        &scenario.beam,
        scenario.grid,
        scenario.truncation,
    )?;
    let in_filter = effective_projector(
        &scenario.analyzer(1),
        &scenario.beam,
        scenario.grid,
        scenario.truncation,
    )?;
    let i_out = coincidence_probability(state, &out_filter, &arm2)?;
    let i_in = coincidence_probability(state, &in_filter, &arm2)?;
    Ok((i_out, i_in))
}

#[cfg(test)]
mod tests {
    use super::*;

    const WAIST: f64 = 0.5;

    fn scenario() -> ScenarioConfig {
        let beam = BeamParams::new(WAIST, 7.02e-4).unwrap();
        let grid = GridSpec::new(256, 8.0 * WAIST).unwrap();
        ScenarioConfig::standard(beam, grid)
    }

    #[test]
    fn ideal_matrix_puts_ones_on_conserving_pairs() {
        for pump in [-1i32, 0, 1] {
            let state = TwoPhotonState::uniform(pump, 2);
            let m = conservation_matrix(
                &state,
                &[0, 1, 2],
                &[-2, -1, 0, 1, 2],
                FilterBank::Ideal,
            )
            .unwrap();
            for (i, &l1) in m.l1_values.iter().enumerate() {
                for (j, &l2) in m.l2_values.iter().enumerate() {
                    let expected = if l1 + l2 == pump { 1.0 } else { 0.0 };
                    if m.unnormalizable_rows.contains(&i) {
                        assert_eq!(m.entry(i, j), 0.0);
                    } else {
                        assert!(
                            (m.entry(i, j) - expected).abs() < 1e-12,
                            "pump {pump}, ({l1}, {l2}): {}",
                            m.entry(i, j)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn out_of_range_rows_are_flagged_not_normalized() {
        // pump -1 with l1 = 2 needs l2 = -3, outside the analyzed range
        let state = TwoPhotonState::uniform(-1, 2);
        let m = conservation_matrix(&state, &[0, 1, 2], &[-2, -1, 0, 1, 2], FilterBank::Ideal)
            .unwrap();
        assert_eq!(m.unnormalizable_rows, vec![2]);
        assert!(m.rows[2].iter().all(|v| *v == 0.0));
        assert!((m.rows[0].iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn raster_offsets_are_row_major_and_centered() {
        let r = RasterSpec::centered(1.0, 3);
        let offsets = r.offsets();
        assert_eq!(offsets.len(), 9);
        assert_eq!(offsets[0], (-1.0, -1.0));
        assert_eq!(offsets[2], (1.0, -1.0));
        assert_eq!(offsets[4], (0.0, 0.0));
        assert_eq!(offsets[8], (1.0, 1.0));
        let single = RasterSpec::around((0.3, -0.2), 1.0, 1);
        assert_eq!(single.offsets(), vec![(0.3, -0.2)]);
    }

    #[test]
    fn scan_rejects_rasters_larger_than_the_grid() {
        let mut setup = ScanSetup::standard(scenario(), 0.0);
        setup.raster = RasterSpec::centered(5.0 * WAIST, 5);
        let err = superposition_scan(CorrelationModel::Entangled, 0.0, &setup);
        assert!(matches!(err, Err(Error::RasterOutsideGrid { .. })));
    }

    #[test]
    fn centered_fork_gives_a_doughnut_scan() {
        let mut setup = ScanSetup::standard(scenario(), 0.0);
        setup.raster = RasterSpec::centered(2.0 * WAIST, 21);
        let map = superposition_scan(CorrelationModel::Entangled, 0.0, &setup).unwrap();
        let (_, offset, min) = map.min_entry();
        assert!(min < 1e-10 * map.max());
        assert!(offset.0.abs() < 1e-12 && offset.1.abs() < 1e-12);
    }

    #[test]
    fn conditional_field_of_the_centered_fork_is_the_pure_vortex() {
        let setup = ScanSetup::standard(scenario(), 0.0);
        let arm1 = setup.arm1_projector(0.0).unwrap();
        let field = conditional_field(
            &setup.state,
            &arm1,
            &setup.scenario.beam,
            setup.scenario.grid,
        )
        .unwrap();
        let spectrum = crate::lgmodes::oam_spectrum(&field, 3);
        assert_eq!(spectrum.dominant().0, -2);
        assert!(spectrum.weight(0) < 1e-12 * spectrum.total());
    }

    #[test]
    fn locus_starts_central_and_moves_out() {
        let setup = ScanSetup::standard(scenario(), 0.0);
        let waist = WAIST;
        let rows = singularity_locus(&[0.0, 0.5 * waist], &setup).unwrap();
        assert_eq!(rows.len(), 2);
        match &rows[0].point {
            LocusPoint::Central { charge } => assert_eq!(charge.abs(), 2),
            other => panic!("expected a central zero, got {other:?}"),
        }
        assert!(rows[0].amplitude_ratio < 1e-10);
        match &rows[1].point {
            LocusPoint::Pair { radius, .. } => assert!(*radius > setup.scenario.grid.pitch()),
            other => panic!("expected a displaced pair, got {other:?}"),
        }
        assert!(rows[1].amplitude_ratio > rows[0].amplitude_ratio);
    }

    #[test]
    fn ideal_visibility_is_unity() {
        let state = TwoPhotonState::uniform(0, 2);
        let (i_out, i_in) = visibility_rates(&state, &scenario()).unwrap();
        let v = crate::biphoton::visibility(i_out, i_in).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "v = {v}");
    }
}
