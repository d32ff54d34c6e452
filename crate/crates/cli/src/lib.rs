//! Command-line front end: parse a JSON config plus flag overrides, run a
//! scenario and write CSV tables and PGM maps.
//!
//! Exit codes: 0 on success, 1 on I/O failures (e.g. an unwritable output
//! directory), 2 on configuration or usage errors. Outputs are
//! byte-identical across reruns with the same configuration and seed. The
//! default output directory can be set with the `OAMSIM_OUT_DIR`
//! environment variable.

mod config;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use oamsim_core::biphoton::poisson_counts;
use oamsim_core::hologram::HologramSpec;
use oamsim_core::lgmodes::{lg_field, ModeIndex};
use oamsim_core::scenarios::{
    conservation_matrix, singularity_locus, superposition_scan, CorrelationModel, FilterBank,
    LocusPoint,
};

pub use config::RunConfig;
use output::fmt_sig;

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: String) -> Self {
        Self { code: 2, message }
    }

    fn io(message: String) -> Self {
        Self { code: 1, message }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "oamsim",
    version,
    about = "Desk-scale simulator of orbital-angular-momentum mode filters and two-photon coincidences"
)]
struct Cli {
    /// JSON configuration file; command-line flags override its values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (falls back to OAMSIM_OUT_DIR, then `.`)
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Seed for counting-noise simulations
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render a Laguerre-Gaussian mode as intensity and phase maps
    Lg {
        /// Winding number
        #[arg(long, allow_negative_numbers = true)]
        l: i32,
        /// Radial index
        #[arg(long, default_value_t = 0)]
        p: u32,
    },
    /// Export a fork hologram phase mask
    Hologram {
        /// Dislocation count
        #[arg(long, allow_negative_numbers = true, default_value_t = 2)]
        delta_m: i32,
        /// Lateral dislocation displacement along x, in mm
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        shift_mm: f64,
    },
    /// Row-normalized coincidence matrix over analyzer pairs
    Conservation {
        /// Pump winding number
        #[arg(long, allow_negative_numbers = true)]
        pump: Option<i32>,
    },
    /// Superposition scan: shifted arm-1 dislocation, scanned arm-2 fiber
    Scan {
        #[arg(long, value_enum, default_value_t = ModelArg::Entangled)]
        model: ModelArg,
        /// Single dislocation shift in mm; the full schedule if omitted
        #[arg(long, allow_negative_numbers = true)]
        shift_mm: Option<f64>,
    },
    /// Singularity locus of the conditional field across the shift schedule
    Locus,
    /// Collection efficiency: product of the loss-budget factors
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Entangled,
    Mixture,
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => config::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }

    let out_dir = cli
        .out_dir
        .or_else(|| cfg.output_dir.clone())
        .or_else(|| std::env::var_os("OAMSIM_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::io(format!("output dir {}: {e}", out_dir.display())))?;

    match cli.command {
        Command::Lg { l, p } => render_mode(&cfg, &out_dir, l, p),
        Command::Hologram { delta_m, shift_mm } => export_mask(&cfg, &out_dir, delta_m, shift_mm),
        Command::Conservation { pump } => write_conservation(&cfg, &out_dir, pump),
        Command::Scan { model, shift_mm } => write_scans(&cfg, &out_dir, model, shift_mm),
        Command::Locus => write_locus(&cfg, &out_dir),
        Command::Budget => print_budget(&cfg),
    }
}

fn render_mode(cfg: &RunConfig, out_dir: &Path, l: i32, p: u32) -> Result<(), CliError> {
    let beam = cfg.beam_params()?;
    let grid = cfg.grid_spec()?;
    let field = lg_field(ModeIndex::new(l, p), &beam, grid);
    output::write_intensity_pgm(&out_dir.join(format!("lg_l{l}_p{p}_intensity.pgm")), &field)?;
    output::write_phase_pgm(&out_dir.join(format!("lg_l{l}_p{p}_phase.pgm")), &field)?;
    Ok(())
}

fn export_mask(cfg: &RunConfig, out_dir: &Path, delta_m: i32, shift_mm: f64) -> Result<(), CliError> {
    let grid = cfg.grid_spec()?;
    let spec = HologramSpec {
        delta_m,
        dislocation_offset: (shift_mm, 0.0),
        ..cfg.hologram_template()
    };
    spec.validate()
        .map_err(|e| CliError::config(format!("invalid value for `filters`: {e}")))?;

    // phase profile of the mask, zero outside the aperture
    let n = grid.n();
    let carrier = std::f64::consts::TAU * spec.line_density;
    let mut phases = vec![0.0; n * n];
    for iy in 0..n {
        let y = grid.coord(iy);
        for ix in 0..n {
            let x = grid.coord(ix);
            if x.abs() > spec.aperture / 2.0 || y.abs() > spec.aperture / 2.0 {
                continue;
            }
            let phi = (y - spec.dislocation_offset.1).atan2(x - spec.dislocation_offset.0);
            let arg = spec.delta_m as f64 * phi + carrier * x;
            phases[iy * n + ix] =
                spec.blaze_depth * (arg.rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU);
        }
    }
    output::write_mask_pgm(&out_dir.join(format!("hologram_dm{delta_m}.pgm")), n, &phases)
}

fn write_conservation(cfg: &RunConfig, out_dir: &Path, pump: Option<i32>) -> Result<(), CliError> {
    let scenario = cfg.scenario()?;
    let state = cfg.pair_state(pump)?;
    let l1_list = [0, 1, 2];
    let l2_list = [-2, -1, 0, 1, 2];
    let matrix = conservation_matrix(&state, &l1_list, &l2_list, FilterBank::WaveOptics(&scenario))
        .map_err(|e| CliError::config(format!("conservation scenario: {e}")))?;

    for &row in &matrix.unnormalizable_rows {
        eprintln!(
            "note: no coincidences for l1 = {} within the analyzed l2 range; row left at zero",
            matrix.l1_values[row]
        );
    }

    let mut header: Vec<String> = vec!["l1".into()];
    header.extend(l2_list.iter().map(|l2| format!("l2={l2}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = matrix.l1_values.iter().enumerate().map(|(i, l1)| {
        let mut row = vec![l1.to_string()];
        row.extend(matrix.rows[i].iter().map(|v| fmt_sig(*v)));
        row
    });
    output::write_csv(
        &out_dir.join(format!("conservation_p{}.csv", state.pump_l())),
        &header_refs,
        rows,
    )
}

fn model_of(arg: ModelArg) -> CorrelationModel {
    match arg {
        ModelArg::Entangled => CorrelationModel::Entangled,
        ModelArg::Mixture => CorrelationModel::Mixture,
    }
}

fn write_scans(
    cfg: &RunConfig,
    out_dir: &Path,
    model: ModelArg,
    shift_mm: Option<f64>,
) -> Result<(), CliError> {
    let setup = cfg.scan_setup()?;
    let shifts = match shift_mm {
        Some(s) => vec![s],
        None => cfg.shifts(),
    };
    let label = match model {
        ModelArg::Entangled => "entangled",
        ModelArg::Mixture => "mixture",
    };
    for (index, &shift) in shifts.iter().enumerate() {
        let map = superposition_scan(model_of(model), shift, &setup)
            .map_err(|e| CliError::config(format!("scan at shift {shift}: {e}")))?;

        let mut header = vec!["x_mm", "y_mm", "coincidence"];
        if cfg.scan.mean_pairs.is_some() {
            header.push("counts");
        }
        let mean_pairs = cfg.scan.mean_pairs;
        let seed = cfg.seed;
        let rows = map
            .offsets
            .iter()
            .zip(&map.values)
            .enumerate()
            .map(|(point, ((x, y), value))| {
                let mut row = vec![fmt_sig(*x), fmt_sig(*y), fmt_sig(*value)];
                if let Some(pairs) = mean_pairs {
                    let draw = poisson_counts(value.clamp(0.0, 1.0), pairs, seed
                        .wrapping_add((index as u64) << 32)
                        .wrapping_add(point as u64))
                    .expect("probability and mean are valid");
                    row.push(draw.to_string());
                }
                row
            })
            .collect::<Vec<_>>();

        let stem = format!("scan_{label}_s{index}");
        output::write_csv(&out_dir.join(format!("{stem}.csv")), &header, rows)?;
        output::write_map_pgm(
            &out_dir.join(format!("{stem}.pgm")),
            map.raster.points_per_side,
            &map.values,
        )?;
    }
    Ok(())
}

fn write_locus(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let setup = cfg.scan_setup()?;
    let shifts = cfg.shifts();
    let rows = singularity_locus(&shifts, &setup)
        .map_err(|e| CliError::config(format!("locus: {e}")))?;

    let mut flagged = Vec::new();
    let table = rows
        .iter()
        .map(|row| {
            let (radius, angle, kind) = match &row.point {
                LocusPoint::Central { .. } => (0.0, 0.0, "central"),
                LocusPoint::Pair { radius, angle, .. } => (*radius, *angle, "pair"),
                LocusPoint::NotFound => {
                    flagged.push(row.shift);
                    (0.0, 0.0, "none")
                }
            };
            vec![
                fmt_sig(row.shift),
                fmt_sig(row.amplitude_ratio),
                fmt_sig(radius),
                fmt_sig(angle),
                kind.to_string(),
            ]
        })
        .collect::<Vec<_>>();
    for shift in flagged {
        eprintln!("note: no singularity found at shift {shift} (pure-Gaussian limit)");
    }
    output::write_csv(
        &out_dir.join("locus.csv"),
        &["shift_mm", "amplitude_ratio", "radius_mm", "angle_rad", "kind"],
        table,
    )
}

fn print_budget(cfg: &RunConfig) -> Result<(), CliError> {
    let budget = cfg.loss_budget()?;
    println!("{}", fmt_sig(budget.collection_efficiency()));
    Ok(())
}
