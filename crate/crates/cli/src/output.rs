//! CSV and binary PGM writers.
//!
//! CSV numbers are plain decimal with nine significant digits, a `.`
//! separator and LF line endings. Images are binary portable graymaps
//! (P5, 8 bit): intensity normalized to its maximum, phase mapped linearly
//! onto 0..255. Output bytes are identical across reruns of the same
//! configuration and seed.

use std::fs;
use std::io::Write;
use std::path::Path;

use oamsim_core::fieldgrid::ComplexField;

use crate::CliError;

/// Nine significant digits, plain decimal where the magnitude allows it.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-4..1e15).contains(&a) {
        let magnitude = a.log10().floor() as i32;
        let decimals = (8 - magnitude).clamp(0, 17) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), CliError> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| CliError::io(format!("write {}: {e}", path.display())))
}

fn write_pgm(path: &Path, n: usize, pixels: &[u8]) -> Result<(), CliError> {
    let mut bytes = format!("P5\n{n} {n}\n255\n").into_bytes();
    bytes.extend_from_slice(pixels);
    let mut file = fs::File::create(path)
        .map_err(|e| CliError::io(format!("create {}: {e}", path.display())))?;
    file.write_all(&bytes)
        .map_err(|e| CliError::io(format!("write {}: {e}", path.display())))
}

/// Row-major top-down pixel scan of a field, largest y first.
fn rasterize(field: &ComplexField, mut value: impl FnMut(usize, usize) -> u8) -> Vec<u8> {
    let n = field.grid().n();
    let mut pixels = Vec::with_capacity(n * n);
    for iy in (0..n).rev() {
        for ix in 0..n {
            pixels.push(value(ix, iy));
        }
    }
    pixels
}

/// Intensity map normalized to the field maximum.
pub fn write_intensity_pgm(path: &Path, field: &ComplexField) -> Result<(), CliError> {
    let peak = field.max_abs().powi(2);
    let pixels = rasterize(field, |ix, iy| {
        if peak == 0.0 {
            0
        } else {
            (field.get(ix, iy).norm_sqr() / peak * 255.0).round() as u8
        }
    });
    write_pgm(path, field.grid().n(), &pixels)
}

/// Phase map, [-pi, pi] mapped linearly onto 0..255.
pub fn write_phase_pgm(path: &Path, field: &ComplexField) -> Result<(), CliError> {
    let pixels = rasterize(field, |ix, iy| {
        let phase = field.get(ix, iy).arg();
        ((phase + std::f64::consts::PI) / std::f64::consts::TAU * 255.0).round() as u8
    });
    write_pgm(path, field.grid().n(), &pixels)
}

/// Mask phase map, 0..2 pi mapped linearly onto 0..255.
pub fn write_mask_pgm(path: &Path, n: usize, phases: &[f64]) -> Result<(), CliError> {
    let mut pixels = Vec::with_capacity(n * n);
    for iy in (0..n).rev() {
        for ix in 0..n {
            let phase = phases[iy * n + ix];
            pixels.push((phase / std::f64::consts::TAU * 255.0).round() as u8);
        }
    }
    write_pgm(path, n, &pixels)
}

/// Scan map rendered as a normalized grayscale image in raster order.
pub fn write_map_pgm(path: &Path, per_side: usize, values: &[f64]) -> Result<(), CliError> {
    let peak = values.iter().copied().fold(0.0, f64::max);
    let mut pixels = Vec::with_capacity(per_side * per_side);
    for iy in (0..per_side).rev() {
        for ix in 0..per_side {
            let v = values[iy * per_side + ix];
            pixels.push(if peak == 0.0 {
                0
            } else {
                (v / peak * 255.0).round() as u8
            });
        }
    }
    write_pgm(path, per_side, &pixels)
}
