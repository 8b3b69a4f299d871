//! Artifact export: CSV dumps of wave fields and binary grayscale
//! portable-graymap (P5) heatmaps of the intensity.
//!
//! Both outputs are byte-deterministic functions of their inputs: CSV
//! numbers use Rust's shortest round-trip decimal formatting with LF line
//! endings, and the heatmap pixel mapping is a pure function of the field
//! and the normalization choice.

use std::io::Write;
use std::path::Path;

use crate::config::Normalization;
use crate::error::ExportError;
use crate::grid::WaveField;

/// Writes `S,t,re,im,intensity` rows, time-major then space order (matching
/// the field's sample layout). Numbers are shortest round-trip decimals;
/// line endings are LF.
pub fn write_csv<W: Write>(field: &WaveField, dest: &mut W) -> Result<(), ExportError> {
    if field.samples().is_empty() {
        return Err(ExportError::EmptyField);
    }
    let g = field.grid();
    let mut buf = String::with_capacity(field.samples().len() * 32);
    buf.push_str("S,t,re,im,intensity\n");
    for i in 0..g.n_t() {
        let t = g.t_at(i);
        for j in 0..g.n_s() {
            let z = field.at(i, j);
            let s = g.s_at(j);
            buf.push_str(&format!("{s},{t},{},{},{}\n", z.re, z.im, z.norm_sqr()));
        }
    }
    dest.write_all(buf.as_bytes())?;
    Ok(())
}

/// [`write_csv`] into a file at `path`.
pub fn write_csv_file(field: &WaveField, path: impl AsRef<Path>) -> Result<(), ExportError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_csv(field, &mut file)?;
    file.flush()?;
    Ok(())
}

/// Renders the intensity `|psi|^2` as a binary grayscale portable graymap
/// (magic `P5`, 255 levels): width `n_s`, height `n_t`, row 0 at `t_min`.
/// Pixel value = `round(255 (I - lo)/(hi - lo))` clamped to `[0, 255]`,
/// with `(lo, hi)` taken from the field's own intensity extrema
/// (global-minmax) or from the fixed range.
///
/// A field whose intensity has no spread cannot be normalized by its own
/// extrema; that degenerate case is an error that suggests a fixed range.
pub fn render_heatmap(field: &WaveField, norm: Normalization) -> Result<Vec<u8>, ExportError> {
    let g = field.grid();
    if g.n_t() < 2 {
        return Err(ExportError::NotTwoDimensional { n_t: g.n_t() });
    }
    let (lo, hi) = match norm {
        Normalization::Fixed { lo, hi } => (lo, hi),
        Normalization::GlobalMinMax => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for z in field.samples() {
                let v = z.norm_sqr();
                lo = lo.min(v);
                hi = hi.max(v);
            }
            (lo, hi)
        }
    };
    if !(hi > lo) {
        return Err(ExportError::DegenerateRange { lo, hi });
    }
    let span = hi - lo;
    let header = format!("P5\n{} {}\n255\n", g.n_s(), g.n_t());
    let mut bytes = Vec::with_capacity(header.len() + field.samples().len());
    bytes.extend_from_slice(header.as_bytes());
    for z in field.samples() {
        let v = ((z.norm_sqr() - lo) / span).clamp(0.0, 1.0);
        bytes.push((255.0 * v).round() as u8);
    }
    Ok(bytes)
}

/// [`render_heatmap`] into a file at `path`.
pub fn render_heatmap_file(
    field: &WaveField,
    norm: Normalization,
    path: impl AsRef<Path>,
) -> Result<(), ExportError> {
    let bytes = render_heatmap(field, norm)?;
    std::fs::write(path, bytes)?;
    Ok(())
}
