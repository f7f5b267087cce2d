//! Stable file formats: CSV tables and binary PGM/PPM class images.
//!
//! Reals are written in scientific notation with 17 significant digits, so
//! every value reads back bit-exactly. Images write grid rows in storage
//! order: the first image row is the lowest `y`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::basin::BasinGrid;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Real(v) => format_real(*v),
            Value::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(i64::from(v))
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

/// 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, w: W) -> std::result::Result<(), csv::Error> {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Value::render))?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn write_csv(table: &Table, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    table
        .write_to(BufWriter::new(file))
        .map_err(|source| Error::Csv {
            path: path.to_owned(),
            source,
        })
}

/// Header and raw fields of a CSV file.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let wrap = |source| Error::Csv {
        path: path.to_owned(),
        source,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(wrap)?;
    let header = rdr
        .headers()
        .map_err(wrap)?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        rows.push(rec.map_err(wrap)?.iter().map(String::from).collect());
    }
    Ok((header, rows))
}

/// Per-cell fingerprints and classes of a basin grid.
pub fn basin_table(g: &BasinGrid) -> Table {
    let xs = g.spec.x_centers();
    let ys = g.spec.y_centers();
    let mut t = Table::new(["row", "col", "x", "y", "fingerprint", "class"]);
    for (row, &y) in ys.iter().enumerate() {
        for (col, &x) in xs.iter().enumerate() {
            t.push(vec![
                row.into(),
                col.into(),
                x.into(),
                y.into(),
                g.fingerprint_at(col, row).into(),
                g.class_at(col, row).into(),
            ]);
        }
    }
    t
}

/// Twelve fully saturated hues at 30° steps, starting from red.
pub const COLOR_WHEEL: [[u8; 3]; 12] = [
    [255, 0, 0],
    [255, 128, 0],
    [255, 255, 0],
    [128, 255, 0],
    [0, 255, 0],
    [0, 255, 128],
    [0, 255, 255],
    [0, 128, 255],
    [0, 0, 255],
    [128, 0, 255],
    [255, 0, 255],
    [255, 0, 128],
];

const BLUE: usize = 8;

/// Color of class `k` out of `count`: the lowest class is blue, the highest
/// red, and the rest are spread over the wheel segment between them
/// (blue, azure, cyan, spring green, green, chartreuse, yellow, orange, red).
pub fn class_color(k: u32, count: usize) -> [u8; 3] {
    if count <= 1 {
        return COLOR_WHEEL[BLUE];
    }
    let steps = (BLUE * k as usize * 2 + (count - 1)) / (2 * (count - 1));
    COLOR_WHEEL[BLUE - steps.min(BLUE)]
}

/// Gray level of class `k` out of `count`, spread over 0..=255.
pub fn class_gray(k: u32, count: usize) -> u8 {
    if count <= 1 {
        return 0;
    }
    let span = (count - 1) as u64;
    ((u64::from(k) * 255 * 2 + span) / (2 * span)) as u8
}

fn pnm_header(magic: &str, width: usize, height: usize) -> Vec<u8> {
    format!("{magic}\n{width} {height}\n255\n").into_bytes()
}

/// Binary graymap (`P5`) of a row-major class map.
pub fn pgm_bytes(classes: &[u32], width: usize, height: usize, count: usize) -> Vec<u8> {
    let mut out = pnm_header("P5", width, height);
    out.extend(classes.iter().map(|&c| class_gray(c, count)));
    out
}

/// Binary pixmap (`P6`) of a row-major class map.
pub fn ppm_bytes(classes: &[u32], width: usize, height: usize, count: usize) -> Vec<u8> {
    let mut out = pnm_header("P6", width, height);
    for &c in classes {
        out.extend_from_slice(&class_color(c, count));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Ppm,
}

pub fn image_bytes(g: &BasinGrid, format: ImageFormat) -> Vec<u8> {
    let r = g.resolution();
    match format {
        ImageFormat::Pgm => pgm_bytes(&g.classes, r, r, g.class_count()),
        ImageFormat::Ppm => ppm_bytes(&g.classes, r, r, g.class_count()),
    }
}

pub fn write_image(g: &BasinGrid, path: &Path, format: ImageFormat) -> Result<()> {
    std::fs::write(path, image_bytes(g, format)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_two_classes() {
        let bytes = pgm_bytes(&[0, 1, 1, 0], 2, 2, 2);
        let mut expected = b"P5\n2 2\n255\n".to_vec();
        expected.extend([0, 255, 255, 0]);
        assert_eq!(bytes, expected);
    }

    #[test]
    fn ppm_ends_are_blue_and_red() {
        for count in 2..30usize {
            assert_eq!(class_color(0, count), [0, 0, 255]);
            assert_eq!(class_color(count as u32 - 1, count), [255, 0, 0]);
        }
        assert_eq!(class_color(0, 1), [0, 0, 255]);
        let bytes = ppm_bytes(&[0, 1], 2, 1, 2);
        assert_eq!(&bytes[..11], b"P6\n2 1\n255\n");
        assert_eq!(&bytes[11..], &[0, 0, 255, 255, 0, 0]);
    }

    #[test]
    fn gray_levels_spread_evenly() {
        assert_eq!(class_gray(0, 1), 0);
        assert_eq!(class_gray(1, 3), 128);
        assert_eq!(class_gray(2, 3), 255);
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(["a", "b"]);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(buf, b"a,b\n");
    }

    #[test]
    fn reals_use_seventeen_digits() {
        assert_eq!(format_real(0.84), "8.3999999999999997e-1");
        assert_eq!(format_real(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
