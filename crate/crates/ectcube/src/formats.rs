//! Image file formats: PGM (P2/P5), CSV grids and ETF text tensors.
//!
//! An ETF file holds an n-dimensional integer tensor as whitespace-separated
//! tokens: the header `etf 1`, the number of axes, the extents, then the
//! values with the last axis varying fastest.

use std::fs;
use std::io::Write;
use std::path::Path;

use ectcube_core::ImageTensor;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ImageFormat {
    Pgm,
    Csv,
    Etf,
}

impl ImageFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("pgm" | "pnm") => Ok(Self::Pgm),
            Some("csv") => Ok(Self::Csv),
            Some("etf") => Ok(Self::Etf),
            _ => Err(Error::format(format!(
                "{}: cannot infer the image format from the extension",
                path.display()
            ))),
        }
    }
}

pub fn read_image(path: &Path, format: Option<ImageFormat>) -> Result<ImageTensor> {
    let format = match format {
        Some(f) => f,
        None => ImageFormat::from_path(path)?,
    };
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let parsed = match format {
        ImageFormat::Pgm => parse_pgm(&bytes),
        ImageFormat::Csv => parse_csv_grid(&bytes),
        ImageFormat::Etf => parse_etf(&text(&bytes)?),
    };
    parsed.map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_image(path: &Path, format: Option<ImageFormat>, img: &ImageTensor) -> Result<()> {
    let format = match format {
        Some(f) => f,
        None => ImageFormat::from_path(path)?,
    };
    let bytes = match format {
        ImageFormat::Pgm => encode_pgm(img, PgmEncoding::Ascii)?,
        ImageFormat::Csv => encode_csv_grid(img)?,
        ImageFormat::Etf => encode_etf(img).into_bytes(),
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn text(bytes: &[u8]) -> Result<String> {
    String::from_utf8(bytes.to_vec()).map_err(|_| Error::format("file is not UTF-8 text"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmEncoding {
    /// P2
    Ascii,
    /// P5, one byte per sample up to maxval 255, two big-endian bytes above.
    Binary,
}

/// Header tokens with `#` comments skipped. Returns the tokens and the offset
/// just past the last one.
fn pgm_header(bytes: &[u8], count: usize) -> Result<(Vec<String>, usize)> {
    let mut tokens = Vec::with_capacity(count);
    let mut i = 0;
    while tokens.len() < count {
        match bytes.get(i) {
            None => return Err(Error::format("truncated PGM header")),
            Some(b'#') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            Some(c) if c.is_ascii_whitespace() => i += 1,
            Some(_) => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'#' {
                    i += 1;
                }
                tokens.push(String::from_utf8_lossy(&bytes[start..i]).into_owned());
            }
        }
    }
    Ok((tokens, i))
}

pub fn parse_pgm(bytes: &[u8]) -> Result<ImageTensor> {
    let (header, end) = pgm_header(bytes, 4)?;
    let magic = header[0].as_str();
    if magic != "P2" && magic != "P5" {
        return Err(Error::format(format!("unsupported PGM magic {magic:?}")));
    }
    let field = |i: usize, name: &str| -> Result<usize> {
        header[i]
            .parse::<usize>()
            .map_err(|_| Error::format(format!("invalid PGM {name} {:?}", header[i])))
    };
    let (width, height, maxval) = (field(1, "width")?, field(2, "height")?, field(3, "maxval")?);
    if width == 0 || height == 0 {
        return Err(Error::format("PGM image has zero extent"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::format(format!(
            "PGM maxval {maxval} outside 1..=65535"
        )));
    }
    let len = width * height;
    let values: Vec<i32> = if magic == "P2" {
        let body = std::str::from_utf8(&bytes[end..])
            .map_err(|_| Error::format("P2 body is not ASCII"))?;
        let samples = body
            .lines()
            .map(|line| line.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .map(|tok| {
                tok.parse::<i32>()
                    .map_err(|_| Error::format(format!("invalid sample {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if samples.len() != len {
            return Err(Error::format(format!(
                "expected {len} samples, found {}",
                samples.len()
            )));
        }
        samples
    } else {
        // A single whitespace byte separates the header from the raster.
        let body = bytes.get(end + 1..).unwrap_or(&[]);
        let width_bytes = if maxval > 255 { 2 } else { 1 };
        if body.len() < len * width_bytes {
            return Err(Error::format("truncated P5 raster"));
        }
        body.chunks_exact(width_bytes)
            .take(len)
            .map(|c| {
                if width_bytes == 2 {
                    i32::from(u16::from_be_bytes([c[0], c[1]]))
                } else {
                    i32::from(c[0])
                }
            })
            .collect()
    };
    if let Some(v) = values.iter().find(|&&v| v < 0 || v as usize > maxval) {
        return Err(Error::format(format!("sample {v} outside 0..={maxval}")));
    }
    Ok(ImageTensor::new(vec![height, width], values)?)
}

pub fn encode_pgm(img: &ImageTensor, encoding: PgmEncoding) -> Result<Vec<u8>> {
    let &[height, width] = img.shape() else {
        return Err(Error::format("PGM images are two-dimensional"));
    };
    let values = img.values();
    if let Some(v) = values.iter().find(|&&v| !(0..=65535).contains(&v)) {
        return Err(Error::format(format!(
            "value {v} cannot be stored in a PGM"
        )));
    }
    let maxval = values.iter().copied().max().unwrap_or(0).max(1);
    let mut out = Vec::new();
    match encoding {
        PgmEncoding::Ascii => {
            writeln!(out, "P2\n{width} {height}\n{maxval}").unwrap();
            for row in values.chunks(width) {
                let line: Vec<String> = row.iter().map(i32::to_string).collect();
                writeln!(out, "{}", line.join(" ")).unwrap();
            }
        }
        PgmEncoding::Binary => {
            write!(out, "P5\n{width} {height}\n{maxval}\n").unwrap();
            for &v in values {
                if maxval > 255 {
                    out.extend_from_slice(&(v as u16).to_be_bytes());
                } else {
                    out.push(v as u8);
                }
            }
        }
    }
    Ok(out)
}

/// Rows of comma-separated integers; all rows must have the same length.
pub fn parse_csv_grid(bytes: &[u8]) -> Result<ImageTensor> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut values = Vec::new();
    let mut rows = 0;
    let mut width = None;
    for record in reader.records() {
        let record = record.map_err(|e| Error::format(format!("CSV: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if *width.get_or_insert(record.len()) != record.len() {
            return Err(Error::format(format!(
                "CSV row {rows} has {} columns",
                record.len()
            )));
        }
        for field in record.iter() {
            values.push(field.parse::<i32>().map_err(|_| {
                Error::format(format!("invalid integer {field:?} in CSV row {rows}"))
            })?);
        }
        rows += 1;
    }
    let width = width.ok_or_else(|| Error::format("empty CSV grid"))?;
    Ok(ImageTensor::new(vec![rows, width], values)?)
}

pub fn encode_csv_grid(img: &ImageTensor) -> Result<Vec<u8>> {
    let &[_, width] = img.shape() else {
        return Err(Error::format("CSV grids are two-dimensional"));
    };
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in img.values().chunks(width) {
        writer
            .write_record(row.iter().map(i32::to_string))
            .map_err(|e| Error::format(e.to_string()))?;
    }
    writer
        .into_inner()
        .map_err(|e| Error::format(e.to_string()))
}

pub fn parse_etf(text: &str) -> Result<ImageTensor> {
    let mut tokens = text.split_whitespace();
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| Error::format(format!("ETF: missing {what}")))
    };
    if next("header")? != "etf" || next("version")? != "1" {
        return Err(Error::format("ETF: expected header `etf 1`"));
    }
    let ndim: usize = next("axis count")?
        .parse()
        .map_err(|_| Error::format("ETF: invalid axis count"))?;
    let shape = (0..ndim)
        .map(|_| {
            next("extent")?
                .parse::<usize>()
                .map_err(|_| Error::format("ETF: invalid extent"))
        })
        .collect::<Result<Vec<_>>>()?;
    let values = tokens
        .map(|tok| {
            tok.parse::<i32>()
                .map_err(|_| Error::format(format!("ETF: invalid value {tok:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ImageTensor::new(shape, values)?)
}

pub fn encode_etf(img: &ImageTensor) -> String {
    let shape: Vec<String> = img.shape().iter().map(usize::to_string).collect();
    let mut out = format!("etf 1\n{}\n{}\n", img.ndim(), shape.join(" "));
    let width = *img.shape().last().unwrap();
    for row in img.values().chunks(width) {
        let line: Vec<String> = row.iter().map(i32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(shape: Vec<usize>, values: Vec<i32>) -> ImageTensor {
        ImageTensor::new(shape, values).unwrap()
    }

    #[test]
    fn pgm_ascii_with_comments() {
        let src = b"P2\n# made by hand\n3 2 # width height\n5\n0 1 2\n3 4 # tail\n5\n";
        assert_eq!(
            parse_pgm(src).unwrap(),
            img(vec![2, 3], vec![0, 1, 2, 3, 4, 5])
        );
    }

    #[test]
    fn pgm_binary_depths() {
        let small = img(vec![2, 2], vec![0, 7, 255, 3]);
        let bytes = encode_pgm(&small, PgmEncoding::Binary).unwrap();
        assert_eq!(parse_pgm(&bytes).unwrap(), small);
        let wide = img(vec![1, 3], vec![0, 256, 65535]);
        let bytes = encode_pgm(&wide, PgmEncoding::Binary).unwrap();
        assert!(bytes.ends_with(&[0, 0, 1, 0, 255, 255]));
        assert_eq!(parse_pgm(&bytes).unwrap(), wide);
        assert_eq!(
            parse_pgm(&encode_pgm(&wide, PgmEncoding::Ascii).unwrap()).unwrap(),
            wide
        );
    }

    #[test]
    fn pgm_rejects_bad_input() {
        assert!(parse_pgm(b"P3\n1 1\n1\n0").is_err());
        assert!(parse_pgm(b"P2\n2 1\n1\n0").is_err());
        assert!(parse_pgm(b"P2\n1 1\n1\n2").is_err());
        assert!(parse_pgm(b"P2\n1 1\n70000\n2").is_err());
        assert!(parse_pgm(b"P5\n2 2\n255\n\x01").is_err());
        assert!(encode_pgm(&img(vec![3], vec![1, 2, 3]), PgmEncoding::Ascii).is_err());
        assert!(encode_pgm(&img(vec![1, 1], vec![-1]), PgmEncoding::Ascii).is_err());
    }

    #[test]
    fn csv_grids() {
        let parsed = parse_csv_grid(b"1, 0,0\n0,1,-2\n").unwrap();
        assert_eq!(parsed, img(vec![2, 3], vec![1, 0, 0, 0, 1, -2]));
        assert_eq!(
            parse_csv_grid(&encode_csv_grid(&parsed).unwrap()).unwrap(),
            parsed
        );
        assert!(parse_csv_grid(b"1,2\n3\n").is_err());
        assert!(parse_csv_grid(b"1,x\n").is_err());
        assert!(parse_csv_grid(b"").is_err());
    }

    #[test]
    fn etf_tensors() {
        let parsed = parse_etf("etf 1\n3\n2 1 2\n1 2\n3 -4\n").unwrap();
        assert_eq!(parsed, img(vec![2, 1, 2], vec![1, 2, 3, -4]));
        assert_eq!(parse_etf(&encode_etf(&parsed)).unwrap(), parsed);
        assert!(parse_etf("etf 2\n1\n1\n0").is_err());
        assert!(parse_etf("etf 1\n2\n2 2\n1 2 3").is_err());
    }

    #[test]
    fn formats_from_extensions() {
        assert_eq!(
            ImageFormat::from_path(Path::new("a/b.PGM")).unwrap(),
            ImageFormat::Pgm
        );
        assert_eq!(
            ImageFormat::from_path(Path::new("x.etf")).unwrap(),
            ImageFormat::Etf
        );
        assert!(ImageFormat::from_path(Path::new("x.png")).is_err());
    }
}
