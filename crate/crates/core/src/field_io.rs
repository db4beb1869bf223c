//! Text files holding one record per mesh vertex.
//!
//! ```text
//! nv
//! value            (scalar fields), or
//! hxx hxy hyy      (Hessian fields)
//! ```

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::fem::NodalField;
use crate::hessian::HessianField;
use crate::{Error, Result, Scalar, Sym2};

fn parse_records<T: Scalar>(text: &str, width: usize) -> Result<Vec<Vec<T>>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty file, expected `nv`".into() })?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse { line: hl, message: format!("invalid record count `{header}`") })?;
    let mut out = Vec::with_capacity(n);
    for (ln, l) in lines {
        let vals = l
            .split_whitespace()
            .map(|t| t.parse::<f64>().map(T::lit))
            .collect::<std::result::Result<Vec<T>, _>>()
            .map_err(|_| Error::Parse { line: ln, message: "invalid number".into() })?;
        if vals.len() != width {
            return Err(Error::Parse { line: ln, message: format!("expected {width} values, found {}", vals.len()) });
        }
        out.push(vals);
    }
    if out.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: out.len() });
    }
    Ok(out)
}

pub fn parse_scalar_field<T: Scalar>(text: &str) -> Result<NodalField<T>> {
    Ok(NodalField { values: parse_records(text, 1)?.into_iter().map(|r| r[0]).collect() })
}

pub fn parse_hessian_field<T: Scalar>(text: &str) -> Result<HessianField<T>> {
    Ok(HessianField { values: parse_records(text, 3)?.into_iter().map(|r| Sym2::new(r[0], r[1], r[2])).collect() })
}

pub fn write_scalar_field<T: Scalar, W: Write>(field: &NodalField<T>, mut out: W) -> Result<()> {
    writeln!(out, "{}", field.len())?;
    for v in &field.values {
        writeln!(out, "{:.16e}", v.to_f64_lossy())?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_hessian_field<T: Scalar, W: Write>(field: &HessianField<T>, mut out: W) -> Result<()> {
    writeln!(out, "{}", field.len())?;
    for h in &field.values {
        writeln!(out, "{:.16e} {:.16e} {:.16e}", h.xx.to_f64_lossy(), h.xy.to_f64_lossy(), h.yy.to_f64_lossy())?;
    }
    out.flush()?;
    Ok(())
}

pub fn load_scalar_field<T: Scalar>(path: impl AsRef<Path>) -> Result<NodalField<T>> {
    parse_scalar_field(&fs::read_to_string(path)?)
}

pub fn save_scalar_field<T: Scalar>(field: &NodalField<T>, path: impl AsRef<Path>) -> Result<()> {
    write_scalar_field(field, BufWriter::new(fs::File::create(path)?))
}

pub fn save_hessian_field<T: Scalar>(field: &HessianField<T>, path: impl AsRef<Path>) -> Result<()> {
    write_hessian_field(field, BufWriter::new(fs::File::create(path)?))
}
