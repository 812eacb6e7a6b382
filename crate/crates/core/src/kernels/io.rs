//! Kernel sample files: CSV with header `t,re_1_1,im_1_1,...`, entries in
//! row-major order, uniform time column.

use super::samples::Samples;
use crate::error::{Error, Result};
use crate::grid::{Placement, TimeGrid};
use crate::matrix::fmt_e12;
use crate::scalar::Real;
use num_complex::Complex;
use std::io::{Read, Write};

/// Column names for the entries of a `rows x cols` matrix, row-major.
pub fn entry_headers(rows: usize, cols: usize) -> Vec<String> {
    let mut h = Vec::with_capacity(2 * rows * cols);
    for i in 1..=rows {
        for j in 1..=cols {
            h.push(format!("re_{i}_{j}"));
            h.push(format!("im_{i}_{j}"));
        }
    }
    h
}

fn parse_entry_header(name: &str) -> Option<(bool, usize, usize)> {
    let mut parts = name.trim().split('_');
    let re = match parts.next()? {
        "re" => true,
        "im" => false,
        _ => return None,
    };
    let i = parts.next()?.parse().ok()?;
    let j = parts.next()?.parse().ok()?;
    if parts.next().is_some() || i == 0 || j == 0 {
        return None;
    }
    Some((re, i, j))
}

pub fn write_samples<T: Real, W: Write>(s: &Samples<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(entry_headers(s.rows(), s.cols()));
    w.write_record(&header)?;
    let mut row = Vec::with_capacity(header.len());
    for j in 0..s.len() {
        row.clear();
        row.push(fmt_e12(s.time(j).as_f64()));
        let blk = s.block(j);
        for r in 0..s.rows() {
            for c in 0..s.cols() {
                let z = blk[r + c * s.rows()];
                row.push(fmt_e12(z.re.as_f64()));
                row.push(fmt_e12(z.im.as_f64()));
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a sample file. A first time of zero means node placement, half a
/// step means cell-centred placement.
pub fn read_samples<T: Real, R: Read>(input: R) -> Result<Samples<T>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = rdr.headers()?.clone();
    if header.get(0).map(str::trim) != Some("t") {
        return Err(Error::Format("first column must be `t`".into()));
    }
    let mut layout = Vec::new();
    let (mut rows, mut cols) = (0, 0);
    for name in header.iter().skip(1) {
        let (re, i, j) =
            parse_entry_header(name).ok_or_else(|| Error::Format(format!("bad column name `{name}`")))?;
        rows = rows.max(i);
        cols = cols.max(j);
        layout.push((re, i - 1, j - 1));
    }
    if layout.len() != 2 * rows * cols {
        return Err(Error::Format(format!("expected {} value columns for a {rows}x{cols} kernel", 2 * rows * cols)));
    }
    let mut seen = vec![false; layout.len()];
    for &(re, i, j) in &layout {
        let k = 2 * (i * cols + j) + usize::from(!re);
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::Format(format!("duplicate column for entry ({}, {})", i + 1, j + 1)));
        }
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != layout.len() + 1 {
            return Err(Error::Format(format!("row has {} fields, expected {}", rec.len(), layout.len() + 1)));
        }
        let num = |s: &str| -> Result<f64> {
            let v: f64 = s.trim().parse().map_err(|_| Error::Format(format!("not a number: `{s}`")))?;
            if !v.is_finite() {
                return Err(Error::Format(format!("non-finite value `{s}`")));
            }
            Ok(v)
        };
        times.push(num(&rec[0])?);
        let mut blk = vec![Complex::new(T::zero(), T::zero()); rows * cols];
        for (k, &(re, i, j)) in layout.iter().enumerate() {
            let v = T::lit(num(&rec[k + 1])?);
            let z = &mut blk[i + j * rows];
            if re {
                z.re = v;
            } else {
                z.im = v;
            }
        }
        values.extend(blk);
    }
    if times.len() < 2 {
        return Err(Error::InvalidGrid("sample file needs at least two rows".into()));
    }
    let step = times[1] - times[0];
    if !(step > 0.0) {
        return Err(Error::InvalidGrid("time column must be strictly increasing".into()));
    }
    for (k, w) in times.windows(2).enumerate() {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * step.max(1.0) {
            return Err(Error::InvalidGrid(format!("non-uniform time step at row {}", k + 2)));
        }
    }
    let placement = if times[0].abs() <= 1e-9 * step {
        Placement::Nodes
    } else if (times[0] - 0.5 * step).abs() <= 1e-9 * step {
        Placement::Cells
    } else {
        return Err(Error::InvalidGrid("time column must start at 0 or at half a step".into()));
    };
    let grid = TimeGrid::new(T::lit(step), times.len())?;
    Samples::new(grid, placement, rows, cols, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn round_trip() {
        let grid = TimeGrid::new(0.5, 4).unwrap();
        let s = Samples::<f64>::from_fn(grid, Placement::Cells, 2, 3, |t| {
            crate::scalar::CMat::from_fn(2, 3, |i, j| cplx(t + i as f64, -(j as f64) * t))
        });
        let mut buf = Vec::new();
        write_samples(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,re_1_1,im_1_1,re_1_2"));
        let back: Samples<f64> = read_samples(buf.as_slice()).unwrap();
        assert_eq!(back.placement(), Placement::Cells);
        assert_eq!((back.rows(), back.cols()), (2, 3));
        for (a, b) in back.values().iter().zip(s.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_files() {
        assert!(read_samples::<f64, _>("t,re_1_1\n0,1\n0.1,2\n".as_bytes()).is_err());
        assert!(read_samples::<f64, _>("t,re_1_1,im_1_1\n0,1,0\n0.1,2,0\n0.3,1,0\n".as_bytes()).is_err());
        assert!(read_samples::<f64, _>("t,re_1_1,im_1_1\n0,1,0\n".as_bytes()).is_err());
        assert!(read_samples::<f64, _>("x,re_1_1,im_1_1\n0,1,0\n1,1,0\n".as_bytes()).is_err());
        let ok = read_samples::<f64, _>("t, re_1_1, im_1_1\n0, 1, 0\n0.1, 2, 0\n".as_bytes()).unwrap();
        assert_eq!(ok.placement(), Placement::Nodes);
    }
}
