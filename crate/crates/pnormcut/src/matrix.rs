//! Dense matrices with exact rational entries.
//!
//! Reduction matrices mix huge scale factors (α grows like n^8) with ±1
//! incidence entries, and the decode step needs the products back exactly.
//! Entries are therefore `rug::Rational`; a lossy `to_f64` view exists for
//! the floating search paths.

use std::fmt::Write as _;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Row-major dense matrix over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![Rational::new(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience for integer-valued test matrices.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| Rational::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        out
    }

    /// Returns s·A with the scale applied exactly.
    pub fn scale(&self, s: &Rational) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| Rational::from(v * s)).collect(),
        }
    }

    /// Stacks `self` on top of `other`; column counts must agree.
    pub fn vstack(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack: {} vs {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(DenseMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Embeds into a square d×d matrix, d = max(rows, cols), zero-filled.
    pub fn pad_square(&self) -> DenseMatrix {
        let d = self.rows.max(self.cols);
        let mut out = DenseMatrix::zeros(d, d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * d + j] = self.data[i * self.cols + j].clone();
            }
        }
        out
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Rational::to_f64).collect())
            .collect()
    }

    /// Exact A·x for a ±1 sign vector.
    pub fn mul_sign(&self, x: &[i8]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "mul_sign: {} columns vs vector of length {}",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::new();
                for (a, &s) in self.row(i).iter().zip(x) {
                    if s >= 0 {
                        acc += a;
                    } else {
                        acc -= a;
                    }
                }
                acc
            })
            .collect())
    }

    /// Exact A·x for a rational vector.
    pub fn mul_rational(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "mul_rational: {} columns vs vector of length {}",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::new();
                for (a, xj) in self.row(i).iter().zip(x) {
                    acc += Rational::from(a * xj);
                }
                acc
            })
            .collect())
    }

    /// A·x in `bits`-precision floats (entries rounded once each).
    pub fn mul_hp(&self, x: &[Float], bits: u32) -> Result<Vec<Float>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "mul_hp: {} columns vs vector of length {}",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Float::with_val(bits, 0);
                for (a, xj) in self.row(i).iter().zip(x) {
                    acc += Float::with_val(bits, a) * xj;
                }
                acc
            })
            .collect())
    }

    /// Serializes as "rows cols" then one line per row. With
    /// `rational: false` entries print as exact decimals when the reduced
    /// denominator is of the form 2^a·5^b, falling back to num/den
    /// otherwise; with `rational: true` every entry prints as num/den.
    pub fn serialize(&self, rational: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self
                .row(i)
                .iter()
                .map(|v| {
                    if rational {
                        format_num_den(v)
                    } else {
                        format_decimal(v).unwrap_or_else(|| format_num_den(v))
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Parses the `serialize` format. Tokens may be integers, decimals,
    /// or num/den fractions, mixed freely.
    pub fn parse(text: &str) -> Result<DenseMatrix> {
        let mut lines = text.lines().enumerate().filter_map(|(idx, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then_some((idx + 1, line))
        });
        let (hline, header) = lines.next().ok_or(Error::MatrixParse {
            line: 0,
            msg: "empty input, expected a 'rows cols' header".into(),
        })?;
        let mut it = header.split_whitespace();
        let rows: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::MatrixParse {
                line: hline,
                msg: "bad row count in header".into(),
            })?;
        let cols: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::MatrixParse {
                line: hline,
                msg: "bad column count in header".into(),
            })?;
        if it.next().is_some() {
            return Err(Error::MatrixParse {
                line: hline,
                msg: "header has trailing tokens".into(),
            });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (lno, line) = lines.next().ok_or(Error::MatrixParse {
                line: 0,
                msg: format!("expected {rows} data rows, input ended early"),
            })?;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != cols {
                return Err(Error::MatrixParse {
                    line: lno,
                    msg: format!("expected {cols} entries, found {}", tokens.len()),
                });
            }
            for t in tokens {
                data.push(parse_entry(t).map_err(|msg| Error::MatrixParse { line: lno, msg })?);
            }
        }
        if let Some((lno, _)) = lines.next() {
            return Err(Error::MatrixParse {
                line: lno,
                msg: "trailing data after final row".into(),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }
}

fn format_num_den(v: &Rational) -> String {
    if *v.denom() == 1 {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Exact decimal rendering when the denominator divides a power of 10.
fn format_decimal(v: &Rational) -> Option<String> {
    let den = v.denom();
    if *den == 1 {
        return Some(v.numer().to_string());
    }
    let mut d = den.clone();
    let mut twos = 0u32;
    while d.is_even() {
        d /= 2;
        twos += 1;
    }
    let mut fives = 0u32;
    while d.is_divisible_u(5) {
        d /= 5;
        fives += 1;
    }
    if d != 1 {
        return None;
    }
    let digits = twos.max(fives);
    // scale numerator so denominator becomes 10^digits
    let scaled = Integer::from(v.numer() * Integer::from(10).pow(digits)) / den.clone();
    let neg = scaled < 0;
    let mag = scaled.abs().to_string();
    let mag = if mag.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - mag.len()), mag)
    } else {
        mag
    };
    let split = mag.len() - digits as usize;
    Some(format!(
        "{}{}.{}",
        if neg { "-" } else { "" },
        &mag[..split],
        &mag[split..]
    ))
}

fn parse_entry(t: &str) -> std::result::Result<Rational, String> {
    if let Some((n, d)) = t.split_once('/') {
        let num: Integer = n.parse().map_err(|_| format!("bad numerator in {t:?}"))?;
        let den: Integer = d.parse().map_err(|_| format!("bad denominator in {t:?}"))?;
        if den == 0 {
            return Err(format!("zero denominator in {t:?}"));
        }
        return Ok(Rational::from((num, den)));
    }
    if let Some((i, f)) = t.split_once('.') {
        if f.is_empty() || !f.bytes().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal {t:?}"));
        }
        let (sign, imag) = match i.as_bytes().first() {
            Some(b'-') => (-1, &i[1..]),
            Some(b'+') => (1, &i[1..]),
            _ => (1, i),
        };
        if !imag.is_empty() && !imag.bytes().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal {t:?}"));
        }
        let int: Integer = if imag.is_empty() {
            Integer::new()
        } else {
            imag.parse().map_err(|_| format!("bad decimal {t:?}"))?
        };
        let scale = Integer::from(10).pow(f.len() as u32);
        let frac: Integer = f.parse().map_err(|_| format!("bad decimal {t:?}"))?;
        let num = int * scale.clone() + frac;
        return Ok(Rational::from((num * sign, scale)));
    }
    t.parse::<Integer>()
        .map(Rational::from)
        .map_err(|_| format!("unrecognized entry {t:?}"))
}
