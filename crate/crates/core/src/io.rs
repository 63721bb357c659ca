//! Plain-text file formats.
//!
//! * matrix: a line `p rows cols`, then `rows` lines of `cols` residues;
//! * module: a line `p n dim`, then the σ-matrix as a matrix block;
//! * norm data: `p n m` on the first line, `d_0 … d_n` on the second;
//! * model: a module, then `n + 1` matrix blocks whose rows span `W_0, …, W_n`.
//!
//! Blank lines and lines starting with `#` are ignored between records.

use std::fmt::Write as _;

use thiserror::Error;

use crate::analyzer::{AnalyzerError, NormData, NormFiltrationModel};
use crate::linalg::{FpMatrix, LinalgError, Prime, Subspace};
use crate::module::{GModule, GroupSpec, ModuleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input: expected {0}")]
    UnexpectedEof(String),
    #[error("line {line}: unexpected trailing data")]
    TrailingData { line: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Analyzer(#[from] AnalyzerError),
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines { inner: it.peekable() }
    }

    fn next_ints(&mut self, what: &str, expected: Option<usize>) -> Result<(usize, Vec<u64>), FormatError> {
        let (line, text) = self
            .inner
            .next()
            .ok_or_else(|| FormatError::UnexpectedEof(what.to_string()))?;
        let values = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u64>().map_err(|_| FormatError::Syntax {
                    line,
                    message: format!("`{tok}` is not a nonnegative integer"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(count) = expected {
            if values.len() != count {
                return Err(FormatError::Syntax {
                    line,
                    message: format!("expected {count} values for {what}, found {}", values.len()),
                });
            }
        }
        Ok((line, values))
    }

    fn finish(&mut self) -> Result<(), FormatError> {
        match self.inner.next() {
            Some((line, _)) => Err(FormatError::TrailingData { line }),
            None => Ok(()),
        }
    }
}

fn small(line: usize, v: u64, what: &str) -> Result<usize, FormatError> {
    usize::try_from(v)
        .ok()
        .filter(|&x| x <= 1 << 16)
        .ok_or_else(|| FormatError::Syntax {
            line,
            message: format!("{what} {v} is too large"),
        })
}

fn read_matrix(lines: &mut Lines<'_>) -> Result<FpMatrix, FormatError> {
    let (line, header) = lines.next_ints("matrix header `p rows cols`", Some(3))?;
    let p = u32::try_from(header[0]).map_err(|_| LinalgError::PrimeOutOfRange(u32::MAX))?;
    let prime = Prime::new(p)?;
    let rows = small(line, header[1], "row count")?;
    let cols = small(line, header[2], "column count")?;
    if cols == 0 && rows > 0 {
        return Err(FormatError::Syntax {
            line,
            message: "a matrix with zero columns must have zero rows".into(),
        });
    }
    let mut data = Vec::new();
    for r in 0..rows {
        let (line, values) = lines.next_ints(&format!("matrix row {}", r + 1), Some(cols))?;
        for v in values {
            data.push(prime.residue(v).map_err(|e| FormatError::Syntax {
                line,
                message: e.to_string(),
            })?);
        }
    }
    Ok(FpMatrix::new(&prime, rows, cols, data)?)
}

fn read_module(lines: &mut Lines<'_>) -> Result<GModule, FormatError> {
    let (line, header) = lines.next_ints("module header `p n dim`", Some(3))?;
    let p = u32::try_from(header[0]).map_err(|_| LinalgError::PrimeOutOfRange(u32::MAX))?;
    let n = u32::try_from(header[1]).map_err(|_| FormatError::Syntax {
        line,
        message: format!("n = {} is too large", header[1]),
    })?;
    let dim = small(line, header[2], "dimension")?;
    let group = GroupSpec::new(p, n)?;
    let sigma = read_matrix(lines)?;
    if sigma.prime().value() != p {
        return Err(ModuleError::CharacteristicMismatch {
            expected: p,
            found: sigma.prime().value(),
        }
        .into());
    }
    if sigma.rows() != dim || sigma.cols() != dim {
        return Err(FormatError::Syntax {
            line,
            message: format!("sigma is {}x{}, header declares dimension {dim}", sigma.rows(), sigma.cols()),
        });
    }
    Ok(GModule::new(&group, sigma)?)
}

pub fn parse_matrix(text: &str) -> Result<FpMatrix, FormatError> {
    let mut lines = Lines::new(text);
    let m = read_matrix(&mut lines)?;
    lines.finish()?;
    Ok(m)
}

pub fn parse_module(text: &str) -> Result<GModule, FormatError> {
    let mut lines = Lines::new(text);
    let m = read_module(&mut lines)?;
    lines.finish()?;
    Ok(m)
}

pub fn parse_norm_data(text: &str) -> Result<NormData, FormatError> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next_ints("header `p n m`", Some(3))?;
    let p = u32::try_from(header[0]).map_err(|_| LinalgError::PrimeOutOfRange(u32::MAX))?;
    let too_large = |what: &str, v: u64| FormatError::Syntax {
        line,
        message: format!("{what} = {v} is too large"),
    };
    let n = u32::try_from(header[1]).map_err(|_| too_large("n", header[1]))?;
    let m = u32::try_from(header[2]).map_err(|_| too_large("m", header[2]))?;
    let group = GroupSpec::new(p, n)?;
    let (line, d) = lines.next_ints("norm dimensions `d_0 … d_n`", Some(n as usize + 1))?;
    let d = d
        .into_iter()
        .map(|v| usize::try_from(v).map_err(|_| FormatError::Syntax {
            line,
            message: format!("dimension {v} is too large"),
        }))
        .collect::<Result<Vec<_>, _>>()?;
    lines.finish()?;
    Ok(NormData::new(&group, m, d)?)
}

pub fn parse_model(text: &str) -> Result<NormFiltrationModel, FormatError> {
    let mut lines = Lines::new(text);
    let module = read_module(&mut lines)?;
    let mut levels = Vec::new();
    for _ in 0..=module.group().n() {
        let block = read_matrix(&mut lines)?;
        if block.prime() != module.prime() {
            return Err(ModuleError::CharacteristicMismatch {
                expected: module.group().p(),
                found: block.prime().value(),
            }
            .into());
        }
        if block.cols() != module.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: module.dim(),
                found: block.cols(),
            }
            .into());
        }
        levels.push(Subspace::row_space(&block));
    }
    lines.finish()?;
    Ok(NormFiltrationModel::new(module, levels, 1)?)
}

/// A module file, or a bare σ-matrix over the smallest group that admits it.
///
/// The two are told apart by the second record: a module file repeats `p`
/// there as a matrix header, which can never start a row of residues.
pub fn parse_action(text: &str) -> Result<GModule, FormatError> {
    let mut records = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().next().unwrap_or(""));
    let first = records.next();
    if first.is_some() && records.next() == first {
        return parse_module(text);
    }
    let sigma = parse_matrix(text)?;
    let prime = sigma.prime().clone();
    let mut n = 1;
    loop {
        let group = GroupSpec::from_prime(&prime, n)?;
        if group.order() >= sigma.rows() {
            return Ok(GModule::new(&group, sigma)?);
        }
        n += 1;
    }
}

pub fn write_matrix(m: &FpMatrix) -> String {
    let mut out = format!("{} {} {}\n", m.prime(), m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_module(module: &GModule) -> String {
    let g = module.group();
    format!("{} {} {}\n{}", g.p(), g.n(), module.dim(), write_matrix(module.sigma()))
}

pub fn write_subspace(s: &Subspace) -> String {
    write_matrix(s.basis())
}

pub fn write_norm_data(d: &NormData) -> String {
    let dims: Vec<String> = d.d.iter().map(|v| v.to_string()).collect();
    format!("{} {} {}\n{}\n", d.p, d.n, d.m, dims.join(" "))
}

pub fn write_model(model: &NormFiltrationModel) -> String {
    let mut out = write_module(model.module());
    for (i, w) in model.levels().iter().enumerate() {
        let _ = writeln!(out, "# W_{i}");
        out.push_str(&write_subspace(w));
    }
    out
}
