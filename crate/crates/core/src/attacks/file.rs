//! Plain-text attack-pair files.
//!
//! ```text
//! # comment
//! label reflection
//! units deg          # unit of d_x (and of d_u per second); S blocks are unitless
//! S_x
//! -1 0 0 0 0 0
//! ...
//! d_x
//! 0 -20 20 0 0 0
//! S_u
//! ...
//! d_u
//! 0 0 0 0 0 0
//! ```
//!
//! Numbers are separated by whitespace or commas. All four blocks are required.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use super::{AffineAttack, AttackPair};
use crate::error::{Error, Result};
use crate::kinematics::angle_scale;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleUnit {
    Degrees,
    Radians,
}

impl AngleUnit {
    fn keyword(&self) -> &'static str {
        match self {
            AngleUnit::Degrees => "deg",
            AngleUnit::Radians => "rad",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    Sx,
    Dx,
    Su,
    Du,
}

impl Block {
    fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "S_x" => Some(Block::Sx),
            "d_x" => Some(Block::Dx),
            "S_u" => Some(Block::Su),
            "d_u" => Some(Block::Du),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn name(self) -> &'static str {
        ["S_x", "d_x", "S_u", "d_u"][self.index()]
    }
}

fn split_numbers(line: &str, origin: &str, lineno: usize) -> Result<Vec<f64>> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(origin, lineno, format!("bad number `{t}`")))
        })
        .collect()
}

struct Parsed {
    label: Option<String>,
    unit_scale: f64,
    blocks: [Vec<(usize, Vec<f64>)>; 4],
}

fn parse_blocks(src: &str, origin: &str, default_block: Option<Block>) -> Result<Parsed> {
    let mut parsed = Parsed {
        label: None,
        unit_scale: 1.0,
        blocks: Default::default(),
    };
    let mut current = default_block;
    let mut seen = [false; 4];
    for (idx, raw) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let first = words.next().unwrap_or("");
        if first == "label" {
            parsed.label = Some(line["label".len()..].trim().to_string());
            continue;
        }
        if first == "units" {
            let unit = words.next().unwrap_or("");
            parsed.unit_scale = angle_scale(unit)
                .ok_or_else(|| Error::parse(origin, lineno, "units must be deg or rad"))?;
            continue;
        }
        if let Some(block) = Block::from_keyword(first) {
            if seen[block.index()] {
                return Err(Error::parse(origin, lineno, format!("duplicate block {}", block.name())));
            }
            seen[block.index()] = true;
            current = Some(block);
            continue;
        }
        let block = current.ok_or_else(|| Error::parse(origin, lineno, "numbers before any block header"))?;
        let row = split_numbers(line, origin, lineno)?;
        parsed.blocks[block.index()].push((lineno, row));
    }
    Ok(parsed)
}

fn build_matrix(rows: &[(usize, Vec<f64>)], name: &str, origin: &str) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::parse(origin, 0, format!("missing or empty block {name}")));
    }
    for (lineno, row) in rows {
        if row.len() != n {
            return Err(Error::parse(
                origin,
                *lineno,
                format!("{name} must be square: row has {} entries, block has {n} rows", row.len()),
            ));
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i].1[j]))
}

fn build_vector(rows: &[(usize, Vec<f64>)], name: &str, n: usize, scale: f64, origin: &str) -> Result<DVector<f64>> {
    let values: Vec<f64> = rows.iter().flat_map(|(_, r)| r.iter().copied()).collect();
    if values.len() != n {
        let line = rows.first().map(|(l, _)| *l).unwrap_or(0);
        return Err(Error::parse(
            origin,
            line,
            format!("{name} needs {n} entries, found {}", values.len()),
        ));
    }
    Ok(DVector::from_vec(values) * scale)
}

/// Parses an attack-pair file; offsets are returned in radians.
pub fn parse_attack_pair(src: &str, origin: &str) -> Result<AttackPair> {
    let parsed = parse_blocks(src, origin, None)?;
    let s_x = build_matrix(&parsed.blocks[Block::Sx.index()], "S_x", origin)?;
    let n = s_x.nrows();
    let s_u = build_matrix(&parsed.blocks[Block::Su.index()], "S_u", origin)?;
    if s_u.nrows() != n {
        return Err(Error::parse(origin, 0, format!("S_u is {}x{}, S_x is {n}x{n}", s_u.nrows(), s_u.nrows())));
    }
    let d_x = build_vector(&parsed.blocks[Block::Dx.index()], "d_x", n, parsed.unit_scale, origin)?;
    let d_u = build_vector(&parsed.blocks[Block::Du.index()], "d_u", n, parsed.unit_scale, origin)?;
    AttackPair::new(
        AffineAttack::new(s_x, d_x)?,
        AffineAttack::new(s_u, d_u)?,
        parsed.label.unwrap_or_else(|| "unnamed".into()),
    )
}

/// Parses a lone square matrix: either bare rows or an `S_x` block.
/// `label` and `units` lines are accepted and ignored.
pub fn parse_matrix(src: &str, origin: &str) -> Result<DMatrix<f64>> {
    let parsed = parse_blocks(src, origin, Some(Block::Sx))?;
    for block in [Block::Dx, Block::Su, Block::Du] {
        if !parsed.blocks[block.index()].is_empty() {
            return Err(Error::parse(origin, 0, format!("unexpected block {} in matrix file", block.name())));
        }
    }
    build_matrix(&parsed.blocks[Block::Sx.index()], "S_x", origin)
}

fn write_matrix(out: &mut String, name: &str, m: &DMatrix<f64>) {
    let _ = writeln!(out, "{name}");
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{}", m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

fn write_vector(out: &mut String, name: &str, v: &DVector<f64>, scale: f64) {
    let _ = writeln!(out, "{name}");
    let row: Vec<String> = v.iter().map(|x| format!("{}", x / scale)).collect();
    let _ = writeln!(out, "{}", row.join(" "));
}

/// Serializes a pair; offsets are written in `unit`.
pub fn write_attack_pair(pair: &AttackPair, unit: AngleUnit) -> String {
    let scale = angle_scale(unit.keyword()).expect("known unit");
    let mut out = String::new();
    let _ = writeln!(out, "label {}", pair.label);
    let _ = writeln!(out, "units {}", unit.keyword());
    write_matrix(&mut out, "S_x", pair.observable.matrix());
    write_vector(&mut out, "d_x", pair.observable.offset(), scale);
    write_matrix(&mut out, "S_u", pair.command.matrix());
    write_vector(&mut out, "d_u", pair.command.offset(), scale);
    out
}
