//! Finite incidence structures with multiset block semantics.
//!
//! Blocks are stored as strictly increasing point lists and the block list is
//! kept sorted, so structural equality is plain `==`.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("point {point} out of range for v = {v}")]
    PointOutOfRange { point: usize, v: usize },
    #[error("block {block} repeats point {point}")]
    RepeatedPoint { block: usize, point: usize },
    #[error("block {block} is not strictly increasing")]
    UnsortedBlock { block: usize },
    #[error("block list is not in lexicographic order at position {block}")]
    UnsortedBlocks { block: usize },
    #[error("block index {block} out of range (b = {b})")]
    BlockOutOfRange { block: usize, b: usize },
    #[error("point counts differ: {0} vs {1}")]
    PointCountMismatch(usize, usize),
    #[error("not tactical: {0}")]
    NotTactical(TacticalDefect),
    #[error("v must be positive")]
    ZeroPoints,
}

/// Why a structure fails to be a tactical configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TacticalDefect {
    NoBlocks,
    BlockSize { block: usize, expected: usize, found: usize },
    PointDegree { point: usize, expected: usize, found: usize },
}

impl fmt::Display for TacticalDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TacticalDefect::NoBlocks => write!(f, "no blocks"),
            TacticalDefect::BlockSize { block, expected, found } => {
                write!(f, "block {block} has size {found}, expected {expected}")
            }
            TacticalDefect::PointDegree { point, expected, found } => {
                write!(f, "point {point} has degree {found}, expected {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TacticalParams {
    pub v: usize,
    pub b: usize,
    pub k: usize,
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncidenceStructure {
    v: usize,
    blocks: Vec<Vec<usize>>,
}

/// Raw JSON shape; validated on conversion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignJson {
    pub v: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    /// Builds a structure from arbitrary blocks, sorting each block and the block list.
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self, IncidenceError> {
        if v == 0 {
            return Err(IncidenceError::ZeroPoints);
        }
        let mut blocks = blocks;
        for (i, block) in blocks.iter_mut().enumerate() {
            block.sort_unstable();
            for w in block.windows(2) {
                if w[0] == w[1] {
                    return Err(IncidenceError::RepeatedPoint { block: i, point: w[0] });
                }
            }
            if let Some(&p) = block.last() {
                if p >= v {
                    return Err(IncidenceError::PointOutOfRange { point: p, v });
                }
            }
        }
        blocks.sort();
        Ok(Self { v, blocks })
    }

    /// Accepts only input that is already in canonical form.
    pub fn from_canonical(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self, IncidenceError> {
        if v == 0 {
            return Err(IncidenceError::ZeroPoints);
        }
        for (i, block) in blocks.iter().enumerate() {
            for w in block.windows(2) {
                if w[0] == w[1] {
                    return Err(IncidenceError::RepeatedPoint { block: i, point: w[0] });
                }
                if w[0] > w[1] {
                    return Err(IncidenceError::UnsortedBlock { block: i });
                }
            }
            if let Some(&p) = block.last() {
                if p >= v {
                    return Err(IncidenceError::PointOutOfRange { point: p, v });
                }
            }
        }
        for (i, w) in blocks.windows(2).enumerate() {
            if w[0] > w[1] {
                return Err(IncidenceError::UnsortedBlocks { block: i + 1 });
            }
        }
        Ok(Self { v, blocks })
    }

    /// Builds from 1-indexed blocks, as designs are usually written by hand.
    pub fn from_one_indexed(v: usize, blocks: &[&[usize]]) -> Result<Self, IncidenceError> {
        let mut out = Vec::with_capacity(blocks.len());
        for b in blocks {
            let mut block = Vec::with_capacity(b.len());
            for &p in b.iter() {
                if p == 0 || p > v {
                    return Err(IncidenceError::PointOutOfRange { point: p, v });
                }
                block.push(p - 1);
            }
            out.push(block);
        }
        Self::new(v, out)
    }

    /// Builds from the columns of a 0/1 incidence matrix given row by row.
    pub fn from_incidence_rows(rows: &[Vec<u8>]) -> Result<Self, IncidenceError> {
        let v = rows.len();
        let b = rows.first().map_or(0, |r| r.len());
        let blocks = (0..b)
            .map(|j| (0..v).filter(|&i| rows[i][j] != 0).collect())
            .collect();
        Self::new(v, blocks)
    }

    pub fn empty(v: usize) -> Self {
        Self { v, blocks: Vec::new() }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> Result<&[usize], IncidenceError> {
        self.blocks
            .get(i)
            .map(Vec::as_slice)
            .ok_or(IncidenceError::BlockOutOfRange { block: i, b: self.blocks.len() })
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.v];
        for block in &self.blocks {
            for &p in block {
                deg[p] += 1;
            }
        }
        deg
    }

    pub fn tactical_params(&self) -> Result<TacticalParams, TacticalDefect> {
        let first = self.blocks.first().ok_or(TacticalDefect::NoBlocks)?;
        let k = first.len();
        for (i, block) in self.blocks.iter().enumerate() {
            if block.len() != k {
                return Err(TacticalDefect::BlockSize { block: i, expected: k, found: block.len() });
            }
        }
        let deg = self.degrees();
        let r = deg[0];
        for (p, &d) in deg.iter().enumerate() {
            if d != r {
                return Err(TacticalDefect::PointDegree { point: p, expected: r, found: d });
            }
        }
        Ok(TacticalParams { v: self.v, b: self.blocks.len(), k, r })
    }

    /// Pair counts λ_xy for any structure, tactical or not.
    pub fn pair_counts(&self) -> ConcurrenceMatrix {
        let v = self.v;
        let mut data = vec![0i64; v * v];
        for block in &self.blocks {
            for &x in block {
                for &y in block {
                    data[x * v + y] += 1;
                }
            }
        }
        ConcurrenceMatrix { v, data }
    }

    pub fn incidence_rows(&self) -> Vec<Vec<u8>> {
        let mut rows = vec![vec![0u8; self.blocks.len()]; self.v];
        for (j, block) in self.blocks.iter().enumerate() {
            for &p in block {
                rows[p][j] = 1;
            }
        }
        rows
    }

    pub fn contains(&self, block: usize, point: usize) -> bool {
        self.blocks[block].binary_search(&point).is_ok()
    }

    /// Applies a point relabeling `p -> perm[p]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&p| perm[p]).collect())
            .collect();
        Self::new(self.v, blocks).expect("relabeling by a permutation stays valid")
    }

    pub fn to_json(&self) -> DesignJson {
        DesignJson { v: self.v, blocks: self.blocks.clone() }
    }
}

impl TryFrom<DesignJson> for IncidenceStructure {
    type Error = IncidenceError;
    fn try_from(raw: DesignJson) -> Result<Self, Self::Error> {
        Self::from_canonical(raw.v, raw.blocks)
    }
}

impl Serialize for IncidenceStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IncidenceStructure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = DesignJson::deserialize(d)?;
        Self::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for IncidenceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v={} {{", self.v)?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{block:?}")?;
        }
        write!(f, "}}")
    }
}

/// Square symmetric integer matrix; for a structure, NN^T.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConcurrenceMatrix {
    v: usize,
    data: Vec<i64>,
}

impl ConcurrenceMatrix {
    /// Validates symmetry, nonnegativity and a constant diagonal.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, String> {
        let v = rows.len();
        if v == 0 {
            return Err("empty matrix".into());
        }
        let mut data = Vec::with_capacity(v * v);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != v {
                return Err(format!("row {i} has length {}, expected {v}", row.len()));
            }
            data.extend_from_slice(row);
        }
        let m = Self { v, data };
        for i in 0..v {
            for j in 0..v {
                if m.get(i, j) < 0 {
                    return Err(format!("negative entry at ({i},{j})"));
                }
                if m.get(i, j) != m.get(j, i) {
                    return Err(format!("asymmetric at ({i},{j})"));
                }
            }
            if m.get(i, i) != m.get(0, 0) {
                return Err(format!("diagonal entry {i} differs from entry 0"));
            }
        }
        Ok(m)
    }

    /// Circulant matrix with first row `row` (full length v).
    pub fn circulant(row: &[i64]) -> Self {
        let v = row.len();
        let mut data = Vec::with_capacity(v * v);
        for i in 0..v {
            for j in 0..v {
                data.push(row[(j + v - i) % v]);
            }
        }
        Self { v, data }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> i64 {
        self.data[x * self.v + y]
    }

    pub fn row(&self, x: usize) -> &[i64] {
        &self.data[x * self.v..(x + 1) * self.v]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.v).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn diagonal(&self) -> i64 {
        self.get(0, 0)
    }

    pub fn trace(&self) -> i64 {
        (0..self.v).map(|i| self.get(i, i)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.v).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Returns the first row if every row is its cyclic shift.
    pub fn circulant_first_row(&self) -> Option<Vec<i64>> {
        let first = self.row(0).to_vec();
        (*self == Self::circulant(&first)).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.v, other.v);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { v: self.v, data }
    }

    pub fn scale(&self, s: i64) -> Self {
        Self { v: self.v, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Relabels so that entry (p[x], p[y]) of the result is entry (x, y) of self.
    pub fn permute(&self, p: &[usize]) -> Self {
        let v = self.v;
        let mut data = vec![0; v * v];
        for x in 0..v {
            for y in 0..v {
                data[p[x] * v + p[y]] = self.get(x, y);
            }
        }
        Self { v, data }
    }
}

impl Serialize for ConcurrenceMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConcurrenceMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        Self::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// NN^T of a tactical configuration.
pub fn concurrence(d: &IncidenceStructure) -> Result<ConcurrenceMatrix, IncidenceError> {
    d.tactical_params().map_err(IncidenceError::NotTactical)?;
    Ok(d.pair_counts())
}

/// s(x, B): the number of flags (y, A) with y in B and x in A, equal to Σ_{y∈B} λ_xy.
pub fn flag_count(d: &IncidenceStructure, x: usize, b: usize) -> Result<u64, IncidenceError> {
    if x >= d.v() {
        return Err(IncidenceError::PointOutOfRange { point: x, v: d.v() });
    }
    let block = d.block(b)?;
    let mut s = 0u64;
    for other in d.blocks() {
        if other.binary_search(&x).is_ok() {
            s += block.iter().filter(|p| other.binary_search(p).is_ok()).count() as u64;
        }
    }
    Ok(s)
}

/// Transposes the incidence matrix. Points of the dual are the block positions of `d`.
pub fn dual(d: &IncidenceStructure) -> IncidenceStructure {
    let mut blocks = vec![Vec::new(); d.v()];
    for (j, block) in d.blocks().iter().enumerate() {
        for &p in block {
            blocks[p].push(j);
        }
    }
    IncidenceStructure::new(d.b().max(1), blocks).expect("dual of a valid structure is valid")
}

pub fn complement(d: &IncidenceStructure) -> IncidenceStructure {
    let v = d.v();
    let blocks = d
        .blocks()
        .iter()
        .map(|b| (0..v).filter(|p| b.binary_search(p).is_err()).collect())
        .collect();
    IncidenceStructure::new(v, blocks).expect("complement of a valid structure is valid")
}

/// N ⊗ J_{m,n}: point p gets clones p + i·v for i < m, each block is repeated n times.
pub fn tensor_expand(d: &IncidenceStructure, m: usize, n: usize) -> IncidenceStructure {
    assert!(m >= 1 && n >= 1, "tensor factors must be positive");
    let v = d.v();
    let mut blocks = Vec::with_capacity(d.b() * n);
    for block in d.blocks() {
        let expanded: Vec<usize> =
            (0..m).flat_map(|i| block.iter().map(move |&p| p + i * v)).collect();
        for _ in 0..n {
            blocks.push(expanded.clone());
        }
    }
    IncidenceStructure::new(m * v, blocks).expect("tensor expansion stays valid")
}

pub fn multiset_union(
    d1: &IncidenceStructure,
    d2: &IncidenceStructure,
) -> Result<IncidenceStructure, IncidenceError> {
    if d1.v() != d2.v() {
        return Err(IncidenceError::PointCountMismatch(d1.v(), d2.v()));
    }
    let mut blocks = d1.blocks().to_vec();
    blocks.extend_from_slice(d2.blocks());
    IncidenceStructure::new(d1.v(), blocks)
}
