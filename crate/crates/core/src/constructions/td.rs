//! Transversal designs TD_λ(k, u).
//!
//! Point `x` of group `i` has index `i + k * x`, so groups are residue
//! classes mod k and the concurrence matrix of a TD is circulant.

use super::ConstructionError;
use crate::incidence::{multiset_union, IncidenceStructure};

/// Incidence rows of a TD_2(5,2).
const TD2_5_2: [&str; 10] = [
    "11110000", "11001100", "11000011", "10101010", "10100101", "00001111", "00110011", "00111100",
    "01010101", "01011010",
];

/// Incidence rows of a TD_3(5,2).
const TD3_5_2: [&str; 10] = [
    "111111000000",
    "111000111000",
    "110100100110",
    "110010010101",
    "110001001011",
    "000000111111",
    "000111000111",
    "001011011001",
    "001101101010",
    "001110110100",
];

/// Blocks of a TD_2(6,2) on points 0..9, a, b.
const TD2_6_2: [&str; 8] = ["012345", "0129ab", "03478b", "05789a", "13568a", "14689b", "2367ab", "245679"];

/// Blocks of a TD_3(6,2) on points 0..9, a, b.
const TD3_6_2: [&str; 12] = [
    "012345", "01234b", "01589a", "02579a", "0378ab", "04789b", "1269ab", "13568a", "14689b", "2367ab",
    "245679", "345678",
];

fn from_rows(rows: &[&str]) -> IncidenceStructure {
    let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.bytes().map(|c| c - b'0').collect()).collect();
    IncidenceStructure::from_incidence_rows(&rows).expect("seed incidence rows")
}

/// Point labels 0-9 then a, b, ... as used for order-12 block sets.
pub fn from_labelled_blocks(v: usize, blocks: &[&str]) -> IncidenceStructure {
    let blocks = blocks
        .iter()
        .map(|b| b.chars().map(|c| c.to_digit(36).expect("point label") as usize).collect())
        .collect();
    IncidenceStructure::new(v, blocks).expect("labelled blocks")
}

/// Seed designs with λ > 1 that have no Latin-square construction here.
pub fn seed_td(k: usize, u: usize, lambda: usize) -> Option<IncidenceStructure> {
    match (k, u, lambda) {
        (5, 2, 2) => Some(from_rows(&TD2_5_2)),
        (5, 2, 3) => Some(from_rows(&TD3_5_2)),
        (6, 2, 2) => Some(from_labelled_blocks(12, &TD2_6_2)),
        (6, 2, 3) => Some(from_labelled_blocks(12, &TD3_6_2)),
        _ => None,
    }
}

const SEEDS: [(usize, usize, usize); 4] = [(5, 2, 2), (5, 2, 3), (6, 2, 2), (6, 2, 3)];

fn is_prime(u: usize) -> bool {
    u >= 2 && (2..u).take_while(|d| d * d <= u).all(|d| u % d != 0)
}

// GF(4) with elements 0, 1, a, a+1 as 0..3; addition is xor.
const GF4_MUL: [[usize; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

/// Mutually orthogonal Latin squares of order `u`, as functions of (x, y).
fn mols(u: usize) -> Vec<Box<dyn Fn(usize, usize) -> usize>> {
    if is_prime(u) {
        (1..u).map(|m| Box::new(move |x: usize, y: usize| (m * x + y) % u) as Box<dyn Fn(usize, usize) -> usize>).collect()
    } else if u == 4 {
        (1..4).map(|m| Box::new(move |x: usize, y: usize| GF4_MUL[m][x] ^ y) as Box<dyn Fn(usize, usize) -> usize>).collect()
    } else {
        vec![Box::new(move |x: usize, y: usize| (x + y) % u)]
    }
}

fn td_from_mols(k: usize, u: usize) -> Option<IncidenceStructure> {
    let squares = mols(u);
    if k < 2 || k - 2 > squares.len() {
        return None;
    }
    let mut blocks = Vec::with_capacity(u * u);
    for x in 0..u {
        for y in 0..u {
            let mut block = vec![k * x, 1 + k * y];
            for (j, sq) in squares.iter().take(k - 2).enumerate() {
                block.push(2 + j + k * sq(x, y));
            }
            blocks.push(block);
        }
    }
    Some(IncidenceStructure::new(k * u, blocks).expect("MOLS blocks"))
}

/// Keeps the first `k` groups of a TD whose groups are the residues mod `k0`.
fn truncate(d: &IncidenceStructure, k0: usize, k: usize) -> IncidenceStructure {
    let u = d.v() / k0;
    let blocks = d
        .blocks()
        .iter()
        .map(|b| b.iter().filter(|&&p| p % k0 < k).map(|&p| p % k0 + k * (p / k0)).collect())
        .collect();
    IncidenceStructure::new(k * u, blocks).expect("truncated blocks")
}

/// Base designs TD_λ0(k, u) available for building larger λ.
fn bases(k: usize, u: usize) -> Vec<(usize, IncidenceStructure)> {
    let mut out = Vec::new();
    if let Some(d) = td_from_mols(k, u) {
        out.push((1, d));
    }
    for &(k0, u0, l0) in &SEEDS {
        if u0 == u && k0 >= k && !out.iter().any(|(l, _)| *l == l0) {
            out.push((l0, truncate(&seed_td(k0, u0, l0).unwrap(), k0, k)));
        }
    }
    out
}

/// A TD_λ(k, u) as a multiset union of Latin-square designs and seeds.
pub fn transversal_design(k: usize, u: usize, lambda: usize) -> Result<IncidenceStructure, ConstructionError> {
    if k < 2 || u < 2 || lambda < 1 {
        return Err(ConstructionError::InvalidParameters(format!("TD_{lambda}({k},{u})")));
    }
    let bases = bases(k, u);
    // choice[t] = base index used last in some decomposition of t
    let mut choice: Vec<Option<usize>> = vec![None; lambda + 1];
    let mut reachable = vec![false; lambda + 1];
    reachable[0] = true;
    for t in 1..=lambda {
        for (i, (l0, _)) in bases.iter().enumerate() {
            if *l0 <= t && reachable[t - l0] {
                reachable[t] = true;
                choice[t] = Some(i);
                break;
            }
        }
    }
    if !reachable[lambda] {
        return Err(ConstructionError::NoConstructionPath(format!("TD_{lambda}({k},{u})")));
    }
    let mut design = IncidenceStructure::empty(k * u);
    let mut t = lambda;
    while t > 0 {
        let i = choice[t].unwrap();
        design = multiset_union(&design, &bases[i].1).expect("same point count");
        t -= bases[i].0;
    }
    Ok(design)
}
