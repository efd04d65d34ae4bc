//! Isomorphism of incidence structures and of symmetric integer matrices.
//!
//! Plain backtracking over point images in index order, pruned by point
//! invariants, pair concurrences and triple counts. Trying candidates in
//! ascending order makes the first mapping found the lexicographically least.

use crate::incidence::{ConcurrenceMatrix, IncidenceStructure};
use thiserror::Error;

pub const DEFAULT_ISO_NODES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("isomorphism search exceeded {nodes} nodes")]
pub struct IsoBudgetExhausted {
    pub nodes: u64,
}

/// Returns a point map `f` with `d1.relabel(f) == d2`, or `None` when none exists.
pub fn is_isomorphic(
    d1: &IncidenceStructure,
    d2: &IncidenceStructure,
) -> Result<Option<Vec<usize>>, IsoBudgetExhausted> {
    is_isomorphic_with_budget(d1, d2, DEFAULT_ISO_NODES)
}

pub fn is_isomorphic_with_budget(
    d1: &IncidenceStructure,
    d2: &IncidenceStructure,
    max_nodes: u64,
) -> Result<Option<Vec<usize>>, IsoBudgetExhausted> {
    if d1.v() != d2.v() || d1.b() != d2.b() {
        return Ok(None);
    }
    let sizes = |d: &IncidenceStructure| {
        let mut s: Vec<usize> = d.blocks().iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    };
    if sizes(d1) != sizes(d2) {
        return Ok(None);
    }
    let s1 = Side::new(d1);
    let s2 = Side::new(d2);
    let mut sig1 = s1.signatures.clone();
    let mut sig2 = s2.signatures.clone();
    sig1.sort();
    sig2.sort();
    if sig1 != sig2 {
        return Ok(None);
    }
    let v = d1.v();
    let candidates: Vec<Vec<usize>> = (0..v)
        .map(|x| (0..v).filter(|&y| s1.signatures[x] == s2.signatures[y]).collect())
        .collect();
    let mut search = Search {
        s1: &s1,
        s2: &s2,
        candidates,
        image: Vec::with_capacity(v),
        used: vec![false; v],
        nodes: 0,
        max_nodes,
        accept: &|f: &[usize]| d1.relabel(f) == *d2,
    };
    search.run()
}

/// Returns `p` with `a.permute(p) == b`, i.e. `a[x][y] == b[p[x]][p[y]]`.
pub fn matrices_isomorphic(
    a: &ConcurrenceMatrix,
    b: &ConcurrenceMatrix,
    max_nodes: u64,
) -> Result<Option<Vec<usize>>, IsoBudgetExhausted> {
    if a.v() != b.v() {
        return Ok(None);
    }
    let s1 = Side::from_matrix(a.clone());
    let s2 = Side::from_matrix(b.clone());
    let mut sig1 = s1.signatures.clone();
    let mut sig2 = s2.signatures.clone();
    sig1.sort();
    sig2.sort();
    if sig1 != sig2 {
        return Ok(None);
    }
    let v = a.v();
    let candidates: Vec<Vec<usize>> = (0..v)
        .map(|x| (0..v).filter(|&y| s1.signatures[x] == s2.signatures[y]).collect())
        .collect();
    let mut search = Search {
        s1: &s1,
        s2: &s2,
        candidates,
        image: Vec::with_capacity(v),
        used: vec![false; v],
        nodes: 0,
        max_nodes,
        accept: &|_: &[usize]| true,
    };
    search.run()
}

struct Side {
    c: ConcurrenceMatrix,
    triples: Option<Vec<u32>>,
    signatures: Vec<Vec<i64>>,
}

impl Side {
    fn new(d: &IncidenceStructure) -> Self {
        let v = d.v();
        let c = d.pair_counts();
        let mut triples = vec![0u32; v * v * v];
        for block in d.blocks() {
            for &x in block {
                for &y in block {
                    for &z in block {
                        triples[(x * v + y) * v + z] += 1;
                    }
                }
            }
        }
        let mut side = Self::from_matrix(c);
        side.triples = Some(triples);
        side
    }

    fn from_matrix(c: ConcurrenceMatrix) -> Self {
        let v = c.v();
        let signatures = (0..v)
            .map(|x| {
                let mut row: Vec<i64> = (0..v).filter(|&y| y != x).map(|y| c.get(x, y)).collect();
                row.sort_unstable();
                row.insert(0, c.get(x, x));
                row
            })
            .collect();
        Self { c, triples: None, signatures }
    }

    fn triple(&self, x: usize, y: usize, z: usize) -> u32 {
        let v = self.c.v();
        self.triples.as_ref().map_or(0, |t| t[(x * v + y) * v + z])
    }
}

struct Search<'a> {
    s1: &'a Side,
    s2: &'a Side,
    candidates: Vec<Vec<usize>>,
    image: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    max_nodes: u64,
    accept: &'a dyn Fn(&[usize]) -> bool,
}

impl Search<'_> {
    fn run(&mut self) -> Result<Option<Vec<usize>>, IsoBudgetExhausted> {
        if self.extend()? {
            Ok(Some(self.image.clone()))
        } else {
            Ok(None)
        }
    }

    fn consistent(&self, x: usize, fx: usize) -> bool {
        for (a, &fa) in self.image.iter().enumerate() {
            if self.s1.c.get(x, a) != self.s2.c.get(fx, fa) {
                return false;
            }
        }
        if self.s1.triples.is_some() {
            for (a, &fa) in self.image.iter().enumerate() {
                for (b2, &fb) in self.image.iter().enumerate().skip(a + 1) {
                    if self.s1.triple(x, a, b2) != self.s2.triple(fx, fa, fb) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn extend(&mut self) -> Result<bool, IsoBudgetExhausted> {
        let x = self.image.len();
        if x == self.candidates.len() {
            return Ok((self.accept)(&self.image));
        }
        for i in 0..self.candidates[x].len() {
            let fx = self.candidates[x][i];
            if self.used[fx] || !self.consistent(x, fx) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(IsoBudgetExhausted { nodes: self.max_nodes });
            }
            self.used[fx] = true;
            self.image.push(fx);
            if self.extend()? {
                return Ok(true);
            }
            self.image.pop();
            self.used[fx] = false;
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_copy_is_isomorphic() {
        let d = IncidenceStructure::from_one_indexed(6, &[&[1, 2, 3], &[1, 5, 6], &[2, 4, 6], &[3, 4, 5]])
            .unwrap();
        let perm = [3, 5, 0, 1, 4, 2];
        let e = d.relabel(&perm);
        let f = is_isomorphic(&d, &e).unwrap().unwrap();
        assert_eq!(d.relabel(&f), e);
        assert_eq!(is_isomorphic(&d, &d).unwrap().unwrap(), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn same_concurrence_different_blocks() {
        // Two 4-cycles are isomorphic; a doubled matching has the same degrees but is not.
        let a = IncidenceStructure::new(4, vec![vec![0, 1], vec![2, 3], vec![0, 2], vec![1, 3]]).unwrap();
        let b = IncidenceStructure::new(4, vec![vec![0, 1], vec![2, 3], vec![0, 3], vec![1, 2]]).unwrap();
        assert!(is_isomorphic(&a, &b).unwrap().is_some());
        let c = IncidenceStructure::new(4, vec![vec![0, 1], vec![0, 1], vec![2, 3], vec![2, 3]]).unwrap();
        assert!(is_isomorphic(&a, &c).unwrap().is_none());
    }

    #[test]
    fn matrix_isomorphism() {
        let a = ConcurrenceMatrix::circulant(&[2, 1, 0, 1]);
        let b = a.permute(&[2, 0, 3, 1]);
        let p = matrices_isomorphic(&a, &b, 1000).unwrap().unwrap();
        assert_eq!(a.permute(&p), b);
        let c = ConcurrenceMatrix::circulant(&[2, 0, 2, 0]);
        assert!(matrices_isomorphic(&a, &c, 1000).unwrap().is_none());
    }
}
