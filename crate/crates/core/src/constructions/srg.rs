//! Neighbourhood designs of strongly regular graphs.

use crate::incidence::IncidenceStructure;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub nu: usize,
    pub mu: usize,
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SRG({},{},{},{})", self.v, self.k, self.nu, self.mu)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SrgError {
    #[error("not a strongly regular graph: {0}")]
    NotSrg(String),
    #[error("{params} gives no PGD: need nu = mu or k = mu")]
    NotEligible { params: SrgParams },
}

/// Checks A^2 = kI + nu A + mu (J - I - A) and returns the parameters.
pub fn srg_params(adj: &[Vec<u8>]) -> Result<SrgParams, SrgError> {
    let v = adj.len();
    if v < 2 || adj.iter().any(|row| row.len() != v) {
        return Err(SrgError::NotSrg("adjacency matrix is not square".into()));
    }
    for x in 0..v {
        if adj[x][x] != 0 {
            return Err(SrgError::NotSrg(format!("loop at vertex {x}")));
        }
        for y in 0..v {
            if adj[x][y] > 1 || adj[x][y] != adj[y][x] {
                return Err(SrgError::NotSrg(format!("entry ({x},{y}) is not symmetric 0/1")));
            }
        }
    }
    let k = adj[0].iter().filter(|&&a| a == 1).count();
    let common = |x: usize, y: usize| (0..v).filter(|&z| adj[x][z] == 1 && adj[y][z] == 1).count();
    let (mut nu, mut mu) = (None, None);
    for x in 0..v {
        let deg = adj[x].iter().filter(|&&a| a == 1).count();
        if deg != k {
            return Err(SrgError::NotSrg(format!("vertex {x} has degree {deg}, expected {k}")));
        }
        for y in x + 1..v {
            let slot = if adj[x][y] == 1 { &mut nu } else { &mut mu };
            let c = common(x, y);
            match *slot {
                None => *slot = Some(c),
                Some(prev) if prev != c => {
                    return Err(SrgError::NotSrg(format!("pair ({x},{y}) has {c} common neighbours, expected {prev}")));
                }
                _ => {}
            }
        }
    }
    // complete and empty graphs leave one value unconstrained
    let nu = nu.unwrap_or(0);
    let mu = mu.unwrap_or(0);
    Ok(SrgParams { v, k, nu, mu })
}

/// Blocks are the open neighbourhoods N(x).
pub fn srg_neighborhood_design(adj: &[Vec<u8>]) -> Result<IncidenceStructure, SrgError> {
    let params = srg_params(adj)?;
    if params.nu != params.mu && params.k != params.mu {
        return Err(SrgError::NotEligible { params });
    }
    let blocks = adj
        .iter()
        .map(|row| (0..row.len()).filter(|&y| row[y] == 1).collect())
        .collect();
    Ok(IncidenceStructure::new(params.v, blocks).expect("neighbourhoods are sets"))
}

fn from_relation(v: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<Vec<u8>> {
    (0..v).map(|x| (0..v).map(|y| u8::from(x != y && adjacent(x, y))).collect()).collect()
}

/// Complete multipartite graph with `c` parts of size `m`; vertex `x` lies in part `x % c`.
pub fn complete_multipartite(c: usize, m: usize) -> Vec<Vec<u8>> {
    from_relation(c * m, |x, y| x % c != y % c)
}

/// Cayley graph on Z4 x Z4 with connection set ±(1,0), ±(0,1), ±(1,1); vertex (a,b) is 4a+b.
pub fn shrikhande() -> Vec<Vec<u8>> {
    from_relation(16, |x, y| {
        let (da, db) = ((4 + x / 4 - y / 4) % 4, (4 + x % 4 - y % 4) % 4);
        matches!((da, db), (1, 0) | (3, 0) | (0, 1) | (0, 3) | (1, 1) | (3, 3))
    })
}

/// Hamming graph H(d, q) on words over Z_q, word index in base q.
pub fn hamming_graph(d: usize, q: usize) -> Vec<Vec<u8>> {
    let v = q.pow(d as u32);
    from_relation(v, |x, y| hamming_distance(x, y, d, q) == 1)
}

pub(crate) fn hamming_distance(mut x: usize, mut y: usize, d: usize, q: usize) -> usize {
    let mut dist = 0;
    for _ in 0..d {
        dist += usize::from(x % q != y % q);
        x /= q;
        y /= q;
    }
    dist
}

/// Kneser graph K(5,2).
pub fn petersen() -> Vec<Vec<u8>> {
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    from_relation(10, |x, y| {
        let (a, b) = pairs[x];
        let (c, d) = pairs[y];
        a != c && a != d && b != c && b != d
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::verify_pgd;

    #[test]
    fn graph_parameters() {
        assert_eq!(srg_params(&petersen()).unwrap(), SrgParams { v: 10, k: 3, nu: 0, mu: 1 });
        assert_eq!(srg_params(&shrikhande()).unwrap(), SrgParams { v: 16, k: 6, nu: 2, mu: 2 });
        assert_eq!(srg_params(&hamming_graph(2, 4)).unwrap(), SrgParams { v: 16, k: 6, nu: 2, mu: 2 });
        assert_eq!(srg_params(&complete_multipartite(2, 3)).unwrap(), SrgParams { v: 6, k: 3, nu: 0, mu: 3 });
        assert!(srg_params(&hamming_graph(3, 2)).is_err());
    }

    #[test]
    fn neighbourhood_designs() {
        let d = srg_neighborhood_design(&complete_multipartite(2, 3)).unwrap();
        let p = verify_pgd(&d).unwrap();
        assert_eq!((p.v, p.b, p.k, p.r, p.alpha, p.beta), (6, 6, 3, 3, 0, 9));
        for g in [shrikhande(), hamming_graph(2, 4)] {
            let p = verify_pgd(&srg_neighborhood_design(&g).unwrap()).unwrap();
            assert_eq!((p.v, p.b, p.k, p.r, p.alpha, p.beta), (16, 16, 6, 6, 12, 16));
        }
        assert!(matches!(srg_neighborhood_design(&petersen()), Err(SrgError::NotEligible { .. })));
    }

    #[test]
    fn multipartite_family() {
        for (c, m) in [(2, 3), (3, 2), (3, 3), (4, 2)] {
            let p = verify_pgd(&srg_neighborhood_design(&complete_multipartite(c, m)).unwrap()).unwrap();
            let (c, m) = (c as u64, m as u64);
            assert_eq!((p.v, p.k, p.alpha, p.beta), (c * m, (c - 1) * m, (c - 1) * (c - 2) * m * m, (c * c + 3 - 3 * c) * m * m));
        }
    }
}
