//! Symmetric PGDs from a fusion of the Hamming scheme H(3, 3).

use super::srg::hamming_distance;
use super::ConstructionError;
use crate::incidence::IncidenceStructure;

/// A fused relation graph together with its design.
#[derive(Debug, Clone)]
pub struct FusedGraph {
    pub name: &'static str,
    pub adjacency: Vec<Vec<u8>>,
    pub design: IncidenceStructure,
}

/// Fuses the distance relations of H(2l+1, 3) into S_j = ∪ R_{3i+j} and returns
/// the designs of A_1, A_2 and A_3 + I. Only l = 1 is supported.
pub fn hamming_fusion(l: usize) -> Result<[FusedGraph; 3], ConstructionError> {
    if l != 1 {
        return Err(ConstructionError::UnsupportedScale(format!("Hamming fusion needs l = 1, got {l}")));
    }
    let d = 2 * l + 1;
    let v = 3usize.pow(d as u32);
    let graph = |keep: &dyn Fn(usize) -> bool| -> Vec<Vec<u8>> {
        (0..v).map(|x| (0..v).map(|y| u8::from(keep(hamming_distance(x, y, d, 3)))).collect()).collect()
    };
    let fused = |j: usize| move |dist: usize| dist >= j && (dist - j) % 3 == 0 && dist > 0;
    let make = |name: &'static str, adjacency: Vec<Vec<u8>>| {
        let blocks = adjacency.iter().map(|row| (0..v).filter(|&y| row[y] == 1).collect()).collect();
        let design = IncidenceStructure::new(v, blocks).expect("neighbourhoods are sets");
        FusedGraph { name, adjacency, design }
    };
    Ok([
        make("A1", graph(&fused(1))),
        make("A2", graph(&fused(2))),
        make("A3+I", graph(&|dist| dist == 0 || fused(3)(dist))),
    ])
}

/// Exact `A^3`.
pub fn cube(a: &[Vec<u8>]) -> Vec<Vec<i64>> {
    let v = a.len();
    let mul = |x: &[Vec<i64>], y: &[Vec<i64>]| -> Vec<Vec<i64>> {
        (0..v).map(|i| (0..v).map(|j| (0..v).map(|t| x[i][t] * y[t][j]).sum()).collect()).collect()
    };
    let a: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|&e| i64::from(e)).collect()).collect();
    mul(&mul(&a, &a), &a)
}

/// Returns `(alpha, beta)` when `A^3 = beta A + alpha (J - A)`.
pub fn cube_identity(a: &[Vec<u8>]) -> Option<(i64, i64)> {
    let c = cube(a);
    let (mut alpha, mut beta) = (None, None);
    for (x, row) in c.iter().enumerate() {
        for (y, &value) in row.iter().enumerate() {
            let slot = if a[x][y] == 1 { &mut beta } else { &mut alpha };
            match *slot {
                None => *slot = Some(value),
                Some(prev) if prev != value => return None,
                _ => {}
            }
        }
    }
    Some((alpha?, beta?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::verify_pgd;
    use crate::iso::is_isomorphic;

    #[test]
    fn cube_identities_and_parameters() {
        let graphs = hamming_fusion(1).unwrap();
        let expected = [(6, 15, 6), (60, 69, 12), (24, 33, 9)];
        for (g, (alpha, beta, k)) in graphs.iter().zip(expected) {
            assert_eq!(cube_identity(&g.adjacency), Some((alpha, beta)), "{}", g.name);
            let p = verify_pgd(&g.design).unwrap();
            assert_eq!((p.v, p.b, p.k, p.alpha as i64, p.beta as i64), (27, 27, k, alpha, beta));
        }
        assert!(hamming_fusion(2).is_err());
    }

    #[test]
    fn fused_designs_are_pairwise_non_isomorphic() {
        let g = hamming_fusion(1).unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(is_isomorphic(&g[i].design, &g[j].design).unwrap().is_none());
            }
        }
    }
}
