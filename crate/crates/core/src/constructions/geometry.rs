//! Partial geometries from affine planes and the symplectic generalized quadrangle.

use super::ConstructionError;
use crate::incidence::IncidenceStructure;
use std::collections::BTreeSet;

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// Lines of `l` parallel classes of AG(2, q) on points `x + q*y`.
///
/// Classes are taken in the order: slopes 0, 1, ..., q-1, then vertical.
pub fn affine_pg(q: usize, l: usize) -> Result<IncidenceStructure, ConstructionError> {
    if !is_prime(q) {
        return Err(ConstructionError::InvalidParameters(format!("q = {q} is not prime")));
    }
    if l < 2 || l > q + 1 {
        return Err(ConstructionError::InvalidParameters(format!("need 2 <= l <= q+1, got l = {l}")));
    }
    let mut blocks = Vec::with_capacity(l * q);
    for class in 0..l {
        for c in 0..q {
            let line = if class < q {
                (0..q).map(|x| x + q * ((class * x + c) % q)).collect()
            } else {
                (0..q).map(|y| c + q * y).collect()
            };
            blocks.push(line);
        }
    }
    Ok(IncidenceStructure::new(q * q, blocks).expect("affine lines"))
}

/// Points are the 1-spaces of F_q^4 and lines the totally isotropic 2-spaces of
/// the form x0 y2 + x1 y3 - x2 y0 - x3 y1.
pub fn symplectic_gq(q: usize) -> Result<IncidenceStructure, ConstructionError> {
    if q != 2 && q != 3 {
        return Err(ConstructionError::UnsupportedScale(format!("symplectic construction needs q in {{2, 3}}, got {q}")));
    }
    // normalized representatives: first nonzero coordinate is 1
    let points: Vec<[usize; 4]> = (1..q.pow(4))
        .map(|n| [n / (q * q * q) % q, n / (q * q) % q, n / q % q, n % q])
        .filter(|p| p.iter().find(|&&c| c != 0) == Some(&1))
        .collect();
    let index = |p: &[usize; 4]| points.iter().position(|x| x == p).expect("normalized point");
    let normalize = |mut p: [usize; 4]| {
        let lead = *p.iter().find(|&&c| c != 0).unwrap();
        let inv = (1..q).find(|&i| lead * i % q == 1).unwrap();
        for c in &mut p {
            *c = *c * inv % q;
        }
        p
    };
    let form = |x: &[usize; 4], y: &[usize; 4]| {
        (x[0] * y[2] + x[1] * y[3] + 2 * q * q - x[2] * y[0] - x[3] * y[1]) % q
    };
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if form(a, b) != 0 {
                continue;
            }
            let mut line: BTreeSet<usize> = BTreeSet::new();
            for s in 0..q {
                for t in 0..q {
                    if s == 0 && t == 0 {
                        continue;
                    }
                    let p = [0, 1, 2, 3].map(|j| (s * a[j] + t * b[j]) % q);
                    line.insert(index(&normalize(p)));
                }
            }
            lines.insert(line.into_iter().collect());
        }
    }
    Ok(IncidenceStructure::new(points.len(), lines.into_iter().collect()).expect("isotropic lines"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{classify, verify_pgd, FamilyTag};
    use crate::incidence::concurrence;

    fn params(d: &IncidenceStructure) -> (u64, u64, u64, u64, u64, u64) {
        let p = verify_pgd(d).unwrap();
        (p.v, p.b, p.k, p.r, p.alpha, p.beta)
    }

    #[test]
    fn affine_partial_geometries() {
        let d = affine_pg(3, 3).unwrap();
        assert_eq!(params(&d), (9, 9, 3, 3, 2, 5));
        assert!(classify(&d).contains(&FamilyTag::PartialGeometry { kappa: 3, rho: 3, tau: 2 }));
        assert_eq!(concurrence(&d).unwrap().circulant_first_row(), Some(vec![3, 1, 1, 0, 1, 1, 0, 1, 1]));
        let plane = affine_pg(3, 4).unwrap();
        assert!(classify(&plane).contains(&FamilyTag::TwoDesign { lambda: 1 }));
        let square = affine_pg(2, 2).unwrap();
        assert_eq!(square.blocks(), &[vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
        assert!(classify(&square).contains(&FamilyTag::PartialGeometry { kappa: 2, rho: 2, tau: 1 }));
        for l in 2..=5 {
            let p = verify_pgd(&affine_pg(5, l).unwrap()).unwrap();
            assert_eq!((p.k, p.r, p.beta + 1 - p.r - p.k), (5, l as u64, 0));
            assert_eq!(p.alpha, l as u64 - 1);
        }
        assert!(affine_pg(4, 2).is_err());
        assert!(affine_pg(3, 5).is_err());
    }

    #[test]
    fn symplectic_quadrangles() {
        let d = symplectic_gq(2).unwrap();
        assert_eq!(params(&d), (15, 15, 3, 3, 1, 5));
        assert!(classify(&d).contains(&FamilyTag::PartialGeometry { kappa: 3, rho: 3, tau: 1 }));
        assert_eq!(params(&symplectic_gq(3).unwrap()), (40, 40, 4, 4, 1, 7));
        assert!(symplectic_gq(5).is_err());
    }
}
