#![allow(dead_code)]

use pgd::constructions::srg::{complete_multipartite, shrikhande};
use pgd::constructions::{
    adhoc_grid_design, affine_pg, develop, pair_design_expanded, srg_neighborhood_design, symplectic_gq,
    transversal_design, FiniteGroup,
};
use pgd::spectra::CirculantRow;
use pgd::{derive_params, tensor_expand, ConcurrenceMatrix, IncidenceStructure};
use std::collections::BTreeSet;

/// Small PGDs from every construction family, with a name for failure messages.
pub fn pgd_pool() -> Vec<(String, IncidenceStructure)> {
    let mut pool = Vec::new();
    for (k, u, l) in [(3, 2, 1), (3, 2, 2), (3, 2, 3), (4, 2, 2), (3, 3, 1), (4, 3, 1), (3, 4, 1), (5, 2, 2), (6, 2, 3)] {
        pool.push((format!("TD_{l}({k},{u})"), transversal_design(k, u, l).unwrap()));
    }
    for (q, l) in [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3)] {
        pool.push((format!("AG({q}) with {l} classes"), affine_pg(q, l).unwrap()));
    }
    pool.push(("W(2)".into(), symplectic_gq(2).unwrap()));
    for v in 3..=6 {
        pool.push((format!("pairs({v})"), pair_design_expanded(v).unwrap()));
    }
    for m in 3..=4 {
        pool.push((format!("grid({m})"), adhoc_grid_design(m).unwrap()));
    }
    let q8 = FiniteGroup::quaternion();
    pool.push(("Q8 development".into(), develop(&q8, &[4, 1, 2, 3]).unwrap()));
    pool.push(("Z8 development".into(), develop(&FiniteGroup::cyclic(8), &[0, 1, 4, 5]).unwrap()));
    pool.push(("K3,3".into(), srg_neighborhood_design(&complete_multipartite(2, 3)).unwrap()));
    pool.push(("Shrikhande".into(), srg_neighborhood_design(&shrikhande()).unwrap()));
    let td = transversal_design(3, 2, 1).unwrap();
    pool.push(("TD_1(3,2) x J_{2,1}".into(), tensor_expand(&td, 2, 1)));
    pool.push(("TD_1(3,2) x J_{1,2}".into(), tensor_expand(&td, 1, 2)));
    pool
}

/// Incidence matrix, points by blocks.
pub fn incidence(d: &IncidenceStructure) -> Vec<Vec<i64>> {
    let mut n = vec![vec![0i64; d.b()]; d.v()];
    for (j, block) in d.blocks().iter().enumerate() {
        for &p in block {
            n[p][j] = 1;
        }
    }
    n
}

pub fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (rows, inner, cols) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..rows).map(|i| (0..cols).map(|j| (0..inner).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

pub fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

/// Float eigenvalues of a symmetric circulant with the given full first row.
pub fn float_eigenvalues(full: &[i64]) -> Vec<f64> {
    let v = full.len();
    (0..v)
        .map(|j| {
            full.iter()
                .enumerate()
                .map(|(i, &c)| c as f64 * (2.0 * std::f64::consts::PI * (i * j) as f64 / v as f64).cos())
                .sum()
        })
        .collect()
}

/// All compressed rows [r, c_1, ..] with nonnegative entries and full row sum `total`.
pub fn rows_with_sum(v: usize, r: u64, total: u64) -> Vec<CirculantRow> {
    let half = v / 2;
    let weight = |i: usize| if 2 * i == v { 1 } else { 2 };
    let mut out = Vec::new();
    let mut c = vec![r];
    fn go(v: usize, half: usize, left: u64, c: &mut Vec<u64>, out: &mut Vec<CirculantRow>, w: &dyn Fn(usize) -> u64) {
        let i = c.len();
        if i > half {
            if left == 0 {
                out.push(CirculantRow::new(v, c.clone()).unwrap());
            }
            return;
        }
        for x in 0..=left / w(i) {
            c.push(x);
            go(v, half, left - x * w(i), c, out, w);
            c.pop();
        }
    }
    if total >= r {
        go(v, half, total - r, &mut c, &mut out, &weight);
    }
    out
}

/// Rows whose float spectrum is [kr, n^σ, 0^…] for a proper parameter set.
pub fn feasible_rows_brute_force(v: usize, k: u64, r_max: u64) -> BTreeSet<CirculantRow> {
    let mut found = BTreeSet::new();
    for r in 1..=r_max {
        for row in rows_with_sum(v, r, k * r) {
            let eig = float_eigenvalues(&row.full());
            let rounded: Vec<i64> = eig.iter().map(|e| e.round() as i64).collect();
            if eig.iter().zip(&rounded).any(|(e, x)| (e - *x as f64).abs() > 1e-6) {
                continue;
            }
            let nonzero: BTreeSet<i64> = rounded[1..].iter().copied().filter(|&e| e != 0).collect();
            let [n] = nonzero.into_iter().collect::<Vec<_>>()[..] else {
                continue;
            };
            if n <= 0 || derive_params(v as u64, k, r, n as u64).is_err() {
                continue;
            }
            found.insert(row);
        }
    }
    found
}

fn k_subsets(v: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << v)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..v).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Every b-multiset of k-subsets whose pair counts equal `target`.
pub fn realizations_brute_force(target: &ConcurrenceMatrix, k: usize, b: usize) -> BTreeSet<IncidenceStructure> {
    let v = target.v();
    let subsets = k_subsets(v, k);
    let mut found = BTreeSet::new();
    let mut pick = vec![0usize; b];
    loop {
        let mut counts = vec![0i64; v * v];
        for &i in &pick {
            for &x in &subsets[i] {
                for &y in &subsets[i] {
                    counts[x * v + y] += 1;
                }
            }
        }
        if (0..v * v).all(|i| counts[i] == target.get(i / v, i % v)) {
            let blocks = pick.iter().map(|&i| subsets[i].clone()).collect();
            found.insert(IncidenceStructure::new(v, blocks).unwrap());
        }
        // next nondecreasing index sequence
        let Some(pos) = (0..b).rev().find(|&j| pick[j] + 1 < subsets.len()) else {
            return found;
        };
        let next = pick[pos] + 1;
        for x in &mut pick[pos..] {
            *x = next;
        }
    }
}
