//! PGDs with a prescribed automorphism group via orbits on k-subsets.

use super::group::combinations;
use crate::algebra::{verify_pgd, PgdParams};
use crate::incidence::IncidenceStructure;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KmError {
    #[error("generator {0} is not a permutation of the points")]
    BadGenerator(usize),
    #[error("need v > k >= 1")]
    BadSize,
    #[error("solution search exceeded {0} nodes")]
    BudgetExhausted(u64),
}

pub const DEFAULT_KM_NODES: u64 = 10_000_000;

/// Orbits of a permutation group on the k-subsets of `[0, v)`.
#[derive(Debug, Clone)]
pub struct OrbitSystem {
    v: usize,
    k: usize,
    orbits: Vec<Vec<Vec<usize>>>,
    l: Vec<Vec<u64>>,
}

impl OrbitSystem {
    /// Orbits are listed by their lexicographically least member, each orbit sorted.
    pub fn new(generators: &[Vec<usize>], v: usize, k: usize) -> Result<Self, KmError> {
        if k == 0 || k >= v {
            return Err(KmError::BadSize);
        }
        for (i, g) in generators.iter().enumerate() {
            let image: BTreeSet<usize> = g.iter().copied().collect();
            if g.len() != v || image.len() != v || image.iter().any(|&x| x >= v) {
                return Err(KmError::BadGenerator(i));
            }
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut orbits = Vec::new();
        for start in combinations(v, k) {
            if seen.contains(&start) {
                continue;
            }
            let mut orbit = BTreeSet::from([start.clone()]);
            let mut frontier = vec![start];
            while let Some(s) = frontier.pop() {
                for g in generators {
                    let mut t: Vec<usize> = s.iter().map(|&x| g[x]).collect();
                    t.sort_unstable();
                    if orbit.insert(t.clone()) {
                        frontier.push(t);
                    }
                }
            }
            seen.extend(orbit.iter().cloned());
            orbits.push(orbit.into_iter().collect::<Vec<_>>());
        }
        let l = orbits
            .iter()
            .map(|o: &Vec<Vec<usize>>| (0..v).map(|t| o.iter().filter(|a| a.contains(&t)).count() as u64).collect())
            .collect();
        Ok(Self { v, k, orbits, l })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn orbits(&self) -> &[Vec<Vec<usize>>] {
        &self.orbits
    }

    /// `L[i][t]` = number of members of orbit i containing point t.
    pub fn l_matrix(&self) -> &[Vec<u64>] {
        &self.l
    }

    /// The matrix `M_h` for the orbits in `support`, using the least member of orbit `support[h]`
    /// as representative: entry (u, t) sums `|A ∩ Y|` over `A` in orbit `support[u]` containing t.
    pub fn m_matrix(&self, support: &[usize], h: usize) -> Vec<Vec<u64>> {
        let y = &self.orbits[support[h]][0];
        support
            .iter()
            .map(|&i| {
                (0..self.v)
                    .map(|t| {
                        self.orbits[i]
                            .iter()
                            .filter(|a| a.contains(&t))
                            .map(|a| a.iter().filter(|p| y.contains(p)).count() as u64)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// Block multiset with orbit i repeated `z[i]` times.
    pub fn assemble(&self, z: &[u64]) -> IncidenceStructure {
        let blocks = self
            .orbits
            .iter()
            .zip(z)
            .flat_map(|(o, &zi)| (0..zi).flat_map(move |_| o.iter().cloned()))
            .collect();
        IncidenceStructure::new(self.v, blocks).expect("orbit members are k-subsets")
    }

    /// All nonnegative integer z with each z_i <= r and zL = r·1.
    pub fn solutions(&self, r: u64, max_nodes: u64) -> Result<Vec<Vec<u64>>, KmError> {
        let mut out = Vec::new();
        let mut z = vec![0u64; self.orbits.len()];
        let mut load = vec![0u64; self.v];
        let mut nodes = 0u64;
        self.extend(0, r, &mut z, &mut load, &mut nodes, max_nodes, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        i: usize,
        r: u64,
        z: &mut Vec<u64>,
        load: &mut Vec<u64>,
        nodes: &mut u64,
        max_nodes: u64,
        out: &mut Vec<Vec<u64>>,
    ) -> Result<(), KmError> {
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(KmError::BudgetExhausted(max_nodes));
        }
        if i == self.orbits.len() {
            if load.iter().all(|&x| x == r) {
                out.push(z.clone());
            }
            return Ok(());
        }
        // a point no later orbit touches must already be full
        let later_cover = |t: usize| self.l[i..].iter().any(|row| row[t] > 0);
        if (0..self.v).any(|t| load[t] < r && !later_cover(t)) {
            return Ok(());
        }
        let row = &self.l[i];
        let mut count = 0;
        loop {
            self.extend(i + 1, r, z, load, nodes, max_nodes, out)?;
            if count == r || (0..self.v).any(|t| load[t] + row[t] > r) {
                break;
            }
            count += 1;
            z[i] = count;
            for t in 0..self.v {
                load[t] += row[t];
            }
        }
        for t in 0..self.v {
            load[t] -= row[t] * count;
        }
        z[i] = 0;
        Ok(())
    }
}

/// Every solution of zL = r·1 whose assembled design verifies as a PGD.
pub fn kramer_mesner(
    generators: &[Vec<usize>],
    v: usize,
    k: usize,
    r: u64,
    max_nodes: u64,
) -> Result<Vec<(Vec<u64>, IncidenceStructure, PgdParams)>, KmError> {
    let system = OrbitSystem::new(generators, v, k)?;
    let solutions = system.solutions(r, max_nodes)?;
    Ok(solutions
        .into_par_iter()
        .filter_map(|z| {
            let d = system.assemble(&z);
            verify_pgd(&d).ok().map(|p| (z, d, p))
        })
        .collect())
}

/// Condition (ii) through the `M_h` matrices: returns `(alpha, beta)` when every
/// `w M_h` is two-valued with the same constants.
pub fn m_condition(system: &OrbitSystem, z: &[u64]) -> Option<(u64, u64)> {
    let support: Vec<usize> = (0..z.len()).filter(|&i| z[i] > 0).collect();
    let w: Vec<u64> = support.iter().map(|&i| z[i]).collect();
    let mut values: BTreeMap<bool, BTreeSet<u64>> = BTreeMap::new();
    for h in 0..support.len() {
        let m = system.m_matrix(&support, h);
        let y = &system.orbits[support[h]][0];
        for t in 0..system.v {
            let s: u64 = w.iter().zip(&m).map(|(wi, row)| wi * row[t]).sum();
            values.entry(y.contains(&t)).or_default().insert(s);
        }
    }
    let one = |set: Option<&BTreeSet<u64>>| match set {
        Some(s) if s.len() == 1 => s.iter().next().copied(),
        _ => None,
    };
    Some((one(values.get(&false))?, one(values.get(&true))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::concurrence;

    fn shift(v: usize, m: usize) -> Vec<usize> {
        (0..v).map(|x| if x < m { (x + 1) % m } else { x }).collect()
    }

    #[test]
    fn z6_orbits_and_design() {
        let sys = OrbitSystem::new(&[shift(6, 6)], 6, 3).unwrap();
        assert_eq!(sys.orbits().len(), 4);
        assert_eq!(sys.orbits()[3], vec![vec![0, 2, 4], vec![1, 3, 5]]);
        for (row, o) in sys.l_matrix().iter().zip(sys.orbits()) {
            assert_eq!(row.iter().sum::<u64>(), (3 * o.len()) as u64);
        }
        let found = kramer_mesner(&[shift(6, 6)], 6, 3, 4, DEFAULT_KM_NODES).unwrap();
        let (_, d, p) = found.iter().find(|(z, _, _)| *z == vec![1, 0, 0, 1]).unwrap();
        assert_eq!((p.v, p.b, p.k, p.r, p.alpha, p.beta), (6, 8, 3, 4, 4, 8));
        assert_eq!(concurrence(d).unwrap().circulant_first_row(), Some(vec![4, 2, 2, 0, 2, 2]));
    }

    #[test]
    fn z5_example_is_a_two_design() {
        let found = kramer_mesner(&[shift(6, 5)], 6, 3, 5, DEFAULT_KM_NODES).unwrap();
        let (_, _, p) = found.iter().find(|(z, _, _)| *z == vec![1, 0, 0, 1]).unwrap();
        assert_eq!((p.v, p.b, p.k, p.r, p.alpha, p.beta), (6, 10, 3, 5, 6, 9));
    }

    #[test]
    fn trivial_group_gives_complete_pairs() {
        let found = kramer_mesner(&[], 4, 2, 3, DEFAULT_KM_NODES).unwrap();
        assert!(found.iter().any(|(z, _, _)| z.iter().all(|&x| x == 1)));
    }

    #[test]
    fn m_condition_agrees_with_verification() {
        for (gens, k, r) in [(vec![shift(6, 6)], 3, 4), (vec![shift(6, 5)], 3, 5), (vec![shift(6, 6)], 3, 2)] {
            let sys = OrbitSystem::new(&gens, 6, k).unwrap();
            for z in sys.solutions(r, DEFAULT_KM_NODES).unwrap() {
                let direct = verify_pgd(&sys.assemble(&z)).ok().map(|p| (p.alpha, p.beta));
                assert_eq!(m_condition(&sys, &z), direct, "z = {z:?}");
            }
        }
    }

    #[test]
    fn generators_are_automorphisms() {
        let g = shift(6, 6);
        for (_, d, _) in kramer_mesner(&[g.clone()], 6, 3, 4, DEFAULT_KM_NODES).unwrap() {
            assert_eq!(d.relabel(&g), d);
        }
    }
}
