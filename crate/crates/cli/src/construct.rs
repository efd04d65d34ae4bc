use anyhow::{anyhow, bail, Context, Result};
use clap::{Subcommand, ValueEnum};
use pgd::constructions::group::{permutation_from_cycles, DEFAULT_SUBSET_LIMIT};
use pgd::constructions::km::DEFAULT_KM_NODES;
use pgd::constructions::srg::{complete_multipartite, hamming_graph, petersen, shrikhande};
use pgd::constructions::{
    adhoc_grid_design, affine_pg, develop, hamming_fusion, kramer_mesner, pair_design_expanded, pgds_search,
    srg_neighborhood_design, symplectic_gq, transversal_design, FiniteGroup,
};
use pgd::IncidenceStructure;

#[derive(Subcommand)]
pub enum Kind {
    /// Transversal design TD_lambda(k, u), groups are residues mod k.
    Td {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        u: usize,
        #[arg(long, default_value_t = 1)]
        lambda: usize,
    },
    /// Development of a difference set in a finite group.
    ///
    /// Groups: zN, dN (order 2N), q8, a4, and products such as z4xz3.
    /// Without --subset, the least PGDS of size --k is developed.
    Pgds {
        #[arg(long)]
        group: String,
        /// Comma-separated element labels or indices.
        #[arg(long)]
        subset: Option<String>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Neighbourhood design of a strongly regular graph.
    Srg {
        #[arg(long, value_enum)]
        graph: Graph,
        /// Parameters: parts,size for multipartite; d,q for hamming.
        #[arg(long, value_delimiter = ',')]
        params: Vec<usize>,
    },
    /// Kramer-Mesner orbit design; prints the first proper solution, if any.
    Km {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: u64,
        /// Generator in 1-indexed cycle notation, e.g. "(1 2 3)(4 5)"; repeatable.
        #[arg(long = "gen")]
        generators: Vec<String>,
    },
    /// Partial geometry from l parallel classes of AG(2, q).
    Affine {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        l: usize,
    },
    /// Generalized quadrangle W(q).
    Symplectic {
        #[arg(long)]
        q: usize,
    },
    /// One of the three fused graphs of H(3, 3).
    Hamming {
        #[arg(long, value_enum)]
        graph: Fused,
    },
    /// Pair design of order v with every point doubled.
    Pairs {
        #[arg(long)]
        v: usize,
    },
    /// Two-group design on 2m points.
    Grid {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Graph {
    Multipartite,
    Shrikhande,
    Hamming,
    Petersen,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Fused {
    A1,
    A2,
    A3i,
}

fn parse_group(name: &str) -> Result<FiniteGroup> {
    let factors: Vec<&str> = name.split('x').collect();
    let mut groups = factors.iter().map(|f| {
        let f = f.trim().to_lowercase();
        let size = |s: &str| s.parse::<usize>().with_context(|| format!("bad group {f:?}"));
        match f.as_str() {
            "q8" => Ok(FiniteGroup::quaternion()),
            "a4" => Ok(FiniteGroup::alternating4()),
            _ if f.starts_with('z') => Ok(FiniteGroup::cyclic(size(&f[1..])?)),
            _ if f.starts_with('d') => Ok(FiniteGroup::dihedral(size(&f[1..])?)),
            _ => bail!("unknown group {f:?}"),
        }
    });
    let first = groups.next().ok_or_else(|| anyhow!("empty group name"))??;
    groups.try_fold(first, |acc, g| Ok(FiniteGroup::direct_product(&acc, &g?)))
}

fn parse_subset(g: &FiniteGroup, s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            g.index_of(t)
                .or_else(|| t.parse::<usize>().ok().filter(|&i| i < g.order()))
                .ok_or_else(|| anyhow!("{t:?} is not an element of {}", g.name()))
        })
        .collect()
}

fn parse_cycles(v: usize, s: &str) -> Result<Vec<usize>> {
    let mut cycles = Vec::new();
    for part in s.split(')').map(|p| p.trim().trim_start_matches('(')).filter(|p| !p.is_empty()) {
        let cycle = part
            .split(|c: char| c == ' ' || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().with_context(|| format!("bad point {t:?} in {s:?}")))
            .collect::<Result<Vec<_>>>()?;
        if cycle.iter().any(|&p| p == 0 || p > v) {
            bail!("cycle {part:?} leaves the points 1..={v}");
        }
        cycles.push(cycle);
    }
    let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
    Ok(permutation_from_cycles(v, &refs))
}

impl Kind {
    pub fn build(&self) -> Result<IncidenceStructure> {
        Ok(match self {
            Kind::Td { k, u, lambda } => transversal_design(*k, *u, *lambda)?,
            Kind::Pgds { group, subset, k } => {
                let g = parse_group(group)?;
                let s = match (subset, k) {
                    (Some(s), _) => parse_subset(&g, s)?,
                    (None, Some(k)) => pgds_search(&g, *k, DEFAULT_SUBSET_LIMIT)?
                        .into_iter()
                        .next()
                        .ok_or_else(|| anyhow!("{} has no PGDS of size {k}", g.name()))?,
                    (None, None) => bail!("pass --subset or --k"),
                };
                develop(&g, &s)?
            }
            Kind::Srg { graph, params } => {
                let adj = match (graph, params.as_slice()) {
                    (Graph::Multipartite, [c, m]) => complete_multipartite(*c, *m),
                    (Graph::Hamming, [d, q]) => hamming_graph(*d, *q),
                    (Graph::Shrikhande, []) => shrikhande(),
                    (Graph::Petersen, []) => petersen(),
                    _ => bail!("wrong --params for this graph"),
                };
                srg_neighborhood_design(&adj)?
            }
            Kind::Km { v, k, r, generators } => {
                let gens = generators.iter().map(|s| parse_cycles(*v, s)).collect::<Result<Vec<_>>>()?;
                let mut found = kramer_mesner(&gens, *v, *k, *r, DEFAULT_KM_NODES)?;
                // proper solutions first, otherwise in solver order
                found.sort_by_key(|(_, _, p)| !p.is_proper());
                let (z, d, p) = found.into_iter().next().ok_or_else(|| anyhow!("no orbit solution is a PGD"))?;
                eprintln!("orbit multiplicities {z:?}: {p}");
                d
            }
            Kind::Affine { q, l } => affine_pg(*q, *l)?,
            Kind::Symplectic { q } => symplectic_gq(*q)?,
            Kind::Hamming { graph } => {
                let [a1, a2, a3] = hamming_fusion(1)?;
                match graph {
                    Fused::A1 => a1.design,
                    Fused::A2 => a2.design,
                    Fused::A3i => a3.design,
                }
            }
            Kind::Pairs { v } => pair_design_expanded(*v)?,
            Kind::Grid { m } => adhoc_grid_design(*m)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_and_subsets() {
        let g = parse_group("z4xz3").unwrap();
        assert_eq!(g.order(), 12);
        let q = parse_group("q8").unwrap();
        assert_eq!(parse_subset(&q, "-1,i,j,k").unwrap(), vec![4, 1, 2, 3]);
        assert!(parse_subset(&q, "x").is_err());
        assert!(parse_group("s3").is_err());
    }

    #[test]
    fn cycles() {
        assert_eq!(parse_cycles(6, "(1 2 3 4 5 6)").unwrap(), vec![1, 2, 3, 4, 5, 0]);
        assert_eq!(parse_cycles(4, "(1,2)(3 4)").unwrap(), vec![1, 0, 3, 2]);
        assert!(parse_cycles(3, "(1 4)").is_err());
    }
}
