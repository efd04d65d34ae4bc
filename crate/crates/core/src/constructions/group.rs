//! Finite groups as Cayley tables, integer group rings, and partial geometric
//! difference sets and families.

use crate::incidence::IncidenceStructure;
use rayon::prelude::*;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("Cayley table is not square or has an entry out of range")]
    Shape,
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("permutation set is not closed under composition")]
    NotClosed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(name: &str, rows: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self, GroupError> {
        let v = rows.len();
        if v == 0 || rows.iter().any(|r| r.len() != v || r.iter().any(|&x| x >= v)) || labels.len() != v {
            return Err(GroupError::Shape);
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| table[a * v + b];
        let identity = (0..v)
            .find(|&e| (0..v).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(v);
        for x in 0..v {
            let y = (0..v)
                .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
                .ok_or(GroupError::NoInverse(x))?;
            inverse.push(y);
        }
        for a in 0..v {
            for b in 0..v {
                for c in 0..v {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Self { name: name.to_string(), order: v, table, identity, inverse, labels })
    }

    /// Group of permutations listed in the given order, composed as `(p*q)(x) = p[q[x]]`.
    pub fn from_permutations(name: &str, perms: &[Vec<usize>]) -> Result<Self, GroupError> {
        let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p);
        let mut rows = Vec::with_capacity(perms.len());
        for p in perms {
            let mut row = Vec::with_capacity(perms.len());
            for q in perms {
                let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                row.push(index(&pq).ok_or(GroupError::NotClosed)?);
            }
            rows.push(row);
        }
        let labels = perms.iter().map(|p| cycle_label(p)).collect();
        Self::from_table(name, rows, labels)
    }

    pub fn cyclic(m: usize) -> Self {
        let rows = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        let labels = (0..m).map(|a| a.to_string()).collect();
        Self::from_table(&format!("Z{m}"), rows, labels).expect("cyclic group table")
    }

    /// Element `(g, h)` gets index `g * |H| + h`.
    pub fn direct_product(g: &Self, h: &Self) -> Self {
        let (a, b) = (g.order, h.order);
        let rows = (0..a * b)
            .map(|x| (0..a * b).map(|y| g.mul(x / b, y / b) * b + h.mul(x % b, y % b)).collect())
            .collect();
        let labels = (0..a * b).map(|x| format!("({},{})", g.labels[x / b], h.labels[x % b])).collect();
        Self::from_table(&format!("{}x{}", g.name, h.name), rows, labels).expect("product table")
    }

    /// Elements in the order 1, i, j, k, -1, -i, -j, -k.
    pub fn quaternion() -> Self {
        // unit products among 1, i, j, k as (sign, unit)
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let rows = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (s, u) = UNIT[x % 4][y % 4];
                        let neg = s ^ (x >= 4) ^ (y >= 4);
                        u + if neg { 4 } else { 0 }
                    })
                    .collect()
            })
            .collect();
        let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"].iter().map(|s| s.to_string()).collect();
        Self::from_table("Q8", rows, labels).expect("quaternion table")
    }

    /// The even permutations of {0,1,2,3}, in an order under which the
    /// development of the first example subset has circulant concurrence.
    pub fn alternating4() -> Self {
        Self::from_permutations("A4", &a4_elements()).expect("A4 table")
    }

    /// Elements r^i s^e with index `i + m * e`.
    pub fn dihedral(m: usize) -> Self {
        let rows = (0..2 * m)
            .map(|x| {
                let (a, e) = (x % m, x / m);
                (0..2 * m)
                    .map(|y| {
                        let (b, f) = (y % m, y / m);
                        let rot = if e == 0 { (a + b) % m } else { (a + m - b) % m };
                        rot + m * ((e + f) % 2)
                    })
                    .collect()
            })
            .collect();
        let labels = (0..2 * m).map(|x| format!("r{}{}", x % m, if x >= m { "s" } else { "" })).collect();
        Self::from_table(&format!("D{m}"), rows, labels).expect("dihedral table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Left translate `gS`, sorted.
    pub fn translate(&self, g: usize, s: &[usize]) -> Vec<usize> {
        let mut t: Vec<usize> = s.iter().map(|&x| self.mul(g, x)).collect();
        t.sort_unstable();
        t
    }

    pub fn simple_quantity(&self, s: &[usize]) -> GroupRingElement {
        let mut c = vec![0; self.order];
        for &x in s {
            c[x] += 1;
        }
        GroupRingElement(c)
    }

    pub fn ring_mul(&self, a: &GroupRingElement, b: &GroupRingElement) -> GroupRingElement {
        let mut c = vec![0i64; self.order];
        for (x, &ax) in a.0.iter().enumerate().filter(|(_, &ax)| ax != 0) {
            for (y, &by) in b.0.iter().enumerate().filter(|(_, &by)| by != 0) {
                c[self.mul(x, y)] += ax * by;
            }
        }
        GroupRingElement(c)
    }

    /// The image of `a` under g -> g^{-1}.
    pub fn ring_inverse(&self, a: &GroupRingElement) -> GroupRingElement {
        let mut c = vec![0i64; self.order];
        for (x, &ax) in a.0.iter().enumerate() {
            c[self.inv(x)] += ax;
        }
        GroupRingElement(c)
    }
}

/// A4 as image tuples on {0,1,2,3}.
pub fn a4_elements() -> Vec<Vec<usize>> {
    [
        [0, 1, 2, 3],
        [1, 0, 3, 2],
        [2, 0, 1, 3],
        [3, 0, 2, 1],
        [0, 2, 3, 1],
        [1, 2, 0, 3],
        [2, 1, 3, 0],
        [3, 1, 0, 2],
        [0, 3, 1, 2],
        [1, 3, 2, 0],
        [2, 3, 0, 1],
        [3, 2, 1, 0],
    ]
    .iter()
    .map(|p| p.to_vec())
    .collect()
}

/// Image tuple on `degree` points of a product of disjoint cycles written with 1-indexed points.
pub fn permutation_from_cycles(degree: usize, cycles: &[&[usize]]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for cycle in cycles {
        for (i, &a) in cycle.iter().enumerate() {
            p[a - 1] = cycle[(i + 1) % cycle.len()] - 1;
        }
    }
    p
}

fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "(1)".to_string()
    } else {
        out
    }
}

/// Integer coefficient per group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement(pub Vec<i64>);

impl GroupRingElement {
    pub fn coefficient(&self, g: usize) -> i64 {
        self.0[g]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotPgds {
    #[error("subset size must lie in [2, |G|]")]
    Size,
    #[error("subset has a repeated or out-of-range element")]
    BadSubset,
    #[error("subset is the whole group, so there are no antiflags")]
    WholeGroup,
    #[error("cube coefficients are not constant on the subset")]
    FlagValues,
    #[error("cube coefficients are not constant off the subset")]
    AntiflagValues,
    #[error("beta - alpha = {0} is not positive")]
    NonPositiveN(i64),
    #[error("k(v-k) is not divisible by beta - alpha")]
    Divisibility,
    #[error("lifted subset has parameters {got:?}, expected {expected:?}")]
    LiftMismatch { got: (u64, u64), expected: (u64, u64) },
}

/// Number of pairs `(s, t)` in `S x S` with `g = s t^{-1}`.
pub fn delta(g: &FiniteGroup, s: &[usize], x: usize) -> u64 {
    let mut count = 0;
    for &a in s {
        for &b in s {
            if g.mul(a, g.inv(b)) == x {
                count += 1;
            }
        }
    }
    count
}

fn check_subset(g: &FiniteGroup, s: &[usize]) -> Result<(), NotPgds> {
    let set: BTreeSet<usize> = s.iter().copied().collect();
    if set.len() != s.len() || s.iter().any(|&x| x >= g.order()) {
        return Err(NotPgds::BadSubset);
    }
    if s.len() < 2 || s.len() > g.order() {
        return Err(NotPgds::Size);
    }
    Ok(())
}

/// Splits coefficients of a group-ring element into a flag value on `s` and an antiflag value off it.
fn two_values(coeffs: &[i64], s: &[usize]) -> Result<(i64, i64), NotPgds> {
    let on: BTreeSet<i64> = s.iter().map(|&x| coeffs[x]).collect();
    let off: BTreeSet<i64> = (0..coeffs.len()).filter(|x| !s.contains(x)).map(|x| coeffs[x]).collect();
    if off.is_empty() {
        return Err(NotPgds::WholeGroup);
    }
    if on.len() != 1 {
        return Err(NotPgds::FlagValues);
    }
    if off.len() != 1 {
        return Err(NotPgds::AntiflagValues);
    }
    let beta = *on.iter().next().unwrap();
    let alpha = *off.iter().next().unwrap();
    if beta <= alpha {
        return Err(NotPgds::NonPositiveN(beta - alpha));
    }
    Ok((alpha, beta))
}

/// Returns `(alpha, beta)` when `S S^{-1} S = (beta - alpha) S + alpha G`.
pub fn is_pgds(g: &FiniteGroup, s: &[usize]) -> Result<(u64, u64), NotPgds> {
    check_subset(g, s)?;
    let q = g.simple_quantity(s);
    let cube = g.ring_mul(&g.ring_mul(&q, &g.ring_inverse(&q)), &q);
    let (alpha, beta) = two_values(&cube.0, s)?;
    let (k, v) = (s.len() as i64, g.order() as i64);
    if (k * (v - k)) % (beta - alpha) != 0 {
        return Err(NotPgds::Divisibility);
    }
    Ok((alpha as u64, beta as u64))
}

/// Blocks are the left translates `gS` over all `g`.
pub fn develop(g: &FiniteGroup, s: &[usize]) -> Result<IncidenceStructure, NotPgds> {
    is_pgds(g, s)?;
    Ok(translates(g, &[s.to_vec()]))
}

fn translates(g: &FiniteGroup, family: &[Vec<usize>]) -> IncidenceStructure {
    let blocks = family
        .iter()
        .flat_map(|s| (0..g.order()).map(move |x| g.translate(x, s)))
        .collect();
    IncidenceStructure::new(g.order(), blocks).expect("translates are valid blocks")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotPgdf {
    #[error("empty family")]
    Empty,
    #[error("member {0} is not a valid subset")]
    BadMember(usize),
    #[error("members have different sizes or repeat")]
    Shape,
    #[error("member {member} fails the difference condition: {reason}")]
    Condition { member: usize, reason: NotPgds },
    #[error("members disagree on (alpha, beta)")]
    Inconsistent,
}

/// Checks the family condition and develops every member.
pub fn develop_family(g: &FiniteGroup, family: &[Vec<usize>]) -> Result<IncidenceStructure, NotPgdf> {
    if family.is_empty() {
        return Err(NotPgdf::Empty);
    }
    let k = family[0].len();
    let distinct: BTreeSet<Vec<usize>> = family
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s
        })
        .collect();
    if family.iter().any(|s| s.len() != k) || distinct.len() != family.len() {
        return Err(NotPgdf::Shape);
    }
    let v = g.order();
    let mut delta_sum = vec![0i64; v];
    for (i, s) in family.iter().enumerate() {
        check_subset(g, s).map_err(|_| NotPgdf::BadMember(i))?;
        for &a in s {
            for &b in s {
                delta_sum[g.mul(a, g.inv(b))] += 1;
            }
        }
    }
    let mut params = None;
    for (i, s) in family.iter().enumerate() {
        let coeffs: Vec<i64> = (0..v).map(|x| s.iter().map(|&y| delta_sum[g.mul(x, g.inv(y))]).sum()).collect();
        let ab = two_values(&coeffs, s).map_err(|reason| NotPgdf::Condition { member: i, reason })?;
        if params.is_some_and(|p| p != ab) {
            return Err(NotPgdf::Inconsistent);
        }
        params = Some(ab);
    }
    Ok(translates(g, family))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{subsets} subsets exceed the limit of {limit}")]
pub struct SubsetBudgetExhausted {
    pub subsets: u128,
    pub limit: u128,
}

pub const DEFAULT_SUBSET_LIMIT: u128 = 1_000_000;

/// All PGDS of size `k`, one per left-translation class, each the least translate.
pub fn pgds_search(g: &FiniteGroup, k: usize, limit: u128) -> Result<Vec<Vec<usize>>, SubsetBudgetExhausted> {
    let v = g.order();
    let total = binomial(v as u128, k as u128);
    if total > limit {
        return Err(SubsetBudgetExhausted { subsets: total, limit });
    }
    let mut found: Vec<Vec<usize>> = combinations(v, k)
        .into_par_iter()
        .filter(|s| {
            (0..v).all(|x| g.translate(x, s) >= *s) && is_pgds(g, s).is_ok()
        })
        .collect();
    found.sort();
    Ok(found)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

pub(crate) fn combinations(v: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > v {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] < v - k + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// `(G x Z_m, S x Z_m)`, checked to be a PGDS with parameters `(m^2 alpha, m^2 beta)`.
pub fn direct_product_lift(g: &FiniteGroup, s: &[usize], m: usize) -> Result<(FiniteGroup, Vec<usize>), NotPgds> {
    let (alpha, beta) = is_pgds(g, s)?;
    let h = FiniteGroup::direct_product(g, &FiniteGroup::cyclic(m));
    let mut r: Vec<usize> = s.iter().flat_map(|&x| (0..m).map(move |y| x * m + y)).collect();
    r.sort_unstable();
    let got = is_pgds(&h, &r)?;
    let m2 = (m * m) as u64;
    let expected = (m2 * alpha, m2 * beta);
    if got != expected {
        return Err(NotPgds::LiftMismatch { got, expected });
    }
    Ok((h, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::verify_pgd;
    use crate::incidence::concurrence;

    fn q8_subset(g: &FiniteGroup) -> Vec<usize> {
        ["-1", "i", "j", "k"].iter().map(|l| g.index_of(l).unwrap()).collect()
    }

    #[test]
    fn builtins_are_groups() {
        assert_eq!(FiniteGroup::cyclic(7).order(), 7);
        assert_eq!(FiniteGroup::quaternion().order(), 8);
        assert_eq!(FiniteGroup::alternating4().order(), 12);
        assert_eq!(FiniteGroup::dihedral(5).order(), 10);
        let p = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4));
        assert_eq!(p.mul(5, 7), ((1 + 1) % 2) * 4 + (1 + 3) % 4);
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion();
        let (i, j, k, m1) = (1, 2, 3, 4);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), k + 4);
        assert_eq!(q.mul(i, i), m1);
        assert_eq!(q.mul(q.mul(i, j), k), m1);
    }

    #[test]
    fn delta_examples() {
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(delta(&z4, &[0, 1], 1), 1);
        assert_eq!(delta(&z4, &[0, 1], 0), 2);
        let q = FiniteGroup::quaternion();
        let s = q8_subset(&q);
        // -1 arises as s t^{-1} exactly from (i,-i)... pairs with s = -t
        let by_hand = s.iter().flat_map(|&a| s.iter().map(move |&b| (a, b))).filter(|&(a, b)| q.mul(a, q.inv(b)) == 4).count();
        assert_eq!(delta(&q, &s, 4), by_hand as u64);
    }

    #[test]
    fn q8_and_z4_pgds() {
        let q = FiniteGroup::quaternion();
        let s = q8_subset(&q);
        assert_eq!(is_pgds(&q, &s), Ok((6, 10)));
        let d = develop(&q, &s).unwrap();
        let p = verify_pgd(&d).unwrap();
        assert_eq!((p.v, p.b, p.k, p.r, p.alpha, p.beta), (8, 8, 4, 4, 6, 10));
        assert_eq!(concurrence(&d).unwrap().circulant_first_row(), Some(vec![4, 2, 2, 2, 0, 2, 2, 2]));
        assert_eq!(is_pgds(&FiniteGroup::cyclic(4), &[0, 1]), Ok((1, 3)));
        assert_eq!(is_pgds(&FiniteGroup::cyclic(4), &[0, 1, 2, 3]), Err(NotPgds::WholeGroup));
    }

    #[test]
    fn z8_development() {
        let d = develop(&FiniteGroup::cyclic(8), &[0, 1, 4, 5]).unwrap();
        let p = verify_pgd(&d).unwrap();
        assert_eq!((p.alpha, p.beta), (4, 12));
        assert_eq!(concurrence(&d).unwrap().circulant_first_row(), Some(vec![4, 2, 0, 2, 4, 2, 0, 2]));
    }

    #[test]
    fn a4_subsets() {
        let a4 = FiniteGroup::alternating4();
        let elements = a4_elements();
        let idx = |cycles: &[&[usize]]| {
            let p = permutation_from_cycles(4, cycles);
            elements.iter().position(|q| *q == p).unwrap()
        };
        let s1 = vec![idx(&[]), idx(&[&[2, 3, 4]]), idx(&[&[2, 4, 3]]), idx(&[&[1, 2], &[3, 4]]), idx(&[&[1, 2, 3]]), idx(&[&[1, 2, 4]])];
        let s2 = vec![idx(&[]), idx(&[&[2, 3, 4]]), idx(&[&[2, 4, 3]]), idx(&[&[1, 2], &[3, 4]]), idx(&[&[1, 3, 2]]), idx(&[&[1, 4, 2]])];
        assert_eq!(is_pgds(&a4, &s1), Ok((12, 24)));
        assert_eq!(is_pgds(&a4, &s2), Ok((12, 24)));
        let c1 = concurrence(&develop(&a4, &s1).unwrap()).unwrap();
        assert_eq!(c1.circulant_first_row(), Some(vec![6, 2, 2, 2, 6, 2, 2, 2, 6, 2, 2, 2]));
        assert_eq!(a4.label(idx(&[&[1, 2], &[3, 4]])), "(12)(34)");
    }

    #[test]
    fn lift_and_family() {
        let z4 = FiniteGroup::cyclic(4);
        let (h, r) = direct_product_lift(&z4, &[0, 1], 3).unwrap();
        assert_eq!(is_pgds(&h, &r), Ok((9, 27)));
        let (h1, r1) = direct_product_lift(&z4, &[0, 1], 1).unwrap();
        assert_eq!((h1.order(), r1), (4, vec![0, 1]));
        let single = develop_family(&z4, &[vec![0, 1]]).unwrap();
        assert_eq!(single, develop(&z4, &[0, 1]).unwrap());
        let z6 = FiniteGroup::cyclic(6);
        assert!(matches!(develop_family(&z6, &[vec![0, 1, 2], vec![0, 1, 3]]), Err(NotPgdf::Condition { .. })));
    }

    #[test]
    fn search_finds_known_sets() {
        let q = FiniteGroup::quaternion();
        let found = pgds_search(&q, 4, DEFAULT_SUBSET_LIMIT).unwrap();
        let s = q8_subset(&q);
        let least = (0..8).map(|x| q.translate(x, &s)).min().unwrap();
        assert!(found.contains(&least));
        assert!(pgds_search(&FiniteGroup::cyclic(4), 2, DEFAULT_SUBSET_LIMIT).unwrap().contains(&vec![0, 1]));
        assert!(pgds_search(&FiniteGroup::cyclic(16), 8, 100).is_err());
    }

    #[test]
    fn z5_pairs_match_brute_force() {
        let z5 = FiniteGroup::cyclic(5);
        let found = pgds_search(&z5, 2, DEFAULT_SUBSET_LIMIT).unwrap();
        // oracle: develop every least translate by hand and run verify_pgd
        let mut expected = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                let s = vec![a, b];
                let blocks = (0..5).map(|x| z5.translate(x, &s)).collect();
                let d = IncidenceStructure::new(5, blocks).unwrap();
                if (0..5).all(|x| z5.translate(x, &s) >= s) && verify_pgd(&d).is_ok() {
                    expected.push(s);
                }
            }
        }
        assert_eq!(found, expected);
    }
}
