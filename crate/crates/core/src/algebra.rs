//! PGD recognition, parameter algebra and family classification.

use crate::incidence::{
    concurrence, ConcurrenceMatrix, IncidenceError, IncidenceStructure, TacticalDefect,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Parameters (v, b, k, r; α, β) of a partial geometric design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PgdParams {
    pub v: u64,
    pub b: u64,
    pub k: u64,
    pub r: u64,
    pub alpha: u64,
    pub beta: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum ParamViolation {
    #[error("beta must exceed alpha")]
    NonPositiveN,
    #[error("vr != bk")]
    Counting,
    #[error("(v-k)alpha + k beta != k^2 r")]
    FlagIdentity,
    #[error("v alpha != k(kr-n) or b alpha != r(kr-n)")]
    AlphaRelation,
    #[error("k+r <= n+alpha+1 <= kr fails")]
    Bounds,
    #[error("sigma = r(v-k)/n is not an integer in [1, v-1]")]
    Sigma,
}

impl PgdParams {
    pub fn new(v: u64, b: u64, k: u64, r: u64, alpha: u64, beta: u64) -> Result<Self, ParamViolation> {
        let p = Self { v, b, k, r, alpha, beta };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<(), ParamViolation> {
        let (v, b, k, r, a, be) = (
            self.v as i128,
            self.b as i128,
            self.k as i128,
            self.r as i128,
            self.alpha as i128,
            self.beta as i128,
        );
        let n = be - a;
        if n <= 0 {
            return Err(ParamViolation::NonPositiveN);
        }
        if v * r != b * k {
            return Err(ParamViolation::Counting);
        }
        if (v - k) * a + k * be != k * k * r {
            return Err(ParamViolation::FlagIdentity);
        }
        if a > 0 {
            if v * a != k * (k * r - n) || b * a != r * (k * r - n) {
                return Err(ParamViolation::AlphaRelation);
            }
            if !(k + r <= n + a + 1 && n + a + 1 <= k * r) {
                return Err(ParamViolation::Bounds);
            }
        }
        let num = r * (v - k);
        if num % n != 0 || num / n < 1 || num / n > v - 1 {
            return Err(ParamViolation::Sigma);
        }
        Ok(())
    }

    pub fn n(&self) -> u64 {
        self.beta - self.alpha
    }

    pub fn sigma(&self) -> u64 {
        self.r * (self.v - self.k) / self.n()
    }

    /// Improper when k < 3, k > v − 3 or α = 0; such designs still verify.
    pub fn is_proper(&self) -> bool {
        self.k >= 3 && self.k + 3 <= self.v && self.alpha > 0
    }

    pub fn dual(&self) -> Self {
        Self { v: self.b, b: self.v, k: self.r, r: self.k, ..*self }
    }

    /// Parameters of the complementary design, or `None` when it is not a PGD
    /// (for instance when v − k or the complementary n would vanish).
    pub fn complement(&self) -> Option<Self> {
        let (v, b, k, r) = (self.v as i128, self.b as i128, self.k as i128, self.r as i128);
        let base = v * b + 3 * k * r - b * k - 2 * v * r;
        let alpha = base - self.beta as i128;
        let beta = base - self.alpha as i128;
        if alpha < 0 || beta < 0 || self.v == self.k {
            return None;
        }
        Self::new(self.v, self.b, self.v - self.k, self.b - self.r, alpha as u64, beta as u64).ok()
    }

    /// Parameters of N ⊗ J_{m,l}.
    pub fn tensor(&self, m: u64, l: u64) -> Self {
        Self {
            v: m * self.v,
            b: l * self.b,
            k: m * self.k,
            r: l * self.r,
            alpha: m * l * self.alpha,
            beta: m * l * self.beta,
        }
    }
}

impl fmt::Display for PgdParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PGD({},{},{},{};{},{})",
            self.v, self.b, self.k, self.r, self.alpha, self.beta
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NotPgd {
    NotTactical(TacticalDefect),
    /// No antiflags exist (every block is the full point set).
    NoAntiflags,
    FlagCountVaries { point: usize, block: usize, value: u64, expected: u64 },
    AntiflagCountVaries { point: usize, block: usize, value: u64, expected: u64 },
    InvariantViolated(ParamViolation),
}

impl fmt::Display for NotPgd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotPgd::NotTactical(d) => write!(f, "not tactical: {d}"),
            NotPgd::NoAntiflags => write!(f, "no antiflags"),
            NotPgd::FlagCountVaries { point, block, value, expected } => write!(
                f,
                "flag (x={point}, B#{block}) has s={value}, other flags have {expected}"
            ),
            NotPgd::AntiflagCountVaries { point, block, value, expected } => write!(
                f,
                "antiflag (x={point}, B#{block}) has s={value}, other antiflags have {expected}"
            ),
            NotPgd::InvariantViolated(v) => write!(f, "parameter invariant fails: {v}"),
        }
    }
}

impl std::error::Error for NotPgd {}

/// Checks the two-valued flag count and returns the full parameter tuple.
pub fn verify_pgd(d: &IncidenceStructure) -> Result<PgdParams, NotPgd> {
    let t = d.tactical_params().map_err(NotPgd::NotTactical)?;
    let c = d.pair_counts();
    let mut beta: Option<u64> = None;
    let mut alpha: Option<u64> = None;
    for (bi, block) in d.blocks().iter().enumerate() {
        for x in 0..d.v() {
            let s: i64 = block.iter().map(|&y| c.get(x, y)).sum();
            let s = s as u64;
            if block.binary_search(&x).is_ok() {
                match beta {
                    None => beta = Some(s),
                    Some(e) if e != s => {
                        return Err(NotPgd::FlagCountVaries { point: x, block: bi, value: s, expected: e })
                    }
                    _ => {}
                }
            } else {
                match alpha {
                    None => alpha = Some(s),
                    Some(e) if e != s => {
                        return Err(NotPgd::AntiflagCountVaries {
                            point: x,
                            block: bi,
                            value: s,
                            expected: e,
                        })
                    }
                    _ => {}
                }
            }
        }
    }
    let (Some(alpha), Some(beta)) = (alpha, beta) else {
        return Err(NotPgd::NoAntiflags);
    };
    PgdParams::new(t.v as u64, t.b as u64, t.k as u64, t.r as u64, alpha, beta)
        .map_err(NotPgd::InvariantViolated)
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum Infeasible {
    #[error("precondition v > k >= 2, r >= 1, n >= 1 fails")]
    Domain,
    #[error("alpha = k(kr-n)/v is not a nonnegative integer")]
    Alpha,
    #[error("b = vr/k is not an integer")]
    BlockCount,
    #[error("sigma = r(v-k)/n is not an integer")]
    Sigma,
    #[error("alpha = 0 (improper)")]
    Improper,
    #[error(transparent)]
    Violation(#[from] ParamViolation),
}

/// Solves the parameter relations for α, β, b and σ from (v, k, r, n).
pub fn derive_params(v: u64, k: u64, r: u64, n: u64) -> Result<PgdParams, Infeasible> {
    derive_params_with(v, k, r, n, false)
}

/// As [`derive_params`], optionally admitting α = 0 (then n = kr).
pub fn derive_params_with(
    v: u64,
    k: u64,
    r: u64,
    n: u64,
    allow_improper: bool,
) -> Result<PgdParams, Infeasible> {
    if !(v > k && k >= 2 && r >= 1 && n >= 1) {
        return Err(Infeasible::Domain);
    }
    let num = k as i128 * (k as i128 * r as i128 - n as i128);
    if num < 0 || num % v as i128 != 0 {
        return Err(Infeasible::Alpha);
    }
    let alpha = (num / v as i128) as u64;
    if (v * r) % k != 0 {
        return Err(Infeasible::BlockCount);
    }
    if (r * (v - k)) % n != 0 {
        return Err(Infeasible::Sigma);
    }
    if alpha == 0 && !allow_improper {
        return Err(Infeasible::Improper);
    }
    Ok(PgdParams::new(v, v * r / k, k, r, alpha, n + alpha)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConcurrenceTypeError {
    #[error("point {point} is not in block {block}")]
    NotAFlag { point: usize, block: usize },
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

/// Multiset of λ_xy over y ∈ B − {x}, sorted descending.
pub fn concurrence_type(
    d: &IncidenceStructure,
    x: usize,
    b: usize,
) -> Result<Vec<i64>, ConcurrenceTypeError> {
    let block = d.block(b)?;
    if block.binary_search(&x).is_err() {
        return Err(ConcurrenceTypeError::NotAFlag { point: x, block: b });
    }
    let c = d.pair_counts();
    let mut t: Vec<i64> = block.iter().filter(|&&y| y != x).map(|&y| c.get(x, y)).collect();
    t.sort_unstable_by(|a, b| b.cmp(a));
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilyTag {
    TwoDesign { lambda: i64 },
    TransversalDesign { lambda: i64, k: usize, u: usize },
    PartialGeometry { kappa: u64, rho: u64, tau: u64 },
    Spbibd { lambda1: i64, lambda2: i64, s: usize, t: usize },
    GenericPgd,
    NotPgd,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::TwoDesign { lambda } => write!(f, "2-design(λ={lambda})"),
            FamilyTag::TransversalDesign { lambda, k, u } => write!(f, "TD_{lambda}({k},{u})"),
            FamilyTag::PartialGeometry { kappa, rho, tau } => write!(f, "PG({kappa},{rho},{tau})"),
            FamilyTag::Spbibd { lambda1, lambda2, s, t } => {
                write!(f, "SPBIBD(λ1={lambda1},λ2={lambda2};s={s},t={t})")
            }
            FamilyTag::GenericPgd => write!(f, "PGD"),
            FamilyTag::NotPgd => write!(f, "not a PGD"),
        }
    }
}

pub fn classify(d: &IncidenceStructure) -> Vec<FamilyTag> {
    let Ok(p) = verify_pgd(d) else {
        return vec![FamilyTag::NotPgd];
    };
    let c = concurrence(d).expect("verified designs are tactical");
    let v = d.v();
    let mut tags = Vec::new();
    let mut off: Vec<i64> =
        (0..v).flat_map(|x| (0..v).filter(move |&y| y != x).map(move |y| (x, y))).map(|(x, y)| c.get(x, y)).collect();
    off.sort_unstable();
    off.dedup();
    if off.len() == 1 {
        tags.push(FamilyTag::TwoDesign { lambda: off[0] });
    }
    if let Some(td) = transversal_tag(d, &c) {
        tags.push(td);
    }
    if p.alpha >= 1 && p.beta == p.r + p.k - 1 {
        tags.push(FamilyTag::PartialGeometry { kappa: p.k, rho: p.r, tau: p.alpha });
    }
    if off.len() == 2 {
        if let Some(t) = spbibd_tag(d, &c, off[1], off[0]) {
            tags.push(t);
        }
    }
    if tags.is_empty() {
        tags.push(FamilyTag::GenericPgd);
    }
    tags
}

fn transversal_tag(d: &IncidenceStructure, c: &ConcurrenceMatrix) -> Option<FamilyTag> {
    let v = d.v();
    let k = d.blocks()[0].len();
    let mut class = vec![usize::MAX; v];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..v {
        let members: Vec<usize> = (0..v).filter(|&y| y == x || c.get(x, y) == 0).collect();
        if class[x] == usize::MAX {
            for &y in &members {
                if class[y] != usize::MAX {
                    return None;
                }
                class[y] = classes.len();
            }
            classes.push(members);
        } else if classes[class[x]] != members {
            return None;
        }
    }
    if classes.len() != k || classes.len() < 2 {
        return None;
    }
    let u = classes[0].len();
    if u < 2 || classes.iter().any(|g| g.len() != u) {
        return None;
    }
    for block in d.blocks() {
        let mut seen = vec![false; k];
        for &p in block {
            if std::mem::replace(&mut seen[class[p]], true) {
                return None;
            }
        }
    }
    let mut lambda = None;
    for x in 0..v {
        for y in 0..v {
            if class[x] != class[y] {
                let l = c.get(x, y);
                if *lambda.get_or_insert(l) != l {
                    return None;
                }
            }
        }
    }
    Some(FamilyTag::TransversalDesign { lambda: lambda?, k, u })
}

fn spbibd_tag(
    d: &IncidenceStructure,
    c: &ConcurrenceMatrix,
    lambda1: i64,
    lambda2: i64,
) -> Option<FamilyTag> {
    let mut s = None;
    let mut t = None;
    for block in d.blocks() {
        for x in 0..d.v() {
            let cnt = block.iter().filter(|&&y| y != x && c.get(x, y) == lambda1).count();
            let slot = if block.binary_search(&x).is_ok() { &mut s } else { &mut t };
            if *slot.get_or_insert(cnt) != cnt {
                return None;
            }
        }
    }
    Some(FamilyTag::Spbibd { lambda1, lambda2, s: s?, t: t? })
}
