//! Enumeration of symmetric circulant rows with a PGD spectrum.
//!
//! A rational circulant has an integral spectrum exactly when c_i depends only
//! on gcd(i, v), so the unknowns are one value per divisor class. For each
//! labelling of the nontrivial eigenvalue classes by n or 0 the class values
//! follow from a square rational system.

use crate::algebra::{derive_params_with, PgdParams};
use crate::arith::{divisors, gcd, phi, ramanujan};
use crate::spectra::{circulant_eigenvalues, CirculantRow, ExactSpectrum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub const MAX_SCAN_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityCase {
    pub v: u64,
    pub k: u64,
    pub r: u64,
    pub n: u64,
    pub sigma: u64,
    pub row: CirculantRow,
    pub params: PgdParams,
    pub primitive: CirculantRow,
    pub scale: u64,
    /// Smallest r at which this primitive row occurs for the same (k, σ) within the scan.
    pub family_minimal: bool,
}

impl FeasibilityCase {
    pub fn spectrum(&self) -> ExactSpectrum {
        ExactSpectrum::pgd(self.v, (self.k * self.r) as i64, self.n as i64, self.sigma)
    }
}

/// Equalities among c_1..c_⌊v/2⌋ forced by integrality: indices sharing gcd(i, v).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForcedEqualities {
    pub v: usize,
    pub classes: Vec<Vec<usize>>,
}

impl fmt::Display for ForcedEqualities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.classes.is_empty() {
            return write!(f, "v={}: no forced equalities", self.v);
        }
        write!(f, "v={}:", self.v)?;
        for (i, class) in self.classes.iter().enumerate() {
            let names: Vec<String> = class.iter().map(|j| format!("c_{j}")).collect();
            write!(f, "{}{}", if i == 0 { " " } else { "; " }, names.join(" = "))?;
        }
        Ok(())
    }
}

pub fn integrality_constraints(v: usize) -> ForcedEqualities {
    let mut by_gcd: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for i in 1..=v / 2 {
        by_gcd.entry(gcd(i as u64, v as u64)).or_default().push(i);
    }
    let classes = by_gcd.into_values().filter(|c| c.len() > 1).collect();
    ForcedEqualities { v, classes }
}

/// Solves A x = b over the rationals; `None` if A is singular.
pub(crate) fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let m = a.len();
    for col in 0..m {
        let pivot = (col..m).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for j in col..m {
            a[col][j] = &a[col][j] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..m {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Class values e_g (g | v) of the row whose eigenvalue on the class of order d is `theta[d]`.
fn class_row(v: u64, theta: &BTreeMap<u64, i64>) -> Option<Vec<BigRational>> {
    let divs = divisors(v);
    let a = divs
        .iter()
        .map(|&d| divs.iter().map(|&g| rat(phi(v / g) as i64 * ramanujan(d, g))).collect())
        .collect();
    let b = divs.iter().map(|d| rat(phi(*d) as i64 * theta[d])).collect();
    solve_rational(a, b)
}

/// Row for prescribed class eigenvalues, or `None` if it is not a nonnegative integer row.
pub fn row_from_class_eigenvalues(v: usize, theta: &BTreeMap<u64, i64>) -> Option<CirculantRow> {
    let vals = class_row(v as u64, theta)?;
    let divs = divisors(v as u64);
    let mut c = Vec::with_capacity(v / 2 + 1);
    for i in 0..=v / 2 {
        let g = gcd(i as u64, v as u64);
        let x = &vals[divs.iter().position(|&d| d == g)?];
        if !x.is_integer() || x.is_negative() {
            return None;
        }
        c.push(x.to_integer().to_u64()?);
    }
    Some(CirculantRow { v, c })
}

/// Subsets of nontrivial class orders whose total multiplicity is σ.
fn class_assignments(v: u64, sigma: u64) -> Vec<Vec<u64>> {
    let orders: Vec<u64> = divisors(v).into_iter().filter(|&d| d > 1).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << orders.len()) {
        let chosen: Vec<u64> =
            orders.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &d)| d).collect();
        if chosen.iter().map(|&d| phi(d)).sum::<u64>() == sigma {
            out.push(chosen);
        }
    }
    out
}

pub fn feasible_rows(v: usize, k: u64, sigma: u64, r_max: u64) -> Vec<FeasibilityCase> {
    feasible_rows_with(v, k, sigma, r_max, false)
}

/// As [`feasible_rows`], optionally keeping α = 0 rows.
pub fn feasible_rows_with(
    v: usize,
    k: u64,
    sigma: u64,
    r_max: u64,
    include_improper: bool,
) -> Vec<FeasibilityCase> {
    let vu = v as u64;
    if !(k >= 2 && k + 2 <= vu && sigma >= 1 && sigma < vu) {
        return Vec::new();
    }
    let assignments = class_assignments(vu, sigma);
    let mut out = Vec::new();
    for r in 1..=r_max {
        if (r * (vu - k)) % sigma != 0 {
            continue;
        }
        let n = r * (vu - k) / sigma;
        let Ok(params) = derive_params_with(vu, k, r, n, include_improper) else {
            continue;
        };
        for chosen in &assignments {
            let theta: BTreeMap<u64, i64> = divisors(vu)
                .into_iter()
                .map(|d| {
                    let t = if d == 1 {
                        (k * r) as i64
                    } else if chosen.contains(&d) {
                        n as i64
                    } else {
                        0
                    };
                    (d, t)
                })
                .collect();
            let Some(row) = row_from_class_eigenvalues(v, &theta) else {
                continue;
            };
            debug_assert_eq!(row.c[0], r);
            let (primitive, scale) = row.primitive();
            out.push(FeasibilityCase {
                v: vu,
                k,
                r,
                n,
                sigma,
                row,
                params,
                primitive,
                scale,
                family_minimal: false,
            });
        }
    }
    out.sort_by(|a, b| (a.r, &a.row).cmp(&(b.r, &b.row)));
    out.dedup_by(|a, b| a.row == b.row);
    mark_minimal(&mut out);
    out
}

fn mark_minimal(cases: &mut [FeasibilityCase]) {
    let mut seen = std::collections::BTreeSet::new();
    for c in cases.iter_mut() {
        c.family_minimal = seen.insert((c.k, c.sigma, c.primitive.clone()));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("order {0} exceeds the scan limit {MAX_SCAN_ORDER}")]
    TooLarge(usize),
}

/// Feasible rows of one order, grouped by (k, σ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityCatalog {
    pub v: usize,
    pub r_max: u64,
    pub groups: BTreeMap<(u64, u64), Vec<FeasibilityCase>>,
}

impl FeasibilityCatalog {
    pub fn cases(&self) -> impl Iterator<Item = &FeasibilityCase> {
        self.groups.values().flatten()
    }

    /// The first member of every family.
    pub fn minimal_cases(&self) -> impl Iterator<Item = &FeasibilityCase> {
        self.cases().filter(|c| c.family_minimal)
    }
}

pub fn order_scan(
    v: usize,
    k_range: std::ops::RangeInclusive<u64>,
    r_max: u64,
    include_improper: bool,
) -> Result<FeasibilityCatalog, ScanError> {
    if v > MAX_SCAN_ORDER {
        return Err(ScanError::TooLarge(v));
    }
    let jobs: Vec<(u64, u64)> = k_range
        .filter(|&k| k >= 2 && k + 2 <= v as u64)
        .flat_map(|k| (1..v as u64).map(move |s| (k, s)))
        .collect();
    let results: Vec<((u64, u64), Vec<FeasibilityCase>)> = jobs
        .into_par_iter()
        .map(|(k, s)| ((k, s), feasible_rows_with(v, k, s, r_max, include_improper)))
        .collect();
    let groups = results.into_iter().filter(|(_, c)| !c.is_empty()).collect();
    Ok(FeasibilityCatalog { v, r_max, groups })
}

/// Checks a row against the PGD spectrum for (k, r, n, σ) via the class formula.
pub fn row_has_pgd_spectrum(row: &CirculantRow, k: u64, n: u64, sigma: u64) -> bool {
    let r = row.c[0];
    circulant_eigenvalues(row)
        .map(|s| s == ExactSpectrum::pgd(row.v as u64, (k * r) as i64, n as i64, sigma))
        .unwrap_or(false)
}
