//! Integer spectra of concurrence matrices without floating point.

use crate::arith::{divisors, phi, ramanujan};
use crate::incidence::ConcurrenceMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Compressed symmetric circulant first row [c_0, …, c_⌊v/2⌋].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CirculantRow {
    pub v: usize,
    pub c: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RowParseError {
    #[error("expected `v:c0,c1,...`")]
    Format,
    #[error("invalid integer `{0}`")]
    Integer(String),
    #[error("order {v} needs {expected} entries, got {found}")]
    Length { v: usize, expected: usize, found: usize },
}

impl CirculantRow {
    pub fn new(v: usize, c: Vec<u64>) -> Result<Self, RowParseError> {
        let expected = v / 2 + 1;
        if v == 0 || c.len() != expected {
            return Err(RowParseError::Length { v, expected, found: c.len() });
        }
        Ok(Self { v, c })
    }

    /// Compressed row of a symmetric full first row.
    pub fn from_full(full: &[i64]) -> Option<Self> {
        let v = full.len();
        if (1..v).any(|i| full[i] != full[v - i]) || full.iter().any(|&x| x < 0) {
            return None;
        }
        Some(Self { v, c: full[..=v / 2].iter().map(|&x| x as u64).collect() })
    }

    pub fn full(&self) -> Vec<i64> {
        (0..self.v).map(|i| self.c[i.min(self.v - i)] as i64).collect()
    }

    pub fn matrix(&self) -> ConcurrenceMatrix {
        ConcurrenceMatrix::circulant(&self.full())
    }

    pub fn scaled(&self, l: u64) -> Self {
        Self { v: self.v, c: self.c.iter().map(|x| x * l).collect() }
    }

    pub fn content(&self) -> u64 {
        self.c.iter().fold(0, |g, &x| num_integer::gcd(g, x))
    }

    /// Row divided by its content, and the content.
    pub fn primitive(&self) -> (Self, u64) {
        let g = self.content().max(1);
        (Self { v: self.v, c: self.c.iter().map(|x| x / g).collect() }, g)
    }

    pub fn row_sum(&self) -> u64 {
        self.full().iter().sum::<i64>() as u64
    }
}

impl fmt::Display for CirculantRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.v)?;
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for CirculantRow {
    type Err = RowParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (v, rest) = s.trim().split_once(':').ok_or(RowParseError::Format)?;
        let v: usize = v.trim().parse().map_err(|_| RowParseError::Integer(v.into()))?;
        let c = rest
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| RowParseError::Integer(t.into())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(v, c)
    }
}

/// Integer eigenvalues with multiplicities, sorted by eigenvalue descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactSpectrum(pub Vec<(i64, u64)>);

impl ExactSpectrum {
    pub fn from_pairs(mut pairs: Vec<(i64, u64)>) -> Self {
        pairs.retain(|p| p.1 > 0);
        pairs.sort_by(|a, b| b.0.cmp(&a.0));
        let mut merged: Vec<(i64, u64)> = Vec::new();
        for (e, m) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += m,
                _ => merged.push((e, m)),
            }
        }
        Self(merged)
    }

    pub fn dimension(&self) -> u64 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn power_sum(&self, m: u32) -> BigInt {
        self.0.iter().map(|&(e, k)| BigInt::from(e).pow(m) * k).sum()
    }

    pub fn multiplicity(&self, eig: i64) -> u64 {
        self.0.iter().find(|p| p.0 == eig).map_or(0, |p| p.1)
    }

    /// [kr^1, n^σ, 0^{v−1−σ}].
    pub fn pgd(v: u64, kr: i64, n: i64, sigma: u64) -> Self {
        Self::from_pairs(vec![(kr, 1), (n, sigma), (0, v - 1 - sigma)])
    }
}

impl fmt::Display for ExactSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (e, m)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}^{m}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NonIntegral {
    /// The class average Σ c_i R_d(i) / φ(d) is not an integer.
    ClassValue { order: u64, numerator: i64, denominator: u64 },
    /// Class averages are integral but some class is not eigenvalue-constant.
    ClassNotConstant,
    /// The characteristic polynomial has a non-integer root.
    Polynomial,
}

impl fmt::Display for NonIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonIntegral::ClassValue { order, numerator, denominator } => {
                write!(f, "class of order {order} has value {numerator}/{denominator}")
            }
            NonIntegral::ClassNotConstant => write!(f, "eigenvalues vary within a Galois class"),
            NonIntegral::Polynomial => write!(f, "characteristic polynomial has a non-integer root"),
        }
    }
}

/// Eigenvalue θ_d on each class {j : v/gcd(j,v) = d}, for every divisor d of v.
pub fn circulant_class_values(row: &CirculantRow) -> Result<Vec<(u64, i64)>, NonIntegral> {
    let v = row.v as u64;
    let full = row.full();
    let mut out = Vec::new();
    for d in divisors(v) {
        let num: i64 = full.iter().enumerate().map(|(i, &c)| c * ramanujan(d, i as u64)).sum();
        let den = phi(d);
        if num % den as i64 != 0 {
            return Err(NonIntegral::ClassValue { order: d, numerator: num, denominator: den });
        }
        out.push((d, num / den as i64));
    }
    if !circulant_annihilated(&full, out.iter().map(|p| p.1)) {
        return Err(NonIntegral::ClassNotConstant);
    }
    Ok(out)
}

pub fn circulant_eigenvalues(row: &CirculantRow) -> Result<ExactSpectrum, NonIntegral> {
    let classes = circulant_class_values(row)?;
    Ok(ExactSpectrum::from_pairs(classes.into_iter().map(|(d, t)| (t, phi(d))).collect()))
}

/// Checks Π_θ (C − θI) = 0 in the circulant algebra (cyclic convolution of first rows).
fn circulant_annihilated(full: &[i64], values: impl Iterator<Item = i64>) -> bool {
    let v = full.len();
    let mut distinct: Vec<i64> = values.collect();
    distinct.sort_unstable();
    distinct.dedup();
    let mut acc: Vec<BigInt> = (0..v).map(|i| BigInt::from((i == 0) as i64)).collect();
    for t in distinct {
        let mut factor: Vec<BigInt> = full.iter().map(|&c| BigInt::from(c)).collect();
        factor[0] -= t;
        let mut next = vec![BigInt::zero(); v];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, f) in factor.iter().enumerate() {
                next[(i + j) % v] += a * f;
            }
        }
        acc = next;
    }
    acc.iter().all(Zero::is_zero)
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum SpectralFailure {
    #[error("matrix is not symmetric and nonnegative")]
    NotSymmetric,
    #[error("kr and n must be distinct and positive")]
    Degenerate,
    #[error("C(C - nI)(C - krI) is nonzero at ({row}, {col})")]
    Annihilator { row: usize, col: usize },
    #[error("trace equations give non-integral multiplicities")]
    NonIntegralMultiplicity,
    #[error("eigenvalue kr has multiplicity {0}, expected 1")]
    TopMultiplicity(i128),
    #[error("multiplicity of n is {0}, outside [0, v-1]")]
    SigmaRange(i128),
}

/// Confirms Spec(C) = [kr^1, n^σ, 0^{v−1−σ}] and returns σ.
pub fn verify_three_eigenvalues(c: &ConcurrenceMatrix, kr: i64, n: i64) -> Result<u64, SpectralFailure> {
    let v = c.v();
    if !c.is_symmetric() || (0..v).any(|i| c.row(i).iter().any(|&x| x < 0)) {
        return Err(SpectralFailure::NotSymmetric);
    }
    if kr <= 0 || n <= 0 || kr == n {
        return Err(SpectralFailure::Degenerate);
    }
    let m: Vec<i128> = (0..v * v).map(|i| c.get(i / v, i % v) as i128).collect();
    let shift = |a: &[i128], t: i128| -> Vec<i128> {
        let mut out = a.to_vec();
        for i in 0..v {
            out[i * v + i] -= t;
        }
        out
    };
    let p = mat_mul(&mat_mul(&m, &shift(&m, n as i128), v), &shift(&m, kr as i128), v);
    if let Some(pos) = p.iter().position(|&x| x != 0) {
        return Err(SpectralFailure::Annihilator { row: pos / v, col: pos % v });
    }
    let tr: i128 = (0..v).map(|i| m[i * v + i]).sum();
    let tr2: i128 = (0..v).flat_map(|i| (0..v).map(move |j| (i, j))).map(|(i, j)| m[i * v + j] * m[j * v + i]).sum();
    let (kr, n) = (kr as i128, n as i128);
    let det = kr * n * n - n * kr * kr;
    let top = tr * n * n - n * tr2;
    let mid = kr * tr2 - kr * kr * tr;
    if top % det != 0 || mid % det != 0 {
        return Err(SpectralFailure::NonIntegralMultiplicity);
    }
    let (m_kr, sigma) = (top / det, mid / det);
    if m_kr != 1 {
        return Err(SpectralFailure::TopMultiplicity(m_kr));
    }
    if sigma < 0 || 1 + sigma > v as i128 {
        return Err(SpectralFailure::SigmaRange(sigma));
    }
    Ok(sigma as u64)
}

fn mat_mul(a: &[i128], b: &[i128], v: usize) -> Vec<i128> {
    let mut out = vec![0i128; v * v];
    for i in 0..v {
        for k in 0..v {
            let x = a[i * v + k];
            if x == 0 {
                continue;
            }
            for j in 0..v {
                out[i * v + j] += x * b[k * v + j];
            }
        }
    }
    out
}

/// tr(C^m) for m = 0..=m_max.
pub fn power_sums(c: &ConcurrenceMatrix, m_max: usize) -> Vec<BigInt> {
    let v = c.v();
    let base: Vec<BigInt> = (0..v * v).map(|i| BigInt::from(c.get(i / v, i % v))).collect();
    let mut power: Vec<BigInt> = (0..v * v).map(|i| BigInt::from((i / v == i % v) as i64)).collect();
    let mut sums = vec![BigInt::from(v)];
    for _ in 0..m_max {
        let mut next = vec![BigInt::zero(); v * v];
        for i in 0..v {
            for k in 0..v {
                let x = &power[i * v + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..v {
                    let y = &base[k * v + j];
                    if !y.is_zero() {
                        next[i * v + j] += x * y;
                    }
                }
            }
        }
        power = next;
        sums.push((0..v).map(|i| power[i * v + i].clone()).sum());
    }
    sums
}

/// Full spectrum of an integer symmetric matrix, when every eigenvalue is an integer.
///
/// The characteristic polynomial comes from the power sums via Newton's identities;
/// integer roots are then peeled off by exact division within the Gershgorin bound.
pub fn integral_spectrum(c: &ConcurrenceMatrix) -> Result<ExactSpectrum, NonIntegral> {
    let v = c.v();
    let p = power_sums(c, v);
    // e_0..e_v, elementary symmetric functions of the eigenvalues.
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    for k in 1..=v {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let term = &e[k - i] * BigRational::from_integer(p[i].clone());
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    // Coefficients of det(xI − C), highest degree first.
    let mut poly: Vec<BigInt> = Vec::with_capacity(v + 1);
    for (k, ek) in e.iter().enumerate() {
        if !ek.is_integer() {
            return Err(NonIntegral::Polynomial);
        }
        let x = ek.to_integer();
        poly.push(if k % 2 == 0 { x } else { -x });
    }
    let bound = (0..v).map(|i| c.row(i).iter().map(|x| x.abs()).sum::<i64>()).max().unwrap_or(0);
    let mut pairs = Vec::new();
    for t in (-bound..=bound).rev() {
        let mut mult = 0;
        while poly.len() > 1 {
            match divide_root(&poly, t) {
                Some(q) => {
                    poly = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            pairs.push((t, mult));
        }
    }
    if poly.len() != 1 {
        return Err(NonIntegral::Polynomial);
    }
    Ok(ExactSpectrum::from_pairs(pairs))
}

/// Synthetic division by (x − t); `None` when t is not a root.
fn divide_root(poly: &[BigInt], t: i64) -> Option<Vec<BigInt>> {
    let t = BigInt::from(t);
    let mut q = Vec::with_capacity(poly.len() - 1);
    let mut carry = BigInt::zero();
    for coeff in &poly[..poly.len() - 1] {
        carry = coeff + &carry * &t;
        q.push(carry.clone());
    }
    let rem = &poly[poly.len() - 1] + &carry * &t;
    rem.is_zero().then_some(q)
}
