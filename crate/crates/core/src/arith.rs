//! Small exact number theory: divisors, Möbius, totient, Ramanujan sums.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

pub fn phi(n: u64) -> u64 {
    (1..=n).filter(|&i| gcd(i, n) == 1).count() as u64
}

/// R_d(i) = Σ_{e | gcd(i,d)} e·μ(d/e), the sum of ζ^{ij} over units j mod d.
pub fn ramanujan(d: u64, i: u64) -> i64 {
    let g = gcd(i, d);
    divisors(g).into_iter().map(|e| e as i64 * mobius(d / e)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (n, &m) in (1..=12).zip(expected.iter()) {
            assert_eq!(mobius(n), m, "mu({n})");
        }
    }

    #[test]
    fn phi_values() {
        let expected = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (n, &p) in (1..=12).zip(expected.iter()) {
            assert_eq!(phi(n), p);
        }
    }

    // Von Sterneck: R_d(i) = μ(d/g)·φ(d)/φ(d/g) with g = gcd(i,d).
    #[test]
    fn ramanujan_matches_von_sterneck() {
        for d in 1..=16u64 {
            for i in 0..=2 * d {
                let g = gcd(i, d);
                let q = d / g;
                let expect = mobius(q) * phi(d) as i64 / phi(q) as i64;
                assert_eq!(ramanujan(d, i), expect, "R_{d}({i})");
            }
        }
    }

    #[test]
    fn ramanujan_matches_cosine_sum() {
        for d in 1..=12u64 {
            for i in 0..d {
                let s: f64 = (1..=d)
                    .filter(|&j| gcd(j, d) == 1)
                    .map(|j| (2.0 * std::f64::consts::PI * (i * j) as f64 / d as f64).cos())
                    .sum();
                assert_eq!(ramanujan(d, i), s.round() as i64);
            }
        }
    }
}
