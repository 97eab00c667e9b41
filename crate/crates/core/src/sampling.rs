//! Deterministic quasi-random sampling of chart domains.
//!
//! Points come from a Halton sequence with a Cranley–Patterson rotation drawn
//! from a ChaCha stream keyed by the seed, so the sample set is a pure
//! function of `(domain, count, seed)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::ChartDomain;

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let (mut out, mut scale) = (0.0, inv);
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

/// Rotated Halton points in `[0,1)^dim`, starting at index 1.
pub struct HaltonStream {
    dim: usize,
    next: u64,
    shift: Vec<f64>,
}

impl HaltonStream {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "Halton sampling supports at most {} dimensions", PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..dim).map(|_| rng.random::<f64>()).collect();
        HaltonStream { dim, next: 1, shift }
    }
}

impl Iterator for HaltonStream {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let i = self.next;
        self.next += 1;
        Some(
            (0..self.dim)
                .map(|d| {
                    let v = radical_inverse(i, PRIMES[d]) + self.shift[d];
                    v - v.floor()
                })
                .collect(),
        )
    }
}

/// `count` admissible points of the domain; excluded draws are replaced by
/// later ones.
pub fn sample_points(domain: &ChartDomain, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    sample_where(domain, count, seed, |_| true)
}

/// Like [`sample_points`] with an extra acceptance predicate.
pub fn sample_where(
    domain: &ChartDomain,
    count: usize,
    seed: u64,
    accept: impl Fn(&[f64]) -> bool,
) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if domain.lower.iter().zip(&domain.upper).any(|(lo, hi)| !(lo < hi)) {
        return Err(Error::DomainExhausted { accepted: 0, requested: count });
    }
    let budget = count.saturating_mul(100);
    let mut out = Vec::with_capacity(count);
    for u in HaltonStream::new(domain.dim(), seed).take(budget) {
        let p: Vec<f64> =
            u.iter().enumerate().map(|(d, t)| domain.lower[d] + (domain.upper[d] - domain.lower[d]) * t).collect();
        if domain.contains(&p) && accept(&p) {
            out.push(p);
            if out.len() == count {
                return Ok(out);
            }
        }
    }
    Err(Error::DomainExhausted { accepted: out.len(), requested: count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Exclusion;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn deterministic_in_seed() {
        let d = ChartDomain::cube(2, 0.0, 1.0);
        let a = sample_points(&d, 4, 7).unwrap();
        let b = sample_points(&d, 4, 7).unwrap();
        let c = sample_points(&d, 4, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn exclusions_respected() {
        let d = ChartDomain::cube(1, -1.0, 1.0).with_exclusion(Exclusion::new("|x|<0.1", |p| p[0].abs() < 0.1));
        let pts = sample_points(&d, 200, 3).unwrap();
        assert!(pts.iter().all(|p| p[0].abs() >= 0.1));
    }

    #[test]
    fn degenerate_box_is_exhausted() {
        let d = ChartDomain::new(vec![0.0, 1.0], vec![0.0, 2.0]);
        assert!(matches!(sample_points(&d, 3, 1), Err(Error::DomainExhausted { .. })));
    }
}
