use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type Predicate = dyn Fn(&[f64]) -> bool + Send + Sync;

/// A named closed condition; points satisfying it are excluded from sampling
/// and evaluation.
#[derive(Clone)]
pub struct Exclusion {
    pub name: String,
    predicate: Arc<Predicate>,
}

impl Exclusion {
    pub fn new(name: impl Into<String>, predicate: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        Exclusion { name: name.into(), predicate: Arc::new(predicate) }
    }

    pub fn excludes(&self, point: &[f64]) -> bool {
        (self.predicate)(point)
    }
}

impl fmt::Debug for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exclusion({})", self.name)
    }
}

/// Coordinate box with exclusion predicates.
#[derive(Clone, Debug)]
pub struct ChartDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub exclusions: Vec<Exclusion>,
}

impl ChartDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "box bounds of different dimension");
        ChartDomain { lower, upper, exclusions: Vec::new() }
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        ChartDomain::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn with_exclusion(mut self, ex: Exclusion) -> Self {
        self.exclusions.push(ex);
        self
    }

    /// `Some(reason)` when the point is outside the box or excluded.
    pub fn rejection(&self, point: &[f64]) -> Option<String> {
        if point.len() != self.dim() {
            return Some(format!("dimension {} != {}", point.len(), self.dim()));
        }
        for (i, &x) in point.iter().enumerate() {
            if !(x >= self.lower[i] && x <= self.upper[i]) {
                return Some(format!("coordinate {i} = {x} outside [{}, {}]", self.lower[i], self.upper[i]));
            }
        }
        self.exclusions.iter().find(|e| e.excludes(point)).map(|e| e.name.clone())
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        self.rejection(point).is_none()
    }

    pub fn check(&self, point: &[f64]) -> Result<()> {
        match self.rejection(point) {
            None => Ok(()),
            Some(reason) => Err(Error::PointExcluded { point: point.to_vec(), reason }),
        }
    }

    /// Cartesian product; exclusions act on the respective coordinate blocks.
    pub fn product(&self, other: &ChartDomain) -> ChartDomain {
        let n1 = self.dim();
        let mut lower = self.lower.clone();
        lower.extend_from_slice(&other.lower);
        let mut upper = self.upper.clone();
        upper.extend_from_slice(&other.upper);
        let mut out = ChartDomain::new(lower, upper);
        for e in &self.exclusions {
            let e = e.clone();
            out.exclusions.push(Exclusion::new(e.name.clone(), move |p: &[f64]| e.excludes(&p[..n1])));
        }
        for e in &other.exclusions {
            let e = e.clone();
            out.exclusions.push(Exclusion::new(e.name.clone(), move |p: &[f64]| e.excludes(&p[n1..])));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_and_exclusion() {
        let d = ChartDomain::cube(2, -1.0, 1.0).with_exclusion(Exclusion::new("|x0| < 0.1", |p| p[0].abs() < 0.1));
        assert!(d.contains(&[0.5, 0.5]));
        assert!(!d.contains(&[0.05, 0.5]));
        assert!(!d.contains(&[1.5, 0.0]));
        assert!(matches!(d.check(&[0.0, 0.0]), Err(Error::PointExcluded { .. })));
    }

    #[test]
    fn product_lifts_exclusions() {
        let a = ChartDomain::cube(1, 0.0, 1.0).with_exclusion(Exclusion::new("t<0.2", |p| p[0] < 0.2));
        let b = ChartDomain::cube(2, -1.0, 1.0).with_exclusion(Exclusion::new("x>0.9", |p| p[0] > 0.9));
        let ab = a.product(&b);
        assert_eq!(ab.dim(), 3);
        assert!(ab.contains(&[0.5, 0.0, 0.0]));
        assert!(!ab.contains(&[0.1, 0.0, 0.0]));
        assert!(!ab.contains(&[0.5, 0.95, 0.0]));
    }
}
