//! The path algebra `kQ` over the reals: finite linear combinations of paths
//! with the concatenation product.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::quiver::{Path, Product, Quiver};

/// Coefficients with absolute value at or below this are dropped after
/// every arithmetic operation.
pub const DROP_TOLERANCE: f64 = 1e-12;

/// An element of the path algebra (an "algebraic filter").
///
/// Terms are kept in canonical path order, so equality and iteration are
/// deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterElement {
    quiver: u64,
    terms: BTreeMap<Path, f64>,
}

impl FilterElement {
    pub fn zero(q: &Quiver) -> Self {
        FilterElement {
            quiver: q.fingerprint(),
            terms: BTreeMap::new(),
        }
    }

    /// `1 = Σ_i e_i`.
    pub fn unit(q: &Quiver) -> Self {
        let terms = (0..q.node_count()).map(|i| (q.trivial(i), 1.0)).collect();
        FilterElement {
            quiver: q.fingerprint(),
            terms,
        }
    }

    pub fn from_path(p: Path) -> Self {
        Self::term(1.0, p)
    }

    pub fn term(coeff: f64, p: Path) -> Self {
        let mut terms = BTreeMap::new();
        let quiver = p.fingerprint();
        if coeff.abs() > DROP_TOLERANCE {
            terms.insert(p, coeff);
        }
        FilterElement { quiver, terms }
    }

    /// Sums the given terms, merging repeated paths.
    pub fn from_terms(q: &Quiver, terms: impl IntoIterator<Item = (f64, Path)>) -> Result<Self> {
        let mut out = Self::zero(q);
        for (c, p) in terms {
            if !q.owns(&p) {
                return Err(Error::QuiverMismatch);
            }
            *out.terms.entry(p).or_insert(0.0) += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn belongs_to(&self, q: &Quiver) -> bool {
        self.quiver == q.fingerprint()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &Path) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    /// Terms in canonical order (by length, then arrow sequence).
    pub fn terms(&self) -> impl Iterator<Item = (&Path, f64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    /// `b · a`: the product is "first `a`, then `b`".
    pub fn multiply(b: &FilterElement, a: &FilterElement) -> Result<Self> {
        if b.quiver != a.quiver {
            return Err(Error::QuiverMismatch);
        }
        let mut terms: BTreeMap<Path, f64> = BTreeMap::new();
        for (pb, &cb) in &b.terms {
            for (pa, &ca) in &a.terms {
                if let Product::Path(p) = Path::concat(pb, pa)? {
                    *terms.entry(p).or_insert(0.0) += cb * ca;
                }
            }
        }
        let mut out = FilterElement {
            quiver: b.quiver,
            terms,
        };
        out.prune();
        Ok(out)
    }

    /// `beta·b + alpha·a`.
    pub fn add(b: &FilterElement, a: &FilterElement, beta: f64, alpha: f64) -> Result<Self> {
        if b.quiver != a.quiver {
            return Err(Error::QuiverMismatch);
        }
        let mut terms: BTreeMap<Path, f64> = BTreeMap::new();
        for (p, &c) in &b.terms {
            *terms.entry(p.clone()).or_insert(0.0) += beta * c;
        }
        for (p, &c) in &a.terms {
            *terms.entry(p.clone()).or_insert(0.0) += alpha * c;
        }
        let mut out = FilterElement {
            quiver: b.quiver,
            terms,
        };
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = FilterElement {
            quiver: self.quiver,
            terms: self.terms.iter().map(|(p, &c)| (p.clone(), s * c)).collect(),
        };
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.abs() > DROP_TOLERANCE);
    }

    /// Human-readable sum, e.g. `1·a51·a35 + 2·e(3)`.
    pub fn describe(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| format!("{}·{}", c, q.describe(p)))
            .collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::example_quiver;

    fn arrow(q: &Quiver, id: &str) -> FilterElement {
        FilterElement::from_path(q.path(&[id]).unwrap())
    }

    #[test]
    fn single_term_product() {
        let q = example_quiver();
        let prod = FilterElement::multiply(&arrow(&q, "a23"), &arrow(&q, "a12")).unwrap();
        let expected = FilterElement::from_path(q.path(&["a12", "a23"]).unwrap());
        assert_eq!(prod, expected);
    }

    #[test]
    fn idempotents_are_orthogonal() {
        let q = example_quiver();
        for i in 0..q.node_count() {
            for j in 0..q.node_count() {
                let ei = FilterElement::from_path(q.trivial(i));
                let ej = FilterElement::from_path(q.trivial(j));
                let prod = FilterElement::multiply(&ei, &ej).unwrap();
                if i == j {
                    assert_eq!(prod, ei);
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
    }

    #[test]
    fn mismatched_terms_vanish() {
        // (a12 + a34)·a23: only a34 composes after a23.
        let q = example_quiver();
        let left = FilterElement::add(&arrow(&q, "a12"), &arrow(&q, "a34"), 1.0, 1.0).unwrap();
        let prod = FilterElement::multiply(&left, &arrow(&q, "a23")).unwrap();
        let expected = FilterElement::from_path(q.path(&["a23", "a34"]).unwrap());
        assert_eq!(prod, expected);
    }

    #[test]
    fn unit_is_sum_of_trivial_paths() {
        let q = example_quiver();
        let one = FilterElement::unit(&q);
        assert_eq!(one.len(), 5);
        assert!(one.terms().all(|(p, c)| p.is_trivial() && c == 1.0));
        let single = Quiver::new(["1"], vec![]).unwrap();
        assert_eq!(FilterElement::unit(&single).len(), 1);
    }

    #[test]
    fn add_cancels_and_doubles() {
        let q = example_quiver();
        let c = FilterElement::add(&arrow(&q, "a12"), &arrow(&q, "a22"), 1.5, -2.0).unwrap();
        assert!(FilterElement::add(&c, &c, 1.0, -1.0).unwrap().is_zero());
        let e1 = FilterElement::from_path(q.trivial(0));
        let two = FilterElement::add(&e1, &e1, 1.0, 1.0).unwrap();
        assert_eq!(two.coefficient(&q.trivial(0)), 2.0);
        assert_eq!(two.len(), 1);
    }

    #[test]
    fn dust_is_dropped() {
        let q = example_quiver();
        let tiny = FilterElement::term(1e-13, q.trivial(0));
        assert!(tiny.is_zero());
        let a = arrow(&q, "a12");
        let almost = FilterElement::add(&a, &a.scale(1.0 - 1e-14), 1.0, -1.0).unwrap();
        assert!(almost.is_zero());
    }

    #[test]
    fn quiver_mismatch() {
        let q = example_quiver();
        let c = Quiver::chain(2);
        let r = FilterElement::multiply(&FilterElement::unit(&q), &FilterElement::unit(&c));
        assert_eq!(r, Err(Error::QuiverMismatch));
        assert!(FilterElement::add(&FilterElement::unit(&q), &FilterElement::unit(&c), 1.0, 1.0).is_err());
    }

    #[test]
    fn multiply_by_zero() {
        let q = example_quiver();
        let x = FilterElement::add(&arrow(&q, "a12"), &FilterElement::unit(&q), 2.0, 3.0).unwrap();
        assert!(FilterElement::multiply(&x, &FilterElement::zero(&q)).unwrap().is_zero());
        assert!(FilterElement::multiply(&FilterElement::zero(&q), &x).unwrap().is_zero());
    }
}
