//! Seeded random generators for representations, signals, filters and basis
//! changes. Every randomized operation in the crate takes an explicit seed.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{singular_values, Matrix};
use crate::path_algebra::FilterElement;
use crate::quiver::Quiver;
use crate::representation::{QuiverSignal, Representation};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent standard normal entries.
pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Matrix with integer entries in `-bound..=bound`.
pub fn random_integer_matrix<R: Rng>(rows: usize, cols: usize, bound: i32, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| f64::from(rng.random_range(-bound..=bound)))
}

/// Random invertible matrix with condition number at most 50.
pub fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_matrix(n, n, rng);
        let s = singular_values(&m);
        match (s.first(), s.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 && hi / lo <= 50.0 => return m,
            (None, None) => return m,
            _ => continue,
        }
    }
}

pub fn random_representation<R: Rng>(q: &Quiver, dims: &[usize], rng: &mut R) -> Representation {
    let maps = (0..q.arrow_count())
        .map(|a| random_matrix(dims[q.head(a)], dims[q.tail(a)], rng))
        .collect();
    Representation::new(q.clone(), dims.to_vec(), maps).expect("random maps conform to dims")
}

pub fn random_signal<R: Rng>(rep: &Representation, rng: &mut R) -> QuiverSignal {
    let flat: Vec<f64> = (0..rep.total_dim()).map(|_| rng.sample(StandardNormal)).collect();
    QuiverSignal::from_flat(rep, &flat).expect("length matches")
}

/// Per-node random invertible matrices for `rep`'s dimensions.
pub fn random_basis_change<R: Rng>(rep: &Representation, rng: &mut R) -> Vec<Matrix> {
    rep.dims().iter().map(|&d| random_invertible(d, rng)).collect()
}

/// Random filter with at most `max_terms` terms over paths of length at
/// most `max_len`; coefficients are small integers so products stay exact.
pub fn random_filter<R: Rng>(q: &Quiver, max_len: usize, max_terms: usize, rng: &mut R) -> FilterElement {
    let paths = q.enumerate_paths(max_len);
    let count = rng.random_range(0..=max_terms);
    let terms = (0..count).map(|_| {
        let p = paths[rng.random_range(0..paths.len())].clone();
        let c = f64::from(rng.random_range(-4..=4));
        (c, p)
    });
    FilterElement::from_terms(q, terms.collect::<Vec<_>>()).expect("paths come from q")
}

/// Random interval multiplicities on the `n`-node chain with every node
/// dimension at most `max_dim`.
pub fn random_barcode<R: Rng>(n: usize, max_dim: usize, rng: &mut R) -> BTreeMap<(usize, usize), usize> {
    let mut dims = vec![0usize; n + 1];
    let mut out = BTreeMap::new();
    let attempts = rng.random_range(1..=2 * n * max_dim);
    for _ in 0..attempts {
        let a = rng.random_range(1..=n);
        let b = rng.random_range(a..=n);
        if (a..=b).all(|i| dims[i] < max_dim) {
            (a..=b).for_each(|i| dims[i] += 1);
            *out.entry((a, b)).or_insert(0) += 1;
        }
    }
    out
}
