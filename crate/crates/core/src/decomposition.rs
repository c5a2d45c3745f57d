//! Decompositions of representations.
//!
//! * [`barcode_interval`] computes interval multiplicities of an
//!   equioriented chain representation from ranks of composite maps.
//! * [`generic_decompose`] splits any representation along generalized
//!   eigenspaces of random endomorphisms until every summand has a
//!   one-dimensional endomorphism algebra (or a round budget runs out).
//! * [`fourier_decompose`] reorganizes a signal by simple type when the
//!   representation is semisimple.

use std::collections::BTreeMap;

use nalgebra::linalg::Schur;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, rank_of_product, singular_values, smallest_right_singular, spectral_norm, Matrix, RankTolerance};
use crate::morphisms::{combine, hom_basis, is_isomorphic, DEFAULT_TRIALS};
use crate::path_algebra::FilterElement;
use crate::representation::{QuiverSignal, Representation};
use crate::sample::rng;

/// Arrow maps with max-norm at or below this count as zero for the
/// semisimplicity test.
pub const SEMISIMPLE_TOLERANCE: f64 = 1e-12;

/// Relative gap separating eigenvalue clusters in the splitter.
pub const CLUSTER_GAP: f64 = 1e-6;

/// Split attempts per summand used when callers have no preference.
pub const DEFAULT_MAX_ROUNDS: usize = 8;

/// Multiset of intervals `[a, b]` (1-based positions along a chain).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalBarcode {
    pub n: usize,
    pub multiplicities: BTreeMap<(usize, usize), usize>,
}

impl IntervalBarcode {
    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        self.multiplicities.get(&(a, b)).copied().unwrap_or(0)
    }

    /// Number of bars covering each position `1..=n`.
    pub fn node_dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.n];
        for (&(a, b), &m) in &self.multiplicities {
            for d in &mut dims[a - 1..b] {
                *d += m;
            }
        }
        dims
    }

    /// Bars in `(a, b)` order, one entry per copy.
    pub fn bars(&self) -> Vec<(usize, usize)> {
        self.multiplicities
            .iter()
            .flat_map(|(&iv, &m)| std::iter::repeat_n(iv, m))
            .collect()
    }
}

/// Interval multiplicities of an equioriented chain representation via
/// inclusion–exclusion on composite ranks:
/// `m[a,b] = rk(a,b) − rk(a−1,b) − rk(a,b+1) + rk(a−1,b+1)`.
///
/// Composites are ranked against the product of their factors' norms.
pub fn barcode_interval(rep: &Representation, tol: RankTolerance) -> Result<IntervalBarcode> {
    let (order, arrows) = rep.quiver().chain_order()?;
    let n = order.len();
    // rk[a][b] for 1-based a ≤ b; index 0 and n+1 stay zero
    let mut rk = vec![vec![0usize; n + 2]; n + 2];
    let norms: Vec<f64> = arrows.iter().map(|&a| spectral_norm(rep.map(a))).collect();
    for a in 1..=n {
        rk[a][a] = rep.dim(order[a - 1]);
        let mut composite: Option<Matrix> = None;
        let mut scale = 1.0;
        for b in a + 1..=n {
            let next = rep.map(arrows[b - 2]);
            scale *= norms[b - 2];
            let m = match composite.take() {
                None => next.clone(),
                Some(c) => next * c,
            };
            rk[a][b] = rank_of_product(&m, scale, tol);
            composite = Some(m);
        }
    }
    let get = |a: usize, b: usize| -> i64 {
        if a == 0 || b > n {
            0
        } else {
            rk[a][b] as i64
        }
    };
    let mut multiplicities = BTreeMap::new();
    for a in 1..=n {
        for b in a..=n {
            let m = get(a, b) - get(a - 1, b) - get(a, b + 1) + get(a - 1, b + 1);
            if m < 0 {
                return Err(Error::Invalid(format!(
                    "inconsistent numerical ranks: multiplicity of [{a},{b}] is {m}"
                )));
            }
            if m > 0 {
                multiplicities.insert((a, b), m as usize);
            }
        }
    }
    Ok(IntervalBarcode { n, multiplicities })
}

/// One summand of a decomposition.
#[derive(Clone, Debug)]
pub struct Summand {
    pub rep: Representation,
    /// Per node, columns spanning the summand inside the input's node space.
    pub basis: Vec<Matrix>,
    /// Set when the split budget ran out before certifying indecomposability.
    pub unsplit: bool,
}

#[derive(Clone, Debug)]
pub struct SummandList {
    pub summands: Vec<Summand>,
}

impl SummandList {
    pub fn has_unsplit(&self) -> bool {
        self.summands.iter().any(|s| s.unsplit)
    }

    /// Dimension vectors of all summands, sorted.
    pub fn dimension_vectors(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.summands.iter().map(|s| s.rep.dims().to_vec()).collect();
        v.sort();
        v
    }

    /// Direct sum of the summands (the zero representation when empty).
    pub fn direct_sum(&self, like: &Representation) -> Result<Representation> {
        let mut acc = Representation::zero(like.shared_quiver());
        for s in &self.summands {
            acc = acc.direct_sum(&s.rep)?;
        }
        Ok(acc)
    }

    /// Per node, the summand bases side by side: an invertible change of
    /// basis taking the direct sum to the input.
    pub fn assembled_basis(&self, like: &Representation) -> Vec<Matrix> {
        like.dims()
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let cols: usize = self.summands.iter().map(|s| s.basis[i].ncols()).sum();
                let mut m = Matrix::zeros(d, cols);
                let mut c = 0;
                for s in &self.summands {
                    let b = &s.basis[i];
                    m.view_mut((0, c), b.shape()).copy_from(b);
                    c += b.ncols();
                }
                m
            })
            .collect()
    }

    /// Checks the direct sum of summands is isomorphic to `original`.
    pub fn verify(&self, original: &Representation, seed: u64, tol: RankTolerance) -> Result<bool> {
        let sum = self.direct_sum(original)?;
        Ok(is_isomorphic(&sum, original, DEFAULT_TRIALS, seed, tol)?.isomorphic)
    }
}

/// Splits `rep` into summands along generalized eigenspaces of random
/// endomorphisms. A summand whose endomorphism algebra is one-dimensional
/// is certified indecomposable; one that resists `max_rounds` random
/// splits is returned with `unsplit` set.
pub fn generic_decompose(rep: &Representation, seed: u64, max_rounds: usize, tol: RankTolerance) -> SummandList {
    let mut g = rng(seed);
    let identity: Vec<Matrix> = rep.dims().iter().map(|&d| Matrix::identity(d, d)).collect();
    let mut pending = vec![(rep.clone(), identity)];
    let mut done = Vec::new();
    while let Some((current, basis)) = pending.pop() {
        if current.total_dim() == 0 {
            continue;
        }
        let end = hom_basis(&current, &current, tol).expect("same quiver");
        if end.len() <= 1 {
            done.push(Summand {
                rep: current,
                basis,
                unsplit: false,
            });
            continue;
        }
        let mut split = None;
        for _ in 0..max_rounds {
            let coeffs: Vec<f64> = (0..end.len()).map(|_| g.sample(StandardNormal)).collect();
            let e = combine(&end, &coeffs).expect("non-empty basis");
            if let Some(parts) = split_by_endomorphism(&current, &e.blocks) {
                split = Some(parts);
                break;
            }
        }
        match split {
            Some(parts) => {
                // pushed in reverse so summands come out in cluster order
                for (sub, local) in parts.into_iter().rev() {
                    let composed = basis.iter().zip(&local).map(|(b, l)| b * l).collect();
                    pending.push((sub, composed));
                }
            }
            None => done.push(Summand {
                rep: current,
                basis,
                unsplit: true,
            }),
        }
    }
    SummandList { summands: done }
}

/// Eigenvalue with its node, keyed by `(re, |im|)` so conjugates cluster together.
struct Eigen {
    node: usize,
    re: f64,
    im: f64,
}

fn eigenvalues(m: &Matrix) -> Option<Vec<(f64, f64)>> {
    if m.nrows() == 0 {
        return Some(Vec::new());
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 10_000)?;
    Some(schur.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect())
}

/// Single-linkage clusters of eigenvalues with gap `CLUSTER_GAP · scale`.
fn cluster(eigs: &[Eigen]) -> Vec<usize> {
    let scale = eigs.iter().fold(0.0f64, |acc, e| acc.max(e.re.hypot(e.im)));
    let gap = CLUSTER_GAP * scale;
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = (eigs[i].re - eigs[j].re).hypot(eigs[i].im.abs() - eigs[j].im.abs());
            if d <= gap {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut labels = BTreeMap::new();
    (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            let next = labels.len();
            *labels.entry(r).or_insert(next)
        })
        .collect()
}

/// Real polynomial `∏ (E − λ)` over the given eigenvalues, pairing conjugates.
fn cluster_polynomial(e: &Matrix, eigs: &[(f64, f64)]) -> Matrix {
    let d = e.nrows();
    let id = Matrix::identity(d, d);
    let mut p = id.clone();
    for &(re, im) in eigs {
        if im.is_zero() {
            p = (e - &id * re) * p;
        } else if im > 0.0 {
            let quad = e * e - e * (2.0 * re) + &id * (re * re + im * im);
            p = quad * p;
        }
    }
    p
}

/// Splits `rep` into the generalized eigenspaces of the endomorphism with
/// node blocks `e`; `None` when there is a single cluster or the split
/// fails its invariance check.
fn split_by_endomorphism(rep: &Representation, e: &[Matrix]) -> Option<Vec<(Representation, Vec<Matrix>)>> {
    let mut eigs = Vec::new();
    for (node, block) in e.iter().enumerate() {
        for (re, im) in eigenvalues(block)? {
            eigs.push(Eigen { node, re, im });
        }
    }
    let labels = cluster(&eigs);
    let clusters = labels.iter().copied().max().map_or(0, |m| m + 1);
    if clusters < 2 {
        return None;
    }
    let q = rep.quiver();
    let mut parts = Vec::with_capacity(clusters);
    for c in 0..clusters {
        let mut basis = Vec::with_capacity(rep.dims().len());
        for (node, block) in e.iter().enumerate() {
            let members: Vec<(f64, f64)> = eigs
                .iter()
                .zip(&labels)
                .filter(|(ev, &l)| l == c && ev.node == node)
                .map(|(ev, _)| (ev.re, ev.im))
                .collect();
            let d = block.nrows();
            if members.is_empty() {
                basis.push(Matrix::zeros(d, 0));
                continue;
            }
            let poly = cluster_polynomial(block, &members);
            let (kernel, inside, outside) = smallest_right_singular(&poly, members.len());
            let scale = singular_values(&poly).first().copied().unwrap_or(0.0);
            if outside.is_finite() && inside > 1e-6 * outside.max(scale * 1e-12) {
                return None;
            }
            basis.push(kernel);
        }
        let maps: Vec<Matrix> = (0..q.arrow_count())
            .map(|a| basis[q.head(a)].transpose() * rep.map(a) * &basis[q.tail(a)])
            .collect();
        // invariance: π(a) B_t must lie in span B_h
        for a in 0..q.arrow_count() {
            let image = rep.map(a) * &basis[q.tail(a)];
            let resid = &image - &basis[q.head(a)] * &maps[a];
            if max_abs(&resid) > 1e-8 * (1.0 + max_abs(rep.map(a))) {
                return None;
            }
        }
        let dims = basis.iter().map(|b| b.ncols()).collect();
        let sub = Representation::new(rep.shared_quiver(), dims, maps).ok()?;
        parts.push((sub, basis));
    }
    // the pieces must jointly span every node space
    for i in 0..rep.dims().len() {
        let d = rep.dim(i);
        if d == 0 {
            continue;
        }
        let mut joined = Matrix::zeros(d, d);
        let mut col = 0;
        for (_, b) in &parts {
            let bi = &b[i];
            if col + bi.ncols() > d {
                return None;
            }
            joined.view_mut((0, col), bi.shape()).copy_from(bi);
            col += bi.ncols();
        }
        let s = singular_values(&joined);
        if col != d || s.last().copied().unwrap_or(0.0) < 1e-8 * s[0] {
            return None;
        }
    }
    Some(parts)
}

/// For an acyclic quiver: semisimple iff every arrow map vanishes.
pub fn is_semisimple(rep: &Representation) -> Result<bool> {
    Ok(first_nonzero_arrow(rep)?.is_none())
}

fn first_nonzero_arrow(rep: &Representation) -> Result<Option<(usize, f64)>> {
    if !rep.quiver().is_acyclic() {
        return Err(Error::Cyclic);
    }
    Ok(rep
        .maps()
        .iter()
        .enumerate()
        .map(|(a, m)| (a, max_abs(m)))
        .find(|&(_, n)| n > SEMISIMPLE_TOLERANCE))
}

/// Multiplicity of each node simple in a composition series; for acyclic
/// quivers this is the node dimension.
pub fn composition_factors(rep: &Representation) -> Result<Vec<usize>> {
    if !rep.quiver().is_acyclic() {
        return Err(Error::Cyclic);
    }
    Ok(rep.dims().to_vec())
}

/// A signal expressed in simple-type coordinates.
///
/// For acyclic quivers every simple is one-dimensional, so each Fourier
/// component is a scalar; `components[i]` lists the `m(U_i, M)` components
/// of simple type `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierDecomposition {
    pub multiplicities: Vec<usize>,
    pub components: Vec<Vec<f64>>,
}

impl FourierDecomposition {
    /// `Δ⁻¹`: back to node blocks.
    pub fn synthesize(&self, rep: &Representation) -> Result<QuiverSignal> {
        let flat: Vec<f64> = self.components.iter().flatten().copied().collect();
        QuiverSignal::from_flat(rep, &flat)
    }

    /// `ρ(c)` in decomposed coordinates: the trivial path `e_i` scales the
    /// type-`i` components; longer paths act as zero on a semisimple module.
    pub fn apply_filter(&self, rep: &Representation, c: &FilterElement) -> Result<FourierDecomposition> {
        if !c.belongs_to(rep.quiver()) {
            return Err(Error::QuiverMismatch);
        }
        let mut scale = vec![0.0; self.components.len()];
        for (p, coeff) in c.terms() {
            if p.is_trivial() {
                scale[p.tail()] += coeff;
            }
        }
        Ok(FourierDecomposition {
            multiplicities: self.multiplicities.clone(),
            components: self
                .components
                .iter()
                .zip(&scale)
                .map(|(comp, &s)| comp.iter().map(|v| s * v).collect())
                .collect(),
        })
    }
}

/// `Δ: x ↦ x̂` for a semisimple representation.
pub fn fourier_decompose(rep: &Representation, x: &QuiverSignal) -> Result<FourierDecomposition> {
    if let Some((a, norm)) = first_nonzero_arrow(rep)? {
        return Err(Error::NotSemisimple {
            arrow: rep.quiver().arrows()[a].id.clone(),
            norm,
        });
    }
    rep.check_signal(x)?;
    Ok(FourierDecomposition {
        multiplicities: rep.dims().to_vec(),
        components: x.blocks().iter().map(|b| b.iter().copied().collect()).collect(),
    })
}
