//! Intertwining maps between representations of the same quiver.
//!
//! `Hom(π, ρ)` is computed as the null space of the linear system
//! `T_{h(a)} π(a) − ρ(a) T_{t(a)} = 0` over the stacked, column-major
//! vectorised node blocks `T_i`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{is_invertible, kron, max_abs, null_space, Matrix, RankTolerance};
use crate::representation::Representation;
use crate::sample::rng;

/// Number of random trials used by [`is_isomorphic`] unless overridden.
pub const DEFAULT_TRIALS: usize = 8;

/// Relative tolerance for the commuting-square check.
pub const COMMUTING_TOLERANCE: f64 = 1e-9;

/// A family of node maps `T_i: source(i) → target(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Intertwiner {
    pub source: Representation,
    pub target: Representation,
    pub blocks: Vec<Matrix>,
}

impl Intertwiner {
    pub fn identity(rep: &Representation) -> Self {
        Intertwiner {
            source: rep.clone(),
            target: rep.clone(),
            blocks: rep.dims().iter().map(|&d| Matrix::identity(d, d)).collect(),
        }
    }

    /// Largest entry of `T_{h(a)} π(a) − ρ(a) T_{t(a)}` over all arrows, and
    /// the largest entry among the products themselves.
    pub fn residual(&self) -> (f64, f64) {
        let q = self.source.quiver();
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for a in 0..q.arrow_count() {
            let left = &self.blocks[q.head(a)] * self.source.map(a);
            let right = self.target.map(a) * &self.blocks[q.tail(a)];
            worst = worst.max(max_abs(&(&left - &right)));
            scale = scale.max(max_abs(&left)).max(max_abs(&right));
        }
        (worst, scale)
    }

    /// Every commuting square holds within `1e-9 · (1 + max norm)`.
    pub fn commutes(&self) -> bool {
        let (worst, scale) = self.residual();
        worst <= COMMUTING_TOLERANCE * (1.0 + scale)
    }

    pub fn is_invertible(&self, tol: RankTolerance) -> bool {
        self.blocks.iter().all(|b| b.nrows() == 0 && b.ncols() == 0 || is_invertible(b, tol))
    }

    /// Inverse intertwiner (target → source); `None` if some block is singular.
    pub fn inverse(&self) -> Option<Intertwiner> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| if b.is_empty() { Some(b.clone()) } else { b.clone().try_inverse() })
            .collect::<Option<Vec<_>>>()?;
        Some(Intertwiner {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks,
        })
    }

    /// Flattened block-diagonal matrix acting on the total space.
    pub fn total_matrix(&self) -> Matrix {
        let rows: usize = self.blocks.iter().map(|b| b.nrows()).sum();
        let cols: usize = self.blocks.iter().map(|b| b.ncols()).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in &self.blocks {
            out.view_mut((r, c), b.shape()).copy_from(b);
            r += b.nrows();
            c += b.ncols();
        }
        out
    }
}

fn check_same_quiver(a: &Representation, b: &Representation) -> Result<()> {
    if a.quiver() == b.quiver() {
        Ok(())
    } else {
        Err(Error::QuiverMismatch)
    }
}

/// Column offsets of each node's vectorised block in the unknown vector.
fn unknown_offsets(src: &Representation, dst: &Representation) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(src.dims().len());
    let mut acc = 0;
    for (s, d) in src.dims().iter().zip(dst.dims()) {
        offsets.push(acc);
        acc += s * d;
    }
    (offsets, acc)
}

/// The commuting-square system whose null space is `Hom(src, dst)`.
pub fn hom_system(src: &Representation, dst: &Representation) -> Result<Matrix> {
    check_same_quiver(src, dst)?;
    let q = src.quiver();
    let (offsets, unknowns) = unknown_offsets(src, dst);
    let rows: usize = (0..q.arrow_count())
        .map(|a| dst.dim(q.head(a)) * src.dim(q.tail(a)))
        .sum();
    let mut system = Matrix::zeros(rows, unknowns);
    let mut row = 0;
    for a in 0..q.arrow_count() {
        let (t, h) = (q.tail(a), q.head(a));
        let height = dst.dim(h) * src.dim(t);
        if height == 0 {
            continue;
        }
        // vec(T_h π) = (πᵀ ⊗ I) vec(T_h)
        let left = kron(&src.map(a).transpose(), &Matrix::identity(dst.dim(h), dst.dim(h)));
        // vec(ρ T_t) = (I ⊗ ρ) vec(T_t)
        let right = kron(&Matrix::identity(src.dim(t), src.dim(t)), dst.map(a));
        {
            let mut v = system.view_mut((row, offsets[h]), left.shape());
            v += &left;
        }
        {
            let mut v = system.view_mut((row, offsets[t]), right.shape());
            v -= &right;
        }
        row += height;
    }
    Ok(system)
}

fn unpack(src: &Representation, dst: &Representation, v: &[f64]) -> Vec<Matrix> {
    let (offsets, _) = unknown_offsets(src, dst);
    src.dims()
        .iter()
        .zip(dst.dims())
        .zip(offsets)
        .map(|((&s, &d), off)| Matrix::from_column_slice(d, s, &v[off..off + s * d]))
        .collect()
}

/// Basis of `Hom(src, dst)` from the numerical null space of the
/// commuting-square system.
pub fn hom_basis(src: &Representation, dst: &Representation, tol: RankTolerance) -> Result<Vec<Intertwiner>> {
    let system = hom_system(src, dst)?;
    if system.ncols() == 0 {
        return Ok(Vec::new());
    }
    let null = null_space(&system, tol);
    Ok(null
        .column_iter()
        .map(|col| {
            let v: Vec<f64> = col.iter().copied().collect();
            Intertwiner {
                source: src.clone(),
                target: dst.clone(),
                blocks: unpack(src, dst, &v),
            }
        })
        .collect())
}

pub fn hom_dim(src: &Representation, dst: &Representation, tol: RankTolerance) -> Result<usize> {
    hom_basis(src, dst, tol).map(|b| b.len())
}

/// Dimension of the endomorphism algebra.
pub fn end_dim(rep: &Representation, tol: RankTolerance) -> usize {
    hom_dim(rep, rep, tol).expect("a representation shares its own quiver")
}

/// Linear combination of intertwiners with the same source and target.
pub fn combine(basis: &[Intertwiner], coeffs: &[f64]) -> Option<Intertwiner> {
    let first = basis.first()?;
    let mut blocks: Vec<Matrix> = first.blocks.iter().map(|b| Matrix::zeros(b.nrows(), b.ncols())).collect();
    for (t, &c) in basis.iter().zip(coeffs) {
        for (acc, b) in blocks.iter_mut().zip(&t.blocks) {
            *acc += c * b;
        }
    }
    Some(Intertwiner {
        source: first.source.clone(),
        target: first.target.clone(),
        blocks,
    })
}

/// Outcome of an isomorphism search. `isomorphic == true` is certified by
/// `witness`; `false` means no isomorphism was found.
#[derive(Clone, Debug)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    pub witness: Option<Intertwiner>,
}

/// Randomized isomorphism test: samples `trials` random elements of
/// `Hom(a, b)` and returns the first whose node blocks are all invertible.
pub fn is_isomorphic(
    a: &Representation,
    b: &Representation,
    trials: usize,
    seed: u64,
    tol: RankTolerance,
) -> Result<IsoVerdict> {
    check_same_quiver(a, b)?;
    let none = IsoVerdict {
        isomorphic: false,
        witness: None,
    };
    if a.dims() != b.dims() {
        return Ok(none);
    }
    if a.total_dim() == 0 {
        return Ok(IsoVerdict {
            isomorphic: true,
            witness: Some(Intertwiner::identity(a)),
        });
    }
    let basis = hom_basis(a, b, tol)?;
    if basis.is_empty() {
        return Ok(none);
    }
    let mut g = rng(seed);
    for _ in 0..trials {
        let coeffs: Vec<f64> = (0..basis.len()).map(|_| g.sample(StandardNormal)).collect();
        let t = combine(&basis, &coeffs).expect("basis is non-empty");
        if t.is_invertible(tol) {
            return Ok(IsoVerdict {
                isomorphic: true,
                witness: Some(t),
            });
        }
    }
    Ok(none)
}
