//! Quiver representations, signals on them, filtering and shift operators.
//!
//! Arrow maps act on column vectors: the matrix of arrow `a` has shape
//! `dims[h(a)] × dims[t(a)]`. Flattened signals concatenate node blocks in
//! quiver node order.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{block_diag, Matrix};
use crate::path_algebra::FilterElement;
use crate::quiver::{Path, Quiver};

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    quiver: Arc<Quiver>,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl Representation {
    /// `dims` in node order, `maps` in arrow order.
    pub fn new(quiver: impl Into<Arc<Quiver>>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        let quiver = quiver.into();
        if dims.len() != quiver.node_count() {
            return Err(Error::Invalid(format!(
                "expected {} node dimensions, got {}",
                quiver.node_count(),
                dims.len()
            )));
        }
        if maps.len() < quiver.arrow_count() {
            return Err(Error::MissingMap(quiver.arrows()[maps.len()].id.clone()));
        }
        if maps.len() > quiver.arrow_count() {
            return Err(Error::Invalid(format!(
                "expected {} arrow maps, got {}",
                quiver.arrow_count(),
                maps.len()
            )));
        }
        for (a, m) in maps.iter().enumerate() {
            let (rows, cols) = (dims[quiver.head(a)], dims[quiver.tail(a)]);
            if m.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch {
                    arrow: quiver.arrows()[a].id.clone(),
                    rows,
                    cols,
                    got_rows: m.nrows(),
                    got_cols: m.ncols(),
                });
            }
        }
        Ok(Representation { quiver, dims, maps })
    }

    /// Builds a representation from maps keyed by node and arrow identifiers.
    pub fn from_named(
        quiver: impl Into<Arc<Quiver>>,
        dims: &BTreeMap<String, usize>,
        maps: &BTreeMap<String, Matrix>,
    ) -> Result<Self> {
        let quiver = quiver.into();
        for id in dims.keys() {
            if quiver.node_index(id).is_none() {
                return Err(Error::UnknownNode(id.clone()));
            }
        }
        for id in maps.keys() {
            if quiver.arrow_index(id).is_none() {
                return Err(Error::UnknownArrow(id.clone()));
            }
        }
        let dims_vec = quiver
            .nodes()
            .iter()
            .map(|n| dims.get(n).copied().ok_or_else(|| Error::Invalid(format!("missing dimension for node `{n}`"))))
            .collect::<Result<Vec<_>>>()?;
        let maps_vec = quiver
            .arrows()
            .iter()
            .map(|a| maps.get(&a.id).cloned().ok_or_else(|| Error::MissingMap(a.id.clone())))
            .collect::<Result<Vec<_>>>()?;
        Representation::new(quiver, dims_vec, maps_vec)
    }

    /// Representation with the given dimensions and all arrow maps zero.
    pub fn zero_maps(quiver: impl Into<Arc<Quiver>>, dims: Vec<usize>) -> Result<Self> {
        let quiver = quiver.into();
        let maps = (0..quiver.arrow_count())
            .map(|a| Matrix::zeros(*dims.get(quiver.head(a)).unwrap_or(&0), *dims.get(quiver.tail(a)).unwrap_or(&0)))
            .collect();
        Representation::new(quiver, dims, maps)
    }

    /// The zero representation (every node space is `{0}`).
    pub fn zero(quiver: impl Into<Arc<Quiver>>) -> Self {
        let quiver = quiver.into();
        let n = quiver.node_count();
        Representation::zero_maps(quiver, vec![0; n]).expect("zero representation is well formed")
    }

    /// Interval module `[a, b]` (1-based, inclusive) on the chain with `n` nodes.
    pub fn interval(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == 0 || a > b || b > n {
            return Err(Error::Invalid(format!("interval [{a},{b}] outside 1..={n}")));
        }
        let q = Quiver::chain(n);
        let dims: Vec<usize> = (1..=n).map(|i| usize::from(a <= i && i <= b)).collect();
        let maps = (1..n)
            .map(|i| {
                let (rows, cols) = (dims[i], dims[i - 1]);
                if rows == 1 && cols == 1 {
                    Matrix::identity(1, 1)
                } else {
                    Matrix::zeros(rows, cols)
                }
            })
            .collect();
        Representation::new(q, dims, maps)
    }

    /// Direct sum of interval modules on the `n`-node chain, with
    /// multiplicities keyed by `(start, end)`.
    pub fn interval_sum(n: usize, multiplicities: &BTreeMap<(usize, usize), usize>) -> Result<Self> {
        let mut acc = Representation::zero(Quiver::chain(n));
        for (&(a, b), &m) in multiplicities {
            let iv = Representation::interval(n, a, b)?;
            for _ in 0..m {
                acc = acc.direct_sum(&iv)?;
            }
        }
        Ok(acc)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn shared_quiver(&self) -> Arc<Quiver> {
        Arc::clone(&self.quiver)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, node: usize) -> usize {
        self.dims[node]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &Matrix {
        &self.maps[arrow]
    }

    /// Offset of each node's block in the flattened total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    fn check_path(&self, p: &Path) -> Result<()> {
        if self.quiver.owns(p) {
            Ok(())
        } else {
            Err(Error::QuiverMismatch)
        }
    }

    /// `π(p) = π(a_ℓ)⋯π(a_1)`; the identity for a trivial path.
    pub fn eval_path(&self, p: &Path) -> Result<Matrix> {
        self.check_path(p)?;
        let mut arrows = p.arrows().iter();
        let Some(&first) = arrows.next() else {
            let d = self.dims[p.tail()];
            return Ok(Matrix::identity(d, d));
        };
        let mut m = self.maps[first].clone();
        for &a in arrows {
            m = &self.maps[a] * m;
        }
        Ok(m)
    }

    /// `y = ρ(c)x`: each term moves `coeff · π(p) x(t(p))` into block `h(p)`.
    pub fn apply_filter(&self, c: &FilterElement, x: &QuiverSignal) -> Result<QuiverSignal> {
        if !c.belongs_to(&self.quiver) {
            return Err(Error::QuiverMismatch);
        }
        self.check_signal(x)?;
        let mut y = QuiverSignal::zeros(self);
        for (p, coeff) in c.terms() {
            let m = self.eval_path(p)?;
            y.blocks[p.head()] += coeff * (m * &x.blocks[p.tail()]);
        }
        Ok(y)
    }

    /// Dense `dim(M) × dim(M)` matrix of `ρ(c)`.
    pub fn filter_matrix(&self, c: &FilterElement) -> Result<Matrix> {
        if !c.belongs_to(&self.quiver) {
            return Err(Error::QuiverMismatch);
        }
        let n = self.total_dim();
        let off = self.offsets();
        let mut out = Matrix::zeros(n, n);
        for (p, coeff) in c.terms() {
            let m = self.eval_path(p)?;
            let mut view = out.view_mut((off[p.head()], off[p.tail()]), m.shape());
            view += coeff * m;
        }
        Ok(out)
    }

    /// The shift operator `ρ(p)` materialised as a block matrix.
    pub fn shift_operator(&self, p: &Path) -> Result<ShiftMatrix> {
        let block = self.eval_path(p)?;
        let offsets = self.offsets();
        let n = self.total_dim();
        let mut matrix = Matrix::zeros(n, n);
        matrix
            .view_mut((offsets[p.head()], offsets[p.tail()]), block.shape())
            .copy_from(&block);
        Ok(ShiftMatrix {
            matrix,
            dims: self.dims.clone(),
            head: p.head(),
            tail: p.tail(),
        })
    }

    /// `(π₁ ⊕ π₂)(i) = π₁(i) ⊕ π₂(i)` with block-diagonal arrow maps.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if *self.quiver != *other.quiver {
            return Err(Error::QuiverMismatch);
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| block_diag(a, b))
            .collect();
        Representation::new(Arc::clone(&self.quiver), dims, maps)
    }

    /// Conjugates by per-node invertible matrices: arrow `a` becomes
    /// `P_{h(a)} · π(a) · P_{t(a)}⁻¹`.
    pub fn change_basis(&self, basis: &[Matrix]) -> Result<Representation> {
        if basis.len() != self.dims.len() {
            return Err(Error::Invalid("one basis change per node required".into()));
        }
        let mut inverses = Vec::with_capacity(basis.len());
        for (i, p) in basis.iter().enumerate() {
            if p.shape() != (self.dims[i], self.dims[i]) {
                return Err(Error::Invalid(format!(
                    "basis change at node `{}` must be {}x{}",
                    self.quiver.nodes()[i],
                    self.dims[i],
                    self.dims[i]
                )));
            }
            let inv = if self.dims[i] == 0 {
                Matrix::zeros(0, 0)
            } else {
                p.clone().try_inverse().ok_or_else(|| {
                    Error::Invalid(format!("basis change at node `{}` is singular", self.quiver.nodes()[i]))
                })?
            };
            inverses.push(inv);
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(a, m)| &basis[self.quiver.head(a)] * m * &inverses[self.quiver.tail(a)])
            .collect();
        Representation::new(Arc::clone(&self.quiver), self.dims.clone(), maps)
    }

    pub fn check_signal(&self, x: &QuiverSignal) -> Result<()> {
        if x.quiver != self.quiver.fingerprint() {
            return Err(Error::QuiverMismatch);
        }
        for (i, b) in x.blocks.iter().enumerate() {
            if b.len() != self.dims[i] {
                return Err(Error::BlockLength {
                    node: self.quiver.nodes()[i].clone(),
                    expected: self.dims[i],
                    got: b.len(),
                });
            }
        }
        Ok(())
    }
}

/// A signal: one real vector per node.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverSignal {
    quiver: u64,
    blocks: Vec<DVector<f64>>,
}

impl QuiverSignal {
    pub fn new(rep: &Representation, blocks: Vec<DVector<f64>>) -> Result<Self> {
        if blocks.len() != rep.dims.len() {
            return Err(Error::Invalid(format!(
                "expected {} signal blocks, got {}",
                rep.dims.len(),
                blocks.len()
            )));
        }
        let x = QuiverSignal {
            quiver: rep.quiver.fingerprint(),
            blocks,
        };
        rep.check_signal(&x)?;
        Ok(x)
    }

    pub fn from_named(rep: &Representation, blocks: &BTreeMap<String, Vec<f64>>) -> Result<Self> {
        for id in blocks.keys() {
            if rep.quiver.node_index(id).is_none() {
                return Err(Error::UnknownNode(id.clone()));
            }
        }
        let vecs = rep
            .quiver
            .nodes()
            .iter()
            .map(|n| {
                blocks
                    .get(n)
                    .map(|v| DVector::from_vec(v.clone()))
                    .ok_or_else(|| Error::Invalid(format!("missing signal block for node `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        QuiverSignal::new(rep, vecs)
    }

    pub fn zeros(rep: &Representation) -> Self {
        QuiverSignal {
            quiver: rep.quiver.fingerprint(),
            blocks: rep.dims.iter().map(|&d| DVector::zeros(d)).collect(),
        }
    }

    pub fn from_flat(rep: &Representation, flat: &[f64]) -> Result<Self> {
        if flat.len() != rep.total_dim() {
            return Err(Error::Invalid(format!(
                "flat signal has length {}, expected {}",
                flat.len(),
                rep.total_dim()
            )));
        }
        let mut offset = 0;
        let blocks = rep
            .dims
            .iter()
            .map(|&d| {
                let b = DVector::from_column_slice(&flat[offset..offset + d]);
                offset += d;
                b
            })
            .collect();
        Ok(QuiverSignal {
            quiver: rep.quiver.fingerprint(),
            blocks,
        })
    }

    pub fn blocks(&self) -> &[DVector<f64>] {
        &self.blocks
    }

    pub fn block(&self, node: usize) -> &DVector<f64> {
        &self.blocks[node]
    }

    pub fn flatten(&self) -> DVector<f64> {
        let data: Vec<f64> = self.blocks.iter().flat_map(|b| b.iter().copied()).collect();
        DVector::from_vec(data)
    }

    /// `alpha·self + beta·other`, assuming equal layouts.
    pub fn combine(&self, alpha: f64, other: &QuiverSignal, beta: f64) -> Result<QuiverSignal> {
        if self.quiver != other.quiver || self.blocks.len() != other.blocks.len() {
            return Err(Error::QuiverMismatch);
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            if a.len() != b.len() {
                return Err(Error::Invalid("signal layouts differ".into()));
            }
            blocks.push(a * alpha + b * beta);
        }
        Ok(QuiverSignal {
            quiver: self.quiver,
            blocks,
        })
    }
}

/// Dense shift operator with its block layout.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftMatrix {
    pub matrix: Matrix,
    dims: Vec<usize>,
    head: usize,
    tail: usize,
}

impl ShiftMatrix {
    /// Block at `(row node, column node)`.
    pub fn block(&self, row: usize, col: usize) -> Matrix {
        let mut offsets = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            offsets.push(acc);
            acc += d;
        }
        self.matrix
            .view((offsets[row], offsets[col]), (self.dims[row], self.dims[col]))
            .into_owned()
    }

    /// The block position that may be nonzero: `(h(p), t(p))`.
    pub fn support(&self) -> (usize, usize) {
        (self.head, self.tail)
    }

    /// Block positions holding at least one nonzero entry.
    pub fn nonzero_blocks(&self) -> Vec<(usize, usize)> {
        let n = self.dims.len();
        let mut out = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if self.block(r, c).iter().any(|&v| v != 0.0) {
                    out.push((r, c));
                }
            }
        }
        out
    }
}
