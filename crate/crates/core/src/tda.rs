//! Persistent homology of filtered simplicial complexes as representations
//! of the equioriented chain.
//!
//! Homology is computed over ℚ with exact arithmetic; only the final
//! inclusion-induced maps are converted to `f64`.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use crate::decomposition::{barcode_interval, IntervalBarcode};
use crate::error::{Error, Result};
use crate::linalg::RankTolerance;
use crate::quiver::Quiver;
use crate::rational::{int, Rational, RationalMatrix};
use crate::representation::Representation;

/// A simplex given by its (sorted) vertex identifiers and entry level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub verts: Vec<String>,
    pub level: usize,
}

impl Simplex {
    pub fn new<S: Into<String>>(verts: impl IntoIterator<Item = S>, level: usize) -> Self {
        Simplex {
            verts: verts.into_iter().map(Into::into).collect(),
            level,
        }
    }

    pub fn dim(&self) -> usize {
        self.verts.len() - 1
    }
}

/// A filtration `X_0 ⊆ X_1 ⊆ ⋯ ⊆ X_n` of simplicial complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    simplices: Vec<Simplex>,
    n: usize,
    // per dimension: indices into `simplices`, sorted by (level, verts)
    by_dim: Vec<Vec<usize>>,
    position: HashMap<Vec<String>, usize>,
}

impl FilteredComplex {
    /// Validates closure and monotonicity; `n` is the largest level.
    pub fn new(simplices: Vec<Simplex>) -> Result<Self> {
        Self::with_steps(simplices, None)
    }

    /// As [`FilteredComplex::new`] with an explicit number of steps `n`,
    /// which must be at least the largest level.
    pub fn with_steps(simplices: Vec<Simplex>, steps: Option<usize>) -> Result<Self> {
        let mut seen: HashMap<Vec<String>, usize> = HashMap::new();
        let mut cleaned = Vec::with_capacity(simplices.len());
        for s in simplices {
            if s.verts.is_empty() {
                return Err(Error::InvalidSimplex {
                    simplex: s.verts,
                    reason: "no vertices".into(),
                });
            }
            let mut verts = s.verts.clone();
            verts.sort();
            let unique: BTreeSet<&String> = verts.iter().collect();
            if unique.len() != verts.len() {
                return Err(Error::InvalidSimplex {
                    simplex: s.verts,
                    reason: "repeated vertex".into(),
                });
            }
            if seen.insert(verts.clone(), s.level).is_some() {
                return Err(Error::InvalidSimplex {
                    simplex: verts,
                    reason: "duplicate simplex".into(),
                });
            }
            cleaned.push(Simplex { verts, level: s.level });
        }
        for s in &cleaned {
            if s.verts.len() < 2 {
                continue;
            }
            for skip in 0..s.verts.len() {
                let face = face_without(&s.verts, skip);
                match seen.get(&face) {
                    None => {
                        return Err(Error::InvalidSimplex {
                            simplex: s.verts.clone(),
                            reason: format!("missing face {face:?}"),
                        })
                    }
                    Some(&l) if l > s.level => {
                        return Err(Error::InvalidSimplex {
                            simplex: s.verts.clone(),
                            reason: format!("face {face:?} enters at level {l}, after level {}", s.level),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        cleaned.sort_by(|a, b| (a.level, a.dim(), &a.verts).cmp(&(b.level, b.dim(), &b.verts)));
        let max_level = cleaned.iter().map(|s| s.level).max().unwrap_or(0);
        let n = match steps {
            Some(n) if n < max_level => {
                return Err(Error::Invalid(format!("n = {n} is below the largest level {max_level}")))
            }
            Some(n) => n,
            None => max_level,
        };
        let top = cleaned.iter().map(Simplex::dim).max().map_or(0, |d| d + 1);
        let mut by_dim = vec![Vec::new(); top];
        for (i, s) in cleaned.iter().enumerate() {
            by_dim[s.dim()].push(i);
        }
        let mut position = HashMap::new();
        for list in &by_dim {
            for (k, &i) in list.iter().enumerate() {
                position.insert(cleaned[i].verts.clone(), k);
            }
        }
        Ok(FilteredComplex {
            simplices: cleaned,
            n,
            by_dim,
            position,
        })
    }

    /// Simplices sorted by `(level, dimension, vertices)`.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    /// Number of `k`-simplices present at `level`.
    pub fn chain_dim(&self, k: usize, level: usize) -> usize {
        self.by_dim
            .get(k)
            .map_or(0, |v| v.iter().filter(|&&i| self.simplices[i].level <= level).count())
    }

    /// Matrix of `∂_k: C_k(X_ℓ) → C_{k−1}(X_ℓ)`; removing the `i`-th vertex
    /// (in sorted order) contributes sign `(−1)^i`. `∂_0` maps to the zero
    /// space.
    pub fn boundary_matrix(&self, k: usize, level: usize) -> RationalMatrix {
        if k == 0 {
            return RationalMatrix::zeros(0, self.chain_dim(0, level));
        }
        let rows = self.chain_dim(k - 1, level);
        let cols = self.chain_dim(k, level);
        let mut m = RationalMatrix::zeros(rows, cols);
        let Some(list) = self.by_dim.get(k) else { return m };
        for (c, &i) in list.iter().take(cols).enumerate() {
            let verts = &self.simplices[i].verts;
            for skip in 0..verts.len() {
                let r = self.position[&face_without(verts, skip)];
                let sign = if skip % 2 == 0 { 1 } else { -1 };
                m.set(r, c, int(sign));
            }
        }
        m
    }

    /// Betti number via rank–nullity on the boundary maps.
    pub fn betti(&self, k: usize, level: usize) -> usize {
        self.chain_dim(k, level) - self.boundary_matrix(k, level).rank() - self.boundary_matrix(k + 1, level).rank()
    }

    /// Cycle representatives spanning `H_k(X_ℓ)`.
    pub fn homology_basis(&self, k: usize, level: usize) -> HomologyBasis {
        let dim = self.chain_dim(k, level);
        let cycles = self.boundary_matrix(k, level).null_space();
        let boundaries = self.boundary_matrix(k + 1, level);
        let (_, bpivots) = boundaries.rref();
        let bbasis = boundaries.select_columns(&bpivots);
        let z = RationalMatrix::from_columns(dim, &cycles);
        let (_, pivots) = bbasis.hstack(&z).rref();
        let representatives = pivots
            .iter()
            .filter(|&&p| p >= bbasis.cols())
            .map(|&p| cycles[p - bbasis.cols()].clone())
            .collect();
        HomologyBasis {
            level,
            degree: k,
            chain_dim: dim,
            boundary_basis: bbasis,
            representatives,
        }
    }

    /// `H_k(X_0) → H_k(X_1) → ⋯ → H_k(X_n)` as a representation of the
    /// chain with `n + 1` nodes.
    pub fn persistence_representation(&self, k: usize) -> Result<Representation> {
        let bases: Vec<HomologyBasis> = (0..=self.n).map(|l| self.homology_basis(k, l)).collect();
        let dims: Vec<usize> = bases.iter().map(HomologyBasis::dim).collect();
        let mut maps = Vec::with_capacity(self.n);
        for l in 0..self.n {
            maps.push(induced_map(&bases[l], &bases[l + 1])?.to_f64());
        }
        Representation::new(Quiver::chain(self.n + 1), dims, maps)
    }

    pub fn persistence_barcode(&self, k: usize) -> Result<IntervalBarcode> {
        barcode_interval(&self.persistence_representation(k)?, RankTolerance::Default)
    }
}

fn face_without(verts: &[String], skip: usize) -> Vec<String> {
    verts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, v)| v.clone())
        .collect()
}

#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub level: usize,
    pub degree: usize,
    chain_dim: usize,
    boundary_basis: RationalMatrix,
    /// Cycles (in `C_k(X_ℓ)` coordinates) independent modulo boundaries.
    pub representatives: Vec<Vec<Rational>>,
}

impl HomologyBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

/// Matrix of the inclusion-induced map between consecutive homology bases.
fn induced_map(from: &HomologyBasis, to: &HomologyBasis) -> Result<RationalMatrix> {
    let rows = to.chain_dim;
    let padded: Vec<Vec<Rational>> = from
        .representatives
        .iter()
        .map(|z| {
            let mut v = z.clone();
            v.resize(rows, Rational::zero());
            v
        })
        .collect();
    let reps = RationalMatrix::from_columns(rows, &to.representatives);
    let basis = to.boundary_basis.hstack(&reps);
    let rhs = RationalMatrix::from_columns(rows, &padded);
    let coords = basis
        .solve(&rhs)
        .ok_or_else(|| Error::Invalid("cycle image outside the cycle space".into()))?;
    let offset = to.boundary_basis.cols();
    let mut out = RationalMatrix::zeros(to.dim(), from.dim());
    for r in 0..to.dim() {
        for c in 0..from.dim() {
            out.set(r, c, coords.get(offset + r, c).clone());
        }
    }
    Ok(out)
}

/// Three vertices at level 0, three edges at level 1, the 2-simplex at level 2.
pub fn filtered_triangle() -> FilteredComplex {
    FilteredComplex::new(vec![
        Simplex::new(["a"], 0),
        Simplex::new(["b"], 0),
        Simplex::new(["c"], 0),
        Simplex::new(["a", "b"], 1),
        Simplex::new(["a", "c"], 1),
        Simplex::new(["b", "c"], 1),
        Simplex::new(["a", "b", "c"], 2),
    ])
    .expect("triangle fixture is valid")
}
