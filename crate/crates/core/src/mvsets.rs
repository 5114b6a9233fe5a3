//! A-valued subsets and relations over finite carriers.
//!
//! Carriers are positional: an [`MvSet`] over a carrier of `n` elements is a
//! dense vector of `n` degrees, and the carrier names live with whoever owns
//! the set (a context, a lattice). All operations check lengths.

use serde::{Deserialize, Serialize};

use crate::algebra::{Truth, TruthAlgebra};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MvSet(Vec<Truth>);

impl MvSet {
    pub fn new(degrees: Vec<Truth>) -> Self {
        MvSet(degrees)
    }

    /// Builds a set from raw indices, checking each against the algebra.
    pub fn from_indices(alg: &TruthAlgebra, indices: &[usize]) -> Result<Self> {
        indices.iter().map(|&i| alg.value(i)).collect::<Result<_>>().map(MvSet)
    }

    pub fn constant(len: usize, v: Truth) -> Self {
        MvSet(vec![v; len])
    }

    pub fn empty(len: usize) -> Self {
        Self::constant(len, Truth::ZERO)
    }

    pub fn full(alg: &TruthAlgebra, len: usize) -> Self {
        Self::constant(len, alg.top())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degrees(&self) -> &[Truth] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Truth {
        self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = Truth> + '_ {
        self.0.iter().copied()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().map(|v| v.index()).collect()
    }

    pub fn is_constant(&self, v: Truth) -> bool {
        self.0.iter().all(|&d| d == v)
    }

    pub fn meet(&self, alg: &TruthAlgebra, other: &MvSet) -> Result<MvSet> {
        same_len(self, other)?;
        Ok(MvSet(self.0.iter().zip(&other.0).map(|(&a, &b)| alg.meet(a, b)).collect()))
    }

    pub fn join(&self, alg: &TruthAlgebra, other: &MvSet) -> Result<MvSet> {
        same_len(self, other)?;
        Ok(MvSet(self.0.iter().zip(&other.0).map(|(&a, &b)| alg.join(a, b)).collect()))
    }

    /// Pointwise order `f ⊆ g`.
    pub fn is_subset(&self, alg: &TruthAlgebra, other: &MvSet) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(&a, &b)| alg.leq(a, b))
    }

    /// `α → f` pointwise.
    pub fn shift(&self, alg: &TruthAlgebra, alpha: Truth) -> MvSet {
        MvSet(self.0.iter().map(|&d| alg.residuum(alpha, d)).collect())
    }

    pub fn labels(&self, alg: &TruthAlgebra) -> Vec<String> {
        self.0.iter().map(|&d| alg.label(d)).collect()
    }
}

impl From<Vec<Truth>> for MvSet {
    fn from(v: Vec<Truth>) -> Self {
        MvSet(v)
    }
}

fn same_len(f: &MvSet, g: &MvSet) -> Result<()> {
    if f.len() != g.len() {
        return Err(Error::CarrierMismatch { expected: f.len(), found: g.len() });
    }
    Ok(())
}

/// Degree to which `f` is included in `g`: `⋀_z (f(z) → g(z))`, and `1` on an empty carrier.
pub fn subsethood(alg: &TruthAlgebra, f: &MvSet, g: &MvSet) -> Result<Truth> {
    same_len(f, g)?;
    Ok(alg.meet_all(f.0.iter().zip(&g.0).map(|(&a, &b)| alg.residuum(a, b))))
}

/// `{α/w}`: degree `α` at position `w`, `0` elsewhere.
pub fn singleton(alg: &TruthAlgebra, len: usize, alpha: Truth, w: usize) -> Result<MvSet> {
    if w >= len {
        return Err(Error::UnknownElement(format!("position {w} in a carrier of {len}")));
    }
    if !alg.contains(alpha) {
        return Err(Error::ForeignValue { value: alpha.index(), size: alg.size() });
    }
    let mut degrees = vec![Truth::ZERO; len];
    degrees[w] = alpha;
    Ok(MvSet(degrees))
}

/// An A-valued relation `R: U × W → A`, stored row-major (rows index `U`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MvRelation {
    rows: usize,
    cols: usize,
    degrees: Vec<Truth>,
}

impl MvRelation {
    pub fn new(rows: usize, cols: usize, degrees: Vec<Truth>) -> Result<Self> {
        if degrees.len() != rows * cols {
            return Err(Error::Input(format!(
                "relation of shape {rows}×{cols} needs {} degrees, got {}",
                rows * cols,
                degrees.len()
            )));
        }
        Ok(MvRelation { rows, cols, degrees })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Truth) -> Self {
        let degrees = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| f(r, c)).collect();
        MvRelation { rows, cols, degrees }
    }

    /// Parses a matrix of value indices (one inner vector per row).
    pub fn from_matrix(alg: &TruthAlgebra, rows: usize, cols: usize, m: &[Vec<usize>]) -> Result<Self> {
        if m.len() != rows || m.iter().any(|r| r.len() != cols) {
            return Err(Error::Input(format!("expected a {rows}×{cols} matrix")));
        }
        let degrees = m.iter().flatten().map(|&i| alg.value(i)).collect::<Result<_>>()?;
        Ok(MvRelation { rows, cols, degrees })
    }

    /// `Δ_Z`: top on the diagonal, bottom off it.
    pub fn diagonal(alg: &TruthAlgebra, n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { alg.top() } else { alg.bottom() })
    }

    pub fn constant(rows: usize, cols: usize, v: Truth) -> Self {
        MvRelation { rows, cols, degrees: vec![v; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Truth {
        self.degrees[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Truth) {
        self.degrees[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> MvSet {
        MvSet(self.degrees[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn column(&self, c: usize) -> MvSet {
        MvSet((0..self.rows).map(|r| self.get(r, c)).collect())
    }

    pub fn transpose(&self) -> MvRelation {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn to_matrix(&self) -> Vec<Vec<usize>> {
        self.degrees.chunks(self.cols.max(1)).take(self.rows).map(|r| r.iter().map(|v| v.index()).collect()).collect()
    }

    /// `R⁽¹⁾[f]`: `x ↦ ⋀_{a∈U} (f(a) → R(a, x))`, from sets over `U` to sets over `W`.
    pub fn lift1(&self, alg: &TruthAlgebra, f: &MvSet) -> Result<MvSet> {
        if f.len() != self.rows {
            return Err(Error::CarrierMismatch { expected: self.rows, found: f.len() });
        }
        Ok(MvSet(
            (0..self.cols)
                .map(|x| alg.meet_all((0..self.rows).map(|a| alg.residuum(f.get(a), self.get(a, x)))))
                .collect(),
        ))
    }

    /// `R⁽⁰⁾[u]`: `a ↦ ⋀_{x∈W} (u(x) → R(a, x))`, from sets over `W` to sets over `U`.
    pub fn lift0(&self, alg: &TruthAlgebra, u: &MvSet) -> Result<MvSet> {
        if u.len() != self.cols {
            return Err(Error::CarrierMismatch { expected: self.cols, found: u.len() });
        }
        Ok(MvSet(
            (0..self.rows)
                .map(|a| alg.meet_all((0..self.cols).map(|x| alg.residuum(u.get(x), self.get(a, x)))))
                .collect(),
        ))
    }
}
