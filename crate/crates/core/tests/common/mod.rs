//! Brute-force reference implementations. They work on plain index vectors
//! with chain arithmetic written out directly, sharing no code with the
//! library beyond reading its inputs.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use mvpolarity::algebra::AlgebraKind;
use mvpolarity::{Context, MvRelation, MvSet, TruthAlgebra};

/// A finite chain `0 < 1 < … < n-1` with Łukasiewicz or Gödel operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chain {
    pub n: usize,
    pub goedel: bool,
}

impl Chain {
    pub fn luk(n: usize) -> Self {
        Chain { n, goedel: false }
    }

    pub fn goedel(n: usize) -> Self {
        Chain { n, goedel: true }
    }

    pub fn of(alg: &TruthAlgebra) -> Self {
        match alg.kind() {
            AlgebraKind::Boolean | AlgebraKind::Lukasiewicz => Chain::luk(alg.size()),
            AlgebraKind::Goedel => Chain::goedel(alg.size()),
            AlgebraKind::Custom => panic!("oracles cover built-in chains only"),
        }
    }

    pub fn top(&self) -> usize {
        self.n - 1
    }

    pub fn otimes(&self, a: usize, b: usize) -> usize {
        if self.goedel {
            a.min(b)
        } else {
            (a + b).saturating_sub(self.top())
        }
    }

    pub fn imp(&self, a: usize, b: usize) -> usize {
        if a <= b {
            self.top()
        } else if self.goedel {
            b
        } else {
            self.top() - a + b
        }
    }

    /// `⋀ (f(w) → g(w))`.
    pub fn sub(&self, f: &[usize], g: &[usize]) -> usize {
        f.iter().zip(g).map(|(&a, &b)| self.imp(a, b)).min().unwrap_or(self.top())
    }

    /// `x ↦ ⋀_a f(a) → m[a][x]`.
    pub fn lift1(&self, m: &[Vec<usize>], cols: usize, f: &[usize]) -> Vec<usize> {
        (0..cols).map(|x| (0..m.len()).map(|a| self.imp(f[a], m[a][x])).min().unwrap_or(self.top())).collect()
    }

    /// `a ↦ ⋀_x u(x) → m[a][x]`.
    pub fn lift0(&self, m: &[Vec<usize>], u: &[usize]) -> Vec<usize> {
        m.iter().map(|row| row.iter().zip(u).map(|(&r, &ux)| self.imp(ux, r)).min().unwrap_or(self.top())).collect()
    }

    /// Every degree vector of the given length, in lexicographic order.
    pub fn all_sets(&self, len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out.into_iter().flat_map(|v| (0..self.n).map(move |d| [v.clone(), vec![d]].concat())).collect();
        }
        out
    }
}

pub fn leq(f: &[usize], g: &[usize]) -> bool {
    f.iter().zip(g).all(|(a, b)| a <= b)
}

pub fn meet(f: &[usize], g: &[usize]) -> Vec<usize> {
    f.iter().zip(g).map(|(a, b)| *a.min(b)).collect()
}

pub fn join(f: &[usize], g: &[usize]) -> Vec<usize> {
    f.iter().zip(g).map(|(a, b)| *a.max(b)).collect()
}

/// A context given as an index matrix, rows = objects.
#[derive(Debug, Clone)]
pub struct OCtx {
    pub chain: Chain,
    pub i: Vec<Vec<usize>>,
    pub cols: usize,
}

impl OCtx {
    pub fn of(ctx: &Context) -> Self {
        OCtx { chain: Chain::of(ctx.algebra()), i: ctx.incidence().to_matrix(), cols: ctx.attributes().len() }
    }

    pub fn up(&self, f: &[usize]) -> Vec<usize> {
        self.chain.lift1(&self.i, self.cols, f)
    }

    pub fn down(&self, u: &[usize]) -> Vec<usize> {
        self.chain.lift0(&self.i, u)
    }

    /// All `(extent, intent)` pairs with `extent = intent↓` and
    /// `intent = extent↑`, found by testing every extent candidate.
    pub fn concepts(&self) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
        self.chain
            .all_sets(self.i.len())
            .into_iter()
            .filter_map(|f| {
                let u = self.up(&f);
                (self.down(&u) == f).then_some((f, u))
            })
            .collect()
    }
}

/// `b ↦ ⋀_x intent(x) → R_□(b, x)`.
pub fn box_extent(chain: Chain, r_box: &[Vec<usize>], intent: &[usize]) -> Vec<usize> {
    chain.lift0(r_box, intent)
}

/// `x ↦ ⋀_a extent(a) → R_◇(x, a)`.
pub fn diamond_intent(chain: Chain, r_dia: &[Vec<usize>], extent: &[usize]) -> Vec<usize> {
    chain.lift0(r_dia, extent)
}

pub fn algebra(code: u8) -> Arc<TruthAlgebra> {
    Arc::new(match code % 4 {
        0 => TruthAlgebra::boolean(),
        1 => TruthAlgebra::lukasiewicz(3).unwrap(),
        2 => TruthAlgebra::goedel(3).unwrap(),
        _ => TruthAlgebra::lukasiewicz(4).unwrap(),
    })
}

pub fn relation(alg: &TruthAlgebra, rows: usize, cols: usize, raw: &[u8]) -> MvRelation {
    let m: Vec<Vec<usize>> =
        (0..rows).map(|r| (0..cols).map(|c| raw[(r * cols + c) % raw.len()] as usize % alg.size()).collect()).collect();
    MvRelation::from_matrix(alg, rows, cols, &m).unwrap()
}

pub fn set(alg: &TruthAlgebra, len: usize, raw: &[u8]) -> MvSet {
    let v: Vec<usize> = (0..len).map(|i| raw[i % raw.len()] as usize % alg.size()).collect();
    MvSet::from_indices(alg, &v).unwrap()
}
