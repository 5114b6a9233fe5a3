//! Finite residuated lattices of truth values.
//!
//! Values are integer handles into the algebra's element list; index `0` is the
//! bottom and `size - 1` the top. Every operation is a table lookup, so all
//! arithmetic is exact. Built-in algebras are chains (Boolean, Łukasiewicz,
//! Gödel); custom algebras may be any finite lattice order, given by tables and
//! checked against the residuated-lattice laws before use.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A truth-value handle. The derived `Ord` is index order, which is only the
/// lattice order for chains; compare values with [`TruthAlgebra::leq`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Truth(pub u8);

impl Truth {
    pub const ZERO: Truth = Truth(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Boolean,
    Lukasiewicz,
    Goedel,
    Custom,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::Boolean => "boolean",
            AlgebraKind::Lukasiewicz => "lukasiewicz",
            AlgebraKind::Goedel => "goedel",
            AlgebraKind::Custom => "custom",
        })
    }
}

/// Which lattice aggregate [`TruthAlgebra::aggregate`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Join,
    Meet,
}

/// Raw, unvalidated operation tables of a candidate algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraTables {
    pub size: usize,
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
    pub otimes: Vec<Vec<usize>>,
    pub residuum: Vec<Vec<usize>>,
}

/// Maximum number of truth values; handles are stored in a byte.
/// `(a, b, top) ↦ value` on chain indices.
type ChainOp = fn(usize, usize, usize) -> usize;

pub const MAX_ALGEBRA_SIZE: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthAlgebra {
    kind: AlgebraKind,
    size: usize,
    join: Vec<Truth>,
    meet: Vec<Truth>,
    otimes: Vec<Truth>,
    residuum: Vec<Truth>,
    leq: Vec<bool>,
}

impl TruthAlgebra {
    /// The `n`-element chain of the given kind, with values `i/(n-1)` stored as `i`.
    pub fn chain(kind: AlgebraKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Algebra(format!("a chain needs at least 2 elements, got {n}")));
        }
        if n > MAX_ALGEBRA_SIZE {
            return Err(Error::Algebra(format!(
                "at most {MAX_ALGEBRA_SIZE} truth values are supported, got {n}"
            )));
        }
        let top = n - 1;
        let (otimes, residuum): (ChainOp, ChainOp) =
            match kind {
                AlgebraKind::Boolean if n != 2 => {
                    return Err(Error::Algebra(format!("the boolean algebra has 2 elements, not {n}")))
                }
                AlgebraKind::Custom => {
                    return Err(Error::Algebra("custom algebras are built from tables".into()))
                }
                // On two elements all three t-norms coincide with classical conjunction.
                AlgebraKind::Boolean | AlgebraKind::Goedel => (
                    |a, b, _| a.min(b),
                    |a, b, top| if a <= b { top } else { b },
                ),
                AlgebraKind::Lukasiewicz => (
                    |a, b, top| (a + b).saturating_sub(top),
                    |a, b, top| top.min(top - a + b),
                ),
            };
        let mut alg = TruthAlgebra {
            kind,
            size: n,
            join: Vec::with_capacity(n * n),
            meet: Vec::with_capacity(n * n),
            otimes: Vec::with_capacity(n * n),
            residuum: Vec::with_capacity(n * n),
            leq: Vec::with_capacity(n * n),
        };
        for a in 0..n {
            for b in 0..n {
                alg.join.push(Truth(a.max(b) as u8));
                alg.meet.push(Truth(a.min(b) as u8));
                alg.otimes.push(Truth(otimes(a, b, top) as u8));
                alg.residuum.push(Truth(residuum(a, b, top) as u8));
                alg.leq.push(a <= b);
            }
        }
        Ok(alg)
    }

    pub fn boolean() -> Self {
        Self::chain(AlgebraKind::Boolean, 2).expect("2-element chain")
    }

    pub fn lukasiewicz(n: usize) -> Result<Self> {
        Self::chain(AlgebraKind::Lukasiewicz, n)
    }

    pub fn goedel(n: usize) -> Result<Self> {
        Self::chain(AlgebraKind::Goedel, n)
    }

    /// Builds a custom algebra; fails unless every law of [`validate_algebra`] passes.
    pub fn from_tables(tables: &AlgebraTables) -> Result<Self> {
        let report = validate_algebra(tables)?;
        if let Some(failed) = report.laws.iter().find(|l| !l.passed) {
            return Err(Error::Algebra(format!(
                "law `{}` fails at {:?}",
                failed.law,
                failed.counterexample.as_deref().unwrap_or(&[])
            )));
        }
        let n = tables.size;
        let flat = |t: &Vec<Vec<usize>>| -> Vec<Truth> {
            t.iter().flatten().map(|&v| Truth(v as u8)).collect()
        };
        let join = flat(&tables.join);
        let leq = (0..n * n).map(|k| join[k].index() == k % n).collect();
        Ok(TruthAlgebra {
            kind: AlgebraKind::Custom,
            size: n,
            join,
            meet: flat(&tables.meet),
            otimes: flat(&tables.otimes),
            residuum: flat(&tables.residuum),
            leq,
        })
    }

    /// Parses the inline form `kind:n`, e.g. `lukasiewicz:5` or `boolean`.
    pub fn from_inline(spec: &str) -> Result<Self> {
        let (name, size) = match spec.split_once(':') {
            Some((name, n)) => {
                let n = n
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Algebra(format!("bad algebra size in `{spec}`")))?;
                (name.trim(), Some(n))
            }
            None => (spec.trim(), None),
        };
        let kind = match name {
            "boolean" | "bool" => AlgebraKind::Boolean,
            "lukasiewicz" | "luk" => AlgebraKind::Lukasiewicz,
            "goedel" | "godel" | "gödel" => AlgebraKind::Goedel,
            _ => return Err(Error::Algebra(format!("unknown algebra `{spec}`"))),
        };
        let n = match (kind, size) {
            (AlgebraKind::Boolean, None) => 2,
            (_, Some(n)) => n,
            (_, None) => return Err(Error::Algebra(format!("`{spec}` needs a size, e.g. `{name}:3`"))),
        };
        Self::chain(kind, n)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> Truth {
        Truth(0)
    }

    pub fn top(&self) -> Truth {
        Truth((self.size - 1) as u8)
    }

    pub fn is_chain(&self) -> bool {
        self.kind != AlgebraKind::Custom
    }

    pub fn elements(&self) -> impl Iterator<Item = Truth> + Clone {
        (0..self.size).map(|i| Truth(i as u8))
    }

    pub fn contains(&self, v: Truth) -> bool {
        v.index() < self.size
    }

    pub fn value(&self, index: usize) -> Result<Truth> {
        if index < self.size {
            Ok(Truth(index as u8))
        } else {
            Err(Error::ForeignValue { value: index, size: self.size })
        }
    }

    #[inline]
    fn at(&self, a: Truth, b: Truth) -> usize {
        a.index() * self.size + b.index()
    }

    #[inline]
    pub fn join(&self, a: Truth, b: Truth) -> Truth {
        self.join[self.at(a, b)]
    }

    #[inline]
    pub fn meet(&self, a: Truth, b: Truth) -> Truth {
        self.meet[self.at(a, b)]
    }

    #[inline]
    pub fn otimes(&self, a: Truth, b: Truth) -> Truth {
        self.otimes[self.at(a, b)]
    }

    #[inline]
    pub fn residuum(&self, a: Truth, b: Truth) -> Truth {
        self.residuum[self.at(a, b)]
    }

    #[inline]
    pub fn leq(&self, a: Truth, b: Truth) -> bool {
        self.leq[self.at(a, b)]
    }

    /// Join of any number of values; the empty join is `0`.
    pub fn join_all(&self, values: impl IntoIterator<Item = Truth>) -> Truth {
        values.into_iter().fold(self.bottom(), |acc, v| self.join(acc, v))
    }

    /// Meet of any number of values; the empty meet is `1`.
    pub fn meet_all(&self, values: impl IntoIterator<Item = Truth>) -> Truth {
        values.into_iter().fold(self.top(), |acc, v| self.meet(acc, v))
    }

    /// Join or meet of a multiset of handles, rejecting handles from a larger algebra.
    pub fn aggregate(&self, kind: Aggregate, values: &[Truth]) -> Result<Truth> {
        if let Some(bad) = values.iter().find(|v| !self.contains(**v)) {
            return Err(Error::ForeignValue { value: bad.index(), size: self.size });
        }
        Ok(match kind {
            Aggregate::Join => self.join_all(values.iter().copied()),
            Aggregate::Meet => self.meet_all(values.iter().copied()),
        })
    }

    /// Human-readable label: `i/(n-1)` in lowest terms on chains, the index otherwise.
    pub fn label(&self, v: Truth) -> String {
        if !self.is_chain() {
            return v.to_string();
        }
        let (num, den) = (v.index(), self.size - 1);
        if num == 0 || num == den {
            return (num / den.max(1)).to_string();
        }
        let g = gcd(num, den);
        format!("{}/{}", num / g, den / g)
    }

    pub fn tables(&self) -> AlgebraTables {
        let n = self.size;
        let nested = |t: &[Truth]| -> Vec<Vec<usize>> {
            t.chunks(n).map(|row| row.iter().map(|v| v.index()).collect()).collect()
        };
        AlgebraTables {
            size: n,
            join: nested(&self.join),
            meet: nested(&self.meet),
            otimes: nested(&self.otimes),
            residuum: nested(&self.residuum),
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl AlgebraTables {
    /// Fills in `meet` (greatest lower bound of the join order) and `residuum`
    /// (`a → b = ⋁{c | c ⊗ a ≤ b}`) when a table source omitted them.
    /// The result still has to pass [`validate_algebra`].
    pub fn derive_missing(
        size: usize,
        join: Vec<Vec<usize>>,
        meet: Option<Vec<Vec<usize>>>,
        otimes: Vec<Vec<usize>>,
        residuum: Option<Vec<Vec<usize>>>,
    ) -> Result<AlgebraTables> {
        check_table("join", size, &join)?;
        check_table("otimes", size, &otimes)?;
        let leq = |a: usize, b: usize| join[a][b] == b;
        let greatest = |cands: Vec<usize>| -> Option<usize> {
            cands.iter().copied().find(|&c| cands.iter().all(|&d| leq(d, c)))
        };
        let least = |cands: Vec<usize>| -> Option<usize> {
            cands.iter().copied().find(|&c| cands.iter().all(|&d| leq(c, d)))
        };
        let meet = match meet {
            Some(m) => m,
            None => {
                (0..size)
                    .map(|a| {
                        (0..size)
                            .map(|b| {
                                let lower: Vec<usize> = (0..size).filter(|&c| leq(c, a) && leq(c, b)).collect();
                                greatest(lower).ok_or_else(|| {
                                    Error::Input(format!("elements {a} and {b} have no meet in the join order"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        let residuum = match residuum {
            Some(r) => r,
            None => {
                (0..size)
                    .map(|a| {
                        (0..size)
                            .map(|b| {
                                let cands: Vec<usize> = (0..size).filter(|&c| leq(otimes[c][a], b)).collect();
                                // The residuum is the join of the candidates, and must itself be one.
                                let upper: Vec<usize> =
                                    (0..size).filter(|&u| cands.iter().all(|&c| leq(c, u))).collect();
                                least(upper).ok_or_else(|| Error::Input(format!("no residuum for ({a}, {b})")))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Ok(AlgebraTables { size, join, meet, otimes, residuum })
    }
}

/// Pass/fail record for one law, with the lexicographically first failing tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub law: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub size: usize,
    pub laws: Vec<LawCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }

    pub fn law(&self, name: &str) -> Option<&LawCheck> {
        self.laws.iter().find(|l| l.law == name)
    }
}

fn check_table(name: &str, n: usize, t: &[Vec<usize>]) -> Result<()> {
    if t.len() != n || t.iter().any(|row| row.len() != n) {
        return Err(Error::Input(format!("table `{name}` must be {n}×{n}")));
    }
    if let Some(v) = t.iter().flatten().find(|&&v| v >= n) {
        return Err(Error::Input(format!("table `{name}` holds {v}, outside 0..{n}")));
    }
    Ok(())
}

/// Checks every residuated-lattice law the semantics relies on, exhaustively.
///
/// The order is read off the join table (`a ≤ b` iff `a ∨ b = b`); `0` must be
/// the bottom and `size - 1` the top. Beyond the lattice, monoid, and
/// residuation laws this checks the finite forms of frame distributivity and
/// its dual, `⊗`-distributivity over joins, and the two conversion laws of `→`.
pub fn validate_algebra(t: &AlgebraTables) -> Result<ValidationReport> {
    let n = t.size;
    if n == 0 || n > MAX_ALGEBRA_SIZE {
        return Err(Error::Input(format!("algebra size must be in 1..={MAX_ALGEBRA_SIZE}, got {n}")));
    }
    check_table("join", n, &t.join)?;
    check_table("meet", n, &t.meet)?;
    check_table("otimes", n, &t.otimes)?;
    check_table("residuum", n, &t.residuum)?;

    let j = |a: usize, b: usize| t.join[a][b];
    let m = |a: usize, b: usize| t.meet[a][b];
    let o = |a: usize, b: usize| t.otimes[a][b];
    let r = |a: usize, b: usize| t.residuum[a][b];
    let le = |a: usize, b: usize| j(a, b) == b;
    let (bot, top) = (0, n - 1);

    let unary = |law: &'static str, p: &dyn Fn(usize) -> bool| LawCheck {
        law,
        counterexample: (0..n).find(|&a| !p(a)).map(|a| vec![a]),
        passed: (0..n).all(p),
    };
    let binary = |law: &'static str, p: &dyn Fn(usize, usize) -> bool| {
        let cx = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| !p(a, b))
            .map(|(a, b)| vec![a, b]);
        LawCheck { law, passed: cx.is_none(), counterexample: cx }
    };
    let ternary = |law: &'static str, p: &dyn Fn(usize, usize, usize) -> bool| {
        let cx = (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .find(|&(a, b, c)| !p(a, b, c))
            .map(|(a, b, c)| vec![a, b, c]);
        LawCheck { law, passed: cx.is_none(), counterexample: cx }
    };

    let laws = vec![
        unary("join idempotent", &|a| j(a, a) == a),
        binary("join commutative", &|a, b| j(a, b) == j(b, a)),
        ternary("join associative", &|a, b, c| j(j(a, b), c) == j(a, j(b, c))),
        unary("meet idempotent", &|a| m(a, a) == a),
        binary("meet commutative", &|a, b| m(a, b) == m(b, a)),
        ternary("meet associative", &|a, b, c| m(m(a, b), c) == m(a, m(b, c))),
        binary("absorption", &|a, b| j(a, m(a, b)) == a && m(a, j(a, b)) == a),
        unary("0 is bottom", &|a| j(bot, a) == a),
        unary("1 is top", &|a| m(top, a) == a),
        ternary("frame distributivity", &|a, b, c| m(a, j(b, c)) == j(m(a, b), m(a, c))),
        ternary("dual frame distributivity", &|a, b, c| j(a, m(b, c)) == m(j(a, b), j(a, c))),
        binary("otimes commutative", &|a, b| o(a, b) == o(b, a)),
        ternary("otimes associative", &|a, b, c| o(o(a, b), c) == o(a, o(b, c))),
        unary("1 is otimes unit", &|a| o(top, a) == a),
        unary("1 -> a = a", &|a| r(top, a) == a),
        ternary("residuation", &|a, b, c| le(o(a, b), c) == le(a, r(b, c))),
        ternary("otimes distributes over joins", &|a, b, c| o(a, j(b, c)) == j(o(a, b), o(a, c))),
        unary("otimes annihilated by 0", &|a| o(a, bot) == bot),
        ternary("residuum converts joins to meets", &|a, b, c| r(j(a, b), c) == m(r(a, c), r(b, c))),
        unary("0 -> a = 1", &|a| r(bot, a) == top),
        ternary("residuum preserves meets", &|a, b, c| r(c, m(a, b)) == m(r(c, a), r(c, b))),
        unary("a -> 1 = 1", &|a| r(a, top) == top),
        ternary("otimes monotone", &|a, b, c| !le(a, b) || le(o(a, c), o(b, c))),
        ternary("residuum antitone-monotone", &|a, b, c| {
            !le(a, b) || (le(r(b, c), r(a, c)) && le(r(c, a), r(c, b)))
        }),
    ];
    Ok(ValidationReport { size: n, laws })
}
