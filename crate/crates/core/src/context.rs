//! Formal A-contexts, their Galois connection, and concept lattices.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Truth, TruthAlgebra};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::mvsets::{singleton, MvRelation, MvSet};

/// Default cap on the number of concepts an enumeration may produce.
pub const DEFAULT_MAX_CONCEPTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Extent,
    Intent,
}

/// A formal A-context `(A, X, I)`.
#[derive(Debug, Clone)]
pub struct Context {
    algebra: Arc<TruthAlgebra>,
    objects: Vec<String>,
    attributes: Vec<String>,
    incidence: MvRelation,
}

/// A formal A-concept: a pair of mutually determining stable sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Concept {
    pub extent: MvSet,
    pub intent: MvSet,
}

impl Concept {
    /// Concept order, read on extents.
    pub fn leq(&self, alg: &TruthAlgebra, other: &Concept) -> bool {
        self.extent.is_subset(alg, &other.extent)
    }
}

fn check_names(kind: &str, names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if n.is_empty() {
            return Err(Error::Input(format!("empty {kind} name")));
        }
        if !seen.insert(n) {
            return Err(Error::Input(format!("duplicate {kind} `{n}`")));
        }
    }
    Ok(())
}

impl Context {
    pub fn new(
        algebra: Arc<TruthAlgebra>,
        objects: Vec<String>,
        attributes: Vec<String>,
        incidence: MvRelation,
    ) -> Result<Self> {
        check_names("object", &objects)?;
        check_names("attribute", &attributes)?;
        if incidence.rows() != objects.len() || incidence.cols() != attributes.len() {
            return Err(Error::Input(format!(
                "incidence is {}×{} but the context has {} objects and {} attributes",
                incidence.rows(),
                incidence.cols(),
                objects.len(),
                attributes.len()
            )));
        }
        Ok(Context { algebra, objects, attributes, incidence })
    }

    /// Context with generated names `a1..an` and `x1..xm`.
    pub fn anonymous(algebra: Arc<TruthAlgebra>, incidence: MvRelation) -> Self {
        let objects = (1..=incidence.rows()).map(|i| format!("a{i}")).collect();
        let attributes = (1..=incidence.cols()).map(|i| format!("x{i}")).collect();
        Context { algebra, objects, attributes, incidence }
    }

    pub fn algebra(&self) -> &TruthAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<TruthAlgebra> {
        &self.algebra
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn incidence(&self) -> &MvRelation {
        &self.incidence
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects.iter().position(|o| o == name).ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn attribute_index(&self, name: &str) -> Result<usize> {
        self.attributes.iter().position(|x| x == name).ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// `f↑ = I⁽¹⁾[f]`.
    pub fn up(&self, f: &MvSet) -> Result<MvSet> {
        self.incidence.lift1(&self.algebra, f)
    }

    /// `u↓ = I⁽⁰⁾[u]`.
    pub fn down(&self, u: &MvSet) -> Result<MvSet> {
        self.incidence.lift0(&self.algebra, u)
    }

    pub fn is_stable(&self, side: Side, s: &MvSet) -> Result<bool> {
        Ok(match side {
            Side::Extent => &self.down(&self.up(s)?)? == s,
            Side::Intent => &self.up(&self.down(s)?)? == s,
        })
    }

    /// `(seed↑↓, seed↑)`.
    pub fn concept_of(&self, seed: &MvSet) -> Result<Concept> {
        let intent = self.up(seed)?;
        let extent = self.down(&intent)?;
        Ok(Concept { extent, intent })
    }

    /// `(seed↓, seed↓↑)`.
    pub fn concept_of_intent(&self, seed: &MvSet) -> Result<Concept> {
        let extent = self.down(seed)?;
        let intent = self.up(&extent)?;
        Ok(Concept { extent, intent })
    }

    /// The concept with the given extent, or an input error when it is not stable.
    pub fn concept_with_extent(&self, extent: MvSet) -> Result<Concept> {
        let c = self.concept_of(&extent)?;
        if c.extent != extent {
            return Err(Error::Input(format!("extent {:?} is not stable", extent.indices())));
        }
        Ok(c)
    }

    pub fn concept_with_intent(&self, intent: MvSet) -> Result<Concept> {
        let c = self.concept_of_intent(&intent)?;
        if c.intent != intent {
            return Err(Error::Input(format!("intent {:?} is not stable", intent.indices())));
        }
        Ok(c)
    }

    pub fn top_concept(&self) -> Concept {
        self.concept_of(&MvSet::full(&self.algebra, self.objects.len())).expect("carrier sizes agree")
    }

    pub fn bottom_concept(&self) -> Concept {
        self.concept_of_intent(&MvSet::full(&self.algebra, self.attributes.len())).expect("carrier sizes agree")
    }

    /// All concepts of the context.
    ///
    /// Extents form a closure system generated by the basic extents
    /// `{α/x}↓`, so the lattice is obtained by closing those (plus the full
    /// extent) under pointwise meets. Each round meets the newly found
    /// extents with everything known so far; rounds run under `opts.exec`.
    /// Concepts come back sorted by extent degree indices, so the order is
    /// stable across runs and execution strategies.
    pub fn enumerate_concepts(&self, opts: &EnumerationOptions) -> Result<ConceptLattice> {
        let alg = &*self.algebra;
        let n_obj = self.objects.len();
        let mut known: BTreeSet<MvSet> = BTreeSet::new();
        known.insert(MvSet::full(alg, n_obj));
        for x in 0..self.attributes.len() {
            for alpha in alg.elements() {
                let u = singleton(alg, self.attributes.len(), alpha, x)?;
                known.insert(self.down(&u)?);
            }
        }
        budget_check(known.len(), opts.max_concepts)?;

        let mut frontier: Vec<MvSet> = known.iter().cloned().collect();
        while !frontier.is_empty() {
            let all: Vec<MvSet> = known.iter().cloned().collect();
            let rounds: Vec<BTreeSet<MvSet>> = exec::map_slice(opts.exec, &frontier, |f| {
                all.iter()
                    .filter_map(|g| {
                        let m = f.meet(alg, g).expect("extents share the object carrier");
                        let closed = self.down(&self.up(&m).ok()?).ok()?;
                        (!known.contains(&closed)).then_some(closed)
                    })
                    .collect()
            });
            let fresh: BTreeSet<MvSet> = rounds.into_iter().flatten().collect();
            known.extend(fresh.iter().cloned());
            budget_check(known.len(), opts.max_concepts)?;
            frontier = fresh.into_iter().collect();
        }

        let concepts: Vec<Concept> = exec::map_slice(opts.exec, &known.into_iter().collect::<Vec<_>>(), |e| {
            Concept { intent: self.up(e).expect("extent over objects"), extent: e.clone() }
        });
        Ok(ConceptLattice::from_concepts(self.algebra.clone(), concepts))
    }
}

fn budget_check(count: usize, limit: usize) -> Result<()> {
    if count > limit {
        return Err(Error::Budget {
            what: "concept enumeration",
            required: count as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub max_concepts: usize,
    pub exec: Exec,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { max_concepts: DEFAULT_MAX_CONCEPTS, exec: Exec::default() }
    }
}

/// The complete lattice of concepts of a context.
///
/// Order, meet and join are answered on demand from the stored concepts
/// rather than materialized as `n × n` tables.
#[derive(Debug, Clone)]
pub struct ConceptLattice {
    algebra: Arc<TruthAlgebra>,
    concepts: Vec<Concept>,
    by_extent: HashMap<MvSet, usize>,
    by_intent: HashMap<MvSet, usize>,
    bottom: usize,
    top: usize,
}

impl ConceptLattice {
    fn from_concepts(algebra: Arc<TruthAlgebra>, concepts: Vec<Concept>) -> Self {
        let by_extent: HashMap<MvSet, usize> =
            concepts.iter().enumerate().map(|(i, c)| (c.extent.clone(), i)).collect();
        let by_intent: HashMap<MvSet, usize> =
            concepts.iter().enumerate().map(|(i, c)| (c.intent.clone(), i)).collect();
        let n_obj = concepts[0].extent.len();
        let n_attr = concepts[0].intent.len();
        let top = by_extent[&MvSet::full(&algebra, n_obj)];
        let bottom = by_intent[&MvSet::full(&algebra, n_attr)];
        ConceptLattice { algebra, concepts, by_extent, by_intent, bottom, top }
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn get(&self, i: usize) -> &Concept {
        &self.concepts[i]
    }

    pub fn index_of(&self, c: &Concept) -> Option<usize> {
        self.by_extent.get(&c.extent).copied().filter(|&i| self.concepts[i].intent == c.intent)
    }

    pub fn index_of_extent(&self, extent: &MvSet) -> Option<usize> {
        self.by_extent.get(extent).copied()
    }

    pub fn index_of_intent(&self, intent: &MvSet) -> Option<usize> {
        self.by_intent.get(intent).copied()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.concepts[i].leq(&self.algebra, &self.concepts[j])
    }

    /// Meet: extents meet pointwise.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        let e = self.concepts[i].extent.meet(&self.algebra, &self.concepts[j].extent).expect("same carrier");
        self.by_extent[&e]
    }

    /// Join: intents meet pointwise.
    pub fn join(&self, i: usize, j: usize) -> usize {
        let u = self.concepts[i].intent.meet(&self.algebra, &self.concepts[j].intent).expect("same carrier");
        self.by_intent[&u]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Hasse diagram edges `(lower, upper)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq(i, j) {
                    continue;
                }
                let between = (0..n).any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j));
                if !between {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// Graphviz rendering; node labels list extent and intent degrees.
    pub fn to_dot(&self, ctx: &Context) -> String {
        let alg = ctx.algebra();
        let fmt_set = |names: &[String], s: &MvSet| {
            names.iter().zip(s.iter()).map(|(n, d)| format!("{n}={}", alg.label(d))).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::from("digraph concepts {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, c) in self.concepts.iter().enumerate() {
            let _ = writeln!(
                out,
                "  c{i} [label=\"c{i}\\next: {}\\nint: {}\"];",
                fmt_set(ctx.objects(), &c.extent),
                fmt_set(ctx.attributes(), &c.intent)
            );
        }
        for (lo, hi) in self.covers() {
            let _ = writeln!(out, "  c{lo} -> c{hi};");
        }
        out.push_str("}\n");
        out
    }
}

/// `(element, degree label)` pairs in carrier order.
pub type Labelled = Vec<(String, String)>;

/// Degree-labelled rendering of a concept, for reports.
pub fn describe(ctx: &Context, c: &Concept) -> (Labelled, Labelled) {
    let alg = ctx.algebra();
    let ext = ctx.objects().iter().cloned().zip(c.extent.iter().map(|d| alg.label(d))).collect();
    let int = ctx.attributes().iter().cloned().zip(c.intent.iter().map(|d| alg.label(d))).collect();
    (ext, int)
}

/// Convenience: the crisp characteristic set of one carrier position.
pub fn crisp_point(alg: &TruthAlgebra, len: usize, at: usize) -> MvSet {
    let mut d = vec![Truth::ZERO; len];
    d[at] = alg.top();
    MvSet::new(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF: Truth = Truth(1);

    fn diag2() -> Context {
        let b = Arc::new(TruthAlgebra::boolean());
        let i = MvRelation::diagonal(&b, 2);
        Context::anonymous(b, i)
    }

    fn half1x1() -> Context {
        let l3 = Arc::new(TruthAlgebra::lukasiewicz(3).unwrap());
        Context::anonymous(l3, MvRelation::constant(1, 1, HALF))
    }

    fn set(v: &[u8]) -> MvSet {
        MvSet::new(v.iter().map(|&d| Truth(d)).collect())
    }

    #[test]
    fn up_examples() {
        let ctx = half1x1();
        assert_eq!(ctx.up(&set(&[0])).unwrap(), set(&[2]));
        assert_eq!(ctx.up(&set(&[2])).unwrap(), set(&[1]));
        let d = diag2();
        assert_eq!(d.up(&set(&[1, 0])).unwrap(), set(&[1, 0]));
        assert!(d.up(&set(&[1])).is_err());
    }

    #[test]
    fn down_examples() {
        let d = diag2();
        assert_eq!(d.down(&set(&[0, 0])).unwrap(), set(&[1, 1]));
        assert_eq!(d.down(&set(&[0, 1])).unwrap(), set(&[0, 1]));
        assert_eq!(half1x1().down(&set(&[1])).unwrap(), set(&[2]));
    }

    #[test]
    fn stability_examples() {
        let ctx = half1x1();
        assert!(!ctx.is_stable(Side::Extent, &set(&[0])).unwrap());
        assert_eq!(ctx.down(&ctx.up(&set(&[0])).unwrap()).unwrap(), set(&[1]));
        assert!(ctx.is_stable(Side::Extent, &set(&[1])).unwrap());
        for u in 0..3 {
            let e = ctx.down(&set(&[u])).unwrap();
            assert!(ctx.is_stable(Side::Extent, &e).unwrap());
        }
    }

    #[test]
    fn concept_of_examples() {
        let d = diag2();
        // (all-0)↑ = all-1 and (all-1)↓ = all-0 in the diagonal: the bottom concept.
        let c = d.concept_of(&set(&[0, 0])).unwrap();
        assert_eq!(c, Concept { extent: set(&[0, 0]), intent: set(&[1, 1]) });
        assert_eq!(c, d.bottom_concept());
        let c = d.concept_of(&set(&[1, 0])).unwrap();
        assert_eq!(c, Concept { extent: set(&[1, 0]), intent: set(&[1, 0]) });
        let stable = set(&[1, 0]);
        assert_eq!(d.concept_of(&stable).unwrap().extent, stable);
    }

    #[test]
    fn enumerate_examples() {
        let opts = EnumerationOptions::default();
        let d = diag2();
        let lat = d.enumerate_concepts(&opts).unwrap();
        assert_eq!(lat.len(), 4);
        let (bot, top) = (lat.bottom(), lat.top());
        let mids: Vec<usize> = (0..4).filter(|&i| i != bot && i != top).collect();
        assert!(!lat.leq(mids[0], mids[1]) && !lat.leq(mids[1], mids[0]));
        assert_eq!(lat.meet(mids[0], mids[1]), bot);
        assert_eq!(lat.join(mids[0], mids[1]), top);
        assert_eq!(lat.covers().len(), 4);

        let lat = half1x1().enumerate_concepts(&opts).unwrap();
        let got: Vec<_> = lat.concepts().to_vec();
        assert_eq!(
            got,
            vec![
                Concept { extent: set(&[1]), intent: set(&[2]) },
                Concept { extent: set(&[2]), intent: set(&[1]) },
            ]
        );

        let l3 = Arc::new(TruthAlgebra::lukasiewicz(3).unwrap());
        let full = Context::anonymous(l3.clone(), MvRelation::constant(2, 2, l3.top()));
        let lat = full.enumerate_concepts(&opts).unwrap();
        assert_eq!(lat.len(), 1);
        assert_eq!(lat.get(0), &Concept { extent: set(&[2, 2]), intent: set(&[2, 2]) });
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let opts = EnumerationOptions { max_concepts: 3, ..Default::default() };
        assert!(matches!(diag2().enumerate_concepts(&opts), Err(Error::Budget { limit: 3, .. })));
    }

    #[test]
    fn dot_export_has_one_node_per_concept() {
        let d = diag2();
        let lat = d.enumerate_concepts(&EnumerationOptions::default()).unwrap();
        let dot = lat.to_dot(&d);
        assert_eq!(dot.matches("[label=").count(), 4);
        assert_eq!(dot.matches(" -> ").count(), 4);
    }

    #[test]
    fn names_are_validated() {
        let b = Arc::new(TruthAlgebra::boolean());
        let i = MvRelation::diagonal(&b, 2);
        let dup = Context::new(b.clone(), vec!["a".into(), "a".into()], vec!["x".into(), "y".into()], i.clone());
        assert!(matches!(dup, Err(Error::Input(_))));
        let short = Context::new(b, vec!["a".into()], vec!["x".into(), "y".into()], i);
        assert!(matches!(short, Err(Error::Input(_))));
    }
}
