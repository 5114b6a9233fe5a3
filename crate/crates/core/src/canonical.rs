//! Canonical-frame machinery over a finite modal lattice.
//!
//! A-filters and A-ideals of a finite lattice `L` with operators `□`, `◇` are
//! enumerated exhaustively. The proper ones become the objects and
//! attributes of a surrogate canonical frame with
//!
//! ```text
//! I(f, i)   = ⋁_b f(b) ⊗ i(b)
//! R_◇(i, f) = ⋁_b f^{-◇}(b) ⊗ i(b)    (= ⋁_a f(a) ⊗ i(◇a))
//! R_□(f, i) = ⋁_b f(b) ⊗ i^{-□}(b)    (= ⋁_a f(□a) ⊗ i(a))
//! ```

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Truth, TruthAlgebra};
use crate::context::{Concept, Context};
use crate::enriched::{CompatibilityReport, EnrichedContext, Relations};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::logic::Formula;
use crate::mvsets::{MvRelation, MvSet};
use crate::semantics::Model;

/// A finite bounded lattice with a meet-preserving `□` and a join-preserving `◇`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalLattice {
    names: Vec<String>,
    leq: Vec<bool>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
    box_map: Vec<usize>,
    dia_map: Vec<usize>,
    atoms: Vec<usize>,
}

impl ModalLattice {
    /// Validates the order, derives joins and meets, and checks that `□`
    /// preserves `⊤` and binary meets and `◇` preserves `⊥` and binary joins.
    pub fn new(
        names: Vec<String>,
        leq: Vec<Vec<bool>>,
        box_map: Vec<usize>,
        dia_map: Vec<usize>,
        atoms: Vec<usize>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Input("a lattice needs at least one element".into()));
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Input(format!("leq must be {n}×{n}")));
        }
        if box_map.len() != n || dia_map.len() != n || box_map.iter().chain(&dia_map).chain(&atoms).any(|&e| e >= n) {
            return Err(Error::Input("box, dia and atoms must name lattice elements".into()));
        }
        let le = |a: usize, b: usize| leq[a][b];
        for a in 0..n {
            if !le(a, a) {
                return Err(Error::Input(format!("leq is not reflexive at {}", names[a])));
            }
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return Err(Error::Input(format!("leq is not antisymmetric at {}, {}", names[a], names[b])));
                }
                for c in 0..n {
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return Err(Error::Input(format!(
                            "leq is not transitive at {}, {}, {}",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let bound = |a: usize, b: usize, upper: bool| -> Option<usize> {
            let bounds: Vec<usize> =
                (0..n).filter(|&c| if upper { le(a, c) && le(b, c) } else { le(c, a) && le(c, b) }).collect();
            bounds
                .iter()
                .copied()
                .find(|&c| bounds.iter().all(|&d| if upper { le(c, d) } else { le(d, c) }))
        };
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] = bound(a, b, true)
                    .ok_or_else(|| Error::Input(format!("{} and {} have no join", names[a], names[b])))?;
                meet[a * n + b] = bound(a, b, false)
                    .ok_or_else(|| Error::Input(format!("{} and {} have no meet", names[a], names[b])))?;
            }
        }
        let bottom = (0..n).find(|&a| (0..n).all(|b| le(a, b))).ok_or_else(|| Error::Input("no bottom".into()))?;
        let top = (0..n).find(|&a| (0..n).all(|b| le(b, a))).ok_or_else(|| Error::Input("no top".into()))?;
        let lattice = ModalLattice {
            leq: leq.into_iter().flatten().collect(),
            names,
            join,
            meet,
            bottom,
            top,
            box_map,
            dia_map,
            atoms,
        };
        if let Some(problem) = lattice.modal_violation() {
            return Err(Error::Input(problem));
        }
        Ok(lattice)
    }

    fn modal_violation(&self) -> Option<String> {
        let n = self.len();
        if self.boxed(self.top) != self.top {
            return Some("box must map top to top".into());
        }
        if self.dia(self.bottom) != self.bottom {
            return Some("dia must map bottom to bottom".into());
        }
        for a in 0..n {
            for b in 0..n {
                if self.boxed(self.meet(a, b)) != self.meet(self.boxed(a), self.boxed(b)) {
                    return Some(format!("box does not preserve the meet of {} and {}", self.names[a], self.names[b]));
                }
                if self.dia(self.join(a, b)) != self.join(self.dia(a), self.dia(b)) {
                    return Some(format!("dia does not preserve the join of {} and {}", self.names[a], self.names[b]));
                }
            }
        }
        None
    }

    /// The `n`-element chain `0 < 1 < … < n−1` with identity modalities.
    pub fn chain(n: usize) -> Self {
        let names = (0..n).map(|i| format!("c{i}")).collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        let id: Vec<usize> = (0..n).collect();
        Self::new(names, leq, id.clone(), id, vec![]).expect("chains are lattices")
    }

    /// The four-element lattice `⊥ < a, b < ⊤` with identity modalities.
    pub fn diamond() -> Self {
        let names = ["bot", "a", "b", "top"].map(String::from).to_vec();
        let leq = vec![
            vec![true, true, true, true],
            vec![false, true, false, true],
            vec![false, false, true, true],
            vec![false, false, false, true],
        ];
        Self::new(names, leq, vec![0, 1, 2, 3], vec![0, 1, 2, 3], vec![]).expect("the diamond is a lattice")
    }

    pub fn with_modalities(&self, box_map: Vec<usize>, dia_map: Vec<usize>) -> Result<Self> {
        let leq = (0..self.len()).map(|a| (0..self.len()).map(|b| self.leq(a, b)).collect()).collect();
        Self::new(self.names.clone(), leq, box_map, dia_map, self.atoms.clone())
    }

    pub fn with_atoms(&self, atoms: Vec<usize>) -> Result<Self> {
        if atoms.iter().any(|&a| a >= self.len()) {
            return Err(Error::Input("atoms must name lattice elements".into()));
        }
        Ok(ModalLattice { atoms, ..self.clone() })
    }

    /// Every pair of maps satisfying the modal invariants, `□` varying slowest.
    pub fn admissible_modalities(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n = self.len();
        let maps = all_maps(n, n);
        let boxes: Vec<&Vec<usize>> = maps
            .iter()
            .filter(|m| {
                m[self.top] == self.top
                    && (0..n).all(|a| (0..n).all(|b| m[self.meet(a, b)] == self.meet(m[a], m[b])))
            })
            .collect();
        let dias: Vec<&Vec<usize>> = maps
            .iter()
            .filter(|m| {
                m[self.bottom] == self.bottom
                    && (0..n).all(|a| (0..n).all(|b| m[self.join(a, b)] == self.join(m[a], m[b])))
            })
            .collect();
        boxes.iter().flat_map(|b| dias.iter().map(move |d| ((*b).clone(), (*d).clone()))).collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn boxed(&self, a: usize) -> usize {
        self.box_map[a]
    }

    pub fn dia(&self, a: usize) -> usize {
        self.dia_map[a]
    }

    pub fn box_map(&self) -> &[usize] {
        &self.box_map
    }

    pub fn dia_map(&self) -> &[usize] {
        &self.dia_map
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    /// Value of a `□`/`◇` formula with each atom read as the element of the same name.
    pub fn interpret(&self, phi: &Formula) -> Result<usize> {
        Ok(match phi {
            Formula::Top => self.top,
            Formula::Bot => self.bottom,
            Formula::Atom(p) => self.index_of(p)?,
            Formula::And(a, b) => self.meet(self.interpret(a)?, self.interpret(b)?),
            Formula::Or(a, b) => self.join(self.interpret(a)?, self.interpret(b)?),
            Formula::Box(a) => self.boxed(self.interpret(a)?),
            Formula::Dia(a) => self.dia(self.interpret(a)?),
            Formula::Rhd(_) | Formula::Lhd(_) => {
                return Err(Error::Input("rhd/lhd have no interpretation on a modal lattice".into()))
            }
        })
    }
}

/// Every lattice with at most `max` elements, up to isomorphism, with
/// identity modalities.
pub fn small_lattices(max: usize) -> Vec<ModalLattice> {
    let mut out: Vec<ModalLattice> = (1..=max.min(4)).map(ModalLattice::chain).collect();
    if max >= 4 {
        out.push(ModalLattice::diamond());
    }
    out
}

/// All maps `{0..domain} → {0..codomain}` in lexicographic order.
fn all_maps(domain: usize, codomain: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..domain {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..codomain).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MvFilter {
    pub degrees: MvSet,
    pub proper: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MvIdeal {
    pub degrees: MvSet,
    pub proper: bool,
}

/// `f(⊤) = 1` and `f(a ∧ b) = f(a) ∧ f(b)`.
pub fn is_filter(alg: &TruthAlgebra, l: &ModalLattice, k: &MvSet) -> bool {
    let n = l.len();
    k.len() == n
        && k.get(l.top()) == alg.top()
        && (0..n).all(|a| (0..n).all(|b| k.get(l.meet(a, b)) == alg.meet(k.get(a), k.get(b))))
}

/// `i(⊥) = 1` and `i(a ∨ b) = i(a) ∧ i(b)`.
pub fn is_ideal(alg: &TruthAlgebra, l: &ModalLattice, k: &MvSet) -> bool {
    let n = l.len();
    k.len() == n
        && k.get(l.bottom()) == alg.top()
        && (0..n).all(|a| (0..n).all(|b| k.get(l.join(a, b)) == alg.meet(k.get(a), k.get(b))))
}

pub fn is_proper_filter(alg: &TruthAlgebra, l: &ModalLattice, k: &MvSet) -> bool {
    is_filter(alg, l, k) && k.get(l.bottom()) == alg.bottom()
}

pub fn is_proper_ideal(alg: &TruthAlgebra, l: &ModalLattice, k: &MvSet) -> bool {
    is_ideal(alg, l, k) && k.get(l.top()) == alg.bottom()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalOptions {
    /// Cap on `|A|^|L|`, the number of candidate maps examined.
    pub max_candidates: u64,
    pub exec: Exec,
}

impl Default for CanonicalOptions {
    fn default() -> Self {
        CanonicalOptions { max_candidates: 1_000_000, exec: Exec::default() }
    }
}

fn candidates(alg: &TruthAlgebra, l: &ModalLattice, opts: &CanonicalOptions) -> Result<u64> {
    let required = u32::try_from(l.len())
        .ok()
        .and_then(|e| (alg.size() as u128).checked_pow(e))
        .unwrap_or(u128::MAX);
    if required > opts.max_candidates as u128 {
        return Err(Error::Budget { what: "filter/ideal candidates", required, limit: opts.max_candidates as u128 });
    }
    Ok(required as u64)
}

fn enumerate_maps(
    alg: &TruthAlgebra,
    l: &ModalLattice,
    opts: &CanonicalOptions,
    keep: impl Fn(&MvSet) -> bool + Sync + Send,
) -> Result<Vec<MvSet>> {
    let total = candidates(alg, l, opts)?;
    let size = alg.size() as u64;
    let decode = |mut k: u64| -> MvSet {
        let mut degrees = vec![Truth::ZERO; l.len()];
        for d in degrees.iter_mut().rev() {
            *d = Truth((k % size) as u8);
            k /= size;
        }
        MvSet::new(degrees)
    };
    let codes: Vec<u64> = (0..total).collect();
    let found = exec::map_slice(opts.exec, &codes, |&k| {
        let m = decode(k);
        keep(&m).then_some(m)
    });
    Ok(found.into_iter().flatten().collect())
}

/// All A-filters of `l`, in lexicographic order of degree vectors.
pub fn enumerate_filters(alg: &TruthAlgebra, l: &ModalLattice, opts: &CanonicalOptions) -> Result<Vec<MvFilter>> {
    Ok(enumerate_maps(alg, l, opts, |m| is_filter(alg, l, m))?
        .into_iter()
        .map(|degrees| MvFilter { proper: degrees.get(l.bottom()) == alg.bottom(), degrees })
        .collect())
}

/// All A-ideals of `l`, in lexicographic order of degree vectors.
pub fn enumerate_ideals(alg: &TruthAlgebra, l: &ModalLattice, opts: &CanonicalOptions) -> Result<Vec<MvIdeal>> {
    Ok(enumerate_maps(alg, l, opts, |m| is_ideal(alg, l, m))?
        .into_iter()
        .map(|degrees| MvIdeal { proper: degrees.get(l.top()) == alg.bottom(), degrees })
        .collect())
}

/// `k^{-◇}(a) = ⋁{k(b) | ◇b ≤ a}`.
pub fn diamond_inverse(alg: &TruthAlgebra, l: &ModalLattice, k: &MvSet) -> MvSet {
    let n = l.len();
    MvSet::new((0..n).map(|a| alg.join_all((0..n).filter(|&b| l.leq(l.dia(b), a)).map(|b| k.get(b)))).collect())
}

/// `k^{-□}(a) = ⋁{k(b) | a ≤ □b}`.
pub fn box_inverse(alg: &TruthAlgebra, l: &ModalLattice, k: &MvSet) -> MvSet {
    let n = l.len();
    MvSet::new((0..n).map(|a| alg.join_all((0..n).filter(|&b| l.leq(a, l.boxed(b))).map(|b| k.get(b)))).collect())
}

fn pairing(alg: &TruthAlgebra, n: usize, f: impl Fn(usize) -> Truth, i: impl Fn(usize) -> Truth) -> Truth {
    alg.join_all((0..n).map(|b| alg.otimes(f(b), i(b))))
}

/// `⋁_b f(b) ⊗ i(b)`.
pub fn incidence_degree(alg: &TruthAlgebra, f: &MvSet, i: &MvSet) -> Truth {
    pairing(alg, f.len(), |b| f.get(b), |b| i.get(b))
}

/// Both forms of `R_◇(i, f)`: via `f^{-◇}` and via `i ∘ ◇`.
pub fn diamond_forms(alg: &TruthAlgebra, l: &ModalLattice, f: &MvSet, i: &MvSet) -> (Truth, Truth) {
    let inv = diamond_inverse(alg, l, f);
    (
        pairing(alg, l.len(), |b| inv.get(b), |b| i.get(b)),
        pairing(alg, l.len(), |a| f.get(a), |a| i.get(l.dia(a))),
    )
}

/// Both forms of `R_□(f, i)`: via `i^{-□}` and via `f ∘ □`.
pub fn box_forms(alg: &TruthAlgebra, l: &ModalLattice, f: &MvSet, i: &MvSet) -> (Truth, Truth) {
    let inv = box_inverse(alg, l, i);
    (
        pairing(alg, l.len(), |b| f.get(b), |b| inv.get(b)),
        pairing(alg, l.len(), |a| f.get(l.boxed(a)), |a| i.get(a)),
    )
}

/// Indices into the surrogate's proper filters and ideals where the two
/// displayed forms of a canonical relation disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct FormAgreement {
    pub pairs: usize,
    pub diamond_mismatches: Vec<(usize, usize)>,
    pub box_mismatches: Vec<(usize, usize)>,
}

impl FormAgreement {
    pub fn passed(&self) -> bool {
        self.diamond_mismatches.is_empty() && self.box_mismatches.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CanonicalSurrogate {
    pub lattice: ModalLattice,
    pub filters: Vec<MvFilter>,
    pub ideals: Vec<MvIdeal>,
    pub frame: EnrichedContext,
    pub forms: FormAgreement,
}

impl CanonicalSurrogate {
    pub fn compatibility(&self) -> &CompatibilityReport {
        self.frame.compatibility()
    }

    pub fn incidence(&self) -> &MvRelation {
        self.frame.base().incidence()
    }

    /// The canonical model: `V(p) = (f ↦ f(p), i ↦ i(p))` for each designated atom.
    pub fn canonical_model(&self) -> Result<Model> {
        let valuation = self
            .lattice
            .atoms()
            .iter()
            .map(|&p| {
                let extent = MvSet::new(self.filters.iter().map(|f| f.degrees.get(p)).collect());
                let intent = MvSet::new(self.ideals.iter().map(|i| i.degrees.get(p)).collect());
                (self.lattice.names()[p].clone(), Concept { extent, intent })
            })
            .collect();
        Model::new(self.frame.clone(), valuation)
    }
}

/// The canonical frame over the proper filters (objects `f0, f1, …`) and
/// proper ideals (attributes `i0, i1, …`) of `l`, with `R_◇` and `R_□` built
/// from the inverse-map forms.
pub fn build_surrogate(alg: Arc<TruthAlgebra>, l: &ModalLattice, opts: &CanonicalOptions) -> Result<CanonicalSurrogate> {
    let a = &*alg;
    let filters: Vec<MvFilter> = enumerate_filters(a, l, opts)?.into_iter().filter(|f| f.proper).collect();
    let ideals: Vec<MvIdeal> = enumerate_ideals(a, l, opts)?.into_iter().filter(|i| i.proper).collect();
    let (nf, ni) = (filters.len(), ideals.len());
    let pairs: Vec<(usize, usize)> = (0..nf).flat_map(|f| (0..ni).map(move |i| (f, i))).collect();
    let cells = exec::map_slice(opts.exec, &pairs, |&(f, i)| {
        let (fd, id) = (&filters[f].degrees, &ideals[i].degrees);
        (incidence_degree(a, fd, id), diamond_forms(a, l, fd, id), box_forms(a, l, fd, id))
    });
    let mut forms = FormAgreement { pairs: pairs.len(), ..Default::default() };
    let mut incidence = MvRelation::constant(nf, ni, Truth::ZERO);
    let mut r_diamond = MvRelation::constant(ni, nf, Truth::ZERO);
    let mut r_box = MvRelation::constant(nf, ni, Truth::ZERO);
    for (&(f, i), (inc, dia, bx)) in pairs.iter().zip(cells) {
        incidence.set(f, i, inc);
        r_diamond.set(i, f, dia.0);
        r_box.set(f, i, bx.0);
        if dia.0 != dia.1 {
            forms.diamond_mismatches.push((f, i));
        }
        if bx.0 != bx.1 {
            forms.box_mismatches.push((f, i));
        }
    }
    let base = Context::new(
        alg,
        (0..nf).map(|k| format!("f{k}")).collect(),
        (0..ni).map(|k| format!("i{k}")).collect(),
        incidence,
    )?;
    let frame = EnrichedContext::new(base, Relations { r_box: Some(r_box), r_diamond: Some(r_diamond), ..Default::default() })?;
    Ok(CanonicalSurrogate { lattice: l.clone(), filters, ideals, frame, forms })
}

/// Where a lemma item fails: the offending filter and/or ideal degree
/// vectors and lattice element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct LemmaWitness {
    pub filter: Option<Vec<usize>>,
    pub ideal: Option<Vec<usize>>,
    pub element: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaItem {
    pub name: &'static str,
    /// Informative items are reported but do not affect [`LemmaReport::passed`].
    pub binding: bool,
    pub checked: usize,
    pub passed: bool,
    pub witness: Option<LemmaWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lattice_size: usize,
    pub filters: usize,
    pub proper_filters: usize,
    pub ideals: usize,
    pub proper_ideals: usize,
    pub items: Vec<LemmaItem>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.items.iter().filter(|i| i.binding).all(|i| i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&LemmaItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

pub const ITEM_FILTER_MONOTONE: &str = "filters are order-preserving";
pub const ITEM_IDEAL_ANTITONE: &str = "ideals are order-reversing";
pub const ITEM_DIA_INVERSE_FILTER: &str = "diamond inverse of a filter is a filter";
pub const ITEM_DIA_INVERSE_PROPER: &str = "diamond inverse of a proper filter is proper";
pub const ITEM_BOX_INVERSE_IDEAL: &str = "box inverse of an ideal is an ideal";
pub const ITEM_BOX_INVERSE_PROPER: &str = "box inverse of a proper ideal is proper";
pub const ITEM_DIA_INEQUALITY: &str = "k(a) <= k^-dia(dia a)";
pub const ITEM_BOX_INEQUALITY: &str = "k(a) <= k^-box(box a)";
pub const ITEM_DIA_IDENTITY: &str = "join f^-dia(b) * i(b) = join f(a) * i(dia a)";
pub const ITEM_BOX_IDENTITY: &str = "join f(b) * i^-box(b) = join f(box a) * i(a)";

const PROPERNESS_NOTE: &str = "properness is only guaranteed for the free algebra of formulas; failures here record \
                               lattices outside that hypothesis";

struct ItemBuilder {
    name: &'static str,
    binding: bool,
    checked: usize,
    witness: Option<LemmaWitness>,
}

impl ItemBuilder {
    fn new(name: &'static str, binding: bool) -> Self {
        ItemBuilder { name, binding, checked: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> LemmaWitness) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> LemmaItem {
        let passed = self.witness.is_none();
        let note = (!self.binding && !passed).then_some(PROPERNESS_NOTE);
        LemmaItem { name: self.name, binding: self.binding, checked: self.checked, passed, witness: self.witness, note }
    }
}

/// Checks the inverse-map lemmas over every filter and ideal of `l`
/// (proper or not), and both pairing identities over every filter/ideal pair.
pub fn lemma_suite(alg: &TruthAlgebra, l: &ModalLattice, opts: &CanonicalOptions) -> Result<LemmaReport> {
    let filters = enumerate_filters(alg, l, opts)?;
    let ideals = enumerate_ideals(alg, l, opts)?;
    let n = l.len();
    let elem = |a: usize| Some(l.names()[a].clone());
    let fw = |k: &MvSet, a: Option<usize>| LemmaWitness { filter: Some(k.indices()), ideal: None, element: a.and_then(elem) };
    let iw = |k: &MvSet, a: Option<usize>| LemmaWitness { filter: None, ideal: Some(k.indices()), element: a.and_then(elem) };

    let mut monotone = ItemBuilder::new(ITEM_FILTER_MONOTONE, true);
    let mut antitone = ItemBuilder::new(ITEM_IDEAL_ANTITONE, true);
    let mut dia_filter = ItemBuilder::new(ITEM_DIA_INVERSE_FILTER, true);
    let mut dia_proper = ItemBuilder::new(ITEM_DIA_INVERSE_PROPER, false);
    let mut box_ideal = ItemBuilder::new(ITEM_BOX_INVERSE_IDEAL, true);
    let mut box_proper = ItemBuilder::new(ITEM_BOX_INVERSE_PROPER, false);
    let mut dia_ineq = ItemBuilder::new(ITEM_DIA_INEQUALITY, true);
    let mut box_ineq = ItemBuilder::new(ITEM_BOX_INEQUALITY, true);

    let order_pairs = || (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| l.leq(a, b));
    for f in &filters {
        let k = &f.degrees;
        for (a, b) in order_pairs() {
            monotone.record(alg.leq(k.get(a), k.get(b)), || fw(k, Some(a)));
        }
        let inv = diamond_inverse(alg, l, k);
        dia_filter.record(is_filter(alg, l, &inv), || fw(k, None));
        if f.proper {
            dia_proper.record(inv.get(l.bottom()) == alg.bottom(), || fw(k, Some(l.bottom())));
        }
        for a in 0..n {
            dia_ineq.record(alg.leq(k.get(a), inv.get(l.dia(a))), || fw(k, Some(a)));
            let binv = box_inverse(alg, l, k);
            box_ineq.record(alg.leq(k.get(a), binv.get(l.boxed(a))), || fw(k, Some(a)));
        }
    }
    for i in &ideals {
        let k = &i.degrees;
        for (a, b) in order_pairs() {
            antitone.record(alg.leq(k.get(b), k.get(a)), || iw(k, Some(a)));
        }
        let inv = box_inverse(alg, l, k);
        box_ideal.record(is_ideal(alg, l, &inv), || iw(k, None));
        if i.proper {
            box_proper.record(inv.get(l.top()) == alg.bottom(), || iw(k, Some(l.top())));
        }
        for a in 0..n {
            box_ineq.record(alg.leq(k.get(a), inv.get(l.boxed(a))), || iw(k, Some(a)));
            let dinv = diamond_inverse(alg, l, k);
            dia_ineq.record(alg.leq(k.get(a), dinv.get(l.dia(a))), || iw(k, Some(a)));
        }
    }

    let pairs: Vec<(usize, usize)> = (0..filters.len()).flat_map(|f| (0..ideals.len()).map(move |i| (f, i))).collect();
    let verdicts = exec::map_slice(opts.exec, &pairs, |&(f, i)| {
        let (d1, d2) = diamond_forms(alg, l, &filters[f].degrees, &ideals[i].degrees);
        let (b1, b2) = box_forms(alg, l, &filters[f].degrees, &ideals[i].degrees);
        (d1 == d2, b1 == b2)
    });
    let mut dia_identity = ItemBuilder::new(ITEM_DIA_IDENTITY, true);
    let mut box_identity = ItemBuilder::new(ITEM_BOX_IDENTITY, true);
    let pw = |f: usize, i: usize| LemmaWitness {
        filter: Some(filters[f].degrees.indices()),
        ideal: Some(ideals[i].degrees.indices()),
        element: None,
    };
    for (&(f, i), (dia_ok, box_ok)) in pairs.iter().zip(verdicts) {
        dia_identity.record(dia_ok, || pw(f, i));
        box_identity.record(box_ok, || pw(f, i));
    }

    Ok(LemmaReport {
        lattice_size: n,
        filters: filters.len(),
        proper_filters: filters.iter().filter(|f| f.proper).count(),
        ideals: ideals.len(),
        proper_ideals: ideals.iter().filter(|i| i.proper).count(),
        items: [
            monotone,
            antitone,
            dia_filter,
            dia_proper,
            box_ideal,
            box_proper,
            dia_ineq,
            box_ineq,
            dia_identity,
            box_identity,
        ]
        .into_iter()
        .map(ItemBuilder::finish)
        .collect(),
    })
}

/// A formula whose canonical denotation differs from the filter/ideal reading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthLemmaFailure {
    pub formula: String,
    pub element: String,
    pub side: &'static str,
    pub carrier: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthLemmaReport {
    pub formulas: usize,
    pub failures: Vec<TruthLemmaFailure>,
}

impl TruthLemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All `⊤, ⊥, ∧, ∨, □, ◇` formulas over `atoms` up to the given depth.
pub fn formulas_up_to(atoms: &[String], depth: usize) -> Vec<Formula> {
    let mut layers: Vec<Vec<Formula>> = vec![atoms
        .iter()
        .map(|p| Formula::atom(p.clone()))
        .chain([Formula::Top, Formula::Bot])
        .collect()];
    for d in 1..=depth {
        let below: Vec<Formula> = layers.iter().flatten().cloned().collect();
        let prev = &layers[d - 1];
        let mut next = Vec::new();
        for a in prev {
            next.push(Formula::boxed(a.clone()));
            next.push(Formula::dia(a.clone()));
        }
        for a in &below {
            for b in &below {
                if layers[d - 1].contains(a) || layers[d - 1].contains(b) {
                    next.push(Formula::and(a.clone(), b.clone()));
                    next.push(Formula::or(a.clone(), b.clone()));
                }
            }
        }
        layers.push(next);
    }
    layers.into_iter().flatten().collect()
}

/// Checks `⟦φ⟧(f) = f(φ)` and `⟨φ⟩(i) = i(φ)` in the canonical model for
/// every formula over the lattice's atoms up to `depth`.
pub fn truth_lemma(surrogate: &CanonicalSurrogate, depth: usize) -> Result<TruthLemmaReport> {
    let l = &surrogate.lattice;
    let model = surrogate.canonical_model()?;
    let atoms: Vec<String> = l.atoms().iter().map(|&p| l.names()[p].clone()).collect();
    let formulas = formulas_up_to(&atoms, depth);
    let mut failures = Vec::new();
    for phi in &formulas {
        let c = model.evaluate(phi)?;
        let e = l.interpret(phi)?;
        let element = l.names()[e].clone();
        for (k, f) in surrogate.filters.iter().enumerate() {
            if c.extent.get(k) != f.degrees.get(e) {
                failures.push(TruthLemmaFailure { formula: phi.to_string(), element: element.clone(), side: "extent", carrier: format!("f{k}") });
            }
        }
        for (k, i) in surrogate.ideals.iter().enumerate() {
            if c.intent.get(k) != i.degrees.get(e) {
                failures.push(TruthLemmaFailure { formula: phi.to_string(), element: element.clone(), side: "intent", carrier: format!("i{k}") });
            }
        }
    }
    Ok(TruthLemmaReport { formulas: formulas.len(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l3() -> TruthAlgebra {
        TruthAlgebra::lukasiewicz(3).unwrap()
    }

    fn opts() -> CanonicalOptions {
        CanonicalOptions { exec: Exec::Sequential, ..Default::default() }
    }

    #[test]
    fn filters_of_two_chain() {
        let l = ModalLattice::chain(2);
        let fs = enumerate_filters(&l3(), &l, &opts()).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs.iter().filter(|f| f.proper).count(), 1);
        let b = TruthAlgebra::boolean();
        let fs = enumerate_filters(&b, &l, &opts()).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs.iter().filter(|f| f.proper).count(), 1);
        let constant = MvSet::full(&b, 2);
        assert!(fs.iter().any(|f| f.degrees == constant && !f.proper));
    }

    #[test]
    fn identity_inverses() {
        let alg = l3();
        let l = ModalLattice::diamond();
        for f in enumerate_filters(&alg, &l, &opts()).unwrap() {
            assert_eq!(diamond_inverse(&alg, &l, &f.degrees), f.degrees);
        }
        for i in enumerate_ideals(&alg, &l, &opts()).unwrap() {
            assert_eq!(box_inverse(&alg, &l, &i.degrees), i.degrees);
        }
        let c = ModalLattice::chain(2);
        let proper = enumerate_filters(&alg, &c, &opts()).unwrap().into_iter().find(|f| f.proper).unwrap();
        let inv = diamond_inverse(&alg, &c, &proper.degrees);
        assert_eq!(inv.get(0), Truth(0));
        assert_eq!(inv.get(1), Truth(2));
    }

    #[test]
    fn boolean_two_chain_surrogate() {
        let b = Arc::new(TruthAlgebra::boolean());
        let s = build_surrogate(b, &ModalLattice::chain(2), &opts()).unwrap();
        assert_eq!((s.filters.len(), s.ideals.len()), (1, 1));
        assert_eq!(s.incidence().get(0, 0), Truth(0));
        assert_eq!(s.frame.relations().r_diamond.as_ref().unwrap().get(0, 0), Truth(0));
        assert!(s.forms.passed());
        assert!(s.compatibility().passed());
    }

    #[test]
    fn diamond_surrogate_forms_agree() {
        let s = build_surrogate(Arc::new(l3()), &ModalLattice::diamond(), &opts()).unwrap();
        assert!(s.forms.passed());
        assert!(s.forms.pairs > 0);
        assert!(s.compatibility().passed());
    }

    #[test]
    fn lemma_suite_on_identity_modalities() {
        for l in [ModalLattice::chain(2), ModalLattice::diamond()] {
            let report = lemma_suite(&l3(), &l, &opts()).unwrap();
            assert!(report.passed(), "{report:?}");
            assert!(report.items.iter().all(|i| i.passed));
        }
    }

    #[test]
    fn box_of_bottom_at_top_breaks_properness() {
        let l = ModalLattice::chain(2).with_modalities(vec![1, 1], vec![0, 1]).unwrap();
        let report = lemma_suite(&l3(), &l, &opts()).unwrap();
        let item = report.item(ITEM_BOX_INVERSE_PROPER).unwrap();
        assert!(!item.passed);
        assert!(!item.binding);
        assert!(item.note.is_some());
        assert!(report.passed());
    }

    #[test]
    fn invalid_lattices() {
        let names = ["a", "b"].map(String::from).to_vec();
        let antichain = vec![vec![true, false], vec![false, true]];
        assert!(ModalLattice::new(names.clone(), antichain, vec![0, 1], vec![0, 1], vec![]).is_err());
        assert!(ModalLattice::chain(2).with_modalities(vec![0, 0], vec![0, 1]).is_err());
        assert!(ModalLattice::chain(2).with_modalities(vec![0, 1], vec![1, 1]).is_err());
    }

    #[test]
    fn admissible_modalities_of_two_chain() {
        // box fixes top: {(0,1), (1,1)}; dia fixes bottom: {(0,0), (0,1)}.
        assert_eq!(ModalLattice::chain(2).admissible_modalities().len(), 4);
    }

    #[test]
    fn budget() {
        let tight = CanonicalOptions { max_candidates: 80, exec: Exec::Sequential };
        assert!(matches!(
            enumerate_filters(&l3(), &ModalLattice::diamond(), &tight),
            Err(Error::Budget { required: 81, .. })
        ));
    }

    #[test]
    fn truth_lemma_on_diamond() {
        let l = ModalLattice::diamond().with_atoms(vec![1, 2]).unwrap();
        let s = build_surrogate(Arc::new(l3()), &l, &opts()).unwrap();
        let report = truth_lemma(&s, 2).unwrap();
        assert!(report.passed(), "{:?}", &report.failures[..report.failures.len().min(3)]);
    }
}
