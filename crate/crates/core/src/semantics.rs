//! Conceptual A-models: valuations of atoms into concepts, their unique
//! homomorphic extension to all formulas, and sequent truth and validity.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::Truth;
use crate::context::{Concept, ConceptLattice, Context, EnumerationOptions};
use crate::enriched::EnrichedContext;
use crate::error::{Error, RelationSlot, Result};
use crate::exec::{self, Exec};
use crate::logic::{axiom_catalogue, Formula, Sequent};
use crate::mvsets::MvSet;

#[derive(Debug, Clone)]
pub struct Model {
    frame: EnrichedContext,
    valuation: BTreeMap<String, Concept>,
}

impl Model {
    /// Every valuation target must be a concept of the frame's base context.
    pub fn new(frame: EnrichedContext, valuation: BTreeMap<String, Concept>) -> Result<Self> {
        let ctx = frame.base();
        for (p, c) in &valuation {
            if ctx.up(&c.extent)? != c.intent || ctx.down(&c.intent)? != c.extent {
                return Err(Error::Input(format!("V({p}) is not a concept of the base context")));
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn frame(&self) -> &EnrichedContext {
        &self.frame
    }

    pub fn valuation(&self) -> &BTreeMap<String, Concept> {
        &self.valuation
    }

    /// `V(φ)`, computed clause by clause from the valuation of atoms.
    pub fn evaluate(&self, phi: &Formula) -> Result<Concept> {
        evaluate_with(&self.frame, &|p| self.valuation.get(p).cloned(), phi)
    }

    /// `⟦φ⟧(a)`; `a ⊩^α φ` holds iff `α ≤` this degree.
    pub fn degree_membership(&self, object: &str, phi: &Formula) -> Result<Truth> {
        let a = self.frame.base().object_index(object)?;
        Ok(self.evaluate(phi)?.extent.get(a))
    }

    /// `⟨φ⟩(x)`; `x ≻^α φ` holds iff `α ≤` this degree.
    pub fn degree_description(&self, attribute: &str, phi: &Formula) -> Result<Truth> {
        let x = self.frame.base().attribute_index(attribute)?;
        Ok(self.evaluate(phi)?.intent.get(x))
    }

    /// `M, a ⊩^α φ`.
    pub fn forces(&self, object: &str, alpha: Truth, phi: &Formula) -> Result<bool> {
        let d = self.degree_membership(object, phi)?;
        Ok(self.frame.base().algebra().leq(alpha, d))
    }

    /// `M, x ≻^α φ`.
    pub fn describes(&self, attribute: &str, alpha: Truth, phi: &Formula) -> Result<bool> {
        let d = self.degree_description(attribute, phi)?;
        Ok(self.frame.base().algebra().leq(alpha, d))
    }

    /// `⟦φ⟧ ⊆ ⟦ψ⟧`, with a witness object when it fails.
    pub fn check_sequent(&self, s: &Sequent) -> Result<SequentCheck> {
        let lhs = self.evaluate(&s.lhs)?;
        let rhs = self.evaluate(&s.rhs)?;
        Ok(compare(self.frame.base(), &lhs, &rhs))
    }

    pub fn sequent_true(&self, s: &Sequent) -> Result<bool> {
        Ok(self.check_sequent(s)?.holds)
    }
}

/// Evaluates `phi` with atoms resolved by `lookup`.
pub fn evaluate_with(
    frame: &EnrichedContext,
    lookup: &dyn Fn(&str) -> Option<Concept>,
    phi: &Formula,
) -> Result<Concept> {
    let ctx = frame.base();
    let alg = ctx.algebra();
    let eval = |psi: &Formula| evaluate_with(frame, lookup, psi);
    Ok(match phi {
        Formula::Top => ctx.top_concept(),
        Formula::Bot => ctx.bottom_concept(),
        Formula::Atom(p) => lookup(p).ok_or_else(|| Error::UnboundAtom(p.clone()))?,
        Formula::And(a, b) => {
            let extent = eval(a)?.extent.meet(alg, &eval(b)?.extent)?;
            let intent = ctx.up(&extent)?;
            Concept { extent, intent }
        }
        Formula::Or(a, b) => {
            let intent = eval(a)?.intent.meet(alg, &eval(b)?.intent)?;
            let extent = ctx.down(&intent)?;
            Concept { extent, intent }
        }
        Formula::Box(a) => frame.box_op(&eval(a)?)?,
        Formula::Dia(a) => frame.diamond_op(&eval(a)?)?,
        Formula::Rhd(a) => frame.rhd_op(&eval(a)?)?.concept,
        Formula::Lhd(a) => frame.lhd_op(&eval(a)?)?.concept,
    })
}

/// Where a sequent fails: the first object whose membership drops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub object: String,
    pub lhs_degree: Truth,
    pub rhs_degree: Truth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequentCheck {
    pub holds: bool,
    pub witness: Option<Witness>,
}

fn compare(ctx: &Context, lhs: &Concept, rhs: &Concept) -> SequentCheck {
    let alg = ctx.algebra();
    let by_extent = lhs.extent.is_subset(alg, &rhs.extent);
    debug_assert_eq!(by_extent, rhs.intent.is_subset(alg, &lhs.intent));
    let witness = (0..lhs.extent.len())
        .find(|&a| !alg.leq(lhs.extent.get(a), rhs.extent.get(a)))
        .map(|a| Witness {
            object: ctx.objects()[a].clone(),
            lhs_degree: lhs.extent.get(a),
            rhs_degree: rhs.extent.get(a),
        });
    SequentCheck { holds: by_extent, witness }
}

/// The concept lattice of a frame with its modal operators tabulated as
/// maps on concept indices.
#[derive(Debug, Clone)]
pub struct ComplexAlgebra<'a> {
    frame: &'a EnrichedContext,
    lattice: &'a ConceptLattice,
    images: [Option<Vec<usize>>; 4],
}

const SLOTS: [RelationSlot; 4] = [RelationSlot::Box, RelationSlot::Diamond, RelationSlot::Rhd, RelationSlot::Lhd];

impl<'a> ComplexAlgebra<'a> {
    /// Tabulates every operator the frame supports; unsupported ones stay
    /// absent and surface as errors on use.
    pub fn new(frame: &'a EnrichedContext, lattice: &'a ConceptLattice, exec: Exec) -> Result<Self> {
        let mut images: [Option<Vec<usize>>; 4] = Default::default();
        for (k, slot) in SLOTS.into_iter().enumerate() {
            if frame.relation(slot).is_none() {
                continue;
            }
            if matches!(slot, RelationSlot::Box | RelationSlot::Diamond) && !frame.compatibility().slot_ok(slot) {
                continue;
            }
            let table = exec::try_map_range(exec, lattice.len(), |i| {
                let c = lattice.get(i);
                let image = match slot {
                    RelationSlot::Box => frame.box_op(c)?,
                    RelationSlot::Diamond => frame.diamond_op(c)?,
                    RelationSlot::Rhd => frame.rhd_op(c)?.concept,
                    RelationSlot::Lhd => frame.lhd_op(c)?.concept,
                };
                lattice
                    .index_of(&image)
                    .ok_or_else(|| Error::Input(format!("{slot} image of concept {i} is not in the lattice")))
            })?;
            images[k] = Some(table);
        }
        Ok(ComplexAlgebra { frame, lattice, images })
    }

    pub fn lattice(&self) -> &ConceptLattice {
        self.lattice
    }

    pub fn image(&self, slot: RelationSlot) -> Option<&[usize]> {
        self.images[slot as usize].as_deref()
    }

    /// Fails with the frame's own error when `phi` needs an unsupported operator.
    pub fn supports(&self, phi: &Formula) -> Result<()> {
        let need = |slot: RelationSlot, a: &Formula| -> Result<()> {
            if self.image(slot).is_none() {
                let top = self.lattice.get(self.lattice.top());
                match slot {
                    RelationSlot::Box => self.frame.box_op(top).map(drop)?,
                    RelationSlot::Diamond => self.frame.diamond_op(top).map(drop)?,
                    RelationSlot::Rhd => self.frame.rhd_op(top).map(drop)?,
                    RelationSlot::Lhd => self.frame.lhd_op(top).map(drop)?,
                }
            }
            self.supports(a)
        };
        match phi {
            Formula::Bot | Formula::Top | Formula::Atom(_) => Ok(()),
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.supports(a)?;
                self.supports(b)
            }
            Formula::Box(a) => need(RelationSlot::Box, a),
            Formula::Dia(a) => need(RelationSlot::Diamond, a),
            Formula::Rhd(a) => need(RelationSlot::Rhd, a),
            Formula::Lhd(a) => need(RelationSlot::Lhd, a),
        }
    }

    /// Evaluates to a concept index; `atoms` is sorted and `values[k]` is the
    /// index assigned to `atoms[k]`. Requires [`Self::supports`] to have passed.
    pub fn eval(&self, phi: &Formula, atoms: &[String], values: &[usize]) -> usize {
        let l = self.lattice;
        match phi {
            Formula::Top => l.top(),
            Formula::Bot => l.bottom(),
            Formula::Atom(p) => values[atoms.binary_search(p).expect("atom is bound")],
            Formula::And(a, b) => l.meet(self.eval(a, atoms, values), self.eval(b, atoms, values)),
            Formula::Or(a, b) => l.join(self.eval(a, atoms, values), self.eval(b, atoms, values)),
            Formula::Box(a) => self.table(RelationSlot::Box)[self.eval(a, atoms, values)],
            Formula::Dia(a) => self.table(RelationSlot::Diamond)[self.eval(a, atoms, values)],
            Formula::Rhd(a) => self.table(RelationSlot::Rhd)[self.eval(a, atoms, values)],
            Formula::Lhd(a) => self.table(RelationSlot::Lhd)[self.eval(a, atoms, values)],
        }
    }

    fn table(&self, slot: RelationSlot) -> &[usize] {
        self.image(slot).expect("operator support checked before evaluation")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidityOptions {
    pub max_valuations: u64,
    pub enumeration: EnumerationOptions,
    pub exec: Exec,
}

impl Default for ValidityOptions {
    fn default() -> Self {
        ValidityOptions {
            max_valuations: 10_000_000,
            enumeration: EnumerationOptions::default(),
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    /// Concept index per atom.
    pub valuation: BTreeMap<String, usize>,
    pub concepts: BTreeMap<String, Concept>,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityVerdict {
    pub sequent: String,
    pub concepts: usize,
    pub valuations: u64,
    pub countermodel: Option<Countermodel>,
}

impl ValidityVerdict {
    pub fn valid(&self) -> bool {
        self.countermodel.is_none()
    }
}

/// Brute force over every valuation of the sequent's atoms into the frame's
/// concept lattice.
pub fn sequent_valid(frame: &EnrichedContext, s: &Sequent, opts: &ValidityOptions) -> Result<ValidityVerdict> {
    let lattice = frame.base().enumerate_concepts(&opts.enumeration)?;
    let algebra = ComplexAlgebra::new(frame, &lattice, opts.exec)?;
    sequent_valid_in(&algebra, s, opts)
}

/// As [`sequent_valid`] on an already tabulated complex algebra. The reported
/// countermodel is the first in lexicographic order of concept indices, atoms
/// taken in sorted order.
pub fn sequent_valid_in(algebra: &ComplexAlgebra<'_>, s: &Sequent, opts: &ValidityOptions) -> Result<ValidityVerdict> {
    algebra.supports(&s.lhs)?;
    algebra.supports(&s.rhs)?;
    let lattice = algebra.lattice();
    let atoms: Vec<String> = s.atoms().into_iter().collect();
    let n = lattice.len() as u128;
    let required = u32::try_from(atoms.len())
        .ok()
        .and_then(|m| n.checked_pow(m))
        .unwrap_or(u128::MAX);
    if required > opts.max_valuations as u128 {
        return Err(Error::Budget { what: "valuations", required, limit: opts.max_valuations as u128 });
    }
    let total = required as u64;
    let decode = |mut k: u64| -> Vec<usize> {
        let mut values = vec![0; atoms.len()];
        for slot in values.iter_mut().rev() {
            *slot = (k % n as u64) as usize;
            k /= n as u64;
        }
        values
    };
    let fails = |k: u64| {
        let values = decode(k);
        let lhs = algebra.eval(&s.lhs, &atoms, &values);
        let rhs = algebra.eval(&s.rhs, &atoms, &values);
        !lattice.leq(lhs, rhs)
    };
    let countermodel = exec::find_first(opts.exec, total, fails).map(|k| {
        let values = decode(k);
        let lhs = lattice.get(algebra.eval(&s.lhs, &atoms, &values));
        let rhs = lattice.get(algebra.eval(&s.rhs, &atoms, &values));
        let witness = compare(algebra.frame.base(), lhs, rhs).witness.expect("failing valuation has a witness");
        Countermodel {
            valuation: atoms.iter().cloned().zip(values.iter().copied()).collect(),
            concepts: atoms.iter().cloned().zip(values.iter().map(|&v| lattice.get(v).clone())).collect(),
            witness,
        }
    });
    Ok(ValidityVerdict { sequent: s.to_string(), concepts: lattice.len(), valuations: total, countermodel })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleCheck {
    pub rule: String,
    pub passed: bool,
    /// Concept indices `(c, d)` with `c ≤ d` but the image order broken.
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub concepts: usize,
    pub axioms: Vec<ValidityVerdict>,
    pub rules: Vec<RuleCheck>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(ValidityVerdict::valid) && self.rules.iter().all(|r| r.passed)
    }
}

/// Validity of every catalogue axiom plus monotonicity of `[R_□]` and
/// `⟨R_◇⟩`, which is what the two modal rules amount to semantically. The
/// remaining rules hold in any lattice. Refuses incompatible frames.
pub fn soundness_suite(frame: &EnrichedContext, opts: &ValidityOptions) -> Result<SoundnessReport> {
    if let Some(f) = frame.compatibility().failures.first() {
        return Err(Error::Incompatible(f.family.slot()));
    }
    let lattice = frame.base().enumerate_concepts(&opts.enumeration)?;
    let algebra = ComplexAlgebra::new(frame, &lattice, opts.exec)?;
    let axioms = axiom_catalogue()
        .iter()
        .map(|ax| sequent_valid_in(&algebra, ax, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut rules = Vec::new();
    for (slot, name) in [(RelationSlot::Box, "box monotone"), (RelationSlot::Diamond, "dia monotone")] {
        let Some(img) = algebra.image(slot) else {
            continue;
        };
        let n = lattice.len();
        let bad = exec::find_first(opts.exec, (n * n) as u64, |k| {
            let (i, j) = ((k as usize) / n, (k as usize) % n);
            lattice.leq(i, j) && !lattice.leq(img[i], img[j])
        });
        let witness = bad.map(|k| ((k as usize) / n, (k as usize) % n));
        rules.push(RuleCheck { rule: name.to_string(), passed: witness.is_none(), witness });
    }
    Ok(SoundnessReport { concepts: lattice.len(), axioms, rules })
}

/// Convenience for building a valuation from extents.
pub fn valuation_from_extents<'s>(
    ctx: &Context,
    extents: impl IntoIterator<Item = (&'s str, MvSet)>,
) -> Result<BTreeMap<String, Concept>> {
    extents
        .into_iter()
        .map(|(p, e)| Ok((p.to_string(), ctx.concept_with_extent(e)?)))
        .collect()
}
