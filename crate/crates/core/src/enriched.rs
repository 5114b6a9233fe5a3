//! Enriched A-contexts: I-compatibility and the modal operators on concepts.
//!
//! `R_□: A × X` and `R_◇: X × A` interpret the box and diamond; `R_▷: A × A`
//! and `R_◁: X × X` interpret the two typicality operators. Any subset of
//! the four may be present. Compatibility of `R_□` / `R_◇` is checked once at
//! construction and gates the box and diamond operators.

use serde::Serialize;

use crate::algebra::Truth;
use crate::context::{Concept, ConceptLattice, Context, Side};
use crate::error::{Error, RelationSlot, Result};
use crate::exec::{self, Exec};
use crate::mvsets::{singleton, MvRelation, MvSet};

/// The optional relations of a frame, before validation.
#[derive(Debug, Clone, Default)]
pub struct Relations {
    pub r_box: Option<MvRelation>,
    pub r_diamond: Option<MvRelation>,
    pub r_rhd: Option<MvRelation>,
    pub r_lhd: Option<MvRelation>,
}

/// One of the four singleton-image families whose members must be stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `R_□⁽⁰⁾[{α/x}]`, a set of objects.
    #[serde(rename = "R_box^(0)[{alpha/x}]")]
    BoxOfAttribute,
    /// `R_□⁽¹⁾[{α/a}]`, a set of attributes.
    #[serde(rename = "R_box^(1)[{alpha/a}]")]
    BoxOfObject,
    /// `R_◇⁽⁰⁾[{α/a}]`, a set of attributes.
    #[serde(rename = "R_diamond^(0)[{alpha/a}]")]
    DiamondOfObject,
    /// `R_◇⁽¹⁾[{α/x}]`, a set of objects.
    #[serde(rename = "R_diamond^(1)[{alpha/x}]")]
    DiamondOfAttribute,
}

impl Family {
    pub fn slot(self) -> RelationSlot {
        match self {
            Family::BoxOfAttribute | Family::BoxOfObject => RelationSlot::Box,
            Family::DiamondOfObject | Family::DiamondOfAttribute => RelationSlot::Diamond,
        }
    }
}

/// An unstable singleton image together with its Galois closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnstableImage {
    pub family: Family,
    pub alpha: Truth,
    pub element: String,
    pub image: Vec<usize>,
    pub closure: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct CompatibilityReport {
    pub box_present: bool,
    pub diamond_present: bool,
    /// Number of singleton images examined.
    pub checked: usize,
    pub failures: Vec<UnstableImage>,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Whether the given relation (when present) passed.
    pub fn slot_ok(&self, slot: RelationSlot) -> bool {
        !self.failures.iter().any(|f| f.family.slot() == slot)
    }
}

/// Checks every singleton family of `R_□` / `R_◇` for stability against `ctx`.
pub fn check_compatibility(ctx: &Context, r_box: Option<&MvRelation>, r_diamond: Option<&MvRelation>) -> Result<CompatibilityReport> {
    let alg = ctx.algebra();
    let (n_obj, n_attr) = (ctx.objects().len(), ctx.attributes().len());
    let mut report = CompatibilityReport {
        box_present: r_box.is_some(),
        diamond_present: r_diamond.is_some(),
        ..Default::default()
    };
    let mut examine = |family: Family, alpha: Truth, element: &str, image: MvSet, side: Side| -> Result<()> {
        report.checked += 1;
        let closure = match side {
            Side::Extent => ctx.down(&ctx.up(&image)?)?,
            Side::Intent => ctx.up(&ctx.down(&image)?)?,
        };
        if closure != image {
            report.failures.push(UnstableImage {
                family,
                alpha,
                element: element.to_string(),
                image: image.indices(),
                closure: closure.indices(),
            });
        }
        Ok(())
    };
    if let Some(r) = r_box {
        check_shape(RelationSlot::Box, r, n_obj, n_attr)?;
        for alpha in alg.elements() {
            for (x, name) in ctx.attributes().iter().enumerate() {
                let img = r.lift0(alg, &singleton(alg, n_attr, alpha, x)?)?;
                examine(Family::BoxOfAttribute, alpha, name, img, Side::Extent)?;
            }
            for (a, name) in ctx.objects().iter().enumerate() {
                let img = r.lift1(alg, &singleton(alg, n_obj, alpha, a)?)?;
                examine(Family::BoxOfObject, alpha, name, img, Side::Intent)?;
            }
        }
    }
    if let Some(r) = r_diamond {
        check_shape(RelationSlot::Diamond, r, n_attr, n_obj)?;
        for alpha in alg.elements() {
            for (a, name) in ctx.objects().iter().enumerate() {
                let img = r.lift0(alg, &singleton(alg, n_obj, alpha, a)?)?;
                examine(Family::DiamondOfObject, alpha, name, img, Side::Intent)?;
            }
            for (x, name) in ctx.attributes().iter().enumerate() {
                let img = r.lift1(alg, &singleton(alg, n_attr, alpha, x)?)?;
                examine(Family::DiamondOfAttribute, alpha, name, img, Side::Extent)?;
            }
        }
    }
    Ok(report)
}

fn check_shape(slot: RelationSlot, r: &MvRelation, rows: usize, cols: usize) -> Result<()> {
    if r.rows() != rows || r.cols() != cols {
        return Err(Error::Input(format!(
            "{slot} must be {rows}×{cols}, got {}×{}",
            r.rows(),
            r.cols()
        )));
    }
    Ok(())
}

/// Raw degree map of a typicality operator, its closure into a concept, and
/// whether the raw map was already stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModalImage {
    pub raw: MvSet,
    pub stable: bool,
    pub concept: Concept,
}

#[derive(Debug, Clone)]
pub struct EnrichedContext {
    base: Context,
    relations: Relations,
    compatibility: CompatibilityReport,
}

impl EnrichedContext {
    pub fn new(base: Context, relations: Relations) -> Result<Self> {
        let (n_obj, n_attr) = (base.objects().len(), base.attributes().len());
        if let Some(r) = &relations.r_rhd {
            check_shape(RelationSlot::Rhd, r, n_obj, n_obj)?;
        }
        if let Some(r) = &relations.r_lhd {
            check_shape(RelationSlot::Lhd, r, n_attr, n_attr)?;
        }
        let compatibility = check_compatibility(&base, relations.r_box.as_ref(), relations.r_diamond.as_ref())?;
        Ok(EnrichedContext { base, relations, compatibility })
    }

    /// Frame with `R_□ = I` and `R_◇ = Iᵗ`, whose modalities are identities.
    pub fn identity_frame(base: Context) -> Self {
        let relations = Relations {
            r_box: Some(base.incidence().clone()),
            r_diamond: Some(base.incidence().transpose()),
            ..Default::default()
        };
        Self::new(base, relations).expect("incidence relations have the right shape")
    }

    pub fn base(&self) -> &Context {
        &self.base
    }

    pub fn compatibility(&self) -> &CompatibilityReport {
        &self.compatibility
    }

    pub fn relations(&self) -> &Relations {
        &self.relations
    }

    pub fn relation(&self, slot: RelationSlot) -> Option<&MvRelation> {
        match slot {
            RelationSlot::Box => self.relations.r_box.as_ref(),
            RelationSlot::Diamond => self.relations.r_diamond.as_ref(),
            RelationSlot::Rhd => self.relations.r_rhd.as_ref(),
            RelationSlot::Lhd => self.relations.r_lhd.as_ref(),
        }
    }

    fn require(&self, slot: RelationSlot) -> Result<&MvRelation> {
        self.relation(slot).ok_or(Error::MissingRelation(slot))
    }

    fn require_compatible(&self, slot: RelationSlot) -> Result<&MvRelation> {
        let r = self.require(slot)?;
        if !self.compatibility.slot_ok(slot) {
            return Err(Error::Incompatible(slot));
        }
        Ok(r)
    }

    /// Whether `R_□` and `R_◇` (as far as present) are compatible.
    pub fn is_compatible(&self) -> bool {
        self.compatibility.passed()
    }

    /// `[R_□]c = (R_□⁽⁰⁾[⟨c⟩], (R_□⁽⁰⁾[⟨c⟩])↑)`.
    pub fn box_op(&self, c: &Concept) -> Result<Concept> {
        let r = self.require_compatible(RelationSlot::Box)?;
        let extent = r.lift0(self.base.algebra(), &c.intent)?;
        let intent = self.base.up(&extent)?;
        Ok(Concept { extent, intent })
    }

    /// `⟨R_◇⟩c = ((R_◇⁽⁰⁾[⟦c⟧])↓, R_◇⁽⁰⁾[⟦c⟧])`.
    pub fn diamond_op(&self, c: &Concept) -> Result<Concept> {
        let r = self.require_compatible(RelationSlot::Diamond)?;
        let intent = r.lift0(self.base.algebra(), &c.extent)?;
        let extent = self.base.down(&intent)?;
        Ok(Concept { extent, intent })
    }

    /// `⟦▷c⟧(b) = ⋀_{b'} ⟦c⟧(b') → R_▷(b', b)`, closed on the extent side.
    pub fn rhd_op(&self, c: &Concept) -> Result<ModalImage> {
        let r = self.require(RelationSlot::Rhd)?;
        let raw = r.lift1(self.base.algebra(), &c.extent)?;
        let concept = self.base.concept_of(&raw)?;
        Ok(ModalImage { stable: concept.extent == raw, raw, concept })
    }

    /// `⟨◁c⟩(y) = ⋀_z ⟨c⟩(z) → R_◁(z, y)`, closed on the intent side.
    pub fn lhd_op(&self, c: &Concept) -> Result<ModalImage> {
        let r = self.require(RelationSlot::Lhd)?;
        let raw = r.lift1(self.base.algebra(), &c.intent)?;
        let concept = self.base.concept_of_intent(&raw)?;
        Ok(ModalImage { stable: concept.intent == raw, raw, concept })
    }

    /// Checks the complex-algebra laws on an enumerated lattice of this frame:
    /// `[R_□]` preserves binary meets and `⊤`, `⟨R_◇⟩` preserves binary joins
    /// and `⊥`, both are monotone, and every image is already a concept of the
    /// lattice without closure correction.
    pub fn complex_algebra_laws(&self, lattice: &ConceptLattice, exec: Exec) -> Result<ComplexAlgebraReport> {
        let n = lattice.len();
        let has_box = self.relations.r_box.is_some();
        let has_dia = self.relations.r_diamond.is_some();
        let box_img: Vec<Option<usize>> = if has_box {
            exec::try_map_range(exec, n, |i| {
                let c = self.box_op(lattice.get(i))?;
                Ok::<_, Error>(lattice.index_of(&c))
            })?
        } else {
            vec![]
        };
        let dia_img: Vec<Option<usize>> = if has_dia {
            exec::try_map_range(exec, n, |i| {
                let c = self.diamond_op(lattice.get(i))?;
                Ok::<_, Error>(lattice.index_of(&c))
            })?
        } else {
            vec![]
        };

        let mut report = ComplexAlgebraReport { concepts: n, pairs_checked: n * n, ..Default::default() };
        report.images_are_concepts = box_img.iter().chain(&dia_img).all(Option::is_some);
        if !report.images_are_concepts {
            return Ok(report);
        }
        let bi = |i: usize| box_img[i].expect("checked above");
        let di = |i: usize| dia_img[i].expect("checked above");
        if has_box {
            report.box_top = Some(bi(lattice.top()) == lattice.top());
        }
        if has_dia {
            report.diamond_bottom = Some(di(lattice.bottom()) == lattice.bottom());
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let verdicts = exec::map_slice(exec, &pairs, |&(i, j)| {
            let box_meet = !has_box || bi(lattice.meet(i, j)) == lattice.meet(bi(i), bi(j));
            let dia_join = !has_dia || di(lattice.join(i, j)) == lattice.join(di(i), di(j));
            let mono = !lattice.leq(i, j)
                || ((!has_box || lattice.leq(bi(i), bi(j))) && (!has_dia || lattice.leq(di(i), di(j))));
            (box_meet, dia_join, mono)
        });
        for (&(i, j), (box_meet, dia_join, mono)) in pairs.iter().zip(verdicts) {
            if !box_meet && report.box_meet_failure.is_none() {
                report.box_meet_failure = Some((i, j));
            }
            if !dia_join && report.diamond_join_failure.is_none() {
                report.diamond_join_failure = Some((i, j));
            }
            if !mono && report.monotonicity_failure.is_none() {
                report.monotonicity_failure = Some((i, j));
            }
        }
        Ok(report)
    }
}

/// Outcome of [`EnrichedContext::complex_algebra_laws`]; failures carry the
/// first offending pair of concept indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ComplexAlgebraReport {
    pub concepts: usize,
    pub pairs_checked: usize,
    pub images_are_concepts: bool,
    pub box_top: Option<bool>,
    pub diamond_bottom: Option<bool>,
    pub box_meet_failure: Option<(usize, usize)>,
    pub diamond_join_failure: Option<(usize, usize)>,
    pub monotonicity_failure: Option<(usize, usize)>,
}

impl ComplexAlgebraReport {
    pub fn passed(&self) -> bool {
        self.images_are_concepts
            && self.box_top != Some(false)
            && self.diamond_bottom != Some(false)
            && self.box_meet_failure.is_none()
            && self.diamond_join_failure.is_none()
            && self.monotonicity_failure.is_none()
    }
}
