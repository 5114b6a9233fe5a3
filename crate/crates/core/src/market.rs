//! Multi-market competition analyses over an arena.
//!
//! An arena is a frame whose objects are firms and whose attributes are
//! product markets; `I(a, x)` is the extent to which firm `a` is active in
//! market `x`. Reports list one degree per element together with the formula
//! that produced it.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use serde::Serialize;

use crate::algebra::Truth;
use crate::context::{crisp_point, Concept};
use crate::enriched::EnrichedContext;
use crate::error::{Error, RelationSlot, Result};
use crate::io::{self, QuantizationLog};
use crate::mvsets::MvSet;

const LABEL_KEYS: [&str; 5] = ["I", "R_box", "R_diamond", "R_rhd", "R_lhd"];

#[derive(Debug, Clone)]
pub struct Arena {
    pub frame: EnrichedContext,
    pub labels: BTreeMap<String, String>,
    pub quantization: Option<QuantizationLog>,
    pub warnings: Vec<String>,
}

impl Arena {
    /// Incompatible `R_□`/`R_◇` are kept with a warning; analyses that need
    /// them fail with `Incompatible`.
    pub fn new(frame: EnrichedContext, labels: BTreeMap<String, String>, quantization: Option<QuantizationLog>) -> Self {
        let mut warnings = Vec::new();
        for key in labels.keys().filter(|k| !LABEL_KEYS.contains(&k.as_str())) {
            warnings.push(format!("label `{key}` names no relation"));
        }
        for slot in [RelationSlot::Box, RelationSlot::Diamond] {
            if frame.relation(slot).is_some() && !frame.compatibility().slot_ok(slot) {
                warnings.push(format!("{slot} is not I-compatible; its analyses are disabled"));
            }
        }
        if let Some(q) = &quantization {
            if !q.rounded.is_empty() {
                warnings.push(format!("{} of {} cells rounded onto Ł{}", q.rounded.len(), q.cells, q.chain_size));
            }
        }
        Arena { frame, labels, quantization, warnings }
    }

    pub fn firms(&self) -> &[String] {
        self.frame.base().objects()
    }

    pub fn markets(&self) -> &[String] {
        self.frame.base().attributes()
    }

    pub fn box_enabled(&self) -> bool {
        self.frame.relation(RelationSlot::Box).is_some() && self.frame.compatibility().slot_ok(RelationSlot::Box)
    }

    fn label(&self, slot: &str) -> Option<&str> {
        self.labels.get(slot).map(String::as_str)
    }
}

pub fn load_arena(path: &Path) -> Result<Arena> {
    let loaded = io::load_frame(path)?;
    Ok(Arena::new(loaded.frame, loaded.labels, loaded.quantization))
}

pub fn parse_arena(text: &str) -> Result<Arena> {
    let loaded = io::parse_frame_str(text, Path::new(""))?;
    Ok(Arena::new(loaded.frame, loaded.labels, loaded.quantization))
}

/// `c_a = (f_a↑↓, f_a↑)` for the crisp point `f_a`.
pub fn firm_category(arena: &Arena, firm: &str) -> Result<Concept> {
    let ctx = arena.frame.base();
    let a = ctx.object_index(firm)?;
    ctx.concept_of(&crisp_point(ctx.algebra(), ctx.objects().len(), a))
}

/// `c_x = (u_x↓, u_x↓↑)` for the crisp point `u_x`.
pub fn market_category(arena: &Arena, market: &str) -> Result<Concept> {
    let ctx = arena.frame.base();
    let x = ctx.attribute_index(market)?;
    ctx.concept_of_intent(&crisp_point(ctx.algebra(), ctx.attributes().len(), x))
}

/// Weights by market name; absent markets weigh `0`.
pub fn basket_weights(arena: &Arena, weights: &BTreeMap<String, Truth>) -> Result<MvSet> {
    let ctx = arena.frame.base();
    let mut u = vec![ctx.algebra().bottom(); ctx.attributes().len()];
    for (name, &w) in weights {
        let x = ctx.attribute_index(name)?;
        ctx.algebra().value(w.0 as usize)?;
        u[x] = w;
    }
    Ok(MvSet::new(u))
}

/// `c_Y = (u_Y↓, u_Y↓↑)`.
pub fn basket_category(arena: &Arena, weights: &BTreeMap<String, Truth>) -> Result<Concept> {
    arena.frame.base().concept_of_intent(&basket_weights(arena, weights)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Typicality {
    RhdOverConcept,
    LhdOverConcept,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub element: String,
    pub degree: usize,
    pub label: String,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedSide {
    pub side: &'static str,
    pub degrees: Vec<DegreeRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub query: String,
    pub reading: String,
    pub relation_label: Option<String>,
    pub degrees: Vec<DegreeRow>,
    /// Closure of the raw degrees when they are not already stable.
    pub closed: Option<ClosedSide>,
    pub provenance: Vec<String>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn degree_of(&self, element: &str) -> Option<usize> {
        self.degrees.iter().find(|r| r.element == element).map(|r| r.degree)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports serialise")
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "query:   {}", self.query)?;
        writeln!(f, "reading: {}", self.reading)?;
        if let Some(l) = &self.relation_label {
            writeln!(f, "relation: {l}")?;
        }
        f.write_str(&table(&self.degrees))?;
        if let Some(c) = &self.closed {
            writeln!(f, "closed {}:", c.side)?;
            f.write_str(&table(&c.degrees))?;
        }
        for p in &self.provenance {
            writeln!(f, "via: {p}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

fn table(rows: &[DegreeRow]) -> String {
    let w0 = rows.iter().map(|r| r.element.chars().count()).max().unwrap_or(0).max("element".len());
    let w1 = rows.iter().map(|r| r.label.chars().count()).max().unwrap_or(0).max("degree".len());
    let mut out = String::new();
    let _ = writeln!(out, "  {:<w0$}  {:<w1$}  formula", "element", "degree");
    for r in rows {
        let _ = writeln!(out, "  {:<w0$}  {:<w1$}  {}", r.element, r.label, r.formula);
    }
    out
}

fn rows(arena: &Arena, names: &[String], degrees: &MvSet, formula: impl Fn(&str) -> String) -> Vec<DegreeRow> {
    let alg = arena.frame.base().algebra();
    names
        .iter()
        .zip(degrees.iter())
        .map(|(n, d)| DegreeRow { element: n.clone(), degree: d.0 as usize, label: alg.label(d), formula: formula(n) })
        .collect()
}

fn report(arena: &Arena, query: String, reading: &str, slot: Option<&str>, degrees: Vec<DegreeRow>) -> AnalysisReport {
    AnalysisReport {
        query,
        reading: reading.to_string(),
        relation_label: slot.and_then(|s| arena.label(s)).map(str::to_string),
        degrees,
        closed: None,
        provenance: vec![],
        warnings: arena.warnings.clone(),
    }
}

pub fn firm_category_report(arena: &Arena, firm: &str) -> Result<AnalysisReport> {
    let c = firm_category(arena, firm)?;
    let ctx = arena.frame.base();
    let mut r = report(
        arena,
        format!("firm category of {firm}"),
        "greatest extent to which each firm is at least as active as the given firm in every market",
        Some("I"),
        rows(arena, ctx.objects(), &c.extent, |b| format!("⋀_x I({firm},x) → I({b},x)")),
    );
    r.closed = Some(ClosedSide { side: "intent", degrees: rows(arena, ctx.attributes(), &c.intent, |x| format!("I({firm},{x})")) });
    r.provenance.push(format!("c_{firm} = (f↑↓, f↑) for the crisp point f at {firm}"));
    Ok(r)
}

pub fn market_category_report(arena: &Arena, market: &str) -> Result<AnalysisReport> {
    let c = market_category(arena, market)?;
    let ctx = arena.frame.base();
    let mut r = report(
        arena,
        format!("market category of {market}"),
        "extent to which each firm is active in the given market",
        Some("I"),
        rows(arena, ctx.objects(), &c.extent, |a| format!("I({a},{market})")),
    );
    r.closed = Some(ClosedSide {
        side: "intent",
        degrees: rows(arena, ctx.attributes(), &c.intent, |y| format!("⋀_a I(a,{market}) → I(a,{y})")),
    });
    r.provenance.push(format!("c_{market} = (u↓, u↓↑) for the crisp point u at {market}"));
    Ok(r)
}

pub fn basket_category_report(arena: &Arena, weights: &BTreeMap<String, Truth>) -> Result<AnalysisReport> {
    let u = basket_weights(arena, weights)?;
    let c = arena.frame.base().concept_of_intent(&u)?;
    let ctx = arena.frame.base();
    let alg = ctx.algebra();
    let basket = ctx
        .attributes()
        .iter()
        .zip(u.iter())
        .map(|(x, w)| format!("{x}:{}", alg.label(w)))
        .collect::<Vec<_>>()
        .join(", ");
    let mut r = report(
        arena,
        format!("basket category of {{{basket}}}"),
        "fuzzy category of producers catering to the basket",
        Some("I"),
        rows(arena, ctx.objects(), &c.extent, |a| format!("⋀_x u_Y(x) → I({a},x)")),
    );
    r.closed = Some(ClosedSide { side: "intent", degrees: rows(arena, ctx.attributes(), &c.intent, |y| format!("u_Y↓↑({y})")) });
    r.provenance.push("c_Y = (u_Y↓, u_Y↓↑)".into());
    Ok(r)
}

/// Raw `▷`/`◁` degrees of `seed` and, when they are not stable, their closure.
pub fn typicality_analysis(arena: &Arena, kind: Typicality, seed: &Concept, seed_name: &str) -> Result<AnalysisReport> {
    let ctx = arena.frame.base();
    // Each degree reads `{prefix}{element})`.
    let (image, names, reading, slot, side, prefix) = match kind {
        Typicality::RhdOverConcept => (
            arena.frame.rhd_op(seed)?,
            ctx.objects(),
            "strategically typical producer",
            "R_rhd",
            "extent",
            format!("⋀_b' ⟦{seed_name}⟧(b') → R_rhd(b',"),
        ),
        Typicality::LhdOverConcept => (
            arena.frame.lhd_op(seed)?,
            ctx.attributes(),
            "typical product market",
            "R_lhd",
            "intent",
            format!("⋀_z ⟨{seed_name}⟩(z) → R_lhd(z,"),
        ),
    };
    let formula = |n: &str| format!("{prefix}{n})");
    let op = if kind == Typicality::RhdOverConcept { "rhd" } else { "lhd" };
    let mut r = report(arena, format!("{op} {seed_name}"), reading, Some(slot), rows(arena, names, &image.raw, formula));
    if !image.stable {
        let closed = if side == "extent" { &image.concept.extent } else { &image.concept.intent };
        r.closed = Some(ClosedSide { side, degrees: rows(arena, names, closed, |n| format!("closure at {n}")) });
        r.provenance.push(format!("raw {op} degrees are not {side}-stable; closure listed separately"));
    }
    r.provenance.push(format!("{op} lifts {slot} along the {side} of {seed_name}"));
    Ok(r)
}

/// `⟦□ c_a⟧(b) = ⋀_x I(a, x) → R_□(b, x)`.
pub fn box_refinement_analysis(arena: &Arena, firm: &str) -> Result<AnalysisReport> {
    let c = firm_category(arena, firm)?;
    let boxed = arena.frame.box_op(&c)?;
    let ctx = arena.frame.base();
    let mut r = report(
        arena,
        format!("box refinement of c_{firm}"),
        "at least as active as the given firm relative to the target group",
        Some("R_box"),
        rows(arena, ctx.objects(), &boxed.extent, |b| format!("⋀_x I({firm},x) → R_box({b},x)")),
    );
    r.provenance.push(format!("[R_box] c_{firm}, extent = R_box⁽⁰⁾[I({firm},·)]"));
    Ok(r)
}

pub fn parse_weights(arena: &Arena, spec: &str) -> Result<BTreeMap<String, Truth>> {
    let alg = arena.frame.base().algebra();
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (name, w) = item
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("basket entry `{item}` is not market=index")))?;
            let idx: usize = w.trim().parse().map_err(|_| Error::Input(format!("basket weight `{w}` is not an index")))?;
            Ok((name.trim().to_string(), alg.value(idx)?))
        })
        .collect()
}
