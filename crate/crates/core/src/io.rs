//! JSON file formats.
//!
//! * algebra: `{"kind", "size", "join"?, "meet"?, "otimes"?, "residuum"?}`;
//!   custom algebras need `join` and `otimes`, the other tables are derived
//!   when absent.
//! * context: `{"algebra", "objects", "attributes", "I"}` where `algebra` is an
//!   algebra object, an inline spec such as `"lukasiewicz:5"`, or a path
//!   relative to the file.
//! * frame: a context plus optional `"R_box"`, `"R_diamond"`, `"R_rhd"`, `"R_lhd"`.
//! * model: a frame plus `"V": {atom: {"extent": [...]} | {"intent": [...]}}`.
//! * modal lattice: `{"elements", "leq", "box", "dia", "atoms"?}`.
//!
//! Matrices hold value indices, rows first.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{AlgebraKind, AlgebraTables, TruthAlgebra};
use crate::canonical::ModalLattice;
use crate::context::{describe, Concept, ConceptLattice, Context};
use crate::enriched::{EnrichedContext, Relations};
use crate::error::{Error, RelationSlot, Result};
use crate::mvsets::{MvRelation, MvSet};
use crate::semantics::Model;

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub kind: AlgebraKind,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meet: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub otimes: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuum: Option<Vec<Vec<usize>>>,
}

impl AlgebraFile {
    fn has_tables(&self) -> bool {
        self.join.is_some() || self.meet.is_some() || self.otimes.is_some() || self.residuum.is_some()
    }

    /// Complete tables for validation; built-in kinds use their own tables.
    pub fn tables(&self) -> Result<AlgebraTables> {
        match self.kind {
            AlgebraKind::Custom => {
                let missing = |name| Error::Input(format!("custom algebra needs a `{name}` table"));
                AlgebraTables::derive_missing(
                    self.size,
                    self.join.clone().ok_or_else(|| missing("join"))?,
                    self.meet.clone(),
                    self.otimes.clone().ok_or_else(|| missing("otimes"))?,
                    self.residuum.clone(),
                )
            }
            kind => {
                if self.has_tables() {
                    return Err(Error::Input(format!("tables are only accepted for kind custom, not {kind}")));
                }
                Ok(TruthAlgebra::chain(kind, self.size)?.tables())
            }
        }
    }

    pub fn build(&self) -> Result<TruthAlgebra> {
        match self.kind {
            AlgebraKind::Custom => TruthAlgebra::from_tables(&self.tables()?),
            kind => {
                self.tables()?;
                TruthAlgebra::chain(kind, self.size)
            }
        }
    }
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile> {
    Ok(serde_json::from_str(text)?)
}

/// Resolves an algebra reference: an algebra object, an inline spec, or a
/// path (relative to `base`).
pub fn resolve_algebra(value: &Value, base: &Path) -> Result<TruthAlgebra> {
    match value {
        Value::String(s) => match TruthAlgebra::from_inline(s) {
            Ok(alg) => Ok(alg),
            Err(inline_err) => {
                let path = base.join(s);
                if path.is_file() {
                    parse_algebra_file(&read_file(&path)?)?.build()
                } else {
                    Err(inline_err)
                }
            }
        },
        Value::Object(_) => serde_json::from_value::<AlgebraFile>(value.clone())?.build(),
        _ => Err(Error::Input("`algebra` must be an object, an inline spec or a path".into())),
    }
}

/// `--algebra` on the command line: inline spec or file path.
pub fn algebra_arg(spec: &str) -> Result<TruthAlgebra> {
    resolve_algebra(&Value::String(spec.to_string()), Path::new(""))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SideSpec {
    Extent { extent: Vec<usize> },
    Intent { intent: Vec<usize> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Quantize {
    pub chain_size: usize,
}

/// Union of the context, frame, model and arena layouts. Matrices are read
/// as numbers so arenas can carry raw decimals for quantisation.
#[derive(Debug, Clone, Deserialize)]
pub struct FrameFile {
    #[serde(default)]
    pub algebra: Option<Value>,
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    #[serde(rename = "I")]
    pub incidence: Vec<Vec<f64>>,
    #[serde(rename = "R_box", default)]
    pub r_box: Option<Vec<Vec<f64>>>,
    #[serde(rename = "R_diamond", default)]
    pub r_diamond: Option<Vec<Vec<f64>>>,
    #[serde(rename = "R_rhd", default)]
    pub r_rhd: Option<Vec<Vec<f64>>>,
    #[serde(rename = "R_lhd", default)]
    pub r_lhd: Option<Vec<Vec<f64>>>,
    #[serde(rename = "V", default)]
    pub valuation: Option<BTreeMap<String, SideSpec>>,
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
    #[serde(default)]
    pub quantize: Option<Quantize>,
}

/// A cell whose raw value was not exactly on the chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizedCell {
    pub relation: String,
    pub row: usize,
    pub col: usize,
    pub raw: f64,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizationLog {
    pub chain_size: usize,
    pub cells: usize,
    pub rounded: Vec<QuantizedCell>,
}

/// Converts number matrices to index matrices, exactly or by nearest-index rounding.
struct Converter<'a> {
    alg: &'a TruthAlgebra,
    log: Option<QuantizationLog>,
}

impl Converter<'_> {
    fn relation(&mut self, name: &str, m: &[Vec<f64>], rows: usize, cols: usize) -> Result<MvRelation> {
        if m.len() != rows || m.iter().any(|r| r.len() != cols) {
            return Err(Error::Input(format!("{name} must be a {rows}×{cols} matrix")));
        }
        let mut idx = vec![vec![0usize; cols]; rows];
        for (r, row) in m.iter().enumerate() {
            for (c, &raw) in row.iter().enumerate() {
                idx[r][c] = self.cell(name, r, c, raw)?;
            }
        }
        MvRelation::from_matrix(self.alg, rows, cols, &idx)
    }

    fn cell(&mut self, name: &str, row: usize, col: usize, raw: f64) -> Result<usize> {
        match &mut self.log {
            Some(log) => {
                if !(0.0..=1.0).contains(&raw) {
                    return Err(Error::Input(format!("{name}[{row}][{col}] = {raw} is outside [0, 1]")));
                }
                let scaled = raw * (log.chain_size - 1) as f64;
                let index = scaled.round() as usize;
                log.cells += 1;
                if (scaled - index as f64).abs() > 1e-9 {
                    log.rounded.push(QuantizedCell { relation: name.to_string(), row, col, raw, index });
                }
                Ok(index)
            }
            None => {
                if raw < 0.0 || raw.fract() != 0.0 {
                    return Err(Error::Input(format!(
                        "{name}[{row}][{col}] = {raw} is not a value index (use \"quantize\" for raw degrees)"
                    )));
                }
                Ok(raw as usize)
            }
        }
    }
}

/// A parsed frame-like file with everything validated.
#[derive(Debug, Clone)]
pub struct LoadedFrame {
    pub frame: EnrichedContext,
    pub valuation: Option<BTreeMap<String, Concept>>,
    pub labels: BTreeMap<String, String>,
    pub quantization: Option<QuantizationLog>,
}

pub fn parse_frame_str(text: &str, base: &Path) -> Result<LoadedFrame> {
    let file: FrameFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("frame file: {e}")))?;
    let alg = match (&file.quantize, &file.algebra) {
        (Some(q), declared) => {
            if q.chain_size < 2 {
                return Err(Error::Input("quantize.chain_size must be at least 2".into()));
            }
            let alg = TruthAlgebra::lukasiewicz(q.chain_size)?;
            if let Some(v) = declared {
                let d = resolve_algebra(v, base)?;
                if d != alg {
                    return Err(Error::Input("quantize targets a Łukasiewicz chain of chain_size; `algebra` disagrees".into()));
                }
            }
            alg
        }
        (None, Some(v)) => resolve_algebra(v, base)?,
        (None, None) => return Err(Error::Input("missing field `algebra`".into())),
    };
    let alg = Arc::new(alg);
    let (na, nx) = (file.objects.len(), file.attributes.len());
    let mut conv = Converter {
        alg: &alg,
        log: file.quantize.as_ref().map(|q| QuantizationLog { chain_size: q.chain_size, cells: 0, rounded: vec![] }),
    };
    let incidence = conv.relation("I", &file.incidence, na, nx)?;
    let mut opt = |slot: RelationSlot, m: &Option<Vec<Vec<f64>>>, rows, cols| {
        m.as_ref().map(|m| conv.relation(slot.key(), m, rows, cols)).transpose()
    };
    let relations = Relations {
        r_box: opt(RelationSlot::Box, &file.r_box, na, nx)?,
        r_diamond: opt(RelationSlot::Diamond, &file.r_diamond, nx, na)?,
        r_rhd: opt(RelationSlot::Rhd, &file.r_rhd, na, na)?,
        r_lhd: opt(RelationSlot::Lhd, &file.r_lhd, nx, nx)?,
    };
    let quantization = conv.log;
    let ctx = Context::new(alg.clone(), file.objects, file.attributes, incidence)?;
    let valuation = file
        .valuation
        .map(|v| {
            v.into_iter()
                .map(|(p, side)| {
                    let concept = match side {
                        SideSpec::Extent { extent } => ctx.concept_with_extent(MvSet::from_indices(&alg, &extent)?),
                        SideSpec::Intent { intent } => ctx.concept_with_intent(MvSet::from_indices(&alg, &intent)?),
                    }
                    .map_err(|e| Error::Input(format!("V({p}): {e}")))?;
                    Ok((p, concept))
                })
                .collect::<Result<BTreeMap<_, _>>>()
        })
        .transpose()?;
    let frame = EnrichedContext::new(ctx, relations)?;
    Ok(LoadedFrame { frame, valuation, labels: file.labels, quantization })
}

pub fn load_frame(path: &Path) -> Result<LoadedFrame> {
    parse_frame_str(&read_file(path)?, &base_dir(path))
}

pub fn load_context(path: &Path) -> Result<Context> {
    Ok(load_frame(path)?.frame.base().clone())
}

pub fn load_model(path: &Path) -> Result<Model> {
    let loaded = load_frame(path)?;
    let valuation = loaded.valuation.ok_or_else(|| Error::Input("model file needs a `V` valuation".into()))?;
    Model::new(loaded.frame, valuation)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModalLatticeFile {
    pub elements: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    #[serde(rename = "box")]
    pub box_map: BTreeMap<String, String>,
    #[serde(rename = "dia")]
    pub dia_map: BTreeMap<String, String>,
    #[serde(default)]
    pub atoms: Vec<String>,
}

impl ModalLatticeFile {
    pub fn build(&self) -> Result<ModalLattice> {
        let index = |name: &str| {
            self.elements.iter().position(|e| e == name).ok_or_else(|| Error::UnknownElement(name.to_string()))
        };
        let total = |what: &str, m: &BTreeMap<String, String>| -> Result<Vec<usize>> {
            if let Some(k) = m.keys().find(|k| !self.elements.contains(k)) {
                return Err(Error::UnknownElement(k.clone()));
            }
            self.elements
                .iter()
                .map(|e| {
                    let target = m.get(e).ok_or_else(|| Error::Input(format!("`{what}` has no entry for `{e}`")))?;
                    index(target)
                })
                .collect()
        };
        let atoms = self.atoms.iter().map(|a| index(a)).collect::<Result<_>>()?;
        ModalLattice::new(self.elements.clone(), self.leq.clone(), total("box", &self.box_map)?, total("dia", &self.dia_map)?, atoms)
    }
}

pub fn load_modal_lattice(path: &Path) -> Result<ModalLattice> {
    let file: ModalLatticeFile =
        serde_json::from_str(&read_file(path)?).map_err(|e| Error::Input(format!("lattice file: {e}")))?;
    file.build()
}

/// Serialises a frame in the frame-file layout, algebra inline.
pub fn frame_to_json(frame: &EnrichedContext) -> Value {
    let ctx = frame.base();
    let alg = ctx.algebra();
    let algebra = match alg.kind() {
        AlgebraKind::Custom => serde_json::to_value(AlgebraFile {
            kind: AlgebraKind::Custom,
            size: alg.size(),
            join: Some(alg.tables().join),
            meet: Some(alg.tables().meet),
            otimes: Some(alg.tables().otimes),
            residuum: Some(alg.tables().residuum),
        })
        .expect("algebra tables serialise"),
        AlgebraKind::Boolean => json!("boolean"),
        kind => json!(format!("{kind}:{}", alg.size())),
    };
    let mut out = json!({
        "algebra": algebra,
        "objects": ctx.objects(),
        "attributes": ctx.attributes(),
        "I": ctx.incidence().to_matrix(),
    });
    for slot in [RelationSlot::Box, RelationSlot::Diamond, RelationSlot::Rhd, RelationSlot::Lhd] {
        if let Some(r) = frame.relation(slot) {
            out[slot.key()] = json!(r.to_matrix());
        }
    }
    out
}

pub fn concept_to_json(ctx: &Context, c: &Concept) -> Value {
    let (extent, intent) = describe(ctx, c);
    json!({
        "extent": c.extent.indices(),
        "intent": c.intent.indices(),
        "extent_labels": extent.into_iter().collect::<BTreeMap<_, _>>(),
        "intent_labels": intent.into_iter().collect::<BTreeMap<_, _>>(),
    })
}

pub fn lattice_to_json(ctx: &Context, lattice: &ConceptLattice) -> Value {
    json!({
        "objects": ctx.objects(),
        "attributes": ctx.attributes(),
        "concepts": lattice.concepts().iter().map(|c| concept_to_json(ctx, c)).collect::<Vec<_>>(),
        "bottom": lattice.bottom(),
        "top": lattice.top(),
        "covers": lattice.covers(),
    })
}
