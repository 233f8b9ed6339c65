//! Versioned JSON schemas for presentations, matrices, cylinder functions,
//! map specifications and reports.  All emitted collections are ordered so
//! reports diff cleanly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cohomology::CylFunction;
use crate::error::{Error, Result};
use crate::past::GroupoidFlags;
use crate::presentation::{Alphabet, Edge, EvPerPoint, MatrixKind, Presentation, SftMatrix};
use crate::relations::{CocyclePairSpec, Counterexample, MapSpec, Verdict, VerificationReport};

pub const FORMAT: &str = "shiftlab/1";

fn check_format(format: &str) -> Result<()> {
    if format != FORMAT {
        return Err(Error::Parse(format!(
            "unsupported format {format:?}, expected {FORMAT:?}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeFile {
    pub from: String,
    pub to: String,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationFile {
    pub format: String,
    pub alphabet: Vec<String>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotations: Option<BTreeMap<String, String>>,
}

pub fn presentation_to_file(p: &Presentation) -> PresentationFile {
    PresentationFile {
        format: FORMAT.to_string(),
        alphabet: p.alphabet.symbols().map(|s| s.to_string()).collect(),
        vertices: p.vertices.clone(),
        edges: p
            .edges
            .iter()
            .map(|e| EdgeFile {
                from: p.vertices[e.from].clone(),
                to: p.vertices[e.to].clone(),
                label: p.alphabet.symbol(e.label).to_string(),
            })
            .collect(),
        annotations: None,
    }
}

pub fn presentation_from_file(f: &PresentationFile) -> Result<Presentation> {
    check_format(&f.format)?;
    let alphabet = Alphabet::new(f.alphabet.clone())?;
    let vid: BTreeMap<&str, usize> = f
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let edges = f
        .edges
        .iter()
        .map(|e| {
            Ok(Edge {
                from: *vid
                    .get(e.from.as_str())
                    .ok_or_else(|| Error::Parse(format!("unknown vertex {:?}", e.from)))?,
                to: *vid
                    .get(e.to.as_str())
                    .ok_or_else(|| Error::Parse(format!("unknown vertex {:?}", e.to)))?,
                label: alphabet.id_of(&e.label)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(alphabet, f.vertices.clone(), edges)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub format: String,
    pub matrix: Vec<Vec<u64>>,
    pub kind: String,
}

pub fn matrix_from_file(f: &MatrixFile) -> Result<(SftMatrix, MatrixKind)> {
    check_format(&f.format)?;
    let kind = match f.kind.as_str() {
        "vertex" => MatrixKind::Vertex,
        "edge" => MatrixKind::Edge,
        other => return Err(Error::Parse(format!("unknown matrix kind {other:?}"))),
    };
    Ok((SftMatrix::new(f.matrix.clone())?, kind))
}

pub fn matrix_to_file(m: &SftMatrix, kind: MatrixKind) -> MatrixFile {
    MatrixFile {
        format: FORMAT.to_string(),
        matrix: m.entries.clone(),
        kind: match kind {
            MatrixKind::Vertex => "vertex".to_string(),
            MatrixKind::Edge => "edge".to_string(),
        },
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CylFile {
    pub format: String,
    pub depth: usize,
    pub values: BTreeMap<String, i64>,
}

pub fn cyl_to_file(p: &Presentation, f: &CylFunction) -> CylFile {
    CylFile {
        format: FORMAT.to_string(),
        depth: f.depth,
        values: f
            .values
            .iter()
            .map(|(w, v)| (p.render_word(w), *v))
            .collect(),
    }
}

pub fn cyl_from_file(p: &Presentation, f: &CylFile) -> Result<CylFunction> {
    check_format(&f.format)?;
    let mut values = BTreeMap::new();
    for (w, v) in &f.values {
        values.insert(p.alphabet.tokenize(w)?, *v);
    }
    CylFunction::new(p, f.depth, values)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointFile {
    pub transient: String,
    pub cycle: String,
}

pub fn point_to_file(a: &Alphabet, x: &EvPerPoint) -> PointFile {
    PointFile {
        transient: a.render(&x.transient),
        cycle: a.render(&x.cycle),
    }
}

pub fn point_from_file(a: &Alphabet, f: &PointFile) -> Result<EvPerPoint> {
    EvPerPoint::parse(a, &f.transient, &f.cycle)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MapSpecFile {
    #[serde(rename = "block_map")]
    BlockMap {
        window: usize,
        table: BTreeMap<String, String>,
        #[serde(default)]
        pad: usize,
    },
    #[serde(rename = "substitution")]
    Substitution {
        rules: Vec<(String, String)>,
        /// whole-point exceptions (`exceptions` is accepted as an alias)
        #[serde(default, alias = "exceptions")]
        point_overrides: Vec<OverrideFile>,
        #[serde(default)]
        suffix_overrides: Vec<OverrideFile>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OverrideFile {
    pub from: PointFile,
    pub to: PointFile,
}

pub fn map_spec_from_file(f: &MapSpecFile) -> MapSpec {
    match f {
        MapSpecFile::BlockMap { window, table, pad } => MapSpec::BlockMap {
            window: *window,
            table: table.clone(),
            pad: *pad,
        },
        MapSpecFile::Substitution {
            rules,
            point_overrides,
            suffix_overrides,
        } => {
            let conv = |o: &OverrideFile| {
                (
                    (o.from.transient.clone(), o.from.cycle.clone()),
                    (o.to.transient.clone(), o.to.cycle.clone()),
                )
            };
            MapSpec::Substitution {
                rules: rules.clone(),
                point_overrides: point_overrides.iter().map(conv).collect(),
                suffix_overrides: suffix_overrides.iter().map(conv).collect(),
            }
        }
    }
}

/// A pair of maps (a candidate relation and its inverse candidate).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapsFile {
    pub format: String,
    pub h: MapSpecFile,
    pub h_inv: MapSpecFile,
}

/// Cocycle pairs for both sides of an orbit equivalence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocyclePairFile {
    pub k: CylFile,
    pub l: CylFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocyclesFile {
    pub format: String,
    pub x: CocyclePairFile,
    pub y: CocyclePairFile,
}

pub fn cocycles_from_file(
    px: &Presentation,
    py: &Presentation,
    f: &CocyclesFile,
) -> Result<(CocyclePairSpec, CocyclePairSpec)> {
    check_format(&f.format)?;
    let cx = CocyclePairSpec::new(cyl_from_file(px, &f.x.k)?, cyl_from_file(px, &f.x.l)?)?;
    let cy = CocyclePairSpec::new(cyl_from_file(py, &f.y.k)?, cyl_from_file(py, &f.y.l)?)?;
    Ok((cx, cy))
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlagsFile {
    pub format: String,
    pub principal: bool,
    pub effective: bool,
    pub condition_i: bool,
    pub dense_aperiodic: bool,
    pub witnesses: Vec<(String, Option<PointFile>)>,
}

pub fn flags_to_file(a: &Alphabet, flags: &GroupoidFlags) -> FlagsFile {
    FlagsFile {
        format: FORMAT.to_string(),
        principal: flags.principal,
        effective: flags.effective,
        condition_i: flags.condition_i,
        dense_aperiodic: flags.dense_aperiodic,
        witnesses: flags
            .witnesses
            .iter()
            .map(|(what, x)| (what.clone(), x.as_ref().map(|p| point_to_file(a, p))))
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvariantFile {
    pub format: String,
    pub cover_adjacency: Vec<Vec<u64>>,
    pub bf_invariant_factors: Vec<String>,
    #[serde(rename = "det_I_minus_A")]
    pub det_i_minus_a: String,
    pub flags: FlagsFile,
}

pub fn invariants_to_file(a: &Alphabet, rep: &crate::flow::FlowInvariantReport) -> InvariantFile {
    InvariantFile {
        format: FORMAT.to_string(),
        cover_adjacency: rep.cover_adjacency.clone(),
        bf_invariant_factors: rep
            .bowen_franks
            .invariant_factors
            .iter()
            .map(|d| d.to_string())
            .collect(),
        det_i_minus_a: rep.bowen_franks.determinant.to_string(),
        flags: flags_to_file(a, &rep.flags),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleFile {
    pub equation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    pub point: PointFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub format: String,
    pub verdict: String,
    pub checked_equations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleFile>,
    pub bounds: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Unknown => "unknown",
    }
}

pub fn report_to_file(a: &Alphabet, rep: &VerificationReport) -> ReportFile {
    ReportFile {
        format: FORMAT.to_string(),
        verdict: verdict_str(rep.verdict).to_string(),
        checked_equations: rep.checked_equations.clone(),
        counterexample: rep.counterexample.as_ref().map(|ce| match ce {
            Counterexample::Word {
                word,
                point,
                equation,
            } => CounterexampleFile {
                equation: equation.clone(),
                word: Some(word.clone()),
                point: point_to_file(a, point),
                lhs: None,
                rhs: None,
            },
            Counterexample::Point {
                point,
                equation,
                lhs,
                rhs,
            } => CounterexampleFile {
                equation: equation.clone(),
                word: None,
                point: point_to_file(a, point),
                lhs: Some(lhs.clone()),
                rhs: Some(rhs.clone()),
            },
        }),
        bounds: rep.bounds.clone(),
        notes: rep.notes.clone(),
    }
}
