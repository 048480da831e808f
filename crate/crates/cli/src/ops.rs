//! Operations shared by the command line and the HTTP service. Each returns
//! a serializable report or a [`Failure`] that knows its exit code and
//! status.

use std::time::Instant;

use descent_core::dc::{dc_path, DcError, DcMove, DcPath, Goal, MoveRejection, SchubertProblem};
use descent_core::graph::{
    build_components_threads, classify_component_values, grassmannian_census, ComponentReport, GraphError,
    GrassmannianCensus, ReportSummary, ValueCensus,
};
use descent_core::monk::{monk_dc_proof, monk_value, MonkError, MonkInstance, ProofEnd};
use descent_core::perm::{PermError, Permutation};
use descent_core::poly::IntPoly;
use descent_core::schubert::{
    poly_to_json, structure_constant, symmetric_number, to_y_string, Double, JsonTerm, SchubertError,
};
use descent_core::witness::{witness as run_witness, FieldKind, WitnessError, WitnessReport};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Largest degree accepted by the search- and oracle-backed operations.
pub const MAX_HEAVY_DEGREE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Bad input: parse errors, mismatched degrees, invalid problems.
    Usage { kind: &'static str, message: String },
    /// A well-formed move the rules do not allow.
    IllegalMove { message: String, reason: MoveRejection },
    /// A computed result disagrees with a recorded claim.
    Mismatch(String),
    /// Input is valid but too large to handle.
    Resource(String),
}

impl Failure {
    pub fn usage(kind: &'static str, message: impl Into<String>) -> Self {
        Failure::Usage { kind, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Usage { .. } | Failure::IllegalMove { .. } => 2,
            Failure::Resource(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Usage { kind, .. } => kind,
            Failure::IllegalMove { .. } => "illegal_move",
            Failure::Mismatch(_) => "claim_mismatch",
            Failure::Resource(_) => "resource_limit",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage { message, .. } | Failure::IllegalMove { message, .. } => message,
            Failure::Mismatch(m) | Failure::Resource(m) => m,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut err = serde_json::json!({ "kind": self.kind(), "message": self.message() });
        if let Failure::IllegalMove { reason, .. } = self {
            err["reason"] = serde_json::to_value(reason).expect("rejection serializes");
        }
        serde_json::json!({ "error": err })
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message())
    }
}

impl From<PermError> for Failure {
    fn from(e: PermError) -> Self {
        Failure::usage("invalid_permutation", e.to_string())
    }
}

impl From<DcError> for Failure {
    fn from(e: DcError) -> Self {
        let message = e.to_string();
        match e {
            DcError::IllegalMove { reason, .. } => Failure::IllegalMove { message, reason },
            other => Failure::usage("invalid_problem", other.to_string()),
        }
    }
}

impl From<SchubertError> for Failure {
    fn from(e: SchubertError) -> Self {
        Failure::usage("invalid_problem", e.to_string())
    }
}

impl From<MonkError> for Failure {
    fn from(e: MonkError) -> Self {
        match e {
            MonkError::Construction { .. } => Failure::Mismatch(e.to_string()),
            MonkError::Degree(_) => Failure::Resource(e.to_string()),
            other => Failure::usage("invalid_instance", other.to_string()),
        }
    }
}

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::Exhausted { .. } => Failure::Resource(e.to_string()),
            WitnessError::Dc(d) => d.into(),
            other => Failure::usage("witness", other.to_string()),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Resource(e.to_string())
    }
}

/// Integers as JSON numbers when they fit, strings otherwise.
pub fn int_json(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn heavy(p: &SchubertProblem) -> Result<(), Failure> {
    if p.degree() > MAX_HEAVY_DEGREE {
        return Err(Failure::Resource(format!(
            "degree {} is above the limit {MAX_HEAVY_DEGREE} for this operation",
            p.degree()
        )));
    }
    Ok(())
}

pub fn parse_problem(u: &str, v: &str, w: &str) -> Result<SchubertProblem, Failure> {
    Ok(SchubertProblem::new(u.parse()?, v.parse()?, w.parse()?)?)
}

/// Re-checks a deserialized problem (serde does not compare degrees).
pub fn checked(p: SchubertProblem) -> Result<SchubertProblem, Failure> {
    Ok(SchubertProblem::new(p.u, p.v, p.w)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct MoveOption {
    #[serde(flatten)]
    pub mv: DcMove,
    pub result: SchubertProblem,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub problem: SchubertProblem,
    pub degree: usize,
    pub lengths: [usize; 3],
    pub length_sum: usize,
    pub expected_length_sum: usize,
    pub vertex: bool,
    pub descents: [Vec<usize>; 3],
    /// First column where all three arguments ascend.
    pub dc_trivial: Option<usize>,
    /// Columns where two arguments descend; no move is possible there.
    pub locked_columns: Vec<usize>,
    pub moves: Vec<MoveOption>,
}

pub fn analyze(p: &SchubertProblem) -> AnalyzeReport {
    let n = p.degree();
    let [u, v, w] = p.args();
    let vertex = p.is_vertex();
    let moves = if vertex {
        p.legal_moves()
            .expect("vertex")
            .into_iter()
            .map(|mv| MoveOption { mv, result: p.apply_move(mv).expect("legal") })
            .collect()
    } else {
        Vec::new()
    };
    AnalyzeReport {
        problem: p.clone(),
        degree: n,
        lengths: [u.length(), v.length(), w.length()],
        length_sum: p.length_sum(),
        expected_length_sum: n * n.saturating_sub(1) / 2,
        vertex,
        descents: [u.descent_set(), v.descent_set(), w.descent_set()],
        dc_trivial: p.trivial_column(),
        locked_columns: (1..n).filter(|&i| p.descents_at(i).len() >= 2).collect(),
        moves,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoveRequest {
    pub problem: SchubertProblem,
    #[serde(rename = "move")]
    pub mv: DcMove,
}

#[derive(Debug, Clone, Serialize)]
pub struct MoveReport {
    pub problem: SchubertProblem,
    #[serde(rename = "move")]
    pub mv: DcMove,
    pub reverse: DcMove,
    pub dc_trivial: Option<usize>,
}

pub fn apply_move(p: &SchubertProblem, mv: DcMove) -> Result<MoveReport, Failure> {
    let next = p.apply_move(mv)?;
    Ok(MoveReport { dc_trivial: next.trivial_column(), problem: next, mv, reverse: mv.reverse() })
}

#[derive(Debug, Clone, Serialize)]
pub struct PathReport {
    pub problem: SchubertProblem,
    pub goal: Goal,
    pub found: bool,
    pub path: Option<DcPath>,
    pub end: Option<SchubertProblem>,
    pub length: Option<usize>,
    /// Whether the problem has any legal move at all.
    pub movable: bool,
}

pub fn path(p: &SchubertProblem, goal: Goal) -> Result<PathReport, Failure> {
    heavy(p)?;
    let found = dc_path(p, goal)?;
    let end = match &found {
        Some(path) => Some(path.end()?),
        None => None,
    };
    Ok(PathReport {
        problem: p.clone(),
        goal,
        found: found.is_some(),
        length: found.as_ref().map(DcPath::len),
        path: found,
        end,
        movable: !p.legal_moves()?.is_empty(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DoubleEntry {
    pub w: Permutation,
    pub value: String,
    pub terms: Vec<JsonTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NumberReport {
    pub problem: SchubertProblem,
    pub mode: &'static str,
    /// Symmetric number (single mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// `c_{uv}^{w'}(y)` for `w' = w0·w` (double mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure_constant: Option<DoubleEntry>,
    /// All nonzero `c_{uv}^{w'}(y)` over `w'` in `S_n` (double mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<DoubleEntry>>,
}

fn double_entry(w: Permutation, c: IntPoly) -> DoubleEntry {
    DoubleEntry { w, value: to_y_string(&c), terms: poly_to_json::<Double>(&c.as_y_constant()) }
}

pub fn number(p: &SchubertProblem, double: bool) -> Result<NumberReport, Failure> {
    heavy(p)?;
    let n = p.degree();
    if !double {
        let value = symmetric_number(&p.u, &p.v, &p.w)?;
        let note = (!p.is_vertex()).then(|| {
            format!(
                "length sum {} differs from {}; the number is 0 for degree reasons",
                p.length_sum(),
                n * n.saturating_sub(1) / 2
            )
        });
        return Ok(NumberReport {
            problem: p.clone(),
            mode: "single",
            value: Some(int_json(&value)),
            note,
            structure_constant: None,
            table: None,
        });
    }
    if n > 5 {
        return Err(Failure::Resource(format!("double mode supports degree up to 5, got {n}")));
    }
    let target = p.w.w0_complement();
    let main = structure_constant::<Double>(&p.u, &p.v, &target)?;
    let mut table = Vec::new();
    for w in descent_core::perm::all_permutations(n) {
        if w.length() > p.u.length() + p.v.length() {
            continue;
        }
        let c = structure_constant::<Double>(&p.u, &p.v, &w)?;
        if !c.is_zero() {
            table.push(double_entry(w, c));
        }
    }
    Ok(NumberReport {
        problem: p.clone(),
        mode: "double",
        value: None,
        note: None,
        structure_constant: Some(double_entry(target, main)),
        table: Some(table),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonkRequest {
    pub pi: Permutation,
    pub i: usize,
    pub sigma: Permutation,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonkReport {
    pub instance: MonkInstance,
    pub value: u8,
    pub cover: bool,
    pub straddle: bool,
    pub proof: Option<DcPath>,
    pub end: Option<ProofEnd>,
}

pub fn monk(req: MonkRequest) -> Result<MonkReport, Failure> {
    let inst = MonkInstance::new(req.pi, req.i, req.sigma)?;
    let value = monk_value(&inst);
    let proof = if value.cover { Some(monk_dc_proof(&inst)?) } else { None };
    Ok(MonkReport {
        value: value.value,
        cover: value.cover,
        straddle: value.straddle,
        end: proof.as_ref().map(|p| p.end),
        proof: proof.map(|p| p.path),
        instance: inst,
    })
}

pub fn witness(p: &SchubertProblem, seed: u64, field: FieldKind) -> Result<WitnessReport, Failure> {
    heavy(p)?;
    Ok(run_witness(p, seed, field)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizeReport {
    pub problem: SchubertProblem,
    pub stabilized: SchubertProblem,
}

pub fn stabilize(p: &SchubertProblem) -> Result<StabilizeReport, Failure> {
    Ok(StabilizeReport { problem: p.clone(), stabilized: p.stabilize()? })
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphRun {
    #[serde(flatten)]
    pub summary: ReportSummary,
    pub grassmannian: GrassmannianCensus,
    pub values: ValueCensus,
}

/// Builds and classifies `Γ_n`. Returns the run, the full report (for the
/// label dump) and the elapsed seconds.
pub fn graph(n: usize, threads: usize, trivial_samples: usize) -> Result<(GraphRun, ComponentReport, f64), Failure> {
    let start = Instant::now();
    let mut report = build_components_threads(n, threads)?;
    let values = classify_component_values(&mut report, usize::MAX, trivial_samples);
    let run = GraphRun { summary: report.summary(), grassmannian: grassmannian_census(&report), values };
    Ok((run, report, start.elapsed().as_secs_f64()))
}

/// Published figures for small and reference degrees.
pub struct Expected {
    pub vertices: usize,
    pub non_trivial: usize,
    pub trivial_free_components: usize,
    pub trivial_free_vertices: usize,
    pub easy: usize,
    pub singletons: usize,
}

pub fn expected(n: usize) -> Option<Expected> {
    match n {
        3 => Some(Expected {
            vertices: 35,
            non_trivial: 21,
            trivial_free_components: 1,
            trivial_free_vertices: 21,
            easy: 21,
            singletons: 0,
        }),
        6 => Some(Expected {
            vertices: 8_881_334,
            non_trivial: 2_351_475,
            trivial_free_components: 145,
            trivial_free_vertices: 411_582,
            easy: 409_023,
            singletons: 48,
        }),
        _ => None,
    }
}

/// Differences between a run and the reference figures for its degree.
pub fn compare_with_expected(run: &GraphRun) -> Vec<String> {
    let Some(e) = expected(run.summary.n) else { return Vec::new() };
    let s = &run.summary;
    let mut out = Vec::new();
    let mut check = |name: &str, got: usize, want: usize| {
        if got != want {
            out.push(format!("{name}: got {got}, expected {want}"));
        }
    };
    check("vertices", s.vertices, e.vertices);
    check("non-dc-trivial vertices", s.vertices - s.dc_trivial, e.non_trivial);
    check("dc-trivial-free components", s.trivial_free_components, e.trivial_free_components);
    check("vertices in dc-trivial-free components", s.trivial_free_vertices, e.trivial_free_vertices);
    check("easy component", s.easy_component_size, e.easy);
    check("singletons", s.singletons, e.singletons);
    out
}
