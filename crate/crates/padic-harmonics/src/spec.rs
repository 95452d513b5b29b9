//! The experiment file format, schema `padic-harmonics/spec-v1`.
//!
//! Exact quantities are strings holding reduced rationals (`"3"`, `"-1/4"`);
//! ball centers are coordinate lists of such strings. Loading canonicalizes
//! every rational to `num/den` and every center to its canonical
//! representative, so a loaded spec serializes back to itself.

use std::path::Path;

use serde::{Deserialize, Serialize};

use padic_harmonics_core::funcs::RandomProfile;

pub const SCHEMA: &str = "padic-harmonics/spec-v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub schema: String,
    pub context: ContextSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSpec>,
    #[serde(default)]
    pub functions: Vec<FunctionSpec>,
    #[serde(default)]
    pub weights: Vec<WeightSpec>,
    pub tasks: Vec<TaskSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub policy: PolicySpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextSpec {
    pub p: u64,
    pub n: usize,
}

/// `Ω` on the level-`level` cells of the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub level: i32,
    pub cells: Vec<KernelCell>,
}

/// One coset `c + p^{-level} Z_p^n` of the unit sphere. `digits[i]` lists the
/// base-`p` digits of coordinate `i`, least significant first, `-level` of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelCell {
    pub digits: Vec<Vec<u32>>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub name: String,
    pub cells: Vec<CellSpec>,
}

/// `value · χ_{B_γ(center)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub gamma: i32,
    pub center: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    pub gamma: i32,
    pub center: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    /// `|B|^λ`.
    Power { name: String, lambda: String },
    /// `∫_B g` with `g` the named function, `background` off its support.
    StepIntegral {
        name: String,
        density: String,
        background: String,
    },
    Tabulated {
        name: String,
        entries: Vec<CellSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fallback: Option<PowerLawSpec>,
    },
}

impl WeightSpec {
    pub fn name(&self) -> &str {
        match self {
            WeightSpec::Power { name, .. } | WeightSpec::StepIntegral { name, .. } | WeightSpec::Tabulated { name, .. } => {
                name
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerLawSpec {
    pub coef: String,
    pub lambda: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailModeSpec {
    ClosedFormPower,
    GeometricBound { ratio: f64 },
    WindowOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicySpec {
    /// Operator outputs are tabulated on `B_{root + window_margin}(0)`.
    pub window_margin: i32,
    /// Extra scales on each side of the norm window.
    pub norm_margin: i32,
    pub tail_mode: TailModeSpec,
    pub float_rel_tol: f64,
    /// Explicit terms before a geometric tail in condition checks.
    pub series_terms: u32,
    /// Relative slack of the inequality suites.
    pub slack: f64,
}

impl Default for PolicySpec {
    fn default() -> Self {
        PolicySpec {
            window_margin: 2,
            norm_margin: 1,
            tail_mode: TailModeSpec::ClosedFormPower,
            float_rel_tol: 1e-12,
            series_terms: 24,
            slack: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskSpec {
    Integrate {
        id: String,
        function: String,
        /// Whole space when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        region: Option<BallSpec>,
    },
    Apply {
        id: String,
        operator: OperatorSpec,
        function: String,
        points: Vec<Vec<String>>,
    },
    Norm {
        id: String,
        norm: NormKind,
        function: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weight: Option<String>,
        /// Exponent of the centered norms `cm` and `cbmo`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<String>,
    },
    Check {
        id: String,
        condition: ConditionSpec,
        omega: String,
        nu: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        nus: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<u32>,
        anchor: BallSpec,
    },
    Verify {
        id: String,
        suite: SuiteKind,
        /// Corpus size, or number of seeds for the inequality suites.
        count: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source: Option<NormSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<NormSpec>,
        /// For `thm31`, absent means the sweep `T_k`, `k = -4..=4`, and `T`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        operator: Option<OperatorSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        profile: Option<ProfileSpec>,
    },
}

impl TaskSpec {
    pub fn id(&self) -> &str {
        match self {
            TaskSpec::Integrate { id, .. }
            | TaskSpec::Apply { id, .. }
            | TaskSpec::Norm { id, .. }
            | TaskSpec::Check { id, .. }
            | TaskSpec::Verify { id, .. } => id,
        }
    }

    pub fn op(&self) -> &'static str {
        match self {
            TaskSpec::Integrate { .. } => "integrate",
            TaskSpec::Apply { .. } => "apply",
            TaskSpec::Norm { .. } => "norm",
            TaskSpec::Check { .. } => "check",
            TaskSpec::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    Tk { k: i32 },
    T,
    Commutator { k: i32, symbols: SymbolsSpec },
    Riesz { alpha: String },
}

/// Named symbol functions, with Lipschitz exponents or Campanato data when a
/// theorem needs them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolsSpec {
    pub functions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub campanato: Option<Vec<NormSpec>>,
}

/// `GM_{q,weight}` with a named weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub q: String,
    pub weight: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Lq,
    Gm,
    Cm,
    Gc,
    Cbmo,
    Lip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionSpec {
    #[serde(rename = "31")]
    Cond31,
    #[serde(rename = "32")]
    Cond32,
    #[serde(rename = "i")]
    CondI,
    #[serde(rename = "ii")]
    CondII,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    Thm31,
    Thm32,
    Thm33,
    /// The mean-jump inequality and its integrated form.
    Lemma21,
    /// The pointwise tail bounds and the commutator domination.
    Tails,
}

impl SuiteKind {
    pub fn label(self) -> &'static str {
        match self {
            SuiteKind::Thm31 => "thm31",
            SuiteKind::Thm32 => "thm32",
            SuiteKind::Thm33 => "thm33",
            SuiteKind::Lemma21 => "lemma21",
            SuiteKind::Tails => "tails",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub root_gamma: i32,
    pub min_depth: u32,
    pub max_depth: u32,
    pub max_cells: usize,
    pub value_bound: i64,
    pub max_denominator: i64,
}

impl From<&ProfileSpec> for RandomProfile {
    fn from(p: &ProfileSpec) -> Self {
        RandomProfile {
            root_gamma: p.root_gamma,
            min_depth: p.min_depth,
            max_depth: p.max_depth,
            max_cells: p.max_cells,
            value_bound: p.value_bound,
            max_denominator: p.max_denominator,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

impl SpecError {
    pub fn invalid(field: impl Into<String>, message: impl ToString) -> Self {
        SpecError::Invalid {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

/// Parses without validating.
pub fn parse_spec(text: &str) -> Result<ExperimentSpec, SpecError> {
    serde_json::from_str(text).map_err(|e| SpecError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Reads, validates and canonicalizes.
pub fn load_spec(path: &Path) -> Result<ExperimentSpec, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let spec = parse_spec(&text)?;
    let (canonical, _) = crate::model::build(&spec)?;
    Ok(canonical)
}

/// Pretty JSON with a trailing newline.
pub fn to_json(spec: &ExperimentSpec) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("specs always serialize");
    s.push('\n');
    s
}
