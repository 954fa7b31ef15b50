//! Scenario files: system, group, bounds and the task list.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use freefield::constructions::{build_system, Side};
use freefield::diffalg::DEFAULT_COMPONENT_CAP;
use freefield::fock::SystemSpec;
use freefield::liealg::{make_algebra, LieAlgebraSpec, LieKind};

use crate::error::{HarnessError, Result};

/// Task names accepted in the `task` field.
pub const TASK_NAMES: [&str; 11] = [
    "verify_affine",
    "commutant_check",
    "commutant_space",
    "counterexample_sec4",
    "counterexample_so4",
    "jet_compare",
    "zhu_check",
    "quantum_correct",
    "sugawara_check",
    "property_suite",
    "howe_commutation",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    /// Acceptance criteria this scenario contributes to.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub criteria: Vec<u32>,
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupConfig>,
    #[serde(default)]
    pub bounds: Bounds,
    pub tasks: Vec<Task>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// [n, m]: m copies of C^n in the βγ part.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bosonic: Option<[usize; 2]>,
    /// [n, r]: r copies of C^n in the bc part.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fermionic: Option<[usize; 2]>,
}

impl SystemConfig {
    pub fn build(&self) -> Result<SystemSpec> {
        Ok(build_system(self.bosonic.map(|[n, m]| (n, m)), self.fermionic.map(|[n, r]| (n, r)))?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Gl,
    Sl,
    So,
    Sp,
    SoSplit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideName {
    #[default]
    Left,
    Right,
}

impl From<SideName> for Side {
    fn from(s: SideName) -> Side {
        match s {
            SideName::Left => Side::Left,
            SideName::Right => Side::Right,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub kind: GroupKind,
    /// n for gl/sl/so, the half rank m for sp_2m and so_split_2m.
    pub rank: usize,
    #[serde(default)]
    pub side: SideName,
}

impl GroupConfig {
    pub fn algebra(&self) -> Result<LieAlgebraSpec> {
        let kind = match self.kind {
            GroupKind::Gl => LieKind::Gl,
            GroupKind::Sl => LieKind::Sl,
            GroupKind::So => LieKind::So,
            GroupKind::Sp => LieKind::Sp,
            GroupKind::SoSplit => LieKind::SoSplit,
        };
        Ok(make_algebra(kind, (self.rank, 0))?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    #[serde(default = "default_max_weight")]
    pub max_weight: u32,
    #[serde(default = "default_max_degree")]
    pub max_degree: u32,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Largest linear system (monomials per component) a task may build.
    #[serde(default = "default_cap")]
    pub component_cap: usize,
}

fn default_max_weight() -> u32 {
    3
}
fn default_max_degree() -> u32 {
    4
}
fn default_samples() -> usize {
    50
}
fn default_seed() -> u64 {
    1
}
fn default_cap() -> usize {
    DEFAULT_COMPONENT_CAP
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_weight: default_max_weight(),
            max_degree: default_max_degree(),
            samples: default_samples(),
            seed: default_seed(),
            component_cap: default_cap(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormName {
    Trace,
    Normalized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetSideName {
    Beta,
    Gamma,
}

/// A family of currents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyRef {
    /// θ of the scenario group, or of `algebra` if given.
    Theta {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        algebra: Option<GroupConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        side: Option<SideName>,
    },
    ChargeE,
    QuadSo,
    QuadSp,
    BcPsi,
    MixedGlrs,
}

/// A state, or a labeled list of states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateRef {
    /// Fock text form, e.g. `1/1 * g[s1,beta,1](-1)`.
    Text {
        text: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Det {
        cols: Vec<usize>,
        side: DetSideName,
    },
    /// Every current of a family.
    Currents {
        family: FamilyRef,
    },
    /// A bc / bcβγ generator family by name (psi, D, Dprime, E, ...).
    Bc {
        which: String,
    },
    ChargeE,
    Sugawara {
        family: FamilyRef,
        level: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepName {
    Std,
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockConfig {
    pub name: String,
    pub rep: RepName,
    #[serde(default)]
    pub odd: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    /// Closure of the affine OPE and the measured level.
    VerifyAffine {
        family: FamilyRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        form: Option<FormName>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_level: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
    CommutantCheck {
        against: FamilyRef,
        states: Vec<StateRef>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
    /// Commutant dimensions by weight, up to max_weight with at most
    /// max_degree modes; passes when only scalars survive.
    CommutantSpace {
        against: FamilyRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
    /// e∘₁(:D ∂D':) against :DD': and D∘₀D'.
    CounterexampleSec4 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cols: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cols_prime: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
    /// Exhaustive search for a correction of the mixed 4×4 determinant.
    CounterexampleSo4 {
        #[serde(default = "so4_weight")]
        weight: i64,
        #[serde(default = "so4_max_len")]
        max_len: usize,
        #[serde(default = "so4_top_mode")]
        top_mode: i32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
    /// Invariant dims against dims generated by weight-0 invariants, per
    /// bidegree; optionally the symbol map's equivariance on samples.
    JetCompare {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        algebra: Option<GroupConfig>,
        blocks: Vec<BlockConfig>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        equivariance: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
    ZhuCheck {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cols: Option<Vec<usize>>,
        #[serde(default = "zhu_test_degree")]
        test_degree: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
    /// dd' - det[q] with q the right gl_m currents, in S((C^n)^n).
    QuantumCorrect {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
    SugawaraCheck {
        family: FamilyRef,
        level: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
    PropertySuite {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        properties: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
    /// Every current of `left` commutes with every current of `right`.
    HoweCommutation {
        left: FamilyRef,
        right: FamilyRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<SystemConfig>,
    },
}

fn so4_weight() -> i64 {
    2
}
fn so4_max_len() -> usize {
    3
}
fn so4_top_mode() -> i32 {
    2
}
fn zhu_test_degree() -> u32 {
    3
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::VerifyAffine { .. } => "verify_affine",
            Task::CommutantCheck { .. } => "commutant_check",
            Task::CommutantSpace { .. } => "commutant_space",
            Task::CounterexampleSec4 { .. } => "counterexample_sec4",
            Task::CounterexampleSo4 { .. } => "counterexample_so4",
            Task::JetCompare { .. } => "jet_compare",
            Task::ZhuCheck { .. } => "zhu_check",
            Task::QuantumCorrect { .. } => "quantum_correct",
            Task::SugawaraCheck { .. } => "sugawara_check",
            Task::PropertySuite { .. } => "property_suite",
            Task::HoweCommutation { .. } => "howe_commutation",
        }
    }

    pub fn system_override(&self) -> Option<SystemConfig> {
        match self {
            Task::VerifyAffine { system, .. }
            | Task::CommutantCheck { system, .. }
            | Task::CommutantSpace { system, .. }
            | Task::CounterexampleSec4 { system, .. }
            | Task::CounterexampleSo4 { system, .. }
            | Task::JetCompare { system, .. }
            | Task::ZhuCheck { system, .. }
            | Task::QuantumCorrect { system, .. }
            | Task::SugawaraCheck { system, .. }
            | Task::PropertySuite { system, .. }
            | Task::HoweCommutation { system, .. } => *system,
        }
    }
}

/// Parses and validates a scenario. Unknown task names are rejected before
/// anything is deserialized further.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw: Value = serde_json::from_str(text)?;
    let tasks = raw
        .get("tasks")
        .and_then(Value::as_array)
        .ok_or_else(|| HarnessError::Config("scenario needs a `tasks` array".into()))?;
    for (i, t) in tasks.iter().enumerate() {
        let name = t
            .get("task")
            .and_then(Value::as_str)
            .ok_or_else(|| HarnessError::Config(format!("task {i} has no `task` name")))?;
        if !TASK_NAMES.contains(&name) {
            return Err(HarnessError::Config(format!("task {i}: unknown task `{name}`")));
        }
    }
    let s: Scenario = serde_json::from_value(raw).map_err(|e| HarnessError::Config(e.to_string()))?;
    s.validate()?;
    Ok(s)
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let b = &self.bounds;
        if b.max_weight == 0 || b.max_degree == 0 || b.samples == 0 || b.component_cap == 0 {
            return Err(HarnessError::Config("bounds must be positive".into()));
        }
        if self.tasks.is_empty() {
            return Err(HarnessError::Config("scenario has no tasks".into()));
        }
        for (i, t) in self.tasks.iter().enumerate() {
            let sys = t.system_override().unwrap_or(self.system);
            if sys.bosonic.is_none() && sys.fermionic.is_none() {
                return Err(HarnessError::Config(format!("task {i}: no system given")));
            }
            if let Task::CommutantCheck { states, .. } = t {
                if states.is_empty() {
                    return Err(HarnessError::Config(format!("task {i}: no states to check")));
                }
            }
        }
        Ok(())
    }
}
