//! Machine-readable outcomes of verification runs.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VerdictStatus {
    ExactPass,
    ExactFail,
    NumericPass { tol: f64 },
    NumericFail { tol: f64 },
}

impl VerdictStatus {
    pub fn is_pass(&self) -> bool {
        matches!(self, VerdictStatus::ExactPass | VerdictStatus::NumericPass { .. })
    }
}

/// Where exactly an equality broke: the offending basis element and
/// component, with both sides rendered canonically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<Vec<usize>>,
    pub expected: String,
    pub got: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Per-point numerical data emitted by the curvature lab.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub point: Vec<f64>,
    pub nabla_r_inf_norm: f64,
    /// Residual inf-norms of the four symmetry constraints.
    pub class_residuals: [f64; 4],
    /// Inf-norm of the six-term map applied to the numerical tensor.
    pub six_term_image_inf_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Derived constants (recovered coefficients, ranks, ...) as canonical
    /// strings, keyed by name.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub derived: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointReport>,
}

impl VerdictReport {
    pub fn exact_pass(check: impl Into<String>, dim: Option<usize>) -> Self {
        VerdictReport {
            check: check.into(),
            dim,
            status: VerdictStatus::ExactPass,
            witness: None,
            derived: BTreeMap::new(),
            points: Vec::new(),
        }
    }

    /// An exact failure always carries its witness.
    pub fn exact_fail(check: impl Into<String>, dim: Option<usize>, witness: Witness) -> Self {
        VerdictReport {
            check: check.into(),
            dim,
            status: VerdictStatus::ExactFail,
            witness: Some(witness),
            derived: BTreeMap::new(),
            points: Vec::new(),
        }
    }

    pub fn with_derived(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.derived.insert(key.into(), value.into());
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status.is_pass()
    }
}
