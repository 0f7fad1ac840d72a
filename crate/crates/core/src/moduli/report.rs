use serde::{Deserialize, Serialize};

use super::{Marking, Surface};
use crate::lie::{RootSystem, ROOT_ORDERING_ID};
use crate::rational::{fmt_q, Surd};

/// Volumes are relative to the basic inner product; `T = t/Λ`; gluing
/// integrals use the measure in which `t/Λ*` has mass 1.
pub const MEASURE_ID: &str = "basic-inner-product;T=t/coroot-lattice;glue:t/weight-lattice=1";
/// Class volumes carry `(2 sin π⟨α,μ⟩)²`; the Witten boundary factor carries
/// `(2 sin π⟨α,μ⟩)^{-1}`, so each regular marking contributes
/// `Vol(G/T)·∏_{α>0} 2 sin π⟨α,μ⟩`.
pub const SINE_POWER_ID: &str = "class:2;witten-boundary:-1";
/// `χ_λ(exp μ)` uses the phases `e^{2πi⟨λ,μ⟩}`.
pub const PAIRING_ID: &str = "exp(2*pi*i*<lambda,mu>)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    KappaSum,
    WittenSeries,
    ToricDecomposition,
    GluingQuadrature,
    McOracle,
}

impl Method {
    pub fn id(self) -> &'static str {
        match self {
            Method::KappaSum => "kappa-sum",
            Method::WittenSeries => "witten-series",
            Method::ToricDecomposition => "toric-decomposition",
            Method::GluingQuadrature => "gluing-quadrature",
            Method::McOracle => "mc-oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionStamp {
    pub root_ordering: String,
    pub measure: String,
    pub sine_power: String,
    pub pairing: String,
}

impl Default for ConventionStamp {
    fn default() -> Self {
        ConventionStamp {
            root_ordering: ROOT_ORDERING_ID.into(),
            measure: MEASURE_ID.into(),
            sine_power: SINE_POWER_ID.into(),
            pairing: PAIRING_ID.into(),
        }
    }
}

/// Every parameter that can affect a reported number.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub casimir_cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominant_weights: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_schedule: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extrapolation_residual: Option<f64>,
    /// Nearby singular hyperplanes fitted in the ε extrapolation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imaginary_part: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_cells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub group: String,
    pub surface: Surface,
    /// Markings in fundamental-weight coordinates, as exact rationals.
    pub marking: Vec<Vec<String>>,
    pub value: f64,
    /// Exact value `a·√b` when the method is exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub method: Method,
    pub parameters: Parameters,
    pub convention: ConventionStamp,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl VolumeReport {
    pub fn new(rs: &RootSystem, surface: Surface, marking: &Marking, method: Method, value: f64) -> Self {
        VolumeReport {
            group: rs.spec.to_string(),
            surface,
            marking: marking.points.iter().map(|p| rs.to_fundamental(p).iter().map(fmt_q).collect()).collect(),
            value,
            exact: None,
            method,
            parameters: Parameters::default(),
            convention: ConventionStamp::default(),
            warnings: Vec::new(),
        }
    }

    pub fn with_exact(mut self, s: &Surd) -> Self {
        self.value = s.to_f64();
        self.exact = Some(s.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
