//! Spectral certificates: Hoffman-type bounds, the trivial domination bound
//! and Kahale's small-set expansion bounds.
//!
//! The Hoffman bounds use the raw smallest eigenvalue `lambda_n`. For a
//! bipartite graph that is `-d`, which yields the (sound) trivial bounds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{nontrivial_extremes, RegularGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    MaxTCut,
    Chromatic,
    Independence,
    ModifiedIndependence,
    Domination,
    VertexExpansion,
    EdgeExpansion,
}

impl std::str::FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "max_t_cut" | "max-cut" | "cut" => Self::MaxTCut,
            "chromatic" => Self::Chromatic,
            "independence" => Self::Independence,
            "modified_independence" => Self::ModifiedIndependence,
            "domination" => Self::Domination,
            "vertex_expansion" => Self::VertexExpansion,
            "edge_expansion" => Self::EdgeExpansion,
            other => return Err(Error::InvalidParameter(format!("unknown quantity {other}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateInputs {
    pub d: usize,
    /// The spectral quantity fed to the formula (`lambda_n`, or `lambda~` for Kahale).
    pub spectral: f64,
    /// Smallest nontrivial eigenvalue after removing `-d`, for bipartite input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_n_deflated: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateResult {
    pub quantity: Quantity,
    pub bound: f64,
    pub direction: Direction,
    pub inputs: CertificateInputs,
    /// Multiplicative correction that the bound carries but does not apply.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correction: Option<String>,
}

pub fn hoffman_max_t_cut_value(d: f64, lambda_n: f64, t: usize) -> f64 {
    let t = t as f64;
    (t - 1.0) / t * (1.0 + lambda_n.abs() / d)
}

pub fn hoffman_chromatic_value(d: f64, lambda_n: f64) -> f64 {
    // guard against d/|lambda_n| landing a hair above an integer
    1.0 + (d / lambda_n.abs() - 1e-9).ceil()
}

pub fn hoffman_independence_value(d: f64, lambda_n: f64) -> f64 {
    lambda_n.abs() / (d + lambda_n.abs())
}

pub fn kahale_vertex_value(d: f64, lambda_tilde: f64) -> f64 {
    let inner = (1.0 - 4.0 * (d - 1.0) / (lambda_tilde * lambda_tilde)).max(0.0);
    d / 2.0 * (1.0 - inner.sqrt())
}

pub fn kahale_edge_value(d: f64, lambda_tilde: f64) -> f64 {
    let inner = (lambda_tilde * lambda_tilde / 4.0 - (d - 1.0)).max(0.0);
    d - (1.0 + lambda_tilde / 2.0 + inner.sqrt())
}

struct Spectral {
    d: usize,
    lambda_2: f64,
    lambda_n: f64,
    deflated: Option<f64>,
}

fn spectral_data<G: RegularGraph + ?Sized>(g: &G) -> Result<Spectral> {
    let d = g.common_degree().ok_or(Error::NotRegular)?;
    let ex = nontrivial_extremes(g, false)?;
    let deflated = if g.connected() && g.bipartition_signs().is_some() {
        Some(nontrivial_extremes(g, true)?.lambda_min)
    } else {
        None
    };
    Ok(Spectral { d, lambda_2: ex.lambda_2, lambda_n: ex.lambda_n, deflated })
}

fn inputs(s: &Spectral, spectral: f64) -> CertificateInputs {
    CertificateInputs { d: s.d, spectral, lambda_n_deflated: s.deflated, t: None, epsilon: None }
}

pub fn hoffman_max_t_cut<G: RegularGraph + ?Sized>(g: &G, t: usize) -> Result<CertificateResult> {
    if t < 2 {
        return Err(Error::InvalidParameter(format!("t must be at least 2, got {t}")));
    }
    let s = spectral_data(g)?;
    Ok(CertificateResult {
        quantity: Quantity::MaxTCut,
        bound: hoffman_max_t_cut_value(s.d as f64, s.lambda_n, t),
        direction: Direction::Upper,
        inputs: CertificateInputs { t: Some(t), ..inputs(&s, s.lambda_n) },
        correction: None,
    })
}

pub fn hoffman_chromatic<G: RegularGraph + ?Sized>(g: &G) -> Result<CertificateResult> {
    let s = spectral_data(g)?;
    Ok(CertificateResult {
        quantity: Quantity::Chromatic,
        bound: hoffman_chromatic_value(s.d as f64, s.lambda_n),
        direction: Direction::Lower,
        inputs: inputs(&s, s.lambda_n),
        correction: None,
    })
}

pub fn hoffman_independence<G: RegularGraph + ?Sized>(g: &G) -> Result<CertificateResult> {
    let s = spectral_data(g)?;
    Ok(CertificateResult {
        quantity: Quantity::Independence,
        bound: hoffman_independence_value(s.d as f64, s.lambda_n),
        direction: Direction::Upper,
        inputs: inputs(&s, s.lambda_n),
        correction: None,
    })
}

/// `dom(G) >= 1/(d+1)`.
pub fn trivial_domination(d: usize) -> Result<CertificateResult> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be positive".into()));
    }
    Ok(CertificateResult {
        quantity: Quantity::Domination,
        bound: 1.0 / (d as f64 + 1.0),
        direction: Direction::Lower,
        inputs: CertificateInputs { d, spectral: f64::NAN, lambda_n_deflated: None, t: None, epsilon: None },
        correction: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionMode {
    Vertex,
    Edge,
}

/// Leading-order Kahale bound with `lambda~ = max(lambda_2, 2 sqrt(d-1))`.
/// The factor `1 - C log d / log(1/eps)` has no published constant, so it is
/// returned as text together with the value of `log d / log(1/eps)`.
pub fn kahale_bound<G: RegularGraph + ?Sized>(g: &G, epsilon: f64, mode: ExpansionMode) -> Result<CertificateResult> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside (0,1)")));
    }
    let s = spectral_data(g)?;
    let d = s.d as f64;
    Ok(kahale_from_lambda(s.d, s.lambda_2.max(2.0 * (d - 1.0).sqrt()), epsilon, mode))
}

pub fn kahale_from_lambda(d: usize, lambda_tilde: f64, epsilon: f64, mode: ExpansionMode) -> CertificateResult {
    let df = d as f64;
    let (quantity, bound) = match mode {
        ExpansionMode::Vertex => (Quantity::VertexExpansion, kahale_vertex_value(df, lambda_tilde)),
        ExpansionMode::Edge => (Quantity::EdgeExpansion, kahale_edge_value(df, lambda_tilde)),
    };
    let ratio = df.ln() / (1.0 / epsilon).ln();
    CertificateResult {
        quantity,
        bound,
        direction: Direction::Lower,
        inputs: CertificateInputs {
            d,
            spectral: lambda_tilde,
            lambda_n_deflated: None,
            t: None,
            epsilon: Some(epsilon),
        },
        correction: Some(format!("times (1 - C * {ratio:.6}), C unspecified")),
    }
}
