//! Input schemas, the carrier abstraction over spaces and chains, and
//! report serialization.
//!
//! Input JSON is one of
//! `{"kind":"space","dist":[[...]],"mu":[...]}`,
//! `{"kind":"chain","p":[[...]],"mu":[...]}` (`mu` optional — inferred by
//! solving detailed balance), or
//! `{"kind":"graph","adjacency":[[...]],"walk":"simple-walk"|"metropolis-uniform"}`.
//! Index sets are sorted arrays of 0-based integers.

use serde::{Deserialize, Serialize};
use setconc::bounds::EigenBoundResult;
use setconc::profile::{BoundReport, StepCertificate};
use setconc::space::{Ambient, MetricMeasureSpace, ReversibleChain, WalkKind};
use setconc::spectral::Spectrum;

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InputSpec {
    Space {
        dist: Vec<Vec<f64>>,
        mu: Vec<f64>,
    },
    Chain {
        p: Vec<Vec<f64>>,
        #[serde(default)]
        mu: Option<Vec<f64>>,
    },
    Graph {
        adjacency: Vec<Vec<u8>>,
        walk: WalkSpec,
    },
}

#[derive(Deserialize, Clone, Copy)]
pub enum WalkSpec {
    #[serde(rename = "simple-walk")]
    SimpleWalk,
    #[serde(rename = "metropolis-uniform")]
    MetropolisUniform,
}

/// Either carrier; commands that need a spectrum require the chain side.
pub enum Carrier {
    Space(MetricMeasureSpace),
    Chain(ReversibleChain),
}

impl Carrier {
    pub fn from_spec(spec: InputSpec) -> setconc::Result<Self> {
        Ok(match spec {
            InputSpec::Space { dist, mu } => Carrier::Space(MetricMeasureSpace::new(dist, mu)?),
            InputSpec::Chain { p, mu: Some(mu) } => Carrier::Chain(ReversibleChain::new(p, mu)?),
            InputSpec::Chain { p, mu: None } => Carrier::Chain(ReversibleChain::from_kernel(p)?),
            InputSpec::Graph { adjacency, walk } => {
                let kind = match walk {
                    WalkSpec::SimpleWalk => WalkKind::SimpleWalk,
                    WalkSpec::MetropolisUniform => WalkKind::MetropolisUniform,
                };
                Carrier::Chain(ReversibleChain::from_graph(&adjacency, kind)?)
            }
        })
    }

    pub fn ambient(&self) -> &dyn Ambient {
        match self {
            Carrier::Space(s) => s,
            Carrier::Chain(c) => c,
        }
    }

    pub fn chain(&self) -> Option<&ReversibleChain> {
        match self {
            Carrier::Chain(c) => Some(c),
            Carrier::Space(_) => None,
        }
    }
}

// ---- output schemas ----

#[derive(Serialize)]
pub struct SpectrumOut {
    pub eigenvalues: Vec<f64>,
}

impl SpectrumOut {
    pub fn new(sp: &Spectrum) -> Self {
        Self { eigenvalues: sp.eigenvalues().to_vec() }
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("index,eigenvalue\n");
        for (i, ev) in self.eigenvalues.iter().enumerate() {
            out.push_str(&format!("{i},{ev}\n"));
        }
        out
    }
}

#[derive(Serialize)]
pub struct CurvePointOut {
    pub r: f64,
    pub bound: f64,
    pub exact: f64,
    pub slack: f64,
}

#[derive(Serialize)]
pub struct BoundReportOut {
    pub kind: &'static str,
    pub mode: &'static str,
    pub used_lambda: f64,
    pub validity: [f64; 2],
    pub certified: bool,
    pub curve: Vec<CurvePointOut>,
}

impl BoundReportOut {
    pub fn new(report: &BoundReport) -> Self {
        Self {
            kind: report.kind.name(),
            mode: match report.mode {
                setconc::space::EnlargeMode::Strict => "strict",
                setconc::space::EnlargeMode::Closed => "closed",
            },
            used_lambda: report.used_lambda,
            validity: [report.validity.0, report.validity.1],
            certified: report.certified,
            curve: report
                .curve
                .iter()
                .map(|p| CurvePointOut { r: p.r, bound: p.bound, exact: p.exact, slack: p.slack })
                .collect(),
        }
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("r,bound,exact,slack\n");
        for p in &self.curve {
            out.push_str(&format!("{},{},{},{}\n", p.r, p.bound, p.exact, p.slack));
        }
        out
    }
}

#[derive(Serialize)]
pub struct EigenBoundOut {
    pub kind: &'static str,
    pub value: f64,
    pub sets: Vec<Vec<usize>>,
    pub r: f64,
    pub a0: f64,
    pub degenerate: bool,
}

impl EigenBoundOut {
    pub fn new(result: &EigenBoundResult) -> Self {
        Self {
            kind: result.kind.name(),
            value: result.value,
            sets: result.sets.clone(),
            r: result.r,
            a0: result.a0,
            degenerate: result.degenerate,
        }
    }
}

#[derive(Serialize)]
pub struct StepOut {
    pub n: u32,
    pub mu_enlarged: f64,
    pub step_slack: f64,
    pub iterated_slack: f64,
}

#[derive(Serialize)]
pub struct CertificateOut {
    pub lambda: f64,
    pub n_max: u32,
    pub min_slack: f64,
    pub pass: bool,
    pub steps: Vec<StepOut>,
}

impl CertificateOut {
    pub fn new(cert: &StepCertificate) -> Self {
        Self {
            lambda: cert.lambda,
            n_max: cert.n_max,
            min_slack: cert.min_slack,
            pass: cert.pass,
            steps: cert
                .steps
                .iter()
                .map(|s| StepOut {
                    n: s.n,
                    mu_enlarged: s.mu_enlarged,
                    step_slack: s.step_slack,
                    iterated_slack: s.iterated_slack,
                })
                .collect(),
        }
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("n,mu_enlarged,step_slack,iterated_slack\n");
        for s in &self.steps {
            out.push_str(&format!("{},{},{},{}\n", s.n, s.mu_enlarged, s.step_slack, s.iterated_slack));
        }
        out
    }
}

#[derive(Serialize)]
pub struct ModelOut {
    pub level: u64,
    pub eigenvalue: f64,
    pub multiplicity: u128,
    pub cumulative: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<bool>,
}

#[derive(Serialize)]
pub struct CompareOut {
    pub verdict: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Serialize)]
pub struct FunctionOut {
    pub values: Vec<f64>,
    pub lipschitz_constant: f64,
}
