//! Regime classification of `p(t)` from the structure of the chain.

use std::fmt;

use serde::Serialize;

use crate::asymptotics::{compute_nu, RateParameters};
use crate::chain::ChainSpec;
use crate::enumerate::{words_with_nonrepeating_states, DEFAULT_WORD_SET_CAP};
use crate::error::Result;
use crate::graph::{
    paths_touch_at_most_one_cycle, simple_cycles, vertex_on_two_cycles, ComponentTag, Cycle,
    GraphAnalysis, DEFAULT_CYCLE_CAP,
};
use crate::spectral::{critical_components, reachable_block, solve_beta_with, SpectralConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub spectral: SpectralConfig,
    pub cycle_cap: usize,
    pub word_set_cap: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            spectral: SpectralConfig::default(),
            cycle_cap: DEFAULT_CYCLE_CAP,
            word_set_cap: DEFAULT_WORD_SET_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    /// Finitely many words.
    Finitary,
    /// `p(t) = Θ(t^{−1/β})` when `exact_order`, otherwise only the exponent is known.
    Power { beta: f64, exact_order: bool },
    /// Faster than any power, slower than any exponential.
    Intermediate { alpha: f64 },
    /// `p(t) = Θ(e^{−νt})`.
    Exponential { nu: f64, alpha: f64 },
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Finitary => "finitary",
            Regime::Power { .. } => "power",
            Regime::Intermediate { .. } => "intermediate",
            Regime::Exponential { .. } => "exponential",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentSummary {
    pub states: Vec<usize>,
    pub tag: ComponentTag,
}

/// The structural facts behind a verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    /// Components of the reachable transient graph, in reverse-topological order.
    pub components: Vec<ComponentSummary>,
    pub acyclic: bool,
    /// A state lying on two different simple cycles.
    pub two_cycle_vertex: Option<usize>,
    /// Whether no path meets two cycles; only decided when no state lies on two cycles.
    pub paths_touch_at_most_one_cycle: Option<bool>,
    /// Components with `r(P_H(β)) = 1` in the power regime.
    pub critical_components: Vec<Vec<usize>>,
    pub heaviest_cycle: Option<Cycle>,
    pub cycle_count: Option<usize>,
    /// Transient states never visited from the initial support.
    pub ignored_states: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    #[serde(flatten)]
    pub regime: Regime,
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rates: Option<RateParameters>,
    pub warnings: Vec<String>,
}

impl fmt::Display for RegimeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.regime {
            Regime::Finitary => writeln!(f, "regime: finitary")?,
            Regime::Power { beta, exact_order } => {
                writeln!(f, "regime: power")?;
                writeln!(f, "beta: {beta:.12}")?;
                writeln!(f, "exponent 1/beta: {:.12}", 1.0 / beta)?;
                writeln!(f, "exact_order: {exact_order}")?;
            }
            Regime::Intermediate { alpha } => {
                writeln!(f, "regime: intermediate")?;
                writeln!(f, "alpha: {alpha:.12}")?;
            }
            Regime::Exponential { nu, alpha } => {
                writeln!(f, "regime: exponential")?;
                writeln!(f, "nu: {nu:.12}")?;
                writeln!(f, "alpha: {alpha:.12}")?;
            }
        }
        let e = &self.evidence;
        let comps: Vec<String> = e
            .components
            .iter()
            .map(|c| {
                format!(
                    "{:?}:{}",
                    c.states,
                    serde_json::to_value(c.tag).unwrap().as_str().unwrap_or("")
                )
            })
            .collect();
        writeln!(f, "components: {}", comps.join(" "))?;
        if let Some(v) = e.two_cycle_vertex {
            writeln!(f, "two-cycle vertex: {v}")?;
        }
        if let Some(b) = e.paths_touch_at_most_one_cycle {
            writeln!(f, "paths touch at most one cycle: {b}")?;
        }
        if !e.critical_components.is_empty() {
            writeln!(f, "critical components: {:?}", e.critical_components)?;
        }
        if let Some(c) = &e.heaviest_cycle {
            writeln!(f, "heaviest cycle: {:?} weight {:.12}", c.states, c.weight)?;
        }
        if !e.ignored_states.is_empty() {
            writeln!(f, "ignored states: {:?}", e.ignored_states)?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Decide the regime of a valid chain.
///
/// Acyclic → finitary; a state on two cycles → power; otherwise exponential
/// when no path meets two cycles, intermediate when one does.
pub fn classify(spec: &ChainSpec, cfg: &AnalysisConfig) -> Result<RegimeReport> {
    spec.ensure_valid()?;
    let analysis = GraphAnalysis::new(spec);
    let g = &analysis.transient;
    let cond = &analysis.condensation;
    let mut warnings = Vec::new();
    if !analysis.ignored.is_empty() {
        warnings.push(format!(
            "states {:?} are unreachable and ignored",
            analysis.ignored
        ));
    }
    let mut evidence = Evidence {
        components: (0..cond.len())
            .map(|c| ComponentSummary {
                states: cond.members[c].iter().map(|&v| g.state(v)).collect(),
                tag: cond.tags[c],
            })
            .collect(),
        acyclic: !cond.tags.iter().any(|t| t.has_cycle()),
        two_cycle_vertex: None,
        paths_touch_at_most_one_cycle: None,
        critical_components: Vec::new(),
        heaviest_cycle: None,
        cycle_count: None,
        ignored_states: analysis.ignored.clone(),
    };
    if evidence.acyclic {
        evidence.cycle_count = Some(0);
        return Ok(RegimeReport {
            regime: Regime::Finitary,
            evidence,
            rates: None,
            warnings,
        });
    }

    evidence.two_cycle_vertex = vertex_on_two_cycles(g, cond);
    let catalog = simple_cycles(g, cfg.cycle_cap);
    match &catalog {
        Ok(c) => {
            evidence.cycle_count = Some(c.len());
            evidence.heaviest_cycle = c.heaviest().cloned();
        }
        Err(e) => warnings.push(format!("cycle catalog unavailable: {e}")),
    }

    if evidence.two_cycle_vertex.is_some() {
        let (p, states) = reachable_block(spec);
        let beta = solve_beta_with(&p, &cfg.spectral)?;
        let set = critical_components(&p, beta, &cfg.spectral)?;
        evidence.critical_components = set
            .critical
            .iter()
            .map(|&c| {
                set.spectrum.condensation.members[c]
                    .iter()
                    .map(|&v| states[v])
                    .collect()
            })
            .collect();
        let exact_order = !set.path_meets_two();
        return Ok(RegimeReport {
            regime: Regime::Power { beta, exact_order },
            evidence,
            rates: None,
            warnings,
        });
    }

    let catalog = catalog?;
    let alpha = catalog
        .heaviest()
        .map(|c| c.weight)
        .expect("cyclic graph has a cycle");
    let single = paths_touch_at_most_one_cycle(cond);
    evidence.paths_touch_at_most_one_cycle = Some(single);
    if !single {
        return Ok(RegimeReport {
            regime: Regime::Intermediate { alpha },
            evidence,
            rates: None,
            warnings,
        });
    }
    let words = words_with_nonrepeating_states(spec, cfg.word_set_cap)?;
    let rates = compute_nu(spec, &catalog, &words)?;
    Ok(RegimeReport {
        regime: Regime::Exponential {
            nu: rates.nu,
            alpha,
        },
        evidence,
        rates: Some(rates),
        warnings,
    })
}
