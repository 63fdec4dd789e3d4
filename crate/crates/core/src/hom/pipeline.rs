use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use super::extend::extend_with_gap;
use super::{check_hom, mgs, HomError, Mgs, PartialHom};
use crate::graph::FiniteGraph;
use crate::params::OddSequence;
use crate::stage::{build_stage, levels_below, project, StageError};

/// Maps `phi_0 ⊆ phi_1 ⊆ ..` from the truncation `L_{c0,depth}` into the
/// stages `L_{c,n}`, with domains `B_{k_n} = {level < k_n}`.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub c0: OddSequence,
    pub c: OddSequence,
    pub depth: usize,
    pub source: FiniteGraph,
    pub ks: Vec<usize>,
    /// `mgs(B_{k_n})`; the empty first domain counts as infinite.
    pub gaps: Vec<Mgs>,
    pub maps: Vec<PartialHom>,
}

impl Pipeline {
    /// The assembled map: every point of the final domain sent to its
    /// deepest image, whose projections recover all earlier images.
    pub fn assembled(&self) -> &PartialHom {
        self.maps.last().expect("a pipeline has at least one map")
    }

    pub fn domain(&self, n: usize) -> BTreeSet<crate::vertex::Vertex> {
        levels_below(&self.source, self.ks[n])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineError {
    Stage(StageError),
    /// No domain for map `step` leaves gaps above `2 * length(L_{c,step+1})`.
    GrowthInsufficient { step: usize, required: usize, best: Mgs },
    Extend { step: usize, error: HomError },
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Stage(e) => write!(f, "{e}"),
            PipelineError::GrowthInsufficient { step, required, best } => write!(
                f,
                "growth insufficient at step {step}: need a minimal gap of at least {required}, best available is {best}"
            ),
            PipelineError::Extend { step, error } => write!(f, "extension to step {step} failed: {error}"),
        }
    }
}

impl core::error::Error for PipelineError {}

impl From<StageError> for PipelineError {
    fn from(e: StageError) -> Self {
        PipelineError::Stage(e)
    }
}

/// Runs the staged extension from `L_{c0,depth}` into the stages of `c`.
///
/// `k_0 = 0` with the empty map. Each later non-final `k_n` is the least
/// level bound in `max(k_{n-1}, 1)..=depth` whose complement gaps exceed
/// `2 * length(L_{c,n+1})`, so that the next extension is possible; the final
/// domain is the whole truncation. The number of maps is
/// `min(depth, |c| - 1) + 1`.
pub fn pipeline_hom(c0: &OddSequence, c: &OddSequence, depth: usize) -> Result<Pipeline, PipelineError> {
    let source = build_stage(c0, depth)?;
    if c.is_empty() {
        return Err(StageError::StageOutOfRange { stage: 0, len: 0 }.into());
    }
    let last = depth.min(c.len() - 1);
    let mut ks = alloc::vec![0usize];
    let mut gaps = alloc::vec![Mgs::Infinite];
    let mut maps = alloc::vec![PartialHom::new()];
    for step in 1..=last {
        let prev_k = ks[step - 1];
        let k = if step == last {
            depth + 1
        } else {
            let bound = 2 * (c.stage_size(step + 1).expect("stage fits") as usize - 1);
            let mut best = Mgs::Size(0);
            let mut chosen = None;
            for k in prev_k.max(1)..=depth {
                let g = mgs(&source, &levels_below(&source, k));
                best = best.max(g);
                if g.exceeds(bound) {
                    chosen = Some(k);
                    break;
                }
            }
            chosen.ok_or(PipelineError::GrowthInsufficient { step, required: bound + 1, best })?
        };
        let b = levels_below(&source, prev_k);
        let bp = levels_below(&source, k);
        let phi = extend_with_gap(&source, &b, &bp, &maps[step - 1], c, step - 1, Some(gaps[step - 1]))
            .map_err(|error| PipelineError::Extend { step, error })?;
        ks.push(k);
        gaps.push(mgs(&source, &bp));
        maps.push(phi);
    }
    Ok(Pipeline { c0: c0.clone(), c: c.clone(), depth, source, ks, gaps, maps })
}

/// The three compatibility conditions for a pipeline's maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatReport {
    /// Domains are `B_{k_n}` with `k_n` non-decreasing.
    pub increasing: bool,
    /// Map `n` is a homomorphism into `L_{c,n}`.
    pub homs: Vec<bool>,
    /// `π ∘ phi_{n+1}` extends `phi_n`.
    pub projections: Vec<bool>,
}

impl CompatReport {
    pub fn holds(&self) -> bool {
        self.increasing && self.homs.iter().all(|&h| h) && self.projections.iter().all(|&p| p)
    }
}

pub fn check_compatibility(p: &Pipeline) -> CompatReport {
    let increasing = p.ks.windows(2).all(|w| w[0] <= w[1])
        && p.maps.iter().enumerate().all(|(n, m)| m.domain() == p.domain(n))
        && p.maps.windows(2).all(|w| w[0].domain().is_subset(&w[1].domain()));
    let homs = p
        .maps
        .iter()
        .enumerate()
        .map(|(n, m)| match build_stage(&p.c, n) {
            Ok(t) => check_hom(&p.source, &t, m).is_ok(),
            Err(_) => false,
        })
        .collect();
    let projections = p
        .maps
        .windows(2)
        .enumerate()
        .map(|(n, w)| {
            w[0].iter().all(|(x, y)| {
                w[1].get(x).and_then(|z| project(&p.c, n, n + 1, &z).ok()) == Some(*y)
            })
        })
        .collect();
    CompatReport { increasing, homs, projections }
}
