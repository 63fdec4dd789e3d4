//! The growth property (*) on odd-pairs, `P_t` truncations, and the
//! directed-distance interval and separation checks built on them.
//!
//! Tails of two points that last differ at coordinate `i` fall into different
//! copies of stage `i` inside stage `i + 1`, so every interval here is indexed
//! by that separation stage `s = i + 1`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::coloring::{non_onto_two_color, ColorError};
use crate::graph::FiniteGraph;
use crate::hom::{check_hom, HomViolation, PartialHom};
use crate::metrics::{didistance_set, MetricError};
use crate::params::{OddPair, OddSequence};
use crate::stage::{oriented_stage_path, StageError};
use crate::vertex::{Tail, Vertex, MAX_TAIL_LEN};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AntibasisError {
    ZeroStages,
    FTooShort { needed: usize, found: usize },
    /// The generated length at `stage` does not fit.
    Overflow { stage: usize },
    DepthOutOfRange { depth: usize, max: usize },
    BadBit { index: usize },
    /// The pair violates (*) at `index`.
    NotStar { index: usize },
    SameIndex,
    Stage(StageError),
    Metric(MetricError),
    Color(ColorError),
    NotHom(HomViolation),
}

impl fmt::Display for AntibasisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AntibasisError::ZeroStages => f.write_str("at least one stage is required"),
            AntibasisError::FTooShort { needed, found } => {
                write!(f, "growth sequence has {found} entries, need {needed}")
            }
            AntibasisError::Overflow { stage } => write!(f, "length at stage {stage} is too large"),
            AntibasisError::DepthOutOfRange { depth, max } => {
                write!(f, "depth {depth} exceeds the maximum {max}")
            }
            AntibasisError::BadBit { index } => write!(f, "entry {index} of the index is not a bit"),
            AntibasisError::NotStar { index } => write!(f, "pair violates (*) at stage {index}"),
            AntibasisError::SameIndex => f.write_str("the two indices agree on the truncation"),
            AntibasisError::Stage(e) => write!(f, "{e}"),
            AntibasisError::Metric(e) => write!(f, "{e}"),
            AntibasisError::Color(e) => write!(f, "{e}"),
            AntibasisError::NotHom(e) => write!(f, "map is not a homomorphism: {e}"),
        }
    }
}

impl core::error::Error for AntibasisError {}

impl From<StageError> for AntibasisError {
    fn from(e: StageError) -> Self {
        AntibasisError::Stage(e)
    }
}

impl From<MetricError> for AntibasisError {
    fn from(e: MetricError) -> Self {
        AntibasisError::Metric(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarViolation {
    pub index: usize,
    pub lhs: i128,
    pub rhs: i128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarReport {
    pub holds: bool,
    pub first_violation: Option<StarViolation>,
}

fn first_failure(sigmas: &[i64], rhs: impl Fn(usize) -> i128) -> StarReport {
    let first_violation = (0..sigmas.len()).find_map(|i| {
        let lhs = i128::from(sigmas[i]);
        let r = rhs(i);
        (lhs <= r).then_some(StarViolation { index: i, lhs, rhs: r })
    });
    StarReport { holds: first_violation.is_none(), first_violation }
}

fn pow2(e: usize) -> i128 {
    if e >= 126 { i128::MAX } else { 1i128 << e }
}

/// `8 * Σ_{j<i} 2^{i-j} |Σ(d(j))|`.
pub fn star_bound(sigmas: &[i64], i: usize) -> i128 {
    let sum = (0..i).fold(0i128, |acc, j| {
        acc.saturating_add(pow2(i - j).saturating_mul(i128::from(sigmas[j].unsigned_abs())))
    });
    sum.saturating_mul(8)
}

/// `f(i) * Σ_{j<i} |Σ(d(j))|`.
pub fn growth_bound(sigmas: &[i64], f: &[u64], i: usize) -> i128 {
    let sum: i128 = sigmas[..i].iter().map(|s| i128::from(s.unsigned_abs())).sum();
    i128::from(f[i]).saturating_mul(sum)
}

/// Property (*): `Σ(d(i)) > 8 * Σ_{j<i} 2^{i-j} |Σ(d(j))|` for every stage.
pub fn check_star(b: &OddPair) -> StarReport {
    let sigmas = b.sigma_profile();
    first_failure(&sigmas, |i| star_bound(&sigmas, i))
}

/// `Σ(d(i)) > f(i) * Σ_{j<i} |Σ(d(j))|` for every stage.
pub fn check_growth(b: &OddPair, f: &[u64]) -> Result<StarReport, AntibasisError> {
    if f.len() < b.len() {
        return Err(AntibasisError::FTooShort { needed: b.len(), found: f.len() });
    }
    let sigmas = b.sigma_profile();
    Ok(first_failure(&sigmas, |i| growth_bound(&sigmas, f, i)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenStrategy {
    /// All directions `+1`, least odd lengths satisfying (*).
    MinimalAllPlus,
    /// All directions `+1`, least odd lengths satisfying the `f`-form condition.
    FForm(Vec<u64>),
}

/// Largest length [`gen_star`] will produce.
pub const MAX_GENERATED_LENGTH: u64 = 1 << 32;

pub fn gen_star(stages: usize, strategy: &GenStrategy) -> Result<OddPair, AntibasisError> {
    if stages == 0 {
        return Err(AntibasisError::ZeroStages);
    }
    if let GenStrategy::FForm(f) = strategy {
        if f.len() < stages {
            return Err(AntibasisError::FTooShort { needed: stages, found: f.len() });
        }
    }
    let mut sigmas: Vec<i64> = Vec::with_capacity(stages);
    let mut c = Vec::with_capacity(stages);
    for i in 0..stages {
        let rhs = match strategy {
            GenStrategy::MinimalAllPlus => star_bound(&sigmas, i),
            GenStrategy::FForm(f) => growth_bound(&sigmas, f, i),
        };
        // Need c + 2 > rhs with c odd and at least 1.
        let mut ci = (rhs - 1).max(1);
        if ci % 2 == 0 {
            ci += 1;
        }
        if ci > i128::from(MAX_GENERATED_LENGTH) {
            return Err(AntibasisError::Overflow { stage: i });
        }
        c.push(ci as u64);
        sigmas.push(ci as i64 + 2);
    }
    let c = OddSequence::new(c).expect("generated lengths are odd");
    Ok(OddPair::all_plus(c))
}

/// The stage-`depth` points `(0)⌢r` with `r(i) = 0` wherever `t(i) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtTruncation {
    pub t: Vec<u8>,
    pub depth: usize,
    pub points: Vec<Vertex>,
}

fn check_depth(b: &OddPair, t: &[u8], depth: usize) -> Result<(), AntibasisError> {
    let max = (b.len().saturating_sub(1)).min(t.len()).min(MAX_TAIL_LEN);
    if b.is_empty() || depth > max {
        return Err(AntibasisError::DepthOutOfRange { depth, max });
    }
    if let Some(index) = t.iter().position(|&x| x > 1) {
        return Err(AntibasisError::BadBit { index });
    }
    Ok(())
}

pub fn pt_truncation(t: &[u8], b: &OddPair, depth: usize) -> Result<PtTruncation, AntibasisError> {
    check_depth(b, t, depth)?;
    let free: Vec<usize> = (0..depth).filter(|&i| t[i] == 1).collect();
    let mut points: Vec<Vertex> = (0..1u64 << free.len())
        .map(|m| {
            let mask = free.iter().enumerate().fold(0u64, |acc, (j, &i)| acc | (((m >> j) & 1) << i));
            Vertex::new(0, 0, Tail::from_mask(depth, mask))
        })
        .collect();
    points.sort_unstable();
    Ok(PtTruncation { t: t.to_vec(), depth, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalMode {
    /// `|k - Σ(d(s))| <= Σ_{j<s} 2^{s-j} |Σ(d(j))|`.
    Raw,
    /// Raw, plus `|k| ∈ [Σ(d(s))/2, 2 Σ(d(s))]`.
    Tight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairEvidence {
    /// The point with bit `i_star` equal to 0.
    pub x: Vertex,
    pub y: Vertex,
    pub i_star: usize,
    /// Separation stage `i_star + 1`.
    pub stage: usize,
    pub didist: i64,
    pub sigma: i64,
    pub raw_bound: i128,
    pub raw_ok: bool,
    pub tight_ok: Option<bool>,
    /// `t(i_star) = 1`.
    pub index_ok: bool,
}

impl PairEvidence {
    pub fn ok(&self) -> bool {
        self.raw_ok && self.index_ok && self.tight_ok != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalReport {
    pub mode: IntervalMode,
    pub pairs: Vec<PairEvidence>,
}

impl IntervalReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(PairEvidence::ok)
    }

    pub fn vacuous(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn exceptions(&self) -> usize {
        self.pairs.iter().filter(|p| !p.ok()).count()
    }
}

/// Signed potential along the oriented stage path, keyed by vertex.
struct Potentials {
    path: crate::stage::StagePath,
    prefix: Vec<i64>,
}

impl Potentials {
    fn new(b: &OddPair, depth: usize) -> Result<Potentials, AntibasisError> {
        let path = oriented_stage_path(b, depth)?;
        let mut prefix = Vec::with_capacity(path.len());
        prefix.push(0i64);
        for &s in path.signs() {
            prefix.push(prefix[prefix.len() - 1] + i64::from(s));
        }
        Ok(Potentials { path, prefix })
    }

    fn didist(&self, x: &Vertex, y: &Vertex) -> i64 {
        let px = self.path.position(x).expect("point of the stage");
        let py = self.path.position(y).expect("point of the stage");
        self.prefix[py] - self.prefix[px]
    }
}

/// `Σ_{j<s} 2^{s-j} |Σ(d(j))|`.
pub fn raw_bound(sigmas: &[i64], s: usize) -> i128 {
    star_bound(sigmas, s) / 8
}

/// Checks every pair of the `P_t` truncation against the interval around the
/// Σ of its separation stage.
pub fn verify_interval(b: &OddPair, t: &[u8], depth: usize, mode: IntervalMode) -> Result<IntervalReport, AntibasisError> {
    if mode == IntervalMode::Tight {
        if let Some(v) = check_star(b).first_violation {
            return Err(AntibasisError::NotStar { index: v.index });
        }
    }
    let pts = pt_truncation(t, b, depth)?;
    let pot = Potentials::new(b, depth)?;
    let sigmas = b.sigma_profile();
    let mut pairs = Vec::new();
    for (i, p) in pts.points.iter().enumerate() {
        for q in &pts.points[i + 1..] {
            let diff = p.tail.mask() ^ q.tail.mask();
            let i_star = 63 - diff.leading_zeros() as usize;
            let (x, y) = if p.tail.get(i_star) == 0 { (*p, *q) } else { (*q, *p) };
            let s = i_star + 1;
            let k = pot.didist(&x, &y);
            let sigma = sigmas[s];
            let bound = raw_bound(&sigmas, s);
            let raw_ok = (i128::from(k) - i128::from(sigma)).abs() <= bound;
            let tight_ok = (mode == IntervalMode::Tight).then(|| {
                let (k, sigma) = (i128::from(k).abs(), i128::from(sigma));
                2 * k >= sigma && k <= 2 * sigma
            });
            pairs.push(PairEvidence {
                x,
                y,
                i_star,
                stage: s,
                didist: k,
                sigma,
                raw_bound: bound,
                raw_ok,
                tight_ok,
                index_ok: t[i_star] == 1,
            });
        }
    }
    Ok(IntervalReport { mode, pairs })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationReport {
    /// One past the largest coordinate where both indices are 1 (0 if none).
    pub i_star_0: usize,
    /// Stage whose Σ sets the threshold; `None` when it lies beyond the pair.
    pub threshold_stage: Option<usize>,
    /// Didistances count once `2k >= threshold_sigma`.
    pub threshold_sigma: Option<i64>,
    pub left: Vec<i64>,
    pub right: Vec<i64>,
    /// Pairs `(k, k')` with `k / k' ∈ [1/4, 4]`.
    pub violations: Vec<(i64, i64)>,
}

impl SeparationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn vacuous(&self) -> bool {
        self.left.is_empty() || self.right.is_empty()
    }
}

/// Checks that large didistances realized inside `P_t` and inside `P_{t2}`
/// differ by a factor above 4.
pub fn verify_separation(b: &OddPair, t: &[u8], t2: &[u8], depth: usize) -> Result<SeparationReport, AntibasisError> {
    if let Some(v) = check_star(b).first_violation {
        return Err(AntibasisError::NotStar { index: v.index });
    }
    let p1 = pt_truncation(t, b, depth)?;
    let p2 = pt_truncation(t2, b, depth)?;
    if t[..depth] == t2[..depth] {
        return Err(AntibasisError::SameIndex);
    }
    let i_star_0 = (0..depth).rev().find(|&i| t[i] == 1 && t2[i] == 1).map_or(0, |i| i + 1);
    let threshold_stage = (i_star_0 + 1 < b.len()).then_some(i_star_0 + 1);
    let threshold_sigma = threshold_stage.map(|s| b.d()[s].sigma());
    let mut report = SeparationReport {
        i_star_0,
        threshold_stage,
        threshold_sigma,
        left: Vec::new(),
        right: Vec::new(),
        violations: Vec::new(),
    };
    let Some(sigma) = threshold_sigma else { return Ok(report) };
    let pot = Potentials::new(b, depth)?;
    let large = |pts: &[Vertex]| -> Vec<i64> {
        let mut set = BTreeSet::new();
        for x in pts {
            for y in pts {
                let k = pot.didist(x, y);
                if k > 0 && 2 * k >= sigma {
                    set.insert(k);
                }
            }
        }
        set.into_iter().collect()
    };
    report.left = large(&p1.points);
    report.right = large(&p2.points);
    for &k in &report.left {
        for &k2 in &report.right {
            if !(4 * k < k2 || 4 * k2 < k) {
                report.violations.push((k, k2));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackReport {
    /// `phi⁻¹(C)` minus the non-onto set.
    pub b: BTreeSet<Vertex>,
    /// Source vertices in components not mapped onto their target component.
    pub m: BTreeSet<Vertex>,
    /// `C` meets the image of every source component.
    pub complete: bool,
    /// `D(B) ⊆ D(C)`.
    pub containment: bool,
    /// `D(phi⁻¹(C)) ⊆ D(C)`.
    pub preimage_containment: bool,
    pub source_set: BTreeSet<i64>,
    pub target_set: BTreeSet<i64>,
}

impl PullbackReport {
    /// `B` is empty, so the containment says nothing.
    pub fn vacuous(&self) -> bool {
        self.b.is_empty()
    }
}

/// Pulls `C` back along a total homomorphism of oriented path forests and
/// compares the didistance sets.
pub fn distance_set_pullback(
    source: &FiniteGraph,
    target: &FiniteGraph,
    phi: &PartialHom,
    c: &BTreeSet<Vertex>,
) -> Result<PullbackReport, AntibasisError> {
    check_hom(source, target, phi).map_err(AntibasisError::NotHom)?;
    if let Some(v) = source.vertices().iter().find(|v| phi.get(v).is_none()) {
        return Err(AntibasisError::NotHom(HomViolation::Unmapped(*v)));
    }
    if let Some(v) = c.iter().find(|v| !target.contains(v)) {
        return Err(AntibasisError::Metric(MetricError::UnknownVertex(*v)));
    }
    let non_onto = non_onto_two_color(source, target, phi).map_err(AntibasisError::Color)?;
    let complete = source
        .component_members()
        .iter()
        .all(|m| m.iter().any(|&i| c.contains(&phi.get(&source.vertex(i)).unwrap())));
    let pre = phi.preimage(c);
    let b: BTreeSet<Vertex> = pre.difference(&non_onto.m).copied().collect();
    let target_set = didistance_set(target, c)?;
    let source_set = didistance_set(source, &b)?;
    let pre_set = didistance_set(source, &pre)?;
    Ok(PullbackReport {
        containment: source_set.is_subset(&target_set),
        preimage_containment: pre_set.is_subset(&target_set),
        b,
        m: non_onto.m,
        complete,
        source_set,
        target_set,
    })
}
