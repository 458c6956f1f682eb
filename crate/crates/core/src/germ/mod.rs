//! Singularity invariants of plane-curve germs by iterated point blow-ups.

mod catalog;
pub(crate) mod chart;
mod oracle;
mod partial;
mod sqfree;
mod tree;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::arith::{parse_poly, ArithError, BiPoly, ExtField};

pub use catalog::NamedKind;
pub use oracle::ORACLE_DEGREE_CAP;
pub use partial::PartialResolution;
pub use tree::{GermResolution, PointKind, ResolutionNode, TreeSpec};

pub const DEFAULT_MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GermError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("the germ does not pass through the origin")]
    NotAtOrigin,
    #[error("the germ is not flagged as reduced")]
    NonReducedGerm,
    #[error("the equation has a repeated factor, so the singularity is not isolated")]
    NonIsolatedSingularity,
    #[error("resolution did not finish within {cap} blow-up levels")]
    ResolutionDepthExceeded { cap: usize },
    #[error("Jacobian quotient did not stabilize below truncation degree {cap}")]
    TruncationLimitExceeded { cap: u32 },
    #[error("invalid multiplicity tree: {0}")]
    InvalidTree(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResolutionConfig {
    pub max_depth: usize,
}

impl Default for ResolutionConfig {
    fn default() -> Self {
        ResolutionConfig { max_depth: DEFAULT_MAX_DEPTH }
    }
}

/// A curve germ at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    equation: BiPoly,
    reduced: bool,
}

impl Germ {
    /// Wraps `equation` as is; `reduced` asserts it has no repeated factor.
    pub fn new(equation: BiPoly, reduced: bool) -> Result<Self, GermError> {
        match equation.order_at_origin() {
            None => Err(ArithError::ZeroPolynomial.into()),
            Some(0) => Err(GermError::NotAtOrigin),
            Some(_) => Ok(Germ { equation, reduced }),
        }
    }

    /// Replaces `equation` by its squarefree part. The flag reports whether
    /// anything was removed.
    pub fn reduce(equation: BiPoly) -> Result<(Self, bool), GermError> {
        let sq = squarefree_reduce(&equation)?;
        let changed = sq != equation;
        Ok((Germ::new(sq, true)?, changed))
    }

    pub fn parse(text: &str) -> Result<(Self, bool), GermError> {
        Germ::reduce(parse_poly(text)?)
    }

    pub fn equation(&self) -> &BiPoly {
        &self.equation
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn field(&self) -> Option<Arc<ExtField>> {
        self.equation.field()
    }

    fn checked(&self) -> Result<&BiPoly, GermError> {
        if !sqfree::is_squarefree(&self.equation) {
            return Err(GermError::NonIsolatedSingularity);
        }
        Ok(&self.equation)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalIntersection {
    pub first: String,
    pub second: String,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityInvariants {
    pub m: u32,
    pub mu: u64,
    pub delta: u64,
    pub branches: u64,
    pub m_sequence: Vec<u32>,
    pub blowup_count: usize,
    pub final_nodes: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub local_intersections: Vec<LocalIntersection>,
}

impl SingularityInvariants {
    /// Builds the record from a strict-transform tree and a separately known
    /// partial resolution.
    pub fn from_parts(tree: &GermResolution, partial: PartialResolution) -> Self {
        SingularityInvariants {
            m: tree.root.multiplicity,
            mu: tree.milnor(),
            delta: tree.delta(),
            branches: tree.branches(),
            blowup_count: partial.m_sequence.len(),
            m_sequence: partial.m_sequence,
            final_nodes: partial.final_nodes,
            local_intersections: Vec::new(),
        }
    }

    /// `Σ (mᵢ − 1)(mᵢ − 2)` over the partial resolution.
    pub fn correction(&self) -> u64 {
        self.m_sequence
            .iter()
            .map(|&m| (m as u64 - 1) * (m as u64 - 2))
            .sum()
    }

    pub fn is_node(&self) -> bool {
        self.mu == 1
    }
}

/// Everything the engine derives for one germ.
#[derive(Clone, Debug, Serialize)]
pub struct GermAnalysis {
    pub equation: String,
    pub reduced_from_input: bool,
    pub invariants: SingularityInvariants,
    pub mu_oracle: u64,
    pub tree: GermResolution,
}

/// The squarefree part of `f`, or `f` itself when already squarefree.
pub fn squarefree_reduce(f: &BiPoly) -> Result<BiPoly, GermError> {
    if f.is_zero() {
        return Err(ArithError::ZeroPolynomial.into());
    }
    let rep = sqfree::repeated_part(f);
    if rep.total_degree() == Some(0) {
        return Ok(f.clone());
    }
    Ok(f.div_exact(&rep).expect("the repeated part divides f"))
}

pub fn resolution_tree(g: &Germ, cfg: &ResolutionConfig) -> Result<GermResolution, GermError> {
    let f = g.checked()?;
    let root = tree::expand(f, g.field(), 1, "origin".into(), 0, cfg)?;
    Ok(GermResolution { root })
}

pub fn milnor_recursive(g: &Germ, cfg: &ResolutionConfig) -> Result<u64, GermError> {
    Ok(resolution_tree(g, cfg)?.milnor())
}

pub fn milnor_jacobian_oracle(g: &Germ) -> Result<u64, GermError> {
    oracle::jacobian_dimension(g.checked()?)
}

/// `(δ, r)`; asserts Milnor's relation `μ = 2δ − r + 1`.
pub fn delta_and_branches(g: &Germ, cfg: &ResolutionConfig) -> Result<(u64, u64), GermError> {
    let t = resolution_tree(g, cfg)?;
    let (mu, delta, r) = (t.milnor(), t.delta(), t.branches());
    assert_eq!(mu + r, 2 * delta + 1, "Milnor relation failed for {}", g.equation);
    Ok((delta, r))
}

pub fn is_ordinary_double_point(g: &Germ, cfg: &ResolutionConfig) -> Result<bool, GermError> {
    if !g.reduced {
        return Err(GermError::NonReducedGerm);
    }
    Ok(milnor_recursive(g, cfg)? == 1)
}

/// Blows up every singular non-node point of the reduced total transform
/// until only nodes remain.
pub fn minimal_partial_resolution(g: &Germ, cfg: &ResolutionConfig) -> Result<PartialResolution, GermError> {
    partial::run(g.checked()?, cfg)
}

/// Multiplicity sequence of an ordinary `m`-fold point.
pub fn ordinary_point_resolution(m: u32, cfg: &ResolutionConfig) -> Result<Vec<u32>, GermError> {
    if m < 2 {
        return Ok(Vec::new());
    }
    let g = Germ::new(NamedKind::Ordinary(m).germ(), true)?;
    Ok(minimal_partial_resolution(&g, cfg)?.m_sequence)
}

pub fn analyze(g: &Germ, reduced_from_input: bool, cfg: &ResolutionConfig) -> Result<GermAnalysis, GermError> {
    let tree = resolution_tree(g, cfg)?;
    let partial = minimal_partial_resolution(g, cfg)?;
    let invariants = SingularityInvariants::from_parts(&tree, partial);
    Ok(GermAnalysis {
        equation: g.equation.to_string(),
        reduced_from_input,
        mu_oracle: milnor_jacobian_oracle(g)?,
        invariants,
        tree,
    })
}

/// Invariants of a germ without the oracle cross-check.
pub fn invariants(g: &Germ, cfg: &ResolutionConfig) -> Result<SingularityInvariants, GermError> {
    let tree = resolution_tree(g, cfg)?;
    Ok(SingularityInvariants::from_parts(&tree, minimal_partial_resolution(g, cfg)?))
}

/// Invariants of a named singularity type, computed once per process.
pub fn named_invariants(kind: NamedKind, cfg: &ResolutionConfig) -> Result<SingularityInvariants, GermError> {
    type Cache = Mutex<HashMap<(NamedKind, usize), SingularityInvariants>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (kind, cfg.max_depth);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let inv = invariants(&Germ::new(kind.germ(), true)?, cfg)?;
    cache.lock().unwrap().insert(key, inv.clone());
    Ok(inv)
}

/// Local intersection number at the origin of two curves without a common
/// component: `Σ m_p(f)·m_p(g)` over shared infinitely-near points.
pub fn intersection_multiplicity(f: &BiPoly, g: &BiPoly, cfg: &ResolutionConfig) -> Result<u64, GermError> {
    fn go(
        f: &BiPoly,
        g: &BiPoly,
        field: Option<Arc<ExtField>>,
        depth: usize,
        cfg: &ResolutionConfig,
    ) -> Result<u64, GermError> {
        let (Some(mf), Some(mg)) = (f.order_at_origin(), g.order_at_origin()) else {
            return Err(GermError::NonIsolatedSingularity);
        };
        if mf == 0 || mg == 0 {
            return Ok(0);
        }
        if depth >= cfg.max_depth {
            return Err(GermError::ResolutionDepthExceeded { cap: cfg.max_depth });
        }
        let mut total = mf as u64 * mg as u64;
        let product = f.mul(g);
        for c in chart::tangent_directions(&product, mf + mg, field.as_ref())? {
            let f1 = f.blowup_substitute(mf, &c.direction)?;
            let g1 = g.blowup_substitute(mg, &c.direction)?;
            total += c.degree as u64 * go(&f1, &g1, c.field, depth + 1, cfg)?;
        }
        Ok(total)
    }
    let field = f.field().or_else(|| g.field());
    go(f, g, field, 0, cfg)
}
