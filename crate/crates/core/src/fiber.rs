//! Singular fibers: component and singular-point data, reduced and partially
//! resolved invariants.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::arith::parse_poly;
use crate::germ::{
    self, Germ, GermError, LocalIntersection, NamedKind, ResolutionConfig, SingularityInvariants, TreeSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiberError {
    #[error("fiber `{fiber}` has no components")]
    NoComponents { fiber: String },
    #[error("fiber `{fiber}`: component id `{id}` is used twice")]
    DuplicateComponent { fiber: String, id: String },
    #[error("fiber `{fiber}`: singular point refers to unknown component `{id}`")]
    UnknownComponent { fiber: String, id: String },
    #[error("fiber `{fiber}`: singular point #{index} lists no incident components")]
    EmptyIncidence { fiber: String, index: usize },
    #[error("fiber `{fiber}`: singular point #{index} needs one of `kind`, `germ`, `branches` or `tree`")]
    MissingSource { fiber: String, index: usize },
    #[error("fiber `{fiber}`: singular point #{index} gives an explicit tree without `partial_resolution`")]
    MissingPartialResolution { fiber: String, index: usize },
    #[error("fiber `{fiber}`: singular point #{index}: {detail}")]
    BadGermSource { fiber: String, index: usize, detail: String },
    #[error("fiber `{fiber}`: singular point #{index}: {source}")]
    Germ { fiber: String, index: usize, source: GermError },
    #[error("fiber `{fiber}`: non-nodal singular point #{index} on a non-reduced fiber must be given as an explicit tree")]
    NonReducedNeedsTree { fiber: String, index: usize },
    #[error("fiber `{fiber}`: {field} = {value}, but {requirement}")]
    OutOfRange { fiber: String, field: String, value: i64, requirement: &'static str },
    #[error("fiber `{fiber}`: singular point #{index}: sources disagree ({detail})")]
    SourceDisagreement { fiber: String, index: usize, detail: String },
    #[error("fiber `{fiber}`: singular point #{index} has {branches} branches but meets {components} distinct components")]
    TooFewBranches { fiber: String, index: usize, branches: u64, components: usize },
    #[error("fiber `{fiber}`: singular point #{index}: {detail}")]
    InvalidPartialResolution { fiber: String, index: usize, detail: String },
    #[error("fiber `{fiber}` is disconnected")]
    DisconnectedFiber { fiber: String },
    #[error("fiber `{fiber}`: reduced arithmetic genus {pa_red} exceeds the fiber genus {g}")]
    GenusMismatch { fiber: String, g: i64, pa_red: i64 },
    #[error("fiber `{fiber}` is reduced but its reduced arithmetic genus {pa_red} differs from the fiber genus {g}")]
    ReducedDefect { fiber: String, g: i64, pa_red: i64 },
    #[error("fiber `{fiber}`: the correction sum {sum} over the multiplicity sequence is odd")]
    OddCorrection { fiber: String, sum: i64 },
    #[error("fiber `{fiber}`: {identity} fails: {lhs} != {rhs}")]
    IdentityViolation { fiber: String, identity: &'static str, lhs: i64, rhs: i64 },
}

impl FiberError {
    /// Errors in the shape of the input, as opposed to numeric inconsistencies.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            FiberError::NoComponents { .. }
                | FiberError::DuplicateComponent { .. }
                | FiberError::UnknownComponent { .. }
                | FiberError::EmptyIncidence { .. }
                | FiberError::MissingSource { .. }
                | FiberError::MissingPartialResolution { .. }
                | FiberError::BadGermSource { .. }
                | FiberError::Germ { .. }
                | FiberError::NonReducedNeedsTree { .. }
        )
    }
}

fn one() -> i64 {
    1
}

fn is_one(v: &i64) -> bool {
    *v == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRecord {
    pub id: String,
    /// Genus of the normalization.
    pub geometric_genus: i64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub multiplicity: i64,
}

/// A singular point of the reduced fiber as written in input files.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularitySpec {
    pub at: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<NamedKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub germ: Option<String>,
    /// One local equation per incident component; the germ is their product.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_resolution: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub components: Vec<ComponentRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singularities: Vec<SingularitySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularPointRecord {
    pub incident_components: Vec<String>,
    pub count: i64,
    pub source: String,
    pub resolved: SingularityInvariants,
    pub warnings: Vec<String>,
}

/// A fiber with every singular point resolved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberModel {
    pub name: String,
    pub components: Vec<ComponentRecord>,
    pub singular_points: Vec<SingularPointRecord>,
    pub ambient_genus: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedInvariants {
    pub ell: i64,
    #[serde(rename = "gF")]
    pub g_f: i64,
    pub pa_red: i64,
    #[serde(rename = "N_F")]
    pub n_f: i64,
    pub mu_f: i64,
    pub e_f: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberInvariants {
    pub name: String,
    pub ell: i64,
    #[serde(rename = "gF")]
    pub g_f: i64,
    pub pa_red: i64,
    #[serde(rename = "N_F")]
    pub n_f: i64,
    pub mu_f: i64,
    pub e_f: i64,
    pub m_sequence_all: Vec<u32>,
    pub r_f: i64,
    #[serde(rename = "N_bar")]
    pub n_bar: i64,
    pub mu_bar: i64,
    pub pa_bar_red: i64,
    pub ell_bar: i64,
    pub alpha: i64,
    pub chi_top: i64,
    pub chi_top_residual: i64,
    pub semistable: bool,
}

fn resolve_point(
    fiber: &str,
    index: usize,
    spec: &SingularitySpec,
    cfg: &ResolutionConfig,
) -> Result<(SingularityInvariants, String, Vec<String>), FiberError> {
    let germ_err = |source| FiberError::Germ { fiber: fiber.into(), index, source };
    let disagree = |detail: String| FiberError::SourceDisagreement { fiber: fiber.into(), index, detail };
    let mut warnings = Vec::new();
    let mut found: Vec<(&'static str, SingularityInvariants)> = Vec::new();

    if let Some(tree) = &spec.tree {
        let seq = spec.partial_resolution.as_ref().ok_or(FiberError::MissingPartialResolution {
            fiber: fiber.into(),
            index,
        })?;
        let res = tree.to_resolution().map_err(germ_err)?;
        let bad = |detail: String| FiberError::InvalidPartialResolution { fiber: fiber.into(), index, detail };
        if let Some(&m) = seq.iter().find(|&&m| m < 2) {
            return Err(bad(format!("multiplicity {m} in the sequence is below 2")));
        }
        let seq: Vec<u32> = seq.iter().map(|&m| m as u32).collect();
        let mu = res.milnor();
        if (mu <= 1) != seq.is_empty() {
            return Err(bad("the sequence must be empty exactly for smooth points and nodes".into()));
        }
        if let Some(&first) = seq.first() {
            if first != res.root.multiplicity {
                return Err(bad(format!(
                    "the first center has multiplicity {first} but the tree root has {}",
                    res.root.multiplicity
                )));
            }
        }
        let correction: u64 = seq.iter().map(|&m| (m as u64 - 1) * (m as u64 - 2)).sum();
        let nodes = (mu + seq.len() as u64)
            .checked_sub(correction)
            .ok_or_else(|| bad("the sequence implies a negative node count".into()))?;
        let inv = SingularityInvariants {
            m: res.root.multiplicity,
            mu,
            delta: res.delta(),
            branches: res.branches(),
            blowup_count: seq.len(),
            m_sequence: seq,
            final_nodes: nodes,
            local_intersections: Vec::new(),
        };
        found.push(("tree", inv));
    } else if spec.partial_resolution.is_some() && spec.germ.is_none() && spec.branches.is_none() && spec.kind.is_none() {
        return Err(FiberError::MissingSource { fiber: fiber.into(), index });
    }

    let bad_germ = |detail: String| FiberError::BadGermSource { fiber: fiber.into(), index, detail };
    let germ_inv = match (&spec.germ, &spec.branches) {
        (Some(_), Some(_)) => return Err(bad_germ("give either `germ` or `branches`, not both".into())),
        (Some(text), None) => {
            let (g, changed) = Germ::parse(text).map_err(germ_err)?;
            if changed {
                warnings.push(format!("germ `{text}` is not reduced; using `{}`", g.equation()));
            }
            Some(germ::invariants(&g, cfg).map_err(germ_err)?)
        }
        (None, Some(map)) => {
            let labels: BTreeSet<&String> = map.keys().collect();
            let incident: BTreeSet<&String> = spec.at.iter().collect();
            if labels != incident {
                return Err(bad_germ("`branches` must have one entry per incident component".into()));
            }
            let mut polys = Vec::new();
            for (id, text) in map {
                let f = parse_poly(text).map_err(|e| germ_err(e.into()))?;
                polys.push((id.clone(), f));
            }
            let mut local = Vec::new();
            for (i, (a, fa)) in polys.iter().enumerate() {
                for (b, fb) in &polys[i + 1..] {
                    local.push(LocalIntersection {
                        first: a.clone(),
                        second: b.clone(),
                        multiplicity: germ::intersection_multiplicity(fa, fb, cfg).map_err(germ_err)?,
                    });
                }
            }
            let product = polys.iter().fold(crate::arith::BiPoly::one(), |acc, (_, f)| acc.mul(f));
            let g = Germ::new(product, true).map_err(germ_err)?;
            let mut inv = germ::invariants(&g, cfg).map_err(germ_err)?;
            inv.local_intersections = local;
            Some(inv)
        }
        (None, None) => None,
    };
    if let Some(inv) = germ_inv {
        if let Some(seq) = &spec.partial_resolution {
            let given: Vec<i64> = inv.m_sequence.iter().map(|&m| m as i64).collect();
            if !spec.tree.is_some() && &given != seq {
                return Err(disagree(format!(
                    "`partial_resolution` {seq:?} differs from the computed {given:?}"
                )));
            }
        }
        found.push(("germ", inv));
    }
    if let Some(kind) = spec.kind {
        found.push(("kind", germ::named_invariants(kind, cfg).map_err(germ_err)?));
    }

    let Some((source, primary)) = found.first().cloned() else {
        return Err(FiberError::MissingSource { fiber: fiber.into(), index });
    };
    for (other, inv) in &found[1..] {
        let key = |i: &SingularityInvariants| (i.mu, i.delta, i.branches, i.m_sequence.clone());
        if key(inv) != key(&primary) {
            return Err(disagree(format!(
                "{source} gives (mu, delta, r, m_i) = {:?}, {other} gives {:?}",
                key(&primary),
                key(inv)
            )));
        }
    }
    let label = match source {
        "kind" => spec.kind.unwrap().to_string(),
        "germ" => spec
            .germ
            .clone()
            .unwrap_or_else(|| format!("branches over {}", spec.at.join(", "))),
        _ => "explicit tree".into(),
    };
    Ok((primary, label, warnings))
}

impl FiberModel {
    /// Validates the incidence data and resolves every singular point.
    pub fn from_spec(
        spec: &FiberSpec,
        default_name: &str,
        ambient_genus: i64,
        cfg: &ResolutionConfig,
    ) -> Result<FiberModel, FiberError> {
        let name = spec.name.clone().unwrap_or_else(|| default_name.to_string());
        if spec.components.is_empty() {
            return Err(FiberError::NoComponents { fiber: name });
        }
        let mut ids = BTreeSet::new();
        for c in &spec.components {
            if !ids.insert(c.id.as_str()) {
                return Err(FiberError::DuplicateComponent { fiber: name, id: c.id.clone() });
            }
        }
        let reduced = spec.components.iter().all(|c| c.multiplicity == 1);
        let mut points = Vec::new();
        for (index, s) in spec.singularities.iter().enumerate() {
            if s.at.is_empty() {
                return Err(FiberError::EmptyIncidence { fiber: name, index });
            }
            if let Some(id) = s.at.iter().find(|id| !ids.contains(id.as_str())) {
                return Err(FiberError::UnknownComponent { fiber: name, id: id.clone() });
            }
            let (resolved, source, warnings) = resolve_point(&name, index, s, cfg)?;
            if !reduced && !resolved.is_node() && s.tree.is_none() {
                return Err(FiberError::NonReducedNeedsTree { fiber: name, index });
            }
            points.push(SingularPointRecord {
                incident_components: s.at.clone(),
                count: s.count.unwrap_or(1),
                source,
                resolved,
                warnings,
            });
        }
        Ok(FiberModel {
            name,
            components: spec.components.clone(),
            singular_points: points,
            ambient_genus,
        })
    }

    fn range_checks(&self) -> Result<(), FiberError> {
        let out = |field: String, value: i64, requirement| {
            Err(FiberError::OutOfRange { fiber: self.name.clone(), field, value, requirement })
        };
        if self.ambient_genus < 1 {
            return out("fiber genus".into(), self.ambient_genus, "it must be at least 1");
        }
        for c in &self.components {
            if c.geometric_genus < 0 {
                return out(format!("geometric_genus of {}", c.id), c.geometric_genus, "it must be nonnegative");
            }
            if c.multiplicity < 1 {
                return out(format!("multiplicity of {}", c.id), c.multiplicity, "it must be positive");
            }
        }
        for (i, p) in self.singular_points.iter().enumerate() {
            if p.count < 1 {
                return out(format!("count of singular point #{i}"), p.count, "it must be positive");
            }
            let distinct: BTreeSet<&String> = p.incident_components.iter().collect();
            if p.resolved.branches < distinct.len() as u64 {
                return Err(FiberError::TooFewBranches {
                    fiber: self.name.clone(),
                    index: i,
                    branches: p.resolved.branches,
                    components: distinct.len(),
                });
            }
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<(), FiberError> {
        let index: HashMap<&str, usize> =
            self.components.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
        let mut parent: Vec<usize> = (0..self.components.len()).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        for p in &self.singular_points {
            let first = index[p.incident_components[0].as_str()];
            for id in &p.incident_components[1..] {
                let (a, b) = (find(&mut parent, first), find(&mut parent, index[id.as_str()]));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        if (0..parent.len()).all(|i| find(&mut parent, i) == root) {
            Ok(())
        } else {
            Err(FiberError::DisconnectedFiber { fiber: self.name.clone() })
        }
    }

    fn sum_over_points(&self, f: impl Fn(&SingularityInvariants) -> i64) -> i64 {
        self.singular_points.iter().map(|p| p.count * f(&p.resolved)).sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.components.iter().all(|c| c.multiplicity == 1)
    }

    /// Reduced and at worst nodal.
    pub fn is_semistable(&self) -> bool {
        self.is_reduced() && self.singular_points.iter().all(|p| p.resolved.is_node())
    }

    pub fn m_sequence_all(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for p in &self.singular_points {
            for _ in 0..p.count {
                out.extend(&p.resolved.m_sequence);
            }
        }
        out
    }
}

/// `(ℓ, g(F), p_a(F_red), N_F, μ_F, e_F)`.
pub fn fiber_reduced_invariants(m: &FiberModel) -> Result<ReducedInvariants, FiberError> {
    m.range_checks()?;
    m.check_connected()?;
    let ell = m.components.len() as i64;
    let g_f: i64 = m.components.iter().map(|c| c.geometric_genus).sum();
    let delta = m.sum_over_points(|s| s.delta as i64);
    let pa_red = g_f + delta - ell + 1;
    let n_f = m.ambient_genus - pa_red;
    if n_f < 0 {
        return Err(FiberError::GenusMismatch { fiber: m.name.clone(), g: m.ambient_genus, pa_red });
    }
    if n_f != 0 && m.is_reduced() {
        return Err(FiberError::ReducedDefect { fiber: m.name.clone(), g: m.ambient_genus, pa_red });
    }
    let mu_f = m.sum_over_points(|s| s.mu as i64);
    Ok(ReducedInvariants { ell, g_f, pa_red, n_f, mu_f, e_f: 2 * n_f + mu_f })
}

/// `(μ̄, N̄, p_a(F̄_red))` from the reduced data and the multiplicity sequence.
pub fn partial_resolution_transform(
    mu: i64,
    n: i64,
    pa_red: i64,
    m_sequence: &[u32],
) -> Result<(i64, i64, i64), i64> {
    let sum: i64 = m_sequence.iter().map(|&m| (m as i64 - 1) * (m as i64 - 2)).sum();
    if sum % 2 != 0 {
        return Err(sum);
    }
    let r = m_sequence.len() as i64;
    Ok((mu - sum + r, n + sum / 2, pa_red - sum / 2))
}

/// `χ_top(F_red)` from normalizations and branch counts, and its residual
/// against `2χ(O) + μ`.
pub fn chi_top_identity_check(m: &FiberModel) -> Result<(i64, i64), FiberError> {
    let red = fiber_reduced_invariants(m)?;
    let chi_top: i64 = m.components.iter().map(|c| 2 - 2 * c.geometric_genus).sum::<i64>()
        - m.sum_over_points(|s| s.branches as i64 - 1);
    Ok((chi_top, chi_top - (2 * (1 - red.pa_red) + red.mu_f)))
}

pub fn fiber_full_invariants(m: &FiberModel) -> Result<FiberInvariants, FiberError> {
    let red = fiber_reduced_invariants(m)?;
    let seq = m.m_sequence_all();
    let (mu_bar, n_bar, pa_bar_red) = partial_resolution_transform(red.mu_f, red.n_f, red.pa_red, &seq)
        .map_err(|sum| FiberError::OddCorrection { fiber: m.name.clone(), sum })?;
    let r_f = seq.len() as i64;
    let ell_bar = red.ell + r_f;
    let alpha = mu_bar - ell_bar + 1;
    let violation = |identity, lhs, rhs| FiberError::IdentityViolation { fiber: m.name.clone(), identity, lhs, rhs };
    if alpha != pa_bar_red - red.g_f {
        return Err(violation("alpha computed two ways", alpha, pa_bar_red - red.g_f));
    }
    if m.ambient_genus != red.g_f + n_bar + alpha {
        return Err(violation("g = g(F) + N_bar + alpha", m.ambient_genus, red.g_f + n_bar + alpha));
    }
    if red.e_f != 2 * n_bar + mu_bar - r_f {
        return Err(violation("e_F = 2 N_bar + mu_bar - r_F", red.e_f, 2 * n_bar + mu_bar - r_f));
    }
    if n_bar > m.ambient_genus || pa_bar_red < 0 || alpha < 0 {
        return Err(violation("0 <= N_F <= N_bar <= g, alpha >= 0", n_bar, m.ambient_genus));
    }
    let (chi_top, chi_top_residual) = chi_top_identity_check(m)?;
    Ok(FiberInvariants {
        name: m.name.clone(),
        ell: red.ell,
        g_f: red.g_f,
        pa_red: red.pa_red,
        n_f: red.n_f,
        mu_f: red.mu_f,
        e_f: red.e_f,
        m_sequence_all: seq,
        r_f,
        n_bar,
        mu_bar,
        pa_bar_red,
        ell_bar,
        alpha,
        chi_top,
        chi_top_residual,
        semistable: m.is_semistable(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(id: &str, g: i64) -> ComponentRecord {
        ComponentRecord { id: id.into(), geometric_genus: g, multiplicity: 1 }
    }

    fn point(at: &[&str], kind: &str) -> SingularitySpec {
        SingularitySpec {
            at: at.iter().map(|s| s.to_string()).collect(),
            kind: Some(kind.parse().unwrap()),
            ..Default::default()
        }
    }

    fn model(components: Vec<ComponentRecord>, singularities: Vec<SingularitySpec>, g: i64) -> FiberModel {
        let spec = FiberSpec { name: None, components, singularities };
        FiberModel::from_spec(&spec, "F", g, &ResolutionConfig::default()).unwrap()
    }

    fn tuple(r: ReducedInvariants) -> (i64, i64, i64, i64, i64, i64) {
        (r.ell, r.g_f, r.pa_red, r.n_f, r.mu_f, r.e_f)
    }

    #[test]
    fn reduced_invariant_examples() {
        let smooth = model(vec![comp("C", 2)], vec![], 2);
        assert_eq!(tuple(fiber_reduced_invariants(&smooth).unwrap()), (1, 2, 2, 0, 0, 0));
        let nodal = model(vec![comp("C", 1)], vec![point(&["C"], "node")], 2);
        assert_eq!(tuple(fiber_reduced_invariants(&nodal).unwrap()), (1, 1, 2, 0, 1, 1));
        let two = model(
            vec![comp("C1", 1), comp("C2", 0)],
            vec![point(&["C1", "C2"], "node"), point(&["C1", "C2"], "node")],
            2,
        );
        assert_eq!(tuple(fiber_reduced_invariants(&two).unwrap()), (2, 1, 2, 0, 2, 2));
    }

    #[test]
    fn transform_examples() {
        assert_eq!(partial_resolution_transform(1, 0, 5, &[]), Ok((1, 0, 5)));
        assert_eq!(partial_resolution_transform(2, 0, 1, &[2, 2, 3]), Ok((3, 1, 0)));
        assert_eq!(partial_resolution_transform(3, 0, 4, &[2, 3]), Ok((3, 1, 3)));
    }

    #[test]
    fn cuspidal_fiber() {
        let m = model(vec![comp("C", 1)], vec![point(&["C"], "cusp")], 2);
        let inv = fiber_full_invariants(&m).unwrap();
        assert_eq!((inv.e_f, inv.n_bar, inv.alpha, inv.mu_bar, inv.ell_bar), (2, 1, 0, 3, 4));
        assert_eq!(inv.g_f + inv.n_bar + inv.alpha, 2);
        assert!(!inv.semistable);
    }

    #[test]
    fn nodal_and_two_elliptic_fibers() {
        let m = model(vec![comp("C", 1)], vec![point(&["C"], "node")], 2);
        let inv = fiber_full_invariants(&m).unwrap();
        assert_eq!((inv.alpha, inv.n_bar), (1, 0));
        let m = model(vec![comp("A", 1), comp("B", 1)], vec![point(&["A", "B"], "node")], 2);
        let inv = fiber_full_invariants(&m).unwrap();
        assert_eq!((inv.g_f, inv.alpha, inv.n_bar, inv.e_f), (2, 0, 0, 1));
        assert!(inv.semistable);
    }

    #[test]
    fn chi_top_examples() {
        let smooth = model(vec![comp("C", 2)], vec![], 2);
        assert_eq!(chi_top_identity_check(&smooth).unwrap(), (-2, 0));
        let nodal = model(vec![comp("C", 1)], vec![point(&["C"], "node")], 2);
        assert_eq!(chi_top_identity_check(&nodal).unwrap(), (-1, 0));
        let two = model(vec![comp("A", 1), comp("B", 1)], vec![point(&["A", "B"], "node")], 2);
        assert_eq!(chi_top_identity_check(&two).unwrap(), (-1, 0));
    }

    #[test]
    fn inconsistent_fibers_rejected() {
        let disconnected = model(vec![comp("A", 1), comp("B", 1)], vec![], 2);
        assert!(matches!(fiber_reduced_invariants(&disconnected), Err(FiberError::DisconnectedFiber { .. })));
        let too_big = model(vec![comp("C", 2)], vec![point(&["C"], "node")], 2);
        assert!(matches!(fiber_reduced_invariants(&too_big), Err(FiberError::GenusMismatch { .. })));
        let defect = model(vec![comp("C", 1)], vec![], 2);
        assert!(matches!(fiber_reduced_invariants(&defect), Err(FiberError::ReducedDefect { .. })));
    }

    #[test]
    fn sources_must_agree() {
        let mut s = point(&["C"], "cusp");
        s.germ = Some("y^2 - x^3".into());
        model(vec![comp("C", 1)], vec![s.clone()], 2);
        s.germ = Some("y^2 - x^4".into());
        let spec = FiberSpec { name: None, components: vec![comp("C", 1)], singularities: vec![s] };
        let err = FiberModel::from_spec(&spec, "F", 2, &ResolutionConfig::default()).unwrap_err();
        assert!(matches!(err, FiberError::SourceDisagreement { .. }));
    }

    #[test]
    fn explicit_tree_needs_sequence() {
        let s = SingularitySpec {
            at: vec!["C".into()],
            tree: Some(TreeSpec { m: 2, degree: 1, children: vec![TreeSpec { m: 1, degree: 1, children: vec![] }] }),
            ..Default::default()
        };
        let spec = FiberSpec { name: None, components: vec![comp("C", 1)], singularities: vec![s.clone()] };
        let cfg = ResolutionConfig::default();
        assert!(matches!(
            FiberModel::from_spec(&spec, "F", 2, &cfg),
            Err(FiberError::MissingPartialResolution { .. })
        ));
        let mut s = s;
        s.partial_resolution = Some(vec![2, 2, 3]);
        let spec = FiberSpec { name: None, components: vec![comp("C", 1)], singularities: vec![s] };
        let m = FiberModel::from_spec(&spec, "F", 2, &cfg).unwrap();
        assert_eq!(fiber_full_invariants(&m).unwrap().e_f, 2);
    }

    #[test]
    fn labelled_branches_give_local_intersections() {
        let mut branches = BTreeMap::new();
        branches.insert("A".to_string(), "y".to_string());
        branches.insert("B".to_string(), "y - x^2".to_string());
        let s = SingularitySpec { at: vec!["A".into(), "B".into()], branches: Some(branches), ..Default::default() };
        let m = model(vec![comp("A", 0), comp("B", 0)], vec![s], 1);
        let p = &m.singular_points[0].resolved;
        assert_eq!(p.local_intersections[0].multiplicity, 2);
        assert_eq!((p.mu, p.delta), (3, 2));
    }
}
