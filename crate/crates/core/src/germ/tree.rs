use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{BiPoly, ExtField};

use super::chart::tangent_directions;
use super::{GermError, ResolutionConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Smooth,
    Node,
    Singular,
}

/// One infinitely-near point of the strict transform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionNode {
    pub center: String,
    pub multiplicity: u32,
    /// Number of conjugate points this node stands for.
    pub cluster_degree: usize,
    pub is_blowup_center: bool,
    pub kind: PointKind,
    pub children: Vec<ResolutionNode>,
}

/// Tree of infinitely-near points of a germ, expanded until every leaf is a
/// smooth point of the strict transform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GermResolution {
    pub root: ResolutionNode,
}

impl GermResolution {
    /// `μ = Σ μᵢ + m(m−1) − (r−1)` applied bottom-up.
    pub fn milnor(&self) -> u64 {
        milnor_at(&self.root)
    }

    /// `Σ m(m−1)/2` over every expanded point, cluster-weighted.
    pub fn delta(&self) -> u64 {
        fn go(n: &ResolutionNode) -> u64 {
            let m = n.multiplicity as u64;
            let own = if m >= 2 { n.cluster_degree as u64 * m * (m - 1) / 2 } else { 0 };
            own + n.children.iter().map(go).sum::<u64>()
        }
        go(&self.root)
    }

    /// Smooth leaves, cluster-weighted.
    pub fn branches(&self) -> u64 {
        fn go(n: &ResolutionNode) -> u64 {
            if n.children.is_empty() {
                n.cluster_degree as u64
            } else {
                n.children.iter().map(go).sum()
            }
        }
        go(&self.root)
    }

    pub fn depth(&self) -> usize {
        fn go(n: &ResolutionNode) -> usize {
            n.children.iter().map(|c| 1 + go(c)).max().unwrap_or(0)
        }
        go(&self.root)
    }
}

fn milnor_at(n: &ResolutionNode) -> u64 {
    if n.children.is_empty() {
        return 0;
    }
    let w = n.cluster_degree as u64;
    let m = n.multiplicity as u64;
    let mut sum = 0;
    let mut points = 0;
    for c in &n.children {
        let rel = c.cluster_degree as u64 / w;
        sum += rel * milnor_at(c);
        points += rel;
    }
    sum + m * (m - 1) + 1 - points
}

pub(crate) fn expand(
    f: &BiPoly,
    field: Option<Arc<ExtField>>,
    weight: usize,
    center: String,
    depth: usize,
    cfg: &ResolutionConfig,
) -> Result<ResolutionNode, GermError> {
    let m = f.order_at_origin().ok_or(GermError::NonIsolatedSingularity)?;
    if m == 0 {
        return Err(GermError::NotAtOrigin);
    }
    if m == 1 {
        return Ok(ResolutionNode {
            center,
            multiplicity: 1,
            cluster_degree: weight,
            is_blowup_center: false,
            kind: PointKind::Smooth,
            children: Vec::new(),
        });
    }
    if depth >= cfg.max_depth {
        return Err(GermError::ResolutionDepthExceeded { cap: cfg.max_depth });
    }
    let mut children = Vec::new();
    for c in tangent_directions(f, m, field.as_ref())? {
        let g = f.blowup_substitute(m, &c.direction)?;
        children.push(expand(&g, c.field, weight * c.degree, c.label, depth + 1, cfg)?);
    }
    let mut node = ResolutionNode {
        center,
        multiplicity: m,
        cluster_degree: weight,
        is_blowup_center: true,
        kind: PointKind::Singular,
        children,
    };
    if milnor_at(&node) == 1 {
        node.kind = PointKind::Node;
    }
    Ok(node)
}

/// A user-supplied tree of infinitely-near points. Children list every point
/// of the strict transform on the exceptional curve, smooth ones included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeSpec {
    pub m: u32,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeSpec>,
}

fn one() -> usize {
    1
}

fn is_one(d: &usize) -> bool {
    *d == 1
}

impl TreeSpec {
    /// Checks the shape constraints and converts to a resolution tree.
    pub fn to_resolution(&self) -> Result<GermResolution, GermError> {
        fn go(t: &TreeSpec, weight: usize, label: String) -> Result<ResolutionNode, GermError> {
            let bad = |msg: String| Err(GermError::InvalidTree(msg));
            if t.m == 0 || t.degree == 0 {
                return bad("multiplicities and degrees must be positive".into());
            }
            let w = weight * t.degree;
            if t.m == 1 {
                if !t.children.is_empty() {
                    return bad("a smooth point cannot have children".into());
                }
                return Ok(ResolutionNode {
                    center: label,
                    multiplicity: 1,
                    cluster_degree: w,
                    is_blowup_center: false,
                    kind: PointKind::Smooth,
                    children: Vec::new(),
                });
            }
            if t.children.is_empty() {
                return bad(format!("point of multiplicity {} lists no points above it", t.m));
            }
            let above: usize = t.children.iter().map(|c| c.m as usize * c.degree).sum();
            if above > t.m as usize {
                return bad(format!(
                    "points above a multiplicity-{} point have total multiplicity {above}",
                    t.m
                ));
            }
            let children = t
                .children
                .iter()
                .enumerate()
                .map(|(i, c)| go(c, w, format!("{label}.{i}")))
                .collect::<Result<Vec<_>, _>>()?;
            let mut node = ResolutionNode {
                center: label,
                multiplicity: t.m,
                cluster_degree: w,
                is_blowup_center: true,
                kind: PointKind::Singular,
                children,
            };
            if milnor_at(&node) == 1 {
                node.kind = PointKind::Node;
            }
            Ok(node)
        }
        if self.degree != 1 {
            return Err(GermError::InvalidTree("the root must have degree 1".into()));
        }
        Ok(GermResolution { root: go(self, 1, "origin".into())? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf() -> TreeSpec {
        TreeSpec { m: 1, degree: 1, children: vec![] }
    }

    #[test]
    fn explicit_cusp_tree() {
        let t = TreeSpec { m: 2, degree: 1, children: vec![leaf()] };
        let r = t.to_resolution().unwrap();
        assert_eq!((r.milnor(), r.delta(), r.branches()), (2, 1, 1));
    }

    #[test]
    fn explicit_tree_with_cluster() {
        // y^2 + x^2 style node: one degree-2 cluster of smooth points
        let t = TreeSpec { m: 2, degree: 1, children: vec![TreeSpec { m: 1, degree: 2, children: vec![] }] };
        let r = t.to_resolution().unwrap();
        assert_eq!((r.milnor(), r.delta(), r.branches()), (1, 1, 2));
        assert_eq!(r.root.kind, PointKind::Node);
    }

    #[test]
    fn overfull_tree_rejected() {
        let t = TreeSpec { m: 2, degree: 1, children: vec![leaf(), leaf(), leaf()] };
        assert!(t.to_resolution().is_err());
        let t = TreeSpec { m: 3, degree: 1, children: vec![] };
        assert!(t.to_resolution().is_err());
    }
}
