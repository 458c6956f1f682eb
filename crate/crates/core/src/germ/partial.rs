use std::sync::Arc;

use crate::arith::{BiPoly, Direction, ExtField};

use super::chart::{tangent_directions, with_extra_points};
use super::tree::expand;
use super::{GermError, ResolutionConfig};

/// A point of the reduced total transform: the strict transform `f` (a unit
/// when it does not pass through the point) plus the exceptional curves
/// `{x = 0}` and `{y = 0}` when flagged.
#[derive(Clone, Debug)]
struct TotalPoint {
    f: BiPoly,
    field: Option<Arc<ExtField>>,
    weight: usize,
    exc_x: bool,
    exc_y: bool,
}

impl TotalPoint {
    fn equation(&self) -> BiPoly {
        let mut h = self.f.clone();
        if self.exc_x {
            h = h.mul(&BiPoly::x());
        }
        if self.exc_y {
            h = h.mul(&BiPoly::y());
        }
        h
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialResolution {
    /// Multiplicity of the reduced total transform at each center, in
    /// blow-up order (level by level, canonical order within a level).
    pub m_sequence: Vec<u32>,
    /// Ordinary double points of the final configuration over the origin.
    pub final_nodes: u64,
}

pub(crate) fn is_node(h: &BiPoly, field: Option<&Arc<ExtField>>, cfg: &ResolutionConfig) -> Result<bool, GermError> {
    if h.order_at_origin() != Some(2) {
        return Ok(false);
    }
    let tree = expand(h, field.cloned(), 1, String::new(), 0, cfg)?;
    Ok(super::GermResolution { root: tree }.milnor() == 1)
}

pub(crate) fn run(f: &BiPoly, cfg: &ResolutionConfig) -> Result<PartialResolution, GermError> {
    let mut level = vec![TotalPoint {
        field: f.field(),
        f: f.clone(),
        weight: 1,
        exc_x: false,
        exc_y: false,
    }];
    let mut m_sequence = Vec::new();
    let mut final_nodes = 0;
    let mut depth = 0;
    while !level.is_empty() {
        let mut next = Vec::new();
        for p in level {
            let h = p.equation();
            let m = h.order_at_origin().unwrap_or(0);
            if m <= 1 {
                continue;
            }
            if m == 2 && is_node(&h, p.field.as_ref(), cfg)? {
                final_nodes += p.weight as u64;
                continue;
            }
            if depth >= cfg.max_depth {
                return Err(GermError::ResolutionDepthExceeded { cap: cfg.max_depth });
            }
            m_sequence.extend(std::iter::repeat_n(m, p.weight));
            let ord_f = p.f.order_at_origin().unwrap_or(0);
            let own = if ord_f >= 1 {
                tangent_directions(&p.f, ord_f, p.field.as_ref())?
            } else {
                Vec::new()
            };
            let centers = with_extra_points(own, p.exc_y, p.exc_x, p.field.as_ref());
            for c in centers {
                let (exc_x, exc_y) = match &c.direction {
                    Direction::Slope(t0) => (true, p.exc_y && t0.is_zero()),
                    Direction::Vertical => (p.exc_x, true),
                };
                next.push(TotalPoint {
                    f: p.f.blowup_substitute(ord_f, &c.direction)?,
                    field: c.field,
                    weight: p.weight * c.degree,
                    exc_x,
                    exc_y,
                });
            }
        }
        level = next;
        depth += 1;
    }
    Ok(PartialResolution { m_sequence, final_nodes })
}
