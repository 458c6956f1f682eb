use std::cmp::Ordering;
use std::sync::Arc;

use crate::arith::{univariate_factor_in, BiPoly, Direction, ExtField, Scalar, UniPoly};

use super::GermError;

/// A point on the exceptional curve of one blow-up, possibly standing for a
/// cluster of `degree` conjugate points.
#[derive(Clone, Debug)]
pub(crate) struct Center {
    pub direction: Direction,
    pub field: Option<Arc<ExtField>>,
    pub degree: usize,
    pub label: String,
    /// Irreducible factor of the dehomogenized tangent cone; `None` for the
    /// vertical direction.
    factor: Option<UniPoly>,
}

impl Center {
    fn slope(factor: UniPoly, field: Option<&Arc<ExtField>>) -> Center {
        if factor.degree() == Some(1) {
            let t0 = -factor.coeff(0);
            let label = format!("slope {}", paren_if_algebraic(&t0));
            Center {
                direction: Direction::Slope(t0),
                field: field.cloned(),
                degree: 1,
                label,
                factor: Some(factor),
            }
        } else {
            let modulus = factor
                .coeffs()
                .iter()
                .map(|c| c.as_rational().expect("clusters only open over Q").clone())
                .collect();
            let k = ExtField::from_irreducible(modulus);
            Center {
                direction: Direction::Slope(Scalar::generator(&k)),
                label: format!("slope root of {}", factor.display_in("t")),
                degree: factor.degree().unwrap(),
                field: Some(k),
                factor: Some(factor),
            }
        }
    }

    fn vertical(field: Option<&Arc<ExtField>>) -> Center {
        Center {
            direction: Direction::Vertical,
            field: field.cloned(),
            degree: 1,
            label: "vertical".into(),
            factor: None,
        }
    }

    pub fn is_slope_zero(&self) -> bool {
        matches!(&self.direction, Direction::Slope(t) if t.is_zero())
    }

    pub fn is_vertical(&self) -> bool {
        self.direction == Direction::Vertical
    }

    fn order_key(&self, other: &Center) -> Ordering {
        match (&self.factor, &other.factor) {
            (Some(a), Some(b)) => a.canonical_cmp(b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }
}

fn paren_if_algebraic(s: &Scalar) -> String {
    match s {
        Scalar::Algebraic(_) => format!("({s})"),
        Scalar::Rational(_) => s.to_string(),
    }
}

/// Tangent directions of `f`, whose order at the origin is `m ≥ 1`: slope
/// factors in canonical order, then the vertical direction.
pub(crate) fn tangent_directions(
    f: &BiPoly,
    m: u32,
    field: Option<&Arc<ExtField>>,
) -> Result<Vec<Center>, GermError> {
    let cone = f.homogeneous_part(m);
    let g = cone.dehomogenize();
    let mut out = Vec::new();
    if g.degree().unwrap_or(0) > 0 {
        for (factor, _) in univariate_factor_in(&g, field)? {
            out.push(Center::slope(factor, field));
        }
    }
    if g.degree().unwrap_or(0) < m as usize {
        out.push(Center::vertical(field));
    }
    Ok(out)
}

/// Adds the slope-0 and vertical points when requested and not yet present,
/// keeping the canonical order.
pub(crate) fn with_extra_points(
    mut centers: Vec<Center>,
    slope_zero: bool,
    vertical: bool,
    field: Option<&Arc<ExtField>>,
) -> Vec<Center> {
    if slope_zero && !centers.iter().any(Center::is_slope_zero) {
        centers.push(Center::slope(UniPoly::new(vec![Scalar::zero(), Scalar::one()]), field));
    }
    if vertical && !centers.iter().any(Center::is_vertical) {
        centers.push(Center::vertical(field));
    }
    centers.sort_by(|a, b| a.order_key(b));
    centers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_poly;

    #[test]
    fn node_has_two_slopes() {
        let f = parse_poly("y^2 - x^2").unwrap();
        let cs = tangent_directions(&f, 2, None).unwrap();
        let labels: Vec<_> = cs.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["slope 1", "slope -1"]);
    }

    #[test]
    fn cusp_after_one_blowup_is_vertical() {
        let f = parse_poly("y^2 - x").unwrap();
        let cs = tangent_directions(&f, 1, None).unwrap();
        assert_eq!(cs.len(), 1);
        assert!(cs[0].is_vertical());
    }

    #[test]
    fn irrational_pair_forms_a_cluster() {
        let f = parse_poly("y^2 + x^2").unwrap();
        let cs = tangent_directions(&f, 2, None).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].degree, 2);
        assert!(cs[0].field.is_some());
    }
}
