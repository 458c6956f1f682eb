//! Milnor number as the dimension of the local algebra modulo the Jacobian
//! ideal, by exact linear algebra on truncated monomial spaces.

use std::collections::{BTreeMap, HashMap};

use crate::arith::{BiPoly, Scalar};

use super::GermError;

/// Truncation degree at which the oracle gives up.
pub const ORACLE_DEGREE_CAP: u32 = 64;

/// `dim k[x,y] / (J + mᴺ)` for the ideal generated by `gens`.
fn quotient_dim(gens: &[BiPoly], n: u32) -> usize {
    let mut index = HashMap::new();
    for d in 0..n {
        for a in 0..=d {
            let next = index.len();
            index.insert((a, d - a), next);
        }
    }
    let cols = index.len();
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
    for g in gens {
        for d in 0..n {
            for a in 0..=d {
                let b = d - a;
                let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (&(i, j), c) in g.terms() {
                    if i + j + d < n {
                        row.insert(index[&(i + a, j + b)], c.clone());
                    }
                }
                reduce_and_insert(&mut pivots, row);
                if pivots.len() == cols {
                    return 0;
                }
            }
        }
    }
    cols - pivots.len()
}

fn reduce_and_insert(pivots: &mut BTreeMap<usize, BTreeMap<usize, Scalar>>, mut row: BTreeMap<usize, Scalar>) {
    while let Some((&lead, c)) = row.iter().next() {
        match pivots.get(&lead) {
            Some(p) => {
                let c = c.clone();
                for (k, v) in p {
                    let nv = &row.get(k).cloned().unwrap_or_else(Scalar::zero) - &(&c * v);
                    if nv.is_zero() {
                        row.remove(k);
                    } else {
                        row.insert(*k, nv);
                    }
                }
            }
            None => {
                let inv = c.inv().unwrap();
                for v in row.values_mut() {
                    *v = &*v * &inv;
                }
                pivots.insert(lead, row);
                return;
            }
        }
    }
}

/// Raises the truncation degree until two consecutive quotient dimensions
/// agree; by Nakayama the common value is then the local dimension.
pub(crate) fn jacobian_dimension(f: &BiPoly) -> Result<u64, GermError> {
    let gens = [f.partial_x(), f.partial_y()];
    let mut prev = 0;
    for n in 1..=ORACLE_DEGREE_CAP {
        let d = quotient_dim(&gens, n);
        if d == prev {
            return Ok(d as u64);
        }
        prev = d;
    }
    Err(GermError::TruncationLimitExceeded { cap: ORACLE_DEGREE_CAP })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_poly;

    fn mu(s: &str) -> u64 {
        jacobian_dimension(&parse_poly(s).unwrap()).unwrap()
    }

    #[test]
    fn small_catalog() {
        assert_eq!(mu("y - x^2"), 0);
        assert_eq!(mu("y^2 - x^2"), 1);
        assert_eq!(mu("y^2 - x^3"), 2);
        assert_eq!(mu("y^2 - x^4"), 3);
        assert_eq!(mu("y^3 - x^4"), 6);
        assert_eq!(mu("x*y*(x - y)"), 4);
    }

    #[test]
    fn only_the_origin_counts() {
        // (y^2 - x^3)(1 + x): the second factor is a unit at the origin
        assert_eq!(mu("(y^2 - x^3)*(1 + x)"), 2);
    }
}
