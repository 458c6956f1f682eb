//! Bivariate gcd by primitive pseudo-remainder sequences in `K[x][y]`.

use crate::arith::{BiPoly, UniPoly};

fn content(rows: &[UniPoly]) -> UniPoly {
    rows.iter().fold(UniPoly::zero(), |acc, r| acc.gcd(r))
}

fn primitive(rows: &[UniPoly]) -> Vec<UniPoly> {
    let c = content(rows);
    if c.is_zero() {
        return rows.to_vec();
    }
    rows.iter().map(|r| r.divrem(&c).0).collect()
}

fn trim(mut rows: Vec<UniPoly>) -> Vec<UniPoly> {
    while rows.last().is_some_and(UniPoly::is_zero) {
        rows.pop();
    }
    rows
}

/// `lc(b)^k · a mod b` in `y`, for some `k ≥ 0`.
fn pseudo_rem(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<UniPoly> = r.iter().map(|c| c.mul(lb)).collect();
        for (j, bj) in b.iter().enumerate() {
            next[shift + j] = next[shift + j].sub(&bj.mul(&lr));
        }
        r = trim(next);
    }
    r
}

/// Greatest common divisor, normalized to leading coefficient 1 in
/// lexicographic `(y, x)` order.
pub(crate) fn gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let ra = a.as_poly_in_y();
    let rb = b.as_poly_in_y();
    let c = content(&ra).gcd(&content(&rb));
    let (mut p, mut q) = (primitive(&ra), primitive(&rb));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = pseudo_rem(&p, &q);
        p = q;
        q = if r.is_empty() { r } else { primitive(&r) };
    }
    let g = if p.len() <= 1 {
        BiPoly::from_poly_in_y(&[c])
    } else {
        BiPoly::from_poly_in_y(&p).mul(&BiPoly::from_poly_in_y(&[c]))
    };
    g.normalized()
}

/// `Π pᵢ^(eᵢ−1)` for `f = Π pᵢ^eᵢ`: the obstruction to being squarefree.
pub(crate) fn repeated_part(f: &BiPoly) -> BiPoly {
    gcd(&gcd(f, &f.partial_x()), &f.partial_y())
}

pub(crate) fn is_squarefree(f: &BiPoly) -> bool {
    repeated_part(f).total_degree() == Some(0)
}
