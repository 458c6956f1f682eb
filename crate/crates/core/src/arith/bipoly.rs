use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{ArithError, ExtField, Scalar, UniPoly};

/// A direction on the exceptional curve of a point blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The chart `x = u, y = u·(t₀ + v)`; exceptional curve `{u = 0}`.
    Slope(Scalar),
    /// The chart `x = w·z, y = z`; exceptional curve `{z = 0}`.
    Vertical,
}

/// Sparse polynomial in `x`, `y`. Keys are exponent pairs `(i, j)` for `xⁱyʲ`;
/// no stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn x() -> Self {
        Self::monomial(Scalar::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Scalar::one(), 0, 1)
    }

    pub fn monomial(c: Scalar, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { terms }
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Scalar)>>(it: I) -> Self {
        let mut p = BiPoly::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    /// Integer coefficients `(c, i, j)`, mostly for tests.
    pub fn from_int_terms(v: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(v.iter().map(|&(c, i, j)| ((i, j), Scalar::from_int(c))))
    }

    fn add_term(&mut self, k: (u32, u32), c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Scalar {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(0, 0)
    }

    pub fn field(&self) -> Option<Arc<ExtField>> {
        self.terms.values().find_map(|c| c.field().cloned())
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn degree_in_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn homogeneous_part(&self, d: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|((i, j), _)| i + j == d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Terms of minimal total degree: the tangent cone.
    pub fn leading_form(&self) -> Result<BiPoly, ArithError> {
        let m = self.order_at_origin().ok_or(ArithError::ZeroPolynomial)?;
        Ok(self.homogeneous_part(m))
    }

    /// For a form of degree `m`, returns `h(1, t)`; its degree falls short of
    /// `m` by the multiplicity of the vertical direction.
    pub fn dehomogenize(&self) -> UniPoly {
        let m = self.order_at_origin().unwrap_or(0);
        let mut coeffs = vec![Scalar::zero(); m as usize + 1];
        for (&(i, j), c) in &self.terms {
            if i + j == m {
                coeffs[j as usize] = c.clone();
            }
        }
        UniPoly::new(coeffs)
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, -c);
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(k, a)| (*k, a * c)))
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial_x(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * &Scalar::from_int(i as i64))),
        )
    }

    pub fn partial_y(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * &Scalar::from_int(j as i64))),
        )
    }

    /// Multiplies every coefficient into `field` when it is compatible.
    fn compatible_with(&self, s: &Scalar) -> bool {
        self.terms.values().all(|c| c.compatible(s))
    }

    /// `f(x + a, y + b)`, expanded exactly.
    pub fn translate(&self, a: &Scalar, b: &Scalar) -> Result<BiPoly, ArithError> {
        if !a.compatible(b) || !self.compatible_with(a) || !self.compatible_with(b) {
            return Err(ArithError::FieldMismatch);
        }
        let max_i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let xa = binomial_table(a, max_i);
        let yb = binomial_table(b, max_j);
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            for (k, ca) in xa[i as usize].iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                let cca = c * ca;
                for (l, cb) in yb[j as usize].iter().enumerate() {
                    if cb.is_zero() {
                        continue;
                    }
                    out.add_term((k as u32, l as u32), &cca * cb);
                }
            }
        }
        Ok(out)
    }

    /// Strict-transform chart of the blow-up at the origin, divided by the
    /// `m`-th power of the exceptional coordinate. Output variables are
    /// `(u, v)` resp. `(w, z)`, written back as `(x, y)`.
    pub fn blowup_substitute(&self, m: u32, direction: &Direction) -> Result<BiPoly, ArithError> {
        if self.order_at_origin().is_some_and(|ord| ord < m) {
            return Err(ArithError::NotDivisible { m });
        }
        match direction {
            Direction::Vertical => Ok(BiPoly {
                terms: self
                    .terms
                    .iter()
                    .map(|(&(i, j), c)| ((i, i + j - m), c.clone()))
                    .collect(),
            }),
            Direction::Slope(t0) => {
                if !self.compatible_with(t0) {
                    return Err(ArithError::FieldMismatch);
                }
                let max_j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
                let table = binomial_table(t0, max_j);
                let mut out = BiPoly::zero();
                for (&(i, j), c) in &self.terms {
                    let u_exp = i + j - m;
                    for (k, coef) in table[j as usize].iter().enumerate() {
                        if !coef.is_zero() {
                            out.add_term((u_exp, k as u32), c * coef);
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let lex = |k: &(u32, u32)| (k.1, k.0);
        let (&dk, dc) = d.terms.iter().max_by_key(|(k, _)| lex(k))?;
        let inv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = BiPoly::zero();
        while let Some((&rk, rc)) = rem.terms.iter().max_by_key(|(k, _)| lex(k)) {
            if rk.0 < dk.0 || rk.1 < dk.1 {
                return None;
            }
            let t = BiPoly::monomial(rc * &inv, rk.0 - dk.0, rk.1 - dk.1);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Coefficients of `yʲ` as polynomials in `x`.
    pub fn as_poly_in_y(&self) -> Vec<UniPoly> {
        let dy = self.degree_in_y().map_or(0, |d| d as usize + 1);
        let mut rows: Vec<Vec<Scalar>> = vec![Vec::new(); dy];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, Scalar::zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    pub fn from_poly_in_y(rows: &[UniPoly]) -> BiPoly {
        BiPoly::from_terms(rows.iter().enumerate().flat_map(|(j, r)| {
            r.coeffs()
                .iter()
                .enumerate()
                .map(move |(i, c)| ((i as u32, j as u32), c.clone()))
        }))
    }

    /// Divides by the leading coefficient in lexicographic (y, x) order.
    pub fn normalized(&self) -> BiPoly {
        match self.terms.iter().max_by_key(|(k, _)| (k.1, k.0)) {
            None => BiPoly::zero(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }
}

/// `table[n][k]` is the coefficient of `vᵏ` in `(a + v)ⁿ`.
fn binomial_table(a: &Scalar, n_max: u32) -> Vec<Vec<Scalar>> {
    let mut table: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]];
    for n in 1..=n_max as usize {
        let prev = &table[n - 1];
        let mut row = vec![Scalar::zero(); n + 1];
        for (k, c) in prev.iter().enumerate() {
            row[k] = &row[k] + &(c * a);
            row[k + 1] = &row[k + 1] + c;
        }
        table.push(row);
    }
    table
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(i, j)| (i + j, std::cmp::Reverse(j)));
        for (n, k) in keys.into_iter().enumerate() {
            let c = &self.terms[k];
            let (i, j) = *k;
            let text = match c {
                Scalar::Algebraic(_) => format!("({c})"),
                Scalar::Rational(_) => c.to_string(),
            };
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if mag != "1" || (i == 0 && j == 0) {
                factors.push(mag);
            }
            for (var, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BiPoly {
        crate::arith::parse_poly(s).unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(p("y^2 - x^3").order_at_origin(), Some(2));
        assert_eq!(p("y - x^2").order_at_origin(), Some(1));
        assert_eq!(BiPoly::zero().order_at_origin(), None);
    }

    #[test]
    fn leading_form_examples() {
        assert_eq!(p("y^2 - x^3").leading_form().unwrap(), p("y^2"));
        assert_eq!(p("x*y - x^3 + y^4").leading_form().unwrap(), p("x*y"));
        assert_eq!(p("y^2 - x^2").leading_form().unwrap(), p("y^2 - x^2"));
        assert_eq!(BiPoly::zero().leading_form(), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn translate_examples() {
        let one = Scalar::one();
        let zero = Scalar::zero();
        assert_eq!(p("x").translate(&one, &zero).unwrap(), p("x + 1"));
        assert_eq!(p("y^2 - x^2").translate(&zero, &zero).unwrap(), p("y^2 - x^2"));
        assert_eq!(p("x^2").translate(&-&one, &zero).unwrap(), p("x^2 - 2*x + 1"));
    }

    #[test]
    fn translate_rejects_mixed_fields() {
        let q = |v: &[i64]| v.iter().map(|&c| crate::arith::Rational::from_integer(c.into())).collect::<Vec<_>>();
        let k2 = ExtField::new(&q(&[-2, 0, 1])).unwrap();
        let k3 = ExtField::new(&q(&[-3, 0, 1])).unwrap();
        let a = Scalar::generator(&k2);
        let b = Scalar::generator(&k3);
        assert_eq!(p("x + y").translate(&a, &b), Err(ArithError::FieldMismatch));
    }

    #[test]
    fn blowup_examples() {
        let s0 = Direction::Slope(Scalar::zero());
        let s1 = Direction::Slope(Scalar::one());
        assert_eq!(p("y^2 - x^3").blowup_substitute(2, &s0).unwrap(), p("y^2 - x"));
        assert_eq!(p("y^2 - x^2").blowup_substitute(2, &s1).unwrap(), p("y^2 + 2*y"));
        assert_eq!(p("y^2 - x^4").blowup_substitute(2, &s0).unwrap(), p("y^2 - x^2"));
        assert_eq!(
            p("y^2 - x^3").blowup_substitute(3, &s0),
            Err(ArithError::NotDivisible { m: 3 })
        );
    }

    #[test]
    fn vertical_chart() {
        // x*y*(x - y) at the vertical direction: w z^3 (w - 1) / z^3
        assert_eq!(
            p("x^2*y - x*y^2").blowup_substitute(3, &Direction::Vertical).unwrap(),
            p("x^2 - x")
        );
    }

    #[test]
    fn exact_division() {
        let a = p("y - x");
        let b = p("y + x^2 - 3");
        assert_eq!(a.mul(&b).div_exact(&b), Some(a.clone()));
        assert_eq!(p("y^2 + x").div_exact(&p("y - x")), None);
    }

    #[test]
    fn display_round_trips() {
        for s in ["y^2 - x^3", "x*y - x^3 + y^4", "-1/2*x + 3*y^2", "7"] {
            assert_eq!(p(&p(s).to_string()), p(s));
        }
        assert_eq!(p("y^2 - x^3").to_string(), "y^2 - x^3");
    }
}
