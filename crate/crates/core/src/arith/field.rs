//! Scalars: exact rationals, or residues modulo one irreducible polynomial.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{factor, qpoly, ArithError, Rational};

/// A simple algebraic extension `Q[t]/(p(t))` with `p` monic and irreducible.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct ExtField {
    modulus: Vec<Rational>,
}

impl ExtField {
    /// Builds the field, checking that the modulus is irreducible of degree ≥ 2.
    pub fn new(modulus: &[Rational]) -> Result<Arc<Self>, ArithError> {
        let p = qpoly::trim(modulus.to_vec());
        if qpoly::degree(&p).unwrap_or(0) < 2 {
            return Err(ArithError::InvalidModulus(
                "defining polynomial must have degree at least 2".into(),
            ));
        }
        let p = qpoly::monic(&p);
        let factors = factor::factor_rational(&p);
        if factors.len() != 1 || factors[0].1 != 1 {
            return Err(ArithError::InvalidModulus(
                "defining polynomial is not irreducible over the rationals".into(),
            ));
        }
        Ok(Arc::new(ExtField { modulus: p }))
    }

    /// Caller guarantees `modulus` is monic and irreducible.
    pub(crate) fn from_irreducible(modulus: Vec<Rational>) -> Arc<Self> {
        debug_assert!(modulus.last().is_some_and(One::is_one));
        Arc::new(ExtField { modulus })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Coefficients of the defining polynomial, low to high.
    pub fn modulus(&self) -> &[Rational] {
        &self.modulus
    }

    fn reduce(&self, c: Vec<Rational>) -> Vec<Rational> {
        let c = qpoly::trim(c);
        if c.len() < self.modulus.len() {
            return c;
        }
        qpoly::divrem(&c, &self.modulus).1
    }

    fn mul(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        self.reduce(qpoly::mul(a, b))
    }

    fn inverse(&self, a: &[Rational]) -> Option<Vec<Rational>> {
        let (g, s) = qpoly::half_ext_gcd(a, &self.modulus);
        if g.len() == 1 {
            Some(self.reduce(s))
        } else {
            None
        }
    }

    /// Field norm down to the rationals: determinant of multiplication by `a`.
    pub fn norm(&self, a: &Scalar) -> Rational {
        let d = self.degree();
        let coeffs = a.coefficients();
        let mut matrix = vec![vec![Rational::zero(); d]; d];
        let mut basis = vec![Rational::one()];
        for col in 0..d {
            let image = self.mul(&coeffs, &basis);
            for (row, v) in image.into_iter().enumerate() {
                matrix[row][col] = v;
            }
            basis = self.reduce(qpoly::mul(&basis, &[Rational::zero(), Rational::one()]));
        }
        qpoly::determinant(matrix)
    }
}

/// An exact scalar. Constants of an extension are stored as `Rational`, so
/// structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Algebraic(AlgebraicNumber),
}

/// Residue of degree ≥ 1 modulo the field's defining polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    coeffs: Vec<Rational>,
    field: Arc<ExtField>,
}

impl AlgebraicNumber {
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(Rational::from_integer(n.into()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(Rational::new(n.into(), d.into()))
    }

    /// The class of `t` in `field`.
    pub fn generator(field: &Arc<ExtField>) -> Self {
        Self::from_coefficients(field, vec![Rational::zero(), Rational::one()])
    }

    /// The residue of `Σ coeffs[i] tⁱ`, reduced and normalized.
    pub fn from_coefficients(field: &Arc<ExtField>, coeffs: Vec<Rational>) -> Self {
        let c = field.reduce(coeffs);
        match c.len() {
            0 => Scalar::zero(),
            1 => Scalar::Rational(c.into_iter().next().unwrap()),
            _ => Scalar::Algebraic(AlgebraicNumber {
                coeffs: c,
                field: Arc::clone(field),
            }),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Algebraic(_) => None,
        }
    }

    pub fn field(&self) -> Option<&Arc<ExtField>> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Algebraic(a) => Some(&a.field),
        }
    }

    /// Coefficients in the power basis of the field (length 1 for rationals).
    pub fn coefficients(&self) -> Vec<Rational> {
        match self {
            Scalar::Rational(q) if q.is_zero() => Vec::new(),
            Scalar::Rational(q) => vec![q.clone()],
            Scalar::Algebraic(a) => a.coeffs.clone(),
        }
    }

    /// True when both values can live in one field.
    pub fn compatible(&self, other: &Scalar) -> bool {
        match (self.field(), other.field()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    fn joint_field(&self, other: &Scalar) -> Option<Arc<ExtField>> {
        match (self.field(), other.field()) {
            (Some(a), Some(b)) => {
                assert!(a == b, "scalars from different extension fields");
                Some(Arc::clone(a))
            }
            (Some(a), None) | (None, Some(a)) => Some(Arc::clone(a)),
            (None, None) => None,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) if q.is_zero() => None,
            Scalar::Rational(q) => Some(Scalar::Rational(q.recip())),
            Scalar::Algebraic(a) => a
                .field
                .inverse(&a.coeffs)
                .map(|c| Scalar::from_coefficients(&a.field, c)),
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn add_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => {
                let f = self.joint_field(other).expect("algebraic operand");
                Scalar::from_coefficients(&f, qpoly::add(&self.coefficients(), &other.coefficients()))
            }
        }
    }

    fn sub_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => {
                let f = self.joint_field(other).expect("algebraic operand");
                Scalar::from_coefficients(&f, qpoly::sub(&self.coefficients(), &other.coefficients()))
            }
        }
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Rational(q), Scalar::Algebraic(x)) | (Scalar::Algebraic(x), Scalar::Rational(q)) => {
                Scalar::from_coefficients(&x.field, qpoly::scale(&x.coeffs, q))
            }
            (Scalar::Algebraic(x), Scalar::Algebraic(y)) => {
                let f = self.joint_field(other).unwrap();
                Scalar::from_coefficients(&f, f.mul(&x.coeffs, &y.coeffs))
            }
        }
    }

    fn sort_key(&self) -> (usize, Vec<Rational>) {
        let c = self.coefficients();
        (c.len(), c.into_iter().rev().collect())
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order: by representation length, then leading coefficients.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key()).then_with(|| {
            let a = self.field().map(|f| f.modulus.clone());
            let b = other.field().map(|f| f.modulus.clone());
            a.cmp(&b)
        })
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$imp(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Algebraic(a) => Scalar::Algebraic(AlgebraicNumber {
                coeffs: a.coeffs.iter().map(|c| -c).collect(),
                field: Arc::clone(&a.field),
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

pub(crate) fn fmt_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Writes `Σ cᵢ varⁱ` from high to low degree.
pub(crate) fn fmt_univariate(coeffs: &[String], var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let (neg, mag) = match c.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, c.as_str()),
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() {
            write!(f, "{mag}")?;
        } else if mag == "1" {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{mag}*{mono}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => fmt_rational(q, f),
            Scalar::Algebraic(a) => {
                let parts: Vec<String> = a.coeffs.iter().map(|c| Scalar::Rational(c.clone()).to_string()).collect();
                fmt_univariate(&parts, "t", f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&c| Rational::from_integer(c.into())).collect()
    }

    fn sqrt2() -> Arc<ExtField> {
        ExtField::new(&q(&[-2, 0, 1])).unwrap()
    }

    #[test]
    fn generator_squares_to_two() {
        let k = sqrt2();
        let t = Scalar::generator(&k);
        assert_eq!(&t * &t, Scalar::from_int(2));
    }

    #[test]
    fn inverse_in_quadratic_field() {
        let k = sqrt2();
        let t = Scalar::generator(&k);
        let a = &t + &Scalar::one();
        let inv = a.inv().unwrap();
        assert_eq!(&a * &inv, Scalar::one());
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(ExtField::new(&q(&[-1, 0, 1])).is_err());
        assert!(ExtField::new(&q(&[1, 1])).is_err());
    }

    #[test]
    fn norm_of_one_plus_root_two() {
        let k = sqrt2();
        let a = &Scalar::generator(&k) + &Scalar::one();
        // (1+√2)(1-√2) = -1
        assert_eq!(k.norm(&a), Rational::from_integer((-1).into()));
    }

    #[test]
    fn display_forms() {
        let k = sqrt2();
        let a = &Scalar::generator(&k) * &Scalar::from_int(-3) + Scalar::from_ratio(1, 2);
        assert_eq!(a.to_string(), "-3*t + 1/2");
        assert_eq!(Scalar::from_ratio(-4, 6).to_string(), "-2/3");
    }
}
