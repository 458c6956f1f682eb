//! Univariate factorization over the rationals and over one simple extension.
//!
//! Over Q: squarefree decomposition, then a big-prime Zassenhaus search:
//! distinct-degree and Cantor–Zassenhaus splitting modulo a prime above twice
//! the Mignotte bound, followed by subset recombination with exact trial
//! division over Z. Over `Q[t]/(p)`: Trager's norm method on top of the
//! rational factorizer.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{qpoly, ArithError, ExtField, Rational, Scalar, UniPoly};

/// Irreducible factorization over the coefficient field of `g`.
///
/// Factors are monic and sorted by degree, then canonically. Over an
/// extension field only linear factors are representable; anything else is
/// reported as [`ArithError::ExtensionTowerUnsupported`].
pub fn univariate_factor(g: &UniPoly) -> Result<Vec<(UniPoly, usize)>, ArithError> {
    univariate_factor_in(g, g.field().as_ref())
}

/// Like [`univariate_factor`], but over `field` even when every coefficient
/// of `g` happens to be rational.
pub fn univariate_factor_in(
    g: &UniPoly,
    field: Option<&Arc<ExtField>>,
) -> Result<Vec<(UniPoly, usize)>, ArithError> {
    if g.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    if let (Some(k), Some(own)) = (field, g.field()) {
        if !Arc::ptr_eq(k, &own) && **k != *own {
            return Err(ArithError::FieldMismatch);
        }
    }
    let mut out = match field {
        None => {
            let q: Vec<Rational> = g
                .coeffs()
                .iter()
                .map(|c| c.as_rational().unwrap().clone())
                .collect();
            factor_rational(&q)
                .into_iter()
                .map(|(f, e)| (UniPoly::new(f.into_iter().map(Scalar::Rational).collect()), e))
                .collect()
        }
        Some(field) => factor_over_extension(g, field)?,
    };
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// Monic irreducible factors over Q with multiplicities.
pub(crate) fn factor_rational(p: &[Rational]) -> Vec<(Vec<Rational>, usize)> {
    let p = qpoly::trim(p.to_vec());
    if qpoly::degree(&p).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let as_uni = UniPoly::new(p.iter().cloned().map(Scalar::Rational).collect());
    let mut out = Vec::new();
    for (part, mult) in as_uni.squarefree_decomposition() {
        let q: Vec<Rational> = part
            .coeffs()
            .iter()
            .map(|c| c.as_rational().unwrap().clone())
            .collect();
        for f in factor_squarefree_rational(&q) {
            out.push((f, mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.len()
            .cmp(&b.0.len())
            .then_with(|| a.0.iter().rev().cmp(b.0.iter().rev()))
    });
    out
}

fn factor_squarefree_rational(p: &[Rational]) -> Vec<Vec<Rational>> {
    if p.len() <= 2 {
        return vec![qpoly::monic(p)];
    }
    let z = primitive_integer(p);
    zassenhaus(z)
        .into_iter()
        .map(|f| qpoly::monic(&f.into_iter().map(Rational::from_integer).collect::<Vec<_>>()))
        .collect()
}

fn primitive_integer(p: &[Rational]) -> Vec<BigInt> {
    let lcm = p
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    primitive_part(&ints)
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn primitive_part(p: &[BigInt]) -> Vec<BigInt> {
    let c = content(p);
    let mut out: Vec<BigInt> = if c.is_zero() {
        p.to_vec()
    } else {
        p.iter().map(|x| x / &c).collect()
    };
    if out.last().is_some_and(|l| l.is_negative()) {
        for x in &mut out {
            *x = -x.clone();
        }
    }
    out
}

fn exact_div_z(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return None;
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        if rem[k].is_zero() {
            continue;
        }
        let (q, r) = rem[k].div_rem(&b[db]);
        if !r.is_zero() {
            return None;
        }
        let shift = k - db;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &q * bj;
        }
        quot[shift] = q;
    }
    if rem.iter().all(Zero::is_zero) {
        Some(quot)
    } else {
        None
    }
}

fn zassenhaus(f: Vec<BigInt>) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let lc = f[n].abs();
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound: BigInt = (BigInt::one() << n) * (norm2.sqrt() + 1) * &lc;
    let target = (bound * 2u32 + 1u32).to_biguint().unwrap();
    let p = choose_prime(&f, target);
    let zp = Zp { p: p.clone() };

    let fp = zp.reduce_z(&f);
    let modular = zp.factor_monic(&zp.monic(&fp));
    if modular.len() <= 1 {
        return vec![f];
    }

    let p_int = BigInt::from_biguint(Sign::Plus, p);
    let half = &p_int >> 1;
    let mut remaining = f;
    let mut pool = modular;
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= pool.len() {
        let lc_now = remaining.last().unwrap().clone();
        for subset in Combinations::new(pool.len(), size) {
            let mut prod = vec![zp.reduce_z(std::slice::from_ref(&lc_now))[0].clone()];
            for &i in &subset {
                prod = zp.mul(&prod, &pool[i]);
            }
            let lifted: Vec<BigInt> = prod
                .iter()
                .map(|c| {
                    let c = BigInt::from_biguint(Sign::Plus, c.clone());
                    if c > half {
                        c - &p_int
                    } else {
                        c
                    }
                })
                .collect();
            let candidate = primitive_part(&lifted);
            if candidate.len() < 2 {
                continue;
            }
            if let Some(q) = exact_div_z(&remaining, &candidate) {
                found.push(candidate);
                remaining = primitive_part(&q);
                let keep: Vec<_> = (0..pool.len()).filter(|i| !subset.contains(i)).collect();
                pool = keep.into_iter().map(|i| pool[i].clone()).collect();
                continue 'outer;
            }
        }
        size += 1;
    }
    if remaining.len() > 1 {
        found.push(remaining);
    }
    found
}

fn choose_prime(f: &[BigInt], start: BigUint) -> BigUint {
    let mut cand = if start.is_even() { start + 1u32 } else { start };
    loop {
        if is_probable_prime(&cand) {
            let zp = Zp { p: cand.clone() };
            let lc_ok = !(f.last().unwrap() % BigInt::from_biguint(Sign::Plus, cand.clone())).is_zero();
            if lc_ok {
                let fp = zp.monic(&zp.reduce_z(f));
                let d = zp.derivative(&fp);
                if zp.gcd(&fp, &d).len() == 1 {
                    return cand;
                }
            }
        }
        cand += 2u32;
    }
}

fn is_probable_prime(n: &BigUint) -> bool {
    const SMALL: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &s in &SMALL {
        let s = BigUint::from(s);
        if n == &s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let twos = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> twos;
    'witness: for &a in &SMALL {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..twos {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Dense polynomials over `Z/p`, coefficients in `[0, p)`, low to high.
struct Zp {
    p: BigUint,
}

type ModPoly = Vec<BigUint>;

impl Zp {
    fn trim(&self, mut v: ModPoly) -> ModPoly {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }

    fn reduce_z(&self, f: &[BigInt]) -> ModPoly {
        let p = BigInt::from_biguint(Sign::Plus, self.p.clone());
        self.trim(f.iter().map(|c| c.mod_floor(&p).to_biguint().unwrap()).collect())
    }

    fn inv(&self, a: &BigUint) -> BigUint {
        a.modpow(&(&self.p - 2u32), &self.p)
    }

    fn monic(&self, a: &ModPoly) -> ModPoly {
        match a.last() {
            None => Vec::new(),
            Some(lc) => {
                let inv = self.inv(lc);
                a.iter().map(|c| c * &inv % &self.p).collect()
            }
        }
    }

    fn sub(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        let n = a.len().max(b.len());
        let zero = BigUint::zero();
        self.trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).unwrap_or(&zero);
                    let y = b.get(i).unwrap_or(&zero);
                    (x + &self.p - y) % &self.p
                })
                .collect(),
        )
    }

    fn mul(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.trim(out.into_iter().map(|c| c % &self.p).collect())
    }

    fn divrem(&self, a: &ModPoly, b: &ModPoly) -> (ModPoly, ModPoly) {
        let db = b.len() - 1;
        let mut rem = a.clone();
        if rem.len() <= db {
            return (Vec::new(), rem);
        }
        let inv = self.inv(&b[db]);
        let mut quot = vec![BigUint::zero(); rem.len() - db];
        for k in (db..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = &rem[k] * &inv % &self.p;
            let shift = k - db;
            for (j, bj) in b.iter().enumerate() {
                let t = &c * bj % &self.p;
                rem[shift + j] = (&rem[shift + j] + &self.p - t) % &self.p;
            }
            quot[shift] = c;
        }
        rem.truncate(db);
        (self.trim(quot), self.trim(rem))
    }

    fn gcd(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_empty() {
            let r = self.divrem(&x, &y).1;
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    fn derivative(&self, a: &ModPoly) -> ModPoly {
        self.trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigUint::from(i) % &self.p)
                .collect(),
        )
    }

    fn powmod(&self, base: &ModPoly, exp: &BigUint, m: &ModPoly) -> ModPoly {
        let mut result: ModPoly = vec![BigUint::one()];
        let mut b = self.divrem(base, m).1;
        for i in 0..exp.bits() {
            if exp.bit(i) {
                result = self.divrem(&self.mul(&result, &b), m).1;
            }
            b = self.divrem(&self.mul(&b, &b), m).1;
        }
        result
    }

    /// Irreducible monic factors of a monic squarefree polynomial.
    fn factor_monic(&self, f: &ModPoly) -> Vec<ModPoly> {
        let x: ModPoly = vec![BigUint::zero(), BigUint::one()];
        let mut rest = f.clone();
        let mut h = self.divrem(&x, &rest).1;
        let mut out = Vec::new();
        let mut d = 0;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f1b3);
        while rest.len() > 2 * (d + 1) {
            d += 1;
            h = self.powmod(&h, &self.p, &rest);
            let g = self.gcd(&rest, &self.sub(&h, &x));
            if g.len() > 1 {
                rest = self.divrem(&rest, &g).0;
                h = self.divrem(&h, &rest).1;
                out.extend(self.equal_degree(g, d, &mut rng));
            }
        }
        if rest.len() > 1 {
            out.push(self.monic(&rest));
        }
        out
    }

    fn equal_degree(&self, g: ModPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
        if g.len() - 1 == d {
            return vec![g];
        }
        let exp = (self.p.pow(d as u32) - 1u32) >> 1;
        loop {
            let a: ModPoly = self.trim(
                (0..g.len() - 1)
                    .map(|_| BigUint::from(rng.gen::<u64>()) % &self.p)
                    .collect(),
            );
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &exp, &g), &vec![BigUint::one()]);
            let c = self.gcd(&g, &b);
            if c.len() > 1 && c.len() < g.len() {
                let other = self.divrem(&g, &c).0;
                let mut out = self.equal_degree(c, d, rng);
                out.extend(self.equal_degree(self.monic(&other), d, rng));
                return out;
            }
        }
    }
}

fn factor_over_extension(g: &UniPoly, field: &Arc<ExtField>) -> Result<Vec<(UniPoly, usize)>, ArithError> {
    let mut out = Vec::new();
    for (part, mult) in g.squarefree_decomposition() {
        if part.degree() == Some(1) {
            out.push((part, mult));
            continue;
        }
        for f in trager_split(&part, field) {
            if f.degree().unwrap_or(0) > 1 {
                return Err(ArithError::ExtensionTowerUnsupported);
            }
            out.push((f, mult));
        }
    }
    Ok(out)
}

/// Irreducible factors of a monic squarefree polynomial over `field`.
fn trager_split(a: &UniPoly, field: &Arc<ExtField>) -> Vec<UniPoly> {
    let alpha = Scalar::generator(field);
    for s in 0i64..64 {
        let shift = &alpha * &Scalar::from_int(s);
        let shifted = a.shift(&(-&shift));
        let norm = norm_polynomial(&shifted, field);
        let dn = qpoly::derivative(&norm);
        if qpoly::gcd(&norm, &dn).len() != 1 {
            continue;
        }
        let factors = factor_rational(&norm);
        if factors.len() == 1 {
            return vec![a.clone()];
        }
        return factors
            .into_iter()
            .map(|(nj, _)| {
                let nj = UniPoly::new(nj.into_iter().map(Scalar::Rational).collect());
                shifted.gcd(&nj).shift(&shift).monic()
            })
            .collect();
    }
    unreachable!("no separating shift found for the norm")
}

/// `Res_t(p(t), a(t, z))` by evaluation at integer points and interpolation.
fn norm_polynomial(a: &UniPoly, field: &Arc<ExtField>) -> Vec<Rational> {
    let deg = field.degree() * a.degree().unwrap_or(0);
    let xs: Vec<Rational> = (0..=deg as i64).map(|i| Rational::from_integer(i.into())).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| field.norm(&a.eval(&Scalar::Rational(x.clone()))))
        .collect();
    qpoly::interpolate(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(v: &[i64]) -> UniPoly {
        UniPoly::from_ints(v)
    }

    fn degrees(fs: &[(UniPoly, usize)]) -> Vec<(usize, usize)> {
        fs.iter().map(|(f, e)| (f.degree().unwrap(), *e)).collect()
    }

    #[test]
    fn linear_pair() {
        // v^2 + 2v
        let fs = univariate_factor(&up(&[0, 2, 1])).unwrap();
        assert_eq!(fs, vec![(up(&[0, 1]), 1), (up(&[2, 1]), 1)]);
    }

    #[test]
    fn irreducible_quadratic() {
        let fs = univariate_factor(&up(&[1, 0, 1])).unwrap();
        assert_eq!(fs, vec![(up(&[1, 0, 1]), 1)]);
    }

    #[test]
    fn repeated_root() {
        let fs = univariate_factor(&up(&[0, 0, 0, 1])).unwrap();
        assert_eq!(fs, vec![(up(&[0, 1]), 3)]);
    }

    #[test]
    fn swinnerton_dyer_like_quartic_stays_irreducible() {
        // x^4 - 10x^2 + 1 splits mod every prime but is irreducible over Q
        let fs = univariate_factor(&up(&[1, 0, -10, 0, 1])).unwrap();
        assert_eq!(degrees(&fs), vec![(4, 1)]);
    }

    #[test]
    fn product_of_quadratics_and_cubic() {
        let p = up(&[1, 0, 1]).mul(&up(&[-2, 0, 1])).mul(&up(&[-2, 0, 0, 1])).mul(&up(&[3, 1]));
        let fs = univariate_factor(&p).unwrap();
        assert_eq!(degrees(&fs), vec![(1, 1), (2, 1), (2, 1), (3, 1)]);
        let prod = fs.iter().fold(UniPoly::constant(Scalar::one()), |acc, (f, e)| acc.mul(&f.pow(*e as u32)));
        assert_eq!(prod, p.monic());
    }

    #[test]
    fn non_monic_integer_input() {
        // (2x+1)(3x^2-5)
        let p = up(&[1, 2]).mul(&up(&[-5, 0, 3]));
        let fs = univariate_factor(&p).unwrap();
        assert_eq!(degrees(&fs), vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn splits_over_its_own_field() {
        let k = ExtField::new(&[-2, 0, 1].map(|c| Rational::from_integer(c.into()))).unwrap();
        // z^2 - 2 = (z - t)(z + t) over Q(√2)
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let fs = factor_over_extension(&p, &k).unwrap();
        assert_eq!(fs.len(), 2);
        for (f, e) in &fs {
            assert_eq!(f.degree(), Some(1));
            assert_eq!(*e, 1);
            let root = -f.coeff(0);
            assert_eq!(&root * &root, Scalar::from_int(2));
        }
    }

    #[test]
    fn second_layer_rejected() {
        let k = ExtField::new(&[-2, 0, 1].map(|c| Rational::from_integer(c.into()))).unwrap();
        let t = Scalar::generator(&k);
        // (z + t)^2 - 3 has no root in Q(√2)
        let p = UniPoly::from_ints(&[-3, 0, 1]).shift(&t);
        assert!(p.field().is_some());
        assert_eq!(univariate_factor(&p), Err(ArithError::ExtensionTowerUnsupported));
    }
}
