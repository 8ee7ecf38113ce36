//! Exact arithmetic in `Z[xi]`, `xi` a primitive `d`-th root of unity.
//!
//! Elements are stored as integer polynomials of degree below `phi(d)`,
//! reduced modulo the `d`-th cyclotomic polynomial, so two elements are equal
//! iff their coefficient vectors are equal.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeff::Coefficient;

/// The `d`-th cyclotomic polynomial, lowest coefficient first, obtained by
/// dividing `x^d - 1` by `Phi_e` for every proper divisor `e` of `d`.
pub fn cyclotomic_poly(d: u32) -> Vec<BigInt> {
    assert!(d >= 1, "cyclotomic polynomial order must be positive");
    let mut num: Vec<BigInt> = vec![BigInt::zero(); d as usize + 1];
    num[0] = BigInt::from(-1);
    num[d as usize] = BigInt::one();
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        num = exact_div_monic(&num, &cyclotomic_poly(e));
    }
    num
}

/// Exact division by a monic polynomial; panics on a nonzero remainder.
fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|x| x.is_zero()), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(d: u32) -> usize {
    (1..=d).filter(|&k| num_integer::gcd(k, d) == 1).count()
}

struct Tables {
    phi: usize,
    /// Non-leading coefficients of the monic modulus.
    modulus: Vec<i64>,
    /// Reduced representatives of `xi^0 .. xi^(d-1)`.
    powers: Vec<Vec<i64>>,
}

thread_local! {
    static TABLES: RefCell<HashMap<u32, Rc<Tables>>> = RefCell::new(HashMap::new());
}

fn tables(d: u32) -> Rc<Tables> {
    TABLES.with(|t| {
        t.borrow_mut()
            .entry(d)
            .or_insert_with(|| {
                let poly = cyclotomic_poly(d);
                let phi = poly.len() - 1;
                let modulus: Vec<i64> = poly[..phi].iter().map(|c| c.to_i64().unwrap()).collect();
                let mut powers = Vec::with_capacity(d as usize);
                let mut cur = vec![0i64; phi];
                cur[0] = 1;
                for _ in 0..d {
                    powers.push(cur.clone());
                    // multiply by x, then reduce the overflow term
                    let top = cur[phi - 1];
                    for i in (1..phi).rev() {
                        cur[i] = cur[i - 1];
                    }
                    cur[0] = 0;
                    if top != 0 {
                        for i in 0..phi {
                            cur[i] -= top * modulus[i];
                        }
                    }
                }
                Rc::new(Tables { phi, modulus, powers })
            })
            .clone()
    })
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycloInt {
    d: u32,
    coeffs: Vec<BigInt>,
}

impl CycloInt {
    pub fn zero(d: u32) -> Self {
        let phi = tables(d).phi;
        CycloInt { d, coeffs: vec![BigInt::zero(); phi] }
    }

    pub fn from_integer(d: u32, k: BigInt) -> Self {
        let mut z = Self::zero(d);
        z.coeffs[0] = k;
        z
    }

    pub fn one(d: u32) -> Self {
        Self::from_integer(d, BigInt::one())
    }

    /// Canonical representative of `xi^j`, `j` taken modulo `d`.
    pub fn root_power(d: u32, j: i64) -> Self {
        let t = tables(d);
        let k = j.rem_euclid(d as i64) as usize;
        CycloInt { d, coeffs: t.powers[k].iter().map(|&c| BigInt::from(c)).collect() }
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The integer this element equals, if it lies in `Z`.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &CycloInt) {
        assert_eq!(self.d, other.d, "mixing cyclotomic rings of different orders");
    }

    pub fn add(&self, other: &CycloInt) -> CycloInt {
        self.check(other);
        CycloInt { d: self.d, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &CycloInt) -> CycloInt {
        self.check(other);
        CycloInt { d: self.d, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> CycloInt {
        CycloInt { d: self.d, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul_int(&self, k: &BigInt) -> CycloInt {
        CycloInt { d: self.d, coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, other: &CycloInt) -> CycloInt {
        self.check(other);
        let t = tables(self.d);
        let phi = t.phi;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        for k in (phi..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (i, &m) in t.modulus.iter().enumerate() {
                if m != 0 {
                    prod[k - phi + i] -= &c * m;
                }
            }
        }
        prod.truncate(phi);
        CycloInt { d: self.d, coeffs: prod }
    }

    /// Image under the Galois map `xi -> xi^(-1)` (complex conjugation).
    pub fn conjugate(&self) -> CycloInt {
        let t = tables(self.d);
        let mut out = vec![BigInt::zero(); t.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &t.powers[(self.d as usize - i) % self.d as usize];
            for (o, &pc) in out.iter_mut().zip(p) {
                if pc != 0 {
                    *o += c * pc;
                }
            }
        }
        CycloInt { d: self.d, coeffs: out }
    }

    pub fn pow(&self, e: u32) -> CycloInt {
        let mut acc = CycloInt::one(self.d);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Floating-point image under `xi = exp(2 pi i / d)`. Sanity checks only.
    pub fn to_complex(&self) -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI / self.d as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            (re + c * (theta * k as f64).cos(), im + c * (theta * k as f64).sin())
        })
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            wrote = true;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "xi")?;
                    } else {
                        write!(f, "xi^{k}")?;
                    }
                }
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Coefficient for CycloInt {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.d
    }

    fn zero(ctx: u32) -> Self {
        CycloInt::zero(ctx)
    }

    fn one(ctx: u32) -> Self {
        CycloInt::one(ctx)
    }

    fn from_int(k: &BigInt, ctx: u32) -> Self {
        CycloInt::from_integer(ctx, k.clone())
    }

    fn is_zero(&self) -> bool {
        CycloInt::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        CycloInt::add(self, other)
    }

    fn sub(&self, other: &Self) -> Self {
        CycloInt::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        CycloInt::mul(self, other)
    }

    fn neg(&self) -> Self {
        CycloInt::neg(self)
    }

    fn mul_int(&self, k: &BigInt) -> Self {
        CycloInt::mul_int(self, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
        for d in 1..=30 {
            assert_eq!(cyclotomic_poly(d).len() - 1, euler_phi(d));
        }
    }

    #[test]
    fn root_power_examples() {
        assert_eq!(CycloInt::root_power(5, 0), CycloInt::one(5));
        assert_eq!(CycloInt::root_power(4, 1).coeffs(), ints(&[0, 1]).as_slice());
        assert_eq!(CycloInt::root_power(3, 2).coeffs(), ints(&[-1, -1]).as_slice());
        assert_eq!(CycloInt::root_power(7, -1), CycloInt::root_power(7, 6));
    }

    #[test]
    fn add_mul_examples() {
        let xi = CycloInt::root_power(4, 1);
        assert!(xi.add(&xi.conjugate()).is_zero());
        let s = CycloInt::one(3).add(&CycloInt::root_power(3, 1)).add(&CycloInt::root_power(3, 2));
        assert!(s.is_zero());
        for d in 2..=12 {
            assert_eq!(CycloInt::root_power(d, 1).mul(&CycloInt::root_power(d, d as i64 - 1)), CycloInt::one(d));
        }
        assert!(!CycloInt::root_power(3, 1).sub(&CycloInt::root_power(3, 2)).is_zero());
        assert!(!CycloInt::one(9).is_zero());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(CycloInt::root_power(5, 1).conjugate(), CycloInt::root_power(5, 4));
        let d = 7;
        let real = CycloInt::one(d).add(&CycloInt::root_power(d, 1)).add(&CycloInt::root_power(d, 6));
        assert_eq!(real.conjugate(), real);
    }

    #[test]
    #[should_panic]
    fn mismatched_orders_panic() {
        CycloInt::one(3).add(&CycloInt::one(4));
    }

    #[test]
    fn roots_of_unity_identities() {
        for d in 2..=24u32 {
            let xi = CycloInt::root_power(d, 1);
            assert_eq!(xi.pow(d), CycloInt::one(d));
            let total = (0..d).fold(CycloInt::zero(d), |acc, j| acc.add(&CycloInt::root_power(d, j as i64)));
            assert!(total.is_zero(), "d={d}");
        }
    }

    fn random_element(rng: &mut ChaCha8Rng, d: u32) -> CycloInt {
        (0..d).fold(CycloInt::zero(d), |acc, j| {
            acc.add(&CycloInt::root_power(d, j as i64).mul_int(&BigInt::from(rng.gen_range(-3..=3))))
        })
    }

    #[test]
    fn ring_axioms_and_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 3..=12u32 {
            for _ in 0..20 {
                let (a, b, c) = (random_element(&mut rng, d), random_element(&mut rng, d), random_element(&mut rng, d));
                assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                assert_eq!(a.mul(&b), b.mul(&a));
                assert_eq!(a.mul(&b).conjugate(), a.conjugate().mul(&b.conjugate()));
                assert_eq!(a.conjugate().conjugate(), a);
            }
        }
    }

    #[test]
    fn complex_embedding_sanity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 2..=12u32 {
            for _ in 0..10 {
                let coeffs: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
                let exact = coeffs.iter().enumerate().fold(CycloInt::zero(d), |acc, (j, &c)| {
                    acc.add(&CycloInt::root_power(d, j as i64).mul_int(&BigInt::from(c)))
                });
                let theta = 2.0 * std::f64::consts::PI / d as f64;
                let (re, im) = coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, &c)| {
                    (re + c as f64 * (theta * j as f64).cos(), im + c as f64 * (theta * j as f64).sin())
                });
                let (ere, eim) = exact.to_complex();
                assert!((re - ere).abs() < 1e-9 && (im - eim).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(CycloInt::root_power(3, 2).to_string(), "-1 - xi");
        assert_eq!(CycloInt::zero(5).to_string(), "0");
        assert_eq!(CycloInt::root_power(5, 3).mul_int(&BigInt::from(2)).to_string(), "2*xi^3");
    }
}
