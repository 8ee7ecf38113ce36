//! Homogeneous forms in the dual ring and the calculus of `l = x1 + ... + xn`
//! acting on them by differentiation.
//!
//! `x_i` acts on the dual ring as `d/dy_i`, so `l o f` is the sum of all first
//! partials of `f`. Forms are sparse maps from monomials to nonzero
//! coefficients; the key set is exactly `supp(f)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::monomial::{binomial, Monomial};

#[derive(Clone, PartialEq, Debug)]
pub struct PolyForm<C: Coefficient> {
    n: usize,
    degree: u32,
    ctx: C::Ctx,
    terms: BTreeMap<Monomial, C>,
}

pub type RationalForm = PolyForm<BigRational>;

impl<C: Coefficient> PolyForm<C> {
    pub fn zero(n: usize, degree: u32, ctx: C::Ctx) -> Self {
        PolyForm { n, degree, ctx, terms: BTreeMap::new() }
    }

    /// Builds a form from `(monomial, coefficient)` pairs, summing repeated
    /// monomials and dropping zero coefficients.
    /// Panics if a monomial has the wrong variable count or degree.
    pub fn from_terms(n: usize, degree: u32, ctx: C::Ctx, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut f = Self::zero(n, degree, ctx);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let ctx = c.ctx();
        let (n, d) = (m.n_vars(), m.degree());
        Self::from_terms(n, d, ctx, [(m, c)])
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        assert_eq!(m.n_vars(), self.n, "monomial {m} has the wrong variable count");
        assert_eq!(m.degree(), self.degree, "monomial {m} breaks homogeneity");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn ctx(&self) -> C::Ctx {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// `supp(f)` in canonical order.
    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().cloned().collect()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    fn same_ring(&self, other: &Self) {
        assert_eq!(self.n, other.n, "forms in different rings");
        assert_eq!(self.ctx, other.ctx, "forms over different coefficient rings");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        self.map_coefficients(|c| c.mul(k))
    }

    pub fn map_coefficients(&self, f: impl Fn(&C) -> C) -> Self {
        PolyForm::from_terms(self.n, self.degree, self.ctx, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1.mul(c2);
                match acc.get_mut(&m) {
                    Some(x) => *x = x.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        PolyForm::from_terms(self.n, self.degree + other.degree, self.ctx, acc)
    }

    pub fn mul_linear(&self, l: &LinearForm<C>) -> Self {
        assert_eq!(l.n_vars(), self.n, "linear form in a different ring");
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (i, li) in l.coefficients().iter().enumerate() {
                if li.is_zero() {
                    continue;
                }
                let mm = m.multiply(i + 1);
                let cc = c.mul(li);
                match acc.get_mut(&mm) {
                    Some(x) => *x = x.add(&cc),
                    None => {
                        acc.insert(mm, cc);
                    }
                }
            }
        }
        PolyForm::from_terms(self.n, self.degree + 1, self.ctx, acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = PolyForm::one(self.n, self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn one(n: usize, ctx: C::Ctx) -> Self {
        PolyForm::monomial(Monomial::one(n), C::one(ctx))
    }

    /// Partial derivative by `y_i` (1-indexed).
    pub fn partial(&self, i: usize) -> Self {
        assert!(self.degree >= 1, "differentiating a constant form");
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.deg_i(i);
            m.divide_var(i).map(|mm| (mm, c.mul_int(&BigInt::from(e))))
        });
        PolyForm::from_terms(self.n, self.degree - 1, self.ctx, terms)
    }

    /// `(sum over i not in skip of x_i) o f`.
    fn diff_by_sum(&self, skip: Option<usize>) -> Self {
        assert!(self.degree >= 1, "differentiating a constant form");
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in &self.terms {
            for i in 1..=self.n {
                if Some(i) == skip {
                    continue;
                }
                let e = m.deg_i(i);
                if let Some(mm) = m.divide_var(i) {
                    let cc = c.mul_int(&BigInt::from(e));
                    match acc.get_mut(&mm) {
                        Some(x) => *x = x.add(&cc),
                        None => {
                            acc.insert(mm, cc);
                        }
                    }
                }
            }
        }
        PolyForm::from_terms(self.n, self.degree - 1, self.ctx, acc)
    }

    /// `l o f` with `l = x1 + ... + xn`.
    /// Panics if `f` has degree 0.
    pub fn diff_by_ell(&self) -> Self {
        self.diff_by_sum(None)
    }

    /// `l^c o f` by iterated differentiation.
    /// Panics if `c` exceeds the degree.
    pub fn diff_by_ell_power(&self, c: u32) -> Self {
        assert!(c <= self.degree, "l^{c} applied to a degree-{} form", self.degree);
        let mut g = self.clone();
        for _ in 0..c {
            g = g.diff_by_ell();
        }
        debug_assert!(self.n < 2 || g == self.ell_power_by_slices(c, 1));
        g
    }

    /// Coefficient polynomial of `y_j^t` in `f` (with `y_j` removed), kept as
    /// a form of degree `d - t` in the same ring.
    pub fn slice_polynomial(&self, j: usize, t: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.deg_i(j) == t).map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e[j - 1] = 0;
            (Monomial::new(e), c.clone())
        });
        PolyForm::from_terms(self.n, self.degree - t, self.ctx, terms)
    }

    /// `l^c o f` through the decomposition `f = sum_t y_j^t g_t`:
    ///
    /// `sum_{k=0}^{d-c} sum_{i=0}^{c} (k+c-i)!/k! * C(c,i) * y_j^k * (l'^i o g_{k+c-i})`
    ///
    /// where `l' = l - x_j`. Agrees with [`Self::diff_by_ell_power`].
    pub fn ell_power_by_slices(&self, c: u32, j: usize) -> Self {
        assert!(c <= self.degree);
        let d = self.degree;
        let slices: Vec<PolyForm<C>> = (0..=d).map(|t| self.slice_polynomial(j, t)).collect();
        let mut out = PolyForm::zero(self.n, d - c, self.ctx);
        for k in 0..=d - c {
            for i in 0..=c {
                let t = k + c - i;
                let g = &slices[t as usize];
                if g.is_zero() || i > g.degree {
                    continue;
                }
                let mut h = g.clone();
                for _ in 0..i {
                    h = h.diff_by_sum(Some(j));
                }
                if h.is_zero() {
                    continue;
                }
                let weight = falling_ratio(t, k) * BigInt::from(binomial(c as u64, i as u64));
                let shifted = h.terms.iter().map(|(m, coef)| {
                    let mut e = m.exponents().to_vec();
                    e[j - 1] += k;
                    (Monomial::new(e), coef.mul_int(&weight))
                });
                out = out.add(&PolyForm::from_terms(self.n, d - c, self.ctx, shifted));
            }
        }
        out
    }

    /// Smallest `e >= 1` with `l^e o f = 0`, together with `a = d - e`
    /// (`a = -1` means no bound of the `l^(d-a)` family applies).
    /// Panics if `f` is zero.
    pub fn min_annihilator_exponent(&self) -> Annihilator {
        assert!(!self.is_zero(), "annihilator of the zero form");
        let mut g = self.clone();
        let mut e = 0;
        while !g.is_zero() {
            g = if g.degree == 0 { PolyForm::zero(self.n, 0, self.ctx) } else { g.diff_by_ell() };
            e += 1;
        }
        Annihilator { exponent: e, a: self.degree as i64 - e as i64 }
    }

    /// Applies the variable relabeling `y_i -> y_{perm[i]}` (0-indexed).
    pub fn permute(&self, perm: &[usize]) -> Self {
        PolyForm::from_terms(
            self.n,
            self.degree,
            self.ctx,
            self.terms.iter().map(|(m, c)| (m.permute(perm), c.clone())),
        )
    }

    /// True iff `f(y_1 + 1, ..., y_n + 1) = f(y_1, ..., y_n)` identically.
    /// In characteristic zero this is equivalent to `l o f = 0`.
    pub fn depends_only_on_differences(&self) -> bool {
        let mut shifted: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut partial: Vec<(Vec<u32>, BigInt)> = vec![(vec![0; self.n], BigInt::one())];
            for (i, &e) in m.exponents().iter().enumerate() {
                let mut next = Vec::with_capacity(partial.len() * (e as usize + 1));
                for (exps, w) in &partial {
                    for t in 0..=e {
                        let mut ex = exps.clone();
                        ex[i] = t;
                        next.push((ex, w * BigInt::from(binomial(e as u64, t as u64))));
                    }
                }
                partial = next;
            }
            for (exps, w) in partial {
                let cc = c.mul_int(&w);
                match shifted.get_mut(&exps) {
                    Some(x) => *x = x.add(&cc),
                    None => {
                        shifted.insert(exps, cc);
                    }
                }
            }
        }
        shifted.retain(|_, c| !c.is_zero());
        let invariant =
            shifted.len() == self.terms.len() && self.terms.iter().all(|(m, c)| shifted.get(m.exponents()) == Some(c));
        debug_assert_eq!(invariant, self.degree == 0 || self.diff_by_ell().is_zero());
        invariant
    }

    /// Slice cardinalities, per-variable maximal degrees and the support
    /// bounds that apply to forms killed by a power of `l`.
    /// Panics if `f` is zero.
    pub fn support_census(&self) -> SupportCensus {
        assert!(!self.is_zero(), "support census of the zero form");
        let d = self.degree;
        let n = self.n;
        let size = self.support_size();
        let max_degrees: Vec<u32> = (1..=n).map(|i| self.terms.keys().map(|m| m.deg_i(i)).max().unwrap_or(0)).collect();
        let slices: Vec<Vec<SliceStat>> = (1..=n)
            .map(|i| {
                (0..=d)
                    .map(|k| {
                        let members: Vec<&C> =
                            self.terms.iter().filter(|(m, _)| m.deg_i(i) == k).map(|(_, c)| c).collect();
                        let sum = members.iter().fold(C::zero(self.ctx), |acc, c| acc.add(c));
                        SliceStat { count: members.len(), coefficient_sum: sum.to_string(), sum_is_zero: sum.is_zero() }
                    })
                    .collect()
            })
            .collect();
        let annihilator = if d == 0 { Annihilator { exponent: 1, a: -1 } } else { self.min_annihilator_exponent() };
        let killed = annihilator.exponent == 1 && d >= 1;
        let a_plus_two_bound = (annihilator.a >= 0).then(|| size as i64 >= annihilator.a + 2);
        let level_bound = (killed && n == 3).then(|| {
            (0..n).all(|i| {
                let a = max_degrees[i];
                (0..=a).all(|k| slices[i][k as usize].count as i64 > d as i64 - a as i64)
            })
        });
        let slice_sums_vanish = killed.then(|| {
            (1..=n).all(|i| {
                let pure = Monomial::pure_power(n, i, d);
                self.terms.contains_key(&pure) || (0..d).all(|k| slices[i - 1][k as usize].sum_is_zero)
            })
        });
        let slices_nonempty =
            killed.then(|| (0..n).all(|i| (0..=max_degrees[i]).all(|k| slices[i][k as usize].count > 0)));
        let max_bound = (killed && n >= 4).then(|| {
            max_degrees.iter().filter(|&&a| a != 0).all(|&a| size as u64 >= (a as u64 + 1) * (d as u64 - a as u64 + 1))
        });
        SupportCensus {
            degree: d,
            support_size: size,
            max_degrees,
            slices,
            annihilated_by_ell: killed,
            annihilator,
            a_plus_two_bound,
            level_bound,
            slice_sums_vanish,
            slices_nonempty,
            max_bound,
        }
    }
}

/// `t! / k!` for `k <= t`.
fn falling_ratio(t: u32, k: u32) -> BigInt {
    (k + 1..=t).fold(BigInt::one(), |acc, x| acc * BigInt::from(x))
}

impl PolyForm<BigRational> {
    /// Form with coefficient `v[i]` on `monomials[i]`.
    pub fn from_vector(n: usize, degree: u32, monomials: &[Monomial], v: &[BigInt]) -> Self {
        assert_eq!(monomials.len(), v.len());
        PolyForm::from_terms(
            n,
            degree,
            (),
            monomials.iter().cloned().zip(v.iter().map(|x| BigRational::from_integer(x.clone()))),
        )
    }

    /// Integer coefficients with content 1 and a positive coefficient on the
    /// first monomial in canonical order.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let vals: Vec<BigRational> = self.terms.values().cloned().collect();
        let ints = crate::linalg::normalize_integer_vector(&vals);
        PolyForm::from_terms(
            self.n,
            self.degree,
            (),
            self.terms.keys().cloned().zip(ints.into_iter().map(BigRational::from_integer)),
        )
    }

    /// Integer coefficient list in canonical order (for normalized forms).
    pub fn integer_terms(&self) -> Vec<(Monomial, BigInt)> {
        self.terms
            .iter()
            .map(|(m, c)| {
                assert!(c.is_integer(), "integer_terms on a non-integral form");
                (m.clone(), c.numer().clone())
            })
            .collect()
    }

    /// Parses an expression such as `(y2-y3)^2*(y1-y3)(2y1-y2-y3)`. Products
    /// may be written by juxtaposition; `x` and `y` name the same variables.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let mut p = Parser { s: s.as_bytes(), pos: 0, n };
        let poly = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("unexpected `{}` at offset {}", &s[p.pos..], p.pos)));
        }
        let poly: BTreeMap<Vec<u32>, BigRational> = poly.into_iter().filter(|(_, c)| !Zero::is_zero(c)).collect();
        let degrees: std::collections::BTreeSet<u32> = poly.keys().map(|e| e.iter().sum()).collect();
        if degrees.len() > 1 {
            return Err(Error::Parse("expression is not homogeneous".into()));
        }
        let degree = degrees.into_iter().next().unwrap_or(0);
        Ok(PolyForm::from_terms(n, degree, (), poly.into_iter().map(|(e, c)| (Monomial::new(e), c))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Annihilator {
    pub exponent: u32,
    pub a: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceStat {
    pub count: usize,
    pub coefficient_sum: String,
    pub sum_is_zero: bool,
}

/// Support statistics of a nonzero form. A `None` flag means the bound's
/// hypothesis does not hold for this form (the bound is vacuous).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportCensus {
    pub degree: u32,
    pub support_size: usize,
    /// `a_i = max deg_i` over the support.
    pub max_degrees: Vec<u32>,
    /// `slices[i-1][k]` describes `L^k_{i,d} ∩ supp(f)`.
    pub slices: Vec<Vec<SliceStat>>,
    pub annihilated_by_ell: bool,
    pub annihilator: Annihilator,
    /// `|supp| >= a + 2` when `l^(d-a) o f = 0`, `a >= 0`.
    pub a_plus_two_bound: Option<bool>,
    /// Three variables: every slice `k <= a_i` has at least `d - a_i + 1` terms.
    pub level_bound: Option<bool>,
    /// Slice coefficient sums vanish for every `i` with `y_i^d` outside the support.
    pub slice_sums_vanish: Option<bool>,
    /// Slices `0..=a_i` all meet the support.
    pub slices_nonempty: Option<bool>,
    /// Four or more variables: `|supp| >= (a_i+1)(d-a_i+1)` whenever `a_i != 0`.
    pub max_bound: Option<bool>,
}

impl SupportCensus {
    /// False iff some applicable bound is violated.
    pub fn all_bounds_hold(&self) -> bool {
        [self.a_plus_two_bound, self.level_bound, self.slice_sums_vanish, self.slices_nonempty, self.max_bound]
            .iter()
            .all(|b| b.unwrap_or(true))
    }
}

impl<C: Coefficient> fmt::Display for PolyForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coefficient> Serialize for PolyForm<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            monomial: String,
            coefficient: String,
        }
        let terms: Vec<Term> =
            self.terms.iter().map(|(m, c)| Term { monomial: m.to_string(), coefficient: c.to_string() }).collect();
        let mut s = serializer.serialize_struct("PolyForm", 2)?;
        s.serialize_field("degree", &self.degree)?;
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct LinearForm<C: Coefficient> {
    coefficients: Vec<C>,
}

impl<C: Coefficient> LinearForm<C> {
    pub fn new(coefficients: Vec<C>) -> Self {
        assert!(!coefficients.is_empty(), "linear form needs at least one variable");
        let ctx = coefficients[0].ctx();
        assert!(coefficients.iter().all(|c| c.ctx() == ctx), "mixed coefficient rings");
        LinearForm { coefficients }
    }

    pub fn n_vars(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[C] {
        &self.coefficients
    }

    pub fn ctx(&self) -> C::Ctx {
        self.coefficients[0].ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }

    pub fn to_form(&self) -> PolyForm<C> {
        let n = self.n_vars();
        PolyForm::from_terms(
            n,
            1,
            self.ctx(),
            self.coefficients.iter().enumerate().map(|(i, c)| (Monomial::pure_power(n, i + 1, 1), c.clone())),
        )
    }
}

impl LinearForm<BigRational> {
    pub fn from_ints(coefficients: &[i64]) -> Self {
        LinearForm::new(coefficients.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// `y_i - y_j` (1-indexed).
    pub fn difference(n: usize, i: usize, j: usize) -> Self {
        let mut c = vec![0i64; n];
        c[i - 1] += 1;
        c[j - 1] -= 1;
        Self::from_ints(&c)
    }
}

/// Exact expansion of a product of linear forms; the empty product is the
/// constant form `1`.
pub fn expand_product<C: Coefficient>(n: usize, ctx: C::Ctx, factors: &[LinearForm<C>]) -> PolyForm<C> {
    let mut acc = PolyForm::one(n, ctx);
    for l in factors {
        assert_eq!(l.n_vars(), n, "factor in a different ring");
        assert_eq!(l.ctx(), ctx, "factor over a different coefficient ring");
        acc = acc.mul_linear(l);
    }
    acc
}

/// `(y1 - y2)(y1 - y3)(y2 - y3)^(d-2)` in three variables.
pub fn three_variable_witness(d: u32) -> RationalForm {
    assert!(d >= 2);
    let mut factors = vec![LinearForm::difference(3, 1, 2), LinearForm::difference(3, 1, 3)];
    factors.extend(std::iter::repeat_n(LinearForm::difference(3, 2, 3), d as usize - 2));
    expand_product(3, (), &factors)
}

/// `(y1 - y2)(y3 - y4)^(d-1)` in `n >= 4` variables.
pub fn four_variable_witness(n: usize, d: u32) -> RationalForm {
    assert!(n >= 4 && d >= 1);
    let mut factors = vec![LinearForm::difference(n, 1, 2)];
    factors.extend(std::iter::repeat_n(LinearForm::difference(n, 3, 4), d as usize - 1));
    expand_product(n, (), &factors)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    n: usize,
}

type RawPoly = BTreeMap<Vec<u32>, BigRational>;

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RawPoly> {
        let mut acc = RawPoly::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            for (e, c) in t {
                let c = if sign < 0 { -c } else { c };
                *acc.entry(e).or_insert_with(<BigRational as Zero>::zero) += c;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RawPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = raw_mul(&acc, &f);
                }
                Some(c) if c == b'(' || c == b'x' || c == b'y' || c.is_ascii_digit() => {
                    let f = self.factor()?;
                    acc = raw_mul(&acc, &f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RawPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.uint()?;
            let mut acc = RawPoly::from([(vec![0; self.n], <BigRational as One>::one())]);
            for _ in 0..e {
                acc = raw_mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse(format!("expected an integer at offset {start}")))
    }

    fn atom(&mut self) -> Result<RawPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Parse(format!("missing `)` at offset {}", self.pos)));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') | Some(b'y') => {
                self.pos += 1;
                let idx = self.uint()? as usize;
                if !(1..=self.n).contains(&idx) {
                    return Err(Error::Parse(format!("variable index {idx} outside 1..={}", self.n)));
                }
                let mut e = vec![0; self.n];
                e[idx - 1] = 1;
                Ok(RawPoly::from([(e, <BigRational as One>::one())]))
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.uint()?;
                Ok(RawPoly::from([(vec![0; self.n], BigRational::from_integer(k.into()))]))
            }
            other => Err(Error::Parse(format!(
                "unexpected {} at offset {}",
                other.map_or("end of input".to_string(), |c| format!("`{}`", c as char)),
                self.pos
            ))),
        }
    }
}

fn raw_mul(a: &RawPoly, b: &RawPoly) -> RawPoly {
    let mut out = RawPoly::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(<BigRational as Zero>::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !Zero::is_zero(c));
    out
}

/// Integer-coefficient view for rational forms whose coefficients are
/// integral; used by support-size style reporting.
pub fn coefficient_as_i64(c: &BigRational) -> Option<i64> {
    if c.is_integer() {
        c.numer().to_i64()
    } else {
        None
    }
}

/// Content of a list of integers (gcd of absolute values).
pub fn content(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).abs()
}
