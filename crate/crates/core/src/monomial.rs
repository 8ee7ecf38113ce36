//! Exponent-vector monomials and the canonical monomial basis of a graded
//! piece.
//!
//! Variables are 1-indexed at every public entry point (`x1..xn`). The
//! canonical order is graded-lex with `x1` the largest variable, listed in
//! strictly decreasing order; every matrix row and column index in the crate
//! derives from it.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exponents: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "a monomial needs at least one variable");
        let degree = exponents.iter().sum();
        Monomial { exponents, degree }
    }

    /// The constant monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial::new(vec![0; n])
    }

    /// `x_i^e` in `n` variables (1-indexed).
    pub fn pure_power(n: usize, i: usize, e: u32) -> Self {
        assert!((1..=n).contains(&i), "variable index {i} out of range 1..={n}");
        let mut exps = vec![0; n];
        exps[i - 1] = e;
        Monomial::new(exps)
    }

    pub fn n_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Exponent of variable `i` (1-indexed).
    pub fn deg_i(&self, i: usize) -> u32 {
        assert!((1..=self.n_vars()).contains(&i), "variable index {i} out of range 1..={}", self.n_vars());
        self.exponents[i - 1]
    }

    /// True iff exactly one exponent is nonzero. The constant monomial is
    /// not a pure power.
    pub fn is_pure_power(&self) -> bool {
        self.exponents.iter().filter(|&&e| e != 0).count() == 1
    }

    /// `self * x_i` (1-indexed).
    pub fn multiply(&self, i: usize) -> Monomial {
        assert!((1..=self.n_vars()).contains(&i), "variable index {i} out of range");
        let mut exps = self.exponents.clone();
        exps[i - 1] += 1;
        Monomial { exponents: exps, degree: self.degree + 1 }
    }

    /// `self / x_i` when `x_i` divides `self` (1-indexed).
    pub fn divide_var(&self, i: usize) -> Option<Monomial> {
        assert!((1..=self.n_vars()).contains(&i), "variable index {i} out of range");
        if self.exponents[i - 1] == 0 {
            return None;
        }
        let mut exps = self.exponents.clone();
        exps[i - 1] -= 1;
        Some(Monomial { exponents: exps, degree: self.degree - 1 })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n_vars(), other.n_vars(), "monomials live in different rings");
        let exps = self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect();
        Monomial { exponents: exps, degree: self.degree + other.degree }
    }

    /// True iff `self` divides `m`.
    pub fn divides(&self, m: &Monomial) -> bool {
        assert_eq!(self.n_vars(), m.n_vars(), "monomials live in different rings");
        self.exponents.iter().zip(&m.exponents).all(|(a, b)| a <= b)
    }

    /// Applies a variable relabeling: variable `i` (0-indexed) is sent to
    /// variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Monomial {
        assert_eq!(perm.len(), self.n_vars());
        let mut exps = vec![0; self.n_vars()];
        for (i, &e) in self.exponents.iter().enumerate() {
            exps[perm[i]] = e;
        }
        Monomial { exponents: exps, degree: self.degree }
    }

    /// Parses the rendering produced by `Display` (`x1^2*x3`, or `1`), also
    /// accepting `y` as the variable letter.
    pub fn parse(s: &str, n: usize) -> Result<Monomial> {
        let s = s.trim();
        let mut exps = vec![0u32; n];
        if s == "1" {
            return Ok(Monomial::new(exps));
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let rest = factor
                .strip_prefix('x')
                .or_else(|| factor.strip_prefix('y'))
                .ok_or_else(|| Error::Parse(format!("bad monomial factor `{factor}`")))?;
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e),
                None => (rest, "1"),
            };
            let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("bad variable index in `{factor}`")))?;
            let exp: u32 = exp.parse().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
            if !(1..=n).contains(&idx) {
                return Err(Error::Parse(format!("variable x{idx} outside x1..x{n}")));
            }
            exps[idx - 1] += exp;
        }
        Ok(Monomial::new(exps))
    }
}

impl Ord for Monomial {
    /// Canonical listing order: lower degree first, then within a degree the
    /// graded-lex larger monomial first (`x1^d` is the smallest key).
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Parses without a known variable count; the ring is sized to the
    /// largest index that appears.
    fn from_str(s: &str) -> Result<Monomial> {
        let n = s
            .split('*')
            .filter_map(|f| {
                let f = f.trim();
                let rest = f.strip_prefix('x').or_else(|| f.strip_prefix('y'))?;
                rest.split('^').next()?.parse::<usize>().ok()
            })
            .max()
            .unwrap_or(1);
        Monomial::parse(s, n)
    }
}

/// All degree-`d` monomials in `n` variables, in canonical order.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    n: usize,
    d: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn new(n: usize, d: u32) -> Self {
        assert!(n >= 1, "need at least one variable");
        let mut monomials = Vec::with_capacity(binomial(n as u64 + d as u64 - 1, d as u64) as usize);
        let mut exps = vec![0u32; n];
        fill(&mut exps, 0, d, &mut monomials);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        DegreeBasis { n, d, monomials, index }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, idx: usize) -> &Monomial {
        &self.monomials[idx]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Monomial> {
        self.monomials.iter()
    }

    /// `{ m in basis | deg_i(m) = k }`, in canonical order.
    pub fn degree_slice(&self, i: usize, k: u32) -> Vec<Monomial> {
        self.monomials.iter().filter(|m| m.deg_i(i) == k).cloned().collect()
    }

    /// The basis minus the `n` pure powers.
    pub fn punctured(&self) -> Vec<Monomial> {
        self.monomials.iter().filter(|m| !m.is_pure_power()).cloned().collect()
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

pub fn enumerate_basis(n: usize, d: u32) -> DegreeBasis {
    DegreeBasis::new(n, d)
}

fn fill(exps: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == exps.len() {
        exps[pos] = remaining;
        out.push(Monomial::new(exps.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        exps[pos] = e;
        fill(exps, pos + 1, remaining - e, out);
    }
    exps[pos] = 0;
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
