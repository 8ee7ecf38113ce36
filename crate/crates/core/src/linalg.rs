//! Exact dense linear algebra over the rationals.
//!
//! Rank and determinant run fraction-free (Bareiss) elimination on integer
//! matrices obtained by clearing row denominators. A rank computed modulo a
//! 32-bit prime is used only as a certificate: modular rank never exceeds the
//! rational rank, so a modular rank equal to `min(rows, cols)` settles the
//! question and anything else falls through to the exact path.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{invalid, Result};

pub(crate) const PRIME: u64 = 4_294_967_291;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return invalid("ragged rows");
        }
        Ok(RationalMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
        )
    }

    /// Row-major integer entries.
    pub fn from_integers(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        RationalMatrix { rows, cols, entries: entries.iter().map(|&x| BigRational::from_integer(x.into())).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, x)| acc + a * BigRational::from_integer(x.clone()))
            })
            .collect()
    }

    /// Integer rows obtained by scaling each row by the lcm of its
    /// denominators. Rank and kernel are unchanged.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    fn small_integer_entries(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(|x| if x.is_integer() { x.numer().to_i64() } else { None }).collect()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if let Some(ints) = self.small_integer_entries() {
            return integer_rank(self.rows, self.cols, &ints);
        }
        bareiss_rank(self.integer_rows(), self.cols)
    }

    /// Basis of the right kernel. Each vector has integer entries with
    /// content 1 and a positive first nonzero entry; one vector per free
    /// column of the reduced echelon form, in increasing column order.
    pub fn nullspace_basis(&self) -> Vec<Vec<BigInt>> {
        nullspace_of_integer_rows(self.integer_rows(), self.cols)
    }

    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return invalid(format!("determinant of a non-square {}x{} matrix", self.rows, self.cols));
        }
        if self.rows == 0 {
            return Ok(BigRational::one());
        }
        let mut scale = BigInt::one();
        let rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &l;
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        Ok(BigRational::new(bareiss_determinant(rows), scale))
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Rank of an integer matrix given row-major.
pub fn integer_rank(rows: usize, cols: usize, entries: &[i64]) -> usize {
    assert_eq!(entries.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let modular = rank_mod_p(rows, cols, entries);
    if modular == rows.min(cols) {
        return modular;
    }
    if let Some(r) = small_bareiss_rank(rows, cols, entries) {
        return r;
    }
    let big: Vec<Vec<BigInt>> = entries.chunks(cols).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    bareiss_rank(big, cols)
}

/// Normalized kernel basis of an integer matrix given row-major.
pub fn integer_nullspace(rows: usize, cols: usize, entries: &[i64]) -> Vec<Vec<BigInt>> {
    assert_eq!(entries.len(), rows * cols);
    if cols == 0 {
        return Vec::new();
    }
    if rows > 0 && rank_mod_p(rows, cols, entries) == cols {
        return Vec::new();
    }
    let big: Vec<Vec<BigInt>> = if rows == 0 {
        Vec::new()
    } else {
        entries.chunks(cols).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    };
    nullspace_of_integer_rows(big, cols)
}

fn to_mod(x: i64) -> u64 {
    x.rem_euclid(PRIME as i64) as u64
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    a %= PRIME;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % PRIME;
        }
        a = a * a % PRIME;
        e >>= 1;
    }
    r
}

/// Rank modulo `PRIME`; a lower bound for the rational rank.
pub fn rank_mod_p(rows: usize, cols: usize, entries: &[i64]) -> usize {
    let mut a: Vec<u64> = entries.iter().map(|&x| to_mod(x)).collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i * cols + c] != 0) else { continue };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = inv_mod(a[r * cols + c]);
        for i in r + 1..rows {
            let f = a[i * cols + c];
            if f == 0 {
                continue;
            }
            let f = f * inv % PRIME;
            for j in c..cols {
                let sub = f * a[r * cols + j] % PRIME;
                a[i * cols + j] = (a[i * cols + j] + PRIME - sub) % PRIME;
            }
        }
        r += 1;
    }
    r
}

/// Incremental echelon basis modulo `PRIME`, with stack-style undo, used by
/// subset searches that grow and shrink a set one vector at a time. Each
/// stored row remembers how it combines the pushed vectors, so a rejected
/// vector comes back with its dependency.
#[derive(Clone, Debug, Default)]
pub struct ModularEchelon {
    basis: Vec<(usize, Vec<u64>, Vec<u64>)>,
}

impl ModularEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Pushes `v` and returns `true` when it is independent modulo the prime.
    pub fn push(&mut self, v: &[i64]) -> bool {
        self.try_push(v).is_none()
    }

    /// Pushes `v` if it is independent modulo the prime. Otherwise returns
    /// `c` of length `len() + 1` with `c[len()] = 1` and
    /// `sum c_i v_i = 0 (mod PRIME)` over the pushed vectors followed by `v`.
    pub fn try_push(&mut self, v: &[i64]) -> Option<Vec<u64>> {
        let k = self.basis.len();
        let mut w: Vec<u64> = v.iter().map(|&x| to_mod(x)).collect();
        let mut t = vec![0u64; k + 1];
        t[k] = 1;
        for (piv, b, cb) in &self.basis {
            let f = w[*piv];
            if f == 0 {
                continue;
            }
            for (x, y) in w.iter_mut().zip(b) {
                if *y != 0 {
                    *x = (*x + PRIME - f * y % PRIME) % PRIME;
                }
            }
            for (x, y) in t.iter_mut().zip(cb) {
                if *y != 0 {
                    *x = (*x + PRIME - f * y % PRIME) % PRIME;
                }
            }
        }
        match w.iter().position(|&x| x != 0) {
            Some(piv) => {
                let inv = inv_mod(w[piv]);
                for x in w.iter_mut().chain(t.iter_mut()) {
                    *x = *x * inv % PRIME;
                }
                self.basis.push((piv, w, t));
                None
            }
            None => Some(t),
        }
    }

    pub fn pop(&mut self) {
        self.basis.pop();
    }
}

/// Bareiss rank in `i128`; `None` on overflow.
fn small_bareiss_rank(rows: usize, cols: usize, entries: &[i64]) -> Option<usize> {
    let mut a: Vec<Vec<i128>> = entries.chunks(cols).map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut r = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(p, r);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let f = row[c];
            for j in c + 1..cols {
                let v = pivot_row[c].checked_mul(row[j])?.checked_sub(f.checked_mul(pivot_row[j])?)?;
                row[j] = v / prev;
            }
            row[c] = 0;
        }
        prev = a[r][c];
        r += 1;
    }
    Some(r)
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, r);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let v = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn nullspace_of_integer_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigRational>> =
        rows.into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
    let nrows = a.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    let mut pivot_iter = 0;
    for free in 0..cols {
        if pivot_iter < pivots.len() && pivots[pivot_iter] == free {
            pivot_iter += 1;
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row_idx, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[row_idx][free].clone();
        }
        basis.push(normalize_integer_vector(&v));
    }
    basis
}

/// Scales a nonzero rational vector to integers with content 1 and a
/// positive first nonzero entry.
pub fn normalize_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    normalize_content(ints)
}

pub fn normalize_content(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let negate = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in ints.iter_mut() {
        *x = &*x / &g;
        if negate {
            *x = -&*x;
        }
    }
    ints
}

/// `T_{k,m}`: the `(k+1) x (m+1)` banded matrix with entry `(i, j)` equal to
/// `C(m-k, j-i)` (zero outside `0 <= j-i <= m-k`).
pub fn toeplitz(k: u32, m: u32) -> Result<RationalMatrix> {
    if k > m {
        return invalid(format!("toeplitz needs k <= m, got k={k}, m={m}"));
    }
    let band = (m - k) as u64;
    let rows = k as usize + 1;
    let cols = m as usize + 1;
    let mut entries = vec![0i64; rows * cols];
    for i in 0..rows {
        for j in i..cols {
            let off = (j - i) as u64;
            if off <= band {
                entries[i * cols + j] = crate::monomial::binomial(band, off) as i64;
            }
        }
    }
    Ok(RationalMatrix::from_integers(rows, cols, &entries))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorCheck {
    pub all_nonzero: bool,
    pub minors_checked: usize,
    /// First vanishing maximal minor in lexicographic column order
    /// (1-indexed columns).
    pub witness: Option<Vec<usize>>,
}

pub fn all_maximal_minors_nonzero(m: &RationalMatrix) -> Result<MinorCheck> {
    if m.rows() > m.cols() {
        return invalid(format!("needs rows <= cols, got {}x{}", m.rows(), m.cols()));
    }
    let k = m.rows();
    let mut checked = 0;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        checked += 1;
        let det = m.select_columns(&subset).determinant()?;
        if det.is_zero() {
            return Ok(MinorCheck {
                all_nonzero: false,
                minors_checked: checked,
                witness: Some(subset.iter().map(|c| c + 1).collect()),
            });
        }
        if !next_combination(&mut subset, m.cols()) {
            break;
        }
    }
    Ok(MinorCheck { all_nonzero: true, minors_checked: checked, witness: None })
}

/// Advances `subset` (sorted, distinct, values below `n`) to the next
/// combination in lexicographic order.
pub(crate) fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for i in (0..k).rev() {
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
