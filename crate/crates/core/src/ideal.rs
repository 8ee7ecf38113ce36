//! Equigenerated artinian monomial ideals and the WLP decision procedure.
//!
//! `S/I` has the WLP iff `l = x1 + ... + xn` is a Lefschetz element, so the
//! check reduces to exact ranks of the 0/1 matrices of `x l` on the cobasis.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::form::RationalForm;
use crate::linalg::{integer_nullspace, integer_rank, RationalMatrix};
use crate::monomial::{binomial, enumerate_basis, Monomial};

/// Artinian monomial ideal generated in degree `d`. Always contains the pure
/// powers; generators are deduplicated and kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    n: usize,
    d: u32,
    generators: Vec<Monomial>,
    members: HashSet<Monomial>,
}

impl MonomialIdeal {
    pub fn new(n: usize, d: u32, generators: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        if n == 0 || d == 0 {
            return invalid(format!("ideal needs n >= 1 and d >= 1 (got n={n}, d={d})"));
        }
        let mut members = HashSet::new();
        for g in generators {
            if g.n_vars() != n || g.degree() != d {
                return invalid(format!("generator {g} is not a degree-{d} monomial in {n} variables"));
            }
            members.insert(g);
        }
        for i in 1..=n {
            let p = Monomial::pure_power(n, i, d);
            if !members.contains(&p) {
                return invalid(format!("ideal is not artinian: {p} missing"));
            }
        }
        let mut generators: Vec<Monomial> = members.iter().cloned().collect();
        generators.sort();
        Ok(MonomialIdeal { n, d, generators, members })
    }

    /// The pure powers together with `extra`.
    pub fn with_pure_powers(n: usize, d: u32, extra: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let pure = (1..=n).map(|i| Monomial::pure_power(n, i, d));
        Self::new(n, d, pure.chain(extra))
    }

    pub fn pure_powers(n: usize, d: u32) -> Result<Self> {
        Self::with_pure_powers(n, d, [])
    }

    pub fn all_monomials(n: usize, d: u32) -> Result<Self> {
        Self::new(n, d, enumerate_basis(n, d).monomials().to_vec())
    }

    /// The ideal whose degree-`d` cobasis is exactly `cobasis`.
    pub fn from_cobasis(n: usize, d: u32, cobasis: &[Monomial]) -> Result<Self> {
        let keep: HashSet<&Monomial> = cobasis.iter().collect();
        if let Some(p) = keep.iter().find(|m| m.is_pure_power()) {
            return invalid(format!("pure power {p} cannot lie in the cobasis"));
        }
        let basis = enumerate_basis(n, d);
        if let Some(m) = cobasis.iter().find(|m| basis.index_of(m).is_none()) {
            return invalid(format!("{m} is not a degree-{d} monomial in {n} variables"));
        }
        Self::new(n, d, basis.iter().filter(|m| !keep.contains(m)).cloned())
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    /// Ideal membership of a monomial.
    pub fn contains(&self, m: &Monomial) -> bool {
        match m.degree().cmp(&self.d) {
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => self.members.contains(m),
            std::cmp::Ordering::Greater => self.generators.iter().any(|g| g.divides(m)),
        }
    }

    /// Largest degree in which `S/I` can be nonzero.
    pub fn socle_bound(&self) -> u32 {
        self.n as u32 * (self.d - 1)
    }

    /// Cobases of degrees `0..=top`. Above `d` a monomial is outside `I`
    /// iff all of its divisors one degree lower are.
    fn cobasis_chain(&self, top: u32) -> Vec<Vec<Monomial>> {
        let mut chain = Vec::with_capacity(top as usize + 1);
        for e in 0..=top {
            let level: Vec<Monomial> = if e < self.d {
                enumerate_basis(self.n, e).monomials().to_vec()
            } else if e == self.d {
                enumerate_basis(self.n, e).iter().filter(|m| !self.members.contains(m)).cloned().collect()
            } else {
                let prev: &Vec<Monomial> = &chain[e as usize - 1];
                let prev_set: HashSet<&Monomial> = prev.iter().collect();
                let mut next: Vec<Monomial> = prev
                    .iter()
                    .flat_map(|m| (1..=self.n).map(move |i| m.multiply(i)))
                    .collect::<HashSet<_>>()
                    .into_iter()
                    .filter(|m| (1..=self.n).all(|i| m.divide_var(i).is_none_or(|q| prev_set.contains(&q))))
                    .collect();
                next.sort();
                next
            };
            chain.push(level);
        }
        chain
    }

    /// Monomial basis of `(S/I)_e` in canonical order.
    pub fn cobasis(&self, e: u32) -> Vec<Monomial> {
        if e > self.socle_bound() {
            return Vec::new();
        }
        self.cobasis_chain(e).pop().unwrap_or_default()
    }

    pub fn hilbert_function(&self, e: u32) -> usize {
        if e < self.d {
            binomial(self.n as u64 + e as u64 - 1, e as u64) as usize
        } else if e == self.d {
            binomial(self.n as u64 + e as u64 - 1, e as u64) as usize - self.generators.len()
        } else {
            self.cobasis(e).len()
        }
    }

    /// Hilbert function in degrees `0..=socle_bound()+1`.
    pub fn hilbert_series(&self) -> Vec<usize> {
        self.cobasis_chain(self.socle_bound() + 1).iter().map(Vec::len).collect()
    }

    /// 0/1 matrix of `x l : (S/I)_e -> (S/I)_{e+1}` (rows: target cobasis).
    pub fn mult_map_matrix(&self, e: u32) -> RationalMatrix {
        let src = self.cobasis(e);
        let tgt = self.cobasis(e + 1);
        let entries = mult_entries(self.n, &src, &tgt);
        RationalMatrix::from_integers(tgt.len(), src.len(), &entries)
    }

    /// Matrix of `l o : (I^-1)_d -> R_{d-1}`; columns are the degree-`d`
    /// cobasis, rows the full degree-`d-1` basis.
    pub fn dual_diff_matrix(&self) -> RationalMatrix {
        let (rows, cols, entries) = self.dual_diff_entries();
        RationalMatrix::from_integers(rows, cols, &entries)
    }

    fn dual_diff_entries(&self) -> (usize, usize, Vec<i64>) {
        let rows = enumerate_basis(self.n, self.d - 1);
        let cols = self.cobasis(self.d);
        let mut entries = vec![0i64; rows.len() * cols.len()];
        for (c, m) in cols.iter().enumerate() {
            for i in 1..=self.n {
                if let Some(q) = m.divide_var(i) {
                    let r = rows.index_of(&q).expect("divisor lies in the basis");
                    entries[r * cols.len() + c] += m.deg_i(i) as i64;
                }
            }
        }
        (rows.len(), cols.len(), entries)
    }

    /// True iff `x l : (S/I)_{d-1} -> (S/I)_d` is not surjective.
    pub fn fails_surjectivity_at_dminus1(&self) -> bool {
        let src = self.cobasis(self.d - 1);
        let tgt = self.cobasis(self.d);
        let entries = mult_entries(self.n, &src, &tgt);
        integer_rank(tgt.len(), src.len(), &entries) < tgt.len()
    }

    /// Normalized basis of the forms `f` in `(I^-1)_d` with `l o f = 0`.
    pub fn dual_kernel_forms(&self) -> Vec<RationalForm> {
        let cols = self.cobasis(self.d);
        let (r, c, entries) = self.dual_diff_entries();
        integer_nullspace(r, c, &entries)
            .into_iter()
            .map(|v| RationalForm::from_vector(self.n, self.d, &cols, &v))
            .collect()
    }

    pub fn wlp_check(&self) -> WlpReport {
        let chain = self.cobasis_chain(self.socle_bound() + 1);
        let socle_degree = chain.iter().rposition(|c| !c.is_empty()).unwrap_or(0) as u32;
        let start = self.d - 1;
        let trivial = (0..start.min(socle_degree)).map(|j| {
            let h = chain[j as usize].len();
            let t = chain[j as usize + 1].len();
            DegreeRecord::new(j, h, t, h, false)
        });
        let computed: Vec<DegreeRecord> = (start..=socle_degree)
            .into_par_iter()
            .map(|j| {
                let src = &chain[j as usize];
                let tgt = &chain[j as usize + 1];
                let entries = mult_entries(self.n, src, tgt);
                let rank = integer_rank(tgt.len(), src.len(), &entries);
                DegreeRecord::new(j, src.len(), tgt.len(), rank, true)
            })
            .collect();
        let records: Vec<DegreeRecord> = trivial.chain(computed).collect();
        let verdict = records.iter().all(|r| r.maximal);
        WlpReport { n: self.n, d: self.d, verdict, socle_degree, records }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("ideal serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: IdealJson =
            serde_json::from_value(v.clone()).map_err(|e| crate::Error::Parse(format!("ideal JSON: {e}")))?;
        let gens = raw.generators.iter().map(|s| Monomial::parse(s, raw.n)).collect::<Result<Vec<_>>>()?;
        Self::new(raw.n, raw.d, gens)
    }
}

fn mult_entries(n: usize, src: &[Monomial], tgt: &[Monomial]) -> Vec<i64> {
    let index: std::collections::HashMap<&Monomial, usize> = tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut entries = vec![0i64; tgt.len() * src.len()];
    for (c, m) in src.iter().enumerate() {
        for i in 1..=n {
            if let Some(&r) = index.get(&m.multiply(i)) {
                entries[r * src.len() + c] = 1;
            }
        }
    }
    entries
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    n: usize,
    d: u32,
    generators: Vec<String>,
}

impl Serialize for MonomialIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IdealJson { n: self.n, d: self.d, generators: self.generators.iter().map(|g| g.to_string()).collect() }
            .serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureMode {
    None,
    Injectivity,
    Surjectivity,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRecord {
    pub j: u32,
    pub dim_source: usize,
    pub dim_target: usize,
    pub rank: usize,
    pub maximal: bool,
    pub failure_mode: FailureMode,
    /// False for degrees below `d - 1`, where `(S/I)_j = S_j` and the map is
    /// injective without computation.
    pub computed: bool,
}

impl DegreeRecord {
    fn new(j: u32, dim_source: usize, dim_target: usize, rank: usize, computed: bool) -> Self {
        let maximal = rank == dim_source.min(dim_target);
        let failure_mode = match (maximal, rank < dim_source, rank < dim_target) {
            (true, _, _) => FailureMode::None,
            (false, true, true) => FailureMode::Both,
            (false, true, false) => FailureMode::Injectivity,
            (false, false, _) => FailureMode::Surjectivity,
        };
        DegreeRecord { j, dim_source, dim_target, rank, maximal, failure_mode, computed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WlpReport {
    pub n: usize,
    pub d: u32,
    pub verdict: bool,
    pub socle_degree: u32,
    pub records: Vec<DegreeRecord>,
}

impl WlpReport {
    pub fn first_failure(&self) -> Option<&DegreeRecord> {
        self.records.iter().find(|r| !r.maximal)
    }

    pub fn record(&self, j: u32) -> Option<&DegreeRecord> {
        self.records.iter().find(|r| r.j == j)
    }
}
