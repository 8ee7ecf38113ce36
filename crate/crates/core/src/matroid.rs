//! The linear matroid on `M'_d` (non-pure-power monomials of degree `d`)
//! given by the vectors `l o m`. Its circuits are the minimal supports of
//! `l`-annihilated forms, so its girth is `nu(n, d)`.
//!
//! Subset searches grow independent sets in increasing index order with a
//! modular echelon basis. Modular independence certifies rational
//! independence; every modular dependency is re-checked exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::form::RationalForm;
use crate::linalg::{integer_nullspace, integer_rank, ModularEchelon};
use crate::monomial::{binomial, enumerate_basis, Monomial};

#[derive(Clone, Debug)]
pub struct SurMatroid {
    n: usize,
    d: u32,
    ground: Vec<Monomial>,
    rows: usize,
    image_vectors: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u64(*g as u64),
            Girth::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// A minimal dependent set with its normalized dependency.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub indices: Vec<usize>,
    pub support: Vec<Monomial>,
    pub form: RationalForm,
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            size: usize,
            support: Vec<String>,
            form: &'a RationalForm,
        }
        Out {
            size: self.indices.len(),
            support: self.support.iter().map(|m| m.to_string()).collect(),
            form: &self.form,
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimBounds {
    pub rank: usize,
    pub ground_size: usize,
    /// `h_{d-1}(R)`, the dimension of the target of `l o`.
    pub h_dminus1: usize,
    pub dim_delta: i64,
    pub dim_delta_bound_holds: bool,
    pub girth: Girth,
    /// `|ground| - girth - 1`; absent when the girth is infinite.
    pub dim_delta_star: Option<i64>,
    /// `|S_d| - n - girth - 1`.
    pub dim_delta_star_formula: Option<i64>,
    pub dim_delta_star_identity: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Census {
    pub n: usize,
    pub d: u32,
    pub girth: Girth,
    pub rank: usize,
    pub ground_size: usize,
    pub max_size: usize,
    pub circuits: Vec<Circuit>,
}

impl Census {
    /// Circuit count per size, ascending.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.circuits {
            *h.entry(c.indices.len()).or_insert(0) += 1;
        }
        h
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(["size", "count"]).expect("in-memory write");
        for (size, count) in self.histogram() {
            w.write_record([size.to_string(), count.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

impl SurMatroid {
    pub fn new(n: usize, d: u32) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidArgument(format!("matroid needs n >= 1 and d >= 1 (got n={n}, d={d})")));
        }
        let ground = enumerate_basis(n, d).punctured();
        let target = enumerate_basis(n, d - 1);
        let image_vectors = ground
            .iter()
            .map(|m| {
                let mut v = vec![0i64; target.len()];
                for i in 1..=n {
                    if let Some(q) = m.divide_var(i) {
                        v[target.index_of(&q).expect("divisor in basis")] = m.deg_i(i) as i64;
                    }
                }
                v
            })
            .collect();
        Ok(SurMatroid { n, d, ground, rows: target.len(), image_vectors })
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn ground(&self) -> &[Monomial] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// `l o m` in the degree-`(d-1)` basis.
    pub fn image_vector(&self, i: usize) -> &[i64] {
        &self.image_vectors[i]
    }

    fn column_entries(&self, s: &[usize]) -> Vec<i64> {
        let mut entries = vec![0i64; self.rows * s.len()];
        for (c, &i) in s.iter().enumerate() {
            for (r, &x) in self.image_vectors[i].iter().enumerate() {
                entries[r * s.len() + c] = x;
            }
        }
        entries
    }

    fn exact_rank(&self, s: &[usize]) -> usize {
        integer_rank(self.rows, s.len(), &self.column_entries(s))
    }

    /// Exact independence test. Panics on an out-of-range index.
    pub fn is_independent(&self, s: &[usize]) -> bool {
        assert!(s.iter().all(|&i| i < self.len()), "ground index out of range");
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == s.len() && self.exact_rank(&sorted) == s.len()
    }

    pub fn subset_rank(&self, s: &[usize]) -> usize {
        self.exact_rank(s)
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.ground.iter().position(|g| g == m)
    }

    pub fn rank(&self) -> usize {
        let all: Vec<usize> = (0..self.len()).collect();
        self.exact_rank(&all)
    }

    /// Normalized dependency of a circuit, as a form on its support.
    fn circuit_form(&self, s: &[usize]) -> RationalForm {
        let kernel = integer_nullspace(self.rows, s.len(), &self.column_entries(s));
        assert_eq!(kernel.len(), 1, "circuit with a kernel of dimension {}", kernel.len());
        let monos: Vec<Monomial> = s.iter().map(|&i| self.ground[i].clone()).collect();
        RationalForm::from_vector(self.n, self.d, &monos, &kernel[0]).normalized()
    }

    /// Decides whether `s` (an independent prefix plus one element, flagged
    /// dependent modulo the prime with combination `t`) is a circuit.
    fn classify_dependency(&self, s: &[usize], t: &[u64]) -> Result<bool> {
        if self.exact_rank(s) == s.len() {
            return Err(Error::Refused(format!(
                "modular screening reported a spurious dependency on {s:?}; exact search required"
            )));
        }
        let mut rest = Vec::with_capacity(s.len() - 1);
        for (pos, _) in t.iter().enumerate().filter(|(_, &c)| c == 0) {
            rest.clear();
            rest.extend(s.iter().enumerate().filter(|&(p, _)| p != pos).map(|(_, &x)| x));
            if self.exact_rank(&rest) < rest.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All circuits of size `<= cap` whose smallest element is `first`. The
    /// cap may shrink while searching (girth mode).
    fn circuits_from(&self, first: usize, cap: &AtomicUsize, shrink: bool) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut ech = ModularEchelon::new();
        let mut stack = Vec::new();
        if cap.load(Ordering::Relaxed) == 0 {
            return Ok(out);
        }
        assert!(ech.push(&self.image_vectors[first]), "zero image vector");
        stack.push(first);
        self.dfs(first + 1, &mut stack, &mut ech, cap, shrink, &mut out)?;
        Ok(out)
    }

    fn dfs(
        &self,
        start: usize,
        stack: &mut Vec<usize>,
        ech: &mut ModularEchelon,
        cap: &AtomicUsize,
        shrink: bool,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        for e in start..self.len() {
            if stack.len() + 1 > cap.load(Ordering::Relaxed) {
                return Ok(());
            }
            match ech.try_push(&self.image_vectors[e]) {
                None => {
                    stack.push(e);
                    if stack.len() < cap.load(Ordering::Relaxed) {
                        self.dfs(e + 1, stack, ech, cap, shrink, out)?;
                    }
                    stack.pop();
                    ech.pop();
                }
                Some(t) => {
                    stack.push(e);
                    if self.classify_dependency(stack, &t)? {
                        out.push(stack.clone());
                        if shrink {
                            cap.fetch_min(stack.len(), Ordering::Relaxed);
                        }
                    }
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    fn search(&self, cap: usize, shrink: bool) -> Result<Vec<Vec<usize>>> {
        let cap = AtomicUsize::new(cap);
        let parts: Vec<Vec<Vec<usize>>> = (0..self.len())
            .into_par_iter()
            .map(|first| self.circuits_from(first, &cap, shrink))
            .collect::<Result<_>>()?;
        let limit = cap.load(Ordering::Relaxed);
        let mut all: Vec<Vec<usize>> = parts.into_iter().flatten().filter(|c| c.len() <= limit).collect();
        all.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Ok(all)
    }

    /// All circuits of size `<= smax`, ordered by size then indices.
    pub fn circuits_up_to(&self, smax: usize) -> Result<Vec<Circuit>> {
        Ok(self
            .search(smax.min(self.len()), false)?
            .into_iter()
            .map(|indices| {
                let support = indices.iter().map(|&i| self.ground[i].clone()).collect();
                let form = self.circuit_form(&indices);
                Circuit { indices, support, form }
            })
            .collect())
    }

    /// Girth together with the least circuit of that size.
    pub fn girth_with_witness(&self) -> Result<(Girth, Option<Circuit>)> {
        if self.rank() == self.len() {
            return Ok((Girth::Infinite, None));
        }
        let found = self.search(self.len(), true)?;
        let Some(best) = found.into_iter().next() else {
            return Ok((Girth::Infinite, None));
        };
        let support = best.iter().map(|&i| self.ground[i].clone()).collect();
        let form = self.circuit_form(&best);
        Ok((Girth::Finite(best.len()), Some(Circuit { indices: best, support, form })))
    }

    pub fn girth(&self) -> Result<Girth> {
        Ok(self.girth_with_witness()?.0)
    }

    /// Confirms that no set of size `g - 1` is dependent by checking every
    /// such subset exactly; only sensible for small ground sets.
    pub fn all_independent_below(&self, g: usize) -> bool {
        if g <= 1 {
            return true;
        }
        let k = g - 1;
        if k > self.len() {
            return self.rank() == self.len();
        }
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            if self.exact_rank(&subset) < k {
                return false;
            }
            if !crate::linalg::next_combination(&mut subset, self.len()) {
                return true;
            }
        }
    }

    pub fn dim_bounds(&self) -> Result<DimBounds> {
        let rank = self.rank();
        let girth = self.girth()?;
        let dim_delta = rank as i64 - 1;
        let total = binomial(self.n as u64 + self.d as u64 - 1, self.d as u64) as i64;
        let (star, formula) = match girth {
            Girth::Finite(g) => (Some(self.len() as i64 - g as i64 - 1), Some(total - self.n as i64 - g as i64 - 1)),
            Girth::Infinite => (None, None),
        };
        Ok(DimBounds {
            rank,
            ground_size: self.len(),
            h_dminus1: self.rows,
            dim_delta,
            dim_delta_bound_holds: dim_delta < self.rows as i64,
            girth,
            dim_delta_star: star,
            dim_delta_star_formula: formula,
            dim_delta_star_identity: star.zip(formula).map(|(a, b)| a == b),
        })
    }

    /// Builds the complex generated by complements of circuits and checks
    /// that it is the Alexander dual of the independence complex.
    pub fn alexander_dual_check(&self) -> Result<bool> {
        const LIMIT: usize = 12;
        let m = self.len();
        if m > LIMIT {
            return Err(Error::Refused(format!("Alexander duality check needs |ground| <= {LIMIT}, got {m}")));
        }
        let full: u32 = (1u32 << m) - 1;
        let independent: Vec<bool> = (0..=full)
            .map(|mask| {
                let s: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
                self.exact_rank(&s) == s.len()
            })
            .collect();
        let circuit_masks: Vec<u32> =
            self.search(m, false)?.iter().map(|c| c.iter().fold(0u32, |acc, &i| acc | 1 << i)).collect();
        let hereditary = (0..=full)
            .all(|mask| !independent[mask as usize] || (0..m).all(|i| independent[(mask & !(1 << i)) as usize]));
        Ok(hereditary
            && (0..=full).all(|s| {
                let in_star = circuit_masks.iter().any(|&c| c & s == 0);
                let dual = !independent[(full & !s) as usize];
                in_star == dual
            }))
    }

    pub fn census(&self, smax: usize) -> Result<Census> {
        Ok(Census {
            n: self.n,
            d: self.d,
            girth: self.girth()?,
            rank: self.rank(),
            ground_size: self.len(),
            max_size: smax,
            circuits: self.circuits_up_to(smax)?,
        })
    }
}

/// Closed form of `nu(n, d)`: `3d - 3` (odd `d`) or `3d - 2` (even `d`) in
/// three variables, `2d` from four on.
pub fn nu_closed_form(n: usize, d: u32) -> Option<usize> {
    let d = d as usize;
    match n {
        3 if d >= 2 => Some(if d % 2 == 1 { 3 * d - 3 } else { 3 * d - 2 }),
        n if n >= 4 && d >= 2 => Some(2 * d),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuReport {
    pub n: usize,
    pub d: u32,
    pub girth: Girth,
    pub expected: Option<usize>,
    pub matches: Option<bool>,
    pub witness: Option<Circuit>,
    pub edge_case: Option<String>,
}

/// Girth of the surjectivity matroid with a witness circuit, compared with
/// the closed form.
pub fn nu_report(n: usize, d: u32) -> Result<NuReport> {
    let (girth, witness) = SurMatroid::new(n, d)?.girth_with_witness()?;
    let expected = nu_closed_form(n, d);
    let edge_case = (n == 3 && d == 2).then(|| {
        "paper-edge-case: the closed form gives nu(3,2) = 4, but l o is injective on {y1y2, y1y3, y2y3}, \
         so the matroid is free and no ideal fails surjectivity"
            .to_string()
    });
    let matches = if edge_case.is_some() { None } else { expected.map(|e| girth == Girth::Finite(e)) };
    Ok(NuReport { n, d, girth, expected, matches, witness, edge_case })
}

/// `nu(n, d)` straight from its definition: the least `H(d)` over all
/// artinian ideals generated in degree `d` whose `x l` map into degree `d`
/// is not surjective. Exponential in `|M'_d|`.
pub fn nu_by_ideal_enumeration(n: usize, d: u32) -> Result<Girth> {
    let ground = enumerate_basis(n, d).punctured();
    if ground.len() > 16 {
        return Err(Error::Refused(format!("ideal enumeration over 2^{} subsets", ground.len())));
    }
    let mut best = Girth::Infinite;
    for mask in 0u32..(1 << ground.len()) {
        let cobasis: Vec<Monomial> =
            ground.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, m)| m.clone()).collect();
        if Girth::Finite(cobasis.len()) >= best {
            continue;
        }
        let ideal = crate::ideal::MonomialIdeal::from_cobasis(n, d, &cobasis)?;
        if ideal.fails_surjectivity_at_dminus1() {
            best = Girth::Finite(cobasis.len());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{four_variable_witness, three_variable_witness};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn indices_of(m: &SurMatroid, support: &[Monomial]) -> Vec<usize> {
        let mut v: Vec<usize> = support.iter().map(|x| m.ground().iter().position(|g| g == x).unwrap()).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn ground_and_images() {
        let m = SurMatroid::new(3, 5).unwrap();
        assert_eq!(m.len(), 18);
        for (i, g) in m.ground().iter().enumerate() {
            let nz = m.image_vector(i).iter().filter(|&&x| x != 0).count();
            assert_eq!(nz, g.exponents().iter().filter(|&&e| e > 0).count());
            assert!(!g.is_pure_power());
        }
    }

    #[test]
    fn independence_examples() {
        let m = SurMatroid::new(4, 2).unwrap();
        assert!(m.is_independent(&[]));
        let w = indices_of(&m, &four_variable_witness(4, 2).support());
        assert_eq!(w.len(), 4);
        assert!(!m.is_independent(&w));
        assert!((0..m.len()).all(|i| m.is_independent(&[i])));
    }

    #[test]
    fn girth_small_cases() {
        assert_eq!(SurMatroid::new(3, 3).unwrap().girth().unwrap(), Girth::Finite(6));
        assert_eq!(SurMatroid::new(3, 4).unwrap().girth().unwrap(), Girth::Finite(10));
        assert_eq!(SurMatroid::new(4, 2).unwrap().girth().unwrap(), Girth::Finite(4));
        assert_eq!(SurMatroid::new(3, 2).unwrap().girth().unwrap(), Girth::Infinite);
        assert_eq!(SurMatroid::new(2, 3).unwrap().girth().unwrap(), Girth::Infinite);
    }

    #[test]
    fn witness_circuits_at_the_bound() {
        let m = SurMatroid::new(3, 4).unwrap();
        let (g, w) = m.girth_with_witness().unwrap();
        assert_eq!(g, Girth::Finite(10));
        let w = w.unwrap();
        assert!(w.form.diff_by_ell().is_zero());
        assert!(m.all_independent_below(10));
        let f = three_variable_witness(4);
        assert!(!m.is_independent(&indices_of(&m, &f.support())));
    }

    #[test]
    fn girth_matches_ideal_enumeration() {
        for (n, d) in [(3, 2), (3, 3), (2, 4), (4, 2)] {
            let m = SurMatroid::new(n, d).unwrap();
            assert_eq!(m.girth().unwrap(), nu_by_ideal_enumeration(n, d).unwrap(), "n={n} d={d}");
        }
    }

    #[test]
    fn circuits_examples() {
        let m = SurMatroid::new(3, 3).unwrap();
        assert!(m.circuits_up_to(5).unwrap().is_empty());
        let m = SurMatroid::new(4, 2).unwrap();
        let cs = m.circuits_up_to(4).unwrap();
        let w = indices_of(&m, &four_variable_witness(4, 2).support());
        assert!(cs.iter().any(|c| c.indices == w));
        for perm in [[1, 0, 2, 3], [2, 3, 0, 1], [0, 2, 1, 3]] {
            let f = four_variable_witness(4, 2).permute(&perm);
            let w = indices_of(&m, &f.support());
            assert!(cs.iter().any(|c| c.indices == w));
        }
        for c in &cs {
            assert!(c.form.diff_by_ell().is_zero());
            assert_eq!(c.form.support(), c.support);
            assert!(c.form.support_census().all_bounds_hold());
            assert!(!m.is_independent(&c.indices));
            for skip in 0..c.indices.len() {
                let mut sub = c.indices.clone();
                sub.remove(skip);
                assert!(m.is_independent(&sub));
            }
        }
    }

    #[test]
    fn dim_bounds_examples() {
        let b = SurMatroid::new(4, 2).unwrap().dim_bounds().unwrap();
        assert_eq!(b.dim_delta_star, Some(1));
        assert_eq!(b.dim_delta_star_identity, Some(true));
        let b = SurMatroid::new(3, 3).unwrap().dim_bounds().unwrap();
        assert_eq!(b.dim_delta_star, Some(0));
        let b = SurMatroid::new(3, 2).unwrap().dim_bounds().unwrap();
        assert_eq!(b.dim_delta_star, None);
        assert!(b.dim_delta_bound_holds);
    }

    #[test]
    fn alexander_duality() {
        assert!(SurMatroid::new(3, 2).unwrap().alexander_dual_check().unwrap());
        assert!(SurMatroid::new(4, 2).unwrap().alexander_dual_check().unwrap());
        assert!(SurMatroid::new(2, 3).unwrap().alexander_dual_check().unwrap());
        assert!(SurMatroid::new(3, 3).unwrap().alexander_dual_check().unwrap());
        assert!(matches!(SurMatroid::new(3, 5).unwrap().alexander_dual_check(), Err(Error::Refused(_))));
    }

    #[test]
    fn matroid_axioms_on_small_grounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, d) in [(3, 3), (4, 2), (2, 5), (5, 2)] {
            let m = SurMatroid::new(n, d).unwrap();
            let all: Vec<usize> = (0..m.len()).collect();
            for _ in 0..200 {
                let mut a = all.clone();
                a.shuffle(&mut rng);
                let ka = rand::Rng::gen_range(&mut rng, 0..=m.len());
                a.truncate(ka);
                if !m.is_independent(&a) {
                    continue;
                }
                for skip in 0..a.len() {
                    let mut sub = a.clone();
                    sub.remove(skip);
                    assert!(m.is_independent(&sub));
                }
                let mut b = all.clone();
                b.shuffle(&mut rng);
                b.truncate(rand::Rng::gen_range(&mut rng, 0..=m.len()));
                if m.is_independent(&b) && b.len() > a.len() {
                    let ext = b.iter().filter(|x| !a.contains(x)).any(|&x| {
                        let mut c = a.clone();
                        c.push(x);
                        m.is_independent(&c)
                    });
                    assert!(ext, "exchange axiom fails for {a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn census_csv() {
        let c = SurMatroid::new(4, 2).unwrap().census(4).unwrap();
        let csv = c.to_csv();
        assert!(csv.starts_with("size,count\n4,"));
    }
}
