//! Diagonal actions `M_{a_1..a_n}` of `Z/dZ` (`x_i -> xi^{a_i} x_i`) and the
//! ideals generated by their fixed degree-`d` forms.
//!
//! A monomial is fixed iff `sum a_i e_i = 0 (mod d)`. Shifting every `a_i` by
//! a constant or scaling by a unit mod `d` leaves the fixed set unchanged.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::CycloInt;
use crate::error::{Error, Result};
use crate::form::{expand_product, LinearForm, PolyForm, RationalForm};
use crate::ideal::MonomialIdeal;
use crate::linalg::RationalMatrix;
use crate::monomial::{enumerate_basis, Monomial};

pub type CycloForm = PolyForm<CycloInt>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CyclicAction {
    d: u32,
    a: Vec<u32>,
}

impl CyclicAction {
    /// Residues are reduced mod `d`.
    pub fn new(d: u32, a: &[i64]) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("group order must be at least 2, got {d}")));
        }
        if a.is_empty() {
            return Err(Error::InvalidArgument("action needs at least one variable".into()));
        }
        Ok(CyclicAction { d, a: a.iter().map(|&x| x.rem_euclid(d as i64) as u32).collect() })
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    pub fn weights(&self) -> &[u32] {
        &self.a
    }

    pub fn n_vars(&self) -> usize {
        self.a.len()
    }

    pub fn is_fixed(&self, m: &Monomial) -> bool {
        assert_eq!(m.n_vars(), self.a.len(), "monomial in a different ring");
        let s: u64 = m.exponents().iter().zip(&self.a).map(|(&e, &a)| e as u64 * a as u64).sum();
        s.is_multiple_of(self.d as u64)
    }

    /// Fixed monomials of degree `d`, in canonical order.
    pub fn fixed_monomials(&self) -> Vec<Monomial> {
        enumerate_basis(self.n_vars(), self.d).iter().filter(|m| self.is_fixed(m)).cloned().collect()
    }

    /// `mu(I)`: the number of fixed degree-`d` monomials, by enumeration.
    pub fn count_fixed(&self) -> usize {
        enumerate_basis(self.n_vars(), self.d).iter().filter(|m| self.is_fixed(m)).count()
    }

    pub fn invariant_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.n_vars(), self.d, self.fixed_monomials()).expect("pure powers are always fixed")
    }

    /// Closed form of the fixed count in three variables.
    pub fn count_fixed_formula_3vars(&self) -> u64 {
        assert_eq!(self.a.len(), 3, "the closed form is for three variables");
        let d = self.d as i64;
        let [a1, a2, a3] = [self.a[0] as i64, self.a[1] as i64, self.a[2] as i64];
        let g = |x: i64| x.gcd(&d) as u64;
        let g3 = (a2 - a1).gcd(&(a3 - a1)).gcd(&d) as u64;
        1 + (g3 * d as u64 + g(a2 - a1) + g(a3 - a1) + g(a3 - a2)) / 2
    }

    /// True iff some residue occurs at least `n - 1` times.
    pub fn wlp_prediction(&self) -> bool {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &x in &self.a {
            *counts.entry(x).or_insert(0) += 1;
        }
        counts.values().any(|&c| c + 1 >= self.a.len())
    }

    /// Representative of the class under shifts, unit scalings and
    /// permutations: the least sorted tuple `sort(u a + c mod d)`.
    pub fn canonical(&self) -> CyclicAction {
        let d = self.d as u64;
        let mut best: Option<Vec<u32>> = None;
        for u in (1..d).filter(|u| u.gcd(&d) == 1) {
            for c in 0..d {
                let mut t: Vec<u32> = self.a.iter().map(|&x| ((u * x as u64 + c) % d) as u32).collect();
                t.sort_unstable();
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            }
        }
        CyclicAction { d: self.d, a: best.unwrap_or_else(|| vec![0; self.a.len()]) }
    }

    /// Expands `f = prod_{i=1}^{d-1} (sum_j xi^{i a_j} x_j)` and checks that
    /// `l f` lies in the invariant ideal.
    pub fn injectivity_witness(&self) -> InjectivityWitness {
        let n = self.n_vars();
        let d = self.d;
        let factors: Vec<LinearForm<CycloInt>> = (1..d)
            .map(|i| LinearForm::new(self.a.iter().map(|&a| CycloInt::root_power(d, i as i64 * a as i64)).collect()))
            .collect();
        let f = expand_product(n, d, &factors);
        let ell = LinearForm::new(vec![CycloInt::one(d); n]);
        let lf = f.mul_linear(&ell);
        let ell_f_in_ideal = lf.terms().keys().all(|m| self.is_fixed(m));
        let ideal = self.invariant_ideal();
        InjectivityWitness {
            degenerate: self.a.iter().all(|&x| x == self.a[0]),
            f_nonzero: !f.is_zero(),
            ell_f_in_ideal,
            verified: !f.is_zero() && ell_f_in_ideal,
            h_dminus1: ideal.hilbert_function(d - 1),
            h_d: ideal.hilbert_function(d),
            f,
        }
    }

    /// Lemma-form witness on the first three variables (`n = 3`, distinct
    /// residues), with `xi` replaced by `xi^root`.
    pub fn lemma_form(&self, root: i64) -> Result<LemmaForm> {
        if self.n_vars() != 3 {
            return Err(Error::InvalidArgument("the lemma form is built in three variables".into()));
        }
        lemma_form_on(self, [0, 1, 2], root)
    }

    /// `(y_i - y_j)(y_l - y_k)^{d-1}` for an action with exactly two residues,
    /// each occurring at least twice at positions `i < j` and `k < l`.
    pub fn surjectivity_witness_two_block(&self) -> Result<TwoBlockWitness> {
        let values: BTreeSet<u32> = self.a.iter().copied().collect();
        let pos = |v: u32| -> Vec<usize> { (0..self.a.len()).filter(|&i| self.a[i] == v).collect() };
        let vs: Vec<u32> = values.into_iter().collect();
        if vs.len() != 2 || pos(vs[0]).len() < 2 || pos(vs[1]).len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "two-block witness needs exactly two residues each used twice, got {:?}",
                self.a
            )));
        }
        let (p, q) = (pos(vs[0]), pos(vs[1]));
        let (i, j) = if p[0] == 0 { (p[0], p[1]) } else { (q[0], q[1]) };
        let other = if p[0] == 0 { &q } else { &p };
        let (k, l) = (other[other.len() - 2], other[other.len() - 1]);
        let n = self.n_vars();
        let mut factors = vec![LinearForm::difference(n, i + 1, j + 1)];
        factors.extend(std::iter::repeat_n(LinearForm::difference(n, l + 1, k + 1), self.d as usize - 1));
        let h = expand_product(n, (), &factors);
        Ok(TwoBlockWitness {
            indices: [i + 1, j + 1, k + 1, l + 1],
            no_fixed_monomial: h.terms().keys().all(|m| !self.is_fixed(m)),
            annihilated_by_ell: h.diff_by_ell().is_zero(),
            support_size: h.support_size(),
            form: h,
        })
    }

    /// Certificate that surjectivity fails in degree `d - 1`, when the
    /// prediction says the WLP fails.
    pub fn surjectivity_witness(&self) -> Option<SurjectivityWitness> {
        if self.wlp_prediction() {
            return None;
        }
        let mut first: BTreeMap<u32, usize> = BTreeMap::new();
        for (i, &x) in self.a.iter().enumerate() {
            first.entry(x).or_insert(i);
        }
        if first.len() >= 3 {
            let mut idx: Vec<usize> = first.values().copied().collect();
            idx.sort_unstable();
            let lf = lemma_form_on(self, [idx[0], idx[1], idx[2]], 1).expect("distinct residues");
            Some(SurjectivityWitness::LemmaForm(Box::new(lf)))
        } else {
            Some(SurjectivityWitness::TwoBlock(self.surjectivity_witness_two_block().expect("two blocks")))
        }
    }

    /// Full analysis: counts, prediction, the direct WLP check and the
    /// witnesses.
    pub fn report(&self) -> CyclicReport {
        let ideal = self.invariant_ideal();
        let wlp = ideal.wlp_check();
        let kernel_dimension = ideal.dual_kernel_forms().len();
        let surj = self.surjectivity_witness();
        CyclicReport {
            d: self.d,
            a: self.a.clone(),
            mu: ideal.generators().len(),
            mu_formula: (self.n_vars() == 3).then(|| self.count_fixed_formula_3vars()),
            h_dminus1: ideal.hilbert_function(self.d - 1),
            h_d: ideal.hilbert_function(self.d),
            prediction: self.wlp_prediction(),
            direct: wlp.verdict,
            first_failure: wlp.first_failure().map(|r| r.j),
            kernel_dimension,
            injectivity_witness: (!self.wlp_prediction()).then(|| self.injectivity_witness().summary()),
            surjectivity_witness: surj.map(|w| w.summary()),
        }
    }
}

fn lemma_form_on(action: &CyclicAction, pos: [usize; 3], root: i64) -> Result<LemmaForm> {
    let d = action.d;
    let a: Vec<i64> = pos.iter().map(|&p| action.a[p] as i64).collect();
    if a[0] == a[1] || a[0] == a[2] || a[1] == a[2] {
        return Err(Error::InvalidArgument(format!("lemma form needs distinct residues, got {a:?}")));
    }
    if (root as u64).gcd(&(d as u64)) != 1 {
        return Err(Error::InvalidArgument(format!("xi^{root} is not a primitive {d}-th root")));
    }
    let di = d as i64;
    let l = (a[1] - a[2] - 1).rem_euclid(di);
    let k = (a[2] - a[0] - 1).rem_euclid(di);
    let block =
        |from: i64, to: i64| (from..=to).fold(CycloInt::zero(d), |acc, j| acc.add(&CycloInt::root_power(d, root * j)));
    let n = action.n_vars();
    let mut coeffs = vec![CycloInt::zero(d); n];
    coeffs[pos[0]] = block(0, l);
    coeffs[pos[1]] = block(l + 1, l + k + 1);
    coeffs[pos[2]] = block(l + k + 2, 2 * di - 1);
    let coefficient_sum_zero = coeffs.iter().fold(CycloInt::zero(d), |acc, c| acc.add(c)).is_zero();
    let lin = LinearForm::new(coeffs);
    let power = expand_product(n, d, &vec![lin.clone(); d as usize]);
    let form = power.sub(&power.map_coefficients(|c| c.conjugate()));

    let weights = [l, 2 * l + k + 2, l + k + 1];
    let congruence_support: Vec<Monomial> = enumerate_basis(n, d)
        .iter()
        .filter(|m| {
            (0..n).all(|v| pos.contains(&v) || m.exponents()[v] == 0) && {
                let s: i64 = (0..3).map(|t| weights[t] * m.exponents()[pos[t]] as i64).sum();
                s.rem_euclid(di) != 0
            }
        })
        .cloned()
        .collect();
    let expansion_support = form.support();
    let sub = CyclicAction { d, a: pos.iter().map(|&p| action.a[p]).collect() };
    let non_fixed: Vec<Monomial> = enumerate_basis(n, d)
        .iter()
        .filter(|m| {
            (0..n).all(|v| pos.contains(&v) || m.exponents()[v] == 0) && {
                let e: Vec<u32> = pos.iter().map(|&p| m.exponents()[p]).collect();
                !sub.is_fixed(&Monomial::new(e))
            }
        })
        .cloned()
        .collect();
    Ok(LemmaForm {
        l: l as u32,
        k: k as u32,
        root,
        coefficient_sum_zero,
        paths_agree: congruence_support == expansion_support,
        equals_non_fixed: congruence_support == non_fixed,
        annihilated_by_ell: form.diff_by_ell().is_zero(),
        support: congruence_support,
        linear_form: lin,
        form,
    })
}

#[derive(Clone, Debug)]
pub struct InjectivityWitness {
    pub f: CycloForm,
    pub degenerate: bool,
    pub f_nonzero: bool,
    /// Every monomial of `l f` is fixed.
    pub ell_f_in_ideal: bool,
    pub verified: bool,
    pub h_dminus1: usize,
    pub h_d: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessSummary {
    pub kind: &'static str,
    pub support_size: usize,
    pub verified: bool,
    pub form: Option<serde_json::Value>,
}

impl InjectivityWitness {
    pub fn summary(&self) -> WitnessSummary {
        WitnessSummary {
            kind: "injectivity",
            support_size: self.f.support_size(),
            verified: self.verified && !self.degenerate,
            form: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LemmaForm {
    pub l: u32,
    pub k: u32,
    pub root: i64,
    pub linear_form: LinearForm<CycloInt>,
    pub form: CycloForm,
    /// Support from the congruence.
    pub support: Vec<Monomial>,
    pub paths_agree: bool,
    pub equals_non_fixed: bool,
    pub coefficient_sum_zero: bool,
    pub annihilated_by_ell: bool,
}

impl LemmaForm {
    pub fn verified(&self) -> bool {
        self.paths_agree && self.equals_non_fixed && self.coefficient_sum_zero && self.annihilated_by_ell
    }

    /// Rational forms `F_j` with `F = sum_j xi^j F_j` in the power basis.
    pub fn coordinate_forms(&self) -> Vec<RationalForm> {
        let n = self.form.n_vars();
        let deg = self.form.degree();
        let width = self.form.terms().values().map(|c| c.coeffs().len()).max().unwrap_or(0);
        (0..width)
            .map(|j| {
                RationalForm::from_terms(
                    n,
                    deg,
                    (),
                    self.form.terms().iter().map(|(m, c)| {
                        let x = c.coeffs().get(j).cloned().unwrap_or_default();
                        (m.clone(), BigRational::from_integer(x))
                    }),
                )
            })
            .filter(|f| !f.is_zero())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct TwoBlockWitness {
    /// `(i, j, k, l)` for `(y_i - y_j)(y_l - y_k)^{d-1}`, 1-indexed.
    pub indices: [usize; 4],
    pub form: RationalForm,
    pub no_fixed_monomial: bool,
    pub annihilated_by_ell: bool,
    pub support_size: usize,
}

#[derive(Clone, Debug)]
pub enum SurjectivityWitness {
    LemmaForm(Box<LemmaForm>),
    TwoBlock(TwoBlockWitness),
}

impl SurjectivityWitness {
    pub fn verified(&self) -> bool {
        match self {
            SurjectivityWitness::LemmaForm(f) => f.verified(),
            SurjectivityWitness::TwoBlock(w) => w.no_fixed_monomial && w.annihilated_by_ell,
        }
    }

    pub fn summary(&self) -> WitnessSummary {
        match self {
            SurjectivityWitness::LemmaForm(f) => WitnessSummary {
                kind: "lemma-form",
                support_size: f.form.support_size(),
                verified: f.verified(),
                form: Some(serde_json::to_value(&f.form).expect("form serializes")),
            },
            SurjectivityWitness::TwoBlock(w) => WitnessSummary {
                kind: "two-block",
                support_size: w.support_size,
                verified: self.verified(),
                form: Some(serde_json::to_value(&w.form).expect("form serializes")),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicReport {
    pub d: u32,
    pub a: Vec<u32>,
    pub mu: usize,
    pub mu_formula: Option<u64>,
    pub h_dminus1: usize,
    pub h_d: usize,
    pub prediction: bool,
    pub direct: bool,
    pub first_failure: Option<u32>,
    pub kernel_dimension: usize,
    pub injectivity_witness: Option<WitnessSummary>,
    pub surjectivity_witness: Option<WitnessSummary>,
}

/// Whether the rational coordinate forms of `forms` all lie in the span of
/// `kernel`.
pub fn forms_in_span(forms: &[RationalForm], kernel: &[RationalForm]) -> bool {
    let keys: BTreeSet<Monomial> = forms.iter().chain(kernel).flat_map(|f| f.terms().keys().cloned()).collect();
    let keys: Vec<Monomial> = keys.into_iter().collect();
    let row = |f: &RationalForm| -> Vec<BigRational> {
        keys.iter().map(|m| f.coefficient(m).cloned().unwrap_or_else(|| BigRational::from_integer(0.into()))).collect()
    };
    let base: Vec<Vec<BigRational>> = kernel.iter().map(row).collect();
    let all: Vec<Vec<BigRational>> = kernel.iter().chain(forms).map(row).collect();
    let rank = |rows: Vec<Vec<BigRational>>| -> usize {
        if rows.is_empty() {
            0
        } else {
            RationalMatrix::from_rows(rows).expect("rectangular").rank()
        }
    };
    rank(base) == rank(all)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub a: u32,
    pub b: u32,
    pub mu: u64,
    pub gcd: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scan {
    pub d: u32,
    pub histogram: BTreeMap<u64, usize>,
    pub entries: Vec<ScanEntry>,
}

impl Scan {
    /// Smallest `m` such that every pair with `mu > m` has `gcd(a, b, d) > 1`
    /// and every pair with `mu < m` has `gcd(a, b, d) = 1`, if one exists
    /// among the observed values.
    pub fn gcd_split(&self) -> Option<u64> {
        self.histogram
            .keys()
            .copied()
            .find(|&m| self.entries.iter().all(|e| (e.mu <= m || e.gcd != 1) && (e.mu >= m || e.gcd == 1)))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(["m", "d_m"]).expect("in-memory write");
        for (m, c) in &self.histogram {
            w.write_record([m.to_string(), c.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

/// `mu(M_{0,a,b})` for all `(a, b)` in `[0, d)^2`.
pub fn scan_3vars(d: u32) -> Result<Scan> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("scan needs d >= 2, got {d}")));
    }
    let mut entries = Vec::with_capacity((d * d) as usize);
    let mut histogram = BTreeMap::new();
    for a in 0..d {
        for b in 0..d {
            let act = CyclicAction { d, a: vec![0, a, b] };
            let mu = act.count_fixed_formula_3vars();
            *histogram.entry(mu).or_insert(0) += 1;
            entries.push(ScanEntry { a, b, mu, gcd: a.gcd(&b).gcd(&d) });
        }
    }
    Ok(Scan { d, histogram, entries })
}

pub fn smallest_prime_factor(d: u32) -> u32 {
    (2..=d).find(|p| d.is_multiple_of(*p)).unwrap_or(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuBound3 {
    pub d: u32,
    pub p: u32,
    pub p_squared_divides: bool,
    pub bound: String,
    /// Largest `mu` over distinct triples with `gcd(a2-a1, a3-a1, d) = 1`.
    pub max_mu: u64,
    pub holds: bool,
    pub sharp: bool,
    pub witness: Option<[u32; 3]>,
    /// Triples with `gcd(a1, a2, a3, d) = 1` read literally (not shift
    /// invariant) that exceed the bound.
    pub literal_violations: usize,
    pub literal_counterexample: Option<[u32; 3]>,
}

/// The smallest-prime bound on `mu` in three variables, checked over all
/// distinct triples.
pub fn mu_upper_bound_3vars(d: u32) -> Result<MuBound3> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("the bound needs d >= 3, got {d}")));
    }
    let p = smallest_prime_factor(d);
    let sq = d.is_multiple_of(p * p);
    let (pi, di) = (p as i64, d as i64);
    let bound = if sq {
        BigRational::new(((pi + 1) * di + 4 * pi).into(), (2 * pi).into())
    } else {
        BigRational::new(((pi + 1) * di + pi * pi + 3 * pi).into(), (2 * pi).into())
    };
    let mut max_mu = 0;
    let mut witness = None;
    let mut literal_violations = 0;
    let mut literal_counterexample = None;
    for a1 in 0..d {
        for a2 in 0..d {
            for a3 in 0..d {
                if a1 == a2 || a1 == a3 || a2 == a3 {
                    continue;
                }
                let act = CyclicAction { d, a: vec![a1, a2, a3] };
                let mu = act.count_fixed_formula_3vars();
                let exceeds = BigRational::from_integer(BigInt::from(mu)) > bound;
                if a1.gcd(&a2).gcd(&a3).gcd(&d) == 1 && exceeds {
                    literal_violations += 1;
                    literal_counterexample.get_or_insert([a1, a2, a3]);
                }
                let shifted = (a2 as i64 - a1 as i64).gcd(&(a3 as i64 - a1 as i64)).gcd(&di);
                if shifted == 1 && mu > max_mu {
                    max_mu = mu;
                    witness = Some([a1, a2, a3]);
                }
            }
        }
    }
    let max_q = BigRational::from_integer(BigInt::from(max_mu));
    Ok(MuBound3 {
        d,
        p,
        p_squared_divides: sq,
        bound: bound.to_string(),
        max_mu,
        holds: max_q <= bound,
        sharp: max_q == bound,
        witness: if max_q == bound { witness } else { None },
        literal_violations,
        literal_counterexample,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct G4Reading {
    pub name: &'static str,
    pub tuples: usize,
    pub max_mu: usize,
    pub violations: usize,
    pub example: Option<[u32; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct G4Check {
    pub d: u32,
    pub bound: u64,
    /// Hypotheses: no residue used three times, no two pairs, and
    /// `gcd(a_i - a_4, d) = 1` over `i`.
    pub holds: bool,
    pub readings: Vec<G4Reading>,
}

/// The four-variable bound `mu <= 1 + (d+2)(d+1)/2`, checked by
/// enumeration under each reading of its hypotheses.
pub fn mu_upper_bound_4vars_check(d: u32) -> Result<G4Check> {
    if !(2..=8).contains(&d) {
        return Err(Error::Refused(format!("four-variable check runs for 2 <= d <= 8, got {d}")));
    }
    let bound = 1 + (d as u64 + 2) * (d as u64 + 1) / 2;
    let basis = enumerate_basis(4, d);
    let mut data: Vec<([u32; 4], usize)> = Vec::new();
    for t in 0..d.pow(4) {
        let a = [t % d, t / d % d, t / (d * d) % d, t / (d * d * d)];
        let act = CyclicAction { d, a: a.to_vec() };
        data.push((a, basis.iter().filter(|m| act.is_fixed(m)).count()));
    }
    let multiplicities = |a: &[u32; 4]| -> Vec<usize> {
        let mut c: BTreeMap<u32, usize> = BTreeMap::new();
        for &x in a {
            *c.entry(x).or_insert(0) += 1;
        }
        c.into_values().collect()
    };
    let literal_gcd = |a: &[u32; 4]| a.iter().fold(d, |g, &x| g.gcd(&x)) == 1;
    let shift_gcd = |a: &[u32; 4]| a.iter().fold(d as i64, |g, &x| g.gcd(&(x as i64 - a[3] as i64))) == 1;
    let no_triple = |a: &[u32; 4]| multiplicities(a).iter().all(|&m| m <= 2);
    let one_pair = |a: &[u32; 4]| no_triple(a) && multiplicities(a).iter().filter(|&&m| m == 2).count() <= 1;
    type Pred<'a> = Box<dyn Fn(&[u32; 4]) -> bool + 'a>;
    let readings: Vec<(&'static str, Pred)> = vec![
        ("one-pair/shift-gcd", Box::new(|a| one_pair(a) && shift_gcd(a))),
        ("one-pair/literal-gcd", Box::new(|a| one_pair(a) && literal_gcd(a))),
        ("two-pairs/shift-gcd", Box::new(|a| no_triple(a) && shift_gcd(a))),
        ("two-pairs/literal-gcd", Box::new(|a| no_triple(a) && literal_gcd(a))),
    ];
    let readings: Vec<G4Reading> = readings
        .into_iter()
        .map(|(name, pred)| {
            let kept: Vec<&([u32; 4], usize)> = data.iter().filter(|(a, _)| pred(a)).collect();
            let bad: Vec<&&([u32; 4], usize)> = kept.iter().filter(|(_, mu)| *mu as u64 > bound).collect();
            G4Reading {
                name,
                tuples: kept.len(),
                max_mu: kept.iter().map(|(_, mu)| *mu).max().unwrap_or(0),
                violations: bad.len(),
                example: bad.first().map(|(a, _)| *a),
            }
        })
        .collect();
    Ok(G4Check { d, bound, holds: readings[0].violations == 0, readings })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub a: Vec<u32>,
    pub prediction: bool,
    pub direct: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub n: usize,
    pub d: u32,
    pub classes: usize,
    pub predicted_failures: usize,
    pub mismatches: Vec<Mismatch>,
}

/// Canonical representatives of all actions in `n` variables of order `d`.
pub fn canonical_actions(n: usize, d: u32) -> Vec<CyclicAction> {
    let mut seen = BTreeSet::new();
    let total = (d as u64).pow(n as u32);
    for t in 0..total {
        let a: Vec<u32> = (0..n).map(|i| (t / (d as u64).pow(i as u32) % d as u64) as u32).collect();
        let act = CyclicAction { d, a };
        seen.insert(act.canonical().a);
    }
    seen.into_iter().map(|a| CyclicAction { d, a }).collect()
}

/// Compares the predicted WLP verdict with the direct check on every class
/// of actions.
pub fn cross_validate_theorem_sur(n: usize, d: u32) -> Result<CrossValidation> {
    if n < 3 || d < 2 {
        return Err(Error::InvalidArgument(format!("cross-validation needs n >= 3 and d >= 2 (got n={n}, d={d})")));
    }
    let actions = canonical_actions(n, d);
    let results: Vec<(CyclicAction, bool, bool)> = actions
        .into_par_iter()
        .map(|act| {
            let direct = act.invariant_ideal().wlp_check().verdict;
            let prediction = act.wlp_prediction();
            (act, prediction, direct)
        })
        .collect();
    Ok(CrossValidation {
        n,
        d,
        classes: results.len(),
        predicted_failures: results.iter().filter(|r| !r.1).count(),
        mismatches: results
            .into_iter()
            .filter(|(_, p, q)| p != q)
            .map(|(act, prediction, direct)| Mismatch { a: act.a, prediction, direct })
            .collect(),
    })
}
