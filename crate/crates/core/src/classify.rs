//! Exhaustive classification of equigenerated artinian monomial ideals whose
//! multiplication map fails surjectivity in degree `d - 1`.
//!
//! An ideal is the `n` pure powers plus `extra` monomials of `M'_d`, so the
//! two catalogued censuses are `(3, 5, 3)` with `C(18, 3) = 816` ideals and `(4, 3, 6)`
//! with `C(16, 6) = 8008`. Larger generating sets only shrink the inverse
//! system, so their kernel forms already occur here.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::form::RationalForm;
use crate::ideal::MonomialIdeal;
use crate::linalg::{next_combination, RationalMatrix};
use crate::matroid::SurMatroid;
use crate::monomial::{binomial, enumerate_basis, permutations, Monomial};

/// Ideals enumerated before `classify` refuses.
pub const MAX_IDEALS: u64 = 2_000_000;

type FormKey = Vec<(Monomial, BigInt)>;

fn key(f: &RationalForm) -> FormKey {
    f.normalized().integer_terms()
}

fn from_key(n: usize, d: u32, k: &FormKey) -> RationalForm {
    RationalForm::from_terms(n, d, (), k.iter().map(|(m, c)| (m.clone(), BigRational::from_integer(c.clone()))))
}

/// Canonical basis of the span of `forms`, independent of the spanning set:
/// the kernel basis of the kernel basis, both in reduced echelon order.
fn subspace_key(n: usize, d: u32, forms: &[RationalForm]) -> Vec<Vec<BigInt>> {
    let coords = enumerate_basis(n, d);
    let rows: Vec<Vec<BigRational>> = forms
        .iter()
        .map(|f| {
            coords
                .iter()
                .map(|m| f.coefficient(m).cloned().unwrap_or_else(|| BigRational::from_integer(0.into())))
                .collect()
        })
        .collect();
    let perp = RationalMatrix::from_rows(rows).expect("rectangular").nullspace_basis();
    let perp: Vec<Vec<BigRational>> =
        perp.into_iter().map(|v| v.into_iter().map(BigRational::from_integer).collect()).collect();
    RationalMatrix::from_rows(perp).expect("rectangular").nullspace_basis()
}

/// Lexicographically least normalized form among the variable permutations
/// of `f`, with the number of distinct normalized permutations.
pub fn orbit_canonical(f: &RationalForm) -> (RationalForm, usize) {
    let orbit: BTreeSet<FormKey> = permutations(f.n_vars()).iter().map(|p| key(&f.permute(p))).collect();
    let least = orbit.first().expect("orbit contains f");
    (from_key(f.n_vars(), f.degree(), least), orbit.len())
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitClass {
    pub representative: RationalForm,
    pub orbit_size: usize,
    /// Members of the orbit that occur in the census.
    pub found: usize,
}

impl Serialize for OrbitClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            representative: String,
            support_size: usize,
            orbit_size: usize,
            form: &'a RationalForm,
        }
        Out {
            representative: self.representative.to_string(),
            support_size: self.representative.support_size(),
            orbit_size: self.orbit_size,
            form: &self.representative,
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub n: usize,
    pub d: u32,
    pub extra: usize,
    pub ideal_count: usize,
    pub failing_count: usize,
    /// Failing ideals whose dual kernel has dimension at least two.
    pub multi_dimensional_kernels: usize,
    /// Distinct kernels `ker(l o) on (I^-1)_d` over all failing ideals.
    pub distinct_kernels: usize,
    #[serde(skip)]
    pub distinct_forms: Vec<RationalForm>,
    pub distinct_form_count: usize,
    pub orbit_classes: Vec<OrbitClass>,
    /// Indices into `distinct_forms` whose supports are circuits.
    #[serde(skip)]
    pub minimal_failing: Vec<usize>,
    pub minimal_failing_count: usize,
}

impl ClassificationResult {
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(["class", "support_size", "orbit_size", "representative"]).expect("in-memory write");
        for (i, c) in self.orbit_classes.iter().enumerate() {
            w.write_record([
                (i + 1).to_string(),
                c.representative.support_size().to_string(),
                c.orbit_size.to_string(),
                c.representative.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    /// `(ideals, distinct kernels, orbit classes)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.ideal_count, self.distinct_kernels, self.orbit_classes.len())
    }
}

pub fn classify(n: usize, d: u32, extra: usize) -> Result<ClassificationResult> {
    if n < 2 || d < 2 {
        return Err(Error::InvalidArgument(format!("classification needs n >= 2 and d >= 2 (got n={n}, d={d})")));
    }
    let pool = enumerate_basis(n, d).punctured();
    if extra > pool.len() {
        return Err(Error::InvalidArgument(format!("only {} non-pure monomials of degree {d}", pool.len())));
    }
    let total = binomial(pool.len() as u64, extra as u64);
    if total > MAX_IDEALS {
        return Err(Error::Refused(format!("{total} ideals needed, cap is {MAX_IDEALS}")));
    }
    let mut subsets = Vec::with_capacity(total as usize);
    let mut s: Vec<usize> = (0..extra).collect();
    loop {
        subsets.push(s.clone());
        if extra == 0 || !next_combination(&mut s, pool.len()) {
            break;
        }
    }
    let outcomes: Vec<Option<Vec<RationalForm>>> = subsets
        .par_iter()
        .map(|s| {
            let ideal =
                MonomialIdeal::with_pure_powers(n, d, s.iter().map(|&i| pool[i].clone())).expect("valid generators");
            ideal.fails_surjectivity_at_dminus1().then(|| ideal.dual_kernel_forms())
        })
        .collect();
    let failing_count = outcomes.iter().flatten().count();
    let multi_dimensional_kernels = outcomes.iter().flatten().filter(|k| k.len() >= 2).count();
    let distinct_kernels = outcomes
        .iter()
        .flatten()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|k| subspace_key(n, d, k))
        .collect::<BTreeSet<_>>()
        .len();
    let forms: BTreeSet<FormKey> = outcomes.iter().flatten().filter(|k| k.len() == 1).map(|k| key(&k[0])).collect();
    let distinct_forms: Vec<RationalForm> = forms.iter().map(|k| from_key(n, d, k)).collect();
    debug_assert!(distinct_forms.iter().all(|f| f.diff_by_ell().is_zero()));

    let mut classes: BTreeMap<FormKey, OrbitClass> = BTreeMap::new();
    for f in &distinct_forms {
        let (rep, orbit_size) = orbit_canonical(f);
        classes.entry(key(&rep)).or_insert(OrbitClass { representative: rep, orbit_size, found: 0 }).found += 1;
    }
    let mut orbit_classes: Vec<OrbitClass> = classes.into_values().collect();
    orbit_classes.sort_by(|a, b| {
        (a.representative.support_size(), key(&a.representative))
            .cmp(&(b.representative.support_size(), key(&b.representative)))
    });

    let matroid = SurMatroid::new(n, d)?;
    let minimal_failing: Vec<usize> = distinct_forms
        .par_iter()
        .enumerate()
        .filter(|(_, f)| is_circuit_support(&matroid, f))
        .map(|(i, _)| i)
        .collect();
    Ok(ClassificationResult {
        n,
        d,
        extra,
        ideal_count: subsets.len(),
        failing_count,
        multi_dimensional_kernels,
        distinct_kernels,
        distinct_form_count: distinct_forms.len(),
        distinct_forms,
        orbit_classes,
        minimal_failing_count: minimal_failing.len(),
        minimal_failing,
    })
}

fn is_circuit_support(matroid: &SurMatroid, f: &RationalForm) -> bool {
    let Some(s) = f.support().iter().map(|m| matroid.index_of(m)).collect::<Option<Vec<usize>>>() else {
        return false;
    };
    if matroid.subset_rank(&s) + 1 != s.len() {
        return false;
    }
    (0..s.len()).all(|i| {
        let rest: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        matroid.is_independent(&rest)
    })
}

/// True iff `supp f` is a circuit of the surjectivity matroid, which also
/// makes `f` the unique annihilated form on its support up to scaling.
/// Panics unless `f` is nonzero and `l o f = 0`.
pub fn minimal_failure_check(f: &RationalForm) -> Result<bool> {
    assert!(!f.is_zero() && f.diff_by_ell().is_zero(), "minimal failure check needs a nonzero form with l o f = 0");
    Ok(is_circuit_support(&SurMatroid::new(f.n_vars(), f.degree())?, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Catalog {
    Class1,
    Class,
}

impl Catalog {
    pub fn parameters(self) -> (usize, u32, usize) {
        match self {
            Catalog::Class1 => (3, 5, 3),
            Catalog::Class => (4, 3, 6),
        }
    }

    pub fn forms(self) -> &'static [&'static str] {
        match self {
            Catalog::Class1 => &CLASS1_FORMS,
            Catalog::Class => &CLASS_FORMS,
        }
    }
}

impl std::str::FromStr for Catalog {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c1" | "class1" => Ok(Catalog::Class1),
            "c2" | "class" => Ok(Catalog::Class),
            _ => Err(Error::InvalidArgument(format!("unknown catalog `{s}` (expected c1 or c2)"))),
        }
    }
}

/// Degree-5 forms in three variables.
pub const CLASS1_FORMS: [&str; 7] = [
    "(y2-y3)(y1-y3)^2(y1-y2)(2*y1-y2-y3)",
    "(y2-y3)(y1-y3)(y1-y2)^2(2*y1+y2-3*y3)",
    "(y2-y3)(y1-y3)(y1-y2)(y1^2+y1*y2+y2^2-3*y1*y3-3*y2*y3+3*y3^2)",
    "(y2-y3)(y1-y3)(y1-y2)(y1^2-y1*y2-y2^2-y1*y3+3*y2*y3-y3^2)",
    "(y2-y3)^2(y1-y3)^2(y1-y2)",
    "(y2-y3)(y1-y3)(y1-y2)^3",
    "(y2-y3)(y1-y3)(y1-y2)(y1^2-y1*y2+y2^2-y1*y3-y2*y3+y3^2)",
];

/// Degree-3 forms in four variables.
pub const CLASS_FORMS: [&str; 13] = [
    "(y2-y4)^2(y1-y3)",
    "(y2-y4)(y1-y4)(y1-y2)",
    "(y2-y3)(y1-y4)(y1-2*y3+y4)",
    "(y2-y3)(y1-y4)(y1-y2-y3+y4)",
    "(y3-y4)(y2-y4)(y1-y3)",
    "(y1-y4)(y1*y2+y1*y3-2*y2*y3-2*y1*y4+y2*y4+y3*y4)",
    "(y1-y2)(y1*y2-y1*y3-y2*y3+2*y3*y4-y4^2)",
    "(y3-y4)(y2^2-y1*y3+y1*y4-2*y2*y4+y3*y4)",
    "(y3-y4)(y1^2+y2^2-2*y1*y3-2*y2*y4+2*y3*y4)",
    "2*y1^2*y2-3*y1*y2^2+2*y2^2*y3-y1*y3^2-2*y1^2*y4+2*y1*y2*y4+y2^2*y4+2*y1*y3*y4-4*y2*y3*y4+y3^2*y4",
    "y1^2*y2-y1*y2^2+y2^2*y3-y1*y3^2-y1^2*y4+2*y1*y3*y4-2*y2*y3*y4+y3^2*y4+y2*y4^2-y3*y4^2",
    "y1^2*y2-y1^2*y3-2*y1*y2*y3+2*y2*y3^2+4*y1*y3*y4-2*y2*y3*y4-2*y3^2*y4-2*y1*y4^2+y2*y4^2+y3*y4^2",
    "y1^2*y2-y1^2*y3-y1*y2*y3+y2*y3^2-y1*y2*y4+3*y1*y3*y4-y2*y3*y4-y3^2*y4-y1*y4^2+y2*y4^2",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ListedForm {
    pub form: String,
    pub support_size: usize,
    pub annihilated: bool,
    pub circuit: bool,
    pub in_census: bool,
    /// Position of its orbit class in the census, 0-indexed.
    pub class_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ListedFormsReport {
    pub catalog: Catalog,
    pub forms: Vec<ListedForm>,
    /// Every census class is hit by exactly one listed form.
    pub classes_covered: bool,
}

impl ListedFormsReport {
    pub fn all_verified(&self) -> bool {
        self.classes_covered && self.forms.iter().all(|f| f.annihilated && f.circuit && f.in_census)
    }
}

/// Expands every listed form and checks it against `census`, which must be
/// the classification for the catalog's parameters.
pub fn verify_listed_forms(catalog: Catalog, census: &ClassificationResult) -> Result<ListedFormsReport> {
    let (n, d, _) = catalog.parameters();
    if (census.n, census.d) != (n, d) {
        return Err(Error::InvalidArgument(format!(
            "census is for n={} d={}, catalog needs n={n} d={d}",
            census.n, census.d
        )));
    }
    let matroid = SurMatroid::new(n, d)?;
    let class_keys: Vec<FormKey> = census.orbit_classes.iter().map(|c| key(&c.representative)).collect();
    let forms: Vec<ListedForm> = catalog
        .forms()
        .iter()
        .map(|s| {
            let f = RationalForm::parse(s, n)?;
            if f.degree() != d {
                return Err(Error::Parse(format!("`{s}` has degree {}, expected {d}", f.degree())));
            }
            let (rep, _) = orbit_canonical(&f);
            let class_index = class_keys.iter().position(|k| *k == key(&rep));
            Ok(ListedForm {
                form: (*s).to_string(),
                support_size: f.support_size(),
                annihilated: f.diff_by_ell().is_zero(),
                circuit: is_circuit_support(&matroid, &f),
                in_census: class_index.is_some(),
                class_index,
            })
        })
        .collect::<Result<_>>()?;
    let hit: BTreeSet<usize> = forms.iter().filter_map(|f| f.class_index).collect();
    Ok(ListedFormsReport {
        catalog,
        classes_covered: hit.len() == class_keys.len() && forms.len() == class_keys.len(),
        forms,
    })
}
