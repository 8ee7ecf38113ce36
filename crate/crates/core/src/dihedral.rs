//! The dihedral group `D_{2d}` acting on `K[x, y, z]` through
//! `A_d = diag(xi, xi^-1, 1)` and `B_d: x -> xi y, y -> xi^-1 x, z -> -z`, and
//! the monomial ideal spanned by the support of the invariant
//! `F = prod_j (xi^j x + xi^-j y + z)(xi^j x + xi^-j y - z)`.

use num_bigint::{BigInt, Sign};
use serde::Serialize;

use crate::cyclic::{CyclicAction, CycloForm};
use crate::cyclotomic::CycloInt;
use crate::error::{Error, Result};
use crate::form::{expand_product, LinearForm};
use crate::ideal::{FailureMode, MonomialIdeal};
use crate::monomial::Monomial;

fn xy_linear(d: u32, j: i64, z: i64) -> LinearForm<CycloInt> {
    LinearForm::new(vec![CycloInt::root_power(d, j), CycloInt::root_power(d, -j), CycloInt::from_integer(d, z.into())])
}

/// `F` expanded over `Z[xi]`, one quadratic `(xi^j x + xi^-j y)^2 - z^2` per `j`.
pub fn dihedral_form(d: u32) -> Result<CycloForm> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dihedral order needs d >= 2, got {d}")));
    }
    let f = (0..d as i64).fold(CycloForm::one(3, d), |acc, j| {
        let q = expand_product(3, d, &[xy_linear(d, j, 1), xy_linear(d, j, -1)]);
        acc.mul(&q)
    });
    debug_assert!(is_swap_conjugate_invariant(&f));
    Ok(f)
}

/// `f = prod_j (xi^j x + xi^-j y + z)`, the square root of `F` for even `d`.
pub fn half_form(d: u32) -> CycloForm {
    let factors: Vec<_> = (0..d as i64).map(|j| xy_linear(d, j, 1)).collect();
    expand_product(3, d, &factors)
}

/// Coefficients are unchanged by complex conjugation followed by `x <-> y`.
pub fn is_swap_conjugate_invariant(f: &CycloForm) -> bool {
    f.terms().iter().all(|(m, c)| {
        let swapped = m.permute(&[1, 0, 2]);
        f.coefficient(&swapped).is_some_and(|s| *s == c.conjugate())
    })
}

pub fn dihedral_ideal(d: u32) -> Result<MonomialIdeal> {
    let f = dihedral_form(d)?;
    for i in 1..=3 {
        let p = Monomial::pure_power(3, i, 2 * d);
        if f.coefficient(&p).is_none() {
            return Err(Error::Refused(format!("{p} missing from the support of F for d={d}")));
        }
    }
    MonomialIdeal::new(3, 2 * d, f.support())
}

pub fn mu_expected(d: u32) -> usize {
    if d % 2 == 1 {
        d as usize + 3
    } else {
        2 * d as usize + 5
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuCheck {
    pub d: u32,
    pub mu: usize,
    pub mu_expected: usize,
    /// Odd `d`: support equals the fixed monomials of `M_{2,2d-2,d}` over `Z/2dZ`.
    pub cyclic_support_match: Option<bool>,
    pub holds: bool,
}

pub fn mu_dihedral_check(d: u32) -> Result<MuCheck> {
    if !(2..=10).contains(&d) {
        return Err(Error::Refused(format!("generator count check runs for 2 <= d <= 10, got {d}")));
    }
    let f = dihedral_form(d)?;
    let cyclic_support_match = (d % 2 == 1).then(|| {
        let act = CyclicAction::new(2 * d, &[2, 2 * d as i64 - 2, d as i64]).expect("valid action");
        act.fixed_monomials() == f.support()
    });
    let mu = f.support_size();
    Ok(MuCheck {
        d,
        mu,
        mu_expected: mu_expected(d),
        holds: mu == mu_expected(d) && cyclic_support_match != Some(false),
        cyclic_support_match,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvenStructure {
    pub f_squared_is_form: bool,
    /// `supp f = {x^d, y^d} u {(xy)^a z^(d-2a)}`.
    pub f_support_shape: bool,
    /// Coefficients of `(xy)^a z^(d-2a)` in `f` are integers alternating in sign.
    pub alternating_signs: bool,
}

pub fn even_structure(d: u32) -> Result<EvenStructure> {
    if d < 2 || d % 2 == 1 {
        return Err(Error::InvalidArgument(format!("even structure needs even d >= 2, got {d}")));
    }
    let f = half_form(d);
    let big = dihedral_form(d)?;
    let mut shape: Vec<Monomial> = (0..=d / 2).map(|a| Monomial::new(vec![a, a, d - 2 * a])).collect();
    shape.push(Monomial::pure_power(3, 1, d));
    shape.push(Monomial::pure_power(3, 2, d));
    shape.sort();
    let zs: Option<Vec<BigInt>> = (0..=d / 2)
        .map(|a| f.coefficient(&Monomial::new(vec![a, a, d - 2 * a])).and_then(|c| c.to_integer()))
        .collect();
    let alternating_signs = zs.is_some_and(|v| {
        v.iter().all(|c| c.sign() != Sign::NoSign) && v.windows(2).all(|w| w[0].sign() != w[1].sign())
    });
    Ok(EvenStructure { f_squared_is_form: f.mul(&f) == big, f_support_shape: f.support() == shape, alternating_signs })
}

/// For odd `d`, `K = (x+y-z) prod_{i=1}^{d-1} (xi^i x + xi^-i y + z)(xi^-i x + xi^i y - z)`
/// and whether `(x+y+z) K = F`.
pub fn injectivity_cofactor(d: u32) -> Result<(CycloForm, bool)> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("the cofactor is for odd d >= 3, got {d}")));
    }
    let mut factors = vec![xy_linear(d, 0, -1)];
    for i in 1..d as i64 {
        factors.push(xy_linear(d, i, 1));
        factors.push(xy_linear(d, -i, -1));
    }
    let k = expand_product(3, d, &factors);
    let ell = LinearForm::new(vec![CycloInt::one(d); 3]);
    let ok = !k.is_zero() && k.mul_linear(&ell) == dihedral_form(d)?;
    Ok((k, ok))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S2Record {
    pub d: u32,
    /// Multiplicity of the alternating representation of the swap `x <-> y`.
    pub alternating_low: usize,
    pub alternating_high: usize,
    pub formula_low: usize,
    pub formula_high: usize,
    /// `alternating_high > alternating_low`, which rules out surjectivity.
    pub inequality_holds: bool,
}

fn alternating_multiplicity(cobasis: &[Monomial]) -> usize {
    let fixed = cobasis.iter().filter(|m| m.exponents()[0] == m.exponents()[1]).count();
    (cobasis.len() - fixed) / 2
}

/// Alternating multiplicities of `S/I` in degrees `2d-1` and `2d` for even `d`.
pub fn s2_multiplicity_check(d: u32) -> Result<S2Record> {
    if d < 4 || d % 2 == 1 {
        return Err(Error::InvalidArgument(format!("the S2 count is for even d >= 4, got {d}")));
    }
    let ideal = dihedral_ideal(d)?;
    let low = alternating_multiplicity(&ideal.cobasis(2 * d - 1));
    let high = alternating_multiplicity(&ideal.cobasis(2 * d));
    let du = d as usize;
    Ok(S2Record {
        d,
        alternating_low: low,
        alternating_high: high,
        formula_low: du * du,
        formula_high: (2 * du * du + du - 4) / 2,
        inequality_holds: high > low,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralWitnesses {
    pub cofactor_verified: Option<bool>,
    pub even_structure: Option<EvenStructure>,
    pub s2: Option<S2Record>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralReport {
    pub d: u32,
    pub parity: &'static str,
    pub mu: usize,
    pub mu_expected: usize,
    pub h_low: usize,
    pub h_high: usize,
    pub fails_at_2d_minus_1: bool,
    pub first_failure: Option<u32>,
    pub wlp_failure_mode: FailureMode,
    pub expected_mode: FailureMode,
    /// Odd `d`: injectivity fails, so the ideal is a minimal monomial Togliatti system.
    pub togliatti: bool,
    pub witnesses: DihedralWitnesses,
    pub edge_case: Option<String>,
}

impl DihedralReport {
    pub fn consistent(&self) -> bool {
        self.mu == self.mu_expected
            && self.fails_at_2d_minus_1
            && self.wlp_failure_mode == self.expected_mode
            && self.witnesses.cofactor_verified != Some(false)
    }
}

pub fn dihedral_wlp_check(d: u32) -> Result<DihedralReport> {
    if !(2..=6).contains(&d) {
        return Err(Error::Refused(format!("dihedral WLP check runs for 2 <= d <= 6, got {d}")));
    }
    let ideal = dihedral_ideal(d)?;
    let wlp = ideal.wlp_check();
    let low = 2 * d - 1;
    let (h_low, h_high) = (ideal.hilbert_function(low), ideal.hilbert_function(2 * d));
    let rec = wlp.record(low).expect("degree 2d-1 lies below the socle bound");
    let fails = !rec.maximal;
    let wlp_failure_mode = match (fails, h_low <= h_high) {
        (false, _) => FailureMode::None,
        (true, true) => FailureMode::Injectivity,
        (true, false) => FailureMode::Surjectivity,
    };
    let odd = d % 2 == 1;
    let witnesses = DihedralWitnesses {
        cofactor_verified: odd.then(|| injectivity_cofactor(d).map(|(_, ok)| ok)).transpose()?,
        even_structure: (!odd).then(|| even_structure(d)).transpose()?,
        s2: (!odd && d >= 4).then(|| s2_multiplicity_check(d)).transpose()?,
    };
    let edge_case = (d == 2).then(|| {
        format!(
            "paper-edge-case: d=2 lies outside the representation-theoretic argument; direct computation gives H(3)={h_low}, H(4)={h_high}, {}",
            if fails { "multiplication by x+y+z is not surjective" } else { "multiplication by x+y+z is surjective" }
        )
    });
    Ok(DihedralReport {
        d,
        parity: if odd { "odd" } else { "even" },
        mu: ideal.generators().len(),
        mu_expected: mu_expected(d),
        h_low,
        h_high,
        fails_at_2d_minus_1: fails,
        first_failure: wlp.first_failure().map(|r| r.j),
        wlp_failure_mode,
        expected_mode: if odd { FailureMode::Injectivity } else { FailureMode::Surjectivity },
        togliatti: odd && wlp_failure_mode == FailureMode::Injectivity,
        witnesses,
        edge_case,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_sizes() {
        assert_eq!(dihedral_form(2).unwrap().support_size(), 9);
        assert_eq!(dihedral_form(3).unwrap().support_size(), 6);
        assert_eq!(dihedral_form(4).unwrap().support_size(), 13);
        let i = dihedral_ideal(3).unwrap();
        for k in 1..=3 {
            assert!(i.generators().contains(&Monomial::pure_power(3, k, 6)));
        }
        assert_eq!(dihedral_ideal(5).unwrap().generators().len(), 8);
    }

    #[test]
    fn coefficients_are_rational_integers() {
        for d in 2..=6 {
            let f = dihedral_form(d).unwrap();
            assert!(f.terms().values().all(|c| c.to_integer().is_some()), "d={d}");
            assert!(is_swap_conjugate_invariant(&f));
        }
    }

    #[test]
    fn mu_matches_closed_form() {
        for d in 2..=10 {
            let c = mu_dihedral_check(d).unwrap();
            assert!(c.holds, "{c:?}");
            assert_eq!(c.cyclic_support_match.is_some(), d % 2 == 1);
        }
        assert!(matches!(mu_dihedral_check(11), Err(Error::Refused(_))));
    }

    #[test]
    fn even_case_structure() {
        for d in [2, 4, 6, 8] {
            let s = even_structure(d).unwrap();
            assert!(s.f_squared_is_form && s.f_support_shape && s.alternating_signs, "d={d} {s:?}");
        }
        assert!(even_structure(3).is_err());
    }

    #[test]
    fn s2_counts() {
        let r = s2_multiplicity_check(6).unwrap();
        assert_eq!((r.alternating_high, r.alternating_low), (37, 36));
        assert!(r.inequality_holds);
        let r = s2_multiplicity_check(8).unwrap();
        assert_eq!((r.alternating_high, r.alternating_low), (66, 64));
        let r = s2_multiplicity_check(4).unwrap();
        assert_eq!((r.alternating_high, r.alternating_low), (16, 16));
        assert!(!r.inequality_holds);
        for d in [4, 6, 8] {
            let r = s2_multiplicity_check(d).unwrap();
            assert_eq!((r.alternating_low, r.alternating_high), (r.formula_low, r.formula_high));
        }
    }

    #[test]
    fn wlp_failure_modes() {
        let r = dihedral_wlp_check(3).unwrap();
        assert_eq!(r.wlp_failure_mode, FailureMode::Injectivity);
        assert_eq!(r.witnesses.cofactor_verified, Some(true));
        assert!(r.togliatti && r.consistent());
        let r = dihedral_wlp_check(4).unwrap();
        assert_eq!(r.wlp_failure_mode, FailureMode::Surjectivity);
        assert!(r.consistent());
        for d in 5..=6 {
            assert!(dihedral_wlp_check(d).unwrap().consistent(), "d={d}");
        }
    }

    #[test]
    fn d2_is_reported() {
        let r = dihedral_wlp_check(2).unwrap();
        assert_eq!((r.h_low, r.h_high), (10, 6));
        assert!(r.edge_case.as_deref().unwrap().starts_with("paper-edge-case"));
    }
}
