//! Cuspidal-representation tokens of `GL_n(F_q)`.
//!
//! A regular character orbit names a cuspidal representation through the
//! Green parametrization; its trace on elliptic regular elements is an
//! exact cyclotomic integer. Over a coefficient field of characteristic
//! `l != p` the cuspidal representations are instead named by `l`-regular
//! orbits admitting a regular extension, and reduction mod `l` sends a
//! token to the orbit of `l`-regular parts. Tokens identify
//! representations up to isomorphism; no matrix models are built.

use crate::arith;
use crate::cyclotomic::CyclotomicValue;
use crate::error::{Error, Result};
use crate::lattice::{CharOrbit, FieldSpec, OrbitFilter};
use crate::sweep::SweepBound;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Characteristic of the coefficient field a token lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffChar {
    Zero,
    Ell(u64),
}

impl CoeffChar {
    /// The numeric label used in serialized records: 0 or `l`.
    pub fn label(self) -> u64 {
        match self {
            CoeffChar::Zero => 0,
            CoeffChar::Ell(l) => l,
        }
    }

    pub fn from_label(label: u64) -> Result<CoeffChar> {
        match label {
            0 => Ok(CoeffChar::Zero),
            l if arith::is_prime(l) => Ok(CoeffChar::Ell(l)),
            l => Err(Error::NotPrime(l)),
        }
    }
}

impl fmt::Display for CoeffChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A cuspidal representation of `GL_n(F_q)` named by its character orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspidalToken {
    field: FieldSpec,
    orbit: CharOrbit,
    coeff: CoeffChar,
}

/// One factor of a supercuspidal support: a degree-`d` supercuspidal
/// token orbit with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportEntry {
    pub degree: u64,
    pub orbit: CharOrbit,
    pub multiplicity: u64,
}

/// A supercuspidal support; entry degrees weighted by multiplicity sum
/// to the ambient `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMultiset {
    entries: Vec<SupportEntry>,
}

impl SupportMultiset {
    pub fn entries(&self) -> &[SupportEntry] {
        &self.entries
    }

    pub fn total_degree(&self) -> u64 {
        self.entries
            .iter()
            .map(|e| e.degree * e.multiplicity)
            .sum()
    }
}

impl fmt::Display for SupportMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "(d={},{})^x{}", e.degree, e.orbit, e.multiplicity)?;
        }
        Ok(())
    }
}

/// True when `g^m` generates `F_{q^n}` over `F_q`: for every proper
/// divisor `d | n`, the exponent avoids the index-`(M/(q^d-1))` subgroup.
pub fn is_primitive(field: FieldSpec, m: u64) -> bool {
    let m = m % field.m.max(1);
    arith::divisors(field.n)
        .into_iter()
        .filter(|&d| d < field.n)
        .all(|d| {
            let sub = field.subfield_order(d).expect("divisor of n");
            m % (field.m / sub.max(1)) != 0
        })
}

/// Exponents of all primitive elements of `F_{q^n} / F_q`, ascending.
pub fn primitive_elements(field: FieldSpec, bound: SweepBound) -> Result<Vec<u64>> {
    bound.admit(field.m.max(1))?;
    Ok((0..field.m.max(1))
        .filter(|&m| is_primitive(field, m))
        .collect())
}

/// True when some regular exponent has its `l`-regular part in `lambda`.
///
/// Decided by exhausting the `l`-primary coset of a member: the
/// candidates are exactly `k0 + t * m` for `M = l^v * m`, and a witness
/// for one member conjugates to a witness for any other.
pub fn has_regular_extension(lambda: &CharOrbit, l: u64, bound: SweepBound) -> Result<bool> {
    if !arith::is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    let field = lambda.field();
    let k0 = lambda.canonical();
    if !field.is_ell_regular(k0, l)? {
        return Err(Error::NotEllRegular { k: k0, l });
    }
    let (_, unit) = arith::val_and_unit(field.m.max(1), l);
    let coset = field.m.max(1) / unit;
    bound.admit(coset)?;
    Ok((0..coset).any(|t| field.is_regular(k0 + t * unit)))
}

impl CuspidalToken {
    /// The Green bijection: a regular orbit names a characteristic-zero
    /// cuspidal (equivalently supercuspidal) representation.
    pub fn green_rep(orbit: CharOrbit) -> Result<CuspidalToken> {
        if !orbit.is_regular() {
            return Err(Error::NotRegular(orbit.canonical()));
        }
        Ok(CuspidalToken {
            field: orbit.field(),
            orbit,
            coeff: CoeffChar::Zero,
        })
    }

    /// The characteristic-`l` classification: an `l`-regular orbit
    /// admitting a regular extension names a cuspidal representation
    /// over an algebraically closed field of characteristic `l`.
    pub fn james_rep(orbit: CharOrbit, l: u64, bound: SweepBound) -> Result<CuspidalToken> {
        let field = orbit.field();
        if l == field.p {
            return Err(Error::EllEqualsP(l));
        }
        if !has_regular_extension(&orbit, l, bound)? {
            return Err(Error::NoRegularExtension { l });
        }
        Ok(CuspidalToken {
            field,
            orbit,
            coeff: CoeffChar::Ell(l),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn orbit(&self) -> &CharOrbit {
        &self.orbit
    }

    pub fn coeff_char(&self) -> CoeffChar {
        self.coeff
    }

    /// Trace of the representation at the elliptic regular element
    /// `g^m`: the exact value `(-1)^(n-1) sum_i zeta^(k q^i m)` in
    /// `Z[zeta_M]`. Independent of the orbit member chosen for `k`.
    pub fn green_trace(&self, m: u64, bound: SweepBound) -> Result<CyclotomicValue> {
        if self.coeff != CoeffChar::Zero {
            return Err(Error::NotCharacteristicZero);
        }
        if !is_primitive(self.field, m) {
            return Err(Error::NotPrimitive { m });
        }
        bound.admit(self.field.m.max(1))?;
        let modulus = self.field.m.max(1);
        let exponents: Vec<u64> = self
            .orbit
            .members()
            .iter()
            .map(|&k| arith::mul_mod(k, m % modulus, modulus))
            .collect();
        let sign = if self.field.n % 2 == 1 { 1 } else { -1 };
        CyclotomicValue::root_of_unity_sum(modulus, &exponents, sign)
    }

    /// Reduction modulo `l`: the resulting cuspidal token depends only
    /// on the orbit of `l`-regular parts. Reducing a token already in
    /// characteristic `l` changes nothing.
    pub fn reduce_mod_ell(&self, l: u64) -> Result<CuspidalToken> {
        if !arith::is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if l == self.field.p {
            return Err(Error::EllEqualsP(l));
        }
        match self.coeff {
            CoeffChar::Ell(l0) if l0 == l => Ok(self.clone()),
            CoeffChar::Ell(_) => Err(Error::NotCharacteristicZero),
            CoeffChar::Zero => {
                let field = self.field;
                let orbit = self
                    .orbit
                    .map_members(|k| field.ell_regular_part(k, l).expect("l != p"));
                // The input orbit is a regular extension of its own
                // reduction, so the classification predicate holds by
                // construction.
                Ok(CuspidalToken {
                    field,
                    orbit,
                    coeff: CoeffChar::Ell(l),
                })
            }
        }
    }

    /// Characteristic zero tokens are always supercuspidal; in
    /// characteristic `l` exactly the regular orbits are.
    pub fn is_supercuspidal(&self) -> bool {
        match self.coeff {
            CoeffChar::Zero => true,
            CoeffChar::Ell(_) => self.orbit.is_regular(),
        }
    }

    /// Supercuspidal support of the reduction mod `l`: the single entry
    /// `(d, descent of the l-regular part, a = n/d)`.
    pub fn cuspidal_support_mod_ell(&self, l: u64) -> Result<SupportMultiset> {
        if self.coeff != CoeffChar::Zero {
            return Err(Error::NotCharacteristicZero);
        }
        if !arith::is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if l == self.field.p {
            return Err(Error::EllEqualsP(l));
        }
        let k_reg = self.field.ell_regular_part(self.orbit.canonical(), l)?;
        let (d, j) = self.field.regular_descent(k_reg);
        let sub = self.field.subfield(d)?;
        Ok(SupportMultiset {
            entries: vec![SupportEntry {
                degree: d,
                orbit: sub.orbit_of(j),
                multiplicity: self.field.n / d,
            }],
        })
    }

    /// Twist by the base-field character labeled `s`; in characteristic
    /// `l` the twist exponent is first replaced by its `l`-regular part.
    pub fn twist(&self, s: u64) -> Result<CuspidalToken> {
        let field = self.field;
        let mut t = field.norm_inflate(1, s)?;
        if let CoeffChar::Ell(l) = self.coeff {
            t = field.ell_regular_part(t, l)?;
        }
        let modulus = field.m.max(1);
        Ok(CuspidalToken {
            field,
            orbit: self.orbit.map_members(|k| arith::add_mod(k, t, modulus)),
            coeff: self.coeff,
        })
    }
}

/// Every cuspidal token of `GL_n(F_q)` over characteristic `l`:
/// the `l`-regular orbits admitting a regular extension, sorted by
/// canonical representative.
pub fn cuspidal_tokens_mod_ell(
    field: FieldSpec,
    l: u64,
    bound: SweepBound,
) -> Result<Vec<CuspidalToken>> {
    if !arith::is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    if l == field.p {
        return Err(Error::EllEqualsP(l));
    }
    let mut tokens = Vec::new();
    for orbit in field.enumerate_orbits(OrbitFilter::All, bound)? {
        if !field.is_ell_regular(orbit.canonical(), l)? {
            continue;
        }
        if has_regular_extension(&orbit, l, bound)? {
            tokens.push(CuspidalToken {
                field,
                orbit,
                coeff: CoeffChar::Ell(l),
            });
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(q: u64, n: u64) -> FieldSpec {
        FieldSpec::new(q, n).unwrap()
    }

    fn bound() -> SweepBound {
        SweepBound::default()
    }

    #[test]
    fn green_rep_requires_regular() {
        assert!(CuspidalToken::green_rep(fs(2, 2).orbit_of(1)).is_ok());
        assert!(CuspidalToken::green_rep(fs(3, 1).orbit_of(1)).is_ok());
        assert_eq!(
            CuspidalToken::green_rep(fs(3, 2).orbit_of(4)),
            Err(Error::NotRegular(4))
        );
    }

    #[test]
    fn primitive_element_lists() {
        assert_eq!(primitive_elements(fs(2, 2), bound()).unwrap(), vec![1, 2]);
        assert_eq!(
            primitive_elements(fs(3, 2), bound()).unwrap(),
            vec![1, 2, 3, 5, 6, 7]
        );
        assert_eq!(primitive_elements(fs(2, 1), bound()).unwrap(), vec![0]);
    }

    #[test]
    fn trace_values() {
        let t = CuspidalToken::green_rep(fs(2, 2).orbit_of(1)).unwrap();
        assert_eq!(t.green_trace(1, bound()).unwrap().coeffs(), &[1, 0]);
        let t = CuspidalToken::green_rep(fs(3, 1).orbit_of(0)).unwrap();
        assert_eq!(t.green_trace(1, bound()).unwrap().coeffs(), &[1]);
        let t = CuspidalToken::green_rep(fs(2, 3).orbit_of(1)).unwrap();
        assert_eq!(
            t.green_trace(1, bound()).unwrap().coeffs(),
            &[0, 1, 1, 0, 1, 0]
        );
        // Non-primitive m is rejected: 4 = 8/(3-1) * 1 lies in F_3.
        let t = CuspidalToken::green_rep(fs(3, 2).orbit_of(1)).unwrap();
        assert_eq!(
            t.green_trace(4, bound()),
            Err(Error::NotPrimitive { m: 4 })
        );
    }

    #[test]
    fn trace_constant_on_orbit_of_m_and_rep_choice() {
        for (q, n) in [(2u64, 2u64), (3, 2), (2, 3), (4, 2), (5, 2)] {
            let f = fs(q, n);
            for orbit in f.enumerate_orbits(OrbitFilter::Regular, bound()).unwrap() {
                let t = CuspidalToken::green_rep(orbit.clone()).unwrap();
                for m in primitive_elements(f, bound()).unwrap() {
                    let v = t.green_trace(m, bound()).unwrap();
                    assert_eq!(v, t.green_trace(f.frobenius_act(m, 1), bound()).unwrap());
                    // Representative independence: rebuild from each member.
                    for &k in orbit.members() {
                        let u = CuspidalToken::green_rep(f.orbit_of(k)).unwrap();
                        assert_eq!(v, u.green_trace(m, bound()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let t = CuspidalToken::green_rep(fs(3, 2).orbit_of(1)).unwrap();
        let r = t.reduce_mod_ell(2).unwrap();
        assert_eq!(r.orbit().members(), &[0]);
        assert_eq!(r.coeff_char(), CoeffChar::Ell(2));

        let t = CuspidalToken::green_rep(fs(2, 3).orbit_of(1)).unwrap();
        let r = t.reduce_mod_ell(5).unwrap();
        assert_eq!(r.orbit().members(), &[1, 2, 4]);

        // Orbit of 4 over F_25 is regular; both members share the
        // 3-regular part 12, so the reduction collapses to the fixed
        // (non-regular) orbit {12}.
        let f = fs(5, 2);
        let t = CuspidalToken::green_rep(f.orbit_of(4)).unwrap();
        let r = t.reduce_mod_ell(3).unwrap();
        assert_eq!(r.orbit().members(), &[12]);
        assert!(!r.is_supercuspidal());
        assert_eq!(f.ell_regular_part(4, 3).unwrap(), 12);
        assert_eq!(
            CuspidalToken::green_rep(f.orbit_of(12)),
            Err(Error::NotRegular(12))
        );

        // Reducing twice changes nothing.
        let t = CuspidalToken::green_rep(fs(3, 2).orbit_of(1)).unwrap();
        let once = t.reduce_mod_ell(2).unwrap();
        assert_eq!(once.reduce_mod_ell(2).unwrap(), once);
        assert_eq!(t.reduce_mod_ell(3), Err(Error::EllEqualsP(3)));
    }

    #[test]
    fn supercuspidal_predicate() {
        let r = CuspidalToken::green_rep(fs(3, 2).orbit_of(1))
            .unwrap()
            .reduce_mod_ell(2)
            .unwrap();
        assert!(!r.is_supercuspidal());
        let r = CuspidalToken::green_rep(fs(2, 3).orbit_of(1))
            .unwrap()
            .reduce_mod_ell(5)
            .unwrap();
        assert!(r.is_supercuspidal());
        assert!(CuspidalToken::green_rep(fs(3, 2).orbit_of(1))
            .unwrap()
            .is_supercuspidal());
    }

    #[test]
    fn regular_extension_predicate() {
        assert!(has_regular_extension(&fs(3, 2).orbit_of(0), 2, bound()).unwrap());
        assert!(has_regular_extension(&fs(2, 3).orbit_of(1), 5, bound()).unwrap());
        assert!(!has_regular_extension(&fs(2, 2).orbit_of(0), 5, bound()).unwrap());
        // Precondition: lambda must be l-regular.
        assert_eq!(
            has_regular_extension(&fs(3, 2).orbit_of(1), 2, bound()),
            Err(Error::NotEllRegular { k: 1, l: 2 })
        );
    }

    #[test]
    fn supports() {
        let t = CuspidalToken::green_rep(fs(3, 2).orbit_of(1)).unwrap();
        let s = t.cuspidal_support_mod_ell(2).unwrap();
        assert_eq!(s.entries().len(), 1);
        assert_eq!(s.entries()[0].degree, 1);
        assert_eq!(s.entries()[0].orbit.members(), &[0]);
        assert_eq!(s.entries()[0].multiplicity, 2);
        assert_eq!(s.total_degree(), 2);

        let t = CuspidalToken::green_rep(fs(2, 3).orbit_of(1)).unwrap();
        let s = t.cuspidal_support_mod_ell(5).unwrap();
        assert_eq!(s.entries()[0].degree, 3);
        assert_eq!(s.entries()[0].orbit.members(), &[1, 2, 4]);
        assert_eq!(s.entries()[0].multiplicity, 1);

        // Oracle for the descent label: norm inflation must recover the
        // l-regular part, which pins j = 2 over F_5 (2 * (24/4) = 12).
        let f = fs(5, 2);
        let k_reg = f.ell_regular_part(4, 3).unwrap();
        let (d, j) = f.regular_descent(k_reg);
        assert_eq!((d, j), (1, 2));
        assert_eq!(f.norm_inflate(d, j).unwrap(), k_reg);

        for (q, n) in [(3u64, 2u64), (2, 4), (5, 2), (4, 2)] {
            let f = fs(q, n);
            for orbit in f.enumerate_orbits(OrbitFilter::Regular, bound()).unwrap() {
                let t = CuspidalToken::green_rep(orbit).unwrap();
                for l in [2u64, 3, 5, 7] {
                    if l == f.p {
                        continue;
                    }
                    assert_eq!(t.cuspidal_support_mod_ell(l).unwrap().total_degree(), n);
                }
            }
        }
    }

    #[test]
    fn twists() {
        let t = CuspidalToken::green_rep(fs(3, 2).orbit_of(1)).unwrap();
        assert_eq!(t.twist(1).unwrap().orbit().members(), &[5, 7]);
        assert_eq!(t.twist(0).unwrap(), t);
        // Characteristic-2 twist by s=1: the inflated exponent 4 is
        // 2-primary, so its 2-regular part vanishes.
        let r = t.reduce_mod_ell(2).unwrap();
        assert_eq!(r.twist(1).unwrap().orbit().members(), &[0]);
    }

    #[test]
    fn reduction_commutes_with_twist() {
        for (q, n) in [(3u64, 2u64), (5, 2), (4, 2), (2, 4)] {
            let f = fs(q, n);
            for orbit in f.enumerate_orbits(OrbitFilter::Regular, bound()).unwrap() {
                let t = CuspidalToken::green_rep(orbit).unwrap();
                for l in [2u64, 3, 5] {
                    if l == f.p {
                        continue;
                    }
                    for s in 0..f.subfield_order(1).unwrap() {
                        let a = t.twist(s).unwrap().reduce_mod_ell(l).unwrap();
                        let b = t.reduce_mod_ell(l).unwrap().twist(s).unwrap();
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn gl2_f3_mod_2_classification() {
        // Over F-bar_2 the group GL_2(F_3) has exactly one cuspidal
        // token, it is not supercuspidal, and its support is 1 (x) 1.
        let f = fs(3, 2);
        let tokens = cuspidal_tokens_mod_ell(f, 2, bound()).unwrap();
        assert_eq!(tokens.len(), 1);
        assert_eq!(tokens[0].orbit().members(), &[0]);
        assert!(!tokens[0].is_supercuspidal());
        assert_eq!(
            tokens.iter().filter(|t| t.is_supercuspidal()).count(),
            0
        );
    }
}
