//! The triple parametrization of simple inertial classes.
//!
//! A class is presented by an endo-class descriptor, a lift index in the
//! `Z/f` torsor of unramified lifts, and a Galois orbit of characters of
//! the residue context `F_{(q^f)^(n/delta)}`. Presentations at different
//! lifts are related by the base Frobenius `k -> q*k`; the normal form
//! fixes lift 0. The GL and Galois sides carry identical data and differ
//! only by a tag, so transporting a triple across the correspondence is
//! a side flip.
//!
//! Endo-classes are opaque: only `(p, q, delta, e, f, r)` matter
//! downstream, and no simple characters or strata are ever constructed.

use crate::arith;
use crate::error::{Error, Result};
use crate::green::CoeffChar;
use crate::lattice::{CharOrbit, FieldSpec};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Numerical invariants of an endo-class over the base field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EndoClass {
    /// Residue characteristic.
    pub p: u64,
    /// Cardinality of the base residue field, a power of `p`.
    pub q: u64,
    /// Degree.
    pub delta: u64,
    /// Ramification index.
    pub e: u64,
    /// Residue degree; the unramified lift torsor is `Z/f`.
    pub f: u64,
    /// Wild exponent: the wild dimension is `p^r`.
    pub r: u64,
}

impl EndoClass {
    pub fn new(p: u64, q: u64, delta: u64, e: u64, f: u64, r: u64) -> Result<EndoClass> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        match arith::prime_power(q) {
            Some((base, _)) if base == p => {}
            _ => {
                return Err(Error::InvalidDescriptor(format!(
                    "q = {q} is not a power of p = {p}"
                )))
            }
        }
        if e == 0 || f == 0 || e * f != delta {
            return Err(Error::InvalidDescriptor(format!(
                "e*f = {e}*{f} does not equal delta = {delta}"
            )));
        }
        let wild = checked_pow(p, r).ok_or_else(|| {
            Error::InvalidDescriptor(format!("wild dimension p^r = {p}^{r} overflows"))
        })?;
        if delta % wild != 0 {
            return Err(Error::InvalidDescriptor(format!(
                "wild dimension p^{r} = {wild} does not divide delta = {delta}"
            )));
        }
        Ok(EndoClass { p, q, delta, e, f, r })
    }

    /// Dimension of the wild part, `p^r`.
    pub fn wild_dim(&self) -> u64 {
        checked_pow(self.p, self.r).expect("validated at construction")
    }

    /// Degree of a tame parameter field over the base, `delta / p^r`.
    pub fn tame_degree(&self) -> u64 {
        self.delta / self.wild_dim()
    }

    /// Cardinality of the residue field of the unramified extension.
    pub fn residue_order(&self) -> Result<u64> {
        checked_pow(self.q, self.f).ok_or_else(|| {
            Error::InvalidDescriptor(format!("q^f = {}^{} overflows", self.q, self.f))
        })
    }

    /// The character lattice a dimension-`n` class over this endo-class
    /// lives on: base `q^f`, degree `n/delta`.
    pub fn residue_context(&self, n: u64) -> Result<FieldSpec> {
        if n == 0 || n % self.delta != 0 {
            return Err(Error::DegreeDoesNotDivide {
                delta: self.delta,
                n,
            });
        }
        FieldSpec::new(self.residue_order()?, n / self.delta)
    }

    /// The `p^(-r)` twist relating the plus-normalized level zero map to
    /// the level zero map: multiplies every exponent by the inverse of
    /// the wild dimension. A bijection on orbits; `r = 0` is the
    /// identity.
    pub fn level_zero_twist(&self, orbit: &CharOrbit) -> Result<CharOrbit> {
        let field = orbit.field();
        if field.p != self.p || field.q != self.residue_order()? {
            return Err(Error::ContextMismatch);
        }
        let m = field.m.max(1);
        let inv = arith::inv_mod(self.wild_dim() % m, m).expect("p is a unit mod q^(fn) - 1");
        Ok(orbit.map_members(|k| arith::mul_mod(k, inv, m)))
    }

    /// Inverse of [`EndoClass::level_zero_twist`].
    pub fn level_zero_untwist(&self, orbit: &CharOrbit) -> Result<CharOrbit> {
        let field = orbit.field();
        if field.p != self.p || field.q != self.residue_order()? {
            return Err(Error::ContextMismatch);
        }
        let m = field.m.max(1);
        let wild = self.wild_dim() % m;
        Ok(orbit.map_members(|k| arith::mul_mod(k, wild, m)))
    }

    /// Label of the Galois sign character: the quadratic character
    /// `(q^f - 1)/2` when `p != 2` and the tame degree is even,
    /// otherwise trivial.
    pub fn epsilon_gal(&self) -> Result<u64> {
        let order = self.residue_order()? - 1;
        if self.p != 2 && self.tame_degree() % 2 == 0 {
            Ok(order / 2)
        } else {
            Ok(0)
        }
    }

    /// Twist label of the canonical beta-extension relative to the
    /// p-primary one: the product of the Galois sign character and, when
    /// flagged, the symplectic sign character (both quadratic).
    pub fn canonical_beta_label(&self, eps1_flag: bool) -> Result<BetaExtensionLabel> {
        let order = self.residue_order()? - 1;
        let mut twist = self.epsilon_gal()?;
        if eps1_flag {
            if order % 2 != 0 {
                return Err(Error::NoQuadraticCharacter(order));
            }
            twist = arith::add_mod(twist, order / 2, order.max(1));
        }
        Ok(BetaExtensionLabel {
            endo: *self,
            twist,
            eps1_flag,
        })
    }
}

fn checked_pow(base: u64, exp: u64) -> Option<u64> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// A beta-extension named by its abelian twist offset from the
/// p-primary basepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetaExtensionLabel {
    pub endo: EndoClass,
    /// Residue mod `q^f - 1`.
    pub twist: u64,
    /// External input: whether the symplectic sign character is the
    /// nontrivial quadratic character. Its computation needs stratum
    /// internals and stays outside this model.
    pub eps1_flag: bool,
}

/// Replaces the beta-extension by its twist by the character labeled
/// `s`; the level zero orbit moves by the inverse character, so the
/// exponents shift by `-norm_inflate(1, s)`.
pub fn beta_twist_level_zero(orbit: &CharOrbit, s: u64) -> Result<CharOrbit> {
    let field = orbit.field();
    let t = field.norm_inflate(1, s)?;
    let m = field.m.max(1);
    Ok(orbit.map_members(|k| arith::sub_mod(k, t, m)))
}

/// Which side of the correspondence a triple presents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "GL")]
    Gl,
    Galois,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Gl => write!(f, "GL"),
            Side::Galois => write!(f, "Galois"),
        }
    }
}

/// A presentation of a simple inertial class (or inertial type):
/// dimension, endo-class, lift index, level zero orbit, side, and the
/// coefficient characteristic of the parametrization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleInertialTriple {
    n: u64,
    endo: EndoClass,
    lift: u64,
    orbit: CharOrbit,
    side: Side,
    coeff: CoeffChar,
}

impl SimpleInertialTriple {
    pub fn new(
        n: u64,
        endo: EndoClass,
        lift: u64,
        orbit: CharOrbit,
        side: Side,
        coeff: CoeffChar,
    ) -> Result<SimpleInertialTriple> {
        let context = endo.residue_context(n)?;
        if orbit.field() != context {
            return Err(Error::ContextMismatch);
        }
        if lift >= endo.f {
            return Err(Error::LiftRange { lift, f: endo.f });
        }
        if let CoeffChar::Ell(l) = coeff {
            if l == endo.p {
                return Err(Error::EllEqualsP(l));
            }
            if !context.is_ell_regular(orbit.canonical(), l)? {
                return Err(Error::NotEllRegular {
                    k: orbit.canonical(),
                    l,
                });
            }
        }
        Ok(SimpleInertialTriple {
            n,
            endo,
            lift,
            orbit,
            side,
            coeff,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn endo(&self) -> EndoClass {
        self.endo
    }

    pub fn lift(&self) -> u64 {
        self.lift
    }

    pub fn orbit(&self) -> &CharOrbit {
        &self.orbit
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn coeff_char(&self) -> CoeffChar {
        self.coeff
    }

    /// The same class presented at lift `lift + shift`: orbit exponents
    /// move by the base Frobenius `k -> q^shift * k`.
    pub fn change_lift(&self, shift: u64) -> SimpleInertialTriple {
        let shift = shift % self.endo.f;
        let m = self.orbit.field().m.max(1);
        let mult = arith::pow_mod(self.endo.q, shift, m);
        SimpleInertialTriple {
            lift: (self.lift + shift) % self.endo.f,
            orbit: self.orbit.map_members(|k| arith::mul_mod(k, mult, m)),
            ..self.clone()
        }
    }

    /// All `f` presentations of this class, one per lift.
    pub fn equivalent_presentations(&self) -> Vec<SimpleInertialTriple> {
        (0..self.endo.f).map(|s| self.change_lift(s)).collect()
    }

    /// Normal form: the presentation at lift 0.
    pub fn canonical_triple(&self) -> SimpleInertialTriple {
        self.change_lift(self.endo.f - self.lift)
    }

    /// Class equality of two presentations on the same side.
    pub fn triples_equal(&self, other: &SimpleInertialTriple) -> Result<bool> {
        if self.side != other.side {
            return Err(Error::WrongSide(other.side.to_string()));
        }
        Ok(self.n == other.n
            && self.endo == other.endo
            && self.coeff == other.coeff
            && self.canonical_triple().orbit == other.canonical_triple().orbit)
    }

    /// How many copies of the underlying supercuspidal the class
    /// carries: `(n/delta) / stabilizer_degree(orbit)`.
    pub fn multiplicity(&self) -> u64 {
        (self.n / self.endo.delta) / self.orbit.size()
    }

    /// Size of the orbit; `n/delta = parametric_degree * multiplicity`.
    pub fn parametric_degree(&self) -> u64 {
        self.orbit.size()
    }

    /// Inflates a supercuspidal (regular-orbit) presentation to the
    /// dimension-`n*mult` class with the same endo-class and
    /// multiplicity `mult`, by norm inflation of the orbit.
    pub fn inflate_simple(&self, mult: u64) -> Result<SimpleInertialTriple> {
        if !self.orbit.is_regular() {
            return Err(Error::NotRegular(self.orbit.canonical()));
        }
        if mult == 0 {
            return Err(Error::Parameter("multiplicity must be positive".into()));
        }
        let n_big = self
            .n
            .checked_mul(mult)
            .ok_or_else(|| Error::Parameter("dimension overflow".into()))?;
        let context = self.endo.residue_context(n_big)?;
        let inflated = context.norm_inflate(self.n / self.endo.delta, self.orbit.canonical())?;
        Ok(SimpleInertialTriple {
            n: n_big,
            orbit: context.orbit_of(inflated),
            ..self.clone()
        })
    }

    /// Transport across the correspondence: identical data, Galois tag.
    pub fn rec_triple(&self) -> Result<SimpleInertialTriple> {
        match self.side {
            Side::Gl => Ok(SimpleInertialTriple {
                side: Side::Galois,
                ..self.clone()
            }),
            Side::Galois => Err(Error::WrongSide(self.side.to_string())),
        }
    }

    /// Inverse transport, Galois tag back to GL.
    pub fn rec_triple_inverse(&self) -> Result<SimpleInertialTriple> {
        match self.side {
            Side::Galois => Ok(SimpleInertialTriple {
                side: Side::Gl,
                ..self.clone()
            }),
            Side::Gl => Err(Error::WrongSide(self.side.to_string())),
        }
    }

    /// Reduction mod `l`: the orbit is replaced by its orbit of
    /// `l`-regular parts; dimension, endo-class, and lift stay put.
    pub fn reduce_mod_ell(&self, l: u64) -> Result<SimpleInertialTriple> {
        if !arith::is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if l == self.endo.p {
            return Err(Error::EllEqualsP(l));
        }
        if let CoeffChar::Ell(l0) = self.coeff {
            if l0 != l {
                return Err(Error::Parameter(format!(
                    "triple already has coefficient characteristic {l0}"
                )));
            }
        }
        let field = self.orbit.field();
        Ok(SimpleInertialTriple {
            orbit: self
                .orbit
                .map_members(|k| field.ell_regular_part(k, l).expect("l != p")),
            coeff: CoeffChar::Ell(l),
            ..self.clone()
        })
    }

    /// Serializable record form.
    pub fn to_record(&self) -> TripleRecord {
        TripleRecord {
            n: self.n,
            p: self.endo.p,
            q: self.endo.q,
            delta: self.endo.delta,
            e: self.endo.e,
            f: self.endo.f,
            r: self.endo.r,
            lift: self.lift,
            orbit_canonical: self.orbit.canonical(),
            side: self.side,
            char: self.coeff.label(),
        }
    }

    /// Compact JSON record with fixed key order; `from_json` of the
    /// output returns the identical string.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("record serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<SimpleInertialTriple> {
        let record: TripleRecord =
            serde_json::from_str(text).map_err(|e| Error::Record(e.to_string()))?;
        record.to_triple()
    }
}

/// Flat serialized form of a triple. The orbit is stored through its
/// canonical representative only, so parsing rejects non-canonical
/// labels to keep round-trips bit-exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleRecord {
    pub n: u64,
    pub p: u64,
    pub q: u64,
    pub delta: u64,
    pub e: u64,
    pub f: u64,
    pub r: u64,
    pub lift: u64,
    pub orbit_canonical: u64,
    pub side: Side,
    pub char: u64,
}

impl TripleRecord {
    pub fn to_triple(&self) -> Result<SimpleInertialTriple> {
        let endo = EndoClass::new(self.p, self.q, self.delta, self.e, self.f, self.r)?;
        let context = endo.residue_context(self.n)?;
        let orbit = context.orbit_of(self.orbit_canonical);
        if orbit.canonical() != self.orbit_canonical {
            return Err(Error::Record(format!(
                "orbit label {} is not canonical (expected {})",
                self.orbit_canonical,
                orbit.canonical()
            )));
        }
        SimpleInertialTriple::new(
            self.n,
            endo,
            self.lift,
            orbit,
            self.side,
            CoeffChar::from_label(self.char)?,
        )
    }
}
