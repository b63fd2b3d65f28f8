//! The character lattice of `F_{q^n}^*`.
//!
//! Characters of the multiplicative group are labeled by exponents
//! `k in Z/M`, `M = q^n - 1`, with respect to an implicit fixed generator
//! of the character group. The arithmetic Frobenius acts by `k -> q*k`;
//! its orbits are the Galois orbits of characters. Labels are a stable
//! cross-run convention: changing the generator multiplies every label by
//! a unit mod `M` and moves no orbit-level statement.

use crate::arith;
use crate::error::{Error, Result};
use crate::sweep::SweepBound;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The extension `F_{q^n} / F_q` together with the character-group
/// modulus `M = q^n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    /// Characteristic of `F_q`.
    pub p: u64,
    /// Cardinality of the base field; a power of `p`.
    pub q: u64,
    /// Degree of the extension.
    pub n: u64,
    /// Order of `F_{q^n}^*`.
    pub m: u64,
}

/// Orbit-size filter for [`FieldSpec::enumerate_orbits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitFilter {
    All,
    Regular,
    NonRegular,
}

/// A Galois orbit of character exponents: closed under `k -> q*k mod M`,
/// members sorted ascending, canonical representative the minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharOrbit {
    field: FieldSpec,
    members: Vec<u64>,
}

impl FieldSpec {
    /// Builds the descriptor for `F_{q^n} / F_q`, validating that `q` is a
    /// prime power and that `M = q^n - 1` fits in 64 bits.
    pub fn new(q: u64, n: u64) -> Result<FieldSpec> {
        let (p, _) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if n == 0 {
            return Err(Error::Parameter("degree n must be at least 1".into()));
        }
        let mut big: u128 = 1;
        for _ in 0..n {
            big = big
                .checked_mul(q as u128)
                .filter(|&v| v - 1 <= u64::MAX as u128)
                .ok_or_else(|| Error::ModulusOverflow(format!("{q}^{n} - 1")))?;
        }
        Ok(FieldSpec {
            p,
            q,
            n,
            m: (big - 1) as u64,
        })
    }

    /// The subextension `F_{q^d} / F_q`. Requires `d | n`.
    pub fn subfield(&self, d: u64) -> Result<FieldSpec> {
        self.check_divisor(d)?;
        FieldSpec::new(self.q, d)
    }

    /// `q^d - 1`, the character-group order of the degree-`d` subfield.
    pub fn subfield_order(&self, d: u64) -> Result<u64> {
        Ok(self.subfield(d)?.m)
    }

    fn check_divisor(&self, d: u64) -> Result<()> {
        if d == 0 || self.n % d != 0 {
            return Err(Error::NotADivisor { d, n: self.n });
        }
        Ok(())
    }

    fn reduce(&self, k: u64) -> u64 {
        if self.m == 0 {
            0
        } else {
            k % self.m
        }
    }

    /// Frobenius action `k -> k * q^i mod M`; `i` may be negative since
    /// `q^n = 1 mod M` makes `q` invertible.
    pub fn frobenius_act(&self, k: u64, i: i64) -> u64 {
        if self.m <= 1 {
            return 0;
        }
        let e = i.rem_euclid(self.n as i64) as u64;
        arith::mul_mod(self.reduce(k), arith::pow_mod(self.q, e, self.m), self.m)
    }

    /// Galois orbit of `k`: members `{k * q^i mod M}`, sorted, canonical
    /// representative the minimum.
    pub fn orbit_of(&self, k: u64) -> CharOrbit {
        let mut members = Vec::new();
        let start = self.reduce(k);
        let mut x = start;
        loop {
            members.push(x);
            x = self.frobenius_act(x, 1);
            if x == start {
                break;
            }
        }
        members.sort_unstable();
        CharOrbit {
            field: *self,
            members,
        }
    }

    /// Smallest `d | n` with `q^d * k = k mod M`; equals the orbit size.
    pub fn stabilizer_degree(&self, k: u64) -> u64 {
        let k = self.reduce(k);
        for d in arith::divisors(self.n) {
            if self.m <= 1 || arith::mul_mod(arith::pow_mod(self.q, d, self.m), k, self.m) == k {
                return d;
            }
        }
        unreachable!("q^n * k = k mod q^n - 1")
    }

    /// A character is regular when its Galois orbit has full size `n`.
    pub fn is_regular(&self, k: u64) -> bool {
        self.stabilizer_degree(k) == self.n
    }

    /// Splits `k` into its `l`-regular and `l`-primary parts.
    ///
    /// Writing `M = l^v * m` with `l` not dividing `m`, the parts are the
    /// unique pair with `k_reg = k mod m, k_reg = 0 mod l^v` and
    /// `k_prim = 0 mod m, k_prim = k mod l^v`; so `k_reg + k_prim = k`,
    /// the order of `k_reg` is coprime to `l` and the order of `k_prim`
    /// is a power of `l`. Rejects `l = p`.
    pub fn ell_decompose(&self, k: u64, l: u64) -> Result<(u64, u64)> {
        if !arith::is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if l == self.p {
            return Err(Error::EllEqualsP(l));
        }
        let k = self.reduce(k);
        let (v, unit) = arith::val_and_unit(self.m.max(1), l);
        if v == 0 {
            return Ok((k, 0));
        }
        // Idempotent e = 1 mod unit, 0 mod l^v; k_reg = k*e.
        let lv = self.m / unit;
        let e = arith::mul_mod(lv, arith::inv_mod(lv % unit, unit).unwrap(), self.m);
        let k_reg = arith::mul_mod(k, e, self.m);
        let k_prim = arith::sub_mod(k, k_reg, self.m);
        Ok((k_reg, k_prim))
    }

    /// The `l`-regular part alone.
    pub fn ell_regular_part(&self, k: u64, l: u64) -> Result<u64> {
        Ok(self.ell_decompose(k, l)?.0)
    }

    /// True when the order of `k` is coprime to `l`.
    pub fn is_ell_regular(&self, k: u64, l: u64) -> Result<bool> {
        let (reg, _) = self.ell_decompose(k, l)?;
        Ok(reg == self.reduce(k))
    }

    /// Pullback along the norm `F_{q^n}^* -> F_{q^d}^*`: the character
    /// labeled `j` of the subfield inflates to `j * (M / (q^d - 1))`.
    pub fn norm_inflate(&self, d: u64, j: u64) -> Result<u64> {
        let sub = self.subfield_order(d)?;
        if sub > 0 && j >= sub {
            return Err(Error::SubfieldCharRange { s: j, order: sub });
        }
        if self.m == 0 {
            return Ok(0);
        }
        Ok(arith::mul_mod(j, self.m / sub.max(1), self.m))
    }

    /// True iff `k` is in the image of norm inflation from degree `d`;
    /// equivalently, iff `stabilizer_degree(k)` divides `d`.
    pub fn is_norm_inflated(&self, k: u64, d: u64) -> Result<bool> {
        let sub = self.subfield_order(d)?;
        if self.m == 0 {
            return Ok(true);
        }
        Ok(self.reduce(k) % (self.m / sub.max(1)) == 0)
    }

    /// Writes `k` as the inflation of a regular subfield character:
    /// returns `(d, j)` with `d = stabilizer_degree(k)`, `j` regular over
    /// `F_{q^d}` and `norm_inflate(d, j) = k`.
    pub fn regular_descent(&self, k: u64) -> (u64, u64) {
        let k = self.reduce(k);
        let d = self.stabilizer_degree(k);
        if self.m == 0 {
            return (d, 0);
        }
        let factor = self.m / self.subfield_order(d).expect("d divides n").max(1);
        debug_assert_eq!(k % factor, 0);
        (d, k / factor)
    }

    /// Restriction to the degree-`d` subfield: `k mod (q^d - 1)`.
    pub fn restrict(&self, k: u64, d: u64) -> Result<u64> {
        let sub = self.subfield_order(d)?;
        Ok(self.reduce(k) % sub.max(1))
    }

    /// Twist by the subfield character labeled `s`: adds the inflated
    /// exponent, `k + norm_inflate(d, s) mod M`.
    pub fn twist_by_subfield_char(&self, k: u64, d: u64, s: u64) -> Result<u64> {
        let t = self.norm_inflate(d, s)?;
        Ok(arith::add_mod(self.reduce(k), t, self.m.max(1)))
    }

    /// All Galois orbits, each residue of `[0, M)` in exactly one,
    /// filtered by orbit size and sorted by canonical representative.
    pub fn enumerate_orbits(&self, filter: OrbitFilter, bound: SweepBound) -> Result<Vec<CharOrbit>> {
        bound.admit(self.m.max(1))?;
        let mut seen = vec![false; self.m.max(1) as usize];
        let mut orbits = Vec::new();
        for k in 0..self.m.max(1) {
            if seen[k as usize] {
                continue;
            }
            let orbit = self.orbit_of(k);
            for &x in orbit.members() {
                seen[x as usize] = true;
            }
            let keep = match filter {
                OrbitFilter::All => true,
                OrbitFilter::Regular => orbit.is_regular(),
                OrbitFilter::NonRegular => !orbit.is_regular(),
            };
            if keep {
                orbits.push(orbit);
            }
        }
        Ok(orbits)
    }
}

impl CharOrbit {
    /// Rebuilds an orbit from any member exponent.
    pub fn from_member(field: FieldSpec, k: u64) -> CharOrbit {
        field.orbit_of(k)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    /// Canonical representative: the minimal member.
    pub fn canonical(&self) -> u64 {
        self.members[0]
    }

    pub fn size(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn contains(&self, k: u64) -> bool {
        self.members.binary_search(&(k % self.field.m.max(1))).is_ok()
    }

    pub fn is_regular(&self) -> bool {
        self.size() == self.field.n
    }

    /// Maps every member through an exponent map that commutes with the
    /// Frobenius (multiplication by a unit, or an additive shift by a
    /// Galois-fixed exponent), yielding another orbit of the same field.
    pub(crate) fn map_members(&self, f: impl Fn(u64) -> u64) -> CharOrbit {
        let mut members: Vec<u64> = self.members.iter().map(|&k| f(k)).collect();
        members.sort_unstable();
        members.dedup();
        let out = CharOrbit {
            field: self.field,
            members,
        };
        debug_assert_eq!(out, self.field.orbit_of(out.canonical()));
        out
    }
}

impl fmt::Display for CharOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, k) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "}}")
    }
}
