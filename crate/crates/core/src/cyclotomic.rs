//! Exact arithmetic in rings of cyclotomic integers.
//!
//! An element of `Z[zeta_M]` is stored as its coefficient vector in the
//! power basis `1, zeta, ..., zeta^(phi(M)-1)`, obtained by reducing an
//! integer polynomial modulo the M-th cyclotomic polynomial. Equality of
//! sums of roots of unity is decided exactly on these vectors; floating
//! point never participates in a comparison.

use crate::arith;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

/// Cyclotomic polynomials already computed, keyed by index. Append-only;
/// readers share the parsed vectors.
static CACHE: LazyLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Coefficients of the `m`-th cyclotomic polynomial, constant term
/// first. Monic of degree `phi(m)`.
///
/// Computed over the squarefree radical by repeated exact division:
/// starting from `x - 1`, each prime `p | m` replaces `f(x)` by
/// `f(x^p) / f(x)`; the prime-power part enters by substituting
/// `x^(m/rad)`. All divisions are exact in `Z[x]`.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic index must be positive");
    if let Some(hit) = CACHE.read().unwrap().get(&m) {
        return Arc::clone(hit);
    }
    let primes: Vec<u64> = arith::factorize(m).into_iter().map(|(p, _)| p).collect();
    let rad: u64 = primes.iter().product::<u64>().max(1);
    let mut f = vec![-1i64, 1];
    for &p in &primes {
        f = exact_div(&substitute_power(&f, p), &f);
    }
    let f = substitute_power(&f, m / rad);
    debug_assert_eq!(f.len() as u64 - 1, arith::euler_phi(m));
    let arc = Arc::new(f);
    CACHE
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&arc));
    arc
}

/// `f(x^k)` for `k >= 1`.
fn substitute_power(f: &[i64], k: u64) -> Vec<i64> {
    if k == 1 {
        return f.to_vec();
    }
    let mut out = vec![0i64; (f.len() - 1) * k as usize + 1];
    for (i, &c) in f.iter().enumerate() {
        out[i * k as usize] = c;
    }
    out
}

/// Exact division of integer polynomials with monic divisor; panics on a
/// nonzero remainder, which would indicate a bug, not bad input.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    debug_assert_eq!(*den.last().unwrap(), 1);
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - dd] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i - dd + j] -= c * dj;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

/// An element of `Z[zeta_M]` in reduced power-basis form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicValue {
    modulus: u64,
    coeffs: Vec<i64>,
}

impl CyclotomicValue {
    /// Reduces a dense integer polynomial (exponent `i` holds the
    /// coefficient of `zeta^i`) modulo the `modulus`-th cyclotomic
    /// polynomial.
    pub fn from_dense(modulus: u64, dense: Vec<i64>) -> CyclotomicValue {
        let phi = cyclotomic_polynomial(modulus);
        let mut dense = dense;
        reduce_in_place(&mut dense, &phi);
        dense.resize(phi.len() - 1, 0);
        CyclotomicValue {
            modulus,
            coeffs: dense,
        }
    }

    /// `sign * sum_i zeta^(exponents[i])`, exponents taken mod `modulus`.
    pub fn root_of_unity_sum(modulus: u64, exponents: &[u64], sign: i64) -> Result<CyclotomicValue> {
        let mut dense = vec![0i64; modulus as usize];
        for &e in exponents {
            dense[(e % modulus) as usize] = dense[(e % modulus) as usize]
                .checked_add(sign)
                .ok_or_else(|| Error::Parameter("coefficient overflow".into()))?;
        }
        Ok(CyclotomicValue::from_dense(modulus, dense))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Power-basis coefficients, length `phi(modulus)`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Floating-point image under `zeta -> exp(2 pi i / M)`, for display
    /// only; never used in comparisons.
    pub fn approx(&self) -> (f64, f64) {
        let m = self.modulus as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (j, &c) in self.coeffs.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * j as f64 / m;
            re += c as f64 * t.cos();
            im += c as f64 * t.sin();
        }
        (re, im)
    }
}

impl fmt::Display for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// In-place reduction modulo a monic polynomial given by `phi`.
fn reduce_in_place(dense: &mut Vec<i64>, phi: &[i64]) {
    let deg = phi.len() - 1;
    if dense.len() <= deg {
        return;
    }
    for i in (deg..dense.len()).rev() {
        let c = dense[i];
        if c == 0 {
            continue;
        }
        dense[i] = 0;
        for (j, &pj) in phi[..deg].iter().enumerate() {
            dense[i - deg + j] -= c * pj;
        }
    }
    dense.truncate(deg);
}

/// Streams the reduced powers `x^0, x^1, x^2, ... mod Phi_M` in order,
/// one multiplication by `x` per step. Used by sweeps that need every
/// power of the root of unity without storing a table.
pub struct PowerStepper {
    phi: Arc<Vec<i64>>,
    v: Vec<i64>,
}

impl PowerStepper {
    /// Starts at `x^0 = 1`.
    pub fn new(modulus: u64) -> PowerStepper {
        let phi = cyclotomic_polynomial(modulus);
        let mut v = vec![0i64; phi.len() - 1];
        if let Some(first) = v.first_mut() {
            *first = 1;
        }
        PowerStepper { phi, v }
    }

    /// Reduced coefficients of the current power, length `phi(M)`.
    pub fn current(&self) -> &[i64] {
        &self.v
    }

    /// Advances to the next power of `x`.
    pub fn step(&mut self) {
        let deg = self.v.len();
        let carry = self.v[deg - 1];
        for j in (1..deg).rev() {
            self.v[j] = self.v[j - 1];
        }
        self.v[0] = 0;
        if carry != 0 {
            for (j, &pj) in self.phi[..deg].iter().enumerate() {
                self.v[j] -= carry * pj;
            }
        }
    }
}
