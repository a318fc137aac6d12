//! Prime-field context: modular arithmetic, discrete logarithms, and the
//! additive and multiplicative characters of `Z/pZ`.
//!
//! For an odd prime `p` with primitive root `g`, the additive characters
//! are `e_p(z) = exp(2*pi*i*z/p)` and the multiplicative characters are
//! indexed by `t` in `0..p-1`:
//!
//! ```text
//!     chi_t(g^j) = exp(2*pi*i*t*j/(p-1)),      chi_t(0) = 0.
//! ```
//!
//! `t = 0` is the principal character (1 on units, 0 at zero). A
//! [`FieldCtx`] precomputes the discrete-log table and both families of
//! roots of unity once, so that character evaluation inside summation
//! loops is a table lookup.

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

/// Default cap on table memory per context, in bytes (1 GiB).
///
/// A context for prime `p` stores roughly `36 * p` bytes of tables, so
/// the default admits every `p` below `2^31` that fits the arithmetic
/// anyway. Lower caps are useful in tests and in memory-constrained runs;
/// see [`FieldCtx::with_memory_cap`].
pub const DEFAULT_MEMORY_CAP: usize = 1 << 30;

/// Largest supported prime, exclusive. Products of two reduced residues
/// must fit in `u64`, so `p < 2^31`.
pub const MAX_PRIME: u64 = 1 << 31;

/// Errors from context construction and character evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// The requested modulus is not prime.
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    /// The modulus exceeds the arithmetic range or the table memory cap.
    #[error("prime {p} needs {needed} bytes of tables, cap is {cap}")]
    TooLarge { p: u64, needed: u64, cap: u64 },
    /// A multiplicative character index outside `0..=p-2`.
    #[error("character index {t} out of range 0..={max}")]
    IndexOutOfRange { t: u32, max: u32 },
}

/// Identifies one precomputed table entry to corrupt, for self-check
/// machinery that must demonstrate it can detect a broken context.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFault {
    /// Perturb one discrete-log entry.
    Dlog,
    /// Perturb one additive root of unity.
    AddRoot,
    /// Perturb one multiplicative root of unity.
    MultRoot,
}

impl TableFault {
    /// The name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            TableFault::Dlog => "dlog",
            TableFault::AddRoot => "add-root",
            TableFault::MultRoot => "mult-root",
        }
    }

    /// Parses a fault name; `None` for anything unknown.
    pub fn parse(name: &str) -> Option<TableFault> {
        [TableFault::Dlog, TableFault::AddRoot, TableFault::MultRoot]
            .into_iter()
            .find(|f| f.name() == name)
    }
}

/// Precomputed data for one prime field.
///
/// Construction validates primality, picks the smallest primitive root,
/// and fills three tables: `ind[x]` with the discrete log of each unit
/// `x` to base `g`, the `p`-th roots of unity, and the `(p-1)`-th roots
/// of unity. All character evaluations reduce to lookups in these.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    g: u32,
    /// `ind[x] = j` with `g^j == x (mod p)` for `1 <= x < p`; `ind[0]` unused.
    ind: Vec<u32>,
    /// `add_roots[z] = exp(2*pi*i*z/p)` for `0 <= z < p`.
    add_roots: Vec<Complex64>,
    /// `mult_roots[j] = exp(2*pi*i*j/(p-1))` for `0 <= j < p-1`.
    mult_roots: Vec<Complex64>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

/// Modular exponentiation `base^exp mod modulus` by square and multiply.
///
/// `modulus` must be nonzero. The convention `0^0 = 1` applies. Products
/// are taken in `u128`, so any `u64` modulus is safe.
pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> u64 {
    assert!(modulus != 0, "zero modulus");
    if modulus == 1 {
        return 0;
    }
    let mut result: u64 = 1;
    let mut base = base % modulus;
    let mut exp = exp;
    while exp > 0 {
        if exp & 1 == 1 {
            result = ((result as u128 * base as u128) % modulus as u128) as u64;
        }
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
        exp >>= 1;
    }
    result
}

/// Deterministic Miller-Rabin primality test, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    // These witnesses decide primality for every n < 3.3 * 10^24.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The distinct prime factors of `n`, ascending, by trial division.
fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The smallest primitive root modulo the prime `p`.
fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    'candidate: for g in 2..p {
        for &q in &factors {
            if mod_pow(g, (p - 1) / q, p) == 1 {
                continue 'candidate;
            }
        }
        return g;
    }
    unreachable!("every odd prime has a primitive root below p")
}

impl FieldCtx {
    /// Builds a context for the prime `p` under the default memory cap.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        Self::with_memory_cap(p, DEFAULT_MEMORY_CAP)
    }

    /// Builds a context for the prime `p`, refusing to allocate more
    /// than `cap_bytes` of table memory.
    pub fn with_memory_cap(p: u64, cap_bytes: usize) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        // ind: 4 bytes per residue; add_roots: 16 per residue;
        // mult_roots: 16 per unit.
        let needed = 4 * p + 16 * p + 16 * (p - 1);
        if p >= MAX_PRIME || needed > cap_bytes as u64 {
            return Err(FieldError::TooLarge {
                p,
                needed,
                cap: cap_bytes.min(u64::MAX as usize) as u64,
            });
        }
        let g = smallest_primitive_root(p);
        let p32 = p as u32;
        let m = p - 1;

        let mut ind = vec![0u32; p as usize];
        let mut x = 1u64;
        for j in 0..m {
            ind[x as usize] = j as u32;
            x = x * g % p;
        }
        debug_assert_eq!(x, 1, "powers of a primitive root must cycle back to 1");

        let add_roots: Vec<Complex64> = (0..p)
            .map(|z| Complex64::from_polar(1.0, TAU * z as f64 / p as f64))
            .collect();
        let mult_roots: Vec<Complex64> = (0..m)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / m as f64))
            .collect();

        Ok(FieldCtx {
            p: p32,
            g: g as u32,
            ind,
            add_roots,
            mult_roots,
        })
    }

    /// The prime modulus.
    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// The chosen primitive root (always the smallest one).
    #[inline]
    pub fn generator(&self) -> u32 {
        self.g
    }

    /// The order `p - 1` of the unit group, which is also the number of
    /// multiplicative characters.
    #[inline]
    pub fn group_order(&self) -> u32 {
        self.p - 1
    }

    /// Reduces an arbitrary `u64` modulo `p`.
    #[inline]
    pub fn reduce(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    /// The additive inverse of a reduced residue.
    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        debug_assert!(x < self.p);
        if x == 0 {
            0
        } else {
            self.p - x
        }
    }

    /// The multiplicative inverse of a nonzero reduced residue.
    pub fn inv(&self, x: u32) -> u32 {
        assert!(x != 0 && x < self.p, "inverse of non-unit {x}");
        mod_pow(x as u64, self.p as u64 - 2, self.p as u64) as u32
    }

    /// Discrete logarithm of the unit `x` to base [`Self::generator`].
    ///
    /// Panics if `x` is zero or not reduced; callers route `x = 0`
    /// through the `chi(0) = 0` convention before reaching this.
    #[inline]
    pub fn dlog(&self, x: u32) -> u32 {
        assert!(x != 0 && x < self.p, "discrete log of non-unit {x}");
        self.ind[x as usize]
    }

    /// Additive character `e_p(z) = exp(2*pi*i*z/p)` of an arbitrary `u64`.
    #[inline]
    pub fn add_char(&self, z: u64) -> Complex64 {
        self.add_roots[(z % self.p as u64) as usize]
    }

    /// Multiplicative character `chi_t(x)`.
    ///
    /// `t` must lie in `0..=p-2`; `x` must be reduced. Returns `0` at
    /// `x = 0` for every `t`, including the principal character `t = 0`.
    pub fn mult_char(&self, t: u32, x: u32) -> Result<Complex64, FieldError> {
        let m = self.p - 1;
        if t >= m {
            return Err(FieldError::IndexOutOfRange { t, max: m - 1 });
        }
        assert!(x < self.p, "residue {x} not reduced mod {}", self.p);
        if x == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let j = (t as u64 * self.ind[x as usize] as u64 % m as u64) as usize;
        Ok(self.mult_roots[j])
    }

    /// Raw table access for summation kernels.
    #[inline]
    pub(crate) fn ind_table(&self) -> &[u32] {
        &self.ind
    }

    #[inline]
    pub(crate) fn mult_roots(&self) -> &[Complex64] {
        &self.mult_roots
    }

    /// Corrupts one table entry in place. Exists so the self-check
    /// battery can prove its consistency checks have teeth; never call
    /// this in ordinary code.
    #[doc(hidden)]
    pub fn inject_table_fault(&mut self, fault: TableFault) {
        match fault {
            TableFault::Dlog => {
                // Shift the discrete log of 2 by one; p = 2 has no
                // entry to shift and the tables are trivially correct.
                if self.p > 2 {
                    self.ind[2] = (self.ind[2] + 1) % (self.p - 1);
                }
            }
            TableFault::AddRoot => {
                self.add_roots[1] = -self.add_roots[1];
            }
            TableFault::MultRoot => {
                let m = (self.p - 1) as usize;
                self.mult_roots[1 % m] = -self.mult_roots[1 % m];
            }
        }
    }
}
