//! Pseudo-random priorities: `(x + shift) * prime mod n`.
//!
//! When `gcd(prime, n) == 1` the map is a bijection on `[0, n)`, so every
//! element gets a distinct priority and nothing has to be stored.

use crate::error::DsuError;

/// Starting point for the default multiplier search. The multiplier actually
/// used is the first prime at or above this value that is coprime to `n`.
pub const DEFAULT_PRIME_START: u64 = 4_007_359_087_382_401_121;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PriorityFn {
    shift: u64,
    prime: u64,
    n: u64,
    // Residues of shift and prime modulo n.
    shift_mod: u64,
    prime_mod: u64,
}

impl PriorityFn {
    /// Builds the map, rejecting multipliers that share a factor with `n`.
    pub fn new(n: u64, shift: u64, prime: u64) -> Result<Self, DsuError> {
        if n == 0 {
            return Err(DsuError::Empty);
        }
        if gcd(prime, n) != 1 {
            return Err(DsuError::NotCoprime { prime, n });
        }
        Ok(PriorityFn {
            shift,
            prime,
            n,
            shift_mod: shift % n,
            prime_mod: prime % n,
        })
    }

    /// Builds the map with the default multiplier for `n`.
    pub fn with_default_prime(n: u64, shift: u64) -> Result<Self, DsuError> {
        Self::new(n, shift, coprime_prime_from(DEFAULT_PRIME_START, n))
    }

    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        debug_assert!(x < self.n);
        let base = (x + self.shift_mod) % self.n;
        ((base as u128 * self.prime_mod as u128) % self.n as u128) as u64
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

/// Returns `(x + f.shift) * f.prime mod f.n`.
#[inline]
pub fn priority_of(x: u64, f: &PriorityFn) -> u64 {
    f.apply(x)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// First prime `p >= start` with `gcd(p, n) == 1`.
pub fn coprime_prime_from(start: u64, n: u64) -> u64 {
    let mut p = start.max(2);
    loop {
        if is_prime(p) && gcd(p, n) == 1 {
            return p;
        }
        p = p.checked_add(1).expect("prime search overflowed u64");
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
