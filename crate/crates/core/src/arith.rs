//! Integer primitives: primality, factorization, divisors and the
//! multiplicative-function sieves used by every counting routine.

use std::sync::OnceLock;

use crate::error::{guard, Error, Result};

/// Largest argument accepted by [`factorize`].
pub const FACTORIZE_LIMIT: u64 = 1 << 63;
/// Largest range accepted by the bulk sieves.
pub const SIEVE_LIMIT: u64 = 100_000_000;
/// Largest divisor list [`divisors`] will materialise.
pub const DIVISOR_LIMIT: u64 = 10_000_000;

const TRIAL_BOUND: u64 = 1_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Deterministic Miller–Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, d, n);
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

/// All primes `≤ n`, by an odd-only sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let half = ((n - 1) / 2) as usize; // index i <-> 2i+1
    let mut composite = vec![false; half + 1];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j <= half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = vec![2];
    out.extend((1..=half).filter(|&i| !composite[i]).map(|i| 2 * i as u64 + 1));
    out
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_BOUND))
}

/// Prime-power decomposition of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs, checking every
    /// invariant.
    pub fn from_factors(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        let mut value = 1u64;
        for (i, &(p, e)) in factors.iter().enumerate() {
            if e == 0 || !is_prime(p) || (i > 0 && factors[i - 1].0 == p) {
                return Err(Error::Domain(format!("bad prime power {p}^{e}")));
            }
            for _ in 0..e {
                value = value
                    .checked_mul(p)
                    .ok_or_else(|| Error::Domain("factorization overflows u64".into()))?;
            }
        }
        Ok(Self { value, factors })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// `d(value)`.
    pub fn num_divisors(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Factorization of `value²`, or an error if it leaves `u64`.
    pub fn squared(&self) -> Result<Self> {
        let value = self
            .value
            .checked_mul(self.value)
            .ok_or_else(|| Error::Domain(format!("{}^2 overflows u64", self.value)))?;
        Ok(Self {
            value,
            factors: self.factors.iter().map(|&(p, e)| (p, 2 * e)).collect(),
        })
    }
}

/// Complete factorization of `1 ≤ n < 2^63`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factorize 0".into()));
    }
    if n >= FACTORIZE_LIMIT {
        return Err(Error::Domain(format!("{n} is not below 2^63")));
    }
    let mut m = n;
    let mut factors = Vec::new();
    for &p in small_primes() {
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        let mut large = Vec::new();
        split_large(m, &mut large);
        large.sort_unstable();
        for p in large {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    Ok(Factorization { value: n, factors })
}

// m has no prime factor below TRIAL_BOUND (or is itself prime).
fn split_large(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.push(m);
        return;
    }
    let d = pollard_brent(m);
    split_large(d, out);
    split_large(m / d, out);
}

/// Brent's variant of Pollard's rho with a deterministic sequence of
/// polynomial offsets. `n` must be an odd composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut ys = 0u64;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// All divisors of `f.value()`, ascending.
pub fn divisors(f: &Factorization) -> Result<Vec<u64>> {
    let count = f.num_divisors();
    guard(count <= DIVISOR_LIMIT, "divisor count", DIVISOR_LIMIT)?;
    let mut out = Vec::with_capacity(count as usize);
    for_each_divisor(f.factors(), |d| out.push(d));
    out.sort_unstable();
    Ok(out)
}

/// Visits every divisor of `∏ p^e` (unordered). Callers are responsible for
/// keeping the product within `u64`.
pub fn for_each_divisor(factors: &[(u64, u32)], mut visit: impl FnMut(u64)) {
    fn rec(factors: &[(u64, u32)], acc: u64, visit: &mut impl FnMut(u64)) {
        match factors.split_first() {
            None => visit(acc),
            Some((&(p, e), rest)) => {
                let mut d = acc;
                for i in 0..=e {
                    rec(rest, d, visit);
                    if i < e {
                        d *= p;
                    }
                }
            }
        }
    }
    rec(factors, 1, &mut visit);
}

/// Euler's totient from a factorization.
pub fn totient(f: &Factorization) -> u64 {
    f.factors()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// `μ(n)` for `0 ≤ n ≤ limit`; entry 0 is unused and set to 0.
pub fn mobius_sieve(limit: u64) -> Result<Vec<i8>> {
    guard(limit <= SIEVE_LIMIT, "mobius sieve range", SIEVE_LIMIT)?;
    let n = limit as usize;
    let mut mu = vec![1i8; n + 1];
    mu[0] = 0;
    for p in primes_up_to(limit) {
        let p = p as usize;
        for m in (p..=n).step_by(p) {
            mu[m] = -mu[m];
        }
        if let Some(sq) = p.checked_mul(p).filter(|&sq| sq <= n) {
            for m in (sq..=n).step_by(sq) {
                mu[m] = 0;
            }
        }
    }
    Ok(mu)
}

/// Smallest-prime-factor table for bulk factorization of every `n ≤ limit`.
#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: u64) -> Result<Self> {
        guard(limit <= SIEVE_LIMIT, "spf table range", SIEVE_LIMIT)?;
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `2 ≤ n ≤ limit`.
    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    /// Calls `visit(p, e)` for each prime power `p^e ‖ n`, increasing `p`.
    #[inline]
    pub fn for_each_prime_power(&self, mut n: u64, mut visit: impl FnMut(u64, u32)) {
        debug_assert!(n >= 1 && n <= self.limit);
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            visit(p, e);
        }
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 || n > self.limit {
            return Err(Error::Domain(format!(
                "{n} outside spf table range 1..={}",
                self.limit
            )));
        }
        let mut factors = Vec::new();
        self.for_each_prime_power(n, |p, e| factors.push((p, e)));
        Ok(Factorization { value: n, factors })
    }
}
