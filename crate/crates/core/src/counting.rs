//! Exact counts `R(n;a)` of ordered pairs with `a/n = 1/x + 1/y`, and the
//! averages `S(N;a)`, `T(N;a)`, `U(N)`.
//!
//! Every quantity has at least two routes (brute force over `x`, divisors of
//! `n²` in a residue class, and the squarefree-kernel sieve `u = n₁n₂²`,
//! `n = n₁n₂n₃`) so each route can serve as the oracle for the next.

use rayon::prelude::*;

use crate::arith::{self, for_each_divisor, gcd, mobius_sieve, Factorization, SpfTable};
use crate::error::{guard, Error, Result};

/// Loop bound for [`r_bruteforce`] (`2n/a`).
pub const BRUTE_LIMIT: u64 = 100_000_000;
/// Largest `N` for [`s_direct`].
pub const S_DIRECT_LIMIT: u64 = 10_000_000;
/// Largest `N` for [`s_sieve`].
pub const S_SIEVE_LIMIT: u64 = 100_000_000;
/// Largest `N` for [`u_direct`].
pub const U_LIMIT: u64 = 1 << 22;
/// Bound on every non-final denominator searched by [`r_k_bruteforce`].
pub const RK_SEARCH_LIMIT: u64 = 1_000_000;

/// `R(n;a)` as a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolutionCount {
    pub n: u64,
    pub a: u64,
    pub count: u64,
}

impl SolutionCount {
    pub fn compute(n: u64, a: u64) -> Result<Self> {
        let f = arith::factorize(n)?;
        Ok(Self {
            n,
            a,
            count: r_divisor_method(&f, a)?,
        })
    }
}

/// Which average an [`AverageTable`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageKind {
    S,
    T,
    U,
}

/// Values of one average on an increasing grid of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AverageTable {
    pub a: u64,
    pub kind: AverageKind,
    pub rows: Vec<(u64, u64)>,
}

impl AverageTable {
    /// Evaluates `kind` on `grid` (which must be strictly increasing).
    /// `a` is ignored for [`AverageKind::U`].
    pub fn compute(kind: AverageKind, a: u64, grid: &[u64]) -> Result<Self> {
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("grid must be strictly increasing".into()));
        }
        let rows = grid
            .par_iter()
            .map(|&n| {
                let v = match kind {
                    AverageKind::S => s_sieve(n, a)?,
                    AverageKind::T => t_from_s(n, a)?,
                    AverageKind::U => u_direct(n)?,
                };
                Ok((n, v))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { a, kind, rows })
    }
}

fn check_positive(n: u64, a: u64) -> Result<()> {
    if n == 0 || a == 0 {
        return Err(Error::Domain(format!("n and a must be positive (n={n}, a={a})")));
    }
    Ok(())
}

/// `R(n;a)` by scanning `n/a < x ≤ 2n/a` and solving for `y`.
pub fn r_bruteforce(n: u64, a: u64) -> Result<u64> {
    check_positive(n, a)?;
    let hi = 2 * n / a;
    guard(hi <= BRUTE_LIMIT, "brute-force x range", BRUTE_LIMIT)?;
    let lo = n / a + 1;
    let (n, a) = (n as u128, a as u128);
    let mut count = 0;
    for x in lo..=hi {
        let x = x as u128;
        let den = a * x - n;
        let num = n * x;
        if num.is_multiple_of(den) {
            let y = num / den;
            count += match y.cmp(&x) {
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            };
        }
    }
    Ok(count)
}

/// `R(n;a)` as the number of divisors `u | n²` with `u ≡ n²/u ≡ −n (mod a)`.
///
/// Both congruences are checked, so the result is correct whether or not
/// `gcd(n, a) = 1`.
pub fn r_divisor_method(n_fact: &Factorization, a: u64) -> Result<u64> {
    let n = n_fact.value();
    check_positive(n, a)?;
    if a > 2 * n {
        return Ok(0);
    }
    let sq = n_fact.squared()?;
    guard(
        sq.num_divisors() <= arith::DIVISOR_LIMIT,
        "divisor count",
        arith::DIVISOR_LIMIT,
    )?;
    let n2 = sq.value();
    let target = (a - n % a) % a;
    let mut count = 0;
    for_each_divisor(sq.factors(), |u| {
        if u % a == target && (n2 / u) % a == target {
            count += 1;
        }
    });
    Ok(count)
}

/// `S(N;a) = Σ_{n≤N, (n,a)=1} R(n;a)`, one divisor enumeration per `n`.
pub fn s_direct(big_n: u64, a: u64) -> Result<u64> {
    check_positive(big_n, a)?;
    guard(big_n <= S_DIRECT_LIMIT, "s_direct range", S_DIRECT_LIMIT)?;
    let spf = SpfTable::new(big_n)?;
    (1..=big_n)
        .into_par_iter()
        .filter(|&n| gcd(n, a) == 1)
        .map(|n| r_divisor_method(&spf.factorize(n)?, a))
        .try_reduce(|| 0, |x, y| Ok(x + y))
}

/// Coprimality-to-`a` test, by table when `a` is small.
struct Coprime {
    a: u64,
    table: Option<Vec<bool>>,
}

impl Coprime {
    const TABLE_LIMIT: u64 = 1 << 24;

    fn new(a: u64) -> Self {
        let table = (a <= Self::TABLE_LIMIT).then(|| (0..a).map(|r| gcd(r, a) == 1).collect());
        Self { a, table }
    }

    #[inline]
    fn test(&self, n: u64) -> bool {
        match &self.table {
            Some(t) => t[(n % self.a) as usize],
            None => gcd(n, self.a) == 1,
        }
    }
}

/// `S(N;a)` as the number of triples `(n₁, n₂, n₃)` with `n₁` squarefree,
/// `n₁n₂n₃ ≤ N`, all coprime to `a`, and `a | n₂ + n₃`.
///
/// The innermost variable is counted in closed form: `n₃ ≡ −n₂ (mod a)`
/// is automatically coprime to `a`, so the count is the size of one residue
/// class below `N/(n₁n₂)`.
pub fn s_sieve(big_n: u64, a: u64) -> Result<u64> {
    check_positive(big_n, a)?;
    guard(big_n <= S_SIEVE_LIMIT, "s_sieve range", S_SIEVE_LIMIT)?;
    if a == 1 {
        return s_sieve_unrestricted(big_n);
    }
    let mu = mobius_sieve(big_n)?;
    let coprime = Coprime::new(a);
    let total = (1..=big_n)
        .into_par_iter()
        .filter(|&n1| mu[n1 as usize] != 0 && coprime.test(n1))
        .map(|n1| {
            let m = big_n / n1;
            let mut acc = 0u64;
            for n2 in 1..=m {
                if !coprime.test(n2) {
                    continue;
                }
                let x = m / n2;
                let r = a - n2 % a;
                if x >= r {
                    acc += (x - r) / a + 1;
                }
            }
            acc
        })
        .sum();
    Ok(total)
}

// a = 1: Σ_{n₁ squarefree} Σ_{n₂} ⌊N/(n₁n₂)⌋, with the inner divisor-sum
// evaluated by the hyperbola method.
fn s_sieve_unrestricted(big_n: u64) -> Result<u64> {
    let mu = mobius_sieve(big_n)?;
    Ok((1..=big_n)
        .into_par_iter()
        .filter(|&n1| mu[n1 as usize] != 0)
        .map(|n1| divisor_summatory(big_n / n1))
        .sum())
}

/// `Σ_{k≤m} d(k) = Σ_{j≤m} ⌊m/j⌋`, via `2Σ_{j≤√m}⌊m/j⌋ − ⌊√m⌋²`.
pub fn divisor_summatory(m: u64) -> u64 {
    let r = m.isqrt();
    2 * (1..=r).map(|j| m / j).sum::<u64>() - r * r
}

/// `T(N;a) = Σ_{d|a} S(N/d; a/d)`.
pub fn t_from_s(big_n: u64, a: u64) -> Result<u64> {
    check_positive(big_n, a)?;
    let fa = arith::factorize(a)?;
    let mut total = 0;
    for d in arith::divisors(&fa)? {
        let m = big_n / d;
        if m > 0 {
            total += s_sieve(m, a / d)?;
        }
    }
    Ok(total)
}

/// `T(N;a) = Σ_{n≤N} R(n;a)` by the divisor method over every `n`.
pub fn t_direct(big_n: u64, a: u64) -> Result<u64> {
    check_positive(big_n, a)?;
    guard(big_n <= S_DIRECT_LIMIT, "t_direct range", S_DIRECT_LIMIT)?;
    let spf = SpfTable::new(big_n)?;
    (1..=big_n)
        .into_par_iter()
        .map(|n| r_divisor_method(&spf.factorize(n)?, a))
        .try_reduce(|| 0, |x, y| Ok(x + y))
}

/// `U(N) = Σ_a S(N;a)`.
///
/// Counts triples `(n₁, n₂, n₃)` with `n₁` squarefree and `n₁n₂n₃ ≤ N`,
/// weighted by the number of `a | n₂ + n₃` coprime to `n₁n₂n₃`. The pair sum
/// over `n₂n₃ ≤ N/n₁` is symmetric, so it is folded by the hyperbola method.
pub fn u_direct(big_n: u64) -> Result<u64> {
    check_positive(big_n, 1)?;
    guard(big_n <= U_LIMIT, "u_direct range", U_LIMIT)?;
    let mu = mobius_sieve(big_n)?;
    let spf = SpfTable::new(big_n + 1)?;
    // number of divisors of m sharing no prime with n1·n2
    let weight = |m: u64, n1: u64, n2: u64| {
        let mut w = 1u64;
        spf.for_each_prime_power(m, |p, e| {
            if !n1.is_multiple_of(p) && !n2.is_multiple_of(p) {
                w *= e as u64 + 1;
            }
        });
        w
    };
    let total = (1..=big_n)
        .into_par_iter()
        .filter(|&n1| mu[n1 as usize] != 0)
        .map(|n1| {
            let m = big_n / n1;
            let mut acc = 0u64;
            let mut n2 = 1;
            while n2 * n2 <= m {
                acc += weight(2 * n2, n1, n2);
                for n3 in n2 + 1..=m / n2 {
                    acc += 2 * weight(n2 + n3, n1, n2);
                }
                n2 += 1;
            }
            acc
        })
        .sum();
    Ok(total)
}

/// `R_k(n;a)`: ordered `k`-tuples of positive integers with
/// `a/n = 1/x₁ + … + 1/x_k`, for `2 ≤ k ≤ 4`.
///
/// Non-decreasing tuples are enumerated and each is weighted by the number
/// of its distinct orderings.
pub fn r_k_bruteforce(n: u64, a: u64, k: u32) -> Result<u64> {
    check_positive(n, a)?;
    if !(2..=4).contains(&k) {
        return Err(Error::Domain(format!("k must lie in 2..=4, got {k}")));
    }
    let g = gcd(n, a);
    let mut tuple = Vec::with_capacity(k as usize);
    let mut count = 0;
    rk_search((a / g) as u128, (n / g) as u128, k, 1, &mut tuple, &mut count)?;
    Ok(count)
}

fn rk_search(
    num: u128,
    den: u128,
    remaining: u32,
    min_x: u128,
    tuple: &mut Vec<u128>,
    count: &mut u64,
) -> Result<()> {
    if remaining == 1 {
        if den.is_multiple_of(num) && den / num >= min_x {
            tuple.push(den / num);
            *count += orderings(tuple);
            tuple.pop();
        }
        return Ok(());
    }
    // 1/x ≤ num/den and (remaining)/x ≥ num/den
    let lo = min_x.max(den.div_ceil(num));
    let hi = remaining as u128 * den / num;
    if hi > RK_SEARCH_LIMIT as u128 {
        return Err(Error::ResourceGuard {
            what: "R_k denominator search",
            limit: RK_SEARCH_LIMIT,
        });
    }
    for x in lo..=hi {
        // num/den − 1/x = (num·x − den)/(den·x)
        let rest_num = num * x - den;
        if rest_num == 0 {
            continue;
        }
        let rest_den = den
            .checked_mul(x)
            .ok_or_else(|| Error::Domain("R_k search overflow".into()))?;
        let g = gcd_u128(rest_num, rest_den);
        tuple.push(x);
        rk_search(rest_num / g, rest_den / g, remaining - 1, x, tuple, count)?;
        tuple.pop();
    }
    Ok(())
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// k! / ∏ m_i! for a sorted tuple with multiplicities m_i
fn orderings(sorted: &[u128]) -> u64 {
    let fact = |m: usize| (1..=m as u64).product::<u64>();
    let mut denom = 1;
    let mut run = 1;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= fact(run);
            run = 1;
        }
    }
    denom *= fact(run);
    fact(sorted.len()) / denom
}
