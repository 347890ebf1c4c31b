//! Dirichlet characters modulo `a` with exact root-of-unity values, the
//! coefficients `a_n(χ) = χ̄(n) Σ_{u|n²} χ(u)`, the character decomposition
//! of `S(N;a)`, and `L(1,χ)`.
//!
//! `(ℤ/aℤ)^×` is split into cyclic components: one per odd prime power
//! (generated by a primitive root) and up to two for the power of two
//! (`−1` and `5`). A character is an exponent tuple against those generators;
//! its values are rotations `k/d` of the unit circle and stay exact until
//! they are evaluated in floating point.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::special::{digamma, hurwitz_zeta};
use crate::arith::{self, for_each_divisor, gcd, pow_mod, Factorization, SpfTable};
use crate::error::{guard, Error, Result};

/// Largest modulus accepted by [`CharacterGroup::build`].
pub const MODULUS_LIMIT: u64 = 1_000_000;
/// Integer-rounding tolerance in [`s_via_characters`].
pub const ROUNDING_TOLERANCE: f64 = 1e-6;
/// Cap on the truncation point of [`l1_truncated`].
pub const L1_TRUNCATION_CAP: u64 = 100_000_000;

/// A character value: zero, or `exp(2πi k/d)` with `0 ≤ k < d`, `gcd(k,d)=1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterValue {
    Zero,
    Root { k: u64, d: u64 },
}

impl CharacterValue {
    fn from_log(t: u64, exponent: u64) -> Self {
        let g = gcd(t, exponent);
        Self::Root {
            k: t / g,
            d: exponent / g,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            Self::Zero => Complex64::new(0.0, 0.0),
            Self::Root { k, d } => Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64),
        }
    }

    pub fn conj(self) -> Self {
        match self {
            Self::Zero => Self::Zero,
            Self::Root { k, d } => Self::Root { k: (d - k) % d, d },
        }
    }

    pub fn is_one(self) -> bool {
        matches!(self, Self::Root { k: 0, .. })
    }
}

/// Exponent tuple naming one character against the group's generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacterIndex(pub Vec<u64>);

#[derive(Debug, Clone)]
struct Component {
    /// prime-power modulus `q` this component lives in
    prime_power: u64,
    order: u64,
    /// generator as a residue mod `a` (≡ 1 modulo the other prime powers)
    generator: u64,
    /// discrete log mod `order` of each residue mod `q`; `u32::MAX` off units
    dlog: Vec<u32>,
}

/// The full group of `φ(a)` Dirichlet characters modulo `a`.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    modulus: u64,
    factorization: Factorization,
    components: Vec<Component>,
    /// lcm of the component orders; every value is a rotation by `t/exponent`
    exponent: u64,
    size: u64,
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Smallest primitive root modulo an odd prime power `p^e`.
fn primitive_root(p: u64, e: u32) -> u64 {
    let order = p - 1;
    let fo = arith::factorize(order).expect("p - 1 is positive");
    (2..p)
        .find(|&g| {
            fo.primes().all(|r| pow_mod(g, order / r, p) != 1)
                && (e == 1 || pow_mod(g, p - 1, p * p) != 1)
        })
        .unwrap_or(1)
}

// x ≡ r (mod q), x ≡ 1 (mod a/q)
fn crt_lift(r: u64, q: u64, a: u64) -> u64 {
    let rest = a / q;
    if rest == 1 {
        return r % a;
    }
    // x = 1 + rest·t with rest·t ≡ r − 1 (mod q)
    let inv = mod_inverse(rest % q, q);
    let t = arith::mul_mod((r + q - 1) % q, inv, q);
    (1 + rest * t) % a
}

fn mod_inverse(x: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (x as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

impl CharacterGroup {
    pub fn build(a: u64) -> Result<Self> {
        if a == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        guard(a <= MODULUS_LIMIT, "character modulus", MODULUS_LIMIT)?;
        let factorization = arith::factorize(a)?;
        let mut components = Vec::new();
        for &(p, e) in factorization.factors() {
            let q = p.pow(e);
            if p == 2 {
                if e == 1 {
                    // only detects even residues
                    components.push(Component {
                        prime_power: 2,
                        order: 1,
                        generator: crt_lift(1, 2, a),
                        dlog: vec![u32::MAX, 0],
                    });
                    continue;
                }
                // odd r ≡ (−1)^α 5^β (mod 2^e)
                let half = if e == 2 { 1 } else { q / 4 };
                let mut minus = vec![u32::MAX; q as usize];
                let mut five = vec![u32::MAX; q as usize];
                let mut v = 1u64;
                for beta in 0..half {
                    minus[v as usize] = 0;
                    five[v as usize] = beta as u32;
                    minus[(q - v) as usize] = 1;
                    five[(q - v) as usize] = beta as u32;
                    v = v * 5 % q;
                }
                components.push(Component {
                    prime_power: q,
                    order: 2,
                    generator: crt_lift(q - 1, q, a),
                    dlog: minus,
                });
                if e >= 3 {
                    components.push(Component {
                        prime_power: q,
                        order: half,
                        generator: crt_lift(5, q, a),
                        dlog: five,
                    });
                }
            } else {
                let g = primitive_root(p, e);
                let order = q / p * (p - 1);
                let mut dlog = vec![u32::MAX; q as usize];
                let mut v = 1u64;
                for k in 0..order {
                    dlog[v as usize] = k as u32;
                    v = v * g % q;
                }
                components.push(Component {
                    prime_power: q,
                    order,
                    generator: crt_lift(g, q, a),
                    dlog,
                });
            }
        }
        let exponent = components.iter().fold(1, |acc, c| lcm(acc, c.order));
        let size = components.iter().map(|c| c.order).product();
        debug_assert_eq!(size, arith::totient(&factorization));
        Ok(Self {
            modulus: a,
            factorization,
            components,
            exponent,
            size,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    /// Number of characters, `φ(a)`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Exponent of the group: every character value is a `exponent`-th root
    /// of unity.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `(generator residue, order)` per cyclic component.
    pub fn generators(&self) -> Vec<(u64, u64)> {
        self.components.iter().map(|c| (c.generator, c.order)).collect()
    }

    pub fn principal(&self) -> CharacterIndex {
        CharacterIndex(vec![0; self.components.len()])
    }

    pub fn is_principal(&self, chi: &CharacterIndex) -> bool {
        chi.0.iter().all(|&j| j == 0)
    }

    pub fn conj(&self, chi: &CharacterIndex) -> CharacterIndex {
        CharacterIndex(
            chi.0
                .iter()
                .zip(&self.components)
                .map(|(&j, c)| (c.order - j) % c.order)
                .collect(),
        )
    }

    /// All `φ(a)` characters, principal first.
    pub fn characters(&self) -> impl Iterator<Item = CharacterIndex> + '_ {
        let orders: Vec<u64> = self.components.iter().map(|c| c.order).collect();
        (0..self.size).map(move |mut idx| {
            let mut v = Vec::with_capacity(orders.len());
            for &o in &orders {
                v.push(idx % o);
                idx /= o;
            }
            CharacterIndex(v)
        })
    }

    /// `χ(m)` as a rotation `t/exponent`, or `None` when `gcd(m, a) > 1`.
    #[inline]
    pub fn log_value(&self, chi: &CharacterIndex, m: u64) -> Option<u64> {
        let mut t = 0u64;
        for (c, &j) in self.components.iter().zip(&chi.0) {
            let ind = c.dlog[(m % c.prime_power) as usize];
            if ind == u32::MAX {
                return None;
            }
            let local = j * ind as u64 % c.order;
            t += local * (self.exponent / c.order);
        }
        Some(t % self.exponent)
    }

    pub fn value(&self, chi: &CharacterIndex, m: u64) -> CharacterValue {
        match self.log_value(chi, m) {
            Some(t) => CharacterValue::from_log(t, self.exponent),
            None => CharacterValue::Zero,
        }
    }

    pub fn eval(&self, chi: &CharacterIndex, m: u64) -> Complex64 {
        self.value(chi, m).to_complex()
    }

    /// `χ(−1) ∈ {±1}`.
    pub fn parity(&self, chi: &CharacterIndex) -> f64 {
        if self.modulus <= 2 {
            return 1.0;
        }
        match self.log_value(chi, self.modulus - 1) {
            Some(0) => 1.0,
            Some(_) => -1.0,
            None => unreachable!("-1 is a unit"),
        }
    }

    /// Per-residue rotations `t` (indexed by `r mod a`), `None` off units.
    fn log_table(&self, chi: &CharacterIndex) -> Vec<Option<u64>> {
        (0..self.modulus).map(|r| self.log_value(chi, r)).collect()
    }

    fn roots(&self) -> Vec<Complex64> {
        (0..self.exponent)
            .map(|t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / self.exponent as f64))
            .collect()
    }
}

/// A formal sum `Σ c_t ζ^t` of `exponent`-th roots of unity with integer
/// multiplicities, for exact zero tests.
#[derive(Debug, Clone)]
pub struct RootSum {
    counts: Vec<u64>,
}

impl RootSum {
    pub fn new(exponent: u64) -> Self {
        Self {
            counts: vec![0; exponent as usize],
        }
    }

    pub fn add(&mut self, t: u64) {
        self.counts[t as usize] += 1;
    }

    /// If every term is `ζ⁰`, the (integer) value of the sum.
    pub fn as_integer(&self) -> Option<u64> {
        let total: u64 = self.counts.iter().sum();
        (self.counts[0] == total).then_some(total)
    }

    /// Exact zero certificate: the multiset is invariant under rotation by
    /// some `ζ^h ≠ 1`, so the sum equals `ζ^h` times itself.
    pub fn is_zero(&self) -> bool {
        let n = self.counts.len();
        if self.counts.iter().all(|&c| c == 0) {
            return true;
        }
        (1..n)
            .filter(|h| n.is_multiple_of(*h))
            .any(|h| (0..n).all(|t| self.counts[t] == self.counts[(t + h) % n]))
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.counts.len() as f64;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(t, &c)| c as f64 * Complex64::from_polar(1.0, 2.0 * PI * t as f64 / n))
            .sum()
    }
}

/// Exact orthogonality sum `Σ_χ χ(m) χ̄(n)` for units `m, n`.
pub fn orthogonality_sum(group: &CharacterGroup, m: u64, n: u64) -> RootSum {
    let e = group.exponent();
    let mut sum = RootSum::new(e);
    for chi in group.characters() {
        if let (Some(tm), Some(tn)) = (group.log_value(&chi, m), group.log_value(&chi, n)) {
            sum.add((tm + e - tn) % e);
        }
    }
    sum
}

/// Checks orthogonality exactly over every pair of units mod `a`.
pub fn verify_orthogonality(group: &CharacterGroup) -> Result<()> {
    let a = group.modulus();
    let units: Vec<u64> = (0..a).filter(|&r| gcd(r, a) == 1).collect();
    for &m in &units {
        for &n in &units {
            let s = orthogonality_sum(group, m, n);
            let ok = if m == n {
                s.as_integer() == Some(group.size())
            } else {
                s.is_zero()
            };
            if !ok {
                return Err(Error::Consistency(format!(
                    "orthogonality fails mod {a} at ({m}, {n})"
                )));
            }
        }
    }
    Ok(())
}

/// `a_n(χ) = χ̄(n) Σ_{u|n²} χ(u)`.
pub fn a_n(group: &CharacterGroup, chi: &CharacterIndex, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let chi_bar_n = group.value(chi, n).conj();
    if chi_bar_n == CharacterValue::Zero {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let sq = arith::factorize(n)?.squared()?;
    let mut sum = RootSum::new(group.exponent());
    for_each_divisor(sq.factors(), |u| {
        if let Some(t) = group.log_value(chi, u) {
            sum.add(t);
        }
    });
    Ok(chi_bar_n.to_complex() * sum.to_complex())
}

/// Bounds for [`s_via_characters`].
pub const S_CHARS_N_LIMIT: u64 = 100_000;
pub const S_CHARS_A_LIMIT: u64 = 100;

/// `S(N;a) = φ(a)⁻¹ Σ_χ χ̄(−1) Σ_{n≤N} a_n(χ)`, evaluated in floating point
/// and rounded; fails with [`Error::Consistency`] if the sum is not an
/// integer to within [`ROUNDING_TOLERANCE`].
///
/// The pairs `(u mod a, n mod a)` over `n ≤ N`, `u | n²` are tallied once, so
/// each character costs `O(φ(a)²)` rather than `O(N log² N)`.
pub fn s_via_characters(big_n: u64, a: u64) -> Result<u64> {
    if big_n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    guard(big_n <= S_CHARS_N_LIMIT, "s_via_characters N", S_CHARS_N_LIMIT)?;
    guard(a <= S_CHARS_A_LIMIT, "s_via_characters a", S_CHARS_A_LIMIT)?;
    let group = CharacterGroup::build(a)?;
    let spf = SpfTable::new(big_n)?;
    let au = a as usize;
    let mut tally = vec![0u64; au * au];
    for n in 1..=big_n {
        if gcd(n, a) != 1 {
            continue;
        }
        let sq = spf.factorize(n)?.squared()?;
        let s = (n % a) as usize;
        for_each_divisor(sq.factors(), |u| tally[(u % a) as usize * au + s] += 1);
    }
    let roots = group.roots();
    let e = group.exponent();
    let mut total = Complex64::new(0.0, 0.0);
    for chi in group.characters() {
        let logs = group.log_table(&chi);
        let parity = group.parity(&chi);
        let mut inner = Complex64::new(0.0, 0.0);
        for r in 0..au {
            let Some(tr) = logs[r] else { continue };
            for s in 0..au {
                let c = tally[r * au + s];
                if c == 0 {
                    continue;
                }
                let ts = logs[s].expect("n is a unit");
                inner += c as f64 * roots[((tr + e - ts) % e) as usize];
            }
        }
        total += parity * inner;
    }
    let value = total / group.size() as f64;
    let rounded = value.re.round();
    if value.im.abs() > ROUNDING_TOLERANCE || (value.re - rounded).abs() > ROUNDING_TOLERANCE {
        return Err(Error::Consistency(format!(
            "character sum for S({big_n};{a}) is {value}, not an integer"
        )));
    }
    Ok(rounded as u64)
}

/// `Σ_{n≤x, n≡r (mod a)} 1/n` for `1 ≤ r ≤ a`.
fn class_harmonic(a: u64, r: u64, x: u64) -> f64 {
    if x < r {
        return 0.0;
    }
    let terms = (x - r) / a + 1;
    if terms <= 1 << 16 {
        (0..terms).rev().map(|k| 1.0 / (k * a + r) as f64).sum()
    } else {
        // Σ_{k<K} 1/(ka + r) = (ψ(K + r/a) − ψ(r/a)) / a
        let q = r as f64 / a as f64;
        (digamma(terms as f64 + q) - digamma(q)) / a as f64
    }
}

fn require_non_principal(group: &CharacterGroup, chi: &CharacterIndex) -> Result<()> {
    if group.is_principal(chi) {
        return Err(Error::Domain("L(1, χ) needs a non-principal character".into()));
    }
    Ok(())
}

/// `Σ_{n≤x} χ(n)/n` for non-principal `χ`.
pub fn l1_truncated(group: &CharacterGroup, chi: &CharacterIndex, x: u64) -> Result<Complex64> {
    require_non_principal(group, chi)?;
    let a = group.modulus();
    let mut sum = Complex64::new(0.0, 0.0);
    for r in 1..=a {
        if let Some(t) = group.log_value(chi, r) {
            let v = CharacterValue::from_log(t, group.exponent()).to_complex();
            sum += v * class_harmonic(a, r, x);
        }
    }
    Ok(sum)
}

/// `L(1, χ) = −a⁻¹ Σ_{r=1}^{a} χ(r) ψ(r/a)` for non-principal `χ`.
pub fn l1_exact(group: &CharacterGroup, chi: &CharacterIndex) -> Result<Complex64> {
    require_non_principal(group, chi)?;
    let a = group.modulus();
    let mut sum = Complex64::new(0.0, 0.0);
    for r in 1..a {
        if let Some(t) = group.log_value(chi, r) {
            let v = CharacterValue::from_log(t, group.exponent()).to_complex();
            sum += v * digamma(r as f64 / a as f64);
        }
    }
    Ok(-sum / a as f64)
}

/// `L(s, χ) = a^{-s} Σ_r χ(r) ζ(s, r/a)` for real `s > 1`.
pub fn dirichlet_l(group: &CharacterGroup, chi: &CharacterIndex, s: f64) -> Result<Complex64> {
    if s <= 1.0 {
        return Err(Error::Domain(format!("L(s, χ) is only evaluated for s > 1, got {s}")));
    }
    let a = group.modulus();
    let sc = Complex64::new(s, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for r in 1..=a {
        let v = group.eval(chi, r);
        if v.norm() > 0.0 {
            sum += v * hurwitz_zeta(sc, r as f64 / a as f64)?;
        }
    }
    Ok(sum * (a as f64).powf(-s))
}

/// How `L(1, χ)` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L1Mode {
    /// The partial sum up to `x = a³`, capped at [`L1_TRUNCATION_CAP`].
    Truncated,
    /// The digamma closed form.
    Exact,
}

/// Default truncation point `a³`, capped.
pub fn default_truncation(a: u64) -> u64 {
    match a.checked_pow(3) {
        Some(x) if x <= L1_TRUNCATION_CAP => x,
        _ => {
            warn!("a^3 exceeds {L1_TRUNCATION_CAP}; truncating L(1, χ) there instead");
            L1_TRUNCATION_CAP
        }
    }
}

/// `φ(a)⁻¹ Σ_{χ≠χ₀} χ̄(−1) |L(1,χ)|²`.
///
/// The class weights do not depend on `χ`, so they are computed once and each
/// character costs one pass over the residues.
pub fn nonprincipal_average(group: &CharacterGroup, mode: L1Mode) -> Result<f64> {
    let a = group.modulus();
    let weights: Vec<f64> = match mode {
        L1Mode::Truncated => {
            let x = default_truncation(a);
            (0..a).into_par_iter().map(|r| class_harmonic(a, if r == 0 { a } else { r }, x)).collect()
        }
        L1Mode::Exact => (0..a)
            .map(|r| -digamma(if r == 0 { 1.0 } else { r as f64 / a as f64 }) / a as f64)
            .collect(),
    };
    let roots = group.roots();
    let chars: Vec<CharacterIndex> = group.characters().skip(1).collect();
    // collected before summing so the result does not depend on the thread count
    let terms: Vec<f64> = chars
        .par_iter()
        .map(|chi| {
            let mut l = Complex64::new(0.0, 0.0);
            for (r, w) in weights.iter().enumerate() {
                if let Some(t) = group.log_value(chi, r as u64) {
                    l += roots[t as usize] * w;
                }
            }
            group.parity(chi) * l.norm_sqr()
        })
        .collect();
    Ok(terms.iter().sum::<f64>() / group.size() as f64)
}

/// Largest modulus accepted by [`char_sum_l1`].
pub const CHAR_SUM_LIMIT: u64 = 10_000;

/// `φ(a)⁻¹ Σ_{χ≠χ₀} χ̄(−1) |L(1,χ)|²` with `L(1,χ)` truncated at `a³`.
pub fn char_sum_l1(a: u64) -> Result<f64> {
    if a < 3 {
        return Err(Error::Domain(format!("char_sum_L1 needs a >= 3, got {a}")));
    }
    guard(a <= CHAR_SUM_LIMIT, "char_sum_L1 modulus", CHAR_SUM_LIMIT)?;
    nonprincipal_average(&CharacterGroup::build(a)?, L1Mode::Truncated)
}

/// `−a⁻¹ Σ_{m≤a/2, (m,a)=1} (2/m) log((a−m)/m)`.
pub fn elementary_char_sum(a: u64) -> Result<f64> {
    if a < 3 {
        return Err(Error::Domain(format!("elementary_char_sum needs a >= 3, got {a}")));
    }
    let s: f64 = (1..=a / 2)
        .filter(|&m| gcd(m, a) == 1)
        .map(|m| 2.0 / m as f64 * ((a - m) as f64 / m as f64).ln())
        .sum();
    Ok(-s / a as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::s_direct;

    fn group(a: u64) -> CharacterGroup {
        CharacterGroup::build(a).unwrap()
    }

    #[test]
    fn build_examples() {
        let g1 = group(1);
        assert_eq!(g1.size(), 1);
        assert!(g1.eval(&g1.principal(), 17).re == 1.0);

        let g4 = group(4);
        assert_eq!(g4.size(), 2);
        let chi = g4.characters().nth(1).unwrap();
        assert_eq!(g4.value(&chi, 3), CharacterValue::Root { k: 1, d: 2 });
        assert!((g4.eval(&chi, 3) + 1.0).norm() < 1e-15);

        let g7 = group(7);
        assert_eq!(g7.size(), 6);
        for chi in g7.characters() {
            if let CharacterValue::Root { d, .. } = g7.value(&chi, 3) {
                assert_eq!(6 % d, 0);
            }
        }
        assert_eq!(orthogonality_sum(&g7, 3, 3).as_integer(), Some(6));
        assert!(CharacterGroup::build(0).is_err());
    }

    #[test]
    fn generators_have_stated_orders() {
        for a in [8, 16, 24, 45, 63, 100, 360] {
            let g = group(a);
            for (gen, order) in g.generators() {
                assert_eq!(pow_mod(gen, order, a), 1, "a={a}");
                let f = arith::factorize(order).unwrap();
                for p in f.primes() {
                    assert_ne!(pow_mod(gen, order / p, a), 1, "a={a} gen={gen}");
                }
            }
        }
    }

    #[test]
    fn orthogonality_exact_up_to_50() {
        for a in 1..=50 {
            verify_orthogonality(&group(a)).unwrap();
        }
    }

    #[test]
    fn column_orthogonality_and_multiplicativity() {
        for a in 1..=50u64 {
            let g = group(a);
            let chars: Vec<_> = g.characters().collect();
            for (i, chi) in chars.iter().enumerate() {
                for m in 0..2 * a {
                    for n in [1, 2, 3, 5, 7, a + 1, 2 * a - 1] {
                        let lhs = g.value(chi, m * n);
                        let (vm, vn) = (g.value(chi, m), g.value(chi, n));
                        let expect = match (g.log_value(chi, m), g.log_value(chi, n)) {
                            (Some(x), Some(y)) => CharacterValue::from_log((x + y) % g.exponent(), g.exponent()),
                            _ => CharacterValue::Zero,
                        };
                        assert_eq!(lhs, expect, "a={a} m={m} n={n} {vm:?} {vn:?}");
                    }
                }
                // distinct characters
                for psi in &chars[..i] {
                    assert!((1..a).any(|m| g.value(chi, m) != g.value(psi, m)));
                }
            }
        }
    }

    #[test]
    fn root_sum_zero_certificate() {
        let mut s = RootSum::new(6);
        for t in [0, 2, 4] {
            s.add(t);
        }
        assert!(s.is_zero());
        assert!(s.to_complex().norm() < 1e-15);
        let mut s = RootSum::new(6);
        s.add(0);
        s.add(1);
        assert!(!s.is_zero());
    }

    #[test]
    fn a_n_examples() {
        for a in [1, 3, 5, 12] {
            let g = group(a);
            for chi in g.characters() {
                assert!((a_n(&g, &chi, 1).unwrap() - 1.0).norm() < 1e-15);
            }
        }
        let g2 = group(2);
        assert!((a_n(&g2, &g2.principal(), 3).unwrap() - 3.0).norm() < 1e-15);
        assert_eq!(a_n(&g2, &g2.principal(), 4).unwrap().norm(), 0.0);
        let g3 = group(3);
        let chi = g3.characters().nth(1).unwrap();
        assert!((g3.eval(&chi, 2) + 1.0).norm() < 1e-15);
        assert!((a_n(&g3, &chi, 2).unwrap() + 1.0).norm() < 1e-14);
    }

    #[test]
    fn a_n_bounded_by_square_divisor_count() {
        let g = group(15);
        for chi in g.characters() {
            for n in 1..300 {
                let d = arith::factorize(n).unwrap().squared().unwrap().num_divisors() as f64;
                assert!(a_n(&g, &chi, n).unwrap().norm() <= d + 1e-9);
            }
        }
    }

    #[test]
    fn character_decomposition_matches_direct() {
        assert_eq!(s_via_characters(4, 3).unwrap(), 4);
        for big_n in [1, 10, 57] {
            assert_eq!(s_via_characters(big_n, 1).unwrap(), s_direct(big_n, 1).unwrap());
        }
        assert_eq!(s_via_characters(1000, 12).unwrap(), s_direct(1000, 12).unwrap());
        for a in 1..=30 {
            for big_n in [10, 100] {
                assert_eq!(s_via_characters(big_n, a).unwrap(), s_direct(big_n, a).unwrap(), "a={a}");
            }
        }
        assert!(matches!(
            s_via_characters(10, S_CHARS_A_LIMIT + 1),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn aggregated_sum_matches_per_n_coefficients() {
        let (big_n, a) = (60u64, 10u64);
        let g = group(a);
        let mut total = Complex64::new(0.0, 0.0);
        for chi in g.characters() {
            let s: Complex64 = (1..=big_n).map(|n| a_n(&g, &chi, n).unwrap()).sum();
            total += g.parity(&chi) * s;
        }
        let v = total / g.size() as f64;
        assert!((v.re - s_via_characters(big_n, a).unwrap() as f64).abs() < 1e-9);
    }

    #[test]
    fn l1_examples() {
        let g4 = group(4);
        let chi4 = g4.characters().nth(1).unwrap();
        let l = l1_truncated(&g4, &chi4, 1_000_000).unwrap();
        assert!((l.re - PI / 4.0).abs() < 1e-4);
        assert!((l1_exact(&g4, &chi4).unwrap().re - PI / 4.0).abs() < 1e-14);
        assert!((l1_truncated(&g4, &chi4, 1).unwrap() - 1.0).norm() < 1e-15);

        let g3 = group(3);
        let chi3 = g3.characters().nth(1).unwrap();
        let near = l1_truncated(&g3, &chi3, 27).unwrap();
        let far = l1_truncated(&g3, &chi3, 1_000_000).unwrap();
        assert!((near - far).norm() < 0.05);
        let exact = PI / (3.0 * 3f64.sqrt());
        assert!((l1_exact(&g3, &chi3).unwrap().re - exact).abs() < 1e-14);
        assert!(l1_truncated(&g3, &g3.principal(), 10).is_err());
        assert!(l1_exact(&g3, &g3.principal()).is_err());
    }

    #[test]
    fn class_harmonic_routes_agree() {
        // the digamma route against straight summation
        for (a, r) in [(3u64, 1u64), (3, 2), (10, 7), (97, 5)] {
            let x = (1u64 << 16) * a + 3 * a;
            let direct: f64 = (0..=(x - r) / a).rev().map(|k| 1.0 / (k * a + r) as f64).sum();
            assert!((class_harmonic(a, r, x) - direct).abs() < 1e-13, "a={a} r={r}");
        }
        let g = group(7);
        for chi in g.characters().skip(1) {
            let x = 2_000_000;
            let direct: Complex64 = (1..=x).map(|n| g.eval(&chi, n) / n as f64).sum();
            assert!((l1_truncated(&g, &chi, x).unwrap() - direct).norm() < 1e-11);
            assert!((l1_truncated(&g, &chi, 50_000_000).unwrap() - l1_exact(&g, &chi).unwrap()).norm() < 1e-6);
        }
    }

    #[test]
    fn average_matches_per_character_sums() {
        for a in [5u64, 12, 35] {
            let g = group(a);
            let x = default_truncation(a);
            let mut trunc = 0.0;
            let mut exact = 0.0;
            for chi in g.characters().skip(1) {
                trunc += g.parity(&chi) * l1_truncated(&g, &chi, x).unwrap().norm_sqr();
                exact += g.parity(&chi) * l1_exact(&g, &chi).unwrap().norm_sqr();
            }
            let n = g.size() as f64;
            assert!((nonprincipal_average(&g, L1Mode::Truncated).unwrap() - trunc / n).abs() < 1e-13);
            assert!((nonprincipal_average(&g, L1Mode::Exact).unwrap() - exact / n).abs() < 1e-13);
        }
    }

    #[test]
    fn char_sum_examples() {
        let s3 = char_sum_l1(3).unwrap();
        let g3 = group(3);
        let chi = g3.characters().nth(1).unwrap();
        let l27 = l1_truncated(&g3, &chi, 27).unwrap().norm_sqr();
        assert!((s3 + 0.5 * l27).abs() < 1e-14);
        assert!((s3 + 0.5 * (PI / (3.0 * 3f64.sqrt())).powi(2)).abs() < 0.02);
        let s4 = char_sum_l1(4).unwrap();
        assert!((s4 + 0.5 * (PI / 4.0).powi(2)).abs() < 0.02);
        assert!(char_sum_l1(2).is_err());
        let e5 = elementary_char_sum(5).unwrap();
        assert!((char_sum_l1(5).unwrap() - e5).abs() < 2.0 * (10f64).ln() / 5.0);
    }

    #[test]
    fn elementary_examples() {
        assert!((elementary_char_sum(3).unwrap() + 2.0 * 2f64.ln() / 3.0).abs() < 1e-15);
        assert!((elementary_char_sum(3).unwrap() + 0.4621).abs() < 1e-4);
        assert!((elementary_char_sum(4).unwrap() + 0.5493).abs() < 1e-4);
        assert!((elementary_char_sum(6).unwrap() + 0.5365).abs() < 1e-4);
        assert!(elementary_char_sum(2).is_err());
    }

    #[test]
    fn dirichlet_l_special_values() {
        let g4 = group(4);
        let chi = g4.characters().nth(1).unwrap();
        // L(2, χ₄) = Catalan's constant
        let l = dirichlet_l(&g4, &chi, 2.0).unwrap();
        assert!((l.re - 0.915_965_594_177_219).abs() < 1e-12);
        // L(s, χ₀ mod 2) = (1 − 2^{-s}) ζ(s)
        let g2 = group(2);
        let l = dirichlet_l(&g2, &g2.principal(), 2.0).unwrap();
        assert!((l.re - 0.75 * PI * PI / 6.0).abs() < 1e-12);
        assert!(dirichlet_l(&g2, &g2.principal(), 1.0).is_err());
    }
}
