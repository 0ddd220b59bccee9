//! Arbitrary-precision number theory for the classical half of Shor's algorithm
//! and for the CRT construction of period-2 bases.

use std::fmt;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by the linear-scan [`multiplicative_order`].
pub const ORDER_SCAN_LIMIT: u64 = 1 << 24;

/// Miller-Rabin rounds; each round has error at most 1/4.
const MILLER_RABIN_ROUNDS: usize = 32;

const SMALL_PRIMES: [u32; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

/// Greatest common divisor by the Euclidean algorithm. `gcd(a, 0) = a`.
pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b)`.
pub fn ext_gcd(a: &BigUint, b: &BigUint) -> Result<(BigUint, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::domain("ext_gcd(0, 0) is undefined"));
    }
    let (mut old_r, mut r) = (BigInt::from(a.clone()), BigInt::from(b.clone()));
    let (mut old_u, mut u) = (BigInt::one(), BigInt::zero());
    let (mut old_v, mut v) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_u = &old_u - &q * &u;
        old_u = std::mem::replace(&mut u, next_u);
        let next_v = &old_v - &q * &v;
        old_v = std::mem::replace(&mut v, next_v);
    }
    let g = old_r
        .to_biguint()
        .expect("remainders of non-negative inputs stay non-negative");
    Ok((g, old_u, old_v))
}

/// The inverse of `a` modulo `m`, in `[1, m)`.
///
/// When `gcd(a, m) != 1` the error carries the gcd, which is a factor of `m`.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Result<BigUint> {
    if *m < BigUint::from(2u32) {
        return Err(Error::domain("modulus must be at least 2"));
    }
    let reduced = a % m;
    let (g, u, _) = ext_gcd(&reduced, m)?;
    if !g.is_one() {
        return Err(Error::NotInvertible {
            a: a.clone(),
            m: m.clone(),
            gcd: g,
        });
    }
    let m_signed = BigInt::from(m.clone());
    let inv = u.mod_floor(&m_signed);
    Ok(inv
        .to_biguint()
        .expect("mod_floor by a positive modulus is non-negative"))
}

/// `base^exp mod m` by left-to-right binary square-and-multiply.
pub fn mod_pow(base: &BigUint, exp: &BigUint, m: &BigUint) -> Result<BigUint> {
    if m.is_zero() {
        return Err(Error::domain("modulus must be at least 1"));
    }
    if m.is_one() {
        return Ok(BigUint::zero());
    }
    let base = base % m;
    let mut acc = BigUint::one();
    for i in (0..exp.bits()).rev() {
        acc = &acc * &acc % m;
        if exp.bit(i) {
            acc = &acc * &base % m;
        }
    }
    Ok(acc)
}

/// Least `r >= 1` with `a^r = 1 (mod n)`, found by linear scan.
///
/// This is a test oracle: it refuses moduli at or above [`ORDER_SCAN_LIMIT`].
pub fn multiplicative_order(a: &BigUint, n: &BigUint) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::domain("modulus must be positive"));
    }
    if *n >= BigUint::from(ORDER_SCAN_LIMIT) {
        return Err(Error::RefusedTooLarge(format!(
            "multiplicative_order scans linearly; n must be below 2^24, got {} bits",
            n.bits()
        )));
    }
    let n = n.to_u64().expect("guarded above");
    if n == 1 {
        return Ok(1);
    }
    let a = (a % BigUint::from(n)).to_u64().expect("reduced below n");
    if a.gcd(&n) != 1 {
        return Err(Error::domain(format!("{a} is not a unit modulo {n}")));
    }
    let mut x = a;
    let mut r = 1;
    while x != 1 {
        x = x * a % n;
        r += 1;
    }
    Ok(r)
}

/// One convergent `numerator / denominator` of a continued-fraction expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    #[serde(with = "crate::decimal")]
    pub numerator: BigUint,
    #[serde(with = "crate::decimal")]
    pub denominator: BigUint,
}

impl fmt::Display for Convergent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// All convergents of `y / s_pow`, in order, ending at `y / s_pow` in lowest terms.
///
/// Denominators are strictly increasing. When the first partial quotient is 1
/// the leading `0/1` and `1/1` share denominator 1, and only `1/1` is kept.
pub fn continued_fraction_convergents(y: &BigUint, s_pow: &BigUint) -> Result<Vec<Convergent>> {
    if s_pow.is_zero() {
        return Err(Error::domain("denominator must be at least 1"));
    }
    if y >= s_pow {
        return Err(Error::domain(format!("y = {y} must be below S = {s_pow}")));
    }
    // h_k = a_k h_{k-1} + h_{k-2}, k_k = a_k k_{k-1} + k_{k-2}
    let (mut h_prev, mut h) = (BigUint::zero(), BigUint::one());
    let (mut k_prev, mut k) = (BigUint::one(), BigUint::zero());
    let (mut num, mut den) = (y.clone(), s_pow.clone());
    let mut out: Vec<Convergent> = Vec::new();
    while !den.is_zero() {
        let (quot, rem) = num.div_rem(&den);
        let h_next = &quot * &h + &h_prev;
        let k_next = &quot * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let conv = Convergent {
            numerator: h.clone(),
            denominator: k.clone(),
        };
        match out.last_mut() {
            Some(last) if last.denominator == conv.denominator => *last = conv,
            _ => out.push(conv),
        }
        num = den;
        den = rem;
    }
    Ok(out)
}

/// Probabilistic primality test: trial division by small primes, then
/// Miller-Rabin with 32 seeded random bases (error below 2^-64).
pub fn is_probable_prime(n: &BigUint) -> bool {
    let small = n.to_u64();
    if let Some(v) = small {
        if v < 2 {
            return false;
        }
    }
    for &p in SMALL_PRIMES.iter() {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    if let Some(v) = small {
        if v < 257 * 257 {
            return true;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let twos = n_minus_1
        .trailing_zeros()
        .expect("n - 1 is even and nonzero");
    let odd = &n_minus_1 >> twos;
    let two = BigUint::from(2u32);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_5eed);
    'witness: for round in 0..MILLER_RABIN_ROUNDS {
        let base = if round == 0 {
            two.clone()
        } else {
            rng.gen_biguint_range(&two, &n_minus_1)
        };
        let mut x = base.modpow(&odd, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..twos {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Integer square root when `a` is a perfect square.
pub fn exact_sqrt(a: &BigUint) -> Option<BigUint> {
    let b = num_integer::Roots::sqrt(a);
    (&b * &b == *a).then_some(b)
}

/// Sign of one term in `a = ±p·p_q ± q·q_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One of the four CRT solutions of `a^2 = 1 (mod pq)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtSolution {
    #[serde(with = "crate::decimal")]
    pub value: BigUint,
    /// Signs of the `p·p_q` and `q·q_p` terms.
    pub signs: (Sign, Sign),
}

impl CrtSolution {
    /// True for the solutions `±1`.
    pub fn is_trivial(&self, n: &BigUint) -> bool {
        self.value.is_one() || self.value == n - 1u32
    }
}

fn validate_odd_prime(name: &str, v: &BigUint) -> Result<()> {
    if *v <= BigUint::from(2u32) || v.is_even() {
        return Err(Error::domain(format!(
            "{name} = {v} must be an odd prime greater than 2"
        )));
    }
    if !is_probable_prime(v) {
        return Err(Error::domain(format!("{name} = {v} is composite")));
    }
    Ok(())
}

/// All four sign combinations of `a = ±p·p_q ± q·q_p (mod pq)`, where `p_q`
/// is the inverse of `p` mod `q` and `q_p` the inverse of `q` mod `p`.
///
/// Order: `(+,+)`, `(+,-)`, `(-,+)`, `(-,-)`.
pub fn crt_sqrt1_solutions(p: &BigUint, q: &BigUint) -> Result<[CrtSolution; 4]> {
    if p == q {
        return Err(Error::Degenerate(p.clone()));
    }
    validate_odd_prime("p", p)?;
    validate_odd_prime("q", q)?;
    let n = p * q;
    let p_term = p * mod_inverse(p, q)? % &n;
    let q_term = q * mod_inverse(q, p)? % &n;
    let neg = |x: &BigUint| (&n - x) % &n;
    let combine = |sp: Sign, sq: Sign| {
        let a = match sp {
            Sign::Plus => p_term.clone(),
            Sign::Minus => neg(&p_term),
        };
        let b = match sq {
            Sign::Plus => q_term.clone(),
            Sign::Minus => neg(&q_term),
        };
        CrtSolution {
            value: (a + b) % &n,
            signs: (sp, sq),
        }
    };
    Ok([
        combine(Sign::Plus, Sign::Plus),
        combine(Sign::Plus, Sign::Minus),
        combine(Sign::Minus, Sign::Plus),
        combine(Sign::Minus, Sign::Minus),
    ])
}

/// The two nontrivial CRT solutions, ordered by value (smaller first).
pub fn nontrivial_sqrt1_solutions(p: &BigUint, q: &BigUint) -> Result<[CrtSolution; 2]> {
    let n = p * q;
    let mut found: Vec<CrtSolution> = crt_sqrt1_solutions(p, q)?
        .into_iter()
        .filter(|s| !s.is_trivial(&n))
        .collect();
    found.sort_by(|a, b| a.value.cmp(&b.value));
    match <[CrtSolution; 2]>::try_from(found) {
        Ok(pair) => Ok(pair),
        Err(v) => unreachable!("expected two nontrivial roots of unity, found {}", v.len()),
    }
}

/// The two nontrivial square roots of 1 modulo `pq`, as `(smaller, larger)`.
pub fn sqrt1_roots(p: &BigUint, q: &BigUint) -> Result<(BigUint, BigUint)> {
    let [lo, hi] = nontrivial_sqrt1_solutions(p, q)?;
    Ok((lo.value, hi.value))
}

/// A composite `n`, optionally with its two prime factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semiprime {
    n: BigUint,
    factors: Option<(BigUint, BigUint)>,
}

impl Semiprime {
    /// `n` with unknown factors. Only rejects values that are trivially not an
    /// odd composite (even, or below 9).
    pub fn new(n: BigUint) -> Result<Self> {
        if n < BigUint::from(9u32) || n.is_even() {
            return Err(Error::InvalidSemiprime(format!(
                "n = {n} must be an odd composite"
            )));
        }
        Ok(Self { n, factors: None })
    }

    /// `n = p·q` for distinct odd primes `p, q`.
    pub fn with_factors(p: BigUint, q: BigUint) -> Result<Self> {
        if p == q {
            return Err(Error::InvalidSemiprime(format!("p = q = {p}")));
        }
        for (name, v) in [("p", &p), ("q", &q)] {
            validate_odd_prime(name, v).map_err(|e| Error::InvalidSemiprime(e.to_string()))?;
        }
        Ok(Self {
            n: &p * &q,
            factors: Some((p, q)),
        })
    }

    /// Like [`Semiprime::with_factors`], additionally checking `p·q = n`.
    pub fn from_parts(n: BigUint, p: BigUint, q: BigUint) -> Result<Self> {
        if &p * &q != n {
            return Err(Error::InvalidSemiprime("p * q != n".into()));
        }
        Self::with_factors(p, q)
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn factors(&self) -> Option<(&BigUint, &BigUint)> {
        self.factors.as_ref().map(|(p, q)| (p, q))
    }
}

/// A base `a` with `a^2 = 1 (mod n)`, `1 < a < n - 1`, built from CRT signs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompiledBase {
    #[serde(with = "crate::decimal")]
    pub a: BigUint,
    #[serde(with = "crate::decimal")]
    pub n: BigUint,
    pub period: u64,
    pub sign_choice: (Sign, Sign),
}

impl CompiledBase {
    pub(crate) fn from_solution(n: &BigUint, sol: CrtSolution) -> Self {
        debug_assert!((&sol.value * &sol.value % n).is_one());
        Self {
            a: sol.value,
            n: n.clone(),
            period: 2,
            sign_choice: sol.signs,
        }
    }

    /// Checks the defining invariants directly.
    pub fn is_valid(&self) -> bool {
        let one = BigUint::one();
        self.period == 2
            && self.a > one
            && self.a < &self.n - 1u32
            && (&self.a * &self.a % &self.n).is_one()
    }
}
