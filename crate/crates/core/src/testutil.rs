//! Test-only oracles shared by unit tests.

/// Deterministic Miller-Rabin for u64 (bases known to be sufficient below 2^64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn next_prime_u64(mut n: u64) -> u64 {
    n |= 1;
    while !is_prime_u64(n) {
        n += 2;
    }
    n
}

/// Two distinct odd primes drawn from the 64-bit range, deterministically per seed.
pub fn prime_pair_u64(seed: u64) -> (u64, u64) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let p = next_prime_u64(rng.gen_range(1u64 << 62..1u64 << 63));
        let q = next_prime_u64(rng.gen_range(1u64 << 62..1u64 << 63));
        if p != q {
            return (p, q);
        }
    }
}
