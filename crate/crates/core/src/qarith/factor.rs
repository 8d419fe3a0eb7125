//! Factorization of machine-sized integers (Miller-Rabin + Pollard rho).

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

/// Deterministic primality test for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
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

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = gcd(x.abs_diff(y), n);
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let f = pollard_rho(n);
    split(f, out);
    split(n / f, out);
}

/// Prime factorization as sorted `(prime, exponent)` pairs. `factor_u64(1)` is empty.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    split(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(2047), vec![(23, 1), (89, 1)]);
        assert_eq!(factor_u64(1023), vec![(3, 1), (11, 1), (31, 1)]);
        assert_eq!(factor_u64(1 << 20), vec![(2, 20)]);
        assert_eq!(factor_u64((1 << 61) - 1), vec![((1 << 61) - 1, 1)]);
    }

    #[test]
    fn factorization_multiplies_back() {
        for n in (1u64..5000).chain([3u64.pow(20) - 1, 5u64.pow(13) - 1, (1 << 40) - 1]) {
            let prod: u64 = factor_u64(n).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            assert!(factor_u64(n).iter().all(|&(p, _)| is_prime_u64(p)));
        }
    }
}
