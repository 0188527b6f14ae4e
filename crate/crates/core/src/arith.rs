//! Elementary integer arithmetic: sieves, factorization, primitive roots.

use num_integer::Integer;

/// Smallest-prime-factor table for `0..=n`. `spf[k] == k` for primes,
/// `spf[0] == spf[1] == 0`.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Self {
        let n = limit.max(1) as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            for &p in &primes {
                let ip = i * p as usize;
                if p as u32 > spf[i] || ip > n {
                    break;
                }
                spf[ip] = p as u32;
            }
        }
        Sieve { spf, primes }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && (n as usize) < self.spf.len() && self.spf[n as usize] as u64 == n
    }

    /// Prime-power factorization `[(p, e)]`, ascending. Falls back to trial
    /// division above the sieve limit.
    pub fn factor(&self, n: u64) -> Vec<(u64, u32)> {
        if n as usize >= self.spf.len() {
            return factor(n);
        }
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as u64;
            let mut e = 0;
            while (m as u64).is_multiple_of(p) {
                m /= p as usize;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }
}

/// Trial-division factorization.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    Sieve::new(n).primes
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n).first().map(|&(p, e)| p == n && e == 1).unwrap_or(false)
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Product of the distinct primes dividing `n`; `rad(1) = 1`.
pub fn radical(n: u64) -> u64 {
    factor(n).into_iter().map(|(p, _)| p).product()
}

/// Multiplicity of `p` in `n` (`n > 0`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    let m128 = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: u64) -> Option<u64> {
    let m_i = m as i64;
    let e = a.rem_euclid(m_i).extended_gcd(&m_i);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m_i) as u64)
}

/// Smallest primitive root modulo an odd prime power `p^e`.
pub fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    assert!(p > 2, "primitive roots mod 2^e (e >= 3) do not exist");
    let phi_p = p - 1;
    let qs: Vec<u64> = factor(phi_p).into_iter().map(|(q, _)| q).collect();
    let g = (2..p).find(|&g| qs.iter().all(|&q| pow_mod(g, phi_p / q, p) != 1)).unwrap_or(1);
    if e == 1 {
        return g;
    }
    // g lifts to p^e unless g^(p-1) = 1 mod p^2
    if pow_mod(g, phi_p, p * p) != 1 {
        g
    } else {
        g + p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_factors_agree_with_trial_division() {
        let s = Sieve::new(1000);
        for n in 1..=1500 {
            assert_eq!(s.factor(n), factor(n), "n = {n}");
        }
        assert_eq!(s.primes().len(), 168);
        assert!(s.is_prime(997) && !s.is_prime(999));
    }

    #[test]
    fn small_arithmetic() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(radical(72), 6);
        assert_eq!(valuation(48, 2), 4);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(inv_mod(-1, 5), Some(4));
    }

    #[test]
    fn primitive_roots_generate() {
        for &(p, e) in &[(3u64, 1u32), (3, 3), (5, 2), (7, 2), (29, 1), (31, 2)] {
            let m = p.pow(e);
            let g = primitive_root_prime_power(p, e);
            let phi = euler_phi(m);
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..phi {
                seen.insert(x);
                x = x * g % m;
            }
            assert_eq!(seen.len() as u64, phi, "g = {g} mod {m}");
        }
    }
}
