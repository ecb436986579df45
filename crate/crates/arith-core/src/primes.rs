//! Prime generation, primorials and small multiplicative functions.

use num_integer::Integer;

/// All primes `<= n` in increasing order.
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// The first `r` primes.
pub fn first_primes(r: usize) -> Vec<u64> {
    let mut bound = 16u64;
    loop {
        let ps = primes_upto(bound);
        if ps.len() >= r {
            return ps[..r].to_vec();
        }
        bound *= 2;
    }
}

/// Product of the first `r` primes. Fits in u128 for `r <= 25`.
pub fn primorial(r: usize) -> u128 {
    first_primes(r).iter().map(|&p| p as u128).product()
}

/// `Q_r / gcd(Q_r, k)`: the part of the primorial coprime to `k`.
pub fn coprime_part(r: usize, k: u64) -> u128 {
    let q = primorial(r);
    q / q.gcd(&(k as u128))
}

/// Primes of the first `r` that do not divide `k`.
pub fn wheel_primes(r: usize, k: u64) -> Vec<u64> {
    first_primes(r).into_iter().filter(|p| k % p != 0).collect()
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn prime_divisors_u128(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p: u128 = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p as u64);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

pub fn totient(n: u64) -> u64 {
    assert!(n >= 1);
    prime_divisors(n).iter().fold(n, |acc, &p| acc / p * (p - 1))
}

pub fn totient_u128(n: u128) -> u128 {
    prime_divisors_u128(n).iter().fold(n, |acc, &p| acc / p as u128 * (p as u128 - 1))
}

pub fn omega(n: u64) -> u32 {
    prime_divisors(n).len() as u32
}

pub fn omega_u128(n: u128) -> u32 {
    prime_divisors_u128(n).len() as u32
}

pub fn is_squarefree(n: u64) -> bool {
    assert!(n >= 1);
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_divisors(n) == [n]
}

/// Smallest-prime-factor table over `[0, n]`.
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(n: u32) -> SpfTable {
        let n = n as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfTable { spf }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    pub fn spf(&self, n: u32) -> u32 {
        self.spf[n as usize]
    }

    /// Totient, or `None` when `n` is not squarefree.
    pub fn squarefree_totient(&self, mut n: u32) -> Option<u32> {
        let mut phi = 1u32;
        while n > 1 {
            let p = self.spf[n as usize];
            n /= p;
            if n % p == 0 {
                return None;
            }
            phi *= p - 1;
        }
        Some(phi)
    }

    pub fn totient(&self, mut n: u32) -> u32 {
        let mut phi = 1u32;
        while n > 1 {
            let p = self.spf[n as usize];
            n /= p;
            let mut pk = p - 1;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            phi *= pk;
        }
        phi
    }
}

/// Totients of `0..=n` (entry 0 is 0).
pub fn totients_upto(n: u32) -> Vec<u32> {
    let mut phi: Vec<u32> = (0..=n).collect();
    for i in 2..=n as usize {
        if phi[i] == i as u32 {
            let mut j = i;
            while j <= n as usize {
                phi[j] -= phi[j] / i as u32;
                j += i;
            }
        }
    }
    phi
}

/// Squarefree flags for `0..=n` (entry 0 is false).
pub fn squarefree_upto(n: u32) -> Vec<bool> {
    let mut sf = vec![true; n as usize + 1];
    sf[0] = false;
    let mut p = 2usize;
    while p * p <= n as usize {
        let mut j = p * p;
        while j <= n as usize {
            sf[j] = false;
            j += p * p;
        }
        p += 1;
    }
    sf
}

/// Segmented squarefree totient sieve.
///
/// For each `q` in `[lo, hi)` reports `phi(q)` if `q` is squarefree, else 0.
pub struct SquarefreeSegments {
    base: Vec<u64>,
}

impl SquarefreeSegments {
    pub fn new(max: u64) -> Self {
        let r = (max as f64).sqrt() as u64 + 2;
        SquarefreeSegments { base: primes_upto(r) }
    }

    pub fn fill(&self, lo: u64, hi: u64, phi: &mut Vec<u64>, rem: &mut Vec<u64>) {
        let len = (hi - lo) as usize;
        phi.clear();
        phi.resize(len, 1);
        rem.clear();
        rem.extend(lo..hi);
        for &p in &self.base {
            if p * p > hi {
                break;
            }
            let p2 = p * p;
            let mut j = lo.div_ceil(p) * p;
            while j < hi {
                let i = (j - lo) as usize;
                if phi[i] != 0 {
                    if j % p2 == 0 {
                        phi[i] = 0;
                    } else {
                        phi[i] *= p - 1;
                        rem[i] /= p;
                    }
                }
                j += p;
            }
        }
        for i in 0..len {
            if phi[i] != 0 && rem[i] > 1 {
                phi[i] *= rem[i] - 1;
            }
        }
        if lo == 0 && len > 0 {
            phi[0] = 0;
        }
    }
}
