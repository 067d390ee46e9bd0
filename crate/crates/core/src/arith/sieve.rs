use crate::error::{Error, Result};

/// All primes `≤ n` (Eratosthenes over odd numbers).
pub fn primes_up_to(n: usize) -> Vec<u32> {
    if n < 2 {
        return Vec::new();
    }
    // index i represents 2i + 1
    let half = n.div_ceil(2);
    let mut composite = vec![false; half];
    composite[0] = true; // 1
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity((n as f64 / (n as f64).ln().max(1.0) * 1.2) as usize);
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| (2 * i + 1) as u32),
    );
    primes
}

/// Smallest-prime-factor table for `0..=n` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(n: usize) -> Vec<u32> {
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
    spf
}

/// Prime powers `p^k ≤ n` with `log p`, in no particular order.
pub fn prime_powers(n: u64) -> impl Iterator<Item = (u64, f64)> {
    primes_up_to(n as usize).into_iter().flat_map(move |p| {
        let p = p as u64;
        let lp = (p as f64).ln();
        std::iter::successors(Some(p), move |&q| q.checked_mul(p).filter(|&r| r <= n))
            .map(move |q| (q, lp))
    })
}

/// `Λ(n) = log p` if `n = p^k`, else 0.
pub fn von_mangoldt(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "von Mangoldt function is defined for n >= 1"));
    }
    if n == 1 {
        return Ok(0.0);
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            return Ok(if m == 1 { (p as f64).ln() } else { 0.0 });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // m is prime and n = m
    Ok((m as f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mangoldt_examples() {
        assert!((von_mangoldt(8).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(von_mangoldt(12).unwrap(), 0.0);
        assert_eq!(von_mangoldt(1).unwrap(), 0.0);
        assert!((von_mangoldt(97).unwrap() - 97f64.ln()).abs() < 1e-15);
        assert!(von_mangoldt(0).is_err());
    }

    #[test]
    fn divisor_sum_of_mangoldt_is_log() {
        for n in 1..=10_000u64 {
            let mut s = 0.0;
            let mut d = 1;
            while d * d <= n {
                if n % d == 0 {
                    s += von_mangoldt(d).unwrap();
                    if d * d != n {
                        s += von_mangoldt(n / d).unwrap();
                    }
                }
                d += 1;
            }
            assert!((s - (n as f64).ln()).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn sieve_counts() {
        assert_eq!(primes_up_to(100).len(), 25);
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
        assert_eq!(primes_up_to(2), vec![2]);
        assert!(primes_up_to(1).is_empty());
        let spf = smallest_prime_factors(100);
        assert_eq!(spf[91], 7);
        assert_eq!(spf[97], 97);
    }

    #[test]
    fn prime_powers_match_mangoldt() {
        let mut pp: Vec<(u64, f64)> = prime_powers(1000).collect();
        pp.sort_by_key(|&(n, _)| n);
        let direct: Vec<(u64, f64)> = (1..=1000u64)
            .filter_map(|n| {
                let l = von_mangoldt(n).unwrap();
                (l > 0.0).then_some((n, l))
            })
            .collect();
        assert_eq!(pp.len(), direct.len());
        for (a, b) in pp.iter().zip(&direct) {
            assert_eq!(a.0, b.0);
            assert!((a.1 - b.1).abs() < 1e-14);
        }
    }
}
