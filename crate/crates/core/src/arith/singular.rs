use std::fs;
use std::io::Write;
use std::path::Path;

use super::sieve::{primes_up_to, smallest_prime_factors};
use crate::error::{Error, Result};
use crate::sum::Neumaier;

/// Default table length for 𝔖(k).
pub const DEFAULT_K_MAX: usize = 1_000_000;
/// Default prime bound for the twin-prime product.
pub const DEFAULT_PRIME_BOUND: usize = 10_000_000;

const CACHE_MAGIC: &[u8; 8] = b"ZPCSS\0v1";

/// `2 ∏_{p>2} (1 - 1/(p-1)²)` truncated at a prime bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinPrimeProduct {
    /// Truncated product times the mean-value tail estimate `exp(-E₁(log P))`.
    pub value: f64,
    /// The raw truncated product over `3 ≤ p ≤ P`.
    pub truncated: f64,
    /// Certified relative bound `2/(P log P)` on the omitted factor.
    pub tail_bound: f64,
    pub prime_bound: usize,
}

/// Mean-value estimate of `Σ_{p>P} 1/p²`, namely `∫_P^∞ dt/(t² log t) = E₁(log P)`.
fn prime_reciprocal_square_tail(p: f64) -> f64 {
    // asymptotic series for E₁(s), stopped at its smallest term
    let s = p.ln();
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..40 {
        let next = term * k as f64 / s;
        sum += term;
        if next.abs() >= term.abs() {
            break;
        }
        term = -next;
    }
    sum / (p * s)
}

/// Twin-prime product over primes up to `prime_bound`.
pub fn twin_prime_product(prime_bound: usize) -> TwinPrimeProduct {
    let primes = primes_up_to(prime_bound);
    let mut log_sum = Neumaier::new();
    for &p in primes.iter().skip(1) {
        let q = (p - 1) as f64;
        log_sum.add((-1.0 / (q * q)).ln_1p());
    }
    let pb = prime_bound.max(3) as f64;
    let truncated = 2.0 * log_sum.value().exp();
    let tail_est = prime_reciprocal_square_tail(pb);
    TwinPrimeProduct {
        value: truncated * (-tail_est).exp(),
        truncated,
        tail_bound: 2.0 / (pb * pb.ln()),
        prime_bound,
    }
}

/// Cached values of the singular series `𝔖(k)` for `1 ≤ k ≤ K_max`.
#[derive(Debug, Clone)]
pub struct SingularSeriesTable {
    // values[k] = 𝔖(k); values[0] is unused (0)
    values: Vec<f64>,
    // excess[k] = Σ_{j ≤ k} (𝔖(j) - 1)
    excess: Vec<f64>,
    twin: TwinPrimeProduct,
    max_value: f64,
}

impl SingularSeriesTable {
    pub fn new(k_max: usize, prime_bound: usize) -> Self {
        let twin = twin_prime_product(prime_bound);
        Self::from_parts(k_max, twin)
    }

    /// Table with [`DEFAULT_K_MAX`] and [`DEFAULT_PRIME_BOUND`].
    pub fn with_defaults() -> Self {
        Self::new(DEFAULT_K_MAX, DEFAULT_PRIME_BOUND)
    }

    fn from_parts(k_max: usize, twin: TwinPrimeProduct) -> Self {
        let spf = smallest_prime_factors(k_max);
        let mut values = vec![0.0; k_max + 1];
        for k in (2..=k_max).step_by(2) {
            let mut m = k;
            while m % 2 == 0 {
                m /= 2;
            }
            let mut factor = 1.0;
            while m > 1 {
                let p = spf[m] as usize;
                factor *= (p - 1) as f64 / (p - 2) as f64;
                while m % p == 0 {
                    m /= p;
                }
            }
            values[k] = twin.value * factor;
        }
        Self::with_values(values, twin)
    }

    fn with_values(values: Vec<f64>, twin: TwinPrimeProduct) -> Self {
        let mut excess = vec![0.0; values.len()];
        let mut acc = Neumaier::new();
        let mut max_value: f64 = 0.0;
        for k in 1..values.len() {
            acc.add(values[k] - 1.0);
            excess[k] = acc.value();
            max_value = max_value.max(values[k]);
        }
        Self {
            values,
            excess,
            twin,
            max_value,
        }
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn prime_bound(&self) -> usize {
        self.twin.prime_bound
    }

    pub fn twin_prime_product(&self) -> f64 {
        self.twin.value
    }

    pub fn twin(&self) -> &TwinPrimeProduct {
        &self.twin
    }

    /// Largest 𝔖(k) in the table; used as the documented bound in tail estimates.
    pub fn max_value(&self) -> f64 {
        self.max_value
    }

    /// `𝔖(k)` for `1 ≤ k ≤ K_max`.
    pub fn get(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.k_max() {
            return Err(Error::TableOverflow {
                y: k as f64,
                k_max: self.k_max(),
            });
        }
        Ok(self.values[k])
    }

    /// Unchecked access for hot loops; `k` must be in `1..=K_max`.
    #[inline]
    pub(crate) fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// `Σ_{j ≤ k} (𝔖(j) - 1)` at integer `k ≤ K_max`.
    #[inline]
    pub(crate) fn excess(&self, k: usize) -> f64 {
        self.excess[k]
    }

    /// `Σ_{k ≤ y} 𝔖(k)`.
    pub fn partial_sum(&self, y: f64) -> Result<f64> {
        if y < 0.0 {
            return Err(Error::domain("y", y, "partial sum needs y >= 0"));
        }
        if y >= (self.k_max() + 1) as f64 {
            return Err(Error::TableOverflow {
                y,
                k_max: self.k_max(),
            });
        }
        let n = y.floor() as usize;
        Ok(if n == 0 { 0.0 } else { self.excess[n] + n as f64 })
    }

    /// Writes the binary cache file.
    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let io = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut buf = Vec::with_capacity(48 + 8 * self.values.len());
        buf.extend_from_slice(CACHE_MAGIC);
        buf.extend_from_slice(&(self.k_max() as u64).to_le_bytes());
        buf.extend_from_slice(&(self.twin.prime_bound as u64).to_le_bytes());
        for v in [self.twin.value, self.twin.truncated, self.twin.tail_bound] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        for v in &self.values[1..] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        let mut f = fs::File::create(path).map_err(io)?;
        f.write_all(&buf).map_err(io)
    }

    /// Reads a cache written by [`save_cache`](Self::save_cache); the key
    /// `(k_max, prime_bound)` must match.
    pub fn load_cache(path: &Path, k_max: usize, prime_bound: usize) -> Result<Self> {
        let bytes = fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let header = 8 + 8 + 8 + 24;
        if bytes.len() < header || &bytes[..8] != CACHE_MAGIC {
            return Err(Error::Cache("bad magic or truncated header".into()));
        }
        let word = |i: usize| -> [u8; 8] { bytes[i..i + 8].try_into().expect("8 bytes") };
        let file_k = u64::from_le_bytes(word(8)) as usize;
        let file_p = u64::from_le_bytes(word(16)) as usize;
        if file_k != k_max || file_p != prime_bound {
            return Err(Error::Cache(format!(
                "key mismatch: file has (K_max={file_k}, P={file_p}), wanted ({k_max}, {prime_bound})"
            )));
        }
        if bytes.len() != header + 8 * k_max {
            return Err(Error::Cache("payload length does not match K_max".into()));
        }
        let twin = TwinPrimeProduct {
            value: f64::from_le_bytes(word(24)),
            truncated: f64::from_le_bytes(word(32)),
            tail_bound: f64::from_le_bytes(word(40)),
            prime_bound,
        };
        let mut values = vec![0.0; k_max + 1];
        for (k, v) in values.iter_mut().enumerate().skip(1) {
            *v = f64::from_le_bytes(word(header + 8 * (k - 1)));
        }
        Ok(Self::with_values(values, twin))
    }

    /// Loads the cache if it exists and matches, otherwise builds and saves it.
    pub fn load_or_build(dir: &Path, k_max: usize, prime_bound: usize) -> Result<Self> {
        let path = dir.join(format!("singular_k{k_max}_p{prime_bound}.bin"));
        match Self::load_cache(&path, k_max, prime_bound) {
            Ok(t) => Ok(t),
            Err(_) => {
                let t = Self::new(k_max, prime_bound);
                fs::create_dir_all(dir).map_err(|source| Error::Io {
                    path: dir.to_path_buf(),
                    source,
                })?;
                t.save_cache(&path)?;
                Ok(t)
            }
        }
    }
}
