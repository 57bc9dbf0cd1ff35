//! Exact rational arithmetic and the finite sequences built on it: harmonic
//! numbers of several flavours, Bernoulli numbers and binomial coefficients.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("harmonic order must be at least 1")]
    ZeroOrder,
}

/// Which finite harmonic-type sum to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HarmonicKind {
    /// `H_n^(p) = sum_{k<=n} k^-p`
    Plain(u32),
    /// `S_n^(t) = sum_{k<=n} (2k-1)^-t`
    Semi(u32),
    /// `sum_{k<=n} (-1)^(k-1) k^-b`
    Alternating(u32),
}

impl HarmonicKind {
    pub fn order(self) -> u32 {
        match self {
            HarmonicKind::Plain(p) | HarmonicKind::Semi(p) | HarmonicKind::Alternating(p) => p,
        }
    }

    /// The k-th summand of the sequence (k >= 1).
    pub fn term(self, k: u64) -> BigRational {
        match self {
            HarmonicKind::Plain(p) => inv_pow(&BigInt::from(k), p),
            HarmonicKind::Semi(t) => inv_pow(&BigInt::from(2 * k - 1), t),
            HarmonicKind::Alternating(b) => {
                let v = inv_pow(&BigInt::from(k), b);
                if k % 2 == 0 {
                    -v
                } else {
                    v
                }
            }
        }
    }
}

impl fmt::Display for HarmonicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarmonicKind::Plain(p) => write!(f, "H^({p})"),
            HarmonicKind::Semi(t) => write!(f, "S^({t})"),
            HarmonicKind::Alternating(b) => write!(f, "Ht^({b})"),
        }
    }
}

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `2^e` for any sign of `e`.
pub fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `1 / base^p`
pub fn inv_pow(base: &BigInt, p: u32) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(base.clone(), p as usize))
}

/// Finite harmonic-type sum of the first `n` terms; `n = 0` gives 0.
pub fn harmonic(n: u64, kind: HarmonicKind) -> Result<BigRational, ExactError> {
    if kind.order() == 0 {
        return Err(ExactError::ZeroOrder);
    }
    Ok((1..=n).fold(BigRational::zero(), |acc, k| acc + kind.term(k)))
}

fn bernoulli_table() -> &'static Mutex<Vec<BigRational>> {
    static TABLE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> BigRational {
    let mut table = bernoulli_table().lock().expect("bernoulli cache poisoned");
    while table.len() <= n {
        let m = table.len();
        if m > 1 && m % 2 == 1 {
            table.push(BigRational::zero());
            continue;
        }
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = BigRational::zero();
        let mut c = BigInt::one();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += b * &c;
            }
            c = c * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        let next = -acc / BigInt::from(m + 1);
        table.push(next);
    }
    table[n].clone()
}

/// `C(n, k)` as an integer, zero outside `0 <= k <= n`.
pub fn binomial_int(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigRational {
    BigRational::from_integer(binomial_int(n, k))
}

/// Rising factorial `x (x+1) ... (x+k-1)`.
pub fn rising(x: u64, k: u32) -> BigInt {
    (0..k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(x + i))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Render as `p/q` with the sign on the numerator; integers keep `/1`.
pub fn fraction_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse the `p/q` (or bare integer) form written by [`fraction_string`].
pub fn parse_fraction(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub fn abs(q: &BigRational) -> BigRational {
    q.abs()
}
