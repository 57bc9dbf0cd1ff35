//! Certified high-precision constants and evaluation of [`SymExpr`] values.
//!
//! Numbers are midpoint-radius balls in binary fixed point: a [`BigReal`]
//! with midpoint `m`, radius `r` and precision `p` stands for some real in
//! `[(m - r) 2^-p, (m + r) 2^-p]`. Every operation widens the radius by its
//! own rounding so the enclosure is never lost.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{self, BigRational};
use crate::symexpr::{Atom, SymExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("invalid precision context: working_bits={working}, guard_bits={guard}")]
    InvalidContext { working: u32, guard: u32 },
    #[error("{func} is undefined for argument {arg}")]
    Domain { func: &'static str, arg: String },
    #[error("precision exhausted: only {achieved} of {required} bits certified")]
    PrecisionExhausted { achieved: i64, required: u32 },
}

/// Working precision of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    working_bits: u32,
    guard_bits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { working_bits: 192, guard_bits: 32 }
    }
}

impl PrecisionContext {
    pub fn new(working_bits: u32, guard_bits: u32) -> Result<Self, NumError> {
        if working_bits < 64 || guard_bits == 0 || guard_bits >= working_bits {
            return Err(NumError::InvalidContext { working: working_bits, guard: guard_bits });
        }
        Ok(PrecisionContext { working_bits, guard_bits })
    }

    /// Context with the default 32 guard bits.
    pub fn with_bits(working_bits: u32) -> Result<Self, NumError> {
        PrecisionContext::new(working_bits, 32)
    }

    pub fn working_bits(&self) -> u32 {
        self.working_bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Bits of relative accuracy promised for public results.
    pub fn target_bits(&self) -> u32 {
        self.working_bits - self.guard_bits
    }
}

fn floor_shift(x: &BigInt, s: u32) -> BigInt {
    x.div_floor(&(BigInt::one() << s))
}

fn round_shift(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    floor_shift(&(x + (BigInt::one() << (s - 1))), s)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest, ties up; b > 0
    (a * BigInt::from(2) + b).div_floor(&(b * BigInt::from(2)))
}

/// Smallest integer >= q.
fn ceil_rational(q: &BigRational) -> BigInt {
    q.numer().div_ceil(q.denom())
}

/// A real enclosed by a fixed-point midpoint and radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigReal {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

impl BigReal {
    pub fn zero(prec: u32) -> Self {
        BigReal { mid: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    /// Ball from raw fixed-point parts; `rad` must be nonnegative.
    pub fn from_parts(mid: BigInt, rad: BigInt, prec: u32) -> Self {
        debug_assert!(!rad.is_negative());
        BigReal { mid, rad, prec }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        BigReal { mid: BigInt::from(n) << prec, rad: BigInt::zero(), prec }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let scaled = q.numer() << prec;
        let (quot, rem) = scaled.div_mod_floor(q.denom());
        if rem.is_zero() {
            BigReal { mid: quot, rad: BigInt::zero(), prec }
        } else {
            BigReal { mid: round_div(&scaled, q.denom()), rad: BigInt::one(), prec }
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_raw(&self) -> &BigInt {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Midpoint as an exact rational.
    pub fn mid(&self) -> BigRational {
        BigRational::new(self.mid.clone(), BigInt::one() << self.prec)
    }

    /// Absolute error bound as an exact rational.
    pub fn bound(&self) -> BigRational {
        BigRational::new(self.rad.clone(), BigInt::one() << self.prec)
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, BigInt::one() << self.prec)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, BigInt::one() << self.prec)
    }

    /// Upper bound on the absolute value.
    pub fn abs_upper(&self) -> BigRational {
        BigRational::new(self.mid.abs() + &self.rad, BigInt::one() << self.prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    pub fn bound_f64(&self) -> f64 {
        self.bound().to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    /// Whether the two enclosures share a point.
    pub fn overlaps(&self, other: &BigReal) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// True when the whole ball lies strictly on one side of zero.
    pub fn excludes_zero(&self) -> bool {
        self.mid.abs() > self.rad
    }

    /// Re-express at another precision, rounding the midpoint if needed.
    pub fn with_prec(&self, prec: u32) -> BigReal {
        use std::cmp::Ordering::*;
        match prec.cmp(&self.prec) {
            Equal => self.clone(),
            Greater => {
                let s = prec - self.prec;
                BigReal { mid: &self.mid << s, rad: &self.rad << s, prec }
            }
            Less => {
                let s = self.prec - prec;
                let mid = round_shift(&self.mid, s);
                let exact = (&mid << s) == self.mid;
                let mut rad = ceil_div(&self.rad, &(BigInt::one() << s));
                if !exact {
                    rad += 1;
                }
                BigReal { mid, rad, prec }
            }
        }
    }

    fn aligned(&self, other: &BigReal) -> (BigReal, BigReal) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    /// Widen the radius by the exact amount `extra >= 0`.
    pub fn widen(&self, extra: &BigRational) -> BigReal {
        let scaled = extra * BigRational::from_integer(BigInt::one() << self.prec);
        BigReal { mid: self.mid.clone(), rad: &self.rad + ceil_rational(&scaled.abs()), prec: self.prec }
    }

    pub fn neg(&self) -> BigReal {
        BigReal { mid: -&self.mid, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn add(&self, other: &BigReal) -> BigReal {
        let (a, b) = self.aligned(other);
        BigReal { mid: a.mid + b.mid, rad: a.rad + b.rad, prec: a.prec }
    }

    pub fn sub(&self, other: &BigReal) -> BigReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BigReal) -> BigReal {
        let (a, b) = self.aligned(other);
        let p = a.prec;
        let prod = &a.mid * &b.mid;
        let mid = round_shift(&prod, p);
        let exact_mid = (&mid << p) == prod;
        let err = a.mid.abs() * &b.rad + b.mid.abs() * &a.rad + &a.rad * &b.rad;
        let mut rad = ceil_div(&err, &(BigInt::one() << p));
        if !exact_mid {
            rad += 1;
        }
        BigReal { mid, rad, prec: p }
    }

    pub fn mul_rational(&self, q: &BigRational) -> BigReal {
        let num = &self.mid * q.numer();
        let (quot, rem) = num.div_mod_floor(q.denom());
        let (mid, round) = if rem.is_zero() { (quot, 0) } else { (round_div(&num, q.denom()), 1) };
        let rad = ceil_div(&(&self.rad * q.numer().abs()), q.denom()) + round;
        BigReal { mid, rad, prec: self.prec }
    }

    /// `1/d` for a positive integer `d`.
    pub fn recip_int(d: &BigInt, prec: u32) -> BigReal {
        let one = BigInt::one() << prec;
        let (q, r) = one.div_mod_floor(d);
        if r.is_zero() {
            BigReal { mid: q, rad: BigInt::zero(), prec }
        } else {
            BigReal { mid: round_div(&one, d), rad: BigInt::one(), prec }
        }
    }

    /// Division by a positive integer.
    pub fn div_int(&self, d: &BigInt) -> BigReal {
        let (q, r) = self.mid.div_mod_floor(d);
        let (mid, round) = if r.is_zero() { (q, 0) } else { (round_div(&self.mid, d), 1) };
        BigReal { mid, rad: ceil_div(&self.rad, d) + round, prec: self.prec }
    }

    pub fn mul_int(&self, n: i64) -> BigReal {
        BigReal { mid: &self.mid * n, rad: &self.rad * n.unsigned_abs(), prec: self.prec }
    }

    pub fn add_rational(&self, q: &BigRational) -> BigReal {
        self.add(&BigReal::from_rational(q, self.prec))
    }

    pub fn div(&self, other: &BigReal) -> Result<BigReal, NumError> {
        let (a, b) = self.aligned(other);
        if !b.excludes_zero() {
            return Err(NumError::Domain { func: "div", arg: "ball containing zero".into() });
        }
        let p = a.prec;
        let num = &a.mid << p;
        let mid = round_div(&num, &b.mid.abs()) * if b.mid.is_negative() { -1 } else { 1 };
        let bm = b.mid.abs();
        // |a/b - am/bm| <= (ar*|bm| + |am|*br) / (|bm| (|bm| - br))
        let err_num = (&a.rad * &bm + a.mid.abs() * &b.rad) << p;
        let err_den = &bm * (&bm - &b.rad);
        let rad = ceil_div(&err_num, &err_den) + 1;
        Ok(BigReal { mid, rad, prec: p })
    }

    pub fn powi(&self, e: u32) -> BigReal {
        let mut acc = BigReal::from_int(1, self.prec);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Number of correct leading bits relative to the magnitude, or `None`
    /// when the ball is exact.
    pub fn relative_bits(&self) -> Option<i64> {
        if self.rad.is_zero() {
            return None;
        }
        if self.mid.abs() <= self.rad {
            return Some(0);
        }
        let lo = (self.mid.abs() - &self.rad).bits() as i64;
        Some(lo - 1 - self.rad.bits() as i64)
    }

    /// Check the relative-accuracy contract of `ctx`.
    pub fn certify(self, ctx: &PrecisionContext) -> Result<BigReal, NumError> {
        match self.relative_bits() {
            None => Ok(self),
            Some(b) if b >= ctx.target_bits() as i64 => Ok(self),
            Some(b) => Err(NumError::PrecisionExhausted { achieved: b, required: ctx.target_bits() }),
        }
    }

    /// Midpoint rounded to `digits` decimals.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_string(&self.mid(), digits)
    }

    /// Decimal digits after the point that the radius certifies: the printed
    /// value is within `10^-d` of the true value.
    pub fn certified_decimals(&self) -> usize {
        let cap = (self.prec as f64 * std::f64::consts::LOG10_2).floor() as usize;
        if self.rad.is_zero() {
            return cap;
        }
        let e = self.bound();
        let mut d = 0usize;
        let mut half = BigRational::new(BigInt::one(), BigInt::from(2));
        if e > half {
            return 0;
        }
        while d < cap {
            let next = &half / BigInt::from(10);
            if e > next {
                break;
            }
            half = next;
            d += 1;
        }
        d
    }

    /// Decimal rendering that only shows certified digits.
    pub fn certified_string(&self) -> String {
        self.to_decimal(self.certified_decimals())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.certified_string())
    }
}

/// `q` rounded to nearest with `digits` decimals, e.g. `-1.250`.
pub fn decimal_string(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q * BigRational::from_integer(scale);
    let n = round_div(scaled.numer(), scaled.denom());
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (int_part, frac) = s.split_at(s.len() - digits);
    let body = if digits == 0 { int_part.to_string() } else { format!("{int_part}.{frac}") };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Decimal upper bound of a nonnegative rational in `d.ddde-N` form with
/// `sig` significant digits, rounded up.
pub fn bound_string(q: &BigRational, sig: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut exp: i64 = 0;
    let mut m = q.abs();
    while m >= ten {
        m /= &ten;
        exp += 1;
    }
    while m < BigRational::one() {
        m *= &ten;
        exp -= 1;
    }
    let scaled = m * BigRational::from_integer(num_traits::pow(BigInt::from(10), sig - 1));
    let mut digits = ceil_rational(&scaled);
    if digits == num_traits::pow(BigInt::from(10), sig) {
        digits /= 10;
        exp += 1;
    }
    let s = digits.to_string();
    let mant = if sig == 1 { s } else { format!("{}.{}", &s[..1], &s[1..]) };
    format!("{mant}e{exp}")
}

// ---------------------------------------------------------------------------
// series kernels in fixed point

const INTERNAL_BITS: u32 = 24;

/// `atanh(a/b)` for `|a/b| <= 1/3`, at `p` fractional bits.
fn atanh_fixed(a: &BigInt, b: &BigInt, p: u32) -> BigReal {
    let neg = a.is_negative();
    let a = a.abs();
    let a2 = &a * &a;
    let b2 = b * b;
    let mut power = (&a << p).div_floor(b);
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * n + 1);
        power = (&power * &a2).div_floor(&b2);
        n += 1;
    }
    let rad = BigInt::from(3 * n + 3);
    let mid = if neg { -sum } else { sum };
    BigReal { mid, rad, prec: p }
}

/// `atan(1/k)` for integer `k >= 2`, at `p` fractional bits.
pub fn atan_inv(k: u64, p: u32) -> BigReal {
    let kk = BigInt::from(k) * BigInt::from(k);
    let mut power = (BigInt::one() << (p + INTERNAL_BITS)) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * n + 1);
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &kk;
        n += 1;
    }
    BigReal { mid: sum, rad: BigInt::from(3 * n + 3), prec: p + INTERNAL_BITS }.with_prec(p)
}

type Cache = Mutex<HashMap<(ConstKey, u32), BigReal>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ConstKey {
    Pi,
    Log2,
    Gamma,
    Li4Half,
    Zeta(u32),
}

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: ConstKey, prec: u32, compute: impl FnOnce() -> BigReal) -> BigReal {
    if let Some(v) = cache().lock().expect("constant cache poisoned").get(&(key, prec)) {
        return v.clone();
    }
    let v = compute();
    cache().lock().expect("constant cache poisoned").insert((key, prec), v.clone());
    v
}

/// `pi` at `prec` fractional bits (Machin's formula).
pub fn pi_bits(prec: u32) -> BigReal {
    cached(ConstKey::Pi, prec, || {
        let p = prec + INTERNAL_BITS;
        atan_inv(5, p).mul_int(16).sub(&atan_inv(239, p).mul_int(4)).with_prec(prec)
    })
}

/// `ln 2 = 2 atanh(1/3)` at `prec` fractional bits.
pub fn log2_bits(prec: u32) -> BigReal {
    cached(ConstKey::Log2, prec, || {
        let p = prec + INTERNAL_BITS;
        atanh_fixed(&BigInt::one(), &BigInt::from(3), p).mul_int(2).with_prec(prec)
    })
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(q: &BigRational, prec: u32) -> Result<BigReal, NumError> {
    if !q.is_positive() {
        return Err(NumError::Domain { func: "ln", arg: q.to_string() });
    }
    // q = 2^k y with 2/3 <= y <= 4/3
    let mut k: i64 = q.numer().bits() as i64 - q.denom().bits() as i64;
    let mut y = q * exact::pow2(-k);
    let lo = exact::rat(2, 3);
    let hi = exact::rat(4, 3);
    while y > hi {
        y /= exact::int(2);
        k += 1;
    }
    while y < lo {
        y *= exact::int(2);
        k -= 1;
    }
    let z = (&y - exact::int(1)) / (&y + exact::int(1));
    let p = prec + INTERNAL_BITS;
    let at = atanh_fixed(z.numer(), z.denom(), p).mul_int(2);
    let l2 = log2_bits(p).mul_int(k);
    Ok(at.add(&l2).with_prec(prec))
}

/// `li4(1/2) = sum 2^-n n^-4` at `prec` fractional bits.
pub fn li4_half_bits(prec: u32) -> BigReal {
    cached(ConstKey::Li4Half, prec, || {
        let p = prec + INTERNAL_BITS;
        let mut sum = BigInt::zero();
        for n in 1..=p {
            sum += (BigInt::one() << (p - n)) / BigInt::from(n).pow(4);
        }
        // per-term truncation < 1 ulp; tail beyond n = p < 1 ulp
        BigReal { mid: sum, rad: BigInt::from(p + 1), prec: p }.with_prec(prec)
    })
}

/// Exact partial sum `sum_{n<=terms} 2^-n n^-4`.
pub fn li4_half_partial(terms: u64) -> BigRational {
    (1..=terms).fold(BigRational::zero(), |acc, n| {
        acc + exact::pow2(-(n as i64)) * exact::inv_pow(&BigInt::from(n), 4)
    })
}

/// Smallest Euler-Maclaurin order `M` whose estimated remainder for
/// `g(x) = x^-p (ln x)^[log]` at `x0` is below `2^-bits`; `None` if the
/// expansion turns around first. Only a guess, checked rigorously later.
fn em_order_estimate(p: u32, x0: f64, log: bool, bits: u32) -> Option<u32> {
    let lnx = x0.ln();
    let goal = -(bits as f64 + 2.0) * std::f64::consts::LN_2;
    let two_pi_ln = (2.0 * std::f64::consts::PI).ln();
    let mut ln_rising = (p as f64).ln(); // ln (p)_{2k-1}
    let mut harm = 1.0 / p as f64; // sum_{j<2k-1} 1/(p+j)
    let mut prev = f64::INFINITY;
    for k in 1..=4000u32 {
        if k > 1 {
            let j = 2 * k - 3;
            ln_rising += ((p + j) as f64).ln() + ((p + j + 1) as f64).ln();
            harm += 1.0 / (p + j) as f64 + 1.0 / (p + j + 1) as f64;
        }
        if log && lnx <= harm + 1.0 / (p + 2 * k - 1) as f64 + 1e-9 {
            return None;
        }
        // |B_2k|/(2k)! <= 4 (2 pi)^-2k
        let mut est = 2.0f64.ln() + 4.0f64.ln() - 2.0 * k as f64 * two_pi_ln + ln_rising
            - (p + 2 * k - 1) as f64 * lnx;
        if log {
            est += (lnx + 1.0).ln();
        }
        if est < goal {
            return Some(k);
        }
        if est > prev {
            return None;
        }
        prev = est;
    }
    None
}

/// Euler-Maclaurin value of `sum_{j>=0} g(x0 + j)` for `g(x) = x^-p` or
/// `g(x) = x^-p ln x`, or `None` when `x0` is too small for `2^-bits`.
fn em_tail(p: u32, x0: &BigRational, log: bool, bits: u32, prec: u32) -> Option<BigReal> {
    let m_order = em_order_estimate(p, x0.to_f64()?, log, bits)?;
    let pr = exact::int(p as i64);
    let inv2 = x0.recip() * x0.recip();
    let ln_ball = if log { Some(ln_rational(x0, prec).ok()?) } else { None };
    // x0^{-p-m} as a ball, starting at m = 1
    let mut xpow = BigReal::from_rational(&num_traits::pow(x0.recip(), p as usize + 1), prec);
    let head = BigReal::from_rational(&(num_traits::pow(x0.recip(), p as usize) / exact::int(2)), prec);
    let lead = xpow.mul_rational(&(x0 * x0 / (&pr - exact::int(1))));
    // value = alpha ln x0 + beta
    let (mut alpha, mut beta) = if log {
        let pm1 = &pr - exact::int(1);
        (lead.add(&head), lead.mul_rational(&pm1.recip()))
    } else {
        (lead.add(&head), BigReal::zero(prec))
    };
    // g^(m)(x0) = x0^{-p-m} (a_m ln x0 + b_m); advance to m = 1
    let mut a_m = -pr.clone();
    let mut b_m = exact::int(if log { 1 } else { 0 });
    let mut harm = pr.recip();
    let mut m = 1u32;
    for k in 1..m_order {
        let c = exact::bernoulli(2 * k as usize) / BigRational::from_integer(exact::factorial(2 * k));
        // subtract B_2k/(2k)! g^(2k-1)(x0)
        alpha = alpha.sub(&xpow.mul_rational(&(&c * &a_m)));
        if log {
            beta = beta.sub(&xpow.mul_rational(&(&c * &b_m)));
        }
        for _ in 0..2 {
            let q = &pr + exact::int(m as i64);
            let a_next = -&q * &a_m;
            if log {
                b_m = &a_m - &q * &b_m;
            }
            a_m = a_next;
            harm += q.recip();
            m += 1;
        }
        xpow = xpow.mul_rational(&inv2);
    }
    debug_assert_eq!(m, 2 * m_order - 1);
    let c = exact::bernoulli(2 * m_order as usize) / BigRational::from_integer(exact::factorial(2 * m_order));
    let two_c = exact::int(2) * c.abs();
    let rem = match &ln_ball {
        Some(l) => {
            // g^(2M) keeps one sign on [x0, inf) when ln x0 > sum_{j<2M} 1/(p+j)
            let next = &harm + (&pr + exact::int(m as i64)).recip();
            if l.lower() <= next {
                return None;
            }
            xpow.abs_upper() * two_c * (a_m.abs() * l.upper() + b_m.abs())
        }
        None => xpow.abs_upper() * two_c * a_m.abs(),
    };
    if rem > exact::pow2(-(bits as i64)) {
        return None;
    }
    let value = match &ln_ball {
        Some(l) => l.mul(&alpha).add(&beta),
        None => alpha,
    };
    Some(value.widen(&rem))
}

type TailKey = (u32, BigRational, bool, u32);

fn tail_cache() -> &'static Mutex<HashMap<TailKey, BigReal>> {
    static CACHE: OnceLock<Mutex<HashMap<TailKey, BigReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `sum_{j>=0} (x0+j)^-p`, or with an extra `ln(x0+j)` factor when `log`,
/// certified to about `2^-prec` absolute.
pub fn power_tail(p: u32, x0: &BigRational, log: bool, prec: u32) -> Result<BigReal, NumError> {
    if p < 2 || !x0.is_positive() {
        return Err(NumError::Domain { func: "power_tail", arg: format!("p={p}, x0={x0}") });
    }
    let key = (p, x0.clone(), log, prec);
    if let Some(v) = tail_cache().lock().expect("tail cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let inner = prec + 16;
    let mut x = x0.clone();
    let mut acc = BigReal::zero(inner);
    let value = loop {
        if let Some(t) = em_tail(p, &x, log, prec + 4, inner) {
            break acc.add(&t).with_prec(prec);
        }
        let step = ceil_rational(&(&x / exact::int(2))).max(BigInt::from(4)).to_u64().unwrap_or(4);
        for _ in 0..step {
            let base = BigReal::from_rational(&num_traits::pow(x.recip(), p as usize), inner);
            let term = if log { base.mul(&ln_rational(&x, inner)?) } else { base };
            acc = acc.add(&term);
            x += exact::int(1);
        }
    };
    tail_cache().lock().expect("tail cache poisoned").insert(key, value.clone());
    Ok(value)
}

/// `zeta(s)` for integer `s >= 2` by direct summation plus an Euler-Maclaurin
/// tail (even arguments included, so this is independent of Bernoulli values).
pub fn zeta_bits(s: u32, prec: u32) -> Result<BigReal, NumError> {
    if s < 2 {
        return Err(NumError::Domain { func: "zeta", arg: s.to_string() });
    }
    Ok(cached(ConstKey::Zeta(s), prec, || {
        let p = prec + INTERNAL_BITS;
        let n0 = 16 + p as u64 / 8;
        let mut sum = BigInt::zero();
        for n in 1..n0 {
            sum += (BigInt::one() << p) / BigInt::from(n).pow(s);
        }
        let head = BigReal { mid: sum, rad: BigInt::from(n0), prec: p };
        let tail = power_tail(s, &exact::int(n0 as i64), false, p).expect("valid tail arguments");
        head.add(&tail).with_prec(prec)
    }))
}

/// Euler's constant from `H_N - ln N - 1/(2N) + sum B_2k / (2k N^2k)`.
pub fn gamma_bits(prec: u32) -> BigReal {
    cached(ConstKey::Gamma, prec, || {
        let p = prec + INTERNAL_BITS;
        let n = 16 + p as i64 / 4;
        let nq = exact::int(n);
        let mut h = BigInt::zero();
        for k in 1..=n {
            h += (BigInt::one() << p) / BigInt::from(k);
        }
        let mut acc = BigReal { mid: h, rad: BigInt::from(n), prec: p };
        acc = acc.sub(&ln_rational(&nq, p).expect("positive"));
        let mut corr = -(exact::int(2) * &nq).recip();
        let target = exact::pow2(-(p as i64) - 2);
        let n2 = &nq * &nq;
        let mut npow = exact::int(1);
        let mut rem = None;
        for k in 1..=4 * p as usize {
            npow *= &n2;
            let t = exact::bernoulli(2 * k) / (exact::int(2 * k as i64) * &npow);
            let r = exact::int(2) * t.abs();
            if r <= target {
                rem = Some(r);
                break;
            }
            corr += t;
        }
        let rem = rem.expect("gamma expansion converges for this N");
        acc.add_rational(&corr).widen(&rem).with_prec(prec)
    })
}

pub fn const_pi(ctx: &PrecisionContext) -> BigReal {
    pi_bits(ctx.working_bits)
}

pub fn const_log2(ctx: &PrecisionContext) -> BigReal {
    log2_bits(ctx.working_bits)
}

pub fn const_gamma(ctx: &PrecisionContext) -> BigReal {
    gamma_bits(ctx.working_bits)
}

pub fn zeta_num(s: i64, ctx: &PrecisionContext) -> Result<BigReal, NumError> {
    if s < 2 {
        return Err(NumError::Domain { func: "zeta", arg: s.to_string() });
    }
    zeta_bits(s as u32, ctx.working_bits)
}

pub fn li4_half_num(ctx: &PrecisionContext) -> BigReal {
    li4_half_bits(ctx.working_bits)
}

/// Numeric value of one atom.
pub fn atom_value(a: Atom, prec: u32) -> BigReal {
    match a {
        Atom::Pi => pi_bits(prec),
        Atom::Log2 => log2_bits(prec),
        Atom::Li4Half => li4_half_bits(prec),
        Atom::OddZeta(s) => zeta_bits(s, prec).expect("odd zeta atom has s >= 3"),
    }
}

/// Enclosure of `e` without the relative-accuracy check; use this for
/// residuals that are expected to vanish.
pub fn eval_sym_ball(e: &SymExpr, ctx: &PrecisionContext) -> BigReal {
    let prec = ctx.working_bits;
    let mut acc = BigReal::zero(prec);
    for (m, c) in e.terms() {
        let mut v = BigReal::from_int(1, prec);
        for (a, k) in m.factors() {
            v = v.mul(&atom_value(*a, prec).powi(*k));
        }
        acc = acc.add(&v.mul_rational(c));
    }
    acc
}

/// Value of `e` certified to the context's relative accuracy.
pub fn eval_sym(e: &SymExpr, ctx: &PrecisionContext) -> Result<BigReal, NumError> {
    eval_sym_ball(e, ctx).certify(ctx)
}
