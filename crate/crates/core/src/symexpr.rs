//! Rational-linear combinations of monomials in the constants
//! `{pi, ln 2, li4(1/2), zeta(3), zeta(5), ...}`.
//!
//! Even zeta values never appear as atoms: [`zeta_sym`] rewrites them as
//! rational multiples of `pi^(2n)` at construction, so structural equality of
//! two expressions is equality of their normal forms.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{self, BigRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("{func}({s}) needs s >= 2")]
    ArgumentTooSmall { func: &'static str, s: i64 },
    #[error("zeta({0}) is not an odd atom")]
    NotOddZeta(u32),
    #[error("unknown atom name `{0}`")]
    UnknownAtom(String),
}

/// One constant of the basis. The derived order is the canonical atom order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Pi,
    Log2,
    Li4Half,
    OddZeta(u32),
}

impl Atom {
    pub fn odd_zeta(s: u32) -> Result<Atom, SymError> {
        if s >= 3 && s % 2 == 1 {
            Ok(Atom::OddZeta(s))
        } else {
            Err(SymError::NotOddZeta(s))
        }
    }

    pub fn weight(self) -> u32 {
        match self {
            Atom::Pi | Atom::Log2 => 1,
            Atom::Li4Half => 4,
            Atom::OddZeta(s) => s,
        }
    }

    pub fn name(self) -> String {
        match self {
            Atom::Pi => "pi".to_string(),
            Atom::Log2 => "ln2".to_string(),
            Atom::Li4Half => "li4_half".to_string(),
            Atom::OddZeta(s) => format!("zeta({s})"),
        }
    }

    pub fn parse(name: &str) -> Result<Atom, SymError> {
        match name {
            "pi" => Ok(Atom::Pi),
            "ln2" => Ok(Atom::Log2),
            "li4_half" => Ok(Atom::Li4Half),
            _ => name
                .strip_prefix("zeta(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|s| s.parse::<u32>().ok())
                .ok_or_else(|| SymError::UnknownAtom(name.to_string()))
                .and_then(|s| Atom::odd_zeta(s).map_err(|_| SymError::UnknownAtom(name.to_string()))),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Product of atoms with positive exponents, kept sorted by atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn power(a: Atom, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(a, e)])
        }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Atom, u32)>) -> Self {
        let mut map: BTreeMap<Atom, u32> = BTreeMap::new();
        for (a, e) in factors {
            *map.entry(a).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, a: Atom) -> u32 {
        self.0.iter().find(|(b, _)| *b == a).map_or(0, |(_, e)| *e)
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(a, e)| a.weight() * e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_factors(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(a, e)| if *e == 1 { a.name() } else { format!("{}^{}", a.name(), e) })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Weight structure of an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero expression is homogeneous of every weight.
    Zero,
    Weight(u32),
    Mixed,
}

/// Finite map monomial -> nonzero rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymExpr {
    terms: BTreeMap<Monomial, BigRational>,
}

impl SymExpr {
    pub fn zero() -> Self {
        SymExpr::default()
    }

    pub fn constant(c: BigRational) -> Self {
        SymExpr::term(c, Monomial::one())
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut e = SymExpr::zero();
        e.add_term(m, c);
        e
    }

    pub fn atom(a: Atom) -> Self {
        SymExpr::term(BigRational::one(), Monomial::atom(a))
    }

    pub fn pi_pow(e: u32) -> Self {
        SymExpr::term(BigRational::one(), Monomial::power(Atom::Pi, e))
    }

    pub fn ln2() -> Self {
        SymExpr::atom(Atom::Log2)
    }

    pub fn li4_half() -> Self {
        SymExpr::atom(Atom::Li4Half)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> SymExpr {
        if c.is_zero() {
            return SymExpr::zero();
        }
        SymExpr { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_expr(&self, other: &SymExpr) -> SymExpr {
        let mut out = SymExpr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> SymExpr {
        (0..e).fold(SymExpr::constant(BigRational::one()), |acc, _| acc.mul_expr(self))
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut weights = self.terms.keys().map(Monomial::weight);
        match weights.next() {
            None => Homogeneity::Zero,
            Some(w) => {
                if weights.all(|v| v == w) {
                    Homogeneity::Weight(w)
                } else {
                    Homogeneity::Mixed
                }
            }
        }
    }

    /// Common weight of every monomial; `None` for mixed weights and for zero
    /// (use [`SymExpr::has_weight`] when zero should count as homogeneous).
    pub fn homogeneous_weight(&self) -> Option<u32> {
        match self.homogeneity() {
            Homogeneity::Weight(w) => Some(w),
            _ => None,
        }
    }

    pub fn has_weight(&self, w: u32) -> bool {
        match self.homogeneity() {
            Homogeneity::Zero => true,
            Homogeneity::Weight(v) => v == w,
            Homogeneity::Mixed => false,
        }
    }

    /// Canonical ASCII rendering, e.g. `31/4*zeta(5) - 7/12*pi^2*zeta(3)`.
    pub fn canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let coeff = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            if m.is_one() {
                out.push_str(&coeff);
            } else if a.is_one() {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{coeff}*{m}"));
            }
        }
        out
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl Add for SymExpr {
    type Output = SymExpr;
    fn add(mut self, rhs: SymExpr) -> SymExpr {
        self += rhs;
        self
    }
}

impl Add<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn add(self, rhs: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        out += rhs.clone();
        out
    }
}

impl AddAssign for SymExpr {
    fn add_assign(&mut self, rhs: SymExpr) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Sub for SymExpr {
    type Output = SymExpr;
    fn sub(self, rhs: SymExpr) -> SymExpr {
        self + (-rhs)
    }
}

impl Sub<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn sub(self, rhs: &SymExpr) -> SymExpr {
        self.clone() - rhs.clone()
    }
}

impl SubAssign for SymExpr {
    fn sub_assign(&mut self, rhs: SymExpr) {
        *self += -rhs;
    }
}

impl Neg for SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        SymExpr { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Mul for SymExpr {
    type Output = SymExpr;
    fn mul(self, rhs: SymExpr) -> SymExpr {
        self.mul_expr(&rhs)
    }
}

impl Mul<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn mul(self, rhs: &SymExpr) -> SymExpr {
        self.mul_expr(rhs)
    }
}

impl Mul<SymExpr> for BigRational {
    type Output = SymExpr;
    fn mul(self, rhs: SymExpr) -> SymExpr {
        rhs.scale(&self)
    }
}

impl std::iter::Sum for SymExpr {
    fn sum<I: Iterator<Item = SymExpr>>(iter: I) -> SymExpr {
        iter.fold(SymExpr::zero(), |acc, e| acc + e)
    }
}

pub fn add(a: &SymExpr, b: &SymExpr) -> SymExpr {
    a + b
}

pub fn mul(a: &SymExpr, b: &SymExpr) -> SymExpr {
    a * b
}

pub fn scale(c: &BigRational, a: &SymExpr) -> SymExpr {
    a.scale(c)
}

/// Rational `r` with `zeta(2n) = r * pi^(2n)`.
pub fn even_zeta_pi_coefficient(n: u32) -> BigRational {
    let two_n = 2 * n;
    let b = exact::bernoulli(two_n as usize);
    let sign = if n % 2 == 1 { BigRational::one() } else { -BigRational::one() };
    sign * b * exact::pow2(two_n as i64)
        / (BigRational::from_integer(exact::factorial(two_n)) * exact::int(2))
}

/// `zeta(s)`: the odd atom, or a rational multiple of `pi^s` for even `s`.
pub fn zeta_sym(s: i64) -> Result<SymExpr, SymError> {
    if s < 2 {
        return Err(SymError::ArgumentTooSmall { func: "zeta", s });
    }
    let s = s as u32;
    if s % 2 == 1 {
        Ok(SymExpr::atom(Atom::OddZeta(s)))
    } else {
        Ok(SymExpr::term(even_zeta_pi_coefficient(s / 2), Monomial::power(Atom::Pi, s)))
    }
}

/// `lambda(s) = (1 - 2^-s) zeta(s)`, the sum over odd integers.
pub fn lambda_sym(s: i64) -> Result<SymExpr, SymError> {
    if s < 2 {
        return Err(SymError::ArgumentTooSmall { func: "lambda", s });
    }
    Ok(zeta_sym(s)?.scale(&(BigRational::one() - exact::pow2(-s))))
}

/// Alternating zeta `(1 - 2^(1-s)) zeta(s)`.
pub fn eta_sym(s: i64) -> Result<SymExpr, SymError> {
    if s < 2 {
        return Err(SymError::ArgumentTooSmall { func: "eta", s });
    }
    Ok(zeta_sym(s)?.scale(&(BigRational::one() - exact::pow2(1 - s))))
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    atoms: Vec<(String, u32)>,
    coeff: String,
}

impl Serialize for SymExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                atoms: m.factors().iter().map(|(a, e)| (a.name(), *e)).collect(),
                coeff: exact::fraction_string(c),
            })
            .collect();
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut out = SymExpr::zero();
        for t in repr {
            let mut factors = Vec::with_capacity(t.atoms.len());
            for (name, e) in t.atoms {
                factors.push((Atom::parse(&name).map_err(D::Error::custom)?, e));
            }
            let c = exact::parse_fraction(&t.coeff)
                .ok_or_else(|| D::Error::custom(format!("bad coefficient `{}`", t.coeff)))?;
            out.add_term(Monomial::from_factors(factors), c);
        }
        Ok(out)
    }
}
