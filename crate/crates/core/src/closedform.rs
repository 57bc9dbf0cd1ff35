//! Closed forms of the series families as [`SymExpr`] values.
//!
//! Every function validates its parameter eagerly; sums over an empty index
//! range contribute zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{int, pow2, rat, BigRational};
use crate::symexpr::{eta_sym, lambda_sym, zeta_sym, SymExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("{op}: parameter {param} out of range ({requirement})")]
    OutOfDomain { op: &'static str, param: String, requirement: &'static str },
}

fn need(ok: bool, op: &'static str, param: impl fmt::Display, requirement: &'static str) -> Result<(), ClosedFormError> {
    if ok {
        Ok(())
    } else {
        Err(ClosedFormError::OutOfDomain { op, param: param.to_string(), requirement })
    }
}

/// One series family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SumId {
    /// `sum S_n / n^b`
    J(u32),
    /// `sum S_n / (2n-1)^b`
    Jbar(u32),
    /// `sum S_n^(t) / n^s`
    Sigma(u32, u32),
    /// `h_q = sum H_n / (2n+1)^q`
    HOverOdd(u32),
    /// `sum H_2n / n^(2a)`
    Z(u32),
    /// `sum H_(2n-1) / (2n-1)^(2a)`
    HoddOverOdd(u32),
    /// `sum H_n / n^b`
    EulerStar(u32),
    /// `sum (-1)^(n-1) H_n / n^(2a)`
    AltEulerStar(u32),
    /// `ZetaStar(q, p) = sum_{m<=n} n^-q m^-p`
    ZetaStar(u32, u32),
    /// `sum (-1)^n Ht_(n-1)^(2a) / n` with `Ht` the alternating harmonic number
    AltTildeH(u32),
    /// `E(p, q) = sum H_2n^(p) / n^q`
    E(u32, u32),
}

impl SumId {
    pub fn validate(&self) -> Result<(), ClosedFormError> {
        use SumId::*;
        match *self {
            J(b) => need(b >= 2, "J", b, "b >= 2"),
            Jbar(b) => need(b >= 2, "Jbar", b, "b >= 2"),
            Sigma(s, t) => need(s >= 2 && t >= 1, "sigma", format!("({s},{t})"), "s >= 2, t >= 1"),
            HOverOdd(q) => need(q >= 2, "h", q, "q >= 2"),
            Z(a) => need(a >= 1, "Z", a, "a >= 1"),
            HoddOverOdd(a) => need(a >= 1, "HoddOverOdd", a, "a >= 1"),
            EulerStar(b) => need(b >= 2, "EulerStar", b, "b >= 2"),
            AltEulerStar(a) => need(a >= 1, "AltEulerStar", a, "a >= 1"),
            ZetaStar(q, p) => need(q >= 2 && p >= 1, "ZetaStar", format!("({q},{p})"), "q >= 2, p >= 1"),
            AltTildeH(a) => need(a >= 1, "AltTildeH", a, "a >= 1"),
            E(p, q) => need(p >= 1 && q >= 2, "E", format!("({p},{q})"), "p >= 1, q >= 2"),
        }
    }

    /// Weight of the sum; closed forms are homogeneous of this weight.
    pub fn weight(&self) -> u32 {
        use SumId::*;
        match *self {
            J(b) | Jbar(b) | EulerStar(b) => b + 1,
            HOverOdd(q) => q + 1,
            Sigma(s, t) => s + t,
            Z(a) | HoddOverOdd(a) | AltEulerStar(a) | AltTildeH(a) => 2 * a + 1,
            ZetaStar(q, p) => q + p,
            E(p, q) => p + q,
        }
    }

    pub fn family(&self) -> &'static str {
        use SumId::*;
        match self {
            J(_) => "J",
            Jbar(_) => "Jbar",
            Sigma(..) => "sigma",
            HOverOdd(_) => "h",
            Z(_) => "Z",
            HoddOverOdd(_) => "HoddOverOdd",
            EulerStar(_) => "EulerStar",
            AltEulerStar(_) => "AltEulerStar",
            ZetaStar(..) => "ZetaStar",
            AltTildeH(_) => "AltTildeH",
            E(..) => "E",
        }
    }

    /// Parameter names and values in CLI order.
    pub fn params(&self) -> Vec<(&'static str, u32)> {
        use SumId::*;
        match *self {
            J(b) | Jbar(b) | EulerStar(b) => vec![("b", b)],
            Sigma(s, t) => vec![("s", s), ("t", t)],
            HOverOdd(q) => vec![("q", q)],
            Z(a) | HoddOverOdd(a) | AltEulerStar(a) | AltTildeH(a) => vec![("a", a)],
            ZetaStar(q, p) => vec![("q", q), ("p", p)],
            E(p, q) => vec![("p", p), ("q", q)],
        }
    }

    /// Every valid member of weight at most `max_weight`.
    pub fn enumerate(max_weight: u32) -> Vec<SumId> {
        use SumId::*;
        let mut out = Vec::new();
        for w in 3..=max_weight {
            out.push(J(w - 1));
            out.push(Jbar(w - 1));
            for s in 2..w {
                out.push(Sigma(s, w - s));
            }
            out.push(HOverOdd(w - 1));
            if w % 2 == 1 {
                let a = (w - 1) / 2;
                out.extend([Z(a), HoddOverOdd(a), AltEulerStar(a), AltTildeH(a)]);
            }
            out.push(EulerStar(w - 1));
            for q in 2..w {
                out.push(ZetaStar(q, w - q));
            }
            for q in 2..w {
                out.push(E(w - q, q));
            }
        }
        out
    }
}

impl fmt::Display for SumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.params().iter().map(|(_, v)| v.to_string()).collect();
        write!(f, "{}({})", self.family(), args.join(","))
    }
}

impl FromStr for SumId {
    type Err = String;

    /// Parses the [`Display`](fmt::Display) form, e.g. `sigma(3,2)`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (name, rest) = s.split_once('(').ok_or_else(|| format!("expected family(args): {s}"))?;
        let args: Vec<u32> = rest
            .strip_suffix(')')
            .ok_or_else(|| format!("missing `)` in {s}"))?
            .split(',')
            .map(|a| a.trim().parse::<u32>().map_err(|e| format!("{a}: {e}")))
            .collect::<Result<_, _>>()?;
        let one = |args: &[u32]| if args.len() == 1 { Ok(args[0]) } else { Err(format!("{name} takes one argument")) };
        let two = |args: &[u32]| {
            if args.len() == 2 {
                Ok((args[0], args[1]))
            } else {
                Err(format!("{name} takes two arguments"))
            }
        };
        let id = match name.trim().to_ascii_lowercase().as_str() {
            "j" => SumId::J(one(&args)?),
            "jbar" => SumId::Jbar(one(&args)?),
            "sigma" => {
                let (s, t) = two(&args)?;
                SumId::Sigma(s, t)
            }
            "h" => SumId::HOverOdd(one(&args)?),
            "z" => SumId::Z(one(&args)?),
            "hoddoverodd" => SumId::HoddOverOdd(one(&args)?),
            "eulerstar" => SumId::EulerStar(one(&args)?),
            "alteulerstar" => SumId::AltEulerStar(one(&args)?),
            "zetastar" => {
                let (q, p) = two(&args)?;
                SumId::ZetaStar(q, p)
            }
            "alttildeh" => SumId::AltTildeH(one(&args)?),
            "e" => {
                let (p, q) = two(&args)?;
                SumId::E(p, q)
            }
            other => return Err(format!("unknown family `{other}`")),
        };
        Ok(id)
    }
}

fn z(s: i64) -> SymExpr {
    zeta_sym(s).expect("zeta argument >= 2")
}

fn l(s: i64) -> SymExpr {
    lambda_sym(s).expect("lambda argument >= 2")
}

fn eta(s: i64) -> SymExpr {
    eta_sym(s).expect("eta argument >= 2")
}

fn ln2() -> SymExpr {
    SymExpr::ln2()
}

/// `sum_{j in range} f(j)`, zero on an empty range.
fn sum_over(range: std::ops::RangeInclusive<i64>, f: impl Fn(i64) -> SymExpr) -> SymExpr {
    range.map(f).sum()
}

fn c(q: BigRational, e: SymExpr) -> SymExpr {
    e.scale(&q)
}

/// `zeta*(b,1) = sum H_n / n^b`.
pub fn euler_star(b: i64) -> Result<SymExpr, ClosedFormError> {
    need(b >= 2, "euler_star", b, "b >= 2")?;
    let head = c(int(1) + rat(b, 2), z(b + 1));
    let tail = sum_over(2..=b - 1, |j| &z(j) * &z(b + 1 - j));
    Ok(head - c(rat(1, 2), tail))
}

/// `sum (-1)^(n-1) H_n / n^(2a)`.
pub fn alt_euler_star(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 1, "alt_euler_star", a, "a >= 1")?;
    let main = c(int(a) + rat(1, 2), eta(2 * a + 1)) - c(rat(1, 2), z(2 * a + 1));
    Ok(main - sum_over(1..=a - 1, |j| &eta(2 * j) * &z(2 * a + 1 - 2 * j)))
}

/// `sum H_2n / n^(2a)`.
#[allow(non_snake_case)]
pub fn Z_even(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 1, "Z_even", a, "a >= 1")?;
    let lead = c((int(2 * a + 1) + pow2(2 * a + 1)) / int(4), z(2 * a + 1));
    Ok(lead - sum_over(1..=a - 1, |j| c(pow2(2 * a - 2 * j), &z(2 * j) * &z(2 * a + 1 - 2 * j))))
}

/// `sum H_(2n-1) / (2n-1)^(2a)`.
pub fn h_odd_over_odd(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 1, "h_odd_over_odd", a, "a >= 1")?;
    let lead = c(rat(2 * a + 1, 2), l(2 * a + 1));
    Ok(lead - sum_over(1..=a - 1, |j| &z(2 * a + 1 - 2 * j) * &l(2 * j)))
}

/// `J(2a)` in its lambda form.
pub fn jordan_even(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 1, "jordan_even", a, "a >= 1")?;
    let lead = c(pow2(2 * a - 1), l(2 * a + 1));
    Ok(lead - sum_over(1..=a - 1, |j| c(pow2(2 * j), &l(2 * j + 1) * &z(2 * a - 2 * j))))
}

/// `J(3)`.
pub fn jordan_j3() -> SymExpr {
    let ln2_2 = ln2().pow(2);
    c(int(8), SymExpr::li4_half()) - c(rat(53, 8), z(4)) - c(int(2), &z(2) * &ln2_2)
        + c(rat(1, 3), ln2().pow(4))
        + c(int(7), &z(3) * &ln2())
}

/// `Jbar(2a)`.
pub fn jordan_bar_even(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 1, "jordan_bar_even", a, "a >= 1")?;
    let lead = &l(2 * a) * &ln2() + c(rat(1, 2), l(2 * a + 1));
    Ok(lead - sum_over(1..=a - 1, |j| c(pow2(-(2 * j + 1)), &l(2 * a - 2 * j) * &z(2 * j + 1))))
}

/// Value of `Jbar(b) + (-1)^(b-1) 2^-b J(b)`.
pub fn jordan_bar_relation(b: i64) -> Result<SymExpr, ClosedFormError> {
    need(b >= 2, "jordan_bar_relation", b, "b >= 2")?;
    let tail = sum_over(1..=b - 2, |j| {
        let sign = if j % 2 == 1 { int(1) } else { int(-1) };
        c(sign * pow2(-(j + 1)), &l(b - j) * &z(j + 1))
    });
    Ok(&l(b) * &ln2() + tail)
}

/// `Jbar(3)`.
pub fn jordan_bar3() -> SymExpr {
    -SymExpr::li4_half() + c(rat(83, 64), z(4)) + c(rat(1, 4), &z(2) * &ln2().pow(2)) - c(rat(1, 24), ln2().pow(4))
}

/// `h_(2a) = sum H_n / (2n+1)^(2a)`.
pub fn h_even(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 1, "h_even", a, "a >= 1")?;
    let lead = c(int(-2), &l(2 * a) * &ln2()) + c(int(2 * a), l(2 * a + 1));
    Ok(lead - c(int(2), sum_over(1..=a - 1, |j| &l(2 * j) * &l(2 * a + 1 - 2 * j))))
}

/// `h_(2a-1) = sum H_p / (2p+1)^(2a-1)`.
pub fn h_odd(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 2, "h_odd", a, "a >= 2")?;
    let lead = c(int(-2), &l(2 * a - 1) * &ln2()) + c(int(a) - rat(1, 2), l(2 * a));
    Ok(lead - sum_over(1..=a - 2, |q| &l(2 * q + 1) * &l(2 * a - 2 * q - 1)))
}

/// `sum (-1)^n Ht_(n-1)^(2a) / n`.
pub fn alt_tilde_h_sum(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 1, "alt_tildeH_sum", a, "a >= 1")?;
    let lead = c(rat(1, 2), z(2 * a + 1)) - c(int(a) + rat(1, 2), eta(2 * a + 1)) + &ln2() * &z(2 * a);
    Ok(lead + sum_over(1..=a - 1, |j| &eta(2 * j + 1) * &z(2 * a - 2 * j)))
}

/// `sigma(2, 2a-1)`.
pub fn sigma_2_odd(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 1, "sigma_2_odd", a, "a >= 1")?;
    let lead = c(int(2 * a * (2 * a - 1)), l(2 * a + 1));
    Ok(lead - c(int(8), sum_over(1..=a - 1, |j| c(int(j), &l(2 * a - 2 * j) * &l(2 * j + 1)))))
}

/// `sigma(2a-1, 2)`.
pub fn sigma_odd_2(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 2, "sigma_odd_2", a, "a >= 2")?;
    let lead = c(-int(a) * pow2(2 * a - 1), l(2 * a + 1))
        + c(pow2(2 * a - 1) * rat(2 * a + 1, 3), &l(2) * &l(2 * a - 1));
    Ok(lead + sum_over(1..=a - 2, |j| c(int(j) * pow2(2 * j), &l(2 * j + 1) * &z(2 * a - 2 * j))))
}

/// `zeta*(2a-1, 2)`.
pub fn zeta_star_odd_2(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 2, "zeta_star_odd_2", a, "a >= 2")?;
    let lead = c(rat(-(2 * a * a + a - 1), 2), z(2 * a + 1)) + c(int(2 * a - 1), &z(2) * &z(2 * a - 1));
    Ok(lead + c(int(2), sum_over(1..=a - 2, |j| c(int(j), &z(2 * j + 1) * &z(2 * a - 2 * j)))))
}

/// `E(2, 2a-1) = sum H_2n^(2) / n^(2a-1)`.
#[allow(non_snake_case)]
pub fn E_2_odd(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 2, "E_2_odd", a, "a >= 2")?;
    let mixed = sum_over(1..=a - 2, |j| c(int(j) * pow2(2 * j), &z(2 * j + 1) * &z(2 * a - 2 * j)));
    let zz = c(int(2 * a + 1) * pow2(2 * a - 3) - rat(1, 2), &z(2) * &z(2 * a - 1));
    let lead = c(int(a) * pow2(2 * a - 1) + rat(2 * a * a - a - 1, 8), z(2 * a + 1));
    Ok(mixed + zz - lead)
}

/// `sigma(2a-2, 3)`, valid from `a = 3` on.
pub fn sigma_even_3(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 3, "sigma_even_3", a, "a >= 3")?;
    Ok(sigma_even_3_unchecked(a))
}

/// The same expression without the domain check. At `a = 2` it does not
/// give `sigma(2,3)`; kept so tests can pin that disagreement.
pub fn sigma_even_3_unchecked(a: i64) -> SymExpr {
    let lead = c(int(a * (2 * a - 1)) * pow2(2 * a - 3), l(2 * a + 1))
        - c(int((a - 1) * (2 * a + 3)) * pow2(2 * a - 4), &z(2) * &l(2 * a - 1));
    lead - sum_over(2..=a - 2, |j| c(int(j * (2 * j - 1)) * pow2(2 * j - 2), &z(2 * a - 2 * j) * &l(2 * j + 1)))
}

/// Tabulated `sigma(s,t)` values for `(2,2), (3,2), (3,1), (4,3), (3,4)`.
pub fn sigma_special(s: i64, t: i64) -> Result<SymExpr, ClosedFormError> {
    match (s, t) {
        (2, 2) => Ok(c(int(-8), SymExpr::li4_half()) + c(int(2), &z(2) * &ln2().pow(2))
            - c(rat(1, 3), ln2().pow(4))
            - c(int(7), &z(3) * &ln2())
            + c(rat(151, 16), z(4))),
        (3, 2) => sigma_odd_2(2),
        (3, 1) => Ok(jordan_j3()),
        (4, 3) => Ok(c(int(120), l(7)) - c(int(96), &l(2) * &l(5))),
        (3, 4) => Ok(c(int(-80), l(7)) + c(int(8), &l(3) * &l(4)) + c(rat(176, 3), &l(2) * &l(5))),
        _ => Err(ClosedFormError::OutOfDomain {
            op: "sigma_special",
            param: format!("({s},{t})"),
            requirement: "(s,t) in {(2,2),(3,2),(3,1),(4,3),(3,4)}",
        }),
    }
}

/// `sum_{i=1}^{2a-2} 2^(i-1) sigma(2a-i, 1+i)`.
pub fn weighted_sigma_sum(a: i64) -> Result<SymExpr, ClosedFormError> {
    need(a >= 2, "weighted_sigma_sum", a, "a >= 2")?;
    let inner = c(int(a - 1), l(2 * a + 1))
        + sum_over(1..=a - 1, |j| c(int(3) * pow2(-2 * j) - int(1), &z(2 * j) * &l(2 * a + 1 - 2 * j)));
    Ok(c(pow2(2 * a - 1), inner))
}

/// Value of `sigma(3,3) + 3 sigma(2,4)`.
pub fn sigma33_plus_3sigma24() -> SymExpr {
    c(int(15), l(6)) - c(int(8), l(3).pow(2))
}

/// Sum of all `sigma(w-i, i)`, `i = 1..w-2`.
pub fn sigma_sum_rhs(w: i64) -> Result<SymExpr, ClosedFormError> {
    need(w >= 3, "sigma_sum_rhs", w, "w >= 3")?;
    Ok(c(int(w - 1), l(w)))
}

/// Closed form of `id` when one is known.
pub fn closed_form(id: SumId) -> Result<Option<SymExpr>, ClosedFormError> {
    use SumId::*;
    id.validate()?;
    let half = |n: u32| n as i64 / 2;
    let v = match id {
        J(b) if b % 2 == 0 => Some(jordan_even(half(b))?),
        J(3) => Some(jordan_j3()),
        Jbar(b) if b % 2 == 0 => Some(jordan_bar_even(half(b))?),
        Jbar(3) => Some(jordan_bar3()),
        Sigma(s, 1) => return closed_form(J(s)),
        Sigma(2, t) if t % 2 == 1 => Some(sigma_2_odd(half(t + 1))?),
        Sigma(s, 2) if s % 2 == 1 => Some(sigma_odd_2(half(s + 1))?),
        Sigma(s, 3) if s % 2 == 0 && s >= 4 => Some(sigma_even_3(half(s) + 1)?),
        Sigma(2, 2) => Some(sigma_special(2, 2)?),
        Sigma(3, 4) => Some(sigma_special(3, 4)?),
        HOverOdd(q) if q % 2 == 0 => Some(h_even(half(q))?),
        HOverOdd(q) => Some(h_odd(half(q + 1))?),
        Z(a) => Some(Z_even(a as i64)?),
        HoddOverOdd(a) => Some(h_odd_over_odd(a as i64)?),
        EulerStar(b) | ZetaStar(b, 1) => Some(euler_star(b as i64)?),
        AltEulerStar(a) => Some(alt_euler_star(a as i64)?),
        ZetaStar(q, 2) if q % 2 == 1 => Some(zeta_star_odd_2(half(q + 1))?),
        AltTildeH(a) => Some(alt_tilde_h_sum(a as i64)?),
        E(1, q) if q % 2 == 0 => Some(Z_even(half(q))?),
        E(2, q) if q % 2 == 1 => Some(E_2_odd(half(q + 1))?),
        _ => None,
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::Atom;

    fn pi(e: u32) -> SymExpr {
        SymExpr::pi_pow(e)
    }

    #[test]
    fn euler_star_examples() {
        assert_eq!(euler_star(2).unwrap(), c(int(2), z(3)));
        assert_eq!(euler_star(3).unwrap(), c(rat(5, 4), z(4)));
        assert_eq!(euler_star(3).unwrap(), c(rat(1, 72), pi(4)));
        assert_eq!(euler_star(4).unwrap(), c(int(3), z(5)) - c(rat(1, 6), &pi(2) * &z(3)));
        assert!(euler_star(1).is_err());
    }

    #[test]
    fn alt_euler_star_examples() {
        assert_eq!(alt_euler_star(1).unwrap(), c(rat(5, 8), z(3)));
        assert_eq!(alt_euler_star(2).unwrap(), c(rat(59, 32), z(5)) - c(rat(1, 12), &pi(2) * &z(3)));
        assert!(alt_euler_star(0).is_err());
    }

    #[test]
    fn z_even_examples() {
        assert_eq!(Z_even(1).unwrap(), c(rat(11, 4), z(3)));
        assert_eq!(Z_even(2).unwrap(), c(rat(37, 4), z(5)) - c(int(4), &z(2) * &z(3)));
        // H_2n = S_n + H_n / 2 splits the sum into J(2a) + EulerStar(2a)/2
        for a in 1..=6 {
            let split = jordan_even(a).unwrap() + c(rat(1, 2), euler_star(2 * a).unwrap());
            assert_eq!(Z_even(a).unwrap(), split, "a = {a}");
        }
    }

    #[test]
    fn h_odd_over_odd_examples() {
        assert_eq!(h_odd_over_odd(1).unwrap(), c(rat(21, 16), z(3)));
        assert_eq!(h_odd_over_odd(2).unwrap(), c(rat(5, 2), l(5)) - &z(3) * &l(2));
    }

    /// The zeta form of `J(2a)`.
    fn jordan_even_zeta_form(a: i64) -> SymExpr {
        let lead = c((pow2(2 * a + 1) - int(1)) / int(4), z(2 * a + 1));
        let tail = sum_over(1..=a - 1, |j| c(pow2(2 * j + 1) - int(1), &z(2 * j + 1) * &z(2 * a - 2 * j)));
        lead - c(rat(1, 2), tail)
    }

    #[test]
    fn jordan_even_examples_and_two_forms() {
        assert_eq!(jordan_even(1).unwrap(), c(rat(7, 4), z(3)));
        assert_eq!(jordan_even(2).unwrap(), c(rat(31, 4), z(5)) - c(rat(7, 2), &z(3) * &z(2)));
        let j6 = c(int(32), l(7)) - c(int(4), &l(3) * &z(4)) - c(int(16), &l(5) * &z(2));
        assert_eq!(jordan_even(3).unwrap(), j6);
        for a in 1..=6 {
            assert_eq!(jordan_even(a).unwrap(), jordan_even_zeta_form(a), "a = {a}");
        }
    }

    #[test]
    fn j3_structure() {
        let j3 = jordan_j3();
        assert_eq!(j3.homogeneous_weight(), Some(4));
        assert_eq!(j3.coefficient(&crate::symexpr::Monomial::atom(Atom::Li4Half)), int(8));
    }

    #[test]
    fn jordan_bar_examples() {
        assert_eq!(
            jordan_bar_even(1).unwrap(),
            c(rat(3, 4), &z(2) * &ln2()) + c(rat(7, 16), z(3))
        );
        assert_eq!(
            jordan_bar_even(2).unwrap(),
            c(rat(15, 16), &z(4) * &ln2()) + c(rat(31, 64), z(5)) - c(rat(3, 32), &z(2) * &z(3))
        );
        assert_eq!(jordan_bar_relation(2).unwrap(), &l(2) * &ln2());
        assert_eq!(jordan_bar_relation(3).unwrap(), c(rat(7, 8), &z(3) * &ln2()) + c(rat(15, 32), z(4)));
        assert_eq!(
            jordan_bar_relation(4).unwrap(),
            &l(4) * &ln2() + c(rat(1, 4), &l(3) * &z(2)) - c(rat(1, 8), &l(2) * &z(3))
        );
        let bar3 = jordan_bar3();
        assert_eq!(bar3.coefficient(&crate::symexpr::Monomial::atom(Atom::Li4Half)), int(-1));
        assert_eq!(bar3 + c(rat(1, 8), jordan_j3()), jordan_bar_relation(3).unwrap());
    }

    #[test]
    fn jordan_bar_relation_against_even_forms() {
        for a in 1..=5 {
            let lhs = jordan_bar_even(a).unwrap() - c(pow2(-2 * a), jordan_even(a).unwrap());
            assert_eq!(lhs, jordan_bar_relation(2 * a).unwrap(), "a = {a}");
        }
    }

    #[test]
    fn h_even_examples() {
        assert_eq!(h_even(1).unwrap(), c(rat(-1, 4), &pi(2) * &ln2()) + c(int(2), l(3)));
        assert_eq!(
            h_even(2).unwrap(),
            c(rat(-1, 48), &pi(4) * &ln2()) + c(int(4), l(5)) - c(rat(1, 4), &pi(2) * &l(3))
        );
    }

    /// Regrouped forms of `h_odd` for even and odd `a`.
    fn h_odd_regrouped(a: i64) -> SymExpr {
        let lead = c(int(-2), &l(2 * a - 1) * &ln2()) + c(int(a) - rat(1, 2), l(2 * a));
        if a % 2 == 0 {
            let b = a / 2;
            lead - c(int(2), sum_over(1..=b - 1, |q| &l(2 * q + 1) * &l(4 * b - 2 * q - 1)))
        } else {
            let b = (a - 1) / 2;
            lead - l(2 * b + 1).pow(2) - c(int(2), sum_over(1..=b - 1, |q| &l(2 * q + 1) * &l(4 * b - 2 * q + 1)))
        }
    }

    #[test]
    fn h_odd_examples_and_regroupings() {
        let two = h_odd(2).unwrap();
        assert_eq!(two, c(int(-2), &l(3) * &ln2()) + c(rat(3, 2), l(4)));
        assert_eq!(two, l(2).pow(2) - c(int(2), &l(3) * &ln2()));
        assert_eq!(two, c(rat(1, 64), pi(4)) - c(rat(7, 4), &z(3) * &ln2()));
        assert_eq!(h_odd(3).unwrap(), c(int(-2), &l(5) * &ln2()) + c(rat(5, 2), l(6)) - l(3).pow(2));
        assert_eq!(
            h_odd(4).unwrap(),
            c(int(-2), &l(7) * &ln2()) + c(rat(7, 2), l(8)) - c(int(2), &l(3) * &l(5))
        );
        for a in 2..=8 {
            assert_eq!(h_odd(a).unwrap(), h_odd_regrouped(a), "a = {a}");
        }
        assert!(h_odd(1).is_err());
    }

    #[test]
    fn alt_tilde_h_examples() {
        assert_eq!(alt_tilde_h_sum(1).unwrap(), &ln2() * &z(2) - c(rat(5, 8), z(3)));
        // the formula gives +3/4 zeta(3) zeta(2) at a = 2
        assert_eq!(
            alt_tilde_h_sum(2).unwrap(),
            &ln2() * &z(4) - c(rat(59, 32), z(5)) + c(rat(3, 4), &z(3) * &z(2))
        );
    }

    #[test]
    fn sigma_2_odd_examples() {
        assert_eq!(sigma_2_odd(1).unwrap(), c(rat(7, 4), z(3)));
        assert_eq!(sigma_2_odd(1).unwrap(), c(int(2), l(3)));
        let s23 = sigma_2_odd(2).unwrap();
        assert_eq!(s23, c(int(12), l(5)) - c(int(8), &l(2) * &l(3)));
        assert_eq!(s23, c(rat(93, 8), z(5)) - c(rat(21, 4), &z(2) * &z(3)));
        assert_eq!(
            sigma_2_odd(3).unwrap(),
            c(int(30), l(7)) - c(int(8), &l(4) * &l(3)) - c(int(16), &l(5) * &l(2))
        );
    }

    #[test]
    fn sigma_odd_2_examples() {
        let s32 = sigma_odd_2(2).unwrap();
        assert_eq!(s32, c(int(-16), l(5)) + c(rat(40, 3), &l(2) * &l(3)));
        assert_eq!(s32, c(rat(-31, 2), z(5)) + c(rat(35, 4), &z(2) * &z(3)));
        assert_eq!(
            sigma_odd_2(3).unwrap(),
            c(int(-96), l(7)) + c(rat(224, 3), &l(2) * &l(5)) + c(int(4), &l(3) * &z(4))
        );
        assert!(sigma_odd_2(1).is_err());
    }

    #[test]
    fn zeta_star_and_e_examples() {
        assert_eq!(zeta_star_odd_2(2).unwrap(), c(rat(-9, 2), z(5)) + c(int(3), &z(2) * &z(3)));
        assert_eq!(
            zeta_star_odd_2(3).unwrap(),
            c(int(-10), z(7)) + c(int(5), &z(2) * &z(5)) + c(int(2), &z(3) * &z(4))
        );
        assert_eq!(E_2_odd(2).unwrap(), c(rat(19, 2), &z(2) * &z(3)) - c(rat(133, 8), z(5)));
        for a in 2..=5 {
            let lhs = sigma_odd_2(a).unwrap() + c(rat(1, 4), zeta_star_odd_2(a).unwrap());
            assert_eq!(lhs, E_2_odd(a).unwrap(), "a = {a}");
        }
    }

    #[test]
    fn sigma_even_3_examples() {
        let s43 = sigma_even_3(3).unwrap();
        assert_eq!(s43, c(int(120), l(7)) - c(int(72), &z(2) * &l(5)));
        assert_eq!(s43, c(int(120), l(7)) - c(int(96), &l(2) * &l(5)));
        assert_eq!(s43, sigma_special(4, 3).unwrap());
        assert_eq!(
            sigma_even_3(4).unwrap(),
            c(int(896), l(9)) - c(int(528), &z(2) * &l(7)) - c(int(24), &z(4) * &l(5))
        );
        assert!(sigma_even_3(2).is_err());
        assert_eq!(sigma_even_3_unchecked(2), c(int(12), l(5)) - c(int(7), &z(2) * &l(3)));
    }

    #[test]
    fn sigma_special_examples() {
        let s22 = sigma_special(2, 2).unwrap();
        let s31 = sigma_special(3, 1).unwrap();
        assert_eq!(&s31 + &s22, c(int(3), l(4)));
        assert_eq!(&s31 + &s22, c(rat(45, 16), z(4)));
        assert_eq!(&s31 + &s22, c(rat(1, 32), pi(4)));
        assert_eq!(sigma_special(3, 2).unwrap(), sigma_odd_2(2).unwrap());
        assert!(sigma_special(5, 5).is_err());
    }

    #[test]
    fn small_relations() {
        assert_eq!(sigma33_plus_3sigma24(), c(int(15), l(6)) - c(int(8), &l(3) * &l(3)));
        assert_eq!(sigma33_plus_3sigma24().homogeneous_weight(), Some(6));
        assert_eq!(sigma_sum_rhs(3).unwrap(), c(int(2), l(3)));
        assert_eq!(sigma_sum_rhs(4).unwrap(), c(rat(45, 16), z(4)));
        assert_eq!(sigma_sum_rhs(7).unwrap(), c(int(6), l(7)));
        assert!(sigma_sum_rhs(2).is_err());
        // weighted sum at a = 2 is sigma(3,2) + 2 sigma(2,3)
        let w2 = sigma_odd_2(2).unwrap() + c(int(2), sigma_2_odd(2).unwrap());
        assert_eq!(weighted_sigma_sum(2).unwrap(), w2);
        // at a = 3: sigma(5,2) + 2 sigma(4,3) + 4 sigma(3,4) + 8 sigma(2,5)
        let w3 = sigma_odd_2(3).unwrap()
            + c(int(2), sigma_special(4, 3).unwrap())
            + c(int(4), sigma_special(3, 4).unwrap())
            + c(int(8), sigma_2_odd(3).unwrap());
        assert_eq!(weighted_sigma_sum(3).unwrap(), w3);
    }

    #[test]
    fn weights_up_to_13() {
        let mut count = 0;
        for id in SumId::enumerate(13) {
            if let Some(e) = closed_form(id).unwrap() {
                assert_eq!(e.homogeneous_weight(), Some(id.weight()), "{id}");
                count += 1;
            }
        }
        assert!(count > 60);
        for a in 2..=6 {
            assert_eq!(weighted_sigma_sum(a).unwrap().homogeneous_weight(), Some(2 * a as u32 + 1));
        }
    }

    #[test]
    fn sum_id_round_trip_and_validation() {
        for id in SumId::enumerate(8) {
            assert_eq!(id.to_string().parse::<SumId>().unwrap(), id);
            assert!(id.validate().is_ok());
        }
        assert!(SumId::J(1).validate().is_err());
        assert!(SumId::Sigma(1, 3).validate().is_err());
        assert!(SumId::Sigma(3, 0).validate().is_err());
        assert!(closed_form(SumId::Z(0)).is_err());
        assert_eq!(closed_form(SumId::J(5)).unwrap(), None);
        assert_eq!(closed_form(SumId::Sigma(3, 3)).unwrap(), None);
        assert_eq!("SIGMA(3,2)".parse::<SumId>().unwrap(), SumId::Sigma(3, 2));
    }
}
