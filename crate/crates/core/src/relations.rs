//! Linear relations among the `sigma(s,t)` sums of one weight, an exact
//! solver for them, and the check of the sigma-sum theorem
//! `sum_{i=1}^{w-2} sigma(w-i, i) = (w-1) lambda(w)`.
//!
//! Every relation is stored as `sum coeff * sigma = rhs` with all `h_q` and
//! `ln 2` terms already folded into the right-hand side, so solving is plain
//! linear algebra over [`SymExpr`]-valued vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::closedform::{self, ClosedFormError, SumId};
use crate::exact::{binomial, int, pow2, BigRational};
use crate::numerics::{bound_string, eval_sym_ball, BigReal, PrecisionContext};
use crate::oracle::{oracle_eval, OracleConfig, OracleError};
use crate::symexpr::{lambda_sym, SymExpr};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelationError {
    #[error("{op}: parameters {params} out of range ({requirement})")]
    OutOfRange { op: &'static str, params: String, requirement: &'static str },
    #[error("relation mixes weights {0} and {1}")]
    MixedWeight(u32, u32),
    #[error("{0} is not a sigma sum")]
    NotSigma(SumId),
    #[error("right-hand side is not homogeneous of weight {0}")]
    RhsWeight(u32),
    #[error("relation has no sigma terms but a nonzero right-hand side: 0 = {0}")]
    Contradiction(String),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn out_of_range(op: &'static str, params: String, requirement: &'static str) -> RelationError {
    RelationError::OutOfRange { op, params, requirement }
}

/// `sum coeff * sigma(s,t) = rhs` over sums of one weight.
///
/// When every coefficient cancels the relation is kept as a tautology, which
/// is only allowed with a zero right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    weight: u32,
    coefficients: BTreeMap<SumId, BigRational>,
    rhs: SymExpr,
}

impl Relation {
    pub fn new(
        weight: u32,
        terms: impl IntoIterator<Item = (SumId, BigRational)>,
        rhs: SymExpr,
    ) -> Result<Relation, RelationError> {
        let mut coefficients: BTreeMap<SumId, BigRational> = BTreeMap::new();
        for (id, c) in terms {
            let SumId::Sigma(s, t) = id else {
                return Err(RelationError::NotSigma(id));
            };
            if s + t != weight {
                return Err(RelationError::MixedWeight(weight, s + t));
            }
            *coefficients.entry(id).or_insert_with(BigRational::zero) += c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        if !rhs.has_weight(weight) {
            return Err(RelationError::RhsWeight(weight));
        }
        if coefficients.is_empty() && !rhs.is_zero() {
            return Err(RelationError::Contradiction(rhs.canonical_string()));
        }
        Ok(Relation { weight, coefficients, rhs })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn coefficients(&self) -> &BTreeMap<SumId, BigRational> {
        &self.coefficients
    }

    pub fn coefficient(&self, id: SumId) -> BigRational {
        self.coefficients.get(&id).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn rhs(&self) -> &SymExpr {
        &self.rhs
    }

    /// `0 = 0` after folding.
    pub fn is_tautology(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn scale(&self, q: &BigRational) -> Relation {
        assert!(!q.is_zero(), "scaling a relation by zero");
        Relation {
            weight: self.weight,
            coefficients: self.coefficients.iter().map(|(id, c)| (*id, c * q)).collect(),
            rhs: self.rhs.scale(q),
        }
    }

    /// Exact `lhs - rhs` with every sum replaced by its value, or `None`
    /// when some sum has no value.
    pub fn residual_sym(&self, values: &BTreeMap<SumId, SymExpr>) -> Option<SymExpr> {
        let mut acc = -self.rhs.clone();
        for (id, c) in &self.coefficients {
            acc = acc + values.get(id)?.scale(c);
        }
        Some(acc)
    }

    /// Enclosure of `lhs - rhs` with numeric values for the sums.
    pub fn residual_num(&self, values: &BTreeMap<SumId, BigReal>, ctx: &PrecisionContext) -> Option<BigReal> {
        let mut acc = eval_sym_ball(&self.rhs, ctx).neg();
        for (id, c) in &self.coefficients {
            acc = acc.add(&values.get(id)?.mul_rational(c));
        }
        Some(acc)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            write!(f, "0")?;
        }
        for (k, (id, c)) in self.coefficients.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            match (k, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if mag.is_one() {
                write!(f, "{id}")?;
            } else {
                write!(f, "{mag}*{id}")?;
            }
        }
        write!(f, " = {}", self.rhs.canonical_string())
    }
}

fn sigma(s: i64, t: i64) -> SumId {
    SumId::Sigma(s as u32, t as u32)
}

fn lam(s: i64) -> SymExpr {
    lambda_sym(s).expect("lambda argument >= 2")
}

fn lam2(a: i64, b: i64) -> SymExpr {
    &lam(a) * &lam(b)
}

fn sign(j: i64) -> BigRational {
    if j % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn binom(n: i64, k: i64) -> BigRational {
    binomial(n as u64, k)
}

/// `h_q = sum_{p>=1} H_p / (2p+1)^q` in closed form, `q >= 2`.
fn h_sum(q: i64) -> Result<SymExpr, RelationError> {
    closedform::closed_form(SumId::HOverOdd(q as u32))?
        .ok_or_else(|| out_of_range("h_sum", q.to_string(), "q >= 2"))
}

/// `lambda(k) lambda(l) = 2^-w sum_i 2^i [C(w-i-1, l-1) + C(w-i-1, k-1)] sigma(w-i, i)`.
pub fn gen_product_relation(k: i64, l: i64) -> Result<Relation, RelationError> {
    if k < 2 || l < 2 {
        return Err(out_of_range("gen_product_relation", format!("({k},{l})"), "k, l >= 2"));
    }
    let w = k + l;
    let terms = (1..=w - 2).map(|i| {
        let c = pow2(i - w) * (binom(w - i - 1, l - 1) + binom(w - i - 1, k - 1));
        (sigma(w - i, i), c)
    });
    Relation::new(w as u32, terms, lam2(k, l))
}

/// The same product relation before the binomial ranges are merged:
/// `lambda(k) lambda(l) = 2^-l sum_{i<k} 2^-i C(l+i-1, i) sigma(l+i, k-i)
/// + 2^-k sum_{j<l} 2^-j C(k+j-1, j) sigma(k+j, l-j)`.
pub fn gen_product_relation_unmerged(k: i64, l: i64) -> Result<Relation, RelationError> {
    if k < 2 || l < 2 {
        return Err(out_of_range("gen_product_relation_unmerged", format!("({k},{l})"), "k, l >= 2"));
    }
    let first = (0..k).map(|i| (sigma(l + i, k - i), pow2(-l - i) * binom(l + i - 1, i)));
    let second = (0..l).map(|j| (sigma(k + j, l - j), pow2(-k - j) * binom(k + j - 1, j)));
    Relation::new((k + l) as u32, first.chain(second), lam2(k, l))
}

/// General relation from splitting `1/((m+p)^s (2m-1)^t)` in partial
/// fractions, with `h_(s+t-1)` and `ln 2` folded into the right-hand side.
pub fn gen_split_relation(s: i64, t: i64) -> Result<Relation, RelationError> {
    if s < 2 || t < 1 {
        return Err(out_of_range("gen_split_relation", format!("({s},{t})"), "s >= 2, t >= 1"));
    }
    let w = s + t;
    // (-1)^t sigma(s,t) - sum_{i=0}^{s-2} 2^i C(t+i-1, i) sigma(s-i, t+i) = rhs
    let mut terms = vec![(sigma(s, t), sign(t))];
    terms.extend((0..=s - 2).map(|i| (sigma(s - i, t + i), -(pow2(i) * binom(t + i - 1, i)))));
    let products: SymExpr = (0..=t - 2)
        .map(|j| lam2(s + j, t - j).scale(&(sign(j) * binom(s + j - 1, j))))
        .sum();
    let c = binom(s + t - 2, s - 1);
    let rhs = products.scale(&(sign(t) * pow2(s)))
        - h_sum(w - 1)?.scale(&(pow2(s - 1) * &c))
        - (&lam(w - 1) * &SymExpr::ln2()).scale(&(pow2(s) * &c));
    Relation::new(w as u32, terms, rhs)
}

/// The even-`t = 2r` case, where the `sigma(s, 2r)` terms cancel.
pub fn gen_even_split_relation(s: i64, r: i64) -> Result<Relation, RelationError> {
    if s < 2 || r < 1 {
        return Err(out_of_range("gen_even_split_relation", format!("({s},{r})"), "s >= 2, r >= 1"));
    }
    let w = s + 2 * r;
    let terms = (1..=s - 2).map(|i| (sigma(s - i, 2 * r + i), pow2(i - 1) * binom(2 * r + i - 1, i)));
    let products: SymExpr = (0..=2 * r - 2)
        .map(|j| lam2(s + j, 2 * r - j).scale(&(sign(j) * binom(s + j - 1, j))))
        .sum();
    let c = binom(s + 2 * r - 2, s - 1);
    let rhs = products.scale(&-pow2(s - 1))
        + h_sum(w - 1)?.scale(&(pow2(s - 2) * &c))
        + (&lam(w - 1) * &SymExpr::ln2()).scale(&(pow2(s - 1) * &c));
    Relation::new(w as u32, terms, rhs)
}

/// The even-`t` relation at `s = 2v` (variant 1) or `s = 2v+1` (variant 2),
/// written directly in lambda values with no `ln 2` left.
pub fn gen_lambda_relation(variant: u8, v: i64, r: i64) -> Result<Relation, RelationError> {
    if !(variant == 1 || variant == 2) || v < 1 || r < 1 {
        return Err(out_of_range(
            "gen_lambda_relation",
            format!("({variant},{v},{r})"),
            "variant in {1,2}, v >= 1, r >= 1",
        ));
    }
    let a = v + r;
    let (s, w) = if variant == 1 { (2 * v, 2 * a) } else { (2 * v + 1, 2 * a + 1) };
    let terms = (1..=s - 2).map(|i| (sigma(s - i, 2 * r + i), pow2(i - 1) * binom(2 * r + i - 1, i)));
    let products: SymExpr = (0..=2 * r - 2)
        .map(|j| lam2(s + j, 2 * r - j).scale(&(sign(j) * binom(s + j - 1, j))))
        .sum();
    let rhs = if variant == 1 {
        let c = binom(2 * a - 2, 2 * v - 1);
        let odd: SymExpr = (1..=a - 2).map(|j| lam2(2 * j + 1, 2 * a - 2 * j - 1)).sum();
        lam(2 * a).scale(&(pow2(2 * v - 3) * &c * int(2 * a - 1)))
            - products.scale(&pow2(2 * v - 1))
            - odd.scale(&(pow2(2 * v - 2) * &c))
    } else {
        let c = binom(2 * a - 1, 2 * v);
        let even: SymExpr = (1..=a - 1).map(|j| lam2(2 * j, 2 * a - 2 * j + 1)).sum();
        lam(2 * a + 1).scale(&(pow2(2 * v) * &c * int(a)))
            - products.scale(&pow2(2 * v))
            - even.scale(&(pow2(2 * v) * &c))
    };
    Relation::new(w as u32, terms, rhs)
}

/// Which generator produced a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Product(i64, i64),
    Split(i64, i64),
    EvenSplit(i64, i64),
    Lambda(u8, i64, i64),
}

impl Generator {
    pub fn relation(self) -> Result<Relation, RelationError> {
        match self {
            Generator::Product(k, l) => gen_product_relation(k, l),
            Generator::Split(s, t) => gen_split_relation(s, t),
            Generator::EvenSplit(s, r) => gen_even_split_relation(s, r),
            Generator::Lambda(variant, v, r) => gen_lambda_relation(variant, v, r),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Product(k, l) => write!(f, "product({k},{l})"),
            Generator::Split(s, t) => write!(f, "split({s},{t})"),
            Generator::EvenSplit(s, r) => write!(f, "even_split({s},{r})"),
            Generator::Lambda(variant, v, r) => write!(f, "lambda{variant}({v},{r})"),
        }
    }
}

/// Product relations of weight `w`, one per unordered pair `k <= l`.
pub fn product_generators(w: i64) -> Vec<Generator> {
    (2..=w / 2).map(|k| Generator::Product(k, w - k)).collect()
}

/// Every generator instance of weight `w`, across all families.
pub fn all_generators(w: i64) -> Vec<Generator> {
    let mut out = product_generators(w);
    out.extend((2..w).map(|s| Generator::Split(s, w - s)));
    out.extend((2..w).filter(|s| (w - s) % 2 == 0).map(|s| Generator::EvenSplit(s, (w - s) / 2)));
    for r in 1..w {
        for v in 1..w {
            if 2 * v + 2 * r == w {
                out.push(Generator::Lambda(1, v, r));
            }
            if 2 * v + 2 * r + 1 == w {
                out.push(Generator::Lambda(2, v, r));
            }
        }
    }
    out
}

/// The unknowns `x_i = sigma(w-i, i)`, `i = 1..w-2`.
pub fn sigma_ids(w: u32) -> Vec<SumId> {
    (1..=w.saturating_sub(2)).map(|i| SumId::Sigma(w - i, i)).collect()
}

/// Source of a closed form injected into the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provider {
    /// `sigma(w-1, 1) = J(w-1)` for even `w-1`.
    JordanEven,
    /// `sigma(3,1) = J(3)`.
    JordanJ3,
    /// `sigma(2, w-2)` for odd `w`.
    Sigma2Odd,
    /// `sigma(w-2, 2)` for odd `w`.
    SigmaOdd2,
    /// `sigma(w-3, 3)` for even `w-3 >= 4`.
    SigmaEven3,
}

impl Provider {
    pub const DEFAULT: [Provider; 4] =
        [Provider::JordanEven, Provider::JordanJ3, Provider::Sigma2Odd, Provider::SigmaOdd2];

    pub const ALL: [Provider; 5] = [
        Provider::JordanEven,
        Provider::JordanJ3,
        Provider::Sigma2Odd,
        Provider::SigmaOdd2,
        Provider::SigmaEven3,
    ];

    /// The sum this provider fixes at weight `w`, with its value.
    pub fn provide(self, w: u32) -> Option<(SumId, SymExpr)> {
        let w = w as i64;
        let (id, value) = match self {
            Provider::JordanEven if w >= 3 && (w - 1) % 2 == 0 => {
                (sigma(w - 1, 1), closedform::jordan_even((w - 1) / 2).ok()?)
            }
            Provider::JordanJ3 if w == 4 => (sigma(3, 1), closedform::jordan_j3()),
            Provider::Sigma2Odd if w >= 5 && w % 2 == 1 => (sigma(2, w - 2), closedform::sigma_2_odd((w - 1) / 2).ok()?),
            Provider::SigmaOdd2 if w >= 5 && w % 2 == 1 => (sigma(w - 2, 2), closedform::sigma_odd_2((w - 1) / 2).ok()?),
            Provider::SigmaEven3 if w >= 7 && w % 2 == 1 => (sigma(w - 3, 3), closedform::sigma_even_3((w - 1) / 2).ok()?),
            _ => return None,
        };
        Some((id, value))
    }
}

/// A provided value that the system also determines on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub id: SumId,
    pub derived: SymExpr,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub weight: u32,
    pub relations: Vec<(Generator, Relation)>,
    /// Provided and derived values; provided ones take precedence.
    pub solved: BTreeMap<SumId, SymExpr>,
    pub provided: Vec<SumId>,
    pub unresolved: Vec<SumId>,
    /// Rank of the system left after substituting provided values.
    pub rank: usize,
    /// Relations that reduced to `0 = nonzero`.
    pub inconsistent: Vec<usize>,
    pub cross_checks: Vec<CrossCheck>,
    /// `(relation index, |lhs - rhs|, bound)` with oracle values.
    pub residual_checks: Vec<(usize, f64, BigRational)>,
}

impl SolveReport {
    /// Exact residual of every relation whose sums are all solved.
    pub fn resubstitution(&self) -> Vec<(usize, SymExpr)> {
        self.relations
            .iter()
            .enumerate()
            .filter_map(|(k, (_, rel))| rel.residual_sym(&self.solved).map(|r| (k, r)))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let solved: serde_json::Map<String, serde_json::Value> = self
            .solved
            .iter()
            .map(|(id, e)| (id.to_string(), serde_json::to_value(e).expect("symexpr serializes")))
            .collect();
        json!({
            "weight": self.weight,
            "relations": self.relations.iter().map(|(g, r)| json!({
                "generator": g.to_string(),
                "relation": r.to_string(),
            })).collect::<Vec<_>>(),
            "solved": solved,
            "provided": self.provided.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "unresolved": self.unresolved.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "rank": self.rank,
            "inconsistent": self.inconsistent,
            "cross_checks": self.cross_checks.iter().map(|c| json!({
                "id": c.id.to_string(),
                "derived": c.derived,
                "agrees": c.agrees,
            })).collect::<Vec<_>>(),
            "residual_checks": self.residual_checks.iter().map(|(k, r, b)| json!({
                "relation": k,
                "residual": format!("{r:e}"),
                "bound": bound_string(b, 3),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub providers: Vec<Provider>,
    /// Add the split and lambda families to the product relations.
    pub all_families: bool,
    /// Oracle settings for the residual checks; `None` skips them.
    pub residuals: Option<(PrecisionContext, OracleConfig)>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { providers: Provider::DEFAULT.to_vec(), all_families: false, residuals: None }
    }
}

/// Reduced row echelon form of `rows` over the columns `unknowns`.
struct Elimination {
    rows: Vec<(Vec<BigRational>, SymExpr)>,
    pivots: Vec<usize>,
    /// Indices of input rows that became `0 = nonzero`.
    inconsistent: Vec<usize>,
}

fn eliminate(rows: Vec<(Vec<BigRational>, SymExpr)>) -> Elimination {
    let ncols = rows.first().map_or(0, |r| r.0.len());
    let mut tagged: Vec<(usize, Vec<BigRational>, SymExpr)> =
        rows.into_iter().enumerate().map(|(k, (c, e))| (k, c, e)).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..tagged.len()).find(|&r| !tagged[r].1[col].is_zero()) else {
            continue;
        };
        tagged.swap(rank, p);
        let inv = tagged[rank].1[col].recip();
        let (_, pc, pe) = &mut tagged[rank];
        pc.iter_mut().for_each(|c| *c *= &inv);
        *pe = pe.scale(&inv);
        let (pc, pe) = (tagged[rank].1.clone(), tagged[rank].2.clone());
        for (r, (_, rc, re)) in tagged.iter_mut().enumerate() {
            if r == rank || rc[col].is_zero() {
                continue;
            }
            let f = rc[col].clone();
            for (x, y) in rc.iter_mut().zip(&pc) {
                *x -= &f * y;
            }
            *re = &*re - &pe.scale(&f);
        }
        pivots.push(col);
        rank += 1;
    }
    let inconsistent = tagged[rank..].iter().filter(|(_, _, e)| !e.is_zero()).map(|(k, _, _)| *k).collect();
    Elimination { rows: tagged.into_iter().map(|(_, c, e)| (c, e)).collect(), pivots, inconsistent }
}

/// Rows over `unknowns` with the `known` values moved to the right.
fn reduce_rows(
    relations: &[(Generator, Relation)],
    unknowns: &[SumId],
    known: &BTreeMap<SumId, SymExpr>,
) -> Vec<(Vec<BigRational>, SymExpr)> {
    relations
        .iter()
        .map(|(_, rel)| {
            let mut rhs = rel.rhs().clone();
            for (id, c) in rel.coefficients() {
                if let Some(v) = known.get(id) {
                    rhs = rhs - v.scale(c);
                }
            }
            (unknowns.iter().map(|id| rel.coefficient(*id)).collect(), rhs)
        })
        .collect()
}

/// Unknowns pinned to a single value by the reduced system.
fn determined(e: &Elimination, unknowns: &[SumId]) -> BTreeMap<SumId, SymExpr> {
    let mut out = BTreeMap::new();
    for (row, &col) in e.rows.iter().zip(&e.pivots) {
        if row.0.iter().enumerate().all(|(j, c)| j == col || c.is_zero()) {
            out.insert(unknowns[col], row.1.clone());
        }
    }
    out
}

fn generators_for(w: u32, all_families: bool) -> Vec<Generator> {
    if all_families {
        all_generators(w as i64)
    } else {
        product_generators(w as i64)
    }
}

fn build_relations(w: u32, all_families: bool) -> Result<Vec<(Generator, Relation)>, RelationError> {
    generators_for(w, all_families).into_iter().map(|g| Ok((g, g.relation()?))).collect()
}

/// Oracle values of every `sigma(w-i, i)`, evaluated in parallel.
pub fn oracle_sigmas(
    w: u32,
    ctx: &PrecisionContext,
    cfg: &OracleConfig,
) -> Result<BTreeMap<SumId, BigReal>, OracleError> {
    sigma_ids(w).into_par_iter().map(|id| Ok((id, oracle_eval(id, cfg, ctx)?.value))).collect()
}

/// Solve the weight-`w` system for as many `sigma(w-i, i)` as it determines.
pub fn solve_weight(w: u32, opts: &SolveOptions) -> Result<SolveReport, RelationError> {
    if w < 3 {
        return Err(out_of_range("solve_weight", w.to_string(), "w >= 3"));
    }
    let relations = build_relations(w, opts.all_families)?;
    let ids = sigma_ids(w);
    let known: BTreeMap<SumId, SymExpr> = opts.providers.iter().filter_map(|p| p.provide(w)).collect();
    let unknowns: Vec<SumId> = ids.iter().copied().filter(|id| !known.contains_key(id)).collect();

    let elim = eliminate(reduce_rows(&relations, &unknowns, &known));
    let mut solved = known.clone();
    solved.extend(determined(&elim, &unknowns));
    let unresolved = ids.iter().copied().filter(|id| !solved.contains_key(id)).collect();

    // each provided value, derived again from everything else
    let mut cross_checks = Vec::new();
    for (id, value) in &known {
        let mut others = known.clone();
        others.remove(id);
        let cols: Vec<SumId> = ids.iter().copied().filter(|x| !others.contains_key(x)).collect();
        let e = eliminate(reduce_rows(&relations, &cols, &others));
        if let Some(derived) = determined(&e, &cols).remove(id) {
            let agrees = &derived == value;
            cross_checks.push(CrossCheck { id: *id, derived, agrees });
        }
    }

    let residual_checks = match &opts.residuals {
        Some((ctx, cfg)) => {
            let values = oracle_sigmas(w, ctx, cfg)?;
            relations
                .iter()
                .enumerate()
                .filter_map(|(k, (_, rel))| {
                    let r = rel.residual_num(&values, ctx)?;
                    Some((k, r.to_f64().abs(), r.bound()))
                })
                .collect()
        }
        None => Vec::new(),
    };

    Ok(SolveReport {
        weight: w,
        solved,
        provided: known.keys().copied().collect(),
        unresolved,
        rank: elim.pivots.len(),
        inconsistent: elim.inconsistent,
        cross_checks,
        residual_checks,
        relations,
    })
}

/// How the symbolic half of the sum theorem was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumPath {
    /// Every sigma of the weight has a closed form; their sum was compared.
    AllSolved,
    /// The all-ones row lies in the span of the relations; its combined
    /// right-hand side was compared.
    RowSpace,
    /// Neither applies; only the numeric residual is available.
    NumericOnly,
}

impl SumPath {
    pub fn as_str(self) -> &'static str {
        match self {
            SumPath::AllSolved => "all_solved",
            SumPath::RowSpace => "row_space",
            SumPath::NumericOnly => "numeric_only",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumTheoremReport {
    pub weight: u32,
    /// `|sum of oracle values - (w-1) lambda(w)|`.
    pub numeric_residual: f64,
    /// Certified bound on the enclosure behind `numeric_residual`.
    pub bound: BigRational,
    pub symbolic_ok: Option<bool>,
    pub path: SumPath,
}

/// Symbolic check of the sum theorem at weight `w`.
pub fn sum_theorem_symbolic(w: u32) -> Result<(Option<bool>, SumPath), RelationError> {
    let target = closedform::sigma_sum_rhs(w as i64)?;
    let ids = sigma_ids(w);
    let mut values: BTreeMap<SumId, SymExpr> = BTreeMap::new();
    for id in &ids {
        if let Some(v) = closedform::closed_form(*id)? {
            values.insert(*id, v);
        }
    }
    let report = solve_weight(w, &SolveOptions { providers: Provider::ALL.to_vec(), all_families: true, residuals: None })?;
    for (id, v) in &report.solved {
        values.entry(*id).or_insert_with(|| v.clone());
    }
    if ids.iter().all(|id| values.contains_key(id)) {
        let total: SymExpr = ids.iter().map(|id| values[id].clone()).sum();
        return Ok((Some(total == target), SumPath::AllSolved));
    }

    // reduce sum_i x_i = target by the relations, knowns moved right
    let unknowns: Vec<SumId> = ids.iter().copied().filter(|id| !values.contains_key(id)).collect();
    let rows = reduce_rows(&report.relations, &unknowns, &values);
    let elim = eliminate(rows);
    let mut coeffs = vec![BigRational::one(); unknowns.len()];
    let mut rhs = ids.iter().filter_map(|id| values.get(id)).fold(target, |acc, v| acc - v.clone());
    for (row, &col) in elim.rows.iter().zip(&elim.pivots) {
        let f = coeffs[col].clone();
        if f.is_zero() {
            continue;
        }
        for (x, y) in coeffs.iter_mut().zip(&row.0) {
            *x -= &f * y;
        }
        rhs = rhs - row.1.scale(&f);
    }
    if coeffs.iter().all(Zero::is_zero) {
        Ok((Some(rhs.is_zero() && elim.inconsistent.is_empty()), SumPath::RowSpace))
    } else {
        Ok((None, SumPath::NumericOnly))
    }
}

/// Numeric and, where possible, symbolic check of the sum theorem.
pub fn verify_sum_theorem(
    w: u32,
    ctx: &PrecisionContext,
    cfg: &OracleConfig,
) -> Result<SumTheoremReport, RelationError> {
    let target = closedform::sigma_sum_rhs(w as i64)?;
    let values = oracle_sigmas(w, ctx, cfg)?;
    let total = values.values().fold(BigReal::zero(ctx.working_bits()), |acc, v| acc.add(v));
    let diff = total.sub(&eval_sym_ball(&target, ctx));
    let (symbolic_ok, path) = sum_theorem_symbolic(w)?;
    Ok(SumTheoremReport {
        weight: w,
        numeric_residual: diff.mid().abs().to_f64().unwrap_or(f64::INFINITY),
        bound: diff.bound(),
        symbolic_ok,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{sigma_2_odd, sigma_special};
    use crate::exact::rat;
    use crate::symexpr::zeta_sym;
    use proptest::prelude::*;

    fn l(s: i64) -> SymExpr {
        lambda_sym(s).unwrap()
    }

    #[test]
    fn product_relation_weight_four() {
        let rel = gen_product_relation(2, 2).unwrap();
        // 4 lambda(2)^2 = 2 (sigma(2,2) + sigma(3,1)), i.e. the sum is pi^4/32
        let scaled = rel.scale(&int(2));
        assert_eq!(scaled.coefficient(SumId::Sigma(2, 2)), int(1));
        assert_eq!(scaled.coefficient(SumId::Sigma(3, 1)), int(1));
        assert_eq!(scaled.rhs(), &SymExpr::pi_pow(4).scale(&rat(1, 32)));
    }

    #[test]
    fn product_relation_is_symmetric() {
        for w in 4..=12 {
            for k in 2..=w - 2 {
                assert_eq!(gen_product_relation(k, w - k).unwrap(), gen_product_relation(w - k, k).unwrap());
            }
        }
    }

    #[test]
    fn merged_and_unmerged_product_forms_agree() {
        for w in 4..=12 {
            for k in 2..=w - 2 {
                assert_eq!(gen_product_relation(k, w - k).unwrap(), gen_product_relation_unmerged(k, w - k).unwrap(), "({k},{})", w - k);
            }
        }
    }

    #[test]
    fn weight_seven_product_system() {
        // with x_i = sigma(7-i, i): 6x3 + 8x4 + 5x1 + 5x2 + 8x5 = 32 lambda(2) lambda(5)
        let a = gen_product_relation(2, 5).unwrap().scale(&int(32));
        let coeffs: Vec<_> = (1..=5).map(|i| a.coefficient(SumId::Sigma(7 - i, i))).collect();
        assert_eq!(coeffs, [int(5), int(5), int(6), int(8), int(8)]);
        assert_eq!(a.rhs(), &(&l(2) * &l(5)).scale(&int(32)));
        // 4x3 + 2x4 + 5x1 + 5x2 = 16 lambda(3) lambda(4)
        let b = gen_product_relation(3, 4).unwrap().scale(&int(16));
        let coeffs: Vec<_> = (1..=5).map(|i| b.coefficient(SumId::Sigma(7 - i, i))).collect();
        assert_eq!(coeffs, [int(5), int(5), int(4), int(2), int(0)]);
        assert_eq!(b.rhs(), &(&l(3) * &l(4)).scale(&int(16)));
    }

    #[test]
    fn split_relation_low_weights() {
        // sigma(2,1) = h_2 + 2 lambda(2) ln 2, folded to 2 lambda(3)
        let r = gen_split_relation(2, 1).unwrap();
        let x = r.rhs().scale(&r.coefficient(SumId::Sigma(2, 1)).recip());
        assert_eq!(x, l(3).scale(&int(2)));
        // sigma(3,1) + sigma(2,2) = 3 lambda(4)
        let r = gen_split_relation(3, 1).unwrap();
        let r = r.scale(&r.coefficient(SumId::Sigma(3, 1)).recip());
        assert_eq!(r.coefficient(SumId::Sigma(2, 2)), int(1));
        assert_eq!(r.rhs(), &l(4).scale(&int(3)));
    }

    #[test]
    fn split_relation_gives_sigma_2_odd() {
        for a in 2..=5 {
            let r = gen_split_relation(2, 2 * a - 1).unwrap();
            assert_eq!(r.coefficients().len(), 1);
            let x = r.rhs().scale(&r.coefficient(SumId::Sigma(2, 2 * a as u32 - 1)).recip());
            assert_eq!(x, sigma_2_odd(a).unwrap(), "a={a}");
        }
    }

    #[test]
    fn even_split_is_half_the_general_relation() {
        for s in 2..=8 {
            for r in 1..=3 {
                let direct = gen_even_split_relation(s, r).unwrap();
                let general = gen_split_relation(s, 2 * r).unwrap().scale(&rat(-1, 2));
                assert_eq!(direct, general, "s={s} r={r}");
            }
        }
    }

    #[test]
    fn even_split_tautology_and_sigma33_plus_3sigma24() {
        assert!(gen_even_split_relation(2, 1).unwrap().is_tautology());
        let r = gen_even_split_relation(4, 1).unwrap();
        assert_eq!(r.coefficient(SumId::Sigma(3, 3)), int(2));
        assert_eq!(r.coefficient(SumId::Sigma(2, 4)), int(6));
        assert_eq!(r.rhs(), &closedform::sigma33_plus_3sigma24().scale(&int(2)));
        // the general relation at (3,3) and (4,2) says the same
        for (s, t) in [(3, 3), (4, 2)] {
            let g = gen_split_relation(s, t).unwrap();
            let g = g.scale(&g.coefficient(SumId::Sigma(3, 3)).recip());
            assert_eq!(g.rhs(), &closedform::sigma33_plus_3sigma24(), "({s},{t})");
        }
    }

    #[test]
    fn lambda_forms_match_folded_even_split() {
        for v in 1..=4 {
            for r in 1..=3 {
                assert_eq!(gen_lambda_relation(1, v, r).unwrap(), gen_even_split_relation(2 * v, r).unwrap(), "v={v} r={r}");
                assert_eq!(gen_lambda_relation(2, v, r).unwrap(), gen_even_split_relation(2 * v + 1, r).unwrap(), "v={v} r={r}");
            }
        }
        assert!(gen_lambda_relation(1, 1, 1).unwrap().is_tautology());
        let r = gen_lambda_relation(2, 1, 1).unwrap();
        assert_eq!(r.coefficients().keys().copied().collect::<Vec<_>>(), [SumId::Sigma(2, 3)]);
    }

    #[test]
    fn generator_domains() {
        assert!(gen_product_relation(1, 4).is_err());
        assert!(gen_split_relation(1, 3).is_err());
        assert!(gen_split_relation(2, 0).is_err());
        assert!(gen_even_split_relation(3, 0).is_err());
        assert!(gen_lambda_relation(3, 1, 1).is_err());
        assert!(gen_lambda_relation(1, 0, 1).is_err());
    }

    #[test]
    fn relation_rejects_bad_input() {
        let z3 = zeta_sym(3).unwrap();
        assert!(matches!(
            Relation::new(5, [(SumId::Sigma(3, 2), int(1)), (SumId::Sigma(3, 3), int(1))], SymExpr::zero()),
            Err(RelationError::MixedWeight(5, 6))
        ));
        assert!(matches!(Relation::new(4, [(SumId::J(4), int(1))], SymExpr::zero()), Err(RelationError::NotSigma(_))));
        assert!(matches!(Relation::new(4, [(SumId::Sigma(3, 1), int(1))], z3.clone()), Err(RelationError::RhsWeight(4))));
        assert!(matches!(
            Relation::new(3, [(SumId::Sigma(2, 1), int(1)), (SumId::Sigma(2, 1), int(-1))], z3),
            Err(RelationError::Contradiction(_))
        ));
    }

    #[test]
    fn every_generator_is_weight_consistent() {
        for w in 3..=12 {
            for g in all_generators(w) {
                let rel = g.relation().unwrap();
                assert_eq!(rel.weight(), w as u32);
                assert!(rel.rhs().has_weight(w as u32), "{g}");
                assert!(rel.coefficients().keys().all(|id| matches!(id, SumId::Sigma(s, t) if s + t == w as u32)));
            }
        }
    }

    #[test]
    fn solve_weight_seven() {
        let rep = solve_weight(7, &SolveOptions::default()).unwrap();
        assert_eq!(rep.solved[&SumId::Sigma(4, 3)], sigma_special(4, 3).unwrap());
        assert_eq!(rep.solved[&SumId::Sigma(3, 4)], sigma_special(3, 4).unwrap());
        assert!(rep.unresolved.is_empty());
        assert_eq!(rep.rank, 2);
        assert!(rep.inconsistent.is_empty());
        assert!(rep.resubstitution().iter().all(|(_, r)| r.is_zero()));
    }

    #[test]
    fn solve_weight_seven_with_every_source() {
        let opts = SolveOptions { providers: Provider::ALL.to_vec(), all_families: true, residuals: None };
        let rep = solve_weight(7, &opts).unwrap();
        assert!(rep.inconsistent.is_empty());
        assert!(rep.provided.contains(&SumId::Sigma(4, 3)));
        assert_eq!(rep.solved[&SumId::Sigma(3, 4)], sigma_special(3, 4).unwrap());
        assert!(!rep.cross_checks.is_empty());
        assert!(rep.cross_checks.iter().all(|c| c.agrees), "{:?}", rep.cross_checks);
    }

    #[test]
    fn solve_weight_four() {
        let rep = solve_weight(4, &SolveOptions::default()).unwrap();
        assert_eq!(rep.provided, [SumId::Sigma(3, 1)]);
        assert_eq!(rep.solved[&SumId::Sigma(2, 2)], sigma_special(2, 2).unwrap());
    }

    #[test]
    fn solve_weight_nine_reports_rank() {
        let rep = solve_weight(9, &SolveOptions::default()).unwrap();
        assert_eq!(rep.relations.len(), 3);
        assert!(rep.rank <= rep.relations.len());
        let mut covered: Vec<SumId> = rep.unresolved.clone();
        covered.extend(rep.solved.keys().copied());
        covered.sort();
        let mut ids = sigma_ids(9);
        ids.sort();
        assert_eq!(covered, ids);
        assert!(rep.inconsistent.is_empty());
    }

    #[test]
    fn sum_theorem_symbolic_low_weights() {
        for w in 3..=7 {
            let (ok, path) = sum_theorem_symbolic(w).unwrap();
            assert_eq!(ok, Some(true), "w={w} via {}", path.as_str());
        }
    }

    #[test]
    fn solve_report_json_shape() {
        let rep = solve_weight(7, &SolveOptions::default()).unwrap();
        let v = rep.to_json();
        assert_eq!(v["weight"], 7);
        assert_eq!(v["rank"], 2);
        assert!(v["solved"]["sigma(4,3)"].is_array());
    }

    #[test]
    fn display_of_relation() {
        let r = gen_product_relation(2, 2).unwrap();
        assert_eq!(r.to_string(), "1/2*sigma(2,2) + 1/2*sigma(3,1) = 1/64*pi^4");
        let t = gen_even_split_relation(2, 1).unwrap();
        assert_eq!(t.to_string(), "0 = 0");
    }

    proptest! {
        #[test]
        fn scaling_preserves_solutions(k in 2i64..6, l in 2i64..6, num in 1i64..20, den in 1i64..20) {
            let rel = gen_product_relation(k, l).unwrap();
            let q = rat(num, den);
            let scaled = rel.scale(&q);
            for (id, c) in rel.coefficients() {
                prop_assert_eq!(scaled.coefficient(*id), c * &q);
            }
            prop_assert_eq!(scaled.rhs(), &rel.rhs().scale(&q));
        }

        #[test]
        fn product_coefficients_are_positive(k in 2i64..8, l in 2i64..8) {
            let rel = gen_product_relation(k, l).unwrap();
            prop_assert!(rel.coefficients().values().all(|c| c.is_positive()));
        }
    }
}
