//! Multiplicities of line bundles and twisted spinor bundles in Frobenius
//! push-forwards.
//!
//! For `F^s_* O(a)` the multiplicity of `O(t)` is `dim C_{a-tq}` and that of
//! `S(t)` is `dim M_{a-(t-1)q} / 2^(floor(n/2)+1)`; for `F^s_* S(a)` the same
//! holds with `C̃` and `M̃`. Three routes produce these numbers:
//!
//! * [`Method::Oracle`] reads the dimensions from the linear-algebra oracle,
//! * [`Method::ClosedS1`] evaluates closed forms (first iterate only),
//! * [`Method::Recursion`] composes first-iterate tables, using
//!   `F^s_* = F_* F^{s-1}_*`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::combinatorics::{
    count_m_basis, dim_a_formula, dim_r, dim_z, dim_atilde_formula, dim_d_formula, hilbert_q, hilbert_s, pow2, spinor_module_size,
    window_m1_dim, window_mtilde1_dim,
};
use crate::error::{Error, Result};
use crate::gfp::is_prime;
use crate::oracle::{degree_cap, shared, ModuleId, Oracle};
use crate::quadric::{make_context, QuadricContext};

/// The bundle being pushed forward, and the summand types of the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bundle {
    /// The structure sheaf `O`.
    O,
    /// The spinor bundle `S`.
    S,
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bundle::O => "O",
            Bundle::S => "S",
        })
    }
}

impl FromStr for Bundle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "O" | "o" => Ok(Bundle::O),
            "S" | "s" => Ok(Bundle::S),
            _ => Err(Error::param("bundle", format!("expected O or S, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    ClosedS1,
    Recursion,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::ClosedS1 => "closed-s1",
            Method::Recursion => "recursion",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "oracle" => Ok(Method::Oracle),
            "closed-s1" | "closed" => Ok(Method::ClosedS1),
            "recursion" => Ok(Method::Recursion),
            _ => Err(Error::param("method", format!("unknown method `{s}`"))),
        }
    }
}

/// Decomposition of `F^s_* O(a)` or `F^s_* S(a)`. Only nonzero multiplicities
/// are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTable {
    pub n: u32,
    pub p: u64,
    pub s: u32,
    pub bundle: Bundle,
    pub a: i64,
    /// `t -> ` multiplicity of `O(t)`.
    pub line: BTreeMap<i64, BigUint>,
    /// `t -> ` multiplicity of `S(t)`.
    pub spinor: BTreeMap<i64, BigUint>,
    pub method: Method,
}

impl DecompositionTable {
    /// `F^0_*` as a table: the bundle itself.
    pub fn identity(n: u32, p: u64, bundle: Bundle, a: i64) -> Self {
        let one = BTreeMap::from([(a, BigUint::one())]);
        let (line, spinor) = match bundle {
            Bundle::O => (one, BTreeMap::new()),
            Bundle::S => (BTreeMap::new(), one),
        };
        DecompositionTable {
            n,
            p,
            s: 0,
            bundle,
            a,
            line,
            spinor,
            method: Method::Recursion,
        }
    }

    pub fn q(&self) -> BigUint {
        BigUint::from(self.p).pow(self.s)
    }

    pub fn line_mult(&self, t: i64) -> BigUint {
        self.line.get(&t).cloned().unwrap_or_default()
    }

    pub fn spinor_mult(&self, t: i64) -> BigUint {
        self.spinor.get(&t).cloned().unwrap_or_default()
    }

    pub fn line_support(&self) -> BTreeSet<i64> {
        self.line.keys().copied().collect()
    }

    pub fn spinor_support(&self) -> BTreeSet<i64> {
        self.spinor.keys().copied().collect()
    }

    /// Same multiplicities, regardless of which route produced them.
    pub fn same_multiplicities(&self, other: &DecompositionTable) -> bool {
        (self.n, self.p, self.s, self.bundle, self.a) == (other.n, other.p, other.s, other.bundle, other.a)
            && self.line == other.line
            && self.spinor == other.spinor
    }
}

fn insert_nonzero(map: &mut BTreeMap<i64, BigUint>, t: i64, v: BigUint) {
    if !v.is_zero() {
        *map.entry(t).or_default() += v;
    }
}

/// Converts a dimension count of `M` or `M̃` to a spinor multiplicity.
fn spinor_multiplicity(n: u32, dim_m: BigUint, what: &str, d: i64) -> Result<BigUint> {
    let m = BigUint::from(spinor_module_size(n));
    let (quot, rem) = Integer::div_rem(&dim_m, &m);
    if !rem.is_zero() {
        return Err(Error::Invariant(format!(
            "dim {what}_{d} = {dim_m} is not divisible by {m}"
        )));
    }
    Ok(quot)
}

fn to_biguint(v: BigInt, what: &str, d: i64) -> Result<BigUint> {
    v.to_biguint()
        .ok_or_else(|| Error::Invariant(format!("closed form gives negative dim {what}_{d} = {v}")))
}

/// Builds a table from `dim C` and `dim M` (tilde versions for `S`), both as
/// functions of the degree.
fn assemble(
    ctx: &QuadricContext,
    bundle: Bundle,
    a: i64,
    method: Method,
    mut dim_c: impl FnMut(i64) -> Result<BigUint>,
    mut dim_m: impl FnMut(i64) -> Result<BigUint>,
) -> Result<DecompositionTable> {
    let q = ctx.q as i64;
    let cap = degree_cap(ctx);
    let m_name = match bundle {
        Bundle::O => "M",
        Bundle::S => "M_TILDE",
    };
    let mut line = BTreeMap::new();
    let mut spinor = BTreeMap::new();
    // t with 0 <= a - tq <= cap
    let t_lo = ceil_div(a - cap, q);
    let t_hi = floor_div(a, q);
    for t in t_lo..=t_hi {
        insert_nonzero(&mut line, t, dim_c(a - t * q)?);
    }
    for t in t_lo + 1..=t_hi + 1 {
        let d = a - (t - 1) * q;
        let mult = spinor_multiplicity(ctx.n, dim_m(d)?, m_name, d)?;
        insert_nonzero(&mut spinor, t, mult);
    }
    Ok(DecompositionTable {
        n: ctx.n,
        p: ctx.p,
        s: ctx.s,
        bundle,
        a,
        line,
        spinor,
        method,
    })
}

/// Table for `F^s_* O(a)` or `F^s_* S(a)` using the process-wide oracle.
///
/// ```
/// use qfrob::decomposition::{coefficients, Bundle, Method};
/// use qfrob::quadric::make_context;
///
/// let ctx = make_context(3, 3, 1).unwrap();
/// let t = coefficients(&ctx, Bundle::O, 0, Method::Oracle).unwrap();
/// let line: Vec<(i64, u64)> = t.line.iter().map(|(k, v)| (*k, v.try_into().unwrap())).collect();
/// assert_eq!(line, [(-2, 1), (-1, 25), (0, 1)]);
/// assert!(t.spinor.is_empty());
/// ```
pub fn coefficients(ctx: &QuadricContext, bundle: Bundle, a: i64, method: Method) -> Result<DecompositionTable> {
    coefficients_with(shared(), ctx, bundle, a, method)
}

/// Table for `F^s_* O(a)` or `F^s_* S(a)`; `oracle` supplies every dimension
/// that is not available in closed form.
pub fn coefficients_with(
    oracle: &Oracle,
    ctx: &QuadricContext,
    bundle: Bundle,
    a: i64,
    method: Method,
) -> Result<DecompositionTable> {
    match method {
        Method::Oracle => oracle_table(oracle, ctx, bundle, a),
        Method::ClosedS1 => {
            if ctx.s != 1 {
                return Err(Error::Method {
                    method: method.as_str(),
                    reason: format!("closed forms cover s = 1 only, got s = {}", ctx.s),
                });
            }
            ClosedS1::new(oracle, ctx).table(bundle, a)
        }
        Method::Recursion => {
            if ctx.s < 2 {
                return Err(Error::Method {
                    method: method.as_str(),
                    reason: "recursion needs s >= 2".into(),
                });
            }
            recursion(oracle, ctx, bundle, a)
        }
    }
}

fn oracle_table(oracle: &Oracle, ctx: &QuadricContext, bundle: Bundle, a: i64) -> Result<DecompositionTable> {
    let (c_id, m_id) = match bundle {
        Bundle::O => (ModuleId::C, ModuleId::M),
        Bundle::S => (ModuleId::CTilde, ModuleId::MTilde),
    };
    let c = oracle.table(ctx, c_id)?;
    let m = oracle.table(ctx, m_id)?;
    assemble(
        ctx,
        bundle,
        a,
        Method::Oracle,
        |d| Ok(BigUint::from(c.get(d))),
        |d| Ok(BigUint::from(m.get(d))),
    )
}

/// Closed forms for the first Frobenius iterate.
///
/// `B_d = A_d + M_{d-q} - B_{d-q}` unrolls to an alternating sum, and
/// `C_d = B_d - M_d`. For odd `p` the `M` dimensions come from alternating
/// window sums of `A`; for `p = 2`, `M` is counted by [`count_m_basis`] and
/// `B` comes from `D` in place of `A`. The spinor side at `p = 2` has no
/// closed form for `M̃` and reads `C̃`, `M̃` from the oracle.
struct ClosedS1<'a> {
    oracle: &'a Oracle,
    ctx: &'a QuadricContext,
}

impl<'a> ClosedS1<'a> {
    fn new(oracle: &'a Oracle, ctx: &'a QuadricContext) -> Self {
        ClosedS1 { oracle, ctx }
    }

    fn dim_m(&self, d: i64) -> Result<BigInt> {
        let (n, p) = (self.ctx.n, self.ctx.p);
        if p == 2 {
            Ok(BigInt::from(count_m_basis(n, d)))
        } else {
            window_m1_dim(n, p, d)
        }
    }

    fn dim_m_tilde(&self, d: i64) -> Result<BigInt> {
        window_mtilde1_dim(self.ctx.n, self.ctx.p, d)
    }

    /// `sum_j (-1)^j (base_{d-jq} + m_{d-(j+1)q})`.
    fn dim_b(&self, d: i64, base: impl Fn(i64) -> BigInt, m: impl Fn(i64) -> Result<BigInt>) -> Result<BigInt> {
        let q = self.ctx.q as i64;
        let mut acc = BigInt::zero();
        let mut e = d;
        let mut sign = true;
        while e >= 0 {
            let term = base(e) + m(e - q)?;
            if sign {
                acc += term;
            } else {
                acc -= term;
            }
            sign = !sign;
            e -= q;
        }
        Ok(acc)
    }

    fn table(&self, bundle: Bundle, a: i64) -> Result<DecompositionTable> {
        let (n, q) = (self.ctx.n, self.ctx.q);
        match (bundle, self.ctx.p == 2) {
            (Bundle::O, two) => {
                let base = |e: i64| {
                    if two {
                        dim_d_formula(n + 1, q, e)
                    } else {
                        dim_a_formula(n, q, e)
                    }
                };
                let dim_c = |d: i64| {
                    let b = self.dim_b(d, base, |e| self.dim_m(e))?;
                    to_biguint(b - self.dim_m(d)?, "C", d)
                };
                let dim_m = |d: i64| to_biguint(self.dim_m(d)?, "M", d);
                assemble(self.ctx, bundle, a, Method::ClosedS1, dim_c, dim_m)
            }
            (Bundle::S, false) => {
                let base = |e: i64| dim_atilde_formula(n, q, e);
                let dim_c = |d: i64| {
                    let b = self.dim_b(d, base, |e| self.dim_m_tilde(e))?;
                    to_biguint(b - self.dim_m_tilde(d)?, "C_TILDE", d)
                };
                let dim_m = |d: i64| to_biguint(self.dim_m_tilde(d)?, "M_TILDE", d);
                assemble(self.ctx, bundle, a, Method::ClosedS1, dim_c, dim_m)
            }
            (Bundle::S, true) => {
                let mut t = oracle_table(self.oracle, self.ctx, bundle, a)?;
                t.method = Method::ClosedS1;
                Ok(t)
            }
        }
    }
}

/// Applies `F_*` to every summand of `inner`. `outer(b, i)` must return the
/// first-iterate table of `b(i)` for the same `n` and `p`.
///
/// ```
/// use qfrob::decomposition::{coefficients, compose, Bundle, DecompositionTable, Method};
/// use qfrob::quadric::make_context;
///
/// let ctx = make_context(3, 2, 1).unwrap();
/// let outer = |b, i| coefficients(&ctx, b, i, Method::ClosedS1);
/// let id = DecompositionTable::identity(3, 2, Bundle::O, 0);
/// let once = compose(&id, outer).unwrap();
/// assert!(once.same_multiplicities(&outer(Bundle::O, 0).unwrap()));
/// ```
pub fn compose(
    inner: &DecompositionTable,
    mut outer: impl FnMut(Bundle, i64) -> Result<DecompositionTable>,
) -> Result<DecompositionTable> {
    let mut line = BTreeMap::new();
    let mut spinor = BTreeMap::new();
    for (bundle, summands) in [(Bundle::O, &inner.line), (Bundle::S, &inner.spinor)] {
        for (&i, mult) in summands {
            let o = outer(bundle, i)?;
            if (o.n, o.p, o.s, o.bundle, o.a) != (inner.n, inner.p, 1, bundle, i) {
                return Err(Error::ContextMismatch(format!(
                    "outer table for {bundle}({i}) has (n, p, s, bundle, a) = ({}, {}, {}, {}, {}), expected ({}, {}, 1, {bundle}, {i})",
                    o.n, o.p, o.s, o.bundle, o.a, inner.n, inner.p
                )));
            }
            for (&t, v) in &o.line {
                insert_nonzero(&mut line, t, mult * v);
            }
            for (&t, v) in &o.spinor {
                insert_nonzero(&mut spinor, t, mult * v);
            }
        }
    }
    Ok(DecompositionTable {
        n: inner.n,
        p: inner.p,
        s: inner.s + 1,
        bundle: inner.bundle,
        a: inner.a,
        line,
        spinor,
        method: Method::Recursion,
    })
}

fn recursion(oracle: &Oracle, ctx: &QuadricContext, bundle: Bundle, a: i64) -> Result<DecompositionTable> {
    let ctx1 = make_context(ctx.n, ctx.p, 1)?;
    let closed = ClosedS1::new(oracle, &ctx1);
    let mut memo: HashMap<(Bundle, i64), DecompositionTable> = HashMap::new();
    let mut outer = |b: Bundle, i: i64| -> Result<DecompositionTable> {
        if let Some(t) = memo.get(&(b, i)) {
            return Ok(t.clone());
        }
        let t = closed.table(b, i)?;
        memo.insert((b, i), t.clone());
        Ok(t)
    };
    let mut table = DecompositionTable::identity(ctx.n, ctx.p, bundle, a);
    for _ in 0..ctx.s {
        table = compose(&table, &mut outer)?;
    }
    Ok(table)
}

/// Closed interval `[lo, hi]` of values of `a - tq`; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportWindow {
    pub lo: i64,
    pub hi: i64,
}

impl SupportWindow {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// The `t` with `a - tq` in the window.
    pub fn twists(&self, q: i64, a: i64) -> RangeInclusive<i64> {
        ceil_div(a - self.hi, q)..=floor_div(a - self.lo, q)
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

fn pow_checked(p: u64, s: u32) -> Result<i64> {
    p.checked_pow(s)
        .and_then(|q| i64::try_from(q).ok())
        .filter(|&q| q < 1 << 40)
        .ok_or_else(|| Error::TooLarge(format!("q = {p}^{s} is too large")))
}

/// Values of `a - tq` for which `F^s_*(source(a))` contains `target(t)`.
///
/// ```
/// use qfrob::decomposition::{support_window, Bundle};
///
/// let w = support_window(4, 2, 2, Bundle::O, Bundle::S).unwrap();
/// assert_eq!((w.lo, w.hi), (2, 6));
/// assert!(support_window(3, 2, 1, Bundle::S, Bundle::S).unwrap().is_empty());
/// ```
pub fn support_window(n: u32, p: u64, s: u32, source: Bundle, target: Bundle) -> Result<SupportWindow> {
    if n < 3 {
        return Err(Error::param("n", "support windows need n >= 3"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if s == 0 {
        return Err(Error::param("s", "need at least one Frobenius iteration"));
    }
    let q = pow_checked(p, s)?;
    let n = i64::from(n);
    let pi = p as i64;
    let line_hi = n * (q - 1);
    let first = i64::from(s == 1);
    let w = |lo, hi| SupportWindow { lo, hi };
    Ok(match (source, target) {
        (Bundle::O, Bundle::O) => w(0, line_hi),
        (Bundle::S, Bundle::O) => w(1, line_hi),
        (source, Bundle::S) if p > 2 => {
            let h = n * (pi - 1) / 2;
            let lo = (h - pi + 1) * q / pi;
            let hi = (h - 1) * q / pi + n * (q / pi - 1);
            match source {
                Bundle::O => w(lo, hi),
                Bundle::S => w(lo + 1 - first, hi + first),
            }
        }
        (source, Bundle::S) => {
            let shift = (n / 2 - 1) * q / 2;
            let lo = shift;
            let hi = n * (q - 1) - q - shift;
            let odd = first * (n % 2);
            match source {
                Bundle::O => w(lo, hi),
                Bundle::S => w(lo + 1 + odd, hi - odd),
            }
        }
    })
}

/// Multiplicity of `O(t)` in the `s`-th Frobenius push-forward of `O(a)` on
/// `P^N`.
///
/// ```
/// use qfrob::decomposition::alpha_pn;
///
/// assert_eq!(alpha_pn(1, 2, 1, 0, 0).unwrap(), 1u32.into());
/// assert_eq!(alpha_pn(1, 2, 1, -1, 0).unwrap(), 1u32.into());
/// assert_eq!(alpha_pn(1, 2, 1, -2, 0).unwrap(), 0u32.into());
/// ```
pub fn alpha_pn(big_n: u32, p: u64, s: u32, t: i64, a: i64) -> Result<BigUint> {
    if big_n == 0 {
        return Err(Error::param("N", "need N >= 1"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = pow_checked(p, s)?;
    let d = a
        .checked_sub(t.checked_mul(q).ok_or_else(|| Error::param("t", "twist out of range"))?)
        .ok_or_else(|| Error::param("a", "twist out of range"))?;
    let v = dim_d_formula(big_n, q as u64, d);
    to_biguint(v, "D", d)
}

/// Every nonzero `alpha_pn(N, p, s, t, a)`, keyed by `t`.
pub fn alpha_pn_table(big_n: u32, p: u64, s: u32, a: i64) -> Result<BTreeMap<i64, BigUint>> {
    let q = pow_checked(p, s)?;
    let top = i64::from(big_n + 1) * (q - 1);
    let mut out = BTreeMap::new();
    for t in ceil_div(a - top, q)..=floor_div(a, q) {
        insert_nonzero(&mut out, t, alpha_pn(big_n, p, s, t, a)?);
    }
    Ok(out)
}

/// Rank of `O(a)` (one) or `S(a)` (`2^floor(n/2)`) times `q^n`, against the
/// ranks of the summands.
pub fn verify_rank(table: &DecompositionTable) -> bool {
    let spinor_rank = BigUint::from(1u32) << (table.n / 2) as usize;
    let lines: BigUint = table.line.values().sum();
    let spinors: BigUint = table.spinor.values().sum();
    let total = lines + &spinor_rank * spinors;
    let mut expected = table.q().pow(table.n);
    if table.bundle == Bundle::S {
        expected *= spinor_rank;
    }
    total == expected
}

/// Default `b` range for [`verify_euler`]: `[-2n, 2n]`.
pub fn default_b_range(n: u32) -> RangeInclusive<i64> {
    let n = i64::from(n);
    -2 * n..=2 * n
}

/// Euler characteristics of the push-forward twisted by `O(b)` agree with
/// those of the summands: `chi(source(a + bq)) = sum chi(O(t+b)) + sum chi(S(t+b))`.
pub fn verify_euler(table: &DecompositionTable, b_range: RangeInclusive<i64>) -> bool {
    let n = table.n;
    let q = match table.q().to_i64() {
        Some(q) => q,
        None => return false,
    };
    b_range.into_iter().all(|b| {
        let lhs = match table.bundle {
            Bundle::O => hilbert_q(n, table.a + b * q),
            Bundle::S => hilbert_s(n, table.a + b * q),
        };
        let mut rhs = BigInt::zero();
        for (&t, m) in &table.line {
            rhs += BigInt::from(m.clone()) * hilbert_q(n, t + b);
        }
        for (&t, m) in &table.spinor {
            rhs += BigInt::from(m.clone()) * hilbert_s(n, t + b);
        }
        lhs == rhs
    })
}

/// Global sections agree: `dim H^0(source(a + bq))` against the sections of
/// the summands twisted by `b`, for every `b` in `b_range`. Unlike the Euler
/// characteristic this is not polynomial in `b`, so it also constrains the
/// twists where sections start.
pub fn verify_sections(table: &DecompositionTable, b_range: RangeInclusive<i64>) -> bool {
    let n = table.n;
    let q = match table.q().to_i64() {
        Some(q) => q,
        None => return false,
    };
    b_range.into_iter().all(|b| {
        let lhs = match table.bundle {
            Bundle::O => dim_r(n, table.a + b * q),
            Bundle::S => dim_z(n, table.a + b * q),
        };
        let mut rhs = BigInt::zero();
        for (&t, m) in &table.line {
            rhs += BigInt::from(m.clone()) * dim_r(n, t + b);
        }
        for (&t, m) in &table.spinor {
            rhs += BigInt::from(m.clone()) * dim_z(n, t + b);
        }
        lhs == rhs
    })
}

/// Serre duality relates `table` for `a` to `dual` for `-a-n` (source `O`)
/// or `-a+1-n` (source `S`): line twists map by `t -> -t-n`, spinor twists by
/// `t -> -t+1-n`.
pub fn dual_pair_holds(table: &DecompositionTable, dual: &DecompositionTable) -> bool {
    let n = i64::from(table.n);
    let expected_a = match table.bundle {
        Bundle::O => -table.a - n,
        Bundle::S => -table.a + 1 - n,
    };
    if (dual.n, dual.p, dual.s, dual.bundle, dual.a) != (table.n, table.p, table.s, table.bundle, expected_a) {
        return false;
    }
    let mirror = |m: &BTreeMap<i64, BigUint>, shift: i64| -> BTreeMap<i64, BigUint> {
        m.iter().map(|(&t, v)| (shift - t, v.clone())).collect()
    };
    mirror(&table.line, -n) == dual.line && mirror(&table.spinor, 1 - n) == dual.spinor
}

/// Checks all four duality relations for every `a` in `a_range`.
pub fn verify_symmetry(ctx: &QuadricContext, a_range: RangeInclusive<i64>, method: Method) -> Result<bool> {
    verify_symmetry_with(shared(), ctx, a_range, method)
}

pub fn verify_symmetry_with(
    oracle: &Oracle,
    ctx: &QuadricContext,
    a_range: RangeInclusive<i64>,
    method: Method,
) -> Result<bool> {
    let n = i64::from(ctx.n);
    for a in a_range {
        for (bundle, dual_a) in [(Bundle::O, -a - n), (Bundle::S, -a + 1 - n)] {
            let t = coefficients_with(oracle, ctx, bundle, a, method)?;
            let d = coefficients_with(oracle, ctx, bundle, dual_a, method)?;
            if !dual_pair_holds(&t, &d) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Supports of `table` match the windows in both summand types.
pub fn supports_match_windows(table: &DecompositionTable) -> Result<bool> {
    if table.s == 0 {
        return Ok(true);
    }
    let q = pow_checked(table.p, table.s)?;
    for (target, support) in [(Bundle::O, table.line_support()), (Bundle::S, table.spinor_support())] {
        let w = support_window(table.n, table.p, table.s, table.bundle, target)?;
        let expected: BTreeSet<i64> = if w.is_empty() { BTreeSet::new() } else { w.twists(q, table.a).collect() };
        if support != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of generators divided out of `M`: `2^(floor(n/2)+1)`.
pub fn spinor_divisor(n: u32) -> BigInt {
    pow2(n / 2 + 1)
}
