//! The smooth quadric and its homogeneous coordinate ring.

mod poly;

use std::collections::HashMap;

pub use poly::{monomials, HomogeneousPoly, Monomial};

use crate::error::{Error, Result};
use crate::gfp::{FieldMatrix, PrimeField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: i64) -> Self {
        if n.rem_euclid(2) == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Parameters `(n, p, s)` together with everything derived from them.
#[derive(Debug, Clone)]
pub struct QuadricContext {
    pub n: u32,
    pub p: u64,
    pub s: u32,
    pub q: u64,
    /// `n + 1`; the ambient projective space is `P^N` with `N + 1` variables.
    pub big_n: u32,
    pub field: PrimeField,
    pub quadric: HomogeneousPoly,
    pub parity: Parity,
}

/// The split quadric in `n + 2` variables, valid for every `n >= -1`:
/// `x0^2 + x1 x2 + ... + x_n x_{n+1}` for odd `n`, `x0 x1 + ... + x_n x_{n+1}`
/// for even `n`.
pub fn quadric_polynomial(n: i64, field: PrimeField) -> HomogeneousPoly {
    assert!(n >= -1, "quadric needs n >= -1");
    let nvars = (n + 2) as usize;
    let mut terms = Vec::new();
    let start = if Parity::of(n) == Parity::Odd {
        let mut e = vec![0; nvars];
        e[0] = 2;
        terms.push((Monomial(e), 1));
        1
    } else {
        0
    };
    let mut i = start;
    while i + 1 < nvars {
        let mut e = vec![0; nvars];
        e[i] = 1;
        e[i + 1] = 1;
        terms.push((Monomial(e), 1));
        i += 2;
    }
    HomogeneousPoly::from_terms(field, nvars, 2, terms)
}

/// Builds the context for the `n`-dimensional quadric in characteristic `p`
/// with `s` Frobenius iterations.
///
/// ```
/// let ctx = qfrob::quadric::make_context(3, 3, 1).unwrap();
/// assert_eq!(ctx.q, 3);
/// assert_eq!(ctx.quadric.to_string(), "x0^2 + x1*x2 + x3*x4");
/// assert!(qfrob::quadric::make_context(2, 3, 1).is_err());
/// ```
pub fn make_context(n: u32, p: u64, s: u32) -> Result<QuadricContext> {
    if n <= 2 {
        return Err(Error::param(
            "n",
            format!(
                "quadrics of dimension {n} reduce to projective space; use the P^N decomposition (alpha_pn) instead"
            ),
        ));
    }
    let field = PrimeField::new(p)?;
    if s == 0 {
        return Err(Error::param("s", "need at least one Frobenius iteration"));
    }
    let q = p
        .checked_pow(s)
        .filter(|&q| q < 1 << 20)
        .ok_or_else(|| Error::TooLarge(format!("q = {p}^{s} is too large")))?;
    Ok(QuadricContext {
        n,
        p,
        s,
        q,
        big_n: n + 1,
        field,
        quadric: quadric_polynomial(i64::from(n), field),
        parity: Parity::of(i64::from(n)),
    })
}

impl QuadricContext {
    /// Number of variables of the ambient polynomial ring.
    pub fn nvars(&self) -> usize {
        self.big_n as usize + 1
    }

    /// `x0^2` for odd `n`, `x0 x1` for even `n`.
    pub fn leading_monomial(&self) -> Monomial {
        let mut e = vec![0; self.nvars()];
        match self.parity {
            Parity::Odd => e[0] = 2,
            Parity::Even => {
                e[0] = 1;
                e[1] = 1;
            }
        }
        Monomial(e)
    }

    /// `lm - Q`, the replacement for the leading monomial.
    fn rewrite_rule(&self) -> HomogeneousPoly {
        let lm = self.leading_monomial();
        let mut tail = HomogeneousPoly::zero(self.field, self.nvars(), 2);
        for (m, c) in self.quadric.terms() {
            if *m != lm {
                tail.add_term(m.clone(), self.field.neg(c));
            }
        }
        tail
    }

    pub fn variable(&self, i: usize) -> HomogeneousPoly {
        HomogeneousPoly::monomial(self.field, Monomial::var(self.nvars(), i), 1)
    }

    pub fn r_basis(&self, d: i64) -> Vec<Monomial> {
        r_basis(self, d)
    }
}

/// Canonical representative of `f` in `R = S/(Q)`: no term is divisible by
/// the leading monomial.
pub fn normal_form(ctx: &QuadricContext, f: &HomogeneousPoly) -> HomogeneousPoly {
    let lm = ctx.leading_monomial();
    let tail = ctx.rewrite_rule();
    let mut out = HomogeneousPoly::zero(f.field(), f.nvars(), f.degree());
    let mut pending: Vec<(Monomial, u32)> = f.terms().map(|(m, c)| (m.clone(), c)).collect();
    while let Some((m, c)) = pending.pop() {
        if lm.divides(&m) {
            let rest = lm.quotient_of(&m);
            for (t, tc) in tail.terms() {
                pending.push((t.mul(&rest), ctx.field.mul(c, tc)));
            }
        } else {
            out.add_term(m, c);
        }
    }
    out
}

/// Standard monomials of degree `d`, in decreasing lex order.
pub fn r_basis(ctx: &QuadricContext, d: i64) -> Vec<Monomial> {
    if d < 0 {
        return Vec::new();
    }
    let lm = ctx.leading_monomial();
    monomials(ctx.nvars(), d as u32)
        .into_iter()
        .filter(|m| !lm.divides(m))
        .collect()
}

/// Matrix of multiplication by `f` from `R_d` to `R_{d+e}` in the standard
/// monomial bases (columns index the source).
pub fn mult_matrix(ctx: &QuadricContext, f: &HomogeneousPoly, d: i64) -> FieldMatrix {
    let src = r_basis(ctx, d);
    let dst = r_basis(ctx, d + i64::from(f.degree()));
    let index: HashMap<&Monomial, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = FieldMatrix::zeros(ctx.field, dst.len(), src.len());
    for (j, m) in src.iter().enumerate() {
        let image = normal_form(ctx, &f.mul_monomial(m));
        for (t, c) in image.terms() {
            out.set(index[t], j, c);
        }
    }
    out
}
