use std::collections::BTreeMap;
use std::fmt;

use crate::gfp::PrimeField;

/// Exponent vector of a monomial in `x0, ..., x_{k-1}`.
///
/// Ordering is lexicographic with `x0` the largest variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of degree `d` in `nvars` variables, in decreasing lex order.
pub fn monomials(nvars: usize, d: u32) -> Vec<Monomial> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            go(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    go(0, d, &mut vec![0; nvars], &mut out);
    out
}

/// A homogeneous polynomial over `GF(p)`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogeneousPoly {
    field: PrimeField,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, u32>,
}

impl HomogeneousPoly {
    pub fn zero(field: PrimeField, nvars: usize, degree: u32) -> Self {
        HomogeneousPoly {
            field,
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: PrimeField, m: Monomial, coeff: i64) -> Self {
        let mut p = Self::zero(field, m.nvars(), m.degree());
        p.add_term(m, field.reduce(coeff));
        p
    }

    /// Builds a polynomial from signed coefficients. Panics on mixed degrees.
    pub fn from_terms(field: PrimeField, nvars: usize, degree: u32, terms: impl IntoIterator<Item = (Monomial, i64)>) -> Self {
        let mut p = Self::zero(field, nvars, degree);
        for (m, c) in terms {
            p.add_term(m, field.reduce(c));
        }
        p
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: u32) {
        assert_eq!(m.nvars(), self.nvars, "variable count mismatch");
        assert_eq!(m.degree(), self.degree, "polynomial must stay homogeneous");
        if c == 0 {
            return;
        }
        let f = self.field;
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &HomogeneousPoly) -> HomogeneousPoly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: u32) -> HomogeneousPoly {
        let mut out = Self::zero(self.field, self.nvars, self.degree);
        for (m, v) in self.terms() {
            out.add_term(m.clone(), self.field.mul(v, c));
        }
        out
    }

    pub fn neg(&self) -> HomogeneousPoly {
        self.scale(self.field.p() - 1)
    }

    pub fn mul(&self, other: &HomogeneousPoly) -> HomogeneousPoly {
        let f = self.field;
        let mut out = Self::zero(f, self.nvars, self.degree + other.degree);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out.add_term(a.mul(b), f.mul(x, y));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> HomogeneousPoly {
        let mut out = Self::zero(self.field, self.nvars, self.degree + m.degree());
        for (a, x) in self.terms() {
            out.add_term(a.mul(m), x);
        }
        out
    }

    pub fn pow(&self, e: u32) -> HomogeneousPoly {
        let mut out = Self::monomial(self.field, Monomial::one(self.nvars), 1);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Debug for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HomogeneousPoly {
    /// Terms in decreasing order with signed coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, &c)) in self.terms.iter().rev().enumerate() {
            let c = self.field.lift(c);
            let mono = m.to_string();
            let body = if mono == "1" {
                c.abs().to_string()
            } else if c.abs() == 1 {
                mono
            } else {
                format!("{}*{}", c.abs(), mono)
            };
            match (i, c < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}
