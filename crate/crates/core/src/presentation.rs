//! Graded modules given by generators and relations over a monomial base
//! ring, with dimensions computed by block-wise elimination.
//!
//! The base ring is either the polynomial ring `S` or
//! `W = S/(x0^q + x1^q, x2^q, ..., xN^q)`, whose standard monomials have
//! `x0, x2, ..., xN` below `q` (the rule `x0^q -> -x1^q` rewrites the rest).

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::gfp::{Echelon, PrimeField};
use crate::grading::{Grading, Key};
use crate::quadric::{monomials, HomogeneousPoly, Monomial, QuadricContext};
use crate::spinor::MatrixFactorization;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Base {
    Polynomial,
    Truncated,
}

#[derive(Debug, Clone)]
struct Relation {
    degree: u32,
    key: Key,
    entries: Vec<(usize, HomogeneousPoly)>,
}

#[derive(Debug, Clone)]
pub(crate) struct Presentation {
    field: PrimeField,
    nvars: usize,
    q: u32,
    base: Base,
    gen_degree: i64,
    gen_keys: Vec<Key>,
    relations: Vec<Relation>,
    grading: Grading,
}

pub(crate) struct Piece {
    pub ambient: usize,
    pub basis: Vec<(usize, Monomial)>,
}

/// Hilbert function together with the ranks of multiplication by `x0^q`.
#[derive(Debug, Clone)]
pub(crate) struct Sweep {
    pub dims: Vec<u64>,
    /// `x0q_rank[d]` is the rank of `x0^q` from degree `d` to `d + q`.
    pub x0q_rank: Vec<u64>,
}

struct Block {
    cols: Vec<(usize, Vec<u32>)>,
    index: HashMap<(usize, Vec<u32>), usize>,
    echelon: Echelon,
}

impl Presentation {
    /// `R = S/(Q)` over the base (so `A` when the base is truncated).
    pub(crate) fn ring(ctx: &QuadricContext, base: Base) -> Self {
        let grading = Grading::for_quadric(ctx.n, Self::trunc(ctx, base));
        let key = grading.weight(&ctx.leading_monomial().0);
        Presentation {
            field: ctx.field,
            nvars: ctx.nvars(),
            q: ctx.q as u32,
            base,
            gen_degree: 0,
            gen_keys: vec![grading.zero()],
            relations: vec![Relation {
                degree: 2,
                key,
                entries: vec![(0, ctx.quadric.clone())],
            }],
            grading,
        }
    }

    /// `coker(Phi)` with generators in degree one.
    pub(crate) fn spinor(ctx: &QuadricContext, mf: &MatrixFactorization, base: Base) -> Result<Self> {
        let grading = Grading::for_quadric(ctx.n, Self::trunc(ctx, base));
        let columns: Vec<Vec<(usize, HomogeneousPoly)>> = mf
            .phi_columns()
            .into_iter()
            .map(|c| c.into_iter().enumerate().filter(|(_, f)| !f.is_zero()).collect())
            .collect();
        let (gen_keys, rel_keys) = assign_keys(&grading, mf.size, &columns)?;
        let relations = columns
            .into_iter()
            .zip(rel_keys)
            .map(|(entries, key)| Relation { degree: 1, key, entries })
            .collect();
        Ok(Presentation {
            field: ctx.field,
            nvars: ctx.nvars(),
            q: ctx.q as u32,
            base,
            gen_degree: 1,
            gen_keys,
            relations,
            grading,
        })
    }

    fn trunc(ctx: &QuadricContext, base: Base) -> Option<u64> {
        match base {
            Base::Polynomial => None,
            Base::Truncated => Some(ctx.q),
        }
    }

    /// Adds `g * e_i` for every generator `e_i` and every `g` among
    /// `x0^q + x1^q, x2^q, ..., xN^q`. Only meaningful over the polynomial base.
    pub(crate) fn with_frobenius_ideal(mut self) -> Result<Self> {
        if self.base != Base::Polynomial {
            return Err(Error::Invariant("ideal is already part of the truncated base".into()));
        }
        // regrade so that x0^q + x1^q is homogeneous
        let n = self.nvars as u32 - 2;
        let grading = Grading::for_quadric(n, Some(u64::from(self.q)));
        let mut gens = Vec::new();
        let nv = self.nvars;
        let q = self.q;
        let mut e0 = vec![0; nv];
        e0[0] = q;
        let mut e1 = vec![0; nv];
        e1[1] = q;
        gens.push(HomogeneousPoly::from_terms(self.field, nv, q, [(Monomial(e0), 1), (Monomial(e1), 1)]));
        for j in 2..nv {
            let mut e = vec![0; nv];
            e[j] = q;
            gens.push(HomogeneousPoly::monomial(self.field, Monomial(e), 1));
        }
        let mut columns: Vec<Vec<(usize, HomogeneousPoly)>> = self.relations.iter().map(|r| r.entries.clone()).collect();
        let m = self.gen_keys.len();
        for g in &gens {
            for i in 0..m {
                columns.push(vec![(i, g.clone())]);
            }
        }
        let (gen_keys, rel_keys) = assign_keys(&grading, m, &columns)?;
        self.relations = columns
            .into_iter()
            .zip(rel_keys)
            .map(|(entries, key)| {
                let degree = entries[0].1.degree();
                Relation { degree, key, entries }
            })
            .collect();
        self.gen_keys = gen_keys;
        self.grading = grading;
        Ok(self)
    }

    /// Standard monomials of the base ring in degree `e`.
    fn base_basis(&self, e: i64) -> Vec<Vec<u32>> {
        if e < 0 {
            return Vec::new();
        }
        match self.base {
            Base::Polynomial => monomials(self.nvars, e as u32).into_iter().map(|m| m.0).collect(),
            Base::Truncated => {
                let mut out = Vec::new();
                let mut cur = vec![0u32; self.nvars];
                self.truncated_rec(0, e as u32, &mut cur, &mut out);
                out
            }
        }
    }

    fn truncated_rec(&self, v: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if v == self.nvars {
            let mut m = cur.clone();
            m[1] = left;
            out.push(m);
            return;
        }
        if v == 1 {
            return self.truncated_rec(2, left, cur, out);
        }
        for e in 0..self.q.min(left + 1) {
            cur[v] = e;
            self.truncated_rec(v + 1, left - e, cur, out);
        }
        cur[v] = 0;
    }

    /// Reduces a monomial to a standard one, returning the sign picked up.
    fn reduce(&self, mut exps: Vec<u32>) -> Option<(Vec<u32>, u32)> {
        match self.base {
            Base::Polynomial => Some((exps, 1)),
            Base::Truncated => {
                if exps[2..].iter().any(|&e| e >= self.q) {
                    return None;
                }
                let k = exps[0] / self.q;
                exps[0] %= self.q;
                exps[1] += k * self.q;
                let sign = if k % 2 == 1 { self.field.neg(1) } else { 1 };
                Some((exps, sign))
            }
        }
    }

    fn image(&self, entries: &[(usize, HomogeneousPoly)], u: &[u32]) -> Vec<(usize, Vec<u32>, u32)> {
        let mut out = Vec::new();
        for (gen, f) in entries {
            for (t, c) in f.terms() {
                let prod: Vec<u32> = t.0.iter().zip(u).map(|(a, b)| a + b).collect();
                if let Some((m, sign)) = self.reduce(prod) {
                    out.push((*gen, m, self.field.mul(c, sign)));
                }
            }
        }
        out
    }

    fn blocks(&self, d: i64) -> (usize, BTreeMap<Key, Block>) {
        let mut blocks: BTreeMap<Key, Block> = BTreeMap::new();
        let mut ambient = 0;
        let us = self.base_basis(d - self.gen_degree);
        for (i, gk) in self.gen_keys.iter().enumerate() {
            for u in &us {
                let key = self.grading.add(gk, &self.grading.weight(u));
                let b = blocks.entry(key).or_insert_with(|| Block {
                    cols: Vec::new(),
                    index: HashMap::new(),
                    echelon: Echelon::new(self.field, 0),
                });
                b.index.insert((i, u.clone()), b.cols.len());
                b.cols.push((i, u.clone()));
                ambient += 1;
            }
        }
        for b in blocks.values_mut() {
            b.echelon = Echelon::new(self.field, b.cols.len());
        }
        for rel in &self.relations {
            for u in self.base_basis(d - self.gen_degree - i64::from(rel.degree)) {
                let key = self.grading.add(&rel.key, &self.grading.weight(&u));
                let row = self.image(&rel.entries, &u);
                if row.is_empty() {
                    continue;
                }
                let b = blocks.get_mut(&key).expect("relation lands in a known block");
                let sparse: Vec<(usize, u32)> = row
                    .into_iter()
                    .map(|(g, m, c)| (b.index[&(g, m)], c))
                    .collect();
                b.echelon.insert_sparse(&sparse);
            }
        }
        (ambient, blocks)
    }

    /// Quotient dimension and a monomial basis of it in degree `d`.
    pub(crate) fn piece(&self, d: i64) -> Piece {
        let (ambient, blocks) = self.blocks(d);
        let mut basis = Vec::new();
        for b in blocks.into_values() {
            let pivots = b.echelon.pivots();
            let mut taken = vec![false; b.cols.len()];
            for &p in pivots {
                taken[p] = true;
            }
            for (j, c) in b.cols.into_iter().enumerate() {
                if !taken[j] {
                    basis.push((c.0, Monomial(c.1)));
                }
            }
        }
        basis.sort();
        Piece { ambient, basis }
    }

    /// Dimensions for `0 <= d <= top` and the ranks of `x0^q` on the quotient.
    pub(crate) fn sweep(&self, top: i64) -> Sweep {
        let q = i64::from(self.q);
        let len = (top + 1).max(0) as usize;
        let mut dims = vec![0u64; len];
        let mut x0q_rank = vec![0u64; len];
        let mut x0q = vec![0; self.nvars];
        x0q[0] = self.q;
        let x0q_key = self.grading.weight(&x0q);
        let x0q_poly = HomogeneousPoly::monomial(self.field, Monomial(x0q), 1);
        for e in 0..=top + q {
            let (_, mut blocks) = self.blocks(e);
            if e <= top {
                dims[e as usize] = blocks.values().map(|b| (b.cols.len() - b.echelon.rank()) as u64).sum();
            }
            let src = e - q;
            if src < 0 || src > top {
                continue;
            }
            let before: usize = blocks.values().map(|b| b.echelon.rank()).sum();
            for (i, gk) in self.gen_keys.iter().enumerate() {
                for u in self.base_basis(src - self.gen_degree) {
                    let key = self.grading.add(&self.grading.add(gk, &self.grading.weight(&u)), &x0q_key);
                    let row = self.image(&[(i, x0q_poly.clone())], &u);
                    if row.is_empty() {
                        continue;
                    }
                    let b = blocks.get_mut(&key).expect("x0^q image lands in a known block");
                    let sparse: Vec<(usize, u32)> = row.into_iter().map(|(g, m, c)| (b.index[&(g, m)], c)).collect();
                    b.echelon.insert_sparse(&sparse);
                }
            }
            let after: usize = blocks.values().map(|b| b.echelon.rank()).sum();
            x0q_rank[src as usize] = (after - before) as u64;
        }
        Sweep { dims, x0q_rank }
    }
}

/// Finds generator keys making every relation homogeneous.
fn assign_keys(
    grading: &Grading,
    m: usize,
    columns: &[Vec<(usize, HomogeneousPoly)>],
) -> Result<(Vec<Key>, Vec<Key>)> {
    let mut gen: Vec<Option<Key>> = vec![None; m];
    let mut rel: Vec<Option<Key>> = vec![None; columns.len()];
    let term_key = |f: &HomogeneousPoly| -> Result<Key> {
        let mut keys = f.terms().map(|(t, _)| grading.weight(&t.0));
        let first = keys.next().ok_or_else(|| Error::Invariant("empty relation entry".into()))?;
        if keys.any(|k| k != first) {
            return Err(Error::Invariant(format!("relation entry {f} is not homogeneous")));
        }
        Ok(first)
    };
    loop {
        let mut progress = false;
        for (j, col) in columns.iter().enumerate() {
            if rel[j].is_none() {
                if let Some((i, f)) = col.iter().find(|(i, _)| gen[*i].is_some()) {
                    rel[j] = Some(grading.add(gen[*i].as_ref().unwrap(), &term_key(f)?));
                    progress = true;
                }
            }
            if let Some(rk) = rel[j].clone() {
                for (i, f) in col {
                    let want = grading.sub(&rk, &term_key(f)?);
                    match &gen[*i] {
                        None => {
                            gen[*i] = Some(want);
                            progress = true;
                        }
                        Some(k) if *k != want => {
                            return Err(Error::Invariant(format!("inconsistent grading at generator {i}")));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        if !progress {
            match gen.iter().position(Option::is_none) {
                Some(i) => gen[i] = Some(grading.zero()),
                None => break,
            }
        }
    }
    for (j, r) in rel.iter_mut().enumerate() {
        if r.is_none() {
            return Err(Error::Invariant(format!("relation {j} touches no generator")));
        }
    }
    Ok((
        gen.into_iter().map(Option::unwrap).collect(),
        rel.into_iter().map(Option::unwrap).collect(),
    ))
}
