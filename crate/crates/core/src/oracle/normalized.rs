//! Oracle over a Noether normalization.
//!
//! Put `y0 = x0 + x1` and let `z` be `x0` (odd `n`) or `x1` (even `n`). Then
//! `x0^q + x1^q = y0^q`, the quadric becomes monic of degree two in `z`, and
//! both `R` and `Z` are free over `P = k[y0, x2, ..., xN]`, with `z` acting by
//! a matrix `X` satisfying `X^2 = alpha X + beta`. Modulo
//! `(y0^q, x2^q, ..., xN^q)` a basis is `e_i * m` with every exponent of `m`
//! below `q`, and `x0^q` acts (up to sign) as `T = a_q X + b_q`, where
//! `z^q = a_q z + b_q` modulo the quadric.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gfp::{Echelon, PrimeField};
use crate::quadric::{HomogeneousPoly, Monomial, Parity, QuadricContext};
use crate::spinor::MatrixFactorization;

const BITS: u32 = 6;
const FIELD_MASK: u64 = (1 << BITS) - 1;
const KEY_BASE: i64 = 256;

/// Free module over `P` with the action of `z`.
pub(crate) struct FreeModel {
    field: PrimeField,
    q: u32,
    nv: usize,
    gen_degrees: Vec<i64>,
    gen_keys: Vec<i64>,
    var_keys: Vec<i64>,
    /// `T e_i` as `(k, packed monomial, coefficient)`.
    t_cols: Vec<Vec<(usize, u64, u32)>>,
}

/// Quotient dimensions and ranks of the `x0^q` map, indexed by degree.
pub(crate) struct FreeSweep {
    pub dims: Vec<u64>,
    pub x0q_rank: Vec<u64>,
}

struct Coordinates {
    field: PrimeField,
    /// Variables of the extended ring: `P` variables first, `z` last.
    nv: usize,
    images: Vec<HomogeneousPoly>,
}

impl Coordinates {
    fn new(ctx: &QuadricContext) -> Self {
        let field = ctx.field;
        let nx = ctx.nvars();
        let nv = nx - 1;
        let ext = nv + 1;
        let var = |i: usize| HomogeneousPoly::monomial(field, Monomial::var(ext, i), 1);
        let z = var(nv);
        let y0_minus_z = var(0).add(&z.neg());
        let mut images = Vec::with_capacity(nx);
        let (z_index, partner) = match ctx.parity {
            Parity::Odd => (0, 1),
            Parity::Even => (1, 0),
        };
        for j in 0..nx {
            images.push(if j == z_index {
                z.clone()
            } else if j == partner {
                y0_minus_z.clone()
            } else {
                var(j - 1)
            });
        }
        Coordinates { field, nv, images }
    }

    fn substitute(&self, f: &HomogeneousPoly) -> HomogeneousPoly {
        let mut out = HomogeneousPoly::zero(self.field, self.nv + 1, f.degree());
        for (m, c) in f.terms() {
            let mut t = HomogeneousPoly::monomial(self.field, Monomial::one(self.nv + 1), i64::from(c));
            for (j, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&self.images[j]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Coefficients of `z^k` as polynomials on `P`.
    fn split(&self, f: &HomogeneousPoly) -> Vec<HomogeneousPoly> {
        let deg = f.degree();
        let mut out: Vec<HomogeneousPoly> = (0..=deg)
            .map(|k| HomogeneousPoly::zero(self.field, self.nv, deg - k))
            .collect();
        for (m, c) in f.terms() {
            let k = m.0[self.nv];
            out[k as usize].add_term(Monomial(m.0[..self.nv].to_vec()), c);
        }
        out
    }
}

type PolyMatrix = Vec<Vec<HomogeneousPoly>>;

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix, zero: impl Fn(usize, usize) -> HomogeneousPoly) -> PolyMatrix {
    let m = a.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = zero(i, j);
                    for k in 0..m {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&a[i][k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn invert(field: PrimeField, m: &[Vec<u32>]) -> Result<Vec<Vec<u32>>> {
    let n = m.len();
    let mut a: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u32::from(i == j)));
            row
        })
        .collect();
    for c in 0..n {
        let pr = (c..n)
            .find(|&r| a[r][c] != 0)
            .ok_or_else(|| Error::Invariant("coefficient matrix of z is singular".into()))?;
        a.swap(c, pr);
        let inv = field.inv(a[c][c]);
        for x in a[c].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..n {
            if r != c && a[r][c] != 0 {
                let k = a[r][c];
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x = field.sub(*x, field.mul(k, y));
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl FreeModel {
    /// The coordinate ring, with basis `1, z`.
    pub(crate) fn ring(ctx: &QuadricContext) -> Result<Self> {
        let co = Coordinates::new(ctx);
        let (alpha, beta) = z_relation(&co, ctx)?;
        let f = ctx.field;
        let nv = co.nv;
        let one = HomogeneousPoly::monomial(f, Monomial::one(nv), 1);
        let x = vec![
            vec![HomogeneousPoly::zero(f, nv, 1), beta.clone()],
            vec![one, alpha.clone()],
        ];
        Self::assemble(ctx, &co, vec![0, 1], x, &alpha, &beta)
    }

    /// The spinor module `coker(Phi)`, generated in degree one.
    pub(crate) fn spinor(ctx: &QuadricContext, mf: &MatrixFactorization) -> Result<Self> {
        let co = Coordinates::new(ctx);
        let (alpha, beta) = z_relation(&co, ctx)?;
        let f = ctx.field;
        let m = mf.size;
        let mut kz = vec![vec![0u32; m]; m];
        let mut lin: PolyMatrix = vec![vec![HomogeneousPoly::zero(f, co.nv, 1); m]; m];
        for (i, row) in mf.phi_polys().iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let parts = co.split(&co.substitute(e));
                kz[i][j] = parts[1].coeff(&Monomial::one(co.nv));
                lin[i][j] = parts[0].clone();
            }
        }
        let kinv = invert(f, &kz)?;
        // z e_j = -sum_k (L Kz^{-1})_{kj} e_k
        let x: PolyMatrix = (0..m)
            .map(|k| {
                (0..m)
                    .map(|j| {
                        let mut acc = HomogeneousPoly::zero(f, co.nv, 1);
                        for (l, row) in kinv.iter().enumerate() {
                            if row[j] != 0 && !lin[k][l].is_zero() {
                                acc = acc.add(&lin[k][l].scale(row[j]));
                            }
                        }
                        acc.neg()
                    })
                    .collect()
            })
            .collect();
        Self::assemble(ctx, &co, vec![1; m], x, &alpha, &beta)
    }

    fn assemble(
        ctx: &QuadricContext,
        co: &Coordinates,
        gen_degrees: Vec<i64>,
        x: PolyMatrix,
        alpha: &HomogeneousPoly,
        beta: &HomogeneousPoly,
    ) -> Result<Self> {
        let f = ctx.field;
        let nv = co.nv;
        let m = gen_degrees.len();
        let q = u32::try_from(ctx.q).ok().filter(|&q| q < 32).ok_or_else(|| {
            Error::TooLarge(format!("q = {} exceeds the oracle's packed exponent range", ctx.q))
        })?;
        if nv as u32 * BITS > 64 {
            return Err(Error::TooLarge(format!("{nv} variables exceed the packed monomial width")));
        }
        let deg_of = |i: usize, j: usize| (gen_degrees[j] + 1 - gen_degrees[i]) as u32;

        // X^2 = alpha X + beta
        let x2 = mat_mul(&x, &x, |i, j| HomogeneousPoly::zero(f, nv, deg_of(i, j) + 1));
        for i in 0..m {
            for j in 0..m {
                let mut rhs = alpha.mul(&x[i][j]);
                if i == j {
                    rhs = rhs.add(beta);
                }
                if x2[i][j] != rhs {
                    return Err(Error::Invariant(format!("z does not satisfy the quadric at ({i}, {j})")));
                }
            }
        }

        // z^k = a_k z + b_k
        let mut a = HomogeneousPoly::monomial(f, Monomial::one(nv), 1);
        let mut b = HomogeneousPoly::zero(f, nv, 1);
        for _ in 1..q {
            let na = a.mul(alpha).add(&b);
            let nb = a.mul(beta);
            a = na;
            b = nb;
        }

        let var_keys = var_keys(ctx);
        let weight = |mono: &Monomial| -> i64 { mono.0.iter().zip(&var_keys).map(|(&e, &w)| i64::from(e) * w).sum() };

        // generator keys: key(e_k) + wt(X_kj) = key(e_j)
        let mut keys: Vec<Option<i64>> = vec![None; m];
        let entry_key = |p: &HomogeneousPoly| -> Result<Option<i64>> {
            let mut ws = p.terms().map(|(t, _)| weight(t));
            let Some(first) = ws.next() else { return Ok(None) };
            if ws.any(|w| w != first) {
                return Err(Error::Invariant("action of z is not homogeneous".into()));
            }
            Ok(Some(first))
        };
        while let Some(start) = keys.iter().position(Option::is_none) {
            keys[start] = Some(0);
            let mut stack = vec![start];
            while let Some(j) = stack.pop() {
                let kj = keys[j].unwrap();
                for k in 0..m {
                    // z e_j involves X[k][j] e_k, and z e_k involves X[j][k] e_j
                    let links = [(entry_key(&x[k][j])?, -1i64), (entry_key(&x[j][k])?, 1)];
                    for (w, sign) in links {
                        let Some(w) = w else { continue };
                        let want = kj + sign * w;
                        match keys[k] {
                            None => {
                                keys[k] = Some(want);
                                stack.push(k);
                            }
                            Some(v) if v != want => {
                                return Err(Error::Invariant("inconsistent grading of generators".into()));
                            }
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        let gen_keys: Vec<i64> = keys.into_iter().map(Option::unwrap).collect();

        let mut t_cols = vec![Vec::new(); m];
        for (i, col) in t_cols.iter_mut().enumerate() {
            for k in 0..m {
                let mut t = a.mul(&x[k][i]);
                if k == i {
                    t = t.add(&b);
                }
                for (mono, c) in t.terms() {
                    if mono.0.iter().any(|&e| e > FIELD_MASK as u32 / 2) {
                        return Err(Error::TooLarge("exponent overflow in packed monomial".into()));
                    }
                    col.push((k, pack(&mono.0), c));
                }
            }
        }
        Ok(FreeModel {
            field: f,
            q,
            nv,
            gen_degrees,
            gen_keys,
            var_keys,
            t_cols,
        })
    }

    pub(crate) fn top_degree(&self) -> i64 {
        self.gen_degrees.iter().max().copied().unwrap_or(0) + self.nv as i64 * (i64::from(self.q) - 1)
    }

    /// Basis of degree `d`, sorted by block key.
    fn basis(&self, d: i64) -> Vec<(i64, u64, u32)> {
        let mut out = Vec::new();
        for (i, (&g, &gk)) in self.gen_degrees.iter().zip(&self.gen_keys).enumerate() {
            let e = d - g;
            if e < 0 {
                continue;
            }
            self.enumerate(0, e as u32, 0, gk, i as u32, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn enumerate(&self, v: usize, left: u32, code: u64, key: i64, gen: u32, out: &mut Vec<(i64, u64, u32)>) {
        if v + 1 == self.nv {
            if left < self.q {
                let code = code | u64::from(left) << (BITS * v as u32);
                out.push((key + i64::from(left) * self.var_keys[v], code, gen));
            }
            return;
        }
        let rest = (self.nv - v - 1) as u32 * (self.q - 1);
        let lo = left.saturating_sub(rest);
        for e in lo..self.q.min(left + 1) {
            let c = code | u64::from(e) << (BITS * v as u32);
            self.enumerate(v + 1, left - e, c, key + i64::from(e) * self.var_keys[v], gen, out);
        }
    }

    fn in_range(&self, code: u64) -> bool {
        (0..self.nv).all(|v| (code >> (BITS * v as u32)) & FIELD_MASK < u64::from(self.q))
    }

    pub(crate) fn sweep(&self) -> FreeSweep {
        let top = self.top_degree();
        let q = i64::from(self.q);
        let len = (top + 1) as usize;
        let mut dims = vec![0u64; len];
        let mut x0q_rank = vec![0u64; len];
        let bases: Vec<Vec<(i64, u64, u32)>> = (0..=top).map(|d| self.basis(d)).collect();
        for d in 0..=top {
            dims[d as usize] = bases[d as usize].len() as u64;
        }
        for d in 0..=top - q {
            let src = &bases[d as usize];
            let dst = &bases[(d + q) as usize];
            if src.is_empty() || dst.is_empty() {
                continue;
            }
            let mut rank = 0u64;
            let mut s = 0;
            let mut t = 0;
            while s < src.len() {
                let key = src[s].0;
                let s_end = s + src[s..].iter().take_while(|e| e.0 == key).count();
                while t < dst.len() && dst[t].0 < key {
                    t += 1;
                }
                let t_end = t + dst[t..].iter().take_while(|e| e.0 == key).count();
                if t_end > t {
                    rank += self.block_rank(&src[s..s_end], &dst[t..t_end]) as u64;
                }
                s = s_end;
                t = t_end;
            }
            x0q_rank[d as usize] = rank;
        }
        FreeSweep { dims, x0q_rank }
    }

    fn block_rank(&self, src: &[(i64, u64, u32)], dst: &[(i64, u64, u32)]) -> usize {
        let index: HashMap<(u64, u32), usize> = dst.iter().enumerate().map(|(i, &(_, c, g))| ((c, g), i)).collect();
        let mut ech = Echelon::new(self.field, dst.len());
        let mut row = Vec::new();
        for &(_, code, gen) in src {
            row.clear();
            for &(k, tc, c) in &self.t_cols[gen as usize] {
                let prod = code + tc;
                if self.in_range(prod) {
                    let idx = index[&(prod, k as u32)];
                    row.push((idx, c));
                }
            }
            if !row.is_empty() {
                ech.insert_sparse(&row);
                if ech.rank() == dst.len() {
                    break;
                }
            }
        }
        ech.rank()
    }
}

fn pack(exps: &[u32]) -> u64 {
    exps.iter().enumerate().fold(0, |acc, (v, &e)| acc | u64::from(e) << (BITS * v as u32))
}

/// Block weights of the `P` variables: the torus pairs not touching `x0, x1`
/// (nor `x2` for odd `n`), packed in base 256.
fn var_keys(ctx: &QuadricContext) -> Vec<i64> {
    let nx = ctx.nvars();
    let mut keys = vec![0i64; nx - 1];
    let first = match ctx.parity {
        Parity::Even => 2,
        Parity::Odd => 3,
    };
    let mut coord = 0;
    let mut j = first;
    while j + 1 < nx {
        let w = KEY_BASE.pow(coord);
        keys[j - 1] = w;
        keys[j] = -w;
        coord += 1;
        j += 2;
    }
    keys
}

fn z_relation(co: &Coordinates, ctx: &QuadricContext) -> Result<(HomogeneousPoly, HomogeneousPoly)> {
    let parts = co.split(&co.substitute(&ctx.quadric));
    let c2 = parts[2].coeff(&Monomial::one(co.nv));
    if c2 == 0 {
        return Err(Error::Invariant("quadric is not monic in z".into()));
    }
    let minus_inv = ctx.field.neg(ctx.field.inv(c2));
    Ok((parts[1].scale(minus_inv), parts[0].scale(minus_inv)))
}
