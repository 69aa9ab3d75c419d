//! Matrix factorizations of the quadric and the spinor module they present.

use std::fmt;

use serde::Serialize;

use crate::combinatorics::phi_size;
use crate::error::Result;
use crate::gfp::PrimeField;
use crate::presentation::{Base, Presentation};
use crate::quadric::{quadric_polynomial, HomogeneousPoly, Monomial, Parity, QuadricContext};

/// A linear form `sum c_i x_i` over `GF(p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<u32>,
}

impl LinearForm {
    pub fn zero(nvars: usize) -> Self {
        LinearForm { coeffs: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize, c: u32) -> Self {
        let mut f = Self::zero(nvars);
        f.coeffs[i] = c;
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn widen(&self, nvars: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(nvars, 0);
        LinearForm { coeffs: c }
    }

    fn neg(&self, field: PrimeField) -> Self {
        LinearForm {
            coeffs: self.coeffs.iter().map(|&c| field.neg(c)).collect(),
        }
    }

    pub fn to_poly(&self, field: PrimeField) -> HomogeneousPoly {
        let n = self.coeffs.len();
        HomogeneousPoly::from_terms(
            field,
            n,
            1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (Monomial::var(n, i), i64::from(c))),
        )
    }

    pub fn render(&self, field: PrimeField) -> String {
        self.to_poly(field).to_string()
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// A pair of square matrices of linear forms with `phi psi = psi phi = Q id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFactorization {
    /// Dimension of the quadric being factored (may be `-1` or `0`).
    pub n: i64,
    pub field: PrimeField,
    pub nvars: usize,
    pub size: usize,
    pub phi: Vec<Vec<LinearForm>>,
    pub psi: Vec<Vec<LinearForm>>,
}

type Block = Vec<Vec<LinearForm>>;

fn diag(size: usize, nvars: usize, var: usize) -> Block {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if i == j {
                        LinearForm::var(nvars, var, 1)
                    } else {
                        LinearForm::zero(nvars)
                    }
                })
                .collect()
        })
        .collect()
}

fn assemble(tl: Block, tr: Block, bl: Block, br: Block) -> Block {
    let mut out: Block = tl.into_iter().zip(tr).map(|(mut a, b)| {
        a.extend(b);
        a
    }).collect();
    out.extend(bl.into_iter().zip(br).map(|(mut a, b)| {
        a.extend(b);
        a
    }));
    out
}

fn widen(b: &Block, nvars: usize) -> Block {
    b.iter().map(|r| r.iter().map(|f| f.widen(nvars)).collect()).collect()
}

fn negate(b: &Block, field: PrimeField) -> Block {
    b.iter().map(|r| r.iter().map(|f| f.neg(field)).collect()).collect()
}

fn zeros(rows: usize, cols: usize, nvars: usize) -> Block {
    vec![vec![LinearForm::zero(nvars); cols]; rows]
}

/// The recursive pair `(phi_n, psi_n)` of size `2^floor((n+1)/2)` in the
/// variables `x0, ..., x_{n+1}`.
///
/// ```
/// let mf = qfrob::spinor::phi_psi(1, 3).unwrap();
/// assert_eq!(mf.size, 2);
/// assert_eq!(mf.render_phi(), vec![vec!["x0", "x1"], vec!["x2", "-x0"]]);
/// assert!(mf.verify());
/// ```
pub fn phi_psi(n: i64, p: u64) -> Result<MatrixFactorization> {
    let field = PrimeField::new(p)?;
    if n < -1 {
        return Err(crate::Error::param("n", "factorizations start at n = -1"));
    }
    Ok(build(n, field))
}

fn build(n: i64, field: PrimeField) -> MatrixFactorization {
    let nvars = (n + 2) as usize;
    let (phi, psi) = match n {
        -1 => (vec![vec![LinearForm::var(1, 0, 1)]], vec![vec![LinearForm::var(1, 0, 1)]]),
        0 => (vec![vec![LinearForm::var(2, 0, 1)]], vec![vec![LinearForm::var(2, 1, 1)]]),
        _ => {
            let inner = build(n - 2, field);
            let k = inner.size;
            let phi_in = widen(&inner.phi, nvars);
            let psi_in = widen(&inner.psi, nvars);
            let xn = diag(k, nvars, n as usize);
            let xn1 = diag(k, nvars, n as usize + 1);
            let phi = assemble(phi_in.clone(), xn.clone(), xn1.clone(), negate(&psi_in, field));
            let psi = assemble(psi_in, xn, xn1, negate(&phi_in, field));
            (phi, psi)
        }
    };
    let size = phi.len();
    debug_assert_eq!(size, phi_size(n));
    MatrixFactorization {
        n,
        field,
        nvars,
        size,
        phi,
        psi,
    }
}

/// The factorization whose cokernel is the spinor module: `phi_n` itself for
/// odd `n`, and `phi_n + psi_n` (block diagonal) for even `n`.
///
/// ```
/// assert_eq!(qfrob::spinor::big_phi(3, 2).unwrap().size, 4);
/// assert_eq!(qfrob::spinor::big_phi(4, 2).unwrap().size, 8);
/// assert_eq!(qfrob::spinor::big_phi(5, 7).unwrap().size, 8);
/// ```
pub fn big_phi(n: u32, p: u64) -> Result<MatrixFactorization> {
    if n < 1 {
        return Err(crate::Error::param("n", "the spinor factorization needs n >= 1"));
    }
    let mf = phi_psi(i64::from(n), p)?;
    if Parity::of(i64::from(n)) == Parity::Odd {
        return Ok(mf);
    }
    let k = mf.size;
    let nv = mf.nvars;
    let phi = assemble(mf.phi.clone(), zeros(k, k, nv), zeros(k, k, nv), mf.psi.clone());
    let psi = assemble(mf.psi, zeros(k, k, nv), zeros(k, k, nv), mf.phi);
    Ok(MatrixFactorization {
        n: mf.n,
        field: mf.field,
        nvars: nv,
        size: 2 * k,
        phi,
        psi,
    })
}

fn product(a: &Block, b: &Block, field: PrimeField, nvars: usize) -> Vec<Vec<HomogeneousPoly>> {
    let k = a.len();
    let polys_b: Vec<Vec<HomogeneousPoly>> = b.iter().map(|r| r.iter().map(|f| f.to_poly(field)).collect()).collect();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mut acc = HomogeneousPoly::zero(field, nvars, 2);
                    for (l, f) in a[i].iter().enumerate() {
                        if !f.is_zero() {
                            acc = acc.add(&f.to_poly(field).mul(&polys_b[l][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Exact check of `phi psi = psi phi = quadric * id`.
pub fn verify_factorization(mf: &MatrixFactorization, quadric: &HomogeneousPoly) -> bool {
    if quadric.nvars() != mf.nvars || quadric.degree() != 2 {
        return false;
    }
    let zero = HomogeneousPoly::zero(mf.field, mf.nvars, 2);
    let square = |m: &Block| m.len() == mf.size && m.iter().all(|r| r.len() == mf.size);
    if !square(&mf.phi) || !square(&mf.psi) {
        return false;
    }
    for prod in [
        product(&mf.phi, &mf.psi, mf.field, mf.nvars),
        product(&mf.psi, &mf.phi, mf.field, mf.nvars),
    ] {
        for (i, row) in prod.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let want = if i == j { quadric } else { &zero };
                if e != want {
                    return false;
                }
            }
        }
    }
    true
}

impl MatrixFactorization {
    /// Checks the factorization against the quadric of its own dimension.
    pub fn verify(&self) -> bool {
        verify_factorization(self, &quadric_polynomial(self.n, self.field))
    }

    /// Same factorization with the two matrices exchanged.
    pub fn swapped(&self) -> Self {
        let mut out = self.clone();
        std::mem::swap(&mut out.phi, &mut out.psi);
        out
    }

    pub fn render_phi(&self) -> Vec<Vec<String>> {
        render(&self.phi, self.field)
    }

    pub fn render_psi(&self) -> Vec<Vec<String>> {
        render(&self.psi, self.field)
    }

    pub(crate) fn phi_polys(&self) -> Vec<Vec<HomogeneousPoly>> {
        self.phi.iter().map(|r| r.iter().map(|f| f.to_poly(self.field)).collect()).collect()
    }

    /// Columns of `phi` as relation vectors.
    pub(crate) fn phi_columns(&self) -> Vec<Vec<HomogeneousPoly>> {
        let rows = self.phi_polys();
        (0..self.size).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
    }
}

fn render(b: &Block, field: PrimeField) -> Vec<Vec<String>> {
    b.iter().map(|r| r.iter().map(|f| f.render(field)).collect()).collect()
}

/// JSON-friendly dump of a factorization.
#[derive(Debug, Serialize)]
pub struct MfDump {
    pub n: i64,
    pub p: u32,
    pub size: usize,
    pub phi: Vec<Vec<String>>,
    pub psi: Vec<Vec<String>>,
}

impl From<&MatrixFactorization> for MfDump {
    fn from(mf: &MatrixFactorization) -> Self {
        MfDump {
            n: mf.n,
            p: mf.field.p(),
            size: mf.size,
            phi: mf.render_phi(),
            psi: mf.render_psi(),
        }
    }
}

/// One graded piece of `Z = coker(Phi)`, presented over the polynomial ring.
#[derive(Debug, Clone)]
pub struct ZPiece {
    pub degree: i64,
    /// `m * dim S_{d-1}`.
    pub ambient_dim: usize,
    /// Rank of `Phi` applied to `m * S_{d-2}`.
    pub relation_rank: usize,
    pub quotient_dim: usize,
    /// Coordinates `(generator, monomial)` not hit by a pivot; their images span the quotient.
    pub basis: Vec<(usize, Monomial)>,
}

pub fn z_piece(ctx: &QuadricContext, d: i64) -> Result<ZPiece> {
    let mf = big_phi(ctx.n, ctx.p)?;
    let pres = Presentation::spinor(ctx, &mf, Base::Polynomial)?;
    let piece = pres.piece(d);
    Ok(ZPiece {
        degree: d,
        ambient_dim: piece.ambient,
        relation_rank: piece.ambient - piece.basis.len(),
        quotient_dim: piece.basis.len(),
        basis: piece.basis,
    })
}
