//! Exact dimensions of the graded modules behind the push-forward
//! multiplicities, computed by linear algebra over `GF(p)`.
//!
//! Over `R = S/(Q)` and the spinor module `Z = coker(Phi)`:
//!
//! * `A = R/(x0^q + x1^q, x2^q, ..., xN^q)` and `Ã` the same over `Z`,
//! * `C = x0^q A`, measured as the rank of `x0^q : A_d -> A_{d+q}`,
//! * `B = A/x0^q A`, so `B_d = A_d - C_{d-q}`,
//! * `M = (0 : x0^q)/x0^q A`, so `M_d = A_d - C_d - C_{d-q}`,
//! * `D = S/(x0^q, ..., xN^q)`.

mod cache;
mod normalized;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfp::{image_quotient_dim, FieldMatrix};
use crate::presentation::{Base, Presentation};
use crate::quadric::{mult_matrix, r_basis, HomogeneousPoly, Monomial, QuadricContext};
use crate::spinor::big_phi;

pub use cache::{default_cache_dir, DiskCache};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModuleId {
    A,
    B,
    C,
    D,
    M,
    #[serde(rename = "A_TILDE")]
    ATilde,
    #[serde(rename = "B_TILDE")]
    BTilde,
    #[serde(rename = "C_TILDE")]
    CTilde,
    #[serde(rename = "M_TILDE")]
    MTilde,
}

impl ModuleId {
    pub const ALL: [ModuleId; 9] = [
        ModuleId::A,
        ModuleId::B,
        ModuleId::C,
        ModuleId::D,
        ModuleId::M,
        ModuleId::ATilde,
        ModuleId::BTilde,
        ModuleId::CTilde,
        ModuleId::MTilde,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModuleId::A => "A",
            ModuleId::B => "B",
            ModuleId::C => "C",
            ModuleId::D => "D",
            ModuleId::M => "M",
            ModuleId::ATilde => "A_TILDE",
            ModuleId::BTilde => "B_TILDE",
            ModuleId::CTilde => "C_TILDE",
            ModuleId::MTilde => "M_TILDE",
        }
    }

    /// Modules built over `Z` rather than `R`.
    pub fn is_tilde(self) -> bool {
        matches!(self, ModuleId::ATilde | ModuleId::BTilde | ModuleId::CTilde | ModuleId::MTilde)
    }
}

impl fmt::Display for ModuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace('-', "_");
        ModuleId::ALL
            .into_iter()
            .find(|m| m.as_str() == up || (m.is_tilde() && up == format!("{}TILDE", &m.as_str()[..1])))
            .ok_or_else(|| Error::param("module", format!("unknown module `{s}`")))
    }
}

/// One graded module over a given quadric.
#[derive(Debug, Clone)]
pub struct GradedPieceSpec {
    pub module: ModuleId,
    pub ctx: QuadricContext,
}

impl GradedPieceSpec {
    pub fn new(module: ModuleId, ctx: &QuadricContext) -> Self {
        GradedPieceSpec { module, ctx: ctx.clone() }
    }
}

/// Nonzero dimensions by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub n: u32,
    pub p: u64,
    pub s: u32,
    pub module: ModuleId,
    pub dims: BTreeMap<i64, u64>,
}

impl DimTable {
    fn from_vec(ctx: &QuadricContext, module: ModuleId, dims: impl IntoIterator<Item = (i64, u64)>) -> Self {
        DimTable {
            n: ctx.n,
            p: ctx.p,
            s: ctx.s,
            module,
            dims: dims.into_iter().filter(|&(_, v)| v != 0).collect(),
        }
    }

    pub fn get(&self, d: i64) -> u64 {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.dims.values().sum()
    }

    /// Smallest and largest degree with a nonzero piece.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.dims.keys().next()?, *self.dims.keys().next_back()?))
    }
}

/// How the pieces of `A` and `Ã` are computed. All routes give the same
/// numbers; the slower ones exist as cross-checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Route {
    /// Free model over a Noether normalization with monomial truncation.
    #[default]
    Normalized,
    /// Presentations over `S/(x0^q + x1^q, x2^q, ..., xN^q)`.
    Presented,
    /// Rank computations in the standard monomial bases of `R`, with the
    /// spinor side presented over `S` together with the `q`-th power ideal.
    CoordinateRing,
}

/// Largest degree ever computed; every module vanishes beyond it.
pub fn degree_cap(ctx: &QuadricContext) -> i64 {
    let q = ctx.q as i64;
    i64::from(ctx.n) * (q - 1) + 2 * q + 2
}

type TableKey = (u32, u64, u32, ModuleId);

/// Computes and memoizes dimension tables, optionally backed by a disk cache.
pub struct Oracle {
    route: Route,
    cache: Option<DiskCache>,
    memo: Mutex<HashMap<TableKey, Arc<DimTable>>>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new(Route::Normalized)
    }
}

impl Oracle {
    pub fn new(route: Route) -> Self {
        Oracle {
            route,
            cache: None,
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// Reads and writes tables under `cache`. The files do not record the
    /// route, since every route yields the same tables.
    pub fn with_cache(mut self, cache: DiskCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn cache(&self) -> Option<&DiskCache> {
        self.cache.as_ref()
    }

    fn key(ctx: &QuadricContext, module: ModuleId) -> TableKey {
        (ctx.n, ctx.p, ctx.s, module)
    }

    fn memo(&self) -> std::sync::MutexGuard<'_, HashMap<TableKey, Arc<DimTable>>> {
        self.memo.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn table(&self, ctx: &QuadricContext, module: ModuleId) -> Result<Arc<DimTable>> {
        let key = Self::key(ctx, module);
        if let Some(t) = self.memo().get(&key) {
            return Ok(Arc::clone(t));
        }
        if let Some(cache) = &self.cache {
            if let Some(t) = cache.load(ctx.n, ctx.p, ctx.s, module)? {
                let t = Arc::new(t);
                self.memo().insert(key, Arc::clone(&t));
                return Ok(t);
            }
        }
        let computed = self.compute(ctx, module)?;
        let mut found = None;
        for t in computed {
            if let Some(cache) = &self.cache {
                cache.store(&t)?;
            }
            let t = Arc::new(t);
            if t.module == module {
                found = Some(Arc::clone(&t));
            }
            self.memo().insert(Self::key(ctx, t.module), t);
        }
        found.ok_or_else(|| Error::Invariant(format!("table {module} was not produced")))
    }

    /// `dim` of the degree `d` piece; zero outside `[0, degree_cap]`.
    pub fn dim(&self, ctx: &QuadricContext, module: ModuleId, d: i64) -> Result<u64> {
        if d < 0 || d > degree_cap(ctx) {
            return Ok(0);
        }
        Ok(self.table(ctx, module)?.get(d))
    }

    /// Produces the requested table together with its siblings from the same
    /// sweep.
    fn compute(&self, ctx: &QuadricContext, module: ModuleId) -> Result<Vec<DimTable>> {
        if module == ModuleId::D {
            return Ok(vec![d_table(ctx)]);
        }
        let tilde = module.is_tilde();
        let (dims, ranks) = match (self.route, tilde) {
            (Route::Normalized, false) => split(normalized::FreeModel::ring(ctx)?.sweep()),
            (Route::Normalized, true) => split(normalized::FreeModel::spinor(ctx, &big_phi(ctx.n, ctx.p)?)?.sweep()),
            (Route::Presented, _) => {
                let pres = if tilde {
                    Presentation::spinor(ctx, &big_phi(ctx.n, ctx.p)?, Base::Truncated)?
                } else {
                    Presentation::ring(ctx, Base::Truncated)
                };
                let sw = pres.sweep(sweep_top(ctx));
                (sw.dims, sw.x0q_rank)
            }
            (Route::CoordinateRing, false) => coordinate_ring_sweep(ctx)?,
            (Route::CoordinateRing, true) => {
                let pres = Presentation::spinor(ctx, &big_phi(ctx.n, ctx.p)?, Base::Polynomial)?.with_frobenius_ideal()?;
                let sw = pres.sweep(sweep_top(ctx));
                (sw.dims, sw.x0q_rank)
            }
        };
        family(ctx, tilde, &dims, &ranks)
    }
}

fn split(sw: normalized::FreeSweep) -> (Vec<u64>, Vec<u64>) {
    (sw.dims, sw.x0q_rank)
}

/// Covers the top degree of `Ã`, one above that of `A`.
fn sweep_top(ctx: &QuadricContext) -> i64 {
    let q = ctx.q as i64;
    (i64::from(ctx.n) + 1) * (q - 1) + 1
}

/// `A, B, C, M` (or their tilde versions) from the Hilbert function of `A`
/// and the ranks of `x0^q`.
fn family(ctx: &QuadricContext, tilde: bool, dims: &[u64], ranks: &[u64]) -> Result<Vec<DimTable>> {
    let q = ctx.q as i64;
    let at = |v: &[u64], d: i64| if d < 0 { 0 } else { v.get(d as usize).copied().unwrap_or(0) };
    let top = dims.len() as i64 + q;
    let diff = |d: i64, x: u64, y: u64| {
        x.checked_sub(y)
            .map(|v| (d, v))
            .ok_or_else(|| Error::Invariant(format!("rank of x0^q exceeds the piece dimension in degree {d}")))
    };
    let a: Vec<_> = (0..=top).map(|d| (d, at(dims, d))).collect();
    let c: Vec<_> = (0..=top).map(|d| (d, at(ranks, d))).collect();
    let b = (0..=top)
        .map(|d| diff(d, at(dims, d), at(ranks, d - q)))
        .collect::<Result<Vec<_>>>()?;
    let m = (0..=top)
        .map(|d| diff(d, at(dims, d), at(ranks, d) + at(ranks, d - q)))
        .collect::<Result<Vec<_>>>()?;
    let ids = if tilde {
        [ModuleId::ATilde, ModuleId::BTilde, ModuleId::CTilde, ModuleId::MTilde]
    } else {
        [ModuleId::A, ModuleId::B, ModuleId::C, ModuleId::M]
    };
    Ok(vec![
        DimTable::from_vec(ctx, ids[0], a),
        DimTable::from_vec(ctx, ids[1], b),
        DimTable::from_vec(ctx, ids[2], c),
        DimTable::from_vec(ctx, ids[3], m),
    ])
}

/// Monomials in `n + 2` variables with every exponent below `q`, by degree.
fn d_table(ctx: &QuadricContext) -> DimTable {
    let q = ctx.q as usize;
    let mut counts = vec![1u64];
    for _ in 0..ctx.nvars() {
        let mut next = vec![0u64; counts.len() + q - 1];
        for (d, &c) in counts.iter().enumerate() {
            for e in 0..q {
                next[d + e] += c;
            }
        }
        counts = next;
    }
    DimTable::from_vec(ctx, ModuleId::D, counts.into_iter().enumerate().map(|(d, c)| (d as i64, c)))
}

/// Ranks of generator multiplication matrices in the standard monomial bases
/// of `R`. Cubic in `dim R_d`; meant for small cases.
fn coordinate_ring_sweep(ctx: &QuadricContext) -> Result<(Vec<u64>, Vec<u64>)> {
    let q = ctx.q as i64;
    let nv = ctx.nvars();
    let pow = |v: usize| {
        let mut e = vec![0; nv];
        e[v] = ctx.q as u32;
        HomogeneousPoly::monomial(ctx.field, Monomial(e), 1)
    };
    let mut gens = vec![pow(0).add(&pow(1))];
    gens.extend((2..nv).map(pow));
    let x0q = pow(0);
    let ideal = |d: i64| -> Result<FieldMatrix> {
        let rows = r_basis(ctx, d).len();
        let mut m = FieldMatrix::zeros(ctx.field, rows, 0);
        if d >= q {
            for g in &gens {
                m = m.hstack(&mult_matrix(ctx, g, d - q))?;
            }
        }
        Ok(m)
    };
    let top = sweep_top(ctx);
    let ideals = (0..=top + q).map(ideal).collect::<Result<Vec<_>>>()?;
    let mut dims = Vec::with_capacity(top as usize + 1);
    let mut ranks = Vec::with_capacity(top as usize + 1);
    for d in 0..=top {
        let i_d = &ideals[d as usize];
        dims.push((i_d.rows() - i_d.rank()) as u64);
        let image = mult_matrix(ctx, &x0q, d);
        ranks.push(image_quotient_dim(&image, &ideals[(d + q) as usize])? as u64);
    }
    Ok((dims, ranks))
}

/// Process-wide oracle on the default route, without a disk cache.
pub fn shared() -> &'static Oracle {
    static GLOBAL: OnceLock<Oracle> = OnceLock::new();
    GLOBAL.get_or_init(Oracle::default)
}

/// `dim` of one graded piece, memoized in a process-wide oracle.
pub fn dim_piece(piece: &GradedPieceSpec, d: i64) -> Result<u64> {
    shared().dim(&piece.ctx, piece.module, d)
}

/// Full dimension table, memoized in a process-wide oracle.
pub fn dim_table(piece: &GradedPieceSpec) -> Result<Arc<DimTable>> {
    shared().table(&piece.ctx, piece.module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{dim_a_formula, dim_atilde_formula, dim_d_formula, to_u64};
    use crate::quadric::make_context;

    #[test]
    fn module_names_round_trip() {
        for m in ModuleId::ALL {
            assert_eq!(m.as_str().parse::<ModuleId>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{m}\""));
        }
        assert_eq!("m_tilde".parse::<ModuleId>().unwrap(), ModuleId::MTilde);
        assert_eq!("Atilde".parse::<ModuleId>().unwrap(), ModuleId::ATilde);
        assert!("E".parse::<ModuleId>().is_err());
    }

    #[test]
    fn examples() {
        let ctx = make_context(3, 3, 1).unwrap();
        let piece = |m| GradedPieceSpec::new(m, &ctx);
        assert_eq!(dim_piece(&piece(ModuleId::A), 0).unwrap(), 1);
        assert_eq!(dim_piece(&piece(ModuleId::M), 4).unwrap(), 16);
        assert_eq!(dim_piece(&piece(ModuleId::C), 3).unwrap(), 25);
        let b = dim_table(&piece(ModuleId::B)).unwrap();
        assert_eq!((b.get(0), b.get(1)), (1, 5));
        assert_eq!(dim_piece(&piece(ModuleId::A), -1).unwrap(), 0);
        assert_eq!(dim_piece(&piece(ModuleId::A), 1000).unwrap(), 0);

        let ctx = make_context(3, 2, 1).unwrap();
        let d = dim_table(&GradedPieceSpec::new(ModuleId::D, &ctx)).unwrap();
        assert_eq!(d.total(), 32);
        let (lo, hi) = d.support().unwrap();
        assert!((lo..=hi).all(|x| d.get(x) == d.get(lo + hi - x)));
    }

    #[test]
    fn d_matches_formula() {
        for (n, p, s) in [(3, 2, 1), (4, 3, 1), (3, 2, 2), (5, 5, 1)] {
            let ctx = make_context(n, p, s).unwrap();
            let t = dim_table(&GradedPieceSpec::new(ModuleId::D, &ctx)).unwrap();
            for d in -2..=degree_cap(&ctx) + 2 {
                assert_eq!(t.get(d), to_u64(&dim_d_formula(n + 1, ctx.q, d)));
            }
        }
    }

    #[test]
    fn routes_agree() {
        for (n, p, s) in [(3, 2, 1), (3, 3, 1), (4, 2, 1), (3, 2, 2)] {
            let ctx = make_context(n, p, s).unwrap();
            let oracles = [Route::Normalized, Route::Presented, Route::CoordinateRing].map(Oracle::new);
            for m in ModuleId::ALL {
                let reference = oracles[0].table(&ctx, m).unwrap();
                for o in &oracles[1..] {
                    assert_eq!(*o.table(&ctx, m).unwrap(), *reference, "{:?} {m} on {n},{p},{s}", o.route());
                }
            }
            for d in 0..=degree_cap(&ctx) {
                assert_eq!(oracles[0].dim(&ctx, ModuleId::A, d).unwrap(), to_u64(&dim_a_formula(n, ctx.q, d)));
                assert_eq!(
                    oracles[0].dim(&ctx, ModuleId::ATilde, d).unwrap(),
                    to_u64(&dim_atilde_formula(n, ctx.q, d))
                );
            }
        }
    }

    #[test]
    fn disk_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = make_context(3, 3, 1).unwrap();
        let cold = Oracle::default().with_cache(DiskCache::new(dir.path()));
        let t = cold.table(&ctx, ModuleId::M).unwrap();
        let path = dir.path().join("3-3-1-M.json");
        let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(json["module"], "M");
        assert_eq!(json["dims"]["4"], 16);
        assert!(dir.path().join("3-3-1-C.json").exists());

        let warm = Oracle::new(Route::CoordinateRing).with_cache(DiskCache::new(dir.path()));
        assert_eq!(*warm.table(&ctx, ModuleId::M).unwrap(), *t);

        std::fs::write(&path, "{").unwrap();
        let broken = Oracle::default().with_cache(DiskCache::new(dir.path()));
        assert!(matches!(broken.table(&ctx, ModuleId::M), Err(Error::CacheFormat { .. })));
    }
}
