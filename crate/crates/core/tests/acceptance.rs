//! Acceptance suite: one PASS/FAIL line per criterion, exit status nonzero if
//! any criterion fails. Every expected value is recomputed here by code that
//! does not go through the library routine under test.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use qfrob::combinatorics::count_m_basis;
use qfrob::decomposition::{
    coefficients_with, support_window, Bundle, DecompositionTable, Method, SupportWindow,
};
use qfrob::oracle::{DiskCache, ModuleId, Oracle};
use qfrob::quadric::make_context;
use qfrob::spinor::{big_phi, verify_factorization, LinearForm};
use qfrob::quadric::quadric_polynomial;
use qfrob::tilting::{is_tilting_classified, obstruction_report, summand_set, Obstruction};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

/// Gathers failing cases of one criterion.
#[derive(Default)]
struct Failures {
    checked: usize,
    list: Vec<String>,
}

impl Failures {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.list.push(what());
        }
    }

    fn outcome(self, extra: &str) -> Outcome {
        if self.list.is_empty() {
            Outcome::new(true, format!("{} checks{extra}", self.checked))
        } else {
            let shown: Vec<_> = self.list.iter().take(12).cloned().collect();
            let more = self.list.len().saturating_sub(shown.len());
            let tail = if more > 0 { format!("; and {more} more") } else { String::new() };
            Outcome::new(false, format!("{} of {} checks failed{extra}: {}{tail}", self.list.len(), self.checked, shown.join("; ")))
        }
    }
}

// independent arithmetic ------------------------------------------------

fn binom_count(m: i64, k: i64) -> BigInt {
    if k < 0 || m < k {
        return BigInt::from(0);
    }
    binom_poly(m, k)
}

fn binom_poly(x: i64, k: i64) -> BigInt {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k {
        num *= x - i;
        den *= i + 1;
    }
    num / den
}

fn spinor_gens(n: u32) -> i64 {
    1 << (n / 2 + 1)
}

fn dim_r(n: u32, d: i64) -> BigInt {
    let big_n = i64::from(n) + 1;
    binom_count(big_n + d, big_n) - binom_count(big_n + d - 2, big_n)
}

fn dim_z(n: u32, d: i64) -> BigInt {
    BigInt::from(spinor_gens(n)) * binom_count(i64::from(n) + d - 1, i64::from(n))
}

/// Quotient of a module with Hilbert function `base` by a regular sequence
/// of `n + 1` forms of degree `q`.
fn koszul(n: u32, q: i64, d: i64, base: impl Fn(i64) -> BigInt) -> BigInt {
    let k = i64::from(n) + 1;
    (0..=k)
        .map(|i| {
            let term = binom_count(k, i) * base(d - i * q);
            if i % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn chi_o(n: u32, t: i64) -> BigInt {
    let big_n = i64::from(n) + 1;
    binom_poly(big_n + t, big_n) - binom_poly(big_n + t - 2, big_n)
}

fn chi_s(n: u32, t: i64) -> BigInt {
    BigInt::from(spinor_gens(n)) * binom_poly(i64::from(n) + t - 1, i64::from(n))
}

fn rank_holds(t: &DecompositionTable) -> bool {
    let q = BigUint::from(t.p).pow(t.s);
    let srank = BigUint::from(1u32) << (t.n / 2);
    let total: BigUint = t.line.values().sum::<BigUint>() + &srank * t.spinor.values().sum::<BigUint>();
    let mut want = q.pow(t.n);
    if t.bundle == Bundle::S {
        want *= srank;
    }
    total == want
}

fn euler_holds(t: &DecompositionTable) -> bool {
    let n = t.n;
    let q = (t.p as i64).pow(t.s);
    let ni = i64::from(n);
    (-2 * ni..=2 * ni).all(|b| {
        let lhs = match t.bundle {
            Bundle::O => chi_o(n, t.a + b * q),
            Bundle::S => chi_s(n, t.a + b * q),
        };
        let rhs: BigInt = t.line.iter().map(|(&k, m)| BigInt::from(m.clone()) * chi_o(n, k + b)).sum::<BigInt>()
            + t.spinor.iter().map(|(&k, m)| BigInt::from(m.clone()) * chi_s(n, k + b)).sum::<BigInt>();
        lhs == rhs
    })
}

/// Checks `phi psi = psi phi = Q id` coefficient by coefficient.
fn factorization_by_hand(n: u32, p: u64) -> bool {
    let mf = big_phi(n, p).unwrap();
    let nv = n as usize + 2;
    let mut quad = vec![vec![0u64; nv]; nv];
    let start = if n % 2 == 1 {
        quad[0][0] = 1;
        1
    } else {
        0
    };
    let mut i = start;
    while i + 1 < nv {
        quad[i][i + 1] = 1;
        i += 2;
    }
    let prod = |a: &Vec<Vec<LinearForm>>, b: &Vec<Vec<LinearForm>>, i: usize, j: usize| {
        let mut c = vec![vec![0u64; nv]; nv];
        for k in 0..mf.size {
            let (f, g) = (&a[i][k].coeffs, &b[k][j].coeffs);
            for u in 0..nv {
                for v in 0..nv {
                    let (x, y) = (u.min(v), u.max(v));
                    c[x][y] = (c[x][y] + u64::from(f[u]) * u64::from(g[v])) % p;
                }
            }
        }
        c
    };
    let zero = vec![vec![0u64; nv]; nv];
    for i in 0..mf.size {
        for j in 0..mf.size {
            let want = if i == j { &quad } else { &zero };
            if &prod(&mf.phi, &mf.psi, i, j) != want || &prod(&mf.psi, &mf.phi, i, j) != want {
                return false;
            }
        }
    }
    true
}

// grids ------------------------------------------------------------------

fn triangulation_grid() -> Vec<(u32, u64, u32)> {
    let mut g = Vec::new();
    for n in [3, 4, 5] {
        for p in [2, 3, 5] {
            g.push((n, p, 1));
        }
    }
    for n in [3, 4] {
        for p in [2, 3] {
            g.push((n, p, 2));
        }
    }
    g
}

fn oracle_tables(oracle: &Oracle, n: u32, p: u64, s: u32) -> Vec<DecompositionTable> {
    let ctx = make_context(n, p, s).unwrap();
    let q = ctx.q as i64;
    let mut out = Vec::new();
    for bundle in [Bundle::O, Bundle::S] {
        for a in -q..=q {
            out.push(coefficients_with(oracle, &ctx, bundle, a, Method::Oracle).unwrap());
        }
    }
    out
}

fn window_twists(w: SupportWindow, q: i64, a: i64) -> BTreeSet<i64> {
    // brute force over a generous range of t
    (-(20 * q + a.abs())..=(20 * q + a.abs()))
        .filter(|t| w.lo <= a - t * q && a - t * q <= w.hi)
        .collect()
}

fn support_failures(t: &DecompositionTable, f: &mut Failures) {
    let q = (t.p as i64).pow(t.s);
    for (target, support) in [(Bundle::O, t.line_support()), (Bundle::S, t.spinor_support())] {
        let w = support_window(t.n, t.p, t.s, t.bundle, target).unwrap();
        let expect = window_twists(w, q, t.a);
        f.check(support == expect, || {
            let seen: Vec<i64> = support.iter().map(|k| t.a - k * q).collect();
            format!(
                "({},{},{}) {}({})->{target}: a-tq in {seen:?}, window [{},{}]",
                t.n, t.p, t.s, t.bundle, t.a, w.lo, w.hi
            )
        });
    }
}

// criteria ---------------------------------------------------------------

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut f = Failures::default();
    for n in 1..=10u32 {
        for p in [2u64, 3, 5, 7] {
            let mf = big_phi(n, p).unwrap();
            let quad = quadric_polynomial(i64::from(n), mf.field);
            f.check(verify_factorization(&mf, &quad), || format!("verify_factorization n={n} p={p}"));
            f.check(factorization_by_hand(n, p), || format!("hand product n={n} p={p}"));
        }
    }
    let el = start.elapsed();
    f.check(el < Duration::from_secs(5), || format!("took {el:?}"));
    f.outcome(&format!(", {el:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let oracle = Oracle::default();
    let mut f = Failures::default();
    let mut grid: Vec<(u32, u64, u32)> = [3, 4, 5].iter().flat_map(|&n| [(n, 2, 1), (n, 3, 1)]).collect();
    grid.extend([(3, 2, 2), (4, 2, 2)]);
    for (n, p, s) in grid {
        let ctx = make_context(n, p, s).unwrap();
        let q = ctx.q as i64;
        let a = oracle.table(&ctx, ModuleId::A).unwrap();
        let at = oracle.table(&ctx, ModuleId::ATilde).unwrap();
        for d in -q..=(i64::from(n) + 3) * q {
            let want_a = koszul(n, q, d, |e| dim_r(n, e));
            let want_at = koszul(n, q, d, |e| dim_z(n, e));
            f.check(BigInt::from(a.get(d)) == want_a, || format!("A ({n},{p},{s}) d={d}"));
            f.check(BigInt::from(at.get(d)) == want_at, || format!("A_TILDE ({n},{p},{s}) d={d}"));
        }
    }
    let el = start.elapsed();
    f.check(el < Duration::from_secs(120), || format!("took {el:?}"));
    f.outcome(&format!(", {el:.2?}"))
}

fn triangulate(oracle: &Oracle, f: &mut Failures) {
    for (n, p, s) in triangulation_grid() {
        let ctx = make_context(n, p, s).unwrap();
        let q = ctx.q as i64;
        let alt = if s == 1 { Method::ClosedS1 } else { Method::Recursion };
        for bundle in [Bundle::O, Bundle::S] {
            for a in -q..=q {
                let o = coefficients_with(oracle, &ctx, bundle, a, Method::Oracle).unwrap();
                let c = coefficients_with(oracle, &ctx, bundle, a, alt).unwrap();
                f.check(o.line == c.line && o.spinor == c.spinor, || format!("({n},{p},{s}) {bundle}({a}) {alt}"));
            }
        }
    }
}

fn criterion_3() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut f = Failures::default();
    let start = Instant::now();
    triangulate(&Oracle::default().with_cache(DiskCache::new(dir.path())), &mut f);
    let cold = start.elapsed();
    let start = Instant::now();
    triangulate(&Oracle::default().with_cache(DiskCache::new(dir.path())), &mut f);
    let warm = start.elapsed();
    f.check(cold < Duration::from_secs(600), || format!("cold run took {cold:?}"));
    f.check(warm < Duration::from_secs(10), || format!("warm run took {warm:?}"));
    f.outcome(&format!(", cold {cold:.2?}, warm {warm:.2?}"))
}

fn criterion_4() -> Outcome {
    let oracle = Oracle::default();
    let mut f = Failures::default();
    let cases: [(u32, u64, u32, Option<&[i64]>, &[i64]); 4] = [
        (4, 2, 2, Some(&[0, -1, -2, -3]), &[-1]),
        (3, 2, 2, None, &[0, -1]),
        (5, 2, 2, None, &[-1, -2]),
        (4, 2, 3, None, &[-1, -2]),
    ];
    for (n, p, s, line, spinor) in cases {
        let ctx = make_context(n, p, s).unwrap();
        let table = coefficients_with(&oracle, &ctx, Bundle::O, 0, Method::Oracle).unwrap();
        let set = summand_set(n, p, s).unwrap();
        let spinor: BTreeSet<i64> = spinor.iter().copied().collect();
        f.check(table.spinor_support() == spinor, || format!("({n},{p},{s}) oracle spinor {:?}", table.spinor_support()));
        f.check(set.spinor_twists == spinor, || format!("({n},{p},{s}) summand_set spinor {:?}", set.spinor_twists));
        if let Some(line) = line {
            let line: BTreeSet<i64> = line.iter().copied().collect();
            f.check(table.line_support() == line, || format!("({n},{p},{s}) oracle line {:?}", table.line_support()));
            f.check(set.line_twists == line, || format!("({n},{p},{s}) summand_set line {:?}", set.line_twists));
        }
    }
    f.outcome("")
}

/// Tables for `a` in one full residue system mod `q`, from closed forms and
/// composition.
fn window_only_tables(oracle: &Oracle, n: u32, p: u64, s: u32) -> Vec<DecompositionTable> {
    let ctx = make_context(n, p, s).unwrap();
    let method = if s == 1 { Method::ClosedS1 } else { Method::Recursion };
    let mut out = Vec::new();
    for bundle in [Bundle::O, Bundle::S] {
        for a in 0..ctx.q as i64 {
            out.push(coefficients_with(oracle, &ctx, bundle, a, method).unwrap());
        }
    }
    out
}

fn window_only_grid() -> Vec<(u32, u64, u32)> {
    let mut g = Vec::new();
    for n in 3..=8 {
        for p in [2, 3, 5] {
            for s in 1..=3 {
                g.push((n, p, s));
            }
        }
    }
    g
}

fn criterion_5() -> Outcome {
    let oracle = Oracle::default();
    let mut f = Failures::default();
    let mut by_kind: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut tally = |t: &DecompositionTable, f: &mut Failures| {
        let before = f.list.len();
        support_failures(t, f);
        let kind = format!("p{} s{} source {}", if t.p == 2 { "=2" } else { ">2" }, if t.s == 1 { "=1" } else { ">=2" }, t.bundle);
        let e = by_kind.entry(kind).or_default();
        e.0 += 1;
        e.1 += usize::from(f.list.len() > before);
    };
    for (n, p, s) in triangulation_grid() {
        for t in oracle_tables(&oracle, n, p, s) {
            tally(&t, &mut f);
        }
    }
    for (n, p, s) in window_only_grid() {
        for t in window_only_tables(&oracle, n, p, s) {
            tally(&t, &mut f);
        }
    }
    let summary: Vec<String> = by_kind
        .iter()
        .map(|(k, (total, bad))| format!("{k}: {bad}/{total} tables off"))
        .collect();
    f.outcome(&format!(" [{}]", summary.join(", ")))
}

fn criterion_6() -> Outcome {
    let oracle = Oracle::default();
    let mut f = Failures::default();
    for (n, p, s) in triangulation_grid() {
        let ctx = make_context(n, p, s).unwrap();
        let q = ctx.q as i64;
        let nq = i64::from(n) * (q - 1);
        let tab = |m| oracle.table(&ctx, m).unwrap();
        let mirrors = [
            (ModuleId::C, nq),
            (ModuleId::CTilde, nq + 1),
            (ModuleId::M, nq + q),
            (ModuleId::MTilde, nq + q + 1),
            (ModuleId::A, nq + q),
            (ModuleId::ATilde, nq + q + 1),
        ];
        for (m, c) in mirrors {
            let t = tab(m);
            for d in -2 * q..=c + 2 * q {
                f.check(t.get(d) == t.get(c - d), || format!("({n},{p},{s}) {m} at {d}"));
            }
        }
        let ni = i64::from(n);
        let get = |b: Bundle, a: i64| coefficients_with(&oracle, &ctx, b, a, Method::Oracle).unwrap();
        for a in -q..=q {
            let (o, od) = (get(Bundle::O, a), get(Bundle::O, -a - ni));
            let (sp, sd) = (get(Bundle::S, a), get(Bundle::S, -a + 1 - ni));
            for t in -3 * ni - 3..=3 * ni + 3 {
                f.check(o.line_mult(t) == od.line_mult(-t - ni), || format!("({n},{p},{s}) beta t={t} a={a}"));
                f.check(o.spinor_mult(t) == od.spinor_mult(-t + 1 - ni), || format!("({n},{p},{s}) gamma t={t} a={a}"));
                f.check(sp.line_mult(t) == sd.line_mult(-t - ni), || format!("({n},{p},{s}) delta t={t} a={a}"));
                f.check(sp.spinor_mult(t) == sd.spinor_mult(-t + 1 - ni), || format!("({n},{p},{s}) epsilon t={t} a={a}"));
            }
        }
    }
    f.outcome("")
}

fn criterion_7() -> Outcome {
    let oracle = Oracle::default();
    let mut f = Failures::default();
    let mut tables = Vec::new();
    for (n, p, s) in triangulation_grid() {
        tables.extend(oracle_tables(&oracle, n, p, s));
        let ctx = make_context(n, p, s).unwrap();
        let alt = if s == 1 { Method::ClosedS1 } else { Method::Recursion };
        let q = ctx.q as i64;
        for bundle in [Bundle::O, Bundle::S] {
            for a in -q..=q {
                tables.push(coefficients_with(&oracle, &ctx, bundle, a, alt).unwrap());
            }
        }
    }
    for (n, p, s) in window_only_grid() {
        tables.extend(window_only_tables(&oracle, n, p, s));
    }
    for t in &tables {
        let tag = || format!("({},{},{}) {}({}) {}", t.n, t.p, t.s, t.bundle, t.a, t.method);
        f.check(rank_holds(t), || format!("rank {}", tag()));
        f.check(euler_holds(t), || format!("euler {}", tag()));
    }
    f.outcome(&format!(" over {} tables", tables.len()))
}

fn criterion_8() -> Outcome {
    let mut f = Failures::default();
    for n in 3..=8u32 {
        for p in [2u64, 3, 5, 7] {
            for s in 1..=3u32 {
                let q = p.pow(s);
                let n64 = u64::from(n);
                let expected = match s {
                    1 => p > n64,
                    2 if n == 4 && p <= 3 => true,
                    _ => n % 2 == 1 && p >= n64,
                };
                f.check(is_tilting_classified(n, p, s) == expected, || format!("classification ({n},{p},{s})"));
                let v = obstruction_report(n, p, s).unwrap();
                f.check(v.consistent, || format!("inconsistent ({n},{p},{s})"));
                if expected {
                    f.check(v.obstructions.is_empty(), || format!("obstruction on tilting case ({n},{p},{s})"));
                } else {
                    f.check(!v.obstructions.is_empty() || v.unexplained, || format!("no evidence ({n},{p},{s})"));
                }
                let range = v.obstructions.contains(&Obstruction::InsufficientLineRange);
                f.check(range == (n64 > q), || format!("line range rule ({n},{p},{s})"));
                let tw = &v.summands.spinor_twists;
                let consecutive = tw.iter().any(|t| tw.contains(&(t + 1)));
                f.check(
                    consecutive == v.obstructions.contains(&Obstruction::ConsecutiveSpinorTwists),
                    || format!("consecutive rule ({n},{p},{s})"),
                );
            }
        }
    }
    for (n, p, s) in [(3, 2, 2), (5, 2, 2), (4, 2, 3)] {
        let v = obstruction_report(n, p, s).unwrap();
        f.check(v.obstructions.contains(&Obstruction::ConsecutiveSpinorTwists), || {
            format!("CONSECUTIVE_SPINOR_TWISTS missing on ({n},{p},{s})")
        });
    }
    f.outcome("")
}

fn spinor_indicator(n: u32, d: i64) -> bool {
    let h = i64::from(n / 2);
    d == h + 1 || (n % 2 == 1 && d == h + 2)
}

fn criterion_9() -> Outcome {
    let oracle = Oracle::default();
    let mut f = Failures::default();
    for n in 3..=8u32 {
        let m = spinor_gens(n) as u64;
        for d in -2..=i64::from(n) + 4 {
            let want = if spinor_indicator(n, d) { m } else { 0 };
            f.check(count_m_basis(n, d) == want, || format!("count n={n} d={d}"));
        }
    }
    for n in [3, 4, 5] {
        let ctx = make_context(n, 2, 1).unwrap();
        for a in -6..=6 {
            let t = coefficients_with(&oracle, &ctx, Bundle::O, a, Method::Oracle).unwrap();
            for tt in -8..=8 {
                let want = u32::from(spinor_indicator(n, a - 2 * (tt - 1)));
                f.check(t.spinor_mult(tt) == BigUint::from(want), || format!("oracle n={n} a={a} t={tt}"));
            }
        }
    }
    f.outcome("")
}

fn criterion_10() -> Outcome {
    let mut f = Failures::default();
    let mut times = Vec::new();
    for ((n, p, s), limit) in [((4, 2, 2), 60), ((3, 3, 1), 5)] {
        let oracle = Oracle::default();
        let ctx = make_context(n, p, s).unwrap();
        let start = Instant::now();
        for m in ModuleId::ALL {
            oracle.table(&ctx, m).unwrap();
        }
        let el = start.elapsed();
        times.push(format!("({n},{p},{s}) {el:.2?}"));
        f.check(el < Duration::from_secs(limit), || format!("({n},{p},{s}) took {el:?}"));
    }
    f.outcome(&format!(", {}", times.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("matrix factorization identity", criterion_1),
        ("Koszul formula equivalence", criterion_2),
        ("route triangulation", criterion_3),
        ("stated summand sets", criterion_4),
        ("supports equal vanishing windows", criterion_5),
        ("symmetry and duality", criterion_6),
        ("rank and Euler identities", criterion_7),
        ("tilting classification", criterion_8),
        ("p = 2 spinor multiplicities", criterion_9),
        ("performance envelope", criterion_10),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::new(false, format!("panicked: {msg}"))
        });
        all &= outcome.pass;
        let mark = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark}: {name} ({})", i + 1, outcome.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
