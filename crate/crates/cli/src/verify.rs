use std::ops::RangeInclusive;

use qfrob::combinatorics::{dim_a_formula, dim_atilde_formula};
use qfrob::decomposition::{
    coefficients_with, dual_pair_holds, supports_match_windows, verify_euler, verify_rank, verify_sections, Bundle,
    Method,
};
use qfrob::oracle::{degree_cap, ModuleId, Oracle};
use qfrob::quadric::make_context;

use crate::Failure;

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

pub fn tiny_grid() -> Vec<(u32, u64, u32)> {
    vec![(3, 2, 1), (3, 3, 1), (3, 2, 2), (3, 3, 2)]
}

pub fn small_grid() -> Vec<(u32, u64, u32)> {
    let mut grid = Vec::new();
    for n in [3, 4, 5] {
        for p in [2, 3, 5] {
            grid.push((n, p, 1));
        }
    }
    for n in [3, 4] {
        for p in [2, 3] {
            grid.push((n, p, 2));
        }
    }
    grid
}

/// Collects failures of one property, keeping the first few for the report.
struct Tally {
    name: String,
    total: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: String) -> Self {
        Tally {
            name,
            total: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self) -> Check {
        let pass = self.failures.is_empty();
        let detail = if pass {
            format!("{} cases", self.total)
        } else {
            let shown: Vec<_> = self.failures.iter().take(6).cloned().collect();
            let more = self.failures.len().saturating_sub(shown.len());
            let tail = if more > 0 { format!(" and {more} more") } else { String::new() };
            format!("{} of {} failed: {}{tail}", self.failures.len(), self.total, shown.join("; "))
        };
        Check {
            name: self.name,
            pass,
            detail,
        }
    }
}

pub fn run_case(
    oracle: &Oracle,
    n: u32,
    p: u64,
    s: u32,
    b_range: RangeInclusive<i64>,
) -> Result<Vec<Check>, Failure> {
    let ctx = make_context(n, p, s)?;
    let q = ctx.q as i64;
    let tag = format!("n={n} p={p} s={s}");
    let alt = if s == 1 { Method::ClosedS1 } else { Method::Recursion };
    let mut routes = Tally::new(format!("{tag}: oracle agrees with {alt}"));
    let mut rank = Tally::new(format!("{tag}: rank identity"));
    let mut euler = Tally::new(format!("{tag}: Euler identity"));
    let mut sections = Tally::new(format!("{tag}: section identity"));
    let mut windows = Tally::new(format!("{tag}: supports equal windows"));
    let mut duality = Tally::new(format!("{tag}: Serre duality"));
    for bundle in [Bundle::O, Bundle::S] {
        for a in -q..=q {
            let case = || format!("{bundle}({a})");
            let t = coefficients_with(oracle, &ctx, bundle, a, Method::Oracle)?;
            let other = coefficients_with(oracle, &ctx, bundle, a, alt)?;
            routes.record(t.same_multiplicities(&other), case);
            rank.record(verify_rank(&t), case);
            euler.record(verify_euler(&t, b_range.clone()), case);
            sections.record(verify_sections(&t, b_range.clone()), case);
            windows.record(supports_match_windows(&t)?, case);
            let dual_a = match bundle {
                Bundle::O => -a - i64::from(n),
                Bundle::S => -a + 1 - i64::from(n),
            };
            let d = coefficients_with(oracle, &ctx, bundle, dual_a, Method::Oracle)?;
            duality.record(dual_pair_holds(&t, &d), case);
        }
    }

    let mut modules = Tally::new(format!("{tag}: A and A_TILDE match Koszul counts"));
    let mut palindromes = Tally::new(format!("{tag}: A, C, M and tilde palindromes"));
    let mut splitting = Tally::new(format!("{tag}: dim M = dim B - dim C"));
    let nq = i64::from(n) * (q - 1);
    let table = |m| oracle.table(&ctx, m);
    let (a_t, c_t, m_t, b_t) = (table(ModuleId::A)?, table(ModuleId::C)?, table(ModuleId::M)?, table(ModuleId::B)?);
    let (at_t, ct_t, mt_t, bt_t) = (
        table(ModuleId::ATilde)?,
        table(ModuleId::CTilde)?,
        table(ModuleId::MTilde)?,
        table(ModuleId::BTilde)?,
    );
    for d in -2..=degree_cap(&ctx) + 2 {
        let at = |what: &str| format!("{what} at d={d}");
        modules.record(dim_a_formula(n, ctx.q, d) == a_t.get(d).into(), || at("A"));
        modules.record(dim_atilde_formula(n, ctx.q, d) == at_t.get(d).into(), || at("A_TILDE"));
        palindromes.record(a_t.get(d) == a_t.get(nq + q - d), || at("A"));
        palindromes.record(at_t.get(d) == at_t.get(nq + q + 1 - d), || at("A_TILDE"));
        palindromes.record(c_t.get(d) == c_t.get(nq - d), || at("C"));
        palindromes.record(ct_t.get(d) == ct_t.get(nq + 1 - d), || at("C_TILDE"));
        palindromes.record(m_t.get(d) == m_t.get(nq + q - d), || at("M"));
        palindromes.record(mt_t.get(d) == mt_t.get(nq + q + 1 - d), || at("M_TILDE"));
        splitting.record(m_t.get(d) + c_t.get(d) == b_t.get(d), || at("M"));
        splitting.record(mt_t.get(d) + ct_t.get(d) == bt_t.get(d), || at("M_TILDE"));
    }

    Ok([routes, rank, euler, sections, windows, duality, modules, palindromes, splitting]
        .into_iter()
        .map(Tally::finish)
        .collect())
}
