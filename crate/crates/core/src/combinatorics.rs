//! Closed-form dimension counts and Hilbert polynomials.
//!
//! Everything here is exact: values are [`BigInt`] and no intermediate
//! result is ever rounded. Binomial coefficients come in two flavours (see
//! [`BinomialMode`]) and every call site states which one it means.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// How a binomial coefficient `binom(m, k)` treats small or negative `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinomialMode {
    /// Counting convention: zero whenever `m < k`, negative `m` included.
    Count,
    /// Polynomial convention: `m (m-1) ... (m-k+1) / k!` for every integer `m`.
    Polynomial,
}

/// Binomial coefficient in the requested convention.
///
/// ```
/// use qfrob::combinatorics::{binom, BinomialMode};
///
/// assert_eq!(binom(5, 2, BinomialMode::Count), 10.into());
/// assert_eq!(binom(-1, 4, BinomialMode::Count), 0.into());
/// assert_eq!(binom(-1, 4, BinomialMode::Polynomial), 1.into());
/// ```
pub fn binom(m: i64, k: u32, mode: BinomialMode) -> BigInt {
    if mode == BinomialMode::Count && m < i64::from(k) {
        return BigInt::zero();
    }
    let k64 = i64::from(k);
    if m >= 0 && m < k64 {
        return BigInt::zero();
    }
    // use the shorter side of the symmetry when it is valid
    let k_eff = if m >= k64 && m - k64 < k64 { m - k64 } else { k64 };
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k_eff {
        num *= m - i;
        den *= i + 1;
    }
    num / den
}

/// `2^e` as a big integer.
pub fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

/// Size of the matrices `phi_n`, `psi_n`: `2^floor((n+1)/2)`.
pub fn phi_size(n: i64) -> usize {
    1usize << ((n + 1).max(0) / 2)
}

/// Number of generators of the spinor module, `2^(floor(n/2)+1)`.
pub fn spinor_module_size(n: u32) -> u64 {
    1u64 << (n / 2 + 1)
}

/// Rank of the spinor bundle, `2^floor(n/2)`.
pub fn spinor_rank(n: u32) -> u64 {
    1u64 << (n / 2)
}

/// Euler characteristic `chi(O_Q(t))` of the `n`-dimensional quadric.
pub fn hilbert_q(n: u32, t: i64) -> BigInt {
    let big_n = n + 1;
    let nn = i64::from(big_n);
    binom(nn + t, big_n, BinomialMode::Polynomial) - binom(nn + t - 2, big_n, BinomialMode::Polynomial)
}

/// Euler characteristic `chi(S(t))` of the spinor bundle.
pub fn hilbert_s(n: u32, t: i64) -> BigInt {
    pow2(n / 2 + 1) * binom(i64::from(n) + t - 1, n, BinomialMode::Polynomial)
}

/// Dimension of the degree `d` piece of the coordinate ring of the quadric.
pub fn dim_r(n: u32, d: i64) -> BigInt {
    let big_n = n + 1;
    let nn = i64::from(big_n);
    binom(nn + d, big_n, BinomialMode::Count) - binom(nn + d - 2, big_n, BinomialMode::Count)
}

/// Dimension of the degree `d` piece of the spinor module `Z`.
pub fn dim_z(n: u32, d: i64) -> BigInt {
    pow2(n / 2 + 1) * binom(i64::from(n) + d - 1, n, BinomialMode::Count)
}

/// Dimension of `M / (f_1, ..., f_k)` in degree `d` for a regular sequence of
/// `k` forms of degree `q` on a graded module with Hilbert function `base`.
pub fn koszul_quotient_dim<F>(base: F, k: u32, q: u64, d: i64) -> BigInt
where
    F: Fn(i64) -> BigInt,
{
    let q = q as i64;
    let mut total = BigInt::zero();
    for j in 0..=k {
        let term = binom(i64::from(k), j, BinomialMode::Count) * base(d - i64::from(j) * q);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Number of monomials of degree `d` in `big_n + 1` variables with every
/// exponent below `q`.
pub fn dim_d_formula(big_n: u32, q: u64, d: i64) -> BigInt {
    let nn = i64::from(big_n);
    koszul_quotient_dim(
        |e| binom(nn + e, big_n, BinomialMode::Count),
        big_n + 1,
        q,
        d,
    )
}

/// Hilbert function of `R / (x0^q + x1^q, x2^q, ..., xN^q)`.
pub fn dim_a_formula(n: u32, q: u64, d: i64) -> BigInt {
    koszul_quotient_dim(|e| dim_r(n, e), n + 1, q, d)
}

/// Hilbert function of `Z / (x0^q + x1^q, x2^q, ..., xN^q) Z`.
pub fn dim_atilde_formula(n: u32, q: u64, d: i64) -> BigInt {
    koszul_quotient_dim(|e| dim_z(n, e), n + 1, q, d)
}

/// Half of `n (p - 1)`; the lower edge of the odd-characteristic windows.
fn half_width(n: u32, p: u64) -> Result<i64> {
    if p == 2 {
        return Err(Error::param("p", "window formulas need an odd prime"));
    }
    if p % 2 == 0 {
        return Err(Error::NotPrime(p));
    }
    Ok(i64::from(n) * (p as i64 - 1) / 2)
}

fn alternating_fold<F>(p: u64, top: i64, d: i64, f: F) -> BigInt
where
    F: Fn(i64) -> BigInt,
{
    let p = p as i64;
    let mut total = BigInt::zero();
    // shift d down into [0, p) and walk up through the support
    let mut i = -(d.div_euclid(p));
    let mut e = d + i * p;
    while e <= top {
        if e >= 0 {
            let v = f(e);
            if i.rem_euclid(2) == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        i += 1;
        e += p;
    }
    total
}

/// Closed form for `dim M_d` when `s = 1` and `p` is odd.
///
/// Nonzero only on the open window `h < d < h + p`, `h = n(p-1)/2`.
pub fn window_m1_dim(n: u32, p: u64, d: i64) -> Result<BigInt> {
    let h = half_width(n, p)?;
    if d <= h || d >= h + p as i64 {
        return Ok(BigInt::zero());
    }
    let top = i64::from(n) * (p as i64 - 1) + p as i64;
    Ok(alternating_fold(p, top, d, |e| dim_a_formula(n, p, e)))
}

/// Closed form for the spinor analogue of [`window_m1_dim`], supported on
/// `h < d <= h + p`.
pub fn window_mtilde1_dim(n: u32, p: u64, d: i64) -> Result<BigInt> {
    let h = half_width(n, p)?;
    if d <= h || d > h + p as i64 {
        return Ok(BigInt::zero());
    }
    let top = i64::from(n) * (p as i64 - 1) + p as i64 + 1;
    Ok(alternating_fold(p, top, d, |e| dim_atilde_formula(n, p, e)))
}

/// The pairs of variables multiplied together in the quadric.
pub fn cross_pairs(n: u32) -> Vec<(usize, usize)> {
    let start = if n % 2 == 1 { 1 } else { 0 };
    (start..=n as usize)
        .step_by(2)
        .map(|i| (i, i + 1))
        .collect()
}

/// Counts square-free monomials of degree `d` in `x0..x_{n+1}` that meet
/// every cross term of the characteristic two quadric without being divisible
/// by any of its monomials.
///
/// ```
/// use qfrob::combinatorics::count_m_basis;
///
/// assert_eq!(count_m_basis(3, 2), 4);
/// assert_eq!(count_m_basis(3, 3), 4);
/// assert_eq!(count_m_basis(4, 3), 8);
/// assert_eq!(count_m_basis(4, 2), 0);
/// ```
pub fn count_m_basis(n: u32, d: i64) -> u64 {
    let vars = n as usize + 2;
    if d < 0 || d as usize > vars {
        return 0;
    }
    let pairs = cross_pairs(n);
    let mut count = 0;
    for mask in 0u64..(1u64 << vars) {
        if mask.count_ones() as i64 != d {
            continue;
        }
        let ok = pairs.iter().all(|&(i, j)| {
            let a = mask >> i & 1 == 1;
            let b = mask >> j & 1 == 1;
            a != b
        });
        if ok {
            count += 1;
        }
    }
    count
}

/// Truncates a signed value known to be a dimension.
#[cfg(test)]
pub(crate) fn to_u64(v: &BigInt) -> u64 {
    assert!(!num_traits::Signed::is_negative(v), "negative dimension {v}");
    u64::try_from(v).expect("dimension exceeds u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn brute_d(big_n: u32, q: u64, d: i64) -> u64 {
        fn go(vars: u32, q: u64, left: i64) -> u64 {
            if vars == 0 {
                return u64::from(left == 0);
            }
            (0..q as i64).filter(|&e| e <= left).map(|e| go(vars - 1, q, left - e)).sum()
        }
        if d < 0 {
            return 0;
        }
        go(big_n + 1, q, d)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom(5, 2, BinomialMode::Count), b(10));
        assert_eq!(binom(-1, 4, BinomialMode::Count), b(0));
        assert_eq!(binom(-1, 4, BinomialMode::Polynomial), b(1));
        assert_eq!(binom(3, 4, BinomialMode::Polynomial), b(0));
        assert_eq!(binom(-3, 2, BinomialMode::Polynomial), b(6));
        assert_eq!(binom(-2, 3, BinomialMode::Polynomial), b(-4));
        assert_eq!(binom(60, 30, BinomialMode::Count), "118264581564861424".parse::<BigInt>().unwrap());
    }

    #[test]
    fn hilbert_values() {
        let qs: Vec<_> = (0..9).map(|t| hilbert_q(3, t)).collect();
        let want: Vec<_> = [1, 5, 14, 30, 55, 91, 140, 204, 285].iter().map(|&v| b(v)).collect();
        assert_eq!(qs, want);
        assert_eq!(hilbert_q(3, -1), b(0));
        assert_eq!(hilbert_s(3, 1), b(4));
        assert_eq!(hilbert_s(3, 2), b(16));
        assert_eq!(hilbert_s(4, 1), b(8));
    }

    #[test]
    fn ring_and_spinor_pieces() {
        assert_eq!(dim_r(3, 1), b(5));
        assert_eq!(dim_r(3, 2), b(14));
        assert_eq!(dim_r(3, -2), b(0));
        assert_eq!(dim_z(3, 0), b(0));
        assert_eq!(dim_z(3, 1), b(4));
        assert_eq!(dim_z(4, 2), b(40));
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_quotient_dim(|e| dim_r(3, e), 4, 3, 0), b(1));
        assert_eq!(koszul_quotient_dim(|e| dim_r(3, e), 4, 3, 4), b(35));
        assert_eq!(koszul_quotient_dim(|e| dim_z(3, e), 4, 3, 1), b(4));
    }

    #[test]
    fn monomial_count_examples() {
        assert_eq!(dim_d_formula(4, 2, 0), b(1));
        assert_eq!(dim_d_formula(4, 2, 2), b(10));
        assert_eq!(dim_d_formula(4, 2, 6), b(0));
    }

    #[test]
    fn a_examples() {
        assert_eq!(dim_a_formula(3, 3, 0), b(1));
        assert_eq!(dim_a_formula(3, 3, 7), b(14));
        assert_eq!(dim_a_formula(3, 3, 10), b(0));
        let a: Vec<_> = (0..10).map(|d| dim_a_formula(3, 3, d)).collect();
        assert_eq!(a[4], b(35));
        assert_eq!(a[5], b(35));
        assert_eq!(a[8], b(5));
    }

    #[test]
    fn window_examples() {
        assert_eq!(window_m1_dim(3, 3, 3).unwrap(), b(0));
        assert_eq!(window_m1_dim(3, 3, 4).unwrap(), b(16));
        assert_eq!(window_m1_dim(3, 3, 5).unwrap(), b(16));
        assert_eq!(window_m1_dim(3, 3, 6).unwrap(), b(0));
        assert_eq!(window_mtilde1_dim(3, 3, 3).unwrap(), b(0));
        assert_eq!(window_mtilde1_dim(3, 3, 10).unwrap(), b(0));
        let atilde = |e| dim_atilde_formula(3, 3, e);
        let by_hand = atilde(6) - atilde(3) - atilde(9) + atilde(0);
        assert_eq!(window_mtilde1_dim(3, 3, 6).unwrap(), by_hand);
        assert!(window_m1_dim(3, 2, 2).is_err());
        assert!(window_mtilde1_dim(3, 2, 2).is_err());
    }

    #[test]
    fn window_values_are_multiples_of_module_size() {
        for n in 3..=6u32 {
            for p in [3u64, 5, 7] {
                let m = b(spinor_module_size(n) as i64);
                for d in 0..(n as i64 * p as i64 + p as i64 + 2) {
                    let v = window_m1_dim(n, p, d).unwrap();
                    assert!(!v.is_negative());
                    assert_eq!(&v % &m, b(0), "n={n} p={p} d={d}");
                    let w = window_mtilde1_dim(n, p, d).unwrap();
                    assert!(!w.is_negative());
                    assert_eq!(&w % &m, b(0), "n={n} p={p} d={d}");
                }
            }
        }
    }

    #[test]
    fn m_basis_totals() {
        assert_eq!(count_m_basis(3, 0), 0);
        for n in 1..=8u32 {
            let total: u64 = (0..=n as i64 + 2).map(|d| count_m_basis(n, d)).sum();
            let m = spinor_module_size(n);
            assert_eq!(total, if n % 2 == 1 { 2 * m } else { m }, "n={n}");
            let lo = i64::from(n / 2 + 1);
            for d in 0..=n as i64 + 2 {
                let support = d == lo || (n % 2 == 1 && d == lo + 1);
                assert_eq!(count_m_basis(n, d) != 0, support, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn monomial_count_matches_enumeration() {
        for big_n in 1..=5u32 {
            for q in 2..=5u64 {
                let top = i64::from(big_n + 1) * (q as i64 - 1);
                let mut total = BigInt::zero();
                for d in -2..=top + 2 {
                    let f = dim_d_formula(big_n, q, d);
                    assert_eq!(f, b(brute_d(big_n, q, d) as i64), "N={big_n} q={q} d={d}");
                    total += f;
                }
                assert_eq!(total, BigInt::from(q).pow(big_n + 1));
            }
        }
    }

    #[test]
    fn alternating_hilbert_sums() {
        for n in 1..=7u32 {
            let n64 = i64::from(n);
            for x in -2 * n64..=2 * n64 {
                let bx = binom(n64 + x, n, BinomialMode::Polynomial);
                let bx1 = binom(n64 + x - 1, n, BinomialMode::Polynomial);
                assert_eq!(bx.clone() + bx1, hilbert_q(n, x), "n={n} x={x}");
                if x >= -n64 {
                    let mut s = BigInt::zero();
                    for i in (1 - n64)..=x {
                        let v = hilbert_q(n, i);
                        if (x - i) % 2 == 0 {
                            s += v;
                        } else {
                            s -= v;
                        }
                    }
                    assert_eq!(s, bx, "n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn hilbert_values_expand_over_a() {
        for n in 3..=5u32 {
            for q in [2u64, 3, 4, 5] {
                let qq = q as i64;
                let n64 = i64::from(n);
                let top = n64 * (qq - 1) + qq + 1;
                for a in -qq..=qq {
                    for bb in -2 * n64..=2 * n64 {
                        let mut lhs_q = BigInt::zero();
                        let mut lhs_s = BigInt::zero();
                        for t in (a - top) / qq - 1..=a / qq + 1 {
                            let c = binom(n64 + bb + t, n, BinomialMode::Polynomial);
                            lhs_q += dim_a_formula(n, q, a - t * qq) * &c;
                            lhs_s += dim_atilde_formula(n, q, a - t * qq) * &c;
                        }
                        assert_eq!(lhs_q, hilbert_q(n, a + bb * qq));
                        assert_eq!(lhs_s, hilbert_s(n, a + bb * qq));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn modes_agree_from_minus_one(m in -1i64..40, k in 0u32..12) {
            let c = binom(m, k, BinomialMode::Count);
            let p = binom(m, k, BinomialMode::Polynomial);
            if m >= 0 {
                prop_assert_eq!(c.clone(), p);
                prop_assert!(!c.is_negative());
            } else {
                prop_assert!(c.is_zero());
            }
        }

        #[test]
        fn pascal_rule(m in -30i64..30, k in 1u32..10) {
            let lhs = binom(m, k, BinomialMode::Polynomial);
            let rhs = binom(m - 1, k, BinomialMode::Polynomial) + binom(m - 1, k - 1, BinomialMode::Polynomial);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn a_is_palindromic(n in 3u32..8, q in 2u64..10, d in -5i64..90) {
            let top = i64::from(n) * (q as i64 - 1) + q as i64;
            prop_assert_eq!(dim_a_formula(n, q, d), dim_a_formula(n, q, top - d));
            prop_assert!(!dim_a_formula(n, q, d).is_negative());
        }

        #[test]
        fn atilde_is_palindromic(n in 3u32..8, q in 2u64..10, d in -5i64..90) {
            let top = i64::from(n) * (q as i64 - 1) + q as i64 + 1;
            prop_assert_eq!(dim_atilde_formula(n, q, d), dim_atilde_formula(n, q, top - d));
            prop_assert!(!dim_atilde_formula(n, q, d).is_negative());
        }

        #[test]
        fn polynomials_match_counts(n in 1u32..10, t in 0i64..30) {
            prop_assert_eq!(hilbert_q(n, t), dim_r(n, t));
            prop_assert_eq!(hilbert_s(n, t), dim_z(n, t));
        }

        #[test]
        fn push_forward_convolution(
            n in 1u32..6,
            q in 2u64..6,
            f in proptest::collection::vec(-20i64..20, 1..8),
            shift in -6i64..6,
            a in -4i64..4,
            bb in -4i64..4,
        ) {
            let val = |x: i64| -> BigInt {
                let i = x - shift;
                if i >= 0 && (i as usize) < f.len() { b(f[i as usize]) } else { BigInt::zero() }
            };
            let qq = q as i64;
            let n64 = i64::from(n);
            let mut rhs = BigInt::zero();
            let lo = shift - 1;
            let hi = shift + f.len() as i64 + (n64 + 1) * qq + 1;
            for t in (a - hi).div_euclid(qq) - 1..=(a - lo).div_euclid(qq) + 1 {
                let al = koszul_quotient_dim(val, n + 1, q, a - t * qq);
                rhs += al * binom(n64 + t + bb, n, BinomialMode::Count);
            }
            prop_assert_eq!(rhs, val(a + bb * qq));
        }
    }
}
