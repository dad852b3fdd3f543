//! Queries over the sublevel sets `{(m, n) : G(m, n) <= M}`.
//!
//! `G` is the positive-definite form `m² + mn + n²` plus linear terms, so
//! every sublevel set is the lattice inside an ellipse. Rows are scanned over
//! a bounding box around the real minimizer and each row's `n`-interval is
//! solved exactly from the quadratic in `n`.

use rayon::prelude::*;
use serde::Serialize;

use super::{closed_weight_wide, narrow, NodeCoord};
use crate::error::{Error, Result};
use crate::triple::Triple;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimumWeight {
    pub min: i64,
    pub argmin: Vec<NodeCoord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub represented: bool,
    pub witnesses: Vec<NodeCoord>,
}

const COORD_LIMIT: i128 = 1 << 40;

fn check_base(base: &Triple) -> Result<()> {
    // keeps every intermediate below well inside i128
    let limit = 1i64 << 60;
    if [base.x, base.y, base.z].iter().any(|v| v.abs() > limit) {
        return Err(Error::Overflow("base triple too large for lattice queries"));
    }
    Ok(())
}

/// `(3·m*, 3·n*)` where `(m*, n*)` is the real minimizer of `G`.
fn real_minimizer_times3(base: &Triple) -> (i128, i128) {
    let (a, b, c) = (base.x as i128, base.y as i128, base.z as i128);
    (a - 2 * b + c + 1, a + b - 2 * c + 1)
}

/// Exact minimum of `G` over the lattice and every node attaining it.
///
/// The lattice minimum lies next to the real minimizer
/// `((a-2b+c+1)/3, (a+b-2c+1)/3)`; the 5×5 block around its floor is searched.
pub fn minimum_weight(base: &Triple) -> Result<MinimumWeight> {
    check_base(base)?;
    let (m3, n3) = real_minimizer_times3(base);
    let (m0, n0) = (m3.div_euclid(3), n3.div_euclid(3));
    let mut best = i128::MAX;
    let mut argmin = Vec::new();
    for dm in -2..=2 {
        for dn in -2..=2 {
            let (m, n) = (m0 + dm, n0 + dn);
            let w = closed_weight_wide(base, m, n);
            if w < best {
                best = w;
                argmin.clear();
            }
            if w == best {
                argmin.push(NodeCoord::new(narrow_coord(m)?, narrow_coord(n)?));
            }
        }
    }
    argmin.sort();
    Ok(MinimumWeight { min: narrow(best)?, argmin })
}

fn narrow_coord(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow("lattice coordinate"))
}

/// Rows `m` that can hold a node with `G <= level`, or `None` when the
/// sublevel set is empty.
fn row_range(base: &Triple, level: i64) -> Result<Option<(i128, i128)>> {
    let min = minimum_weight(base)?.min;
    if level < min {
        return Ok(None);
    }
    let span = (level as i128) - (min as i128) + 1;
    let radius = 2 * isqrt_ceil(span) + 1;
    if radius > COORD_LIMIT {
        return Err(Error::resource(format!("level {level} spans too many lattice rows")));
    }
    let (m3, _) = real_minimizer_times3(base);
    let center = m3.div_euclid(3);
    Ok(Some((center - radius, center + radius)))
}

fn isqrt_ceil(v: i128) -> i128 {
    let s = v.isqrt();
    if s * s == v {
        s
    } else {
        s + 1
    }
}

/// Coefficients of `G(m, n) - level` as the monic quadratic `n² + B n + C`.
fn row_quadratic(base: &Triple, m: i128, level: i64) -> (i128, i128) {
    let (a, b, c) = (base.x as i128, base.y as i128, base.z as i128);
    let lin = m - a + c - 1;
    let constant = m * m - m - (m - 1) * a + m * b - level as i128;
    (lin, constant)
}

/// Inclusive `n`-range of row `m` with `G(m, n) <= level`.
fn row_interval(base: &Triple, m: i128, level: i64) -> Option<(i128, i128)> {
    let (lin, constant) = row_quadratic(base, m, level);
    let disc = lin * lin - 4 * constant;
    if disc < 0 {
        return None;
    }
    let s = disc.isqrt();
    let f = |n: i128| n * n + lin * n + constant;
    // both fences lie strictly outside the real roots, so f > 0 there
    let below = (-lin - s).div_euclid(2) - 1;
    let above = (-lin + s).div_euclid(2) + 1;
    let mut lo = below + 1;
    while lo < above && f(lo) > 0 {
        lo += 1;
    }
    if lo == above {
        return None;
    }
    let mut hi = above - 1;
    while f(hi) > 0 {
        hi -= 1;
    }
    Some((lo, hi))
}

/// All nodes with `G(base | m, n) <= level`, sorted by weight, then `(m, n)`.
pub fn represented_below(base: &Triple, level: i64) -> Result<Vec<(i64, NodeCoord)>> {
    let Some((m_lo, m_hi)) = row_range(base, level)? else {
        return Ok(Vec::new());
    };
    let mut hits = Vec::new();
    for m in m_lo..=m_hi {
        if let Some((lo, hi)) = row_interval(base, m, level) {
            for n in lo..=hi {
                hits.push((
                    narrow(closed_weight_wide(base, m, n))?,
                    NodeCoord::new(narrow_coord(m)?, narrow_coord(n)?),
                ));
            }
        }
    }
    hits.sort_unstable();
    Ok(hits)
}

/// Number of nodes with `G(base | m, n) <= level`, without materializing them.
pub fn count_below(base: &Triple, level: i64) -> Result<u64> {
    let Some((m_lo, m_hi)) = row_range(base, level)? else {
        return Ok(0);
    };
    let total: u128 = (m_lo..=m_hi)
        .into_par_iter()
        .filter_map(|m| row_interval(base, m, level))
        .map(|(lo, hi)| (hi - lo + 1) as u128)
        .sum();
    u64::try_from(total).map_err(|_| Error::Overflow("node count"))
}

/// Whether `value` is a weight of the tiling, with every node carrying it.
pub fn is_represented(base: &Triple, value: i64) -> Result<Representation> {
    let Some((m_lo, m_hi)) = row_range(base, value)? else {
        return Ok(Representation { represented: false, witnesses: Vec::new() });
    };
    let mut witnesses = Vec::new();
    for m in m_lo..=m_hi {
        let (lin, constant) = row_quadratic(base, m, value);
        let disc = lin * lin - 4 * constant;
        if disc < 0 {
            continue;
        }
        let s = disc.isqrt();
        if s * s != disc {
            continue;
        }
        let mut roots = [-lin - s, -lin + s];
        roots.sort();
        for (i, r) in roots.iter().enumerate() {
            if r.rem_euclid(2) != 0 || (i == 1 && roots[0] == roots[1]) {
                continue;
            }
            witnesses.push(NodeCoord::new(narrow_coord(m)?, narrow_coord(r / 2)?));
        }
    }
    witnesses.sort();
    Ok(Representation { represented: !witnesses.is_empty(), witnesses })
}

/// `v = x² + xy + y²` for some integers `x, y >= 0`, decided by the
/// factorization criterion: every prime `≡ 2 (mod 3)` divides `v` to an even
/// power.
pub fn is_loeschian(v: i64) -> bool {
    if v < 0 {
        return false;
    }
    if v == 0 {
        return true;
    }
    let mut rest = v;
    let mut p = 2;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if p % 3 == 2 && e % 2 == 1 {
            return false;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    !(rest > 1 && rest % 3 == 2)
}

/// The same predicate, decided by searching the `(0,1,1)` tiling, whose
/// weights are exactly `m² + mn + n²`.
pub fn is_loeschian_by_form(v: i64) -> Result<bool> {
    if v < 0 {
        return Ok(false);
    }
    Ok(is_represented(&Triple::new(0, 1, 1), v)?.represented)
}

/// Factorization criterion for every `v <= limit` at once, via a
/// smallest-prime-factor sieve.
pub fn loeschian_sieve(limit: usize) -> Vec<bool> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    (0..=limit)
        .map(|v| {
            if v == 0 {
                return true;
            }
            let mut rest = v;
            while rest > 1 {
                let p = spf[rest] as usize;
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                if p % 3 == 2 && e % 2 == 1 {
                    return false;
                }
            }
            true
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::closed_weight;

    fn brute_min(base: &Triple, r: i64) -> (i64, Vec<NodeCoord>) {
        let mut best = i64::MAX;
        let mut arg = Vec::new();
        for m in -r..=r {
            for n in -r..=r {
                let w = closed_weight(base, m, n).unwrap();
                if w < best {
                    best = w;
                    arg.clear();
                }
                if w == best {
                    arg.push(NodeCoord::new(m, n));
                }
            }
        }
        arg.sort();
        (best, arg)
    }

    fn brute_below(base: &Triple, level: i64, r: i64) -> Vec<(i64, NodeCoord)> {
        let mut out: Vec<_> = (-r..=r)
            .flat_map(|m| (-r..=r).map(move |n| (m, n)))
            .map(|(m, n)| (closed_weight(base, m, n).unwrap(), NodeCoord::new(m, n)))
            .filter(|(w, _)| *w <= level)
            .collect();
        out.sort();
        out
    }

    #[test]
    fn minimum_examples() {
        let m = minimum_weight(&Triple::new(0, 0, 0)).unwrap();
        assert_eq!(m.min, 0);
        assert_eq!(m.argmin, vec![NodeCoord::new(0, 0), NodeCoord::new(0, 1), NodeCoord::new(1, 0)]);
        let m = minimum_weight(&Triple::new(0, 1, 1)).unwrap();
        assert_eq!((m.min, m.argmin), (0, vec![NodeCoord::new(0, 0)]));
        assert_eq!(minimum_weight(&Triple::new(0, 0, 100)).unwrap().min, -3300);
    }

    #[test]
    fn minimizer_formula_against_brute_force() {
        for a in (-20..=20).step_by(3) {
            for b in (-20..=20).step_by(4) {
                for c in (-20..=20).step_by(5) {
                    let base = Triple::new(a, b, c);
                    let got = minimum_weight(&base).unwrap();
                    assert_eq!((got.min, got.argmin), brute_min(&base, 40), "base {base}");
                }
            }
        }
    }

    #[test]
    fn germ_prefixes() {
        let w: Vec<i64> = represented_below(&Triple::new(0, 0, 0), 36).unwrap().into_iter().map(|(w, _)| w).collect();
        let mut set = w.clone();
        set.dedup();
        assert_eq!(set, vec![0, 1, 2, 4, 5, 6, 8, 9, 10, 12, 14, 16, 17, 20, 21, 22, 24, 25, 26, 30, 32, 33, 34, 36]);
        let mut set: Vec<i64> =
            represented_below(&Triple::new(0, 1, 1), 37).unwrap().into_iter().map(|(w, _)| w).collect();
        set.dedup();
        assert_eq!(set, vec![0, 1, 3, 4, 7, 9, 12, 13, 16, 19, 21, 25, 27, 28, 31, 36, 37]);
    }

    #[test]
    fn below_matches_box_scan() {
        for base in [Triple::new(4, 7, 5), Triple::new(-9, 3, 14), Triple::new(0, 0, 30), Triple::new(2, -2, 2)] {
            let min = minimum_weight(&base).unwrap().min;
            for level in [min - 1, min, min + 5, min + 40, min + 300] {
                let got = represented_below(&base, level).unwrap();
                assert_eq!(got, brute_below(&base, level, 60), "base {base} level {level}");
                assert_eq!(count_below(&base, level).unwrap(), got.len() as u64);
            }
        }
    }

    #[test]
    fn below_minimum_is_empty() {
        let base = Triple::new(3, -1, 8);
        let min = minimum_weight(&base).unwrap().min;
        assert!(represented_below(&base, min - 1).unwrap().is_empty());
        assert_eq!(count_below(&base, min - 1).unwrap(), 0);
        assert!(!is_represented(&base, min - 1).unwrap().represented);
    }

    #[test]
    fn representation_examples() {
        let germ = Triple::new(0, 1, 1);
        let yes = is_represented(&germ, 2023).unwrap();
        assert!(yes.represented);
        for v in &yes.witnesses {
            assert_eq!(closed_weight(&germ, v.m, v.n).unwrap(), 2023);
        }
        assert!(!is_represented(&germ, 2024).unwrap().represented);
        assert!(!is_represented(&Triple::new(0, 0, 0), -1).unwrap().represented);
        // 7 = 1 + 2 + 4 appears at twelve nodes
        assert_eq!(is_represented(&germ, 7).unwrap().witnesses.len(), 12);
        assert_eq!(is_represented(&germ, 0).unwrap().witnesses, vec![NodeCoord::new(0, 0)]);
    }

    #[test]
    fn witnesses_match_brute_force() {
        let base = Triple::new(9, 2, 6);
        for value in 0..200 {
            let brute: Vec<NodeCoord> =
                brute_below(&base, value, 40).into_iter().filter(|(w, _)| *w == value).map(|(_, v)| v).collect();
            let mut brute = brute;
            brute.sort();
            assert_eq!(is_represented(&base, value).unwrap().witnesses, brute, "value {value}");
        }
    }

    #[test]
    fn loeschian_examples() {
        assert!(is_loeschian(7));
        assert!(!is_loeschian(2));
        assert!(is_loeschian(0));
        assert!(!is_loeschian(-3));
        assert!(is_loeschian(2023));
        assert!(!is_loeschian(2024));
        assert!(is_loeschian(4));
        assert!(!is_loeschian(10));
    }

    #[test]
    fn loeschian_routes_agree() {
        let sieve = loeschian_sieve(5_000);
        for v in 0..=5_000i64 {
            let by_form = is_loeschian_by_form(v).unwrap();
            assert_eq!(is_loeschian(v), by_form, "v = {v}");
            assert_eq!(sieve[v as usize], by_form, "v = {v}");
        }
    }

    #[test]
    fn huge_base_rejected() {
        assert!(minimum_weight(&Triple::new(i64::MAX, 0, 0)).is_err());
    }
}
