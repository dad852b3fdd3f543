//! Dynamics over a tiling: descent to the center, tower classification,
//! shortest words, the zigzag operator and the negative-weight census.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{count_below, minimum_weight};
use crate::triple::{apply_operator, apply_word, OperatorId, Triple, Word};

/// Step budget for [`classify`].
pub const DESCENT_STEP_BUDGET: usize = 1_000_000;
/// Default depth cap for [`length_of`].
pub const DEFAULT_DEPTH_CAP: usize = 256;
/// Default number of distinct states [`length_of`] may hold.
pub const DEFAULT_STATE_BUDGET: usize = 4_000_000;
/// Largest `c` accepted by [`negative_census`].
pub const DEFAULT_CENSUS_CAP: i64 = 1_000_000;

/// The four canonical minimal triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Germ {
    #[serde(rename = "000")]
    G000,
    #[serde(rename = "011")]
    G011,
    #[serde(rename = "101")]
    G101,
    #[serde(rename = "110")]
    G110,
}

impl Germ {
    pub const ALL: [Germ; 4] = [Germ::G000, Germ::G011, Germ::G101, Germ::G110];

    pub fn triple(self) -> Triple {
        match self {
            Germ::G000 => Triple::new(0, 0, 0),
            Germ::G011 => Triple::new(0, 1, 1),
            Germ::G101 => Triple::new(1, 0, 1),
            Germ::G110 => Triple::new(1, 1, 0),
        }
    }

    /// Germ whose translate by `h` equals `t`, if any.
    pub fn of_center(t: &Triple) -> Option<(Germ, i64)> {
        let h = t.x.min(t.y).min(t.z);
        let shifted = Triple::new(t.x - h, t.y - h, t.z - h);
        Germ::ALL.into_iter().find(|g| g.triple() == shifted).map(|g| (g, h))
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.triple();
        write!(f, "G{}{}{}", t.x, t.y, t.z)
    }
}

impl std::str::FromStr for Germ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim().trim_start_matches(['G', 'g']);
        let digits = digits.replace(',', "");
        Germ::ALL
            .into_iter()
            .find(|g| {
                let t = g.triple();
                format!("{}{}{}", t.x, t.y, t.z) == digits
            })
            .ok_or_else(|| Error::invalid(format!("unknown germ {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerClassification {
    pub germ: Germ,
    /// Translation `h`: the tiling is the germ's tiling shifted by `h`.
    pub offset: i64,
    /// Replays from the input triple to `center_triple`.
    pub witness: Word,
    pub center_triple: Triple,
}

/// Walks from `t` to the center of its tiling and names the tower.
///
/// While the largest component `t_k` (lowest index on ties) satisfies
/// `2 t_k > t_i + t_j + 1`, replacing it lowers the component sum, so `H_k`
/// is applied. The sum is bounded below inside a tiling, so the walk stops,
/// and it can only stop at `(m, m, m)` or at a permutation of
/// `(m, m+1, m+1)`: exactly the terminal cases of the minimum-element
/// argument. The center is then cross-checked against [`minimum_weight`].
pub fn classify(t: &Triple) -> Result<TowerClassification> {
    let mut cur = *t;
    let mut witness = Word::empty();
    for _ in 0..=DESCENT_STEP_BUDGET {
        let comps = cur.to_array().map(i128::from);
        let k = (0..3).fold(0, |best, i| if comps[i] > comps[best] { i } else { best });
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        if 2 * comps[k] > comps[i] + comps[j] + 1 {
            let op = OperatorId::from_position(k).expect("position < 3");
            cur = apply_operator(op, &cur)?;
            witness.push(op);
            continue;
        }

        let (germ, offset) = Germ::of_center(&cur)
            .ok_or_else(|| Error::Consistency(format!("descent from {t} stalled at non-central triple {cur}")))?;
        let lattice_min = minimum_weight(t)?;
        let expected_nodes = if germ == Germ::G000 { 3 } else { 1 };
        if lattice_min.min != offset || lattice_min.argmin.len() != expected_nodes {
            return Err(Error::Consistency(format!(
                "center {cur} of {t} disagrees with lattice minimum {} at {} node(s)",
                lattice_min.min,
                lattice_min.argmin.len()
            )));
        }
        return Ok(TowerClassification { germ, offset, witness, center_triple: cur });
    }
    Err(Error::resource(format!("descent from {t} exceeded {DESCENT_STEP_BUDGET} steps")))
}

/// Shortest operator word from `t0` to a triple containing `value`, found by
/// breadth-first search over distinct triples.
pub fn shortest_word(t0: &Triple, value: i64, depth_cap: usize, state_budget: usize) -> Result<Option<Word>> {
    if t0.contains(&value) {
        return Ok(Some(Word::empty()));
    }
    let mut parent: HashMap<Triple, (Triple, OperatorId)> = HashMap::new();
    let mut frontier = vec![*t0];
    for _depth in 1..=depth_cap {
        let mut next = Vec::new();
        for state in &frontier {
            for op in OperatorId::ALL {
                let image = apply_operator(op, state)?;
                if image == *t0 || parent.contains_key(&image) {
                    continue;
                }
                parent.insert(image, (*state, op));
                if parent.len() > state_budget {
                    return Err(Error::resource(format!("length search exceeded {state_budget} states")));
                }
                if image.contains(&value) {
                    let mut ops = Vec::new();
                    let mut cur = image;
                    while cur != *t0 {
                        let (prev, op) = parent[&cur];
                        ops.push(op);
                        cur = prev;
                    }
                    ops.reverse();
                    return Ok(Some(Word::new(ops)));
                }
                next.push(image);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(None)
}

/// Minimum number of operator applications from `t0` to a triple that
/// contains `value`, or `None` when not reached within `depth_cap`.
pub fn length_of(t0: &Triple, value: i64, depth_cap: usize) -> Result<Option<usize>> {
    Ok(shortest_word(t0, value, depth_cap, DEFAULT_STATE_BUDGET)?.map(|w| w.len()))
}

/// One zigzag step `H1 ∘ H2 ∘ H1 ∘ H3`, i.e. the execution word `3121`.
pub fn zigzag_word() -> Word {
    Word::new(vec![OperatorId::H3, OperatorId::H1, OperatorId::H2, OperatorId::H1])
}

/// `n` zigzag steps from `(a, a, c)` in closed form.
pub fn zigzag_apply(a: i64, c: i64, n: i64) -> Result<Triple> {
    if n < 0 {
        return Err(Error::invalid("zigzag iteration count must be non-negative"));
    }
    let (a, c, n) = (a as i128, c as i128, n as i128);
    let pair = (2 * n + 1) * a - 2 * n * c + n * (3 * n + 1);
    let third = 2 * n * a - (2 * n - 1) * c + n * (3 * n - 2);
    let narrow = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("zigzag closed form"));
    Ok(Triple::new(narrow(pair)?, narrow(pair)?, narrow(third)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterPath {
    pub c: i64,
    pub zigzag_iterations: i64,
    /// Total operator applications (4 per zigzag step, plus a final `H3`
    /// when `c` is not a multiple of 3).
    pub steps: i64,
    pub word: Word,
    #[serde(rename = "final")]
    pub final_triple: Triple,
    pub germ: Germ,
    pub offset: i64,
}

/// Path from `(0, 0, c)` to the center of its tiling.
///
/// `c ≡ 0 (mod 3)`: `c/3` zigzag steps reach `(s, s, s)`, `s = -(c²-c)/3`.
/// `c ≡ 1`: `(c-1)/3` steps reach `(s, s, s+1)`, then `H3` gives `(s, s, s)`.
/// `c ≡ 2`: `(c-2)/3` steps then `H3` give `(h+1, h+1, h)`,
/// `h = -(c²-c+1)/3`, in the tower of `(1, 1, 0)`.
pub fn center_path(c: i64) -> Result<CenterPath> {
    if c < 0 {
        return Err(Error::invalid("center path is defined for c >= 0"));
    }
    let wide = c as i128;
    let (n, finish) = match c % 3 {
        0 => (c / 3, false),
        1 => ((c - 1) / 3, true),
        _ => ((c - 2) / 3, true),
    };
    let mut final_triple = zigzag_apply(0, c, n)?;
    if finish {
        final_triple = apply_operator(OperatorId::H3, &final_triple)?;
    }
    let (germ, offset) = match c % 3 {
        0 | 1 => (Germ::G000, -(wide * wide - wide) / 3),
        _ => (Germ::G110, -(wide * wide - wide + 1) / 3),
    };
    let offset = i64::try_from(offset).map_err(|_| Error::Overflow("center offset"))?;

    let mut word = zigzag_word().power(n as usize);
    if finish {
        word.push(OperatorId::H3);
    }

    let expected = germ.triple().translate(&offset)?;
    if final_triple != expected {
        return Err(Error::Consistency(format!(
            "center path for c = {c} ended at {final_triple}, expected {expected}"
        )));
    }
    let classified = classify(&Triple::new(0, 0, c))?;
    if classified.germ != germ || classified.offset != offset || classified.center_triple != final_triple {
        return Err(Error::Consistency(format!(
            "center path for c = {c} disagrees with classification {classified:?}"
        )));
    }

    Ok(CenterPath { c, zigzag_iterations: n, steps: word.len() as i64, word, final_triple, germ, offset })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub c: i64,
    pub min_weight: i64,
    pub negative_count: u64,
    /// `(2π / (3√3)) c²`.
    pub asymptote: f64,
    pub ratio: f64,
}

/// Counts the negative weights of the tiling generated by `(0, 0, c)`.
pub fn negative_census(c: i64) -> Result<CensusReport> {
    negative_census_with_cap(c, DEFAULT_CENSUS_CAP)
}

pub fn negative_census_with_cap(c: i64, cap: i64) -> Result<CensusReport> {
    if c < 1 {
        return Err(Error::invalid("census requires c >= 1"));
    }
    if c > cap {
        return Err(Error::resource(format!("census parameter {c} exceeds cap {cap}")));
    }
    let base = Triple::new(0, 0, c);
    let min_weight = minimum_weight(&base)?.min;
    let wide = c as i128;
    let expected = -((wide * wide - wide + 1) / 3);
    if min_weight as i128 != expected {
        return Err(Error::Consistency(format!(
            "minimum {min_weight} for c = {c} differs from -floor((c²-c+1)/3) = {expected}"
        )));
    }
    let negative_count = count_below(&base, -1)?;
    let asymptote = 2.0 * PI / (3.0 * 3f64.sqrt()) * (c as f64) * (c as f64);
    Ok(CensusReport { c, min_weight, negative_count, asymptote, ratio: negative_count as f64 / asymptote })
}

/// Verifies a classification by replaying its witness.
pub fn replay_witness(t: &Triple, class: &TowerClassification) -> Result<bool> {
    Ok(apply_word(&class.witness, t)? == class.center_triple
        && class.germ.triple().translate(&class.offset)? == class.center_triple)
}
