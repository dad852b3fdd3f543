//! The operator algebra on ordered integer triples.
//!
//! Each operator keeps two components and replaces the third by
//! `kept1 + kept2 + 1 - replaced`:
//!
//! ```text
//! H1(x, y, z) = (-x + 1 + y + z, y, z)
//! H2(x, y, z) = (x, -y + 1 + z + x, z)
//! H3(x, y, z) = (x, y, -z + 1 + x + y)
//! ```
//!
//! A [`Word`] is stored in execution order: the first operator in the word is
//! applied first. The composition `H3 ∘ H2 ∘ H1` (apply `H1`, then `H2`, then
//! `H3`) is therefore the word `[H1, H2, H3]`, written `"123"`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer types usable as triple components.
///
/// `i64` is the default (checked, errors on overflow); `BigInt` never overflows.
pub trait TileInt:
    Clone + Ord + fmt::Debug + fmt::Display + Zero + One + CheckedAdd + CheckedSub + CheckedMul + From<i64> + Send + Sync
{
}

impl TileInt for i64 {}
impl TileInt for i128 {}
impl TileInt for BigInt {}

pub(crate) fn add<T: TileInt>(a: &T, b: &T, what: &'static str) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

pub(crate) fn sub<T: TileInt>(a: &T, b: &T, what: &'static str) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow(what))
}

pub(crate) fn mul<T: TileInt>(a: &T, b: &T, what: &'static str) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

/// An ordered integer triple. Positions are semantic and never normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[T; 3]", into = "[T; 3]")]
pub struct Triple<T: Clone = i64> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Clone> From<[T; 3]> for Triple<T> {
    fn from([x, y, z]: [T; 3]) -> Self {
        Triple { x, y, z }
    }
}

impl<T: Clone> From<Triple<T>> for [T; 3] {
    fn from(t: Triple<T>) -> Self {
        [t.x, t.y, t.z]
    }
}

impl<T: Clone> Triple<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Triple { x, y, z }
    }

    /// Component at zero-based position `pos` (0, 1 or 2).
    pub fn get(&self, pos: usize) -> &T {
        match pos {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("triple position {pos} out of range"),
        }
    }

    fn set(&mut self, pos: usize, value: T) {
        match pos {
            0 => self.x = value,
            1 => self.y = value,
            2 => self.z = value,
            _ => panic!("triple position {pos} out of range"),
        }
    }

    pub fn to_array(&self) -> [T; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }
}

impl<T: Clone + PartialEq> Triple<T> {
    pub fn contains(&self, value: &T) -> bool {
        self.x == *value || self.y == *value || self.z == *value
    }
}

impl<T: TileInt> Triple<T> {
    /// `self + (h, h, h)`.
    pub fn translate(&self, h: &T) -> Result<Self> {
        Ok(Triple {
            x: add(&self.x, h, "triple translation")?,
            y: add(&self.y, h, "triple translation")?,
            z: add(&self.z, h, "triple translation")?,
        })
    }

    pub fn sum(&self) -> Result<T> {
        add(&add(&self.x, &self.y, "triple sum")?, &self.z, "triple sum")
    }
}

impl<T: Clone + fmt::Display> fmt::Display for Triple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl FromStr for Triple<i64> {
    type Err = Error;

    /// Parses `"a,b,c"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("expected three comma-separated integers, got {s:?}")));
        }
        let mut vals = [0i64; 3];
        for (slot, part) in vals.iter_mut().zip(&parts) {
            *slot = part.trim().parse().map_err(|_| Error::invalid(format!("not an integer: {part:?}")))?;
        }
        Ok(Triple::from(vals))
    }
}

/// One of the three elementary operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OperatorId {
    H1,
    H2,
    H3,
}

impl OperatorId {
    pub const ALL: [OperatorId; 3] = [OperatorId::H1, OperatorId::H2, OperatorId::H3];

    /// Zero-based position of the component this operator replaces.
    pub fn position(self) -> usize {
        match self {
            OperatorId::H1 => 0,
            OperatorId::H2 => 1,
            OperatorId::H3 => 2,
        }
    }

    pub fn from_position(pos: usize) -> Option<Self> {
        Self::ALL.get(pos).copied()
    }

    pub fn digit(self) -> char {
        match self {
            OperatorId::H1 => '1',
            OperatorId::H2 => '2',
            OperatorId::H3 => '3',
        }
    }

    fn from_digit(c: char) -> Option<Self> {
        match c {
            '1' => Some(OperatorId::H1),
            '2' => Some(OperatorId::H2),
            '3' => Some(OperatorId::H3),
            _ => None,
        }
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{}", self.digit())
    }
}

impl FromStr for OperatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let digits = s.strip_prefix(['H', 'h']).unwrap_or(s);
        let mut chars = digits.chars();
        match (chars.next().and_then(OperatorId::from_digit), chars.next()) {
            (Some(op), None) => Ok(op),
            _ => Err(Error::invalid(format!("unknown operator {s:?} (expected H1, H2 or H3)"))),
        }
    }
}

/// A finite operator sequence in execution order (first element applied first).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<OperatorId>);

impl Word {
    pub fn new(ops: Vec<OperatorId>) -> Self {
        Word(ops)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a digit string over `{1,2,3}` in execution order.
    pub fn parse_execution(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !matches!(c, ' ' | ',' | '_'))
            .map(|c| {
                OperatorId::from_digit(c)
                    .ok_or_else(|| Error::invalid(format!("invalid operator digit {c:?} in word {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Parses a digit string written in composition order, where the
    /// rightmost operator acts first (`"321"` means `H3 ∘ H2 ∘ H1`).
    pub fn parse_composition(s: &str) -> Result<Self> {
        let mut w = Self::parse_execution(s)?;
        w.0.reverse();
        Ok(w)
    }

    pub fn ops(&self) -> &[OperatorId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, op: OperatorId) {
        self.0.push(op);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// The word repeated `n` times.
    pub fn power(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// The same operators in composition (right-to-left) order.
    pub fn composition_string(&self) -> String {
        self.0.iter().rev().map(|op| op.digit()).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.0 {
            write!(f, "{}", op.digit())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse_execution(s)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Word::parse_execution(&s)
    }
}

impl FromIterator<OperatorId> for Word {
    fn from_iter<I: IntoIterator<Item = OperatorId>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Applies a single operator.
pub fn apply_operator<T: TileInt>(op: OperatorId, t: &Triple<T>) -> Result<Triple<T>> {
    let pos = op.position();
    let (i, j) = ((pos + 1) % 3, (pos + 2) % 3);
    let kept = add(t.get(i), t.get(j), "operator")?;
    let kept = add(&kept, &T::one(), "operator")?;
    let replaced = sub(&kept, t.get(pos), "operator")?;
    let mut out = t.clone();
    out.set(pos, replaced);
    Ok(out)
}

/// Folds [`apply_operator`] over `w` in execution order.
pub fn apply_word<T: TileInt>(w: &Word, t: &Triple<T>) -> Result<Triple<T>> {
    w.ops().iter().try_fold(t.clone(), |acc, &op| apply_operator(op, &acc))
}

/// The three one-step images `[H1(t), H2(t), H3(t)]`, duplicates kept.
pub fn expand_step<T: TileInt>(t: &Triple<T>) -> Result<[Triple<T>; 3]> {
    Ok([apply_operator(OperatorId::H1, t)?, apply_operator(OperatorId::H2, t)?, apply_operator(OperatorId::H3, t)?])
}

/// The `component` (1-based) of `w^k(t)` for `k = 0..=k_max`.
pub fn iterate_word_component<T: TileInt>(t: &Triple<T>, w: &Word, component: usize, k_max: usize) -> Result<Vec<T>> {
    if !(1..=3).contains(&component) {
        return Err(Error::invalid(format!("component must be 1, 2 or 3, got {component}")));
    }
    let mut out = Vec::with_capacity(k_max + 1);
    let mut cur = t.clone();
    out.push(cur.get(component - 1).clone());
    for _ in 0..k_max {
        cur = apply_word(w, &cur)?;
        out.push(cur.get(component - 1).clone());
    }
    Ok(out)
}

/// Outcome of one identity over a sample set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    /// First sample that violated the identity (or, for existence checks,
    /// the witness that satisfied it).
    pub example: Option<Triple>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn pair_word(ops: &[OperatorId]) -> Word {
    Word::new(ops.to_vec())
}

/// Checks the group relations pointwise on `samples`.
///
/// Covered: involution of each operator, `(Hi Hj)^3 = Id` for every ordered
/// pair, the braid relation `Hi Hj Hi = Hj Hi Hj` for every pair, the exact
/// commutation criterion (`Hi Hj t = Hj Hi t` iff `t_i = t_j` and
/// `t_k = t_i - 1`), existence of a non-commuting sample for every pair,
/// the lozenge rule and translation equivariance.
pub fn verify_identities(samples: &[Triple]) -> IdentityReport {
    use OperatorId::*;

    let mut report = IdentityReport::default();
    let mut forall = |name: String, pred: &dyn Fn(&Triple) -> Result<bool>| {
        let example = samples.iter().find(|t| !matches!(pred(t), Ok(true))).copied();
        report.checks.push(IdentityCheck { name, passed: example.is_none(), samples: samples.len(), example });
    };

    for op in OperatorId::ALL {
        forall(format!("involution {op}"), &|t| Ok(apply_operator(op, &apply_operator(op, t)?)? == *t));
    }

    for i in OperatorId::ALL {
        for j in OperatorId::ALL {
            if i == j {
                continue;
            }
            let w = pair_word(&[i, j]).power(3);
            forall(format!("order six ({i} {j})^3 = Id"), &|t| Ok(apply_word(&w, t)? == *t));
        }
    }

    for (i, j) in [(H1, H2), (H2, H3), (H3, H1)] {
        let lhs = pair_word(&[i, j, i]);
        let rhs = pair_word(&[j, i, j]);
        forall(format!("braid {i}{j}{i} = {j}{i}{j}"), &|t| Ok(apply_word(&lhs, t)? == apply_word(&rhs, t)?));
    }

    for (i, j) in [(H1, H2), (H2, H3), (H3, H1)] {
        let k = 3 - i.position() - j.position();
        forall(format!("commutation criterion {i}{j}"), &|t| {
            let commute = apply_word(&pair_word(&[i, j]), t)? == apply_word(&pair_word(&[j, i]), t)?;
            let ti = *t.get(i.position());
            let predicted = ti == *t.get(j.position()) && *t.get(k) == ti - 1;
            Ok(commute == predicted)
        });
    }

    for (i, j) in [(H1, H2), (H2, H3), (H3, H1)] {
        let witness = samples.iter().copied().find(|t| {
            matches!(
                (apply_word(&pair_word(&[i, j]), t), apply_word(&pair_word(&[j, i]), t)),
                (Ok(a), Ok(b)) if a != b
            )
        });
        report.checks.push(IdentityCheck {
            name: format!("non-commutativity {i}{j} != {j}{i}"),
            passed: witness.is_some(),
            samples: samples.len(),
            example: witness,
        });
    }

    let mut forall = |name: String, pred: &dyn Fn(&Triple) -> Result<bool>| {
        let example = samples.iter().find(|t| !matches!(pred(t), Ok(true))).copied();
        report.checks.push(IdentityCheck { name, passed: example.is_none(), samples: samples.len(), example });
    };

    forall("lozenge rule".to_string(), &|t| {
        for op in OperatorId::ALL {
            let pos = op.position();
            let image = apply_operator(op, t)?;
            let kept = t.get((pos + 1) % 3) + t.get((pos + 2) % 3);
            if t.get(pos) + image.get(pos) != kept + 1 {
                return Ok(false);
            }
        }
        Ok(true)
    });

    let probe = Word::parse_execution("1323121").expect("static word");
    forall("translation equivariance".to_string(), &|t| {
        let h = 17;
        Ok(apply_word(&probe, &t.translate(&h)?)? == apply_word(&probe, t)?.translate(&h)?)
    });

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use OperatorId::*;

    fn t(x: i64, y: i64, z: i64) -> Triple {
        Triple::new(x, y, z)
    }

    #[test]
    fn single_operators() {
        assert_eq!(apply_operator(H1, &t(1, 2, 3)).unwrap(), t(5, 2, 3));
        assert_eq!(apply_operator(H1, &t(0, 0, 0)).unwrap(), t(1, 0, 0));
        assert_eq!(apply_operator(H2, &t(5, 2, 5)).unwrap(), t(5, 9, 5));
        assert_eq!(apply_operator(H3, &t(5, 2, 3)).unwrap(), t(5, 2, 5));
    }

    #[test]
    fn worked_chain() {
        let w = Word::new(vec![H1, H3, H2, H1, H1]);
        assert_eq!(apply_word(&w, &t(1, 2, 3)).unwrap(), t(5, 9, 5));
        assert_eq!(apply_word(&Word::empty(), &t(7, -4, 9)).unwrap(), t(7, -4, 9));
    }

    #[test]
    fn coinciding_third_components() {
        // H3 ∘ H2 ∘ H3 ∘ H1 in composition order
        let g = Word::parse_composition("3231").unwrap();
        assert_eq!(g, Word::new(vec![H1, H3, H2, H3]));
        assert_eq!(apply_word(&g, &t(1, 3, 6)).unwrap(), t(9, 14, 17));
        assert_eq!(apply_word(&g, &t(6, 7, 9)).unwrap(), t(11, 15, 17));
    }

    #[test]
    fn expand_step_keeps_duplicates() {
        assert_eq!(expand_step(&t(0, 0, 0)).unwrap(), [t(1, 0, 0), t(0, 1, 0), t(0, 0, 1)]);
        let images = expand_step(&t(1, 2, 3)).unwrap();
        let oracle = [H1, H2, H3].map(|op| apply_operator(op, &t(1, 2, 3)).unwrap());
        assert_eq!(images, oracle);
        assert_eq!(images, [t(5, 2, 3), t(1, 3, 3), t(1, 2, 1)]);
        // a + b odd, c = (a + b + 1) / 2 is fixed by H3
        assert!(expand_step(&t(0, 1, 1)).unwrap().contains(&t(0, 1, 1)));
        assert_eq!(expand_step(&t(3, 3, 3)).unwrap().len(), 3);
    }

    #[test]
    fn commutation_example() {
        let h12 = Word::new(vec![H2, H1]);
        let h21 = Word::new(vec![H1, H2]);
        assert_eq!(apply_word(&h12, &t(2, 2, 1)).unwrap(), apply_word(&h21, &t(2, 2, 1)).unwrap());
        assert_ne!(apply_word(&h12, &t(0, 0, 0)).unwrap(), apply_word(&h21, &t(0, 0, 0)).unwrap());
    }

    #[test]
    fn order_six_example() {
        let w = Word::new(vec![H2, H1]).power(3);
        let mut cur = t(4, 7, 5);
        for op in w.ops() {
            cur = apply_operator(*op, &cur).unwrap();
        }
        assert_eq!(cur, t(4, 7, 5));
        assert_eq!(apply_word(&w, &t(4, 7, 5)).unwrap(), t(4, 7, 5));
    }

    #[test]
    fn f_iteration_sequence() {
        // F = H3 ∘ H1 ∘ H3 ∘ H2
        let f = Word::parse_composition("3132").unwrap();
        let expected = [17, 19, 27, 41, 61, 87, 119, 157, 201, 251, 307];
        assert_eq!(iterate_word_component(&t(9, 14, 17), &f, 3, 10).unwrap(), expected);
        assert_eq!(iterate_word_component(&t(11, 15, 17), &f, 3, 10).unwrap(), expected);
        let closed: Vec<i64> = (0..=10).map(|k| 3 * k * k - k + 17).collect();
        assert_eq!(closed, expected);
    }

    #[test]
    fn empty_word_iteration_is_constant() {
        let seq = iterate_word_component(&t(4, -2, 8), &Word::empty(), 2, 3).unwrap();
        assert_eq!(seq, vec![-2, -2, -2, -2]);
        assert!(iterate_word_component(&t(0, 0, 0), &Word::empty(), 4, 3).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let err = apply_operator(H1, &t(i64::MIN, 0, 0)).unwrap_err();
        assert!(matches!(err, Error::Overflow(_)));
        assert!(apply_operator(H3, &t(i64::MAX, 1, 0)).is_err());
    }

    #[test]
    fn bigint_matches_i64() {
        let w = Word::parse_execution("13211").unwrap();
        let big = Triple::new(BigInt::from(1), BigInt::from(2), BigInt::from(3));
        let out = apply_word(&w, &big).unwrap();
        assert_eq!(out, Triple::new(BigInt::from(5), BigInt::from(9), BigInt::from(5)));
        let huge = Triple::new(BigInt::from(i64::MAX), BigInt::from(i64::MAX), BigInt::from(0));
        let image = apply_operator(H3, &huge).unwrap();
        assert_eq!(image.z, BigInt::from(i64::MAX) * 2 + 1);
    }

    #[test]
    fn word_parsing() {
        assert_eq!("123".parse::<Word>().unwrap().ops(), &[H1, H2, H3]);
        assert_eq!(Word::parse_composition("123").unwrap().ops(), &[H3, H2, H1]);
        assert!(Word::parse_execution("124").is_err());
        assert_eq!(Word::parse_execution("").unwrap(), Word::empty());
        assert_eq!("H2".parse::<OperatorId>().unwrap(), H2);
        assert!("H4".parse::<OperatorId>().is_err());
        assert_eq!(Word::parse_composition("3132").unwrap().composition_string(), "3132");
    }

    #[test]
    fn triple_parsing_and_serde() {
        assert_eq!("1,-2,3".parse::<Triple>().unwrap(), t(1, -2, 3));
        assert!("1,2".parse::<Triple>().is_err());
        assert!("1,x,3".parse::<Triple>().is_err());
        assert_eq!(serde_json::to_string(&t(1, -2, 3)).unwrap(), "[1,-2,3]");
        let back: Triple = serde_json::from_str("[4,5,6]").unwrap();
        assert_eq!(back, t(4, 5, 6));
    }

    #[test]
    fn identity_report_on_small_box() {
        let samples: Vec<Triple> =
            (-3..=3).flat_map(|x| (-3..=3).flat_map(move |y| (-3..=3).map(move |z| t(x, y, z)))).collect();
        let report = verify_identities(&samples);
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert_eq!(report.checks.len(), 3 + 6 + 3 + 3 + 3 + 2);
    }

    #[test]
    fn identity_report_flags_missing_witness() {
        // only commuting samples: no non-commutativity witness for H1/H2
        let report = verify_identities(&[t(2, 2, 1)]);
        let check = report.checks.iter().find(|c| c.name.starts_with("non-commutativity H1H2")).unwrap();
        assert!(!check.passed);
    }
}
