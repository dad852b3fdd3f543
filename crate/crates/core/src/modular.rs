//! Residue-class densities of tiling weights modulo a prime.
//!
//! Over one period `(m, n) ∈ [0, p)²` the weights of a germ tiling are the
//! values of a quadratic form: `x² + xy + y²` for the `(0,1,1)` towers and
//! `x² + y² + xy - x - y` for `(0,0,0)`. Counts are exact and densities are
//! exact rationals with denominator `p²`.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::closed_weight_wide;
use crate::reduction::Germ;
use crate::triple::Triple;

/// Largest prime a brute-force sweep accepts by default.
pub const DEFAULT_SWEEP_CAP: u64 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityTable {
    pub p: u64,
    pub germ: Germ,
    /// `counts[l]` = number of period nodes with weight `≡ l (mod p)`.
    pub counts: Vec<u64>,
}

impl DensityTable {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn density(&self, l: usize) -> Ratio<u64> {
        Ratio::new(self.counts[l], self.p * self.p)
    }

    pub fn densities(&self) -> Vec<Ratio<u64>> {
        (0..self.counts.len()).map(|l| self.density(l)).collect()
    }

    /// Rows `l,count,density_num,density_den` with the density reduced.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,count,density_num,density_den\n");
        for (l, d) in self.densities().iter().enumerate() {
            out.push_str(&format!("{l},{},{},{}\n", self.counts[l], d.numer(), d.denom()));
        }
        out
    }

    /// The table of the tiling shifted by `h`: class `l` moves to `l + h`.
    pub fn shifted(&self, h: i64) -> DensityTable {
        let p = self.p as i64;
        let mut counts = vec![0; self.counts.len()];
        for (l, &c) in self.counts.iter().enumerate() {
            counts[(l as i64 + h).rem_euclid(p) as usize] = c;
        }
        DensityTable { p: self.p, germ: self.germ, counts }
    }
}

impl Serialize for DensityTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let densities: Vec<[u64; 2]> = self.densities().iter().map(|d| [*d.numer(), *d.denom()]).collect();
        let mut s = serializer.serialize_struct("DensityTable", 4)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("germ", &self.germ)?;
        s.serialize_field("counts", &self.counts)?;
        s.serialize_field("densities", &densities)?;
        s.end()
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&p| is_prime(p)).collect()
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{p} is not prime")))
    }
}

fn require_within_cap(p: u64, cap: u64) -> Result<()> {
    if p > cap {
        Err(Error::resource(format!("prime {p} exceeds the sweep cap {cap}")))
    } else {
        Ok(())
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = (base % p) as u128;
    let m = p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Legendre symbol `(a / p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::invalid(format!("Legendre symbol needs an odd prime, got {p}")));
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    match pow_mod(r, (p - 1) / 2, p) {
        1 => Ok(1),
        x if x == p - 1 => Ok(-1),
        x => unreachable!("Euler's criterion gave {x} mod {p}"),
    }
}

/// Residue class whose count deviates from the rest, for `p >= 5`.
pub fn special_class(germ: Germ, p: u64) -> Option<u64> {
    if p < 5 {
        return None;
    }
    match germ {
        Germ::G000 if p % 6 == 1 => Some((p - 1) / 3),
        Germ::G000 => Some((2 * p - 1) / 3),
        _ => Some(0),
    }
}

fn tally(p: u64, row: impl Fn(u64, &mut [u64]) + Sync) -> Vec<u64> {
    (0..p)
        .into_par_iter()
        .fold(
            || vec![0u64; p as usize],
            |mut acc, x| {
                row(x, &mut acc);
                acc
            },
        )
        .reduce(
            || vec![0u64; p as usize],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Brute-force count of the germ's quadratic form over `[0, p)²`.
pub fn count_form_residues(germ: Germ, p: u64) -> Result<DensityTable> {
    count_form_residues_with_cap(germ, p, DEFAULT_SWEEP_CAP)
}

pub fn count_form_residues_with_cap(germ: Germ, p: u64, cap: u64) -> Result<DensityTable> {
    require_prime(p)?;
    require_within_cap(p, cap)?;
    let counts = match germ {
        Germ::G000 => tally(p, |x, acc| {
            for y in 0..p {
                acc[((x * x + y * y + x * y + 2 * p - x - y) % p) as usize] += 1;
            }
        }),
        _ => tally(p, |x, acc| {
            for y in 0..p {
                acc[((x * x + x * y + y * y) % p) as usize] += 1;
            }
        }),
    };
    Ok(DensityTable { p, germ, counts })
}

/// Closed-form counts (numerators over `p²`).
pub fn theoretical_density(germ: Germ, p: u64) -> Result<DensityTable> {
    require_prime(p)?;
    let size = p as usize;
    let counts = match (germ, p) {
        (Germ::G000, 2) => vec![3, 1],
        (Germ::G000, 3) => vec![3, 3, 3],
        (_, 2) => vec![1, 3],
        (_, 3) => vec![3, 6, 0],
        _ => {
            let special = special_class(germ, p).expect("p >= 5") as usize;
            let (generic, rare) = if p % 6 == 1 { (p - 1, 2 * p - 1) } else { (p + 1, 1) };
            let mut counts = vec![generic; size];
            counts[special] = rare;
            counts
        }
    };
    Ok(DensityTable { p, germ, counts })
}

/// Counts of `G(base | m, n) mod p` over one period `[0, p)²`.
///
/// The table is labelled with the germ of `base`'s tower.
pub fn empirical_tiling_density(base: &Triple, p: u64) -> Result<DensityTable> {
    empirical_tiling_density_with_cap(base, p, DEFAULT_SWEEP_CAP)
}

pub fn empirical_tiling_density_with_cap(base: &Triple, p: u64, cap: u64) -> Result<DensityTable> {
    require_prime(p)?;
    require_within_cap(p, cap)?;
    let germ = crate::reduction::classify(base)?.germ;
    let modulus = p as i128;
    let counts = tally(p, |m, acc| {
        for n in 0..p {
            let w = closed_weight_wide(base, m as i128, n as i128);
            acc[w.rem_euclid(modulus) as usize] += 1;
        }
    });
    Ok(DensityTable { p, germ, counts })
}
