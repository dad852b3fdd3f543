//! Geometric realization of a tiling on the triangular lattice.
//!
//! Node `(m, n)` sits at `m + n·ρ` with `ρ = 1/2 + (√3/2)i`. The generating
//! triple occupies the anchor triangle: `x` at `(0,0)`, `y` at `(1,0)`, `z` at
//! `(0,1)`. With that embedding every node weight is given by
//!
//! ```text
//! G(a,b,c | m,n) = -(m+n-1)a + mb + nc + (m² + n² + mn - m - n)
//! ```
//!
//! Nodes fall into three classes `(m + 2n) mod 3`; the vertices of any unit
//! triangle carry one node of each class and the class is the position that
//! node occupies in the triangle's ordered triple.

mod ellipse;
mod occurrence;
mod region;

pub use ellipse::{
    count_below, is_loeschian, is_loeschian_by_form, is_represented, loeschian_sieve, minimum_weight,
    represented_below, MinimumWeight, Representation,
};
pub use occurrence::{count_occurrences, default_occurrence_bounds, occurrences};
pub use region::{generate_region, Lozenge, WeightGrid};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triple::{add, mul, sub, TileInt, Triple};

/// Lattice node `m·1 + n·ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeCoord {
    pub m: i64,
    pub n: i64,
}

/// The six unit steps of the triangular lattice, counterclockwise from `+1`.
pub const UNIT_STEPS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

impl NodeCoord {
    pub const fn new(m: i64, n: i64) -> Self {
        NodeCoord { m, n }
    }

    /// Which triple position (0, 1 or 2) this node occupies in every
    /// triangle containing it.
    pub fn position_class(self) -> usize {
        (self.m + 2 * self.n).rem_euclid(3) as usize
    }

    /// Graph distance on the triangular lattice.
    pub fn distance(self, other: NodeCoord) -> i64 {
        let dm = self.m - other.m;
        let dn = self.n - other.n;
        (dm.abs() + dn.abs() + (dm + dn).abs()) / 2
    }

    pub fn neighbors(self) -> [NodeCoord; 6] {
        UNIT_STEPS.map(|(dm, dn)| NodeCoord::new(self.m + dm, self.n + dn))
    }

    pub fn is_adjacent(self, other: NodeCoord) -> bool {
        self.distance(other) == 1
    }

    /// Euclidean position in units of the lattice spacing.
    pub fn to_plane(self) -> (f64, f64) {
        (self.m as f64 + self.n as f64 / 2.0, self.n as f64 * 3f64.sqrt() / 2.0)
    }

    /// Reflection of `self` across the edge `p`–`q`: `p + q - self`.
    pub fn reflect(self, p: NodeCoord, q: NodeCoord) -> NodeCoord {
        NodeCoord::new(p.m + q.m - self.m, p.n + q.n - self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Up,
    Down,
}

/// A unit triangle. Vertices are stored by position class, so reading the
/// weights at `v1, v2, v3` yields the ordered triple the tiling realizes there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrianglePlacement {
    pub v1: NodeCoord,
    pub v2: NodeCoord,
    pub v3: NodeCoord,
}

impl TrianglePlacement {
    /// The anchor triangle `(0,0), (1,0), (0,1)`.
    pub const ANCHOR: TrianglePlacement =
        TrianglePlacement { v1: NodeCoord::new(0, 0), v2: NodeCoord::new(1, 0), v3: NodeCoord::new(0, 1) };

    /// Builds a placement from three mutually adjacent nodes in any order.
    pub fn from_nodes(nodes: [NodeCoord; 3]) -> Result<Self> {
        let [a, b, c] = nodes;
        if !(a.is_adjacent(b) && b.is_adjacent(c) && a.is_adjacent(c)) {
            return Err(Error::invalid(format!("nodes {nodes:?} do not form a unit triangle")));
        }
        let mut slots = [None; 3];
        for v in nodes {
            slots[v.position_class()] = Some(v);
        }
        match slots {
            [Some(v1), Some(v2), Some(v3)] => Ok(TrianglePlacement { v1, v2, v3 }),
            _ => unreachable!("a unit triangle has one node of each class"),
        }
    }

    /// `(m,n), (m+1,n), (m,n+1)`.
    pub fn up(m: i64, n: i64) -> Self {
        Self::from_nodes([NodeCoord::new(m, n), NodeCoord::new(m + 1, n), NodeCoord::new(m, n + 1)])
            .expect("up triangle")
    }

    /// `(m+1,n), (m,n+1), (m+1,n+1)`.
    pub fn down(m: i64, n: i64) -> Self {
        Self::from_nodes([NodeCoord::new(m + 1, n), NodeCoord::new(m, n + 1), NodeCoord::new(m + 1, n + 1)])
            .expect("down triangle")
    }

    pub fn vertices(&self) -> [NodeCoord; 3] {
        [self.v1, self.v2, self.v3]
    }

    pub fn orientation(&self) -> Orientation {
        let s = self.v1.m + self.v2.m + self.v3.m;
        if s.rem_euclid(3) == 1 {
            Orientation::Up
        } else {
            Orientation::Down
        }
    }

    /// `(m, n, orientation)` such that this is `up(m, n)` or `down(m, n)`.
    pub fn key(&self) -> (i64, i64, Orientation) {
        let sm = self.v1.m + self.v2.m + self.v3.m;
        let sn = self.v1.n + self.v2.n + self.v3.n;
        (sm.div_euclid(3), sn.div_euclid(3), self.orientation())
    }

    /// The triangle across the edge opposite the vertex in `position`.
    pub fn reflect(&self, position: usize) -> TrianglePlacement {
        let mut vs = self.vertices();
        let (p, q) = (vs[(position + 1) % 3], vs[(position + 2) % 3]);
        vs[position] = vs[position].reflect(p, q);
        TrianglePlacement { v1: vs[0], v2: vs[1], v3: vs[2] }
    }
}

/// Inclusive rectangle of lattice coordinates. Empty when `m_min > m_max` or
/// `n_min > n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub m_min: i64,
    pub m_max: i64,
    pub n_min: i64,
    pub n_max: i64,
}

impl Bounds {
    pub const EMPTY: Bounds = Bounds { m_min: 0, m_max: -1, n_min: 0, n_max: -1 };

    pub fn new(m_min: i64, m_max: i64, n_min: i64, n_max: i64) -> Self {
        Bounds { m_min, m_max, n_min, n_max }
    }

    /// `|m|, |n| <= r`.
    pub fn square(r: i64) -> Self {
        Bounds::new(-r, r, -r, r)
    }

    /// Chebyshev ball of radius `r` around `center`.
    pub fn around(center: NodeCoord, r: i64) -> Self {
        Bounds::new(center.m - r, center.m + r, center.n - r, center.n + r)
    }

    pub fn is_empty(&self) -> bool {
        self.m_min > self.m_max || self.n_min > self.n_max
    }

    pub fn width(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.m_max - self.m_min + 1) as usize
        }
    }

    pub fn height(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.n_max - self.n_min + 1) as usize
        }
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn contains(&self, v: NodeCoord) -> bool {
        (self.m_min..=self.m_max).contains(&v.m) && (self.n_min..=self.n_max).contains(&v.n)
    }

    pub fn contains_triangle(&self, t: &TrianglePlacement) -> bool {
        t.vertices().iter().all(|&v| self.contains(v))
    }

    /// Row-major index with `n` as the slow coordinate.
    pub(crate) fn index(&self, v: NodeCoord) -> Option<usize> {
        self.contains(v).then(|| (v.n - self.n_min) as usize * self.width() + (v.m - self.m_min) as usize)
    }

    /// Nodes ordered by `(n, m)`.
    pub fn nodes(&self) -> impl Iterator<Item = NodeCoord> + '_ {
        let (m_min, m_max) = (self.m_min, self.m_max);
        (self.n_min..=self.n_max).flat_map(move |n| (m_min..=m_max).map(move |m| NodeCoord::new(m, n)))
    }

    /// All unit triangles with every vertex inside the bounds.
    pub fn triangles(&self) -> impl Iterator<Item = TrianglePlacement> + '_ {
        (self.n_min..self.n_max).flat_map(move |n| {
            (self.m_min..self.m_max).flat_map(move |m| [TrianglePlacement::up(m, n), TrianglePlacement::down(m, n)])
        })
    }
}

/// Weight on the straight line through adjacent nodes `x` (k = 0) and `y`
/// (k = 1): `-(k-1)x + ky + k(k-1)`.
pub fn line_weight<T: TileInt>(x: &T, y: &T, k: i64) -> Result<T> {
    const WHAT: &str = "line weight";
    let kt = T::from(k);
    let km1 = T::from(k.checked_sub(1).ok_or(Error::Overflow(WHAT))?);
    let lhs = sub(&mul(&kt, y, WHAT)?, &mul(&km1, x, WHAT)?, WHAT)?;
    add(&lhs, &mul(&kt, &km1, WHAT)?, WHAT)
}

/// Closed-form weight at node `(m, n)` of the tiling anchored at `base`.
pub fn closed_weight<T: TileInt>(base: &Triple<T>, m: i64, n: i64) -> Result<T> {
    const WHAT: &str = "closed-form weight";
    let (mt, nt) = (T::from(m), T::from(n));
    let one = T::one();
    let mn = add(&mt, &nt, WHAT)?;
    let a_coef = sub(&one, &mn, WHAT)?;
    let linear =
        add(&add(&mul(&a_coef, &base.x, WHAT)?, &mul(&mt, &base.y, WHAT)?, WHAT)?, &mul(&nt, &base.z, WHAT)?, WHAT)?;
    let quad = add(&add(&mul(&mt, &mt, WHAT)?, &mul(&nt, &nt, WHAT)?, WHAT)?, &mul(&mt, &nt, WHAT)?, WHAT)?;
    add(&linear, &sub(&quad, &mn, WHAT)?, WHAT)
}

/// [`closed_weight`] evaluated in 128-bit arithmetic. Exact for every `i64`
/// base and coordinates with `|m|, |n| < 2^40`.
pub fn closed_weight_wide(base: &Triple, m: i128, n: i128) -> i128 {
    let (a, b, c) = (base.x as i128, base.y as i128, base.z as i128);
    -(m + n - 1) * a + m * b + n * c + (m * m + n * n + m * n - m - n)
}

pub(crate) fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow("closed-form weight"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Repeated collinear rule `z = -x + 2y + 2` starting from `x, y`.
    fn collinear_oracle(x: i64, y: i64, k: usize) -> i64 {
        let (mut p, mut q) = (x, y);
        if k == 0 {
            return x;
        }
        for _ in 1..k {
            let r = -p + 2 * q + 2;
            p = q;
            q = r;
        }
        q
    }

    #[test]
    fn line_weight_anchor_cases() {
        assert_eq!(line_weight(&7i64, &-3, 0).unwrap(), 7);
        assert_eq!(line_weight(&7i64, &-3, 1).unwrap(), -3);
        assert_eq!(line_weight(&5i64, &11, 2).unwrap(), -5 + 22 + 2);
        let zeros: Vec<i64> = (0..6).map(|k| line_weight(&0i64, &0, k).unwrap()).collect();
        assert_eq!(zeros, vec![0, 0, 2, 6, 12, 20]);
        let oracle: Vec<i64> = (0..6).map(|k| collinear_oracle(0, 0, k)).collect();
        assert_eq!(zeros, oracle);
        for (x, y) in [(3, -8), (-12, 40), (1, 1)] {
            for k in 0..20 {
                assert_eq!(line_weight(&x, &y, k as i64).unwrap(), collinear_oracle(x, y, k));
            }
        }
    }

    #[test]
    fn closed_weight_anchor_and_known_values() {
        let base = Triple::<i64>::new(4, 7, 5);
        assert_eq!(closed_weight(&base, 0, 0).unwrap(), 4);
        assert_eq!(closed_weight(&base, 1, 0).unwrap(), 7);
        assert_eq!(closed_weight(&base, 0, 1).unwrap(), 5);
        // H1 image across the shared edge
        assert_eq!(closed_weight(&base, 1, 1).unwrap(), -4 + 7 + 5 + 1);
        assert_eq!(closed_weight(&Triple::<i64>::new(0, 0, 0), 2, 2).unwrap(), 8);
        for m in -10..=10 {
            for n in -10..=10 {
                assert_eq!(closed_weight(&Triple::<i64>::new(0, 1, 1), m, n).unwrap(), m * m + n * n + m * n);
            }
            assert_eq!(closed_weight(&base, m, 0).unwrap(), line_weight(&4i64, &7, m).unwrap());
        }
    }

    #[test]
    fn closed_weight_overflow() {
        assert!(closed_weight(&Triple::<i64>::new(0, 0, 0), i64::MAX / 2, 3).is_err());
        let big = Triple::new(num_bigint::BigInt::from(0), 0.into(), 0.into());
        assert!(closed_weight(&big, i64::MAX / 2, 3).is_ok());
    }

    #[test]
    fn triangle_placement() {
        let up = TrianglePlacement::up(0, 0);
        assert_eq!(up, TrianglePlacement::ANCHOR);
        assert_eq!(up.orientation(), Orientation::Up);
        assert_eq!(up.key(), (0, 0, Orientation::Up));
        let down = TrianglePlacement::down(-3, 5);
        assert_eq!(down.orientation(), Orientation::Down);
        assert_eq!(down.key(), (-3, 5, Orientation::Down));
        // reflecting the anchor across y–z lands on (1,1), the H1 image
        let r = up.reflect(0);
        assert_eq!(r.v1, NodeCoord::new(1, 1));
        assert_eq!(r, TrianglePlacement::down(0, 0));
        assert!(
            TrianglePlacement::from_nodes([NodeCoord::new(0, 0), NodeCoord::new(1, 1), NodeCoord::new(0, 1)]).is_err()
        );
        for v in up.vertices() {
            assert!(v.neighbors().iter().all(|u| u.distance(v) == 1));
        }
    }

    #[test]
    fn bounds_iteration_order() {
        let b = Bounds::new(0, 1, 0, 1);
        let nodes: Vec<_> = b.nodes().map(|v| (v.m, v.n)).collect();
        assert_eq!(nodes, vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
        assert_eq!(b.triangles().count(), 2);
        assert!(Bounds::EMPTY.is_empty());
        assert_eq!(Bounds::EMPTY.nodes().count(), 0);
        assert_eq!(Bounds::square(2).len(), 25);
    }
}
