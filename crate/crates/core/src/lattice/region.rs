use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{closed_weight, Bounds, NodeCoord, TrianglePlacement};
use crate::error::{Error, Result};
use crate::triple::{apply_operator, OperatorId, Triple};

/// Weights of a tiling over a rectangular region of the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightGrid {
    base: Triple,
    bounds: Bounds,
    weights: Vec<i64>,
}

/// Two unit triangles sharing the edge `short`; `long` joins the two
/// remaining vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lozenge {
    pub short: [NodeCoord; 2],
    pub long: [NodeCoord; 2],
}

impl Lozenge {
    /// The three lozenges whose short diagonal starts at `v`, one per edge
    /// direction.
    fn at(v: NodeCoord) -> [Lozenge; 3] {
        let at = |dm, dn| NodeCoord::new(v.m + dm, v.n + dn);
        [
            Lozenge { short: [v, at(1, 0)], long: [at(0, 1), at(1, -1)] },
            Lozenge { short: [v, at(0, 1)], long: [at(1, 0), at(-1, 1)] },
            Lozenge { short: [v, at(-1, 1)], long: [at(0, 1), at(-1, 0)] },
        ]
    }

    pub fn nodes(&self) -> [NodeCoord; 4] {
        [self.short[0], self.short[1], self.long[0], self.long[1]]
    }
}

#[derive(Serialize, Deserialize)]
struct GridNode {
    m: i64,
    n: i64,
    w: i64,
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    base: Triple,
    bounds: Bounds,
    nodes: Vec<GridNode>,
}

impl WeightGrid {
    /// Fills `bounds` directly from the closed form.
    pub fn from_closed_form(base: Triple, bounds: Bounds) -> Result<Self> {
        let weights = bounds.nodes().map(|v| closed_weight(&base, v.m, v.n)).collect::<Result<Vec<_>>>()?;
        Ok(WeightGrid { base, bounds, weights })
    }

    pub fn base(&self) -> Triple {
        self.base
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, v: NodeCoord) -> Option<i64> {
        self.bounds.index(v).map(|i| self.weights[i])
    }

    /// `(node, weight)` pairs ordered by `(n, m)`.
    pub fn iter(&self) -> impl Iterator<Item = (NodeCoord, i64)> + '_ {
        self.bounds.nodes().zip(self.weights.iter().copied())
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.weights.iter().copied().min()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.weights.iter().copied().max()
    }

    /// Ordered triple realized by a triangle, if it lies inside the grid.
    pub fn triple_at(&self, t: &TrianglePlacement) -> Option<Triple> {
        Some(Triple::new(self.get(t.v1)?, self.get(t.v2)?, self.get(t.v3)?))
    }

    /// Every lozenge with all four nodes inside the grid.
    pub fn lozenges(&self) -> impl Iterator<Item = Lozenge> + '_ {
        self.bounds.nodes().flat_map(Lozenge::at).filter(|l| l.nodes().iter().all(|&v| self.bounds.contains(v)))
    }

    /// Lozenges violating "long diagonal sum = short diagonal sum + 1".
    pub fn lozenge_violations(&self) -> Vec<Lozenge> {
        self.lozenges()
            .filter(|l| {
                let w = |v| self.get(v).expect("lozenge inside grid") as i128;
                w(l.long[0]) + w(l.long[1]) != w(l.short[0]) + w(l.short[1]) + 1
            })
            .collect()
    }

    /// Number of collinear node runs `x, y, z` (in the three lattice
    /// directions) violating `z = -x + 2y + 2`.
    pub fn collinear_violations(&self) -> usize {
        let mut bad = 0;
        for v in self.bounds.nodes() {
            for (dm, dn) in [(1, 0), (0, 1), (-1, 1)] {
                let y = NodeCoord::new(v.m + dm, v.n + dn);
                let z = NodeCoord::new(v.m + 2 * dm, v.n + 2 * dn);
                if let (Some(wx), Some(wy), Some(wz)) = (self.get(v), self.get(y), self.get(z)) {
                    if wz as i128 != -(wx as i128) + 2 * wy as i128 + 2 {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    /// CSV with header `m,n,weight`, rows ordered by `(n, m)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,weight\n");
        for (v, w) in self.iter() {
            let _ = writeln!(out, "{},{},{}", v.m, v.n, w);
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = GridJson {
            base: self.base,
            bounds: self.bounds,
            nodes: self.iter().map(|(v, w)| GridNode { m: v.m, n: v.n, w }).collect(),
        };
        serde_json::to_value(doc).expect("grid serializes")
    }

    /// Parses the JSON produced by [`WeightGrid::to_json_value`], checking
    /// that every node of `bounds` is present exactly once.
    pub fn from_json_value(value: serde_json::Value) -> Result<Self> {
        let doc: GridJson = serde_json::from_value(value).map_err(|e| Error::invalid(format!("grid json: {e}")))?;
        let mut slots: Vec<Option<i64>> = vec![None; doc.bounds.len()];
        for node in doc.nodes {
            let idx = doc
                .bounds
                .index(NodeCoord::new(node.m, node.n))
                .ok_or_else(|| Error::invalid(format!("node ({}, {}) outside bounds", node.m, node.n)))?;
            if slots[idx].replace(node.w).is_some() {
                return Err(Error::invalid(format!("duplicate node ({}, {})", node.m, node.n)));
            }
        }
        let weights = slots
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::invalid("grid json is missing nodes"))?;
        Ok(WeightGrid { base: doc.base, bounds: doc.bounds, weights })
    }
}

/// Grows the tiling from the anchor triangle by breadth-first lozenge
/// reflections, never leaving `bounds`.
///
/// Each step reflects one vertex of a known triangle across the opposite
/// edge; the new weight is the matching operator applied to the triangle's
/// ordered triple. A node reached twice must receive the same weight both
/// times, otherwise [`Error::Consistency`] is returned.
pub fn generate_region(base: Triple, bounds: Bounds) -> Result<WeightGrid> {
    let anchor = TrianglePlacement::ANCHOR;
    if !bounds.contains_triangle(&anchor) {
        return Err(Error::invalid("region bounds must contain the anchor triangle (0,0),(1,0),(0,1)"));
    }

    let mut weights: Vec<Option<i64>> = vec![None; bounds.len()];
    for (v, w) in anchor.vertices().into_iter().zip(base.to_array()) {
        weights[bounds.index(v).expect("anchor inside")] = Some(w);
    }

    let mut seen = HashSet::new();
    seen.insert(anchor.key());
    let mut queue = VecDeque::from([anchor]);

    while let Some(tri) = queue.pop_front() {
        let triple = Triple::from(tri.vertices().map(|v| {
            weights[bounds.index(v).expect("queued triangles lie inside")].expect("queued triangles are filled")
        }));
        for op in OperatorId::ALL {
            let next = tri.reflect(op.position());
            let Some(idx) = bounds.index(next.vertices()[op.position()]) else {
                continue;
            };
            let w = *apply_operator(op, &triple)?.get(op.position());
            match weights[idx] {
                Some(prev) if prev != w => {
                    let v = next.vertices()[op.position()];
                    return Err(Error::Consistency(format!(
                        "node ({}, {}) reached with weights {prev} and {w}",
                        v.m, v.n
                    )));
                }
                Some(_) => {}
                None => weights[idx] = Some(w),
            }
            if seen.insert(next.key()) {
                queue.push_back(next);
            }
        }
    }

    let weights = weights
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Consistency("region left nodes unreached".into()))?;
    Ok(WeightGrid { base, bounds, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::Word;

    #[test]
    fn bfs_matches_closed_form() {
        let bounds = Bounds::square(50);
        let grid = generate_region(Triple::new(0, 0, 0), bounds).unwrap();
        assert_eq!(grid.len(), 101 * 101);
        assert_eq!(grid, WeightGrid::from_closed_form(Triple::new(0, 0, 0), bounds).unwrap());
    }

    #[test]
    fn anchor_positions() {
        let grid = generate_region(Triple::new(4, 7, 5), Bounds::new(0, 1, 0, 1)).unwrap();
        assert_eq!(grid.get(NodeCoord::new(0, 0)), Some(4));
        assert_eq!(grid.get(NodeCoord::new(1, 0)), Some(7));
        assert_eq!(grid.get(NodeCoord::new(0, 1)), Some(5));
        assert_eq!(grid.get(NodeCoord::new(1, 1)), Some(-4 + 7 + 5 + 1));
        assert_eq!(grid.get(NodeCoord::new(2, 0)), None);
    }

    #[test]
    fn hexagon_path_consistency() {
        // Four counterclockwise steps around the node holding c, then compare
        // with the single clockwise H2 step.
        let (a, b, c) = (3i64, -8i64, 11i64);
        let base = Triple::new(a, b, c);
        let d = *apply_operator(OperatorId::H1, &base).unwrap().get(0);
        let e = -b + d + c + 1;
        let f = -d + e + c + 1;
        let g = -e + f + c + 1;
        assert_eq!(e, -a + 2 * c + 2);
        assert_eq!(f, -b + 2 * c + 2);
        assert_eq!(g, a - b + c + 1);
        assert_eq!(*apply_operator(OperatorId::H2, &base).unwrap().get(1), g);

        let grid = generate_region(base, Bounds::square(3)).unwrap();
        let hexagon = NodeCoord::new(0, 1).neighbors().map(|v| grid.get(v).unwrap());
        for w in [a, b, d, e, f, g] {
            assert!(hexagon.contains(&w), "{w} missing from {hexagon:?}");
        }
        assert_eq!(grid.get(NodeCoord::new(-1, 1)), Some(g));
    }

    #[test]
    fn rules_hold_on_generated_grid() {
        let grid = generate_region(Triple::new(-5, 12, 3), Bounds::new(-7, 9, -4, 6)).unwrap();
        assert!(grid.lozenges().count() > 0);
        assert!(grid.lozenge_violations().is_empty());
        assert_eq!(grid.collinear_violations(), 0);
    }

    #[test]
    fn tampered_grid_breaks_rules() {
        let mut grid = WeightGrid::from_closed_form(Triple::new(0, 0, 0), Bounds::square(3)).unwrap();
        grid.weights[10] += 1;
        assert!(!grid.lozenge_violations().is_empty());
        assert!(grid.collinear_violations() > 0);
    }

    #[test]
    fn triangles_realize_operator_images() {
        let base = Triple::new(1, 2, 3);
        let grid = generate_region(base, Bounds::square(6)).unwrap();
        let w = Word::parse_execution("13211").unwrap();
        let mut tri = TrianglePlacement::ANCHOR;
        for op in w.ops() {
            tri = tri.reflect(op.position());
        }
        assert_eq!(grid.triple_at(&tri), Some(Triple::new(5, 9, 5)));
    }

    #[test]
    fn region_must_contain_anchor() {
        assert!(matches!(generate_region(Triple::new(0, 0, 0), Bounds::new(1, 5, 1, 5)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn json_round_trip() {
        let grid = generate_region(Triple::new(0, 1, 1), Bounds::new(-1, 2, 0, 1)).unwrap();
        let value = grid.to_json_value();
        assert_eq!(value["base"], serde_json::json!([0, 1, 1]));
        assert_eq!(value["nodes"].as_array().unwrap().len(), 8);
        assert_eq!(WeightGrid::from_json_value(value).unwrap(), grid);
        let broken = serde_json::json!({"base": [0,0,0], "bounds": Bounds::square(1), "nodes": []});
        assert!(WeightGrid::from_json_value(broken).is_err());
    }

    #[test]
    fn csv_layout() {
        let grid = WeightGrid::from_closed_form(Triple::new(0, 1, 1), Bounds::square(1)).unwrap();
        let csv = grid.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "m,n,weight");
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[1], "-1,-1,3");
        assert_eq!(lines[2], "0,-1,1");
        let empty = WeightGrid::from_closed_form(Triple::new(0, 0, 0), Bounds::EMPTY).unwrap();
        assert_eq!(empty.to_csv(), "m,n,weight\n");
    }
}
