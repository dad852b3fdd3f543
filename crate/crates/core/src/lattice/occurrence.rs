use super::{minimum_weight, Bounds, TrianglePlacement, WeightGrid};
use crate::error::Result;
use crate::triple::Triple;

/// Chebyshev box of radius `10 + spread(target)` around the tiling center.
pub fn default_occurrence_bounds(base: &Triple, target: &Triple) -> Result<Bounds> {
    let center = minimum_weight(base)?.argmin[0];
    let comps = target.to_array();
    let spread = comps.iter().max().unwrap() - comps.iter().min().unwrap();
    Ok(Bounds::around(center, 10 + spread))
}

/// Unit triangles inside `bounds` whose ordered triple equals `target`.
///
/// A triangle's ordered triple reads its vertices by position class, which
/// is the order the operators themselves produce; see
/// [`TrianglePlacement`].
pub fn occurrences(base: &Triple, target: &Triple, bounds: Bounds) -> Result<Vec<TrianglePlacement>> {
    let grid = WeightGrid::from_closed_form(*base, bounds)?;
    Ok(bounds.triangles().filter(|t| grid.triple_at(t).as_ref() == Some(target)).collect())
}

pub fn count_occurrences(base: &Triple, target: &Triple, bounds: Bounds) -> Result<usize> {
    Ok(occurrences(base, target, bounds)?.len())
}
