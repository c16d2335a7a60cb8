use serde::{Deserialize, Serialize};

use super::genfun::basis_dimension_polynomial;
use super::module_support;
use crate::error::{Error, Result};
use crate::polygon::{Hull, LatticePoint, LatticePolygon, PointSet};

/// Which geometric criterion makes the removed points a regular sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RemovalCertificate {
    Nothing,
    SinglePoint,
    OppositeVertices,
    TriangleVertices,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RemovalPlan {
    pub removed: Vec<LatticePoint>,
    pub certificate: RemovalCertificate,
}

impl RemovalPlan {
    pub fn none() -> RemovalPlan {
        RemovalPlan {
            removed: Vec::new(),
            certificate: RemovalCertificate::Nothing,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.removed.is_empty()
    }

    /// Re-checks the certificate against the polygon.
    pub fn verify(&self, poly: &LatticePolygon) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidPlan(why.to_string()));
        for p in &self.removed {
            if !poly.contains(p) {
                return Err(Error::NotInPolygon(*p));
            }
        }
        let r = &self.removed;
        let ok = match self.certificate {
            RemovalCertificate::Nothing => r.is_empty(),
            RemovalCertificate::SinglePoint => r.len() == 1,
            RemovalCertificate::OppositeVertices => {
                r.len() == 2 && r[0] != r[1] && regular_pair(poly, r[0], r[1])?
            }
            RemovalCertificate::TriangleVertices => {
                r.len() == 3 && regular_triple(poly, r[0], r[1], r[2])?
            }
        };
        if ok {
            Ok(())
        } else {
            bad("certificate does not hold for this polygon")
        }
    }
}

/// `P, Q` is a regular sequence iff the line through them cuts the polygon
/// into two triangles (possibly degenerate) with `P` and `Q` as vertices,
/// i.e. the polygon is `conv{P, Q, A, B}` with `A`, `B` on opposite sides.
pub fn regular_pair(poly: &LatticePolygon, p: LatticePoint, q: LatticePoint) -> Result<bool> {
    for x in [p, q] {
        if !poly.contains(&x) {
            return Err(Error::NotInPolygon(x));
        }
    }
    if p == q {
        return Ok(false);
    }
    let inner = poly.interior_points();
    if inner.contains(&p) || inner.contains(&q) {
        return Ok(false);
    }
    let side = |v: LatticePoint| (q - p).cross(v - p).signum();
    let v = poly.vertices();
    let above: Vec<_> = v.iter().copied().filter(|&x| side(x) > 0).collect();
    let below: Vec<_> = v.iter().copied().filter(|&x| side(x) < 0).collect();
    if above.len() > 1 || below.len() > 1 {
        return Ok(false);
    }
    let hull = Hull::of([p, q].into_iter().chain(above).chain(below));
    Ok(hull.n_points() == poly.n_points())
}

/// `P, Q, R` is a regular sequence iff the polygon is the triangle with
/// exactly these vertices.
pub fn regular_triple(
    poly: &LatticePolygon,
    p: LatticePoint,
    q: LatticePoint,
    r: LatticePoint,
) -> Result<bool> {
    for x in [p, q, r] {
        if !poly.contains(&x) {
            return Err(Error::NotInPolygon(x));
        }
    }
    let v = poly.vertices();
    Ok(v.len() == 3 && p != q && q != r && p != r && [p, q, r].iter().all(|x| v.contains(x)))
}

/// Largest bidegree block of `∧^p W ⊗ M_1` over the middle wedge degree,
/// used to rank candidate plans.
fn plan_peak(poly: &LatticePolygon, removed: &[LatticePoint]) -> u64 {
    let wedge: PointSet = poly.points().difference(&removed.iter().copied().collect());
    let m1 = module_support(poly, false, 1, removed);
    let p = (poly.n_points().saturating_sub(2) / 2).max(1);
    basis_dimension_polynomial(&wedge, &m1, p).peak(p)
}

/// Triangles lose their three vertices, quadrangles the better of the two
/// diagonals, everything else the single best point.
pub fn choose_removal(poly: &LatticePolygon) -> RemovalPlan {
    let v = poly.vertices();
    match v.len() {
        3 => RemovalPlan {
            removed: v.to_vec(),
            certificate: RemovalCertificate::TriangleVertices,
        },
        4 => {
            let diag = [[v[0], v[2]], [v[1], v[3]]];
            let best = diag
                .iter()
                .min_by_key(|d| (plan_peak(poly, &d[..]), d[0].min(d[1])))
                .unwrap();
            RemovalPlan {
                removed: best.to_vec(),
                certificate: RemovalCertificate::OppositeVertices,
            }
        }
        _ => {
            let best = poly
                .points()
                .iter()
                .min_by_key(|&&pt| plan_peak(poly, &[pt]))
                .unwrap();
            RemovalPlan {
                removed: vec![*best],
                certificate: RemovalCertificate::SinglePoint,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn square() -> LatticePolygon {
        LatticePolygon::from_coords(&[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap()
    }

    #[test]
    fn pairs() {
        assert_eq!(regular_pair(&square(), pt(0, 0), pt(1, 1)), Ok(true));
        assert_eq!(regular_pair(&square(), pt(0, 0), pt(1, 0)), Ok(false));
        assert_eq!(regular_pair(&LatticePolygon::sigma(3), pt(0, 0), pt(3, 0)), Ok(true));
        assert_eq!(
            regular_pair(&square(), pt(0, 0), pt(2, 2)),
            Err(Error::NotInPolygon(pt(2, 2)))
        );
    }

    #[test]
    fn triples() {
        let s = LatticePolygon::sigma(4);
        assert_eq!(regular_triple(&s, pt(0, 4), pt(4, 0), pt(0, 0)), Ok(true));
        assert_eq!(regular_triple(&square(), pt(0, 0), pt(1, 0), pt(1, 1)), Ok(false));
        let u = LatticePolygon::upsilon(1);
        assert_eq!(regular_triple(&u, pt(-1, -1), pt(1, 0), pt(0, 1)), Ok(true));
    }

    #[test]
    fn choices() {
        let plan = choose_removal(&LatticePolygon::sigma(4));
        assert_eq!(plan.certificate, RemovalCertificate::TriangleVertices);
        assert_eq!(plan.removed.len(), 3);
        let plan = choose_removal(&square());
        assert_eq!(plan.removed, vec![pt(0, 0), pt(1, 1)]);
        plan.verify(&square()).unwrap();
        let pent = LatticePolygon::from_coords(&[(0, 0), (3, 0), (4, 2), (1, 3), (-1, 1)]).unwrap();
        let plan = choose_removal(&pent);
        assert_eq!(plan.removed.len(), 1);
        plan.verify(&pent).unwrap();
        let wrong = RemovalPlan {
            removed: vec![pt(0, 0), pt(1, 0)],
            certificate: RemovalCertificate::OppositeVertices,
        };
        assert!(matches!(wrong.verify(&square()), Err(Error::InvalidPlan(_))));
    }
}
