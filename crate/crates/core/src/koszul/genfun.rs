use crate::polygon::{LatticePoint, PointSet};

/// Truncated `∏_{(i,j)∈A}(1 + X^i Y^j T) · Σ_{(i,j)∈B} X^i Y^j` stored as one
/// dense grid of coefficients per power of `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionPolynomial {
    p_max: usize,
    origin: LatticePoint,
    width: i64,
    height: i64,
    coeffs: Vec<Vec<u64>>,
}

impl DimensionPolynomial {
    pub fn p_max(&self) -> usize {
        self.p_max
    }

    /// `dim(∧^p V_A ⊗ V_B)_{(a,b)}`.
    pub fn coeff(&self, p: usize, ab: LatticePoint) -> u64 {
        if p > self.p_max {
            return 0;
        }
        let (dx, dy) = (ab.x - self.origin.x, ab.y - self.origin.y);
        if dx < 0 || dy < 0 || dx >= self.width || dy >= self.height {
            return 0;
        }
        self.coeffs[p][(dy * self.width + dx) as usize]
    }

    /// Nonzero coefficients of `T^p` in `(y, x)` order of the exponent.
    pub fn terms(&self, p: usize) -> Vec<(LatticePoint, u64)> {
        if p > self.p_max {
            return Vec::new();
        }
        let w = self.width.max(1);
        self.coeffs[p]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let i = i as i64;
                (LatticePoint::new(self.origin.x + i % w, self.origin.y + i / w), c)
            })
            .collect()
    }

    /// `dim(∧^p V_A ⊗ V_B)`.
    pub fn total(&self, p: usize) -> u64 {
        if p > self.p_max {
            return 0;
        }
        self.coeffs[p].iter().sum()
    }

    /// Largest single coefficient of `T^p`.
    pub fn peak(&self, p: usize) -> u64 {
        if p > self.p_max {
            return 0;
        }
        self.coeffs[p].iter().copied().max().unwrap_or(0)
    }
}

/// Coefficients of `f_{A,B}` up to `T^{p_max}` by subset-sum recursion.
pub fn basis_dimension_polynomial(a: &PointSet, b: &PointSet, p_max: usize) -> DimensionPolynomial {
    let p_max = p_max.min(a.len());
    let (Some((alo, ahi)), Some((blo, bhi))) = (a.bounding_box(), b.bounding_box()) else {
        // an empty A still contributes the constant 1 of the product
        return constant_term(b, p_max);
    };
    let pm = p_max as i64;
    // wedge sums of k ≤ p_max points of A
    let wlo = LatticePoint::new(alo.x.min(0) * pm, alo.y.min(0) * pm);
    let whi = LatticePoint::new(ahi.x.max(0) * pm, ahi.y.max(0) * pm);
    let ww = whi.x - wlo.x + 1;
    let wh = whi.y - wlo.y + 1;
    let cells = (ww * wh) as usize;
    let mut wedge = vec![vec![0u64; cells]; p_max + 1];
    wedge[0][((0 - wlo.y) * ww + (0 - wlo.x)) as usize] = 1;
    for (count, &pt) in a.iter().enumerate() {
        let shift = pt.y * ww + pt.x;
        for k in (1..=p_max.min(count + 1)).rev() {
            let (lower, upper) = wedge.split_at_mut(k);
            let (src, dst) = (&lower[k - 1], &mut upper[0]);
            for (i, &v) in src.iter().enumerate() {
                if v != 0 {
                    let j = i as i64 + shift;
                    dst[j as usize] += v;
                }
            }
        }
    }
    let origin = wlo + blo;
    let width = ww + (bhi.x - blo.x);
    let height = wh + (bhi.y - blo.y);
    let mut coeffs = vec![vec![0u64; (width * height) as usize]; p_max + 1];
    for k in 0..=p_max {
        for (i, &v) in wedge[k].iter().enumerate() {
            if v == 0 {
                continue;
            }
            let i = i as i64;
            let s = LatticePoint::new(wlo.x + i % ww, wlo.y + i / ww);
            for &c in b {
                let t = s + c - origin;
                coeffs[k][(t.y * width + t.x) as usize] += v;
            }
        }
    }
    DimensionPolynomial {
        p_max,
        origin,
        width,
        height,
        coeffs,
    }
}

fn constant_term(b: &PointSet, p_max: usize) -> DimensionPolynomial {
    let Some((lo, hi)) = b.bounding_box() else {
        return DimensionPolynomial {
            p_max,
            origin: LatticePoint::ORIGIN,
            width: 0,
            height: 0,
            coeffs: vec![Vec::new(); p_max + 1],
        };
    };
    let width = hi.x - lo.x + 1;
    let height = hi.y - lo.y + 1;
    let mut coeffs = vec![vec![0u64; (width * height) as usize]; p_max + 1];
    for c in b {
        coeffs[0][((c.y - lo.y) * width + (c.x - lo.x)) as usize] = 1;
    }
    DimensionPolynomial {
        p_max,
        origin: lo,
        width,
        height,
        coeffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::LatticePolygon;

    fn origin_only() -> PointSet {
        vec![LatticePoint::ORIGIN].into()
    }

    #[test]
    fn single_two_subset() {
        let a = LatticePolygon::sigma(1).points().clone();
        let f = basis_dimension_polynomial(&a, &origin_only(), 3);
        assert_eq!(f.coeff(2, LatticePoint::new(1, 1)), 1);
        assert_eq!(f.coeff(0, LatticePoint::ORIGIN), 1);
        assert_eq!(f.coeff(3, LatticePoint::new(1, 1)), 1);
    }

    #[test]
    fn totals_are_binomials() {
        let a = LatticePolygon::sigma(3).points().clone();
        let f = basis_dimension_polynomial(&a, &origin_only(), 10);
        let mut binom = 1u64;
        for k in 0..=10u64 {
            assert_eq!(f.total(k as usize), binom);
            binom = binom * (10 - k) / (k + 1);
        }
    }

    #[test]
    fn empty_supports() {
        let a = LatticePolygon::sigma(1).points().clone();
        let f = basis_dimension_polynomial(&a, &PointSet::new(), 2);
        assert_eq!(f.total(0) + f.total(1) + f.total(2), 0);
        let g = basis_dimension_polynomial(&PointSet::new(), &a, 2);
        assert_eq!((g.total(0), g.total(1)), (3, 0));
        assert!(g.terms(1).is_empty());
    }
}
