use super::point::{LatticePoint, PointSet};

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn floor_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

/// Convex hull of a finite lattice point set, of any dimension.
///
/// Vertices run counterclockwise starting from the smallest vertex in
/// `(y, x)` order. The lattice point cache is filled by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull {
    vertices: Vec<LatticePoint>,
    points: PointSet,
}

impl Hull {
    pub fn empty() -> Hull {
        Hull {
            vertices: Vec::new(),
            points: PointSet::new(),
        }
    }

    pub fn of<I: IntoIterator<Item = LatticePoint>>(pts: I) -> Hull {
        let vertices = hull_vertices(pts.into_iter().collect());
        let points = enumerate(&vertices, false);
        Hull { vertices, points }
    }

    /// `-1` for the empty set, then 0, 1, 2.
    pub fn dimension(&self) -> i32 {
        match self.vertices.len() {
            0 => -1,
            1 => 0,
            2 => 1,
            _ => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.points.contains(p)
    }

    /// Lattice points in the relative-to-the-plane interior; empty unless
    /// the hull is two-dimensional.
    pub fn interior_points(&self) -> PointSet {
        if self.dimension() < 2 {
            return PointSet::new();
        }
        enumerate(&self.vertices, true)
    }

    pub fn interior_hull(&self) -> Hull {
        Hull::of(self.interior_points())
    }

    /// `q·H`. The zero dilation of a nonempty hull is the origin.
    pub fn scale(&self, q: u32) -> Hull {
        if self.is_empty() {
            return Hull::empty();
        }
        Hull::of(self.vertices.iter().map(|&v| q as i64 * v))
    }

    pub fn translate(&self, v: LatticePoint) -> Hull {
        Hull {
            vertices: self.vertices.iter().map(|&p| p + v).collect(),
            points: self.points.translate(v),
        }
    }

    /// Minkowski sum; empty if either summand is empty.
    pub fn minkowski(&self, other: &Hull) -> Hull {
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for &a in &self.vertices {
            for &b in &other.vertices {
                sums.push(a + b);
            }
        }
        Hull::of(sums)
    }
}

fn hull_vertices(mut pts: Vec<LatticePoint>) -> Vec<LatticePoint> {
    pts.sort_unstable_by_key(|p| (p.x, p.y));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let turn = |o: LatticePoint, a: LatticePoint, b: LatticePoint| (a - o).cross(b - o);
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let mut hull = lower;
    if hull.len() >= 2 {
        let start = (0..hull.len()).min_by_key(|&i| hull[i]).unwrap();
        hull.rotate_left(start);
    }
    hull
}

fn enumerate(vertices: &[LatticePoint], strict: bool) -> PointSet {
    match vertices.len() {
        0 => PointSet::new(),
        1 => vec![vertices[0]].into(),
        2 => {
            let (a, b) = (vertices[0], vertices[1]);
            let d = b - a;
            let g = gcd(d.x, d.y);
            let step = LatticePoint::new(d.x / g, d.y / g);
            (0..=g).map(|k| a + k * step).collect()
        }
        n => {
            let ymin = vertices.iter().map(|v| v.y).min().unwrap();
            let ymax = vertices.iter().map(|v| v.y).max().unwrap();
            let slack = if strict { 1 } else { 0 };
            let mut out = Vec::new();
            'rows: for y in ymin..=ymax {
                let mut lo = i64::MIN;
                let mut hi = i64::MAX;
                for i in 0..n {
                    let v = vertices[i];
                    let e = vertices[(i + 1) % n] - v;
                    // inside on the left: e.y·(x − v.x) ≤ e.x·(y − v.y) − slack
                    let rhs = e.x * (y - v.y) - slack;
                    match e.y.signum() {
                        1 => hi = hi.min(v.x + floor_div(rhs, e.y)),
                        -1 => lo = lo.max(v.x + ceil_div(rhs, e.y)),
                        _ => {
                            if rhs < 0 {
                                continue 'rows;
                            }
                        }
                    }
                }
                for x in lo..=hi {
                    out.push(LatticePoint::new(x, y));
                }
            }
            // rows were emitted in (y, x) order already
            out.into()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<LatticePoint> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn division_helpers() {
        assert_eq!(floor_div(7, 2), 3);
        assert_eq!(floor_div(-7, 2), -4);
        assert_eq!(floor_div(7, -2), -4);
        assert_eq!(floor_div(-7, -2), 3);
        assert_eq!(ceil_div(7, 2), 4);
        assert_eq!(ceil_div(-7, 2), -3);
        assert_eq!(floor_div(6, -3), -2);
    }

    #[test]
    fn dimensions() {
        assert_eq!(Hull::of(Vec::new()).dimension(), -1);
        assert_eq!(Hull::of(pts(&[(2, 2), (2, 2)])).dimension(), 0);
        let seg = Hull::of(pts(&[(0, 0), (3, 3), (1, 1)]));
        assert_eq!(seg.dimension(), 1);
        assert_eq!(seg.n_points(), 4);
        assert!(seg.interior_points().is_empty());
    }

    #[test]
    fn triangle_points_and_interior() {
        let t = Hull::of(pts(&[(0, 0), (3, 0), (0, 3), (1, 1)]));
        assert_eq!(t.vertices(), pts(&[(0, 0), (3, 0), (0, 3)]).as_slice());
        assert_eq!(t.n_points(), 10);
        assert_eq!(t.interior_points().as_slice(), pts(&[(1, 1)]).as_slice());
        let u = Hull::of(pts(&[(-1, -1), (1, 0), (0, 1)]));
        assert_eq!(u.n_points(), 4);
        assert_eq!(u.interior_points().as_slice(), &[LatticePoint::ORIGIN]);
    }

    #[test]
    fn minkowski_and_scale() {
        let s = Hull::of(pts(&[(0, 0), (1, 0), (0, 1)]));
        assert_eq!(s.scale(3).n_points(), 10);
        assert_eq!(s.scale(0).vertices(), &[LatticePoint::ORIGIN]);
        assert_eq!(s.minkowski(&s), s.scale(2));
        assert!(s.minkowski(&Hull::empty()).is_empty());
    }
}
