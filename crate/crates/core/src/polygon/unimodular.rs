use std::fmt;

use serde::{Deserialize, Serialize};

use super::hull::{floor_div, gcd};
use super::{Hull, LatticePoint, LatticePolygon};

/// `x ↦ M·x + shift` with `det M = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineUnimodularMap {
    pub matrix: [[i64; 2]; 2],
    pub shift: LatticePoint,
}

impl AffineUnimodularMap {
    pub const IDENTITY: AffineUnimodularMap = AffineUnimodularMap {
        matrix: [[1, 0], [0, 1]],
        shift: LatticePoint::ORIGIN,
    };

    /// Returns `None` unless `|det matrix| = 1`.
    pub fn new(matrix: [[i64; 2]; 2], shift: LatticePoint) -> Option<Self> {
        let m = AffineUnimodularMap { matrix, shift };
        (m.det().abs() == 1).then_some(m)
    }

    pub fn det(&self) -> i64 {
        let m = self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn linear(&self, p: LatticePoint) -> LatticePoint {
        let m = self.matrix;
        LatticePoint::new(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y)
    }

    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        self.linear(p) + self.shift
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineUnimodularMap) -> AffineUnimodularMap {
        let (a, b) = (self.matrix, other.matrix);
        let mut m = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        AffineUnimodularMap {
            matrix: m,
            shift: self.apply(other.shift),
        }
    }

    pub fn inverse(&self) -> AffineUnimodularMap {
        let m = self.matrix;
        let d = self.det();
        let inv = [[m[1][1] * d, -m[0][1] * d], [-m[1][0] * d, m[0][0] * d]];
        let lin = AffineUnimodularMap {
            matrix: inv,
            shift: LatticePoint::ORIGIN,
        };
        AffineUnimodularMap {
            matrix: inv,
            shift: -lin.linear(self.shift),
        }
    }

    /// Image of a polygon.
    pub fn image(&self, poly: &LatticePolygon) -> LatticePolygon {
        Hull::of(poly.vertices().iter().map(|&v| self.apply(v)))
            .into_polygon()
            .expect("unimodular images stay two-dimensional")
    }
}

impl fmt::Display for AffineUnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.matrix;
        write!(
            f,
            "[[{},{}],[{},{}]] + {}",
            m[0][0], m[0][1], m[1][0], m[1][1], self.shift
        )
    }
}

fn width_along(poly: &LatticePolygon, u: LatticePoint) -> i64 {
    let vals = poly.vertices().iter().map(|v| u.dot(*v));
    let (lo, hi) = vals.fold((i64::MAX, i64::MIN), |(lo, hi), t| (lo.min(t), hi.max(t)));
    hi - lo
}

/// Every primitive direction (up to sign) realising the lattice width,
/// together with that width.
pub fn width_directions(poly: &LatticePolygon) -> (i64, Vec<LatticePoint>) {
    // a unimodular triangle v0, v0+f1, v0+f2 inside the polygon: any
    // direction of width ≤ w has |⟨u,f1⟩|, |⟨u,f2⟩| ≤ w
    let v0 = poly.vertices()[0];
    let pts = poly.points().as_slice();
    let (f1, f2) = pts
        .iter()
        .flat_map(|&a| pts.iter().map(move |&b| (a - v0, b - v0)))
        .find(|(a, b)| a.cross(*b) == 1)
        .expect("every lattice polygon contains a unimodular triangle at each vertex");
    // dual basis: rows of the inverse of [f1 f2]
    let inv_row = |alpha: i64, beta: i64| {
        // u with ⟨u,f1⟩ = alpha, ⟨u,f2⟩ = beta, using det [f1 f2] = 1
        LatticePoint::new(alpha * f2.y - beta * f1.y, beta * f1.x - alpha * f2.x)
    };
    let bound = width_along(poly, LatticePoint::new(1, 0)).min(width_along(poly, LatticePoint::new(0, 1)));
    let mut best = i64::MAX;
    let mut dirs = Vec::new();
    for alpha in 0..=bound {
        for beta in -bound..=bound {
            if (alpha == 0 && beta <= 0) || gcd(alpha, beta) != 1 {
                continue;
            }
            let u = inv_row(alpha, beta);
            debug_assert_eq!((u.dot(f1), u.dot(f2)), (alpha, beta));
            let w = width_along(poly, u);
            if w < best {
                best = w;
                dirs.clear();
            }
            if w == best {
                dirs.push(u);
            }
        }
    }
    (best, dirs)
}

/// `lw(Δ)` and one direction attaining it.
pub fn lattice_width(poly: &LatticePolygon) -> (i64, LatticePoint) {
    let (w, dirs) = width_directions(poly);
    (w, dirs[0])
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

struct Candidate {
    key: Vec<LatticePoint>,
    map: AffineUnimodularMap,
}

fn candidates(poly: &LatticePolygon) -> Vec<Candidate> {
    let (lw, dirs) = width_directions(poly);
    let mut out = Vec::with_capacity(dirs.len() * 4);
    for u in dirs {
        for sigma in [1, -1] {
            let (u1, u2) = (sigma * u.x, sigma * u.y);
            let (_, x, y) = ext_gcd(u1, u2);
            // s·u2 − t·u1 = 1
            let (s, t) = (y, -x);
            for eps in [1, -1] {
                let m = AffineUnimodularMap {
                    matrix: [[eps * s, eps * t], [u1, u2]],
                    shift: LatticePoint::ORIGIN,
                };
                let img: Vec<LatticePoint> = poly.vertices().iter().map(|&v| m.apply(v)).collect();
                let ymin = img.iter().map(|p| p.y).min().unwrap();
                let x0 = img.iter().filter(|p| p.y == ymin).map(|p| p.x).min().unwrap();
                let t1 = AffineUnimodularMap {
                    matrix: m.matrix,
                    shift: LatticePoint::new(-x0, -ymin),
                };
                let xtop = img
                    .iter()
                    .filter(|p| p.y - ymin == lw)
                    .map(|p| p.x - x0)
                    .min()
                    .unwrap();
                let k = -floor_div(xtop, lw);
                let shear = AffineUnimodularMap {
                    matrix: [[1, k], [0, 1]],
                    shift: LatticePoint::ORIGIN,
                };
                let map = shear.compose(&t1);
                let mut key: Vec<LatticePoint> = poly.vertices().iter().map(|&v| map.apply(v)).collect();
                key.sort_unstable();
                out.push(Candidate { key, map });
            }
        }
    }
    out
}

/// Normal form under `AGL₂(ℤ)`: a sorted vertex list and a map sending the
/// polygon onto it. Two polygons are equivalent iff the vertex lists agree.
pub fn canonical_form(poly: &LatticePolygon) -> (Vec<LatticePoint>, AffineUnimodularMap) {
    let c = candidates(poly)
        .into_iter()
        .min_by(|a, b| a.key.cmp(&b.key))
        .unwrap();
    (c.key, c.map)
}

/// All affine unimodular maps sending the polygon onto itself.
pub fn symmetry_group(poly: &LatticePolygon) -> Vec<AffineUnimodularMap> {
    let cands = candidates(poly);
    let best = cands.iter().map(|c| &c.key).min().unwrap().clone();
    let hits: Vec<&Candidate> = cands.iter().filter(|c| c.key == best).collect();
    let base_inv = hits[0].map.inverse();
    let mut group: Vec<AffineUnimodularMap> = hits.iter().map(|c| base_inv.compose(&c.map)).collect();
    group.sort_by_key(|g| (g != &AffineUnimodularMap::IDENTITY, g.matrix, g.shift));
    group.dedup();
    group
}

/// Lattice-width preserving image inside `[0, lw]²`, if one exists.
pub fn square_embedding(poly: &LatticePolygon) -> Option<AffineUnimodularMap> {
    let (lw, dirs) = width_directions(poly);
    for &u in &dirs {
        for &w in &dirs {
            if w.cross(u).abs() != 1 {
                continue;
            }
            let m = AffineUnimodularMap {
                matrix: [[w.x, w.y], [u.x, u.y]],
                shift: LatticePoint::ORIGIN,
            };
            let img: Vec<LatticePoint> = poly.vertices().iter().map(|&v| m.apply(v)).collect();
            let xmin = img.iter().map(|p| p.x).min().unwrap();
            let ymin = img.iter().map(|p| p.y).min().unwrap();
            let shifted = AffineUnimodularMap {
                matrix: m.matrix,
                shift: LatticePoint::new(-xmin, -ymin),
            };
            debug_assert!(img.iter().all(|p| p.x - xmin <= lw && p.y - ymin <= lw));
            return Some(shifted);
        }
    }
    None
}

/// True iff removing any vertex (where the result stays two-dimensional)
/// strictly lowers the lattice width.
pub fn is_lw_minimal(poly: &LatticePolygon) -> bool {
    let lw = lattice_width(poly).0;
    poly.vertices().iter().all(|&v| match poly.prune_vertex(v) {
        Ok(smaller) => lattice_width(&smaller).0 < lw,
        Err(_) => true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    /// `dΣ`, including `Σ` (`d = 1`) and `2Σ`.
    SigmaMultiple(u32),
    /// `Υ_d`, including `Υ = Υ_1`.
    UpsilonD(u32),
    TwoUpsilon,
    /// `conv{(0,0),(a,0),(b,1),(0,1)}` with `a ≥ b ≥ 0`.
    LawrencePrism(u32, u32),
    Other,
}

impl ClassTag {
    pub fn model(&self) -> Option<LatticePolygon> {
        match *self {
            ClassTag::SigmaMultiple(d) => Some(LatticePolygon::sigma(d as i64)),
            ClassTag::UpsilonD(d) => Some(LatticePolygon::upsilon(d as i64)),
            ClassTag::TwoUpsilon => Some(LatticePolygon::upsilon_multiple(2)),
            ClassTag::LawrencePrism(a, b) => LatticePolygon::lawrence_prism(a as i64, b as i64).ok(),
            ClassTag::Other => None,
        }
    }

    /// `dΣ (d ≥ 2)`, `Υ_d (d ≥ 2)` or `2Υ`.
    pub fn is_exceptional(&self) -> bool {
        matches!(
            self,
            ClassTag::SigmaMultiple(2..) | ClassTag::UpsilonD(2..) | ClassTag::TwoUpsilon
        )
    }

    /// `Σ` or `Υ`, whose linear strands vanish entirely.
    pub fn pathological_name(&self) -> Option<&'static str> {
        match self {
            ClassTag::SigmaMultiple(1) => Some("Sigma"),
            ClassTag::UpsilonD(1) => Some("Upsilon"),
            _ => None,
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::SigmaMultiple(1) => write!(f, "Sigma"),
            ClassTag::SigmaMultiple(d) => write!(f, "{d}*Sigma"),
            ClassTag::UpsilonD(1) => write!(f, "Upsilon"),
            ClassTag::UpsilonD(d) => write!(f, "Upsilon_{d}"),
            ClassTag::TwoUpsilon => write!(f, "2*Upsilon"),
            ClassTag::LawrencePrism(a, b) => write!(f, "Lawrence({a},{b})"),
            ClassTag::Other => write!(f, "other"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonClass {
    pub tag: ClassTag,
    /// Maps the classified polygon onto `tag.model()`.
    pub witness: Option<AffineUnimodularMap>,
}

fn triangle_number_root(n: usize) -> Option<u32> {
    // n = (d+1)(d+2)/2
    (1..).take_while(|d| (d + 1) * (d + 2) / 2 <= n).find(|d| (d + 1) * (d + 2) / 2 == n).map(|d| d as u32)
}

/// Detects equivalence to `dΣ`, `Υ_d`, `2Υ` or a Lawrence prism.
pub fn classify(poly: &LatticePolygon) -> PolygonClass {
    let (key, to_canon) = canonical_form(poly);
    let n = poly.n_points();
    let try_model = |tag: ClassTag| -> Option<PolygonClass> {
        let model = tag.model()?;
        if model.n_points() != n {
            return None;
        }
        let (mkey, mmap) = canonical_form(&model);
        (mkey == key).then(|| PolygonClass {
            tag,
            witness: Some(mmap.inverse().compose(&to_canon)),
        })
    };
    let mut tags = Vec::new();
    if let Some(d) = triangle_number_root(n) {
        tags.push(ClassTag::SigmaMultiple(d));
    }
    let mut d = 1;
    while LatticePolygon::upsilon(d).n_points() <= n {
        tags.push(ClassTag::UpsilonD(d as u32));
        d += 1;
    }
    tags.push(ClassTag::TwoUpsilon);
    for tag in tags {
        if let Some(c) = try_model(tag) {
            return c;
        }
    }
    let (lw, _) = width_directions(poly);
    if lw == 1 {
        // canonical rows y = 0 and y = 1 both start at x = 0
        let len = |y: i64| key.iter().filter(|p| p.y == y).map(|p| p.x).max().unwrap();
        let (r0, r1) = (len(0), len(1));
        let tag = ClassTag::LawrencePrism(r0.max(r1) as u32, r0.min(r1) as u32);
        if let Some(c) = try_model(tag) {
            return c;
        }
    }
    PolygonClass {
        tag: ClassTag::Other,
        witness: None,
    }
}
