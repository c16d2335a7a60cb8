use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point of the standard lattice. Ordered lexicographically by `(y, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn cross(self, other: LatticePoint) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: LatticePoint) -> i64 {
        self.x * other.x + self.y * other.y
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint { x, y }
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for LatticePoint {
    fn add_assign(&mut self, o: LatticePoint) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.x, -self.y)
    }
}

impl Mul<LatticePoint> for i64 {
    type Output = LatticePoint;
    fn mul(self, p: LatticePoint) -> LatticePoint {
        LatticePoint::new(self * p.x, self * p.y)
    }
}

/// A finite set of lattice points kept sorted in `(y, x)` order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PointSet {
    elements: Vec<LatticePoint>,
}

impl PointSet {
    pub fn new() -> Self {
        PointSet::default()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn as_slice(&self) -> &[LatticePoint] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LatticePoint> {
        self.elements.iter()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn sum(&self) -> LatticePoint {
        self.elements
            .iter()
            .fold(LatticePoint::ORIGIN, |acc, &p| acc + p)
    }

    pub fn translate(&self, v: LatticePoint) -> PointSet {
        // translation preserves the order
        PointSet {
            elements: self.elements.iter().map(|&p| p + v).collect(),
        }
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.elements
            .iter()
            .filter(|p| !other.contains(p))
            .copied()
            .collect()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.elements
            .iter()
            .chain(other.elements.iter())
            .copied()
            .collect()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.elements.iter().all(|p| other.contains(p))
    }

    /// Bounding box `(min, max)`, or `None` when empty.
    pub fn bounding_box(&self) -> Option<(LatticePoint, LatticePoint)> {
        let first = *self.elements.first()?;
        let mut lo = first;
        let mut hi = first;
        for p in &self.elements {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }

    pub fn into_vec(self) -> Vec<LatticePoint> {
        self.elements
    }
}

impl FromIterator<LatticePoint> for PointSet {
    fn from_iter<I: IntoIterator<Item = LatticePoint>>(iter: I) -> Self {
        let mut elements: Vec<LatticePoint> = iter.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        PointSet { elements }
    }
}

impl From<Vec<LatticePoint>> for PointSet {
    fn from(v: Vec<LatticePoint>) -> Self {
        v.into_iter().collect()
    }
}

impl IntoIterator for PointSet {
    type Item = LatticePoint;
    type IntoIter = std::vec::IntoIter<LatticePoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.into_iter()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a LatticePoint;
    type IntoIter = std::slice::Iter<'a, LatticePoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Constant-time membership and index lookup for a point set, backed by a
/// dense grid over its bounding box.
#[derive(Clone, Debug)]
pub struct PointIndex {
    origin: LatticePoint,
    width: i64,
    height: i64,
    slots: Vec<u32>,
}

impl PointIndex {
    const EMPTY: u32 = u32::MAX;

    pub fn new(set: &PointSet) -> Self {
        let Some((lo, hi)) = set.bounding_box() else {
            return PointIndex {
                origin: LatticePoint::ORIGIN,
                width: 0,
                height: 0,
                slots: Vec::new(),
            };
        };
        let width = hi.x - lo.x + 1;
        let height = hi.y - lo.y + 1;
        let mut slots = vec![Self::EMPTY; (width * height) as usize];
        for (i, p) in set.iter().enumerate() {
            slots[((p.y - lo.y) * width + (p.x - lo.x)) as usize] = i as u32;
        }
        PointIndex {
            origin: lo,
            width,
            height,
            slots,
        }
    }

    #[inline]
    pub fn get(&self, p: LatticePoint) -> Option<usize> {
        let dx = p.x - self.origin.x;
        let dy = p.y - self.origin.y;
        if dx < 0 || dy < 0 || dx >= self.width || dy >= self.height {
            return None;
        }
        match self.slots[(dy * self.width + dx) as usize] {
            Self::EMPTY => None,
            i => Some(i as usize),
        }
    }

    #[inline]
    pub fn contains(&self, p: LatticePoint) -> bool {
        self.get(p).is_some()
    }
}
