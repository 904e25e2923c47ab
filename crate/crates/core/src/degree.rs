//! Multidegrees in ℕⁿ, variable subsets and dense boxes of degrees.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A point of ℕⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(Vec<u32>);

impl MultiDegree {
    pub fn new(components: Vec<u32>) -> Self {
        MultiDegree(components)
    }

    pub fn zero(n: usize) -> Self {
        MultiDegree(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        MultiDegree(vec![1; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        MultiDegree(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The componentwise order ⪯.
    pub fn le(&self, other: &MultiDegree) -> bool {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn partial_cmp_componentwise(&self, other: &MultiDegree) -> Option<Ordering> {
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    pub fn join(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn meet(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn add(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, defined when `other ⪯ self`.
    pub fn checked_sub(&self, other: &MultiDegree) -> Option<MultiDegree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiDegree)
    }

    pub fn plus_unit(&self, k: usize) -> MultiDegree {
        let mut v = self.0.clone();
        v[k] += 1;
        MultiDegree(v)
    }

    pub fn plus_ones(&self) -> MultiDegree {
        MultiDegree(self.0.iter().map(|c| c + 1).collect())
    }

    pub fn support(&self) -> VarSet {
        VarSet::from_indices(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, _)| i),
        )
    }

    /// `{j : self_j = g_j}`.
    pub fn saturated(&self, g: &MultiDegree) -> VarSet {
        VarSet::from_indices(
            self.0
                .iter()
                .zip(&g.0)
                .enumerate()
                .filter(|(_, (a, b))| a == b)
                .map(|(i, _)| i),
        )
    }
}

impl std::ops::Index<usize> for MultiDegree {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl From<Vec<u32>> for MultiDegree {
    fn from(v: Vec<u32>) -> Self {
        MultiDegree(v)
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A subset of the variables `{0, …, n-1}` (zero-based internally, printed one-based).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet(u32);

impl VarSet {
    pub const MAX_VARS: usize = 32;

    pub fn empty() -> Self {
        VarSet(0)
    }

    pub fn full(n: usize) -> Self {
        if n >= 32 {
            VarSet(u32::MAX)
        } else {
            VarSet((1u32 << n) - 1)
        }
    }

    pub fn from_bits(bits: u32) -> Self {
        VarSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn from_indices(it: impl IntoIterator<Item = usize>) -> Self {
        VarSet(it.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All supersets of `self` inside `{0, …, n-1}`, in increasing bit order.
    pub fn supersets(self, n: usize) -> impl Iterator<Item = VarSet> {
        let free = VarSet::full(n).0 & !self.0;
        let base = self.0;
        // enumerate submasks of `free` in increasing order
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == free {
                None
            } else {
                Some(((cur | !free).wrapping_add(1)) & free)
            };
            Some(VarSet(base | cur))
        })
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// The box `[0, top]` with a dense indexing. Iteration order has the first
/// coordinate varying fastest, which is a linear extension of ⪯.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBox {
    top: MultiDegree,
    strides: Vec<usize>,
    size: usize,
}

impl DegreeBox {
    pub fn new(top: MultiDegree) -> Self {
        let mut strides = Vec::with_capacity(top.len());
        let mut size = 1usize;
        for &c in top.components() {
            strides.push(size);
            size *= c as usize + 1;
        }
        DegreeBox { top, strides, size }
    }

    pub fn top(&self) -> &MultiDegree {
        &self.top
    }

    pub fn n(&self) -> usize {
        self.top.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, a: &MultiDegree) -> bool {
        a.len() == self.top.len() && a.le(&self.top)
    }

    pub fn index(&self, a: &MultiDegree) -> usize {
        debug_assert!(self.contains(a));
        a.components()
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    pub fn degree(&self, mut idx: usize) -> MultiDegree {
        let mut v = vec![0; self.n()];
        for (k, &c) in self.top.components().iter().enumerate() {
            let radix = c as usize + 1;
            v[k] = (idx % radix) as u32;
            idx /= radix;
        }
        MultiDegree(v)
    }

    /// Index of `a + e_k`, if still inside the box.
    pub fn step_up(&self, idx: usize, a: &MultiDegree, k: usize) -> Option<usize> {
        (a[k] < self.top[k]).then(|| idx + self.strides[k])
    }

    /// Index of `a - e_k`, if `a_k > 0`.
    pub fn step_down(&self, idx: usize, a: &MultiDegree, k: usize) -> Option<usize> {
        (a[k] > 0).then(|| idx - self.strides[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = MultiDegree> + '_ {
        (0..self.size).map(|i| self.degree(i))
    }

    /// Degrees of `[lo, hi]` in box order.
    pub fn interval(lo: &MultiDegree, hi: &MultiDegree) -> impl Iterator<Item = MultiDegree> {
        let span = hi.checked_sub(lo).expect("lo ⪯ hi");
        let inner = DegreeBox::new(span);
        let lo = lo.clone();
        (0..inner.size).map(move |i| inner.degree(i).add(&lo))
    }
}
