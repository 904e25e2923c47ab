//! Truncated Hilbert series, Hilbert partitions and g-determined Hilbert decompositions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::ControlFlow;

use crate::degree::{DegreeBox, MultiDegree, VarSet};
use crate::error::{Error, Result};
use crate::module::GradedModule;

/// A depth value; the zero module has infinite depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

impl Depth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Depth::Finite(d) => Some(d),
            Depth::Infinite => None,
        }
    }
}

impl PartialOrd for Depth {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Depth {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Depth::Finite(a), Depth::Finite(b)) => a.cmp(b),
            (Depth::Finite(_), Depth::Infinite) => Ordering::Less,
            (Depth::Infinite, Depth::Finite(_)) => Ordering::Greater,
            (Depth::Infinite, Depth::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(d) => write!(f, "{d}"),
            Depth::Infinite => write!(f, "inf"),
        }
    }
}

/// Coefficients of `H_M(t)_{⪯g}`, stored densely over the box `[0, g]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    degrees: DegreeBox,
    coeffs: Vec<usize>,
}

impl TruncatedSeries {
    pub fn zero(g: MultiDegree) -> Self {
        let degrees = DegreeBox::new(g);
        let coeffs = vec![0; degrees.size()];
        TruncatedSeries { degrees, coeffs }
    }

    pub fn from_module(gm: &GradedModule) -> Self {
        let mut s = TruncatedSeries::zero(gm.g().clone());
        for (idx, a) in s.degrees.iter().enumerate() {
            s.coeffs[idx] = gm
                .hilbert_function(&a)
                .expect("[0,g] lies in the computed box");
        }
        s
    }

    pub fn g(&self) -> &MultiDegree {
        self.degrees.top()
    }

    pub fn degrees(&self) -> &DegreeBox {
        &self.degrees
    }

    pub fn coefficient(&self, a: &MultiDegree) -> usize {
        if self.degrees.contains(a) {
            self.coeffs[self.degrees.index(a)]
        } else {
            0
        }
    }

    /// Coefficients in box order.
    pub fn coefficients(&self) -> &[usize] {
        &self.coeffs
    }

    pub fn total(&self) -> usize {
        self.coeffs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add_interval(&mut self, iv: &Interval, times: usize) {
        for c in DegreeBox::interval(&iv.a, &iv.b) {
            let idx = self.degrees.index(&c);
            self.coeffs[idx] += times;
        }
    }

    /// Nonzero terms as `(degree, coefficient)` in box order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiDegree, usize)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (self.degrees.degree(i), c))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c == 1 {
                write!(f, "t^{a}")?;
            } else {
                write!(f, "{c}*t^{a}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn truncated_series(gm: &GradedModule) -> TruncatedSeries {
    TruncatedSeries::from_module(gm)
}

/// The interval `[a, b]` of degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub a: MultiDegree,
    pub b: MultiDegree,
}

impl Interval {
    pub fn new(a: MultiDegree, b: MultiDegree) -> Result<Self> {
        if a.len() != b.len() || !a.le(&b) {
            return Err(Error::Domain(format!("[{a}, {b}] is not an interval")));
        }
        Ok(Interval { a, b })
    }

    /// `ρ(b) = |{j : b_j = g_j}|`.
    pub fn rho(&self, g: &MultiDegree) -> usize {
        self.b.saturated(g).len()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// The indicator series `Q[a,b]` truncated at `g`.
pub fn interval_poly(iv: &Interval, g: &MultiDegree) -> Result<TruncatedSeries> {
    if !iv.b.le(g) {
        return Err(Error::OutOfRange {
            degree: iv.b.clone(),
            bound: g.clone(),
        });
    }
    let mut s = TruncatedSeries::zero(g.clone());
    s.add_interval(iv, 1);
    Ok(s)
}

/// A multiset of intervals, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HilbertPartition {
    intervals: Vec<Interval>,
}

impl HilbertPartition {
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.sort();
        HilbertPartition { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn depth(&self, g: &MultiDegree) -> Depth {
        self.intervals
            .iter()
            .map(|iv| iv.rho(g))
            .min()
            .map_or(Depth::Infinite, Depth::Finite)
    }

    pub fn series(&self, g: &MultiDegree) -> Result<TruncatedSeries> {
        let mut s = TruncatedSeries::zero(g.clone());
        for iv in &self.intervals {
            if !iv.b.le(g) {
                return Err(Error::OutOfRange {
                    degree: iv.b.clone(),
                    bound: g.clone(),
                });
            }
            s.add_interval(iv, 1);
        }
        Ok(s)
    }
}

impl fmt::Display for HilbertPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{iv}")?;
        }
        write!(f, "}}")
    }
}

/// One summand `K[Z](−s)` of a Hilbert decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Summand {
    pub vars: VarSet,
    pub shift: MultiDegree,
}

impl Summand {
    pub fn new(vars: VarSet, shift: MultiDegree) -> Self {
        Summand { vars, shift }
    }

    /// Whether `K[Z](−s)` is nonzero in degree `a`: `s ⪯ a` and `supp(a − s) ⊆ Z`.
    pub fn alive_at(&self, a: &MultiDegree) -> bool {
        a.checked_sub(&self.shift)
            .is_some_and(|d| d.support().is_subset(self.vars))
    }

    /// The degrees of `[0, g]` where this summand is alive, as an interval.
    pub fn interval(&self, g: &MultiDegree) -> Option<Interval> {
        if !self.shift.le(g) {
            return None;
        }
        let b = MultiDegree::new(
            (0..g.len())
                .map(|j| {
                    if self.vars.contains(j) {
                        g[j]
                    } else {
                        self.shift[j]
                    }
                })
                .collect(),
        );
        Some(Interval {
            a: self.shift.clone(),
            b,
        })
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K[")?;
        for (k, j) in self.vars.indices().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "X{}", j + 1)?;
        }
        write!(f, "]{}", self.shift)
    }
}

/// A list of summands; the order fixes the summand indices used by the Stanley check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HilbertDecomposition {
    summands: Vec<Summand>,
}

impl HilbertDecomposition {
    pub fn new(summands: Vec<Summand>) -> Self {
        HilbertDecomposition { summands }
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn depth(&self) -> Depth {
        self.summands
            .iter()
            .map(|s| s.vars.len())
            .min()
            .map_or(Depth::Infinite, Depth::Finite)
    }

    /// The summands as a sorted multiset, for order-independent comparison.
    pub fn canonical(&self) -> Vec<Summand> {
        let mut v = self.summands.clone();
        v.sort();
        v
    }

    /// Indices (zero-based) of the summands alive at `a`, i.e. the set `C(a)`.
    pub fn alive_at(&self, a: &MultiDegree) -> Vec<usize> {
        (0..self.summands.len())
            .filter(|&i| self.summands[i].alive_at(a))
            .collect()
    }
}

impl fmt::Display for HilbertDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        for (k, s) in self.summands.iter().enumerate() {
            if k > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Each interval `[a,b]` yields the summands `(Z_b, c)` for `c ∈ G[a,b]`, where
/// `Z_b = {j : b_j = g_j}` and `G[a,b] = {c ∈ [a,b] : c_j = a_j for j ∈ Z_b}`.
pub fn partition_to_decomposition(
    p: &HilbertPartition,
    series: &TruncatedSeries,
) -> Result<HilbertDecomposition> {
    let g = series.g();
    let sum = p.series(g)?;
    if sum != *series {
        let bad = sum
            .degrees()
            .iter()
            .find(|a| sum.coefficient(a) != series.coefficient(a))
            .expect("series differ somewhere");
        return Err(Error::PartitionMismatch(format!(
            "coefficient at {bad} is {} but the module has {}",
            sum.coefficient(&bad),
            series.coefficient(&bad)
        )));
    }
    let mut summands = Vec::new();
    for iv in &p.intervals {
        let z = iv.b.saturated(g);
        let top = MultiDegree::new(
            (0..g.len())
                .map(|j| if z.contains(j) { iv.a[j] } else { iv.b[j] })
                .collect(),
        );
        for c in DegreeBox::interval(&iv.a, &top) {
            summands.push(Summand::new(z, c));
        }
    }
    Ok(HilbertDecomposition::new(summands))
}

/// Inverse direction: each summand `(Z, s)` becomes the interval `[s, b]` with
/// `b_j = g_j` for `j ∈ Z` and `b_j = s_j` otherwise.
pub fn decomposition_to_partition(
    d: &HilbertDecomposition,
    g: &MultiDegree,
) -> Result<HilbertPartition> {
    d.summands
        .iter()
        .map(|s| {
            s.interval(g).ok_or_else(|| {
                Error::InvalidDecomposition(format!("shift {} is not below g = {g}", s.shift))
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(HilbertPartition::new)
}

/// Why a decomposition fails to be a g-determined Hilbert decomposition of a module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionDefect {
    /// A summand violates `s ⪯ g` or `{j : s_j = g_j} ⊆ Z` (index zero-based).
    Shape { summand: usize, reason: String },
    /// The number of summands alive at `degree` differs from `dim M_degree`.
    Count {
        degree: MultiDegree,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for DecompositionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionDefect::Shape { summand, reason } => {
                write!(f, "summand {}: {reason}", summand + 1)
            }
            DecompositionDefect::Count {
                degree,
                expected,
                found,
            } => write!(
                f,
                "at degree {degree}: {found} summands are nonzero but dim M = {expected}"
            ),
        }
    }
}

impl From<DecompositionDefect> for Error {
    fn from(d: DecompositionDefect) -> Self {
        Error::InvalidDecomposition(d.to_string())
    }
}

/// Checks the shape conditions and, for every `a ∈ [0,g]`, that the number of summands
/// alive at `a` equals `dim M_a`.
pub fn validate_decomposition(
    d: &HilbertDecomposition,
    gm: &GradedModule,
) -> std::result::Result<(), DecompositionDefect> {
    let g = gm.g();
    let n = g.len();
    let mut counts = TruncatedSeries::zero(g.clone());
    for (i, s) in d.summands.iter().enumerate() {
        let shape = |reason: String| DecompositionDefect::Shape { summand: i, reason };
        if s.shift.len() != n {
            return Err(shape(format!(
                "shift {} has length {}, expected {n}",
                s.shift,
                s.shift.len()
            )));
        }
        if !s.vars.is_subset(VarSet::full(n)) {
            return Err(shape(format!(
                "variable set {} is not inside [{n}]",
                s.vars
            )));
        }
        if !s.shift.le(g) {
            return Err(shape(format!("shift {} is not below g = {g}", s.shift)));
        }
        let sat = s.shift.saturated(g);
        if !sat.is_subset(s.vars) {
            return Err(shape(format!(
                "shift {} reaches g in {sat}, which is not contained in {}",
                s.shift, s.vars
            )));
        }
        counts.add_interval(&s.interval(g).expect("shift below g"), 1);
    }
    for (idx, a) in counts.degrees().iter().enumerate() {
        let expected = gm
            .hilbert_function(&a)
            .expect("[0,g] lies in the computed box");
        let found = counts.coefficients()[idx];
        if expected != found {
            return Err(DecompositionDefect::Count {
                degree: a,
                expected,
                found,
            });
        }
    }
    Ok(())
}

struct Search<'a, F> {
    degrees: &'a DegreeBox,
    g: &'a MultiDegree,
    min_depth: usize,
    residual: Vec<usize>,
    stack: Vec<Interval>,
    visit: F,
}

impl<F: FnMut(&HilbertPartition) -> ControlFlow<()>> Search<'_, F> {
    /// The ⪯-minimal degrees with positive residual, in box order.
    fn minimal_positive(&self) -> Vec<usize> {
        let n = self.g.len();
        let size = self.degrees.size();
        // below[i]: some degree strictly below i has positive residual
        let mut below = vec![false; size];
        let mut out = Vec::new();
        for idx in 0..size {
            let a = self.degrees.degree(idx);
            let mut b = false;
            for k in 0..n {
                if let Some(p) = self.degrees.step_down(idx, &a, k) {
                    if below[p] || self.residual[p] > 0 {
                        b = true;
                        break;
                    }
                }
            }
            below[idx] = b;
            if !b && self.residual[idx] > 0 {
                out.push(idx);
            }
        }
        out
    }

    /// Upper endpoints `b` with `ρ(b) ≥ s` and positive residual on all of `[a,b]`,
    /// ordered by decreasing `ρ(b)` and then lexicographically.
    fn covers(&self, a: &MultiDegree) -> Vec<MultiDegree> {
        let n = self.g.len();
        let span = self.g.checked_sub(a).expect("a ⪯ g");
        let local = DegreeBox::new(span);
        let mut ok = vec![false; local.size()];
        let mut out = Vec::new();
        for li in 0..local.size() {
            let d = local.degree(li);
            let b = d.add(a);
            let mut good = self.residual[self.degrees.index(&b)] > 0;
            for k in 0..n {
                if !good {
                    break;
                }
                if let Some(p) = local.step_down(li, &d, k) {
                    good = ok[p];
                }
            }
            ok[li] = good;
            if good && b.saturated(self.g).len() >= self.min_depth {
                out.push(b);
            }
        }
        out.sort_by(|x, y| self.cover_order(x, y));
        out
    }

    fn cover_order(&self, x: &MultiDegree, y: &MultiDegree) -> Ordering {
        let (rx, ry) = (x.saturated(self.g).len(), y.saturated(self.g).len());
        ry.cmp(&rx).then_with(|| x.cmp(y))
    }

    fn apply(&mut self, iv: &Interval, add: bool) {
        for c in DegreeBox::interval(&iv.a, &iv.b) {
            let idx = self.degrees.index(&c);
            if add {
                self.residual[idx] += 1;
            } else {
                self.residual[idx] -= 1;
            }
        }
    }

    fn run(&mut self) -> ControlFlow<()> {
        let minimal = self.minimal_positive();
        if minimal.is_empty() {
            return (self.visit)(&HilbertPartition::new(self.stack.clone()));
        }
        let mut choices: Option<(MultiDegree, Vec<MultiDegree>)> = None;
        for &idx in &minimal {
            let e = self.degrees.degree(idx);
            let covers = self.covers(&e);
            if covers.is_empty() {
                return ControlFlow::Continue(());
            }
            if choices.as_ref().map_or(true, |(a, _)| e < *a) {
                choices = Some((e, covers));
            }
        }
        let (a, covers) = choices.expect("minimal set is nonempty");
        // intervals sharing a lower endpoint are chosen in nondecreasing cover order
        let start = match self.stack.last() {
            Some(prev) if prev.a == a => covers
                .iter()
                .position(|b| self.cover_order(b, &prev.b) != Ordering::Less)
                .unwrap_or(covers.len()),
            _ => 0,
        };
        for b in covers.into_iter().skip(start) {
            let iv = Interval { a: a.clone(), b };
            self.apply(&iv, false);
            self.stack.push(iv);
            let flow = self.run();
            let iv = self.stack.pop().expect("pushed above");
            self.apply(&iv, true);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Depth-first enumeration of all Hilbert partitions of `series` whose intervals satisfy
/// `ρ(b) ≥ min_depth`. Each multiset is visited once; the visitor may stop the search.
pub fn enumerate_partitions<F>(
    series: &TruncatedSeries,
    min_depth: usize,
    visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&HilbertPartition) -> ControlFlow<()>,
{
    let mut search = Search {
        degrees: series.degrees(),
        g: series.g(),
        min_depth,
        residual: series.coefficients().to_vec(),
        stack: Vec::new(),
        visit,
    };
    search.run()
}

/// All partitions with `ρ(b) ≥ min_depth`, stopping after `limit` if given.
pub fn collect_partitions(
    series: &TruncatedSeries,
    min_depth: usize,
    limit: Option<usize>,
) -> Vec<HilbertPartition> {
    let mut out = Vec::new();
    let _ = enumerate_partitions(series, min_depth, |p| {
        out.push(p.clone());
        if limit.is_some_and(|l| out.len() >= l) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// The first partition found with `ρ(b) ≥ min_depth`, if any.
pub fn find_partition(series: &TruncatedSeries, min_depth: usize) -> Option<HilbertPartition> {
    collect_partitions(series, min_depth, Some(1)).pop()
}

/// Hilbert depth with a partition attaining it. The zero module has infinite depth.
pub fn hdepth_with_partition(gm: &GradedModule) -> (Depth, HilbertPartition) {
    let series = TruncatedSeries::from_module(gm);
    if series.is_zero() {
        return (Depth::Infinite, HilbertPartition::default());
    }
    for s in (0..=gm.n()).rev() {
        if let Some(p) = find_partition(&series, s) {
            return (Depth::Finite(s), p);
        }
    }
    unreachable!("singleton intervals always partition the series at depth 0")
}

pub fn hdepth(gm: &GradedModule) -> Depth {
    hdepth_with_partition(gm).0
}
