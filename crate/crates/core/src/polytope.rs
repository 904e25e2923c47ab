//! The integer-point description of g-determined Hilbert decompositions and of the
//! ones induced by Stanley decompositions.
//!
//! A decomposition is a vector `u ∈ ℕ^Ω` counting the summands `K[Z](−b)`. The Hilbert
//! property is a system of equalities, one per degree `a ∈ [0,g]`; the Stanley property
//! adds, for each `a` and set `J ⊆ [0,a]` of shifts, the inequality
//! `Σ_{b∈J} Σ_{Z ⊇ supp(a−b)} u(b,Z) ≤ dim Σ_{b∈J} X^{a−b} M_b`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::degree::{DegreeBox, MultiDegree, VarSet};
use crate::error::{Error, Result};
use crate::hilbert::{HilbertDecomposition, Summand};
use crate::linalg::{subspace_sum_dim, Subspace};
use crate::module::GradedModule;

/// Most distinct subspaces per degree for the exact (unbounded `|J|`) inequalities.
pub const MAX_SUBSPACE_GROUPS: usize = 20;
/// Most inequality rows generated when `|J|` is bounded.
pub const MAX_INEQUALITY_ROWS: usize = 500_000;

/// A building block `K[Z](−b)` with `b ⪯ g` and `{j : b_j = g_j} ⊆ Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaVar {
    pub shift: MultiDegree,
    pub vars: VarSet,
}

impl OmegaVar {
    /// `u[b1,…,bn;z1,…]` with one-based variable indices.
    pub fn name(&self) -> String {
        let b: Vec<String> = self.shift.components().iter().map(u32::to_string).collect();
        let z: Vec<String> = self.vars.indices().map(|j| (j + 1).to_string()).collect();
        format!("u[{};{}]", b.join(","), z.join(","))
    }

    /// Identifier safe for LP files: `u_b1_b2__z1_z2`, with `e` for the empty set.
    pub fn lp_name(&self) -> String {
        let b: Vec<String> = self.shift.components().iter().map(u32::to_string).collect();
        let z: Vec<String> = self.vars.indices().map(|j| (j + 1).to_string()).collect();
        let z = if z.is_empty() {
            "e".to_string()
        } else {
            z.join("_")
        };
        format!("u_{}__{}", b.join("_"), z)
    }

    pub fn summand(&self) -> Summand {
        Summand::new(self.vars, self.shift.clone())
    }
}

/// All of `Ω` with `|Z| ≥ min_depth`, ordered by shift in box order, then by `Z`.
pub fn omega(g: &MultiDegree, min_depth: usize) -> Vec<OmegaVar> {
    let n = g.len();
    DegreeBox::new(g.clone())
        .iter()
        .flat_map(|b| {
            let sat = b.saturated(g);
            sat.supersets(n)
                .filter(|z| z.len() >= min_depth)
                .map(|z| OmegaVar {
                    shift: b.clone(),
                    vars: z,
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// A row `Σ_{i ∈ vars} u_i (= or ≤) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub vars: Vec<usize>,
    pub rhs: usize,
    pub degree: MultiDegree,
    /// The shift set `J` (inequalities only).
    pub shifts: Vec<MultiDegree>,
}

impl Row {
    pub fn label(&self) -> String {
        if self.shifts.is_empty() {
            format!("a={}", self.degree)
        } else {
            let j: Vec<String> = self.shifts.iter().map(|b| b.to_string()).collect();
            format!("a={} J={{{}}}", self.degree, j.join(","))
        }
    }

    fn lhs(&self, u: &[u64]) -> u64 {
        self.vars.iter().map(|&i| u[i]).sum()
    }
}

#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub g: MultiDegree,
    pub field: String,
    pub min_depth: usize,
    pub variables: Vec<OmegaVar>,
    pub equalities: Vec<Row>,
    pub inequalities: Vec<Row>,
    /// `Some(k)` when the inequalities were limited to `|J| ≤ k` and may not be complete.
    pub relaxation: Option<usize>,
}

/// A violated row of the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowViolation {
    pub label: String,
    pub lhs: u64,
    pub rhs: usize,
    pub equality: bool,
}

impl fmt::Display for RowViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.equality { "=" } else { "≤" };
        write!(f, "{}: {} {op} {} fails", self.label, self.lhs, self.rhs)
    }
}

impl LinearSystem {
    pub fn index_of(&self, v: &OmegaVar) -> Option<usize> {
        self.variables.iter().position(|w| w == v)
    }

    /// Variables alive at `a`: `b ⪯ a` and `supp(a−b) ⊆ Z`.
    fn alive_at(&self, a: &MultiDegree) -> Vec<usize> {
        (0..self.variables.len())
            .filter(|&i| self.variables[i].summand().alive_at(a))
            .collect()
    }

    /// The first violated equality, then the first violated inequality.
    pub fn check(&self, u: &[u64]) -> std::result::Result<(), RowViolation> {
        for (rows, equality) in [(&self.equalities, true), (&self.inequalities, false)] {
            for r in rows {
                let lhs = r.lhs(u);
                let ok = if equality {
                    lhs == r.rhs as u64
                } else {
                    lhs <= r.rhs as u64
                };
                if !ok {
                    return Err(RowViolation {
                        label: r.label(),
                        lhs,
                        rhs: r.rhs,
                        equality,
                    });
                }
            }
        }
        Ok(())
    }

    /// Counts the summands of `d` per building block.
    pub fn decomposition_to_u(&self, d: &HilbertDecomposition) -> Result<Vec<u64>> {
        let mut u = vec![0u64; self.variables.len()];
        for s in d.summands() {
            let v = OmegaVar {
                shift: s.shift.clone(),
                vars: s.vars,
            };
            let i = self.index_of(&v).ok_or_else(|| {
                Error::InvalidDecomposition(format!("summand {s} is not a variable of this system"))
            })?;
            u[i] += 1;
        }
        Ok(u)
    }

    pub fn u_to_decomposition(&self, u: &[u64]) -> HilbertDecomposition {
        let mut summands = Vec::new();
        for (v, &k) in self.variables.iter().zip(u) {
            for _ in 0..k {
                summands.push(v.summand());
            }
        }
        HilbertDecomposition::new(summands)
    }
}

/// One equality per `a ∈ [0,g]`: the summands alive at `a` number `dim M_a`.
pub fn build_hilbert_system(gm: &GradedModule, min_depth: usize) -> LinearSystem {
    let g = gm.g().clone();
    let mut sys = LinearSystem {
        variables: omega(&g, min_depth),
        field: gm.field().to_string(),
        g: g.clone(),
        min_depth,
        equalities: Vec::new(),
        inequalities: Vec::new(),
        relaxation: None,
    };
    for a in DegreeBox::new(g).iter() {
        let row = Row {
            vars: sys.alive_at(&a),
            rhs: gm
                .hilbert_function(&a)
                .expect("[0,g] lies in the computed box"),
            degree: a,
            shifts: Vec::new(),
        };
        sys.equalities.push(row);
    }
    sys
}

/// The Hilbert equalities plus the subspace-sum inequalities. With `max_subset = None`
/// the inequalities are exact: only closed sets `J` are emitted (a set is closed when
/// every `b` whose subspace lies in the sum already belongs to it), since the others
/// are implied. With `Some(k)` every `J` with `|J| ≤ k` is emitted.
pub fn build_stanley_inequalities(
    gm: &GradedModule,
    max_subset: Option<usize>,
    min_depth: usize,
) -> Result<LinearSystem> {
    let mut sys = build_hilbert_system(gm, min_depth);
    let field = gm.field();
    let mut complete = true;
    for a in DegreeBox::new(gm.g().clone()).iter() {
        let shifts: Vec<MultiDegree> =
            DegreeBox::interval(&MultiDegree::zero(a.len()), &a).collect();
        let spaces = shifts
            .iter()
            .map(|b| gm.image(b, &a))
            .collect::<Result<Vec<Subspace>>>()?;
        // summands with shift b alive at a
        let mut per_shift: Vec<Vec<usize>> = vec![Vec::new(); shifts.len()];
        for i in sys.alive_at(&a) {
            let b = &sys.variables[i].shift;
            let k = shifts
                .iter()
                .position(|s| s == b)
                .expect("alive shifts are below a");
            per_shift[k].push(i);
        }
        let row = |members: &[usize], rhs: usize| Row {
            vars: members
                .iter()
                .flat_map(|&k| per_shift[k].iter().copied())
                .collect(),
            rhs,
            degree: a.clone(),
            shifts: members.iter().map(|&k| shifts[k].clone()).collect(),
        };
        match max_subset {
            None => {
                for (members, rhs) in closed_sets(&spaces, field, &a)? {
                    sys.inequalities.push(row(&members, rhs));
                }
            }
            Some(k) => {
                if k < shifts.len() {
                    complete = false;
                }
                for members in subsets_up_to(shifts.len(), k) {
                    let chosen: Vec<Subspace> =
                        members.iter().map(|&m| spaces[m].clone()).collect();
                    let rhs = subspace_sum_dim(&chosen)?;
                    sys.inequalities.push(row(&members, rhs));
                    if sys.inequalities.len() > MAX_INEQUALITY_ROWS {
                        return Err(Error::Resource(format!(
                            "more than {MAX_INEQUALITY_ROWS} inequalities; lower --max-subset"
                        )));
                    }
                }
            }
        }
    }
    if let (Some(k), false) = (max_subset, complete) {
        sys.relaxation = Some(k);
    }
    Ok(sys)
}

/// Nonempty closed sets of indices with the dimension of their sum, ascending by members.
fn closed_sets(
    spaces: &[Subspace],
    field: crate::field::Field,
    a: &MultiDegree,
) -> Result<Vec<(Vec<usize>, usize)>> {
    // group indices by equal subspace
    let mut groups: Vec<(Subspace, Vec<usize>)> = Vec::new();
    for (k, s) in spaces.iter().enumerate() {
        match groups.iter_mut().find(|(t, _)| t == s) {
            Some((_, members)) => members.push(k),
            None => groups.push((s.clone(), vec![k])),
        }
    }
    if groups.len() > MAX_SUBSPACE_GROUPS {
        return Err(Error::Resource(format!(
            "degree {a} has {} distinct subspaces; use --max-subset for a bounded relaxation",
            groups.len()
        )));
    }
    let dim = spaces.first().map_or(0, Subspace::ambient_dim);
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << groups.len() {
        let mut sum = Subspace::zero(field, dim);
        for (gi, (s, _)) in groups.iter().enumerate() {
            if mask >> gi & 1 == 1 {
                sum = sum.sum(s)?;
            }
        }
        let closure: u32 = (0..groups.len())
            .filter(|&gi| groups[gi].0.is_subspace_of(&sum))
            .fold(0, |acc, gi| acc | 1 << gi);
        if closure == 0 || !seen.insert(closure) {
            continue;
        }
        let mut members: Vec<usize> = (0..groups.len())
            .filter(|&gi| closure >> gi & 1 == 1)
            .flat_map(|gi| groups[gi].1.iter().copied())
            .collect();
        members.sort_unstable();
        out.push((members, sum.dim()));
    }
    out.sort();
    Ok(out)
}

/// Nonempty subsets of `0..m` of size at most `k`, by size then lexicographically.
fn subsets_up_to(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k.min(m) {
        let mut next = Vec::new();
        for s in &level {
            let start = s.last().map_or(0, |&l| l + 1);
            for x in start..m {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// All nonnegative integer solutions of the equalities (and inequalities), found by
/// exhaustive search; stops after `limit` solutions. Meant for small instances.
pub fn lattice_points(sys: &LinearSystem, limit: usize) -> Vec<Vec<u64>> {
    let bx = DegreeBox::new(sys.g.clone());
    let mut row_at: Vec<Option<usize>> = vec![None; bx.size()];
    let mut var_rows: Vec<Vec<usize>> = vec![Vec::new(); sys.variables.len()];
    for (ri, r) in sys.equalities.iter().enumerate() {
        row_at[bx.index(&r.degree)] = Some(ri);
        for &v in &r.vars {
            var_rows[v].push(ri);
        }
    }
    let ctx = Search {
        sys,
        row_at,
        var_rows,
        shift_idx: sys.variables.iter().map(|v| bx.index(&v.shift)).collect(),
        limit,
    };
    let mut residual: Vec<i64> = sys.equalities.iter().map(|r| r.rhs as i64).collect();
    let mut u = vec![0u64; sys.variables.len()];
    let mut out = Vec::new();
    ctx.go(0, &mut residual, &mut u, &mut out);
    out
}

struct Search<'a> {
    sys: &'a LinearSystem,
    row_at: Vec<Option<usize>>,
    var_rows: Vec<Vec<usize>>,
    shift_idx: Vec<usize>,
    limit: usize,
}

impl Search<'_> {
    fn go(&self, v: usize, residual: &mut [i64], u: &mut [u64], out: &mut Vec<Vec<u64>>) {
        if out.len() >= self.limit {
            return;
        }
        // variables come in box order of their shift, and a summand with shift b only
        // meets rows a ⪰ b, so rows below the current shift are final
        let lo = if v == 0 { 0 } else { self.shift_idx[v - 1] };
        let hi = self.shift_idx.get(v).copied().unwrap_or(self.row_at.len());
        if (lo..hi).any(|i| self.row_at[i].is_some_and(|ri| residual[ri] != 0)) {
            return;
        }
        if v == u.len() {
            if self.sys.check(u).is_ok() {
                out.push(u.to_vec());
            }
            return;
        }
        let cap = self.var_rows[v]
            .iter()
            .map(|&ri| residual[ri])
            .min()
            .unwrap_or(0)
            .max(0);
        for k in 0..=cap {
            u[v] = k as u64;
            for &ri in &self.var_rows[v] {
                residual[ri] -= k;
            }
            self.go(v + 1, residual, u, out);
            for &ri in &self.var_rows[v] {
                residual[ri] += k;
            }
        }
        u[v] = 0;
    }
}

fn header(sys: &LinearSystem, comment: &str) -> String {
    let mut h = String::new();
    let relax = match sys.relaxation {
        Some(k) => format!("yes (only sets J with |J| <= {k})"),
        None => "no".to_string(),
    };
    let _ = writeln!(
        h,
        "{comment} g-determined Hilbert decompositions as lattice points"
    );
    let _ = writeln!(h, "{comment} field: {}", sys.field);
    let _ = writeln!(h, "{comment} g: {}", sys.g);
    let _ = writeln!(h, "{comment} minimum |Z|: {}", sys.min_depth);
    let _ = writeln!(
        h,
        "{comment} variables: {}, equalities: {}, inequalities: {}",
        sys.variables.len(),
        sys.equalities.len(),
        sys.inequalities.len()
    );
    let _ = writeln!(h, "{comment} relaxation: {relax}");
    h
}

/// The plain-text `.sip` form.
pub fn to_sip(sys: &LinearSystem) -> String {
    let mut s = header(sys, "#");
    for v in &sys.variables {
        let _ = writeln!(s, "var {} >= 0 integer", v.name());
    }
    let lhs = |r: &Row| -> String {
        if r.vars.is_empty() {
            return "0".into();
        }
        r.vars
            .iter()
            .map(|&i| sys.variables[i].name())
            .collect::<Vec<_>>()
            .join(" + ")
    };
    for r in &sys.equalities {
        let _ = writeln!(s, "eq {}: {} = {}", r.label(), lhs(r), r.rhs);
    }
    for r in &sys.inequalities {
        let _ = writeln!(s, "le {}: {} <= {}", r.label(), lhs(r), r.rhs);
    }
    s
}

/// CPLEX LP form minimizing the number of summands.
pub fn to_lp(sys: &LinearSystem) -> String {
    let mut s = header(sys, "\\");
    let names: Vec<String> = sys.variables.iter().map(OmegaVar::lp_name).collect();
    let sum = |vars: &mut dyn Iterator<Item = usize>| -> String {
        let terms: Vec<&str> = vars.map(|i| names[i].as_str()).collect();
        if terms.is_empty() {
            return "0 ".to_string() + &names[0];
        }
        terms
            .chunks(8)
            .map(|c| c.join(" + "))
            .collect::<Vec<_>>()
            .join("\n   + ")
    };
    let _ = writeln!(s, "Minimize");
    let _ = writeln!(s, " obj: {}", sum(&mut (0..names.len())));
    let _ = writeln!(s, "Subject To");
    for (k, r) in sys.equalities.iter().enumerate() {
        let _ = writeln!(
            s,
            " e{}: {} = {}",
            k + 1,
            sum(&mut r.vars.iter().copied()),
            r.rhs
        );
    }
    for (k, r) in sys.inequalities.iter().enumerate() {
        let _ = writeln!(
            s,
            " i{}: {} <= {}",
            k + 1,
            sum(&mut r.vars.iter().copied()),
            r.rhs
        );
    }
    let _ = writeln!(s, "General");
    for c in names.chunks(8) {
        let _ = writeln!(s, " {}", c.join(" "));
    }
    let _ = writeln!(s, "End");
    s
}

/// Reads `name<TAB>value` lines (any whitespace works; `#` starts a comment). Names may
/// be in `.sip` or LP form; variables not listed are zero. Values must be nonnegative
/// integers, written as `3` or `3.0`.
pub fn parse_solution(sys: &LinearSystem, text: &str, file: &str) -> Result<Vec<u64>> {
    let mut by_name: BTreeMap<String, usize> = BTreeMap::new();
    for (i, v) in sys.variables.iter().enumerate() {
        by_name.insert(v.name(), i);
        by_name.insert(v.lp_name(), i);
    }
    let mut u = vec![0u64; sys.variables.len()];
    let mut seen = vec![false; sys.variables.len()];
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::parse(format!("{file}:{}", ln + 1), m);
        let (name, value) = line
            .rsplit_once(|c: char| c.is_whitespace())
            .ok_or_else(|| err(format!("expected `name<TAB>value`, got {line:?}")))?;
        let name = name.trim();
        let &i = by_name
            .get(name)
            .ok_or_else(|| err(format!("unknown variable {name}")))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(err(format!("variable {name} assigned twice")));
        }
        u[i] = parse_count(value).ok_or_else(|| {
            err(format!(
                "value {value:?} of {name} is not a nonnegative integer"
            ))
        })?;
    }
    Ok(u)
}

fn parse_count(text: &str) -> Option<u64> {
    let text = text.trim();
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if !frac.chars().all(|c| c == '0') || int.starts_with('-') {
        return None;
    }
    int.parse().ok()
}
