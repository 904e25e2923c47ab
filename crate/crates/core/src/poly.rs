//! Sparse polynomials in the generic coefficient variables `Y[i,j]`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// The generic coefficient `Y[i,j]` of basis vector `j` of the degree-`S_i` piece
/// in the generic element for summand `i`. Both indices are one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenericVar {
    pub summand: usize,
    pub basis: usize,
}

impl GenericVar {
    pub fn new(summand: usize, basis: usize) -> Self {
        GenericVar { summand, basis }
    }

    /// Parses the `Y[i,j]` form.
    pub fn parse(text: &str) -> Option<GenericVar> {
        let inner = text.trim().strip_prefix("Y[")?.strip_suffix(']')?;
        let (i, j) = inner.split_once(',')?;
        Some(GenericVar::new(
            i.trim().parse().ok()?,
            j.trim().parse().ok()?,
        ))
    }
}

impl fmt::Display for GenericVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y[{},{}]", self.summand, self.basis)
    }
}

/// A monomial: sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(GenericVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: GenericVar) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(GenericVar, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort();
        let mut out: Vec<(GenericVar, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(GenericVar, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: GenericVar) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map_or(0, |i| self.0[i].1)
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Pure lexicographic monomial order with `Y[1,1] > Y[1,2] > … > Y[2,1] > …`.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut k = 0;
        loop {
            match (a.get(k), b.get(k)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => {
                    if va != vb {
                        return if va < vb {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                }
            }
            k += 1;
        }
    }

    fn reduce_exponents(&self, q: u32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|&(v, e)| (v, if e >= q { (e - 1) % (q - 1) + 1 } else { e }))
                .collect(),
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with coefficients in a [`Field`]; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SparsePoly {
    pub fn zero(field: Field) -> Self {
        SparsePoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = SparsePoly::zero(c.field());
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(field: Field, v: GenericVar) -> Self {
        let mut p = SparsePoly::zero(field);
        p.add_term(Monomial::var(v), field.one());
        p
    }

    /// `Σ c_k · v_k`.
    pub fn linear(field: Field, terms: impl IntoIterator<Item = (GenericVar, Scalar)>) -> Self {
        let mut p = SparsePoly::zero(field);
        for (v, c) in terms {
            p.add_term(Monomial::var(v), c);
        }
        p
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = SparsePoly::zero(field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> SparsePoly {
        SparsePoly {
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.field);
        }
        SparsePoly {
            field: self.field,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    fn mul_term(&self, m: &Monomial, c: &Scalar) -> SparsePoly {
        SparsePoly {
            field: self.field,
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    /// Leading term in the lexicographic monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Exact quotient `self / divisor`; fails if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &SparsePoly) -> Result<SparsePoly> {
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let (lm, lc_inv) = (lm.clone(), lc.inv().expect("nonzero coefficient"));
        let mut quotient = SparsePoly::zero(self.field);
        let mut rem = self.clone();
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm
                .div(&lm)
                .ok_or_else(|| Error::Domain("inexact polynomial division".into()))?;
            let c = rc * &lc_inv;
            rem = rem.sub(&divisor.mul_term(&m, &c));
            quotient.add_term(m, c);
        }
        Ok(quotient)
    }

    /// Rewrites every exponent `e ≥ q` by repeatedly subtracting `q − 1` until it drops
    /// below `q`, then collects like terms. This is the normal form modulo `Y^q − Y`.
    pub fn reduce_exponents(&self, q: u64) -> Result<SparsePoly> {
        if q < 2 {
            return Err(Error::Domain(format!("field size {q} < 2")));
        }
        let q = u32::try_from(q).unwrap_or(u32::MAX);
        let mut out = SparsePoly::zero(self.field);
        for (m, c) in &self.terms {
            out.add_term(m.reduce_exponents(q), c.clone());
        }
        Ok(out)
    }

    /// Largest exponent of any variable in any monomial; 0 for constants.
    pub fn max_exponent(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::max_exponent)
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: GenericVar) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<GenericVar> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn evaluate(&self, assignment: &BTreeMap<GenericVar, Scalar>) -> Result<Scalar> {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                let x = assignment
                    .get(&v)
                    .ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
                t = &t * &x.pow(e as u64);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// For the grading `deg Y[i,j] = e_i`: returns the common degree vector (as the
    /// set of summands) if the polynomial is homogeneous with a 0/1 degree vector.
    pub fn summand_degree(&self) -> Option<BTreeSet<usize>> {
        let mut common: Option<BTreeSet<usize>> = None;
        for m in self.terms.keys() {
            let mut seen = BTreeSet::new();
            for &(v, e) in &m.0 {
                if e > 1 || !seen.insert(v.summand) {
                    return None;
                }
            }
            match &common {
                None => common = Some(seen),
                Some(c) if *c == seen => {}
                Some(_) => return None,
            }
        }
        Some(common.unwrap_or_default())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            let body = if m.is_one() {
                mag.to_string()
            } else if mag.is_one() {
                m.to_string()
            } else {
                format!("{mag}*{m}")
            };
            match (k, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

const COFACTOR_LIMIT: usize = 8;

/// Exact determinant of a square matrix of polynomials. Uses cofactor expansion
/// memoized on column subsets up to 8×8 and fraction-free Bareiss elimination above.
pub fn det_symbolic(field: Field, m: &[Vec<SparsePoly>]) -> Result<SparsePoly> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(Error::Shape(format!(
            "determinant of a non-square matrix ({n} rows, row of length {})",
            row.len()
        )));
    }
    if n <= COFACTOR_LIMIT {
        Ok(det_cofactor(field, m))
    } else {
        det_bareiss(field, m)
    }
}

fn det_cofactor(field: Field, m: &[Vec<SparsePoly>]) -> SparsePoly {
    let n = m.len();
    let mut memo: Vec<Option<SparsePoly>> = vec![None; 1 << n];
    memo[0] = Some(SparsePoly::constant(field.one()));
    let mut masks: Vec<usize> = (1..1usize << n).collect();
    masks.sort_by_key(|s| s.count_ones());
    for s in masks {
        // rows n-|S|.. against columns S, expanding along the first of those rows
        let row = n - s.count_ones() as usize;
        let mut acc = SparsePoly::zero(field);
        for (pos, j) in (0..n).filter(|j| s >> j & 1 == 1).enumerate() {
            let entry = &m[row][j];
            if entry.is_zero() {
                continue;
            }
            let minor = memo[s & !(1 << j)].as_ref().expect("smaller subsets first");
            if minor.is_zero() {
                continue;
            }
            let t = entry.mul(minor);
            acc = if pos % 2 == 0 {
                acc.add(&t)
            } else {
                acc.sub(&t)
            };
        }
        memo[s] = Some(acc);
    }
    memo.pop().flatten().expect("full mask computed")
}

fn det_bareiss(field: Field, m: &[Vec<SparsePoly>]) -> Result<SparsePoly> {
    let n = m.len();
    let mut a: Vec<Vec<SparsePoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = SparsePoly::constant(field.one());
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(SparsePoly::zero(field));
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}
