//! Deciding whether a Hilbert decomposition is induced by a Stanley decomposition.
//!
//! For each degree `a` the matrix `A_a` has one column per summand `i` alive at `a`;
//! its entries are linear forms in the generic coefficients `Y[i,j]` of
//! `m_i = Σ_j Y[i,j] b_{S_i,j}`. The decomposition is induced iff some choice of
//! values makes every `A_a` invertible.

mod transversal;
mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::degree::MultiDegree;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::hilbert::{
    enumerate_partitions, partition_to_decomposition, validate_decomposition, Depth,
    HilbertDecomposition, TruncatedSeries,
};
use crate::linalg::{Matrix, Subspace};
use crate::module::GradedModule;
use crate::poly::{det_symbolic, GenericVar, SparsePoly};

pub use transversal::{max_transversal, rado_condition};
pub use witness::{extract_witness, random_point, WitnessOptions};

/// Values for the generic coefficients.
pub type Assignment = BTreeMap<GenericVar, Scalar>;

/// The data of `A_a` at one degree with `dim M_a > 0`.
#[derive(Clone, Debug)]
pub struct DegreeMatrix {
    pub degree: MultiDegree,
    /// Zero-based indices of the summands in `C(a)`, ascending.
    pub columns: Vec<usize>,
    /// For each column, the matrix of `X^{a−S_i} : M_{S_i} → M_a`.
    pub transfers: Vec<Matrix>,
}

impl DegreeMatrix {
    pub fn dim(&self) -> usize {
        self.transfers
            .first()
            .map_or(self.columns.len(), Matrix::rows)
    }

    /// `A_a` with entries `Σ_j c_{j,k} Y[i,j]`.
    pub fn symbolic(&self, field: Field) -> Vec<Vec<SparsePoly>> {
        let rows = self.dim();
        (0..rows)
            .map(|r| {
                self.columns
                    .iter()
                    .zip(&self.transfers)
                    .map(|(&i, t)| {
                        SparsePoly::linear(
                            field,
                            (0..t.cols())
                                .map(|j| (GenericVar::new(i + 1, j + 1), t[(r, j)].clone())),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    /// `A_a(y)`.
    pub fn numeric(&self, field: Field, y: &Assignment) -> Result<Matrix> {
        let rows = self.dim();
        let mut m = Matrix::zeros(field, rows, self.columns.len());
        for (c, (&i, t)) in self.columns.iter().zip(&self.transfers).enumerate() {
            let yi = (0..t.cols())
                .map(|j| {
                    let v = GenericVar::new(i + 1, j + 1);
                    y.get(&v)
                        .cloned()
                        .ok_or_else(|| Error::UnboundVariable(v.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            for (r, x) in t.mul_vec(&yi).into_iter().enumerate() {
                m[(r, c)] = x;
            }
        }
        Ok(m)
    }

    /// The subspaces `X^{a−S_i} M_{S_i} ⊆ M_a`, one per column.
    pub fn column_spaces(&self, field: Field) -> Vec<Subspace> {
        self.transfers
            .iter()
            .map(|t| {
                Subspace::span(
                    field,
                    t.rows(),
                    (0..t.cols()).map(|k| t.column(k)).collect(),
                )
                .expect("columns have length dim M_a")
            })
            .collect()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.transfers.iter().all(Matrix::is_zero)
    }
}

/// The matrices `A_a` for all `a ∈ [0, g]` with `M_a ≠ 0`, in box order.
#[derive(Clone, Debug)]
pub struct MatrixFamily {
    field: Field,
    summand_dims: Vec<usize>,
    degrees: Vec<DegreeMatrix>,
}

impl MatrixFamily {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degrees(&self) -> &[DegreeMatrix] {
        &self.degrees
    }

    pub fn get(&self, a: &MultiDegree) -> Option<&DegreeMatrix> {
        self.degrees.iter().find(|d| d.degree == *a)
    }

    /// `dim M_{S_i}` per summand.
    pub fn summand_dims(&self) -> &[usize] {
        &self.summand_dims
    }

    /// The index set `Ĩ` as variables, sorted.
    pub fn variables(&self) -> Vec<GenericVar> {
        self.summand_dims
            .iter()
            .enumerate()
            .flat_map(|(i, &d)| (1..=d).map(move |j| GenericVar::new(i + 1, j)))
            .collect()
    }

    pub fn max_columns(&self) -> usize {
        self.degrees
            .iter()
            .map(|d| d.columns.len())
            .max()
            .unwrap_or(0)
    }

    /// `det A_a` for every degree, in box order.
    pub fn determinants(&self) -> Result<Vec<SparsePoly>> {
        self.degrees
            .par_iter()
            .map(|d| det_symbolic(self.field, &d.symbolic(self.field)))
            .collect()
    }

    /// First degree where `A_a(y)` is singular, or `None` if `y` is a witness.
    pub fn verify(&self, y: &Assignment) -> Result<Option<MultiDegree>> {
        for d in &self.degrees {
            let m = d.numeric(self.field, y)?;
            if m.rank() < d.dim() {
                return Ok(Some(d.degree.clone()));
            }
        }
        Ok(None)
    }
}

/// Builds `A_a` for every `a ∈ [0, g]`. The decomposition must validate against `gm`.
pub fn build_matrices(gm: &GradedModule, d: &HilbertDecomposition) -> Result<MatrixFamily> {
    validate_decomposition(d, gm)?;
    let summand_dims = d
        .summands()
        .iter()
        .map(|s| gm.hilbert_function(&s.shift))
        .collect::<Result<Vec<_>>>()?;
    let degrees: Vec<MultiDegree> = gm
        .g_box()
        .iter()
        .filter(|a| gm.hilbert_function(a).map_or(false, |h| h > 0))
        .collect();
    let degrees = degrees
        .into_par_iter()
        .map(|a| {
            let columns = d.alive_at(&a);
            let transfers = columns
                .iter()
                .map(|&i| gm.transfer(&d.summands()[i].shift, &a))
                .collect::<Result<Vec<_>>>()?;
            Ok(DegreeMatrix {
                degree: a,
                columns,
                transfers,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixFamily {
        field: gm.field(),
        summand_dims,
        degrees,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Induced,
    NotInduced,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Induced => "induced",
            Verdict::NotInduced => "not_induced",
        })
    }
}

/// How to decide the Stanley property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Transversal over ℚ when some `|C(a)| > 6`, symbolic otherwise; unified over `𝔽_q`.
    Auto,
    /// Nonvanishing of each `det A_a` over ℚ; the reduced product `P̃` over `𝔽_q`.
    Symbolic,
    /// Exponent bound decides between the two symbolic routes.
    Unified,
    /// Independent transversals per degree (ℚ only).
    Transversal,
    /// Random points verified exactly; falls back to the exact check.
    Randomized,
}

impl CheckMode {
    /// The concrete mode `Auto` stands for on this family.
    pub fn resolve(self, fam: &MatrixFamily) -> CheckMode {
        match self {
            CheckMode::Auto if fam.field().is_finite() => CheckMode::Unified,
            CheckMode::Auto if fam.max_columns() > 6 => CheckMode::Transversal,
            CheckMode::Auto => CheckMode::Symbolic,
            m => m,
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckMode::Auto => "auto",
            CheckMode::Symbolic => "symbolic",
            CheckMode::Unified => "unified",
            CheckMode::Transversal => "transversal",
            CheckMode::Randomized => "randomized",
        })
    }
}

impl FromStr for CheckMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(CheckMode::Auto),
            "symbolic" => Ok(CheckMode::Symbolic),
            "unified" => Ok(CheckMode::Unified),
            "transversal" => Ok(CheckMode::Transversal),
            "randomized" => Ok(CheckMode::Randomized),
            _ => Err(Error::Mode(format!(
                "unknown check mode {s:?} (expected auto, symbolic, unified, transversal or randomized)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// The mode that produced the verdict.
    pub mode: CheckMode,
    /// A degree where no choice works (per-degree checks only).
    pub failing_degree: Option<MultiDegree>,
    /// Over `𝔽_q`, whether the reduced product `P̃` vanishes (when it was computed).
    pub reduced_product_zero: Option<bool>,
    /// A witness found along the way (randomized mode).
    pub witness: Option<Assignment>,
    pub note: String,
}

impl CheckReport {
    fn new(verdict: Verdict, mode: CheckMode) -> Self {
        CheckReport {
            verdict,
            mode,
            failing_degree: None,
            reduced_product_zero: None,
            witness: None,
            note: String::new(),
        }
    }

    fn failing(mode: CheckMode, degree: MultiDegree, note: String) -> Self {
        CheckReport {
            failing_degree: Some(degree),
            note,
            ..CheckReport::new(Verdict::NotInduced, mode)
        }
    }
}

/// Limits for the symbolic routes.
#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Largest number of terms allowed while expanding `P` over a finite field.
    pub term_budget: usize,
    /// Random points tried in randomized mode.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            term_budget: 1_000_000,
            samples: 16,
            seed: 0,
        }
    }
}

fn first_vanishing(fam: &MatrixFamily) -> Result<Option<MultiDegree>> {
    let found = fam
        .degrees
        .par_iter()
        .map(|d| det_symbolic(fam.field, &d.symbolic(fam.field)).map(|p| p.is_zero()))
        .collect::<Result<Vec<bool>>>()?;
    Ok(found
        .iter()
        .position(|&z| z)
        .map(|k| fam.degrees[k].degree.clone()))
}

/// Over an infinite field: induced iff no `det A_a` is the zero polynomial.
pub fn check_infinite(fam: &MatrixFamily) -> Result<CheckReport> {
    if fam.field.is_finite() {
        return Err(Error::Mode(format!(
            "the determinant criterion alone is not sufficient over {}; use the unified or symbolic finite-field check",
            fam.field
        )));
    }
    Ok(match first_vanishing(fam)? {
        Some(a) => CheckReport::failing(CheckMode::Symbolic, a.clone(), format!("det A_{a} = 0")),
        None => CheckReport::new(Verdict::Induced, CheckMode::Symbolic),
    })
}

/// Over `𝔽_q`: expands `P = ∏ det A_a`, reducing exponents modulo `Y^q − Y` after
/// every multiplication, and decides by `P̃ ≠ 0`.
pub fn check_finite(fam: &MatrixFamily, opts: &CheckOptions) -> Result<CheckReport> {
    let q = fam
        .field
        .cardinality()
        .ok_or_else(|| Error::Mode("the reduced-product criterion needs a finite field".into()))?;
    let dets = fam.determinants()?;
    if let Some(k) = dets.iter().position(SparsePoly::is_zero) {
        let a = fam.degrees[k].degree.clone();
        let mut r = CheckReport::failing(CheckMode::Symbolic, a.clone(), format!("det A_{a} = 0"));
        r.reduced_product_zero = Some(true);
        return Ok(r);
    }
    let mut p = SparsePoly::constant(fam.field.one());
    for d in &dets {
        p = p.mul(d).reduce_exponents(q)?;
        if p.num_terms() > opts.term_budget {
            return Err(Error::Resource(format!(
                "expanding the product of determinants exceeded {} terms; try --mode unified or a larger budget",
                opts.term_budget
            )));
        }
        if p.is_zero() {
            break;
        }
    }
    let zero = p.is_zero();
    let mut r = CheckReport::new(
        if zero {
            Verdict::NotInduced
        } else {
            Verdict::Induced
        },
        CheckMode::Symbolic,
    );
    r.reduced_product_zero = Some(zero);
    r.note = format!("reduced product has {} terms", p.num_terms());
    Ok(r)
}

/// Bounds each exponent of `P` by the number of determinants containing the variable.
/// If all bounds are below `q` (or the field is infinite), `P` is already reduced and
/// nonvanishing of the factors decides; otherwise falls back to [`check_finite`].
pub fn check_unified(fam: &MatrixFamily, opts: &CheckOptions) -> Result<CheckReport> {
    let dets = fam.determinants()?;
    if let Some(k) = dets.iter().position(SparsePoly::is_zero) {
        let a = fam.degrees[k].degree.clone();
        let mut r = CheckReport::failing(CheckMode::Unified, a.clone(), format!("det A_{a} = 0"));
        if fam.field.is_finite() {
            r.reduced_product_zero = Some(true);
        }
        return Ok(r);
    }
    let mut counts: BTreeMap<GenericVar, u64> = BTreeMap::new();
    for d in &dets {
        for v in d.variables() {
            *counts.entry(v).or_default() += d.degree_in(v) as u64;
        }
    }
    let bound = counts.values().copied().max().unwrap_or(0);
    match fam.field.cardinality() {
        Some(q) if bound >= q => {
            let mut r = check_finite(fam, opts)?;
            r.mode = CheckMode::Unified;
            r.note = format!("exponent bound {bound} ≥ q = {q}, expanded: {}", r.note);
            Ok(r)
        }
        q => {
            let mut r = CheckReport::new(Verdict::Induced, CheckMode::Unified);
            if q.is_some() {
                r.reduced_product_zero = Some(false);
            }
            r.note = format!("exponent bound {bound}, all determinants nonzero");
            Ok(r)
        }
    }
}

/// Over an infinite field: induced iff every degree admits an independent transversal
/// of the subspaces `X^{a−S_i} M_{S_i}`, `i ∈ C(a)`.
pub fn check_transversal(fam: &MatrixFamily) -> Result<CheckReport> {
    if fam.field.is_finite() {
        return Err(Error::Mode(format!(
            "per-degree transversals do not decide the question over {}",
            fam.field
        )));
    }
    let sizes: Vec<usize> = fam
        .degrees
        .par_iter()
        .map(|d| max_transversal(fam.field, &d.column_spaces(fam.field)).len())
        .collect();
    for (d, size) in fam.degrees.iter().zip(sizes) {
        if size < d.columns.len() {
            return Ok(CheckReport::failing(
                CheckMode::Transversal,
                d.degree.clone(),
                format!(
                    "at {} only {size} of {} summands admit independent representatives",
                    d.degree,
                    d.columns.len()
                ),
            ));
        }
    }
    Ok(CheckReport::new(Verdict::Induced, CheckMode::Transversal))
}

/// Tries random points first; a point passing [`MatrixFamily::verify`] certifies
/// "induced". Otherwise the exact check for the field decides.
pub fn check_randomized(fam: &MatrixFamily, opts: &CheckOptions) -> Result<CheckReport> {
    let vars = fam.variables();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        let y = random_point(fam.field, &vars, &mut rng);
        if fam.verify(&y)?.is_none() {
            let mut r = CheckReport::new(Verdict::Induced, CheckMode::Randomized);
            r.witness = Some(y);
            r.note = "random point is a witness".into();
            return Ok(r);
        }
    }
    let mut r = check_family(fam, CheckMode::Auto, opts)?;
    r.note = format!(
        "{} random points failed; exact check: {}",
        opts.samples, r.note
    );
    Ok(r)
}

/// Runs the chosen check on a built family.
pub fn check_family(
    fam: &MatrixFamily,
    mode: CheckMode,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    match mode.resolve(fam) {
        CheckMode::Symbolic if fam.field.is_finite() => check_finite(fam, opts),
        CheckMode::Symbolic => check_infinite(fam),
        CheckMode::Unified => check_unified(fam, opts),
        CheckMode::Transversal => check_transversal(fam),
        CheckMode::Randomized => check_randomized(fam, opts),
        CheckMode::Auto => unreachable!("resolved above"),
    }
}

/// Validates `d`, builds its matrices and runs the chosen check.
pub fn check(
    gm: &GradedModule,
    d: &HilbertDecomposition,
    mode: CheckMode,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    check_family(&build_matrices(gm, d)?, mode, opts)
}

/// Builds the family for `d` and checks `y` against it; `Some(a)` names a degree where
/// `A_a(y)` is singular.
pub fn verify_witness(
    gm: &GradedModule,
    d: &HilbertDecomposition,
    y: &Assignment,
) -> Result<Option<MultiDegree>> {
    build_matrices(gm, d)?.verify(y)
}

#[derive(Clone, Debug, Default)]
pub struct SdepthOptions {
    pub mode: Option<CheckMode>,
    pub check: CheckOptions,
    pub witness: WitnessOptions,
}

#[derive(Clone, Debug)]
pub struct SdepthResult {
    pub depth: Depth,
    pub decomposition: HilbertDecomposition,
    pub witness: Assignment,
    /// Number of decompositions checked in total.
    pub checked: usize,
}

/// Search state reported to the progress callback of [`sdepth_with_progress`].
#[derive(Clone, Copy, Debug)]
pub struct Progress {
    /// Depth currently searched.
    pub depth: usize,
    /// Decompositions checked so far, over all depths.
    pub checked: usize,
}

/// Stanley depth: for `s = n, …, 0`, the first g-determined Hilbert decomposition of
/// depth `≥ s` that passes the check, together with a witness.
pub fn sdepth(gm: &GradedModule, opts: &SdepthOptions) -> Result<SdepthResult> {
    sdepth_with_progress(gm, opts, |_| {})
}

/// [`sdepth`], calling `progress` when a depth level starts and every 1000 checks.
pub fn sdepth_with_progress(
    gm: &GradedModule,
    opts: &SdepthOptions,
    mut progress: impl FnMut(Progress),
) -> Result<SdepthResult> {
    let series = TruncatedSeries::from_module(gm);
    if series.is_zero() {
        return Ok(SdepthResult {
            depth: Depth::Infinite,
            decomposition: HilbertDecomposition::default(),
            witness: Assignment::new(),
            checked: 0,
        });
    }
    let mode = opts.mode.unwrap_or(CheckMode::Auto);
    let mut checked = 0usize;
    for s in (0..=gm.n()).rev() {
        progress(Progress { depth: s, checked });
        let mut found: Option<Result<(HilbertDecomposition, Assignment)>> = None;
        let _ = enumerate_partitions(&series, s, |p| {
            let attempt = (|| {
                let d = partition_to_decomposition(p, &series)?;
                let fam = build_matrices(gm, &d)?;
                let report = check_family(&fam, mode, &opts.check)?;
                if report.verdict == Verdict::NotInduced {
                    return Ok(None);
                }
                let y = match report.witness {
                    Some(y) => y,
                    None => extract_witness(&fam, &opts.witness)?,
                };
                Ok(Some((d, y)))
            })();
            checked += 1;
            if checked % 1000 == 0 {
                progress(Progress { depth: s, checked });
            }
            match attempt {
                Ok(None) => ControlFlow::Continue(()),
                Ok(Some(hit)) => {
                    found = Some(Ok(hit));
                    ControlFlow::Break(())
                }
                Err(e) => {
                    found = Some(Err(e));
                    ControlFlow::Break(())
                }
            }
        });
        if let Some(hit) = found {
            let (decomposition, witness) = hit?;
            debug_assert_eq!(decomposition.depth(), Depth::Finite(s));
            return Ok(SdepthResult {
                depth: Depth::Finite(s),
                decomposition,
                witness,
                checked,
            });
        }
    }
    Err(Error::NoWitness(
        "no Hilbert decomposition is induced by a Stanley decomposition; is the module g-determined?".into(),
    ))
}

#[cfg(test)]
mod tests;
