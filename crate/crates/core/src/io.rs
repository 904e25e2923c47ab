//! JSON formats for modules, decompositions and certificates.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::degree::{MultiDegree, VarSet};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hilbert::{
    partition_to_decomposition, HilbertDecomposition, HilbertPartition, Interval, Summand,
    TruncatedSeries,
};
use crate::module::{GradedModule, Presentation, RelationTerm};
use crate::poly::GenericVar;
use crate::stanley::Assignment;

/// Tag recorded in certificates: each `M_a` has the basis of unit vectors at the
/// non-pivot columns of its relation space, in ascending order.
pub const BASIS_CONVENTION: &str = "nonpivot-unit-ascending/v1";

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum FieldDef {
    Name(String),
    Prime {
        #[serde(rename = "Fp")]
        p: u64,
    },
}

impl FieldDef {
    pub fn resolve(&self) -> Result<Field> {
        match self {
            FieldDef::Name(s) => Field::from_name(s),
            FieldDef::Prime { p } => Field::prime(*p),
        }
    }
}

impl From<Field> for FieldDef {
    fn from(f: Field) -> Self {
        match f {
            Field::Rationals => FieldDef::Name("Q".into()),
            Field::Prime(p) => FieldDef::Prime { p },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDef {
    pub n: usize,
    pub field: FieldDef,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDef {
    /// One-based generator index.
    pub gen: usize,
    pub shift: MultiDegree,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDef {
    Presentation {
        generators: Vec<MultiDegree>,
        #[serde(default)]
        relations: Vec<Vec<TermDef>>,
    },
    MonomialIdeal {
        generators: Vec<MultiDegree>,
    },
    QuotientByMonomialIdeal {
        generators: Vec<MultiDegree>,
    },
    Free {
        shifts: Vec<MultiDegree>,
    },
    DirectSum {
        summands: Vec<ModuleDef>,
    },
}

/// A module file: `{"ring": …, "g": […] (optional), "module": {"kind": …}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub ring: RingDef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<MultiDegree>,
    pub module: ModuleDef,
}

impl ModuleDef {
    fn presentation(&self, n: usize, field: Field, path: &str) -> Result<Presentation> {
        match self {
            ModuleDef::Presentation {
                generators,
                relations,
            } => {
                let mut rels = Vec::with_capacity(relations.len());
                for (r, rel) in relations.iter().enumerate() {
                    let mut terms = Vec::with_capacity(rel.len());
                    for (t, term) in rel.iter().enumerate() {
                        let at = format!("{path}.relations[{r}][{t}]");
                        if term.gen == 0 || term.gen > generators.len() {
                            return Err(Error::parse(
                                format!("{at}.gen"),
                                format!("{} is not in 1..={}", term.gen, generators.len()),
                            ));
                        }
                        let coeff = field
                            .parse(&term.coeff)
                            .map_err(|e| Error::parse(format!("{at}.coeff"), e.to_string()))?;
                        terms.push(RelationTerm::new(term.gen - 1, term.shift.clone(), coeff));
                    }
                    rels.push(terms);
                }
                Presentation::new(n, field, generators.clone(), rels)
            }
            ModuleDef::MonomialIdeal { generators } => {
                Presentation::monomial_ideal(n, field, generators)
            }
            ModuleDef::QuotientByMonomialIdeal { generators } => {
                Presentation::quotient_by_monomial_ideal(n, field, generators)
            }
            ModuleDef::Free { shifts } => Presentation::free(n, field, shifts),
            ModuleDef::DirectSum { summands } => {
                let parts = summands
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.presentation(n, field, &format!("{path}.summands[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                if parts.is_empty() {
                    return Ok(Presentation::zero(n, field));
                }
                Presentation::direct_sum(&parts)
            }
        }
    }
}

impl ModuleFile {
    pub fn parse(text: &str, file: &str) -> Result<ModuleFile> {
        serde_json::from_str(text).map_err(|e| Error::parse(file, e.to_string()))
    }

    /// The presentation over the file's field, or over `field` when given.
    pub fn presentation(&self, field: Option<Field>, file: &str) -> Result<Presentation> {
        let field = match field {
            Some(f) => f,
            None => self
                .ring
                .field
                .resolve()
                .map_err(|e| Error::parse(file, format!("ring.field: {e}")))?,
        };
        self.module
            .presentation(self.ring.n, field, "module")
            .map_err(|e| match e {
                Error::Parse { file: at, message } => {
                    Error::parse(file, format!("{at}: {message}"))
                }
                e => Error::parse(file, e.to_string()),
            })
    }

    /// Builds `M` on `[0, g]`: `g` from the argument, else the file, else the smallest
    /// bound containing the generator and relation degrees.
    pub fn build(
        &self,
        field: Option<Field>,
        g: Option<MultiDegree>,
        file: &str,
    ) -> Result<GradedModule> {
        let pres = self.presentation(field, file)?;
        let g = g
            .or_else(|| self.g.clone())
            .unwrap_or_else(|| pres.default_g());
        if g.len() != self.ring.n {
            return Err(Error::parse(
                file,
                format!("g = {g} has length {}, expected {}", g.len(), self.ring.n),
            ));
        }
        GradedModule::build(pres, g)
    }
}

pub fn load_module(
    path: &Path,
    field: Option<Field>,
    g: Option<MultiDegree>,
) -> Result<GradedModule> {
    let file = path.display().to_string();
    ModuleFile::parse(&read_file(path)?, &file)?.build(field, g, &file)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SummandDef {
    /// One-based variable indices.
    pub vars: Vec<usize>,
    pub shift: MultiDegree,
    #[serde(default = "one")]
    pub mult: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct IntervalDef {
    pub a: MultiDegree,
    pub b: MultiDegree,
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

/// A decomposition file, as summands `K[Z](−shift)` or as intervals `[a, b]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecompositionFile {
    Summands { summands: Vec<SummandDef> },
    Intervals { intervals: Vec<IntervalDef> },
}

impl DecompositionFile {
    pub fn parse(text: &str, file: &str) -> Result<DecompositionFile> {
        serde_json::from_str(text).map_err(|e| {
            Error::parse(
                file,
                format!("{e}; expected {{\"summands\": [...]}} or {{\"intervals\": [...]}}"),
            )
        })
    }

    /// Summands in file order, each repeated `mult` times. Intervals are turned into
    /// summands against the truncated Hilbert series of `gm`.
    pub fn resolve(&self, gm: &GradedModule, file: &str) -> Result<HilbertDecomposition> {
        let n = gm.n();
        match self {
            DecompositionFile::Summands { summands } => {
                let mut out = Vec::new();
                for (i, s) in summands.iter().enumerate() {
                    if let Some(&bad) = s.vars.iter().find(|&&v| v == 0 || v > n) {
                        return Err(Error::parse(
                            file,
                            format!("summands[{i}].vars: {bad} is not in 1..={n}"),
                        ));
                    }
                    if s.shift.len() != n {
                        return Err(Error::parse(
                            file,
                            format!(
                                "summands[{i}].shift has length {}, expected {n}",
                                s.shift.len()
                            ),
                        ));
                    }
                    let vars = VarSet::from_indices(s.vars.iter().map(|v| v - 1));
                    out.extend(std::iter::repeat_n(
                        Summand::new(vars, s.shift.clone()),
                        s.mult,
                    ));
                }
                Ok(HilbertDecomposition::new(out))
            }
            DecompositionFile::Intervals { intervals } => {
                let mut ivs = Vec::new();
                for (i, s) in intervals.iter().enumerate() {
                    let iv = Interval::new(s.a.clone(), s.b.clone())
                        .map_err(|e| Error::parse(file, format!("intervals[{i}]: {e}")))?;
                    ivs.extend(std::iter::repeat_n(iv, s.mult));
                }
                let series = TruncatedSeries::from_module(gm);
                partition_to_decomposition(&HilbertPartition::new(ivs), &series)
                    .map_err(|e| Error::parse(file, e.to_string()))
            }
        }
    }
}

pub fn load_decomposition(path: &Path, gm: &GradedModule) -> Result<HilbertDecomposition> {
    let file = path.display().to_string();
    DecompositionFile::parse(&read_file(path)?, &file)?.resolve(gm, &file)
}

/// Summands in order, runs of equal summands merged into one entry.
pub fn summand_defs(d: &HilbertDecomposition) -> Vec<SummandDef> {
    let mut out: Vec<SummandDef> = Vec::new();
    for s in d.summands() {
        let def = SummandDef {
            vars: s.vars.indices().map(|j| j + 1).collect(),
            shift: s.shift.clone(),
            mult: 1,
        };
        match out.last_mut() {
            Some(last) if last.vars == def.vars && last.shift == def.shift => last.mult += 1,
            _ => out.push(def),
        }
    }
    out
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// `"summands": [...]` with one summand per line.
fn summands_block(defs: &[SummandDef]) -> String {
    let lines: Vec<String> = defs.iter().map(|s| format!("    {}", compact(s))).collect();
    format!("  \"summands\": [\n{}\n  ]", lines.join(",\n"))
}

pub fn decomposition_json(d: &HilbertDecomposition) -> String {
    format!("{{\n{}\n}}\n", summands_block(&summand_defs(d)))
}

/// A decomposition together with values for the generic coefficients under which
/// every `A_a` is invertible.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub basis_convention: String,
    pub field: FieldDef,
    pub g: MultiDegree,
    pub summands: Vec<SummandDef>,
    pub witness: BTreeMap<String, String>,
}

impl Certificate {
    pub fn new(gm: &GradedModule, d: &HilbertDecomposition, y: &Assignment) -> Certificate {
        Certificate {
            basis_convention: BASIS_CONVENTION.into(),
            field: gm.field().into(),
            g: gm.g().clone(),
            summands: summand_defs(d),
            witness: y
                .iter()
                .map(|(v, s)| (v.to_string(), s.to_string()))
                .collect(),
        }
    }

    /// Stable layout: one summand per line, witness entries in `Y[i,j]` order.
    pub fn to_json(&self) -> String {
        let mut witness: Vec<(&String, &String)> = self.witness.iter().collect();
        witness.sort_by_key(|(k, _)| GenericVar::parse(k));
        let witness: Vec<String> = witness
            .iter()
            .map(|(k, v)| format!("    {}: {}", compact(k), compact(v)))
            .collect();
        format!(
            "{{\n  \"basis_convention\": {},\n  \"field\": {},\n  \"g\": {},\n{},\n  \"witness\": {{\n{}\n  }}\n}}\n",
            compact(&self.basis_convention),
            compact(&self.field),
            compact(&self.g),
            summands_block(&self.summands),
            witness.join(",\n")
        )
    }

    pub fn parse(text: &str, file: &str) -> Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::parse(file, e.to_string()))
    }

    /// Checks the certificate's metadata against `gm` and decodes its contents.
    pub fn decode(
        &self,
        gm: &GradedModule,
        file: &str,
    ) -> Result<(HilbertDecomposition, Assignment)> {
        if self.basis_convention != BASIS_CONVENTION {
            return Err(Error::parse(
                file,
                format!(
                    "basis convention {:?}, expected {BASIS_CONVENTION:?}",
                    self.basis_convention
                ),
            ));
        }
        let field = self
            .field
            .resolve()
            .map_err(|e| Error::parse(file, e.to_string()))?;
        if field != gm.field() {
            return Err(Error::parse(
                file,
                format!("certificate is over {field}, module over {}", gm.field()),
            ));
        }
        if &self.g != gm.g() {
            return Err(Error::parse(
                file,
                format!("certificate has g = {}, module has g = {}", self.g, gm.g()),
            ));
        }
        let d = DecompositionFile::Summands {
            summands: self.summands.clone(),
        }
        .resolve(gm, file)?;
        let mut y = Assignment::new();
        for (k, v) in &self.witness {
            let var = GenericVar::parse(k)
                .ok_or_else(|| Error::parse(file, format!("witness key {k:?} is not Y[i,j]")))?;
            let x = field
                .parse(v)
                .map_err(|e| Error::parse(file, format!("witness {k}: {e}")))?;
            y.insert(var, x);
        }
        Ok((d, y))
    }
}
