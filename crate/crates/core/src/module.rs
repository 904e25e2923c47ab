//! Graded presentations and the graded pieces `M_a` on a finite box of degrees.

use std::fmt;

use rayon::prelude::*;

use crate::degree::{DegreeBox, MultiDegree};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Subspace};

/// One term `coeff · X^shift · e_generator` of a relation (generator index zero-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTerm {
    pub generator: usize,
    pub shift: MultiDegree,
    pub coeff: Scalar,
}

impl RelationTerm {
    pub fn new(generator: usize, shift: MultiDegree, coeff: Scalar) -> Self {
        RelationTerm {
            generator,
            shift,
            coeff,
        }
    }
}

/// A graded presentation: free generators in given degrees modulo homogeneous relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    n: usize,
    field: Field,
    generators: Vec<MultiDegree>,
    relations: Vec<Vec<RelationTerm>>,
}

impl Presentation {
    /// Validates lengths, scalar fields and homogeneity. Zero terms are dropped.
    pub fn new(
        n: usize,
        field: Field,
        generators: Vec<MultiDegree>,
        relations: Vec<Vec<RelationTerm>>,
    ) -> Result<Self> {
        for d in &generators {
            if d.len() != n {
                return Err(Error::Shape(format!(
                    "generator degree {d} has length {}, expected {n}",
                    d.len()
                )));
            }
        }
        let mut cleaned = Vec::with_capacity(relations.len());
        for (index, rel) in relations.into_iter().enumerate() {
            let mut degree: Option<MultiDegree> = None;
            let mut terms: Vec<RelationTerm> = Vec::with_capacity(rel.len());
            for t in rel {
                if t.generator >= generators.len() {
                    return Err(Error::Inhomogeneous {
                        index,
                        detail: format!("generator {} does not exist", t.generator + 1),
                    });
                }
                if t.shift.len() != n {
                    return Err(Error::Shape(format!(
                        "relation {} shift {} has length {}, expected {n}",
                        index + 1,
                        t.shift,
                        t.shift.len()
                    )));
                }
                if t.coeff.field() != field {
                    return Err(Error::BadScalar {
                        value: t.coeff.to_string(),
                        field: field.to_string(),
                    });
                }
                if t.coeff.is_zero() {
                    continue;
                }
                let d = generators[t.generator].add(&t.shift);
                match &degree {
                    None => degree = Some(d),
                    Some(e) if *e == d => {}
                    Some(e) => {
                        return Err(Error::Inhomogeneous {
                            index,
                            detail: format!("terms in degrees {e} and {d}"),
                        })
                    }
                }
                match terms.iter_mut().find(|s| s.generator == t.generator) {
                    Some(s) => s.coeff += &t.coeff,
                    None => terms.push(t),
                }
            }
            terms.retain(|t| !t.coeff.is_zero());
            if !terms.is_empty() {
                cleaned.push(terms);
            }
        }
        Ok(Presentation {
            n,
            field,
            generators,
            relations: cleaned,
        })
    }

    /// The ideal generated by the monomials `X^u`, presented by its minimal generators
    /// and all pairwise syzygies `X^{lcm/u} e_u − X^{lcm/v} e_v`.
    pub fn monomial_ideal(n: usize, field: Field, exponents: &[MultiDegree]) -> Result<Self> {
        let gens = minimal_monomials(n, exponents)?;
        let mut relations = Vec::new();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let lcm = gens[i].join(&gens[j]);
                relations.push(vec![
                    RelationTerm::new(i, lcm.checked_sub(&gens[i]).unwrap(), field.one()),
                    RelationTerm::new(j, lcm.checked_sub(&gens[j]).unwrap(), -field.one()),
                ]);
            }
        }
        Presentation::new(n, field, gens, relations)
    }

    /// `R / (X^u : u ∈ exponents)`.
    pub fn quotient_by_monomial_ideal(
        n: usize,
        field: Field,
        exponents: &[MultiDegree],
    ) -> Result<Self> {
        let gens = minimal_monomials(n, exponents)?;
        let relations = gens
            .into_iter()
            .map(|u| vec![RelationTerm::new(0, u, field.one())])
            .collect();
        Presentation::new(n, field, vec![MultiDegree::zero(n)], relations)
    }

    /// `⊕ R(−s)` over the given shifts.
    pub fn free(n: usize, field: Field, shifts: &[MultiDegree]) -> Result<Self> {
        Presentation::new(n, field, shifts.to_vec(), Vec::new())
    }

    pub fn zero(n: usize, field: Field) -> Self {
        Presentation {
            n,
            field,
            generators: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn direct_sum(parts: &[Presentation]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Shape("direct sum of no modules".into()))?;
        let (n, field) = (first.n, first.field);
        let mut generators = Vec::new();
        let mut relations = Vec::new();
        for p in parts {
            if p.n != n || p.field != field {
                return Err(Error::Shape(format!(
                    "direct sum of modules over different rings ({} vars over {}, {} vars over {})",
                    n, field, p.n, p.field
                )));
            }
            let offset = generators.len();
            generators.extend(p.generators.iter().cloned());
            relations.extend(p.relations.iter().map(|rel| {
                rel.iter()
                    .map(|t| {
                        RelationTerm::new(t.generator + offset, t.shift.clone(), t.coeff.clone())
                    })
                    .collect::<Vec<_>>()
            }));
        }
        Presentation::new(n, field, generators, relations)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generators(&self) -> &[MultiDegree] {
        &self.generators
    }

    pub fn relations(&self) -> &[Vec<RelationTerm>] {
        &self.relations
    }

    pub fn relation_degree(&self, r: usize) -> MultiDegree {
        let t = &self.relations[r][0];
        self.generators[t.generator].add(&t.shift)
    }

    /// Componentwise maximum of all generator and relation degrees.
    pub fn default_g(&self) -> MultiDegree {
        let mut g = MultiDegree::zero(self.n);
        for d in &self.generators {
            g = g.join(d);
        }
        for r in 0..self.relations.len() {
            g = g.join(&self.relation_degree(r));
        }
        g
    }
}

fn minimal_monomials(n: usize, exponents: &[MultiDegree]) -> Result<Vec<MultiDegree>> {
    if let Some(u) = exponents.iter().find(|u| u.len() != n) {
        return Err(Error::Shape(format!(
            "monomial {u} has length {}, expected {n}",
            u.len()
        )));
    }
    // keep the first occurrence of each minimal monomial, in input order
    let mut minimal: Vec<MultiDegree> = Vec::new();
    for u in exponents {
        if !minimal.contains(u) && !exponents.iter().any(|v| v != u && v.le(u)) {
            minimal.push(u.clone());
        }
    }
    Ok(minimal)
}

/// The vector space `M_a`: ambient coordinates are the generators with degree ⪯ a,
/// and the basis consists of the cosets at the non-pivot columns of the relation space.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    /// Generator indices spanning `M_a`, ascending.
    ambient: Vec<usize>,
    /// Generator index of each basis vector.
    basis: Vec<usize>,
    /// Quotient coordinates of `X^{a−deg e_i} e_i`, indexed by generator (None if deg e_i ⋠ a).
    gen_coords: Vec<Option<Vec<Scalar>>>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_generators(&self) -> &[usize] {
        &self.ambient
    }

    pub fn basis_generators(&self) -> &[usize] {
        &self.basis
    }

    /// Coordinates of `X^{a−deg e_i} e_i` in the basis of this piece.
    pub fn generator_coordinates(&self, i: usize) -> Option<&[Scalar]> {
        self.gen_coords.get(i)?.as_deref()
    }
}

/// A multiplication map `·X_k : M_a → M_{a+e_k}` that is not an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GViolation {
    pub degree: MultiDegree,
    /// Zero-based variable index.
    pub var: usize,
}

impl fmt::Display for GViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "multiplication by X_{} from degree {} is not an isomorphism",
            self.var + 1,
            self.degree
        )
    }
}

/// A presentation together with all graded pieces and multiplication maps on a box.
#[derive(Clone, Debug)]
pub struct GradedModule {
    presentation: Presentation,
    g: MultiDegree,
    degrees: DegreeBox,
    pieces: Vec<GradedPiece>,
    mult_maps: Vec<Option<Matrix>>,
}

impl GradedModule {
    /// Builds the pieces on `[0, g+𝟙]`; every generator and relation degree must be ⪯ g.
    pub fn build(pres: Presentation, g: MultiDegree) -> Result<Self> {
        if g.len() != pres.n {
            return Err(Error::Shape(format!(
                "g = {g} has length {}, expected {}",
                g.len(),
                pres.n
            )));
        }
        for (i, d) in pres.generators.iter().enumerate() {
            if !d.le(&g) {
                return Err(Error::PresentationExceedsG {
                    what: format!("generator {}", i + 1),
                    degree: d.clone(),
                    g,
                });
            }
        }
        for r in 0..pres.relations.len() {
            let d = pres.relation_degree(r);
            if !d.le(&g) {
                return Err(Error::PresentationExceedsG {
                    what: format!("relation {}", r + 1),
                    degree: d,
                    g,
                });
            }
        }
        let top = g.plus_ones();
        Ok(GradedModule::compute(pres, g, top))
    }

    /// Builds with the default `g` (maximum presentation degree).
    pub fn build_default(pres: Presentation) -> Result<Self> {
        let g = pres.default_g();
        GradedModule::build(pres, g)
    }

    /// Builds without checking the presentation against `g`. The box is enlarged to
    /// `[0, max(g, presentation degrees) + 𝟙]` so that [`verify_g_determined`]
    /// can locate a violation.
    ///
    /// [`verify_g_determined`]: GradedModule::verify_g_determined
    pub fn build_unchecked(pres: Presentation, g: MultiDegree) -> Result<Self> {
        if g.len() != pres.n {
            return Err(Error::Shape(format!(
                "g = {g} has length {}, expected {}",
                g.len(),
                pres.n
            )));
        }
        let top = g.join(&pres.default_g()).plus_ones();
        Ok(GradedModule::compute(pres, g, top))
    }

    fn compute(pres: Presentation, g: MultiDegree, top: MultiDegree) -> Self {
        let degrees = DegreeBox::new(top);
        let pieces: Vec<GradedPiece> = (0..degrees.size())
            .into_par_iter()
            .map(|idx| compute_piece(&pres, &degrees.degree(idx)))
            .collect();
        let mut module = GradedModule {
            presentation: pres,
            g,
            degrees,
            pieces,
            mult_maps: Vec::new(),
        };
        let n = module.n();
        let maps: Vec<Option<Matrix>> = (0..module.degrees.size() * n)
            .into_par_iter()
            .map(|slot| {
                let (idx, k) = (slot / n, slot % n);
                let a = module.degrees.degree(idx);
                let to = module.degrees.step_up(idx, &a, k)?;
                Some(module.transfer_by_index(idx, to))
            })
            .collect();
        module.mult_maps = maps;
        module
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn n(&self) -> usize {
        self.presentation.n
    }

    pub fn field(&self) -> Field {
        self.presentation.field
    }

    pub fn g(&self) -> &MultiDegree {
        &self.g
    }

    /// The box on which pieces were computed.
    pub fn computed_box(&self) -> &DegreeBox {
        &self.degrees
    }

    /// The box `[0, g]` carrying the truncated Hilbert series.
    pub fn g_box(&self) -> DegreeBox {
        DegreeBox::new(self.g.clone())
    }

    fn index_of(&self, a: &MultiDegree) -> Result<usize> {
        if !self.degrees.contains(a) {
            return Err(Error::OutOfRange {
                degree: a.clone(),
                bound: self.degrees.top().clone(),
            });
        }
        Ok(self.degrees.index(a))
    }

    pub fn piece(&self, a: &MultiDegree) -> Result<&GradedPiece> {
        Ok(&self.pieces[self.index_of(a)?])
    }

    /// `dim_K M_a`.
    pub fn hilbert_function(&self, a: &MultiDegree) -> Result<usize> {
        Ok(self.piece(a)?.dim())
    }

    /// `Σ_{a ⪯ g} dim M_a`.
    pub fn total_dim(&self) -> usize {
        self.g_box()
            .iter()
            .map(|a| self.pieces[self.degrees.index(&a)].dim())
            .sum()
    }

    /// Matrix of `·X_k : M_a → M_{a+e_k}` (`k` zero-based), if `a + e_k` is in the box.
    pub fn mult_map(&self, a: &MultiDegree, k: usize) -> Result<Option<&Matrix>> {
        let idx = self.index_of(a)?;
        Ok(self.mult_maps[idx * self.n() + k].as_ref())
    }

    /// Matrix of `·X^{a−b} : M_b → M_a` for `b ⪯ a`.
    pub fn transfer(&self, b: &MultiDegree, a: &MultiDegree) -> Result<Matrix> {
        if !b.le(a) {
            return Err(Error::Domain(format!("{b} is not below {a}")));
        }
        let (from, to) = (self.index_of(b)?, self.index_of(a)?);
        Ok(self.transfer_by_index(from, to))
    }

    fn transfer_by_index(&self, from: usize, to: usize) -> Matrix {
        let (src, dst) = (&self.pieces[from], &self.pieces[to]);
        let mut m = Matrix::zeros(self.field(), dst.dim(), src.dim());
        for (k, &gen) in src.basis.iter().enumerate() {
            let col = dst.gen_coords[gen]
                .as_ref()
                .expect("generator degree below target");
            for (r, c) in col.iter().enumerate() {
                m[(r, k)] = c.clone();
            }
        }
        m
    }

    /// The subspace `X^{a−b} M_b ⊆ M_a` in basis coordinates of `M_a`.
    pub fn image(&self, b: &MultiDegree, a: &MultiDegree) -> Result<Subspace> {
        let t = self.transfer(b, a)?;
        Subspace::span(
            self.field(),
            t.rows(),
            (0..t.cols()).map(|k| t.column(k)).collect(),
        )
    }

    /// Checks that `·X_k : M_a → M_{a+e_k}` is an isomorphism whenever `a_k ≥ g_k`
    /// and both degrees lie in the computed box. Returns the first violation.
    pub fn verify_g_determined(&self) -> Option<GViolation> {
        let n = self.n();
        for idx in 0..self.degrees.size() {
            let a = self.degrees.degree(idx);
            for k in 0..n {
                if a[k] < self.g[k] {
                    continue;
                }
                let Some(m) = &self.mult_maps[idx * n + k] else {
                    continue;
                };
                if m.rows() != m.cols() || m.rank() != m.cols() {
                    return Some(GViolation { degree: a, var: k });
                }
            }
        }
        None
    }

    /// Human-readable label of basis vector `j` (zero-based) of `M_a`, e.g. `X^(0,1)*e2`.
    pub fn basis_label(&self, a: &MultiDegree, j: usize) -> Result<String> {
        let piece = self.piece(a)?;
        let gen = *piece
            .basis
            .get(j)
            .ok_or_else(|| Error::Domain(format!("M_{a} has no basis vector {}", j + 1)))?;
        let shift = a
            .checked_sub(&self.presentation.generators[gen])
            .expect("basis generator below degree");
        Ok(if shift.is_zero() {
            format!("e{}", gen + 1)
        } else {
            format!("X^{shift}*e{}", gen + 1)
        })
    }
}

fn compute_piece(pres: &Presentation, a: &MultiDegree) -> GradedPiece {
    let field = pres.field;
    let ambient: Vec<usize> = (0..pres.generators.len())
        .filter(|&i| pres.generators[i].le(a))
        .collect();
    let mut position = vec![usize::MAX; pres.generators.len()];
    for (p, &i) in ambient.iter().enumerate() {
        position[i] = p;
    }
    let dim = ambient.len();
    let rows: Vec<Vec<Scalar>> = (0..pres.relations.len())
        .filter(|&r| pres.relation_degree(r).le(a))
        .map(|r| {
            let mut v = vec![field.zero(); dim];
            for t in &pres.relations[r] {
                v[position[t.generator]] += &t.coeff;
            }
            v
        })
        .collect();
    let rel = Subspace::span(field, dim, rows).expect("rows have ambient length");
    let basis: Vec<usize> = rel.free_columns().into_iter().map(|c| ambient[c]).collect();
    let gen_coords = (0..pres.generators.len())
        .map(|i| {
            (position[i] != usize::MAX).then(|| {
                let mut unit = vec![field.zero(); dim];
                unit[position[i]] = field.one();
                rel.quotient_coordinates(&unit)
            })
        })
        .collect();
    GradedPiece {
        ambient,
        basis,
        gen_coords,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(v: &[u32]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    fn q() -> Field {
        Field::Rationals
    }

    /// `(X₁,X₂) ⊕ (X₁X₂) ⊂ R²`.
    fn ideal_sum() -> Presentation {
        let m = Presentation::monomial_ideal(2, q(), &[md(&[1, 0]), md(&[0, 1])]).unwrap();
        let p = Presentation::monomial_ideal(2, q(), &[md(&[1, 1])]).unwrap();
        Presentation::direct_sum(&[m, p]).unwrap()
    }

    fn twisted(field: Field) -> Presentation {
        let one = field.one();
        let gens = vec![
            md(&[3, 0]),
            md(&[3, 0]),
            md(&[2, 1]),
            md(&[1, 2]),
            md(&[0, 3]),
        ];
        let rels = vec![
            vec![
                RelationTerm::new(0, md(&[0, 1]), one.clone()),
                RelationTerm::new(2, md(&[1, 0]), -one.clone()),
            ],
            vec![
                RelationTerm::new(1, md(&[0, 2]), one.clone()),
                RelationTerm::new(3, md(&[2, 0]), -one.clone()),
            ],
            vec![
                RelationTerm::new(0, md(&[0, 3]), one.clone()),
                RelationTerm::new(1, md(&[0, 3]), one.clone()),
                RelationTerm::new(4, md(&[3, 0]), -one),
            ],
        ];
        Presentation::new(2, field, gens, rels).unwrap()
    }

    #[test]
    fn ideal_presentation() {
        let m =
            Presentation::monomial_ideal(2, q(), &[md(&[1, 0]), md(&[0, 1]), md(&[1, 1])]).unwrap();
        assert_eq!(m.generators(), &[md(&[1, 0]), md(&[0, 1])]);
        assert_eq!(m.relations().len(), 1);
        assert_eq!(m.relation_degree(0), md(&[1, 1]));
        assert!(Presentation::monomial_ideal(2, q(), &[md(&[1])]).is_err());
    }

    #[test]
    fn ideal_sum_pieces() {
        let gm = GradedModule::build(ideal_sum(), md(&[1, 1])).unwrap();
        assert_eq!(gm.hilbert_function(&md(&[0, 0])).unwrap(), 0);
        assert_eq!(gm.hilbert_function(&md(&[1, 0])).unwrap(), 1);
        assert_eq!(gm.hilbert_function(&md(&[1, 1])).unwrap(), 2);
        // X₁X₂e₁ and the generator of (X₁X₂)
        assert_eq!(gm.basis_label(&md(&[1, 1]), 0).unwrap(), "X^(1,0)*e2");
        assert_eq!(gm.basis_label(&md(&[1, 1]), 1).unwrap(), "e3");
        assert!(gm.verify_g_determined().is_none());
        assert!(matches!(
            gm.hilbert_function(&md(&[3, 0])),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn free_module_dims() {
        let r = Presentation::free(1, q(), &[md(&[0])]).unwrap();
        let gm = GradedModule::build(r, md(&[2])).unwrap();
        for a in 0..=3 {
            assert_eq!(gm.hilbert_function(&md(&[a])).unwrap(), 1);
        }
        assert!(gm.verify_g_determined().is_none());
    }

    #[test]
    fn twisted_pieces() {
        let gm = GradedModule::build(twisted(q()), md(&[3, 3])).unwrap();
        for k in 0..=3 {
            assert_eq!(gm.hilbert_function(&md(&[3, k])).unwrap(), 2);
        }
        assert_eq!(gm.hilbert_function(&md(&[2, 1])).unwrap(), 1);
        assert_eq!(gm.hilbert_function(&md(&[0, 0])).unwrap(), 0);
        assert!(gm.verify_g_determined().is_none());
    }

    #[test]
    fn presentation_outside_g() {
        let e = GradedModule::build(twisted(q()), md(&[3, 2])).unwrap_err();
        assert!(matches!(e, Error::PresentationExceedsG { .. }));
    }

    #[test]
    fn inhomogeneous_relation() {
        let one = q().one();
        let e = Presentation::new(
            1,
            q(),
            vec![md(&[0]), md(&[0])],
            vec![vec![
                RelationTerm::new(0, md(&[1]), one.clone()),
                RelationTerm::new(1, md(&[2]), one),
            ]],
        )
        .unwrap_err();
        assert!(matches!(e, Error::Inhomogeneous { index: 0, .. }));
    }

    #[test]
    fn g_determinedness_of_truncated_polynomial_ring() {
        // R/(X₁²): the map M_1 → M_2 is zero, so g must reach 2
        let p = Presentation::quotient_by_monomial_ideal(1, q(), &[md(&[2])]).unwrap();
        let v0 = GradedModule::build_unchecked(p.clone(), md(&[0]))
            .unwrap()
            .verify_g_determined();
        assert_eq!(
            v0,
            Some(GViolation {
                degree: md(&[1]),
                var: 0
            })
        );
        let v1 = GradedModule::build_unchecked(p.clone(), md(&[1]))
            .unwrap()
            .verify_g_determined();
        assert_eq!(
            v1,
            Some(GViolation {
                degree: md(&[1]),
                var: 0
            })
        );
        let gm = GradedModule::build(p, md(&[2])).unwrap();
        assert!(gm.verify_g_determined().is_none());
        assert_eq!(gm.hilbert_function(&md(&[3])).unwrap(), 0);
    }

    #[test]
    fn ideal_dims_match_membership() {
        let gens = [md(&[2, 0, 1]), md(&[0, 1, 1]), md(&[1, 1, 0])];
        let p = Presentation::monomial_ideal(3, q(), &gens).unwrap();
        let gm = GradedModule::build_default(p).unwrap();
        for a in gm.computed_box().iter() {
            let member = gens.iter().any(|u| u.le(&a)) as usize;
            assert_eq!(gm.hilbert_function(&a).unwrap(), member, "at {a}");
        }
        let qp = Presentation::quotient_by_monomial_ideal(3, q(), &gens).unwrap();
        let gq = GradedModule::build_default(qp).unwrap();
        for a in gq.computed_box().iter() {
            let member = gens.iter().any(|u| u.le(&a)) as usize;
            assert_eq!(gq.hilbert_function(&a).unwrap(), 1 - member, "at {a}");
        }
        assert!(gq.verify_g_determined().is_none());
    }

    #[test]
    fn direct_sum_is_additive() {
        let m = Presentation::monomial_ideal(2, q(), &[md(&[1, 0]), md(&[0, 2])]).unwrap();
        let r = Presentation::free(2, q(), &[md(&[1, 1])]).unwrap();
        let s = Presentation::direct_sum(&[m.clone(), r.clone(), m.clone()]).unwrap();
        let g = md(&[1, 2]);
        let (gm, gr, gs) = (
            GradedModule::build(m, g.clone()).unwrap(),
            GradedModule::build(r, g.clone()).unwrap(),
            GradedModule::build(s, g).unwrap(),
        );
        for a in gs.computed_box().iter() {
            assert_eq!(
                gs.hilbert_function(&a).unwrap(),
                2 * gm.hilbert_function(&a).unwrap() + gr.hilbert_function(&a).unwrap()
            );
        }
    }

    #[test]
    fn multiplication_maps_commute() {
        for field in [q(), Field::prime(2).unwrap()] {
            let gm = GradedModule::build(twisted(field), md(&[3, 3])).unwrap();
            let bx = gm.computed_box();
            for a in bx.iter() {
                for j in 0..2 {
                    for k in 0..2 {
                        let aj = a.plus_unit(j);
                        let ajk = aj.plus_unit(k);
                        if !bx.contains(&ajk) {
                            continue;
                        }
                        let ak = a.plus_unit(k);
                        let p1 = gm
                            .mult_map(&aj, k)
                            .unwrap()
                            .unwrap()
                            .mul(gm.mult_map(&a, j).unwrap().unwrap())
                            .unwrap();
                        let p2 = gm
                            .mult_map(&ak, j)
                            .unwrap()
                            .unwrap()
                            .mul(gm.mult_map(&a, k).unwrap().unwrap())
                            .unwrap();
                        assert_eq!(p1, p2);
                        assert_eq!(p1, gm.transfer(&a, &ajk).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn dims_stabilize_beyond_g() {
        let gm = GradedModule::build(twisted(q()), md(&[3, 3])).unwrap();
        let g = gm.g().clone();
        for a in gm.computed_box().iter() {
            assert_eq!(
                gm.hilbert_function(&a).unwrap(),
                gm.hilbert_function(&a.meet(&g)).unwrap()
            );
        }
    }

    #[test]
    fn zero_module() {
        let gm = GradedModule::build(Presentation::zero(2, q()), md(&[1, 0])).unwrap();
        assert_eq!(gm.total_dim(), 0);
        assert!(gm.verify_g_determined().is_none());
    }
}
