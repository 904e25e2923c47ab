#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdepth::hilbert::{Interval, TruncatedSeries};
use sdepth::{DegreeBox, Field, GradedModule, MultiDegree, Presentation, VarSet};

pub fn md(v: &[u32]) -> MultiDegree {
    MultiDegree::new(v.to_vec())
}

/// One-based indices.
pub fn vars(v: &[usize]) -> VarSet {
    VarSet::from_indices(v.iter().map(|i| i - 1))
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

/// `𝔪^{⊕α} ⊕ R^{⊕β}` on `[0, 𝟙]`.
pub fn max_ideal_plus_free(n: usize, alpha: usize, beta: usize, field: Field) -> GradedModule {
    let units: Vec<MultiDegree> = (0..n).map(|k| MultiDegree::unit(n, k)).collect();
    let mut parts: Vec<Presentation> = (0..alpha)
        .map(|_| Presentation::monomial_ideal(n, field, &units).unwrap())
        .collect();
    if beta > 0 {
        parts.push(Presentation::free(n, field, &vec![MultiDegree::zero(n); beta]).unwrap());
    }
    let pres = if parts.is_empty() {
        Presentation::zero(n, field)
    } else {
        Presentation::direct_sum(&parts).unwrap()
    };
    GradedModule::build(pres, MultiDegree::ones(n)).unwrap()
}

/// A monomial ideal `I` or quotient `R/I`.
#[derive(Clone, Debug)]
pub struct MonomialPart {
    pub quotient: bool,
    pub generators: Vec<MultiDegree>,
}

impl MonomialPart {
    fn presentation(&self, n: usize, field: Field) -> Presentation {
        if self.quotient {
            Presentation::quotient_by_monomial_ideal(n, field, &self.generators)
        } else {
            Presentation::monomial_ideal(n, field, &self.generators)
        }
        .unwrap()
    }

    fn label(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        if self.quotient {
            format!("R/({})", gens.join(","))
        } else {
            format!("({})", gens.join(","))
        }
    }
}

/// A small random module: one or two monomial parts, summed.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub n: usize,
    pub parts: Vec<MonomialPart>,
}

impl CorpusEntry {
    pub fn build(&self, field: Field) -> GradedModule {
        let parts: Vec<Presentation> = self
            .parts
            .iter()
            .map(|p| p.presentation(self.n, field))
            .collect();
        let pres = Presentation::direct_sum(&parts).unwrap();
        GradedModule::build_default(pres).unwrap()
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.parts.iter().map(MonomialPart::label).collect();
        format!("n={}: {}", self.n, parts.join(" + "))
    }
}

fn random_part(n: usize, rng: &mut ChaCha8Rng) -> MonomialPart {
    let k = rng.gen_range(1..=3);
    MonomialPart {
        quotient: rng.gen_bool(0.5),
        generators: (0..k)
            .map(|_| MultiDegree::new((0..n).map(|_| rng.gen_range(0..=2)).collect()))
            .collect(),
    }
}

/// `count` distinct modules with `n ≤ 3` and `Σ_{a ⪯ g} dim M_a ≤ max_total`; about half
/// are direct sums of two parts, which is where non-induced decompositions occur.
pub fn corpus(count: usize, max_total: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=3);
        let parts = if rng.gen_bool(0.5) { 2 } else { 1 };
        let e = CorpusEntry {
            n,
            parts: (0..parts).map(|_| random_part(n, &mut rng)).collect(),
        };
        let total = TruncatedSeries::from_module(&e.build(Field::Rationals)).total();
        if total == 0 || total > max_total || !seen.insert(e.label()) {
            continue;
        }
        out.push(e);
    }
    out
}

/// Every multiset of intervals `[a,b] ⊆ [0,g]` whose indicator functions add up to
/// the series, by choosing a multiplicity for each interval in turn. Independent of
/// the cover-the-smallest-degree search in the library.
pub fn brute_force_partitions(series: &TruncatedSeries) -> BTreeSet<Vec<Interval>> {
    let bx = DegreeBox::new(series.g().clone());
    let support: Vec<MultiDegree> = bx.iter().filter(|a| series.coefficient(a) > 0).collect();
    let mut intervals = Vec::new();
    for a in &support {
        for b in &support {
            if a.le(b) && DegreeBox::interval(a, b).all(|c| series.coefficient(&c) > 0) {
                intervals.push(Interval::new(a.clone(), b.clone()).unwrap());
            }
        }
    }
    let mut remaining: Vec<usize> = bx.iter().map(|a| series.coefficient(&a)).collect();
    let mut chosen = Vec::new();
    let mut out = BTreeSet::new();
    fn go(
        i: usize,
        intervals: &[Interval],
        bx: &DegreeBox,
        remaining: &mut Vec<usize>,
        chosen: &mut Vec<Interval>,
        out: &mut BTreeSet<Vec<Interval>>,
    ) {
        if remaining.iter().all(|&r| r == 0) {
            let mut p = chosen.clone();
            p.sort();
            out.insert(p);
            return;
        }
        if i == intervals.len() {
            return;
        }
        go(i + 1, intervals, bx, remaining, chosen, out);
        let cells: Vec<usize> = DegreeBox::interval(&intervals[i].a, &intervals[i].b)
            .map(|c| bx.index(&c))
            .collect();
        let mut times = 0;
        while cells.iter().all(|&c| remaining[c] > 0) {
            for &c in &cells {
                remaining[c] -= 1;
            }
            chosen.push(intervals[i].clone());
            times += 1;
            go(i + 1, intervals, bx, remaining, chosen, out);
        }
        for _ in 0..times {
            chosen.pop();
        }
        for &c in &cells {
            remaining[c] += times;
        }
    }
    go(0, &intervals, &bx, &mut remaining, &mut chosen, &mut out);
    out
}
