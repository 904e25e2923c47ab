//! Independent transversals of a family of subspaces, by matroid intersection of the
//! linear matroid on all basis vectors with the partition matroid "one per subspace".

use std::collections::VecDeque;

use crate::field::{Field, Scalar};
use crate::linalg::{solve_in_span, Subspace};

/// A maximum set of linearly independent vectors, at most one from each subspace.
/// Returns `(subspace index, vector)` pairs; the family has an independent
/// transversal iff the result has one entry per subspace.
pub fn max_transversal(field: Field, spaces: &[Subspace]) -> Vec<(usize, Vec<Scalar>)> {
    let ground: Vec<(usize, &Vec<Scalar>)> = spaces
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.basis().iter().map(move |v| (i, v)))
        .collect();
    let parts = spaces.len();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = vec![false; parts];

    // greedy start
    for (x, &(part, v)) in ground.iter().enumerate() {
        if used[part] {
            continue;
        }
        let current: Vec<Vec<Scalar>> = chosen.iter().map(|&c| ground[c].1.clone()).collect();
        if solve_in_span(field, &current, v).is_none() {
            chosen.push(x);
            used[part] = true;
        }
    }

    while chosen.len() < parts {
        if !augment(field, &ground, &mut chosen, &mut used) {
            break;
        }
    }
    chosen
        .into_iter()
        .map(|x| (ground[x].0, ground[x].1.clone()))
        .collect()
}

/// One shortest augmenting path in the exchange graph; false if none exists.
fn augment(
    field: Field,
    ground: &[(usize, &Vec<Scalar>)],
    chosen: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let m = ground.len();
    let mut in_set = vec![false; m];
    for &c in chosen.iter() {
        in_set[c] = true;
    }
    let current: Vec<Vec<Scalar>> = chosen.iter().map(|&c| ground[c].1.clone()).collect();
    // coordinates of each outside element relative to the chosen vectors (None: independent)
    let coords: Vec<Option<Vec<Scalar>>> = (0..m)
        .map(|x| {
            if in_set[x] {
                None
            } else {
                solve_in_span(field, &current, ground[x].1)
            }
        })
        .collect();
    let pos_of = |y: usize| chosen.iter().position(|&c| c == y);

    let is_source = |x: usize| !in_set[x] && coords[x].is_none();
    let is_sink = |x: usize| !in_set[x] && !used[ground[x].0];

    let mut prev = vec![usize::MAX; m];
    let mut seen = vec![false; m];
    let mut queue = VecDeque::new();
    for x in 0..m {
        if is_source(x) {
            seen[x] = true;
            queue.push_back(x);
        }
    }
    let mut end = None;
    while let Some(u) = queue.pop_front() {
        if !in_set[u] && is_sink(u) {
            end = Some(u);
            break;
        }
        if in_set[u] {
            // y → x when chosen − y + x is linearly independent
            let k = pos_of(u).expect("chosen element");
            for x in 0..m {
                if seen[x] || in_set[x] {
                    continue;
                }
                let ok = match &coords[x] {
                    None => true,
                    Some(c) => !c[k].is_zero(),
                };
                if ok {
                    seen[x] = true;
                    prev[x] = u;
                    queue.push_back(x);
                }
            }
        } else {
            // x → y when chosen − y + x uses each subspace at most once
            let part = ground[u].0;
            for &y in chosen.iter() {
                if !seen[y] && ground[y].0 == part {
                    seen[y] = true;
                    prev[y] = u;
                    queue.push_back(y);
                }
            }
        }
    }
    let Some(mut x) = end else {
        return false;
    };
    let mut path = vec![x];
    while prev[x] != usize::MAX {
        x = prev[x];
        path.push(x);
    }
    for &p in &path {
        in_set[p] = !in_set[p];
    }
    chosen.clear();
    chosen.extend((0..m).filter(|&p| in_set[p]));
    used.iter_mut().for_each(|u| *u = false);
    for &c in chosen.iter() {
        used[ground[c].0] = true;
    }
    true
}

/// Rado's condition checked over all nonempty subfamilies: `dim Σ_{i∈J} V_i ≥ |J|`.
/// Exponential; intended as an oracle for small families.
pub fn rado_condition(spaces: &[Subspace]) -> bool {
    let m = spaces.len();
    assert!(m < 24, "subfamily enumeration is exponential");
    (1u32..1 << m).all(|mask| {
        let members: Vec<Subspace> = (0..m)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| spaces[i].clone())
            .collect();
        crate::linalg::subspace_sum_dim(&members).expect("common ambient space") >= members.len()
    })
}
