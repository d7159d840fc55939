use std::collections::HashMap;

use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::perm::Perm;

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Abstract group of the closure of `gens` acting on `0..degree`.
///
/// Elements are numbered in breadth-first order over words in the
/// generators, so the identity is element 0.
pub fn group_from_generators(
    name: impl Into<String>,
    degree: usize,
    gens: &[Perm],
) -> Result<FiniteGroup> {
    group_from_generators_capped(name, degree, gens, DEFAULT_CLOSURE_CAP)
}

pub(crate) fn group_from_generators_capped(
    name: impl Into<String>,
    degree: usize,
    gens: &[Perm],
    cap: usize,
) -> Result<FiniteGroup> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::InvalidPermutation(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
    }
    let cap = cap.min(super::MAX_ORDER);
    let mut elems = vec![Perm::identity(degree)];
    let mut index: HashMap<Perm, usize> = HashMap::from([(elems[0].clone(), 0)]);
    // right[x][i] = index of elems[x] * gens[i]
    let mut right: Vec<Vec<usize>> = Vec::new();
    // Each non-identity element is pred * gen.
    let mut word: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let mut i = 0;
    while i < elems.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (k, g) in gens.iter().enumerate() {
            let y = elems[i].then(g);
            let idx = match index.get(&y) {
                Some(&j) => j,
                None => {
                    let j = elems.len();
                    if j >= cap {
                        return Err(Error::ClosureTooLarge { cap });
                    }
                    index.insert(y.clone(), j);
                    elems.push(y);
                    word.push((i, k));
                    j
                }
            };
            row.push(idx);
        }
        right.push(row);
        i += 1;
    }
    let n = elems.len();
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        mul[a * n] = a as u32;
        for b in 1..n {
            let (pred, k) = word[b];
            let ap = mul[a * n + pred] as usize;
            mul[a * n + b] = right[ap][k] as u32;
        }
    }
    let labels = elems.iter().map(|p| p.to_string()).collect();
    FiniteGroup::from_raw(name.into(), n, mul, labels)
}
