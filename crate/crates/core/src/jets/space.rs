use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use std::sync::LazyLock;

use super::MultiIndex;

const NONE: u32 = u32::MAX;

/// Dense index of all monomials of a given dimension up to a maximum degree.
///
/// The position of a multi-index does not depend on `max_degree` (lower
/// degrees always come first), so a polynomial of degree `n` occupies the
/// first `count(n)` slots of any space with `max_degree ≥ n`.
#[derive(Debug)]
pub struct MonomialSpace {
    dim: usize,
    max_degree: usize,
    terms: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    // counts[n] = number of monomials with degree ≤ n
    counts: Vec<usize>,
    degrees: Vec<usize>,
    // mul[i * len + j] = index of terms[i] + terms[j], NONE past max_degree
    mul: Vec<u32>,
    // raise[i][j] = index of terms[j] + e_i
    raise: Vec<Vec<u32>>,
}

type SpaceCache = Mutex<HashMap<(usize, usize), Arc<MonomialSpace>>>;

static CACHE: LazyLock<SpaceCache> = LazyLock::new(|| Mutex::new(HashMap::new()));

impl MonomialSpace {
    /// Shared space for `(dim, max_degree)`; built once per process.
    pub fn shared(dim: usize, max_degree: usize) -> Arc<MonomialSpace> {
        let mut cache = CACHE.lock().expect("monomial space cache poisoned");
        cache
            .entry((dim, max_degree))
            .or_insert_with(|| Arc::new(MonomialSpace::build(dim, max_degree)))
            .clone()
    }

    fn build(dim: usize, max_degree: usize) -> Self {
        let terms = MultiIndex::all_up_to(dim, max_degree as u32);
        let lookup: HashMap<_, _> = terms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let degrees: Vec<usize> = terms.iter().map(|a| a.degree() as usize).collect();
        let counts = (0..=max_degree)
            .map(|n| degrees.iter().filter(|&&d| d <= n).count())
            .collect();
        let len = terms.len();
        let mut mul = vec![NONE; len * len];
        for i in 0..len {
            for j in 0..len {
                if degrees[i] + degrees[j] <= max_degree {
                    let s = terms[i].add(&terms[j]);
                    mul[i * len + j] = lookup[&s] as u32;
                }
            }
        }
        let raise = (0..dim)
            .map(|axis| {
                terms
                    .iter()
                    .map(|a| {
                        let s = a.add(&MultiIndex::unit(dim, axis));
                        lookup.get(&s).map_or(NONE, |&k| k as u32)
                    })
                    .collect()
            })
            .collect();
        MonomialSpace {
            dim,
            max_degree,
            terms,
            lookup,
            counts,
            degrees,
            mul,
            raise,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Number of monomials of degree `≤ n`.
    pub fn count(&self, n: usize) -> usize {
        self.counts[n.min(self.max_degree)]
    }

    pub fn term(&self, idx: usize) -> &MultiIndex {
        &self.terms[idx]
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        self.degrees[idx]
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    #[inline]
    pub(crate) fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.mul[i * self.terms.len() + j];
        (k != NONE).then_some(k as usize)
    }

    #[inline]
    pub(crate) fn raised_index(&self, axis: usize, i: usize) -> Option<usize> {
        let k = self.raise[axis][i];
        (k != NONE).then_some(k as usize)
    }
}
