//! Combinatorics of the exterior algebra Lambda^k.
//!
//! Multi-indices are strictly increasing k-tuples over `0..m`, enumerated in
//! lexicographic order. In an orthonormal frame the induced wedge basis
//! `{e_I}` is orthonormal under the determinant inner product
//! `<v1^...^vk, w1^...^wk> = det[g(v_a, w_b)]`; that convention is fixed here
//! once and consumed by every other module, so the curvature operator matrix
//! carries the plain entries `R_ijkl` with no combinatorial factor.

use crate::error::{Error, Result};

/// A strictly increasing k-tuple of indices in `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    indices: Vec<usize>,
    m: usize,
}

impl MultiIndex {
    /// Builds a multi-index, validating strict monotonicity and range.
    pub fn new(indices: Vec<usize>, m: usize) -> Result<Self> {
        for (pos, &i) in indices.iter().enumerate() {
            if i >= m {
                return Err(Error::Domain(format!(
                    "index {i} out of range for ambient dimension {m}"
                )));
            }
            if pos > 0 && indices[pos - 1] >= i {
                return Err(Error::Domain(format!(
                    "indices {:?} not strictly increasing",
                    indices
                )));
            }
        }
        Ok(Self { indices, m })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Degree k.
    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    /// Ambient dimension m.
    pub fn ambient(&self) -> usize {
        self.m
    }
}

/// Binomial coefficient C(n, k) in u64-exact range (n <= 62 here).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All C(m,k) strictly increasing k-subsets of `0..m` in lexicographic order.
pub fn enumerate_basis(m: usize, k: usize) -> Result<Vec<MultiIndex>> {
    if k > m {
        return Err(Error::Domain(format!(
            "degree {k} exceeds ambient dimension {m}"
        )));
    }
    let mut out = Vec::with_capacity(binomial(m, k));
    let mut current = Vec::with_capacity(k);
    fn rec(m: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if current.len() == k {
            out.push(MultiIndex {
                indices: current.clone(),
                m,
            });
            return;
        }
        let remaining = k - current.len();
        for i in start..=(m - remaining) {
            current.push(i);
            rec(m, k, i + 1, current, out);
            current.pop();
        }
    }
    if k == 0 {
        out.push(MultiIndex {
            indices: vec![],
            m,
        });
    } else {
        rec(m, k, 0, &mut current, &mut out);
    }
    Ok(out)
}

/// Position of `idx` in [`enumerate_basis`] order; inverse of indexing into
/// that list.
pub fn wedge_rank(idx: &MultiIndex) -> Result<usize> {
    let m = idx.m;
    let k = idx.degree();
    if k > m {
        return Err(Error::Domain(format!("degree {k} exceeds dimension {m}")));
    }
    // Count tuples lexicographically before idx: for each slot, the choices
    // with a strictly smaller entry at that slot and free tail.
    let mut rank = 0usize;
    let mut prev: isize = -1;
    for (slot, &i) in idx.indices.iter().enumerate() {
        for cand in (prev + 1) as usize..i {
            rank += binomial(m - cand - 1, k - slot - 1);
        }
        prev = i as isize;
    }
    Ok(rank)
}

/// Rank of the pair `(i, j)` with `i < j` in the lexicographic 2-form basis.
pub fn pair_rank(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    // Closed form of wedge_rank for k = 2.
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

/// Replaces the `slot`-th index of `idx` by `j` and re-sorts.
///
/// Returns `(0, None)` when the substitution produces a repeated index;
/// otherwise the permutation sign of the re-sorting and the sorted index.
pub fn interior_substitute(
    idx: &MultiIndex,
    slot: usize,
    j: usize,
) -> Result<(i32, Option<MultiIndex>)> {
    let k = idx.degree();
    let m = idx.m;
    if slot >= k {
        return Err(Error::Domain(format!("slot {slot} out of range for degree {k}")));
    }
    if j >= m {
        return Err(Error::Domain(format!("index {j} out of range for dimension {m}")));
    }
    for (pos, &i) in idx.indices.iter().enumerate() {
        if pos != slot && i == j {
            return Ok((0, None));
        }
    }
    // Move j from `slot` to its sorted position, counting transpositions.
    let mut sign = 1i32;
    let mut indices = idx.indices.clone();
    indices[slot] = j;
    let mut pos = slot;
    while pos > 0 && indices[pos - 1] > indices[pos] {
        indices.swap(pos - 1, pos);
        sign = -sign;
        pos -= 1;
    }
    while pos + 1 < k && indices[pos] > indices[pos + 1] {
        indices.swap(pos, pos + 1);
        sign = -sign;
        pos += 1;
    }
    Ok((sign, Some(MultiIndex { indices, m })))
}
