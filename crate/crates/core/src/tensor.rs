//! Dense polynomial tensors with antisymmetric index groups.
//!
//! Every index of a [`PolyTensor`] belongs to a [`Group`]. Inside an
//! antisymmetric group all permutations of a stored tuple are written with
//! their sign, so reads are plain lookups; serialization emits only the
//! strictly ordered tuples.

use crate::error::{Error, Result};
use crate::exactpoly::{Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Group {
    pub dim: usize,
    pub arity: usize,
    pub antisym: bool,
}

impl Group {
    pub fn plain(dim: usize) -> Self {
        Group { dim, arity: 1, antisym: false }
    }
    pub fn skew(dim: usize, arity: usize) -> Self {
        Group { dim, arity, antisym: true }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PolyTensor {
    nvars: usize,
    groups: Vec<Group>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<Poly>,
}

impl std::fmt::Debug for PolyTensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PolyTensor")
            .field("groups", &self.groups)
            .field("entries", &self.entries().map(|(i, p)| (i, p.to_string())).collect::<Vec<_>>())
            .finish()
    }
}

/// Signed permutations of `0..n` (n ≤ 4 in practice).
fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        // insert n-1 at position k; it passes over n-1-k elements
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            let sign = if (p.len() - k) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

impl PolyTensor {
    pub fn zeros(nvars: usize, groups: Vec<Group>) -> Self {
        let dims: Vec<usize> = groups.iter().flat_map(|g| std::iter::repeat_n(g.dim, g.arity)).collect();
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let size = dims.iter().product::<usize>();
        PolyTensor { nvars, groups, dims, strides, data: vec![Poly::zero(nvars); size] }
    }

    /// Plain matrix with `rows × cols` entries.
    pub fn matrix(nvars: usize, rows: usize, cols: usize) -> Self {
        Self::zeros(nvars, vec![Group::plain(rows), Group::plain(cols)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn groups(&self) -> &[Group] {
        &self.groups
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.dims.len(), "tensor index of wrong length");
        idx.iter()
            .zip(&self.dims)
            .zip(&self.strides)
            .map(|((&i, &d), &s)| {
                assert!(i < d, "tensor index {i} out of range {d}");
                i * s
            })
            .sum()
    }

    pub fn get(&self, idx: &[usize]) -> &Poly {
        &self.data[self.offset(idx)]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.dims.len() {
            return Err(Error::Dimension(format!("index {idx:?} has length {}, expected {}", idx.len(), self.dims.len())));
        }
        for (i, (&k, &d)) in idx.iter().zip(&self.dims).enumerate() {
            if k >= d {
                return Err(Error::Dimension(format!("index {idx:?} slot {i} out of range {d}")));
            }
        }
        Ok(())
    }

    /// Sets an entry and, inside antisymmetric groups, all its signed permutations.
    pub fn set(&mut self, idx: &[usize], value: Poly) -> Result<()> {
        self.check_index(idx)?;
        if value.nvars() != self.nvars {
            return Err(Error::Dimension("tensor entry over a different base".into()));
        }
        // split into groups
        let mut pos = 0;
        let mut spans = Vec::new();
        for g in &self.groups {
            spans.push((pos, g.arity, g.antisym));
            pos += g.arity;
        }
        for &(start, n, anti) in &spans {
            if anti {
                let s = &idx[start..start + n];
                for a in 0..n {
                    for b in a + 1..n {
                        if s[a] == s[b] {
                            if value.is_zero() {
                                return Ok(());
                            }
                            return Err(Error::Symmetry(format!("repeated index in antisymmetric slot group at {idx:?}")));
                        }
                    }
                }
            }
        }
        // cartesian product of per-group permutations
        let mut variants: Vec<(Vec<usize>, i64)> = vec![(idx.to_vec(), 1)];
        for &(start, n, anti) in &spans {
            if !anti || n < 2 {
                continue;
            }
            let perms = permutations(n);
            let mut next = Vec::new();
            for (v, s) in &variants {
                for (p, ps) in &perms {
                    let mut w = v.clone();
                    for k in 0..n {
                        w[start + k] = v[start + p[k]];
                    }
                    next.push((w, s * ps));
                }
            }
            variants = next;
        }
        for (v, s) in variants {
            let off = self.offset(&v);
            self.data[off] = if s == 1 { value.clone() } else { -&value };
        }
        Ok(())
    }

    /// Adds to an entry (and its permutations).
    pub fn add_to(&mut self, idx: &[usize], value: &Poly) -> Result<()> {
        let cur = self.get(idx).clone();
        self.set(idx, &cur + value)
    }

    /// All index tuples, ordered lexicographically.
    pub fn all_indices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &d in &self.dims {
            let mut next = Vec::with_capacity(out.len() * d);
            for v in &out {
                for k in 0..d {
                    let mut w = v.clone();
                    w.push(k);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    /// Whether `idx` is strictly increasing inside every antisymmetric group.
    pub fn is_canonical(&self, idx: &[usize]) -> bool {
        let mut pos = 0;
        for g in &self.groups {
            if g.antisym {
                for k in 1..g.arity {
                    if idx[pos + k - 1] >= idx[pos + k] {
                        return false;
                    }
                }
            }
            pos += g.arity;
        }
        true
    }

    /// Nonzero entries on canonical tuples.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &Poly)> + '_ {
        self.all_indices().into_iter().filter_map(move |i| {
            let p = self.get(&i);
            (self.is_canonical(&i) && !p.is_zero()).then_some((i, p))
        })
    }

    pub fn scale(&self, r: &Rational) -> PolyTensor {
        let mut out = self.clone();
        for p in out.data.iter_mut() {
            *p = p.scale(r);
        }
        out
    }

    pub fn same_shape(&self, other: &PolyTensor) -> bool {
        self.groups == other.groups && self.nvars == other.nvars
    }

    pub fn add(&self, other: &PolyTensor) -> Result<PolyTensor> {
        if !self.same_shape(other) {
            return Err(Error::Dimension("adding tensors of different shapes".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    /// Contracts the leading slots with the given coefficient vectors and
    /// returns the vector over the single remaining slot. When every slot is
    /// contracted the result has length 1.
    pub fn contract(&self, args: &[&[Poly]]) -> Vec<Poly> {
        let n = self.dims.len();
        assert!(args.len() == n || args.len() + 1 == n, "contraction must leave at most one slot");
        for (a, &d) in args.iter().zip(&self.dims) {
            assert_eq!(a.len(), d, "contraction argument of wrong length");
        }
        let out_len = if args.len() == n { 1 } else { self.dims[n - 1] };
        let mut out = vec![Poly::zero(self.nvars); out_len];
        if self.data.is_empty() {
            return out;
        }
        let mut idx = vec![0usize; n];
        for entry in &self.data {
            if !entry.is_zero() && args.iter().zip(&idx).all(|(a, &i)| !a[i].is_zero()) {
                let mut t = entry.clone();
                for (a, &i) in args.iter().zip(&idx) {
                    t = &t * &a[i];
                }
                let o = if args.len() == n { 0 } else { idx[n - 1] };
                out[o] += &t;
            }
            for k in (0..n).rev() {
                idx[k] += 1;
                if idx[k] < self.dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        out
    }

    /// Builds a tensor of the given shape from a function of the full index.
    /// The function must respect the antisymmetry of the shape; this is
    /// verified and reported as a symmetry error otherwise.
    pub fn from_fn(nvars: usize, groups: Vec<Group>, mut f: impl FnMut(&[usize]) -> Poly) -> Result<PolyTensor> {
        let mut t = PolyTensor::zeros(nvars, groups);
        let all = t.all_indices();
        let mut vals = Vec::with_capacity(all.len());
        for i in &all {
            vals.push(f(i));
        }
        for (i, v) in all.iter().zip(&vals) {
            if t.is_canonical(i) {
                t.set(i, v.clone())?;
            }
        }
        for (i, v) in all.iter().zip(vals) {
            if t.get(i) != &v {
                return Err(Error::Symmetry(format!("values are not antisymmetric at index {i:?}")));
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetric_reads() {
        let mut t = PolyTensor::zeros(0, vec![Group::skew(3, 3), Group::plain(2)]);
        t.set(&[0, 1, 2, 1], Poly::int(0, 5)).unwrap();
        assert_eq!(t.get(&[2, 1, 0, 1]), &Poly::int(0, -5));
        assert_eq!(t.get(&[1, 2, 0, 1]), &Poly::int(0, 5));
        assert!(t.get(&[1, 1, 0, 1]).is_zero());
        assert!(t.set(&[1, 1, 0, 0], Poly::int(0, 1)).is_err());
        assert_eq!(t.entries().count(), 1);
    }

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().map(|x| x.1).sum::<i64>(), 0);
    }

    #[test]
    fn from_fn_detects_asymmetry() {
        let r = PolyTensor::from_fn(0, vec![Group::skew(2, 2)], |i| Poly::int(0, i[0] as i64));
        assert!(r.is_err());
    }
}
