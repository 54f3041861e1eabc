//! Dense multi-index tensors and slot permutations.
//!
//! Components are stored flat in row-major (lexicographic multi-index) order:
//! `T[i1,..,ik]` lives at offset `sum_j i_j * n^(k-j)` with 0-based indices.
//!
//! # Permutation convention
//!
//! For a slot bijection `σ` the permuted tensor is defined by
//!
//! ```text
//! permute(T, σ)[i_σ(1), ..., i_σ(k)] = T[i_1, ..., i_k]
//! ```
//!
//! equivalently: slot `j` of the output reads its index from slot `σ(j)` of
//! the input, i.e. `permute(T, σ)[J] = T[J ∘ σ^{-1}]`. Under this convention
//! `permute(permute(T, σ), τ) = permute(T, σ∘τ)` where `(σ∘τ)(x) = σ(τ(x))`.
//! Every index-pattern transcription in this crate is written against this
//! one convention.

use crate::error::TensorError;
use crate::scalar::{Rational, Scalar, ScalarKind};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;
pub const MAX_RANK: usize = 5;

/// A bijection of tensor slots `{1..k}`, stored as the image array of `σ`
/// (0-based internally: `imgs[j] = σ(j)`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPermutation {
    imgs: Vec<usize>,
}

impl IndexPermutation {
    /// Builds `σ` from its 0-based image array.
    pub fn new(imgs: Vec<usize>) -> Result<Self, TensorError> {
        let k = imgs.len();
        let mut seen = vec![false; k];
        for &v in &imgs {
            if v >= k || seen[v] {
                return Err(TensorError::NotAPermutation(imgs.clone()));
            }
            seen[v] = true;
        }
        Ok(IndexPermutation { imgs })
    }

    pub fn identity(k: usize) -> Self {
        IndexPermutation {
            imgs: (0..k).collect(),
        }
    }

    /// Transposition of slots `a` and `b` (0-based).
    pub fn swap(k: usize, a: usize, b: usize) -> Self {
        let mut imgs: Vec<usize> = (0..k).collect();
        imgs.swap(a, b);
        IndexPermutation { imgs }
    }

    /// Builds the permutation whose action is
    /// `out[j_1,..,j_k] = T[j_reads[0], ..., j_reads[k-1]]`,
    /// i.e. input slot `m` reads the output index at position `reads[m]`.
    /// This is how index patterns such as `T_{kjml,i}` are transcribed: the
    /// reads array lists, for each input slot, which output slot's letter it
    /// carries. In terms of the stored convention, `reads = σ^{-1}`.
    pub fn from_slot_reads(reads: &[usize]) -> Result<Self, TensorError> {
        let p = IndexPermutation::new(reads.to_vec())?;
        Ok(p.inverse())
    }

    pub fn len(&self) -> usize {
        self.imgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.imgs.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.imgs.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `σ(j)`, 0-based.
    pub fn image(&self, j: usize) -> usize {
        self.imgs[j]
    }

    pub fn images(&self) -> &[usize] {
        &self.imgs
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.imgs.len()];
        for (j, &v) in self.imgs.iter().enumerate() {
            inv[v] = j;
        }
        IndexPermutation { imgs: inv }
    }

    /// Function composition `self ∘ rhs`: `x ↦ self(rhs(x))`.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.len(), rhs.len(), "composing permutations of different size");
        IndexPermutation {
            imgs: (0..self.imgs.len()).map(|x| self.imgs[rhs.imgs[x]]).collect(),
        }
    }

    /// The slot-read pattern of this permutation (`σ^{-1}` as an array); see
    /// [`IndexPermutation::from_slot_reads`].
    pub fn slot_reads(&self) -> Vec<usize> {
        self.inverse().imgs
    }

    /// All k! permutations on `k` slots in lexicographic image-array order.
    pub fn all(k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut imgs: Vec<usize> = (0..k).collect();
        loop {
            out.push(IndexPermutation { imgs: imgs.clone() });
            // next lexicographic permutation
            let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| imgs[i] < imgs[i + 1]) else {
                break;
            };
            let j = (i + 1..k).rev().find(|&j| imgs[j] > imgs[i]).unwrap();
            imgs.swap(i, j);
            imgs[i + 1..].reverse();
        }
        out
    }
}

/// Dense rank-`k` tensor over `n`-dimensional index space, homogeneous in
/// scalar kind.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor<S: Scalar> {
    dim: usize,
    rank: usize,
    entries: Vec<S>,
}

impl<S: Scalar> DenseTensor<S> {
    /// Builds a tensor from its flat row-major component list. The entries
    /// are moved in; the tensor never aliases caller-held storage.
    pub fn new(dim: usize, rank: usize, entries: Vec<S>) -> Result<Self, TensorError> {
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(TensorError::DimOutOfRange(dim));
        }
        if !(1..=MAX_RANK).contains(&rank) {
            return Err(TensorError::RankOutOfRange(rank));
        }
        let expected = dim.pow(rank as u32);
        if entries.len() != expected {
            return Err(TensorError::EntryCount {
                dim,
                rank,
                expected,
                got: entries.len(),
            });
        }
        Ok(DenseTensor { dim, rank, entries })
    }

    pub fn zeros(dim: usize, rank: usize) -> Result<Self, TensorError> {
        let len = dim
            .checked_pow(rank as u32)
            .ok_or(TensorError::RankOutOfRange(rank))?;
        DenseTensor::new(dim, rank, vec![S::zero(); len])
    }

    pub fn kind(&self) -> ScalarKind {
        S::KIND
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    pub fn flat_offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        let mut off = 0;
        for &i in idx {
            debug_assert!(i < self.dim);
            off = off * self.dim + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.entries[self.flat_offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: S) {
        let off = self.flat_offset(idx);
        self.entries[off] = v;
    }

    /// Decodes a flat offset back into its multi-index.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.rank];
        for j in (0..self.rank).rev() {
            idx[j] = flat % self.dim;
            flat /= self.dim;
        }
        idx
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Iterates all multi-indices in row-major order.
    pub fn indices(&self) -> MultiIndexIter {
        MultiIndexIter::new(self.dim, self.rank)
    }

    /// Applies the slot permutation; see the module docs for the convention.
    pub fn permute(&self, sigma: &IndexPermutation) -> Result<Self, TensorError> {
        if sigma.len() != self.rank {
            return Err(TensorError::PermutationRankMismatch {
                perm: sigma.len(),
                rank: self.rank,
            });
        }
        let mut out = vec![S::zero(); self.entries.len()];
        let mut idx = vec![0usize; self.rank];
        let mut permuted = vec![0usize; self.rank];
        for (flat, entry) in self.entries.iter().enumerate() {
            let mut f = flat;
            for j in (0..self.rank).rev() {
                idx[j] = f % self.dim;
                f /= self.dim;
            }
            // out[i_σ(1),..,i_σ(k)] = T[i_1,..,i_k]
            for j in 0..self.rank {
                permuted[j] = idx[sigma.image(j)];
            }
            let mut off = 0;
            for &i in &permuted {
                off = off * self.dim + i;
            }
            out[off] = entry.clone();
        }
        Ok(DenseTensor {
            dim: self.dim,
            rank: self.rank,
            entries: out,
        })
    }

    /// Componentwise `sum_i coeffs[i] * tensors[i]`, exact for the rational kind.
    pub fn linear_combine(coeffs: &[S], tensors: &[&DenseTensor<S>]) -> Result<Self, TensorError> {
        if tensors.is_empty() {
            return Err(TensorError::EmptyCombination);
        }
        if coeffs.len() != tensors.len() {
            return Err(TensorError::CombinationLength {
                coeffs: coeffs.len(),
                tensors: tensors.len(),
            });
        }
        let (dim, rank) = (tensors[0].dim, tensors[0].rank);
        for t in tensors {
            if t.dim != dim || t.rank != rank {
                return Err(TensorError::ShapeMismatch {
                    dim_a: dim,
                    rank_a: rank,
                    dim_b: t.dim,
                    rank_b: t.rank,
                });
            }
        }
        let mut out = vec![S::zero(); tensors[0].entries.len()];
        for (c, t) in coeffs.iter().zip(tensors) {
            if c.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(&t.entries) {
                if !e.is_zero() {
                    *o = o.add_ref(&c.mul_ref(e));
                }
            }
        }
        Ok(DenseTensor {
            dim,
            rank,
            entries: out,
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, TensorError> {
        Self::linear_combine(
            &[S::from_rational(&Rational::one()), S::from_rational(&Rational::one())],
            &[self, rhs],
        )
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, TensorError> {
        Self::linear_combine(
            &[
                S::from_rational(&Rational::one()),
                S::from_rational(&Rational::from_int(-1)),
            ],
            &[self, rhs],
        )
    }

    pub fn scale(&self, c: &S) -> Self {
        let entries = self.entries.iter().map(|e| c.mul_ref(e)).collect();
        DenseTensor {
            dim: self.dim,
            rank: self.rank,
            entries,
        }
    }

    /// Max absolute component value; exact comparison for rationals.
    pub fn inf_norm(&self) -> S {
        let mut best = S::zero();
        for e in &self.entries {
            let a = e.abs_val();
            if a.abs_gt(&best) {
                best = a;
            }
        }
        best
    }
}

impl DenseTensor<Rational> {
    pub fn to_f64_tensor(&self) -> DenseTensor<f64> {
        DenseTensor {
            dim: self.dim,
            rank: self.rank,
            entries: self.entries.iter().map(|e| e.to_f64()).collect(),
        }
    }

    /// Componentwise dot product, the inner product used for projections.
    pub fn dot(&self, rhs: &Self) -> Rational {
        debug_assert_eq!(self.dim, rhs.dim);
        debug_assert_eq!(self.rank, rhs.rank);
        let mut acc = Rational::zero();
        for (a, b) in self.entries.iter().zip(&rhs.entries) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }
}

impl DenseTensor<f64> {
    pub fn dot_f64(&self, rhs: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// Row-major iterator over all multi-indices of a `(dim, rank)` index space.
pub struct MultiIndexIter {
    dim: usize,
    idx: Vec<usize>,
    done: bool,
}

impl MultiIndexIter {
    pub fn new(dim: usize, rank: usize) -> Self {
        MultiIndexIter {
            dim,
            idx: vec![0; rank],
            done: false,
        }
    }
}

impl Iterator for MultiIndexIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        for j in (0..self.idx.len()).rev() {
            self.idx[j] += 1;
            if self.idx[j] < self.dim {
                return Some(out);
            }
            self.idx[j] = 0;
        }
        self.done = true;
        Some(out)
    }
}
