//! Exact rational linear algebra on flattened tensor spaces: canonical
//! nullspace bases, ranks, and small affine solves.
//!
//! Elimination runs per connected component of the row/column incidence
//! graph. The stacked symmetry-constraint systems split into many small
//! blocks (slot permutations preserve the multiset of index values), which
//! turns otherwise huge eliminations into thousands of tiny ones. The
//! component-wise result equals the global reduced row echelon computation:
//! RREF is unique, and blocks with disjoint column support reduce
//! independently. Output is canonical: each kernel basis vector has leading
//! entry 1, pivot columns are distinct, and vectors are sorted by leading
//! column, so repeated runs are bit-identical.

use crate::scalar::Rational;
use std::collections::BTreeMap;

/// Sparse row: sorted `(column, value)` pairs, values nonzero.
pub type SparseRow = Vec<(usize, Rational)>;

fn normalize_sparse(mut row: SparseRow) -> SparseRow {
    row.retain(|(_, v)| !v.is_zero());
    row.sort_by_key(|&(c, _)| c);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += &v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != c {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Reduced row echelon form of a dense matrix, in place.
/// Returns the pivot column list.
fn rref_dense(rows: &mut Vec<Vec<Rational>>, width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = rows[r][c].recip();
        for x in rows[r][c..].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// One connected block of a sparse system: the global columns it touches and
/// its rows densified over those columns.
struct Component {
    cols: Vec<usize>,
    rows: Vec<Vec<Rational>>,
}

fn split_components(rows: &[SparseRow], width: usize) -> Vec<Component> {
    let mut uf = UnionFind::new(width);
    for row in rows {
        for pair in row.windows(2) {
            uf.union(pair[0].0, pair[1].0);
        }
    }
    let mut cols_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..width {
        cols_of.entry(uf.find(c)).or_default().push(c);
    }
    let mut comp_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut comps: Vec<Component> = Vec::new();
    for (root, cols) in cols_of {
        comp_index.insert(root, comps.len());
        comps.push(Component {
            cols,
            rows: Vec::new(),
        });
    }
    // dedupe identical rows; they are common in stacked constraint systems
    let mut seen: BTreeMap<Vec<(usize, String)>, ()> = BTreeMap::new();
    for row in rows {
        if row.is_empty() {
            continue;
        }
        let key: Vec<(usize, String)> = row
            .iter()
            .map(|(c, v)| (*c, v.to_fraction_string()))
            .collect();
        if seen.insert(key, ()).is_some() {
            continue;
        }
        let ci = comp_index[&uf.find(row[0].0)];
        let comp = &mut comps[ci];
        let local: BTreeMap<usize, usize> = comp
            .cols
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut dense = vec![Rational::zero(); comp.cols.len()];
        for (c, v) in row {
            dense[local[c]] = v.clone();
        }
        comp.rows.push(dense);
    }
    comps
}

/// Canonical kernel basis of the row-stacked system, as sparse vectors.
///
/// Every returned vector satisfies each input row exactly; the set is the
/// unique reduced-echelon basis of the kernel under lexicographic column
/// order (leading entry 1, sorted by leading column).
pub fn nullspace_sparse(rows: &[SparseRow], width: usize) -> Vec<SparseRow> {
    let rows: Vec<SparseRow> = rows.iter().map(|r| normalize_sparse(r.clone())).collect();
    let mut basis: Vec<SparseRow> = Vec::new();
    for comp in split_components(&rows, width) {
        let w = comp.cols.len();
        let mut mat = comp.rows;
        let pivots = rref_dense(&mut mat, w);
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; w];
            for &p in &pivots {
                s[p] = true;
            }
            s
        };
        // parametric kernel vectors, one per free column
        let mut kernel: Vec<Vec<Rational>> = Vec::new();
        for f in 0..w {
            if pivot_set[f] {
                continue;
            }
            let mut v = vec![Rational::zero(); w];
            v[f] = Rational::one();
            for (ri, &p) in pivots.iter().enumerate() {
                v[p] = -&mat[ri][f];
            }
            kernel.push(v);
        }
        // canonicalize the basis of the kernel subspace itself
        rref_dense(&mut kernel, w);
        for v in kernel {
            let sparse: SparseRow = v
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (comp.cols[i], x))
                .collect();
            basis.push(sparse);
        }
    }
    basis.sort_by_key(|v| v.first().map(|&(c, _)| c).unwrap_or(usize::MAX));
    basis
}

/// Exact rank of the row-stacked system.
pub fn rank_sparse(rows: &[SparseRow], width: usize) -> usize {
    let rows: Vec<SparseRow> = rows.iter().map(|r| normalize_sparse(r.clone())).collect();
    split_components(&rows, width)
        .into_iter()
        .map(|comp| {
            let w = comp.cols.len();
            let mut mat = comp.rows;
            rref_dense(&mut mat, w).len()
        })
        .sum()
}

fn to_sparse(row: &[Rational]) -> SparseRow {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (c, v.clone()))
        .collect()
}

pub fn densify(row: &SparseRow, width: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); width];
    for (c, v) in row {
        out[*c] = v.clone();
    }
    out
}

/// Canonical kernel basis for dense input rows (all rows the same length).
pub fn nullspace(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    for r in rows {
        assert_eq!(r.len(), width, "nullspace rows must share a length");
    }
    let sparse: Vec<SparseRow> = rows.iter().map(|r| to_sparse(r)).collect();
    nullspace_sparse(&sparse, width)
        .into_iter()
        .map(|v| densify(&v, width))
        .collect()
}

/// Exact rank for dense input rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    let sparse: Vec<SparseRow> = rows.iter().map(|r| to_sparse(r)).collect();
    rank_sparse(&sparse, width)
}

/// Outcome of an exact affine solve `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum AffineSolution {
    /// The canonical representative (free variables zero) plus a basis of
    /// the homogeneous kernel; the full solution set is the affine span.
    Feasible {
        particular: Vec<Rational>,
        kernel: Vec<Vec<Rational>>,
    },
    Infeasible,
}

/// Incremental exact solver for a streamed system of rows `(a, rhs)`.
#[derive(Debug, Default)]
pub struct AffineSolver {
    width: usize,
    /// RREF rows augmented with rhs in the last slot; pivot columns parallel.
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    inconsistent: bool,
}

impl AffineSolver {
    pub fn new(width: usize) -> Self {
        AffineSolver {
            width,
            ..Default::default()
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    pub fn push(&mut self, coeffs: &[Rational], rhs: &Rational) {
        assert_eq!(coeffs.len(), self.width);
        if self.inconsistent {
            return;
        }
        let mut row: Vec<Rational> = coeffs.to_vec();
        row.push(rhs.clone());
        for (ri, &p) in self.pivots.iter().enumerate() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, e) in row.iter_mut().zip(&self.rows[ri]) {
                if !e.is_zero() {
                    *x -= &(&f * e);
                }
            }
        }
        let Some(lead) = (0..self.width).find(|&c| !row[c].is_zero()) else {
            if !row[self.width].is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = row[lead].recip();
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        // back-eliminate the new pivot from existing rows
        for r in self.rows.iter_mut() {
            if r[lead].is_zero() {
                continue;
            }
            let f = r[lead].clone();
            for (x, e) in r.iter_mut().zip(&row) {
                if !e.is_zero() {
                    *x -= &(&f * e);
                }
            }
        }
        let pos = self.pivots.partition_point(|&p| p < lead);
        self.pivots.insert(pos, lead);
        self.rows.insert(pos, row);
    }

    pub fn solve(&self) -> AffineSolution {
        if self.inconsistent {
            return AffineSolution::Infeasible;
        }
        let mut particular = vec![Rational::zero(); self.width];
        for (ri, &p) in self.pivots.iter().enumerate() {
            particular[p] = self.rows[ri][self.width].clone();
        }
        let coeff_rows: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .map(|r| r[..self.width].to_vec())
            .collect();
        let kernel = nullspace(&coeff_rows);
        let kernel = if coeff_rows.is_empty() {
            // no constraints at all: kernel is the standard basis
            (0..self.width)
                .map(|i| {
                    let mut v = vec![Rational::zero(); self.width];
                    v[i] = Rational::one();
                    v
                })
                .collect()
        } else {
            kernel
        };
        AffineSolution::Feasible { particular, kernel }
    }
}
