//! Formal rational-coefficient sums of slot permutations acting on
//! (0,5)-tensors: the group algebra used to express the six-term map, its
//! left inverse, the symmetry constraints, and their compositions.
//!
//! Operators are kept in canonical form at all times: no zero coefficients,
//! terms ordered lexicographically by permutation image array.

use crate::error::{ParseError, TensorError};
use crate::scalar::{Rational, Scalar};
use crate::tensor::{DenseTensor, IndexPermutation};
use std::collections::BTreeMap;

pub const OPERATOR_SLOTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermOperator {
    terms: BTreeMap<IndexPermutation, Rational>,
}

impl PermOperator {
    pub fn zero() -> Self {
        PermOperator {
            terms: BTreeMap::new(),
        }
    }

    pub fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(IndexPermutation::identity(OPERATOR_SLOTS), Rational::one());
        PermOperator { terms }
    }

    /// Merges duplicate permutations and drops zero coefficients.
    pub fn from_terms(list: Vec<(IndexPermutation, Rational)>) -> Self {
        let mut terms: BTreeMap<IndexPermutation, Rational> = BTreeMap::new();
        for (p, c) in list {
            assert_eq!(p.len(), OPERATOR_SLOTS, "operator permutations act on 5 slots");
            let entry = terms.entry(p).or_insert_with(Rational::zero);
            *entry += &c;
        }
        terms.retain(|_, c| !c.is_zero());
        PermOperator { terms }
    }

    /// Single signed permutation entered by its slot-read pattern; see
    /// [`IndexPermutation::from_slot_reads`].
    fn term_from_reads(reads: [usize; 5], coeff: Rational) -> (IndexPermutation, Rational) {
        (
            IndexPermutation::from_slot_reads(&reads).expect("valid reads pattern"),
            coeff,
        )
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexPermutation, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &IndexPermutation) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sorted coefficient multiset, handy for pinning transcriptions.
    pub fn coefficient_multiset(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.terms.values().cloned().collect();
        v.sort();
        v
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return PermOperator::zero();
        }
        PermOperator {
            terms: self.terms.iter().map(|(p, v)| (p.clone(), c * v)).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (p, c) in &rhs.terms {
            let entry = terms.entry(p.clone()).or_insert_with(Rational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        PermOperator { terms }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&Rational::from_int(-1)))
    }

    /// `sum_σ c_σ · permute(T, σ)`, exact for the rational kind.
    pub fn apply<S: Scalar>(&self, t: &DenseTensor<S>) -> Result<DenseTensor<S>, TensorError> {
        if t.rank() != OPERATOR_SLOTS {
            return Err(TensorError::RankMismatch {
                expected: OPERATOR_SLOTS,
                got: t.rank(),
            });
        }
        let n = t.dim();
        let len = t.entries().len();
        let mut out = vec![S::zero(); len];
        let mut idx = [0usize; OPERATOR_SLOTS];
        for (sigma, coeff) in &self.terms {
            let c = S::from_rational(coeff);
            for (flat, e) in t.entries().iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let mut f = flat;
                for j in (0..OPERATOR_SLOTS).rev() {
                    idx[j] = f % n;
                    f /= n;
                }
                let mut off = 0;
                for j in 0..OPERATOR_SLOTS {
                    off = off * n + idx[sigma.image(j)];
                }
                out[off] = out[off].add_ref(&c.mul_ref(e));
            }
        }
        DenseTensor::new(n, OPERATOR_SLOTS, out)
    }

    /// Group-algebra product consistent with application:
    /// `apply(compose(P, Q), T) = apply(P, apply(Q, T))` for all T.
    ///
    /// Per-term this is forced by the permutation composition law
    /// `permute(permute(T, σ_q), σ_p) = permute(T, σ_q ∘ σ_p)`.
    pub fn compose(p: &Self, q: &Self) -> Self {
        let mut terms: BTreeMap<IndexPermutation, Rational> = BTreeMap::new();
        for (sp, cp) in &p.terms {
            for (sq, cq) in &q.terms {
                let key = sq.compose(sp);
                let entry = terms.entry(key).or_insert_with(Rational::zero);
                *entry += &(cp * cq);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        PermOperator { terms }
    }

    /// True iff both operators act identically on every given tensor.
    pub fn equal_on_basis(
        p: &Self,
        q: &Self,
        basis: &[DenseTensor<Rational>],
    ) -> Result<bool, TensorError> {
        for b in basis {
            if p.apply(b)? != q.apply(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // ---- named operators ----

    /// Antisymmetrizer in slots (1,2): ½(Id − swap(1,2)).
    pub fn antisymmetrizer_12() -> Self {
        let half = Rational::new(1, 2);
        PermOperator::from_terms(vec![
            (IndexPermutation::identity(5), half.clone()),
            (IndexPermutation::swap(5, 0, 1), -half),
        ])
    }

    /// Symmetrizer under exchanging the first and second index pairs:
    /// ½(Id + (13)(24)).
    pub fn pair_swap_symmetrizer() -> Self {
        let half = Rational::new(1, 2);
        PermOperator::from_terms(vec![
            (IndexPermutation::identity(5), half.clone()),
            (Self::pair_swap_perm(), half),
        ])
    }

    fn pair_swap_perm() -> IndexPermutation {
        // slots 1<->3, 2<->4 (1-based)
        IndexPermutation::new(vec![2, 3, 0, 1, 4]).unwrap()
    }

    /// Unnormalized cyclic sum over slots (1,2,3): Id + cycle + cycle².
    /// Its kernel is the first-three-slot Bianchi condition.
    pub fn bianchi_cycle_first() -> Self {
        PermOperator::from_terms(vec![
            (IndexPermutation::identity(5), Rational::one()),
            (IndexPermutation::new(vec![1, 2, 0, 3, 4]).unwrap(), Rational::one()),
            (IndexPermutation::new(vec![2, 0, 1, 3, 4]).unwrap(), Rational::one()),
        ])
    }

    /// Unnormalized cyclic sum over slots (3,4,5); kernel = last-three-slot
    /// Bianchi condition.
    pub fn bianchi_cycle_last() -> Self {
        PermOperator::from_terms(vec![
            (IndexPermutation::identity(5), Rational::one()),
            (IndexPermutation::new(vec![0, 1, 3, 4, 2]).unwrap(), Rational::one()),
            (IndexPermutation::new(vec![0, 1, 4, 2, 3]).unwrap(), Rational::one()),
        ])
    }

    /// The six-term map sending a symmetry-class tensor S to
    ///
    /// ```text
    /// T_{ijklm} = S_{ijkl,m} + S_{kjml,i} + S_{mjil,k}
    ///           + S_{ilkj,m} + S_{klmj,i} + S_{mlij,k}
    /// ```
    ///
    /// Each term is entered by its slot-read pattern (which output letter
    /// each input slot carries, letters i,j,k,l,m = slots 1..5) and pinned
    /// by a component-mapping unit test.
    pub fn six_term_map() -> Self {
        let one = Rational::one;
        PermOperator::from_terms(vec![
            // S_{ijkl,m}: reads (i,j,k,l,m)
            Self::term_from_reads([0, 1, 2, 3, 4], one()),
            // S_{kjml,i}: reads (k,j,m,l,i)
            Self::term_from_reads([2, 1, 4, 3, 0], one()),
            // S_{mjil,k}: reads (m,j,i,l,k)
            Self::term_from_reads([4, 1, 0, 3, 2], one()),
            // S_{ilkj,m}: reads (i,l,k,j,m)
            Self::term_from_reads([0, 3, 2, 1, 4], one()),
            // S_{klmj,i}: reads (k,l,m,j,i)
            Self::term_from_reads([2, 3, 4, 1, 0], one()),
            // S_{mlij,k}: reads (m,l,i,j,k)
            Self::term_from_reads([4, 3, 0, 1, 2], one()),
        ])
    }

    /// The four-term left inverse of [`PermOperator::six_term_map`] on the
    /// symmetry class:
    ///
    /// ```text
    /// out_{jimk,l} = -1/6 T_{ijlkm} - 1/12 T_{jkilm}
    ///              + 1/12 T_{jlimk} + 1/6 T_{ijkml}
    /// ```
    ///
    /// Relabelling output slots 1..5 as the letters (j,i,m,k,l), the read
    /// patterns below express each right-hand term against output slots.
    pub fn left_inverse_map() -> Self {
        PermOperator::from_terms(vec![
            // T_{ijlkm}: letters (i,j,l,k,m) at output slots (2,1,5,4,3)
            Self::term_from_reads([1, 0, 4, 3, 2], Rational::new(-1, 6)),
            // T_{jkilm}: letters (j,k,i,l,m) at output slots (1,4,2,5,3)
            Self::term_from_reads([0, 3, 1, 4, 2], Rational::new(-1, 12)),
            // T_{jlimk}: letters (j,l,i,m,k) at output slots (1,5,2,3,4)
            Self::term_from_reads([0, 4, 1, 2, 3], Rational::new(1, 12)),
            // T_{ijkml}: letters (i,j,k,m,l) at output slots (2,1,4,3,5)
            Self::term_from_reads([1, 0, 3, 2, 4], Rational::new(1, 6)),
        ])
    }

    /// Deliberately corrupted variant of [`PermOperator::left_inverse_map`]
    /// (one coefficient sign flipped). Test hook for the fault-injection
    /// path: verification against it must fail with a concrete witness.
    pub fn left_inverse_map_corrupted() -> Self {
        let psi = Self::left_inverse_map();
        let bad_term = IndexPermutation::from_slot_reads(&[0, 4, 1, 2, 3]).unwrap();
        let mut terms = psi.terms;
        terms.insert(bad_term, Rational::new(-1, 12));
        PermOperator { terms }
    }

    /// The named operator set exposed through reports and serialization.
    pub fn builtin_operators() -> BTreeMap<&'static str, PermOperator> {
        let mut m = BTreeMap::new();
        m.insert("Id", PermOperator::identity());
        m.insert("A12", PermOperator::antisymmetrizer_12());
        m.insert("Pswap", PermOperator::pair_swap_symmetrizer());
        m.insert("B123", PermOperator::bianchi_cycle_first());
        m.insert("B345", PermOperator::bianchi_cycle_last());
        m.insert("Phi", PermOperator::six_term_map());
        m.insert("Psi", PermOperator::left_inverse_map());
        m
    }

    // ---- serialization: JSON list of {image: [5 ints, 1-based], coeff: "p/q"} ----

    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(p, c)| {
                serde_json::json!({
                    "image": p.images().iter().map(|&i| i + 1).collect::<Vec<usize>>(),
                    "coeff": c.to_fraction_string(),
                })
            })
            .collect();
        serde_json::Value::Array(list)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ParseError> {
        let arr = v
            .as_array()
            .ok_or_else(|| ParseError::BadOperatorRecord("expected a JSON array".into()))?;
        let mut terms = Vec::with_capacity(arr.len());
        for item in arr {
            let image = item
                .get("image")
                .and_then(|x| x.as_array())
                .ok_or_else(|| ParseError::BadOperatorRecord("term missing 'image'".into()))?;
            if image.len() != OPERATOR_SLOTS {
                return Err(ParseError::BadOperatorRecord(format!(
                    "image length {} != 5",
                    image.len()
                )));
            }
            let mut imgs = Vec::with_capacity(OPERATOR_SLOTS);
            for x in image {
                let v = x
                    .as_u64()
                    .filter(|&v| (1..=OPERATOR_SLOTS as u64).contains(&v))
                    .ok_or_else(|| {
                        ParseError::BadOperatorRecord("image entries must be 1..=5".into())
                    })?;
                imgs.push(v as usize - 1);
            }
            let perm = IndexPermutation::new(imgs).map_err(|e| {
                ParseError::BadOperatorRecord(format!("bad image array: {e}"))
            })?;
            let coeff = item
                .get("coeff")
                .and_then(|x| x.as_str())
                .ok_or_else(|| ParseError::BadOperatorRecord("term missing 'coeff'".into()))?;
            terms.push((perm, Rational::parse(coeff)?));
        }
        Ok(PermOperator::from_terms(terms))
    }
}
