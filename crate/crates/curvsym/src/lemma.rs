//! Machine verification of the symmetry-class facts: the four-term operator
//! is an exact left inverse of the six-term map on S_n, the six-term map has
//! trivial kernel there, the quintic-form map has trivial kernel there, and
//! the left-inverse coefficients can be re-derived from scratch by an exact
//! linear solve.
//!
//! Everything in this module runs in exact rational arithmetic with zero
//! tolerance; floats are banned here.

use crate::linalg::{self, AffineSolution, AffineSolver, SparseRow};
use crate::perm_op::PermOperator;
use crate::scalar::Rational;
use crate::symclass::SymmetryClassBasis;
use crate::tensor::{DenseTensor, IndexPermutation, MultiIndexIter};
use crate::verdict::{VerdictReport, VerdictStatus, Witness};
use std::collections::{BTreeMap, BTreeSet};

const SLOTS: usize = 5;

/// Direct six-term summation by explicit index loops, independent of the
/// operator machinery. Oracle for the operator path.
fn naive_six_term(s: &DenseTensor<Rational>) -> DenseTensor<Rational> {
    let n = s.dim();
    let mut out = DenseTensor::zeros(n, SLOTS).expect("shape");
    for idx in MultiIndexIter::new(n, SLOTS) {
        let (i, j, k, l, m) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
        let mut v = s.get(&[i, j, k, l, m]).clone();
        v += s.get(&[k, j, m, l, i]);
        v += s.get(&[m, j, i, l, k]);
        v += s.get(&[i, l, k, j, m]);
        v += s.get(&[k, l, m, j, i]);
        v += s.get(&[m, l, i, j, k]);
        out.set(&idx, v);
    }
    out
}

/// Direct four-term summation oracle for the left-inverse operator.
fn naive_left_inverse(t: &DenseTensor<Rational>) -> DenseTensor<Rational> {
    let n = t.dim();
    let sixth = Rational::new(1, 6);
    let twelfth = Rational::new(1, 12);
    let mut out = DenseTensor::zeros(n, SLOTS).expect("shape");
    // out[j,i,m,k,l] = -1/6 T[i,j,l,k,m] - 1/12 T[j,k,i,l,m]
    //                + 1/12 T[j,l,i,m,k] + 1/6 T[i,j,k,m,l]
    for idx in MultiIndexIter::new(n, SLOTS) {
        let (i, j, k, l, m) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
        let mut v = -&(&sixth * t.get(&[i, j, l, k, m]));
        v -= &(&twelfth * t.get(&[j, k, i, l, m]));
        v += &(&twelfth * t.get(&[j, l, i, m, k]));
        v += &(&sixth * t.get(&[i, j, k, m, l]));
        out.set(&[j, i, m, k, l], v);
    }
    out
}

fn first_difference(
    got: &DenseTensor<Rational>,
    expected: &DenseTensor<Rational>,
) -> Option<(Vec<usize>, Rational, Rational)> {
    for (flat, (g, e)) in got.entries().iter().zip(expected.entries()).enumerate() {
        if g != e {
            return Some((got.multi_index(flat), e.clone(), g.clone()));
        }
    }
    None
}

/// Applies `psi ∘ six_term` to every basis vector of S_n and compares with
/// the vector exactly; also cross-checks the operator path against the
/// direct-summation oracle on the first basis vector.
pub fn verify_left_inverse(basis: &SymmetryClassBasis, psi: &PermOperator) -> VerdictReport {
    let n = basis.dim();
    let check = "left-inverse";
    let phi = PermOperator::six_term_map();
    let composed = PermOperator::compose(psi, &phi);

    for (bi, b) in basis.vectors().iter().enumerate() {
        let image = composed.apply(b).expect("rank-5 basis vector");
        if &image != b {
            let (component, expected, got) =
                first_difference(&image, b).expect("tensors differ");
            return VerdictReport::exact_fail(
                check,
                Some(n),
                Witness {
                    basis_index: Some(bi),
                    component: Some(component),
                    expected: expected.to_fraction_string(),
                    got: got.to_fraction_string(),
                    note: Some("psi∘phi applied to a class basis vector".into()),
                },
            );
        }
    }

    // independent oracle: direct summation loops on at least one basis vector
    if let Some(b) = basis.vectors().first() {
        let oracle = naive_left_inverse(&naive_six_term(b));
        let operator_path = psi
            .apply(&phi.apply(b).expect("rank-5"))
            .expect("rank-5");
        if oracle != operator_path {
            let (component, expected, got) =
                first_difference(&operator_path, &oracle).expect("tensors differ");
            return VerdictReport::exact_fail(
                check,
                Some(n),
                Witness {
                    basis_index: Some(0),
                    component: Some(component),
                    expected: expected.to_fraction_string(),
                    got: got.to_fraction_string(),
                    note: Some("operator path disagrees with direct-summation oracle".into()),
                },
            );
        }
    }

    // probe whether the composition is the identity on a generic tensor
    // outside the class (reported, not asserted)
    let generic = {
        let len = n.pow(SLOTS as u32);
        let entries = (0..len)
            .map(|i| Rational::from_int((i as i64 % 7) - 3))
            .collect();
        DenseTensor::new(n, SLOTS, entries).expect("shape")
    };
    let identity_on_generic = composed.apply(&generic).expect("rank-5") == generic;

    VerdictReport::exact_pass(check, Some(n))
        .with_derived("basis_dimension", basis.dimension().to_string())
        .with_derived("composed_term_count", composed.term_count().to_string())
        .with_derived(
            "identity_on_generic_tensor",
            identity_on_generic.to_string(),
        )
}

fn sparse_of_tensor(t: &DenseTensor<Rational>) -> SparseRow {
    t.entries()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (c, v.clone()))
        .collect()
}

/// Exact rank of the six-term map restricted to S_n; the kernel dimension
/// `dim S_n − rank` is expected to be zero.
pub fn phi_kernel_on_class(basis: &SymmetryClassBasis) -> VerdictReport {
    let n = basis.dim();
    let phi = PermOperator::six_term_map();
    let width = n.pow(SLOTS as u32);
    let rows: Vec<SparseRow> = basis
        .vectors()
        .iter()
        .map(|b| sparse_of_tensor(&phi.apply(b).expect("rank-5")))
        .collect();
    let rank = linalg::rank_sparse(&rows, width);
    let d = basis.dimension();
    assert!(rank <= d, "rank bound violated");
    let kernel_dim = d - rank;
    let status = if kernel_dim == 0 {
        VerdictStatus::ExactPass
    } else {
        VerdictStatus::ExactFail
    };
    let mut report = VerdictReport {
        check: "six-term-map-kernel".into(),
        dim: Some(n),
        status,
        witness: None,
        derived: BTreeMap::new(),
        points: Vec::new(),
    };
    if kernel_dim != 0 {
        report.witness = Some(Witness {
            basis_index: None,
            component: None,
            expected: "0".into(),
            got: kernel_dim.to_string(),
            note: Some("kernel dimension of the six-term map on the class".into()),
        });
    }
    report
        .with_derived("rank", rank.to_string())
        .with_derived("kernel_dim", kernel_dim.to_string())
        .with_derived("class_dim", d.to_string())
}

/// Monomial index for the quintic coefficient map: U-exponent multiset of
/// the three odd slots and V-exponent multiset of the two even slots.
type Monomial = ([usize; 3], [usize; 2]);

fn quintic_rows(basis: &SymmetryClassBasis) -> (Vec<SparseRow>, usize) {
    // collect per-basis-vector coefficient functionals S -> c_{alpha,beta}(S)
    let mut monomials: BTreeSet<Monomial> = BTreeSet::new();
    let mut per_vec: Vec<BTreeMap<Monomial, Rational>> = Vec::new();
    for b in basis.vectors() {
        let mut col: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (flat, v) in b.entries().iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let idx = b.multi_index(flat);
            let mut alpha = [idx[0], idx[2], idx[4]];
            alpha.sort_unstable();
            let mut beta = [idx[1], idx[3]];
            beta.sort_unstable();
            let entry = col.entry((alpha, beta)).or_insert_with(Rational::zero);
            *entry += v;
        }
        col.retain(|_, v| !v.is_zero());
        monomials.extend(col.keys().copied());
        per_vec.push(col);
    }
    let index_of: BTreeMap<Monomial, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, &m)| (m, i))
        .collect();
    let rows = per_vec
        .into_iter()
        .map(|col| {
            col.into_iter()
                .map(|(m, v)| (index_of[&m], v))
                .collect::<SparseRow>()
        })
        .collect();
    (rows, index_of.len())
}

/// Exact kernel dimension of the map sending a class tensor S to the
/// polynomial coefficients of `(U, V) ↦ S(U, V, U, V, U)`; expected zero.
///
/// Also checks that the six-term constraint functionals on the class lie in
/// the row space of the quintic coefficient functionals (extracting one
/// monomial coefficient never adds information beyond the quintic itself).
pub fn quintic_kernel(basis: &SymmetryClassBasis) -> VerdictReport {
    let n = basis.dim();
    let d = basis.dimension();
    // quintic functionals expressed over basis coordinates: transpose the
    // per-vector rows
    let (per_vec_rows, monomial_count) = quintic_rows(basis);
    let mut by_monomial: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for (vec_idx, row) in per_vec_rows.iter().enumerate() {
        for (mono, v) in row {
            by_monomial
                .entry(*mono)
                .or_default()
                .push((vec_idx, v.clone()));
        }
    }
    let quintic_functionals: Vec<SparseRow> = by_monomial.into_values().collect();
    let rank = linalg::rank_sparse(&quintic_functionals, d);
    let kernel_dim = d - rank;

    // six-term constraint functionals over the same coordinates
    let phi = PermOperator::six_term_map();
    let mut by_component: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for (vec_idx, b) in basis.vectors().iter().enumerate() {
        let img = phi.apply(b).expect("rank-5");
        for (flat, v) in img.entries().iter().enumerate() {
            if !v.is_zero() {
                by_component
                    .entry(flat)
                    .or_default()
                    .push((vec_idx, v.clone()));
            }
        }
    }
    let six_term_functionals: Vec<SparseRow> = by_component.into_values().collect();
    let six_term_rank = linalg::rank_sparse(&six_term_functionals, d);
    let mut stacked = quintic_functionals;
    stacked.extend(six_term_functionals);
    let stacked_rank = linalg::rank_sparse(&stacked, d);
    let inclusion = stacked_rank == rank;

    let status = if kernel_dim == 0 && inclusion {
        VerdictStatus::ExactPass
    } else {
        VerdictStatus::ExactFail
    };
    let mut report = VerdictReport {
        check: "quintic-form-kernel".into(),
        dim: Some(n),
        status,
        witness: None,
        derived: BTreeMap::new(),
        points: Vec::new(),
    };
    if !report.is_pass() {
        report.witness = Some(Witness {
            basis_index: None,
            component: None,
            expected: "kernel 0, constraint functionals inside the quintic row space".into(),
            got: format!("kernel {kernel_dim}, inclusion {inclusion}"),
            note: None,
        });
    }
    report
        .with_derived("rank", rank.to_string())
        .with_derived("kernel_dim", kernel_dim.to_string())
        .with_derived("class_dim", d.to_string())
        .with_derived("monomial_count", monomial_count.to_string())
        .with_derived("six_term_constraint_kernel", (d - six_term_rank).to_string())
        .with_derived(
            "six_term_rows_in_quintic_rowspace",
            inclusion.to_string(),
        )
}

/// Result of the coefficient re-derivation solve.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Feasible {
        /// Canonical representative: coefficients per support permutation,
        /// free variables set to zero.
        coefficients: Vec<Rational>,
        /// Dimension of the homogeneous solution space.
        kernel_dim: usize,
    },
    Infeasible,
}

/// Finds coefficients `c_σ` on the given support such that
/// `(Σ c_σ σ) ∘ six_term_map = Id` simultaneously on every supplied class
/// basis. Streams the exact linear system row by row, so infeasibility is
/// detected against every equation.
pub fn solve_left_inverse(
    support: &[IndexPermutation],
    bases: &[&SymmetryClassBasis],
) -> SolveOutcome {
    assert!(!support.is_empty(), "empty support");
    let phi = PermOperator::six_term_map();
    let mut solver = AffineSolver::new(support.len());
    for basis in bases {
        for b in basis.vectors() {
            let image = phi.apply(b).expect("rank-5");
            // candidate output components: the union of supports of the
            // permuted images and of b itself
            let mut indices: BTreeSet<usize> = BTreeSet::new();
            let permuted: Vec<DenseTensor<Rational>> = support
                .iter()
                .map(|sigma| image.permute(sigma).expect("rank-5"))
                .collect();
            for p in &permuted {
                for (flat, v) in p.entries().iter().enumerate() {
                    if !v.is_zero() {
                        indices.insert(flat);
                    }
                }
            }
            for (flat, v) in b.entries().iter().enumerate() {
                if !v.is_zero() {
                    indices.insert(flat);
                }
            }
            let mut coeffs = vec![Rational::zero(); support.len()];
            for flat in indices {
                for (ci, p) in permuted.iter().enumerate() {
                    coeffs[ci] = p.entries()[flat].clone();
                }
                solver.push(&coeffs, &b.entries()[flat]);
                if solver.is_inconsistent() {
                    return SolveOutcome::Infeasible;
                }
            }
        }
    }
    match solver.solve() {
        AffineSolution::Infeasible => SolveOutcome::Infeasible,
        AffineSolution::Feasible { particular, kernel } => SolveOutcome::Feasible {
            coefficients: particular,
            kernel_dim: kernel.len(),
        },
    }
}

/// The four support permutations of the left-inverse operator, in the
/// transcription order of [`PermOperator::left_inverse_map`].
pub fn reference_left_inverse_support() -> Vec<IndexPermutation> {
    [
        [1usize, 0, 4, 3, 2],
        [0, 3, 1, 4, 2],
        [0, 4, 1, 2, 3],
        [1, 0, 3, 2, 4],
    ]
    .iter()
    .map(|r| IndexPermutation::from_slot_reads(r).expect("valid reads"))
    .collect()
}

/// The reference coefficients in the same order as
/// [`reference_left_inverse_support`].
pub fn reference_left_inverse_coefficients() -> Vec<Rational> {
    vec![
        Rational::new(-1, 6),
        Rational::new(-1, 12),
        Rational::new(1, 12),
        Rational::new(1, 6),
    ]
}

/// Re-derives the left-inverse coefficients over the four-term support and
/// reports agreement with the reference values baked into the operator
/// table. If the solve disagrees, the recovered coefficients are reported
/// as derived constants instead of silently replacing the table.
pub fn solve_left_inverse_report(bases: &[&SymmetryClassBasis]) -> VerdictReport {
    let check = "left-inverse-rederivation";
    let support = reference_left_inverse_support();
    let expected = reference_left_inverse_coefficients();
    let outcome = solve_left_inverse(&support, bases);
    let dims: Vec<String> = bases.iter().map(|b| b.dim().to_string()).collect();
    match outcome {
        SolveOutcome::Infeasible => VerdictReport::exact_fail(
            check,
            None,
            Witness {
                basis_index: None,
                component: None,
                expected: "a feasible coefficient vector on the four-term support".into(),
                got: "infeasible".into(),
                note: Some(format!("dims {}", dims.join(","))),
            },
        ),
        SolveOutcome::Feasible {
            coefficients,
            kernel_dim,
        } => {
            let mut report = if coefficients == expected {
                VerdictReport::exact_pass(check, None)
            } else {
                VerdictReport::exact_fail(
                    check,
                    None,
                    Witness {
                        basis_index: None,
                        component: None,
                        expected: expected
                            .iter()
                            .map(Rational::to_fraction_string)
                            .collect::<Vec<_>>()
                            .join(","),
                        got: coefficients
                            .iter()
                            .map(Rational::to_fraction_string)
                            .collect::<Vec<_>>()
                            .join(","),
                        note: Some(
                            "reference coefficients disagree with the exact re-derivation; \
                             the recovered vector is reported alongside"
                                .into(),
                        ),
                    },
                )
            };
            for (i, c) in coefficients.iter().enumerate() {
                report = report.with_derived(
                    format!("coefficient_{i}"),
                    c.to_fraction_string(),
                );
            }
            report = report.with_derived("solution_kernel_dim", kernel_dim.to_string());
            report.with_derived("dims", dims.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symclass::symmetry_basis;

    #[test]
    fn left_inverse_holds_exactly_n2_n3() {
        for n in [2usize, 3] {
            let basis = symmetry_basis(n).unwrap();
            let report = verify_left_inverse(&basis, &PermOperator::left_inverse_map());
            assert!(report.is_pass(), "n = {n}: {report:?}");
            assert_eq!(report.derived["composed_term_count"], "24");
            // the composition is NOT the identity away from the class
            assert_eq!(report.derived["identity_on_generic_tensor"], "false");
        }
    }

    #[test]
    fn zero_tensor_roundtrip_is_zero() {
        let z = DenseTensor::<Rational>::zeros(3, 5).unwrap();
        let phi = PermOperator::six_term_map();
        let psi = PermOperator::left_inverse_map();
        assert!(psi.apply(&phi.apply(&z).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn corrupted_inverse_fails_with_witness() {
        let basis = symmetry_basis(2).unwrap();
        let report =
            verify_left_inverse(&basis, &PermOperator::left_inverse_map_corrupted());
        assert_eq!(report.status, VerdictStatus::ExactFail);
        let w = report.witness.expect("witness present");
        assert!(w.component.is_some());
        assert_ne!(w.expected, w.got);
    }

    #[test]
    fn naive_oracles_match_operators_on_generic_input() {
        let t = DenseTensor::new(
            2,
            5,
            (0..32).map(|i| Rational::from_int((i as i64 % 11) - 5)).collect(),
        )
        .unwrap();
        let phi = PermOperator::six_term_map();
        let psi = PermOperator::left_inverse_map();
        assert_eq!(naive_six_term(&t), phi.apply(&t).unwrap());
        assert_eq!(naive_left_inverse(&t), psi.apply(&t).unwrap());
    }

    #[test]
    fn six_term_map_kernel_trivial_n2_n3() {
        for n in [2usize, 3] {
            let basis = symmetry_basis(n).unwrap();
            let report = phi_kernel_on_class(&basis);
            assert!(report.is_pass(), "n = {n}");
            assert_eq!(report.derived["kernel_dim"], "0");
            assert_eq!(
                report.derived["rank"],
                basis.dimension().to_string()
            );
        }
    }

    #[test]
    fn quintic_kernel_trivial_n2_n3() {
        for n in [2usize, 3] {
            let basis = symmetry_basis(n).unwrap();
            let report = quintic_kernel(&basis);
            assert!(report.is_pass(), "n = {n}: {report:?}");
            assert_eq!(report.derived["kernel_dim"], "0");
            assert_eq!(report.derived["six_term_rows_in_quintic_rowspace"], "true");
            assert_eq!(report.derived["six_term_constraint_kernel"], "0");
        }
    }

    #[test]
    fn solve_reproduces_reference_coefficients() {
        let b2 = symmetry_basis(2).unwrap();
        let b3 = symmetry_basis(3).unwrap();
        let outcome = solve_left_inverse(&reference_left_inverse_support(), &[&b2, &b3]);
        match outcome {
            SolveOutcome::Feasible {
                coefficients,
                kernel_dim,
            } => {
                assert_eq!(coefficients, reference_left_inverse_coefficients());
                assert_eq!(kernel_dim, 0);
            }
            SolveOutcome::Infeasible => panic!("expected feasible"),
        }
        let report = solve_left_inverse_report(&[&b2, &b3]);
        assert!(report.is_pass());
    }

    #[test]
    fn identity_only_support_is_infeasible() {
        let b2 = symmetry_basis(2).unwrap();
        // direct oracle first: the six-term image of some basis vector
        // differs from the vector itself
        let phi = PermOperator::six_term_map();
        let differs = b2
            .vectors()
            .iter()
            .any(|b| phi.apply(b).unwrap() != *b);
        assert!(differs);
        let outcome = solve_left_inverse(&[IndexPermutation::identity(5)], &[&b2]);
        assert_eq!(outcome, SolveOutcome::Infeasible);
    }

    #[test]
    fn full_support_solve_is_feasible_and_verifies() {
        let b2 = symmetry_basis(2).unwrap();
        let b3 = symmetry_basis(3).unwrap();
        let support = IndexPermutation::all(5);
        let outcome = solve_left_inverse(&support, &[&b2, &b3]);
        let SolveOutcome::Feasible { coefficients, .. } = outcome else {
            panic!("expected feasible");
        };
        let op = PermOperator::from_terms(
            support.into_iter().zip(coefficients).collect(),
        );
        for basis in [&b2, &b3] {
            let report = verify_left_inverse(basis, &op);
            assert!(report.is_pass());
        }
    }
}
