//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line. Exact checks use zero tolerance in rational
//! arithmetic; numerical checks pin their thresholds here, from the golden
//! files generated by the oracle scripts under `scripts/`.

use curvsym::curvature::{self, MetricChart};
use curvsym::goldens;
use curvsym::lemma;
use curvsym::perm_op::PermOperator;
use curvsym::polarization;
use curvsym::scalar::Rational;
use curvsym::symclass::{self, SymmetryClassBasis};
use curvsym::tensor::IndexPermutation;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;

fn goldens_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../goldens")
}

fn bases() -> &'static BTreeMap<usize, SymmetryClassBasis> {
    static BASES: OnceLock<BTreeMap<usize, SymmetryClassBasis>> = OnceLock::new();
    BASES.get_or_init(|| {
        (2..=5)
            .map(|n| (n, symclass::symmetry_basis(n).expect("basis")))
            .collect()
    })
}

struct Criterion {
    id: &'static str,
    description: &'static str,
}

impl Criterion {
    fn check(&self, pass: bool, detail: String) {
        let status = if pass { "PASS" } else { "FAIL" };
        println!("acceptance {}: {status} - {} ({detail})", self.id, self.description);
        assert!(pass, "acceptance {} failed: {detail}", self.id);
    }
}

#[test]
fn criterion_1_left_inverse_identity() {
    let c = Criterion {
        id: "1",
        description: "left inverse of the six-term map is exact on every class basis vector, n=2..5",
    };
    let psi = PermOperator::left_inverse_map();
    let mut detail = Vec::new();
    let mut pass = true;
    for (n, basis) in bases() {
        let report = lemma::verify_left_inverse(basis, &psi);
        pass &= report.is_pass();
        detail.push(format!("n={n} dim={} {}", basis.dimension(), if report.is_pass() { "ok" } else { "FAILED" }));
    }
    c.check(pass, detail.join(", "));
}

/// The flagged slow dimension; run with `cargo test -- --ignored`.
#[test]
#[ignore = "dimension 6 is behind a flag; enable with --ignored"]
fn criterion_1_extra_dimension_6() {
    let c = Criterion {
        id: "1 (n=6)",
        description: "left inverse exact on the n=6 class basis",
    };
    let basis = symclass::symmetry_basis(6).expect("basis");
    let report = lemma::verify_left_inverse(&basis, &PermOperator::left_inverse_map());
    c.check(report.is_pass(), format!("dim={}", basis.dimension()));
}

#[test]
fn criterion_2_trivial_kernel() {
    let c = Criterion {
        id: "2",
        description: "six-term map has trivial kernel on the class, n=2..5",
    };
    let mut pass = true;
    let mut detail = Vec::new();
    for (n, basis) in bases() {
        let report = lemma::phi_kernel_on_class(basis);
        pass &= report.is_pass() && report.derived["kernel_dim"] == "0";
        detail.push(format!("n={n} rank={}", report.derived["rank"]));
    }
    c.check(pass, detail.join(", "));
}

#[test]
fn criterion_3_quintic_kernel_chain() {
    let c = Criterion {
        id: "3",
        description: "quintic-form map and six-term constraint set have trivial kernels on the class, n=2..5",
    };
    let mut pass = true;
    let mut detail = Vec::new();
    for (n, basis) in bases() {
        let report = lemma::quintic_kernel(basis);
        let ok = report.is_pass()
            && report.derived["kernel_dim"] == "0"
            && report.derived["six_term_constraint_kernel"] == "0"
            && report.derived["six_term_rows_in_quintic_rowspace"] == "true";
        pass &= ok;
        detail.push(format!("n={n} {}", if ok { "ok" } else { "FAILED" }));
    }
    c.check(pass, detail.join(", "));
}

#[test]
fn criterion_4_coefficient_rederivation() {
    let c = Criterion {
        id: "4",
        description: "exact solve over the four-permutation support reproduces (-1/6, -1/12, 1/12, 1/6)",
    };
    let all = bases();
    let outcome = lemma::solve_left_inverse(
        &lemma::reference_left_inverse_support(),
        &[&all[&2], &all[&3]],
    );
    match outcome {
        lemma::SolveOutcome::Feasible {
            coefficients,
            kernel_dim,
        } => {
            let expected = lemma::reference_left_inverse_coefficients();
            let agree = coefficients == expected && kernel_dim == 0;
            let got: Vec<String> = coefficients.iter().map(Rational::to_fraction_string).collect();
            c.check(agree, format!("coefficients {}, kernel {kernel_dim}", got.join(",")));
        }
        lemma::SolveOutcome::Infeasible => c.check(false, "solve infeasible".into()),
    }
}

#[test]
fn criterion_5_polarization_constant() {
    let c = Criterion {
        id: "5",
        description: "trilinear coefficient equals c times the six-term sum, one exact c over >=50 samples per n in {2,3,4}",
    };
    let golden = goldens::load_polarization_constant(&goldens_dir()).expect("golden");
    let mut constants = Vec::new();
    let mut pass = true;
    for n in [2usize, 3, 4] {
        let report = polarization::proportionality_check(&bases()[&n], 50, curvsym::defaults::SEED);
        pass &= report.is_pass();
        let constant = report.derived.get("constant").cloned().unwrap_or_default();
        if let Some(pinned) = golden.get(&n) {
            pass &= pinned.to_fraction_string() == constant;
        }
        constants.push(constant);
    }
    pass &= constants.windows(2).all(|w| w[0] == w[1]);
    c.check(pass, format!("c = {}", constants.first().cloned().unwrap_or_default()));
}

#[test]
fn criterion_6_dual_oracle_dimensions() {
    let c = Criterion {
        id: "6",
        description: "constraint-nullspace and projector-image dimensions agree and match goldens, n=2..6",
    };
    let golden = goldens::load_symclass_dims(&goldens_dir()).expect("golden");
    let mut pass = true;
    let mut detail = Vec::new();
    for n in 2..=6 {
        let a = match bases().get(&n) {
            Some(b) => b.dimension(),
            None => symclass::symmetry_basis(n).expect("basis").dimension(),
        };
        let b = symclass::projector_image_dimension(n).expect("oracle");
        let pinned = golden.agreed_dim(n);
        let ok = a == b && pinned == Some(a);
        pass &= ok;
        detail.push(format!("n={n}:{a}"));
    }
    c.check(pass, detail.join(" "));
}

fn symmetric_charts() -> Vec<MetricChart> {
    let no_params = BTreeMap::new();
    ["sphere", "hyperbolic", "product-sphere-line", "flat-euclidean", "flat-minkowski"]
        .iter()
        .map(|name| MetricChart::builtin(name, &no_params).expect("builtin"))
        .collect()
}

#[test]
fn criterion_7_geometric_linkage() {
    let c = Criterion {
        id: "7",
        description: "nabla R vanishes numerically on symmetric spaces, exceeds the oracle thresholds on the perturbed metric, and converges at second order",
    };
    let h = curvsym::defaults::STEP;
    let tol = curvsym::defaults::TOL;
    let mut pass = true;
    let mut detail = Vec::new();

    for chart in symmetric_charts() {
        let points = curvature::default_points(&chart, 5, curvsym::defaults::SEED, h);
        let mut worst: f64 = 0.0;
        for x in &points {
            let bundle = curvature::nabla_r(&chart, x, h).expect("interior point");
            worst = worst.max(bundle.nabla_r.inf_norm());
        }
        pass &= worst <= tol;
        detail.push(format!("{}:{worst:.2e}", chart.name()));
    }

    let golden = goldens::load_perturbed_flat(&goldens_dir()).expect("golden");
    let chart = MetricChart::builtin("perturbed-flat", &BTreeMap::new()).expect("builtin");
    let bundle = curvature::nabla_r(&chart, &golden.point, h).expect("interior point");
    let norm = bundle.nabla_r.inf_norm();
    let tau = golden.tau();
    pass &= norm >= tau;
    let phi_norm = PermOperator::six_term_map()
        .apply(&bundle.nabla_r)
        .expect("rank-5")
        .inf_norm();
    let tau_prime = golden.tau_prime();
    pass &= phi_norm >= tau_prime;
    detail.push(format!("perturbed |nablaR|={norm:.4e}>=tau={tau:.4e}"));
    detail.push(format!("|Phi(nablaR)|={phi_norm:.4e}>=tau'={tau_prime:.4e}"));

    // second-order convergence against the exact symbolic tensor
    let exact = golden.nabla_r.to_f64_tensor();
    let err_h = bundle.nabla_r.sub(&exact).expect("shape").inf_norm();
    let bundle_half = curvature::nabla_r(&chart, &golden.point, h / 2.0).expect("interior point");
    let err_half = bundle_half.nabla_r.sub(&exact).expect("shape").inf_norm();
    let ratio = err_h / err_half;
    pass &= (3.0..=5.0).contains(&ratio);
    detail.push(format!("convergence ratio {ratio:.3}"));

    c.check(pass, detail.join(", "));
}

#[test]
fn criterion_8_numerical_class_membership() {
    let c = Criterion {
        id: "8",
        description: "all four class residuals of numerical nabla R stay below 10 h^2 scale at every test point of every built-in",
    };
    let h = curvsym::defaults::STEP;
    let mut pass = true;
    let mut worst_rel: f64 = 0.0;
    let mut charts = symmetric_charts();
    charts.push(MetricChart::builtin("perturbed-flat", &BTreeMap::new()).expect("builtin"));
    for chart in &charts {
        let points = curvature::default_points(chart, 5, curvsym::defaults::SEED, h);
        for x in &points {
            let bundle = curvature::nabla_r(chart, x, h).expect("interior point");
            let budget = 10.0 * h * h * curvature::fd_scale(&bundle);
            let residuals = symclass::is_in_class(&bundle.nabla_r).expect("rank-5");
            for r in residuals {
                worst_rel = worst_rel.max(r / budget);
                pass &= r <= budget;
            }
        }
    }
    c.check(pass, format!("worst residual at {:.3} of budget", worst_rel));
}

#[test]
fn criterion_9_determinism_and_fault_injection() {
    let c = Criterion {
        id: "9",
        description: "repeated runs produce byte-identical reports; the injected coefficient fault fails with a witness and exit 1",
    };
    let bin = env!("CARGO_BIN_EXE_curvsym");
    let dir = tempfile::tempdir().expect("tempdir");
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    let mut pass = true;
    let mut detail = Vec::new();

    for out in [&out_a, &out_b] {
        let status = Command::new(bin)
            .args(["verify-lemma", "--dims", "2,3", "--out"])
            .arg(out)
            .status()
            .expect("spawn");
        pass &= status.success();
    }
    let bytes_a = std::fs::read(&out_a).expect("report a");
    let bytes_b = std::fs::read(&out_b).expect("report b");
    let identical = bytes_a == bytes_b;
    pass &= identical;
    detail.push(format!("byte-identical={identical}"));

    let out_fault = dir.path().join("fault.json");
    let status = Command::new(bin)
        .args(["verify-lemma", "--dims", "2", "--inject-psi-typo", "--out"])
        .arg(&out_fault)
        .status()
        .expect("spawn");
    let exit_one = status.code() == Some(1);
    pass &= exit_one;
    let fault_doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_fault).expect("fault report"))
            .expect("json");
    let has_witness = fault_doc["reports"]
        .as_array()
        .map(|rs| {
            rs.iter().any(|r| {
                r["status"]["kind"] == "exact-fail" && r["witness"]["component"].is_array()
            })
        })
        .unwrap_or(false);
    pass &= has_witness;
    detail.push(format!("fault exit_1={exit_one} witness={has_witness}"));

    c.check(pass, detail.join(", "));
}

/// The golden witness vectors certify the six-term identity is not vacuous:
/// for each n there is a basis element with a nonzero six-term value.
#[test]
fn golden_witnesses_are_nonvacuous() {
    let witnesses = goldens::load_six_term_witnesses(&goldens_dir()).expect("golden");
    for (n, w) in &witnesses {
        let Some(basis) = bases().get(n) else { continue };
        let [u, v, x, y, z] = &w.vectors;
        let nonzero = basis
            .vectors()
            .iter()
            .any(|b| !polarization::six_term_sum(b, u, v, x, y, z).unwrap().is_zero());
        assert!(nonzero, "witness vectors vacuous at n={n}");
    }
    assert!(witnesses.len() >= 4);
}

/// The wide-support solve is feasible and its canonical representative
/// verifies as a left inverse on every basis it was solved against.
#[test]
fn full_support_solve_verifies_on_dims_2_3_4() {
    let all = bases();
    let support = IndexPermutation::all(5);
    let outcome =
        lemma::solve_left_inverse(&support, &[&all[&2], &all[&3], &all[&4]]);
    let lemma::SolveOutcome::Feasible { coefficients, kernel_dim } = outcome else {
        panic!("expected feasible");
    };
    assert!(kernel_dim > 0, "wide support should be underdetermined");
    let op = PermOperator::from_terms(support.into_iter().zip(coefficients).collect());
    for n in [2usize, 3, 4] {
        let report = lemma::verify_left_inverse(&all[&n], &op);
        assert!(report.is_pass(), "recovered operator fails at n={n}");
    }
}
