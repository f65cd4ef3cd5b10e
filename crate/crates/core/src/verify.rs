//! Verification sweeps and their report stream.
//!
//! A sweep produces one [`VerificationReport`] per (suite, instance). Reports
//! are sorted before emission so the stream depends only on the inputs.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::hodge::{
    contract_omega_on_t, contract_t_on_omega, FormClass, HodgeError, HodgeModel, Implication, PolyClass,
};
use crate::lie::{LieAlgebra, Representation};
use crate::linalg::Matrix;
use crate::pbw::{
    adjunction_check, all_words, check_lie_diagram_with, derivation, enveloping_relation_holds,
    invariants_s, theta, LambdaPowers, SymElement, SymMonomial, TensorElement,
};
use crate::sampling;

/// Degree cap for Lie sweeps unless overridden.
pub const DEFAULT_MAX_DEGREE: usize = 4;
/// Largest model dimension accepted by the Hodge sweep.
pub const MAX_HODGE_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub instance: String,
    pub status: Status,
    pub detail: String,
    /// On failure: the exact inputs and both computed sides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl VerificationReport {
    fn new(suite: &str, instance: String, ok: bool, detail: String, witness: impl FnOnce() -> Value) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            instance,
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
            witness: (!ok).then(witness),
        }
    }

    pub fn to_text(&self) -> String {
        format!("{} {} {} {}", self.status, self.suite, self.instance, self.detail)
    }
}

/// Sorted collection of reports.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportStream {
    reports: Vec<VerificationReport>,
}

impl ReportStream {
    pub fn new(mut reports: Vec<VerificationReport>) -> Self {
        reports.sort_by(|a, b| (&a.suite, &a.instance).cmp(&(&b.suite, &b.instance)));
        ReportStream { reports }
    }

    pub fn reports(&self) -> &[VerificationReport] {
        &self.reports
    }

    pub fn count(&self, status: Status) -> usize {
        self.reports.iter().filter(|r| r.status == status).count()
    }

    pub fn all_passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.reports.iter().filter(|r| r.status == Status::Fail)
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&serde_json::to_string(r).expect("reports serialize"));
            out.push('\n');
        }
        out
    }

    pub fn to_text_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.to_text());
            out.push('\n');
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "{} reports: {} passed, {} failed, {} skipped",
            self.reports.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        )
    }
}

fn matrix_json(m: &Matrix) -> Value {
    json!(m.to_strings())
}

/// Every Lie-side suite for the given representations.
pub fn verify_lie(
    algebra_name: &str,
    algebra: &LieAlgebra,
    reps: &[(String, Representation)],
    max_degree: usize,
) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let invariants: Vec<(usize, Vec<SymElement>)> =
        (1..=max_degree).map(|d| (d, invariants_s(algebra, d))).collect();
    for (rep_name, rep) in reps {
        let prefix = format!("{algebra_name}/{rep_name}");
        let powers = LambdaPowers::new(rep, max_degree);
        for d in 0..=max_degree {
            out.push(diagram_on_monomials(&prefix, rep, &powers, d));
            out.push(phi_on_words(&prefix, rep, &powers, d));
        }
        for (d, elements) in &invariants {
            out.push(invariants_report(&prefix, rep, &powers, *d, elements));
        }

        let adj = adjunction_check(rep);
        out.push(VerificationReport::new(
            "adjunction",
            prefix.clone(),
            adj.holds(),
            format!("{} generators", adj.pairs.len()),
            || {
                let i = adj.first_failure().unwrap_or(0);
                json!({
                    "generator": algebra.label(i),
                    "contracted": matrix_json(&adj.pairs[i].0),
                    "rho": matrix_json(&adj.pairs[i].1),
                })
            },
        ));
        out.push(VerificationReport::new(
            "enveloping-relation",
            prefix.clone(),
            enveloping_relation_holds(rep),
            format!("{} ordered pairs", algebra.dim() * algebra.dim()),
            || json!({"representation": rep.matrices().iter().map(matrix_json).collect::<Vec<_>>()}),
        ));
    }
    out
}

fn diagram_on_monomials(prefix: &str, rep: &Representation, powers: &LambdaPowers, d: usize) -> VerificationReport {
    let alg = rep.algebra();
    let monomials = SymMonomial::all_of_degree(alg.dim(), d);
    let failure = monomials.iter().find_map(|m| {
        let s = SymElement::monomial(m.clone());
        let r = check_lie_diagram_with(rep, &s, Some(powers));
        (!r.agrees()).then(|| {
            json!({
                "element": s.to_json(),
                "display": s.display(alg),
                "theta_of_symmetrization": matrix_json(&r.via_enveloping),
                "s_to_hom": matrix_json(&r.via_exp_lambda),
            })
        })
    });
    let ok = failure.is_none();
    VerificationReport::new(
        "lie-diagram",
        format!("{prefix}/d{d:02}"),
        ok,
        format!("{} monomials", monomials.len()),
        || failure.unwrap_or(Value::Null),
    )
}

fn phi_on_words(prefix: &str, rep: &Representation, powers: &LambdaPowers, k: usize) -> VerificationReport {
    let words = all_words(rep.algebra().dim(), k);
    let failure = words.iter().find_map(|w| {
        let t = TensorElement::word(w.clone());
        let lhs = powers.contract(&t);
        let rhs = theta(rep, &t);
        (lhs != rhs).then(|| {
            let labels: Vec<&str> = w.iter().map(|&i| rep.algebra().label(i)).collect();
            json!({"word": w, "labels": labels, "phi": matrix_json(&lhs), "theta": matrix_json(&rhs)})
        })
    });
    let ok = failure.is_none();
    VerificationReport::new(
        "phi-theta",
        format!("{prefix}/d{k:02}"),
        ok,
        format!("{} words", words.len()),
        || failure.unwrap_or(Value::Null),
    )
}

fn invariants_report(
    prefix: &str,
    rep: &Representation,
    powers: &LambdaPowers,
    d: usize,
    elements: &[SymElement],
) -> VerificationReport {
    let alg = rep.algebra();
    let failure = elements.iter().find_map(|s| {
        let annihilated = (0..alg.dim()).all(|i| derivation(alg, i, s).is_zero());
        let r = check_lie_diagram_with(rep, s, Some(powers));
        let ok = annihilated && r.agrees() && r.central == Some(true);
        (!ok).then(|| {
            json!({
                "element": s.to_json(),
                "display": s.display(alg),
                "annihilated": annihilated,
                "diagram_agrees": r.agrees(),
                "central": r.central,
                "theta_of_symmetrization": matrix_json(&r.via_enveloping),
                "s_to_hom": matrix_json(&r.via_exp_lambda),
            })
        })
    });
    let ok = failure.is_none();
    VerificationReport::new(
        "invariants",
        format!("{prefix}/d{d:02}"),
        ok,
        format!("invariant space of dimension {}", elements.len()),
        || failure.unwrap_or(Value::Null),
    )
}

mod tags {
    pub const IMPLICATION: u64 = 1;
    pub const SPECIAL: u64 = 2;
    pub const SPECIAL_TODD: u64 = 3;
    pub const STRUCTURE: u64 = 4;
    pub const IMPLICATION_TODD: u64 = 5;
}

/// Every Hodge-side suite: seeded cases plus exhaustive basis sweeps.
pub fn verify_hodge(n: usize, seed: u64, cases: usize) -> Result<Vec<VerificationReport>, HodgeError> {
    if n > MAX_HODGE_DIM {
        return Err(HodgeError::Dimension(n));
    }
    let mut out = Vec::new();
    let trivial = HodgeModel::trivial(n)?;
    let mut probe = (0usize, 0usize);
    for case in 0..cases {
        let instance = format!("n{n}/case{case:04}");
        let case = case as u64;

        let c1 = sampling::first_chern(n, &mut sampling::case_rng(seed, tags::IMPLICATION, case));
        out.push(implication_report(&trivial, &c1, instance.clone())?);

        let mut rng = sampling::case_rng(seed, tags::SPECIAL, case);
        let c1 = sampling::first_chern(n, &mut rng);
        let alpha = sampling::poly_of_bidegree(n, 1, 1, 0.6, &mut rng);
        let model = HodgeModel::from_chern_classes(n, &[c1])?;
        out.push(special_case_report("special-case", &model, &alpha, true, instance.clone())?);

        let mut rng = sampling::case_rng(seed, tags::SPECIAL_TODD, case);
        let model = sampling::todd_model(n, &mut rng)?;
        let alpha = sampling::poly_of_bidegree(n, 1, 1, 0.6, &mut rng);
        out.push(special_case_report("special-case-todd", &model, &alpha, false, instance.clone())?);

        let mut rng = sampling::case_rng(seed, tags::STRUCTURE, case);
        out.extend(structural_reports(n, &mut rng, &instance)?);

        let mut rng = sampling::case_rng(seed, tags::IMPLICATION_TODD, case);
        let model = sampling::todd_model(n, &mut rng)?;
        let c1 = sampling::first_chern(n, &mut rng);
        for alpha in model.hypothesis_kernel(&c1)? {
            match model.implication_check(&alpha, &c1)?.implication() {
                Implication::Holds => probe.0 += 1,
                Implication::Violated => probe.1 += 1,
                Implication::Vacuous => {}
            }
        }
    }
    if cases > 0 {
        out.push(VerificationReport {
            suite: "implication-todd".into(),
            instance: format!("n{n}/summary"),
            status: Status::Skipped,
            detail: format!(
                "informational, Todd datum not 1: implication held on {} and failed on {} kernel basis elements",
                probe.0, probe.1
            ),
            witness: None,
        });
    }

    for (i, c1) in FormClass::basis_of_bidegree(n, 1, 1).into_iter().enumerate() {
        let model = HodgeModel::from_chern_classes(n, std::slice::from_ref(&c1))?;
        let instance = format!("n{n}/basis{i:03}");
        let mut failure = None;
        for alpha in PolyClass::basis_of_bidegree(n, 1, 1) {
            let r = model.special_case_check(&alpha)?;
            if !(r.shift_holds() && r.h2_holds()) {
                failure = Some(json!({
                    "c1": c1.to_json(),
                    "alpha": alpha.to_json(),
                    "duflo_shift": r.duflo_shift.to_json(),
                    "expected_shift": r.expected_shift.to_json(),
                    "h2_component": r.h2_component.to_json(),
                    "expected_h2": r.expected_h2.to_json(),
                }));
                break;
            }
        }
        let loci = model.special_case_loci()?;
        let ok = failure.is_none() && loci.coincide;
        out.push(VerificationReport::new(
            "special-case-basis",
            instance,
            ok,
            format!("c1 = {c1}; {} polyvectors; locus dimension {}", n * n, loci.locus_c1.len()),
            || {
                failure.unwrap_or_else(|| {
                    json!({
                        "c1": c1.to_json(),
                        "locus_c1": loci.locus_c1.iter().map(PolyClass::to_json).collect::<Vec<_>>(),
                        "locus_mukai": loci.locus_mukai.iter().map(PolyClass::to_json).collect::<Vec<_>>(),
                    })
                })
            },
        ));
    }

    out.push(koszul_basis_report(n)?);
    Ok(out)
}

fn implication_report(model: &HodgeModel, c1: &FormClass, instance: String) -> Result<VerificationReport, HodgeError> {
    let sweep = model.implication_sweep(c1)?;
    let ok = sweep.failure.is_none();
    Ok(VerificationReport::new(
        "implication",
        instance,
        ok,
        format!("hypothesis kernel of dimension {}", sweep.kernel_dim),
        || {
            let (alpha, image) = sweep.failure.clone().expect("failure present");
            json!({"c1": c1.to_json(), "alpha": alpha.to_json(), "image": image.to_json()})
        },
    ))
}

fn special_case_report(
    suite: &str,
    model: &HodgeModel,
    alpha: &PolyClass,
    gate_loci: bool,
    instance: String,
) -> Result<VerificationReport, HodgeError> {
    let r = model.special_case_check(alpha)?;
    let loci = model.special_case_loci()?;
    let pointwise = r.kills_c1 == r.kills_mukai;
    let ok = r.shift_holds() && r.h2_holds() && (!gate_loci || (loci.coincide && pointwise));
    let detail = if gate_loci {
        format!("loci of dimension {}", loci.locus_c1.len())
    } else {
        format!(
            "loci {} (not gated)",
            if loci.coincide { "coincide" } else { "differ" }
        )
    };
    Ok(VerificationReport::new(suite, instance, ok, detail, || {
        json!({
            "todd": model.todd().to_json(),
            "alpha": alpha.to_json(),
            "duflo_shift": r.duflo_shift.to_json(),
            "expected_shift": r.expected_shift.to_json(),
            "h2_component": r.h2_component.to_json(),
            "expected_h2": r.expected_h2.to_json(),
            "loci_coincide": loci.coincide,
            "kills_c1": r.kills_c1,
            "kills_mukai": r.kills_mukai,
        })
    }))
}

fn total_degree(f: &FormClass) -> Option<usize> {
    let degrees: Vec<usize> = f.bidegrees().iter().map(|(p, q)| p + q).collect();
    match degrees.as_slice() {
        [d, rest @ ..] if rest.iter().all(|e| e == d) => Some(*d),
        _ => None,
    }
}

fn koszul_sign_holds(u: &FormClass, v: &FormClass) -> Result<bool, HodgeError> {
    let (Some(p), Some(q)) = (total_degree(u), total_degree(v)) else {
        return Ok(true);
    };
    let sign = if p * q % 2 == 0 { 1 } else { -1 };
    Ok(u.wedge(v)? == v.wedge(u)?.scale(&crate::linalg::int(sign)))
}

fn koszul_basis_report(n: usize) -> Result<VerificationReport, HodgeError> {
    let basis = FormClass::full_basis(n);
    let limit = basis.len().min(64);
    let mut failure = None;
    'outer: for u in &basis[..limit] {
        for v in &basis[..limit] {
            if !koszul_sign_holds(u, v)? {
                failure = Some(json!({"u": u.to_json(), "v": v.to_json()}));
                break 'outer;
            }
        }
    }
    let ok = failure.is_none();
    Ok(VerificationReport::new(
        "koszul-basis",
        format!("n{n}"),
        ok,
        format!("{} ordered basis pairs", limit * limit),
        || failure.unwrap_or(Value::Null),
    ))
}

/// Seeded structural laws: graded commutativity, `i_j i_j = 0`, both module
/// laws and `D D^-1 = id`.
fn structural_reports(
    n: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
    instance: &str,
) -> Result<Vec<VerificationReport>, HodgeError> {
    let mut out = Vec::new();

    let p = rand::Rng::gen_range(rng, 0..=n);
    let q = rand::Rng::gen_range(rng, 0..=n);
    let u = sampling::form_of_bidegree(n, p, q, 0.5, rng);
    let r = rand::Rng::gen_range(rng, 0..=n);
    let s = rand::Rng::gen_range(rng, 0..=n);
    let v = sampling::form_of_bidegree(n, r, s, 0.5, rng);
    let ok = koszul_sign_holds(&u, &v)?;
    out.push(VerificationReport::new(
        "koszul",
        instance.to_string(),
        ok,
        format!("bidegrees ({p},{q}) and ({r},{s})"),
        || json!({"u": u.to_json(), "v": v.to_json()}),
    ));

    let form = sampling::any_form(n, 0.4, rng);
    let mut bad = None;
    for j in 0..n {
        let b = PolyClass::basis(n, &[], &[j], crate::linalg::int(1));
        let twice = contract_t_on_omega(&b, &contract_t_on_omega(&b, &form)?)?;
        if !twice.is_zero() {
            bad = Some(j);
            break;
        }
    }
    out.push(VerificationReport::new(
        "interior-square",
        instance.to_string(),
        bad.is_none(),
        format!("{n} generators"),
        || json!({"generator": bad, "form": form.to_json()}),
    ));

    let a1 = sampling::any_poly(n, 0.3, rng);
    let a2 = sampling::any_poly(n, 0.3, rng);
    let lhs = contract_t_on_omega(&a1.wedge(&a2)?, &form)?;
    let rhs = contract_t_on_omega(&a1, &contract_t_on_omega(&a2, &form)?)?;
    let ok = lhs == rhs;
    out.push(VerificationReport::new(
        "module-law-poly",
        instance.to_string(),
        ok,
        "(a ^ b) _| v = a _| (b _| v)".into(),
        || json!({"a": a1.to_json(), "b": a2.to_json(), "v": form.to_json(), "lhs": lhs.to_json(), "rhs": rhs.to_json()}),
    ));

    let w1 = sampling::any_form(n, 0.3, rng);
    let w2 = sampling::any_form(n, 0.3, rng);
    let lhs = contract_omega_on_t(&w1.wedge(&w2)?, &a1)?;
    let rhs = contract_omega_on_t(&w1, &contract_omega_on_t(&w2, &a1)?)?;
    let ok = lhs == rhs;
    out.push(VerificationReport::new(
        "module-law-form",
        instance.to_string(),
        ok,
        "(u ^ w) _| a = u _| (w _| a)".into(),
        || json!({"u": w1.to_json(), "w": w2.to_json(), "a": a1.to_json(), "lhs": lhs.to_json(), "rhs": rhs.to_json()}),
    ));

    let model = sampling::todd_model(n, rng)?;
    let there = model.duflo(&model.duflo_inverse(&a1)?)?;
    let back = model.duflo_inverse(&model.duflo(&a1)?)?;
    let ok = there == a1 && back == a1;
    out.push(VerificationReport::new(
        "duflo-inverse",
        instance.to_string(),
        ok,
        "D(D^-1 a) = a = D^-1(D a)".into(),
        || json!({"todd": model.todd().to_json(), "a": a1.to_json(), "d_of_inverse": there.to_json(), "inverse_of_d": back.to_json()}),
    ));
    Ok(out)
}
