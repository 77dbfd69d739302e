use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::generator::{Generator, GeneratorConfig};
use crate::frontend::{parse, print, Style};
use crate::graded::{CovectorArg, DiffPolynomial, Geometry, MultiIndex};
use crate::multivector::{evaluate, evaluate_args, evaluate_density, insert, Multivector};
use crate::schouten::{
    bracket_base_case, bracket_poisson, bracket_recursive, bracket_via_q, graded_commutator,
    is_poisson, jacobi_defect, q_differential_check, q_field, recursive_value, EvolutionaryField,
};
use crate::variational::{is_exact, var_derivative_q};

/// One failed case, enough to replay it: rerun the battery's case `case`
/// with `seed`.
#[derive(Clone, Debug)]
pub struct FailureRecord {
    pub case: usize,
    pub seed: u64,
    pub inputs: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct BatteryReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<FailureRecord>,
    pub seed: u64,
    pub elapsed: Duration,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// `name cases failures seed`
    pub fn summary_line(&self) -> String {
        format!(
            "{} {} {} {}",
            self.name,
            self.cases,
            self.failures.len(),
            self.seed
        )
    }
}

type CaseOutcome = std::result::Result<(), (Vec<String>, String)>;

fn show(f: &DiffPolynomial, g: Geometry) -> String {
    print(f, g, Style::Plain)
}

fn show_mv(xi: &Multivector) -> String {
    format!("deg {}: {}", xi.degree(), show(xi.density(), xi.geometry()))
}

fn same_class(a: &DiffPolynomial, b: &DiffPolynomial) -> bool {
    is_exact(&(a - b))
}

/// Runs `cases` independent cases in parallel; failures are reported in case
/// order whatever the scheduling.
fn run_cases(
    name: &str,
    cfg: &GeneratorConfig,
    cases: usize,
    case: impl Fn(&mut Generator) -> CaseOutcome + Sync,
) -> BatteryReport {
    let start = Instant::now();
    let failures: Vec<FailureRecord> = (0..cases)
        .into_par_iter()
        .filter_map(|i| {
            let mut gen = Generator::for_case(*cfg, i as u64);
            case(&mut gen).err().map(|(inputs, detail)| FailureRecord {
                case: i,
                seed: cfg.seed,
                inputs,
                detail,
            })
        })
        .collect();
    BatteryReport {
        name: name.to_string(),
        cases,
        failures,
        seed: cfg.seed,
        elapsed: start.elapsed(),
    }
}

fn draw(gen: &mut Generator, k: usize) -> std::result::Result<Multivector, (Vec<String>, String)> {
    gen.multivector(k)
        .map_err(|e| (vec![format!("degree {k}")], e.to_string()))
}

fn degree(gen: &mut Generator) -> usize {
    let max = gen.config().max_degree;
    gen.range(0, max)
}

/// The three constructions agree on one pair.
pub fn check_definitions(xi: &Multivector, eta: &Multivector) -> std::result::Result<(), String> {
    let a = bracket_poisson(xi, eta).map_err(|e| e.to_string())?;
    let c = bracket_via_q(xi, eta).map_err(|e| e.to_string())?;
    if !same_class(a.density(), c.density()) {
        return Err(format!(
            "Poisson and Q-field brackets differ: {} vs {}",
            show_mv(&a),
            show_mv(&c)
        ));
    }
    let r = bracket_recursive(xi, eta).map_err(|e| e.to_string())?;
    let inserted = evaluate(&a, &r.slots).map_err(|e| e.to_string())?;
    if !same_class(r.inserted.density(), inserted.density()) {
        return Err(format!(
            "recursive value {} differs from evaluated bracket {}",
            show(r.inserted.density(), xi.geometry()),
            show(inserted.density(), xi.geometry())
        ));
    }
    if !same_class(r.reconstructed.density(), a.density()) {
        return Err("reconstructed recursive bracket differs".into());
    }
    Ok(())
}

pub fn battery_definitions(cfg: &GeneratorConfig, cases: usize) -> BatteryReport {
    run_cases("definitions", cfg, cases, |gen| {
        let (k, l) = (degree(gen), degree(gen));
        let xi = draw(gen, k)?;
        let eta = draw(gen, l)?;
        check_definitions(&xi, &eta).map_err(|d| (vec![show_mv(&xi), show_mv(&eta)], d))
    })
}

pub fn battery_jacobi(cfg: &GeneratorConfig, cases: usize) -> BatteryReport {
    run_cases("jacobi", cfg, cases, |gen| {
        let max = gen.config().max_degree;
        let r = gen.range(0, max.min(5));
        let s = gen.range(0, max.min(5 - r));
        let t = gen.range(0, max.min(5 - r - s));
        let xs = [draw(gen, r)?, draw(gen, s)?, draw(gen, t)?];
        let inputs = || xs.iter().map(show_mv).collect::<Vec<_>>();
        match jacobi_defect(&xs[0], &xs[1], &xs[2]) {
            Ok(d) if d.is_trivial() => Ok(()),
            Ok(d) => Err((inputs(), format!("nonzero defect {}", show_mv(&d)))),
            Err(e) => Err((inputs(), e.to_string())),
        }
    })
}

pub fn battery_commutator(cfg: &GeneratorConfig, cases: usize) -> BatteryReport {
    run_cases("commutator", cfg, cases, |gen| {
        let (k, l) = (degree(gen), degree(gen));
        let xi = draw(gen, k)?;
        let eta = draw(gen, l)?;
        let fk = gen.range(0, 2);
        let f = gen.density(fk);
        let g = xi.geometry();
        let inputs = || vec![show_mv(&xi), show_mv(&eta), show(&f, g)];
        let bracket = bracket_poisson(&xi, &eta).map_err(|e| (inputs(), e.to_string()))?;
        let lhs = q_field(&bracket).apply(&f);
        let rhs = graded_commutator(&q_field(&xi), &q_field(&eta), &f);
        if same_class(&lhs, &rhs) {
            Ok(())
        } else {
            Err((inputs(), "∫Q^[ξ,η] f and ∫[Q^ξ,Q^η] f differ".into()))
        }
    })
}

/// Whether `⟦ξ,η⟧(args)` from the recursion equals the direct evaluation.
pub fn recursion_matches(xi: &Multivector, eta: &Multivector, args: &[CovectorArg]) -> bool {
    let g = xi.geometry();
    let recursive = recursive_value(
        xi.density(),
        xi.degree(),
        eta.density(),
        eta.degree(),
        args,
        g.m,
    );
    let direct = bracket_poisson(xi, eta)
        .and_then(|a| evaluate_density(a.density(), args))
        .expect("arity matches");
    same_class(&recursive, &direct)
}

/// ξ = ∫b b_x, η = ∫b q_x evaluated on `(q_x, p¹)`. Sections that are
/// variational gradients, such as `q` or `q²`, happen to satisfy the
/// recursion; `q_x` does not.
pub fn covector_substitution_counterexample() -> (Multivector, Multivector, Vec<CovectorArg>) {
    let g = Geometry::line(2);
    let xi = Multivector::with_degree(parse("b*b_x", g).expect("literal"), g, 2).expect("degree 2");
    let eta =
        Multivector::with_degree(parse("b*q_x", g).expect("literal"), g, 1).expect("degree 1");
    let qx = CovectorArg::section(vec![DiffPolynomial::q(0, MultiIndex::unit(0))]).expect("even");
    (xi, eta, vec![qx, CovectorArg::Slot(1)])
}

pub fn battery_insertion(cfg: &GeneratorConfig, cases: usize) -> BatteryReport {
    let mut report = run_cases("insertion", cfg, cases, |gen| {
        let h = draw(gen, 0)?;
        let xi = draw(gen, 2)?;
        let g = xi.geometry();
        let inputs = || vec![show_mv(&h), show_mv(&xi)];
        let lhs = bracket_poisson(&h, &xi)
            .and_then(|b| evaluate(&b, &[1]))
            .map_err(|e| (inputs(), e.to_string()))?;
        let dh = CovectorArg::section(vec![var_derivative_q(h.density(), 0)]).expect("b-free");
        let rhs = evaluate_args(&xi, &[dh, CovectorArg::Slot(1)])
            .map_err(|e| (inputs(), e.to_string()))?;
        if !same_class(lhs.density(), &rhs.density().scale_int(2)) {
            return Err((inputs(), "[H,ξ](p) differs from 2ξ(δH,p)".into()));
        }
        let rec = bracket_recursive(&h, &xi).map_err(|e| (inputs(), e.to_string()))?;
        if !same_class(rec.inserted.density(), &rhs.density().scale_int(2)) || rec.slots != [1] {
            return Err((
                inputs(),
                format!("recursive value {}", show(rec.inserted.density(), g)),
            ));
        }
        Ok(())
    });
    let start = Instant::now();
    let (xi, eta, args) = covector_substitution_counterexample();
    if recursion_matches(&xi, &eta, &args) {
        report.failures.push(FailureRecord {
            case: cases,
            seed: cfg.seed,
            inputs: vec![show_mv(&xi), show_mv(&eta), "args = (q_x, p1)".into()],
            detail: "substituting q for the covector slot should break the recursion".into(),
        });
    }
    report.cases += 1;
    report.elapsed += start.elapsed();
    report
}

/// The worked examples with known closed forms.
pub fn golden_checks() -> Vec<(&'static str, bool)> {
    let g = Geometry::line(4);
    let p = |s: &str| parse(s, g).expect("literal");
    let mv = |s: &str, k: usize| Multivector::with_degree(p(s), g, k).expect("homogeneous");
    let bbx = mv("b*b_x", 2);
    let eta3 = mv("b*x^3*q_xx", 1);
    let mut checks = Vec::new();

    let cubic = p("2*x^3*b_xxx*b");
    checks.push((
        "bracket/bbx-x3qxx",
        bracket_poisson(&bbx, &eta3)
            .is_ok_and(|r| r.degree() == 2 && same_class(r.density(), &cubic)),
    ));
    checks.push((
        "via-q/bbx-x3qxx",
        bracket_via_q(&bbx, &eta3).is_ok_and(|r| same_class(r.density(), &cubic)),
    ));
    checks.push((
        "recursive/bbx-x3qxx",
        bracket_recursive(&bbx, &eta3).is_ok_and(|r| same_class(r.reconstructed.density(), &cubic)),
    ));
    checks.push((
        "bracket/bbx-qxbbx",
        bracket_poisson(&bbx, &mv("q_x*b*b_x", 2))
            .is_ok_and(|r| same_class(r.density(), &p("2*b*b_x*b_xx"))),
    ));
    for (phi1, phi2) in [("q_x", "q*q_x"), ("q^2", "q_xx")] {
        let (f1, f2) = (p(phi1), p(phi2));
        let d1 = EvolutionaryField::from_q_sections(vec![f1.clone()]);
        let d2 = EvolutionaryField::from_q_sections(vec![f2.clone()]);
        let commutator = &d1.apply(&f2) - &d2.apply(&f1);
        let expected = -(&p("b") * &commutator);
        let xi = mv(&format!("b*({phi1})"), 1);
        let eta = mv(&format!("b*({phi2})"), 1);
        checks.push((
            "bracket/one-vectors",
            bracket_poisson(&xi, &eta).is_ok_and(|r| same_class(r.density(), &expected)),
        ));
        checks.push((
            "recursive/one-vectors",
            bracket_recursive(&xi, &eta).is_ok_and(|r| {
                let inserted = evaluate(
                    &Multivector::with_degree(expected.clone(), g, 1).expect("degree 1"),
                    &r.slots,
                );
                inserted.is_ok_and(|e| same_class(r.inserted.density(), e.density()))
            }),
        ));
    }
    checks.push((
        "recursive/evaluated",
        bracket_recursive(&bbx, &eta3)
            .is_ok_and(|r| same_class(r.inserted.density(), &p("x^3*p1_xxx*p2 - x^3*p2_xxx*p1"))),
    ));
    let half_q2 = mv("1/2*q^2", 0);
    for phi in ["q_x", "q_xxx"] {
        checks.push((
            "base-case/gradient",
            bracket_base_case(&half_q2, &mv(&format!("b*{phi}"), 1)).is_ok_and(|r| r.is_trivial()),
        ));
    }
    checks.push((
        "base-case/constant-field",
        bracket_base_case(&mv("x*q", 0), &mv("b", 1)).is_ok_and(|r| r.is_trivial()),
    ));
    checks.push((
        "recursive/factor-two",
        bracket_recursive(&half_q2, &bbx)
            .is_ok_and(|r| same_class(r.inserted.density(), &p("2*q*p1_x"))),
    ));
    checks.push(("poisson/b*b_x", is_poisson(&bbx).is_ok_and(|v| v.poisson)));
    let kdv = mv("b*b_xxx + q*b*b_x", 2);
    checks.push(("poisson/kdv", is_poisson(&kdv).is_ok_and(|v| v.poisson)));
    checks.push((
        "q-differential/kdv",
        q_differential_check(&kdv).unwrap_or(false),
    ));
    checks.push((
        "poisson/q_x*b*b_x",
        is_poisson(&mv("q_x*b*b_x", 2))
            .is_ok_and(|v| !v.poisson && v.witness.is_some_and(|w| !w.is_trivial())),
    ));
    checks.push((
        "jacobi/self",
        jacobi_defect(&bbx, &bbx, &bbx).is_ok_and(|d| d.is_trivial()),
    ));
    checks
}

pub fn battery_golden() -> BatteryReport {
    let start = Instant::now();
    let checks = golden_checks();
    let failures = checks
        .iter()
        .enumerate()
        .filter(|(_, (_, ok))| !ok)
        .map(|(i, (name, _))| FailureRecord {
            case: i,
            seed: 0,
            inputs: vec![name.to_string()],
            detail: "golden value not reproduced".into(),
        })
        .collect();
    BatteryReport {
        name: "golden".into(),
        cases: checks.len(),
        failures,
        seed: 0,
        elapsed: start.elapsed(),
    }
}

pub fn battery_representative(cfg: &GeneratorConfig, cases: usize) -> BatteryReport {
    run_cases("representative", cfg, cases, |gen| {
        let (k, l) = (gen.range(1, gen.config().max_degree), degree(gen));
        let xi = draw(gen, k)?;
        let eta = draw(gen, l)?;
        let g = xi.geometry();
        let shift = gen.exact_density(k);
        let shifted = Multivector::with_degree(xi.density() + &shift, g, k).expect("same degree");
        let inputs = || vec![show_mv(&xi), show_mv(&eta), show(&shift, g)];
        let fail = |what: &str| Err((inputs(), format!("{what} changed under an exact shift")));
        let err = |e: crate::Error| (inputs(), e.to_string());

        let before = bracket_poisson(&xi, &eta).map_err(err)?;
        let after = bracket_poisson(&shifted, &eta).map_err(err)?;
        if !same_class(before.density(), after.density()) {
            return fail("bracket ⟦ξ,η⟧");
        }
        let before = bracket_poisson(&eta, &xi).map_err(err)?;
        let after = bracket_poisson(&eta, &shifted).map_err(err)?;
        if !same_class(before.density(), after.density()) {
            return fail("bracket ⟦η,ξ⟧");
        }
        let slots: Vec<u32> = (1..=k as u32).collect();
        let before = evaluate(&xi, &slots).map_err(err)?;
        let after = evaluate(&shifted, &slots).map_err(err)?;
        if !same_class(before.density(), after.density()) {
            return fail("evaluation");
        }
        let before = insert(&xi, 1).map_err(err)?;
        let after = insert(&shifted, 1).map_err(err)?;
        if !same_class(before.density(), after.density()) {
            return fail("insertion");
        }
        Ok(())
    })
}

pub fn battery_roundtrip(cfg: &GeneratorConfig, cases: usize) -> BatteryReport {
    run_cases("roundtrip", cfg, cases, |gen| {
        let f = gen.polynomial();
        let g = gen.config().geometry;
        let text = show(&f, g);
        match parse(&text, g) {
            Ok(back) if back == f && show(&back, g) == text => Ok(()),
            Ok(back) => Err((vec![text], format!("parsed back as {}", show(&back, g)))),
            Err(e) => Err((vec![text], e.to_string())),
        }
    })
}

/// Every battery with `cases` random cases each.
pub fn run_all(cfg: &GeneratorConfig, cases: usize) -> Vec<BatteryReport> {
    vec![
        battery_definitions(cfg, cases),
        battery_jacobi(cfg, cases),
        battery_commutator(cfg, cases),
        battery_insertion(cfg, cases),
        battery_golden(),
        battery_representative(cfg, cases),
        battery_roundtrip(cfg, cases),
    ]
}
