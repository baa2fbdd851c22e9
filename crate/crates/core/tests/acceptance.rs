//! Acceptance suite: one PASS/FAIL line per criterion. Every comparison is
//! exact; the only tolerance is the wall-clock budget of each criterion.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use stabrw::circuit::circuit_to_matrix;
use stabrw::circuit_rules::circ_rule_instances;
use stabrw::derivation::{verify_script, Report, Script};
use stabrw::random::{mutate, random_circuit, random_rewrites, rewrite_pool, seeded, CircuitShape};
use stabrw::rules::Bounds;
use stabrw::selftest::{check_circ_rules, check_scirc, check_zx_rules, Oracle, RuleCheck};
use stabrw::stab::{equiv_exact, equiv_tableau};
use stabrw::zx::{circuit_to_zx, zx_to_matrix};
use stabrw::zx_rules::zx_rule_instances;
use stabrw::{mat_proportional, Circuit, Verdict};

type Outcome = Result<String, String>;

const ZX_SCRIPTS: [&str; 9] = [
    "s1_from_assoc.zxderiv",
    "b1_from_b1prime.zxderiv",
    "b1prime_from_b1.zxderiv",
    "b2_from_b2prime.zxderiv",
    "b2prime_from_b2.zxderiv",
    "k1_from_k1prime.zxderiv",
    "k1prime_from_k1.zxderiv",
    "c_lhs_to_cprime.zxderiv",
    "c_rhs_to_cprime.zxderiv",
];

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read(name: &str) -> String {
    let p = fixtures().join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn circuit(name: &str) -> Circuit {
    Circuit::parse(&read(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn verify(text: &str) -> stabrw::Result<Report> {
    verify_script(&Script::from_json(text)?, Bounds::default())
}

fn all_pass(checks: &[RuleCheck]) -> Result<(), String> {
    match checks.iter().find(|c| !c.ok) {
        Some(c) => Err(format!("{} failed: {}", c.rule, c.verdict)),
        None => Ok(()),
    }
}

fn zx_soundness() -> Outcome {
    let rules = zx_rule_instances(Bounds { max_arity: 6, ccirc_max: 5 });
    let checks = check_zx_rules(&rules);
    all_pass(&checks)?;
    let zero = checks.iter().filter(|c| c.verdict == "BothZero").count();
    Ok(format!("{} instances, none different ({zero} scalar instances are zero on both sides)", checks.len()))
}

fn circuit_soundness() -> Outcome {
    let rules = circ_rule_instances(Bounds { max_arity: 6, ccirc_max: 5 });
    let ccirc: Vec<_> = rules.iter().filter(|r| r.id == "Ccirc").collect();
    for v in 0..3 {
        if !ccirc.iter().any(|r| r.variant == v) {
            return Err(format!("no Ccirc instance of variant {v}"));
        }
    }
    if let Some(r) = ccirc.iter().find(|r| r.lhs.inputs().len() + r.lhs.outputs().len() > 5) {
        return Err(format!("{r} exceeds the size bound"));
    }
    let mut checks = check_circ_rules(&rules, Oracle::Exact);
    checks.extend(check_scirc(7, 25, Oracle::Exact));
    all_pass(&checks)?;
    if let Some(c) = checks.iter().find(|c| c.verdict.contains("tableau")) {
        return Err(format!("{} needed the tableau fallback", c.rule));
    }
    let mut spliced: BTreeMap<&str, usize> =
        ["plus-control", "zero-target", "control-postplus", "target-postzero"].into_iter().map(|f| (f, 0)).collect();
    for c in checks.iter().filter(|c| c.family == "scirc" && !c.verdict.starts_with("skipped")) {
        for (f, n) in spliced.iter_mut() {
            if c.rule.contains(&format!("{f}@")) {
                *n += 1;
            }
        }
    }
    if let Some((f, _)) = spliced.iter().find(|(_, &n)| n == 0) {
        return Err(format!("no Scirc splice of fragment {f} produced a circuit"));
    }
    let scirc = checks.iter().filter(|c| c.family == "scirc").count();
    let skipped = checks.iter().filter(|c| c.verdict.starts_with("skipped")).count();
    Ok(format!(
        "{} equation instances ({} Ccirc) and {scirc} Scirc splices ({skipped} without a circuit reading) pass; splices per fragment {spliced:?}",
        checks.len() - scirc,
        ccirc.len()
    ))
}

fn primed_rules() -> Outcome {
    let primed: Vec<_> =
        zx_rule_instances(Bounds { max_arity: 6, ccirc_max: 5 }).into_iter().filter(|r| r.id.contains('\'')).collect();
    all_pass(&check_zx_rules(&primed))?;
    let mut steps = 0;
    for name in ZX_SCRIPTS {
        let report = verify(&read(name)).map_err(|e| format!("{name}: {e}"))?;
        if !report.accepted() {
            return Err(format!("{name} rejected: {:?}", report.outcome));
        }
        if let Some(s) = report.steps.iter().find(|s| s.detail.contains("too large")) {
            return Err(format!("{name} step {} was not checked: {}", s.step, s.detail));
        }
        steps += report.steps.len();
    }
    Ok(format!("{} primed instances pass; {} scripts accepted over {steps} checked steps", primed.len(), ZX_SCRIPTS.len()))
}

fn teleportation() -> Outcome {
    let report = verify(&read("teleport.deriv")).map_err(|e| e.to_string())?;
    if !report.accepted() {
        return Err(format!("script rejected: {:?}", report.outcome));
    }
    let (t, id) = (circuit("teleport.circ"), circuit("id1.circ"));
    let v = equiv_exact(&t, &id).map_err(|e| e.to_string())?;
    if !matches!(v, Verdict::Proportional(_)) {
        return Err(format!("exact oracle says {v}"));
    }
    if !equiv_tableau(&t, &id).map_err(|e| e.to_string())? {
        return Err("tableau oracle disagrees".into());
    }
    Ok(format!("script accepted in {} steps; exact {v}; tableau agrees", report.steps.len()))
}

fn mbqc_cnot() -> Outcome {
    let (m, c) = (circuit("mbqc_cnot.circ"), circuit("cnot.circ"));
    let v = equiv_exact(&m, &c).map_err(|e| e.to_string())?;
    if !matches!(v, Verdict::Proportional(_)) {
        return Err(format!("exact oracle says {v}"));
    }
    if !equiv_tableau(&m, &c).map_err(|e| e.to_string())? {
        return Err("tableau oracle disagrees".into());
    }
    Ok(format!("exact {v}; tableau agrees"))
}

fn translation() -> Outcome {
    let mut rng = seeded(2025);
    let mut zero = 0;
    for i in 0..500 {
        let c = random_circuit(&mut rng, CircuitShape { max_wires: 4, max_gates: 12 });
        let direct = circuit_to_matrix(&c).map_err(|e| e.to_string())?;
        let via_zx = zx_to_matrix(&circuit_to_zx(&c)).map_err(|e| e.to_string())?;
        match mat_proportional(&direct, &via_zx).map_err(|e| e.to_string())? {
            Verdict::Different { .. } => return Err(format!("circuit {i} differs:\n{}", c.to_text())),
            Verdict::BothZero => zero += 1,
            _ => {}
        }
    }
    Ok(format!("500 circuits, 0 failures ({zero} are the zero map on both sides)"))
}

fn oracle_agreement() -> Outcome {
    let mut rng = seeded(4048);
    let pool = rewrite_pool();
    let shape = CircuitShape { max_wires: 5, max_gates: 20 };
    let (mut same, mut differ) = (0, 0);
    for i in 0..200 {
        let a = random_circuit(&mut rng, shape);
        // Alternate between likely-different mutants and equivalent rewrites.
        let b = if i % 2 == 0 { mutate(&mut rng, &a) } else { random_rewrites(&mut rng, &a, &pool, 3).0 };
        let exact = equiv_exact(&a, &b).map_err(|e| e.to_string())?.is_equivalent();
        let tab = equiv_tableau(&a, &b).map_err(|e| e.to_string())?;
        if exact != tab {
            return Err(format!("pair {i}: exact {exact}, tableau {tab}\n{}\nvs\n{}", a.to_text(), b.to_text()));
        }
        if exact {
            same += 1;
        } else {
            differ += 1;
        }
    }
    Ok(format!("200 pairs agree ({same} equivalent, {differ} different)"))
}

fn robustness() -> Outcome {
    let mut originals = vec!["teleport.deriv"];
    originals.extend(ZX_SCRIPTS);
    for name in originals {
        let report = verify(&read(name)).map_err(|e| format!("{name}: {e}"))?;
        if !report.accepted() {
            return Err(format!("original {name} rejected"));
        }
    }
    let dir = fixtures().join("corrupt");
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    if names.len() != 20 {
        return Err(format!("expected 20 corrupted scripts, found {}", names.len()));
    }
    for name in &names {
        let text = std::fs::read_to_string(dir.join(name)).map_err(|e| e.to_string())?;
        if let Ok(r) = verify(&text) {
            if r.accepted() {
                return Err(format!("corrupted {name} was accepted"));
            }
        }
    }
    Ok("20 corrupted scripts rejected; 10 originals accepted".into())
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "ZX axiom soundness", budget: secs(60), run: zx_soundness },
        Criterion { name: "circuit axiom soundness", budget: secs(120), run: circuit_soundness },
        Criterion { name: "primed rules and ZX proof scripts", budget: secs(60), run: primed_rules },
        Criterion { name: "teleportation", budget: secs(5), run: teleportation },
        Criterion { name: "measurement-based CNOT", budget: secs(5), run: mbqc_cnot },
        Criterion { name: "translation soundness", budget: secs(120), run: translation },
        Criterion { name: "oracle cross-validation", budget: secs(60), run: oracle_agreement },
        Criterion { name: "checker robustness", budget: secs(10), run: robustness },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > c.budget => Err(format!("over budget: {took:.2?} > {:?}", c.budget)),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("criterion {} {tag} {} [exact, {took:.2?} of {:?}]: {detail}", i + 1, c.name, c.budget);
        failed += usize::from(outcome.is_err());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
