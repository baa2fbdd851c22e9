//! Proof scripts: step-by-step rewrites with explicit anchors, checked one
//! application at a time.
//!
//! A script is JSON:
//!
//! ```json
//! {
//!   "kind": "circuit",
//!   "initial": "input a; h a; h a; output a",
//!   "target": "input a; output a",
//!   "steps": [
//!     {"rule": "Hcirc", "direction": "lr", "binding": {"match": 0}}
//!   ]
//! }
//! ```
//!
//! `initial` and `target` use the circuit or ZX text format; `;` may stand in
//! for a line break. Each step names a rule, an optional `variant` (circuit
//! rules) and `params`, a `direction` (`lr` by default) and a binding. A
//! binding is either `{"match": N}`, the N-th entry of the deterministic match
//! list, or an explicit anchor: `{"gates": [...], "wires": [...]}` for circuit
//! rules, `{"sites": [...]}` for `Scirc`, and `{"vertices": [...], "stubs":
//! [...]}` for ZX rules. The ZX rule id `T` is accepted as a no-op step, since
//! diagrams are already stored up to topology.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::circuit_rules::{
    apply_circ_rule, circ_rule_catalog_bounded, find_circ_matches, find_scirc_sites, splice_scirc, CircuitBinding,
    ScircSite,
};
use crate::error::{Error, Result};
use crate::matrix::{mat_proportional, ExactMatrix, Verdict};
use crate::rules::{Bounds, Direction, Params};
use crate::stab::{equiv_exact, equiv_tableau};
use crate::zx::{zx_iso, zx_to_matrix, ZxDiagram};
use crate::zx_rules::{apply_zx_rule, find_zx_matches, zx_rule_catalog_bounded, ZxBinding};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScriptKind {
    Circuit,
    Zx,
}

/// A derivation script as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Script {
    pub kind: ScriptKind,
    pub initial: String,
    pub target: String,
    #[serde(default)]
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub rule: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub variant: usize,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
    #[serde(default)]
    pub direction: Direction,
    #[serde(default)]
    pub binding: Anchor,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

/// Where a step applies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Anchor {
    Match {
        #[serde(rename = "match")]
        index: usize,
    },
    Sites {
        sites: Vec<ScircSite>,
    },
    Zx(ZxBinding),
    Circuit(CircuitBinding),
}

impl Default for Anchor {
    fn default() -> Self {
        Anchor::Match { index: 0 }
    }
}

impl Script {
    pub fn from_json(text: &str) -> Result<Script> {
        serde_json::from_str(text).map_err(|e| Error::InvalidScript(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scripts serialize")
    }
}

/// Outcome of one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    /// 1-based position in the script.
    pub step: usize,
    pub rule: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Outcome {
    Accepted,
    /// `step` is `None` when every step applied but the result is not the target.
    Rejected { step: Option<usize>, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub steps: Vec<StepReport>,
    pub outcome: Outcome,
}

impl Report {
    pub fn accepted(&self) -> bool {
        self.outcome == Outcome::Accepted
    }

    fn reject(mut steps: Vec<StepReport>, step: usize, rule: &str, reason: String) -> Report {
        steps.push(StepReport { step, rule: rule.into(), ok: false, detail: reason.clone() });
        Report { steps, outcome: Outcome::Rejected { step: Some(step), reason } }
    }

    /// Human-readable lines, one per step plus a verdict.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let tag = if s.ok { "OK  " } else { "FAIL" };
            out.push_str(&format!("step {:>2} {tag} {}: {}\n", s.step, s.rule, s.detail));
        }
        match &self.outcome {
            Outcome::Accepted => out.push_str("accepted\n"),
            Outcome::Rejected { step: Some(k), reason } => out.push_str(&format!("rejected at step {k}: {reason}\n")),
            Outcome::Rejected { step: None, reason } => out.push_str(&format!("rejected: {reason}\n")),
        }
        out
    }
}

fn text(s: &str) -> String {
    s.replace(';', "\n")
}

/// Parses the script's endpoints and checks it. Unreadable endpoints are an
/// error; everything else is a verdict.
pub fn verify_script(script: &Script, bounds: Bounds) -> Result<Report> {
    match script.kind {
        ScriptKind::Circuit => {
            let initial = Circuit::parse(&text(&script.initial))?;
            let target = Circuit::parse(&text(&script.target))?;
            Ok(verify_circ_derivation(&initial, &script.steps, &target, bounds))
        }
        ScriptKind::Zx => {
            let initial = ZxDiagram::parse(&text(&script.initial))?.normalize()?;
            let target = ZxDiagram::parse(&text(&script.target))?.normalize()?;
            Ok(verify_zx_derivation(&initial, &script.steps, &target, bounds))
        }
    }
}

/// Circuit equivalence with the exact oracle, falling back to tableaux when
/// the matrices would be too large.
fn circuits_agree(a: &Circuit, b: &Circuit) -> Result<&'static str> {
    match equiv_exact(a, b) {
        Ok(v) if v.is_equivalent() => Ok("exact"),
        Ok(_) => Err(Error::InvalidBinding("result is not proportional to the initial circuit".into())),
        Err(Error::ArityOverflow(..)) | Err(Error::SizeOverflow(..)) => {
            if equiv_tableau(a, b)? {
                Ok("tableau")
            } else {
                Err(Error::InvalidBinding("result has a different stabilizer group than the initial circuit".into()))
            }
        }
        Err(e) => Err(e),
    }
}

/// Applies one circuit step. Match indices resolve against the deterministic
/// match list of `c`.
pub fn apply_circ_step(c: &Circuit, s: &Step, bounds: Bounds) -> Result<Circuit> {
    if s.rule == "Scirc" {
        if s.direction != Direction::Lr {
            return Err(Error::BadParams { rule: s.rule.clone(), msg: "only applies left to right".into() });
        }
        let sites = match &s.binding {
            Anchor::Sites { sites } => sites.clone(),
            Anchor::Match { index } => find_scirc_sites(c, 4)
                .into_iter()
                .nth(*index)
                .ok_or_else(|| Error::InvalidBinding(format!("no site set with index {index}")))?,
            _ => return Err(Error::InvalidBinding("Scirc takes a list of sites".into())),
        };
        return splice_scirc(c, &sites);
    }
    let rule = circ_rule_catalog_bounded(&s.rule, s.variant, &s.params, bounds)?;
    let binding = match &s.binding {
        Anchor::Circuit(b) => b.clone(),
        Anchor::Match { index } => find_circ_matches(c, &rule, s.direction)
            .into_iter()
            .nth(*index)
            .ok_or_else(|| Error::InvalidBinding(format!("no match with index {index}")))?,
        _ => return Err(Error::InvalidBinding("circuit rules take gates and wires".into())),
    };
    apply_circ_rule(c, &rule, s.direction, &binding)
}

/// Checks a circuit derivation.
pub fn verify_circ_derivation(initial: &Circuit, steps: &[Step], target: &Circuit, bounds: Bounds) -> Report {
    let mut out = Vec::new();
    let mut cur = initial.clone();
    for (k, s) in steps.iter().enumerate() {
        let label = step_label(s, true);
        let next = match apply_circ_step(&cur, s, bounds) {
            Ok(n) => n,
            Err(e) => return Report::reject(out, k + 1, &label, e.to_string()),
        };
        match circuits_agree(initial, &next) {
            Ok(oracle) => out.push(StepReport { step: k + 1, rule: label, ok: true, detail: format!("{oracle} oracle agrees") }),
            Err(e) => return Report::reject(out, k + 1, &label, e.to_string()),
        }
        cur = next;
    }
    let outcome = if cur.structurally_equal(target) {
        Outcome::Accepted
    } else {
        Outcome::Rejected { step: None, reason: "final circuit differs from the target".into() }
    };
    Report { steps: out, outcome }
}

fn step_label(s: &Step, with_variant: bool) -> String {
    let mut l = s.rule.clone();
    if with_variant && s.variant != 0 {
        l.push_str(&format!("[{}]", s.variant));
    }
    if !s.params.is_empty() {
        let ps: Vec<String> = s.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        l.push_str(&format!("({})", ps.join(",")));
    }
    l.push_str(&format!(" {}", s.direction));
    l
}

fn zx_step(d: &ZxDiagram, s: &Step, bounds: Bounds) -> Result<ZxDiagram> {
    if s.rule == "T" {
        return Ok(d.clone());
    }
    if s.variant != 0 {
        return Err(Error::BadParams { rule: s.rule.clone(), msg: "ZX rules have no variants".into() });
    }
    let rule = zx_rule_catalog_bounded(&s.rule, &s.params, bounds)?;
    let binding = match &s.binding {
        Anchor::Zx(b) => b.clone(),
        Anchor::Match { index } => find_zx_matches(d, &rule, s.direction)?
            .into_iter()
            .nth(*index)
            .ok_or_else(|| Error::InvalidBinding(format!("no match with index {index}")))?,
        _ => return Err(Error::InvalidBinding("ZX rules take vertices and stubs".into())),
    };
    apply_zx_rule(d, &rule, s.direction, &binding)
}

/// Checks a ZX derivation. Intermediates too large to evaluate are reported
/// as unchecked rather than failed.
pub fn verify_zx_derivation(initial: &ZxDiagram, steps: &[Step], target: &ZxDiagram, bounds: Bounds) -> Report {
    let reference: Option<ExactMatrix> = zx_to_matrix(initial).ok();
    let mut out = Vec::new();
    let mut cur = initial.clone();
    for (k, s) in steps.iter().enumerate() {
        let label = step_label(s, false);
        let next = match zx_step(&cur, s, bounds) {
            Ok(n) => n,
            Err(e) => return Report::reject(out, k + 1, &label, e.to_string()),
        };
        let detail = match (&reference, zx_to_matrix(&next)) {
            (Some(r), Ok(m)) => match mat_proportional(r, &m) {
                Ok(Verdict::Different { row, col }) => {
                    return Report::reject(out, k + 1, &label, format!("result differs from the initial at ({row}, {col})"))
                }
                Ok(_) => "exact oracle agrees".to_string(),
                Err(e) => return Report::reject(out, k + 1, &label, e.to_string()),
            },
            _ => "too large for the exact oracle".to_string(),
        };
        out.push(StepReport { step: k + 1, rule: label, ok: true, detail });
        cur = next;
    }
    let outcome = if zx_iso(&cur, target) {
        Outcome::Accepted
    } else {
        Outcome::Rejected { step: None, reason: "final diagram is not isomorphic to the target".into() }
    };
    Report { steps: out, outcome }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_script_accepts_equal_endpoints() {
        let s = Script::from_json(r#"{"kind":"circuit","initial":"input a; h a; output a","target":"input a; h a; output a"}"#)
            .unwrap();
        assert!(verify_script(&s, Bounds::default()).unwrap().accepted());
        let z = Script::from_json(r#"{"kind":"zx","initial":"node 0 in 0; node 1 out 0; edge 0 1","target":"node 0 in 0; node 1 out 0; edge 0 1","steps":[]}"#)
            .unwrap();
        assert!(verify_script(&z, Bounds::default()).unwrap().accepted());
    }

    #[test]
    fn match_anchors_and_final_check() {
        let s = Script::from_json(
            r#"{"kind":"circuit","initial":"input a; rz a 1; rz a 1; output a","target":"input a; rz a 2; output a",
                "steps":[{"rule":"S6circ","params":{"alpha":1,"beta":1},"binding":{"match":0}}]}"#,
        )
        .unwrap();
        let r = verify_script(&s, Bounds::default()).unwrap();
        assert!(r.accepted(), "{}", r.to_text());
        let mut wrong = s.clone();
        wrong.target = "input a; rz a 3; output a".into();
        let r = verify_script(&wrong, Bounds::default()).unwrap();
        assert_eq!(r.outcome, Outcome::Rejected { step: None, reason: "final circuit differs from the target".into() });
    }

    #[test]
    fn failing_step_is_named() {
        let s = Script::from_json(
            r#"{"kind":"circuit","initial":"input a; h a; output a","target":"input a; h a; output a",
                "steps":[{"rule":"S6circ","binding":{"match":0}}]}"#,
        )
        .unwrap();
        let r = verify_script(&s, Bounds::default()).unwrap();
        assert!(matches!(r.outcome, Outcome::Rejected { step: Some(1), .. }));
        assert!(r.to_text().contains("FAIL"));
    }

    #[test]
    fn anchors_parse_by_shape() {
        let a: Anchor = serde_json::from_str(r#"{"match":2}"#).unwrap();
        assert_eq!(a, Anchor::Match { index: 2 });
        let a: Anchor = serde_json::from_str(r#"{"vertices":[1],"stubs":[0,2]}"#).unwrap();
        assert!(matches!(a, Anchor::Zx(_)));
        let a: Anchor = serde_json::from_str(r#"{"gates":[0],"wires":[{"input":0}]}"#).unwrap();
        assert!(matches!(a, Anchor::Circuit(_)));
        assert!(Script::from_json(r#"{"kind":"circuit","initial":"","target":"","bogus":1}"#).is_err());
    }
}
