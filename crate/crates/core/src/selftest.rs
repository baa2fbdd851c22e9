//! Soundness sweeps over the rule catalogs.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::circuit_rules::{candidate_sites, circ_rule_instances, splice_scirc, CircuitRule, ScircFragment, ScircSite};
use crate::error::{Error, Result};
use crate::matrix::mat_proportional;
use crate::random::seeded;
use crate::rules::Bounds;
use crate::stab::{equiv_exact, equiv_tableau};
use crate::zx::zx_to_matrix;
use crate::zx_rules::{zx_rule_instances, ZxRule};

/// Which equivalence check decides circuit equations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Oracle {
    #[default]
    Exact,
    Tableau,
    Both,
}

impl FromStr for Oracle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Oracle::Exact),
            "tableau" => Ok(Oracle::Tableau),
            "both" => Ok(Oracle::Both),
            _ => Err(Error::InvalidScript(format!("unknown oracle {s}"))),
        }
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Oracle::Exact => "exact",
            Oracle::Tableau => "tableau",
            Oracle::Both => "both",
        })
    }
}

/// Verdict for one rule instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleCheck {
    pub family: &'static str,
    pub rule: String,
    pub verdict: String,
    pub ok: bool,
}

/// Compares two circuits with the chosen oracle. The exact oracle falls back
/// to tableaux when the matrices would be too large.
pub fn compare_circuits(a: &Circuit, b: &Circuit, oracle: Oracle) -> Result<(bool, String)> {
    let exact = || match equiv_exact(a, b) {
        Ok(v) => Ok(Some(v)),
        Err(Error::ArityOverflow(..)) | Err(Error::SizeOverflow(..)) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(match oracle {
        Oracle::Tableau => {
            let t = equiv_tableau(a, b)?;
            (t, if t { "equivalent" } else { "different" }.to_string())
        }
        Oracle::Exact => match exact()? {
            Some(v) => (v.is_equivalent(), v.kind().to_string()),
            None => {
                let t = equiv_tableau(a, b)?;
                (t, format!("{} (tableau, too large for exact)", if t { "equivalent" } else { "different" }))
            }
        },
        Oracle::Both => {
            let t = equiv_tableau(a, b)?;
            match exact()? {
                Some(v) if v.is_equivalent() == t => (t, format!("{} / {}", v.kind(), if t { "equivalent" } else { "different" })),
                Some(v) => (false, format!("oracles disagree: exact {} / tableau {t}", v.kind())),
                None => (t, format!("{} (tableau only)", if t { "equivalent" } else { "different" })),
            }
        }
    })
}

pub fn check_zx_rules(rules: &[ZxRule]) -> Vec<RuleCheck> {
    rules
        .iter()
        .map(|r| {
            let v = zx_to_matrix(&r.lhs).and_then(|l| mat_proportional(&l, &zx_to_matrix(&r.rhs)?));
            let (ok, verdict) = match v {
                Ok(v) => (v.is_equivalent(), v.kind().to_string()),
                Err(e) => (false, e.to_string()),
            };
            RuleCheck { family: "zx", rule: r.to_string(), verdict, ok }
        })
        .collect()
}

pub fn check_circ_rules(rules: &[CircuitRule], oracle: Oracle) -> Vec<RuleCheck> {
    rules
        .iter()
        .map(|r| {
            let (ok, verdict) = compare_circuits(&r.lhs, &r.rhs, oracle).unwrap_or_else(|e| (false, e.to_string()));
            RuleCheck { family: "circuit", rule: r.to_string(), verdict, ok }
        })
        .collect()
}

const FRAGMENTS: [ScircFragment; 4] = [
    ScircFragment::PlusControl,
    ScircFragment::ZeroTarget,
    ScircFragment::ControlPostplus,
    ScircFragment::TargetPostzero,
];

fn decorate(rng: &mut impl Rng, wire: &str, out: &mut Vec<String>) {
    for _ in 0..rng.gen_range(0..3) {
        out.push(match rng.gen_range(0..3) {
            0 => format!("h {wire}"),
            1 => format!("rz {wire} {}", rng.gen_range(1..4)),
            _ => format!("rx {wire} {}", rng.gen_range(1..4)),
        });
    }
}

/// A random host two or three wires wide in which a preparation fragment and a
/// postselection fragment of opposite colour sit next to each other on the
/// through wire `w`, with random single-qubit gates everywhere else. `frag`
/// is always one of the two.
///
/// Postselecting first keeps at most two wires live at once, but then the
/// leftover green spider merges two inputs and the splice has no circuit
/// reading. Preparing first needs three wires and splices to a CNOT.
pub fn scirc_host(rng: &mut impl Rng, frag: ScircFragment) -> Circuit {
    let plus_family = matches!(frag, ScircFragment::PlusControl | ScircFragment::TargetPostzero);
    let x = "x";
    let prep = if plus_family {
        [format!("prepplus {x}"), format!("cnot {x} w")]
    } else {
        [format!("prep0 {x}"), format!("cnot w {x}")]
    };
    let post = if plus_family {
        ["cnot w y".to_string(), "post0 y".to_string()]
    } else {
        ["cnot y w".to_string(), "postplus y".to_string()]
    };
    let mut lines = vec!["input w y".to_string()];
    decorate(rng, "y", &mut lines);
    decorate(rng, "w", &mut lines);
    if rng.gen() {
        lines.extend(post);
        lines.extend(prep);
    } else {
        lines.extend(prep);
        lines.extend(post);
    }
    decorate(rng, "w", &mut lines);
    decorate(rng, x, &mut lines);
    lines.push(if rng.gen() { format!("output w {x}") } else { format!("output {x} w") });
    Circuit::parse(&lines.join("\n")).expect("generated host is valid")
}

/// Splices every matching site of `hosts_per_fragment` random hosts per
/// fragment and checks each result. Hosts whose result is not a circuit are
/// reported as skipped, not failed.
pub fn check_scirc(seed: u64, hosts_per_fragment: usize, oracle: Oracle) -> Vec<RuleCheck> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    for frag in FRAGMENTS {
        for _ in 0..hosts_per_fragment {
            let host = scirc_host(&mut rng, frag);
            let sites = candidate_sites(&host);
            let mine: Vec<ScircSite> = sites.iter().copied().filter(|s| s.fragment == frag).collect();
            // Each site of the fragment on its own, then all sites together.
            let mut sets: Vec<Vec<ScircSite>> = mine.iter().map(|s| vec![*s]).collect();
            sets.push(sites.clone());
            for set in sets {
                let at: Vec<String> = set.iter().map(|s| format!("{}@{}", s.fragment, s.gate)).collect();
                let name = format!("Scirc {} in [{}]", at.join(" "), host.to_text().trim().replace('\n', "; "));
                let (ok, verdict) = match splice_scirc(&host, &set) {
                    Ok(c) => compare_circuits(&host, &c, oracle).unwrap_or_else(|e| (false, e.to_string())),
                    Err(Error::NoValidCircuit(_)) => (true, "skipped: no circuit reading".into()),
                    Err(e) => (false, e.to_string()),
                };
                out.push(RuleCheck { family: "scirc", rule: name, verdict, ok });
            }
        }
    }
    out
}

/// All three sweeps with the given bounds.
pub fn selftest(bounds: Bounds, oracle: Oracle, seed: u64) -> Vec<RuleCheck> {
    let mut out = check_zx_rules(&zx_rule_instances(bounds));
    out.extend(check_circ_rules(&circ_rule_instances(bounds), oracle));
    out.extend(check_scirc(seed, 25, oracle));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit_rules::circ_rule_catalog;
    use crate::rules::Params;

    #[test]
    fn a_broken_rule_is_named() {
        let mut r = circ_rule_catalog("Hcirc", 0, &Params::new()).unwrap();
        r.rhs = Circuit::parse("input r0\nrz r0 1\nrx r0 1\noutput r0").unwrap();
        let checks = check_circ_rules(&[r], Oracle::Both);
        assert!(!checks[0].ok);
        assert!(checks[0].rule.starts_with("Hcirc"));
    }

    #[test]
    fn hosts_contain_their_fragment() {
        let mut rng = seeded(3);
        for frag in FRAGMENTS {
            for _ in 0..20 {
                let h = scirc_host(&mut rng, frag);
                assert!(candidate_sites(&h).iter().any(|s| s.fragment == frag), "{frag}\n{}", h.to_text());
                assert!(h.labels().len() <= 3);
            }
        }
    }
}
