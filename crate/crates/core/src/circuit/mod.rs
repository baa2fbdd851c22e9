//! Stabilizer circuits over named wires.
//!
//! Text format, one instruction per line, `#` starts a comment:
//!
//! ```text
//! input a b        # optional, must come first
//! prepplus c
//! cnot c b         # control, target
//! rz a 1           # quarter turns mod 4
//! post0 a
//! output b c       # optional, must come last
//! ```
//!
//! Every label is created exactly once (by `input` or a preparation) and
//! destroyed exactly once (by `output` or a postselection).

mod dag;
mod eval;

pub use dag::{Dag, Dst, Src};
pub use eval::{circuit_to_matrix, gate_matrix};

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::phase::Phase;

/// A generator of the circuit signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    /// Wires are (control, target).
    Cnot,
    Swap,
    PrepZero,
    PrepPlus,
    PostZero,
    PostPlus,
    RotZ(Phase),
    RotX(Phase),
    H,
}

impl GateKind {
    /// Number of wires the gate consumes.
    pub fn in_ports(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap => 2,
            GateKind::PrepZero | GateKind::PrepPlus => 0,
            _ => 1,
        }
    }

    /// Number of wires the gate produces.
    pub fn out_ports(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap => 2,
            GateKind::PostZero | GateKind::PostPlus => 0,
            _ => 1,
        }
    }

    /// Number of wire labels the instruction names.
    pub fn wire_count(self) -> usize {
        self.in_ports().max(self.out_ports())
    }

    pub fn is_prep(self) -> bool {
        matches!(self, GateKind::PrepZero | GateKind::PrepPlus)
    }

    pub fn is_post(self) -> bool {
        matches!(self, GateKind::PostZero | GateKind::PostPlus)
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::Cnot => "cnot",
            GateKind::Swap => "swap",
            GateKind::PrepZero => "prep0",
            GateKind::PrepPlus => "prepplus",
            GateKind::PostZero => "post0",
            GateKind::PostPlus => "postplus",
            GateKind::RotZ(_) => "rz",
            GateKind::RotX(_) => "rx",
            GateKind::H => "h",
        }
    }
}

/// One gate application on labeled wires.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instr {
    pub kind: GateKind,
    pub wires: Vec<String>,
}

impl Instr {
    pub fn new(kind: GateKind, wires: &[&str]) -> Self {
        Instr { kind, wires: wires.iter().map(|w| w.to_string()).collect() }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.mnemonic(), self.wires.join(" "))?;
        match self.kind {
            GateKind::RotZ(p) | GateKind::RotX(p) => write!(f, " {p}"),
            _ => Ok(()),
        }
    }
}

/// A validated circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    inputs: Vec<String>,
    outputs: Vec<String>,
    instrs: Vec<Instr>,
}

impl Circuit {
    /// Builds and validates a circuit.
    pub fn new(inputs: Vec<String>, outputs: Vec<String>, instrs: Vec<Instr>) -> Result<Self> {
        let c = Circuit { inputs, outputs, instrs };
        c.validate()?;
        Ok(c)
    }

    /// The circuit with no wires and no gates.
    pub fn empty() -> Self {
        Circuit { inputs: vec![], outputs: vec![], instrs: vec![] }
    }

    /// The identity on `n` wires labeled `q0..`.
    pub fn identity(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
        Circuit { inputs: labels.clone(), outputs: labels, instrs: vec![] }
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// Checks linear use of every label.
    pub fn validate(&self) -> Result<()> {
        let mut live: HashSet<&str> = HashSet::new();
        let mut seen: HashSet<&str> = HashSet::new();
        for w in &self.inputs {
            if !seen.insert(w) {
                return Err(Error::InvalidCircuit(format!("duplicate label {w}")));
            }
            live.insert(w);
        }
        for (i, ins) in self.instrs.iter().enumerate() {
            if ins.wires.len() != ins.kind.wire_count() {
                return Err(Error::InvalidCircuit(format!(
                    "instruction {i} ({}) needs {} wires",
                    ins.kind.mnemonic(),
                    ins.kind.wire_count()
                )));
            }
            if ins.wires.len() == 2 && ins.wires[0] == ins.wires[1] {
                return Err(Error::InvalidCircuit(format!("instruction {i} uses {} twice", ins.wires[0])));
            }
            for w in &ins.wires {
                if ins.kind.is_prep() {
                    if !seen.insert(w) {
                        return Err(Error::InvalidCircuit(format!("duplicate label {w}")));
                    }
                    live.insert(w);
                } else if !live.contains(w.as_str()) {
                    return Err(Error::InvalidCircuit(format!(
                        "instruction {i} ({ins}) uses wire {w} which is not live"
                    )));
                }
                if ins.kind.is_post() {
                    live.remove(w.as_str());
                }
            }
        }
        let mut outs = HashSet::new();
        for w in &self.outputs {
            if !outs.insert(w.as_str()) {
                return Err(Error::InvalidCircuit(format!("label {w} is output twice")));
            }
            if !live.contains(w.as_str()) {
                return Err(Error::InvalidCircuit(format!("output {w} is not live")));
            }
        }
        if let Some(w) = live.iter().find(|w| !outs.contains(*w)) {
            return Err(Error::InvalidCircuit(format!("wire {w} is never destroyed")));
        }
        Ok(())
    }

    /// Parses the text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut inputs: Option<Vec<String>> = None;
        let mut outputs: Option<Vec<String>> = None;
        let mut instrs = Vec::new();
        let mut live: HashSet<String> = HashSet::new();
        let mut seen: HashSet<String> = HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let body = raw.split('#').next().unwrap_or("");
            let toks = tokens(body);
            let Some(&(col, head)) = toks.first() else { continue };
            if outputs.is_some() {
                return parse_err(line, col, "nothing may follow the output line");
            }
            let args = &toks[1..];
            match head {
                "input" => {
                    if inputs.is_some() || !instrs.is_empty() {
                        return parse_err(line, col, "input must be the first instruction");
                    }
                    let mut v = Vec::new();
                    for &(c, w) in args {
                        if !seen.insert(w.to_string()) {
                            return parse_err(line, c, format!("duplicate label {w}"));
                        }
                        live.insert(w.to_string());
                        v.push(w.to_string());
                    }
                    inputs = Some(v);
                }
                "output" => {
                    let mut v = Vec::new();
                    for &(c, w) in args {
                        if !live.remove(w) {
                            return parse_err(line, c, format!("output {w} is not live"));
                        }
                        v.push(w.to_string());
                    }
                    if let Some(w) = live.iter().min() {
                        return parse_err(line, col, format!("wire {w} is never destroyed"));
                    }
                    outputs = Some(v);
                }
                _ => {
                    let kind = match head {
                        "cnot" => GateKind::Cnot,
                        "swap" => GateKind::Swap,
                        "prep0" => GateKind::PrepZero,
                        "prepplus" => GateKind::PrepPlus,
                        "post0" => GateKind::PostZero,
                        "postplus" => GateKind::PostPlus,
                        "h" => GateKind::H,
                        "rz" | "rx" => {
                            if args.len() != 2 {
                                return parse_err(line, col, format!("{head} takes a wire and a phase"));
                            }
                            let (c, k) = args[1];
                            let Ok(k) = k.parse::<i64>() else {
                                return parse_err(line, c, format!("bad phase {k}"));
                            };
                            if head == "rz" {
                                GateKind::RotZ(Phase::new(k))
                            } else {
                                GateKind::RotX(Phase::new(k))
                            }
                        }
                        other => return parse_err(line, col, format!("unknown instruction {other}")),
                    };
                    let wires = &args[..args.len().min(kind.wire_count())];
                    let expected = kind.wire_count() + matches!(kind, GateKind::RotZ(_) | GateKind::RotX(_)) as usize;
                    if args.len() != expected {
                        return parse_err(line, col, format!("{head} takes {} wire(s)", kind.wire_count()));
                    }
                    if wires.len() == 2 && wires[0].1 == wires[1].1 {
                        return parse_err(line, wires[1].0, format!("wire {} used twice", wires[1].1));
                    }
                    for &(c, w) in wires {
                        if kind.is_prep() {
                            if !seen.insert(w.to_string()) {
                                return parse_err(line, c, format!("duplicate label {w}"));
                            }
                            live.insert(w.to_string());
                        } else if !live.contains(w) {
                            return parse_err(line, c, format!("wire {w} is not live"));
                        }
                        if kind.is_post() {
                            live.remove(w);
                        }
                    }
                    instrs.push(Instr { kind, wires: wires.iter().map(|(_, w)| w.to_string()).collect() });
                }
            }
        }
        if outputs.is_none() && !live.is_empty() {
            let w = live.iter().min().unwrap();
            return parse_err(text.lines().count().max(1), 1, format!("wire {w} is never destroyed"));
        }
        Circuit::new(inputs.unwrap_or_default(), outputs.unwrap_or_default(), instrs)
    }

    /// Renders the text format. Inverse of [`Circuit::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if !self.inputs.is_empty() {
            s.push_str(&format!("input {}\n", self.inputs.join(" ")));
        }
        for ins in &self.instrs {
            s.push_str(&format!("{ins}\n"));
        }
        if !self.outputs.is_empty() {
            s.push_str(&format!("output {}\n", self.outputs.join(" ")));
        }
        s
    }

    /// All labels used anywhere in the circuit.
    pub fn labels(&self) -> BTreeSet<String> {
        let mut set: BTreeSet<String> = self.inputs.iter().cloned().collect();
        for ins in &self.instrs {
            set.extend(ins.wires.iter().cloned());
        }
        set
    }

    /// Applies a label renaming.
    pub fn relabel(&self, map: &HashMap<String, String>) -> Result<Self> {
        let f = |w: &String| map.get(w).cloned().unwrap_or_else(|| w.clone());
        Circuit::new(
            self.inputs.iter().map(f).collect(),
            self.outputs.iter().map(f).collect(),
            self.instrs
                .iter()
                .map(|i| Instr { kind: i.kind, wires: i.wires.iter().map(f).collect() })
                .collect(),
        )
    }

    /// Structural equality: same DAG up to label renaming, with inputs and
    /// outputs matched by position.
    pub fn structurally_equal(&self, other: &Circuit) -> bool {
        self.inputs.len() == other.inputs.len()
            && self.outputs.len() == other.outputs.len()
            && Dag::from_circuit(self).canonical_key() == Dag::from_circuit(other).canonical_key()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(b) = start.take() {
                out.push((b + 1, &s[b..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push((b + 1, &s[b..]));
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    Circuit::parse(text)
}

pub fn print_circuit(c: &Circuit) -> String {
    c.to_text()
}

fn fresh_label(base: &str, taken: &BTreeSet<String>) -> String {
    (1..).map(|i| format!("{base}_{i}")).find(|l| !taken.contains(l)).unwrap()
}

/// Sequential composition: `g` after `f`.
pub fn circuit_compose(f: &Circuit, g: &Circuit) -> Result<Circuit> {
    if f.outputs.len() != g.inputs.len() {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose {} outputs with {} inputs",
            f.outputs.len(),
            g.inputs.len()
        )));
    }
    let mut taken: BTreeSet<String> = f.labels();
    taken.extend(g.labels());
    let mut map = HashMap::new();
    for (gi, fo) in g.inputs.iter().zip(&f.outputs) {
        map.insert(gi.clone(), fo.clone());
    }
    for l in g.labels() {
        if !map.contains_key(&l) && f.labels().contains(&l) {
            let n = fresh_label(&l, &taken);
            taken.insert(n.clone());
            map.insert(l, n);
        }
    }
    let g2 = g.relabel_unchecked(&map);
    let mut instrs = f.instrs.clone();
    instrs.extend(g2.instrs);
    Circuit::new(f.inputs.clone(), g2.outputs, instrs)
}

/// Parallel composition with `f`'s wires first.
pub fn circuit_tensor(f: &Circuit, g: &Circuit) -> Result<Circuit> {
    let mut taken: BTreeSet<String> = f.labels();
    taken.extend(g.labels());
    let mut map = HashMap::new();
    let fl = f.labels();
    for l in g.labels() {
        if fl.contains(&l) {
            let n = fresh_label(&l, &taken);
            taken.insert(n.clone());
            map.insert(l, n);
        }
    }
    let g2 = g.relabel_unchecked(&map);
    let mut inputs = f.inputs.clone();
    inputs.extend(g2.inputs);
    let mut outputs = f.outputs.clone();
    outputs.extend(g2.outputs);
    let mut instrs = f.instrs.clone();
    instrs.extend(g2.instrs);
    Circuit::new(inputs, outputs, instrs)
}

impl Circuit {
    fn relabel_unchecked(&self, map: &HashMap<String, String>) -> Circuit {
        let f = |w: &String| map.get(w).cloned().unwrap_or_else(|| w.clone());
        Circuit {
            inputs: self.inputs.iter().map(f).collect(),
            outputs: self.outputs.iter().map(f).collect(),
            instrs: self
                .instrs
                .iter()
                .map(|i| Instr { kind: i.kind, wires: i.wires.iter().map(f).collect() })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TELEPORT: &str = "input a\nprepplus b\nprep0 c\ncnot b c\ncnot a b\npostplus a\npost0 b\noutput c\n";

    #[test]
    fn parse_identity() {
        let c = Circuit::parse("input a\noutput a").unwrap();
        assert_eq!(c.inputs().len(), 1);
        assert_eq!(c.outputs().len(), 1);
        assert_eq!(c.to_text(), "input a\noutput a\n");
    }

    #[test]
    fn parse_teleport() {
        let c = Circuit::parse(TELEPORT).unwrap();
        assert_eq!((c.inputs().len(), c.outputs().len(), c.len()), (1, 1, 6));
        assert_eq!(c.to_text(), TELEPORT);
    }

    #[test]
    fn double_destruction() {
        let e = Circuit::parse("input a\npost0 a\npost0 a").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = Circuit::parse("input a\nrz a x\noutput a").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, col: 6, msg: "bad phase x".into() });
        assert!(Circuit::parse("input a\nfoo a\noutput a").is_err());
        assert!(Circuit::parse("input a\nprep0 a\noutput a").is_err());
        assert!(Circuit::parse("input a b\ncnot a a\noutput a b").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = Circuit::parse("# header\n\ninput a # the wire\nh a\noutput a\n").unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn compose_relabels() {
        let f = Circuit::parse("input a\nprep0 b\ncnot a b\noutput a b").unwrap();
        let g = Circuit::parse("input b a\nswap a b\noutput b a").unwrap();
        let h = circuit_compose(&f, &g).unwrap();
        assert_eq!(h.inputs(), &["a".to_string()]);
        assert_eq!(h.len(), 3);
    }
}
