//! Plain-text circuit format.
//!
//! One statement per line; `#` starts a comment.
//!
//! ```text
//! qubits 3            # optional, must precede gates; else max target + 1
//! phase encode        # tags following gates: encode | memory | detect_correct | decode
//! cnot 0 1            # gate target [target...]
//! rx(0.785398) 2      # parameterized gates take the angle in parentheses
//! wait(0.5)           # whole-register idle, duration in units of T_c
//! ```
//!
//! Gate names: `x y z h s sdg t tdg rx ry rz cnot cz swap toffoli wait`.

use super::{Circuit, GateKind, GateOp, Phase};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_kind(word: &str, line: usize) -> Result<GateKind> {
    let (name, arg) = match word.find('(') {
        Some(open) => {
            let close = word
                .strip_suffix(')')
                .ok_or_else(|| parse_err(line, format!("unclosed parameter in '{word}'")))?;
            let value: f64 = close[open + 1..]
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("bad parameter in '{word}'")))?;
            (&word[..open], Some(value))
        }
        None => (word, None),
    };
    let name = name.to_ascii_lowercase();
    let kind = match (name.as_str(), arg) {
        ("x", None) => GateKind::X,
        ("y", None) => GateKind::Y,
        ("z", None) => GateKind::Z,
        ("h", None) => GateKind::H,
        ("s", None) => GateKind::S,
        ("sdg", None) => GateKind::Sdg,
        ("t", None) => GateKind::T,
        ("tdg", None) => GateKind::Tdg,
        ("rx", Some(a)) => GateKind::Rx(a),
        ("ry", Some(a)) => GateKind::Ry(a),
        ("rz", Some(a)) => GateKind::Rz(a),
        ("cnot" | "cx", None) => GateKind::Cnot,
        ("cz", None) => GateKind::Cz,
        ("swap", None) => GateKind::Swap,
        ("toffoli" | "ccx", None) => GateKind::Toffoli,
        ("wait", Some(d)) => GateKind::Wait(d),
        ("rx" | "ry" | "rz" | "wait", None) => {
            return Err(parse_err(line, format!("'{name}' needs a parameter")))
        }
        (_, Some(_)) => return Err(parse_err(line, format!("'{name}' takes no parameter"))),
        _ => return Err(parse_err(line, format!("unknown gate '{name}'"))),
    };
    Ok(kind)
}

/// Parses the text format into a circuit.
pub fn parse(src: &str) -> Result<Circuit> {
    let mut declared: Option<usize> = None;
    let mut stmts: Vec<(usize, GateOp, Phase)> = Vec::new();
    let mut phase = Phase::Encode;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut words = body.split_whitespace();
        let head = words.next().expect("non-empty line");
        match head {
            "qubits" => {
                if !stmts.is_empty() {
                    return Err(parse_err(line, "'qubits' must precede gates"));
                }
                let n = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| parse_err(line, "expected a positive qubit count"))?;
                declared = Some(n);
            }
            "phase" => {
                let name = words.next().ok_or_else(|| parse_err(line, "expected a phase name"))?;
                phase = Phase::parse(name).ok_or_else(|| parse_err(line, format!("unknown phase '{name}'")))?;
            }
            _ => {
                let kind = parse_kind(head, line)?;
                let targets = words
                    .map(|w| w.parse::<usize>().map_err(|_| parse_err(line, format!("bad qubit index '{w}'"))))
                    .collect::<Result<Vec<_>>>()?;
                stmts.push((line, GateOp::new(kind, targets), phase));
                continue;
            }
        }
        if words.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
    }
    let inferred = stmts
        .iter()
        .flat_map(|(_, g, _)| g.targets.iter().map(|&q| q + 1))
        .max()
        .unwrap_or(1);
    let n = declared.unwrap_or(inferred);
    let mut c = Circuit::new(n);
    for (line, g, p) in stmts {
        c.set_phase(p);
        c.push(g.kind, &g.targets).map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok(c)
}

/// Renders a circuit in the text format; `parse(&format(c)) == c` up to
/// floating-point formatting of parameters.
pub fn format(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.n_qubits());
    let mut current: Option<Phase> = None;
    for (g, p) in c.iter() {
        if current != Some(p) {
            out.push_str(&format!("phase {}\n", p.name()));
            current = Some(p);
        }
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let src = "qubits 3\nphase encode\ncnot 0 1\nrx(0.5) 2 # trailing comment\n\nphase memory\nwait(0.25)\n";
        let c = parse(src).unwrap();
        assert_eq!(c.n_qubits(), 3);
        assert_eq!(c.ops()[1].kind, GateKind::Rx(0.5));
        assert_eq!(c.phases(), &[Phase::Encode, Phase::Encode, Phase::Memory]);
    }

    #[test]
    fn infers_register_size() {
        let c = parse("h 0\ncz 0 3\n").unwrap();
        assert_eq!(c.n_qubits(), 4);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("h 0\nfoo 1\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, msg: "unknown gate 'foo'".into() });
        assert!(matches!(parse("cnot 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("rx 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("h 0\nqubits 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("qubits 2\nh 5\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn format_round_trips() {
        let mut c = Circuit::new(3);
        c.h(0).cnot(0, 1).push(GateKind::Rz(-1.25), &[2]).unwrap();
        c.set_phase(Phase::Memory).wait(0.125);
        c.set_phase(Phase::DetectCorrect).toffoli(1, 2, 0);
        assert_eq!(parse(&format(&c)).unwrap(), c);
    }
}
