//! Lowering passes to the CZ + 1-qubit primitive set.

use super::{Circuit, GateKind, GateOp};

fn op(kind: GateKind, targets: &[usize]) -> GateOp {
    GateOp::new(kind, targets.to_vec())
}

/// `H(t) CZ(c, t) H(t)`.
fn cnot_as_cz(control: usize, target: usize) -> [GateOp; 3] {
    [
        op(GateKind::H, &[target]),
        op(GateKind::Cz, &[control, target]),
        op(GateKind::H, &[target]),
    ]
}

/// The 6-CZ Toffoli template on controls `a`, `b` and target `c`.
///
/// This is the textbook 6-CNOT, 7-T network with each CNOT written as
/// `H·CZ·H`. Four CZs couple the target to a control; the final two couple
/// the controls to each other and are the only ones not touching `c`.
pub fn toffoli_template(a: usize, b: usize, c: usize) -> Vec<GateOp> {
    let mut out = Vec::with_capacity(33);
    out.push(op(GateKind::H, &[c]));
    out.extend(cnot_as_cz(b, c));
    out.push(op(GateKind::Tdg, &[c]));
    out.extend(cnot_as_cz(a, c));
    out.push(op(GateKind::T, &[c]));
    out.extend(cnot_as_cz(b, c));
    out.push(op(GateKind::Tdg, &[c]));
    out.extend(cnot_as_cz(a, c));
    out.push(op(GateKind::T, &[b]));
    out.push(op(GateKind::T, &[c]));
    out.push(op(GateKind::H, &[c]));
    out.extend(cnot_as_cz(a, b));
    out.push(op(GateKind::T, &[a]));
    out.push(op(GateKind::Tdg, &[b]));
    out.extend(cnot_as_cz(a, b));
    out
}

fn rewrite(c: &Circuit, mut f: impl FnMut(&GateOp) -> Option<Vec<GateOp>>) -> Circuit {
    let mut out = Circuit::new(c.n_qubits());
    out.set_phase(c.current_phase());
    for (g, phase) in c.iter() {
        match f(g) {
            Some(replacement) => {
                for r in replacement {
                    out.push_tagged(r, phase);
                }
            }
            None => out.push_tagged(g.clone(), phase),
        }
    }
    out
}

/// Replaces every Toffoli by [`toffoli_template`].
pub fn decompose_toffoli(c: &Circuit) -> Circuit {
    rewrite(c, |g| match g.kind {
        GateKind::Toffoli => Some(toffoli_template(g.targets[0], g.targets[1], g.targets[2])),
        _ => None,
    })
}

/// Lowers to CZ plus 1-qubit gates: Toffoli via the template, CNOT as
/// `H·CZ·H`, SWAP as three CNOTs (3 CZ + 6 H). No cancellation is done.
pub fn decompose_to_primitives(c: &Circuit) -> Circuit {
    rewrite(c, |g| {
        let t = &g.targets;
        match g.kind {
            GateKind::Toffoli => Some(toffoli_template(t[0], t[1], t[2])),
            GateKind::Cnot => Some(cnot_as_cz(t[0], t[1]).to_vec()),
            GateKind::Swap => {
                let mut v = Vec::with_capacity(9);
                v.extend(cnot_as_cz(t[0], t[1]));
                v.extend(cnot_as_cz(t[1], t[0]));
                v.extend(cnot_as_cz(t[0], t[1]));
                Some(v)
            }
            _ => None,
        }
    })
}

/// Peephole pass: removes pairs of identical self-inverse gates that are
/// adjacent on their qubits (no intervening op touches any of the
/// targets). Waits act as barriers. Repeats to a fixed point.
pub fn cancel_adjacent_inverses(c: &Circuit) -> Circuit {
    let mut ops: Vec<(GateOp, super::Phase)> = c.iter().map(|(g, p)| (g.clone(), p)).collect();
    loop {
        let mut removed = vec![false; ops.len()];
        let mut last_on: Vec<Option<usize>> = vec![None; c.n_qubits()];
        let mut changed = false;
        for i in 0..ops.len() {
            let g = &ops[i].0;
            if g.kind.is_wait() {
                last_on.iter_mut().for_each(|l| *l = None);
                continue;
            }
            let prev = last_on[g.targets[0]];
            let cancels = g.kind.is_self_inverse()
                && prev.is_some_and(|j| {
                    let h = &ops[j].0;
                    !removed[j]
                        && h.kind == g.kind
                        && same_support(&h.targets, &g.targets, g.kind)
                        && g.targets.iter().all(|&q| last_on[q] == Some(j))
                });
            if cancels {
                let j = prev.expect("checked");
                removed[i] = true;
                removed[j] = true;
                changed = true;
                // expose whatever preceded the pair on these qubits
                for &q in &g.targets {
                    last_on[q] = (0..j).rev().find(|&k| !removed[k] && touches(&ops[k].0, q));
                }
            } else {
                for &q in &g.targets {
                    last_on[q] = Some(i);
                }
            }
        }
        if !changed {
            break;
        }
        ops = ops
            .into_iter()
            .zip(removed)
            .filter_map(|(o, r)| (!r).then_some(o))
            .collect();
    }
    let mut out = Circuit::new(c.n_qubits());
    out.set_phase(c.current_phase());
    for (g, p) in ops {
        out.push_tagged(g, p);
    }
    out
}

fn touches(g: &GateOp, q: usize) -> bool {
    g.kind.is_wait() || g.targets.contains(&q)
}

fn same_support(a: &[usize], b: &[usize], kind: GateKind) -> bool {
    match kind {
        // symmetric gates
        GateKind::Cz | GateKind::Swap => {
            a.len() == b.len() && a.iter().all(|q| b.contains(q))
        }
        GateKind::Toffoli => a[2] == b[2] && ((a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0])),
        _ => a == b,
    }
}
