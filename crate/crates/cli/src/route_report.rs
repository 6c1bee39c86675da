//! SWAP overhead and QEC time per code and layout.

use std::fmt::Write as _;

use logiq::circuit::{decompose_to_primitives, schedule, GateKind};
use logiq::layout::{route, LayoutKind, Placement};
use logiq::qec::{CodeName, QecCode};
use logiq::NoiseParams;

use crate::error::Result;
use crate::spec::layout_for;

#[derive(Debug, Clone, PartialEq)]
pub struct RouteRow {
    pub code: CodeName,
    pub layout: LayoutKind,
    pub n_sites: usize,
    pub swaps: usize,
    pub two_qubit_gates: usize,
    pub qec_time: f64,
}

/// Routes every code on every built-in layout, scheduled at `gate_time`.
pub fn route_rows(gate_time: f64) -> Result<Vec<RouteRow>> {
    let params = NoiseParams::noiseless(gate_time).validated()?;
    let mut rows = Vec::new();
    for name in CodeName::ALL {
        let code = QecCode::new(name);
        for kind in [LayoutKind::AllToAll, LayoutKind::XLayout, LayoutKind::Linear] {
            let g = layout_for(kind, &code)?;
            let routed = route(&code.circuit(0.0)?, &g, &Placement::centered(code.n_qubits(), &g)?)?;
            let prim = decompose_to_primitives(&routed.circuit);
            rows.push(RouteRow {
                code: name,
                layout: kind,
                n_sites: g.n_sites(),
                swaps: routed.swaps,
                two_qubit_gates: prim.count(|k| matches!(k, GateKind::Cz)),
                qec_time: schedule(&prim, &params).active_duration(),
            });
        }
    }
    Ok(rows)
}

pub fn format_rows(rows: &[RouteRow]) -> String {
    let mut s = String::from("code        layout      sites  swaps  cz  qec_time\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<11} {:<11} {:>5}  {:>5}  {:>2}  {:.6}",
            r.code.name(),
            r.layout.name(),
            r.n_sites,
            r.swaps,
            r.two_qubit_gates,
            r.qec_time
        );
    }
    s
}
