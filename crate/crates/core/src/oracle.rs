//! Monte-Carlo quantum-trajectory simulator, used to cross-check the
//! density-matrix engine.
//!
//! Each shot evolves a state vector through the same schedule:
//! a faulty gate applies `U` with probability `1-p` and nothing otherwise;
//! amplitude damping is unravelled into a jump `|0><1|` (probability
//! `gamma * P(1)`) or the no-jump operator `diag(1, sqrt(1-gamma))`;
//! phase damping applies `Z` with probability `1-alpha`; SPAM flips apply
//! `X`. Averaging over shots reproduces every channel exactly.
//!
//! Randomness: shot `i` draws from ChaCha20 keyed with the little-endian
//! bytes of the seed (rest of the key zero) on stream `i`. A uniform double
//! is `(next_u64 >> 11) * 2^-53`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::circuit::{schedule_with, Circuit, OneQubitTiming, Schedule};
use crate::error::{validation, Result};
use crate::layout::CouplingGraph;
use crate::matrix::{ComplexMatrix, C64, ZERO};
use crate::noise::{damping_gamma, NoiseParams};
use crate::qec::{LogicalArm, QecCode};
use crate::qstate::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrajectoryConfig {
    pub n_shots: usize,
    pub rng_seed: u64,
}

impl TrajectoryConfig {
    pub fn new(n_shots: usize, rng_seed: u64) -> Result<Self> {
        if n_shots == 0 {
            return Err(validation("n_shots must be >= 1"));
        }
        Ok(Self { n_shots, rng_seed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_shots: usize,
}

impl Estimate {
    /// `|mean - value| <= k * stderr`, with an absolute floor for
    /// zero-variance estimates.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr + 1e-12
    }
}

/// The shot-`i` random stream.
pub struct ShotRng(ChaCha20Rng);

impl ShotRng {
    pub fn new(seed: u64, shot: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(shot);
        Self(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Fidelity target: `state` on `qubits` (in order), anything elsewhere.
#[derive(Debug, Clone)]
pub struct Target {
    pub state: PureState,
    pub qubits: Vec<usize>,
}

/// Everything a shot needs, precomputed once.
struct Plan {
    n: usize,
    layers: Vec<PlannedLayer>,
    prep_flip: f64,
    meas_flip: f64,
    meas_sites: Vec<usize>,
}

struct PlannedLayer {
    gates: Vec<(ComplexMatrix, Vec<usize>, f64)>,
    /// `(gamma, 1 - alpha)` when the layer has nonzero duration.
    idle: Option<(f64, f64)>,
}

impl Plan {
    fn new(s: &Schedule, params: &NoiseParams, meas_sites: Vec<usize>) -> Self {
        let layers = s
            .layers
            .iter()
            .map(|l| PlannedLayer {
                gates: l
                    .gates()
                    .filter_map(|g| g.kind.matrix().map(|m| (m, g.targets.clone(), params.gate_error(g.arity()))))
                    .collect(),
                idle: (l.duration > 0.0).then(|| {
                    let gamma = damping_gamma(l.duration, params.t1);
                    let lambda = params.t2_convention.coherence_factor(l.duration, params.t2);
                    // alpha = (1 + lambda) / 2
                    (gamma, 0.5 * (1.0 - lambda))
                }),
            })
            .collect();
        Self {
            n: s.n_qubits,
            layers,
            prep_flip: params.spam.prep_flip,
            meas_flip: params.spam.meas_flip,
            meas_sites,
        }
    }
}

fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

fn apply_op(psi: &mut [C64], op: &ComplexMatrix, targets: &[usize], n: usize) {
    let k = targets.len();
    let masks: Vec<usize> = targets.iter().map(|&q| bit(n, q)).collect();
    let all: usize = masks.iter().sum();
    let local = 1 << k;
    let offsets: Vec<usize> = (0..local)
        .map(|l| (0..k).filter(|j| l >> (k - 1 - j) & 1 == 1).map(|j| masks[j]).sum())
        .collect();
    let mut buf = vec![ZERO; local];
    for base in 0..psi.len() {
        if base & all != 0 {
            continue;
        }
        for (b, &o) in buf.iter_mut().zip(&offsets) {
            *b = psi[base | o];
        }
        for (r, &o) in offsets.iter().enumerate() {
            psi[base | o] = (0..local).map(|c| op[(r, c)] * buf[c]).sum();
        }
    }
}

fn flip(psi: &mut [C64], q: usize, n: usize) {
    let m = bit(n, q);
    for i in 0..psi.len() {
        if i & m == 0 {
            psi.swap(i, i | m);
        }
    }
}

fn phase_flip(psi: &mut [C64], q: usize, n: usize) {
    let m = bit(n, q);
    psi.iter_mut().enumerate().filter(|(i, _)| i & m != 0).for_each(|(_, a)| *a = -*a);
}

fn renormalize(psi: &mut [C64]) {
    let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        psi.iter_mut().for_each(|a| *a /= norm);
    }
}

fn damp(psi: &mut [C64], q: usize, n: usize, gamma: f64, rng: &mut ShotRng) {
    if gamma == 0.0 {
        return;
    }
    let m = bit(n, q);
    let p1: f64 = psi.iter().enumerate().filter(|(i, _)| i & m != 0).map(|(_, a)| a.norm_sqr()).sum();
    if rng.uniform() < gamma * p1 {
        for i in 0..psi.len() {
            if i & m == 0 {
                psi[i] = psi[i | m];
                psi[i | m] = ZERO;
            }
        }
    } else {
        let s = (1.0 - gamma).sqrt();
        psi.iter_mut().enumerate().filter(|(i, _)| i & m != 0).for_each(|(_, a)| *a *= s);
    }
    renormalize(psi);
}

fn overlap(psi: &[C64], target: &Target, n: usize) -> f64 {
    let k = target.qubits.len();
    let masks: Vec<usize> = target.qubits.iter().map(|&q| bit(n, q)).collect();
    let all: usize = masks.iter().sum();
    let amps = target.state.amplitudes();
    let mut total = 0.0;
    for rest in 0..psi.len() {
        if rest & all != 0 {
            continue;
        }
        let mut acc = ZERO;
        for (l, a) in amps.iter().enumerate() {
            let idx = (0..k).filter(|j| l >> (k - 1 - j) & 1 == 1).fold(rest, |i, j| i | masks[j]);
            acc += a.conj() * psi[idx];
        }
        total += acc.norm_sqr();
    }
    total
}

fn run_shot(plan: &Plan, initial: &[C64], target: &Target, rng: &mut ShotRng) -> f64 {
    let n = plan.n;
    let mut psi = initial.to_vec();
    if plan.prep_flip > 0.0 {
        for q in 0..n {
            if rng.uniform() < plan.prep_flip {
                flip(&mut psi, q, n);
            }
        }
    }
    for layer in &plan.layers {
        for (u, targets, p) in &layer.gates {
            if *p > 0.0 && rng.uniform() < *p {
                continue;
            }
            apply_op(&mut psi, u, targets, n);
        }
        if let Some((gamma, p_z)) = layer.idle {
            for q in 0..n {
                damp(&mut psi, q, n, gamma, rng);
                if p_z > 0.0 && rng.uniform() < p_z {
                    phase_flip(&mut psi, q, n);
                }
            }
        }
    }
    if plan.meas_flip > 0.0 {
        for &q in &plan.meas_sites {
            if rng.uniform() < plan.meas_flip {
                flip(&mut psi, q, n);
            }
        }
    }
    overlap(&psi, target, n)
}

/// Pairwise sum; the split points depend only on the length.
fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        xs.iter().sum()
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

fn estimate(samples: &[f64]) -> Estimate {
    let n = samples.len();
    let mean = pairwise_sum(samples) / n as f64;
    let stderr = if n > 1 {
        let dev: Vec<f64> = samples.iter().map(|x| (x - mean).powi(2)).collect();
        (pairwise_sum(&dev) / (n - 1) as f64 / n as f64).sqrt()
    } else {
        0.0
    };
    Estimate { mean, stderr, n_shots: n }
}

fn sample(plan: &Plan, initial: &PureState, target: &Target, cfg: &TrajectoryConfig) -> Estimate {
    let init = initial.amplitudes();
    let samples: Vec<f64> = (0..cfg.n_shots)
        .into_par_iter()
        .map(|i| run_shot(plan, init, target, &mut ShotRng::new(cfg.rng_seed, i as u64)))
        .collect();
    estimate(&samples)
}

/// Estimates the fidelity of `target` after running a scheduled circuit
/// from `initial`. SPAM measurement flips act on the target qubits.
pub fn sample_schedule(
    s: &Schedule,
    initial: &PureState,
    target: &Target,
    params: &NoiseParams,
    cfg: &TrajectoryConfig,
) -> Result<Estimate> {
    if initial.n_qubits() != s.n_qubits {
        return Err(validation(format!(
            "schedule is over {} qubits, state has {}",
            s.n_qubits,
            initial.n_qubits()
        )));
    }
    if target.state.n_qubits() != target.qubits.len() {
        return Err(validation("target state size does not match its qubit list"));
    }
    crate::matrix::check_targets(s.n_qubits, &target.qubits)?;
    let plan = Plan::new(s, params, target.qubits.clone());
    Ok(sample(&plan, initial, target, cfg))
}

/// Trajectory estimate of the fidelity of the whole register against
/// `target` after `c` (default scheduling).
pub fn sample_fidelity(
    c: &Circuit,
    initial: &PureState,
    target: &PureState,
    params: &NoiseParams,
    cfg: &TrajectoryConfig,
) -> Result<Estimate> {
    let s = schedule_with(c, params, OneQubitTiming::default());
    let t = Target {
        state: target.clone(),
        qubits: (0..c.n_qubits()).collect(),
    };
    sample_schedule(&s, initial, &t, params, cfg)
}

/// Trajectory estimate of the logical-arm fidelity of a gain experiment.
pub fn sample_logical_fidelity(
    code: &QecCode,
    input: &PureState,
    memory_time: f64,
    params: &NoiseParams,
    layout: &CouplingGraph,
    timing: OneQubitTiming,
    cfg: &TrajectoryConfig,
) -> Result<Estimate> {
    let arm = LogicalArm::new(code, layout, timing)?.prepare(memory_time, params)?;
    let target = Target {
        state: input.clone(),
        qubits: vec![arm.data_out],
    };
    sample_schedule(&arm.schedule, &arm.initial_state(input)?, &target, params, cfg)
}
