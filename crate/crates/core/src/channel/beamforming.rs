//! Analog beam selection over a quantized phase-shifter codebook.
//!
//! Every codeword has entries `exp(j phi_i) / N` with each `phi_i` drawn from
//! the same finite phase set, so the codebook has `(2^q)^N` members. The best
//! codeword is found exactly without enumeration: for a reference direction
//! `omega`, maximizing `Re(exp(-j omega) h^T f)` separates per element (pick
//! the phase whose rotated gain lies nearest to `omega`). The optimum of
//! `|h^T f|` is attained by that separable choice at `omega = arg(h^T f*)`,
//! and the separable choice only changes at `N * 2^q` arc boundaries, so one
//! sorted sweep over those boundaries visits every candidate.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Phase values available to each phase shifter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseCodebook {
    pub bits: u32,
    /// `false`: `{k pi / 2^q}` covering [0, pi). `true`: `{2 k pi / 2^q}` covering [0, 2 pi).
    pub extended: bool,
}

impl PhaseCodebook {
    pub fn new(bits: u32, extended: bool) -> Self {
        Self { bits, extended }
    }

    pub fn len(&self) -> usize {
        1usize << self.bits
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn phase(&self, k: usize) -> f64 {
        let span = if self.extended { TAU } else { PI };
        k as f64 * span / self.len() as f64
    }

    pub fn phases(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.phase(k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Beamformer {
    pub phases: Vec<f64>,
    /// Magnitude of every entry, `1 / N`.
    pub norm_factor: f64,
}

impl Beamformer {
    pub fn from_phases(phases: Vec<f64>) -> Self {
        let norm_factor = 1.0 / phases.len() as f64;
        Self { phases, norm_factor }
    }

    pub fn weights(&self) -> Vec<Complex64> {
        self.phases
            .iter()
            .map(|&p| Complex64::from_polar(self.norm_factor, p))
            .collect()
    }

    /// `h^T f`.
    pub fn response(&self, h: &[Complex64]) -> Complex64 {
        h.iter()
            .zip(&self.phases)
            .map(|(&hi, &p)| hi * Complex64::from_polar(1.0, p))
            .sum::<Complex64>()
            * self.norm_factor
    }

    /// `|h^T f|`.
    pub fn gain(&self, h: &[Complex64]) -> f64 {
        self.response(h).norm()
    }
}

fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Returns the codebook index chosen for every element by the exact sweep.
pub fn best_codeword(h: &[Complex64], book: PhaseCodebook) -> Vec<usize> {
    let n = h.len();
    let k = book.len();
    let phases = book.phases();
    let unit: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();

    let mut choice = vec![0usize; n];
    // (boundary angle, element, candidate that becomes active)
    let mut events: Vec<(f64, usize, usize)> = Vec::with_capacity(n * k);
    for (i, &hi) in h.iter().enumerate() {
        if hi == Complex64::new(0.0, 0.0) || k == 1 {
            continue;
        }
        let base = hi.arg();
        let mut cands: Vec<(f64, usize)> = (0..k).map(|c| (wrap(base + phases[c]), c)).collect();
        cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        // Boundary m separates cands[m] and cands[m + 1] (circularly).
        let mut last = (f64::NEG_INFINITY, 0);
        for m in 0..k {
            let (a, _) = cands[m];
            let (mut b, next) = cands[(m + 1) % k];
            if m + 1 == k {
                b += TAU;
            }
            let boundary = wrap(0.5 * (a + b));
            events.push((boundary, i, next));
            if boundary > last.0 {
                last = (boundary, next);
            }
        }
        // Active at omega = 0: the arc that opens at the largest boundary.
        choice[i] = last.1;
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let exact = |choice: &[usize]| -> Complex64 {
        h.iter().zip(choice).map(|(&hi, &c)| hi * unit[c]).sum()
    };
    let mut sum = exact(&choice);
    let mut best = choice.clone();
    let mut best_gain = sum.norm();
    for (step, &(_, i, next)) in events.iter().enumerate() {
        let prev = choice[i];
        sum += h[i] * (unit[next] - unit[prev]);
        choice[i] = next;
        if step % 256 == 255 {
            sum = exact(&choice);
        }
        if sum.norm() > best_gain * (1.0 + 1e-12) {
            let g = exact(&choice).norm();
            if g > best_gain * (1.0 + 1e-12) {
                best_gain = g;
                best.copy_from_slice(&choice);
            }
        }
    }
    best
}

/// Selects the codeword maximizing `|h^T f|`.
pub fn select_beamformer(h: &[Complex64], book: PhaseCodebook) -> Beamformer {
    let idx = best_codeword(h, book);
    Beamformer::from_phases(idx.into_iter().map(|k| book.phase(k)).collect())
}
