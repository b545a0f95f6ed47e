//! Angular FFTs on the rings of a polar grid.

use crate::{par, C64};
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub(crate) struct RingFft {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl RingFft {
    pub(crate) fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        RingFft {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    /// Values on every ring to Fourier coefficients `c_m` with
    /// `v(θ_k) = Σ_m c_m e^{imθ_k}`, ring by ring.
    pub(crate) fn forward_rings(&self, values: &[C64]) -> Vec<C64> {
        let mut out = values.to_vec();
        let scale = 1.0 / self.len as f64;
        par::for_each_chunk_mut(&mut out, self.len, |_, ring| {
            self.forward.process(ring);
            for c in ring.iter_mut() {
                *c *= scale;
            }
        });
        out
    }

    pub(crate) fn inverse_rings(&self, modes: &[C64]) -> Vec<C64> {
        let mut out = modes.to_vec();
        par::for_each_chunk_mut(&mut out, self.len, |_, ring| self.inverse.process(ring));
        out
    }
}

/// Signed frequency stored in FFT slot `slot`; the Nyquist slot maps to `−len/2`.
pub(crate) fn mode_of(slot: usize, len: usize) -> i64 {
    if slot < len / 2 {
        slot as i64
    } else {
        slot as i64 - len as i64
    }
}

pub(crate) fn slot_of(mode: i64, len: usize) -> usize {
    mode.rem_euclid(len as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slots_roundtrip() {
        for m in -8..8 {
            assert_eq!(mode_of(slot_of(m, 16), 16), m);
        }
    }

    #[test]
    fn recovers_single_mode() {
        let n = 16;
        let fft = RingFft::new(n);
        let vals: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(2.0, -3.0 * 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        let modes = fft.forward_rings(&vals);
        for (s, c) in modes.iter().enumerate() {
            let want = if mode_of(s, n) == -3 { 2.0 } else { 0.0 };
            assert!((c.norm() - want).abs() < 1e-12);
        }
        let back = fft.inverse_rings(&modes);
        for (a, b) in back.iter().zip(&vals) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
