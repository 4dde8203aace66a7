//! Deterministic synthetic splat scenes for demos, benchmarks, and tests.

use glam::DVec3;

use crate::math::Quat;
use crate::sh::{rgb_to_dc, SH_C0};
use crate::splat::{Gaussian, SplatCloud};

/// SplitMix64: tiny, seedable, and identical on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

fn random_unit_quat(rng: &mut SplitMix64) -> Quat {
    loop {
        let q = Quat::new(
            rng.range(-1.0, 1.0),
            rng.range(-1.0, 1.0),
            rng.range(-1.0, 1.0),
            rng.range(-1.0, 1.0),
        );
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            return q.normalized().unwrap();
        }
    }
}

/// Builds a colorful scene of `count` gaussians inside the unit ball around
/// the origin, with SH coefficients up to `sh_degree`. Deterministic in
/// `seed`.
pub fn demo_scene(count: usize, sh_degree: usize, seed: u64) -> SplatCloud {
    assert!(count > 0, "scene needs at least one gaussian");
    let mut rng = SplitMix64::new(seed);
    let n_coeffs = (sh_degree + 1) * (sh_degree + 1);
    let mut gaussians = Vec::with_capacity(count);
    for _ in 0..count {
        // Rejection-sample the unit ball.
        let position = loop {
            let p = DVec3::new(
                rng.range(-1.0, 1.0),
                rng.range(-1.0, 1.0),
                rng.range(-1.0, 1.0),
            );
            if p.length() <= 1.0 {
                break p;
            }
        };
        let scale = DVec3::new(
            rng.range(0.02, 0.15),
            rng.range(0.02, 0.15),
            rng.range(0.02, 0.15),
        );
        let base = [
            rng.range(0.1, 0.9),
            rng.range(0.1, 0.9),
            rng.range(0.1, 0.9),
        ];
        let mut sh_coeffs = Vec::with_capacity(n_coeffs);
        sh_coeffs.push(rgb_to_dc(base));
        for _ in 1..n_coeffs {
            // Keep higher-order terms small so colors stay in gamut.
            let amp = 0.15 / SH_C0;
            sh_coeffs.push([
                rng.range(-amp, amp) * SH_C0,
                rng.range(-amp, amp) * SH_C0,
                rng.range(-amp, amp) * SH_C0,
            ]);
        }
        gaussians.push(Gaussian {
            position,
            rotation: random_unit_quat(&mut rng),
            scale,
            opacity: rng.range(0.2, 1.0),
            sh_coeffs,
        });
    }
    SplatCloud::new(gaussians, sh_degree).expect("generated scene is valid")
}
