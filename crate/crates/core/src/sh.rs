//! Real spherical-harmonics basis for view-dependent splat color,
//! degrees 0 through 3.

use glam::DVec3;

use crate::splat::Gaussian;

pub const SH_C0: f64 = 0.28209479177387814;
pub const SH_C1: f64 = 0.4886025119029199;
pub const SH_C2: [f64; 5] = [
    1.0925484305920792,
    -1.0925484305920792,
    0.31539156525252005,
    -1.0925484305920792,
    0.5462742152960396,
];
pub const SH_C3: [f64; 7] = [
    -0.5900435899266435,
    2.890611442640554,
    -0.4570457994644658,
    0.3731763325901154,
    -0.4570457994644658,
    1.445305721320277,
    -0.5900435899266435,
];

/// Evaluates the splat's color toward the unit direction `dir`.
///
/// Sums the SH expansion per channel, shifts by +0.5, and clamps to [0, 1].
pub fn evaluate_sh(g: &Gaussian, dir: DVec3) -> [f64; 3] {
    let sh = &g.sh_coeffs;
    let mut rgb = [0.0f64; 3];
    for c in 0..3 {
        rgb[c] = SH_C0 * sh[0][c];
    }

    if sh.len() > 1 {
        let (x, y, z) = (dir.x, dir.y, dir.z);
        for c in 0..3 {
            rgb[c] += -SH_C1 * y * sh[1][c] + SH_C1 * z * sh[2][c] - SH_C1 * x * sh[3][c];
        }

        if sh.len() > 4 {
            let (xx, yy, zz) = (x * x, y * y, z * z);
            let (xy, yz, xz) = (x * y, y * z, x * z);
            for c in 0..3 {
                rgb[c] += SH_C2[0] * xy * sh[4][c]
                    + SH_C2[1] * yz * sh[5][c]
                    + SH_C2[2] * (2.0 * zz - xx - yy) * sh[6][c]
                    + SH_C2[3] * xz * sh[7][c]
                    + SH_C2[4] * (xx - yy) * sh[8][c];
            }

            if sh.len() > 9 {
                for c in 0..3 {
                    rgb[c] += SH_C3[0] * y * (3.0 * xx - yy) * sh[9][c]
                        + SH_C3[1] * xy * z * sh[10][c]
                        + SH_C3[2] * y * (4.0 * zz - xx - yy) * sh[11][c]
                        + SH_C3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy) * sh[12][c]
                        + SH_C3[4] * x * (4.0 * zz - xx - yy) * sh[13][c]
                        + SH_C3[5] * z * (xx - yy) * sh[14][c]
                        + SH_C3[6] * x * (xx - 3.0 * yy) * sh[15][c];
                }
            }
        }
    }

    for v in &mut rgb {
        *v = (*v + 0.5).clamp(0.0, 1.0);
    }
    rgb
}

/// Converts a base RGB color into the DC coefficient that reproduces it.
pub fn rgb_to_dc(rgb: [f64; 3]) -> [f64; 3] {
    [
        (rgb[0] - 0.5) / SH_C0,
        (rgb[1] - 0.5) / SH_C0,
        (rgb[2] - 0.5) / SH_C0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Quat;

    fn gaussian_with_sh(sh_coeffs: Vec<[f64; 3]>) -> Gaussian {
        Gaussian {
            position: DVec3::ZERO,
            rotation: Quat::IDENTITY,
            scale: DVec3::ONE,
            opacity: 1.0,
            sh_coeffs,
        }
    }

    #[test]
    fn zero_coefficients_give_mid_gray() {
        let g = gaussian_with_sh(vec![[0.0; 3]; 16]);
        assert_eq!(evaluate_sh(&g, DVec3::X), [0.5, 0.5, 0.5]);
    }

    #[test]
    fn degree_zero_is_direction_independent() {
        let g = gaussian_with_sh(vec![[0.4, -0.2, 1.3]]);
        let a = evaluate_sh(&g, DVec3::X);
        let b = evaluate_sh(&g, DVec3::new(0.0, -1.0, 0.0));
        let c = evaluate_sh(&g, DVec3::new(1.0, 1.0, 1.0).normalize());
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn degree_one_contribution_flips_with_direction() {
        // Small coefficients keep the sum inside [0, 1] so the clamp stays
        // inactive and the odd symmetry is visible around the 0.5 offset.
        let mut sh = vec![[0.0; 3]; 4];
        sh[1] = [0.1, 0.05, -0.08];
        sh[2] = [-0.03, 0.07, 0.02];
        sh[3] = [0.06, -0.04, 0.09];
        let g = gaussian_with_sh(sh);
        let dir = DVec3::new(0.3, -0.5, 0.8).normalize();
        let plus = evaluate_sh(&g, dir);
        let minus = evaluate_sh(&g, -dir);
        for c in 0..3 {
            assert!(
                ((plus[c] - 0.5) + (minus[c] - 0.5)).abs() < 1e-12,
                "degree-1 terms must negate under direction flip"
            );
        }
    }

    #[test]
    fn dc_roundtrip() {
        let rgb = [0.8, 0.1, 0.55];
        let g = gaussian_with_sh(vec![rgb_to_dc(rgb)]);
        let out = evaluate_sh(&g, DVec3::Z);
        for c in 0..3 {
            assert!((out[c] - rgb[c]).abs() < 1e-12);
        }
    }
}
