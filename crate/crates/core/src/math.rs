//! Small numeric helpers shared by the geometry modules: a Hamilton
//! quaternion in `(w, x, y, z)` storage order and a symmetric 2×2 matrix.

use glam::{DMat3, DVec3};

use crate::error::{Error, Result};

/// Unit quaternion in Hamilton convention, stored `(w, x, y, z)` to match
/// the COLMAP and splat-PLY field order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const IDENTITY: Quat = Quat {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Scales to unit length. A zero-norm input has no direction and is
    /// rejected.
    pub fn normalized(&self) -> Result<Quat> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::validation("cannot normalize zero-norm quaternion"));
        }
        Ok(Quat::new(self.w / n, self.x / n, self.y / n, self.z / n))
    }

    /// Returns the double-cover representative with `w >= 0`.
    pub fn canonicalized(&self) -> Quat {
        if self.w < 0.0 {
            Quat::new(-self.w, -self.x, -self.y, -self.z)
        } else {
            *self
        }
    }

    /// Rotation matrix of a unit quaternion.
    pub fn to_mat3(&self) -> DMat3 {
        quat_to_rotmat(self)
    }
}

/// Converts a unit quaternion to its 3×3 rotation matrix.
pub fn quat_to_rotmat(q: &Quat) -> DMat3 {
    let (w, x, y, z) = (q.w, q.x, q.y, q.z);
    // Rows of the standard Hamilton rotation matrix; glam is column-major.
    DMat3::from_cols(
        DVec3::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y + w * z),
            2.0 * (x * z - w * y),
        ),
        DVec3::new(
            2.0 * (x * y - w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z + w * x),
        ),
        DVec3::new(
            2.0 * (x * z + w * y),
            2.0 * (y * z - w * x),
            1.0 - 2.0 * (x * x + y * y),
        ),
    )
}

/// Recovers the quaternion of a rotation matrix, canonicalized to `w >= 0`.
///
/// The input must be orthonormal with determinant +1 within 1e-6.
pub fn rotmat_to_quat(m: &DMat3) -> Result<Quat> {
    const TOL: f64 = 1e-6;
    let should_be_identity = m.transpose() * *m;
    let mut max_dev: f64 = 0.0;
    for c in 0..3 {
        for r in 0..3 {
            let expected = if r == c { 1.0 } else { 0.0 };
            max_dev = max_dev.max((should_be_identity.col(c)[r] - expected).abs());
        }
    }
    if max_dev > TOL {
        return Err(Error::validation(format!(
            "matrix is not orthonormal (max deviation {max_dev:.3e})"
        )));
    }
    if (m.determinant() - 1.0).abs() > TOL {
        return Err(Error::validation(format!(
            "matrix determinant {:.6} is not +1",
            m.determinant()
        )));
    }

    let el = |r: usize, c: usize| m.col(c)[r];
    let trace = el(0, 0) + el(1, 1) + el(2, 2);
    // Shepperd's method: branch on the largest diagonal term for stability.
    let q = if trace > 0.0 {
        let s = (trace + 1.0).sqrt() * 2.0;
        Quat::new(
            0.25 * s,
            (el(2, 1) - el(1, 2)) / s,
            (el(0, 2) - el(2, 0)) / s,
            (el(1, 0) - el(0, 1)) / s,
        )
    } else if el(0, 0) > el(1, 1) && el(0, 0) > el(2, 2) {
        let s = (1.0 + el(0, 0) - el(1, 1) - el(2, 2)).sqrt() * 2.0;
        Quat::new(
            (el(2, 1) - el(1, 2)) / s,
            0.25 * s,
            (el(0, 1) + el(1, 0)) / s,
            (el(0, 2) + el(2, 0)) / s,
        )
    } else if el(1, 1) > el(2, 2) {
        let s = (1.0 + el(1, 1) - el(0, 0) - el(2, 2)).sqrt() * 2.0;
        Quat::new(
            (el(0, 2) - el(2, 0)) / s,
            (el(0, 1) + el(1, 0)) / s,
            0.25 * s,
            (el(1, 2) + el(2, 1)) / s,
        )
    } else {
        let s = (1.0 + el(2, 2) - el(0, 0) - el(1, 1)).sqrt() * 2.0;
        Quat::new(
            (el(1, 0) - el(0, 1)) / s,
            (el(0, 2) + el(2, 0)) / s,
            (el(1, 2) + el(2, 1)) / s,
            0.25 * s,
        )
    };
    Ok(q.normalized()?.canonicalized())
}

/// Symmetric 2×2 matrix stored as its upper triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Sym2 { xx, xy, yy }
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    /// Inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<Sym2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Sym2::new(self.yy / det, -self.xy / det, self.xx / det))
    }

    /// Eigenvalues as `(max, min)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mid = 0.5 * (self.xx + self.yy);
        let half_diff = 0.5 * (self.xx - self.yy);
        let d = (half_diff * half_diff + self.xy * self.xy).sqrt();
        (mid + d, mid - d)
    }

    pub fn add_diag(&self, v: f64) -> Sym2 {
        Sym2::new(self.xx + v, self.xy, self.yy + v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn identity_quat_gives_identity_matrix() {
        let m = Quat::IDENTITY.to_mat3();
        assert!((m - DMat3::IDENTITY).abs_diff_eq(DMat3::ZERO, 1e-15));
    }

    #[test]
    fn ninety_degree_z_rotation() {
        let q = Quat::new(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2);
        let m = q.to_mat3();
        let v = m * DVec3::X;
        assert!(
            (v - DVec3::Y).length() < 1e-12,
            "Rz(90) should map x to y, got {v}"
        );
    }

    #[test]
    fn quat_roundtrip_is_canonical() {
        let q = Quat::new(-0.3, 0.5, -0.4, 0.7).normalized().unwrap();
        let back = rotmat_to_quat(&q.to_mat3()).unwrap();
        // Same rotation up to sign, reported with w >= 0.
        assert!(back.w >= 0.0);
        let qc = q.canonicalized();
        assert!((back.w - qc.w).abs() < 1e-9);
        assert!((back.x - qc.x).abs() < 1e-9);
        assert!((back.y - qc.y).abs() < 1e-9);
        assert!((back.z - qc.z).abs() < 1e-9);
    }

    #[test]
    fn non_rotation_matrix_rejected() {
        let m = DMat3::from_cols(DVec3::X * 2.0, DVec3::Y, DVec3::Z);
        assert!(rotmat_to_quat(&m).is_err());
        let reflection = DMat3::from_cols(-DVec3::X, DVec3::Y, DVec3::Z);
        assert!(rotmat_to_quat(&reflection).is_err());
    }

    #[test]
    fn zero_quat_rejected() {
        assert!(Quat::new(0.0, 0.0, 0.0, 0.0).normalized().is_err());
    }

    #[test]
    fn sym2_eigen_and_inverse() {
        let s = Sym2::new(4.0, 0.0, 1.0);
        assert_eq!(s.eigenvalues(), (4.0, 1.0));
        let inv = s.inverse().unwrap();
        assert_eq!(inv, Sym2::new(0.25, 0.0, 1.0));

        let rot = Sym2::new(2.0, 1.0, 2.0);
        let (l1, l2) = rot.eigenvalues();
        assert!((l1 - 3.0).abs() < 1e-12 && (l2 - 1.0).abs() < 1e-12);
        assert!(Sym2::new(1.0, 1.0, 1.0).inverse().is_none());
    }
}
