//! Points and affine transforms in world millimetres.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A 3D point or vector in world millimetres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn sub(&self, other: &Point3) -> Point3 {
        Point3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn add(&self, other: &Point3) -> Point3 {
        Point3::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    pub fn scale(&self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        self.sub(other).norm()
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

/// A 4×4 homogeneous affine mapping voxel indices to world millimetres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub m: [[f64; 4]; 4],
}

impl Affine {
    pub fn new(m: [[f64; 4]; 4]) -> Self {
        Affine { m }
    }

    pub fn identity() -> Self {
        Affine::from_diagonal_spacing([1.0, 1.0, 1.0])
    }

    /// Axis-aligned affine: voxel index scaled by per-axis spacing, no offset.
    pub fn from_diagonal_spacing(spacing: [f64; 3]) -> Self {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = spacing[0];
        m[1][1] = spacing[1];
        m[2][2] = spacing[2];
        m[3][3] = 1.0;
        Affine { m }
    }

    /// Maps a (possibly fractional) voxel index to world mm.
    pub fn apply(&self, v: [f64; 3]) -> Point3 {
        let m = &self.m;
        Point3::new(
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2] + m[0][3],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2] + m[1][3],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2] + m[2][3],
        )
    }

    pub fn translated(&self, t: [f64; 3]) -> Affine {
        let mut m = self.m;
        m[0][3] += t[0];
        m[1][3] += t[1];
        m[2][3] += t[2];
        Affine { m }
    }

    /// Column `i` of the 3×3 linear part (the world direction of voxel axis `i`).
    pub fn axis_direction(&self, i: usize) -> [f64; 3] {
        [self.m[0][i], self.m[1][i], self.m[2][i]]
    }

    /// Inverse via Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Affine> {
        let mut a = self.m;
        let mut inv = Affine::identity().m;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            if a[pivot][col].abs() < 1e-12 {
                return Err(Error::SingularAffine);
            }
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let d = a[col][col];
            for k in 0..4 {
                a[col][k] /= d;
                inv[col][k] /= d;
            }
            for row in 0..4 {
                if row != col {
                    let f = a[row][col];
                    for k in 0..4 {
                        a[row][k] -= f * a[col][k];
                        inv[row][k] -= f * inv[col][k];
                    }
                }
            }
        }
        Ok(Affine { m: inv })
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }
}
