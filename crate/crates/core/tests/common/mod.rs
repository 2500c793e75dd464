//! Oracles that avoid the library's own arithmetic: a hand-written Hamilton
//! product on plain arrays and the real 12×12 representation of a 3×3
//! quaternionic matrix.

#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix4};
use qfuchs_core::{Quaternion, Sp21Matrix, VectorH21};

pub type Q4 = [f64; 4];

pub fn qmul(a: Q4, b: Q4) -> Q4 {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

pub fn qadd(a: Q4, b: Q4) -> Q4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn qscale(a: Q4, s: f64) -> Q4 {
    a.map(|c| c * s)
}

pub fn qpow4(a: Q4) -> Q4 {
    let a2 = qmul(a, a);
    qmul(a2, a2)
}

pub fn arr(q: &Quaternion<f64>) -> Q4 {
    [q.w, q.x, q.y, q.z]
}

/// Left multiplication by `q` as a real 4×4 matrix on `(w, x, y, z)`.
fn left_mult(q: Q4) -> Matrix4<f64> {
    let [w, x, y, z] = q;
    Matrix4::new(w, -x, -y, -z, x, w, -z, y, y, z, w, -x, z, -y, x, w)
}

/// Real 12×12 matrix of `v ↦ A v` on `H³ ≅ R¹²`.
pub fn real_rep(a: &Sp21Matrix<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(12, 12);
    for r in 0..3 {
        for c in 0..3 {
            let block = left_mult(arr(a.entry(r, c)));
            m.view_mut((4 * r, 4 * c), (4, 4)).copy_from(&block);
        }
    }
    m
}

/// Reads the quaternion entries back from a real representation.
pub fn from_real_rep(m: &DMatrix<f64>) -> Sp21Matrix<f64> {
    Sp21Matrix(std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            // first column of the block is q·1 = (w, x, y, z)
            Quaternion::new(
                m[(4 * r, 4 * c)],
                m[(4 * r + 1, 4 * c)],
                m[(4 * r + 2, 4 * c)],
                m[(4 * r + 3, 4 * c)],
            )
        })
    }))
}

/// Numerical inverse through LU on the real representation.
pub fn numeric_inverse(a: &Sp21Matrix<f64>) -> Sp21Matrix<f64> {
    let inv = real_rep(a).lu().try_inverse().expect("invertible");
    from_real_rep(&inv)
}

pub fn max_abs_diff(a: &Sp21Matrix<f64>, b: &Sp21Matrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..3 {
        for c in 0..3 {
            let (x, y) = (arr(a.entry(r, c)), arr(b.entry(r, c)));
            for k in 0..4 {
                worst = worst.max((x[k] - y[k]).abs());
            }
        }
    }
    worst
}

/// `C A C⁻¹` with `C⁻¹` from LU, not from the library's inverse formula.
pub fn conjugate_numeric(a: &Sp21Matrix<f64>, c: &Sp21Matrix<f64>) -> Sp21Matrix<f64> {
    let m = real_rep(c) * real_rep(a) * real_rep(&numeric_inverse(c));
    from_real_rep(&m)
}

pub fn max_imag(a: &Sp21Matrix<f64>) -> f64 {
    (0..3)
        .flat_map(|r| (0..3).map(move |c| (r, c)))
        .map(|(r, c)| {
            let q = a.entry(r, c);
            q.x.abs().max(q.y.abs()).max(q.z.abs())
        })
        .fold(0.0, f64::max)
}

pub fn qconj(a: Q4) -> Q4 {
    [a[0], -a[1], -a[2], -a[3]]
}

pub fn qnorm(a: Q4) -> f64 {
    a.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub fn vec3(v: &VectorH21<f64>) -> [Q4; 3] {
    [arr(&v.0[0]), arr(&v.0[1]), arr(&v.0[2])]
}

pub fn vnorm(v: &[Q4; 3]) -> f64 {
    v.iter()
        .map(|q| q.iter().map(|c| c * c).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}

/// `conj(q1) p3 + conj(q2) p2 + conj(q3) p1`.
pub fn herm(p: &[Q4; 3], q: &[Q4; 3]) -> Q4 {
    let t1 = qmul(qconj(q[0]), p[2]);
    let t2 = qmul(qconj(q[1]), p[1]);
    let t3 = qmul(qconj(q[2]), p[0]);
    qadd(qadd(t1, t2), t3)
}

pub fn mat_vec(a: &Sp21Matrix<f64>, v: &[Q4; 3]) -> [Q4; 3] {
    std::array::from_fn(|r| (0..3).fold([0.0; 4], |acc, c| qadd(acc, qmul(arr(a.entry(r, c)), v[c]))))
}
