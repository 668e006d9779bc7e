//! Cohomological data model and the truncated quantum endomorphism.
//!
//! Matrices follow the column convention: column `j` holds the image of the
//! `j`-th basis vector. Exact entries are kept as `Rational64` (complex
//! rationals for the two-point operators) so that the invariant checks are
//! exact; floating point appears only in [`truncated_endomorphism`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::cmath::c64;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

pub type QMatrix = Vec<Vec<Rational64>>;
pub type CQ = Complex<Rational64>;
pub type CQMatrix = Vec<Vec<CQ>>;

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub label: String,
    /// Cohomological (real) degree, even.
    pub deg: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveClass {
    pub label: String,
    pub c1_dot_d: i64,
    pub omega_dot_d: f64,
    pub b_dot_d: f64,
    pub t_d: CQMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohModel {
    pub dim_x: u32,
    pub basis: Vec<BasisElement>,
    pub pairing: QMatrix,
    pub c1_cup: QMatrix,
    pub mu_diag: Vec<Rational64>,
    pub curve_classes: Vec<CurveClass>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationParams {
    pub z: Complex64,
    /// Multiplier `r` applied to every `omega_dot_d`.
    pub scale_omega: f64,
}

impl TruncationParams {
    pub fn new(z: Complex64, scale_omega: f64) -> Result<Self> {
        if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::InvalidInput("z must be nonzero and finite".into()));
        }
        if !(scale_omega > 0.0) || !scale_omega.is_finite() {
            return Err(Error::InvalidInput(format!(
                "scale_omega must be positive, got {scale_omega}"
            )));
        }
        Ok(TruncationParams { z, scale_omega })
    }

    /// `z = e^{-b}`, `r = 1`.
    pub fn from_b(b: Complex64) -> Self {
        TruncationParams {
            z: (-b).exp(),
            scale_omega: 1.0,
        }
    }
}

/// A violated model invariant.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Shape(String),
    OddDegree { label: String },
    PairingAsymmetric,
    PairingDegenerate,
    MuMismatch { label: String },
    MuNotAntisymmetric,
    C1DegreeShift,
    C1NotSelfAdjoint,
    NegativeOmega { label: String },
    TdAsymmetric { label: String },
    TdInhomogeneous { label: String },
    TdOutsideWindow { label: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::OddDegree { label } => write!(f, "basis element {label} has odd degree"),
            Violation::PairingAsymmetric => write!(f, "pairing is not symmetric"),
            Violation::PairingDegenerate => write!(f, "pairing is degenerate"),
            Violation::MuMismatch { label } => {
                write!(f, "mu entry for {label} differs from (deg - dim)/2")
            }
            Violation::MuNotAntisymmetric => {
                write!(f, "mu is not anti-symmetric for the pairing")
            }
            Violation::C1DegreeShift => write!(f, "c1_cup does not raise degree by 2"),
            Violation::C1NotSelfAdjoint => write!(f, "c1_cup is not self-adjoint for the pairing"),
            Violation::NegativeOmega { label } => write!(f, "class {label}: omega_dot_d < 0"),
            Violation::TdAsymmetric { label } => {
                write!(f, "class {label}: T_d not symmetric for the pairing")
            }
            Violation::TdInhomogeneous { label } => {
                write!(f, "class {label}: T_d not homogeneous of degree 2(1 - c1.d)")
            }
            Violation::TdOutsideWindow { label } => {
                write!(f, "class {label}: T_d nonzero although c1.d is outside (0, dim + 1]")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn q(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn cq(re: Rational64) -> CQ {
    Complex::new(re, Rational64::zero())
}

fn qmul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational64::zero(), |acc, k| acc + a[i][k] * b[k][j]))
                .collect()
        })
        .collect()
}

fn qtranspose(a: &QMatrix) -> QMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn cqmul(a: &CQMatrix, b: &CQMatrix) -> CQMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(CQ::zero(), |acc, k| acc + a[i][k] * b[k][j]))
                .collect()
        })
        .collect()
}

fn cqtranspose(a: &CQMatrix) -> CQMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

/// Exact determinant by fraction-valued Gaussian elimination.
pub fn qdet(a: &QMatrix) -> Rational64 {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rational64::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational64::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let mkj = m[k][j];
                m[i][j] -= f * mkj;
            }
        }
    }
    det
}

fn square(m: &[Vec<impl Sized>], n: usize) -> bool {
    m.len() == n && m.iter().all(|r| r.len() == n)
}

fn q_to_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub fn qmatrix_to_c(m: &QMatrix) -> CMatrix {
    CMatrix::from_fn(m.len(), |i, j| c64(q_to_f64(m[i][j]), 0.0))
}

pub fn cqmatrix_to_c(m: &CQMatrix) -> CMatrix {
    CMatrix::from_fn(m.len(), |i, j| c64(q_to_f64(m[i][j].re), q_to_f64(m[i][j].im)))
}

impl CurveClass {
    pub fn t_d_is_zero(&self) -> bool {
        self.t_d.iter().flatten().all(|x| x.is_zero())
    }

    fn in_window(&self, dim_x: u32) -> bool {
        self.c1_dot_d > 0 && self.c1_dot_d <= dim_x as i64 + 1
    }
}

impl CohModel {
    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn pairing_c(&self) -> CMatrix {
        qmatrix_to_c(&self.pairing)
    }

    pub fn c1_c(&self) -> CMatrix {
        qmatrix_to_c(&self.c1_cup)
    }

    pub fn mu_c(&self) -> CMatrix {
        let d: Vec<Complex64> = self.mu_diag.iter().map(|&m| c64(q_to_f64(m), 0.0)).collect();
        CMatrix::diag(&d)
    }

    /// Index of the unit class (the degree 0 basis element).
    pub fn unit_index(&self) -> Option<usize> {
        self.basis.iter().position(|b| b.deg == 0)
    }

    /// Row vector `w` with `w . v = integral of v` (pairing against the unit).
    pub fn integration_functional(&self) -> Result<Vec<Complex64>> {
        let u = self
            .unit_index()
            .ok_or_else(|| Error::InvalidInput("model has no degree 0 basis element".into()))?;
        Ok((0..self.n()).map(|i| c64(q_to_f64(self.pairing[i][u]), 0.0)).collect())
    }

    fn degree_shift_ok<T: Zero>(&self, m: &[Vec<T>], shift: i64) -> bool {
        for (j, bj) in self.basis.iter().enumerate() {
            for (i, bi) in self.basis.iter().enumerate() {
                if !m[i][j].is_zero() && bi.deg as i64 - bj.deg as i64 != shift {
                    return false;
                }
            }
        }
        true
    }
}

/// Checks every model invariant and reports the violated ones.
pub fn validate_model(model: &CohModel) -> ValidationReport {
    let mut v = Vec::new();
    let n = model.n();
    if !square(&model.pairing, n) || !square(&model.c1_cup, n) || model.mu_diag.len() != n {
        v.push(Violation::Shape(format!(
            "pairing, c1_cup and mu_diag must all match the basis size {n}"
        )));
        return ValidationReport { violations: v };
    }
    for c in &model.curve_classes {
        if !square(&c.t_d, n) {
            v.push(Violation::Shape(format!("T_d of class {} is not {n}x{n}", c.label)));
        }
    }
    if !v.is_empty() {
        return ValidationReport { violations: v };
    }
    for b in &model.basis {
        if b.deg % 2 != 0 {
            v.push(Violation::OddDegree { label: b.label.clone() });
        }
    }
    let p = &model.pairing;
    let pt = qtranspose(p);
    if &pt != p {
        v.push(Violation::PairingAsymmetric);
    }
    if qdet(p).is_zero() {
        v.push(Violation::PairingDegenerate);
    }
    for (b, &m) in model.basis.iter().zip(&model.mu_diag) {
        let want = Rational64::new(b.deg as i64 - model.dim_x as i64, 2);
        if m != want {
            v.push(Violation::MuMismatch { label: b.label.clone() });
        }
    }
    // (mu a, b) = -(a, mu b)  <=>  mu^T P = -P mu
    let mu: QMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { model.mu_diag[i] } else { q(0) }).collect())
        .collect();
    let lhs = qmul(&qtranspose(&mu), p);
    let rhs = qmul(p, &mu);
    if (0..n).any(|i| (0..n).any(|j| lhs[i][j] != -rhs[i][j])) {
        v.push(Violation::MuNotAntisymmetric);
    }
    if !model.degree_shift_ok(&model.c1_cup, 2) {
        v.push(Violation::C1DegreeShift);
    }
    if qmul(&qtranspose(&model.c1_cup), p) != qmul(p, &model.c1_cup) {
        v.push(Violation::C1NotSelfAdjoint);
    }
    let pc: CQMatrix = p.iter().map(|r| r.iter().map(|&x| cq(x)).collect()).collect();
    for c in &model.curve_classes {
        let label = c.label.clone();
        if c.omega_dot_d < 0.0 || !c.omega_dot_d.is_finite() {
            v.push(Violation::NegativeOmega { label: label.clone() });
        }
        if cqmul(&cqtranspose(&c.t_d), &pc) != cqmul(&pc, &c.t_d) {
            v.push(Violation::TdAsymmetric { label: label.clone() });
        }
        if !model.degree_shift_ok(&c.t_d, 2 * (1 - c.c1_dot_d)) {
            v.push(Violation::TdInhomogeneous { label: label.clone() });
        }
        if !c.in_window(model.dim_x) && !c.t_d_is_zero() {
            v.push(Violation::TdOutsideWindow { label });
        }
    }
    ValidationReport { violations: v }
}

/// Classes with `r * omega.d < c1.d` and nonzero `T_d`.
pub fn admissible_classes<'m>(model: &'m CohModel, params: &TruncationParams) -> Result<Vec<&'m CurveClass>> {
    let mut out = Vec::new();
    for c in &model.curve_classes {
        if c.t_d_is_zero() {
            continue;
        }
        if !c.in_window(model.dim_x) {
            return Err(Error::InconsistentModel(format!(
                "class {} has c1.d = {} outside (0, {}] but nonzero T_d",
                c.label,
                c.c1_dot_d,
                model.dim_x + 1
            )));
        }
        if params.scale_omega * c.omega_dot_d < c.c1_dot_d as f64 {
            out.push(c);
        }
    }
    Ok(out)
}

/// `E(u) = c1 + sum over admissible d of (c1.d) u^(c1.d) e^(-(r w.d + i B.d)) T_d`.
pub fn truncated_endomorphism(model: &CohModel, params: &TruncationParams, u: Complex64) -> Result<CMatrix> {
    let mut e = model.c1_c();
    for c in admissible_classes(model, params)? {
        let weight =
            u.powi(c.c1_dot_d as i32) * c64(-params.scale_omega * c.omega_dot_d, -c.b_dot_d).exp() * c.c1_dot_d as f64;
        e = &e + &cqmatrix_to_c(&c.t_d).scale(weight);
    }
    Ok(e)
}

fn two_point_basis() -> Vec<BasisElement> {
    vec![
        BasisElement {
            label: "1".to_string(),
            deg: 0,
        },
        BasisElement {
            label: "H".to_string(),
            deg: 2,
        },
    ]
}

fn curve_skeleton(c1_entry: i64) -> CohModel {
    CohModel {
        dim_x: 1,
        basis: two_point_basis(),
        pairing: vec![vec![q(0), q(1)], vec![q(1), q(0)]],
        c1_cup: vec![vec![q(0), q(0)], vec![q(c1_entry), q(0)]],
        mu_diag: vec![Rational64::new(-1, 2), Rational64::new(1, 2)],
        curve_classes: Vec::new(),
    }
}

/// `P1` with `psi = 2aH`: the line class has `omega.d = 2 Re a`, `B.d = 2 Im a`.
pub fn builtin_p1(a: Complex64) -> CohModel {
    let mut m = curve_skeleton(2);
    let zero = CQ::zero();
    m.curve_classes.push(CurveClass {
        label: "line".to_string(),
        c1_dot_d: 2,
        omega_dot_d: 2.0 * a.re,
        b_dot_d: 2.0 * a.im,
        // H -> 1
        t_d: vec![vec![zero, cq(q(1))], vec![zero, zero]],
    });
    m
}

/// Genus `g` curve in the basis `(1, H)`; genus 0 is routed to [`builtin_p1`] with `a = 0`.
pub fn builtin_curve(genus: u32) -> CohModel {
    if genus == 0 {
        return builtin_p1(c64(0.0, 0.0));
    }
    curve_skeleton(2 - 2 * genus as i64)
}
