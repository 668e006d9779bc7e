//! Model JSON: rationals as `[num, den]`, complex rationals as a pair of those.

use std::path::Path;

use num_complex::Complex;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use stabpath_core::cmath::c64;
use stabpath_core::gw_model::{builtin_curve, builtin_p1, BasisElement, CohModel, CurveClass, CQ};

use crate::failure::{read_error, CmdResult, Failure};

pub type RationalPair = [i64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(RationalPair),
    Complex([RationalPair; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub label: String,
    pub deg: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub label: String,
    pub c1_dot_d: i64,
    pub omega_dot_d: f64,
    pub b_dot_d: f64,
    pub t_d: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub dim_x: u32,
    pub basis: Vec<BasisEntry>,
    pub pairing: Vec<Vec<RationalPair>>,
    pub c1_cup: Vec<Vec<RationalPair>>,
    pub mu_diag: Vec<RationalPair>,
    pub curve_classes: Vec<CurveEntry>,
}

fn rational(p: RationalPair, what: &str) -> CmdResult<Rational64> {
    if p[1] == 0 {
        return Err(Failure::input(format!("model: zero denominator in {what}")));
    }
    Ok(Rational64::new(p[0], p[1]))
}

fn pair(q: Rational64) -> RationalPair {
    [*q.numer(), *q.denom()]
}

fn square<T>(m: &[Vec<T>], n: usize, what: &str) -> CmdResult<()> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Failure::input(format!("model: {what} must be {n}x{n}")));
    }
    Ok(())
}

fn qmatrix(m: &[Vec<RationalPair>], n: usize, what: &str) -> CmdResult<Vec<Vec<Rational64>>> {
    square(m, n, what)?;
    m.iter()
        .map(|r| r.iter().map(|&p| rational(p, what)).collect())
        .collect()
}

impl ModelFile {
    pub fn to_model(&self) -> CmdResult<CohModel> {
        let n = self.basis.len();
        if n == 0 {
            return Err(Failure::input("model: basis is empty"));
        }
        if self.mu_diag.len() != n {
            return Err(Failure::input(format!("model: mu_diag must have {n} entries")));
        }
        let mut curve_classes = Vec::with_capacity(self.curve_classes.len());
        for c in &self.curve_classes {
            let what = format!("t_d of {}", c.label);
            square(&c.t_d, n, &what)?;
            if !c.omega_dot_d.is_finite() || !c.b_dot_d.is_finite() {
                return Err(Failure::input(format!(
                    "model: class {} has non-finite pairings",
                    c.label
                )));
            }
            let t_d = c
                .t_d
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| match *e {
                            Entry::Real(p) => Ok(Complex::new(rational(p, &what)?, Rational64::from_integer(0))),
                            Entry::Complex([re, im]) => Ok(Complex::new(rational(re, &what)?, rational(im, &what)?)),
                        })
                        .collect::<CmdResult<Vec<CQ>>>()
                })
                .collect::<CmdResult<Vec<_>>>()?;
            curve_classes.push(CurveClass {
                label: c.label.clone(),
                c1_dot_d: c.c1_dot_d,
                omega_dot_d: c.omega_dot_d,
                b_dot_d: c.b_dot_d,
                t_d,
            });
        }
        Ok(CohModel {
            dim_x: self.dim_x,
            basis: self
                .basis
                .iter()
                .map(|b| BasisElement {
                    label: b.label.clone(),
                    deg: b.deg,
                })
                .collect(),
            pairing: qmatrix(&self.pairing, n, "pairing")?,
            c1_cup: qmatrix(&self.c1_cup, n, "c1_cup")?,
            mu_diag: self
                .mu_diag
                .iter()
                .map(|&p| rational(p, "mu_diag"))
                .collect::<CmdResult<_>>()?,
            curve_classes,
        })
    }

    pub fn from_model(m: &CohModel) -> Self {
        let qm = |m: &Vec<Vec<Rational64>>| -> Vec<Vec<RationalPair>> {
            m.iter().map(|r| r.iter().map(|&q| pair(q)).collect()).collect()
        };
        ModelFile {
            dim_x: m.dim_x,
            basis: m
                .basis
                .iter()
                .map(|b| BasisEntry {
                    label: b.label.clone(),
                    deg: b.deg,
                })
                .collect(),
            pairing: qm(&m.pairing),
            c1_cup: qm(&m.c1_cup),
            mu_diag: m.mu_diag.iter().map(|&q| pair(q)).collect(),
            curve_classes: m
                .curve_classes
                .iter()
                .map(|c| CurveEntry {
                    label: c.label.clone(),
                    c1_dot_d: c.c1_dot_d,
                    omega_dot_d: c.omega_dot_d,
                    b_dot_d: c.b_dot_d,
                    t_d: c
                        .t_d
                        .iter()
                        .map(|r| {
                            r.iter()
                                .map(|z| {
                                    if *z.im.numer() == 0 {
                                        Entry::Real(pair(z.re))
                                    } else {
                                        Entry::Complex([pair(z.re), pair(z.im)])
                                    }
                                })
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// `p1`, `curve:G`, or a path to a model file. `a` parameterizes the `p1` builtin.
pub fn load_model(spec: &str, a: num_complex::Complex64) -> CmdResult<CohModel> {
    if spec == "p1" {
        return Ok(builtin_p1(a));
    }
    if let Some(g) = spec.strip_prefix("curve:") {
        let g: u32 = g
            .parse()
            .map_err(|_| Failure::input(format!("model: bad genus in {spec:?}")))?;
        return Ok(builtin_curve(g));
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|e| read_error(path, e))?;
    let file: ModelFile = serde_json::from_str(&text).map_err(|e| read_error(path, e))?;
    file.to_model()
}

/// The `p1` builtin with `a = 0`, as a model file.
pub fn p1_file() -> ModelFile {
    ModelFile::from_model(&builtin_p1(c64(0.0, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip() {
        for m in [builtin_p1(c64(0.3, -1.0)), builtin_curve(3)] {
            let f = ModelFile::from_model(&m);
            let text = serde_json::to_string(&f).unwrap();
            let back: ModelFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_model().unwrap(), m);
        }
    }

    #[test]
    fn shape_and_denominator_errors() {
        let mut f = p1_file();
        f.pairing[0].pop();
        assert!(matches!(f.to_model(), Err(Failure::Input(_))));
        let mut f = p1_file();
        f.mu_diag[0] = [1, 0];
        assert!(matches!(f.to_model(), Err(Failure::Input(_))));
        let text = serde_json::to_string(&p1_file()).unwrap();
        assert!(text.contains("\"t_d\":[[[0,1],[1,1]],[[0,1],[0,1]]]"), "{text}");
    }
}
