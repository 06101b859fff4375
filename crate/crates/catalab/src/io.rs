//! JSON wire formats for states, Hamiltonians, channels and verdicts.
//!
//! Matrices travel as separate real/imaginary 2-D arrays. Serialization
//! goes through `serde_json`, whose shortest-round-trip float formatting
//! carries ≥ 15 significant digits, so corpora survive a write/read cycle
//! bit-exactly. The wire layer is fixed at `f64` working precision.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::channels::Channel;
use crate::cmat::CMat;
use crate::convertibility::{Certificate, Decision, SolverResiduals, Verdict};
use crate::error::{Error, Result};
use crate::statekit::{DensityMatrix, Hamiltonian, ProbDist};

#[derive(Debug, Serialize, Deserialize)]
pub struct WireMatrix {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum WireObject {
    #[serde(rename = "density")]
    Density {
        dim: usize,
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        factors: Option<Vec<usize>>,
    },
    #[serde(rename = "probdist")]
    ProbDist { probs: Vec<f64> },
    #[serde(rename = "hamiltonian")]
    Hamiltonian {
        energies: Vec<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        basis_re: Option<Vec<Vec<f64>>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        basis_im: Option<Vec<Vec<f64>>>,
    },
    #[serde(rename = "channel")]
    Channel {
        dim_in: usize,
        dim_out: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        choi_re: Option<Vec<Vec<f64>>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        choi_im: Option<Vec<Vec<f64>>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        kraus: Option<Vec<WireMatrix>>,
    },
}

/// Any object the tool reads from a file.
#[derive(Debug)]
pub enum Loaded {
    Density(DensityMatrix<f64>),
    Prob(ProbDist<f64>),
    Hamiltonian(Hamiltonian<f64>),
    Channel(Channel<f64>),
}

fn matrix_to_parts(m: &CMat<f64>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let (rows, cols) = m.dim();
    let mut re = vec![vec![0.0; cols]; rows];
    let mut im = vec![vec![0.0; cols]; rows];
    for ((r, c), v) in m.indexed_iter() {
        re[r][c] = v.re;
        im[r][c] = v.im;
    }
    (re, im)
}

fn parts_to_matrix(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<CMat<f64>> {
    let rows = re.len();
    if rows == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let cols = re[0].len();
    if im.len() != rows {
        return Err(Error::InvalidInput(
            "re and im parts have different shapes".into(),
        ));
    }
    let mut m = CMat::<f64>::zeros((rows, cols));
    for r in 0..rows {
        if re[r].len() != cols || im[r].len() != cols {
            return Err(Error::InvalidInput(format!("ragged matrix row {r}")));
        }
        for c in 0..cols {
            m[(r, c)] = Complex::new(re[r][c], im[r][c]);
        }
    }
    Ok(m)
}

pub fn density_to_wire(s: &DensityMatrix<f64>) -> WireObject {
    let (re, im) = matrix_to_parts(s.matrix());
    WireObject::Density {
        dim: s.dim(),
        re,
        im,
        factors: s.factor_dims().map(|d| d.to_vec()),
    }
}

pub fn prob_to_wire(p: &ProbDist<f64>) -> WireObject {
    WireObject::ProbDist {
        probs: p.as_slice().to_vec(),
    }
}

pub fn hamiltonian_to_wire(h: &Hamiltonian<f64>) -> WireObject {
    if h.is_diagonal_basis() {
        WireObject::Hamiltonian {
            energies: h.energies().to_vec(),
            basis_re: None,
            basis_im: None,
        }
    } else {
        let (re, im) = matrix_to_parts(h.basis());
        WireObject::Hamiltonian {
            energies: h.energies().to_vec(),
            basis_re: Some(re),
            basis_im: Some(im),
        }
    }
}

pub fn channel_to_wire(ch: &Channel<f64>) -> WireObject {
    // Prefer whichever representation the channel already holds.
    match ch.choi_ref() {
        Some(choi) => {
            let (re, im) = matrix_to_parts(choi);
            WireObject::Channel {
                dim_in: ch.dim_in(),
                dim_out: ch.dim_out(),
                choi_re: Some(re),
                choi_im: Some(im),
                kraus: None,
            }
        }
        None => {
            let kraus = ch
                .kraus()
                .expect("Kraus-backed channel returns its operators")
                .iter()
                .map(|k| {
                    let (re, im) = matrix_to_parts(k);
                    WireMatrix { re, im }
                })
                .collect();
            WireObject::Channel {
                dim_in: ch.dim_in(),
                dim_out: ch.dim_out(),
                choi_re: None,
                choi_im: None,
                kraus: Some(kraus),
            }
        }
    }
}

pub fn wire_to_loaded(obj: WireObject) -> Result<Loaded> {
    match obj {
        WireObject::Density {
            dim,
            re,
            im,
            factors,
        } => {
            let m = parts_to_matrix(&re, &im)?;
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidInput(format!(
                    "field 'dim' = {dim} disagrees with matrix shape {:?}",
                    m.dim()
                )));
            }
            let state = match factors {
                Some(f) => DensityMatrix::with_factors(m, f)?,
                None => DensityMatrix::new(m)?,
            };
            Ok(Loaded::Density(state))
        }
        WireObject::ProbDist { probs } => Ok(Loaded::Prob(ProbDist::new(probs)?)),
        WireObject::Hamiltonian {
            energies,
            basis_re,
            basis_im,
        } => {
            let h = match (basis_re, basis_im) {
                (Some(re), Some(im)) => {
                    Hamiltonian::with_basis(energies, parts_to_matrix(&re, &im)?)?
                }
                (None, None) => Hamiltonian::diagonal(energies)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "field 'basis_re'/'basis_im' must be given together".into(),
                    ))
                }
            };
            Ok(Loaded::Hamiltonian(h))
        }
        WireObject::Channel {
            dim_in,
            dim_out,
            choi_re,
            choi_im,
            kraus,
        } => {
            let ch = match (choi_re, choi_im, kraus) {
                (Some(re), Some(im), None) => {
                    Channel::from_choi(dim_in, dim_out, parts_to_matrix(&re, &im)?)?
                }
                (None, None, Some(ops)) => {
                    let mats = ops
                        .iter()
                        .map(|w| parts_to_matrix(&w.re, &w.im))
                        .collect::<Result<Vec<_>>>()?;
                    Channel::from_kraus(dim_in, dim_out, mats)?
                }
                _ => {
                    return Err(Error::InvalidInput(
                        "field 'choi_re'/'choi_im' or 'kraus' must describe the channel".into(),
                    ))
                }
            };
            Ok(Loaded::Channel(ch))
        }
    }
}

pub fn parse_object(json: &str) -> Result<Loaded> {
    let obj: WireObject = serde_json::from_str(json)
        .map_err(|e| Error::InvalidInput(format!("malformed JSON object: {e}")))?;
    wire_to_loaded(obj)
}

pub fn to_json_string(obj: &WireObject) -> String {
    serde_json::to_string_pretty(obj).expect("wire objects serialize")
}

fn finite_or_string(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else if x > 0.0 {
        serde_json::json!("+inf")
    } else if x < 0.0 {
        serde_json::json!("-inf")
    } else {
        serde_json::json!("nan")
    }
}

fn residuals_json(r: &SolverResiduals<f64>) -> serde_json::Value {
    serde_json::json!({
        "psd": r.psd,
        "trace_preserving": r.trace_preserving,
        "map_rho": r.map_rho,
        "map_sigma": r.map_sigma,
        "iterations": r.iterations,
    })
}

/// Verdicts as machine-readable JSON; infinities travel as the strings
/// `"+inf"`/`"-inf"` since JSON numbers cannot carry them.
pub fn verdict_to_json(v: &Verdict<f64>) -> serde_json::Value {
    let decision = match v.decision {
        Decision::Convertible => "Convertible",
        Decision::NotConvertible => "NotConvertible",
        Decision::Inconclusive => "Inconclusive",
    };
    let certificate = match &v.certificate {
        Certificate::ViolatingAlpha { alpha, lhs, rhs } => serde_json::json!({
            "type": "violating_alpha",
            "alpha": finite_or_string(*alpha),
            "lhs": finite_or_string(*lhs),
            "rhs": finite_or_string(*rhs),
        }),
        Certificate::Margin {
            min_margin,
            alpha_at_min,
        } => serde_json::json!({
            "type": "margin",
            "min_margin": finite_or_string(*min_margin),
            "alpha_at_min": finite_or_string(*alpha_at_min),
        }),
        Certificate::Permutation => serde_json::json!({"type": "permutation"}),
        Certificate::Identity => serde_json::json!({"type": "identity"}),
        Certificate::WitnessChannel { channel, residuals } => serde_json::json!({
            "type": "witness_channel",
            "residuals": residuals_json(residuals),
            "channel": serde_json::to_value(channel_to_wire(channel)).expect("channel wires"),
        }),
        Certificate::Solver(residuals) => serde_json::json!({
            "type": "solver",
            "residuals": residuals_json(residuals),
        }),
        Certificate::ModeAnalysis {
            source_modes,
            target_modes,
            offending_mode,
        } => serde_json::json!({
            "type": "mode_analysis",
            "source_modes": source_modes,
            "target_modes": target_modes,
            "offending_mode": offending_mode,
        }),
    };
    serde_json::json!({
        "decision": decision,
        "certificate": certificate,
        "note": v.note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_round_trip() {
        let mut rng = crate::corpus::rng_from_seed(11);
        let s = crate::corpus::random_density::<f64>(&mut rng, 3).unwrap();
        let json = to_json_string(&density_to_wire(&s));
        match parse_object(&json).unwrap() {
            Loaded::Density(back) => {
                assert_eq!(back.matrix(), s.matrix());
            }
            other => panic!("wrong kind {other:?}"),
        }
    }

    #[test]
    fn probdist_round_trip_and_validation() {
        let p = ProbDist::<f64>::new(vec![0.25, 0.75]).unwrap();
        let json = to_json_string(&prob_to_wire(&p));
        match parse_object(&json).unwrap() {
            Loaded::Prob(back) => assert_eq!(back.as_slice(), p.as_slice()),
            other => panic!("wrong kind {other:?}"),
        }
        let bad = r#"{"kind":"probdist","probs":[0.7,0.7]}"#;
        assert!(parse_object(bad).is_err());
    }

    #[test]
    fn channel_round_trip_choi_and_kraus() {
        let ch = Channel::<f64>::completely_depolarizing(2);
        let json = to_json_string(&channel_to_wire(&ch));
        match parse_object(&json).unwrap() {
            Loaded::Channel(back) => {
                assert_eq!(back.dim_in(), 2);
                let rho = DensityMatrix::<f64>::basis_state(2, 0);
                let out = back.apply(&rho).unwrap();
                assert!(
                    crate::statekit::trace_distance(&out, &DensityMatrix::maximally_mixed(2))
                        .unwrap()
                        < 1e-12
                );
            }
            other => panic!("wrong kind {other:?}"),
        }

        let id = Channel::<f64>::identity(2); // Kraus-backed
        let json = to_json_string(&channel_to_wire(&id));
        assert!(json.contains("kraus"));
        match parse_object(&json).unwrap() {
            Loaded::Channel(back) => {
                let rho = DensityMatrix::<f64>::basis_state(2, 1);
                let out = back.apply(&rho).unwrap();
                assert!(crate::statekit::trace_distance(&out, &rho).unwrap() < 1e-12);
            }
            other => panic!("wrong kind {other:?}"),
        }
    }

    #[test]
    fn malformed_json_points_at_problem() {
        let err = parse_object("{not json").unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        let err = parse_object(r#"{"kind":"nonsense"}"#).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }
}
