//! Row types of the CSV outputs. Field names are the column names.
#![allow(non_snake_case)]

use serde::{Deserialize, Serialize};

/// trajectory.csv, one row per sample stride.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub q1: f64,
    pub q2: f64,
    pub qdot1: f64,
    pub qdot2: f64,
    pub phi: f64,
    pub phidot: f64,
    pub H_reduced: f64,
    pub E_lab: f64,
    pub P1: f64,
    pub P2: f64,
    pub M: f64,
    pub divA_max: f64,
    pub divPi_max: f64,
}

/// atlas.csv and soliton.csv.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct AtlasRow {
    pub v1: f64,
    pub v2: f64,
    pub omega: f64,
    pub P1: f64,
    pub P2: f64,
    pub M: f64,
    pub h1dot_A: f64,
    pub l2_Pi: f64,
    pub jacobian_det: f64,
}

/// stability.csv, the distance series of every δ in one file.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct StabilityRow {
    pub delta: f64,
    pub t: f64,
    pub d_original: f64,
    pub d_matched: f64,
}

/// jacobian.csv, one row per swept (v, ω) with v = (v, 0).
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct JacobianRow {
    pub v: f64,
    pub omega: f64,
    pub dP1_dv1: f64,
    pub dP1_dv2: f64,
    pub dP1_domega: f64,
    pub dP2_dv1: f64,
    pub dP2_dv2: f64,
    pub dP2_domega: f64,
    pub dM_dv1: f64,
    pub dM_dv2: f64,
    pub dM_domega: f64,
    pub det: f64,
    pub det_reduced: f64,
    pub P1_plus: f64,
    pub P2_plus: f64,
    pub P1_minus: f64,
    pub P2_minus: f64,
    pub cauchy_schwarz: bool,
    pub fd_max_rel_error: f64,
}

/// lowerbound.csv, one row per sampled perturbation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct LowerBoundRow {
    pub sample: usize,
    pub seed: u64,
    pub amplitude: f64,
    pub delta_H: f64,
    pub bound: f64,
    pub identity_rel_error: f64,
    pub pass: bool,
}

/// gradcheck.csv, one row per random direction.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct GradientRow {
    pub direction: usize,
    pub seed: u64,
    pub analytic: f64,
    pub fd: f64,
    pub step: f64,
    pub rel_error: f64,
}
