//! Expected patterns and polynomials, loaded from the bundled data file.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use pdcalc::exactalg::{PolyRing, TruncPoly};
use serde::{Deserialize, Serialize};

const BUNDLED: &str = include_str!("../data/targets.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Targets {
    pub witt: WittTargets,
    pub fgl: FglTargets,
    pub sen: SenTargets,
    pub cartier: CartierTargets,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveFailure {
    pub p: u64,
    pub stage: usize,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WittTargets {
    pub gabber_primes: Vec<u64>,
    pub gabber_length: usize,
    pub solve_frobenius_unit_primes: Vec<u64>,
    pub solve_frobenius_failure: SolveFailure,
    pub solve_frobenius_twists: Vec<u32>,
    pub pn_primes: Vec<u64>,
    pub pn_max: u32,
    pub pn_length: usize,
    pub cartier_primes: Vec<u64>,
    pub cartier_samples: usize,
    pub cartier_length: usize,
    pub cartier_degree: u32,
    pub dwork_degree: u32,
    pub dwork_instances: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RightUnitTargets {
    pub eta_v1: String,
    pub eta_v1_squared_quarter: String,
    pub eta_v2: String,
    pub b4: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FglTargets {
    pub q_identity_max: u64,
    pub honda_max_power: u64,
    pub honda_primes: Vec<u64>,
    pub right_unit: RightUnitTargets,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DvrCase {
    pub p: u64,
    /// Monic coefficients, highest degree first.
    pub polynomial: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SenTargets {
    pub bokstedt_primes: Vec<u64>,
    pub bokstedt_j_max: u64,
    pub cmn_cases: Vec<(u64, u32)>,
    pub cmn_k_max: u64,
    pub perfectoid_primes: Vec<u64>,
    pub perfectoid_factor: i64,
    pub omega2yn_p: u64,
    pub omega2yn_heights: Vec<u32>,
    pub omega2yn_k_max: u64,
    pub dvr_cases: Vec<DvrCase>,
    pub dvr_j_max: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartierTargets {
    pub psi_primes: Vec<u64>,
    pub psi_m_max: i64,
    pub psi_length: usize,
    pub psi_tensor_pairs: usize,
    pub psi_tensor_range: i64,
    pub weyl_primes: Vec<u64>,
    pub weyl_j_max: u32,
    pub weyl_m_max: usize,
    pub delta_p: u64,
    pub delta_height: u32,
    pub delta_k_max: u32,
    pub delta_truncation: u32,
    pub delta_precision: u32,
}

impl Targets {
    pub fn bundled() -> Targets {
        serde_json::from_str(BUNDLED).expect("bundled targets parse")
    }
}

/// Parse `"1,0,-3"` (monic, highest degree first) into the ascending
/// non-leading coefficients `[-3, 0]`.
pub fn parse_eisenstein(s: &str) -> Result<Vec<i64>, String> {
    let coeffs: Vec<i64> = s
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|_| format!("bad coefficient {c:?}")))
        .collect::<Result<_, _>>()?;
    match coeffs.split_first() {
        Some((1, rest)) if !rest.is_empty() => Ok(rest.iter().rev().copied().collect()),
        Some((1, _)) => Err("polynomial must have degree at least 1".into()),
        _ => Err("polynomial must be monic with leading coefficient 1".into()),
    }
}

/// Parse a sum of terms like `-2*t1*t2 + 7*t1^2*v1^2` over `ring`.
pub fn parse_polynomial(s: &str, ring: &Arc<PolyRing>) -> Result<TruncPoly<BigRational>, String> {
    let mut out = TruncPoly::zero(ring);
    let normalized = s.replace('-', "+-");
    for raw in normalized.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            continue;
        }
        let (negative, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, term),
        };
        let mut coeff = BigRational::one();
        let mut exps = vec![0u32; ring.nvars()];
        for factor in body.split('*').map(str::trim) {
            if let Ok(n) = factor.parse::<BigInt>() {
                coeff *= BigRational::from_integer(n);
                continue;
            }
            let (name, power) = match factor.split_once('^') {
                Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| format!("bad exponent in {factor:?}"))?),
                None => (factor, 1),
            };
            let i = ring.index(name).ok_or_else(|| format!("unknown variable {name:?}"))?;
            exps[i] += power;
        }
        if negative {
            coeff = -coeff;
        }
        if !coeff.is_zero() {
            out = out.add(&TruncPoly::monomial(ring, exps, coeff));
        }
    }
    Ok(out)
}
