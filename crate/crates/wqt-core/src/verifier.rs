//! The screening cancellation certificate.
//!
//! A completed expansion is certified by pairing residues. For a table
//! monomial M and node i, the set R collects spectral parameters a with
//! d_{i,a} = 1 and d_{i, a q^{-2 r_i}} = 0, and S collects b with
//! d_{i,b} = -1 and d_{i, b q^{2 r_i}} = 0. Each a in R heads a maximal
//! t-string a, a t^2, ..., a t^{2s}; flipping the whole string with s + 1
//! moves lands on a partner monomial N whose S set contains
//! b = a q^{-2 r_i} t^{2s + 2}, and the two coefficients are tied by an
//! explicit factored ratio. Globally this pairing must be a bijection
//! between all R elements and all S elements of the table.
//!
//! The verifier recomputes every pairing from scratch and reports each
//! failure as a violation instead of stopping at the first one.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::cartan::{build_root_data, RootData};
use crate::coeff::{orbit_ratio, CoeffError, FactoredCoeff};
use crate::engine::{FieldExpansion, Status};
use crate::monomial::{Monomial, Node, Spectral};

/// One certified residue pairing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pairing {
    pub monomial: Monomial,
    pub node: Node,
    pub spectral: Spectral,
    pub partner: Monomial,
    pub string_length: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationReason {
    /// The t-string is not cleanly terminated or is shadowed at
    /// q^{-2 r_i}.
    BrokenString,
    /// The flipped monomial is absent from the table.
    MissingPartner,
    /// The flipped monomial does not carry the expected S element.
    PartnerNotInS,
    /// The coefficients fail the pairing relation.
    CoefficientMismatch,
    /// Two R elements map to the same S element.
    DuplicateTarget,
    /// An S element is never hit by any pairing.
    UnmatchedS,
}

impl fmt::Display for ViolationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationReason::BrokenString => "broken t-string",
            ViolationReason::MissingPartner => "partner not in table",
            ViolationReason::PartnerNotInS => "partner misses the S element",
            ViolationReason::CoefficientMismatch => "coefficient relation fails",
            ViolationReason::DuplicateTarget => "two residues share a target",
            ViolationReason::UnmatchedS => "S element never hit",
        };
        write!(f, "{}", s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub monomial: Monomial,
    pub node: Node,
    pub spectral: Spectral,
    pub reason: ViolationReason,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at node {}, q^{} t^{} of {}",
            self.reason, self.node, self.spectral.qexp, self.spectral.texp, self.monomial
        )
    }
}

/// Everything the verifier found: the full pairing list and every
/// violation. An empty violation list is the certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueReport {
    pub pairings: Vec<Pairing>,
    pub violations: Vec<Violation>,
}

impl ResidueReport {
    pub fn is_certified(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifierError {
    /// Only completed expansions can be certified.
    NotCompleted,
}

impl fmt::Display for VerifierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifierError::NotCompleted => {
                write!(f, "cancellation certificate requires a completed expansion")
            }
        }
    }
}

impl core::error::Error for VerifierError {}

/// The residue sets (R, S) of m at node i, in canonical order.
pub fn residue_sets(rd: &RootData, m: &Monomial, i: Node) -> (Vec<Spectral>, Vec<Spectral>) {
    let s = 2 * rd.r_of(i);
    let mut r_set = Vec::new();
    let mut s_set = Vec::new();
    for (j, a, e) in m.entries() {
        if j != i {
            continue;
        }
        if e == 1 && m.degree(i, a.shifted(-s, 0)) == 0 {
            r_set.push(a);
        }
        if e == -1 && m.degree(i, a.shifted(s, 0)) == 0 {
            s_set.push(a);
        }
    }
    (r_set, s_set)
}

/// The factored ratio lambda_N / lambda_M for the string flip of length
/// s + 1 headed at (i, a). Entries of M at node i outside the string each
/// contribute four binomials.
fn string_ratio(
    rd: &RootData,
    m: &Monomial,
    i: Node,
    a: Spectral,
    s: u32,
) -> Result<FactoredCoeff, CoeffError> {
    let shift = 2 * rd.r_of(i);
    let span = 2 * (s as i64) + 2;
    let mut out = FactoredCoeff::one();
    for (j, c, e) in m.entries() {
        if j != i {
            continue;
        }
        let in_string = c.orbit == a.orbit
            && c.qexp == a.qexp
            && c.texp >= a.texp
            && c.texp <= a.texp + 2 * (s as i64)
            && (c.texp - a.texp) % 2 == 0;
        if in_string {
            continue;
        }
        let dq = a.qexp - c.qexp;
        let dt = a.texp - c.texp;
        let kappa = orbit_ratio(a.orbit, c.orbit);
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                out = out
                    .mul_factor_num(dq - shift, dt, kappa.clone())?
                    .mul_factor_num(dq, dt + span, kappa.clone())?
                    .mul_factor_den(dq - shift, dt + span, kappa.clone())?
                    .mul_factor_den(dq, dt, kappa.clone())?;
            } else {
                out = out
                    .mul_factor_num(dq, dt, kappa.clone())?
                    .mul_factor_num(dq - shift, dt + span, kappa.clone())?
                    .mul_factor_den(dq, dt + span, kappa.clone())?
                    .mul_factor_den(dq - shift, dt, kappa.clone())?;
            }
        }
    }
    Ok(out)
}

/// Recomputes the full residue pairing of a completed expansion.
pub fn verify_cancellation(
    fe: &FieldExpansion,
    seed: u64,
) -> Result<ResidueReport, VerifierError> {
    if fe.status() != Status::Completed {
        return Err(VerifierError::NotCompleted);
    }
    let rd = build_root_data(fe.lie_type());
    let mut pairings: Vec<Pairing> = Vec::new();
    let mut violations: Vec<Violation> = Vec::new();
    // Counts how often each S element (table position, node, spectral)
    // is hit by a pairing.
    let mut s_hits: BTreeMap<(usize, Node, Spectral), u32> = BTreeMap::new();

    for entry in fe.entries() {
        for i in 1..=rd.rank() {
            let (_, s_set) = residue_sets(&rd, &entry.monomial, i);
            for b in s_set {
                let pos = fe.position(&entry.monomial).expect("table monomial");
                s_hits.insert((pos, i, b), 0);
            }
        }
    }

    for entry in fe.entries() {
        let m = &entry.monomial;
        for i in 1..=rd.rank() {
            let shift = 2 * rd.r_of(i);
            let (r_set, _) = residue_sets(&rd, m, i);
            'heads: for a in r_set {
                let mut s = 0u32;
                while m.degree(i, a.shifted(0, 2 * (s as i64 + 1))) == 1 {
                    s += 1;
                }
                let violation = |reason| Violation {
                    monomial: m.clone(),
                    node: i,
                    spectral: a,
                    reason,
                };
                if m.degree(i, a.shifted(0, 2 * (s as i64 + 1))) != 0 {
                    violations.push(violation(ViolationReason::BrokenString));
                    continue;
                }
                for u in 0..=s as i64 {
                    if m.degree(i, a.shifted(-shift, 2 * u)) != 0 {
                        violations.push(violation(ViolationReason::BrokenString));
                        continue 'heads;
                    }
                }
                let mut partner = m.clone();
                for u in 0..=s as i64 {
                    partner = partner.apply_a_inverse(&rd, i, a.shifted(0, 2 * u));
                }
                let Some(partner_pos) = fe.position(&partner) else {
                    violations.push(violation(ViolationReason::MissingPartner));
                    continue;
                };
                let b = a.shifted(-shift, 2 * (s as i64) + 2);
                let Some(hit) = s_hits.get_mut(&(partner_pos, i, b)) else {
                    violations.push(violation(ViolationReason::PartnerNotInS));
                    continue;
                };
                *hit += 1;
                if *hit > 1 {
                    violations.push(violation(ViolationReason::DuplicateTarget));
                    continue;
                }
                let partner_coeff = &fe.entries()[partner_pos].coeff;
                let relation_holds = match string_ratio(&rd, m, i, a, s) {
                    Ok(ratio) => partner_coeff.equals(&entry.coeff.mul(&ratio), seed),
                    Err(CoeffError::Resonance) => false,
                };
                if !relation_holds {
                    violations.push(violation(ViolationReason::CoefficientMismatch));
                    continue;
                }
                pairings.push(Pairing {
                    monomial: m.clone(),
                    node: i,
                    spectral: a,
                    partner,
                    string_length: s,
                });
            }
        }
    }

    for (&(pos, node, spectral), &hit) in &s_hits {
        if hit == 0 {
            violations.push(Violation {
                monomial: fe.entries()[pos].monomial.clone(),
                node,
                spectral,
                reason: ViolationReason::UnmatchedS,
            });
        }
    }

    pairings.sort();
    violations.sort();
    Ok(ResidueReport {
        pairings,
        violations,
    })
}
