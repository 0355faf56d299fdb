//! The t -> 1 specialization of a completed expansion.
//!
//! Setting t = 1 forgets the t exponent of every spectral parameter and
//! sends each coefficient to its exact rational limit, collapsing the
//! table to a q-character: a finite sum of monomials in variables
//! Y_{i, q^m} with rational multiplicities.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::coeff::{LimitError, Rat};
use crate::engine::{FieldExpansion, Status};
use crate::monomial::{Monomial, Node};

/// A monomial in the specialized variables, keyed by
/// (node, orbit, q exponent).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct QMonomial {
    entries: BTreeMap<(Node, u32, i64), i64>,
}

impl QMonomial {
    pub fn one() -> QMonomial {
        QMonomial::default()
    }

    /// Forgets the t exponents of an ordinary monomial.
    pub fn collapse(m: &Monomial) -> QMonomial {
        let mut entries: BTreeMap<(Node, u32, i64), i64> = BTreeMap::new();
        for (n, a, e) in m.entries() {
            let slot = entries.entry((n, a.orbit, a.qexp)).or_insert(0);
            *slot += e;
            if *slot == 0 {
                entries.remove(&(n, a.orbit, a.qexp));
            }
        }
        QMonomial { entries }
    }

    pub fn entries(&self) -> impl Iterator<Item = (Node, u32, i64, i64)> + '_ {
        self.entries.iter().map(|(&(n, o, q), &e)| (n, o, q, e))
    }

    pub fn is_identity(&self) -> bool {
        self.entries.is_empty()
    }

    /// Per-node exponent sums. Nodes must lie in 1..=rank.
    pub fn weight(&self, rank: usize) -> Vec<i64> {
        let mut w = alloc::vec![0i64; rank];
        for (n, _, _, e) in self.entries() {
            w[n - 1] += e;
        }
        w
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut first = true;
        for (n, o, q, e) in self.entries() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "Y[{},q^{}", n, q)?;
            if o != 0 {
                write!(f, ",u_{}", o)?;
            }
            write!(f, "]")?;
            if e != 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

/// A finite sum of q-character terms with exact rational multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QCharacter {
    terms: BTreeMap<QMonomial, Rat>,
}

impl QCharacter {
    pub fn terms(&self) -> impl Iterator<Item = (&QMonomial, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, qm: &QMonomial) -> Option<&Rat> {
        self.terms.get(qm)
    }

    fn add(&mut self, qm: QMonomial, v: Rat) {
        let slot = self.terms.entry(qm).or_insert_with(Rat::zero);
        *slot += v;
    }
}

impl fmt::Display for QCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (qm, v) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*{}", v, qm)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecializeError {
    /// Only completed expansions can be specialized.
    NotCompleted,
    /// A coefficient has no clean t -> 1 limit.
    Coefficient {
        monomial: Monomial,
        source: LimitError,
    },
}

impl fmt::Display for SpecializeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecializeError::NotCompleted => {
                write!(f, "t = 1 specialization requires a completed expansion")
            }
            SpecializeError::Coefficient { monomial, source } => {
                write!(f, "coefficient of {} has no t = 1 limit: {}", monomial, source)
            }
        }
    }
}

impl core::error::Error for SpecializeError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightError {
    /// A multiplicity is not a non-negative integer.
    NonIntegralMultiplicity { term: QMonomial },
}

impl fmt::Display for WeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightError::NonIntegralMultiplicity { term } => {
                write!(f, "multiplicity of {} is not a non-negative integer", term)
            }
        }
    }
}

impl core::error::Error for WeightError {}

/// Sends t -> 1 in every coefficient and collapses the table.
pub fn specialize_t1(fe: &FieldExpansion) -> Result<QCharacter, SpecializeError> {
    if fe.status() != Status::Completed {
        return Err(SpecializeError::NotCompleted);
    }
    let mut qc = QCharacter::default();
    for entry in fe.entries() {
        let v = entry
            .coeff
            .limit_t1()
            .map_err(|source| SpecializeError::Coefficient {
                monomial: entry.monomial.clone(),
                source,
            })?;
        qc.add(QMonomial::collapse(&entry.monomial), v);
    }
    qc.terms.retain(|_, v| !v.is_zero());
    Ok(qc)
}

/// The weight multiset of a q-character: every term contributes its
/// weight vector with its multiplicity, which must be a non-negative
/// integer. Sorted with repeats.
pub fn weight_multiset(rank: usize, qc: &QCharacter) -> Result<Vec<Vec<i64>>, WeightError> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for (qm, v) in qc.terms() {
        if !v.is_integer() || v < &Rat::zero() {
            return Err(WeightError::NonIntegralMultiplicity { term: qm.clone() });
        }
        let mult = v.to_integer();
        let w = qm.weight(rank);
        let mut k = num_bigint::BigInt::from(0);
        while k < mult {
            out.push(w.clone());
            k += 1;
        }
    }
    out.sort();
    Ok(out)
}
