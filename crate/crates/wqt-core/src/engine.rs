//! The monomial expansion engine.
//!
//! Starting from a dominant monomial, the engine repeatedly applies the
//! move M -> M A_i(z a q^{-r_i} t)^{-1} at every admissible variable
//! (i, a), accumulating exact factored coefficients along the way. The
//! search is level synchronous: all monomials at height h are validated
//! and expanded before any monomial at height h + 1.
//!
//! Each new level is checked for genericity and regularity before it is
//! expanded. A defective level stops the run with every defective
//! monomial reported as a witness, so failures are reproducible and
//! auditable rather than silent.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::cartan::{LieType, RootData};
use crate::coeff::{step_coefficient, CoeffError, FactoredCoeff};
use crate::monomial::{Monomial, Node, Spectral};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionConfig {
    /// Levels beyond this height are not generated.
    pub max_height: u32,
    /// Table size at which generation stops.
    pub max_monomials: usize,
    /// Recheck coefficients of rediscovered monomials against the value
    /// along the new path.
    pub check_path_independence: bool,
    /// Seed for the sample points used by coefficient equality checks.
    pub equality_seed: u64,
}

impl Default for ExpansionConfig {
    fn default() -> ExpansionConfig {
        ExpansionConfig {
            max_height: 256,
            max_monomials: 200_000,
            check_path_independence: true,
            equality_seed: 0,
        }
    }
}

/// Why a monomial disqualifies its level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Defect {
    /// An exponent other than +1 or -1.
    NonGeneric,
    /// A regularity clause fails.
    NonRegular,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::NonGeneric => write!(f, "non-generic"),
            Defect::NonRegular => write!(f, "non-regular"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CapKind {
    Height,
    Monomials,
}

impl fmt::Display for CapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapKind::Height => write!(f, "height"),
            CapKind::Monomials => write!(f, "monomials"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// A level produced nothing new; the expansion is finite and closed.
    Completed,
    /// A resource cap stopped the run; the table is a valid prefix.
    Truncated(CapKind),
    /// A level left the generic regular regime; see the witnesses.
    Failed,
}

/// One table row: a monomial, its exact coefficient, and its level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub monomial: Monomial,
    pub coeff: FactoredCoeff,
    pub height: u32,
}

/// One applied move: table index `from` times A_node(z color)^{-1}
/// equals table index `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub node: Node,
    pub color: Spectral,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    /// The starting monomial is unusable for this root system.
    Precondition(String),
    /// A monomial was reached along two paths with different
    /// coefficients.
    PathIndependence { monomial: Monomial },
    /// A monomial was rediscovered at the wrong level. This indicates a
    /// bug in the move bookkeeping, not bad input.
    HeightInconsistent { monomial: Monomial },
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Precondition(msg) => write!(f, "precondition violated: {}", msg),
            EngineError::PathIndependence { monomial } => {
                write!(f, "path dependent coefficient at {}", monomial)
            }
            EngineError::HeightInconsistent { monomial } => {
                write!(f, "height bookkeeping broke at {}", monomial)
            }
        }
    }
}

impl core::error::Error for EngineError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldDataError {
    EdgeOutOfRange,
    DuplicateMonomial,
}

impl fmt::Display for FieldDataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDataError::EdgeOutOfRange => write!(f, "edge endpoint outside the table"),
            FieldDataError::DuplicateMonomial => write!(f, "table lists a monomial twice"),
        }
    }
}

impl core::error::Error for FieldDataError {}

/// The result of a run: the table of monomials with coefficients, the
/// applied moves, and any witnesses for a failure.
///
/// Held in canonical form: table sorted by (height, monomial), edges by
/// (from, to, node, color), witnesses by (monomial, defect). Two runs
/// producing the same field compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldExpansion {
    lie_type: LieType,
    start: Monomial,
    status: Status,
    table: Vec<TableEntry>,
    edges: Vec<Edge>,
    witnesses: Vec<(Monomial, Defect)>,
    index: BTreeMap<Monomial, usize>,
}

impl FieldExpansion {
    fn canonicalize(
        lie_type: LieType,
        start: Monomial,
        status: Status,
        table: Vec<TableEntry>,
        mut edges: Vec<Edge>,
        mut witnesses: Vec<(Monomial, Defect)>,
    ) -> FieldExpansion {
        let mut perm: Vec<usize> = (0..table.len()).collect();
        perm.sort_by(|&x, &y| {
            table[x]
                .height
                .cmp(&table[y].height)
                .then_with(|| table[x].monomial.cmp(&table[y].monomial))
        });
        let mut old_to_new = alloc::vec![0usize; table.len()];
        for (new, &old) in perm.iter().enumerate() {
            old_to_new[old] = new;
        }
        let mut slots: Vec<Option<TableEntry>> = table.into_iter().map(Some).collect();
        let table: Vec<TableEntry> = perm.iter().map(|&old| slots[old].take().unwrap()).collect();
        for e in &mut edges {
            e.from = old_to_new[e.from];
            e.to = old_to_new[e.to];
        }
        edges.sort();
        witnesses.sort();
        let index = table
            .iter()
            .enumerate()
            .map(|(k, entry)| (entry.monomial.clone(), k))
            .collect();
        FieldExpansion {
            lie_type,
            start,
            status,
            table,
            edges,
            witnesses,
            index,
        }
    }

    /// Reassembles a field from raw parts, restoring canonical order.
    pub fn from_parts(
        lie_type: LieType,
        start: Monomial,
        status: Status,
        table: Vec<TableEntry>,
        edges: Vec<Edge>,
        witnesses: Vec<(Monomial, Defect)>,
    ) -> Result<FieldExpansion, FieldDataError> {
        if edges
            .iter()
            .any(|e| e.from >= table.len() || e.to >= table.len())
        {
            return Err(FieldDataError::EdgeOutOfRange);
        }
        let fe = FieldExpansion::canonicalize(lie_type, start, status, table, edges, witnesses);
        if fe.index.len() != fe.table.len() {
            return Err(FieldDataError::DuplicateMonomial);
        }
        Ok(fe)
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn start(&self) -> &Monomial {
        &self.start
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.table
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn witnesses(&self) -> &[(Monomial, Defect)] {
        &self.witnesses
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, m: &Monomial) -> Option<&TableEntry> {
        self.index.get(m).map(|&k| &self.table[k])
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.table.iter().map(|e| &e.monomial)
    }
}

/// Runs the expansion from a dominant starting monomial.
pub fn expand(
    rd: &RootData,
    start: &Monomial,
    cfg: &ExpansionConfig,
) -> Result<FieldExpansion, EngineError> {
    for (n, _, _) in start.entries() {
        if !rd.node_in_range(n) {
            return Err(EngineError::Precondition(alloc::format!(
                "node {} outside 1..={}",
                n,
                rd.rank()
            )));
        }
    }
    if !start.is_dominant() {
        return Err(EngineError::Precondition(String::from(
            "starting monomial must be dominant",
        )));
    }
    if !start.is_generic() {
        return Err(EngineError::Precondition(String::from(
            "starting monomial must be generic",
        )));
    }
    if !start.is_regular(rd) {
        return Err(EngineError::Precondition(String::from(
            "starting monomial must be regular",
        )));
    }

    let mut table: Vec<TableEntry> = alloc::vec![TableEntry {
        monomial: start.clone(),
        coeff: FactoredCoeff::one(),
        height: 0,
    }];
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    index.insert(start.clone(), 0);
    let mut edges: Vec<Edge> = Vec::new();
    let mut witnesses: Vec<(Monomial, Defect)> = Vec::new();
    let mut frontier: Vec<usize> = alloc::vec![0];
    let mut height = 0u32;

    let done = |status: Status, table: Vec<TableEntry>, edges, witnesses| {
        Ok(FieldExpansion::canonicalize(
            rd.lie_type(),
            start.clone(),
            status,
            table,
            edges,
            witnesses,
        ))
    };

    loop {
        if height >= 1 {
            for &k in &frontier {
                let m = &table[k].monomial;
                if !m.is_generic() {
                    witnesses.push((m.clone(), Defect::NonGeneric));
                } else if !m.is_regular(rd) {
                    witnesses.push((m.clone(), Defect::NonRegular));
                }
            }
            if !witnesses.is_empty() {
                return done(Status::Failed, table, edges, witnesses);
            }
        }

        let movable = frontier
            .iter()
            .any(|&k| !table[k].monomial.admissible_variables(rd).is_empty());
        if !movable {
            return done(Status::Completed, table, edges, witnesses);
        }
        if height >= cfg.max_height {
            return done(Status::Truncated(CapKind::Height), table, edges, witnesses);
        }

        let mut created: Vec<usize> = Vec::new();
        for &k in &frontier {
            let parent = table[k].monomial.clone();
            for (i, a) in parent.admissible_variables(rd) {
                let child = parent.apply_a_inverse(rd, i, a);
                let step = match step_coefficient(rd, &parent, i, a) {
                    Ok(step) => step,
                    Err(CoeffError::Resonance) => {
                        witnesses.push((child, Defect::NonGeneric));
                        return done(Status::Failed, table, edges, witnesses);
                    }
                };
                let coeff = table[k].coeff.mul(&step);
                let color = color_of(rd, i, a);
                match index.get(&child) {
                    None => {
                        let pos = table.len();
                        table.push(TableEntry {
                            monomial: child.clone(),
                            coeff,
                            height: height + 1,
                        });
                        index.insert(child, pos);
                        edges.push(Edge {
                            from: k,
                            to: pos,
                            node: i,
                            color,
                        });
                        created.push(pos);
                        if table.len() >= cfg.max_monomials {
                            return done(
                                Status::Truncated(CapKind::Monomials),
                                table,
                                edges,
                                witnesses,
                            );
                        }
                    }
                    Some(&pos) => {
                        if table[pos].height != height + 1 {
                            return Err(EngineError::HeightInconsistent { monomial: child });
                        }
                        edges.push(Edge {
                            from: k,
                            to: pos,
                            node: i,
                            color,
                        });
                        if cfg.check_path_independence
                            && !table[pos].coeff.equals(&coeff, cfg.equality_seed)
                        {
                            return Err(EngineError::PathIndependence { monomial: child });
                        }
                    }
                }
            }
        }
        frontier = created;
        height += 1;
    }
}

/// The spectral color a q^{-r_i} t of the move at (i, a).
pub fn color_of(rd: &RootData, i: Node, a: Spectral) -> Spectral {
    a.shifted(-rd.r_of(i), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::build_root_data;

    fn run(ty: &str, start: &str) -> FieldExpansion {
        let rd = build_root_data(ty.parse().unwrap());
        let start: Monomial = start.parse().unwrap();
        expand(&rd, &start, &ExpansionConfig::default()).unwrap()
    }

    #[test]
    fn sl2_fundamental() {
        let fe = run("A1", "Y[1](q^0 t^0)");
        assert_eq!(fe.status(), Status::Completed);
        assert_eq!(fe.len(), 2);
        assert_eq!(fe.edges().len(), 1);
        let last: Monomial = "Y[1](q^-2 t^2)^-1".parse().unwrap();
        let entry = fe.get(&last).unwrap();
        assert_eq!(entry.height, 1);
        assert!(entry.coeff.is_one());
    }

    #[test]
    fn sl2_interpolating_pair() {
        let fe = run("A1", "Y[1](q^0 t^0) * Y[1](q^-2 t^0)");
        assert_eq!(fe.status(), Status::Completed);
        assert_eq!(fe.len(), 3);
        let last: Monomial = "Y[1](q^-2 t^2)^-1 * Y[1](q^-4 t^2)^-1".parse().unwrap();
        assert!(fe.get(&last).unwrap().coeff.is_one());
    }

    #[test]
    fn rejects_non_dominant_start() {
        let rd = build_root_data("A1".parse().unwrap());
        let start: Monomial = "Y[1](q^0 t^0)^-1".parse().unwrap();
        let err = expand(&rd, &start, &ExpansionConfig::default()).unwrap_err();
        assert!(matches!(err, EngineError::Precondition(_)));
    }

    #[test]
    fn rejects_out_of_range_node() {
        let rd = build_root_data("A1".parse().unwrap());
        let start: Monomial = "Y[2](q^0 t^0)".parse().unwrap();
        let err = expand(&rd, &start, &ExpansionConfig::default()).unwrap_err();
        assert!(matches!(err, EngineError::Precondition(_)));
    }

    #[test]
    fn height_cap_truncates() {
        let rd = build_root_data("A3".parse().unwrap());
        let start: Monomial = "Y[2](q^0 t^0)".parse().unwrap();
        let cfg = ExpansionConfig {
            max_height: 1,
            ..ExpansionConfig::default()
        };
        let fe = expand(&rd, &start, &cfg).unwrap();
        assert_eq!(fe.status(), Status::Truncated(CapKind::Height));
        assert!(fe.entries().iter().all(|e| e.height <= 1));
    }

    #[test]
    fn identity_start_completes_immediately() {
        let fe = run("A1", "1");
        assert_eq!(fe.status(), Status::Completed);
        assert_eq!(fe.len(), 1);
    }
}
