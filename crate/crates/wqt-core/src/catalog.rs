//! Closed form expansions for the classical fundamental fields.
//!
//! For types A, B, C and for the vector and spinor nodes of type D the
//! complete monomial list of a fundamental expansion has a closed
//! combinatorial description: products of ladder terms indexed by
//! increasing tuples, or spin blocks indexed by sign vectors. These
//! lists are built here independently of the engine so that the two can
//! be diffed against each other.
//!
//! Catalog monomials are normalized so that some monomial in the list is
//! dominant; the diff aligns the two sides by the spectral shift between
//! their dominant monomials before comparing sets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::cartan::{LieType, Series};
use crate::engine::FieldExpansion;
use crate::monomial::{Monomial, Node, Spectral};

/// How the monomials of a catalog entry are indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexData {
    /// Increasing (or constrained nondecreasing) tuples of ladder slots.
    Tuples(Vec<Vec<usize>>),
    /// Sign vectors of spin blocks.
    Signs(Vec<Vec<i8>>),
}

impl IndexData {
    pub fn len(&self) -> usize {
        match self {
            IndexData::Tuples(v) => v.len(),
            IndexData::Signs(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A closed form fundamental expansion: the full monomial set plus the
/// indexing family that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub lie_type: LieType,
    pub node: Node,
    pub monomials: BTreeSet<Monomial>,
    pub index_data: IndexData,
}

impl CatalogEntry {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogError {
    /// No closed form list is implemented for this type and node.
    Unsupported { lie_type: LieType, node: Node },
    /// The diff needs exactly one dominant monomial on each side.
    DominantNotUnique,
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::Unsupported { lie_type, node } => {
                write!(f, "no catalog entry for {} node {}", lie_type, node)
            }
            CatalogError::DominantNotUnique => {
                write!(f, "diff requires a unique dominant monomial on each side")
            }
        }
    }
}

impl core::error::Error for CatalogError {}

/// The set difference between an engine run and a catalog entry, after
/// aligning dominant monomials by a spectral shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    /// (dq, dt) applied to the catalog before comparing.
    pub shift: (i64, i64),
    pub missing_in_expansion: Vec<Monomial>,
    pub unexpected_in_expansion: Vec<Monomial>,
}

impl DiffReport {
    pub fn is_clean(&self) -> bool {
        self.missing_in_expansion.is_empty() && self.unexpected_in_expansion.is_empty()
    }
}

fn var(node: usize, q: i64, t: i64, exp: i64) -> Monomial {
    Monomial::variable(node, Spectral::new(0, q, t), exp)
}

/// Strictly increasing k-tuples with values in 1..=n.
fn tuples_strict(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 1, &mut cur, &mut out);
    out
}

/// Nondecreasing k-tuples with values in 1..=n, strictly increasing
/// except that `repeat_value` may repeat.
fn tuples_with_middle_repeats(n: usize, k: usize, repeat_value: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(
        n: usize,
        k: usize,
        lo: usize,
        repeat_value: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            let lo_next = if v == repeat_value { v } else { v + 1 };
            cur.push(v);
            rec(n, k, lo_next, repeat_value, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 1, repeat_value, &mut cur, &mut out);
    out
}

/// All sign vectors of length k, minus signs counted in binary.
fn sign_vectors(k: usize) -> Vec<Vec<i8>> {
    (0..1usize << k)
        .map(|bits| {
            (0..k)
                .map(|p| if bits >> p & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}

/// Ladder term for type A: slots j = 1..=l+1.
fn lambda_a(l: usize, j: usize) -> Monomial {
    let ji = j as i64;
    let mut m = Monomial::one();
    if j <= l {
        m = m.multiply(&var(j, -ji + 1, ji - 1, 1));
    }
    if j >= 2 {
        m = m.multiply(&var(j - 1, -ji, ji, -1));
    }
    m
}

/// Ladder term for type C: slots j = 1..=2l.
fn lambda_c(l: usize, j: usize) -> Monomial {
    if j <= l {
        return lambda_a(l, j);
    }
    let li = l as i64;
    let i = 2 * l - j + 1;
    let ii = i as i64;
    let mut m = Monomial::one();
    if i >= 2 {
        m = m.multiply(&var(i - 1, -2 * li + ii - 2, 2 * li - ii, 1));
    }
    m.multiply(&var(i, -2 * li + ii - 3, 2 * li - ii + 1, -1))
}

/// Ladder term for type B (node below the short root): slots
/// j = 1..=2l+1.
fn lambda_b(l: usize, j: usize) -> Monomial {
    let li = l as i64;
    let ji = j as i64;
    if j < l {
        let mut m = var(j, -2 * ji + 2, ji - 1, 1);
        if j >= 2 {
            m = m.multiply(&var(j - 1, -2 * ji, ji, -1));
        }
        return m;
    }
    if j == l {
        return var(l, -2 * li + 3, li - 1, 1)
            .multiply(&var(l, -2 * li + 1, li - 1, 1))
            .multiply(&var(l - 1, -2 * li, li, -1));
    }
    if j == l + 1 {
        return var(l, -2 * li + 3, li - 1, 1).multiply(&var(l, -2 * li - 1, li + 1, -1));
    }
    if j == l + 2 {
        return var(l - 1, -2 * li + 2, li, 1)
            .multiply(&var(l, -2 * li + 1, li + 1, -1))
            .multiply(&var(l, -2 * li - 1, li + 1, -1));
    }
    let i = 2 * l + 2 - j;
    let ii = i as i64;
    let mut m = Monomial::one();
    if i >= 2 {
        m = m.multiply(&var(i - 1, -4 * li + 2 * ii + 2, 2 * li - ii, 1));
    }
    m.multiply(&var(i, -4 * li + 2 * ii, 2 * li - ii + 1, -1))
}

/// Ladder term for the type D vector node: slots j = 1..=2l.
fn lambda_d(l: usize, j: usize) -> Monomial {
    let li = l as i64;
    if j <= l - 2 {
        return lambda_a(l, j);
    }
    if j == l - 1 {
        return var(l, -li + 2, li - 2, 1)
            .multiply(&var(l - 1, -li + 2, li - 2, 1))
            .multiply(&var(l - 2, -li + 1, li - 1, -1));
    }
    if j == l {
        return var(l, -li + 2, li - 2, 1).multiply(&var(l - 1, -li, li, -1));
    }
    if j == l + 1 {
        return var(l - 1, -li + 2, li - 2, 1).multiply(&var(l, -li, li, -1));
    }
    if j == l + 2 {
        return var(l - 2, -li + 1, li - 1, 1)
            .multiply(&var(l - 1, -li, li, -1))
            .multiply(&var(l, -li, li, -1));
    }
    let i = 2 * l - j + 1;
    let ii = i as i64;
    let mut m = Monomial::one();
    if i >= 2 {
        m = m.multiply(&var(i - 1, -2 * li + ii + 2, 2 * li - ii - 2, 1));
    }
    m.multiply(&var(i, -2 * li + ii + 1, 2 * li - ii - 1, -1))
}

fn tuple_product<F>(lambda: F, js: &[usize], qstep: i64) -> Monomial
where
    F: Fn(usize) -> Monomial,
{
    let i = js.len() as i64;
    let mut m = Monomial::one();
    for (slot, &j) in js.iter().enumerate() {
        let alpha = slot as i64 + 1;
        let w = i + 1 - 2 * alpha;
        m = m.multiply(&lambda(j).shift(qstep * w, w));
    }
    m
}

fn type_a(l: usize, i: usize) -> CatalogEntry {
    let tuples = tuples_strict(l + 1, i);
    let monomials = tuples
        .iter()
        .map(|js| tuple_product(|j| lambda_a(l, j), js, -1))
        .collect();
    CatalogEntry {
        lie_type: LieType::new(Series::A, l).expect("valid rank"),
        node: i,
        monomials,
        index_data: IndexData::Tuples(tuples),
    }
}

fn type_c(l: usize, i: usize) -> CatalogEntry {
    let excluded = |js: &Vec<usize>| {
        for (a, &ja) in js.iter().enumerate() {
            for (b, &jb) in js.iter().enumerate().skip(a + 1) {
                if ja <= l && jb == 2 * l - ja + 1 && ja + b == l + a + 1 {
                    return true;
                }
            }
        }
        false
    };
    let tuples: Vec<Vec<usize>> = tuples_strict(2 * l, i)
        .into_iter()
        .filter(|js| !excluded(js))
        .collect();
    let monomials = tuples
        .iter()
        .map(|js| tuple_product(|j| lambda_c(l, j), js, -1))
        .collect();
    CatalogEntry {
        lie_type: LieType::new(Series::C, l).expect("valid rank"),
        node: i,
        monomials,
        index_data: IndexData::Tuples(tuples),
    }
}

fn type_b(l: usize, i: usize) -> CatalogEntry {
    let tuples = tuples_with_middle_repeats(2 * l + 1, i, l + 1);
    let monomials = tuples
        .iter()
        .map(|js| tuple_product(|j| lambda_b(l, j), js, -2))
        .collect();
    CatalogEntry {
        lie_type: LieType::new(Series::B, l).expect("valid rank"),
        node: i,
        monomials,
        index_data: IndexData::Tuples(tuples),
    }
}

fn type_b_spinor(l: usize) -> CatalogEntry {
    let li = l as i64;
    let signs = sign_vectors(l);
    let monomials = signs
        .iter()
        .map(|sigma| {
            let mut m = Monomial::one();
            let mut partial = 0i64;
            for (pos, &s) in sigma.iter().enumerate() {
                let k = pos + 1;
                let block = if s == 1 {
                    if k < l {
                        Monomial::one()
                    } else {
                        var(l, -2 * li, li + 1, -1)
                    }
                } else if k < l {
                    let mut b = var(k, -2 * li + 3, li - 1, 1);
                    if k >= 2 {
                        b = b.multiply(&var(k - 1, -2 * li + 1, li, -1));
                    }
                    b
                } else {
                    var(l - 1, -2 * li + 1, li, -1).multiply(&var(l, -2 * li + 2, li - 1, 1))
                };
                m = m.multiply(&block.shift(-2 * partial, partial));
                partial += s as i64;
            }
            m
        })
        .collect();
    CatalogEntry {
        lie_type: LieType::new(Series::B, l).expect("valid rank"),
        node: l,
        monomials,
        index_data: IndexData::Signs(signs),
    }
}

fn type_d_vector(l: usize) -> CatalogEntry {
    let tuples: Vec<Vec<usize>> = (1..=2 * l).map(|j| alloc::vec![j]).collect();
    let monomials = tuples.iter().map(|js| lambda_d(l, js[0])).collect();
    CatalogEntry {
        lie_type: LieType::new(Series::D, l).expect("valid rank"),
        node: 1,
        monomials,
        index_data: IndexData::Tuples(tuples),
    }
}

fn type_d_spinor(l: usize, node: usize) -> CatalogEntry {
    let li = l as i64;
    let twin = |n: usize| 2 * l - 1 - n;
    let signs = sign_vectors(l - 1);
    let monomials = signs
        .iter()
        .map(|sigma| {
            let head: i64 = sigma[..l - 2].iter().map(|&s| s as i64).product();
            let parity = if (l - 2).is_multiple_of(2) { 1 } else { -1 };
            let n = if head * parity == 1 { node } else { twin(node) };
            let mut m = Monomial::one();
            let mut partial = 0i64;
            for (pos, &s) in sigma.iter().enumerate() {
                let k = pos + 1;
                let ki = k as i64;
                let block = if k < l - 1 {
                    if s == 1 {
                        Monomial::one()
                    } else {
                        let mut b = var(k, -li + ki, li - ki, 1);
                        if k >= 2 {
                            b = b.multiply(&var(k - 1, -li + ki - 1, li - ki + 1, -1));
                        }
                        b
                    }
                } else if s == 1 {
                    var(n, -3, 3, -1)
                } else {
                    var(l - 2, -2, 2, -1).multiply(&var(n, -1, 1, 1))
                };
                let w = (ki - 1) + partial;
                m = m.multiply(&block.shift(-w, w));
                partial += s as i64;
            }
            m
        })
        .collect();
    CatalogEntry {
        lie_type: LieType::new(Series::D, l).expect("valid rank"),
        node,
        monomials,
        index_data: IndexData::Signs(signs),
    }
}

/// The closed form expansion for a fundamental field, when one is
/// implemented: every node of types A, B, C, and the vector and two
/// spinor nodes of type D.
pub fn catalog(lie_type: LieType, node: Node) -> Result<CatalogEntry, CatalogError> {
    let l = lie_type.rank();
    let unsupported = CatalogError::Unsupported { lie_type, node };
    if node < 1 || node > l {
        return Err(unsupported);
    }
    match lie_type.series() {
        Series::A => Ok(type_a(l, node)),
        Series::B => {
            if node < l {
                Ok(type_b(l, node))
            } else {
                Ok(type_b_spinor(l))
            }
        }
        Series::C => Ok(type_c(l, node)),
        Series::D => {
            if node == 1 {
                Ok(type_d_vector(l))
            } else if node + 1 >= l {
                Ok(type_d_spinor(l, node))
            } else {
                Err(unsupported)
            }
        }
        _ => Err(unsupported),
    }
}

fn unique_dominant<'a, I: Iterator<Item = &'a Monomial>>(
    iter: I,
) -> Result<&'a Monomial, CatalogError> {
    let mut found = None;
    for m in iter {
        if !m.is_identity() && m.is_dominant() {
            if found.is_some() {
                return Err(CatalogError::DominantNotUnique);
            }
            found = Some(m);
        }
    }
    found.ok_or(CatalogError::DominantNotUnique)
}

/// Diffs an engine run against a catalog entry. The catalog is shifted
/// so that its dominant monomial matches the dominant monomial of the
/// run, then both monomial sets are compared exactly.
pub fn compare(fe: &FieldExpansion, entry: &CatalogEntry) -> Result<DiffReport, CatalogError> {
    let run_dom = unique_dominant(fe.monomials())?;
    let cat_dom = unique_dominant(entry.monomials.iter())?;
    let (_, ra, _) = run_dom.entries().next().expect("non-identity");
    let (_, ca, _) = cat_dom.entries().next().expect("non-identity");
    let shift = (ra.qexp - ca.qexp, ra.texp - ca.texp);
    let shifted: BTreeSet<Monomial> = entry
        .monomials
        .iter()
        .map(|m| m.shift(shift.0, shift.1))
        .collect();
    let run_set: BTreeSet<Monomial> = fe.monomials().cloned().collect();
    Ok(DiffReport {
        shift,
        missing_in_expansion: shifted.difference(&run_set).cloned().collect(),
        unexpected_in_expansion: run_set.difference(&shifted).cloned().collect(),
    })
}
