//! Root data for the simple Lie types and the (q, t)-deformed Cartan matrix.
//!
//! Node numbering follows the conventions used throughout the crate:
//! chains are numbered left to right; in type B the short root is node `l`,
//! in type C the long root is node `l`, in type D the fork nodes `l-1` and
//! `l` are both attached to node `l-2`, in type G the long root is node 1,
//! and the E/F types use the standard Bourbaki numbering.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::monomial::{Monomial, Node, Spectral};

/// Simple Lie series letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Series> {
        match c.to_ascii_uppercase() {
            'A' => Some(Series::A),
            'B' => Some(Series::B),
            'C' => Some(Series::C),
            'D' => Some(Series::D),
            'E' => Some(Series::E),
            'F' => Some(Series::F),
            'G' => Some(Series::G),
            _ => None,
        }
    }

    fn rank_ok(self, rank: usize) -> bool {
        match self {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        }
    }
}

/// A validated (series, rank) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LieType {
    series: Series,
    rank: usize,
}

impl LieType {
    pub fn new(series: Series, rank: usize) -> Result<LieType, ConfigError> {
        if series.rank_ok(rank) {
            Ok(LieType { series, rank })
        } else {
            Err(ConfigError::InvalidRank { series, rank })
        }
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for LieType {
    type Err = ConfigError;

    /// Parses a fused type token such as "A3", "d4" or "E8".
    fn from_str(s: &str) -> Result<LieType, ConfigError> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .ok_or_else(|| ConfigError::Malformed(String::from("empty type token")))?;
        let series = Series::from_letter(letter).ok_or(ConfigError::UnknownSeries(letter))?;
        let digits = chars.as_str();
        if digits.is_empty() {
            return Err(ConfigError::Malformed(String::from(
                "type token is missing a rank",
            )));
        }
        let rank: usize = digits
            .parse()
            .map_err(|_| ConfigError::Malformed(String::from("rank is not a number")))?;
        LieType::new(series, rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    InvalidRank { series: Series, rank: usize },
    UnknownSeries(char),
    Malformed(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::InvalidRank { series, rank } => {
                write!(f, "rank {} is not valid for series {}", rank, series.letter())
            }
            ConfigError::UnknownSeries(c) => write!(f, "unknown series letter '{}'", c),
            ConfigError::Malformed(msg) => write!(f, "malformed type token: {}", msg),
        }
    }
}

impl core::error::Error for ConfigError {}

/// Laurent polynomial in (q, t): exponent pair -> integer coefficient.
pub type QtPoly = BTreeMap<(i64, i64), i64>;

/// Precomputed root data for one Lie type.
///
/// Invariants (enforced by construction, rechecked in tests):
/// diagonal Cartan entries are 2, off-diagonal entries are non-positive,
/// `diag(r_i) * cartan` is symmetric, the Cartan determinant is nonzero,
/// and `incidence = 2*Id - cartan`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootData {
    lie_type: LieType,
    cartan: Vec<Vec<i64>>,
    incidence: Vec<Vec<i64>>,
    r: Vec<i64>,
    lacing: i64,
}

impl RootData {
    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn rank(&self) -> usize {
        self.lie_type.rank()
    }

    /// Classical Cartan entry C_ij (1-based nodes).
    pub fn cartan_entry(&self, i: Node, j: Node) -> i64 {
        self.cartan[i - 1][j - 1]
    }

    /// Incidence entry I_ij = (2*Id - C)_ij (1-based nodes).
    pub fn incidence_entry(&self, i: Node, j: Node) -> i64 {
        self.incidence[i - 1][j - 1]
    }

    /// Root length exponent r_i of a node (1 for short, `lacing` for long).
    pub fn r_of(&self, i: Node) -> i64 {
        self.r[i - 1]
    }

    /// The lacing number r (1, 2 or 3).
    pub fn lacing(&self) -> i64 {
        self.lacing
    }

    pub fn node_in_range(&self, i: Node) -> bool {
        i >= 1 && i <= self.rank()
    }

    /// Exact integer determinant of the classical Cartan matrix
    /// (fraction-free Gaussian elimination; ranks here are tiny).
    pub fn cartan_det(&self) -> i64 {
        let n = self.rank();
        let mut m: Vec<Vec<i128>> = self
            .cartan
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                let swap = (k + 1..n).find(|&i| m[i][k] != 0);
                match swap {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        (sign * m[n - 1][n - 1]) as i64
    }
}

/// Builds the root data tables for a Lie type.
pub fn build_root_data(lie_type: LieType) -> RootData {
    let l = lie_type.rank();
    let mut cartan = vec![vec![0i64; l]; l];
    for (i, row) in cartan.iter_mut().enumerate() {
        row[i] = 2;
    }
    // edge(i, j, cij, cji) with 0-based node indices
    let edge = |c: &mut Vec<Vec<i64>>, i: usize, j: usize, cij: i64, cji: i64| {
        c[i][j] = cij;
        c[j][i] = cji;
    };

    let (r, lacing): (Vec<i64>, i64) = match lie_type.series() {
        Series::A => {
            for i in 0..l.saturating_sub(1) {
                edge(&mut cartan, i, i + 1, -1, -1);
            }
            (vec![1; l], 1)
        }
        Series::B => {
            for i in 0..l - 2 {
                edge(&mut cartan, i, i + 1, -1, -1);
            }
            edge(&mut cartan, l - 2, l - 1, -1, -2);
            let mut r = vec![2; l];
            r[l - 1] = 1;
            (r, 2)
        }
        Series::C => {
            for i in 0..l - 2 {
                edge(&mut cartan, i, i + 1, -1, -1);
            }
            edge(&mut cartan, l - 2, l - 1, -2, -1);
            let mut r = vec![1; l];
            r[l - 1] = 2;
            (r, 2)
        }
        Series::D => {
            for i in 0..l - 3 {
                edge(&mut cartan, i, i + 1, -1, -1);
            }
            edge(&mut cartan, l - 3, l - 2, -1, -1);
            edge(&mut cartan, l - 3, l - 1, -1, -1);
            (vec![1; l], 1)
        }
        Series::E => {
            // Bourbaki: chain 1-3-4-5-...-l with node 2 attached to node 4.
            edge(&mut cartan, 0, 2, -1, -1);
            edge(&mut cartan, 1, 3, -1, -1);
            for i in 2..l - 1 {
                edge(&mut cartan, i, i + 1, -1, -1);
            }
            (vec![1; l], 1)
        }
        Series::F => {
            edge(&mut cartan, 0, 1, -1, -1);
            edge(&mut cartan, 1, 2, -1, -2);
            edge(&mut cartan, 2, 3, -1, -1);
            (vec![2, 2, 1, 1], 2)
        }
        Series::G => {
            edge(&mut cartan, 0, 1, -1, -3);
            (vec![3, 1], 3)
        }
    };

    let mut incidence = vec![vec![0i64; l]; l];
    for i in 0..l {
        for j in 0..l {
            incidence[i][j] = if i == j { 0 } else { -cartan[i][j] };
        }
    }

    RootData {
        lie_type,
        cartan,
        incidence,
        r,
        lacing,
    }
}

/// Quantum integer [n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n} as a QtPoly.
fn quantum_integer(n: i64) -> QtPoly {
    let mut p = QtPoly::new();
    let mut e = n - 1;
    while e >= 1 - n {
        *p.entry((e, 0)).or_insert(0) += 1;
        e -= 2;
    }
    p
}

/// Entry C_ij(q, t) of the deformed Cartan matrix:
/// (q^{r_i} t^{-1} + q^{-r_i} t) on the diagonal, -[I_ij]_q off it.
pub fn deformed_cartan_entry(rd: &RootData, i: Node, j: Node) -> QtPoly {
    if i == j {
        let ri = rd.r_of(i);
        let mut p = QtPoly::new();
        p.insert((ri, -1), 1);
        p.insert((-ri, 1), 1);
        p
    } else {
        let mut p = quantum_integer(rd.incidence_entry(i, j));
        for v in p.values_mut() {
            *v = -*v;
        }
        p
    }
}

/// The monomial A_i(z a): each term c * q^k t^l of column i of the deformed
/// Cartan matrix contributes Y_j(z a q^k t^l)^c.
pub fn a_monomial(rd: &RootData, i: Node, a: Spectral) -> Monomial {
    let mut m = Monomial::one();
    for j in 1..=rd.rank() {
        for (&(k, l), &c) in deformed_cartan_entry(rd, j, i).iter() {
            m = m.multiply(&Monomial::variable(j, a.shifted(k, l), c));
        }
    }
    m
}
