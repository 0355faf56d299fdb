//! Normally ordered monomials in the generating variables Y_i(z a).
//!
//! A spectral parameter `a` lives on the multiplicative lattice
//! `u_k q^m t^n`, where `u_k` is a formal generator for the k-th coset of
//! the (q, t)-lattice inside the spectral torus. Orbit index 0 is the
//! distinguished coset anchored at 1. Orbits are labels: two spectral
//! parameters in different orbits are never identified by any predicate.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::cartan::{a_monomial, RootData};

/// 1-based Dynkin node index.
pub type Node = usize;

/// Spectral parameter u_orbit q^qexp t^texp.
///
/// Field order gives the canonical ordering (orbit, then q, then t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spectral {
    pub orbit: u32,
    pub qexp: i64,
    pub texp: i64,
}

impl Spectral {
    pub const UNIT: Spectral = Spectral {
        orbit: 0,
        qexp: 0,
        texp: 0,
    };

    pub fn new(orbit: u32, qexp: i64, texp: i64) -> Spectral {
        Spectral { orbit, qexp, texp }
    }

    /// Same orbit, exponents shifted by (dq, dt).
    pub fn shifted(self, dq: i64, dt: i64) -> Spectral {
        Spectral {
            orbit: self.orbit,
            qexp: self.qexp + dq,
            texp: self.texp + dt,
        }
    }
}

impl fmt::Display for Spectral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{} t^{}", self.qexp, self.texp)?;
        if self.orbit != 0 {
            write!(f, ", u_{}", self.orbit)?;
        }
        Ok(())
    }
}

/// A normally ordered monomial: finitely many variables Y_i(z a) with
/// nonzero integer exponents, kept sorted by (node, spectral).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    entries: BTreeMap<(Node, Spectral), i64>,
}

impl Monomial {
    /// The identity monomial.
    pub fn one() -> Monomial {
        Monomial::default()
    }

    /// A single variable Y_node(z a)^exp (identity when exp = 0).
    pub fn variable(node: Node, a: Spectral, exp: i64) -> Monomial {
        let mut entries = BTreeMap::new();
        if exp != 0 {
            entries.insert((node, a), exp);
        }
        Monomial { entries }
    }

    pub fn from_entries<I: IntoIterator<Item = (Node, Spectral, i64)>>(iter: I) -> Monomial {
        let mut m = Monomial::one();
        for (node, a, e) in iter {
            m.add_exponent(node, a, e);
        }
        m
    }

    fn add_exponent(&mut self, node: Node, a: Spectral, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.entries.entry((node, a)).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.entries.remove(&(node, a));
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct variables.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterates entries in canonical (node, spectral) order.
    pub fn entries(&self) -> impl Iterator<Item = (Node, Spectral, i64)> + '_ {
        self.entries.iter().map(|(&(n, a), &e)| (n, a, e))
    }

    pub fn multiply(&self, other: &Monomial) -> Monomial {
        let mut m = self.clone();
        for (n, a, e) in other.entries() {
            m.add_exponent(n, a, e);
        }
        m
    }

    pub fn inverse(&self) -> Monomial {
        Monomial {
            entries: self.entries.iter().map(|(&k, &e)| (k, -e)).collect(),
        }
    }

    /// Degree d_{i,a}: the exponent of Y_i(z a), zero when absent.
    pub fn degree(&self, i: Node, a: Spectral) -> i64 {
        self.entries.get(&(i, a)).copied().unwrap_or(0)
    }

    /// Shifts every spectral parameter by (dq, dt).
    pub fn shift(&self, dq: i64, dt: i64) -> Monomial {
        Monomial {
            entries: self
                .entries
                .iter()
                .map(|(&(n, a), &e)| ((n, a.shifted(dq, dt)), e))
                .collect(),
        }
    }

    /// Largest node index referenced (0 for the identity).
    pub fn max_node(&self) -> Node {
        self.entries.keys().map(|&(n, _)| n).max().unwrap_or(0)
    }

    /// All exponents positive.
    pub fn is_dominant(&self) -> bool {
        self.entries.values().all(|&e| e > 0)
    }

    /// All exponents negative.
    pub fn is_antidominant(&self) -> bool {
        self.entries.values().all(|&e| e < 0)
    }

    /// All exponents are +1 or -1.
    pub fn is_generic(&self) -> bool {
        self.entries.values().all(|&e| e == 1 || e == -1)
    }

    /// Regularity: for every node i with shift step s = 2 r_i,
    /// (1) d_{i,a} > 0 implies d_{i,a q^-s} >= 0 and d_{i,a t^2} >= 0;
    /// (2) d_{i,a} > 0 and d_{i,a q^-s t^2} > 0 imply d_{i,a q^-s} > 0
    ///     and d_{i,a t^2} > 0;
    /// (2') the same as (2) with every inequality reversed.
    pub fn is_regular(&self, rd: &RootData) -> bool {
        for (i, a, e) in self.entries() {
            let s = 2 * rd.r_of(i);
            let d_q = self.degree(i, a.shifted(-s, 0));
            let d_t = self.degree(i, a.shifted(0, 2));
            let d_qt = self.degree(i, a.shifted(-s, 2));
            if e > 0 {
                if d_q < 0 || d_t < 0 {
                    return false;
                }
                if d_qt > 0 && (d_q <= 0 || d_t <= 0) {
                    return false;
                }
            } else if e < 0 && d_qt < 0 && (d_q >= 0 || d_t >= 0) {
                return false;
            }
        }
        true
    }

    /// The diagonal square condition: whenever d_{i,a} = d_{i,a q^-s t^2}
    /// is nonzero, all four corners d_{i,a}, d_{i,a q^-s}, d_{i,a t^2},
    /// d_{i,a q^-s t^2} agree. Used in property tests alongside
    /// [`Monomial::is_regular`].
    pub fn condition_r(&self, rd: &RootData) -> bool {
        for (i, a, e) in self.entries() {
            let s = 2 * rd.r_of(i);
            if self.degree(i, a.shifted(-s, 2)) == e
                && (self.degree(i, a.shifted(-s, 0)) != e || self.degree(i, a.shifted(0, 2)) != e)
            {
                return false;
            }
        }
        true
    }

    /// Whether (i, a) is admissible: d_{i,a} > 0 while both d_{i,a q^-2r_i}
    /// and d_{i,a t^2} vanish.
    pub fn is_admissible(&self, rd: &RootData, i: Node, a: Spectral) -> bool {
        let s = 2 * rd.r_of(i);
        self.degree(i, a) > 0
            && self.degree(i, a.shifted(-s, 0)) == 0
            && self.degree(i, a.shifted(0, 2)) == 0
    }

    /// All admissible variables in canonical order.
    pub fn admissible_variables(&self, rd: &RootData) -> Vec<(Node, Spectral)> {
        self.entries()
            .filter(|&(i, a, e)| e > 0 && self.is_admissible(rd, i, a))
            .map(|(i, a, _)| (i, a))
            .collect()
    }

    /// Multiplies by A_i(z a q^{-r_i} t)^{-1}, the expansion move at the
    /// admissible variable (i, a).
    pub fn apply_a_inverse(&self, rd: &RootData, i: Node, a: Spectral) -> Monomial {
        let c = a.shifted(-rd.r_of(i), 1);
        self.multiply(&a_monomial(rd, i, c).inverse())
    }

    /// Weight in the fundamental weight basis: per-node exponent sums.
    /// Nodes must lie in 1..=rank.
    pub fn weight(&self, rank: usize) -> Vec<i64> {
        let mut w = alloc::vec![0i64; rank];
        for (n, _, e) in self.entries() {
            w[n - 1] += e;
        }
        w
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut first = true;
        for (n, a, e) in self.entries() {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            write!(f, "Y[{}]({})", n, a)?;
            if e != 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl core::error::Error for ParseError {}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Cursor<'a> {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: String::from(message),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError {
                position: self.pos,
                message: alloc::format!("expected '{}'", b as char),
            })
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(ParseError {
                position: self.pos,
                message: String::from("expected an integer"),
            });
        }
        core::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ParseError {
                position: start,
                message: String::from("integer out of range"),
            })
    }

    /// One `Y[i](q^m t^n[, u_k])[^e]` term.
    fn term(&mut self) -> Result<(Node, Spectral, i64), ParseError> {
        if self.bump() != Some(b'Y') {
            return Err(ParseError {
                position: self.pos.saturating_sub(1),
                message: String::from("expected 'Y'"),
            });
        }
        self.expect(b'[')?;
        self.skip_ws();
        let node = self.integer()?;
        if node < 1 {
            return Err(self.err("node index must be at least 1"));
        }
        self.skip_ws();
        self.expect(b']')?;
        self.expect(b'(')?;
        self.skip_ws();
        self.expect(b'q')?;
        self.expect(b'^')?;
        let qexp = self.integer()?;
        self.skip_ws();
        self.expect(b't')?;
        self.expect(b'^')?;
        let texp = self.integer()?;
        self.skip_ws();
        let mut orbit = 0u32;
        if self.peek() == Some(b',') {
            self.pos += 1;
            self.skip_ws();
            self.expect(b'u')?;
            self.expect(b'_')?;
            let o = self.integer()?;
            if o < 0 {
                return Err(self.err("orbit index must be non-negative"));
            }
            orbit = o as u32;
            self.skip_ws();
        }
        self.expect(b')')?;
        let mut exp = 1i64;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            exp = self.integer()?;
        }
        Ok((node as Node, Spectral::new(orbit, qexp, texp), exp))
    }
}

impl FromStr for Monomial {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Monomial, ParseError> {
        let mut cur = Cursor::new(s);
        cur.skip_ws();
        if cur.peek() == Some(b'1') {
            let save = cur.pos;
            cur.pos += 1;
            cur.skip_ws();
            if cur.peek().is_none() {
                return Ok(Monomial::one());
            }
            cur.pos = save;
        }
        let mut m = Monomial::one();
        let mut any = false;
        loop {
            cur.skip_ws();
            match cur.peek() {
                None => break,
                Some(b'*') => {
                    if !any {
                        return Err(cur.err("unexpected '*' before the first term"));
                    }
                    cur.pos += 1;
                    cur.skip_ws();
                }
                _ => {}
            }
            if cur.peek().is_none() {
                return Err(cur.err("dangling separator"));
            }
            let (node, a, e) = cur.term()?;
            m.add_exponent(node, a, e);
            any = true;
        }
        if !any {
            return Err(cur.err("empty monomial"));
        }
        Ok(m)
    }
}
