//! Exact coefficients as factored rational functions of (q, t).
//!
//! Every coefficient produced by the expansion is a ratio of products of
//! binomials 1 - q^a t^b u^kappa times a signed monomial prefactor, where
//! u^kappa is a product of orbit generators. Keeping the factored shape
//! exact makes cancellation, inversion and the t -> 1 limit cheap and
//! auditable, with no polynomial expansion anywhere.
//!
//! Canonical form: each binomial is oriented so that its exponent vector
//! (qexp, texp, kappa entries by orbit) is lexicographically positive,
//! using 1 - x = -x (1 - x^{-1}); factor lists are sorted and common
//! factors of numerator and denominator are cancelled as multisets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::cartan::RootData;
use crate::monomial::{Monomial, Node, Spectral};

/// Arbitrary precision rational scalar.
pub type Rat = num_rational::BigRational;

/// Exact rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// base^e with integer e, exact.
pub fn rat_pow(base: &Rat, e: i64) -> Rat {
    if e == 0 {
        return Rat::one();
    }
    let mut b = if e < 0 { base.recip() } else { base.clone() };
    let mut acc = Rat::one();
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        k >>= 1;
    }
    acc
}

/// One binomial factor 1 - q^qexp t^texp u^kappa.
///
/// kappa is sparse, sorted by orbit, with no zero exponents; orbit 0 is
/// anchored to 1 and never appears here.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub qexp: i64,
    pub texp: i64,
    pub kappa: Vec<(u32, i64)>,
}

impl Factor {
    fn is_lex_negative(&self) -> bool {
        if self.qexp != 0 {
            return self.qexp < 0;
        }
        if self.texp != 0 {
            return self.texp < 0;
        }
        self.kappa.first().is_some_and(|&(_, e)| e < 0)
    }

    fn is_trivial(&self) -> bool {
        self.qexp == 0 && self.texp == 0 && self.kappa.is_empty()
    }

    fn eval(&self, q: &Rat, t: &Rat, orbits: &BTreeMap<u32, Rat>) -> Result<Rat, EvalError> {
        let mut x = rat_pow(q, self.qexp) * rat_pow(t, self.texp);
        for &(o, e) in &self.kappa {
            let v = orbits.get(&o).ok_or(EvalError::MissingOrbit(o))?;
            x *= rat_pow(v, e);
        }
        Ok(Rat::one() - x)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1-")?;
        let mut sep = "";
        if self.qexp != 0 {
            write!(f, "q^{}", self.qexp)?;
            sep = " ";
        }
        if self.texp != 0 {
            write!(f, "{}t^{}", sep, self.texp)?;
            sep = " ";
        }
        for &(o, e) in &self.kappa {
            write!(f, "{}u_{}", sep, o)?;
            if e != 1 {
                write!(f, "^{}", e)?;
            }
            sep = " ";
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffError {
    /// A binomial with the trivial exponent vector appeared, so a factor
    /// of the step coefficient vanishes identically.
    Resonance,
}

impl fmt::Display for CoeffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffError::Resonance => write!(f, "resonant step: a binomial factor vanishes identically"),
        }
    }
}

impl core::error::Error for CoeffError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// A factor vanished at the sample point.
    VanishingFactor,
    /// No value supplied for an orbit generator.
    MissingOrbit(u32),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::VanishingFactor => write!(f, "a binomial factor vanishes at the sample point"),
            EvalError::MissingOrbit(o) => write!(f, "no value supplied for orbit generator u_{}", o),
        }
    }
}

impl core::error::Error for EvalError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitError {
    /// Orbit generators survive in the coefficient.
    OrbitPresent,
    /// Unequal numbers of factors vanishing at t = 1.
    PoleOrZero,
    /// After matching the vanishing factors the remainder still depends
    /// on q.
    QDependent { residual: String },
}

impl fmt::Display for LimitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitError::OrbitPresent => write!(f, "coefficient still involves orbit generators"),
            LimitError::PoleOrZero => write!(f, "coefficient has a zero or pole at t = 1"),
            LimitError::QDependent { residual } => {
                write!(f, "t = 1 value depends on q: {}", residual)
            }
        }
    }
}

impl core::error::Error for LimitError {}

#[derive(Debug, Clone, Copy)]
enum Side {
    Num,
    Den,
}

/// A nonzero factored rational function
/// sign * q^qpref * t^tpref * prod u_o^gamma * prod num / prod den.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredCoeff {
    sign: i8,
    qpref: i64,
    tpref: i64,
    orbit_pref: Vec<(u32, i64)>,
    num: Vec<Factor>,
    den: Vec<Factor>,
}

impl Default for FactoredCoeff {
    fn default() -> FactoredCoeff {
        FactoredCoeff::one()
    }
}

impl FactoredCoeff {
    pub fn one() -> FactoredCoeff {
        FactoredCoeff {
            sign: 1,
            qpref: 0,
            tpref: 0,
            orbit_pref: Vec::new(),
            num: Vec::new(),
            den: Vec::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.sign == 1
            && self.qpref == 0
            && self.tpref == 0
            && self.orbit_pref.is_empty()
            && self.num.is_empty()
            && self.den.is_empty()
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn qpref(&self) -> i64 {
        self.qpref
    }

    pub fn tpref(&self) -> i64 {
        self.tpref
    }

    pub fn orbit_pref(&self) -> &[(u32, i64)] {
        &self.orbit_pref
    }

    pub fn num_factors(&self) -> &[Factor] {
        &self.num
    }

    pub fn den_factors(&self) -> &[Factor] {
        &self.den
    }

    /// Rebuilds a coefficient from raw parts, restoring the canonical
    /// form. Factors may arrive in either orientation.
    pub fn from_parts(
        sign: i8,
        qpref: i64,
        tpref: i64,
        orbit_pref: Vec<(u32, i64)>,
        num: Vec<Factor>,
        den: Vec<Factor>,
    ) -> Result<FactoredCoeff, CoeffError> {
        let mut out = FactoredCoeff {
            sign: if sign < 0 { -1 } else { 1 },
            qpref,
            tpref,
            orbit_pref: Vec::new(),
            num: Vec::new(),
            den: Vec::new(),
        };
        for (o, e) in orbit_pref {
            out.add_orbit_pref(o, e);
        }
        for f in num {
            out.push_factor(Side::Num, f.qexp, f.texp, f.kappa)?;
        }
        for f in den {
            out.push_factor(Side::Den, f.qexp, f.texp, f.kappa)?;
        }
        out.finalize();
        Ok(out)
    }

    fn add_orbit_pref(&mut self, orbit: u32, e: i64) {
        if e == 0 || orbit == 0 {
            return;
        }
        match self.orbit_pref.binary_search_by_key(&orbit, |&(o, _)| o) {
            Ok(k) => {
                self.orbit_pref[k].1 += e;
                if self.orbit_pref[k].1 == 0 {
                    self.orbit_pref.remove(k);
                }
            }
            Err(k) => self.orbit_pref.insert(k, (orbit, e)),
        }
    }

    fn push_factor(
        &mut self,
        side: Side,
        qexp: i64,
        texp: i64,
        mut kappa: Vec<(u32, i64)>,
    ) -> Result<(), CoeffError> {
        kappa.retain(|&(o, e)| o != 0 && e != 0);
        kappa.sort_by_key(|&(o, _)| o);
        let mut f = Factor { qexp, texp, kappa };
        if f.is_trivial() {
            return Err(CoeffError::Resonance);
        }
        if f.is_lex_negative() {
            self.sign = -self.sign;
            let dir = match side {
                Side::Num => 1,
                Side::Den => -1,
            };
            self.qpref += dir * f.qexp;
            self.tpref += dir * f.texp;
            for &(o, e) in &f.kappa {
                self.add_orbit_pref(o, dir * e);
            }
            f.qexp = -f.qexp;
            f.texp = -f.texp;
            for k in &mut f.kappa {
                k.1 = -k.1;
            }
        }
        match side {
            Side::Num => self.num.push(f),
            Side::Den => self.den.push(f),
        }
        Ok(())
    }

    /// Sorts factor lists and cancels common factors as multisets.
    fn finalize(&mut self) {
        self.num.sort();
        self.den.sort();
        let mut counts: BTreeMap<&Factor, i64> = BTreeMap::new();
        for f in &self.num {
            *counts.entry(f).or_insert(0) += 1;
        }
        for f in &self.den {
            *counts.entry(f).or_insert(0) -= 1;
        }
        let mut num = Vec::with_capacity(self.num.len());
        let mut den = Vec::with_capacity(self.den.len());
        for (f, c) in counts {
            for _ in 0..c.abs() {
                if c > 0 {
                    num.push(f.clone());
                } else {
                    den.push(f.clone());
                }
            }
        }
        self.num = num;
        self.den = den;
    }

    pub fn mul(&self, other: &FactoredCoeff) -> FactoredCoeff {
        let mut out = self.clone();
        out.sign *= other.sign;
        out.qpref += other.qpref;
        out.tpref += other.tpref;
        for &(o, e) in &other.orbit_pref {
            out.add_orbit_pref(o, e);
        }
        out.num.extend(other.num.iter().cloned());
        out.den.extend(other.den.iter().cloned());
        out.finalize();
        out
    }

    pub fn inverse(&self) -> FactoredCoeff {
        FactoredCoeff {
            sign: self.sign,
            qpref: -self.qpref,
            tpref: -self.tpref,
            orbit_pref: self.orbit_pref.iter().map(|&(o, e)| (o, -e)).collect(),
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    pub fn div(&self, other: &FactoredCoeff) -> FactoredCoeff {
        self.mul(&other.inverse())
    }

    pub fn negate(mut self) -> FactoredCoeff {
        self.sign = -self.sign;
        self
    }

    /// Multiplies by q^dq t^dt.
    pub fn mul_qt(mut self, dq: i64, dt: i64) -> FactoredCoeff {
        self.qpref += dq;
        self.tpref += dt;
        self
    }

    /// Multiplies by u_orbit^e.
    pub fn mul_orbit(mut self, orbit: u32, e: i64) -> FactoredCoeff {
        self.add_orbit_pref(orbit, e);
        self
    }

    /// Multiplies by the binomial 1 - q^qexp t^texp.
    pub fn mul_binomial_num(mut self, qexp: i64, texp: i64) -> Result<FactoredCoeff, CoeffError> {
        self.push_factor(Side::Num, qexp, texp, Vec::new())?;
        self.finalize();
        Ok(self)
    }

    /// Divides by the binomial 1 - q^qexp t^texp.
    pub fn mul_binomial_den(mut self, qexp: i64, texp: i64) -> Result<FactoredCoeff, CoeffError> {
        self.push_factor(Side::Den, qexp, texp, Vec::new())?;
        self.finalize();
        Ok(self)
    }

    /// Multiplies by the binomial 1 - q^qexp t^texp u^kappa.
    pub fn mul_factor_num(
        mut self,
        qexp: i64,
        texp: i64,
        kappa: Vec<(u32, i64)>,
    ) -> Result<FactoredCoeff, CoeffError> {
        self.push_factor(Side::Num, qexp, texp, kappa)?;
        self.finalize();
        Ok(self)
    }

    /// Divides by the binomial 1 - q^qexp t^texp u^kappa.
    pub fn mul_factor_den(
        mut self,
        qexp: i64,
        texp: i64,
        kappa: Vec<(u32, i64)>,
    ) -> Result<FactoredCoeff, CoeffError> {
        self.push_factor(Side::Den, qexp, texp, kappa)?;
        self.finalize();
        Ok(self)
    }

    /// Exact value at a sample point. Errors if any factor on either side
    /// vanishes there.
    pub fn eval(&self, q: &Rat, t: &Rat, orbits: &BTreeMap<u32, Rat>) -> Result<Rat, EvalError> {
        let mut v = rat_pow(q, self.qpref) * rat_pow(t, self.tpref);
        if self.sign < 0 {
            v = -v;
        }
        for &(o, e) in &self.orbit_pref {
            let u = orbits.get(&o).ok_or(EvalError::MissingOrbit(o))?;
            v *= rat_pow(u, e);
        }
        for f in &self.num {
            let x = f.eval(q, t, orbits)?;
            if x.is_zero() {
                return Err(EvalError::VanishingFactor);
            }
            v *= x;
        }
        for f in &self.den {
            let x = f.eval(q, t, orbits)?;
            if x.is_zero() {
                return Err(EvalError::VanishingFactor);
            }
            v /= x;
        }
        Ok(v)
    }

    fn all_orbits(&self) -> BTreeSet<u32> {
        let mut set: BTreeSet<u32> = self.orbit_pref.iter().map(|&(o, _)| o).collect();
        for f in self.num.iter().chain(&self.den) {
            set.extend(f.kappa.iter().map(|&(o, _)| o));
        }
        set
    }

    /// Decides equality as rational functions: structural equality of the
    /// canonical forms, else agreement at eight deterministic exact
    /// rational sample points.
    pub fn equals(&self, other: &FactoredCoeff, seed: u64) -> bool {
        if self == other {
            return true;
        }
        let mut orbits = self.all_orbits();
        orbits.extend(other.all_orbits());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        let mut draws = 0;
        while checked < 8 {
            draws += 1;
            if draws > 1024 {
                return false;
            }
            let q = sample_rat(&mut rng);
            let t = sample_rat(&mut rng);
            let vals: BTreeMap<u32, Rat> =
                orbits.iter().map(|&o| (o, sample_rat(&mut rng))).collect();
            let (Ok(x), Ok(y)) = (self.eval(&q, &t, &vals), other.eval(&q, &t, &vals)) else {
                continue;
            };
            if x != y {
                return false;
            }
            checked += 1;
        }
        true
    }

    /// Exact value of the t -> 1 limit.
    ///
    /// Factors 1 - t^b vanishing at t = 1 must pair up between numerator
    /// and denominator; each pair contributes b_num / b_den. What remains
    /// is a function of q alone and must be constant, which is checked at
    /// three deterministic sample points.
    pub fn limit_t1(&self) -> Result<Rat, LimitError> {
        if !self.orbit_pref.is_empty()
            || self.num.iter().chain(&self.den).any(|f| !f.kappa.is_empty())
        {
            return Err(LimitError::OrbitPresent);
        }
        let tnum: Vec<i64> = self.num.iter().filter(|f| f.qexp == 0).map(|f| f.texp).collect();
        let tden: Vec<i64> = self.den.iter().filter(|f| f.qexp == 0).map(|f| f.texp).collect();
        if tnum.len() != tden.len() {
            return Err(LimitError::PoleOrZero);
        }
        let mut scale = Rat::one();
        for b in tnum {
            scale *= rat(b, 1);
        }
        for b in tden {
            scale /= rat(b, 1);
        }
        let qn: Vec<i64> = self.num.iter().filter(|f| f.qexp != 0).map(|f| f.qexp).collect();
        let qd: Vec<i64> = self.den.iter().filter(|f| f.qexp != 0).map(|f| f.qexp).collect();
        let residual_at = |q: &Rat| -> Option<Rat> {
            let mut v = rat_pow(q, self.qpref);
            if self.sign < 0 {
                v = -v;
            }
            for &a in &qn {
                let x = Rat::one() - rat_pow(q, a);
                if x.is_zero() {
                    return None;
                }
                v *= x;
            }
            for &a in &qd {
                let x = Rat::one() - rat_pow(q, a);
                if x.is_zero() {
                    return None;
                }
                v /= x;
            }
            Some(v)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x714c_1717);
        let mut values: Vec<Rat> = Vec::new();
        let mut draws = 0;
        while values.len() < 3 {
            draws += 1;
            if draws > 1024 {
                return Err(LimitError::PoleOrZero);
            }
            let q = sample_rat(&mut rng);
            if let Some(v) = residual_at(&q) {
                values.push(v);
            }
        }
        if values.iter().any(|v| v != &values[0]) {
            return Err(LimitError::QDependent {
                residual: self.render_q_residual(&qn, &qd),
            });
        }
        Ok(scale * values[0].clone())
    }

    fn render_q_residual(&self, qn: &[i64], qd: &[i64]) -> String {
        let mut s = String::new();
        if self.sign < 0 {
            s.push('-');
        }
        if self.qpref != 0 {
            s.push_str(&alloc::format!("q^{} ", self.qpref));
        }
        if qn.is_empty() {
            s.push('1');
        }
        for a in qn {
            s.push_str(&alloc::format!("(1-q^{})", a));
        }
        if !qd.is_empty() {
            s.push_str(" / ");
            for a in qd {
                s.push_str(&alloc::format!("(1-q^{})", a));
            }
        }
        s
    }
}

impl fmt::Display for FactoredCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        if self.sign < 0 {
            write!(f, "-")?;
        }
        let mut head = Vec::new();
        if self.qpref != 0 {
            head.push(alloc::format!("q^{}", self.qpref));
        }
        if self.tpref != 0 {
            head.push(alloc::format!("t^{}", self.tpref));
        }
        for &(o, e) in &self.orbit_pref {
            if e == 1 {
                head.push(alloc::format!("u_{}", o));
            } else {
                head.push(alloc::format!("u_{}^{}", o, e));
            }
        }
        let mut wrote = false;
        for part in &head {
            if wrote {
                write!(f, " ")?;
            }
            write!(f, "{}", part)?;
            wrote = true;
        }
        for fac in &self.num {
            if wrote {
                write!(f, " ")?;
            }
            write!(f, "{}", fac)?;
            wrote = true;
        }
        if !wrote {
            write!(f, "1")?;
        }
        if !self.den.is_empty() {
            write!(f, " / ")?;
            for (k, fac) in self.den.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", fac)?;
            }
        }
        Ok(())
    }
}

fn sample_rat(rng: &mut ChaCha8Rng) -> Rat {
    let n = 1 + (rng.next_u32() % 10_000) as i64;
    let d = 1 + (rng.next_u32() % 10_000) as i64;
    rat(n, d)
}

/// The u-exponents of the ratio u_a / u_b, with the anchored orbit 0
/// dropped since u_0 = 1.
pub(crate) fn orbit_ratio(a: u32, b: u32) -> Vec<(u32, i64)> {
    if a == b {
        return Vec::new();
    }
    let mut v: Vec<(u32, i64)> = [(a, 1i64), (b, -1i64)]
        .into_iter()
        .filter(|&(o, _)| o != 0)
        .collect();
    v.sort_by_key(|&(o, _)| o);
    v
}

/// The coefficient multiplier for the expansion move at the admissible
/// variable (i, a) of m. The caller guarantees that m is generic and that
/// (i, a) is admissible; node i variables at other spectral parameters
/// each contribute four binomials built from the ratio a / b shifted by
/// q^{-2 r_i} and t^2.
///
/// A trivial binomial can only arise from a variable with negative
/// exponent at a q^{-2 r_i} t^2, in which case the move would leave the
/// generic regime and the step is reported as resonant.
pub fn step_coefficient(
    rd: &RootData,
    m: &Monomial,
    i: Node,
    a: Spectral,
) -> Result<FactoredCoeff, CoeffError> {
    let s = 2 * rd.r_of(i);
    let mut out = FactoredCoeff::one();
    for (j, b, e) in m.entries() {
        if j != i || b == a {
            continue;
        }
        let dq = a.qexp - b.qexp;
        let dt = a.texp - b.texp;
        let kappa = orbit_ratio(a.orbit, b.orbit);
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                out.push_factor(Side::Num, dq - s, dt, kappa.clone())?;
                out.push_factor(Side::Num, dq, dt + 2, kappa.clone())?;
                out.push_factor(Side::Den, dq, dt, kappa.clone())?;
                out.push_factor(Side::Den, dq - s, dt + 2, kappa.clone())?;
            } else {
                out.push_factor(Side::Num, dq, dt, kappa.clone())?;
                out.push_factor(Side::Num, dq - s, dt + 2, kappa.clone())?;
                out.push_factor(Side::Den, dq - s, dt, kappa.clone())?;
                out.push_factor(Side::Den, dq, dt + 2, kappa.clone())?;
            }
        }
    }
    out.finalize();
    Ok(out)
}
