//! Sparse multivariate polynomials over GF(2).
//!
//! Every coefficient is 1, so a polynomial is a set of monomials and
//! addition is symmetric difference. Symbols marked invertible (torus
//! parameters) may carry negative exponents. The symbol `r` stands for √a
//! and `a` is written for r²; the subfield k is modelled as the subring of
//! even r-degree.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

pub const SQRT_A: &str = "r";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("{0} is not an invertible monomial")]
    NotInvertible(String),
    #[error("binding for invertible symbol {0} must be an invertible monomial")]
    InvertibilityViolation(String),
    #[error("negative exponent on non-invertible symbol {0}")]
    NegativeExponent(String),
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
}

/// A polynomial variable.
///
/// Symbols are ordered naturally: alphabetic prefix first, then the numeric
/// suffix as a number, so `x4 < x10 < y`.
#[derive(Clone)]
pub struct Symbol {
    name: Arc<str>,
    invertible: bool,
    split: usize,
    index: u64,
}

impl Symbol {
    fn build(name: &str, invertible: bool) -> Symbol {
        let split = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let index = name[split..].parse().unwrap_or(0);
        Symbol { name: name.into(), invertible, split, index }
    }

    /// A coefficient variable (non-negative exponents only).
    pub fn var(name: &str) -> Symbol {
        Symbol::build(name, false)
    }

    /// A torus parameter, allowed negative exponents.
    pub fn unit(name: &str) -> Symbol {
        Symbol::build(name, true)
    }

    /// The distinguished symbol r = √a.
    pub fn sqrt_a() -> Symbol {
        Symbol::var(SQRT_A)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    pub fn is_sqrt_a(&self) -> bool {
        &*self.name == SQRT_A && !self.invertible
    }

    fn key(&self) -> (&str, u64, &str, bool) {
        (&self.name[..self.split], self.index, &self.name, self.invertible)
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.invertible == other.invertible
    }
}
impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
        self.invertible.hash(state);
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A power product, factors sorted by symbol, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Symbol, i32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn power(sym: Symbol, exp: i32) -> Result<Monomial, PolyError> {
        if exp < 0 && !sym.invertible {
            return Err(PolyError::NegativeExponent(sym.name.to_string()));
        }
        Ok(if exp == 0 { Monomial::one() } else { Monomial(vec![(sym, exp)]) })
    }

    pub fn factors(&self) -> &[(Symbol, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, sym: &Symbol) -> i32 {
        self.0.iter().find(|(s, _)| s == sym).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + other.0[j].1;
                    if e != 0 {
                        out.push((self.0[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Raises to an integer power. Negative powers need every symbol to be
    /// invertible.
    pub fn pow(&self, k: i32) -> Result<Monomial, PolyError> {
        if k < 0 {
            if let Some((s, _)) = self.0.iter().find(|(s, _)| !s.invertible) {
                return Err(PolyError::NegativeExponent(s.name.to_string()));
            }
        }
        if k == 0 {
            return Ok(Monomial::one());
        }
        Ok(Monomial(self.0.iter().map(|(s, e)| (s.clone(), e * k)).collect()))
    }

    pub fn is_invertible(&self) -> bool {
        self.0.iter().all(|(s, _)| s.invertible)
    }

    fn all_even(&self) -> bool {
        self.0.iter().all(|(_, e)| e % 2 == 0)
    }

    fn halve(&self) -> Monomial {
        Monomial(self.0.iter().map(|(s, e)| (s.clone(), e / 2)).collect())
    }

    fn render(&self) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (s, e) in &self.0 {
            if s.is_sqrt_a() {
                let (k, rem) = (e / 2, e % 2);
                match k {
                    0 => {}
                    1 => parts.push("a".to_string()),
                    _ => parts.push(format!("a^{k}")),
                }
                if rem == 1 {
                    parts.push(SQRT_A.to_string());
                }
            } else if *e == 1 {
                parts.push(s.name.to_string());
            } else {
                parts.push(format!("{}^{}", s.name, e));
            }
        }
        parts.join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A polynomial over GF(2): a finite set of monomials.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeSet<Monomial>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Poly {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Poly { terms }
    }

    pub fn from_monomials(ms: impl IntoIterator<Item = Monomial>) -> Poly {
        let mut p = Poly::zero();
        for m in ms {
            p.toggle(m);
        }
        p
    }

    pub fn symbol(sym: Symbol) -> Poly {
        Poly::from_monomial(Monomial(vec![(sym, 1)]))
    }

    pub fn var(name: &str) -> Poly {
        Poly::symbol(Symbol::var(name))
    }

    pub fn unit(name: &str) -> Poly {
        Poly::symbol(Symbol::unit(name))
    }

    /// r = √a.
    pub fn sqrt_a() -> Poly {
        Poly::symbol(Symbol::sqrt_a())
    }

    /// a = r².
    pub fn a() -> Poly {
        Poly::from_monomial(Monomial(vec![(Symbol::sqrt_a(), 2)]))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(Monomial::is_one)
    }

    pub fn monomials(&self) -> impl DoubleEndedIterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        Poly { terms: self.terms.symmetric_difference(&other.terms).cloned().collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for m in &self.terms {
            for n in &other.terms {
                out.toggle(m.mul(n));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|t| t.mul(m)).collect() }
    }

    /// Frobenius: (Σ m)² = Σ m² in characteristic 2.
    pub fn square(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|m| m.pow(2).expect("positive power")).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// The single monomial of an invertible polynomial, if it is one.
    pub fn as_invertible_monomial(&self) -> Option<&Monomial> {
        match self.terms.len() {
            1 => self.terms.iter().next().filter(|m| m.is_invertible()),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Result<Poly, PolyError> {
        let m = self.as_invertible_monomial().ok_or_else(|| PolyError::NotInvertible(self.to_string()))?;
        Ok(Poly::from_monomial(m.pow(-1)?))
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.iter().flat_map(|m| m.0.iter().map(|(s, _)| s.clone())).collect()
    }

    pub fn contains_symbol(&self, sym: &Symbol) -> bool {
        self.terms.iter().any(|m| m.exponent(sym) != 0)
    }

    /// Simultaneous substitution of symbols by polynomials.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Poly>) -> Result<Poly, PolyError> {
        for (s, v) in bindings {
            if s.invertible && v.as_invertible_monomial().is_none() {
                return Err(PolyError::InvertibilityViolation(s.name.to_string()));
            }
        }
        let mut out = Poly::zero();
        for m in &self.terms {
            let mut term = Poly::one();
            let mut rest = Vec::new();
            for (s, e) in &m.0 {
                match bindings.get(s) {
                    Some(v) if *e >= 0 => term = term.mul(&v.pow(*e as u32)),
                    Some(v) => {
                        let inv = v.as_invertible_monomial().expect("checked above").pow(*e)?;
                        term = term.mul_monomial(&inv);
                    }
                    None => rest.push((s.clone(), *e)),
                }
            }
            out = out.add(&term.mul_monomial(&Monomial(rest)));
        }
        Ok(out)
    }

    /// True iff every monomial has even degree in r, i.e. the value lies in k.
    pub fn is_k_rational(&self) -> bool {
        let r = Symbol::sqrt_a();
        self.terms.iter().all(|m| m.exponent(&r) % 2 == 0)
    }

    /// q with q² = self, when every exponent of every monomial is even.
    pub fn square_root_if_perfect_square(&self) -> Option<Poly> {
        if self.terms.iter().all(Monomial::all_even) {
            Some(Poly { terms: self.terms.iter().map(Monomial::halve).collect() })
        } else {
            None
        }
    }

    /// Splits into (part involving any of `vars`, remainder).
    pub fn split_by(&self, vars: &BTreeSet<Symbol>) -> (Poly, Poly) {
        let (with, without): (BTreeSet<_>, BTreeSet<_>) =
            self.terms.iter().cloned().partition(|m| m.0.iter().any(|(s, _)| vars.contains(s)));
        (Poly { terms: with }, Poly { terms: without })
    }

    /// Parses the textual rendering, e.g. `x5*x10+x9^2+a`. Names for which
    /// `invertible` returns true become torus parameters.
    pub fn parse_with(src: &str, invertible: impl Fn(&str) -> bool) -> Result<Poly, PolyError> {
        let err = || PolyError::Parse(src.to_string());
        let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(Poly::zero());
        }
        let mut out = Poly::zero();
        for term in compact.split('+') {
            let mut mono = Monomial::one();
            for factor in term.split('*') {
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<i32>().map_err(|_| err())?),
                    None => (factor, 1),
                };
                let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                    && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                let m = if name == "1" && exp == 1 {
                    Monomial::one()
                } else if name == "a" {
                    Monomial::power(Symbol::sqrt_a(), 2 * exp)?
                } else if valid {
                    let sym = if invertible(name) { Symbol::unit(name) } else { Symbol::var(name) };
                    Monomial::power(sym, exp)?
                } else {
                    return Err(err());
                };
                mono = mono.mul(&m);
            }
            out.toggle(mono);
        }
        Ok(out)
    }

    /// Parses with every symbol non-invertible.
    pub fn parse(src: &str) -> Result<Poly, PolyError> {
        Poly::parse_with(src, |_| false)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(Monomial::render).collect();
        f.write_str(&parts.join("+"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Monomial> for Poly {
    fn from(m: Monomial) -> Poly {
        Poly::from_monomial(m)
    }
}

/// Dense univariate polynomial over GF(2), bit i holding the coefficient
/// of tⁱ. Used for exact elimination over GF(2)(t).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2x(Vec<u64>);

impl Gf2x {
    pub fn zero() -> Gf2x {
        Gf2x(Vec::new())
    }

    pub fn one() -> Gf2x {
        Gf2x(vec![1])
    }

    pub fn monomial(deg: usize) -> Gf2x {
        let mut v = vec![0; deg / 64 + 1];
        v[deg / 64] = 1 << (deg % 64);
        Gf2x(v)
    }

    fn trim(mut self) -> Gf2x {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.0.last()?;
        Some((self.0.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    fn bit(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn add(&self, other: &Gf2x) -> Gf2x {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.0.get(i).unwrap_or(&0) ^ other.0.get(i).unwrap_or(&0)).collect();
        Gf2x(v).trim()
    }

    fn shl(&self, k: usize) -> Gf2x {
        if self.is_zero() {
            return Gf2x::zero();
        }
        let (words, bits) = (k / 64, k % 64);
        let mut v = vec![0u64; self.0.len() + words + 1];
        for (i, &w) in self.0.iter().enumerate() {
            v[i + words] |= w << bits;
            if bits != 0 {
                v[i + words + 1] |= w >> (64 - bits);
            }
        }
        Gf2x(v).trim()
    }

    pub fn mul(&self, other: &Gf2x) -> Gf2x {
        let mut acc = Gf2x::zero();
        if let Some(d) = other.degree() {
            for i in 0..=d {
                if other.bit(i) {
                    acc = acc.add(&self.shl(i));
                }
            }
        }
        acc
    }

    pub fn div_rem(&self, divisor: &Gf2x) -> (Gf2x, Gf2x) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut q = Gf2x::zero();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            q = q.add(&Gf2x::monomial(shift));
            r = r.add(&divisor.shl(shift));
        }
        (q, r)
    }

    pub fn gcd(&self, other: &Gf2x) -> Gf2x {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    /// Converts a polynomial in the single symbol `t` (or a constant).
    pub fn from_poly(p: &Poly, t: &Symbol) -> Option<Gf2x> {
        let mut out = Gf2x::zero();
        for m in p.monomials() {
            let e = m.exponent(t);
            if e < 0 || m.factors().len() > usize::from(e != 0) {
                return None;
            }
            out = out.add(&Gf2x::monomial(e as usize));
        }
        Some(out)
    }

    pub fn to_poly(&self, t: &Symbol) -> Poly {
        let mut out = Poly::zero();
        if let Some(d) = self.degree() {
            for i in 0..=d {
                if self.bit(i) {
                    out.toggle(Monomial::power(t.clone(), i as i32).expect("non-negative"));
                }
            }
        }
        out
    }
}

impl fmt::Debug for Gf2x {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly(&Symbol::var("t")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        Poly::parse_with(s, |n| n.starts_with('s')).unwrap()
    }

    #[test]
    fn addition() {
        assert!(p("r").add(&p("r")).is_zero());
        assert_eq!(p("x4").add(&p("x5")).to_string(), "x5+x4");
        assert_eq!(p("x9^2+a").add(&p("a")), p("x9^2"));
    }

    #[test]
    fn multiplication() {
        let yx = p("y+x9");
        assert_eq!(yx.mul(&yx), p("y^2+x9^2"));
        assert_eq!(p("r").mul(&p("r")), Poly::a());
        assert_eq!(p("r").mul(&p("r")).to_string(), "a");
        assert!(p("s").mul(&p("s^-1")).is_one());
        assert_eq!(Poly::var("x").inverse(), Err(PolyError::NotInvertible("x".into())));
        assert!(Monomial::power(Symbol::var("x"), -1).is_err());
    }

    #[test]
    fn substitution() {
        let y = Symbol::var("y");
        let bind = |s: &str, v: Poly| BTreeMap::from([(Symbol::var(s), v)]);
        assert_eq!(
            p("x4^2+x9^2+a").substitute(&bind("x4", Poly::symbol(y))).unwrap(),
            p("y^2+x9^2+a")
        );
        assert_eq!(p("x4+x5").substitute(&BTreeMap::new()).unwrap(), p("x4+x5"));
        assert_eq!(p("x5*x10").substitute(&bind("x10", p("x5"))).unwrap(), p("x5^2"));
        let bad = BTreeMap::from([(Symbol::unit("s"), p("x+1"))]);
        assert!(matches!(p("s").substitute(&bad), Err(PolyError::InvertibilityViolation(_))));
        let good = BTreeMap::from([(Symbol::unit("s"), p("s1^2"))]);
        assert_eq!(p("s^-1*x").substitute(&good).unwrap(), p("s1^-2*x"));
    }

    #[test]
    fn rationality() {
        assert!(!p("r").is_k_rational());
        assert!(p("r^2").is_k_rational());
        assert!(p("x9^2+r^2").is_k_rational());
    }

    #[test]
    fn square_roots() {
        assert_eq!(p("y^2+x9^2").square_root_if_perfect_square(), Some(p("y+x9")));
        assert_eq!(Poly::zero().square_root_if_perfect_square(), Some(Poly::zero()));
        assert_eq!(p("x4*x5").square_root_if_perfect_square(), None);
    }

    #[test]
    fn rendering() {
        assert_eq!(p("y+x9").to_string(), "y+x9");
        assert_eq!(
            p("x5*x10+x5*x11+x7*x8+x7*x11+x8*x10+x9^2+a").to_string(),
            "x9^2+x8*x10+x7*x11+x7*x8+x5*x11+x5*x10+a"
        );
        assert_eq!(p("r^3+1").to_string(), "a*r+1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("s^-1").to_string(), "s^-1");
        assert!(Poly::parse("x+").is_err());
    }

    #[test]
    fn univariate() {
        let t = Symbol::var("t");
        let a = Gf2x::from_poly(&p("t^3+t+1"), &t).unwrap();
        let b = Gf2x::from_poly(&p("t+1"), &t).unwrap();
        let prod = a.mul(&b);
        assert_eq!(prod.to_poly(&t), p("t^4+t^3+t^2+1"));
        let (q, r) = prod.div_rem(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
        assert_eq!(prod.gcd(&a), a);
        assert!(Gf2x::from_poly(&p("t*x"), &t).is_none());
        let big = Gf2x::monomial(130).add(&Gf2x::one());
        assert_eq!(big.mul(&Gf2x::monomial(3)).degree(), Some(133));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        let names = ["r", "x4", "x5", "y", "s"];
        let mono = proptest::collection::vec((0usize..5, -1i32..3), 0..3).prop_map(move |fs| {
            fs.into_iter().fold(Monomial::one(), |m, (i, e)| {
                let sym = if names[i] == "s" { Symbol::unit("s") } else { Symbol::var(names[i]) };
                m.mul(&Monomial::power(sym.clone(), if sym.invertible { e } else { e.abs() }).unwrap())
            })
        });
        proptest::collection::vec(mono, 0..5).prop_map(Poly::from_monomials)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.add(&a).is_zero());
        }

        #[test]
        fn frobenius_additive(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.add(&b).square(), a.square().add(&b.square()));
            prop_assert_eq!(a.square(), a.mul(&a));
            prop_assert_eq!(a.mul(&a).square_root_if_perfect_square(), Some(a.clone()));
        }

        #[test]
        fn rationality_closed(a in arb_poly(), b in arb_poly()) {
            if a.is_k_rational() && b.is_k_rational() {
                prop_assert!(a.add(&b).is_k_rational());
                prop_assert!(a.mul(&b).is_k_rational());
            }
        }

        #[test]
        fn render_parse_round_trip(a in arb_poly()) {
            let back = Poly::parse_with(&a.to_string(), |n| n == "s").unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
