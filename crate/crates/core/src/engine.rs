//! Words in G = G̃ ⋊ ⟨σ⟩ and their collection to normal form.
//!
//! A [`NormalForm`] is a product `w·t·u` read left to right: a twisted Weyl
//! element `w` (Weyl representatives n_ξ and σ), a torus element `t`, and a
//! unipotent product `u` of root elements sorted by signed label.
//!
//! Everything happens in characteristic 2, so the Chevalley signs vanish:
//!
//! * `σ ε_ζ(c) σ⁻¹ = ε_{σζ}(c)` and `n_ξ ε_ζ(c) n_ξ⁻¹ = ε_{s_ξζ}(c)`
//! * `μ(s) ε_ζ(c) μ(s)⁻¹ = ε_ζ(s^⟨ζ,μ⟩ c)`
//! * `ε_ζ(u) ε_ζ(v) = ε_ζ(u+v)`
//! * `ε_ζ(u) ε_ξ(v) = ε_ξ(v) ε_ζ(u) ε_{ζ+ξ}(uv)` when ζ+ξ is a root, and the
//!   two commute otherwise (ξ ≠ -ζ).
//!
//! The n_ξ generate a copy of W (the torus elements ξ∨(-1) are trivial), so
//! the twisted part is an element of W ⋊ ⟨σ⟩. Merging ε_ζ with ε_{-ζ} would
//! need rank-one rewriting and is rejected with
//! [`EngineError::CollectionObstruction`].
//!
//! Normal forms sharing a twisted part are equal iff the group elements are
//! (the unipotent part is a big-cell coordinate `U⁻·U⁺` in height order).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::polyring::{Poly, PolyError, Symbol};
use crate::rootsys::{pairing, Coweight, Root, Simple, Twist};

/// Upper bound on rewrite steps in a single collection.
const MAX_REWRITES: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("collection must merge ε_{0} with ε_{neg}", neg = -.0.label())]
    CollectionObstruction(Root),
    #[error("collection did not terminate within {0} rewrites")]
    Diverged(usize),
    #[error("root {0} is missing from the requested factor order")]
    NotInOrder(Root),
    #[error("element has unipotent content: {0}")]
    NotWeylToral(String),
    #[error("torus parameter {0} is not an invertible monomial")]
    BadTorusParameter(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One letter of a group word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    /// The root element ε_ζ(c).
    Eps(Root, Poly),
    /// The cocharacter value μ(s); s must be an invertible monomial.
    CochVal(Coweight, Poly),
    /// The Weyl representative n_ξ.
    WeylRep(Root),
    /// The triality graph automorphism.
    Sigma,
}

impl Atom {
    pub fn eps(label: i32, c: Poly) -> Atom {
        Atom::Eps(Root::new(label), c)
    }

    pub fn n(s: Simple) -> Atom {
        Atom::WeylRep(s.root())
    }

    fn inverse(&self) -> Vec<Atom> {
        match self {
            Atom::Eps(..) | Atom::WeylRep(_) => vec![self.clone()],
            Atom::Sigma => vec![Atom::Sigma, Atom::Sigma],
            Atom::CochVal(mu, s) => vec![Atom::CochVal(*mu, s.inverse().expect("validated torus parameter"))],
        }
    }

    pub fn is_toral(&self) -> bool {
        matches!(self, Atom::CochVal(..))
    }
}

/// A finite product of atoms; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord(pub Vec<Atom>);

impl GroupWord {
    pub fn identity() -> GroupWord {
        GroupWord(Vec::new())
    }

    pub fn atom(a: Atom) -> GroupWord {
        GroupWord(vec![a])
    }

    /// n_α σ.
    pub fn n_alpha_sigma() -> GroupWord {
        GroupWord(vec![Atom::n(Simple::Alpha), Atom::Sigma])
    }

    pub fn times(&self, other: &GroupWord) -> GroupWord {
        GroupWord(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn is_toral(&self) -> bool {
        self.0.iter().all(Atom::is_toral)
    }

    /// All symbols appearing in coefficients and parameters.
    pub fn symbols(&self) -> std::collections::BTreeSet<Symbol> {
        self.0
            .iter()
            .flat_map(|a| match a {
                Atom::Eps(_, c) | Atom::CochVal(_, c) => c.symbols(),
                _ => Default::default(),
            })
            .collect()
    }
}

impl From<Vec<Atom>> for GroupWord {
    fn from(v: Vec<Atom>) -> Self {
        GroupWord(v)
    }
}

pub fn invert(g: &GroupWord) -> GroupWord {
    GroupWord(g.0.iter().rev().flat_map(Atom::inverse).collect())
}

/// Collected form `twist · torus · unipotent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    twist: Twist,
    /// Torus part as ∏ μ_s(s) over invertible symbols s.
    torus: BTreeMap<Symbol, Coweight>,
    /// Root elements with distinct labels in ascending signed-label order,
    /// no zero coefficients.
    unipotent: Vec<(Root, Poly)>,
}

impl Default for NormalForm {
    fn default() -> Self {
        NormalForm::identity()
    }
}

impl NormalForm {
    pub fn identity() -> NormalForm {
        NormalForm { twist: Twist::identity(), torus: BTreeMap::new(), unipotent: Vec::new() }
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn torus(&self) -> &BTreeMap<Symbol, Coweight> {
        &self.torus
    }

    pub fn unipotent(&self) -> &[(Root, Poly)] {
        &self.unipotent
    }

    pub fn is_identity(&self) -> bool {
        self.twist.is_identity() && self.torus.is_empty() && self.unipotent.is_empty()
    }

    /// Coefficient of ε_ζ in the unipotent part (zero if absent).
    pub fn coefficient(&self, zeta: Root) -> Poly {
        self.unipotent.iter().find(|(z, _)| *z == zeta).map(|(_, c)| c.clone()).unwrap_or_default()
    }

    pub fn labels(&self) -> Vec<i32> {
        self.unipotent.iter().map(|(z, _)| z.label()).collect()
    }

    pub fn mul_atom(&mut self, atom: &Atom) -> Result<(), EngineError> {
        match atom {
            Atom::Sigma => self.mul_twist(&Twist::sigma()),
            Atom::WeylRep(xi) => self.mul_twist(&Twist::reflection(*xi)),
            Atom::CochVal(mu, s) => {
                let m = s.as_invertible_monomial().ok_or_else(|| EngineError::BadTorusParameter(s.to_string()))?;
                // t⁻¹ ε_ζ(c) t = ε_ζ(s^-⟨ζ,μ⟩ c)
                for (z, c) in &mut self.unipotent {
                    *c = c.mul_monomial(&m.pow(-pairing(*z, *mu))?);
                }
                for (sym, e) in m.factors() {
                    let entry = self.torus.entry(sym.clone()).or_insert(Coweight::ZERO);
                    *entry = *entry + *e * *mu;
                    if entry.is_zero() {
                        self.torus.remove(sym);
                    }
                }
                Ok(())
            }
            Atom::Eps(z, c) => {
                if c.is_zero() {
                    return Ok(());
                }
                self.unipotent.push((*z, c.clone()));
                let start = self.unipotent.len().saturating_sub(2);
                collect_unipotent(&mut self.unipotent, start)
            }
        }
    }

    /// w t u · x = (w x)(x⁻¹ t x)(x⁻¹ u x) for a twisted element x.
    fn mul_twist(&mut self, x: &Twist) -> Result<(), EngineError> {
        let xi = x.inverse();
        self.twist = self.twist.compose(x);
        for mu in self.torus.values_mut() {
            *mu = xi.act_coweight(*mu);
        }
        for (z, _) in &mut self.unipotent {
            *z = xi.act_root(*z);
        }
        collect_unipotent(&mut self.unipotent, 0)
    }

    pub fn mul_word(&mut self, w: &GroupWord) -> Result<(), EngineError> {
        w.0.iter().try_for_each(|a| self.mul_atom(a))
    }

    /// Rebuilds a word whose collection is this normal form.
    pub fn to_word(&self) -> GroupWord {
        let mut atoms: Vec<Atom> = self.twist.reduced_word().into_iter().map(Atom::n).collect();
        atoms.extend(std::iter::repeat_n(Atom::Sigma, self.twist.sigma_exponent() as usize));
        for (s, mu) in &self.torus {
            atoms.push(Atom::CochVal(*mu, Poly::symbol(s.clone())));
        }
        atoms.extend(self.unipotent.iter().map(|(z, c)| Atom::Eps(*z, c.clone())));
        GroupWord(atoms)
    }

    /// Twisted, torus and unipotent parts rendered separately.
    pub fn render_parts(&self) -> (String, String, String) {
        let torus: Vec<String> = self.torus.iter().map(|(s, mu)| format!("cochar({mu})({s})")).collect();
        let unip: Vec<String> = self.unipotent.iter().map(|(z, c)| format!("eps({z})({c})")).collect();
        (self.twist.to_string(), torus.join(" "), unip.join(" "))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let (tw, to, un) = self.render_parts();
        let parts: Vec<String> = [(!self.twist.is_identity()).then_some(tw), Some(to), Some(un)]
            .into_iter()
            .flatten()
            .filter(|s| !s.is_empty())
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Sorts a list of root elements into ascending label order, merging equal
/// labels and emitting commutator terms. Entries before `start` must
/// already be collected.
fn collect_unipotent(w: &mut Vec<(Root, Poly)>, start: usize) -> Result<(), EngineError> {
    collect_by(w, start, |z| z.label())
}

/// Gnome-sort collection under an arbitrary total order on roots.
fn collect_by<K: Ord>(w: &mut Vec<(Root, Poly)>, start: usize, key: impl Fn(Root) -> K) -> Result<(), EngineError> {
    w.retain(|(_, c)| !c.is_zero());
    let mut i = start.min(w.len().saturating_sub(1));
    let mut steps = 0;
    while i + 1 < w.len() {
        let (z, x) = (w[i].0, w[i + 1].0);
        if z == x {
            let merged = w[i].1.add(&w[i + 1].1);
            w.remove(i + 1);
            if merged.is_zero() {
                w.remove(i);
            } else {
                w[i].1 = merged;
            }
            i = i.saturating_sub(1);
        } else if key(z) > key(x) {
            if z == -x {
                return Err(EngineError::CollectionObstruction(z));
            }
            steps += 1;
            if steps > MAX_REWRITES {
                return Err(EngineError::Diverged(MAX_REWRITES));
            }
            w.swap(i, i + 1);
            if let Some(sum) = z.checked_add(x) {
                let c = w[i].1.mul(&w[i + 1].1);
                w.insert(i + 2, (sum, c));
            }
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    Ok(())
}

/// Rewrites a product of root elements into the given order of factors.
/// Every root occurring during the rewrite must appear in `order`.
pub fn reorder_unipotent(factors: &[(Root, Poly)], order: &[Root]) -> Result<Vec<(Root, Poly)>, EngineError> {
    let pos = |z: Root| order.iter().position(|o| *o == z).ok_or(EngineError::NotInOrder(z));
    let mut w = factors.to_vec();
    for (z, _) in &w {
        pos(*z)?;
    }
    // Commutator terms can introduce new roots; check them as they appear.
    let missing = std::cell::Cell::new(None);
    collect_by(&mut w, 0, |z| {
        pos(z).unwrap_or_else(|_| {
            missing.set(Some(z));
            usize::MAX
        })
    })?;
    match missing.get() {
        Some(z) => Err(EngineError::NotInOrder(z)),
        None => Ok(w),
    }
}

pub fn collect(w: &GroupWord) -> Result<NormalForm, EngineError> {
    let mut nf = NormalForm::identity();
    nf.mul_word(w)?;
    Ok(nf)
}

pub fn multiply(g: &GroupWord, h: &GroupWord) -> Result<NormalForm, EngineError> {
    collect(&g.times(h))
}

/// g·h = g h g⁻¹, collected.
pub fn conjugate(g: &GroupWord, h: &GroupWord) -> Result<NormalForm, EngineError> {
    collect(&g.times(h).times(&invert(g)))
}

pub fn power(g: &GroupWord, n: usize) -> Result<NormalForm, EngineError> {
    let mut nf = NormalForm::identity();
    for _ in 0..n {
        nf.mul_word(g)?;
    }
    Ok(nf)
}

/// Image of μ under the twisted Weyl part of g.
pub fn act_on_coweight(g: &GroupWord, mu: Coweight) -> Result<Coweight, EngineError> {
    let nf = collect(g)?;
    if !nf.unipotent.is_empty() {
        return Err(EngineError::NotWeylToral(nf.to_string()));
    }
    Ok(nf.twist.act_coweight(mu))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MembershipClass {
    InLevi,
    InRadical,
    InParabolic,
    NotInParabolic,
}

impl MembershipClass {
    pub fn in_parabolic(self) -> bool {
        self != MembershipClass::NotInParabolic
    }
}

/// Classifies a normal form against P_λ, L_λ and R_u(P_λ).
///
/// The twisted part lies in P_λ iff it fixes λ; the unipotent part is read
/// off its root support. The classification is exact for dominant λ and
/// conservative otherwise.
pub fn membership(nf: &NormalForm, lambda: Coweight) -> MembershipClass {
    let weights: Vec<i32> = nf.unipotent.iter().map(|(z, _)| pairing(*z, lambda)).collect();
    let twist_ok = nf.twist.act_coweight(lambda) == lambda;
    if !twist_ok || weights.iter().any(|&w| w < 0) {
        MembershipClass::NotInParabolic
    } else if weights.iter().all(|&w| w == 0) {
        MembershipClass::InLevi
    } else if nf.twist.is_identity() && nf.torus.is_empty() && weights.iter().all(|&w| w > 0) {
        MembershipClass::InRadical
    } else {
        MembershipClass::InParabolic
    }
}

/// Conjugates every generator by v.
pub fn generator_transport(v: &GroupWord, gens: &[GroupWord]) -> Result<Vec<NormalForm>, EngineError> {
    gens.iter().map(|g| conjugate(v, g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Poly {
        Poly::sqrt_a()
    }

    fn eps(l: i32, c: Poly) -> Atom {
        Atom::eps(l, c)
    }

    fn nf_of(atoms: Vec<Atom>) -> NormalForm {
        collect(&GroupWord(atoms)).unwrap()
    }

    #[test]
    fn inversion() {
        let w = GroupWord(vec![eps(6, r())]);
        assert_eq!(invert(&w), w);
        assert_eq!(invert(&GroupWord(vec![Atom::Sigma])), GroupWord(vec![Atom::Sigma, Atom::Sigma]));
        let v = GroupWord(vec![eps(6, r()), eps(9, r())]);
        assert_eq!(invert(&v), GroupWord(vec![eps(9, r()), eps(6, r())]));
        let t = GroupWord(vec![Atom::CochVal(Coweight([1, 0, 1, 0]), Poly::unit("s"))]);
        assert!(multiply(&t, &invert(&t)).unwrap().is_identity());
    }

    #[test]
    fn commutator_rule() {
        let (u, v) = (Poly::var("u"), Poly::var("v"));
        let got = nf_of(vec![eps(9, u.clone()), eps(6, v.clone())]);
        let want = [(Root::new(6), v.clone()), (Root::new(9), u.clone()), (Root::new(12), u.mul(&v))];
        assert_eq!(got.unipotent(), &want[..]);
        let merged = nf_of(vec![eps(6, u.clone()), eps(6, v.clone())]);
        assert_eq!(merged.unipotent(), &[(Root::new(6), u.add(&v))]);
        assert!(nf_of(vec![eps(6, u.clone()), eps(6, u)]).is_identity());
    }

    #[test]
    fn opposite_roots_obstruct() {
        let w = GroupWord(vec![eps(5, Poly::one()), eps(-5, Poly::one())]);
        assert_eq!(collect(&w), Err(EngineError::CollectionObstruction(Root::new(5))));
        // The opposite order is already collected.
        assert!(collect(&GroupWord(vec![eps(-5, Poly::one()), eps(5, Poly::one())])).is_ok());
    }

    #[test]
    fn conjugation_examples() {
        let v = GroupWord(vec![eps(6, r()), eps(9, r())]);
        let got = conjugate(&v, &GroupWord::n_alpha_sigma()).unwrap();
        let want = nf_of(vec![Atom::n(Simple::Alpha), Atom::Sigma, eps(12, Poly::a())]);
        assert_eq!(got, want);
        assert_eq!(got.to_string(), "n_1 sigma^1 eps(12)(a)");

        let t = GroupWord(vec![Atom::CochVal(Coweight([1, 0, 1, 0]), Poly::unit("s"))]);
        let e6 = GroupWord(vec![eps(6, Poly::var("c"))]);
        assert_eq!(conjugate(&t, &e6).unwrap(), collect(&e6).unwrap());

        let e4 = GroupWord(vec![eps(4, Poly::one())]);
        assert_eq!(conjugate(&GroupWord::n_alpha_sigma(), &e4).unwrap(), nf_of(vec![eps(5, Poly::one())]));
    }

    #[test]
    fn transport_of_epsilon_eleven() {
        let w = GroupWord(vec![
            eps(-9, r()),
            eps(-6, r()),
            eps(11, Poly::one()),
            eps(-6, r()),
            eps(-9, r()),
        ]);
        let got = collect(&w).unwrap();
        assert_eq!(got, nf_of(vec![eps(11, Poly::one()), eps(2, r())]));
        assert_eq!(got.to_string(), "eps(2)(r) eps(11)(1)");
    }

    #[test]
    fn powers() {
        let cube = power(&GroupWord::n_alpha_sigma(), 3).unwrap();
        assert_eq!(cube.twist().to_string(), "n_1 n_2 n_3");
        assert!(cube.torus().is_empty() && cube.unipotent().is_empty());
        assert!(power(&GroupWord::atom(Atom::Sigma), 3).unwrap().is_identity());
        assert!(power(&GroupWord(vec![eps(12, Poly::a())]), 2).unwrap().is_identity());
        for xi in Root::all() {
            assert!(power(&GroupWord::atom(Atom::WeylRep(xi)), 2).unwrap().is_identity());
        }
    }

    #[test]
    fn coweight_action() {
        let n = GroupWord::n_alpha_sigma();
        assert_eq!(act_on_coweight(&n, Coweight([1, 0, 1, 0])).unwrap(), Coweight([0, 0, 1, 1]));
        let mu = Coweight([3, -1, 0, 2]);
        assert_eq!(act_on_coweight(&GroupWord::identity(), mu).unwrap(), mu);
        assert_eq!(act_on_coweight(&n, Coweight::lambda()).unwrap(), Coweight::lambda());
        let bad = GroupWord(vec![eps(4, Poly::one())]);
        assert!(matches!(act_on_coweight(&bad, mu), Err(EngineError::NotWeylToral(_))));
    }

    #[test]
    fn membership_examples() {
        let l = Coweight::lambda();
        let m = nf_of(vec![eps(-12, Poly::one()), eps(-2, r())]);
        assert_eq!(membership(&m, l), MembershipClass::NotInParabolic);
        assert_eq!(membership(&nf_of(vec![eps(12, Poly::a())]), l), MembershipClass::InRadical);
        let t = nf_of(vec![Atom::CochVal(Coweight([1, 0, 1, 0]), Poly::unit("s"))]);
        assert_eq!(membership(&t, l), MembershipClass::InLevi);
        let n = nf_of(vec![Atom::n(Simple::Alpha), Atom::Sigma, eps(12, Poly::a())]);
        assert_eq!(membership(&n, l), MembershipClass::InParabolic);
        let beta = nf_of(vec![Atom::n(Simple::Beta)]);
        assert_eq!(membership(&beta, l), MembershipClass::NotInParabolic);
    }

    #[test]
    fn transport_examples() {
        let v = GroupWord(vec![eps(-6, r()), eps(-9, r())]);
        let s = Poly::unit("s");
        let torus = GroupWord(vec![Atom::CochVal(Coweight([1, 0, 1, 0]), s)]);
        let gens = vec![
            GroupWord(vec![Atom::n(Simple::Alpha), Atom::Sigma, eps(-12, Poly::a())]),
            torus.clone(),
            GroupWord(vec![eps(11, Poly::one())]),
        ];
        let got = generator_transport(&invert(&v), &gens).unwrap();
        assert_eq!(got[0], collect(&GroupWord::n_alpha_sigma()).unwrap());
        assert_eq!(got[1], collect(&torus).unwrap());
        assert_eq!(got[2], nf_of(vec![eps(11, Poly::one()), eps(2, r())]));

        let ident = generator_transport(&GroupWord::identity(), &gens).unwrap();
        for (g, nf) in gens.iter().zip(&ident) {
            assert_eq!(&collect(g).unwrap(), nf);
        }
    }

    #[test]
    fn torus_conjugation_keeps_support() {
        let mu = Coweight([0, 1, 0, 0]);
        let t = GroupWord(vec![Atom::CochVal(mu, Poly::unit("s"))]);
        for z in Root::all() {
            let e = GroupWord(vec![Atom::Eps(z, Poly::var("c"))]);
            let nf = conjugate(&t, &e).unwrap();
            assert_eq!(nf.labels(), vec![z.label()]);
            assert!(nf.twist().is_identity() && nf.torus().is_empty());
        }
    }

    #[test]
    fn normal_form_round_trip() {
        let w = GroupWord(vec![
            Atom::Sigma,
            eps(7, Poly::var("x")),
            Atom::CochVal(Coweight([1, 0, 1, 0]), Poly::unit("s")),
            Atom::n(Simple::Gamma),
            eps(4, Poly::var("y")),
        ]);
        let nf = collect(&w).unwrap();
        assert_eq!(collect(&nf.to_word()).unwrap(), nf);
    }

    #[test]
    fn reorder_round_trip() {
        let (u, v) = (Poly::var("u"), Poly::var("v"));
        let sorted = nf_of(vec![eps(9, u.clone()), eps(6, v.clone())]);
        let order = [9, 6, 12].map(Root::new);
        let back = reorder_unipotent(sorted.unipotent(), &order).unwrap();
        assert_eq!(back, vec![(Root::new(9), u), (Root::new(6), v)]);
        assert!(matches!(reorder_unipotent(sorted.unipotent(), &[9, 6].map(Root::new)), Err(EngineError::NotInOrder(_))));
    }

    #[test]
    fn bad_torus_parameter() {
        let w = GroupWord(vec![Atom::CochVal(Coweight::lambda(), Poly::var("x"))]);
        assert!(matches!(collect(&w), Err(EngineError::BadTorusParameter(_))));
    }
}
