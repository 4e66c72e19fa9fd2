//! Generic elements, polynomial constraint systems and their reduction.
//!
//! A generic element is `u = ∏ ε_ζ(x_ζ)` over a set of roots, product in
//! ascending label order, with one fresh variable per root. Conjugating a
//! generator by u and collecting gives coefficients that are polynomials in
//! the x_ζ; requiring them to take given values yields a system over
//! GF(2)[a] that [`reduce`] solves by characteristic-2 substitution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{collect, conjugate, invert, Atom, EngineError, GroupWord, NormalForm};
use crate::polyring::{Monomial, Poly, Symbol};
use crate::rootsys::{centralizing_sublattice, pairing, Coweight, Root};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("no reduction rule applies to the remaining equations: {}", render_list(.0))]
    UnsolvedResidual(Vec<Poly>),
}

fn render_list(ps: &[Poly]) -> String {
    ps.iter().map(Poly::to_string).collect::<Vec<_>>().join(", ")
}

/// Which half of the root system relative to λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Positive,
    Negative,
}

/// The fresh variable attached to a root: x4, x12 for positive labels,
/// xm4, xm12 for negative ones.
pub fn variable_for(zeta: Root) -> Symbol {
    let l = zeta.label();
    if l > 0 {
        Symbol::var(&format!("x{l}"))
    } else {
        Symbol::var(&format!("xm{}", -l))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericElement {
    labels: Vec<Root>,
}

impl GenericElement {
    pub fn over(labels: impl IntoIterator<Item = Root>) -> GenericElement {
        let set: BTreeSet<Root> = labels.into_iter().collect();
        GenericElement { labels: set.into_iter().collect() }
    }

    /// Generic element of the unipotent radical of P_λ (positive side) or
    /// of the opposite parabolic (negative side).
    pub fn radical(lambda: Coweight, side: Side) -> GenericElement {
        GenericElement::over(Root::all().filter(|z| match side {
            Side::Positive => pairing(*z, lambda) > 0,
            Side::Negative => pairing(*z, lambda) < 0,
        }))
    }

    pub fn labels(&self) -> &[Root] {
        &self.labels
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        self.labels.iter().map(|z| variable_for(*z)).collect()
    }

    pub fn word(&self) -> GroupWord {
        GroupWord(self.labels.iter().map(|z| Atom::Eps(*z, Poly::symbol(variable_for(*z)))).collect())
    }
}

/// Equations `p = 0` over fresh variables and parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    equations: Vec<Poly>,
    variables: BTreeSet<Symbol>,
    parameters: BTreeSet<Symbol>,
    expansion: Option<NormalForm>,
}

impl ConstraintSystem {
    /// Builds a system; equations are deduplicated, sorted and stripped of
    /// zeros. Every symbol outside `variables` is a parameter.
    pub fn new(equations: impl IntoIterator<Item = Poly>, variables: BTreeSet<Symbol>) -> ConstraintSystem {
        let eqs: BTreeSet<Poly> = equations.into_iter().filter(|p| !p.is_zero()).collect();
        let parameters =
            eqs.iter().flat_map(Poly::symbols).filter(|s| !variables.contains(s)).collect();
        ConstraintSystem { equations: eqs.into_iter().collect(), variables, parameters, expansion: None }
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub fn variables(&self) -> &BTreeSet<Symbol> {
        &self.variables
    }

    pub fn parameters(&self) -> &BTreeSet<Symbol> {
        &self.parameters
    }

    /// The collected conjugate the equations were read from, if any.
    pub fn expansion(&self) -> Option<&NormalForm> {
        self.expansion.as_ref()
    }

    /// Equations of total degree at most one in the variables.
    pub fn linear_part(&self) -> Vec<Poly> {
        self.equations.iter().filter(|p| variable_degree(p, &self.variables) <= 1).cloned().collect()
    }

    pub fn nonlinear_part(&self) -> Vec<Poly> {
        self.equations.iter().filter(|p| variable_degree(p, &self.variables) > 1).cloned().collect()
    }

    /// Applies a substitution to every equation.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Poly>) -> ConstraintSystem {
        let eqs = self.equations.iter().map(|p| p.substitute(bindings).expect("polynomial substitution"));
        let mut vars = self.variables.clone();
        for v in bindings.values().flat_map(Poly::symbols) {
            if !v.is_sqrt_a() && !self.parameters.contains(&v) {
                vars.insert(v);
            }
        }
        for k in bindings.keys() {
            vars.remove(k);
        }
        let mut out = ConstraintSystem::new(eqs, vars);
        out.expansion = self.expansion.clone();
        out
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", render_list(&self.equations))
    }
}

fn variable_degree(p: &Poly, vars: &BTreeSet<Symbol>) -> i32 {
    p.monomials()
        .map(|m| m.factors().iter().filter(|(s, _)| vars.contains(s)).map(|(_, e)| *e).sum())
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Every equation vanishes under the assignment; unassigned variables
    /// are free.
    Solvable(BTreeMap<Symbol, Poly>),
    /// The system forces p² = c with p k-rational while c is not a square
    /// in k.
    UnsolvableOverK { p: Poly, c: Poly },
    /// The system forces a nonzero parameter expression to vanish.
    Inconsistent(Poly),
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Solvable(asg) => {
                let parts: Vec<String> = asg.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                write!(f, "SOLVABLE: {{{}}}", parts.join(", "))
            }
            Certificate::UnsolvableOverK { p, c } => write!(f, "UNSOLVABLE-OVER-K: (p)^2 = {c} with p = {p}"),
            Certificate::Inconsistent(w) => write!(f, "INCONSISTENT: {w} = 0"),
        }
    }
}

/// Conditions on a generic u in R_u(P_λ) for u⁻¹ g u to lie in L_λ.
pub fn levi_conjugacy_constraints(g: &GroupWord, lambda: Coweight) -> Result<ConstraintSystem, ConstraintError> {
    let u = GenericElement::radical(lambda, Side::Positive);
    let nf = conjugate(&invert(&u.word()), g)?;
    let mut eqs: Vec<Poly> = nf
        .unipotent()
        .iter()
        .filter(|(z, _)| pairing(*z, lambda) != 0)
        .map(|(_, c)| c.clone())
        .collect();
    if nf.twist().act_coweight(lambda) != lambda {
        eqs.push(Poly::one());
    }
    let mut sys = ConstraintSystem::new(eqs, u.variables());
    sys.expansion = Some(nf);
    Ok(sys)
}

/// Solved centralizer: free root subgroups and the centralizing cocharacters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupDescriptor {
    pub free_unipotent_labels: BTreeSet<i32>,
    pub torus_rank_basis: Vec<Coweight>,
    /// Values of the determined variables in terms of the free ones.
    pub assignment: BTreeMap<String, String>,
}

fn toral_cocharacters(g: &GroupWord) -> Option<Vec<Coweight>> {
    let mus: Option<Vec<Coweight>> = g
        .atoms()
        .iter()
        .map(|a| match a {
            Atom::CochVal(mu, _) => Some(*mu),
            _ => None,
        })
        .collect();
    mus.filter(|m| !m.is_empty())
}

/// The centralizer of the generators inside the unipotent radical on the
/// chosen side of λ. Toral generators stand for their full one-parameter
/// subgroups.
pub fn centralizer_in_radical(
    gens: &[GroupWord],
    lambda: Coweight,
    side: Side,
) -> Result<SubgroupDescriptor, ConstraintError> {
    let u = GenericElement::radical(lambda, side);
    let vars = u.variables();
    let mut eqs = Vec::new();
    for g in gens {
        if let Some(mus) = toral_cocharacters(g) {
            for z in u.labels() {
                if mus.iter().any(|mu| pairing(*z, *mu) != 0) {
                    eqs.push(Poly::symbol(variable_for(*z)));
                }
            }
            continue;
        }
        let nf = conjugate(g, &u.word())?;
        if !nf.twist().is_identity() || !nf.torus().is_empty() {
            eqs.push(Poly::one());
        }
        let labels: BTreeSet<Root> = u.labels().iter().copied().chain(nf.unipotent().iter().map(|(z, _)| *z)).collect();
        for z in labels {
            let own = if u.labels().contains(&z) { Poly::symbol(variable_for(z)) } else { Poly::zero() };
            eqs.push(nf.coefficient(z).add(&own));
        }
    }
    let sys = ConstraintSystem::new(eqs, vars);
    let assignment = match reduce(&sys)? {
        Certificate::Solvable(a) => a,
        // No nontrivial u works, not even u = 1: the group elements do not
        // normalize the radical in a way compatible with centralizing.
        Certificate::Inconsistent(_) | Certificate::UnsolvableOverK { .. } => BTreeMap::new(),
    };
    let free = u
        .labels()
        .iter()
        .filter(|z| !assignment.contains_key(&variable_for(**z)))
        .map(|z| z.label())
        .collect();
    Ok(SubgroupDescriptor {
        free_unipotent_labels: free,
        torus_rank_basis: torus_centralizer(gens)?,
        assignment: assignment.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
    })
}

/// Cocharacters ν such that ν(k̄*) centralizes every generator.
pub fn torus_centralizer(gens: &[GroupWord]) -> Result<Vec<Coweight>, ConstraintError> {
    let mut twists = Vec::new();
    let mut roots = BTreeSet::new();
    for g in gens {
        if toral_cocharacters(g).is_some() {
            continue;
        }
        let nf = collect(g)?;
        twists.push(*nf.twist());
        roots.extend(nf.unipotent().iter().map(|(z, _)| *z));
    }
    Ok(centralizing_sublattice(&twists, &roots.into_iter().collect::<Vec<_>>()))
}

/// `Some((x, rest))` when e = x + rest with x occurring only in the
/// monomial x itself.
fn linear_in(e: &Poly, x: &Symbol) -> Option<Poly> {
    let mono = Monomial::power(x.clone(), 1).expect("positive exponent");
    let occurrences: Vec<&Monomial> = e.monomials().filter(|m| m.exponent(x) != 0).collect();
    if occurrences.len() == 1 && *occurrences[0] == mono {
        Some(e.add(&Poly::from_monomial(mono)))
    } else {
        None
    }
}

/// Solves a system by repeated linear substitution and square extraction.
///
/// The rules, tried in order on the sorted equation list:
/// 1. a nonzero equation free of variables is inconsistent;
/// 2. x + p with p k-rational and free of x: substitute x ↦ p, choosing
///    the smallest such variable;
/// 3. q² + d² with q in the variables: if d is k-rational replace the
///    equation by q + d, otherwise certify p = q, c = d².
pub fn reduce(system: &ConstraintSystem) -> Result<Certificate, ConstraintError> {
    let vars = system.variables.clone();
    let mut eqs: BTreeSet<Poly> = system.equations.iter().cloned().collect();
    let mut assignment: BTreeMap<Symbol, Poly> = BTreeMap::new();
    loop {
        eqs.remove(&Poly::zero());
        if eqs.is_empty() {
            return Ok(Certificate::Solvable(assignment));
        }
        if let Some(e) = eqs.iter().find(|e| e.symbols().iter().all(|s| !vars.contains(s))) {
            return Ok(Certificate::Inconsistent(e.clone()));
        }

        let linear = vars.iter().find_map(|x| {
            eqs.iter().find_map(|e| linear_in(e, x).filter(Poly::is_k_rational).map(|rest| (x.clone(), rest)))
        });
        if let Some((x, rest)) = linear {
            let bind = BTreeMap::from([(x.clone(), rest.clone())]);
            for v in assignment.values_mut() {
                *v = v.substitute(&bind).expect("polynomial substitution");
            }
            assignment.insert(x, rest);
            eqs = eqs.iter().map(|e| e.substitute(&bind).expect("polynomial substitution")).collect();
            continue;
        }

        let mut progressed = false;
        for e in eqs.clone() {
            let (v, c) = e.split_by(&vars);
            let (Some(q), Some(d)) = (v.square_root_if_perfect_square(), c.square_root_if_perfect_square()) else {
                continue;
            };
            if !d.is_k_rational() && q.is_k_rational() {
                return Ok(Certificate::UnsolvableOverK { p: q, c });
            }
            eqs.remove(&e);
            eqs.insert(q.add(&d));
            progressed = true;
            break;
        }
        if !progressed {
            return Err(ConstraintError::UnsolvedResidual(eqs.into_iter().collect()));
        }
    }
}

/// A one-parameter family to test commutation against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// ε_ζ(c) with fresh c.
    Eps(Root),
    /// μ(s) with fresh invertible s.
    Torus(Coweight),
}

impl Family {
    pub fn parameter(self) -> Symbol {
        match self {
            Family::Eps(_) => Symbol::var("c"),
            Family::Torus(_) => Symbol::unit("s"),
        }
    }

    pub fn element(self) -> GroupWord {
        let p = Poly::symbol(self.parameter());
        GroupWord::atom(match self {
            Family::Eps(z) => Atom::Eps(z, p),
            Family::Torus(mu) => Atom::CochVal(mu, p),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Commutes,
    /// Must vanish for the family member to commute with h.
    Obstruction(Poly),
}

/// Collects the commutator h x h⁻¹ x⁻¹ for the generic family member x and
/// returns the first coefficient that must vanish.
pub fn noncommuting_witness(h: &GroupWord, family: Family) -> Result<Witness, ConstraintError> {
    let x = family.element();
    let comm = collect(&h.times(&x).times(&invert(h)).times(&invert(&x)))?;
    if comm.is_identity() {
        return Ok(Witness::Commutes);
    }
    if let Some((_, c)) = comm.unipotent().first() {
        return Ok(Witness::Obstruction(c.clone()));
    }
    if let Some((s, mu)) = comm.torus().iter().next() {
        // μ(s) = 1 iff s^g = 1 for g the gcd of the coordinates.
        let g = mu.0.iter().fold(0i32, |acc, &v| gcd(acc, v.abs()));
        let sg = Poly::from_monomial(Monomial::power(s.clone(), g).expect("invertible symbol"));
        return Ok(Witness::Obstruction(sg.add(&Poly::one())));
    }
    Ok(Witness::Obstruction(Poly::one()))
}

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether two lists of polynomials span the same GF(2)-vector space.
pub fn gf2_span_equal(a: &[Poly], b: &[Poly]) -> bool {
    let rank = |ps: &[&Poly]| -> usize {
        let mut basis: Vec<Poly> = Vec::new();
        for p in ps {
            let mut v = (*p).clone();
            for row in &basis {
                let lead = row.monomials().next_back().expect("nonzero row");
                if v.monomials().any(|m| m == lead) {
                    v = v.add(row);
                }
            }
            if !v.is_zero() {
                // Keep rows reduced with respect to each other's leading terms.
                let lead = v.monomials().next_back().expect("nonzero").clone();
                for row in basis.iter_mut() {
                    if row.monomials().any(|m| *m == lead) {
                        *row = row.add(&v);
                    }
                }
                basis.push(v);
            }
        }
        basis.len()
    };
    let all: Vec<&Poly> = a.iter().chain(b).collect();
    let ra = rank(&a.iter().collect::<Vec<_>>());
    let rb = rank(&b.iter().collect::<Vec<_>>());
    ra == rb && rank(&all) == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Simple;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn vars(names: &[&str]) -> BTreeSet<Symbol> {
        names.iter().map(|n| Symbol::var(n)).collect()
    }

    fn n_sigma_e12() -> GroupWord {
        GroupWord(vec![Atom::n(Simple::Alpha), Atom::Sigma, Atom::eps(12, Poly::a())])
    }

    fn alpha_gamma() -> GroupWord {
        GroupWord::atom(Atom::CochVal(Coweight([1, 0, 1, 0]), Poly::unit("s")))
    }

    #[test]
    fn levi_system_matches_expected() {
        let sys = levi_conjugacy_constraints(&n_sigma_e12(), Coweight::lambda()).unwrap();
        let want_linear: Vec<Poly> =
            ["x4+x5", "x5+x8", "x4+x7", "x7+x10", "x10+x11", "x8+x11", "x6+x9"].iter().map(|s| p(s)).collect();
        assert!(gf2_span_equal(&sys.linear_part(), &want_linear), "{sys}");
        let quad = sys.nonlinear_part();
        assert_eq!(quad.len(), 1, "{sys}");
        let cert = reduce(&sys).unwrap();
        assert!(matches!(cert, Certificate::UnsolvableOverK { .. }), "{cert}");
    }

    #[test]
    fn levi_trivial_cases() {
        let sys = levi_conjugacy_constraints(&GroupWord::n_alpha_sigma(), Coweight::lambda()).unwrap();
        let Certificate::Solvable(asg) = reduce(&sys).unwrap() else { panic!("{sys}") };
        let zero: BTreeMap<Symbol, Poly> = sys.variables().iter().map(|v| (v.clone(), Poly::zero())).collect();
        for e in sys.equations() {
            assert!(e.substitute(&zero).unwrap().is_zero());
            assert!(e.substitute(&asg).unwrap().is_zero());
        }
        let sys = levi_conjugacy_constraints(&GroupWord(vec![Atom::eps(12, Poly::a())]), Coweight::lambda()).unwrap();
        assert_eq!(sys.equations(), &[Poly::a()]);
        assert_eq!(reduce(&sys).unwrap(), Certificate::Inconsistent(Poly::a()));
    }

    #[test]
    fn certificate_after_renaming() {
        let sys = levi_conjugacy_constraints(&n_sigma_e12(), Coweight::lambda()).unwrap();
        let renamed = sys.substitute(&BTreeMap::from([(Symbol::var("x4"), Poly::var("y"))]));
        let cert = reduce(&renamed).unwrap();
        assert_eq!(cert, Certificate::UnsolvableOverK { p: p("y+x9"), c: Poly::a() });
        assert_eq!(cert.to_string(), "UNSOLVABLE-OVER-K: (p)^2 = a with p = y+x9");
    }

    #[test]
    fn reduce_small_systems() {
        let empty = ConstraintSystem::new(Vec::new(), BTreeSet::new());
        assert_eq!(reduce(&empty).unwrap(), Certificate::Solvable(BTreeMap::new()));
        let sq = ConstraintSystem::new(vec![p("x6^2")], vars(&["x6"]));
        assert_eq!(reduce(&sq).unwrap(), Certificate::Solvable(BTreeMap::from([(Symbol::var("x6"), Poly::zero())])));
        let residual = ConstraintSystem::new(vec![p("x4*x5+1")], vars(&["x4", "x5"]));
        assert!(matches!(reduce(&residual), Err(ConstraintError::UnsolvedResidual(_))));
    }

    #[test]
    fn reduce_is_order_independent() {
        let eqs = vec![p("x4+x5"), p("x5+x6"), p("x4^2+x6*x5+a*x4^2")];
        let a = ConstraintSystem::new(eqs.clone(), vars(&["x4", "x5", "x6"]));
        let b = ConstraintSystem::new(eqs.into_iter().rev(), vars(&["x4", "x5", "x6"]));
        assert_eq!(reduce(&a), reduce(&b));
    }

    #[test]
    fn radical_centralizers() {
        let gens = [GroupWord::n_alpha_sigma(), alpha_gamma()];
        let l = Coweight::lambda();
        let pos = centralizer_in_radical(&gens, l, Side::Positive).unwrap();
        assert_eq!(pos.free_unipotent_labels, BTreeSet::from([12]));
        let neg = centralizer_in_radical(&gens, l, Side::Negative).unwrap();
        assert_eq!(neg.free_unipotent_labels, BTreeSet::from([-12]));
        let all = centralizer_in_radical(&[], l, Side::Positive).unwrap();
        assert_eq!(all.free_unipotent_labels, (4..=12).collect());
    }

    #[test]
    fn centralizer_verified_forward() {
        let gens = [GroupWord::n_alpha_sigma(), alpha_gamma()];
        for side in [Side::Positive, Side::Negative] {
            let d = centralizer_in_radical(&gens, Coweight::lambda(), side).unwrap();
            let u = GenericElement::over(d.free_unipotent_labels.iter().map(|&l| Root::new(l)));
            for g in &gens {
                let x = u.word();
                assert_eq!(conjugate(g, &x).unwrap(), collect(&x).unwrap());
            }
        }
    }

    #[test]
    fn torus_centralizer_of_n_sigma() {
        assert_eq!(torus_centralizer(&[GroupWord::n_alpha_sigma()]).unwrap(), vec![Coweight::lambda()]);
    }

    #[test]
    fn witnesses() {
        let h = GroupWord(vec![Atom::eps(11, Poly::one()), Atom::eps(2, Poly::sqrt_a())]);
        let Witness::Obstruction(w) = noncommuting_witness(&h, Family::Eps(Root::new(-12))).unwrap() else {
            panic!("expected an obstruction")
        };
        assert!(w.monomials().any(|m| *m == Monomial::power(Symbol::var("c"), 1).unwrap()), "{w}");
        assert_eq!(noncommuting_witness(&h, Family::Eps(Root::new(12))).unwrap(), Witness::Commutes);
        assert_eq!(
            noncommuting_witness(&GroupWord::identity(), Family::Torus(Coweight::lambda())).unwrap(),
            Witness::Commutes
        );
        let Witness::Obstruction(t) = noncommuting_witness(&h, Family::Torus(Coweight::lambda())).unwrap() else {
            panic!("expected an obstruction")
        };
        assert!(!t.is_zero());
    }

    #[test]
    fn torus_commutator_witness() {
        let h = GroupWord::atom(Atom::n(Simple::Alpha));
        let Witness::Obstruction(w) = noncommuting_witness(&h, Family::Torus(Coweight([1, 0, 0, 0]))).unwrap() else {
            panic!("expected an obstruction")
        };
        assert_eq!(w.to_string(), "s^2+1");
    }

    #[test]
    fn span_equality() {
        let a = vec![p("x4+x5"), p("x5+x6")];
        let b = vec![p("x4+x6"), p("x4+x5")];
        assert!(gf2_span_equal(&a, &b));
        assert!(!gf2_span_equal(&a, &[p("x4+x5")]));
        assert!(!gf2_span_equal(&a, &[p("x4+x5"), p("x6")]));
    }
}
