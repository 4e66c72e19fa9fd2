//! The adjoint representation on the 28-dimensional Lie algebra of G̃.
//!
//! Chevalley basis `e_ζ` (24 roots) and `h_α, h_β, h_γ, h_δ` (simple
//! coroots). All structure constants reduce to 1 in characteristic 2.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::engine::{Atom, GroupWord};
use crate::polyring::{Gf2x, Poly, Symbol};
use crate::rootsys::{pairing, Coweight, Root, Simple, Twist};

pub const DIM: usize = 28;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdjointError {
    #[error("coefficient {0} is not a polynomial in r")]
    UnsupportedCoefficients(String),
    #[error("torus parameter {0} is not an invertible monomial")]
    BadTorusParameter(String),
}

/// A Chevalley basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    E(Root),
    H(Simple),
}

impl Basis {
    pub fn index(self) -> usize {
        match self {
            Basis::E(z) => {
                let l = z.label();
                if l < 0 {
                    (l + 12) as usize
                } else {
                    (l + 11) as usize
                }
            }
            Basis::H(s) => 24 + s.index(),
        }
    }

    pub fn from_index(i: usize) -> Basis {
        match i {
            0..=11 => Basis::E(Root::new(i as i32 - 12)),
            12..=23 => Basis::E(Root::new(i as i32 - 11)),
            _ => Basis::H(Simple::ALL[i - 24]),
        }
    }

    pub fn all() -> impl Iterator<Item = Basis> {
        (0..DIM).map(Basis::from_index)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::E(z) => write!(f, "e({z})"),
            Basis::H(s) => write!(f, "h({})", s.coroot()),
        }
    }
}

/// Sparse vector; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LieVector(BTreeMap<Basis, Poly>);

impl LieVector {
    pub fn zero() -> LieVector {
        LieVector::default()
    }

    pub fn basis(b: Basis) -> LieVector {
        LieVector::zero().with(b, Poly::one())
    }

    pub fn e(label: i32) -> LieVector {
        LieVector::basis(Basis::E(Root::new(label)))
    }

    pub fn h(s: Simple) -> LieVector {
        LieVector::basis(Basis::H(s))
    }

    /// Adds c·b.
    pub fn with(mut self, b: Basis, c: Poly) -> LieVector {
        let sum = self.coefficient(b).add(&c);
        if sum.is_zero() {
            self.0.remove(&b);
        } else {
            self.0.insert(b, sum);
        }
        self
    }

    pub fn add(&self, other: &LieVector) -> LieVector {
        other.0.iter().fold(self.clone(), |acc, (b, c)| acc.with(*b, c.clone()))
    }

    pub fn coefficient(&self, b: Basis) -> Poly {
        self.0.get(&b).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &Poly)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for LieVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(b, c)| match c.len() {
                _ if c.is_one() => b.to_string(),
                1 => format!("{c}*{b}"),
                _ => format!("({c})*{b}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

/// Dense matrix; column j is the image of basis element j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap(Vec<Vec<Poly>>);

impl LinearMap {
    pub fn identity() -> LinearMap {
        let mut m = vec![vec![Poly::zero(); DIM]; DIM];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Poly::one();
        }
        LinearMap(m)
    }

    fn from_columns(f: impl Fn(Basis) -> LieVector) -> LinearMap {
        let mut m = vec![vec![Poly::zero(); DIM]; DIM];
        for j in 0..DIM {
            for (b, c) in f(Basis::from_index(j)).terms() {
                m[b.index()][j] = c.clone();
            }
        }
        LinearMap(m)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.0[i][j]
    }

    /// self ∘ rhs.
    pub fn compose(&self, rhs: &LinearMap) -> LinearMap {
        let mut m = vec![vec![Poly::zero(); DIM]; DIM];
        for (i, row) in m.iter_mut().enumerate() {
            for k in 0..DIM {
                let a = &self.0[i][k];
                if a.is_zero() {
                    continue;
                }
                for (j, out) in row.iter_mut().enumerate() {
                    let b = &rhs.0[k][j];
                    if !b.is_zero() {
                        *out = out.add(&a.mul(b));
                    }
                }
            }
        }
        LinearMap(m)
    }

    pub fn apply(&self, v: &LieVector) -> LieVector {
        let mut out = LieVector::zero();
        for (b, c) in v.terms() {
            let j = b.index();
            for i in 0..DIM {
                let a = &self.0[i][j];
                if !a.is_zero() {
                    out = out.with(Basis::from_index(i), a.mul(c));
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == LinearMap::identity()
    }
}

fn twist_map(t: &Twist) -> LinearMap {
    LinearMap::from_columns(|b| match b {
        Basis::E(z) => LieVector::basis(Basis::E(t.act_root(z))),
        Basis::H(s) => coweight_vector(t.act_coweight(s.coroot())),
    })
}

/// h_μ written in the basis h_α..h_δ.
fn coweight_vector(mu: Coweight) -> LieVector {
    Simple::ALL.iter().fold(LieVector::zero(), |v, s| {
        if mu.0[s.index()] % 2 != 0 {
            v.with(Basis::H(*s), Poly::one())
        } else {
            v
        }
    })
}

pub fn ad_atom(x: &Atom) -> Result<LinearMap, AdjointError> {
    Ok(match x {
        Atom::Sigma => twist_map(&Twist::sigma()),
        Atom::WeylRep(xi) => twist_map(&Twist::reflection(*xi)),
        Atom::CochVal(mu, s) => {
            let m = s.as_invertible_monomial().ok_or_else(|| AdjointError::BadTorusParameter(s.to_string()))?;
            LinearMap::from_columns(|b| match b {
                Basis::E(z) => {
                    let w = m.pow(pairing(z, *mu)).expect("invertible monomial");
                    LieVector::zero().with(b, Poly::from_monomial(w))
                }
                Basis::H(_) => LieVector::basis(b),
            })
        }
        Atom::Eps(xi, c) => {
            let xi = *xi;
            LinearMap::from_columns(|b| match b {
                Basis::E(z) if z == -xi => LieVector::basis(b)
                    .add(&scale(&coweight_vector(xi.coroot()), c))
                    .with(Basis::E(xi), c.square()),
                Basis::E(z) => match xi.checked_add(z) {
                    Some(sum) => LieVector::basis(b).with(Basis::E(sum), c.clone()),
                    None => LieVector::basis(b),
                },
                Basis::H(s) => {
                    if pairing(xi, s.coroot()) % 2 != 0 {
                        LieVector::basis(b).with(Basis::E(xi), c.clone())
                    } else {
                        LieVector::basis(b)
                    }
                }
            })
        }
    })
}

fn scale(v: &LieVector, c: &Poly) -> LieVector {
    v.terms().fold(LieVector::zero(), |acc, (b, x)| acc.with(*b, x.mul(c)))
}

pub fn ad_word(g: &GroupWord) -> Result<LinearMap, AdjointError> {
    g.atoms().iter().try_fold(LinearMap::identity(), |acc, a| Ok(acc.compose(&ad_atom(a)?)))
}

/// Torus factors of a purely toral generator, each read as a full
/// one-parameter subgroup.
fn toral_cocharacters(g: &GroupWord) -> Option<Vec<Coweight>> {
    g.atoms()
        .iter()
        .map(|a| match a {
            Atom::CochVal(mu, _) => Some(*mu),
            _ => None,
        })
        .collect()
}

pub fn centralizes(gens: &[GroupWord], v: &LieVector) -> Result<bool, AdjointError> {
    for g in gens {
        if let Some(mus) = toral_cocharacters(g).filter(|m| !m.is_empty()) {
            let weighted = v.terms().any(|(b, _)| matches!(b, Basis::E(z) if mus.iter().any(|mu| pairing(*z, *mu) != 0)));
            if weighted {
                return Ok(false);
            }
        } else if ad_word(g)?.apply(v) != *v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Element of GF(2)(r), kept in lowest terms.
#[derive(Clone, PartialEq, Eq)]
struct Frac {
    num: Gf2x,
    den: Gf2x,
}

impl Frac {
    fn new(num: Gf2x, den: Gf2x) -> Frac {
        if num.is_zero() {
            return Frac { num, den: Gf2x::one() };
        }
        let g = num.gcd(&den);
        Frac { num: num.div_rem(&g).0, den: den.div_rem(&g).0 }
    }

    fn poly(p: Gf2x) -> Frac {
        Frac { num: p, den: Gf2x::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    fn inv(&self) -> Frac {
        Frac::new(self.den.clone(), self.num.clone())
    }
}

fn lcm(a: &Gf2x, b: &Gf2x) -> Gf2x {
    a.mul(b).div_rem(&a.gcd(b)).0
}

/// Reduces rows in place to reduced row echelon form; returns pivot columns.
fn rref(rows: &mut Vec<Vec<Frac>>) -> Vec<usize> {
    let mut pivots = Vec::new();
    for col in 0..DIM {
        let rank = pivots.len();
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv();
        rows[rank] = rows[rank].iter().map(|x| x.mul(&inv)).collect();
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let f = row[col].clone();
            if i != rank && !f.is_zero() {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = x.add(&y.mul(&f));
                }
            }
        }
        pivots.push(col);
    }
    rows.truncate(pivots.len());
    pivots
}

fn frac_row(v: &LieVector, r: &Symbol) -> Result<Vec<Frac>, AdjointError> {
    let mut row = vec![Frac::poly(Gf2x::zero()); DIM];
    for (b, c) in v.terms() {
        let p = Gf2x::from_poly(c, r).ok_or_else(|| AdjointError::UnsupportedCoefficients(c.to_string()))?;
        row[b.index()] = Frac::poly(p);
    }
    Ok(row)
}

/// Clears denominators and removes the common polynomial factor.
fn primitive_vector(row: &[Frac], r: &Symbol) -> LieVector {
    let den = row.iter().fold(Gf2x::one(), |acc, x| lcm(&acc, &x.den));
    let nums: Vec<Gf2x> = row.iter().map(|x| x.num.mul(&den.div_rem(&x.den).0)).collect();
    let content = nums.iter().fold(Gf2x::zero(), |acc, n| acc.gcd(n));
    nums.iter().enumerate().filter(|(_, n)| !n.is_zero()).fold(LieVector::zero(), |v, (i, n)| {
        v.with(Basis::from_index(i), n.div_rem(&content).0.to_poly(r))
    })
}

/// Basis of the simultaneous fixed space of the generators, with each
/// toral generator restricting to its weight-zero space.
///
/// Elimination runs over GF(2)(r). The result is the reduced echelon basis
/// of the fixed space (so it is canonical), each vector scaled to have
/// polynomial coefficients in r without common factor.
pub fn lie_centralizer_basis(gens: &[GroupWord]) -> Result<Vec<LieVector>, AdjointError> {
    let r = Symbol::sqrt_a();
    let mut rows: Vec<Vec<Frac>> = Vec::new();
    for g in gens {
        if let Some(mus) = toral_cocharacters(g).filter(|m| !m.is_empty()) {
            for z in Root::all() {
                if mus.iter().any(|mu| pairing(z, *mu) != 0) {
                    rows.push(frac_row(&LieVector::basis(Basis::E(z)), &r)?);
                }
            }
            continue;
        }
        let m = ad_word(g)?;
        for i in 0..DIM {
            let mut row = Vec::with_capacity(DIM);
            for j in 0..DIM {
                let mut e = m.entry(i, j).clone();
                if i == j {
                    e = e.add(&Poly::one());
                }
                let p = Gf2x::from_poly(&e, &r).ok_or_else(|| AdjointError::UnsupportedCoefficients(e.to_string()))?;
                row.push(Frac::poly(p));
            }
            rows.push(row);
        }
    }

    let pivots = rref(&mut rows);
    let mut kernel: Vec<Vec<Frac>> = Vec::new();
    for free in (0..DIM).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Frac::poly(Gf2x::zero()); DIM];
        v[free] = Frac::poly(Gf2x::one());
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = row[free].clone();
        }
        kernel.push(v);
    }
    rref(&mut kernel);
    Ok(kernel.iter().map(|row| primitive_vector(row, &r)).collect())
}

/// Whether v lies in the GF(2)(r)-span of the given vectors.
pub fn in_span(basis: &[LieVector], v: &LieVector) -> Result<bool, AdjointError> {
    let r = Symbol::sqrt_a();
    let mut rows = basis.iter().map(|w| frac_row(w, &r)).collect::<Result<Vec<_>, _>>()?;
    let rank = rref(&mut rows).len();
    rows.push(frac_row(v, &r)?);
    Ok(rref(&mut rows).len() == rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{collect, invert};
    use crate::rootsys::sigma_act;

    fn c() -> Poly {
        Poly::var("c")
    }

    #[test]
    fn basis_indexing() {
        for i in 0..DIM {
            assert_eq!(Basis::from_index(i).index(), i);
        }
        assert_eq!(Basis::E(Root::new(-12)).index(), 0);
        assert_eq!(Basis::E(Root::new(1)).index(), 12);
    }

    #[test]
    fn atom_examples() {
        let m = ad_atom(&Atom::eps(6, c())).unwrap();
        assert_eq!(m.apply(&LieVector::e(9)), LieVector::e(9).with(Basis::E(Root::new(12)), c()));
        assert_eq!(m.apply(&LieVector::e(6)), LieVector::e(6));
        let s = ad_atom(&Atom::Sigma).unwrap();
        assert_eq!(s.apply(&LieVector::e(6)), LieVector::e(sigma_act(Root::new(6)).label()));
        assert_eq!(s.apply(&LieVector::e(6)), LieVector::e(7));
    }

    #[test]
    fn word_examples() {
        assert!(ad_word(&GroupWord::identity()).unwrap().is_identity());
        assert_eq!(ad_word(&GroupWord::n_alpha_sigma()).unwrap().apply(&LieVector::e(4)), LieVector::e(5));
        let v = GroupWord(vec![Atom::eps(6, Poly::sqrt_a()), Atom::eps(9, Poly::sqrt_a())]);
        assert_eq!(ad_word(&v).unwrap().apply(&LieVector::e(12)), LieVector::e(12));
    }

    #[test]
    fn opposite_root_rule() {
        let m = ad_atom(&Atom::eps(5, c())).unwrap();
        let got = m.apply(&LieVector::e(-5));
        let h5 = coweight_vector(Root::new(5).coroot());
        let want = LieVector::e(-5).add(&scale(&h5, &c())).with(Basis::E(Root::new(5)), c().square());
        assert_eq!(got, want);
    }

    #[test]
    fn weyl_rep_matches_root_elements() {
        for xi in Root::all() {
            let word = GroupWord(vec![Atom::Eps(xi, Poly::one()), Atom::Eps(-xi, Poly::one()), Atom::Eps(xi, Poly::one())]);
            assert_eq!(ad_word(&word).unwrap(), ad_atom(&Atom::WeylRep(xi)).unwrap(), "root {xi}");
        }
    }

    #[test]
    fn torus_is_diagonal() {
        let mu = Coweight([1, 0, 1, 0]);
        let s = Poly::unit("s");
        let m = ad_atom(&Atom::CochVal(mu, s.clone())).unwrap();
        for b in Basis::all() {
            let want = match b {
                Basis::E(z) => Poly::from_monomial(s.as_invertible_monomial().unwrap().pow(pairing(z, mu)).unwrap()),
                Basis::H(_) => Poly::one(),
            };
            assert_eq!(m.apply(&LieVector::basis(b)), LieVector::zero().with(b, want));
        }
    }

    #[test]
    fn inverse_words() {
        let g = GroupWord(vec![
            Atom::eps(6, c()),
            Atom::Sigma,
            Atom::CochVal(Coweight([0, 1, 0, 0]), Poly::unit("s")),
            Atom::n(Simple::Beta),
            Atom::eps(-3, Poly::var("d")),
        ]);
        assert!(ad_word(&g).unwrap().compose(&ad_word(&invert(&g)).unwrap()).is_identity());
    }

    #[test]
    fn centralizer_examples() {
        let n = GroupWord(vec![Atom::n(Simple::Alpha), Atom::Sigma, Atom::eps(12, Poly::a())]);
        let t = GroupWord(vec![Atom::CochVal(Coweight([1, 0, 1, 0]), Poly::unit("s"))]);
        let e69 = LieVector::e(6).add(&LieVector::e(9));
        assert!(centralizes(&[n.clone(), t.clone()], &e69).unwrap());
        assert!(centralizes(&[], &LieVector::e(4)).unwrap());
        assert!(!centralizes(&[GroupWord::n_alpha_sigma()], &LieVector::e(4)).unwrap());

        let basis = lie_centralizer_basis(&[n.clone(), t.clone()]).unwrap();
        assert!(basis.contains(&e69), "{basis:?}");
        assert!(basis.contains(&LieVector::e(12)));
        assert_eq!(basis.len(), 5);
        assert!(in_span(&basis, &LieVector::e(6).add(&LieVector::e(9))).unwrap());
        assert!(!in_span(&basis, &LieVector::e(6)).unwrap());
        for v in &basis {
            assert!(centralizes(&[n.clone(), t.clone()], v).unwrap(), "{v}");
        }
    }

    #[test]
    fn centralizer_of_lambda_torus() {
        let t = GroupWord(vec![Atom::CochVal(Coweight::lambda(), Poly::unit("s"))]);
        let got = lie_centralizer_basis(&[t]).unwrap();
        let mut want: Vec<LieVector> = [-3, -2, -1, 1, 2, 3].iter().map(|&l| LieVector::e(l)).collect();
        want.extend(Simple::ALL.iter().map(|s| LieVector::h(*s)));
        assert_eq!(got, want);
        assert_eq!(lie_centralizer_basis(&[]).unwrap().len(), DIM);
    }

    #[test]
    fn generic_variables_rejected() {
        let g = GroupWord(vec![Atom::eps(4, Poly::var("x4"))]);
        assert!(matches!(lie_centralizer_basis(&[g]), Err(AdjointError::UnsupportedCoefficients(_))));
    }

    #[test]
    fn fixed_roots_agree_with_group() {
        // If g commutes with every ε_ζ(c) then Ad(g) fixes e_ζ.
        let g = GroupWord(vec![Atom::eps(6, Poly::sqrt_a()), Atom::eps(9, Poly::sqrt_a())]);
        for z in Root::all() {
            let e = GroupWord(vec![Atom::Eps(z, c())]);
            let Ok(conj) = collect(&g.times(&e).times(&invert(&g))) else { continue };
            if conj == collect(&e).unwrap() {
                assert_eq!(ad_word(&g).unwrap().apply(&LieVector::basis(Basis::E(z))), LieVector::basis(Basis::E(z)));
            }
        }
    }

    #[test]
    fn rendering() {
        let v = LieVector::e(6).add(&LieVector::e(9)).with(Basis::H(Simple::Beta), Poly::parse("r+1").unwrap());
        assert_eq!(v.to_string(), "e(6)+e(9)+(r+1)*h(0,1,0,0)");
    }
}
