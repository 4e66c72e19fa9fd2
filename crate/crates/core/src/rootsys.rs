//! The D4 root system with triality.
//!
//! Roots are stored in simple-root coordinates ordered (α, β, γ, δ), β being
//! the branch node. Positive roots carry the labels 1..=12 of the standard
//! table for this example, negatives carry -1..=-12. Coweights live in the
//! coroot lattice, coordinates ordered (α∨, β∨, γ∨, δ∨).
//!
//! Because D4 is simply laced and the Cartan matrix is symmetric, a twisted
//! Weyl element acts on root coordinates and on coroot coordinates by the
//! same integer matrix. [`Twist`] exploits this.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

pub const RANK: usize = 4;

pub type Vec4 = [i32; RANK];
pub type Mat4 = [[i32; RANK]; RANK];

/// Cartan matrix in (α, β, γ, δ) order: β is adjacent to α, γ and δ.
pub const CARTAN: Mat4 = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]];

/// Positive roots indexed by `label - 1`, coordinates in (α, β, γ, δ) order.
const POSITIVE: [Vec4; 12] = [
    [1, 0, 0, 0], // 1  α
    [0, 0, 1, 0], // 2  γ
    [0, 0, 0, 1], // 3  δ
    [0, 1, 0, 0], // 4  β
    [1, 1, 0, 0], // 5
    [0, 1, 1, 0], // 6
    [0, 1, 0, 1], // 7
    [1, 1, 1, 0], // 8
    [1, 1, 0, 1], // 9
    [0, 1, 1, 1], // 10
    [1, 1, 1, 1], // 11
    [1, 2, 1, 1], // 12
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSysError {
    #[error("no root carries label {0}")]
    BadLabel(i32),
    #[error("{0:?} is not a root of D4")]
    NotARoot(Vec4),
    #[error("word does not stabilize the positive-pairing set: root {from} maps to {to}")]
    NotStable { from: i32, to: i32 },
}

/// A simple root of D4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Simple {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl Simple {
    pub const ALL: [Simple; 4] = [Simple::Alpha, Simple::Beta, Simple::Gamma, Simple::Delta];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn root(self) -> Root {
        let mut c = [0; RANK];
        c[self.index()] = 1;
        Root::from_coords(c).expect("simple roots are roots")
    }

    pub fn coroot(self) -> Coweight {
        let mut c = [0; RANK];
        c[self.index()] = 1;
        Coweight(c)
    }

    /// Image under the triality σ: α → γ → δ → α, β fixed.
    pub fn sigma(self) -> Simple {
        match self {
            Simple::Alpha => Simple::Gamma,
            Simple::Gamma => Simple::Delta,
            Simple::Delta => Simple::Alpha,
            Simple::Beta => Simple::Beta,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Simple::Alpha => "α",
            Simple::Beta => "β",
            Simple::Gamma => "γ",
            Simple::Delta => "δ",
        }
    }
}

/// A root of D4, identified by its signed label.
///
/// The derived order is the signed label order `-12 < … < -1 < 1 < … < 12`,
/// which also sorts roots by height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(i8);

impl Root {
    pub fn from_label(label: i32) -> Result<Root, RootSysError> {
        if label != 0 && label.abs() <= 12 {
            Ok(Root(label as i8))
        } else {
            Err(RootSysError::BadLabel(label))
        }
    }

    /// Shorthand for statically known labels. Panics on an invalid label.
    pub fn new(label: i32) -> Root {
        Root::from_label(label).expect("valid root label")
    }

    pub fn from_coords(c: Vec4) -> Option<Root> {
        POSITIVE.iter().position(|p| *p == c).map(|i| Root(i as i8 + 1)).or_else(|| {
            let neg = c.map(|x| -x);
            POSITIVE.iter().position(|p| *p == neg).map(|i| -(Root(i as i8 + 1)))
        })
    }

    pub fn label(self) -> i32 {
        self.0 as i32
    }

    pub fn coords(self) -> Vec4 {
        let p = POSITIVE[self.0.unsigned_abs() as usize - 1];
        if self.0 > 0 {
            p
        } else {
            p.map(|x| -x)
        }
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn height(self) -> i32 {
        self.coords().iter().sum()
    }

    /// The coroot ξ∨, in coroot coordinates (equal to the root coordinates).
    pub fn coroot(self) -> Coweight {
        Coweight(self.coords())
    }

    /// `self + other` when that is again a root.
    pub fn checked_add(self, other: Root) -> Option<Root> {
        Root::from_coords(add4(self.coords(), other.coords()))
    }

    /// All 24 roots in ascending label order.
    pub fn all() -> impl Iterator<Item = Root> {
        (-12..=12).filter(|&l| l != 0).map(|l| Root(l as i8))
    }

    pub fn positive() -> impl Iterator<Item = Root> {
        (1..=12).map(|l| Root(l as i8))
    }
}

impl Neg for Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root(-self.0)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the coroot lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Coweight(pub Vec4);

impl Coweight {
    pub const ZERO: Coweight = Coweight([0; RANK]);

    /// λ = (α+2β+γ+δ)∨ = α∨ + 2β∨ + γ∨ + δ∨.
    pub fn lambda() -> Coweight {
        Coweight([1, 2, 1, 1])
    }

    pub fn is_zero(self) -> bool {
        self.0 == [0; RANK]
    }

    pub fn coords(self) -> Vec4 {
        self.0
    }
}

impl Add for Coweight {
    type Output = Coweight;
    fn add(self, rhs: Coweight) -> Coweight {
        Coweight(add4(self.0, rhs.0))
    }
}

impl Sub for Coweight {
    type Output = Coweight;
    fn sub(self, rhs: Coweight) -> Coweight {
        self + (-rhs)
    }
}

impl Neg for Coweight {
    type Output = Coweight;
    fn neg(self) -> Coweight {
        Coweight(self.0.map(|x| -x))
    }
}

impl Mul<Coweight> for i32 {
    type Output = Coweight;
    fn mul(self, rhs: Coweight) -> Coweight {
        Coweight(rhs.0.map(|x| self * x))
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "{},{},{},{}", c[0], c[1], c[2], c[3])
    }
}

fn add4(a: Vec4, b: Vec4) -> Vec4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// ⟨ζ, μ⟩ computed through the Cartan matrix.
pub fn pairing(zeta: Root, mu: Coweight) -> i32 {
    pairing_coords(zeta.coords(), mu)
}

pub(crate) fn pairing_coords(c: Vec4, mu: Coweight) -> i32 {
    let d = mu.0;
    let mut total = 0;
    for i in 0..RANK {
        for j in 0..RANK {
            total += c[i] * CARTAN[i][j] * d[j];
        }
    }
    total
}

/// s_ξ·ζ = ζ − ⟨ζ, ξ∨⟩ξ.
pub fn reflect(xi: Root, zeta: Root) -> Root {
    let k = pairing(zeta, xi.coroot());
    let (z, x) = (zeta.coords(), xi.coords());
    Root::from_coords([z[0] - k * x[0], z[1] - k * x[1], z[2] - k * x[2], z[3] - k * x[3]])
        .expect("reflections permute roots")
}

/// s_ξ·μ = μ − ⟨ξ, μ⟩ξ∨ on the coroot lattice.
pub fn reflect_coweight(xi: Root, mu: Coweight) -> Coweight {
    mu - pairing(xi, mu) * xi.coroot()
}

fn sigma_coords(c: Vec4) -> Vec4 {
    let mut out = [0; RANK];
    for s in Simple::ALL {
        out[s.sigma().index()] = c[s.index()];
    }
    out
}

pub fn sigma_act(zeta: Root) -> Root {
    Root::from_coords(sigma_coords(zeta.coords())).expect("σ permutes roots")
}

pub fn sigma_coweight(mu: Coweight) -> Coweight {
    Coweight(sigma_coords(mu.0))
}

/// One generator of the twisted Weyl group W ⋊ ⟨σ⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwistedGen {
    Reflect(Simple),
    Sigma,
}

/// A word in simple reflections and σ. The leftmost generator is applied last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TwistedWeylWord(pub Vec<TwistedGen>);

impl TwistedWeylWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// n_α σ.
    pub fn n_alpha_sigma() -> Self {
        Self(vec![TwistedGen::Reflect(Simple::Alpha), TwistedGen::Sigma])
    }

    /// The twelve-letter word n_α n_β n_α n_γ n_β n_α n_δ n_β n_α n_γ n_β n_δ.
    pub fn longest() -> Self {
        use Simple::*;
        let letters = [Alpha, Beta, Alpha, Gamma, Beta, Alpha, Delta, Beta, Alpha, Gamma, Beta, Delta];
        Self(letters.into_iter().map(TwistedGen::Reflect).collect())
    }

    pub fn twist(&self) -> Twist {
        self.0.iter().fold(Twist::identity(), |acc, g| {
            acc.compose(&match g {
                TwistedGen::Reflect(s) => Twist::reflection(s.root()),
                TwistedGen::Sigma => Twist::sigma(),
            })
        })
    }
}

pub fn word_act(w: &TwistedWeylWord, zeta: Root) -> Root {
    w.0.iter().rev().fold(zeta, |z, g| match g {
        TwistedGen::Reflect(s) => reflect(s.root(), z),
        TwistedGen::Sigma => sigma_act(z),
    })
}

/// An element w·σ^j of W ⋊ ⟨σ⟩, stored as its matrix on root coordinates
/// together with the inverse matrix and the σ-exponent.
///
/// Two twists are equal iff they act identically on the roots and carry the
/// same σ-exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Twist {
    mat: Mat4,
    inv: Mat4,
    sigma: u8,
}

const IDENTITY: Mat4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0; RANK]; RANK];
    for i in 0..RANK {
        for j in 0..RANK {
            out[i][j] = (0..RANK).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn mat_apply(a: &Mat4, v: Vec4) -> Vec4 {
    let mut out = [0; RANK];
    for (i, row) in a.iter().enumerate() {
        out[i] = (0..RANK).map(|k| row[k] * v[k]).sum();
    }
    out
}

fn columns(f: impl Fn(Vec4) -> Vec4) -> Mat4 {
    let mut m = [[0; RANK]; RANK];
    for j in 0..RANK {
        let mut e = [0; RANK];
        e[j] = 1;
        let col = f(e);
        for i in 0..RANK {
            m[i][j] = col[i];
        }
    }
    m
}

impl Twist {
    pub fn identity() -> Twist {
        Twist { mat: IDENTITY, inv: IDENTITY, sigma: 0 }
    }

    pub fn reflection(xi: Root) -> Twist {
        let m = columns(|v| reflect_coweight(xi, Coweight(v)).0);
        Twist { mat: m, inv: m, sigma: 0 }
    }

    pub fn sigma() -> Twist {
        let m = columns(sigma_coords);
        Twist { mat: m, inv: mat_mul(&m, &m), sigma: 1 }
    }

    pub fn compose(&self, rhs: &Twist) -> Twist {
        Twist {
            mat: mat_mul(&self.mat, &rhs.mat),
            inv: mat_mul(&rhs.inv, &self.inv),
            sigma: (self.sigma + rhs.sigma) % 3,
        }
    }

    pub fn inverse(&self) -> Twist {
        Twist { mat: self.inv, inv: self.mat, sigma: (3 - self.sigma) % 3 }
    }

    pub fn is_identity(&self) -> bool {
        self.mat == IDENTITY && self.sigma == 0
    }

    pub fn sigma_exponent(&self) -> u8 {
        self.sigma
    }

    pub fn matrix(&self) -> Mat4 {
        self.mat
    }

    pub fn act_root(&self, zeta: Root) -> Root {
        Root::from_coords(mat_apply(&self.mat, zeta.coords())).expect("twists permute roots")
    }

    pub fn act_coweight(&self, mu: Coweight) -> Coweight {
        Coweight(mat_apply(&self.mat, mu.0))
    }

    /// Lexicographically first reduced word (by label of the simple root)
    /// of the Weyl part w, where self = w·σ^j.
    pub fn reduced_word(&self) -> Vec<Simple> {
        let mut w = self.compose(&Twist::sigma_power(3 - self.sigma)).with_sigma(0);
        let mut letters = Vec::new();
        let mut by_label: Vec<Simple> = Simple::ALL.to_vec();
        by_label.sort_by_key(|s| s.root().label());
        while !w.is_identity() {
            // s is a left descent of w iff w⁻¹·s is negative.
            let s = *by_label
                .iter()
                .find(|s| !w.inverse().act_root(s.root()).is_positive())
                .expect("a nontrivial Weyl element has a left descent");
            letters.push(s);
            w = Twist::reflection(s.root()).compose(&w);
        }
        letters
    }

    fn sigma_power(k: u8) -> Twist {
        (0..k % 3).fold(Twist::identity(), |acc, _| acc.compose(&Twist::sigma()))
    }

    fn with_sigma(mut self, j: u8) -> Twist {
        self.sigma = j;
        self
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> =
            self.reduced_word().iter().map(|s| format!("n_{}", s.root().label())).collect();
        if self.sigma != 0 {
            parts.push(format!("sigma^{}", self.sigma));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// A permutation of root labels in canonical cycle notation: every cycle
/// starts at its smallest label and cycles are sorted by that label.
/// Fixed points are kept as one-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycles(pub Vec<Vec<i32>>);

impl Cycles {
    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|c| c.len() == 1)
    }
}

impl fmt::Display for Cycles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            let body: Vec<String> = c.iter().map(|l| l.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn cycles_of(domain: &[i32], image: impl Fn(i32) -> i32) -> Cycles {
    let mut sorted = domain.to_vec();
    sorted.sort_unstable();
    let mut seen = Vec::new();
    let mut cycles = Vec::new();
    for &start in &sorted {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.push(start);
        let mut cur = image(start);
        while cur != start {
            cycle.push(cur);
            seen.push(cur);
            cur = image(cur);
        }
        cycles.push(cycle);
    }
    Cycles(cycles)
}

/// Cycle decomposition of `w` on the labels of {ζ : ⟨ζ, λ⟩ > 0}.
pub fn radical_permutation(w: &TwistedWeylWord, lambda: Coweight) -> Result<Cycles, RootSysError> {
    let domain: Vec<i32> =
        Root::all().filter(|z| pairing(*z, lambda) > 0).map(Root::label).collect();
    for &l in &domain {
        let to = word_act(w, Root::new(l));
        if pairing(to, lambda) <= 0 {
            return Err(RootSysError::NotStable { from: l, to: to.label() });
        }
    }
    Ok(cycles_of(&domain, |l| word_act(w, Root::new(l)).label()))
}

/// Roots split by the sign of their pairing with a cocharacter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolicPartition {
    pub levi: Vec<i32>,
    pub radical: Vec<i32>,
    pub opposite: Vec<i32>,
}

pub fn parabolic_partition(lambda: Coweight) -> ParabolicPartition {
    let mut p = ParabolicPartition { levi: vec![], radical: vec![], opposite: vec![] };
    for z in Root::all() {
        match pairing(z, lambda).signum() {
            0 => p.levi.push(z.label()),
            1 => p.radical.push(z.label()),
            _ => p.opposite.push(z.label()),
        }
    }
    p
}

/// Hermite-reduced integer basis of the coweights fixed by every twist in
/// `ws` (the full lattice when `ws` is empty).
pub fn fixed_sublattice(ws: &[Twist]) -> Vec<Coweight> {
    centralizing_sublattice(ws, &[])
}

/// Cocharacters fixed by every twist and orthogonal to every given root.
pub fn centralizing_sublattice(ws: &[Twist], roots: &[Root]) -> Vec<Coweight> {
    let mut rows: Vec<Vec4> = Vec::new();
    for w in ws {
        let m = w.matrix();
        for (i, row) in m.iter().enumerate() {
            let mut r = *row;
            r[i] -= 1;
            rows.push(r);
        }
    }
    for z in roots {
        // ⟨ζ, μ⟩ = ζᵀ A μ
        let mut r = [0; RANK];
        for (j, x) in r.iter_mut().enumerate() {
            let mut e = [0; RANK];
            e[j] = 1;
            *x = pairing(*z, Coweight(e));
        }
        rows.push(r);
    }
    integer_kernel(&rows)
}

pub fn fixed_cocharacters(w: &TwistedWeylWord) -> Vec<Coweight> {
    fixed_sublattice(&[w.twist()])
}

/// Integer basis of {x ∈ ℤ⁴ : rows·x = 0}, in row Hermite normal form.
fn integer_kernel(rows: &[Vec4]) -> Vec<Coweight> {
    // Column-reduce A by unimodular column operations tracked in U; the
    // columns of U whose A-column becomes zero span the integer kernel.
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    let mut u: Vec<[i64; RANK]> = (0..RANK)
        .map(|i| {
            let mut e = [0; RANK];
            e[i] = 1;
            e
        })
        .collect();
    let mut pivot_col = 0;
    for row in 0..a.len() {
        if pivot_col == RANK {
            break;
        }
        loop {
            // Pick the smallest nonzero entry in this row among active columns.
            let best = (pivot_col..RANK)
                .filter(|&c| a[row][c] != 0)
                .min_by_key(|&c| a[row][c].abs());
            let Some(b) = best else { break };
            swap_cols(&mut a, &mut u, pivot_col, b);
            let mut done = true;
            for c in pivot_col + 1..RANK {
                let q = a[row][c] / a[row][pivot_col];
                if q != 0 {
                    for r in a.iter_mut() {
                        r[c] -= q * r[pivot_col];
                    }
                    for k in 0..RANK {
                        u[c][k] -= q * u[pivot_col][k];
                    }
                }
                if a[row][c] != 0 {
                    done = false;
                }
            }
            if done {
                pivot_col += 1;
                break;
            }
        }
    }
    let basis: Vec<[i64; RANK]> = u[pivot_col..].to_vec();
    hermite(basis).into_iter().map(|v| Coweight(v.map(|x| x as i32))).collect()
}

fn swap_cols(a: &mut [Vec<i64>], u: &mut [[i64; RANK]], i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in a.iter_mut() {
        r.swap(i, j);
    }
    u.swap(i, j);
}

/// Row Hermite normal form: positive pivots, entries above each pivot
/// reduced into [0, pivot).
fn hermite(mut rows: Vec<[i64; RANK]>) -> Vec<[i64; RANK]> {
    let mut top = 0;
    for col in 0..RANK {
        if top == rows.len() {
            break;
        }
        loop {
            let best = (top..rows.len()).filter(|&r| rows[r][col] != 0).min_by_key(|&r| rows[r][col].abs());
            let Some(b) = best else { break };
            rows.swap(top, b);
            let mut clean = true;
            for r in top + 1..rows.len() {
                let q = rows[r][col] / rows[top][col];
                if q != 0 {
                    let p = rows[top];
                    for k in 0..RANK {
                        rows[r][k] -= q * p[k];
                    }
                }
                if rows[r][col] != 0 {
                    clean = false;
                }
            }
            if clean {
                if rows[top][col] < 0 {
                    rows[top] = rows[top].map(|x| -x);
                }
                let p = rows[top];
                for r in 0..top {
                    let q = rows[r][col].div_euclid(p[col]);
                    for k in 0..RANK {
                        rows[r][k] -= q * p[k];
                    }
                }
                top += 1;
                break;
            }
        }
    }
    rows.truncate(top);
    rows
}
