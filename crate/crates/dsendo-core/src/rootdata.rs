//! Based root data, duality, finite Weyl groups, positive systems and
//! orbit/stabilizer computations.
//!
//! Coordinates: `X* = ℤⁿ` (characters) and `X₊ = ℤⁿ` (cocharacters) with the
//! standard dot product as the perfect pairing. Roots live in `X*`, coroots in
//! `X₊`. Weyl elements are stored by their integer matrix on `X₊` together with
//! the dual (inverse-transpose) matrix on `X*`.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

/// Exact rational scalar used for weights and coweights.
pub type Q = Rational64;

/// Default cap on the number of Weyl group elements enumerated.
pub const DEFAULT_WEYL_BOUND: usize = 100_000;

/// Errors raised by root-datum computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootDataError {
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("Weyl group exceeds the enumeration bound of {0} elements")]
    BoundExceeded(usize),
    #[error("root system closure exceeds {0} roots; the Cartan matrix is not of finite type")]
    InfiniteRootSystem(usize),
    #[error("weight {weight} is irregular: it pairs to zero with the coroot {coroot:?}")]
    Irregular { weight: String, coroot: Vec<i64> },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid root datum: {0}")]
    Invalid(String),
}

/// One way in which a candidate root datum fails the axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

/// A rational vector in `X* ⊗ ℚ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<Q>);

/// A rational vector in `X₊ ⊗ ℚ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coweight(pub Vec<Q>);

macro_rules! rational_vector {
    ($t:ident) => {
        impl $t {
            pub fn zero(n: usize) -> Self {
                Self(vec![Q::zero(); n])
            }

            pub fn from_ints(v: &[i64]) -> Self {
                Self(v.iter().map(|&x| Q::from_integer(x)).collect())
            }

            pub fn rank(&self) -> usize {
                self.0.len()
            }

            pub fn add(&self, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn sub(&self, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
            }

            pub fn scale(&self, c: Q) -> Self {
                Self(self.0.iter().map(|a| a * c).collect())
            }

            pub fn add_ints(&self, v: &[i64]) -> Self {
                Self(self.0.iter().zip(v).map(|(a, &b)| a + Q::from_integer(b)).collect())
            }

            /// Integer coordinates, if every coordinate is integral.
            pub fn to_ints(&self) -> Option<Vec<i64>> {
                self.0.iter().map(|q| q.is_integer().then(|| q.to_integer())).collect()
            }

            pub fn is_integral(&self) -> bool {
                self.0.iter().all(|q| q.is_integer())
            }

            /// Reduces every coordinate into `[0, 1)`, i.e. modulo the standard lattice.
            pub fn reduce_mod_lattice(&self) -> Self {
                Self(self.0.iter().map(|q| q - q.floor()).collect())
            }

            pub fn to_f64(&self) -> Vec<f64> {
                self.0.iter().map(|q| *q.numer() as f64 / *q.denom() as f64).collect()
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    };
}

rational_vector!(Weight);
rational_vector!(Coweight);

/// Pairing `⟨λ, x⟩` of a weight with a coweight.
pub fn pair(lambda: &Weight, x: &Coweight) -> Q {
    lambda.0.iter().zip(&x.0).map(|(a, b)| a * b).sum()
}

/// Pairing of an integral character with a rational coweight.
pub fn pair_root(alpha: &[i64], x: &Coweight) -> Q {
    alpha.iter().zip(&x.0).map(|(&a, b)| b * a).sum()
}

/// Pairing of a rational weight with an integral cocharacter.
pub fn pair_coroot(lambda: &Weight, coroot: &[i64]) -> Q {
    lambda.0.iter().zip(coroot).map(|(a, &b)| a * b).sum()
}

/// Pairing of two integer vectors.
pub fn pair_int(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A based root datum `(X*, R, X₊, R∨, Δ)` with `X* = X₊ = ℤⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedRootDatum {
    pub label: String,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    /// Indices into `roots` of the simple roots.
    pub simple: Vec<usize>,
}

impl BasedRootDatum {
    /// Assembles a datum from explicit data without checking the axioms; see [`validate`].
    pub fn new(label: impl Into<String>, rank: usize, roots: Vec<Vec<i64>>, coroots: Vec<Vec<i64>>, simple: Vec<usize>) -> Self {
        Self {
            label: label.into(),
            rank,
            roots,
            coroots,
            simple,
        }
    }

    /// Generates the full root datum from simple roots and simple coroots by
    /// closing under the simple reflections.
    ///
    /// Roots are ordered: positive roots by height (simple roots first), then
    /// their negatives in the same order.
    pub fn from_simple(label: impl Into<String>, rank: usize, simple_roots: &[Vec<i64>], simple_coroots: &[Vec<i64>]) -> Result<Self, RootDataError> {
        const CAP: usize = 10_000;
        if simple_roots.len() != simple_coroots.len() {
            return Err(RootDataError::Dimension {
                expected: simple_roots.len(),
                found: simple_coroots.len(),
            });
        }
        for v in simple_roots.iter().chain(simple_coroots) {
            if v.len() != rank {
                return Err(RootDataError::Dimension { expected: rank, found: v.len() });
            }
        }
        let r = simple_roots.len();
        let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..r {
            for sign in [1, -1] {
                let a: Vec<i64> = simple_roots[i].iter().map(|x| sign * x).collect();
                let c: Vec<i64> = simple_coroots[i].iter().map(|x| sign * x).collect();
                if seen.insert(a.clone(), c.clone()).is_none() {
                    queue.push_back((a, c));
                }
            }
        }
        while let Some((beta, beta_c)) = queue.pop_front() {
            for i in 0..r {
                let k = pair_int(&beta, &simple_coroots[i]);
                let kc = pair_int(&simple_roots[i], &beta_c);
                let nb: Vec<i64> = beta.iter().zip(&simple_roots[i]).map(|(b, a)| b - k * a).collect();
                let nc: Vec<i64> = beta_c.iter().zip(&simple_coroots[i]).map(|(b, a)| b - kc * a).collect();
                if !seen.contains_key(&nb) {
                    if seen.len() >= CAP {
                        return Err(RootDataError::InfiniteRootSystem(CAP));
                    }
                    seen.insert(nb.clone(), nc.clone());
                    queue.push_back((nb, nc));
                }
            }
        }
        let mut provisional = Self::new(label, rank, simple_roots.to_vec(), simple_coroots.to_vec(), (0..r).collect());
        let mut positive: Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> = Vec::new();
        for (a, c) in &seen {
            let coeffs = provisional
                .simple_coefficients(a)
                .ok_or_else(|| RootDataError::Invalid(format!("root {a:?} is not in the span of the simple roots")))?;
            if coeffs.iter().all(|q| !q.is_negative()) {
                let ints: Vec<i64> = coeffs.iter().map(|q| q.to_integer()).collect();
                positive.push((ints, a.clone(), c.clone()));
            }
        }
        positive.sort_by(|x, y| {
            let hx: i64 = x.0.iter().sum();
            let hy: i64 = y.0.iter().sum();
            hx.cmp(&hy).then_with(|| y.0.cmp(&x.0))
        });
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for (_, a, c) in &positive {
            roots.push(a.clone());
            coroots.push(c.clone());
        }
        for (_, a, c) in &positive {
            roots.push(a.iter().map(|x| -x).collect());
            coroots.push(c.iter().map(|x| -x).collect());
        }
        provisional.roots = roots;
        provisional.coroots = coroots;
        Ok(provisional)
    }

    /// The simply connected datum of a Cartan matrix `A_ij = ⟨αᵢ, αⱼ∨⟩`:
    /// `X₊` has the simple coroots as basis, `X*` the fundamental weights.
    pub fn simply_connected(label: impl Into<String>, cartan: &[Vec<i64>]) -> Result<Self, RootDataError> {
        let n = cartan.len();
        let coroots: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
        Self::from_simple(label, n, cartan, &coroots)
    }

    /// The adjoint datum of a Cartan matrix: `X*` has the simple roots as
    /// basis, `X₊` the fundamental coweights.
    pub fn adjoint(label: impl Into<String>, cartan: &[Vec<i64>]) -> Result<Self, RootDataError> {
        let n = cartan.len();
        let roots: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
        let coroots: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| cartan[i][j]).collect()).collect();
        Self::from_simple(label, n, &roots, &coroots)
    }

    /// Built-in seed groups.
    ///
    /// Recognized names: `A1-sc`, `A1-adj`, `A1xA1-sc`, `A2-sc`, `A2-adj`,
    /// `B2-sc`, `B2-adj`, `C2-sc`, `C2-adj`, `C3-sc`, `C3-adj`, `G2`.
    pub fn family(name: &str) -> Result<Self, RootDataError> {
        let a1 = vec![vec![2]];
        let a1a1 = vec![vec![2, 0], vec![0, 2]];
        let a2 = vec![vec![2, -1], vec![-1, 2]];
        // B2: α₁ = e₁ − e₂ long, α₂ = e₂ short.
        let b2 = vec![vec![2, -2], vec![-1, 2]];
        // C2: α₁ = e₁ − e₂ short, α₂ = 2e₂ long.
        let c2 = vec![vec![2, -1], vec![-2, 2]];
        let c3 = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]];
        // G2: α₁ short, α₂ long.
        let g2 = vec![vec![2, -1], vec![-3, 2]];
        match name {
            "A1-sc" | "SL2" => Self::simply_connected(name, &a1),
            "A1-adj" | "A1-adjoint" | "PGL2" => Self::adjoint(name, &a1),
            "A1xA1-sc" => Self::simply_connected(name, &a1a1),
            "A2-sc" => Self::simply_connected(name, &a2),
            "A2-adj" => Self::adjoint(name, &a2),
            "B2-sc" => Self::simply_connected(name, &b2),
            "B2-adj" => Self::adjoint(name, &b2),
            // Sp₄ in the usual coordinates: roots ±e₁±e₂, ±2eᵢ; coroots ±e₁±e₂, ±eᵢ.
            "C2-sc" | "Sp4" => Self::from_simple(name, 2, &[vec![1, -1], vec![0, 2]], &[vec![1, -1], vec![0, 1]]),
            "C2-adj" => Self::adjoint(name, &c2),
            "C3-sc" => Self::simply_connected(name, &c3),
            "C3-adj" => Self::adjoint(name, &c3),
            "G2" | "G2-sc" | "G2-adj" => Self::simply_connected(name, &g2),
            other => Err(RootDataError::UnknownFamily(other.to_string())),
        }
    }

    /// Number of roots.
    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// The Cartan matrix `A_ij = ⟨αᵢ, αⱼ∨⟩` of the simple roots.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.simple
            .iter()
            .map(|&i| self.simple.iter().map(|&j| pair_int(&self.roots[i], &self.coroots[j])).collect())
            .collect()
    }

    /// Index of a root given by its coordinates.
    pub fn root_index(&self, alpha: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r.as_slice() == alpha)
    }

    /// Index of the negative of root `i`.
    pub fn negative(&self, i: usize) -> usize {
        let neg: Vec<i64> = self.roots[i].iter().map(|x| -x).collect();
        self.root_index(&neg).expect("root system is closed under negation")
    }

    /// Coordinates of `β` in the basis of simple roots, if `β` lies in their span.
    pub fn simple_coefficients(&self, beta: &[i64]) -> Option<Vec<Q>> {
        let a = self.cartan_matrix();
        let r = a.len();
        // Solve Σᵢ cᵢ A_ij = ⟨β, αⱼ∨⟩, i.e. Aᵀ c = b.
        let mut m: Vec<Vec<Q>> = (0..r)
            .map(|j| {
                let mut row: Vec<Q> = (0..r).map(|i| Q::from_integer(a[i][j])).collect();
                row.push(Q::from_integer(pair_int(beta, &self.coroots[self.simple[j]])));
                row
            })
            .collect();
        let c = solve_square(&mut m)?;
        let recon: Vec<Q> = (0..self.rank)
            .map(|k| (0..r).map(|i| c[i] * Q::from_integer(self.roots[self.simple[i]][k])).sum())
            .collect();
        let target: Vec<Q> = beta.iter().map(|&x| Q::from_integer(x)).collect();
        (recon == target).then_some(c)
    }

    /// Checks every axiom of a based root datum and lists the violations.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |rule: &str, detail: String| {
            out.push(Violation {
                rule: rule.to_string(),
                detail,
            })
        };
        if self.roots.len() != self.coroots.len() {
            push("matching", format!("{} roots but {} coroots", self.roots.len(), self.coroots.len()));
            return out;
        }
        for (i, (a, c)) in self.roots.iter().zip(&self.coroots).enumerate() {
            if a.len() != self.rank || c.len() != self.rank {
                push("dimension", format!("root/coroot pair {i} does not have length {}", self.rank));
                return out;
            }
            if pair_int(a, c) != 2 {
                push("pairing", format!("<alpha, alpha^vee> = {} for root {a:?}", pair_int(a, c)));
            }
        }
        let distinct: BTreeSet<&Vec<i64>> = self.roots.iter().collect();
        if distinct.len() != self.roots.len() {
            push("distinct", "the root list contains repetitions".to_string());
        }
        for &s in &self.simple {
            if s >= self.roots.len() {
                push("simple", format!("simple index {s} is out of range"));
                return out;
            }
        }
        for &s in &self.simple {
            let (sa, sc) = (&self.roots[s], &self.coroots[s]);
            for (a, c) in self.roots.iter().zip(&self.coroots) {
                let k = pair_int(a, sc);
                let ra: Vec<i64> = a.iter().zip(sa).map(|(x, y)| x - k * y).collect();
                let kc = pair_int(sa, c);
                let rc: Vec<i64> = c.iter().zip(sc).map(|(x, y)| x - kc * y).collect();
                match self.root_index(&ra) {
                    None => push("closure", format!("reflection of {a:?} in simple root {sa:?} is not a root")),
                    Some(j) if self.coroots[j] != rc => {
                        push("closure", format!("reflection of coroot {c:?} in {sc:?} does not match the coroot of {ra:?}"))
                    }
                    Some(_) => {}
                }
            }
        }
        let cartan = self.cartan_matrix();
        for (i, row) in cartan.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if i == j && v != 2 {
                    push("cartan", format!("diagonal entry A[{i}][{j}] = {v}"));
                }
                if i != j && (v > 0 || (v == 0) != (cartan[j][i] == 0)) {
                    push("cartan", format!("off-diagonal entries A[{i}][{j}] = {v}, A[{j}][{i}] = {}", cartan[j][i]));
                }
            }
        }
        let r = self.simple.len();
        let mut gram: Vec<Vec<Q>> = (0..r)
            .map(|i| {
                let mut row: Vec<Q> = (0..r).map(|j| Q::from_integer(cartan[j][i])).collect();
                row.push(Q::zero());
                row
            })
            .collect();
        if solve_square(&mut gram).is_none() {
            push("independence", "the simple roots are linearly dependent".to_string());
            return out;
        }
        for a in &self.roots {
            match self.simple_coefficients(a) {
                None => push("span", format!("root {a:?} is not an integer combination of simple roots")),
                Some(c) => {
                    let integral = c.iter().all(|q| q.is_integer());
                    let nonneg = c.iter().all(|q| !q.is_negative());
                    let nonpos = c.iter().all(|q| !q.is_positive());
                    if !integral || !(nonneg || nonpos) {
                        push("sign", format!("root {a:?} has simple coefficients {c:?}"));
                    }
                }
            }
        }
        out
    }

    /// The dual datum: characters and cocharacters, roots and coroots swapped.
    pub fn dual(&self) -> Self {
        Self {
            label: format!("dual({})", self.label),
            rank: self.rank,
            roots: self.coroots.clone(),
            coroots: self.roots.clone(),
            simple: self.simple.clone(),
        }
    }

    /// The based positive system: roots with nonnegative simple coefficients.
    pub fn based_positive_system(&self) -> PositiveSystem {
        let is_positive: Vec<bool> = self
            .roots
            .iter()
            .map(|a| {
                self.simple_coefficients(a)
                    .is_some_and(|c| c.iter().all(|q| !q.is_negative()))
            })
            .collect();
        let mut ps = PositiveSystem {
            defining: Weight::zero(self.rank),
            is_positive,
        };
        ps.defining = rho(self, &ps);
        ps
    }

    /// Reflection `s_α` on `X₊` as an integer matrix: `x ↦ x − ⟨α, x⟩α∨`.
    pub fn reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let (a, c) = (&self.roots[i], &self.coroots[i]);
        (0..self.rank)
            .map(|r| (0..self.rank).map(|k| i64::from(r == k) - c[r] * a[k]).collect())
            .collect()
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|k| i64::from(k == i)).collect()
}

/// Gauss–Jordan solve of a square system given as an augmented matrix.
fn solve_square(m: &mut [Vec<Q>]) -> Option<Vec<Q>> {
    let r = m.len();
    for col in 0..r {
        let piv = (col..r).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for i in 0..r {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[r]).collect())
}

/// A positive system, represented by a regular defining weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveSystem {
    /// A regular weight `λ` with `α > 0 ⇔ ⟨λ, α∨⟩ > 0`.
    pub defining: Weight,
    /// Positivity flag per root of the ambient datum.
    pub is_positive: Vec<bool>,
}

impl PositiveSystem {
    /// Indices of the positive roots.
    pub fn positive_roots(&self) -> Vec<usize> {
        (0..self.is_positive.len()).filter(|&i| self.is_positive[i]).collect()
    }

    /// Indices of the simple roots: positive roots that are not sums of two positive roots.
    pub fn simple_roots(&self, datum: &BasedRootDatum) -> Vec<usize> {
        let pos = self.positive_roots();
        pos.iter()
            .copied()
            .filter(|&a| {
                !pos.iter().any(|&b| {
                    let diff: Vec<i64> = datum.roots[a].iter().zip(&datum.roots[b]).map(|(x, y)| x - y).collect();
                    datum.root_index(&diff).is_some_and(|d| self.is_positive[d])
                })
            })
            .collect()
    }

    /// The image `w(B)` of this positive system.
    pub fn transform(&self, datum: &BasedRootDatum, w: &WeylElement) -> PositiveSystem {
        let mut is_positive = vec![false; datum.num_roots()];
        for (i, &p) in self.is_positive.iter().enumerate() {
            if p {
                let img = w.act_root(&datum.roots[i]);
                is_positive[datum.root_index(&img).expect("Weyl elements permute roots")] = true;
            }
        }
        PositiveSystem {
            defining: w.act_weight(&self.defining),
            is_positive,
        }
    }
}

/// `ρ = ½ Σ_{α>0} α`.
pub fn rho(datum: &BasedRootDatum, ps: &PositiveSystem) -> Weight {
    let mut sum = vec![Q::zero(); datum.rank];
    for i in ps.positive_roots() {
        for (s, &a) in sum.iter_mut().zip(&datum.roots[i]) {
            *s += Q::from_integer(a);
        }
    }
    Weight(sum).scale(Q::new(1, 2))
}

/// `ρ∨ = ½ Σ_{α>0} α∨`.
pub fn rho_check(datum: &BasedRootDatum, ps: &PositiveSystem) -> Coweight {
    let mut sum = vec![Q::zero(); datum.rank];
    for i in ps.positive_roots() {
        for (s, &a) in sum.iter_mut().zip(&datum.coroots[i]) {
            *s += Q::from_integer(a);
        }
    }
    Coweight(sum).scale(Q::new(1, 2))
}

/// True when `⟨λ, α∨⟩ ≠ 0` for every coroot.
pub fn is_regular(datum: &BasedRootDatum, lambda: &Weight) -> bool {
    datum.coroots.iter().all(|c| !pair_coroot(lambda, c).is_zero())
}

/// The positive system `{α : ⟨λ, α∨⟩ > 0}` of a regular weight.
pub fn chamber_of(datum: &BasedRootDatum, lambda: &Weight) -> Result<PositiveSystem, RootDataError> {
    let mut is_positive = Vec::with_capacity(datum.num_roots());
    for c in &datum.coroots {
        let p = pair_coroot(lambda, c);
        if p.is_zero() {
            return Err(RootDataError::Irregular {
                weight: lambda.to_string(),
                coroot: c.clone(),
            });
        }
        is_positive.push(p.is_positive());
    }
    Ok(PositiveSystem {
        defining: lambda.clone(),
        is_positive,
    })
}

/// An element of the Weyl group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on `X₊` (column vectors).
    pub mat: Vec<Vec<i64>>,
    /// Action on `X*`, the inverse transpose of `mat`.
    pub mat_star: Vec<Vec<i64>>,
    /// Word length in the simple reflections.
    pub length: usize,
    /// `(−1)^length`.
    pub sign: i32,
    /// A reduced word (indices into the datum's `simple` list), leftmost first.
    pub word: Vec<usize>,
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| pair_int(row, v)).collect()
}

fn mat_vec_q(a: &[Vec<i64>], v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(&m, x)| x * m).sum())
        .collect()
}

impl WeylElement {
    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// `w·x` for an integral cocharacter.
    pub fn act_cochar(&self, x: &[i64]) -> Vec<i64> {
        mat_vec(&self.mat, x)
    }

    /// `w·λ` for an integral character (e.g. a root).
    pub fn act_root(&self, alpha: &[i64]) -> Vec<i64> {
        mat_vec(&self.mat_star, alpha)
    }

    pub fn act_coweight(&self, x: &Coweight) -> Coweight {
        Coweight(mat_vec_q(&self.mat, &x.0))
    }

    pub fn act_weight(&self, lambda: &Weight) -> Weight {
        Weight(mat_vec_q(&self.mat_star, &lambda.0))
    }

    /// `w·t` for a real cocharacter vector.
    pub fn act_real(&self, t: &[f64]) -> Vec<f64> {
        self.mat
            .iter()
            .map(|row| row.iter().zip(t).map(|(&m, x)| m as f64 * x).sum())
            .collect()
    }
}

/// A fully enumerated finite Weyl group.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    lookup: HashMap<Vec<Vec<i64>>, usize>,
}

impl WeylGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of the identity (always 0: elements are sorted by length).
    pub fn identity(&self) -> usize {
        0
    }

    pub fn get(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    /// Index of the element with the given matrix on `X₊`.
    pub fn index_of(&self, mat: &[Vec<i64>]) -> Option<usize> {
        self.lookup.get(mat).copied()
    }

    /// Index of the product `a·b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let m = mat_mul(&self.elements[a].mat, &self.elements[b].mat);
        self.lookup[&m]
    }

    /// Index of the inverse.
    pub fn inverse(&self, a: usize) -> usize {
        // The inverse on X₊ is the transpose of the action on X*.
        let ms = &self.elements[a].mat_star;
        let n = ms.len();
        let t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| ms[j][i]).collect()).collect();
        self.lookup[&t]
    }
}

/// Enumerates the Weyl group with the default bound.
pub fn weyl_group(datum: &BasedRootDatum) -> Result<WeylGroup, RootDataError> {
    weyl_group_bounded(datum, DEFAULT_WEYL_BOUND)
}

/// Enumerates the Weyl group by breadth-first search over the simple
/// reflections, failing if more than `bound` elements appear.
///
/// Elements are sorted by length and then lexicographically by matrix, so
/// the identity comes first and the first element of any subset is a
/// minimal-length representative with deterministic tie-breaking.
pub fn weyl_group_bounded(datum: &BasedRootDatum, bound: usize) -> Result<WeylGroup, RootDataError> {
    let n = datum.rank;
    let id: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    #[allow(clippy::type_complexity)]
    let gens: Vec<(Vec<Vec<i64>>, Vec<Vec<i64>>)> = datum
        .simple
        .iter()
        .map(|&i| {
            let m = datum.reflection_matrix(i);
            let (a, c) = (&datum.roots[i], &datum.coroots[i]);
            let ms: Vec<Vec<i64>> = (0..n)
                .map(|r| (0..n).map(|k| i64::from(r == k) - a[r] * c[k]).collect())
                .collect();
            (m, ms)
        })
        .collect();
    let mut elements = vec![WeylElement {
        mat: id.clone(),
        mat_star: id.clone(),
        length: 0,
        sign: 1,
        word: Vec::new(),
    }];
    let mut seen: HashMap<Vec<Vec<i64>>, usize> = HashMap::from([(id, 0)]);
    let mut head = 0;
    while head < elements.len() {
        let cur = elements[head].clone();
        head += 1;
        for (g, (m, ms)) in gens.iter().enumerate() {
            let nm = mat_mul(m, &cur.mat);
            if seen.contains_key(&nm) {
                continue;
            }
            if elements.len() >= bound {
                return Err(RootDataError::BoundExceeded(bound));
            }
            let mut word = vec![g];
            word.extend(&cur.word);
            seen.insert(nm.clone(), elements.len());
            elements.push(WeylElement {
                mat: nm,
                mat_star: mat_mul(ms, &cur.mat_star),
                length: cur.length + 1,
                sign: -cur.sign,
                word,
            });
        }
    }
    elements.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.mat.cmp(&b.mat)));
    let lookup = elements.iter().enumerate().map(|(i, e)| (e.mat.clone(), i)).collect();
    Ok(WeylGroup { elements, lookup })
}

/// Orbit (as residue classes) and stabilizer (as element indices) of a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitStabilizer {
    pub orbit: Vec<Coweight>,
    pub stabilizer: Vec<usize>,
}

/// Orbit and stabilizer of a rational coweight modulo `X₊ = ℤⁿ`.
pub fn orbit_and_stabilizer(group: &WeylGroup, point: &Coweight) -> OrbitStabilizer {
    let base = point.reduce_mod_lattice();
    let mut orbit = BTreeSet::new();
    let mut stabilizer = Vec::new();
    for (i, w) in group.elements.iter().enumerate() {
        let img = w.act_coweight(point).reduce_mod_lattice();
        if img == base {
            stabilizer.push(i);
        }
        orbit.insert(img);
    }
    OrbitStabilizer {
        orbit: orbit.into_iter().collect(),
        stabilizer,
    }
}

/// Stabilizer of a point modulo the lattice `{x : ⟨α, x⟩ ∈ ℤ for every root α}`
/// (the coweight lattice of the adjoint group).
pub fn stabilizer_mod_coweights(datum: &BasedRootDatum, group: &WeylGroup, point: &Coweight) -> Vec<usize> {
    (0..group.len())
        .filter(|&i| {
            let diff = group.elements[i].act_coweight(point).sub(point);
            datum.roots.iter().all(|a| pair_root(a, &diff).is_integer())
        })
        .collect()
}

/// Cartan–Killing type of the root system, e.g. `A1xA1`, `C2`, `G2`, or
/// `torus` for the empty system.
pub fn cartan_type(datum: &BasedRootDatum) -> String {
    let a = datum.cartan_matrix();
    let r = a.len();
    if r == 0 {
        return "torus".to_string();
    }
    let mut comp = vec![usize::MAX; r];
    let mut parts = Vec::new();
    for start in 0..r {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = parts.len();
        let mut nodes = vec![start];
        comp[start] = id;
        let mut k = 0;
        while k < nodes.len() {
            let i = nodes[k];
            k += 1;
            for j in 0..r {
                if a[i][j] != 0 && comp[j] == usize::MAX {
                    comp[j] = id;
                    nodes.push(j);
                }
            }
        }
        parts.push(classify_component(&a, &nodes));
    }
    parts.sort();
    parts.join("x")
}

fn classify_component(a: &[Vec<i64>], nodes: &[usize]) -> String {
    let n = nodes.len();
    let edges: Vec<(usize, usize, i64)> = nodes
        .iter()
        .flat_map(|&i| nodes.iter().map(move |&j| (i, j)))
        .filter(|&(i, j)| i < j && a[i][j] != 0)
        .map(|(i, j)| (i, j, a[i][j] * a[j][i]))
        .collect();
    let degree = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    if edges.iter().any(|e| e.2 == 3) {
        return "G2".to_string();
    }
    if let Some(&(i, j, _)) = edges.iter().find(|e| e.2 == 2) {
        if n == 2 {
            return "C2".to_string();
        }
        if n == 4 && degree(i) == 2 && degree(j) == 2 {
            return "F4".to_string();
        }
        // ⟨αᵢ, αⱼ∨⟩ = −2 means αᵢ is long.
        let (long, short) = if a[i][j] == -2 { (i, j) } else { (j, i) };
        let short_end = degree(short) == 1;
        let _ = long;
        return format!("{}{n}", if short_end { "B" } else { "C" });
    }
    if let Some(&branch) = nodes.iter().find(|&&v| degree(v) == 3) {
        let mut arms: Vec<usize> = edges
            .iter()
            .filter(|e| e.0 == branch || e.1 == branch)
            .map(|e| {
                let first = if e.0 == branch { e.1 } else { e.0 };
                let (mut prev, mut cur, mut len) = (branch, first, 1);
                loop {
                    let next = edges
                        .iter()
                        .filter(|f| (f.0 == cur || f.1 == cur) && f.0 != prev && f.1 != prev)
                        .map(|f| if f.0 == cur { f.1 } else { f.0 })
                        .next();
                    match next {
                        Some(nx) => {
                            prev = cur;
                            cur = nx;
                            len += 1;
                        }
                        None => break len,
                    }
                }
            })
            .collect();
        arms.sort();
        return if arms[0] == 1 && arms[1] == 1 {
            format!("D{n}")
        } else {
            format!("E{n}")
        };
    }
    format!("A{n}")
}

/// Integer floor-mod of a rational with denominator dividing 2, returning 0 or 1
/// for the class of `2q` modulo 2.
impl fmt::Display for BasedRootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (rank {}, {} roots, type {})", self.label, self.rank, self.num_roots(), cartan_type(self))?;
        for (i, (a, c)) in self.roots.iter().zip(&self.coroots).enumerate() {
            let mark = if self.simple.contains(&i) { " simple" } else { "" };
            writeln!(f, "  root {a:?}  coroot {c:?}{mark}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        for (name, roots, w) in [
            ("A1-sc", 2, 2),
            ("A1-adj", 2, 2),
            ("A1xA1-sc", 4, 4),
            ("A2-sc", 6, 6),
            ("B2-sc", 8, 8),
            ("C2-sc", 8, 8),
            ("C2-adj", 8, 8),
            ("C3-sc", 18, 48),
            ("G2", 12, 12),
        ] {
            let d = BasedRootDatum::family(name).unwrap();
            assert!(d.validate().is_empty(), "{name}: {:?}", d.validate());
            assert_eq!(d.num_roots(), roots, "{name}");
            assert_eq!(weyl_group(&d).unwrap().len(), w, "{name}");
        }
    }

    #[test]
    fn sl2_coordinates() {
        let d = BasedRootDatum::family("A1-sc").unwrap();
        assert_eq!(d.roots, vec![vec![2], vec![-2]]);
        assert_eq!(d.coroots, vec![vec![1], vec![-1]]);
        let ps = d.based_positive_system();
        assert_eq!(rho(&d, &ps), Weight::from_ints(&[1]));
    }

    #[test]
    fn sp4_coordinates() {
        let d = BasedRootDatum::family("C2-sc").unwrap();
        let set: BTreeSet<Vec<i64>> = d.roots.iter().cloned().collect();
        let expected: BTreeSet<Vec<i64>> = [[1, -1], [1, 1], [2, 0], [0, 2], [-1, 1], [-1, -1], [-2, 0], [0, -2]]
            .iter()
            .map(|v| v.to_vec())
            .collect();
        assert_eq!(set, expected);
        let ps = d.based_positive_system();
        assert_eq!(rho_check(&d, &ps), Coweight(vec![Q::new(3, 2), Q::new(1, 2)]));
    }

    #[test]
    fn bad_pairing_is_rejected() {
        let d = BasedRootDatum::new("bad", 1, vec![vec![3], vec![-3]], vec![vec![1], vec![-1]], vec![0]);
        assert!(d.validate().iter().any(|v| v.rule == "pairing"));
    }

    #[test]
    fn bound_is_enforced() {
        let d = BasedRootDatum::family("C3-sc").unwrap();
        assert_eq!(weyl_group_bounded(&d, 10).unwrap_err(), RootDataError::BoundExceeded(10));
    }

    #[test]
    fn a1_orbit_of_quarter_coroot() {
        let d = BasedRootDatum::family("A1-sc").unwrap();
        let w = weyl_group(&d).unwrap();
        let os = orbit_and_stabilizer(&w, &Coweight(vec![Q::new(1, 4)]));
        assert_eq!(os.orbit, vec![Coweight(vec![Q::new(1, 4)]), Coweight(vec![Q::new(3, 4)])]);
        assert_eq!(os.stabilizer, vec![0]);
        let os = orbit_and_stabilizer(&w, &Coweight::zero(1));
        assert_eq!(os.orbit.len(), 1);
        assert_eq!(os.stabilizer.len(), 2);
    }

    #[test]
    fn chamber_and_regularity() {
        let d = BasedRootDatum::family("A1-sc").unwrap();
        let ps = chamber_of(&d, &Weight::from_ints(&[1])).unwrap();
        assert_eq!(ps.positive_roots(), vec![0]);
        assert!(!is_regular(&d, &Weight::zero(1)));
        assert!(matches!(chamber_of(&d, &Weight::zero(1)), Err(RootDataError::Irregular { .. })));
    }

    #[test]
    fn g2_rho_pairings() {
        let d = BasedRootDatum::family("G2").unwrap();
        let ps = d.based_positive_system();
        let r = rho(&d, &ps);
        let mut vals: Vec<i64> = ps
            .positive_roots()
            .iter()
            .map(|&i| pair_coroot(&r, &d.coroots[i]).to_integer())
            .collect();
        vals.sort();
        assert_eq!(vals, vec![1, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn cartan_types() {
        for (name, ty) in [("A1-sc", "A1"), ("A1xA1-sc", "A1xA1"), ("C2-sc", "C2"), ("C3-sc", "C3"), ("G2", "G2"), ("A2-adj", "A2")] {
            assert_eq!(cartan_type(&BasedRootDatum::family(name).unwrap()), ty);
        }
    }
}
