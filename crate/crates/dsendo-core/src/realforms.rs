//! Real forms of an equal-rank inner class, encoded by gradings of the
//! elliptic torus, together with real Weyl groups, `q`-invariants, Kottwitz
//! signs, the Galois cohomology `H¹(ℝ, S) = X₊/2X₊` of the elliptic torus and
//! its Tate–Nakayama pairing with `Ŝ[2] = ½X*/X*`.

use crate::lattice::{quotient_group, FiniteAbelianGroup, IntMatrix};
use crate::rootdata::{orbit_and_stabilizer, pair_coroot, pair_root, rho_check, BasedRootDatum, Coweight, PositiveSystem, Weight, WeylGroup, Q};
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Errors raised when constructing real-form data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealFormError {
    #[error("grading {mu} is not admissible: <alpha, 2 mu> = {value} is not an integer for the root {root:?}")]
    NotAGrading { mu: String, root: Vec<i64>, value: String },
    #[error("element {nu} does not lie in one half of the character lattice")]
    NotTwoTorsion { nu: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
}

/// A grading `μ ∈ X₊ ⊗ ℚ`: the strong involution `x = exp(2πiμ)` of the
/// elliptic torus. A root `α` is compact iff `⟨α, μ⟩ ∈ ℤ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub mu: Coweight,
}

impl Grading {
    /// Checks that `⟨α, 2μ⟩ ∈ ℤ` for every root.
    pub fn new(datum: &BasedRootDatum, mu: Coweight) -> Result<Self, RealFormError> {
        if mu.rank() != datum.rank {
            return Err(RealFormError::Dimension {
                expected: datum.rank,
                found: mu.rank(),
            });
        }
        for a in &datum.roots {
            let v = pair_root(a, &mu) * Q::from_integer(2);
            if !v.is_integer() {
                return Err(RealFormError::NotAGrading {
                    mu: mu.to_string(),
                    root: a.clone(),
                    value: v.to_string(),
                });
            }
        }
        Ok(Self { mu })
    }

    /// Whether root `i` of the datum is compact for this grading.
    pub fn is_compact(&self, datum: &BasedRootDatum, i: usize) -> bool {
        pair_root(&datum.roots[i], &self.mu).is_integer()
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu = {}", self.mu)
    }
}

/// The quasi-split grading `μ = ρ∨/2`, for which every simple root is noncompact.
pub fn quasisplit_grading(datum: &BasedRootDatum, ps: &PositiveSystem) -> Grading {
    Grading {
        mu: rho_check(datum, ps).scale(Q::new(1, 2)),
    }
}

/// Indices of the compact roots `{α : ⟨α, μ⟩ ∈ ℤ}`.
pub fn compact_roots(datum: &BasedRootDatum, g: &Grading) -> Vec<usize> {
    (0..datum.num_roots()).filter(|&i| g.is_compact(datum, i)).collect()
}

/// The real Weyl group `W_ℝ = {w ∈ W : w(μ) ≡ μ mod X₊}`, as element indices.
pub fn real_weyl_group(group: &WeylGroup, g: &Grading) -> Vec<usize> {
    orbit_and_stabilizer(group, &g.mu).stabilizer
}

/// Number of noncompact roots that are positive for `ps`.
pub fn q_invariant(datum: &BasedRootDatum, g: &Grading, ps: &PositiveSystem) -> usize {
    ps.positive_roots().into_iter().filter(|&i| !g.is_compact(datum, i)).count()
}

/// The Kottwitz sign `e = (−1)^{q(g_qs) − q(g)}`.
pub fn kottwitz_sign(datum: &BasedRootDatum, g: &Grading, g_qs: &Grading, ps: &PositiveSystem) -> i32 {
    let diff = q_invariant(datum, g_qs, ps) as i64 - q_invariant(datum, g, ps) as i64;
    if diff.is_even() {
        1
    } else {
        -1
    }
}

/// `H¹(ℝ, S) ≅ X₊/2X₊` for the anisotropic elliptic torus, as a finite abelian group.
pub fn h1_of_torus(datum: &BasedRootDatum) -> FiniteAbelianGroup {
    let twice = IntMatrix::diagonal(&vec![2; datum.rank]);
    quotient_group(datum.rank, &twice).expect("2X₊ has full rank")
}

/// A class in `H¹(ℝ, S) = X₊/2X₊`, stored by its reduced coordinates in `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohomologyClass {
    pub coords: Vec<i64>,
}

impl CohomologyClass {
    /// The class of a lift in `X₊`.
    pub fn from_lift(lift: &[i64]) -> Self {
        Self {
            coords: lift.iter().map(|x| x.mod_floor(&2)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        Self { coords: vec![0; rank] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_lift(&self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    /// All `2^rank` classes in lexicographic order.
    pub fn all(rank: usize) -> Vec<Self> {
        (0..1u64 << rank)
            .map(|bits| Self {
                coords: (0..rank).map(|k| ((bits >> (rank - 1 - k)) & 1) as i64).collect(),
            })
            .collect()
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// An element `s = exp(2πiν) ∈ Ŝ[2]` with `ν ∈ ½X*`, stored reduced modulo `X*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualTorsion {
    pub nu: Weight,
}

impl DualTorsion {
    /// Validates `2ν ∈ X*` and reduces `ν` into `[0, 1)ⁿ`.
    pub fn new(rank: usize, nu: Weight) -> Result<Self, RealFormError> {
        if nu.rank() != rank {
            return Err(RealFormError::Dimension {
                expected: rank,
                found: nu.rank(),
            });
        }
        if !nu.scale(Q::from_integer(2)).is_integral() {
            return Err(RealFormError::NotTwoTorsion { nu: nu.to_string() });
        }
        Ok(Self {
            nu: nu.reduce_mod_lattice(),
        })
    }

    /// `s = 1`.
    pub fn trivial(rank: usize) -> Self {
        Self { nu: Weight::zero(rank) }
    }

    pub fn is_trivial(&self) -> bool {
        self.nu.0.iter().all(Zero::is_zero)
    }

    /// All `2^rank` elements of `Ŝ[2]`, trivial element first.
    pub fn all(rank: usize) -> Vec<Self> {
        CohomologyClass::all(rank)
            .into_iter()
            .map(|c| Self {
                nu: Weight::from_ints(&c.coords).scale(Q::new(1, 2)),
            })
            .collect()
    }
}

impl fmt::Display for DualTorsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nu = {}", self.nu)
    }
}

/// The Tate–Nakayama pairing `⟨c, s⟩ = exp(2πi⟨ν, c⟩) ∈ {±1}`.
pub fn tn_pairing(c: &CohomologyClass, s: &DualTorsion) -> i32 {
    let v = pair_coroot(&s.nu, &c.coords) * Q::from_integer(2);
    debug_assert!(v.is_integer());
    if v.to_integer().is_even() {
        1
    } else {
        -1
    }
}

/// A pure inner form: a `W`-orbit in `X₊/2X₊` of twisted gradings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureForm {
    /// Grading `μ_qs + c/2` for the lexicographically first class `c` of the orbit.
    pub grading: Grading,
    pub base_class: CohomologyClass,
    /// Classes in the orbit, sorted.
    pub classes: Vec<CohomologyClass>,
    pub quasi_split: bool,
}

/// Partitions `X₊/2X₊` into the `W`-orbits of `μ_qs + c/2 mod X₊`; each orbit is a pure inner form.
///
/// The quasi-split form (orbit of the zero class) comes first.
pub fn pure_forms(datum: &BasedRootDatum, group: &WeylGroup, g_qs: &Grading) -> Vec<PureForm> {
    let mut assigned: BTreeSet<CohomologyClass> = BTreeSet::new();
    let mut out = Vec::new();
    for c in CohomologyClass::all(datum.rank) {
        if assigned.contains(&c) {
            continue;
        }
        let mu = g_qs.mu.add(&Coweight::from_ints(&c.coords).scale(Q::new(1, 2)));
        let orbit = orbit_and_stabilizer(group, &mu).orbit;
        let classes: BTreeSet<CohomologyClass> = orbit
            .iter()
            .map(|p| {
                let lift = p.sub(&g_qs.mu).scale(Q::from_integer(2));
                let ints = lift.to_ints().expect("orbit of a twisted grading stays in mu_qs + X₊/2");
                CohomologyClass::from_lift(&ints)
            })
            .collect();
        assigned.extend(classes.iter().cloned());
        out.push(PureForm {
            grading: Grading::new(datum, mu).expect("twist of an admissible grading is admissible"),
            quasi_split: c.is_zero(),
            base_class: c,
            classes: classes.into_iter().collect(),
        });
    }
    out
}
