//! Brute-force matrix models of `SL₂` and `PGL₂` that validate the
//! combinatorial rules of the other modules: `H¹(ℝ, S)`, real Weyl groups,
//! cohomology classes of packet members, the pure-form partition and the
//! component groups.
//!
//! # Lattice dictionary
//!
//! * `SL₂` (datum `A1-sc`): `X₊ = ℤα∨`, coordinate `k ↔ kα∨`, and the torus
//!   is `α∨(a) = diag(a, a⁻¹)`.
//! * `PGL₂` (datum `A1-adj`): `X₊ = ℤω∨` with `α∨ = 2ω∨`, coordinate
//!   `k ↔ kω∨`, and the torus is `ω∨(a) = diag(a, 1)` modulo scalars.
//!
//! A grading `μ` (coordinate `m`) is realized by the strong involution
//! `x = exp(2πiμ)`, and the real structure is `σ(g) = x·(g*)⁻¹·x⁻¹`, the
//! compact conjugation twisted by `x`. With this choice the diagonal torus is
//! anisotropic (`σ` acts by `−1` on `X₊`).
//!
//! None of the functions here call into the combinatorial code paths; the
//! comparison is assembled in [`oracle_suite`].

use crate::lattice::FiniteAbelianGroup;
use crate::packets::{component_group, enumerate_packet, DiscreteParameter};
use crate::realforms::{h1_of_torus, pure_forms, real_weyl_group, CohomologyClass, Grading};
use crate::rootdata::{BasedRootDatum, Coweight, WeylElement, WeylGroup};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::PI;
use thiserror::Error;

/// Numerical tolerance for matrix identities in the models.
const TOL: f64 = 1e-9;

/// Maximal order of the torsion points searched.
pub const MAX_TORSION_ORDER: u32 = 8;

/// Errors raised by the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("no oracle model for `{0}` (available: A1-sc, A1-adj)")]
    NoModel(String),
    #[error("matrix {0} does not lie in the torus")]
    NotInTorus(String),
    #[error("torus element {0} is not a cocycle")]
    NotACocycle(String),
    #[error("setting up the combinatorial side failed: {0}")]
    Setup(String),
}

/// A 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        let r = |x| Complex64::new(x, 0.0);
        Self::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(a, z, z, d)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn inv(&self) -> Self {
        let d = self.det();
        let a = &self.0;
        Self::new(a[1][1] / d, -a[0][1] / d, -a[1][0] / d, a[0][0] / d)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let a = &self.0;
        Self::new(a[0][0].conj(), a[1][0].conj(), a[0][1].conj(), a[1][1].conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let a = &self.0;
        Self::new(a[0][0] * c, a[0][1] * c, a[1][0] * c, a[1][1] * c)
    }

    fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn approx_eq(&self, o: &Self) -> bool {
        self.0
            .iter()
            .flatten()
            .zip(o.0.iter().flatten())
            .all(|(x, y)| (x - y).norm() < TOL)
    }

    /// Equality up to a nonzero scalar.
    fn proportional(&self, o: &Self) -> bool {
        let (a, b) = (self.0.iter().flatten(), o.0.iter().flatten());
        // Find the scalar from the largest entry of `o`.
        let (k, _) = o
            .0
            .iter()
            .flatten()
            .enumerate()
            .fold((0, 0.0), |(bk, bv), (k, z)| if z.norm() > bv { (k, z.norm()) } else { (bk, bv) });
        let ok = *o.0.iter().flatten().nth(k).unwrap();
        let sk = *self.0.iter().flatten().nth(k).unwrap();
        if ok.norm() < TOL {
            return false;
        }
        let c = sk / ok;
        c.norm() > TOL && a.zip(b).all(|(x, y)| (x - c * y).norm() < TOL * (1.0 + c.norm()))
    }
}

impl std::fmt::Display for Mat2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let e = |z: Complex64| format!("{:.3}{:+.3}i", z.re, z.im);
        let a = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", e(a[0][0]), e(a[0][1]), e(a[1][0]), e(a[1][1]))
    }
}

/// Which hardcoded matrix group a model describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleFamily {
    /// The rank-zero group with trivial torus.
    Trivial,
    SL2,
    PGL2,
}

/// A matrix model of a real form: the family plus the strong involution `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGroupModel {
    pub family: OracleFamily,
    /// `x = exp(2πiμ)` for the grading coordinate `μ`.
    pub x: Mat2,
    pub label: String,
}

impl MatrixGroupModel {
    /// `SL₂` with strong involution `α∨(exp(2πi·m))`.
    pub fn sl2(m: f64, label: &str) -> Self {
        let a = Complex64::from_polar(1.0, 2.0 * PI * m);
        Self {
            family: OracleFamily::SL2,
            x: Mat2::diag(a, a.inv()),
            label: label.to_string(),
        }
    }

    /// `PGL₂` with strong involution `ω∨(exp(2πi·m))`.
    pub fn pgl2(m: f64, label: &str) -> Self {
        let a = Complex64::from_polar(1.0, 2.0 * PI * m);
        Self {
            family: OracleFamily::PGL2,
            x: Mat2::diag(a, Complex64::new(1.0, 0.0)),
            label: label.to_string(),
        }
    }

    /// The group with trivial torus.
    pub fn trivial() -> Self {
        Self {
            family: OracleFamily::Trivial,
            x: Mat2::identity(),
            label: "trivial torus".to_string(),
        }
    }

    /// The torus element with parameter `a`.
    pub fn torus(&self, a: Complex64) -> Mat2 {
        match self.family {
            OracleFamily::Trivial => Mat2::identity(),
            OracleFamily::SL2 => Mat2::diag(a, a.inv()),
            OracleFamily::PGL2 => Mat2::diag(a, Complex64::new(1.0, 0.0)),
        }
    }

    /// The torus parameter of a diagonal matrix (up to scalars for `PGL₂`).
    pub fn torus_param(&self, m: &Mat2) -> Result<Complex64, OracleError> {
        let off = m.0[0][1].norm().max(m.0[1][0].norm());
        if off > TOL * (1.0 + m.max_abs()) {
            return Err(OracleError::NotInTorus(m.to_string()));
        }
        match self.family {
            OracleFamily::Trivial => Ok(Complex64::new(1.0, 0.0)),
            OracleFamily::SL2 => {
                if (m.0[0][0] * m.0[1][1] - 1.0).norm() > TOL {
                    return Err(OracleError::NotInTorus(m.to_string()));
                }
                Ok(m.0[0][0])
            }
            OracleFamily::PGL2 => Ok(m.0[0][0] / m.0[1][1]),
        }
    }

    /// The real structure `σ(g) = x·(g*)⁻¹·x⁻¹`.
    pub fn sigma(&self, g: &Mat2) -> Mat2 {
        self.x.mul(&g.adjoint().inv()).mul(&self.x.inv())
    }

    /// Equality in the group (modulo scalars for `PGL₂`).
    pub fn same(&self, g: &Mat2, h: &Mat2) -> bool {
        match self.family {
            OracleFamily::PGL2 => g.proportional(h),
            _ => g.approx_eq(h),
        }
    }

    /// A normalizer element representing the Weyl element `w`.
    pub fn normalizer_rep(&self, w: &WeylElement) -> Mat2 {
        if w.is_identity() || self.family == OracleFamily::Trivial {
            return Mat2::identity();
        }
        match self.family {
            OracleFamily::SL2 => Mat2::real(0.0, 1.0, -1.0, 0.0),
            _ => Mat2::real(0.0, 1.0, 1.0, 0.0),
        }
    }

    /// Class in `X₊/2X₊` of a torus-valued cocycle, read off from the sign
    /// of its (real) parameter through the lattice dictionary.
    pub fn class_of(&self, z: &Mat2) -> Result<CohomologyClass, OracleError> {
        if self.family == OracleFamily::Trivial {
            return Ok(CohomologyClass::zero(0));
        }
        let a = self.torus_param(z)?;
        if a.im.abs() > TOL * (1.0 + a.norm()) {
            return Err(OracleError::NotACocycle(z.to_string()));
        }
        Ok(CohomologyClass::from_lift(&[i64::from(a.re < 0.0)]))
    }

    /// All roots of unity of order at most [`MAX_TORSION_ORDER`].
    pub fn torsion_parameters() -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for n in 1..=MAX_TORSION_ORDER {
            for k in 0..n {
                let z = Complex64::from_polar(1.0, 2.0 * PI * f64::from(k) / f64::from(n));
                if !out.iter().any(|w| (w - z).norm() < TOL) {
                    out.push(z);
                }
            }
        }
        out
    }

    fn is_positive_param(&self, m: &Mat2) -> Option<f64> {
        let p = self.torus_param(m).ok()?;
        (p.im.abs() < TOL && p.re > TOL).then_some(p.re)
    }
}

/// Brute-force `H¹(ℝ, S)`: torsion cocycles `z·σ(z) = 1` modulo torsion
/// coboundaries `y·σ(y)⁻¹`. The torus has rank at most one, so the quotient
/// is cyclic and determined by its order.
pub fn oracle_h1_torus(model: &MatrixGroupModel) -> FiniteAbelianGroup {
    let pts = MatrixGroupModel::torsion_parameters();
    let id = Mat2::identity();
    let mut cocycles: Vec<Mat2> = Vec::new();
    for &a in &pts {
        let z = model.torus(a);
        if model.same(&z.mul(&model.sigma(&z)), &id) && !cocycles.iter().any(|c| model.same(c, &z)) {
            cocycles.push(z);
        }
    }
    let coboundaries: Vec<Mat2> = pts
        .iter()
        .map(|&b| {
            let y = model.torus(b);
            y.mul(&model.sigma(&y).inv())
        })
        .collect();
    let mut reps: Vec<Mat2> = Vec::new();
    for z in cocycles {
        let known = reps
            .iter()
            .any(|r| coboundaries.iter().any(|c| model.same(&z, &r.mul(c))));
        if !known {
            reps.push(z);
        }
    }
    FiniteAbelianGroup::cyclic(reps.len() as u64)
}

/// The class of `inv(u·δ, δ)`: with `g = n_u⁻¹` carrying `u·δ` to `δ`, the
/// cocycle `g⁻¹·σ(g) = n_u·σ(n_u)⁻¹`, read off in `X₊/2X₊`.
pub fn oracle_inv(model: &MatrixGroupModel, u: &WeylElement) -> Result<CohomologyClass, OracleError> {
    let n = model.normalizer_rep(u);
    let g = n.inv();
    let z = g.inv().mul(&model.sigma(&g));
    model.class_of(&z)
}

/// Brute-force real Weyl group: `w` is real when some `n_w·t` (with `t` a
/// torsion point of the torus) can be corrected by a positive real torus
/// element to a matrix fixed by `σ`. Returns the indices of such `w`.
pub fn oracle_real_weyl(model: &MatrixGroupModel, group: &WeylGroup) -> Vec<usize> {
    let pts = MatrixGroupModel::torsion_parameters();
    (0..group.len())
        .filter(|&i| {
            let n = model.normalizer_rep(group.get(i));
            pts.iter().any(|&b| {
                let m = n.mul(&model.torus(b));
                let c = m.inv().mul(&model.sigma(&m));
                match model.is_positive_param(&c) {
                    Some(p) => {
                        let real = m.mul(&model.torus(Complex64::new(p.sqrt(), 0.0)));
                        model.same(&model.sigma(&real), &real)
                    }
                    None => false,
                }
            })
        })
        .collect()
}

/// Brute-force pure-form partition of `X₊/2X₊`: classes `c ↦ z_c = exp(πi c)`
/// are identified when `g·z₁·σ(g)⁻¹·z₂⁻¹` is a positive real torus element
/// (hence a coboundary) for some `g = n_w·t` with `t` a torsion point.
pub fn oracle_pure_forms(model: &MatrixGroupModel, group: &WeylGroup) -> Result<Vec<Vec<CohomologyClass>>, OracleError> {
    let classes = CohomologyClass::all(1);
    let z: Vec<Mat2> = classes
        .iter()
        .map(|c| model.torus(Complex64::new(if c.coords[0] == 1 { -1.0 } else { 1.0 }, 0.0)))
        .collect();
    let id = Mat2::identity();
    for zi in &z {
        if !model.same(&zi.mul(&model.sigma(zi)), &id) {
            return Err(OracleError::NotACocycle(zi.to_string()));
        }
    }
    let pts = MatrixGroupModel::torsion_parameters();
    let related = |a: usize, b: usize| {
        group.elements.iter().any(|w| {
            let n = model.normalizer_rep(w);
            pts.iter().any(|&t| {
                let g = n.mul(&model.torus(t));
                let m = g.mul(&z[a]).mul(&model.sigma(&g).inv()).mul(&z[b].inv());
                model.is_positive_param(&m).is_some()
            })
        })
    };
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for i in 0..classes.len() {
        match parts.iter_mut().find(|p| related(p[0], i)) {
            Some(p) => p.push(i),
            None => parts.push(vec![i]),
        }
    }
    Ok(parts
        .into_iter()
        .map(|p| p.into_iter().map(|i| classes[i].clone()).collect())
        .collect())
}

type TorusMap = Box<dyn Fn(Complex64) -> Mat2>;
type SameFn = Box<dyn Fn(&Mat2, &Mat2) -> bool>;

/// Brute-force component groups on the dual side: `Ŝ[2]` inside the dual
/// torus, and its preimage in the torus of the simply connected cover
/// `SL₂(ℂ)` of the dual group. Returns `(pure, rigid)`; both are cyclic.
pub fn oracle_component_groups(family: OracleFamily) -> (FiniteAbelianGroup, FiniteAbelianGroup) {
    let pts = MatrixGroupModel::torsion_parameters();
    let one = Complex64::new(1.0, 0.0);
    let id = Mat2::identity();
    // Dual torus element and the projection from the simply connected cover.
    let (dual_torus, dual_same, cover): (TorusMap, SameFn, TorusMap) = match family {
        // Dual of SL₂ is PGL₂; its torus is diag(a, 1) mod scalars, and
        // diag(a, a⁻¹) ∈ SL₂ maps to diag(a², 1).
        OracleFamily::SL2 => (
            Box::new(move |a| Mat2::diag(a, one)),
            Box::new(|g: &Mat2, h: &Mat2| g.proportional(h)),
            Box::new(|a: Complex64| Mat2::diag(a * a, Complex64::new(1.0, 0.0))),
        ),
        // Dual of PGL₂ is SL₂, already simply connected.
        OracleFamily::PGL2 => (
            Box::new(|a: Complex64| Mat2::diag(a, a.inv())),
            Box::new(|g: &Mat2, h: &Mat2| g.approx_eq(h)),
            Box::new(|a: Complex64| Mat2::diag(a, a.inv())),
        ),
        OracleFamily::Trivial => return (FiniteAbelianGroup::trivial(0), FiniteAbelianGroup::trivial(0)),
    };
    let mut two_torsion: Vec<Mat2> = Vec::new();
    for &a in &pts {
        let s = dual_torus(a);
        if dual_same(&s.mul(&s), &id) && !two_torsion.iter().any(|t| dual_same(t, &s)) {
            two_torsion.push(s);
        }
    }
    let mut preimage: Vec<Mat2> = Vec::new();
    for &a in &pts {
        let y = Mat2::diag(a, a.inv());
        let image = cover(a);
        if two_torsion.iter().any(|t| dual_same(t, &image)) && !preimage.iter().any(|p| p.approx_eq(&y)) {
            preimage.push(y);
        }
    }
    (
        FiniteAbelianGroup::cyclic(two_torsion.len() as u64),
        FiniteAbelianGroup::cyclic(preimage.len() as u64),
    )
}

/// One line of the oracle comparison table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub quantity: String,
    pub combinatorial: String,
    pub brute_force: String,
    pub matches: bool,
}

fn row(quantity: impl Into<String>, combinatorial: impl ToString, brute_force: impl ToString) -> OracleRow {
    let (c, b) = (combinatorial.to_string(), brute_force.to_string());
    OracleRow {
        quantity: quantity.into(),
        matches: c == b,
        combinatorial: c,
        brute_force: b,
    }
}

fn fmt_set(v: &[usize]) -> String {
    format!("{v:?}")
}

fn fmt_partition(p: &[Vec<CohomologyClass>]) -> String {
    let mut parts: Vec<String> = p
        .iter()
        .map(|c| {
            let s: BTreeSet<String> = c.iter().map(ToString::to_string).collect();
            format!("{{{}}}", s.into_iter().collect::<Vec<_>>().join(", "))
        })
        .collect();
    parts.sort();
    parts.join(" ")
}

/// Compares every oracle-covered quantity for the family `A1-sc` or `A1-adj`.
pub fn oracle_suite(family: &str) -> Result<Vec<OracleRow>, OracleError> {
    let (fam, datum_name) = match family {
        "A1-sc" | "SL2" => (OracleFamily::SL2, "A1-sc"),
        "A1-adj" | "A1-adjoint" | "PGL2" => (OracleFamily::PGL2, "A1-adj"),
        other => return Err(OracleError::NoModel(other.to_string())),
    };
    let setup = |e: String| OracleError::Setup(e);
    let datum = BasedRootDatum::family(datum_name).map_err(|e| setup(e.to_string()))?;
    let lambda = crate::rootdata::rho(&datum, &datum.based_positive_system());
    let param = DiscreteParameter::new(datum.clone(), lambda).map_err(|e| setup(e.to_string()))?;
    let w = &param.weyl;
    let qs = &param.quasisplit;
    let compact = Grading::new(&datum, Coweight::zero(1)).map_err(|e| setup(e.to_string()))?;
    let mu = |g: &Grading| *g.mu.0[0].numer() as f64 / *g.mu.0[0].denom() as f64;
    let make = |m: f64, label: &str| match fam {
        OracleFamily::SL2 => MatrixGroupModel::sl2(m, label),
        _ => MatrixGroupModel::pgl2(m, label),
    };
    let qs_model = make(mu(qs), "quasi-split");
    let compact_model = make(0.0, "compact");

    let mut rows = Vec::new();
    rows.push(row("H1(R,S) order", h1_of_torus(&datum).order(), oracle_h1_torus(&qs_model).order()));
    for (g, model, name) in [(qs, &qs_model, "quasi-split"), (&compact, &compact_model, "compact")] {
        let comb = real_weyl_group(w, g);
        let brute = oracle_real_weyl(model, w);
        rows.push(row(format!("real Weyl group ({name})"), fmt_set(&comb), fmt_set(&brute)));
        rows.push(row(
            format!("packet size ({name})"),
            enumerate_packet(&param, g).members.len(),
            w.len() / brute.len().max(1),
        ));
    }
    for u in 0..w.len() {
        let brute = oracle_inv(&qs_model, w.get(u)).map(|c| c.to_string()).unwrap_or_else(|e| e.to_string());
        rows.push(row(format!("inv class of w{u} (length {})", w.get(u).length), param.point_class(u), brute));
    }
    let comb_forms: Vec<Vec<CohomologyClass>> = pure_forms(&datum, w, qs).into_iter().map(|f| f.classes).collect();
    let brute_forms = oracle_pure_forms(&qs_model, w).map(|p| fmt_partition(&p)).unwrap_or_else(|e| e.to_string());
    rows.push(row("pure-form partition", fmt_partition(&comb_forms), brute_forms));
    let cg = component_group(&param);
    let (pure, rigid) = oracle_component_groups(fam);
    rows.push(row("pure component group", &cg.pure, pure));
    rows.push(row("rigid component group", &cg.rigid, rigid));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::weyl_group;

    #[test]
    fn h1_orders() {
        assert_eq!(oracle_h1_torus(&MatrixGroupModel::sl2(0.25, "")).order_u64(), 2);
        assert_eq!(oracle_h1_torus(&MatrixGroupModel::pgl2(0.5, "")).order_u64(), 2);
        assert_eq!(oracle_h1_torus(&MatrixGroupModel::trivial()).order_u64(), 1);
    }

    #[test]
    fn sl2_flip_class() {
        let d = BasedRootDatum::family("A1-sc").unwrap();
        let w = weyl_group(&d).unwrap();
        let m = MatrixGroupModel::sl2(0.25, "");
        assert_eq!(oracle_inv(&m, w.get(0)).unwrap(), CohomologyClass::zero(1));
        assert_eq!(oracle_inv(&m, w.get(1)).unwrap(), CohomologyClass::from_lift(&[1]));
    }

    #[test]
    fn real_weyl_groups() {
        let d = BasedRootDatum::family("A1-sc").unwrap();
        let w = weyl_group(&d).unwrap();
        assert_eq!(oracle_real_weyl(&MatrixGroupModel::sl2(0.25, ""), &w), vec![0]);
        assert_eq!(oracle_real_weyl(&MatrixGroupModel::sl2(0.0, ""), &w), vec![0, 1]);
        assert_eq!(oracle_real_weyl(&MatrixGroupModel::pgl2(0.5, ""), &w), vec![0, 1]);
    }

    #[test]
    fn component_groups() {
        let (p, r) = oracle_component_groups(OracleFamily::SL2);
        assert_eq!((p.order_u64(), r.order_u64()), (2, 4));
        let (p, r) = oracle_component_groups(OracleFamily::PGL2);
        assert_eq!((p.order_u64(), r.order_u64()), (2, 2));
    }

    #[test]
    fn suites_match() {
        for fam in ["A1-sc", "A1-adj"] {
            for r in oracle_suite(fam).unwrap() {
                assert!(r.matches, "{fam}: {r:?}");
            }
        }
        assert_eq!(oracle_suite("G2"), Err(OracleError::NoModel("G2".to_string())));
    }
}
