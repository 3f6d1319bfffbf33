//! Endoscopic groups attached to `s ∈ Ŝ[2]`, the ε-factor, the transfer
//! factor `Δ = ε·Δ_I⁻¹·Δ_III` on the elliptic set, and the verifier of the
//! endoscopic character identity
//!
//! ```text
//! e(G) Σ_π ⟨π, s⟩ Θ_π(δ) = Σ_γ Δ(γ, δ) SΘ^H(γ).
//! ```
//!
//! The left side is evaluated through the packet (`lhs`); the right side is
//! evaluated twice (`rhs`): folded over stable classes `W_H\W` with the stable
//! character of `H` (`RHS_A`), and fully unfolded over `W` (`RHS_B`).
//!
//! Shared subroutines: both sides use the Tate–Nakayama pairing and the class
//! formula `ρ∨ − uρ∨ mod 2X₊`. The ε-factor, `Δ_I`, the `q`-invariant of `H`,
//! and the `H`-side Weyl sums and denominators appear only on the right.

use crate::covers::{arg_unit, d_arg, eval_char_f64, sample_regular_points, TorusPoint, DEFAULT_WALL_MARGIN, PRNG_NAME};
use crate::packets::{enumerate_packet, hc_character, pairing, DiscreteParameter, Packet, PacketError};
use crate::realforms::{q_invariant, quasisplit_grading, tn_pairing, DualTorsion, Grading, RealFormError};
use crate::rootdata::{cartan_type, chamber_of, pair_coroot, weyl_group, BasedRootDatum, PositiveSystem};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::PI;
use thiserror::Error;

/// Statement printed in verification reports about code shared by both sides.
pub const SHARED_SUBROUTINE_NOTE: &str = "lhs and rhs share the Tate-Nakayama pairing and the class formula rho_check - u(rho_check) mod 2X_*; \
the epsilon factor, Delta_I, q(H), and the H-side Weyl sums and denominators are computed only on the right-hand side";

/// Errors raised by the endoscopy module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EndoscopyError {
    #[error(transparent)]
    Packet(#[from] PacketError),
    #[error(transparent)]
    RealForm(#[from] RealFormError),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

/// The endoscopic side `(H, s)` attached to `s = exp(2πiν_s) ∈ Ŝ[2]`.
#[derive(Debug, Clone)]
pub struct EndoscopicSide {
    pub s: DualTorsion,
    /// Indices (into the roots of `G`) of `R(S, H) = {α : ⟨ν_s, α∨⟩ ∈ ℤ}`.
    pub h_roots: Vec<usize>,
    /// Indices of the `λ`-positive roots of `G` outside `H`.
    pub complement_positive: Vec<usize>,
    /// Root datum of `H` on the lattices of `G`.
    pub h_datum: BasedRootDatum,
    /// Positive system of `H` induced from `B_λ`.
    pub h_positive: PositiveSystem,
    /// Quasi-split grading `ρ∨_H/2` of `H`.
    pub h_grading: Grading,
    /// Elements of `W` lying in `W_H`.
    pub h_weyl: Vec<usize>,
    /// Minimal-length representatives of the right cosets `W_H\W`.
    pub coset_reps: Vec<usize>,
    pub q_h: usize,
    pub q_g0: usize,
    pub r_g: usize,
    pub r_h: usize,
    pub epsilon: Complex64,
    pub h_type: String,
}

/// Builds the endoscopic side of `param` for `s`.
pub fn build_endoscopic(param: &DiscreteParameter, s: &DualTorsion) -> Result<EndoscopicSide, EndoscopyError> {
    let d = &param.datum;
    let s = DualTorsion::new(d.rank, s.nu.clone())?;
    let h_roots: Vec<usize> = (0..d.num_roots())
        .filter(|&i| pair_coroot(&s.nu, &d.coroots[i]).is_integer())
        .collect();
    let complement_positive: Vec<usize> = param
        .positive
        .positive_roots()
        .into_iter()
        .filter(|i| !h_roots.contains(i))
        .collect();
    let roots: Vec<Vec<i64>> = h_roots.iter().map(|&i| d.roots[i].clone()).collect();
    let coroots: Vec<Vec<i64>> = h_roots.iter().map(|&i| d.coroots[i].clone()).collect();
    let mut h_datum = BasedRootDatum::new(format!("H({})", d.label), d.rank, roots, coroots, Vec::new());
    let h_positive = chamber_of(&h_datum, &param.lambda).map_err(PacketError::from)?;
    h_datum.simple = h_positive.simple_roots(&h_datum);
    let h_grading = quasisplit_grading(&h_datum, &h_positive);
    let hw = weyl_group(&h_datum).map_err(PacketError::from)?;
    let mut h_weyl: Vec<usize> = hw
        .elements
        .iter()
        .map(|e| param.weyl.index_of(&e.mat).expect("W_H is a subgroup of W"))
        .collect();
    h_weyl.sort();
    let w = &param.weyl;
    let mut seen = vec![false; w.len()];
    let mut coset_reps = Vec::new();
    for u in 0..w.len() {
        if seen[u] {
            continue;
        }
        coset_reps.push(u);
        for &h in &h_weyl {
            seen[w.mul(h, u)] = true;
        }
    }
    let q_h = q_invariant(&h_datum, &h_grading, &h_positive);
    let q_g0 = param.q_quasisplit();
    let r_g = d.num_roots();
    let r_h = h_datum.num_roots();
    let epsilon = epsilon_factor(q_h, q_g0, r_g, r_h);
    let h_type = cartan_type(&h_datum);
    Ok(EndoscopicSide {
        s,
        h_roots,
        complement_positive,
        h_datum,
        h_positive,
        h_grading,
        h_weyl,
        coset_reps,
        q_h,
        q_g0,
        r_g,
        r_h,
        epsilon,
        h_type,
    })
}

/// `ε = (−1)^{q(H) − q(G₀)} · i^{(r_G − r_H)/2}`.
pub fn epsilon_factor(q_h: usize, q_g0: usize, r_g: usize, r_h: usize) -> Complex64 {
    let sign = if (q_h + q_g0).is_multiple_of(2) { 1.0 } else { -1.0 };
    let k = ((r_g - r_h) / 2) % 4;
    let ipow = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)][k];
    ipow * sign
}

/// `Δ_I(t) = ε·(−1)^{q(G₀)−q(H)} ∏_{α ∈ R(G/H)⁺} arg(e^{πi⟨α,t⟩} − e^{−πi⟨α,t⟩})`.
pub fn delta_i(param: &DiscreteParameter, side: &EndoscopicSide, t: &TorusPoint) -> Result<Complex64, EndoscopyError> {
    let d = &param.datum;
    let mut prod = side.epsilon;
    if (side.q_g0 + side.q_h) % 2 == 1 {
        prod = -prod;
    }
    for &i in &side.complement_positive {
        let x = PI * t.pair(&d.roots[i]);
        let z = Complex64::new(0.0, 2.0 * x.sin());
        prod *= arg_unit(z).map_err(|_| {
            PacketError::Covers(crate::covers::CoversError::Irregular {
                t: t.t.clone(),
                root: d.roots[i].clone(),
            })
        })?;
    }
    Ok(prod)
}

/// `Δ_III(t) = τ_G(t)/τ_H(t)`. In the canonical angle coordinates both
/// characters are `exp(2πi⟨λ, t⟩)`, so the value is 1 up to rounding.
pub fn delta_iii(param: &DiscreteParameter, _side: &EndoscopicSide, t: &TorusPoint) -> Complex64 {
    let g = eval_char_f64(param.lambda_f64(), t);
    let h = eval_char_f64(param.lambda_f64(), t);
    g / h
}

/// `Δ(γ̇, δ)` for the matched pair with `δ₀ = u·δ`:
/// `⟨s, ρ∨ − uρ∨⟩ · ε · Δ_I(u·t)⁻¹ · Δ_III(u·t)`.
pub fn transfer_factor(param: &DiscreteParameter, side: &EndoscopicSide, u: usize, t: &TorusPoint) -> Result<Complex64, EndoscopyError> {
    let x = t.act(param.weyl.get(u));
    let sign = f64::from(tn_pairing(&param.point_class(u), &side.s));
    Ok(side.epsilon / delta_i(param, side, &x)? * delta_iii(param, side, &x) * sign)
}

/// The stable character of `H` at `x`: `(−1)^{q(H)} Σ_{w ∈ W_H} τ(wx)/d_H(wx)`.
pub fn stable_character_h(param: &DiscreteParameter, side: &EndoscopicSide, x: &TorusPoint) -> Result<Complex64, EndoscopyError> {
    let mut sum = Complex64::new(0.0, 0.0);
    for &w in &side.h_weyl {
        let y = x.act(param.weyl.get(w));
        sum += tau_over_d_h(param, side, &y)?;
    }
    Ok(if side.q_h.is_multiple_of(2) { sum } else { -sum })
}

fn tau_over_d_h(param: &DiscreteParameter, side: &EndoscopicSide, y: &TorusPoint) -> Result<Complex64, EndoscopyError> {
    let d = d_arg(&side.h_datum, &side.h_positive, y).map_err(PacketError::from)?;
    Ok(eval_char_f64(param.lambda_f64(), y) / d)
}

/// `e(G) Σ_π ⟨π, s⟩ Θ_π(t)` over the packet of a pure form with integral classes.
pub fn lhs(param: &DiscreteParameter, packet: &Packet, s: &DualTorsion, t: &TorusPoint) -> Result<Complex64, EndoscopyError> {
    if !packet.quasi_split {
        return Err(EndoscopyError::Unsupported(format!(
            "the identity is verified on the quasi-split form only; form {} is not quasi-split",
            packet.form
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, m) in packet.members.iter().enumerate() {
        sum += hc_character(param, packet, m, t)? * f64::from(pairing(packet, k, s)?);
    }
    Ok(sum * f64::from(packet.kottwitz_sign))
}

/// The two evaluations of the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhsValues {
    /// Folded over stable classes: `Σ_{κ ∈ W_H\W} Δ(u_κ t)·SΘ_H(u_κ t)`.
    pub a: Complex64,
    /// Unfolded: `Σ_{u ∈ W} Δ(u t)·(−1)^{q(H)} τ(u t)/d_H(u t)`.
    pub b: Complex64,
}

/// Evaluates the right-hand side in both forms.
pub fn rhs(param: &DiscreteParameter, side: &EndoscopicSide, t: &TorusPoint) -> Result<RhsValues, EndoscopyError> {
    let mut a = Complex64::new(0.0, 0.0);
    for &u in &side.coset_reps {
        let x = t.act(param.weyl.get(u));
        a += transfer_factor(param, side, u, t)? * stable_character_h(param, side, &x)?;
    }
    let mut b = Complex64::new(0.0, 0.0);
    let sign = if side.q_h.is_multiple_of(2) { 1.0 } else { -1.0 };
    for u in 0..param.weyl.len() {
        let x = t.act(param.weyl.get(u));
        b += transfer_factor(param, side, u, t)? * tau_over_d_h(param, side, &x)? * sign;
    }
    Ok(RhsValues { a, b })
}

/// One sampled point of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub t: Vec<f64>,
    pub lhs: [f64; 2],
    pub rhs_a: [f64; 2],
    pub rhs_b: [f64; 2],
    /// `max(|lhs − rhs_a|, |lhs − rhs_b|)`.
    pub residual: f64,
    /// `|rhs_a − rhs_b|`.
    pub rhs_gap: f64,
}

/// Result of [`verify_identity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub prng: String,
    pub seed: u64,
    pub wall_margin: f64,
    pub tolerance: f64,
    pub samples: Vec<SampleRecord>,
    pub max_residual: f64,
    pub max_rhs_gap: f64,
    pub pass: bool,
    pub shared_subroutines: String,
}

fn c2(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Verifies the identity at `samples` seeded regular points.
pub fn verify_identity(param: &DiscreteParameter, packet: &Packet, side: &EndoscopicSide, samples: usize, seed: u64, tol: f64) -> Result<VerifyReport, EndoscopyError> {
    let points = sample_regular_points(&param.datum, samples, seed, DEFAULT_WALL_MARGIN);
    verify_at_points(param, packet, side, &points, seed, tol)
}

/// Verifies the identity at the given points.
pub fn verify_at_points(param: &DiscreteParameter, packet: &Packet, side: &EndoscopicSide, points: &[TorusPoint], seed: u64, tol: f64) -> Result<VerifyReport, EndoscopyError> {
    let mut records = Vec::with_capacity(points.len());
    for (index, t) in points.iter().enumerate() {
        let l = lhs(param, packet, &side.s, t)?;
        let r = rhs(param, side, t)?;
        records.push(SampleRecord {
            index,
            t: t.t.clone(),
            lhs: c2(l),
            rhs_a: c2(r.a),
            rhs_b: c2(r.b),
            residual: (l - r.a).norm().max((l - r.b).norm()),
            rhs_gap: (r.a - r.b).norm(),
        });
    }
    let max_residual = records.iter().map(|r| r.residual).fold(0.0, f64::max);
    let max_rhs_gap = records.iter().map(|r| r.rhs_gap).fold(0.0, f64::max);
    Ok(VerifyReport {
        prng: PRNG_NAME.to_string(),
        seed,
        wall_margin: DEFAULT_WALL_MARGIN,
        tolerance: tol,
        samples: records,
        max_residual,
        max_rhs_gap,
        pass: max_residual < tol,
        shared_subroutines: SHARED_SUBROUTINE_NOTE.to_string(),
    })
}

/// The elements of `Ŝ[2]` whose endoscopic side is a torus (empty root system).
pub fn torus_sides(param: &DiscreteParameter) -> Vec<DualTorsion> {
    DualTorsion::all(param.datum.rank)
        .into_iter()
        .filter(|s| {
            param
                .datum
                .coroots
                .iter()
                .all(|c| !pair_coroot(&s.nu, c).is_integer())
        })
        .collect()
}

/// Distinct endoscopic root systems over all of `Ŝ[2]`, as `(s, H type)` pairs.
pub fn endoscopic_types(param: &DiscreteParameter) -> Result<Vec<(DualTorsion, String)>, EndoscopyError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for s in DualTorsion::all(param.datum.rank) {
        let side = build_endoscopic(param, &s)?;
        if seen.insert(side.h_roots.clone()) {
            out.push((s, side.h_type));
        }
    }
    Ok(out)
}

/// Convenience: the quasi-split packet of `param`.
pub fn quasisplit_packet(param: &DiscreteParameter) -> Packet {
    enumerate_packet(param, &param.quasisplit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{Weight, Q};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    fn a1() -> (DiscreteParameter, DualTorsion) {
        let p = DiscreteParameter::new(BasedRootDatum::family("A1-sc").unwrap(), Weight::from_ints(&[1])).unwrap();
        let s = DualTorsion::new(1, Weight(vec![Q::new(1, 2)])).unwrap();
        (p, s)
    }

    #[test]
    fn a1_torus_side() {
        let (p, s) = a1();
        let side = build_endoscopic(&p, &s).unwrap();
        assert!(side.h_roots.is_empty());
        assert_eq!(side.h_type, "torus");
        assert!(close(side.epsilon, Complex64::new(0.0, -1.0), 1e-15));
        for x in [0.1, 0.2, 0.3, 0.45] {
            let v = delta_i(&p, &side, &TorusPoint::new(vec![x])).unwrap();
            assert!(close(v, Complex64::new(-1.0, 0.0), 1e-12), "{x}: {v}");
        }
        assert!(close(delta_iii(&p, &side, &TorusPoint::new(vec![0.3])), Complex64::new(1.0, 0.0), 1e-12));
    }

    #[test]
    fn trivial_s_gives_h_equal_g() {
        let (p, _) = a1();
        let side = build_endoscopic(&p, &DualTorsion::trivial(1)).unwrap();
        assert_eq!(side.h_roots.len(), 2);
        assert!(close(side.epsilon, Complex64::new(1.0, 0.0), 1e-15));
        let t = TorusPoint::new(vec![0.17]);
        assert!(close(transfer_factor(&p, &side, 1, &t).unwrap(), Complex64::new(1.0, 0.0), 1e-12));
    }

    #[test]
    fn a1_transfer_factor_sign_between_members() {
        let (p, s) = a1();
        let side = build_endoscopic(&p, &s).unwrap();
        let t = TorusPoint::new(vec![0.2]);
        let e = transfer_factor(&p, &side, 0, &t).unwrap();
        let f = transfer_factor(&p, &side, 1, &t).unwrap();
        // Δ_I flips sign at s_α·t and the pairing contributes another −1.
        assert!(close(f, e, 1e-12));
        assert!(close(e.norm().into(), Complex64::new(1.0, 0.0), 1e-12));
    }

    #[test]
    fn c2_a1xa1_side() {
        let p = DiscreteParameter::new(BasedRootDatum::family("C2-sc").unwrap(), Weight::from_ints(&[2, 1])).unwrap();
        let s = DualTorsion::new(2, Weight(vec![Q::new(1, 2), Q::new(1, 2)])).unwrap();
        let side = build_endoscopic(&p, &s).unwrap();
        assert_eq!(side.h_type, "A1xA1");
        assert_eq!((side.q_h, side.q_g0, side.r_g, side.r_h), (2, 3, 8, 4));
        assert!(close(side.epsilon, Complex64::new(1.0, 0.0), 1e-15));
        assert!(torus_sides(&p).is_empty());
    }

    #[test]
    fn a1_identity_holds() {
        let (p, s) = a1();
        let pk = quasisplit_packet(&p);
        let side = build_endoscopic(&p, &s).unwrap();
        let rep = verify_identity(&p, &pk, &side, 50, 3, 1e-10).unwrap();
        assert!(rep.pass, "max residual {}", rep.max_residual);
    }
}
