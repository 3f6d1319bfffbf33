//! Discrete parameters, component groups, discrete-series packets,
//! Harish-Chandra characters, genericity and the pairing `⟨π, s⟩`.
//!
//! A packet member of a form with real Weyl group `W_ℝ` is a left coset
//! `u·W_ℝ`; its character at a regular point `t` of the elliptic torus is
//!
//! ```text
//! Θ_[u](t) = (−1)^{q(form)} Σ_{w ∈ W_ℝ} τ(uw·t) / d(uw·t),
//! ```
//!
//! where `τ = exp(2πi⟨λ, ·⟩)` and `d` is the argument of the Weyl
//! denominator of the `λ`-dominant positive system. Its cohomology class is
//! `2(u·μ_f − μ_qs) mod 2X₊`, which for the quasi-split form equals
//! `ρ∨ − uρ∨ mod 2X₊`.

use crate::covers::{d_arg, eval_char_f64, CoversError, TorusPoint};
use crate::lattice::{quotient_group, FiniteAbelianGroup, IntMatrix, LatticeError};
use crate::realforms::{kottwitz_sign, q_invariant, quasisplit_grading, real_weyl_group, tn_pairing, CohomologyClass, DualTorsion, Grading};
use crate::rootdata::{
    chamber_of, rho, rho_check, stabilizer_mod_coweights, weyl_group, BasedRootDatum, Coweight, PositiveSystem, RootDataError, Weight, WeylGroup, Q,
};
use num_complex::Complex64;
use std::collections::BTreeSet;
use thiserror::Error;

/// Errors raised while building or evaluating packets.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PacketError {
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Covers(#[from] CoversError),
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("lambda = {lambda} is not genuine: lambda - rho = {diff} is not a character")]
    NotGenuine { lambda: String, diff: String },
    #[error("the form {0} is not quasi-split")]
    NotQuasiSplit(String),
    #[error("the datum is not semisimple: {simple} simple roots in rank {rank}")]
    NotSemisimple { simple: usize, rank: usize },
    #[error("member {0} has no pure cohomology class for this form (rigid-style grading)")]
    NoPureClass(usize),
}

/// A discrete series parameter: a regular weight `λ ∈ ρ + X*` for a root datum.
#[derive(Debug, Clone)]
pub struct DiscreteParameter {
    pub datum: BasedRootDatum,
    pub weyl: WeylGroup,
    pub lambda: Weight,
    /// The `λ`-dominant positive system `B_λ`.
    pub positive: PositiveSystem,
    pub rho: Weight,
    pub rho_check: Coweight,
    /// `μ_qs = ρ∨/2` for `B_λ`.
    pub quasisplit: Grading,
    lambda_f64: Vec<f64>,
}

impl DiscreteParameter {
    /// Validates the datum, the regularity of `λ` and genuineness `λ − ρ_{B_λ} ∈ X*`.
    pub fn new(datum: BasedRootDatum, lambda: Weight) -> Result<Self, PacketError> {
        let violations = datum.validate();
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(PacketError::InvalidDatum(msgs.join("; ")));
        }
        if datum.simple.len() != datum.rank {
            return Err(PacketError::NotSemisimple {
                simple: datum.simple.len(),
                rank: datum.rank,
            });
        }
        if lambda.rank() != datum.rank {
            return Err(RootDataError::Dimension {
                expected: datum.rank,
                found: lambda.rank(),
            }
            .into());
        }
        let positive = chamber_of(&datum, &lambda)?;
        let r = rho(&datum, &positive);
        let diff = lambda.sub(&r);
        if !diff.is_integral() {
            return Err(PacketError::NotGenuine {
                lambda: lambda.to_string(),
                diff: diff.to_string(),
            });
        }
        let weyl = weyl_group(&datum)?;
        let rc = rho_check(&datum, &positive);
        let quasisplit = quasisplit_grading(&datum, &positive);
        Ok(Self {
            lambda_f64: lambda.to_f64(),
            datum,
            weyl,
            lambda,
            positive,
            rho: r,
            rho_check: rc,
            quasisplit,
        })
    }

    /// `λ` as floating-point coordinates.
    pub fn lambda_f64(&self) -> &[f64] {
        &self.lambda_f64
    }

    /// `q` of the quasi-split form.
    pub fn q_quasisplit(&self) -> usize {
        q_invariant(&self.datum, &self.quasisplit, &self.positive)
    }

    /// `τ(t) / d_{B_λ}(t)`.
    pub fn tau_over_d(&self, t: &TorusPoint) -> Result<Complex64, PacketError> {
        Ok(eval_char_f64(&self.lambda_f64, t) / d_arg(&self.datum, &self.positive, t)?)
    }

    /// The point-level class `ρ∨ − uρ∨ mod 2X₊` of the Weyl element `u`.
    pub fn point_class(&self, u: usize) -> CohomologyClass {
        let w = self.weyl.get(u);
        let diff = self.rho_check.sub(&w.act_coweight(&self.rho_check));
        CohomologyClass::from_lift(&diff.to_ints().expect("rho_check - u rho_check is a sum of coroots"))
    }
}

/// The component group of a discrete parameter in its pure and rigid versions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGroup {
    /// `Ŝ[2] ≅ ½X*/X*`.
    pub pure: FiniteAbelianGroup,
    /// `½X*/Q`, with `Q` the root lattice (coroot lattice of the dual group).
    pub rigid: FiniteAbelianGroup,
}

/// Computes both component groups by lattice quotients, after scaling by 2:
/// `½X*/X* ≅ X*/2X*` and `½X*/Q ≅ X*/2Q`.
pub fn component_group(param: &DiscreteParameter) -> ComponentGroup {
    component_group_of(&param.datum).expect("parameters are built on semisimple data")
}

/// [`component_group`] for a bare datum (the group does not depend on `λ`).
///
/// Fails when the roots do not span `X* ⊗ ℚ` (the datum is not semisimple).
pub fn component_group_of(datum: &BasedRootDatum) -> Result<ComponentGroup, LatticeError> {
    let n = datum.rank;
    let pure = quotient_group(n, &IntMatrix::diagonal(&vec![2; n]))?;
    let gens: Vec<Vec<i64>> = datum
        .simple
        .iter()
        .map(|&i| datum.roots[i].iter().map(|x| 2 * x).collect())
        .collect();
    let rigid = if gens.is_empty() {
        if n == 0 {
            FiniteAbelianGroup::trivial(0)
        } else {
            return Err(LatticeError::InfiniteQuotient { rank: 0, ambient: n, free: n });
        }
    } else {
        quotient_group(n, &IntMatrix::from_rows(&gens)?)?
    };
    Ok(ComponentGroup { pure, rigid })
}

/// A packet member: the left coset `u·W_ℝ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketMember {
    /// Minimal-length representative (index into the Weyl group).
    pub rep: usize,
    /// All elements of the coset, sorted.
    pub coset: Vec<usize>,
    /// `2(u·μ_f − μ_qs) mod 2X₊` when integral; `None` for rigid-style gradings.
    pub inv_class: Option<CohomologyClass>,
}

/// The members of one form's packet.
#[derive(Debug, Clone)]
pub struct Packet {
    pub form: Grading,
    pub quasi_split: bool,
    pub real_weyl: Vec<usize>,
    pub q: usize,
    pub kottwitz_sign: i32,
    pub members: Vec<PacketMember>,
}

/// Enumerates the packet of `param` on the given form: one member per left
/// coset `u·W_ℝ`, ordered by representative.
pub fn enumerate_packet(param: &DiscreteParameter, form: &Grading) -> Packet {
    let w = &param.weyl;
    let real_weyl = real_weyl_group(w, form);
    let mut seen = vec![false; w.len()];
    let mut members = Vec::new();
    for u in 0..w.len() {
        if seen[u] {
            continue;
        }
        let coset: BTreeSet<usize> = real_weyl.iter().map(|&r| w.mul(u, r)).collect();
        for &c in &coset {
            seen[c] = true;
        }
        let image = w.get(u).act_coweight(&form.mu);
        let lift = image.sub(&param.quasisplit.mu).scale(Q::from_integer(2));
        members.push(PacketMember {
            rep: u,
            coset: coset.into_iter().collect(),
            inv_class: lift.to_ints().map(|v| CohomologyClass::from_lift(&v)),
        });
    }
    let quasi_split = form.mu.sub(&param.quasisplit.mu).is_integral();
    Packet {
        form: form.clone(),
        quasi_split,
        q: q_invariant(&param.datum, form, &param.positive),
        kottwitz_sign: kottwitz_sign(&param.datum, form, &param.quasisplit, &param.positive),
        real_weyl,
        members,
    }
}

/// The Harish-Chandra character of a member at `t`.
pub fn hc_character(param: &DiscreteParameter, packet: &Packet, member: &PacketMember, t: &TorusPoint) -> Result<Complex64, PacketError> {
    hc_character_at_rep(param, packet, member.rep, t)
}

/// The character of the member containing `u`, evaluated with `u` as coset
/// representative (the value does not depend on this choice).
pub fn hc_character_at_rep(param: &DiscreteParameter, packet: &Packet, u: usize, t: &TorusPoint) -> Result<Complex64, PacketError> {
    let w = &param.weyl;
    let mut sum = Complex64::new(0.0, 0.0);
    for &r in &packet.real_weyl {
        let x = t.act(w.get(w.mul(u, r)));
        sum += param.tau_over_d(&x)?;
    }
    Ok(if packet.q.is_multiple_of(2) { sum } else { -sum })
}

/// The stable character `(−1)^{q_qs} Σ_{w ∈ W} τ(wt)/d(wt)`.
pub fn stable_character(param: &DiscreteParameter, t: &TorusPoint) -> Result<Complex64, PacketError> {
    let mut sum = Complex64::new(0.0, 0.0);
    for w in &param.weyl.elements {
        sum += param.tau_over_d(&t.act(w))?;
    }
    Ok(if param.q_quasisplit().is_multiple_of(2) { sum } else { -sum })
}

/// Genericity data of a quasi-split packet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genericity {
    /// `|Q(G(ℝ))| = |W_ℝ(adjoint lattice)| / |W_ℝ|`.
    pub whittaker_count: usize,
    /// Real Weyl group of the grading computed modulo the coweight lattice.
    pub adjoint_real_weyl: Vec<usize>,
    /// Whittaker data, as the cosets `v·W_ℝ ⊂ W_ℝ(adjoint)`, sorted; the
    /// first is the distinguished datum.
    pub whittaker_data: Vec<Vec<usize>>,
    /// Per member: whether every simple root of the chamber of `u⁻¹λ` is noncompact.
    pub generic: Vec<bool>,
    /// Per member: the Whittaker datum (index into `whittaker_data`) it is generic for.
    pub whittaker_of: Vec<Option<usize>>,
}

/// Determines the generic members of a quasi-split packet and the Whittaker
/// datum each one is generic for.
pub fn generic_members(param: &DiscreteParameter, packet: &Packet) -> Result<Genericity, PacketError> {
    if !packet.quasi_split {
        return Err(PacketError::NotQuasiSplit(packet.form.to_string()));
    }
    let w = &param.weyl;
    let d = &param.datum;
    let simple = param.positive.simple_roots(d);
    let adjoint_real_weyl = stabilizer_mod_coweights(d, w, &param.quasisplit.mu);
    let mut data: Vec<Vec<usize>> = Vec::new();
    let mut seen = BTreeSet::new();
    for &v in &adjoint_real_weyl {
        if seen.contains(&v) {
            continue;
        }
        let coset: Vec<usize> = {
            let s: BTreeSet<usize> = packet.real_weyl.iter().map(|&r| w.mul(v, r)).collect();
            s.into_iter().collect()
        };
        seen.extend(coset.iter().copied());
        data.push(coset);
    }
    let mut generic = Vec::new();
    let mut whittaker_of = Vec::new();
    for m in &packet.members {
        // The chamber of u⁻¹λ has simple roots u⁻¹αᵢ; they are noncompact for
        // μ iff ⟨αᵢ, u·μ⟩ ∉ ℤ.
        let umu = w.get(m.rep).act_coweight(&packet.form.mu);
        let is_generic = simple
            .iter()
            .all(|&i| !crate::rootdata::pair_root(&d.roots[i], &umu).is_integer());
        generic.push(is_generic);
        whittaker_of.push(if is_generic { data.iter().position(|c| c.contains(&m.rep)) } else { None });
    }
    Ok(Genericity {
        whittaker_count: adjoint_real_weyl.len() / packet.real_weyl.len(),
        adjoint_real_weyl,
        whittaker_data: data,
        generic,
        whittaker_of,
    })
}

/// `⟨π, s⟩`: the Tate–Nakayama pairing of the member's class with `s`.
pub fn pairing(packet: &Packet, member_index: usize, s: &DualTorsion) -> Result<i32, PacketError> {
    packet.members[member_index]
        .inv_class
        .as_ref()
        .map(|c| tn_pairing(c, s))
        .ok_or(PacketError::NoPureClass(member_index))
}

/// Pairings renormalized to another Whittaker datum, whose generic member
/// `base` becomes the base point: `⟨π, s⟩_{w′} = ⟨π, s⟩_w · ⟨π_base, s⟩_w`.
pub fn pairing_relative(packet: &Packet, member_index: usize, base: usize, s: &DualTorsion) -> Result<i32, PacketError> {
    Ok(pairing(packet, member_index, s)? * pairing(packet, base, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realforms::CohomologyClass;

    fn param(name: &str, lambda: &[i64]) -> DiscreteParameter {
        DiscreteParameter::new(BasedRootDatum::family(name).unwrap(), Weight::from_ints(lambda)).unwrap()
    }

    #[test]
    fn regularity_and_genuineness() {
        let d = BasedRootDatum::family("A1-sc").unwrap();
        assert!(matches!(DiscreteParameter::new(d.clone(), Weight::zero(1)), Err(PacketError::RootData(RootDataError::Irregular { .. }))));
        let adj = BasedRootDatum::family("A1-adj").unwrap();
        assert!(matches!(DiscreteParameter::new(adj.clone(), Weight::from_ints(&[1])), Err(PacketError::NotGenuine { .. })));
        assert!(DiscreteParameter::new(adj, Weight(vec![Q::new(1, 2)])).is_ok());
        assert!(DiscreteParameter::new(d, Weight::from_ints(&[2])).is_ok());
    }

    #[test]
    fn a1_packet() {
        let p = param("A1-sc", &[1]);
        let pk = enumerate_packet(&p, &p.quasisplit);
        assert_eq!(pk.members.len(), 2);
        assert_eq!(pk.members[0].inv_class, Some(CohomologyClass::zero(1)));
        assert_eq!(pk.members[1].inv_class, Some(CohomologyClass::from_lift(&[1])));
        let compact = Grading::new(&p.datum, Coweight::zero(1)).unwrap();
        let pk = enumerate_packet(&p, &compact);
        assert_eq!(pk.members.len(), 1);
        assert_eq!(pk.members[0].inv_class, None);
    }

    #[test]
    fn a1_character_value() {
        let p = param("A1-sc", &[1]);
        let pk = enumerate_packet(&p, &p.quasisplit);
        let v = hc_character(&p, &pk, &pk.members[0], &TorusPoint::new(vec![0.25])).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn component_groups() {
        let cg = component_group(&param("A1-sc", &[1]));
        assert_eq!(cg.pure.invariant_factors_u64(), vec![2]);
        assert_eq!(cg.rigid.invariant_factors_u64(), vec![4]);
        let adj = DiscreteParameter::new(BasedRootDatum::family("A1-adj").unwrap(), Weight(vec![Q::new(1, 2)])).unwrap();
        let cg = component_group(&adj);
        assert_eq!(cg.pure.invariant_factors_u64(), vec![2]);
        assert_eq!(cg.rigid.invariant_factors_u64(), vec![2]);
        let cg = component_group(&param("C2-sc", &[2, 1]));
        assert_eq!(cg.pure.invariant_factors_u64(), vec![2, 2]);
    }

    #[test]
    fn c2_packet_and_generic_members() {
        let p = param("C2-sc", &[2, 1]);
        let pk = enumerate_packet(&p, &p.quasisplit);
        assert_eq!(pk.members.len(), 4);
        let classes: BTreeSet<_> = pk.members.iter().map(|m| m.inv_class.clone().unwrap()).collect();
        assert_eq!(classes.len(), 4);
        let g = generic_members(&p, &pk).unwrap();
        assert_eq!(g.whittaker_count, 2);
        assert_eq!(g.generic.iter().filter(|&&b| b).count(), 2);
        assert_eq!(g.whittaker_of[0], Some(0));
    }

    #[test]
    fn a1_generic_members() {
        let p = param("A1-sc", &[1]);
        let pk = enumerate_packet(&p, &p.quasisplit);
        let g = generic_members(&p, &pk).unwrap();
        assert_eq!(g.whittaker_count, 2);
        assert_eq!(g.whittaker_of, vec![Some(0), Some(1)]);
        let compact = Grading::new(&p.datum, Coweight::zero(1)).unwrap();
        assert!(matches!(generic_members(&p, &enumerate_packet(&p, &compact)), Err(PacketError::NotQuasiSplit(_))));
    }

    #[test]
    fn pairings() {
        let p = param("A1-sc", &[1]);
        let pk = enumerate_packet(&p, &p.quasisplit);
        let s = DualTorsion::all(1).pop().unwrap();
        assert_eq!(pairing(&pk, 0, &s).unwrap(), 1);
        assert_eq!(pairing(&pk, 1, &s).unwrap(), -1);
        assert_eq!(pairing(&pk, 1, &DualTorsion::trivial(1)).unwrap(), 1);
    }
}
