//! The five subcommands. Each returns a human-readable summary and a
//! structured JSON report; reports contain no timing or environment data, so
//! identical inputs give byte-identical reports.

use crate::config::{rats, ConfigError, ExplicitGroup, GroupSpec, JobConfig, Rat};
use dsendo_core::covers::{DEFAULT_WALL_MARGIN, PRNG_NAME};
use dsendo_core::endoscopy::{build_endoscopic, endoscopic_types, torus_sides, verify_identity, EndoscopicSide, EndoscopyError, VerifyReport};
use dsendo_core::packets::{component_group_of, enumerate_packet, generic_members, pairing, DiscreteParameter, Packet};
use dsendo_core::oracle::{oracle_suite, OracleError, OracleRow};
use dsendo_core::realforms::{compact_roots, h1_of_torus, kottwitz_sign, pure_forms, q_invariant, quasisplit_grading, real_weyl_group, DualTorsion};
use dsendo_core::rootdata::{cartan_type, weyl_group, BasedRootDatum};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

/// Exit code for a passed verification (and any successful command).
pub const EXIT_PASS: i32 = 0;
/// Exit code for a failed verification.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for configuration and validation errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for unsupported configurations.
pub const EXIT_UNSUPPORTED: i32 = 3;
/// Exit code for a mismatch between the oracle and the combinatorial rules.
pub const EXIT_ORACLE: i32 = 4;

/// Errors of a command, each carrying its exit code.
#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cannot write report: {0}")]
    Output(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Config(_) | CommandError::Output(_) => EXIT_CONFIG,
            CommandError::Unsupported(_) => EXIT_UNSUPPORTED,
        }
    }
}

impl From<EndoscopyError> for CommandError {
    fn from(e: EndoscopyError) -> Self {
        match e {
            EndoscopyError::Unsupported(m) => CommandError::Unsupported(m),
            other => CommandError::Config(ConfigError::Parameter(other.to_string())),
        }
    }
}

/// Result of running a command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub text: String,
    pub report: serde_json::Value,
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn explicit_group(d: &BasedRootDatum) -> ExplicitGroup {
    ExplicitGroup {
        label: Some(d.label.clone()),
        rank: d.rank,
        roots: d.roots.clone(),
        coroots: d.coroots.clone(),
        simple: d.simple.clone(),
    }
}

fn group_word(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join(" ")
    }
}

// ---------------------------------------------------------------------------
// describe
// ---------------------------------------------------------------------------

/// One pure inner form in the `describe` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormSummary {
    pub classes: Vec<Vec<i64>>,
    pub mu: Vec<Rat>,
    pub quasi_split: bool,
    pub compact_roots: usize,
    pub q: usize,
    pub kottwitz_sign: i32,
    pub real_weyl_order: usize,
}

/// Structural data of a group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescribeSummary {
    pub label: String,
    pub cartan_type: String,
    pub dual: ExplicitGroup,
    pub weyl_order: usize,
    pub positive_roots: usize,
    pub quasisplit_mu: Vec<Rat>,
    pub h1_order: u64,
    pub h1_invariants: Vec<u64>,
    pub pure_component_invariants: Vec<u64>,
    pub rigid_component_invariants: Vec<u64>,
    pub pure_component_order: u64,
    pub rigid_component_order: u64,
    pub forms: Vec<FormSummary>,
}

/// `describe` output: an explicit-lattice configuration plus the summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescribeReport {
    #[serde(flatten)]
    pub config: JobConfig,
    pub describe: DescribeSummary,
}

pub fn describe(cfg: &JobConfig) -> Result<Outcome, CommandError> {
    let d = cfg.datum()?;
    let lambda = cfg.lambda(&d)?;
    let w = weyl_group(&d).map_err(|e| ConfigError::Group(e.to_string()))?;
    let ps = d.based_positive_system();
    let qs = quasisplit_grading(&d, &ps);
    let h1 = h1_of_torus(&d);
    let cg = component_group_of(&d).map_err(|e| CommandError::Unsupported(e.to_string()))?;
    let forms: Vec<FormSummary> = pure_forms(&d, &w, &qs)
        .into_iter()
        .map(|f| FormSummary {
            classes: f.classes.iter().map(|c| c.coords.clone()).collect(),
            mu: rats(&f.grading.mu.0),
            quasi_split: f.quasi_split,
            compact_roots: compact_roots(&d, &f.grading).len(),
            q: q_invariant(&d, &f.grading, &ps),
            kottwitz_sign: kottwitz_sign(&d, &f.grading, &qs, &ps),
            real_weyl_order: real_weyl_group(&w, &f.grading).len(),
        })
        .collect();
    let summary = DescribeSummary {
        label: d.label.clone(),
        cartan_type: cartan_type(&d),
        dual: explicit_group(&d.dual()),
        weyl_order: w.len(),
        positive_roots: ps.positive_roots().len(),
        quasisplit_mu: rats(&qs.mu.0),
        h1_order: h1.order_u64(),
        h1_invariants: h1.invariant_factors_u64(),
        pure_component_invariants: cg.pure.invariant_factors_u64(),
        rigid_component_invariants: cg.rigid.invariant_factors_u64(),
        pure_component_order: cg.pure.order_u64(),
        rigid_component_order: cg.rigid.order_u64(),
        forms,
    };
    let config = JobConfig {
        group: GroupSpec::Explicit(explicit_group(&d)),
        lambda: Some(rats(&lambda.0)),
        ..cfg.clone()
    };

    let mut text = String::new();
    write!(text, "{d}").unwrap();
    writeln!(text, "dual: {}", d.dual().label).unwrap();
    writeln!(text, "|W| = {}", summary.weyl_order).unwrap();
    writeln!(text, "quasi-split grading: mu = {}", qs.mu).unwrap();
    writeln!(text, "H1(R, S) = {} (order {})", h1, summary.h1_order).unwrap();
    writeln!(text, "pure component group: {} (order {})", cg.pure, summary.pure_component_order).unwrap();
    writeln!(text, "rigid component group: {} (order {})", cg.rigid, summary.rigid_component_order).unwrap();
    writeln!(text, "pure inner forms:").unwrap();
    for f in &summary.forms {
        let mu: Vec<String> = f.mu.iter().map(ToString::to_string).collect();
        writeln!(
            text,
            "  classes {:?}: mu = ({}), {} compact roots, q = {}, e = {:+}, |W_R| = {}{}",
            f.classes,
            mu.join(", "),
            f.compact_roots,
            f.q,
            f.kottwitz_sign,
            f.real_weyl_order,
            if f.quasi_split { " (quasi-split)" } else { "" }
        )
        .unwrap();
    }
    Ok(Outcome {
        exit_code: EXIT_PASS,
        text,
        report: to_value(&DescribeReport { config, describe: summary }),
    })
}

// ---------------------------------------------------------------------------
// packet
// ---------------------------------------------------------------------------

/// One packet member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberRow {
    pub index: usize,
    /// Reduced word of the coset representative in the simple reflections.
    pub representative: String,
    pub coset_size: usize,
    /// Class in `X₊/2X₊`, absent for rigid-style gradings.
    pub class: Option<Vec<i64>>,
    /// Pairing with the configured `s`.
    pub pairing: Option<i32>,
    /// Absent on non-quasi-split forms.
    pub generic: Option<bool>,
    /// Index of the Whittaker datum the member is generic for.
    pub whittaker_datum: Option<usize>,
}

/// Packet summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketSummary {
    pub form_mu: Vec<Rat>,
    pub quasi_split: bool,
    pub weyl_order: usize,
    pub real_weyl_order: usize,
    pub q: usize,
    pub kottwitz_sign: i32,
    pub s: Vec<Rat>,
    pub whittaker_count: Option<usize>,
    pub members: Vec<MemberRow>,
}

/// `packet` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketReport {
    pub config: JobConfig,
    pub packet: PacketSummary,
}

fn packet_summary(param: &DiscreteParameter, packet: &Packet, s: &DualTorsion) -> PacketSummary {
    let gen = generic_members(param, packet).ok();
    let members = packet
        .members
        .iter()
        .enumerate()
        .map(|(i, m)| MemberRow {
            index: i,
            representative: group_word(&param.weyl.get(m.rep).word),
            coset_size: m.coset.len(),
            class: m.inv_class.as_ref().map(|c| c.coords.clone()),
            pairing: pairing(packet, i, s).ok(),
            generic: gen.as_ref().map(|g| g.generic[i]),
            whittaker_datum: gen.as_ref().and_then(|g| g.whittaker_of[i]),
        })
        .collect();
    PacketSummary {
        form_mu: rats(&packet.form.mu.0),
        quasi_split: packet.quasi_split,
        weyl_order: param.weyl.len(),
        real_weyl_order: packet.real_weyl.len(),
        q: packet.q,
        kottwitz_sign: packet.kottwitz_sign,
        s: rats(&s.nu.0),
        whittaker_count: gen.as_ref().map(|g| g.whittaker_count),
        members,
    }
}

fn packet_text(p: &PacketSummary) -> String {
    let mut t = String::new();
    let mu: Vec<String> = p.form_mu.iter().map(ToString::to_string).collect();
    let s: Vec<String> = p.s.iter().map(ToString::to_string).collect();
    writeln!(
        t,
        "form mu = ({}){}: |W| = {}, |W_R| = {}, {} members, q = {}, e = {:+}",
        mu.join(", "),
        if p.quasi_split { " (quasi-split)" } else { "" },
        p.weyl_order,
        p.real_weyl_order,
        p.members.len(),
        p.q,
        p.kottwitz_sign
    )
    .unwrap();
    if let Some(n) = p.whittaker_count {
        writeln!(t, "Whittaker data: {n}").unwrap();
    }
    writeln!(t, "{:>3}  {:<16} {:<10} {:>8} {:>8}", "#", "representative", "class", "<.,s>", "generic").unwrap();
    writeln!(t, "     (s = ({}))", s.join(", ")).unwrap();
    for m in &p.members {
        let class = m.class.as_ref().map_or("-".to_string(), |c| format!("{c:?}"));
        let pr = m.pairing.map_or("-".to_string(), |v| format!("{v:+}"));
        let g = match (m.generic, m.whittaker_datum) {
            (Some(true), Some(k)) => format!("yes ({k})"),
            (Some(true), None) => "yes".to_string(),
            (Some(false), _) => "no".to_string(),
            (None, _) => "-".to_string(),
        };
        writeln!(t, "{:>3}  {:<16} {:<10} {:>8} {:>8}", m.index, m.representative, class, pr, g).unwrap();
    }
    t
}

pub fn packet(cfg: &JobConfig) -> Result<Outcome, CommandError> {
    let param = cfg.parameter()?;
    let form = cfg.grading(&param)?;
    let s = cfg.s(param.datum.rank)?;
    let pk = enumerate_packet(&param, &form);
    let summary = packet_summary(&param, &pk, &s);
    Ok(Outcome {
        exit_code: EXIT_PASS,
        text: packet_text(&summary),
        report: to_value(&PacketReport {
            config: cfg.clone(),
            packet: summary,
        }),
    })
}

// ---------------------------------------------------------------------------
// endoscopy
// ---------------------------------------------------------------------------

/// Endoscopic data attached to one `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndoscopicSummary {
    pub s: Vec<Rat>,
    pub h_type: String,
    pub h_roots: Vec<Vec<i64>>,
    pub epsilon: [f64; 2],
    pub q_h: usize,
    pub q_g0: usize,
    pub r_g: usize,
    pub r_h: usize,
    pub coset_count: usize,
}

/// `endoscopy` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndoscopyReport {
    pub config: JobConfig,
    /// Data for the configured `s`, when one is given.
    pub selected: Option<EndoscopicSummary>,
    /// One entry per distinct endoscopic root system over `Ŝ[2]`.
    pub types: Vec<EndoscopicSummary>,
    /// Elements of `Ŝ[2]` with a torus endoscopic side.
    pub torus_sides: Vec<Vec<Rat>>,
}

fn endoscopic_summary(param: &DiscreteParameter, side: &EndoscopicSide) -> EndoscopicSummary {
    EndoscopicSummary {
        s: rats(&side.s.nu.0),
        h_type: side.h_type.clone(),
        h_roots: side.h_roots.iter().map(|&i| param.datum.roots[i].clone()).collect(),
        epsilon: [side.epsilon.re + 0.0, side.epsilon.im + 0.0],
        q_h: side.q_h,
        q_g0: side.q_g0,
        r_g: side.r_g,
        r_h: side.r_h,
        coset_count: side.coset_reps.len(),
    }
}

fn fmt_complex(z: [f64; 2]) -> String {
    let r = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    format!("{}{:+}i", r(z[0]), r(z[1]))
}

fn endoscopic_line(e: &EndoscopicSummary) -> String {
    let s: Vec<String> = e.s.iter().map(ToString::to_string).collect();
    format!(
        "s = ({}): H = {}, {} roots, epsilon = {}, q(H) = {}, q(G0) = {}, r(G) = {}, r(H) = {}, |W_H\\W| = {}",
        s.join(", "),
        e.h_type,
        e.h_roots.len(),
        fmt_complex(e.epsilon),
        e.q_h,
        e.q_g0,
        e.r_g,
        e.r_h,
        e.coset_count
    )
}

pub fn endoscopy(cfg: &JobConfig) -> Result<Outcome, CommandError> {
    let param = cfg.parameter()?;
    let selected = match &cfg.s {
        Some(_) => Some(endoscopic_summary(&param, &build_endoscopic(&param, &cfg.s(param.datum.rank)?)?)),
        None => None,
    };
    let mut types = Vec::new();
    for (s, _) in endoscopic_types(&param)? {
        types.push(endoscopic_summary(&param, &build_endoscopic(&param, &s)?));
    }
    let torus: Vec<Vec<Rat>> = torus_sides(&param).iter().map(|s| rats(&s.nu.0)).collect();
    let mut text = String::new();
    if let Some(e) = &selected {
        writeln!(text, "selected {}", endoscopic_line(e)).unwrap();
    }
    writeln!(text, "endoscopic sides over S^[2]:").unwrap();
    for e in &types {
        writeln!(text, "  {}", endoscopic_line(e)).unwrap();
    }
    if torus.is_empty() {
        writeln!(text, "no element of S^[2] has a torus endoscopic side").unwrap();
    } else {
        writeln!(text, "torus sides: {}", torus.len()).unwrap();
    }
    Ok(Outcome {
        exit_code: EXIT_PASS,
        text,
        report: to_value(&EndoscopyReport {
            config: cfg.clone(),
            selected,
            types,
            torus_sides: torus,
        }),
    })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// `verify` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: JobConfig,
    pub packet: PacketSummary,
    pub endoscopic: EndoscopicSummary,
    pub verification: VerifyReport,
}

pub fn verify(cfg: &JobConfig) -> Result<Outcome, CommandError> {
    let param = cfg.parameter()?;
    let form = cfg.grading(&param)?;
    let s = cfg.s(param.datum.rank)?;
    let pk = enumerate_packet(&param, &form);
    if !pk.quasi_split {
        return Err(CommandError::Unsupported(format!(
            "verification is implemented for the quasi-split form only (requested {})",
            pk.form
        )));
    }
    let side = build_endoscopic(&param, &s)?;
    let rep = verify_identity(&param, &pk, &side, cfg.samples(), cfg.seed(), cfg.tolerance())?;
    let report = VerificationReport {
        config: cfg.clone(),
        packet: packet_summary(&param, &pk, &s),
        endoscopic: endoscopic_summary(&param, &side),
        verification: rep,
    };
    let v = &report.verification;
    let mut text = String::new();
    writeln!(text, "{}", endoscopic_line(&report.endoscopic)).unwrap();
    writeln!(text, "packet: {} members, q = {}", report.packet.members.len(), report.packet.q).unwrap();
    writeln!(
        text,
        "{} samples ({PRNG_NAME}, seed {}, wall margin {DEFAULT_WALL_MARGIN:e}), tolerance {:e}",
        v.samples.len(),
        v.seed,
        v.tolerance
    )
    .unwrap();
    writeln!(text, "max |LHS - RHS| = {:.3e}, max |RHS_A - RHS_B| = {:.3e}", v.max_residual, v.max_rhs_gap).unwrap();
    if !v.pass {
        writeln!(text, "{:>6}  {:>12}", "sample", "residual").unwrap();
        let mut worst: Vec<_> = v.samples.iter().collect();
        worst.sort_by(|a, b| b.residual.total_cmp(&a.residual).then(a.index.cmp(&b.index)));
        for r in worst.iter().take(10) {
            writeln!(text, "{:>6}  {:>12.3e}", r.index, r.residual).unwrap();
        }
    }
    writeln!(text, "note: {}", v.shared_subroutines).unwrap();
    writeln!(text, "{}", if v.pass { "PASS" } else { "FAIL" }).unwrap();
    Ok(Outcome {
        exit_code: if v.pass { EXIT_PASS } else { EXIT_FAIL },
        text,
        report: to_value(&report),
    })
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

/// `oracle` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub family: String,
    pub rows: Vec<OracleRow>,
    pub all_match: bool,
}

pub fn oracle(cfg: &JobConfig) -> Result<Outcome, CommandError> {
    let family = match &cfg.group {
        GroupSpec::Family(name) => name.clone(),
        GroupSpec::Explicit(g) => g.label.clone().unwrap_or_else(|| "explicit".to_string()),
    };
    let rows = oracle_suite(&family).map_err(|e| match e {
        OracleError::NoModel(_) => CommandError::Unsupported(e.to_string()),
        other => CommandError::Config(ConfigError::Group(other.to_string())),
    })?;
    Ok(oracle_outcome(family, rows))
}

/// Formats a comparison table; any mismatch gives [`EXIT_ORACLE`].
pub fn oracle_outcome(family: String, rows: Vec<OracleRow>) -> Outcome {
    let all_match = rows.iter().all(|r| r.matches);
    let mut text = String::new();
    writeln!(text, "oracle comparison for {family}").unwrap();
    writeln!(text, "{:<32} {:<24} {:<24} match", "quantity", "combinatorial", "brute force").unwrap();
    for r in &rows {
        writeln!(
            text,
            "{:<32} {:<24} {:<24} {}",
            r.quantity,
            r.combinatorial,
            r.brute_force,
            if r.matches { "yes" } else { "MISMATCH" }
        )
        .unwrap();
    }
    writeln!(text, "{}", if all_match { "all rows match" } else { "oracle mismatch" }).unwrap();
    Outcome {
        exit_code: if all_match { EXIT_PASS } else { EXIT_ORACLE },
        text,
        report: to_value(&OracleReport { family, rows, all_match }),
    }
}
