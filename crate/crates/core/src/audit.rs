//! Relative invariants of a fibration, the balance identity and the
//! inequality audit.

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::Rational;
use crate::cover::{cover_report, CoverError, CoverReport};
use crate::fiber::{fiber_full_invariants, FiberError, FiberInvariants, FiberModel};
use crate::germ::ResolutionConfig;
use crate::model::{assemble_fibration, FibrationModel};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AuditError {
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error("cover: {0}")]
    Cover(#[from] CoverError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, Default)]
pub struct AuditOptions {
    /// Also audit the slope and canonical-class bounds.
    pub strict_extras: bool,
    pub resolution: ResolutionConfig,
    pub execution: Execution,
}

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// `a` for integers, `a/b` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn half(n: i64) -> Rational {
    Rational::new(n.into(), 2.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    DataInconsistent,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    LessThan,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::LessThan => "<",
        }
    }
}

/// One inequality `lhs ≤ rhs` (or `<`); the margin is `rhs − lhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleResult {
    pub id: &'static str,
    pub statement: &'static str,
    pub applicable: bool,
    pub relation: Relation,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub margin: Rational,
    pub verdict: Verdict,
}

impl RuleResult {
    fn new(
        id: &'static str,
        statement: &'static str,
        applicable: bool,
        relation: Relation,
        lhs: Rational,
        rhs: Rational,
    ) -> Self {
        let margin = &rhs - &lhs;
        let holds = match relation {
            Relation::AtMost => !margin.is_negative(),
            Relation::LessThan => margin.is_positive(),
        };
        let verdict = match (applicable, holds) {
            (false, _) => Verdict::NotApplicable,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::DataInconsistent,
        };
        RuleResult { id, statement, applicable, relation, lhs, rhs, margin, verdict }
    }
}

/// A consistency check that either holds or does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeInvariants {
    pub g: i64,
    pub b: i64,
    pub q: i64,
    pub p_g: i64,
    pub q_f: i64,
    pub c1_sq: i64,
    pub c2: i64,
    #[serde(rename = "chiO")]
    pub chi_o: i64,
    pub chi_f: i64,
    #[serde(rename = "K_f_sq")]
    pub k_f_sq: i64,
    pub e_f: i64,
    pub h11: i64,
    pub h11_computed: i64,
    /// Invariants filled in from the others rather than read from the input.
    pub derived: Vec<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularFiberCounts {
    pub s: i64,
    pub s1: i64,
    pub s1_fibers: Vec<String>,
    /// `Σ (ℓ_F − 1)` over the singular fibers.
    pub sum_ell_minus_one: i64,
}

/// `2χ_f = (g − q_f)(2b − 2 + s1) − Σ_{s1}(g(F) − q_f)
///        − (h11 − 2q_f·b − 2 − Σ_s(ℓ_F − 1)) + Σ_{s1} N̄_F`,
/// with `residual = rhs − lhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Balance {
    pub lhs: i64,
    pub base: i64,
    pub genus_defect: i64,
    pub picard_excess: i64,
    pub multiplicity_excess: i64,
    pub rhs: i64,
    pub residual: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub id: &'static str,
    pub statement: &'static str,
    pub required: bool,
    pub holds: bool,
}

/// Semistable fibrations over `P¹`: at least four fibers drop geometric
/// genus, with equality exactly under three conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalBaseDiagnosis {
    pub minimum: RuleResult,
    pub equality_case: bool,
    pub conditions: Vec<Condition>,
    #[serde(serialize_with = "ser_rational")]
    pub excess_lhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub excess_rhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub excess_residual: Rational,
}

impl RationalBaseDiagnosis {
    pub fn holds(&self) -> bool {
        self.minimum.verdict != Verdict::DataInconsistent
            && self.conditions.iter().all(|c| !c.required || c.holds)
            && self.excess_residual.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub name: String,
    pub semistable: bool,
    pub trivial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative: Option<RelativeInvariants>,
    pub fibers: Vec<FiberInvariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<SingularFiberCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balance: Option<Balance>,
    pub rules: Vec<RuleResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnosis: Option<RationalBaseDiagnosis>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub consistent: bool,
}

impl AuditReport {
    pub fn rule(&self, id: &str) -> Option<&RuleResult> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn finish(mut self) -> Self {
        self.consistent = self.checks.iter().all(|c| c.passed)
            && self.rules.iter().all(|r| r.verdict != Verdict::DataInconsistent)
            && self.balance.as_ref().is_none_or(|b| b.residual == 0)
            && self.diagnosis.as_ref().is_none_or(RationalBaseDiagnosis::holds)
            && self.relative.is_some();
        self
    }
}

fn push_check(checks: &mut Vec<Check>, id: &str, passed: bool, detail: String) {
    checks.push(Check { id: id.into(), passed, detail });
}

/// Resolves every fiber of `model`. Structural errors abort; numeric ones
/// are returned per fiber.
pub fn resolve_fibers(
    model: &FibrationModel,
    opts: &AuditOptions,
) -> Result<Vec<Result<FiberInvariants, FiberError>>, AuditError> {
    let indices: Vec<usize> = (0..model.fibers.len()).collect();
    let results = par::map(opts.execution, &indices, |&i| {
        let fm = FiberModel::from_spec(&model.fibers[i], &model.fiber_name(i), model.fiber_genus, &opts.resolution)?;
        let inv = fiber_full_invariants(&fm)?;
        Ok::<_, FiberError>((fm.is_semistable(), inv))
    });
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Err(e) if e.is_structural() => return Err(e.into()),
            Err(e) => out.push(Err(e)),
            Ok((_, inv)) => out.push(Ok(inv)),
        }
    }
    Ok(out)
}

pub fn audit(model: &FibrationModel, opts: &AuditOptions) -> Result<AuditReport, AuditError> {
    model.validate().map_err(AuditError::Invalid)?;
    let mut report = AuditReport {
        name: model.name.clone(),
        semistable: model.semistable,
        trivial: model.trivial,
        cover: None,
        relative: None,
        fibers: Vec::new(),
        counts: None,
        balance: None,
        rules: Vec::new(),
        diagnosis: None,
        checks: Vec::new(),
        warnings: Vec::new(),
        consistent: false,
    };
    let checks = &mut report.checks;
    let (g, b, q, p_g) = (model.fiber_genus, model.base_genus, model.surface.q, model.surface.p_g);

    let ranges: [(&str, bool, String); 4] = [
        ("range: fiber genus", g >= 1, format!("g = {g}; g >= 1 required")),
        ("range: base genus", b >= 0, format!("b = {b}; b >= 0 required")),
        ("range: geometric genus", p_g >= 0, format!("p_g = {p_g}; p_g >= 0 required")),
        (
            "range: h11",
            model.surface.h11.is_none_or(|h| h >= 1),
            format!("h11 = {:?}; h11 >= 1 required", model.surface.h11),
        ),
    ];
    let mut ranges_ok = true;
    for (id, ok, detail) in ranges {
        ranges_ok &= ok;
        if !ok {
            push_check(checks, id, false, detail);
        }
    }
    if ranges_ok {
        push_check(checks, "ranges", true, "g >= 1, b >= 0, p_g >= 0".into());
    }

    let mut surface = model.surface.clone();
    if let Some(cover) = &model.cover {
        match cover_report(cover, &opts.resolution) {
            Ok(rep) => {
                match assemble_fibration(model, &rep.invariants) {
                    Ok(m) => {
                        push_check(
                            checks,
                            "cover: chi(O_S)",
                            true,
                            format!("chi(O_S) = {} from the cover", rep.invariants.chi_o),
                        );
                        surface = m.surface;
                    }
                    Err(e) => push_check(checks, "cover: chi(O_S)", false, e.to_string()),
                }
                report.cover = Some(rep);
            }
            Err(e) if e.is_structural() => return Err(e.into()),
            Err(e) => push_check(checks, "cover", false, e.to_string()),
        }
    }

    let mut fibers_ok = true;
    for r in resolve_fibers(model, opts)? {
        match r {
            Ok(inv) => {
                if inv.chi_top_residual != 0 {
                    push_check(
                        checks,
                        "fiber: topological Euler characteristic",
                        false,
                        format!("{}: residual {}", inv.name, inv.chi_top_residual),
                    );
                }
                report.fibers.push(inv);
            }
            Err(e) => {
                fibers_ok = false;
                push_check(checks, "fiber", false, e.to_string());
            }
        }
    }
    if fibers_ok {
        push_check(checks, "fibers", true, format!("{} fibers resolved", report.fibers.len()));
    }
    if model.semistable {
        for f in report.fibers.iter().filter(|f| !f.semistable) {
            push_check(
                checks,
                "declared semistable",
                false,
                format!("{} is not reduced with only nodes", f.name),
            );
        }
    } else if fibers_ok && !report.fibers.is_empty() && report.fibers.iter().all(|f| f.semistable) {
        report
            .warnings
            .push("declared non-semistable, but every listed fiber is reduced with only nodes".into());
    }

    if !ranges_ok {
        return Ok(report.finish());
    }

    let gb = 4 * (g - 1) * (b - 1);
    let mut derived = Vec::new();
    let e_from_fibers = fibers_ok.then(|| report.fibers.iter().map(|f| f.e_f).sum::<i64>());
    let e_f = match (surface.c2, e_from_fibers) {
        (Some(c2), Some(sum)) => {
            push_check(
                checks,
                "euler number from fibers",
                c2 - gb == sum,
                format!("e_f = c2 - 4(g-1)(b-1) = {}, sum of e_F = {sum}", c2 - gb),
            );
            c2 - gb
        }
        (Some(c2), None) => c2 - gb,
        (None, Some(sum)) => {
            derived.push("c2");
            sum
        }
        (None, None) => {
            push_check(checks, "relative invariants", false, "c2 is missing and the fiber data is unusable".into());
            return Ok(report.finish());
        }
    };
    let c2 = e_f + gb;
    let chi_o = 1 - q + p_g;
    let chi_f = chi_o - (g - 1) * (b - 1);
    let k_f_sq = match surface.c1_sq {
        Some(c1) => {
            let k = c1 - 2 * gb;
            push_check(
                checks,
                "noether",
                12 * chi_f == k + e_f,
                format!("12 chi_f = {}, K_f^2 + e_f = {}", 12 * chi_f, k + e_f),
            );
            k
        }
        None => {
            derived.push("c1_sq");
            12 * chi_f - e_f
        }
    };
    let c1_sq = k_f_sq + 2 * gb;
    let h11_computed = c2 - 2 + 4 * q - 2 * p_g;
    let h11 = match surface.h11 {
        Some(h) => {
            push_check(
                checks,
                "hodge: h11",
                h == h11_computed,
                format!("h11 = {h}, c2 - 2 + 4q - 2p_g = {h11_computed}"),
            );
            h
        }
        None => {
            derived.push("h11");
            h11_computed
        }
    };
    let q_f = q - b;
    let hodge_rhs = e_f + (g - q_f) * (2 * b - 2) + 2 * q_f * b + 2 - h11;
    push_check(
        checks,
        "hodge identity",
        2 * chi_f == hodge_rhs,
        format!("2 chi_f = {}, e_f + (g - q_f)(2b - 2) + 2 q_f b + 2 - h11 = {hodge_rhs}", 2 * chi_f),
    );
    report.relative = Some(RelativeInvariants {
        g,
        b,
        q,
        p_g,
        q_f,
        c1_sq,
        c2,
        chi_o,
        chi_f,
        k_f_sq,
        e_f,
        h11,
        h11_computed,
        derived,
    });

    if !fibers_ok {
        report.warnings.push("fiber data is inconsistent; balance and inequality audit skipped".into());
        return Ok(report.finish());
    }

    let singular: Vec<&FiberInvariants> = report.fibers.iter().filter(|f| f.e_f > 0).collect();
    let s1_fibers: Vec<&FiberInvariants> = singular.iter().copied().filter(|f| f.g_f < g).collect();
    let s = singular.len() as i64;
    let s1 = s1_fibers.len() as i64;
    let sum_ell: i64 = singular.iter().map(|f| f.ell - 1).sum();
    if model.trivial && s > 0 {
        push_check(checks, "trivial fibration", false, format!("declared trivial but {s} fibers are singular"));
    }
    report.counts = Some(SingularFiberCounts {
        s,
        s1,
        s1_fibers: s1_fibers.iter().map(|f| f.name.clone()).collect(),
        sum_ell_minus_one: sum_ell,
    });

    let base = (g - q_f) * (2 * b - 2 + s1);
    let genus_defect: i64 = s1_fibers.iter().map(|f| f.g_f - q_f).sum();
    let picard_excess = h11 - 2 * q_f * b - 2 - sum_ell;
    let multiplicity_excess: i64 = s1_fibers.iter().map(|f| f.n_bar).sum();
    let rhs = base - genus_defect - picard_excess + multiplicity_excess;
    report.balance = Some(Balance {
        lhs: 2 * chi_f,
        base,
        genus_defect,
        picard_excess,
        multiplicity_excess,
        rhs,
        residual: rhs - 2 * chi_f,
    });

    let min_fiber_genus = report.fibers.iter().map(|f| f.g_f).chain([g]).min().unwrap();
    for f in report.fibers.iter().filter(|f| f.g_f < q_f) {
        report.warnings.push(format!("{}: g(F) = {} is below q_f = {q_f}", f.name, f.g_f));
    }
    let nontrivial_semistable = model.semistable && !model.trivial;
    let weak_relation = if g >= 2 { Relation::LessThan } else { Relation::AtMost };
    report.rules = vec![
        RuleResult::new(
            "fiber-genus-bounds-relative-irregularity",
            "q_f <= g(F) for every fiber",
            true,
            Relation::AtMost,
            rat(q_f),
            rat(min_fiber_genus),
        ),
        RuleResult::new(
            "picard-number-bounds-components",
            "2 + sum_s (l_F - 1) <= h11",
            true,
            Relation::AtMost,
            rat(2 + sum_ell),
            rat(h11),
        ),
        RuleResult::new(
            "picard-number-bounds-irregularity",
            "2 q_f b + 2 + sum_s (l_F - 1) <= h11",
            true,
            Relation::AtMost,
            rat(2 * q_f * b + 2 + sum_ell),
            rat(h11),
        ),
        RuleResult::new(
            "arakelov-semistable-s1",
            "chi_f <= (g - q_f)/2 (2b - 2 + s1)",
            nontrivial_semistable,
            Relation::AtMost,
            rat(chi_f),
            half((g - q_f) * (2 * b - 2 + s1)),
        ),
        RuleResult::new(
            "arakelov-semistable-s",
            "chi_f <= (g - q_f)/2 (2b - 2 + s)",
            nontrivial_semistable,
            Relation::AtMost,
            rat(chi_f),
            half((g - q_f) * (2 * b - 2 + s)),
        ),
        RuleResult::new(
            "arakelov-semistable-weak",
            "chi_f < g/2 (2b - 2 + s) (<= when g = 1)",
            nontrivial_semistable,
            weak_relation,
            rat(chi_f),
            half(g * (2 * b - 2 + s)),
        ),
        RuleResult::new(
            "slope-lower-bound",
            "(4g - 4)/g chi_f <= K_f^2",
            opts.strict_extras && g >= 2,
            Relation::AtMost,
            Rational::new((4 * (g - 1) * chi_f).into(), g.max(1).into()),
            rat(k_f_sq),
        ),
        RuleResult::new(
            "canonical-class-bound",
            "K_f^2 < (2g - 2)(2b - 2 + s)",
            opts.strict_extras && g >= 2 && nontrivial_semistable,
            Relation::LessThan,
            rat(k_f_sq),
            rat((2 * g - 2) * (2 * b - 2 + s)),
        ),
        RuleResult::new(
            "arakelov-non-semistable",
            "chi_f <= (g - q_f)(b - 1 + s1)",
            !model.semistable,
            Relation::AtMost,
            rat(chi_f),
            rat((g - q_f) * (b - 1 + s1)),
        ),
    ];

    if b == 0 && nontrivial_semistable {
        let equality_case = s1 == 4;
        let genus_equals_q = s1_fibers.iter().all(|f| f.g_f == q);
        report.diagnosis = Some(RationalBaseDiagnosis {
            minimum: RuleResult::new("rational-base-s1-minimum", "4 <= s1", true, Relation::AtMost, rat(4), rat(s1)),
            equality_case,
            conditions: vec![
                Condition {
                    id: "no-holomorphic-2-forms",
                    statement: "p_g = 0 and g(F) = q on every fiber counted by s1",
                    required: equality_case,
                    holds: p_g == 0 && genus_equals_q,
                },
                Condition {
                    id: "picard-number-minimal",
                    statement: "h11 = 2 + sum_s (l_F - 1)",
                    required: equality_case,
                    holds: h11 == 2 + sum_ell,
                },
                Condition {
                    id: "irregularity-at-most-one",
                    statement: "q <= 1",
                    required: equality_case,
                    holds: q <= 1,
                },
            ],
            excess_lhs: half((g - q) * (s1 - 4)),
            excess_rhs: rat(p_g) + half(genus_defect) + half(h11 - 2 - sum_ell),
            excess_residual: half((g - q) * (s1 - 4)) - rat(p_g) - half(genus_defect) - half(h11 - 2 - sum_ell),
        });
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODAL: &str = r#"
name = "nodal"
fiber_genus = 2
base_genus = 0
semistable = true
trivial = false

[surface]
q = 1
p_g = 0
c1_sq = -3
c2 = 3
h11 = 5

[[fibers]]
components = [{ id = "C", geometric_genus = 1 }]
singularities = [{ at = ["C"], kind = "node" }]
[[fibers]]
components = [{ id = "C", geometric_genus = 1 }]
singularities = [{ at = ["C"], kind = "node" }]
[[fibers]]
components = [{ id = "C", geometric_genus = 1 }]
singularities = [{ at = ["C"], kind = "node" }]
[[fibers]]
components = [{ id = "C", geometric_genus = 1 }]
singularities = [{ at = ["C"], kind = "node" }]
[[fibers]]
components = [{ id = "A", geometric_genus = 1 }, { id = "B", geometric_genus = 1 }]
singularities = [{ at = ["A", "B"], kind = "node" }]
[[fibers]]
components = [{ id = "A", geometric_genus = 1 }, { id = "B", geometric_genus = 1 }]
singularities = [{ at = ["A", "B"], kind = "node" }]
[[fibers]]
components = [{ id = "A", geometric_genus = 1 }, { id = "B", geometric_genus = 1 }]
singularities = [{ at = ["A", "B"], kind = "node" }]
"#;

    fn run(text: &str, strict: bool) -> AuditReport {
        let m = FibrationModel::from_toml(text).unwrap();
        audit(&m, &AuditOptions { strict_extras: strict, ..Default::default() }).unwrap()
    }

    #[test]
    fn nodal_genus_two_example() {
        let r = run(NODAL, true);
        assert!(r.consistent, "{:#?}", r.failed_checks().collect::<Vec<_>>());
        let rel = r.relative.as_ref().unwrap();
        assert_eq!((rel.chi_f, rel.k_f_sq, rel.e_f, rel.h11), (1, 5, 7, 5));
        let counts = r.counts.as_ref().unwrap();
        assert_eq!((counts.s, counts.s1), (7, 4));
        assert_eq!(r.balance.as_ref().unwrap().residual, 0);
        let margin = |id: &str| r.rule(id).unwrap().margin.clone();
        assert_eq!(margin("arakelov-semistable-s1"), rat(0));
        assert_eq!(margin("arakelov-semistable-s"), half(3));
        assert_eq!(margin("arakelov-semistable-weak"), rat(4));
        assert_eq!(margin("canonical-class-bound"), rat(5));
        assert_eq!(margin("slope-lower-bound"), rat(3));
        assert_eq!(margin("picard-number-bounds-components"), rat(0));
        let d = r.diagnosis.as_ref().unwrap();
        assert!(d.equality_case && d.holds());
    }

    #[test]
    fn extras_are_off_by_default() {
        let r = run(NODAL, false);
        assert_eq!(r.rule("slope-lower-bound").unwrap().verdict, Verdict::NotApplicable);
        assert_eq!(r.rule("arakelov-non-semistable").unwrap().verdict, Verdict::NotApplicable);
    }

    #[test]
    fn wrong_h11_breaks_the_balance() {
        let r = run(&NODAL.replace("h11 = 5", "h11 = 6"), false);
        assert!(!r.consistent);
        assert_eq!(r.balance.as_ref().unwrap().residual, -1);
    }

    #[test]
    fn negative_geometric_genus_is_a_range_failure() {
        let r = run(&NODAL.replace("p_g = 0", "p_g = -1"), false);
        assert!(!r.consistent);
        assert!(r.failed_checks().any(|c| c.id == "range: geometric genus"));
    }

    #[test]
    fn missing_fiber_source_is_structural() {
        let bad = NODAL.replacen("kind = \"node\" }]", "}]", 1);
        let m = FibrationModel::from_toml(&bad).unwrap();
        assert!(matches!(audit(&m, &AuditOptions::default()), Err(AuditError::Fiber(_))));
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&half(3)), "3/2");
        assert_eq!(format_rational(&half(-4)), "-2");
    }
}
