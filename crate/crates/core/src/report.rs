//! Plain-text tables and JSON for the analysis results.

use std::fmt::Write;

use serde::Serialize;

use crate::audit::{format_rational, AuditReport, Verdict};
use crate::cover::CoverReport;
use crate::fiber::FiberInvariants;
use crate::germ::{GermAnalysis, GermResolution, PointKind, ResolutionNode};

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize")
}

fn seq(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// The first `left` columns left-aligned, the rest right-aligned.
fn table_aligned(header: &[&str], rows: &[Vec<String>], left: usize) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, cell) in r.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut out = String::new();
        for (i, cell) in cells.iter().enumerate() {
            let pad = widths[i] - cell.chars().count();
            if i > 0 {
                out.push_str("  ");
            }
            if i < left {
                out.push_str(cell);
                out.extend(std::iter::repeat_n(' ', pad));
            } else {
                out.extend(std::iter::repeat_n(' ', pad));
                out.push_str(cell);
            }
        }
        out.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    table_aligned(header, rows, 1)
}

pub fn germ_text(a: &GermAnalysis) -> String {
    let inv = &a.invariants;
    let mut out = format!("germ: {}\n", a.equation);
    if a.reduced_from_input {
        out.push_str("note: input had repeated factors; analysed its squarefree part\n");
    }
    let rows = vec![
        vec!["multiplicity m".into(), inv.m.to_string()],
        vec!["milnor number mu".into(), inv.mu.to_string()],
        vec!["mu (jacobian oracle)".into(), a.mu_oracle.to_string()],
        vec!["delta".into(), inv.delta.to_string()],
        vec!["branches r".into(), inv.branches.to_string()],
        vec!["partial resolution m_i".into(), seq(&inv.m_sequence)],
        vec!["blow-ups".into(), inv.blowup_count.to_string()],
        vec!["final nodes".into(), inv.final_nodes.to_string()],
    ];
    out.push_str(&table(&["invariant", "value"], &rows));
    out
}

fn kind_name(k: PointKind) -> &'static str {
    match k {
        PointKind::Smooth => "smooth",
        PointKind::Node => "node",
        PointKind::Singular => "singular",
    }
}

fn node_text(n: &ResolutionNode, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    let cluster = if n.cluster_degree > 1 { format!(", cluster of {}", n.cluster_degree) } else { String::new() };
    let center = if n.is_blowup_center { ", blown up" } else { "" };
    let _ = writeln!(out, "{indent}{}: m = {} ({}{cluster}{center})", n.center, n.multiplicity, kind_name(n.kind));
    for c in &n.children {
        node_text(c, depth + 1, out);
    }
}

pub fn tree_text(t: &GermResolution) -> String {
    let mut out = String::new();
    node_text(&t.root, 0, &mut out);
    let _ = writeln!(
        out,
        "mu = {}, delta = {}, branches = {}, depth = {}",
        t.milnor(),
        t.delta(),
        t.branches(),
        t.depth()
    );
    out
}

pub fn fibers_text(fibers: &[FiberInvariants]) -> String {
    let header = [
        "fiber", "l", "g(F)", "p_a", "N_F", "mu_F", "e_F", "m_i", "N_bar", "mu_bar", "alpha", "chi_top", "semistable",
    ];
    let rows: Vec<Vec<String>> = fibers
        .iter()
        .map(|f| {
            vec![
                f.name.clone(),
                f.ell.to_string(),
                f.g_f.to_string(),
                f.pa_red.to_string(),
                f.n_f.to_string(),
                f.mu_f.to_string(),
                f.e_f.to_string(),
                seq(&f.m_sequence_all),
                f.n_bar.to_string(),
                f.mu_bar.to_string(),
                f.alpha.to_string(),
                f.chi_top.to_string(),
                if f.semistable { "yes".into() } else { "no".into() },
            ]
        })
        .collect();
    table(&header, &rows)
}

pub fn cover_text(c: &CoverReport) -> String {
    let mut out = String::from("double cover\n");
    let rows = vec![
        vec!["basis".into(), c.lattice.basis_labels.join(", ")],
        vec!["chi(O_W)".into(), c.lattice.chi_o.to_string()],
        vec!["K_W^2".into(), c.kw_sq.to_string()],
        vec!["L^2".into(), c.l_sq.to_string()],
        vec!["L.K_W".into(), c.l_dot_k.to_string()],
        vec!["k values".into(), format!("{:?}", c.k_list)],
        vec!["chi(O_S)".into(), c.invariants.chi_o.to_string()],
        vec!["K_S^2".into(), c.invariants.k_sq.to_string()],
        vec!["e(S)".into(), c.invariants.e.to_string()],
    ];
    out.push_str(&table(&["quantity", "value"], &rows));
    out
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::DataInconsistent => "DATA INCONSISTENT",
        Verdict::NotApplicable => "n/a",
    }
}

pub fn audit_text(r: &AuditReport) -> String {
    let mut out = format!("fibration: {}\n", r.name);
    if let Some(c) = &r.cover {
        out.push('\n');
        out.push_str(&cover_text(c));
    }
    if let Some(rel) = &r.relative {
        out.push('\n');
        let derived = |key: &str| if rel.derived.contains(&key) { " (derived)" } else { "" };
        let rows = vec![
            vec!["g".into(), rel.g.to_string()],
            vec!["b".into(), rel.b.to_string()],
            vec!["q".into(), rel.q.to_string()],
            vec!["p_g".into(), rel.p_g.to_string()],
            vec!["q_f".into(), rel.q_f.to_string()],
            vec!["c1^2".into(), format!("{}{}", rel.c1_sq, derived("c1_sq"))],
            vec!["c2".into(), format!("{}{}", rel.c2, derived("c2"))],
            vec!["chi(O_S)".into(), rel.chi_o.to_string()],
            vec!["chi_f".into(), rel.chi_f.to_string()],
            vec!["K_f^2".into(), rel.k_f_sq.to_string()],
            vec!["e_f".into(), rel.e_f.to_string()],
            vec!["h11".into(), format!("{}{}", rel.h11, derived("h11"))],
        ];
        out.push_str(&table(&["invariant", "value"], &rows));
    }
    if !r.fibers.is_empty() {
        out.push('\n');
        out.push_str(&fibers_text(&r.fibers));
    }
    if let Some(c) = &r.counts {
        let _ = writeln!(
            out,
            "\ns = {}, s1 = {}, sum (l_F - 1) = {}",
            c.s, c.s1, c.sum_ell_minus_one
        );
    }
    if let Some(b) = &r.balance {
        let _ = writeln!(
            out,
            "balance: 2 chi_f = {} ; (g - q_f)(2b - 2 + s1) = {}, genus defect = {}, picard excess = {}, multiplicity excess = {} ; rhs = {} ; residual = {}",
            b.lhs, b.base, b.genus_defect, b.picard_excess, b.multiplicity_excess, b.rhs, b.residual
        );
    }
    if !r.rules.is_empty() {
        out.push('\n');
        let rows: Vec<Vec<String>> = r
            .rules
            .iter()
            .map(|rule| {
                vec![
                    rule.id.to_string(),
                    rule.statement.to_string(),
                    format_rational(&rule.lhs),
                    rule.relation.symbol().to_string(),
                    format_rational(&rule.rhs),
                    format_rational(&rule.margin),
                    verdict_name(rule.verdict).to_string(),
                ]
            })
            .collect();
        out.push_str(&table_aligned(&["rule", "statement", "lhs", "", "rhs", "margin", "verdict"], &rows, 2));
    }
    if let Some(d) = &r.diagnosis {
        let _ = writeln!(
            out,
            "\nrational base: s1 = {} (at least 4: {})",
            d.minimum.rhs,
            verdict_name(d.minimum.verdict)
        );
        for c in &d.conditions {
            let need = if c.required { "required" } else { "not required" };
            let _ = writeln!(out, "  {} [{need}]: {}", c.statement, if c.holds { "holds" } else { "fails" });
        }
        let _ = writeln!(
            out,
            "  excess identity: {} = {} (residual {})",
            format_rational(&d.excess_lhs),
            format_rational(&d.excess_rhs),
            format_rational(&d.excess_residual)
        );
    }
    let failed: Vec<_> = r.failed_checks().collect();
    if !failed.is_empty() {
        out.push_str("\nfailed checks:\n");
        for c in failed {
            let _ = writeln!(out, "  {}: {}", c.id, c.detail);
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(out, "\nresult: {}", if r.consistent { "consistent" } else { "DATA INCONSISTENT" });
    out
}

/// Margin of one rule in a corpus summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleMargin {
    pub rule: String,
    /// `None` when the rule does not apply.
    pub margin: Option<String>,
    pub verdict: Verdict,
}

/// One line of a corpus run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub file: String,
    pub name: Option<String>,
    pub status: CorpusStatus,
    pub detail: Vec<String>,
    pub margins: Vec<RuleMargin>,
}

impl CorpusEntry {
    pub fn from_audit(file: &str, r: &AuditReport) -> Self {
        let mut detail: Vec<String> = r.failed_checks().map(|c| format!("{}: {}", c.id, c.detail)).collect();
        if let Some(b) = r.balance.as_ref().filter(|b| b.residual != 0) {
            detail.push(format!("balance residual {}", b.residual));
        }
        detail.extend(
            r.rules
                .iter()
                .filter(|rule| rule.verdict == Verdict::DataInconsistent)
                .map(|rule| format!("{} margin {}", rule.id, format_rational(&rule.margin))),
        );
        if let Some(d) = r.diagnosis.as_ref().filter(|d| !d.holds()) {
            detail.push(format!("rational-base diagnosis fails (s1 = {})", d.minimum.rhs));
        }
        CorpusEntry {
            file: file.into(),
            name: Some(r.name.clone()),
            status: if r.consistent { CorpusStatus::Consistent } else { CorpusStatus::Inconsistent },
            detail,
            margins: r
                .rules
                .iter()
                .map(|rule| RuleMargin {
                    rule: rule.id.into(),
                    margin: rule.applicable.then(|| format_rational(&rule.margin)),
                    verdict: rule.verdict,
                })
                .collect(),
        }
    }

    pub fn invalid(file: &str, message: String) -> Self {
        CorpusEntry { file: file.into(), name: None, status: CorpusStatus::Invalid, detail: vec![message], margins: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusStatus {
    Consistent,
    Inconsistent,
    Invalid,
}

/// 2 if any file is inconsistent, else 1 if any is invalid, else 0.
pub fn corpus_exit_code(entries: &[CorpusEntry]) -> i32 {
    if entries.iter().any(|e| e.status == CorpusStatus::Inconsistent) {
        2
    } else if entries.iter().any(|e| e.status == CorpusStatus::Invalid) {
        1
    } else {
        0
    }
}

pub fn corpus_text(entries: &[CorpusEntry]) -> String {
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            let status = match e.status {
                CorpusStatus::Consistent => "consistent",
                CorpusStatus::Inconsistent => "DATA INCONSISTENT",
                CorpusStatus::Invalid => "invalid input",
            };
            vec![e.file.clone(), e.name.clone().unwrap_or_default(), status.into(), e.detail.join("; ")]
        })
        .collect();
    let passed = entries.iter().filter(|e| e.status == CorpusStatus::Consistent).count();
    let mut out = table_aligned(&["file", "name", "status", "detail"], &rows, 4);
    let _ = writeln!(out, "
{passed} of {} files consistent", entries.len());
    let mut rules: Vec<&str> = Vec::new();
    for e in entries {
        for m in e.margins.iter().filter(|m| m.margin.is_some()) {
            if !rules.contains(&m.rule.as_str()) {
                rules.push(&m.rule);
            }
        }
    }
    let order: Vec<&str> = entries.iter().flat_map(|e| e.margins.iter().map(|m| m.rule.as_str())).collect();
    rules.sort_by_key(|r| order.iter().position(|o| o == r));
    if !rules.is_empty() {
        let mut header = vec!["margin"];
        header.extend(entries.iter().map(|e| e.file.as_str()));
        let rows: Vec<Vec<String>> = rules
            .iter()
            .map(|rule| {
                let mut row = vec![rule.to_string()];
                row.extend(entries.iter().map(|e| {
                    e.margins
                        .iter()
                        .find(|m| m.rule == *rule)
                        .and_then(|m| m.margin.clone())
                        .unwrap_or_else(|| "-".to_string())
                }));
                row
            })
            .collect();
        out.push('\n');
        out.push_str(&table(&header, &rows));
    }
    out
}
