//! Report rendering: a human section followed by `key=value` machine lines.

use std::fmt::Write;

use crate::classify::{Answer, Classification, GroupDescriptor, Verdict};
use crate::spgroup::{Example, SpElement, SpGroupSpec, StabCase, StabReport};

use super::parse::Printed;

fn write_certificate(out: &mut String, title: &str, v: &Verdict) {
    let _ = writeln!(out, "## {title}: {}", v.answer);
    for (i, s) in v.certificate.iter().enumerate() {
        let premises = if s.premises.is_empty() {
            String::new()
        } else {
            let ps: Vec<String> = s.premises.iter().map(usize::to_string).collect();
            format!(" <- {}", ps.join(","))
        };
        let evidence = s.evidence.to_string();
        let evidence = if evidence.is_empty() {
            evidence
        } else {
            format!(" ({evidence})")
        };
        let _ = writeln!(
            out,
            "  {i}. [{}] {}: {}{premises}{evidence}",
            s.rule.tag(),
            s.subject,
            s.conclusion
        );
    }
    if let Some(r) = &v.reason {
        let _ = writeln!(out, "  reason: {r}");
    }
}

pub fn classification_report(d: &GroupDescriptor, c: &Classification) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# descriptor\n{}", Printed(d));
    let _ = writeln!(out, "# verdicts");
    for (name, v) in verdicts(c) {
        let _ = writeln!(out, "{name:<9}{}", v.answer);
    }
    let _ = writeln!(out, "{:<9}{}", "bound", bound_text(c.bound));
    let _ = writeln!(out, "# certificates");
    for (name, v) in verdicts(c) {
        write_certificate(&mut out, name, v);
    }
    let _ = writeln!(out, "# machine");
    for (name, v) in verdicts(c) {
        let _ = writeln!(out, "verdict.{name}={}", v.answer.keyword());
    }
    let _ = writeln!(out, "bound={}", bound_text(c.bound));
    for (i, s) in c.group.certificate.iter().enumerate() {
        let _ = writeln!(out, "rule.{i}={}", s.rule.tag());
    }
    if let Some(r) = &c.group.reason {
        let _ = writeln!(out, "reason={r}");
    }
    out
}

fn verdicts(c: &Classification) -> [(&'static str, &Verdict); 4] {
    [
        ("group", &c.group),
        ("torsion", &c.torsion),
        ("quotient", &c.quotient),
        ("uniform", &c.uniform),
    ]
}

fn bound_text(b: Option<u64>) -> String {
    b.map_or_else(|| "none".to_string(), |b| b.to_string())
}

/// Expected-vs-computed table for a worked example; the flag is whether every row matches.
pub fn example_report(ex: Example, c: &Classification) -> (String, bool) {
    let mut out = String::new();
    let _ = writeln!(out, "# example {}\n{}", ex.id(), Printed(&ex.descriptor()));
    let _ = writeln!(
        out,
        "{:<9}{:<9}{:<9}status",
        "verdict", "expected", "computed"
    );
    let mut all = true;
    let mut machine = String::new();
    for &(key, want) in ex.expected() {
        let got = verdicts(c)
            .into_iter()
            .find(|(k, _)| *k == key)
            .map_or(Answer::Unknown, |(_, v)| v.answer);
        let ok = got == want;
        all &= ok;
        let status = if ok { "match" } else { "MISMATCH" };
        let _ = writeln!(
            out,
            "{key:<9}{:<9}{:<9}{status}",
            want.to_string(),
            got.to_string()
        );
        let _ = writeln!(machine, "verdict.{key}={}", got.keyword());
    }
    let _ = writeln!(out, "# machine\n{machine}example={}\nmatch={all}", ex.id());
    (out, all)
}

pub fn chain_report(group: &str, matrix: &str, sizes: &[String], stab: u32) -> String {
    format!(
        "group {group}\nmatrix {matrix}\nchain {}\nstab {stab}\n# machine\nchain={}\nstab={stab}\n",
        sizes.join(","),
        sizes.join(",")
    )
}

pub fn spstab_report(spec: &SpGroupSpec, alpha: &SpElement, r: &StabReport) -> String {
    let case = match r.case {
        StabCase::TorsionImage => "torsion-image",
        StabCase::EventualAutomorphism => "eventual-automorphism",
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "spec {spec}\nalpha {alpha}\ncase {case}\nindex {}",
        r.index
    );
    for (i, (v, s)) in &r.per_prime {
        let _ = writeln!(
            out,
            "  i={i} p={} e={} valuation={v} step={s}",
            spec.prime(*i),
            spec.exponent(*i)
        );
    }
    let default_step = r.step_at(usize::MAX);
    let _ = writeln!(out, "  other components step={default_step}");
    let _ = writeln!(out, "# machine\ncase={case}\nindex={}", r.index);
    for (i, (_, s)) in &r.per_prime {
        let _ = writeln!(out, "step.{i}={s}");
    }
    out
}
