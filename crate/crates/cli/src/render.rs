//! Plain-text output. Numbers carry 15 significant digits.

use std::fmt::Write;

use crate::record::{ResultRecord, Status};

/// Formats like C's `%.15g`.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sig15).unwrap_or_else(|| "-".into())
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| sig15(x)).collect::<Vec<_>>().join(",")
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Error => "error",
    }
}

/// The one-line reason printed to stderr when a record carries an error.
pub fn error_line(r: &ResultRecord) -> Option<String> {
    let e = r.error.as_ref()?;
    let stage = e.stage.as_deref().map(|s| format!(" stage={s}")).unwrap_or_default();
    Some(format!("error kind={}{stage}: {}", e.kind, e.message))
}

pub fn render(r: &ResultRecord) -> String {
    let mut out = String::new();
    let mut row = |k: &str, v: String| {
        let _ = writeln!(out, "{k:<18}{v}");
    };
    if let Some(v) = r.value {
        row("value", sig15(v));
    }
    if let Some(v) = &r.exact_value {
        row("exact", v.clone());
    }
    if let Some(rep) = &r.representation {
        row("representation", rep.clone());
    }
    if let Some(t) = &r.transform {
        row("transform", t.kind.clone());
        row("params", list(&t.params));
        if let Some(p) = t.prefactor {
            row("prefactor", sig15(p));
        }
        if let Some(p) = t.power_exponent {
            row("power exponent", sig15(p));
        }
        row("excess", opt(t.excess));
    }
    let d = &r.diagnostics;
    if let Some(n) = d.terms_used {
        row("terms used", n.to_string());
    }
    if let Some(b) = d.tail_bound {
        row("tail bound", sig15(b));
    }
    if let Some(c) = d.tail_corrected {
        row("tail corrected", c.to_string());
    }
    if r.transform.is_none() {
        if let Some(s) = d.excess {
            row("excess", sig15(s));
        }
    }
    if let Some(q) = d.quadrature_error {
        row("quadrature error", sig15(q));
    }

    if !r.checks.is_empty() {
        let _ = writeln!(
            out,
            "{:<11}{:<40}{:<24}{:<24}{:<12}result",
            "identity", "params", "lhs", "rhs", "discrepancy"
        );
        for c in &r.checks {
            let params = if c.exact_params.is_empty() {
                list(&c.params)
            } else {
                c.exact_params.join(",")
            };
            let params = match (c.x, c.n) {
                (Some(x), _) => format!("{params} x={}", sig15(x)),
                (_, Some(n)) => format!("n={n} {params}"),
                _ => params,
            };
            let lhs = c.lhs_exact.clone().unwrap_or_else(|| opt(c.lhs));
            let rhs = c.rhs_exact.clone().unwrap_or_else(|| opt(c.rhs));
            let disc = c
                .rel_discrepancy
                .or(c.abs_discrepancy)
                .map(|x| format!("{x:.2e}"))
                .unwrap_or_else(|| "-".into());
            let result = match &c.error {
                Some(e) => format!("error: {e}"),
                None if c.pass => "pass".into(),
                None => "fail".into(),
            };
            let _ = writeln!(out, "{:<11}{params:<40}{lhs:<24}{rhs:<24}{disc:<12}{result}", c.identity);
        }
    }

    if !r.stage_values.is_empty() {
        let _ = writeln!(out, "{:<4}{:<30}{:<24}{:<12}accurate", "#", "stage", "value", "error");
        for (i, s) in r.stage_values.iter().enumerate() {
            let err = s
                .error_estimate
                .map(|e| format!("{e:.2e}"))
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "{:<4}{:<30}{:<24}{err:<12}{}", i + 1, s.label, opt(s.value), s.accurate);
        }
    }
    let mut row = |k: &str, v: String| {
        let _ = writeln!(out, "{k:<18}{v}");
    };
    if let Some(m) = r.max_discrepancy {
        row("max discrepancy", format!("{m:.3e}"));
    }
    row("status", status(r.status).into());
    out
}
