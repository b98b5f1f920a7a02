//! Plain-text rendering: aligned tables with exact fractions. Decimal
//! annotations are opt-in and explicitly approximate.

use ivbounds::analysis::{ConsistencyReport, ContentReport};
use ivbounds::closed_form::EventBounds;
use ivbounds::rational::{approx_decimal, format_rational, Rational};
use ivbounds::Interval;

use crate::schema::event_arg;

pub fn margin_labels() -> [&'static str; 4] {
    [
        "P[0,1|1] - P[0,1|0]",
        "P[1,1|1] - P[1,1|0]",
        "P[0,0|0] - P[0,0|1]",
        "P[1,0|0] - P[1,0|1]",
    ]
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

pub fn render_check(report: &ConsistencyReport) -> String {
    let mut out = String::new();
    for (label, value) in margin_labels().iter().zip(&report.condition_margins) {
        out.push_str(&format!("{label} = {}\n", format_rational(value)));
    }
    out.push_str(&format!("em-consistent:            {}\n", yes_no(report.em_consistent)));
    out.push_str(&format!("e-feasible:               {}\n", yes_no(report.e_feasible)));
    out.push_str(&format!(
        "two-sided noncompliance:  {}\n",
        yes_no(report.two_sided_noncompliance)
    ));
    out
}

fn interval_text(interval: &Interval, decimal: bool) -> String {
    let base = format!(
        "[{}, {}]",
        format_rational(interval.lo()),
        format_rational(interval.hi())
    );
    if decimal {
        format!(
            "{base} (~{}, ~{})",
            approx_decimal(interval.lo(), 4),
            approx_decimal(interval.hi(), 4)
        )
    } else {
        base
    }
}

pub fn render_bounds_rows(rows: &[RenderableBounds], decimal: bool) -> String {
    let mut table = vec![[
        "event".to_string(),
        "E".to_string(),
        "EM".to_string(),
        "strict".to_string(),
    ]];
    for row in rows {
        let fmt = |iv: &Option<Interval>| match iv {
            Some(iv) => interval_text(iv, decimal),
            None => "(refuted)".to_string(),
        };
        table.push([
            event_arg(row.event),
            fmt(&row.exogeneity_only),
            fmt(&row.with_monotonicity),
            if row.strict { "*".into() } else { String::new() },
        ]);
    }
    align(&table)
}

/// A bounds row that may be missing one side (LP-only mode on refuted models).
pub struct RenderableBounds {
    pub event: ivbounds::Event,
    pub exogeneity_only: Option<Interval>,
    pub with_monotonicity: Option<Interval>,
    pub strict: bool,
}

impl From<&EventBounds> for RenderableBounds {
    fn from(bounds: &EventBounds) -> Self {
        RenderableBounds {
            event: bounds.event,
            exogeneity_only: Some(bounds.exogeneity_only.clone()),
            with_monotonicity: Some(bounds.with_monotonicity.clone()),
            strict: bounds.strict,
        }
    }
}

pub fn render_content(report: &ContentReport, two_sided_noncompliance: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "identifying content: {}\n",
        yes_no(report.verdict)
    ));
    if !two_sided_noncompliance {
        out.push_str("no two-sided noncompliance: the data already imply monotonicity\n");
    }
    if report.witnesses.is_empty() {
        out.push_str("witness pairs: none\n");
    } else {
        out.push_str("witness pairs (i, j):\n");
        for w in &report.witnesses {
            out.push_str(&format!(
                "  (i={}, j={}): min{{P[{},0|1], P[{},1|0]}} = {} > 0 and mass sum {} < 1\n",
                u8::from(w.i),
                u8::from(w.j),
                u8::from(w.i),
                u8::from(w.j),
                format_rational(&w.noncompliance_mass),
                format_rational(&w.triple_mass),
            ));
        }
    }
    out
}

pub fn render_dual_vertices(
    vertices: &[ivbounds::lp::DualVertex],
    extremum: &Rational,
    primal: &Rational,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} dual vertices\n", vertices.len()));
    for (k, vertex) in vertices.iter().enumerate() {
        let u: Vec<String> = vertex.u.iter().map(format_rational).collect();
        out.push_str(&format!(
            "  #{k}: objective {} at u = [{}]\n",
            format_rational(&vertex.objective_value),
            u.join(", ")
        ));
    }
    out.push_str(&format!("dual extremum: {}\n", format_rational(extremum)));
    out.push_str(&format!("primal optimum: {}\n", format_rational(primal)));
    out
}

/// Pads every column to its widest cell, two spaces between columns.
fn align<const N: usize>(rows: &[[String; N]]) -> String {
    let mut widths = [0usize; N];
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (cell, width) in row.iter().zip(widths) {
            if !line.is_empty() {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:<width$}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
