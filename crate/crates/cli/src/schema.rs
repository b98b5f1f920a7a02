//! JSON document forms for reports and the command-line event syntax.
//!
//! Every probability is carried as an exact fraction string; the bounds
//! document round-trips back into a `BoundsTable` without loss.

use ivbounds::rational::format_rational;
use ivbounds::{Event, Interval, OutcomeCell};
use serde::{Deserialize, Serialize};

#[cfg(test)]
use ivbounds::closed_form::{BoundsTable, EventBounds};
#[cfg(test)]
use ivbounds::rational::parse_rational;

/// Parses the command-line event syntax: comma-separated two-digit cells
/// (`y0y1`), e.g. `01,10`; `none` and `all` name the empty and full events.
pub fn parse_event_arg(text: &str) -> Result<Event, String> {
    let s = text.trim();
    match s {
        "none" | "{}" | "" => return Ok(Event::EMPTY),
        "all" => return Ok(Event::FULL),
        _ => {}
    }
    let mut cells = Vec::new();
    for token in s.split(',') {
        let token = token.trim();
        let bits: Vec<char> = token.chars().collect();
        if bits.len() != 2 || !bits.iter().all(|c| *c == '0' || *c == '1') {
            return Err(format!(
                "bad event cell {token:?}: expected two bits y0y1, e.g. 01"
            ));
        }
        cells.push(OutcomeCell::new(bits[0] == '1', bits[1] == '1'));
    }
    Ok(Event::from_cells(cells))
}

/// Compact form of an event for display, matching the input syntax.
pub fn event_arg(event: Event) -> String {
    if event.is_empty() {
        return "none".into();
    }
    if event == Event::FULL {
        return "all".into();
    }
    event
        .cells()
        .map(|c| format!("{}{}", u8::from(c.y0), u8::from(c.y1)))
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct IntervalDoc {
    pub lo: String,
    pub hi: String,
}

impl IntervalDoc {
    pub fn of(interval: &Interval) -> Self {
        IntervalDoc { lo: format_rational(interval.lo()), hi: format_rational(interval.hi()) }
    }
}

/// One event's identified intervals. `E`/`EM` are optional so that LP-only
/// output can omit a side whose model is refuted by the data.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EventBoundsDoc {
    pub event: Vec<[u8; 2]>,
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    pub exogeneity_only: Option<IntervalDoc>,
    #[serde(rename = "EM", skip_serializing_if = "Option::is_none")]
    pub with_monotonicity: Option<IntervalDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict: Option<bool>,
}
