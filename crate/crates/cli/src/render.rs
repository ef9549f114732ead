//! Text and CSV rendering of reports.

use std::fmt::Write;

use latcell::verify::{EqualityVerdict, ProofReport, Relation};
use latcell::{Rat, RatVec};

pub const REPORT_COLUMNS: [&str; 8] = ["name", "n", "R2", "volume", "moment", "ratio", "ratio_decimal", "verdict"];

/// A CSV table with a header row.
pub fn csv<I>(header: &[&str], rows: I) -> anyhow::Result<String>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn vec(v: &RatVec) -> String {
    let parts: Vec<String> = v.iter().map(Rat::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn report_row(r: &ProofReport) -> Vec<String> {
    vec![
        r.lattice.name.clone(),
        r.lattice.n.to_string(),
        r.r_sq.to_string(),
        r.volume.to_string(),
        r.second_moment.to_string(),
        r.ratio.to_string(),
        r.ratio.to_decimal_string(12),
        r.verdict.label().to_string(),
    ]
}

pub fn text(r: &ProofReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "lattice {} (n = {})", r.lattice.name, r.lattice.n);
    let _ = writeln!(s, "deep hole t = {}", vec(&r.deep_hole));
    let _ = writeln!(s, "R² = {}  |P| = {}  ∫ = {}", r.r_sq, r.volume, r.second_moment);
    let _ = writeln!(s, "ratio = {} ({})  gap = {}", r.ratio, r.ratio.to_decimal_string(12), r.gap);
    let _ = writeln!(s, "pieces k = {}  half-lattice pieces = {}", r.k, r.half_lattice_pieces);
    let passed = r.records.iter().filter(|x| x.pass).count();
    let _ = writeln!(s, "records: {passed}/{} pass", r.records.len());
    for rec in &r.records {
        let rel = match rec.relation {
            Relation::Equal => "=",
            Relation::AtLeast => "≥",
        };
        let _ = writeln!(
            s,
            "  {:<6} {:<28} {} {rel} {}  {}",
            format!("{:?}", rec.eq),
            rec.what,
            rec.lhs,
            rec.rhs,
            if rec.pass { "ok" } else { "FAIL" }
        );
    }
    match &r.verdict {
        EqualityVerdict::Equality { semi_axes_sq, k, .. } => {
            let axes: Vec<String> = semi_axes_sq.iter().map(Rat::to_string).collect();
            let _ = writeln!(s, "verdict: Equality (box with a² = [{}], k = {k})", axes.join(", "));
        }
        EqualityVerdict::Strict { gap, first_failed_check } => {
            let _ = writeln!(s, "verdict: Strict (gap {gap}, first failed check {first_failed_check})");
        }
    }
    s
}
