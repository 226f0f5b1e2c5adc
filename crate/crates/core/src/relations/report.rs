//! Flat serialization of reports: a fixed CSV column set and a float format
//! that round-trips f64 exactly.

use super::ComplementarityReport;

/// 17 significant digits; parses back to the identical f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

const COLUMNS: [&str; 16] = [
    "relation",
    "n",
    "lhs",
    "rhs",
    "residual",
    "satisfied",
    "is_identity",
    "ps",
    "pd2",
    "v2",
    "x2",
    "m_a",
    "e2",
    "purity_a",
    "purity_d",
    "purity_ab",
];

/// Column names of the per-report CSV fragment, in output order.
pub fn csv_columns() -> &'static [&'static str] {
    &COLUMNS
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// Field values matching [`csv_columns`]; absent components are empty.
pub fn csv_fields(r: &ComplementarityReport) -> Vec<String> {
    let c = &r.components;
    vec![
        r.relation.to_string(),
        r.n.to_string(),
        fmt_float(r.lhs),
        fmt_float(r.rhs),
        fmt_float(r.residual),
        r.satisfied.to_string(),
        r.is_identity.to_string(),
        opt(c.ps),
        opt(c.pd2),
        opt(c.v2),
        opt(c.x2),
        opt(c.m_a),
        opt(c.e2),
        opt(c.purity_a),
        opt(c.purity_d),
        opt(c.purity_ab),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for &x in &[
            0.1,
            1.0 / 3.0,
            8.0 / 729.0,
            -1.2345678901234567e-9,
            0.0,
            1.0,
        ] {
            let s = fmt_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn fields_align_with_columns() {
        use crate::interferometer::DetectorConfig;
        use crate::relations::{eval_th1, InputState, PdMode};
        use crate::states::werner;

        let r = eval_th1(
            &InputState::mixed(werner(0.5).unwrap()),
            &DetectorConfig::uniform_overlap(2, 0.5).unwrap(),
            PdMode::UpperBound,
        )
        .unwrap();
        let fields = csv_fields(&r);
        assert_eq!(fields.len(), csv_columns().len());
        assert_eq!(fields[0], "th1");
        assert_eq!(fields[1], "2");
        // e2 not computed by th1
        assert!(fields[12].is_empty());
    }
}
