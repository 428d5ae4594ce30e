//! Maximal-rate comparison between the line and user-supplied curves.

use crate::curve::HyperellipticCurve;
use crate::field::Field;
use crate::pir::{genus0_max_l, select_gammas, servers_needed, Rate};

pub const SWEEP_CSV_HEADER: &str = "xt,construction,genus,L,N,rate_num,rate_den,rate";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub xt: usize,
    pub construction: String,
    pub genus: usize,
    /// `L = N = 0` marks an infeasible configuration.
    pub l: usize,
    pub n: usize,
}

impl SweepRow {
    pub fn rate(&self) -> Rate {
        Rate {
            l: self.l,
            n: self.n,
        }
    }

    pub fn csv_row(&self) -> String {
        let (num, den) = self.rate().reduced();
        format!(
            "{},{},{},{},{},{},{},{:.6}",
            self.xt,
            self.construction,
            self.genus,
            self.l,
            self.n,
            num,
            den,
            self.rate().value()
        )
    }
}

/// One row for the line and one per curve, for each `X = T` in `xts`.
pub fn rate_sweep(
    field: &Field,
    curves: &[(String, HyperellipticCurve)],
    xts: impl IntoIterator<Item = usize>,
) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for xt in xts {
        let (l, n) = match genus0_max_l(field.order(), xt, xt) {
            Some(l) => (l, servers_needed(0, l, xt, xt)),
            None => (0, 0),
        };
        rows.push(SweepRow {
            xt,
            construction: "genus0".into(),
            genus: 0,
            l,
            n,
        });
        for (name, c) in curves {
            let (l, n) = match select_gammas(c, xt, xt) {
                Ok(s) => (s.l, s.n),
                Err(_) => (0, 0),
            };
            rows.push(SweepRow {
                xt,
                construction: name.clone(),
                genus: c.genus(),
                l,
                n,
            });
        }
    }
    rows
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus0_rate_decreases() {
        let f = Field::prime(61).unwrap();
        let rows = rate_sweep(&f, &[], 1..=40);
        let feasible: Vec<&SweepRow> = rows.iter().filter(|r| r.n > 0).collect();
        assert!(feasible
            .windows(2)
            .all(|w| w[0].rate().value() > w[1].rate().value()));
        let last = rows.last().unwrap();
        assert_eq!((last.l, last.n), (0, 0));
        assert!(last.csv_row().ends_with(",0,1,0.000000"));
    }

    #[test]
    fn rows_parse_back() {
        let f = Field::prime(13).unwrap();
        for r in rate_sweep(&f, &[], 1..=3) {
            let line = r.csv_row();
            let cols: Vec<&str> = line.split(',').collect();
            let (num, den): (f64, f64) = (cols[5].parse().unwrap(), cols[6].parse().unwrap());
            let rate: f64 = cols[7].parse().unwrap();
            assert!((num / den - rate).abs() < 1e-6);
        }
    }
}
