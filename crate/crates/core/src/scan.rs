//! Batch scans: dimension tables, triangle consistency sweeps, and the
//! parity check across slope ranges.
//!
//! Scans are data-parallel over slopes. With the `parallel` feature
//! (default) they fan out through rayon; without it the same code runs
//! sequentially. The merge is a plain ordered collect either way, so
//! output is byte-deterministic.

use crate::dims::{dim_c, dim_f2_value, integer_triangle_check, torsion_summands, triangle_check, DimKind};
use crate::error::Result;
use crate::knotdb::KnotRecord;
use crate::slope::{reduced_slopes, BundleClass, Slope};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a scan executes. `Parallel` exists only with the `parallel`
/// feature; `default()` picks the best available.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExecMode {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for ExecMode {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        ExecMode::Parallel
    }
    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        ExecMode::Sequential
    }
}

fn map_items<T, U, F>(items: Vec<T>, mode: ExecMode, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.into_iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => items.into_par_iter().map(f).collect(),
    }
}

/// One row of the dimension table. The C columns are None when the record
/// lacks r0 or nu#; the torsion column is additionally None when the C
/// dimension is ambiguous.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub slope: Slope,
    pub bundle: BundleClass,
    pub dim_f2: u64,
    pub dim_c: Option<DimKind>,
    pub torsion: Option<u64>,
}

/// All reduced slopes in [from, to] with denominator at most `denom_max`,
/// sorted by value then denominator.
pub fn slope_range(from: Slope, to: Slope, denom_max: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for q in 1..=denom_max.max(1) {
        // p/q >= from and <= to
        let lo = (from.numerator() as i128 * q as i128).div_euclid(from.denominator() as i128);
        let hi = (to.numerator() as i128 * q as i128).div_euclid(to.denominator() as i128) + 1;
        for p in lo..=hi {
            let p = p as i64;
            let Ok(s) = Slope::new(p, q) else { continue };
            if (s.numerator(), s.denominator()) == (p, q) && s >= from && s <= to {
                out.push(s);
            }
        }
    }
    out.sort_by(|a, b| a.cmp(b).then(a.denominator().cmp(&b.denominator())));
    out
}

pub fn table_rows(k: &KnotRecord, from: Slope, to: Slope, denom_max: i64) -> Result<Vec<TableRow>> {
    table_rows_with(ExecMode::default(), k, from, to, denom_max)
}

pub fn table_rows_with(
    mode: ExecMode,
    k: &KnotRecord,
    from: Slope,
    to: Slope,
    denom_max: i64,
) -> Result<Vec<TableRow>> {
    // surface incomplete records before fanning out
    k.require_r2()?;
    k.require_m()?;
    let has_c = k.r0.is_some() && k.nu_sharp.is_some();
    let slopes = slope_range(from, to, denom_max);
    let rows = map_items(slopes, mode, |s| {
        s.bundle_classes()
            .iter()
            .map(|&w| {
                let dim_f2 = dim_f2_value(k, s, w).expect("record checked complete");
                let dim_c_kind = has_c.then(|| dim_c(k, s).expect("record checked complete").kind);
                let torsion = match dim_c_kind {
                    Some(DimKind::Exact(_)) => Some(torsion_summands(k, s, w).expect("exact")),
                    _ => None,
                };
                TableRow { slope: s, bundle: w, dim_f2, dim_c: dim_c_kind, torsion }
            })
            .collect::<Vec<_>>()
    });
    Ok(rows.into_iter().flatten().collect())
}

/// Renders rows as the fixed CSV format: ambiguous cells print "lo|hi",
/// unavailable cells print "-".
pub fn to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("slope,bundle,dim_F2,dim_C,torsion_summands\n");
    for r in rows {
        let c = r.dim_c.map_or_else(|| "-".to_string(), |k| k.to_string());
        let t = r.torsion.map_or_else(|| "-".to_string(), |v| v.to_string());
        out.push_str(&format!("{},{},{},{c},{t}\n", r.slope, r.bundle, r.dim_f2));
    }
    out
}

/// Outcome of a triangle sweep.
#[derive(Clone, Debug, Default)]
pub struct ScanReport {
    pub rational_checked: usize,
    pub integer_checked: usize,
    pub violations: Vec<String>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn triangle_scan(k: &KnotRecord, qmax: i64, pmax: i64) -> Result<ScanReport> {
    triangle_scan_with(ExecMode::default(), k, qmax, pmax)
}

/// Runs every rational triangle with 2 <= q <= qmax, |p| <= pmax, plus the
/// integer triangles for |n| <= pmax, and collects violations.
pub fn triangle_scan_with(mode: ExecMode, k: &KnotRecord, qmax: i64, pmax: i64) -> Result<ScanReport> {
    k.require_r2()?;
    k.require_m()?;

    let rational = reduced_slopes(pmax, 2, qmax);
    let rational_checked = rational.len();
    let rational_violations = map_items(rational, mode, |s| {
        let rep = triangle_check(k, s).expect("record checked complete");
        rep.violations().map(|c| format!("{} at {s}: {c}", k.name)).collect::<Vec<_>>()
    });

    let integers: Vec<i64> = (-pmax..=pmax).collect();
    let integer_checked = integers.len();
    let integer_violations = map_items(integers, mode, |n| {
        let rep = integer_triangle_check(k, n).expect("record checked complete");
        rep.violations().map(|c| format!("{} at n = {n}: {c}", k.name)).collect::<Vec<_>>()
    });

    Ok(ScanReport {
        rational_checked,
        integer_checked,
        violations: rational_violations.into_iter().chain(integer_violations).flatten().collect(),
    })
}

/// Slopes with p != 0 where the F2 dimension fails to have the parity of
/// |p|; always empty for a consistent record.
pub fn parity_scan_with(mode: ExecMode, k: &KnotRecord, slopes: Vec<Slope>) -> Result<Vec<Slope>> {
    k.require_r2()?;
    k.require_m()?;
    let bad = map_items(slopes, mode, |s| {
        if s.numerator() == 0 {
            return None;
        }
        let mismatch = s.bundle_classes().iter().any(|&w| {
            dim_f2_value(k, s, w).expect("record checked complete") % 2 != s.h1_order() % 2
        });
        mismatch.then_some(s)
    });
    Ok(bad.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotdb::KnotTable;

    fn knot(name: &str) -> KnotRecord {
        KnotTable::bundled().get(name).unwrap()
    }

    #[test]
    fn slope_range_is_sorted_and_reduced() {
        let from = "-2".parse().unwrap();
        let to = "2".parse().unwrap();
        let slopes = slope_range(from, to, 2);
        let expect: Vec<Slope> = ["-2", "-3/2", "-1", "-1/2", "0", "1/2", "1", "3/2", "2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(slopes, expect);
    }

    #[test]
    fn csv_shape_and_cells() {
        let rows = table_rows(&knot("3_1"), "-5".parse().unwrap(), "-3".parse().unwrap(), 2).unwrap();
        let csv = to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "slope,bundle,dim_F2,dim_C,torsion_summands");
        assert!(csv.contains("-5,trivial,5,5,0"));
        assert!(csv.contains("-4,trivial,6,4,1"));
        assert!(csv.contains("-4,nontrivial,4,4,0"));
        assert!(csv.contains("-7/2,trivial,9,"));
    }

    #[test]
    fn ambiguous_cells_render_with_bar() {
        let rows =
            table_rows(&knot("unknot"), "0".parse().unwrap(), "0".parse().unwrap(), 1).unwrap();
        let csv = to_csv(&rows);
        assert!(csv.contains("0,trivial,2,0|2,-"), "csv was: {csv}");
    }

    #[test]
    fn missing_c_data_renders_dashes() {
        let rows = table_rows(&knot("4_1"), "1".parse().unwrap(), "1".parse().unwrap(), 1).unwrap();
        let csv = to_csv(&rows);
        assert!(csv.contains("1,trivial,9,-,-"), "csv was: {csv}");
    }

    #[test]
    fn sequential_and_default_agree() {
        let k = knot("3_1");
        let a = triangle_scan_with(ExecMode::Sequential, &k, 4, 16).unwrap();
        let b = triangle_scan(&k, 4, 16).unwrap();
        assert_eq!(a.violations, b.violations);
        assert_eq!(a.rational_checked, b.rational_checked);
        assert!(a.passed());
    }
}
