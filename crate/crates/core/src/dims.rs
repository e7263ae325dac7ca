//! Closed-form dimension engines for the surgered homology groups.
//!
//! Over F2, a record with r2 and M determines every dimension:
//!
//! ```text
//! dim(p/q, w) = r2 + 2            if p/q = M and w is trivial,
//!             = q r2 + |p - q M|  otherwise.
//! ```
//!
//! Over C the analogous formula uses r0 and nu#, except that the zero
//! surgery of a knot with nu# = 0 is genuinely undetermined between r0 and
//! r0 + 2 and is reported as an ambiguous pair. Half the difference of the
//! two dimensions counts 2-torsion summands of the integral group, and the
//! surgery exact triangles give inequalities that every consistent record
//! must satisfy; the checkers here quantify over all admissible bundle
//! assignments at each corner, which is sound even though the triangles'
//! own bundle bookkeeping is finer.

use std::fmt;

use crate::error::{Error, Result};
use crate::knotdb::KnotRecord;
use crate::slope::{BundleClass, Slope};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldTag {
    F2,
    C,
}

/// An exact dimension, or the two-valued undetermined case.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DimKind {
    Exact(u64),
    Ambiguous { lo: u64, hi: u64 },
}

impl DimKind {
    pub fn exact(&self) -> Option<u64> {
        match self {
            DimKind::Exact(v) => Some(*v),
            DimKind::Ambiguous { .. } => None,
        }
    }

    pub fn values(&self) -> Vec<u64> {
        match *self {
            DimKind::Exact(v) => vec![v],
            DimKind::Ambiguous { lo, hi } => vec![lo, hi],
        }
    }
}

impl fmt::Display for DimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimKind::Exact(v) => write!(f, "{v}"),
            DimKind::Ambiguous { lo, hi } => write!(f, "{lo}|{hi}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DimValue {
    pub kind: DimKind,
    pub field: FieldTag,
    pub bundle: BundleClass,
}

fn vee(r: u64, inv: i64, s: Slope) -> u64 {
    let q = s.denominator() as i128;
    let p = s.numerator() as i128;
    let v = q * r as i128 + (p - q * inv as i128).abs();
    debug_assert!(v >= 0);
    v as u64
}

/// Dimension over F2. Needs r2 and M; the bundle must be admissible on the
/// slope.
pub fn dim_f2(k: &KnotRecord, s: Slope, w: BundleClass) -> Result<DimValue> {
    let r2 = k.require_r2()?;
    let m = k.require_m()?;
    if !w.is_admissible_on(s) {
        return Err(Error::InvalidBundle(s));
    }
    let value = if s.as_integer() == Some(m) && w == BundleClass::Trivial {
        r2 + 2
    } else {
        vee(r2, m, s)
    };
    // Euler characteristic: the dimension has the parity of |H_1|.
    debug_assert!(s.h1_order() == 0 || value % 2 == s.h1_order() % 2);
    Ok(DimValue { kind: DimKind::Exact(value), field: FieldTag::F2, bundle: w })
}

/// Dimension over F2 as a bare integer.
pub fn dim_f2_value(k: &KnotRecord, s: Slope, w: BundleClass) -> Result<u64> {
    Ok(dim_f2(k, s, w)?.kind.exact().expect("F2 dimensions are exact"))
}

/// Dimension over C. Needs r0 and nu#; the zero surgery with nu# = 0 is
/// reported as the ambiguous pair {r0, r0 + 2}.
pub fn dim_c(k: &KnotRecord, s: Slope) -> Result<DimValue> {
    let r0 = k.require_r0()?;
    let nu = k.require_nu_sharp()?;
    let kind = if s.numerator() == 0 && nu == 0 {
        DimKind::Ambiguous { lo: r0, hi: r0 + 2 }
    } else {
        DimKind::Exact(vee(r0, nu, s))
    };
    Ok(DimValue { kind, field: FieldTag::C, bundle: BundleClass::Trivial })
}

/// Number of 2-torsion summands of the integral group at this surgery:
/// half the gap between the F2 and C dimensions.
pub fn torsion_summands(k: &KnotRecord, s: Slope, w: BundleClass) -> Result<u64> {
    let f = dim_f2_value(k, s, w)?;
    let DimKind::Exact(c) = dim_c(k, s)?.kind else {
        return Err(Error::AmbiguousDimension(s));
    };
    if f < c || (f - c) % 2 != 0 {
        return Err(Error::Contradiction(format!(
            "record '{}' gives dim {f} over F2 but {c} over C at slope {s}",
            k.name
        )));
    }
    Ok((f - c) / 2)
}

/// t2: the 2-torsion count of the +1 surgery.
pub fn t2(k: &KnotRecord) -> Result<u64> {
    torsion_summands(k, Slope::integer(1), BundleClass::Trivial)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriangleKind {
    /// Corners (right parent, left parent, target).
    Floer,
    /// Corners (excess, both bundle classes on the left parent summed,
    /// target).
    Distance2,
    /// Corners (the sphere, integer surgery n, integer surgery n + 1).
    Integer,
}

impl fmt::Display for TriangleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriangleKind::Floer => write!(f, "floer"),
            TriangleKind::Distance2 => write!(f, "distance-2"),
            TriangleKind::Integer => write!(f, "integer"),
        }
    }
}

/// One bundle assignment at the corners of one triangle.
#[derive(Clone, Debug)]
pub struct TriangleCase {
    pub kind: TriangleKind,
    pub corners: Vec<(Slope, BundleClass)>,
    pub dims: [u64; 3],
    pub inequality_ok: bool,
    pub parity_ok: bool,
}

impl TriangleCase {
    pub fn ok(&self) -> bool {
        self.inequality_ok && self.parity_ok
    }
}

impl fmt::Display for TriangleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let corners: Vec<String> =
            self.corners.iter().map(|(s, w)| format!("{s}:{w}")).collect();
        write!(
            f,
            "{} triangle [{}] dims {:?}{}",
            self.kind,
            corner_list(&corners),
            self.dims,
            if self.ok() { "" } else { " VIOLATION" }
        )
    }
}

fn corner_list(corners: &[String]) -> String {
    corners.join(", ")
}

/// A report over every admissible bundle assignment.
#[derive(Clone, Debug, Default)]
pub struct TriangleReport {
    pub cases: Vec<TriangleCase>,
}

impl TriangleReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(TriangleCase::ok)
    }

    pub fn violations(&self) -> impl Iterator<Item = &TriangleCase> {
        self.cases.iter().filter(|c| !c.ok())
    }
}

fn exact_triangle_case(kind: TriangleKind, corners: Vec<(Slope, BundleClass)>, dims: [u64; 3]) -> TriangleCase {
    let [a, b, c] = dims;
    let inequality_ok = a <= b + c && b <= a + c && c <= a + b;
    let parity_ok = (a + b + c) % 2 == 0;
    TriangleCase { kind, corners, dims, inequality_ok, parity_ok }
}

/// Both bundle classes on `s` summed; when only the trivial class exists
/// the two summands coincide.
fn both_bundles_dim(k: &KnotRecord, s: Slope) -> Result<u64> {
    let t = dim_f2_value(k, s, BundleClass::Trivial)?;
    let other = if s.admits_nontrivial_bundle() {
        dim_f2_value(k, s, BundleClass::Nontrivial)?
    } else {
        t
    };
    Ok(t + other)
}

/// Exact-triangle consistency at a rational slope with q >= 2: the Floer
/// triangle on the parents and the distance-2 triangle through the excess
/// slope, quantified over all admissible bundle assignments at each corner.
pub fn triangle_check(k: &KnotRecord, s: Slope) -> Result<TriangleReport> {
    let triple = s.farey_triple()?;
    let (left, right, excess) = (triple.left_slope(), triple.right_slope(), triple.excess_slope());
    let mut report = TriangleReport::default();

    for &wr in right.bundle_classes() {
        let dr = dim_f2_value(k, right, wr)?;
        for &wl in left.bundle_classes() {
            let dl = dim_f2_value(k, left, wl)?;
            for &wt in s.bundle_classes() {
                let dt = dim_f2_value(k, s, wt)?;
                report.cases.push(exact_triangle_case(
                    TriangleKind::Floer,
                    vec![(right, wr), (left, wl), (s, wt)],
                    [dr, dl, dt],
                ));
            }
        }
    }

    let middle = both_bundles_dim(k, left)?;
    for &we in excess.bundle_classes() {
        let de = dim_f2_value(k, excess, we)?;
        for &wt in s.bundle_classes() {
            let dt = dim_f2_value(k, s, wt)?;
            report.cases.push(exact_triangle_case(
                TriangleKind::Distance2,
                vec![(excess, we), (left, BundleClass::Trivial), (s, wt)],
                [de, middle, dt],
            ));
        }
    }

    Ok(report)
}

/// The integer surgery triangle (sphere, n, n+1), quantified over
/// admissible bundles on the two surgered corners.
pub fn integer_triangle_check(k: &KnotRecord, n: i64) -> Result<TriangleReport> {
    let sn = Slope::integer(n);
    let sn1 = Slope::integer(n + 1);
    let sphere = Slope::infinity();
    let mut report = TriangleReport::default();
    for &wn in sn.bundle_classes() {
        let dn = dim_f2_value(k, sn, wn)?;
        for &wn1 in sn1.bundle_classes() {
            let dn1 = dim_f2_value(k, sn1, wn1)?;
            report.cases.push(exact_triangle_case(
                TriangleKind::Integer,
                vec![(sphere, BundleClass::Trivial), (sn, wn), (sn1, wn1)],
                [1, dn, dn1],
            ));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotdb::KnotTable;

    fn knot(name: &str) -> KnotRecord {
        KnotTable::bundled().get(name).unwrap()
    }

    fn s(text: &str) -> Slope {
        text.parse().unwrap()
    }

    #[test]
    fn trefoil_fixture_dimensions() {
        let k = knot("3_1");
        assert_eq!(dim_f2_value(&k, s("-5"), BundleClass::Trivial).unwrap(), 5);
        assert_eq!(dim_f2_value(&k, s("-1"), BundleClass::Trivial).unwrap(), 7);
        assert_eq!(dim_f2_value(&k, s("-4"), BundleClass::Trivial).unwrap(), 6);
        assert_eq!(dim_f2_value(&k, s("-4"), BundleClass::Nontrivial).unwrap(), 4);
        assert_eq!(dim_f2_value(&k, s("-7/2"), BundleClass::Trivial).unwrap(), 9);
    }

    #[test]
    fn unknot_zero_surgery_bumps_trivial_bundle() {
        let k = knot("unknot");
        assert_eq!(dim_f2_value(&k, s("0"), BundleClass::Trivial).unwrap(), 2);
        assert_eq!(dim_f2_value(&k, s("0"), BundleClass::Nontrivial).unwrap(), 0);
    }

    #[test]
    fn infinity_slope_is_the_sphere() {
        for name in ["unknot", "3_1", "4_1", "K_5"] {
            let k = knot(name);
            assert_eq!(dim_f2_value(&k, Slope::infinity(), BundleClass::Trivial).unwrap(), 1);
        }
    }

    #[test]
    fn error_paths() {
        let k = knot("3_1");
        assert!(matches!(
            dim_f2(&k, s("-5"), BundleClass::Nontrivial),
            Err(Error::InvalidBundle(_))
        ));
        let torus = knot("T(3,5)");
        assert!(matches!(
            dim_f2(&torus, s("1"), BundleClass::Trivial),
            Err(Error::IncompleteRecord { .. })
        ));
        assert!(matches!(t2(&knot("4_1")), Err(Error::IncompleteRecord { .. })));
    }

    #[test]
    fn dim_c_values_and_ambiguity() {
        let k = knot("3_1");
        assert_eq!(dim_c(&k, s("-1")).unwrap().kind, DimKind::Exact(1));
        assert_eq!(dim_c(&k, s("-5")).unwrap().kind, DimKind::Exact(5));
        let u = knot("unknot");
        assert_eq!(dim_c(&u, s("0")).unwrap().kind, DimKind::Ambiguous { lo: 0, hi: 2 });
        assert_eq!(dim_c(&u, s("5")).unwrap().kind, DimKind::Exact(5));
    }

    #[test]
    fn torsion_counts() {
        let k = knot("3_1");
        assert_eq!(torsion_summands(&k, s("1"), BundleClass::Trivial).unwrap(), 3);
        assert_eq!(torsion_summands(&k, s("-5"), BundleClass::Trivial).unwrap(), 0);
        assert_eq!(torsion_summands(&knot("unknot"), s("5"), BundleClass::Trivial).unwrap(), 0);
        assert_eq!(t2(&k).unwrap(), 3);
        assert_eq!(t2(&knot("unknot")).unwrap(), 0);
        assert!(matches!(
            torsion_summands(&knot("unknot"), s("0"), BundleClass::Trivial),
            Err(Error::AmbiguousDimension(_))
        ));
    }

    #[test]
    fn triangle_fixtures() {
        let k = knot("3_1");
        let rep = triangle_check(&k, s("-7/2")).unwrap();
        assert!(rep.passed());
        // corner dims {5, {4,6}, 9}: the tight assignment appears
        assert!(rep
            .cases
            .iter()
            .any(|c| c.kind == TriangleKind::Floer && c.dims == [5, 4, 9]));

        assert!(triangle_check(&knot("unknot"), s("5/3")).unwrap().passed());
        let rep = triangle_check(&k, s("-9/2")).unwrap();
        assert!(rep.passed());
        assert!(rep
            .cases
            .iter()
            .any(|c| c.kind == TriangleKind::Floer && c.corners[0].0 == s("-4")));
    }

    #[test]
    fn integer_triangle_fixtures() {
        let k = knot("3_1");
        let rep = integer_triangle_check(&k, -5).unwrap();
        assert!(rep.passed());
        assert!(rep.cases.iter().any(|c| c.dims == [1, 5, 4]));
        assert!(integer_triangle_check(&k, -4).unwrap().passed());
        assert!(integer_triangle_check(&knot("unknot"), 0).unwrap().passed());
    }

    #[test]
    fn w_shape_of_the_nontrivial_graph() {
        // dim at even n with nontrivial bundle, odd n with trivial, is the
        // plain vee r2 + |n - M|: strictly down then strictly up.
        let k = knot("3_1");
        let m = k.m.unwrap();
        let dim_at = |n: i64| {
            let sl = Slope::integer(n);
            let w = if n % 2 == 0 { BundleClass::Nontrivial } else { BundleClass::Trivial };
            dim_f2_value(&k, sl, w).unwrap() as i64
        };
        for n in m - 10..m {
            assert_eq!(dim_at(n + 1) - dim_at(n), -1);
        }
        for n in m..m + 10 {
            assert_eq!(dim_at(n + 1) - dim_at(n), 1);
        }
        // trivial-bundle graph agrees except for the +2 bump at n = M
        assert_eq!(
            dim_f2_value(&k, Slope::integer(m), BundleClass::Trivial).unwrap(),
            dim_f2_value(&k, Slope::integer(m), BundleClass::Nontrivial).unwrap() + 2
        );
    }

    #[test]
    fn f2_dominates_c() {
        let k = knot("3_1");
        for sl in crate::slope::reduced_slopes(20, 1, 5) {
            let f = dim_f2_value(&k, sl, BundleClass::Trivial).unwrap();
            if let DimKind::Exact(c) = dim_c(&k, sl).unwrap().kind {
                assert!(f >= c, "F2 dim {f} < C dim {c} at {sl}");
            }
        }
    }
}
