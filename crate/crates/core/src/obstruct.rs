//! Derived yes/no obstructions: instanton L-space status and slope ranges,
//! torsion-freeness of the integral groups, SU(2)-abelian exclusion, and
//! the genus identity for torsion-averse knots.

use std::cmp::Ordering;
use std::fmt;

use crate::dims::t2;
use crate::error::{Error, Result};
use crate::froyshov::q3_surgery;
use crate::knotdb::KnotRecord;
use crate::slope::{BundleClass, Slope};

/// A knot is an instanton L-space knot over F2 exactly when r2 = |M|.
pub fn is_lspace_knot_f2(k: &KnotRecord) -> Result<bool> {
    Ok(k.require_r2()? == k.require_m()?.unsigned_abs())
}

/// The set of L-space surgeries of an L-space knot, described by where M
/// sits. Membership of the infinity slope is always true: the unsurgered
/// sphere is an L-space.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LspaceSlopes {
    Empty,
    /// M > 0: every r > M, plus (M, nontrivial).
    AboveM { m: i64 },
    /// M < 0: every r < M, plus (M, nontrivial).
    BelowM { m: i64 },
    /// M = 0 = r2: every r != 0, plus (0, nontrivial).
    AllNonzero,
}

impl LspaceSlopes {
    pub fn contains(&self, s: Slope, w: BundleClass) -> bool {
        if s.is_infinity() {
            return true;
        }
        match *self {
            LspaceSlopes::Empty => false,
            LspaceSlopes::AboveM { m } => {
                s.cmp_int(m) == Ordering::Greater
                    || (s.as_integer() == Some(m) && w == BundleClass::Nontrivial)
            }
            LspaceSlopes::BelowM { m } => {
                s.cmp_int(m) == Ordering::Less
                    || (s.as_integer() == Some(m) && w == BundleClass::Nontrivial)
            }
            LspaceSlopes::AllNonzero => {
                s.numerator() != 0 || w == BundleClass::Nontrivial
            }
        }
    }
}

impl fmt::Display for LspaceSlopes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LspaceSlopes::Empty => write!(f, "none"),
            LspaceSlopes::AboveM { m } => write!(f, "r > {m}, plus ({m}, nontrivial)"),
            LspaceSlopes::BelowM { m } => write!(f, "r < {m}, plus ({m}, nontrivial)"),
            LspaceSlopes::AllNonzero => write!(f, "all r != 0, plus (0, nontrivial)"),
        }
    }
}

pub fn lspace_slopes(k: &KnotRecord) -> Result<LspaceSlopes> {
    let r2 = k.require_r2()?;
    let m = k.require_m()?;
    if r2 != m.unsigned_abs() {
        return Ok(LspaceSlopes::Empty);
    }
    Ok(match m.cmp(&0) {
        Ordering::Greater => LspaceSlopes::AboveM { m },
        Ordering::Less => LspaceSlopes::BelowM { m },
        Ordering::Equal => LspaceSlopes::AllNonzero,
    })
}

/// Whether the integral group at (s, w) is free of 2-torsion: requires a
/// torsion-averse knot, the slope on the same side as M, and |s| >= |M|
/// with the nontrivial bundle at equality. The infinity slope is always
/// torsion-free.
pub fn torsion_free(k: &KnotRecord, s: Slope, w: BundleClass) -> Result<bool> {
    let r2 = k.require_r2()?;
    let m = k.require_m()?;
    if !w.is_admissible_on(s) {
        return Err(Error::InvalidBundle(s));
    }
    if s.is_infinity() {
        return Ok(true);
    }
    if r2 != m.unsigned_abs() {
        return Ok(false);
    }
    if m == 0 {
        // unknot-like: every nonzero surgery, and the zero surgery only
        // with nontrivial bundle
        return Ok(s.numerator() != 0 || w == BundleClass::Nontrivial);
    }
    if s.signum() != m.signum() {
        return Ok(false);
    }
    Ok(match s.abs_cmp_int(m.unsigned_abs()) {
        Ordering::Greater => true,
        Ordering::Equal => w == BundleClass::Nontrivial,
        Ordering::Less => false,
    })
}

/// The genus threshold below which no surgery is nondegenerate
/// SU(2)-abelian: 2g for g even, 2g + 2 for g odd.
pub fn genus_bound(g: u64) -> u64 {
    let b = if g % 2 == 0 { 2 * g } else { 2 * g + 2 };
    // same thing as rounding 2g - 1 up to the lattice
    debug_assert!(g == 0 || b == (2 * g - 1).div_ceil(4) * 4);
    b
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Obstructed,
    Unobstructed,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Obstructed => write!(f, "obstructed"),
            Verdict::Unobstructed => write!(f, "unobstructed"),
            Verdict::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ObstructionReason {
    /// |r| is at most the genus threshold.
    GenusBound { bound: u64 },
    /// The integral group at (s, trivial) has 2-torsion, which a
    /// nondegenerate SU(2)-abelian manifold never does.
    TwoTorsion,
    /// q3 != 0, so the surgery is not even F2-homology cobordant to a
    /// nondegenerate SU(2)-abelian manifold.
    HomologyCobordism { q3: i8 },
}

impl fmt::Display for ObstructionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObstructionReason::GenusBound { bound } => {
                write!(f, "|r| <= {bound}, the genus threshold")
            }
            ObstructionReason::TwoTorsion => {
                write!(f, "the integral group has 2-torsion")
            }
            ObstructionReason::HomologyCobordism { q3 } => {
                write!(f, "q3 = {q3} != 0 obstructs even F2-homology cobordism")
            }
        }
    }
}

/// The verdict plus every rule that fired. `annotation` records the
/// nondegeneracy caveat: the exclusion is of *nondegenerate* SU(2)-abelian
/// manifolds, and nondegeneracy is automatic when |H_1| is a prime power.
#[derive(Clone, Debug)]
pub struct Su2Report {
    pub verdict: Verdict,
    pub reasons: Vec<ObstructionReason>,
    pub annotation: &'static str,
}

pub const NONDEGENERACY_CAVEAT: &str =
    "excludes nondegenerate SU(2)-abelian manifolds; nondegeneracy is automatic when |H_1| is a prime power";

impl Su2Report {
    /// True when the surgery is obstructed from being F2-homology cobordant
    /// to a nondegenerate SU(2)-abelian manifold, not merely from being one.
    pub fn homology_cobordism_obstructed(&self) -> bool {
        self.reasons
            .iter()
            .any(|r| matches!(r, ObstructionReason::HomologyCobordism { .. }))
    }
}

impl fmt::Display for Su2Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        if !self.reasons.is_empty() {
            let rs: Vec<String> = self.reasons.iter().map(ToString::to_string).collect();
            write!(f, " ({})", rs.join("; "))?;
        }
        write!(f, " [{}]", self.annotation)
    }
}

/// Can the surgery along `s` be nondegenerate SU(2)-abelian? The genus
/// must be present and positive (the unknot is excluded as trivial). A
/// negative certificate is never produced, so the verdict is obstructed or
/// unknown.
pub fn su2_abelian_obstruction(k: &KnotRecord, s: Slope) -> Result<Su2Report> {
    let g = k.require_genus()?;
    if g == 0 {
        return Err(Error::Domain(format!(
            "'{}' has genus 0; the obstruction applies to non-trivial knots",
            k.name
        )));
    }
    let mut reasons = Vec::new();
    let bound = genus_bound(g);
    if s.abs_cmp_int(bound) != Ordering::Greater {
        reasons.push(ObstructionReason::GenusBound { bound });
    }
    if k.r2.is_some() && k.m.is_some() && !torsion_free(k, s, BundleClass::Trivial)? {
        reasons.push(ObstructionReason::TwoTorsion);
    }
    if k.m.is_some() && s.numerator() % 2 != 0 {
        let q3 = q3_surgery(k, s)?.value;
        if q3 != 0 {
            reasons.push(ObstructionReason::HomologyCobordism { q3 });
        }
    }
    let verdict = if reasons.is_empty() { Verdict::Unknown } else { Verdict::Obstructed };
    Ok(Su2Report { verdict, reasons, annotation: NONDEGENERACY_CAVEAT })
}

/// For a torsion-averse knot with M != 0, the genus is recovered from
/// |M| = 2g - 1 + t2. Returns None for the M = 0 boundary case (only the
/// trivial knot), and a contradiction error when the formula fails to give
/// a nonnegative integer or disagrees with the stored genus.
pub fn genus_identity(k: &KnotRecord) -> Result<Option<u64>> {
    let r2 = k.require_r2()?;
    let m = k.require_m()?;
    if r2 != m.unsigned_abs() {
        return Err(Error::Domain(format!(
            "'{}' is not torsion-averse (r2 = {r2}, |M| = {})",
            k.name,
            m.unsigned_abs()
        )));
    }
    if m == 0 {
        return Ok(None);
    }
    let t = t2(k)?;
    let num = m.unsigned_abs() as i128 - t as i128 + 1;
    if num <= 0 || num % 2 != 0 {
        return Err(Error::Contradiction(format!(
            "|M| - t2 + 1 = {num} for '{}' is not twice a genus",
            k.name
        )));
    }
    let g = (num / 2) as u64;
    if let Some(stored) = k.genus {
        if stored != g {
            return Err(Error::Contradiction(format!(
                "genus identity gives {g} for '{}' but the record stores {stored}",
                k.name
            )));
        }
    }
    Ok(Some(g))
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
    fn lspace_status() {
        assert!(is_lspace_knot_f2(&knot("3_1")).unwrap());
        assert!(!is_lspace_knot_f2(&knot("4_1")).unwrap());
        assert!(is_lspace_knot_f2(&knot("unknot")).unwrap());
    }

    #[test]
    fn lspace_slope_sets() {
        let tre = lspace_slopes(&knot("3_1")).unwrap();
        assert_eq!(tre, LspaceSlopes::BelowM { m: -4 });
        assert!(tre.contains(s("-5"), BundleClass::Trivial));
        assert!(tre.contains(s("-4"), BundleClass::Nontrivial));
        assert!(!tre.contains(s("-4"), BundleClass::Trivial));
        assert!(!tre.contains(s("1"), BundleClass::Trivial));

        assert_eq!(lspace_slopes(&knot("4_1")).unwrap(), LspaceSlopes::Empty);

        let unk = lspace_slopes(&knot("unknot")).unwrap();
        assert_eq!(unk, LspaceSlopes::AllNonzero);
        assert!(unk.contains(s("5"), BundleClass::Trivial));
        assert!(unk.contains(s("0"), BundleClass::Nontrivial));
        assert!(!unk.contains(s("0"), BundleClass::Trivial));
    }

    #[test]
    fn torsion_free_fixtures() {
        let k = knot("3_1");
        assert!(torsion_free(&k, s("-5"), BundleClass::Trivial).unwrap());
        assert!(!torsion_free(&k, s("-4"), BundleClass::Trivial).unwrap());
        assert!(torsion_free(&k, s("-4"), BundleClass::Nontrivial).unwrap());
        assert!(!torsion_free(&knot("4_1"), s("100"), BundleClass::Trivial).unwrap());
        assert!(torsion_free(&k, Slope::infinity(), BundleClass::Trivial).unwrap());
        // wrong side of zero
        assert!(!torsion_free(&k, s("5"), BundleClass::Trivial).unwrap());
        assert!(!torsion_free(&k, s("0"), BundleClass::Trivial).unwrap());
    }

    #[test]
    fn lspace_set_agrees_with_torsion_freeness() {
        for name in ["3_1", "m(3_1)", "unknot", "4_1", "K_3"] {
            let k = knot(name);
            let set = lspace_slopes(&k).unwrap();
            for sl in crate::slope::reduced_slopes(24, 1, 4) {
                for &w in sl.bundle_classes() {
                    let tf = torsion_free(&k, sl, w).unwrap();
                    if set == LspaceSlopes::Empty {
                        assert!(!tf, "{name} at {sl}");
                    } else {
                        assert_eq!(set.contains(sl, w), tf, "{name} at ({sl}, {w})");
                    }
                }
            }
        }
    }

    #[test]
    fn genus_bound_values() {
        assert_eq!(genus_bound(1), 4);
        assert_eq!(genus_bound(2), 4);
        assert_eq!(genus_bound(3), 8);
        assert_eq!(genus_bound(4), 8);
        assert_eq!(genus_bound(5), 12);
    }

    #[test]
    fn su2_obstruction_fixtures() {
        let k = knot("3_1");
        let rep = su2_abelian_obstruction(&k, s("3")).unwrap();
        assert_eq!(rep.verdict, Verdict::Obstructed);
        // a lens space exists at -5, so nothing fires there
        let rep = su2_abelian_obstruction(&k, s("-5")).unwrap();
        assert_eq!(rep.verdict, Verdict::Unknown);
        // inside the negative window the cobordism obstruction also fires
        let rep = su2_abelian_obstruction(&k, s("-1")).unwrap();
        assert!(rep.homology_cobordism_obstructed());

        let mut g3 = KnotRecord::named("g3-lspace");
        g3.genus = Some(3);
        g3.r2 = Some(8);
        g3.m = Some(8);
        g3.provenance.insert("r2".into(), "fixture: test".into());
        g3.provenance.insert("M".into(), "fixture: test".into());
        let rep = su2_abelian_obstruction(&g3, s("7")).unwrap();
        assert_eq!(rep.verdict, Verdict::Obstructed);
        assert!(rep.reasons.contains(&ObstructionReason::TwoTorsion));
    }

    #[test]
    fn su2_error_paths() {
        assert!(matches!(
            su2_abelian_obstruction(&knot("4_1"), s("1")),
            Err(Error::IncompleteRecord { .. })
        ));
        assert!(matches!(
            su2_abelian_obstruction(&knot("unknot"), s("1")),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn su2_monotone_under_the_genus_rule() {
        // the genus rule obstructs a downward-closed set of |r|, so within
        // the threshold every slope is obstructed
        let k = knot("3_1");
        for sl in crate::slope::reduced_slopes(30, 1, 4) {
            if sl.abs_cmp_int(genus_bound(1)) != Ordering::Greater {
                assert_eq!(
                    su2_abelian_obstruction(&k, sl).unwrap().verdict,
                    Verdict::Obstructed,
                    "slope {sl}"
                );
            }
        }
    }

    #[test]
    fn genus_identity_reproduces_stored_genus_on_fixtures() {
        for k in KnotTable::bundled().fixture_records() {
            let averse = matches!((k.r2, k.m), (Some(r2), Some(m)) if r2 == m.unsigned_abs());
            if !averse || k.m == Some(0) || k.r0.is_none() || k.nu_sharp.is_none() {
                continue;
            }
            let g = genus_identity(&k).unwrap().unwrap();
            if let Some(stored) = k.genus {
                assert_eq!(g, stored, "{}", k.name);
            }
        }
    }

    #[test]
    fn genus_identity_fixtures() {
        assert_eq!(genus_identity(&knot("3_1")).unwrap(), Some(1));
        assert_eq!(genus_identity(&knot("unknot")).unwrap(), None);
        assert!(matches!(genus_identity(&knot("4_1")), Err(Error::Domain(_))));

        // |M| = 8 with t2 = 3 recovers genus 3
        let mut k = KnotRecord::named("g3");
        k.r2 = Some(8);
        k.m = Some(8);
        k.r0 = Some(5);
        k.nu_sharp = Some(5);
        k.provenance.insert("r2".into(), "fixture: test".into());
        k.provenance.insert("M".into(), "fixture: test".into());
        assert_eq!(genus_identity(&k).unwrap(), Some(3));

        // inconsistent stored genus is a contradiction
        k.genus = Some(2);
        assert!(matches!(genus_identity(&k), Err(Error::Contradiction(_))));
    }
}
