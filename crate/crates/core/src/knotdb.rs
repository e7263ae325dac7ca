//! Knot invariant records, their algebra (mirror, connected sum),
//! validation, parametric families, and file-based ingestion.
//!
//! Records are deliberately partial: every consistency rule is enforced
//! only when all of its fields are present, because tightening partial
//! records is exactly what the propagation engine is for. The r2 and M
//! fields additionally require a provenance note, either `fixture: ...`
//! for a pinned value or `derived: ...` naming the deriving rule.
//!
//! The database file is a UTF-8 JSON document: a top-level array whose
//! elements are record objects, family objects `{"family": "twist" |
//! "pretzel" | "torus", "params": {}}`, or `{"constraints": [...]}`
//! wrappers feeding the propagation engine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagate::ConstraintEdge;

/// A knot's invariant ledger. All fields except the name are optional.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotRecord {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<u64>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_sharp: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slice_genus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clasp_plus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clasp_minus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lspace_f2: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion_averse: Option<bool>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, String>,
}

impl KnotRecord {
    pub fn named(name: &str) -> Self {
        KnotRecord { name: name.to_string(), ..Default::default() }
    }

    fn require<T: Copy>(&self, field: Option<T>, what: &str) -> Result<T> {
        field.ok_or_else(|| Error::IncompleteRecord {
            knot: self.name.clone(),
            missing: what.to_string(),
        })
    }

    pub fn require_r2(&self) -> Result<u64> {
        self.require(self.r2, "r2")
    }

    pub fn require_m(&self) -> Result<i64> {
        self.require(self.m, "M")
    }

    pub fn require_r0(&self) -> Result<u64> {
        self.require(self.r0, "r0")
    }

    pub fn require_nu_sharp(&self) -> Result<i64> {
        self.require(self.nu_sharp, "nu_sharp")
    }

    pub fn require_genus(&self) -> Result<u64> {
        self.require(self.genus, "genus")
    }

    /// M and nu# negate, clasp numbers swap, everything else is preserved.
    /// Amphicheiral-looking records (fixed by the involution) keep their
    /// name; otherwise the name toggles an `m(...)` wrapper.
    pub fn mirror(&self) -> KnotRecord {
        let mut k = self.clone();
        k.m = self.m.map(|v| -v);
        k.nu_sharp = self.nu_sharp.map(|v| -v);
        k.clasp_plus = self.clasp_minus;
        k.clasp_minus = self.clasp_plus;
        let plus = k.provenance.remove("clasp_plus");
        let minus = k.provenance.remove("clasp_minus");
        if let Some(v) = plus {
            k.provenance.insert("clasp_minus".into(), v);
        }
        if let Some(v) = minus {
            k.provenance.insert("clasp_plus".into(), v);
        }
        let mut unchanged = k.clone();
        unchanged.name = self.name.clone();
        if unchanged != *self {
            k.name = match self.name.strip_prefix("m(").and_then(|s| s.strip_suffix(')')) {
                Some(inner) => inner.to_string(),
                None => format!("m({})", self.name),
            };
        }
        k
    }

    /// Connected sum: M is additive and the genus adds; the slice genus and
    /// clasp numbers add only as upper bounds and are annotated as such.
    /// r2, r0 and nu# are left unset (they are not determined by the
    /// summands).
    pub fn connected_sum(&self, other: &KnotRecord) -> KnotRecord {
        let mut k = KnotRecord::named(&format!("{} # {}", self.name, other.name));
        if let (Some(a), Some(b)) = (self.m, other.m) {
            k.m = Some(a + b);
            k.provenance.insert("M".into(), "derived: M is additive under connected sum".into());
        }
        if let (Some(a), Some(b)) = (self.genus, other.genus) {
            k.genus = Some(a + b);
        }
        if let (Some(a), Some(b)) = (self.slice_genus, other.slice_genus) {
            k.slice_genus = Some(a + b);
            k.provenance.insert("slice_genus".into(), "derived: upper bound, g4 is subadditive".into());
        }
        if let (Some(a), Some(b)) = (self.clasp_plus, other.clasp_plus) {
            k.clasp_plus = Some(a + b);
            k.provenance.insert("clasp_plus".into(), "derived: upper bound, clasp numbers are subadditive".into());
        }
        if let (Some(a), Some(b)) = (self.clasp_minus, other.clasp_minus) {
            k.clasp_minus = Some(a + b);
            k.provenance.insert("clasp_minus".into(), "derived: upper bound, clasp numbers are subadditive".into());
        }
        k
    }

    /// All violated consistency rules; empty for a coherent record. Rules
    /// are checked only when every field they mention is present.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |fields: &'static [&'static str], message: String, rule: &'static str| {
            out.push(Violation { fields, message, rule });
        };

        if let Some(r2) = self.r2 {
            if r2 % 4 != 0 {
                push(&["r2"], format!("r2 = {r2} not divisible by 4"), RULE_DIV4);
            }
        }
        if let Some(m) = self.m {
            if m % 4 != 0 {
                push(&["M"], format!("M = {m} not divisible by 4"), RULE_DIV4);
            }
        }
        if let (Some(r2), Some(m)) = (self.r2, self.m) {
            if r2 < m.unsigned_abs() {
                push(&["r2", "M"], format!("r2 = {r2} < |M| = {}", m.unsigned_abs()), RULE_R2_GE_M);
            }
        }
        if let (Some(r2), Some(r0)) = (self.r2, self.r0) {
            if r2 < r0 {
                push(&["r2", "r0"], format!("r2 = {r2} < r0 = {r0}"), RULE_R2_GE_R0);
            }
        }
        if let (Some(r2), Some(r0), Some(m), Some(nu)) = (self.r2, self.r0, self.m, self.nu_sharp) {
            let gap = r2 as i128 - r0 as i128;
            if gap < (m as i128 - nu as i128).abs() {
                push(
                    &["r2", "r0", "M", "nu_sharp"],
                    format!("r2 - r0 = {gap} < |M - nu#| = {}", (m - nu).abs()),
                    RULE_GAP,
                );
            }
        }
        if let (Some(ls), Some(ta)) = (self.lspace_f2, self.torsion_averse) {
            if ls != ta {
                push(&["lspace_f2", "torsion_averse"], "flags disagree".into(), RULE_AVERSE_IFF);
            }
        }
        if let (Some(r2), Some(m)) = (self.r2, self.m) {
            let computed = r2 == m.unsigned_abs();
            if self.lspace_f2.is_some_and(|ls| ls != computed) {
                let msg = if computed {
                    format!("r2 = |M| = {r2} but lspace_f2 = false")
                } else {
                    format!("L-space flag requires r2 = |M|, got r2 = {r2}, M = {m}")
                };
                push(&["lspace_f2", "r2", "M"], msg, RULE_LSPACE_IFF);
            }
            if self.torsion_averse.is_some_and(|ta| ta != computed) {
                push(
                    &["torsion_averse", "r2", "M"],
                    "torsion-averse flag disagrees with r2 = |M|".into(),
                    RULE_AVERSE_IFF,
                );
            }
        }
        if self.lspace_f2 == Some(true) {
            // the identity |nu#| = 2g - 1 holds for non-trivial L-space knots
            if let (Some(g @ 1..), Some(nu)) = (self.genus, self.nu_sharp) {
                if nu.unsigned_abs() as i128 != 2 * g as i128 - 1 {
                    push(
                        &["genus", "nu_sharp"],
                        format!("|nu#| = {} but 2g - 1 = {}", nu.unsigned_abs(), 2 * g as i128 - 1),
                        RULE_NU_GENUS,
                    );
                }
            }
        }
        for (field, set) in [("r2", self.r2.is_some()), ("M", self.m.is_some())] {
            if set && !self.provenance.contains_key(field) {
                push(&["provenance"], format!("{field} is set without a provenance note"), RULE_PROVENANCE);
            }
        }
        out
    }
}

const RULE_DIV4: &str = "r2 and M are divisible by 4";
const RULE_R2_GE_M: &str = "r2 >= |M|";
const RULE_R2_GE_R0: &str = "r2 >= r0";
const RULE_GAP: &str = "r2 - r0 >= |M - nu#|";
const RULE_LSPACE_IFF: &str = "instanton L-space knot over F2 iff r2 = |M|";
const RULE_AVERSE_IFF: &str = "torsion-averse iff instanton L-space knot over F2";
const RULE_NU_GENUS: &str = "L-space knots over F2 have |nu#| = 2g - 1";
const RULE_PROVENANCE: &str = "r2 and M values carry provenance notes";

/// A violated record rule: which fields, what happened, which rule.
#[derive(Clone, Debug)]
pub struct Violation {
    pub fields: &'static [&'static str],
    pub message: String,
    pub rule: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.message, self.rule)
    }
}

/// The parametric families shipped with the database.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Twist,
    Pretzel,
    Torus,
}

/// The n-th twist knot K_n (n >= 1): K_1 is the left-handed trefoil and
/// K_2 the figure eight. Odd knots have r2 = 8m - 4 and M = -4 (n = 2m-1),
/// even knots r2 = 8m and M = 0 (n = 2m); in both cases r0 = r2/4 and
/// nu# = M/4.
pub fn twist_knot(n: i64) -> Result<KnotRecord> {
    if n < 1 {
        return Err(Error::Domain(format!("twist knots are indexed by n >= 1, got {n}")));
    }
    let mut k = KnotRecord::named(&format!("K_{n}"));
    let (r2, m) = if n % 2 == 1 {
        let mm = (n + 1) / 2;
        (8 * mm - 4, -4)
    } else {
        (4 * n, 0)
    };
    k.r2 = Some(r2 as u64);
    k.m = Some(m);
    k.r0 = Some(r2 as u64 / 4);
    k.nu_sharp = Some(m / 4);
    let lspace = r2 as u64 == m.unsigned_abs();
    k.lspace_f2 = Some(lspace);
    k.torsion_averse = Some(lspace);
    k.provenance.insert("r2".into(), "fixture: twist-knot family, pinned by the Brieskorn sphere surgeries".into());
    k.provenance.insert("M".into(), "fixture: twist-knot family, pinned by the crossing-change ladder".into());
    k.provenance.insert("r0".into(), "derived: the family satisfies r2 = 4 r0".into());
    k.provenance.insert("nu_sharp".into(), "derived: the family satisfies M = 4 nu#".into());
    Ok(k)
}

/// The pretzel knot P_n = P(n, -3, 3): slice with r2 = 16.
pub fn pretzel_knot(n: i64) -> KnotRecord {
    let mut k = KnotRecord::named(&format!("P_{n}"));
    k.r2 = Some(16);
    k.m = Some(0);
    k.r0 = Some(4);
    k.nu_sharp = Some(0);
    k.slice_genus = Some(0);
    k.lspace_f2 = Some(false);
    k.torsion_averse = Some(false);
    k.provenance.insert("r2".into(), "fixture: pretzel family P(n,-3,3)".into());
    k.provenance.insert("M".into(), "fixture: the pretzel knots P(n,-3,3) are slice, so M = 0".into());
    k.provenance.insert("r0".into(), "derived: the family satisfies r2 = 4 r0".into());
    k.provenance.insert("nu_sharp".into(), "derived: the family satisfies M = 4 nu#".into());
    k
}

/// The torus knot T(p,q), 2 <= p < q coprime, in the convention where the
/// negative surgery at -pq-1 is a lens space. Only |M| is bounded (the
/// bound travels as a propagation constraint), so M and r2 stay unset.
pub fn torus_knot(p: i64, q: i64) -> Result<KnotRecord> {
    if p < 2 || q <= p {
        return Err(Error::Domain(format!("torus knots need 2 <= p < q, got ({p}, {q})")));
    }
    let g = gcd(p.unsigned_abs(), q.unsigned_abs());
    if g != 1 {
        return Err(Error::Domain(format!("torus knots need coprime parameters, got ({p}, {q})")));
    }
    let nu_abs = p * q - p - q;
    let mut k = KnotRecord::named(&format!("T({p},{q})"));
    k.genus = Some(((p - 1) * (q - 1) / 2) as u64);
    k.nu_sharp = Some(-nu_abs);
    k.r0 = Some(nu_abs as u64);
    k.lspace_f2 = Some(true);
    k.torsion_averse = Some(true);
    k.provenance.insert(
        "nu_sharp".into(),
        "derived: |nu#| = pq-p-q; the sign follows from negative surgeries being lens spaces".into(),
    );
    k.provenance.insert("r0".into(), "derived: L-space knot over F2, so r0 = |nu#|".into());
    Ok(k)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum FamilySpec {
    Twist(i64),
    Pretzel(i64),
    Torus(i64, i64),
}

impl FamilySpec {
    fn kind(&self) -> FamilyKind {
        match self {
            FamilySpec::Twist(_) => FamilyKind::Twist,
            FamilySpec::Pretzel(_) => FamilyKind::Pretzel,
            FamilySpec::Torus(..) => FamilyKind::Torus,
        }
    }

    fn materialize(&self) -> Result<KnotRecord> {
        match *self {
            FamilySpec::Twist(n) => twist_knot(n),
            FamilySpec::Pretzel(n) => Ok(pretzel_knot(n)),
            FamilySpec::Torus(p, q) => torus_knot(p, q),
        }
    }
}

fn parse_family_name(name: &str) -> Option<FamilySpec> {
    if let Some(rest) = name.strip_prefix("K_") {
        return rest.parse().ok().map(FamilySpec::Twist);
    }
    if let Some(rest) = name.strip_prefix("P_") {
        return rest.parse().ok().map(FamilySpec::Pretzel);
    }
    if let Some(inner) = name.strip_prefix("T(").and_then(|s| s.strip_suffix(')')) {
        let (p, q) = inner.split_once(',')?;
        return Some(FamilySpec::Torus(p.trim().parse().ok()?, q.trim().parse().ok()?));
    }
    None
}

/// An immutable, validated collection of records plus registered family
/// generators and any propagation constraints shipped alongside.
pub struct KnotTable {
    records: BTreeMap<String, KnotRecord>,
    families: BTreeSet<FamilyKind>,
    constraints: Vec<ConstraintEdge>,
    cache: RwLock<BTreeMap<String, KnotRecord>>,
}

impl KnotTable {
    /// Parses and validates a database document.
    pub fn load(bytes: &[u8]) -> Result<KnotTable> {
        let (table, violations) = KnotTable::load_lenient(bytes)?;
        if !violations.is_empty() {
            let lines: Vec<String> =
                violations.iter().map(|(name, v)| format!("{name}: {v}")).collect();
            return Err(Error::Validation(lines.join("; ")));
        }
        Ok(table)
    }

    /// Parses a document but collects rule violations instead of rejecting
    /// it, so they can all be reported at once.
    pub fn load_lenient(bytes: &[u8]) -> Result<(KnotTable, Vec<(String, Violation)>)> {
        let entries: Vec<serde_json::Value> = serde_json::from_slice(bytes)
            .map_err(|e| Error::Db(format!("parse error at line {}, column {}: {e}", e.line(), e.column())))?;

        let mut records = BTreeMap::new();
        let mut families = BTreeSet::new();
        let mut constraints = Vec::new();
        let mut violations = Vec::new();

        for (idx, entry) in entries.into_iter().enumerate() {
            if entry.get("family").is_some() {
                #[derive(Deserialize)]
                struct FamilyEntry {
                    family: FamilyKind,
                    #[serde(default)]
                    #[allow(dead_code)]
                    params: serde_json::Value,
                }
                let fe: FamilyEntry = serde_json::from_value(entry)
                    .map_err(|e| Error::Db(format!("entry {idx}: bad family object: {e}")))?;
                families.insert(fe.family);
            } else if entry.get("constraints").is_some() {
                #[derive(Deserialize)]
                struct ConstraintsEntry {
                    constraints: Vec<ConstraintEdge>,
                }
                let ce: ConstraintsEntry = serde_json::from_value(entry)
                    .map_err(|e| Error::Db(format!("entry {idx}: bad constraint: {e}")))?;
                constraints.extend(ce.constraints);
            } else {
                let rec: KnotRecord = serde_json::from_value(entry)
                    .map_err(|e| Error::Db(format!("entry {idx}: bad record: {e}")))?;
                violations.extend(rec.validate().into_iter().map(|v| (rec.name.clone(), v)));
                if records.insert(rec.name.clone(), rec.clone()).is_some() {
                    return Err(Error::Db(format!("duplicate record name '{}'", rec.name)));
                }
            }
        }

        let table =
            KnotTable { records, families, constraints, cache: RwLock::new(BTreeMap::new()) };
        Ok((table, violations))
    }

    /// The database bundled with the crate.
    pub fn bundled() -> &'static KnotTable {
        static TABLE: OnceLock<KnotTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            KnotTable::load(include_bytes!("../data/knots.json")).expect("bundled database is valid")
        })
    }

    /// Looks up a named record or materializes a family instance such as
    /// `K_7`, `P_-2` or `T(3,5)`.
    pub fn get(&self, name: &str) -> Result<KnotRecord> {
        if let Some(r) = self.records.get(name) {
            return Ok(r.clone());
        }
        if let Some(r) = self.cache.read().unwrap().get(name) {
            return Ok(r.clone());
        }
        if let Some(spec) = parse_family_name(name) {
            if self.families.contains(&spec.kind()) {
                let rec = spec.materialize()?;
                debug_assert!(rec.validate().is_empty(), "family instance {name} validates");
                self.cache.write().unwrap().insert(name.to_string(), rec.clone());
                return Ok(rec);
            }
        }
        Err(Error::UnknownKnot(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(String::as_str)
    }

    pub fn records(&self) -> impl Iterator<Item = &KnotRecord> {
        self.records.values()
    }

    pub fn constraints(&self) -> &[ConstraintEdge] {
        &self.constraints
    }

    pub fn has_family(&self, kind: FamilyKind) -> bool {
        self.families.contains(&kind)
    }

    /// A deterministic sample of fixtures for scans: every named record
    /// plus small instances of each registered family.
    pub fn fixture_records(&self) -> Vec<KnotRecord> {
        let mut out: Vec<KnotRecord> = self.records.values().cloned().collect();
        if self.has_family(FamilyKind::Twist) {
            out.extend((1..=8).map(|n| twist_knot(n).unwrap()));
        }
        if self.has_family(FamilyKind::Pretzel) {
            out.extend((-2..=2).map(pretzel_knot));
        }
        if self.has_family(FamilyKind::Torus) {
            for (p, q) in [(2, 3), (2, 5), (3, 4), (3, 5)] {
                out.push(torus_knot(p, q).unwrap());
            }
        }
        out
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
