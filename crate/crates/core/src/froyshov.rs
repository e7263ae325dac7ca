//! The Froyshov invariant q3 of surgeries with odd numerator.
//!
//! For an F2-homology sphere surgery the value is read off from M alone:
//! +1 strictly between M and 0 on the negative side, -1 strictly between 0
//! and M on the positive side, 0 everywhere else. The numerator being odd
//! while M is a multiple of 4 means the slope can never equal M, so the
//! window boundaries are unreachable.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::knotdb::KnotRecord;
use crate::slope::Slope;

/// Which branch of the surgery formula produced the value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Q3Branch {
    /// M < r < 0
    NegativeWindow,
    /// 0 < r < M
    PositiveWindow,
    Otherwise,
}

impl fmt::Display for Q3Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q3Branch::NegativeWindow => write!(f, "M<r<0"),
            Q3Branch::PositiveWindow => write!(f, "0<r<M"),
            Q3Branch::Otherwise => write!(f, "otherwise"),
        }
    }
}

/// A q3 value, always in {-1, 0, 1}.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Q3Result {
    pub value: i8,
    pub branch: Q3Branch,
}

/// q3 of the p/q surgery. The slope must have odd numerator (otherwise the
/// surgery is not an F2-homology sphere and q3 is undefined); the record
/// must carry M.
pub fn q3_surgery(k: &KnotRecord, s: Slope) -> Result<Q3Result> {
    let m = k.require_m()?;
    if s.numerator() % 2 == 0 {
        return Err(Error::NotF2HomologySphere(s));
    }
    debug_assert!(s.as_integer() != Some(m), "odd numerator cannot hit M");
    let r = if s.cmp_int(m) == Ordering::Greater && s.cmp_int(0) == Ordering::Less {
        Q3Result { value: 1, branch: Q3Branch::NegativeWindow }
    } else if s.cmp_int(0) == Ordering::Greater && s.cmp_int(m) == Ordering::Less {
        Q3Result { value: -1, branch: Q3Branch::PositiveWindow }
    } else {
        Q3Result { value: 0, branch: Q3Branch::Otherwise }
    };
    Ok(r)
}

/// Orientation reversal: q3(K, r) must equal -q3(mirror K, -r).
pub fn q3_duality_check(k: &KnotRecord, s: Slope) -> Result<bool> {
    let lhs = q3_surgery(k, s)?.value;
    let rhs = q3_surgery(&k.mirror(), s.mirror())?.value;
    Ok(lhs == -rhs)
}
