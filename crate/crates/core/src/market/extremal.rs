use super::{Allocation, MarketInstance};
use crate::error::{Error, Result};

/// Rounds every positive buyer quality to the full gain `g(A)`; zero stays zero.
/// Transfers are untouched, so revenue is unchanged.
pub fn extremalize(instance: &MarketInstance, allocation: &Allocation) -> Result<Allocation> {
    if !instance.edges.is_empty() {
        return Err(Error::UnsupportedScope(
            "extremalization is only defined without leakage edges".into(),
        ));
    }
    let full = instance.gain_of(&allocation.participating);
    let mut out = allocation.clone();
    for q in &mut out.qualities {
        *q = if *q > 0.0 { full } else { 0.0 };
    }
    Ok(out)
}
