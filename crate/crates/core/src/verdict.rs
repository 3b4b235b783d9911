use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use jetlie_kernel::{certify_zero_with, find_witness, Expr, KernelError, Point, Sampler, Symbol, ZeroCheck, Q};

use crate::error::CoreError;

/// Points used to cross-check every symbolic zero.
pub const CROSS_CHECK_POINTS: usize = 3;

/// Seed for one check, derived from the run seed and the check id so that results do
/// not depend on evaluation order.
pub fn check_seed(seed: u64, id: &str) -> u64 {
    let mut h = DefaultHasher::new();
    seed.hash(&mut h);
    id.hash(&mut h);
    h.finish()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Exact zero, confirmed at sampled points.
    Pass,
    /// Nonzero residual with a point where it evaluates to a nonzero rational.
    Fail { residual: Expr, witness: Point, value: Q },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Decides whether `sum(summands)` vanishes.
pub fn decide(summands: &[Expr], extra: &[Symbol], seed: u64, id: &str) -> Result<Verdict, CoreError> {
    decide_with(summands, None, extra, seed, id, &|_| Ok(()))
}

/// As [`decide`], for a residual obtained from `summands` by substitution. The
/// unsubstituted summands are evaluated at points completed by `extend`.
pub fn decide_with(
    summands: &[Expr],
    residual: Option<&Expr>,
    extra: &[Symbol],
    seed: u64,
    id: &str,
    extend: &dyn Fn(&mut Point) -> Result<(), KernelError>,
) -> Result<Verdict, CoreError> {
    let residual = match residual {
        Some(r) => r.clone(),
        None => Expr::sum(summands.iter()),
    };
    let mut sampler = Sampler::new(check_seed(seed, id));
    if residual.is_zero() {
        match certify_zero_with(summands, extra, &mut sampler, CROSS_CHECK_POINTS, extend) {
            ZeroCheck::Confirmed { .. } => Ok(Verdict::Pass),
            ZeroCheck::Contradicted { .. } => Err(CoreError::CrossCheckFailed(id.to_string())),
            ZeroCheck::Degenerate => Err(CoreError::DegeneratePoint),
        }
    } else {
        match find_witness(&residual, extra, &mut sampler) {
            Some((witness, value)) => Ok(Verdict::Fail {
                residual,
                witness,
                value,
            }),
            None => Err(CoreError::DegeneratePoint),
        }
    }
}
