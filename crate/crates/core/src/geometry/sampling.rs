//! Deterministic sampling of regular points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{eval, GeometryError, MetricField};
use crate::matcore::ColumnVector;

const MAX_ATTEMPTS_PER_POINT: usize = 1000;

/// Draws `count` points uniformly from the metric's sample box, rejecting
/// points on the singular locus or where `g` is not invertible.
pub fn sample_regular_points<M: MetricField + ?Sized>(
    field: &M,
    count: usize,
    seed: u64,
) -> Result<Vec<ColumnVector>, GeometryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = field.sample_box();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > MAX_ATTEMPTS_PER_POINT * count.max(1) {
            return Err(GeometryError::InvalidParameter(format!(
                "{}: sample box yields too few regular points",
                field.name()
            )));
        }
        let x = ColumnVector::from(bounds.iter().map(|&(lo, hi)| if lo == hi { lo } else { rng.gen_range(lo..hi) }).collect::<Vec<_>>());
        if field.sample_filter(&x) && matches!(eval(field, &x).map(|g| g.inverse()), Ok(Ok(_))) {
            out.push(x);
        }
    }
    Ok(out)
}
