use std::sync::atomic::{AtomicU64, Ordering};

static FIELD_MULS: AtomicU64 = AtomicU64::new(0);

#[inline]
pub(crate) fn tick() {
    FIELD_MULS.fetch_add(1, Ordering::Relaxed);
}

/// Number of field multiplications performed process-wide since the last [`cost_reset`].
///
/// Additions, negations and inversions are not counted. The tally is shared by
/// every thread, so exact measurements must run single-threaded.
pub fn cost_counter() -> u64 {
    FIELD_MULS.load(Ordering::Relaxed)
}

pub fn cost_reset() {
    FIELD_MULS.store(0, Ordering::Relaxed);
}
