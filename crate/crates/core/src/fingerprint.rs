//! Fixed-width mixing used for refinement signatures.
//!
//! Multisets are hashed by summing mixed element hashes, which makes the
//! result independent of iteration order.

const K0: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
pub(crate) fn mix(x: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = x.wrapping_add(K0);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
pub(crate) fn combine(acc: u64, x: u64) -> u64 {
    mix(acc.rotate_left(23) ^ x)
}

pub(crate) fn hash_seq<I: IntoIterator<Item = u64>>(seed: u64, items: I) -> u64 {
    items.into_iter().fold(mix(seed), combine)
}
