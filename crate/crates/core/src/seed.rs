//! Derivation of per-stage seeds from one master seed.

use crate::hash::Fnv1a;

/// Deterministically derives the seed for a named pipeline stage.
pub fn derive(master: u64, stage: &str) -> u64 {
    let mut h = Fnv1a::new();
    h.write_u64(master);
    h.write_str(stage);
    // splitmix64 finalizer to spread FNV's weak high bits
    let mut z = h.finish().wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stages_differ_and_repeat() {
        assert_eq!(derive(7, "synth"), derive(7, "synth"));
        assert_ne!(derive(7, "synth"), derive(7, "head"));
        assert_ne!(derive(7, "synth"), derive(8, "synth"));
    }
}
