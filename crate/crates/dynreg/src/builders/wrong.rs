//! Hand-built plausible-but-wrong programs for adversary testing.
