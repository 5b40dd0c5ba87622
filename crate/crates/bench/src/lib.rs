//! Shared fixtures for the criterion benches.

use vilenkin::{GridFunction, GroupSpec};

/// Radix patterns the benches sweep over.
pub const PATTERNS: [&[usize]; 3] = [&[2], &[3], &[2, 3, 4]];

/// A seeded random function on the largest grid of the pattern with at most `cap` points.
pub fn random_grid(pattern: &[usize], cap: usize, seed: u64) -> GridFunction {
    let g = GroupSpec::new(pattern, 24).expect("valid pattern");
    let res = (1..=g.levels())
        .rev()
        .find(|&r| g.power(r) <= cap)
        .expect("cap admits one level");
    GridFunction::random(&g, res, seed).expect("resolution in range")
}

pub fn label(pattern: &[usize]) -> String {
    let parts: Vec<String> = pattern.iter().map(|m| m.to_string()).collect();
    format!("m={}", parts.join(","))
}
