//! Fixed inputs shared by the benchmarks.

use polyflow::io::generate::{generate, GeneratorSpec};
use polyflow::Polygon;

/// Sizes swept by the per-vertex benchmarks.
pub const SIZES: [usize; 4] = [8, 32, 128, 512];

/// A reproducible star polygon with `n` vertices.
pub fn star(n: usize) -> Polygon {
    generate(
        &GeneratorSpec::RandomStar {
            n,
            r_min: 0.5,
            r_max: 1.5,
        },
        0,
    )
    .expect("star generation succeeds")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_requested_size() {
        for n in SIZES {
            assert_eq!(star(n).len(), n);
        }
    }
}
