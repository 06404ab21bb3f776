//! Committed counterexample polygons, printed by
//! `examples/search_fixtures.rs`.

/// Simple, nonconvex, and its area grows under the linear flow before it
/// eventually shrinks.
pub const BOOMERANG: [[f64; 2]; 26] = [
    [0.0, -1.0],
    [0.167461, -0.833333],
    [0.334922, -0.666667],
    [0.502384, -0.5],
    [0.669845, -0.333333],
    [0.837306, -0.166667],
    [1.004767, 0.0],
    [1.172229, 0.166667],
    [1.33969, 0.333333],
    [1.507151, 0.5],
    [1.674612, 0.666667],
    [1.842074, 0.833333],
    [2.009535, 1.0],
    [0.0, -0.597543],
    [-2.009535, 1.0],
    [-1.842074, 0.833333],
    [-1.674612, 0.666667],
    [-1.507151, 0.5],
    [-1.33969, 0.333333],
    [-1.172229, 0.166667],
    [-1.004767, 0.0],
    [-0.837306, -0.166667],
    [-0.669845, -0.333333],
    [-0.502384, -0.5],
    [-0.334922, -0.666667],
    [-0.167461, -0.833333],
];

/// Simple at t = 0, with a sparse outer arc and a dense inner arc; it
/// self-intersects under the linear flow.
pub const CRESCENT: [[f64; 2]; 20] = [
    [0.954966, 0.296715],
    [0.410664, 0.911787],
    [-0.410664, 0.911787],
    [-0.954966, 0.296715],
    [-0.78062, 0.377669],
    [-0.71573, 0.489623],
    [-0.634904, 0.590675],
    [-0.539941, 0.678575],
    [-0.432955, 0.751366],
    [-0.316329, 0.807426],
    [-0.19266, 0.845508],
    [-0.0647, 0.864763],
    [0.0647, 0.864763],
    [0.19266, 0.845508],
    [0.316329, 0.807426],
    [0.432955, 0.751366],
    [0.539941, 0.678575],
    [0.634904, 0.590675],
    [0.71573, 0.489623],
    [0.78062, 0.377669],
];
