//! Built-in spaces. All use the normalization `Q = -B`, so every `b_i = 1`.

use crate::error::{Error, Result};
use crate::space::HomogeneousSpace;

/// Names accepted by [`builtin_space`].
pub const BUILTIN_NAMES: [&str; 3] = ["E6_Sp3xSp1", "G2_U2_long", "F4_SU3xSU2xU1"];

/// Looks up a built-in space by name.
pub fn builtin_space(name: &str) -> Result<HomogeneousSpace> {
    let (dims, triples): (Vec<u32>, Vec<([usize; 3], f64)>) = match name {
        // generalised Wallach space E6/Sp(3)xSp(1)
        "E6_Sp3xSp1" => (vec![14, 28, 12], vec![([1, 2, 3], 7.0 / 2.0)]),
        // flag manifold G2/U(2), U(2) on the long root
        "G2_U2_long" => (
            vec![4, 2, 4],
            vec![([1, 2, 3], 1.0 / 2.0), ([1, 1, 2], 2.0 / 3.0)],
        ),
        "F4_SU3xSU2xU1" => (
            vec![12, 18, 4, 6],
            vec![
                ([2, 2, 4], 2.0),
                ([1, 1, 2], 2.0),
                ([1, 2, 3], 1.0),
                ([1, 3, 4], 2.0 / 3.0),
            ],
        ),
        _ => return Err(Error::UnknownSpace(name.to_string())),
    };
    let killing = vec![1.0; dims.len()];
    HomogeneousSpace::new(name, dims, killing, &triples)
}

/// A three-summand generalised Wallach space: only `[123] = a` may be nonzero.
pub fn wallach_space(name: &str, dims: [u32; 3], a: f64) -> Result<HomogeneousSpace> {
    let triples = if a == 0.0 { vec![] } else { vec![([1, 2, 3], a)] };
    HomogeneousSpace::new(name, dims.to_vec(), vec![1.0; 3], &triples)
}

pub fn builtin_spaces() -> Vec<HomogeneousSpace> {
    BUILTIN_NAMES
        .iter()
        .map(|name| builtin_space(name).expect("built-ins are valid"))
        .collect()
}
