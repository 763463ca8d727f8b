//! Scalar curvature, its extension to subalgebra slices, and Ricci curvature
//! of diagonal invariant metrics.
//!
//! Triple sums run over [`StructureConstants::ordered`](crate::space::StructureConstants::ordered),
//! i.e. over every ordered `(i, j, k)` with `[ijk] != 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::space::{HomogeneousSpace, MetricCoefficients, TensorCoefficients};

/// Ricci tensor of a diagonal metric: `Ric g = sum R_i Q|m_i`, with
/// eigenvalues `r_i = R_i / x_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RicciCoefficients {
    pub coefficients: Vec<f64>,
    pub eigenvalues: Vec<f64>,
}

/// `S(g) = 1/2 sum d_i b_i / x_i - 1/4 sum [ijk] x_k / (x_i x_j)`.
pub fn scalar_curvature(space: &HomogeneousSpace, x: &MetricCoefficients) -> Result<f64> {
    space.check_len(x.len())?;
    Ok(hat_scalar_curvature_full(space, space.full_set(), x))
}

/// Extension of `S` to scalar products `h = sum y_i Q|m_i` on the slice of
/// the subalgebra `J`. `y` lists the coefficients of the members of `J` in
/// increasing index order.
///
/// On the full index set this coincides with [`scalar_curvature`]
/// bit-for-bit.
pub fn hat_scalar_curvature(space: &HomogeneousSpace, set: IndexSet, y: &[f64]) -> Result<f64> {
    let full = scatter(space, set, y, "y")?;
    Ok(hat_scalar_curvature_full(space, set, &full))
}

/// Evaluates the slice functional with coefficients stored at their summand
/// positions; entries outside `set` are never read.
pub(crate) fn hat_scalar_curvature_full(space: &HomogeneousSpace, set: IndexSet, y: &[f64]) -> f64 {
    let killing: f64 = set
        .iter()
        .map(|i| space.dim(i) * space.killing()[i] / y[i])
        .sum();
    let mut mixed = 0.0;
    let mut inner = 0.0;
    for t in space.constants().ordered() {
        if !set.contains(t.i) {
            continue;
        }
        match (set.contains(t.j), set.contains(t.k)) {
            (true, true) => inner += t.value * y[t.k] / (y[t.i] * y[t.j]),
            (false, false) => mixed += t.value / y[t.i],
            _ => {}
        }
    }
    0.5 * killing - 0.5 * mixed - 0.25 * inner
}

/// `tr_h T|n = sum over i in set of d_i z_i / y_i`; on the full set this is
/// `tr_g T`, and `M_T` is its level set at 1.
pub fn metric_trace_of_t(
    space: &HomogeneousSpace,
    set: IndexSet,
    y: &[f64],
    z: &TensorCoefficients,
) -> Result<f64> {
    space.check_len(z.len())?;
    let full = scatter(space, set, y, "y")?;
    Ok(trace_full(space, set, &full, z))
}

pub(crate) fn trace_full(space: &HomogeneousSpace, set: IndexSet, y: &[f64], z: &[f64]) -> f64 {
    set.iter().map(|i| space.dim(i) * z[i] / y[i]).sum()
}

/// Partial derivatives of `S` with respect to the `x_m`.
pub fn scalar_gradient(space: &HomogeneousSpace, x: &MetricCoefficients) -> Result<Vec<f64>> {
    space.check_len(x.len())?;
    let mut grad: Vec<f64> = (0..space.num_summands())
        .map(|m| -0.5 * space.dim(m) * space.killing()[m] / (x[m] * x[m]))
        .collect();
    for t in space.constants().ordered() {
        let term = t.value * x[t.k] / (x[t.i] * x[t.j]);
        grad[t.k] -= 0.25 * t.value / (x[t.i] * x[t.j]);
        grad[t.i] += 0.25 * term / x[t.i];
        grad[t.j] += 0.25 * term / x[t.j];
    }
    Ok(grad)
}

/// Ricci coefficients from the closed form
/// `r_m = b_m/(2x_m) + 1/(4d_m) sum [mjk] x_m/(x_j x_k) - 1/(2d_m) sum [mjk] x_k/(x_m x_j)`.
///
/// These satisfy `R_m = -(x_m^2 / d_m) dS/dx_m` and `sum d_m r_m = S(g)`.
pub fn ricci_coefficients(
    space: &HomogeneousSpace,
    x: &MetricCoefficients,
) -> Result<RicciCoefficients> {
    space.check_len(x.len())?;
    let s = space.num_summands();
    let mut plus = vec![0.0; s];
    let mut minus = vec![0.0; s];
    for t in space.constants().ordered() {
        let m = t.i;
        plus[m] += t.value * x[m] / (x[t.j] * x[t.k]);
        minus[m] += t.value * x[t.k] / (x[m] * x[t.j]);
    }
    let eigenvalues: Vec<f64> = (0..s)
        .map(|m| {
            let d = space.dim(m);
            space.killing()[m] / (2.0 * x[m]) + plus[m] / (4.0 * d) - minus[m] / (2.0 * d)
        })
        .collect();
    let coefficients = eigenvalues.iter().zip(x.iter()).map(|(r, x)| r * x).collect();
    Ok(RicciCoefficients {
        coefficients,
        eigenvalues,
    })
}

/// Places slice coefficients at their summand positions.
fn scatter(space: &HomogeneousSpace, set: IndexSet, y: &[f64], what: &'static str) -> Result<Vec<f64>> {
    space.check_set(set)?;
    if y.len() != set.len() {
        return Err(Error::DimensionMismatch {
            expected: set.len(),
            got: y.len(),
        });
    }
    let mut full = vec![f64::NAN; space.num_summands()];
    for (n, (i, &v)) in set.iter().zip(y).enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::NotPositive {
                what,
                index: n,
                value: v,
            });
        }
        full[i] = v;
    }
    Ok(full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_space;

    /// Brute-force `S` over all `s^3` ordered triples.
    fn scalar_oracle(space: &HomogeneousSpace, x: &[f64]) -> f64 {
        let s = space.num_summands();
        let c = space.constants();
        let mut total = 0.0;
        for i in 0..s {
            total += 0.5 * space.dim(i) * space.killing()[i] / x[i];
            for j in 0..s {
                for k in 0..s {
                    total -= 0.25 * c.get(i, j, k) * x[k] / (x[i] * x[j]);
                }
            }
        }
        total
    }

    fn metric(v: &[f64]) -> MetricCoefficients {
        MetricCoefficients::new(v.to_vec()).unwrap()
    }

    fn single_summand() -> HomogeneousSpace {
        HomogeneousSpace::new("sphere-like", vec![4], vec![1.0], &[]).unwrap()
    }

    #[test]
    fn single_summand_values() {
        let space = single_summand();
        assert_eq!(scalar_curvature(&space, &metric(&[2.0])).unwrap(), 1.0);
        assert_eq!(scalar_gradient(&space, &metric(&[1.0])).unwrap(), vec![-2.0]);
        for x in [0.5, 1.0, 3.0] {
            let ric = ricci_coefficients(&space, &metric(&[x])).unwrap();
            assert!((ric.eigenvalues[0] - 1.0 / (2.0 * x)).abs() < 1e-15);
            assert!((ric.coefficients[0] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn g2_and_e6_scalar_curvature() {
        let g2 = builtin_space("G2_U2_long").unwrap();
        let x = [1.0, 1.0, 1.0];
        assert!((scalar_oracle(&g2, &x) - 3.75).abs() < 1e-14);
        assert!((scalar_curvature(&g2, &metric(&x)).unwrap() - 3.75).abs() < 1e-14);

        let e6 = builtin_space("E6_Sp3xSp1").unwrap();
        assert!((scalar_oracle(&e6, &x) - 21.75).abs() < 1e-13);
        assert!((scalar_curvature(&e6, &metric(&x)).unwrap() - 21.75).abs() < 1e-13);
    }

    #[test]
    fn g2_ricci_at_unit_metric() {
        let g2 = builtin_space("G2_U2_long").unwrap();
        let ric = ricci_coefficients(&g2, &metric(&[1.0, 1.0, 1.0])).unwrap();
        let expected = [17.0 / 48.0, 7.0 / 24.0, 7.0 / 16.0];
        for (r, e) in ric.eigenvalues.iter().zip(expected) {
            assert!((r - e).abs() < 1e-15, "{r} vs {e}");
        }
        let trace: f64 = (0..3).map(|i| g2.dim(i) * ric.eigenvalues[i]).sum();
        assert!((trace - 3.75).abs() < 1e-14);
    }

    #[test]
    fn f4_hat_values() {
        let f4 = builtin_space("F4_SU3xSU2xU1").unwrap();
        let j = IndexSet::from_one_based([2, 4]).unwrap();
        let v = hat_scalar_curvature(&f4, j, &[1.0, 1.0]).unwrap();
        assert!((v - (7.0 + 4.0 / 3.0 - 0.5)).abs() < 1e-14);

        // 1/2 * 6/3 - 1/2 * (10/3)/3
        let v = hat_scalar_curvature(&f4, IndexSet::singleton(3), &[3.0]).unwrap();
        assert!((v - 4.0 / 9.0).abs() < 1e-15, "{v}");
    }

    #[test]
    fn f4_hat_matches_closed_form_in_u_v() {
        let f4 = builtin_space("F4_SU3xSU2xU1").unwrap();
        let j = IndexSet::from_one_based([2, 4]).unwrap();
        for (u, v) in [(0.5, 2.0), (3.0, 0.7), (10.0, 10.0)] {
            let got = hat_scalar_curvature(&f4, j, &[u, v]).unwrap();
            let expected = 7.0 / u + 4.0 / (3.0 * v) - v / (2.0 * u * u);
            assert!((got - expected).abs() < 1e-13 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn hat_on_full_set_is_scalar_curvature() {
        let g2 = builtin_space("G2_U2_long").unwrap();
        let x = [1.3, 0.4, 2.2];
        assert_eq!(
            hat_scalar_curvature(&g2, g2.full_set(), &x).unwrap(),
            scalar_curvature(&g2, &metric(&x)).unwrap()
        );
    }

    #[test]
    fn traces() {
        let f4 = builtin_space("F4_SU3xSU2xU1").unwrap();
        let z = TensorCoefficients::new(vec![1.0; 4]).unwrap();
        let j = IndexSet::from_one_based([2, 4]).unwrap();
        let (u, v) = (36.0, 12.0);
        let t = metric_trace_of_t(&f4, j, &[u, v], &z).unwrap();
        assert!((t - (18.0 / u + 6.0 / v)).abs() < 1e-15);

        let g2 = builtin_space("G2_U2_long").unwrap();
        let z = TensorCoefficients::new(vec![1.0; 3]).unwrap();
        assert_eq!(metric_trace_of_t(&g2, g2.full_set(), &[1.0; 3], &z).unwrap(), 10.0);

        let single = single_summand();
        let z = TensorCoefficients::new(vec![1.0]).unwrap();
        assert_eq!(metric_trace_of_t(&single, single.full_set(), &[4.0], &z).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        let g2 = builtin_space("G2_U2_long").unwrap();
        assert!(matches!(
            scalar_curvature(&g2, &metric(&[1.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
        let j = IndexSet::from_one_based([2, 3]).unwrap();
        assert!(hat_scalar_curvature(&g2, j, &[1.0, -1.0]).is_err());
        assert!(hat_scalar_curvature(&g2, j, &[1.0]).is_err());
        assert!(hat_scalar_curvature(&g2, IndexSet::singleton(5), &[1.0]).is_err());
    }
}
