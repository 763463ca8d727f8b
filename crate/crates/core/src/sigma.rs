//! The supremum `sigma(k, T)` of the slice functional, `T`-apical
//! subalgebras, and the resulting existence verdict.
//!
//! `sigma(J)` is the larger of the best interior critical value on the slice
//! of `J` and the `sigma` of the maximal closed subsets of `J`; the
//! supremum is attained exactly when the interior value reaches the
//! recursive one. A `T`-apical set is proper, has attained `sigma`, and
//! dominates `sigma` of every maximal intermediate subalgebra. Given one,
//! the existence of a solution of `Ric g = cT` with `c > 0` is guaranteed
//! when
//!
//! ```text
//! sigma(J) * sum_{i not in J} d_i z_i  <  1/2 sum_{i not in J} d_i b_i - 1/4 sum_{i,j,k not in J} [ijk].
//! ```
//!
//! The condition is sufficient only; its failure says nothing about
//! non-existence.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::solver::{self, OptimizationReport, SolverOptions};
use crate::space::{HomogeneousSpace, TensorCoefficients};
use crate::subalgebra::{self, SubalgebraLattice};

/// Relative band around zero margin reported as [`VerdictStatus::Boundary`].
pub const STRICT_TOLERANCE: f64 = 1e-10;
/// Relative tolerance for comparing an interior maximum against the
/// recursive supremum, and for ties between `sigma` values.
pub const ATTAINMENT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaSource {
    ClosedFormIrreducible,
    InteriorMaximum,
    BoundaryRecursion,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaResult {
    pub set: IndexSet,
    pub value: f64,
    pub attained: bool,
    /// Slice coefficients, in increasing index order, at which the supremum
    /// is attained.
    pub witness: Option<Vec<f64>>,
    pub source: SigmaSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Guaranteed,
    Inconclusive,
    DegenerateConstantRicci,
    Boundary,
}

impl VerdictStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictStatus::Guaranteed => "guaranteed",
            VerdictStatus::Inconclusive => "inconclusive",
            VerdictStatus::DegenerateConstantRicci => "degenerate_constant_ricci",
            VerdictStatus::Boundary => "boundary",
        }
    }
}

/// Outcome of the existence test. All fields but `status` are absent for
/// degenerate spaces (vanishing structure constants), where every metric
/// has the same Ricci curvature.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExistenceVerdict {
    pub status: VerdictStatus,
    pub apical: Option<IndexSet>,
    pub sigma: Option<SigmaResult>,
    /// `sigma * tr_Q T` on the complement of the apical set.
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    /// Every `T`-apical set found; `apical` is chosen among them.
    pub candidates: Vec<IndexSet>,
}

impl ExistenceVerdict {
    fn degenerate() -> Self {
        ExistenceVerdict {
            status: VerdictStatus::DegenerateConstantRicci,
            apical: None,
            sigma: None,
            lhs: None,
            rhs: None,
            margin: None,
            candidates: Vec::new(),
        }
    }

    fn decide(sigma: SigmaResult, lhs: f64, rhs: f64, candidates: Vec<IndexSet>) -> Self {
        let margin = rhs - lhs;
        let band = STRICT_TOLERANCE * rhs.abs().max(1.0);
        let status = if margin > band {
            VerdictStatus::Guaranteed
        } else if margin.abs() <= band {
            VerdictStatus::Boundary
        } else {
            VerdictStatus::Inconclusive
        };
        ExistenceVerdict {
            status,
            apical: Some(sigma.set),
            sigma: Some(sigma),
            lhs: Some(lhs),
            rhs: Some(rhs),
            margin: Some(margin),
            candidates,
        }
    }
}

/// Result of the apical search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApicalSearch {
    pub apical: SigmaResult,
    pub candidates: Vec<IndexSet>,
    /// Largest `sigma` among maximal intermediate subalgebras.
    pub maximal_sigma: f64,
}

/// Closed form for a single summand `{i}`:
/// `(1/(d_i z_i)) (d_i b_i / 2 - [iii]/4 - 1/2 sum_{j,k != i} [ijk])`.
pub fn sigma_irreducible(
    space: &HomogeneousSpace,
    i: usize,
    z: &TensorCoefficients,
) -> Result<SigmaResult> {
    space.check_len(z.len())?;
    let set = IndexSet::singleton(i);
    if i >= space.num_summands() {
        return Err(Error::IndexOutOfRange {
            set,
            s: space.num_summands(),
        });
    }
    if !subalgebra::is_bracket_closed(space, set)? {
        return Err(Error::NotClosed(set));
    }
    let c = space.constants();
    let cross: f64 = c
        .ordered()
        .iter()
        .filter(|t| t.i == i && t.j != i && t.k != i)
        .map(|t| t.value)
        .sum();
    let d = space.dim(i);
    let value = (0.5 * d * space.killing()[i] - 0.25 * c.get(i, i, i) - 0.5 * cross) / (d * z[i]);
    Ok(SigmaResult {
        set,
        value,
        attained: true,
        witness: Some(vec![d * z[i]]),
        source: SigmaSource::ClosedFormIrreducible,
    })
}

/// Memoizing evaluator of `sigma` for one space and one tensor.
pub struct SigmaContext<'a> {
    space: &'a HomogeneousSpace,
    z: &'a TensorCoefficients,
    options: SolverOptions,
    memo: HashMap<IndexSet, SigmaResult>,
    reports: HashMap<IndexSet, OptimizationReport>,
}

impl<'a> SigmaContext<'a> {
    pub fn new(
        space: &'a HomogeneousSpace,
        z: &'a TensorCoefficients,
        options: SolverOptions,
    ) -> Result<Self> {
        space.check_len(z.len())?;
        Ok(SigmaContext {
            space,
            z,
            options,
            memo: HashMap::new(),
            reports: HashMap::new(),
        })
    }

    /// The slice optimization run for `set`, if `sigma(set)` needed one.
    pub fn report(&self, set: IndexSet) -> Option<&OptimizationReport> {
        self.reports.get(&set)
    }

    pub fn sigma(&mut self, set: IndexSet) -> Result<SigmaResult> {
        if let Some(hit) = self.memo.get(&set) {
            return Ok(hit.clone());
        }
        if !subalgebra::is_bracket_closed(self.space, set)? {
            return Err(Error::NotClosed(set));
        }
        let result = if set.len() == 1 {
            sigma_irreducible(self.space, set.iter().next().unwrap(), self.z)?
        } else {
            self.sigma_composite(set)?
        };
        self.memo.insert(set, result.clone());
        Ok(result)
    }

    fn sigma_composite(&mut self, set: IndexSet) -> Result<SigmaResult> {
        let report = solver::maximize_hat_s_on_slice(self.space, set, self.z, &self.options)?;
        let mut recursive: Option<SigmaResult> = None;
        for sub in subalgebra::maximal_within(self.space, set)? {
            let sub_sigma = self.sigma(sub)?;
            if recursive.as_ref().is_none_or(|best| sub_sigma.value > best.value) {
                recursive = Some(sub_sigma);
            }
        }
        let interior = report.converged.then(|| (report.value, report.argmax.clone()));
        self.reports.insert(set, report);
        let result = match (interior, recursive) {
            (Some((value, witness)), None) => SigmaResult {
                set,
                value,
                attained: true,
                witness: Some(witness),
                source: SigmaSource::InteriorMaximum,
            },
            (Some((value, witness)), Some(rec))
                if value >= rec.value - ATTAINMENT_TOLERANCE * rec.value.abs().max(1.0) =>
            {
                SigmaResult {
                    set,
                    value: value.max(rec.value),
                    attained: true,
                    witness: Some(witness),
                    source: SigmaSource::InteriorMaximum,
                }
            }
            (_, Some(rec)) => SigmaResult {
                set,
                value: rec.value,
                attained: false,
                witness: None,
                source: SigmaSource::BoundaryRecursion,
            },
            (None, None) => {
                return Err(Error::Optimizer {
                    set,
                    message: "no interior maximum found and no smaller subalgebra to recurse into"
                        .into(),
                });
            }
        };
        Ok(result)
    }

    /// Finds a `T`-apical index set. Among all candidates the largest set
    /// wins, then the lexicographically smallest.
    pub fn find_t_apical(&mut self, lattice: &SubalgebraLattice) -> Result<ApicalSearch> {
        if lattice.all_proper.is_empty() {
            return Err(Error::NoIntermediateSubalgebra);
        }
        let mut maximal_sigma = f64::NEG_INFINITY;
        for &set in &lattice.maximal {
            maximal_sigma = maximal_sigma.max(self.sigma(set)?.value);
        }
        let threshold = maximal_sigma - ATTAINMENT_TOLERANCE * maximal_sigma.abs().max(1.0);
        let mut candidates = Vec::new();
        for &set in &lattice.all_proper {
            let sigma = self.sigma(set)?;
            if sigma.attained && sigma.value >= threshold {
                candidates.push(sigma);
            }
        }
        candidates.sort_by(|a, b| b.set.len().cmp(&a.set.len()).then_with(|| a.set.lex_cmp(b.set)));
        let Some(apical) = candidates.first().cloned() else {
            return Err(Error::Optimizer {
                set: self.space.full_set(),
                message: "no T-apical subalgebra found".into(),
            });
        };
        Ok(ApicalSearch {
            apical,
            candidates: candidates.iter().map(|c| c.set).collect(),
            maximal_sigma,
        })
    }
}

/// `sigma(J, T)` for a bracket-closed `J`.
pub fn sigma(
    space: &HomogeneousSpace,
    set: IndexSet,
    z: &TensorCoefficients,
    options: &SolverOptions,
) -> Result<SigmaResult> {
    SigmaContext::new(space, z, options.clone())?.sigma(set)
}

pub fn find_t_apical(
    space: &HomogeneousSpace,
    z: &TensorCoefficients,
    options: &SolverOptions,
) -> Result<ApicalSearch> {
    let lattice = subalgebra::intermediate_subalgebras(space)?;
    SigmaContext::new(space, z, options.clone())?.find_t_apical(&lattice)
}

/// `sigma` of every intermediate subalgebra, in lattice order.
pub fn sigma_table(
    space: &HomogeneousSpace,
    z: &TensorCoefficients,
    options: &SolverOptions,
) -> Result<Vec<SigmaResult>> {
    let lattice = subalgebra::intermediate_subalgebras(space)?;
    let mut ctx = SigmaContext::new(space, z, options.clone())?;
    lattice.all_proper.iter().map(|&set| ctx.sigma(set)).collect()
}

/// Runs the apical search and evaluates the sufficient condition.
pub fn existence_check(
    space: &HomogeneousSpace,
    z: &TensorCoefficients,
    options: &SolverOptions,
) -> Result<ExistenceVerdict> {
    space.check_len(z.len())?;
    if space.constants().is_zero() {
        return Ok(ExistenceVerdict::degenerate());
    }
    let search = find_t_apical(space, z, options)?;
    let rest = search.apical.set.complement(space.num_summands());
    let trace: f64 = rest.iter().map(|i| space.dim(i) * z[i]).sum();
    let killing: f64 = rest.iter().map(|i| space.dim(i) * space.killing()[i]).sum();
    let inner: f64 = space
        .constants()
        .ordered()
        .iter()
        .filter(|t| rest.contains(t.i) && rest.contains(t.j) && rest.contains(t.k))
        .map(|t| t.value)
        .sum();
    let lhs = search.apical.value * trace;
    let rhs = 0.5 * killing - 0.25 * inner;
    Ok(ExistenceVerdict::decide(search.apical, lhs, rhs, search.candidates))
}

/// Closed-form check for a generalised Wallach space with dimensions `d`,
/// `[123] = a` and `b_i = 1`: the apical summand `p` maximizes
/// `(d_p - 2a) / (2 d_p z_p)`, and existence is guaranteed when
/// `(d_p - 2a) sum_{i != p} d_i z_i < (d - d_p) d_p z_p`.
pub fn wallach_existence_check(
    d: [u32; 3],
    a: f64,
    z: &TensorCoefficients,
) -> Result<ExistenceVerdict> {
    if let Some(n) = d.iter().position(|&d| d == 0) {
        return Err(Error::InvalidValue {
            path: format!("d[{n}]"),
            message: "summand dimension must be at least 1".into(),
        });
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidValue {
            path: "a".into(),
            message: format!("[123] = {a} must be finite and non-negative"),
        });
    }
    if z.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: z.len(),
        });
    }
    if a == 0.0 {
        return Ok(ExistenceVerdict::degenerate());
    }
    let dims = d.map(f64::from);
    let sigmas: Vec<f64> = (0..3)
        .map(|i| (dims[i] - 2.0 * a) / (2.0 * dims[i] * z[i]))
        .collect();
    let best = sigmas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let threshold = best - ATTAINMENT_TOLERANCE * best.abs().max(1.0);
    let candidates: Vec<usize> = (0..3).filter(|&i| sigmas[i] >= threshold).collect();
    let p = candidates[0];
    let trace: f64 = (0..3).filter(|&i| i != p).map(|i| dims[i] * z[i]).sum();
    let total: f64 = dims.iter().sum();
    let sigma = SigmaResult {
        set: IndexSet::singleton(p),
        value: sigmas[p],
        attained: true,
        witness: Some(vec![dims[p] * z[p]]),
        source: SigmaSource::ClosedFormIrreducible,
    };
    Ok(ExistenceVerdict::decide(
        sigma,
        sigmas[p] * trace,
        0.5 * (total - dims[p]),
        candidates.into_iter().map(IndexSet::singleton).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_space;

    fn tensor(v: &[f64]) -> TensorCoefficients {
        TensorCoefficients::new(v.to_vec()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn irreducible_closed_forms() {
        let g2 = builtin_space("G2_U2_long").unwrap();
        for z2 in [0.3, 1.0, 2.5] {
            let z = tensor(&[1.0, z2, 1.7]);
            assert!(rel(sigma_irreducible(&g2, 1, &z).unwrap().value, 1.0 / (12.0 * z2)) < 1e-14);
            assert!(rel(sigma_irreducible(&g2, 2, &z).unwrap().value, 3.0 / (8.0 * 1.7)) < 1e-14);
        }
        let f4 = builtin_space("F4_SU3xSU2xU1").unwrap();
        let z = tensor(&[1.0, 1.0, 0.5, 1.5]);
        assert!(rel(sigma_irreducible(&f4, 3, &z).unwrap().value, 2.0 / (9.0 * 1.5)) < 1e-14);
        assert!(rel(sigma_irreducible(&f4, 2, &z).unwrap().value, 1.0 / (12.0 * 0.5)) < 1e-14);
        assert!(matches!(sigma_irreducible(&f4, 0, &z), Err(Error::NotClosed(_))));
    }

    #[test]
    fn f4_composite_sigma() {
        let f4 = builtin_space("F4_SU3xSU2xU1").unwrap();
        let t3 = IndexSet::from_one_based([2, 4]).unwrap();
        let opts = SolverOptions::default();

        let s = sigma(&f4, t3, &tensor(&[1.0, 2.0, 1.0, 1.0]), &opts).unwrap();
        assert!(!s.attained);
        assert_eq!(s.source, SigmaSource::BoundaryRecursion);
        assert!(rel(s.value, 2.0 / 9.0) < 1e-14);

        let s = sigma(&f4, t3, &tensor(&[1.0; 4]), &opts).unwrap();
        assert!(s.attained);
        let psi = 7.0 / 18.0 - (19f64.sqrt() - 1.0) / 54.0;
        assert!(rel(s.value, psi) < 1e-12);
        let w = s.witness.unwrap();
        assert!(rel(w[1], 6.0 * 19f64.sqrt()) < 1e-8);
    }

    #[test]
    fn apical_search_examples() {
        let opts = SolverOptions::default();
        let g2 = builtin_space("G2_U2_long").unwrap();
        let found = find_t_apical(&g2, &tensor(&[1.0, 0.1, 1.0]), &opts).unwrap();
        assert_eq!(found.apical.set, IndexSet::singleton(1));
        assert!(rel(found.apical.value, 1.0 / 1.2) < 1e-14);
        let found = find_t_apical(&g2, &tensor(&[1.0; 3]), &opts).unwrap();
        assert_eq!(found.apical.set, IndexSet::singleton(2));
        assert!(rel(found.apical.value, 0.375) < 1e-14);

        let f4 = builtin_space("F4_SU3xSU2xU1").unwrap();
        let found = find_t_apical(&f4, &tensor(&[1.0, 2.0, 1.0, 1.0]), &opts).unwrap();
        assert_eq!(found.apical.set, IndexSet::singleton(3));
        assert_eq!(found.candidates, vec![IndexSet::singleton(3)]);
    }

    #[test]
    fn g2_verdicts() {
        let opts = SolverOptions::default();
        let g2 = builtin_space("G2_U2_long").unwrap();
        let v = existence_check(&g2, &tensor(&[1.0; 3]), &opts).unwrap();
        assert_eq!(v.status, VerdictStatus::Guaranteed);
        assert_eq!(v.apical, Some(IndexSet::singleton(2)));
        assert!((v.margin.unwrap() - 0.25).abs() < 1e-14);

        let v = existence_check(&g2, &tensor(&[2.0, 1.0, 1.0]), &opts).unwrap();
        assert_eq!(v.status, VerdictStatus::Inconclusive);

        let z2 = 2.0 / 9.0;
        let v = existence_check(&g2, &tensor(&[5.0 / 3.0 - 0.01, z2, 1.0]), &opts).unwrap();
        assert_eq!(v.status, VerdictStatus::Guaranteed);
        let v = existence_check(&g2, &tensor(&[5.0 / 3.0 + 0.01, z2, 1.0]), &opts).unwrap();
        assert_eq!(v.status, VerdictStatus::Inconclusive);
    }

    #[test]
    fn e6_wallach_fast_path() {
        let z = tensor(&[1.0; 3]);
        let v = wallach_existence_check([14, 28, 12], 3.5, &z).unwrap();
        assert_eq!(v.status, VerdictStatus::Guaranteed);
        assert_eq!(v.apical, Some(IndexSet::singleton(1)));
        assert!((4.0 * v.lhs.unwrap() - 39.0).abs() < 1e-13);
        assert!((4.0 * v.rhs.unwrap() - 52.0).abs() < 1e-13);

        let e6 = builtin_space("E6_Sp3xSp1").unwrap();
        let generic = existence_check(&e6, &z, &SolverOptions::default()).unwrap();
        assert_eq!(generic.status, v.status);
        assert_eq!(generic.apical, v.apical);

        let z = tensor(&[1.0, 0.5, 1.0]);
        let fast = wallach_existence_check([14, 28, 12], 3.5, &z).unwrap();
        let generic = existence_check(&e6, &z, &SolverOptions::default()).unwrap();
        assert_eq!(fast.status, generic.status);
        assert_eq!(fast.apical, generic.apical);
    }

    #[test]
    fn degenerate_wallach() {
        let v = wallach_existence_check([2, 3, 4], 0.0, &tensor(&[1.0; 3])).unwrap();
        assert_eq!(v.status, VerdictStatus::DegenerateConstantRicci);
        assert!(wallach_existence_check([0, 3, 4], 1.0, &tensor(&[1.0; 3])).is_err());
        assert!(wallach_existence_check([2, 3, 4], -1.0, &tensor(&[1.0; 3])).is_err());
    }

    #[test]
    fn maximal_isotropy_has_no_apical() {
        let space = HomogeneousSpace::new("irr", vec![5], vec![1.0], &[([1, 1, 1], 1.0)]).unwrap();
        let err = existence_check(&space, &tensor(&[1.0]), &SolverOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoIntermediateSubalgebra));
    }
}
