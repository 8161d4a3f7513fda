//! Unconditional effectivity checks by fat-point interpolation over `F_p`.
//!
//! Plane curves of degree `d` with multiplicity `m_i` at `r` points are the
//! kernel of a linear map from the `(d+1)(d+2)/2` coefficients to the
//! `Σ m_i(m_i+1)/2` Hasse derivatives of order `< m_i` at the points. The
//! rank of that map at random points of a large prime field bounds the rank
//! at very general complex points from below: a nonzero minor mod `p` lifts
//! to a nonzero integer minor. Hence full row rank at one sample certifies
//! `dim |D| = edim(D)` at very general points, and full column rank certifies
//! emptiness. Unlucky samples can only make the certificate fail to appear;
//! they never produce a wrong one.

mod field;
mod matrix;

pub use field::{is_prime, PrimeField, DEFAULT_PRIME};
pub use matrix::Matrix;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::serde_util::{decimal, decimal_vec};
use crate::shgh::{shgh_dim, ConditionalDim, DimStatus};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterpolationInstance {
    #[serde(with = "decimal")]
    pub degree: u64,
    #[serde(with = "decimal_vec")]
    pub mults: Vec<u64>,
    #[serde(with = "decimal")]
    pub prime: u64,
    #[serde(with = "decimal")]
    pub seed: u64,
    #[serde(with = "decimal")]
    pub trials: u32,
}

/// Sampling parameters shared by every instance of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingParams {
    pub prime: u64,
    pub seed: u64,
    pub trials: u32,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            prime: DEFAULT_PRIME,
            seed: 0,
            trials: 3,
        }
    }
}

impl InterpolationInstance {
    pub fn new(degree: u64, mults: Vec<u64>, params: SamplingParams) -> Result<Self> {
        let inst = InterpolationInstance {
            degree,
            mults,
            prime: params.prime,
            seed: params.seed,
            trials: params.trials,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Instance for a class with non-negative degree and multiplicities;
    /// zero multiplicities impose nothing and are dropped.
    pub fn from_divisor(class: &DivisorClass, params: SamplingParams) -> Result<Self> {
        let to_u64 = |v: &BigInt, what: &str| {
            v.to_u64().ok_or_else(|| {
                Error::InvalidArgument(format!("{what} {v} must be a non-negative machine integer"))
            })
        };
        let degree = to_u64(class.degree(), "degree")?;
        let mults = class
            .mults()
            .iter()
            .filter(|m| !m.is_zero())
            .map(|m| to_u64(m, "multiplicity"))
            .collect::<Result<Vec<_>>>()?;
        InterpolationInstance::new(degree, mults, params)
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.prime) || self.prime >= 1 << 32 {
            return Err(Error::InvalidArgument(format!(
                "{} is not a prime below 2^32",
                self.prime
            )));
        }
        if self.prime <= self.degree {
            return Err(Error::Characteristic {
                prime: self.prime,
                degree: self.degree,
            });
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument(
                "at least one trial is required".into(),
            ));
        }
        if let Some(&m) = self.mults.iter().find(|&&m| m == 0 || m > self.degree + 1) {
            return Err(Error::InvalidArgument(format!(
                "multiplicity {m} outside 1..={}",
                self.degree + 1
            )));
        }
        let points = self.mults.len() as u128;
        if points > (self.prime as u128) * (self.prime as u128) / 2 {
            return Err(Error::InvalidSample(format!(
                "cannot place {points} distinct points in F_{}^2",
                self.prime
            )));
        }
        Ok(())
    }

    /// `(d+1)(d+2)/2`
    pub fn n_coef(&self) -> usize {
        let d = self.degree as usize;
        (d + 1) * (d + 2) / 2
    }

    /// `Σ m_i(m_i+1)/2`
    pub fn n_cond(&self) -> usize {
        self.mults.iter().map(|&m| (m * (m + 1) / 2) as usize).sum()
    }

    /// Total degree, in the point coordinates, of any maximal minor of the
    /// interpolation matrix: a row of derivative order `s` has entries of
    /// degree at most `d - s`.
    pub fn minor_degree_bound(&self) -> u64 {
        let d = self.degree;
        self.mults
            .iter()
            .map(|&m| (0..m).map(|s| (s + 1) * d.saturating_sub(s)).sum::<u64>())
            .sum()
    }

    /// Schwartz–Zippel bound on the chance that `trials` independent uniform
    /// samples all miss the generic rank.
    pub fn a_priori_miss_bound(&self, trials: u32) -> f64 {
        let per_trial = (self.minor_degree_bound() as f64 / self.prime as f64).min(1.0);
        per_trial.powi(trials as i32)
    }
}

/// Monomials `x^a y^b`, `a + b <= d`, in graded order: total degree
/// descending, then `x`-exponent descending. In particular the last column
/// is the constant term.
pub fn monomials(degree: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(((degree + 1) * (degree + 2) / 2) as usize);
    for t in (0..=degree).rev() {
        for a in (0..=t).rev() {
            out.push((a, t - a));
        }
    }
    out
}

/// The fat-point condition matrix at the given affine points of `F_p^2`.
///
/// Row block `i` holds the Hasse derivatives `∂^(s,t)/s!t!` with `s + t < m_i`
/// evaluated at point `i`, ordered by `s + t` and then by `s` descending.
pub fn build_matrix(inst: &InterpolationInstance, points: &[(u64, u64)]) -> Result<Matrix> {
    inst.validate()?;
    if points.len() != inst.mults.len() {
        return Err(Error::InvalidSample(format!(
            "{} points for {} multiplicities",
            points.len(),
            inst.mults.len()
        )));
    }
    let field = PrimeField::new(inst.prime)?;
    let p = inst.prime;
    if let Some(&(x, y)) = points.iter().find(|&&(x, y)| x >= p || y >= p) {
        return Err(Error::InvalidSample(format!(
            "({x}, {y}) is not reduced mod {p}"
        )));
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSample("coincident points".into()));
    }

    let d = inst.degree as usize;
    let binom = binomials_mod(d, &field);
    let monos = monomials(inst.degree);
    let mut m = Matrix::zeros(inst.n_cond(), monos.len());
    let mut row = 0;
    for (&mult, &(x, y)) in inst.mults.iter().zip(points) {
        let xp = powers(x, d, &field);
        let yp = powers(y, d, &field);
        for order in 0..mult as usize {
            for s in (0..=order).rev() {
                let t = order - s;
                let out = m.row_mut(row);
                for (col, &(a, b)) in monos.iter().enumerate() {
                    let (a, b) = (a as usize, b as usize);
                    if a < s || b < t {
                        continue;
                    }
                    let coeff = field.mul(binom[a][s], binom[b][t]);
                    out[col] = field.mul(coeff, field.mul(xp[a - s], yp[b - t]));
                }
                row += 1;
            }
        }
    }
    Ok(m)
}

fn powers(x: u64, d: usize, field: &PrimeField) -> Vec<u64> {
    let mut out = Vec::with_capacity(d + 1);
    let mut acc = field.from_u64(1);
    for _ in 0..=d {
        out.push(acc);
        acc = field.mul(acc, x);
    }
    out
}

/// Pascal's triangle mod `p` up to row `d`.
fn binomials_mod(d: usize, field: &PrimeField) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut row = vec![field.from_u64(1); n + 1];
        for k in 1..n {
            row[k] = field.add(rows[n - 1][k - 1], rows[n - 1][k]);
        }
        rows.push(row);
    }
    rows
}

/// `r` distinct uniform points of `F_p^2` from the trial's own stream.
pub fn sample_points(count: usize, prime: u64, seed: u64) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<(u64, u64)> = Vec::with_capacity(count);
    while points.len() < count {
        let pt = (rng.random_range(0..prime), rng.random_range(0..prime));
        if !points.contains(&pt) {
            points.push(pt);
        }
    }
    points
}

/// Rank of the interpolation matrix for one trial, seeded `seed + trial`.
pub fn trial_rank(inst: &InterpolationInstance, trial: u32) -> Result<usize> {
    let seed = inst.seed.wrapping_add(trial as u64);
    let points = sample_points(inst.mults.len(), inst.prime, seed);
    let field = PrimeField::new(inst.prime)?;
    Ok(build_matrix(inst, &points)?.rank(&field))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RankVerdict {
    /// Full column rank: no curve at very general points (certified).
    EmptyGeneric,
    /// `vdim >= 0`, so the system is effective; its dimension is at most
    /// `kernel_dim - 1`, with equality certified when `dim_exact`.
    EffectiveDimAtMost,
    /// Rank deficient although `vdim < 0`: a special system or unlucky samples.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    #[serde(with = "decimal")]
    pub n_coef: usize,
    #[serde(with = "decimal")]
    pub n_cond: usize,
    #[serde(with = "decimal")]
    pub best_rank: usize,
    #[serde(with = "decimal")]
    pub kernel_dim: usize,
    pub verdict: RankVerdict,
    /// Upper bound on `dim |D|` at very general points, `kernel_dim - 1`.
    #[serde(with = "decimal")]
    pub projective_dim_bound: i64,
    /// True when `best_rank` reached `min(n_coef, n_cond)`: the generic rank
    /// is then known exactly and `projective_dim_bound` equals `dim |D|`.
    pub dim_exact: bool,
    /// Ranks of the trials that ran, in trial order. Trials stop at the
    /// first sample reaching `min(n_coef, n_cond)`.
    #[serde(with = "decimal_vec")]
    pub trial_ranks: Vec<usize>,
    #[serde(with = "decimal")]
    pub prime: u64,
    #[serde(with = "decimal")]
    pub seed: u64,
    /// Probability that a reported certificate is wrong. Always zero: rank
    /// mod `p` never exceeds the rank at very general points.
    #[serde(with = "decimal")]
    pub false_certificate_probability: f64,
    /// Bound on the probability that all trials ran missed the generic rank
    /// (zero once the maximum possible rank is reached).
    #[serde(with = "decimal")]
    pub miss_probability_bound: f64,
}

impl RankReport {
    fn assemble(inst: &InterpolationInstance, trial_ranks: Vec<usize>) -> RankReport {
        let (n_coef, n_cond) = (inst.n_coef(), inst.n_cond());
        let best_rank = trial_ranks.iter().copied().max().unwrap_or(0);
        let kernel_dim = n_coef - best_rank;
        let dim_exact = best_rank == n_coef.min(n_cond);
        let verdict = if best_rank == n_coef {
            RankVerdict::EmptyGeneric
        } else if n_coef > n_cond {
            RankVerdict::EffectiveDimAtMost
        } else {
            RankVerdict::Inconclusive
        };
        let miss_probability_bound = if dim_exact {
            0.0
        } else {
            inst.a_priori_miss_bound(trial_ranks.len() as u32)
        };
        RankReport {
            n_coef,
            n_cond,
            best_rank,
            kernel_dim,
            verdict,
            projective_dim_bound: kernel_dim as i64 - 1,
            dim_exact,
            trial_ranks,
            prime: inst.prime,
            seed: inst.seed,
            false_certificate_probability: 0.0,
            miss_probability_bound,
        }
    }
}

/// Runs up to `inst.trials` samples and keeps the best rank.
///
/// Trials are evaluated in batches (one per worker under
/// [`Execution::Parallel`]); the run stops after the first trial, in trial
/// order, that attains the largest possible rank. The report is therefore
/// identical for every execution strategy and thread count.
pub fn generic_rank_with(inst: &InterpolationInstance, exec: Execution) -> Result<RankReport> {
    inst.validate()?;
    let cap = inst.n_coef().min(inst.n_cond());
    let batch = if exec.is_parallel() {
        worker_count()
    } else {
        1
    };
    let mut ranks = Vec::new();
    let mut next = 0u32;
    'outer: while next < inst.trials {
        let end = (next + batch as u32).min(inst.trials);
        let batch_ranks =
            exec.try_map_range(next as usize..end as usize, |t| trial_rank(inst, t as u32))?;
        for rank in batch_ranks {
            ranks.push(rank);
            if rank == cap {
                break 'outer;
            }
        }
        next = end;
    }
    Ok(RankReport::assemble(inst, ranks))
}

pub fn generic_rank(inst: &InterpolationInstance) -> Result<RankReport> {
    generic_rank_with(inst, Execution::default())
}

fn worker_count() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads().max(1)
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Agreement {
    Match,
    /// Interpolation found curves where SHGH predicts none.
    CounterexampleAlarm,
    /// Interpolation bound exceeds a nonnegative SHGH prediction. Either
    /// a special system or samples that all missed the generic rank.
    ExcessDimension,
    /// The SHGH oracle made no exact prediction.
    NotComparable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub divisor: DivisorClass,
    pub shgh: ConditionalDim,
    pub interpolation: RankReport,
    pub agreement: Agreement,
}

/// Compares the SHGH-conditional dimension with the finite-field bound.
pub fn cross_check_shgh(class: &DivisorClass, params: SamplingParams) -> Result<CrossCheck> {
    if class.mults().iter().any(Signed::is_negative) {
        return Err(Error::InvalidArgument(
            "cross-check needs non-negative multiplicities".into(),
        ));
    }
    let shgh = shgh_dim(class);
    let inst = InterpolationInstance::from_divisor(class, params)?;
    let interpolation = generic_rank(&inst)?;
    let agreement = if shgh.status != DimStatus::ShghConditionalExact {
        Agreement::NotComparable
    } else {
        let predicted = shgh.value.to_i64().expect("small dimension");
        let bound = interpolation.projective_dim_bound;
        // edim <= dim <= bound, so bound < predicted cannot happen.
        debug_assert!(bound >= predicted);
        if bound == predicted {
            Agreement::Match
        } else if predicted < 0 {
            Agreement::CounterexampleAlarm
        } else {
            Agreement::ExcessDimension
        }
    };
    Ok(CrossCheck {
        divisor: class.clone(),
        shgh,
        interpolation,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(seed: u64) -> SamplingParams {
        SamplingParams {
            seed,
            ..SamplingParams::default()
        }
    }

    fn inst(d: u64, mults: &[u64]) -> InterpolationInstance {
        InterpolationInstance::new(d, mults.to_vec(), params(7)).unwrap()
    }

    #[test]
    fn monomial_order() {
        assert_eq!(monomials(1), vec![(1, 0), (0, 1), (0, 0)]);
        assert_eq!(
            monomials(2),
            vec![(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]
        );
    }

    #[test]
    fn line_through_a_point() {
        let i = inst(1, &[1]);
        let m = build_matrix(&i, &[(5, 9)]).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 3));
        assert_eq!(m.row(0), &[5, 9, 1]);
    }

    #[test]
    fn derivative_rows_for_a_double_point() {
        // conics singular at (2, 3): value, d/dx, d/dy
        let i = inst(2, &[2]);
        let m = build_matrix(&i, &[(2, 3)]).unwrap();
        // columns x², xy, y², x, y, 1
        assert_eq!(m.row(0), &[4, 6, 9, 2, 3, 1]);
        assert_eq!(m.row(1), &[4, 3, 0, 1, 0, 0]);
        assert_eq!(m.row(2), &[0, 2, 6, 0, 1, 0]);
    }

    #[test]
    fn paper_instance_shapes() {
        let p = SamplingParams::default();
        let small = InterpolationInstance::from_divisor(&"19;6^10".parse().unwrap(), p).unwrap();
        assert_eq!((small.n_cond(), small.n_coef()), (210, 210));
        let big = InterpolationInstance::from_divisor(&"57;18^10".parse().unwrap(), p).unwrap();
        assert_eq!((big.n_cond(), big.n_coef()), (1710, 1711));
        let pts = sample_points(10, p.prime, 1);
        let m = build_matrix(&small, &pts).unwrap();
        assert_eq!((m.rows(), m.cols()), (210, 210));
    }

    #[test]
    fn rejects_bad_samples_and_fields() {
        let i = inst(3, &[1, 1]);
        assert!(matches!(
            build_matrix(&i, &[(1, 1), (1, 1)]),
            Err(Error::InvalidSample(_))
        ));
        assert!(matches!(
            build_matrix(&i, &[(1, 1)]),
            Err(Error::InvalidSample(_))
        ));
        let low = SamplingParams {
            prime: 5,
            ..SamplingParams::default()
        };
        assert!(matches!(
            InterpolationInstance::new(5, vec![1], low),
            Err(Error::Characteristic {
                prime: 5,
                degree: 5
            })
        ));
        let composite = SamplingParams {
            prime: 1001,
            ..SamplingParams::default()
        };
        assert!(InterpolationInstance::new(5, vec![1], composite).is_err());
        let no_trials = SamplingParams {
            trials: 0,
            ..SamplingParams::default()
        };
        assert!(InterpolationInstance::new(5, vec![1], no_trials).is_err());
        assert!(InterpolationInstance::new(3, vec![5], params(0)).is_err());
        assert!(InterpolationInstance::from_divisor(&"-1;2".parse().unwrap(), params(0)).is_err());
    }

    #[test]
    fn classic_special_system_is_inconclusive() {
        // The doubled conic through five points: vdim = -1 but effective.
        let report = generic_rank(&inst(4, &[2; 5])).unwrap();
        assert_eq!((report.n_coef, report.n_cond), (15, 15));
        assert_eq!(report.best_rank, 14);
        assert_eq!(report.verdict, RankVerdict::Inconclusive);
        assert_eq!(report.projective_dim_bound, 0);
        assert!(!report.dim_exact);
        assert_eq!(report.trial_ranks.len(), 3);
        assert!(report.miss_probability_bound > 0.0);
    }

    #[test]
    fn small_verdicts() {
        let r = generic_rank(&inst(1, &[1, 1, 1])).unwrap();
        assert_eq!(r.verdict, RankVerdict::EmptyGeneric);
        let r = generic_rank(&inst(3, &[1; 5])).unwrap();
        assert_eq!(r.verdict, RankVerdict::EffectiveDimAtMost);
        assert_eq!(r.projective_dim_bound, 4);
        assert!(r.dim_exact);
        assert_eq!(r.trial_ranks.len(), 1);
    }

    #[test]
    fn pell_primitive_is_empty() {
        let i =
            InterpolationInstance::from_divisor(&"19;6^10".parse().unwrap(), params(2024)).unwrap();
        let report = generic_rank(&i).unwrap();
        assert_eq!(report.best_rank, 210);
        assert_eq!(report.verdict, RankVerdict::EmptyGeneric);
        assert_eq!(report.false_certificate_probability, 0.0);
    }

    #[test]
    fn rank_ignores_point_and_column_order() {
        let i = inst(7, &[3, 2, 2, 1, 1]);
        let pts = sample_points(5, i.prime, 99);
        let field = PrimeField::new(i.prime).unwrap();
        let base = build_matrix(&i, &pts).unwrap();
        let expected = base.clone().rank(&field);

        let order = [3, 0, 4, 2, 1];
        let shuffled =
            InterpolationInstance::new(7, order.iter().map(|&j| i.mults[j]).collect(), params(7))
                .unwrap();
        let pts2: Vec<_> = order.iter().map(|&j| pts[j]).collect();
        assert_eq!(
            build_matrix(&shuffled, &pts2).unwrap().rank(&field),
            expected
        );

        let rows: Vec<usize> = (0..base.rows()).rev().collect();
        let cols: Vec<usize> = (0..base.cols()).map(|c| (c * 7) % base.cols()).collect();
        assert_eq!(base.permuted(&rows, &cols).rank(&field), expected);
    }

    #[test]
    fn more_trials_never_lower_the_rank() {
        let special = inst(4, &[2; 5]);
        let mut prev = 0;
        for trials in 1..=4 {
            let i = InterpolationInstance {
                trials,
                ..special.clone()
            };
            let r = generic_rank(&i).unwrap();
            assert!(r.best_rank >= prev);
            prev = r.best_rank;
        }
    }

    #[test]
    fn sequential_and_parallel_reports_agree() {
        let i = inst(9, &[3, 3, 3, 2, 2, 2, 1]);
        let a = generic_rank_with(&i, Execution::Sequential).unwrap();
        let b = generic_rank_with(&i, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let special = inst(4, &[2; 5]);
        assert_eq!(
            generic_rank_with(&special, Execution::Sequential).unwrap(),
            generic_rank_with(&special, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn cross_check_examples() {
        let p = params(11);
        let c = cross_check_shgh(&"19;6^10".parse().unwrap(), p).unwrap();
        assert_eq!(c.agreement, Agreement::Match);
        assert_eq!(c.interpolation.verdict, RankVerdict::EmptyGeneric);
        let c = cross_check_shgh(&"1;0^10".parse().unwrap(), p).unwrap();
        assert_eq!(c.agreement, Agreement::Match);
        assert_eq!(c.interpolation.projective_dim_bound, 2);
        let c = cross_check_shgh(&"4;2^5".parse().unwrap(), p).unwrap();
        assert_eq!(c.agreement, Agreement::NotComparable);
        assert!(cross_check_shgh(&"4;2,-1".parse().unwrap(), p).is_err());
    }

    #[test]
    fn miss_bound_for_the_paper_instances() {
        let p = SamplingParams::default();
        let bound = |s: &str| {
            InterpolationInstance::from_divisor(&s.parse().unwrap(), p)
                .unwrap()
                .a_priori_miss_bound(3)
        };
        assert!(bound("19;6^10") < 1e-15);
        let i = InterpolationInstance::from_divisor(&"57;18^10".parse().unwrap(), p).unwrap();
        assert_eq!(i.minor_degree_bound(), 78_090);
    }
}
