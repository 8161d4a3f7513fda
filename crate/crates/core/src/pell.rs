//! Continued fractions of `√r`, arithmetic in `Z[√r]`, and the Pell divisors
//! `D_k = (d_k; m_k^10)` on `X_10`.
//!
//! A homogeneous class `(d; m^r)` has virtual dimension zero exactly when
//! `x = 2d + 3`, `y = 2m + 1` solve `x² - r y² = 9 - r`. For `r = 10` the
//! right-hand side is `-1`, solved by the even-index convergents of
//! `√10 = [3; 6, 6, ...]`, and every such solution has `x`, `y` odd.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::serde_util::{decimal, decimal_vec_pairs};
use crate::shgh::AssumptionStatus;

/// Number of points for the Pell divisor family.
pub const PELL_POINTS: usize = 10;

/// Periodic simple continued fraction `[a0; period...]` of `√r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    pub a0: u64,
    pub period: Vec<u64>,
}

impl ContinuedFraction {
    /// Partial quotient `a_k`.
    pub fn term(&self, k: usize) -> u64 {
        if k == 0 {
            self.a0
        } else {
            self.period[(k - 1) % self.period.len()]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub k: usize,
    #[serde(with = "decimal")]
    pub p: BigInt,
    #[serde(with = "decimal")]
    pub q: BigInt,
}

fn check_radicand(r: u64) -> Result<u64> {
    let root = r.sqrt();
    if r < 2 || root * root == r {
        return Err(Error::InvalidRadicand(BigInt::from(r)));
    }
    Ok(root)
}

/// Minimal-period expansion of `√r` by the quadratic-surd recursion
/// `m' = d a - m`, `d' = (r - m'^2)/d`, `a' = ⌊(a0 + m')/d'⌋`.
pub fn cf_expansion(r: u64) -> Result<ContinuedFraction> {
    let a0 = check_radicand(r)?;
    let (mut m, mut d, mut a) = (0u64, 1u64, a0);
    let mut period = Vec::new();
    // The period of √r ends exactly when the partial quotient reaches 2·a0.
    while a != 2 * a0 {
        m = d * a - m;
        d = (r - m * m) / d;
        a = (a0 + m) / d;
        period.push(a);
    }
    Ok(ContinuedFraction { a0, period })
}

/// The convergents `p_0/q_0, ..., p_{count-1}/q_{count-1}` of `√r`.
pub fn convergents(r: u64, count: usize) -> Result<Vec<Convergent>> {
    let cf = cf_expansion(r)?;
    let mut out = Vec::with_capacity(count);
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    for k in 0..count {
        let a = BigInt::from(cf.term(k));
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent {
            k,
            p: p.clone(),
            q: q.clone(),
        });
    }
    Ok(out)
}

/// The `k`-th convergent `p_k/q_k` of `√r`.
pub fn convergent(r: u64, k: usize) -> Result<Convergent> {
    Ok(convergents(r, k + 1)?
        .pop()
        .expect("k + 1 >= 1 convergents"))
}

/// An element `a + b√r` of `Z[√r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticInteger {
    pub a: BigInt,
    pub b: BigInt,
    pub r: BigInt,
}

impl QuadraticInteger {
    pub fn new(r: impl Into<BigInt>, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QuadraticInteger {
            a: a.into(),
            b: b.into(),
            r: r.into(),
        }
    }

    pub fn one(r: &BigInt) -> Self {
        QuadraticInteger::new(r.clone(), 1, 0)
    }

    pub fn mul(&self, other: &QuadraticInteger) -> QuadraticInteger {
        debug_assert_eq!(self.r, other.r);
        QuadraticInteger {
            a: &self.a * &other.a + &self.r * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
            r: self.r.clone(),
        }
    }

    /// `a² - r b²`
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.r * &self.b * &self.b
    }

    pub fn pow(&self, mut exp: u64) -> QuadraticInteger {
        let mut base = self.clone();
        let mut acc = QuadraticInteger::one(&self.r);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// `(a + b√r)^exp` expanded as `(x, y)` with `x + y√r`.
pub fn zsqrt_pow(r: u64, base: (BigInt, BigInt), exp: u64) -> Result<(BigInt, BigInt)> {
    if exp == 0 {
        return Err(Error::InvalidArgument("exponent must be at least 1".into()));
    }
    let z = QuadraticInteger::new(r, base.0, base.1).pow(exp);
    Ok((z.a, z.b))
}

/// Right-hand side of `x² - 10 y² = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormSign {
    Minus,
    Plus,
}

impl NormSign {
    pub fn value(self) -> i32 {
        match self {
            NormSign::Minus => -1,
            NormSign::Plus => 1,
        }
    }
}

/// The first `count` positive solutions of `x² - 10y² = ±1`, increasing.
///
/// Norm `-1` solutions are the even-index convergents of `√10`, norm `+1`
/// the odd-index ones.
pub fn pell_solutions(r: u64, sign: NormSign, count: usize) -> Result<Vec<(BigInt, BigInt)>> {
    if r != PELL_POINTS as u64 {
        return Err(Error::UnsupportedRadicand(r));
    }
    let offset = match sign {
        NormSign::Minus => 0,
        NormSign::Plus => 1,
    };
    let all = convergents(r, 2 * count + offset)?;
    Ok(all
        .into_iter()
        .skip(offset)
        .step_by(2)
        .take(count)
        .map(|c| (c.p, c.q))
        .collect())
}

/// `D_k = c_k F_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    #[serde(with = "decimal")]
    pub multiple: BigInt,
    pub primitive: DivisorClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PellDivisorRecord {
    pub k: usize,
    /// The `k`-th convergent `(p_k, q_k)` (not the `2k`-th used for `D_k`).
    pub convergent: Convergent,
    pub divisor: DivisorClass,
    #[serde(with = "decimal")]
    pub d: BigInt,
    #[serde(with = "decimal")]
    pub m: BigInt,
    /// Absent for `k = 0`.
    pub factorization: Option<Factorization>,
}

/// The Pell divisor `D_k` with `d_k = (p_{2k} - 3)/2`, `m_k = (q_{2k} - 1)/2`,
/// and for `k >= 1` its factorization:
/// `c_k = p_{k-1}`, `F_k = (p_k; q_k^10)` for odd `k`,
/// `c_k = q_{k-1}`, `F_k = (10 q_k; p_k^10)` for even `k`.
pub fn pell_divisor(k: usize) -> PellDivisorRecord {
    let convs = convergents(PELL_POINTS as u64, 2 * k + 1).expect("10 is not a square");
    pell_record_from(k, &convs)
}

/// `pell_divisor(k)` for every `k < count`, sharing one convergent table.
pub fn pell_divisors(count: usize) -> Vec<PellDivisorRecord> {
    if count == 0 {
        return Vec::new();
    }
    let convs = convergents(PELL_POINTS as u64, 2 * count - 1).expect("10 is not a square");
    (0..count).map(|k| pell_record_from(k, &convs)).collect()
}

fn pell_record_from(k: usize, convs: &[Convergent]) -> PellDivisorRecord {
    let top = &convs[2 * k];
    let d: BigInt = (&top.p - 3) / 2;
    let m: BigInt = (&top.q - 1) / 2;
    let divisor = DivisorClass::homogeneous(d.clone(), m.clone(), PELL_POINTS);
    let factorization = (k >= 1).then(|| {
        let (prev, cur) = (&convs[k - 1], &convs[k]);
        let (multiple, primitive) = if k.is_odd() {
            (
                prev.p.clone(),
                DivisorClass::homogeneous(cur.p.clone(), cur.q.clone(), PELL_POINTS),
            )
        } else {
            (
                prev.q.clone(),
                DivisorClass::homogeneous(&cur.q * 10, cur.p.clone(), PELL_POINTS),
            )
        };
        debug_assert_eq!(primitive.scale(&multiple), divisor);
        Factorization {
            multiple,
            primitive,
        }
    });
    PellDivisorRecord {
        k,
        convergent: convs[k].clone(),
        divisor,
        d,
        m,
        factorization,
    }
}

/// `(d_k, m_k)` for `k < count` from `d' = 19d + 60m + 57`, `m' = 6d + 19m + 18`.
pub fn pell_divisor_by_recurrence(count: usize) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(count);
    let (mut d, mut m) = (BigInt::zero(), BigInt::zero());
    for _ in 0..count {
        out.push((d.clone(), m.clone()));
        let next_d = 19 * &d + 60 * &m + 57;
        let next_m = 6 * &d + 19 * &m + 18;
        d = next_d;
        m = next_m;
    }
    out
}

/// `vdim(h F_k)` in closed form: `h(h - p_{k-1})/2` for odd `k` and
/// `5h(h - q_{k-1})` for even `k`.
pub fn vdim_multiple_closed_form(k: usize, h: &BigInt) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::Degenerate("F_0 is undefined".into()));
    }
    let prev = convergent(PELL_POINTS as u64, k - 1)?;
    Ok(if k.is_odd() {
        (h * (h - &prev.p)) / 2
    } else {
        5 * h * (h - &prev.q)
    })
}

/// Multiples `h` of `F_k` probed below `c_k`: `1..=min(c-1, cap)` plus `c - 1`.
pub fn sampled_multiples(c: &BigInt, cap: u64) -> Vec<BigInt> {
    let mut hs: Vec<BigInt> = Vec::new();
    let top = (c - 1u32).min(BigInt::from(cap));
    let mut h = BigInt::one();
    while h <= top {
        hs.push(h.clone());
        h += 1u32;
    }
    let last = c - 1u32;
    if last.is_positive() && hs.last() != Some(&last) {
        hs.push(last);
    }
    hs
}

/// Number of multiples below `c_k` checked exhaustively by the witnesses.
pub const WITNESS_SAMPLE_CAP: u64 = 1000;

/// Numerical evidence that `F_k` (odd `k`) has `F_k² = 1` and no effective
/// multiple below `c_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Question2Witness {
    pub k: usize,
    pub primitive: DivisorClass,
    #[serde(with = "decimal")]
    pub self_intersection: BigInt,
    /// `(h, vdim(h F_k))` for the sampled `h < c_k`, all negative.
    #[serde(with = "decimal_vec_pairs")]
    pub below: Vec<(BigInt, BigInt)>,
    #[serde(with = "decimal")]
    pub vdim_at_multiple: BigInt,
    #[serde(with = "decimal")]
    pub minimal_effective_multiple: BigInt,
    /// Emptiness of `|h F_k|` for `h < c_k` relies on SHGH.
    pub status: AssumptionStatus,
}

fn odd_factorization(k: usize) -> Result<Factorization> {
    if k == 0 || k.is_even() {
        return Err(Error::InvalidArgument(format!(
            "witnesses need an odd index k >= 1, got {k}"
        )));
    }
    Ok(pell_divisor(k)
        .factorization
        .expect("k >= 1 has a factorization"))
}

pub fn question2_witness(k: usize) -> Result<Question2Witness> {
    let fac = odd_factorization(k)?;
    let f = &fac.primitive;
    let below = sampled_multiples(&fac.multiple, WITNESS_SAMPLE_CAP)
        .into_iter()
        .map(|h| {
            let v = f.scale(&h).vdim();
            (h, v)
        })
        .collect();
    Ok(Question2Witness {
        k,
        primitive: f.clone(),
        self_intersection: f.square(),
        below,
        vdim_at_multiple: f.scale(&fac.multiple).vdim(),
        minimal_effective_multiple: fac.multiple.clone(),
        status: AssumptionStatus::ShghConditional,
    })
}

/// `G = (c_k - 1) F_k`: large self-intersection, negative virtual dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Question3Witness {
    pub k: usize,
    pub class: DivisorClass,
    #[serde(with = "decimal")]
    pub self_intersection: BigInt,
    #[serde(with = "decimal")]
    pub vdim: BigInt,
    /// Emptiness of `|G|` relies on SHGH.
    pub status: AssumptionStatus,
}

pub fn question3_witness(k: usize) -> Result<Question3Witness> {
    let fac = odd_factorization(k)?;
    if fac.multiple <= BigInt::one() {
        return Err(Error::Degenerate(format!(
            "c_{k} = 1 leaves no proper multiple"
        )));
    }
    let class = fac.primitive.scale(&(&fac.multiple - 1u32));
    Ok(Question3Witness {
        k,
        self_intersection: class.square(),
        vdim: class.vdim(),
        class,
        status: AssumptionStatus::ShghConditional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn cls(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    /// Surd states `(√r + P)/Q` iterated until one repeats, with no use of
    /// the `2·a0` end-of-period rule.
    fn expansion_by_state_cycle(r: u64) -> (u64, Vec<u64>) {
        let a0 = (r as f64).sqrt() as u64;
        let a0 = if (a0 + 1) * (a0 + 1) <= r { a0 + 1 } else { a0 };
        let mut seen = Vec::new();
        let (mut p, mut q) = (a0, r - a0 * a0);
        let mut terms = Vec::new();
        loop {
            if seen.contains(&(p, q)) {
                break;
            }
            seen.push((p, q));
            let a = (a0 + p) / q;
            terms.push(a);
            p = a * q - p;
            q = (r - p * p) / q;
        }
        (a0, terms)
    }

    #[test]
    fn cf_examples() {
        assert_eq!(
            cf_expansion(10).unwrap(),
            ContinuedFraction {
                a0: 3,
                period: vec![6]
            }
        );
        assert_eq!(
            cf_expansion(2).unwrap(),
            ContinuedFraction {
                a0: 1,
                period: vec![2]
            }
        );
        assert_eq!(
            cf_expansion(13).unwrap(),
            ContinuedFraction {
                a0: 3,
                period: vec![1, 1, 1, 1, 6]
            }
        );
    }

    #[test]
    fn cf_matches_state_cycle_oracle() {
        for r in 2..2000u64 {
            if r.sqrt() * r.sqrt() == r {
                continue;
            }
            let cf = cf_expansion(r).unwrap();
            let (a0, period) = expansion_by_state_cycle(r);
            assert_eq!((cf.a0, cf.period.clone()), (a0, period), "r = {r}");
            assert_eq!(*cf.period.last().unwrap(), 2 * cf.a0);
        }
    }

    #[test]
    fn cf_rejects_bad_radicands() {
        for r in [0, 1, 4, 9, 100] {
            assert!(matches!(cf_expansion(r), Err(Error::InvalidRadicand(_))));
        }
    }

    #[test]
    fn convergent_examples() {
        let c = |k| {
            let c = convergent(10, k).unwrap();
            (c.p, c.q)
        };
        assert_eq!(c(0), (big(3), big(1)));
        assert_eq!(c(2), (big(117), big(37)));
        assert_eq!(c(4), (big(4443), big(1405)));
        let c13 = convergent(13, 4).unwrap();
        // [3; 1, 1, 1, 1] = 18/5
        assert_eq!((c13.p, c13.q), (big(18), big(5)));
    }

    #[test]
    fn convergent_invariants_for_sqrt10() {
        let convs = convergents(10, 41).unwrap();
        for c in &convs {
            let sign = if c.k % 2 == 0 { -1 } else { 1 };
            assert_eq!(&c.p * &c.p - 10 * &c.q * &c.q, big(sign), "k = {}", c.k);
            assert!(c.p.gcd(&c.q).is_one());
            let (x, y) = zsqrt_pow(10, (big(3), big(1)), c.k as u64 + 1).unwrap();
            assert_eq!((x, y), (c.p.clone(), c.q.clone()));
        }
        for w in convs.windows(3) {
            assert_eq!(w[2].p, 6 * &w[1].p + &w[0].p);
            assert_eq!(w[2].q, 6 * &w[1].q + &w[0].q);
        }
    }

    #[test]
    fn zsqrt_pow_examples() {
        let base = || (big(3), big(1));
        assert_eq!(zsqrt_pow(10, base(), 1).unwrap(), (big(3), big(1)));
        assert_eq!(zsqrt_pow(10, base(), 2).unwrap(), (big(19), big(6)));
        assert_eq!(zsqrt_pow(10, base(), 4).unwrap(), (big(721), big(228)));
        assert!(zsqrt_pow(10, base(), 0).is_err());
        let z = QuadraticInteger::new(7, 8, 3);
        assert_eq!(z.norm(), big(1));
        assert_eq!(z.pow(5).norm(), big(1));
    }

    #[test]
    fn pell_solution_examples() {
        assert_eq!(
            pell_solutions(10, NormSign::Minus, 2).unwrap(),
            vec![(big(3), big(1)), (big(117), big(37))]
        );
        assert_eq!(
            pell_solutions(10, NormSign::Plus, 2).unwrap(),
            vec![(big(19), big(6)), (big(721), big(228))]
        );
        for sign in [NormSign::Minus, NormSign::Plus] {
            let sols = pell_solutions(10, sign, 20).unwrap();
            for w in sols.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
            for (x, y) in sols {
                assert_eq!(&x * &x - 10 * &y * &y, big(sign.value() as i64));
                // the norm -1 solutions feed the Pell divisors and must be odd
                if sign == NormSign::Minus {
                    assert!(x.is_odd() && y.is_odd());
                }
            }
        }
        assert_eq!(
            pell_solutions(13, NormSign::Minus, 1),
            Err(Error::UnsupportedRadicand(13))
        );
    }

    #[test]
    fn pell_divisor_examples() {
        let rec = pell_divisor(1);
        assert_eq!(rec.divisor, cls("57;18^10"));
        let fac = rec.factorization.unwrap();
        assert_eq!(fac.multiple, big(3));
        assert_eq!(fac.primitive, cls("19;6^10"));

        let rec = pell_divisor(3);
        assert_eq!(rec.divisor, cls("84357;26676^10"));
        let fac = rec.factorization.unwrap();
        assert_eq!(fac.multiple, big(117));
        assert_eq!(fac.primitive, cls("721;228^10"));

        let rec = pell_divisor(0);
        assert_eq!(rec.divisor, cls("0;0^10"));
        assert!(rec.factorization.is_none());
    }

    #[test]
    fn divisibility_lemma_and_parity_up_to_40() {
        let recs = pell_divisors(41);
        let rec_seq = pell_divisor_by_recurrence(41);
        for (rec, (d, m)) in recs.iter().zip(&rec_seq) {
            assert_eq!(&rec.d, d);
            assert_eq!(&rec.m, m);
            assert_eq!(rec.divisor.vdim(), big(0));
            let x: BigInt = 2 * &rec.d + 3;
            let y: BigInt = 2 * &rec.m + 1;
            assert!(x.is_odd() && y.is_odd());
            assert_eq!(&x * &x - 10 * &y * &y, big(-1));
            if rec.k >= 1 {
                let fac = rec.factorization.as_ref().unwrap();
                assert_eq!(fac.primitive.scale(&fac.multiple), rec.divisor);
                assert!(rec.d > 3 * &rec.m);
                let (g, _) = rec.divisor.primitive_part().unwrap();
                // c_k F_k with F_k primitive: c_k is the full content.
                assert_eq!(g, fac.multiple);
            }
        }
        assert_eq!(pell_divisor(17), recs[17]);
    }

    #[test]
    fn recurrence_examples() {
        let seq = pell_divisor_by_recurrence(5);
        assert_eq!(seq[1], (big(57), big(18)));
        assert_eq!(seq[2], (big(2220), big(702)));
        assert_eq!(seq[4], (big(3203400), big(1013004)));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(vdim_multiple_closed_form(1, &big(1)).unwrap(), big(-1));
        assert_eq!(vdim_multiple_closed_form(1, &big(3)).unwrap(), big(0));
        assert_eq!(vdim_multiple_closed_form(2, &big(6)).unwrap(), big(0));
        assert_eq!(cls("2220;702^10").vdim(), big(0));
        assert!(vdim_multiple_closed_form(0, &big(1)).is_err());
    }

    #[test]
    fn closed_form_matches_direct_vdim() {
        for k in 1..=15 {
            let fac = pell_divisor(k).factorization.unwrap();
            let c = fac.multiple.clone();
            let mut hs = sampled_multiples(&c, 1000);
            hs.push(c.clone());
            hs.push(BigInt::zero());
            for h in hs {
                let closed = vdim_multiple_closed_form(k, &h).unwrap();
                let direct = fac.primitive.scale(&h).vdim();
                assert_eq!(closed, direct, "k = {k}, h = {h}");
                if h.is_positive() && h < c {
                    assert!(closed.is_negative(), "k = {k}, h = {h}");
                }
            }
            assert!(vdim_multiple_closed_form(k, &c).unwrap().is_zero());
        }
    }

    #[test]
    fn sampled_multiples_cover_boundary() {
        assert_eq!(sampled_multiples(&big(3), 1000), vec![big(1), big(2)]);
        assert_eq!(sampled_multiples(&big(1), 1000), Vec::<BigInt>::new());
        let hs = sampled_multiples(&big(5000), 1000);
        assert_eq!(hs.len(), 1001);
        assert_eq!(hs.last(), Some(&big(4999)));
    }

    #[test]
    fn question2_examples() {
        let w = question2_witness(1).unwrap();
        assert_eq!(w.primitive, cls("19;6^10"));
        assert_eq!(w.self_intersection, big(1));
        assert_eq!(w.minimal_effective_multiple, big(3));
        assert_eq!(w.below, vec![(big(1), big(-1)), (big(2), big(-1))]);
        assert_eq!(w.vdim_at_multiple, big(0));
        assert_eq!(w.status, AssumptionStatus::ShghConditional);

        let w = question2_witness(3).unwrap();
        assert_eq!(w.primitive, cls("721;228^10"));
        assert_eq!(w.self_intersection, big(1));
        assert_eq!(w.minimal_effective_multiple, big(117));
        assert_eq!(w.below.len(), 116);
        assert!(w.below.iter().all(|(_, v)| v.is_negative()));

        assert!(question2_witness(2).is_err());
        assert!(question2_witness(0).is_err());
    }

    #[test]
    fn question3_examples() {
        let w = question3_witness(1).unwrap();
        assert_eq!(w.class, cls("38;12^10"));
        assert_eq!(w.class, cls("19;6^10").scale(&big(2)));
        assert_eq!(w.self_intersection, big(4));
        assert_eq!(w.vdim, big(-1));
        let w = question3_witness(3).unwrap();
        assert_eq!(w.self_intersection, big(13456));
        assert!(w.vdim.is_negative());
        assert!(question3_witness(4).is_err());
    }
}
