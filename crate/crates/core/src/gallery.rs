//! Intersection calculators for the counterexample families: the double
//! cover of `E×E`, the double cover of a rational surface along a Cremona
//! orbit, the `h¹` sequence of pulled-back Pell divisors, and two bounds on
//! self-intersections of curves.
//!
//! Double covers are handled by their pullback rules only: squares double and
//! pairings with pulled-back classes double.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::divisor::{canonical_class, DivisorClass};
use crate::error::{Error, Result};
use crate::pell::{pell_divisor, PELL_POINTS};
use crate::serde_util::decimal;
use crate::shgh::AssumptionStatus;

/// Exact rational, serialized as `"num/den"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ratio(pub BigRational);

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Ratio {
    fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Degenerate("ratio with zero denominator".into()));
        }
        Ok(Ratio(BigRational::new(num, den)))
    }
}

/// A class `c1·F1 + c2·F2 + Σ c·E_{a,b}` on `E×E`, where `F1, F2` are the
/// fibres of the projections and `E_{a,b}` is the image of `x ↦ (ax, bx)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbelianClass {
    pub f1: BigInt,
    pub f2: BigInt,
    pub graphs: Vec<(i64, i64, BigInt)>,
}

impl AbelianClass {
    pub fn f1() -> Self {
        AbelianClass {
            f1: BigInt::one(),
            ..Default::default()
        }
    }

    pub fn f2() -> Self {
        AbelianClass {
            f2: BigInt::one(),
            ..Default::default()
        }
    }

    pub fn graph(a: i64, b: i64) -> Result<Self> {
        Self::default().with_graph(a, b, BigInt::one())
    }

    pub fn with_graph(mut self, a: i64, b: i64, coef: BigInt) -> Result<Self> {
        if a.gcd(&b) != 1 {
            return Err(Error::InvalidArgument(format!(
                "({a}, {b}) is not a coprime pair"
            )));
        }
        self.graphs.push((a, b, coef));
        Ok(self)
    }

    pub fn add(&self, other: &AbelianClass) -> AbelianClass {
        let mut graphs = self.graphs.clone();
        graphs.extend(other.graphs.iter().cloned());
        AbelianClass {
            f1: &self.f1 + &other.f1,
            f2: &self.f2 + &other.f2,
            graphs,
        }
    }

    pub fn scale(&self, n: &BigInt) -> AbelianClass {
        AbelianClass {
            f1: &self.f1 * n,
            f2: &self.f2 * n,
            graphs: self
                .graphs
                .iter()
                .map(|(a, b, c)| (*a, *b, c * n))
                .collect(),
        }
    }
}

fn graph_pairing(a: i64, b: i64, c: i64, d: i64) -> BigInt {
    let det = BigInt::from(a) * d - BigInt::from(b) * c;
    &det * &det
}

/// `F1·E_{a,b} = b²` and `F2·E_{a,b} = a²`.
fn fibre_pairing(fibre1: &BigInt, fibre2: &BigInt, a: i64, b: i64) -> BigInt {
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    fibre1 * &b * &b + fibre2 * &a * &a
}

/// The graph-graph pairing `(ad - bc)²` must reproduce the fibre table when
/// the fibres are read as `F1 = E_{1,0}` and `F2 = E_{0,1}`.
fn cross_pairing_is_consistent() -> bool {
    let one = BigInt::one();
    graph_pairing(1, 0, 1, 0).is_zero()
        && graph_pairing(0, 1, 0, 1).is_zero()
        && graph_pairing(1, 0, 0, 1) == one
        && (-3..=3).all(|a: i64| {
            (-3..=3).all(|b: i64| {
                graph_pairing(1, 0, a, b) == fibre_pairing(&one, &BigInt::zero(), a, b)
                    && graph_pairing(0, 1, a, b) == fibre_pairing(&BigInt::zero(), &one, a, b)
            })
        })
}

/// Bilinear extension of `F1² = F2² = 0`, `F1·F2 = 1`, `F1·E_{a,b} = b²`,
/// `F2·E_{a,b} = a²`, `E_{a,b}·E_{c,d} = (ad - bc)²`.
pub fn pair_abelian(x: &AbelianClass, y: &AbelianClass) -> Result<BigInt> {
    let mut total = &x.f1 * &y.f2 + &x.f2 * &y.f1;
    for (a, b, c) in &y.graphs {
        total += c * fibre_pairing(&x.f1, &x.f2, *a, *b);
    }
    for (a, b, c) in &x.graphs {
        total += c * fibre_pairing(&y.f1, &y.f2, *a, *b);
    }
    if !x.graphs.is_empty() && !y.graphs.is_empty() {
        if !cross_pairing_is_consistent() {
            return Err(Error::Degenerate(
                "graph-graph pairing disagrees with the fibre table".into(),
            ));
        }
        for (a, b, c) in &x.graphs {
            for (e, f, g) in &y.graphs {
                total += c * g * graph_pairing(*a, *b, *e, *f);
            }
        }
    }
    Ok(total)
}

/// Numbers of the double cover `X → E×E` branched over a general member of
/// `|2(F1 + F2)|`, with `A_n = F1 + E_{n,b}` and `D_n` the pullback of `A_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KollarRecord {
    #[serde(with = "decimal")]
    pub n: BigInt,
    #[serde(with = "decimal")]
    pub b: BigInt,
    #[serde(with = "decimal")]
    pub a_sq: BigInt,
    #[serde(with = "decimal")]
    pub a_dot_fibres: BigInt,
    #[serde(with = "decimal")]
    pub d_sq: BigInt,
    #[serde(with = "decimal")]
    pub d_dot_k: BigInt,
    /// `D_n·K_X / D_n²`
    pub ratio: Ratio,
}

pub fn kollar_record(n: i64, b: i64) -> Result<KollarRecord> {
    if b == 0 {
        return Err(Error::InvalidArgument("b must be nonzero".into()));
    }
    let a = AbelianClass::f1().with_graph(n, b, BigInt::one())?;
    let fibres = AbelianClass::f1().add(&AbelianClass::f2());
    let a_sq = pair_abelian(&a, &a)?;
    let a_dot_fibres = pair_abelian(&a, &fibres)?;
    // K_X is numerically the pullback of F1 + F2
    let d_sq: BigInt = 2 * &a_sq;
    let d_dot_k: BigInt = 2 * &a_dot_fibres;
    Ok(KollarRecord {
        n: n.into(),
        b: b.into(),
        ratio: Ratio::new(d_dot_k.clone(), d_sq.clone())?,
        a_sq,
        a_dot_fibres,
        d_sq,
        d_dot_k,
    })
}

/// Rows `n = 0..=n_max` (coprime to `b`) of the family.
pub fn kollar_table(b: i64, n_max: i64) -> Result<Vec<KollarRecord>> {
    (0..=n_max)
        .filter(|n| n.gcd(&b) == 1)
        .map(|n| kollar_record(n, b))
        .collect()
}

/// Numbers of the double cover `f: X → X_r` branched along a general conic,
/// so `K_X = f*(K_Y + H)`, and `D = f*A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalCoverRecord {
    pub class: DivisorClass,
    #[serde(with = "decimal")]
    pub d_sq: BigInt,
    #[serde(with = "decimal")]
    pub d_dot_k: BigInt,
    pub ratio: Ratio,
}

pub fn rational_cover_record(a: &DivisorClass) -> Result<RationalCoverRecord> {
    if a.r() < 9 {
        return Err(Error::InvalidArgument(format!("r = {} is below 9", a.r())));
    }
    if a.square() != BigInt::one() {
        return Err(Error::InvalidArgument(format!(
            "{a} does not have square 1"
        )));
    }
    let k_plus_h = canonical_class(a.r()).add(&DivisorClass::line(a.r()))?;
    let d_sq: BigInt = 2 * a.square();
    let d_dot_k: BigInt = 2 * a.intersect(&k_plus_h)?;
    Ok(RationalCoverRecord {
        class: a.clone(),
        ratio: Ratio::new(d_dot_k.clone(), d_sq.clone())?,
        d_sq,
        d_dot_k,
    })
}

/// One row of the sequence `G_k = f*D_k` on the double cover of `X_10`
/// branched along `2H`, a surface with `p_a = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarbourneRecord {
    pub k: usize,
    #[serde(with = "decimal")]
    pub d_k: BigInt,
    /// `p_a + (G² - K_X·G)/2` from the pullback rules.
    #[serde(with = "decimal")]
    pub vdim_g: BigInt,
    /// `2·vdim(D_k) - D_k·H` from the expanded formula on `X_10`.
    #[serde(with = "decimal")]
    pub vdim_g_direct: BigInt,
    #[serde(with = "decimal")]
    pub conditional_h0: BigInt,
    #[serde(with = "decimal")]
    pub conditional_h1: BigInt,
    pub status: AssumptionStatus,
}

pub fn harbourne_sequence(k_max: usize) -> Result<Vec<HarbourneRecord>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let h = DivisorClass::line(PELL_POINTS);
    let k_plus_h = canonical_class(PELL_POINTS).add(&h)?;
    (1..=k_max)
        .map(|k| {
            let rec = pell_divisor(k);
            let d = &rec.divisor;
            let g_sq = 2 * d.square();
            let k_dot_g = 2 * d.intersect(&k_plus_h)?;
            let vdim_g = (g_sq - k_dot_g) / 2;
            let vdim_g_direct = 2 * crate::divisor::vdim_expanded(d) - d.intersect(&h)?;
            Ok(HarbourneRecord {
                k,
                d_k: rec.d.clone(),
                conditional_h0: BigInt::one(),
                // h² = 0 and h⁰ = 1 give h¹ = h⁰ - 1 - vdim
                conditional_h1: -&vdim_g,
                vdim_g,
                vdim_g_direct,
                status: AssumptionStatus::ShghConditional,
            })
        })
        .collect()
}

/// `-p_a - α - 1`: on a surface where every irreducible curve satisfies
/// `h¹(D) ≤ α·h⁰(D)`, this bounds `D²` from below.
pub fn bnc_bound(pa: i64, alpha: i64) -> Result<BigInt> {
    if alpha < 0 {
        return Err(Error::InvalidArgument("alpha must be non-negative".into()));
    }
    Ok(-BigInt::from(pa) - alpha - 1)
}

/// `6α + 2p_a - 4`.
pub fn q4_bound_from_harbourne(pa: i64, alpha: i64) -> Result<BigInt> {
    if pa < 0 {
        return Err(Error::InvalidArgument("p_a must be non-negative".into()));
    }
    if alpha < 1 {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    Ok(BigInt::from(6) * alpha + 2 * BigInt::from(pa) - 4)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub pa: i64,
    pub alpha: i64,
    #[serde(with = "decimal")]
    pub bnc: BigInt,
    #[serde(with = "crate::serde_util::decimal_opt")]
    pub q4: Option<BigInt>,
}

/// Both bounds; the second is omitted when `α = 0`.
pub fn bounds(pa: i64, alpha: i64) -> Result<Bounds> {
    Ok(Bounds {
        pa,
        alpha,
        bnc: bnc_bound(pa, alpha)?,
        q4: if alpha >= 1 {
            Some(q4_bound_from_harbourne(pa, alpha)?)
        } else {
            None
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cremona::degree_growing_orbit;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn ratio(n: i64, d: i64) -> Ratio {
        Ratio(BigRational::new(big(n), big(d)))
    }

    #[test]
    fn pairing_table() {
        let f1 = AbelianClass::f1();
        let f2 = AbelianClass::f2();
        assert_eq!(pair_abelian(&f1, &f1).unwrap(), big(0));
        assert_eq!(pair_abelian(&f1, &f2).unwrap(), big(1));
        let e = AbelianClass::graph(5, 3).unwrap();
        assert_eq!(pair_abelian(&f1, &e).unwrap(), big(9));
        assert_eq!(pair_abelian(&f2, &e).unwrap(), big(25));
        assert_eq!(pair_abelian(&e, &e).unwrap(), big(0));
        let a = f1.add(&AbelianClass::graph(7, 2).unwrap());
        assert_eq!(pair_abelian(&a, &a).unwrap(), big(8));
        // graphs of the two projections behave as the fibres
        let (e10, e01) = (
            AbelianClass::graph(1, 0).unwrap(),
            AbelianClass::graph(0, 1).unwrap(),
        );
        assert_eq!(
            pair_abelian(&e10, &e01).unwrap(),
            pair_abelian(&f1, &f2).unwrap()
        );
        assert_eq!(
            pair_abelian(&e10, &e).unwrap(),
            pair_abelian(&f1, &e).unwrap()
        );
        assert_eq!(
            pair_abelian(&e01, &e).unwrap(),
            pair_abelian(&f2, &e).unwrap()
        );
        assert!(AbelianClass::graph(4, 2).is_err());
        assert!(cross_pairing_is_consistent());
    }

    #[test]
    fn kollar_examples() {
        let r = kollar_record(1, 1).unwrap();
        assert_eq!(r.ratio, ratio(3, 2));
        assert_eq!(r.ratio.to_string(), "3/2");
        assert_eq!(kollar_record(0, 1).unwrap().ratio, ratio(1, 1));
        let r = kollar_record(45, 1).unwrap();
        assert_eq!(r.ratio, ratio(2027, 2));
        assert!(r.ratio.0 > BigRational::from_integer(big(1000)));
        let r = kollar_record(5, 3).unwrap();
        assert_eq!(r.a_sq, big(18));
        assert_eq!(r.d_sq, big(36));
        assert_eq!(r.d_dot_k, big(2 * (25 + 9 + 1)));
        assert!(kollar_record(4, 2).is_err());
        assert!(kollar_record(1, 0).is_err());
    }

    #[test]
    fn kollar_ratio_increases() {
        let rows = kollar_table(1, 100).unwrap();
        assert_eq!(rows.len(), 101);
        assert!(rows.windows(2).all(|w| w[1].ratio > w[0].ratio));
        let rows = kollar_table(4, 60).unwrap();
        assert!(rows.iter().all(|r| r.n.gcd(&big(4)) == big(1)));
        assert!(rows.windows(2).all(|w| w[1].ratio > w[0].ratio));
    }

    #[test]
    fn rational_cover_examples() {
        let r = rational_cover_record(&DivisorClass::line(9)).unwrap();
        assert_eq!(r.d_dot_k, big(-4));
        assert_eq!(r.ratio, ratio(-2, 1));
        let a: DivisorClass = "2;1,1,1,0^6".parse().unwrap();
        assert_eq!(rational_cover_record(&a).unwrap().ratio, ratio(-1, 1));
        assert!(rational_cover_record(&"2;1^9".parse().unwrap()).is_err());
        assert!(rational_cover_record(&DivisorClass::line(8)).is_err());
    }

    #[test]
    fn rational_cover_along_orbit() {
        let orbit = degree_growing_orbit(9, 40).unwrap();
        let records: Vec<_> = orbit
            .iter()
            .map(|a| rational_cover_record(a).unwrap())
            .collect();
        assert!(records.iter().all(|r| r.d_sq == big(2)));
        let large: Vec<_> = records
            .iter()
            .filter(|r| *r.class.degree() >= big(10))
            .collect();
        assert!(!large.is_empty());
        assert!(large.iter().all(|r| r.ratio.0 > BigRational::zero()));
        assert!(large.windows(2).all(|w| w[1].ratio > w[0].ratio));
    }

    #[test]
    fn harbourne_examples() {
        let seq = harbourne_sequence(30).unwrap();
        assert_eq!(seq[0].vdim_g, big(-57));
        assert_eq!(seq[0].conditional_h1, big(57));
        assert_eq!(seq[1].vdim_g, big(-2220));
        for r in &seq {
            assert_eq!(r.vdim_g, -&r.d_k);
            assert_eq!(r.vdim_g_direct, r.vdim_g);
            assert_eq!(r.status, AssumptionStatus::ShghConditional);
        }
        assert!(seq
            .windows(2)
            .all(|w| w[1].conditional_h1 > w[0].conditional_h1));
        assert!(harbourne_sequence(0).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bnc_bound(0, 0).unwrap(), big(-1));
        assert_eq!(bnc_bound(1, 3).unwrap(), big(-5));
        assert!(bnc_bound(0, -1).is_err());
        assert_eq!(q4_bound_from_harbourne(0, 1).unwrap(), big(2));
        assert_eq!(q4_bound_from_harbourne(2, 5).unwrap(), big(30));
        assert!(q4_bound_from_harbourne(0, 0).is_err());
        assert!(q4_bound_from_harbourne(-1, 1).is_err());
        let json = serde_json::to_string(&bounds(0, 0).unwrap()).unwrap();
        assert_eq!(json, r#"{"pa":0,"alpha":0,"bnc":"-1","q4":null}"#);
    }

    fn abelian() -> impl Strategy<Value = AbelianClass> {
        let pair = (-6i64..6, -6i64..6).prop_filter("coprime", |(a, b)| a.gcd(b) == 1);
        (
            -20i64..20,
            -20i64..20,
            proptest::collection::vec((pair, -5i64..5), 0..4),
        )
            .prop_map(|(f1, f2, gs)| {
                gs.into_iter().fold(
                    AbelianClass {
                        f1: big(f1),
                        f2: big(f2),
                        graphs: vec![],
                    },
                    |acc, ((a, b), c)| acc.with_graph(a, b, big(c)).unwrap(),
                )
            })
    }

    proptest! {
        #[test]
        fn pairing_symmetric_and_bilinear(x in abelian(), y in abelian(), z in abelian(), s in -9i64..9) {
            prop_assert_eq!(pair_abelian(&x, &y).unwrap(), pair_abelian(&y, &x).unwrap());
            let lhs = pair_abelian(&x.scale(&big(s)).add(&y), &z).unwrap();
            let rhs = big(s) * pair_abelian(&x, &z).unwrap() + pair_abelian(&y, &z).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bnc_never_above_minus_one(pa in 0i64..1000, alpha in 0i64..1000) {
            prop_assert!(bnc_bound(pa, alpha).unwrap() <= big(-1));
            if alpha >= 1 {
                prop_assert!(q4_bound_from_harbourne(pa, alpha).unwrap() >= big(2));
            }
        }

        #[test]
        fn kollar_threshold(b in 1i64..6, t in 1i64..500) {
            // n² > 2b²T - b² - 1 forces the ratio past T
            let bound = 2 * b * b * t - b * b - 1;
            let n = (0..).find(|n: &i64| n * n > bound && n.gcd(&b) == 1).unwrap();
            let r = kollar_record(n, b).unwrap();
            prop_assert!(r.ratio.0 > BigRational::from_integer(big(t)));
        }
    }
}
