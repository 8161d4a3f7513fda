//! Quadratic Cremona transformations acting on `Pic(X_r)` and the
//! degree-growing orbit of a line.
//!
//! The standard quadratic map based at points `i, j, k` sends
//! `(d; m)` to `(2d - m_i - m_j - m_k; ...)` with
//! `m_i' = d - m_j - m_k` (and cyclically), fixing every other multiplicity.
//! It is reflection in the root `H - E_i - E_j - E_k`, so it preserves the
//! intersection form and the canonical class.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};

/// Three distinct 0-based point indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BaseTriple([usize; 3]);

impl BaseTriple {
    pub fn new(i: usize, j: usize, k: usize, r: usize) -> Result<Self> {
        if i == j || j == k || i == k {
            return Err(Error::InvalidIndex(format!(
                "indices ({i}, {j}, {k}) are not distinct"
            )));
        }
        if let Some(bad) = [i, j, k].into_iter().find(|&x| x >= r) {
            return Err(Error::InvalidIndex(format!(
                "index {bad} out of range for r = {r}"
            )));
        }
        let mut idx = [i, j, k];
        idx.sort_unstable();
        Ok(BaseTriple(idx))
    }

    pub fn indices(&self) -> [usize; 3] {
        self.0
    }
}

pub fn cremona_transform(
    class: &DivisorClass,
    i: usize,
    j: usize,
    k: usize,
) -> Result<DivisorClass> {
    let triple = BaseTriple::new(i, j, k, class.r())?;
    Ok(apply(class, triple))
}

pub fn apply(class: &DivisorClass, triple: BaseTriple) -> DivisorClass {
    let [i, j, k] = triple.0;
    let d = class.degree();
    let m = class.mults();
    // D·(H - E_i - E_j - E_k)
    let excess = d - &m[i] - &m[j] - &m[k];
    let mut mults = m.to_vec();
    for idx in [i, j, k] {
        mults[idx] = &m[idx] + &excess;
    }
    DivisorClass::new(d + &excess, mults)
}

/// Whether `T` preserves the pairing of `a` and `b`.
pub fn is_isometry_witness(a: &DivisorClass, b: &DivisorClass, triple: BaseTriple) -> Result<bool> {
    let before = a.intersect(b)?;
    let after = apply(a, triple).intersect(&apply(b, triple))?;
    Ok(before == after)
}

/// The three smallest multiplicities, ties broken by lower index.
fn smallest_triple(class: &DivisorClass) -> BaseTriple {
    let mut idx: Vec<usize> = (0..class.r()).collect();
    idx.sort_by(|&a, &b| class.mults()[a].cmp(&class.mults()[b]).then(a.cmp(&b)));
    BaseTriple::new(idx[0], idx[1], idx[2], class.r()).expect("r >= 3")
}

/// `A_0 = (1; 0^r), A_1, ..., A_steps`, each obtained by the quadratic
/// transformation based at the three smallest multiplicities of the previous
/// class. All classes satisfy `A² = 1` and `K·A = -3`.
pub fn degree_growing_orbit(r: usize, steps: usize) -> Result<Vec<DivisorClass>> {
    if r < 9 {
        return Err(Error::InvalidArgument(format!(
            "r = {r}: the Cremona orbit of a line is finite for r <= 8"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument(
            "at least one step is required".into(),
        ));
    }
    let mut orbit = Vec::with_capacity(steps + 1);
    orbit.push(DivisorClass::line(r));
    for t in 1..=steps {
        let prev = orbit.last().expect("non-empty");
        let next = apply(prev, smallest_triple(prev));
        if next.mults().iter().any(Signed::is_negative) {
            return Err(Error::OrbitStrategy(format!("step {t} produced {next}")));
        }
        orbit.push(next);
    }
    Ok(orbit)
}

/// Degrees `A_t·H` along the orbit.
pub fn orbit_degrees(orbit: &[DivisorClass]) -> Vec<BigInt> {
    orbit.iter().map(|a| a.degree().clone()).collect()
}
