//! Riemann–Roch on a genus-0 twisted curve with three twisted markings.
//!
//! A line bundle `L` of orbifold degree `d` with monodromy `zeta_{r_i}^{k_i}`
//! at marking `i` pushes forward to a line bundle on `P^1` of degree
//! `d - sum_i k_i / r_i`. For constant maps to `[V/G]` the tangent bundle
//! splits into eigenlines of orbifold degree 0, so each coordinate of `V`
//! contributes `h^1` of a bundle of degree 0, -1 or -2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::Elem;
use crate::representation::{Eigen, LinearAction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedLineBundleData {
    pub orb_degree: BigRational,
    pub monodromies: [Eigen; 3],
}

impl TwistedLineBundleData {
    pub fn new(orb_degree: BigRational, monodromies: [Eigen; 3]) -> Result<Self> {
        for m in &monodromies {
            if m.r == 0 || m.k >= m.r {
                return Err(Error::InvalidMonodromy(format!(
                    "need 0 <= k < r, got ({}, {})",
                    m.k, m.r
                )));
            }
        }
        Ok(TwistedLineBundleData {
            orb_degree,
            monodromies,
        })
    }

    /// Orbifold degree 0, the case of eigenlines of a constant map.
    pub fn untwisted_degree(monodromies: [Eigen; 3]) -> Result<Self> {
        Self::new(BigRational::zero(), monodromies)
    }
}

/// Degree of the coarse pushforward, `orb_degree - sum k_i/r_i`.
pub fn pushforward_degree(b: &TwistedLineBundleData) -> Result<BigInt> {
    let defect = b
        .monodromies
        .iter()
        .fold(BigRational::zero(), |acc, m| acc + m.fraction());
    let d = &b.orb_degree - defect;
    if !d.is_integer() {
        return Err(Error::NonIntegralDegree(d.to_string()));
    }
    Ok(d.to_integer())
}

/// `(h^0, h^1)` of `O(d)` on `P^1`.
pub fn cohomology_p1(d: &BigInt) -> (BigInt, BigInt) {
    let one = BigInt::one();
    let h0 = d + &one;
    let h1 = -(d + &one);
    (
        if h0.is_positive() { h0 } else { BigInt::zero() },
        if h1.is_positive() { h1 } else { BigInt::zero() },
    )
}

/// Per-coordinate data of a constant 3-pointed map with monodromies
/// `(g1, g2, (g1 g2)^-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateObstruction {
    pub monodromies: [Eigen; 3],
    /// In `{0, -1, -2}`.
    pub pushforward_degree: i64,
    pub h1: u32,
}

pub fn coordinate_obstructions(
    action: &LinearAction,
    g1: Elem,
    g2: Elem,
) -> Result<Vec<CoordinateObstruction>> {
    if !action.is_abelian_diagonal() {
        return Err(Error::UnsupportedProduct(
            "obstruction ranks need a diagonal action of an abelian group".into(),
        ));
    }
    let group = action.group();
    let g3 = group.inverse(group.mul(g1, g2));
    let e1 = action.eigen_exponents(g1)?;
    let e2 = action.eigen_exponents(g2)?;
    let e3 = action.eigen_exponents(g3)?;
    let mut out = Vec::with_capacity(action.dim());
    for ((a, b), c) in e1.into_iter().zip(e2).zip(e3) {
        let data = TwistedLineBundleData::untwisted_degree([a, b, c])?;
        let d = pushforward_degree(&data).expect("characters make the monodromy sum integral");
        let (_, h1) = cohomology_p1(&d);
        let d: i64 = d.try_into().expect("degree in {0,-1,-2}");
        assert!((-2..=0).contains(&d), "constant-map degree {d} out of range");
        out.push(CoordinateObstruction {
            monodromies: data.monodromies,
            pushforward_degree: d,
            h1: h1.try_into().expect("h1 <= 1"),
        });
    }
    Ok(out)
}

/// Rank of the obstruction bundle on the component of constant maps with
/// monodromies `(g1, g2, (g1 g2)^-1)`.
pub fn obstruction_rank(action: &LinearAction, g1: Elem, g2: Elem) -> Result<u32> {
    Ok(coordinate_obstructions(action, g1, g2)?
        .iter()
        .map(|c| c.h1)
        .sum())
}
