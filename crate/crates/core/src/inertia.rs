//! Sectors of the inertia stack of `[V/G]` and the root-gerbe criterion.
//!
//! Over `C` the datum `(H, chi: H -> mu_r)` of a twisted sector is labelled
//! by the element `g = chi^-1(exp(2 pi i / r))`, so sectors are indexed by
//! conjugacy classes of `G`. A sector has automorphism group `C(g)` in the
//! inertia stack and `C(g)/<g>` in its rigidification.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Elem;
use crate::representation::LinearAction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    /// Position of the class in [`crate::group::FiniteGroup::conjugacy_classes`].
    pub class_index: usize,
    pub representative: Elem,
    pub label: String,
    pub index_r: u64,
    pub fixed_dim: usize,
    pub age: BigRational,
    pub aut_order_x1: u64,
    pub aut_order_x1bar: u64,
    pub class_size: usize,
    pub is_untwisted: bool,
}

/// The sector list of one action together with `iota` and class lookups.
#[derive(Clone, Debug)]
pub struct InertiaDecomposition {
    sectors: Vec<Sector>,
    by_class: Vec<usize>,
    iota: Vec<usize>,
}

impl InertiaDecomposition {
    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn get(&self, i: usize) -> &Sector {
        &self.sectors[i]
    }

    /// Sector position of a conjugacy class.
    pub fn sector_of_class(&self, class_index: usize) -> usize {
        self.by_class[class_index]
    }

    pub fn untwisted(&self) -> usize {
        0
    }

    /// Position of the sector labelled by the class of `g^-1`.
    pub fn involution_iota(&self, sector: usize) -> usize {
        self.iota[sector]
    }

    pub fn position_of_label(&self, label: &str) -> Option<usize> {
        self.sectors.iter().position(|s| s.label == label)
    }
}

/// One sector per conjugacy class: untwisted first, the rest by
/// `(age, index_r, representative)`.
pub fn inertia_components(action: &LinearAction) -> Result<InertiaDecomposition> {
    let group = action.group();
    let mut sectors = Vec::with_capacity(group.conjugacy_classes().len());
    for (ci, class) in group.conjugacy_classes().iter().enumerate() {
        let g = class.representative;
        let r = group.element_order(g);
        let age = action.age(g)?.total;
        sectors.push(Sector {
            class_index: ci,
            representative: g,
            label: group.label(g),
            index_r: r,
            fixed_dim: action.fixed_subspace_dim(g)?,
            age,
            aut_order_x1: class.centralizer_order,
            aut_order_x1bar: class.centralizer_order / r,
            class_size: class.size(),
            is_untwisted: g == group.identity(),
        });
    }
    sectors.sort_by(|a, b| {
        b.is_untwisted
            .cmp(&a.is_untwisted)
            .then_with(|| a.age.cmp(&b.age))
            .then_with(|| a.index_r.cmp(&b.index_r))
            .then_with(|| a.representative.cmp(&b.representative))
    });
    let mut by_class = vec![0; sectors.len()];
    for (i, s) in sectors.iter().enumerate() {
        by_class[s.class_index] = i;
    }
    let iota = sectors
        .iter()
        .map(|s| by_class[group.class_index(group.inverse(s.representative))])
        .collect();
    Ok(InertiaDecomposition {
        sectors,
        by_class,
        iota,
    })
}

/// An element of `Z^free_rank ⊕ ⊕ Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardGroupData {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub element: Vec<i64>,
}

impl PicardGroupData {
    /// Validates and reduces the torsion coordinates.
    pub fn new(free_rank: usize, torsion: Vec<i64>, element: Vec<i64>) -> Result<Self> {
        let mut p = PicardGroupData {
            free_rank,
            torsion,
            element,
        };
        p.normalize()?;
        Ok(p)
    }

    pub fn normalize(&mut self) -> Result<()> {
        if self.element.len() != self.free_rank + self.torsion.len() {
            return Err(Error::InvalidPicard(format!(
                "element has {} coordinates, expected {}",
                self.element.len(),
                self.free_rank + self.torsion.len()
            )));
        }
        if let Some(t) = self.torsion.iter().find(|&&t| t < 1) {
            return Err(Error::InvalidPicard(format!("torsion factor {t} must be >= 1")));
        }
        for (c, &t) in self.element[self.free_rank..].iter_mut().zip(&self.torsion) {
            *c = c.rem_euclid(t);
        }
        Ok(())
    }
}

/// Whether the line bundle `p.element` has an `r`-th root, i.e. `r x = element`
/// is solvable in the Picard group.
pub fn root_section_exists(p: &PicardGroupData, r: u64) -> Result<bool> {
    if r == 0 {
        return Err(Error::ZeroRootIndex);
    }
    let mut p = p.clone();
    p.normalize()?;
    let r = i128::from(r);
    let free_ok = p.element[..p.free_rank]
        .iter()
        .all(|&c| i128::from(c) % r == 0);
    let torsion_ok = p.element[p.free_rank..]
        .iter()
        .zip(&p.torsion)
        .all(|(&c, &t)| solve_congruence(r, i128::from(c), i128::from(t)).is_some());
    Ok(free_ok && torsion_ok)
}

/// Some `x` in `[0, t)` with `r x ≡ c (mod t)`.
fn solve_congruence(r: i128, c: i128, t: i128) -> Option<i128> {
    let e = r.extended_gcd(&t);
    let g = e.gcd;
    if c % g != 0 {
        return None;
    }
    let m = t / g;
    let x = (e.x * (c / g)).rem_euclid(m.max(1));
    debug_assert!((r * x - c).rem_euclid(t).is_zero());
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn c2_mod_z2() {
        let a = LinearAction::diagonal(FiniteGroup::cyclic(2).unwrap(), vec![vec![1], vec![1]])
            .unwrap();
        let inertia = inertia_components(&a).unwrap();
        assert_eq!(inertia.len(), 2);
        let e = inertia.get(0);
        assert!(e.is_untwisted);
        assert_eq!((e.age.clone(), e.fixed_dim), (q(0, 1), 2));
        let s = inertia.get(1);
        assert_eq!((s.age.clone(), s.fixed_dim, s.index_r), (q(1, 1), 0, 2));
        assert_eq!(s.aut_order_x1, 2);
        assert_eq!(s.aut_order_x1bar, 1);
    }

    #[test]
    fn bs3_sectors() {
        let a = LinearAction::point(FiniteGroup::symmetric(3).unwrap());
        let inertia = inertia_components(&a).unwrap();
        let auts: Vec<u64> = inertia.sectors().iter().map(|s| s.aut_order_x1).collect();
        assert_eq!(auts, vec![6, 2, 3]);
        assert!(inertia.sectors().iter().all(|s| s.age.is_zero()));
        // all classes of S3 are real
        for i in 0..inertia.len() {
            assert_eq!(inertia.involution_iota(i), i);
        }
    }

    #[test]
    fn trivial_group_has_one_sector() {
        let a = LinearAction::point(FiniteGroup::cyclic(1).unwrap());
        let inertia = inertia_components(&a).unwrap();
        assert_eq!(inertia.len(), 1);
        assert!(inertia.get(0).is_untwisted);
    }

    #[test]
    fn iota_on_z3() {
        let a = LinearAction::diagonal(FiniteGroup::cyclic(3).unwrap(), vec![vec![1]]).unwrap();
        let inertia = inertia_components(&a).unwrap();
        let g = inertia.position_of_label("[1]").unwrap();
        let g2 = inertia.position_of_label("[2]").unwrap();
        assert_eq!(inertia.involution_iota(g), g2);
        assert_eq!(inertia.involution_iota(g2), g);
        assert_eq!(inertia.involution_iota(0), 0);
        // untwisted first, then ages 1/3, 2/3
        assert_eq!(inertia.get(1).age, q(1, 3));
        assert_eq!(inertia.get(2).age, q(2, 3));
    }

    #[test]
    fn root_examples() {
        let z = |c: i64| PicardGroupData::new(1, vec![], vec![c]).unwrap();
        assert!(root_section_exists(&z(2), 2).unwrap());
        assert!(!root_section_exists(&z(1), 2).unwrap());
        assert!(root_section_exists(&z(7), 1).unwrap());
        assert_eq!(root_section_exists(&z(7), 0), Err(Error::ZeroRootIndex));
        // Z/4: 2 = 2*1, 1 is not divisible by 2; Z/3: every element divisible by 2
        let t4 = |c: i64| PicardGroupData::new(0, vec![4], vec![c]).unwrap();
        assert!(root_section_exists(&t4(2), 2).unwrap());
        assert!(!root_section_exists(&t4(1), 2).unwrap());
        let t3 = PicardGroupData::new(0, vec![3], vec![1]).unwrap();
        assert!(root_section_exists(&t3, 2).unwrap());
        assert!(PicardGroupData::new(1, vec![2], vec![1]).is_err());
        assert!(PicardGroupData::new(0, vec![0], vec![1]).is_err());
    }
}
