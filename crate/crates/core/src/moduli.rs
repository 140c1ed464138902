//! Components of `K_{0,3}(BG, 0)`.
//!
//! A degree-0 twisted stable map from a 3-pointed genus-0 twisted curve to
//! `BG` is a principal `G`-bundle, determined up to isomorphism by its
//! monodromy triple `(g1, g2, g3)` with `g1 g2 g3 = 1`, modulo simultaneous
//! conjugation. The automorphism group of a component is `Z(g1) ∩ Z(g2)`.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliComponent {
    /// Lexicographically least triple in the conjugation orbit.
    pub triple: [Elem; 3],
    pub aut_order: u64,
    pub orbit_size: usize,
    /// Class indices of `e1`, `e2` and the twisted third evaluation, i.e. the
    /// classes of `g1`, `g2` and `g3^-1`.
    pub eval_sectors: [usize; 3],
    /// Orders of `g1`, `g2`, `g3`.
    pub node_indices: [u64; 3],
}

/// All components, in lexicographic order of their canonical triples.
pub fn enumerate_k03_bg(group: &FiniteGroup, max_order: usize) -> Result<Vec<ModuliComponent>> {
    let n = group.order();
    if n > max_order {
        return Err(Error::SizeBound {
            what: "group for moduli enumeration",
            size: n,
            bound: max_order,
        });
    }
    // (g1, g2) determines g3, and lexicographic order on triples is the
    // order on pair indices, so the first unseen pair is an orbit minimum.
    let mut seen = vec![false; n * n];
    let mut out = Vec::new();
    for g1 in group.elements() {
        for g2 in group.elements() {
            let start = g1.index() * n + g2.index();
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit_size = 1;
            let mut queue = VecDeque::from([(g1, g2)]);
            while let Some((x, y)) = queue.pop_front() {
                for &h in group.generators() {
                    let (cx, cy) = (group.conjugate(h, x), group.conjugate(h, y));
                    let idx = cx.index() * n + cy.index();
                    if !seen[idx] {
                        seen[idx] = true;
                        orbit_size += 1;
                        queue.push_back((cx, cy));
                    }
                }
            }
            let g3 = group.inverse(group.mul(g1, g2));
            out.push(ModuliComponent {
                triple: [g1, g2, g3],
                aut_order: group.joint_centralizer_order(g1, g2),
                orbit_size,
                eval_sectors: [
                    group.class_index(g1),
                    group.class_index(g2),
                    group.class_index(group.inverse(g3)),
                ],
                node_indices: [
                    group.element_order(g1),
                    group.element_order(g2),
                    group.element_order(g3),
                ],
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MassCheck {
    pub lhs: u64,
    pub rhs: u64,
    pub ok: bool,
}

/// `sum |G| / |Aut|` over components against `|G|^2`, the number of pairs.
pub fn mass_check(group: &FiniteGroup, components: &[ModuliComponent]) -> MassCheck {
    let n = group.order() as u64;
    let lhs = components.iter().map(|c| n / c.aut_order).sum();
    let rhs = n * n;
    MassCheck {
        lhs,
        rhs,
        ok: lhs == rhs,
    }
}

/// Index `r_×` of the node obtained by gluing marking 3 of `c1` to marking 1
/// of `c2`. The bands must be inverse: the twisted evaluation of `c1` at its
/// third marking has to land in the sector of `c2` at its first.
pub fn gluing_index_r_times(
    group: &FiniteGroup,
    c1: &ModuliComponent,
    c2: &ModuliComponent,
) -> Result<u64> {
    if c1.eval_sectors[2] != c2.eval_sectors[0] {
        return Err(Error::IncompatibleGluing {
            left: group.label(group.conjugacy_classes()[c1.eval_sectors[2]].representative),
            right: group.label(group.conjugacy_classes()[c2.eval_sectors[0]].representative),
        });
    }
    debug_assert_eq!(c1.node_indices[2], c2.node_indices[0]);
    Ok(c1.node_indices[2])
}

/// Class-sum structure constants recovered from the components:
/// `(C1, C2) -> {C3 -> sum [C(h) : Aut]}`.
pub fn structure_constants(
    group: &FiniteGroup,
    components: &[ModuliComponent],
) -> BTreeMap<(usize, usize), BTreeMap<usize, u64>> {
    let mut out: BTreeMap<(usize, usize), BTreeMap<usize, u64>> = BTreeMap::new();
    for c in components {
        let target = c.eval_sectors[2];
        let cent = group.conjugacy_classes()[target].centralizer_order;
        *out
            .entry((c.eval_sectors[0], c.eval_sectors[1]))
            .or_default()
            .entry(target)
            .or_default() += cent / c.aut_order;
    }
    out
}
