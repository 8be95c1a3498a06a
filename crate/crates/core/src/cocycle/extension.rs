use std::sync::Arc;

use super::Cocycle;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// The extension `1 → Z/m → G̃ → G → 1` with product
/// `(g₁, a₁)(g₂, a₂) = (g₁g₂, a₁ + a₂ + α(g₁, g₂))`.
///
/// The pair `(g, a)` is element `g·m + a` of [`CentralExtension::total`], so
/// `(1, 0)` is the identity and `(1, 1)` is element 1.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    total: Arc<FiniteGroup>,
    base: Arc<FiniteGroup>,
    modulus: u64,
}

impl CentralExtension {
    pub fn new(alpha: &Cocycle) -> Result<Self> {
        let base = alpha.group().clone();
        let n = base.order();
        let m = alpha.modulus() as usize;
        let order = n * m;
        let mut table = vec![0u32; order * order];
        for g1 in 0..n {
            for g2 in 0..n {
                let g = base.mul(g1, g2);
                let c = alpha.get(g1, g2) as usize;
                for a1 in 0..m {
                    let row = (g1 * m + a1) * order;
                    for a2 in 0..m {
                        table[row + g2 * m + a2] = (g * m + (a1 + a2 + c) % m) as u32;
                    }
                }
            }
        }
        let total = FiniteGroup::from_raw_table(order, table);
        if let Some((x, y, z)) = total.find_nonassociative_triple() {
            return Err(Error::internal(format!("extension table is not associative at ({x}, {y}, {z})")));
        }
        Ok(CentralExtension { total: Arc::new(total), base, modulus: m as u64 })
    }

    pub fn total(&self) -> &Arc<FiniteGroup> {
        &self.total
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn element(&self, g: usize, a: u64) -> usize {
        g * self.modulus as usize + (a % self.modulus) as usize
    }

    /// `(g, a)` for an element of the total group.
    #[inline]
    pub fn split(&self, x: usize) -> (usize, u64) {
        let m = self.modulus as usize;
        (x / m, (x % m) as u64)
    }

    #[inline]
    pub fn project(&self, x: usize) -> usize {
        x / self.modulus as usize
    }

    /// `(1, 1)`, generating the central `Z/m`.
    pub fn central_generator(&self) -> usize {
        self.element(0, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::tests::v4_matrix_cocycle;
    use crate::cocycle::{h2_group, is_cohomologous};
    use crate::group::named;

    #[test]
    fn split_extension_is_direct_product() {
        let g = Arc::new(named::symmetric(3).unwrap());
        let ext = CentralExtension::new(&Cocycle::zero(g.clone(), 3)).unwrap();
        let t = ext.total();
        assert_eq!(t.order(), 18);
        assert_eq!(t.center().order(), 3);
        for x in 0..18 {
            let (gx, ax) = ext.split(x);
            for y in 0..18 {
                let (gy, ay) = ext.split(y);
                assert_eq!(t.mul(x, y), ext.element(g.mul(gx, gy), ax + ay));
            }
        }
    }

    #[test]
    fn v4_extension_is_dihedral_of_order_eight() {
        let g = Arc::new(named::klein_four().unwrap());
        let alpha = v4_matrix_cocycle(&g);
        let ext = CentralExtension::new(&alpha).unwrap();
        let t = ext.total();
        assert_eq!(t.order(), 8);
        assert!(!t.is_abelian());
        let z = t.center();
        assert_eq!(z.elements(), &[0, ext.central_generator()]);
        let orders: Vec<usize> = (0..8).map(|x| t.element_order(x)).collect();
        // D₄ has five involutions and two elements of order four
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 5);
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 2);
        // the restriction to a cyclic subgroup splits
        let (r, _) = alpha.restrict(&g.cyclic(1)).unwrap();
        assert!(is_cohomologous(&r, &Cocycle::zero(r.group().clone(), 2)).unwrap().is_cohomologous());
    }

    #[test]
    fn cohomologous_cocycles_give_isomorphic_extensions() {
        let g = Arc::new(named::dihedral(4).unwrap());
        let h2 = h2_group(&g, 2).unwrap();
        let alpha = h2.class(1).unwrap().clone();
        let t0: Vec<u64> = (0..8).map(|x| if x == 0 { 0 } else { (x as u64 * 7) % 2 }).collect();
        let beta = alpha.sum(&Cocycle::coboundary(g.clone(), 2, &t0).unwrap()).unwrap();
        let witness = is_cohomologous(&alpha, &beta).unwrap();
        let t = witness.cochain().unwrap();
        let big = witness.modulus();
        let ea = CentralExtension::new(&alpha.lift(big).unwrap()).unwrap();
        let eb = CentralExtension::new(&beta.lift(big).unwrap()).unwrap();
        let phi = |x: usize| {
            let (gx, a) = ea.split(x);
            eb.element(gx, (a + big - t[gx]) % big)
        };
        for x in 0..ea.total().order() {
            for y in 0..ea.total().order() {
                assert_eq!(phi(ea.total().mul(x, y)), eb.total().mul(phi(x), phi(y)));
            }
        }
    }
}
