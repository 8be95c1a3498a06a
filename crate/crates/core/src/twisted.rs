//! α-twisted characters, read off the central extension `G̃_α`.
//!
//! A row of [`TwistedCharacterTable`] is an irreducible character of `G̃_α`
//! on which the central `(1, 1)` acts by `ζ_m`; its values are recorded at the
//! section points `(g, 0)`.

use std::sync::Arc;

use num_rational::Rational64;

use crate::arith::IntCyc;
use crate::chartable::CharacterTable;
use crate::cocycle::{h2_group, is_cohomologous, same_group, CentralExtension, Cocycle, CohomologyClassSet};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::par;

/// `(1/|G|) Σ_g f(g)·conj(h(g))` over all elements.
pub fn element_inner_product(f: &[IntCyc], h: &[IntCyc]) -> Result<Rational64> {
    let mut total = IntCyc::from_int(1, 0);
    for (x, y) in f.iter().zip(h) {
        total = &total + &(x * &y.conjugate());
    }
    let num = total.to_integer().ok_or_else(|| Error::internal("inner product is not rational"))?;
    Ok(Rational64::new(num, f.len() as i64))
}

#[derive(Clone, Debug)]
pub struct TwistedCharacterTable {
    cocycle: Cocycle,
    level: usize,
    /// `rows[i][g] = χ_i(g, 0)`.
    rows: Vec<Vec<IntCyc>>,
}

impl TwistedCharacterTable {
    pub fn new(alpha: &Cocycle) -> Result<Self> {
        let working = alpha.reduced();
        let m = working.modulus();
        let group = alpha.group().clone();
        let n = group.order();
        let ext = CentralExtension::new(&working)?;
        let table = CharacterTable::new(ext.total())?;
        let central = ext.central_generator();
        let level = table.level();
        let rows: Vec<Vec<IntCyc>> = (0..table.len())
            .filter(|&i| {
                let d = table.rows()[i][0].to_integer().expect("integral degree");
                *table.value(i, central) == IntCyc::root(m as usize, 1).scale(d)
            })
            .map(|i| (0..n).map(|g| table.value(i, ext.element(g, 0)).clone()).collect())
            .collect();
        let t = TwistedCharacterTable { cocycle: alpha.clone(), level, rows };
        t.certify()?;
        Ok(t)
    }

    fn certify(&self) -> Result<()> {
        let regular = self.cocycle.regular_classes();
        if self.rows.len() != regular.len() {
            return Err(Error::internal(format!(
                "{} twisted irreducibles but {} α-regular classes",
                self.rows.len(),
                regular.len()
            )));
        }
        let n = self.group().order() as i64;
        if self.degrees().iter().map(|d| d * d).sum::<i64>() != n {
            return Err(Error::internal("twisted degrees do not square-sum to the group order"));
        }
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in self.rows.iter().enumerate().take(i + 1) {
                if element_inner_product(a, b)? != Rational64::from_integer(i64::from(i == j)) {
                    return Err(Error::internal("twisted characters are not orthonormal"));
                }
            }
            for (g, v) in a.iter().enumerate() {
                if !self.cocycle.is_regular(g) && !v.is_zero() {
                    return Err(Error::internal(format!("twisted character is nonzero at irregular element {g}")));
                }
            }
        }
        Ok(())
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.cocycle.group()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<IntCyc>] {
        &self.rows
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r[0].to_integer().expect("integral degree")).collect()
    }

    /// Multiplicities of an α-twisted class function given on every element.
    pub fn decompose(&self, f: &[IntCyc]) -> Result<Vec<i64>> {
        if f.len() != self.group().order() {
            return Err(Error::Dimension(format!("{} values for a group of order {}", f.len(), self.group().order())));
        }
        self.rows
            .iter()
            .map(|row| {
                let ip = element_inner_product(f, row)?;
                if ip.is_integer() {
                    Ok(ip.to_integer())
                } else {
                    Err(Error::internal(format!("non-integral multiplicity {ip}")))
                }
            })
            .collect()
    }

    fn decompose_character(&self, f: &[IntCyc]) -> Result<Vec<i64>> {
        let mult = self.decompose(f)?;
        if mult.iter().any(|&x| x < 0) {
            return Err(Error::internal("negative multiplicity in a genuine character"));
        }
        let deg: i64 = mult.iter().zip(self.degrees()).map(|(a, d)| a * d).sum();
        if Some(deg) != f[0].to_integer() {
            return Err(Error::internal("decomposition does not account for the degree"));
        }
        Ok(mult)
    }
}

fn same_class_function_cocycle(a: &Cocycle, b: &Cocycle) -> bool {
    let l = num_integer::lcm(a.modulus(), b.modulus());
    same_group(a.group(), b.group())
        && a.lift(l).map(|x| x.values().to_vec()).ok() == b.lift(l).map(|x| x.values().to_vec()).ok()
}

/// Rank of `R_α(G)`: the α-regular class count, checked against the table.
pub fn rank_r_alpha(alpha: &Cocycle) -> Result<usize> {
    let count = alpha.regular_classes().len();
    let table = TwistedCharacterTable::new(alpha)?;
    if table.len() != count {
        return Err(Error::internal("regular class count disagrees with the twisted table"));
    }
    Ok(count)
}

/// `χ_i · ψ_j` expanded in `target`, whose cocycle must be `α + β`.
pub fn decompose_product(
    a: &TwistedCharacterTable,
    i: usize,
    b: &TwistedCharacterTable,
    j: usize,
    target: &TwistedCharacterTable,
) -> Result<Vec<i64>> {
    let sum = a.cocycle().sum(b.cocycle())?;
    if !same_class_function_cocycle(&sum, target.cocycle()) {
        return Err(Error::validation("target table is not for the summed cocycle"));
    }
    let f: Vec<IntCyc> = a.rows[i].iter().zip(&b.rows[j]).map(|(x, y)| x * y).collect();
    target.decompose_character(&f)
}

/// `χ*` expanded in `target`, whose cocycle must be `−α`.
pub fn dual_character(a: &TwistedCharacterTable, i: usize, target: &TwistedCharacterTable) -> Result<Vec<i64>> {
    if !same_class_function_cocycle(&a.cocycle().neg(), target.cocycle()) {
        return Err(Error::validation("target table is not for the negated cocycle"));
    }
    let f: Vec<IntCyc> = a.rows[i].iter().map(IntCyc::conjugate).collect();
    target.decompose_character(&f)
}

/// Restriction of `χ_i` to `H`, expanded in the twisted table of `res α`.
pub fn restriction_map(a: &TwistedCharacterTable, i: usize, h: &Subgroup) -> Result<(TwistedCharacterTable, Vec<i64>)> {
    let (res, emb) = a.cocycle().restrict(h)?;
    let sub = TwistedCharacterTable::new(&res)?;
    let f: Vec<IntCyc> = emb.iter().map(|&g| a.rows[i][g].clone()).collect();
    let mult = sub.decompose_character(&f)?;
    Ok((sub, mult))
}

/// Structure constants of one graded piece `R_a × R_b → R_c`.
#[derive(Clone, Debug)]
pub struct ProductBlock {
    pub target: usize,
    /// `constants[i][j]` expands `x_i · y_j` over the basis of `R_c`.
    pub constants: Vec<Vec<Vec<i64>>>,
}

/// `TR(G) = ⊕_c R_c(G)` over the classes representable at modulus `m`.
///
/// Class `a` with digits `(a_1, …)` is represented by the cocycle
/// `Σ a_i γ_i` in the invariant-factor generators. Products add cocycles
/// exactly; when a digit wraps, the product is moved back to the chosen
/// representative with a fixed trivialization of `d_i γ_i`, which keeps the
/// multiplication associative.
#[derive(Clone, Debug)]
pub struct TRRing {
    classes: CohomologyClassSet,
    representatives: Vec<Cocycle>,
    tables: Vec<TwistedCharacterTable>,
    /// Per factor, a cochain `s_i` with `δs_i = −(M/m)·d_i γ_i` at modulus `M`.
    carries: Vec<Vec<u64>>,
    big_modulus: u64,
    products: Vec<Vec<ProductBlock>>,
}

impl TRRing {
    pub fn new(group: &Arc<FiniteGroup>, m: u64) -> Result<Self> {
        let classes = h2_group(group, m)?;
        let count = classes.classes()?.len();
        let n = group.order();
        let representatives: Vec<Cocycle> = (0..count as u64)
            .map(|c| {
                let mut v = vec![0u64; n * n];
                for (d, f) in classes.digits(c).iter().zip(classes.factors()) {
                    for (x, &y) in v.iter_mut().zip(f.generator.values()) {
                        *x = (*x + d * y) % m;
                    }
                }
                Cocycle::from_flat_unchecked(group.clone(), m, v)
            })
            .collect();
        let tables = par::try_map_slice(&representatives, TwistedCharacterTable::new)?;
        let big_modulus = m * group.exponent() as u64;
        let mut carries = Vec::new();
        for f in classes.factors() {
            let wrapped = f.generator.lift(m)?;
            let d = f.order;
            let values: Vec<u64> = wrapped.values().iter().map(|&x| (x * d) % m).collect();
            let wrapped = Cocycle::from_flat_unchecked(group.clone(), m, values);
            let w = is_cohomologous(&wrapped, &Cocycle::zero(group.clone(), m))?;
            let t = w.cochain().ok_or_else(|| Error::internal("order multiple of a class is not trivial"))?;
            if w.modulus() != big_modulus {
                return Err(Error::internal("unexpected trivialization modulus"));
            }
            carries.push(t.to_vec());
        }
        let mut ring = TRRing { classes, representatives, tables, carries, big_modulus, products: Vec::new() };
        let pairs: Vec<(usize, usize)> = (0..count).flat_map(|a| (0..count).map(move |b| (a, b))).collect();
        let blocks = par::try_map_slice(&pairs, |&(a, b)| ring.product_block(a, b))?;
        ring.products = blocks.chunks(count.max(1)).map(<[ProductBlock]>::to_vec).collect();
        Ok(ring)
    }

    /// Target class and the rebasing exponent `t(g)` (mod `M`) for `R_a × R_b`.
    fn rebase(&self, a: usize, b: usize) -> (usize, Vec<u64>) {
        let da = self.classes.digits(a as u64);
        let db = self.classes.digits(b as u64);
        let n = self.group().order();
        let big = self.big_modulus;
        let mut t = vec![0u64; n];
        let mut target = 0u64;
        let mut radix = 1u64;
        for (i, f) in self.classes.factors().iter().enumerate() {
            let s = da[i] + db[i];
            if s >= f.order {
                for (x, &c) in t.iter_mut().zip(&self.carries[i]) {
                    *x = (*x + c) % big;
                }
            }
            target += (s % f.order) * radix;
            radix *= f.order;
        }
        (target as usize, t)
    }

    fn product_block(&self, a: usize, b: usize) -> Result<ProductBlock> {
        let (c, t) = self.rebase(a, b);
        let big = self.big_modulus as usize;
        let ta = &self.tables[a];
        let tb = &self.tables[b];
        let tc = &self.tables[c];
        let factor: Vec<IntCyc> = t.iter().map(|&x| IntCyc::root(big, x as i64)).collect();
        let constants = (0..ta.len())
            .map(|i| {
                (0..tb.len())
                    .map(|j| {
                        let f: Vec<IntCyc> =
                            (0..factor.len()).map(|g| &(&ta.rows[i][g] * &tb.rows[j][g]) * &factor[g]).collect();
                        tc.decompose_character(&f)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductBlock { target: c, constants })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.classes.group()
    }

    pub fn modulus(&self) -> u64 {
        self.classes.modulus()
    }

    pub fn classes(&self) -> &CohomologyClassSet {
        &self.classes
    }

    /// The cocycle representing each graded piece.
    pub fn representatives(&self) -> &[Cocycle] {
        &self.representatives
    }

    pub fn tables(&self) -> &[TwistedCharacterTable] {
        &self.tables
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.tables.iter().map(TwistedCharacterTable::len).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.ranks().iter().sum()
    }

    pub fn product(&self, a: usize, b: usize) -> &ProductBlock {
        &self.products[a][b]
    }

    /// Class of `−a`.
    pub fn negate_class(&self, a: usize) -> usize {
        let mut out = 0u64;
        let mut radix = 1u64;
        for (d, f) in self.classes.digits(a as u64).iter().zip(self.classes.factors()) {
            out += ((f.order - d) % f.order) * radix;
            radix *= f.order;
        }
        out as usize
    }

    /// `x_i* ∈ R_{−a}` in the basis of the representative for `−a`.
    pub fn dual(&self, a: usize, i: usize) -> Result<Vec<i64>> {
        let target = self.negate_class(a);
        let big = self.big_modulus;
        let n = self.group().order();
        let mut t = vec![0u64; n];
        for (k, d) in self.classes.digits(a as u64).iter().enumerate() {
            if *d != 0 {
                for (x, &c) in t.iter_mut().zip(&self.carries[k]) {
                    *x = (*x + big - c) % big;
                }
            }
        }
        let f: Vec<IntCyc> =
            (0..n).map(|g| &self.tables[a].rows[i][g].conjugate() * &IntCyc::root(big as usize, t[g] as i64)).collect();
        self.tables[target].decompose_character(&f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;

    fn arc(g: Result<FiniteGroup>) -> Arc<FiniteGroup> {
        Arc::new(g.unwrap())
    }

    #[test]
    fn untwisted_table_is_ordinary_table() {
        let g = arc(named::symmetric(4));
        let t = TwistedCharacterTable::new(&Cocycle::zero(g.clone(), 2)).unwrap();
        let ct = CharacterTable::new(&g).unwrap();
        assert_eq!(t.degrees(), ct.degrees());
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn v4_twisted_row() {
        let g = arc(named::klein_four());
        let h = h2_group(&g, 2).unwrap();
        let t = TwistedCharacterTable::new(h.class(1).unwrap()).unwrap();
        assert_eq!(t.len(), 1);
        let vals: Vec<Option<i64>> = t.rows()[0].iter().map(IntCyc::to_integer).collect();
        assert_eq!(vals, vec![Some(2), Some(0), Some(0), Some(0)]);
        assert_eq!(rank_r_alpha(h.class(1).unwrap()).unwrap(), 1);
        assert_eq!(dual_character(&t, 0, &t).unwrap(), vec![1]);
    }

    #[test]
    fn twisted_ranks_match_regular_classes() {
        for (g, m) in [(arc(named::symmetric(4)), 2u64), (arc(named::dihedral(4)), 4), (arc(named::alternating(4)), 2)]
        {
            let h = h2_group(&g, m).unwrap();
            for alpha in h.classes().unwrap() {
                assert_eq!(rank_r_alpha(alpha).unwrap(), alpha.regular_classes().len());
            }
        }
        // the spin characters of the double covers of S₄ and S₅
        let s4 = arc(named::symmetric(4));
        assert_eq!(rank_r_alpha(h2_group(&s4, 2).unwrap().class(1).unwrap()).unwrap(), 3);
    }

    #[test]
    fn restriction_examples() {
        let g = arc(named::klein_four());
        let h = h2_group(&g, 2).unwrap();
        let t = TwistedCharacterTable::new(h.class(1).unwrap()).unwrap();
        let (_, whole) = restriction_map(&t, 0, &g.whole()).unwrap();
        assert_eq!(whole, vec![1]);
        let (sub, mult) = restriction_map(&t, 0, &g.cyclic(1)).unwrap();
        assert_eq!(sub.len(), 2);
        assert_eq!(mult, vec![1, 1]);
        let (_, triv) = restriction_map(&t, 0, &Subgroup::trivial()).unwrap();
        assert_eq!(triv, vec![2]);
    }

    #[test]
    fn v4_total_ring() {
        let g = arc(named::klein_four());
        let tr = TRRing::new(&g, 2).unwrap();
        assert_eq!(tr.ranks(), vec![4, 1]);
        assert_eq!(tr.total_rank(), 5);
        let mu = tr.product(1, 1);
        assert_eq!(mu.target, 0);
        assert_eq!(mu.constants[0][0], vec![1, 1, 1, 1]);
        for x in 0..4 {
            assert_eq!(tr.product(0, 1).constants[x][0], vec![1]);
            let sq = &tr.product(0, 0).constants[x][x];
            assert_eq!(sq, &vec![1, 0, 0, 0]);
        }
        assert_eq!(tr.dual(1, 0).unwrap(), vec![1]);
    }

    /// Multiplies basis vectors through the structure constants.
    fn mul(tr: &TRRing, a: usize, x: &[i64], b: usize, y: &[i64]) -> (usize, Vec<i64>) {
        let block = tr.product(a, b);
        let mut out = vec![0i64; tr.tables()[block.target].len()];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                if xi * yj != 0 {
                    for (o, &c) in out.iter_mut().zip(&block.constants[i][j]) {
                        *o += xi * yj * c;
                    }
                }
            }
        }
        (block.target, out)
    }

    #[test]
    fn total_ring_is_associative_and_dual_is_involutive() {
        let e8 = arc(FiniteGroup::from_permutations(
            6,
            &[vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 2, 4, 5], vec![0, 1, 2, 3, 5, 4]],
        ));
        for g in [arc(named::klein_four()), arc(named::dihedral(4)), arc(named::by_name("Q8").unwrap()), e8] {
            let tr = TRRing::new(&g, 2).unwrap();
            let classes = tr.tables().len();
            let basis = |c: usize, i: usize| {
                let mut v = vec![0i64; tr.tables()[c].len()];
                v[i] = 1;
                v
            };
            for a in 0..classes {
                for b in 0..classes {
                    for c in 0..classes {
                        for i in 0..tr.tables()[a].len() {
                            for j in 0..tr.tables()[b].len() {
                                for k in 0..tr.tables()[c].len() {
                                    let (ab, xy) = mul(&tr, a, &basis(a, i), b, &basis(b, j));
                                    let left = mul(&tr, ab, &xy, c, &basis(c, k));
                                    let (bc, yz) = mul(&tr, b, &basis(b, j), c, &basis(c, k));
                                    let right = mul(&tr, a, &basis(a, i), bc, &yz);
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
                for i in 0..tr.tables()[a].len() {
                    let d = tr.dual(a, i).unwrap();
                    let back: Vec<i64> = d
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(|(j, _)| tr.dual(tr.negate_class(a), j).unwrap())
                        .next()
                        .unwrap();
                    assert_eq!(back, basis(a, i));
                }
            }
        }
    }
}
