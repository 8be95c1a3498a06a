//! `H²(G, S¹)` classes representable at modulus `m`.
//!
//! A normalized cocycle is determined by its values `α(g, s)` on generators
//! `s`: walking a spanning tree of the Cayley graph, `α(g, hs) = α(g, h) +
//! α(gh, s) − α(h, s)`. Those values are the unknowns; every non-tree edge of
//! the Cayley graph contributes one equation per `g`.
//!
//! Two `Z/m`-valued cocycles define the same class in `H²(G, S¹)` when they
//! differ by `δt` for an `S¹`-valued `t`. Such `t` take values in `μ_{m·e}`
//! with `e = exp(G)`, so the coboundary module is spanned by the ordinary
//! `δ(e_u)` together with `δφ̃ / e` for homomorphisms `φ: G → Z/e` lifted to
//! `[0, e)`.

use std::sync::Arc;

use super::{same_group, Cocycle};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{kernel_mod, smith_quotient, solve_mod, HowellForm, SolveOutcome};
use crate::par;

/// Largest group order solved for prime moduli.
pub const H2_CAP_PRIME: usize = 720;
/// Largest group order solved for composite moduli.
pub const H2_CAP_GENERAL: usize = 256;
/// Classes are enumerated eagerly up to this count.
const CLASS_ENUMERATION_LIMIT: u64 = 4096;

fn is_prime(m: u64) -> bool {
    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

/// Breadth-first spanning tree of the right Cayley graph.
struct CayleyTree {
    /// Elements in visiting order, starting at the identity.
    order: Vec<usize>,
    /// `(h, generator index)` of the tree edge reaching each element.
    parent: Vec<Option<(usize, usize)>>,
    /// Edges `h → h·s` not in the tree.
    chords: Vec<(usize, usize)>,
}

impl CayleyTree {
    fn new(g: &FiniteGroup) -> Self {
        let n = g.order();
        let gens = g.generators();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = vec![0];
        let mut chords = Vec::new();
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let h = order[i];
            for (k, &s) in gens.iter().enumerate() {
                let hs = g.mul(h, s);
                if seen[hs] {
                    chords.push((h, k));
                } else {
                    seen[hs] = true;
                    parent[hs] = Some((h, k));
                    order.push(hs);
                }
            }
            i += 1;
        }
        CayleyTree { order, parent, chords }
    }
}

/// Sparse integer linear form over the unknowns.
type Form = Vec<(u32, i64)>;

fn add_terms(base: &Form, extra: &[(Option<usize>, i64)]) -> Form {
    let mut f = base.clone();
    for &(v, c) in extra {
        if let Some(v) = v {
            f.push((v as u32, c));
        }
    }
    f.sort_unstable_by_key(|&(v, _)| v);
    let mut out: Form = Vec::with_capacity(f.len());
    for (v, c) in f {
        match out.last_mut() {
            Some((w, d)) if *w == v => *d += c,
            _ => out.push((v, c)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

/// The generator-value coordinates of normalized cocycles on one group.
struct CocycleSystem {
    group: Arc<FiniteGroup>,
    tree: CayleyTree,
    gens: Vec<usize>,
}

impl CocycleSystem {
    fn new(group: Arc<FiniteGroup>) -> Self {
        let tree = CayleyTree::new(&group);
        let gens = group.generators().to_vec();
        CocycleSystem { group, tree, gens }
    }

    fn unknowns(&self) -> usize {
        (self.group.order() - 1) * self.gens.len()
    }

    fn var(&self, g: usize, k: usize) -> Option<usize> {
        (g != 0).then(|| (g - 1) * self.gens.len() + k)
    }

    /// Equations for fixed first argument `g`, as sparse rows.
    fn equations_for(&self, g: usize) -> Vec<Form> {
        let grp = &*self.group;
        let n = grp.order();
        let mut forms: Vec<Form> = vec![Vec::new(); n];
        for &hs in &self.tree.order[1..] {
            let (h, k) = self.tree.parent[hs].expect("tree edge");
            forms[hs] = add_terms(&forms[h], &[(self.var(grp.mul(g, h), k), 1), (self.var(h, k), -1)]);
        }
        self.tree
            .chords
            .iter()
            .filter_map(|&(h, k)| {
                let hs = grp.mul(h, self.gens[k]);
                let mut extra: Vec<(Option<usize>, i64)> =
                    forms[h].iter().map(|&(v, c)| (Some(v as usize), c)).collect();
                extra.push((self.var(grp.mul(g, h), k), 1));
                extra.push((self.var(h, k), -1));
                let rhs: Form = forms[hs].iter().map(|&(v, c)| (v, -c)).collect();
                let eq = add_terms(&rhs, &extra);
                (!eq.is_empty()).then_some(eq)
            })
            .collect()
    }

    fn to_unknowns(&self, alpha: &Cocycle) -> Vec<u64> {
        let mut x = vec![0; self.unknowns()];
        for g in 1..self.group.order() {
            for (k, &s) in self.gens.iter().enumerate() {
                x[self.var(g, k).expect("g ≠ 1")] = alpha.get(g, s);
            }
        }
        x
    }

    /// Full row-major values of the cocycle with the given generator values.
    fn expand(&self, x: &[u64], m: u64) -> Vec<u64> {
        let grp = &*self.group;
        let n = grp.order();
        let at = |g: usize, k: usize| self.var(g, k).map_or(0, |v| x[v]);
        let mut values = vec![0u64; n * n];
        for g in 1..n {
            for &hs in &self.tree.order[1..] {
                let (h, k) = self.tree.parent[hs].expect("tree edge");
                let v = values[g * n + h] + at(grp.mul(g, h), k) + m - at(h, k);
                values[g * n + hs] = v % m;
            }
        }
        values
    }

    /// Generators of `Hom(G, Z/e)`, as value vectors over all elements.
    fn homomorphisms(&self, e: u64) -> Result<Vec<Vec<u64>>> {
        let grp = &*self.group;
        let n = grp.order();
        let k = self.gens.len();
        if k == 0 || e <= 1 {
            return Ok(Vec::new());
        }
        let mut coef = vec![vec![0i64; k]; n];
        for &hs in &self.tree.order[1..] {
            let (h, j) = self.tree.parent[hs].expect("tree edge");
            coef[hs] = coef[h].clone();
            coef[hs][j] += 1;
        }
        let rows: Vec<Vec<u64>> = self
            .tree
            .chords
            .iter()
            .map(|&(h, j)| {
                let hs = grp.mul(h, self.gens[j]);
                (0..k)
                    .map(|i| {
                        let c = coef[h][i] + i64::from(i == j) - coef[hs][i];
                        c.rem_euclid(e as i64) as u64
                    })
                    .collect()
            })
            .collect();
        let basis = kernel_mod(&rows, k, e)?;
        Ok(basis
            .into_iter()
            .map(|x| {
                coef.iter()
                    .map(|c| c.iter().zip(&x).map(|(&ci, &xi)| ci.rem_euclid(e as i64) as u64 * xi).sum::<u64>() % e)
                    .collect()
            })
            .collect())
    }

    /// Generators of the `S¹`-coboundaries at modulus `m`, as full value vectors.
    fn coboundary_generators(&self, m: u64) -> Result<Vec<Vec<u64>>> {
        let grp = &*self.group;
        let n = grp.order();
        let mut out = Vec::new();
        for u in 1..n {
            let mut t = vec![0u64; n];
            t[u] = 1 % m;
            out.push(Cocycle::coboundary(self.group.clone(), m, &t)?.values);
        }
        let e = grp.exponent() as u64;
        for phi in self.homomorphisms(e)? {
            let mut v = vec![0u64; n * n];
            for a in 0..n {
                for b in 0..n {
                    let carry = (phi[a] + phi[b] - phi[grp.mul(a, b)]) / e;
                    v[a * n + b] = carry % m;
                }
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// One cyclic factor of the class group with its canonical generator.
#[derive(Clone, Debug)]
pub struct ClassFactor {
    pub order: u64,
    pub generator: Cocycle,
}

/// The classes of `H²(G, S¹)` represented by `Z/m`-valued cocycles.
#[derive(Clone, Debug)]
pub struct CohomologyClassSet {
    group: Arc<FiniteGroup>,
    modulus: u64,
    factors: Vec<ClassFactor>,
    coboundaries: HowellForm,
    classes: Vec<Cocycle>,
}

/// Solves for the classes at modulus `m`.
pub fn h2_group(group: &Arc<FiniteGroup>, m: u64) -> Result<CohomologyClassSet> {
    if m == 0 {
        return Err(Error::validation("modulus must be at least 1"));
    }
    let n = group.order();
    let cap = if is_prime(m) { H2_CAP_PRIME } else { H2_CAP_GENERAL };
    if n > cap {
        return Err(Error::OrderCap { cap, reached: n });
    }
    let sys = CocycleSystem::new(group.clone());
    let vars = sys.unknowns();

    let eq_blocks = par::map_range(n, |g| if g == 0 { Vec::new() } else { sys.equations_for(g) });
    let mut eqs = HowellForm::new(m, vars);
    let mut dense = vec![0u64; vars];
    for eq in eq_blocks.iter().flatten() {
        dense.iter_mut().for_each(|x| *x = 0);
        for &(v, c) in eq {
            dense[v as usize] = c.rem_euclid(m as i64) as u64;
        }
        eqs.insert(&dense);
    }
    let eq_rows: Vec<Vec<u64>> = eqs.rows().map(|(_, r)| r.clone()).collect();
    let kernel = kernel_mod(&eq_rows, vars, m)?;
    let mut cocycles = HowellForm::new(m, vars);
    for z in &kernel {
        cocycles.insert(z);
    }
    let basis: Vec<Vec<u64>> = cocycles.rows().map(|(_, r)| r.clone()).collect();
    let r = basis.len();

    let full_bounds = sys.coboundary_generators(m)?;
    let mut relations = Vec::new();
    for (i, (c, z)) in cocycles.rows().enumerate() {
        let d = z[c];
        if d == 1 || m == 1 {
            continue;
        }
        let k = m / d;
        let kz: Vec<u64> = z.iter().map(|&x| (x * k) % m).collect();
        let q = cocycles.coordinates(&kz).ok_or_else(|| Error::internal("cocycle basis not closed"))?;
        let mut rel: Vec<u64> = q.iter().map(|&x| (m - x % m) % m).collect();
        rel[i] = (rel[i] + k) % m;
        relations.push(rel);
    }
    let mut coboundaries = HowellForm::new(m, n * n);
    for b in &full_bounds {
        coboundaries.insert(b);
        let x = sys.to_unknowns(&Cocycle::from_flat_unchecked(group.clone(), m, b.clone()));
        let q = cocycles.coordinates(&x).ok_or_else(|| Error::internal("coboundary outside the cocycle module"))?;
        relations.push(q);
    }

    let quotient = smith_quotient(&relations, r, m)?;
    let combine = |w: &[u64]| -> Vec<u64> {
        let mut x = vec![0u64; vars];
        for (wi, z) in w.iter().zip(&basis) {
            for (xj, &zj) in x.iter_mut().zip(z) {
                *xj = (*xj + wi * zj) % m;
            }
        }
        x
    };
    let factors: Vec<ClassFactor> = quotient
        .iter()
        .map(|f| {
            let values = coboundaries.reduce(&sys.expand(&combine(&f.generator), m));
            ClassFactor { order: f.order, generator: Cocycle::from_flat_unchecked(group.clone(), m, values) }
        })
        .collect();
    for f in &factors {
        f.generator.check().map_err(|e| Error::internal(format!("class generator is not a cocycle: {e}")))?;
    }

    let mut set = CohomologyClassSet { group: group.clone(), modulus: m, factors, coboundaries, classes: Vec::new() };
    if set.order() <= CLASS_ENUMERATION_LIMIT {
        set.classes = (0..set.order()).map(|i| set.compose(i)).collect();
    }
    Ok(set)
}

impl CohomologyClassSet {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Invariant factors, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.order).collect()
    }

    pub fn factors(&self) -> &[ClassFactor] {
        &self.factors
    }

    /// Number of classes.
    pub fn order(&self) -> u64 {
        self.factors.iter().map(|f| f.order).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Mixed-radix digits of class `i`, first factor varying fastest.
    pub fn digits(&self, mut i: u64) -> Vec<u64> {
        self.factors
            .iter()
            .map(|f| {
                let d = i % f.order;
                i /= f.order;
                d
            })
            .collect()
    }

    fn compose(&self, i: u64) -> Cocycle {
        let m = self.modulus;
        let mut v = vec![0u64; self.group.order().pow(2)];
        for (d, f) in self.digits(i).iter().zip(&self.factors) {
            for (x, &y) in v.iter_mut().zip(f.generator.values()) {
                *x = (*x + d * y) % m;
            }
        }
        Cocycle::from_flat_unchecked(self.group.clone(), m, self.coboundaries.reduce(&v))
    }

    /// Canonical representatives in enumeration order; class 0 is zero.
    pub fn classes(&self) -> Result<&[Cocycle]> {
        if self.classes.is_empty() && self.order() > 0 {
            return Err(Error::validation(format!("{} classes exceed the enumeration limit", self.order())));
        }
        Ok(&self.classes)
    }

    pub fn class(&self, i: usize) -> Result<&Cocycle> {
        self.classes()?
            .get(i)
            .ok_or_else(|| Error::validation(format!("class {i} out of range (H² has {} classes)", self.order())))
    }

    /// The lexicographically smallest value vector in the class of `α`.
    pub fn canonicalize(&self, alpha: &Cocycle) -> Result<Cocycle> {
        if !same_group(&self.group, alpha.group()) {
            return Err(Error::validation("cocycle lives on a different group"));
        }
        let a = alpha.lift(self.modulus).map_err(|_| {
            Error::validation(format!(
                "cocycle modulus {} does not divide the class-set modulus {}",
                alpha.modulus(),
                self.modulus
            ))
        })?;
        Ok(Cocycle::from_flat_unchecked(self.group.clone(), self.modulus, self.coboundaries.reduce(a.values())))
    }

    /// Position of the class of `α` in [`CohomologyClassSet::classes`].
    pub fn class_index(&self, alpha: &Cocycle) -> Result<usize> {
        let c = self.canonicalize(alpha)?;
        self.classes()?
            .iter()
            .position(|x| x.values() == c.values())
            .ok_or_else(|| Error::internal("canonical representative missing from the enumeration"))
    }
}

/// Result of [`is_cohomologous`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cohomologous {
    /// `δt = (M/m)(β − α)` at modulus `M = m·exp(G)`, with `t(1) = 0`.
    Yes { modulus: u64, t: Vec<u64> },
    /// The reduced right-hand side that no cochain reaches.
    No { residual: Vec<u64> },
}

impl Cohomologous {
    pub fn is_cohomologous(&self) -> bool {
        matches!(self, Cohomologous::Yes { .. })
    }

    pub fn cochain(&self) -> Option<&[u64]> {
        match self {
            Cohomologous::Yes { t, .. } => Some(t),
            Cohomologous::No { .. } => None,
        }
    }

    pub fn modulus(&self) -> u64 {
        match self {
            Cohomologous::Yes { modulus, .. } => *modulus,
            Cohomologous::No { .. } => 0,
        }
    }
}

/// Decides whether `α` and `β` agree in `H²(G, S¹)`.
pub fn is_cohomologous(alpha: &Cocycle, beta: &Cocycle) -> Result<Cohomologous> {
    if alpha.modulus() != beta.modulus() {
        return Err(Error::validation(format!("modulus mismatch: {} vs {}", alpha.modulus(), beta.modulus())));
    }
    if !same_group(alpha.group(), beta.group()) {
        return Err(Error::validation("cocycles live on different groups"));
    }
    let g = &**alpha.group();
    let n = g.order();
    let m = alpha.modulus();
    let big = m * g.exponent() as u64;
    let scale = big / m;
    if n == 1 {
        return Ok(Cohomologous::Yes { modulus: big, t: vec![0] });
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for a in 0..n {
        for &s in g.generators() {
            let mut row = vec![0u64; n - 1];
            for (u, c) in [(a, 1i64), (s, 1), (g.mul(a, s), -1)] {
                if u != 0 {
                    row[u - 1] = ((row[u - 1] as i64 + c).rem_euclid(big as i64)) as u64;
                }
            }
            rows.push(row);
            rhs.push((scale * ((beta.get(a, s) + m - alpha.get(a, s)) % m)) % big);
        }
    }
    Ok(match solve_mod(&rows, n - 1, &rhs, big)? {
        SolveOutcome::Solvable { particular, .. } => {
            let mut t = vec![0u64];
            t.extend(particular);
            Cohomologous::Yes { modulus: big, t }
        }
        SolveOutcome::Infeasible { residual } => Cohomologous::No { residual },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::tests::v4_matrix_cocycle;
    use crate::group::named;
    use proptest::prelude::*;

    fn arc(g: Result<FiniteGroup>) -> Arc<FiniteGroup> {
        Arc::new(g.unwrap())
    }

    #[test]
    fn cyclic_groups_have_trivial_classes() {
        for n in 1..=8 {
            let g = arc(named::cyclic(n));
            for m in [2u64, 3, 4, n as u64] {
                let h = h2_group(&g, m).unwrap();
                assert!(h.is_trivial(), "C{n} at modulus {m}");
                assert_eq!(h.classes().unwrap().len(), 1);
                assert!(h.classes().unwrap()[0].is_zero());
            }
        }
    }

    #[test]
    fn klein_four_has_one_nontrivial_class() {
        let g = arc(named::klein_four());
        for m in [2u64, 4] {
            let h = h2_group(&g, m).unwrap();
            assert_eq!(h.invariant_factors(), vec![2]);
            let c = h.class(1).unwrap();
            assert_eq!(c.regular_classes(), vec![0]);
        }
        let h = h2_group(&g, 3).unwrap();
        assert!(h.is_trivial());
        let h = h2_group(&g, 2).unwrap();
        assert_eq!(h.class_index(&v4_matrix_cocycle(&g)).unwrap(), 1);
    }

    #[test]
    fn small_group_multipliers() {
        // Schur multipliers: S₃ → 1, D₄ → Z/2, Q₈ → 1, S₄ → Z/2, A₄ → Z/2
        let cases: Vec<(Arc<FiniteGroup>, Vec<u64>)> = vec![
            (arc(named::symmetric(3)), vec![]),
            (arc(named::dihedral(4)), vec![2]),
            (arc(named::by_name("Q8").unwrap()), vec![]),
            (arc(named::symmetric(4)), vec![2]),
            (arc(named::alternating(4)), vec![2]),
        ];
        for (g, expected) in cases {
            assert_eq!(h2_group(&g, 2).unwrap().invariant_factors(), expected);
        }
        // (Z/2)³ has multiplier (Z/2)³; Z/2 × Z/4 has Z/2
        let e8 = arc(FiniteGroup::from_permutations(
            6,
            &[vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 2, 4, 5], vec![0, 1, 2, 3, 5, 4]],
        ));
        assert_eq!(h2_group(&e8, 2).unwrap().invariant_factors(), vec![2, 2, 2]);
        let c2c4 = arc(FiniteGroup::from_permutations(6, &[vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 4, 5, 2]]));
        assert_eq!(h2_group(&c2c4, 4).unwrap().invariant_factors(), vec![2]);
        // Z/3 × Z/3 at modulus 3 and 9
        let c3c3 = arc(FiniteGroup::from_permutations(6, &[vec![1, 2, 0, 3, 4, 5], vec![0, 1, 2, 4, 5, 3]]));
        assert_eq!(h2_group(&c3c3, 3).unwrap().invariant_factors(), vec![3]);
        assert_eq!(h2_group(&c3c3, 9).unwrap().invariant_factors(), vec![3]);
    }

    #[test]
    fn cap_is_enforced() {
        let s6 = arc(named::symmetric(6));
        assert!(matches!(h2_group(&s6, 4), Err(Error::OrderCap { .. })));
    }

    #[test]
    fn classes_are_pairwise_distinct() {
        let e8 = arc(FiniteGroup::from_permutations(
            6,
            &[vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 2, 4, 5], vec![0, 1, 2, 3, 5, 4]],
        ));
        let h = h2_group(&e8, 2).unwrap();
        let cls = h.classes().unwrap();
        assert_eq!(cls.len(), 8);
        for (i, a) in cls.iter().enumerate() {
            a.check().unwrap();
            assert_eq!(h.class_index(a).unwrap(), i);
            for b in &cls[..i] {
                assert!(!is_cohomologous(a, b).unwrap().is_cohomologous());
            }
        }
    }

    #[test]
    fn nontrivial_v4_class_is_not_a_coboundary() {
        let g = arc(named::klein_four());
        let alpha = v4_matrix_cocycle(&g);
        let z = Cocycle::zero(g.clone(), 2);
        assert!(matches!(is_cohomologous(&alpha, &z).unwrap(), Cohomologous::No { .. }));
        assert!(alpha
            .sum(&alpha)
            .map(|d| is_cohomologous(&d, &Cocycle::zero(g.clone(), 2)).unwrap().is_cohomologous())
            .unwrap());
        assert!(is_cohomologous(&alpha, &Cocycle::zero(g.clone(), 4)).is_err());
    }

    fn check_witness(alpha: &Cocycle, beta: &Cocycle, w: &Cohomologous) {
        let big = w.modulus();
        let t = w.cochain().unwrap();
        let delta = Cocycle::coboundary(alpha.group().clone(), big, t).unwrap();
        let diff = beta.lift(big).unwrap().sum(&alpha.lift(big).unwrap().neg()).unwrap();
        assert_eq!(delta.values(), diff.values());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn coboundary_perturbations_are_detected(seed in prop::collection::vec(0u64..4, 8), class in 0usize..2) {
            let g = arc(named::dihedral(4));
            let h = h2_group(&g, 4).unwrap();
            let alpha = h.class(class).unwrap().clone();
            let mut t = seed.clone();
            t[0] = 0;
            let beta = alpha.sum(&Cocycle::coboundary(g.clone(), 4, &t).unwrap()).unwrap();
            let w = is_cohomologous(&alpha, &beta).unwrap();
            prop_assert!(w.is_cohomologous());
            check_witness(&alpha, &beta, &w);
            prop_assert_eq!(h.canonicalize(&beta).unwrap(), alpha.clone());
            // regularity and L-characters are class invariants
            for x in 0..8 {
                prop_assert_eq!(alpha.is_regular(x), beta.is_regular(x));
                prop_assert_eq!(alpha.l_character(x), beta.l_character(x));
            }
        }
    }

    #[test]
    fn regularity_is_conjugation_invariant() {
        for g in [arc(named::symmetric(4)), arc(named::dihedral(4)), arc(named::alternating(4))] {
            let h = h2_group(&g, 2).unwrap();
            for alpha in h.classes().unwrap() {
                for x in 0..g.order() {
                    for y in 0..g.order() {
                        assert_eq!(alpha.is_regular(x), alpha.is_regular(g.conjugate(x, y)));
                    }
                }
            }
        }
    }
}
