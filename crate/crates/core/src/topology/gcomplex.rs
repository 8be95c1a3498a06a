use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::chains::CellAction;
use super::complex::{sort_with_sign, SimplicialComplex};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A finite group acting on a simplicial complex through vertex permutations.
#[derive(Clone, Debug)]
pub struct GSimplicialComplex {
    group: Arc<FiniteGroup>,
    complex: SimplicialComplex,
    /// Vertex permutation of every group element.
    action: Vec<Vec<usize>>,
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

impl GSimplicialComplex {
    /// `action[g]` is the vertex permutation of element `g`; it must be a
    /// homomorphism that maps simplices to simplices.
    pub fn new(group: Arc<FiniteGroup>, complex: SimplicialComplex, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = group.order();
        let k = complex.vertex_count();
        if action.len() != n {
            return Err(Error::validation(format!(
                "action has {} permutations for a group of order {n}",
                action.len()
            )));
        }
        for (g, p) in action.iter().enumerate() {
            let mut seen = vec![false; k];
            if p.len() != k || p.iter().any(|&v| v >= k || std::mem::replace(&mut seen[v], true)) {
                return Err(Error::validation(format!("action of element {g} is not a permutation of {k} vertices")));
            }
        }
        if action[0].iter().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::validation("identity element acts nontrivially"));
        }
        for a in 0..n {
            for b in 0..n {
                if action[group.mul(a, b)] != compose(&action[a], &action[b]) {
                    return Err(Error::validation(format!("action is not a homomorphism at elements ({a}, {b})")));
                }
            }
        }
        let gc = GSimplicialComplex { group, complex, action };
        for &g in gc.group.generators() {
            for s in gc.complex.all_simplices() {
                let (image, _) = gc.image(g, s);
                if gc.complex.index_of(&image).is_none() {
                    return Err(Error::validation(format!("element {g} maps simplex {s:?} to a non-simplex")));
                }
            }
        }
        Ok(gc)
    }

    /// Builds the action from one vertex permutation per generator.
    ///
    /// For groups given by permutations the rows correspond to the input
    /// generators in file order; otherwise to [`FiniteGroup::generators`].
    /// A list with one row per element is accepted as the full action.
    pub fn from_generator_images(
        group: Arc<FiniteGroup>,
        complex: SimplicialComplex,
        images: &[Vec<usize>],
    ) -> Result<Self> {
        let gens: Vec<usize> = match group.permutations() {
            Some(prov) if prov.generators.len() == images.len() => {
                let index: HashMap<&[usize], usize> =
                    prov.images.iter().enumerate().map(|(g, p)| (p.as_slice(), g)).collect();
                prov.generators.iter().map(|p| index[p.as_slice()]).collect()
            }
            _ if group.generators().len() == images.len() => group.generators().to_vec(),
            _ if group.order() == images.len() => return Self::new(group, complex, images.to_vec()),
            _ => {
                return Err(Error::validation(format!(
                    "action has {} rows; expected one per group generator ({}) or one per element ({})",
                    images.len(),
                    group.permutations().map_or(group.generators().len(), |p| p.generators.len()),
                    group.order()
                )))
            }
        };
        let k = complex.vertex_count();
        for (i, p) in images.iter().enumerate() {
            let mut seen = vec![false; k];
            if p.len() != k || p.iter().any(|&v| v >= k || std::mem::replace(&mut seen[v], true)) {
                return Err(Error::validation(format!("action[{i}] is not a permutation of {k} vertices")));
            }
        }
        let n = group.order();
        let mut action: Vec<Option<Vec<usize>>> = vec![None; n];
        action[0] = Some((0..k).collect());
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            let ax = action[x].clone().expect("queued elements are assigned");
            for (&s, p) in gens.iter().zip(images) {
                let y = group.mul(s, x);
                let candidate = compose(p, &ax);
                match &action[y] {
                    None => {
                        action[y] = Some(candidate);
                        queue.push_back(y);
                    }
                    Some(existing) if *existing != candidate => {
                        return Err(Error::validation(format!(
                            "action is not a homomorphism: element {y} receives two different permutations"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let action = action
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::internal("generators do not reach every element"))?;
        Self::new(group, complex, action)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn action(&self, g: usize) -> &[usize] {
        &self.action[g]
    }

    /// Sorted image of `simplex` under `g` and the orientation sign `ε` with
    /// `g·[simplex] = ε·[image]`.
    pub fn image(&self, g: usize, simplex: &[usize]) -> (Vec<usize>, i64) {
        let mut v: Vec<usize> = simplex.iter().map(|&x| self.action[g][x]).collect();
        let sign = sort_with_sign(&mut v);
        (v, sign)
    }

    /// True when every simplex fixed setwise by an element is fixed pointwise.
    pub fn is_regular(&self) -> bool {
        (1..self.group.order()).all(|g| {
            self.complex.all_simplices().all(|s| {
                let p = &self.action[g];
                let moved = s.iter().any(|&v| p[v] != v);
                !moved || self.image(g, s).0 != *s
            })
        })
    }

    /// Barycentric subdivision with the induced action. New vertices are the
    /// old simplices in dimension-then-lexicographic order, labeled by their
    /// face sets.
    pub fn subdivide(&self) -> Result<Self> {
        let old: Vec<&Vec<usize>> = self.complex.all_simplices().collect();
        let id: HashMap<&[usize], usize> = old.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let labels: Vec<String> = old
            .iter()
            .map(|s| {
                let names: Vec<&str> = s.iter().map(|&v| self.complex.labels()[v].as_str()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        let mut maximal = Vec::new();
        for top in self.complex.maximal_simplices() {
            for order in permutations(&top) {
                let mut chain = Vec::with_capacity(order.len());
                for i in 1..=order.len() {
                    let mut face = order[..i].to_vec();
                    face.sort_unstable();
                    chain.push(id[face.as_slice()]);
                }
                maximal.push(chain);
            }
        }
        let complex = SimplicialComplex::new(labels, &maximal)?;
        let action =
            (0..self.group.order()).map(|g| old.iter().map(|s| id[self.image(g, s).0.as_slice()]).collect()).collect();
        Self::new(self.group.clone(), complex, action)
    }

    /// Subdivides until the action is regular; at most two rounds.
    pub fn regularize(self) -> Result<Self> {
        let mut current = self;
        for _ in 0..2 {
            if current.is_regular() {
                return Ok(current);
            }
            current = current.subdivide()?;
        }
        if current.is_regular() {
            Ok(current)
        } else {
            Err(Error::internal("action is not regular after two barycentric subdivisions"))
        }
    }

    /// Subcomplex of simplices whose vertices are all fixed by every element of `elements`.
    pub fn fixed_subcomplex(&self, elements: &[usize]) -> SimplicialComplex {
        let fixed: Vec<bool> =
            (0..self.complex.vertex_count()).map(|v| elements.iter().all(|&g| self.action[g][v] == v)).collect();
        SimplicialComplex::from_simplices(
            self.complex.labels().to_vec(),
            self.complex.all_simplices().filter(|s| s.iter().all(|&v| fixed[v])).cloned(),
        )
    }

    /// The given elements acting on `sub`, which they must preserve.
    pub fn cell_action(&self, sub: SimplicialComplex, elements: Vec<usize>) -> Result<CellAction> {
        CellAction::new(self, sub, elements)
    }

    /// The whole group acting on the whole complex.
    pub fn full_action(&self) -> CellAction {
        CellAction::new(self, self.complex.clone(), (0..self.group.order()).collect()).expect("group preserves X")
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn edge_swap() -> GSimplicialComplex {
        let c = SimplicialComplex::new(labels(2), &[vec![0, 1]]).unwrap();
        let g = Arc::new(named::cyclic(2).unwrap());
        GSimplicialComplex::from_generator_images(g, c, &[vec![1, 0]]).unwrap()
    }

    #[test]
    fn swapped_edge_gets_a_fixed_midpoint() {
        let x = edge_swap();
        assert!(!x.is_regular());
        let r = x.regularize().unwrap();
        assert!(r.is_regular());
        assert_eq!(r.complex().cell_counts(), vec![3, 2]);
        let fixed = r.fixed_subcomplex(&[1]);
        assert_eq!(fixed.cell_counts(), vec![1]);
        assert_eq!(r.complex().labels()[fixed.cells(0)[0][0]], "{0,1}");
    }

    #[test]
    fn rotated_triangle_regular_after_one_round() {
        let c = SimplicialComplex::new(labels(3), &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let g = Arc::new(named::cyclic(3).unwrap());
        let x = GSimplicialComplex::from_generator_images(g, c, &[vec![1, 2, 0]]).unwrap();
        assert!(x.is_regular());
        let filled = SimplicialComplex::new(labels(3), &[vec![0, 1, 2]]).unwrap();
        let g = Arc::new(named::cyclic(3).unwrap());
        let y = GSimplicialComplex::from_generator_images(g, filled, &[vec![1, 2, 0]]).unwrap();
        assert!(!y.is_regular());
        let once = y.subdivide().unwrap();
        assert!(once.is_regular());
        assert_eq!(once.complex().cell_counts(), vec![7, 12, 6]);
    }

    #[test]
    fn regular_input_is_unchanged() {
        let c = SimplicialComplex::new(labels(3), &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let g = Arc::new(named::cyclic(3).unwrap());
        let x = GSimplicialComplex::from_generator_images(g, c.clone(), &[vec![1, 2, 0]]).unwrap();
        assert_eq!(x.regularize().unwrap().complex(), &c);
    }

    #[test]
    fn non_homomorphisms_and_non_simplicial_maps_are_rejected() {
        let c = SimplicialComplex::new(labels(3), &[vec![0, 1], vec![1, 2]]).unwrap();
        let g = Arc::new(named::cyclic(2).unwrap());
        assert!(GSimplicialComplex::from_generator_images(g.clone(), c.clone(), &[vec![1, 2, 0]]).is_err());
        let err = GSimplicialComplex::from_generator_images(g, c, &[vec![1, 0, 2]]).unwrap_err();
        assert!(err.to_string().contains("non-simplex"), "{err}");
    }

    #[test]
    fn subdivision_preserves_homology() {
        let x = edge_swap().subdivide().unwrap().subdivide().unwrap();
        assert_eq!(x.complex().betti(), vec![1, 0]);
        assert!(x.is_regular());
    }
}
