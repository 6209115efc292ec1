use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

/// An ordered list of distinct point labels; the finite stand-in for Φ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    points: Vec<String>,
}

impl FiniteSpace {
    pub fn new(points: Vec<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGroup("space must have at least one point".into()));
        }
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(Error::InvalidGroup(format!("duplicate point label {p:?}")));
            }
        }
        Ok(Self { points })
    }

    /// Points labelled `0..n`.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.points
    }
}

/// A finite group given by explicit tables, acting on a [`FiniteSpace`].
///
/// `compose[g][h]` is the product `g·h` (apply `h` first) and `act[g][φ]` is
/// the image of point `φ` under `g`. The constructor checks every group and
/// action axiom by full enumeration, so an existing value is always valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupAction {
    space: FiniteSpace,
    elements: Vec<String>,
    compose: Vec<Vec<usize>>,
    act: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroupAction {
    pub fn new(
        space: FiniteSpace,
        elements: Vec<String>,
        compose: Vec<Vec<usize>>,
        act: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = elements.len();
        let bad = |msg: String| Err(Error::InvalidGroup(msg));
        if n == 0 {
            return bad("group has no elements".into());
        }
        if elements.iter().collect::<BTreeSet<_>>().len() != n {
            return bad("duplicate element labels".into());
        }
        if compose.len() != n || compose.iter().any(|row| row.len() != n) {
            return bad(format!("compose table must be {n}x{n}"));
        }
        if compose.iter().flatten().any(|&x| x >= n) {
            return bad("compose table entry out of range".into());
        }
        let p = space.len();
        if act.len() != n || act.iter().any(|row| row.len() != p) {
            return bad(format!("act table must be {n}x{p}"));
        }
        if act.iter().flatten().any(|&x| x >= p) {
            return bad("act table entry out of range".into());
        }

        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if compose[compose[a][b]][c] != compose[a][compose[b][c]] {
                        return bad(format!("compose is not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }

        let identity = match (0..n).find(|&e| (0..n).all(|g| compose[e][g] == g && compose[g][e] == g)) {
            Some(e) => e,
            None => return bad("no identity element".into()),
        };

        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            match (0..n).find(|&h| compose[g][h] == identity && compose[h][g] == identity) {
                Some(h) => inverse.push(h),
                None => return bad(format!("element {g} has no inverse")),
            }
        }

        if (0..p).any(|x| act[identity][x] != x) {
            return bad("identity does not act trivially".into());
        }
        for g in 0..n {
            for h in 0..n {
                for x in 0..p {
                    if act[g][act[h][x]] != act[compose[g][h]][x] {
                        return bad(format!("action incompatible with compose at ({g}, {h}, point {x})"));
                    }
                }
            }
        }

        Ok(Self {
            space,
            elements,
            compose,
            act,
            identity,
            inverse,
        })
    }

    /// The group of permutations of `space` generated by `generators`, each
    /// given as the image list `φ ↦ perm[φ]`. Elements are numbered in
    /// breadth-first order from the identity, so the result is deterministic.
    pub fn generated_by(space: FiniteSpace, generators: &[Vec<usize>]) -> Result<Self> {
        let p = space.len();
        for g in generators {
            let distinct: BTreeSet<_> = g.iter().copied().collect();
            if g.len() != p || distinct.len() != p || g.iter().any(|&x| x >= p) {
                return Err(Error::InvalidGroup(format!("generator {g:?} is not a permutation of {p} points")));
            }
        }
        let id: Vec<usize> = (0..p).collect();
        let mut perms = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                // g ∘ perms[i]
                let next: Vec<usize> = perms[i].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&next) {
                    index.insert(next.clone(), perms.len());
                    queue.push_back(perms.len());
                    perms.push(next);
                }
            }
        }
        Self::from_permutations(space, perms)
    }

    /// Builds the tables for a set of permutations closed under composition.
    pub fn from_permutations(space: FiniteSpace, perms: Vec<Vec<usize>>) -> Result<Self> {
        let index: HashMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut compose = vec![vec![0; perms.len()]; perms.len()];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let prod: Vec<usize> = pb.iter().map(|&x| pa[x]).collect();
                compose[a][b] = *index.get(prod.as_slice()).ok_or_else(|| {
                    Error::InvalidGroup("permutation set is not closed under composition".into())
                })?;
            }
        }
        let elements = (0..perms.len()).map(|i| format!("g{i}")).collect();
        Self::new(space, elements, compose, perms)
    }

    /// The one-element group.
    pub fn trivial(space: FiniteSpace) -> Self {
        let act = vec![(0..space.len()).collect()];
        Self::new(space, vec!["e".into()], vec![vec![0]], act).expect("trivial group is valid")
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn n_points(&self) -> usize {
        self.space.len()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_labels(&self) -> &[String] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn compose(&self, g: usize, h: usize) -> usize {
        self.compose[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn act(&self, g: usize, point: usize) -> usize {
        self.act[g][point]
    }

    pub fn compose_table(&self) -> &[Vec<usize>] {
        &self.compose
    }

    pub fn act_table(&self) -> &[Vec<usize>] {
        &self.act
    }

    /// The subgroup generated by `generators` (closure under compose and
    /// inverse). Always contains the identity.
    pub fn closure(&self, generators: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let gens: Vec<usize> = generators
            .into_iter()
            .flat_map(|g| [g, self.inverse[g]])
            .collect();
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.compose[g][x];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn is_subgroup(&self, set: &BTreeSet<usize>) -> bool {
        set.contains(&self.identity)
            && set.iter().all(|&g| set.contains(&self.inverse[g]))
            && set.iter().all(|&g| set.iter().all(|&h| set.contains(&self.compose[g][h])))
    }
}

/// Orbit partition of the points. Parts are sorted internally and ordered by
/// their smallest point.
pub fn orbits(action: &FiniteGroupAction) -> Vec<Vec<usize>> {
    let p = action.n_points();
    let mut assigned = vec![false; p];
    let mut parts = Vec::new();
    for start in 0..p {
        if assigned[start] {
            continue;
        }
        let mut part = BTreeSet::new();
        for g in 0..action.order() {
            part.insert(action.act(g, start));
        }
        for &x in &part {
            assigned[x] = true;
        }
        parts.push(part.into_iter().collect());
    }
    parts
}

pub fn is_transitive(action: &FiniteGroupAction) -> bool {
    orbits(action).len() == 1
}
