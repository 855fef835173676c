use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::concepts::{for_each_shattered, full_mask, ConceptClass, HypothesisSpace, Label, Point};
use crate::error::Result;

/// Result of a depth-capped dimension search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    Exact(usize),
    /// The search reached its cap; the true value is at least this.
    AtLeast(usize),
}

impl Depth {
    pub fn value(self) -> usize {
        match self {
            Depth::Exact(d) | Depth::AtLeast(d) => d,
        }
    }

    fn capped(value: usize, cap: usize) -> Self {
        if value >= cap {
            Depth::AtLeast(cap)
        } else {
            Depth::Exact(value)
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Exact(d) => write!(f, "{d}"),
            Depth::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

/// Largest shattered subset of the domain; `None` for the empty class.
pub fn vc_dimension(class: &ConceptClass) -> Option<usize> {
    let masks = class.masks(&class.everything());
    let mut best = None;
    for_each_shattered(&masks, full_mask(class.domain().len()), |_, size| {
        best = Some(best.unwrap_or(0).max(size as usize));
        true
    });
    best
}

/// Littlestone dimension by exhaustive game search, capped at `cap`.
pub fn littlestone_dimension(class: &ConceptClass, cap: usize) -> Option<Depth> {
    let mut solver = LittlestoneSolver::new(Arc::new(class.clone()));
    let all = class.everything();
    solver.dimension(&all, cap).map(|d| Depth::capped(d, cap))
}

/// Memoized Littlestone game search over version spaces of one class.
///
/// Values are memoized per version-space bitmask together with the cap they
/// were computed under: a value strictly below its cap is exact.
#[derive(Clone, Debug)]
pub struct LittlestoneSolver {
    class: Arc<ConceptClass>,
    memo: HashMap<FixedBitSet, (usize, usize)>,
}

impl LittlestoneSolver {
    pub fn new(class: Arc<ConceptClass>) -> Self {
        LittlestoneSolver {
            class,
            memo: HashMap::new(),
        }
    }

    pub fn class(&self) -> &Arc<ConceptClass> {
        &self.class
    }

    /// `min(Ldim(set), cap)`, or `None` when `set` is empty.
    pub fn dimension(&mut self, set: &FixedBitSet, cap: usize) -> Option<usize> {
        if set.count_ones(..) == 0 {
            return None;
        }
        Some(self.search(set, cap))
    }

    fn search(&mut self, set: &FixedBitSet, cap: usize) -> usize {
        if cap == 0 || set.count_ones(..) <= 1 {
            return 0;
        }
        if let Some(&(value, computed_cap)) = self.memo.get(set) {
            if value < computed_cap || cap <= computed_cap {
                return value.min(cap);
            }
        }
        let class = self.class.clone();
        let mut best = 0;
        for x in class.domain().points() {
            let (zero, one) = split(&class, set, x);
            if zero.count_ones(..) == 0 || one.count_ones(..) == 0 {
                continue;
            }
            let a = self.search(&zero, cap - 1);
            if a < best {
                continue;
            }
            let b = self.search(&one, cap - 1);
            best = best.max(1 + a.min(b));
            if best >= cap {
                break;
            }
        }
        self.memo.insert(set.clone(), (best, cap));
        best
    }
}

pub(crate) fn split(class: &ConceptClass, set: &FixedBitSet, x: Point) -> (FixedBitSet, FixedBitSet) {
    let mut zero = FixedBitSet::with_capacity(set.len());
    let mut one = FixedBitSet::with_capacity(set.len());
    for i in set.ones() {
        let h = &class.hypotheses()[i];
        if h.agrees(x, Label::Zero) {
            zero.insert(i);
        } else if h.agrees(x, Label::One) {
            one.insert(i);
        }
    }
    (zero, one)
}

/// Littlestone dimension of the version space of `space` after `pairs`.
///
/// For the all-functions space this is the number of points not yet
/// labeled, or `None` when `pairs` conflict.
pub fn littlestone_given(
    space: &HypothesisSpace,
    solver: Option<&mut LittlestoneSolver>,
    pairs: &[(Point, Label)],
    cap: usize,
) -> Result<Option<Depth>> {
    match space {
        HypothesisSpace::Table(class) => {
            let set = class.version_space(pairs)?;
            let value = match solver {
                Some(s) => s.dimension(&set, cap),
                None => LittlestoneSolver::new(class.clone()).dimension(&set, cap),
            };
            Ok(value.map(|d| Depth::capped(d, cap)))
        }
        HypothesisSpace::AllFunctions(domain) => {
            if !space.is_realizable(pairs)? {
                return Ok(None);
            }
            let fixed: std::collections::HashSet<Point> = pairs.iter().map(|p| p.0).collect();
            Ok(Some(Depth::capped(domain.len() - fixed.len(), cap)))
        }
    }
}

/// Depth of the deepest VCL tree, found by exhaustive search where level `n`
/// places an `(n+1)`-point set that the current version space shatters.
pub fn vcl_depth(class: &ConceptClass, cap: usize) -> Option<Depth> {
    if class.is_empty() {
        return None;
    }
    let mut memo = HashMap::new();
    let d = vcl_search(class, &class.everything(), 0, cap, &mut memo);
    Some(Depth::capped(d, cap))
}

fn vcl_search(
    class: &ConceptClass,
    set: &FixedBitSet,
    level: usize,
    cap: usize,
    memo: &mut HashMap<(FixedBitSet, usize), (usize, usize)>,
) -> usize {
    let width = level + 1;
    let n = class.domain().len();
    if cap == 0 || width > n || (set.count_ones(..) as u128) < (1u128 << width.min(127)) {
        return 0;
    }
    let key = (set.clone(), level);
    if let Some(&(value, computed_cap)) = memo.get(&key) {
        if value < computed_cap || cap <= computed_cap {
            return value.min(cap);
        }
    }
    let mut best = 0;
    for tuple in combinations(n, width) {
        let children = match shattered_children(class, set, &tuple) {
            Some(c) => c,
            None => continue,
        };
        let mut worst = usize::MAX;
        for child in &children {
            worst = worst.min(vcl_search(class, child, level + 1, cap - 1, memo));
            if worst < best {
                break;
            }
        }
        best = best.max(1 + worst);
        if best >= cap {
            break;
        }
    }
    memo.insert(key, (best, cap));
    best
}

/// Version spaces for every pattern on `tuple`, or `None` if one is empty.
pub(crate) fn shattered_children(class: &ConceptClass, set: &FixedBitSet, tuple: &[Point]) -> Option<Vec<FixedBitSet>> {
    let width = tuple.len();
    let mut children = vec![FixedBitSet::with_capacity(set.len()); 1 << width];
    for i in set.ones() {
        let h = &class.hypotheses()[i];
        let mut code = 0usize;
        let mut defined = true;
        for (j, &x) in tuple.iter().enumerate() {
            match h.value(x).label() {
                Some(l) => code |= (l.bit() as usize) << j,
                None => {
                    defined = false;
                    break;
                }
            }
        }
        if defined {
            children[code].insert(i);
        }
    }
    if children.iter().any(|c| c.count_ones(..) == 0) {
        None
    } else {
        Some(children)
    }
}

/// All `k`-subsets of `0..n` as sorted point lists, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<Point>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out.into_iter().map(Point).collect())
    })
}
