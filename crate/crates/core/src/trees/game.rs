//! The VCL game: records, the greedy winning strategy and the partial class
//! it induces.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::concepts::{full_mask, ConceptClass, Domain, Hypothesis, Label, Point, Preset};
use crate::error::{Error, Result};

/// Largest domain for which the induced class is enumerated when `k >= 2`.
pub const MAX_INDUCED_DOMAIN: usize = 12;

/// Longest pattern the game supports.
pub const MAX_PATTERN: usize = 63;

/// A bit string. The first element is the most significant bit, so numeric
/// order on `bits` is lexicographic order on the string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    len: usize,
    bits: u64,
}

impl Pattern {
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len > MAX_PATTERN {
            return Err(Error::size("pattern length", len, MAX_PATTERN));
        }
        if bits & !full_mask(len) != 0 {
            return Err(Error::Domain(format!("bits {bits:#b} do not fit a pattern of length {len}")));
        }
        Ok(Pattern { len, bits })
    }

    pub fn zeros(len: usize) -> Self {
        Pattern { len, bits: 0 }
    }

    pub fn from_labels(labels: &[Label]) -> Self {
        let bits = labels.iter().fold(0u64, |acc, l| acc << 1 | l.bit() as u64);
        Pattern {
            len: labels.len(),
            bits,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn label(&self, i: usize) -> Label {
        Label::from_bit(self.bits >> (self.len - 1 - i) & 1 == 1)
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..self.len).map(|i| self.label(i)).collect()
    }

    /// Every pattern of length `len` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = Pattern> {
        (0..1u64 << len).map(move |bits| Pattern { len, bits })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.labels() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s
            .chars()
            .map(|c| match c {
                '0' => Ok(Label::Zero),
                '1' => Ok(Label::One),
                _ => Err(Error::Domain(format!("invalid pattern {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if labels.len() > MAX_PATTERN {
            return Err(Error::size("pattern length", labels.len(), MAX_PATTERN));
        }
        Ok(Pattern::from_labels(&labels))
    }
}

/// Accumulated `(tuple, pattern)` rounds of the game. Round `r` has a tuple
/// of length `r`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GameRecord {
    rounds: Vec<(Vec<Point>, Pattern)>,
}

impl GameRecord {
    pub fn new() -> Self {
        GameRecord::default()
    }

    pub fn rounds(&self) -> &[(Vec<Point>, Pattern)] {
        &self.rounds
    }

    /// Tuple length expected in the next round.
    pub fn current_k(&self) -> usize {
        self.rounds.len() + 1
    }

    pub fn record(&mut self, tuple: Vec<Point>, pattern: Pattern) -> Result<()> {
        let k = self.current_k();
        if tuple.len() != k || pattern.len() != k {
            return Err(Error::State(format!(
                "round {k} needs a {k}-tuple and a pattern of length {k}, got {} and {}",
                tuple.len(),
                pattern.len()
            )));
        }
        self.rounds.push((tuple, pattern));
        Ok(())
    }

    /// Every `(point, label)` constraint the record imposes.
    pub fn pairs(&self) -> Vec<(Point, Label)> {
        self.rounds
            .iter()
            .flat_map(|(tuple, pattern)| tuple.iter().copied().zip(pattern.labels()))
            .collect()
    }

    /// `H_U` as a version space of `class`.
    pub fn version_space(&self, class: &ConceptClass) -> Result<FixedBitSet> {
        class.version_space(&self.pairs())
    }
}

/// The greedy strategy: the least unrealized pattern on `tuple` if one
/// exists, otherwise the pattern leaving the fewest hypotheses.
pub fn winning_strategy(record: &GameRecord, class: &ConceptClass, tuple: &[Point]) -> Result<Pattern> {
    let k = record.current_k();
    if tuple.len() != k {
        return Err(Error::State(format!("round {k} needs a {k}-tuple, got {}", tuple.len())));
    }
    for &x in tuple {
        class.domain().check(x)?;
    }
    let live = record.version_space(class)?;
    if live.count_ones(..) == 0 {
        return Err(Error::State("the game is already won".into()));
    }
    greedy_pattern(class, &live, tuple)
}

/// [`winning_strategy`] against an explicit version space. Returns the zero
/// pattern when `live` is empty.
pub fn greedy_pattern(class: &ConceptClass, live: &FixedBitSet, tuple: &[Point]) -> Result<Pattern> {
    let k = tuple.len();
    if k > 20 {
        return Err(Error::size("game tuple length", k, 20));
    }
    let mut counts = vec![0usize; 1 << k];
    for i in live.ones() {
        let h = &class.hypotheses()[i];
        let mut code = 0usize;
        let mut defined = true;
        for &x in tuple {
            match h.value(x).label() {
                Some(l) => code = code << 1 | l.bit() as usize,
                None => {
                    defined = false;
                    break;
                }
            }
        }
        if defined {
            counts[code] += 1;
        }
    }
    let best = (0..counts.len()).min_by_key(|&c| (counts[c], c)).unwrap_or(0);
    Pattern::new(k, best as u64)
}

/// The partial class induced by the greedy strategy after `record`.
pub fn induced_partial_class(record: &GameRecord, class: &ConceptClass) -> Result<ConceptClass> {
    let live = record.version_space(class)?;
    induced_partial_class_with(class.domain_arc().clone(), record.current_k(), |tuple| {
        greedy_pattern(class, &live, tuple)
    })
}

/// All total hypotheses on `domain` that disagree with `strategy` on every
/// ordered `k`-tuple of distinct points.
pub fn induced_partial_class_with(
    domain: std::sync::Arc<Domain>,
    k: usize,
    mut strategy: impl FnMut(&[Point]) -> Result<Pattern>,
) -> Result<ConceptClass> {
    let n = domain.len();
    if k == 0 {
        return Err(Error::State("tuple length must be positive".into()));
    }
    if k == 1 {
        // one constraint per point: the single hypothesis that flips every answer
        let mut ones = 0u64;
        for x in domain.points() {
            if strategy(&[x])?.label(0) == Label::Zero {
                ones |= 1 << x.index();
            }
        }
        let h = Hypothesis::total(ones, n);
        return ConceptClass::new(domain, vec![h], Preset::Custom);
    }
    if n > MAX_INDUCED_DOMAIN {
        return Err(Error::size("induced class domain", n, MAX_INDUCED_DOMAIN));
    }
    // each tuple forbids the hypotheses matching `value` on `mask`
    let mut forbidden: Vec<(u64, u64)> = Vec::new();
    if k <= n {
        let mut tuple = Vec::with_capacity(k);
        let mut used = vec![false; n];
        collect_forbidden(n, k, &mut tuple, &mut used, &mut strategy, &mut forbidden)?;
    }
    forbidden.sort_unstable();
    forbidden.dedup();
    let hyps = (0..1u64 << n)
        .filter(|h| forbidden.iter().all(|&(mask, value)| h & mask != value))
        .map(|h| Hypothesis::total(h, n))
        .collect();
    ConceptClass::new(domain, hyps, Preset::Custom)
}

fn collect_forbidden(
    n: usize,
    k: usize,
    tuple: &mut Vec<Point>,
    used: &mut [bool],
    strategy: &mut impl FnMut(&[Point]) -> Result<Pattern>,
    out: &mut Vec<(u64, u64)>,
) -> Result<()> {
    if tuple.len() == k {
        let pattern = strategy(tuple)?;
        let (mut mask, mut value) = (0u64, 0u64);
        for (i, x) in tuple.iter().enumerate() {
            mask |= 1 << x.index();
            if pattern.label(i).bit() {
                value |= 1 << x.index();
            }
        }
        out.push((mask, value));
        return Ok(());
    }
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        tuple.push(Point(i));
        collect_forbidden(n, k, tuple, used, strategy, out)?;
        tuple.pop();
        used[i] = false;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn p(i: usize) -> Point {
        Point(i - 1)
    }

    #[test]
    fn pattern_order_is_lexicographic() {
        let all: Vec<String> = Pattern::all(2).map(|p| p.to_string()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        let q: Pattern = "10".parse().unwrap();
        assert_eq!(q.labels(), vec![Label::One, Label::Zero]);
        assert!("1x".parse::<Pattern>().is_err());
    }

    #[test]
    fn strategy_examples() {
        let c = ConceptClass::thresholds(3).unwrap();
        let mut u = GameRecord::new();
        assert_eq!(winning_strategy(&u, &c, &[p(2)]).unwrap().to_string(), "0");
        u.record(vec![p(2)], "0".parse().unwrap()).unwrap();
        assert_eq!(u.current_k(), 2);
        assert_eq!(winning_strategy(&u, &c, &[p(1), p(3)]).unwrap().to_string(), "10");

        let s = ConceptClass::singletons(3).unwrap().subclass(&{
            let mut set = FixedBitSet::with_capacity(3);
            set.insert(1);
            set
        });
        let u = GameRecord::new();
        assert_eq!(winning_strategy(&u, &s, &[p(2)]).unwrap().to_string(), "0");
        assert_eq!(winning_strategy(&u, &s, &[p(3)]).unwrap().to_string(), "1");
    }

    #[test]
    fn strategy_errors() {
        let c = ConceptClass::thresholds(3).unwrap();
        let mut u = GameRecord::new();
        assert!(matches!(winning_strategy(&u, &c, &[p(1), p(2)]), Err(Error::State(_))));
        u.record(vec![p(1)], "1".parse().unwrap()).unwrap();
        u.record(vec![p(2), p(3)], "00".parse().unwrap()).unwrap();
        assert!(matches!(
            winning_strategy(&u, &c, &[p(1), p(2), p(3)]),
            Err(Error::State(_))
        ));
        assert!(u.record(vec![p(1)], "1".parse().unwrap()).is_err());
    }

    #[test]
    fn induced_examples() {
        let d = Arc::new(Domain::numbered(3).unwrap());
        let zero = induced_partial_class_with(d.clone(), 1, |_| Ok(Pattern::zeros(1))).unwrap();
        assert_eq!(zero.hypotheses(), &[Hypothesis::total(0b111, 3)]);

        let all = induced_partial_class_with(d, 4, |t| Ok(Pattern::zeros(t.len()))).unwrap();
        assert_eq!(all.len(), 8);

        // the strategy answers with h's label; survivors disagree with h everywhere
        let d2 = Arc::new(Domain::numbered(2).unwrap());
        let h = Hypothesis::total(0b01, 2);
        let c = induced_partial_class_with(d2, 1, |t| Ok(Pattern::from_labels(&[h.value(t[0]).label().unwrap()])))
            .unwrap();
        let oracle: Vec<u64> = (0..4u64).filter(|g| (0..2).all(|i| (g >> i & 1) != (h.ones_mask() >> i & 1))).collect();
        assert_eq!(c.hypotheses().iter().map(|h| h.ones_mask()).collect::<Vec<_>>(), oracle);
    }

    #[test]
    fn induced_class_matches_definition() {
        let c = ConceptClass::thresholds(4).unwrap();
        let mut u = GameRecord::new();
        u.record(vec![p(2)], "0".parse().unwrap()).unwrap();
        let induced = induced_partial_class(&u, &c).unwrap();
        let live = u.version_space(&c).unwrap();
        // oracle: check every total function against every ordered pair of distinct points
        let mut expected = Vec::new();
        for h in 0..16u64 {
            let mut ok = true;
            for a in 0..4 {
                for b in 0..4 {
                    if a == b {
                        continue;
                    }
                    let g = greedy_pattern(&c, &live, &[Point(a), Point(b)]).unwrap();
                    let mine = (h >> a & 1) << 1 | (h >> b & 1);
                    if mine == g.bits() {
                        ok = false;
                    }
                }
            }
            if ok {
                expected.push(h);
            }
        }
        let got: Vec<u64> = induced.hypotheses().iter().map(|h| h.ones_mask()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn induced_domain_cap() {
        let c = ConceptClass::thresholds(13).unwrap();
        let mut u = GameRecord::new();
        u.record(vec![p(1)], "0".parse().unwrap()).unwrap();
        assert!(matches!(induced_partial_class(&u, &c), Err(Error::Size { .. })));
        assert!(induced_partial_class(&GameRecord::new(), &c).is_ok());
    }
}
