//! Experts that replay a base learner and flip it at a finite set of rounds,
//! with a canonical numbering of the finite sets.
//!
//! Sets are ordered by `|J| * max J` (0 for the empty set), then by `|J|`,
//! then lexicographically on their sorted elements. Indices start at 1.
//! Within a block of sets with size `s` and maximum `M` there are
//! `C(M-1, s-1)` sets, which makes both directions a matter of counting.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::OnlineLearner;
use crate::concepts::{Label, Point};
use crate::error::{Error, Result};

/// Largest `n` kept in the cached Pascal triangle.
const PASCAL_ROWS: usize = 512;

struct Tables {
    pascal: Vec<Vec<BigUint>>,
    /// `before[k]`: number of nonempty sets with key below `k`.
    before: Vec<BigUint>,
}

impl Tables {
    fn new() -> Self {
        Tables {
            pascal: vec![vec![BigUint::one()]],
            before: vec![BigUint::zero(), BigUint::zero()],
        }
    }

    fn binom(&mut self, n: u64, k: u64) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        if (n as usize) < PASCAL_ROWS {
            while self.pascal.len() <= n as usize {
                let prev = self.pascal.last().expect("row 0 exists");
                let mut row = Vec::with_capacity(prev.len() + 1);
                row.push(BigUint::one());
                for w in prev.windows(2) {
                    row.push(&w[0] + &w[1]);
                }
                row.push(BigUint::one());
                self.pascal.push(row);
            }
            return self.pascal[n as usize][k as usize].clone();
        }
        let k = k.min(n - k);
        let mut acc = BigUint::one();
        for i in 0..k {
            acc *= n - i;
            acc /= i + 1;
        }
        acc
    }

    /// Number of sets of size `s` with maximum `m`.
    fn block(&mut self, s: u64, m: u64) -> BigUint {
        if s == 0 || m < s {
            return BigUint::zero();
        }
        self.binom(m - 1, s - 1)
    }

    fn key_count(&mut self, key: u64) -> BigUint {
        let mut total = BigUint::zero();
        for s in divisors(key) {
            total += self.block(s, key / s);
        }
        total
    }

    fn before(&mut self, key: u64) -> BigUint {
        while self.before.len() <= key as usize {
            let k = self.before.len() as u64 - 1;
            let count = self.key_count(k);
            let next = &self.before[k as usize] + count;
            self.before.push(next);
        }
        self.before[key as usize].clone()
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn tables() -> std::sync::MutexGuard<'static, Tables> {
    static TABLES: OnceLock<Mutex<Tables>> = OnceLock::new();
    TABLES
        .get_or_init(|| Mutex::new(Tables::new()))
        .lock()
        .unwrap_or_else(|e| e.into_inner())
}

/// `|J| * max J`, or 0 for the empty set.
pub fn order_key(set: &BTreeSet<u64>) -> u128 {
    set.last().map_or(0, |&m| set.len() as u128 * m as u128)
}

/// Position of `set` in the canonical order, starting at 1.
pub fn index_of_set(set: &BTreeSet<u64>) -> Result<BigUint> {
    if set.contains(&0) {
        return Err(Error::Domain("expert sets hold positive round indices".into()));
    }
    let Some(&max) = set.last() else {
        return Ok(BigUint::one());
    };
    let s = set.len() as u64;
    let key = s
        .checked_mul(max)
        .ok_or_else(|| Error::Numeric("set key overflows 64 bits".into()))?;
    let mut t = tables();
    let mut index = BigUint::from(2u32) + t.before(key);
    for s2 in divisors(key).into_iter().filter(|&d| d < s) {
        index += t.block(s2, key / s2);
    }
    // lexicographic rank of the other elements among (s-1)-subsets of 1..max-1
    let rest: Vec<u64> = set.iter().copied().filter(|&v| v != max).collect();
    let n = max - 1;
    let r = s - 1;
    let mut prev = 0;
    for (i, &b) in rest.iter().enumerate() {
        for v in prev + 1..b {
            index += t.binom(n - v, r - i as u64 - 1);
        }
        prev = b;
    }
    Ok(index)
}

/// Inverse of [`index_of_set`].
pub fn set_of_index(index: &BigUint) -> Result<BTreeSet<u64>> {
    if index.is_zero() {
        return Err(Error::Domain("expert indices start at 1".into()));
    }
    if index.is_one() {
        return Ok(BTreeSet::new());
    }
    let mut rem = index - BigUint::from(2u32);
    let mut t = tables();
    // smallest key whose cumulative count passes `rem`
    let mut hi = 2u64;
    while t.before(hi) <= rem {
        hi = hi.checked_mul(2).ok_or_else(|| Error::Numeric("index too large".into()))?;
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if t.before(mid) <= rem {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let key = lo.max(1);
    rem -= t.before(key);
    for s in divisors(key) {
        let max = key / s;
        let count = t.block(s, max);
        if rem >= count {
            rem -= count;
            continue;
        }
        let mut out = BTreeSet::new();
        let n = max - 1;
        let r = s - 1;
        let mut v = 1;
        for i in 0..r {
            loop {
                let c = t.binom(n - v, r - i - 1);
                if rem >= c {
                    rem -= c;
                    v += 1;
                } else {
                    break;
                }
            }
            out.insert(v);
            v += 1;
        }
        out.insert(max);
        return Ok(out);
    }
    Err(Error::Invariant("index fell outside its key block".into()))
}

pub fn set_of_index_u64(index: u64) -> Result<BTreeSet<u64>> {
    set_of_index(&BigUint::from(index))
}

/// `(k + 1) e^sqrt(k)`, the growth bound on indices of sets with key `k`.
pub fn index_bound(key: u128) -> f64 {
    (key as f64 + 1.0) * (key as f64).sqrt().exp()
}

/// Natural logarithm of a big index.
pub fn ln_index(index: &BigUint) -> f64 {
    match index.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            let bits = index.bits();
            let shift = bits.saturating_sub(64);
            let top = (index >> shift).to_f64().unwrap_or(f64::MAX);
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// A finite set of rounds together with its canonical index.
#[derive(Clone, PartialEq, Eq)]
pub struct ExpertSet {
    set: BTreeSet<u64>,
    index: BigUint,
}

impl ExpertSet {
    pub fn new(set: BTreeSet<u64>) -> Result<Self> {
        let index = index_of_set(&set)?;
        Ok(ExpertSet { set, index })
    }

    pub fn from_index(index: BigUint) -> Result<Self> {
        let set = set_of_index(&index)?;
        Ok(ExpertSet { set, index })
    }

    pub fn set(&self) -> &BTreeSet<u64> {
        &self.set
    }

    pub fn index(&self) -> &BigUint {
        &self.index
    }

    pub fn contains(&self, t: u64) -> bool {
        self.set.contains(&t)
    }
}

impl fmt::Debug for ExpertSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} {:?}", self.index, self.set)
    }
}

impl fmt::Display for ExpertSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.set.iter().map(u64::to_string).collect();
        write!(f, "{}", items.join(" "))
    }
}

/// Builds a fresh base learner for each expert.
pub type LearnerFactory = Arc<dyn Fn() -> Result<Box<dyn OnlineLearner>> + Send + Sync>;

/// Runs its own copy of the base learner on its own past predictions and
/// flips the base prediction at the rounds in its set.
pub struct Expert {
    set: ExpertSet,
    base: Box<dyn OnlineLearner>,
    t: u64,
}

impl Expert {
    pub fn new(set: ExpertSet, factory: &LearnerFactory) -> Result<Self> {
        Ok(Expert {
            set,
            base: factory()?,
            t: 0,
        })
    }

    pub fn set(&self) -> &ExpertSet {
        &self.set
    }

    /// Prediction for the next round. Depends only on the points seen.
    pub fn advise(&mut self, x: Point) -> Result<Label> {
        self.t += 1;
        let base = self.base.predict(x)?;
        let y = if self.set.contains(self.t) { base.flip() } else { base };
        self.base.observe(x, y)?;
        Ok(y)
    }
}

/// The experts with indices `1..=count`.
pub fn expert_pool(factory: &LearnerFactory, count: usize) -> Result<Vec<Expert>> {
    expert_sets(count)?
        .into_iter()
        .map(|set| Expert::new(set, factory))
        .collect()
}

/// The sets with indices `1..=count`, in index order.
pub fn expert_sets(count: usize) -> Result<Vec<ExpertSet>> {
    (1..=count as u64)
        .map(|i| ExpertSet::from_index(BigUint::from(i)))
        .collect()
}

/// Replays `base` on the true labels and returns its mistake rounds.
pub fn mistake_rounds(factory: &LearnerFactory, pairs: &[(Point, Label)]) -> Result<BTreeSet<u64>> {
    let mut base = factory()?;
    let mut rounds = BTreeSet::new();
    for (t, &(x, y)) in pairs.iter().enumerate() {
        if base.predict(x)? != y {
            rounds.insert(t as u64 + 1);
        }
        base.observe(x, y)?;
    }
    Ok(rounds)
}

/// One set per line, indices separated by spaces; the empty set is an
/// empty line.
pub fn expert_sets_text(sets: &[ExpertSet]) -> String {
    sets.iter().map(|s| format!("{s}\n")).collect()
}

/// Inverse of [`expert_sets_text`]. Lines starting with `#` are skipped.
pub fn parse_expert_sets(text: &str) -> Result<Vec<ExpertSet>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let set = line
            .split_whitespace()
            .map(|f| {
                f.parse::<u64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: format!("bad round index {f}: {e}"),
                })
            })
            .collect::<Result<BTreeSet<u64>>>()?;
        out.push(ExpertSet::new(set).map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[u64]) -> BTreeSet<u64> {
        items.iter().copied().collect()
    }

    #[test]
    fn small_indices() {
        let cases: [(&[u64], u32); 6] = [(&[], 1), (&[1], 2), (&[2], 3), (&[3], 4), (&[4], 5), (&[1, 2], 6)];
        for (s, i) in cases {
            assert_eq!(index_of_set(&set(s)).unwrap(), BigUint::from(i));
            assert_eq!(set_of_index(&BigUint::from(i)).unwrap(), set(s));
        }
        assert!(index_of_set(&set(&[0, 3])).is_err());
        assert!(set_of_index(&BigUint::zero()).is_err());
    }

    #[test]
    fn divisor_order() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(9), vec![1, 3, 9]);
    }

    #[test]
    fn big_sets_round_trip() {
        let s: BTreeSet<u64> = (1..=120).step_by(3).collect();
        let i = index_of_set(&s).unwrap();
        assert_eq!(set_of_index(&i).unwrap(), s);
        assert!(ln_index(&i) > 10.0);
    }

    #[test]
    fn ln_of_huge_indices() {
        let big = BigUint::one() << 2000u32;
        assert!((ln_index(&big) - 2000.0 * std::f64::consts::LN_2).abs() < 1e-6);
        assert_eq!(ln_index(&BigUint::one()), 0.0);
    }

    #[test]
    fn set_list_round_trip() {
        let sets = expert_sets(40).unwrap();
        let text = expert_sets_text(&sets);
        assert!(text.starts_with("\n1\n"));
        assert_eq!(parse_expert_sets(&text).unwrap(), sets);
        assert!(parse_expert_sets("1 x\n").is_err());
        assert!(parse_expert_sets("0\n").is_err());
    }
}
