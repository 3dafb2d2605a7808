//! Classical ranking combinatorics: alternatives, strict rankings, pairwise
//! tallies, Condorcet scores, weak orders and their linear extensions.
//!
//! Rankings are labelled by their lexicographic rank among all permutations of
//! `0..m` (a Lehmer-code bijection), so index 0 is always the identity order.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Index of an alternative inside an [`AlternativeSet`].
pub type Alternative = usize;

/// Ordered pair `(x, y)` read as "x is preferred to y".
pub type Pair = (Alternative, Alternative);

pub fn factorial(m: usize) -> usize {
    (1..=m).product()
}

/// The labelled set of alternatives being ranked.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlternativeSet {
    names: Vec<String>,
}

impl AlternativeSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 alternatives, got {}",
                names.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            let trimmed = name.trim();
            if trimmed.is_empty() || trimmed != name || name.contains('>') {
                return Err(Error::InvalidArgument(format!(
                    "alternative label {name:?} must be non-empty, without surrounding whitespace, and not contain '>'"
                )));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate alternative label {name:?}"
                )));
            }
        }
        Ok(Self { names })
    }

    /// `a`, `b`, `c`, ... for `m ≤ 26`, `a1`, `a2`, ... beyond that.
    pub fn letters(m: usize) -> Result<Self> {
        if m <= 26 {
            Self::new((0..m).map(|i| ((b'a' + i as u8) as char).to_string()))
        } else {
            Self::new((1..=m).map(|i| format!("a{i}")))
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Alternative) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, label: &str) -> Result<Alternative> {
        self.names
            .iter()
            .position(|n| n == label)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown alternative {label:?}")))
    }

    pub fn check(&self, a: Alternative) -> Result<()> {
        if a < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "alternative index {a} out of range for {} alternatives",
                self.len()
            )))
        }
    }

    /// Parses the compact `"a>b>c"` form.
    pub fn parse_ranking(&self, text: &str) -> Result<Ranking> {
        let order = text
            .split('>')
            .map(|label| self.index_of(label.trim()))
            .collect::<Result<Vec<_>>>()?;
        if order.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "ranking {text:?} lists {} alternatives, expected {}",
                order.len(),
                self.len()
            )));
        }
        Ranking::new(order)
    }

    pub fn format_ranking(&self, r: &Ranking) -> String {
        r.order()
            .iter()
            .map(|&a| self.name(a))
            .collect::<Vec<_>>()
            .join(">")
    }

    /// Label array form, e.g. `["a","b","c"]` for a≻b≻c.
    pub fn ranking_labels(&self, r: &Ranking) -> Vec<String> {
        r.order().iter().map(|&a| self.names[a].clone()).collect()
    }
}

/// A strict total order; position 0 holds the most preferred alternative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking {
    order: Vec<Alternative>,
}

impl fmt::Debug for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.order.iter().map(|a| a.to_string()).collect();
        write!(f, "Ranking({})", parts.join(">"))
    }
}

impl Ranking {
    pub fn new(order: Vec<Alternative>) -> Result<Self> {
        let m = order.len();
        let mut seen = vec![false; m];
        for &a in &order {
            if a >= m || seen[a] {
                return Err(Error::InvalidArgument(format!(
                    "{order:?} is not a permutation of 0..{m}"
                )));
            }
            seen[a] = true;
        }
        Ok(Self { order })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            order: (0..m).collect(),
        }
    }

    pub fn order(&self) -> &[Alternative] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn top(&self) -> Alternative {
        self.order[0]
    }

    /// `positions()[a]` is the position of alternative `a`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &a) in self.order.iter().enumerate() {
            pos[a] = p;
        }
        pos
    }

    pub fn position(&self, a: Alternative) -> Option<usize> {
        self.order.iter().position(|&b| b == a)
    }

    /// True iff `x` is placed above `y`.
    pub fn prefers(&self, x: Alternative, y: Alternative) -> Result<bool> {
        let m = self.order.len();
        if x >= m || y >= m {
            return Err(Error::InvalidArgument(format!(
                "alternative out of range for ranking over {m}"
            )));
        }
        if x == y {
            return Err(Error::InvalidArgument(format!(
                "cannot compare alternative {x} with itself"
            )));
        }
        for &a in &self.order {
            if a == x {
                return Ok(true);
            }
            if a == y {
                return Ok(false);
            }
        }
        unreachable!("permutation contains both alternatives")
    }

    pub fn reversed(&self) -> Self {
        Self {
            order: self.order.iter().rev().copied().collect(),
        }
    }

    /// Renames every alternative `a` to `perm[a]`.
    pub fn relabeled(&self, perm: &[Alternative]) -> Self {
        Self {
            order: self.order.iter().map(|&a| perm[a]).collect(),
        }
    }

    /// Lexicographic rank among all permutations of `0..m`.
    pub fn index(&self) -> usize {
        let m = self.order.len();
        let mut index = 0;
        for (p, &a) in self.order.iter().enumerate() {
            let smaller_later = self.order[p + 1..].iter().filter(|&&b| b < a).count();
            index += smaller_later * factorial(m - 1 - p);
        }
        index
    }

    pub fn from_index(index: usize, m: usize) -> Result<Self> {
        let total = factorial(m);
        if index >= total {
            return Err(Error::InvalidArgument(format!(
                "ranking index {index} out of range 0..{total}"
            )));
        }
        let mut remaining: Vec<Alternative> = (0..m).collect();
        let mut rest = index;
        let mut order = Vec::with_capacity(m);
        for p in 0..m {
            let block = factorial(m - 1 - p);
            order.push(remaining.remove(rest / block));
            rest %= block;
        }
        Ok(Self { order })
    }
}

pub fn prefers(r: &Ranking, x: Alternative, y: Alternative) -> Result<bool> {
    r.prefers(x, y)
}

pub fn ranking_index(r: &Ranking) -> usize {
    r.index()
}

pub fn ranking_from_index(index: usize, alternatives: &AlternativeSet) -> Result<Ranking> {
    Ranking::from_index(index, alternatives.len())
}

/// One strict ranking per voter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassicalProfile {
    m: usize,
    rankings: Vec<Ranking>,
}

impl ClassicalProfile {
    pub fn new(rankings: Vec<Ranking>) -> Result<Self> {
        let m = rankings
            .first()
            .ok_or_else(|| Error::InvalidProfile("profile needs at least one voter".into()))?
            .len();
        if rankings.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidProfile(
                "all rankings must cover the same alternatives".into(),
            ));
        }
        Ok(Self { m, rankings })
    }

    pub fn parse(alternatives: &AlternativeSet, rankings: &[&str]) -> Result<Self> {
        Self::new(
            rankings
                .iter()
                .map(|r| alternatives.parse_ranking(r))
                .collect::<Result<_>>()?,
        )
    }

    pub fn alternatives(&self) -> usize {
        self.m
    }

    pub fn voters(&self) -> usize {
        self.rankings.len()
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    /// Voters (0-based) ranking `x` above `y`.
    pub fn voters_preferring(&self, x: Alternative, y: Alternative) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, r) in self.rankings.iter().enumerate() {
            if r.prefers(x, y)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// `tally[x][y]` = number of voters with x ≻ y.
    pub fn pairwise_tally(&self) -> Vec<Vec<usize>> {
        let m = self.m;
        let mut tally = vec![vec![0; m]; m];
        for r in &self.rankings {
            for (p, &x) in r.order().iter().enumerate() {
                for &y in &r.order()[p + 1..] {
                    tally[x][y] += 1;
                }
            }
        }
        tally
    }

    /// Number of other alternatives each alternative beats or ties pairwise.
    pub fn condorcet_scores(&self) -> Vec<usize> {
        condorcet_scores_from_tally(&self.pairwise_tally())
    }

    pub fn relabeled(&self, perm: &[Alternative]) -> Self {
        Self {
            m: self.m,
            rankings: self.rankings.iter().map(|r| r.relabeled(perm)).collect(),
        }
    }
}

pub(crate) fn condorcet_scores_from_tally(tally: &[Vec<usize>]) -> Vec<usize> {
    let m = tally.len();
    (0..m)
        .map(|x| {
            (0..m)
                .filter(|&y| y != x && tally[x][y] >= tally[y][x])
                .count()
        })
        .collect()
}

pub fn voters_preferring(
    p: &ClassicalProfile,
    x: Alternative,
    y: Alternative,
) -> Result<Vec<usize>> {
    p.voters_preferring(x, y)
}

pub fn condorcet_scores(p: &ClassicalProfile) -> Vec<usize> {
    p.condorcet_scores()
}

/// Ordered partition of the alternatives; earlier tiers are strictly preferred.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeakOrder {
    tiers: Vec<Vec<Alternative>>,
}

impl WeakOrder {
    pub fn new(mut tiers: Vec<Vec<Alternative>>, m: usize) -> Result<Self> {
        let mut seen = vec![false; m];
        for tier in &mut tiers {
            if tier.is_empty() {
                return Err(Error::InvalidArgument(
                    "weak order has an empty tier".into(),
                ));
            }
            tier.sort_unstable();
            for &a in tier.iter() {
                if a >= m || seen[a] {
                    return Err(Error::InvalidArgument(format!(
                        "tiers are not a partition of 0..{m}"
                    )));
                }
                seen[a] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "tiers do not cover all of 0..{m}"
            )));
        }
        Ok(Self { tiers })
    }

    /// Groups equal scores, highest score first.
    pub fn from_score_vec(scores: &[usize]) -> Self {
        let mut groups: BTreeMap<std::cmp::Reverse<usize>, Vec<Alternative>> = BTreeMap::new();
        for (a, &s) in scores.iter().enumerate() {
            groups.entry(std::cmp::Reverse(s)).or_default().push(a);
        }
        Self {
            tiers: groups.into_values().collect(),
        }
    }

    pub fn tiers(&self) -> &[Vec<Alternative>] {
        &self.tiers
    }

    pub fn alternatives(&self) -> usize {
        self.tiers.iter().map(Vec::len).sum()
    }

    pub fn extension_count(&self) -> usize {
        self.tiers.iter().map(|t| factorial(t.len())).product()
    }

    /// True iff `r` never places a later-tier alternative above an earlier one.
    pub fn is_extended_by(&self, r: &Ranking) -> bool {
        let mut pos = 0;
        for tier in &self.tiers {
            let mut block: Vec<Alternative> = r.order()[pos..pos + tier.len()].to_vec();
            block.sort_unstable();
            if &block != tier {
                return false;
            }
            pos += tier.len();
        }
        true
    }

    /// Every ranking extending this weak order, in lexicographic order.
    pub fn linear_extensions(&self) -> Vec<Ranking> {
        let mut out = vec![Vec::with_capacity(self.alternatives())];
        for tier in &self.tiers {
            let perms = permutations_of(tier);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    perms.iter().map(move |perm| {
                        let mut next = prefix.clone();
                        next.extend_from_slice(perm);
                        next
                    })
                })
                .collect();
        }
        out.into_iter().map(|order| Ranking { order }).collect()
    }
}

/// Builds the weak order from a score map; every alternative `0..m` must be present.
pub fn weak_order_from_scores(
    scores: &BTreeMap<Alternative, usize>,
    m: usize,
) -> Result<WeakOrder> {
    let mut dense = Vec::with_capacity(m);
    for a in 0..m {
        dense.push(
            *scores.get(&a).ok_or_else(|| {
                Error::InvalidArgument(format!("score missing for alternative {a}"))
            })?,
        );
    }
    if scores.keys().any(|&a| a >= m) {
        return Err(Error::InvalidArgument(format!(
            "score given for alternative outside 0..{m}"
        )));
    }
    Ok(WeakOrder::from_score_vec(&dense))
}

pub fn linear_extensions(w: &WeakOrder) -> Vec<Ranking> {
    w.linear_extensions()
}

/// All permutations of a sorted slice, in lexicographic order.
fn permutations_of(items: &[Alternative]) -> Vec<Vec<Alternative>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::with_capacity(factorial(items.len()));
    for (i, &head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations_of(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}
