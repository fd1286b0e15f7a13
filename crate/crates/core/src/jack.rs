//! Jack polynomials `C_κ^{(β)}` in the "C" normalization, evaluated at
//! diagonal matrix arguments.
//!
//! Evaluation uses the branching rule over variables: with the last
//! variable split off,
//!
//! ```text
//! C_κ(x_1..x_j) = Σ_{κ/μ horizontal strip} γ_{κμ} · C_μ(x_1..x_{j-1}) · x_j^{|κ|-|μ|}
//! ```
//!
//! where `γ_{κμ}` is the J-normalization branching coefficient rescaled by
//! the J→C conversion `α^k k!/j_κ`. The coefficients depend only on
//! `(κ, μ, α)`, so a [`JackPlan`] computes them once and can then be
//! evaluated at many spectra.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::combinatorics::{partitions_up_to, subpartitions, BetaParam, Partition};
use crate::scalar::Field;

/// Plans with at most this many (κ, μ) branch pairs keep them in memory;
/// larger plans regenerate them on every evaluation.
const BRANCH_CACHE_LIMIT: usize = 1 << 21;

/// Branch pairs in compressed-row form: the branches of partition `k` are
/// `offsets[k]..offsets[k + 1]`.
#[derive(Clone, Debug)]
struct BranchCache<T> {
    offsets: Vec<usize>,
    from: Vec<u32>,
    degree: Vec<u32>,
    coef: Vec<T>,
}

/// Maps a partition to its position in a plan.
#[derive(Clone, Debug)]
enum PartitionIndex {
    /// Arithmetic rank inside the box `weight ≤ W, length ≤ n, parts ≤ m`:
    /// `counts[(r * (n + 1) + l) * (m + 1) + c]` is the number of partitions
    /// of r with at most l parts, each at most c.
    Ranked {
        n: usize,
        max_part: usize,
        weight_start: Vec<usize>,
        counts: Vec<usize>,
    },
    Hashed(FxHashMap<Box<[usize]>, usize>),
}

impl PartitionIndex {
    fn ranked(max_weight: usize, n: usize, max_part: Option<usize>) -> Self {
        let n = n.min(max_weight);
        let m = max_part.unwrap_or(max_weight).min(max_weight);
        let at = |r: usize, l: usize, c: usize| (r * (n + 1) + l) * (m + 1) + c;
        let mut counts = vec![0usize; (max_weight + 1) * (n + 1) * (m + 1)];
        for r in 0..=max_weight {
            for l in 0..=n {
                for c in 0..=m {
                    counts[at(r, l, c)] = if r == 0 {
                        1
                    } else if l == 0 || c == 0 {
                        0
                    } else {
                        let exact = if c <= r { counts[at(r - c, l - 1, c)] } else { 0 };
                        counts[at(r, l, c - 1)] + exact
                    };
                }
            }
        }
        let mut weight_start = Vec::with_capacity(max_weight + 2);
        weight_start.push(0);
        for r in 0..=max_weight {
            let last = *weight_start.last().expect("seeded with zero");
            weight_start.push(last + counts[at(r, n, m)]);
        }
        Self::Ranked {
            n,
            max_part: m,
            weight_start,
            counts,
        }
    }

    fn lookup(&self, parts: &[usize]) -> Option<usize> {
        match self {
            Self::Hashed(map) => map.get(parts).copied(),
            Self::Ranked {
                n,
                max_part,
                weight_start,
                ..
            } => {
                let weight: usize = parts.iter().sum();
                let fits = weight + 1 < weight_start.len()
                    && parts.len() <= *n
                    && parts.first().is_none_or(|&p| p <= *max_part);
                fits.then(|| self.rank(parts, weight))
            }
        }
    }

    /// Position of a partition of `weight` known to lie in the plan.
    fn rank(&self, parts: &[usize], weight: usize) -> usize {
        match self {
            Self::Hashed(map) => map[parts],
            Self::Ranked {
                n,
                max_part,
                weight_start,
                counts,
            } => {
                // Partitions of the same weight that are lexicographically
                // larger come first.
                let m1 = max_part + 1;
                let (mut rank, mut rem, mut top) = (weight_start[weight], weight, (*max_part).min(weight));
                for (i, &v) in parts.iter().enumerate() {
                    let row = (rem * (n + 1) + n - i) * m1;
                    rank += counts[row + top] - counts[row + v];
                    rem -= v;
                    top = v;
                }
                rank
            }
        }
    }
}

/// Precomputed branching structure over a down-closed set of partitions.
#[derive(Clone, Debug)]
pub struct JackPlan<T> {
    beta: BetaParam<T>,
    n: usize,
    max_weight: usize,
    partitions: Vec<Partition>,
    index: PartitionIndex,
    weight_start: Vec<usize>,
    cache: Option<BranchCache<T>>,
}

impl<T: Field> JackPlan<T> {
    /// Plan for every partition with weight ≤ `max_weight`, at most `n`
    /// parts and largest part ≤ `max_part`.
    pub fn new(beta: &BetaParam<T>, n: usize, max_weight: usize, max_part: Option<usize>) -> Self {
        assert!(n > 0, "Jack plan needs at least one variable");
        let index = PartitionIndex::ranked(max_weight, n, max_part);
        Self::from_partitions(beta, n, partitions_up_to(max_weight, n, max_part), index)
    }

    /// Plan for all sub-diagrams of `kappa` (enough to evaluate `C_κ` alone).
    pub fn for_shape(beta: &BetaParam<T>, n: usize, kappa: &Partition) -> Self {
        assert!(n > 0, "Jack plan needs at least one variable");
        let parts: Vec<Partition> = subpartitions(kappa).into_iter().filter(|p| p.len() <= n).collect();
        let index = PartitionIndex::Hashed(parts.iter().enumerate().map(|(i, p)| (Box::from(p.parts()), i)).collect());
        Self::from_partitions(beta, n, parts, index)
    }

    fn from_partitions(beta: &BetaParam<T>, n: usize, partitions: Vec<Partition>, index: PartitionIndex) -> Self {
        let max_weight = partitions.last().map_or(0, Partition::weight);
        let mut weight_start = vec![partitions.len(); max_weight + 2];
        for (i, p) in partitions.iter().enumerate().rev() {
            weight_start[p.weight()] = i;
        }
        for k in (0..=max_weight).rev() {
            weight_start[k] = weight_start[k].min(weight_start[k + 1]);
        }
        let mut plan = Self {
            beta: beta.clone(),
            n,
            max_weight,
            partitions,
            index,
            weight_start,
            cache: None,
        };
        let pairs: usize = plan.partitions.iter().map(|k| strip_count(k, n)).sum();
        if pairs <= BRANCH_CACHE_LIMIT {
            let mut cache = BranchCache {
                offsets: Vec::with_capacity(plan.partitions.len() + 1),
                from: Vec::with_capacity(pairs),
                degree: Vec::with_capacity(pairs),
                coef: Vec::with_capacity(pairs),
            };
            let mut walker = StripWalker::new(&plan.beta.alpha(), n, plan.max_weight);
            cache.offsets.push(0);
            for kappa in &plan.partitions {
                walker.walk(kappa, &plan.index, |from, degree, coef| {
                    cache.from.push(from as u32);
                    cache.degree.push(degree as u32);
                    cache.coef.push(coef.clone());
                });
                cache.offsets.push(cache.from.len());
            }
            plan.cache = Some(cache);
        }
        plan
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> &BetaParam<T> {
        &self.beta
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    /// Partitions in evaluation order (weight, then decreasing lexicographic).
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, kappa: &Partition) -> Option<usize> {
        let i = self.index.lookup(kappa.parts())?;
        (self.partitions.get(i) == Some(kappa)).then_some(i)
    }

    /// Index range of the weight-`k` partitions.
    pub fn weight_range(&self, k: usize) -> std::ops::Range<usize> {
        if k > self.max_weight {
            return self.partitions.len()..self.partitions.len();
        }
        self.weight_start[k]..self.weight_start[k + 1]
    }

    /// Evaluates every planned `C_κ` at `x`, aligned with [`Self::partitions`].
    ///
    /// # Panics
    /// If `x.len()` differs from the plan's variable count.
    pub fn evaluate(&self, x: &[T]) -> Vec<T> {
        self.evaluate_many(&[x]).pop().expect("one spectrum in, one out")
    }

    /// [`Self::evaluate`] at several spectra in one sweep over the branch
    /// pairs, which is much cheaper than separate calls when the pairs are
    /// not cached.
    ///
    /// # Panics
    /// If any spectrum's length differs from the plan's variable count.
    pub fn evaluate_many(&self, xs: &[&[T]]) -> Vec<Vec<T>> {
        for x in xs {
            assert_eq!(x.len(), self.n, "spectrum length must match the plan");
        }
        let (count, pts, n) = (self.partitions.len(), xs.len(), self.n);
        if count == 0 || pts == 0 {
            return vec![Vec::new(); pts];
        }
        // powers[(j * (W + 1) + d) * pts + p] = x_p[j]^d
        let stride = self.max_weight + 1;
        let mut powers = vec![T::one(); n * stride * pts];
        for j in 0..n {
            for d in 1..stride {
                for (p, x) in xs.iter().enumerate() {
                    let prev = powers[(j * stride + d - 1) * pts + p].clone();
                    powers[(j * stride + d) * pts + p] = prev * x[j].clone();
                }
            }
        }
        // vals[(level * count + k) * pts + p] = C_κ_k(x_p[0..level])
        let mut vals = vec![T::zero(); (n + 1) * count * pts];
        for level in 0..=n {
            for p in 0..pts {
                vals[(level * count) * pts + p] = T::one();
            }
        }
        // The μ = κ branch reads C_κ of the previous level, which is only
        // complete once every other branch of κ has been added; it is applied
        // last, level by level.
        let mut own: Option<T> = None;
        let add = |k: usize, from: usize, degree: usize, coef: &T, own: &mut Option<T>, vals: &mut [T]| {
            if from == k {
                *own = Some(coef.clone());
                return;
            }
            // C_μ vanishes in fewer than l(μ) variables.
            let first = self.partitions[k].len().max(self.partitions[from].len() + 1);
            for level in first..=n {
                let (lower, upper) = vals.split_at_mut(level * count * pts);
                let src = &lower[((level - 1) * count + from) * pts..][..pts];
                let dst = &mut upper[k * pts..][..pts];
                let pw = &powers[((level - 1) * stride + degree) * pts..][..pts];
                for ((d, s), w) in dst.iter_mut().zip(src).zip(pw) {
                    *d = d.clone() + s.clone() * w.clone() * coef.clone();
                }
            }
        };
        let finish = |k: usize, own: &mut Option<T>, vals: &mut [T]| {
            if let Some(coef) = own.take() {
                for level in self.partitions[k].len().max(1)..=n {
                    let src = ((level - 1) * count + k) * pts;
                    let dst = (level * count + k) * pts;
                    for p in 0..pts {
                        vals[dst + p] = vals[dst + p].clone() + vals[src + p].clone() * coef.clone();
                    }
                }
            }
        };
        match &self.cache {
            Some(cache) => {
                for k in 1..count {
                    for e in cache.offsets[k]..cache.offsets[k + 1] {
                        add(k, cache.from[e] as usize, cache.degree[e] as usize, &cache.coef[e], &mut own, &mut vals);
                    }
                    finish(k, &mut own, &mut vals);
                }
            }
            None => {
                let mut walker = StripWalker::new(&self.beta.alpha(), n, self.max_weight);
                for k in 1..count {
                    walker.walk(&self.partitions[k], &self.index, |from, degree, coef| {
                        add(k, from, degree, coef, &mut own, &mut vals)
                    });
                    finish(k, &mut own, &mut vals);
                }
            }
        }
        (0..pts)
            .map(|p| (0..count).map(|k| vals[(n * count + k) * pts + p].clone()).collect())
            .collect()
    }

    /// Evaluates the plan at `x` and wraps the result in a lookup table.
    pub fn table(self: &Arc<Self>, x: &[T]) -> JackTable<T> {
        JackTable {
            values: self.evaluate(x),
            plan: Arc::clone(self),
        }
    }
}

/// Number of μ with κ/μ a horizontal strip and `l(μ) < n`.
fn strip_count(kappa: &Partition, n: usize) -> usize {
    let parts = kappa.parts();
    (0..parts.len())
        .map(|r| {
            let below = parts.get(r + 1).copied().unwrap_or(0);
            if r + 1 == n {
                1
            } else {
                parts[r] - below + 1
            }
        })
        .product()
}

/// Enumerates the horizontal strips κ/μ together with the branching
/// coefficient `γ_{κμ}`.
///
/// With columns grouped into blocks `B_r = [κ_{r+1}, κ_r)` (the columns whose
/// lowest cell lies in row r), and C the set of columns that lose a cell,
///
/// ```text
/// γ_{κμ} = α^d |κ|!/|μ|! · Π_r own_r(μ_r) · Π_{i<r} pair_{ir}(μ_i, μ_r)
///          / Π_j (j ∈ C ? upper_κ : lower_κ)(column j)
/// ```
///
/// where `own_r` collects the cells of μ in row r and block r and
/// `pair_{ir}` the cells of row i in block r. Rows are chosen top-down, so
/// every factor involving row r is known once μ_r is, and lowering μ_r by
/// one changes O(r) factors.
struct StripWalker<T> {
    alpha: T,
    n: usize,
    mu: Vec<usize>,
    /// Per κ: `1 / lower_κ(column j)`, `lower/upper`, `1 / upper`.
    inv_lower: Vec<T>,
    lower_over_upper: Vec<T>,
    inv_upper: Vec<T>,
    /// Per plan, so that the inner loop only multiplies:
    /// `inv_own[a] = 1/(1 + αa)`,
    /// `pair_step[(g - 1) * (W + 1) + t] = (g - 1 + αt) / (g + 1 + α(t - 1))`,
    /// `lin[c * (W + 1) + t] = c + αt` and `inv_lin` its reciprocal.
    stride: usize,
    inv_own: Vec<T>,
    pair_step: Vec<T>,
    lin: Vec<T>,
    inv_lin: Vec<T>,
    /// For κ with n parts: row n-1 is emptied in a single move whose factor
    /// is `forced_const · forced_fall[|κ| - w] · (window ratio)`, w being
    /// the weight on entry.
    forced_const: T,
    forced_fall: Vec<T>,
}

impl<T: Field> StripWalker<T> {
    fn new(alpha: &T, n: usize, max_weight: usize) -> Self {
        let int = |v: usize| T::from_int(v as i64);
        let stride = max_weight + 1;
        let inv_own = (0..stride).map(|a| T::one() / (T::one() + alpha.clone() * int(a))).collect();
        let mut pair_step = Vec::with_capacity(n.saturating_sub(1) * stride);
        for g in 1..n.max(1) {
            pair_step.push(T::zero());
            for t in 1..stride {
                let after = int(g - 1) + alpha.clone() * int(t);
                let before = int(g + 1) + alpha.clone() * int(t - 1);
                pair_step.push(after / before);
            }
        }
        let mut lin = Vec::with_capacity(n.saturating_sub(1) * stride);
        let mut inv_lin = Vec::with_capacity(n.saturating_sub(1) * stride);
        for c in 0..n.saturating_sub(1) {
            for t in 0..stride {
                let v = int(c) + alpha.clone() * int(t);
                inv_lin.push(if v.is_zero() { T::zero() } else { T::one() / v.clone() });
                lin.push(v);
            }
        }
        Self {
            alpha: alpha.clone(),
            n,
            mu: Vec::new(),
            inv_lower: Vec::new(),
            lower_over_upper: Vec::new(),
            inv_upper: Vec::new(),
            stride,
            inv_own,
            pair_step,
            lin,
            inv_lin,
            forced_const: T::one(),
            forced_fall: Vec::new(),
        }
    }

    fn walk(
        &mut self,
        kappa: &Partition,
        index: &PartitionIndex,
        mut emit: impl FnMut(usize, usize, &T),
    ) {
        let k = kappa.parts();
        let conj = kappa.conjugate();
        self.inv_lower.clear();
        self.lower_over_upper.clear();
        self.inv_upper.clear();
        for (j, &height) in conj.iter().enumerate() {
            let (mut lo, mut up) = (T::one(), T::one());
            for (i, &len) in k.iter().enumerate().take(height) {
                let (u, l) = hooks(len, height, i, j, &self.alpha);
                up = up * u;
                lo = lo * l;
            }
            self.inv_lower.push(T::one() / lo.clone());
            self.lower_over_upper.push(lo / up.clone());
            self.inv_upper.push(T::one() / up);
        }
        self.mu.clear();
        self.mu.extend_from_slice(k);
        let weight = kappa.weight();
        if k.len() == self.n {
            // Column by column so that no partial product overflows.
            let r = self.n - 1;
            let top = k[r];
            let int = |v: usize| T::from_int(v as i64);
            let mut c = T::one();
            for j in 0..top {
                let mut col = self.alpha.clone() * int(weight - j);
                for (i, &ki) in k.iter().enumerate().take(r) {
                    col = col * (int(r - i - 1) + self.alpha.clone() * int(ki - j));
                }
                c = c * col * self.inv_upper[j].clone();
            }
            self.forced_const = c;
            self.forced_fall.clear();
            let mut fall = T::one();
            for w in (top..=weight).rev() {
                self.forced_fall.push(fall.clone());
                if w > top {
                    fall = fall * int(w - top) / int(w);
                }
            }
        }
        self.row(k, 0, T::one(), T::one(), weight, weight, index, &mut emit);
    }

    #[allow(clippy::too_many_arguments)]
    fn row(
        &mut self,
        k: &[usize],
        r: usize,
        coef: T,
        window: T,
        weight: usize,
        full: usize,
        index: &PartitionIndex,
        emit: &mut impl FnMut(usize, usize, &T),
    ) {
        if r == k.len() {
            let len = self.mu.iter().rposition(|&v| v > 0).map_or(0, |p| p + 1);
            emit(index.rank(&self.mu[..len], weight), full - weight, &coef);
            return;
        }
        // The last variable must absorb all of row n-1, so l(μ) < n.
        if r + 1 == self.n {
            self.mu[r] = 0;
            let len = self.mu.iter().rposition(|&v| v > 0).map_or(0, |p| p + 1);
            let from = index.rank(&self.mu[..len], weight - k[r]);
            let c = coef * self.forced_const.clone() * self.forced_fall[full - weight].clone() * window;
            emit(from, full - weight + k[r], &c);
            self.mu[r] = k[r];
            return;
        }
        let alpha = self.alpha.clone();
        let int = |v: usize| T::from_int(v as i64);
        let top = k[r];
        let floor = k.get(r + 1).copied().unwrap_or(0);
        // Moving this row shifts its window in the forced row's factor.
        let forced = (k.len() == self.n).then(|| (k[self.n - 1], self.n - 2 - r));
        let mut window = window;

        let w1 = self.stride;
        // Column by column so that no partial product overflows.
        let mut f = T::one();
        for j in floor..top {
            f = f * (T::one() + alpha.clone() * int(j - floor));
            for i in 0..r {
                f = f * (int(r - i + 1) + alpha.clone() * int(self.mu[i] - j - 1));
            }
            f = f * self.inv_lower[j].clone();
        }

        let mut m = top;
        let mut w = weight;
        loop {
            self.mu[r] = m;
            self.row(k, r + 1, coef.clone() * f.clone(), window.clone(), w, full, index, emit);
            if m == floor {
                break;
            }
            if let Some((ftop, c)) = forced {
                window = window * self.lin[c * w1 + m - ftop].clone() * self.inv_lin[c * w1 + m].clone();
            }
            let j = m - 1;
            f = f * alpha.clone() * int(w) * self.inv_own[j - floor].clone();
            w -= 1;
            for i in 0..r {
                f = f * self.pair_step[(r - i - 1) * w1 + self.mu[i] - j].clone();
            }
            f = f * self.lower_over_upper[j].clone();
            m = j;
        }
        self.mu[r] = top;
    }
}

/// `C_κ(x)` for every partition of a plan, at one fixed spectrum.
#[derive(Clone, Debug)]
pub struct JackTable<T> {
    plan: Arc<JackPlan<T>>,
    values: Vec<T>,
}

impl<T: Field> JackTable<T> {
    pub fn beta(&self) -> &BetaParam<T> {
        self.plan.beta()
    }

    pub fn max_weight(&self) -> usize {
        self.plan.max_weight()
    }

    pub fn plan(&self) -> &Arc<JackPlan<T>> {
        &self.plan
    }

    pub fn get(&self, kappa: &Partition) -> Option<&T> {
        self.plan.index_of(kappa).map(|i| &self.values[i])
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `(κ, C_κ(x))` over the partitions of weight `k`.
    pub fn weight_slice(&self, k: usize) -> impl Iterator<Item = (&Partition, &T)> {
        let r = self.plan.weight_range(k);
        self.plan.partitions[r.clone()].iter().zip(&self.values[r])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Table of `C_κ^{(β)}(x)` for every κ with `|κ| ≤ max_weight`, `l(κ) ≤ n`.
pub fn build_jack_table<T: Field>(beta: &BetaParam<T>, x: &[T], max_weight: usize) -> JackTable<T> {
    Arc::new(JackPlan::new(beta, x.len(), max_weight, None)).table(x)
}

/// `C_κ^{(β)}(x_1, ..., x_n)`; zero when `l(κ) > n`.
pub fn jack_c<T: Field>(kappa: &Partition, beta: &BetaParam<T>, x: &[T]) -> T {
    if kappa.len() > x.len() {
        return T::zero();
    }
    let plan = JackPlan::for_shape(beta, x.len(), kappa);
    let idx = plan.index_of(kappa).expect("shape is part of its own plan");
    plan.evaluate(x).swap_remove(idx)
}

/// `C_κ^{(β)}(I_n)` from the closed product over cells:
/// `α^k k! / j_κ · Π_{(i,j)∈κ} (n - i + 1 + α(j - 1))`.
pub fn jack_c_identity<T: Field>(kappa: &Partition, beta: &BetaParam<T>, n: usize) -> T {
    if kappa.len() > n {
        return T::zero();
    }
    let alpha = beta.alpha();
    let conj = kappa.conjugate();
    let nn = T::from_int(n as i64);
    let mut acc = T::one();
    let mut r = 0i64;
    for (i, &len) in kappa.parts().iter().enumerate() {
        for (j, &height) in conj.iter().enumerate().take(len) {
            r += 1;
            let (upper, lower) = hooks(len, height, i, j, &alpha);
            let content = nn.clone() - T::from_int(i as i64) + alpha.clone() * T::from_int(j as i64);
            acc = acc * (alpha.clone() * T::from_int(r) * content / (upper * lower));
        }
    }
    acc
}

/// `C_κ(I)/C_μ(I)` where μ is κ minus the last cell of its last row; only
/// the hooks in that row (which telescope) and that column change.
pub fn jack_c_identity_ratio<T: Field>(kappa: &Partition, beta: &BetaParam<T>, n: usize) -> T {
    let alpha = beta.alpha();
    let parts = kappa.parts();
    let Some(r) = parts.len().checked_sub(1) else {
        return T::one();
    };
    if parts.len() > n {
        return T::zero();
    }
    let int = |v: usize| T::from_int(v as i64);
    let c = parts[r] - 1;
    let mut num = int(kappa.weight()) * (int(n - r) + alpha.clone() * int(c));
    let mut den = int(c + 1) * (T::one() + alpha.clone() * int(c));
    for (i, &len) in parts[..r].iter().enumerate() {
        let (leg, arm) = (int(r - i), int(len - c - 1));
        let up = alpha.clone() * (arm.clone() + T::one());
        num = num * (leg.clone() - T::one() + up.clone()) * (leg.clone() + alpha.clone() * arm.clone());
        den = den * (leg.clone() + up) * (leg + T::one() + alpha.clone() * arm);
    }
    num / den
}

/// Upper and lower hook lengths of cell (i, j) (0-based) in a diagram whose
/// row `i` has length `row_len` and column `j` has length `col_len`.
fn hooks<T: Field>(row_len: usize, col_len: usize, i: usize, j: usize, alpha: &T) -> (T, T) {
    let leg = T::from_int(col_len as i64 - i as i64 - 1);
    let arm = T::from_int(row_len as i64 - j as i64 - 1);
    let upper = leg.clone() + alpha.clone() * (arm.clone() + T::one());
    let lower = leg + T::one() + alpha.clone() * arm;
    (upper, lower)
}
