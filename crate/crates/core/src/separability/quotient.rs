use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::rational::RationalSubset;
use super::stallings::{ReadOutcome, StallingsGraph};
use crate::cayley::build_ball;
use crate::error::{Error, Result};
use crate::groups::{free_inv, free_mul, Elem, GroupSpec, Letter};

/// A homomorphism from a free group to a symmetric group, given by the
/// images of the generators in one-line notation. Points are `0..n` and
/// permutations act on the right: the image of a word `w = l_1 ... l_k`
/// sends `x` to `x^{l_1} ... ^{l_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteQuotient {
    pub n: usize,
    pub images: Vec<Vec<u32>>,
}

type Perm = Vec<u32>;

fn compose(a: &[u32], b: &[u32]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn invert(a: &[u32]) -> Perm {
    let mut r = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        r[x as usize] = i as u32;
    }
    r
}

impl FiniteQuotient {
    pub fn new(n: usize, images: Vec<Vec<u32>>) -> Result<Self> {
        for p in &images {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&x| x as usize >= n || std::mem::replace(&mut seen[x as usize], true)) {
                return Err(Error::InvalidSpec(format!("{p:?} is not a permutation of {n} points")));
            }
        }
        Ok(FiniteQuotient { n, images })
    }

    pub fn trivial(rank: usize) -> Self {
        FiniteQuotient { n: 1, images: vec![vec![0]; rank] }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn identity_perm(&self) -> Perm {
        (0..self.n as u32).collect()
    }

    pub fn letter_image(&self, l: Letter) -> Perm {
        let p = &self.images[l.gen as usize];
        if l.inv {
            invert(p)
        } else {
            p.clone()
        }
    }

    pub fn image(&self, w: &[Letter]) -> Perm {
        let mut x = self.identity_perm();
        for &l in w {
            x = compose(&x, &self.letter_image(l));
        }
        x
    }

    /// Action on several blocks of points at once, one block per quotient.
    pub fn disjoint_union(parts: &[FiniteQuotient]) -> Result<FiniteQuotient> {
        let rank = parts.first().map_or(0, |q| q.rank());
        if parts.iter().any(|q| q.rank() != rank) {
            return Err(Error::InvalidSpec("quotients of different ranks".into()));
        }
        let n: usize = parts.iter().map(|q| q.n).sum();
        let mut images = vec![Vec::with_capacity(n); rank];
        let mut off = 0u32;
        for q in parts {
            for (g, img) in images.iter_mut().enumerate() {
                img.extend(q.images[g].iter().map(|&x| x + off));
            }
            off += q.n as u32;
        }
        FiniteQuotient::new(n, images)
    }

    /// The image of the subgroup generated by `gens`, or `None` beyond `cap`
    /// elements.
    pub fn image_subgroup(&self, gens: &[Vec<Letter>], cap: usize) -> Option<BTreeSet<Perm>> {
        let gens: Vec<Perm> = gens.iter().map(|w| self.image(w)).collect();
        let id = self.identity_perm();
        let mut set = BTreeSet::from([id.clone()]);
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for s in &gens {
                let y = compose(&x, s);
                if !set.contains(&y) {
                    if set.len() >= cap {
                        return None;
                    }
                    set.insert(y.clone());
                    queue.push(y);
                }
            }
        }
        Some(set)
    }

    /// The image of `g F_1 ... F_s` as a set, or `None` beyond `cap`.
    pub fn image_of(&self, z: &RationalSubset, cap: usize) -> Option<BTreeSet<Perm>> {
        let mut set = BTreeSet::from([self.image(&z.prefix)]);
        for f in &z.factors {
            let a = self.image_subgroup(&f.free_basis(), cap)?;
            let mut next = BTreeSet::new();
            for x in &set {
                for y in &a {
                    next.insert(compose(x, y));
                    if next.len() > cap {
                        return None;
                    }
                }
            }
            set = next;
        }
        Some(set)
    }

    /// Direct check that `phi(g)` is outside `phi(z)`. `None` means the image
    /// sets were too large to enumerate.
    pub fn separates(&self, g: &[Letter], z: &RationalSubset) -> Option<bool> {
        let x = compose(&invert(&self.image(&z.prefix)), &self.image(g));
        if z.factors.is_empty() {
            return Some(x != self.identity_perm());
        }
        if z.factors.len() == 1 {
            // A point fixed by the whole image subgroup but moved by x.
            let gens: Vec<Perm> = z.factors[0].free_basis().iter().map(|w| self.image(w)).collect();
            if (0..self.n).any(|p| x[p] as usize != p && gens.iter().all(|s| s[p] as usize == p)) {
                return Some(true);
            }
        }
        const CAP: usize = 200_000;
        let first = self.image_subgroup(&z.factors[0].free_basis(), CAP)?;
        let rest = RationalSubset::product(z.factors[1..].to_vec());
        let tail = self.image_of(&rest, CAP)?;
        Some(!first.iter().any(|a| tail.contains(&compose(&invert(a), &x))))
    }
}

/// How a separating quotient was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Completion,
    Exhaustive,
    Random,
    DisjointUnion,
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub quotient: FiniteQuotient,
    pub strategy: Strategy,
    /// Number of candidate homomorphisms examined.
    pub examined: usize,
    /// Outcome of the independent image computation.
    pub verified: bool,
}

/// Search limits for quotient searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Largest symmetric group degree (exhaustive and random phases use at
    /// most 8 points).
    pub n_max: usize,
    /// Maximum number of candidate homomorphisms.
    pub budget: usize,
    /// Number of random candidates after the exhaustive phase.
    pub random_tries: usize,
    pub seed: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { n_max: 6, budget: 2_000_000, random_tries: 20_000, seed: 0 }
    }
}

/// Extends the graph of `h` by the unread tail of `w` and completes every
/// partial permutation. The basepoint is fixed by the image of `h` and is
/// moved by the image of `w` whenever `w` is not in `h`.
pub fn completion(h: &StallingsGraph, w: &[Letter]) -> FiniteQuotient {
    let rank = h.rank();
    let mut out: Vec<Vec<Option<u32>>> = Vec::new();
    let mut inc: Vec<Vec<Option<u32>>> = Vec::new();
    for v in 0..h.len() as u32 {
        out.push((0..rank as u32).map(|g| h.step(v, Letter::pos(g))).collect());
        inc.push((0..rank as u32).map(|g| h.step(v, Letter::new(g, true))).collect());
    }
    let w = free_mul(&[], w);
    if let ReadOutcome::Stuck { vertex, at } = h.read_from(0, &w) {
        let mut cur = vertex;
        for &l in &w[at..] {
            let fresh = out.len() as u32;
            out.push(vec![None; rank]);
            inc.push(vec![None; rank]);
            let (s, t) = if l.inv { (fresh, cur) } else { (cur, fresh) };
            out[s as usize][l.gen as usize] = Some(t);
            inc[t as usize][l.gen as usize] = Some(s);
            cur = fresh;
        }
    }
    let n = out.len();
    let images = (0..rank)
        .map(|g| {
            let free_src: Vec<u32> = (0..n as u32).filter(|&v| out[v as usize][g].is_none()).collect();
            let free_dst: Vec<u32> = (0..n as u32).filter(|&v| inc[v as usize][g].is_none()).collect();
            let mut p: Vec<u32> = out.iter().map(|row| row[g].unwrap_or(u32::MAX)).collect();
            for (s, t) in free_src.into_iter().zip(free_dst) {
                p[s as usize] = t;
            }
            p
        })
        .collect();
    FiniteQuotient { n, images }
}

// Fast permutations on at most eight points, for the search phases.

const MAXP: usize = 8;
type P8 = [u8; MAXP];

fn p_id() -> P8 {
    std::array::from_fn(|i| i as u8)
}

fn p_mul(a: &P8, b: &P8, n: usize) -> P8 {
    let mut r = p_id();
    for x in 0..n {
        r[x] = b[a[x] as usize];
    }
    r
}

fn p_inv(a: &P8, n: usize) -> P8 {
    let mut r = p_id();
    for x in 0..n {
        r[a[x] as usize] = x as u8;
    }
    r
}

fn p_rank(a: &P8, n: usize) -> usize {
    let mut r = 0;
    for i in 0..n {
        let smaller = (i + 1..n).filter(|&j| a[j] < a[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn all_perms(n: usize) -> Vec<P8> {
    fn rec(n: usize, cur: &mut Vec<u8>, used: &mut [bool; MAXP], out: &mut Vec<P8>) {
        if cur.len() == n {
            let mut p = p_id();
            p[..n].copy_from_slice(cur);
            out.push(p);
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x as u8);
                rec(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::with_capacity(factorial(n));
    rec(n, &mut Vec::new(), &mut [false; MAXP], &mut out);
    out
}

/// One permutation per cycle type.
fn class_reps(n: usize) -> Vec<P8> {
    fn parts(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            parts(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut ps = Vec::new();
    parts(n, n, &mut Vec::new(), &mut ps);
    ps.into_iter()
        .map(|cycles| {
            let mut p = p_id();
            let mut start = 0;
            for len in cycles {
                for i in 0..len {
                    p[start + i] = (start + (i + 1) % len) as u8;
                }
                start += len;
            }
            p
        })
        .collect()
}

struct BitSet {
    bits: Vec<u64>,
    items: Vec<P8>,
}

impl BitSet {
    fn new(size: usize) -> Self {
        BitSet { bits: vec![0; size.div_ceil(64)], items: Vec::new() }
    }

    fn has(&self, r: usize) -> bool {
        self.bits[r / 64] >> (r % 64) & 1 == 1
    }

    fn insert(&mut self, p: P8, n: usize) -> bool {
        let r = p_rank(&p, n);
        if self.has(r) {
            return false;
        }
        self.bits[r / 64] |= 1 << (r % 64);
        self.items.push(p);
        true
    }
}

/// Separation problem: every word in `targets` must map outside the image
/// of `F_1 ... F_s` (prefixes already shifted away).
struct Problem {
    rank: usize,
    targets: Vec<Vec<Letter>>,
    factor_gens: Vec<Vec<Vec<Letter>>>,
}

impl Problem {
    fn image(&self, imgs: &[P8], w: &[Letter], n: usize) -> P8 {
        let mut x = p_id();
        for &l in w {
            let s = imgs[l.gen as usize];
            x = p_mul(&x, &if l.inv { p_inv(&s, n) } else { s }, n);
        }
        x
    }

    fn subgroup(&self, imgs: &[P8], gens: &[Vec<Letter>], n: usize) -> BitSet {
        let gs: Vec<P8> = gens.iter().map(|w| self.image(imgs, w, n)).collect();
        let mut set = BitSet::new(factorial(n));
        set.insert(p_id(), n);
        let mut i = 0;
        while i < set.items.len() {
            let x = set.items[i];
            for s in &gs {
                set.insert(p_mul(&x, s, n), n);
            }
            i += 1;
        }
        set
    }

    /// Whether the homomorphism given by `imgs` separates every target.
    fn separates(&self, imgs: &[P8], n: usize) -> bool {
        let xs: Vec<P8> = self.targets.iter().map(|w| self.image(imgs, w, n)).collect();
        if self.factor_gens.is_empty() {
            return xs.iter().all(|x| *x != p_id());
        }
        let groups: Vec<BitSet> = self.factor_gens.iter().map(|g| self.subgroup(imgs, g, n)).collect();
        // Right fold: P_k = A_k P_{k+1}, skipping repeated cosets of A_{k+1}.
        let s = groups.len();
        let mut tail: Option<BitSet> = None;
        for k in (1..s).rev() {
            let right = tail.as_ref().unwrap_or(&groups[k]);
            let mut covered = BitSet::new(factorial(n));
            let mut next = BitSet::new(factorial(n));
            for a in &groups[k - 1].items {
                if covered.has(p_rank(a, n)) {
                    continue;
                }
                for b in &groups[k].items {
                    covered.insert(p_mul(a, b, n), n);
                }
                for y in &right.items {
                    next.insert(p_mul(a, y, n), n);
                }
            }
            tail = Some(next);
        }
        let full = tail.as_ref().unwrap_or(&groups[0]);
        xs.iter().all(|x| !full.has(p_rank(x, n)))
    }
}

fn search(problem: &Problem, limits: &SearchLimits) -> (Option<(FiniteQuotient, Strategy)>, usize) {
    let n_top = limits.n_max.min(MAXP);
    let r = problem.rank;
    let mut examined = 0usize;
    let to_quotient = |imgs: &[P8], n: usize| FiniteQuotient {
        n,
        images: imgs.iter().map(|p| p[..n].iter().map(|&x| x as u32).collect()).collect(),
    };
    for n in 1..=n_top {
        let perms = all_perms(n);
        let reps = class_reps(n);
        let count = reps.len().saturating_mul(perms.len().saturating_pow(r.saturating_sub(1) as u32));
        if r == 0 || examined.saturating_add(count) > limits.budget {
            break;
        }
        let mut idx = vec![0usize; r];
        loop {
            let mut imgs = Vec::with_capacity(r);
            imgs.push(reps[idx[0]]);
            for &i in &idx[1..] {
                imgs.push(perms[i]);
            }
            examined += 1;
            if problem.separates(&imgs, n) {
                return (Some((to_quotient(&imgs, n), Strategy::Exhaustive)), examined);
            }
            // Odometer over (class rep, perm, ..., perm).
            let mut k = r - 1;
            loop {
                idx[k] += 1;
                let lim = if k == 0 { reps.len() } else { perms.len() };
                if idx[k] < lim {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    break;
                }
                k -= 1;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    if n_top >= 2 && r > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
        let tries = limits.random_tries.min(limits.budget.saturating_sub(examined));
        for _ in 0..tries {
            let n = rng.gen_range(2..=n_top);
            let imgs: Vec<P8> = (0..r)
                .map(|_| {
                    let mut p = p_id();
                    for i in (1..n).rev() {
                        p.swap(i, rng.gen_range(0..=i));
                    }
                    p
                })
                .collect();
            examined += 1;
            if problem.separates(&imgs, n) {
                return (Some((to_quotient(&imgs, n), Strategy::Random)), examined);
            }
        }
    }
    (None, examined)
}

fn check_free(group: &GroupSpec, z: &RationalSubset) -> Result<()> {
    if !group.is_free() {
        return Err(Error::WrongFamily { expected: "free", found: group.base().family_name() });
    }
    if z.factors.iter().any(|f| f.rank() != group.rank()) {
        return Err(Error::InvalidSpec("subgroup graph rank differs from the group rank".into()));
    }
    Ok(())
}

/// Finds `phi: F -> S_n` with `phi(g)` outside `phi(z)`.
///
/// Tries the completion of the subgroup graph (single factor), then every
/// homomorphism into `S_n` up to conjugacy for `n = 1, 2, ..., n_max`, then
/// random homomorphisms. The returned quotient is re-verified by computing
/// images directly.
pub fn find_separating_quotient(
    group: &GroupSpec,
    g: &Elem,
    z: &RationalSubset,
    limits: &SearchLimits,
) -> Result<Option<Separation>> {
    check_free(group, z)?;
    let w = group.free_word(g)?;
    if z.contains(w) {
        return Err(Error::Precondition("the element lies in the subset".into()));
    }
    let shifted = free_mul(&free_inv(&z.prefix), w);
    if z.factors.len() <= 1 {
        let h = z.factors.first().cloned().unwrap_or_else(|| super::stallings::subgroup_graph(group.rank(), &[]));
        let q = completion(&h, &shifted);
        if q.n <= limits.n_max {
            let verified = q.separates(w, z) == Some(true);
            return Ok(Some(Separation { quotient: q, strategy: Strategy::Completion, examined: 1, verified }));
        }
    }
    let problem = Problem {
        rank: group.rank(),
        targets: vec![shifted],
        factor_gens: z.factors.iter().map(|f| f.free_basis()).collect(),
    };
    let (found, examined) = search(&problem, limits);
    Ok(found.map(|(q, strategy)| {
        let verified = q.separates(w, z) == Some(true);
        Separation { quotient: q, strategy, examined, verified }
    }))
}

/// Result of the large-minx harness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinxHarness {
    pub c: usize,
    pub quotient: FiniteQuotient,
    pub strategy: Strategy,
    /// Radius of the verification ball.
    pub radius: usize,
    /// `minx(ZN \ Z)` within the ball; `None` is `+inf`.
    pub minx: Option<usize>,
    /// A shortest element of `ZN \ Z` in the ball.
    pub witness: Option<Vec<Letter>>,
    pub holds: bool,
}

/// Finds a finite quotient with kernel `N` such that `minx(ZN \ Z) >= c`.
///
/// Every element of length below `c` outside `Z` must map outside the
/// image of `Z`. A single homomorphism into `S_n` is searched first; if
/// none exists within the limits, separating quotients for the individual
/// elements are combined into one action on disjoint blocks. The answer is
/// checked by enumerating the ball of radius `c + 2` and computing
/// membership in `ZN` through images.
pub fn minx_quotient_harness(
    group: &GroupSpec,
    z: &RationalSubset,
    c: usize,
    limits: &SearchLimits,
) -> Result<MinxHarness> {
    check_free(group, z)?;
    let rank = group.rank();
    let short = if c == 0 { None } else { Some(build_ball(group, c - 1, limits.budget)?) };
    let outside: Vec<Vec<Letter>> = short
        .iter()
        .flat_map(|b| b.vertices().iter())
        .map(|g| group.free_word(g).map(|w| w.to_vec()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|w| !z.contains(w))
        .collect();
    let (quotient, strategy) = if outside.is_empty() {
        (FiniteQuotient::trivial(rank), Strategy::Trivial)
    } else {
        let problem = Problem {
            rank,
            targets: outside.iter().map(|w| free_mul(&free_inv(&z.prefix), w)).collect(),
            factor_gens: z.factors.iter().map(|f| f.free_basis()).collect(),
        };
        match search(&problem, limits).0 {
            Some(found) => found,
            None => {
                let mut parts: Vec<FiniteQuotient> = Vec::new();
                for w in &outside {
                    if parts.iter().any(|q| q.separates(w, z) == Some(true)) {
                        continue;
                    }
                    let g = Elem::Free(w.clone());
                    let sep = find_separating_quotient(group, &g, z, &SearchLimits { n_max: usize::MAX, ..*limits })?
                        .ok_or_else(|| Error::Budget {
                        budget: limits.budget,
                        context: "separating a short element from the subset".into(),
                    })?;
                    parts.push(sep.quotient);
                }
                (FiniteQuotient::disjoint_union(&parts)?, Strategy::DisjointUnion)
            }
        }
    };
    let radius = c + 2;
    let image = quotient
        .image_of(z, 200_000)
        .ok_or_else(|| Error::Budget { budget: 200_000, context: "enumerating the image of the subset".into() })?;
    let ball = build_ball(group, radius, limits.budget)?;
    let mut best: Option<(usize, Vec<Letter>)> = None;
    for (i, g) in ball.vertices().iter().enumerate() {
        let w = group.free_word(g)?;
        let in_zn = image.contains(&quotient.image(w));
        let in_z = z.contains(w);
        if in_z && !in_zn {
            return Err(Error::Precondition("image of Z does not contain Z".into()));
        }
        if in_zn && !in_z && best.as_ref().is_none_or(|(d, _)| ball.dist(i) < *d) {
            best = Some((ball.dist(i), w.to_vec()));
        }
    }
    let minx = best.as_ref().map(|(d, _)| *d);
    Ok(MinxHarness {
        c,
        quotient,
        strategy,
        radius,
        holds: minx.is_none_or(|d| d >= c),
        minx,
        witness: best.map(|(_, w)| w),
    })
}
