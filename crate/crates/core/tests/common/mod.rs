//! Test-side oracles. Nothing here calls into the library's algorithms;
//! conversions to library types are kept at the edges.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use relsep::{Elem, GroupSpec, Letter};

/// Free-group words over `a = 1, b = 2, ...`, inverses negative.
pub mod free {
    use super::*;

    pub type W = Vec<i8>;

    pub fn reduce(w: &[i8]) -> W {
        let mut out: W = Vec::with_capacity(w.len());
        for &x in w {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        out
    }

    pub fn mul(a: &[i8], b: &[i8]) -> W {
        let mut out = a.to_vec();
        for &x in b {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        out
    }

    pub fn inv(a: &[i8]) -> W {
        a.iter().rev().map(|x| -x).collect()
    }

    pub fn dist(a: &[i8], b: &[i8]) -> usize {
        let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        a.len() + b.len() - 2 * common
    }

    pub fn letters(w: &[i8]) -> Vec<Letter> {
        w.iter().map(|&x| Letter::new(x.unsigned_abs() as u32 - 1, x < 0)).collect()
    }

    pub fn from_letters(w: &[Letter]) -> W {
        w.iter().map(|l| if l.inv { -(l.gen as i8 + 1) } else { l.gen as i8 + 1 }).collect()
    }

    pub fn elem(w: &[i8]) -> Elem {
        Elem::Free(letters(&reduce(w)))
    }

    pub fn of_elem(g: &Elem) -> W {
        match g {
            Elem::Free(w) => from_letters(w),
            other => panic!("not a free-group element: {other:?}"),
        }
    }

    /// Parses `a b^-1 a^3` over the alphabet `a, b, ...`.
    pub fn parse(s: &str) -> W {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<i32>().unwrap()),
                None => (tok, 1),
            };
            let g = (base.as_bytes()[0] - b'a' + 1) as i8;
            let x = if exp < 0 { -g } else { g };
            for _ in 0..exp.abs() {
                out.push(x);
            }
        }
        reduce(&out)
    }

    /// All reduced words of length at most `r`, shortest first.
    pub fn ball(rank: i8, r: usize) -> Vec<W> {
        let mut out = vec![Vec::new()];
        let mut start = 0;
        for _ in 0..r {
            let end = out.len();
            for i in start..end {
                for g in 1..=rank {
                    for x in [g, -g] {
                        if out[i].last() != Some(&-x) {
                            let mut w = out[i].clone();
                            w.push(x);
                            out.push(w);
                        }
                    }
                }
            }
            start = end;
        }
        out
    }
}

/// Subgroup membership in a free group by naive folding of a bouquet of
/// loops, written independently of the library.
#[derive(Debug, Clone)]
pub struct Folded {
    /// `edges[v]` maps a signed letter to the target vertex.
    edges: Vec<HashMap<i8, usize>>,
}

/// Appends a loop at `base` reading `w`.
fn loop_at(n: &mut usize, raw: &mut Vec<(usize, i8, usize)>, base: usize, w: &[i8]) {
    let mut cur = base;
    for (i, &x) in w.iter().enumerate() {
        let next = if i + 1 == w.len() {
            base
        } else {
            *n += 1;
            *n - 1
        };
        raw.push((cur, x, next));
        cur = next;
    }
}

/// Folds a labelled graph on `n` vertices. Returns the folded graph, with
/// vertices renumbered densely, and the image of each original vertex.
fn fold(n: usize, raw: &[(usize, i8, usize)]) -> (Folded, Vec<usize>) {
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let z = p[y];
            p[y] = r;
            y = z;
        }
        r
    }
    let mut parent: Vec<usize> = (0..n).collect();
    loop {
        let mut out: Vec<HashMap<i8, usize>> = vec![HashMap::new(); n];
        let mut merged = false;
        for &(u, x, v) in raw {
            for (s, l, t) in [(u, x, v), (v, -x, u)] {
                let (s, t) = (find(&mut parent, s), find(&mut parent, t));
                match out[s].get(&l).copied() {
                    Some(t2) => {
                        let t2 = find(&mut parent, t2);
                        if t2 != t {
                            let (lo, hi) = (t.min(t2), t.max(t2));
                            parent[hi] = lo;
                            merged = true;
                        }
                    }
                    None => {
                        out[s].insert(l, t);
                    }
                }
            }
        }
        if !merged {
            let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
            let mut dense = vec![usize::MAX; n];
            let mut next = 0;
            for &r in &roots {
                if dense[r] == usize::MAX {
                    dense[r] = next;
                    next += 1;
                }
            }
            let mut edges = vec![HashMap::new(); next];
            for (v, m) in out.into_iter().enumerate() {
                for (l, t) in m {
                    edges[dense[roots[v]]].insert(l, dense[roots[t]]);
                }
            }
            let map = roots.iter().map(|&r| dense[r]).collect();
            return (Folded { edges }, map);
        }
    }
}

impl Folded {
    pub fn new(gens: &[free::W]) -> Self {
        let mut n = 1;
        let mut raw = Vec::new();
        for g in gens {
            loop_at(&mut n, &mut raw, 0, &free::reduce(g));
        }
        let (folded, map) = fold(n, &raw);
        assert_eq!(map[0], 0);
        folded
    }

    /// The folded graph of `H` with an arc reading `g` hanging at the
    /// basepoint, and the image of the arc's end. Reduced labels of paths
    /// from the basepoint to that end are exactly the coset `H g`.
    pub fn with_arc(gens: &[free::W], g: &[i8]) -> (Self, usize) {
        let g = free::reduce(g);
        let mut n = 1;
        let mut raw = Vec::new();
        for w in gens {
            loop_at(&mut n, &mut raw, 0, &free::reduce(w));
        }
        let mut cur = 0;
        for &x in &g {
            n += 1;
            raw.push((cur, x, n - 1));
            cur = n - 1;
        }
        let (folded, map) = fold(n, &raw);
        (folded, map[cur])
    }

    /// Whether the coset read from `0` to `end` in `coset` meets `H K`.
    ///
    /// A word lies in `H K` iff it splits as `x z` with `x` read from the
    /// basepoint to `v` in the graph of `H`, `z` read from `u` to the
    /// basepoint in the graph of `K`, and some word read from `v` and from
    /// `u` returns both to their basepoints.
    pub fn coset_meets_product(coset: &Folded, end: usize, h: &Folded, k: &Folded) -> bool {
        let mut joined = HashSet::from([(0usize, 0usize)]);
        let mut q = VecDeque::from([(0usize, 0usize)]);
        while let Some((v, u)) = q.pop_front() {
            for (x, &v2) in &h.edges[v] {
                if let Some(&u2) = k.edges[u].get(x) {
                    if joined.insert((v2, u2)) {
                        q.push_back((v2, u2));
                    }
                }
            }
        }
        let mut jumps: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(v, u) in &joined {
            jumps.entry(v).or_default().push(u);
        }
        // States (coset vertex, phase, vertex of H or K).
        let start = (0usize, false, 0usize);
        let mut seen = HashSet::from([start]);
        let mut q = VecDeque::from([start]);
        while let Some((c, in_k, v)) = q.pop_front() {
            if (c, in_k, v) == (end, true, 0) {
                return true;
            }
            let mut next = Vec::new();
            if !in_k {
                for &u in jumps.get(&v).into_iter().flatten() {
                    next.push((c, true, u));
                }
            }
            let g = if in_k { k } else { h };
            for (x, &c2) in &coset.edges[c] {
                if let Some(&v2) = g.edges[v].get(x) {
                    next.push((c2, in_k, v2));
                }
            }
            for st in next {
                if seen.insert(st) {
                    q.push_back(st);
                }
            }
        }
        false
    }

    pub fn contains(&self, w: &[i8]) -> bool {
        let w = free::reduce(w);
        let mut v = 0;
        for x in w {
            match self.edges[v].get(&x) {
                Some(&t) => v = t,
                None => return false,
            }
        }
        v == 0
    }

    pub fn num_vertices(&self) -> usize {
        self.edges.iter().filter(|m| !m.is_empty()).count().max(1)
    }
}

/// Exact membership `g ∈ H_1 ... H_s` for `s <= 3`: the coset `H_1 g`
/// must meet `H_2 H_3`.
pub fn product_member(g: &[i8], factors: &[Vec<free::W>]) -> bool {
    let (head, h, k): (&[free::W], _, _) = match factors {
        [] => return free::reduce(g).is_empty(),
        [h] => return Folded::new(h).contains(g),
        [h, k] => (&[], h, k),
        [first, h, k] => (first, h, k),
        _ => panic!("at most three factors"),
    };
    let (coset, end) = Folded::with_arc(head, g);
    Folded::coset_meets_product(&coset, end, &Folded::new(h), &Folded::new(k))
}

/// Permutation actions on points `0..n`, right action `i · w`.
pub mod perm {
    use super::*;

    pub type P = Vec<u32>;

    /// The map `i ↦ i · w` for generator images `gens[g]`.
    pub fn act(gens: &[Vec<u32>], w: &[i8]) -> P {
        let n = gens.first().map_or(0, |g| g.len());
        let invs: Vec<P> = gens
            .iter()
            .map(|g| {
                let mut inv = vec![0u32; n];
                for (i, &j) in g.iter().enumerate() {
                    inv[j as usize] = i as u32;
                }
                inv
            })
            .collect();
        (0..n as u32)
            .map(|mut i| {
                for &x in w {
                    let g = x.unsigned_abs() as usize - 1;
                    i = if x > 0 { gens[g][i as usize] } else { invs[g][i as usize] };
                }
                i
            })
            .collect()
    }

    /// `a` then `b`.
    pub fn then(a: &P, b: &P) -> P {
        a.iter().map(|&i| b[i as usize]).collect()
    }

    /// Closure of the maps of `words` under composition.
    pub fn generated(gens: &[Vec<u32>], words: &[free::W]) -> HashSet<P> {
        let n = gens.first().map_or(0, |g| g.len());
        let id: P = (0..n as u32).collect();
        let ss: Vec<P> = words.iter().map(|w| act(gens, w)).collect();
        let mut set = HashSet::from([id.clone()]);
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for s in &ss {
                let y = then(&x, s);
                if set.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        set
    }

    /// Maps of `h_1 h_2 ... h_s`, `h_i` in the subgroup generated by
    /// `factors[i]`.
    pub fn product(gens: &[Vec<u32>], factors: &[Vec<free::W>]) -> HashSet<P> {
        let n = gens.first().map_or(0, |g| g.len());
        let mut acc: HashSet<P> = HashSet::from([(0..n as u32).collect()]);
        for f in factors {
            let h = generated(gens, f);
            acc = acc.iter().flat_map(|a| h.iter().map(move |b| then(a, b))).collect();
        }
        acc
    }
}

/// The symmetric group on six points with a full multiplication table.
pub struct S6 {
    pub perms: Vec<[u8; 6]>,
    /// `table[i * 720 + j]`: `perms[i]` then `perms[j]`.
    table: Vec<u16>,
    inv: Vec<u16>,
}

impl S6 {
    pub fn new() -> Self {
        let mut perms = Vec::with_capacity(720);
        fn rec(cur: &mut Vec<u8>, used: &mut [bool; 6], out: &mut Vec<[u8; 6]>) {
            if cur.len() == 6 {
                out.push(cur.as_slice().try_into().unwrap());
                return;
            }
            for i in 0..6 {
                if !used[i] {
                    used[i] = true;
                    cur.push(i as u8);
                    rec(cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(&mut Vec::new(), &mut [false; 6], &mut perms);
        let index: HashMap<[u8; 6], u16> = perms.iter().enumerate().map(|(i, p)| (*p, i as u16)).collect();
        let mut table = vec![0u16; 720 * 720];
        let mut inv = vec![0u16; 720];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                let r: [u8; 6] = std::array::from_fn(|k| q[p[k] as usize]);
                table[i * 720 + j] = index[&r];
            }
            let mut r = [0u8; 6];
            for k in 0..6 {
                r[p[k] as usize] = k as u8;
            }
            inv[i] = index[&r];
        }
        S6 { perms, table, inv }
    }

    pub fn then(&self, a: u16, b: u16) -> u16 {
        self.table[a as usize * 720 + b as usize]
    }

    /// Right action of a word for generator images `gens`.
    pub fn word(&self, gens: &[u16], w: &[i8]) -> u16 {
        w.iter().fold(0, |acc, &x| {
            let g = gens[x.unsigned_abs() as usize - 1];
            self.then(acc, if x > 0 { g } else { self.inv[g as usize] })
        })
    }

    pub fn subgroup(&self, gens: &[u16], words: &[free::W]) -> Vec<bool> {
        let ss: Vec<u16> = words.iter().map(|w| self.word(gens, w)).collect();
        let mut set = vec![false; 720];
        set[0] = true;
        let mut stack = vec![0u16];
        while let Some(x) = stack.pop() {
            for &s in &ss {
                let y = self.then(x, s);
                if !set[y as usize] {
                    set[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        set
    }

    /// Whether some action of `F(a, b)` on at most six points maps `g`
    /// outside the product of the images of the subgroups.
    pub fn separates_some(&self, g: &[i8], factors: &[Vec<free::W>]) -> bool {
        // One first image per cycle type suffices up to conjugacy; perms[0]
        // is the identity.
        let mut types = HashSet::new();
        for a in 0..720u16 {
            if !types.insert(self.cycle_type(a)) {
                continue;
            }
            for b in 0..720u16 {
                let gens = [a, b];
                let x = self.word(&gens, g);
                let hs: Vec<Vec<u16>> = factors
                    .iter()
                    .map(|f| {
                        self.subgroup(&gens, f).iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i as u16).collect()
                    })
                    .collect();
                let mut reach = vec![false; 720];
                reach[0] = true;
                for h in &hs {
                    let mut next = vec![false; 720];
                    for p in (0..720).filter(|&p| reach[p]) {
                        for &y in h {
                            next[self.then(p as u16, y) as usize] = true;
                        }
                    }
                    reach = next;
                }
                if !reach[x as usize] {
                    return true;
                }
            }
        }
        false
    }

    fn cycle_type(&self, a: u16) -> Vec<usize> {
        let p = self.perms[a as usize];
        let mut seen = [false; 6];
        let mut out = Vec::new();
        for i in 0..6 {
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = p[j] as usize;
                len += 1;
            }
            if len > 0 {
                out.push(len);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Breadth-first distances in a finite graph given by adjacency lists.
pub fn bfs(adj: &[Vec<u32>], src: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; adj.len()];
    d[src] = 0;
    let mut q = VecDeque::from([src]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if d[w as usize] == u32::MAX {
                d[w as usize] = d[v] + 1;
                q.push_back(w as usize);
            }
        }
    }
    d
}

/// A group model for the coned-graph oracle.
pub trait Model {
    type E: Clone + Eq + Hash;
    fn id(&self) -> Self::E;
    /// Generators and their inverses, with the library letter.
    fn gens(&self) -> Vec<(Letter, Self::E)>;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Nontrivial peripheral elements with `|h|_X <= max`, with index ν.
    fn peripheral(&self, max: usize) -> Vec<(usize, Self::E)>;
    /// Is `a^-1 b` in `H_ν`?
    fn same_coset(&self, nu: usize, a: &Self::E, b: &Self::E) -> bool;
}

/// The truncated coned-off Cayley graph on the word ball of radius `r`,
/// with peripheral edges of word length at most `h_max`.
pub struct Coned<M: Model> {
    pub vertices: Vec<M::E>,
    pub words: Vec<Vec<Letter>>,
    pub word_len: Vec<usize>,
    pub adj: Vec<Vec<u32>>,
}

impl<M: Model> Coned<M> {
    pub fn new(m: &M, r: usize, h_max: usize) -> Self {
        let gens = m.gens();
        let mut vertices = vec![m.id()];
        let mut words = vec![Vec::new()];
        let mut word_len = vec![0];
        let mut index: HashMap<M::E, u32> = HashMap::from([(m.id(), 0)]);
        let mut q = VecDeque::from([0usize]);
        while let Some(v) = q.pop_front() {
            if word_len[v] == r {
                continue;
            }
            for (l, s) in &gens {
                let w = m.mul(&vertices[v], s);
                if !index.contains_key(&w) {
                    index.insert(w.clone(), vertices.len() as u32);
                    let mut word = words[v].clone();
                    word.push(*l);
                    words.push(word);
                    word_len.push(word_len[v] + 1);
                    vertices.push(w);
                    q.push_back(vertices.len() - 1);
                }
            }
        }
        let hs = m.peripheral(h_max);
        let mut adj = vec![Vec::new(); vertices.len()];
        for (v, x) in vertices.iter().enumerate() {
            for (_, s) in &gens {
                if let Some(&w) = index.get(&m.mul(x, s)) {
                    adj[v].push(w);
                }
            }
            for (_, h) in &hs {
                if let Some(&w) = index.get(&m.mul(x, h)) {
                    adj[v].push(w);
                }
            }
            adj[v].sort_unstable();
            adj[v].dedup();
        }
        Coned { vertices, words, word_len, adj }
    }
}

/// `F(a, b)` relative to `<a>`.
pub struct FreeRelA;

impl Model for FreeRelA {
    type E = free::W;
    fn id(&self) -> free::W {
        Vec::new()
    }
    fn gens(&self) -> Vec<(Letter, free::W)> {
        vec![
            (Letter::new(0, false), vec![1]),
            (Letter::new(0, true), vec![-1]),
            (Letter::new(1, false), vec![2]),
            (Letter::new(1, true), vec![-2]),
        ]
    }
    fn mul(&self, a: &free::W, b: &free::W) -> free::W {
        free::mul(a, b)
    }
    fn peripheral(&self, max: usize) -> Vec<(usize, free::W)> {
        (1..=max as i32).flat_map(|k| [vec![1i8; k as usize], vec![-1i8; k as usize]]).map(|w| (0, w)).collect()
    }
    fn same_coset(&self, _nu: usize, a: &free::W, b: &free::W) -> bool {
        free::mul(&free::inv(a), b).iter().all(|&x| x.abs() == 1)
    }
}

/// A syllable of `Z^2 * Z`: `(x, y)` in the first factor or `t^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Syl {
    A(i64, i64),
    T(i64),
}

/// `Z^2 * Z = <x, y> * <t>` relative to both factors.
pub struct Z2StarZ;

impl Z2StarZ {
    fn push(out: &mut Vec<Syl>, s: Syl) {
        match (out.last_mut(), s) {
            (Some(Syl::A(x, y)), Syl::A(u, v)) => {
                *x += u;
                *y += v;
                if *x == 0 && *y == 0 {
                    out.pop();
                }
            }
            (Some(Syl::T(k)), Syl::T(j)) => {
                *k += j;
                if *k == 0 {
                    out.pop();
                }
            }
            _ => {
                if s != Syl::A(0, 0) && s != Syl::T(0) {
                    out.push(s)
                }
            }
        }
    }

    pub fn word_len(e: &[Syl]) -> usize {
        e.iter()
            .map(|s| match s {
                Syl::A(x, y) => (x.abs() + y.abs()) as usize,
                Syl::T(k) => k.unsigned_abs() as usize,
            })
            .sum()
    }
}

impl Model for Z2StarZ {
    type E = Vec<Syl>;
    fn id(&self) -> Vec<Syl> {
        Vec::new()
    }
    fn gens(&self) -> Vec<(Letter, Vec<Syl>)> {
        vec![
            (Letter::new(0, false), vec![Syl::A(1, 0)]),
            (Letter::new(0, true), vec![Syl::A(-1, 0)]),
            (Letter::new(1, false), vec![Syl::A(0, 1)]),
            (Letter::new(1, true), vec![Syl::A(0, -1)]),
            (Letter::new(2, false), vec![Syl::T(1)]),
            (Letter::new(2, true), vec![Syl::T(-1)]),
        ]
    }
    fn mul(&self, a: &Vec<Syl>, b: &Vec<Syl>) -> Vec<Syl> {
        let mut out = a.clone();
        for &s in b {
            Self::push(&mut out, s);
        }
        out
    }
    fn peripheral(&self, max: usize) -> Vec<(usize, Vec<Syl>)> {
        let m = max as i64;
        let mut out = Vec::new();
        for x in -m..=m {
            for y in -m..=m {
                if (x, y) != (0, 0) && x.abs() + y.abs() <= m {
                    out.push((0, vec![Syl::A(x, y)]));
                }
            }
        }
        for k in 1..=m {
            out.push((1, vec![Syl::T(k)]));
            out.push((1, vec![Syl::T(-k)]));
        }
        out
    }
    fn same_coset(&self, nu: usize, a: &Vec<Syl>, b: &Vec<Syl>) -> bool {
        let inv: Vec<Syl> = a
            .iter()
            .rev()
            .map(|s| match *s {
                Syl::A(x, y) => Syl::A(-x, -y),
                Syl::T(k) => Syl::T(-k),
            })
            .collect();
        let d = self.mul(&inv, b);
        match d.as_slice() {
            [] => true,
            [Syl::A(..)] => nu == 0,
            [Syl::T(_)] => nu == 1,
            _ => false,
        }
    }
}

/// `SL(2, Z)` matrices.
pub mod sl2z {
    pub type M = [[i64; 2]; 2];

    pub const ID: M = [[1, 0], [0, 1]];
    /// Order 4.
    pub const B: M = [[0, -1], [1, 0]];
    /// Order 6, with `B^2 = C^3 = -I`.
    pub const C: M = [[0, -1], [1, 1]];

    pub fn mul(a: &M, b: &M) -> M {
        let mut c = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    }

    pub fn pow(a: &M, k: u32) -> M {
        (0..k).fold(ID, |acc, _| mul(&acc, a))
    }
}

/// Library group helpers shared by the test targets.
pub fn f2() -> GroupSpec {
    GroupSpec::free(2)
}
