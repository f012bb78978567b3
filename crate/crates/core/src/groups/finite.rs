use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group given by its multiplication table, together with a list
/// of distinguished generators (element indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
    gens: Vec<u32>,
    /// Word length of every element with respect to `gens`.
    dist: Vec<u32>,
}

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table. The table is
    /// checked for closure, identity, inverses and associativity, and the
    /// generators must generate the whole group.
    pub fn from_table(table: Vec<Vec<u32>>, identity: u32, gens: Vec<u32>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidSpec("empty multiplication table".into()));
        }
        if table.iter().any(|row| row.len() != order) {
            return Err(Error::InvalidSpec("multiplication table is not square".into()));
        }
        if identity as usize >= order {
            return Err(Error::InvalidSpec("identity index out of range".into()));
        }
        let flat: Vec<u32> = table.into_iter().flatten().collect();
        if flat.iter().any(|&x| x as usize >= order) {
            return Err(Error::InvalidSpec("table entry out of range".into()));
        }
        let m = |a: usize, b: usize| flat[a * order + b] as usize;
        let e = identity as usize;
        for a in 0..order {
            if m(a, e) != a || m(e, a) != a {
                return Err(Error::InvalidSpec(format!("{identity} is not an identity")));
            }
        }
        let mut inverse = vec![u32::MAX; order];
        for a in 0..order {
            match (0..order).find(|&b| m(a, b) == e && m(b, a) == e) {
                Some(b) => inverse[a] = b as u32,
                None => return Err(Error::InvalidSpec(format!("element {a} has no inverse"))),
            }
        }
        // Full associativity check is cubic; sample a fixed grid once the
        // group is large.
        let step = if order <= 64 { 1 } else { order / 32 + 1 };
        for a in (0..order).step_by(step) {
            for b in 0..order {
                for c in (0..order).step_by(step) {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::InvalidSpec(format!("table is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        if gens.iter().any(|&g| g as usize >= order) {
            return Err(Error::InvalidSpec("generator index out of range".into()));
        }
        let mut g = FiniteGroup { order, table: flat, identity, inverse, gens, dist: Vec::new() };
        g.dist = g.bfs_lengths();
        if g.dist.contains(&u32::MAX) {
            return Err(Error::InvalidSpec("generators do not generate the group".into()));
        }
        Ok(g)
    }

    /// The cyclic group of order `n` with generator 1 and identity 0.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| ((a + b) % n) as u32).collect()).collect();
        let gens = if n == 1 { vec![0] } else { vec![1] };
        Self::from_table(table, 0, gens)
    }

    fn bfs_lengths(&self) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.order];
        let mut queue = VecDeque::new();
        dist[self.identity as usize] = 0;
        queue.push_back(self.identity);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x as usize];
            for &s in &self.gens {
                for y in [self.mul(x, s), self.mul(x, self.inverse[s as usize])] {
                    if dist[y as usize] == u32::MAX {
                        dist[y as usize] = dx + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        dist
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn gens(&self) -> &[u32] {
        &self.gens
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn word_length(&self, a: u32) -> u32 {
        self.dist[a as usize]
    }

    pub fn contains(&self, a: u32) -> bool {
        (a as usize) < self.order
    }

    /// Subgroup generated by `gens`, as a sorted list of element indices.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order];
        let mut out = vec![self.identity];
        seen[self.identity as usize] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Order of an element.
    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Lexicographically least geodesic word for `a`, as a list of
    /// `(generator position, inverted)` pairs.
    pub fn geodesic_word(&self, a: u32) -> Vec<(usize, bool)> {
        let mut out = Vec::with_capacity(self.dist[a as usize] as usize);
        let mut cur = a;
        while cur != self.identity {
            let d = self.dist[cur as usize];
            let mut stepped = false;
            'search: for (i, &s) in self.gens.iter().enumerate() {
                for inv in [false, true] {
                    let letter = if inv { self.inverse[s as usize] } else { s };
                    // cur = letter * rest
                    let rest = self.mul(self.inverse[letter as usize], cur);
                    if self.dist[rest as usize] + 1 == d {
                        out.push((i, inv));
                        cur = rest;
                        stepped = true;
                        break 'search;
                    }
                }
            }
            debug_assert!(stepped);
        }
        out
    }
}
