use serde::{Deserialize, Serialize};

use super::finite::FiniteGroup;
use crate::error::{Error, Result};

/// Which factor of `B *_D C` a syllable lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Amalgamated free product of two finite groups along isomorphic
/// subgroups.
///
/// Elements are stored in left-greedy reduced form `x_1 ... x_k`: every
/// syllable but the last is the least-index representative of its left
/// coset `x_i D`, and the last syllable carries the remaining edge-group
/// part. An element of `D` is a single left-side syllable; the identity is
/// the empty form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amalgam {
    left: FiniteGroup,
    right: FiniteGroup,
    to_right: Vec<Option<u32>>,
    to_left: Vec<Option<u32>>,
    left_rep: Vec<u32>,
    right_rep: Vec<u32>,
}

impl Amalgam {
    /// `pairs` are generating pairs `(d_left, d_right)`; the induced map
    /// must extend to an isomorphism between the generated subgroups.
    pub fn new(left: FiniteGroup, right: FiniteGroup, pairs: &[(u32, u32)]) -> Result<Self> {
        for &(l, r) in pairs {
            if !left.contains(l) || !right.contains(r) {
                return Err(Error::InvalidSpec(format!("edge pair ({l}, {r}) out of range")));
            }
        }
        let mut to_right = vec![None; left.order()];
        let mut to_left = vec![None; right.order()];
        to_right[left.identity() as usize] = Some(right.identity());
        to_left[right.identity() as usize] = Some(left.identity());
        let mut known = vec![(left.identity(), right.identity())];
        let mut i = 0;
        while i < known.len() {
            let (x, y) = known[i];
            for &(l, r) in pairs {
                let (nx, ny) = (left.mul(x, l), right.mul(y, r));
                match (to_right[nx as usize], to_left[ny as usize]) {
                    (None, None) => {
                        to_right[nx as usize] = Some(ny);
                        to_left[ny as usize] = Some(nx);
                        known.push((nx, ny));
                    }
                    (Some(a), Some(b)) if a == ny && b == nx => {}
                    _ => return Err(Error::InvalidSpec("edge pairs do not define an isomorphism of subgroups".into())),
                }
            }
            i += 1;
        }
        let rep = |g: &FiniteGroup, in_d: &Vec<Option<u32>>| -> Vec<u32> {
            let d: Vec<u32> = (0..g.order() as u32).filter(|&x| in_d[x as usize].is_some()).collect();
            (0..g.order() as u32).map(|x| d.iter().map(|&dd| g.mul(x, dd)).min().unwrap_or(x)).collect()
        };
        let left_rep = rep(&left, &to_right);
        let right_rep = rep(&right, &to_left);
        Ok(Amalgam { left, right, to_right, to_left, left_rep, right_rep })
    }

    pub fn factor(&self, side: Side) -> &FiniteGroup {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Is `x` (an element of the given factor) in the edge subgroup?
    pub fn in_edge(&self, side: Side, x: u32) -> bool {
        match side {
            Side::Left => self.to_right[x as usize].is_some(),
            Side::Right => self.to_left[x as usize].is_some(),
        }
    }

    /// Moves an edge-subgroup element to the other factor.
    pub fn transfer(&self, side: Side, x: u32) -> Option<u32> {
        match side {
            Side::Left => self.to_right[x as usize],
            Side::Right => self.to_left[x as usize],
        }
    }

    /// The edge subgroup as elements of the left factor.
    pub fn edge_elements(&self) -> Vec<u32> {
        (0..self.left.order() as u32).filter(|&x| self.to_right[x as usize].is_some()).collect()
    }

    /// The edge subgroup as (left, right) pairs.
    pub fn edge_pairs(&self) -> Vec<(u32, u32)> {
        self.edge_elements().into_iter().map(|x| (x, self.to_right[x as usize].unwrap())).collect()
    }

    fn coset_rep(&self, side: Side, x: u32) -> u32 {
        match side {
            Side::Left => self.left_rep[x as usize],
            Side::Right => self.right_rep[x as usize],
        }
    }

    fn push(&self, stack: &mut Vec<(Side, u32)>, side: Side, x: u32) {
        let f = self.factor(side);
        if x == f.identity() {
            return;
        }
        match stack.last().copied() {
            None => stack.push((side, x)),
            Some((tside, t)) => {
                if tside == side {
                    stack.pop();
                    self.push(stack, side, f.mul(t, x));
                } else if self.in_edge(side, x) {
                    let moved = self.transfer(side, x).unwrap();
                    stack.pop();
                    self.push(stack, tside, self.factor(tside).mul(t, moved));
                } else if self.in_edge(tside, t) {
                    // Only possible when the stack holds a lone edge element.
                    let moved = self.transfer(tside, t).unwrap();
                    stack.pop();
                    self.push(stack, side, f.mul(moved, x));
                } else {
                    stack.push((side, x));
                }
            }
        }
    }

    /// Reduces an arbitrary syllable sequence to the canonical form.
    pub fn normalize<I: IntoIterator<Item = (Side, u32)>>(&self, syllables: I) -> Vec<(Side, u32)> {
        let mut stack = Vec::new();
        for (side, x) in syllables {
            self.push(&mut stack, side, x);
        }
        if stack.len() == 1 {
            let (side, x) = stack[0];
            if side == Side::Right && self.in_edge(side, x) {
                stack[0] = (Side::Left, self.transfer(side, x).unwrap());
            }
            return stack;
        }
        for i in 0..stack.len().saturating_sub(1) {
            let (side, x) = stack[i];
            let f = self.factor(side);
            let r = self.coset_rep(side, x);
            let d = f.mul(f.inv(r), x);
            stack[i] = (side, r);
            let (nside, nx) = stack[i + 1];
            let moved = self.transfer(side, d).expect("coset remainder lies in D");
            stack[i + 1] = (nside, self.factor(nside).mul(moved, nx));
        }
        stack
    }

    pub fn mul(&self, a: &[(Side, u32)], b: &[(Side, u32)]) -> Vec<(Side, u32)> {
        self.normalize(a.iter().chain(b.iter()).copied())
    }

    pub fn inv(&self, a: &[(Side, u32)]) -> Vec<(Side, u32)> {
        self.normalize(a.iter().rev().map(|&(s, x)| (s, self.factor(s).inv(x))))
    }

    /// Checks that a syllable list is a canonical form.
    pub fn is_canonical(&self, a: &[(Side, u32)]) -> bool {
        self.normalize(a.iter().copied()) == a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z/4 *_{Z/2} Z/6 with b^2 = c^3.
    fn sl2z() -> Amalgam {
        Amalgam::new(FiniteGroup::cyclic(4).unwrap(), FiniteGroup::cyclic(6).unwrap(), &[(2, 3)]).unwrap()
    }

    #[test]
    fn edge_elements_identified() {
        let a = sl2z();
        assert_eq!(a.edge_pairs(), vec![(0, 0), (2, 3)]);
        // b^2 * c^3 = d * d = 1
        assert!(a.normalize([(Side::Left, 2), (Side::Right, 3)]).is_empty());
        // b * c stays length 2
        assert_eq!(a.normalize([(Side::Left, 1), (Side::Right, 1)]).len(), 2);
    }

    #[test]
    fn rejects_non_isomorphic_pairing() {
        // 2 in Z/4 has order 2, 1 in Z/6 has order 6.
        let r = Amalgam::new(FiniteGroup::cyclic(4).unwrap(), FiniteGroup::cyclic(6).unwrap(), &[(2, 1)]);
        assert!(r.is_err());
    }

    #[test]
    fn inverse_cancels() {
        let a = sl2z();
        let g = a.normalize([(Side::Right, 1), (Side::Left, 3), (Side::Right, 5)]);
        assert!(a.mul(&g, &a.inv(&g)).is_empty());
        assert!(a.is_canonical(&g));
    }
}
