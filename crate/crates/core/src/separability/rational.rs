use serde::{Deserialize, Serialize};

use super::stallings::StallingsGraph;
use crate::groups::{free_inv, free_mul, Letter};

/// A subset `g F_1 ... F_s` of a free group, with each `F_i` given by its
/// Stallings graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalSubset {
    pub prefix: Vec<Letter>,
    pub factors: Vec<StallingsGraph>,
}

impl RationalSubset {
    pub fn new(prefix: Vec<Letter>, factors: Vec<StallingsGraph>) -> Self {
        RationalSubset { prefix: free_mul(&[], &prefix), factors }
    }

    pub fn product(factors: Vec<StallingsGraph>) -> Self {
        RationalSubset { prefix: Vec::new(), factors }
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        let shifted = free_mul(&free_inv(&self.prefix), &free_mul(&[], w));
        product_member(&shifted, &self.factors)
    }

    /// The saturated automaton of `F_1 ... F_s`.
    pub fn automaton(&self) -> ProductAutomaton {
        ProductAutomaton::new(&self.factors)
    }

    /// Precomputes the automaton for repeated membership queries.
    pub fn compile(&self) -> CompiledSubset {
        let test = match self.factors.as_slice() {
            [] => Test::Point,
            [h] => Test::Graph(h.clone()),
            fs => Test::Automaton(ProductAutomaton::new(fs)),
        };
        CompiledSubset { prefix_inv: free_inv(&self.prefix), test }
    }
}

#[derive(Debug, Clone)]
enum Test {
    Point,
    Graph(StallingsGraph),
    Automaton(ProductAutomaton),
}

/// A rational subset ready for repeated membership queries.
#[derive(Debug, Clone)]
pub struct CompiledSubset {
    prefix_inv: Vec<Letter>,
    test: Test,
}

impl CompiledSubset {
    pub fn contains(&self, w: &[Letter]) -> bool {
        let shifted = free_mul(&self.prefix_inv, &free_mul(&[], w));
        match &self.test {
            Test::Point => shifted.is_empty(),
            Test::Graph(h) => h.contains_word(&shifted),
            Test::Automaton(a) => a.accepts(&shifted),
        }
    }
}

type Bits = Vec<u64>;

fn bit(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn set(b: &mut Bits, i: usize) -> bool {
    let was = bit(b, i);
    b[i / 64] |= 1 << (i % 64);
    !was
}

/// Nondeterministic automaton for the product `F_1 ... F_s`: the disjoint
/// union of the factor graphs, with an ε-move from each basepoint to the
/// next, saturated with ε-moves `p -> q` whenever some path
/// `p -x-> r -x^-1-> q` exists (modulo ε-moves). After saturation it
/// accepts the reduced word of every element of the product.
#[derive(Debug, Clone)]
pub struct ProductAutomaton {
    n: usize,
    slots: usize,
    start: usize,
    accept: usize,
    /// `trans[p * slots + s]`: targets on reading the letter with slot `s`.
    trans: Vec<Vec<u32>>,
    /// Reflexive-transitive ε-closure, one bitset per state.
    closure: Vec<Bits>,
}

impl ProductAutomaton {
    pub fn new(factors: &[StallingsGraph]) -> Self {
        let rank = factors.iter().map(|f| f.rank()).max().unwrap_or(0);
        let slots = 2 * rank;
        let mut offsets = Vec::with_capacity(factors.len());
        let mut n = 0usize;
        for f in factors {
            offsets.push(n);
            n += f.len();
        }
        let n = n.max(1);
        let mut trans = vec![Vec::new(); n * slots];
        for (f, &off) in factors.iter().zip(&offsets) {
            for (u, g, v) in f.edges() {
                let (u, v) = (off + u as usize, off + v as usize);
                trans[u * slots + 2 * g as usize].push(v as u32);
                trans[v * slots + 2 * g as usize + 1].push(u as u32);
            }
        }
        let words = n.div_ceil(64);
        let mut eps: Vec<Bits> = vec![vec![0; words]; n];
        for i in 0..n {
            set(&mut eps[i], i);
        }
        for k in 1..offsets.len() {
            set(&mut eps[offsets[k - 1]], offsets[k]);
        }
        let accept = offsets.last().copied().unwrap_or(0);
        let mut a = ProductAutomaton { n, slots, start: 0, accept, trans, closure: Vec::new() };
        a.saturate(eps);
        a
    }

    fn close(&self, eps: &[Bits]) -> Vec<Bits> {
        let mut closure = eps.to_vec();
        loop {
            let mut changed = false;
            for p in 0..self.n {
                for q in 0..self.n {
                    if p != q && bit(&closure[p], q) {
                        let row = closure[q].clone();
                        for (x, y) in closure[p].iter_mut().zip(&row) {
                            if *x | y != *x {
                                *x |= y;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return closure;
            }
        }
    }

    fn saturate(&mut self, mut eps: Vec<Bits>) {
        loop {
            let closure = self.close(&eps);
            let mut changed = false;
            for p in 0..self.n {
                for p1 in (0..self.n).filter(|&i| bit(&closure[p], i)) {
                    for s in 0..self.slots {
                        for &r in &self.trans[p1 * self.slots + s] {
                            for r1 in (0..self.n).filter(|&i| bit(&closure[r as usize], i)) {
                                for &q in &self.trans[r1 * self.slots + (s ^ 1)] {
                                    if !bit(&closure[p], q as usize) {
                                        changed |= set(&mut eps[p], q as usize);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            if !changed {
                self.closure = closure;
                return;
            }
        }
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    /// Acceptance of a freely reduced word.
    pub fn accepts(&self, w: &[Letter]) -> bool {
        let words = self.n.div_ceil(64);
        let mut cur = self.closure[self.start].clone();
        for &l in w {
            let s = 2 * l.gen as usize + l.inv as usize;
            if s >= self.slots {
                return false;
            }
            let mut next = vec![0u64; words];
            for p in (0..self.n).filter(|&i| bit(&cur, i)) {
                for &t in &self.trans[p * self.slots + s] {
                    for (x, y) in next.iter_mut().zip(&self.closure[t as usize]) {
                        *x |= y;
                    }
                }
            }
            if next.iter().all(|&x| x == 0) {
                return false;
            }
            cur = next;
        }
        bit(&cur, self.accept)
    }
}

/// Whether the element `w` lies in the product `H_1 H_2 ... H_s`.
pub fn product_member(w: &[Letter], factors: &[StallingsGraph]) -> bool {
    let w = free_mul(&[], w);
    match factors {
        [] => w.is_empty(),
        [h] => h.contains_word(&w),
        _ => ProductAutomaton::new(factors).accepts(&w),
    }
}

#[cfg(test)]
mod tests {
    use super::super::stallings::subgroup_graph;
    use super::*;

    fn w(s: &str) -> Vec<Letter> {
        crate::groups::GenSet::standard(2).parse_word(s).unwrap()
    }

    #[test]
    fn cyclic_products() {
        let a = subgroup_graph(2, &[w("a")]);
        let b = subgroup_graph(2, &[w("b")]);
        let f = [a.clone(), b.clone()];
        assert!(product_member(&w("a b"), &f));
        assert!(product_member(&w("a^3 b^-2"), &f));
        assert!(!product_member(&w("b a"), &f));
        assert!(!product_member(&w("a b a b"), &f));
        assert!(product_member(&w("b a"), &[b, a]));
    }

    #[test]
    fn cancellation_between_factors() {
        // a b a^-1 b^-1 = (a b a^-1)(b^-1), first factor conjugate.
        let h = subgroup_graph(2, &[w("a b a^-1")]);
        let k = subgroup_graph(2, &[w("b")]);
        assert!(product_member(&w("a b a^-1 b^-1"), &[h.clone(), k.clone()]));
        // (a b a^-1)(b) (b^-1) ... identity is always in.
        assert!(product_member(&[], &[h.clone(), k.clone()]));
        // a = (a b a^-1) ... no.
        assert!(!product_member(&w("a"), &[h, k]));
        // Cancellation needed: (a b)(b^-1 a) with H=<ab>, K=<b^-1 a>.
        let h = subgroup_graph(2, &[w("a b")]);
        let k = subgroup_graph(2, &[w("b^-1 a")]);
        assert!(product_member(&w("a^2"), &[h, k]));
    }

    #[test]
    fn prefix_shift() {
        let a = subgroup_graph(2, &[w("a")]);
        let z = RationalSubset::new(w("b"), vec![a]);
        assert!(z.contains(&w("b a^4")));
        assert!(!z.contains(&w("a b")));
    }
}
