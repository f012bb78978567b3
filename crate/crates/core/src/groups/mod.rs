//! Whitelisted group families with exact arithmetic.
//!
//! Every family has a unique normal form, so two [`Elem`]s are equal as
//! group elements exactly when they are equal as values.

mod amalgam;
mod finite;

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use amalgam::{Amalgam, Side};
pub use finite::FiniteGroup;

/// Default vertex budget for breadth-first searches.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// A generator or its formal inverse. The derived order is the generator
/// order `s_1 < s_1^-1 < s_2 < s_2^-1 < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: u32, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn pos(gen: u32) -> Self {
        Letter { gen, inv: false }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }
}

/// Ordered generator names; formal inverses are implied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSet {
    names: Vec<String>,
}

impl GenSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(char::is_whitespace) || n.contains('^') || n == "1" {
                return Err(Error::InvalidSpec(format!("bad generator name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidSpec(format!("duplicate generator `{n}`")));
            }
        }
        Ok(GenSet { names })
    }

    /// Default names `a, b, c, ...` (then `x0, x1, ...`).
    pub fn standard(rank: usize) -> Self {
        let names = (0..rank)
            .map(|i| if rank <= 26 { ((b'a' + i as u8) as char).to_string() } else { format!("x{i}") })
            .collect();
        GenSet { names }
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

    pub fn index(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    /// All letters in generator order.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.names.len() as u32).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect()
    }

    /// Parses a whitespace-separated word such as `a b^-1 a^3`. The token
    /// `1` denotes the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| Error::UnknownLetter(tok.to_string()))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let gen = self.index(name).ok_or_else(|| Error::UnknownLetter(name.to_string()))?;
            let l = Letter::new(gen, exp < 0);
            out.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(out)
    }

    pub fn format_letter(&self, l: Letter) -> String {
        let name = self.names.get(l.gen as usize).map(String::as_str).unwrap_or("?");
        if l.inv {
            format!("{name}^-1")
        } else {
            name.to_string()
        }
    }

    /// Formats a word, collapsing runs into powers.
    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let name = &self.names[w[i].gen as usize];
            let e = (j - i) as i64 * if w[i].inv { -1 } else { 1 };
            parts.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
            i = j;
        }
        parts.join(" ")
    }
}

/// Normal form of a group element. The variant is determined by the
/// family of the ambient group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Elem {
    /// Freely reduced word.
    Free(Vec<Letter>),
    /// Exponent vector.
    Abelian(Vec<i64>),
    /// Index into the multiplication table.
    Finite(u32),
    /// Alternating list of nontrivial syllables `(factor, element)`.
    Product(Vec<(usize, Elem)>),
    /// Canonical reduced form in an amalgam.
    Amalgam(Vec<(Side, u32)>),
}

impl Elem {
    fn kind(&self) -> &'static str {
        match self {
            Elem::Free(_) => "free",
            Elem::Abelian(_) => "free abelian",
            Elem::Finite(_) => "finite",
            Elem::Product(_) => "free product",
            Elem::Amalgam(_) => "amalgam",
        }
    }
}

/// Which subgroup of the base a peripheral designates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PeripheralSpec {
    /// The `factor`-th free factor of a free-product base.
    FreeFactor { factor: usize },
    /// The cyclic subgroup generated by one basis generator of a free base.
    CyclicGenerator { generator: u32 },
    /// The whole base group.
    WholeGroup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Free,
    FreeAbelian,
    Finite(FiniteGroup),
    FreeProduct(Vec<GroupSpec>),
    Amalgam(Box<Amalgam>),
    RelHyp { base: Box<GroupSpec>, peripherals: Vec<PeripheralSpec> },
}

/// A whitelisted group with its generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    family: Family,
    gens: GenSet,
    /// For free products: (factor, local generator) of each global generator.
    letter_map: Vec<(usize, u32)>,
}

impl GroupSpec {
    pub fn free(rank: usize) -> Self {
        Self::free_named(GenSet::standard(rank))
    }

    pub fn free_named(gens: GenSet) -> Self {
        GroupSpec { family: Family::Free, gens, letter_map: Vec::new() }
    }

    pub fn free_abelian(gens: GenSet) -> Self {
        GroupSpec { family: Family::FreeAbelian, gens, letter_map: Vec::new() }
    }

    /// A finite group; `names` label the group's distinguished generators.
    pub fn finite(group: FiniteGroup, names: GenSet) -> Result<Self> {
        if names.len() != group.gens().len() {
            return Err(Error::InvalidSpec("generator names do not match generator list".into()));
        }
        Ok(GroupSpec { family: Family::Finite(group), gens: names, letter_map: Vec::new() })
    }

    pub fn free_product(factors: Vec<GroupSpec>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::InvalidSpec("a free product needs at least two factors".into()));
        }
        let mut names = Vec::new();
        let mut letter_map = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            if matches!(f.family, Family::RelHyp { .. }) {
                return Err(Error::InvalidSpec("free factors cannot carry peripheral structure".into()));
            }
            for (j, n) in f.gens.names().iter().enumerate() {
                names.push(n.clone());
                letter_map.push((i, j as u32));
            }
        }
        let gens = GenSet::new(names)?;
        Ok(GroupSpec { family: Family::FreeProduct(factors), gens, letter_map })
    }

    /// `B *_D C` for finite factors. Generators are the left factor's
    /// followed by the right factor's.
    pub fn amalgam(left: GroupSpec, right: GroupSpec, pairs: &[(u32, u32)]) -> Result<Self> {
        let (Family::Finite(l), Family::Finite(r)) = (&left.family, &right.family) else {
            return Err(Error::Unsupported("amalgams are supported for finite factors only".into()));
        };
        let am = Amalgam::new(l.clone(), r.clone(), pairs)?;
        let names: Vec<String> = left.gens.names().iter().chain(right.gens.names()).cloned().collect();
        let gens = GenSet::new(names)?;
        let mut letter_map: Vec<(usize, u32)> = (0..left.gens.len() as u32).map(|j| (0, j)).collect();
        letter_map.extend((0..right.gens.len() as u32).map(|j| (1, j)));
        Ok(GroupSpec { family: Family::Amalgam(Box::new(am)), gens, letter_map })
    }

    /// Attaches a peripheral structure. Only the whitelisted combinations
    /// are accepted.
    pub fn rel_hyp(base: GroupSpec, peripherals: Vec<PeripheralSpec>) -> Result<Self> {
        if matches!(base.family, Family::RelHyp { .. }) {
            return Err(Error::InvalidSpec("nested peripheral structures".into()));
        }
        let mut seen = Vec::new();
        for p in &peripherals {
            match (p, &base.family) {
                (PeripheralSpec::FreeFactor { factor }, Family::FreeProduct(fs)) => {
                    if *factor >= fs.len() {
                        return Err(Error::InvalidSpec(format!("no free factor {factor}")));
                    }
                }
                (PeripheralSpec::CyclicGenerator { generator }, Family::Free) => {
                    if *generator as usize >= base.gens.len() {
                        return Err(Error::InvalidSpec(format!("no generator {generator}")));
                    }
                }
                (PeripheralSpec::WholeGroup, _) => {
                    if peripherals.len() != 1 {
                        return Err(Error::Unsupported("a whole-group peripheral must be the only peripheral".into()));
                    }
                }
                (p, _) => return Err(Error::Unsupported(format!("peripheral {p:?} on a {} base", base.family_name()))),
            }
            if seen.contains(&p) {
                return Err(Error::InvalidSpec(format!("peripheral {p:?} listed twice")));
            }
            seen.push(p);
        }
        let gens = base.gens.clone();
        let letter_map = base.letter_map.clone();
        Ok(GroupSpec { family: Family::RelHyp { base: Box::new(base), peripherals }, gens, letter_map })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match &self.family {
            Family::Free => "free",
            Family::FreeAbelian => "free abelian",
            Family::Finite(_) => "finite",
            Family::FreeProduct(_) => "free product",
            Family::Amalgam(_) => "amalgam",
            Family::RelHyp { .. } => "relatively hyperbolic",
        }
    }

    pub fn gens(&self) -> &GenSet {
        &self.gens
    }

    /// The group with any peripheral structure stripped.
    pub fn base(&self) -> &GroupSpec {
        match &self.family {
            Family::RelHyp { base, .. } => base,
            _ => self,
        }
    }

    pub fn peripherals(&self) -> &[PeripheralSpec] {
        match &self.family {
            Family::RelHyp { peripherals, .. } => peripherals,
            _ => &[],
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self.base().family, Family::Free)
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// The multiplication table of a finite group (or finite base).
    pub fn finite_group(&self) -> Option<&FiniteGroup> {
        match &self.base().family {
            Family::Finite(f) => Some(f),
            _ => None,
        }
    }

    /// The amalgam data of an amalgamated product (or amalgam base).
    pub fn amalgam_data(&self) -> Option<&Amalgam> {
        match &self.base().family {
            Family::Amalgam(am) => Some(am),
            _ => None,
        }
    }

    /// The word of a free-group element; errors for other families.
    pub fn free_word<'a>(&self, g: &'a Elem) -> Result<&'a [Letter]> {
        match (&self.base().family, g) {
            (Family::Free, Elem::Free(w)) => Ok(w),
            (Family::Free, _) => Err(self.mismatch(g)),
            _ => Err(Error::WrongFamily { expected: "free", found: self.base().family_name() }),
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        self.gens.parse_word(text)
    }

    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let w = self.parse_word(text)?;
        self.word_to_elem(&w)
    }

    pub fn identity(&self) -> Elem {
        match &self.family {
            Family::Free => Elem::Free(Vec::new()),
            Family::FreeAbelian => Elem::Abelian(vec![0; self.gens.len()]),
            Family::Finite(g) => Elem::Finite(g.identity()),
            Family::FreeProduct(_) => Elem::Product(Vec::new()),
            Family::Amalgam(_) => Elem::Amalgam(Vec::new()),
            Family::RelHyp { base, .. } => base.identity(),
        }
    }

    pub fn is_identity(&self, g: &Elem) -> bool {
        *g == self.identity()
    }

    /// Checks that `g` is a well-formed normal form of this group.
    pub fn check(&self, g: &Elem) -> Result<()> {
        let ok = match (&self.family, g) {
            (Family::Free, Elem::Free(w)) => {
                w.iter().all(|l| (l.gen as usize) < self.gens.len()) && w.windows(2).all(|p| p[0] != p[1].inverse())
            }
            (Family::FreeAbelian, Elem::Abelian(v)) => v.len() == self.gens.len(),
            (Family::Finite(f), Elem::Finite(x)) => f.contains(*x),
            (Family::FreeProduct(fs), Elem::Product(syl)) => {
                let mut ok = syl.windows(2).all(|p| p[0].0 != p[1].0);
                for (i, x) in syl {
                    ok &= *i < fs.len() && fs[*i].check(x).is_ok() && !fs[*i].is_identity(x);
                }
                ok
            }
            (Family::Amalgam(am), Elem::Amalgam(syl)) => {
                syl.iter().all(|(s, x)| am.factor(*s).contains(*x)) && am.is_canonical(syl)
            }
            (Family::RelHyp { base, .. }, _) => return base.check(g),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::FamilyMismatch(format!("{} element in a {} group", g.kind(), self.family_name())))
        }
    }

    fn mismatch(&self, g: &Elem) -> Error {
        Error::FamilyMismatch(format!("{} element in a {} group", g.kind(), self.family_name()))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        match (&self.family, a, b) {
            (Family::Free, Elem::Free(x), Elem::Free(y)) => Ok(Elem::Free(free_mul(x, y))),
            (Family::FreeAbelian, Elem::Abelian(x), Elem::Abelian(y)) => {
                if x.len() != y.len() || x.len() != self.gens.len() {
                    return Err(self.mismatch(a));
                }
                Ok(Elem::Abelian(x.iter().zip(y).map(|(p, q)| p + q).collect()))
            }
            (Family::Finite(f), Elem::Finite(x), Elem::Finite(y)) => {
                if !f.contains(*x) || !f.contains(*y) {
                    return Err(self.mismatch(a));
                }
                Ok(Elem::Finite(f.mul(*x, *y)))
            }
            (Family::FreeProduct(fs), Elem::Product(x), Elem::Product(y)) => {
                let mut out = x.clone();
                for (i, s) in y {
                    push_syllable(fs, &mut out, *i, s.clone())?;
                }
                Ok(Elem::Product(out))
            }
            (Family::Amalgam(am), Elem::Amalgam(x), Elem::Amalgam(y)) => Ok(Elem::Amalgam(am.mul(x, y))),
            (Family::RelHyp { base, .. }, _, _) => base.mul(a, b),
            _ => Err(self.mismatch(if a.kind() == self.identity().kind() { b } else { a })),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        match (&self.family, a) {
            (Family::Free, Elem::Free(x)) => Ok(Elem::Free(free_inv(x))),
            (Family::FreeAbelian, Elem::Abelian(x)) => Ok(Elem::Abelian(x.iter().map(|v| -v).collect())),
            (Family::Finite(f), Elem::Finite(x)) if f.contains(*x) => Ok(Elem::Finite(f.inv(*x))),
            (Family::FreeProduct(fs), Elem::Product(x)) => {
                let mut out = Vec::with_capacity(x.len());
                for (i, s) in x.iter().rev() {
                    out.push((*i, fs[*i].inv(s)?));
                }
                Ok(Elem::Product(out))
            }
            (Family::Amalgam(am), Elem::Amalgam(x)) => Ok(Elem::Amalgam(am.inv(x))),
            (Family::RelHyp { base, .. }, _) => base.inv(a),
            _ => Err(self.mismatch(a)),
        }
    }

    /// `a^-1 b`.
    pub fn ldiv(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.mul(&self.inv(a)?, b)
    }

    pub fn pow(&self, a: &Elem, n: i64) -> Result<Elem> {
        let base = if n < 0 { self.inv(a)? } else { a.clone() };
        let mut out = self.identity();
        for _ in 0..n.unsigned_abs() {
            out = self.mul(&out, &base)?;
        }
        Ok(out)
    }

    pub fn letter_elem(&self, l: Letter) -> Result<Elem> {
        if l.gen as usize >= self.gens.len() {
            return Err(Error::UnknownLetter(format!("#{}", l.gen)));
        }
        let e = match &self.family {
            Family::Free => Elem::Free(vec![l]),
            Family::FreeAbelian => {
                let mut v = vec![0; self.gens.len()];
                v[l.gen as usize] = if l.inv { -1 } else { 1 };
                Elem::Abelian(v)
            }
            Family::Finite(f) => {
                let s = f.gens()[l.gen as usize];
                Elem::Finite(if l.inv { f.inv(s) } else { s })
            }
            Family::FreeProduct(fs) => {
                let (i, j) = self.letter_map[l.gen as usize];
                let x = fs[i].letter_elem(Letter::new(j, l.inv))?;
                if fs[i].is_identity(&x) {
                    Elem::Product(Vec::new())
                } else {
                    Elem::Product(vec![(i, x)])
                }
            }
            Family::Amalgam(am) => {
                let (i, j) = self.letter_map[l.gen as usize];
                let side = if i == 0 { Side::Left } else { Side::Right };
                let f = am.factor(side);
                let s = f.gens()[j as usize];
                Elem::Amalgam(am.normalize([(side, if l.inv { f.inv(s) } else { s })]))
            }
            Family::RelHyp { base, .. } => return base.letter_elem(l),
        };
        Ok(e)
    }

    pub fn word_to_elem(&self, w: &[Letter]) -> Result<Elem> {
        if let Family::Free = self.family {
            if let Some(l) = w.iter().find(|l| l.gen as usize >= self.gens.len()) {
                return Err(Error::UnknownLetter(format!("#{}", l.gen)));
            }
            return Ok(Elem::Free(free_mul(&[], w)));
        }
        let mut g = self.identity();
        for &l in w {
            g = self.mul(&g, &self.letter_elem(l)?)?;
        }
        Ok(g)
    }

    /// Syllable decomposition for free products and amalgams. In the
    /// amalgam case the factor index is 0 for the left and 1 for the right
    /// factor.
    pub fn syllables(&self, g: &Elem) -> Result<Vec<(usize, Elem)>> {
        match (&self.base().family, g) {
            (Family::FreeProduct(_), Elem::Product(s)) => Ok(s.clone()),
            (Family::Amalgam(_), Elem::Amalgam(s)) => {
                Ok(s.iter().map(|&(side, x)| (if side == Side::Left { 0 } else { 1 }, Elem::Finite(x))).collect())
            }
            (Family::FreeProduct(_) | Family::Amalgam(_), _) => Err(self.mismatch(g)),
            _ => Err(Error::WrongFamily { expected: "free product or amalgam", found: self.base().family_name() }),
        }
    }

    /// Embeds an element of free factor `i` into the free product.
    pub fn embed_factor(&self, i: usize, x: Elem) -> Result<Elem> {
        match &self.base().family {
            Family::FreeProduct(fs) => {
                let f = fs.get(i).ok_or_else(|| Error::InvalidSpec(format!("no factor {i}")))?;
                f.check(&x)?;
                Ok(Elem::Product(if f.is_identity(&x) { vec![] } else { vec![(i, x)] }))
            }
            _ => Err(Error::WrongFamily { expected: "free product", found: self.base().family_name() }),
        }
    }

    /// Word length `|g|_X`.
    pub fn word_length(&self, g: &Elem) -> Result<usize> {
        match (&self.family, g) {
            (Family::Free, Elem::Free(w)) => Ok(w.len()),
            (Family::FreeAbelian, Elem::Abelian(v)) => Ok(v.iter().map(|x| x.unsigned_abs() as usize).sum()),
            (Family::Finite(f), Elem::Finite(x)) if f.contains(*x) => Ok(f.word_length(*x) as usize),
            (Family::FreeProduct(fs), Elem::Product(s)) => {
                let mut total = 0;
                for (i, x) in s {
                    total += fs[*i].word_length(x)?;
                }
                Ok(total)
            }
            (Family::Amalgam(_), Elem::Amalgam(_)) => self.bfs_length(g, DEFAULT_BUDGET),
            (Family::RelHyp { base, .. }, _) => base.word_length(g),
            _ => Err(self.mismatch(g)),
        }
    }

    fn bfs_length(&self, target: &Elem, budget: usize) -> Result<usize> {
        let id = self.identity();
        if *target == id {
            return Ok(0);
        }
        let letters: Vec<Elem> = self.gens.letters().into_iter().map(|l| self.letter_elem(l)).collect::<Result<_>>()?;
        let mut dist: HashMap<Elem, usize> = HashMap::new();
        dist.insert(id.clone(), 0);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            for s in &letters {
                let y = self.mul(&x, s)?;
                if y == *target {
                    return Ok(dx + 1);
                }
                if !dist.contains_key(&y) {
                    if dist.len() >= budget {
                        return Err(Error::Budget { budget, context: "computing a word length".into() });
                    }
                    dist.insert(y.clone(), dx + 1);
                    queue.push_back(y);
                }
            }
        }
        Err(Error::FamilyMismatch("element not reachable from the generators".into()))
    }

    /// Lexicographically least geodesic word over `X^{±1}` for `g`.
    pub fn geodesic_word(&self, g: &Elem) -> Result<Vec<Letter>> {
        match (&self.family, g) {
            (Family::Free, Elem::Free(w)) => Ok(w.clone()),
            (Family::FreeAbelian, Elem::Abelian(v)) => {
                let mut w = Vec::new();
                for (i, &e) in v.iter().enumerate() {
                    let l = Letter::new(i as u32, e < 0);
                    w.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
                }
                Ok(w)
            }
            (Family::Finite(f), Elem::Finite(x)) if f.contains(*x) => {
                Ok(f.geodesic_word(*x).into_iter().map(|(i, inv)| Letter::new(i as u32, inv)).collect())
            }
            (Family::FreeProduct(fs), Elem::Product(s)) => {
                let offsets = self.factor_offsets();
                let mut w = Vec::new();
                for (i, x) in s {
                    for l in fs[*i].geodesic_word(x)? {
                        w.push(Letter::new(l.gen + offsets[*i], l.inv));
                    }
                }
                Ok(w)
            }
            (Family::Amalgam(_), Elem::Amalgam(_)) => self.greedy_geodesic(g),
            (Family::RelHyp { base, .. }, _) => base.geodesic_word(g),
            _ => Err(self.mismatch(g)),
        }
    }

    fn factor_offsets(&self) -> Vec<u32> {
        let mut offsets = Vec::new();
        let mut last = usize::MAX;
        for (k, &(i, _)) in self.letter_map.iter().enumerate() {
            if i != last {
                offsets.push(k as u32);
                last = i;
            }
        }
        offsets
    }

    fn greedy_geodesic(&self, g: &Elem) -> Result<Vec<Letter>> {
        let mut cur = g.clone();
        let mut d = self.word_length(&cur)?;
        let mut w = Vec::with_capacity(d);
        while d > 0 {
            let mut next = None;
            for l in self.gens.letters() {
                let rest = self.mul(&self.letter_elem(l.inverse())?, &cur)?;
                if self.word_length(&rest)? + 1 == d {
                    next = Some((l, rest));
                    break;
                }
            }
            let (l, rest) = next.expect("some letter decreases the length");
            w.push(l);
            cur = rest;
            d -= 1;
        }
        Ok(w)
    }

    pub fn format_elem(&self, g: &Elem) -> String {
        match self.geodesic_word(g) {
            Ok(w) => self.gens.format_word(&w),
            Err(_) => format!("{g:?}"),
        }
    }
}

/// Free reduction of the concatenation `x y`.
pub fn free_mul(x: &[Letter], y: &[Letter]) -> Vec<Letter> {
    let mut out = x.to_vec();
    for &l in y {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn free_inv(x: &[Letter]) -> Vec<Letter> {
    x.iter().rev().map(|l| l.inverse()).collect()
}

fn push_syllable(fs: &[GroupSpec], out: &mut Vec<(usize, Elem)>, i: usize, x: Elem) -> Result<()> {
    if i >= fs.len() {
        return Err(Error::FamilyMismatch(format!("no factor {i}")));
    }
    if fs[i].is_identity(&x) {
        return Ok(());
    }
    match out.last() {
        Some((j, _)) if *j == i => {
            let (_, t) = out.pop().unwrap();
            let merged = fs[i].mul(&t, &x)?;
            if !fs[i].is_identity(&merged) {
                out.push((i, merged));
            }
        }
        _ => out.push((i, x)),
    }
    Ok(())
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}{}", self.gen, if self.inv { "^-1" } else { "" })
    }
}

/// Role of a subgroup in the condition and path-representative machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Q,
    R,
    QPrime,
    RPrime,
    S,
    T(usize),
    P,
    U(usize),
}

/// A finitely generated subgroup given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub gens: Vec<Elem>,
    pub role: Option<Role>,
}

impl SubgroupSpec {
    pub fn new(gens: Vec<Elem>) -> Self {
        SubgroupSpec { gens, role: None }
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = Some(role);
        self
    }

    /// Parses generators from words.
    pub fn parse(group: &GroupSpec, words: &[&str]) -> Result<Self> {
        let gens = words.iter().map(|w| group.parse_elem(w)).collect::<Result<_>>()?;
        Ok(SubgroupSpec::new(gens))
    }

    pub fn validate(&self, group: &GroupSpec) -> Result<()> {
        self.gens.iter().try_for_each(|g| group.check(g))
    }
}
