//! Intrusive doubly-linked chains.
//!
//! Every live point sits on exactly one chain, so the links live in two
//! arrays indexed by point id and a [`Chain`] is just a `(head, tail)` pair.
//! All surgery is O(1) given node handles. The sentinels of a full chain are
//! implicit: `pred(head)` and `succ(tail)` are `None`.

use alloc::vec::Vec;

/// Absent link.
pub const NIL: u32 = u32::MAX;

/// A `(head, tail)` view into a [`Links`] arena. Empty when `head == NIL`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chain {
    head: u32,
    tail: u32,
}

impl Default for Chain {
    fn default() -> Self {
        Chain::EMPTY
    }
}

impl Chain {
    pub const EMPTY: Chain = Chain { head: NIL, tail: NIL };

    pub fn is_empty(&self) -> bool {
        self.head == NIL
    }

    /// First real node.
    pub fn head(&self) -> Option<u32> {
        (self.head != NIL).then_some(self.head)
    }

    /// Last real node.
    pub fn tail(&self) -> Option<u32> {
        (self.tail != NIL).then_some(self.tail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Links {
    prev: Vec<u32>,
    next: Vec<u32>,
}

impl Links {
    pub fn new(n: usize) -> Self {
        Links { prev: alloc::vec![NIL; n], next: alloc::vec![NIL; n] }
    }

    pub fn capacity(&self) -> usize {
        self.prev.len()
    }

    #[inline]
    pub fn pred(&self, node: u32) -> Option<u32> {
        let p = self.prev[node as usize];
        (p != NIL).then_some(p)
    }

    #[inline]
    pub fn succ(&self, node: u32) -> Option<u32> {
        let s = self.next[node as usize];
        (s != NIL).then_some(s)
    }

    /// A one-node chain. The node must be detached.
    pub fn singleton(&mut self, node: u32) -> Chain {
        self.detach(node);
        Chain { head: node, tail: node }
    }

    fn detach(&mut self, node: u32) {
        self.prev[node as usize] = NIL;
        self.next[node as usize] = NIL;
    }

    #[inline]
    fn link(&mut self, a: u32, b: u32) {
        if a != NIL {
            self.next[a as usize] = b;
        }
        if b != NIL {
            self.prev[b as usize] = a;
        }
    }

    pub fn push_back(&mut self, chain: &mut Chain, node: u32) {
        self.detach(node);
        if chain.is_empty() {
            *chain = Chain { head: node, tail: node };
        } else {
            self.link(chain.tail, node);
            chain.tail = node;
        }
    }

    /// Joins `b` after `a`.
    pub fn concat(&mut self, a: Chain, b: Chain) -> Chain {
        if a.is_empty() {
            return b;
        }
        if b.is_empty() {
            return a;
        }
        self.link(a.tail, b.head);
        Chain { head: a.head, tail: b.tail }
    }

    /// Splits `chain` just before `node`: returns `(prefix, node..tail)`.
    pub fn split_at(&mut self, chain: Chain, node: u32) -> (Chain, Chain) {
        match self.pred(node) {
            None => {
                debug_assert_eq!(chain.head, node, "split_at: node not in chain");
                (Chain::EMPTY, chain)
            }
            Some(p) => {
                self.next[p as usize] = NIL;
                self.prev[node as usize] = NIL;
                (Chain { head: chain.head, tail: p }, Chain { head: node, tail: chain.tail })
            }
        }
    }

    /// Replaces the nodes strictly between `after` and `before` with
    /// `replacement` and returns the removed run. `None` stands for the left
    /// (resp. right) sentinel.
    pub fn splice_replace(
        &mut self,
        chain: &mut Chain,
        after: Option<u32>,
        before: Option<u32>,
        replacement: Chain,
    ) -> Chain {
        let first = match after {
            Some(a) => self.next[a as usize],
            None => chain.head,
        };
        let last = match before {
            Some(b) => self.prev[b as usize],
            None => chain.tail,
        };
        let a = after.unwrap_or(NIL);
        let b = before.unwrap_or(NIL);
        let removed = if first == NIL || first == b {
            Chain::EMPTY
        } else {
            self.prev[first as usize] = NIL;
            self.next[last as usize] = NIL;
            Chain { head: first, tail: last }
        };
        if replacement.is_empty() {
            self.link(a, b);
        } else {
            self.link(a, replacement.head);
            self.link(replacement.tail, b);
        }
        let head = if a == NIL { replacement.head().unwrap_or(b) } else { chain.head };
        let tail = if b == NIL { replacement.tail().unwrap_or(a) } else { chain.tail };
        *chain = if head == NIL { Chain::EMPTY } else { Chain { head, tail } };
        removed
    }

    /// Cuts the run `first..=last` out of `chain` and returns it.
    pub fn cut(&mut self, chain: &mut Chain, first: u32, last: u32) -> Chain {
        let after = self.pred(first);
        let before = self.succ(last);
        self.splice_replace(chain, after, before, Chain::EMPTY)
    }

    pub fn iter(&self, chain: Chain) -> Iter<'_> {
        Iter { links: self, cur: chain.head, end: chain.tail }
    }

    /// Node ids from `first` to `last` inclusive.
    pub fn range(&self, first: u32, last: u32) -> Iter<'_> {
        Iter { links: self, cur: first, end: last }
    }

    pub fn to_vec(&self, chain: Chain) -> Vec<u32> {
        self.iter(chain).collect()
    }

    pub fn len(&self, chain: Chain) -> usize {
        self.iter(chain).count()
    }
}

pub struct Iter<'a> {
    links: &'a Links,
    cur: u32,
    end: u32,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.cur == NIL {
            return None;
        }
        let c = self.cur;
        self.cur = if c == self.end { NIL } else { self.links.next[c as usize] };
        Some(c)
    }
}
