//! Dense sets of field elements backed by a membership bit table.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf_tower::{Elem, FieldCtx};

const WORD: usize = 64;

/// A subset of F stored as one bit per element index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    words: Vec<u64>,
    universe: u32,
    card: usize,
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

impl ElemSet {
    pub fn with_universe(universe: u32) -> Self {
        Self {
            words: vec![0; (universe as usize).div_ceil(WORD)],
            universe,
            card: 0,
        }
    }

    pub fn empty(ctx: &FieldCtx) -> Self {
        Self::with_universe(ctx.order())
    }

    pub fn full(ctx: &FieldCtx) -> Self {
        let mut s = Self::empty(ctx);
        for e in ctx.elements() {
            s.insert(e);
        }
        s
    }

    pub fn from_elems<I: IntoIterator<Item = Elem>>(ctx: &FieldCtx, items: I) -> Self {
        let mut s = Self::empty(ctx);
        for e in items {
            s.insert(e);
        }
        s
    }

    pub fn singleton(ctx: &FieldCtx, e: Elem) -> Self {
        Self::from_elems(ctx, [e])
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.card
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        let i = e.index();
        i < self.universe as usize && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Returns true if the element was newly added.
    #[inline]
    pub fn insert(&mut self, e: Elem) -> bool {
        let i = e.index();
        assert!(i < self.universe as usize, "element {i} outside the field");
        let w = &mut self.words[i / WORD];
        let bit = 1u64 << (i % WORD);
        if *w & bit == 0 {
            *w |= bit;
            self.card += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, e: Elem) -> bool {
        let i = e.index();
        if i >= self.universe as usize {
            return false;
        }
        let w = &mut self.words[i / WORD];
        let bit = 1u64 << (i % WORD);
        if *w & bit != 0 {
            *w &= !bit;
            self.card -= 1;
            true
        } else {
            false
        }
    }

    /// Elements in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(Elem((wi * WORD + tz) as u32))
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<Elem> {
        self.iter().next()
    }

    fn recount(&mut self) {
        self.card = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        self.zip_words(other, |a, b| a & !b)
    }

    fn zip_words(&self, other: &ElemSet, op: impl Fn(u64, u64) -> u64) -> ElemSet {
        assert_eq!(self.universe, other.universe, "sets from different fields");
        let mut out = ElemSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
            universe: self.universe,
            card: 0,
        };
        out.recount();
        out
    }

    pub fn intersection_len(&self, other: &ElemSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0)
    }

    /// Raw membership words, little-endian bit order within each word.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Hex bitmap: bit i of the table is bit (i % 8) of byte i / 8.
    pub fn to_hex(&self) -> String {
        let nbytes = (self.universe as usize).div_ceil(8);
        let bytes: Vec<u8> = self
            .words
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(nbytes)
            .collect();
        hex::encode(bytes)
    }

    pub fn from_hex(ctx: &FieldCtx, text: &str) -> Result<Self> {
        let bytes = hex::decode(text.trim()).map_err(|e| Error::literal(text, e.to_string()))?;
        let nbytes = (ctx.order() as usize).div_ceil(8);
        if bytes.len() != nbytes {
            return Err(Error::literal(
                text,
                format!("expected {nbytes} bytes of bitmap"),
            ));
        }
        let mut s = ElemSet::empty(ctx);
        for (i, chunk) in bytes.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            s.words[i] = u64::from_le_bytes(buf);
        }
        let tail = ctx.order() as usize % WORD;
        if tail != 0 {
            let last = s.words.len() - 1;
            if s.words[last] >> tail != 0 {
                return Err(Error::literal(text, "bits set beyond the field order"));
            }
        }
        s.recount();
        Ok(s)
    }

    /// Sorted list of element literals.
    pub fn to_literals(&self, ctx: &FieldCtx) -> Vec<String> {
        self.iter().map(|e| ctx.encode(e)).collect()
    }

    pub fn to_json(&self, ctx: &FieldCtx) -> String {
        serde_json::to_string(&self.to_literals(ctx)).expect("string list serializes")
    }

    pub fn from_json(ctx: &FieldCtx, text: &str) -> Result<Self> {
        let lits: Vec<String> =
            serde_json::from_str(text).map_err(|e| Error::literal(text, e.to_string()))?;
        let mut s = ElemSet::empty(ctx);
        for l in &lits {
            s.insert(ctx.decode(l)?);
        }
        Ok(s)
    }
}
