//! Min-priority queues of gap merge keys.
//!
//! Entries are lazy: a gap may be pushed again with a new key, and the caller
//! discards popped entries whose key no longer matches the gap's current key.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

pub trait GapQueue {
    fn push(&mut self, key: u64, gap: usize);
    /// Smallest entry without removing it.
    fn peek(&mut self) -> Option<(u64, usize)>;
    fn pop(&mut self) -> Option<(u64, usize)>;
    fn is_empty(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Binary heap, for keys over a wide range.
#[derive(Debug, Default)]
pub struct HeapQueue {
    heap: BinaryHeap<Reverse<(u64, usize)>>,
}

impl HeapQueue {
    pub fn new() -> Self {
        Self::default()
    }
}

impl GapQueue for HeapQueue {
    fn push(&mut self, key: u64, gap: usize) {
        self.heap.push(Reverse((key, gap)));
    }

    fn peek(&mut self) -> Option<(u64, usize)> {
        self.heap.peek().map(|r| r.0)
    }

    fn pop(&mut self) -> Option<(u64, usize)> {
        self.heap.pop().map(|r| r.0)
    }
}

/// Bucket array indexed by key with a forward-only finger. Keys pushed must
/// not be below the last popped key, which holds for merge keys since they
/// only grow.
#[derive(Debug)]
pub struct MonotoneBucketQueue {
    buckets: Vec<Vec<usize>>,
    finger: usize,
}

impl MonotoneBucketQueue {
    /// Accepts keys in `0..=max_key`.
    pub fn new(max_key: u64) -> Self {
        MonotoneBucketQueue {
            buckets: vec![Vec::new(); max_key as usize + 1],
            finger: 0,
        }
    }

    fn advance(&mut self) {
        while self.finger < self.buckets.len() && self.buckets[self.finger].is_empty() {
            self.finger += 1;
        }
    }
}

impl GapQueue for MonotoneBucketQueue {
    fn push(&mut self, key: u64, gap: usize) {
        let key = key as usize;
        assert!(key >= self.finger, "key {key} below finger {}", self.finger);
        self.buckets[key].push(gap);
    }

    fn peek(&mut self) -> Option<(u64, usize)> {
        self.advance();
        let b = self.buckets.get(self.finger)?;
        Some((self.finger as u64, *b.last().unwrap()))
    }

    fn pop(&mut self) -> Option<(u64, usize)> {
        self.advance();
        let b = self.buckets.get_mut(self.finger)?;
        Some((self.finger as u64, b.pop().unwrap()))
    }
}
