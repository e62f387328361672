//! Sliding window of (state-action, next-AoI) samples.

use std::collections::VecDeque;

/// One training point: normalized `[aoi, per-RB powers]` input and the
/// next-slot AoI in ms.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub x: Vec<f64>,
    pub y: f64,
}

/// Fixed-capacity FIFO of the most recent samples; the oldest point is
/// evicted when the window overflows.
#[derive(Debug, Clone)]
pub struct SlidingDataset {
    samples: VecDeque<Sample>,
    capacity: usize,
}

impl SlidingDataset {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "window capacity must be at least 1");
        Self { samples: VecDeque::with_capacity(capacity + 1), capacity }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Append a sample, evicting the oldest one if the window is full.
    pub fn push(&mut self, sample: Sample) {
        if let Some(first) = self.samples.front() {
            assert_eq!(first.x.len(), sample.x.len(), "input dimension changed mid-run");
        }
        self.samples.push_back(sample);
        if self.samples.len() > self.capacity {
            self.samples.pop_front();
        }
    }

    /// Samples in insertion order, oldest first.
    pub fn iter(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter()
    }

    pub fn inputs(&self) -> Vec<&[f64]> {
        self.samples.iter().map(|s| s.x.as_slice()).collect()
    }

    pub fn outputs(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.y).collect()
    }
}
