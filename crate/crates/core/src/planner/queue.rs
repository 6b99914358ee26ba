use crate::env::StateId;

const ABSENT: u32 = u32::MAX;

/// Max-priority queue of states. A state is held at most once; pushing it
/// again only ever raises its priority. Priorities below the threshold are
/// refused.
///
/// Indexed binary heap: `pos[z]` is the slot of `z` in `heap`, so a raise is
/// a sift-up in place and the heap never holds more than one entry per state.
#[derive(Debug, Clone)]
pub struct SweepQueue {
    theta: f64,
    heap: Vec<u32>,
    prio: Vec<f64>,
    pos: Vec<u32>,
}

impl SweepQueue {
    pub fn new(n_states: usize, theta: f64) -> Self {
        SweepQueue { theta, heap: Vec::new(), prio: vec![0.0; n_states], pos: vec![ABSENT; n_states] }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn priority(&self, z: StateId) -> Option<f64> {
        (self.pos[z.index()] != ABSENT).then(|| self.prio[z.index()])
    }

    // larger priority first, then smaller state id
    fn above(&self, a: u32, b: u32) -> bool {
        let (pa, pb) = (self.prio[a as usize], self.prio[b as usize]);
        pa > pb || (pa == pb && a < b)
    }

    fn place(&mut self, slot: usize, z: u32) {
        self.heap[slot] = z;
        self.pos[z as usize] = slot as u32;
    }

    fn sift_up(&mut self, mut slot: usize) {
        let z = self.heap[slot];
        while slot > 0 {
            let parent = (slot - 1) / 2;
            let p = self.heap[parent];
            if !self.above(z, p) {
                break;
            }
            self.place(slot, p);
            slot = parent;
        }
        self.place(slot, z);
    }

    fn sift_down(&mut self, mut slot: usize) {
        let z = self.heap[slot];
        let n = self.heap.len();
        loop {
            let left = 2 * slot + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && self.above(self.heap[right], self.heap[left]) { right } else { left };
            let c = self.heap[child];
            if !self.above(c, z) {
                break;
            }
            self.place(slot, c);
            slot = child;
        }
        self.place(slot, z);
    }

    /// Returns true when `z` is queued with at least `priority` afterwards.
    pub fn push(&mut self, z: StateId, priority: f64) -> bool {
        if !(priority >= self.theta) {
            return false;
        }
        let i = z.index();
        if self.pos[i] == ABSENT {
            self.prio[i] = priority;
            self.heap.push(z.0);
            self.pos[i] = (self.heap.len() - 1) as u32;
            self.sift_up(self.heap.len() - 1);
        } else if priority > self.prio[i] {
            self.prio[i] = priority;
            self.sift_up(self.pos[i] as usize);
        }
        true
    }

    pub fn pop(&mut self) -> Option<(StateId, f64)> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.pos[top as usize] = ABSENT;
        if last != top {
            self.place(0, last);
            self.sift_down(0);
        }
        Some((StateId(top), self.prio[top as usize]))
    }

    pub fn clear(&mut self) {
        for &z in &self.heap {
            self.pos[z as usize] = ABSENT;
        }
        self.heap.clear();
    }
}
