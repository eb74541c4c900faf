//! Local index sets `Ω_v(D/K, s, f⃗_v)` of optimal embeddings of `O_{L_s}`.
//!
//! An element is a tuple of `r × t` matrices `f_{w,(i,j)}`, one per place
//! `w | v` of `L_s`, with every matrix summing to `m^{(s)} = m_v t / s` and
//! the `i`-th row sums over all `w` and `j` equal to `f_{v,i}^{(s)}`.
//!
//! Entries are stored per `w` in long-vector order: `(i, j)` precedes
//! `(i', j')` when `j < j'`, or `j = j'` and `i < i'`.

use crate::algebra::Place;

/// The combinatorial shape of one local index set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalShape {
    /// `ℓ_{s,v}`
    pub splits: u32,
    /// `r_v`
    pub rows: u32,
    /// `t_{s,v}`
    pub columns: u32,
    /// `m_v^{(s)}`, the common total of every `w`-slice.
    pub slice_total: u32,
    /// `f_{v,i}^{(s)}`, the row totals over all slices.
    pub row_totals: Vec<u32>,
}

impl LocalShape {
    /// `None` when `Ω_v` is empty.
    pub fn new(place: &Place, f: &[u32], s: u32) -> Option<LocalShape> {
        let ell = place.split_count(s);
        let t = place.capacity_gain(s);
        let step = s / (ell * t);
        if f.iter().any(|fi| fi % step != 0) {
            return None;
        }
        let m: u32 = f.iter().sum();
        if (m * t) % s != 0 {
            return None;
        }
        Some(LocalShape {
            splits: ell,
            rows: f.len() as u32,
            columns: t,
            slice_total: m * t / s,
            row_totals: f.iter().map(|fi| fi / step).collect(),
        })
    }

    pub fn slice_len(&self) -> usize {
        (self.rows * self.columns) as usize
    }

    pub fn cells(&self) -> usize {
        self.splits as usize * self.slice_len()
    }

    fn is_consistent(&self) -> bool {
        self.rows as usize == self.row_totals.len()
            && self.splits > 0
            && self.columns > 0
            && self.row_totals.iter().sum::<u32>() == self.splits * self.slice_total
    }

    pub fn iter(&self) -> ShapeIter {
        ShapeIter::new(self.clone())
    }
}

/// Emptiness test: `s / (ℓ_{s,v} t_{s,v})` divides every `f_{v,i}`.
pub fn omega_nonempty(place: &Place, f: &[u32], s: u32) -> bool {
    let step = s / (place.split_count(s) * place.capacity_gain(s));
    f.iter().all(|fi| fi % step == 0)
}

/// One element of `Ω_v(D/K, s, f⃗_v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaElement {
    pub label: String,
    pub level: u32,
    pub splits: u32,
    pub rows: u32,
    pub columns: u32,
    /// `w`-major, long-vector order within each slice.
    pub entries: Vec<u32>,
}

impl OmegaElement {
    fn slice_len(&self) -> usize {
        (self.rows * self.columns) as usize
    }

    /// `f_{w,(i,j)}`, zero-based indices.
    pub fn entry(&self, w: usize, i: usize, j: usize) -> u32 {
        self.entries[w * self.slice_len() + j * self.rows as usize + i]
    }

    /// The long vector `f⃗_{w,*}` (zero-based `w`).
    pub fn slice(&self, w: usize) -> &[u32] {
        let len = self.slice_len();
        &self.entries[w * len..(w + 1) * len]
    }

    /// `f⃗_{w,*}^o`: the long vector with its zero entries removed.
    pub fn flatten_strip(&self, w: usize) -> Vec<u32> {
        strip_zeros(self.slice(w))
    }
}

pub fn strip_zeros(v: &[u32]) -> Vec<u32> {
    v.iter().copied().filter(|&x| x > 0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    Running,
    Done,
}

/// Streams the entry arrays of a [`LocalShape`] in increasing lexicographic
/// order. Each cell is given the range of values that still admits a
/// completion, so the search never backtracks out of a dead end.
#[derive(Debug, Clone)]
pub struct ShapeIter {
    shape: LocalShape,
    values: Vec<u32>,
    upper: Vec<u32>,
    slice_left: Vec<u32>,
    row_left: Vec<u32>,
    state: State,
}

impl ShapeIter {
    fn new(shape: LocalShape) -> Self {
        let cells = shape.cells();
        let state = if shape.is_consistent() { State::Fresh } else { State::Done };
        ShapeIter {
            values: vec![0; cells],
            upper: vec![0; cells],
            slice_left: vec![shape.slice_total; shape.splits as usize],
            row_left: shape.row_totals.clone(),
            shape,
            state,
        }
    }

    fn empty() -> Self {
        let mut it = ShapeIter::new(LocalShape {
            splits: 1,
            rows: 1,
            columns: 1,
            slice_total: 0,
            row_totals: vec![0],
        });
        it.state = State::Done;
        it
    }

    fn locate(&self, k: usize) -> (usize, usize, usize) {
        let len = self.shape.slice_len();
        let r = self.shape.rows as usize;
        let p = k % len;
        (k / len, p / r, p % r)
    }

    fn bounds(&self, k: usize) -> (u32, u32) {
        let (w, j, i) = self.locate(k);
        let left = self.slice_left[w];
        let hi = left.min(self.row_left[i]);
        let lo = if j + 1 < self.shape.columns as usize {
            0
        } else {
            // only rows i+1.. remain in this slice
            let reachable: u32 = self.row_left[i + 1..].iter().sum();
            left.saturating_sub(reachable)
        };
        (lo, hi)
    }

    fn apply(&mut self, k: usize, x: u32) {
        let (w, _, i) = self.locate(k);
        self.slice_left[w] -= x;
        self.row_left[i] -= x;
    }

    fn unapply(&mut self, k: usize, x: u32) {
        let (w, _, i) = self.locate(k);
        self.slice_left[w] += x;
        self.row_left[i] += x;
    }

    fn descend(&mut self, from: usize) {
        for k in from..self.values.len() {
            let (lo, hi) = self.bounds(k);
            debug_assert!(lo <= hi);
            self.values[k] = lo;
            self.upper[k] = hi;
            self.apply(k, lo);
        }
    }
}

impl ShapeIter {
    /// Moves to the next array without allocating; `false` once exhausted.
    pub fn advance(&mut self) -> bool {
        match self.state {
            State::Done => false,
            State::Fresh => {
                self.descend(0);
                self.state = State::Running;
                true
            }
            State::Running => {
                for k in (0..self.values.len()).rev() {
                    let x = self.values[k];
                    self.unapply(k, x);
                    if x < self.upper[k] {
                        self.values[k] = x + 1;
                        self.apply(k, x + 1);
                        self.descend(k + 1);
                        return true;
                    }
                }
                self.state = State::Done;
                false
            }
        }
    }

    /// The array reached by the last successful [`advance`](Self::advance).
    pub fn current(&self) -> &[u32] {
        &self.values
    }

    pub fn shape(&self) -> &LocalShape {
        &self.shape
    }
}

impl Iterator for ShapeIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        self.advance().then(|| self.values.clone())
    }
}

/// Streaming enumeration of `Ω_v(D/K, s, f⃗_v)`.
#[derive(Debug, Clone)]
pub struct OmegaIter {
    label: String,
    level: u32,
    dims: (u32, u32, u32),
    inner: ShapeIter,
}

impl Iterator for OmegaIter {
    type Item = OmegaElement;

    fn next(&mut self) -> Option<OmegaElement> {
        let entries = self.inner.next()?;
        let (splits, rows, columns) = self.dims;
        let elem = OmegaElement {
            label: self.label.clone(),
            level: self.level,
            splits,
            rows,
            columns,
            entries,
        };
        debug_assert!((0..splits as usize)
            .all(|w| elem.slice(w).iter().sum::<u32>() == self.inner.shape.slice_total));
        Some(elem)
    }
}

pub fn enumerate_omega(place: &Place, f: &[u32], s: u32) -> OmegaIter {
    let (inner, dims) = match LocalShape::new(place, f, s) {
        Some(shape) => {
            let dims = (shape.splits, shape.rows, shape.columns);
            (shape.iter(), dims)
        }
        None => (ShapeIter::empty(), (0, 0, 0)),
    };
    OmegaIter {
        label: place.label.clone(),
        level: s,
        dims,
        inner,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn golden_counts() {
        let t = Place::new("T", 1, 4);
        let t1 = Place::new("T+1", 1, 2);
        assert!(omega_nonempty(&t, &[1], 4));
        assert_eq!(enumerate_omega(&t, &[1], 4).count(), 4);
        assert_eq!(enumerate_omega(&t1, &[2], 4).count(), 2);
        let slices: Vec<_> = enumerate_omega(&t1, &[2], 2).map(|e| e.slice(0).to_vec()).collect();
        assert_eq!(slices, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn failed_divisibility_is_empty() {
        let v = Place::new("v", 1, 1);
        assert!(!omega_nonempty(&v, &[1, 1], 2));
        assert_eq!(enumerate_omega(&v, &[1, 1], 2).count(), 0);
    }

    #[test]
    fn split_unramified_maximal_place() {
        let v = Place::new("v", 2, 1);
        assert!(omega_nonempty(&v, &[4], 2));
        let all: Vec<_> = enumerate_omega(&v, &[4], 2).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].entries, vec![2, 2]);
    }

    #[test]
    fn prime_degree_counts() {
        // ℓ = n: multinomial n!/∏ f_i!
        let v = Place::new("v", 3, 1);
        assert_eq!(enumerate_omega(&v, &[1, 1, 1], 3).count(), 6);
        assert_eq!(enumerate_omega(&v, &[2, 1], 3).count(), 3);
        let v = Place::new("v", 5, 1);
        assert_eq!(enumerate_omega(&v, &[2, 2, 1], 5).count(), 30);
        // ramified place of a prime-degree algebra
        let v = Place::new("v", 1, 5);
        assert_eq!(enumerate_omega(&v, &[1], 5).count(), 5);
    }

    #[test]
    fn flatten_and_strip() {
        let e = OmegaElement {
            label: "v".into(),
            level: 2,
            splits: 1,
            rows: 3,
            columns: 2,
            entries: vec![5, 0, 4, 1, 0, 1],
        };
        assert_eq!(e.flatten_strip(0), vec![5, 4, 1, 1]);
        assert_eq!(e.entry(0, 0, 1), 1);
        assert_eq!(e.entry(0, 2, 0), 4);
        let e = OmegaElement { rows: 2, columns: 2, entries: vec![0, 1, 0, 1], ..e };
        assert_eq!(e.flatten_strip(0), vec![1, 1]);
    }

    proptest! {
        #[test]
        fn rotation_permutes_omega(
            f in proptest::collection::vec(1u32..3, 1..4),
            degree in 1u32..4,
            index in 1u32..3,
            s in 1u32..4,
            shift in 0usize..3,
        ) {
            let place = Place::new("v", degree, index);
            let mut g = f.clone();
            g.rotate_left(shift % f.len());
            let a = enumerate_omega(&place, &f, s).count();
            let b = enumerate_omega(&place, &g, s).count();
            prop_assert_eq!(a, b);
            let strips = |f: &[u32]| {
                let mut all: Vec<Vec<Vec<u32>>> = enumerate_omega(&place, f, s)
                    .map(|e| (0..e.splits as usize).map(|w| {
                        let mut x = e.flatten_strip(w);
                        x.sort();
                        x
                    }).collect())
                    .collect();
                all.sort();
                all
            };
            prop_assert_eq!(strips(&f), strips(&g));
        }
    }
}
