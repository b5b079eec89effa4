use std::collections::HashMap;

use crate::error::{Error, Result};

use super::symbols::SymbolSequence;
use super::MIN_OVERLAP;

#[inline]
fn xlog2x(c: f64) -> f64 {
    if c > 0.0 {
        c * c.log2()
    } else {
        0.0
    }
}

/// Entropy in bits of an empirical distribution given by counts.
pub fn entropy_of_counts<I: IntoIterator<Item = u64>>(counts: I) -> f64 {
    let counts: Vec<u64> = counts.into_iter().filter(|&c| c > 0).collect();
    let n = counts.iter().sum::<u64>() as f64;
    -counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum::<f64>()
}

fn histogram(symbols: &[u32]) -> Vec<u64> {
    let mut counts: HashMap<u32, u64> = HashMap::new();
    for &s in symbols {
        *counts.entry(s).or_default() += 1;
    }
    let mut keyed: Vec<_> = counts.into_iter().collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, c)| c).collect()
}

pub fn entropy_of_slice(symbols: &[u32]) -> f64 {
    entropy_of_counts(histogram(symbols))
}

/// Plug-in entropy of the frames after the onset skip.
pub fn entropy(seq: &SymbolSequence) -> Result<f64> {
    let active = seq.active();
    if active.is_empty() {
        return Err(Error::data("no symbols left after the onset skip"));
    }
    Ok(entropy_of_slice(active))
}

/// Joint count table over dense labels `0..nx` × `0..nw`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contingency {
    pub nx: usize,
    pub nw: usize,
    pub counts: Vec<u32>,
}

impl Contingency {
    pub fn zeros(nx: usize, nw: usize) -> Self {
        Contingency {
            nx,
            nw,
            counts: vec![0; nx * nw],
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn add_assign(&mut self, other: &Contingency) {
        debug_assert_eq!(self.counts.len(), other.counts.len());
        for (a, &b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    fn row_sums(&self) -> Vec<u64> {
        self.counts
            .chunks(self.nw.max(1))
            .map(|r| r.iter().map(|&c| u64::from(c)).sum())
            .collect()
    }

    fn column_sums(&self) -> Vec<u64> {
        let mut cols = vec![0u64; self.nw];
        for row in self.counts.chunks(self.nw.max(1)) {
            for (c, &v) in cols.iter_mut().zip(row) {
                *c += u64::from(v);
            }
        }
        cols
    }

    pub fn entropy_x(&self) -> f64 {
        entropy_of_counts(self.row_sums())
    }

    pub fn entropy_w(&self) -> f64 {
        entropy_of_counts(self.column_sums())
    }

    /// Plug-in mutual information in bits.
    pub fn mutual_information(&self) -> f64 {
        let n = self.total();
        if n == 0 {
            return 0.0;
        }
        let joint: f64 = self.counts.iter().map(|&c| xlog2x(f64::from(c))).sum();
        let sx: f64 = self.row_sums().into_iter().map(|c| xlog2x(c as f64)).sum();
        let sw: f64 = self.column_sums().into_iter().map(|c| xlog2x(c as f64)).sum();
        ((joint - sx) - sw + xlog2x(n as f64)) / n as f64
    }

    /// Table of `(x, g(w))` for the relabeling `g(w) = w / factor`.
    pub fn merge_columns(&self, factor: usize) -> Contingency {
        let factor = factor.max(1);
        let nw = self.nw.div_ceil(factor).max(1);
        let mut merged = Contingency::zeros(self.nx, nw);
        for x in 0..self.nx {
            for w in 0..self.nw {
                merged.counts[x * nw + w / factor] += self.counts[x * self.nw + w];
            }
        }
        merged
    }
}

/// Relabels symbols to `0..k` in order of first appearance.
fn densify(symbols: &[u32]) -> (Vec<u32>, usize) {
    let mut map: HashMap<u32, u32> = HashMap::new();
    let dense = symbols
        .iter()
        .map(|&s| {
            let next = map.len() as u32;
            *map.entry(s).or_insert(next)
        })
        .collect();
    (dense, map.len())
}

/// Plug-in MI of two equal-length slices paired index by index.
pub fn plugin_mi_of_slices(x: &[u32], w: &[u32]) -> f64 {
    assert_eq!(x.len(), w.len(), "paired slices must have equal length");
    let (dx, kx) = densify(x);
    let (dw, kw) = densify(w);
    let mut table = Contingency::zeros(kx, kw);
    for (&a, &b) in dx.iter().zip(&dw) {
        table.counts[a as usize * kw + b as usize] += 1;
    }
    table.mutual_information()
}

/// A stimulus sequence X and response sequence W relabeled densely, ready
/// for repeated time-shifted counting.
///
/// A delay `d` pairs `X[t + d]` with `W[t]`; negative delays ask how much
/// the response tells about the stimulus in the past.
#[derive(Debug, Clone)]
pub struct PairedSequences {
    x: Vec<u32>,
    w: Vec<u32>,
    kx: usize,
    kw: usize,
    x_skip: usize,
    w_skip: usize,
}

impl PairedSequences {
    pub fn new(x: &SymbolSequence, w: &SymbolSequence) -> Result<Self> {
        if x.frame_rate != w.frame_rate {
            return Err(Error::data(format!(
                "frame rates differ: {} vs {} Hz",
                x.frame_rate, w.frame_rate
            )));
        }
        let (dx, kx) = densify(&x.symbols);
        let (dw, kw) = densify(&w.symbols);
        Ok(PairedSequences {
            x: dx,
            w: dw,
            kx: kx.max(1),
            kw: kw.max(1),
            x_skip: x.onset_skip,
            w_skip: w.onset_skip,
        })
    }

    pub fn response_alphabet(&self) -> usize {
        self.kw
    }

    /// Range of W indices `t` for which both `W[t]` and `X[t + delay]` are usable.
    pub fn range(&self, delay: i64) -> (usize, usize) {
        let lo = (self.w_skip as i64).max(self.x_skip as i64 - delay).max(0);
        let hi = (self.w.len() as i64).min(self.x.len() as i64 - delay);
        if hi <= lo {
            (0, 0)
        } else {
            (lo as usize, hi as usize)
        }
    }

    pub fn overlap(&self, delay: i64) -> usize {
        let (lo, hi) = self.range(delay);
        hi - lo
    }

    pub fn check_overlap(&self, delay: i64, min: usize) -> Result<()> {
        let n = self.overlap(delay);
        if n < min {
            return Err(Error::data(format!(
                "only {n} aligned frames at delay {delay}, need {min}"
            )));
        }
        Ok(())
    }

    fn count_into(&self, table: &mut Contingency, delay: i64, lo: usize, hi: usize) {
        let kw = self.kw;
        let xs = &self.x[(lo as i64 + delay) as usize..(hi as i64 + delay) as usize];
        for (&xv, &wv) in xs.iter().zip(&self.w[lo..hi]) {
            table.counts[xv as usize * kw + wv as usize] += 1;
        }
    }

    /// Joint table over the whole aligned range.
    pub fn table(&self, delay: i64) -> Contingency {
        let (lo, hi) = self.range(delay);
        let mut t = Contingency::zeros(self.kx, self.kw);
        self.count_into(&mut t, delay, lo, hi);
        t
    }

    /// Joint tables of `blocks` contiguous, near-equal pieces of the aligned range.
    pub fn block_tables(&self, delay: i64, blocks: usize) -> Vec<Contingency> {
        let (lo, hi) = self.range(delay);
        let n = hi - lo;
        (0..blocks)
            .map(|b| {
                let mut t = Contingency::zeros(self.kx, self.kw);
                self.count_into(&mut t, delay, lo + b * n / blocks, lo + (b + 1) * n / blocks);
                t
            })
            .collect()
    }

    /// Same X, with W's active frames permuted.
    pub fn with_shuffled_response<R: rand::Rng>(&self, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut shuffled = self.clone();
        let start = self.w_skip.min(self.w.len());
        shuffled.w[start..].shuffle(rng);
        shuffled
    }
}

/// Plug-in mutual information between `X` shifted by `delay` and `W`, bits.
pub fn plugin_mutual_information(x: &SymbolSequence, w: &SymbolSequence, delay: i64) -> Result<f64> {
    let paired = PairedSequences::new(x, w)?;
    paired.check_overlap(delay, MIN_OVERLAP)?;
    Ok(paired.table(delay).mutual_information())
}
