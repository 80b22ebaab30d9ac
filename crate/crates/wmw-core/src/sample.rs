//! Validated two-sample data and shared rank utilities.
//!
//! Values are compared by exact numeric equality for tie detection: ties are
//! taken to come from identical recorded values, not from near-coincidence,
//! so no epsilon tolerance is applied anywhere. Input order is preserved;
//! sorted copies live in derived fields only.

use crate::error::{Error, Result, SampleId};

/// One sample of finite measurements, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Validates length >= 1 and finiteness of every element.
    pub fn new(values: Vec<f64>, which: SampleId) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample { which });
        }
        for (index, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { which, index });
            }
        }
        Ok(Sample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A validated pair of samples plus the derived size quantities used
/// throughout: n1, n2, m = n1*n2 and lambda_n = n1/(n1+n2).
///
/// Sorted copies of both samples are precomputed once so that the rank-based
/// paths never re-sort; this is what makes repeated shifted tests cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSampleData {
    x: Sample,
    y: Sample,
    sorted_x: Vec<f64>,
    sorted_y: Vec<f64>,
}

impl TwoSampleData {
    pub fn new(x: Sample, y: Sample) -> Self {
        let mut sorted_x = x.values().to_vec();
        let mut sorted_y = y.values().to_vec();
        sorted_x.sort_unstable_by(f64::total_cmp);
        sorted_y.sort_unstable_by(f64::total_cmp);
        TwoSampleData {
            x,
            y,
            sorted_x,
            sorted_y,
        }
    }

    pub fn x(&self) -> &[f64] {
        self.x.values()
    }

    pub fn y(&self) -> &[f64] {
        self.y.values()
    }

    /// Ascending copy of the x-sample.
    pub fn sorted_x(&self) -> &[f64] {
        &self.sorted_x
    }

    /// Ascending copy of the y-sample.
    pub fn sorted_y(&self) -> &[f64] {
        &self.sorted_y
    }

    pub fn n1(&self) -> usize {
        self.x.len()
    }

    pub fn n2(&self) -> usize {
        self.y.len()
    }

    /// n1 + n2.
    pub fn n(&self) -> usize {
        self.n1() + self.n2()
    }

    /// m = n1 * n2, the number of kernel cells.
    pub fn m(&self) -> usize {
        self.n1() * self.n2()
    }

    /// lambda_n = n1 / (n1 + n2).
    pub fn lambda_n(&self) -> f64 {
        self.n1() as f64 / self.n() as f64
    }

    /// The same data with the roles of x and y exchanged.
    pub fn swapped(&self) -> TwoSampleData {
        TwoSampleData {
            x: self.y.clone(),
            y: self.x.clone(),
            sorted_x: self.sorted_y.clone(),
            sorted_y: self.sorted_x.clone(),
        }
    }

    /// The same data with `shift` added to every y-value. Sort order of y is
    /// preserved by a monotone shift, so no re-sort is needed.
    pub fn with_shifted_y(&self, shift: f64) -> Result<TwoSampleData> {
        let values: Vec<f64> = self.y.values().iter().map(|v| v + shift).collect();
        let y = Sample::new(values, SampleId::Y)?;
        let sorted_y: Vec<f64> = self.sorted_y.iter().map(|v| v + shift).collect();
        Ok(TwoSampleData {
            x: self.x.clone(),
            y,
            sorted_x: self.sorted_x.clone(),
            sorted_y,
        })
    }

    /// Guard shared by every variance operation: n1 >= 2 and n2 >= 2.
    pub(crate) fn require_min_per_group(&self, what: &'static str, needed: usize) -> Result<()> {
        let have = self.n1().min(self.n2());
        if have < needed {
            return Err(Error::TooSmall { what, needed, have });
        }
        Ok(())
    }
}

/// Validates raw inputs into [`TwoSampleData`].
///
/// Size minimums for variance estimation are deliberately not enforced here;
/// point estimates are well defined from one observation per group.
pub fn validate(raw_x: &[f64], raw_y: &[f64]) -> Result<TwoSampleData> {
    let x = Sample::new(raw_x.to_vec(), SampleId::X)?;
    let y = Sample::new(raw_y.to_vec(), SampleId::Y)?;
    Ok(TwoSampleData::new(x, y))
}

/// Pooled mid-ranks of the y-sample plus the pooled tie-group sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct MidRankTable {
    /// Mid-rank of each y-value within the pooled ascending sort, aligned
    /// with the y-sample's input order.
    pub combined_ranks_y: Vec<f64>,
    /// Size of each tie group in the pooled sort, ascending by value;
    /// sums to n1 + n2.
    pub tie_group_sizes: Vec<usize>,
}

/// Mid-ranks of the y-values within the pooled sample.
///
/// The mid-rank of a value is the average of the integer ranks its tie group
/// occupies in the pooled ascending sort.
pub fn midranks(data: &TwoSampleData) -> MidRankTable {
    let sx = data.sorted_x();
    let sy = data.sorted_y();

    // Mid-rank per position of sorted_y, via one merge pass over both
    // sorted samples.
    let mut rank_sorted_y = vec![0.0_f64; sy.len()];
    let mut tie_group_sizes = Vec::new();
    let (mut i, mut j) = (0_usize, 0_usize);
    let mut consumed = 0_usize; // pooled ranks assigned so far
    while i < sx.len() || j < sy.len() {
        let v = match (sx.get(i), sy.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        let mut cx = 0_usize;
        while i + cx < sx.len() && sx[i + cx] == v {
            cx += 1;
        }
        let mut cy = 0_usize;
        while j + cy < sy.len() && sy[j + cy] == v {
            cy += 1;
        }
        let group = cx + cy;
        // ranks consumed+1 ..= consumed+group average to:
        let mid = consumed as f64 + (group as f64 + 1.0) / 2.0;
        for r in rank_sorted_y.iter_mut().skip(j).take(cy) {
            *r = mid;
        }
        tie_group_sizes.push(group);
        i += cx;
        j += cy;
        consumed += group;
    }

    // Scatter back to the y-sample's input order.
    let mut order: Vec<usize> = (0..data.n2()).collect();
    order.sort_unstable_by(|&a, &b| data.y()[a].total_cmp(&data.y()[b]));
    let mut combined_ranks_y = vec![0.0_f64; data.n2()];
    for (sorted_pos, &orig_idx) in order.iter().enumerate() {
        combined_ranks_y[orig_idx] = rank_sorted_y[sorted_pos];
    }

    MidRankTable {
        combined_ranks_y,
        tie_group_sizes,
    }
}
