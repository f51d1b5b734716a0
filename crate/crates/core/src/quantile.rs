//! Quantile tables: one `n x (K + 1)` block of quantile variables per
//! distributional variable, their centering, covariance blocks and the
//! column-concatenated global matrix.

use ndarray::{s, Array1, Array2, ArrayView2, Axis};

use crate::distribution::{distributional_variance, EquiDepthHistogram};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Quantile variables of one distributional variable. Column `0` holds the
/// minima, column `l` the `l/K` quantiles, column `K` the maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileTable<T> {
    variable: String,
    quantiles: usize,
    entries: Array2<T>,
    column_means: Array1<T>,
    centered: bool,
}

impl<T: Scalar> QuantileTable<T> {
    pub fn variable(&self) -> &str {
        &self.variable
    }

    /// Unit count `n`.
    pub fn units(&self) -> usize {
        self.entries.nrows()
    }

    /// Quantile count `K` (the table has `K + 1` columns).
    pub fn quantiles(&self) -> usize {
        self.quantiles
    }

    pub fn columns(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> ArrayView2<'_, T> {
        self.entries.view()
    }

    /// Column means removed by centering (zeros before centering).
    pub fn column_means(&self) -> &Array1<T> {
        &self.column_means
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    /// Table in original units, whether or not it has been centered.
    pub fn raw_entries(&self) -> Array2<T> {
        &self.entries + &self.column_means.view().insert_axis(Axis(0))
    }

    /// Probability level of each column, `l / K`.
    pub fn column_levels(&self) -> Vec<T> {
        let k = T::lit(self.quantiles as f64);
        (0..=self.quantiles).map(|l| T::lit(l as f64) / k).collect()
    }
}

/// Stacks the `{min, l/K quantiles, max}` rows of histograms already
/// homogenized to `k` bins.
pub fn build_quantile_table<T: Scalar>(
    variable: impl Into<String>,
    histograms: &[EquiDepthHistogram<T>],
    k: usize,
) -> Result<QuantileTable<T>> {
    let variable = variable.into();
    if k < 1 {
        return Err(Error::domain("quantile count must be at least 1"));
    }
    if histograms.is_empty() {
        return Err(Error::domain(format!("no units for variable `{variable}`")));
    }
    let mut entries = Array2::zeros((histograms.len(), k + 1));
    for (i, h) in histograms.iter().enumerate() {
        if h.bins() != k {
            return Err(Error::BinCountMismatch { left: k, right: h.bins() });
        }
        entries[[i, 0]] = h.lower(0);
        for l in 0..k {
            entries[[i, l + 1]] = h.upper(l).max(entries[[i, l]]);
        }
    }
    Ok(QuantileTable {
        variable,
        quantiles: k,
        entries,
        column_means: Array1::zeros(k + 1),
        centered: false,
    })
}

/// Subtracts the column means, keeping them for later reconstruction.
pub fn center_columns<T: Scalar>(table: QuantileTable<T>) -> Result<QuantileTable<T>> {
    if table.centered {
        return Err(Error::AlreadyCentered(table.variable));
    }
    let means = table
        .entries
        .mean_axis(Axis(0))
        .expect("tables have at least one row");
    let mut entries = &table.entries - &means.view().insert_axis(Axis(0));
    // A column constant up to rounding of its raw values becomes exactly zero.
    for (mut col, raw) in entries.axis_iter_mut(Axis(1)).zip(table.entries.axis_iter(Axis(1))) {
        let magnitude = raw.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let spread = col.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if spread <= T::lit(16.0) * T::epsilon() * magnitude {
            col.fill(T::zero());
        }
    }
    Ok(QuantileTable {
        entries,
        column_means: means,
        centered: true,
        ..table
    })
}

/// Diagonal unit weights (the `W` metric), positive and summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitWeights<T> {
    weights: Array1<T>,
}

impl<T: Scalar> UnitWeights<T> {
    pub fn uniform(n: usize) -> Self {
        let w = T::one() / T::lit(n as f64);
        UnitWeights { weights: Array1::from_elem(n, w) }
    }

    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("unit weights are empty"));
        }
        if weights.iter().any(|&w| !(w.is_finite() && w > T::zero())) {
            return Err(Error::domain("unit weights must be positive and finite"));
        }
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > T::weight_tolerance() {
            return Err(Error::domain(format!("unit weights sum to {total}, expected 1")));
        }
        Ok(UnitWeights { weights: Array1::from(weights) })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_array(&self) -> &Array1<T> {
        &self.weights
    }
}

/// `S_j = Q_j^T W Q_j` for a centered table.
pub fn covariance_block<T: Scalar>(table: &QuantileTable<T>, weights: &UnitWeights<T>) -> Result<Array2<T>> {
    if !table.centered {
        return Err(Error::NotCentered(table.variable.clone()));
    }
    if weights.len() != table.units() {
        return Err(Error::domain(format!(
            "{} unit weights for {} units",
            weights.len(),
            table.units()
        )));
    }
    let weighted = &table.entries * &weights.weights.view().insert_axis(Axis(1));
    Ok(table.entries.t().dot(&weighted))
}

/// Trace of a block's covariance against the Wasserstein variance of the
/// same histograms, under uniform unit weights.
///
/// `gap = trace_per_bin - variance`; `gap_explicit` evaluates the same
/// quantity from the centered centers and radii with divisor `n * K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport<T> {
    /// Sum of the quantile-column variances.
    pub trace: T,
    /// `trace / K`, the scale on which the gap is measured.
    pub trace_per_bin: T,
    /// `trace / (K + 1)`, mean variance of a quantile column.
    pub trace_averaged: T,
    pub variance: T,
    pub gap: T,
    pub gap_explicit: T,
}

pub fn trace_variance_gap<T: Scalar>(
    table: &QuantileTable<T>,
    histograms: &[EquiDepthHistogram<T>],
) -> Result<GapReport<T>> {
    if !table.centered {
        return Err(Error::NotCentered(table.variable.clone()));
    }
    let n = table.units();
    let k = table.quantiles;
    if histograms.len() != n {
        return Err(Error::domain(format!(
            "table `{}` has {n} units but {} histograms were supplied",
            table.variable,
            histograms.len()
        )));
    }
    let raw = table.raw_entries();
    let scale = raw.iter().fold(T::one(), |m, v| m.max(v.abs()));
    let tol = T::contiguity_tolerance() * scale;
    for (i, h) in histograms.iter().enumerate() {
        if h.bins() != k {
            return Err(Error::BinCountMismatch { left: k, right: h.bins() });
        }
        let consistent = (raw[[i, 0]] - h.lower(0)).abs() <= tol
            && (0..k).all(|l| (raw[[i, l + 1]] - h.upper(l)).abs() <= tol);
        if !consistent {
            return Err(Error::domain(format!(
                "row {i} of table `{}` does not match its histogram",
                table.variable
            )));
        }
    }

    let weights = UnitWeights::uniform(n);
    let cov = covariance_block(table, &weights)?;
    let trace: T = cov.diag().iter().copied().sum();
    let kk = T::lit(k as f64);
    let variance = distributional_variance(histograms)?;

    let nn = T::lit(n as f64);
    let three = T::lit(3.0);
    let quantile_ss: T = table.entries.iter().map(|&q| q * q).sum();
    let mut bin_ss = T::zero();
    for l in 0..k {
        let c_mean = histograms.iter().map(|h| h.centers()[l]).sum::<T>() / nn;
        let r_mean = histograms.iter().map(|h| h.radii()[l]).sum::<T>() / nn;
        for h in histograms {
            let cc = h.centers()[l] - c_mean;
            let rc = h.radii()[l] - r_mean;
            bin_ss = bin_ss + cc * cc + rc * rc / three;
        }
    }
    Ok(GapReport {
        trace,
        trace_per_bin: trace / kk,
        trace_averaged: trace / T::lit((k + 1) as f64),
        variance,
        gap: trace / kk - variance,
        gap_explicit: (quantile_ss - bin_ss) / (nn * kk),
    })
}

/// How a quantile column takes part in the global analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColumnRole<T> {
    Active,
    /// Active with its metric weight multiplied by the factor in `(0, 1]`.
    Weighted(T),
    /// Projected after the fit; zero metric weight.
    Supplementary,
}

impl<T: Scalar> ColumnRole<T> {
    pub fn factor(&self) -> T {
        match *self {
            ColumnRole::Active => T::one(),
            ColumnRole::Weighted(w) => w,
            ColumnRole::Supplementary => T::zero(),
        }
    }

    pub fn is_active(&self) -> bool {
        !matches!(self, ColumnRole::Supplementary)
    }
}

/// Treatment of the minimum and maximum columns of every block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtremePolicy<T> {
    Active,
    Supplementary,
    Weight(T),
}

/// Blocks sharing the same units in the same order, with per-column roles.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSet<T> {
    blocks: Vec<QuantileTable<T>>,
    roles: Vec<Vec<ColumnRole<T>>>,
}

impl<T: Scalar> BlockSet<T> {
    /// All columns active.
    pub fn new(blocks: Vec<QuantileTable<T>>) -> Result<Self> {
        let roles = blocks.iter().map(|b| vec![ColumnRole::Active; b.columns()]).collect();
        BlockSet::with_roles(blocks, roles)
    }

    pub fn with_roles(blocks: Vec<QuantileTable<T>>, roles: Vec<Vec<ColumnRole<T>>>) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::domain("a block set needs at least one block"))?;
        let n = first.units();
        if let Some(b) = blocks.iter().find(|b| b.units() != n) {
            return Err(Error::domain(format!(
                "block `{}` has {} units, expected {n}",
                b.variable(),
                b.units()
            )));
        }
        if roles.len() != blocks.len() || roles.iter().zip(&blocks).any(|(r, b)| r.len() != b.columns()) {
            return Err(Error::domain("column roles do not match the block layout"));
        }
        for role in roles.iter().flatten() {
            if let ColumnRole::Weighted(w) = role {
                if !(*w > T::zero() && *w <= T::one()) {
                    return Err(Error::domain(format!("column weight {w} outside (0, 1]")));
                }
            }
        }
        Ok(BlockSet { blocks, roles })
    }

    /// Applies `policy` to the first and last column of every block.
    pub fn with_extremes(blocks: Vec<QuantileTable<T>>, policy: ExtremePolicy<T>) -> Result<Self> {
        let extreme = match policy {
            ExtremePolicy::Active => ColumnRole::Active,
            ExtremePolicy::Supplementary => ColumnRole::Supplementary,
            ExtremePolicy::Weight(w) => ColumnRole::Weighted(w),
        };
        let roles = blocks
            .iter()
            .map(|b| {
                let mut r = vec![ColumnRole::Active; b.columns()];
                r[0] = extreme;
                let last = r.len() - 1;
                r[last] = extreme;
                r
            })
            .collect();
        BlockSet::with_roles(blocks, roles)
    }

    pub fn blocks(&self) -> &[QuantileTable<T>] {
        &self.blocks
    }

    pub fn roles(&self) -> &[Vec<ColumnRole<T>>] {
        &self.roles
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn units(&self) -> usize {
        self.blocks[0].units()
    }
}

/// Column-concatenated `Q = [Q_1 | ... | Q_p]` with block bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalMatrix<T> {
    data: Array2<T>,
    offsets: Vec<usize>,
    roles: Vec<ColumnRole<T>>,
}

impl<T: Scalar> GlobalMatrix<T> {
    pub fn data(&self) -> ArrayView2<'_, T> {
        self.data.view()
    }

    /// Start column of every block, followed by the total width.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn roles(&self) -> &[ColumnRole<T>] {
        &self.roles
    }

    pub fn block_view(&self, block: usize) -> ArrayView2<'_, T> {
        self.data.slice(s![.., self.offsets[block]..self.offsets[block + 1]])
    }

    /// `(block, local column)` of a global column index.
    pub fn locate(&self, column: usize) -> Option<(usize, usize)> {
        if column >= self.data.ncols() {
            return None;
        }
        let block = self.offsets.partition_point(|&o| o <= column) - 1;
        Some((block, column - self.offsets[block]))
    }

    pub fn global_index(&self, block: usize, local: usize) -> Option<usize> {
        let start = *self.offsets.get(block)?;
        let end = *self.offsets.get(block + 1)?;
        (start + local < end).then_some(start + local)
    }
}

pub fn concatenate<T: Scalar>(blocks: &BlockSet<T>) -> Result<GlobalMatrix<T>> {
    let n = blocks.units();
    if blocks.blocks.iter().any(|b| b.units() != n) {
        return Err(Error::domain("blocks disagree on the number of units"));
    }
    let views: Vec<_> = blocks.blocks.iter().map(|b| b.entries.view()).collect();
    let data = ndarray::concatenate(Axis(1), &views).map_err(|e| Error::domain(e.to_string()))?;
    let mut offsets = vec![0];
    for b in &blocks.blocks {
        offsets.push(offsets[offsets.len() - 1] + b.columns());
    }
    let roles = blocks.roles.iter().flatten().copied().collect();
    Ok(GlobalMatrix { data, offsets, roles })
}
