//! Multiple factor analysis of quantile blocks.
//!
//! Step one runs a PCA of every block under the unit metric `W` and takes
//! `a_j = 1 / λ²_1j` from its first eigenvalue. Step two is the generalized
//! SVD of the concatenated table under `(W, A)` where `A` repeats `a_j` over
//! the active columns of block `j`.

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::distribution::DistributionSummary;
use crate::error::{Error, Result};
use crate::linalg::{weighted_svd, EigenSystem};
use crate::quantile::{concatenate, BlockSet, ColumnRole, QuantileTable, UnitWeights};
use crate::scalar::Scalar;

/// First-step PCA of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialPca<T> {
    pub variable: String,
    pub eigen: EigenSystem<T>,
    /// `λ²_1j`, the largest eigenvalue of the block.
    pub first_eigenvalue: T,
    /// Block weight `a_j = 1 / λ²_1j`.
    pub weight: T,
    /// Unit factor scores `U_j Λ_j` (`n x L_j`).
    pub scores: Array2<T>,
}

impl<T: Scalar> PartialPca<T> {
    /// Share of the block inertia carried by each axis, in percent.
    pub fn percent_inertia(&self) -> Vec<T> {
        let eig = self.eigen.eigenvalues();
        let total: T = eig.iter().copied().sum();
        eig.iter().map(|&e| T::lit(100.0) * e / total).collect()
    }
}

/// PCA of one centered block with identity column metric.
pub fn partial_pca<T: Scalar>(table: &QuantileTable<T>, weights: &UnitWeights<T>) -> Result<PartialPca<T>> {
    let roles = vec![ColumnRole::Active; table.columns()];
    partial_pca_with_roles(table, weights, &roles)
}

/// PCA of one centered block whose column metric comes from the column roles.
pub fn partial_pca_with_roles<T: Scalar>(
    table: &QuantileTable<T>,
    weights: &UnitWeights<T>,
    roles: &[ColumnRole<T>],
) -> Result<PartialPca<T>> {
    if !table.is_centered() {
        return Err(Error::NotCentered(table.variable().to_string()));
    }
    if weights.len() != table.units() {
        return Err(Error::domain("unit weights do not match the table"));
    }
    let metric: Array1<T> = roles.iter().map(|r| r.factor()).collect();
    let eigen = weighted_svd(table.entries(), weights.as_array(), &metric)?;
    if eigen.rank() == 0 {
        return Err(Error::DegenerateBlock(table.variable().to_string()));
    }
    let first_eigenvalue = eigen.eigenvalues()[0];
    let scores = eigen.u() * &Array1::from(eigen.singular_values()[..eigen.rank()].to_vec()).insert_axis(Axis(0));
    Ok(PartialPca {
        variable: table.variable().to_string(),
        eigen,
        first_eigenvalue,
        weight: T::one() / first_eigenvalue,
        scores,
    })
}

/// Per-axis (columns) contributions of a set of points (rows).
#[derive(Debug, Clone, PartialEq)]
pub struct Contributions<T> {
    /// Share of each axis' inertia due to each point; columns sum to 1.
    pub cr: Array2<T>,
    /// Squared cosines; rows sum to 1 for points off the origin.
    pub ca: Array2<T>,
}

/// Fitted multiple factor analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct MfaModel<T> {
    variables: Vec<String>,
    offsets: Vec<usize>,
    roles: Vec<ColumnRole<T>>,
    data: Array2<T>,
    unit_weights: Array1<T>,
    metric: Array1<T>,
    partials: Vec<Option<PartialPca<T>>>,
    block_weights: Vec<T>,
    eigen: EigenSystem<T>,
    eigenvalues: Vec<T>,
    percent: Vec<T>,
    cumulative: Vec<T>,
    total_inertia: T,
    row_coords: Array2<T>,
    partial_coords: Vec<Option<Array2<T>>>,
    column_coords: Array2<T>,
    variable_scores: Array2<T>,
    compromise: Option<Array2<T>>,
    unit_contributions: Contributions<T>,
    column_contributions: Contributions<T>,
    partial_axis_correlations: Vec<Option<Array2<T>>>,
    rv: Array2<T>,
}

/// Runs both steps of the analysis. Blocks whose active columns carry no
/// variance are excluded from the fit and reported by
/// [`MfaModel::degenerate_blocks`]; if every block is degenerate the fit fails.
pub fn global_mfa<T: Scalar>(blocks: &BlockSet<T>, weights: &UnitWeights<T>) -> Result<MfaModel<T>> {
    let n = blocks.units();
    if weights.len() != n {
        return Err(Error::domain(format!("{} unit weights for {n} units", weights.len())));
    }
    if let Some(b) = blocks.blocks().iter().find(|b| !b.is_centered()) {
        return Err(Error::NotCentered(b.variable().to_string()));
    }

    let mut partials = Vec::with_capacity(blocks.len());
    for (table, roles) in blocks.blocks().iter().zip(blocks.roles()) {
        match partial_pca_with_roles(table, weights, roles) {
            Ok(p) => partials.push(Some(p)),
            Err(Error::DegenerateBlock(_)) => partials.push(None),
            Err(e) => return Err(e),
        }
    }
    if partials.iter().all(Option::is_none) {
        let names = blocks.blocks().iter().map(|b| b.variable().to_string()).collect();
        return Err(Error::AllBlocksDegenerate(names));
    }
    let block_weights: Vec<T> = partials
        .iter()
        .map(|p| p.as_ref().map_or(T::zero(), |p| p.weight))
        .collect();

    let global = concatenate(blocks)?;
    let offsets = global.offsets().to_vec();
    let roles = global.roles().to_vec();
    let data = global.data().to_owned();
    let mut metric = Array1::zeros(data.ncols());
    for (j, &a) in block_weights.iter().enumerate() {
        for k in offsets[j]..offsets[j + 1] {
            metric[k] = a * roles[k].factor();
        }
    }
    let w = weights.as_array().clone();
    let eigen = weighted_svd(data.view(), &w, &metric)?;
    let rank = eigen.rank();
    let eigenvalues = eigen.eigenvalues();
    let explained: T = eigenvalues.iter().copied().sum();
    let hundred = T::lit(100.0);
    let percent: Vec<T> = eigenvalues.iter().map(|&e| hundred * e / explained).collect();
    let cumulative: Vec<T> = percent
        .iter()
        .scan(T::zero(), |acc, &p| {
            *acc = *acc + p;
            Some(*acc)
        })
        .collect();

    let column_sq_norms: Array1<T> = data
        .axis_iter(Axis(1))
        .map(|c| c.iter().zip(w.iter()).map(|(&x, &wi)| wi * x * x).sum())
        .collect();
    let total_inertia = metric.iter().zip(column_sq_norms.iter()).map(|(&a, &s)| a * s).sum();

    let lambdas = Array1::from(eigen.singular_values()[..rank].to_vec());
    let row_coords = eigen.u() * &lambdas.view().insert_axis(Axis(0));

    // Q^T W U: equals V Λ on active columns and projects supplementary ones.
    let weighted_u = eigen.u() * &w.view().insert_axis(Axis(1));
    let column_coords = data.t().dot(&weighted_u);

    let fitted = partials.iter().filter(|p| p.is_some()).count();
    let fitted_t = T::lit(fitted as f64);
    let mut variable_scores = column_coords.clone();
    let mut partial_coords = Vec::with_capacity(blocks.len());
    for (j, &a) in block_weights.iter().enumerate() {
        let range = offsets[j]..offsets[j + 1];
        variable_scores.slice_mut(s![range.clone(), ..]).mapv_inplace(|x| a * x);
        if partials[j].is_none() {
            partial_coords.push(None);
            continue;
        }
        let block = data.slice(s![.., range.clone()]);
        let v_block = eigen.v().slice(s![range.clone(), ..]);
        let factors: Array1<T> = roles[range].iter().map(|r| r.factor()).collect();
        let weighted_v = &v_block * &factors.view().insert_axis(Axis(1));
        partial_coords.push(Some(block.dot(&weighted_v) * (fitted_t * a)));
    }

    let widths: Vec<usize> = (0..blocks.len())
        .filter(|&j| partials[j].is_some())
        .map(|j| offsets[j + 1] - offsets[j])
        .collect();
    let compromise = if widths.windows(2).all(|w| w[0] == w[1]) {
        let mut acc = Array2::zeros((widths[0], rank));
        for j in (0..blocks.len()).filter(|&j| partials[j].is_some()) {
            acc += &variable_scores.slice(s![offsets[j]..offsets[j + 1], ..]);
        }
        Some(acc / fitted_t)
    } else {
        None
    };

    let unit_contributions = contributions_of(&row_coords, &w, &eigenvalues);
    let column_contributions = contributions_of(&column_coords, &metric, &eigenvalues);

    let partial_axis_correlations = partials
        .iter()
        .map(|p| {
            p.as_ref().map(|p| {
                let dims = p.scores.ncols();
                Array2::from_shape_fn((dims, rank), |(d, alpha)| {
                    weighted_correlation(p.scores.column(d), row_coords.column(alpha), w.view())
                        .unwrap_or(T::zero())
                })
            })
        })
        .collect();

    let p = blocks.len();
    let mut rv = Array2::zeros((p, p));
    for a in 0..p {
        for b in a..p {
            let value = rv_coefficient(&blocks.blocks()[a], &blocks.blocks()[b], weights).unwrap_or(T::zero());
            rv[[a, b]] = value;
            rv[[b, a]] = value;
        }
    }

    Ok(MfaModel {
        variables: blocks.blocks().iter().map(|b| b.variable().to_string()).collect(),
        offsets,
        roles,
        data,
        unit_weights: w,
        metric,
        partials,
        block_weights,
        eigen,
        eigenvalues,
        percent,
        cumulative,
        total_inertia,
        row_coords,
        partial_coords,
        column_coords,
        variable_scores,
        compromise,
        unit_contributions,
        column_contributions,
        partial_axis_correlations,
        rv,
    })
}

/// `cr_{kα} = m_k x²_{kα} / λ²_α`, `ca_{kα} = x²_{kα} / Σ_β x²_{kβ}`.
fn contributions_of<T: Scalar>(coords: &Array2<T>, mass: &Array1<T>, eigenvalues: &[T]) -> Contributions<T> {
    let (rows, axes) = coords.dim();
    let mut cr = Array2::zeros((rows, axes));
    let mut ca = Array2::zeros((rows, axes));
    for k in 0..rows {
        let total: T = coords.row(k).iter().map(|&x| x * x).sum();
        for alpha in 0..axes {
            let sq = coords[[k, alpha]] * coords[[k, alpha]];
            cr[[k, alpha]] = mass[k] * sq / eigenvalues[alpha];
            if total > T::zero() {
                ca[[k, alpha]] = sq / total;
            }
        }
    }
    Contributions { cr, ca }
}

/// Weighted Pearson correlation; `None` when either series is constant.
pub fn weighted_correlation<T: Scalar>(x: ArrayView1<'_, T>, y: ArrayView1<'_, T>, w: ArrayView1<'_, T>) -> Option<T> {
    let total: T = w.iter().copied().sum();
    let mx = x.iter().zip(w.iter()).map(|(&a, &b)| a * b).sum::<T>() / total;
    let my = y.iter().zip(w.iter()).map(|(&a, &b)| a * b).sum::<T>() / total;
    let (mut sxx, mut syy, mut sxy) = (T::zero(), T::zero(), T::zero());
    for ((&a, &b), &wi) in x.iter().zip(y.iter()).zip(w.iter()) {
        let (dx, dy) = (a - mx, b - my);
        sxx = sxx + wi * dx * dx;
        syy = syy + wi * dy * dy;
        sxy = sxy + wi * dx * dy;
    }
    let scale = |m: T, v: ArrayView1<'_, T>| {
        let mag = v.iter().fold(m.abs(), |acc, e| acc.max(e.abs()));
        T::epsilon() * T::lit(64.0) * mag.max(T::min_positive_value())
    };
    if sxx.sqrt() <= scale(mx, x) || syy.sqrt() <= scale(my, y) {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).max(-T::one()).min(T::one()))
}

impl<T: Scalar> MfaModel<T> {
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn units(&self) -> usize {
        self.data.nrows()
    }

    /// Number of retained axes `L`.
    pub fn rank(&self) -> usize {
        self.eigen.rank()
    }

    pub fn eigen(&self) -> &EigenSystem<T> {
        &self.eigen
    }

    /// `λ²_α` of the retained axes.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn percent_inertia(&self) -> &[T] {
        &self.percent
    }

    pub fn cumulative_percent(&self) -> &[T] {
        &self.cumulative
    }

    /// `Σ_j a_j tr(S_j)` over active columns.
    pub fn total_inertia(&self) -> T {
        self.total_inertia
    }

    /// Centered global quantile matrix.
    pub fn data(&self) -> ArrayView2<'_, T> {
        self.data.view()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn column_roles(&self) -> &[ColumnRole<T>] {
        &self.roles
    }

    pub fn unit_weights(&self) -> &Array1<T> {
        &self.unit_weights
    }

    /// Diagonal of the column metric `A`.
    pub fn column_metric(&self) -> &Array1<T> {
        &self.metric
    }

    pub fn block_weights(&self) -> &[T] {
        &self.block_weights
    }

    pub fn partials(&self) -> &[Option<PartialPca<T>>] {
        &self.partials
    }

    pub fn degenerate_blocks(&self) -> Vec<&str> {
        self.variables
            .iter()
            .zip(&self.partials)
            .filter(|(_, p)| p.is_none())
            .map(|(v, _)| v.as_str())
            .collect()
    }

    pub fn block_index(&self, variable: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == variable)
            .ok_or_else(|| Error::UnknownId { kind: "variable", id: variable.to_string() })
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        let available = self.eigen.singular_values().len();
        if axis >= available {
            return Err(Error::AxisOutOfRange { axis, available });
        }
        Ok(())
    }

    fn check_block(&self, block: usize) -> Result<()> {
        if block >= self.variables.len() {
            return Err(Error::UnknownId { kind: "block", id: block.to_string() });
        }
        Ok(())
    }

    /// `Ψ_{j,α} = a_j Q_j^T W u_α` over the columns of block `j`; zero on null axes.
    pub fn variable_scores(&self, block: usize, axis: usize) -> Result<Array1<T>> {
        self.check_block(block)?;
        self.check_axis(axis)?;
        let width = self.offsets[block + 1] - self.offsets[block];
        if axis >= self.rank() {
            return Ok(Array1::zeros(width));
        }
        Ok(self
            .variable_scores
            .slice(s![self.offsets[block]..self.offsets[block + 1], axis])
            .to_owned())
    }

    /// All variable scores, `columns x L`.
    pub fn all_variable_scores(&self) -> &Array2<T> {
        &self.variable_scores
    }

    /// Block average of the variable scores (blocks of equal width only).
    pub fn compromise_scores(&self) -> Option<&Array2<T>> {
        self.compromise.as_ref()
    }

    /// Unprojected column coordinates `Q^T W U`.
    pub fn column_coordinates(&self) -> &Array2<T> {
        &self.column_coords
    }

    /// Row scores `λ_α u_α` on one axis.
    pub fn individual_coordinates(&self, axis: usize) -> Result<Array1<T>> {
        self.check_axis(axis)?;
        if axis >= self.rank() {
            return Err(Error::NullAxis(axis));
        }
        Ok(self.row_coords.column(axis).to_owned())
    }

    /// All row scores, `n x L`.
    pub fn row_coordinates(&self) -> &Array2<T> {
        &self.row_coords
    }

    /// `p a_j Q_j D_j v_{α,j}`; their block average is the global coordinate.
    pub fn partial_individual_coordinates(&self, block: usize, axis: usize) -> Result<Array1<T>> {
        self.check_block(block)?;
        self.check_axis(axis)?;
        if axis >= self.rank() {
            return Err(Error::NullAxis(axis));
        }
        let coords = self.partial_coords[block]
            .as_ref()
            .ok_or_else(|| Error::DegenerateBlock(self.variables[block].clone()))?;
        Ok(coords.column(axis).to_owned())
    }

    pub fn partial_coordinates(&self, block: usize) -> Option<&Array2<T>> {
        self.partial_coords.get(block).and_then(Option::as_ref)
    }

    pub fn unit_contributions(&self) -> &Contributions<T> {
        &self.unit_contributions
    }

    pub fn column_contributions(&self) -> &Contributions<T> {
        &self.column_contributions
    }

    /// Correlations of each partial PCA dimension (rows) with the global axes.
    pub fn partial_axis_correlations(&self, block: usize) -> Option<&Array2<T>> {
        self.partial_axis_correlations.get(block).and_then(Option::as_ref)
    }

    pub fn rv_matrix(&self) -> &Array2<T> {
        &self.rv
    }

    /// Correlation of a global column with the row scores on `axis`;
    /// `None` for a constant column.
    pub fn column_axis_correlation(&self, column: usize, axis: usize) -> Option<T> {
        weighted_correlation(
            self.data.column(column),
            self.row_coords.column(axis),
            self.unit_weights.view(),
        )
    }
}

/// `RV = tr(S12 S21) / sqrt(tr(S11²) tr(S22²))` with `S_uv = Q_u^T W Q_v`.
pub fn rv_coefficient<T: Scalar>(a: &QuantileTable<T>, b: &QuantileTable<T>, weights: &UnitWeights<T>) -> Result<T> {
    for t in [a, b] {
        if !t.is_centered() {
            return Err(Error::NotCentered(t.variable().to_string()));
        }
        if t.units() != weights.len() {
            return Err(Error::domain("tables and weights disagree on the number of units"));
        }
    }
    let w = weights.as_array().view().insert_axis(Axis(1));
    let wb = &b.entries() * &w;
    let wa = &a.entries() * &w;
    let s12 = a.entries().t().dot(&wb);
    let s11 = a.entries().t().dot(&wa);
    let s22 = b.entries().t().dot(&wb);
    let sq = |m: &Array2<T>| m.iter().map(|&x| x * x).sum::<T>();
    let (n11, n22) = (sq(&s11), sq(&s22));
    if n11 <= T::zero() || n22 <= T::zero() {
        let id = if n11 <= T::zero() { a.variable() } else { b.variable() };
        return Err(Error::DegenerateBlock(id.to_string()));
    }
    Ok((sq(&s12) / (n11 * n22).sqrt()).min(T::one()))
}

/// The four moments correlated with the axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Moment {
    Mean,
    Std,
    Skewness,
    Kurtosis,
}

impl Moment {
    pub const ALL: [Moment; 4] = [Moment::Mean, Moment::Std, Moment::Skewness, Moment::Kurtosis];

    pub fn name(&self) -> &'static str {
        match self {
            Moment::Mean => "mean",
            Moment::Std => "std",
            Moment::Skewness => "skewness",
            Moment::Kurtosis => "kurtosis",
        }
    }

    fn of<T: Copy>(&self, s: &DistributionSummary<T>) -> T {
        match self {
            Moment::Mean => s.mean,
            Moment::Std => s.std,
            Moment::Skewness => s.skewness,
            Moment::Kurtosis => s.kurtosis,
        }
    }
}

/// Pearson correlation; a constant series gives `value = 0` and `degenerate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCorrelation<T> {
    pub value: T,
    pub degenerate: bool,
}

/// Correlations `[variable][axis][moment]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentAxisDiagnostics<T> {
    pub variables: Vec<String>,
    pub table: Vec<Vec<[MomentCorrelation<T>; 4]>>,
}

impl<T: Scalar> MomentAxisDiagnostics<T> {
    pub fn get(&self, variable: usize, axis: usize, moment: Moment) -> MomentCorrelation<T> {
        self.table[variable][axis][moment as usize]
    }

    /// Moment with the largest absolute correlation on an axis, if any.
    pub fn dominant(&self, variable: usize, axis: usize) -> Option<(Moment, T)> {
        Moment::ALL
            .iter()
            .map(|&m| (m, self.get(variable, axis, m)))
            .filter(|(_, c)| !c.degenerate)
            .max_by(|a, b| a.1.value.abs().partial_cmp(&b.1.value.abs()).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(m, c)| (m, c.value))
    }
}

/// Correlates each column of `coords` (units x axes) with the four moment series.
pub fn moment_correlations<T: Scalar>(
    coords: ArrayView2<'_, T>,
    summaries: &[DistributionSummary<T>],
) -> Result<Vec<[MomentCorrelation<T>; 4]>> {
    if coords.nrows() != summaries.len() {
        return Err(Error::domain(format!(
            "{} summaries for {} units",
            summaries.len(),
            coords.nrows()
        )));
    }
    let w = Array1::from_elem(summaries.len(), T::one());
    let series: Vec<Array1<T>> = Moment::ALL
        .iter()
        .map(|m| summaries.iter().map(|s| m.of(s)).collect())
        .collect();
    Ok(coords
        .axis_iter(Axis(1))
        .map(|axis| {
            std::array::from_fn(|m| match weighted_correlation(axis, series[m].view(), w.view()) {
                Some(value) => MomentCorrelation { value, degenerate: false },
                None => MomentCorrelation { value: T::zero(), degenerate: true },
            })
        })
        .collect())
}

/// Correlates the partial coordinates of each block with the moments of that
/// block's distributions. `summaries[j][i]` describes unit `i` on variable `j`.
pub fn moment_axis_diagnostics<T: Scalar>(
    model: &MfaModel<T>,
    summaries: &[Vec<DistributionSummary<T>>],
) -> Result<MomentAxisDiagnostics<T>> {
    if summaries.len() != model.variables.len() {
        return Err(Error::domain(format!(
            "{} summary series for {} variables",
            summaries.len(),
            model.variables.len()
        )));
    }
    let degenerate = MomentCorrelation { value: T::zero(), degenerate: true };
    let mut table = Vec::with_capacity(summaries.len());
    for (j, series) in summaries.iter().enumerate() {
        match model.partial_coordinates(j) {
            Some(coords) => table.push(moment_correlations(coords.view(), series)?),
            None => table.push(vec![[degenerate; 4]; model.rank()]),
        }
    }
    Ok(MomentAxisDiagnostics { variables: model.variables.clone(), table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::EquiDepthHistogram;
    use crate::quantile::{build_quantile_table, center_columns, ExtremePolicy};
    use ndarray::array;

    fn table(name: &str, rows: &[&[f64]]) -> QuantileTable<f64> {
        let hs: Vec<_> = rows.iter().map(|r| EquiDepthHistogram::from_bounds(r).unwrap()).collect();
        center_columns(build_quantile_table(name, &hs, rows[0].len() - 1).unwrap()).unwrap()
    }

    fn sample_a() -> QuantileTable<f64> {
        table(
            "a",
            &[&[0.0, 1.0, 2.5], &[0.5, 1.2, 2.0], &[1.0, 3.0, 3.5], &[-1.0, 0.0, 4.0], &[0.2, 0.4, 0.9]],
        )
    }

    fn sample_b() -> QuantileTable<f64> {
        table(
            "b",
            &[
                &[1.0, 2.0, 2.5, 6.0],
                &[0.0, 0.5, 1.0, 1.5],
                &[2.0, 2.1, 2.2, 2.3],
                &[-1.0, 1.0, 3.0, 5.0],
                &[0.3, 0.6, 2.0, 2.2],
            ],
        )
    }

    #[test]
    fn degenerate_block_errors() {
        let t = table("flat", &[&[1.0, 2.0], &[1.0, 2.0]]);
        assert!(matches!(partial_pca(&t, &UnitWeights::uniform(2)), Err(Error::DegenerateBlock(_))));
        let set = BlockSet::new(vec![t]).unwrap();
        assert!(matches!(global_mfa(&set, &UnitWeights::uniform(2)), Err(Error::AllBlocksDegenerate(_))));
    }

    #[test]
    fn rank_one_block_explains_everything() {
        let t = table("r1", &[&[0.0, 1.0, 2.0], &[0.0, 2.0, 4.0], &[0.0, 3.0, 6.0]]);
        let p = partial_pca(&t, &UnitWeights::uniform(3)).unwrap();
        assert_eq!(p.eigen.rank(), 1);
        assert!((p.percent_inertia()[0] - 100.0).abs() < 1e-12);
        assert!((p.weight * p.first_eigenvalue - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_block_first_eigenvalue_is_one() {
        let set = BlockSet::new(vec![sample_a()]).unwrap();
        let m = global_mfa(&set, &UnitWeights::uniform(5)).unwrap();
        assert!((m.eigenvalues()[0] - 1.0).abs() < 1e-12);
        for axis in 0..m.rank() {
            let g = m.individual_coordinates(axis).unwrap();
            let p = m.partial_individual_coordinates(0, axis).unwrap();
            assert!((&g - &p).iter().all(|d| d.abs() < 1e-12));
            let compromise = m.compromise_scores().unwrap().column(axis).to_owned();
            assert_eq!(compromise, m.variable_scores(0, axis).unwrap());
        }
    }

    #[test]
    fn duplicated_block_doubles_first_eigenvalue() {
        let set = BlockSet::new(vec![sample_a(), sample_a()]).unwrap();
        let m = global_mfa(&set, &UnitWeights::uniform(5)).unwrap();
        assert!((m.eigenvalues()[0] - 2.0).abs() < 1e-12);
        assert!((m.rv_matrix()[[0, 1]] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_block_contracts() {
        let set = BlockSet::new(vec![sample_a(), sample_b()]).unwrap();
        let w = UnitWeights::uniform(5);
        let m = global_mfa(&set, &w).unwrap();
        let sum: f64 = m.eigenvalues().iter().sum();
        assert!((sum - m.total_inertia()).abs() < 1e-10);
        assert!((m.cumulative_percent().last().unwrap() - 100.0).abs() < 1e-10);
        assert!(m.compromise_scores().is_none());
        for axis in 0..m.rank() {
            let g = m.individual_coordinates(axis).unwrap();
            let avg = (m.partial_individual_coordinates(0, axis).unwrap()
                + m.partial_individual_coordinates(1, axis).unwrap())
                / 2.0;
            assert!((&g - &avg).iter().all(|d| d.abs() < 1e-10));
            let cr: f64 = m.unit_contributions().cr.column(axis).sum();
            assert!((cr - 1.0).abs() < 1e-10);
            let ccr: f64 = m.column_contributions().cr.column(axis).sum();
            assert!((ccr - 1.0).abs() < 1e-10);
        }
        for i in 0..5 {
            assert!((m.unit_contributions().ca.row(i).sum() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn axis_errors_and_null_axes() {
        let set = BlockSet::new(vec![sample_a()]).unwrap();
        let m = global_mfa(&set, &UnitWeights::uniform(5)).unwrap();
        let total = m.eigen().singular_values().len();
        assert!(matches!(m.variable_scores(0, total), Err(Error::AxisOutOfRange { .. })));
        assert!(m.individual_coordinates(total).is_err());
        if m.rank() < total {
            assert!(m.variable_scores(0, m.rank()).unwrap().iter().all(|&x| x == 0.0));
            assert!(matches!(m.individual_coordinates(m.rank()), Err(Error::NullAxis(_))));
        }
    }

    #[test]
    fn supplementary_extremes_do_not_move_axes() {
        let blocks = vec![sample_a(), sample_b()];
        let w = UnitWeights::uniform(5);
        let supp = global_mfa(&BlockSet::with_extremes(blocks.clone(), ExtremePolicy::Supplementary).unwrap(), &w).unwrap();
        assert!(supp.column_metric()[0] == 0.0 && supp.column_metric()[2] == 0.0);
        assert_eq!(supp.column_contributions().cr[[0, 0]], 0.0);
        assert!(supp.all_variable_scores()[[0, 0]] != 0.0);

        // Changing a supplementary column leaves the fit untouched.
        let mut rows_a = sample_a().raw_entries();
        for (i, mut r) in rows_a.rows_mut().into_iter().enumerate() {
            r[0] -= i as f64;
        }
        let hs: Vec<_> = rows_a
            .rows()
            .into_iter()
            .map(|r| EquiDepthHistogram::from_bounds(&r.to_vec()).unwrap())
            .collect();
        let a2 = center_columns(build_quantile_table("a", &hs, 2).unwrap()).unwrap();
        let other = global_mfa(&BlockSet::with_extremes(vec![a2, sample_b()], ExtremePolicy::Supplementary).unwrap(), &w).unwrap();
        for (x, y) in supp.eigenvalues().iter().zip(other.eigenvalues()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rv_properties() {
        let w = UnitWeights::uniform(5);
        let a = sample_a();
        assert!((rv_coefficient(&a, &a, &w).unwrap() - 1.0).abs() < 1e-12);
        let ab = rv_coefficient(&a, &sample_b(), &w).unwrap();
        let ba = rv_coefficient(&sample_b(), &a, &w).unwrap();
        assert!((ab - ba).abs() < 1e-15);
        assert!((0.0..=1.0).contains(&ab));
        let flat = table("flat", &[&[1.0, 2.0], &[1.0, 2.0], &[1.0, 2.0], &[1.0, 2.0], &[1.0, 2.0]]);
        assert!(rv_coefficient(&a, &flat, &w).is_err());
    }

    #[test]
    fn moment_correlations_flag_constant_series() {
        let coords: Array2<f64> = array![[1.0], [2.0], [3.0]];
        let s = DistributionSummary { mean: 1.0, std: 2.0, skewness: 0.0, kurtosis: 3.0, degenerate: false };
        let out = moment_correlations(coords.view(), &[s, s, s]).unwrap();
        assert!(out[0].iter().all(|c| c.degenerate && c.value == 0.0));
        let varied = [
            DistributionSummary { mean: 1.0, ..s },
            DistributionSummary { mean: 2.0, ..s },
            DistributionSummary { mean: 3.0, ..s },
        ];
        let out = moment_correlations(coords.view(), &varied).unwrap();
        assert!((out[0][Moment::Mean as usize].value - 1.0).abs() < 1e-15);
    }
}
