//! Single distributional observations and the L2 Wasserstein primitives.
//!
//! A histogram is read as a piecewise-uniform density, so its quantile
//! function is piecewise linear. Every distance, moment and correlation
//! below is computed in closed form on the merged knot grid of the
//! quantile functions involved; nothing is approximated by quadrature.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One weighted interval `[lower, upper]` of a histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin<T> {
    pub lower: T,
    pub upper: T,
    pub weight: T,
}

impl<T: Scalar> Bin<T> {
    pub fn new(lower: T, upper: T, weight: T) -> Self {
        Bin { lower, upper, weight }
    }

    pub fn center(&self) -> T {
        (self.lower + self.upper) / T::lit(2.0)
    }

    pub fn radius(&self) -> T {
        (self.upper - self.lower) / T::lit(2.0)
    }
}

/// Histogram with arbitrary positive bin weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram<T> {
    bins: Vec<Bin<T>>,
    cumulative: Vec<T>,
}

impl<T: Scalar> Histogram<T> {
    /// Validates and builds a histogram. Bins must be sorted, non-overlapping,
    /// carry weights in `(0, 1]` and sum to one within `1e-12`.
    pub fn new(bins: Vec<Bin<T>>) -> Result<Self> {
        if bins.is_empty() {
            return Err(Error::InvalidHistogram("no bins".into()));
        }
        let mut total = T::zero();
        for (h, bin) in bins.iter().enumerate() {
            if !(bin.lower.is_finite() && bin.upper.is_finite() && bin.weight.is_finite()) {
                return Err(Error::NonFinite("histogram bin"));
            }
            if bin.lower > bin.upper {
                return Err(Error::InvalidHistogram(format!(
                    "bin {h} has lower bound {} above upper bound {}",
                    bin.lower, bin.upper
                )));
            }
            if bin.weight <= T::zero() || bin.weight > T::one() + T::weight_tolerance() {
                return Err(Error::InvalidHistogram(format!(
                    "bin {h} has weight {} outside (0, 1]",
                    bin.weight
                )));
            }
            if h > 0 && bins[h - 1].upper > bin.lower {
                return Err(Error::InvalidHistogram(format!(
                    "bins {} and {h} overlap or are not sorted",
                    h - 1
                )));
            }
            total = total + bin.weight;
        }
        if (total - T::one()).abs() > T::weight_tolerance() {
            return Err(Error::InvalidHistogram(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let mut cumulative = Vec::with_capacity(bins.len() + 1);
        cumulative.push(T::zero());
        let mut acc = T::zero();
        for bin in &bins[..bins.len() - 1] {
            acc = acc + bin.weight;
            cumulative.push(acc);
        }
        cumulative.push(T::one());
        if cumulative.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidHistogram(
                "cumulative weights are not strictly increasing".into(),
            ));
        }
        Ok(Histogram { bins, cumulative })
    }

    /// Contiguous histogram from `s + 1` bounds and `s` weights.
    pub fn from_bounds(bounds: &[T], weights: &[T]) -> Result<Self> {
        if bounds.len() != weights.len() + 1 {
            return Err(Error::InvalidHistogram(format!(
                "{} bounds do not match {} weights",
                bounds.len(),
                weights.len()
            )));
        }
        let bins = bounds
            .windows(2)
            .zip(weights)
            .map(|(b, &w)| Bin::new(b[0], b[1], w))
            .collect();
        Histogram::new(bins)
    }

    /// Same as [`Histogram::new`] but rescales the weights to sum exactly to one
    /// when they are off by more than the strict tolerance.
    pub fn normalized(mut bins: Vec<Bin<T>>) -> Result<Self> {
        let total: T = bins.iter().map(|b| b.weight).sum();
        if total.is_finite() && total > T::zero() && (total - T::one()).abs() > T::weight_tolerance() {
            for bin in &mut bins {
                bin.weight = bin.weight / total;
            }
        }
        Histogram::new(bins)
    }

    pub fn point_mass(x: T) -> Result<Self> {
        Histogram::new(vec![Bin::new(x, x, T::one())])
    }

    pub fn uniform(lower: T, upper: T) -> Result<Self> {
        Histogram::new(vec![Bin::new(lower, upper, T::one())])
    }

    pub fn bins(&self) -> &[Bin<T>] {
        &self.bins
    }

    /// Cumulative weights `w_0 = 0 < w_1 < ... < w_s = 1`.
    pub fn cumulative_weights(&self) -> &[T] {
        &self.cumulative
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn min(&self) -> T {
        self.bins[0].lower
    }

    pub fn max(&self) -> T {
        self.bins[self.bins.len() - 1].upper
    }

    /// True when consecutive bins share their boundary exactly.
    pub fn is_contiguous(&self) -> bool {
        self.bins.windows(2).all(|w| w[0].upper == w[1].lower)
    }

    /// Bounds `lower_1, upper_1, ..., upper_s` when contiguous.
    pub fn bounds(&self) -> Option<Vec<T>> {
        if !self.is_contiguous() {
            return None;
        }
        let mut out = Vec::with_capacity(self.bins.len() + 1);
        out.push(self.bins[0].lower);
        out.extend(self.bins.iter().map(|b| b.upper));
        Some(out)
    }

    pub fn quantile_function(&self) -> QuantileFunction<T> {
        QuantileFunction {
            levels: self.cumulative.clone(),
            segments: self.bins.iter().map(|b| (b.lower, b.upper)).collect(),
        }
    }

    /// Re-quantizes onto `k` equal-probability bins.
    pub fn homogenize(&self, k: usize) -> Result<EquiDepthHistogram<T>> {
        self.quantile_function().to_equi_depth(k)
    }

    pub fn translate(&self, shift: T) -> Self {
        Histogram {
            bins: self
                .bins
                .iter()
                .map(|b| Bin::new(b.lower + shift, b.upper + shift, b.weight))
                .collect(),
            cumulative: self.cumulative.clone(),
        }
    }

    /// Exact moments of the piecewise-uniform density.
    pub fn summarize(&self) -> DistributionSummary<T> {
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let mean: T = self.bins.iter().map(|b| b.weight * b.center()).sum();
        let (mut m2, mut m3, mut m4) = (T::zero(), T::zero(), T::zero());
        for bin in &self.bins {
            // X - mean = d + U with U uniform on [-r, r].
            let d = bin.center() - mean;
            let r2 = bin.radius() * bin.radius();
            let d2 = d * d;
            m2 = m2 + bin.weight * (d2 + r2 / three);
            m3 = m3 + bin.weight * d * (d2 + r2);
            m4 = m4 + bin.weight * (d2 * d2 + two * d2 * r2 + r2 * r2 / T::lit(5.0));
        }
        let std = m2.max(T::zero()).sqrt();
        let magnitude = self.min().abs().max(self.max().abs());
        if negligible_spread(std, magnitude) {
            return DistributionSummary {
                mean,
                std: T::zero(),
                skewness: T::zero(),
                kurtosis: T::zero(),
                degenerate: true,
            };
        }
        DistributionSummary {
            mean,
            std,
            skewness: m3 / (m2 * std),
            kurtosis: m4 / (m2 * m2),
            degenerate: false,
        }
    }
}

fn negligible_spread<T: Scalar>(std: T, magnitude: T) -> bool {
    std <= T::epsilon() * T::lit(16.0) * magnitude.max(T::min_positive_value())
}

/// First four moments of one distribution. When the distribution is a point
/// mass, `std` is zero, `skewness` and `kurtosis` are reported as zero and
/// `degenerate` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSummary<T> {
    pub mean: T,
    pub std: T,
    pub skewness: T,
    pub kurtosis: T,
    pub degenerate: bool,
}

/// Equi-depth histogram: `s` bins of probability `1/s` described by centers and radii.
#[derive(Debug, Clone, PartialEq)]
pub struct EquiDepthHistogram<T> {
    centers: Vec<T>,
    radii: Vec<T>,
}

impl<T: Scalar> EquiDepthHistogram<T> {
    pub fn new(centers: Vec<T>, radii: Vec<T>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidHistogram("no bins".into()));
        }
        if centers.len() != radii.len() {
            return Err(Error::InvalidHistogram(format!(
                "{} centers but {} radii",
                centers.len(),
                radii.len()
            )));
        }
        if centers.iter().chain(&radii).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("equi-depth histogram"));
        }
        if let Some(l) = radii.iter().position(|&r| r < T::zero()) {
            return Err(Error::InvalidHistogram(format!("bin {l} has a negative radius")));
        }
        for l in 1..centers.len() {
            if centers[l - 1] + radii[l - 1] > centers[l] - radii[l] + T::contiguity_tolerance() {
                return Err(Error::InvalidHistogram(format!(
                    "bins {} and {l} overlap or are not sorted",
                    l - 1
                )));
            }
        }
        Ok(EquiDepthHistogram { centers, radii })
    }

    /// Builds the histogram whose bin `l` spans `[bounds[l], bounds[l + 1]]`.
    pub fn from_bounds(bounds: &[T]) -> Result<Self> {
        if bounds.len() < 2 {
            return Err(Error::InvalidHistogram("need at least two bounds".into()));
        }
        if bounds.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("histogram bounds"));
        }
        if bounds.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidHistogram("bounds are not non-decreasing".into()));
        }
        let two = T::lit(2.0);
        let centers = bounds.windows(2).map(|w| (w[0] + w[1]) / two).collect();
        let radii = bounds.windows(2).map(|w| (w[1] - w[0]) / two).collect();
        EquiDepthHistogram::new(centers, radii)
    }

    /// Number of bins `s`.
    pub fn bins(&self) -> usize {
        self.centers.len()
    }

    pub fn centers(&self) -> &[T] {
        &self.centers
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn lower(&self, l: usize) -> T {
        self.centers[l] - self.radii[l]
    }

    pub fn upper(&self, l: usize) -> T {
        self.centers[l] + self.radii[l]
    }

    pub fn to_histogram(&self) -> Histogram<T> {
        let s = self.bins();
        let weight = T::one() / T::lit(s as f64);
        let mut bins: Vec<Bin<T>> = (0..s)
            .map(|l| Bin::new(self.lower(l), self.upper(l), weight))
            .collect();
        // Tolerated contiguity slack must not turn into an overlap, and the
        // rounding of c - r / c + r must not open a gap.
        for l in 1..s {
            let prev = bins[l - 1].upper;
            let ulps = T::epsilon() * T::lit(8.0) * prev.abs().max(bins[l].lower.abs());
            if bins[l].lower < prev || bins[l].lower - prev <= ulps {
                bins[l].lower = bins[l - 1].upper.min(bins[l].upper);
            }
        }
        let cumulative = (0..=s).map(|l| T::lit(l as f64) / T::lit(s as f64)).collect();
        Histogram { bins, cumulative }
    }

    pub fn quantile_function(&self) -> QuantileFunction<T> {
        self.to_histogram().quantile_function()
    }

    pub fn summarize(&self) -> DistributionSummary<T> {
        self.to_histogram().summarize()
    }

    pub fn translate(&self, shift: T) -> Self {
        EquiDepthHistogram {
            centers: self.centers.iter().map(|&c| c + shift).collect(),
            radii: self.radii.clone(),
        }
    }
}

/// Piecewise-linear quantile function on `[0, 1]`.
///
/// Segment `k` runs over `[levels[k], levels[k + 1]]` from `segments[k].0` to
/// `segments[k].1`. Consecutive segments may jump upwards (gaps between bins),
/// in which case evaluation at the knot is left-continuous.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileFunction<T> {
    levels: Vec<T>,
    segments: Vec<(T, T)>,
}

impl<T: Scalar> QuantileFunction<T> {
    pub fn new(levels: Vec<T>, segments: Vec<(T, T)>) -> Result<Self> {
        if segments.is_empty() || levels.len() != segments.len() + 1 {
            return Err(Error::domain(format!(
                "quantile function needs m + 1 levels for m segments (got {} and {})",
                levels.len(),
                segments.len()
            )));
        }
        if levels[0] != T::zero() || levels[levels.len() - 1] != T::one() {
            return Err(Error::domain("quantile levels must start at 0 and end at 1"));
        }
        if levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("quantile levels must be strictly increasing"));
        }
        if segments.iter().any(|&(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::NonFinite("quantile function"));
        }
        let monotone = segments.iter().all(|&(a, b)| a <= b)
            && segments.windows(2).all(|w| w[0].1 <= w[1].0);
        if !monotone {
            return Err(Error::domain("quantile values must be non-decreasing"));
        }
        Ok(QuantileFunction { levels, segments })
    }

    /// Continuous quantile function through `(levels[k], values[k])`.
    pub fn from_knots(levels: Vec<T>, values: &[T]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::domain("need at least two knots"));
        }
        let segments = values.windows(2).map(|w| (w[0], w[1])).collect();
        QuantileFunction::new(levels, segments)
    }

    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn segments(&self) -> &[(T, T)] {
        &self.segments
    }

    pub fn min(&self) -> T {
        self.segments[0].0
    }

    pub fn max(&self) -> T {
        self.segments[self.segments.len() - 1].1
    }

    fn snap() -> T {
        T::epsilon() * T::lit(8.0)
    }

    fn interpolate(&self, k: usize, t: T) -> T {
        let (a, b) = self.segments[k];
        let (t0, t1) = (self.levels[k], self.levels[k + 1]);
        let frac = ((t - t0) / (t1 - t0)).max(T::zero()).min(T::one());
        a + (b - a) * frac
    }

    /// `(left limit, right limit)` at `t`; the two differ only at a jump.
    fn limits(&self, t: T) -> (T, T) {
        let t = t.max(T::zero()).min(T::one());
        let m = self.segments.len();
        let snap = Self::snap();
        for k in 0..=m {
            if (t - self.levels[k]).abs() <= snap {
                let left = if k == 0 { self.segments[0].0 } else { self.segments[k - 1].1 };
                let right = if k == m { self.segments[m - 1].1 } else { self.segments[k].0 };
                return (left, right);
            }
        }
        let k = self.levels.partition_point(|&lv| lv <= t).clamp(1, m) - 1;
        let v = self.interpolate(k, t);
        (v, v)
    }

    /// Evaluates `F^{-1}(t)` (left-continuous at jumps, `t` clamped to `[0, 1]`).
    pub fn eval(&self, t: T) -> T {
        let (left, _) = self.limits(t);
        if t <= Self::snap() {
            self.segments[0].0
        } else {
            left
        }
    }

    /// Bins `[F^{-1}((l-1)/k+), F^{-1}(l/k-)]` for `l = 1..=k`.
    pub fn to_equi_depth(&self, k: usize) -> Result<EquiDepthHistogram<T>> {
        if k < 1 {
            return Err(Error::domain("bin count must be at least 1"));
        }
        let kk = T::lit(k as f64);
        let two = T::lit(2.0);
        let mut centers = Vec::with_capacity(k);
        let mut radii = Vec::with_capacity(k);
        for l in 1..=k {
            let lo = self.limits(T::lit((l - 1) as f64) / kk).1;
            let hi = self.limits(T::lit(l as f64) / kk).0;
            let hi = hi.max(lo);
            centers.push((lo + hi) / two);
            radii.push((hi - lo) / two);
        }
        EquiDepthHistogram::new(centers, radii)
    }

    pub fn mean(&self) -> T {
        let two = T::lit(2.0);
        self.segments
            .iter()
            .zip(self.levels.windows(2))
            .map(|(&(a, b), w)| (w[1] - w[0]) * (a + b) / two)
            .sum()
    }
}

/// Both quantile functions restricted to one piece of the merged knot grid.
struct Piece<T> {
    width: T,
    f: (T, T),
    g: (T, T),
}

fn merged_pieces<T: Scalar>(f: &QuantileFunction<T>, g: &QuantileFunction<T>) -> Vec<Piece<T>> {
    let (mf, mg) = (f.segments.len(), g.segments.len());
    let snap = QuantileFunction::<T>::snap();
    let mut pieces = Vec::with_capacity(mf + mg);
    let (mut i, mut j) = (0, 0);
    let mut t = T::zero();
    let mut fa = f.segments[0].0;
    let mut ga = g.segments[0].0;
    while i < mf && j < mg {
        let tf = f.levels[i + 1];
        let tg = g.levels[j + 1];
        let (end, fb, gb, next_f, next_g) = if (tf - tg).abs() <= snap {
            (tf.max(tg), f.segments[i].1, g.segments[j].1, true, true)
        } else if tf < tg {
            (tf, f.segments[i].1, g.interpolate(j, tf), true, false)
        } else {
            (tg, f.interpolate(i, tg), g.segments[j].1, false, true)
        };
        pieces.push(Piece { width: end - t, f: (fa, fb), g: (ga, gb) });
        t = end;
        if next_f {
            i += 1;
            if i < mf {
                fa = f.segments[i].0;
            }
        } else {
            fa = fb;
        }
        if next_g {
            j += 1;
            if j < mg {
                ga = g.segments[j].0;
            }
        } else {
            ga = gb;
        }
    }
    pieces
}

/// `∫ x(t) y(t) dt` over one piece where `x`, `y` are linear with the given endpoints.
fn linear_product<T: Scalar>(width: T, x: (T, T), y: (T, T)) -> T {
    let two = T::lit(2.0);
    width * (two * x.0 * y.0 + x.0 * y.1 + x.1 * y.0 + two * x.1 * y.1) / T::lit(6.0)
}

fn linear_square<T: Scalar>(width: T, a: T, b: T) -> T {
    width * (a * a + a * b + b * b) / T::lit(3.0)
}

/// Squared L2 Wasserstein distance `∫ (F^{-1} - G^{-1})^2 dt`, exact.
pub fn wasserstein_sq_integral<T: Scalar>(f: &QuantileFunction<T>, g: &QuantileFunction<T>) -> T {
    merged_pieces(f, g)
        .iter()
        .map(|p| linear_square(p.width, p.f.0 - p.g.0, p.f.1 - p.g.1))
        .sum::<T>()
        .max(T::zero())
}

/// Squared distance between two equi-depth histograms with the same bin count,
/// from their centers and radii.
pub fn wasserstein_sq_closed<T: Scalar>(
    a: &EquiDepthHistogram<T>,
    b: &EquiDepthHistogram<T>,
) -> Result<T> {
    if a.bins() != b.bins() {
        return Err(Error::BinCountMismatch { left: a.bins(), right: b.bins() });
    }
    let three = T::lit(3.0);
    let sum: T = (0..a.bins())
        .map(|l| {
            let dc = a.centers[l] - b.centers[l];
            let dr = a.radii[l] - b.radii[l];
            dc * dc + dr * dr / three
        })
        .sum();
    Ok(sum / T::lit(a.bins() as f64))
}

/// Squared distance split into location, scale and shape components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceDecomposition<T> {
    pub location: T,
    pub scale: T,
    pub shape: T,
    /// Correlation of the two quantile functions; 1 when either has zero spread.
    pub correlation: T,
}

impl<T: Scalar> DistanceDecomposition<T> {
    pub fn total(&self) -> T {
        self.location + self.scale + self.shape
    }
}

/// Location/scale/shape decomposition of the squared distance. If either
/// distribution has zero spread the correlation is taken as 1 and the shape
/// term vanishes, which keeps the components summing to the squared distance.
pub fn decompose_distance<T: Scalar>(
    f: &QuantileFunction<T>,
    g: &QuantileFunction<T>,
) -> DistanceDecomposition<T> {
    let mu_f = f.mean();
    let mu_g = g.mean();
    let pieces = merged_pieces(f, g);
    let (mut var_f, mut var_g, mut cov) = (T::zero(), T::zero(), T::zero());
    for p in &pieces {
        let x = (p.f.0 - mu_f, p.f.1 - mu_f);
        let y = (p.g.0 - mu_g, p.g.1 - mu_g);
        var_f = var_f + linear_square(p.width, x.0, x.1);
        var_g = var_g + linear_square(p.width, y.0, y.1);
        cov = cov + linear_product(p.width, x, y);
    }
    let mut sd_f = var_f.max(T::zero()).sqrt();
    let mut sd_g = var_g.max(T::zero()).sqrt();
    let degenerate_f = negligible_spread(sd_f, f.min().abs().max(f.max().abs()));
    let degenerate_g = negligible_spread(sd_g, g.min().abs().max(g.max().abs()));
    if degenerate_f {
        sd_f = T::zero();
    }
    if degenerate_g {
        sd_g = T::zero();
    }
    let location = (mu_f - mu_g) * (mu_f - mu_g);
    let scale = (sd_f - sd_g) * (sd_f - sd_g);
    if degenerate_f || degenerate_g {
        return DistanceDecomposition { location, scale, shape: T::zero(), correlation: T::one() };
    }
    let rho = (cov / (sd_f * sd_g)).max(-T::one()).min(T::one());
    let shape = (T::lit(2.0) * (sd_f * sd_g - cov)).max(T::zero());
    DistanceDecomposition { location, scale, shape, correlation: rho }
}

/// Equi-depth histogram with bounds at the type-7 empirical `l/k` quantiles.
pub fn histogram_from_samples<T: Scalar>(samples: &[T], k: usize) -> Result<EquiDepthHistogram<T>> {
    if samples.is_empty() {
        return Err(Error::domain("cannot build a histogram from an empty sample"));
    }
    if k < 1 {
        return Err(Error::domain("bin count must be at least 1"));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("samples"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let bounds: Vec<T> = (0..=k)
        .map(|l| type7_quantile(&sorted, T::lit(l as f64) / T::lit(k as f64)))
        .collect();
    EquiDepthHistogram::from_bounds(&bounds)
}

/// Linear interpolation of order statistics at probability `p` (sorted input).
fn type7_quantile<T: Scalar>(sorted: &[T], p: T) -> T {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = T::lit((n - 1) as f64) * p;
    let lo = h.floor().to_usize().unwrap_or(0).min(n - 1);
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    let frac = h - T::lit(lo as f64);
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

/// Re-quantizes every histogram onto `k` equal-probability bins.
pub fn homogenize<T: Scalar>(histograms: &[Histogram<T>], k: usize) -> Result<Vec<EquiDepthHistogram<T>>> {
    if k < 1 {
        return Err(Error::domain("bin count must be at least 1"));
    }
    histograms.iter().map(|h| h.homogenize(k)).collect()
}

fn common_bins<T: Scalar>(histograms: &[EquiDepthHistogram<T>]) -> Result<usize> {
    let first = histograms
        .first()
        .ok_or_else(|| Error::domain("empty list of histograms"))?;
    for h in histograms {
        if h.bins() != first.bins() {
            return Err(Error::BinCountMismatch { left: first.bins(), right: h.bins() });
        }
    }
    Ok(first.bins())
}

/// Wasserstein barycenter: bin-wise mean of centers and radii.
pub fn frechet_mean<T: Scalar>(histograms: &[EquiDepthHistogram<T>]) -> Result<EquiDepthHistogram<T>> {
    let s = common_bins(histograms)?;
    let n = T::lit(histograms.len() as f64);
    let centers = (0..s)
        .map(|l| histograms.iter().map(|h| h.centers[l]).sum::<T>() / n)
        .collect();
    let radii = (0..s)
        .map(|l| histograms.iter().map(|h| h.radii[l]).sum::<T>() / n)
        .collect();
    EquiDepthHistogram::new(centers, radii)
}

/// Mean squared Wasserstein distance to the barycenter.
pub fn distributional_variance<T: Scalar>(histograms: &[EquiDepthHistogram<T>]) -> Result<T> {
    let barycenter = frechet_mean(histograms)?;
    let mut total = T::zero();
    for h in histograms {
        total = total + wasserstein_sq_closed(h, &barycenter)?;
    }
    Ok(total / T::lit(histograms.len() as f64))
}
