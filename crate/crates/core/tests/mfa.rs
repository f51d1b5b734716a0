use distmfa::quantile::covariance_block;
use distmfa::{
    build_quantile_table, center_columns, global_mfa, rv_coefficient, BlockSet, EquiDepthHistogram, ExtremePolicy,
    Model64, QuantileTable, UnitWeights,
};
use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array2, Axis};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_table(rng: &mut ChaCha8Rng, name: &str, n: usize, k: usize) -> QuantileTable<f64> {
    let hists: Vec<EquiDepthHistogram<f64>> = (0..n)
        .map(|_| {
            let mut b = vec![rng.random_range(-5.0..5.0)];
            for _ in 0..k {
                b.push(b[b.len() - 1] + rng.random_range(0.0..2.0));
            }
            EquiDepthHistogram::from_bounds(&b).unwrap()
        })
        .collect();
    center_columns(build_quantile_table(name, &hists, k).unwrap()).unwrap()
}

fn random_instance(rng: &mut ChaCha8Rng) -> (BlockSet<f64>, Model64) {
    let n = rng.random_range(3..=10);
    let p = rng.random_range(1..=3);
    let mut budget = 12;
    let mut tables = Vec::new();
    for j in 0..p {
        let left = p - j - 1;
        let max_k = (budget - 2 * left - 1).min(5);
        let k = rng.random_range(1..=max_k);
        budget -= k + 1;
        tables.push(random_table(rng, &format!("v{j}"), n, k));
    }
    let policy = match rng.random_range(0..3) {
        0 => ExtremePolicy::Active,
        1 => ExtremePolicy::Weight(0.5),
        _ if tables.iter().all(|t| t.quantiles() >= 2) => ExtremePolicy::Supplementary,
        _ => ExtremePolicy::Active,
    };
    let blocks = BlockSet::with_extremes(tables, policy).unwrap();
    let model = global_mfa(&blocks, &UnitWeights::uniform(n)).unwrap();
    (blocks, model)
}

fn to_dmatrix(m: &Array2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[[i, j]])
}

/// Eigenvalues (descending) and vectors of a dense symmetric matrix.
fn dense_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let e = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..e.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(e.eigenvectors.nrows(), order.len(), |r, c| e.eigenvectors[(r, order[c])]);
    (values, vectors)
}

#[test]
fn eigen_solution_matches_dense_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..25 {
        let (blocks, model) = random_instance(&mut rng);
        let n = model.units();
        let w = 1.0 / n as f64;

        // Step one by the oracle: largest eigenvalue of each weighted covariance.
        let mut metric = Vec::new();
        for (table, roles) in blocks.blocks().iter().zip(blocks.roles()) {
            let q = to_dmatrix(&table.entries().to_owned());
            let f = nalgebra::DVector::from_iterator(roles.len(), roles.iter().map(|r| r.factor().sqrt()));
            let scaled = DMatrix::from_fn(q.nrows(), q.ncols(), |i, k| q[(i, k)] * f[k]);
            let (values, _) = dense_eigen(scaled.transpose() * &scaled * w);
            let a = 1.0 / values[0];
            metric.extend(roles.iter().map(|r| a * r.factor()));
        }
        for (m, o) in model.column_metric().iter().zip(&metric) {
            assert!((m - o).abs() <= 1e-8 * o.max(1.0));
        }

        // Step two: eigen-decomposition of A^1/2 Q^T W Q A^1/2.
        let q = to_dmatrix(&model.data().to_owned());
        let half = nalgebra::DVector::from_iterator(metric.len(), metric.iter().map(|a| a.sqrt()));
        let scaled = DMatrix::from_fn(q.nrows(), q.ncols(), |i, k| q[(i, k)] * half[k]);
        let (values, vectors) = dense_eigen(scaled.transpose() * &scaled * w);
        let rank = model.rank();
        for (a, &ev) in model.eigenvalues().iter().enumerate() {
            assert!((ev - values[a]).abs() <= 1e-8, "axis {a}: {ev} vs {}", values[a]);
        }
        assert!(values[rank..].iter().all(|&v| v.abs() <= 1e-8));

        for a in 0..rank {
            let separated = (a == 0 || values[a - 1] - values[a] > 1e-6) && (a + 1 == values.len() || values[a] - values[a + 1] > 1e-6);
            if !separated {
                continue;
            }
            let mut v: Vec<f64> = (0..metric.len())
                .map(|k| if metric[k] > 0.0 { vectors[(k, a)] / half[k] } else { 0.0 })
                .collect();
            let lead = (0..v.len()).fold(0, |b, k| if v[k].abs() > v[b].abs() { k } else { b });
            if v[lead] < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            for (k, &expected) in v.iter().enumerate() {
                let got = model.eigen().v()[[k, a]];
                assert!((got - expected).abs() <= 1e-8 * expected.abs().max(1.0), "axis {a} col {k}: {got} vs {expected}");
            }
        }
    }
}

fn check_contracts(blocks: &BlockSet<f64>, model: &Model64) {
    let n = model.units();
    let w = model.unit_weights();
    let u = model.eigen().u();
    let v = model.eigen().v();
    let rank = model.rank();
    let utwu = u.t().dot(&(u * &w.view().insert_axis(Axis(1))));
    let vtav = v.t().dot(&(v * &model.column_metric().view().insert_axis(Axis(1))));
    for a in 0..rank {
        for b in 0..rank {
            let id = if a == b { 1.0 } else { 0.0 };
            assert!((utwu[[a, b]] - id).abs() <= 1e-8);
            assert!((vtav[[a, b]] - id).abs() <= 1e-8);
        }
    }

    for (j, table) in blocks.blocks().iter().enumerate() {
        let Some(p) = &model.partials()[j] else { continue };
        // First eigenvalue of the block scaled by sqrt(a_j) is one.
        let roles = &blocks.roles()[j];
        let scaled = {
            let mut e = table.entries().to_owned();
            for (k, r) in roles.iter().enumerate() {
                e.column_mut(k).mapv_inplace(|x| x * (p.weight * r.factor()).sqrt());
            }
            e
        };
        let (values, _) = dense_eigen(to_dmatrix(&(scaled.t().dot(&scaled) / n as f64)));
        assert!((values[0] - 1.0).abs() <= 1e-10);
    }

    let fitted: Vec<usize> = (0..blocks.len()).filter(|&j| model.partials()[j].is_some()).collect();
    let mut avg = Array2::<f64>::zeros((n, rank));
    for &j in &fitted {
        avg += model.partial_coordinates(j).unwrap();
    }
    avg /= fitted.len() as f64;
    for (x, y) in avg.iter().zip(model.row_coordinates().iter()) {
        assert!((x - y).abs() <= 1e-8);
    }

    if let Some(compromise) = model.compromise_scores() {
        let width = compromise.nrows();
        let mut acc = Array2::<f64>::zeros((width, rank));
        for &j in &fitted {
            let start = model.offsets()[j];
            acc += &model.all_variable_scores().slice(ndarray::s![start..start + width, ..]);
        }
        assert_eq!(&(acc / fitted.len() as f64), compromise);
    }

    let uc = model.unit_contributions();
    for a in 0..rank {
        assert!((uc.cr.column(a).sum() - 1.0).abs() <= 1e-8);
    }
    for i in 0..n {
        let total = uc.ca.row(i).sum();
        assert!(total == 0.0 || (total - 1.0).abs() <= 1e-8);
    }
    let cc = model.column_contributions();
    for a in 0..rank {
        assert!((cc.cr.column(a).sum() - 1.0).abs() <= 1e-8);
    }
}

#[test]
fn contracts_hold_on_random_fits() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let (blocks, model) = random_instance(&mut rng);
        check_contracts(&blocks, &model);
    }
}

#[test]
fn single_precision_fit_agrees_with_double() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 8;
    let bounds: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let mut b = vec![rng.random_range(-5.0..5.0)];
            for _ in 0..4 {
                b.push(b[b.len() - 1] + rng.random_range(0.1..2.0));
            }
            b
        })
        .collect();
    let h64: Vec<EquiDepthHistogram<f64>> = bounds.iter().map(|b| EquiDepthHistogram::from_bounds(b).unwrap()).collect();
    let h32: Vec<EquiDepthHistogram<f32>> = bounds
        .iter()
        .map(|b| EquiDepthHistogram::from_bounds(&b.iter().map(|&x| x as f32).collect::<Vec<_>>()).unwrap())
        .collect();
    let m64 = global_mfa(
        &BlockSet::new(vec![center_columns(build_quantile_table("x", &h64, 4).unwrap()).unwrap()]).unwrap(),
        &UnitWeights::uniform(n),
    )
    .unwrap();
    let m32 = global_mfa(
        &BlockSet::new(vec![center_columns(build_quantile_table("x", &h32, 4).unwrap()).unwrap()]).unwrap(),
        &UnitWeights::uniform(n),
    )
    .unwrap();
    for (a, b) in m64.eigenvalues().iter().zip(m32.eigenvalues()) {
        assert!((a - *b as f64).abs() < 1e-3);
    }
}

fn pair() -> impl Strategy<Value = (u64, usize, usize, usize)> {
    (any::<u64>(), 2usize..9, 1usize..5, 1usize..5)
}

proptest! {
    #[test]
    fn covariance_blocks_are_psd((seed, n, k, _k2) in pair()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_table(&mut rng, "x", n, k);
        let s = covariance_block(&t, &UnitWeights::uniform(n)).unwrap();
        let (values, _) = dense_eigen(to_dmatrix(&s));
        let scale = values[0].abs().max(1.0);
        prop_assert!(values.iter().all(|&v| v >= -1e-10 * scale));
        for a in 0..s.nrows() {
            for b in 0..s.ncols() {
                prop_assert!((s[[a, b]] - s[[b, a]]).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn rv_is_bounded_symmetric_and_reflexive((seed, n, k1, k2) in pair()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_table(&mut rng, "a", n, k1);
        let b = random_table(&mut rng, "b", n, k2);
        let w = UnitWeights::uniform(n);
        let ab = rv_coefficient(&a, &b, &w).unwrap();
        let ba = rv_coefficient(&b, &a, &w).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!((rv_coefficient(&a, &a, &w).unwrap() - 1.0).abs() <= 1e-12);
    }
}
