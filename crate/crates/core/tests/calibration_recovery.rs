use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use seer_nf::calibration::{enforce_monotone, train, CalibrationConfig};
use seer_nf::engine;
use seer_nf::experiment::mmre;
use seer_nf::fuzzy::bank_translate;
use seer_nf::{ParameterId, SeerProject, ValueTable};

fn synthesize(truth: &ValueTable, n: usize, noise: f64, rng: &mut StdRng) -> Vec<SeerProject> {
    (0..n)
        .map(|i| {
            let mut p = SeerProject::nominal(format!("s{i}"), rng.gen_range(5_000.0..300_000.0), 1.0);
            for &id in ParameterId::rated() {
                p.set_rating(id, rng.gen_range(1.0..=18.0)).unwrap();
            }
            let e = engine::estimate(p.size, &bank_translate(&p, truth).unwrap()).unwrap().effort;
            p.actual_effort = e * (1.0 + rng.gen_range(-noise..=noise));
            p
        })
        .collect()
}

fn perturb(truth: &ValueTable, spread: f64, rng: &mut StdRng) -> ValueTable {
    let mut table = truth.clone();
    for &id in ParameterId::rated() {
        let mut row = *truth.row(id);
        for v in &mut row {
            *v *= 1.0 + rng.gen_range(-spread..=spread);
        }
        table.set_row(id, enforce_monotone(&row, truth.direction(id)));
    }
    table
}

fn training_mmre(projects: &[SeerProject], table: &ValueTable) -> f64 {
    let pairs: Vec<_> = projects
        .iter()
        .map(|p| {
            let e = engine::estimate(p.size, &bank_translate(p, table).unwrap()).unwrap().effort;
            (e, p.actual_effort)
        })
        .collect();
    mmre(&pairs).unwrap()
}

#[test]
fn recovers_from_perturbed_table() {
    let mut rng = StdRng::seed_from_u64(7);
    let truth = ValueTable::synthetic();
    let projects = synthesize(&truth, 60, 0.05, &mut rng);
    let start = perturb(&truth, 0.2, &mut rng);
    let config = CalibrationConfig {
        max_epochs: 200,
        ..Default::default()
    };
    let trace = train(&projects, &start, &config).unwrap();
    let before = training_mmre(&projects, &start);
    let after = training_mmre(&projects, &trace.table);
    assert!(after <= 0.5 * before, "MMRE {before} -> {after}");
    assert!(trace.table.is_valid());
    assert!(trace.losses().windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn exact_table_is_a_fixed_point() {
    let mut rng = StdRng::seed_from_u64(11);
    let truth = ValueTable::synthetic();
    let projects = synthesize(&truth, 15, 0.0, &mut rng);
    let trace = train(&projects, &truth, &CalibrationConfig::default()).unwrap();
    assert!(trace.initial_loss < 1e-20);
    for (a, b) in trace.table.rows().iter().flatten().zip(truth.rows().iter().flatten()) {
        assert!((a - b).abs() <= 1e-9 * b.abs());
    }
}

#[test]
fn training_on_a_subset_leaves_unreached_levels_alone() {
    let mut rng = StdRng::seed_from_u64(3);
    let truth = ValueTable::synthetic();
    let mut projects = synthesize(&truth, 10, 0.05, &mut rng);
    for p in &mut projects {
        p.set_rating(ParameterId::Acap, 8.0).unwrap();
    }
    let start = perturb(&truth, 0.0, &mut rng);
    let trace = train(&projects, &start, &CalibrationConfig::default()).unwrap();
    // Only level 8 fires for ACAP; the rest of the row can move only through
    // the monotone projection.
    let before = start.row(ParameterId::Acap);
    let after = trace.table.row(ParameterId::Acap);
    assert_ne!(before[7], after[7]);
    for r in (0..18).filter(|&r| r != 7 && before[r] != after[r]) {
        assert_eq!(after[r], after[7], "level {} moved without pooling", r + 1);
    }
    assert!(trace.table.is_valid());
}
