//! Reproduces the two ways run-global normalization erases selection
//! pressure on a constructed 20-member population, and shows that
//! population-reset bounds restore it. Everything here is deterministic;
//! front structures are derived by hand and asserted exactly.

use mmo_core::model::{meta_objectives, NormalizationBounds, RawObjectives};
use mmo_core::search::nondominated_sort;

const K: usize = 20;

/// Meta objective vectors (w = 1) for `raws` under `bounds`.
fn meta_vectors(raws: &[RawObjectives], bounds: &NormalizationBounds) -> Vec<Vec<f64>> {
    raws.iter()
        .map(|raw| {
            let (t, a) = bounds.normalize_raw(raw).unwrap();
            let m = meta_objectives(t, a, 1.0).unwrap();
            vec![m.g1, m.g2]
        })
        .collect()
}

/// Cumulative bounds seeded with the run-global extremes, then widened by
/// the population itself (a no-op when the population sits inside them).
fn global_bounds(
    extremes: [RawObjectives; 2],
    population: &[RawObjectives],
) -> NormalizationBounds {
    let mut bounds = NormalizationBounds::empty_global();
    bounds.update_global(&extremes).unwrap();
    bounds.update_global(population).unwrap();
    bounds
}

/// A population whose target objective has collapsed into [95, 1595] of a
/// run-global scale [3, 55209] while the auxiliary objective still spans its
/// whole scale [100, 1000].
///
/// The auxiliary ranking runs on a 0..=34 lattice, reversed inside each
/// block of four with in-block gaps of 2 and cross-block gaps of at least 1.
/// Two properties follow, both with enough margin to shrug off rounding:
/// the smallest auxiliary gap (1/34) still exceeds the whole condensed
/// target span (1500/55206), and inside a block the auxiliary gap (2/34)
/// beats the target gap (1/19) so reversed pairs are genuinely
/// incomparable, with no meta-objective ties anywhere.
fn condensed_target_population() -> Vec<RawObjectives> {
    (0..K)
        .map(|i| {
            let target = 95.0 + 1500.0 * i as f64 / 19.0;
            let rank = 7 * (i / 4) + 2 * (3 - i % 4);
            let auxiliary = 100.0 + 900.0 * rank as f64 / 34.0;
            RawObjectives::new(target, auxiliary)
        })
        .collect()
}

#[test]
fn condensed_target_is_all_nondominated_under_run_global_bounds() {
    let raws = condensed_target_population();
    let bounds = global_bounds(
        [
            RawObjectives::new(3.0, 100.0),
            RawObjectives::new(55_209.0, 1_000.0),
        ],
        &raws,
    );

    // The premise of the scenario: the normalized target spans under 0.03 of
    // its scale while every auxiliary step is at least 1/19.
    let normalized: Vec<(f64, f64)> = raws
        .iter()
        .map(|raw| bounds.normalize_raw(raw).unwrap())
        .collect();
    let t_span = normalized.iter().map(|p| p.0).fold(f64::MIN, f64::max)
        - normalized.iter().map(|p| p.0).fold(f64::MAX, f64::min);
    assert!(t_span <= 0.03, "target must condense, spans {t_span}");

    // With w = 1, any auxiliary gap larger than the whole target span forces
    // g1 and g2 to disagree, so no pair is comparable.
    let fronts = nondominated_sort(&meta_vectors(&raws, &bounds)).unwrap();
    assert_eq!(fronts.len(), 1, "selection pressure should be gone");
    assert_eq!(fronts[0].len(), K);
}

#[test]
fn population_bounds_restore_pressure_on_condensed_target() {
    let raws = condensed_target_population();
    let bounds = NormalizationBounds::reset_from_population(&raws).unwrap();
    let fronts = nondominated_sort(&meta_vectors(&raws, &bounds)).unwrap();

    // Reset bounds spread both objectives back over [0, 1]. Within a block
    // of four, rising target meets auxiliary falling twice as fast, so the
    // four members are mutually incomparable; across blocks, both
    // objectives rise strictly, so each block dominates the next outright.
    assert!(fronts.len() >= 2, "dominance must reappear");
    assert_eq!(fronts.len(), 5);
    for (k, front) in fronts.iter().enumerate() {
        assert_eq!(front, &vec![4 * k, 4 * k + 1, 4 * k + 2, 4 * k + 3]);
    }
    assert!(
        fronts[0].contains(&0),
        "the best-target configuration stays in the first front"
    );
}

/// A population whose auxiliary objective has collapsed into
/// [1.03e4, 1.3e4] of a run-global scale [1e4, 1.7e6] while the target
/// objective still spans its whole scale. The auxiliary ranking follows a
/// stride-7 scramble of the target ranking so that population-reset bounds
/// see genuinely mixed dominance.
fn condensed_auxiliary_population() -> Vec<RawObjectives> {
    (0..K)
        .map(|i| {
            let target = 100.0 + 400.0 * i as f64;
            let scramble = (7 * i) % K;
            let auxiliary = 10_300.0 + 2_700.0 * scramble as f64 / 19.0;
            RawObjectives::new(target, auxiliary)
        })
        .collect()
}

#[test]
fn condensed_auxiliary_degenerates_to_a_chain_under_run_global_bounds() {
    let raws = condensed_auxiliary_population();
    let bounds = global_bounds(
        [
            RawObjectives::new(100.0, 10_000.0),
            RawObjectives::new(7_700.0, 1_700_000.0),
        ],
        &raws,
    );

    let normalized: Vec<(f64, f64)> = raws
        .iter()
        .map(|raw| bounds.normalize_raw(raw).unwrap())
        .collect();
    let a_span = normalized.iter().map(|p| p.1).fold(f64::MIN, f64::max)
        - normalized.iter().map(|p| p.1).fold(f64::MAX, f64::min);
    assert!(a_span <= 2e-3, "auxiliary must condense, spans {a_span}");

    // Every target step (1/19) dwarfs the whole auxiliary span, so both
    // meta objectives sort by raw target: a twenty-rung dominance chain,
    // which is single-objective search wearing a different coat.
    let fronts = nondominated_sort(&meta_vectors(&raws, &bounds)).unwrap();
    assert_eq!(fronts.len(), K, "one configuration per front");
    let chain: Vec<usize> = fronts
        .iter()
        .map(|front| {
            assert_eq!(front.len(), 1);
            front[0]
        })
        .collect();
    assert_eq!(chain, (0..K).collect::<Vec<_>>(), "chain follows raw target order");
}

#[test]
fn population_bounds_recover_mixed_fronts_on_condensed_auxiliary() {
    let raws = condensed_auxiliary_population();
    let bounds = NormalizationBounds::reset_from_population(&raws).unwrap();
    let fronts = nondominated_sort(&meta_vectors(&raws, &bounds)).unwrap();

    // Reset bounds re-spread the auxiliary objective, so the stride-7
    // scramble yields incomparable pairs again instead of a total order.
    assert!(fronts.len() >= 2 && fronts.len() < K, "structure must be mixed");
    assert!(fronts[0].len() >= 2, "first front holds incomparable configs");
    assert_eq!(fronts[0], vec![0, 1, 2]);
    assert!(
        fronts[0].contains(&0),
        "the best-target configuration stays in the first front"
    );
}
