//! Sampled selection estimates against the exact enumeration oracle.

use rand::Rng;
use wagerlearn_core::error::CoreError;
use wagerlearn_core::full_info::selection::{
    elfx_selection_distribution, selection_distribution_exact, selection_distribution_sampled,
    SelectionEstimate,
};
use wagerlearn_core::rng::RngStream;
use wagerlearn_core::simplex::WeightVector;

fn random_rows(k: usize, t: usize, rng: &mut impl Rng) -> Vec<WeightVector> {
    (0..t)
        .map(|_| {
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            WeightVector::new(raw.into_iter().map(|w| w / sum).collect()).unwrap()
        })
        .collect()
}

#[test]
fn sampled_estimates_track_the_exact_distribution() {
    let mut rng = RngStream::new(21, 0).rng();
    for trial in 0..40 {
        let k = 2 + (trial % 2);
        let t = 1 + (trial % 6);
        let rows = random_rows(k, t, &mut rng);
        let exact = selection_distribution_exact(k, &rows).unwrap();
        let mut draw_rng = RngStream::new(22, trial as u64).rng();
        let sampled = selection_distribution_sampled(k, &rows, 20_000, &mut draw_rng).unwrap();
        for i in 0..k {
            // 20k fractional-tie samples put five standard errors under 0.018.
            assert!(
                (exact[i] - sampled[i]).abs() < 0.02,
                "trial {trial}, expert {i}: exact {} vs sampled {}",
                exact[i],
                sampled[i]
            );
        }
    }
}

#[test]
fn degenerate_rows_concentrate_the_selection() {
    let rows = vec![
        WeightVector::new(vec![1.0, 0.0]).unwrap(),
        WeightVector::new(vec![1.0, 0.0]).unwrap(),
        WeightVector::new(vec![1.0, 0.0]).unwrap(),
    ];
    let exact = selection_distribution_exact(2, &rows).unwrap();
    assert_eq!(exact.as_slice(), &[1.0, 0.0]);
    let mut rng = RngStream::new(23, 0).rng();
    let sampled = selection_distribution_sampled(2, &rows, 500, &mut rng).unwrap();
    assert_eq!(sampled.as_slice(), &[1.0, 0.0]);
}

#[test]
fn uniform_rows_select_uniformly() {
    let rows = vec![WeightVector::uniform(4).unwrap(); 3];
    let exact = selection_distribution_exact(4, &rows).unwrap();
    for &w in exact.iter() {
        assert!((w - 0.25).abs() < 1e-12);
    }
}

#[test]
fn exact_mode_refuses_oversized_histories() {
    let rows = vec![WeightVector::uniform(3).unwrap(); 13];
    let err = selection_distribution_exact(3, &rows);
    assert!(matches!(err, Err(CoreError::BudgetExceeded { .. })));
}

#[test]
fn elfx_selection_is_uniform_on_empty_history_in_both_modes() {
    for estimate in [
        SelectionEstimate::Exact,
        SelectionEstimate::Sampled { num_samples: 100 },
    ] {
        let dist = elfx_selection_distribution(3, &[], estimate, RngStream::new(5, 5)).unwrap();
        for &w in dist.iter() {
            assert!((w - 1.0 / 3.0).abs() < 1e-12);
        }
    }
}

#[test]
fn elfx_exact_and_sampled_agree_on_a_short_history() {
    let history = vec![vec![0.2, 0.8, 0.5], vec![0.9, 0.1, 0.4], vec![0.3, 0.3, 0.6]];
    let exact =
        elfx_selection_distribution(3, &history, SelectionEstimate::Exact, RngStream::new(6, 0))
            .unwrap();
    let sampled = elfx_selection_distribution(
        3,
        &history,
        SelectionEstimate::Sampled {
            num_samples: 40_000,
        },
        RngStream::new(6, 1),
    )
    .unwrap();
    for i in 0..3 {
        assert!((exact[i] - sampled[i]).abs() < 0.02);
    }
}
