use rand::Rng;

use crate::cnf::{Assignment, Clause};

use super::{evaluate, exact_maxsat, MaxSatConfig, MaxSatError};
use super::lp::{build_lp, solve_lp, LpSolution};

/// Flips each coordinate independently with probability `eps`. `eps = 0` is
/// accepted and returns the input unchanged.
pub fn perturb<R: Rng + ?Sized>(a: &Assignment, eps: f64, rng: &mut R) -> Assignment {
    assert!((0.0..0.5).contains(&eps), "eps must lie in [0, 1/2)");
    let vals = a.values().iter().map(|&v| if rng.gen_bool(eps) { !v } else { v }).collect();
    Assignment::from_bools(vals)
}

/// `1/4 + y/2` per coordinate, always within `[1/4, 3/4]`.
pub fn lp_round_probabilities(y: &[f64]) -> Vec<f64> {
    y.iter().map(|&v| 0.25 + v.clamp(0.0, 1.0) / 2.0).collect()
}

/// Sets `x_i` true with probability `1/4 + y*_i/2`; variables the LP never saw
/// are treated as `y* = 1/2`.
pub fn lp_round<R: Rng + ?Sized>(sol: &LpSolution, n: usize, rng: &mut R) -> Assignment {
    let probs = lp_round_probabilities(&sol.y_by_var(n));
    Assignment::from_bools(probs.into_iter().map(|p| rng.gen_bool(p)).collect())
}

/// Argmax of `score` over `q` trials, earliest trial winning ties. Returns the
/// winning assignment and its score.
pub fn best_of_trials_by<T, S>(q: usize, mut make_trial: T, mut score: S) -> (Assignment, f64)
where
    T: FnMut() -> Assignment,
    S: FnMut(&Assignment) -> f64,
{
    assert!(q >= 1, "at least one trial");
    let mut best = make_trial();
    let mut best_score = score(&best);
    for _ in 1..q {
        let a = make_trial();
        let s = score(&a);
        if s > best_score {
            best = a;
            best_score = s;
        }
    }
    (best, best_score)
}

/// Best of `q` trials by number of satisfied clauses of `w`.
pub fn best_of_trials<T>(q: usize, make_trial: T, w: &[Clause]) -> (Assignment, usize)
where
    T: FnMut() -> Assignment,
{
    let (a, s) = best_of_trials_by(q, make_trial, |a| evaluate(a, w) as f64);
    (a, s as usize)
}

/// Exact optimum on `w`, then the best of `cfg.q` perturbations of it.
pub fn postprocess_exact_perturb<R: Rng + ?Sized>(
    w: &[Clause],
    cfg: &MaxSatConfig,
    rng: &mut R,
) -> Result<Assignment, MaxSatError> {
    perturbed_optimum(w, cfg.params.n, cfg.params.eps, cfg.q, rng)
}

pub(crate) fn perturbed_optimum<R: Rng + ?Sized>(
    w: &[Clause],
    n: usize,
    eps: f64,
    q: usize,
    rng: &mut R,
) -> Result<Assignment, MaxSatError> {
    if w.is_empty() {
        return Ok(Assignment::all(n, false));
    }
    let (opt, _) = exact_maxsat(w, n)?;
    Ok(best_of_trials(q, || perturb(&opt, eps, rng), w).0)
}

/// LP optimum on `w`, then the best of `cfg.q` roundings.
pub fn postprocess_lp_round<R: Rng + ?Sized>(
    w: &[Clause],
    cfg: &MaxSatConfig,
    rng: &mut R,
) -> Result<Assignment, MaxSatError> {
    rounded_lp(w, cfg.params.n, cfg.q, cfg.lp_tol, rng)
}

pub(crate) fn rounded_lp<R: Rng + ?Sized>(
    w: &[Clause],
    n: usize,
    q: usize,
    tol: f64,
    rng: &mut R,
) -> Result<Assignment, MaxSatError> {
    if w.is_empty() {
        return Ok(Assignment::all(n, false));
    }
    let sol = solve_lp(&build_lp(w), tol)?;
    Ok(best_of_trials(q, || lp_round(&sol, n, rng), w).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{Parameters, StreamMode};
    use crate::maxsat::PostProcess;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s2() -> Vec<Clause> {
        vec![Clause::or(&[1, 2]), Clause::or(&[-1, 2]), Clause::or(&[1, -2]), Clause::or(&[-1, -2])]
    }

    #[test]
    fn perturb_identity_binomial_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = Assignment::from_mask(40, 0xdead_beef);
        assert_eq!(perturb(&a, 0.0, &mut rng), a);
        let big = Assignment::all(1000, false);
        let flips = perturb(&big, 0.1, &mut rng).values().iter().filter(|&&v| v).count();
        assert!((70..=130).contains(&flips), "{flips}");
        let x = perturb(&big, 0.1, &mut ChaCha8Rng::seed_from_u64(5));
        let y = perturb(&big, 0.1, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(x, y);
    }

    #[test]
    fn rounding_frequencies() {
        for (y, p) in [(0.0, 0.25), (1.0, 0.75), (0.5, 0.5)] {
            let sol = LpSolution { vars: vec![1], y_star: vec![y], z_star: vec![], objective: 0.0, iterations: 0 };
            let mut rng = ChaCha8Rng::seed_from_u64(y.to_bits());
            let hits = (0..10_000).filter(|_| lp_round(&sol, 1, &mut rng).get(1)).count();
            assert!((hits as f64 / 1e4 - p).abs() <= 0.02, "y={y}: {hits}");
        }
    }

    #[test]
    fn best_of_trials_ties_and_passthrough() {
        let w = [Clause::or(&[1])];
        let mut calls = 0;
        let (a, s) = best_of_trials(
            3,
            || {
                calls += 1;
                Assignment::all(1, calls >= 2)
            },
            &w,
        );
        assert_eq!((a.get(1), s), (true, 1));
        // Trials 2 and 3 tie; trial 2 is returned.
        let mut k = 0u64;
        let (a, _) = best_of_trials_by(
            3,
            || {
                k += 1;
                Assignment::from_mask(3, 1 << (k - 1))
            },
            |a| a.values().iter().filter(|&&v| v).count() as f64,
        );
        assert_eq!(a, Assignment::from_mask(3, 1));
        let (a, _) = best_of_trials(1, || Assignment::all(2, true), &w);
        assert_eq!(a, Assignment::all(2, true));
    }

    #[test]
    fn fair_coin_trials_find_an_optimum() {
        let w = [Clause::or(&[1, 2]), Clause::or(&[-1])];
        let ok = (0..1000u64)
            .filter(|&seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (_, s) =
                    best_of_trials(50, || Assignment::from_bools(vec![rng.gen(), rng.gen()]), &w);
                s == 2
            })
            .count();
        assert!(ok >= 990, "{ok}");
    }

    #[test]
    fn post_processing_on_the_two_variable_system() {
        let p = Parameters::new(2, 4, 0.1, 4.0).unwrap();
        for mode in [PostProcess::ExactPerturb, PostProcess::LpRound] {
            let cfg = MaxSatConfig::new(p, mode, StreamMode::Static).unwrap();
            let ok = (0..200u64)
                .filter(|&seed| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let a = match mode {
                        PostProcess::ExactPerturb => postprocess_exact_perturb(&s2(), &cfg, &mut rng),
                        PostProcess::LpRound => postprocess_lp_round(&s2(), &cfg, &mut rng),
                    }
                    .unwrap();
                    evaluate(&a, &s2()) == 3
                })
                .count();
            assert!(ok >= 190, "{mode:?}: {ok}");
        }
    }

    #[test]
    fn exact_with_zero_noise_is_the_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = vec![Clause::or(&[1]), Clause::or(&[-2]), Clause::or(&[1, 2])];
        let a = perturbed_optimum(&w, 2, 0.0, 1, &mut rng).unwrap();
        assert_eq!(a, exact_maxsat(&w, 2).unwrap().0);
    }

    #[test]
    fn empty_sample_gives_all_false() {
        let p = Parameters::new(3, 1, 0.1, 4.0).unwrap();
        let cfg = MaxSatConfig::new(p, PostProcess::LpRound, StreamMode::Static).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(postprocess_lp_round(&[], &cfg, &mut rng).unwrap(), Assignment::all(3, false));
        assert_eq!(postprocess_exact_perturb(&[], &cfg, &mut rng).unwrap(), Assignment::all(3, false));
    }

    #[test]
    fn unit_clause_is_satisfied_by_lp_pipeline() {
        let p = Parameters::new(1, 1, 0.1, 4.0).unwrap();
        let cfg = MaxSatConfig::new(p, PostProcess::LpRound, StreamMode::Static).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = postprocess_lp_round(&[Clause::or(&[1])], &cfg, &mut rng).unwrap();
        assert!(a.get(1));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rounding_probabilities_stay_in_range(y in prop::collection::vec(-0.5f64..1.5, 0..50)) {
                for p in lp_round_probabilities(&y) {
                    prop_assert!((0.25..=0.75).contains(&p));
                }
            }

            #[test]
            fn argmax_invariant_under_rescaling(masks in prop::collection::vec(any::<u16>(), 1..30), c in 0.01f64..100.0) {
                let score = |a: &Assignment| a.values().iter().enumerate().filter(|(_, &v)| v).map(|(i, _)| (i % 5) as f64).sum::<f64>();
                let mut it1 = masks.iter();
                let mut it2 = masks.iter();
                let (a, _) = best_of_trials_by(masks.len(), || Assignment::from_mask(16, *it1.next().unwrap() as u64), score);
                let (b, _) = best_of_trials_by(masks.len(), || Assignment::from_mask(16, *it2.next().unwrap() as u64), |x| c * score(x));
                prop_assert_eq!(a, b);
            }
        }
    }
}
