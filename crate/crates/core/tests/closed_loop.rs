use flowband_core::noise;
use flowband_core::simulate::{metrics, run_course, AbilityModel, CourseConfig, ResponseModel};
use flowband_core::{AdjustmentPolicy, Milestone, Param, ParamVector, PerformanceWindow, PlanMode, TreatmentPlan};
use rand::Rng;

const AFFECTED: [Param; 3] = [Param::Rom, Param::Speed, Param::Accuracy];

/// Challenge interval whose noiseless mean response lies inside the window,
/// found by scanning the response curve.
fn hold_interval(ability: f64, k: f64, window: &PerformanceWindow) -> (f64, f64) {
    let rm = ResponseModel::noiseless(k);
    let n = 200_000;
    let inside: Vec<f64> = (0..=n)
        .map(|i| i as f64 / n as f64)
        .filter(|&c| window.contains(rm.mean_response(ability, c)))
        .collect();
    (inside[0], inside[inside.len() - 1])
}

fn distance_to(interval: (f64, f64), x: f64) -> f64 {
    if x < interval.0 {
        interval.0 - x
    } else if x > interval.1 {
        x - interval.1
    } else {
        0.0
    }
}

fn constant_course(ability: f64, start: f64) -> CourseConfig {
    CourseConfig {
        plan: TreatmentPlan::constant(PlanMode::SemiAutomatic, 0.5, ParamVector::splat(start)).unwrap(),
        policy: AdjustmentPolicy::uniform(0.05, &AFFECTED).unwrap(),
        window: PerformanceWindow::new(0.4, 0.7).unwrap(),
        ability: AbilityModel::constant(ability),
        response: ResponseModel::noiseless(10.0),
        sessions: 10,
        rounds_per_session: 20,
        seed: 1,
        game: None,
    }
}

#[test]
fn converges_to_hold_zone_for_constant_ability() {
    for &(ability, start) in &[(0.5, 0.3), (0.5, 0.8), (0.3, 0.6), (0.7, 0.2)] {
        let cfg = constant_course(ability, start);
        let logs = run_course(&cfg).unwrap();
        let m = metrics(&logs, cfg.policy.warm_up_rounds()).unwrap();
        assert!(m.time_in_channel_after_warm_up >= 0.9, "{ability}/{start}: {m:?}");
        assert!(m.oscillation_amplitude <= 0.05 + 1e-12);
        let zone = hold_interval(ability, 10.0, &cfg.window);
        assert!(
            distance_to(zone, m.final_challenge) <= 0.05,
            "{zone:?} vs {}",
            m.final_challenge
        );
    }
}

#[test]
fn rubber_band_bound_when_zone_is_narrower_than_a_step() {
    // the hold zone is narrower than a step and falls between grid points,
    // so the loop rubber-bands forever; the swing must stay at one step
    let mut cfg = constant_course(0.5, 0.3);
    cfg.window = PerformanceWindow::new(0.5, 0.52).unwrap();
    cfg.plan = TreatmentPlan::constant(PlanMode::SemiAutomatic, 0.5, ParamVector::splat(0.43)).unwrap();
    let logs = run_course(&cfg).unwrap();
    let m = metrics(&logs, cfg.policy.warm_up_rounds()).unwrap();
    assert!(m.oscillation_amplitude <= 0.05 + 1e-12, "{m:?}");
    assert!(m.oscillation_amplitude > 0.0);
}

#[test]
fn tracks_slowly_rising_ability() {
    let trend = |s: u32| 0.3 + 0.01 * f64::from(s);
    let window = PerformanceWindow::new(0.4, 0.7).unwrap();
    let k = 10.0;
    let step = 0.05;

    // unrestricted band: challenge stays within one step of the hold zone
    let mut cfg = constant_course(0.3, 0.3);
    cfg.ability = AbilityModel {
        long_term: vec![(0, trend(0)), (30, trend(30))],
        ..AbilityModel::constant(0.0)
    };
    cfg.sessions = 30;
    cfg.rounds_per_session = 10;
    let logs = run_course(&cfg).unwrap();
    let warm_up = cfg.policy.warm_up_rounds();
    for (i, r) in logs
        .iter()
        .flat_map(|l| l.rounds.iter().map(move |r| (l.session, r)))
        .enumerate()
        .skip(warm_up)
    {
        let zone = hold_interval(trend(r.0), k, &window);
        assert!(
            distance_to(zone, r.1.challenge) <= step + 1e-12,
            "round {i}: {zone:?} vs {}",
            r.1.challenge
        );
    }

    // plan following the equilibrium with a narrow band
    let band = 0.05;
    let eq = |s: u32| {
        let z = hold_interval(trend(s), k, &window);
        (z.0 + z.1) / 2.0
    };
    cfg.plan = TreatmentPlan::new(
        PlanMode::SemiAutomatic,
        band,
        vec![
            Milestone {
                session: 0,
                params: ParamVector::splat(eq(0)),
            },
            Milestone {
                session: 30,
                params: ParamVector::splat(eq(30)),
            },
        ],
    )
    .unwrap();
    let logs = run_course(&cfg).unwrap();
    for l in &logs {
        for r in l.rounds.iter() {
            assert!((r.challenge - eq(l.session)).abs() <= band + step + 1e-9);
        }
    }
}

fn random_config(seed: u64) -> CourseConfig {
    let mut rng = noise::stream(seed, &[0xC0]);
    let n_milestones = rng.random_range(1..4);
    let mut session = 0;
    let milestones = (0..n_milestones)
        .map(|_| {
            let m = Milestone {
                session,
                params: ParamVector::from_array(std::array::from_fn(|_| rng.random_range(0.0..=1.0))),
            };
            session += rng.random_range(1..6);
            m
        })
        .collect();
    let affected: Vec<Param> = Param::ALL.into_iter().filter(|_| rng.random_bool(0.5)).collect();
    let affected = if affected.is_empty() {
        vec![Param::Speed]
    } else {
        affected
    };
    let lower = rng.random_range(0.1..0.6);
    CourseConfig {
        plan: TreatmentPlan::new(PlanMode::SemiAutomatic, rng.random_range(0.0..=0.5), milestones).unwrap(),
        policy: AdjustmentPolicy::uniform(rng.random_range(0.01..=0.5), &affected).unwrap(),
        window: PerformanceWindow::new(lower, lower + rng.random_range(0.05..0.35)).unwrap(),
        ability: AbilityModel {
            long_term: vec![(0, rng.random_range(0.0..=1.0)), (12, rng.random_range(0.0..=1.0))],
            medium_amplitude: rng.random_range(0.0..=0.3),
            medium_period: rng.random_range(2.0..10.0),
            medium_phase: 0.0,
            short_sd: rng.random_range(0.0..=0.2),
            seed,
        },
        response: ResponseModel {
            steepness: rng.random_range(1.0..20.0),
            noise: rng.random_range(0.0..0.2),
            seed,
        },
        sessions: rng.random_range(1..12),
        rounds_per_session: rng.random_range(1..12),
        seed,
        game: None,
    }
}

#[test]
fn random_courses_respect_band() {
    for seed in 0..200 {
        let cfg = random_config(seed);
        for l in run_course(&cfg).unwrap() {
            let target = cfg.plan.target_at(l.session).unwrap();
            for r in &l.rounds {
                for p in Param::ALL {
                    let (t, e) = (target.get(p), r.params.get(p));
                    assert!(e >= t - cfg.plan.band && e <= t + cfg.plan.band, "seed {seed}");
                }
            }
        }
    }
}
