//! Workload fixtures shared by the engine benchmarks.

use flowband_core::balance::{DyadModel, PlayerModel};
use flowband_core::simulate::{AbilityModel, CourseConfig, ResponseModel};
use flowband_core::skeleton::synth::{kinect_t_pose, record, reproportioned, Motion, MotionSpec};
use flowband_core::skeleton::{Recording, Topology};
use flowband_core::{AdjustmentPolicy, Milestone, Param, ParamVector, PerformanceWindow, PlanMode, TreatmentPlan};

/// Gold and recipient recordings of the same ten-repetition exercise.
pub fn exercise_pair(frames_per_rep: usize) -> (Topology, Recording, Recording) {
    let t = Topology::kinect_v2();
    let rest = kinect_t_pose(&t);
    let motion = Motion::random(&t, 0.5, 1);
    let spec = MotionSpec {
        frames_per_rep,
        ..Default::default()
    };
    let gold = record(&t, &rest, &motion, &spec);
    let body = reproportioned(&t, &rest, 0.1, 2);
    let rec = record(
        &t,
        &body,
        &motion.delayed(0.2),
        &MotionSpec {
            jitter: 0.003,
            seed: 3,
            ..spec
        },
    );
    (t, gold, rec)
}

/// A noisy semi-automatic course with a rising plan.
pub fn course(sessions: u32, rounds_per_session: u32) -> CourseConfig {
    let affected = [Param::Rom, Param::Speed, Param::Accuracy];
    CourseConfig {
        plan: TreatmentPlan::new(
            PlanMode::SemiAutomatic,
            0.15,
            vec![
                Milestone {
                    session: 0,
                    params: ParamVector::splat(0.3),
                },
                Milestone {
                    session: sessions,
                    params: ParamVector::splat(0.7),
                },
            ],
        )
        .expect("valid plan"),
        policy: AdjustmentPolicy::uniform(0.05, &affected).expect("valid policy"),
        window: PerformanceWindow::default(),
        ability: AbilityModel {
            long_term: vec![(0, 0.35), (sessions, 0.7)],
            medium_amplitude: 0.05,
            medium_period: 7.0,
            medium_phase: 0.0,
            short_sd: 0.05,
            seed: 4,
        },
        response: ResponseModel {
            steepness: 10.0,
            noise: 0.05,
            seed: 5,
        },
        sessions,
        rounds_per_session,
        seed: 6,
        game: None,
    }
}

pub fn dyad() -> DyadModel {
    DyadModel {
        players: [0.05, 0.1].map(|sd| PlayerModel {
            timing_sd: sd,
            density: 2.0,
            window: 0.08,
        }),
    }
}
