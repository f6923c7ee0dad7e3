use proptest::prelude::*;

use l1dg::admm::shrink;
use l1dg::config::{RegularizationMode, RunConfig};
use l1dg::element::{Mesh, ReferenceElement};
use l1dg::mass::mass_correct;
use l1dg::pa::PaMatrix;
use l1dg::sensor::{read_element, SensorConfig};
use l1dg::solver::{rhs, run_simulation, InterfaceFlux, ProblemDef, ProblemKind, SolutionState};

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn state_from(values: &[f64], components: usize, elements: usize, nodes: usize) -> SolutionState {
    let mut s = SolutionState::zeros(components, elements, nodes);
    let len = s.values.len();
    s.values.copy_from_slice(&values[..len]);
    s
}

fn rates(
    state: &SolutionState,
    e: &ReferenceElement,
    mesh: &Mesh,
    problem: &ProblemDef,
) -> SolutionState {
    let mut out = SolutionState::zeros(state.components, state.elements, state.nodes);
    rhs(state, e, mesh, problem, &mut out);
    out
}

/// `sum_i J_i sum_k w_k a b` for one component.
fn inner(a: &SolutionState, b: &SolutionState, c: usize, e: &ReferenceElement, mesh: &Mesh) -> f64 {
    (0..a.elements)
        .map(|i| {
            let local: f64 = e
                .weights
                .iter()
                .zip(a.element(c, i).iter().zip(b.element(c, i)))
                .map(|(w, (x, y))| w * x * y)
                .sum();
            mesh.jacobians[i] * local
        })
        .sum()
}

fn ones(s: &SolutionState) -> SolutionState {
    let mut o = s.clone();
    o.values.iter_mut().for_each(|v| *v = 1.0);
    o
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sbp_holds(p in 1usize..=24) {
        let e = ReferenceElement::new(p).unwrap();
        prop_assert!(e.sbp_residual() < 1e-11);
    }

    #[test]
    fn modal_round_trip(p in 1usize..=16, vals in prop::collection::vec(-5.0f64..5.0, 17)) {
        let e = ReferenceElement::new(p).unwrap();
        let u = &vals[..=p];
        let back = e.to_nodal(&e.to_modal(u));
        for (a, b) in u.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn pa_annihilates_low_degree(p in 3usize..=14, m in 1usize..=5, c in prop::collection::vec(-3.0f64..3.0, 5)) {
        prop_assume!(m <= p);
        let e = ReferenceElement::new(p).unwrap();
        let pa = PaMatrix::new(&e, m).unwrap();
        let u: Vec<f64> = e.nodes.iter().map(|&x| horner(&c[..m], x)).collect();
        let mut out = vec![0.0; pa.rows()];
        pa.apply_into(&u, &mut out);
        let scale = 1.0 + c.iter().map(|v| v.abs()).sum::<f64>();
        for v in out {
            prop_assert!(v.abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn sensor_ratio_is_scale_invariant(
        p in 3usize..=12,
        vals in prop::collection::vec(-2.0f64..2.0, 13),
        scale in 0.01f64..100.0,
    ) {
        let e = ReferenceElement::new(p).unwrap();
        let lo = PaMatrix::new(&e, 1).unwrap();
        let hi = PaMatrix::new(&e, 3).unwrap();
        let cfg = SensorConfig { s1_floor: 0.0, ..SensorConfig::default() };
        let u = &vals[..=p];
        let scaled: Vec<f64> = u.iter().map(|v| v * scale).collect();
        let a = read_element(u, &lo, &hi, &cfg);
        let b = read_element(&scaled, &lo, &hi, &cfg);
        prop_assume!(a.s1 > 1e-6);
        prop_assert!((a.ratio - b.ratio).abs() < 1e-9);
    }

    #[test]
    fn shrink_is_soft_threshold(x in -10.0f64..10.0, gamma in 0.0f64..5.0) {
        let s = shrink(x, gamma);
        prop_assert!(s.abs() <= x.abs());
        prop_assert!(s == 0.0 || s.signum() == x.signum());
        if x.abs() > gamma {
            prop_assert!((x - s).abs() - gamma < 1e-12);
        } else {
            prop_assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn mass_correction_keeps_mean_only(
        p in 2usize..=16,
        u in prop::collection::vec(-2.0f64..2.0, 17),
        v in prop::collection::vec(-2.0f64..2.0, 17),
    ) {
        let e = ReferenceElement::new(p).unwrap();
        let (u, v) = (&u[..=p], &v[..=p]);
        let out = mass_correct(u, v, &e);
        prop_assert!((e.integrate(&out) - e.integrate(u)).abs() < 1e-13);
        let mo = e.to_modal(&out);
        let mv = e.to_modal(v);
        for j in 1..=p {
            prop_assert!((mo[j] - mv[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn free_stream_is_preserved(
        p in 1usize..=8,
        n in 2usize..=12,
        a in -2.0f64..2.0,
        b in -1.0f64..1.0,
        kind in prop::sample::select(vec![ProblemKind::Burgers, ProblemKind::Advection, ProblemKind::PcSystem]),
    ) {
        let e = ReferenceElement::new(p).unwrap();
        let mesh = Mesh::new(0.0, 2.0, n).unwrap();
        let flux = if kind == ProblemKind::PcSystem { InterfaceFlux::EntropyStable } else { InterfaceFlux::LocalLaxFriedrichs };
        let problem = ProblemDef::new(kind, flux);
        let s = SolutionState::sample(problem.component_count(), &mesh, &e, |_| vec![a, b]);
        let r = rates(&s, &e, &mesh, &problem);
        for v in r.values {
            prop_assert!(v.abs() < 1e-11);
        }
    }

    #[test]
    fn semidiscrete_mass_rate_vanishes(
        p in 1usize..=8,
        n in 2usize..=10,
        vals in prop::collection::vec(-1.5f64..1.5, 2 * 10 * 9),
        kind in prop::sample::select(vec![ProblemKind::Burgers, ProblemKind::Advection, ProblemKind::PcSystem]),
    ) {
        let e = ReferenceElement::new(p).unwrap();
        let mesh = Mesh::new(0.0, 2.0, n).unwrap();
        let flux = if kind == ProblemKind::PcSystem { InterfaceFlux::EntropyStable } else { InterfaceFlux::LocalLaxFriedrichs };
        let problem = ProblemDef::new(kind, flux);
        let s = state_from(&vals, problem.component_count(), n, p + 1);
        let r = rates(&s, &e, &mesh, &problem);
        let one = ones(&s);
        for c in 0..s.components {
            prop_assert!(inner(&one, &r, c, &e, &mesh).abs() < 1e-10);
        }
    }

    #[test]
    fn pc_energy_rate_signs(
        p in 1usize..=8,
        n in 2usize..=10,
        vals in prop::collection::vec(-1.5f64..1.5, 2 * 10 * 9),
    ) {
        let e = ReferenceElement::new(p).unwrap();
        let mesh = Mesh::new(0.0, 2.0, n).unwrap();
        let s = state_from(&vals, 2, n, p + 1);
        let energy_rate = |flux| {
            let problem = ProblemDef::new(ProblemKind::PcSystem, flux);
            let r = rates(&s, &e, &mesh, &problem);
            inner(&s, &r, 0, &e, &mesh) + inner(&s, &r, 1, &e, &mesh)
        };
        prop_assert!(energy_rate(InterfaceFlux::EntropyConservative).abs() < 1e-10);
        prop_assert!(energy_rate(InterfaceFlux::EntropyStable) < 1e-10);
    }

    #[test]
    fn pc_without_variance_keeps_it_zero(
        p in 1usize..=8,
        n in 2usize..=10,
        vals in prop::collection::vec(-1.5f64..1.5, 10 * 9),
    ) {
        let e = ReferenceElement::new(p).unwrap();
        let mesh = Mesh::new(0.0, 2.0, n).unwrap();
        let mut s = SolutionState::zeros(2, n, p + 1);
        let len = n * (p + 1);
        s.values[..len].copy_from_slice(&vals[..len]);
        let problem = ProblemDef::new(ProblemKind::PcSystem, InterfaceFlux::EntropyStable);
        let r = rates(&s, &e, &mesh, &problem);
        for v in r.component(1) {
            prop_assert!(v.abs() < 1e-13);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn runs_are_deterministic(
        p in 3usize..=6,
        n in 4usize..=12,
        mode in prop::sample::select(vec![RegularizationMode::None, RegularizationMode::L1, RegularizationMode::L1MassCorrected]),
    ) {
        let cfg = RunConfig::new(ProblemKind::Burgers, p, n).with_mode(mode);
        let a = run_simulation(&cfg).unwrap();
        let b = run_simulation(&cfg).unwrap();
        prop_assert_eq!(a.final_state, b.final_state);
        prop_assert_eq!(a.diagnostics, b.diagnostics);
    }

    #[test]
    fn mass_corrected_runs_conserve_mass(p in 3usize..=7, n in 5usize..=15) {
        let cfg = RunConfig::new(ProblemKind::Burgers, p, n).with_mode(RegularizationMode::L1MassCorrected);
        let r = run_simulation(&cfg).unwrap();
        let m0 = r.diagnostics[0].mass[0];
        for row in &r.diagnostics {
            prop_assert!((row.mass[0] - m0).abs() < 1e-12 * (1.0 + m0.abs()));
        }
    }
}
