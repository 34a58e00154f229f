mod common;

use common::{oracle_campaign, Dense, Op, ALL_OPS};

use abflux_core::fock::{FockState, Mode, ModeKind, ModeRegistry};
use std::sync::Arc;

#[test]
fn every_operation_matches_dense_oracle() {
    for (k, op) in ALL_OPS.into_iter().enumerate() {
        let report = oracle_campaign(op, 0x5eed + k as u64, 200).unwrap();
        assert_eq!(report.compared, 200);
        assert!(report.max_error <= 1e-10, "{report:?}");
    }
}

#[test]
fn dense_beam_splitter_is_unitary() {
    let reg = Arc::new(
        ModeRegistry::new(vec![
            Mode::new("e", ModeKind::Electron),
            Mode::with_capacity("a", ModeKind::Photon, 2),
            Mode::new("f", ModeKind::Electron),
            Mode::with_capacity("b", ModeKind::Photon, 2),
        ])
        .unwrap(),
    );
    let dense = Dense::new(reg);
    let u = dense.beam_splitter(0, 2);
    let id = &u * u.adjoint();
    for i in 0..dense.dim() {
        for j in 0..dense.dim() {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((id[(i, j)].re - expected).abs() < 1e-12 && id[(i, j)].im.abs() < 1e-12);
        }
    }
}

#[test]
fn hong_ou_mandel_from_both_sides() {
    let reg = Arc::new(
        ModeRegistry::new(vec![
            Mode::with_capacity("a", ModeKind::Photon, 2),
            Mode::with_capacity("b", ModeKind::Photon, 2),
        ])
        .unwrap(),
    );
    let dense = Dense::new(reg.clone());
    let psi = FockState::new(reg, &[1, 1]).unwrap();
    let got = psi.beam_splitter("a", "b").unwrap();
    assert_eq!(got.amplitude(&[1, 1]).norm(), 0.0);
    let expected = dense.beam_splitter(0, 1) * dense.vector(&psi);
    assert!(common::max_diff(&dense.vector(&got), &expected) < 1e-12);
    let _ = Op::BeamSplitter;
}
