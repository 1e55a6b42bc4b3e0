//! `save ∘ load` is the identity, bit for bit, for every file kind.

use kraus::dilation::dilate;
use kraus::random::Rng;
use kraus::types::povm_of;
use kraus_cli::OperatorFile;
use proptest::prelude::*;

fn round_trip(file: &OperatorFile) -> OperatorFile {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    file.save(&path).unwrap();
    let back = OperatorFile::load(&path).unwrap();
    assert_eq!(back.to_json(), file.to_json());
    back
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn every_kind_round_trips(seed in any::<u64>(), d in 1usize..=4, k in 1usize..=3) {
        let tol = 1e-9;
        let mut rng = Rng::seed(seed);

        let m = rng.ginibre(d);
        prop_assert_eq!(round_trip(&OperatorFile::from_matrix(&m)).to_matrix().unwrap(), m);

        let psi = rng.state(d);
        let back = round_trip(&OperatorFile::from_state(&psi)).to_state(tol).unwrap();
        prop_assert_eq!(back.amplitudes(), psi.amplitudes());

        let rho = rng.density(d);
        let back = round_trip(&OperatorFile::from_density(&rho)).to_density(tol).unwrap();
        prop_assert_eq!(back.matrix(), rho.matrix());

        let obs = rng.observable(d);
        let back = round_trip(&OperatorFile::from_observable(&obs)).to_observable(tol).unwrap();
        prop_assert_eq!(back.eigenvalues(), obs.eigenvalues());
        prop_assert_eq!(back.projectors(), obs.projectors());
        prop_assert_eq!(back.labels(), obs.labels());

        let inst = rng.instrument(d, k);
        let back = round_trip(&OperatorFile::from_instrument(&inst)).to_instrument(tol).unwrap();
        prop_assert_eq!(back.transformers(), inst.transformers());

        let povm = povm_of(&inst);
        let back = round_trip(&OperatorFile::from_povm(&povm)).to_povm(tol).unwrap();
        prop_assert_eq!(back.effects(), povm.effects());

        let model = dilate(&inst, tol).unwrap();
        let back = round_trip(&OperatorFile::from_dilation(&model)).to_dilation(tol).unwrap();
        prop_assert_eq!(back.unitary(), model.unitary());
        prop_assert_eq!(back.pointer_values(), model.pointer_values());
        prop_assert_eq!(back.labels(), model.labels());
    }
}

#[test]
fn subnormal_and_extreme_values_survive() {
    let values = [f64::MIN_POSITIVE / 3.0, 1e300, -0.1, 1.0 / 3.0, 0.0, -0.0];
    let m = kraus::ComplexMatrix::from_fn(2, 3, |i, j| {
        kraus::C64::new(values[i * 3 + j], values[5 - (i * 3 + j)])
    });
    let back = round_trip(&OperatorFile::from_matrix(&m))
        .to_matrix()
        .unwrap();
    for (a, b) in back.as_slice().iter().zip(m.as_slice()) {
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}
