mod common;

use common::{escape_stream, example_tables, random_case, synthetic_tables};
use hec_core::config::CoderParams;
use hec_core::encoder::{encode_reference, encode_streaming, EncodeOptions, SampleStream};
use hec_core::error::EncodeError;
use hec_core::perfmodel::{audit_rate, predict_rate, DEFAULT_INIT_CYCLES};
use rand::SeedableRng;

#[test]
fn audit_equals_prediction_on_random_runs() {
    let tables = synthetic_tables();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let (params, stream) = random_case(&mut rng, 12, 8);
        let res = encode_streaming(&stream, &params, &tables, EncodeOptions::default()).unwrap();
        let audited = audit_rate(&res, &params, DEFAULT_INIT_CYCLES).unwrap();
        let n = params.sample_count();
        assert_eq!(
            audited.total_cycles(),
            DEFAULT_INIT_CYCLES + n + 16 + params.nz as u64 + res.escapes()
        );
        assert!(audited.samples_per_cycle() < 1.0);
    }
}

#[test]
fn zero_image_audit() {
    let tables = synthetic_tables();
    let params = CoderParams::new(8, 8, 5, 8);
    let stream = SampleStream::for_params(vec![0; 320], &params).unwrap();
    let res = encode_streaming(&stream, &params, &tables, EncodeOptions::default()).unwrap();
    assert_eq!(res.escapes(), 0);
    assert_eq!(
        audit_rate(&res, &params, 10).unwrap(),
        predict_rate(&params, 0, 10)
    );
}

#[test]
fn each_escape_costs_one_cycle() {
    let tables = example_tables();
    let params = CoderParams::new(20, 20, 3, 8).with_coding(18, 4, 9);
    let base = audit_rate(
        &encode_streaming(
            &escape_stream(&params, &[], 0).0,
            &params,
            &tables,
            EncodeOptions::default(),
        )
        .unwrap(),
        &params,
        10,
    )
    .unwrap();
    for (bands, count) in [(vec![0], 1), (vec![1, 2], 5), (vec![0, 1, 2], 40)] {
        let (stream, placed) = escape_stream(&params, &bands, count);
        let res = encode_streaming(&stream, &params, &tables, EncodeOptions::default()).unwrap();
        assert_eq!(res.escapes(), placed);
        let audited = audit_rate(&res, &params, 10).unwrap();
        assert_eq!(audited.total_cycles(), base.total_cycles() + placed);
        assert_eq!(audited.ratio(), (1200, 1200 + 10 + 16 + 3 + placed));
    }
}

#[test]
fn reference_result_cannot_be_audited() {
    let tables = example_tables();
    let params = CoderParams::new(2, 2, 3, 8);
    let res = encode_reference(
        &SampleStream::for_params(vec![0; 12], &params).unwrap(),
        &params,
        &tables,
        EncodeOptions::default(),
    )
    .unwrap();
    assert!(matches!(
        audit_rate(&res, &params, 10),
        Err(EncodeError::AuditMismatch { .. })
    ));
}
