use std::path::PathBuf;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sktr::pnml::{parse_pnml, read_pnml, serialize_pnml};
use sktr::sklog::{parse_sk_csv, parse_sk_json, write_sk_csv, write_sk_json};
use sktr::xes::{parse_xes, write_xes};
use sktr_core::log::Timestamp;
use sktr_core::tree::{random_sk_trace, random_state_machine, random_tree};
use sktr_core::{build_trace_net, Activity, SkEvent, SkTrace};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn alphabet() -> Vec<Activity> {
    ["A", "Send offer", "a:b", "x&y<z>", "W_Complete \"app\""].iter().map(|&s| s.into()).collect()
}

fn random_log(seed: u64, traces: usize, stamped: bool) -> Vec<SkTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = alphabet();
    (0..traces)
        .map(|i| {
            let len = 1 + (seed as usize + i) % 6;
            let t = random_sk_trace(&mut rng, &format!("case {i}"), &alphabet, len, 4);
            if !stamped {
                return t;
            }
            let events = t
                .events()
                .iter()
                .enumerate()
                .map(|(j, e)| {
                    let ts = Timestamp(1_654_257_600_000 + (i * 1000 + j * 7) as i64 * 1001);
                    SkEvent::new(e.event_id.clone(), e.distribution().to_vec(), Some(ts)).unwrap()
                })
                .collect();
            SkTrace::new(t.case_id.clone(), events).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pnml_round_trip(seed in any::<u64>(), tree in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alphabet = alphabet();
        let net = if tree {
            random_tree(&mut rng, &alphabet, 3).to_net()
        } else {
            random_state_machine(&mut rng, 5, 8, &alphabet)
        };
        let back = parse_pnml(&serialize_pnml(&net)).unwrap();
        prop_assert_eq!(back, net);
    }

    #[test]
    fn sk_csv_round_trip(seed in any::<u64>(), traces in 0usize..6, stamped in any::<bool>()) {
        let log = random_log(seed, traces, stamped);
        let back = parse_sk_csv(&write_sk_csv(&log).unwrap()).unwrap();
        prop_assert_eq!(back, log);
    }

    #[test]
    fn sk_json_round_trip(seed in any::<u64>(), traces in 0usize..6, stamped in any::<bool>()) {
        let log = random_log(seed, traces, stamped);
        let back = parse_sk_json(&write_sk_json(&log)).unwrap();
        prop_assert_eq!(back, log);
    }

    #[test]
    fn xes_round_trip_keeps_labels(seed in any::<u64>(), traces in 0usize..6) {
        let log: Vec<SkTrace> = random_log(seed, traces, true)
            .into_iter()
            .map(|t| {
                let events = t
                    .events()
                    .iter()
                    .enumerate()
                    .map(|(j, e)| SkEvent::deterministic(format!("e{}", j + 1), e.argmax().clone(), e.timestamp))
                    .collect();
                SkTrace::new(t.case_id.clone(), events).unwrap()
            })
            .collect();
        let back = parse_xes(&write_xes(&log).unwrap()).unwrap();
        prop_assert_eq!(back, log);
    }
}

#[test]
fn xes_event_count_matches_raw_tags() {
    let log = random_log(9, 12, true)
        .into_iter()
        .map(|t| SkTrace::from_labels(t.case_id.clone(), t.events().iter().map(|e| e.argmax().clone())))
        .collect::<Vec<_>>();
    let text = write_xes(&log).unwrap();
    let raw_events = text.matches("<event>").count();
    let raw_traces = text.matches("<trace>").count();
    let parsed = parse_xes(&text).unwrap();
    assert_eq!(parsed.len(), raw_traces);
    assert_eq!(parsed.iter().map(SkTrace::len).sum::<usize>(), raw_events);
}

#[test]
fn table1_trace_net_shape() {
    let log = sktr::read_log(&fixture("table1.skcsv")).unwrap();
    let stn = build_trace_net(&log[0]).unwrap();
    let net = parse_pnml(&serialize_pnml(stn.net())).unwrap();
    assert_eq!(net.place_count(), 4);
    assert_eq!(net.transition_count(), 6);
    assert_eq!(&net, stn.net());
}

#[test]
fn fixture_distributions() {
    let log = sktr::read_log(&fixture("table1.skcsv")).unwrap();
    assert_eq!(log.len(), 1);
    let e = &log[0].events()[1];
    assert_eq!(e.event_id, "e2");
    assert_eq!(e.probability("C"), Some(0.7));
    assert_eq!(e.probability("D"), Some(0.3));
}

#[test]
fn fixture_models_parse() {
    let re = read_pnml(&fixture("running_example.pnml"), None).unwrap();
    assert_eq!((re.place_count(), re.transition_count()), (6, 6));
    let sl = read_pnml(&fixture("silent_loop.pnml"), None).unwrap();
    assert!(sl.transitions().any(|(_, t)| t.label.is_silent()));
    assert!(sl.final_marking().support().next().is_some());
}
