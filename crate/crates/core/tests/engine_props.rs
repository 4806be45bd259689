use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use systolic_cas::engine::trace;
use systolic_cas::forest::deserialize;
use systolic_cas::{
    oracle_cas, run_all, Alphabet, CasInstance, CasReport, Forest, Orientation, SearchConfig,
    Sequence, Simulator, StreamToken, TickSchedule,
};

const ACT_PATH: &str = include_str!("data/act_path.caf");
const ACT_PATH_TRACE: &str = include_str!("data/act_path_tct.trace");

fn seq(id: &str, s: &str) -> Sequence {
    Sequence::new(id, s, &Alphabet::dna()).unwrap()
}

fn build(db: &str, m: usize, d: usize, n: usize, orientation: Orientation) -> Forest {
    Forest::build(
        &seq("db", db),
        SearchConfig::new(m, d, n).unwrap(),
        &Alphabet::dna(),
        orientation,
    )
    .unwrap()
}

fn mismatches(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn potential_motifs(forest: &Forest, query: &str) -> BTreeSet<String> {
    let run = Simulator::new(forest).run_string(&seq("q", query), 2).unwrap();
    run.potential_exits()
        .map(|e| forest.exits()[e].motif.to_string())
        .collect()
}

#[test]
fn worked_example_golden_trace() {
    let forest = deserialize(ACT_PATH).unwrap();
    let mut out = Vec::new();
    let ticks = trace(&forest, &seq("q", "TCT"), &mut out).unwrap();
    assert_eq!(ticks, 9);
    assert_eq!(String::from_utf8(out).unwrap(), ACT_PATH_TRACE);
}

#[test]
fn trace_line_count() {
    let forest = build("ACGTA", 3, 1, 2, Orientation::MotifReversed);
    let mut out = Vec::new();
    let ticks = trace(&forest, &seq("q", "GATTACA"), &mut out).unwrap();
    assert_eq!(ticks, 17);
    let lines = String::from_utf8(out).unwrap().lines().count();
    assert_eq!(lines, 1 + ticks * (1 + forest.nodes().len()));
}

#[test]
fn query_tct_against_act_ball() {
    let forest = build("ACT", 3, 1, 2, Orientation::MotifReversed);
    let want: BTreeSet<String> = ["ACT", "CCT", "GCT", "TCT"].map(String::from).into();
    assert_eq!(potential_motifs(&forest, "TCT"), want);
}

#[test]
fn query_aaa_against_act_ball() {
    let forest = build("ACT", 3, 1, 2, Orientation::MotifReversed);
    let want: BTreeSet<String> = ["AAT", "ACA"].map(String::from).into();
    assert_eq!(potential_motifs(&forest, "AAA"), want);
}

#[test]
fn tick_count_for_length_ten() {
    let forest = build("ACGTA", 5, 1, 2, Orientation::MotifReversed);
    let run = Simulator::new(&forest).run_string(&seq("q", "ACGTACGTAC"), 2).unwrap();
    assert_eq!(run.ticks, 25);
}

#[test]
fn four_string_example_matches_oracle() {
    let strings = ["TGACTCGACC", "TACTGCCTCG", "CTGGCTAATA", "ATTCTGACT"];
    let seqs: Vec<_> = strings.iter().map(|s| seq("s", s)).collect();
    let forest = Forest::build(
        &seqs[0],
        SearchConfig::new(5, 1, 4).unwrap(),
        &Alphabet::dna(),
        Orientation::MotifReversed,
    )
    .unwrap();
    let report = run_all(&forest, &seqs[1..]).unwrap();
    let oracle = oracle_cas(
        &CasInstance::new(seqs.clone(), forest.config()).unwrap(),
        &Alphabet::dna(),
    );
    assert_eq!(report.verified_motifs(), oracle);
    assert!(oracle.iter().any(|m| m.as_str() == "TGACT"));
}

#[test]
fn query_order_does_not_change_verified_set() {
    let forest = build("GATTACAGG", 4, 1, 4, Orientation::MotifReversed);
    let q = [seq("a", "GATCACAG"), seq("b", "TTACAGAT"), seq("c", "CCGATAACA")];
    let a = run_all(&forest, &q).unwrap();
    let b = run_all(&forest, &[q[2].clone(), q[0].clone(), q[1].clone()]).unwrap();
    assert_eq!(a.verified_motifs(), b.verified_motifs());
    let counts = |r: &CasReport| r.records.iter().map(|x| x.potential_count()).collect::<Vec<_>>();
    assert_eq!(counts(&a), counts(&b));
    assert_eq!(run_all(&forest, &q).unwrap(), a);
}

#[derive(Debug, Clone)]
struct Instance {
    strings: Vec<String>,
    m: usize,
    d: usize,
}

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..=6, 0usize..=2, 1usize..=5).prop_flat_map(|(m, d, n)| {
        let s = prop::string::string_regex(&format!("[ACGT]{{{m},30}}")).unwrap();
        prop::collection::vec(s, n).prop_map(move |strings| Instance {
            strings,
            m,
            d: d.min(m),
        })
    })
}

fn verified_via_engine(inst: &Instance, init: Option<u64>) -> Vec<String> {
    let seqs: Vec<_> = inst.strings.iter().map(|s| seq("s", s)).collect();
    let forest = Forest::build(
        &seqs[0],
        SearchConfig::new(inst.m, inst.d, seqs.len()).unwrap(),
        &Alphabet::dna(),
        Orientation::MotifReversed,
    )
    .unwrap();
    let mut sim = Simulator::new(&forest);
    if let Some(seed) = init {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sim.fill_bit_vectors(|_, _| rng.gen());
    }
    let runs: Vec<_> = seqs[1..]
        .iter()
        .enumerate()
        .map(|(i, q)| sim.run_string(q, i + 2).unwrap())
        .collect();
    CasReport::from_runs(&forest, &runs)
        .unwrap()
        .verified_motifs()
        .iter()
        .map(|m| m.to_string())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_matches_oracle(inst in instance(), seed in any::<u64>()) {
        let seqs: Vec<_> = inst.strings.iter().map(|s| seq("s", s)).collect();
        let config = SearchConfig::new(inst.m, inst.d, seqs.len()).unwrap();
        let oracle: Vec<String> = oracle_cas(&CasInstance::new(seqs, config).unwrap(), &Alphabet::dna())
            .iter()
            .map(|m| m.to_string())
            .collect();
        prop_assert_eq!(&verified_via_engine(&inst, None), &oracle);
        prop_assert_eq!(&verified_via_engine(&inst, Some(seed)), &oracle);
    }

    /// Every number reaching an exit is either a poisoned warm-up sum
    /// (at least d + 1) or exactly the mismatch count between the window
    /// ending at that character and the reversed path.
    #[test]
    fn exit_sums_follow_the_pipeline_recurrence(
        inst in instance(),
        literal in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let orientation = if literal { Orientation::PaperLiteral } else { Orientation::MotifReversed };
        let m = inst.m;
        let d = inst.d;
        let forest = build(&inst.strings[0], m, d, 2, orientation);
        let query = inst.strings.last().unwrap().as_bytes();
        let paths: Vec<Vec<u8>> = forest.exits().iter().map(|e| forest.path_to(e.leaf)).collect();

        let mut sim = Simulator::new(&forest);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sim.fill_bit_vectors(|_, _| rng.gen());
        let schedule = TickSchedule::new(query.len(), m, d);
        sim.begin_string();
        let mut arrivals = 0;
        for t in 1..=schedule.total_ticks() {
            sim.tick(schedule.token(t, query));
            for (e, path) in paths.iter().enumerate() {
                match sim.exit_input(e) {
                    StreamToken::Number(s) => {
                        prop_assert!(t >= 2 + m && (t - m) % 2 == 0, "number at tick {}", t);
                        let k = (t - m - 2) / 2;
                        if k + 1 >= m {
                            let window = &query[k + 1 - m..=k];
                            let reversed: Vec<u8> = path.iter().rev().copied().collect();
                            prop_assert_eq!(s as usize, mismatches(window, &reversed));
                        } else {
                            prop_assert!(s as usize > d);
                        }
                        prop_assert!(s as usize <= d + 1 + m);
                        arrivals += 1;
                    }
                    StreamToken::Character(_) => prop_assert!((t - m) % 2 == 1),
                    StreamToken::Blank => {}
                }
            }
            for node in 0..forest.nodes().len() {
                if let StreamToken::Number(v) = sim.slot(node) {
                    prop_assert!(v as usize <= d + 1 + m);
                }
            }
        }
        prop_assert_eq!(arrivals, query.len() * forest.exits().len());
        prop_assert_eq!(sim.ticks_elapsed(), 2 * query.len() + m);
    }

    #[test]
    fn traces_are_deterministic(inst in instance()) {
        let forest = build(&inst.strings[0], inst.m, inst.d, 2, Orientation::MotifReversed);
        let q = seq("q", inst.strings.last().unwrap());
        let mut a = Vec::new();
        let mut b = Vec::new();
        trace(&forest, &q, &mut a).unwrap();
        trace(&forest, &q, &mut b).unwrap();
        prop_assert_eq!(a, b);
    }
}
