use seglink::corpus::{self, random_disjoint};
use seglink::gadget::transform_circuit;
use seglink::linker::{decide, oracle_decide, verify_linking, Decision, LinkMode, ORACLE_CAP};

const MODES: [LinkMode; 2] = [LinkMode::Circuit, LinkMode::Path];

#[test]
fn solver_matches_oracle_on_random_families() {
    for seed in 0..100u64 {
        let n = 1 + (seed % 5) as usize;
        let f = random_disjoint(n, seed);
        for mode in MODES {
            let fast = decide(&f, mode);
            let slow = oracle_decide(&f, mode, ORACLE_CAP).unwrap();
            assert_eq!(fast, slow, "seed {seed} mode {mode:?}\n{}", f.serialize());
        }
    }
}

#[test]
fn solver_matches_oracle_on_four_segments() {
    for seed in 1000..1100u64 {
        let f = random_disjoint(4, seed);
        for mode in MODES {
            assert_eq!(decide(&f, mode), oracle_decide(&f, mode, ORACLE_CAP).unwrap(), "seed {seed}");
        }
    }
}

#[test]
fn standalone_gadget_family() {
    let (out, _) = transform_circuit(&corpus::l_instance()).unwrap();
    assert_eq!(out.len(), 7);
    for mode in MODES {
        let fast = decide(&out, mode);
        assert!(fast.is_yes());
        assert_eq!(fast, oracle_decide(&out, mode, ORACLE_CAP).unwrap());
    }
}

#[test]
fn circuit_implies_path() {
    for seed in 0..60u64 {
        let f = random_disjoint(1 + (seed % 6) as usize, seed + 500);
        if let Decision::Yes(w) = decide(&f, LinkMode::Circuit) {
            assert!(verify_linking(&f, &w).is_ok());
            assert!(decide(&f, LinkMode::Path).is_yes(), "seed {seed}");
        }
    }
}

#[test]
fn decisions_are_deterministic() {
    let f = random_disjoint(6, 42);
    let first = decide(&f, LinkMode::Path);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let single = pool.install(|| decide(&f, LinkMode::Path));
    assert_eq!(first, single);
}
