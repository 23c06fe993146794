//! Robustness: parser behavior on garbage, wider shapes, seed sweeps.

use cdk_core::harness::gen::RandomMapConfig;
use cdk_core::harness::suite::{run_cd_suite, CdSuiteConfig, SmoothCat};
use cdk_core::kleisli::Kleisli;
use cdk_core::monads::tangent_monad;
use cdk_core::seeding::subseed;
use cdk_core::text::parse_map;
use cdk_core::EqPolicy;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;

#[test]
fn parser_never_panics_on_garbage() {
    let alphabet: Vec<char> = "map(xyz,)->+-*^123/ sincoexp\n\t".chars().collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20_000 {
        let len = rng.gen_range(0..60);
        let input: String = (0..len)
            .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
            .collect();
        let _ = parse_map(&input); // must return, never panic
    }
    // and mangled versions of a valid map
    let valid = "map ((x,y),z) -> (x*y + sin(z), 3/2*x^2)";
    for cut in 0..valid.len() {
        let _ = parse_map(&valid[..cut]);
        let mut s = valid.to_string();
        s.remove(cut);
        let _ = parse_map(&s);
    }
}

#[test]
fn axioms_hold_on_wider_shapes_and_deeper_expressions() {
    let cfg = CdSuiteConfig {
        gen: RandomMapConfig {
            dims: 3..=4,
            max_depth: 5,
            ..RandomMapConfig::polynomial(7001)
        },
        policy: EqPolicy::Exact,
        trials: 3,
    };
    let r = run_cd_suite(&SmoothCat, &cfg);
    assert!(r.passed, "{:?}", r.failing_axioms());
    let kl = Kleisli::new(tangent_monad());
    let r = run_cd_suite(&kl, &cfg);
    assert!(r.passed, "{:?}", r.failing_axioms());
}

#[test]
fn sampled_passes_are_not_seed_sensitive() {
    for seed in 0..8u64 {
        let cfg = CdSuiteConfig {
            trials: 3,
            ..CdSuiteConfig::sampled(subseed(9999, seed))
        };
        let r = run_cd_suite(&SmoothCat, &cfg);
        assert!(r.passed, "seed {seed}: {:?}", r.failing_axioms());
        let kl = Kleisli::new(tangent_monad());
        let r = run_cd_suite(&kl, &cfg);
        assert!(r.passed, "kleisli seed {seed}: {:?}", r.failing_axioms());
    }
}
