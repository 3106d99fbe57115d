//! The lower-bound constructions as concrete instances, each checked by
//! exhaustive search.
//!
//!     cargo run --release --example hardness_instances

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satstream::hardness::{
    exact_maxand, gen_ksat_index, gen_maxand_index, gen_minsat_index, gen_sk, pairwise_exclusive,
    verify_all_satisfiable, HardnessConfig, IndexInstance,
};
use satstream::maxsat::{exact_optimum, Objective};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 1..=4 {
        let sk = gen_sk(k).unwrap();
        println!("S_{k}: {} clauses, satisfiable: {}", sk.len(), verify_all_satisfiable(&sk, k).unwrap().is_some());
    }

    let cfg = HardnessConfig::new(9, 3, 1, 0);
    for _ in 0..3 {
        let inst = IndexInstance::random(&[3, 3, 3], &mut rng);
        let cl = gen_ksat_index(&inst, &cfg).unwrap();
        let sat = verify_all_satisfiable(&cl, 9).unwrap().is_some();
        println!("3-SAT index {:?}: A_i = {}, {} clauses, satisfiable: {sat}", inst.index, inst.target_bit() as u8, cl.len());
    }

    let mut cfg = HardnessConfig::new(16, 1, 16, 5);
    cfg.t = 12;
    let inst = IndexInstance::random(&[16, 16], &mut rng);
    let cl = gen_maxand_index(&inst, &cfg).unwrap();
    let (_, v) = exact_maxand(&cl, 28).unwrap();
    println!(
        "Max-AND index {:?}: A = {}, system exclusive: {}, optimum {v}",
        inst.index,
        inst.target_bit() as u8,
        pairwise_exclusive(&cl[..16])
    );

    let inst = IndexInstance::random(&[10], &mut rng);
    let cl = gen_minsat_index(&inst).unwrap();
    let (_, opt) = exact_optimum(&cl, 10, Objective::Minimize).unwrap();
    println!("Min-SAT gadget: A_i = {}, OPT = {opt}", inst.target_bit() as u8);
}
