//! The weight spectral sequence of a Kodaira I_n degeneration and its
//! monodromy verdicts.

use std::collections::BTreeMap;

use monodromy::filtration::{bad_primes_of_nilpotent, NilpotentOperator};
use monodromy::specseq::{assemble_e1, compute_e2, compute_e2_mod, corpus, monodromy_on_e2, total_rank_consistency};

fn main() -> monodromy::Result<()> {
    let n = 12;
    let page = assemble_e1(&corpus::i_n(n)?)?;
    let e2 = compute_e2(&page);
    for ((v, w), e) in &e2 {
        if page.rank(*v, *w) > 0 {
            println!("E1^{{{v},{w}}} rank {:>2}   E2 free rank {} torsion {:?}", page.rank(*v, *w), e.free_rank, e.torsion);
        }
    }

    let verdict = monodromy_on_e2(&page, &e2, 1);
    let l1 = verdict.level(1).expect("level 1");
    println!("ν: E2^{{-1,2}} -> E2^{{1,0}} divisors {}  bad primes {:?}", l1.divisors, verdict.bad_primes());

    let model = NilpotentOperator::from_i64(&[&[0, n as i64], &[0, 0]])?;
    println!("Tate-module model bad primes {:?}", bad_primes_of_nilpotent(&model)?.set());

    let betti: BTreeMap<usize, usize> = [(0, 1), (1, 2), (2, 1)].into();
    println!("degenerates consistently: {}", total_rank_consistency(&e2, &betti).consistent());

    let two = corpus::two_components(1, 4);
    let page = assemble_e1(&two)?;
    let e2 = compute_e2(&page);
    let mod2 = compute_e2_mod(&page, 2)?;
    println!("two components, s = 4: E2^{{1,2}} torsion {:?}, dim over F_2 {}", e2[&(1, 2)].torsion, mod2[&(1, 2)].dim);
    Ok(())
}
