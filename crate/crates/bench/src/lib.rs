//! Shared inputs for the benchmarks.

use ljmse_core::syntax::{Expr, Term};
use ljmse_core::verify::{gen_typed, GenConfig};

/// Seeded well-typed λJmse expressions of size at most `max_size`.
pub fn corpus(count: usize, max_size: usize) -> Vec<Expr> {
    let cfg = GenConfig {
        max_size,
        ..GenConfig::default().with_count(count)
    };
    gen_typed(&cfg).into_iter().map(|(_, e, _)| e).collect()
}

/// The terms of a corpus, for the translations.
pub fn terms(corpus: &[Expr]) -> Vec<Term> {
    corpus.iter().filter_map(|e| e.as_term().cloned()).collect()
}
