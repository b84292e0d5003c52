use ljmse_bench::{corpus, terms};

#[test]
fn corpus_is_seeded_and_sized() {
    let a = corpus(50, 10);
    assert_eq!(a.len(), 50);
    assert_eq!(a, corpus(50, 10));
    assert!(!terms(&a).is_empty());
}
