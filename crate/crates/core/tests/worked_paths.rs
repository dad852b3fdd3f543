use lozenge::reduction::{classify, shortest_word, Germ, DEFAULT_STATE_BUDGET};
use lozenge::triple::{apply_word, Word};
use lozenge::Triple;

#[test]
fn path_to_2023_passes_the_intermediate_triple() {
    let start = Triple::new(0, 1, 1);
    let prefix = Word::parse_composition(&"231".repeat(22)).unwrap();
    let mid = apply_word(&prefix, &start).unwrap();
    assert_eq!(mid, Triple::new(1089, 1156, 1123));
    assert_eq!(classify(&mid).unwrap().germ, Germ::G011);
    assert_eq!(classify(&Triple::new(1089, 1151, 1123)).unwrap().germ, Germ::G000);
}

#[test]
fn shortest_word_to_2023() {
    let start = Triple::new(0, 1, 1);
    let w = shortest_word(&start, 2023, 128, DEFAULT_STATE_BUDGET).unwrap().unwrap();
    assert_eq!(w.len(), 99);
    assert!(apply_word(&w, &start).unwrap().contains(&2023));
    assert_eq!(shortest_word(&start, 2023, 98, DEFAULT_STATE_BUDGET).unwrap(), None);
}
