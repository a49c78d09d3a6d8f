//! Shortest-code construction: Huffman lengths, canonical codewords.
//!
//! The tree construction breaks weight ties deterministically (the node
//! whose symbol set sorts first wins), and the resulting code lengths are
//! then reassigned canonically — symbols sorted by length, then by symbol —
//! so the same distribution always yields byte-identical code books.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use super::{CodeBook, SymbolDistribution};
use crate::error::Result;

/// A pending subtree in the Huffman merge queue.
struct Node {
    weight: f64,
    /// All symbols under this subtree, kept sorted; used as the tie-break
    /// key so equal weights merge in a reproducible order.
    symbols: Vec<char>,
    /// Leaf depth accumulator: code length assigned so far per symbol.
    depths: BTreeMap<char, usize>,
}

impl Node {
    fn leaf(symbol: char, weight: f64) -> Node {
        Node {
            weight,
            symbols: vec![symbol],
            depths: [(symbol, 0)].into_iter().collect(),
        }
    }

    fn merge(low: Node, high: Node) -> Node {
        let mut symbols = low.symbols;
        symbols.extend(high.symbols);
        symbols.sort_unstable();
        let mut depths = low.depths;
        depths.extend(high.depths);
        for depth in depths.values_mut() {
            *depth += 1;
        }
        Node {
            weight: low.weight + high.weight,
            symbols,
            depths,
        }
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Node) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Node) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Node) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and we want the lightest node
        // (lowest symbol set on ties) popped first.
        other
            .weight
            .total_cmp(&self.weight)
            .then_with(|| other.symbols.cmp(&self.symbols))
    }
}

/// Builds the canonical shortest code book for a letter distribution.
///
/// Codeword lengths come from the Huffman construction, so the expected
/// length L satisfies H ≤ L < H + 1 and more frequent symbols never get
/// longer codewords than rarer ones. A single-symbol alphabet still needs
/// one bit to be decodable and gets the codeword `0`.
pub fn build_codebook(dist: &SymbolDistribution) -> Result<CodeBook> {
    let lengths = code_lengths(dist);
    // Canonical assignment: sort by (length, symbol), count upwards,
    // left-shifting whenever the length grows.
    let mut order: Vec<(usize, char)> = lengths.iter().map(|(&c, &l)| (l, c)).collect();
    order.sort_unstable();

    let mut codes: BTreeMap<char, String> = BTreeMap::new();
    let mut value: u64 = 0;
    let mut prev_len = 0;
    for (len, symbol) in order {
        value <<= len - prev_len;
        codes.insert(symbol, format!("{value:0width$b}", width = len));
        value += 1;
        prev_len = len;
    }
    CodeBook::from_codes(codes)
}

/// Huffman code lengths with deterministic tie-breaking.
fn code_lengths(dist: &SymbolDistribution) -> BTreeMap<char, usize> {
    let mut heap: BinaryHeap<Node> = dist
        .iter()
        .map(|(symbol, weight)| Node::leaf(symbol, weight))
        .collect();

    if heap.len() == 1 {
        let only = heap.pop().unwrap();
        return only.symbols.iter().map(|&c| (c, 1)).collect();
    }
    while heap.len() > 1 {
        let low = heap.pop().unwrap();
        let high = heap.pop().unwrap();
        heap.push(Node::merge(low, high));
    }
    heap.pop().map(|root| root.depths).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{decode, encode, entropy};

    fn dist(pairs: &[(char, f64)]) -> SymbolDistribution {
        SymbolDistribution::new(pairs.iter().copied().collect()).unwrap()
    }

    #[test]
    fn dyadic_distribution_gets_exact_lengths() {
        let cb = build_codebook(&dist(&[('A', 0.5), ('B', 0.25), ('C', 0.25)])).unwrap();
        assert_eq!(cb.code('A').unwrap().len(), 1);
        assert_eq!(cb.code('B').unwrap().len(), 2);
        assert_eq!(cb.code('C').unwrap().len(), 2);
        // Canonical form is fully pinned down, not just the lengths.
        assert_eq!(cb.code('A'), Some("0"));
        assert_eq!(cb.code('B'), Some("10"));
        assert_eq!(cb.code('C'), Some("11"));
    }

    #[test]
    fn equal_weights_are_resolved_deterministically() {
        let d = dist(&[('A', 0.25), ('B', 0.25), ('C', 0.25), ('D', 0.25)]);
        let first = build_codebook(&d).unwrap();
        for _ in 0..10 {
            assert_eq!(build_codebook(&d).unwrap(), first);
        }
        assert_eq!(first.code('A'), Some("00"));
        assert_eq!(first.code('D'), Some("11"));
    }

    #[test]
    fn frequent_symbols_never_get_longer_codes() {
        let d = dist(&[
            ('A', 0.5),
            ('B', 0.25),
            ('C', 0.125),
            ('D', 0.0625),
            ('E', 0.03125),
            ('F', 0.03125),
        ]);
        let cb = build_codebook(&d).unwrap();
        // The frequent letter beats the rare one outright here.
        assert!(cb.code('A').unwrap().len() < cb.code('F').unwrap().len());
        let mut symbols: Vec<(char, f64)> = d.iter().collect();
        symbols.sort_by(|a, b| b.1.total_cmp(&a.1));
        for pair in symbols.windows(2) {
            if pair[0].1 > pair[1].1 {
                assert!(cb.code(pair[0].0).unwrap().len() <= cb.code(pair[1].0).unwrap().len());
            }
        }
    }

    #[test]
    fn expected_length_is_within_one_bit_of_entropy() {
        let d = dist(&[('A', 0.4), ('B', 0.3), ('C', 0.2), ('D', 0.1)]);
        let cb = build_codebook(&d).unwrap();
        let h = entropy(&d);
        let l = cb.expected_length(&d);
        assert!(h - 1e-9 <= l && l < h + 1.0);
    }

    #[test]
    fn single_symbol_alphabet_still_roundtrips() {
        let cb = build_codebook(&dist(&[('A', 1.0)])).unwrap();
        assert_eq!(cb.code('A'), Some("0"));
        assert_eq!(decode(&encode("AAA", &cb).unwrap(), &cb).unwrap(), "AAA");
    }

    #[test]
    fn roundtrip_over_a_small_alphabet() {
        let d = dist(&[('K', 0.4), ('L', 0.3), ('M', 0.2), ('N', 0.1)]);
        let cb = build_codebook(&d).unwrap();
        for word in ["K", "KLMN", "NNNN", "MKLK"] {
            assert_eq!(decode(&encode(word, &cb).unwrap(), &cb).unwrap(), word);
        }
    }
}
