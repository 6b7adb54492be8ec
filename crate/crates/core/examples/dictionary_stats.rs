//! Filters the bundled word list for each word length and shows why words
//! are dropped.
//!
//! ```text
//! cargo run -p jotto --example dictionary_stats
//! ```

use jotto::{num_common_letters, twl06, Dictionary};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>7} {:>6} {:>10} {:>9}", "letters", "words", "repeats", "anagrams");
    for letters in 2..=5 {
        let d = twl06(letters)?;
        let s = d.stats();
        println!("{letters:>7} {:>6} {:>10} {:>9}", d.len(), s.duplicate_letters, s.anagram_excluded);
    }

    // Every member of an anagram class goes, not just the duplicates.
    let d = Dictionary::from_words(["STOP", "POTS", "TOPS", "JOLT", "APPLE"], 4)?;
    println!("\nfrom STOP POTS TOPS JOLT APPLE (4 letters): {:?}", d.words());
    for w in ["TOPS", "APPLE", "BOLT", "JOLT"] {
        match d.check_word(w) {
            Ok(i) => println!("  {w}: word #{i}"),
            Err(why) => println!("  {w}: {why}"),
        }
    }

    println!("\nGIANT vs PECAN share {} letters", num_common_letters("GIANT", "PECAN"));
    Ok(())
}
