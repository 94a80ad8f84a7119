//! Generates the bundled synthetic review corpus.
//!
//! ```text
//! cargo run -p opinion-core --example synth_corpus -- data/synthetic
//! ```
//!
//! Writes `train.csv` (60 reviews, 20 per class) and `test.csv` (30 reviews,
//! 10 per class). Reviews are assembled from templates around the bundled
//! sentiment words plus shared filler sentences; about a quarter of the
//! neutral reviews mix a positive and a negative remark.

use std::path::PathBuf;

use opinion_core::{Corpus, Polarity, ReviewRecord};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_517;

const CATEGORIES: &[(&str, &str)] = &[("dresses", "dress"), ("handbags", "handbag"), ("shoes", "shoes"), ("rings", "ring")];

const POSITIVE: &[&str] = &[
    "I love this {p}.",
    "It is beautiful.",
    "Looks so pretty on me.",
    "Really cute design.",
    "Good quality for sure.",
    "Great value.",
    "Very nice color.",
    "Fits well.",
    "So comfortable to wear.",
    "I like the style a lot.",
    "Happy with my purchase.",
    "Glad I bought it.",
    "Pleased with the quality.",
    "Excited to wear it again.",
    "Even better than I expect.",
    "I recommend it to everyone.",
];

const NEGATIVE: &[&str] = &[
    "It is too tight.",
    "The material is stiff.",
    "Poor quality.",
    "They sent the wrong size.",
    "Looks weird in person.",
    "I hate it.",
    "Very disappointed.",
    "Stupid design.",
    "I will return it.",
];

const NEUTRAL: &[&str] = &[
    "It is ok.",
    "It is okay for the price.",
    "Alright I guess.",
    "Okay but nothing special.",
    "The {p} is alright.",
    "Ok quality.",
];

const FILLER: &[&str] = &[
    "I bought this {p} for my sister.",
    "Arrived on time.",
    "The color matches the picture.",
    "Ordered a size medium.",
    "Shipping took a week.",
    "Second order from this shop.",
];

const TITLES: [&[&str]; 3] = [
    &["Love it", "Great {p}", "Beautiful", "Five stars"],
    &["Disappointed", "Not as described", "Poor quality"],
    &["It's okay", "Alright", "Average {p}"],
];

fn fill(template: &str, product: &str) -> String {
    template.replace("{p}", product)
}

fn review(rng: &mut ChaCha8Rng, id: u64, label: Polarity) -> ReviewRecord {
    let &(category, product) = CATEGORIES.choose(rng).unwrap();
    let mut sentences: Vec<String> = Vec::new();
    match label {
        Polarity::Positive => {
            let k = rng.random_range(2..=3);
            sentences.extend(POSITIVE.choose_multiple(rng, k).map(|s| fill(s, product)));
        }
        Polarity::Negative => {
            let k = rng.random_range(2..=3);
            sentences.extend(NEGATIVE.choose_multiple(rng, k).map(|s| fill(s, product)));
        }
        Polarity::Neutral => {
            sentences.push(fill(NEUTRAL.choose(rng).unwrap(), product));
            if rng.random_bool(0.25) {
                sentences.push(fill(POSITIVE.choose(rng).unwrap(), product));
                sentences.push(fill(NEGATIVE.choose(rng).unwrap(), product));
            }
        }
    }
    let fillers = rng.random_range(1..=2);
    sentences.extend(FILLER.choose_multiple(rng, fillers).map(|s| fill(s, product)));
    sentences.shuffle(rng);
    ReviewRecord {
        id,
        category: category.to_string(),
        title: fill(TITLES[label.index()].choose(rng).unwrap(), product),
        body: sentences.join(" "),
        human_label: Some(label),
        machine_label: None,
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/synthetic".into()));
    std::fs::create_dir_all(&out)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut labels: Vec<Polarity> = Polarity::ALL.iter().flat_map(|&p| std::iter::repeat_n(p, 30)).collect();
    labels.shuffle(&mut rng);
    let records: Vec<ReviewRecord> =
        labels.iter().enumerate().map(|(i, &l)| review(&mut rng, i as u64 + 1, l)).collect();

    // First 20 of each class train, the remaining 10 test.
    let mut seen = [0usize; 3];
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for r in records {
        let c = r.human_label.unwrap().index();
        seen[c] += 1;
        if seen[c] <= 20 {
            train.push(r);
        } else {
            test.push(r);
        }
    }
    Corpus::new(train)?.save(&out.join("train.csv"))?;
    Corpus::new(test)?.save(&out.join("test.csv"))?;
    println!("wrote {}", out.display());
    Ok(())
}
