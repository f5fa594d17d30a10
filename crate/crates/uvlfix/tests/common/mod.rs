#![allow(dead_code)]

use std::fs;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uvlfix_core::corrupt::{Corruption, NameDefect};
use uvlfix_core::{serialize_model, Constraint, Feature, FeatureModel, Group, GroupKind};

pub const LISTING: &str = concat!(
    "features\n",
    "\tMOBILE_PHONE {abstract}    \n",
    "\t\tor\n",
    "\t\t\tMP3_Recording\n",
    "\t\t\tCamera_Resolution\n",
    "\n",
    "\t\t\t\talternative\n",
    "\t\t\t\t\t2.1MP\n",
    "\t\t\t\t\t5 MP\n",
    "\t\t\t\t\t3.1MP\n",
    "\t\t\tCamera\n",
    "\t\t\tAudio_Formats \n",
    "\t\t\t\tor\n",
    "\t\t\t\t\tWAV\n",
    "\t\t\t\t\tMP3\n",
    "\n",
    "constraints\n",
    "\tMP3_Recording => MP3\n",
);

const WORDS: [&str; 10] = [
    "Phone", "Camera", "Audio", "Screen", "Gps", "Wifi", "Battery", "Codec", "Sensor", "Storage",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Namer(usize);

impl Namer {
    fn next(&mut self) -> String {
        let n = self.0;
        self.0 += 1;
        format!("{}{}", WORDS[n % WORDS.len()], n)
    }
}

fn feature(rng: &mut ChaCha8Rng, namer: &mut Namer, depth: u32, force_group: bool) -> Feature {
    let mut f = Feature::new(namer.next());
    f.is_abstract = rng.random_bool(0.2);
    let groups = if force_group || (depth < 3 && rng.random_bool(0.4)) {
        rng.random_range(1..=2)
    } else {
        0
    };
    for _ in 0..groups {
        let kind = *GroupKind::ALL.choose(rng).expect("non-empty");
        let children = (0..rng.random_range(1..=3))
            .map(|_| feature(rng, namer, depth + 1, false))
            .collect();
        f.groups.push(Group { kind, children });
    }
    f
}

fn expr(rng: &mut ChaCha8Rng, names: &[String], depth: u32) -> Constraint {
    if depth == 0 || rng.random_bool(0.3) {
        return Constraint::reference(names.choose(rng).expect("non-empty").clone());
    }
    let l = expr(rng, names, depth - 1);
    match rng.random_range(0..6) {
        0 => Constraint::not(l),
        1 => Constraint::paren(l),
        2 => Constraint::and(l, expr(rng, names, depth - 1)),
        3 => Constraint::or(l, expr(rng, names, depth - 1)),
        4 => Constraint::implies(l, expr(rng, names, depth - 1)),
        _ => Constraint::iff(l, expr(rng, names, depth - 1)),
    }
}

/// A random model whose root always has at least one group.
pub fn random_model(rng: &mut ChaCha8Rng) -> FeatureModel {
    let mut namer = Namer(0);
    let root = feature(rng, &mut namer, 0, true);
    let mut model = FeatureModel {
        root,
        constraints: Vec::new(),
    };
    let names = feature_names(&model);
    model.constraints = (0..rng.random_range(0..=3))
        .map(|_| expr(rng, &names, 3))
        .collect();
    model
}

pub fn feature_names(m: &FeatureModel) -> Vec<String> {
    m.features().iter().map(|f| f.name.clone()).collect()
}

/// A plan that always renames one feature and may add layout defects.
pub fn fixable_plan(rng: &mut ChaCha8Rng, clean: &str, names: &[String]) -> Vec<Corruption> {
    let line_count = clean.lines().count();
    let mut plan = vec![Corruption::RenameFeature {
        name: names.choose(rng).expect("non-empty").clone(),
        defect: *NameDefect::ALL.choose(rng).expect("non-empty"),
    }];
    for _ in 0..rng.random_range(0..=3) {
        let line = rng.random_range(1..=line_count);
        plan.push(match rng.random_range(0..4) {
            0 => Corruption::InsertBlankLine { before_line: line },
            1 => Corruption::InsertTabOnlyLine { before_line: line },
            2 => Corruption::SpacesForTabs { line, width: 4 },
            _ => Corruption::RenameFeature {
                name: names.choose(rng).expect("non-empty").clone(),
                defect: *NameDefect::ALL.choose(rng).expect("non-empty"),
            },
        });
    }
    if rng.random_bool(0.3) {
        plan.push(Corruption::ReencodeLatin1);
    }
    plan
}

pub fn write(path: &Path, bytes: &[u8]) {
    fs::create_dir_all(path.parent().expect("has parent")).unwrap();
    fs::write(path, bytes).unwrap();
}

/// Writes `count` clean printer-generated models under `root`, spread over
/// five datasets, and returns their relative paths and texts.
pub fn clean_corpus(root: &Path, count: usize, seed: u64) -> Vec<(String, String)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let rel = if i % 7 == 0 {
                format!("ds{}/nested/m{i:03}.uvl", i % 5)
            } else {
                format!("ds{}/m{i:03}.uvl", i % 5)
            };
            let text = serialize_model(&random_model(&mut rng));
            write(&root.join(&rel), text.as_bytes());
            (rel, text)
        })
        .collect()
}
