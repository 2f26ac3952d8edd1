//! Bundled word lists used by the linguistic features and the sentiment
//! scorer. All entries are lowercase single words.

/// Valence lexicon, scores in [-1, 1].
pub const VALENCE: &[(&str, f64)] = &[
    // positive
    ("love", 1.0),
    ("loved", 1.0),
    ("lovely", 1.0),
    ("excellent", 1.0),
    ("wonderful", 1.0),
    ("amazing", 1.0),
    ("awesome", 1.0),
    ("fantastic", 1.0),
    ("great", 0.75),
    ("happy", 0.75),
    ("beautiful", 0.75),
    ("brave", 0.75),
    ("kind", 0.75),
    ("kindness", 0.75),
    ("grateful", 0.75),
    ("thank", 0.75),
    ("thanks", 0.75),
    ("support", 0.5),
    ("supporting", 0.5),
    ("solidarity", 0.75),
    ("together", 0.5),
    ("hope", 0.5),
    ("hopeful", 0.5),
    ("good", 0.5),
    ("nice", 0.5),
    ("respect", 0.5),
    ("safe", 0.5),
    ("care", 0.5),
    ("proud", 0.5),
    ("peace", 0.5),
    ("friend", 0.5),
    ("friends", 0.5),
    ("help", 0.5),
    ("helping", 0.5),
    ("healthy", 0.5),
    ("stronger", 0.5),
    ("welcome", 0.5),
    ("fair", 0.25),
    ("ok", 0.25),
    ("okay", 0.25),
    ("agree", 0.25),
    // negative
    ("hate", -1.0),
    ("hateful", -1.0),
    ("disgusting", -1.0),
    ("evil", -1.0),
    ("horrible", -1.0),
    ("terrible", -1.0),
    ("awful", -1.0),
    ("racist", -1.0),
    ("racism", -1.0),
    ("kill", -1.0),
    ("murder", -1.0),
    ("attack", -0.75),
    ("attacked", -0.75),
    ("blame", -0.75),
    ("disgrace", -0.75),
    ("angry", -0.75),
    ("liar", -0.75),
    ("lie", -0.75),
    ("lied", -0.75),
    ("lies", -0.75),
    ("stupid", -0.75),
    ("idiot", -0.75),
    ("dirty", -0.75),
    ("dead", -0.75),
    ("death", -0.75),
    ("died", -0.75),
    ("bad", -0.5),
    ("sick", -0.5),
    ("fear", -0.5),
    ("afraid", -0.5),
    ("sad", -0.5),
    ("wrong", -0.5),
    ("fault", -0.5),
    ("danger", -0.5),
    ("dangerous", -0.5),
    ("threat", -0.5),
    ("crisis", -0.5),
    ("pay", -0.25),
    ("worse", -0.5),
    ("worst", -0.75),
    ("shame", -0.5),
    ("problem", -0.25),
];

pub fn valence(word: &str) -> Option<f64> {
    VALENCE.iter().find(|(w, _)| *w == word).map(|&(_, v)| v)
}

pub const FIRST_PERSON_SINGULAR: &[&str] = &["i", "me", "my", "mine", "myself", "i'm", "i've", "i'll", "i'd"];
pub const FIRST_PERSON_PLURAL: &[&str] = &["we", "us", "our", "ours", "ourselves", "we're", "we've", "we'll"];
pub const SECOND_PERSON: &[&str] = &[
    "you",
    "your",
    "yours",
    "yourself",
    "yourselves",
    "u",
    "ur",
    "you're",
    "you've",
    "you'll",
];
pub const THIRD_PERSON_SINGULAR: &[&str] = &[
    "he", "she", "him", "her", "his", "hers", "himself", "herself", "it", "its", "itself", "he's", "she's", "it's",
];
pub const THIRD_PERSON_PLURAL: &[&str] = &["they", "them", "their", "theirs", "themselves", "they're", "they've"];

pub const PROFANITY: &[&str] = &[
    "fuck", "fucking", "fucked", "shit", "shitty", "damn", "bitch", "bastard", "crap", "ass", "asshole", "hell",
    "piss", "dick", "bullshit", "wtf", "stfu",
];

pub const NEGATIONS: &[&str] = &[
    "not",
    "no",
    "never",
    "nothing",
    "nobody",
    "none",
    "neither",
    "nor",
    "don't",
    "doesn't",
    "didn't",
    "isn't",
    "aren't",
    "wasn't",
    "weren't",
    "can't",
    "cannot",
    "won't",
    "shouldn't",
];

pub const INTENSIFIERS: &[&str] = &[
    "very",
    "so",
    "really",
    "extremely",
    "totally",
    "absolutely",
    "completely",
    "super",
    "too",
];

pub const QUESTION_WORDS: &[&str] = &["what", "why", "how", "who", "whom", "when", "where", "which"];

pub const MODALS: &[&str] = &[
    "should", "must", "could", "would", "can", "will", "might", "may", "shall",
];

pub fn contains(list: &[&str], word: &str) -> bool {
    list.contains(&word)
}
