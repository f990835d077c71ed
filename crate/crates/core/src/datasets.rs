//! Small reference data sets used by tests, examples and the CLI samples.

use std::collections::HashMap;

use crate::context::FormalContext;
use crate::many_valued::{apply_scaling, ManyValuedContext, Scale, ScaleKind};

/// Four geometric figures with attributes a..d.
pub fn geometric_figures() -> FormalContext {
    FormalContext::from_crosses(["1", "2", "3", "4"], ["a", "b", "c", "d"], &["X..X", "X.X.", ".XX.", ".XXX"])
        .expect("geometric figures")
}

/// Five students described by gender, age, subject and mark.
pub fn university_subjects() -> ManyValuedContext {
    ManyValuedContext::from_rows(
        ["1", "2", "3", "4", "5"],
        ["Gender", "Age", "Subject", "Mark"],
        &[
            &["M", "19", "Math", "8"],
            &["F", "20", "CS", "9"],
            &["F", "19", "Math", "7"],
            &["M", "20", "CS", "10"],
            &["F", "21", "Data Mining", "9"],
        ],
    )
    .expect("university subjects")
}

/// The scaling plan for [`university_subjects`]: dichotomic gender, ordinal
/// age, nominal subject and interordinal mark.
pub fn university_scaling_plan() -> HashMap<String, Scale> {
    let mv = university_subjects();
    let mut plan = HashMap::new();
    plan.insert("Gender".to_string(), Scale::dichotomic("M", "F").expect("two values"));
    for (attr, kind) in [
        ("Age", ScaleKind::Ordinal),
        ("Subject", ScaleKind::Nominal),
        ("Mark", ScaleKind::Interordinal),
    ] {
        plan.insert(attr.to_string(), Scale::for_attribute(&mv, attr, kind).expect("known attribute"));
    }
    plan
}

/// The scaled university context (5 objects, 16 attributes).
pub fn university_scaled() -> FormalContext {
    apply_scaling(&university_subjects(), &university_scaling_plan()).expect("complete plan")
}

/// Five customers and their purchases.
pub fn customers() -> FormalContext {
    FormalContext::from_crosses(
        ["c1", "c2", "c3", "c4", "c5"],
        ["Beer", "Cakes", "Milk", "Müsli", "Chips"],
        &["X...X", ".XXX.", "X.XXX", "XXX.X", ".XXXX"],
    )
    .expect("customers")
}

/// The 5x5 context used for OA-bicluster densities.
pub fn bicluster_exercise() -> FormalContext {
    FormalContext::from_crosses(
        ["g1", "g2", "g3", "g4", "g5"],
        ["m1", "m2", "m3", "m4", "m5"],
        &["XXXXX", "XXXX.", "X..XX", "X..XX", "X..XX"],
    )
    .expect("bicluster exercise")
}

/// Five papers indexed by six terms.
pub fn papers_terms() -> FormalContext {
    FormalContext::from_crosses(
        ["p1", "p2", "p3", "p4", "p5"],
        ["browsing", "mining", "software", "web services", "FCA", "IR"],
        &["XXX.X.", "..X.XX", ".X.XX.", "X.X.X.", "...XXX"],
    )
    .expect("papers")
}

/// Means of transport for the exploration walkthrough.
pub fn transport() -> FormalContext {
    FormalContext::from_crosses(
        ["plane", "amphibian car", "catamaran", "car", "submarine"],
        ["surface", "air", "water", "underwater"],
        &[".X..", "X.X.", "..X.", "..XX", "..XX"],
    )
    .expect("transport")
}

/// Movie ratings of six users; 0 means unrated.
pub const MOVIES: [&str; 7] = ["The Artist", "Ghost", "Casablanca", "Mamma Mia!", "Dogma", "Die Hard", "Leon"];

pub const RATINGS: [[i64; 7]; 6] = [
    [4, 4, 5, 0, 0, 0, 0],
    [5, 5, 3, 4, 3, 0, 0],
    [0, 0, 0, 4, 4, 0, 0],
    [0, 0, 0, 5, 4, 5, 3],
    [0, 0, 0, 0, 0, 5, 5],
    [0, 0, 0, 0, 0, 4, 4],
];

pub fn users() -> Vec<String> {
    (1..=6).map(|i| format!("u{i}")).collect()
}

/// Ratings thresholded at `>= 3`: the 6x7 matrix factorised by three concepts.
pub fn ratings_at_least_three() -> FormalContext {
    let rows: Vec<Vec<f64>> = RATINGS.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    FormalContext::from_ratings(users(), MOVIES, &rows, 3.0, true).expect("ratings")
}

/// A toy folksonomy: users tag papers.
pub fn bibsonomy() -> crate::clustering::TriContext {
    crate::clustering::TriContext::from_labelled(&[
        ("Poelmans", "Domestic Violence", "paper3"),
        ("Elzinga", "Domestic Violence", "paper3"),
        ("Poelmans", "FCA", "paper1"),
        ("Poelmans", "Text Mining", "paper1"),
        ("Elzinga", "FCA", "paper2"),
        ("Ignatov", "Triclustering", "paper4"),
        ("Ignatov", "FCA", "paper4"),
        ("Kuznetsov", "FCA", "paper4"),
        ("Kuznetsov", "FCA", "paper1"),
    ])
    .expect("bibsonomy")
}

/// Credit-scoring examples before scaling; the last column is the target.
pub fn credit_scoring_many_valued() -> (ManyValuedContext, Vec<crate::jsm::ExampleClass>) {
    use crate::jsm::ExampleClass::*;
    let mv = ManyValuedContext::from_rows(
        (1..=10).map(|i| i.to_string()),
        ["Gender", "Age", "Education", "Salary"],
        &[
            &["M", "young", "higher", "high"],
            &["F", "middle", "special", "high"],
            &["F", "middle", "higher", "average"],
            &["M", "old", "higher", "high"],
            &["M", "young", "higher", "low"],
            &["F", "middle", "secondary", "average"],
            &["F", "old", "special", "average"],
            &["F", "young", "special", "high"],
            &["F", "old", "higher", "average"],
            &["M", "middle", "special", "average"],
        ],
    )
    .expect("credit scoring");
    let classes = vec![
        Positive, Positive, Positive, Positive, Negative, Negative, Negative, Undetermined, Undetermined, Undetermined,
    ];
    (mv, classes)
}

/// Nominally scaled credit-scoring context with short attribute names.
pub fn credit_scoring() -> crate::jsm::TrainingContext {
    let (_, classes) = credit_scoring_many_valued();
    let base = FormalContext::from_crosses(
        (1..=10).map(|i| i.to_string()),
        ["M", "F", "Y", "Mi", "O", "HE", "Sp", "Se", "HS", "A", "L"],
        &[
            "X.X..X..X..",
            ".X.X..X.X..",
            ".X.X.X...X.",
            "X...XX..X..",
            "X.X..X....X",
            ".X.X...X.X.",
            ".X..X.X..X.",
            ".XX...X.X..",
            ".X..XX...X.",
            "X..X..X..X.",
        ],
    )
    .expect("scaled credit scoring");
    crate::jsm::TrainingContext::new(base, classes, "w").expect("target outside M")
}

/// The rating table as an interval pattern structure.
pub fn movie_ratings() -> crate::patterns::PatternStructure {
    let rows: Vec<&[i64]> = RATINGS.iter().map(|r| r.as_slice()).collect();
    crate::patterns::PatternStructure::from_points(users(), MOVIES, &rows).expect("ratings")
}

/// Seven viewers with ratings (0 = unrated), gender and age band, plus three
/// genres described by their movies. Ratings above 3 become crosses.
pub fn movie_features() -> FormalContext {
    let ratings: [[i64; 6]; 7] = [
        [5, 0, 5, 5, 0, 2],
        [0, 5, 5, 3, 0, 5],
        [4, 0, 4, 5, 0, 4],
        [3, 5, 5, 0, 0, 5],
        [0, 0, 2, 0, 5, 4],
        [5, 3, 4, 5, 0, 0],
        [5, 0, 0, 4, 5, 4],
    ];
    let aux = ["01100", "10010", "01010", "10010", "10001", "01100", "10001"];
    let mut rows: Vec<String> = ratings
        .iter()
        .zip(aux)
        .map(|(r, a)| r.iter().map(|&v| if v > 3 { 'X' } else { '.' }).chain(a.chars()).collect())
        .collect();
    rows.extend(["X.XXXX.....", ".XX.XX.....", "X..X......."].map(String::from));
    let rows: Vec<&str> = rows.iter().map(String::as_str).collect();
    let objects = (1..=7).map(|i| format!("u{i}")).chain((1..=3).map(|i| format!("g{i}")));
    let attributes = (1..=6).map(|i| format!("m{i}")).chain((1..=5).map(|i| format!("f{i}")));
    FormalContext::from_crosses(objects, attributes, &rows).expect("movie features")
}

/// The nine covering factors published for [`movie_features`], as intents.
pub const MOVIE_FEATURE_FACTORS: [&str; 9] = [
    "X..X.......",
    ".XX..XX..X.",
    "....XXX...X",
    "X.XX...XX..",
    "....XX.....",
    "..X..X...X.",
    ".XX..X.....",
    "X.XX.......",
    "X.XX...X...",
];
