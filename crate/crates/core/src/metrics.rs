//! Evaluation primitives: edit-distance error rates (WER/CER), lemmatizer
//! accuracy, and multiclass classification metrics with macro/micro
//! aggregation.

use serde::{Serialize, Serializer};

use crate::data::TagSet;
use crate::error::{Error, Result};

/// Counts from an optimal edit alignment of a hypothesis against a reference.
///
/// `reference_len` is the unit count of the reference side (words for WER,
/// characters for CER).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EditSummary {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub reference_len: usize,
}

impl EditSummary {
    pub fn total_edits(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }
}

/// Minimal unit-cost edit distance between two sequences.
///
/// Among minimal alignments the reported counts come from the backtrace that
/// prefers substitution over insertion over deletion at every cell.
pub fn edit_distance<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> EditSummary {
    #[derive(Clone, Copy)]
    struct Cell {
        cost: usize,
        s: usize,
        d: usize,
        i: usize,
    }
    let m = reference.len();
    let n = hypothesis.len();
    let mut grid = vec![
        Cell {
            cost: 0,
            s: 0,
            d: 0,
            i: 0
        };
        (m + 1) * (n + 1)
    ];
    let at = |i: usize, j: usize| i * (n + 1) + j;
    for j in 1..=n {
        grid[at(0, j)] = Cell {
            cost: j,
            s: 0,
            d: 0,
            i: j,
        };
    }
    for i in 1..=m {
        grid[at(i, 0)] = Cell {
            cost: i,
            s: 0,
            d: i,
            i: 0,
        };
    }
    for i in 1..=m {
        for j in 1..=n {
            let hit = reference[i - 1] == hypothesis[j - 1];
            let diag = grid[at(i - 1, j - 1)];
            let diag_cost = diag.cost + usize::from(!hit);
            let ins = grid[at(i, j - 1)];
            let del = grid[at(i - 1, j)];
            // Tie preference: substitution/match, then insertion, then deletion.
            let mut cell = Cell {
                cost: diag_cost,
                s: diag.s + usize::from(!hit),
                d: diag.d,
                i: diag.i,
            };
            if ins.cost + 1 < cell.cost {
                cell = Cell {
                    cost: ins.cost + 1,
                    s: ins.s,
                    d: ins.d,
                    i: ins.i + 1,
                };
            }
            if del.cost + 1 < cell.cost {
                cell = Cell {
                    cost: del.cost + 1,
                    s: del.s,
                    d: del.d + 1,
                    i: del.i,
                };
            }
            grid[at(i, j)] = cell;
        }
    }
    let last = grid[at(m, n)];
    EditSummary {
        substitutions: last.s,
        deletions: last.d,
        insertions: last.i,
        reference_len: m,
    }
}

/// Error rate as a percentage: `100 * (S + D + I) / N`.
pub fn error_rate(summary: &EditSummary) -> Result<f64> {
    if summary.reference_len == 0 {
        if summary.total_edits() == 0 {
            return Ok(0.0);
        }
        return Err(Error::InvalidInput(
            "error rate undefined: empty reference with non-zero edits".into(),
        ));
    }
    Ok(100.0 * summary.total_edits() as f64 / summary.reference_len as f64)
}

/// Evaluation granularity for pooled error rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditLevel {
    Word,
    Char,
}

/// Pooled error rate over aligned reference/hypothesis string pairs:
/// edit counts and reference lengths are summed over all pairs before
/// applying the rate formula (not a mean of per-pair rates).
pub fn pooled_error_rate(references: &[String], hypotheses: &[String], level: EditLevel) -> Result<f64> {
    if references.len() != hypotheses.len() {
        return Err(Error::InvalidInput(format!(
            "reference/hypothesis count mismatch: {} vs {}",
            references.len(),
            hypotheses.len()
        )));
    }
    let mut edits = 0usize;
    let mut total = 0usize;
    for (r, h) in references.iter().zip(hypotheses) {
        let summary = match level {
            EditLevel::Word => {
                let rw: Vec<&str> = r.split_whitespace().collect();
                let hw: Vec<&str> = h.split_whitespace().collect();
                edit_distance(&rw, &hw)
            }
            EditLevel::Char => {
                let rc: Vec<char> = r.chars().collect();
                let hc: Vec<char> = h.chars().collect();
                edit_distance(&rc, &hc)
            }
        };
        edits += summary.total_edits();
        total += summary.reference_len;
    }
    error_rate(&EditSummary {
        substitutions: edits,
        deletions: 0,
        insertions: 0,
        reference_len: total,
    })
}

/// Pooled (WER, CER) percentages over aligned string pairs.
pub fn corpus_error_rates(references: &[String], hypotheses: &[String]) -> Result<(f64, f64)> {
    Ok((
        pooled_error_rate(references, hypotheses, EditLevel::Word)?,
        pooled_error_rate(references, hypotheses, EditLevel::Char)?,
    ))
}

/// Exact-match proportion between aligned gold and predicted lemma lists.
pub fn lemma_accuracy(gold: &[String], predicted: &[String]) -> Result<f64> {
    if gold.len() != predicted.len() {
        return Err(Error::InvalidInput(format!(
            "gold/predicted length mismatch: {} vs {}",
            gold.len(),
            predicted.len()
        )));
    }
    if gold.is_empty() {
        return Err(Error::InvalidInput("empty evaluation lists".into()));
    }
    let hits = gold.iter().zip(predicted).filter(|(g, p)| g == p).count();
    Ok(hits as f64 / gold.len() as f64)
}

/// Multiclass confusion matrix over a fixed class inventory.
///
/// `counts[actual][predicted]`; row sums are per-class gold support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: TagSet,
    counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn new(classes: TagSet) -> Self {
        let n = classes.len();
        ConfusionMatrix {
            classes,
            counts: vec![vec![0; n]; n],
        }
    }

    pub fn from_pairs<S: AsRef<str>>(classes: TagSet, gold: &[S], predicted: &[S]) -> Result<Self> {
        if gold.len() != predicted.len() {
            return Err(Error::InvalidInput(format!(
                "gold/predicted length mismatch: {} vs {}",
                gold.len(),
                predicted.len()
            )));
        }
        let mut cm = ConfusionMatrix::new(classes);
        for (g, p) in gold.iter().zip(predicted) {
            cm.record(g.as_ref(), p.as_ref())?;
        }
        Ok(cm)
    }

    pub fn record(&mut self, actual: &str, predicted: &str) -> Result<()> {
        let a = self
            .classes
            .index_of(actual)
            .ok_or_else(|| Error::InvalidInput(format!("label `{actual}` outside class set")))?;
        let p = self
            .classes
            .index_of(predicted)
            .ok_or_else(|| Error::InvalidInput(format!("label `{predicted}` outside class set")))?;
        self.counts[a][p] += 1;
        Ok(())
    }

    pub fn classes(&self) -> &TagSet {
        &self.classes
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn support(&self, class_idx: usize) -> usize {
        self.counts[class_idx].iter().sum()
    }

    fn trace(&self) -> usize {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }
}

/// A metric value that may be undefined (zero denominator); undefined values
/// serialize as JSON `null` and are skipped by macro averaging.
pub type MetricValue = Option<f64>;

/// The five per-class scores reported for every POS class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassScores {
    pub acc: MetricValue,
    pub auc: MetricValue,
    pub f1: MetricValue,
    pub precision: MetricValue,
    pub recall: MetricValue,
}

/// Per-class scores plus macro and micro aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics {
    /// One entry per class, in class order.
    pub per_class: Vec<(String, ClassScores)>,
    /// Arithmetic mean over classes with defined values; undefined if no
    /// class defines the metric.
    pub macro_avg: ClassScores,
    /// Computed from pooled one-vs-rest counts.
    pub micro: ClassScores,
}

impl ClassMetrics {
    pub fn class(&self, name: &str) -> Option<&ClassScores> {
        self.per_class
            .iter()
            .find(|(c, _)| c == name)
            .map(|(_, s)| s)
    }
}

/// Serializes `(class, scores)` pairs as a JSON object in class order.
struct PerClassMap<'a>(&'a [(String, ClassScores)]);

impl Serialize for PerClassMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (name, scores) in self.0 {
            map.serialize_entry(name, scores)?;
        }
        map.end()
    }
}

impl Serialize for ClassMetrics {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ClassMetrics", 3)?;
        st.serialize_field("perClass", &PerClassMap(&self.per_class))?;
        st.serialize_field("macro", &self.macro_avg)?;
        st.serialize_field("micro", &self.micro)?;
        st.end()
    }
}

struct OneVsRest {
    tp: usize,
    fp: usize,
    fn_: usize,
    tn: usize,
}

fn ratio(num: usize, den: usize) -> MetricValue {
    (den > 0).then(|| num as f64 / den as f64)
}

fn scores_from(counts: &OneVsRest, total: usize) -> ClassScores {
    let precision = ratio(counts.tp, counts.tp + counts.fp);
    let recall = ratio(counts.tp, counts.tp + counts.fn_);
    let tnr = ratio(counts.tn, counts.tn + counts.fp);
    let f1 = match (precision, recall) {
        (None, None) => None,
        (p, r) => {
            let p = p.unwrap_or(0.0);
            let r = r.unwrap_or(0.0);
            if p == 0.0 || r == 0.0 {
                Some(0.0)
            } else {
                Some(2.0 * p * r / (p + r))
            }
        }
    };
    let auc = match (recall, tnr) {
        (Some(r), Some(t)) => Some((r + t) / 2.0),
        _ => None,
    };
    ClassScores {
        acc: ratio(counts.tp + counts.tn, total),
        auc,
        f1,
        precision,
        recall,
    }
}

/// Per-class and aggregate classification metrics from a confusion matrix.
///
/// Each class is reduced one-vs-rest; `auc` is the balanced accuracy
/// `(TPR + TNR) / 2` of that reduction.
pub fn class_metrics(cm: &ConfusionMatrix) -> Result<ClassMetrics> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::InvalidInput("empty confusion matrix".into()));
    }
    let n = cm.classes.len();
    let trace = cm.trace();

    let mut per_class = Vec::with_capacity(n);
    let mut pooled = OneVsRest {
        tp: 0,
        fp: 0,
        fn_: 0,
        tn: 0,
    };
    for c in 0..n {
        let tp = cm.counts[c][c];
        let row: usize = cm.counts[c].iter().sum();
        let col: usize = (0..n).map(|a| cm.counts[a][c]).sum();
        let counts = OneVsRest {
            tp,
            fp: col - tp,
            fn_: row - tp,
            tn: total - row - (col - tp),
        };
        pooled.tp += counts.tp;
        pooled.fp += counts.fp;
        pooled.fn_ += counts.fn_;
        pooled.tn += counts.tn;
        per_class.push((
            cm.classes.as_slice()[c].clone(),
            scores_from(&counts, total),
        ));
    }

    let mean_defined = |pick: fn(&ClassScores) -> MetricValue| -> MetricValue {
        let defined: Vec<f64> = per_class.iter().filter_map(|(_, s)| pick(s)).collect();
        (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
    };
    let macro_avg = ClassScores {
        acc: mean_defined(|s| s.acc),
        auc: mean_defined(|s| s.auc),
        f1: mean_defined(|s| s.f1),
        precision: mean_defined(|s| s.precision),
        recall: mean_defined(|s| s.recall),
    };
    let micro = scores_from(&pooled, pooled.tp + pooled.fp + pooled.fn_ + pooled.tn);

    debug_assert_eq!(pooled.tp, trace);
    Ok(ClassMetrics {
        per_class,
        macro_avg,
        micro,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive recursive edit distance, independent of the DP path.
    fn brute_force_cost<T: PartialEq>(a: &[T], b: &[T]) -> usize {
        if a.is_empty() {
            return b.len();
        }
        if b.is_empty() {
            return a.len();
        }
        let sub = brute_force_cost(&a[1..], &b[1..]) + usize::from(a[0] != b[0]);
        let del = brute_force_cost(&a[1..], b) + 1;
        let ins = brute_force_cost(a, &b[1..]) + 1;
        sub.min(del).min(ins)
    }

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn identical_sequences_have_zero_edits() {
        let s = chars("abc");
        let summary = edit_distance(&s, &s);
        assert_eq!(summary.total_edits(), 0);
        assert_eq!(summary.reference_len, 3);
    }

    #[test]
    fn kitten_sitting_is_three() {
        let summary = edit_distance(&chars("kitten"), &chars("sitting"));
        assert_eq!(summary.total_edits(), 3);
        assert_eq!(summary.total_edits(), brute_force_cost(&chars("kitten"), &chars("sitting")));
    }

    #[test]
    fn suffix_deletion_counts() {
        let r: Vec<&str> = "ān uzīd".split_whitespace().collect();
        let h: Vec<&str> = "ān".split_whitespace().collect();
        let summary = edit_distance(&r, &h);
        assert_eq!(summary.deletions, 1);
        assert_eq!(summary.substitutions, 0);
        assert_eq!(summary.insertions, 0);
        assert_eq!(summary.reference_len, 2);
    }

    #[test]
    fn backtrace_prefers_substitution() {
        // "ab" -> "x": tie between (2 subs... no) minimal alignments is
        // sub(a->x)+del(b); insertion-first would cost 3.
        let summary = edit_distance(&chars("ab"), &chars("x"));
        assert_eq!(summary.total_edits(), 2);
        assert_eq!(summary.substitutions, 1);
        assert_eq!(summary.deletions, 1);
        assert_eq!(summary.insertions, 0);
    }

    proptest! {
        #[test]
        fn dp_matches_brute_force(a in "[ab]{0,8}", b in "[abc]{0,8}") {
            let (ra, rb) = (chars(&a), chars(&b));
            let summary = edit_distance(&ra, &rb);
            prop_assert_eq!(summary.total_edits(), brute_force_cost(&ra, &rb));
            // Counts are internally consistent with the alignment geometry.
            prop_assert_eq!(ra.len() + summary.insertions, rb.len() + summary.deletions);
        }

        #[test]
        fn swap_exchanges_deletions_and_insertions(a in "[ab]{0,8}", b in "[ab]{0,8}") {
            let (ra, rb) = (chars(&a), chars(&b));
            let fwd = edit_distance(&ra, &rb);
            let rev = edit_distance(&rb, &ra);
            prop_assert_eq!(fwd.total_edits(), rev.total_edits());
            prop_assert_eq!(fwd.deletions, rev.insertions);
            prop_assert_eq!(fwd.insertions, rev.deletions);
            prop_assert_eq!(fwd.substitutions, rev.substitutions);
        }

        #[test]
        fn triangle_inequality(a in "[ab]{0,6}", b in "[ab]{0,6}", c in "[ab]{0,6}") {
            let (ra, rb, rc) = (chars(&a), chars(&b), chars(&c));
            let ab = edit_distance(&ra, &rb).total_edits();
            let bc = edit_distance(&rb, &rc).total_edits();
            let ac = edit_distance(&ra, &rc).total_edits();
            prop_assert!(ac <= ab + bc);
        }

        /// Appending words absent from the reference to a hypothesis at least
        /// as long as the reference adds exactly that many insertions.
        #[test]
        fn novel_suffix_becomes_insertions(a in "[ab]{0,5}", pad in "[ab]{0,3}", k in 1usize..4) {
            let r = chars(&a);
            let mut h = chars(&a);
            h.extend(chars(&pad));
            let before = edit_distance(&r, &h);
            let mut extended = h.clone();
            extended.extend(std::iter::repeat('z').take(k));
            let after = edit_distance(&r, &extended);
            prop_assert_eq!(after.insertions, before.insertions + k);
            prop_assert_eq!(after.total_edits(), before.total_edits() + k);
        }
    }

    #[test]
    fn error_rate_formula() {
        let zero = EditSummary {
            substitutions: 0,
            deletions: 0,
            insertions: 0,
            reference_len: 5,
        };
        assert_eq!(error_rate(&zero).unwrap(), 0.0);

        let summary = EditSummary {
            substitutions: 1,
            deletions: 1,
            insertions: 1,
            reference_len: 10,
        };
        assert_eq!(error_rate(&summary).unwrap(), 30.0);

        let empty_ok = EditSummary {
            substitutions: 0,
            deletions: 0,
            insertions: 0,
            reference_len: 0,
        };
        assert_eq!(error_rate(&empty_ok).unwrap(), 0.0);

        let empty_bad = EditSummary {
            substitutions: 1,
            deletions: 0,
            insertions: 0,
            reference_len: 0,
        };
        assert!(error_rate(&empty_bad).is_err());
    }

    #[test]
    fn pooled_rates() {
        let refs = vec!["a b".to_string(), "c d".to_string()];
        let same = refs.clone();
        assert_eq!(corpus_error_rates(&refs, &same).unwrap(), (0.0, 0.0));

        // Summaries (1,0,0,N=2) and (0,0,0,N=2) pool to 1/4 = 25%.
        let hyps = vec!["a x".to_string(), "c d".to_string()];
        let wer = pooled_error_rate(&refs, &hyps, EditLevel::Word).unwrap();
        assert_eq!(wer, 25.0);

        // A single pair reduces to the plain error rate.
        let one_ref = vec!["a b c d".to_string()];
        let one_hyp = vec!["a b x d".to_string()];
        let single = pooled_error_rate(&one_ref, &one_hyp, EditLevel::Word).unwrap();
        let rw: Vec<&str> = one_ref[0].split_whitespace().collect();
        let hw: Vec<&str> = one_hyp[0].split_whitespace().collect();
        assert_eq!(single, error_rate(&edit_distance(&rw, &hw)).unwrap());

        assert!(pooled_error_rate(&refs, &one_hyp, EditLevel::Word).is_err());
    }

    #[test]
    fn lemma_accuracy_basics() {
        let gold = vec!["a".to_string(), "b".to_string()];
        assert_eq!(lemma_accuracy(&gold, &gold).unwrap(), 1.0);
        let pred = vec!["a".to_string(), "x".to_string()];
        assert_eq!(lemma_accuracy(&gold, &pred).unwrap(), 0.5);
        assert!(lemma_accuracy(&gold, &[]).is_err());
    }

    fn two_class(counts: [[usize; 2]; 2]) -> ConfusionMatrix {
        let classes = TagSet::new(["A", "B"]).unwrap();
        let mut cm = ConfusionMatrix::new(classes);
        cm.counts = vec![counts[0].to_vec(), counts[1].to_vec()];
        cm
    }

    #[test]
    fn perfect_diagonal_scores_one() {
        let cm = two_class([[3, 0], [0, 2]]);
        let metrics = class_metrics(&cm).unwrap();
        for (_, scores) in &metrics.per_class {
            assert_eq!(scores.acc, Some(1.0));
            assert_eq!(scores.auc, Some(1.0));
            assert_eq!(scores.f1, Some(1.0));
            assert_eq!(scores.precision, Some(1.0));
            assert_eq!(scores.recall, Some(1.0));
        }
        assert_eq!(metrics.micro.precision, Some(1.0));
    }

    #[test]
    fn rare_class_matches_published_profile() {
        // Class A: TP=2, FN=7, FP=0, TN=11.
        let cm = two_class([[2, 7], [0, 11]]);
        let metrics = class_metrics(&cm).unwrap();
        let a = metrics.class("A").unwrap();
        assert!((a.recall.unwrap() - 0.22222).abs() < 5e-6);
        assert_eq!(a.precision, Some(1.0));
        assert!((a.auc.unwrap() - 0.61111).abs() < 5e-6);
        assert!((a.f1.unwrap() - 0.36364).abs() < 5e-6);
    }

    #[test]
    fn undefined_precision_is_skipped_by_macro() {
        // Class A never predicted and never gold -> per spec table "None".
        let classes = TagSet::new(["A", "B", "C"]).unwrap();
        let mut cm = ConfusionMatrix::new(classes);
        cm.record("B", "B").unwrap();
        cm.record("B", "C").unwrap();
        cm.record("C", "C").unwrap();
        let metrics = class_metrics(&cm).unwrap();
        let a = metrics.class("A").unwrap();
        assert_eq!(a.precision, None);
        assert_eq!(a.recall, None);
        assert_eq!(a.f1, None);
        // Macro precision averages only B and C.
        let b = metrics.class("B").unwrap().precision.unwrap();
        let c = metrics.class("C").unwrap().precision.unwrap();
        let expected = (b + c) / 2.0;
        assert!((metrics.macro_avg.precision.unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_recall_with_undefined_precision_gives_zero_f1() {
        // Class A has gold support but is never predicted.
        let classes = TagSet::new(["A", "B"]).unwrap();
        let mut cm = ConfusionMatrix::new(classes);
        cm.record("A", "B").unwrap();
        cm.record("B", "B").unwrap();
        let metrics = class_metrics(&cm).unwrap();
        let a = metrics.class("A").unwrap();
        assert_eq!(a.precision, None);
        assert_eq!(a.recall, Some(0.0));
        assert_eq!(a.f1, Some(0.0));
    }

    #[test]
    fn micro_precision_is_trace_over_total() {
        let cm = two_class([[5, 2], [3, 7]]);
        let metrics = class_metrics(&cm).unwrap();
        let expected = cm.trace() as f64 / cm.total() as f64;
        assert!((metrics.micro.precision.unwrap() - expected).abs() < 1e-12);
        assert_eq!(metrics.micro.precision, metrics.micro.recall);
    }

    #[test]
    fn empty_matrix_is_an_error() {
        let cm = ConfusionMatrix::new(TagSet::new(["A"]).unwrap());
        assert!(class_metrics(&cm).is_err());
    }
}
