//! Reference values and the pass/fail matrix built from stage outputs.

use std::collections::BTreeMap;
use std::fmt::Debug;

use serde::Serialize;

use crate::stages::{AnalysisStage, ClassifyStage, CliqueStage, CodeStage, GroupStage, OrbitStage};

pub const WEIGHTS: [(u32, u64); 5] = [(0, 1), (24, 1008), (32, 6174), (40, 1008), (64, 1)];
pub const TABLE1: [(u64, u64); 9] =
    [(128, 2387), (256, 210), (512, 64), (640, 12), (1024, 8), (1280, 1), (2048, 3), (8192, 1), (20480, 2)];
pub const TABLE2: [(u64, u64); 6] = [(128, 10), (256, 1), (512, 3), (896, 1), (1024, 1), (8192, 1)];
pub const TABLE3: [(u64, u64); 11] = [
    (64, 27565),
    (128, 2397),
    (256, 210),
    (512, 64),
    (640, 12),
    (896, 1),
    (1024, 8),
    (1280, 1),
    (2048, 3),
    (8192, 1),
    (20480, 2),
];
pub const FINGERPRINT_BOUND: usize = 2371;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Anchor {
    pub actual: String,
    pub expected: String,
    pub id: String,
    pub passed: bool,
    /// The published statement the value is checked against.
    pub source: String,
    pub stage: String,
}

impl Anchor {
    pub fn line(&self) -> String {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        format!("{mark}  {:<28} expected {:<24} got {:<24} [{}]", self.id, self.expected, self.actual, self.source)
    }
}

/// Collects anchors for one stage; if the stage did not run every check fails as skipped.
pub struct Checks<'a, S> {
    stage_name: &'static str,
    stage: Result<&'a S, &'a str>,
    out: Vec<Anchor>,
}

impl<'a, S> Checks<'a, S> {
    pub fn new(stage_name: &'static str, stage: Result<&'a S, &'a str>) -> Self {
        Checks { stage_name, stage, out: Vec::new() }
    }

    pub fn eq<T: PartialEq + Debug>(&mut self, id: &str, source: &str, expected: T, actual: impl FnOnce(&S) -> T) {
        let (actual, passed) = match self.stage {
            Ok(s) => {
                let a = actual(s);
                let ok = a == expected;
                (format!("{a:?}"), ok)
            }
            Err(e) => (format!("skipped: {e}"), false),
        };
        self.out.push(Anchor {
            actual,
            expected: format!("{expected:?}"),
            id: format!("{}.{id}", self.stage_name),
            passed,
            source: source.to_string(),
            stage: self.stage_name.to_string(),
        });
    }

    /// An upper bound check; `expected` is rendered as `<= bound`.
    pub fn at_most(&mut self, id: &str, source: &str, bound: usize, actual: impl FnOnce(&S) -> usize) {
        let (actual, passed) = match self.stage {
            Ok(s) => {
                let a = actual(s);
                (a.to_string(), a <= bound)
            }
            Err(e) => (format!("skipped: {e}"), false),
        };
        self.out.push(Anchor {
            actual,
            expected: format!("<= {bound}"),
            id: format!("{}.{id}", self.stage_name),
            passed,
            source: source.to_string(),
            stage: self.stage_name.to_string(),
        });
    }

    pub fn finish(self) -> Vec<Anchor> {
        self.out
    }
}

fn map<K: Ord + Copy, V: Copy>(pairs: &[(K, V)]) -> BTreeMap<K, V> {
    pairs.iter().copied().collect()
}

pub fn code_anchors(stage: Result<&CodeStage, &str>) -> Vec<Anchor> {
    let mut c = Checks::new("code", stage);
    c.eq("line_rank", "the 336 line vectors span a code of dimension 51", 51, |s| s.line_rank);
    c.eq("dual_dimension", "the dual code has dimension 13", 13, |s| s.dual_dimension);
    c.eq(
        "weight_enumerator",
        "W(x) = 1 + 1008x^24 + 6174x^32 + 1008x^40 + x^64",
        map(&WEIGHTS),
        |s| s.weight_distribution.clone(),
    );
    c.finish()
}

pub fn clique_anchors(stage: Result<&CliqueStage, &str>) -> Vec<Anchor> {
    let mut c = Checks::new("cliques", stage);
    c.eq("even_unions", "exactly 48 unions of 6 lines per parallel class", 21, |s| {
        s.unions_per_class.iter().filter(|&&n| n == 48).count()
    });
    c.eq("special_cliques", "exactly three disjoint 16-cliques per class", 21, |s| {
        s.partition_ok.iter().filter(|&&ok| ok).count()
    });
    c.eq("within_clique", "blocks of a special clique meet in 8 points", true, |s| s.within_clique_all_8);
    c.eq("slot_designs", "each special clique yields a symmetric 2-(16,6,2) design", true, |s| s.slot_designs_ok);
    c.eq("cross_class", "cliques from different classes are fully adjacent", true, |s| s.cross_class_adjacent);
    c.eq("blocks", "21 classes x 3 cliques x 16 blocks = 1008", (63, 1008), |s| (s.clique_count, s.block_count));
    c.eq("design_count", "the number of BH-designs is 3^21", 10_460_353_203u64, |s| s.total_designs);
    c.finish()
}

pub fn group_anchors(stage: Result<&GroupStage, &str>) -> Vec<Anchor> {
    let mut c = Checks::new("group", stage);
    c.eq("order", "|AGammaL(3,4)| = 23,224,320", 23_224_320u64, |s| s.group_order);
    c.eq("preserves_code", "the collineation group preserves the line code", true, |s| s.generators_preserve_code);
    c.eq("kernel", "the kernel of the action on cliques is the translation group of order 64", (64u64, true), |s| {
        (s.kernel_order, s.kernel_is_translations)
    });
    c.eq("quotient_order", "the quotient acting on choice vectors has order 362,880", 362_880, |s| s.quotient_order);
    c.eq("transitive", "the group is transitive on the 21 parallel classes", true, |s| s.transitive_on_classes);
    c.eq("involution_classes", "two conjugacy classes of involutions", 2, |s| s.involution_classes.len());
    c.eq("centralizers", "centralizer orders 1152 and 336", vec![336, 1152], |s| {
        let mut v: Vec<usize> = s.involution_classes.iter().map(|i| i.centralizer_order).collect();
        v.sort_unstable();
        v
    });
    c.eq("normalizers", "normalizer orders 73,728 and 21,504", vec![21_504u64, 73_728], |s| {
        let mut v: Vec<u64> = s.involution_classes.iter().map(|i| i.normalizer_order).collect();
        v.sort_unstable();
        v
    });
    c.finish()
}

pub fn orbit_anchors(stage: Result<&OrbitStage, &str>) -> Vec<Anchor> {
    let mut c = Checks::new("orbits", stage);
    let get = |s: &OrbitStage, name: &str| s.family(name).cloned();
    c.eq("h1.signature", "H1: 15 orbits of length 16 and 24 of length 32", Some((15, 24)), |s| {
        get(s, "H1").map(|f| f.orbit_signature)
    });
    c.eq("h1.good", "H1: all 39 orbits are good", Some(39), |s| get(s, "H1").map(|f| f.good_count));
    c.eq("h1.gamma1", "H1: maximum clique of Gamma1 has size 5", Some(5), |s| {
        get(s, "H1").map(|f| f.gamma1_max_clique)
    });
    c.eq("h1.gamma2", "H1: maximum clique of Gamma2 has size 8", Some(8), |s| {
        get(s, "H1").map(|f| f.gamma2_max_clique)
    });
    c.eq("h1.compatible", "H1: every good short orbit is compatible with every good long orbit", Some(true), |s| {
        get(s, "H1").map(|f| f.short_long_compatible)
    });
    c.eq("h2.signature", "H2: 7 orbits of length 16 and 28 of length 32", Some((7, 28)), |s| {
        get(s, "H2").map(|f| f.orbit_signature)
    });
    c.eq("h2.good_long", "H2: 21 of the 28 long orbits are good", Some(21), |s| get(s, "H2").map(|f| f.good_long));
    c.eq("h2.gamma1", "H2: Gamma1 is the complete graph K7", Some(true), |s| {
        get(s, "H2").map(|f| f.gamma1_complete && f.gamma1_order == 7)
    });
    c.eq("h2.gamma2", "H2: Gamma2 has maximum clique size 7 with 2187 such cliques", Some((7, 2187)), |s| {
        get(s, "H2").map(|f| (f.gamma2_max_clique, f.gamma2_max_cliques))
    });
    c.finish()
}

pub fn classify_anchors(stage: Result<&ClassifyStage, &str>) -> Vec<Anchor> {
    let mut c = Checks::new("classify", stage);
    let classes = |s: &ClassifyStage, n: &str| s.classification.family(n).map(|f| f.classes.len());
    c.eq("h1.classes", "2688 designs admitting H1", Some(2688), |s| classes(s, "H1"));
    c.eq("table1", "automorphism orders of designs admitting H1", map(&TABLE1), |s| s.tables.table1.clone());
    c.eq("h2.classes", "17 designs admitting H2", Some(17), |s| classes(s, "H2"));
    c.eq("table2", "automorphism orders of designs admitting H2", map(&TABLE2), |s| s.tables.table2.clone());
    c.eq("overlap", "6 designs admit both H1 and H2", 6, |s| s.classification.overlap());
    c.eq("rich_designs", "exactly 2699 designs with an automorphism group of order 128", 2699, |s| {
        s.classification.records.len()
    });
    c.eq("mass_sum", "sum of |G|/|Aut(D)| over the rich designs is 457,566,003", 457_566_003u64, |s| s.mass.sum);
    c.eq("n64", "27,565 designs with full automorphism group T", 27_565u64, |s| s.mass.n64);
    c.eq("n", "exactly 30,264 nonisomorphic BH-designs", 30_264u64, |s| s.mass.n);
    c.eq("burnside", "orbit count of the quotient on 3^21 choice vectors", 30_264u64, |s| s.burnside);
    c.eq("table3", "automorphism orders of all BH-designs", map(&TABLE3), |s| s.tables.table3.clone());
    c.eq("design_axioms", "each classified design is a quasi-symmetric 2-(64,24,46) design", 0, |s| {
        s.verification_failures.len()
    });
    c.finish()
}

pub fn analysis_anchors(stage: Result<&AnalysisStage, &str>) -> Vec<Anchor> {
    let mut c = Checks::new("analysis", stage);
    c.eq("two_rank", "2-ranks over the rich designs: 3 of rank 12, 2696 of rank 13", map(&[(12, 3), (13, 2696)]), |s| {
        s.rank_histogram().into_iter().collect()
    });
    c.eq("rank12_orders", "the rank-12 designs have automorphism orders 20480, 8192, 2048", vec![20480, 8192, 2048], |s| {
        s.rank12_orders()
    });
    c.eq("srg", "every block graph is strongly regular with parameters (336,80,28,16)", 0, |s| s.srg_failures());
    c.eq("cocliques", "the block graph splits into 21 cocliques of size 16", 0, |s| s.coclique_failures());
    c.at_most("fingerprints", "the block graphs fall into 2371 isomorphism classes", FINGERPRINT_BOUND, |s| {
        s.distinct_fingerprints()
    });
    c.finish()
}
