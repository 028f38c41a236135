//! The computational stages of the pipeline. Each stage returns plain data;
//! comparison against the reference values lives in [`crate::anchors`].

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use serde::Serialize;

use qsd_core::analysis::{block_graph, fingerprint, has_class_coclique_partition, srg_check, Fingerprint, SrgParams};
use qsd_core::bh::{
    associated_16_6_2, cross_class_adjacency_check, even_unions, verify_design, TOTAL_DESIGNS,
};
use qsd_core::classify::{
    burnside_count, classify_with_classes, emit_tables, mass_formula_check, Classification,
    ClassificationRecord, MassFormula, Tables,
};
use qsd_core::geometry::{Geometry, NUM_CLASSES};
use qsd_core::gf2::{nullspace, rank};
use qsd_core::group::{
    codeword_orbits, group_order, good_and_compatible, lifted_subgroup, orbit_signature,
    verify_group_preserves_code, InvolutionClass, QuotientGroup,
};
use qsd_core::{Block, DesignChoice, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyLevel {
    /// Verify design axioms on 32 evenly spaced classified designs.
    #[default]
    Fast,
    /// Verify every classified design.
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeStage {
    pub line_rank: usize,
    pub dual_dimension: usize,
    pub weight_distribution: BTreeMap<u32, u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn run_code(geometry: &Geometry) -> Result<CodeStage> {
    let start = Instant::now();
    let lines = geometry.line_blocks();
    let line_rank = rank(&lines);
    let dual = nullspace(&lines);
    let weight_distribution = dual.weight_histogram()?;
    Ok(CodeStage { line_rank, dual_dimension: dual.dimension(), weight_distribution, elapsed: start.elapsed() })
}

#[derive(Debug, Clone, Serialize)]
pub struct CliqueStage {
    pub unions_per_class: Vec<usize>,
    /// Per class: the three cliques are disjoint, have 16 blocks each and cover the even unions.
    pub partition_ok: Vec<bool>,
    pub within_clique_all_8: bool,
    pub slot_designs_ok: bool,
    pub cross_class_adjacent: bool,
    pub clique_count: usize,
    pub block_count: usize,
    pub total_designs: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn run_cliques(universe: &Universe) -> CliqueStage {
    let start = Instant::now();
    let geom = &universe.geometry;
    let mut unions_per_class = Vec::with_capacity(NUM_CLASSES);
    let mut partition_ok = Vec::with_capacity(NUM_CLASSES);
    for class in geom.classes() {
        let unions = even_unions(geom, class);
        unions_per_class.push(unions.len());
        let mut from_cliques: Vec<Block> = (0..3)
            .flat_map(|l| universe.cliques[3 * class.direction + l].blocks.iter().copied())
            .collect();
        let sizes_ok = (0..3).all(|l| universe.cliques[3 * class.direction + l].blocks.len() == 16);
        from_cliques.sort_unstable();
        let distinct = from_cliques.windows(2).all(|w| w[0] != w[1]);
        partition_ok.push(sizes_ok && distinct && from_cliques == unions);
    }
    let within_clique_all_8 = universe.cliques.iter().all(|c| {
        c.blocks
            .iter()
            .enumerate()
            .all(|(i, a)| c.blocks[i + 1..].iter().all(|b| a.meet(*b) == 8))
    });
    let slot_designs_ok = universe.cliques.iter().all(|c| associated_16_6_2(geom, c).is_ok());
    let block_count = universe.cliques.iter().map(|c| c.blocks.len()).sum();
    let clique_count = universe.cliques.len();
    let total_designs = 3u64.pow(clique_count as u32 / 3);
    debug_assert!(clique_count != 63 || total_designs == TOTAL_DESIGNS);
    CliqueStage {
        unions_per_class,
        partition_ok,
        within_clique_all_8,
        slot_designs_ok,
        cross_class_adjacent: cross_class_adjacency_check(universe),
        clique_count,
        block_count,
        total_designs,
        elapsed: start.elapsed(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvolutionSummary {
    pub representative: usize,
    pub class_size: usize,
    pub centralizer_order: usize,
    pub normalizer_order: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupStage {
    pub group_order: u64,
    pub generators_preserve_code: bool,
    pub kernel_order: u64,
    pub kernel_is_translations: bool,
    pub quotient_order: usize,
    pub transitive_on_classes: bool,
    pub involution_classes: Vec<InvolutionSummary>,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn run_group(universe: &Universe) -> Result<(GroupStage, QuotientGroup, Vec<InvolutionClass>)> {
    let start = Instant::now();
    let order = group_order();
    let generators_preserve_code = verify_group_preserves_code(universe);
    let q = QuotientGroup::build(universe)?;
    let kernel = q.kernel();
    let kernel_is_translations = kernel.translations_trivial
        && kernel.linear_kernel.len() == 1
        && kernel.linear_kernel[0] == (qsd_core::gf4::Mat3::IDENTITY, false);
    let images: HashSet<u8> = q.monomials().iter().map(|m| m.class_perm[0]).collect();
    let classes = q.involution_classes();
    let involution_classes = classes
        .iter()
        .map(|c| InvolutionSummary {
            representative: c.representative,
            class_size: c.members.len(),
            centralizer_order: c.centralizer.len(),
            normalizer_order: c.normalizer_order(),
        })
        .collect();
    let stage = GroupStage {
        group_order: order,
        generators_preserve_code,
        kernel_order: kernel.order(),
        kernel_is_translations,
        quotient_order: q.order(),
        transitive_on_classes: images.len() == NUM_CLASSES,
        involution_classes,
        elapsed: start.elapsed(),
    };
    Ok((stage, q, classes))
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyOrbits {
    pub name: String,
    pub orbit_signature: (usize, usize),
    pub orbit_count: usize,
    pub good_count: usize,
    pub good_long: usize,
    pub gamma1_order: usize,
    pub gamma1_max_clique: usize,
    pub gamma1_complete: bool,
    pub gamma1_max_cliques: usize,
    pub gamma2_order: usize,
    pub gamma2_max_clique: usize,
    pub gamma2_max_cliques: usize,
    pub short_long_compatible: bool,
    /// Designs from a maximum clique of Γ₁ together with one of Γ₂.
    pub clique_product: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitStage {
    pub families: Vec<FamilyOrbits>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl OrbitStage {
    pub fn family(&self, name: &str) -> Option<&FamilyOrbits> {
        self.families.iter().find(|f| f.name == name)
    }
}

pub fn run_orbits(universe: &Universe, q: &QuotientGroup, classes: &[InvolutionClass]) -> OrbitStage {
    let start = Instant::now();
    let mut families: Vec<FamilyOrbits> = classes
        .iter()
        .map(|class| {
            let lift = q.element(class.representative);
            let orbits = codeword_orbits(universe, &lifted_subgroup(&lift));
            let signature = orbit_signature(&orbits);
            let an = good_and_compatible(&orbits);
            let g1_max = an.gamma1.max_clique_size();
            let g2_max = an.gamma2.max_clique_size();
            let g1_cliques = if g1_max > 0 { an.gamma1.cliques_of_size(g1_max).len() } else { 0 };
            let g2_cliques = if g2_max > 0 { an.gamma2.cliques_of_size(g2_max).len() } else { 0 };
            FamilyOrbits {
                name: qsd_core::classify::family_name(signature),
                orbit_signature: signature,
                orbit_count: orbits.len(),
                good_count: an.good.iter().filter(|&&g| g).count(),
                good_long: an.gamma2_vertices.len(),
                gamma1_order: an.gamma1.order(),
                gamma1_max_clique: g1_max,
                gamma1_complete: an.gamma1.edge_count() == g1_max * g1_max.saturating_sub(1) / 2
                    && g1_max == an.gamma1.order(),
                gamma1_max_cliques: g1_cliques,
                gamma2_order: an.gamma2.order(),
                gamma2_max_clique: g2_max,
                gamma2_max_cliques: g2_cliques,
                short_long_compatible: an.short_long_compatible,
                clique_product: g1_cliques as u64 * g2_cliques as u64,
            }
        })
        .collect();
    families.sort_by(|a, b| a.name.cmp(&b.name));
    OrbitStage { families, elapsed: start.elapsed() }
}

#[derive(Debug, Clone)]
pub struct ClassifyStage {
    pub classification: Classification,
    pub mass: MassFormula,
    pub burnside: u64,
    pub tables: Tables,
    pub verified_designs: usize,
    pub verification_failures: Vec<String>,
    pub elapsed: Duration,
}

/// Indices of the records whose designs are fully re-verified.
pub fn verification_sample(len: usize, level: VerifyLevel) -> Vec<usize> {
    match level {
        VerifyLevel::Full => (0..len).collect(),
        VerifyLevel::Fast => {
            let n = len.min(32);
            let set: BTreeSet<usize> = (0..n).map(|i| i * len / n.max(1)).collect();
            set.into_iter().collect()
        }
    }
}

pub fn run_classify(
    universe: &Universe,
    q: &QuotientGroup,
    classes: &[InvolutionClass],
    level: VerifyLevel,
) -> Result<ClassifyStage> {
    let start = Instant::now();
    let classification = classify_with_classes(universe, q, classes)?;
    let mass = mass_formula_check(&classification.records)?;
    let burnside = burnside_count(q)?;
    let tables = emit_tables(&classification, &mass);
    let sample = verification_sample(classification.records.len(), level);
    let failures: Vec<String> = sample
        .iter()
        .filter_map(|&i| {
            let r = &classification.records[i];
            let report = verify_design(universe, &universe.assemble_design(r.canonical_choice));
            (!report.passed()).then(|| format!("{}: {}", r.canonical_choice, report.failures[0]))
        })
        .collect();
    Ok(ClassifyStage {
        classification,
        mass,
        burnside,
        tables,
        verified_designs: sample.len(),
        verification_failures: failures,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone)]
pub struct RecordAnalysis {
    pub choice: DesignChoice,
    pub aut_order: u64,
    pub two_rank: usize,
    pub srg: Option<SrgParams>,
    pub coclique_partition: bool,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone)]
pub struct AnalysisStage {
    pub records: Vec<RecordAnalysis>,
    pub elapsed: Duration,
}

impl AnalysisStage {
    pub fn rank_histogram(&self) -> BTreeMap<usize, u64> {
        let mut h = BTreeMap::new();
        for r in &self.records {
            *h.entry(r.two_rank).or_insert(0) += 1;
        }
        h
    }

    /// Automorphism orders of the records of 2-rank 12, sorted descending.
    pub fn rank12_orders(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.records.iter().filter(|r| r.two_rank == 12).map(|r| r.aut_order).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn srg_failures(&self) -> usize {
        self.records.iter().filter(|r| r.srg != Some(qsd_core::analysis::SRG_PARAMS)).count()
    }

    pub fn coclique_failures(&self) -> usize {
        self.records.iter().filter(|r| !r.coclique_partition).count()
    }

    pub fn distinct_fingerprints(&self) -> usize {
        self.records.iter().map(|r| r.fingerprint).collect::<HashSet<_>>().len()
    }

    pub fn fingerprint_table(&self) -> BTreeMap<String, String> {
        self.records.iter().map(|r| (r.choice.to_string(), r.fingerprint.to_hex())).collect()
    }
}

pub fn run_analysis(universe: &Universe, records: &[ClassificationRecord]) -> Result<AnalysisStage> {
    let start = Instant::now();
    let out: Vec<Result<RecordAnalysis>> = {
        use rayon::prelude::*;
        records
            .par_iter()
            .map(|r| {
                let design = universe.assemble_design(r.canonical_choice);
                let bg = block_graph(&design)?;
                let srg = srg_check(&bg.graph).ok();
                Ok(RecordAnalysis {
                    choice: r.canonical_choice,
                    aut_order: r.aut_order,
                    two_rank: qsd_core::analysis::two_rank(&design),
                    srg,
                    coclique_partition: has_class_coclique_partition(&bg),
                    fingerprint: fingerprint(&bg.graph),
                })
            })
            .collect()
    };
    let records = out.into_iter().collect::<Result<Vec<_>>>()?;
    if records.is_empty() {
        bail!("no records to analyze");
    }
    Ok(AnalysisStage { records, elapsed: start.elapsed() })
}
