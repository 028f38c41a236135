//! WebAssembly bindings for a small interactive explorer. Every method returns
//! a JSON string so the page needs no generated type glue.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qsd_core::analysis::{block_graph, has_class_coclique_partition, srg_check, two_rank};
use qsd_core::bh::verify_design;
use qsd_core::geometry::NUM_CLASSES;
use qsd_core::{Block, DesignChoice, QuotientGroup, Universe};

fn points(b: Block) -> Vec<usize> {
    b.points().collect()
}

/// Accepts 21 digits (`"0120..."`) or a comma/space separated list.
pub fn parse_choice(s: &str) -> Result<DesignChoice, String> {
    let digits: Vec<u8> = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',' && *c != '[' && *c != ']')
        .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| format!("unexpected character {c:?}")))
        .collect::<Result<_, _>>()?;
    DesignChoice::from_slice(&digits).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub struct Explorer {
    universe: Universe,
    quotient: Option<QuotientGroup>,
}

#[wasm_bindgen]
impl Explorer {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Result<Explorer, String> {
        let universe = Universe::build().map_err(|e| e.to_string())?;
        Ok(Explorer { universe, quotient: None })
    }

    /// Lines of a parallel class and its three special cliques.
    pub fn class_view(&self, class_id: usize) -> Result<String, String> {
        if class_id >= NUM_CLASSES {
            return Err(format!("class {class_id} out of range 0..21"));
        }
        let class = self.universe.geometry.class(class_id);
        let lines: Vec<Vec<usize>> = class.lines.iter().map(|l| points(l.points)).collect();
        let cliques: Vec<Value> = (0..3)
            .map(|label| {
                let c = &self.universe.cliques[3 * class_id + label];
                let blocks: Vec<Value> = c
                    .blocks
                    .iter()
                    .map(|&b| {
                        let slots = self.universe.geometry.slots_in(class_id, b);
                        let slots: Vec<u32> = (0..16).filter(|s| slots >> s & 1 == 1).collect();
                        json!({ "hex": b.to_hex(), "points": points(b), "slots": slots })
                    })
                    .collect();
                json!({ "id": c.id(), "label": label, "blocks": blocks })
            })
            .collect();
        let d = class.vector.codes();
        Ok(json!({ "class": class_id, "direction": d, "lines": lines, "cliques": cliques }).to_string())
    }

    /// Assembles the design for a choice vector and checks it.
    pub fn design_view(&self, trits: &str) -> Result<String, String> {
        let choice = parse_choice(trits)?;
        let design = self.universe.assemble_design(choice);
        let report = verify_design(&self.universe, &design);
        let failures: Vec<String> = report.failures.iter().map(ToString::to_string).collect();
        let (srg, cocliques) = match block_graph(&design) {
            Ok(bg) => (
                srg_check(&bg.graph).map(|p| p.to_string()).map_err(|e| e.to_string()),
                has_class_coclique_partition(&bg),
            ),
            Err(e) => (Err(e.to_string()), false),
        };
        let blocks: Vec<String> = design.blocks.iter().map(|b| b.to_hex()).collect();
        Ok(json!({
            "choice": choice.trits,
            "index": choice.index(),
            "passed": report.passed(),
            "failures": failures,
            "srg": srg.as_ref().ok(),
            "srg_error": srg.as_ref().err(),
            "cocliques": cocliques,
            "two_rank": two_rank(&design),
            "blocks": blocks,
        })
        .to_string())
    }

    /// Stabilizer, automorphism group order and canonical representative.
    /// Builds the 362,880-element quotient group on first use.
    pub fn symmetry(&mut self, trits: &str) -> Result<String, String> {
        let choice = parse_choice(trits)?;
        if self.quotient.is_none() {
            self.quotient = Some(QuotientGroup::build(&self.universe).map_err(|e| e.to_string())?);
        }
        let q = self.quotient.as_ref().unwrap();
        let stab = q.stabilizer_order(&choice);
        let canon = q.canonical_choice(&choice);
        Ok(json!({
            "choice": choice.trits,
            "stabilizer": stab,
            "aut_order": 64 * stab,
            "orbit_size": q.order() as u64 / stab,
            "canonical": canon.trits,
            "is_canonical": canon == choice,
        })
        .to_string())
    }

    pub fn group_ready(&self) -> bool {
        self.quotient.is_some()
    }
}
