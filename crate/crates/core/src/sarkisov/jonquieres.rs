// SPDX-License-Identifier: Apache-2.0

//! Grouping a trace into de Jonquières blocks.

use serde::{Deserialize, Serialize};

use super::state::{LinkKind, SarkisovTrace};

/// The grouping rule, reported alongside the result.
pub const CONVENTION: &str = "blocks (I|II) II* III; center = first link's center";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JonquieresReport {
    pub convention: String,
    /// Whether the whole trace splits into blocks.
    pub grouped: bool,
    /// Link indices of each block (empty when ungrouped).
    pub blocks: Vec<Vec<usize>>,
    /// `(point id, on cubic)` per block, or per type I/II link when ungrouped.
    pub centers: Vec<(usize, bool)>,
}

/// Centers of the de Jonquières maps in the trace.
pub fn jonquieres_centers(trace: &SarkisovTrace) -> JonquieresReport {
    let links = &trace.links;
    let mut blocks = Vec::new();
    let mut i = 0;
    let mut grouped = true;
    while i < links.len() {
        if !matches!(links[i].kind, LinkKind::I | LinkKind::II) {
            grouped = false;
            break;
        }
        let mut j = i + 1;
        while j < links.len() && links[j].kind == LinkKind::II {
            j += 1;
        }
        if j == links.len() || links[j].kind != LinkKind::III {
            grouped = false;
            break;
        }
        blocks.push((i..=j).collect::<Vec<_>>());
        i = j + 1;
    }
    let center_of = |k: usize| links[k].center.map(|c| (c, links[k].center_on_cubic.unwrap_or(false)));
    let centers = if grouped {
        blocks.iter().filter_map(|b| center_of(b[0])).collect()
    } else {
        blocks.clear();
        (0..links.len())
            .filter(|&k| matches!(links[k].kind, LinkKind::I | LinkKind::II))
            .filter_map(center_of)
            .collect()
    };
    JonquieresReport { convention: CONVENTION.to_string(), grouped, blocks, centers }
}
