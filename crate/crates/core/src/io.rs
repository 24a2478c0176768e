//! JSON documents for ball structures, metric spaces and subgroup chains.
//!
//! Ball structures:
//! `{ "support": [names], "radii": [names], "balls": { point: { radius: [names] } } }`.
//! Metric spaces: `{ "points": [names], "dist": [["p/q", ...], ...] }`.
//! Subgroup chains: `{ "order": n, "table": [[...]], "chain": [[...], ...] }`.
//! Pointed families serialize directly through serde
//! (`{ "factors": [ { "size": k, "basepoint": i } ] }`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ballcore::BallStructure;
use crate::error::{BalleanError, Result};
use crate::groupball::{FiniteGroup, SubgroupChain};
use crate::metrics::{format_rational, parse_rational, FiniteMetricSpace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallStructureDoc {
    pub support: Vec<String>,
    pub radii: Vec<String>,
    pub balls: BTreeMap<String, BTreeMap<String, Vec<String>>>,
}

impl From<&BallStructure> for BallStructureDoc {
    fn from(bs: &BallStructure) -> Self {
        let names = bs.support();
        let balls = names
            .iter()
            .enumerate()
            .map(|(x, point)| {
                let row = bs
                    .radii()
                    .iter()
                    .enumerate()
                    .map(|(a, radius)| (radius.clone(), bs.ball(x, a).ones().map(|y| names[y].clone()).collect()))
                    .collect();
                (point.clone(), row)
            })
            .collect();
        Self {
            support: names.to_vec(),
            radii: bs.radii().to_vec(),
            balls,
        }
    }
}

impl TryFrom<BallStructureDoc> for BallStructure {
    type Error = BalleanError;

    fn try_from(doc: BallStructureDoc) -> Result<Self> {
        let index: BTreeMap<&str, usize> = doc.support.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let lookup = |name: &str| {
            index.get(name).copied().ok_or_else(|| BalleanError::UnknownName {
                what: "point",
                name: name.to_owned(),
            })
        };
        for (point, row) in &doc.balls {
            lookup(point)?;
            if let Some(radius) = row.keys().find(|r| !doc.radii.contains(r)) {
                return Err(BalleanError::UnknownName {
                    what: "radius",
                    name: radius.clone(),
                });
            }
        }
        let mut table = Vec::with_capacity(doc.support.len());
        for point in &doc.support {
            let row = doc.balls.get(point);
            let mut entries = Vec::with_capacity(doc.radii.len());
            for radius in &doc.radii {
                let members = row.and_then(|r| r.get(radius)).ok_or_else(|| BalleanError::MissingBall {
                    point: point.clone(),
                    radius: radius.clone(),
                })?;
                entries.push(members.iter().map(|m| lookup(m)).collect::<Result<Vec<_>>>()?);
            }
            table.push(entries);
        }
        BallStructure::new(doc.support.clone(), doc.radii.clone(), &table)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpaceDoc {
    pub points: Vec<String>,
    pub dist: Vec<Vec<String>>,
}

impl From<&FiniteMetricSpace> for MetricSpaceDoc {
    fn from(ms: &FiniteMetricSpace) -> Self {
        Self {
            points: ms.points().to_vec(),
            dist: ms.rows().iter().map(|row| row.iter().map(format_rational).collect()).collect(),
        }
    }
}

impl TryFrom<MetricSpaceDoc> for FiniteMetricSpace {
    type Error = BalleanError;

    fn try_from(doc: MetricSpaceDoc) -> Result<Self> {
        let dist = doc
            .dist
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiniteMetricSpace::new(doc.points, dist)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupChainDoc {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub chain: Vec<Vec<usize>>,
}

impl From<&SubgroupChain> for GroupChainDoc {
    fn from(sc: &SubgroupChain) -> Self {
        Self {
            order: sc.group().order(),
            table: sc.group().table().to_vec(),
            chain: sc.levels().to_vec(),
        }
    }
}

impl TryFrom<GroupChainDoc> for SubgroupChain {
    type Error = BalleanError;

    fn try_from(doc: GroupChainDoc) -> Result<Self> {
        if doc.table.len() != doc.order {
            return Err(BalleanError::InvalidGroup(format!(
                "order {} but table has {} rows",
                doc.order,
                doc.table.len()
            )));
        }
        SubgroupChain::new(FiniteGroup::from_table(doc.table)?, doc.chain)
    }
}

pub fn to_value<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

/// Parses a ball structure, or a metric space which is replaced by its metric ballean.
pub fn parse_structure(text: &str) -> Result<BallStructure> {
    let value: Value = serde_json::from_str(text)?;
    let is_metric = value.get("points").is_some() && value.get("dist").is_some();
    if is_metric {
        let ms: FiniteMetricSpace = serde_json::from_value::<MetricSpaceDoc>(value)?.try_into()?;
        Ok(ms.metric_ballean())
    } else {
        serde_json::from_value::<BallStructureDoc>(value)?.try_into()
    }
}

pub fn parse_metric_space(text: &str) -> Result<FiniteMetricSpace> {
    serde_json::from_str::<MetricSpaceDoc>(text)?.try_into()
}

pub fn parse_chain(text: &str) -> Result<SubgroupChain> {
    serde_json::from_str::<GroupChainDoc>(text)?.try_into()
}

pub fn structure_to_value(bs: &BallStructure) -> Value {
    to_value(&BallStructureDoc::from(bs))
}

pub fn metric_space_to_value(ms: &FiniteMetricSpace) -> Value {
    to_value(&MetricSpaceDoc::from(ms))
}

pub fn chain_to_value(sc: &SubgroupChain) -> Value {
    to_value(&GroupChainDoc::from(sc))
}
