//! JSON instance and result files.
//!
//! Numbers are written as decimal (or `p/q`) strings so that instances are
//! exact end to end; integers may also be plain JSON numbers. Object ids may
//! be strings or integers and are kept as strings. The instance digest is the first 8 bytes of SHA-256 over
//! the canonical serialization (objects sorted by id, canonical numbers).

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};
use sha2::{Digest, Sha256};

use crate::ball::{BallInstance, PlaneKind};
use crate::cobipartite::{CliqueResult, GuessInstance, Slot};
use crate::error::{Error, Result};
use crate::geom::{balls_intersect, disks_intersect, Ball, Disk, Plane, Point2, Point3};
use crate::scalar::Scalar;

fn label<'de, D: Deserializer<'de>>(deserializer: D) -> std::result::Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Label {
        Str(String),
        Int(i64),
    }
    Ok(match Label::deserialize(deserializer)? {
        Label::Str(s) => s,
        Label::Int(i) => i.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskRecord {
    #[serde(deserialize_with = "label")]
    pub id: String,
    pub x: Scalar,
    pub y: Scalar,
    pub r: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneRecord {
    pub id: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallRecord {
    #[serde(deserialize_with = "label")]
    pub id: String,
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
    pub r: Scalar,
    pub plane: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneKindTag {
    Parallel,
    Perp,
}

impl From<PlaneKind> for PlaneKindTag {
    fn from(k: PlaneKind) -> Self {
        match k {
            PlaneKind::Parallel => PlaneKindTag::Parallel,
            PlaneKind::Perp => PlaneKindTag::Perp,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum InstanceFile {
    Disks { disks: Vec<DiskRecord> },
    Balls { plane_kind: PlaneKindTag, planes: Vec<PlaneRecord>, balls: Vec<BallRecord> },
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_disks(disks: &[Disk]) -> Self {
        InstanceFile::Disks {
            disks: disks
                .iter()
                .map(|d| DiskRecord {
                    id: d.id.clone(),
                    x: d.center.x.clone(),
                    y: d.center.y.clone(),
                    r: d.radius.clone(),
                })
                .collect(),
        }
    }

    pub fn from_balls(planes: &[Plane], balls: &[Ball]) -> Self {
        let kind =
            if planes.first().is_none_or(Plane::is_parallel) { PlaneKindTag::Parallel } else { PlaneKindTag::Perp };
        InstanceFile::Balls {
            plane_kind: kind,
            planes: planes
                .iter()
                .enumerate()
                .map(|(i, p)| match p {
                    Plane::ParallelXY { z0 } => {
                        PlaneRecord { id: i as i64, z: Some(z0.clone()), alpha: None, gamma: None, delta: None }
                    }
                    Plane::PerpToXZ { alpha, gamma, delta } => PlaneRecord {
                        id: i as i64,
                        z: None,
                        alpha: Some(alpha.clone()),
                        gamma: Some(gamma.clone()),
                        delta: Some(delta.clone()),
                    },
                })
                .collect(),
            balls: balls
                .iter()
                .map(|b| BallRecord {
                    id: b.id.clone(),
                    x: b.center.x.clone(),
                    y: b.center.y.clone(),
                    z: b.center.z.clone(),
                    r: b.radius.clone(),
                    plane: b.plane_index as i64,
                })
                .collect(),
        }
    }

    pub fn disks(&self) -> Result<Vec<Disk>> {
        let InstanceFile::Disks { disks } = self else {
            return Err(Error::Invalid("expected a disk instance".into()));
        };
        disks.iter().map(|d| Disk::new(d.id.clone(), Point2::new(d.x.clone(), d.y.clone()), d.r.clone())).collect()
    }

    /// Planes (in file order) and balls with plane ids resolved to indices.
    pub fn planes_and_balls(&self) -> Result<(PlaneKindTag, Vec<Plane>, Vec<Ball>)> {
        let InstanceFile::Balls { plane_kind, planes, balls } = self else {
            return Err(Error::Invalid("expected a ball instance".into()));
        };
        let mut resolved = Vec::with_capacity(planes.len());
        for p in planes {
            let plane = match plane_kind {
                PlaneKindTag::Parallel => {
                    let z = p.z.clone().ok_or_else(|| Error::Invalid(format!("plane {}: missing z", p.id)))?;
                    Plane::parallel(z)
                }
                PlaneKindTag::Perp => {
                    let field = |v: &Option<Scalar>, name: &str| {
                        v.clone().ok_or_else(|| Error::Invalid(format!("plane {}: missing {name}", p.id)))
                    };
                    Plane::perp(field(&p.alpha, "alpha")?, field(&p.gamma, "gamma")?, field(&p.delta, "delta")?)?
                }
            };
            resolved.push(plane);
        }
        let mut ids: Vec<i64> = planes.iter().map(|p| p.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("duplicate plane id".into()));
        }
        let balls = balls
            .iter()
            .map(|b| {
                let index = planes
                    .iter()
                    .position(|p| p.id == b.plane)
                    .ok_or_else(|| Error::Invalid(format!("ball {}: unknown plane {}", b.id, b.plane)))?;
                Ball::new(b.id.clone(), Point3::new(b.x.clone(), b.y.clone(), b.z.clone()), b.r.clone(), index)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((*plane_kind, resolved, balls))
    }

    pub fn ball_instance(&self) -> Result<BallInstance> {
        let (tag, planes, balls) = self.planes_and_balls()?;
        let inst = BallInstance::new(planes, balls)?;
        if PlaneKindTag::from(inst.kind()) != tag {
            return Err(Error::Invalid("plane_kind does not match the planes".into()));
        }
        Ok(inst)
    }

    /// Same instance with objects (and planes) sorted by id.
    pub fn canonical(&self) -> InstanceFile {
        let mut c = self.clone();
        match &mut c {
            InstanceFile::Disks { disks } => disks.sort_by(|a, b| a.id.cmp(&b.id)),
            InstanceFile::Balls { planes, balls, .. } => {
                planes.sort_by_key(|p| p.id);
                balls.sort_by(|a, b| a.id.cmp(&b.id));
            }
        }
        c
    }

    pub fn digest(&self) -> u64 {
        let text = serde_json::to_string(&self.canonical()).expect("instance serializes");
        let hash = Sha256::digest(text.as_bytes());
        u64::from_be_bytes(hash[..8].try_into().expect("8 bytes"))
    }
}

pub fn disks_digest(disks: &[Disk]) -> u64 {
    InstanceFile::from_disks(disks).digest()
}

pub fn digest_hex(digest: u64) -> String {
    format!("{digest:016x}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessSlotRecord {
    pub slot: usize,
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub size: usize,
    pub clique: Vec<String>,
    pub algorithm: String,
    pub witness_guess: Option<Vec<GuessSlotRecord>>,
    pub elapsed_ms: f64,
    pub instance_digest: String,
    /// Per-algorithm timings when more than one algorithm ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl ResultFile {
    pub fn from_clique<I: GuessInstance + ?Sized>(
        inst: &I,
        result: &CliqueResult,
        algorithm: &str,
        elapsed_ms: f64,
        digest: u64,
    ) -> Self {
        let guess = result
            .witness_guess
            .slots
            .iter()
            .enumerate()
            .filter_map(|(slot, s)| match *s {
                Slot::Absent => None,
                Slot::Pair(a, b) => Some(GuessSlotRecord { slot, a: inst.id(a).to_owned(), b: inst.id(b).to_owned() }),
            })
            .collect();
        ResultFile {
            size: result.size,
            clique: result.ids.clone(),
            algorithm: algorithm.to_owned(),
            witness_guess: Some(guess),
            elapsed_ms,
            instance_digest: digest_hex(digest),
            timings_ms: None,
        }
    }
}

fn verify<T>(objects: &[T], id: impl Fn(&T) -> &str, meet: impl Fn(&T, &T) -> bool, ids: &[String]) -> Result<()> {
    let picked = ids
        .iter()
        .map(|want| {
            objects
                .iter()
                .find(|o| id(o) == want)
                .ok_or_else(|| Error::Internal(format!("clique names unknown object {want:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    for (k, a) in picked.iter().enumerate() {
        for b in &picked[k + 1..] {
            if !meet(a, b) {
                return Err(Error::Internal(format!("{} and {} do not intersect", id(a), id(b))));
            }
        }
    }
    let mut sorted = ids.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != ids.len() {
        return Err(Error::Internal("clique lists an object twice".into()));
    }
    Ok(())
}

/// Re-checks a reported clique with the exact disk predicate.
pub fn verify_disk_clique(disks: &[Disk], ids: &[String]) -> Result<()> {
    verify(disks, |d| d.id.as_str(), disks_intersect, ids)
}

/// Re-checks a reported clique with the exact ball predicate.
pub fn verify_ball_clique(balls: &[Ball], ids: &[String]) -> Result<()> {
    verify(balls, |b| b.id.as_str(), balls_intersect, ids)
}
