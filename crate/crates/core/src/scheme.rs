//! Placement and delivery plans derived from an MAPDA.
//!
//! User `k` caches packet `f` of every file when entry `(f, k)` is a star.
//! Each integer `s` defines delivery block `s`: the users `R_s` whose column
//! holds `s`, each wanting packet `f` of its demanded file, where `f` is the
//! row of that occurrence. For the `i`-th served user, the interference set
//! `P_i^(s)` lists the served users whose entry in row `f_i` is an integer,
//! i.e. the served users that do not cache the packet.
//!
//! Users, rows and files are zero-based in memory and one-based in reports.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::array::CodedArray;
use crate::validate::occurrences;

/// Packet `f` of file `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PacketId {
    pub file: usize,
    pub row: usize,
}

impl fmt::Display for PacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W({},{})", self.file + 1, self.row + 1)
    }
}

/// Cache contents of one user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheState {
    pub user: usize,
    pub packets: BTreeSet<PacketId>,
}

impl CacheState {
    pub fn contains(&self, packet: &PacketId) -> bool {
        self.packets.contains(packet)
    }
}

/// Fills every user's cache from the star positions of `a`.
pub fn place(a: &CodedArray, files: usize) -> Vec<CacheState> {
    (0..a.cols())
        .map(|user| {
            let packets = (0..a.rows())
                .filter(|&row| a.get(row, user).is_star())
                .flat_map(|row| (0..files).map(move |file| PacketId { file, row }))
                .collect();
            CacheState { user, packets }
        })
        .collect()
}

/// One delivery block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPlan {
    /// The integer defining the block.
    pub label: u32,
    /// `R_s`, ascending.
    pub users: Vec<usize>,
    /// `f_{R_{s,i}}` for each served user.
    pub rows: Vec<usize>,
    /// `W^(s)`: the packet each served user wants.
    pub packets: Vec<PacketId>,
    /// `P_i^(s)` for each served user, as ascending user ids.
    pub interference: Vec<Vec<usize>>,
}

impl BlockPlan {
    pub fn served(&self) -> usize {
        self.users.len()
    }
}

/// The whole delivery for one demand vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeliveryPlan {
    pub demands: Vec<usize>,
    pub files: usize,
    /// Packets per file, `F`.
    pub packets_per_file: usize,
    pub blocks: Vec<BlockPlan>,
}

impl DeliveryPlan {
    /// `sum_s r_s`.
    pub fn total_served(&self) -> usize {
        self.blocks.iter().map(BlockPlan::served).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("demand vector has {found} entries but the array has {users} users")]
    DemandLength { users: usize, found: usize },
    #[error("user {user} demands file {file}, outside 1..={files}")]
    DemandOutOfRange {
        user: usize,
        file: usize,
        files: usize,
    },
    #[error("block {label} serves user {user} twice")]
    RepeatedUser { label: u32, user: usize },
    #[error("block {label}: user {user} is missing from its own interference set")]
    SelfMissing { label: u32, user: usize },
    #[error(
        "block {label}: interference set of user {user} has {size} members, more than L={limit}"
    )]
    Oversized {
        label: u32,
        user: usize,
        size: usize,
        limit: usize,
    },
    #[error("block {label}: user {member} interferes with {packet} but caches it")]
    CachedInterferer {
        label: u32,
        member: usize,
        packet: PacketId,
    },
    #[error("user {user} receives {packet} {count} times")]
    Coverage {
        user: usize,
        packet: PacketId,
        count: usize,
    },
    #[error("served total {found} differs from K(F-Z) = {expected}")]
    Total { expected: usize, found: usize },
    #[error("cache list has {found} users, plan has {expected}")]
    CacheCount { expected: usize, found: usize },
}

/// Parses a one-based, comma-separated demand list such as `1,2,3,4` into
/// zero-based file indices.
pub fn parse_demands(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .ok()
                .filter(|&d| d >= 1)
                .map(|d| d - 1)
                .ok_or_else(|| format!("invalid demand `{tok}`"))
        })
        .collect()
}

/// Builds one block per integer of `a`, in ascending block order.
///
/// `demands[k]` is the zero-based file wanted by user `k`.
pub fn plan_delivery(
    a: &CodedArray,
    demands: &[usize],
    files: usize,
) -> Result<DeliveryPlan, PlanError> {
    if demands.len() != a.cols() {
        return Err(PlanError::DemandLength {
            users: a.cols(),
            found: demands.len(),
        });
    }
    if let Some((user, &file)) = demands.iter().enumerate().find(|(_, &d)| d >= files) {
        return Err(PlanError::DemandOutOfRange {
            user: user + 1,
            file: file + 1,
            files,
        });
    }

    let blocks = occurrences(a)
        .into_iter()
        .map(|(label, mut positions)| {
            positions.sort_by_key(|&(row, col)| (col, row));
            let users: Vec<usize> = positions.iter().map(|p| p.1).collect();
            let rows: Vec<usize> = positions.iter().map(|p| p.0).collect();
            let packets = positions
                .iter()
                .map(|&(row, user)| PacketId {
                    file: demands[user],
                    row,
                })
                .collect();
            let interference = rows
                .iter()
                .map(|&row| {
                    users
                        .iter()
                        .copied()
                        .filter(|&u| a.get(row, u).is_int())
                        .collect()
                })
                .collect();
            BlockPlan {
                label,
                users,
                rows,
                packets,
                interference,
            }
        })
        .collect();

    Ok(DeliveryPlan {
        demands: demands.to_vec(),
        files,
        packets_per_file: a.rows(),
        blocks,
    })
}

/// Summary of a successful [`verify_plan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanCheck {
    pub blocks: usize,
    pub total_served: usize,
    pub largest_interference_set: usize,
}

/// Checks block invariants, exact-once coverage of every missing packet and
/// `sum_s r_s = K(F - Z)`.
pub fn verify_plan(
    plan: &DeliveryPlan,
    caches: &[CacheState],
    antennas: usize,
) -> Result<PlanCheck, PlanError> {
    if caches.len() != plan.demands.len() {
        return Err(PlanError::CacheCount {
            expected: plan.demands.len(),
            found: caches.len(),
        });
    }

    let mut largest = 0;
    let mut delivered: HashMap<(usize, PacketId), usize> = HashMap::new();
    for block in &plan.blocks {
        let mut seen = BTreeSet::new();
        for (i, &user) in block.users.iter().enumerate() {
            if !seen.insert(user) {
                return Err(PlanError::RepeatedUser {
                    label: block.label,
                    user: user + 1,
                });
            }
            let set = &block.interference[i];
            if !set.contains(&user) {
                return Err(PlanError::SelfMissing {
                    label: block.label,
                    user: user + 1,
                });
            }
            if set.len() > antennas {
                return Err(PlanError::Oversized {
                    label: block.label,
                    user: user + 1,
                    size: set.len(),
                    limit: antennas,
                });
            }
            largest = largest.max(set.len());
            let packet = block.packets[i];
            if let Some(&member) = set.iter().find(|&&m| caches[m].contains(&packet)) {
                return Err(PlanError::CachedInterferer {
                    label: block.label,
                    member: member + 1,
                    packet,
                });
            }
            *delivered.entry((user, packet)).or_insert(0) += 1;
        }
    }

    let mut missing_total = 0;
    for (user, &file) in plan.demands.iter().enumerate() {
        for row in 0..plan.packets_per_file {
            let packet = PacketId { file, row };
            let expected = usize::from(!caches[user].contains(&packet));
            missing_total += expected;
            let count = delivered.remove(&(user, packet)).unwrap_or(0);
            if count != expected {
                return Err(PlanError::Coverage {
                    user: user + 1,
                    packet,
                    count,
                });
            }
        }
    }
    if let Some((&(user, packet), &count)) = delivered.iter().next() {
        return Err(PlanError::Coverage {
            user: user + 1,
            packet,
            count,
        });
    }

    let total = plan.total_served();
    if total != missing_total {
        return Err(PlanError::Total {
            expected: missing_total,
            found: total,
        });
    }
    Ok(PlanCheck {
        blocks: plan.blocks.len(),
        total_served: total,
        largest_interference_set: largest,
    })
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

impl fmt::Display for DeliveryPlan {
    /// One stanza per block, blank-line separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "demands {}",
            join(self.demands.iter().map(|d| d + 1), ",")
        )?;
        writeln!(f, "files {}", self.files)?;
        writeln!(f, "blocks {}", self.blocks.len())?;
        for block in &self.blocks {
            writeln!(f)?;
            writeln!(f, "block {}", block.label)?;
            writeln!(f, "users {}", join(block.users.iter().map(|u| u + 1), " "))?;
            writeln!(f, "rows {}", join(block.rows.iter().map(|r| r + 1), " "))?;
            writeln!(f, "packets {}", join(&block.packets, " "))?;
            let sets = block
                .interference
                .iter()
                .map(|set| format!("{{{}}}", join(set.iter().map(|u| u + 1), ",")));
            writeln!(f, "interference {}", join(sets, " "))?;
        }
        Ok(())
    }
}
