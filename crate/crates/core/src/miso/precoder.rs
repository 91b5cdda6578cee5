//! Per-block precoder design, effective channels and decode verification.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use rayon::prelude::*;

use super::channel::{make_channel, ChannelKind, ChannelMatrix};
use super::scalar::{solve, Mode, Scalar};
use super::SimError;
use crate::array::CodedArray;
use crate::audit::ratio;
use crate::scheme::{place, plan_delivery, verify_plan, BlockPlan, CacheState, PacketId};
use crate::validate::{validate_mapda, MapdaParams};

/// Precoding vectors of one block, one per served user.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderBlock<T> {
    pub label: u32,
    pub vectors: Vec<Vec<T>>,
    /// Antennas carrying a nonzero coordinate choice for each vector.
    pub antenna_sets: Vec<Vec<usize>>,
}

/// Solves the zero-forcing constraints for every served user of `block`.
///
/// When the interference set is smaller than `L`, only as many antennas as
/// constraints are used: the first subset, in lexicographic order, whose
/// square system is nonsingular. The other coordinates are zero.
pub fn solve_precoder<T: Scalar>(
    h: &ChannelMatrix<T>,
    block: &BlockPlan,
) -> Result<PrecoderBlock<T>, SimError> {
    let l = h.antennas();
    let mut vectors = Vec::with_capacity(block.served());
    let mut antenna_sets = Vec::with_capacity(block.served());
    for (i, &user) in block.users.iter().enumerate() {
        let constrained = &block.interference[i];
        let p = constrained.len();
        if p > l {
            return Err(SimError::Oversized {
                label: block.label,
                user: user + 1,
                size: p,
                antennas: l,
            });
        }
        let rhs: Vec<T> = constrained
            .iter()
            .map(|&u| if u == user { T::one() } else { T::zero() })
            .collect();
        let solved = (0..l)
            .combinations(p)
            .find_map(|cols| solve(h.minor(constrained, &cols), rhs.clone()).map(|x| (cols, x)));
        let (cols, x) = solved.ok_or(SimError::Singular {
            label: block.label,
            user: user + 1,
        })?;
        let mut v = vec![T::zero(); l];
        for (&c, value) in cols.iter().zip(x) {
            v[c] = value;
        }
        vectors.push(v);
        antenna_sets.push(cols);
    }
    Ok(PrecoderBlock {
        label: block.label,
        vectors,
        antenna_sets,
    })
}

/// `R = H^(s) V^(s)` with the magnitude scale of each entry's dot product.
pub fn effective_matrix<T: Scalar>(
    h: &ChannelMatrix<T>,
    block: &BlockPlan,
    precoder: &PrecoderBlock<T>,
) -> (Vec<Vec<T>>, Vec<Vec<f64>>) {
    let vectors: Vec<T::Prepared> = precoder.vectors.iter().map(|v| T::prepare(v)).collect();
    block
        .users
        .iter()
        .map(|&user| {
            let row = T::prepare(h.row(user));
            vectors.iter().map(|v| T::dot(&row, v)).unzip()
        })
        .unzip()
}

/// Outcome of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockReport<T> {
    pub label: u32,
    pub users: Vec<usize>,
    pub precoder: PrecoderBlock<T>,
    /// `R^(s)`: row `i` is what served user `i` hears.
    pub effective: Vec<Vec<T>>,
    /// Packet recovered by each served user.
    pub decoded: Vec<PacketId>,
}

fn decode_block<T: Scalar>(
    h: &ChannelMatrix<T>,
    block: &BlockPlan,
    caches: &[CacheState],
) -> Result<BlockReport<T>, SimError> {
    let precoder = solve_precoder(h, block)?;
    let (effective, scales) = effective_matrix(h, block, &precoder);
    for (i, &user) in block.users.iter().enumerate() {
        let mut heard: BTreeMap<PacketId, (T, f64)> = BTreeMap::new();
        for (j, packet) in block.packets.iter().enumerate() {
            let (value, scale) = (&effective[i][j], scales[i][j]);
            heard
                .entry(*packet)
                .and_modify(|slot| {
                    slot.0 = slot.0.clone() + value.clone();
                    slot.1 += scale;
                })
                .or_insert_with(|| (value.clone(), scale));
        }
        let wanted = block.packets[i];
        for (packet, (coefficient, scale)) in heard {
            if caches[user].contains(&packet) {
                continue;
            }
            let ok = if packet == wanted {
                coefficient.is_unit()
            } else {
                coefficient.is_negligible(scale)
            };
            if !ok {
                return Err(SimError::DecodeFailure {
                    label: block.label,
                    user: user + 1,
                    packet,
                    coefficient: coefficient.render(),
                });
            }
        }
    }
    Ok(BlockReport {
        label: block.label,
        users: block.users.clone(),
        precoder,
        effective,
        decoded: block.packets.clone(),
    })
}

/// Result of an end-to-end run in which every served user decoded.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport<T> {
    pub mode: Mode,
    pub kind: ChannelKind,
    pub seed: u64,
    pub params: MapdaParams,
    pub blocks: Vec<BlockReport<T>>,
    /// `sum_s r_s`.
    pub total_served: usize,
    /// `sum_s r_s / S`.
    pub measured_dof: BigRational,
}

/// Places, plans and delivers every block of `a` over a fresh channel,
/// verifying that each served user decodes its packet.
pub fn simulate<T: Scalar>(
    a: &CodedArray,
    antennas: usize,
    demands: &[usize],
    files: usize,
    kind: ChannelKind,
    seed: u64,
) -> Result<SimulationReport<T>, SimError> {
    let params = validate_mapda(a, antennas)?;
    let caches = place(a, files);
    let plan = plan_delivery(a, demands, files)?;
    verify_plan(&plan, &caches, antennas)?;
    let h: ChannelMatrix<T> = make_channel(kind, a.cols(), antennas, seed)?;

    let outcomes: Vec<Result<BlockReport<T>, SimError>> = plan
        .blocks
        .par_iter()
        .map(|block| decode_block(&h, block, &caches))
        .collect();
    let blocks = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;

    let total_served = blocks.iter().map(|b| b.users.len()).sum();
    Ok(SimulationReport {
        mode: T::MODE,
        kind,
        seed,
        params,
        measured_dof: ratio(total_served, blocks.len()),
        blocks,
        total_served,
    })
}

impl<T: Scalar> fmt::Display for SimulationReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode {}", self.mode)?;
        writeln!(f, "channel {} seed {}", self.kind, self.seed)?;
        writeln!(f, "array {}", self.params)?;
        writeln!(f, "blocks {}", self.blocks.len())?;
        writeln!(f, "served {}", self.total_served)?;
        writeln!(f, "sum-dof {}", self.measured_dof)?;
        for block in &self.blocks {
            writeln!(f)?;
            writeln!(f, "block {}", block.label)?;
            let users: Vec<String> = block.users.iter().map(|u| (u + 1).to_string()).collect();
            writeln!(f, "users {}", users.join(" "))?;
            writeln!(f, "effective")?;
            for row in &block.effective {
                let cells: Vec<String> = row.iter().map(Scalar::render).collect();
                writeln!(f, "  {}", cells.join(" "))?;
            }
            let decoded: Vec<String> = block.decoded.iter().map(ToString::to_string).collect();
            writeln!(f, "decoded {}", decoded.join(" "))?;
        }
        Ok(())
    }
}
