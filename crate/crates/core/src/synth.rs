//! Seeded two-block benchmark networks and the noise sweep over them.
//!
//! Randomness comes from ChaCha8 seeded through `SeedableRng::seed_from_u64`,
//! which is portable across platforms. Replicates of a sweep draw their seeds
//! from SplitMix64 applied to `(base seed, p_add index, rep index)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, LabelMap};
use crate::pipeline::{cluster, ClusterOptions};

/// How within-block edges are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeModel {
    /// Every within-block cell is an independent Bernoulli(`p_in`).
    Uniform,
    /// Entities arrive one at a time and attach to `attachments` distinct
    /// features with probability proportional to feature degree + 1.
    Preferential { attachments: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub entities_per_block: usize,
    pub features_per_block: usize,
    pub p_in: f64,
    pub p_add: f64,
    pub degree_model: DegreeModel,
    pub seed: u64,
}

impl Default for SynthSpec {
    /// Two blocks of 50 entities × 200 features, `p_in = 1/2`, no noise.
    fn default() -> Self {
        SynthSpec {
            entities_per_block: 50,
            features_per_block: 200,
            p_in: 0.5,
            p_add: 0.0,
            degree_model: DegreeModel::Uniform,
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.entities_per_block == 0 || self.features_per_block == 0 {
            return bad("block sizes must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.p_in) {
            return bad(format!("p_in = {} is outside [0, 1]", self.p_in));
        }
        if !(0.0..=0.5).contains(&self.p_add) {
            return bad(format!("p_add = {} is outside [0, 0.5]", self.p_add));
        }
        if let DegreeModel::Preferential { attachments } = self.degree_model {
            if attachments == 0 || attachments > self.features_per_block {
                return bad(format!(
                    "attachments = {attachments} must be in 1..={}",
                    self.features_per_block
                ));
            }
        }
        Ok(())
    }

    fn block_of_entity(&self, e: usize) -> usize {
        e / self.entities_per_block
    }

    fn block_of_feature(&self, f: usize) -> usize {
        f / self.features_per_block
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of replicate `rep` at grid point `grid_index`.
pub fn derive_seed(base: u64, grid_index: u64, rep: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ grid_index) ^ rep)
}

fn labelled(spec: &SynthSpec, rows: Vec<Vec<usize>>) -> (BipartiteGraph, LabelMap) {
    let ne = 2 * spec.entities_per_block;
    let nf = 2 * spec.features_per_block;
    let entities: Vec<String> = (0..ne).map(|e| format!("e{e}")).collect();
    let features = (0..nf).map(|f| format!("f{f}")).collect();
    let mut truth = LabelMap::new();
    for (e, label) in entities.iter().enumerate() {
        truth.insert(label.clone(), format!("block{}", spec.block_of_entity(e)));
    }
    let g = BipartiteGraph::new(entities, features, rows).expect("generated labels are unique");
    (g, truth)
}

fn add_cross_noise(spec: &SynthSpec, rng: &mut ChaCha8Rng, rows: &mut [Vec<usize>]) {
    let nf = 2 * spec.features_per_block;
    for (e, row) in rows.iter_mut().enumerate() {
        let own = spec.block_of_entity(e);
        for f in 0..nf {
            if spec.block_of_feature(f) != own && rng.random::<f64>() < spec.p_add {
                row.push(f);
            }
        }
        row.sort_unstable();
    }
}

/// Two planted blocks; dispatches on the degree model.
pub fn generate(spec: &SynthSpec) -> Result<(BipartiteGraph, LabelMap)> {
    match spec.degree_model {
        DegreeModel::Uniform => gen_two_block(spec),
        DegreeModel::Preferential { .. } => gen_pa_two_block(spec),
    }
}

/// Two planted blocks with Bernoulli edges: `p_in` inside a block, `p_add`
/// across blocks. Cells are visited entity-major.
pub fn gen_two_block(spec: &SynthSpec) -> Result<(BipartiteGraph, LabelMap)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let ne = 2 * spec.entities_per_block;
    let nf = 2 * spec.features_per_block;
    let rows = (0..ne)
        .map(|e| {
            let own = spec.block_of_entity(e);
            (0..nf)
                .filter(|&f| {
                    let p = if spec.block_of_feature(f) == own {
                        spec.p_in
                    } else {
                        spec.p_add
                    };
                    rng.random::<f64>() < p
                })
                .collect()
        })
        .collect();
    Ok(labelled(spec, rows))
}

/// Two blocks grown by preferential attachment, then cross-block noise.
pub fn gen_pa_two_block(spec: &SynthSpec) -> Result<(BipartiteGraph, LabelMap)> {
    spec.validate()?;
    let DegreeModel::Preferential { attachments } = spec.degree_model else {
        return Err(Error::InvalidParameter(
            "preferential generator needs the preferential degree model".into(),
        ));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (epb, fpb) = (spec.entities_per_block, spec.features_per_block);
    let mut rows = vec![Vec::new(); 2 * epb];
    for block in 0..2 {
        // weight of each feature is its degree + 1
        let mut weight = vec![1u64; fpb];
        let mut total = fpb as u64;
        for row in rows.iter_mut().skip(block * epb).take(epb) {
            let mut chosen: Vec<usize> = Vec::with_capacity(attachments);
            while chosen.len() < attachments {
                let available = total - chosen.iter().map(|&f| weight[f]).sum::<u64>();
                let mut r = rng.random_range(0..available);
                let pick = (0..fpb)
                    .filter(|f| !chosen.contains(f))
                    .find(|&f| {
                        if r < weight[f] {
                            true
                        } else {
                            r -= weight[f];
                            false
                        }
                    })
                    .expect("r is below the available weight");
                chosen.push(pick);
            }
            for &f in &chosen {
                weight[f] += 1;
                total += 1;
                row.push(block * fpb + f);
            }
        }
    }
    add_cross_noise(spec, &mut rng, &mut rows);
    Ok(labelled(spec, rows))
}

/// Mean and spread of the maximal susceptibility at one noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p_add: f64,
    pub mean_chi: f64,
    /// Sample standard deviation; zero for a single replicate.
    pub std_chi: f64,
    pub reps: usize,
}

/// Maximal susceptibility over `reps` replicates at each `p_add`.
///
/// Replicates run in parallel; results are aggregated in grid order.
pub fn sweep_padd(base: &SynthSpec, padd_values: &[f64], reps: usize) -> Result<Vec<SweepRow>> {
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    for &p_add in padd_values {
        SynthSpec {
            p_add,
            ..base.clone()
        }
        .validate()?;
    }
    let jobs: Vec<(usize, usize)> = (0..padd_values.len())
        .flat_map(|g| (0..reps).map(move |r| (g, r)))
        .collect();
    let chis = jobs
        .par_iter()
        .map(|&(g, r)| {
            let spec = SynthSpec {
                p_add: padd_values[g],
                seed: derive_seed(base.seed, g as u64, r as u64),
                ..base.clone()
            };
            let (graph, _) = generate(&spec)?;
            Ok(cluster(&graph, &ClusterOptions::default())?.optimal.chi)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(padd_values
        .iter()
        .zip(chis.chunks(reps))
        .map(|(&p_add, xs)| {
            let mean = xs.iter().sum::<f64>() / reps as f64;
            let var = if reps > 1 {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1) as f64
            } else {
                0.0
            };
            SweepRow {
                p_add,
                mean_chi: mean,
                std_chi: var.sqrt(),
                reps,
            }
        })
        .collect())
}

/// `p_add<TAB>mean_chi<TAB>std_chi<TAB>reps` rows.
pub fn sweep_to_tsv(rows: &[SweepRow]) -> String {
    let mut out = String::from("p_add\tmean_chi\tstd_chi\treps\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.p_add, r.mean_chi, r.std_chi, r.reps
        ));
    }
    out
}
