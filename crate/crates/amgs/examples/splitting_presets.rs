//! Compare the modulus-based splitting presets on one instance.
//!
//! The one-splitting presets (MJ, MGS, MSOR, MAOR) feed only the previous
//! iterate back; the accelerated two-splitting presets (AMJ, AMGS, AMSOR,
//! AMAOR) reuse the updated magnitudes of earlier components within the
//! same sweep, which is where the iteration counts drop.
//!
//! ```bash
//! cargo run --example splitting_presets
//! ```

use amgs::contact::synthetic::random_spd_lcp;
use amgs::lcp::{ammsi_solve, mmsi_solve, SolverConfig, SplittingPreset};
use rand::SeedableRng;

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let prob = random_spd_lcp(12, &mut rng);
    let cfg = SolverConfig {
        max_iterations: 500,
        residual_tol: 1e-10,
        record_history: true,
        ..Default::default()
    };
    let x0 = vec![0.0; 12];

    let presets = [
        SplittingPreset::Mj,
        SplittingPreset::Mgs,
        SplittingPreset::Msor { alpha: 0.9 },
        SplittingPreset::Maor {
            alpha: 0.9,
            beta: 0.8,
        },
        SplittingPreset::Mmsim,
        SplittingPreset::Amj,
        SplittingPreset::Amgs,
        SplittingPreset::Amsor { alpha: 0.9 },
        SplittingPreset::Amaor {
            alpha: 0.9,
            beta: 0.8,
        },
    ];
    println!("{:<16} {:>8} {:>12}", "preset", "sweeps", "residual");
    for preset in presets {
        let solution = if preset.is_accelerated() {
            ammsi_solve(&prob, preset, &x0, &cfg).unwrap()
        } else {
            mmsi_solve(&prob, preset, &x0, &cfg).unwrap()
        };
        println!(
            "{:<16} {:>8} {:>12.2e}",
            preset.name(),
            solution.iterations,
            solution.residual_history.last().copied().unwrap_or(0.0),
        );
    }
}
