//! Argument grammar. All defaults live here so `--help` shows them.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "abelscope",
    version,
    about = "Exact verification of a graded Lie algebra homology computation \
             and of the matrix group family it describes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full verification report for one prime.
    Verify {
        /// Prime p for the coefficient ring Z[1/p].
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Write the JSON report to this path as well.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Operations on weight-graded Lie algebra files.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Operations on the Z[1/p] matrix group family.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Compute a Cayley ball for a preset marked group, optionally
    /// comparing it against a second preset.
    Ball {
        /// Marked group: z, z-mod:<n>, gamma, or gamma-mod-mz.
        #[arg(long)]
        preset: String,
        /// Ball radius (capped at 6 unless overridden).
        #[arg(long, default_value_t = 2)]
        radius: u32,
        /// Prime p for the gamma presets.
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Modulus for the z-mod preset (alternative to z-mod:<n>).
        #[arg(long)]
        modulus: Option<u64>,
        /// Second preset to compare against vertex-for-vertex.
        #[arg(long, value_name = "PRESET")]
        compare: Option<String>,
        /// Allow radii above the default cap of 6.
        #[arg(long)]
        max_radius_override: bool,
        /// Write the JSON report to this path as well.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCommand {
    /// Validate an algebra file and run the two-condition presentation test.
    Check {
        /// Path to the algebra JSON file.
        file: PathBuf,
        /// Write the JSON report to this path as well.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupCommand {
    /// Randomized law and filtration checks on the structured group ops.
    Selftest {
        /// Prime p for the coefficient ring Z[1/p].
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Number of random trials per check.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Seed for the deterministic trial generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report to this path as well.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}
