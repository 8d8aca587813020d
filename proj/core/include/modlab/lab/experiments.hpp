#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modlab/ab_scattering.hpp"
#include "modlab/evolve.hpp"
#include "modlab/grid.hpp"
#include "modlab/lab/config.hpp"
#include "modlab/lab/record.hpp"
#include "modlab/potential.hpp"
#include "modlab/states.hpp"

namespace modlab::lab {

// --- typed experiments ------------------------------------------------------

struct GratingSpec {
    Grid grid = make_grid(4096, -128.0, 256.0);
    SlitArraySpec slits;
    double peak_threshold = 0.1;
};

/// Far-field fringe peaks. Columns: p, height, order (p L / h), offset
/// (order minus nearest integer).
ExperimentRecord grating_experiment(const GratingSpec& spec, const std::string& name = "grating");

struct EomSpec {
    Grid grid = make_grid(1024, -32.0, 64.0);
    double L = 8.0;
    PacketSpec packet;
    double alpha = 0.0;
    /// Barrier over the second branch, [x_lo, x_hi).
    PotentialSpec potential;
    double total_time = 0.5;
    std::vector<double> dts;
    double mass = 1.0;
};

/// max_t |d<T_L>/dt - (i/h)<(V(x) - V(x+L)) T_L>| for each dt.
ExperimentRecord eom_check_experiment(const EomSpec& spec);

struct UncertaintySpec {
    Grid grid = make_grid(1024, -32.0, 64.0);
    double L = 8.0;
    std::vector<double> widths;
    int bins = 32;
    PacketKind kind = PacketKind::bump;
};

/// |c_k| (k = 1..4) and TV from uniform of a single packet per width, with
/// the two-slit |c_1| at the same width as contrast.
ExperimentRecord uncertainty_experiment(const UncertaintySpec& spec);

struct ClassicalLimitSpec {
    double L = 1.0;
    std::vector<double> hbar_values;
    /// Domain length at the largest hbar; scaled with hbar so dp stays fixed.
    double length0 = 1024.0;
    std::size_t n = 16384;
    /// Momentum-space standard deviation in units of dp, held fixed.
    double sigma_p_cells = 64.0;
    int bins = 32;
};

ExperimentRecord classical_limit_experiment(const ClassicalLimitSpec& spec);

struct TwoParticleSpec {
    Grid grid = make_grid(256, -32.0, 64.0);
    double L = 4.0;
    PacketSpec first;
    PacketSpec second;
    PotentialSpec interaction = PotentialSpec::gaussian_well(5.0, 1.0);
    PropagatorConfig cfg;
};

ExperimentRecord two_particle_experiment(const TwoParticleSpec& spec);

struct ScatteringSpec {
    FluxParam flux;
    ScatterConfig cfg;
};

ExperimentRecord scattering_experiment(const ScatteringSpec& spec);

struct RandomWalkSpec {
    Grid grid = make_grid(4096, -64.0, 128.0);
    SlitArraySpec grating;
    /// Electron counts at which the walk is reported; the last is the total.
    std::vector<long long> checkpoints;
    long long n_repeats = 100;
    int mod_bins = 16;
    bool require_two_point = false;
    int threads = 1;
    std::uint64_t seed = 0;
};

/// Probability carried by the lattice cells at +-h/2L (0 if off-lattice).
double two_point_mass(const MomentumAmplitudes& amps, double L);

ExperimentRecord random_walk_experiment(const RandomWalkSpec& spec);

struct TaylorSpec {
    /// Disjoint two-bump state.
    Grid bump_grid = make_grid(256, -16.0, 32.0);
    double bump_L = 8.0;
    double bump_width = 2.0;
    /// Single narrow Gaussian with small L.
    Grid gauss_grid = make_grid(256, -16.0, 32.0);
    double gauss_L = 0.5;
    double gauss_width = 1.0;
    int orders = 40;
};

ExperimentRecord taylor_demo_experiment(const TaylorSpec& spec);

// --- configuration-driven runner -------------------------------------------

const std::vector<ExperimentSchema>& experiment_schemas();
std::vector<std::string> experiment_names();
/// Throws UnknownExperiment naming the valid experiments.
const ExperimentSchema& schema_for(const std::string& name);

/// Human-readable listing of every experiment and its parameters.
std::string describe_experiments();

/// Validates and runs without touching the filesystem.
ExperimentRecord run_experiment(const std::string& name, const ParamMap& params, std::uint64_t seed);

struct RunResult {
    ExperimentRecord record;
    std::string path;
};

/// Validates, runs and writes `<name>-<seed>.<format>` into out_dir.
RunResult run(const ExperimentConfig& config);

}  // namespace modlab::lab
