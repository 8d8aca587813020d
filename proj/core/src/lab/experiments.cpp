#include "modlab/lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "modlab/error.hpp"
#include "modlab/lab/sampling.hpp"
#include "modlab/observables.hpp"

namespace modlab::lab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Grid centered_grid(long long n, double length, double hbar) {
    if (n < 0) fail(ErrorCode::NonPowerOfTwo, "grid size must be positive");
    return make_grid(static_cast<std::size_t>(n), -0.5 * length, length, hbar);
}

PacketKind parse_kind(const std::string& s) { return s == "gaussian" ? PacketKind::gaussian : PacketKind::bump; }

double nearest_integer_offset(double order) { return order - std::round(order); }
double nearest_half_offset(double order) { return order - (std::floor(order) + 0.5); }

}  // namespace

// --- grating / two-slit -----------------------------------------------------

ExperimentRecord grating_experiment(const GratingSpec& spec, const std::string& name) {
    const Grid& grid = spec.grid;
    const auto psi = make_grating(grid, spec.slits);
    const auto far = free_far_field(psi);
    const auto peaks = fringe_peaks(far, spec.peak_threshold);
    const double cell = 2.0 * kPi * grid.hbar() / spec.slits.spacing;

    ExperimentRecord rec;
    rec.experiment = name;
    rec.columns = {"p", "height", "order", "offset"};
    double dev_int = 0.0;
    double dev_half = 0.0;
    for (const auto& pk : peaks) {
        const double order = pk.p / cell;
        rec.add_row({pk.p, pk.height, order, nearest_integer_offset(order)});
        dev_int = std::max(dev_int, std::abs(nearest_integer_offset(order)) * cell / grid.dp());
        dev_half = std::max(dev_half, std::abs(nearest_half_offset(order)) * cell / grid.dp());
    }
    rec.summary = {{"n_peaks", static_cast<double>(peaks.size())},
                   {"cell", cell},
                   {"dp", grid.dp()},
                   {"max_dev_from_integer_orders_in_dp", dev_int},
                   {"max_dev_from_half_orders_in_dp", dev_half}};
    return rec;
}

// --- eom-check --------------------------------------------------------------

ExperimentRecord eom_check_experiment(const EomSpec& spec) {
    if (spec.dts.empty()) fail(ErrorCode::InvalidArgument, "eom-check needs at least one dt");
    const auto psi0 = make_two_slit(spec.grid, spec.L, spec.packet, spec.alpha);

    ExperimentRecord rec;
    rec.experiment = "eom-check";
    rec.columns = {"dt", "steps", "max_residual", "ratio_to_previous", "max_force_term"};
    double previous = kNaN;
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    bool wrapped = false;
    for (double dt : spec.dts) {
        const double exact_steps = spec.total_time / dt;
        const auto steps = static_cast<int>(std::llround(exact_steps));
        if (steps < 2 || std::abs(exact_steps - steps) > 1e-9 * exact_steps) {
            fail(ErrorCode::InvalidArgument, "total_time must be a multiple (>= 2) of every dt");
        }
        PropagatorConfig cfg;
        cfg.dt = dt;
        cfg.steps = steps;
        cfg.mass = spec.mass;
        const auto traj = propagate(psi0, spec.potential, cfg);
        wrapped = wrapped || traj.phase_wrap_warning;
        const auto res = eom_residual(traj, spec.potential, spec.L);
        double force = 0.0;
        for (const auto& f : res.force_term) force = std::max(force, std::abs(f));
        const double r = res.max_residual();
        const double ratio = previous / r;
        if (std::isfinite(ratio)) {
            min_ratio = std::min(min_ratio, ratio);
            max_ratio = std::max(max_ratio, ratio);
        }
        rec.add_row({dt, static_cast<double>(steps), r, ratio, force});
        previous = r;
    }
    rec.summary = {{"min_ratio", spec.dts.size() > 1 ? min_ratio : kNaN},
                   {"max_ratio", spec.dts.size() > 1 ? max_ratio : kNaN},
                   {"phase_wrap_warning", wrapped ? 1.0 : 0.0}};
    return rec;
}

// --- uncertainty ------------------------------------------------------------

ExperimentRecord uncertainty_experiment(const UncertaintySpec& spec) {
    if (spec.widths.empty()) fail(ErrorCode::InvalidArgument, "uncertainty needs at least one width");
    const double mid = spec.grid.x0() + 0.5 * spec.grid.length();

    ExperimentRecord rec;
    rec.experiment = "uncertainty";
    rec.columns = {"width", "abs_c1", "abs_c2", "abs_c3", "abs_c4", "tv_from_uniform", "tv_bound", "two_slit_abs_c1"};
    double worst_c = 0.0;
    double worst_tv_excess = -std::numeric_limits<double>::infinity();
    const double bound = 1.0 / (2.0 * spec.bins);
    for (double w : spec.widths) {
        if (!(w < 0.5 * spec.L)) fail(ErrorCode::InvalidArgument, "widths must be below L/2");
        PacketSpec packet{spec.kind, mid, w, 0.0};
        const auto single = make_packet(spec.grid, packet);
        const auto dist = modular_distribution(single, spec.L, spec.bins, 4);
        const double tv = tv_from_uniform(dist.density);

        packet.center = mid - 0.5 * spec.L;
        const auto pair = make_two_slit(spec.grid, spec.L, packet, 0.0);
        const double contrast = std::abs(translation_expect(pair, spec.L, 1));

        std::vector<double> row{w};
        for (const auto& c : dist.fourier) {
            row.push_back(std::abs(c));
            worst_c = std::max(worst_c, std::abs(c));
        }
        row.insert(row.end(), {tv, bound, contrast});
        worst_tv_excess = std::max(worst_tv_excess, tv - bound);
        rec.add_row(std::move(row));
    }
    rec.summary = {{"max_abs_ck", worst_c}, {"max_tv_minus_bound", worst_tv_excess}};
    return rec;
}

// --- classical limit --------------------------------------------------------

ExperimentRecord classical_limit_experiment(const ClassicalLimitSpec& spec) {
    const auto& hs = spec.hbar_values;
    if (hs.empty()) fail(ErrorCode::InvalidArgument, "classical-limit needs hbar values");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(hs[i] > 0.0)) fail(ErrorCode::InvalidArgument, "hbar values must be positive");
        if (i > 0 && !(hs[i] < hs[i - 1])) fail(ErrorCode::InvalidArgument, "hbar values must be descending");
    }
    const double h_max = hs.front();
    const double dp = 2.0 * kPi * h_max / spec.length0;
    const double sigma_p = spec.sigma_p_cells * dp;

    ExperimentRecord rec;
    rec.experiment = "classical-limit";
    rec.columns = {"hbar", "cell", "cell_over_sigma_p", "tv_from_uniform"};
    double previous = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    double last = kNaN;
    for (double hbar : hs) {
        const double length = spec.length0 * hbar / h_max;
        const auto grid = make_grid(spec.n, -0.5 * length, length, hbar);
        const PacketSpec packet{PacketKind::gaussian, 0.0, hbar / (2.0 * sigma_p), 0.0};
        const auto psi = make_packet(grid, packet);
        const auto dist = modular_distribution(psi, spec.L, spec.bins, 1);
        const double tv = tv_from_uniform(dist.density);
        decreasing = decreasing && tv <= previous + 1e-12;
        previous = tv;
        last = tv;
        rec.add_row({hbar, dist.period, dist.period / sigma_p, tv});
    }
    rec.summary = {{"dp", dp},
                   {"sigma_p", sigma_p},
                   {"decreasing", decreasing ? 1.0 : 0.0},
                   {"final_tv", last}};
    return rec;
}

// --- two particles ----------------------------------------------------------

ExperimentRecord two_particle_experiment(const TwoParticleSpec& spec) {
    const auto psi1 = make_packet(spec.grid, spec.first);
    const auto psi2 = make_packet(spec.grid, spec.second);
    const auto state = TwoParticleState::product(psi1, psi2);
    const auto traj = propagate_two(state, spec.interaction, spec.cfg);

    const cplx joint0 = joint_translation_expect(state, spec.L, 1, 1);
    const cplx single0 = joint_translation_expect(state, spec.L, 1, 0);

    ExperimentRecord rec;
    rec.experiment = "two-particle";
    rec.columns = {"t", "re_joint", "im_joint", "joint_drift", "single_change", "mean_total_p"};
    double max_drift = 0.0;
    double max_change = 0.0;
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const auto& snap = traj.snapshots[s];
        const cplx joint = joint_translation_expect(snap, spec.L, 1, 1);
        const cplx single = joint_translation_expect(snap, spec.L, 1, 0);
        const double drift = std::abs(joint - joint0);
        const double change = std::abs(single - single0);
        max_drift = std::max(max_drift, drift);
        max_change = std::max(max_change, change);
        rec.add_row({traj.times[s], joint.real(), joint.imag(), drift, change, mean_total_momentum(snap)});
    }
    rec.summary = {{"max_joint_drift", max_drift},
                   {"max_single_change", max_change},
                   {"phase_wrap_warning", traj.phase_wrap_warning ? 1.0 : 0.0}};
    return rec;
}

// --- scattering -------------------------------------------------------------

ExperimentRecord scattering_experiment(const ScatteringSpec& spec) {
    const auto profile = scattering_profile(spec.flux, spec.cfg);
    ExperimentRecord rec;
    rec.experiment = "scattering";
    rec.columns = {"theta", "intensity", "tail_bound"};
    double max_tail = 0.0;
    for (const auto& p : profile) {
        rec.add_row({p.theta, p.intensity, p.tail});
        max_tail = std::max(max_tail, p.tail);
    }
    const double kr = spec.cfg.k * spec.cfg.r;
    rec.summary = {{"alpha_reduced", spec.flux.reduced()},
                   {"kr", kr},
                   {"n_max", static_cast<double>(spec.cfg.n_max == 0 ? default_truncation(kr) : spec.cfg.n_max)},
                   {"deviation_from_flat", profile_deviation(profile)},
                   {"max_tail_bound", max_tail}};
    return rec;
}

// --- random walk ------------------------------------------------------------

double two_point_mass(const MomentumAmplitudes& amps, double L) {
    const Grid& grid = amps.grid();
    const double steps = kPi * grid.hbar() / L / grid.dp();
    const double k = std::round(steps);
    if (std::abs(steps - k) > 1e-9 * std::max(1.0, steps)) return 0.0;
    const auto half = static_cast<long long>(grid.n() / 2);
    const auto offset = static_cast<long long>(k);
    if (offset >= half) return 0.0;
    const auto probs = amps.cell_probabilities();
    double total = 0.0;
    for (double p : probs) total += p;
    return (probs[static_cast<std::size_t>(half + offset)] + probs[static_cast<std::size_t>(half - offset)]) / total;
}

ExperimentRecord random_walk_experiment(const RandomWalkSpec& spec) {
    const auto& cps = spec.checkpoints;
    if (cps.empty()) fail(ErrorCode::InvalidArgument, "random-walk needs at least one checkpoint");
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] < 1 || (i > 0 && cps[i] <= cps[i - 1])) {
            fail(ErrorCode::InvalidArgument, "checkpoints must be positive and increasing");
        }
    }
    if (spec.n_repeats < 100) fail(ErrorCode::InvalidArgument, "random-walk needs n_repeats >= 100");
    if (spec.mod_bins < 1) fail(ErrorCode::InvalidArgument, "mod_bins must be positive");

    const Grid& grid = spec.grid;
    const double L = spec.grating.spacing;
    const auto psi = make_grating(grid, spec.grating);
    const auto amps = free_far_field(psi);
    const double mass = two_point_mass(amps, L);
    const bool two_point = mass >= 0.95;
    if (!two_point && spec.require_two_point) {
        fail(ErrorCode::RegimeViolation, "the +-h/2L pair carries only " + format_number(mass) +
                                             " of the probability (needs 0.95)");
    }

    const auto probs = amps.cell_probabilities();
    double total = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = grid.p(i);
        total += probs[i];
        m1 += probs[i] * p;
        m2 += probs[i] * p * p;
    }
    m1 /= total;
    m2 /= total;

    const LatticeSampler sampler(probs);
    const auto half = static_cast<long long>(grid.n() / 2);
    const long long n_total = cps.back();
    const std::size_t n_cp = cps.size();
    const auto repeats = static_cast<std::size_t>(spec.n_repeats);

    // recoil[r * n_cp + c]: recoil lattice steps of repeat r after cps[c] electrons
    std::vector<long long> recoil(repeats * n_cp);
    std::vector<long long> electron(repeats * n_cp);
    auto walk = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            long long e_sum = 0;
            long long r_sum = 0;
            std::size_t c = 0;
            for (long long t = 0; t < n_total; ++t) {
                const auto index = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(n_total) +
                                   static_cast<std::uint64_t>(t);
                const long long j = static_cast<long long>(sampler.draw(spec.seed, index)) - half;
                e_sum += j;
                r_sum -= j;
                if (t + 1 == cps[c]) {
                    recoil[r * n_cp + c] = r_sum;
                    electron[r * n_cp + c] = e_sum;
                    ++c;
                }
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(spec.threads, 1)), 1,
                                                        repeats);
    if (workers == 1) {
        walk(0, repeats);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (repeats + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(walk, w * chunk, std::min(repeats, (w + 1) * chunk));
        }
        for (auto& t : pool) t.join();
    }

    const double dp = grid.dp();
    const double period = 2.0 * kPi * grid.hbar() / L;
    const double q_real = period / dp;
    const double q_round = std::round(q_real);
    const bool integral_cell = std::abs(q_real - q_round) <= 1e-9 * q_real;
    const auto q = static_cast<long long>(q_round);
    // Recoil reduced into [0, period); exact when the cell spans whole lattice steps.
    auto fold = [&](long long r_steps) -> double {
        if (integral_cell) return static_cast<double>(((r_steps % q) + q) % q) * dp;
        const double x = static_cast<double>(r_steps) * dp;
        return std::min(x - period * std::floor(x / period), std::nextafter(period, 0.0));
    };
    auto mod_bin = [&](long long r_steps) -> std::size_t {
        if (integral_cell) {
            const long long residue = ((r_steps % q) + q) % q;
            return static_cast<std::size_t>(residue * spec.mod_bins / q);
        }
        return std::min<std::size_t>(static_cast<std::size_t>(fold(r_steps) / period * spec.mod_bins),
                                     static_cast<std::size_t>(spec.mod_bins - 1));
    };

    ExperimentRecord rec;
    rec.experiment = "random-walk";
    rec.columns = {"n_electrons",    "rms_recoil",        "two_point_prediction", "step_prediction",
                   "relative_error", "rms_recoil_mod",    "tv_mod_vs_previous",   "conservation_residual"};
    std::vector<double> previous_hist;
    for (std::size_t c = 0; c < n_cp; ++c) {
        const auto n = static_cast<double>(cps[c]);
        long double sum_sq = 0;  // exact for integer totals below 2^64
        double sum_sq_mod = 0.0;
        double conservation = 0.0;
        std::vector<double> hist(static_cast<std::size_t>(spec.mod_bins), 0.0);
        std::vector<long long> mod_counts(static_cast<std::size_t>(spec.mod_bins), 0);
        for (std::size_t r = 0; r < repeats; ++r) {
            const long long rs = recoil[r * n_cp + c];
            const long long es = electron[r * n_cp + c];
            if (es + rs != 0) fail(ErrorCode::InternalInconsistency, "momentum bookkeeping is not conserved");
            conservation = std::max(conservation, std::abs(static_cast<double>(es) * dp + static_cast<double>(rs) * dp));
            sum_sq += static_cast<long double>(rs) * static_cast<long double>(rs);
            ++mod_counts[mod_bin(rs)];
        }
        // Integer tallies keep the aggregates independent of thread layout.
        for (std::size_t b = 0; b < hist.size(); ++b) hist[b] = static_cast<double>(mod_counts[b]) / repeats;
        for (std::size_t r = 0; r < repeats; ++r) {
            const double folded = fold(recoil[r * n_cp + c]);
            sum_sq_mod += folded * folded;
        }
        const double rms = std::sqrt(static_cast<double>(sum_sq) / static_cast<double>(repeats)) * dp;
        const double two_point_pred = kPi * grid.hbar() / L * std::sqrt(n);
        const double step_pred = std::sqrt(n * m2 + n * (n - 1.0) * m1 * m1);
        const double reference = two_point ? two_point_pred : step_pred;
        const double tv = previous_hist.empty() ? kNaN : tv_distance(hist, previous_hist);
        rec.add_row({n, rms, two_point_pred, step_pred, rms / reference - 1.0,
                     std::sqrt(sum_sq_mod / static_cast<double>(repeats)), tv, conservation});
        previous_hist = std::move(hist);
    }
    rec.summary = {{"two_point_mass", mass},
                   {"two_point_regime", two_point ? 1.0 : 0.0},
                   {"step_mean", m1},
                   {"step_second_moment", m2},
                   {"cell", period}};
    return rec;
}

// --- Taylor demo ------------------------------------------------------------

ExperimentRecord taylor_demo_experiment(const TaylorSpec& spec) {
    const double mid_b = spec.bump_grid.x0() + 0.5 * spec.bump_grid.length();
    const PacketSpec bump{PacketKind::bump, mid_b - 0.5 * spec.bump_L, spec.bump_width, 0.0};
    const auto bumps = make_two_slit(spec.bump_grid, spec.bump_L, bump, 0.0);
    const double mid_g = spec.gauss_grid.x0() + 0.5 * spec.gauss_grid.length();
    const auto gauss = make_packet(spec.gauss_grid, PacketSpec{PacketKind::gaussian, mid_g, spec.gauss_width, 0.0});

    const auto tb = taylor_divergence_demo(bumps, spec.bump_L, spec.orders);
    const auto tg = taylor_divergence_demo(gauss, spec.gauss_L, spec.orders);

    auto error_at = [](const TaylorSeries& s, int j) {
        return static_cast<std::size_t>(j) < s.partial_sums.size()
                   ? std::abs(s.partial_sums[static_cast<std::size_t>(j)] - s.exact)
                   : std::numeric_limits<double>::infinity();
    };

    ExperimentRecord rec;
    rec.experiment = "taylor-demo";
    rec.columns = {"order", "bump_error", "gaussian_error"};
    double bump_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= spec.orders; ++j) {
        const double eb = error_at(tb, j);
        bump_min = std::min(bump_min, eb);
        rec.add_row({static_cast<double>(j), eb, error_at(tg, j)});
    }
    rec.summary = {{"bump_exact_re", tb.exact.real()},
                   {"bump_exact_im", tb.exact.imag()},
                   {"bump_min_error", bump_min},
                   {"bump_overflow_order", tb.overflow_order ? static_cast<double>(*tb.overflow_order) : kNaN},
                   {"gaussian_exact_re", tg.exact.real()},
                   {"gaussian_exact_im", tg.exact.imag()},
                   {"gaussian_final_error", error_at(tg, spec.orders)}};
    return rec;
}

// --- schemas ----------------------------------------------------------------

namespace {

ParamSpec real_param(std::string key, std::optional<std::string> def, std::string doc) {
    return ParamSpec{std::move(key), ParamType::real, std::move(def), std::move(doc), {}};
}
ParamSpec int_param(std::string key, std::optional<std::string> def, std::string doc) {
    return ParamSpec{std::move(key), ParamType::integer, std::move(def), std::move(doc), {}};
}
ParamSpec list_param(std::string key, std::optional<std::string> def, std::string doc) {
    return ParamSpec{std::move(key), ParamType::real_list, std::move(def), std::move(doc), {}};
}
ParamSpec choice_param(std::string key, std::optional<std::string> def, std::string doc,
                       std::vector<std::string> choices) {
    return ParamSpec{std::move(key), ParamType::choice, std::move(def), std::move(doc), std::move(choices)};
}

std::vector<ExperimentSchema> build_schemas() {
    const auto kind = [] {
        return choice_param("kind", "bump", "packet shape", {"bump", "gaussian"});
    };
    return {
        {"two-slit",
         "two packets a distance L apart with relative phase alpha; far-field peak table",
         {int_param("n", "4096", "lattice sites (power of two)"),
          real_param("length", "256", "domain length"),
          real_param("hbar", "1", "reduced Planck constant"),
          real_param("L", std::nullopt, "slit separation"),
          real_param("alpha", std::nullopt, "relative phase of the second slit (radians)"),
          real_param("width", "1", "packet width"),
          kind(),
          real_param("threshold", "0.1", "peak threshold relative to the highest peak")}},
        {"grating",
         "M equally spaced slits with zero or alternating-pi phases; far-field peak table",
         {int_param("n", "4096", "lattice sites (power of two)"),
          real_param("length", "256", "domain length"),
          real_param("hbar", "1", "reduced Planck constant"),
          real_param("L", std::nullopt, "slit spacing"),
          int_param("m_slits", std::nullopt, "number of slits"),
          choice_param("phases", std::nullopt, "phase pattern", {"zero", "alternating"}),
          real_param("width", "1", "packet width"),
          kind(),
          real_param("threshold", "0.1", "peak threshold relative to the highest peak")}},
        {"eom-check",
         "residual of the translation-operator equation of motion at successively halved dt",
         {int_param("n", "1024", "lattice sites (power of two)"),
          real_param("length", "64", "domain length"),
          real_param("hbar", "1", "reduced Planck constant"),
          real_param("L", std::nullopt, "slit separation (must be a multiple of dx)"),
          real_param("width", "1.5", "bump width"),
          real_param("alpha", "0", "relative phase of the second branch"),
          real_param("barrier_height", "1", "barrier height over the second branch"),
          real_param("barrier_halfwidth", "3", "barrier half-width around the second branch"),
          real_param("total_time", "0.5", "evolution time"),
          real_param("dt", "0.01", "coarsest time step"),
          int_param("levels", "3", "number of dt halvings plus one"),
          real_param("mass", "1", "particle mass")}},
        {"uncertainty",
         "modular-momentum Fourier coefficients and uniformity of single localized packets",
         {int_param("n", "1024", "lattice sites (power of two)"),
          real_param("length", "64", "domain length"),
          real_param("hbar", "1", "reduced Planck constant"),
          real_param("L", std::nullopt, "translation length"),
          list_param("widths", std::nullopt, "packet widths, each below L/2"),
          int_param("bins", "32", "bins on the modular circle"),
          kind()}},
        {"classical-limit",
         "folded momentum distribution flattening as hbar halves with L fixed",
         {real_param("L", std::nullopt, "translation length"),
          int_param("n_hbar", std::nullopt, "number of hbar values, halving from hbar_max"),
          real_param("hbar_max", "1", "largest hbar"),
          real_param("length0", "1024", "domain length at hbar_max"),
          int_param("n", "16384", "lattice sites (power of two)"),
          real_param("sigma_p_cells", "64", "momentum width in lattice cells"),
          int_param("bins", "32", "bins on the modular circle")}},
        {"two-particle",
         "two interacting particles: joint modular momentum conserved, single-particle one exchanged",
         {int_param("n", "256", "lattice sites per particle (power of two, <= 512)"),
          real_param("length", "64", "domain length"),
          real_param("hbar", "1", "reduced Planck constant"),
          real_param("L", std::nullopt, "translation length (multiple of dx)"),
          real_param("x1", "-8", "first packet centre"),
          real_param("x2", "8", "second packet centre"),
          real_param("p1", "2", "first packet momentum"),
          real_param("p2", "-2", "second packet momentum"),
          real_param("width", "2", "Gaussian packet width"),
          real_param("well_depth", "5", "interaction well depth"),
          real_param("well_width", "1", "interaction well width"),
          real_param("dt", "0.01", "time step"),
          int_param("steps", "600", "number of steps"),
          int_param("snapshot_every", "20", "steps between recorded snapshots"),
          real_param("mass", "1", "particle mass")}},
        {"scattering",
         "Aharonov-Bohm partial-wave intensity profile |psi(r, theta)|^2",
         {real_param("k", "1", "wavenumber"),
          real_param("r", std::nullopt, "radius"),
          real_param("alpha", std::nullopt, "flux in flux quanta"),
          int_param("n_theta", "181", "angles spanning [-pi, pi]"),
          int_param("n_max", "0", "series truncation (0 = ceil(kr) + 24)")}},
        {"random-walk",
         "recoil of an alternating-phase grating after N detected electrons",
         {real_param("L", "8", "slit spacing"),
          int_param("m_slits", "16", "slits tiling the periodic domain (domain length = m_slits * L)"),
          int_param("n", "4096", "lattice sites (power of two)"),
          real_param("hbar", "1", "reduced Planck constant"),
          real_param("width_fraction", "0.25", "Gaussian slit width as a fraction of L"),
          int_param("n_electrons", std::nullopt, "electrons per repeat"),
          int_param("n_repeats", std::nullopt, "independent repeats (>= 100)"),
          list_param("checkpoints", "1,10", "extra electron counts to report"),
          int_param("mod_bins", "16", "bins for the recoil modulo h/L"),
          int_param("require_two_point", "0",
                    "1: fail unless the +-h/2L pair carries >= 95%; 0: fall back to the step prediction"),
          int_param("threads", "1", "worker threads (output does not depend on it)")}},
        {"taylor-demo",
         "partial sums of the Taylor series of exp(ipL/hbar) for disjoint bumps and a narrow Gaussian",
         {real_param("L", std::nullopt, "bump separation"),
          real_param("width", "2", "bump width"),
          int_param("n", "256", "lattice sites (power of two)"),
          real_param("length", "32", "domain length"),
          real_param("gauss_L", "0.5", "translation length for the Gaussian"),
          real_param("gauss_width", "1", "Gaussian width"),
          int_param("orders", "40", "highest order (<= 40)")}},
    };
}

GratingSpec grating_from(const Params& p, int m_slits, std::vector<double> phases) {
    GratingSpec spec;
    spec.grid = centered_grid(p.integer("n"), p.real("length"), p.real("hbar"));
    const double L = p.real("L");
    spec.slits.m_slits = m_slits;
    spec.slits.spacing = L;
    spec.slits.packet = PacketSpec{parse_kind(p.text("kind")), -0.5 * (m_slits - 1) * L, p.real("width"), 0.0};
    spec.slits.phases = std::move(phases);
    spec.peak_threshold = p.real("threshold");
    return spec;
}

int checked_int(const Params& p, const std::string& key, long long lo, long long hi) {
    const long long v = p.integer(key);
    if (v < lo || v > hi) {
        fail(ErrorCode::SchemaViolation, key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(v);
}

ExperimentRecord dispatch(const std::string& name, const Params& p, std::uint64_t seed) {
    if (name == "two-slit") return grating_experiment(grating_from(p, 2, {0.0, p.real("alpha")}), name);
    if (name == "grating") {
        const int m = checked_int(p, "m_slits", 2, 4096);
        auto phases = p.text("phases") == "alternating" ? alternating_phases(m) : std::vector<double>(m, 0.0);
        return grating_experiment(grating_from(p, m, std::move(phases)), name);
    }
    if (name == "eom-check") {
        EomSpec spec;
        spec.grid = centered_grid(p.integer("n"), p.real("length"), p.real("hbar"));
        spec.L = p.real("L");
        spec.packet = PacketSpec{PacketKind::bump, -0.5 * spec.L, p.real("width"), 0.0};
        spec.alpha = p.real("alpha");
        const double hw = p.real("barrier_halfwidth");
        spec.potential = PotentialSpec::barrier(p.real("barrier_height"), 0.5 * spec.L - hw, 0.5 * spec.L + hw);
        spec.total_time = p.real("total_time");
        const int levels = checked_int(p, "levels", 1, 12);
        for (int i = 0; i < levels; ++i) spec.dts.push_back(std::ldexp(p.real("dt"), -i));
        spec.mass = p.real("mass");
        return eom_check_experiment(spec);
    }
    if (name == "uncertainty") {
        UncertaintySpec spec;
        spec.grid = centered_grid(p.integer("n"), p.real("length"), p.real("hbar"));
        spec.L = p.real("L");
        spec.widths = p.real_list("widths");
        spec.bins = checked_int(p, "bins", 8, 1 << 20);
        spec.kind = parse_kind(p.text("kind"));
        return uncertainty_experiment(spec);
    }
    if (name == "classical-limit") {
        ClassicalLimitSpec spec;
        spec.L = p.real("L");
        const int count = checked_int(p, "n_hbar", 1, 40);
        for (int i = 0; i < count; ++i) spec.hbar_values.push_back(std::ldexp(p.real("hbar_max"), -i));
        spec.length0 = p.real("length0");
        spec.n = static_cast<std::size_t>(checked_int(p, "n", 8, 1 << 24));
        spec.sigma_p_cells = p.real("sigma_p_cells");
        spec.bins = checked_int(p, "bins", 8, 1 << 20);
        return classical_limit_experiment(spec);
    }
    if (name == "two-particle") {
        TwoParticleSpec spec;
        spec.grid = centered_grid(p.integer("n"), p.real("length"), p.real("hbar"));
        spec.L = p.real("L");
        spec.first = PacketSpec{PacketKind::gaussian, p.real("x1"), p.real("width"), p.real("p1")};
        spec.second = PacketSpec{PacketKind::gaussian, p.real("x2"), p.real("width"), p.real("p2")};
        spec.interaction = PotentialSpec::gaussian_well(p.real("well_depth"), p.real("well_width"));
        spec.cfg.dt = p.real("dt");
        spec.cfg.steps = checked_int(p, "steps", 1, 1 << 24);
        spec.cfg.snapshot_every = checked_int(p, "snapshot_every", 1, 1 << 24);
        spec.cfg.mass = p.real("mass");
        return two_particle_experiment(spec);
    }
    if (name == "scattering") {
        ScatteringSpec spec;
        spec.flux.alpha = p.real("alpha");
        spec.cfg.k = p.real("k");
        spec.cfg.r = p.real("r");
        spec.cfg.n_max = checked_int(p, "n_max", 0, 100000);
        const int n_theta = checked_int(p, "n_theta", 2, 1 << 20);
        for (int j = 0; j < n_theta; ++j) spec.cfg.thetas.push_back(-kPi + 2.0 * kPi * j / (n_theta - 1));
        return scattering_experiment(spec);
    }
    if (name == "random-walk") {
        RandomWalkSpec spec;
        const double L = p.real("L");
        const int m = checked_int(p, "m_slits", 2, 1 << 16);
        spec.grid = centered_grid(p.integer("n"), m * L, p.real("hbar"));
        spec.grating.m_slits = m;
        spec.grating.spacing = L;
        spec.grating.packet = PacketSpec{PacketKind::gaussian, 0.0, p.real("width_fraction") * L, 0.0};
        spec.grating.phases = alternating_phases(m);
        spec.grating.tile_domain = true;
        const long long n_e = p.integer("n_electrons");
        if (n_e < 1) fail(ErrorCode::SchemaViolation, "n_electrons must be positive");
        for (double c : p.real_list("checkpoints")) {
            const auto ci = static_cast<long long>(c);
            if (static_cast<double>(ci) != c || ci < 1) {
                fail(ErrorCode::SchemaViolation, "checkpoints must be positive integers");
            }
            if (ci < n_e) spec.checkpoints.push_back(ci);
        }
        spec.checkpoints.push_back(n_e);
        std::sort(spec.checkpoints.begin(), spec.checkpoints.end());
        spec.checkpoints.erase(std::unique(spec.checkpoints.begin(), spec.checkpoints.end()), spec.checkpoints.end());
        spec.n_repeats = p.integer("n_repeats");
        spec.mod_bins = checked_int(p, "mod_bins", 1, 1 << 20);
        spec.require_two_point = checked_int(p, "require_two_point", 0, 1) == 1;
        spec.threads = checked_int(p, "threads", 1, 1024);
        spec.seed = seed;
        return random_walk_experiment(spec);
    }
    if (name == "taylor-demo") {
        TaylorSpec spec;
        spec.bump_grid = centered_grid(p.integer("n"), p.real("length"), 1.0);
        spec.gauss_grid = spec.bump_grid;
        spec.bump_L = p.real("L");
        spec.bump_width = p.real("width");
        spec.gauss_L = p.real("gauss_L");
        spec.gauss_width = p.real("gauss_width");
        spec.orders = checked_int(p, "orders", 0, kMaxTaylorOrder);
        return taylor_demo_experiment(spec);
    }
    fail(ErrorCode::UnknownExperiment, name);
}

}  // namespace

const std::vector<ExperimentSchema>& experiment_schemas() {
    static const std::vector<ExperimentSchema> schemas = build_schemas();
    return schemas;
}

std::vector<std::string> experiment_names() {
    std::vector<std::string> out;
    for (const auto& s : experiment_schemas()) out.push_back(s.name);
    return out;
}

const ExperimentSchema& schema_for(const std::string& name) {
    for (const auto& s : experiment_schemas()) {
        if (s.name == name) return s;
    }
    std::string valid;
    for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
    fail(ErrorCode::UnknownExperiment, "unknown experiment '" + name + "'; valid experiments: " + valid);
}

std::string describe_experiments() {
    std::string out;
    for (const auto& s : experiment_schemas()) {
        out += s.name + ": " + s.summary + "\n";
        for (const auto& p : s.params) {
            out += "    " + p.key + " (";
            switch (p.type) {
                case ParamType::real: out += "real"; break;
                case ParamType::integer: out += "integer"; break;
                case ParamType::real_list: out += "real list"; break;
                case ParamType::choice: {
                    std::string c;
                    for (const auto& x : p.choices) c += (c.empty() ? "" : "|") + x;
                    out += c;
                    break;
                }
            }
            out += p.default_value ? ", default " + *p.default_value : ", required";
            out += "): " + p.doc + "\n";
        }
    }
    out += "reserved keys (any experiment): seed, format (csv|json), out_dir\n";
    return out;
}

ExperimentRecord run_experiment(const std::string& name, const ParamMap& params, std::uint64_t seed) {
    const auto& schema = schema_for(name);
    const Params p(schema, params);
    auto rec = dispatch(name, p, seed);
    rec.seed = seed;
    rec.params_echo = p.echo();
    return rec;
}

RunResult run(const ExperimentConfig& config) {
    RunResult out{run_experiment(config.name, config.params, config.seed), {}};
    out.path = write_record(out.record, config.out_dir, config.format);
    return out;
}

}  // namespace modlab::lab
