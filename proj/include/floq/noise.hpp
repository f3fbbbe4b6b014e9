#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "floq/rng.hpp"
#include "floq/trajectory.hpp"

namespace floq {

// Raw (unmitigated) measurement estimates with per-entry standard errors,
// produced by the finite-shot / global-depolarizing emulator.
struct NoisyRecord {
    TrajectoryRecord record;  // x + stderr filled, no y
    double q = 1.0;           // per-cycle attenuation of traceless observables
    long shots = 0;
    std::uint64_t seed = 0;
};

// Per-step normalization factors f(t_n) estimated from a reference circuit.
struct MitigationFactors {
    std::vector<double> f;
    std::vector<double> stderr_f;
};

// Entry flags of a mitigated record.
enum MitigationFlag : int {
    kFlagOk = 0,
    kFlagUnreliableFactor = 1,  // f below the floor; value left undivided
    kFlagOutOfRange = 2,        // mitigated value left [-1, 1]
};

struct MitigatedRecord {
    TrajectoryRecord record;  // x + stderr
    std::vector<std::vector<int>> flags;
};

namespace detail {

// Exact binomial(shots, p) draw by counting threshold crossings of
// counter-based uniforms; cell (step, site) owns its own stream, so the
// loop order (and any parallelization over cells) cannot change results.
inline long binomial_count(std::uint64_t seed, int step, int site, long shots, double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return shots;
    const auto threshold =
        static_cast<std::uint64_t>(std::llround(p * 4294967296.0));  // p * 2^32
    long count = 0;
    long drawn = 0;
    std::uint32_t block = 0;
    while (drawn < shots) {
        const auto w = rng_words(seed, RngStream::kMeasurement, static_cast<std::uint32_t>(site),
                                 static_cast<std::uint32_t>(step), block++);
        for (int k = 0; k < 4 && drawn < shots; ++k, ++drawn) {
            if (w[k] < threshold) ++count;
        }
    }
    return count;
}

}  // namespace detail

// Emulate X-basis readout of an ideal trajectory: the step-n means are
// attenuated by q^n (global depolarizing model) and estimated from `shots`
// projective measurements per circuit. Standard errors are the binomial
// plug-in estimate, floored at 1/shots so a unanimous sample does not
// report zero uncertainty.
inline NoisyRecord emulate_measurement(const TrajectoryRecord& ideal, double q, long shots,
                                       std::uint64_t seed) {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("attenuation q must be in (0, 1]");
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    NoisyRecord out;
    out.q = q;
    out.shots = shots;
    out.seed = seed;
    const int steps = ideal.num_steps();
    const int sites = ideal.num_sites;
    out.record.num_sites = sites;
    out.record.x.assign(steps, std::vector<double>(sites, 0.0));
    out.record.stddev.assign(steps, std::vector<double>(sites, 0.0));
    for (int n = 0; n < steps; ++n) {
        const double atten = std::pow(q, n);
#pragma omp parallel for schedule(static)
        for (int j = 0; j < sites; ++j) {
            const double mean = std::clamp(atten * ideal.x[n][j], -1.0, 1.0);
            const long k = detail::binomial_count(seed, n, j, shots, 0.5 * (1.0 + mean));
            const double est = 2.0 * static_cast<double>(k) / static_cast<double>(shots) - 1.0;
            out.record.x[n][j] = est;
            out.record.stddev[n][j] =
                std::max(std::sqrt(std::max(0.0, 1.0 - est * est) / static_cast<double>(shots)),
                         1.0 / static_cast<double>(shots));
        }
    }
    return out;
}

// f(t_n) = |mean over j in M of the raw reference <X_j(t_n)>_0|. The
// reference run must use phi_j = 0 and theta_z = 0 with the same interaction
// angles and graph, so its ideal spatial mean is exactly 1 at every step.
// The quoted standard error treats per-qubit shot noise as independent.
inline MitigationFactors reference_factor(const NoisyRecord& reference, const std::vector<int>& subset) {
    if (subset.empty()) throw std::invalid_argument("reference subset M must be nonempty");
    MitigationFactors out;
    const int steps = reference.record.num_steps();
    out.f.resize(steps);
    out.stderr_f.resize(steps);
    for (int n = 0; n < steps; ++n) {
        double mean = 0.0;
        double var = 0.0;
        for (int j : subset) {
            mean += reference.record.x[n].at(j);
            const double se = reference.record.stddev[n].at(j);
            var += se * se;
        }
        mean /= static_cast<double>(subset.size());
        out.f[n] = std::fabs(mean);
        out.stderr_f[n] = std::sqrt(var) / static_cast<double>(subset.size());
    }
    return out;
}

// Normalize raw estimates by f(t_n), propagating uncertainties to first
// order. Where |x| < sigma_x the textbook ratio formula degenerates and
// sigma = sigma_x / f is used instead. Steps with f below `f_floor` are not
// divided (division would just amplify noise) and flagged; mitigated values
// outside [-1, 1] are kept but flagged.
inline MitigatedRecord mitigate(const NoisyRecord& raw, const MitigationFactors& factors,
                                double f_floor = 0.02) {
    const int steps = raw.record.num_steps();
    if (static_cast<int>(factors.f.size()) != steps) {
        throw std::invalid_argument("mitigation factors and record disagree on step count");
    }
    MitigatedRecord out;
    const int sites = raw.record.num_sites;
    out.record.num_sites = sites;
    out.record.x.assign(steps, std::vector<double>(sites, 0.0));
    out.record.stddev.assign(steps, std::vector<double>(sites, 0.0));
    out.flags.assign(steps, std::vector<int>(sites, kFlagOk));
    for (int n = 0; n < steps; ++n) {
        const double f = factors.f[n];
        const double sf = factors.stderr_f[n];
        for (int j = 0; j < sites; ++j) {
            const double x = raw.record.x[n][j];
            const double sx = raw.record.stddev[n][j];
            if (f < f_floor) {
                out.record.x[n][j] = x;
                out.record.stddev[n][j] = sx;
                out.flags[n][j] |= kFlagUnreliableFactor;
                continue;
            }
            const double mitigated = x / f;
            double sigma;
            if (std::fabs(x) < sx) {
                sigma = sx / f;
            } else {
                const double rel_x = sx / x;
                const double rel_f = sf / f;
                sigma = std::fabs(mitigated) * std::sqrt(rel_x * rel_x + rel_f * rel_f);
            }
            out.record.x[n][j] = mitigated;
            out.record.stddev[n][j] = sigma;
            if (std::fabs(mitigated) > 1.0) out.flags[n][j] |= kFlagOutOfRange;
        }
    }
    return out;
}

// CSV with header "n,j,x,stderr,flag" shared by noisy and mitigated records.
inline void write_noisy_csv(std::ostream& out, const TrajectoryRecord& rec,
                            const std::vector<std::vector<int>>* flags = nullptr) {
    out << "n,j,x,stderr,flag\n";
    for (int n = 0; n < rec.num_steps(); ++n) {
        for (int j = 0; j < rec.num_sites; ++j) {
            const int flag = flags != nullptr ? (*flags)[n][j] : 0;
            out << n << ',' << j << ',' << detail::format_double(rec.x[n][j]) << ','
                << detail::format_double(rec.has_stderr() ? rec.stddev[n][j] : 0.0) << ',' << flag
                << '\n';
        }
    }
}

inline void write_factors_csv(std::ostream& out, const MitigationFactors& factors) {
    out << "n,f,stderr\n";
    for (std::size_t n = 0; n < factors.f.size(); ++n) {
        out << n << ',' << detail::format_double(factors.f[n]) << ','
            << detail::format_double(factors.stderr_f[n]) << '\n';
    }
}

// Ideal reference trajectory for the mitigation pipeline: under the
// reference premise (ferromagnetic initial state, theta_z = 0, isotropic
// interactions) every <X_j(t_n)> is exactly 1.
inline TrajectoryRecord unit_reference_record(int steps, int sites) {
    TrajectoryRecord rec;
    rec.num_sites = sites;
    rec.x.assign(steps, std::vector<double>(sites, 1.0));
    return rec;
}

}  // namespace floq
