#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "floq/lattice.hpp"
#include "floq/trajectory.hpp"

namespace floq {

inline constexpr double kPhaseTolerance = 1e-12;

struct SpatialStats {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
};

namespace detail {

inline void check_subset(const TrajectoryRecord& rec, const std::vector<int>& subset) {
    if (subset.empty()) throw std::invalid_argument("site subset M must be nonempty");
    for (int j : subset) {
        if (j < 0 || j >= rec.num_sites) {
            throw std::invalid_argument("subset site " + std::to_string(j) + " out of range");
        }
    }
}

inline SpatialStats mean_std(const std::vector<double>& values) {
    SpatialStats s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    double acc = 0.0;
    for (double v : values) acc += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(values.size()));
    return s;
}

}  // namespace detail

// Spatial mean and population standard deviation of <X_j> over j in M at step n.
inline SpatialStats spatial_stats(const TrajectoryRecord& rec, const std::vector<int>& subset, int n) {
    detail::check_subset(rec, subset);
    std::vector<double> vals;
    vals.reserve(subset.size());
    for (int j : subset) vals.push_back(rec.x.at(n).at(j));
    return detail::mean_std(vals);
}

// Complex local magnetization w_j = <X_j> + i <Y_j> = R e^{i Theta}.
struct PolarSample {
    double r = 0.0;
    double theta = 0.0;
    bool defined = false;  // false when R vanishes (phase is meaningless)
};

inline PolarSample complex_mag(const TrajectoryRecord& rec, int n, int j) {
    if (!rec.has_y()) throw std::invalid_argument("complex magnetization requires <Y_j> data");
    const double x = rec.x.at(n).at(j);
    const double y = rec.y.at(n).at(j);
    PolarSample s;
    s.r = std::hypot(x, y);
    if (s.r > kPhaseTolerance) {
        s.theta = std::atan2(y, x);
        s.defined = true;
    }
    return s;
}

// Kuramoto order parameter |mean of e^{i theta}| of an explicit phase list.
inline double kuramoto(const std::vector<double>& phases) {
    if (phases.empty()) throw std::invalid_argument("kuramoto order parameter of no phases");
    std::complex<double> acc(0, 0);
    for (double t : phases) acc += std::polar(1.0, t);
    return std::abs(acc) / static_cast<double>(phases.size());
}

// Per-step instantaneous amplitude/phase of one site's <X_j> time series,
// via the discrete analytic signal: remove the temporal mean, zero the
// negative-frequency half of the spectrum, double the positive half, keep
// DC and (for even length) Nyquist. No zero-padding or windowing; the first
// and last two samples are flagged as edge-affected.
struct PhasePoint {
    double r = 0.0;
    double theta = 0.0;
    bool defined = false;
    bool edge = false;
};

inline std::vector<PhasePoint> hilbert_phase(const std::vector<double>& series) {
    const int n = static_cast<int>(series.size());
    if (n < 8) throw std::invalid_argument("hilbert_phase needs a series of length >= 8");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    std::vector<std::complex<double>> spectrum(n, {0.0, 0.0});
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (int k = 0; k < n; ++k) {
        std::complex<double> acc(0, 0);
        for (int t = 0; t < n; ++t) {
            acc += (series[t] - mean) * std::polar(1.0, -two_pi * k * t / n);
        }
        spectrum[k] = acc;
    }
    for (int k = 0; k < n; ++k) {
        const bool dc = (k == 0);
        const bool nyquist = (n % 2 == 0) && (k == n / 2);
        if (dc || nyquist) continue;
        if (k < (n + 1) / 2) {
            spectrum[k] *= 2.0;
        } else {
            spectrum[k] = 0.0;
        }
    }
    double scale = 0.0;
    for (double v : series) scale = std::max(scale, std::fabs(v));
    const double tol = kPhaseTolerance * (1.0 + scale);
    std::vector<PhasePoint> out(n);
    for (int t = 0; t < n; ++t) {
        std::complex<double> acc(0, 0);
        for (int k = 0; k < n; ++k) {
            acc += spectrum[k] * std::polar(1.0, two_pi * k * t / n);
        }
        acc /= static_cast<double>(n);
        PhasePoint p;
        p.r = std::abs(acc);
        p.edge = (t < 2) || (t >= n - 2);
        if (p.r > tol) {
            p.theta = std::arg(acc);
            p.defined = true;
        }
        out[t] = p;
    }
    return out;
}

// Per-step order parameter with bookkeeping of excluded (undefined-phase)
// sites. Steps where no site has a defined phase yield NaN.
struct SyncSeries {
    std::vector<double> kappa;
    std::vector<int> excluded;
};

inline SyncSeries exact_kappa(const TrajectoryRecord& rec, const std::vector<int>& subset) {
    detail::check_subset(rec, subset);
    if (!rec.has_y()) throw std::invalid_argument("exact kappa requires <Y_j> data");
    SyncSeries out;
    for (int n = 0; n < rec.num_steps(); ++n) {
        std::complex<double> acc(0, 0);
        int count = 0, skipped = 0;
        for (int j : subset) {
            const PolarSample s = complex_mag(rec, n, j);
            if (s.defined) {
                acc += std::polar(1.0, s.theta);
                ++count;
            } else {
                ++skipped;
            }
        }
        out.kappa.push_back(count > 0 ? std::abs(acc) / count
                                      : std::numeric_limits<double>::quiet_NaN());
        out.excluded.push_back(skipped);
    }
    return out;
}

// Hardware-style proxy: phases recovered from the <X_j> series alone.
inline SyncSeries proxy_kappa(const TrajectoryRecord& rec, const std::vector<int>& subset) {
    detail::check_subset(rec, subset);
    const int steps = rec.num_steps();
    std::vector<std::vector<PhasePoint>> phases;
    phases.reserve(subset.size());
    for (int j : subset) {
        std::vector<double> series(steps);
        for (int n = 0; n < steps; ++n) series[n] = rec.x[n][j];
        phases.push_back(hilbert_phase(series));
    }
    SyncSeries out;
    for (int n = 0; n < steps; ++n) {
        std::complex<double> acc(0, 0);
        int count = 0, skipped = 0;
        for (const auto& site : phases) {
            if (site[n].defined) {
                acc += std::polar(1.0, site[n].theta);
                ++count;
            } else {
                ++skipped;
            }
        }
        out.kappa.push_back(count > 0 ? std::abs(acc) / count
                                      : std::numeric_limits<double>::quiet_NaN());
        out.excluded.push_back(skipped);
    }
    return out;
}

// Spatial mean/std of the oscillation amplitude R_j at step n.
inline SpatialStats amplitude_stats(const TrajectoryRecord& rec, const std::vector<int>& subset, int n) {
    detail::check_subset(rec, subset);
    if (!rec.has_y()) throw std::invalid_argument("amplitude stats require <Y_j> data");
    std::vector<double> vals;
    vals.reserve(subset.size());
    for (int j : subset) vals.push_back(complex_mag(rec, n, j).r);
    return detail::mean_std(vals);
}

enum class PhaseVariant { Exact, Proxy };

// Inclusive stroboscopic step window [first, last].
struct StepWindow {
    int first = 0;
    int last = 0;
};

// Time-averaged local order parameter map: for each site j, the Kuramoto
// order parameter over the radius-K graph neighborhood of j at each step in
// the window, averaged over the window.
inline std::vector<double> local_kappa_map(const TrajectoryRecord& rec, const LatticeGraph& graph,
                                           int radius, StepWindow window, PhaseVariant variant) {
    if (graph.num_sites != rec.num_sites) {
        throw std::invalid_argument("graph and record disagree on the number of sites");
    }
    if (window.first > window.last || window.first < 0 || window.last >= rec.num_steps()) {
        throw std::invalid_argument("averaging window is empty or out of range");
    }
    const int steps = rec.num_steps();
    // Per-site phase table for the requested variant.
    std::vector<std::vector<PhasePoint>> phases(rec.num_sites);
    if (variant == PhaseVariant::Proxy) {
        for (int j = 0; j < rec.num_sites; ++j) {
            std::vector<double> series(steps);
            for (int n = 0; n < steps; ++n) series[n] = rec.x[n][j];
            phases[j] = hilbert_phase(series);
        }
    } else {
        if (!rec.has_y()) throw std::invalid_argument("exact local map requires <Y_j> data");
        for (int j = 0; j < rec.num_sites; ++j) {
            phases[j].resize(steps);
            for (int n = 0; n < steps; ++n) {
                const PolarSample s = complex_mag(rec, n, j);
                phases[j][n] = {s.r, s.theta, s.defined, false};
            }
        }
    }
    std::vector<double> map(rec.num_sites, std::numeric_limits<double>::quiet_NaN());
    for (int j = 0; j < rec.num_sites; ++j) {
        const auto members = neighborhood(graph, j, radius).members;
        double acc = 0.0;
        int used_steps = 0;
        for (int n = window.first; n <= window.last; ++n) {
            std::complex<double> sum(0, 0);
            int count = 0;
            for (int m : members) {
                if (phases[m][n].defined) {
                    sum += std::polar(1.0, phases[m][n].theta);
                    ++count;
                }
            }
            if (count > 0) {
                acc += std::abs(sum) / count;
                ++used_steps;
            }
        }
        if (used_steps > 0) map[j] = acc / used_steps;
    }
    return map;
}

// Bundle of all per-step synchronization observables for one site subset.
struct SyncReport {
    std::vector<int> subset;
    std::vector<double> kappa;        // empty when the record has no Y data
    std::vector<double> kappa_tilde;  // empty when the record is too short
    std::vector<double> xbar, x_std;
    std::vector<double> r_avg, r_std;  // empty when the record has no Y data
};

inline SyncReport build_sync_report(const TrajectoryRecord& rec, const std::vector<int>& subset) {
    detail::check_subset(rec, subset);
    SyncReport report;
    report.subset = subset;
    const int steps = rec.num_steps();
    for (int n = 0; n < steps; ++n) {
        const SpatialStats s = spatial_stats(rec, subset, n);
        report.xbar.push_back(s.mean);
        report.x_std.push_back(s.stddev);
    }
    if (rec.has_y()) {
        report.kappa = exact_kappa(rec, subset).kappa;
        for (int n = 0; n < steps; ++n) {
            const SpatialStats s = amplitude_stats(rec, subset, n);
            report.r_avg.push_back(s.mean);
            report.r_std.push_back(s.stddev);
        }
    }
    if (steps >= 8) {
        report.kappa_tilde = proxy_kappa(rec, subset).kappa;
    }
    return report;
}

inline void write_sync_report_csv(std::ostream& out, const SyncReport& report) {
    out << "n,kappa,kappa_tilde,xbar,x_std,r_avg,r_std\n";
    const int steps = static_cast<int>(report.xbar.size());
    auto field = [&](const std::vector<double>& v, int n) -> std::string {
        if (n >= static_cast<int>(v.size())) return "";
        return detail::format_double(v[n]);
    };
    for (int n = 0; n < steps; ++n) {
        out << n << ',' << field(report.kappa, n) << ',' << field(report.kappa_tilde, n) << ','
            << field(report.xbar, n) << ',' << field(report.x_std, n) << ','
            << field(report.r_avg, n) << ',' << field(report.r_std, n) << '\n';
    }
}

inline void write_local_map_csv(std::ostream& out, const LatticeGraph& graph,
                                const std::vector<double>& map) {
    out << "j,x_coord,y_coord,kappa_local\n";
    for (int j = 0; j < graph.num_sites; ++j) {
        out << j << ',' << detail::format_double(graph.coords[j].first) << ','
            << detail::format_double(graph.coords[j].second) << ','
            << detail::format_double(map[j]) << '\n';
    }
}

}  // namespace floq
