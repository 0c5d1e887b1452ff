#pragma once

// Monte Carlo ground truth: samples deployments (hardcore renewal, PPP,
// lattice with random phase), applies Rayleigh fading, evaluates the
// interference functional at the origin and estimates moments with batch
// standard errors.  Also produces the lane-superposition gap CDF and the
// pair-density histogram used as oracles for the analytic modules.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "interference/lattice.hpp"
#include "interference/rng.hpp"
#include "interference/scenario.hpp"

namespace interference::sim {

enum class DeployModel { Hardcore, PPP, Lattice };

struct SimConfig {
    double half_length = 20000.0; // the 40 km segment
    std::size_t runs = 100000;
    std::uint64_t seed = 1;
    double burn_in = 0.0; // 0: derive max(50/mu, 50c), clamped to half_length/2
    DeployModel model = DeployModel::Hardcore;
};

struct SimEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t runs = 0;
    std::uint64_t seed = 0;
};

struct Deployment {
    std::vector<double> positions; // strictly increasing
};

inline double effective_burn_in(double mu, double c, const SimConfig& cfg) {
    if (cfg.burn_in > 0.0) return cfg.burn_in;
    const double b = std::max(50.0 / mu, 50.0 * c);
    return std::min(b, 0.5 * cfg.half_length);
}

inline void validate_config(const SimConfig& cfg, double r0, double burn) {
    if (cfg.runs < 1) throw std::invalid_argument("SimConfig: runs must be >= 1");
    if (!(cfg.half_length > r0 + burn))
        throw std::invalid_argument("SimConfig: half_length must exceed r0 + burn_in");
}

// Renewal sequence with headway c + Exp(mu), started one burn-in margin
// before the window with a uniform phase inside the first headway.
inline void sample_hardcore_into(const ScenarioParams& p, const SimConfig& cfg, Rng& rng,
                                 std::vector<double>& out) {
    out.clear();
    const double L = cfg.half_length;
    const double burn = effective_burn_in(p.mu, p.c, cfg);
    double x = -(L + burn) + rng.uniform() * (p.c + rng.exponential() / p.mu);
    while (x <= L) {
        if (x >= -L) out.push_back(x);
        x += p.c + rng.exponential() / p.mu;
    }
}

inline Deployment sample_hardcore(const ScenarioParams& p, const SimConfig& cfg, Rng& rng) {
    Deployment d;
    sample_hardcore_into(p, cfg, rng, d.positions);
    return d;
}

// Lattice with one global uniform phase z in (0, c) beyond the positive cell
// border; the negative-side offset z' follows from the epsilon geometry.
inline void sample_lattice_into(const lattice::LatticeParams& p, const SimConfig& cfg,
                                Rng& rng, std::vector<double>& out) {
    out.clear();
    const double L = cfg.half_length;
    const double z = rng.uniform() * p.c;
    const double zp = (z <= (1.0 - p.epsilon) * p.c)
                          ? p.c * (1.0 - p.epsilon) - z
                          : p.c * (2.0 - p.epsilon) - z;
    const double neg0 = p.r0 + zp;
    const auto kneg = static_cast<long>(std::floor((L - neg0) / p.c));
    for (long k = kneg; k >= 0; --k) out.push_back(-(neg0 + k * p.c));
    for (double x = p.r0 + z; x <= L; x += p.c) out.push_back(x);
}

inline Deployment sample_lattice(const lattice::LatticeParams& p, const SimConfig& cfg, Rng& rng) {
    Deployment d;
    sample_lattice_into(p, cfg, rng, d.positions);
    return d;
}

// I = sum_k h_k g(x_k); fresh i.i.d. unit-mean exponential gains per call
// under Rayleigh fading.
inline double interference_realization(const std::vector<double>& positions,
                                       const Pathloss& g, FadingModel fading, Rng& rng) {
    double sum = 0.0;
    if (fading == FadingModel::RayleighUnitMean) {
        for (double x : positions) {
            const double h = rng.exponential();
            const double gv = g(x);
            if (gv != 0.0) sum += h * gv;
        }
    } else {
        for (double x : positions) sum += g(x);
    }
    return sum;
}

struct SimMoments {
    SimEstimate mean, m2, m3;
    double variance = 0.0;
    double std_dev = 0.0;
    double std_dev_se = 0.0;
    double coeff_variation = 0.0;
    double coeff_variation_se = 0.0;
    double skewness = 0.0;
    double skewness_se = 0.0;
    std::size_t runs = 0;
    std::uint64_t seed = 0;
};

namespace detail {

struct Accum {
    double s = 0.0, comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
};

struct BatchStats {
    double mean = 0.0, m2 = 0.0, m3 = 0.0;
    double std_dev = 0.0, cov = 0.0, skew = 0.0;
};

inline BatchStats stats_from_sums(double s1, double s2, double s3, double n) {
    BatchStats b;
    b.mean = s1 / n;
    b.m2 = s2 / n;
    b.m3 = s3 / n;
    const double m2c = std::max(0.0, b.m2 - b.mean * b.mean);
    const double m3c = b.m3 - 3.0 * b.mean * b.m2 + 2.0 * b.mean * b.mean * b.mean;
    b.std_dev = std::sqrt(m2c);
    b.cov = (b.mean > 0.0) ? b.std_dev / b.mean : 0.0;
    b.skew = (m2c > 0.0) ? m3c / std::pow(m2c, 1.5) : 0.0;
    return b;
}

template <class Sampler>
SimMoments run_moment_estimation(const Sampler& sample, const Pathloss& g,
                                 FadingModel fading, const SimConfig& cfg) {
    if (cfg.runs < 100)
        throw std::invalid_argument("estimate_moments: requires runs >= 100");
    const std::size_t n = cfg.runs;
    const std::size_t nb = std::min<std::size_t>(100, n);

    Accum t1, t2, t3;
    std::vector<double> b1(nb, 0.0), b2(nb, 0.0), b3(nb, 0.0), bn(nb, 0.0);
    std::vector<double> positions;
    for (std::size_t run = 0; run < n; ++run) {
        Rng rng(cfg.seed, run);
        sample(rng, positions);
        const double I = interference_realization(positions, g, fading, rng);
        const double I2 = I * I;
        t1.add(I);
        t2.add(I2);
        t3.add(I2 * I);
        const std::size_t b = run * nb / n;
        b1[b] += I;
        b2[b] += I2;
        b3[b] += I2 * I;
        bn[b] += 1.0;
    }

    SimMoments out;
    out.runs = n;
    out.seed = cfg.seed;
    const auto full = stats_from_sums(t1.s, t2.s, t3.s, static_cast<double>(n));
    out.mean = {full.mean, 0.0, n, cfg.seed};
    out.m2 = {full.m2, 0.0, n, cfg.seed};
    out.m3 = {full.m3, 0.0, n, cfg.seed};
    const double nn = static_cast<double>(n);
    out.variance = (t2.s - nn * full.mean * full.mean) / (nn - 1.0);
    out.std_dev = full.std_dev;
    out.coeff_variation = full.cov;
    // adjusted Fisher-Pearson standardized third moment
    out.skewness = std::sqrt(nn * (nn - 1.0)) / (nn - 2.0) * full.skew;

    // batch-means standard errors for the raw moments and the derived stats
    double vm = 0.0, v2 = 0.0, v3 = 0.0, vs = 0.0, vc = 0.0, vk = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        const auto s = stats_from_sums(b1[b], b2[b], b3[b], bn[b]);
        vm += (s.mean - full.mean) * (s.mean - full.mean);
        v2 += (s.m2 - full.m2) * (s.m2 - full.m2);
        v3 += (s.m3 - full.m3) * (s.m3 - full.m3);
        vs += (s.std_dev - full.std_dev) * (s.std_dev - full.std_dev);
        vc += (s.cov - full.cov) * (s.cov - full.cov);
        vk += (s.skew - full.skew) * (s.skew - full.skew);
    }
    const double norm = (nb > 1) ? 1.0 / (static_cast<double>(nb) * (nb - 1.0)) : 0.0;
    out.mean.std_error = std::sqrt(vm * norm);
    out.m2.std_error = std::sqrt(v2 * norm);
    out.m3.std_error = std::sqrt(v3 * norm);
    out.std_dev_se = std::sqrt(vs * norm);
    out.coeff_variation_se = std::sqrt(vc * norm);
    out.skewness_se = std::sqrt(vk * norm);
    return out;
}

} // namespace detail

inline SimMoments estimate_moments(const ScenarioParams& p, const SimConfig& cfg,
                                   FadingModel fading = FadingModel::RayleighUnitMean) {
    ScenarioParams eff = p;
    if (cfg.model == DeployModel::PPP)
        eff = scenario_from_lambda(p.lambda, 0.0, p.r0, p.eta);
    else if (cfg.model == DeployModel::Lattice)
        throw std::invalid_argument("estimate_moments: use the LatticeParams overload");
    validate_config(cfg, eff.r0, effective_burn_in(eff.mu, eff.c, cfg));
    const Pathloss g{eff.r0, eff.eta};
    auto sample = [&](Rng& rng, std::vector<double>& pos) {
        sample_hardcore_into(eff, cfg, rng, pos);
    };
    return detail::run_moment_estimation(sample, g, fading, cfg);
}

inline SimMoments estimate_moments(const lattice::LatticeParams& p, const SimConfig& cfg,
                                   FadingModel fading = FadingModel::RayleighUnitMean) {
    const Pathloss g{p.r0, p.eta};
    auto sample = [&](Rng& rng, std::vector<double>& pos) {
        sample_lattice_into(p, cfg, rng, pos);
    };
    return detail::run_moment_estimation(sample, g, fading, cfg);
}

// Empirical CDF of consecutive gaps after superposing n_lanes independent
// hardcore deployments on one line, against the exponential reference
// F(x) = 1 - e^{-lambda n x}.
struct LaneCdf {
    std::vector<double> gaps; // sorted
    double rate = 0.0;        // lambda * n_lanes
    double sup_norm = 0.0;

    double empirical(double x) const {
        const auto it = std::upper_bound(gaps.begin(), gaps.end(), x);
        return static_cast<double>(it - gaps.begin()) / static_cast<double>(gaps.size());
    }
    double reference(double x) const { return 1.0 - std::exp(-rate * x); }
};

inline LaneCdf lane_superposition_cdf(const ScenarioParams& p, int n_lanes,
                                      const SimConfig& cfg) {
    if (n_lanes < 1) throw std::invalid_argument("lane_superposition_cdf: n_lanes >= 1");
    validate_config(cfg, p.r0, effective_burn_in(p.mu, p.c, cfg));
    LaneCdf out;
    out.rate = p.lambda * n_lanes;
    std::vector<double> merged, lane;
    for (std::size_t run = 0; run < cfg.runs; ++run) {
        merged.clear();
        for (int l = 0; l < n_lanes; ++l) {
            Rng rng(cfg.seed, run * static_cast<std::size_t>(n_lanes) + l);
            sample_hardcore_into(p, cfg, rng, lane);
            merged.insert(merged.end(), lane.begin(), lane.end());
        }
        std::sort(merged.begin(), merged.end());
        for (std::size_t i = 1; i < merged.size(); ++i)
            out.gaps.push_back(merged[i] - merged[i - 1]);
    }
    std::sort(out.gaps.begin(), out.gaps.end());
    const double n = static_cast<double>(out.gaps.size());
    double d = 0.0;
    for (std::size_t i = 0; i < out.gaps.size(); ++i) {
        const double f = out.reference(out.gaps[i]);
        d = std::max(d, std::fabs((i + 1.0) / n - f));
        d = std::max(d, std::fabs(i / n - f));
    }
    out.sup_norm = d;
    return out;
}

// Ordered-pair density estimate: counts pairs per separation bin over the
// window, normalized so large separations approach lambda^2.
struct PcfHistogram {
    double bin_width = 0.0;
    std::vector<double> centers;
    std::vector<double> density;
    std::vector<double> std_error;
};

inline PcfHistogram pcf_histogram(const ScenarioParams& p, const SimConfig& cfg,
                                  double bin_width, double max_sep) {
    if (!(bin_width > 0.0)) throw std::invalid_argument("pcf_histogram: bin_width > 0");
    validate_config(cfg, p.r0, effective_burn_in(p.mu, p.c, cfg));
    const auto nbins = static_cast<std::size_t>(std::ceil(max_sep / bin_width));
    const std::size_t nb = std::min<std::size_t>(100, cfg.runs);

    std::vector<double> counts(nbins, 0.0);
    std::vector<std::vector<double>> batch(nb, std::vector<double>(nbins, 0.0));
    std::vector<double> bruns(nb, 0.0);
    std::vector<double> pos;
    for (std::size_t run = 0; run < cfg.runs; ++run) {
        Rng rng(cfg.seed, run);
        sample_hardcore_into(p, cfg, rng, pos);
        const std::size_t b = run * nb / cfg.runs;
        bruns[b] += 1.0;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            for (std::size_t j = i + 1; j < pos.size(); ++j) {
                const double d = pos[j] - pos[i];
                if (d >= max_sep) break;
                const auto bin = static_cast<std::size_t>(d / bin_width);
                counts[bin] += 1.0;
                batch[b][bin] += 1.0;
            }
        }
    }

    PcfHistogram h;
    h.bin_width = bin_width;
    h.centers.resize(nbins);
    h.density.resize(nbins);
    h.std_error.resize(nbins);
    const double runs = static_cast<double>(cfg.runs);
    for (std::size_t i = 0; i < nbins; ++i) {
        const double center = (i + 0.5) * bin_width;
        const double span = 2.0 * cfg.half_length - center; // ordered pairs at lag d
        h.centers[i] = center;
        h.density[i] = counts[i] / (runs * span * bin_width);
        double v = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            const double db = batch[b][i] / (bruns[b] * span * bin_width);
            v += (db - h.density[i]) * (db - h.density[i]);
        }
        const double norm = (nb > 1) ? 1.0 / (static_cast<double>(nb) * (nb - 1.0)) : 0.0;
        h.std_error[i] = std::sqrt(v * norm);
    }
    return h;
}

} // namespace interference::sim
