// interf: command-line front end for the interference toolkit.
//
// Subcommands: moments, closedform, lattice, simulate, figure <name>.
// Every output file gets a .manifest.json sidecar recording the command
// line, the effective configuration, the seed and per-row method tags.
// Exit codes: 0 success, 2 partial (some grid rows skipped), 1 hard failure.

#include <cmath>
#include <cstdint>
#include <ctime>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "interference/closedform.hpp"
#include "interference/lattice.hpp"
#include "interference/moments.hpp"
#include "interference/pcf.hpp"
#include "interference/report.hpp"
#include "interference/simulate.hpp"

namespace {

using interference::ScenarioParams;
using interference::report::fmt;
using nlohmann::json;
namespace cf = interference::closedform;
namespace la = interference::lattice;
namespace mo = interference::moments;
namespace re = interference::report;
namespace si = interference::sim;

constexpr const char* recipes_version = "1";

struct CommonOpts {
    std::uint64_t seed = 1;
    std::size_t runs = 100000;
    std::string out;
    std::string format = "csv";
    std::string config_path;
    double quad_rel_tol = 1e-9;
};

std::string iso_timestamp() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

interference::specfun::QuadratureSpec quad_spec(const CommonOpts& c) {
    interference::specfun::QuadratureSpec s;
    s.rel_tol = c.quad_rel_tol;
    return s;
}

// CSV cells are already locale-independent strings; for JSON output numeric
// cells become numbers again and empty cells become null.
json cell_to_json(const std::string& cell) {
    if (cell.empty()) return nullptr;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end && *end == '\0') return v;
    return cell;
}

void write_output(const CommonOpts& common, const std::string& path,
                  const re::CsvTable& table, const json& config,
                  const std::vector<std::string>& methods,
                  const std::string& command_line) {
    re::RunManifest manifest;
    manifest.command_line = command_line;
    manifest.config = config;
    manifest.seed = common.seed;
    manifest.timestamp = iso_timestamp();
    manifest.methods = methods;
    if (common.format == "json") {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < table.header.size(); ++i)
                obj[table.header[i]] = cell_to_json(row[i]);
            rows.push_back(std::move(obj));
        }
        re::write_file(path, rows.dump(2) + "\n");
        re::write_file(path + ".manifest.json", manifest.to_json().dump(2) + "\n");
    } else {
        re::write_output_with_manifest(path, table, manifest);
    }
    std::cout << "wrote " << path << " (" << table.rows.size() << " rows)\n";
}

int finish(std::size_t skipped) { return skipped > 0 ? 2 : 0; }

void report_skip(const std::string& what, const std::exception& e) {
    std::cerr << "skipping " << what << ": " << e.what() << "\n";
}

// ---------------------------------------------------------------- moments

struct MomentsOpts {
    std::vector<double> lambda{0.1};
    std::vector<double> mu; // used instead of lambda when non-empty
    std::vector<double> c{4.0};
    std::vector<double> r0{100.0};
    std::vector<double> eta{3.0};
    int m = 2;
    bool third = false;
};

std::string method_name(const mo::MomentSet& s) {
    if (s.method == mo::Method::Analytic) return "Analytic";
    return "Quadrature(m=" + std::to_string(s.truncation_m) + ")";
}

int run_moments(const CommonOpts& common, const MomentsOpts& o,
                const std::string& cmdline, const std::string& out) {
    const auto spec = quad_spec(common);
    re::CsvTable t;
    t.header = {"lambda", "mu",       "c",        "r0",
                "eta",    "mean",     "m2",       "m3",
                "variance", "std_dev", "cov",      "skewness",
                "method", "truncation_m", "accuracy_warning",
                "flag_lambda_r0_small", "flag_lambda_c_large", "flag_b_large"};
    std::vector<std::string> methods;
    std::size_t skipped = 0;

    const bool by_mu = !o.mu.empty();
    const auto& rates = by_mu ? o.mu : o.lambda;
    for (double rate : rates)
        for (double c : o.c)
            for (double r0 : o.r0)
                for (double eta : o.eta) {
                    std::ostringstream tag;
                    tag << (by_mu ? "mu=" : "lambda=") << rate << " c=" << c
                        << " r0=" << r0 << " eta=" << eta;
                    try {
                        auto p = by_mu
                                     ? interference::scenario_from_mu(rate, c, r0, eta)
                                     : interference::scenario_from_lambda(rate, c, r0, eta);
                        auto s = mo::moment_set(p, o.m, o.third, spec);
                        auto f = cf::validity(p);
                        t.add_row({fmt(p.lambda), fmt(p.mu), fmt(c), fmt(r0), fmt(eta),
                                   fmt(s.mean), fmt(s.m2),
                                   s.m3 ? fmt(*s.m3) : std::string{},
                                   fmt(s.variance), fmt(s.std_dev),
                                   fmt(s.coeff_variation),
                                   s.skewness ? fmt(*s.skewness) : std::string{},
                                   method_name(s), std::to_string(s.truncation_m),
                                   s.accuracy_warning ? "1" : "0",
                                   f.lambda_r0_small ? "1" : "0",
                                   f.lambda_c_large ? "1" : "0",
                                   f.b_large ? "1" : "0"});
                        methods.push_back(method_name(s));
                    } catch (const std::exception& e) {
                        report_skip(tag.str(), e);
                        ++skipped;
                    }
                }

    json cfg = {{"lambda", o.lambda}, {"mu", o.mu},   {"c", o.c},
                {"r0", o.r0},         {"eta", o.eta}, {"m", o.m},
                {"third", o.third},   {"quad_rel_tol", common.quad_rel_tol}};
    write_output(common, out, t, cfg, methods, cmdline);
    return finish(skipped);
}

// ------------------------------------------------------------- closedform

struct ClosedOpts {
    std::vector<double> lambda{0.1};
    std::vector<double> c{4.0};
    std::vector<double> r0{100.0};
    std::vector<double> eta{3.0};
    std::string variant = "all"; // all|closed|order2|order2_m3|exponential|cov
};

int run_closedform(const CommonOpts& common, const ClosedOpts& o,
                   const std::string& cmdline, const std::string& out) {
    const auto spec = quad_spec(common);
    const std::vector<std::string> value_cols = {
        "s_gt_2c",      "s_lt_2c_exact", "s_lt_2c_expansion", "s_lt_2c_small_lc",
        "var_closed",   "var_order2",    "var_order2_m3",     "var_exponential",
        "std_closed",   "std_order2",    "std_order2_m3",     "std_exponential",
        "cov_approx"};
    auto selected = [&](const std::string& col) {
        if (o.variant == "all") return true;
        if (o.variant == "closed")
            return col == "var_closed" || col == "std_closed" || col.rfind("s_", 0) == 0;
        if (o.variant == "order2") return col == "var_order2" || col == "std_order2";
        if (o.variant == "order2_m3")
            return col == "var_order2_m3" || col == "std_order2_m3";
        if (o.variant == "exponential")
            return col == "var_exponential" || col == "std_exponential";
        if (o.variant == "cov") return col == "cov_approx";
        throw std::invalid_argument("unknown variant: " + o.variant);
    };

    re::CsvTable t;
    t.header = {"lambda", "mu", "c", "r0", "eta", "b", "lambda_c"};
    for (const auto& col : value_cols)
        if (selected(col)) t.header.push_back(col);
    for (const auto& col : {"flag_lambda_r0_small", "flag_lambda_c_large", "flag_b_large"})
        t.header.push_back(col);

    std::vector<std::string> methods;
    std::size_t skipped = 0;
    auto sq = [](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; };
    for (double lambda : o.lambda)
        for (double c : o.c)
            for (double r0 : o.r0)
                for (double eta : o.eta) {
                    std::ostringstream tag;
                    tag << "lambda=" << lambda << " c=" << c << " r0=" << r0
                        << " eta=" << eta;
                    try {
                        auto p = interference::scenario_from_lambda(lambda, c, r0, eta);
                        auto r = cf::ratios(p);
                        auto f = cf::validity(p);
                        const double vc = cf::var_closed(p);
                        const double v2 = cf::var_order2(p);
                        const double v3 = cf::var_order2_m3(p);
                        const double ve = cf::var_exponential(p);
                        std::vector<std::pair<std::string, std::string>> vals = {
                            {"s_gt_2c", fmt(cf::s_gt_2c(p))},
                            {"s_lt_2c_exact", fmt(cf::s_lt_2c_exact(p, spec))},
                            {"s_lt_2c_expansion", fmt(cf::s_lt_2c_expansion(p))},
                            {"s_lt_2c_small_lc", fmt(cf::s_lt_2c_small_lc(p))},
                            {"var_closed", fmt(vc)},
                            {"var_order2", fmt(v2)},
                            {"var_order2_m3", fmt(v3)},
                            {"var_exponential", fmt(ve)},
                            {"std_closed", fmt(sq(vc))},
                            {"std_order2", fmt(sq(v2))},
                            {"std_order2_m3", fmt(sq(v3))},
                            {"std_exponential", fmt(sq(ve))},
                            {"cov_approx", fmt(cf::cov_approx(p))}};
                        std::vector<std::string> row = {fmt(p.lambda), fmt(p.mu),
                                                        fmt(c),        fmt(r0),
                                                        fmt(eta),      fmt(r.b),
                                                        fmt(r.lc)};
                        for (const auto& [col, val] : vals)
                            if (selected(col)) row.push_back(val);
                        row.push_back(f.lambda_r0_small ? "1" : "0");
                        row.push_back(f.lambda_c_large ? "1" : "0");
                        row.push_back(f.b_large ? "1" : "0");
                        t.add_row(std::move(row));
                        methods.push_back("ClosedForm");
                    } catch (const std::exception& e) {
                        report_skip(tag.str(), e);
                        ++skipped;
                    }
                }

    json cfg = {{"lambda", o.lambda}, {"c", o.c},   {"r0", o.r0},
                {"eta", o.eta},       {"variant", o.variant},
                {"quad_rel_tol", common.quad_rel_tol}};
    write_output(common, out, t, cfg, methods, cmdline);
    return finish(skipped);
}

// ---------------------------------------------------------------- lattice

struct LatticeOpts {
    std::vector<double> c{10.0};
    std::vector<double> r0{100.0};
    std::vector<double> eta{3.0};
};

int run_lattice(const CommonOpts& common, const LatticeOpts& o,
                const std::string& cmdline, const std::string& out) {
    const auto spec = quad_spec(common);
    re::CsvTable t;
    t.header = {"c",  "r0", "eta", "q",  "epsilon", "mean",
                "j1", "j2", "j3",  "variance", "std_dev",
                "variance_eps0", "variance_approx", "ppp_half_reference"};
    std::vector<std::string> methods;
    std::size_t skipped = 0;
    for (double c : o.c)
        for (double r0 : o.r0)
            for (double eta : o.eta) {
                std::ostringstream tag;
                tag << "c=" << c << " r0=" << r0 << " eta=" << eta;
                try {
                    auto p = la::make_lattice(c, r0, eta);
                    la::LatticeParams p0 = p;
                    p0.epsilon = 0.0;
                    const double var = la::lattice_variance(p, spec);
                    const double half_ppp =
                        2.0 * std::pow(r0, 1.0 - 2.0 * eta) / (c * (2.0 * eta - 1.0));
                    t.add_row({fmt(c), fmt(r0), fmt(eta), fmt(p.q), fmt(p.epsilon),
                               fmt(la::lattice_mean(p)), fmt(la::j1(p)),
                               fmt(la::j2(p, spec)), fmt(la::j3(p, spec)), fmt(var),
                               fmt(var > 0.0 ? std::sqrt(var) : 0.0),
                               fmt(la::lattice_variance(p0, spec)),
                               fmt(la::lattice_variance_approx(p)), fmt(half_ppp)});
                    methods.push_back("Quadrature");
                } catch (const std::exception& e) {
                    report_skip(tag.str(), e);
                    ++skipped;
                }
            }

    json cfg = {{"c", o.c}, {"r0", o.r0}, {"eta", o.eta},
                {"quad_rel_tol", common.quad_rel_tol}};
    write_output(common, out, t, cfg, methods, cmdline);
    return finish(skipped);
}

// --------------------------------------------------------------- simulate

struct SimOpts {
    std::string model = "hardcore"; // hardcore|ppp|lattice
    std::string op = "moments";     // moments|lanecdf|pcfhist
    std::string fading = "rayleigh";
    std::vector<double> lambda{0.1};
    std::vector<double> c{4.0};
    std::vector<double> r0{100.0};
    std::vector<double> eta{3.0};
    double half_length = 20000.0;
    double burn_in = 0.0;
    std::vector<int> lanes{4};
    double bin_width = 1.0;
    double max_sep = 40.0;
    double x_max = 200.0;
    double x_step = 0.5;
};

si::SimConfig sim_config(const CommonOpts& common, const SimOpts& o) {
    si::SimConfig cfg;
    cfg.half_length = o.half_length;
    cfg.runs = common.runs;
    cfg.seed = common.seed;
    cfg.burn_in = o.burn_in;
    if (o.model == "ppp") cfg.model = si::DeployModel::PPP;
    else if (o.model == "lattice") cfg.model = si::DeployModel::Lattice;
    else if (o.model == "hardcore") cfg.model = si::DeployModel::Hardcore;
    else throw std::invalid_argument("unknown model: " + o.model);
    return cfg;
}

interference::FadingModel fading_model(const std::string& name) {
    if (name == "rayleigh") return interference::FadingModel::RayleighUnitMean;
    if (name == "none") return interference::FadingModel::None;
    throw std::invalid_argument("unknown fading model: " + name);
}

int run_simulate_moments(const CommonOpts& common, const SimOpts& o,
                         const std::string& cmdline, const std::string& out) {
    re::CsvTable t;
    t.header = {"model", "lambda", "c", "r0", "eta", "runs", "seed", "half_length",
                "mean", "mean_se", "m2", "m2_se", "m3", "m3_se",
                "variance", "std_dev", "std_dev_se", "cov", "cov_se",
                "skewness", "skewness_se", "method"};
    std::vector<std::string> methods;
    std::size_t skipped = 0;
    const auto fade = fading_model(o.fading);
    for (double lambda : o.lambda)
        for (double c : o.c)
            for (double r0 : o.r0)
                for (double eta : o.eta) {
                    std::ostringstream tag;
                    tag << o.model << " lambda=" << lambda << " c=" << c
                        << " r0=" << r0 << " eta=" << eta;
                    try {
                        auto cfg = sim_config(common, o);
                        si::SimMoments r;
                        double lam = lambda;
                        if (o.model == "lattice") {
                            auto p = la::make_lattice(c, r0, eta);
                            r = si::estimate_moments(p, cfg, fade);
                            lam = 1.0 / c;
                        } else {
                            auto p = interference::scenario_from_lambda(lambda, c, r0, eta);
                            r = si::estimate_moments(p, cfg, fade);
                        }
                        t.add_row({o.model, fmt(lam),
                                   fmt(o.model == "ppp" ? 0.0 : c), fmt(r0), fmt(eta),
                                   std::to_string(r.runs), std::to_string(r.seed),
                                   fmt(cfg.half_length),
                                   fmt(r.mean.value), fmt(r.mean.std_error),
                                   fmt(r.m2.value), fmt(r.m2.std_error),
                                   fmt(r.m3.value), fmt(r.m3.std_error),
                                   fmt(r.variance), fmt(r.std_dev), fmt(r.std_dev_se),
                                   fmt(r.coeff_variation), fmt(r.coeff_variation_se),
                                   fmt(r.skewness), fmt(r.skewness_se), "MonteCarlo"});
                        methods.push_back("MonteCarlo");
                    } catch (const std::exception& e) {
                        report_skip(tag.str(), e);
                        ++skipped;
                    }
                }
    json cfg = {{"model", o.model},   {"lambda", o.lambda}, {"c", o.c},
                {"r0", o.r0},         {"eta", o.eta},       {"runs", common.runs},
                {"seed", common.seed}, {"half_length", o.half_length},
                {"burn_in", o.burn_in}, {"fading", o.fading}};
    write_output(common, out, t, cfg, methods, cmdline);
    return finish(skipped);
}

int run_simulate_lanecdf(const CommonOpts& common, const SimOpts& o,
                         const std::string& cmdline, const std::string& out) {
    re::CsvTable t;
    t.header = {"lambda", "c", "n_lanes", "x", "empirical", "reference", "sup_norm"};
    std::vector<std::string> methods;
    std::size_t skipped = 0;
    for (double lambda : o.lambda)
        for (double c : o.c)
            for (int lanes : o.lanes) {
                std::ostringstream tag;
                tag << "lanecdf lambda=" << lambda << " c=" << c << " lanes=" << lanes;
                try {
                    auto p = interference::scenario_from_lambda(lambda, c, o.r0.at(0),
                                                                o.eta.at(0));
                    auto cfg = sim_config(common, o);
                    auto cdf = si::lane_superposition_cdf(p, lanes, cfg);
                    for (double x = 0.0; x <= o.x_max + 1e-12; x += o.x_step)
                        t.add_row({fmt(lambda), fmt(c), std::to_string(lanes), fmt(x),
                                   fmt(cdf.empirical(x)), fmt(cdf.reference(x)),
                                   fmt(cdf.sup_norm)});
                    methods.push_back("MonteCarlo");
                } catch (const std::exception& e) {
                    report_skip(tag.str(), e);
                    ++skipped;
                }
            }
    json cfg = {{"lambda", o.lambda}, {"c", o.c},       {"lanes", o.lanes},
                {"runs", common.runs}, {"seed", common.seed},
                {"half_length", o.half_length}, {"x_max", o.x_max},
                {"x_step", o.x_step}};
    write_output(common, out, t, cfg, methods, cmdline);
    return finish(skipped);
}

int run_simulate_pcfhist(const CommonOpts& common, const SimOpts& o,
                         const std::string& cmdline, const std::string& out) {
    re::CsvTable t;
    t.header = {"lambda", "c", "separation", "density", "std_error", "pcf_analytic"};
    std::vector<std::string> methods;
    std::size_t skipped = 0;
    for (double lambda : o.lambda)
        for (double c : o.c) {
            std::ostringstream tag;
            tag << "pcfhist lambda=" << lambda << " c=" << c;
            try {
                auto p = interference::scenario_from_lambda(lambda, c, o.r0.at(0),
                                                            o.eta.at(0));
                auto cfg = sim_config(common, o);
                auto h = si::pcf_histogram(p, cfg, o.bin_width, o.max_sep);
                for (std::size_t i = 0; i < h.centers.size(); ++i)
                    t.add_row({fmt(lambda), fmt(c), fmt(h.centers[i]),
                               fmt(h.density[i]), fmt(h.std_error[i]),
                               fmt(interference::pcf::pcf(h.centers[i], p).value)});
                methods.push_back("MonteCarlo");
            } catch (const std::exception& e) {
                report_skip(tag.str(), e);
                ++skipped;
            }
        }
    json cfg = {{"lambda", o.lambda}, {"c", o.c},
                {"bin_width", o.bin_width}, {"max_sep", o.max_sep},
                {"runs", common.runs}, {"seed", common.seed},
                {"half_length", o.half_length}};
    write_output(common, out, t, cfg, methods, cmdline);
    return finish(skipped);
}

int run_simulate(const CommonOpts& common, const SimOpts& o,
                 const std::string& cmdline, const std::string& out) {
    if (o.op == "moments") return run_simulate_moments(common, o, cmdline, out);
    if (o.op == "lanecdf") return run_simulate_lanecdf(common, o, cmdline, out);
    if (o.op == "pcfhist") return run_simulate_pcfhist(common, o, cmdline, out);
    throw std::invalid_argument("unknown simulate op: " + o.op);
}

// ---------------------------------------------------------------- figures

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i)
        v[i] = std::exp(a + (b - a) * static_cast<double>(i) / (n - 1));
    return v;
}

// Figure recipes are versioned presets compiled into the binary; any field
// can still be overridden through the regular flags.
int run_figure(const CommonOpts& common_in, const std::string& name,
               bool runs_given, const std::string& cmdline) {
    CommonOpts common = common_in;
    const std::string out = common.out.empty() ? name + ".csv" : common.out;
    if (name == "fig2a" || name == "fig2b") {
        if (!runs_given) common.runs = 100;
        SimOpts o;
        o.lambda = {0.025};
        o.c = {name == "fig2a" ? 16.0 : 4.0};
        o.lanes = {1, 2, 4, 8};
        o.op = "lanecdf";
        o.x_max = 250.0;
        o.x_step = 0.5;
        return run_simulate(common, o, cmdline, out);
    }
    if (name == "fig4") {
        if (!runs_given) common.runs = 50000;
        SimOpts so;
        so.op = "moments";
        int rc = 0;
        re::CsvTable t;
        t.header = {"mu", "c", "r0", "eta", "lambda", "mean_mc", "mean_mc_se",
                    "mean_analytic"};
        std::vector<std::string> methods;
        std::size_t skipped = 0;
        struct Arm { double c, r0; };
        for (const Arm& arm : {Arm{4.0, 150.0}, Arm{20.0, 500.0}})
            for (double eta : {2.0, 3.0})
                for (double mu : logspace(0.002, 0.1, 12)) {
                    try {
                        auto p = interference::scenario_from_mu(mu, arm.c, arm.r0, eta);
                        auto cfg = sim_config(common, so);
                        auto r = si::estimate_moments(p, cfg);
                        t.add_row({fmt(mu), fmt(arm.c), fmt(arm.r0), fmt(eta),
                                   fmt(p.lambda), fmt(r.mean.value),
                                   fmt(r.mean.std_error),
                                   fmt(mo::mean_interference(p))});
                        methods.push_back("MonteCarlo");
                    } catch (const std::exception& e) {
                        report_skip("fig4 point", e);
                        ++skipped;
                    }
                }
        json cfg = {{"recipe", name}, {"recipes_version", recipes_version},
                    {"runs", common.runs}, {"seed", common.seed}};
        write_output(common, out, t, cfg, methods, cmdline);
        rc = finish(skipped);
        return rc;
    }
    if (name == "fig5") {
        MomentsOpts o;
        o.mu = logspace(0.002, 0.1, 12);
        o.third = true;
        int rc = 0;
        // two geometry arms share one output table
        o.c = {4.0};
        o.r0 = {150.0};
        o.eta = {2.0, 3.0};
        rc = std::max(rc, run_moments(common, o, cmdline, out));
        o.c = {20.0};
        o.r0 = {500.0};
        const std::string out2 = out + (common.format == "json" ? ".arm2.json"
                                                                : ".arm2.csv");
        rc = std::max(rc, run_moments(common, o, cmdline, out2));
        return rc;
    }
    if (name == "fig6") {
        MomentsOpts o;
        o.lambda = {0.1};
        o.c = linspace(0.0, 8.0, 17);
        o.r0 = {100.0, 150.0};
        o.eta = {2.0, 3.0};
        return run_moments(common, o, cmdline, out);
    }
    if (name == "fig7") {
        ClosedOpts o;
        o.lambda = {0.1};
        o.c = linspace(0.5, 8.0, 16);
        o.r0 = {100.0, 150.0};
        o.eta = {3.0};
        return run_closedform(common, o, cmdline, out);
    }
    if (name == "fig8") {
        ClosedOpts o;
        o.lambda = {0.025};
        o.c = linspace(1.0, 25.0, 25);
        o.r0 = {100.0, 150.0};
        o.eta = {3.0};
        return run_closedform(common, o, cmdline, out);
    }
    if (name == "fig9") {
        LatticeOpts o;
        o.c = linspace(1.0, 20.0, 20);
        o.r0 = {100.0, 150.0};
        o.eta = {3.0};
        return run_lattice(common, o, cmdline, out);
    }
    throw std::invalid_argument("unknown figure recipe: " + name +
                                " (known: fig2a fig2b fig4 fig5 fig6 fig7 fig8 fig9)");
}

// ------------------------------------------------------------ config file

// JSON config uses the same field names as ScenarioParams / SimConfig;
// values only apply to options the user did not pass on the command line.
template <class T>
void merge_scalar(const json& cfg, const char* key, const CLI::App* app,
                  const std::string& flag, T& target) {
    if (!cfg.contains(key)) return;
    if (app->count(flag) > 0) return;
    target = cfg.at(key).get<T>();
}

void merge_list(const json& cfg, const char* key, const CLI::App* app,
                const std::string& flag, std::vector<double>& target) {
    if (!cfg.contains(key)) return;
    if (app->count(flag) > 0) return;
    const auto& v = cfg.at(key);
    target.clear();
    if (v.is_array())
        for (const auto& x : v) target.push_back(x.get<double>());
    else
        target.push_back(v.get<double>());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"interference moments of 1D vehicular networks with hardcore headways"};
    app.require_subcommand(1);

    CommonOpts common;
    MomentsOpts mopts;
    ClosedOpts copts;
    LatticeOpts lopts;
    SimOpts sopts;
    std::string figure_name;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "RNG seed");
        sub->add_option("--runs", common.runs, "Monte Carlo runs");
        sub->add_option("--out", common.out, "output path");
        sub->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--config", common.config_path, "JSON config file");
        sub->add_option("--quad-rel-tol", common.quad_rel_tol,
                        "quadrature relative tolerance");
    };

    auto* cm = app.add_subcommand("moments", "analytic moments on a parameter grid");
    add_common(cm);
    cm->add_option("--lambda", mopts.lambda, "vehicle intensities")->delimiter(',');
    cm->add_option("--mu", mopts.mu, "exponential headway rates (overrides --lambda)")
        ->delimiter(',');
    cm->add_option("--c", mopts.c, "hardcore distances")->delimiter(',');
    cm->add_option("--r0", mopts.r0, "cell radii")->delimiter(',');
    cm->add_option("--eta", mopts.eta, "pathloss exponents")->delimiter(',');
    cm->add_option("--m", mopts.m, "pcf truncation order");
    cm->add_flag("--third", mopts.third, "also compute the third moment and skewness");

    auto* cc = app.add_subcommand("closedform", "closed-form variance chain on a grid");
    add_common(cc);
    cc->add_option("--lambda", copts.lambda, "vehicle intensities")->delimiter(',');
    cc->add_option("--c", copts.c, "hardcore distances")->delimiter(',');
    cc->add_option("--r0", copts.r0, "cell radii")->delimiter(',');
    cc->add_option("--eta", copts.eta, "pathloss exponents")->delimiter(',');
    cc->add_option("--variant", copts.variant,
                   "all|closed|order2|order2_m3|exponential|cov");

    auto* cl = app.add_subcommand("lattice", "lattice deployment moments on a grid");
    add_common(cl);
    cl->add_option("--c", lopts.c, "lattice spacings")->delimiter(',');
    cl->add_option("--r0", lopts.r0, "cell radii")->delimiter(',');
    cl->add_option("--eta", lopts.eta, "pathloss exponents")->delimiter(',');

    auto* cs = app.add_subcommand("simulate", "Monte Carlo estimates");
    add_common(cs);
    cs->add_option("--model", sopts.model, "hardcore|ppp|lattice");
    cs->add_option("--op", sopts.op, "moments|lanecdf|pcfhist");
    cs->add_option("--fading", sopts.fading, "rayleigh|none");
    cs->add_option("--lambda", sopts.lambda, "vehicle intensities")->delimiter(',');
    cs->add_option("--c", sopts.c, "hardcore distances / lattice spacings")
        ->delimiter(',');
    cs->add_option("--r0", sopts.r0, "cell radii")->delimiter(',');
    cs->add_option("--eta", sopts.eta, "pathloss exponents")->delimiter(',');
    cs->add_option("--half-length", sopts.half_length, "observation half length, m");
    cs->add_option("--burn-in", sopts.burn_in, "burn-in margin, m (0: automatic)");
    cs->add_option("--lanes", sopts.lanes, "lane counts for op=lanecdf")->delimiter(',');
    cs->add_option("--bin-width", sopts.bin_width, "histogram bin width for op=pcfhist");
    cs->add_option("--max-sep", sopts.max_sep, "histogram range for op=pcfhist");
    cs->add_option("--x-max", sopts.x_max, "CDF evaluation range for op=lanecdf");
    cs->add_option("--x-step", sopts.x_step, "CDF evaluation step for op=lanecdf");

    auto* cg = app.add_subcommand("figure", "run a named figure-reproduction recipe");
    add_common(cg);
    cg->add_option("name", figure_name, "fig2a|fig2b|fig4|fig5|fig6|fig7|fig8|fig9")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string cmdline = join_args(argc, argv);
    try {
        CLI::App* active = app.get_subcommands().at(0);
        if (!common.config_path.empty()) {
            std::ifstream is(common.config_path);
            if (!is) throw std::runtime_error("cannot read config: " + common.config_path);
            const json cfg = json::parse(is);
            merge_scalar(cfg, "seed", active, "--seed", common.seed);
            merge_scalar(cfg, "runs", active, "--runs", common.runs);
            if (active == cm) {
                merge_list(cfg, "lambda", active, "--lambda", mopts.lambda);
                merge_list(cfg, "mu", active, "--mu", mopts.mu);
                merge_list(cfg, "c", active, "--c", mopts.c);
                merge_list(cfg, "r0", active, "--r0", mopts.r0);
                merge_list(cfg, "eta", active, "--eta", mopts.eta);
            } else if (active == cc) {
                merge_list(cfg, "lambda", active, "--lambda", copts.lambda);
                merge_list(cfg, "c", active, "--c", copts.c);
                merge_list(cfg, "r0", active, "--r0", copts.r0);
                merge_list(cfg, "eta", active, "--eta", copts.eta);
            } else if (active == cl) {
                merge_list(cfg, "c", active, "--c", lopts.c);
                merge_list(cfg, "r0", active, "--r0", lopts.r0);
                merge_list(cfg, "eta", active, "--eta", lopts.eta);
            } else if (active == cs) {
                merge_list(cfg, "lambda", active, "--lambda", sopts.lambda);
                merge_list(cfg, "c", active, "--c", sopts.c);
                merge_list(cfg, "r0", active, "--r0", sopts.r0);
                merge_list(cfg, "eta", active, "--eta", sopts.eta);
                merge_scalar(cfg, "half_length", active, "--half-length",
                             sopts.half_length);
                merge_scalar(cfg, "burn_in", active, "--burn-in", sopts.burn_in);
                merge_scalar(cfg, "model", active, "--model", sopts.model);
            }
        }

        if (active == cm) {
            const std::string out = common.out.empty() ? "moments.csv" : common.out;
            return run_moments(common, mopts, cmdline, out);
        }
        if (active == cc) {
            const std::string out = common.out.empty() ? "closedform.csv" : common.out;
            return run_closedform(common, copts, cmdline, out);
        }
        if (active == cl) {
            const std::string out = common.out.empty() ? "lattice.csv" : common.out;
            return run_lattice(common, lopts, cmdline, out);
        }
        if (active == cs) {
            const std::string out = common.out.empty() ? "simulate.csv" : common.out;
            return run_simulate(common, sopts, cmdline, out);
        }
        return run_figure(common, figure_name, cg->count("--runs") > 0, cmdline);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
