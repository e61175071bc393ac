#include "rrdps/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rrdps/bounds.hpp"
#include "rrdps/optimizer.hpp"
#include "rrdps/protocol_sim.hpp"
#include "rrdps/rate_model.hpp"
#include "rrdps/verify.hpp"

#ifndef RRDPS_VERSION
#define RRDPS_VERSION "0.0.0"
#endif

namespace rrdps::cli {

using nlohmann::json;

std::string format_number(double v)
{
    if (v == 0.0)
        return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string pack_bits_hex(const std::vector<unsigned char>& bits)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        unsigned nibble = 0;
        for (std::size_t j = 0; j < 4; ++j)
            nibble = (nibble << 1) | ((i + j < bits.size() && bits[i + j]) ? 1U : 0U);
        out.push_back(digits[nibble]);
    }
    return out;
}

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json manifest(const std::string& subcommand, json params, std::optional<std::uint64_t> seed,
              const std::string& out_path)
{
    json m;
    m["subcommand"] = subcommand;
    m["parameters"] = std::move(params);
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["tool_version"] = RRDPS_VERSION;
    m["outputs"] = json::array({out_path});
    return m;
}

// Writes to out_path, or to `out` when the path is "-".
void emit(const std::string& out_path, const std::string& payload, std::ostream& out)
{
    if (out_path == "-") {
        out << payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw UsageError("cannot open output file: " + out_path);
    f << payload;
    if (!f)
        throw std::runtime_error("failed writing " + out_path);
}

void emit_manifest(const std::string& out_path, const json& m, std::ostream& out)
{
    if (out_path == "-")
        return;
    emit(out_path + ".manifest.json", m.dump(2) + "\n", out);
}

json rate_point_json(const RatePoint& r)
{
    return {{"eta", r.eta},
            {"mu", r.mu},
            {"nu_th", r.nu_th},
            {"q", r.q},
            {"e_src", r.e_src},
            {"delta_tag", r.delta_tag},
            {"e_unt", r.e_unt},
            {"ec_cost", r.ec_cost},
            {"pa_cost", r.pa_cost},
            {"rate_per_block", r.rate_per_block},
            {"rate_per_pulse", r.rate_per_pulse},
            {"degenerate", r.degenerate}};
}

struct BoundsArgs {
    int L = 6;
    std::vector<int> nu;
    int e_points = 101;
    double e_max = 0.5;
    std::string out = "-";
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out)
{
    if (a.L < 3)
        throw UsageError("--L must be >= 3");
    std::vector<int> nus = a.nu;
    if (nus.empty())
        for (int nu = 1; nu <= std::min(a.L / 2, a.L - 2); ++nu)
            nus.push_back(nu);
    for (int nu : nus)
        if (nu < 1 || nu > a.L - 2)
            throw UsageError("--nu values must lie in [1, L-2]");
    if (!(a.e_max >= 0.0 && a.e_max <= 0.5))
        throw UsageError("--e-max must lie in [0, 0.5]");
    if (a.e_points < 1)
        throw UsageError("--e-points must be >= 1");

    std::ostringstream csv;
    csv << "L,nu,e,F,F_segment,lambda_opt,branch\n";
    for (int nu : nus)
        for (int i = 0; i < a.e_points; ++i) {
            const double e = a.e_points == 1 ? 0.0 : a.e_max * i / (a.e_points - 1);
            const BoundResult r = phase_error_bound({a.L, nu, e});
            csv << a.L << ',' << nu << ',' << format_number(e) << ',' << format_number(r.f_value) << ','
                << format_number(segment_approx(a.L, nu, e)) << ','
                << (r.lambda_at_limit() ? std::string("limit") : format_number(r.lambda_opt)) << ','
                << to_string(r.branch) << '\n';
        }
    emit(a.out, csv.str(), out);
    emit_manifest(a.out,
                  manifest("bounds", {{"L", a.L}, {"nu", nus}, {"e_points", a.e_points}, {"e_max", a.e_max}},
                           std::nullopt, a.out),
                  out);
    return kExitOk;
}

struct KeyrateArgs {
    int L = 6;
    double e = 0.03;
    double f_ec = 1.1;
    std::optional<double> eta;
    double eta_min = 1e-3;
    double eta_max = 1.0;
    int eta_points = 31;
    std::optional<int> nu_th;
    double mu_min = 1e-5;
    std::optional<double> mu_max;
    bool monitored = false;
    bool unmonitored = false;
    std::string out = "-";
};

int cmd_keyrate(const KeyrateArgs& a, std::ostream& out)
{
    SweepConfig cfg;
    cfg.L = a.L;
    cfg.e = a.e;
    cfg.f_ec = a.f_ec;
    if (a.eta)
        cfg.eta_grid = {*a.eta};
    else {
        if (!(a.eta_min > 0.0 && a.eta_max <= 1.0 && a.eta_min <= a.eta_max) || a.eta_points < 1)
            throw UsageError("eta range must satisfy 0 < eta-min <= eta-max <= 1");
        cfg.eta_grid = log_grid_descending(a.eta_min, a.eta_max, a.eta_points);
    }
    if (a.nu_th) {
        cfg.nu_th_min = *a.nu_th;
        cfg.nu_th_max = *a.nu_th;
    }
    cfg.mu_lo = a.mu_min;
    if (a.mu_max)
        cfg.mu_hi = *a.mu_max;
    try {
        cfg = cfg.resolved();
    } catch (const std::invalid_argument& ex) {
        throw UsageError(ex.what());
    }

    std::vector<bool> modes;
    if (a.monitored || !a.unmonitored)
        modes.push_back(true);
    if (a.unmonitored || !a.monitored)
        modes.push_back(false);

    std::vector<std::vector<RatePoint>> tables;
    for (bool m : modes) {
        SweepConfig c = cfg;
        c.monitored = m;
        tables.push_back(sweep(c));
    }

    std::ostringstream csv;
    csv << "eta,monitored,L,nu_th,mu,Q,e_src,delta_tag,EC,PA,rate_per_pulse\n";
    for (std::size_t i = 0; i < cfg.eta_grid.size(); ++i)
        for (std::size_t m = 0; m < modes.size(); ++m) {
            const RatePoint& r = tables[m][i];
            csv << format_number(cfg.eta_grid[i]) << ',' << (modes[m] ? 1 : 0) << ',' << cfg.L << ','
                << r.nu_th << ',' << format_number(r.mu) << ',' << format_number(r.q) << ','
                << format_number(r.e_src) << ',' << format_number(r.delta_tag) << ','
                << format_number(r.ec_cost) << ',' << format_number(r.pa_cost) << ','
                << format_number(r.rate_per_pulse) << '\n';
        }
    emit(a.out, csv.str(), out);

    json params{{"L", cfg.L},
                {"e", cfg.e},
                {"f_ec", cfg.f_ec},
                {"eta_grid", cfg.eta_grid},
                {"nu_th_range", {cfg.nu_th_min, cfg.nu_th_max}},
                {"mu_bracket", {cfg.mu_lo, cfg.mu_hi}},
                {"mu_grid_points", cfg.mu_grid_points},
                {"refine_tol", cfg.refine_tol},
                {"modes", modes}};
    emit_manifest(a.out, manifest("keyrate", std::move(params), std::nullopt, a.out), out);
    return kExitOk;
}

struct SimulateArgs {
    int L = 6;
    double mu = 0.1;
    double eta = 0.5;
    std::uint64_t rounds = 1000000;
    std::uint64_t seed = 1;
    double sample_fraction = 0.5;
    std::string channel = "ideal";
    double channel_param = 0.0;
    int nu_th = 1;
    double f_ec = 1.1;
    bool unmonitored = false;
    std::string out = "-";
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out)
{
    SimConfig cfg;
    cfg.L = a.L;
    cfg.mu = a.mu;
    cfg.eta = a.eta;
    cfg.rounds = a.rounds;
    cfg.seed = a.seed;
    cfg.sample_fraction = a.sample_fraction;
    ProtocolParams p;
    p.L = a.L;
    p.nu_th = a.nu_th;
    p.mu = a.mu;
    p.eta = a.eta;
    p.f_ec = a.f_ec;
    try {
        cfg.channel = parse_channel(a.channel, a.channel_param);
        cfg.validate();
        p.validate();
    } catch (const std::invalid_argument& ex) {
        throw UsageError(ex.what());
    }

    const SimStats s = run_rounds(cfg);
    std::uint64_t mismatches = 0;
    for (std::size_t i = 0; i < s.sifted_bits_alice.size(); ++i)
        mismatches += s.sifted_bits_alice[i] != s.sifted_bits_bob[i];

    json stats{{"emitted", s.emitted},
               {"detected", s.detected},
               {"q_emp", s.q_emp},
               {"sampled", s.sampled},
               {"errors_in_sample", s.errors_in_sample},
               {"e_emp", s.e_emp},
               {"sifted_length", s.sifted_bits_alice.size()},
               {"sifted_mismatches", mismatches},
               {"sifted_bits_alice", pack_bits_hex(s.sifted_bits_alice)},
               {"sifted_bits_bob", pack_bits_hex(s.sifted_bits_bob)},
               {"seed_used", s.seed_used}};
    json comparison{{"q_model_rate", detection_rate(a.L, a.mu, a.eta)},
                    {"q_model_strict", strict_detection_rate(a.L, a.mu, a.eta)},
                    {"e_expected", cfg.channel.expected_error_rate()}};
    json params{{"L", a.L},
                {"mu", a.mu},
                {"eta", a.eta},
                {"rounds", a.rounds},
                {"sample_fraction", a.sample_fraction},
                {"channel", cfg.channel.name()},
                {"channel_param", cfg.channel.param},
                {"nu_th", a.nu_th},
                {"f_ec", a.f_ec},
                {"monitored", !a.unmonitored}};

    json doc;
    doc["manifest"] = manifest("simulate", std::move(params), a.seed, a.out);
    doc["sim_stats"] = std::move(stats);
    doc["model_comparison"] = std::move(comparison);
    if (s.sampled > 0)
        doc["rate_estimate"] = rate_point_json(estimate_rate_from_sim(s, p, !a.unmonitored));
    else
        doc["rate_estimate"] = nullptr;
    emit(a.out, doc.dump(2) + "\n", out);
    return kExitOk;
}

int cmd_verify(const std::string& level, const std::string& out_path, std::ostream& out)
{
    const VerifyLevel lv = level == "full" ? VerifyLevel::full : VerifyLevel::fast;
    const VerifyReport rep = run_verification(lv);
    json doc = rep.to_json();
    doc["manifest"] = manifest("verify", {{"level", level}}, std::nullopt, out_path);
    emit(out_path, doc.dump(2) + "\n", out);
    return rep.pass() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"RRDPS QKD security-bound toolkit", "rrdps"};
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
    app.require_subcommand(1);

    BoundsArgs ba;
    auto* bounds = app.add_subcommand("bounds", "Tabulate the phase-error bound F(nu, e)");
    bounds->add_option("--L", ba.L, "Block size")->capture_default_str();
    bounds->add_option("--nu", ba.nu, "Photon numbers (default 1..L/2)");
    bounds->add_option("--e-points", ba.e_points, "Points on the bit-error grid")->capture_default_str();
    bounds->add_option("--e-max", ba.e_max, "Largest bit error rate")->capture_default_str();
    bounds->add_option("--out", ba.out, "Output CSV path, '-' for stdout")->capture_default_str();

    KeyrateArgs ka;
    auto* keyrate = app.add_subcommand("keyrate", "Optimized key rate per pulse versus transmission");
    keyrate->add_option("--L", ka.L, "Block size")->capture_default_str();
    keyrate->add_option("--e", ka.e, "Bit error rate")->capture_default_str();
    keyrate->add_option("--f-ec", ka.f_ec, "Error-correction inefficiency")->capture_default_str();
    keyrate->add_option("--eta", ka.eta, "Single transmission value");
    keyrate->add_option("--eta-min", ka.eta_min)->capture_default_str();
    keyrate->add_option("--eta-max", ka.eta_max)->capture_default_str();
    keyrate->add_option("--eta-points", ka.eta_points)->capture_default_str();
    keyrate->add_option("--nu-th", ka.nu_th, "Fix the threshold photon number");
    keyrate->add_option("--mu-min", ka.mu_min)->capture_default_str();
    keyrate->add_option("--mu-max", ka.mu_max, "Upper mu bracket (default 10/L)");
    keyrate->add_flag("--monitored", ka.monitored, "Only the monitored curve");
    keyrate->add_flag("--unmonitored", ka.unmonitored, "Only the unmonitored curve");
    keyrate->add_option("--out", ka.out)->capture_default_str();

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of protocol rounds");
    simulate->add_option("--L", sa.L)->capture_default_str();
    simulate->add_option("--mu", sa.mu)->capture_default_str();
    simulate->add_option("--eta", sa.eta)->capture_default_str();
    simulate->add_option("--rounds", sa.rounds)->capture_default_str();
    simulate->add_option("--seed", sa.seed)->capture_default_str();
    simulate->add_option("--sample-fraction", sa.sample_fraction)->capture_default_str();
    simulate->add_option("--channel", sa.channel, "ideal | phase_flip | position_dephase")
        ->capture_default_str();
    simulate->add_option("--channel-param", sa.channel_param)->capture_default_str();
    simulate->add_option("--nu-th", sa.nu_th, "Threshold for the rate estimate")->capture_default_str();
    simulate->add_option("--f-ec", sa.f_ec)->capture_default_str();
    bool sim_monitored = true;
    simulate->add_flag("--monitored", sim_monitored, "Rate estimate with monitoring (default)");
    simulate->add_flag("--unmonitored", sa.unmonitored, "Rate estimate without monitoring");
    simulate->add_option("--out", sa.out)->capture_default_str();

    std::string level = "fast";
    std::string verify_out = "-";
    auto* verify = app.add_subcommand("verify", "Run the cross-verification suite");
    verify->add_option("--level", level)->check(CLI::IsMember({"fast", "full"}))->capture_default_str();
    verify->add_option("--out", verify_out)->capture_default_str();

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.push_back("rrdps");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store)
        argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    }

    try {
        if (bounds->parsed())
            return cmd_bounds(ba, out);
        if (keyrate->parsed())
            return cmd_keyrate(ka, out);
        if (simulate->parsed())
            return cmd_simulate(sa, out);
        if (verify->parsed())
            return cmd_verify(level, verify_out, out);
    } catch (const UsageError& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitVerifyFailed;
    }
    return kExitUsage;
}

}  // namespace rrdps::cli
