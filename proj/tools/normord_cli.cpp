// Command-line front end: every subcommand writes a JSON (or CSV) report
// embedding the run configuration and library version, so a stored config
// replays to an identical report. Exit codes: 0 success, 2 precondition
// errors, 3 search exhaustion.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "normord/normord.hpp"

using json = nlohmann::json;
using namespace normord;

namespace {

u64 parse_count(const std::string& s) {
    return static_cast<u64>(std::stod(s));
}

std::vector<u64> parse_checkpoints(const std::string& s) {
    std::vector<u64> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_count(tok));
    return out;
}

FunctionId parse_function(const std::string& s) {
    if (s == "phi") return FunctionId::phi();
    if (s == "tau") return FunctionId::tau();
    if (s == "mu2" || s == "mu_squared") return FunctionId::mu_squared();
    if (s.rfind("sigma:", 0) == 0) return FunctionId::sigma_k(std::stoul(s.substr(6)));
    if (s.rfind("power:", 0) == 0) return FunctionId::power_alpha(std::stod(s.substr(6)));
    if (s.rfind("custom:", 0) == 0) {
        std::ifstream in(s.substr(7));
        if (!in) throw precondition_error("BadSpecFile", "cannot open custom spec " + s.substr(7));
        json j = json::parse(in);
        std::map<std::pair<u64, unsigned>, double> table;
        bool cm = j.value("completely_multiplicative", false);
        std::string name = j.value("name", "custom");
        for (auto& [key, val] : j.at("values").items()) {
            auto caret = key.find('^');
            u64 p = std::stoull(key.substr(0, caret));
            unsigned e = caret == std::string::npos ? 1 : std::stoul(key.substr(caret + 1));
            table[{p, e}] = val.get<double>();
        }
        return FunctionId::custom(spec_from_table(name, std::move(table), cm));
    }
    throw precondition_error("BadFunction", "unknown function spec: " + s);
}

// Candidate g over [lo, hi] from its CLI name.
MonotoneCandidate parse_candidate(const std::string& s, const FunctionId& f, u64 lo, u64 hi) {
    if (s == "linear") {
        std::vector<double> v(hi - lo + 1);
        for (u64 n = lo; n <= hi; ++n) v[n - lo] = static_cast<double>(n);
        return make_candidate(lo, std::move(v), CandidateSource::user);
    }
    if (s == "self") {
        SieveSegment seg = sieve_range(f, lo, hi);
        return make_candidate(lo, std::move(seg.values), CandidateSource::user);
    }
    if (s == "isotonic") return isotonic_candidate_of(f, lo, hi);
    if (s == "upper" || s == "lower") {
        SieveSegment seg = sieve_range(f, lo, hi);
        Envelopes env = monotone_envelopes(seg.values, lo);
        return s == "upper" ? env.upper : env.lower;
    }
    throw precondition_error("BadCandidate", "unknown candidate g: " + s);
}

json base_report(const json& config) {
    json j;
    j["version"] = kVersion;
    j["config"] = config;
    j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    return j;
}

void write_report(const std::string& path, const json& j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

json density_to_json(const DensityReport& rep) {
    json cps = json::array();
    for (const auto& cp : rep.checkpoints) {
        cps.push_back({{"x", cp.x},
                       {"count", cp.count},
                       {"density", cp.density},
                       {"ci95", cp.ci95_half_width},
                       {"sampled", cp.sampled}});
    }
    return {{"eps", rep.epsilon}, {"checkpoints", cps}, {"verdict", to_string(rep.verdict)}};
}

unsigned thread_cap() {
    if (const char* env = std::getenv("NORMORD_THREADS")) {
        unsigned v = static_cast<unsigned>(std::stoul(env));
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

int run_sieve(const std::string& fn, u64 lo, u64 hi, const std::string& out_path) {
    FunctionId f = parse_function(fn);
    SieveSegment seg = sieve_range(f, lo, hi);
    std::ofstream out(out_path);
    out << "n,f_n\n";
    out.precision(17);
    for (u64 n = lo; n <= hi; ++n) {
        double v = seg.at(n);
        if (f.value_kind() == ValueKind::exact_integer)
            out << n << "," << static_cast<u64>(v + 0.5) << "\n";
        else
            out << n << "," << v << "\n";
    }
    return 0;
}

int run_density(const std::string& fn, const std::string& g_name, double eps,
                const std::string& checkpoints, u64 seed, const std::string& out_path) {
    FunctionId f = parse_function(fn);
    std::vector<u64> cps = parse_checkpoints(checkpoints);
    if (cps.empty()) throw precondition_error("BadCheckpoints", "no checkpoints given");
    DensityOptions opt;
    opt.seed = seed;
    opt.threads = thread_cap();
    u64 cover = std::min<u64>(cps.back(), opt.full_scan_limit);
    MonotoneCandidate g = parse_candidate(g_name, f, 1, cover);
    DensityReport rep = density_trend(f, g, eps, cps, opt);

    json j = base_report({{"subcommand", "density"},
                          {"fn", fn},
                          {"g", g_name},
                          {"eps", eps},
                          {"checkpoints", checkpoints},
                          {"seed", seed}});
    j["fn"] = fn;
    j["g"] = g_name;
    j["clamped_g_entries"] = g.clamped;
    j.update(density_to_json(rep));
    write_report(out_path, j);
    std::cout << "density: verdict " << to_string(rep.verdict) << "\n";
    return 0;
}

int run_fit_alpha(const std::string& fn, const std::string& g_name, double eps,
                  const std::string& range, const std::string& out_path) {
    auto colon = range.find(':');
    if (colon == std::string::npos)
        throw precondition_error("BadRange", "range must be lo:hi");
    u64 lo = parse_count(range.substr(0, colon));
    u64 hi = parse_count(range.substr(colon + 1));
    FunctionId f = parse_function(fn);
    MonotoneCandidate g = parse_candidate(g_name, f, std::max<u64>(lo, 1), hi);
    LogContext ctx = range_log_context(f, g);
    ResidualOracle oracle = ResidualOracle::from(ctx, eps);
    AlphaFit fit = alpha_estimate(ctx, oracle, std::max<u64>(lo, 2), hi);

    json j = base_report({{"subcommand", "fit-alpha"},
                          {"fn", fn},
                          {"g", g_name},
                          {"eps", eps},
                          {"range", range}});
    j["alpha"] = fit.alpha;
    j["max_residual"] = fit.max_residual;
    j["mean_residual"] = fit.mean_residual;
    j["admissible_count"] = fit.admissible_count;
    json sample = json::array();
    for (auto& [n, v] : fit.sample) sample.push_back({{"n", n}, {"c_over_log", v}});
    j["sample"] = sample;
    write_report(out_path, j);
    std::cout << "fit-alpha: alpha = " << fit.alpha << ", max residual = " << fit.max_residual
              << "\n";
    return 0;
}

json chain_to_json(const std::vector<ChainStep>& chain) {
    json arr = json::array();
    for (const auto& st : chain) {
        arr.push_back({{"value", normord::to_string(st.value)},
                       {"residual", st.residual},
                       {"residual_mult", st.residual_mult}});
    }
    return arr;
}

int run_explore_proof(const std::string& fn, const std::string& g_name, u64 m, u64 n, double eps,
                      unsigned h, unsigned k, double eta, const std::string& range,
                      const std::string& out_path) {
    FunctionId f = parse_function(fn);
    LogContext ctx;
    if (fn.rfind("power:", 0) == 0 && g_name == "self") {
        ctx = power_log_context(std::stod(fn.substr(6)));
    } else {
        auto colon = range.find(':');
        u64 lo = parse_count(range.substr(0, colon));
        u64 hi = parse_count(range.substr(colon + 1));
        ctx = range_log_context(f, parse_candidate(g_name, f, std::max<u64>(lo, 1), hi));
    }
    ResidualOracle oracle = ResidualOracle::from(ctx, eps);
    if (eta <= 0) eta = eta_select(m, n, h, k);
    ProofParams params{m, n, eps, eta, 0};
    params.S = auto_select_S(params, h, k, ctx, oracle);
    ProofTrace trace = build_chains(params, h, k, ctx, oracle);
    ChainReport chains = chain_inequalities_check(trace);
    ExponentBoundReport exponent = exponent_bound_check(trace);

    json j = base_report({{"subcommand", "explore-proof"},
                          {"fn", fn},
                          {"g", g_name},
                          {"m", m},
                          {"n", n},
                          {"eps", eps},
                          {"h", h},
                          {"k", k}});
    j["eta"] = params.eta;
    j["S"] = normord::to_string(params.S);
    j["s_chain"] = chain_to_json(trace.s_chain);
    j["t_chain"] = chain_to_json(trace.t_chain);
    json checks = json::array();
    for (const auto& c : chains.checks)
        checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack},
                          {"holds", c.holds}});
    j["inequalities"] = checks;
    j["all_inequalities_hold"] = chains.all_hold;
    j["exponent_bound"] = {{"ratio", exponent.ratio},
                           {"bound", exponent.bound},
                           {"holds", exponent.holds},
                           {"s_h_gt_t_k", exponent.chain_order_ok}};
    write_report(out_path, j);
    std::cout << "explore-proof: all chain inequalities "
              << (chains.all_hold ? "hold" : "FAILED") << ", exponent bound "
              << (exponent.holds ? "holds" : "FAILED") << "\n";
    return 0;
}

int run_moments(const std::string& fn, u64 x_max, u64 prime_limit, const std::string& out_path) {
    FunctionId f = parse_function(fn);
    EulerProductEstimate A = euler_product_A(prime_limit);
    EulerProductEstimate B = euler_product_B(prime_limit);
    MomentFit fit = shiu_criterion(f, x_max, A, B);

    json j = base_report({{"subcommand", "moments"},
                          {"fn", fn},
                          {"xmax", x_max},
                          {"prime_limit", prime_limit}});
    json cps = json::array();
    for (const auto& cp : fit.sums.checkpoints)
        cps.push_back({{"x", cp.x},
                       {"S1", cp.s1},
                       {"S2", cp.s2},
                       {"A_hat", cp.a_hat},
                       {"B_hat", cp.b_hat}});
    j["checkpoints"] = cps;
    j["A_euler"] = {{"value", fit.a}, {"tail_bound", fit.a_euler.tail_bound}};
    j["B_euler"] = {{"value", fit.b}, {"tail_bound", fit.b_euler.tail_bound}};
    j["A_hat_drift"] = fit.a_hat_drift;
    j["B_hat_drift"] = fit.b_hat_drift;
    j["margin_B_minus_A2"] = fit.margin;
    j["growth_warning"] = fit.sums.growth_warning;
    j["verdict"] = to_string(fit.verdict);
    write_report(out_path, j);
    std::cout << "moments: A = " << fit.a << ", B = " << fit.b << ", verdict "
              << to_string(fit.verdict) << "\n";
    return 0;
}

int run_effective_phi(const std::string& cand_name, double eps, const std::string& checkpoints,
                      const std::string& out_path) {
    EffectiveCandidate cand;
    if (cand_name.rfind("trunc:k=", 0) == 0)
        cand = truncated_phi_candidate(std::stoul(cand_name.substr(8)));
    else if (cand_name == "identity")
        cand = identity_candidate();
    else if (cand_name == "phi-exact")
        cand = exact_phi_candidate();
    else
        throw precondition_error("BadCandidate", "unknown candidate: " + cand_name);

    std::vector<u64> cps = parse_checkpoints(checkpoints);
    CandidateDensityReport rep = candidate_density_experiment(cand, eps, cps);
    std::vector<u64> audit_sample;
    for (u64 n = 101; n <= cps.back(); n = n * 3 + 1) audit_sample.push_back(n);
    CostAudit audit = cost_audit(cand, audit_sample);

    json j = base_report({{"subcommand", "effective-phi"},
                          {"candidate", cand_name},
                          {"eps", eps},
                          {"checkpoints", checkpoints}});
    j.update(density_to_json(rep.density));
    j["candidate"] = cand.name;
    j["cost"] = {{"max_ops", rep.max_ops},
                 {"max_ops_n", rep.max_ops_n},
                 {"budget_exceeded", rep.budget_exceeded},
                 {"fitted_exponent", audit.fitted_exponent},
                 {"exponent_ci95", audit.exponent_ci95}};
    j["note"] = "sampled-range measurement only; no claim about the limit behavior";
    write_report(out_path, j);
    std::cout << "effective-phi: fitted cost exponent " << audit.fitted_exponent
              << (rep.budget_exceeded ? " (BUDGET EXCEEDED)" : "") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"normord: numerical exploration of normal orders of multiplicative functions"};
    app.require_subcommand(1);

    std::string fn = "phi", g_name = "linear", out_path = "report.json", checkpoints = "1e4,1e5,1e6";
    std::string range = "2:1000000", candidate = "trunc:k=2";
    double eps = 0.1, eta = 0;
    std::string lo_s = "1", hi_s = "1000000", x_max_s = "1e7", prime_limit_s = "1e7";
    u64 seed = 1;
    unsigned h = 2, k = 1;
    u64 m = 2, n = 3;

    auto* sieve = app.add_subcommand("sieve", "evaluate f over a range, CSV output");
    sieve->add_option("--fn", fn);
    sieve->add_option("--lo", lo_s);
    sieve->add_option("--hi", hi_s);
    sieve->add_option("--out", out_path)->required();

    auto* density = app.add_subcommand("density", "exceptional densities at checkpoints");
    density->add_option("--fn", fn);
    density->add_option("--g", g_name);
    density->add_option("--eps", eps);
    density->add_option("--checkpoints", checkpoints);
    density->add_option("--seed", seed);
    density->add_option("--out", out_path)->required();

    auto* fit = app.add_subcommand("fit-alpha", "estimate alpha from c(n)/log n");
    fit->add_option("--fn", fn);
    fit->add_option("--g", g_name);
    fit->add_option("--eps", eps);
    fit->add_option("--range", range);
    fit->add_option("--out", out_path)->required();

    auto* proof = app.add_subcommand("explore-proof", "build and verify s/t chains");
    proof->set_help_flag("--help");  // frees -h for the chain length flag
    proof->add_option("--fn", fn);
    proof->add_option("--g", g_name)->default_val("self");
    proof->add_option("--m", m);
    proof->add_option("--n", n);
    proof->add_option("--eps", eps);
    proof->add_option("--h", h);
    proof->add_option("--k", k);
    proof->add_option("--eta", eta);
    proof->add_option("--range", range);
    proof->add_option("--out", out_path)->required();

    auto* moments = app.add_subcommand("moments", "Shiu-Segal moment criterion");
    moments->add_option("--fn", fn);
    moments->add_option("--xmax", x_max_s);
    moments->add_option("--prime-limit", prime_limit_s);
    moments->add_option("--out", out_path)->required();

    auto* eff = app.add_subcommand("effective-phi", "polylog-computable candidate experiment");
    eff->add_option("--candidate", candidate);
    eff->add_option("--eps", eps);
    eff->add_option("--checkpoints", checkpoints);
    eff->add_option("--out", out_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sieve->parsed()) return run_sieve(fn, parse_count(lo_s), parse_count(hi_s), out_path);
        if (density->parsed()) return run_density(fn, g_name, eps, checkpoints, seed, out_path);
        if (fit->parsed()) return run_fit_alpha(fn, g_name, eps, range, out_path);
        if (proof->parsed())
            return run_explore_proof(fn, g_name, m, n, eps, h, k, eta, range, out_path);
        if (moments->parsed()) return run_moments(fn, parse_count(x_max_s), parse_count(prime_limit_s), out_path);
        if (eff->parsed()) return run_effective_phi(candidate, eps, checkpoints, out_path);
    } catch (const Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::precondition: return 2;
            case ErrorKind::search_exhausted: return 3;
            case ErrorKind::internal: return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
