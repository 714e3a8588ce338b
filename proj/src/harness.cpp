#include "adaswitch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "adaswitch/report.hpp"
#include "adaswitch/rng.hpp"

namespace adaswitch::harness {

// ---------------------------------------------------------------- generators

oltq::Sequence gen_geometric(double p, int ell, int T, std::uint64_t seed) {
    Rng rng(seed);
    oltq::Sequence s;
    s.items.reserve(static_cast<std::size_t>(std::max(T, 0)));
    for (int t = 0; t < T; ++t)
        s.items.push_back(static_cast<int>(std::min<std::int64_t>(rng.geometric(p), ell)));
    return s;
}

PatternPair gen_pattern(PatternModel model, double p_err, int ell, int T, std::uint64_t seed) {
    Rng rng(seed);
    PatternPair out;
    const int span = 2 * ell;
    const int intervals = (T + span - 1) / span;
    out.padded = intervals * span != T;
    auto emit = [&](oltq::Sequence& s, bool high) {
        for (int i = 0; i < span; ++i) s.items.push_back(high ? (i < ell ? ell : 0) : (i == 0 ? ell : 0));
    };
    for (int k = 0; k < intervals; ++k) {
        const bool flip = rng.bernoulli(p_err);
        const bool real_high = model == PatternModel::I ? flip : !flip;
        emit(out.reality, real_high);
        emit(out.prediction, model == PatternModel::II);
    }
    return out;
}

kserver::Sequence gen_points(int n, int T, std::uint64_t seed) {
    Rng rng(seed);
    kserver::Sequence s;
    for (int t = 0; t < T; ++t) s.items.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
    return s;
}

orra::Sequence gen_bernoulli(int n, double p, int T, std::uint64_t seed) {
    Rng rng(seed);
    orra::Sequence s;
    for (int t = 0; t < T; ++t) {
        orra::Request r = 0;
        for (int i = 0; i < n; ++i)
            if (rng.bernoulli(p)) r |= orra::Request{1} << i;
        s.items.push_back(r);
    }
    return s;
}

// ---------------------------------------------------------------- spec parsing

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& key) {
    const std::string s = trim(text);
    const auto slash = s.find('/');
    try {
        std::size_t pos = 0;
        if (slash != std::string::npos) {
            const double a = std::stod(s.substr(0, slash), &pos);
            if (pos != slash) throw std::invalid_argument("fraction");
            const std::string rest = s.substr(slash + 1);
            const double b = std::stod(rest, &pos);
            if (pos != rest.size() || b == 0) throw std::invalid_argument("fraction");
            return a / b;
        }
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw SpecError("'" + key + "' expects a number, got '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& key) {
    const double v = parse_number(s, key);
    if (v != std::floor(v) || std::abs(v) > 2e9) throw SpecError("'" + key + "' expects an integer");
    return static_cast<int>(v);
}

// Comma-separated values; "lo:hi:step" expands to an inclusive grid.
std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        const auto c1 = tok.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_number(tok, key));
            continue;
        }
        const auto c2 = tok.find(':', c1 + 1);
        if (c2 == std::string::npos) throw SpecError("'" + key + "' range needs lo:hi:step");
        const double lo = parse_number(tok.substr(0, c1), key);
        const double hi = parse_number(tok.substr(c1 + 1, c2 - c1 - 1), key);
        const double step = parse_number(tok.substr(c2 + 1), key);
        if (!(step > 0) || hi < lo) throw SpecError("'" + key + "' range must have lo <= hi and step > 0");
        const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(std::stod(format_number(lo + static_cast<double>(i) * step)));
    }
    return out;
}

std::string resolve(const std::string& base, const std::string& path) {
    const std::filesystem::path p(path);
    return p.is_absolute() ? path : (std::filesystem::path(base) / p).string();
}

const std::map<std::string, std::vector<std::string>>& algorithm_table() {
    static const std::map<std::string, std::vector<std::string>> t{
        {"adaswitch-oltq", {"oltq"}},  {"adaswitch-oltq-regret", {"oltq"}},
        {"strengthened", {"oltq"}},    {"qfrac", {"oltq"}},
        {"adaswitch-kse", {"kserver"}}, {"wfa", {"kserver"}},
        {"adaswitch-ca", {"caching"}}, {"marking", {"caching"}},
        {"adaswitch-orra", {"orra"}},  {"prr", {"orra"}},
    };
    return t;
}

const std::map<std::string, std::set<std::string>>& algorithm_params() {
    static const std::map<std::string, std::set<std::string>> t{
        {"adaswitch-oltq", {"label", "epsilon"}},
        {"adaswitch-oltq-regret", {"label", "epsilon"}},
        {"strengthened", {"label", "gamma", "Z"}},
        {"qfrac", {"label"}},
        {"adaswitch-kse", {"label", "epsilon"}},
        {"wfa", {"label"}},
        {"adaswitch-ca", {"label", "epsilon"}},
        {"marking", {"label"}},
        {"adaswitch-orra", {"label", "epsilon", "alpha", "eta", "mc_cap", "mc_base"}},
        {"prr", {"label"}},
    };
    return t;
}

}  // namespace

ExperimentSpec parse_spec(std::istream& in, const std::string& base_dir) {
    ExperimentSpec s;
    s.algorithms.clear();
    std::string line;
    int lineno = 0;
    bool seeds_set = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw SpecError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "application") s.application = val;
            else if (key == "generator") s.generator = val;
            else if (key == "generator.p") s.p = parse_number(val, key);
            else if (key == "generator.ell") s.ell = parse_int(val, key);
            else if (key == "generator.T") s.T = parse_int(val, key);
            else if (key == "generator.p_err") s.p_err = parse_number(val, key);
            else if (key == "generator.file") s.generator_file = resolve(base_dir, val);
            else if (key == "prediction") s.prediction = val;
            else if (key == "prediction.p_err") s.prediction_p_err = parse_number(val, key);
            else if (key == "prediction.file") s.prediction_file = resolve(base_dir, val);
            else if (key == "metric.file") s.metric_file = resolve(base_dir, val);
            else if (key == "metric.uniform") s.metric_uniform = parse_int(val, key);
            else if (key == "metric.k") s.k = parse_int(val, key);
            else if (key == "orra.n") s.orra_n = parse_int(val, key);
            else if (key == "orra.d") s.orra_d = parse_int(val, key);
            else if (key == "seeds") {
                const int n = parse_int(val, key);
                if (n < 1) throw SpecError("'seeds' must be at least 1");
                s.seeds.clear();
                for (int i = 0; i < n; ++i) s.seeds.push_back(static_cast<std::uint64_t>(i));
                seeds_set = true;
            } else if (key == "seeds.list") {
                s.seeds.clear();
                for (double x : parse_list(val, key)) {
                    if (x < 0 || x != std::floor(x)) throw SpecError("'seeds.list' expects nonnegative integers");
                    s.seeds.push_back(static_cast<std::uint64_t>(x));
                }
                seeds_set = true;
            } else if (key == "seed") {
                const double x = parse_number(val, key);
                if (x < 0 || x != std::floor(x)) throw SpecError("'seed' expects a nonnegative integer");
                s.root_seed = static_cast<std::uint64_t>(x);
            } else if (key == "sweep.axis") s.sweep_axis = val;
            else if (key == "sweep.values") s.sweep_values = parse_list(val, key);
            else if (key == "threads") s.threads = parse_int(val, key);
            else if (key == "algorithm.name") s.algorithms.push_back({val, {}});
            else if (key.rfind("algorithm.", 0) == 0) {
                if (s.algorithms.empty()) throw SpecError("'" + key + "' appears before any algorithm.name");
                s.algorithms.back().params[key.substr(10)] = val;
            } else {
                throw SpecError("unknown key '" + key + "'");
            }
        } catch (const SpecError& e) {
            const std::string what = e.what();
            if (what.rfind("line ", 0) == 0) throw;
            throw SpecError("line " + std::to_string(lineno) + ": " + what);
        }
    }
    (void)seeds_set;
    check_spec(s);
    return s;
}

ExperimentSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file '" + path + "'");
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_spec(in, dir.empty() ? "." : dir.string());
}

void check_spec(const ExperimentSpec& s) {
    static const std::set<std::string> apps{"oltq", "kserver", "caching", "orra"};
    static const std::set<std::string> axes{"none", "robustness", "epsilon", "T", "p_err", "p"};
    if (!apps.count(s.application)) throw SpecError("application must be one of oltq, kserver, caching, orra");
    std::set<std::string> gens;
    if (s.application == "oltq") gens = {"geometric", "model1", "model2", "file"};
    else if (s.application == "orra") gens = {"bernoulli", "file"};
    else gens = {"points", "file"};
    if (!gens.count(s.generator)) throw SpecError("generator '" + s.generator + "' does not apply to " + s.application);
    if (s.generator == "file" && s.generator_file.empty()) throw SpecError("generator.file is required");
    static const std::set<std::string> preds{"perfect", "paired", "noisy", "file"};
    if (!preds.count(s.prediction)) throw SpecError("prediction must be perfect, paired, noisy or file");
    if (s.prediction == "paired" && s.generator != "model1" && s.generator != "model2")
        throw SpecError("paired predictions need the model1 or model2 generator");
    if (s.prediction == "file" && s.prediction_file.empty()) throw SpecError("prediction.file is required");
    if (!(s.p > 0 && s.p <= 1)) throw SpecError("generator.p must lie in (0, 1]");
    if (!(s.p_err >= 0 && s.p_err <= 1) || !(s.prediction_p_err >= 0 && s.prediction_p_err <= 1))
        throw SpecError("error rates must lie in [0, 1]");
    if (s.ell < 1 || s.T < 1) throw SpecError("generator.ell and generator.T must be positive");
    if (s.application == "kserver" || s.application == "caching") {
        if (s.metric_file.empty() && s.metric_uniform < 1) throw SpecError("metric.file or metric.uniform is required");
        if (s.metric_file.empty() && (s.k < 1 || s.k > s.metric_uniform))
            throw SpecError("metric.k must lie in [1, metric.uniform]");
    }
    if (s.application == "orra" && (s.orra_n < 1 || s.orra_n > orra::kMaxResources || s.orra_d < 1))
        throw SpecError("orra.n must lie in [1, 31] and orra.d must be positive");
    if (!axes.count(s.sweep_axis)) throw SpecError("sweep.axis must be none, robustness, epsilon, T, p_err or p");
    if (s.sweep_values.empty()) throw SpecError("sweep.values must be nonempty");
    if (s.seeds.empty()) throw SpecError("seeds must be nonempty");
    if (std::set<std::uint64_t>(s.seeds.begin(), s.seeds.end()).size() != s.seeds.size())
        throw SpecError("seeds must be distinct");
    if (s.threads < 0) throw SpecError("threads must be nonnegative");
    for (const auto& a : s.algorithms) {
        const auto it = algorithm_table().find(a.name);
        if (it == algorithm_table().end()) throw SpecError("unknown algorithm '" + a.name + "'");
        if (std::find(it->second.begin(), it->second.end(), s.application) == it->second.end())
            throw SpecError("algorithm '" + a.name + "' does not apply to " + s.application);
        const auto& allowed = algorithm_params().at(a.name);
        for (const auto& [k, v] : a.params) {
            if (!allowed.count(k)) throw SpecError("algorithm '" + a.name + "' has no parameter '" + k + "'");
            if (k != "label") parse_number(v, "algorithm." + k);
        }
    }
}

// ---------------------------------------------------------------- running

namespace {

double rounded(double x) { return std::isfinite(x) ? std::stod(format_number(x)) : x; }

double param(const AlgorithmSpec& a, const std::string& key, double fallback) {
    const auto it = a.params.find(key);
    return it == a.params.end() ? fallback : parse_number(it->second, key);
}

std::string label_of(const AlgorithmSpec& a) {
    const auto it = a.params.find("label");
    return it == a.params.end() ? a.name : it->second;
}

struct Shared {
    std::optional<kserver::Metric> metric;
    int k = 0;
    std::optional<oltq::Sequence> oltq_file_requests, oltq_file_prediction;
    int oltq_file_ell = 0;
    std::optional<kserver::Sequence> ks_file_requests, ks_file_prediction;
    std::optional<orra::Instance> orra_file, orra_file_prediction;
};

template <class T>
T read_with(const std::string& path, T (*reader)(std::istream&)) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open '" + path + "'");
    return reader(in);
}

Shared load_shared(const ExperimentSpec& s) {
    Shared sh;
    if (s.application == "kserver" || s.application == "caching") {
        if (!s.metric_file.empty()) {
            auto mf = read_with<kserver::MetricFile>(s.metric_file, kserver::read_metric);
            sh.metric = std::move(mf.metric);
            sh.k = s.k > 0 ? s.k : mf.k;
        } else {
            sh.metric = kserver::Metric::uniform(s.metric_uniform);
            sh.k = s.k;
        }
        if (sh.k > sh.metric->size()) throw SpecError("k exceeds the number of points");
        auto load = [&](const std::string& path) {
            std::ifstream in(path);
            if (!in) throw SpecError("cannot open '" + path + "'");
            return kserver::read_requests(in, *sh.metric);
        };
        if (s.generator == "file") sh.ks_file_requests = load(s.generator_file);
        if (s.prediction == "file") sh.ks_file_prediction = load(s.prediction_file);
    } else if (s.application == "oltq") {
        if (s.generator == "file") {
            const auto inst = read_with<oltq::Instance>(s.generator_file, oltq::read_instance);
            sh.oltq_file_requests = inst.requests;
            sh.oltq_file_ell = inst.ell;
        }
        if (s.prediction == "file")
            sh.oltq_file_prediction = read_with<oltq::Instance>(s.prediction_file, oltq::read_instance).requests;
    } else {
        if (s.generator == "file") sh.orra_file = read_with<orra::Instance>(s.generator_file, orra::read_instance);
        if (s.prediction == "file")
            sh.orra_file_prediction = read_with<orra::Instance>(s.prediction_file, orra::read_instance);
    }
    return sh;
}

template <class Seq, class Draw>
Seq perturb(const Seq& base, double p_err, std::uint64_t seed, Draw draw) {
    Rng rng(seed);
    Seq out = base;
    for (auto& x : out.items)
        if (rng.bernoulli(p_err)) x = draw(rng);
    return out;
}

struct Point {
    ExperimentSpec spec;  // generator parameters after applying the sweep
    double robustness = -1;
    double epsilon = -1;
};

Point sweep_point(const ExperimentSpec& s, double v) {
    Point pt{s, -1, -1};
    if (s.sweep_axis == "T") pt.spec.T = static_cast<int>(std::lround(v));
    else if (s.sweep_axis == "p_err") pt.spec.p_err = v;
    else if (s.sweep_axis == "p") pt.spec.p = v;
    else if (s.sweep_axis == "robustness") pt.robustness = v;
    else if (s.sweep_axis == "epsilon") pt.epsilon = v;
    return pt;
}

CompetitiveReport run_oltq(const Point& pt, const AlgorithmSpec& a, const Shared& sh, std::uint64_t root,
                           std::uint64_t seed, std::vector<std::string>& notes) {
    const ExperimentSpec& s = pt.spec;
    const std::uint64_t gseed = derive_seed(root, Purpose::generator, seed);
    int ell = s.ell;
    oltq::Sequence reality, prediction;
    if (s.generator == "geometric") {
        reality = gen_geometric(s.p, ell, s.T, gseed);
    } else if (s.generator == "file") {
        reality = *sh.oltq_file_requests;
        ell = sh.oltq_file_ell;
    } else {
        auto pair = gen_pattern(s.generator == "model1" ? PatternModel::I : PatternModel::II, s.p_err, ell, s.T, gseed);
        if (pair.padded) notes.push_back("padded_to_2ell");
        reality = std::move(pair.reality);
        prediction = std::move(pair.prediction);
    }
    if (s.prediction == "perfect") prediction = reality;
    else if (s.prediction == "noisy")
        prediction = perturb(reality, s.prediction_p_err, derive_seed(root, Purpose::prediction, seed),
                             [ell](Rng& r) { return static_cast<int>(r.below(static_cast<std::uint64_t>(ell + 1))); });
    else if (s.prediction == "file") prediction = *sh.oltq_file_prediction;

    const double eta = oltq::eta_oltq(ell);
    const std::uint64_t tseed = derive_seed(root, Purpose::trial, seed);
    double eps = param(a, "epsilon", 0.1);
    if (pt.robustness >= 0) eps = eta - pt.robustness;
    if (pt.epsilon >= 0) eps = pt.epsilon;
    if (a.name == "adaswitch-oltq") return oltq::adaswitch_oltq(ell, reality, prediction, eps, tseed).report;
    if (a.name == "adaswitch-oltq-regret")
        return oltq::adaswitch_oltq(ell, reality, prediction, eps, tseed, SwitchingMode::regret_based).report;
    if (a.name == "qfrac") return oltq::qfrac_only(ell, reality, prediction).report;
    double gamma = param(a, "gamma", eta / 2);
    if (pt.robustness >= 0) gamma = pt.robustness;
    if (pt.epsilon >= 0) gamma = eta - pt.epsilon;
    return oltq::strengthened_adaswitch_oltq(ell, reality, prediction, gamma, param(a, "Z", 4.0), tseed)
        .result.report;
}

CompetitiveReport run_kserver(const Point& pt, const AlgorithmSpec& a, const Shared& sh, std::uint64_t root,
                              std::uint64_t seed) {
    const ExperimentSpec& s = pt.spec;
    const kserver::Metric& m = *sh.metric;
    const int n = m.size();
    kserver::Sequence reality = s.generator == "file" ? *sh.ks_file_requests
                                                      : gen_points(n, s.T, derive_seed(root, Purpose::generator, seed));
    kserver::Sequence prediction = reality;
    if (s.prediction == "noisy")
        prediction = perturb(reality, s.prediction_p_err, derive_seed(root, Purpose::prediction, seed),
                             [n](Rng& r) { return static_cast<int>(r.below(static_cast<std::uint64_t>(n))); });
    else if (s.prediction == "file") prediction = *sh.ks_file_prediction;
    kserver::ServerConfig start(static_cast<std::size_t>(sh.k));
    for (int i = 0; i < sh.k; ++i) start[static_cast<std::size_t>(i)] = i;
    const bool caching = s.application == "caching";
    const auto variant = caching ? kserver::Variant::caching : kserver::Variant::general;
    const double eta = caching ? kserver::eta_caching(sh.k) : kserver::eta_kse(sh.k);
    const std::uint64_t tseed = derive_seed(root, Purpose::trial, seed);
    if (a.name == "wfa" || a.name == "marking") return kserver::online_only(m, start, reality, prediction, variant, tseed).report;
    double eps = param(a, "epsilon", -1.0);
    if (pt.robustness >= 0) eps = pt.robustness - eta;
    if (pt.epsilon >= 0) eps = pt.epsilon;
    if (pt.robustness >= 0 && !(eps > 0)) throw ConfigError("robustness must exceed eta for cost problems");
    return kserver::adaswitch_kse(m, start, reality, prediction, eps, variant, tseed).report;
}

CompetitiveReport run_orra(const Point& pt, const AlgorithmSpec& a, const Shared& sh, std::uint64_t root,
                           std::uint64_t seed) {
    const ExperimentSpec& s = pt.spec;
    orra::OrraParams prm{s.orra_n, s.orra_d};
    orra::Sequence reality;
    if (s.generator == "file") {
        prm = sh.orra_file->params;
        reality = sh.orra_file->requests;
    } else {
        reality = gen_bernoulli(prm.n, s.p, s.T, derive_seed(root, Purpose::generator, seed));
    }
    orra::Sequence prediction = reality;
    if (s.prediction == "noisy")
        prediction = perturb(reality, s.prediction_p_err, derive_seed(root, Purpose::prediction, seed),
                             [n = prm.n](Rng& r) { return static_cast<orra::Request>(r.below(1u << n)); });
    else if (s.prediction == "file") prediction = sh.orra_file_prediction->requests;
    const std::uint64_t tseed = derive_seed(root, Purpose::trial, seed);
    if (a.name == "prr") return orra::prr_only(prm, reality, prediction, tseed).report;
    orra::OrraSettings st;
    st.eta = param(a, "eta", 0.589);
    st.alpha = param(a, "alpha", 3.0);
    st.epsilon = param(a, "epsilon", 0.1);
    st.monte_carlo_cap = static_cast<std::uint64_t>(param(a, "mc_cap", 10000));
    st.monte_carlo_base_H = static_cast<std::uint64_t>(param(a, "mc_base", 1));
    if (pt.robustness >= 0) st.epsilon = st.eta - pt.robustness;
    if (pt.epsilon >= 0) st.epsilon = pt.epsilon;
    st.seed = tseed;
    return orra::adaswitch_orra(prm, reality, prediction, st).report;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == ';' || c == '\n' || c == '\r' || c == '"') c = ' ';
    return s;
}

}  // namespace

ExperimentTable run_experiment(const ExperimentSpec& spec) {
    check_spec(spec);
    const Shared shared = load_shared(spec);
    const std::size_t A = spec.algorithms.size(), V = spec.sweep_values.size(), S = spec.seeds.size();
    const std::size_t total = A * V * S;
    ExperimentTable table;
    table.rows.resize(total);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx; (idx = next.fetch_add(1)) < total;) {
            const std::size_t ai = idx / (V * S), vi = (idx / S) % V, si = idx % S;
            const AlgorithmSpec& alg = spec.algorithms[ai];
            const double v = spec.sweep_values[vi];
            const std::uint64_t seed = spec.seeds[si];
            ResultRow& row = table.rows[idx];
            row.app = spec.application;
            row.algorithm = label_of(alg);
            row.sweep_axis = spec.sweep_axis;
            row.sweep_value = rounded(v);
            row.seed = seed;
            try {
                const Point pt = sweep_point(spec, v);
                std::vector<std::string> notes;
                CompetitiveReport r;
                if (spec.application == "oltq") r = run_oltq(pt, alg, shared, spec.root_seed, seed, notes);
                else if (spec.application == "orra") r = run_orra(pt, alg, shared, spec.root_seed, seed);
                else r = run_kserver(pt, alg, shared, spec.root_seed, seed);
                for (const auto& n : notes) r.flag(n);
                row.val = rounded(r.val);
                row.opt = rounded(r.opt);
                if (r.ratio) row.ratio = rounded(*r.ratio);
                row.phi_star = rounded(r.phi_star);
                row.switches = r.switches();
                if (r.bound_app) row.bound = rounded(*r.bound_app);
                else if (r.bound_T1) row.bound = rounded(*r.bound_T1);
                std::string flags;
                for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + sanitize(f);
                row.flags = flags;
            } catch (const std::exception& e) {
                row.error = sanitize(e.what());
            }
        }
    };
    unsigned n = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
    n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    table.aggregates = aggregate(table.rows);
    return table;
}

std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows) {
    std::vector<Aggregate> out;
    std::vector<std::vector<double>> ratios;
    std::vector<double> vals, opts;
    for (const auto& r : rows) {
        std::size_t i = 0;
        while (i < out.size() && !(out[i].algorithm == r.algorithm && out[i].sweep_value == r.sweep_value)) ++i;
        if (i == out.size()) {
            out.push_back({r.algorithm, r.sweep_axis, r.sweep_value, 0, 0, 0, 0, 0, 0, 0});
            ratios.emplace_back();
            vals.push_back(0);
            opts.push_back(0);
        }
        Aggregate& a = out[i];
        ++a.rows;
        if (r.error) {
            ++a.errors;
            continue;
        }
        vals[i] += r.val;
        opts[i] += r.opt;
        if (r.ratio) ratios[i].push_back(*r.ratio);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        Aggregate& a = out[i];
        const int ok = a.rows - a.errors;
        if (ok > 0) {
            a.mean_val = vals[i] / ok;
            a.mean_opt = opts[i] / ok;
        }
        const auto& x = ratios[i];
        a.ratio_rows = static_cast<int>(x.size());
        if (x.empty()) continue;
        double sum = 0;
        for (double v : x) sum += v;
        a.mean_ratio = sum / static_cast<double>(x.size());
        if (x.size() > 1) {
            double ss = 0;
            for (double v : x) ss += (v - a.mean_ratio) * (v - a.mean_ratio);
            a.stderr_ratio = std::sqrt(ss / static_cast<double>(x.size() - 1)) / std::sqrt(static_cast<double>(x.size()));
        }
    }
    return out;
}

// ---------------------------------------------------------------- CSV

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
            else if (c == '"') quoted = false;
            else cur += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string rows_csv_header() {
    return "app,algorithm,sweep_axis,sweep_value,seed,val,opt,ratio,phi_star,switches,bound,flags";
}

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << rows_csv_header() << '\n';
    for (const auto& r : rows) {
        out << csv_field(r.app) << ',' << csv_field(r.algorithm) << ',' << r.sweep_axis << ','
            << format_number(r.sweep_value) << ',' << r.seed << ',';
        if (r.error) {
            out << ",,,,,," << csv_field("error=" + *r.error) << '\n';
            continue;
        }
        out << format_number(r.val) << ',' << format_number(r.opt) << ','
            << (r.ratio ? format_number(*r.ratio) : "") << ',' << format_number(r.phi_star) << ','
            << r.switches << ',' << (r.bound ? format_number(*r.bound) : "") << ',' << csv_field(r.flags) << '\n';
    }
}

std::vector<ResultRow> read_rows_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != rows_csv_header()) throw std::runtime_error("unexpected CSV header");
    std::vector<ResultRow> rows;
    auto num = [](const std::string& s) { return s == "inf" ? kInf : s == "nan" ? std::nan("") : std::stod(s); };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 12) throw std::runtime_error("CSV row has " + std::to_string(f.size()) + " fields");
        ResultRow r;
        r.app = f[0];
        r.algorithm = f[1];
        r.sweep_axis = f[2];
        r.sweep_value = num(f[3]);
        r.seed = std::stoull(f[4]);
        if (f[11].rfind("error=", 0) == 0 && f[5].empty()) {
            r.error = f[11].substr(6);
        } else {
            r.val = num(f[5]);
            r.opt = num(f[6]);
            if (!f[7].empty()) r.ratio = num(f[7]);
            r.phi_star = num(f[8]);
            r.switches = std::stoi(f[9]);
            if (!f[10].empty()) r.bound = num(f[10]);
            r.flags = f[11];
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_aggregates_csv(std::ostream& out, const std::vector<Aggregate>& aggs) {
    out << "algorithm,sweep_axis,sweep_value,rows,ratio_rows,mean_ratio,stderr_ratio,mean_val,mean_opt,errors\n";
    for (const auto& a : aggs)
        out << csv_field(a.algorithm) << ',' << a.sweep_axis << ',' << format_number(a.sweep_value) << ',' << a.rows
            << ',' << a.ratio_rows << ',' << format_number(a.mean_ratio) << ',' << format_number(a.stderr_ratio)
            << ',' << format_number(a.mean_val) << ',' << format_number(a.mean_opt) << ',' << a.errors << '\n';
}

void write_aggregate_table(std::ostream& out, const std::vector<Aggregate>& aggs) {
    std::size_t w = 9;
    for (const auto& a : aggs) w = std::max(w, a.algorithm.size());
    char buf[160];
    out << std::left << std::setw(static_cast<int>(w + 2)) << "algorithm";
    std::snprintf(buf, sizeof buf, "%12s %6s %12s %12s %8s\n", "sweep", "rows", "mean_ratio", "stderr", "errors");
    out << buf;
    for (const auto& a : aggs) {
        out << std::left << std::setw(static_cast<int>(w + 2)) << a.algorithm;
        std::snprintf(buf, sizeof buf, "%12.6g %6d %12.6f %12.6f %8d\n", a.sweep_value, a.rows, a.mean_ratio,
                      a.stderr_ratio, a.errors);
        out << buf;
    }
}

// ---------------------------------------------------------------- SVG

void write_svg(std::ostream& out, const std::vector<Aggregate>& aggs) {
    const double W = 720, H = 440, left = 70, right = 190, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    std::vector<std::string> series;
    for (const auto& a : aggs) {
        if (std::find(series.begin(), series.end(), a.algorithm) == series.end()) series.push_back(a.algorithm);
        if (a.ratio_rows == 0) continue;
        x0 = std::min(x0, a.sweep_value);
        x1 = std::max(x1, a.sweep_value);
        y0 = std::min(y0, a.mean_ratio - a.stderr_ratio);
        y1 = std::max(y1, a.mean_ratio + a.stderr_ratio);
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.05, y1 += 0.05;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto X = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto Y = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    char buf[256];
    auto f = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof buf, fmt, args...);
        out << buf;
    };
    const std::string axis = aggs.empty() ? "sweep" : aggs.front().sweep_axis;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    f("<text x=\"%g\" y=\"24\" font-size=\"15\">mean ratio vs %s</text>\n", left, axis.c_str());
    f("<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#444\"/>\n", left, top, pw, ph);
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
        f("<line x1=\"%.2f\" y1=\"%g\" x2=\"%.2f\" y2=\"%g\" stroke=\"#444\"/>\n", X(xv), top + ph, X(xv), top + ph + 5);
        f("<text x=\"%.2f\" y=\"%g\" text-anchor=\"middle\">%.4g</text>\n", X(xv), top + ph + 20, xv);
        f("<line x1=\"%g\" y1=\"%.2f\" x2=\"%g\" y2=\"%.2f\" stroke=\"#ddd\"/>\n", left, Y(yv), left + pw, Y(yv));
        f("<text x=\"%g\" y=\"%.2f\" text-anchor=\"end\">%.4g</text>\n", left - 8, Y(yv) + 4, yv);
    }
    f("<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n", left + pw / 2, H - 15, axis.c_str());
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* col = colors[si % 8];
        std::vector<const Aggregate*> pts;
        for (const auto& a : aggs)
            if (a.algorithm == series[si] && a.ratio_rows > 0) pts.push_back(&a);
        std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->sweep_value < b->sweep_value; });
        if (pts.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
            for (auto* p : pts) f("%.2f,%.2f ", X(p->sweep_value), Y(p->mean_ratio));
            out << "\"/>\n";
        }
        for (auto* p : pts) {
            const double x = X(p->sweep_value);
            f("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\"/>\n", x,
              Y(p->mean_ratio - p->stderr_ratio), x, Y(p->mean_ratio + p->stderr_ratio), col);
            f("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n", x, Y(p->mean_ratio), col);
        }
        const double ly = top + 10 + 20.0 * static_cast<double>(si);
        f("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" stroke-width=\"2\"/>\n", left + pw + 15, ly,
          left + pw + 40, ly, col);
        out << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">";
        for (char c : series[si]) {
            if (c == '<') out << "&lt;";
            else if (c == '>') out << "&gt;";
            else if (c == '&') out << "&amp;";
            else out << c;
        }
        out << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace adaswitch::harness
