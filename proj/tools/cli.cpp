#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "slowent/arithmetic.hpp"
#include "slowent/covering.hpp"
#include "slowent/errors.hpp"
#include "slowent/iet.hpp"
#include "slowent/rotation_gaps.hpp"
#include "slowent/subshift.hpp"
#include "slowent/suspension.hpp"

#ifndef SLOWENT_VERSION
#define SLOWENT_VERSION "0.0.0"
#endif

namespace slowent::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OracleMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Outcome {
    std::vector<std::pair<std::string, std::string>> files;  // name, contents
    json results = json::object();
    std::string summary;
};

/// Typed access to string-valued parameters; failures name the flag.
class Params {
public:
    Params(const json& values, std::string prefix) : values_(values), prefix_(std::move(prefix)) {}

    bool has(const std::string& key) const {
        return values_.contains(key) && !(values_[key].is_string() && values_[key].get<std::string>().empty());
    }

    std::string flag(const std::string& key) const { return prefix_ + key; }

    std::string text(const std::string& key) const {
        if (!values_.contains(key)) throw UsageError(flag(key) + ": missing");
        const json& v = values_[key];
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
        throw UsageError(flag(key) + ": expected a string");
    }

    std::vector<std::string> list(const std::string& key) const {
        if (!values_.contains(key)) return {};
        const json& v = values_[key];
        if (!v.is_array()) throw UsageError(flag(key) + ": expected a list");
        std::vector<std::string> out;
        for (const auto& item : v) {
            if (item.is_string())
                out.push_back(item.get<std::string>());
            else if (item.is_number_integer())
                out.push_back(std::to_string(item.get<std::int64_t>()));
            else
                throw UsageError(flag(key) + ": list entries must be strings or integers");
        }
        return out;
    }

    std::int64_t integer(const std::string& key, std::int64_t lo, std::int64_t hi) const {
        const std::string s = text(key);
        std::int64_t v = 0;
        try {
            std::size_t used = 0;
            v = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw UsageError(flag(key) + ": not an integer: '" + s + "'");
        }
        if (v < lo || v > hi)
            throw UsageError(flag(key) + ": " + s + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return v;
    }

    std::uint64_t seed(const std::string& key) const {
        const std::string s = text(key);
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(s, &used);
            if (used != s.size() || s.front() == '-') throw std::invalid_argument("bad seed");
            return v;
        } catch (const std::exception&) {
            throw UsageError(flag(key) + ": not an unsigned integer: '" + s + "'");
        }
    }

    double real(const std::string& key, double lo, double hi) const {
        const double v = to_double(rational(key));
        if (!(v >= lo && v <= hi)) throw UsageError(flag(key) + ": outside [" + fmt(lo) + ", " + fmt(hi) + "]");
        return v;
    }

    Rational rational(const std::string& key) const {
        const std::string s = text(key);
        try {
            return parse_rational(s);
        } catch (const std::exception& e) {
            throw UsageError(flag(key) + ": " + e.what());
        }
    }

    /// CF spec at `depth` ("auto": deep enough for orbit horizons up to
    /// `hint`), or an exact rational.
    IrrationalParam irrational(const std::string& key, const std::string& depth, std::int64_t hint) const {
        const std::string s = text(key);
        const bool is_cf = s.find('[') != std::string::npos;
        if (!is_cf) {
            Rational value;
            try {
                value = parse_rational(s);
            } catch (const std::exception& e) {
                throw UsageError(flag(key) + ": " + e.what());
            }
            return IrrationalParam::exact(value);
        }
        ContinuedFraction cf = ContinuedFraction::finite({2});
        try {
            cf = ContinuedFraction::parse(s);
        } catch (const std::exception& e) {
            throw UsageError(flag(key) + ": " + e.what());
        }
        try {
            if (depth == "auto") return param_for_horizon(cf, hint);
            std::size_t used = 0;
            long long d = -1;
            try {
                d = std::stoll(depth, &used);
            } catch (const std::exception&) {
            }
            if (d < 1 || used != depth.size()) throw UsageError("--depth: expected 'auto' or a positive integer");
            return IrrationalParam::from_cf(cf, static_cast<std::size_t>(d));
        } catch (const PrecisionError& e) {
            throw PrecisionError(flag(key) + " (depth " + depth + "): " + e.what());
        } catch (const DomainError& e) {
            throw UsageError(flag(key) + " (depth " + depth + "): " + e.what());
        }
    }

    static std::string fmt(double x) {
        std::ostringstream os;
        os << x;
        return os.str();
    }

private:
    const json& values_;
    std::string prefix_;
};

/// Names the parameters to blame for core precision/resource errors.
struct Blame {
    std::string precision;
    std::string resource;
};

using Handler = std::function<Outcome(const json& params, Blame& blame)>;

std::string fixed(double x, int digits = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

json estimate_json(const CoveringEstimate& est) {
    json records = json::array();
    for (const auto& r : est.estimate.record_subsequence) records.push_back({r.n, r.count});
    json j;
    j["epsilon"] = to_pq(est.epsilon);
    j["samples"] = est.samples;
    j["seed"] = est.seed;
    j["exponent"] = est.estimate.exponent;
    j["fit_residual"] = est.estimate.fit_residual;
    j["fit_range"] = {est.estimate.n_range.first, est.estimate.n_range.second};
    j["resolved_horizons"] = est.resolved;
    j["records"] = records;
    j["iterations"] = est.estimate.iterations;
    return j;
}

std::string covering_csv(const CoveringEstimate& est, const std::string& horizon_name) {
    std::ostringstream os;
    os << horizon_name << ",centers,in_fit\n";
    for (std::size_t i = 0; i < est.counts.size(); ++i)
        os << est.counts[i].n << ',' << static_cast<std::int64_t>(est.counts[i].count) << ','
           << (i < est.resolved ? 1 : 0) << '\n';
    return os.str();
}

std::vector<std::int64_t> horizon_grid(const Params& p, const std::string& lo_key, const std::string& hi_key) {
    const std::int64_t lo = p.integer(lo_key, 1, std::int64_t{1} << 40);
    const std::int64_t hi = p.integer(hi_key, lo, std::int64_t{1} << 40);
    const double ratio = p.real("ratio", 1.0001, 100.0);
    return geometric_grid(lo, hi, ratio);
}

// ---- subcommands -----------------------------------------------------------

Outcome run_cf(const json& params, Blame& blame) {
    Params p(params, "--");
    blame.precision = "--theta";
    const std::string spec = p.text("theta");
    ContinuedFraction cf = ContinuedFraction::finite({2});
    try {
        cf = ContinuedFraction::parse(spec);
    } catch (const std::exception& e) {
        throw UsageError("--theta: " + std::string(e.what()));
    }
    const auto depth = static_cast<std::size_t>(p.integer("depth", 1, 10000));
    const ConvergentList list = convergents(cf, depth);

    std::ostringstream csv;
    csv << "k,a_k,p_k,q_k,convergent\n";
    for (std::size_t i = 0; i < list.items.size(); ++i) {
        const auto& c = list.items[i];
        csv << i + 1 << ',' << cf.quotient(i + 1) << ',' << c.p.get_str() << ',' << c.q.get_str() << ','
            << to_pq(Rational{c.p, c.q}) << '\n';
    }
    const std::size_t used = list.items.size();
    const IrrationalParam proxy = IrrationalParam::from_cf(cf, used);

    Outcome o;
    o.files.emplace_back("convergents.csv", csv.str());
    o.results["expansion"] = cf.to_string();
    o.results["depth"] = used;
    o.results["truncated"] = list.truncated;
    o.results["proxy"] = to_pq(proxy.proxy());
    o.results["error_bound"] = to_pq(proxy.error_bound());
    o.summary = "cf " + cf.to_string() + ": " + std::to_string(used) + " convergents, proxy " + to_pq(proxy.proxy()) +
                " (error < " + std::to_string(to_double(proxy.error_bound())) + ")";
    return o;
}

Outcome run_gaps(const json& params, Blame& blame) {
    Params p(params, "--");
    const std::int64_t n_max = p.integer("n", 1, 10'000'000);
    const std::int64_t n_min = p.integer("nmin", 1, n_max);
    const std::int64_t check_max = p.integer("check-max", 0, 10'000'000);
    blame.precision = "--theta";
    blame.resource = "--n";
    const IrrationalParam theta = p.irrational("theta", p.text("depth"), n_max);

    std::ostringstream csv;
    csv << gap_csv_header() << '\n';
    std::int64_t checked = 0;
    GapStructure last;
    for (std::int64_t n = n_min; n <= n_max; ++n) {
        last = gap_structure(theta, n);
        last.check();
        if (n <= check_max) {
            if (!(last.multiset() == sorted_gap_multiset(theta, n)))
                throw OracleMismatch("gap structure differs from the sorted differences at n = " + std::to_string(n));
            ++checked;
        }
        csv << gap_csv_row(last) << '\n';
    }
    Outcome o;
    o.files.emplace_back("gaps.csv", csv.str());
    o.results["theta"] = theta.describe();
    o.results["rows"] = n_max - n_min + 1;
    o.results["oracle_checked"] = checked;
    o.summary = "gaps n=" + std::to_string(n_min) + ".." + std::to_string(n_max) + ": " + std::to_string(checked) +
                " rows match sorted differences; at n=" + std::to_string(n_max) + " lengths " +
                fixed(to_double(last.small.length), 6) + " x" + std::to_string(last.small.count) + ", " +
                fixed(to_double(last.middle.length), 6) + " x" + std::to_string(last.middle.count) + ", " +
                fixed(to_double(last.large.length), 6) + " x" + std::to_string(last.large.count);
    return o;
}

Outcome run_sturmian(const json& params, Blame& blame) {
    Params p(params, "--");
    const std::int64_t n_max = p.integer("nmax", 1, 100'000);
    const std::int64_t w_max = std::min(n_max, p.integer("windowed-max", 0, 100'000));
    const std::int64_t length =
        p.text("length") == "auto" ? 50 * w_max + 1000 : p.integer("length", w_max, std::int64_t{1} << 31);
    blame.precision = "--theta";
    blame.resource = "--length";
    const IrrationalParam theta = p.irrational("theta", p.text("depth"), std::max(n_max, length));

    std::ostringstream csv;
    csv << complexity_csv_header() << '\n';
    std::int64_t deviations = 0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const FactorCount c = complexity_exact_rotation(theta, n);
        if (c.count != n + 1) ++deviations;
        csv << complexity_csv_row(c) << '\n';
    }
    std::int64_t windowed_deviations = 0;
    if (w_max > 0) {
        const CodedWord coded = sturmian_word(theta, Rational{0}, length);
        for (const FactorCount& c : complexity_profile_windowed(coded.word, w_max)) {
            if (c.count != c.n + 1) ++windowed_deviations;
            csv << complexity_csv_row(c) << '\n';
        }
    }
    Outcome o;
    o.files.emplace_back("complexity.csv", csv.str());
    o.results["theta"] = theta.describe();
    o.results["exact_deviations"] = deviations;
    o.results["windowed_deviations"] = windowed_deviations;
    o.results["word_length"] = length;
    o.summary = "sturmian: p_n = n+1 fails at " + std::to_string(deviations) + " of " + std::to_string(n_max) +
                " exact counts and " + std::to_string(windowed_deviations) + " of " + std::to_string(w_max) +
                " windowed counts";
    return o;
}

Outcome run_product(const json& params, Blame& blame) {
    Params p(params, "--");
    const std::vector<std::string> specs = p.list("theta");
    if (specs.empty() || specs.size() > 3) throw UsageError("--theta: give between 1 and 3 rotation numbers");
    const auto m = static_cast<int>(specs.size());
    const std::int64_t n_max = p.integer("nmax", 1, 10'000);
    std::int64_t length = 0;
    if (p.text("length") == "auto") {
        double need = 40.0;
        for (int i = 0; i < m; ++i) need *= static_cast<double>(n_max + 1);
        need += 1000;
        if (need > 2e9) throw ResourceError("--length: automatic word length exceeds 2^31; lower --nmax");
        length = static_cast<std::int64_t>(need);
    } else {
        length = p.integer("length", n_max, std::int64_t{1} << 31);
    }
    blame.precision = "--theta";
    blame.resource = "--length";
    std::vector<IrrationalParam> thetas;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        json one = {{"theta", specs[i]}};
        thetas.push_back(Params(one, "--").irrational("theta", p.text("depth"), length));
    }
    const CodedWord coded = product_word(thetas, std::vector<Rational>(specs.size(), Rational{0}), length);
    const auto profile = complexity_profile_windowed(coded.word, n_max);

    std::ostringstream csv;
    csv << "n,p_n_windowed,p_n_formula\n";
    std::int64_t deviations = 0;
    std::vector<CountPoint> points;
    for (const FactorCount& c : profile) {
        const std::int64_t formula = product_complexity(thetas, c.n).count;
        if (formula != c.count) ++deviations;
        csv << c.n << ',' << c.count << ',' << formula << '\n';
        points.push_back({c.n, static_cast<double>(c.count)});
    }
    Outcome o;
    o.files.emplace_back("product_complexity.csv", csv.str());
    json described = json::array();
    for (const auto& t : thetas) described.push_back(t.describe());
    o.results["thetas"] = described;
    o.results["word_length"] = length;
    o.results["deviations"] = deviations;
    std::string fit = "n/a";
    if (points.size() >= 8) {
        const EntropyEstimate est = top_slow_entropy(points, ScaleFamily::polynomial);
        o.results["exponent"] = est.exponent;
        o.results["fit_residual"] = est.fit_residual;
        fit = fixed(est.exponent, 3);
    }
    o.summary = "product m=" + std::to_string(m) + ": windowed counts differ from (n+1)^m at " +
                std::to_string(deviations) + " of " + std::to_string(n_max) + " lengths; exponent " + fit;
    return o;
}

IntervalExchange build_iet(const Params& spec, const std::string& depth, std::int64_t hint, json& described) {
    if (spec.has("lengths")) {
        std::vector<Rational> lengths;
        for (const std::string& s : spec.list("lengths")) {
            try {
                lengths.push_back(parse_rational(s));
            } catch (const std::exception& e) {
                throw UsageError(spec.flag("lengths") + ": " + e.what());
            }
        }
        auto perm = [&](const std::string& key) {
            std::vector<int> out;
            for (const std::string& s : spec.list(key)) {
                try {
                    out.push_back(std::stoi(s));
                } catch (const std::exception&) {
                    throw UsageError(spec.flag(key) + ": not an integer: '" + s + "'");
                }
            }
            return out;
        };
        std::vector<int> top = perm("top"), bottom = perm("bottom");
        try {
            IntervalExchange g = (top.empty() && bottom.empty())
                                     ? IntervalExchange::symmetric(lengths)
                                     : IntervalExchange(lengths, std::move(top), std::move(bottom));
            described["kind"] = "lengths";
            return g;
        } catch (const ConstructionError& e) {
            throw UsageError(spec.flag("lengths") + "/" + spec.flag("top") + "/" + spec.flag("bottom") + ": " +
                             e.what());
        }
    }
    if (!spec.has("alpha") || !spec.has("xi"))
        throw UsageError(spec.flag("alpha") + ", " + spec.flag("xi") + ": both needed when no lengths are given");
    const IrrationalParam alpha = spec.irrational("alpha", depth, hint);
    const IrrationalParam xi = spec.irrational("xi", depth, hint);
    ThreeIetLengths lengths;
    try {
        lengths = from_alpha_xi(alpha, xi);
    } catch (const DomainError& e) {
        throw UsageError(spec.flag("alpha") + "/" + spec.flag("xi") + ": " + e.what());
    }
    described["kind"] = "alpha_xi";
    described["alpha"] = alpha.describe();
    described["xi"] = xi.describe();
    described["length_error"] = to_pq(lengths.error_bound);
    return three_iet(lengths);
}

Outcome run_iet(const json& params, Blame& blame) {
    Params p(params, "--");
    const std::int64_t n_max = p.integer("nmax", 1, 1'000'000);
    const std::int64_t idoc_depth = p.text("idoc-depth") == "auto" ? n_max : p.integer("idoc-depth", 1, 10'000'000);
    blame.precision = "--alpha/--xi";
    blame.resource = "--nmax";
    json described;
    const IntervalExchange g = build_iet(p, p.text("depth"), std::max<std::int64_t>(100 * n_max, 1'000'000), described);
    const auto profile = linear_recurrence_profile(g, n_max);
    const IdocReport idoc = idoc_check(g, idoc_depth);

    std::ostringstream csv;
    csv << "n,atoms,min_atom,scaled_min,max_min_ratio\n";
    const auto d = static_cast<std::int64_t>(g.size());
    std::int64_t linear_misses = 0;
    for (const RecurrencePoint& r : profile) {
        if (r.atoms != (d - 1) * r.n + 1) ++linear_misses;
        csv << r.n << ',' << r.atoms << ',' << to_pq(r.min_atom) << ',' << to_pq(r.scaled_min) << ','
            << to_pq(r.max_min_ratio) << '\n';
    }
    json lengths = json::array();
    for (const Rational& l : g.lengths()) lengths.push_back(to_pq(l));
    described["lengths"] = lengths;
    described["irreducible"] = g.irreducible();

    Outcome o;
    o.files.emplace_back("refinement.csv", csv.str());
    o.results["system"] = described;
    o.results["idoc_depth"] = idoc.depth;
    o.results["idoc_up_to_depth"] = idoc.idoc_up_to_depth;
    if (idoc.first_collision) {
        o.results["first_collision_n"] = idoc.first_collision->first;
        o.results["first_collision_point"] = to_pq(idoc.first_collision->second);
    }
    o.results["counts_off_(d-1)n+1"] = linear_misses;
    const RecurrencePoint& last = profile.back();
    o.summary = "iet d=" + std::to_string(d) + ": " + std::to_string(last.atoms) + " atoms at n=" +
                std::to_string(last.n) + ", n*min_atom " + fixed(to_double(last.scaled_min)) + ", idoc " +
                (idoc.idoc_up_to_depth ? "holds" : "fails") + " to depth " + std::to_string(idoc.depth);
    return o;
}

Outcome run_entropy(const json& params, Blame& blame) {
    Params p(params, "--");
    const std::string system = p.text("system");
    if (system != "rotation" && system != "iet") throw UsageError("--system: expected 'rotation' or 'iet'");
    if (!params.contains("system_spec") || !params["system_spec"].is_object())
        throw UsageError("--spec: a system description is required");
    const Params spec(params["system_spec"], "spec:");
    const Rational eps = p.rational("epsilon");
    const std::int64_t samples = p.integer("samples", 1, 1'000'000);
    const std::uint64_t seed = p.seed("seed");
    const auto grid = horizon_grid(p, "nmin", "nmax");
    const std::int64_t hint = std::max<std::int64_t>(100 * grid.back(), 1'000'000);

    blame.precision = system == "rotation" ? "spec:theta" : "spec:alpha/spec:xi";
    blame.resource = "--nmax/--samples";
    json described;
    IntervalExchange g = [&] {
        if (system == "rotation") {
            const IrrationalParam theta = spec.irrational("theta", p.text("depth"), hint);
            described["theta"] = theta.describe();
            return rotation_iet(theta);
        }
        return build_iet(spec, p.text("depth"), hint, described);
    }();
    CoveringEstimate est;
    try {
        est = metric_slow_entropy_estimate(g, eps, grid, samples, seed);
    } catch (const DomainError& e) {
        throw UsageError(std::string("--epsilon/--samples/--nmin/--nmax: ") + e.what());
    }
    Outcome o;
    o.files.emplace_back("counts.csv", covering_csv(est, "n"));
    json estimate = estimate_json(est);
    estimate["system"] = system;
    estimate["description"] = described;
    o.files.emplace_back("estimate.json", estimate.dump(2) + "\n");
    o.results = estimate;
    o.summary = "entropy " + system + ": " + std::to_string(static_cast<std::int64_t>(est.counts.back().count)) +
                " centers at n=" + std::to_string(est.counts.back().n) + ", exponent " +
                fixed(est.estimate.exponent, 3) + " (residual " + fixed(est.estimate.fit_residual, 3) + ")";
    return o;
}

Outcome run_suspend(const json& params, Blame& blame) {
    Params p(params, "--");
    const Rational eps = p.rational("epsilon");
    const std::int64_t samples = p.integer("samples", 1, 1'000'000);
    const std::uint64_t seed = p.seed("seed");
    const auto grid = horizon_grid(p, "rmin", "rmax");
    StepRoof roof{p.rational("xi"), p.rational("d1"), p.rational("d2")};
    try {
        roof.validate();
    } catch (const DomainError& e) {
        throw UsageError(std::string("--xi/--d1/--d2: ") + e.what());
    }
    blame.precision = "--alpha";
    blame.resource = "--rmax/--samples";
    const IrrationalParam alpha =
        p.irrational("alpha", p.text("depth"), std::max<std::int64_t>(100'000'000, 10'000 * grid.back()));
    std::int64_t k = 0;
    try {
        k = p.text("grid-k") == "auto" ? default_grid_k(eps) : p.integer("grid-k", 1, 100'000);
    } catch (const DomainError& e) {
        throw UsageError(std::string("--epsilon: ") + e.what());
    }
    FlowCovering fc;
    try {
        fc = flow_hamming_covering(alpha, roof, eps, grid, samples, seed, k);
    } catch (const DomainError& e) {
        throw UsageError(std::string("--epsilon/--samples/--rmin/--rmax: ") + e.what());
    }
    Outcome o;
    o.files.emplace_back("counts.csv", covering_csv(fc.covering, "R"));
    json estimate = estimate_json(fc.covering);
    estimate["alpha"] = alpha.describe();
    estimate["roof"] = {{"xi", to_pq(roof.xi)}, {"d1", to_pq(roof.d1)}, {"d2", to_pq(roof.d2)}};
    estimate["grid_k"] = fc.grid_k;
    estimate["proposals"] = fc.proposals;
    o.files.emplace_back("estimate.json", estimate.dump(2) + "\n");
    o.results = estimate;
    o.summary = "suspension d=(" + to_pq(roof.d1) + "," + to_pq(roof.d2) + "): " +
                std::to_string(static_cast<std::int64_t>(fc.covering.counts.back().count)) + " centers at R=" +
                std::to_string(fc.covering.counts.back().n) + ", exponent " +
                fixed(fc.covering.estimate.exponent, 3);
    return o;
}

Outcome run_skew(const json& params, Blame& blame) {
    Params p(params, "--");
    const Rational eps = p.rational("epsilon");
    const std::int64_t samples = p.integer("samples", 1, 1'000'000);
    const std::uint64_t seed = p.seed("seed");
    const std::int64_t k = p.integer("grid-k", 1, 256);
    const auto grid = horizon_grid(p, "nmin", "nmax");
    blame.resource = "--nmax/--samples";
    CoveringEstimate est;
    try {
        est = skew_shift_covering(eps, grid, samples, seed, k);
    } catch (const DomainError& e) {
        throw UsageError(std::string("--epsilon/--samples/--nmin/--nmax: ") + e.what());
    }
    Outcome o;
    o.files.emplace_back("counts.csv", covering_csv(est, "n"));
    json estimate = estimate_json(est);
    estimate["grid_k"] = k;
    o.files.emplace_back("estimate.json", estimate.dump(2) + "\n");
    o.results = estimate;
    o.summary = "skew shift k=" + std::to_string(k) + ": " +
                std::to_string(static_cast<std::int64_t>(est.counts.back().count)) + " centers at n=" +
                std::to_string(est.counts.back().n) + ", exponent " + fixed(est.estimate.exponent, 3);
    return o;
}

// ---- command table -----------------------------------------------------------

struct OptionSpec {
    std::string name;
    std::string fallback;  // empty: required unless noted in help
    std::string help;
};

struct Command {
    std::string name;
    std::string description;
    std::vector<OptionSpec> options;
    Handler handler;
};

const std::vector<Command>& commands() {
    static const std::vector<Command> table = {
        {"cf", "Convergents of a continued fraction", {{"theta", "", "CF spec, e.g. \"[0;(1)]\""}, {"depth", "20", "number of convergents"}}, run_cf},
        {"gaps",
         "Three-gap structure of {j theta mod 1 : j <= n}",
         {{"theta", "", "rotation number: CF spec or p/q"},
          {"n", "", "largest horizon"},
          {"nmin", "1", "smallest horizon"},
          {"check-max", "2000", "compare against sorted differences for n up to this"},
          {"depth", "auto", "proxy depth"}},
         run_gaps},
        {"sturmian",
         "Factor complexity of the rotation coding",
         {{"theta", "", "rotation number"},
          {"nmax", "", "largest factor length"},
          {"windowed-max", "200", "largest length counted on a finite word"},
          {"length", "auto", "word length for windowed counts"},
          {"depth", "auto", "proxy depth"}},
         run_sturmian},
        {"product",
         "Windowed complexity of the coordinatewise coding of a product of rotations",
         {{"nmax", "100", "largest factor length"},
          {"length", "auto", "word length"},
          {"depth", "auto", "proxy depth"}},
         run_product},
        {"iet",
         "Refinement profile and idoc check of an interval exchange",
         {{"alpha", "", "3-IET rotation number (with --xi)"},
          {"xi", "", "3-IET cut point"},
          {"nmax", "500", "refinement depth"},
          {"idoc-depth", "auto", "backward-orbit depth for the idoc check"},
          {"depth", "auto", "proxy depth"}},
         run_iet},
        {"entropy",
         "Monte-Carlo Hamming covering growth of an interval exchange",
         {{"system", "iet", "rotation or iet"},
          {"epsilon", "1/20", "Hamming radius"},
          {"samples", "2000", "sample points"},
          {"seed", "1", "random seed"},
          {"nmin", "10", "smallest horizon"},
          {"nmax", "5000", "largest horizon"},
          {"ratio", "1.1", "geometric grid ratio"},
          {"depth", "auto", "proxy depth"}},
         run_entropy},
        {"suspend",
         "Hamming covering growth of a special flow under a step roof",
         {{"alpha", "[0;(1)]", "base rotation number"},
          {"xi", "1/2", "roof step point (exact rational)"},
          {"d1", "2", "roof height on [0, xi)"},
          {"d2", "1", "roof height on [xi, 1)"},
          {"epsilon", "1/10", "Hamming radius"},
          {"samples", "1000", "sample points"},
          {"seed", "1", "random seed"},
          {"rmin", "4", "smallest flow time"},
          {"rmax", "2000", "largest flow time"},
          {"ratio", "1.1", "geometric grid ratio"},
          {"grid-k", "auto", "atom grid 1/k (auto: ceil(20/epsilon))"},
          {"depth", "auto", "proxy depth"}},
         run_suspend},
        {"skew",
         "Hamming covering growth of the skew shift (x, y) -> (x, x + y)",
         {{"epsilon", "2/5", "Hamming radius"},
          {"samples", "2000", "sample points"},
          {"seed", "1", "random seed"},
          {"nmin", "8", "smallest horizon"},
          {"nmax", "5000", "largest horizon"},
          {"ratio", "1.1", "geometric grid ratio"},
          {"grid-k", "2", "k x k grid partition"}},
         run_skew},
    };
    return table;
}

const Command* find_command(const std::string& name) {
    for (const auto& c : commands())
        if (c.name == name) return &c;
    return nullptr;
}

void write_atomic(const fs::path& path, const std::string& contents) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << contents;
        if (!f) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

int execute(const Command& cmd, const json& params, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
    Blame blame;
    try {
        Outcome o = cmd.handler(params, blame);
        fs::create_directories(out_dir);
        json manifest;
        manifest["tool"] = "slowent";
        manifest["version"] = SLOWENT_VERSION;
        manifest["command"] = cmd.name;
        manifest["parameters"] = params;
        json outputs = json::array();
        for (const auto& [name, contents] : o.files) {
            write_atomic(out_dir / name, contents);
            outputs.push_back(name);
        }
        manifest["outputs"] = outputs;
        manifest["results"] = o.results;
        write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
        out << o.summary << " [" << out_dir.string() << "]\n";
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ConstructionError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const PrecisionError& e) {
        err << "precision error (" << (blame.precision.empty() ? "parameters" : blame.precision)
            << "; try a larger --depth or smaller horizon): " << e.what() << '\n';
        return 3;
    } catch (const ResourceError& e) {
        err << "resource limit (" << (blame.resource.empty() ? "parameters" : blame.resource) << "): " << e.what()
            << '\n';
        return 3;
    } catch (const InsufficientDataError& e) {
        err << "insufficient data (" << (blame.resource.empty() ? "parameters" : blame.resource) << "): " << e.what()
            << '\n';
        return 3;
    } catch (const OracleMismatch& e) {
        err << "oracle mismatch: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

json load_json_file(const std::string& path, const std::string& flag) {
    std::ifstream f(path);
    if (!f) throw UsageError(flag + ": cannot open '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError(flag + ": invalid JSON in '" + path + "': " + e.what());
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Slow entropy experiments for rotations, interval exchanges and special flows", "slowent"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SLOWENT_VERSION);

    // values[command][option]
    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::string> out_dirs;
    std::vector<std::string> product_thetas;
    std::string spec_file, entropy_theta, entropy_alpha, entropy_xi;

    for (const Command& c : commands()) {
        CLI::App* sub = app.add_subcommand(c.name, c.description);
        auto& v = values[c.name];
        for (const OptionSpec& o : c.options) {
            v[o.name] = o.fallback;
            CLI::Option* opt = sub->add_option("--" + o.name, v[o.name], o.help);
            if (o.fallback.empty() && c.name != "iet")
                opt->required();
            else
                opt->capture_default_str();
        }
        out_dirs[c.name] = "slowent-" + c.name;
        sub->add_option("--out", out_dirs[c.name], "output directory")->capture_default_str();
        if (c.name == "product")
            sub->add_option("--theta", product_thetas, "rotation number (repeat for each factor)")
                ->required()
                ->allow_extra_args(false);
        if (c.name == "entropy") {
            sub->add_option("--spec", spec_file, "JSON file describing the system");
            sub->add_option("--theta", entropy_theta, "rotation number (system rotation)");
            sub->add_option("--alpha", entropy_alpha, "3-IET rotation number (system iet)");
            sub->add_option("--xi", entropy_xi, "3-IET cut point (system iet)");
        }
        if (c.name == "iet") {
            sub->add_option("--lengths", values["iet-lists"]["lengths"], "comma-separated lengths (p/q)");
            sub->add_option("--top", values["iet-lists"]["top"], "comma-separated top positions");
            sub->add_option("--bottom", values["iet-lists"]["bottom"], "comma-separated bottom positions");
        }
    }
    std::string manifest_path, replay_out = "slowent-replay";
    CLI::App* replay = app.add_subcommand("replay", "Re-run the experiment recorded in a manifest");
    replay->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();
    replay->add_option("--out", replay_out, "output directory")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto split = [](const std::string& s) {
        json arr = json::array();
        if (s.empty()) return arr;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) arr.push_back(item);
        return arr;
    };

    try {
        if (replay->parsed()) {
            const json manifest = load_json_file(manifest_path, "--manifest");
            if (!manifest.contains("command") || !manifest["command"].is_string() || !manifest.contains("parameters"))
                throw UsageError("--manifest: missing command or parameters");
            const Command* cmd = find_command(manifest["command"].get<std::string>());
            if (!cmd) throw UsageError("--manifest: unknown command '" + manifest["command"].get<std::string>() + "'");
            return execute(*cmd, manifest["parameters"], replay_out, out, err);
        }
        for (const Command& c : commands()) {
            if (!app.got_subcommand(c.name)) continue;
            json params = json::object();
            for (const OptionSpec& o : c.options) params[o.name] = values[c.name][o.name];
            if (c.name == "product") params["theta"] = product_thetas;
            if (c.name == "iet") {
                const auto& lists = values["iet-lists"];
                if (lists.count("lengths") && !lists.at("lengths").empty()) {
                    params["lengths"] = split(lists.at("lengths"));
                    params["top"] = split(lists.count("top") ? lists.at("top") : "");
                    params["bottom"] = split(lists.count("bottom") ? lists.at("bottom") : "");
                }
            }
            if (c.name == "entropy") {
                json system_spec = json::object();
                if (!spec_file.empty()) {
                    system_spec = load_json_file(spec_file, "--spec");
                    if (!system_spec.is_object()) throw UsageError("--spec: expected a JSON object");
                    if (system_spec.contains("system")) params["system"] = system_spec["system"];
                }
                if (!entropy_theta.empty()) system_spec["theta"] = entropy_theta;
                if (!entropy_alpha.empty()) system_spec["alpha"] = entropy_alpha;
                if (!entropy_xi.empty()) system_spec["xi"] = entropy_xi;
                params["system_spec"] = system_spec;
            }
            return execute(c, params, out_dirs[c.name], out, err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
    err << "no subcommand\n";
    return 2;
}

}  // namespace slowent::cli
