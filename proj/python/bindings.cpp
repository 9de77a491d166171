#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slowent/arithmetic.hpp"
#include "slowent/covering.hpp"
#include "slowent/errors.hpp"
#include "slowent/iet.hpp"
#include "slowent/rotation_gaps.hpp"
#include "slowent/scales.hpp"
#include "slowent/subshift.hpp"
#include "slowent/suspension.hpp"

namespace py = pybind11;
using namespace slowent;

// mpq_class <-> fractions.Fraction (ints and "p/q" strings accepted on input)
namespace pybind11::detail {

template <>
struct type_caster<Rational> {
    PYBIND11_TYPE_CASTER(Rational, const_name("fractions.Fraction"));

    bool load(handle src, bool) {
        if (!src) return false;
        if (py::isinstance<py::str>(src)) {
            try {
                value = parse_rational(src.cast<std::string>());
                return true;
            } catch (const std::exception&) {
                return false;
            }
        }
        if (py::isinstance<py::bool_>(src) || py::isinstance<py::float_>(src)) return false;
        if (!py::hasattr(src, "numerator") || !py::hasattr(src, "denominator")) return false;
        const auto num = py::str(src.attr("numerator")).cast<std::string>();
        const auto den = py::str(src.attr("denominator")).cast<std::string>();
        value = Rational{Integer{num}, Integer{den}};
        value.canonicalize();
        return true;
    }

    static handle cast(const Rational& x, return_value_policy, handle) {
        static py::object fraction = py::module_::import("fractions").attr("Fraction");
        py::object num = py::int_(py::str(x.get_num().get_str()));
        py::object den = py::int_(py::str(x.get_den().get_str()));
        return fraction(num, den).release();
    }
};

}  // namespace pybind11::detail

namespace {

py::int_ to_py(const Integer& z) { return py::int_(py::str(z.get_str())); }

py::list measures_list(const MeasureMultiset& m) {
    py::list out;
    for (const auto& e : m.entries()) out.append(py::make_tuple(e.value, e.count));
    return out;
}

py::dict gap_dict(const GapStructure& g) {
    py::dict d;
    d["n"] = g.n;
    d["k"] = g.k;
    d["m"] = g.m;
    d["r"] = g.r;
    d["small"] = py::make_tuple(g.small.length, g.small.count);
    d["middle"] = py::make_tuple(g.middle.length, g.middle.count);
    d["large"] = py::make_tuple(g.large.length, g.large.count);
    return d;
}

py::dict estimate_dict(const EntropyEstimate& e) {
    py::dict d;
    d["exponent"] = e.exponent;
    d["fit_residual"] = e.fit_residual;
    d["n_range"] = py::make_tuple(e.n_range.first, e.n_range.second);
    py::list records;
    for (const auto& r : e.record_subsequence) records.append(py::make_tuple(r.n, r.count));
    d["records"] = records;
    return d;
}

py::dict covering_dict(const CoveringEstimate& c) {
    py::dict d = estimate_dict(c.estimate);
    py::list counts;
    for (const auto& p : c.counts) counts.append(py::make_tuple(p.n, static_cast<std::int64_t>(p.count)));
    d["counts"] = counts;
    d["resolved"] = c.resolved;
    d["samples"] = c.samples;
    d["seed"] = c.seed;
    return d;
}

std::vector<CountPoint> count_points(const std::vector<std::pair<std::int64_t, double>>& data) {
    std::vector<CountPoint> out;
    for (const auto& [n, c] : data) out.push_back({n, c});
    return out;
}

}  // namespace

PYBIND11_MODULE(_slowent, m) {
    m.doc() = "Exact-arithmetic slow entropy experiments";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_ValueError);
    py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_RuntimeError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);

    py::class_<ContinuedFraction>(m, "ContinuedFraction")
        .def_static("parse", &ContinuedFraction::parse, py::arg("spec"))
        .def("quotients", &ContinuedFraction::quotients, py::arg("depth"))
        .def("__str__", &ContinuedFraction::to_string)
        .def("__repr__", [](const ContinuedFraction& cf) { return "ContinuedFraction(" + cf.to_string() + ")"; });

    py::class_<IrrationalParam>(m, "Param")
        .def_static("parse", &IrrationalParam::parse, py::arg("spec"), py::arg("depth"))
        .def_static("exact", &IrrationalParam::exact, py::arg("value"))
        .def_static(
            "for_horizon",
            [](const std::string& spec, std::int64_t n) { return param_for_horizon(ContinuedFraction::parse(spec), n); },
            py::arg("spec"), py::arg("n"), "CF spec at a depth suited to orbit horizons up to n")
        .def_property_readonly("proxy", &IrrationalParam::proxy)
        .def_property_readonly("error_bound", &IrrationalParam::error_bound)
        .def_property_readonly("depth", &IrrationalParam::depth)
        .def_property_readonly("is_exact", &IrrationalParam::is_exact)
        .def("complement", &IrrationalParam::complement)
        .def("__repr__", [](const IrrationalParam& p) { return "Param(" + p.describe() + ")"; });

    m.def(
        "convergents",
        [](const std::string& spec, std::size_t k) {
            py::list out;
            for (const auto& c : convergents(ContinuedFraction::parse(spec), k).items)
                out.append(py::make_tuple(to_py(c.p), to_py(c.q)));
            return out;
        },
        py::arg("spec"), py::arg("k"), "(p_k, q_k) for k = 1..K");
    m.def("cf_of_rational", py::overload_cast<const Rational&>(&cf_of_rational), py::arg("x"));

    m.def("gap_structure", [](const IrrationalParam& t, std::int64_t n) { return gap_dict(gap_structure(t, n)); },
          py::arg("theta_prime"), py::arg("n"));
    m.def("partition_endpoints", &partition_endpoints, py::arg("theta_prime"), py::arg("n"));
    m.def("sorted_gaps", [](const IrrationalParam& t, std::int64_t n) { return measures_list(sorted_gap_multiset(t, n)); },
          py::arg("theta_prime"), py::arg("n"));
    m.def("cylinder_measures",
          [](const IrrationalParam& t, std::int64_t n) { return measures_list(cylinder_measures(t, n)); },
          py::arg("theta"), py::arg("n"));
    m.def("cover_count", &cover_count, py::arg("theta"), py::arg("n"), py::arg("epsilon"));

    m.def(
        "sturmian_word",
        [](const IrrationalParam& t, const Rational& beta, std::int64_t length) {
            return sturmian_word(t, beta, length).word.symbols;
        },
        py::arg("theta"), py::arg("beta"), py::arg("length"));
    m.def(
        "complexity_exact",
        [](const IrrationalParam& t, std::int64_t n) { return complexity_exact_rotation(t, n).count; },
        py::arg("theta"), py::arg("n"));
    m.def(
        "complexity_windowed",
        [](const std::vector<std::uint8_t>& symbols, int alphabet, std::int64_t n) {
            return complexity_windowed(Word{symbols, alphabet}, n).count;
        },
        py::arg("symbols"), py::arg("alphabet_size"), py::arg("n"));

    py::class_<IntervalExchange>(m, "IntervalExchange")
        .def(py::init<std::vector<Rational>, std::vector<int>, std::vector<int>, Rational>(), py::arg("lengths"),
             py::arg("pi_top"), py::arg("pi_bottom"), py::arg("length_error") = Rational{0})
        .def_static("symmetric", &IntervalExchange::symmetric, py::arg("lengths"), py::arg("length_error") = Rational{0})
        .def_static(
            "from_alpha_xi",
            [](const IrrationalParam& a, const IrrationalParam& x) { return three_iet(from_alpha_xi(a, x)); },
            py::arg("alpha"), py::arg("xi"))
        .def_static("rotation", &rotation_iet, py::arg("theta"))
        .def_property_readonly("lengths", &IntervalExchange::lengths)
        .def_property_readonly("irreducible", &IntervalExchange::irreducible)
        .def("__call__", &IntervalExchange::apply, py::arg("x"))
        .def("discontinuities", &IntervalExchange::discontinuities)
        .def("inverse", &iet_inverse)
        .def("coding", &iet_coding, py::arg("x"), py::arg("n"))
        .def(
            "refine",
            [](const IntervalExchange& g, std::int64_t n) { return refine(g, n).atom_lengths; }, py::arg("n"),
            "Atom lengths of the n-step refined partition, left to right")
        .def(
            "idoc",
            [](const IntervalExchange& g, std::int64_t depth) {
                const IdocReport r = idoc_check(g, depth);
                py::dict d;
                d["holds"] = r.idoc_up_to_depth;
                d["depth"] = r.depth;
                if (r.first_collision)
                    d["collision"] = py::make_tuple(r.first_collision->first, r.first_collision->second);
                return d;
            },
            py::arg("depth"));

    m.def(
        "metric_entropy",
        [](const IntervalExchange& g, const Rational& eps, const std::vector<std::int64_t>& grid,
           std::int64_t samples, std::uint64_t seed) {
            return covering_dict(metric_slow_entropy_estimate(g, eps, grid, samples, seed));
        },
        py::arg("g"), py::arg("epsilon"), py::arg("n_grid"), py::arg("samples"), py::arg("seed"));

    m.def(
        "flow_covering",
        [](const IrrationalParam& alpha, const Rational& xi, const Rational& d1, const Rational& d2,
           const Rational& eps, const std::vector<std::int64_t>& grid, std::int64_t samples, std::uint64_t seed,
           std::int64_t grid_k) {
            const FlowCovering fc = flow_hamming_covering(alpha, StepRoof{xi, d1, d2}, eps, grid, samples, seed,
                                                          grid_k > 0 ? grid_k : default_grid_k(eps));
            py::dict d = covering_dict(fc.covering);
            d["grid_k"] = fc.grid_k;
            return d;
        },
        py::arg("alpha"), py::arg("xi"), py::arg("d1"), py::arg("d2"), py::arg("epsilon"), py::arg("r_grid"),
        py::arg("samples"), py::arg("seed"), py::arg("grid_k") = 0);
    m.def(
        "skew_covering",
        [](const Rational& eps, const std::vector<std::int64_t>& grid, std::int64_t samples, std::uint64_t seed,
           std::int64_t grid_k) { return covering_dict(skew_shift_covering(eps, grid, samples, seed, grid_k)); },
        py::arg("epsilon"), py::arg("n_grid"), py::arg("samples"), py::arg("seed"), py::arg("grid_k") = 2);

    m.def("geometric_grid", &geometric_grid, py::arg("lo"), py::arg("hi"), py::arg("ratio") = 1.3);
    m.def(
        "exponent_fit",
        [](const std::vector<std::pair<std::int64_t, double>>& data, const std::string& family) {
            const auto pts = count_points(data);
            return estimate_dict(exponent_fit(pts, parse_scale_family(family)));
        },
        py::arg("counts"), py::arg("family") = "polynomial");
}
