// Thin pybind11 layer. Diagrams come in as JSON spec strings, reports go out as JSON strings.

#include "bratteli/extension.hpp"
#include "bratteli/serialize.hpp"
#include "bratteli/vershik.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace bratteli;

namespace {

DiagramPtr diagram_from(const std::string& spec) { return build_diagram(spec_from_json(json::parse(spec), "spec")); }

std::string dump(const json& j) { return j.dump(); }

MeasurePtr measure_from(const std::string& text)
{
    auto j = json::parse(text);
    std::string m = j.value("measure", "");
    auto rat = [&](const char* key) { return parse_rational(j.at(key).get<std::string>()); };
    long k = j.value("k", 1L);
    if (m == "pascal-mu") {
        std::vector<std::pair<long, Rational>> d;
        for (auto& [c, w] : j.at("d").items()) d.emplace_back(std::stol(c), parse_rational(w.get<std::string>()));
        DiagramPtr dg = j.contains("spec") ? build_diagram(spec_from_json(j.at("spec"), "spec")) : build_diagram(DiagramSpec{Family::PascalN});
        return pascal_mu(dg, d);
    }
    if (m == "binfty-mu-a") return binfty_mu_a(rat("a"));
    if (m == "nu-a") return nu_a(rat("a"), k);
    if (m == "nu-p") return nu_p(rat("p"), k);
    if (m == "odometer-bar") {
        DiagramSpec s;
        s.family = Family::OdometerIO;
        s.odometer = OdometerRule::parse(j.at("rule").get<std::string>());
        return odometer_bar(build_diagram(s), j.value("i", 1L));
    }
    throw DomainError("unknown measure '" + m + "'");
}

ExtensionOptions options(int N)
{
    ExtensionOptions o;
    o.N = N;
    return o;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Exact computations on generalized Bratteli diagrams";

    static py::exception<TruncationIncomplete> trunc_exc(m, "TruncationIncomplete", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const TruncationIncomplete& e) {
            py::set_error(trunc_exc, e.what());
        } catch (const Unsupported& e) {
            PyErr_SetString(PyExc_NotImplementedError, e.what());
        } catch (const DomainError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("heights", [](const std::string& spec, int level, long window) { return dump(to_json(heights(diagram_from(spec), level, window))); },
          py::arg("spec"), py::arg("level"), py::arg("window"));
    m.def("stochastic_matrix",
          [](const std::string& spec, int level, long window) { return dump(to_json(stochastic_matrix(diagram_from(spec), level, window))); },
          py::arg("spec"), py::arg("level"), py::arg("window"));
    m.def("binfty_limit_vector",
          [](const std::string& a, int n, long max_rank) {
              auto d = build_diagram(DiagramSpec{Family::Binfty});
              return dump(to_json(binfty_limit_vector(*d, parse_rational(a), n, max_rank)));
          },
          py::arg("a"), py::arg("n"), py::arg("max_rank") = 30);
    m.def("pascal_limit_vector",
          [](const std::vector<std::pair<long, std::string>>& d, int n) {
              std::vector<std::pair<long, Rational>> w;
              for (auto& [c, s] : d) w.emplace_back(c, parse_rational(s));
              auto dg = build_diagram(DiagramSpec{Family::PascalN});
              return dump(to_json(pascal_limit_vector(*dg, w, n)));
          },
          py::arg("d"), py::arg("n"));

    m.def("cylinder_mass",
          [](const std::string& measure, int n, const std::string& vertex) {
              return to_string(cylinder_mass(*measure_from(measure), n, vertex_from_json(json::parse(vertex))));
          },
          py::arg("measure"), py::arg("n"), py::arg("vertex"));
    m.def("tower_mass",
          [](const std::string& measure, int n, const std::string& vertex) {
              return to_string(tower_mass(*measure_from(measure), n, vertex_from_json(json::parse(vertex))));
          },
          py::arg("measure"), py::arg("n"), py::arg("vertex"));
    m.def("verify_invariance",
          [](const std::string& measure, int n_max, long window) { return dump(to_json(verify_invariance(*measure_from(measure), n_max, window))); },
          py::arg("measure"), py::arg("n_max"), py::arg("window"));
    m.def("verify_probability",
          [](const std::string& measure, int n, long window) { return dump(to_json(verify_probability(*measure_from(measure), n, window))); },
          py::arg("measure"), py::arg("n"), py::arg("window"));
    m.def("sample_paths",
          [](const std::vector<std::pair<long, double>>& d, int depth, long count, unsigned long long seed) {
              return dump(to_json(sample_paths(d, depth, count, seed)));
          },
          py::arg("d"), py::arg("depth"), py::arg("count"), py::arg("seed"));

    m.def("closed_form_extension",
          [](const std::string& name, const std::string& a, long k) { return to_string(closed_form_extension(name, parse_rational(a), k)); },
          py::arg("case"), py::arg("a"), py::arg("k"));
    m.def("odometer_extension",
          [](const std::string& rule, long i, int N) { return dump(to_json(odometer_extension(OdometerRule::parse(rule), i, options(N)))); },
          py::arg("rule"), py::arg("i") = 1, py::arg("N") = 60);
    m.def("nu_a_extension",
          [](const std::string& a, long k, int N) { return dump(to_json(nu_a_extension(parse_rational(a), k, options(N)))); },
          py::arg("a"), py::arg("k"), py::arg("N") = 60);
    m.def("nu_p_extension",
          [](const std::string& p, long k, int N) { return dump(to_json(nu_p_extension(parse_rational(p), k, options(N)))); },
          py::arg("p"), py::arg("k"), py::arg("N") = 60);
    m.def("bk_decay", [](long k, int m_max) { return dump(to_json(bk_decay_probe(k, m_max))); }, py::arg("k"), py::arg("m_max"));

    m.def("vershik_step",
          [](const std::string& spec, const std::string& order, const std::string& path, bool inverse) {
              OrderedDiagram od(diagram_from(spec), OrderSpec::parse(order));
              auto x = path_from_json(json::parse(path));
              return dump(to_json(inverse ? vershik_inverse_step(od, x) : vershik_step(od, x)));
          },
          py::arg("spec"), py::arg("order"), py::arg("path"), py::arg("inverse") = false);
    m.def("bijection_check",
          [](const std::string& spec, const std::string& order, int depth, long window) {
              OrderedDiagram od(diagram_from(spec), OrderSpec::parse(order));
              return dump(to_json(bijection_check(od, depth, window)));
          },
          py::arg("spec"), py::arg("order"), py::arg("depth"), py::arg("window"));
    m.def("odometer_check",
          [](int depth) {
              auto r = odometer_check(depth);
              return dump(json{{"depth", r.depth}, {"checked", r.checked}, {"mismatches", r.mismatches}});
          },
          py::arg("depth"));
}
