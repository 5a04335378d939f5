#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weil/census.hpp"
#include "weil/lattice.hpp"

namespace py = pybind11;
using namespace weil;

namespace {

WeilCoefficients coefficients(std::int64_t q, const std::vector<std::int64_t>& a) {
  return WeilCoefficients(FieldParams::from_q(q), a);
}

py::object to_int(const BigInt& v) { return py::int_(py::str(to_string(v))); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Isogeny-class census over finite fields";

  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<CacheCorrupt>(m, "CacheCorrupt", PyExc_RuntimeError);
  py::register_exception<UnsupportedDimension>(m, "UnsupportedDimension", PyExc_ValueError);
  py::register_exception<OverflowError>(m, "OverflowError", PyExc_OverflowError);

  m.def("is_weil", [](std::int64_t q, const std::vector<std::int64_t>& a) { return is_weil(coefficients(q, a)); },
        py::arg("q"), py::arg("a"));
  m.def("is_ordinary", [](std::int64_t q, const std::vector<std::int64_t>& a) { return is_ordinary(coefficients(q, a)); },
        py::arg("q"), py::arg("a"));
  m.def("f_at_one", [](std::int64_t q, const std::vector<std::int64_t>& a) { return to_int(eval_f_at_one(coefficients(q, a))); },
        py::arg("q"), py::arg("a"));
  m.def("fprime_at_one",
        [](std::int64_t q, const std::vector<std::int64_t>& a) { return to_int(eval_fprime_at_one(coefficients(q, a))); },
        py::arg("q"), py::arg("a"));

  m.def(
      "enumerate",
      [](std::int64_t q, int g, const std::string& mode, int workers) {
        py::list out;
        for (const auto& r : enumerate_records(q, g, parse_mode(mode), workers))
          out.append(py::make_tuple(py::tuple(py::cast(r.coeffs.a)), r.f1, r.fp1, r.ordinary, r.candidate_only));
        return out;
      },
      py::arg("q"), py::arg("g"), py::arg("mode") = "ordinary-only", py::arg("workers") = 1,
      "List of (a, f(1), f'(1), ordinary, candidate_only).");

  m.def(
      "classify_json",
      [](std::int64_t q, int g, const std::vector<std::int64_t>& S, const std::string& mode, int workers) {
        return classify(q, g, PrimeSet(S), parse_mode(mode), workers).to_json();
      },
      py::arg("q"), py::arg("g"), py::arg("S"), py::arg("mode") = "ordinary-only", py::arg("workers") = 1);

  m.def("sigma", [](const std::vector<std::int64_t>& S, int i) { return to_string(sigma(PrimeSet(S), i)); },
        py::arg("S"), py::arg("i"));
  m.def(
      "theorem_bounds",
      [](const std::vector<std::int64_t>& S) {
        const auto b = theorem_bounds(PrimeSet(S));
        return py::make_tuple(to_string(b.lower), to_string(b.upper));
      },
      py::arg("S"));
  m.def("prime_set_up_to", [](std::int64_t N) { return prime_set_up_to(N).primes(); }, py::arg("N"));
  m.def(
      "zeta_reciprocal",
      [](int i, std::int64_t bound) {
        const auto z = zeta_reciprocal(i, bound);
        return py::make_tuple(z.lower, z.upper);
      },
      py::arg("i"), py::arg("prime_bound"));

  m.def(
      "count_nontrivial_residues",
      [](std::int64_t q, int g, const std::vector<std::int64_t>& S) { return count_nontrivial_residues(q, g, PrimeSet(S)); },
      py::arg("q"), py::arg("g"), py::arg("S"));
  m.def(
      "count_noncyclic_residues",
      [](std::int64_t q, int g, const std::vector<std::int64_t>& S) { return count_noncyclic_residues(q, g, PrimeSet(S)); },
      py::arg("q"), py::arg("g"), py::arg("S"));
  m.def("local_solution_count", &local_solution_count, py::arg("q"), py::arg("g"), py::arg("ell"));
  m.def("local_solution_formula", &local_solution_formula, py::arg("q"), py::arg("g"), py::arg("ell"));

  m.def(
      "count_points",
      [](const std::string& kind, std::int64_t q, int g, std::int64_t F, std::vector<std::int64_t> shift, int workers) {
        return count_points(LatticeSpec::make(parse_kind(kind), q, g, F, std::move(shift)), workers);
      },
      py::arg("kind"), py::arg("q"), py::arg("g"), py::arg("F") = 1, py::arg("shift") = std::vector<std::int64_t>{},
      py::arg("workers") = 1);
  m.def(
      "volume",
      [](int g, std::int64_t samples, std::uint64_t seed) {
        const auto v = volume_Vg(g, samples, seed);
        return py::make_tuple(v.value, v.std_error);
      },
      py::arg("g"), py::arg("samples"), py::arg("seed") = 1);
  m.def(
      "im_envelope",
      [](std::int64_t q, int g, std::int64_t F, double volume, double c) {
        const auto e = im_envelope(q, g, F, volume, c);
        return py::make_tuple(e.L, e.R);
      },
      py::arg("q"), py::arg("g"), py::arg("F"), py::arg("volume"), py::arg("c"));

  m.def(
      "verify",
      [](const std::vector<std::int64_t>& qs, const std::vector<int>& gs, const std::vector<std::int64_t>& S,
         const std::string& fault) {
        py::list out;
        for (const auto& c : verify_suite(qs, gs, PrimeSet(S), fault))
          out.append(py::make_tuple(c.name, c.context, c.pass, c.detail));
        return out;
      },
      py::arg("qs"), py::arg("gs"), py::arg("S"), py::arg("fault") = "");
}
