#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "piseq/radix.hpp"
#include "piseq/runner.hpp"

namespace py = pybind11;
using namespace piseq;

namespace {

u64 pi_of(u64 x) {
  if (x < 2) return 0;
  PrimalityWindow w;
  PrimeCursor cursor(w, 1, 0);
  const u64 chunk = u64{1} << 20;
  while (cursor.pos() < x) {
    const u64 target = std::min(x, cursor.pos() + chunk);
    w.extend_to(target);
    cursor.advance_to(target);
    if (cursor.pos() < x) w.advance_low(cursor.pos());
  }
  return cursor.count();
}

}  // namespace

PYBIND11_MODULE(_piseq, m) {
  m.doc() =
      "streaming engine for the recurrence a(n) = pi(n) - pi(s(n-1)), "
      "OEIS A335294";

  py::register_exception<InvariantViolation>(m, "InvariantViolation");
  py::register_exception<CapacityError>(m, "CapacityError");
  py::register_exception<CheckpointVersionError>(m, "CheckpointVersionError");
  py::register_exception<CheckpointIntegrityError>(m,
                                                   "CheckpointIntegrityError");

  py::class_<SeqState>(m, "SeqState")
      .def_readonly("n", &SeqState::n)
      .def_readonly("a", &SeqState::a)
      .def_readonly("s", &SeqState::s)
      .def_readonly("pi_n", &SeqState::pi_n)
      .def_readonly("pi_s", &SeqState::pi_s)
      .def_property_readonly("h", &SeqState::h)
      .def("__repr__", [](const SeqState& st) {
        return "SeqState(n=" + std::to_string(st.n) + ", a=" +
               std::to_string(st.a) + ", s=" + std::to_string(st.s) + ")";
      });

  py::class_<Stream>(m, "Stream")
      .def(py::init<>())
      .def("step", &Stream::step)
      .def("run_to",
           [](Stream& st, u64 limit) {
             run_to(st, limit, [](const Stream&) {});
           },
           py::arg("limit"))
      .def_property_readonly("state", &Stream::state,
                             py::return_value_policy::copy)
      .def_property_readonly("g", &Stream::g);

  m.def(
      "generate",
      [](u64 limit) {
        std::vector<std::tuple<u64, u64, u64, u64>> rows;
        rows.reserve(limit);
        Stream st;
        run_to(st, limit, [&](const Stream& s) {
          rows.emplace_back(s.state().n, s.state().a, s.state().s,
                            s.state().h());
        });
        return rows;
      },
      py::arg("limit"), "rows (n, a, s, h) for n = 1..limit");

  m.def(
      "census",
      [](u64 limit) { return run_census(limit).state().census; },
      py::arg("limit"), "counts of each a-value over n <= limit");

  m.def(
      "first_occurrences",
      [](u64 max_k, u64 limit) {
        std::vector<std::tuple<u64, u64, bool, bool>> out;
        for (const auto& h : find_firsts(max_k, limit).hits) {
          out.emplace_back(h.k, h.n, h.index_prime, h.twin);
        }
        return out;
      },
      py::arg("max_k"), py::arg("limit"),
      "tuples (k, n, index_prime, twin) for the smallest n with a(n) = k");

  m.def(
      "progressions",
      [](u64 k, u64 dmax, u64 limit) {
        std::vector<std::pair<u64, u64>> out;
        for (const auto& h : ap_search(k, dmax, limit)) {
          out.emplace_back(h.n, h.d);
        }
        return out;
      },
      py::arg("k"), py::arg("dmax"), py::arg("limit"),
      "pairs (n, d) with d <= dmax and a(n + j*d) = j for j = 0..k");

  m.def("g", &compute_g, py::arg("n"),
        "largest distance from any y <= n back to the previous prime");
  m.def("pi", &pi_of, py::arg("x"), "number of primes <= x");

  m.def(
      "certified_digits",
      [](u64 base, u64 terms) {
        PartialSum lower = accumulate(base, terms);
        DigitCert cert =
            certify_digits(lower, tail_bound(lower.a_last, base, terms));
        return py::make_tuple(cert.certified, cert.digits);
      },
      py::arg("base"), py::arg("terms"),
      "(certified count, digit list) of A(base) from the first `terms` terms");

  m.def(
      "shifted",
      [](u64 n0, u64 s0, u64 limit) {
        ShiftRun r = run_shifted(n0, s0, limit);
        py::dict d;
        d["n0"] = r.n0;
        d["s0"] = r.s0;
        d["d0"] = r.d0;
        d["alt_leads"] = r.alt_leads;
        d["merged"] = r.merged;
        d["merged_at"] = r.merged_at;
        d["d_final"] = r.d_final;
        return d;
      },
      py::arg("n0"), py::arg("s0"), py::arg("limit"),
      "run with an alternate summatory seed and report the merge");

  m.def(
      "variant",
      [](u64 t, i64 c, u64 limit) {
        VariantSummary v = run_variant(VariantSpec{t, c}, limit);
        py::dict d;
        d["t"] = t;
        d["c"] = c;
        d["n"] = v.last.n;
        d["a"] = v.last.a;
        d["s"] = v.last.s;
        d["ratio"] = v.ratio;
        d["max_deficit"] = v.max_deficit;
        return d;
      },
      py::arg("t"), py::arg("c"), py::arg("limit"),
      "summary of a run with f(n) = t*n + c");

  m.def(
      "verify",
      [](u64 limit) {
        VerifySummary v = run_verify(limit);
        py::dict d;
        d["limit"] = v.limit;
        d["checked_steps"] = v.checked_steps;
        d["max_a"] = py::make_tuple(v.max_a.n, v.max_a.h);
        d["max_h"] = py::make_tuple(v.max_h.n, v.max_h.h);
        d["min_h"] = py::make_tuple(v.min_h.n, v.min_h.h);
        d["snapshots"] = v.snapshots;
        d["gap_pairs"] = v.gap_pairs;
        return d;
      },
      py::arg("limit"),
      "stream to limit with every invariant armed; raises on violation");
}
