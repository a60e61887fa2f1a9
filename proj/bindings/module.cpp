// Python bindings for the core operations: family construction, two-part
// encoding, bitstream round trips, and the desk-scale audit oracles.

#include "mdl/bitstream.hpp"
#include "mdl/family_io.hpp"
#include "mdl/oracles.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace mdl;

namespace {

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

std::vector<double> from_vec(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

CodeConfig make_config(double alpha, double a, double beta, double nu, double iota, double d,
                       std::optional<double> g, std::optional<bool> use_bundle, bool combined,
                       const std::string& mode, std::uint64_t seed) {
  CodeConfig cfg;
  cfg.alpha = alpha;
  cfg.a = a;
  cfg.beta = beta;
  cfg.nu = nu;
  cfg.iota = iota;
  cfg.d = d;
  cfg.g = g;
  cfg.use_bundle = use_bundle;
  cfg.combined = combined;
  if (mode == "reference") {
    cfg.mode = EncodeMode::kReference;
  } else if (mode == "shortcut") {
    cfg.mode = EncodeMode::kShortcut;
  } else {
    throw config_error("mode must be \"reference\" or \"shortcut\"");
  }
  cfg.seed = seed;
  return cfg;
}

py::dict encoding_to_dict(const Codec::Encoding& enc) {
  py::dict d;
  d["route"] = enc.route == Route::kInterior ? "interior" : "boundary";
  d["point_index"] = enc.point_index;
  d["tilt_index"] = enc.tilt_index;
  d["descriptor_index"] = enc.descriptor_index;
  d["sub_point_index"] = enc.sub_point_index;
  d["data_nats"] = enc.data_nats;
  d["structure_nats"] = enc.structure_nats;
  d["total"] = enc.total;
  d["regret"] = enc.regret;
  d["payload"] = from_vec(enc.payload.probs());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-part universal codes over quantized parameter grids";

  py::class_<Family, std::shared_ptr<Family>>(m, "Family")
      .def_property_readonly("name", &Family::name)
      .def_property_readonly("alphabet_size", &Family::alphabet_size)
      .def_property_readonly("dim", &Family::dim)
      .def_property_readonly("is_exponential", &Family::is_exponential)
      .def(
          "pmf",
          [](const Family& f, const std::vector<double>& theta) {
            return from_vec(f.pmf(to_vec(theta)).probs());
          },
          py::arg("theta"))
      .def(
          "mle",
          [](const Family& f, const std::vector<std::uint64_t>& counts) {
            return from_vec(f.mle(counts));
          },
          py::arg("counts"))
      .def(
          "log_likelihood",
          [](const Family& f, const std::vector<double>& theta,
             const std::vector<std::uint64_t>& counts) {
            return f.log_likelihood(to_vec(theta), counts);
          },
          py::arg("theta"), py::arg("counts"));

  m.def(
      "load_family", [](const std::string& path) { return load_family(path); }, py::arg("path"),
      "Load a family description from a JSON file");
  m.def(
      "family_from_json",
      [](const std::string& text) { return family_from_json(nlohmann::json::parse(text)); },
      py::arg("text"), "Build a family from a JSON description string");

  py::class_<Codec, std::shared_ptr<Codec>>(m, "Codec")
      .def(py::init([](std::shared_ptr<const Family> fam, std::uint64_t n, double alpha, double a,
                       double beta, double nu, double iota, double d, std::optional<double> g,
                       std::optional<bool> use_bundle, bool combined, const std::string& mode,
                       std::uint64_t seed) {
             return std::make_shared<Codec>(
                 std::move(fam), n,
                 make_config(alpha, a, beta, nu, iota, d, g, use_bundle, combined, mode, seed));
           }),
           py::arg("family"), py::arg("n"), py::arg("alpha") = 2.0, py::arg("a") = 2.0,
           py::arg("beta") = 0.25, py::arg("nu") = 0.05, py::arg("iota") = 0.25,
           py::arg("d") = 1.0, py::arg("g") = std::nullopt, py::arg("use_bundle") = std::nullopt,
           py::arg("combined") = true, py::arg("mode") = "reference", py::arg("seed") = 0)
      .def_property_readonly("n", &Codec::sample_size)
      .def_property_readonly("grid_size", [](const Codec& c) { return c.grid().size(); })
      .def_property_readonly("log_grid_size", [](const Codec& c) { return c.grid().log_size(); })
      .def_property_readonly("bundle_on", &Codec::bundle_on)
      .def(
          "encode",
          [](const Codec& c, const std::vector<std::uint64_t>& counts) {
            return encoding_to_dict(c.encode(counts));
          },
          py::arg("counts"), "Two-part encoding of a sample given by symbol counts")
      .def("total_length", &Codec::total_length, py::arg("counts"))
      .def(
          "grid_points",
          [](const Codec& c) {
            std::vector<std::vector<double>> pts;
            pts.reserve(c.grid().size());
            for (const auto& p : c.grid().points()) pts.push_back(from_vec(p.theta));
            return pts;
          },
          "Quantized parameter values, in deterministic grid order")
      .def(
          "regret_report",
          [](const Codec& c) {
            RegretReport r = c.regret_report();
            py::dict d;
            d["L_n"] = r.L_n;
            d["cardinality_log_bound"] = r.cardinality_log_bound;
            d["interior_regret_bound"] = r.interior_regret_bound;
            d["combined_regret_bound"] = r.combined_regret_bound;
            d["boundary_regret_bound"] = r.boundary_regret_bound;
            d["bundle"] = r.bundle;
            if (r.bundle) {
              d["nonexp_regret_bound"] = r.nonexp_regret_bound;
              d["delta_n"] = r.delta_n;
              d["u_n"] = r.u_n;
              d["n0"] = r.n0;
              d["asymptotic_regime"] = r.asymptotic_regime;
            }
            d["notes"] = r.notes;
            return d;
          },
          "Guaranteed regret bounds for this code context")
      .def(
          "compress",
          [](const Codec& c, const std::vector<std::size_t>& symbols) {
            auto bytes = compress_sequence(c, symbols);
            return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
          },
          py::arg("symbols"), "Serialize a symbol sequence to a compressed stream")
      .def(
          "decompress",
          [](const Codec& c, const py::bytes& stream) {
            std::string s = stream;
            std::vector<std::uint8_t> bytes(s.begin(), s.end());
            return decompress_sequence(c, bytes);
          },
          py::arg("stream"), "Restore the symbol sequence from a compressed stream");

  m.def(
      "kraft_sum", [](const Codec& c) { return kraft_sum(c); }, py::arg("codec"),
      "Exact code-space mass; at most 1 for a decodable length assignment");
  m.def(
      "nml_log_sum", [](const Family& f, std::uint64_t n) { return nml_log_sum(f, n); },
      py::arg("family"), py::arg("n"), "Log normalizer of the minimax-optimal code");
  m.def(
      "kl_divergence",
      [](const std::vector<double>& p, const std::vector<double>& q) {
        return kl_divergence(FinitePmf(to_vec(p)), FinitePmf(to_vec(q)));
      },
      py::arg("p"), py::arg("q"));
  m.def(
      "renyi_divergence",
      [](const std::vector<double>& p, const std::vector<double>& q, double lam) {
        return renyi_divergence(FinitePmf(to_vec(p)), FinitePmf(to_vec(q)), lam);
      },
      py::arg("p"), py::arg("q"), py::arg("lam"));
}
