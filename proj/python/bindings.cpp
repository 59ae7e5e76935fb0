#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "ordertypes/algebra.hpp"
#include "ordertypes/aliases.hpp"
#include "ordertypes/cli.hpp"
#include "ordertypes/models.hpp"
#include "ordertypes/store.hpp"

namespace py = pybind11;
using namespace ordertypes;

namespace {

// Store plus the lazily built algebra over it; the algebra keeps a reference to the store.
class Database {
 public:
  explicit Database(OrderTypeStore store) : store_(std::make_unique<OrderTypeStore>(std::move(store))) {}

  int max_size() const { return store_->max_size(); }
  std::size_t count(int n) const { return store_->count(n); }
  std::vector<std::string> codes(int n) const {
    std::vector<std::string> out;
    for (const auto& r : store_->records(n)) out.push_back(r.code.hex());
    return out;
  }
  std::vector<std::pair<std::string, std::string>> witness(const std::string& name) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : store_->record(code(name)).witness) out.emplace_back(to_string(p.x), to_string(p.y));
    return out;
  }
  std::string code_hex(const std::string& name) const { return code(name).hex(); }
  void save(const std::string& path) const { store_save(*store_, path); }

  std::string density(const std::string& small, const std::string& big) {
    return to_string(algebra().density(code(small), code(big)));
  }
  std::string split(const std::string& w1, const std::string& w2, const std::string& big) {
    return to_string(algebra().split_probability(code(w1), code(w2), code(big)));
  }
  std::map<std::string, std::string> lift(const std::string& name, int level) {
    std::map<std::string, std::string> out;
    const auto lifted = algebra().lift(AlgebraElement::of(code(name)), level);
    for (const auto& [flag, c] : lifted.terms()) {
      out[flag.as_order_type().hex()] = to_string(c);
    }
    return out;
  }

 private:
  CanonicalCode code(const std::string& name) const { return resolve_order_type(*store_, name); }
  FlagAlgebra& algebra() {
    if (!algebra_) algebra_ = std::make_unique<FlagAlgebra>(*store_);
    return *algebra_;
  }

  std::unique_ptr<OrderTypeStore> store_;
  std::unique_ptr<FlagAlgebra> algebra_;
};

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["successes"] = e.successes;
  d["trials"] = e.trials;
  d["seed"] = e.seed;
  d["ci95"] = py::make_tuple(e.lower, e.upper);
  return d;
}

}  // namespace

PYBIND11_MODULE(_ordertypes, m) {
  py::register_exception<UnknownCode>(m, "UnknownCode", PyExc_KeyError);

  py::class_<Database>(m, "Database")
      .def_static("enumerate", [](int max_size) {
        py::gil_scoped_release release;
        return Database(enumerate_up_to(max_size));
      }, py::arg("max_size"))
      .def_static("load", [](const std::string& path) { return Database(store_load(path)); }, py::arg("path"))
      .def("save", &Database::save, py::arg("path"))
      .def_property_readonly("max_size", &Database::max_size)
      .def("count", &Database::count, py::arg("n"))
      .def("codes", &Database::codes, py::arg("n"))
      .def("code", &Database::code_hex, py::arg("name"))
      .def("witness", &Database::witness, py::arg("name"))
      .def("density", &Database::density, py::arg("small"), py::arg("big"))
      .def("split", &Database::split, py::arg("w1"), py::arg("w2"), py::arg("big"))
      .def("lift", &Database::lift, py::arg("name"), py::arg("level"));

  m.def("cup_probability", [](int s) { return to_string(exact_cup_probability(s)); }, py::arg("s"));

  m.def("estimate", [](const std::string& model, const std::string& omega_hex, std::uint64_t trials,
                       std::uint64_t seed, int threads) {
    const auto mm = parse_model(model);
    const auto omega = CanonicalCode::from_hex(omega_hex);
    MonteCarloOptions opts;
    opts.threads = threads;
    Estimate e;
    {
      py::gil_scoped_release release;
      e = estimate_density(mm, omega, trials, seed, opts);
    }
    return estimate_dict(e);
  }, py::arg("model"), py::arg("omega"), py::arg("trials") = 100000, py::arg("seed") = 42, py::arg("threads") = 1);

  m.def("run", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
