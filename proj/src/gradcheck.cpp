#include "hierloc/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hierloc/errors.hpp"
#include "hierloc/trainer.hpp"

namespace hierloc {
namespace {

std::vector<Eigen::Index> pick_entries(Eigen::Index n, std::size_t max_entries, std::mt19937_64& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (max_entries > 0 && idx.size() > max_entries) {
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(max_entries);
    std::sort(idx.begin(), idx.end());
  }
  return idx;
}

void record(ad::GradCheckReport& rep, const std::string& name, const ad::Matrix& m, Eigen::Index flat, double a,
            double n) {
  const double e = ad::relative_error(a, n);
  ++rep.checked;
  if (e > rep.max_rel_error || !std::isfinite(e)) {
    rep.max_rel_error = std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
    rep.worst = name + "[" + std::to_string(flat / m.cols()) + "," + std::to_string(flat % m.cols()) + "]";
    rep.worst_analytic = a;
    rep.worst_numeric = n;
  }
}

}  // namespace

namespace ad {

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::fabs(analytic), std::fabs(numeric), floor});
  return std::fabs(analytic - numeric) / denom;
}

nlohmann::json GradCheckReport::to_json() const {
  return {{"max_rel_error", max_rel_error},
          {"worst", worst},
          {"worst_analytic", worst_analytic},
          {"worst_numeric", worst_numeric},
          {"checked", checked}};
}

GradCheckReport check_gradients(const ScalarFn& f, const std::vector<Matrix>& inputs, double step,
                                std::size_t max_per_input, std::uint64_t seed, const std::vector<std::string>& names) {
  auto eval = [&](const std::vector<Matrix>& xs, std::vector<Matrix>* grads) {
    Tape tape;
    std::vector<Var> leaves;
    for (const auto& x : xs) leaves.push_back(tape.leaf(x));
    Var out = f(tape, leaves);
    if (out.rows() != 1 || out.cols() != 1) throw ContractViolation("check_gradients: function must return 1x1");
    if (grads) {
      tape.backward(out);
      for (const auto& v : leaves) grads->push_back(v.grad());
    }
    return out.scalar();
  };

  std::vector<Matrix> analytic;
  eval(inputs, &analytic);
  std::vector<Matrix> xs = inputs;
  std::mt19937_64 rng(seed);
  GradCheckReport rep;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const std::string name = k < names.size() ? names[k] : "input" + std::to_string(k);
    Matrix& x = xs[k];
    for (Eigen::Index flat : pick_entries(x.size(), max_per_input, rng)) {
      const Eigen::Index r = flat / x.cols(), c = flat % x.cols();
      const double orig = x(r, c);
      x(r, c) = orig + step;
      const double fp = eval(xs, nullptr);
      x(r, c) = orig - step;
      const double fm = eval(xs, nullptr);
      x(r, c) = orig;
      record(rep, name, x, flat, analytic[k](r, c), (fp - fm) / (2 * step));
    }
  }
  return rep;
}

}  // namespace ad

namespace training {

ad::GradCheckReport check_pipeline_gradients(Trainer& trainer, const std::vector<int>& rows, double step,
                                             std::size_t max_per_tensor, std::uint64_t seed) {
  const std::uint64_t batch_seed = seed ^ 0x9E3779B97F4A7C15ULL;
  const BatchResult base = trainer.evaluate_batch(rows, false, batch_seed, true);
  ParameterStore& store = trainer.params();
  std::mt19937_64 rng(seed);
  ad::GradCheckReport rep;
  for (std::size_t p = 0; p < store.size(); ++p) {
    Matrix& x = store[p].value;
    for (Eigen::Index flat : pick_entries(x.size(), max_per_tensor, rng)) {
      const Eigen::Index r = flat / x.cols(), c = flat % x.cols();
      const double orig = x(r, c);
      x(r, c) = orig + step;
      const double fp = trainer.evaluate_batch(rows, false, batch_seed, false).loss;
      x(r, c) = orig - step;
      const double fm = trainer.evaluate_batch(rows, false, batch_seed, false).loss;
      x(r, c) = orig;
      record(rep, store[p].name, x, flat, base.grads[p](r, c), (fp - fm) / (2 * step));
    }
  }
  return rep;
}

}  // namespace training
}  // namespace hierloc
