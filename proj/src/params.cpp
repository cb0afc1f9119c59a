#include "hierloc/params.hpp"

#include <cmath>

#include "hierloc/errors.hpp"

namespace hierloc {

std::size_t ParameterStore::add(std::string name, ad::Matrix value, ParamKind kind) {
  if (by_name_.count(name)) throw ContractViolation("duplicate parameter " + name);
  by_name_.emplace(name, params_.size());
  params_.push_back(Parameter{std::move(name), std::move(value), kind});
  return params_.size() - 1;
}

std::size_t ParameterStore::index(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw ContractViolation("unknown parameter " + std::string(name));
  return it->second;
}

bool ParameterStore::contains(std::string_view name) const { return by_name_.find(name) != by_name_.end(); }

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

std::vector<ad::Var> ParameterStore::bind(ad::Tape& tape, bool requires_grad) const {
  std::vector<ad::Var> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(requires_grad ? tape.leaf(p.value) : tape.constant(p.value));
  return out;
}

ad::Matrix fan_in_uniform(Eigen::Index fan_in, Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  const double a = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> u(-a, a);
  ad::Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = u(rng);
  }
  return m;
}

ad::Matrix gaussian(Eigen::Index rows, Eigen::Index cols, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, sigma);
  ad::Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  }
  return m;
}

}  // namespace hierloc
