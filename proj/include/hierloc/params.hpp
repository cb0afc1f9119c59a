#pragma once

// Named learnable tensors with a Euclidean/manifold tag.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hierloc/autodiff.hpp"

namespace hierloc {

enum class ParamKind : std::uint8_t { Euclidean = 0, Manifold = 1 };

struct Parameter {
  std::string name;
  ad::Matrix value;
  ParamKind kind = ParamKind::Euclidean;
};

class ParameterStore {
 public:
  // Throws ContractViolation on a duplicate name.
  std::size_t add(std::string name, ad::Matrix value, ParamKind kind = ParamKind::Euclidean);

  std::size_t index(std::string_view name) const;
  bool contains(std::string_view name) const;
  Parameter& at(std::string_view name) { return params_[index(name)]; }
  const Parameter& at(std::string_view name) const { return params_[index(name)]; }
  Parameter& operator[](std::size_t i) { return params_[i]; }
  const Parameter& operator[](std::size_t i) const { return params_[i]; }
  std::size_t size() const { return params_.size(); }
  std::size_t scalar_count() const;

  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  // One tape leaf per parameter, in store order. With requires_grad = false
  // the leaves are constants (evaluation).
  std::vector<ad::Var> bind(ad::Tape& tape, bool requires_grad = true) const;

 private:
  std::vector<Parameter> params_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
};

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
ad::Matrix fan_in_uniform(Eigen::Index fan_in, Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
ad::Matrix gaussian(Eigen::Index rows, Eigen::Index cols, double sigma, std::mt19937_64& rng);

}  // namespace hierloc
