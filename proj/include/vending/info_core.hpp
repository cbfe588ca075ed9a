#pragma once

// Finite-alphabet probability containers and information measures.
//
// Conventions: logarithms are base 2, 0 log 0 = 0, and masses below
// kZeroMass are treated as exact zeros inside logarithms.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vending {

inline constexpr double kZeroMass = 1e-14;
inline constexpr double kNormTol = 1e-9;

// Raised when array shapes do not line up. axis() names the offending axis.
class DimensionError : public std::invalid_argument {
 public:
  DimensionError(std::string axis, const std::string& what);
  const std::string& axis() const noexcept { return axis_; }

 private:
  std::string axis_;
};

// x log2 x with the 0 log 0 = 0 convention.
double xlog2x(double x) noexcept;
// log2 that maps masses below kZeroMass to -infinity.
double safe_log2(double x) noexcept;

class ProbVector {
 public:
  ProbVector() = default;
  // Entries must be >= 0 and sum to 1 within kNormTol; the stored vector is
  // renormalized so the sum is exact to rounding.
  explicit ProbVector(std::vector<double> mass);
  ProbVector(std::initializer_list<double> mass)
      : ProbVector(std::vector<double>(mass)) {}

  static ProbVector uniform(std::size_t n);
  static ProbVector point(std::size_t n, std::size_t at);

  std::size_t size() const noexcept { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }
  std::span<const double> values() const noexcept { return mass_; }
  const std::vector<double>& vec() const noexcept { return mass_; }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> mass_;
};

// Row-stochastic matrix: one conditional distribution per input symbol.
// Compound conditioning indices such as (x, a) are flattened row-major,
// i.e. row = x * |A| + a.
class StochasticKernel {
 public:
  StochasticKernel() = default;
  StochasticKernel(std::size_t inputs, std::size_t outputs,
                   std::vector<double> rows);
  explicit StochasticKernel(const std::vector<std::vector<double>>& rows);

  static StochasticKernel identity(std::size_t n);
  static StochasticKernel constant(std::size_t inputs, const ProbVector& row);

  std::size_t input_size() const noexcept { return inputs_; }
  std::size_t output_size() const noexcept { return outputs_; }
  double operator()(std::size_t in, std::size_t out) const {
    return data_[in * outputs_ + out];
  }
  std::span<const double> row(std::size_t in) const {
    return {data_.data() + in * outputs_, outputs_};
  }
  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<std::vector<double>> to_rows() const;

  friend bool operator==(const StochasticKernel&,
                         const StochasticKernel&) = default;

 private:
  std::size_t inputs_ = 0;
  std::size_t outputs_ = 0;
  std::vector<double> data_;
};

class DistortionMatrix {
 public:
  DistortionMatrix() = default;
  DistortionMatrix(std::size_t sources, std::size_t reproductions,
                   std::vector<double> values);
  explicit DistortionMatrix(const std::vector<std::vector<double>>& rows);

  static DistortionMatrix hamming(std::size_t n);

  std::size_t source_size() const noexcept { return sources_; }
  std::size_t reproduction_size() const noexcept { return reproductions_; }
  double operator()(std::size_t x, std::size_t xhat) const {
    return values_[x * reproductions_ + xhat];
  }
  const std::vector<double>& data() const noexcept { return values_; }
  std::vector<std::vector<double>> to_rows() const;
  // True when rho(x, xhat) == 0 exactly iff xhat == x, so zero distortion
  // means exact recovery.
  bool is_lossless_measure() const;

  friend bool operator==(const DistortionMatrix&,
                         const DistortionMatrix&) = default;

 private:
  std::size_t sources_ = 0;
  std::size_t reproductions_ = 0;
  std::vector<double> values_;
};

class CostVector {
 public:
  CostVector() = default;
  explicit CostVector(std::vector<double> values);
  CostVector(std::initializer_list<double> values)
      : CostVector(std::vector<double>(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t a) const { return values_[a]; }
  const std::vector<double>& vec() const noexcept { return values_; }
  double min() const;
  double max() const;

  friend bool operator==(const CostVector&, const CostVector&) = default;

 private:
  std::vector<double> values_;
};

using AxisSet = std::vector<std::string>;

// Dense joint pmf over up to five labelled axes, stored row-major in axis
// order.
class JointDist {
 public:
  static constexpr std::size_t kMaxAxes = 5;

  JointDist() = default;
  JointDist(std::vector<std::string> labels, std::vector<std::size_t> shape,
            std::vector<double> mass);

  std::size_t rank() const noexcept { return shape_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  const std::vector<double>& data() const noexcept { return mass_; }
  std::size_t axis_index(const std::string& label) const;
  std::size_t axis_size(const std::string& label) const {
    return shape_[axis_index(label)];
  }

  double at(std::initializer_list<std::size_t> idx) const;
  // Marginal over the listed axes, in the listed order.
  JointDist marginal(const AxisSet& keep) const;
  // Entropy of the marginal over `axes` (empty set -> 0).
  double entropy(const AxisSet& axes) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::size_t> shape_;
  std::vector<double> mass_;
};

double entropy(const ProbVector& p);
double entropy(std::span<const double> p);
double binary_entropy(double p);
// Rate-distortion function of a Bernoulli(p) source under Hamming
// distortion: h(p) - h(d) for d < min(p, 1-p), zero otherwise.
double bernoulli_rd(double p, double d);

// H(A | B) from a joint.
double conditional_entropy(const JointDist& joint, const AxisSet& axes,
                           const AxisSet& given);
double mutual_information(const JointDist& joint, const AxisSet& a,
                          const AxisSet& b);
double conditional_mutual_information(const JointDist& joint, const AxisSet& a,
                                      const AxisSet& b, const AxisSet& given);

// Joint over (X, A, U, Y) from P_X, P_{A,U|X} (columns a*|U|+u) and
// P_{Y|X,A} (rows x*|A|+a).
JointDist factorize(const ProbVector& px, const StochasticKernel& p_au_given_x,
                    const StochasticKernel& p_y_given_xa);

// Joint over (X, Z, A, U, Y) from P_X, P_{Z|X}, P_{A,U|Z} and P_{Y|X,Z,A}
// (rows (x*|Z|+z)*|A|+a).
JointDist factorize_indirect(const ProbVector& px,
                             const StochasticKernel& p_z_given_x,
                             const StochasticKernel& p_au_given_z,
                             const StochasticKernel& p_y_given_xza);

}  // namespace vending
