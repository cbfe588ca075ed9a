#include "vending/info_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace vending {

namespace {

std::vector<double> normalized(std::vector<double> v, const char* what) {
  if (v.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty distribution");
  }
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument(std::string(what) +
                                  ": entries must be finite and >= 0");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kNormTol) {
    std::ostringstream os;
    os << what << ": entries sum to " << sum << ", expected 1";
    throw std::invalid_argument(os.str());
  }
  for (double& x : v) x /= sum;
  return v;
}

void require_disjoint(const AxisSet& a, const AxisSet& b, const char* what) {
  for (const auto& l : a) {
    if (std::find(b.begin(), b.end(), l) != b.end()) {
      throw std::invalid_argument(std::string(what) + ": axis '" + l +
                                  "' appears in more than one set");
    }
  }
}

AxisSet join(const AxisSet& a, const AxisSet& b) {
  AxisSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double clamp_nonneg(double v) { return v < 0.0 ? 0.0 : v; }

}  // namespace

DimensionError::DimensionError(std::string axis, const std::string& what)
    : std::invalid_argument("dimension mismatch on axis " + axis + ": " + what),
      axis_(std::move(axis)) {}

double xlog2x(double x) noexcept {
  return x <= kZeroMass ? 0.0 : x * std::log2(x);
}

double safe_log2(double x) noexcept {
  return x <= kZeroMass ? -std::numeric_limits<double>::infinity()
                        : std::log2(x);
}

// ---------------------------------------------------------------------------

ProbVector::ProbVector(std::vector<double> mass)
    : mass_(normalized(std::move(mass), "ProbVector")) {}

ProbVector ProbVector::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("ProbVector: empty alphabet");
  return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::point(std::size_t n, std::size_t at) {
  std::vector<double> v(n, 0.0);
  v.at(at) = 1.0;
  return ProbVector(std::move(v));
}

StochasticKernel::StochasticKernel(std::size_t inputs, std::size_t outputs,
                                   std::vector<double> rows)
    : inputs_(inputs), outputs_(outputs) {
  if (inputs == 0 || outputs == 0) {
    throw std::invalid_argument("StochasticKernel: empty alphabet");
  }
  if (rows.size() != inputs * outputs) {
    throw DimensionError("kernel", "expected " + std::to_string(inputs) + "x" +
                                       std::to_string(outputs) + " entries, got " +
                                       std::to_string(rows.size()));
  }
  data_.reserve(rows.size());
  for (std::size_t i = 0; i < inputs; ++i) {
    std::vector<double> r(rows.begin() + static_cast<std::ptrdiff_t>(i * outputs),
                          rows.begin() + static_cast<std::ptrdiff_t>((i + 1) * outputs));
    try {
      r = normalized(std::move(r), "StochasticKernel row");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string(e.what()) + " (row " +
                                  std::to_string(i) + ")");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

StochasticKernel::StochasticKernel(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("StochasticKernel: no rows");
  std::vector<double> flat;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw DimensionError("kernel", "row " + std::to_string(i) +
                                         " has a different length");
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  *this = StochasticKernel(rows.size(), rows[0].size(), std::move(flat));
}

StochasticKernel StochasticKernel::identity(std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  return StochasticKernel(n, n, std::move(v));
}

StochasticKernel StochasticKernel::constant(std::size_t inputs,
                                            const ProbVector& row) {
  std::vector<double> v;
  v.reserve(inputs * row.size());
  for (std::size_t i = 0; i < inputs; ++i) {
    v.insert(v.end(), row.vec().begin(), row.vec().end());
  }
  return StochasticKernel(inputs, row.size(), std::move(v));
}

std::vector<std::vector<double>> StochasticKernel::to_rows() const {
  std::vector<std::vector<double>> out(inputs_);
  for (std::size_t i = 0; i < inputs_; ++i) {
    out[i].assign(row(i).begin(), row(i).end());
  }
  return out;
}

DistortionMatrix::DistortionMatrix(std::size_t sources,
                                   std::size_t reproductions,
                                   std::vector<double> values)
    : sources_(sources), reproductions_(reproductions), values_(std::move(values)) {
  if (values_.size() != sources * reproductions || sources == 0 ||
      reproductions == 0) {
    throw DimensionError("Xhat", "distortion matrix has " +
                                     std::to_string(values_.size()) + " entries");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("DistortionMatrix: entries must be finite and >= 0");
    }
  }
}

DistortionMatrix::DistortionMatrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("DistortionMatrix: no rows");
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != rows[0].size()) {
      throw DimensionError("Xhat", "ragged distortion matrix");
    }
    flat.insert(flat.end(), r.begin(), r.end());
  }
  *this = DistortionMatrix(rows.size(), rows[0].size(), std::move(flat));
}

DistortionMatrix DistortionMatrix::hamming(std::size_t n) {
  std::vector<double> v(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 0.0;
  return DistortionMatrix(n, n, std::move(v));
}

std::vector<std::vector<double>> DistortionMatrix::to_rows() const {
  std::vector<std::vector<double>> out(sources_);
  for (std::size_t x = 0; x < sources_; ++x) {
    out[x].assign(values_.begin() + static_cast<std::ptrdiff_t>(x * reproductions_),
                  values_.begin() + static_cast<std::ptrdiff_t>((x + 1) * reproductions_));
  }
  return out;
}

bool DistortionMatrix::is_lossless_measure() const {
  if (sources_ > reproductions_) return false;
  for (std::size_t x = 0; x < sources_; ++x) {
    for (std::size_t xh = 0; xh < reproductions_; ++xh) {
      const bool zero = (*this)(x, xh) == 0.0;
      if (zero != (x == xh)) return false;
    }
  }
  return true;
}

CostVector::CostVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("CostVector: empty");
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("CostVector: entries must be finite and >= 0");
    }
  }
}

double CostVector::min() const {
  return *std::min_element(values_.begin(), values_.end());
}
double CostVector::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

// ---------------------------------------------------------------------------

JointDist::JointDist(std::vector<std::string> labels,
                     std::vector<std::size_t> shape, std::vector<double> mass)
    : labels_(std::move(labels)), shape_(std::move(shape)), mass_(std::move(mass)) {
  if (labels_.size() != shape_.size() || shape_.empty() ||
      shape_.size() > kMaxAxes) {
    throw std::invalid_argument("JointDist: need 1..5 labelled axes");
  }
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) {
    throw std::invalid_argument("JointDist: duplicate axis label");
  }
  const std::size_t n = std::accumulate(shape_.begin(), shape_.end(),
                                        std::size_t{1}, std::multiplies<>());
  if (mass_.size() != n) {
    throw DimensionError(labels_.back(), "joint has " + std::to_string(mass_.size()) +
                                             " entries, shape needs " +
                                             std::to_string(n));
  }
  mass_ = normalized(std::move(mass_), "JointDist");
}

std::size_t JointDist::axis_index(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw std::invalid_argument("JointDist: unknown axis '" + label + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

double JointDist::at(std::initializer_list<std::size_t> idx) const {
  if (idx.size() != shape_.size()) {
    throw std::invalid_argument("JointDist::at: wrong number of indices");
  }
  std::size_t flat = 0;
  std::size_t k = 0;
  for (std::size_t i : idx) flat = flat * shape_[k++] + i;
  return mass_.at(flat);
}

JointDist JointDist::marginal(const AxisSet& keep) const {
  std::vector<std::size_t> ax;
  std::vector<std::size_t> shape;
  for (const auto& l : keep) {
    ax.push_back(axis_index(l));
    shape.push_back(shape_[ax.back()]);
  }
  std::size_t out_n = std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                                      std::multiplies<>());
  std::vector<double> out(out_n, 0.0);
  std::vector<std::size_t> idx(shape_.size(), 0);
  for (std::size_t flat = 0; flat < mass_.size(); ++flat) {
    std::size_t o = 0;
    for (std::size_t k = 0; k < ax.size(); ++k) o = o * shape[k] + idx[ax[k]];
    out[o] += mass_[flat];
    for (std::size_t k = shape_.size(); k-- > 0;) {
      if (++idx[k] < shape_[k]) break;
      idx[k] = 0;
    }
  }
  if (keep.empty()) {
    return JointDist({"_"}, {1}, {1.0});
  }
  return JointDist(keep, std::move(shape), std::move(out));
}

double JointDist::entropy(const AxisSet& axes) const {
  if (axes.empty()) return 0.0;
  return vending::entropy(std::span<const double>(marginal(axes).data()));
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h -= xlog2x(x);
  return h < 0.0 ? 0.0 : h;
}

double entropy(const ProbVector& p) { return entropy(p.values()); }

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binary_entropy: p must lie in [0, 1]");
  }
  return -xlog2x(p) - xlog2x(1.0 - p);
}

double bernoulli_rd(double p, double d) {
  if (!(p >= 0.0 && p <= 1.0) || !(d >= 0.0 && d <= 1.0)) {
    throw std::invalid_argument("bernoulli_rd: arguments must lie in [0, 1]");
  }
  if (d >= std::min(p, 1.0 - p)) return 0.0;
  return std::max(binary_entropy(p) - binary_entropy(d), 0.0);
}

double conditional_entropy(const JointDist& joint, const AxisSet& axes,
                           const AxisSet& given) {
  require_disjoint(axes, given, "conditional_entropy");
  return clamp_nonneg(joint.entropy(join(axes, given)) - joint.entropy(given));
}

double mutual_information(const JointDist& joint, const AxisSet& a,
                          const AxisSet& b) {
  return conditional_mutual_information(joint, a, b, {});
}

double conditional_mutual_information(const JointDist& joint, const AxisSet& a,
                                      const AxisSet& b, const AxisSet& given) {
  require_disjoint(a, b, "mutual_information");
  require_disjoint(a, given, "mutual_information");
  require_disjoint(b, given, "mutual_information");
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("mutual_information: empty axis set");
  }
  const double v = joint.entropy(join(a, given)) + joint.entropy(join(b, given)) -
                   joint.entropy(join(join(a, b), given)) - joint.entropy(given);
  return clamp_nonneg(v);
}

JointDist factorize(const ProbVector& px, const StochasticKernel& p_au_given_x,
                    const StochasticKernel& p_y_given_xa) {
  const std::size_t nx = px.size();
  if (p_au_given_x.input_size() != nx) {
    throw DimensionError("X", "P_{A,U|X} has " +
                                  std::to_string(p_au_given_x.input_size()) +
                                  " rows, P_X has " + std::to_string(nx) + " symbols");
  }
  if (p_y_given_xa.input_size() % nx != 0) {
    throw DimensionError("A", "P_{Y|X,A} row count " +
                                  std::to_string(p_y_given_xa.input_size()) +
                                  " is not a multiple of |X|");
  }
  const std::size_t na = p_y_given_xa.input_size() / nx;
  if (p_au_given_x.output_size() % na != 0) {
    throw DimensionError("U", "P_{A,U|X} column count " +
                                  std::to_string(p_au_given_x.output_size()) +
                                  " is not a multiple of |A| = " + std::to_string(na));
  }
  const std::size_t nu = p_au_given_x.output_size() / na;
  const std::size_t ny = p_y_given_xa.output_size();
  std::vector<double> mass(nx * na * nu * ny);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t y = 0; y < ny; ++y)
          mass[((x * na + a) * nu + u) * ny + y] =
              px[x] * p_au_given_x(x, a * nu + u) * p_y_given_xa(x * na + a, y);
  return JointDist({"X", "A", "U", "Y"}, {nx, na, nu, ny}, std::move(mass));
}

JointDist factorize_indirect(const ProbVector& px,
                             const StochasticKernel& p_z_given_x,
                             const StochasticKernel& p_au_given_z,
                             const StochasticKernel& p_y_given_xza) {
  const std::size_t nx = px.size();
  if (p_z_given_x.input_size() != nx) {
    throw DimensionError("X", "P_{Z|X} row count does not match |X|");
  }
  const std::size_t nz = p_z_given_x.output_size();
  if (p_au_given_z.input_size() != nz) {
    throw DimensionError("Z", "P_{A,U|Z} row count does not match |Z|");
  }
  if (p_y_given_xza.input_size() % (nx * nz) != 0) {
    throw DimensionError("A", "P_{Y|X,Z,A} row count is not a multiple of |X||Z|");
  }
  const std::size_t na = p_y_given_xza.input_size() / (nx * nz);
  if (p_au_given_z.output_size() % na != 0) {
    throw DimensionError("U", "P_{A,U|Z} column count is not a multiple of |A|");
  }
  const std::size_t nu = p_au_given_z.output_size() / na;
  const std::size_t ny = p_y_given_xza.output_size();
  std::vector<double> mass(nx * nz * na * nu * ny);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t z = 0; z < nz; ++z)
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t u = 0; u < nu; ++u)
          for (std::size_t y = 0; y < ny; ++y)
            mass[(((x * nz + z) * na + a) * nu + u) * ny + y] =
                px[x] * p_z_given_x(x, z) * p_au_given_z(z, a * nu + u) *
                p_y_given_xza((x * nz + z) * na + a, y);
  return JointDist({"X", "Z", "A", "U", "Y"}, {nx, nz, na, nu, ny},
                   std::move(mass));
}

}  // namespace vending
