#pragma once

#include <string>
#include <vector>

namespace gpm {

// Edge preference as a function of chord distance. The indicator kernel is
// the base model; table kernels (piecewise linear, f(0) = 1) drive the
// generalized attachment rule where every previous vertex is a candidate.
class PreferenceKernel {
 public:
  enum class Kind { Indicator, Table };

  // Threshold kernel. The radius is normally derived from (d, p) at the use
  // site; pass it explicitly to get an evaluable instance.
  static PreferenceKernel indicator();
  static PreferenceKernel indicator(double chord_radius);
  // Two-column text: distance weight. Distances strictly increasing from 0,
  // first weight must be 1; evaluation interpolates linearly and clamps to
  // the last weight beyond the table.
  static PreferenceKernel from_table_file(const std::string& path);
  static PreferenceKernel from_table(std::vector<double> distances, std::vector<double> weights);

  Kind kind() const { return kind_; }
  bool is_indicator() const { return kind_ == Kind::Indicator; }
  double operator()(double distance) const;

  std::string describe() const;

 private:
  explicit PreferenceKernel(Kind kind) : kind_(kind) {}

  Kind kind_;
  double indicator_radius_ = -1.0;  // < 0: unbound
  std::vector<double> distances_;
  std::vector<double> weights_;
};

}  // namespace gpm
