#include "gpm/kernel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gpm {

PreferenceKernel PreferenceKernel::indicator() { return PreferenceKernel(Kind::Indicator); }

PreferenceKernel PreferenceKernel::indicator(double chord_radius) {
  if (!(chord_radius > 0.0)) throw std::invalid_argument("indicator kernel: radius must be > 0");
  PreferenceKernel k(Kind::Indicator);
  k.indicator_radius_ = chord_radius;
  return k;
}

PreferenceKernel PreferenceKernel::from_table(std::vector<double> distances,
                                              std::vector<double> weights) {
  if (distances.size() != weights.size() || distances.empty()) {
    throw std::invalid_argument("kernel table: need matching, non-empty columns");
  }
  if (distances.front() != 0.0) {
    throw std::invalid_argument("kernel table: first distance must be 0");
  }
  if (std::abs(weights.front() - 1.0) > 1e-12) {
    throw std::invalid_argument("kernel table: f(0) must be 1");
  }
  for (std::size_t i = 0; i + 1 < distances.size(); ++i) {
    if (!(distances[i] < distances[i + 1])) {
      throw std::invalid_argument("kernel table: distances must be strictly increasing");
    }
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("kernel table: weights must be finite and >= 0");
    }
  }
  PreferenceKernel k(Kind::Table);
  k.distances_ = std::move(distances);
  k.weights_ = std::move(weights);
  return k;
}

PreferenceKernel PreferenceKernel::from_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open kernel table: " + path);
  std::vector<double> dist, weight;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double x, w;
    if (!(row >> x)) continue;  // blank or comment line
    if (!(row >> w)) {
      throw std::runtime_error("kernel table " + path + ": line " + std::to_string(lineno) +
                               ": expected two columns");
    }
    dist.push_back(x);
    weight.push_back(w);
  }
  return from_table(std::move(dist), std::move(weight));
}

double PreferenceKernel::operator()(double distance) const {
  if (kind_ == Kind::Indicator) {
    if (indicator_radius_ < 0.0) {
      throw std::logic_error("indicator kernel evaluated without a bound radius");
    }
    return distance <= indicator_radius_ ? 1.0 : 0.0;
  }
  if (distance <= distances_.front()) return weights_.front();
  if (distance >= distances_.back()) return weights_.back();
  std::size_t hi = 1;
  while (distances_[hi] < distance) ++hi;
  const double x0 = distances_[hi - 1];
  const double x1 = distances_[hi];
  const double t = (distance - x0) / (x1 - x0);
  return weights_[hi - 1] + t * (weights_[hi] - weights_[hi - 1]);
}

std::string PreferenceKernel::describe() const {
  if (kind_ == Kind::Indicator) return "indicator";
  return "table[" + std::to_string(distances_.size()) + "]";
}

}  // namespace gpm
