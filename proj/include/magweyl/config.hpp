#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "magweyl/crossed.hpp"
#include "magweyl/weyl.hpp"

namespace magweyl {

struct GridSpec {
  int dimension = 1;
  std::vector<int> M{64};
  std::vector<double> L{8.0};
  GridMode mode = GridMode::TruncatedBox;
  BoxGrid build() const;
};

enum class TwistSource { Transversal, Potential, Random };

struct Tolerances {
  double exact = 1e-12;
  double quadrature = 1e-6;
  double lattice = 1e-10;
  double magnetic_defect = 1e-8;
  double naive_defect = 1e-3;  // the naive defect must exceed this
};

struct RunConfig {
  GridSpec grid;
  nlohmann::json field = nlohmann::json::object();  // magnetic field schema
  TwistSource twist = TwistSource::Transversal;
  std::vector<double> potential;                    // constant A for TwistSource::Potential
  Endo tau = Endo::midpoint();
  nlohmann::json gauge = nlohmann::json::object();  // gauge function schema
  double symbol_width = 1.7;                        // momentum envelope of the cosine symbol
  int quadrature_nodes = 16;
  KernelRange kernel_range = KernelRange::Window;
  Tolerances tol;
  std::uint64_t seed = 7;
  int threads = 0;

  // Command-specific defaults.
  static RunConfig defaults_verify();
  static RunConfig defaults_quantize();
  static RunConfig defaults_gauge_demo();

  // Keys present in j override the fields of base. Unknown keys throw std::invalid_argument.
  static RunConfig from_json(const nlohmann::json& j, RunConfig base);
  static RunConfig load(const std::string& path, RunConfig base);

  MagneticField magnetic_field() const;
  GaugeFunction gauge_function() const;
  QuadratureRule rule() const { return QuadratureRule(quadrature_nodes); }
  // Vector potential for the configured twist source (Random has none).
  VectorPotential vector_potential() const;
};

}  // namespace magweyl
