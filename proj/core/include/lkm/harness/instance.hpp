#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lkm/objective.hpp"
#include "lkm/submodular.hpp"

namespace lkm::harness {

struct RandomQuadratic {
  std::optional<double> scale_shift;  // defaults to n
};
struct IdentityObjective {};
struct ExplicitObjective {
  std::vector<std::vector<double>> p;
  std::vector<double> b;
};
using ObjectiveSpec = std::variant<RandomQuadratic, IdentityObjective, ExplicitObjective>;
using FunctionSpec = SubmodularFunction::Family;

struct InstanceSpec {
  int n = 0;
  std::uint64_t seed = 0;
  FunctionSpec function = Permutahedron{};
  ObjectiveSpec objective = RandomQuadratic{};
  std::string notes;
};

struct Instance {
  QuadraticObjective g;
  SubmodularFunction f;
  std::uint64_t seed_used;  // differs from the requested seed after a resample
};

/// Uniform double in [0, 1) from the top 53 bits of one mt19937_64 draw.
double unit_uniform(std::uint64_t draw);

/// g(x) = x'Qx + b'x with Q = sym(A) + shift I, returned as P = 2Q and b.
/// A is drawn row-major from U[-1, 1], then b from U[0, n]. When the smallest
/// eigenvalue of P is below 1e-6 the seed is bumped, at most 8 times.
struct RandomQuadraticData {
  Matrix p;
  Vector b;
  std::uint64_t seed_used;
};
RandomQuadraticData random_quadratic_data(int n, std::uint64_t seed, double scale_shift);

Instance generate_instance(const InstanceSpec& spec);

std::string to_json(const InstanceSpec& spec);
/// Throws InvalidInput on malformed input or unknown fields.
InstanceSpec parse_instance(std::string_view text);
InstanceSpec load_instance(const std::string& path);

}  // namespace lkm::harness
