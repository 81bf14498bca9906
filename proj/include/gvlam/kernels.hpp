#pragma once

// Sweeps with a serial reference and an OpenMP version of each. Finite metric
// spaces are rescaled to a common integer denominator so the inner loops run
// on exact int64 distances.

#include <cstdint>
#include <string>
#include <vector>

#include "gvlam/metmodel.hpp"
#include "gvlam/prob.hpp"

namespace gvlam::kernels {

enum class Exec { serial, parallel };

struct DiaconisRow {
  unsigned k, m, n;
  Rational tv;
  Rational bound;
  bool ok;
};

// Every (k, m, n) with 1 <= k <= m + n <= max_total, in lexicographic order.
std::vector<DiaconisRow> diaconis_sweep(unsigned max_total, Exec exec);

struct IntSpace {
  static constexpr std::int64_t inf = INT64_MAX / 8;
  std::size_t n = 0;
  std::vector<std::int64_t> d;
  std::int64_t at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
};

// Both spaces scaled by the lcm of all denominators; `scale` receives it.
std::pair<IntSpace, IntSpace> to_int_spaces(const FinMetSpace& x, const FinMetSpace& y, Rational* scale = nullptr);

using Table = std::vector<std::uint8_t>;

bool is_nonexpansive(const IntSpace& x, const IntSpace& y, const Table& f);
// Backtracking enumeration in lexicographic table order.
std::vector<Table> enumerate_nonexpansive(const IntSpace& x, const IntSpace& y, std::size_t guard);
// sup_x y(f x, g x) on a space whose distances are multiplied by r (r = 0: 0).
std::int64_t hom_distance(const IntSpace& y, const Table& f, const Table& g, std::uint64_t r = 1);

struct LipschitzResult {
  std::size_t pairs = 0;
  std::size_t failures = 0;
  std::vector<std::string> examples;  // at most 5
};

// r * hom(f, g) <= hom(E_r f, E_r g) over all ordered pairs of `maps` and grades.
LipschitzResult lipschitz_sweep(const IntSpace& x, const IntSpace& y, const std::vector<Table>& maps,
                                const std::vector<std::uint64_t>& grades, Exec exec);

// Largest pointwise distance between two denotations (a hom-distance sup).
ExtRational hom_distance_sweep(const MetModel& m, const MetMap& f, const MetMap& g, Exec exec);

int max_threads();

}  // namespace gvlam::kernels
