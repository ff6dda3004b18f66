#pragma once

#include <chrono>
#include <cmath>

#include "svtgv/pdhg.hpp"
#include "svtgv/prox.hpp"

namespace svtgv::detail {

inline constexpr double kChangeGuard = 1e-12;

// Data term of a problem: prox, energy and default start.
struct DenoiseFidelity {
  const DenoiseProblem& problem;

  ScalarGrid prox(const ScalarGrid& v, double tau) const { return prox_denoise(v, problem.data, tau); }
  double energy(const ScalarGrid& u) const { return fidelity(problem, u); }
};

struct MriFidelity {
  const MriProblem& problem;

  ComplexGrid prox(const ComplexGrid& v, double tau) const {
    return prox_mri(v, problem.kspace, problem.mask, tau);
  }
  double energy(const ComplexGrid& u) const { return fidelity(problem, u); }
};

inline DenoiseFidelity fidelity_of(const DenoiseProblem& p) { return {p}; }
inline MriFidelity fidelity_of(const MriProblem& p) { return {p}; }

void validate_problem(const DenoiseProblem& p);
void validate_problem(const MriProblem& p);

/// ||a - b|| / max(||b||, guard)
template <typename T>
double relative_change(const Grid<T>& next, const Grid<T>& prev) {
  double diff = 0.0, base = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    diff += std::norm(next[i] - prev[i]);
    base += std::norm(prev[i]);
  }
  return std::sqrt(diff) / std::max(std::sqrt(base), kChangeGuard);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace svtgv::detail
