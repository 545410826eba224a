#pragma once

#include "slp/assembly.hpp"

namespace slp {

/// LU factorization of a tridiagonal matrix with partial pivoting
/// (one superdiagonal of fill). Tolerates near-singular matrices, which
/// inverse iteration depends on.
class TridiagLU {
  public:
    explicit TridiagLU(const SymTridiagonal& t);

    std::vector<double> solve(std::vector<double> b) const;

  private:
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<bool> swapped_;
};

}  // namespace slp
