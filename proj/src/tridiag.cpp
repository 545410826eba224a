#include "slp/tridiag.hpp"

#include <cmath>
#include <limits>

namespace slp {

TridiagLU::TridiagLU(const SymTridiagonal& t) {
    const std::size_t n = t.size();
    d_ = t.diag;
    dl_.assign(n > 0 ? n - 1 : 0, 0.0);
    du_.assign(n > 0 ? n - 1 : 0, 0.0);
    du2_.assign(n > 1 ? n - 2 : 0, 0.0);
    swapped_.assign(n > 0 ? n - 1 : 0, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        dl_[i] = t.off[i];
        du_[i] = t.off[i];
    }

    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d_[i]) >= std::abs(dl_[i])) {
            if (d_[i] == 0.0) d_[i] = tiny;
            double fact = dl_[i] / d_[i];
            dl_[i] = fact;
            d_[i + 1] -= fact * du_[i];
            if (i + 2 < n) du2_[i] = 0.0;
        } else {
            double fact = d_[i] / dl_[i];
            d_[i] = dl_[i];
            dl_[i] = fact;
            double temp = du_[i];
            du_[i] = d_[i + 1];
            d_[i + 1] = temp - fact * d_[i + 1];
            if (i + 2 < n) {
                du2_[i] = du_[i + 1];
                du_[i + 1] = -fact * du_[i + 1];
            }
            swapped_[i] = true;
        }
    }
    if (n > 0 && d_[n - 1] == 0.0) d_[n - 1] = tiny;
}

std::vector<double> TridiagLU::solve(std::vector<double> b) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!swapped_[i]) {
            b[i + 1] -= dl_[i] * b[i];
        } else {
            double temp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = temp - dl_[i] * b[i];
        }
    }
    if (n == 0) return b;
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t k = n; k-- > 2;) {
        std::size_t i = k - 2;
        b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }
    return b;
}

}  // namespace slp
