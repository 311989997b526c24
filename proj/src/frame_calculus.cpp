#include "heis/frame_calculus.hpp"

#include <stdexcept>

namespace heis {

ScalarField z_field(const ScalarField& f, int j, int n, FrameKind kind) {
    const FrameOp op = frame_op(n, j, kind);
    const int tax = 2 * n;
    ScalarField cf = f;
    auto eval = [cf, op, tax](const HPoint& p) {
        double v = cf.partial(op.coord, p);
        if (op.twist >= 0) v += op.coef * p[op.twist] * cf.partial(tax, p);
        return v;
    };
    ScalarField::PartialFn dp;
    if (f.has_partials()) {
        dp = [cf, op, tax](const HPoint& p, std::span<const int> ax) {
            if (ax.size() > 2) throw std::invalid_argument("z_field: partials supported up to order 2");
            int axes[3];
            size_t m = ax.size();
            for (size_t i = 0; i < m; ++i) axes[i] = ax[i];
            axes[m] = op.coord;
            double v = cf.partial(std::span<const int>(axes, m + 1), p);
            if (op.twist >= 0) {
                axes[m] = tax;
                v += op.coef * p[op.twist] * cf.partial(std::span<const int>(axes, m + 1), p);
                // product rule hits on the twist coordinate
                for (size_t i = 0; i < m; ++i) {
                    if (ax[i] != op.twist) continue;
                    int rest[2];
                    size_t r = 0;
                    for (size_t k = 0; k < m; ++k)
                        if (k != i) rest[r++] = ax[k];
                    rest[r] = tax;
                    v += op.coef * cf.partial(std::span<const int>(rest, r + 1), p);
                }
            }
            return v;
        };
    }
    return ScalarField(eval, dp);
}

ScalarField compose_inverse(const ScalarField& f) {
    ScalarField cf = f;
    auto eval = [cf](const HPoint& p) { return cf(inverse(p)); };
    ScalarField::PartialFn dp;
    if (f.has_partials()) {
        dp = [cf](const HPoint& p, std::span<const int> ax) {
            const double sign = (ax.size() % 2 == 0) ? 1.0 : -1.0;
            return sign * cf.partial(ax, inverse(p));
        };
    }
    return ScalarField(eval, dp);
}

}  // namespace heis
