#include "semirv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "semirv/errors.hpp"
#include "semirv/numeric.hpp"

namespace semirv {

namespace {

// Kronrod-15 abscissae on [0,1] with the embedded Gauss-7 weights.
// Columns: node, Gauss weight (0 for Kronrod-only nodes), Kronrod weight.
constexpr double kNodes[8][3] = {
    {0.000000000000000000, 0.417959183673469388, 0.209482141084727828},
    {0.405845151377397167, 0.381830050505118945, 0.190350578064785410},
    {0.741531185599394440, 0.279705391489276668, 0.140653259715525919},
    {0.949107912342758525, 0.129484966168869693, 0.063092092629978553},
    {0.207784955007898468, 0.0,                  0.204432940075298892},
    {0.586087235467691130, 0.0,                  0.169004726639267903},
    {0.864864423359769073, 0.0,                  0.104790010322250184},
    {0.991455371120812639, 0.0,                  0.022935322010529225},
};

struct Panel {
    double a, b;
    double value;
    double error;
    int depth;
    std::uint64_t seq;  // creation order, deterministic tie-break
};

struct PanelLess {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.seq > y.seq;
    }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b,
                     int depth, std::uint64_t seq) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double y0 = f(mid);
    double g7 = kNodes[0][1] * y0;
    double k15 = kNodes[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i][0];
        const double yi = f(mid + dx) + f(mid - dx);
        g7 += kNodes[i][1] * yi;
        k15 += kNodes[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;

    // Standard QUADPACK-style error heuristic.
    double err = std::abs(k15 - g7);
    err = 200.0 * err * std::sqrt(std::min(1.0, 200.0 * err));
    return Panel{a, b, k15, err, depth, seq};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f,
                           double a, double b,
                           const std::vector<double>& breakpoints,
                           const QuadratureOptions& opts) {
    if (!(b >= a)) throw DomainError("integrate: b < a");
    if (a == b) return {0.0, 0.0, true};

    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints) {
        if (c > a && c < b) cuts.push_back(c);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel, std::vector<Panel>, PanelLess> heap;
    std::uint64_t seq = 0;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = evaluate_panel(f, cuts[i], cuts[i + 1], 0, seq++);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    auto target = [&](double value) {
        return std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    };

    while (total_err > target(total) && !heap.empty()) {
        Panel worst = heap.top();
        if (worst.depth >= opts.max_levels || heap.size() >= opts.max_intervals) {
            break;
        }
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = evaluate_panel(f, worst.a, mid, worst.depth + 1, seq++);
        Panel right = evaluate_panel(f, mid, worst.b, worst.depth + 1, seq++);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Recompute the sums from surviving panels; the incremental updates above
    // can accumulate cancellation over many refinements.
    KahanSum vsum, esum;
    while (!heap.empty()) {
        vsum.add(heap.top().value);
        esum.add(heap.top().error);
        heap.pop();
    }
    QuadratureResult result{vsum.value(), esum.value(), true};
    if (result.error_estimate > target(result.value)) {
        result.converged = false;
        if (opts.throw_on_failure) {
            throw AccuracyError("integrate: tolerance not reached",
                                result.error_estimate);
        }
    }
    return result;
}

}  // namespace semirv
