#include "aicg/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace aicg {

namespace {

// Kronrod abscissae on [-1, 1] (positive half; odd indices are Gauss nodes).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745671370, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[10];
    double gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    if (!std::isfinite(kronrod)) throw std::domain_error("integrand is not finite on the interval");
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult quad_adaptive_1d(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_subdivisions) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be positive");
    if (a == b) return {0.0, 0.0, 0};
    std::priority_queue<Panel> queue;
    Panel first = gauss_kronrod(f, a, b);
    double total_error = first.error;
    queue.push(first);
    int subdivisions = 0;
    while (total_error > abs_tol) {
        if (subdivisions >= max_subdivisions) {
            double value = 0.0;
            for (auto q = queue; !q.empty(); q.pop()) value += q.top().value;
            throw ConvergenceError("adaptive quadrature did not reach tolerance", value, total_error);
        }
        const Panel worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;  // interval at machine resolution
        queue.pop();
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++subdivisions;
    }
    // Sum panels in position order so the result does not depend on heap layout.
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    double error = 0.0;
    for (; !queue.empty(); queue.pop()) {
        panels.push_back(queue.top());
        error += queue.top().error;
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
    double value = 0.0;
    double comp = 0.0;
    for (const Panel& p : panels) {
        const double y = p.value - comp;
        const double t = value + y;
        comp = (t - value) - y;
        value = t;
    }
    return {value, error, subdivisions};
}

}  // namespace aicg
