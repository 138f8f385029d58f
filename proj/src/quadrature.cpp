#include "svcva/quadrature.hpp"

#include <cmath>

#include "svcva/errors.hpp"

namespace svcva {

void QuadratureConfig::validate() const {
    if (!(dt > 0.0)) throw DomainError("quadrature: dt must be positive");
    if (!(upper_limit > 0.0)) throw DomainError("quadrature: upper_limit must be positive");
    if (n_nodes < 16) throw DomainError("quadrature: n_nodes must be at least 16");
}

std::vector<double> uniform_grid(double a, double b, double dt) {
    if (!(b > a)) throw DomainError("uniform_grid: need b > a");
    if (!(dt > 0.0)) throw DomainError("uniform_grid: need dt > 0");
    const auto n = static_cast<std::size_t>(
        std::max<long long>(1, std::llround((b - a) / dt)));
    std::vector<double> grid(n + 1);
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i)
        grid[i] = a + h * static_cast<double>(i);
    grid.back() = b;
    return grid;
}

double trapezoid(const std::vector<double>& values, double dt) {
    if (values.size() < 2) return 0.0;
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
    return sum * dt;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& values, double dt) {
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t i = 1; i < values.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (values[i - 1] + values[i]) * dt;
    return out;
}

double integrate_trapezoid(const std::function<double(double)>& f, double a,
                           double b, double dt) {
    const auto grid = uniform_grid(a, b, dt);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);
    return trapezoid(vals, grid[1] - grid[0]);
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1], positive half.
constexpr double kGlX[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

} // namespace

double gauss_legendre_panels(const std::function<double(double)>& f, double a,
                             double b, int panels) {
    if (panels < 1) panels = 1;
    const double w = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * w;
        const double half = 0.5 * w;
        double acc = 0.0;
        for (int i = 0; i < 8; ++i) {
            const double dx = half * kGlX[i];
            acc += kGlW[i] * (f(mid - dx) + f(mid + dx));
        }
        total += acc * half;
    }
    return total;
}

} // namespace svcva
