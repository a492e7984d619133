#include "osc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "osc/errors.hpp"

namespace osc {

namespace {

double rel_eps(double scale) { return 1e-12 * (1.0 + std::abs(scale)); }

}  // namespace

Grid::Grid(std::vector<double> nodes, double step) : nodes_(std::move(nodes)), step_(step) {
    if (nodes_.size() < 2) throw InputError("grid needs at least two nodes");
    for (std::size_t j = 1; j < nodes_.size(); ++j)
        if (!(nodes_[j] > nodes_[j - 1])) throw InputError("grid nodes must be strictly increasing");
}

bool Grid::contains(double t) const { return t >= front() - rel_eps(front()) && t <= back() + rel_eps(back()); }

std::size_t Grid::segment(double t) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    if (it == nodes_.begin()) return 0;
    const auto j = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::min(j, nodes_.size() - 2);
}

std::optional<std::size_t> Grid::node_index(double t) const {
    const std::size_t j = segment(t);
    if (std::abs(nodes_[j] - t) <= rel_eps(t)) return j;
    if (std::abs(nodes_[j + 1] - t) <= rel_eps(t)) return j + 1;
    return std::nullopt;
}

GridPtr build_grid(Interval span, double h, std::span<const double> breakpoints) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InputError("grid step h must be positive");
    if (!(span.hi > span.lo)) throw InputError("grid span must be nonempty");
    const auto n = static_cast<std::size_t>(std::ceil((span.hi - span.lo) / h - 1e-9));
    std::vector<double> uniform;
    uniform.reserve(n + 1);
    for (std::size_t j = 0; j < n; ++j) uniform.push_back(span.lo + static_cast<double>(j) * h);
    uniform.push_back(span.hi);

    std::vector<double> extra;
    for (double b : breakpoints)
        if (b > span.lo && b < span.hi) extra.push_back(b);
    std::sort(extra.begin(), extra.end());

    // Merge: breakpoints win over lattice points that sit within tol of them.
    const double tol = 1e-9 * h;
    std::vector<double> nodes;
    nodes.reserve(uniform.size() + extra.size());
    std::size_t e = 0;
    for (std::size_t j = 0; j < uniform.size(); ++j) {
        const double u = uniform[j];
        while (e < extra.size() && extra[e] < u - tol) {
            if (nodes.empty() || extra[e] - nodes.back() > tol) nodes.push_back(extra[e]);
            ++e;
        }
        if (e < extra.size() && std::abs(extra[e] - u) <= tol && j != 0 && j + 1 != uniform.size()) {
            if (nodes.empty() || extra[e] - nodes.back() > tol) nodes.push_back(extra[e]);
            ++e;
            continue;
        }
        if (!nodes.empty() && u - nodes.back() <= tol) {
            if (j + 1 == uniform.size()) nodes.back() = u;
            continue;
        }
        nodes.push_back(u);
    }
    return std::make_shared<const Grid>(std::move(nodes), h);
}

GridPtr build_grid(const Equation& equation, Interval window, double h, int r_max) {
    return std::visit(
        [&](const auto& problem) {
            const double start = base_start(problem.terms);
            if (window.lo < start - 1e-12) {
                std::ostringstream os;
                os << "window start " << window.lo << " precedes the problem's base start " << start;
                throw InputError(os.str());
            }
            double end = window.hi;
            if constexpr (std::is_same_v<std::decay_t<decltype(problem)>, AdvancedProblem>) {
                const auto delta = advance_bound(problem);
                if (!delta) throw InputError("advanced problem has unbounded advance; grid cannot be extended");
                end += static_cast<double>(std::max(r_max, 1) + 2) * std::max(*delta, h);
            }
            const auto bps = breakpoints(problem.terms, start, end);
            return build_grid(Interval{start, end}, h, bps);
        },
        equation);
}

CumulativeTable::CumulativeTable(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size()) throw InputError("cumulative table size does not match its grid");
}

double CumulativeTable::at(double t) const {
    if (!grid_->contains(t)) {
        std::ostringstream os;
        os << "cumulative table lookup at t = " << t << " outside [" << grid_->front() << ", " << grid_->back()
           << "]";
        throw RangeError(os.str());
    }
    return at_clamped(t);
}

double CumulativeTable::at_clamped(double t) const {
    const Grid& g = *grid_;
    if (t <= g.front()) return values_.front();
    if (t >= g.back()) return values_.back();
    const std::size_t j = g.segment(t);
    const double w = (t - g[j]) / (g[j + 1] - g[j]);
    return values_[j] + w * (values_[j + 1] - values_[j]);
}

CumulativeTable cumulative(GridPtr grid, const SegmentIntegrand& f) {
    const Grid& g = *grid;
    std::vector<double> values(g.size(), 0.0);
    double right = f(g[0], Side::Right);
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
        const double left = f(g[j + 1], Side::Left);
        if (!std::isfinite(right) || !std::isfinite(left)) {
            std::ostringstream os;
            os << "non-finite integrand near t = " << g[j];
            throw NumericalError(os.str());
        }
        values[j + 1] = values[j] + 0.5 * (g[j + 1] - g[j]) * (right + left);
        if (j + 2 < g.size()) right = f(g[j + 1], Side::Right);
    }
    return CumulativeTable(std::move(grid), std::move(values));
}

CumulativeTable cumulative(GridPtr grid, const PiecewiseCellFunction& f) {
    return cumulative(std::move(grid), [&f](double t, Side side) { return f.eval(t, side); });
}

double integral_between(const CumulativeTable& table, double a, double b) { return table.at(b) - table.at(a); }

double integrate(const Grid& grid, double a, double b, const SegmentIntegrand& f) {
    if (b < a) throw InputError("integrate: lower limit exceeds upper limit");
    if (!grid.contains(a) || !grid.contains(b)) {
        std::ostringstream os;
        os << "integrate: [" << a << ", " << b << "] leaves the grid";
        throw RangeError(os.str());
    }
    if (b - a <= rel_eps(b)) return 0.0;
    const auto nodes = grid.nodes();
    // first node strictly after a, last node strictly before b
    std::size_t j = grid.segment(a) + 1;
    if (auto ja = grid.node_index(a)) j = *ja + 1;
    std::size_t jb = grid.segment(b);
    if (auto nb = grid.node_index(b)) jb = *nb - 1;

    double total = 0.0;
    double x0 = a;
    double f0 = f(a, Side::Right);
    for (std::size_t i = j; i <= jb && i < nodes.size(); ++i) {
        const double x1 = nodes[i];
        if (x1 <= x0) continue;
        total += 0.5 * (x1 - x0) * (f0 + f(x1, Side::Left));
        x0 = x1;
        f0 = f(x1, Side::Right);
    }
    total += 0.5 * (b - x0) * (f0 + f(b, Side::Left));
    return total;
}

}  // namespace osc
