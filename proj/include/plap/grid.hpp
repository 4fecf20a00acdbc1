#pragma once

/// Uniform 1D grid on (a, b), piecewise-linear nodal functions vanishing at
/// both endpoints, and the norms and quadrature shared by every solver.
///
/// Zero-order terms are integrated with the composite trapezoid rule on nodal
/// values. Because boundary values are zero this is the lumped-mass pairing
/// Σ_i h f_i g_i over interior nodes, which keeps discrete right-hand sides
/// nodal and positivity preserving.

#include "plap/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace plap {

class Grid {
public:
    Grid(double a, double b, int n_cells) : a_(a), b_(b), n_cells_(n_cells) {
        if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
            std::ostringstream os;
            os << "domain requires a < b (got a = " << a << ", b = " << b << ")";
            throw Error(ErrorCode::invalid_domain, os.str());
        }
        if (n_cells < 4) {
            throw Error(ErrorCode::invalid_domain,
                        "n_cells must be >= 4 (got " + std::to_string(n_cells) + ")");
        }
        h_ = (b - a) / n_cells;
    }

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    int n_cells() const noexcept { return n_cells_; }
    double h() const noexcept { return h_; }
    double length() const noexcept { return b_ - a_; }
    std::size_t n_nodes() const noexcept { return static_cast<std::size_t>(n_cells_) + 1; }
    int n_interior() const noexcept { return n_cells_ - 1; }

    double node(std::size_t i) const noexcept {
        return i == static_cast<std::size_t>(n_cells_) ? b_ : a_ + static_cast<double>(i) * h_;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double a_;
    double b_;
    int n_cells_;
    double h_{};
};

inline Grid make_grid(double a, double b, int n_cells) { return Grid(a, b, n_cells); }

/// Nodal values of a continuous piecewise-linear function with u(a) = u(b) = 0.
class GridFunction {
public:
    explicit GridFunction(const Grid& grid) : grid_(grid), values_(grid.n_nodes(), 0.0) {}

    GridFunction(const Grid& grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.n_nodes()) {
            throw Error(ErrorCode::grid_mismatch,
                        "expected " + std::to_string(grid_.n_nodes()) + " nodal values, got " +
                            std::to_string(values_.size()));
        }
        if (values_.front() != 0.0 || values_.back() != 0.0) {
            throw Error(ErrorCode::invalid_parameter, "grid function must vanish at both endpoints");
        }
    }

    /// Nodal interpolant of f; endpoint values are forced to zero.
    template <class F>
    static GridFunction interpolate(const Grid& grid, F&& f) {
        GridFunction g(grid);
        for (std::size_t i = 1; i + 1 < grid.n_nodes(); ++i) g.values_[i] = f(grid.node(i));
        return g;
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Interior write access; endpoints are pinned to zero.
    void set(std::size_t i, double v) {
        if (i == 0 || i + 1 >= values_.size()) {
            throw Error(ErrorCode::invalid_parameter, "boundary nodes are fixed at zero");
        }
        values_[i] = v;
    }

    bool all_finite() const noexcept {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }

    /// Smallest value over interior nodes.
    double interior_min() const noexcept {
        return *std::min_element(values_.begin() + 1, values_.end() - 1);
    }

    GridFunction& operator*=(double c) noexcept {
        for (double& v : values_) v *= c;
        return *this;
    }
    GridFunction& operator+=(const GridFunction& o) {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    GridFunction& operator-=(const GridFunction& o) {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    friend GridFunction operator*(double c, GridFunction f) { return f *= c; }
    friend GridFunction operator*(GridFunction f, double c) { return f *= c; }
    friend GridFunction operator+(GridFunction f, const GridFunction& g) { return f += g; }
    friend GridFunction operator-(GridFunction f, const GridFunction& g) { return f -= g; }

    /// Applies op to every interior value; endpoints stay zero.
    template <class Op>
    GridFunction map(Op&& op) const {
        GridFunction out(grid_);
        for (std::size_t i = 1; i + 1 < values_.size(); ++i) out.values_[i] = op(values_[i]);
        return out;
    }

    void check_same(const GridFunction& o) const {
        if (!(grid_ == o.grid_)) throw Error(ErrorCode::grid_mismatch, "grid functions live on different grids");
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

inline void require_same_grid(const GridFunction& f, const GridFunction& g) { f.check_same(g); }

inline void require_finite(const GridFunction& f, const char* what = "grid function") {
    if (!f.all_finite()) throw Error(ErrorCode::non_finite_input, std::string(what) + " has non-finite entries");
}

inline void require_exponent(double p, const char* name = "p") {
    if (!(p > 1.0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << name << " must be > 1 (got " << p << ")";
        throw Error(ErrorCode::invalid_parameter, os.str());
    }
}

/// max_i |f_i|
inline double sup_norm(const GridFunction& f) {
    require_finite(f);
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

/// Trapezoid-rule L^p norm on nodal values.
inline double lp_norm(const GridFunction& f, double p) {
    require_exponent(p);
    const auto v = f.values();
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += std::pow(std::abs(v[i]), p);
    return std::pow(f.grid().h() * s, 1.0 / p);
}

/// Slope of f on cell c (between nodes c and c+1).
inline double cell_slope(const GridFunction& f, std::size_t c) noexcept {
    return (f[c + 1] - f[c]) / f.grid().h();
}

/// (Σ_cells h |slope|^p)^{1/p}; exact for piecewise-linear functions.
inline double w1p_seminorm(const GridFunction& f, double p) {
    require_exponent(p);
    const std::size_t n = static_cast<std::size_t>(f.grid().n_cells());
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += std::pow(std::abs(cell_slope(f, c)), p);
    return std::pow(f.grid().h() * s, 1.0 / p);
}

/// Trapezoid quadrature of the nodal product f·g.
inline double integrate_product(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g);
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i] * g[i];
    return f.grid().h() * s;
}

// CSV: header "x,value", one row per node.

inline void write_csv(std::ostream& os, const GridFunction& f) {
    const auto old_prec = os.precision(17);
    os << "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) os << f.grid().node(i) << ',' << f[i] << '\n';
    os.precision(old_prec);
}

inline GridFunction read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,value", 0) != 0) {
        throw Error(ErrorCode::io_error, "missing 'x,value' header");
    }
    std::vector<double> xs, vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::io_error, "malformed row: " + line);
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.size() < 5) throw Error(ErrorCode::io_error, "need at least 5 nodes");
    Grid grid(xs.front(), xs.back(), static_cast<int>(xs.size()) - 1);
    return GridFunction(grid, std::move(vs));
}

} // namespace plap
