#include "flc/radial_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace flc {

namespace {

double int_pow(double x, int n) {
    double acc = 1.0;
    for (int k = 0; k < n; ++k) acc *= x;
    return acc;
}

}  // namespace

RadialGrid::RadialGrid(const GridSpec& spec) : spec_(spec) {
    if (spec.dimension < 1) throw std::invalid_argument("GridSpec: dimension must be >= 1");
    if (!(spec.radius > 0.0)) throw std::invalid_argument("GridSpec: radius must be > 0");
    if (spec.cell_count < 4) throw std::invalid_argument("GridSpec: cell_count must be >= 4");

    const int N = spec.cell_count;
    const int n = spec.dimension;
    h_ = spec.radius / N;

    faces_.resize(N + 1);
    centers_.resize(N);
    weights_.resize(N);
    for (int i = 0; i <= N; ++i) faces_[i] = i * h_;
    faces_[N] = spec.radius;  // exact right endpoint
    for (int i = 0; i < N; ++i) centers_[i] = (i + 0.5) * h_;

    // w_i as differences of the cumulative face volumes f^n/n. Summing these
    // differences left to right stays glued to the cumulative sequence, which
    // keeps Sum w_i within a few ulps of R^n/n.
    double prev = 0.0;
    for (int i = 0; i < N; ++i) {
        const double cur = int_pow(faces_[i + 1], n) / n;
        weights_[i] = cur - prev;
        if (!(weights_[i] > 0.0))
            throw std::invalid_argument("GridSpec: degenerate cell volume at index " + std::to_string(i));
        prev = cur;
    }
}

double RadialGrid::total_weight() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

GridPtr build_grid(const GridSpec& spec) { return std::make_shared<RadialGrid>(spec); }

CellField make_cell_field(GridPtr grid, double value) {
    return CellField{grid, std::vector<double>(grid->cells(), value)};
}

CellField make_cell_field(GridPtr grid, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != grid->cells())
        throw std::invalid_argument("CellField: value count does not match grid");
    return CellField{grid, values};
}

double cell_integral(const CellField& u) {
    const auto& g = *u.grid;
    double s = 0.0;
    for (int i = 0; i < g.cells(); ++i) s += g.volume_weight(i) * u.v[i];
    return s;
}

FaceField cumulative_integral(const CellField& u) {
    const auto& g = *u.grid;
    FaceField out{u.grid, std::vector<double>(g.cells() + 1)};
    double s = 0.0;
    out.v[0] = 0.0;
    for (int i = 0; i < g.cells(); ++i) {
        s += g.volume_weight(i) * u.v[i];
        out.v[i + 1] = s;
    }
    return out;
}

DerivedField derivative_field(const CellField& u, int order) {
    if (order < 1 || order > 3) throw std::invalid_argument("derivative_field: order must be 1, 2 or 3");
    const auto& g = *u.grid;
    const int N = g.cells();
    if (N < 2 * order + 2)
        throw std::invalid_argument("derivative_field: grid too small for requested order");

    const double h = g.h();
    const auto& a = u.v;
    DerivedField out{CellField{u.grid, std::vector<double>(N)}, order};
    auto& d = out.values.v;

    // every stencil is assembled from adjacent differences so that constant
    // fields are annihilated exactly
    auto df = [&](int i) { return a[i + 1] - a[i]; };

    switch (order) {
        case 1: {
            d[0] = (4.0 * df(0) - (df(0) + df(1))) / (2.0 * h);
            for (int i = 1; i < N - 1; ++i) d[i] = (df(i) + df(i - 1)) / (2.0 * h);
            d[N - 1] = (4.0 * df(N - 2) - (df(N - 2) + df(N - 3))) / (2.0 * h);
            break;
        }
        case 2: {
            const double h2 = h * h;
            d[0] = (-2.0 * df(0) + 3.0 * df(1) - df(2)) / h2;
            for (int i = 1; i < N - 1; ++i) d[i] = (df(i) - df(i - 1)) / h2;
            d[N - 1] = (2.0 * df(N - 2) - 3.0 * df(N - 3) + df(N - 4)) / h2;
            break;
        }
        case 3: {
            const double h3 = h * h * h;
            for (int i = 0; i < 3; ++i)
                d[i] = (df(i + 2) - 2.0 * df(i + 1) + df(i)) / h3;
            for (int i = 3; i < N - 3; ++i)
                d[i] = ((a[i + 2] - a[i - 2]) - 2.0 * (a[i + 1] - a[i - 1])) / (2.0 * h3);
            for (int i = N - 3; i < N; ++i)
                d[i] = (df(i - 1) - 2.0 * df(i - 2) + df(i - 3)) / h3;
            break;
        }
    }
    return out;
}

}  // namespace flc
