#pragma once

#include <memory>
#include <span>
#include <vector>

namespace flc {

/// Parameters of a radial cell-centered grid on (0,R) with the r^{n-1} dr measure.
struct GridSpec {
    int dimension = 1;    ///< spatial dimension n >= 1
    double radius = 1.0;  ///< domain radius R > 0
    int cell_count = 4;   ///< number of cells N >= 4
};

/// Uniform cell-centered radial grid. Immutable after construction; volume
/// weights are exact face-volume differences so that sums telescope.
///
/// Faces f_i = i*h (i = 0..N), centers r_i = (i+1/2)*h, weights
/// w_i = (f_{i+1}^n - f_i^n)/n. Cell centers are strictly positive, so the
/// (n-1)/r terms of the radial operators are always evaluated away from the
/// coordinate singularity.
class RadialGrid {
public:
    explicit RadialGrid(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    int n() const { return spec_.dimension; }
    double radius() const { return spec_.radius; }
    int cells() const { return spec_.cell_count; }
    double h() const { return h_; }

    double cell_center(int i) const { return centers_[i]; }
    double face_radius(int i) const { return faces_[i]; }
    double volume_weight(int i) const { return weights_[i]; }

    std::span<const double> cell_centers() const { return centers_; }
    std::span<const double> face_radii() const { return faces_; }
    std::span<const double> volume_weights() const { return weights_; }

    /// Total measure Sum w_i, accumulated left to right (the mandated order).
    double total_weight() const;

private:
    GridSpec spec_;
    double h_;
    std::vector<double> faces_;
    std::vector<double> centers_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Values at the N cell centers of a grid.
struct CellField {
    GridPtr grid;
    std::vector<double> v;

    int size() const { return static_cast<int>(v.size()); }
    double operator[](int i) const { return v[i]; }
    double& operator[](int i) { return v[i]; }
};

/// Values at the N+1 faces of a grid.
struct FaceField {
    GridPtr grid;
    std::vector<double> v;

    int size() const { return static_cast<int>(v.size()); }
    double operator[](int i) const { return v[i]; }
    double& operator[](int i) { return v[i]; }
};

/// Derivative of a cell field together with the width of the one-sided
/// boundary band, so residual tests can restrict to interior cells.
struct DerivedField {
    CellField values;
    int onesided_margin = 0;  ///< cells [0, margin) and [N-margin, N) use one-sided stencils

    bool is_interior(int i) const {
        return i >= onesided_margin && i < values.size() - onesided_margin;
    }
};

/// Builds the grid; rejects N < 4, R <= 0, n < 1.
GridPtr build_grid(const GridSpec& spec);

CellField make_cell_field(GridPtr grid, double value = 0.0);
CellField make_cell_field(GridPtr grid, const std::vector<double>& values);

/// Samples f at the cell centers.
template <class F>
CellField sample_cells(GridPtr grid, F&& f) {
    CellField out{grid, std::vector<double>(grid->cells())};
    for (int i = 0; i < grid->cells(); ++i) out.v[i] = f(grid->cell_center(i));
    return out;
}

/// Sum_i w_i u_i, left-to-right; approximates the integral of u r^{n-1} dr
/// over (0,R). Exact for constants; midpoint-exact for linear u when n = 1.
double cell_integral(const CellField& u);

/// Partial sums of w_j u_j: value at face i is Sum_{j<i} w_j u_j, so face 0
/// carries 0 and face N carries exactly the cell_integral accumulation.
FaceField cumulative_integral(const CellField& u);

/// Finite-difference derivative of order 1, 2 or 3: central (second-order)
/// stencils in the interior, one-sided stencils in the outermost `order`
/// cells. Requires N >= 2*order + 2.
DerivedField derivative_field(const CellField& u, int order);

}  // namespace flc
