#pragma once

#include "carnot_ma/domain.hpp"
#include "carnot_ma/fields.hpp"
#include "carnot_ma/jets.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace carnot_ma {

struct GridOptions {
    double h = 0.1;
    bool anisotropic_t = false;  // spacing h^2 along the last axis
    double reach = 0.0;          // arm length in field parameter; 0 selects reach_factor * sqrt(h)
    double reach_factor = 0.8;
    int frames_K = 8;            // m = 2: K orthogonal pairs
    int random_frames = 16;      // m > 3
    std::uint64_t seed = 17;
};

/// Unit directions in R^m grouped into orthonormal frames.
struct DirectionSet {
    Mat directions;                       // m x D, unit columns
    std::vector<std::vector<int>> frames;  // each frame lists m column indices
};

/// Orthogonal pairs at angles k pi / (2K) for m = 2, the five orthonormal
/// triads of icosahedral two-fold axes for m = 3, seeded random frames for
/// m > 3 and {1} for m = 1. The first frame is always the standard basis.
DirectionSet make_direction_set(int m, int frames_K = 8, int random_frames = 16, std::uint64_t seed = 17);

/// One end of a stencil chord x + s sigma(x) v. Either an interpolated lattice
/// point (base >= 0, fractions stored by the grid) or a point on the boundary
/// (boundary >= 0) carrying the datum g there.
struct ArmEnd {
    double s = 0.0;
    std::int32_t base = -1;
    std::int32_t boundary = -1;
};

/// Masked axis-aligned lattice over a domain with precomputed stencil arms.
class Grid {
public:
    static std::shared_ptr<const Grid> build(const DomainSpec& domain, const FieldFamily& family,
                                             const GridOptions& options);

    int n() const { return n_; }
    int m() const { return m_; }
    const Vec& lower() const { return lo_; }
    const Vec& spacing() const { return spacing_; }
    const std::vector<int>& counts() const { return counts_; }
    std::size_t lattice_size() const { return inside_.size(); }
    double reach() const { return reach_; }
    const DirectionSet& directions() const { return dirs_; }
    const GridOptions& options() const { return options_; }
    const DomainSpec& domain() const { return domain_; }
    const FieldFamily& family() const { return family_; }

    /// Lattice ids of interior nodes (Phi > 0).
    const std::vector<std::int32_t>& interior() const { return interior_; }
    bool inside(std::int32_t id) const { return inside_[static_cast<std::size_t>(id)] != 0; }
    /// Interior index of a lattice id, or -1.
    std::int32_t interior_index(std::int32_t id) const { return interior_index_[static_cast<std::size_t>(id)]; }

    Vec coordinates(std::int32_t id) const;
    std::int32_t id_of(const std::vector<int>& multi) const;
    std::vector<int> multi_index(std::int32_t id) const;
    /// Lattice id of the nearest node to x (clamped into the lattice).
    std::int32_t nearest(const Vec& x) const;

    /// Arm for interior index k, direction d and side (0: +, 1: -).
    const ArmEnd& arm(std::size_t k, int d, int side) const {
        return arms_[(k * static_cast<std::size_t>(dir_count()) + static_cast<std::size_t>(d)) * 2 +
                     static_cast<std::size_t>(side)];
    }
    const double* arm_fractions(std::size_t k, int d, int side) const {
        return &fractions_[((k * static_cast<std::size_t>(dir_count()) + static_cast<std::size_t>(d)) * 2 +
                            static_cast<std::size_t>(side)) *
                           static_cast<std::size_t>(n_)];
    }
    int dir_count() const { return static_cast<int>(dirs_.directions.cols()); }

    const std::vector<Vec>& boundary_points() const { return boundary_points_; }

    /// Offsets (in lattice ids) of the 2^n corners of a cell, bit i set = +1 along axis i.
    const std::vector<std::int32_t>& corner_offsets() const { return corner_offsets_; }

    /// Interior nodes whose arms are all shortened or extended to the boundary.
    std::size_t fully_boundary_nodes() const;
    /// Interior nodes with at least one boundary arm.
    std::size_t boundary_touching_nodes() const;

private:
    Grid(const DomainSpec& domain, const FieldFamily& family) : domain_(domain), family_(family) {}

    bool cell_interior(std::int32_t base, const double* fractions) const;
    ArmEnd make_arm(const Vec& x, const Vec& dir, double s, double* fractions);

    DomainSpec domain_;
    FieldFamily family_;
    GridOptions options_;
    int n_ = 0;
    int m_ = 0;
    Vec lo_;
    Vec spacing_;
    std::vector<int> counts_;
    std::vector<std::int32_t> strides_;
    std::vector<std::uint8_t> inside_;
    std::vector<std::int32_t> interior_;
    std::vector<std::int32_t> interior_index_;
    std::vector<std::int32_t> corner_offsets_;
    DirectionSet dirs_;
    double reach_ = 0.0;
    std::vector<ArmEnd> arms_;
    std::vector<double> fractions_;
    std::vector<Vec> boundary_points_;
};

/// Values on every lattice node (interior nodes carry the unknown, exterior
/// nodes an extension of the boundary data) plus the boundary datum at every
/// arm crossing.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(std::shared_ptr<const Grid> grid);

    const Grid& grid() const { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& boundary_values() { return boundary_values_; }
    const std::vector<double>& boundary_values() const { return boundary_values_; }

    double at(std::int32_t id) const { return values_[static_cast<std::size_t>(id)]; }
    double interior_value(std::size_t k) const { return values_[static_cast<std::size_t>(grid_->interior()[k])]; }

    /// Sets exterior nodes and boundary crossings from g; interior nodes untouched.
    void set_boundary(const ScalarField& g);
    /// Sets interior nodes from f.
    void set_interior(const ScalarField& f);

    /// Value at the end of an arm.
    double arm_value(std::size_t k, int d, int side) const;

    /// Multilinear interpolation of the lattice values at x (clamped into the lattice).
    double interpolate(const Vec& x) const;
    ScalarField as_function() const;

    /// max |u - f| over interior nodes.
    double max_error(const ScalarField& f) const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> values_;
    std::vector<double> boundary_values_;
};

/// Interior nodes as CSV: header "x1,...,xn,value", one node per line, %.17g.
void write_grid_csv(std::ostream& out, const GridFunction& u);
void write_grid_csv(const std::string& path, const GridFunction& u);

/// Reads interior values written by write_grid_csv into a copy of `like`.
/// Throws InputError on malformed rows or nodes not on the lattice.
GridFunction read_grid_csv(std::istream& in, const GridFunction& like);
GridFunction read_grid_csv(const std::string& path, const GridFunction& like);

}  // namespace carnot_ma
