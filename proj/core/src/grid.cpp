#include "carnot_ma/grid.hpp"

#include "carnot_ma/error.hpp"
#include "carnot_ma/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace carnot_ma {

namespace {

std::vector<Vec> icosahedral_two_fold_axes() {
    const double phi = std::numbers::phi;
    std::vector<Vec> axes;
    for (int i = 0; i < 3; ++i) axes.push_back(Vec::Unit(3, i));
    const double base[3] = {phi / 2.0, 0.5, 0.5 / phi};
    for (int shift = 0; shift < 3; ++shift) {
        for (int sy = -1; sy <= 1; sy += 2) {
            for (int sz = -1; sz <= 1; sz += 2) {
                Vec v(3);
                v((0 + shift) % 3) = base[0];
                v((1 + shift) % 3) = sy * base[1];
                v((2 + shift) % 3) = sz * base[2];
                axes.push_back(v);
            }
        }
    }
    return axes;
}

bool partition_triads(const std::vector<Vec>& axes, std::vector<int>& used, std::vector<std::vector<int>>& out) {
    int first = -1;
    for (int i = 0; i < static_cast<int>(axes.size()); ++i) {
        if (!used[i]) {
            first = i;
            break;
        }
    }
    if (first < 0) return true;
    used[first] = 1;
    for (int j = first + 1; j < static_cast<int>(axes.size()); ++j) {
        if (used[j] || std::abs(axes[first].dot(axes[j])) > 1e-12) continue;
        for (int k = j + 1; k < static_cast<int>(axes.size()); ++k) {
            if (used[k] || std::abs(axes[first].dot(axes[k])) > 1e-12 || std::abs(axes[j].dot(axes[k])) > 1e-12) {
                continue;
            }
            used[j] = used[k] = 1;
            out.push_back({first, j, k});
            if (partition_triads(axes, used, out)) return true;
            out.pop_back();
            used[j] = used[k] = 0;
        }
    }
    used[first] = 0;
    return false;
}

}  // namespace

DirectionSet make_direction_set(int m, int frames_K, int random_frames, std::uint64_t seed) {
    if (m < 1) throw InputError("direction set: m must be positive");
    DirectionSet set;
    if (m == 1) {
        set.directions = Mat::Ones(1, 1);
        set.frames = {{0}};
    } else if (m == 2) {
        if (frames_K < 1) throw InputError("direction set: frames_K must be positive");
        set.directions.resize(2, 2 * frames_K);
        for (int d = 0; d < 2 * frames_K; ++d) {
            const double theta = d * std::numbers::pi / (2.0 * frames_K);
            set.directions(0, d) = std::cos(theta);
            set.directions(1, d) = std::sin(theta);
        }
        for (int k = 0; k < frames_K; ++k) set.frames.push_back({k, k + frames_K});
    } else if (m == 3) {
        const std::vector<Vec> axes = icosahedral_two_fold_axes();
        std::vector<int> used(axes.size(), 0);
        std::vector<std::vector<int>> triads;
        if (!partition_triads(axes, used, triads)) throw InputError("direction set: icosahedral partition failed");
        set.directions.resize(3, static_cast<Eigen::Index>(axes.size()));
        for (std::size_t i = 0; i < axes.size(); ++i) set.directions.col(static_cast<Eigen::Index>(i)) = axes[i];
        set.frames = triads;
    } else {
        Rng rng(seed);
        const int frames = std::max(1, random_frames);
        set.directions.resize(m, static_cast<Eigen::Index>(frames) * m);
        for (int f = 0; f < frames; ++f) {
            const Mat q = f == 0 ? Mat(Mat::Identity(m, m)) : rng.orthogonal(m);
            std::vector<int> frame;
            for (int j = 0; j < m; ++j) {
                set.directions.col(f * m + j) = q.col(j);
                frame.push_back(f * m + j);
            }
            set.frames.push_back(frame);
        }
    }
    return set;
}

std::shared_ptr<const Grid> Grid::build(const DomainSpec& domain, const FieldFamily& family,
                                        const GridOptions& options) {
    if (!(options.h > 0.0)) throw InputError("build_grid: h must be positive");
    if (domain.dimension() != family.n()) throw InputError("build_grid: domain and family dimensions differ");
    std::shared_ptr<Grid> g(new Grid(domain, family));
    g->options_ = options;
    g->n_ = family.n();
    g->m_ = family.m();
    const int n = g->n_;
    const Box& box = domain.bounding_box();
    g->spacing_ = Vec::Constant(n, options.h);
    if (options.anisotropic_t) g->spacing_(n - 1) = options.h * options.h;
    g->lo_.resize(n);
    g->counts_.resize(static_cast<std::size_t>(n));
    g->strides_.resize(static_cast<std::size_t>(n));
    double total = 1.0;
    for (int i = 0; i < n; ++i) {
        const double span = box.hi(i) - box.lo(i);
        const int cells = std::max(1, static_cast<int>(std::ceil(span / g->spacing_(i) - 1e-9)));
        g->counts_[static_cast<std::size_t>(i)] = cells + 1;
        g->lo_(i) = 0.5 * (box.lo(i) + box.hi(i)) - 0.5 * cells * g->spacing_(i);
        g->strides_[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(total);
        total *= cells + 1;
    }
    if (total > 2.0e8) throw InputError("build_grid: lattice too large for the requested spacing");
    const auto size = static_cast<std::size_t>(total);
    g->inside_.assign(size, 0);
    g->interior_index_.assign(size, -1);
    for (std::size_t id = 0; id < size; ++id) {
        if (domain.contains(g->coordinates(static_cast<std::int32_t>(id)))) {
            g->inside_[id] = 1;
            g->interior_index_[id] = static_cast<std::int32_t>(g->interior_.size());
            g->interior_.push_back(static_cast<std::int32_t>(id));
        }
    }
    if (g->interior_.empty()) throw InputError("build_grid: no lattice node lies inside the domain");

    for (int c = 0; c < (1 << n); ++c) {
        std::int32_t off = 0;
        for (int i = 0; i < n; ++i) {
            if (c & (1 << i)) off += g->strides_[static_cast<std::size_t>(i)];
        }
        g->corner_offsets_.push_back(off);
    }

    g->dirs_ = make_direction_set(g->m_, options.frames_K, options.random_frames, options.seed);
    g->reach_ = options.reach > 0.0 ? options.reach : options.reach_factor * std::sqrt(options.h);

    const int dcount = g->dir_count();
    const std::size_t arms = g->interior_.size() * static_cast<std::size_t>(dcount) * 2;
    g->arms_.resize(arms);
    g->fractions_.assign(arms * static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = 0; k < g->interior_.size(); ++k) {
        const Vec x = g->coordinates(g->interior_[k]);
        const Mat sigma = family.sigma(x);
        for (int d = 0; d < dcount; ++d) {
            const Vec dir = sigma * g->dirs_.directions.col(d);
            for (int side = 0; side < 2; ++side) {
                const std::size_t slot = (k * static_cast<std::size_t>(dcount) + static_cast<std::size_t>(d)) * 2 +
                                         static_cast<std::size_t>(side);
                g->arms_[slot] = g->make_arm(x, side == 0 ? dir : Vec(-dir), g->reach_,
                                             &g->fractions_[slot * static_cast<std::size_t>(n)]);
            }
        }
    }
    return g;
}

Vec Grid::coordinates(std::int32_t id) const {
    Vec x(n_);
    std::int32_t rest = id;
    for (int i = 0; i < n_; ++i) {
        const int c = counts_[static_cast<std::size_t>(i)];
        x(i) = lo_(i) + (rest % c) * spacing_(i);
        rest /= c;
    }
    return x;
}

std::vector<int> Grid::multi_index(std::int32_t id) const {
    std::vector<int> idx(static_cast<std::size_t>(n_));
    std::int32_t rest = id;
    for (int i = 0; i < n_; ++i) {
        const int c = counts_[static_cast<std::size_t>(i)];
        idx[static_cast<std::size_t>(i)] = rest % c;
        rest /= c;
    }
    return idx;
}

std::int32_t Grid::id_of(const std::vector<int>& multi) const {
    std::int32_t id = 0;
    for (int i = 0; i < n_; ++i) id += multi[static_cast<std::size_t>(i)] * strides_[static_cast<std::size_t>(i)];
    return id;
}

std::int32_t Grid::nearest(const Vec& x) const {
    std::int32_t id = 0;
    for (int i = 0; i < n_; ++i) {
        const int c = counts_[static_cast<std::size_t>(i)];
        const int k = std::clamp(static_cast<int>(std::lround((x(i) - lo_(i)) / spacing_(i))), 0, c - 1);
        id += k * strides_[static_cast<std::size_t>(i)];
    }
    return id;
}

bool Grid::cell_interior(std::int32_t base, const double* fractions) const {
    for (std::size_t c = 0; c < corner_offsets_.size(); ++c) {
        bool weighted = true;
        for (int i = 0; i < n_; ++i) {
            const bool upper = (c >> i) & 1U;
            if ((upper && fractions[i] == 0.0) || (!upper && fractions[i] == 1.0)) weighted = false;
        }
        if (weighted && !inside_[static_cast<std::size_t>(base + corner_offsets_[c])]) return false;
    }
    return true;
}

ArmEnd Grid::make_arm(const Vec& x, const Vec& dir, double s, double* fractions) {
    const double len = dir.norm();
    const double dt = 0.5 * spacing_.minCoeff() / len;
    ArmEnd end;
    auto to_boundary = [&](double t0, double t1) {
        const Vec a = x + t0 * dir;
        const Vec b = x + t1 * dir;
        const double u = domain_.crossing_parameter(a, b, 1e-12);
        end.s = t0 + u * (t1 - t0);
        end.base = -1;
        end.boundary = static_cast<std::int32_t>(boundary_points_.size());
        boundary_points_.push_back(a + u * (b - a));
    };
    double prev = 0.0;
    const int steps = std::max(1, static_cast<int>(std::ceil(s / dt)));
    for (int k = 1; k <= steps; ++k) {
        const double t = std::min(s, k * dt);
        if (!domain_.contains(x + t * dir)) {
            to_boundary(prev, t);
            return end;
        }
        prev = t;
    }
    const Vec p = x + s * dir;
    std::int32_t base = 0;
    bool in_lattice = true;
    for (int i = 0; i < n_; ++i) {
        double f = (p(i) - lo_(i)) / spacing_(i);
        const double r = std::round(f);
        if (std::abs(f - r) < 1e-9) f = r;  // endpoints on a lattice plane need no neighbour layer
        const int c = counts_[static_cast<std::size_t>(i)];
        int b = static_cast<int>(std::floor(f));
        if (b == c - 1 && f == r) b = c - 2;
        if (b < 0 || b > c - 2) in_lattice = false;
        b = std::clamp(b, 0, c - 2);
        fractions[i] = f - b;
        base += b * strides_[static_cast<std::size_t>(i)];
    }
    if (in_lattice && cell_interior(base, fractions)) {
        end.s = s;
        end.base = base;
        return end;
    }
    // The interpolation cell reaches outside: extend to the boundary crossing.
    const double t_max = 4.0 * domain_.bounding_box().diagonal() / len;
    prev = s;
    for (double t = s + dt; prev < t_max; t += dt) {
        if (!domain_.contains(x + t * dir)) {
            to_boundary(prev, t);
            return end;
        }
        prev = t;
    }
    throw DomainError("build_grid: stencil ray does not leave the domain");
}

std::size_t Grid::fully_boundary_nodes() const {
    std::size_t count = 0;
    const int dcount = dir_count();
    for (std::size_t k = 0; k < interior_.size(); ++k) {
        bool all = true;
        for (int d = 0; d < dcount && all; ++d) {
            for (int side = 0; side < 2; ++side) all = all && arm(k, d, side).boundary >= 0;
        }
        count += all ? 1 : 0;
    }
    return count;
}

std::size_t Grid::boundary_touching_nodes() const {
    std::size_t count = 0;
    const int dcount = dir_count();
    for (std::size_t k = 0; k < interior_.size(); ++k) {
        bool any = false;
        for (int d = 0; d < dcount && !any; ++d) {
            for (int side = 0; side < 2; ++side) any = any || arm(k, d, side).boundary >= 0;
        }
        count += any ? 1 : 0;
    }
    return count;
}

GridFunction::GridFunction(std::shared_ptr<const Grid> grid)
    : grid_(std::move(grid)),
      values_(grid_->lattice_size(), 0.0),
      boundary_values_(grid_->boundary_points().size(), 0.0) {}

void GridFunction::set_boundary(const ScalarField& g) {
    for (std::size_t id = 0; id < values_.size(); ++id) {
        if (!grid_->inside(static_cast<std::int32_t>(id))) {
            values_[id] = g(grid_->coordinates(static_cast<std::int32_t>(id)));
        }
    }
    const auto& pts = grid_->boundary_points();
    for (std::size_t b = 0; b < pts.size(); ++b) boundary_values_[b] = g(pts[b]);
}

void GridFunction::set_interior(const ScalarField& f) {
    for (std::int32_t id : grid_->interior()) values_[static_cast<std::size_t>(id)] = f(grid_->coordinates(id));
}

double GridFunction::arm_value(std::size_t k, int d, int side) const {
    const ArmEnd& a = grid_->arm(k, d, side);
    if (a.boundary >= 0) return boundary_values_[static_cast<std::size_t>(a.boundary)];
    const double* f = grid_->arm_fractions(k, d, side);
    const auto& offs = grid_->corner_offsets();
    const int n = grid_->n();
    double acc = 0.0;
    for (std::size_t c = 0; c < offs.size(); ++c) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) w *= (c >> i) & 1U ? f[i] : 1.0 - f[i];
        acc += w * values_[static_cast<std::size_t>(a.base + offs[c])];
    }
    return acc;
}

double GridFunction::interpolate(const Vec& x) const {
    const Grid& g = *grid_;
    const int n = g.n();
    std::int32_t base = 0;
    std::vector<double> f(static_cast<std::size_t>(n));
    std::vector<int> multi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int c = g.counts()[static_cast<std::size_t>(i)];
        const double t = std::clamp((x(i) - g.lower()(i)) / g.spacing()(i), 0.0, static_cast<double>(c - 1));
        const int b = std::clamp(static_cast<int>(std::floor(t)), 0, std::max(0, c - 2));
        f[static_cast<std::size_t>(i)] = t - b;
        multi[static_cast<std::size_t>(i)] = b;
    }
    base = g.id_of(multi);
    const auto& offs = g.corner_offsets();
    double acc = 0.0;
    for (std::size_t c = 0; c < offs.size(); ++c) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) w *= (c >> i) & 1U ? f[static_cast<std::size_t>(i)] : 1.0 - f[static_cast<std::size_t>(i)];
        if (w != 0.0) acc += w * values_[static_cast<std::size_t>(base + offs[c])];
    }
    return acc;
}

ScalarField GridFunction::as_function() const {
    auto self = std::make_shared<GridFunction>(*this);
    return [self](const Vec& x) { return self->interpolate(x); };
}

double GridFunction::max_error(const ScalarField& f) const {
    double err = 0.0;
    for (std::int32_t id : grid_->interior()) {
        err = std::max(err, std::abs(values_[static_cast<std::size_t>(id)] - f(grid_->coordinates(id))));
    }
    return err;
}

void write_grid_csv(std::ostream& out, const GridFunction& u) {
    const Grid& g = u.grid();
    for (int i = 0; i < g.n(); ++i) out << 'x' << (i + 1) << ',';
    out << "value\n";
    char buf[64];
    for (std::int32_t id : g.interior()) {
        const Vec x = g.coordinates(id);
        for (int i = 0; i < g.n(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,", x(i));
            out << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g\n", u.at(id));
        out << buf;
    }
}

void write_grid_csv(const std::string& path, const GridFunction& u) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open " + path + " for writing");
    write_grid_csv(out, u);
}

GridFunction read_grid_csv(std::istream& in, const GridFunction& like) {
    GridFunction u = like;
    const Grid& g = u.grid();
    std::string line;
    if (!std::getline(in, line)) throw InputError("grid csv: missing header");
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw InputError("grid csv: bad number on row " + std::to_string(row));
            vals.push_back(v);
        }
        if (static_cast<int>(vals.size()) != g.n() + 1) {
            throw InputError("grid csv: wrong column count on row " + std::to_string(row));
        }
        Vec x(g.n());
        for (int i = 0; i < g.n(); ++i) x(i) = vals[static_cast<std::size_t>(i)];
        const std::int32_t id = g.nearest(x);
        if ((g.coordinates(id) - x).cwiseAbs().maxCoeff() > 1e-9 * g.spacing().minCoeff() || !g.inside(id)) {
            throw InputError("grid csv: row " + std::to_string(row) + " is not an interior lattice node");
        }
        u.values()[static_cast<std::size_t>(id)] = vals.back();
    }
    return u;
}

GridFunction read_grid_csv(const std::string& path, const GridFunction& like) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return read_grid_csv(in, like);
}

}  // namespace carnot_ma
