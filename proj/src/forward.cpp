#include "invsrc/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "invsrc/parallel.hpp"
#include "invsrc/quadrature.hpp"
#include "invsrc/rng.hpp"

namespace invsrc {

namespace {

// Angles identify lattice rows, so equal directions are detected on the
// value normalized into [0, 2*pi).
double normalized_angle(double a) {
    double r = std::fmod(a, 2.0 * M_PI);
    if (r < 0.0) r += 2.0 * M_PI;
    return r;
}

}  // namespace

WaveNumberGrid::WaveNumberGrid(double k_min_, double k_max_, int count_)
    : k_min(k_min_), k_max(k_max_), count(count_) {
    if (!(std::isfinite(k_min) && std::isfinite(k_max)))
        throw std::invalid_argument("wavenumber grid: bounds must be finite");
    if (!(k_min > 0.0)) throw std::invalid_argument("wavenumber grid: k_min must be positive");
    if (!(k_max > k_min)) throw std::invalid_argument("wavenumber grid: k_max must exceed k_min");
    if (count < 1) throw std::invalid_argument("wavenumber grid: count must be >= 1");
    if (node(0) < k_min - 1e-12)
        throw std::invalid_argument(
            "wavenumber grid: first midpoint node falls below k_min; increase k_min or shrink count");
}

std::vector<double> WaveNumberGrid::nodes() const {
    std::vector<double> out(count);
    for (int j = 0; j < count; ++j) out[j] = node(j);
    return out;
}

Dataset::Dataset(WaveNumberGrid grid, std::vector<Direction> directions, Point2 z0,
                 std::vector<Complex> taus)
    : grid_(grid), directions_(std::move(directions)), z0_(z0), taus_(std::move(taus)) {
    if (directions_.empty()) throw std::invalid_argument("dataset: needs at least one direction");
    if (taus_.empty()) throw std::invalid_argument("dataset: needs at least one tau");
    for (std::size_t i = 0; i < directions_.size(); ++i)
        for (std::size_t j = i + 1; j < directions_.size(); ++j)
            if (normalized_angle(directions_[i].angle) == normalized_angle(directions_[j].angle))
                throw std::invalid_argument("dataset: duplicate direction angle");
    for (std::size_t i = 0; i < taus_.size(); ++i)
        for (std::size_t j = i + 1; j < taus_.size(); ++j)
            if (taus_[i] == taus_[j]) throw std::invalid_argument("dataset: duplicate tau value");
    magnitudes_.assign(directions_.size() * std::size_t(grid_.count) * taus_.size(), 0.0);
}

PhaselessRecord Dataset::phaseless_record(std::size_t index) const {
    const std::size_t t = index % taus_.size();
    const std::size_t j = (index / taus_.size()) % std::size_t(grid_.count);
    const std::size_t d = index / (taus_.size() * std::size_t(grid_.count));
    return {directions_[d], grid_.node(int(j)), taus_[t], z0_, magnitudes_[index]};
}

std::vector<FarFieldRecord> Dataset::truth_records() const {
    std::vector<FarFieldRecord> out;
    out.reserve(truth_.size());
    for (std::size_t d = 0; d < directions_.size(); ++d)
        for (int j = 0; j < grid_.count; ++j)
            out.push_back({directions_[d], grid_.node(j), truth(d, j)});
    return out;
}

Complex far_field(const SourceModel& model, Direction d, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("far_field: k must be positive");
    Complex spatial{0.0, 0.0};
    for (const SourceComponent& c : model.components())
        spatial += shape_farfield_integral(c.shape, c.profile, d, k);
    return model.g().eval(0.0, 0.0, k) * spatial;
}

Complex far_field_with_ref(const SourceModel& model, const ReferenceSource& ref, Direction d,
                           double k) {
    require_outside_support(model, ref.z0);
    const Complex point = ref.tau * std::polar(1.0, -k * dot(d.unit(), ref.z0));
    return far_field(model, d, k) + point;
}

Dataset synthesize(const SourceModel& model, Point2 z0, const std::vector<Complex>& taus,
                   const std::vector<Direction>& directions, const WaveNumberGrid& grid,
                   int threads) {
    require_outside_support(model, z0);
    Dataset ds(grid, directions, z0, taus);
    ds.enable_truth();

    const std::size_t pairs = directions.size() * std::size_t(grid.count);
    std::vector<Complex> truth(pairs);
    parallel_for(pairs, threads, [&](std::size_t i) {
        const std::size_t d = i / std::size_t(grid.count);
        const int j = int(i % std::size_t(grid.count));
        truth[i] = far_field(model, directions[d], grid.node(j));
    });

    for (std::size_t d = 0; d < directions.size(); ++d) {
        const Point2 u = directions[d].unit();
        for (int j = 0; j < grid.count; ++j) {
            const Complex us = truth[d * std::size_t(grid.count) + j];
            ds.set_truth(d, j, us);
            const Complex phase = std::polar(1.0, -grid.node(j) * dot(u, z0));
            for (std::size_t t = 0; t < taus.size(); ++t)
                ds.set_magnitude(d, j, t, std::abs(us + taus[t] * phase));
        }
    }
    return ds;
}

Dataset apply_relative_noise(const Dataset& ds, double level, uint64_t seed) {
    if (level < 0.0) throw std::invalid_argument("noise: level must be >= 0");
    Dataset out = ds;
    for (std::size_t i = 0; i < out.phaseless_count(); ++i) {
        const PhaselessRecord rec = out.phaseless_record(i);
        const double e = uniform_pm1(seed, i);
        const std::size_t t = i % out.tau_count();
        const std::size_t j = (i / out.tau_count()) % std::size_t(out.grid().count);
        const std::size_t d = i / (out.tau_count() * std::size_t(out.grid().count));
        out.set_magnitude(d, j, t, rec.magnitude * (1.0 + level * e));
    }
    out.set_noise({NoiseSpec::Kind::Relative, level, seed});
    return out;
}

Dataset apply_absolute_noise(const Dataset& ds, double level, uint64_t seed) {
    if (level < 0.0) throw std::invalid_argument("noise: level must be >= 0");
    Dataset out = ds;
    for (std::size_t i = 0; i < out.phaseless_count(); ++i) {
        const PhaselessRecord rec = out.phaseless_record(i);
        const double e = uniform_pm1(seed, i);
        const std::size_t t = i % out.tau_count();
        const std::size_t j = (i / out.tau_count()) % std::size_t(out.grid().count);
        const std::size_t d = i / (out.tau_count() * std::size_t(out.grid().count));
        out.set_magnitude(d, j, t, std::max(0.0, rec.magnitude + level * e));
    }
    out.set_noise({NoiseSpec::Kind::Absolute, level, seed});
    return out;
}

}  // namespace invsrc
