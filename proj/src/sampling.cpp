#include "invsrc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "invsrc/errors.hpp"
#include "invsrc/parallel.hpp"

namespace invsrc {

SamplingGrid::SamplingGrid(double x_lo_, double x_hi_, double y_lo_, double y_hi_, int nx_,
                           int ny_)
    : x_lo(x_lo_), x_hi(x_hi_), y_lo(y_lo_), y_hi(y_hi_), nx(nx_), ny(ny_) {
    if (!(std::isfinite(x_lo) && std::isfinite(x_hi) && std::isfinite(y_lo) && std::isfinite(y_hi)))
        throw std::invalid_argument("sampling grid: bounds must be finite");
    if (!(x_lo < x_hi && y_lo < y_hi))
        throw std::invalid_argument("sampling grid: lo bounds must be below hi bounds");
    if (nx < 2 || ny < 2) throw std::invalid_argument("sampling grid: nx and ny must be >= 2");
}

IndicatorField::IndicatorField(SamplingGrid grid, std::string name)
    : grid_(grid), name_(std::move(name)), values_(std::size_t(grid.nx) * grid.ny, 0.0) {}

double IndicatorField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double IndicatorField::max() const { return *std::max_element(values_.begin(), values_.end()); }

Point2 IndicatorField::argmax() const {
    const std::size_t best = std::max_element(values_.begin(), values_.end()) - values_.begin();
    const int iy = int(best / grid_.nx);
    const int ix = int(best % grid_.nx);
    return grid_.node(ix, iy);
}

PhasedTable::PhasedTable(WaveNumberGrid grid, std::vector<Direction> directions,
                         std::vector<Complex> values)
    : grid_(grid), directions_(std::move(directions)), values_(std::move(values)) {
    if (directions_.empty()) throw dataset_error("phased table: needs at least one direction");
    if (values_.size() != directions_.size() * std::size_t(grid_.count))
        throw dataset_error("phased table: value count does not match the lattice");
}

PhasedTable PhasedTable::from_truth(const Dataset& ds) {
    if (!ds.has_truth()) throw dataset_error("phased table: dataset carries no phased truth");
    std::vector<Complex> values(ds.direction_count() * std::size_t(ds.grid().count));
    for (std::size_t d = 0; d < ds.direction_count(); ++d)
        for (int j = 0; j < ds.grid().count; ++j)
            values[d * std::size_t(ds.grid().count) + j] = ds.truth(d, j);
    return PhasedTable(ds.grid(), ds.directions(), std::move(values));
}

PhasedTable PhasedTable::from_records(const std::vector<FarFieldRecord>& records) {
    if (records.empty()) throw dataset_error("phased table: no records");

    std::vector<double> angles;
    std::vector<double> ks;
    for (const FarFieldRecord& r : records) {
        if (std::find(angles.begin(), angles.end(), r.direction.angle) == angles.end())
            angles.push_back(r.direction.angle);
        if (std::find(ks.begin(), ks.end(), r.k) == ks.end()) ks.push_back(r.k);
    }
    std::sort(ks.begin(), ks.end());

    // The wavenumbers must form the midpoint lattice (j + 0.5) * dk.
    const double dk = 2.0 * ks.front();
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const double expected = (j + 0.5) * dk;
        if (std::abs(ks[j] - expected) > 1e-9 * std::max(1.0, expected))
            throw dataset_error("phased table: wavenumbers do not form a midpoint lattice");
    }
    const WaveNumberGrid grid(ks.front(), dk * ks.size(), int(ks.size()));

    std::vector<Direction> directions;
    directions.reserve(angles.size());
    for (double a : angles) directions.push_back({a});

    std::vector<Complex> values(angles.size() * ks.size());
    std::vector<bool> seen(values.size(), false);
    for (const FarFieldRecord& r : records) {
        const std::size_t d =
            std::find(angles.begin(), angles.end(), r.direction.angle) - angles.begin();
        const std::size_t j = std::find(ks.begin(), ks.end(), r.k) - ks.begin();
        const std::size_t idx = d * ks.size() + j;
        if (seen[idx]) throw dataset_error("phased table: duplicate (direction, k) record");
        seen[idx] = true;
        values[idx] = r.value;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw dataset_error("phased table: lattice has missing (direction, k) records");
    return PhasedTable(grid, std::move(directions), std::move(values));
}

Complex g_functional(Point2 z, Direction d, const std::vector<Complex>& slice,
                     const WaveNumberGrid& grid) {
    if (slice.size() != std::size_t(grid.count))
        throw dataset_error("g_functional: slice length does not match the wavenumber grid");
    const double t = dot(d.unit(), z);
    Complex sum{0.0, 0.0};
    for (int j = 0; j < grid.count; ++j) sum += slice[j] * std::polar(1.0, grid.node(j) * t);
    return grid.delta_k() * sum;
}

double f_functional(double m_with, double m_without, Complex tau) {
    return m_with * m_with - m_without * m_without - std::norm(tau);
}

IndicatorI1::IndicatorI1(const Dataset& ds) : ds_(&ds) {
    if (ds.tau_count() != 2)
        throw dataset_error("phaseless indicator: dataset must carry exactly the tau set {0, tau1}");
    const Complex zero{0.0, 0.0};
    if (ds.taus()[0] == zero) {
        t_zero_ = 0;
        t_ref_ = 1;
    } else if (ds.taus()[1] == zero) {
        t_zero_ = 1;
        t_ref_ = 0;
    } else {
        throw dataset_error("phaseless indicator: tau set must contain 0");
    }
    tau1_ = ds.taus()[t_ref_];
    if (tau1_ == zero) throw dataset_error("phaseless indicator: reference tau must be nonzero");
    z0_ = ds.z0();

    f_values_.resize(ds.direction_count() * std::size_t(ds.grid().count));
    for (std::size_t d = 0; d < ds.direction_count(); ++d)
        for (int j = 0; j < ds.grid().count; ++j)
            f_values_[d * std::size_t(ds.grid().count) + j] =
                f_functional(ds.magnitude(d, j, t_ref_), ds.magnitude(d, j, t_zero_), tau1_);
}

double IndicatorI1::operator()(Point2 z) const {
    const WaveNumberGrid& grid = ds_->grid();
    const Point2 offset = z - z0_;
    double total = 0.0;
    for (std::size_t d = 0; d < ds_->direction_count(); ++d) {
        const double t = dot(ds_->directions()[d].unit(), offset);
        double inner = 0.0;
        const double* fv = f_values_.data() + d * std::size_t(grid.count);
        for (int j = 0; j < grid.count; ++j) inner += fv[j] * std::cos(grid.node(j) * t);
        total += std::abs(grid.delta_k() * inner);
    }
    return total;
}

IndicatorI2::IndicatorI2(PhasedTable table) : table_(std::move(table)) {}

double IndicatorI2::operator()(Point2 z) const {
    const WaveNumberGrid& grid = table_.grid();
    double total = 0.0;
    for (std::size_t d = 0; d < table_.directions().size(); ++d) {
        const double t = dot(table_.directions()[d].unit(), z);
        Complex sum{0.0, 0.0};
        for (int j = 0; j < grid.count; ++j)
            sum += table_.value(d, j) * std::polar(1.0, grid.node(j) * t);
        total += std::abs(grid.delta_k() * sum);
    }
    return total;
}

IndicatorField evaluate_on_grid(const std::function<double(Point2)>& indicator,
                                const SamplingGrid& grid, std::string name, int threads) {
    IndicatorField field(grid, std::move(name));
    const std::size_t n = std::size_t(grid.nx) * grid.ny;
    std::vector<double> values(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const int iy = int(i / grid.nx);
        const int ix = int(i % grid.nx);
        values[i] = indicator(grid.node(ix, iy));
    });
    for (std::size_t i = 0; i < n; ++i) {
        const double v = values[i];
        if (!std::isfinite(v) || v < 0.0)
            throw std::runtime_error("indicator field: non-finite or negative value");
        field.set(int(i % grid.nx), int(i / grid.nx), v);
    }
    return field;
}

IndicatorField combine_min_normalized(const std::vector<IndicatorField>& fields,
                                      std::string name) {
    if (fields.empty()) throw std::invalid_argument("combine: needs at least one field");
    for (const IndicatorField& f : fields)
        if (!(f.grid() == fields.front().grid()))
            throw std::invalid_argument("combine: fields must share one grid");

    std::vector<std::pair<double, double>> ranges;
    ranges.reserve(fields.size());
    for (const IndicatorField& f : fields) ranges.emplace_back(f.min(), f.max());

    IndicatorField out(fields.front().grid(), std::move(name));
    const std::size_t n = fields.front().values().size();
    for (std::size_t i = 0; i < n; ++i) {
        double best = 1.0;
        for (std::size_t fi = 0; fi < fields.size(); ++fi) {
            const auto [lo, hi] = ranges[fi];
            const double norm = hi > lo ? (fields[fi].values()[i] - lo) / (hi - lo) : 0.0;
            best = std::min(best, norm);
        }
        out.set(int(i % out.grid().nx), int(i / out.grid().nx), best);
    }
    return out;
}

}  // namespace invsrc
