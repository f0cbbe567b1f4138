#pragma once

#include <functional>
#include <string>
#include <vector>

#include "invsrc/forward.hpp"
#include "invsrc/scene.hpp"

namespace invsrc {

// Uniform corner lattice over [x_lo, x_hi] x [y_lo, y_hi] with inclusive
// endpoints; nx, ny >= 2.
struct SamplingGrid {
    double x_lo, x_hi, y_lo, y_hi;
    int nx, ny;

    SamplingGrid(double x_lo, double x_hi, double y_lo, double y_hi, int nx, int ny);

    Point2 node(int ix, int iy) const {
        return {x_lo + ix * (x_hi - x_lo) / (nx - 1), y_lo + iy * (y_hi - y_lo) / (ny - 1)};
    }

    bool operator==(const SamplingGrid& o) const {
        return x_lo == o.x_lo && x_hi == o.x_hi && y_lo == o.y_lo && y_hi == o.y_hi &&
               nx == o.nx && ny == o.ny;
    }
};

// Raw (unnormalized) indicator values on a sampling grid.  Storage is
// row-major with the x index fastest: values()[iy * nx + ix] is the node
// (ix, iy), and iy = 0 is the y_lo row.  Values must be finite and >= 0.
class IndicatorField {
public:
    IndicatorField(SamplingGrid grid, std::string name);

    const SamplingGrid& grid() const { return grid_; }
    const std::string& name() const { return name_; }
    const std::vector<double>& values() const { return values_; }

    double value(int ix, int iy) const { return values_[std::size_t(iy) * grid_.nx + ix]; }
    void set(int ix, int iy, double v) { values_[std::size_t(iy) * grid_.nx + ix] = v; }

    double min() const;
    double max() const;
    // Grid node holding the largest value (first hit in storage order).
    Point2 argmax() const;

private:
    SamplingGrid grid_;
    std::string name_;
    std::vector<double> values_;
};

// Complete phased lattice (direction-major slices over the wavenumber grid)
// backing the phased-data indicator.  Built either from a dataset's truth or
// from retrieved records; construction validates full coverage.
class PhasedTable {
public:
    PhasedTable(WaveNumberGrid grid, std::vector<Direction> directions,
                std::vector<Complex> values);

    static PhasedTable from_truth(const Dataset& ds);
    // Infers the lattice from the records (directions in first-seen order,
    // wavenumbers must form a midpoint lattice); throws dataset_error on
    // duplicates or holes.
    static PhasedTable from_records(const std::vector<FarFieldRecord>& records);

    const WaveNumberGrid& grid() const { return grid_; }
    const std::vector<Direction>& directions() const { return directions_; }
    Complex value(std::size_t d, std::size_t j) const { return values_[d * grid_.count + j]; }

private:
    WaveNumberGrid grid_;
    std::vector<Direction> directions_;
    std::vector<Complex> values_;  // D * N
};

// Band-limited point evaluation of the source from one direction's phased
// slice: dk * sum_j slice[j] * e^{i k_j (d.unit() . z)}  (midpoint rule over
// the wavenumber band).
Complex g_functional(Point2 z, Direction d, const std::vector<Complex>& slice,
                     const WaveNumberGrid& grid);

// Cross-term extraction from one phaseless pair:
// m_with^2 - m_without^2 - |tau|^2.
double f_functional(double m_with, double m_without, Complex tau);

// Phaseless indicator: sum over directions of
// | dk * sum_j F(d, k_j) * cos(k_j * (d.unit() . (z - z0))) |.
// The dataset must carry exactly the tau set {0, tau1} with tau1 != 0.
class IndicatorI1 {
public:
    explicit IndicatorI1(const Dataset& ds);
    double operator()(Point2 z) const;

    Point2 z0() const { return z0_; }
    Complex tau1() const { return tau1_; }

private:
    const Dataset* ds_;
    std::size_t t_zero_, t_ref_;
    Point2 z0_;
    Complex tau1_;
    std::vector<double> f_values_;  // precomputed F per (direction, k)
};

// Phased indicator: sum over directions of |g_functional(z, d, slice_d)|.
class IndicatorI2 {
public:
    explicit IndicatorI2(PhasedTable table);
    double operator()(Point2 z) const;
    const PhasedTable& table() const { return table_; }

private:
    PhasedTable table_;
};

// Evaluates an indicator at every grid node.  The per-node sums always run
// direction-major with ascending wavenumber, so the result is independent of
// the thread count.
IndicatorField evaluate_on_grid(const std::function<double(Point2)>& indicator,
                                const SamplingGrid& grid, std::string name, int threads = 1);

// Pointwise minimum of min-max normalized fields (all on one grid); used to
// intersect indicator fields from several reference points.
IndicatorField combine_min_normalized(const std::vector<IndicatorField>& fields,
                                      std::string name);

}  // namespace invsrc
