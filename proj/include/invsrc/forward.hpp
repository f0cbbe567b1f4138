#pragma once

#include <cstdint>
#include <vector>

#include "invsrc/scene.hpp"

namespace invsrc {

// Midpoint wavenumber lattice: count nodes k_j = (j + 0.5) * dk for
// j = 0..count-1 with dk = k_max / count.  All nodes lie strictly inside
// (0, k_max); the first node must not fall below k_min (within 1e-12),
// otherwise construction throws.
struct WaveNumberGrid {
    double k_min;
    double k_max;
    int count;

    WaveNumberGrid(double k_min, double k_max, int count);

    double delta_k() const { return k_max / count; }
    double node(int j) const { return (j + 0.5) * delta_k(); }
    std::vector<double> nodes() const;

    bool operator==(const WaveNumberGrid& o) const {
        return k_min == o.k_min && k_max == o.k_max && count == o.count;
    }
};

struct FarFieldRecord {
    Direction direction;
    double k;
    Complex value;
};

struct PhaselessRecord {
    Direction direction;
    double k;
    Complex tau;
    Point2 z0;
    double magnitude;
};

struct NoiseSpec {
    enum class Kind { None, Relative, Absolute };
    Kind kind = Kind::None;
    double level = 0.0;
    uint64_t seed = 0;
};

// Full measurement lattice (direction-major, then wavenumber, then tau) of
// phaseless magnitudes, optionally with the phased truth per (direction, k).
// Directions and tau values must be non-empty and duplicate-free.
class Dataset {
public:
    Dataset(WaveNumberGrid grid, std::vector<Direction> directions, Point2 z0,
            std::vector<Complex> taus);

    const WaveNumberGrid& grid() const { return grid_; }
    const std::vector<Direction>& directions() const { return directions_; }
    Point2 z0() const { return z0_; }
    const std::vector<Complex>& taus() const { return taus_; }
    const NoiseSpec& noise() const { return noise_; }

    std::size_t direction_count() const { return directions_.size(); }
    std::size_t tau_count() const { return taus_.size(); }
    std::size_t phaseless_count() const { return magnitudes_.size(); }

    std::size_t lattice_index(std::size_t d, std::size_t j, std::size_t t) const {
        return (d * grid_.count + j) * taus_.size() + t;
    }

    double magnitude(std::size_t d, std::size_t j, std::size_t t) const {
        return magnitudes_[lattice_index(d, j, t)];
    }
    void set_magnitude(std::size_t d, std::size_t j, std::size_t t, double m) {
        magnitudes_[lattice_index(d, j, t)] = m;
    }

    bool has_truth() const { return !truth_.empty(); }
    Complex truth(std::size_t d, std::size_t j) const { return truth_[d * grid_.count + j]; }
    void set_truth(std::size_t d, std::size_t j, Complex v) { truth_[d * grid_.count + j] = v; }
    void enable_truth() { truth_.assign(directions_.size() * grid_.count, Complex{}); }
    void drop_truth() { truth_.clear(); }

    PhaselessRecord phaseless_record(std::size_t index) const;
    std::vector<FarFieldRecord> truth_records() const;

    void set_noise(NoiseSpec n) { noise_ = n; }

private:
    WaveNumberGrid grid_;
    std::vector<Direction> directions_;
    Point2 z0_;
    std::vector<Complex> taus_;
    std::vector<Complex> truth_;      // size D*N when present
    std::vector<double> magnitudes_;  // size D*N*T
    NoiseSpec noise_;
};

// Far field of the source alone at observation direction d and wavenumber
// k > 0: g(k) * \int_D e^{-i k (d.unit() . y)} f(y) dy summed over
// components.  Quadrature accuracy per quadrature.hpp.
Complex far_field(const SourceModel& model, Direction d, double k);

// Far field with the reference point source added:
// far_field(...) + tau * e^{-i k (d.unit() . z0)}.  Throws if z0 touches the
// support.
Complex far_field_with_ref(const SourceModel& model, const ReferenceSource& ref, Direction d,
                           double k);

// Synthesizes the full lattice: phased truth for every (direction, k) plus
// the phaseless magnitude |far_field + tau e^{-ik x.z0}| for every
// (direction, k, tau).  `threads` > 1 parallelizes over (direction, k); the
// result does not depend on the thread count.
Dataset synthesize(const SourceModel& model, Point2 z0, const std::vector<Complex>& taus,
                   const std::vector<Direction>& directions, const WaveNumberGrid& grid,
                   int threads = 1);

// m -> m * (1 + level * e) with e drawn from U(-1,1) keyed by
// (seed, lattice index).  level = 0 returns magnitudes bit-identical.
Dataset apply_relative_noise(const Dataset& ds, double level, uint64_t seed);

// m -> max(0, m + level * e), same keying.
Dataset apply_absolute_noise(const Dataset& ds, double level, uint64_t seed);

}  // namespace invsrc
