#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "hdqfc/mub.hpp"
#include "hdqfc/qudit.hpp"

namespace hdqfc::qudit {

enum class CollectionModel {
    ideal,       // every photon is collected
    projective,  // 1/d of the photons reach the detector
    per_mode,    // mode L is collected with exp(-decay |L|)
};

struct CollectionSpec {
    CollectionModel model = CollectionModel::ideal;
    double decay = 0.35;  // per_mode only

    void validate() const;
};

struct CountingParams {
    double source_rate = 1.0;  // Hz, coincidences per unit projection probability
    double duration = 1.0;     // s
    double dark_rate = 0.0;    // Hz, per analyzer
    CollectionSpec collection;
    std::uint64_t seed = 0;

    void validate() const;
};

struct CountRecord {
    int basis = 0;
    int index = 0;
    double duration = 0.0;
    std::uint64_t counts = 0;
    double source_rate = 0.0;
    double dark_rate = 0.0;
    std::uint64_t seed = 0;  // derived per analyzer
};

/// Seed of analyzer (j, m) derived from the run seed, independent of the
/// evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, int basis, int index);

/// Detection probability of an analyzer including the collection model.
double detection_probability(const DensityMatrix& rho, const Ket& analyzer, const CollectionSpec& collection);

/// Poisson draw with mean source_rate * duration * p + dark_rate * duration.
std::uint64_t draw_counts(double mean, std::uint64_t seed);

/// One record per analyzer, ordered (j, m).
std::vector<CountRecord> simulate_counts(const DensityMatrix& rho, const MUBCollection& mubs,
                                         const CountingParams& params);

/// Expected counts (no sampling), same order and units as simulate_counts.
std::vector<double> expected_counts(const DensityMatrix& rho, const MUBCollection& mubs, const CountingParams& params);

/// Counts as doubles in (j, m) order. With subtract_dark the expected dark
/// contribution is removed and the result clipped at zero.
std::vector<double> count_table(const std::vector<CountRecord>& records, bool subtract_dark = false);

/// CSV with columns j, m, duration_s, counts, dark_rate_hz, seed.
void write_counts_csv(std::ostream& out, const std::vector<CountRecord>& records);

}  // namespace hdqfc::qudit
