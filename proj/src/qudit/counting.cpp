#include <cmath>
#include <cstdio>
#include <random>

#include "hdqfc/counting.hpp"
#include "hdqfc/errors.hpp"

namespace hdqfc::qudit {

void CollectionSpec::validate() const {
    if (model == CollectionModel::per_mode && !(decay >= 0.0))
        throw ValidationError("per-mode collection decay must be non-negative");
}

void CountingParams::validate() const {
    if (!(source_rate >= 0.0)) throw ValidationError("source rate must be non-negative");
    if (!(duration >= 0.0)) throw ValidationError("counting duration must be non-negative");
    if (!(dark_rate >= 0.0)) throw ValidationError("dark rate must be non-negative");
    collection.validate();
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, int basis, int index) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(basis));
    return splitmix64(h ^ (static_cast<std::uint64_t>(index) << 32));
}

double detection_probability(const DensityMatrix& rho, const Ket& analyzer, const CollectionSpec& collection) {
    switch (collection.model) {
        case CollectionModel::ideal:
            return projection_probability(rho, analyzer);
        case CollectionModel::projective:
            return projection_probability(rho, analyzer) / rho.dimension();
        case CollectionModel::per_mode: {
            const auto labels = oam_labels(rho.dimension());
            Eigen::VectorXd amp(rho.dimension());
            for (int i = 0; i < rho.dimension(); ++i) amp[i] = std::exp(-0.5 * collection.decay * std::abs(labels[i]));
            const Matrix filtered = amp.asDiagonal() * rho.matrix * amp.asDiagonal();
            return std::max(0.0, analyzer.dot(filtered * analyzer).real());
        }
    }
    return 0.0;
}

std::uint64_t draw_counts(double mean, std::uint64_t seed) {
    if (!(mean > 0.0)) return 0;
    std::mt19937_64 rng(seed);
    std::poisson_distribution<std::uint64_t> poisson(mean);
    return poisson(rng);
}

std::vector<double> expected_counts(const DensityMatrix& rho, const MUBCollection& mubs, const CountingParams& params) {
    params.validate();
    if (rho.dimension() != mubs.dimension) throw ValidationError("state and MUB dimensions differ");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(mubs.analyzer_count()));
    for (int j = 0; j < mubs.basis_count(); ++j)
        for (int m = 0; m < mubs.dimension; ++m)
            out.push_back(params.source_rate * params.duration *
                              detection_probability(rho, mubs.analyzer(j, m), params.collection) +
                          params.dark_rate * params.duration);
    return out;
}

std::vector<CountRecord> simulate_counts(const DensityMatrix& rho, const MUBCollection& mubs,
                                         const CountingParams& params) {
    const auto means = expected_counts(rho, mubs, params);
    std::vector<CountRecord> records(means.size());
    const int n = static_cast<int>(means.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const int j = i / mubs.dimension, m = i % mubs.dimension;
        const std::uint64_t s = derive_seed(params.seed, j, m);
        records[i] = {j, m, params.duration, draw_counts(means[i], s), params.source_rate, params.dark_rate, s};
    }
    return records;
}

std::vector<double> count_table(const std::vector<CountRecord>& records, bool subtract_dark) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        double c = static_cast<double>(r.counts);
        if (subtract_dark) c = std::max(0.0, c - r.dark_rate * r.duration);
        out.push_back(c);
    }
    return out;
}

void write_counts_csv(std::ostream& out, const std::vector<CountRecord>& records) {
    out << "j,m,duration_s,counts,dark_rate_hz,seed\n";
    char buf[160];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.9g,%llu,%.9g,%llu\n", r.basis, r.index, r.duration,
                      static_cast<unsigned long long>(r.counts), r.dark_rate, static_cast<unsigned long long>(r.seed));
        out << buf;
    }
}

}  // namespace hdqfc::qudit
