#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsi/cube.hpp"
#include "hsi/dimred.hpp"

namespace hsi {

// Pure-material spectra, one column per endmember.
struct EndmemberSet {
    Matrix spectra;                 // l x p
    std::vector<std::string> names; // optional, size p when present

    std::size_t bands() const { return static_cast<std::size_t>(spectra.rows()); }
    std::size_t count() const { return static_cast<std::size_t>(spectra.cols()); }
};

enum class ConstraintMode { Unconstrained, SumToOne, Full };

// Fractional contributions, one column per pixel. Full mode satisfies the
// nonnegativity and sum-to-one constraints.
struct AbundanceMaps {
    Matrix coefficients; // p x n
    ConstraintMode constraint_mode = ConstraintMode::Unconstrained;
};

struct SpectralLibrary {
    struct Entry {
        std::string name;
        SpectralAxis axis;
        std::vector<double> values;
    };
    std::vector<Entry> entries;
};

// X = E A + seeded Gaussian noise (linear mixture model).
Matrix lmm_synthesize(const EndmemberSet& endmembers, const AbundanceMaps& abundances,
                      double noise_sigma, std::uint64_t seed);

// Unconstrained least squares, a_i = (E^T E)^-1 E^T x_i. Throws
// IllConditioned when cond(E^T E) exceeds 1e12.
AbundanceMaps ucls(const EndmemberSet& endmembers, const Matrix& pixels);

struct FclsReport {
    std::size_t stalled_pixels = 0; // active set hit its iteration cap; result projected
};

// Constrained least squares per pixel. SumToOne solves the
// equality-constrained problem in closed form; Full additionally enforces
// nonnegativity by clamping the most negative coefficient and re-solving on
// the remaining support (at most p^2 rounds per pixel).
AbundanceMaps fcls(const EndmemberSet& endmembers, const Matrix& pixels, ConstraintMode mode,
                   FclsReport* report = nullptr);

// Pixel purity index: count extremal hits over random unit projections.
// Returns pixel indices with count >= threshold, most-hit first.
std::vector<std::size_t> ppi(const Matrix& pixels, std::size_t n_skewers, std::uint64_t seed,
                             std::size_t threshold, std::vector<std::size_t>* counts = nullptr);

// Simplex-volume vertex search in PCA(p-1) space, seeded from vca plus 10
// random restarts. Returns original-space pixel spectra.
EndmemberSet nfindr(const Matrix& pixels, std::size_t p, std::uint64_t seed,
                    const LinearProjection* dimred = nullptr,
                    std::vector<double>* volume_trace = nullptr,
                    std::vector<std::size_t>* indices_out = nullptr);

// Vertex component analysis: repeatedly project onto a direction orthogonal
// to the span of the endmembers found so far and take the extreme pixel.
// The internal SNR estimate picks the projective or subspace embedding.
EndmemberSet vca(const Matrix& pixels, std::size_t p, std::uint64_t seed,
                 std::vector<std::size_t>* indices_out = nullptr);

enum class NmfInit { VCA, Random };

struct NmfResult {
    EndmemberSet endmembers;
    AbundanceMaps abundances; // Full mode
    std::vector<double> objective_trace;
    bool converged = false;
    std::string warning;
};

// Joint unmixing by multiplicative updates on the sum-to-one-augmented
// system (delta row weight 5). Input must be nonnegative; negative entries
// are clipped with a warning.
NmfResult nmf_unmix(const Matrix& pixels, std::size_t p, NmfInit init, std::uint64_t seed,
                    int max_iters, double tol, double delta = 5.0);

// Spectral angle in radians, scale-invariant. Throws ZeroVector.
double sad(const Vector& a, const Vector& b);

struct LibraryMatch {
    std::vector<std::pair<std::string, double>> ranking; // ascending score
    const std::pair<std::string, double>& best() const { return ranking.front(); }
};

enum class MatchMetric { SpectralAngle, Euclidean };

// Scores every library entry against each endmember after resampling the
// entries onto the query axis.
std::vector<LibraryMatch> library_match(const EndmemberSet& endmembers, const SpectralAxis& axis,
                                        const SpectralLibrary& library,
                                        MatchMetric metric = MatchMetric::SpectralAngle);

// Endmember recovery is permutation-invariant: returns the assignment of
// estimated columns to reference columns minimizing mean SAD (exhaustive for
// p <= 8, greedy beyond) plus the per-reference SADs under that assignment.
struct EndmemberAssignment {
    std::vector<std::size_t> estimated_for_reference; // index into estimate columns
    std::vector<double> sad_per_reference;
    double mean_sad = 0.0;
    double max_sad = 0.0;
};
EndmemberAssignment match_endmembers(const Matrix& reference, const Matrix& estimate);

} // namespace hsi
