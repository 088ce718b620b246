#pragma once

#include <string>
#include <vector>

#include "hsi/cube.hpp"

namespace hsi {

enum class ProjectionKind { PCA, MNF };
enum class BandCriterion { MaxEntropy, MinCorrelation };

// Fitted linear transform. For PCA the basis is orthonormal and is its own
// inverse map; MNF whitens first, so the forward and inverse maps differ
// and both are stored.
struct LinearProjection {
    Vector mean;   // l
    Matrix basis;  // l x k, z = basis^T (x - mean)
    Matrix inverse; // l x k, x_hat = inverse z + mean
    Vector scores; // eigenvalues (PCA) or SNRs (MNF), descending
    ProjectionKind kind = ProjectionKind::PCA;

    std::size_t input_dim() const { return static_cast<std::size_t>(basis.rows()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(basis.cols()); }

    std::string to_json() const;
    static LinearProjection from_json(const std::string& text);
};

struct BandSubset {
    std::vector<std::size_t> indices; // unique, sorted
    BandCriterion criterion = BandCriterion::MinCorrelation;
    double score = 0.0; // achieved objective
};

// Eigendecomposition of the sample covariance (1/n convention). Eigenvector
// signs are fixed so the largest-magnitude entry of each column is positive.
// n < 2 throws DegenerateInput; rank deficiency is fine.
LinearProjection pca_fit(const Matrix& data, std::size_t k);

Matrix project(const LinearProjection& proj, const Matrix& data);
Matrix reconstruct(const LinearProjection& proj, const Matrix& scores);

// Horizontal shift-difference estimator: d(r,c) = x(r,c) - x(r,c+1),
// noise covariance = cov(d) / 2, symmetrized.
Matrix estimate_noise_covariance(const HyperCube& cube);

// Noise-whitened PCA ordered by descending SNR. noise_cov is regularized by
// eps I with eps = 1e-10 trace / l; zero trace throws SingularNoise.
LinearProjection mnf_fit(const Matrix& data, const Matrix& noise_cov, std::size_t k);

// Selects k bands. MinCorrelation minimizes the max pairwise |correlation|
// (exhaustive when the subset count is small, seeded greedy with swap
// refinement beyond that); MaxEntropy greedily maximizes per-band histogram
// entropy penalized by mean |correlation| to the bands already chosen.
// Ties always break toward lower indices.
BandSubset select_bands(const Matrix& data, std::size_t k, BandCriterion criterion);
BandSubset select_bands(const HyperCube& cube, std::size_t k, BandCriterion criterion);

// Shannon entropy of a 64-bin histogram over [min, max]; constant data -> 0.
double band_entropy(const Vector& band);

// Pearson correlation matrix between rows; zero-variance rows correlate 0.
Matrix band_correlation(const Matrix& data);

} // namespace hsi
