#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "hsi/synth.hpp"
#include "test_util.hpp"

using namespace hsi;

TEST_CASE("a single endmember is a positive spectrum") {
    EndmemberSet e = generate_endmembers(20, 1, 3);
    CHECK(e.count() == 1);
    CHECK(e.spectra.minCoeff() > 0.0);
}

TEST_CASE("generated endmembers respect the value envelope and separation") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        EndmemberSet e = generate_endmembers(40, 5, seed);
        CHECK(e.spectra.minCoeff() > 0.0);
        CHECK(e.spectra.maxCoeff() < 1.2);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = i + 1; j < 5; ++j)
                CHECK(sad(e.spectra.col(static_cast<Eigen::Index>(i)),
                          e.spectra.col(static_cast<Eigen::Index>(j))) >= 0.15);
    }
}

TEST_CASE("the same seed reproduces the same endmembers") {
    EndmemberSet a = generate_endmembers(30, 4, 77);
    EndmemberSet b = generate_endmembers(30, 4, 77);
    CHECK((a.spectra - b.spectra).cwiseAbs().maxCoeff() == 0.0);
    EndmemberSet c = generate_endmembers(30, 4, 78);
    CHECK((a.spectra - c.spectra).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("pure-pixel abundance fields contain an exact one-hot per endmember") {
    SceneSpec spec;
    spec.height = 16;
    spec.width = 16;
    spec.bands = 20;
    spec.endmember_count = 4;
    spec.seed = 5;
    AbundanceMaps a = generate_abundances(spec);
    for (std::size_t i = 0; i < 4; ++i) {
        bool found = false;
        for (Eigen::Index j = 0; j < a.coefficients.cols() && !found; ++j)
            if (a.coefficients(static_cast<Eigen::Index>(i), j) == 1.0) found = true;
        CHECK_MESSAGE(found, "no pure pixel for endmember " << i);
    }
}

TEST_CASE("capped abundance fields respect the ceiling") {
    SceneSpec spec;
    spec.height = 16;
    spec.width = 16;
    spec.bands = 20;
    spec.endmember_count = 3;
    spec.seed = 6;
    spec.pure_pixels = false;
    spec.max_abundance = 0.8;
    AbundanceMaps a = generate_abundances(spec);
    CHECK(a.coefficients.maxCoeff() <= 0.8 + 1e-9);
    for (Eigen::Index j = 0; j < a.coefficients.cols(); ++j) {
        CHECK(a.coefficients.col(j).sum() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(a.coefficients.col(j).minCoeff() >= -1e-12);
    }
}

TEST_CASE("an infeasible cap is rejected") {
    SceneSpec spec;
    spec.endmember_count = 3;
    spec.pure_pixels = false;
    spec.max_abundance = 0.3; // 3 * 0.3 < 1
    CHECK_THROWS_AS((void)generate_abundances(spec), Error);
}

TEST_CASE("abundance columns always sum to one") {
    SceneSpec spec;
    spec.height = 12;
    spec.width = 12;
    spec.bands = 20;
    spec.endmember_count = 5;
    spec.seed = 9;
    AbundanceMaps a = generate_abundances(spec);
    for (Eigen::Index j = 0; j < a.coefficients.cols(); ++j)
        CHECK(a.coefficients.col(j).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("infinite snr leaves the cube clean") {
    SceneSpec spec;
    spec.height = 8;
    spec.width = 8;
    spec.bands = 12;
    spec.endmember_count = 3;
    spec.seed = 11;
    SceneResult scene = generate_scene(spec);
    CHECK(testutil::cubes_identical(scene.truth.clean_cube, scene.noisy_cube));
}

TEST_CASE("measured snr tracks the requested level") {
    SceneSpec spec;
    spec.height = 64;
    spec.width = 64;
    spec.bands = 50;
    spec.endmember_count = 4;
    spec.seed = 12;
    spec.snr_db = 25.0;
    SceneResult scene = generate_scene(spec);
    double p_signal = 0.0, p_noise = 0.0;
    for (std::size_t i = 0; i < scene.truth.clean_cube.values().size(); ++i) {
        const double s = scene.truth.clean_cube.values()[i];
        const double d = scene.noisy_cube.values()[i] - s;
        p_signal += s * s;
        p_noise += d * d;
    }
    const double measured = 10.0 * std::log10(p_signal / p_noise);
    CHECK(measured == doctest::Approx(25.0).epsilon(0.02)); // +-0.5 dB
}

TEST_CASE("fcls on the noiseless scene recovers the true abundances") {
    SceneSpec spec;
    spec.height = 16;
    spec.width = 16;
    spec.bands = 30;
    spec.endmember_count = 4;
    spec.seed = 13;
    SceneResult scene = generate_scene(spec);
    Matrix x = to_matrix(scene.truth.clean_cube);
    AbundanceMaps recovered = fcls(scene.truth.endmembers, x, ConstraintMode::Full);
    const double rmse = std::sqrt((recovered.coefficients -
                                   scene.truth.abundances.coefficients).squaredNorm() /
                                  static_cast<double>(recovered.coefficients.size()));
    CHECK(rmse < 1e-6);
}

TEST_CASE("ground truth is internally consistent") {
    SceneSpec spec;
    spec.height = 10;
    spec.width = 10;
    spec.bands = 15;
    spec.endmember_count = 3;
    spec.seed = 14;
    SceneResult scene = generate_scene(spec);
    Matrix rebuilt = scene.truth.endmembers.spectra * scene.truth.abundances.coefficients;
    Matrix stored = to_matrix(scene.truth.clean_cube);
    CHECK((rebuilt - stored).cwiseAbs().maxCoeff() == 0.0);

    // labels are the argmax of each abundance column
    for (Eigen::Index j = 0; j < stored.cols(); ++j) {
        Eigen::Index arg = 0;
        scene.truth.abundances.coefficients.col(j).maxCoeff(&arg);
        CHECK(scene.truth.labels.labels[static_cast<std::size_t>(j)] == static_cast<int>(arg) + 1);
    }
}

TEST_CASE("scene generation is fully deterministic") {
    SceneSpec spec;
    spec.height = 12;
    spec.width = 12;
    spec.bands = 18;
    spec.endmember_count = 3;
    spec.seed = 15;
    spec.snr_db = 20.0;
    SceneResult a = generate_scene(spec);
    SceneResult b = generate_scene(spec);
    CHECK(testutil::cubes_identical(a.noisy_cube, b.noisy_cube));
    CHECK(a.truth.labels.labels == b.truth.labels.labels);
    CHECK((a.truth.abundances.coefficients - b.truth.abundances.coefficients)
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("default scenes have roughly balanced classes") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        SceneSpec spec;
        spec.seed = seed;
        SceneResult scene = generate_scene(spec);
        std::map<int, std::size_t> counts;
        for (int label : scene.truth.labels.labels) counts[label]++;
        REQUIRE(counts.size() == spec.endmember_count);
        std::size_t lo = scene.truth.labels.labels.size(), hi = 0;
        for (const auto& [cls, count] : counts) {
            lo = std::min(lo, count);
            hi = std::max(hi, count);
        }
        CHECK_MESSAGE(hi <= 5 * lo, "imbalance at seed " << seed << ": " << lo << " vs " << hi);
    }
}

TEST_CASE("a pure pixel's spectrum is its generating endmember") {
    SceneSpec spec;
    spec.height = 16;
    spec.width = 16;
    spec.bands = 24;
    spec.endmember_count = 3;
    spec.seed = 21;
    SceneResult scene = generate_scene(spec);
    // locate the planted one-hot columns and compare cube spectra
    const Matrix& a = scene.truth.abundances.coefficients;
    int found = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (a(i, j) == 1.0) {
                const std::size_t r = static_cast<std::size_t>(j) / spec.width;
                const std::size_t c = static_cast<std::size_t>(j) % spec.width;
                auto spectrum = get_spectrum(scene.truth.clean_cube, r, c);
                for (std::size_t b = 0; b < spec.bands; ++b)
                    CHECK(spectrum[b] ==
                          scene.truth.endmembers.spectra(static_cast<Eigen::Index>(b), i));
                ++found;
            }
        }
    }
    CHECK(found >= 3);
}
