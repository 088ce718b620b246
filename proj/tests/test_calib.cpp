#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hsi/calib.hpp"
#include "hsi/rng.hpp"
#include "test_util.hpp"

using namespace hsi;

namespace {

HyperCube constant_cube(std::size_t h, std::size_t w, std::size_t l, double value) {
    HyperCube cube(h, w, l, Quantity::DigitalNumber);
    for (auto& v : cube.values()) v = value;
    return cube;
}

} // namespace

TEST_CASE("white frame calibrates to 1 and dark frame to 0") {
    auto panels = ReferencePanels::from_vectors({100.0, 50.0, 10.0}, {1100.0, 950.0, 800.0});
    HyperCube white(4, 4, 3, Quantity::DigitalNumber);
    HyperCube dark(4, 4, 3, Quantity::DigitalNumber);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            for (std::size_t b = 0; b < 3; ++b) {
                white.at(r, c, b) = panels.white[b];
                dark.at(r, c, b) = panels.dark[b];
            }
    HyperCube rw = calibrate_reflectance(white, panels);
    HyperCube rd = calibrate_reflectance(dark, panels);
    for (double v : rw.values()) CHECK(v == 1.0);
    for (double v : rd.values()) CHECK(v == 0.0);
    CHECK(rw.quantity() == Quantity::Reflectance);
}

TEST_CASE("midpoint digital number lands at the midpoint reflectance") {
    auto panels = ReferencePanels::from_vectors({100.0}, {1100.0});
    HyperCube dn = constant_cube(2, 2, 1, 600.0);
    HyperCube r = calibrate_reflectance(dn, panels);
    for (double v : r.values()) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("certified panel reflectance scales the output") {
    auto panels = ReferencePanels::from_vectors({0.0}, {1000.0}, 0.95);
    HyperCube dn = constant_cube(1, 1, 1, 1000.0);
    CHECK(calibrate_reflectance(dn, panels).at(0, 0, 0) == doctest::Approx(0.95));
}

TEST_CASE("values clip into the reflectance envelope") {
    auto panels = ReferencePanels::from_vectors({0.0}, {100.0});
    HyperCube hot = constant_cube(1, 1, 1, 500.0); // 5.0 before clipping
    CHECK(calibrate_reflectance(hot, panels).at(0, 0, 0) == 1.05);
    HyperCube cold = constant_cube(1, 1, 1, -50.0);
    CHECK(calibrate_reflectance(cold, panels).at(0, 0, 0) == 0.0);
}

TEST_CASE("dead bands zero-fill and land in the metadata") {
    auto panels = ReferencePanels::from_vectors({100.0, 200.0}, {1100.0, 150.0});
    HyperCube dn = constant_cube(2, 2, 2, 600.0);
    HyperCube r = calibrate_reflectance(dn, panels);
    CHECK(r.at(0, 0, 0) == doctest::Approx(0.5));
    CHECK(r.at(0, 0, 1) == 0.0);
    const std::string* dead = r.metadata().find_extra("dead_bands");
    REQUIRE(dead != nullptr);
    CHECK(*dead == "{1}");
}

TEST_CASE("band count mismatch and all-dead panels are errors") {
    auto panels = ReferencePanels::from_vectors({0.0, 0.0}, {100.0, 100.0});
    HyperCube dn = constant_cube(1, 1, 3, 1.0);
    CHECK_THROWS_AS((void)calibrate_reflectance(dn, panels), Error);

    auto all_dead = ReferencePanels::from_vectors({10.0}, {5.0});
    HyperCube one = constant_cube(1, 1, 1, 1.0);
    try {
        (void)calibrate_reflectance(one, all_dead);
        FAIL("expected AllBandsDead");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AllBandsDead);
    }
}

TEST_CASE("calibration is monotone in the digital numbers before clipping") {
    Rng rng(321);
    auto panels = ReferencePanels::from_vectors({50.0, 80.0, 20.0}, {900.0, 700.0, 950.0});
    for (int trial = 0; trial < 100; ++trial) {
        HyperCube lo(3, 3, 3, Quantity::DigitalNumber);
        HyperCube hi(3, 3, 3, Quantity::DigitalNumber);
        for (std::size_t i = 0; i < lo.values().size(); ++i) {
            lo.values()[i] = rng.uniform(60.0, 800.0);
            hi.values()[i] = lo.values()[i] + rng.uniform(0.0, 50.0);
        }
        HyperCube rlo = calibrate_reflectance(lo, panels);
        HyperCube rhi = calibrate_reflectance(hi, panels);
        for (std::size_t i = 0; i < rlo.values().size(); ++i)
            CHECK(rhi.values()[i] >= rlo.values()[i]);
    }
}

TEST_CASE("panel reduction averages the panel cubes spatially") {
    HyperCube dark(2, 2, 1, Quantity::DigitalNumber);
    HyperCube white(2, 2, 1, Quantity::DigitalNumber);
    double dvals[] = {90.0, 110.0, 100.0, 100.0}; // mean 100
    double wvals[] = {1000.0, 1200.0, 1100.0, 1100.0}; // mean 1100
    for (int i = 0; i < 4; ++i) {
        dark.values()[static_cast<std::size_t>(i)] = dvals[i];
        white.values()[static_cast<std::size_t>(i)] = wvals[i];
    }
    auto panels = ReferencePanels::from_cubes(dark, white);
    CHECK(panels.dark[0] == doctest::Approx(100.0));
    CHECK(panels.white[0] == doctest::Approx(1100.0));
}

TEST_CASE("resampling onto the source axis is the identity") {
    HyperCube cube = testutil::random_cube(3, 3, 6, 5, 77);
    HyperCube out = resample_wavelengths(cube, cube.axis());
    CHECK(testutil::cubes_identical(cube, out));
}

TEST_CASE("two-band midpoint interpolates linearly") {
    SpectralAxis axis;
    axis.wavelengths = {400.0, 500.0};
    HyperCube cube(1, 1, 2, Quantity::Reflectance, axis);
    cube.at(0, 0, 0) = 0.0;
    cube.at(0, 0, 1) = 1.0;
    SpectralAxis target;
    target.wavelengths = {450.0};
    HyperCube out = resample_wavelengths(cube, target);
    CHECK(out.bands() == 1);
    CHECK(out.at(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("dense regrid and return reproduces the original nodes") {
    Rng rng(5);
    SpectralAxis src;
    for (int i = 0; i < 12; ++i) src.wavelengths.push_back(400.0 + 25.0 * i);
    HyperCube cube(2, 2, 12, Quantity::Reflectance, src);
    for (auto& v : cube.values()) v = rng.uniform();

    // 2x dense grid containing every original node
    SpectralAxis dense;
    for (int i = 0; i < 23; ++i) dense.wavelengths.push_back(400.0 + 12.5 * i);
    HyperCube up = resample_wavelengths(cube, dense);
    HyperCube back = resample_wavelengths(up, src);
    for (std::size_t i = 0; i < cube.values().size(); ++i)
        CHECK(std::abs(cube.values()[i] - back.values()[i]) < 1e-12);
}

TEST_CASE("constant spectra are preserved exactly by resampling") {
    SpectralAxis src;
    src.wavelengths = {400.0, 470.0, 610.0, 800.0};
    HyperCube cube(1, 1, 4, Quantity::Reflectance, src);
    for (auto& v : cube.values()) v = 0.25;
    SpectralAxis target;
    target.wavelengths = {405.0, 500.0, 799.0};
    HyperCube out = resample_wavelengths(cube, target);
    for (double v : out.values()) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("extrapolation is refused") {
    SpectralAxis src;
    src.wavelengths = {400.0, 500.0};
    HyperCube cube(1, 1, 2, Quantity::Reflectance, src);
    SpectralAxis target;
    target.wavelengths = {350.0};
    try {
        (void)resample_wavelengths(cube, target);
        FAIL("expected ExtrapolationRequested");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ExtrapolationRequested);
    }
}
