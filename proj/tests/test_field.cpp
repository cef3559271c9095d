#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "hydrolim/field.hpp"
#include "hydrolim/snapshot.hpp"

using namespace hydrolim;

namespace {

NodalField sample(const GridPtr& g, const std::function<double(double, double)>& f) {
    NodalField out(g);
    for (int m = 0; m < g->nx(); ++m)
        for (int j = 0; j < g->ny(); ++j) out.at(m, j) = f(g->x()[m], g->y()[j]);
    return out;
}

NodalField random_nodal(const GridPtr& g, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NodalField out(g);
    for (auto& v : out.v) v = u(rng);
    return out;
}

}  // namespace

TEST_CASE("transform convention: cos x puts 1/2 at k = +-1") {
    GridPtr g = make_grid(16, 9);
    SpectralField f = transform_x(g, sample(g, [](double x, double) { return std::cos(x); }));
    for (int ki = 0; ki < g->nx(); ++ki) {
        const int k = g->wavenumber(ki);
        const double expect = (std::abs(k) == 1) ? 0.5 : 0.0;
        for (int j = 0; j < g->ny(); ++j) CHECK(std::abs(f.at(ki, j) - expect) < 1e-14);
    }
}

TEST_CASE("transform convention: constants live at k = 0") {
    GridPtr g = make_grid(8, 9);
    SpectralField f = transform_x(g, sample(g, [](double, double) { return 1.0; }));
    for (int ki = 0; ki < g->nx(); ++ki) {
        const double expect = (g->wavenumber(ki) == 0) ? 1.0 : 0.0;
        CHECK(std::abs(f.at(ki, 0) - expect) < 1e-14);
    }
}

TEST_CASE("round trip reproduces random real fields to 1e-13") {
    GridPtr g = make_grid(32, 17);
    NodalField f = random_nodal(g, 7);
    NodalField back = inverse_transform_x(transform_x(g, f));
    double scale = f.max_abs();
    for (size_t i = 0; i < f.v.size(); ++i) CHECK(std::abs(back.v[i] - f.v[i]) <= 1e-13 * scale);
    CHECK(reality_defect(transform_x(g, f)) < 1e-13);
}

TEST_CASE("ddx is multiplication by ik and kills constants") {
    GridPtr g = make_grid(16, 9);
    SpectralField e1 = transform_x(g, sample(g, [](double x, double) { return std::cos(x); }));
    SpectralField d = ddx(e1);  // cos x -> -sin x
    SpectralField expect = transform_x(g, sample(g, [](double x, double) { return -std::sin(x); }));
    CHECK((d - expect).max_abs() < 1e-13);

    SpectralField c = transform_x(g, sample(g, [](double, double) { return 3.0; }));
    CHECK(ddx(c).max_abs() < 1e-13);

    SpectralField s3 = transform_x(g, sample(g, [](double x, double) { return std::sin(3.0 * x); }));
    NodalField d3 = inverse_transform_x(ddx(s3));
    NodalField want = sample(g, [](double x, double) { return 3.0 * std::cos(3.0 * x); });
    for (size_t i = 0; i < d3.v.size(); ++i) CHECK(std::abs(d3.v[i] - want.v[i]) <= 1e-12);
}

TEST_CASE("ddx twice on a pure mode is -k^2 exactly in coefficients") {
    GridPtr g = make_grid(16, 9);
    for (int k : {1, 3, 5}) {
        SpectralField f(g, false);
        for (int j = 0; j < g->ny(); ++j) f.at(g->row_of_k(k), j) = Complex(1.0, 0.0);
        SpectralField d2 = ddx(ddx(f));
        for (int j = 0; j < g->ny(); ++j)
            CHECK(d2.at(g->row_of_k(k), j) == Complex(-double(k) * k, 0.0));
    }
}

TEST_CASE("ddy matches analytic derivatives") {
    GridPtr g = make_grid(8, 32);
    SpectralField y2 = transform_x(g, sample(g, [](double, double y) { return y * y; }));
    NodalField d = inverse_transform_x(ddy(y2));
    for (int m = 0; m < g->nx(); ++m)
        for (int j = 0; j < g->ny(); ++j) CHECK(std::abs(d.at(m, j) - 2.0 * g->y()[j]) <= 1e-11);

    SpectralField poly = transform_x(g, sample(g, [](double, double y) { return y * (1.0 - y); }));
    NodalField dp = inverse_transform_x(ddy(poly));
    for (int m = 0; m < g->nx(); ++m)
        for (int j = 0; j < g->ny(); ++j) CHECK(std::abs(dp.at(m, j) - (1.0 - 2.0 * g->y()[j])) <= 1e-12);

    SpectralField sp = transform_x(g, sample(g, [](double, double y) { return std::sin(PI * y); }));
    NodalField ds = inverse_transform_x(ddy(sp));
    for (int m = 0; m < g->nx(); ++m)
        for (int j = 0; j < g->ny(); ++j)
            CHECK(std::abs(ds.at(m, j) - PI * std::cos(PI * g->y()[j])) <= 1e-9);
}

TEST_CASE("integrate_y: full interval, polynomial, and partial closed forms") {
    GridPtr g = make_grid(8, 24);
    SpectralField one = transform_x(g, sample(g, [](double, double) { return 1.0; }));
    CHECK(std::abs(integrate_y(one, 0.0, 1.0)[g->row_of_k(0)] - 1.0) < 1e-14);

    SpectralField poly = transform_x(g, sample(g, [](double, double y) { return y * (1.0 - y); }));
    CHECK(std::abs(integrate_y(poly, 0.0, 1.0)[g->row_of_k(0)] - 1.0 / 6.0) <= 1e-13);

    SpectralField sp = transform_x(g, sample(g, [](double, double y) { return std::sin(PI * y); }));
    CHECK(std::abs(integrate_y(sp, 0.0, 0.5)[g->row_of_k(0)] - 1.0 / PI) <= 1e-10);

    CHECK_THROWS_AS(integrate_y(one, -0.1, 0.5), ParameterError);
    CHECK_THROWS_AS(integrate_y(one, 0.7, 0.2), ParameterError);
}

TEST_CASE("integrate_y of ddy recovers boundary differences per mode") {
    GridPtr g = make_grid(16, 24);
    NodalField f = sample(g, [](double x, double y) {
        return std::cos(2.0 * x) * std::sin(2.5 * y) + 0.3 * std::exp(y);
    });
    SpectralField fh = transform_x(g, f);
    CVector integral = integrate_y(ddy(fh), 0.0, 1.0);
    for (int ki = 0; ki < g->nx(); ++ki) {
        const Complex want = fh.at(ki, g->ny() - 1) - fh.at(ki, 0);
        CHECK(std::abs(integral[ki] - want) <= 1e-11);
    }
}

TEST_CASE("dealias zeroes exactly the modes beyond the 2/3 cutoff") {
    GridPtr g = make_grid(16, 9);
    CHECK(g->dealias_cutoff() == 5);
    SpectralField f(g, false);
    for (int ki = 0; ki < g->nx(); ++ki) f.at(ki, 0) = Complex(1.0, 1.0);
    SpectralField d = dealias(f);
    for (int ki = 0; ki < g->nx(); ++ki) {
        const int k = g->wavenumber(ki);
        if (std::abs(k) >= 6) CHECK(d.at(ki, 0) == Complex(0.0));
        else CHECK(d.at(ki, 0) == Complex(1.0, 1.0));
    }
    SpectralField z(g);
    CHECK(dealias(z).max_abs() == 0.0);
    // projection property
    CHECK((dealias(d) - d).max_abs() == 0.0);
}

TEST_CASE("nodal product equals exact convolution on retained modes") {
    GridPtr g = make_grid(32, 9);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SpectralField a(g), b(g);
    const int deg = 5;  // both operands resolved: 2*deg stays below nx - kcut
    for (int k = 0; k <= deg; ++k) {
        const Complex za(u(rng), k ? u(rng) : 0.0), zb(u(rng), k ? u(rng) : 0.0);
        for (int j = 0; j < g->ny(); ++j) {
            a.at(g->row_of_k(k), j) = za;
            b.at(g->row_of_k(k), j) = zb;
            if (k) {
                a.at(g->row_of_k(-k), j) = std::conj(za);
                b.at(g->row_of_k(-k), j) = std::conj(zb);
            }
        }
    }
    SpectralField prod = multiply(a, b);
    for (int ki = 0; ki < g->nx(); ++ki) {
        const int k = g->wavenumber(ki);
        Complex conv(0.0);
        for (int l = -deg; l <= deg; ++l) {
            const int kl = k - l;
            if (std::abs(kl) > deg) continue;
            conv += a.at(g->row_of_k(kl), 0) * b.at(g->row_of_k(l), 0);
        }
        if (!g->retained(k)) conv = Complex(0.0);
        CHECK(std::abs(prod.at(ki, 0) - conv) <= 1e-12);
    }
}

TEST_CASE("snapshot file round-trips header and coefficients") {
    GridPtr g = make_grid(8, 12);
    SpectralField f = transform_x(g, random_nodal(g, 3));
    const std::string path = "snapshot_test.hlim";
    snapshot::write(path, f, 0.375);
    auto loaded = snapshot::read(path);
    CHECK(loaded.time == 0.375);
    CHECK(loaded.field.nx() == 8);
    CHECK(loaded.field.ny() == 12);
    CHECK(loaded.field.reality);
    for (size_t i = 0; i < f.c.size(); ++i) CHECK(loaded.field.c[i] == f.c[i]);
    std::remove(path.c_str());
    CHECK_THROWS(snapshot::read("does_not_exist.hlim"));
}

TEST_CASE("transform rejects mismatched nodal sizes") {
    GridPtr g = make_grid(8, 12);
    NodalField f(g);
    f.v.resize(10);
    CHECK_THROWS_AS(transform_x(g, f), DimensionError);
}
