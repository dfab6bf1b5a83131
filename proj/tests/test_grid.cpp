#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spikekit/field_io.hpp"
#include "spikekit/grid.hpp"
#include "oracles.hpp"

using namespace spikekit;
using Catch::Approx;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("laplacian of a constant vanishes and integrates to zero") {
  auto g = Grid::make(Domain::rectangle(1, 1), 16, 16);
  Field f(g, 4.2);
  auto lap = laplacian_neumann(f);
  CHECK(linf_norm(lap) == 0.0);

  auto g1 = Grid::make(Domain::interval(2.0), 64);
  auto h = Field::sample(g1, [](double x, double) {
    return std::sin(3.0 * x) + 0.2 * x * x;
  });
  auto laph = laplacian_neumann(h);
  CHECK(std::fabs(integrate(laph)) <= 1e-12 * linf_norm(h));
}

TEST_CASE("laplacian matches the analytic second derivative") {
  auto g = Grid::make(Domain::interval(1.0), 256);
  auto f = Field::sample(g, [](double x, double) { return std::cos(pi * x); });
  auto lap = laplacian_neumann(f);
  double max_err = 0.0;
  for (int i = 0; i < g.nx; ++i)
    max_err = std::max(max_err,
                       std::fabs(lap(i) + pi * pi * std::cos(pi * g.x(i))));
  CHECK(max_err < 5e-4);

  SECTION("2d separable eigenfunction") {
    auto g2 = Grid::make(Domain::rectangle(1, 1), 256, 256);
    auto f2 = Field::sample(g2, [](double x, double y) {
      return std::cos(pi * x) * std::cos(pi * y);
    });
    auto lap2 = laplacian_neumann(f2);
    double err = 0.0;
    for (int j = 0; j < g2.ny; ++j)
      for (int i = 0; i < g2.nx; ++i)
        err = std::max(err, std::fabs(lap2(i, j) +
                                      2.0 * pi * pi *
                                          std::cos(pi * g2.x(i)) *
                                          std::cos(pi * g2.y(j))));
    CHECK(err < 1e-3);
  }
}

TEST_CASE("laplacian converges at second order on Neumann eigenfunctions") {
  double prev_err = 0.0;
  std::vector<double> errs;
  for (int nx : {64, 128, 256}) {
    auto g = Grid::make(Domain::interval(1.0), nx);
    auto f =
        Field::sample(g, [](double x, double) { return std::cos(2 * pi * x); });
    auto lap = laplacian_neumann(f);
    double err = 0.0;
    for (int i = 0; i < nx; ++i)
      err = std::max(err, std::fabs(lap(i) + 4 * pi * pi *
                                                 std::cos(2 * pi * g.x(i))));
    errs.push_back(err);
    prev_err = err;
  }
  double order1 = std::log2(errs[0] / errs[1]);
  double order2 = std::log2(errs[1] / errs[2]);
  CHECK(order1 >= 1.9);
  CHECK(order2 >= 1.9);
}

TEST_CASE("midpoint quadrature") {
  auto g2 = Grid::make(Domain::rectangle(1, 1), 16, 16);
  CHECK(integrate(Field(g2, 3.0)) == Approx(3.0).epsilon(1e-14));

  auto g = Grid::make(Domain::interval(1.0), 256);
  auto odd = Field::sample(g, [](double x, double) { return std::cos(pi * x); });
  CHECK(std::fabs(integrate(odd)) < 1e-12);

  auto sq = Field::sample(g, [](double x, double) {
    double c = std::cos(pi * x);
    return c * c;
  });
  CHECK(integrate(sq) == Approx(0.5).epsilon(1e-6));
}

TEST_CASE("integrate is linear and positive") {
  auto g = Grid::make(Domain::interval(1.5), 128);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(0.0, 2.0);
  Field a(g), b(g);
  for (auto& x : a.v) x = U(rng);
  for (auto& x : b.v) x = U(rng);
  Field sum(g), scaled(g);
  for (std::size_t k = 0; k < a.v.size(); ++k) {
    sum.v[k] = a.v[k] + b.v[k];
    scaled.v[k] = 2.0 * a.v[k]; // factor 2 is exact in binary
  }
  CHECK(integrate(sum) ==
        Approx(integrate(a) + integrate(b)).epsilon(1e-14));
  CHECK(integrate(scaled) == 2.0 * integrate(a)); // bit-exact
  CHECK(integrate(a) > 0.0);
}

TEST_CASE("h1 norm: constants, analytic value, homogeneity") {
  auto g = Grid::make(Domain::rectangle(2, 1), 32, 16);
  Field k(g, 3.0);
  CHECK(h1_eps_norm(k, 0.5, 0.7) ==
        Approx(std::sqrt(0.7 * 9.0 * 2.0)).epsilon(1e-13));

  auto g1 = Grid::make(Domain::interval(1.0), 256);
  auto f = Field::sample(g1, [](double x, double) { return std::cos(pi * x); });
  CHECK(h1_eps_norm(f, 1.0, 1.0) ==
        Approx(std::sqrt(pi * pi / 2.0 + 0.5)).margin(1e-4));

  Field f2 = f;
  for (auto& x : f2.v) x *= 2.0;
  CHECK(h1_eps_norm(f2, 0.3, 0.9) == Approx(2.0 * h1_eps_norm(f, 0.3, 0.9))
                                         .epsilon(1e-12));

  CHECK_THROWS_AS(h1_eps_norm(f, 1.0, 0.0), validation_error);
}

TEST_CASE("summation by parts ties stencil to face quadrature") {
  std::mt19937 rng(11);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int dim = 1; dim <= 2; ++dim) {
    auto g = dim == 1 ? Grid::make(Domain::interval(1.0), 128)
                      : Grid::make(Domain::rectangle(1.0, 0.8), 32, 24);
    // random smooth-ish fields via a few cosine modes
    auto smooth = [&](unsigned seed) {
      std::mt19937 r2(seed);
      std::uniform_real_distribution<double> A(-1.0, 1.0);
      double a1 = A(r2), a2 = A(r2), a3 = A(r2);
      return Field::sample(g, [=](double x, double y) {
        return a1 * std::cos(pi * x) + a2 * std::cos(2 * pi * x) +
               a3 * std::cos(pi * y) * std::cos(pi * x);
      });
    };
    for (unsigned s = 0; s < 4; ++s) {
      Field f = smooth(100 + s), h = smooth(200 + s);
      auto lap = laplacian_neumann(f);
      std::vector<double> prod(f.size());
      for (std::size_t k = 0; k < f.size(); ++k)
        prod[k] = h.v[k] * lap.v[k];
      double lhs = det_sum(prod.data(), prod.size()) * g.cell_volume();
      // - int grad f . grad h with the same face weights
      double rhs = 0.0;
      if (dim == 1) {
        for (int i = 0; i + 1 < g.nx; ++i)
          rhs -= (f(i + 1) - f(i)) * (h(i + 1) - h(i)) / (g.hx * g.hx) * g.hx;
      } else {
        for (int j = 0; j < g.ny; ++j)
          for (int i = 0; i + 1 < g.nx; ++i)
            rhs -= (f(i + 1, j) - f(i, j)) * (h(i + 1, j) - h(i, j)) /
                   (g.hx * g.hx) * g.hx * g.hy;
        for (int j = 0; j + 1 < g.ny; ++j)
          for (int i = 0; i < g.nx; ++i)
            rhs -= (f(i, j + 1) - f(i, j)) * (h(i, j + 1) - h(i, j)) /
                   (g.hy * g.hy) * g.hx * g.hy;
      }
      double scale = std::max(std::fabs(lhs), std::fabs(rhs));
      CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("field csv round trip") {
  auto g = Grid::make(Domain::rectangle(1.0, 0.5), 8, 8);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-5, 5);
  Field f(g);
  for (auto& x : f.v) x = U(rng);
  std::string path = "roundtrip_test_field.csv";
  write_field_csv(f, path, 1.25, "u");
  auto snap = read_field_csv(path);
  CHECK(snap.t == 1.25);
  CHECK(snap.name == "u");
  REQUIRE(snap.field.grid.same_as(g));
  for (std::size_t k = 0; k < f.v.size(); ++k)
    CHECK(snap.field.v[k] == f.v[k]); // 17 digits: bit-exact
  std::remove(path.c_str());

  SECTION("1d header uses ny=1, Ly=0") {
    auto g1 = Grid::make(Domain::interval(2.0), 16);
    Field f1(g1, 1.0);
    write_field_csv(f1, path, 0.0, "w");
    auto s1 = read_field_csv(path);
    CHECK(s1.field.grid.dom.dim == 1);
    CHECK(s1.field.grid.nx == 16);
    std::remove(path.c_str());
  }
}
